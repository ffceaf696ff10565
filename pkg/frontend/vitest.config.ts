import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // neural training tests are CPU-bound; acceptance sets its own per-test timeout
    testTimeout: 120_000,
    hookTimeout: 120_000,
    pool: "forks",
  },
});
