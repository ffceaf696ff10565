import fs from "node:fs";
import path from "node:path";
import Papa from "papaparse";

import { STOP, Vocabulary } from "./vocab.js";

/** One case of an event log; activities never contain the stop marker. */
export interface CaseData {
  caseId: string;
  activities: string[];
}

export class LogFormatError extends Error {}

interface Row {
  caseId: string;
  activity: string;
}

/** Group rows into cases, preserving first-appearance order of case ids.
    An explicit stop row closes its case; later rows for it are an error. */
function assemble(rows: Row[], source: string): CaseData[] {
  const order: string[] = [];
  const byCase = new Map<string, string[]>();
  const closed = new Set<string>();
  for (const { caseId, activity } of rows) {
    if (closed.has(caseId)) {
      throw new LogFormatError(
        `${source}: case '${caseId}' has events after its stop marker (stop symbol mid-case)`);
    }
    if (activity === STOP) {
      if (!byCase.has(caseId)) {
        throw new LogFormatError(`${source}: case '${caseId}' is empty (stop with no events)`);
      }
      closed.add(caseId);
      continue;
    }
    let acts = byCase.get(caseId);
    if (acts === undefined) {
      acts = [];
      byCase.set(caseId, acts);
      order.push(caseId);
    }
    acts.push(activity);
  }
  if (order.length === 0) {
    throw new LogFormatError(`${source}: no events`);
  }
  return order.map((caseId) => ({ caseId, activities: byCase.get(caseId)! }));
}

/** Read a case_id,activity CSV. Extra columns are ignored. */
export function readCsv(filePath: string): CaseData[] {
  const text = fs.readFileSync(filePath, "utf-8");
  if (text.trim() === "") {
    throw new LogFormatError(`${filePath}: empty file`);
  }
  const parsed = Papa.parse<string[]>(text.trim(), { delimiter: ",", skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new LogFormatError(`${filePath}: ${e.message} (row ${e.row})`);
  }
  const rows = parsed.data;
  const header = rows[0];
  if (header.length < 2 || header[0] !== "case_id" || header[1] !== "activity") {
    throw new LogFormatError(
      `${filePath}: missing 'case_id,activity' header, got [${header.map((h) => `'${h}'`).join(", ")}]`);
  }
  const events: Row[] = [];
  for (let i = 1; i < rows.length; i++) {
    const row = rows[i];
    if (row.length < 2) {
      throw new LogFormatError(`${filePath}: row ${i + 1} has ${row.length} fields, want 2`);
    }
    events.push({ caseId: row[0], activity: row[1] });
  }
  return assemble(events, filePath);
}

/** Read a JSONL log: one {"case_id": ..., "activity": ...} object per line. */
export function readJsonl(filePath: string): CaseData[] {
  const text = fs.readFileSync(filePath, "utf-8");
  const lines = text.split("\n").filter((l) => l.trim() !== "");
  if (lines.length === 0) {
    throw new LogFormatError(`${filePath}: empty file`);
  }
  const events: Row[] = [];
  lines.forEach((line, i) => {
    let obj: unknown;
    try {
      obj = JSON.parse(line);
    } catch {
      throw new LogFormatError(`${filePath}: line ${i + 1} is not valid JSON`);
    }
    const rec = obj as Record<string, unknown>;
    if (typeof rec.case_id !== "string" || typeof rec.activity !== "string") {
      throw new LogFormatError(
        `${filePath}: line ${i + 1} needs string 'case_id' and 'activity' fields`);
    }
    events.push({ caseId: rec.case_id, activity: rec.activity });
  });
  return assemble(events, filePath);
}

/** Dispatch on file extension (.csv or .jsonl). */
export function loadLog(filePath: string): CaseData[] {
  const ext = path.extname(filePath).toLowerCase();
  if (ext === ".csv") return readCsv(filePath);
  if (ext === ".jsonl") return readJsonl(filePath);
  throw new LogFormatError(`${filePath}: unsupported extension '${ext}', want .csv or .jsonl`);
}

/** Vocabulary over a whole log, stop at id 0, activities in first-seen order. */
export function vocabOf(cases: CaseData[]): Vocabulary {
  const vocab = new Vocabulary();
  for (const c of cases) for (const a of c.activities) vocab.add(a);
  return vocab;
}

/** Case ids -> token id sequences (stop not included). */
export function encodeCases(cases: CaseData[], vocab: Vocabulary): number[][] {
  return cases.map((c) => c.activities.map((a) => {
    const id = vocab.idOf(a);
    // unseen activities cannot happen with vocabOf over the same log
    if (id === undefined) throw new LogFormatError(`unknown activity '${a}'`);
    return id;
  }));
}

/**
 * Case counts (train, val, test) for an in-order split; every part gets
 * at least one case. Fewer than 3 cases is an error.
 *
 * Must stay numerically identical to the reference evaluator's split so
 * reports over the same log are comparable.
 */
export function splitCases(n: number, trainFrac = 0.70, valFrac = 0.15): [number, number, number] {
  if (n < 3) {
    throw new RangeError(`need at least 3 cases to split, got ${n}`);
  }
  if (trainFrac <= 0 || valFrac < 0 || trainFrac + valFrac >= 1) {
    throw new RangeError(`bad split fractions (${trainFrac}, ${valFrac})`);
  }
  let nTrain = Math.max(1, Math.trunc(n * trainFrac));
  let nVal = Math.max(1, Math.trunc(n * valFrac));
  while (n - nTrain - nVal < 1) {
    if (nTrain > 1) nTrain -= 1;
    else nVal -= 1;
  }
  return [nTrain, nVal, n - nTrain - nVal];
}
