"""Synthetic periodic event logs built from small word dictionaries."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import STOP, CaseTrace

BUILTIN_PATTERNS: dict[str, tuple[str, ...]] = {
    "aaabbb": ("AAABBB",),
    "aaabb": ("AAABB",),
    "xxbarx": ("AAB", "BBA"),
    "xaxb": ("AAAB", "BABB"),
    "xabxba": ("AABABA", "BABBBA"),
}


@dataclass(frozen=True)
class PatternSpec:
    """A repetition pattern: cases are prefixes of random concatenations of
    equal-length dictionary words, closed by the stop symbol. Each word
    character is one activity."""

    name: str
    dictionary: tuple[str, ...]

    def __post_init__(self):
        words = self.dictionary
        if not words:
            raise ValueError("dictionary must not be empty")
        if len(set(words)) != len(words):
            raise ValueError(f"duplicate words in dictionary: {words}")
        lengths = {len(w) for w in words}
        if lengths == {0} or len(lengths) != 1:
            raise ValueError(f"words must be nonempty and equal-length, got {words}")

    @property
    def block_length(self) -> int:
        return len(self.dictionary[0])

    @property
    def deterministic(self) -> bool:
        return len(self.dictionary) == 1

    @property
    def symbols(self) -> tuple[str, ...]:
        """Distinct activities, in order of first appearance across words."""
        seen: dict[str, None] = {}
        for w in self.dictionary:
            for ch in w:
                seen.setdefault(ch, None)
        return tuple(seen)


def builtin_pattern(name: str) -> PatternSpec:
    try:
        words = BUILTIN_PATTERNS[name]
    except KeyError:
        valid = ", ".join(sorted(BUILTIN_PATTERNS))
        raise ValueError(f"unknown pattern {name!r}; valid names: {valid}") from None
    return PatternSpec(name, words)


@dataclass(frozen=True)
class GenConfig:
    """How many cases to draw, how long each is (stop excluded), and the seed."""

    n_cases: int
    case_length: int
    seed: int = 0

    def __post_init__(self):
        if self.n_cases < 1:
            raise ValueError(f"n_cases must be >= 1, got {self.n_cases}")
        if self.case_length < 1:
            raise ValueError(f"case_length must be >= 1, got {self.case_length}")


def case_rng(seed: int, case_index: int) -> random.Random:
    """Per-case generator derived from (seed, index), so any prefix of the
    case list is reproducible independently of the total case count."""
    return random.Random(f"{seed}:{case_index}")


def generate_case(spec: PatternSpec, length: int, rng: random.Random,
                  case_id: str = "case_0") -> CaseTrace:
    """One case: uniform iid word draws, concatenated, truncated to exactly
    ``length`` activities, then the stop symbol."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    words = spec.dictionary
    k = len(words)
    out: list[str] = []
    while len(out) < length:
        out.extend(words[rng.randrange(k)])
    del out[length:]
    out.append(STOP)
    return CaseTrace(case_id, tuple(out))


def generate_log(spec: PatternSpec, config: GenConfig) -> list[CaseTrace]:
    """A full synthetic log. The first m cases of a log equal the log
    generated with n_cases=m and the same seed."""
    return [
        generate_case(spec, config.case_length, case_rng(config.seed, i),
                      case_id=f"case_{i}")
        for i in range(config.n_cases)
    ]
