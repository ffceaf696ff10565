"""Best achievable next-activity accuracy for the synthetic patterns.

A predictor watching a pattern stream sees a window of recent activities
but not the block phase. The exact method enumerates every (phase, word
choice) combination, aggregates the next-symbol mass per visible window
content, and sums the best guess per content; this is the asymptotic
(stop-free) accuracy of the optimal window-limited predictor. The
empirical method estimates the same quantity from a generated stream by
fitting per-context majority votes on one half and scoring the other.
"""

from __future__ import annotations

import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Optional

from scipy.stats import t as student_t

from .generators import PatternSpec


class ExactEnumerationTooLarge(ValueError):
    """The (phase, word) context space exceeds the enumeration budget."""


@dataclass(frozen=True)
class OracleEstimate:
    """A best-accuracy value with its 95% confidence interval.

    Exact values carry a degenerate interval (low == high == value).
    """

    value: float
    ci_low: float
    ci_high: float
    method: str

    def __contains__(self, x: float) -> bool:
        return self.ci_low <= x <= self.ci_high


def exact_best_accuracy(spec: PatternSpec, window: int,
                        max_enumeration: int = 2_000_000) -> float:
    """Optimal accuracy with a visible window of ``window`` activities.

    Exact rational arithmetic over the full (phase, word choices)
    enumeration; raises :class:`ExactEnumerationTooLarge` when the
    enumeration would exceed ``max_enumeration`` combinations, in which
    case use ``method='empirical'`` instead.
    """
    if window < 0:
        raise ValueError(f"window must be >= 0, got {window}")
    words = spec.dictionary
    block = spec.block_length
    k = len(words)

    combos = 0
    for offset in range(1, block + 1):
        reach_back = max(0, window - offset)
        q = -(-reach_back // block)
        combos += k ** (q + 1)
        if combos > max_enumeration:
            raise ExactEnumerationTooLarge(
                f"window {window} on pattern {spec.name!r} needs more than "
                f"{max_enumeration} combinations; use method='empirical'")

    first_letters = Counter(w[0] for w in words)
    mass: dict[str, dict[str, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
    for offset in range(1, block + 1):
        reach_back = max(0, window - offset)
        q = -(-reach_back // block)
        weight = Fraction(1, block * k ** (q + 1))
        for combo in product(words, repeat=q + 1):
            seen = "".join(combo[:q]) + combo[q][:offset]
            context = seen[len(seen) - window:] if window else ""
            if offset < block:
                mass[context][combo[q][offset]] += weight
            else:
                for letter, count in first_letters.items():
                    mass[context][letter] += weight * Fraction(count, k)

    total = sum(max(nexts.values()) for nexts in mass.values())
    return float(total)


def ceiling_accuracy(spec: PatternSpec) -> float:
    """Optimal accuracy with unbounded history (full knowledge of the
    current block's prefix), i.e. the plateau of the window curve."""
    words = spec.dictionary
    block = spec.block_length
    k = len(words)
    total = Fraction(0)
    for offset in range(1, block + 1):
        if offset == block:
            total += Fraction(max(Counter(w[0] for w in words).values()), k)
        else:
            groups: dict[str, Counter] = defaultdict(Counter)
            for w in words:
                groups[w[:offset]][w[offset]] += 1
            total += sum(Fraction(max(g.values()), k) for g in groups.values())
    return float(total / block)


def empirical_best_accuracy(spec: PatternSpec, window: int,
                            sample_budget: int = 200_000,
                            seed: int = 0,
                            n_batches: int = 40,
                            confidence: float = 0.95) -> tuple[float, float, float]:
    """Estimate of the optimal window-limited accuracy, with a confidence
    interval: (estimate, ci_low, ci_high).

    Fits per-context majority votes on the first half of one long
    generated stream and scores them on the second half. The interval
    comes from the Student-t spread of contiguous batch means, not a
    binomial formula: outcomes within a block are strongly dependent, so
    an independence-based interval would be too narrow. When checking many
    windows at once, pass a Bonferroni-adjusted ``confidence`` so the
    joint statement still holds at the intended level.
    """
    if window < 0:
        raise ValueError(f"window must be >= 0, got {window}")
    if sample_budget < 4:
        raise ValueError(f"sample_budget must be >= 4, got {sample_budget}")
    if n_batches < 2:
        raise ValueError(f"n_batches must be >= 2, got {n_batches}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must be in (0, 1), got {confidence}")
    words = spec.dictionary
    rng = random.Random(f"oracle:{seed}")
    parts: list[str] = []
    size = 0
    while size < sample_budget:
        w = words[rng.randrange(len(words))]
        parts.append(w)
        size += len(w)
    stream = "".join(parts)[:sample_budget]
    mid = len(stream) // 2

    counts: dict[str, Counter] = defaultdict(Counter)
    global_counts: Counter = Counter()
    for p in range(window, mid):
        counts[stream[p - window:p]][stream[p]] += 1
        global_counts[stream[p]] += 1

    fallback = min(global_counts, key=lambda s: (-global_counts[s], s))
    best = {ctx: min(c, key=lambda s: (-c[s], s)) for ctx, c in counts.items()}

    start = max(mid, window)
    total = len(stream) - start
    if total < 2:
        raise ValueError(f"sample_budget {sample_budget} leaves nothing to score")
    m = min(n_batches, total)
    batch_hits = [0] * m
    batch_n = [0] * m
    for idx, p in enumerate(range(start, len(stream))):
        b = idx * m // total
        guess = best.get(stream[p - window:p], fallback)
        batch_hits[b] += guess == stream[p]
        batch_n[b] += 1
    rate = sum(batch_hits) / total
    means = [h / c for h, c in zip(batch_hits, batch_n)]
    center = sum(means) / m
    var = sum((x - center) ** 2 for x in means) / (m - 1)
    half = float(student_t.ppf(0.5 + confidence / 2, m - 1)) * math.sqrt(var / m)
    return rate, rate - half, rate + half


def best_accuracy(spec: PatternSpec, window: int, method: str = "exact",
                  sample_budget: int = 200_000, seed: int = 0,
                  max_enumeration: int = 2_000_000,
                  confidence: float = 0.95) -> OracleEstimate:
    """Front door for both methods; returns value plus confidence interval."""
    if method == "exact":
        v = exact_best_accuracy(spec, window, max_enumeration=max_enumeration)
        return OracleEstimate(v, v, v, "exact")
    if method == "empirical":
        v, lo, hi = empirical_best_accuracy(spec, window, sample_budget, seed,
                                            confidence=confidence)
        return OracleEstimate(v, lo, hi, "empirical")
    raise ValueError(f"method must be 'exact' or 'empirical', got {method!r}")


def plateau_fix(curve: Mapping[int, float], ceiling: Optional[float] = None,
                tol: float = 1e-9) -> dict[int, float]:
    """Carry the curve's value forward once it reaches its ceiling.

    Finite samples make measured accuracy wobble after the curve has
    plateaued; this clamps every window after the first one that reaches
    the ceiling (default: the curve's maximum) to that reached value.
    Windows must be contiguous from 0.
    """
    if not curve:
        raise ValueError("empty curve")
    windows = sorted(curve)
    if windows != list(range(len(windows))):
        raise ValueError(f"windows must be contiguous from 0, got {windows}")
    cap = max(curve.values()) if ceiling is None else ceiling
    fixed: dict[int, float] = {}
    reached: Optional[float] = None
    for w in windows:
        if reached is None and curve[w] >= cap - tol:
            reached = curve[w]
        fixed[w] = curve[w] if reached is None else reached
    return fixed
