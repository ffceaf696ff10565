"""Shared vocabulary for event streams: alphabets, traces, distributions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

STOP = "__STOP__"


class Alphabet:
    """Activity vocabulary in first-seen order.

    The stop symbol is always present at index 0; real activities get
    consecutive indices as they are first observed. Indices never change
    once assigned, which keeps argmax tie-breaking reproducible across
    runs and file orderings. Append-only, single writer.
    """

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Iterable[str] = ()):
        self.symbols: list[str] = [STOP]
        self._index: dict[str, int] = {STOP: 0}
        for s in symbols:
            self.add(s)

    def add(self, symbol: str) -> int:
        """Insert a symbol if unseen; return its index either way."""
        idx = self._index.get(symbol)
        if idx is None:
            idx = len(self.symbols)
            self.symbols.append(symbol)
            self._index[symbol] = idx
        return idx

    def index(self, symbol: str) -> int:
        return self._index[symbol]

    @property
    def stop_index(self) -> int:
        return 0

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __repr__(self) -> str:
        shown = ", ".join(repr(s) for s in self.symbols[:6])
        if len(self.symbols) > 6:
            shown += f", ... {len(self.symbols)} total"
        return f"Alphabet([{shown}])"


class PredictionDistribution:
    """A probability distribution over activities, stop included.

    argmax ties are broken by the lowest alphabet insertion index, so the
    predicted activity never depends on dict ordering.
    """

    __slots__ = ("probs", "alphabet")

    def __init__(self, probs: Mapping[str, float], alphabet: Alphabet):
        self.probs = dict(probs)
        self.alphabet = alphabet

    def argmax(self) -> str:
        if not self.probs:
            raise ValueError("empty distribution")
        index = self.alphabet.index
        best = None
        best_p = -1.0
        best_i = -1
        for symbol, p in self.probs.items():
            i = index(symbol)
            if p > best_p or (p == best_p and i < best_i):
                best, best_p, best_i = symbol, p, i
        return best

    def get(self, symbol: str, default: float = 0.0) -> float:
        return self.probs.get(symbol, default)

    def items(self):
        return self.probs.items()

    def validate(self, tol: float = 1e-9) -> None:
        """Raise if this is not a probability distribution over the alphabet."""
        total = 0.0
        for symbol, p in self.probs.items():
            if symbol not in self.alphabet:
                raise ValueError(f"symbol {symbol!r} not in alphabet")
            if not (-tol <= p <= 1.0 + tol):
                raise ValueError(f"probability out of range for {symbol!r}: {p}")
            total += p
        if abs(total - 1.0) > tol:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def __getitem__(self, symbol: str) -> float:
        return self.probs[symbol]

    def __len__(self) -> int:
        return len(self.probs)

    def __eq__(self, other) -> bool:
        if isinstance(other, PredictionDistribution):
            return self.probs == other.probs
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"{s!r}: {p:.4f}" for s, p in self.probs.items())
        return f"PredictionDistribution({{{inner}}})"


def normalize(counts: Mapping[str, Union[int, float]], alphabet: Alphabet) -> PredictionDistribution:
    """Turn nonnegative counts into a distribution. All-zero counts are an error."""
    total = 0
    for c in counts.values():
        if c < 0:
            raise ValueError(f"negative count: {c}")
        total += c
    if total <= 0:
        raise ValueError("no observations")
    return PredictionDistribution(
        {a: c / total for a, c in counts.items() if c > 0}, alphabet
    )


def stop_distribution(alphabet: Alphabet) -> PredictionDistribution:
    """Point mass on the stop symbol; the prediction of an untrained model."""
    return PredictionDistribution({STOP: 1.0}, alphabet)


def argmax_activity(dist: PredictionDistribution) -> str:
    """Most likely activity; ties go to the lowest alphabet index."""
    return dist.argmax()


@dataclass(frozen=True)
class CaseTrace:
    """One complete case: its activities, ending with the stop symbol."""

    case_id: str
    activities: tuple[str, ...]

    def __post_init__(self):
        if not self.activities:
            raise ValueError(f"case {self.case_id!r}: empty trace")
        if self.activities[-1] != STOP:
            raise ValueError(f"case {self.case_id!r}: trace must end with the stop symbol")
        if STOP in self.activities[:-1]:
            raise ValueError(f"case {self.case_id!r}: stop symbol inside the trace")

    @property
    def body(self) -> tuple[str, ...]:
        """Activities without the final stop."""
        return self.activities[:-1]

    def __len__(self) -> int:
        return len(self.activities)


@dataclass(frozen=True)
class EventRecord:
    """One streamed event: a (case, activity) pair plus its arrival index."""

    case_id: str
    activity: str
    seq_no: int


TraceLike = Union[CaseTrace, Sequence[str]]


def as_case_trace(trace: TraceLike, case_id: str = "case") -> CaseTrace:
    """Coerce a CaseTrace or plain activity sequence into a CaseTrace.

    Plain sequences may omit the trailing stop symbol; it is appended.
    """
    if isinstance(trace, CaseTrace):
        return trace
    activities = tuple(trace)
    if not activities or activities[-1] != STOP:
        activities = activities + (STOP,)
    return CaseTrace(case_id, activities)


def check_log(traces: Iterable[TraceLike]) -> list[CaseTrace]:
    """Validate a batch of traces; synthesizes ids for plain sequences."""
    out: list[CaseTrace] = []
    seen: set[str] = set()
    for i, t in enumerate(traces):
        ct = as_case_trace(t, case_id=f"case_{i}")
        if ct.case_id in seen:
            raise ValueError(f"duplicate case id {ct.case_id!r}")
        seen.add(ct.case_id)
        out.append(ct)
    return out


def check_prefix(prefix: Sequence[str]) -> tuple[str, ...]:
    """Validate an activity prefix used for stateless prediction."""
    p = tuple(prefix)
    if STOP in p:
        raise ValueError("prefix must not contain the stop symbol")
    return p
