"""Frequency-counting n-gram predictor with suffix backoff."""

from __future__ import annotations

from typing import Iterable, Sequence

from .base import NextActivityPredictor
from .core import (
    STOP,
    Alphabet,
    PredictionDistribution,
    TraceLike,
    check_log,
    check_prefix,
    normalize,
    stop_distribution,
)


def history_of(prefix: Sequence[str], n: int) -> tuple[str, ...]:
    """The state an n-gram model is in after seeing ``prefix``: its last
    ``min(len(prefix), n - 1)`` activities."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return ()
    return tuple(prefix[-(n - 1):])


class NGramPredictor(NextActivityPredictor):
    """Streaming n-gram model over per-case histories.

    States are histories of up to ``n - 1`` activities. Training one event
    increments the observed activity's counter at the current history and
    at every shorter suffix of it, down to the empty history, so the model
    embeds all lower-order tables. Prediction backs off to the longest
    suffix with observations and falls back to a point mass on the stop
    symbol when nothing has been seen at all.

    The alphabet may be shared between models (ensembles do this) so that
    argmax tie-breaking is aligned across members.
    """

    def __init__(self, n: int = 5, alphabet: Alphabet | None = None):
        self.n = n
        self.alphabet = alphabet
        self.reset()

    def reset(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        self.alphabet_ = self.alphabet if self.alphabet is not None else Alphabet()
        # history tuple -> {activity: count}; counts are always >= 1
        self.states_: dict[tuple[str, ...], dict[str, int]] = {}
        self.case_histories_: dict[str, tuple[str, ...]] = {}
        return self

    @property
    def context_length(self) -> int:
        return self.n - 1

    @property
    def model_name(self) -> str:
        return f"{self.n}-gram"

    # -- streaming -------------------------------------------------------

    def learn_event(self, case_id: str, activity: str) -> None:
        self.alphabet_.add(activity)
        h = self.case_histories_.get(case_id, ())
        states = self.states_
        for start in range(len(h) + 1):
            key = h[start:]
            table = states.get(key)
            if table is None:
                states[key] = table = {}
            table[activity] = table.get(activity, 0) + 1
        if activity == STOP:
            self.case_histories_.pop(case_id, None)
        elif self.n > 1:
            self.case_histories_[case_id] = (h + (activity,))[-(self.n - 1):]

    def predict_proba_event(self, case_id: str) -> PredictionDistribution:
        return self._dist_for_history(self.case_histories_.get(case_id, ()))

    # -- stateless -------------------------------------------------------

    def predict_proba_prefix(self, prefix: Sequence[str]) -> PredictionDistribution:
        return self._dist_for_history(history_of(check_prefix(prefix), self.n))

    def _dist_for_history(self, h: tuple[str, ...]) -> PredictionDistribution:
        states = self.states_
        for start in range(len(h) + 1):
            table = states.get(h[start:])
            if table:
                return normalize(table, self.alphabet_)
        return stop_distribution(self.alphabet_)

    # -- batch -------------------------------------------------------------

    def partial_fit(self, X: Iterable[TraceLike], y=None):
        """Offline counterpart of the streaming updates.

        Counts each trace by direct slicing instead of per-case cursors;
        the resulting counter tables are identical to streaming the same
        traces event by event.
        """
        nm1 = self.n - 1
        states = self.states_
        add = self.alphabet_.add
        for trace in check_log(X):
            acts = trace.activities
            for j, activity in enumerate(acts):
                add(activity)
                lo = j - nm1 if j > nm1 else 0
                for start in range(lo, j + 1):
                    key = acts[start:j]
                    table = states.get(key)
                    if table is None:
                        states[key] = table = {}
                    table[activity] = table.get(activity, 0) + 1
        return self

    # -- introspection -----------------------------------------------------

    def n_states(self) -> int:
        return len(self.states_)

    def snapshot(self) -> dict:
        """Plain-dict view of the counter tables, for debugging and golden
        tests. Histories are space-joined; the empty history is ''."""
        return {
            "n": self.n,
            "states": {
                " ".join(h): dict(t) for h, t in sorted(self.states_.items())
            },
        }
