"""Ensembles over n-gram agents: soft voting, adaptive voting, promotion."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .base import NextActivityPredictor
from .core import Alphabet, PredictionDistribution, check_prefix
from .ngram import NGramPredictor

SOFT_DEFAULT_ORDERS = (3, 4, 5, 6)
PROMOTION_DEFAULT_ORDERS = (3, 5, 7, 9, 13, 17, 25, 33)
DEFAULT_TAU = 20


@dataclass
class RunningAccuracy:
    """Prequential hit rate; an empty record reads as 0.0."""

    correct: int = 0
    total: int = 0

    @property
    def value(self) -> float:
        return self.correct / self.total if self.total else 0.0

    def update(self, hit: bool) -> None:
        self.total += 1
        self.correct += bool(hit)

    def reset(self) -> None:
        self.correct = 0
        self.total = 0


def soft_vote(dists: Sequence[PredictionDistribution]) -> PredictionDistribution:
    """Unweighted arithmetic mean of member distributions."""
    if not dists:
        raise ValueError("no distributions to vote over")
    merged: dict[str, float] = {}
    for d in dists:
        for a, p in d.probs.items():
            merged[a] = merged.get(a, 0.0) + p
    k = len(dists)
    return PredictionDistribution({a: p / k for a, p in merged.items()}, dists[0].alphabet)


def select_most_accurate(accuracies: Sequence[RunningAccuracy]) -> int:
    """Index of the best running accuracy; ties go to the lowest index."""
    if not accuracies:
        raise ValueError("no accuracies to select from")
    best = 0
    for j in range(1, len(accuracies)):
        if accuracies[j].value > accuracies[best].value:
            best = j
    return best


class PromotionState:
    """Ladder state machine for the two-model promotion scheme.

    The model at ``active_index`` produces the output; the next one up is
    the challenger. When the challenger's running accuracy strictly
    exceeds the active model's for ``tau`` confirmations, the challenger
    becomes active, the confirmation counter clears, and the newly active
    model's accuracy record restarts so the next comparison is fair. The
    index never moves back down.

    ``confirmation="consecutive"`` clears the counter whenever the strict
    inequality fails; ``"cumulative"`` keeps it across failures.
    """

    def __init__(self, n_models: int, tau: int = DEFAULT_TAU,
                 confirmation: str = "consecutive"):
        if n_models < 1:
            raise ValueError(f"n_models must be >= 1, got {n_models}")
        if tau < 1:
            raise ValueError(f"tau must be >= 1, got {tau}")
        if confirmation not in ("consecutive", "cumulative"):
            raise ValueError(
                f"confirmation must be 'consecutive' or 'cumulative', got {confirmation!r}")
        self.n_models = n_models
        self.tau = tau
        self.confirmation = confirmation
        self.active_index = 0
        self.counter = 0
        self.accuracies = [RunningAccuracy() for _ in range(n_models)]

    @property
    def challenger_index(self) -> Optional[int]:
        j = self.active_index + 1
        return j if j < self.n_models else None

    def step(self, active_prediction: str, challenger_prediction: Optional[str],
             observed: str) -> bool:
        """Score one observed activity; return True when a promotion fires."""
        i = self.active_index
        j = self.challenger_index
        if (challenger_prediction is None) != (j is None):
            raise ValueError("challenger prediction must be given exactly when a challenger exists")
        self.accuracies[i].update(active_prediction == observed)
        if j is None:
            return False
        self.accuracies[j].update(challenger_prediction == observed)
        if self.accuracies[j].value > self.accuracies[i].value:
            self.counter += 1
            if self.counter >= self.tau:
                self.active_index = j
                self.counter = 0
                self.accuracies[j].reset()
                return True
        elif self.confirmation == "consecutive":
            self.counter = 0
        return False


def _checked_orders(window_sizes) -> tuple[int, ...]:
    orders = tuple(window_sizes)
    if not orders:
        raise ValueError("window_sizes must not be empty")
    for s in orders:
        if not isinstance(s, int) or isinstance(s, bool) or s < 1:
            raise ValueError(f"window sizes must be positive integers, got {s!r}")
    if any(a >= b for a, b in zip(orders, orders[1:])):
        raise ValueError(f"window sizes must be strictly increasing, got {orders}")
    return orders


class _NGramEnsemble(NextActivityPredictor):
    """Shared plumbing: a ladder of n-gram members over one alphabet.

    ``window_sizes`` are the member n-gram orders; a member of order s
    conditions on up to s - 1 previous activities.
    """

    def __init__(self, window_sizes):
        self.window_sizes = window_sizes
        self.reset()

    def reset(self):
        orders = _checked_orders(self.window_sizes)
        self.alphabet_ = Alphabet()
        self.members_ = [NGramPredictor(n=s, alphabet=self.alphabet_) for s in orders]
        return self

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(m.n for m in self.members_)

    @property
    def context_length(self) -> int:
        return self.members_[-1].n - 1


class SoftVotingEnsemble(_NGramEnsemble):
    """Averages all member distributions and predicts the argmax of the mean."""

    def __init__(self, window_sizes=SOFT_DEFAULT_ORDERS):
        super().__init__(window_sizes)

    @property
    def model_name(self) -> str:
        return "soft(" + ",".join(map(str, self.orders)) + ")"

    def predict_proba_event(self, case_id: str) -> PredictionDistribution:
        return soft_vote([m.predict_proba_event(case_id) for m in self.members_])

    def predict_proba_prefix(self, prefix: Sequence[str]) -> PredictionDistribution:
        p = check_prefix(prefix)
        return soft_vote([m.predict_proba_prefix(p) for m in self.members_])

    def learn_event(self, case_id: str, activity: str) -> None:
        for m in self.members_:
            m.learn_event(case_id, activity)


class AdaptiveVotingEnsemble(_NGramEnsemble):
    """Predicts with the member whose running accuracy is currently best.

    Every member is trained and scored on every event; only the selected
    member's distribution is emitted. Selection ties go to the lowest
    member index.
    """

    def __init__(self, window_sizes=SOFT_DEFAULT_ORDERS):
        super().__init__(window_sizes)

    def reset(self):
        super().reset()
        self.accuracies_ = [RunningAccuracy() for _ in self.members_]
        return self

    @property
    def model_name(self) -> str:
        return "adaptive(" + ",".join(map(str, self.orders)) + ")"

    @property
    def selected_index(self) -> int:
        return select_most_accurate(self.accuracies_)

    def predict_proba_event(self, case_id: str) -> PredictionDistribution:
        return self.members_[self.selected_index].predict_proba_event(case_id)

    def predict_proba_prefix(self, prefix: Sequence[str]) -> PredictionDistribution:
        return self.members_[self.selected_index].predict_proba_prefix(check_prefix(prefix))

    def learn_event(self, case_id: str, activity: str) -> None:
        for acc, m in zip(self.accuracies_, self.members_):
            acc.update(m.predict_event(case_id) == activity)
            m.learn_event(case_id, activity)


class PromotionEnsemble(_NGramEnsemble):
    """Runs the ladder with only two live members: the active model and
    its challenger. Both are trained and scored per event; all higher
    members stay untouched (and cold) until they become the challenger.
    Output always comes from the active model alone.
    """

    def __init__(self, window_sizes=PROMOTION_DEFAULT_ORDERS, tau: int = DEFAULT_TAU,
                 confirmation: str = "consecutive"):
        self.tau = tau
        self.confirmation = confirmation
        super().__init__(window_sizes)

    def reset(self):
        super().reset()
        self.state_ = PromotionState(len(self.members_), self.tau, self.confirmation)
        return self

    @property
    def model_name(self) -> str:
        return "promotion(" + ",".join(map(str, self.orders)) + f",tau={self.tau})"

    @property
    def active_member(self) -> NGramPredictor:
        return self.members_[self.state_.active_index]

    def predict_proba_event(self, case_id: str) -> PredictionDistribution:
        return self.active_member.predict_proba_event(case_id)

    def predict_proba_prefix(self, prefix: Sequence[str]) -> PredictionDistribution:
        return self.active_member.predict_proba_prefix(check_prefix(prefix))

    def learn_event(self, case_id: str, activity: str) -> None:
        st = self.state_
        active = self.members_[st.active_index]
        j = st.challenger_index
        active_pred = active.predict_event(case_id)
        challenger_pred = None
        if j is not None:
            challenger = self.members_[j]
            challenger_pred = challenger.predict_event(case_id)
            challenger.learn_event(case_id, activity)
        active.learn_event(case_id, activity)
        st.step(active_pred, challenger_pred, activity)
