"""Estimator base class shared by the n-gram predictor and the ensembles."""

from __future__ import annotations

from typing import Iterable, Sequence

from sklearn.base import BaseEstimator

from .core import PredictionDistribution, TraceLike, check_log, check_prefix


class NextActivityPredictor(BaseEstimator):
    """Common API for streaming next-activity predictors.

    Streaming protocol (one writer per instance): for each arriving event,
    call ``predict_event(case_id)`` or ``predict_proba_event(case_id)``
    first, then ``learn_event(case_id, activity)``. Per-case cursors are
    kept internally and discarded when a case's stop symbol is learned.

    The sklearn-style batch calls wrap the same model for offline use:
    ``fit`` consumes whole traces, ``predict`` maps activity prefixes to
    the most likely next activity. ``get_params``/``set_params``/``clone``
    come from :class:`sklearn.base.BaseEstimator`.
    """

    # -- streaming API -------------------------------------------------

    def predict_proba_event(self, case_id: str) -> PredictionDistribution:
        """Distribution over the next activity of ``case_id``."""
        raise NotImplementedError

    def predict_event(self, case_id: str) -> str:
        """Most likely next activity of ``case_id``."""
        return self.predict_proba_event(case_id).argmax()

    def learn_event(self, case_id: str, activity: str) -> None:
        """Consume one observed event and update the model."""
        raise NotImplementedError

    def reset(self):
        """Drop all learned state; returns self."""
        raise NotImplementedError

    # -- stateless prediction ------------------------------------------

    def predict_proba_prefix(self, prefix: Sequence[str]) -> PredictionDistribution:
        """Distribution over the next activity after ``prefix``, without
        touching any case cursor. Only the last ``context_length``
        activities of the prefix matter."""
        raise NotImplementedError

    def predict_prefix(self, prefix: Sequence[str]) -> str:
        return self.predict_proba_prefix(prefix).argmax()

    @property
    def context_length(self) -> int:
        """Longest history the model can condition on."""
        raise NotImplementedError

    @property
    def model_name(self) -> str:
        return type(self).__name__

    # -- sklearn-style batch API ---------------------------------------

    def fit(self, X: Iterable[TraceLike], y=None):
        """Train from scratch on complete traces."""
        self.reset()
        return self.partial_fit(X)

    def partial_fit(self, X: Iterable[TraceLike], y=None):
        """Train on complete traces without resetting first."""
        for trace in check_log(X):
            for activity in trace.activities:
                self.learn_event(trace.case_id, activity)
        return self

    def predict(self, X: Iterable[Sequence[str]]) -> list[str]:
        """Most likely next activity for each prefix in ``X``."""
        return [self.predict_proba_prefix(check_prefix(p)).argmax() for p in X]

    def predict_proba(self, X: Iterable[Sequence[str]]) -> list[PredictionDistribution]:
        """Next-activity distribution for each prefix in ``X``."""
        return [self.predict_proba_prefix(check_prefix(p)) for p in X]
