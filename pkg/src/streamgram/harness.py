"""Streaming evaluation: prequential protocol, train/test splits, latency."""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .base import NextActivityPredictor
from .core import STOP, CaseTrace, EventRecord, TraceLike, check_log

CSV_FIELDS = (
    "model_name", "dataset_name", "n_events", "n_correct", "accuracy",
    "pred_us_mean", "pred_us_p50", "pred_us_p99",
    "train_us_mean", "train_us_p50", "train_us_p99",
)


@dataclass
class EvalReport:
    """One evaluation run: counts, accuracy in percent, latency in
    microseconds (mean / median / 99th percentile), and the model config."""

    model_name: str
    dataset_name: str
    n_events: int
    n_correct: int
    accuracy: float
    pred_us_mean: float
    pred_us_p50: float
    pred_us_p99: float
    train_us_mean: float
    train_us_p50: float
    train_us_p99: float
    config: dict = field(default_factory=dict)

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(asdict(self), indent=indent, sort_keys=True, default=str)

    @staticmethod
    def csv_header() -> str:
        return ",".join(CSV_FIELDS)

    def to_csv_row(self) -> str:
        d = asdict(self)
        return ",".join(str(d[f]) for f in CSV_FIELDS)

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        return cls(**json.loads(text))


def _latency_summary(samples_ns: list[int]) -> tuple[float, float, float]:
    if not samples_ns:
        return 0.0, 0.0, 0.0
    arr = np.asarray(samples_ns, dtype=np.float64) / 1000.0
    return float(arr.mean()), float(np.percentile(arr, 50)), float(np.percentile(arr, 99))


def stream_from_log(log: Iterable[TraceLike]) -> list[EventRecord]:
    """Flatten traces into one stream, whole cases back to back."""
    out: list[EventRecord] = []
    for trace in check_log(log):
        for a in trace.activities:
            out.append(EventRecord(trace.case_id, a, len(out)))
    return out


def interleave(log: Iterable[TraceLike], seed: Optional[int] = None,
               mode: str = "random") -> list[EventRecord]:
    """Merge traces into one stream, preserving each case's inner order.

    Modes: "sequential" (whole cases back to back), "roundrobin" (one
    event per unfinished case, cycling), "random" (seeded uniform pick
    among unfinished cases).
    """
    traces = check_log(log)
    if mode == "sequential":
        return stream_from_log(traces)
    if mode not in ("roundrobin", "random"):
        raise ValueError(f"mode must be sequential, roundrobin or random, got {mode!r}")
    cursors = [0] * len(traces)
    alive = list(range(len(traces)))
    rng = random.Random(seed)
    out: list[EventRecord] = []
    while alive:
        if mode == "random":
            pick = rng.randrange(len(alive))
        else:
            pick = len(out) % len(alive)
        t = alive[pick]
        trace = traces[t]
        out.append(EventRecord(trace.case_id, trace.activities[cursors[t]], len(out)))
        cursors[t] += 1
        if cursors[t] == len(trace.activities):
            alive.pop(pick)
    return out


def run_prequential(model: NextActivityPredictor,
                    stream: Iterable[EventRecord],
                    dataset_name: str = "",
                    model_name: Optional[str] = None) -> EvalReport:
    """Test-then-train over one event stream.

    Every event, including the first of each case and the stop, is one
    prediction opportunity: predict the next activity for the event's
    case, score top-1 against the observed activity, then train on it.
    Prediction and training are timed separately per event on the
    monotonic clock.
    """
    predict = model.predict_event
    learn = model.learn_event
    clock = time.perf_counter_ns
    pred_ns: list[int] = []
    train_ns: list[int] = []
    hits = 0
    n = 0
    last_seq = None
    stopped: set[str] = set()
    for ev in stream:
        if last_seq is not None and ev.seq_no <= last_seq:
            raise ValueError(
                f"stream out of order: seq_no {ev.seq_no} after {last_seq}")
        last_seq = ev.seq_no
        if ev.case_id in stopped:
            raise ValueError(f"case {ev.case_id!r}: activity after stop")
        t0 = clock()
        guess = predict(ev.case_id)
        t1 = clock()
        learn(ev.case_id, ev.activity)
        t2 = clock()
        pred_ns.append(t1 - t0)
        train_ns.append(t2 - t1)
        hits += guess == ev.activity
        n += 1
        if ev.activity == STOP:
            stopped.add(ev.case_id)
    pm, p50, p99 = _latency_summary(pred_ns)
    tm, t50, t99 = _latency_summary(train_ns)
    return EvalReport(
        model_name=model_name or model.model_name,
        dataset_name=dataset_name,
        n_events=n,
        n_correct=hits,
        accuracy=100.0 * hits / n if n else 0.0,
        pred_us_mean=pm, pred_us_p50=p50, pred_us_p99=p99,
        train_us_mean=tm, train_us_p50=t50, train_us_p99=t99,
        config=model.get_params(deep=False),
    )


def split_cases(n: int, train_frac: float = 0.70,
                val_frac: float = 0.15) -> tuple[int, int, int]:
    """Case counts (train, val, test) for an in-order split; every part
    gets at least one case. Fewer than 3 cases is an error."""
    if n < 3:
        raise ValueError(f"need at least 3 cases to split, got {n}")
    if train_frac <= 0 or val_frac < 0 or train_frac + val_frac >= 1:
        raise ValueError(f"bad split fractions ({train_frac}, {val_frac})")
    n_train = max(1, int(n * train_frac))
    n_val = max(1, int(n * val_frac))
    while n - n_train - n_val < 1:
        if n_train > 1:
            n_train -= 1
        else:
            n_val -= 1
    return n_train, n_val, n - n_train - n_val


def run_split(model: NextActivityPredictor, log: Sequence[TraceLike],
              dataset_name: str = "", train_frac: float = 0.70,
              val_frac: float = 0.15,
              model_name: Optional[str] = None) -> EvalReport:
    """Train on the leading block of cases, score frozen on the trailing
    block. The middle validation block is held out entirely; it exists
    for protocol parity with learners that tune on it."""
    traces = check_log(log)
    n_train, n_val, _ = split_cases(len(traces), train_frac, val_frac)
    train, test = traces[:n_train], traces[n_train + n_val:]
    model.fit(train)
    n_train_events = sum(len(t) for t in train)

    clock = time.perf_counter_ns
    ctx = model.context_length
    pred_ns: list[int] = []
    hits = 0
    n = 0
    for trace in test:
        history: tuple[str, ...] = ()
        for a in trace.activities:
            t0 = clock()
            guess = model.predict_proba_prefix(history).argmax()
            t1 = clock()
            pred_ns.append(t1 - t0)
            hits += guess == a
            n += 1
            if a != STOP:
                history = (history + (a,))[-ctx:] if ctx else ()
    pm, p50, p99 = _latency_summary(pred_ns)
    return EvalReport(
        model_name=model_name or model.model_name,
        dataset_name=dataset_name,
        n_events=n,
        n_correct=hits,
        accuracy=100.0 * hits / n if n else 0.0,
        pred_us_mean=pm, pred_us_p50=p50, pred_us_p99=p99,
        train_us_mean=0.0, train_us_p50=0.0, train_us_p99=0.0,
        config={**model.get_params(deep=False),
                "protocol": "split", "n_train_events": n_train_events},
    )
