import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamgram import STOP, Alphabet, NGramPredictor, history_of


def brute_force_counts(traces, n):
    """Reference counter tables, built by direct position-wise enumeration:
    at each position the observed activity is counted under every suffix
    (empty one included) of the last n - 1 activities before it."""
    tables = {}
    for acts in traces:
        for j, activity in enumerate(acts):
            h = tuple(acts[max(0, j - (n - 1)):j])
            for start in range(len(h) + 1):
                tables.setdefault(h[start:], {})
                key = h[start:]
                tables[key][activity] = tables[key].get(activity, 0) + 1
    return tables


def stream_into(model, traces):
    for i, acts in enumerate(traces):
        for a in acts:
            model.learn_event(f"case_{i}", a)
    return model


def random_traces(rng, n_traces, alphabet="ABC", max_len=12):
    out = []
    for _ in range(n_traces):
        body = [rng.choice(alphabet) for _ in range(rng.randrange(1, max_len))]
        out.append(body + [STOP])
    return out


class TestHistoryOf:
    def test_truncates_to_n_minus_one(self):
        assert history_of(("A", "A", "A", "B"), 3) == ("A", "B")

    def test_short_prefix_kept_whole(self):
        assert history_of(("A",), 3) == ("A",)
        assert history_of((), 3) == ()

    def test_unigram_history_is_empty(self):
        assert history_of(("A", "B", "C"), 1) == ()

    def test_bad_n(self):
        with pytest.raises(ValueError):
            history_of(("A",), 0)


class TestTrainingCounts:
    def test_hand_counted_bigram(self):
        # One trace A A B stop into a 2-gram. Each event is counted at its
        # one-activity history and at the empty history.
        m = stream_into(NGramPredictor(n=2), [["A", "A", "B", STOP]])
        assert m.states_[("A",)] == {"A": 1, "B": 1}
        assert m.states_[("B",)] == {STOP: 1}
        assert m.states_[()] == {"A": 2, "B": 1, STOP: 1}
        d = m.predict_proba_prefix(["A"])
        assert d.probs == {"A": 0.5, "B": 0.5}

    def test_one_event_adds_one_at_every_suffix_level(self):
        m = NGramPredictor(n=3)
        for a in ("A", "B"):
            m.learn_event("c", a)
        before = {k: sum(t.values()) for k, t in m.states_.items()}
        m.learn_event("c", "C")
        after = {k: sum(t.values()) for k, t in m.states_.items()}
        for key in (("A", "B"), ("B",), ()):
            assert after[key] == before.get(key, 0) + 1

    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_matches_brute_force(self, n, seed):
        rng = random.Random(seed)
        traces = random_traces(rng, rng.randrange(1, 5))
        m = stream_into(NGramPredictor(n=n), traces)
        assert m.states_ == brute_force_counts(traces, n)

    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_streaming_equals_batch_fit(self, n, seed):
        rng = random.Random(seed)
        traces = random_traces(rng, rng.randrange(1, 6))
        streamed = stream_into(NGramPredictor(n=n), traces)
        batch = NGramPredictor(n=n).fit(traces)
        assert streamed.states_ == batch.states_
        assert list(streamed.alphabet_) == list(batch.alphabet_)

    def test_training_twice_doubles_counts_same_distribution(self):
        traces = [["A", "B", "A", STOP], ["B", "B", STOP]]
        once = stream_into(NGramPredictor(n=3), traces)
        twice = stream_into(stream_into(NGramPredictor(n=3), traces), traces)
        for key, table in once.states_.items():
            assert twice.states_[key] == {a: 2 * c for a, c in table.items()}
        for prefix in ([], ["A"], ["B", "B"], ["A", "B"]):
            assert once.predict_proba_prefix(prefix) == twice.predict_proba_prefix(prefix)


class TestPrediction:
    def test_untrained_predicts_stop(self):
        m = NGramPredictor(n=3)
        assert m.predict_event("fresh") == STOP
        assert m.predict_proba_event("fresh").probs == {STOP: 1.0}

    def test_backoff_to_longest_observed_suffix(self):
        m = stream_into(NGramPredictor(n=3), [["A", "B", "C", STOP]])
        # History (Z, B) was never seen; its suffix (B,) was, and predicts C.
        d = m.predict_proba_prefix(["Z", "B"])
        assert d.probs == {"C": 1.0}

    def test_backoff_reaches_empty_history(self):
        m = stream_into(NGramPredictor(n=3), [["A", "A", STOP]])
        d = m.predict_proba_prefix(["Q", "Q"])
        assert d.probs == m.predict_proba_prefix([]).probs

    def test_unigram_predicts_global_marginal_everywhere(self):
        traces = [["A", "B", "A", STOP], ["A", STOP]]
        m = stream_into(NGramPredictor(n=1), traces)
        expected = {"A": 3 / 6, "B": 1 / 6, STOP: 2 / 6}
        for prefix in ([], ["B"], ["A", "B", "A"], ["Z"]):
            d = m.predict_proba_prefix(prefix)
            for a, p in expected.items():
                assert d.probs[a] == pytest.approx(p)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_suffix_equivalence_trigram(self, seed):
        # A 3-gram state is the last two activities: any two prefixes that
        # agree on those get the identical distribution.
        rng = random.Random(seed)
        m = stream_into(NGramPredictor(n=3), random_traces(rng, 4))
        tail = [rng.choice("ABC") for _ in range(2)]
        w1 = [rng.choice("ABC") for _ in range(rng.randrange(0, 8))] + tail
        w2 = [rng.choice("ABC") for _ in range(rng.randrange(0, 8))] + tail
        assert m.predict_proba_prefix(w1) == m.predict_proba_prefix(w2)

    def test_prediction_does_not_mutate(self):
        m = stream_into(NGramPredictor(n=3), [["A", "B", STOP]])
        snap = m.snapshot()
        for _ in range(5):
            m.predict_proba_prefix(["A"])
            m.predict_event("newcase")
        assert m.snapshot() == snap

    def test_distributions_are_valid(self):
        rng = random.Random(7)
        m = stream_into(NGramPredictor(n=4), random_traces(rng, 6))
        for _ in range(50):
            prefix = [rng.choice("ABC") for _ in range(rng.randrange(0, 6))]
            m.predict_proba_prefix(prefix).validate()


class TestCursorLifecycle:
    def test_stop_clears_the_case_cursor(self):
        m = NGramPredictor(n=3)
        for a in ("A", "B", STOP):
            m.learn_event("c", a)
        assert "c" not in m.case_histories_

    def test_cases_are_isolated(self):
        m = NGramPredictor(n=4)
        m.learn_event("one", "A")
        m.learn_event("two", "B")
        assert m.case_histories_["one"] == ("A",)
        assert m.case_histories_["two"] == ("B",)

    def test_history_capped_at_n_minus_one(self):
        m = NGramPredictor(n=3)
        for a in "AAAB":
            m.learn_event("c", a)
        assert m.case_histories_["c"] == ("A", "B")


class TestShape:
    def test_state_count_bounded_by_alphabet_power(self):
        rng = random.Random(3)
        m = stream_into(NGramPredictor(n=3), random_traces(rng, 30, alphabet="AB"))
        # Symbols in histories: A, B (stop never enters a history).
        bound = sum(2 ** k for k in range(m.n))
        assert m.n_states() <= bound

    def test_invalid_n_rejected(self):
        with pytest.raises(ValueError, match="positive integer"):
            NGramPredictor(n=0)
        with pytest.raises(ValueError, match="positive integer"):
            NGramPredictor(n=2.5)

    def test_get_params_roundtrip(self):
        m = NGramPredictor(n=7)
        assert m.get_params()["n"] == 7
        m2 = NGramPredictor(**{k: v for k, v in m.get_params().items()})
        assert m2.n == 7

    def test_shared_alphabet_is_used(self):
        shared = Alphabet(["Z"])
        m = NGramPredictor(n=2, alphabet=shared)
        m.learn_event("c", "A")
        assert "A" in shared
        assert m.alphabet_ is shared

    def test_snapshot_format(self):
        m = stream_into(NGramPredictor(n=2), [["A", STOP]])
        snap = m.snapshot()
        assert snap["n"] == 2
        assert snap["states"][""] == {"A": 1, STOP: 1}
        assert snap["states"]["A"] == {STOP: 1}

    def test_batch_predict_api(self):
        m = NGramPredictor(n=2).fit([["A", "B"], ["A", "B"]])
        assert m.predict([["A"], ["B"]]) == ["B", STOP]
        probs = m.predict_proba([["A"]])[0]
        assert probs.probs == {"B": 1.0}

    def test_prefix_with_stop_rejected(self):
        m = NGramPredictor(n=2)
        with pytest.raises(ValueError, match="stop symbol"):
            m.predict_proba_prefix(["A", STOP])
