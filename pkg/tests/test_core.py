import pytest
from hypothesis import given
from hypothesis import strategies as st

from streamgram import (
    STOP,
    Alphabet,
    CaseTrace,
    PredictionDistribution,
    argmax_activity,
    as_case_trace,
    check_log,
    normalize,
    stop_distribution,
)
from streamgram.core import check_prefix


class TestAlphabet:
    def test_stop_is_always_index_zero(self):
        assert Alphabet().index(STOP) == 0
        assert Alphabet(["X", "Y"]).index(STOP) == 0
        assert Alphabet().stop_index == 0

    def test_insertion_order(self):
        a = Alphabet()
        assert a.add("B") == 1
        assert a.add("A") == 2
        assert a.add("B") == 1  # duplicates keep their first index
        assert list(a) == [STOP, "B", "A"]
        assert len(a) == 3

    def test_indices_never_change(self):
        a = Alphabet(["X"])
        before = a.index("X")
        for s in "PQRSTUV":
            a.add(s)
        assert a.index("X") == before

    def test_unknown_symbol_raises(self):
        with pytest.raises(KeyError):
            Alphabet().index("nope")

    def test_contains(self):
        a = Alphabet(["X"])
        assert "X" in a and STOP in a and "Y" not in a


class TestDistribution:
    def test_argmax_unique_maximum(self):
        a = Alphabet(["A", "B"])
        d = PredictionDistribution({"A": 0.3, "B": 0.7}, a)
        assert d.argmax() == "B"
        assert argmax_activity(d) == "B"

    def test_argmax_tie_breaks_by_insertion_order(self):
        a = Alphabet(["B", "A"])  # B was seen first
        d = PredictionDistribution({"A": 0.5, "B": 0.5}, a)
        assert d.argmax() == "B"

    def test_argmax_tie_with_stop_prefers_stop(self):
        a = Alphabet(["A"])
        d = PredictionDistribution({"A": 0.5, STOP: 0.5}, a)
        assert d.argmax() == STOP

    def test_argmax_empty_raises(self):
        with pytest.raises(ValueError, match="empty distribution"):
            PredictionDistribution({}, Alphabet()).argmax()

    def test_validate_rejects_bad_sum(self):
        a = Alphabet(["A"])
        with pytest.raises(ValueError, match="sum"):
            PredictionDistribution({"A": 0.5}, a).validate()

    def test_validate_rejects_unknown_symbol(self):
        with pytest.raises(ValueError, match="not in alphabet"):
            PredictionDistribution({"Z": 1.0}, Alphabet()).validate()

    def test_stop_distribution(self):
        d = stop_distribution(Alphabet(["A"]))
        assert d.probs == {STOP: 1.0}
        assert d.argmax() == STOP
        d.validate()


class TestNormalize:
    def test_simple(self):
        a = Alphabet(["A", "B"])
        d = normalize({"A": 1, "B": 3}, a)
        assert d.probs == {"A": 0.25, "B": 0.75}
        d.validate()

    def test_zero_entries_dropped(self):
        a = Alphabet(["A", "B"])
        assert normalize({"A": 2, "B": 0}, a).probs == {"A": 1.0}

    def test_all_zero_raises(self):
        with pytest.raises(ValueError, match="no observations"):
            normalize({"A": 0}, Alphabet(["A"]))

    def test_empty_raises(self):
        with pytest.raises(ValueError, match="no observations"):
            normalize({}, Alphabet())

    def test_negative_raises(self):
        with pytest.raises(ValueError, match="negative"):
            normalize({"A": -1, "B": 2}, Alphabet(["A", "B"]))

    @given(st.dictionaries(st.sampled_from("ABCDE"), st.integers(1, 50),
                           min_size=1, max_size=5),
           st.integers(2, 9))
    def test_scaling_counts_keeps_distribution(self, counts, k):
        a = Alphabet(sorted(counts))
        base = normalize(counts, a)
        scaled = normalize({s: c * k for s, c in counts.items()}, a)
        assert base.probs.keys() == scaled.probs.keys()
        for s in base.probs:
            assert base.probs[s] == pytest.approx(scaled.probs[s], abs=1e-12)
        assert base.argmax() == scaled.argmax()

    @given(st.dictionaries(st.sampled_from("ABCDE"), st.integers(0, 50),
                           min_size=1, max_size=5).filter(lambda d: sum(d.values()) > 0))
    def test_result_is_a_distribution(self, counts):
        a = Alphabet(sorted(counts))
        normalize(counts, a).validate()


class TestCaseTrace:
    def test_requires_trailing_stop(self):
        with pytest.raises(ValueError, match="must end with the stop symbol"):
            CaseTrace("c", ("A", "B"))

    def test_rejects_interior_stop(self):
        with pytest.raises(ValueError, match="stop symbol inside"):
            CaseTrace("c", ("A", STOP, "B", STOP))

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="empty trace"):
            CaseTrace("c", ())

    def test_body_and_len(self):
        t = CaseTrace("c", ("A", "B", STOP))
        assert t.body == ("A", "B")
        assert len(t) == 3

    def test_stop_only_trace_is_valid(self):
        assert CaseTrace("c", (STOP,)).body == ()


class TestCoercion:
    def test_plain_sequence_gets_stop_appended(self):
        t = as_case_trace(["A", "B"], case_id="z")
        assert t.activities == ("A", "B", STOP)
        assert t.case_id == "z"

    def test_sequence_with_stop_kept(self):
        t = as_case_trace(("A", STOP))
        assert t.activities == ("A", STOP)

    def test_casetrace_passes_through(self):
        t = CaseTrace("c", ("A", STOP))
        assert as_case_trace(t, case_id="other") is t

    def test_check_log_synthesizes_ids(self):
        log = check_log([["A"], ["B"]])
        assert [t.case_id for t in log] == ["case_0", "case_1"]

    def test_check_log_rejects_duplicate_ids(self):
        with pytest.raises(ValueError, match="duplicate case id"):
            check_log([CaseTrace("x", ("A", STOP)), CaseTrace("x", ("B", STOP))])

    def test_check_prefix_rejects_stop(self):
        with pytest.raises(ValueError, match="stop symbol"):
            check_prefix(["A", STOP])
        assert check_prefix(["A", "B"]) == ("A", "B")
