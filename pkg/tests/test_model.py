from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from agorank import (
    ComparisonRecord,
    PreferenceProfile,
    expand_profile,
    expand_ranking_to_comparisons,
    profile_from_rankings,
    validate_profile,
)


def beats(records):
    return [(r.winner, r.loser) for r in records]


def test_expand_three():
    recs = expand_ranking_to_comparisons(("a", "b", "c"), "v1")
    assert beats(recs) == [("a", "b"), ("a", "c"), ("b", "c")]
    assert all(r.participant == "v1" for r in recs)


def test_expand_two():
    assert beats(expand_ranking_to_comparisons(("a", "b"), "v")) == [("a", "b")]


def test_expand_five_gives_ten():
    assert len(expand_ranking_to_comparisons(tuple("abcde"), "v")) == 10


@pytest.mark.parametrize("ranking", [(), ("a",)])
def test_expand_rejects_short(ranking):
    with pytest.raises(ValueError):
        expand_ranking_to_comparisons(ranking, "v")


@given(st.lists(st.text(min_size=1, max_size=3), min_size=2, max_size=9, unique=True))
def test_expansion_is_transitive_and_irreflexive(ranking):
    recs = expand_ranking_to_comparisons(ranking, "v")
    assert len(recs) == comb(len(ranking), 2)
    rel = set(beats(recs))
    assert all(x != y for x, y in rel)
    for x, y in rel:
        assert (y, x) not in rel
        for y2, z in rel:
            if y2 == y:
                assert (x, z) in rel
    assert recs == expand_ranking_to_comparisons(ranking, "v")


def test_record_rejects_self_comparison():
    with pytest.raises(ValueError):
        ComparisonRecord("v", "a", "a")


def test_record_rejects_negative_elapsed():
    with pytest.raises(ValueError):
        ComparisonRecord("v", "a", "b", -1)


def test_validate_clean(p3):
    assert validate_profile(p3) == []
    assert p3.is_complete
    assert (p3.m, p3.n) == (3, 3)


def test_validate_duplicate_idea():
    report = validate_profile(PreferenceProfile(("a", "b"), {"v": ("a", "a", "b")}))
    assert [v.rule for v in report] == ["duplicate idea"]


def test_validate_unknown_idea():
    report = validate_profile(PreferenceProfile(("a", "b"), {"v": ("a", "z")}))
    assert [v.rule for v in report] == ["unknown idea"]
    assert report[0].participant == "v"


def test_validate_empty_ranking_and_sizes():
    report = validate_profile(PreferenceProfile(("a",), {"v": ()}))
    assert {v.rule for v in report} == {"too few ideas", "empty ranking"}
    assert validate_profile(PreferenceProfile(("a", "b"), {}))[0].rule == "no participants"


def test_partial_profile_is_not_complete():
    profile = profile_from_rankings({"v": ("a", "b"), "w": ("b", "c", "a")})
    assert profile.ideas == ("a", "b", "c")
    assert not profile.is_complete


def test_profile_from_rankings_raises_on_bad_input():
    with pytest.raises(ValueError, match="unknown idea"):
        profile_from_rankings({"v": ("a", "q")}, ideas=("a", "b"))


def test_expand_profile_counts(p3):
    log = expand_profile(p3, "t")
    assert log.topic == "t"
    assert len(log) == 9
    assert log.ideas() == ("a", "b", "c")
    assert log.participants() == ("v1", "v2", "v3")


def test_profile_is_immutable(p3):
    with pytest.raises(TypeError):
        p3.rankings["v9"] = ("a", "b", "c")
