import pytest

from agorank import PreferenceProfile, profile_from_rankings

P3_RANKINGS = {
    "v1": ("a", "b", "c"),
    "v2": ("a", "c", "b"),
    "v3": ("b", "a", "c"),
}
CYCLE_RANKINGS = {
    "v1": ("a", "b", "c"),
    "v2": ("b", "c", "a"),
    "v3": ("c", "a", "b"),
}


@pytest.fixture
def p3() -> PreferenceProfile:
    return profile_from_rankings(P3_RANKINGS)


@pytest.fixture
def cycle() -> PreferenceProfile:
    return profile_from_rankings(CYCLE_RANKINGS)


def brute_force_borda(profile):
    """Borda points by counting, for each idea, every (voter, rival) it is placed above."""
    scores = {x: 0 for x in profile.ideas}
    for ranking in profile.rankings.values():
        for x in ranking:
            for y in ranking:
                if x != y and ranking.index(x) < ranking.index(y):
                    scores[x] += 1
    return scores
