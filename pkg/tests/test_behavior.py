import numpy as np
import pytest

from agorank import (
    RatingEvent,
    TimingRecord,
    condorcet_existence_summary,
    pairwise_tally,
    rating_transition,
    time_per_comparison,
)
from agorank.synthetic import gen_rating_sessions


def session(participant, stars):
    return [RatingEvent(participant, k, s) for k, s in enumerate(stars)]


def test_transition_hand_count():
    matrix = rating_transition(session("u", [1, 1, 5, 1, 5, 5]))
    assert matrix.prob(1, 1) == pytest.approx(1 / 3)
    assert matrix.prob(1, 5) == pytest.approx(2 / 3)
    assert matrix.prob(5, 1) == pytest.approx(1 / 2)
    assert matrix.prob(5, 5) == pytest.approx(1 / 2)
    assert matrix.empty_rows() == (2, 3, 4)
    assert matrix.prob(3, 1) is None
    assert np.isnan(matrix.probs[2]).all()


def test_single_events_give_empty_rows():
    matrix = rating_transition([RatingEvent("a", 0, 3), RatingEvent("b", 0, 4)])
    assert matrix.empty_rows() == (1, 2, 3, 4, 5)
    assert rating_transition([]).empty_rows() == (1, 2, 3, 4, 5)


def test_no_transitions_across_participants():
    # Interleaved sessions: a = 1,1,1 and b = 5,5,5.
    events = []
    for k in range(3):
        events += [RatingEvent("a", k, 1), RatingEvent("b", k, 5)]
    matrix = rating_transition(events)
    assert matrix.counts[0, 4] == 0 and matrix.counts[4, 0] == 0
    assert matrix.counts[0, 0] == 2 and matrix.counts[4, 4] == 2


def test_events_reordered_by_index():
    events = [RatingEvent("a", 2, 5), RatingEvent("a", 0, 1), RatingEvent("a", 1, 1)]
    matrix = rating_transition(events)
    assert matrix.counts[0, 0] == 1 and matrix.counts[0, 4] == 1


def test_duplicate_index_rejected():
    with pytest.raises(ValueError):
        rating_transition([RatingEvent("a", 1, 2), RatingEvent("a", 1, 3)])


def test_rows_sum_to_one():
    events = gen_rating_sessions(np.full((5, 5), 0.2), 20, 30, seed=1)
    probs = rating_transition(events).probs
    for row in probs:
        if not np.isnan(row).any():
            assert abs(row.sum() - 1) <= 1e-9


@pytest.mark.parametrize("stars", [0, 6])
def test_rating_event_validation(stars):
    with pytest.raises(ValueError):
        RatingEvent("a", 0, stars)


def test_existence_summary(p3, cycle):
    one = condorcet_existence_summary([pairwise_tally(p3)])
    assert (one.topics_total, one.with_winner, one.without_winner, one.winners) == (1, 1, 0, ("a",))
    none = condorcet_existence_summary([pairwise_tally(cycle)])
    assert (none.topics_total, none.with_winner, none.without_winner) == (1, 0, 1)
    both = condorcet_existence_summary([pairwise_tally(p3), pairwise_tally(cycle)])
    assert both.with_winner + both.without_winner == both.topics_total == 2


def test_time_per_comparison():
    assert time_per_comparison([TimingRecord(4, 30_000)]) == {4: 5.0}
    assert time_per_comparison([TimingRecord(2, 7_000)]) == {2: 7.0}
    assert time_per_comparison([TimingRecord(3, 6_000), TimingRecord(3, 12_000)]) == {3: 3.0}
    pair = [TimingRecord(2, 1_500), TimingRecord(2, 2_500)]
    assert time_per_comparison(pair)[2] == np.mean([1.5, 2.5])
    with pytest.raises(ValueError):
        time_per_comparison([])


def test_timing_record_validation():
    with pytest.raises(ValueError):
        TimingRecord(1, 100)
    with pytest.raises(ValueError):
        TimingRecord(3, 0)
