import math
from fractions import Fraction

import pytest

from collusion.errors import DomainError
from collusion.features import (
    PairContext,
    acquaintance,
    binomial_event_prob,
    consecutive_streak,
    extract_pairs,
    p_rank_adjacent,
    p_rank_adjacent_top,
    pair_timeline,
)
from collusion.simulate import SimConfig, generate

from conftest import dataset_from
from oracles import (
    brute_force_pairs,
    enumerate_binomial,
    enumerate_rank_adjacent,
    enumerate_rank_adjacent_top,
)


def two_team_specs(rank_pairs, a="p1", b="p2"):
    """One 6-team match per (rank_a, rank_b); a and b always oppose."""
    specs = []
    for i, (ra, rb) in enumerate(rank_pairs):
        other = [r for r in range(1, 7) if r not in (ra, rb)]
        teams = [(0, [a, f"x{i}"], ra), (1, [b, f"y{i}"], rb)]
        teams += [(2 + j, [f"f{i}_{j}a", f"f{i}_{j}b"], r) for j, r in enumerate(other)]
        specs.append((f"m{i}", teams, None))
    return specs


class TestExtractPairs:
    def test_avg_rank_diff_fixture(self):
        # diffs 1, 1, 2, 1 -> mean 1.25
        d = dataset_from(two_team_specs([(1, 2), (3, 4), (1, 3), (4, 5)]))
        from collusion.model import validate_match

        assert all(validate_match(m) == [] for m in d.matches)
        rows = extract_pairs(d, 1, PairContext.OPPONENT)
        row = next(r for r in rows if r.pair == ("p1", "p2"))
        assert row.avg_rank_diff_opp == 1.25
        oracle = brute_force_pairs(d, 1, PairContext.OPPONENT)
        orow = next(r for r in oracle if r.pair == ("p1", "p2"))
        assert orow.avg_rank_diff_opp == 1.25

    def test_min_shared_above_max_cooccurrence(self):
        d = dataset_from(two_team_specs([(1, 2), (3, 4), (1, 3), (4, 5)]))
        assert extract_pairs(d, 5, PairContext.OPPONENT) == []

    def test_identical_landing_zero_distance(self):
        landings = {p: (500.0, 500.0) for p in ["p1", "p2", "x0", "y0"]}
        d = dataset_from(
            [("m0", [(0, ["p1", "x0"], 1), (1, ["p2", "y0"], 2)], landings)]
        )
        rows = extract_pairs(d, 1, PairContext.OPPONENT)
        assert all(r.avg_distance_opp == 0.0 for r in rows)

    def test_matches_brute_force_on_random_fixtures(self):
        for seed in range(4):
            cfg = SimConfig(
                num_players=30,
                num_matches=25,
                colluder_pairs=0,
                teams_per_match=4,
                team_size=3,
                seed=seed,
            )
            d, _ = generate(cfg)
            for ctx in (PairContext.OPPONENT, PairContext.TEAMMATE, None):
                assert extract_pairs(d, 2, ctx) == brute_force_pairs(d, 2, ctx)

    def test_symmetric_by_construction(self):
        d = dataset_from(two_team_specs([(1, 2), (2, 3)]))
        rows = extract_pairs(d, 1, None)
        assert all(r.pair[0] < r.pair[1] for r in rows)

    def test_sorted_by_pair(self):
        d = dataset_from(two_team_specs([(1, 2), (2, 3)]))
        rows = extract_pairs(d, 1, None)
        assert [r.pair for r in rows] == sorted(r.pair for r in rows)

    def test_active_player_filter_respected(self):
        d = dataset_from(two_team_specs([(1, 2), (3, 4)]))
        from collusion.model import Dataset

        narrowed = Dataset(
            matches=d.matches, friendships=d.friendships, active_players=frozenset({"p1"})
        )
        assert extract_pairs(narrowed, 1, None) == []


class TestConsecutiveStreak:
    def _obs(self, ords_a, ords_b):
        from collusion.features import PairObservation

        return [
            PairObservation(
                pair=("a", "b"),
                context=PairContext.OPPONENT,
                match_id=f"m{i}",
                distance=0.0,
                rank_diff=1,
                ordinal_a=oa,
                ordinal_b=ob,
            )
            for i, (oa, ob) in enumerate(zip(ords_a, ords_b))
        ]

    def test_full_run(self):
        assert consecutive_streak(self._obs([3, 4, 5], [7, 8, 9])) == 3

    def test_single_match(self):
        assert consecutive_streak(self._obs([4], [2])) == 1

    def test_run_breaks_on_skip(self):
        assert consecutive_streak(self._obs([1, 2, 4], [1, 2, 3])) == 2

    def test_empty(self):
        assert consecutive_streak([]) == 0

    def test_appending_consecutive_match_never_decreases(self):
        ords_a = [1, 2, 5, 6]
        ords_b = [2, 3, 9, 10]
        base = consecutive_streak(self._obs(ords_a, ords_b))
        extended = consecutive_streak(self._obs(ords_a + [7], ords_b + [11]))
        assert extended >= base

    def test_streak_matches_extract(self):
        # p1, p2 share matches 0,1,2 and both play nothing else
        d = dataset_from(two_team_specs([(1, 2), (1, 2), (1, 2)]))
        rows = extract_pairs(d, 1, PairContext.OPPONENT)
        row = next(r for r in rows if r.pair == ("p1", "p2"))
        assert row.max_consecutive_opp == 3
        obs = [o for o in pair_timeline(d, ("p1", "p2")) if o.context is PairContext.OPPONENT]
        assert consecutive_streak(obs) == 3


class TestAcquaintance:
    def test_dual_context_three_total(self):
        specs = [
            ("m0", [(0, ["p1", "p2"], 1), (1, ["p3", "p4"], 2)], None),  # teammates
            ("m1", [(0, ["p1", "p2"], 2), (1, ["p3", "p4"], 1)], None),  # teammates
            ("m2", [(0, ["p1", "p3"], 1), (1, ["p2", "p4"], 2)], None),  # opponents
        ]
        d = dataset_from(specs)
        assert acquaintance(d, ("p1", "p2")) is True

    def test_friendship_branch_without_matches(self):
        d = dataset_from(
            [("m0", [(0, ["p1", "p2"], 1), (1, ["p3", "p4"], 2)], None)],
            friendships=[("p5", "p6")],
        )
        assert acquaintance(d, ("p5", "p6")) is True

    def test_one_context_only_is_not_acquaintance(self):
        d = dataset_from(two_team_specs([(1, 2)] * 5))
        assert acquaintance(d, ("p1", "p2")) is False

    def test_extract_agrees_with_acquaintance(self):
        d = dataset_from(two_team_specs([(1, 2)] * 3), friendships=[("p1", "p2")])
        rows = extract_pairs(d, 1, PairContext.OPPONENT)
        row = next(r for r in rows if r.pair == ("p1", "p2"))
        assert row.acquaintance is True


class TestRankProbabilities:
    def test_paper_values(self):
        assert p_rank_adjacent(20) == pytest.approx(0.1, abs=1e-12)
        assert p_rank_adjacent_top(20, 10) == pytest.approx(9 / 190, abs=1e-15)

    def test_two_teams_always_adjacent(self):
        assert p_rank_adjacent(2) == 1.0

    def test_t10_brute_force(self):
        assert Fraction(1, 5) == enumerate_rank_adjacent(10)
        assert p_rank_adjacent(10) == pytest.approx(0.2, abs=1e-12)

    def test_top_k_reduces_to_adjacent(self):
        assert p_rank_adjacent_top(20, 20) == pytest.approx(p_rank_adjacent(20), abs=1e-15)

    def test_top_k_brute_force_t6_k3(self):
        exact = enumerate_rank_adjacent_top(6, 3)
        assert p_rank_adjacent_top(6, 3) == pytest.approx(float(exact), abs=1e-12)

    def test_identity_times_t(self):
        for t in range(2, 65):
            assert p_rank_adjacent(t) * t == pytest.approx(2.0, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            p_rank_adjacent(1)
        with pytest.raises(DomainError):
            p_rank_adjacent_top(6, 1)
        with pytest.raises(DomainError):
            p_rank_adjacent_top(6, 7)


class TestBinomial:
    def test_paper_anchor(self):
        # the published 0.00094 comes from the rounded p=0.047
        rounded = binomial_event_prob(5, 3, 0.047)
        assert round(rounded, 5) == 0.00094
        exact = binomial_event_prob(5, 3, 9 / 190)
        assert exact == pytest.approx(
            math.comb(5, 3) * (9 / 190) ** 3 * (181 / 190) ** 2, abs=1e-15
        )
        assert abs(exact - 0.00094) < 3e-5

    def test_empty_product(self):
        assert binomial_event_prob(0, 0, 0.3) == 1.0

    def test_exhaustive_enumeration_oracle(self):
        assert binomial_event_prob(8, 2, 0.1) == pytest.approx(
            enumerate_binomial(8, 2, 0.1), abs=1e-12
        )

    def test_sums_to_one(self):
        for n in (1, 5, 17, 30):
            total = sum(binomial_event_prob(n, k, 0.3) for k in range(n + 1))
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            binomial_event_prob(3, 4, 0.5)
        with pytest.raises(DomainError):
            binomial_event_prob(3, 1, 1.5)
