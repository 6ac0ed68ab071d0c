"""Synthetic match-telemetry generator with planted colluding pairs.

Background behavior: players are drawn uniformly into teams each match,
teams land around a uniform anchor, final ranks are a uniform random
permutation. A planted pair couples all five collusion signals to one
strength dial s in [0,1]:

  * shared opponent matches scheduled in runs (streak >= 3 w.p. s),
  * close landings (per shared match w.p. s the pair lands at teammate
    scale, ~2,000 units, so expected distance interpolates between the
    map average and the teammate average),
  * top-half, within-2 final ranks (per shared match w.p. s),
  * a platform friendship edge (w.p. s),
  * earlier teammate matches (w.p. s; 1 to 3 of them as s grows).

At s=0 only the minimum three shared opponent matches are scheduled and
every behavioral signal falls back to the background mechanism.

A fixed share of the background population queues as persistent duos
(teammate pairs that always enter a match together), mirroring the
teammate-heavy shared-match counts seen in real telemetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import IO

import numpy as np

from . import ingest
from .errors import ConfigError
from .model import (
    Dataset,
    MatchRecord,
    PairKey,
    Position,
    Team,
    build_dataset,
    canonical_pair,
)

GROUND_TRUTH_FILENAME = "ground_truth.csv"

# Gaussian per-coordinate spread of members around their team anchor;
# sigma*sqrt(pi) ~ 2,000 game units mean teammate distance.
TEAM_SPREAD = 1130.0
# Landing distance of a colluding pair when the proximity signal fires:
# capped exponential, mean ~1,960 game units (the teammate scale).
COLLUDER_CLOSE_MEAN = 2000.0
COLLUDER_CLOSE_CAP = 8000.0
# Share of the population living in persistent duos that queue together.
DUO_FRACTION = 0.3

_EPOCH = datetime(2025, 6, 1, tzinfo=timezone.utc)
_MATCH_INTERVAL = timedelta(minutes=3)


@dataclass(frozen=True)
class SimConfig:
    num_players: int
    num_matches: int
    colluder_pairs: int = 0
    colluder_strength: float = 0.5
    team_size: int = 2
    teams_per_match: int = 20
    seed: int = 0
    map_extent: float = 80_000.0

    def validate(self) -> None:
        if self.team_size < 2:
            raise ConfigError("team_size must be >= 2")
        if self.teams_per_match < 2:
            raise ConfigError("teams_per_match must be >= 2")
        if self.teams_per_match * self.team_size > self.num_players:
            raise ConfigError("not enough players to fill one match")
        if not (0.0 <= self.colluder_strength <= 1.0):
            raise ConfigError("colluder_strength must lie in [0, 1]")
        if self.colluder_pairs * 2 > self.teams_per_match:
            raise ConfigError("colluding pairs need two teams each within one match")
        if self.colluder_pairs > 0 and self.num_matches < 40:
            raise ConfigError("need >= 40 matches to schedule colluder episodes")
        if self.num_matches < 1 or self.num_players < 2:
            raise ConfigError("empty simulation")


@dataclass(frozen=True)
class GroundTruth:
    colluding_pairs: frozenset[PairKey]


@dataclass
class _PairPlan:
    a: int  # player indices into the name table
    b: int
    opp_slots: list[int]
    team_slots: list[int]
    friends: bool


def _schedule_pair(
    rng: np.random.Generator, cfg: SimConfig, usage: np.ndarray, a: int, b: int
) -> _PairPlan:
    """Pick this pair's shared matches, respecting per-match team capacity.

    Scheduled slots keep a one-match guard gap from each other so that
    singleton encounters never merge into unintended streaks.
    """
    s = cfg.colluder_strength
    total = 3 + int(round(s * rng.integers(3, 10)))
    run_len = int(rng.integers(3, 6)) if rng.random() < s else 0
    run_len = min(run_len, total)
    capacity = cfg.teams_per_match

    used = np.zeros(cfg.num_matches, dtype=bool)
    used[:4] = True  # reserve early matches for the teammate signal
    slots: list[int] = []

    def claim(start: int, length: int) -> None:
        slots.extend(range(start, start + length))
        usage[start : start + length] += 2
        used[max(0, start - 1) : start + length + 1] = True

    placed_run = False
    if run_len:
        for attempt in range(400):
            start = int(rng.integers(4, cfg.num_matches - run_len))
            window = slice(start, start + run_len)
            if used[window].any():
                continue
            # prefer uncontested matches so forced ranks never collide
            limit = 0 if attempt < 200 else capacity - 2
            if (usage[window] <= limit).all():
                claim(start, run_len)
                placed_run = True
                break
    singles = total - (run_len if placed_run else 0)
    attempts = 0
    while singles > 0 and attempts < 2000:
        attempts += 1
        c = int(rng.integers(4, cfg.num_matches))
        limit = 0 if attempts < 1000 else capacity - 2
        if not used[c] and usage[c] <= limit:
            claim(c, 1)
            singles -= 1
    if singles > 0:
        room = np.flatnonzero(~used & (usage + 2 <= capacity))
        for c in room[rng.permutation(room.size)][:singles]:
            claim(int(c), 1)

    slots.sort()
    team_slots: list[int] = []
    if slots and rng.random() < s:
        want = 1 + int(round(2 * s))  # colluders teamed up more when stronger
        room = np.flatnonzero(usage[: slots[0]] + 1 <= capacity)
        take = room[rng.permutation(room.size)][:want]
        for c in sorted(int(x) for x in take):
            team_slots.append(c)
            usage[c] += 1
    return _PairPlan(a=a, b=b, opp_slots=slots, team_slots=team_slots, friends=rng.random() < s)


def _swap_to_adjacent(
    rng: np.random.Generator, ranks: np.ndarray, team_i: int, team_j: int, locked: set[int]
) -> None:
    """Give teams i and j top-half ranks within 2 of each other."""
    top = len(ranks) // 2
    free = [r for r in range(1, top + 1) if r not in locked]
    candidates = [(ra, rb) for ra in free for rb in free if ra < rb and rb - ra <= 2]
    if not candidates:
        return  # match too crowded with forced pairs; leave ranks random
    ra, rb = candidates[int(rng.integers(len(candidates)))]
    for team, want in ((team_i, ra), (team_j, rb)):
        holder = int(np.flatnonzero(ranks == want)[0])
        ranks[holder] = ranks[team]
        ranks[team] = want
    locked.update((ra, rb))


def generate(cfg: SimConfig) -> tuple[Dataset, GroundTruth]:
    """Generate a dataset plus planted-colluder ground truth.

    Deterministic for a fixed seed: identical configs produce
    byte-identical serialized output.
    """
    cfg.validate()
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    width = max(4, len(str(cfg.num_players - 1)))
    names = [f"p{i:0{width}d}" for i in range(cfg.num_players)]

    chosen = rng.choice(cfg.num_players, size=2 * cfg.colluder_pairs, replace=False)
    usage = np.zeros(cfg.num_matches, dtype=np.int64)
    plans = [
        _schedule_pair(rng, cfg, usage, int(chosen[2 * k]), int(chosen[2 * k + 1]))
        for k in range(cfg.colluder_pairs)
    ]
    by_match_opp: dict[int, list[_PairPlan]] = {}
    by_match_team: dict[int, list[_PairPlan]] = {}
    for plan in plans:
        for slot in plan.opp_slots:
            by_match_opp.setdefault(slot, []).append(plan)
        for slot in plan.team_slots:
            by_match_team.setdefault(slot, []).append(plan)

    friendships = {canonical_pair(names[p.a], names[p.b]) for p in plans if p.friends}
    # planted pairs meet only when scheduled: colluders coordinate
    # queueing, so backfill never throws a pair together by accident
    partner: dict[int, int] = {}
    for p in plans:
        partner[p.a] = p.b
        partner[p.b] = p.a

    # persistent duos among the rest of the population; they enter
    # matches together, giving the social graph its teammate backbone
    in_plans = {int(x) for x in chosen}
    solo = np.array([i for i in range(cfg.num_players) if i not in in_plans], dtype=np.int64)
    n_duos = min(int(DUO_FRACTION * cfg.num_players / 2), solo.size // 2)
    duo_partner: dict[int, int] = {}
    if n_duos:
        members = solo[rng.permutation(solo.size)[: 2 * n_duos]]
        for k in range(n_duos):
            x, y = int(members[2 * k]), int(members[2 * k + 1])
            duo_partner[x] = y
            duo_partner[y] = x

    T, S = cfg.teams_per_match, cfg.team_size
    matches: list[MatchRecord] = []
    for idx in range(cfg.num_matches):
        opp_here = by_match_opp.get(idx, [])
        team_here = by_match_team.get(idx, [])

        close_fire = [bool(rng.random() < cfg.colluder_strength) for _ in opp_here]
        rank_fire = [bool(rng.random() < cfg.colluder_strength) for _ in opp_here]

        rosters: list[list[int]] = [[] for _ in range(T)]
        next_team = 0
        pair_teams: list[tuple[int, int]] = []
        for plan in opp_here:
            rosters[next_team].append(plan.a)
            rosters[next_team + 1].append(plan.b)
            pair_teams.append((next_team, next_team + 1))
            next_team += 2
        for plan in team_here:
            rosters[next_team].extend((plan.a, plan.b))
            next_team += 1

        placed = sorted(p for r in rosters for p in r)
        available = np.ones(cfg.num_players, dtype=bool)
        if placed:
            available[placed] = False
        pool = np.flatnonzero(available)
        shuffled = [int(x) for x in pool[rng.permutation(pool.size)]]
        banned = {partner[p] for p in placed if p in partner}
        taken: set[int] = set()
        cursor = 0

        def next_free() -> int:
            nonlocal cursor
            while cursor < len(shuffled):
                cand = shuffled[cursor]
                cursor += 1
                if cand in taken or cand in banned:
                    continue
                return cand
            # only reachable when colluder bans exhaust a tiny pool
            for cand in shuffled:
                if cand not in taken:
                    return cand
            raise RuntimeError("player pool exhausted")

        for r in rosters:
            while len(r) < S:
                cand = next_free()
                taken.add(cand)
                if cand in partner:
                    banned.add(partner[cand])
                mate = duo_partner.get(cand)
                if (
                    mate is not None
                    and S - len(r) >= 2
                    and mate not in taken
                    and available[mate]
                ):
                    r.extend((cand, mate))
                    taken.add(mate)
                else:
                    r.append(cand)

        anchors = rng.uniform(0.0, cfg.map_extent, size=(T, 2))
        noise = rng.normal(0.0, TEAM_SPREAD, size=(T, S, 2))
        pos = anchors[:, None, :] + noise

        for k in range(len(opp_here)):
            if not close_fire[k]:
                continue
            ti, tj = pair_teams[k]
            theta = rng.uniform(0.0, 2.0 * math.pi)
            mag = min(rng.exponential(COLLUDER_CLOSE_MEAN), COLLUDER_CLOSE_CAP)
            target = pos[ti, 0] + mag * np.array([math.cos(theta), math.sin(theta)])
            delta = target - pos[tj, 0]
            pos[tj] += delta  # move the whole team so teammates stay together

        np.clip(pos, 0.0, cfg.map_extent, out=pos)

        ranks = rng.permutation(T) + 1
        locked: set[int] = set()
        for k in range(len(opp_here)):
            if rank_fire[k]:
                _swap_to_adjacent(rng, ranks, *pair_teams[k], locked)

        landings = {}
        teams = []
        for t in range(T):
            members = tuple(names[p] for p in rosters[t])
            teams.append(Team(index=t, players=members, rank=int(ranks[t])))
            for s_idx, p in enumerate(rosters[t]):
                landings[names[p]] = Position(float(pos[t, s_idx, 0]), float(pos[t, s_idx, 1]))

        matches.append(
            MatchRecord(
                match_id=f"m{idx:06d}",
                start_time=_EPOCH + idx * _MATCH_INTERVAL,
                teams=tuple(teams),
                landings=landings,
            )
        )

    truth = GroundTruth(
        colluding_pairs=frozenset(canonical_pair(names[p.a], names[p.b]) for p in plans)
    )
    return build_dataset(matches, friendships=friendships), truth


def write_dataset(d: Dataset, gt: GroundTruth, out_dir: str | Path) -> None:
    """Emit matches.jsonl, friendships.csv, and ground_truth.csv."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / ingest.MATCHES_FILENAME, "w", encoding="utf-8") as fh:
        ingest.write_match_log(d, fh)
    with open(out_dir / ingest.FRIENDSHIPS_FILENAME, "w", encoding="utf-8") as fh:
        ingest.write_friendships(d.friendships, fh)
    with open(out_dir / GROUND_TRUTH_FILENAME, "w", encoding="utf-8") as fh:
        write_ground_truth(gt, fh)


def write_ground_truth(gt: GroundTruth, stream: IO[str]) -> None:
    for a, b in sorted(gt.colluding_pairs):
        stream.write(f"{a},{b}\n")


def read_ground_truth(path: str | Path) -> GroundTruth:
    with open(path, "r", encoding="utf-8") as fh:
        pairs, _ = ingest.parse_friendships(fh)
    return GroundTruth(colluding_pairs=frozenset(pairs))
