"""Ground-truth brute force for tiny dynamic games.

Outcome sets are computed from first principles, independent of the solver
recursions: MSPNE enumeration walks every monotone, irreversibility-respecting
strategy profile stage-by-stage from the back (joint stage maps assembled over
the history poset, one-shot deviations rejected as soon as a stage map is
fixed); SPNE outcome sets use the exact subgame value-set recursion, where a
candidate stage profile is supportable iff each unilateral deviation can be
punished by some equilibrium value of the deviation subgame.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .core import Context, Partition, bits, members, submasks
from .errors import PreconditionError, ResourceLimitError
from .sync import SyncSolver

DEFAULT_BUDGET = 5 * 10**6


class Sync(NamedTuple):
    """Synchronous schedule: T simultaneous stages, irreversible upgrades."""

    T: int


class Async(NamedTuple):
    """Asynchronous schedule: cells move once each, in order."""

    partition: Partition


# ---------------------------------------------------------------------------
# history plumbing


def _sync_histories(n, T):
    """Histories per stage: stage t sees a nondecreasing chain of t-1 masks."""
    full = (1 << n) - 1
    stages = [[()]]
    for _ in range(2, T + 1):
        nxt = []
        for h in stages[-1]:
            last = h[-1] if h else 0
            for sub in submasks(full & ~last):
                nxt.append(h + (last | sub,))
        stages.append(nxt)
    return stages


def _async_histories(cells):
    stages = [[()]]
    for t in range(1, len(cells)):
        prev = stages[-1]
        nxt = []
        for h in prev:
            for sub in submasks(cells[t - 1]):
                nxt.append(h + (sub,))
        stages.append(nxt)
    return stages


def _leq_history(h1, h2):
    """Componentwise profile order on same-stage histories."""
    return all(a & ~b == 0 for a, b in zip(h1, h2))


def _sorted_with_predecessors(histories):
    """Linear extension plus, per history, the indices of earlier histories
    it dominates (for monotone-map pruning)."""
    order = sorted(histories, key=lambda h: (sum(m.bit_count() for m in h), h))
    preds = []
    for idx, h in enumerate(order):
        below = [j for j in range(idx) if _leq_history(order[j], h)]
        preds.append(below)
    return order, preds


class _Budget:
    def __init__(self, cap):
        self.cap = cap
        self.used = 0

    def spend(self, k=1):
        self.used += k
        if self.used > self.cap:
            raise ResourceLimitError(
                f"oracle enumeration exceeded {self.cap} steps", size=self.used
            )


# ---------------------------------------------------------------------------
# MSPNE: literal enumeration of monotone profiles, stage-layered


def _monotone_selections(order, preds, options, budget):
    """All monotone assignments history -> action profile, option lists given
    per history in `order`; yields dicts."""
    chosen = [None] * len(order)

    def rec(idx):
        if idx == len(order):
            yield dict(zip(order, chosen))
            return
        for a in options[idx]:
            budget.spend()
            if all(chosen[j] & ~a == 0 for j in preds[idx]):
                chosen[idx] = a
                yield from rec(idx + 1)
        chosen[idx] = None

    yield from rec(0)


def _mspne_outcomes(game, stages, moves_of, value_terminal, budget):
    """Common MSPNE engine over precomputed history stages.

    moves_of(t, h) yields legal stage-t action profiles at history h;
    value_terminal(h, a) is the final outcome of choosing a at the last stage.
    """
    pay = game._payoff
    T = len(stages)
    outcomes = set()

    layers = [_sorted_with_predecessors(stages[t]) for t in range(T)]

    def stage_options(t, h, value):
        opts = []
        for a, movers in moves_of(t, h):
            v = value(h, a)
            ok = True
            for i in bits(movers):
                flip = a ^ (1 << i)
                if pay(i, v) < pay(i, value(h, flip)):
                    ok = False
                    break
            if ok:
                opts.append((a, v))
        return opts

    def run(t, w_next):
        order, preds = layers[t]
        if t == T - 1:
            value = value_terminal
        else:
            value = lambda h, a: w_next[h + (a,)]
        per_hist = []
        for h in order:
            opts = stage_options(t, h, value)
            if not opts:
                return  # no admissible stage map under this continuation
            per_hist.append(opts)
        actions = [[a for a, _ in opts] for opts in per_hist]
        values = [dict(opts) for opts in per_hist]
        for sel in _monotone_selections(order, preds, actions, budget):
            if t == 0:
                outcomes.add(values[0][sel[()]])
            else:
                w = {}
                for idx, h in enumerate(order):
                    w[h] = values[idx][sel[h]]
                run(t - 1, w)

    run(T - 1, None)
    return outcomes


def _mspne_sync(game, T, budget):
    full = game.all_players
    stages = _sync_histories(game.n, T)

    def moves_of(t, h):
        last = h[-1] if h else 0
        for sub in submasks(full & ~last):
            yield last | sub, full & ~last

    def terminal(h, a):
        return a

    return _mspne_outcomes(game, stages, moves_of, terminal, budget)


def _mspne_async(game, p, budget):
    cells = p.cells
    stages = _async_histories(cells)

    def moves_of(t, h):
        for sub in submasks(cells[t]):
            yield sub, cells[t]

    def terminal(h, a):
        out = a
        for m in h:
            out |= m
        return out

    return _mspne_outcomes(game, stages, moves_of, terminal, budget)


# ---------------------------------------------------------------------------
# SPNE: exact value-set recursion (selections at distinct subgames are
# independent, so a deviation is deterred iff SOME continuation punishes it)


def _spne_sync(game, T):
    pay = game._payoff
    full = game.all_players
    memo = {}

    def vs(t, last):
        key = (t, last)
        got = memo.get(key)
        if got is not None:
            return got
        if t == T + 1:
            got = frozenset((last,))
            memo[key] = got
            return got
        res = set()
        free_all = full & ~last
        for sub in submasks(free_all):
            a = last | sub
            succ = vs(t + 1, a)
            if not succ:
                continue
            deterred = True
            floors = {}
            for i in bits(free_all):
                alt = vs(t + 1, a ^ (1 << i))
                if not alt:
                    deterred = False
                    break
                floors[i] = min(pay(i, w) for w in alt)
            if not deterred:
                continue
            for v in succ:
                if all(pay(i, v) >= floors[i] for i in floors):
                    res.add(v)
        got = frozenset(res)
        memo[key] = got
        return got

    root = vs(1, 0)
    # A pure SPNE must induce one on every subgame, including those reached
    # only by multi-player deviations; if any is empty, none exists at all.
    for t in range(2, T + 1):
        for last in range(full + 1):
            if not vs(t, last):
                return set()
    return set(root)


def _spne_async(game, p):
    pay = game._payoff
    cells = p.cells
    T = len(cells)
    memo = {}

    def vs(t, committed):
        key = (t, committed)
        got = memo.get(key)
        if got is not None:
            return got
        if t == T:
            got = frozenset((committed,))
            memo[key] = got
            return got
        res = set()
        for a in submasks(cells[t]):
            succ = vs(t + 1, committed | a)
            if not succ:
                continue
            ok = True
            floors = {}
            for i in bits(cells[t]):
                alt = vs(t + 1, committed | (a ^ (1 << i)))
                if not alt:
                    ok = False
                    break
                floors[i] = min(pay(i, w) for w in alt)
            if not ok:
                continue
            for v in succ:
                if all(pay(i, v) >= floors[i] for i in floors):
                    res.add(v)
        got = frozenset(res)
        memo[key] = got
        return got

    root = vs(0, 0)
    prefix = 0
    for t in range(1, T):
        prefix |= cells[t - 1]
        for committed in submasks(prefix):
            if not vs(t, committed):
                return set()
    return set(root)


# ---------------------------------------------------------------------------
# public API


def enumerate_equilibria(game, schedule, mode="mspne", budget=DEFAULT_BUDGET):
    """Exhaustively enumerate pure-strategy equilibrium outcomes.

    mode "mspne" walks every monotone profile (one-shot deviations checked at
    every history, on-path or not); mode "spne" drops the monotonicity
    restriction and computes the outcome set by the value-set recursion.
    Returns the set of terminal coalition masks.
    """
    mode = mode.lower()
    if isinstance(schedule, Sync):
        if schedule.T < 1:
            raise ValueError("horizon must be positive")
        if mode == "mspne":
            return _mspne_sync(game, schedule.T, _Budget(budget))
        if mode == "spne":
            return _spne_sync(game, schedule.T)
    elif isinstance(schedule, Async):
        p = schedule.partition
        p.validate_cover(game.n)
        if mode == "mspne":
            return _mspne_async(game, p, _Budget(budget))
        if mode == "spne":
            return _spne_async(game, p)
    else:
        raise ValueError("schedule must be Sync(T) or Async(partition)")
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# the conservative witness profile


@dataclass
class StrategyProfile:
    """Joint pure strategy for a synchronous game, stored as one action-profile
    mask per (reachable or not) history; replaying from the empty history
    gives `outcome`."""

    T: int
    moves: dict
    outcome: int

    def action(self, i, h):
        return (self.moves[h] >> i) & 1

    def replay(self):
        h = ()
        for _ in range(self.T):
            h = h + (self.moves[h],)
        return h[-1]


def _verify_mspne(game, T, profile):
    """Monotonicity plus one-shot deviations at every history."""
    pay = game._payoff
    full = game.all_players
    stages = _sync_histories(game.n, T)

    def play_out(h):
        while len(h) < T:
            h = h + (profile.moves[h],)
        return h[-1]

    for t in range(T):
        hs = stages[t]
        for a_idx, ha in enumerate(hs):
            ma = profile.moves[ha]
            last = ha[-1] if ha else 0
            if last & ~ma:
                return False, f"irreversibility violated at {ha}"
            for hb in hs[a_idx + 1 :]:
                if _leq_history(ha, hb) and profile.moves[ha] & ~profile.moves[hb]:
                    return False, f"monotonicity violated between {ha} and {hb}"
                if _leq_history(hb, ha) and profile.moves[hb] & ~profile.moves[ha]:
                    return False, f"monotonicity violated between {hb} and {ha}"
            base = play_out(ha + (ma,))
            for i in bits(full & ~last):
                dev = ma ^ (1 << i)
                alt = play_out(ha + (dev,))
                if pay(i, alt) > pay(i, base):
                    return False, f"player {i} deviates at {ha}"
    return True, ""


def support_strategy(game, T, X, solver=None):
    """The conservative monotone witness carrying outcome X at horizon T.

    Nobody pledges; mid-game moves only echo earlier pledges; the final move
    plays X plus whatever the accumulated pledges force in (the least outcome
    of the residual game at the remaining horizon).  The profile is verified
    to be a monotone equilibrium by one-shot deviation before it is returned.
    """
    solver = solver or SyncSolver(game)
    if X not in set(solver.outcome_set(T)):
        raise PreconditionError(f"{members(X)} is not an achievable outcome at T={T}")
    full = game.all_players
    moves = {}
    stages = _sync_histories(game.n, T)

    if X == full:
        for t in range(T):
            for h in stages[t]:
                moves[h] = full
        profile = StrategyProfile(T=T, moves=moves, outcome=full)
    else:
        forced = {(): X}
        for t in range(1, T):
            for h in stages[t]:
                prev = forced[h[:-1]]
                locked = prev | h[-1]
                rest = full & ~locked
                forced[h] = locked | solver.least_outcome(
                    T - t, ctx=Context(rest, locked)
                )
        for t in range(T):
            for h in stages[t]:
                if t < T - 1:
                    moves[h] = h[-1] if h else 0
                else:
                    moves[h] = X | forced[h]
        profile = StrategyProfile(T=T, moves=moves, outcome=0)
        profile.outcome = profile.replay()
        if profile.outcome != X:
            raise RuntimeError(
                f"conservative profile realises {members(profile.outcome)} "
                f"instead of {members(X)}; solver inconsistency"
            )
    ok, why = _verify_mspne(game, T, profile)
    if not ok:
        raise RuntimeError(f"conservative profile fails verification: {why}")
    return profile
