"""Principal-facing analyses: which horizons can ever be optimal, player
centrality orders, and the marginal effect of subsidising players."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Context, bits, check_assumptions, members, ne_set
from .sync import SyncSolver


def horizon_count_bound(n):
    """1 + floor(sqrt(2n + 9/4) - 3/2), computed exactly in integers."""
    return 1 + (math.isqrt(8 * n + 9) - 3) // 2


@dataclass
class HorizonLedger:
    """Horizons at which the least outcome strictly grows (with the grown
    set), plus the count bound they must respect."""

    candidates: list
    bound: int


def candidate_horizons(game, solver=None):
    """Every horizon whose least outcome strictly exceeds the previous one's
    (the empty set at horizon 0), i.e. the horizons a cost-sensitive principal
    could ever pick.  The count never exceeds the square-root bound."""
    solver = solver or SyncSolver(game)
    bound = horizon_count_bound(game.n)
    cands = []
    prev = 0
    top = solver.forced_one | solver.base.active
    for T in range(1, game.n + 1):
        cur = solver.least_outcome(T)
        if cur & ~prev:
            cands.append((T, cur))
        prev = cur
        if cur == top:
            break
    if len(cands) > bound:
        raise RuntimeError(
            f"ledger bound violated: {len(cands)} growth points exceed {bound}; "
            "this indicates a solver bug or an assumption-violating game"
        )
    return HorizonLedger(candidates=cands, bound=bound)


def weak_centrality(game, solver=None):
    """Total preorder of players by their singleton horizon, ascending.

    Returns a list of (horizon, players-mask) classes; players whose action 1
    is iteratively dominated never activate and land in a final (None, ...)
    class."""
    solver = solver or SyncSolver(game)
    groups = {}
    for i in range(game.n):
        bit = 1 << i
        if bit & solver.dropped:
            key = None
        else:
            key = solver.min_horizon(bit)
        groups[key] = groups.get(key, 0) | bit
    ranked = sorted((k, v) for k, v in groups.items() if k is not None)
    if None in groups:
        ranked.append((None, groups[None]))
    return ranked


def strong_centrality(game):
    """Matrix M[i][j]: does i play 1 in every stage-game equilibrium where j
    does?  Reflexive and transitive; implies the weak order."""
    n = game.n
    equilibria = ne_set(game)
    matrix = [[True] * n for _ in range(n)]
    for X in equilibria:
        for j in bits(X):
            for i in range(n):
                if not (X >> i) & 1:
                    matrix[i][j] = False
    return matrix


def intervention(game, subsidized, T, solver=None, verify_bounds=None):
    """Players newly guaranteed at horizon T when `subsidized` are paid to
    play 1 outright: the subsidised game's least outcome minus the original's.

    When the game satisfies the stage assumptions (or verify_bounds is forced
    on), also re-derives the single-subsidy sandwich: forcing any one player
    saves at most one stage toward full participation."""
    solver = solver or SyncSolver(game)
    n = game.n
    full = game.all_players
    baseline = solver.least_outcome(T)
    if subsidized == 0 or subsidized == full:
        boosted = 0  # nothing subsidised, or nobody left to react
    else:
        boosted = solver.least_outcome(T, ctx=Context(full & ~subsidized, subsidized))
    gain = boosted & ~baseline

    if verify_bounds is None:
        report = game.report or check_assumptions(game)
        verify_bounds = report.satisfies_assumptions and not solver.dropped
    if verify_bounds:
        whole = solver.min_horizon(full)
        for i in range(n):
            rest = full & ~(1 << i)
            ctx = Context(rest, 1 << i)
            sub = solver.min_horizon(rest, ctx=ctx)
            if not sub <= whole <= sub + 1:
                raise RuntimeError(
                    f"single-subsidy sandwich failed at player {i}: "
                    f"{sub} <= {whole} <= {sub + 1} is false"
                )
    return gain
