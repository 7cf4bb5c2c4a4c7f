"""Synchronous (monotone) game solver.

Computes, for a stage game under the package assumptions, the minimum number
of stages needed so that a target set plays 1 in every monotone subgame
perfect equilibrium (`min_horizon`), the least such equilibrium outcome per
horizon (`least_outcome`), the full outcome set per horizon (`outcome_set`),
and a replayable policy tree over three operations: dominate a player whose
action 1 became strictly dominant (free), force a player in at the cost of a
stage (delete), or split off a strictly sufficient set (divide).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Context,
    bits,
    full_context,
    is_ne,
    iterated_strict_elimination,
    members,
    ne_set,
    sss_set,
    submasks,
)
from .errors import PreconditionError


@dataclass(frozen=True)
class PolicyNode:
    """One step of the solved policy; replaying from its context reproduces
    `value`.  op is "dominate"/"delete" (one child), "divide" (two children:
    the split-off set with the same forced ones, then the remainder with the
    split forced in), or "stop" at the empty game."""

    op: str
    player: int | None
    split: int | None
    children: tuple
    value: int


class SyncSolver:
    """Solver instance for one stage game; caches subgame values.

    Degenerate players (strictly dominant actions, iterated) are stripped
    first and folded into the base context: forced ones join the forced set,
    forced zeros leave the game.  A solver instance is not thread-safe, but
    distinct instances are independent.
    """

    def __init__(self, game, use_sse=True):
        self.game = game
        self.use_sse = use_sse
        least, greatest = iterated_strict_elimination(game.all_players, game._payoff)
        self.forced_one = least
        self.dropped = game.all_players & ~greatest
        self.base = Context(greatest & ~least, least)
        self._memo = {}
        self._sss_cache = {}
        self._reduce_cache = {}

    # -- context plumbing ---------------------------------------------------

    def _reduce(self, ctx):
        """Strip iterated strictly dominant actions from a context."""
        key = (ctx.active, ctx.ones)
        got = self._reduce_cache.get(key)
        if got is None:
            pay = self.game._payoff
            least, greatest = iterated_strict_elimination(
                ctx.active, lambda i, X: pay(i, X | ctx.ones)
            )
            reduced = Context(ctx.active & greatest & ~least, ctx.ones | least)
            dropped = ctx.active & ~greatest
            got = (reduced, least, dropped)
            self._reduce_cache[key] = got
        return got

    def _candidates(self, S, O):
        key = (S, O)
        got = self._sss_cache.get(key)
        if got is None:
            got = sss_set(self.game, Context(S, O), require_ne=self.use_sse)
            self._sss_cache[key] = got
        return got

    # -- the recursion ------------------------------------------------------

    def value(self, S, O):
        """Minimum number of stages to reach all-ones in the auxiliary game
        (S active, O forced to 1), as a PolicyNode.  Every reachable context
        keeps all active players strictly willing at the top profile, so the
        recursion never meets a strictly dominated action 0."""
        key = (S, O)
        node = self._memo.get(key)
        if node is not None:
            return node

        pay = self.game._payoff
        chain = []
        S2, O2 = S, O
        while True:
            dom = None
            for i in bits(S2):
                bit = 1 << i
                if pay(i, O2 | bit) > pay(i, O2):
                    dom = i
                    break
            if dom is None:
                break
            chain.append(dom)
            S2 &= ~(1 << dom)
            O2 |= 1 << dom

        if S2 == 0:
            node = PolicyNode("stop", None, None, (), 1)
        else:
            best = None
            for X in self._candidates(S2, O2):
                if X == S2:
                    continue
                left = self.value(X, O2)
                right = self.value(S2 & ~X, O2 | X)
                v = max(left.value, right.value)
                if best is None or v < best.value:
                    best = PolicyNode("divide", None, X, (left, right), v)
            for i in bits(S2):
                child = self.value(S2 & ~(1 << i), O2 | (1 << i))
                if best is None or 1 + child.value < best.value:
                    best = PolicyNode("delete", i, None, (child,), 1 + child.value)
            node = best
        for i in reversed(chain):
            node = PolicyNode("dominate", i, None, (node,), node.value)
        self._memo[key] = node
        return node

    def policy(self):
        """Policy tree for the (reduced) full game."""
        return self.value(self.base.active, self.base.ones)

    # -- public operators ---------------------------------------------------

    def min_horizon(self, targets, ctx=None):
        """Smallest horizon T such that every monotone-SPNE outcome of the
        T-stage game (in the given context) contains `targets`."""
        if ctx is None:
            reduced, forced, dropped = self.base, self.forced_one, self.dropped
        else:
            reduced, forced, dropped = self._reduce(ctx)
        if targets & dropped:
            bad = members(targets & dropped)
            raise PreconditionError(
                f"players {bad} have a strictly dominated action 1; "
                "no horizon brings them in"
            )
        return self._min_horizon_reduced(targets, reduced)

    def _min_horizon_reduced(self, targets, reduced):
        want = targets & reduced.active
        if want == 0:
            return 1
        best = None
        for Y in self._candidates(reduced.active, reduced.ones):
            if Y & want == want:
                v = self.value(Y, reduced.ones).value
                if best is None or v < best:
                    best = v
        if best is None:
            raise PreconditionError(
                "no strictly sufficient candidate covers the target; "
                "the game is degenerate beyond repair"
            )
        return best

    def least_outcome(self, T, ctx=None):
        """Players taking action 1 in every monotone-SPNE of the T-stage game:
        the least equilibrium outcome."""
        if ctx is None:
            reduced, forced = self.base, self.forced_one
            scope = self.game.all_players
        else:
            reduced, forced, _ = self._reduce(ctx)
            scope = ctx.active
        out = forced & scope
        for i in bits(reduced.active):
            if self._min_horizon_reduced(1 << i, reduced) <= T:
                out |= 1 << i
        return out

    def outcome_set(self, T):
        """All monotone-SPNE outcomes at horizon T: Nash outcomes whose
        residual game forces nobody in within the remaining T stages."""
        res = []
        S, O = self.base.active, self.base.ones
        for X in ne_set(self.game, self.base):
            residual = Context(S & ~X, O | X)
            if self.least_outcome(T, ctx=residual) == 0:
                res.append(O | X)
        return sorted(res, key=lambda m: (m.bit_count(), members(m)))


# -- module-level conveniences ----------------------------------------------


def min_horizon(game, targets, use_sse=True):
    return SyncSolver(game, use_sse=use_sse).min_horizon(targets)


def least_outcome(game, T, use_sse=True):
    return SyncSolver(game, use_sse=use_sse).least_outcome(T)


def outcome_set(game, T, use_sse=True):
    return SyncSolver(game, use_sse=use_sse).outcome_set(T)
