"""Stage-game core: exact payoffs, assumption checks, Nash and dominance machinery.

Players are indexed 0..n-1.  A coalition mask is an int whose bit i is set
exactly when player i plays action 1; the mask doubles as the action profile.
All payoffs are exact (int or Fraction) -- the assumption checks distinguish
ties from strict inequalities, so floats are rejected outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PreconditionError


# ---------------------------------------------------------------------------
# player-set helpers


def mask_of(players):
    """Build a coalition mask from an iterable of player indices."""
    m = 0
    for p in players:
        m |= 1 << p
    return m


def members(mask):
    """Sorted tuple of player indices in the mask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def bits(mask):
    """Iterate player indices of a mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask):
    """All submasks of `mask`, including 0 and mask itself (descending)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def sorted_subsets(mask):
    """Submasks ordered by (cardinality, lexicographic member tuple)."""
    return sorted(submasks(mask), key=lambda m: (m.bit_count(), members(m)))


# ---------------------------------------------------------------------------
# stage games


_EXACT = (int, Fraction)


class StageGame:
    """A binary-action normal-form game with an exact payoff oracle.

    `payoff(i, X)` returns player i's utility when exactly the members of X
    play action 1 (i's own action is read from membership).  `kind` is one of
    "table", "weakest_link", "threshold", "aggregative"; `params` keeps the
    construction data so documents can be re-emitted.
    """

    def __init__(self, n, payoff_fn, kind="table", params=None):
        if n <= 0:
            raise ValueError("need at least one player")
        self.n = n
        self._payoff = payoff_fn
        self.kind = kind
        self.params = params or {}
        self.report = None  # optionally attached AssumptionReport

    @property
    def all_players(self):
        return (1 << self.n) - 1

    def payoff(self, i, coalition):
        if not 0 <= i < self.n:
            raise IndexError(f"player {i} out of range 0..{self.n - 1}")
        if coalition < 0 or coalition >> self.n:
            raise IndexError(f"coalition {coalition:#x} not within {self.n} players")
        return self._payoff(i, coalition)

    def __repr__(self):
        return f"StageGame(n={self.n}, kind={self.kind!r})"


def table_game(rows):
    """Game from explicit payoff rows: rows[i][mask] = u_i(mask), exact values."""
    n = len(rows)
    size = 1 << n
    table = []
    for i, row in enumerate(rows):
        if len(row) != size:
            raise ValueError(f"player {i}: expected {size} payoffs, got {len(row)}")
        vals = []
        for v in row:
            if isinstance(v, bool) or not isinstance(v, _EXACT):
                raise TypeError(f"player {i}: payoff {v!r} is not an exact rational")
            vals.append(v)
        table.append(tuple(vals))
    return StageGame(n, lambda i, X: table[i][X], kind="table", params={"rows": table})


def aggregative_game(c):
    """Game where i strictly wants action 1 iff at least c_i others play 1."""
    n = len(c)
    c = tuple(int(v) for v in c)
    for i, ci in enumerate(c):
        if not 1 <= ci <= n - 1:
            raise ValueError(f"threshold c[{i}]={ci} outside 1..{n - 1}")

    def pay(i, X):
        if not (X >> i) & 1:
            return 0
        return 1 if (X & ~(1 << i)).bit_count() >= c[i] else -1

    return StageGame(n, pay, kind="aggregative", params={"c": c})


# ---------------------------------------------------------------------------
# contexts: auxiliary games with some players forced to 1 and the rest to 0


@dataclass(frozen=True)
class Context:
    """Active players S play the game; players in `ones` are fixed at action 1;
    everyone else is fixed at action 0.  Payoffs of i in S at X <= S are
    u_i(X | ones)."""

    active: int
    ones: int

    def __post_init__(self):
        if self.active & self.ones:
            raise ValueError("active and forced-one sets overlap")


def full_context(game):
    return Context(game.all_players, 0)


def _ctx_pay(game, ctx):
    ones = ctx.ones
    pay = game._payoff
    return lambda i, X: pay(i, X | ones)


# ---------------------------------------------------------------------------
# Assumption report


@dataclass(frozen=True)
class Violation:
    check: str
    player: int
    low: int
    high: int


@dataclass
class AssumptionReport:
    single_crossing: bool = True
    common_interests: bool = True
    deviation_proof: bool = True
    nondegenerate: bool = True
    witnesses: list = field(default_factory=list)

    @property
    def satisfies_assumptions(self):
        """The three stage-game conditions (nondegeneracy is tracked apart)."""
        return self.single_crossing and self.common_interests and self.deviation_proof


def check_assumptions(game, ctx=None):
    """Exhaustively verify the stage-game conditions over all ordered profile pairs.

    Checks, per active player i and all pairs low < high of opponents'
    coalitions: single crossing, common interests (monotone indirect utility
    plus the tie-break rule, which we interpret on the indirect utility itself
    and label "tie-break (interpreted)"), and the deviation-proof condition.
    Nondegeneracy asks that action 1 be strictly best against all-ones
    opponents and strictly worst against all-zeros.
    """
    if ctx is None:
        ctx = full_context(game)
    pay = _ctx_pay(game, ctx)
    rep = AssumptionReport()
    wit = rep.witnesses

    for i in bits(ctx.active):
        bit = 1 << i
        others = ctx.active & ~bit
        u0 = {}
        u1 = {}
        for m in submasks(others):
            u0[m] = pay(i, m)
            u1[m] = pay(i, m | bit)

        # Assumption 2 (nondegeneracy): strict preference flips between extremes.
        if not u1[others] > u0[others]:
            rep.nondegenerate = False
            wit.append(Violation("nondegenerate", i, others, others))
        if not u0[0] > u1[0]:
            rep.nondegenerate = False
            wit.append(Violation("nondegenerate", i, 0, 0))

        for high in submasks(others):
            low = (high - 1) & high
            while True:
                if low == high:  # only proper submasks
                    break
                d_lo = u1[low] - u0[low]
                d_hi = u1[high] - u0[high]
                if (d_lo >= 0 and d_hi < 0) or (d_lo > 0 and d_hi <= 0):
                    rep.single_crossing = False
                    wit.append(Violation("single_crossing", i, low, high))
                m_lo = max(u0[low], u1[low])
                m_hi = max(u0[high], u1[high])
                if m_hi < m_lo:
                    rep.common_interests = False
                    wit.append(Violation("common_interests", i, low, high))
                elif u1[high] >= u0[high] and u0[low] >= u1[low] and not m_hi > m_lo:
                    rep.common_interests = False
                    wit.append(Violation("tie-break (interpreted)", i, low, high))
                if (u1[high] >= u0[low] and u1[high] < u0[high]) or (
                    u1[high] > u0[low] and u1[high] <= u0[high]
                ):
                    rep.deviation_proof = False
                    wit.append(Violation("deviation_proof", i, low, high))
                if low == 0:
                    break
                low = (low - 1) & high
    return rep


# ---------------------------------------------------------------------------
# Nash machinery


def least_ne(game, ctx=None):
    """Least pure Nash equilibrium of the contextual game.

    Best-response iteration upward from the all-zero profile, breaking ties
    toward action 0; reaches the fixpoint in at most |S| rounds.  A
    non-monotone step means the single-crossing condition fails, which is
    reported as a precondition error.
    """
    if ctx is None:
        ctx = full_context(game)
    pay = _ctx_pay(game, ctx)
    cur = 0
    for _ in range(ctx.active.bit_count() + 1):
        nxt = 0
        for i in bits(ctx.active):
            bit = 1 << i
            rest = cur & ~bit
            if pay(i, rest | bit) > pay(i, rest):
                nxt |= bit
        if nxt == cur:
            return cur
        if nxt & cur != cur:
            raise PreconditionError(
                "best-response iteration is not monotone; single-crossing fails"
            )
        cur = nxt
    raise PreconditionError("best-response iteration failed to converge")


def is_ne(game, ctx, X):
    """Is X <= ctx.active a pure Nash equilibrium of the contextual game?"""
    pay = _ctx_pay(game, ctx)
    for i in bits(ctx.active):
        bit = 1 << i
        if X & bit:
            if pay(i, X) < pay(i, X & ~bit):
                return False
        else:
            if pay(i, X) < pay(i, X | bit):
                return False
    return True


def ne_set(game, ctx=None):
    """All pure Nash equilibria of the contextual game, by brute force.

    Returned in (cardinality, lexicographic) order.
    """
    if ctx is None:
        ctx = full_context(game)
    out = [X for X in submasks(ctx.active) if is_ne(game, ctx, X)]
    return sorted(out, key=lambda m: (m.bit_count(), members(m)))


def iterated_strict_elimination(players_mask, pay):
    """Iterated elimination of strictly dominated actions in a binary game.

    `pay(i, X)` gives i's payoff when exactly X (a submask of players_mask)
    plays 1.  Dominance is checked against every surviving opponent profile,
    so the result is order-independent and correct without any assumptions.
    Returns (least, greatest): per-player minimum and maximum surviving action
    encoded as coalition masks.
    """
    can0 = players_mask  # players for whom action 0 still survives
    can1 = players_mask
    changed = True
    while changed:
        changed = False
        for i in bits(can0 & can1):
            bit = 1 << i
            forced1 = can1 & ~can0
            free = can0 & can1 & ~bit
            worse1 = True  # action 1 strictly dominated by 0
            worse0 = True
            for sub in submasks(free):
                prof = sub | forced1
                a1 = pay(i, prof | bit)
                a0 = pay(i, prof)
                if a1 >= a0:
                    worse1 = False
                if a0 >= a1:
                    worse0 = False
                if not worse0 and not worse1:
                    break
            if worse1:
                can1 &= ~bit
                changed = True
            elif worse0:
                can0 &= ~bit
                changed = True
    return can1 & ~can0, can1


def iesds(game, ctx=None):
    """Iterated strict dominance on the contextual game; see
    iterated_strict_elimination.  Works without Assumption 1."""
    if ctx is None:
        ctx = full_context(game)
    return iterated_strict_elimination(ctx.active, _ctx_pay(game, ctx))


def sss_set(game, ctx=None, require_ne=False):
    """Strictly sufficient sets of the contextual game.

    Nonempty X <= S whose members all strictly prefer joint action 1 over
    unilaterally staying out; intersected with the Nash set when require_ne
    (the equilibrium variant).  Ordered by (cardinality, lexicographic).
    """
    if ctx is None:
        ctx = full_context(game)
    pay = _ctx_pay(game, ctx)
    out = []
    for X in submasks(ctx.active):
        if X == 0:
            continue
        ok = True
        for i in bits(X):
            if not pay(i, X) > pay(i, X & ~(1 << i)):
                ok = False
                break
        if ok and (not require_ne or is_ne(game, ctx, X)):
            out.append(X)
    return sorted(out, key=lambda m: (m.bit_count(), members(m)))


# ---------------------------------------------------------------------------
# partitions (the asynchronous move schedule; also produced by digraph ops)


@dataclass(frozen=True)
class Partition:
    """Ordered disjoint cells of players; the cell index is the move stage."""

    cells: tuple

    def __init__(self, cells):
        masks = tuple(int(c) for c in cells)
        seen = 0
        for c in masks:
            if c & seen:
                raise ValueError("partition cells overlap")
            seen |= c
        object.__setattr__(self, "cells", masks)

    @property
    def horizon(self):
        return len(self.cells)

    def union(self):
        m = 0
        for c in self.cells:
            m |= c
        return m

    def validate_cover(self, n):
        if self.union() != (1 << n) - 1:
            raise ValueError("partition does not cover all players")
