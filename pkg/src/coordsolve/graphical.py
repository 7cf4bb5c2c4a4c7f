"""Weakest-link games on digraphs and the sufficient-graph equivalence layer.

Any compliant stage game can be rewritten, horizon-for-horizon, as a
weakest-link game on a sufficient digraph: the solver's policy tree dictates
the edges (divide: split-off -> remainder; dominate: player -> everyone left;
delete: player <-> everyone left) and a per-player pruning pass shrinks each
in-neighborhood to a minimal satisfying set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .core import StageGame, bits, mask_of, members
from .digraph import Digraph, reach, tree_depth
from .errors import PreconditionError, ResourceLimitError
from .sync import SyncSolver


def weakest_link_game(g):
    """Stage game on g where i gains from action 1 exactly when all of its
    in-neighbors play 1 (payoff +1/-1, and 0 under action 0)."""
    in_masks = tuple(g.in_mask(i) for i in range(g.n))

    def pay(i, X):
        if not (X >> i) & 1:
            return 0
        return 1 if in_masks[i] & ~X == 0 else -1

    return StageGame(
        g.n, pay, kind="weakest_link", params={"edges": tuple(sorted(g.edges))}
    )


def threshold_game(g, k):
    """Stage game on g where i gains from action 1 exactly when at least k_i
    of its in-neighbors play 1."""
    if len(k) != g.n:
        raise ValueError("one threshold per player required")
    in_masks = tuple(g.in_mask(i) for i in range(g.n))
    k = tuple(int(v) for v in k)
    for i, ki in enumerate(k):
        deg = in_masks[i].bit_count()
        if not 1 <= ki <= deg:
            raise ValueError(f"threshold k[{i}]={ki} outside 1..{deg}")

    def pay(i, X):
        if not (X >> i) & 1:
            return 0
        return 1 if (in_masks[i] & X).bit_count() >= k[i] else -1

    return StageGame(
        g.n,
        pay,
        kind="threshold",
        params={"edges": tuple(sorted(g.edges)), "k": k},
    )


def weakest_link_horizon(g, targets):
    """Horizon needed by the weakest-link game on g to guarantee `targets`:
    the tree-depth of the subgraph induced on everything that reaches them.
    The empty target is degenerate and costs the single mandatory stage."""
    scope = reach(g, targets)
    if scope == 0:
        return 1
    return tree_depth(g, scope)[0]


def _satisfies(game, i, others):
    bit = 1 << i
    return game._payoff(i, others | bit) > game._payoff(i, others)


def _first_minimal_satisfying(game, i, pool):
    """Smallest-cardinality (then lexicographic) subset of `pool` whose joint
    action 1 makes i strictly willing; None if even `pool` does not.  Pools
    too large to enumerate fall back to a greedy drop from the highest index,
    which is still inclusion-minimal and deterministic."""
    if not _satisfies(game, i, pool):
        return None
    elems = members(pool)
    if len(elems) > 16:
        kept = pool
        for v in reversed(elems):
            trial = kept & ~(1 << v)
            if _satisfies(game, i, trial):
                kept = trial
        return kept
    for size in range(len(elems) + 1):
        for combo in combinations(elems, size):
            E = mask_of(combo)
            if _satisfies(game, i, E):
                return E
    return pool  # unreachable: pool itself satisfies


def minimal_satisfying_sets(game, i):
    """All inclusion-minimal E <= N\\{i} with u_i(E u {i}) > u_i(E).

    Enumerated by increasing cardinality, so supersets of found sets are
    skipped; the full complement must qualify (otherwise i's action 1 is
    dominated and no sufficient graph exists for it)."""
    pool = game.all_players & ~(1 << i)
    if not _satisfies(game, i, pool):
        raise PreconditionError(
            f"player {i} never strictly gains from action 1; "
            "no satisfying set exists"
        )
    elems = members(pool)
    found = []
    for size in range(len(elems) + 1):
        for combo in combinations(elems, size):
            E = mask_of(combo)
            if any(prev & E == prev for prev in found):
                continue
            if _satisfies(game, i, E):
                found.append(E)
    return found


@dataclass(frozen=True)
class SufficientGraph:
    """Digraph whose in-neighborhoods strictly incentivize every player;
    minimal if no in-edge can be dropped anywhere."""

    graph: Digraph
    minimal: bool


def reduce_to_weakest_link(game, solver=None):
    """Rewrite the game as a weakest-link instance with identical horizons.

    Walks the solved policy tree adding edges per operation, prefixes the
    cascade of initially dominant players, then prunes each in-neighborhood
    to a minimal satisfying subset.  Requires that no player's action 1 is
    iteratively strictly dominated.
    """
    solver = solver or SyncSolver(game)
    if solver.dropped:
        raise PreconditionError(
            f"players {members(solver.dropped)} are forced to action 0; "
            "no sufficient graph covers them"
        )
    n = game.n
    edges = set()

    # initially dominant players cascade first, in elimination order
    remaining = game.all_players
    done = 0
    while done != solver.forced_one:
        step = None
        for i in bits(solver.forced_one & ~done):
            if game._payoff(i, done | (1 << i)) > game._payoff(i, done):
                step = i
                break
        assert step is not None, "forced-one cascade stalled"
        remaining &= ~(1 << step)
        for j in bits(remaining):
            edges.add((step, j))
        done |= 1 << step

    def walk(node, S):
        while node.op == "dominate" or node.op == "delete":
            i = node.player
            rest = S & ~(1 << i)
            for j in bits(rest):
                edges.add((i, j))
                if node.op == "delete":
                    edges.add((j, i))
            S = rest
            node = node.children[0]
        if node.op == "divide":
            X = node.split
            rest = S & ~X
            for i in bits(X):
                for j in bits(rest):
                    edges.add((i, j))
            walk(node.children[0], X)
            walk(node.children[1], rest)

    walk(solver.policy(), solver.base.active)

    raw = Digraph(n, edges)
    pruned = set()
    for i in range(n):
        E = _first_minimal_satisfying(game, i, raw.in_mask(i))
        if E is None:
            raise PreconditionError(
                f"constructed in-neighborhood of player {i} is not satisfying; "
                "the game violates the solver assumptions"
            )
        for j in bits(E):
            pruned.add((j, i))
    return SufficientGraph(Digraph(n, pruned), minimal=True)


def horizon_via_graphs(game, targets, limit=10**6):
    """Minimum, over all minimal sufficient graphs (one minimal satisfying
    in-set per player), of the weakest-link horizon for `targets`.  A
    verification tool: refuses products beyond `limit` combinations."""
    choices = [minimal_satisfying_sets(game, i) for i in range(game.n)]
    size = 1
    for c in choices:
        size *= len(c)
    if size > limit:
        raise ResourceLimitError(
            f"minimal-graph product has {size} combinations (limit {limit})",
            size=size,
        )
    best = None
    for ins in product(*choices):
        edges = [(j, i) for i, E in enumerate(ins) for j in bits(E)]
        v = weakest_link_horizon(Digraph(game.n, edges), targets)
        if best is None or v < best:
            best = v
    return best
