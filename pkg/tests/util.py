"""Shared fixtures: small named example games, random game families that
provably satisfy the stage assumptions, and independent reference
implementations used to cross-check the solvers."""

from fractions import Fraction

from coordsolve import Digraph, aggregative_game, mask_of, table_game, weakest_link_game


def bit(X, i):
    return (X >> i) & 1


# ---------------------------------------------------------------------------
# canonical instances (player indices 0-based, named by their shape)


def clique_edges(size, offset=0):
    return [
        (i + offset, j + offset)
        for i in range(size)
        for j in range(size)
        if i != j
    ]


def two_triangles_graph():
    """Bidirected triangles {0,1,2} and {3,4,5}; 2->6, 5->6, 7->6, 6->7."""
    edges = clique_edges(3) + clique_edges(3, 3)
    edges += [(2, 6), (5, 6), (7, 6), (6, 7)]
    return Digraph(8, edges)


def two_triangles_game():
    return weakest_link_game(two_triangles_graph())


def hub_intervention_graph():
    """Complete bidirected block {0,1,2,3}; 0 feeds all of 4..8."""
    edges = clique_edges(4) + [(0, j) for j in range(4, 9)]
    return Digraph(9, edges)


def star_graph(leaves):
    return Digraph(
        leaves + 1,
        [(0, j) for j in range(1, leaves + 1)] + [(j, 0) for j in range(1, leaves + 1)],
    )


def cycle_graph(n):
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def cross_pairs_graph():
    """E_0={1}, E_1={0}, E_2={1,3}, E_3={0,2}: two linked pairs."""
    return Digraph(4, [(1, 0), (0, 1), (1, 2), (3, 2), (0, 3), (2, 3)])


def cross_pairs_game():
    return weakest_link_game(cross_pairs_graph())


def mixed_two_player_game():
    """Row player has dominant 0; column player matches the row player."""
    return table_game([[1, 0, 3, 2], [1, 2, 0, 3]])


def free_rider_game():
    """Players 0,1 have dominant 0; player 2 follows max(a_0, a_1)."""
    rows = []
    for i in range(3):
        row = []
        for X in range(8):
            a = [bit(X, k) for k in range(3)]
            if i < 2:
                row.append(2 * a[2] - a[i])
            else:
                row.append(a[2] * (2 * max(a[0], a[1]) - 1))
        rows.append(row)
    return table_game(rows)


def seven_player_design_game():
    """The seven-player game with a unique two-cell all-ones schedule."""
    rows = []
    for i in range(7):
        row = []
        for X in range(1 << 7):
            a = [bit(X, k) for k in range(7)]
            if i == 0:
                row.append(a[0] * (2 * a[1] * a[2] - 1) + 2 * a[4])
            elif i == 1:
                row.append(a[1] * (2 * a[0] - 1))
            elif i == 2:
                row.append(a[2] * (2 * a[0] - 1))
            elif i == 3:
                row.append(a[3] * (2 * a[0] * a[4] * a[5] * a[6] - 1))
            elif i == 4:
                row.append(a[4] * (2 * max(a[3], a[5] * a[6]) - 1))
            elif i == 5:
                row.append(a[5] * (2 * max(a[3], a[4] * a[6]) - 1))
            else:
                row.append(a[6] * (2 * max(a[3], a[4] * a[5]) - 1))
        rows.append(row)
    return table_game(rows)


def tie_break_violation_game():
    """Eight players; the indirect-utility tie-break fails for players 0,1."""
    rows = []
    for i in range(8):
        row = []
        for X in range(1 << 8):
            a = [bit(X, k) for k in range(8)]
            t1 = a[2] * a[3] * a[4]
            t2 = a[5] * a[6] * a[7]
            if i == 0:
                row.append(max(a[0] * (4 * a[1] - 3 + t1 + t2), 2 * t1))
            elif i == 1:
                row.append(max(a[1] * (4 * a[0] - 3 + t1 + t2), 2 * t1))
            elif i < 5:
                others = [k for k in (2, 3, 4) if k != i]
                row.append(a[i] * (2 * a[others[0]] * a[others[1]] - 1))
            else:
                others = [k for k in (5, 6, 7) if k != i]
                row.append(a[i] * (2 * a[others[0]] * a[others[1]] - 1))
        rows.append(row)
    return table_game(rows)


def spillover_pair_games():
    """Five players, a triangle feeding a pair; the second variant adds an
    epsilon spillover from player 3 to player 0 that kills the low outcome."""

    def base(i, X, eps):
        a = [bit(X, k) for k in range(5)]
        if i == 0:
            return 2 * min(a[0], a[1], a[2]) - a[0] + eps * a[3]
        if i in (1, 2):
            return 2 * min(a[0], a[1], a[2]) - a[i]
        if i == 3:
            return 2 * min(a[0], a[3], a[4]) - a[3]
        return 2 * min(a[3], a[4]) - a[4]

    plain = table_game([[base(i, X, 0) for X in range(32)] for i in range(5)])
    perturbed = table_game(
        [[base(i, X, Fraction(1, 2)) for X in range(32)] for i in range(5)]
    )
    return plain, perturbed


# ---------------------------------------------------------------------------
# random families (constructed to satisfy the stage assumptions by design)


def random_digraph(rng, n, p=0.35):
    edges = [
        (i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p
    ]
    return Digraph(n, edges)


def random_rooted_digraph(rng, n, p=0.35):
    """Random digraph where every vertex keeps at least one in-neighbor."""
    g = random_digraph(rng, n, p)
    edges = set(g.edges)
    for i in range(n):
        if not g.in_mask(i):
            j = rng.choice([v for v in range(n) if v != i])
            edges.add((j, i))
    return Digraph(n, edges)


def random_game(rng, n, spillovers=True):
    """Random assumption-satisfying table game.

    Each player's incentive to act is an upward-closed family generated by a
    few random minimal coalitions; the gain magnitude carries a monotone bonus
    and the base payoff an optional monotone spillover.  Scales are chosen so
    single crossing, common interests (with the tie-break), deviation
    proofness, and nondegeneracy all hold by construction.
    """
    K = 4 * n
    rows = []
    for i in range(n):
        others = [j for j in range(n) if j != i]
        seeds = [
            mask_of(rng.sample(others, rng.randint(1, len(others))))
            for _ in range(rng.randint(1, 3))
        ]
        beta = rng.randint(0, 2)
        bonus = mask_of(rng.sample(others, rng.randint(0, len(others))))
        gamma = rng.randint(0, 1) if spillovers else 0
        spill = mask_of(rng.sample(others, rng.randint(0, len(others))))
        row = []
        for X in range(1 << n):
            Z = X & ~(1 << i)
            sat = any(s & ~Z == 0 for s in seeds)
            gain = (2 * sat - 1) * K + beta * (Z & bonus).bit_count()
            base = gamma * (Z & spill).bit_count()
            row.append(base + bit(X, i) * gain)
        rows.append(row)
    return table_game(rows)


def random_threshold_vector(rng, g):
    return [rng.randint(1, max(g.in_mask(i).bit_count(), 1)) for i in range(g.n)]


def random_aggregative(rng, n):
    c = sorted(rng.randint(1, n - 1) for _ in range(n))
    return aggregative_game(c), c


# ---------------------------------------------------------------------------
# independent reference recursions


def _kosaraju(nodes, succ):
    order = []
    seen = set()

    def down(u):
        seen.add(u)
        for v in succ.get(u, ()):
            if v not in seen:
                down(v)
        order.append(u)

    for u in nodes:
        if u not in seen:
            down(u)

    pred = {u: set() for u in nodes}
    for u in nodes:
        for v in succ.get(u, ()):
            pred[v].add(u)

    comps = []
    assigned = set()
    for u in reversed(order):
        if u in assigned:
            continue
        comp = set()
        stack = [u]
        while stack:
            w = stack.pop()
            if w in assigned:
                continue
            assigned.add(w)
            comp.add(w)
            stack.extend(pred[w] - assigned)
        comps.append(comp)
    return comps


def cycle_rank(nodes, edge_set):
    """Textbook cycle-rank recursion on an explicit vertex/edge set."""
    nodes = set(nodes)
    succ = {}
    for a, c in edge_set:
        if a in nodes and c in nodes:
            succ.setdefault(a, set()).add(c)
    comps = [c for c in _kosaraju(sorted(nodes), succ) if len(c) > 1]
    if not comps:
        return 0
    best = 0
    for comp in comps:
        inner = min(
            cycle_rank(comp - {v}, edge_set) for v in sorted(comp)
        )
        best = max(best, 1 + inner)
    return best
