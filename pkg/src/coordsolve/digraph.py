"""Directed-graph machinery: SCCs, reachability closure, exact directed
tree-depth with elimination-tree certificates, and schedule extraction."""

from __future__ import annotations

from dataclasses import dataclass

from .core import Partition, bits, members
from .errors import PreconditionError


class Digraph:
    """Directed graph on vertices 0..n-1, no self-loops."""

    def __init__(self, n, edges):
        if n < 0:
            raise ValueError("negative vertex count")
        self.n = n
        es = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) out of range")
            es.add((i, j))
        self.edges = frozenset(es)
        self._succ = [0] * n
        self._pred = [0] * n
        for i, j in es:
            self._succ[i] |= 1 << j
            self._pred[j] |= 1 << i

    @property
    def all_vertices(self):
        return (1 << self.n) - 1

    def out_mask(self, i):
        return self._succ[i]

    def in_mask(self, i):
        """In-neighborhood E_i = {j : (j,i) in E}."""
        return self._pred[i]

    def restricted_in_mask(self, i, vertices):
        return self._pred[i] & vertices

    def __repr__(self):
        return f"Digraph(n={self.n}, edges={sorted(self.edges)})"


def scc(g, vertices=None):
    """Strongly connected components of the induced subgraph, as masks in a
    topological order of the condensation (sources first).  Singletons count
    as strongly connected."""
    if vertices is None:
        vertices = g.all_vertices
    index = {}
    low = {}
    on_stack = 0
    stack = []
    comps = []
    counter = [0]
    succ = g._succ

    for root in bits(vertices):
        if root in index:
            continue
        work = [(root, iter(members(succ[root] & vertices)))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack |= 1 << root
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack |= 1 << w
                    work.append((w, iter(members(succ[w] & vertices))))
                    advanced = True
                    break
                elif (on_stack >> w) & 1:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = 0
                while True:
                    w = stack.pop()
                    on_stack &= ~(1 << w)
                    comp |= 1 << w
                    if w == v:
                        break
                comps.append(comp)
    comps.reverse()  # Tarjan pops sinks first; reversed gives topological order
    return comps


def reach(g, targets, vertices=None):
    """R(X): all vertices that can reach some member of X (length-0 paths
    included, so R(X) contains X).  Predecessor closure."""
    if vertices is None:
        vertices = g.all_vertices
    seen = targets & vertices
    frontier = seen
    pred = g._pred
    while frontier:
        nxt = 0
        for i in bits(frontier):
            nxt |= pred[i] & vertices
        frontier = nxt & ~seen
        seen |= frontier
    return seen


@dataclass(frozen=True)
class EliminationTree:
    """Certificate for directed tree-depth.

    A `removed` vertex with one child records the elimination step inside a
    strongly connected block; a node with several children splits into SCC
    subtrees; singleton leaves record the final vertex.  The tree's depth
    (eliminations count as a level, splits do not) equals the certified value.
    """

    vertices: int
    removed: int | None
    children: tuple

    @property
    def depth(self):
        if self.vertices == 0:
            return 0
        if self.removed is not None:
            if not self.children:
                return 1  # singleton leaf
            return 1 + self.children[0].depth
        return max(c.depth for c in self.children)


def tree_depth(g, vertices=None):
    """Exact directed tree-depth of the induced subgraph, with certificate.

    td(empty)=0, td(singleton)=1; a strongly connected block with >=2 vertices
    costs 1 plus the best vertex removal; otherwise the value is the max over
    SCC subgraphs.  Memoized exhaustive search over vertex subsets; removal
    candidates are scanned in ascending index so certificates are
    deterministic.
    """
    if vertices is None:
        vertices = g.all_vertices
    memo = {}

    def solve(mask):
        if mask == 0:
            return EliminationTree(0, None, ())
        comps = scc(g, mask)
        if len(comps) == 1:
            return solve_scc(comps[0])
        return EliminationTree(mask, None, tuple(solve_scc(c) for c in comps))

    def solve_scc(mask):
        if mask.bit_count() == 1:
            return EliminationTree(mask, mask.bit_length() - 1, ())
        node = memo.get(mask)
        if node is not None:
            return node
        best = None
        for v in bits(mask):
            child = solve(mask & ~(1 << v))
            cand = EliminationTree(mask, v, (child,))
            if best is None or cand.depth < best.depth:
                best = cand
                if best.depth == 2:  # minimum possible for a non-singleton SCC
                    break
        memo[mask] = best
        return best

    cert = solve(vertices)
    return cert.depth, cert


def _levels(tree):
    """Per-level vertex masks of an elimination tree (level 1 first)."""
    if tree.vertices == 0:
        return []
    if tree.removed is not None:
        rest = _levels(tree.children[0]) if tree.children else []
        return [1 << tree.removed] + rest
    merged = []
    for child in tree.children:
        for t, m in enumerate(_levels(child)):
            if t == len(merged):
                merged.append(0)
            merged[t] |= m
    return merged


def partition_from_treedepth(g, T, vertices=None):
    """A T-cell schedule certified by the elimination tree: the removed vertex
    goes to the earliest free slot, SCC siblings are merged slot-wise.  Cells
    beyond the tree's depth are left empty (trailing padding).  No two
    same-cell vertices are strongly connected in the suffix subgraph."""
    value, cert = tree_depth(g, vertices)
    if value > T:
        raise PreconditionError(f"tree-depth {value} exceeds requested horizon {T}")
    cells = _levels(cert)
    cells += [0] * (T - len(cells))
    return Partition(cells)


def check_feasible_partition(g, p, M=None):
    """Does the schedule separate M?  For every cell t, no two members of
    cell_t ∩ M may be strongly connected in the subgraph induced on the suffix
    (cells t..T) intersected with M."""
    if M is None:
        M = g.all_vertices
    union = 0
    for c in p.cells:
        union |= c
    suffix = union & M
    for cell in p.cells:
        focus = cell & M
        if focus.bit_count() > 1:
            for comp in scc(g, suffix):
                if (comp & focus).bit_count() > 1:
                    return False
        suffix &= ~cell
    return True
