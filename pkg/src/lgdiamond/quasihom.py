"""Singularity-graph analysis of a quasihomogeneous polynomial.

Every variable of an admissible polynomial heads a "graph monomial"
x_j^a (a pure power, making j a root) or x_j^a * x_k (an arrow j -> k).
The chosen monomials define a functional graph whose components each
contain exactly one cycle, an integer exponent matrix whose rows are
the chosen monomials, and through it the unique reduced weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ._linalg import det, frac_matrix, mat_vec, solve
from .errors import (
    NoGraphMonomial,
    NotQuasihomogeneous,
    SingularExponentMatrix,
    WeightOutOfRange,
)
from .polynomial import Monomial, Polynomial, WeightSystem


@dataclass(frozen=True)
class SingularityGraph:
    """kappa map, chosen graph monomials, and component structure (0-based)."""

    kappa: tuple[int, ...]
    monomial_of: tuple[Monomial, ...]
    components: tuple[tuple[int, ...], ...]
    cycles: tuple[tuple[int, ...], ...]

    @property
    def nvars(self) -> int:
        return len(self.kappa)

    def roots(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.nvars) if self.kappa[j] == j)


@dataclass(frozen=True)
class GraphDecomposition:
    """f = f0 + trees + f_add: cycle monomials, tree parts, and the rest."""

    f0: Polynomial
    trees: tuple[Polynomial, ...]
    f_add: Polynomial
    is_star_shaped: bool

    @property
    def p(self) -> int:
        return len(self.trees)


@dataclass(frozen=True)
class ExponentMatrix:
    """Rows are the chosen graph monomials; always invertible."""

    rows: tuple[Monomial, ...]
    det: int


@dataclass(frozen=True)
class Classification:
    """Fermat/chain/loop atoms, or a reason the polynomial is not invertible.

    Each atom is (kind, vertices, exponents) with 0-based vertex indices;
    chain vertices run from the far leaf to the root.
    """

    atoms: tuple[tuple[str, tuple[int, ...], tuple[int, ...]], ...] | None
    reason: str | None

    @property
    def is_invertible(self) -> bool:
        return self.atoms is not None


@dataclass(frozen=True)
class TransposeResult:
    polynomial: Polynomial
    weights: tuple[Fraction, ...]
    all_positive: bool


def _graph_candidates(f: Polynomial, j: int):
    """(is_mixed, exponent, target) for every graph monomial headed by j."""
    out = []
    for mono in f.terms:
        support = [k for k, e in enumerate(mono) if e]
        if support == [j] and mono[j] >= 2:
            out.append((0, mono[j], j, mono))
        elif len(support) == 2 and mono[j] >= 1:
            k = support[0] if support[1] == j else support[1]
            if mono[k] == 1 and j in support:
                out.append((1, mono[j], k, mono))
    return out


def build_graph(f: Polynomial) -> SingularityGraph:
    """Select a graph monomial for every variable and build the graph.

    Tie-breaks: a pure power beats any arrow; among arrows the smallest
    exponent wins, then the smallest target index.  The reduced weights
    do not depend on the choice; the selection only fixes determinism.
    """
    nv = f.nvars
    kappa = []
    chosen = []
    for j in range(nv):
        candidates = _graph_candidates(f, j)
        if not candidates:
            raise NoGraphMonomial(
                f"variable #{j + 1} heads no monomial x^a or x^a*y; "
                "the polynomial cannot define an isolated singularity"
            )
        candidates.sort(key=lambda c: c[:3])
        _, _, target, mono = candidates[0]
        kappa.append(target)
        chosen.append(mono)

    # undirected components of the functional graph
    parent = list(range(nv))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in range(nv):
        parent[find(j)] = find(kappa[j])
    groups: dict[int, list[int]] = {}
    for j in range(nv):
        groups.setdefault(find(j), []).append(j)
    components = tuple(tuple(sorted(g)) for g in sorted(groups.values()))

    # the unique cycle per component: iterate kappa until a repeat
    cycles = []
    for comp in components:
        seen: dict[int, int] = {}
        v = comp[0]
        while v not in seen:
            seen[v] = len(seen)
            v = kappa[v]
        cycle_start = seen[v]
        walk = sorted(seen, key=seen.get)[cycle_start:]
        start = walk.index(min(walk))
        cycles.append(tuple(walk[start:] + walk[:start]))
    return SingularityGraph(tuple(kappa), tuple(chosen), components, tuple(cycles))


def decompose(f: Polynomial, graph: SingularityGraph) -> GraphDecomposition:
    """Split f into cycle monomials, hanging trees, and the remainder."""
    nv = f.nvars
    cycle_vertices = {v for cyc in graph.cycles for v in cyc}

    def monomial_part(vertices) -> Polynomial:
        out = Polynomial.zero(nv, f.n)
        for v in sorted(vertices):
            mono = graph.monomial_of[v]
            out = out + Polynomial.monomial(mono, f.terms[mono], nv, f.n)
        return out

    f0 = monomial_part(cycle_vertices)

    # trees: components of the non-cycle vertices under undirected adjacency
    tree_vertices = [j for j in range(nv) if j not in cycle_vertices]
    assigned: dict[int, int] = {}
    for j in tree_vertices:
        if j in assigned:
            continue
        stack, members = [j], []
        assigned[j] = j
        while stack:
            v = stack.pop()
            members.append(v)
            neighbors = [graph.kappa[v]] + [u for u in tree_vertices if graph.kappa[u] == v]
            for u in neighbors:
                if u in tree_vertices and u not in assigned:
                    assigned[u] = j
                    stack.append(u)
    roots_of_trees = sorted({assigned[j] for j in tree_vertices})
    trees = tuple(
        monomial_part([j for j in tree_vertices if assigned[j] == r]) for r in roots_of_trees
    )

    used = set(graph.monomial_of)
    f_add = Polynomial(nv, f.n, {m: c for m, c in f.terms.items() if m not in used})

    star = (
        nv >= 2
        and len(graph.components) == 1
        and len(graph.cycles[0]) == 1
        and all(graph.kappa[j] == graph.cycles[0][0] for j in range(nv))
    )
    return GraphDecomposition(f0, trees, f_add, star)


def exponent_matrix(graph: SingularityGraph) -> ExponentMatrix:
    rows = graph.monomial_of
    d = det(frac_matrix(rows))
    if d <= 0:
        raise SingularExponentMatrix(
            f"graph exponent matrix has determinant {d}; expected positive"
        )
    return ExponentMatrix(rows, int(d))


def solve_weights(f: Polynomial, e: ExponentMatrix) -> WeightSystem:
    """Reduced weights from E*q = 1, validated against every monomial of f."""
    nv = f.nvars
    ones = [Fraction(1)] * nv
    q = solve(frac_matrix(e.rows), ones)
    if q is None:
        raise SingularExponentMatrix("graph exponent matrix is singular")
    for mono in sorted(f.terms):
        degree = sum(ek * qk for ek, qk in zip(mono, q))
        if degree != 1:
            raise NotQuasihomogeneous(
                f"monomial with exponents {mono} has weighted degree {degree}, not 1"
            )
    for k, qk in enumerate(q):
        if not 0 < qk <= Fraction(1, 2):
            raise WeightOutOfRange(f"weight q_{k + 1} = {qk} lies outside (0, 1/2]")
    d = [qk * e.det for qk in q]
    if any(dk.denominator != 1 for dk in d):
        raise SingularExponentMatrix("canonical weights are not integral")
    return WeightSystem(e.det, tuple(int(dk) for dk in d), tuple(q))


def analyze_weights(f: Polynomial) -> tuple[SingularityGraph, ExponentMatrix, WeightSystem]:
    """Convenience pipeline: graph, exponent matrix, weights."""
    graph = build_graph(f)
    e = exponent_matrix(graph)
    return graph, e, solve_weights(f, e)


def classify_invertible(f: Polynomial, graph: SingularityGraph) -> Classification:
    """Fermat/chain/loop decomposition when f has exactly N monomials."""
    nv = f.nvars
    if len(f.terms) != nv:
        return Classification(None, f"{len(f.terms)} monomials for {nv} variables")
    if set(graph.monomial_of) != set(f.terms) or len(set(graph.monomial_of)) != nv:
        extra = sorted(set(f.terms) - set(graph.monomial_of))
        return Classification(None, f"monomial {extra[0]} is not a graph monomial")
    atoms = []
    for comp, cycle in zip(graph.components, graph.cycles):
        tree = [v for v in comp if v not in cycle]
        exps = {v: graph.monomial_of[v][v] for v in comp}
        if not tree:
            if len(cycle) == 1:
                atoms.append(("fermat", cycle, (exps[cycle[0]],)))
            else:
                atoms.append(("loop", cycle, tuple(exps[v] for v in cycle)))
            continue
        if len(cycle) != 1:
            return Classification(None, f"component {comp} has a loop with attached vertices")
        root = cycle[0]
        indegree = {v: 0 for v in comp}
        for v in comp:
            if v != root:
                indegree[graph.kappa[v]] += 1
        if any(n > 1 for n in indegree.values()):
            return Classification(None, f"component {comp} branches; not a chain")
        leaves = [v for v in tree if indegree[v] == 0]
        if len(leaves) != 1:
            return Classification(None, f"component {comp} is not a single chain")
        path = [leaves[0]]
        while path[-1] != root:
            path.append(graph.kappa[path[-1]])
        atoms.append(("chain", tuple(path), tuple(exps[v] for v in path)))
    return Classification(tuple(atoms), None)


def transpose_polynomial(e: ExponentMatrix, coeffs=None) -> TransposeResult:
    """Polynomial built from the columns of E, with its weight solution."""
    nv = len(e.rows)
    terms = {}
    for i in range(nv):
        mono = tuple(e.rows[j][i] for j in range(nv))
        terms[mono] = 1 if coeffs is None else coeffs[i]
    ft = Polynomial(nv, 1, terms)
    transposed = [[Fraction(e.rows[j][i]) for j in range(nv)] for i in range(nv)]
    qt = solve(transposed, [Fraction(1)] * nv)
    if qt is None:
        raise SingularExponentMatrix("transpose system is singular")
    return TransposeResult(ft, tuple(qt), all(x > 0 for x in qt))


def jf_order(w: WeightSystem) -> int:
    """Multiplicative order of the grading symmetry: lcm of weight denominators."""
    return lcm(*(qk.denominator for qk in w.q))


def weighted_degree(mono: Monomial, w: WeightSystem) -> Fraction:
    return sum((e * qk for e, qk in zip(mono, w.q)), Fraction(0))
