"""Monomial-matrix symmetries of a quasihomogeneous polynomial.

A GroupElement is the matrix M with M[i, sigma(i)] = e[phase_i]; it
substitutes x_i -> e[phase_i] * x_{sigma(i)} into polynomials.  All
group arithmetic stays in exact rational phases; cyclotomic numbers
appear only when eigenvectors or matrix entries are materialized at a
chosen conductor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ._linalg import det, inverse, mat_mul, solve, smith_normal_form
from .cyclotomic import CycNum, root_of_unity
from .errors import (
    ClosureCapExceeded,
    LgError,
    MissingJ,
    NotASymmetry,
    NotInGraphGroup,
    NotInSL,
)
from .polynomial import Polynomial, WeightSystem
from .quasihom import ExponentMatrix

_ZERO = Fraction(0)


@dataclass(frozen=True)
class GroupElement:
    """Monomial matrix (sigma, phase): x_i -> e[phase_i] * x_{sigma(i)}."""

    sigma: tuple[int, ...]
    phase: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", tuple(self.sigma))
        object.__setattr__(self, "phase", tuple(Fraction(a) % 1 for a in self.phase))
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ValueError(f"{self.sigma} is not a permutation")
        if len(self.phase) != len(self.sigma):
            raise ValueError("phase vector length does not match")

    # -- structure ---------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.sigma)

    @property
    def is_diagonal(self) -> bool:
        return all(s == i for i, s in enumerate(self.sigma))

    @property
    def is_identity(self) -> bool:
        return self.is_diagonal and all(a == 0 for a in self.phase)

    @staticmethod
    def identity(nvars: int) -> "GroupElement":
        return GroupElement(tuple(range(nvars)), (_ZERO,) * nvars)

    @staticmethod
    def diagonal(phases) -> "GroupElement":
        phases = tuple(Fraction(a) for a in phases)
        return GroupElement(tuple(range(len(phases))), phases)

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Sigma-cycles (fixed points included), each from its minimal index."""
        seen = [False] * self.nvars
        out = []
        for start in range(self.nvars):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            v = self.sigma[start]
            while v != start:
                cyc.append(v)
                seen[v] = True
                v = self.sigma[v]
            out.append(tuple(cyc))
        return tuple(out)

    def sign(self) -> int:
        return -1 if (self.nvars - len(self.cycles())) % 2 else 1

    # -- group arithmetic ---------------------------------------------

    def compose(self, other: "GroupElement") -> "GroupElement":
        """Matrix product self*other: substitute self first, then other."""
        sigma = tuple(other.sigma[s] for s in self.sigma)
        phase = tuple(a + other.phase[s] for a, s in zip(self.phase, self.sigma))
        return GroupElement(sigma, phase)

    def inverse(self) -> "GroupElement":
        inv_sigma = [0] * self.nvars
        for i, s in enumerate(self.sigma):
            inv_sigma[s] = i
        phase = tuple(-self.phase[inv_sigma[i]] for i in range(self.nvars))
        return GroupElement(tuple(inv_sigma), phase)

    def conjugate_by(self, h: "GroupElement") -> "GroupElement":
        """h * self * h^{-1}."""
        return h.compose(self).compose(h.inverse())

    def power(self, k: int) -> "GroupElement":
        if k < 0:
            return self.inverse().power(-k)
        result = GroupElement.identity(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result.compose(base)
            base = base.compose(base)
            k >>= 1
        return result

    def order(self) -> int:
        o = 1
        for cyc in self.cycles():
            total = sum(self.phase[i] for i in cyc) % 1
            o = lcm(o, len(cyc) * total.denominator)
        return o

    # -- invariants ----------------------------------------------------

    def det_phase(self) -> Fraction:
        """Phase t with det(M) = e[t]."""
        t = sum(self.phase, _ZERO)
        if self.sign() < 0:
            t += Fraction(1, 2)
        return t % 1

    def is_sl(self) -> bool:
        return self.det_phase() == 0

    def determinant(self, n: int) -> CycNum:
        return root_of_unity(self.det_phase(), n)

    def age(self) -> Fraction:
        """Sum of the fractional eigenvalue phases of the monomial matrix."""
        total = _ZERO
        for cyc in self.cycles():
            k = len(cyc)
            a = sum(self.phase[i] for i in cyc) % 1
            total += a + Fraction(k - 1, 2)
        return total

    def eigenvalue_phases(self) -> tuple[Fraction, ...]:
        out = []
        for cyc in self.cycles():
            k = len(cyc)
            a = sum(self.phase[i] for i in cyc) % 1
            out.extend(Fraction(a + m, k) for m in range(k))
        return tuple(sorted(out))

    def conductor(self) -> int:
        n = 1
        for a in self.phase:
            n = lcm(n, a.denominator)
        for cyc in self.cycles():
            a = sum(self.phase[i] for i in cyc) % 1
            n = lcm(n, len(cyc) * a.denominator)
        return n

    # -- action ----------------------------------------------------------

    def matrix(self, n: int) -> list[list[CycNum]]:
        zero = CycNum.zero(n)
        m = [[zero] * self.nvars for _ in range(self.nvars)]
        for i in range(self.nvars):
            m[i][self.sigma[i]] = root_of_unity(self.phase[i], n)
        return m

    def apply(self, f: Polynomial) -> Polynomial:
        """f(M x): substitute x_i -> e[phase_i] x_{sigma(i)}."""
        n = lcm(f.n, self.conductor())
        g = f.lift(n)
        scales = [root_of_unity(a, n) for a in self.phase]
        return g.substitute_monomial(list(self.sigma), scales)

    def key(self):
        return (self.sigma, self.phase)

    def __str__(self) -> str:
        return format_element(self)


def format_element(g: GroupElement) -> str:
    if g.is_identity:
        return "id"
    parts = []
    for cyc in g.cycles():
        if len(cyc) > 1:
            parts.append("(" + " ".join(str(i + 1) for i in cyc) + ")")
    if any(a != 0 for a in g.phase):
        parts.append("diag(" + ", ".join(str(a) for a in g.phase) + ")")
    return "*".join(parts)


def is_symmetry(f: Polynomial, g: GroupElement) -> bool:
    if g.nvars != f.nvars:
        return False
    n = lcm(f.n, g.conductor())
    return g.apply(f) == f.lift(n)


def make_jf(w: WeightSystem) -> GroupElement:
    """The grading symmetry: diagonal with phases equal to the weights."""
    return GroupElement.diagonal(w.q)


# -- diagonal symmetry groups ------------------------------------------------


@dataclass(frozen=True)
class DiagonalGroup:
    """All diagonal symmetries of a monomial family, as a finite abelian group."""

    nvars: int
    generators: tuple[tuple[Fraction, ...], ...]
    gen_orders: tuple[int, ...]
    invariant_factors: tuple[int, ...]
    order: int

    def elements(self):
        """Every element as a reduced phase vector, identity first."""
        vectors = [(_ZERO,) * self.nvars]
        for gen, s in zip(self.generators, self.gen_orders):
            new = []
            for v in vectors:
                cur = v
                for _ in range(s - 1):
                    cur = tuple((a + b) % 1 for a, b in zip(cur, gen))
                    new.append(cur)
            vectors.extend(new)
        return vectors


def diagonal_symmetries_of_rows(rows) -> DiagonalGroup:
    """Solve A*v in Z^M for v in (Q/Z)^N via the Smith normal form of A."""
    rows = [list(map(int, r)) for r in rows]
    nv = len(rows[0])
    s, _, v = smith_normal_form(rows)
    factors = []
    gens = []
    gen_orders = []
    for i in range(nv):
        si = s[i][i] if i < len(s) else 0
        if si == 0:
            raise LgError("diagonal symmetry group is infinite; input is degenerate")
        factors.append(si)
        if si > 1:
            gens.append(tuple(Fraction(v[j][i], si) % 1 for j in range(nv)))
            gen_orders.append(si)
    order = 1
    for si in factors:
        order *= si
    return DiagonalGroup(nv, tuple(gens), tuple(gen_orders), tuple(factors), order)


def diagonal_symmetries(f: Polynomial) -> DiagonalGroup:
    """The full diagonal symmetry group of f (all monomials constrained)."""
    return diagonal_symmetries_of_rows(sorted(f.terms))


def graph_diagonal_symmetries(e: ExponentMatrix) -> DiagonalGroup:
    """Diagonal symmetries of the graph monomials only."""
    return diagonal_symmetries_of_rows(e.rows)


def column_generators(e: ExponentMatrix) -> tuple[tuple[Fraction, ...], ...]:
    """Columns of E^{-1} reduced mod 1; they generate the graph group."""
    nv = len(e.rows)
    inv = inverse([[Fraction(x) for x in row] for row in e.rows])
    return tuple(tuple(inv[j][i] % 1 for j in range(nv)) for i in range(nv))


def age_via_matrix(gbar, e: ExponentMatrix) -> Fraction:
    """Age of a diagonal element from the integer vector s = E*gbar."""
    nv = len(e.rows)
    gbar = [Fraction(x) for x in gbar]
    s = [sum(e.rows[i][j] * gbar[j] for j in range(nv)) for i in range(nv)]
    if any(x.denominator != 1 for x in s):
        raise NotInGraphGroup(f"E*gbar = {s} is not an integer vector")
    sol = solve([[Fraction(x) for x in row] for row in e.rows], s)
    return sum(sol, _ZERO)


# -- closed groups -----------------------------------------------------------


class FiniteGroup:
    """A closed list of monomial symmetries with multiplication tables."""

    def __init__(self, elements: list[GroupElement]) -> None:
        ordered = sorted(elements, key=lambda g: g.key())
        self.elements: tuple[GroupElement, ...] = tuple(ordered)
        self.index = {g.key(): i for i, g in enumerate(self.elements)}
        self.order = len(self.elements)
        self.nvars = self.elements[0].nvars
        self.identity_index = self.index[GroupElement.identity(self.nvars).key()]
        self.mult = tuple(
            tuple(self.index[a.compose(b).key()] for b in self.elements) for a in self.elements
        )
        self.inv = tuple(self.index[g.inverse().key()] for g in self.elements)
        # conjugacy classes and the full conjugation table
        self.conj = tuple(
            tuple(
                self.mult[self.mult[h][g]][self.inv[h]] for g in range(self.order)
            )
            for h in range(self.order)
        )
        class_of = [-1] * self.order
        classes: list[tuple[int, ...]] = []
        for g in range(self.order):
            if class_of[g] >= 0:
                continue
            orbit = sorted({self.conj[h][g] for h in range(self.order)})
            for x in orbit:
                class_of[x] = len(classes)
            classes.append(tuple(orbit))
        self.classes = tuple(classes)
        self.class_of = tuple(class_of)
        self.is_sl_element = tuple(g.is_sl() for g in self.elements)
        self.all_sl = all(self.is_sl_element)

    def compose_idx(self, i: int, j: int) -> int:
        return self.mult[i][j]

    def contains(self, g: GroupElement) -> bool:
        return g.key() in self.index


def generate_group(
    generators,
    f: Polynomial,
    cap: int = 100000,
    require_sl: bool = False,
    require_j: GroupElement | None = None,
) -> FiniteGroup:
    """Close the generators under composition, validating symmetry of f."""
    nv = f.nvars
    for g in generators:
        if not is_symmetry(f, g):
            raise NotASymmetry(f"generator {format_element(g)} does not preserve f")
    ident = GroupElement.identity(nv)
    elements = {ident.key(): ident}
    frontier = [ident]
    gens = list(generators)
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g.compose(s)
                if h.key() not in elements:
                    if len(elements) >= cap:
                        raise ClosureCapExceeded(
                            f"group closure exceeded the cap of {cap} elements"
                        )
                    elements[h.key()] = h
                    nxt.append(h)
        frontier = nxt
    group = FiniteGroup(list(elements.values()))
    if require_sl:
        for g, sl in zip(group.elements, group.is_sl_element):
            if not sl:
                raise NotInSL(
                    f"element {format_element(g)} has determinant e[{g.det_phase()}] != 1"
                )
    if require_j is not None and not group.contains(require_j):
        raise MissingJ("the group does not contain the grading symmetry j_f")
    return group


def group_conductor(group: FiniteGroup, extra: int = 1) -> int:
    """Conductor covering all phases, orders, and eigenvalue phases of G."""
    n = extra
    for g in group.elements:
        n = lcm(n, g.conductor(), g.order())
    return n


# -- fixed loci --------------------------------------------------------------


@dataclass(frozen=True)
class FixedLocus:
    """Eigen-data of one group element at a fixed conductor n.

    l_matrix columns parametrize Fix(g) (eigenvalue 1), one column per
    sigma-cycle with integral total phase, normalized to 1 at the
    cycle's minimal index and ordered by that index.  w_matrix columns
    are the remaining eigenvectors, ordered by (cycle minimal index,
    ascending eigenvalue phase); their wedge fixes the sector letter
    xi_g.  i_fixed holds the minimal index of each fixed cycle.
    """

    g: GroupElement
    n: int
    n_g: int
    i_fixed: tuple[int, ...]
    l_matrix: tuple[tuple[CycNum, ...], ...]
    w_matrix: tuple[tuple[CycNum, ...], ...]
    w_phases: tuple[Fraction, ...]

    @property
    def d_g(self) -> int:
        return self.g.nvars - self.n_g

    def complement_indices(self) -> tuple[int, ...]:
        return tuple(k for k in range(self.g.nvars) if k not in self.i_fixed)

    def basis_matrix(self) -> list[list[CycNum]]:
        """[L | W] as a full N x N change-of-basis matrix."""
        rows = []
        for i in range(self.g.nvars):
            rows.append(list(self.l_matrix[i]) + list(self.w_matrix[i]))
        return rows


def fixed_locus(g: GroupElement, n: int) -> FixedLocus:
    """Diagonalize g cycle by cycle and split eigenvectors by eigenvalue 1."""
    nv = g.nvars
    fixed_cols: list[list[CycNum]] = []
    comp_cols: list[tuple[Fraction, list[CycNum]]] = []
    i_fixed: list[int] = []
    zero = CycNum.zero(n)
    for cyc in g.cycles():
        k = len(cyc)
        total = sum(g.phase[i] for i in cyc) % 1
        for m in range(k):
            theta = (total + m) / k
            col = [zero] * nv
            val = CycNum.one(n)
            col[cyc[0]] = val
            # walk the cycle: v[sigma(i)] = e[theta - phase_i] * v[i]
            i = cyc[0]
            for _ in range(k - 1):
                val = val * root_of_unity((theta - g.phase[i]) % 1, n)
                i = g.sigma[i]
                col[i] = val
            if theta == 0:
                fixed_cols.append(col)
                i_fixed.append(cyc[0])
            else:
                comp_cols.append((theta, col))
    # complement columns arrive grouped by cycle (min-index order) and with
    # ascending eigenvalue phase within each cycle, fixing the xi_g wedge
    l_rows = tuple(
        tuple(fixed_cols[j][i] for j in range(len(fixed_cols))) for i in range(nv)
    )
    w_rows = tuple(
        tuple(col[i] for _, col in comp_cols) for i in range(nv)
    )
    return FixedLocus(
        g,
        n,
        len(fixed_cols),
        tuple(i_fixed),
        l_rows,
        w_rows,
        tuple(theta for theta, _ in comp_cols),
    )


def restrict(f: Polynomial, locus: FixedLocus) -> Polynomial:
    """f composed with the Fix(g) parametrization, in N_g variables."""
    if locus.n_g == 0:
        return Polynomial.zero(0, f.n)
    g = f.lift(lcm(f.n, locus.n))
    cols = locus.n_g
    out = Polynomial.zero(cols, g.n)
    for mono, coeff in g.terms.items():
        piece = Polynomial.constant(coeff, cols, g.n)
        for i, e in enumerate(mono):
            if not e:
                continue
            row = Polynomial(
                cols,
                g.n,
                {
                    tuple(1 if j == c else 0 for j in range(cols)): locus.l_matrix[i][c]
                    for c in range(cols)
                    if locus.l_matrix[i][c]
                },
            )
            if row.is_zero():
                piece = Polynomial.zero(cols, g.n)
                break
            piece = piece * row**e
        out = out + piece
    return out


def restricted_weights(locus: FixedLocus, w: WeightSystem) -> WeightSystem:
    """Inherited weight system on Fix(g) (one weight per fixed cycle)."""
    q = tuple(w.q[i] for i in locus.i_fixed)
    if not q:
        return WeightSystem(1, (), ())
    d0 = lcm(*(qk.denominator for qk in q))
    return WeightSystem(d0, tuple(int(qk * d0) for qk in q), q)


def rho_constant(
    h: GroupElement, locus_g: FixedLocus, locus_conj: FixedLocus
) -> CycNum:
    """Determinant of the map Lambda(g) -> Lambda(hgh^{-1}) induced by h.

    Lambda(g) is C^N/Fix(g) with the basis fixed by the w_matrix of the
    locus; the constant is the determinant of h's action in these bases.
    """
    n = locus_g.n
    d = locus_g.d_g
    if d == 0:
        return CycNum.one(n)
    basis = inverse(locus_conj.basis_matrix())
    mh = h.matrix(n)
    w_cols = [[row[j] for j in range(d)] for row in locus_g.w_matrix]
    image = mat_mul(mat_mul(basis, mh), w_cols)
    block = [image[locus_conj.n_g + i] for i in range(d)]
    return det(block)
