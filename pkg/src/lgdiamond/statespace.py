"""Bigraded state spaces of quasihomogeneous polynomials with symmetry.

Every group element g contributes the Milnor algebra of the restriction
of f to its fixed locus, graded by weighted degree and shifted into two
charges by the age of g and of its inverse.  The group acts on these
sector spaces through monomial coordinate transports, a determinant
transition constant, and a parity character; the invariants form the
state space.  This module computes the invariants per conjugacy class
and internal degree, assembles the charge table (the diamond), and
mechanically verifies its structural properties.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._linalg import det, mat_vec, rref
from .cyclotomic import CycNum, root_of_unity
from .errors import LgError, NonIntegerCharge, PreconditionFailed
from .jacobian import JacobianRing, quotient_ring
from .polynomial import Monomial, Polynomial, WeightSystem
from .symmetry import (
    FiniteGroup,
    FixedLocus,
    GroupElement,
    fixed_locus,
    format_element,
    group_conductor,
    make_jf,
    restrict,
    restricted_weights,
    rho_constant,
)

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Sector:
    """One group element's contribution before taking invariants."""

    index: int
    g: GroupElement
    locus: FixedLocus
    ring: JacobianRing
    shift_left: Fraction
    shift_right: Fraction

    @property
    def age(self) -> Fraction:
        return self.g.age()

    def charges(self, degree: Fraction) -> tuple[Fraction, Fraction]:
        """Bigrade of a class of the given internal weighted degree."""
        return (degree + self.shift_left, degree + self.shift_right)


@dataclass
class InvariantBlock:
    """Invariant classes of one conjugacy class at one internal degree.

    Vectors are written over the standard monomials of the class
    representative's sector ring; trace_dimension is the dimension
    predicted by averaging traces over the centralizer, kept separate
    from the computed basis as a cross-check.
    """

    class_index: int
    rep: int
    degree: Fraction
    q_left: Fraction
    q_right: Fraction
    monomials: tuple[Monomial, ...]
    basis: tuple[tuple[CycNum, ...], ...]
    trace_dimension: int

    @property
    def dimension(self) -> int:
        return len(self.basis)


class StateSpace:
    """Sectors, group action, and invariants for one (f, G) input."""

    def __init__(
        self,
        f: Polynomial,
        weights: WeightSystem,
        group: FiniteGroup,
        names: tuple[str, ...] | None = None,
    ) -> None:
        self.group = group
        self.weights = weights
        self.n = group_conductor(group, extra=f.n)
        self.f = f.lift(self.n)
        self.names = tuple(names) if names else tuple(
            f"x{i + 1}" for i in range(f.nvars)
        )
        self.loci = tuple(fixed_locus(g, self.n) for g in group.elements)
        sectors = []
        for i, g in enumerate(group.elements):
            locus = self.loci[i]
            ring = quotient_ring(
                restrict(self.f, locus), restricted_weights(locus, weights)
            )
            comp = sum(
                (weights.q[k] for k in locus.complement_indices()), _ZERO
            )
            sectors.append(
                Sector(
                    index=i,
                    g=g,
                    locus=locus,
                    ring=ring,
                    shift_left=g.age() - comp,
                    shift_right=g.inverse().age() - comp,
                )
            )
        self.sectors = tuple(sectors)
        self._transports: dict[tuple[int, int], tuple] = {}
        self._degree_cache: dict[int, dict[Fraction, tuple[Monomial, ...]]] = {}
        self._blocks: list[InvariantBlock] | None = None

    # -- group action on sectors ------------------------------------------

    def centralizer(self, gi: int) -> list[int]:
        conj = self.group.conj
        return [h for h in range(self.group.order) if conj[h][gi] == gi]

    def transport(self, hi: int, gi: int):
        """Coordinate data of h mapping sector g into sector hgh^{-1}.

        Returns (g', s, rows): the target sector index, the transition
        scalar rho_{h,g}, and per fixed cycle c of g a pair (j, scale)
        meaning the c-th coordinate of Fix(g) pulls back to
        scale * (j-th coordinate of Fix(g')) under h^{-1}.
        """
        cached = self._transports.get((hi, gi))
        if cached is not None:
            return cached
        gpi = self.group.conj[hi][gi]
        hinv = self.group.elements[self.group.inv[hi]]
        lg, lgp = self.loci[gi], self.loci[gpi]
        rows = []
        used = set()
        for i_c in lg.i_fixed:
            r = hinv.sigma[i_c]
            row = lgp.l_matrix[r]
            hits = [(j, row[j]) for j in range(lgp.n_g) if row[j]]
            if len(hits) != 1:
                raise LgError("fixed-locus transport is not a monomial map")
            j, val = hits[0]
            rows.append((j, root_of_unity(hinv.phase[i_c], self.n) * val))
            used.add(j)
        if len(used) != lg.n_g:
            raise LgError("fixed-locus transport is not invertible")
        scalar = rho_constant(self.group.elements[hi], lg, lgp)
        pows = [[CycNum.one(self.n), s] for _, s in rows]
        result = (gpi, scalar, tuple(rows), pows)
        self._transports[(hi, gi)] = result
        return result

    def apply_to_monomial(
        self, hi: int, gi: int, mono: Monomial
    ) -> tuple[int, Polynomial]:
        """Image of the class of a sector monomial under h, in normal form."""
        gpi, scalar, rows, pows = self.transport(hi, gi)
        coeff = scalar
        out = [0] * len(rows)
        for c, e in enumerate(mono):
            if e:
                j, _ = rows[c]
                out[j] += e
                cache = pows[c]
                while len(cache) <= e:
                    cache.append(cache[-1] * cache[1])
                coeff = coeff * cache[e]
        ring = self.sectors[gpi].ring
        target = tuple(out)
        poly = Polynomial(len(rows), self.n, {target: coeff})
        if target in ring.basis_index:
            return gpi, poly
        return gpi, ring.normal_form(poly)

    # -- invariants ---------------------------------------------------------

    def degree_monomials(self, gi: int) -> dict[Fraction, tuple[Monomial, ...]]:
        cached = self._degree_cache.get(gi)
        if cached is None:
            ring = self.sectors[gi].ring
            split: dict[Fraction, list[Monomial]] = {}
            for mono in ring.basis:
                split.setdefault(ring.monomial_degree(mono), []).append(mono)
            cached = {d: tuple(ms) for d, ms in split.items()}
            self._degree_cache[gi] = cached
        return cached

    def blocks(self) -> list[InvariantBlock]:
        if self._blocks is None:
            out = []
            for ci, cls in enumerate(self.group.classes):
                rep = cls[0]
                cent = self.centralizer(rep)
                for degree in sorted(self.degree_monomials(rep)):
                    monos = self.degree_monomials(rep)[degree]
                    out.append(self._invariant_block(ci, rep, cent, degree, monos))
            self._blocks = out
        return self._blocks

    def _invariant_block(
        self,
        class_index: int,
        rep: int,
        centralizer: list[int],
        degree: Fraction,
        monos: tuple[Monomial, ...],
    ) -> InvariantBlock:
        index_of = {m: k for k, m in enumerate(monos)}
        count = len(monos)
        zero = CycNum.zero(self.n)
        trace_total = zero
        matrices = []
        monomial_action = True
        for hi in centralizer:
            cols: list[dict[int, CycNum]] = []
            for m in monos:
                _, nf = self.apply_to_monomial(hi, rep, m)
                col: dict[int, CycNum] = {}
                for mono2, c in nf.terms.items():
                    k2 = index_of.get(mono2)
                    if k2 is None:
                        raise LgError("sector action does not preserve the degree")
                    col[k2] = c
                if len(col) != 1:
                    monomial_action = False
                cols.append(col)
            matrices.append(cols)
            trace_total = trace_total + sum(
                (cols[k].get(k, zero) for k in range(count)), zero
            )
        average = trace_total / len(centralizer)
        if not average.is_rational() or average.as_fraction().denominator != 1:
            raise LgError(f"invariant trace average {average} is not an integer")
        trace_dimension = int(average.as_fraction())
        if monomial_action:
            basis = _orbit_invariants(matrices, count, self.n)
        else:
            basis = _reynolds_invariants(matrices, count, self.n)
        sector = self.sectors[rep]
        q_left, q_right = sector.charges(degree)
        return InvariantBlock(
            class_index=class_index,
            rep=rep,
            degree=degree,
            q_left=q_left,
            q_right=q_right,
            monomials=monos,
            basis=tuple(basis),
            trace_dimension=trace_dimension,
        )

    # -- summaries ----------------------------------------------------------

    def total_dimension(self) -> int:
        return sum(b.dimension for b in self.blocks())

    def block_polynomial(self, block: InvariantBlock, vec) -> Polynomial:
        return Polynomial(
            len(block.monomials[0]) if block.monomials else 0,
            self.n,
            {m: c for m, c in zip(block.monomials, vec) if c},
        )

    def format_block_vector(self, block: InvariantBlock, vec) -> str:
        sector = self.sectors[block.rep]
        names = [self.names[i] for i in sector.locus.i_fixed]
        poly = self.block_polynomial(block, vec)
        return f"[{poly.to_string(names)}] xi_{{{format_element(sector.g)}}}"


def _orbit_invariants(matrices, count: int, n: int):
    """Invariants when every group element acts monomially on the block.

    The action permutes the monomial lines; an orbit carries a
    one-dimensional invariant space when all loop scalars agree, and
    nothing otherwise.  Matrices are given as lists of sparse columns.
    """
    maps = []
    for cols in matrices:
        perm = [0] * count
        scale: list[CycNum] = [None] * count  # type: ignore[list-item]
        for k, col in enumerate(cols):
            ((k2, c),) = col.items()
            perm[k] = k2
            scale[k] = c
        maps.append((perm, scale))
    zero = CycNum.zero(n)
    one = CycNum.one(n)
    visited = [False] * count
    basis = []
    for k0 in range(count):
        if visited[k0]:
            continue
        values = {k0: one}
        stack = [k0]
        alive = True
        while stack:
            k = stack.pop()
            for perm, scale in maps:
                k2 = perm[k]
                v2 = scale[k] * values[k]
                seen = values.get(k2)
                if seen is None:
                    values[k2] = v2
                    stack.append(k2)
                elif alive and seen != v2:
                    alive = False
        for k in values:
            visited[k] = True
        if alive:
            vec = [zero] * count
            for k, v in values.items():
                vec[k] = v
            basis.append(tuple(vec))
    return basis


def _reynolds_invariants(matrices, count: int, n: int):
    """Image basis of the averaging projector, for non-monomial actions."""
    zero = CycNum.zero(n)
    weight = Fraction(1, len(matrices))
    cols = [[zero] * count for _ in range(count)]
    for mat in matrices:
        for k, col in enumerate(mat):
            for r, c in col.items():
                cols[k][r] = cols[k][r] + c
    cols = [[c * weight for c in col] for col in cols]
    reduced, pivots = rref([list(col) for col in cols])
    basis = [tuple(row) for row in reduced[: len(pivots)]]
    rows = [[cols[k][r] for k in range(count)] for r in range(count)]
    for vec in basis:
        if mat_vec(rows, list(vec)) != list(vec):
            raise LgError("averaging operator is not idempotent on its image")
    return basis


def assemble_diamond(state: StateSpace) -> tuple[int, list[list[int]]]:
    """Charge table h[a][b] over [0, D]^2 with D = N - 2.

    Raises NonIntegerCharge (or LgError for an out-of-range charge)
    when an invariant class falls outside the table.
    """
    top = state.f.nvars - 2
    table = [[0] * (top + 1) for _ in range(top + 1)]
    for block in state.blocks():
        if not block.dimension:
            continue
        a, b = block.q_left, block.q_right
        g = state.group.elements[block.rep]
        if a.denominator != 1 or b.denominator != 1:
            raise NonIntegerCharge(
                f"invariant class in sector {format_element(g)} at internal degree "
                f"{block.degree} carries non-integer charge ({a}, {b})"
            )
        ia, ib = int(a), int(b)
        if not (0 <= ia <= top and 0 <= ib <= top):
            raise LgError(
                f"invariant class in sector {format_element(g)} has charge "
                f"({ia}, {ib}) outside [0, {top}]^2"
            )
        table[ia][ib] += block.dimension
    return top, table


def invariant_basis(state: StateSpace, bidegree) -> list:
    """Invariant vectors at one exact bidegree, tagged by their block."""
    a, b = Fraction(bidegree[0]), Fraction(bidegree[1])
    out = []
    for block in state.blocks():
        if block.q_left == a and block.q_right == b:
            out.extend((block, vec) for vec in block.basis)
    return out


def invariants_dim_oracle(state: StateSpace, bidegree) -> int:
    """Invariant dimension at a bidegree from centralizer trace averages."""
    a, b = Fraction(bidegree[0]), Fraction(bidegree[1])
    return sum(
        block.trace_dimension
        for block in state.blocks()
        if block.q_left == a and block.q_right == b
    )


def action_matrix(state: StateSpace, hi: int, bidegree):
    """Matrix of h on the full bidegree slice across all sectors.

    Returns (labels, rows) where labels[k] = (sector index, monomial)
    names the k-th coordinate and rows is the square matrix sending
    coordinate vectors of the slice to their images under h.
    """
    a, b = Fraction(bidegree[0]), Fraction(bidegree[1])
    labels: list[tuple[int, Monomial]] = []
    for gi in range(state.group.order):
        sector = state.sectors[gi]
        for mono in sector.ring.basis:
            if sector.charges(sector.ring.monomial_degree(mono)) == (a, b):
                labels.append((gi, mono))
    index = {lab: k for k, lab in enumerate(labels)}
    zero = CycNum.zero(state.n)
    size = len(labels)
    rows = [[zero] * size for _ in range(size)]
    for k, (gi, mono) in enumerate(labels):
        gpi, nf = state.apply_to_monomial(hi, gi, mono)
        for mono2, c in nf.terms.items():
            rows[index[(gpi, mono2)]][k] = c
    return labels, rows


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: str


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]
    all_sl: bool

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _reduce_in_span(basis, vec) -> bool:
    """Whether vec lies in the span of the basis vectors.

    Assumes each basis vector is nonzero at its own leading index and
    zero at every other vector's leading index, which holds for both
    invariant-basis constructions (orbit vectors have disjoint support;
    echelon rows have pivot columns).
    """
    w = list(vec)
    for b in basis:
        lead = next(i for i, c in enumerate(b) if c)
        c = w[lead]
        if c:
            factor = c / b[lead]
            for i, bc in enumerate(b):
                if bc:
                    w[i] = w[i] - factor * bc
    return not any(w)


def _pairing_gram(ring: JacobianRing, v_monos, v_vecs, w_polys):
    """Residue pairings between invariant vectors and transported partners."""
    n = ring.n
    zero = CycNum.zero(n)
    b_monos = sorted({m for p in w_polys for m in p.terms})
    table: dict[Monomial, list[tuple[Monomial, CycNum]]] = {}
    for a in v_monos:
        row = []
        for b in b_monos:
            prod = tuple(x + y for x, y in zip(a, b))
            nf = ring.normal_form(Polynomial(ring.nvars, n, {prod: CycNum.one(n)}))
            c = nf.terms.get(ring.top_monomial)
            if c:
                row.append((b, c / ring.hess_coefficient))
        if row:
            table[a] = row
    gram = []
    for vec in v_vecs:
        out_row = []
        for p in w_polys:
            acc = zero
            for a, ca in zip(v_monos, vec):
                if ca and a in table:
                    for b, e in table[a]:
                        cb = p.terms.get(b)
                        if cb:
                            acc = acc + ca * cb * e
            out_row.append(acc)
        gram.append(out_row)
    return gram


def verify_theorem(state: StateSpace) -> VerificationReport:
    """Run the structural checks on the invariant state space.

    Preconditions raised as PreconditionFailed rather than reported as
    failed checks: the weights sum to 1, the group contains the grading
    symmetry, and every group element has determinant 1.  Outside these
    hypotheses the checks would fail vacuously, so verification refuses
    to run instead.
    """
    w = state.weights
    if not w.is_calabi_yau:
        raise PreconditionFailed(
            f"weights sum to {w.q_sum}, not 1; the charge table is only "
            "defined for weight sum 1"
        )
    jf = make_jf(w)
    if not state.group.contains(jf):
        raise PreconditionFailed(
            "group does not contain the grading symmetry "
            f"{format_element(jf)}"
        )
    if not state.group.all_sl:
        offender = next(
            g for g, ok in zip(state.group.elements, state.group.is_sl_element)
            if not ok
        )
        raise PreconditionFailed(
            f"group element {format_element(offender)} has determinant "
            f"e[{offender.det_phase()}], not 1"
        )
    group = state.group
    top = state.f.nvars - 2
    blocks = [b for b in state.blocks() if b.dimension]
    checks: list[CheckResult] = []

    bad = [
        b for b in blocks if b.q_left.denominator != 1 or b.q_right.denominator != 1
    ]
    if bad:
        b = bad[0]
        witness = (
            f"sector {format_element(group.elements[b.rep])} at internal degree "
            f"{b.degree} has charge ({b.q_left}, {b.q_right})"
        )
    else:
        witness = (
            f"all {sum(b.dimension for b in blocks)} invariant classes have "
            "integer charges"
        )
    checks.append(CheckResult("integer-charges", not bad, witness))

    integral = [
        b
        for b in blocks
        if b.q_left.denominator == 1 and b.q_right.denominator == 1
    ]
    outside = [
        b
        for b in integral
        if not (0 <= b.q_left <= top and 0 <= b.q_right <= top)
    ]
    if outside:
        b = outside[0]
        witness = (
            f"charge ({b.q_left}, {b.q_right}) in sector "
            f"{format_element(group.elements[b.rep])} is outside [0, {top}]^2"
        )
    else:
        witness = f"all charges lie in [0, {top}]^2"
    checks.append(CheckResult("charge-support", not outside, witness))

    id_class = group.class_of[group.identity_index]

    def corner(a: Fraction, b: Fraction):
        return [blk for blk in blocks if blk.q_left == a and blk.q_right == b]

    def corner_check(a, b, want_class, want_monomial, label) -> CheckResult:
        found = corner(Fraction(a), Fraction(b))
        dim = sum(blk.dimension for blk in found)
        if dim != 1:
            return CheckResult(
                label, False, f"h^({a},{b}) has dimension {dim}, expected 1"
            )
        blk = next(blk for blk in found if blk.dimension)
        if blk.class_index != want_class:
            return CheckResult(
                label,
                False,
                f"h^({a},{b}) is generated in sector "
                f"{format_element(group.elements[blk.rep])}",
            )
        vec = blk.basis[0]
        nonzero = [m for m, c in zip(blk.monomials, vec) if c]
        if want_monomial is not None and nonzero != [want_monomial]:
            return CheckResult(
                label, False, f"h^({a},{b}) generator is not the expected class"
            )
        return CheckResult(
            label, True, f"h^({a},{b}) = 1, spanned by "
            + state.format_block_vector(blk, vec)
        )

    id_ring = state.sectors[group.classes[id_class][0]].ring
    c1 = corner_check(0, 0, id_class, (0,) * state.f.nvars, "corner-unit")
    c2 = corner_check(top, top, id_class, id_ring.top_monomial, "corner-hessian")
    checks.append(
        CheckResult(
            "identity-corners",
            c1.passed and c2.passed,
            c1.witness if not c1.passed else (c2.witness if not c2.passed else f"{c1.witness}; {c2.witness}"),
        )
    )

    jf_idx = group.index[jf.key()]
    jinv_idx = group.inv[jf_idx]
    c3 = corner_check(0, top, group.class_of[jf_idx], None, "corner-j")
    c4 = corner_check(top, 0, group.class_of[jinv_idx], None, "corner-j-inverse")
    checks.append(
        CheckResult(
            "grading-corners",
            c3.passed and c4.passed,
            c3.witness if not c3.passed else (c4.witness if not c4.passed else f"{c3.witness}; {c4.witness}"),
        )
    )

    passed, witness = transpose_check(state)
    checks.append(CheckResult("transpose-symmetry", passed, witness))

    passed, witness = duality_check(state)
    checks.append(CheckResult("residue-duality", passed, witness))

    return VerificationReport(tuple(checks), group.all_sl)


def transpose_check(state: StateSpace) -> tuple[bool, str]:
    """Does inverting group elements carry invariants onto invariants?

    For each occupied block this matches the dimension of the block of
    the inverse class at the same internal degree, then maps every basis
    invariant into the inverse sector and reduces it against the partner
    basis.  Returns (passed, witness); independent of any hypothesis on
    the group.
    """
    group = state.group
    blocks = [b for b in state.blocks() if b.dimension]
    block_at = {(b.class_index, b.degree): b for b in state.blocks()}
    psi_failure = None
    for b in blocks:
        inverse_class = group.class_of[group.inv[b.rep]]
        partner = block_at.get((inverse_class, b.degree))
        pdim = partner.dimension if partner else 0
        if pdim != b.dimension:
            psi_failure = (
                f"class of {format_element(group.elements[b.rep])} has dimension "
                f"{b.dimension} at internal degree {b.degree} but the inverse "
                f"class has {pdim}"
            )
            break
        inv_rep = group.inv[b.rep]
        rep_star = group.classes[inverse_class][0]
        hi = next(
            h for h in range(group.order) if group.conj[h][inv_rep] == rep_star
        )
        pindex = {m: k for k, m in enumerate(partner.monomials)}
        zero = CycNum.zero(state.n)
        for vec in b.basis:
            image = [zero] * len(partner.monomials)
            for mono, c in zip(b.monomials, vec):
                if c:
                    _, img = state.apply_to_monomial(hi, inv_rep, mono)
                    for mono2, c2 in img.terms.items():
                        image[pindex[mono2]] = image[pindex[mono2]] + c * c2
            if not _reduce_in_span(partner.basis, image):
                psi_failure = (
                    "sector-inversion image of an invariant of the class of "
                    f"{format_element(group.elements[b.rep])} at internal degree "
                    f"{b.degree} is not invariant"
                )
                break
        if psi_failure:
            break
    return psi_failure is None, (
        psi_failure
        or "inverting group elements transposes the charge table and maps "
        "invariants to invariants"
    )


def duality_check(state: StateSpace) -> tuple[bool, str]:
    """Is the residue pairing between complementary blocks nondegenerate?

    Pairs the block of a class at internal degree d against the block of
    the inverse class at the complementary degree of the sector ring and
    certifies a nonzero Gram determinant.  Returns (passed, witness);
    independent of any hypothesis on the group.
    """
    group = state.group
    blocks = [b for b in state.blocks() if b.dimension]
    block_at = {(b.class_index, b.degree): b for b in state.blocks()}
    failure = None
    done_pairs = set()
    for b in blocks:
        inverse_class = group.class_of[group.inv[b.rep]]
        dual_degree = state.sectors[b.rep].ring.c_hat - b.degree
        key = tuple(sorted([(b.class_index, b.degree), (inverse_class, dual_degree)]))
        if key in done_pairs:
            continue
        done_pairs.add(key)
        partner = block_at.get((inverse_class, dual_degree))
        if partner is None or partner.dimension != b.dimension:
            got = partner.dimension if partner else 0
            failure = (
                f"dual block of {format_element(group.elements[b.rep])} at internal "
                f"degree {dual_degree} has dimension {got}, expected {b.dimension}"
            )
            break
        rep_star = group.classes[inverse_class][0]
        target = group.inv[b.rep]
        hi = next(
            h for h in range(group.order) if group.conj[h][rep_star] == target
        )
        w_polys = []
        for vec in partner.basis:
            acc = Polynomial.zero(state.sectors[target].locus.n_g, state.n)
            for mono, c in zip(partner.monomials, vec):
                if c:
                    _, img = state.apply_to_monomial(hi, rep_star, mono)
                    acc = acc + img * c
            w_polys.append(acc)
        ring = state.sectors[b.rep].ring
        gram = _pairing_gram(ring, b.monomials, b.basis, w_polys)
        if not det(gram):
            failure = (
                f"residue pairing between the class of "
                f"{format_element(group.elements[b.rep])} at internal degree "
                f"{b.degree} and its dual block is degenerate"
            )
            break
    return failure is None, (
        failure or "residue pairings between dual blocks are nondegenerate"
    )
