"""Milnor algebras: Groebner bases for Jacobian ideals and residue pairings.

The quotient C[x]/(df/dx_1, ..., df/dx_N) of a quasihomogeneous
polynomial with isolated critical point is finite dimensional and
graded by weighted degree.  This module computes a reduced Groebner
basis of the Jacobian ideal in graded reverse lexicographic order,
enumerates the standard monomial basis, grades it, and equips it with
the residue pairing normalized against the Hessian class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .cyclotomic import CycNum
from .errors import NonHomogeneous, NotIsolated
from .polynomial import Monomial, Polynomial, WeightSystem, hessian_determinant

_ZERO = Fraction(0)


def grevlex_key(mono: Monomial):
    """Sort key under which the graded reverse lexicographic order is <."""
    return (sum(mono), tuple(-e for e in reversed(mono)))


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def leading_monomial(p: Polynomial) -> Monomial:
    return max(p.terms, key=grevlex_key)


def _monic(p: Polynomial) -> Polynomial:
    lc = p.terms[leading_monomial(p)]
    inv = lc.inverse()
    return Polynomial(p.nvars, p.n, {m: c * inv for m, c in p.terms.items()})


def normal_form(p: Polynomial, basis: list[Polynomial]) -> Polynomial:
    """Remainder of p under division by (monic) basis, smallest terms last."""
    pairs = [(leading_monomial(b), b) for b in basis]
    work = dict(p.terms)
    remainder: dict[Monomial, CycNum] = {}
    while work:
        lm = max(work, key=grevlex_key)
        lc = work.pop(lm)
        if not lc:
            continue
        for blm, b in pairs:
            if _divides(blm, lm):
                shift = tuple(x - y for x, y in zip(lm, blm))
                for m2, c2 in b.terms.items():
                    if m2 == blm:
                        continue
                    mm = _mono_mul(m2, shift)
                    acc = work.get(mm)
                    acc = -lc * c2 if acc is None else acc - lc * c2
                    if acc:
                        work[mm] = acc
                    else:
                        work.pop(mm, None)
                break
        else:
            remainder[lm] = lc
    return Polynomial(p.nvars, p.n, remainder)


def _s_polynomial(a: Polynomial, b: Polynomial) -> Polynomial:
    la, lb = leading_monomial(a), leading_monomial(b)
    gamma = _mono_lcm(la, lb)
    sa = tuple(x - y for x, y in zip(gamma, la))
    sb = tuple(x - y for x, y in zip(gamma, lb))
    ta = Polynomial(a.nvars, a.n, {_mono_mul(m, sa): c for m, c in a.terms.items()})
    tb = Polynomial(b.nvars, b.n, {_mono_mul(m, sb): c for m, c in b.terms.items()})
    return ta - tb


def groebner_basis(polys: list[Polynomial], nvars: int, n: int) -> list[Polynomial]:
    """Reduced monic Groebner basis in grevlex order, sorted by leading term."""
    basis = [_monic(p) for p in polys if not p.is_zero()]
    lms = [leading_monomial(b) for b in basis]
    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    done: set[tuple[int, int]] = set()
    while pairs:
        i, j = min(pairs, key=lambda ij: grevlex_key(_mono_lcm(lms[ij[0]], lms[ij[1]])))
        pairs.remove((i, j))
        done.add((i, j))
        gamma = _mono_lcm(lms[i], lms[j])
        # coprime criterion: disjoint leading supports give a zero reduction
        if gamma == _mono_mul(lms[i], lms[j]):
            continue
        # chain criterion: a third basis element whose pairs are settled
        if any(
            k != i and k != j
            and _divides(lms[k], gamma)
            and (min(i, k), max(i, k)) in done
            and (min(j, k), max(j, k)) in done
            for k in range(len(basis))
        ):
            continue
        r = normal_form(_s_polynomial(basis[i], basis[j]), basis)
        if r.is_zero():
            continue
        basis.append(_monic(r))
        lms.append(leading_monomial(basis[-1]))
        new = len(basis) - 1
        pairs.update((k, new) for k in range(new))
    # minimalize: drop elements whose leading term another one divides
    keep = [
        i
        for i in range(len(basis))
        if not any(k != i and _divides(lms[k], lms[i]) for k in range(len(basis)))
    ]
    minimal = [basis[i] for i in keep]
    # reduce tails against the other elements
    reduced = []
    for i, b in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        reduced.append(normal_form(b, others) if others else b)
    reduced.sort(key=lambda b: grevlex_key(leading_monomial(b)))
    return reduced


def _standard_monomials(lms: list[Monomial], nvars: int) -> list[Monomial]:
    """Monomials outside the leading-term ideal; NotIsolated if infinite."""
    bounds = []
    for i in range(nvars):
        pure = [m[i] for m in lms if all(e == 0 for j, e in enumerate(m) if j != i)]
        if not pure:
            raise NotIsolated(
                f"the Jacobian ideal contains no pure power of variable {i + 1}; "
                "the critical point is not isolated"
            )
        bounds.append(min(pure))
    out = [
        mono
        for mono in product(*(range(b) for b in bounds))
        if not any(_divides(lm, mono) for lm in lms)
    ]
    out.sort(key=grevlex_key)
    return out


@dataclass
class JacobianRing:
    """Graded Milnor algebra of one polynomial with its residue pairing."""

    f: Polynomial
    weights: WeightSystem
    groebner: tuple[Polynomial, ...]
    basis: tuple[Monomial, ...]
    basis_index: dict[Monomial, int]
    graded: dict[Fraction, int]
    top_monomial: Monomial
    hess_coefficient: CycNum
    mu: int

    @property
    def nvars(self) -> int:
        return self.f.nvars

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def c_hat(self) -> Fraction:
        return self.weights.central_charge

    def normal_form(self, p: Polynomial) -> Polynomial:
        return normal_form(p, list(self.groebner))

    def vector(self, p: Polynomial) -> list[CycNum]:
        """Coordinates of [p] in the standard monomial basis."""
        nf = self.normal_form(p.lift(self.n) if p.n != self.n else p)
        out = [CycNum.zero(self.n)] * self.mu
        for mono, c in nf.terms.items():
            out[self.basis_index[mono]] = c
        return out

    def monomial_degree(self, mono: Monomial) -> Fraction:
        return sum((e * qk for e, qk in zip(mono, self.weights.q)), _ZERO)

    def residue(self, u: Polynomial, v: Polynomial) -> CycNum:
        """Pairing <u, v>: top coefficient of NF(u*v) against the Hessian.

        Normalized so that <1, hessian class> = 1.
        """
        nf = self.normal_form(u.lift(self.n) * v.lift(self.n))
        top = nf.terms.get(self.top_monomial)
        if top is None:
            return CycNum.zero(self.n)
        return top / self.hess_coefficient

    def hessian_class(self) -> Polynomial:
        return Polynomial(
            self.nvars, self.n, {self.top_monomial: self.hess_coefficient}
        )


_RING_CACHE: dict[tuple, JacobianRing] = {}


def quotient_ring(f: Polynomial, w: WeightSystem) -> JacobianRing:
    """The Milnor algebra C[x]/Jac(f), graded by the weights w.

    f must be quasihomogeneous of degree 1 for w.  The zero polynomial
    in zero variables yields the one-dimensional algebra C.  Raises
    NotIsolated when the critical point of f is not isolated.
    """
    key = (f.key(), w)
    cached = _RING_CACHE.get(key)
    if cached is not None:
        return cached
    for mono in f.terms:
        deg = sum((e * qk for e, qk in zip(mono, w.q)), _ZERO)
        if deg != 1:
            raise NonHomogeneous(
                f"monomial with exponents {mono} has weighted degree {deg}, not 1"
            )
    partials = [f.partial_derivative(i) for i in range(f.nvars)]
    gb = groebner_basis(partials, f.nvars, f.n)
    lms = [leading_monomial(b) for b in gb]
    basis = _standard_monomials(lms, f.nvars)
    graded: dict[Fraction, int] = {}
    for mono in basis:
        deg = sum((e * qk for e, qk in zip(mono, w.q)), _ZERO)
        graded[deg] = graded.get(deg, 0) + 1
    hess = normal_form(hessian_determinant(f), gb)
    if len(hess.terms) != 1:
        raise NotIsolated(
            "the Hessian class does not span the top graded piece; "
            "the critical point is degenerate"
        )
    ((top, coeff),) = hess.terms.items()
    ring = JacobianRing(
        f=f,
        weights=w,
        groebner=tuple(gb),
        basis=tuple(basis),
        basis_index={m: i for i, m in enumerate(basis)},
        graded=graded,
        top_monomial=top,
        hess_coefficient=coeff,
        mu=len(basis),
    )
    _RING_CACHE[key] = ring
    return ring


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    """Quotient num/den for monic den, asserting zero remainder."""
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - dn - 1, -1, -1):
        c = num[i + dn]
        if not c:
            continue
        out[i] = c
        for j, y in enumerate(den):
            num[i + j] -= c * y
    if any(num):
        raise ArithmeticError("weight series division left a remainder")
    return out


def poincare_dimensions(w: WeightSystem) -> dict[Fraction, int]:
    """Graded dimensions of the Milnor algebra from the weights alone.

    Expands prod_k (t^(1 - q_k) - 1)/(t^(q_k) - 1) as a polynomial in
    t^(1/d0) and returns {degree: dimension}.  Independent of any
    Groebner computation, so it serves as a cross-check.
    """
    num = [1]
    den = [1]
    for dk in w.d:
        num = _poly_mul(num, [-1] + [0] * (w.d0 - dk - 1) + [1])
        den = _poly_mul(den, [-1] + [0] * (dk - 1) + [1])
    quotient = _poly_divide_exact(num, den)
    return {Fraction(e, w.d0): c for e, c in enumerate(quotient) if c}


def milnor_number(w: WeightSystem) -> int:
    """prod_k (1/q_k - 1), the expected dimension, as an exact integer."""
    mu = Fraction(1)
    for qk in w.q:
        mu *= 1 / qk - 1
    assert mu.denominator == 1
    return int(mu)
