"""Certified construction of nilpotent realizations for the family.

Setting a_1 = ... = a_{r-1} = 1 and the feedback entry to t turns the
vanishing of the characteristic coefficients into an integer-coefficient
recurrence

    a_j(t) = a_{j-1}(t) - t a_{j-r}(t),    a_0 = ... = a_{r-1} = 1,

closed by h(t) = a_{n-1}(t) - t a_{n-r}(t) = 0.  The smallest positive
root of h keeps every a_j strictly positive, which is certified here with
exact rational brackets rather than assumed.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .charpoly import char_coeffs
from .errors import CertificationFailed, PreconditionViolated, UnsupportedParams
from .family import FamilyParams, FamilyRealization, build_matrix, coeff_map
from .polyroots import (
    IntPolynomial,
    RootBracket,
    count_roots,
    min_positive_root,
    sturm_chain,
)

RESIDUAL_TOL_PER_N = 1e-10

# extra-tight default so the exported double is correctly rounded and the
# float residual is rounding-limited, not bracket-limited
_CERT_WIDTH = Fraction(1, 2**70)
_CHAIN_WIDTH = Fraction(1, 10**14)


@dataclass(frozen=True)
class NilpotentCertificate:
    """A verified nilpotent member of the pattern class.

    ``a0`` holds the realized first-column values a_1..a_{n-1}; ``t_h`` is
    the feedback entry (the isolated smallest positive root of the closing
    polynomial, kept with its exact bracket).  ``a0_margins`` are certified
    lower bounds for the a-values over the bracket.  ``residual`` is the
    largest characteristic-coefficient magnitude of the emitted double
    matrix (mode "double") or of the exact rational construction at the
    bracket midpoint (mode "extended").
    """

    params: FamilyParams
    t_h: float
    bracket: RootBracket
    a0: tuple[float, ...]
    residual: float
    chain_verified: bool
    a0_margins: tuple[float, ...]
    precision_mode: str = "double"

    def realization(self) -> FamilyRealization:
        return FamilyRealization(params=self.params, a=self.a0, b=self.t_h)

    def as_json_dict(self) -> dict:
        return {
            "n": self.params.n,
            "r": self.params.r,
            "t_h": self.t_h,
            "t_h_bracket": [
                str(self.bracket.lo.numerator),
                str(self.bracket.lo.denominator),
                str(self.bracket.hi.numerator),
                str(self.bracket.hi.denominator),
            ],
            "a0": list(self.a0),
            "residual": self.residual,
            "chain_verified": self.chain_verified,
        }


def recurrence_polys(p: FamilyParams) -> tuple[tuple[IntPolynomial, ...], IntPolynomial]:
    """Exact recurrence polynomials (a_0 .. a_{n-1}) and the closing h.

    Requires r < n; the r = n construction does not use the recurrence.
    """
    n, r = p.n, p.r
    if r >= n:
        raise UnsupportedParams("recurrence requires r < n")
    return _recurrence_cached(n, r)


@functools.lru_cache(maxsize=None)
def _recurrence_cached(n: int, r: int):
    one = IntPolynomial((1,))
    a = [one] * r
    for j in range(r, n):
        a.append(a[j - 1].subtract(a[j - r].shift_up()))
    h = a[n - 1].subtract(a[n - r].shift_up())
    return tuple(a), h


# the a_j(t) depend on (j, r) only, so isolated roots are shared across n
@functools.lru_cache(maxsize=None)
def _a_poly(j: int, r: int) -> IntPolynomial:
    one = IntPolynomial((1,))
    if j < r:
        return one
    a = [one] * r
    for k in range(r, j + 1):
        a.append(a[k - 1].subtract(a[k - r].shift_up()))
    return a[j]


@functools.lru_cache(maxsize=None)
def _a_min_root(j: int, r: int) -> tuple[float, RootBracket]:
    return min_positive_root(_a_poly(j, r), width=_CHAIN_WIDTH)


@functools.lru_cache(maxsize=None)
def _h_min_root(n: int, r: int) -> tuple[float, RootBracket]:
    _, h = recurrence_polys(FamilyParams(n, r))
    return min_positive_root(h, width=_CERT_WIDTH)


def _certified_less(first: RootBracket, second: RootBracket) -> bool:
    """True iff the enclosed roots satisfy first < second, provably."""
    upper = first.exact if first.exact is not None else first.hi
    lower = second.exact if second.exact is not None else second.lo
    if first.exact is not None and second.exact is not None:
        return first.exact < second.exact
    return upper <= lower


def verify_min_chain(p: FamilyParams) -> bool:
    """Check the strict ordering of smallest positive roots.

    min(h) < min(a_{n-1}) < ... < min(a_{r+1}) < min(a_r) = 1, every
    comparison made on certified brackets so no floating-point tie can
    slip through.
    """
    n, r = p.n, p.r
    if r >= n:
        raise UnsupportedParams("chain is defined for r < n")
    _, h_bracket = _h_min_root(n, r)
    brackets = [h_bracket]
    for j in range(n - 1, r - 1, -1):
        brackets.append(_a_min_root(j, r)[1])
    for left, right in zip(brackets, brackets[1:]):
        if not _certified_less(left, right):
            return False
    last = brackets[-1]  # a_r(t) = 1 - t, root exactly 1
    return last.exact == 1


def _certify_positive_on_bracket(q: IntPolynomial, bracket: RootBracket) -> float:
    """Certified lower bound of ``q`` over the bracket, or raise.

    Positive at both endpoints and root-free inside implies positive
    throughout; the smaller endpoint value is a valid margin.
    """
    lo_val = q(bracket.lo)
    hi_val = q(bracket.hi)
    if lo_val <= 0 or hi_val <= 0:
        raise CertificationFailed("first-column value not positive at bracket endpoint")
    if count_roots(sturm_chain(q), bracket.lo, bracket.hi) != 0:
        raise CertificationFailed("first-column value changes sign inside bracket")
    return float(min(lo_val, hi_val))


def _exact_alpha_residual(p: FamilyParams, t: Fraction) -> float:
    """|alpha| residual of the exact rational construction at feedback t.

    The recurrence makes every coefficient except the last vanish
    identically, so the exact residual is |h(t)|.
    """
    _, h = recurrence_polys(p)
    return abs(float(h(t)))


def nilpotent_realization(
    p: FamilyParams, precision: str = "double"
) -> NilpotentCertificate:
    """Construct and certify a nilpotent realization for the parameters.

    For r = n all parameters equal to one already close the system, so no
    root isolation is involved; otherwise the smallest positive root of h
    is isolated, every a_j is certified positive on the bracket, and the
    coefficient residual of the emitted realization is checked against
    RESIDUAL_TOL_PER_N * n.
    """
    if precision not in ("double", "extended"):
        raise PreconditionViolated(f"unknown precision mode {precision!r}")
    n, r = p.n, p.r
    if r == n:
        closing = IntPolynomial((1, -1))  # 1 - t, the r = n closing identity
        delta = Fraction(1, 2**60)
        bracket = RootBracket(lo=1 - delta, hi=1 + delta, poly=closing, exact=Fraction(1))
        a0 = (1.0,) * (n - 1)
        reali = FamilyRealization(params=p, a=a0, b=1.0)
        residual = (
            0.0
            if precision == "extended"
            else max(abs(v) for v in char_coeffs(build_matrix(reali)))
        )
        cert = NilpotentCertificate(
            params=p,
            t_h=1.0,
            bracket=bracket,
            a0=a0,
            residual=residual,
            chain_verified=True,
            a0_margins=(1.0,) * (n - 1),
            precision_mode=precision,
        )
    else:
        a_polys, _h = recurrence_polys(p)
        t_float, bracket = _h_min_root(n, r)
        t_mid = bracket.midpoint
        a0 = []
        margins = []
        for j in range(1, n):
            qj = a_polys[j]
            margins.append(_certify_positive_on_bracket(qj, bracket))
            a0.append(float(qj(t_mid)))
        reali = FamilyRealization(params=p, a=tuple(a0), b=t_float)
        if precision == "extended":
            residual = _exact_alpha_residual(p, t_mid)
        else:
            residual = max(abs(v) for v in coeff_map(reali))
        cert = NilpotentCertificate(
            params=p,
            t_h=t_float,
            bracket=bracket,
            a0=tuple(a0),
            residual=residual,
            chain_verified=verify_min_chain(p),
            a0_margins=tuple(margins),
            precision_mode=precision,
        )
    if cert.residual > RESIDUAL_TOL_PER_N * n:
        raise CertificationFailed(
            f"coefficient residual {cert.residual:.3e} exceeds "
            f"{RESIDUAL_TOL_PER_N * n:.3e} (bracket width {float(cert.bracket.width):.3e})"
        )
    return cert
