"""Exact integer polynomials and certified smallest-positive-root isolation.

Roots are located by Sturm-sequence counting over exact rationals and
refined by bisection, so every returned bracket comes with a proof that it
contains exactly one root and that no smaller positive root exists.  Grid
scanning can miss close root pairs; counting cannot.

Sign evaluation clears denominators and runs in pure integer arithmetic,
which keeps deep bisection cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import InvalidInput, NoPositiveRoot, PreconditionViolated

DEFAULT_WIDTH = Fraction(1, 10**14)

_MAX_BISECTIONS = 4000
_RATROOT_COEFF_LIMIT = 10**9


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with arbitrary-precision integer coefficients.

    ``coeffs`` is ascending in degree with no trailing zeros; the zero
    polynomial is the empty tuple.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.coeffs and self.coeffs[-1] == 0:
            raise InvalidInput("leading coefficient must be nonzero")

    @classmethod
    def from_coeffs(cls, coeffs) -> "IntPolynomial":
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return cls(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial.from_coeffs(
            i * c for i, c in enumerate(self.coeffs) if i > 0
        )

    def subtract(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] -= c
        return IntPolynomial.from_coeffs(a)

    def shift_up(self) -> "IntPolynomial":
        """Multiply by the variable."""
        if self.is_zero:
            return self
        return IntPolynomial((0,) + self.coeffs)


@dataclass(frozen=True)
class RootBracket:
    """Certified enclosure of a single positive root.

    ``poly`` changes sign across (lo, hi), the Sturm count on (lo, hi] is
    one, and the count on (0, lo] is zero when produced by
    :func:`min_positive_root`.  ``exact`` is set when the root is a known
    rational, in which case it lies strictly inside (lo, hi).
    """

    lo: Fraction
    hi: Fraction
    poly: IntPolynomial
    exact: Fraction | None = None

    @property
    def midpoint(self) -> Fraction:
        return self.exact if self.exact is not None else (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def as_float(self) -> float:
        return float(self.midpoint)


def _sign_at(ints: tuple[int, ...], x: Fraction) -> int:
    # homogeneous evaluation: sign of sum c_i p^i q^(d-i) for x = p/q, q > 0
    if not ints:
        return 0
    p, q = x.numerator, x.denominator
    d = len(ints) - 1
    acc = 0
    qpow = 1
    for i in range(d, -1, -1):
        acc = acc * p + ints[i] * qpow
        qpow *= q
    return (acc > 0) - (acc < 0)


def _primitive(fracs: list[Fraction]) -> tuple[int, ...]:
    den = 1
    for c in fracs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fracs]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    g = g or 1
    return tuple(c // g for c in ints)


def sturm_chain(p: IntPolynomial) -> tuple[tuple[int, ...], ...]:
    """Sturm sequence of ``p``, each member scaled to a primitive integer poly.

    The chain runs down to gcd(p, p'), so root counts are of distinct
    roots and remain valid for non-square-free input.
    """
    if p.is_zero:
        raise InvalidInput("Sturm chain of the zero polynomial")
    chain = [tuple(p.coeffs)]
    d = p.derivative()
    if not d.is_zero:
        chain.append(tuple(d.coeffs))
        prev = [Fraction(c) for c in p.coeffs]
        curr = [Fraction(c) for c in d.coeffs]
        while True:
            rem = list(prev)
            while len(rem) >= len(curr):
                k = rem[-1] / curr[-1]
                off = len(rem) - len(curr)
                for i in range(len(curr)):
                    rem[i + off] -= k * curr[i]
                rem.pop()
                while rem and rem[-1] == 0:
                    rem.pop()
            if not rem:
                break
            neg = [-c for c in rem]
            chain.append(_primitive(neg))
            prev, curr = curr, neg
    return tuple(chain)


def sign_variations(chain, x: Fraction) -> int:
    v, prev = 0, 0
    for f in chain:
        s = _sign_at(f, x)
        if s != 0:
            if prev != 0 and s != prev:
                v += 1
            prev = s
    return v


def count_roots(chain, a: Fraction, b: Fraction) -> int:
    """Distinct roots in (a, b] for a < b; ``a`` must not be a root."""
    return sign_variations(chain, a) - sign_variations(chain, b)


def cauchy_bound(p: IntPolynomial) -> Fraction:
    """Strict upper bound on the magnitude of every root."""
    if p.degree < 1:
        raise InvalidInput("bound requires degree >= 1")
    lead = abs(p.coeffs[-1])
    rest = max((abs(c) for c in p.coeffs[:-1]), default=0)
    return 1 + Fraction(rest, lead)


def _divisors(n: int) -> list[int]:
    out = []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
    return sorted(out)


def _deflate_exact(coeffs: list[Fraction], root: Fraction) -> list[Fraction]:
    # synthetic division by (x - root); remainder is known to be zero
    out = [Fraction(0)] * (len(coeffs) - 1)
    acc = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        acc = acc * root + coeffs[i]
        out[i - 1] = acc
    return out


def positive_rational_roots(p: IntPolynomial) -> list[Fraction]:
    """Exact positive rational roots, each listed once.

    Candidate enumeration needs the constant and leading coefficients
    factored, so this gives up (returns []) when they are too large; the
    bisection path stays fully general either way.
    """
    cs = list(p.coeffs)
    shift = 0
    while cs and cs[0] == 0:
        cs.pop(0)
        shift += 1
    if not cs or len(cs) == 1:
        return []
    c0, lead = abs(cs[0]), abs(cs[-1])
    if c0 > _RATROOT_COEFF_LIMIT or lead > _RATROOT_COEFF_LIMIT:
        return []
    roots = []
    for num in _divisors(c0):
        for den in _divisors(lead):
            cand = Fraction(num, den)
            if cand not in roots and p(cand) == 0:
                roots.append(cand)
    return sorted(roots)


def min_positive_root(
    p: IntPolynomial, width: Fraction = DEFAULT_WIDTH
) -> tuple[float, RootBracket]:
    """Smallest positive root of ``p``, certified.

    Requires p(0) > 0.  The returned bracket (lo, hi) has width at most
    ``width``, contains exactly one root by Sturm count, shows a sign
    change of ``p`` across its endpoints, and carries a zero count on
    (0, lo].  Known rational roots are reported exactly.
    """
    if p.is_zero or p.degree < 1:
        raise NoPositiveRoot("constant polynomial has no positive root")
    if p(0) <= 0:
        raise PreconditionViolated("min_positive_root requires p(0) > 0")
    chain = sturm_chain(p)
    bound = cauchy_bound(p)
    total = count_roots(chain, Fraction(0), bound)
    if total == 0:
        raise NoPositiveRoot("no root on the positive half-axis")

    rational = positive_rational_roots(p)

    lo, hi = Fraction(0), bound
    for _ in range(_MAX_BISECTIONS):
        if hi - lo <= width and count_roots(chain, lo, hi) == 1:
            break
        mid = (lo + hi) / 2
        if count_roots(chain, lo, mid) >= 1:
            hi = mid
        else:
            lo = mid
    else:
        raise PreconditionViolated("root isolation did not converge")

    exact = next((q for q in rational if lo < q <= hi), None)
    if exact is None and _sign_at(tuple(p.coeffs), hi) == 0:
        exact = hi  # bisection midpoint landed on the root
    if exact is not None:
        # re-center a sign-change bracket around the exact root
        delta = min(width / 2, exact - lo if exact > lo else width / 2)
        blo, bhi = exact - delta, exact + delta
        while (
            count_roots(chain, blo, bhi) != 1
            or _sign_at(tuple(p.coeffs), blo) == 0
            or _sign_at(tuple(p.coeffs), bhi) == 0
        ):
            delta /= 2
            blo, bhi = exact - delta, exact + delta
        lo, hi = blo, bhi

    s_lo = _sign_at(tuple(p.coeffs), lo)
    s_hi = _sign_at(tuple(p.coeffs), hi)
    if s_lo == 0 or s_hi == 0 or s_lo == s_hi:
        raise PreconditionViolated(
            "smallest positive root admits no sign-change bracket "
            "(even multiplicity); cannot certify by bisection"
        )
    if count_roots(chain, Fraction(0), lo) != 0:
        raise PreconditionViolated("a smaller positive root slipped below the bracket")
    bracket = RootBracket(lo=lo, hi=hi, poly=p, exact=exact)
    return bracket.as_float(), bracket


def isolate_positive_roots(
    p: IntPolynomial, width: Fraction = DEFAULT_WIDTH
) -> list[RootBracket]:
    """Brackets for every distinct positive root, in increasing order.

    Exact rational roots are deflated first so that bisection endpoints
    can never collide with a root; each irrational root gets a certified
    one-root bracket refined to ``width``.
    """
    if p.is_zero:
        raise InvalidInput("cannot isolate roots of the zero polynomial")
    if p.degree < 1:
        return []
    work = [Fraction(c) for c in p.coeffs]
    while work[0] == 0:
        work.pop(0)  # roots at zero are not positive
        if len(work) == 1:
            break
    rational = positive_rational_roots(IntPolynomial.from_coeffs(_primitive(work)))
    for q in rational:
        reduced = _deflate_exact(work, q)
        while len(reduced) > 1 and IntPolynomial.from_coeffs(_primitive(reduced))(q) == 0:
            reduced = _deflate_exact(reduced, q)
        work = reduced
    deflated = IntPolynomial.from_coeffs(_primitive(work))

    brackets = [
        RootBracket(lo=q - width / 2, hi=q + width / 2, poly=p, exact=q)
        for q in rational
    ]

    if deflated.degree >= 1:
        chain = sturm_chain(deflated)
        bound = cauchy_bound(deflated)
        pending = [(Fraction(0), bound, count_roots(chain, Fraction(0), bound))]
        guard = 0
        while pending:
            guard += 1
            if guard > _MAX_BISECTIONS * (p.degree + 1):
                raise PreconditionViolated("root isolation did not converge")
            lo, hi, cnt = pending.pop()
            if cnt == 0:
                continue
            if cnt == 1 and hi - lo <= width:
                # right endpoint may be an exact (dyadic) hit from subdivision;
                # the deflated polynomial certifies the root, so store it:
                # the original may have deflated rational roots nearby
                hit = hi if _sign_at(tuple(deflated.coeffs), hi) == 0 else None
                brackets.append(RootBracket(lo=lo, hi=hi, poly=deflated, exact=hit))
                continue
            mid = (lo + hi) / 2
            left = count_roots(chain, lo, mid)
            pending.append((lo, mid, left))
            pending.append((mid, hi, cnt - left))
    return sorted(brackets, key=lambda b: b.midpoint)


def sign_at_root(q: IntPolynomial, bracket: RootBracket, max_refine: int = 200) -> int:
    """Certified sign of ``q`` at the root enclosed by ``bracket``.

    Returns +1/-1 when provable, 0 when the sign could not be separated
    from zero within ``max_refine`` refinements of the bracket (including
    the case that the root of the bracket polynomial is also a root of
    ``q``).
    """
    if bracket.exact is not None:
        v = q(bracket.exact)
        return (v > 0) - (v < 0)
    lo, hi = bracket.lo, bracket.hi
    q_chain = None
    p_chain = None
    for _ in range(max_refine):
        s_lo = _sign_at(tuple(q.coeffs), lo)
        s_hi = _sign_at(tuple(q.coeffs), hi)
        if s_lo == s_hi and s_lo != 0:
            if q_chain is None:
                q_chain = sturm_chain(q)
            if count_roots(q_chain, lo, hi) == 0:
                return s_lo
        # count-based refinement works for any root multiplicity
        if p_chain is None:
            p_chain = sturm_chain(bracket.poly)
        mid = (lo + hi) / 2
        if count_roots(p_chain, lo, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return 0
