"""Characteristic-polynomial coefficients in the alternating convention.

Throughout the package a monic characteristic polynomial is stored as the
vector (v_1, ..., v_n) with

    p(x) = x^n - v_1 x^{n-1} + v_2 x^{n-2} - ... + (-1)^n v_n,

so v_j equals the sum of the j-by-j principal minors (the j-th elementary
symmetric function of the eigenvalues).  Only the CLI converts to plain
monic coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ConvergenceError, InvalidInput, SizeLimitExceeded
from .patterns import as_matrix

_ORACLE_MAX_N = 14


@dataclass(frozen=True)
class CoeffVector:
    """Coefficients (v_1..v_n) of a degree-n monic polynomial, alternating form."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) < 1:
            raise InvalidInput("coefficient vector must have length >= 1")

    @property
    def n(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, j: int) -> float:
        return self.values[j]


def _square(A) -> np.ndarray:
    M = as_matrix(A)
    if M.shape[0] != M.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {M.shape}")
    return M


def char_coeffs(A) -> CoeffVector:
    """Alternating-form coefficients via the Faddeev-LeVerrier recursion.

    O(n^4) and free of pivot-order nondeterminism, which keeps repeated
    runs byte-identical.
    """
    M = _square(A)
    n = M.shape[0]
    eye = np.eye(n)
    N = eye
    vals = []
    for k in range(1, n + 1):
        AN = M @ N
        ck = -np.trace(AN) / k
        vals.append((-1.0) ** k * ck)
        N = AN + ck * eye
    return CoeffVector(tuple(float(v) for v in vals))


def _principal_minor(sub: np.ndarray) -> float:
    """Determinant by cofactor expansion along rows, memoized over column sets.

    Equivalent to a Laplace expansion with shared subproblems; used only as
    the independent test oracle, never on the main path.
    """
    k = sub.shape[0]
    if k == 0:
        return 1.0
    full = (1 << k) - 1
    d = [0.0] * (full + 1)
    d[0] = 1.0
    rows = sub.tolist()
    for mask in range(full):
        v = d[mask]
        if v == 0.0:
            continue
        row = rows[mask.bit_count()]
        for c in range(k):
            bit = 1 << c
            if mask & bit:
                continue
            if (mask >> (c + 1)).bit_count() & 1:
                d[mask | bit] -= v * row[c]
            else:
                d[mask | bit] += v * row[c]
    return d[full]


def char_coeffs_oracle(A) -> CoeffVector:
    """Coefficients as explicit sums of principal minors (test oracle).

    Exponential cost; refuses n > 14.
    """
    M = _square(A)
    n = M.shape[0]
    if n > _ORACLE_MAX_N:
        raise SizeLimitExceeded(f"oracle supports n <= {_ORACLE_MAX_N}, got {n}")
    vals = []
    for j in range(1, n + 1):
        total = 0.0
        for rows in combinations(range(n), j):
            total += _principal_minor(M[np.ix_(rows, rows)])
        vals.append(total)
    return CoeffVector(tuple(vals))


def spectrum(A) -> tuple[complex, ...]:
    """Eigenvalue multiset, deterministically ordered.

    Sorted by (real part, |imaginary part|) with the +imaginary member of
    each conjugate pair first, so conjugates are adjacent in the output.
    """
    M = _square(A)
    try:
        eigs = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        cond = float(np.linalg.cond(M)) if M.size else float("nan")
        raise ConvergenceError(
            f"eigenvalue iteration failed (condition estimate {cond:.3e})"
        ) from exc
    ordered = sorted(
        (complex(z) for z in eigs),
        key=lambda z: (z.real, abs(z.imag), -z.imag),
    )
    return tuple(ordered)


def coeffs_to_monic(c: CoeffVector) -> tuple[float, ...]:
    """Convert to plain monic coefficients (c_1..c_n), p(x) = x^n + sum c_j x^{n-j}."""
    return tuple(((-1.0) ** j) * v for j, v in enumerate(c.values, start=1))


def monic_to_coeffs(cs) -> CoeffVector:
    """Inverse of :func:`coeffs_to_monic`."""
    return CoeffVector(tuple(((-1.0) ** j) * float(v) for j, v in enumerate(cs, start=1)))
