"""Hereditary obstructions to spectral arbitrariness under entry deletion.

Minimality of the family pattern is verified deletion by deletion: zeroing
any single nonzero entry either disconnects the digraph into fixed-trace
blocks, or pins the sign of one characteristic coefficient over the whole
class.  Both obstructions survive further deletions, so they rule out
every subpattern at once.

For the family the fixed signs are read off the closed-form coefficient
map, where they are sums of strictly positive terms; a seeded sampling
confirmation is run on top.  For arbitrary user patterns only the sampling
detector is available and its verdicts are evidence, never proofs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .charpoly import char_coeffs
from .errors import InvalidInput
from .family import FamilyParams, build_pattern, coeff_values_batch
from .patterns import (
    Sign,
    SignPattern,
    adjacency,
    is_irreducible,
    nonzero_count,
    one_entry_subpatterns,
    strongly_connected_components,
)

TOO_FEW_ENTRIES = "TooFewEntries"
REDUCIBLE_FIXED_TRACE = "ReducibleFixedTraceBlocks"
FIXED_SIGN_COEFF = "FixedSignCoefficient"
UNOBSTRUCTED = "Unobstructed"

DEFAULT_SAMPLES = 1000


@dataclass(frozen=True)
class Obstruction:
    """One detected obstruction; ``detail`` is kind-specific and JSON-ready."""

    kind: str
    detail: dict = field(default_factory=dict)
    hereditary: bool = True


@dataclass(frozen=True)
class MsapReport:
    """Per-deletion obstruction map for a pattern.

    ``verdict`` is True iff every one-entry deletion carries an
    obstruction (confirmed by sampling where applicable).
    """

    pattern: SignPattern
    per_deletion: tuple[tuple[tuple[int, int], Optional[Obstruction]], ...]
    verdict: bool
    seed: int
    samples: int
    params: Optional[FamilyParams] = None

    def obstruction_at(self, pos: tuple[int, int]) -> Optional[Obstruction]:
        for p, obs in self.per_deletion:
            if p == pos:
                return obs
        raise KeyError(pos)

    def as_json_dict(self) -> dict:
        deletions = []
        for (i, j), obs in self.per_deletion:
            deletions.append(
                {
                    "position": [i + 1, j + 1],
                    "obstruction": obs.kind if obs else UNOBSTRUCTED,
                    "detail": dict(obs.detail) if obs else {},
                }
            )
        out = {"verdict": self.verdict, "seed": self.seed, "deletions": deletions}
        if self.params is not None:
            out["n"] = self.params.n
            out["r"] = self.params.r
        return out


def entry_count_obstruction(S: SignPattern) -> Optional[Obstruction]:
    """Too few entries: an irreducible square pattern of order n needs 2n-1."""
    if not S.is_square:
        raise InvalidInput("entry count rule applies to square patterns")
    count = nonzero_count(S)
    threshold = 2 * S.n_rows - 1
    if is_irreducible(S) and count < threshold:
        return Obstruction(
            kind=TOO_FEW_ENTRIES,
            detail={"count": count, "required": threshold},
        )
    return None


def reducibility_obstruction(S: SignPattern) -> Optional[Obstruction]:
    """Block-triangular split with a fixed-sign-trace diagonal block.

    The strongly connected components give the finest block lower
    triangular form.  If some block's diagonal entries are nonzero of a
    single sign, its trace sign is fixed, that block requires a nonzero
    eigenvalue, and no subpattern can be spectrally arbitrary.
    """
    if not S.is_square:
        raise InvalidInput("reducibility rule applies to square patterns")
    comps = strongly_connected_components(adjacency(S))
    if len(comps) == 1:
        return None
    fixed_blocks = []
    for idx, comp in enumerate(comps):
        diag = [S.entries[v][v] for v in comp]
        nonzero = {s for s in diag if s is not Sign.ZERO}
        if len(nonzero) == 1:
            fixed_blocks.append({"block": idx, "trace_sign": nonzero.pop().value})
    if not fixed_blocks:
        return None
    return Obstruction(
        kind=REDUCIBLE_FIXED_TRACE,
        detail={
            "partition": [[v + 1 for v in comp] for comp in comps],
            "fixed_trace_blocks": fixed_blocks,
        },
    )


def _family_positions(p: FamilyParams) -> dict[tuple[int, int], str]:
    n, r = p.n, p.r
    roles = {}
    for i in range(n - 1):
        roles[(i, 0)] = "a"
        roles[(i, i + 1)] = "superdiagonal"
    roles[(n - 1, n - r)] = "feedback"
    roles[(n - 1, n - 1)] = "corner"
    return roles


def fixed_sign_obstruction(
    p: FamilyParams, deleted: tuple[int, int]
) -> Optional[Obstruction]:
    """Fixed-sign coefficient forced by zeroing one family entry.

    Derived from the closed-form coefficient map with the corresponding
    parameter set to zero; every surviving term has one sign, so the sign
    claim holds across the whole class (positive scaling and diagonal
    similarity preserve coefficient signs).  Superdiagonal deletions are
    not of this kind and return None.
    """
    n = p.n
    roles = _family_positions(p)
    role = roles.get(tuple(deleted))
    if role is None:
        raise InvalidInput(f"{deleted} is not a nonzero position of the pattern")
    if role == "superdiagonal":
        return None
    if role == "corner":
        # trace reduces to the positive (1,1) entry
        return Obstruction(
            kind=FIXED_SIGN_COEFF,
            detail={"index": 1, "sign": "+", "certified": True},
        )
    if role == "feedback":
        # last coefficient reduces to -a_{n-1}
        return Obstruction(
            kind=FIXED_SIGN_COEFF,
            detail={"index": n, "sign": "-", "certified": True},
        )
    j = deleted[0] + 1  # a_j
    if j == 1:
        # trace reduces to the negative corner
        return Obstruction(
            kind=FIXED_SIGN_COEFF,
            detail={"index": 1, "sign": "-", "certified": True},
        )
    # with a_j = 0 coefficient j+1 is a sum of strictly positive terms
    return Obstruction(
        kind=FIXED_SIGN_COEFF,
        detail={"index": j + 1, "sign": "+", "certified": True},
    )


def _sample_parameters(
    rng: np.random.Generator, m: int, count: int
) -> np.ndarray:
    # log-uniform over [1e-2, 1e1] exercises three orders of magnitude
    return 10.0 ** rng.uniform(-2.0, 1.0, size=(m, count))


def confirm_fixed_sign(
    p: FamilyParams,
    deleted: tuple[int, int],
    index: int,
    sign: str,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> bool:
    """Sampling confirmation of a family fixed-sign claim.

    Draws random positive parameters for the structured form, zeroes the
    deleted parameter, and checks that coefficient ``index`` keeps the
    claimed strict sign in every sample.
    """
    n, r = p.n, p.r
    roles = _family_positions(p)
    role = roles.get(tuple(deleted))
    if role in (None, "superdiagonal"):
        raise InvalidInput(f"no fixed-sign claim for position {deleted}")
    rng = np.random.default_rng([seed, deleted[0], deleted[1]])
    a = _sample_parameters(rng, samples, n - 1)
    b = _sample_parameters(rng, samples, 1)[:, 0]
    if role == "a":
        a[:, deleted[0]] = 0.0
    elif role == "feedback":
        b[:] = 0.0
    else:  # corner deletion changes the structure, not a parameter
        pass
    if role == "corner":
        vals = np.empty((samples, n))
        for k in range(samples):
            M = _family_matrix_no_corner(p, a[k], b[k])
            vals[k] = char_coeffs(M).values
    else:
        vals = coeff_values_batch(n, r, a, b)
    col = vals[:, index - 1]
    if sign == "+":
        return bool(np.all(col > 0.0))
    return bool(np.all(col < 0.0))


def _family_matrix_no_corner(p: FamilyParams, a: np.ndarray, b: float) -> np.ndarray:
    n, r = p.n, p.r
    M = np.zeros((n, n))
    for i in range(n - 1):
        M[i, 0] = a[i]
        M[i, i + 1] = -1.0
    M[n - 1, n - r] = b
    return M


def verify_msap(
    p: FamilyParams, samples: int = DEFAULT_SAMPLES, seed: int = 0
) -> MsapReport:
    """Obstruction scan over every one-entry deletion of the family pattern.

    The verdict is True iff each deletion is obstructed; fixed-sign claims
    are additionally confirmed on seeded samples and a failed confirmation
    (which would indicate a bug, not a property of the pattern) clears the
    verdict.
    """
    S = build_pattern(p)
    rows = []
    verdict = True
    for pos, sub in one_entry_subpatterns(S):
        obs = fixed_sign_obstruction(p, pos)
        if obs is not None:
            confirmed = confirm_fixed_sign(
                p, pos, obs.detail["index"], obs.detail["sign"], samples, seed
            )
            detail = dict(obs.detail)
            detail["sample_confirmed"] = confirmed
            detail["samples"] = samples
            obs = Obstruction(kind=obs.kind, detail=detail)
            if not confirmed:
                verdict = False
        else:
            obs = reducibility_obstruction(sub) or entry_count_obstruction(sub)
        if obs is None:
            verdict = False
        rows.append((pos, obs))
    return MsapReport(
        pattern=S,
        per_deletion=tuple(rows),
        verdict=verdict,
        seed=seed,
        samples=samples,
        params=p,
    )


def obstruction_scan(
    S: SignPattern, samples: int = DEFAULT_SAMPLES, seed: int = 0
) -> MsapReport:
    """Deletion scan for an arbitrary square pattern.

    Uses the structural detectors plus a sampled fixed-sign search: a
    coefficient that keeps one strict sign over all sampled realizations
    of the deleted pattern is reported with ``certified: False``.  Absence
    of an obstruction yields verdict False, which is not a claim that any
    subpattern is spectrally arbitrary.
    """
    if not S.is_square:
        raise InvalidInput("pattern must be square")
    rng = np.random.default_rng(seed)
    rows = []
    verdict = True
    for pos, sub in one_entry_subpatterns(S):
        obs = reducibility_obstruction(sub) or entry_count_obstruction(sub)
        if obs is None:
            obs = _sampled_fixed_sign(sub, rng, samples)
        if obs is None:
            verdict = False
        rows.append((pos, obs))
    return MsapReport(
        pattern=S,
        per_deletion=tuple(rows),
        verdict=verdict,
        seed=seed,
        samples=samples,
    )


def _sampled_fixed_sign(
    S: SignPattern, rng: np.random.Generator, samples: int
) -> Optional[Obstruction]:
    n = S.n_rows
    positions = list(S.nonzero_positions())
    mags = _sample_parameters(rng, samples, len(positions))
    vals = np.empty((samples, n))
    for k in range(samples):
        M = np.zeros((n, n))
        for (idx, (i, j)) in enumerate(positions):
            v = mags[k, idx]
            M[i, j] = v if S.entries[i][j] is Sign.PLUS else -v
        vals[k] = char_coeffs(M).values
    for col in range(n):
        column = vals[:, col]
        if np.all(column > 0.0):
            sign = "+"
        elif np.all(column < 0.0):
            sign = "-"
        else:
            continue
        return Obstruction(
            kind=FIXED_SIGN_COEFF,
            detail={
                "index": col + 1,
                "sign": sign,
                "certified": False,
                "samples": samples,
            },
        )
    return None
