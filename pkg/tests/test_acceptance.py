"""Acceptance gate: every criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail
line per criterion.
"""

import math
import time
from fractions import Fraction

import numpy as np

from sapcert.charpoly import CoeffVector, char_coeffs, char_coeffs_oracle
from sapcert.cli import main
from sapcert.errors import RealizationFailed
from sapcert.family import FamilyParams, FamilyRealization, build_matrix, build_pattern, coeff_map
from sapcert.jacobian import (
    SAP_CERTIFIED,
    det_A_brute,
    det_A_closed,
    det_B_brute,
    jacobian_det,
    nj_verify,
)
from sapcert.minimality import (
    FIXED_SIGN_COEFF,
    REDUCIBLE_FIXED_TRACE,
    verify_msap,
)
from sapcert.nilpotent import nilpotent_realization, verify_min_chain
from sapcert.patterns import SignPattern, member_of_class
from sapcert.realize import realize


def _report(num: int, name: str, ok: bool, detail: str):
    print(f"ACCEPTANCE {num} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} {name}: {detail}"


def test_criterion_1_basic_example_reproduction():
    t0 = time.perf_counter()
    S = SignPattern.from_rows(["+-", "+-"])
    M = [[1.0, -1.0], [1.0, -1.0]]
    residual = max(abs(v) for v in char_coeffs(M))
    cert = nj_verify(S, M, [(0, 0), (1, 1)])
    elapsed = time.perf_counter() - t0
    ok = (
        residual <= 1e-12
        and abs(cert.jacobian_det - 2.0) <= 1e-9
        and cert.conclusion == SAP_CERTIFIED
        and elapsed < 1.0
    )
    _report(
        1,
        "basic 2x2 example",
        ok,
        f"residual={residual:.2e} det={cert.jacobian_det:.12f} time={elapsed:.2f}s",
    )


def test_criterion_2_nilpotent_certificates_sweep():
    t0 = time.perf_counter()
    ok = True
    notes = []
    worst = 0.0
    for n in range(3, 41):
        for r in range(2, n):
            cert = nilpotent_realization(FamilyParams(n, r))
            worst = max(worst, cert.residual / n)
            if cert.residual > 1e-10 * n:
                ok = False
                notes.append(f"residual fail at ({n},{r})")
            if not all(m > 0 for m in cert.a0_margins):
                ok = False
                notes.append(f"margin fail at ({n},{r})")
            if not cert.chain_verified or not verify_min_chain(cert.params):
                ok = False
                notes.append(f"chain fail at ({n},{r})")
    c32 = nilpotent_realization(FamilyParams(3, 2))
    if not (c32.t_h == 0.5 and c32.bracket.exact == Fraction(1, 2)):
        ok = False
        notes.append("(3,2) anchor")
    c52 = nilpotent_realization(FamilyParams(5, 2))
    if not (c52.bracket.exact == Fraction(1, 3) and c52.t_h == float(Fraction(1, 3))):
        ok = False
        notes.append("(5,2) anchor")
    c42 = nilpotent_realization(FamilyParams(4, 2))
    if abs(c42.t_h - (3 - math.sqrt(5)) / 2) > 1e-12:
        ok = False
        notes.append("(4,2) anchor")
    c53 = nilpotent_realization(FamilyParams(5, 3))
    if not (c53.bracket.exact == Fraction(1, 3) and c53.t_h == float(Fraction(1, 3))):
        ok = False
        notes.append("(5,3) anchor")
    elapsed = time.perf_counter() - t0
    if elapsed >= 60.0:
        ok = False
        notes.append("runtime")
    _report(
        2,
        "nilpotent certificates n<=40",
        ok,
        f"worst residual/n={worst:.2e} time={elapsed:.1f}s {'; '.join(notes)}",
    )


def test_criterion_3_determinant_cross_checks():
    t0 = time.perf_counter()
    ok = True
    notes = []
    worst = 0.0
    for n in range(3, 16):
        for r in range(2, n):
            cert = nilpotent_realization(FamilyParams(n, r))
            for k in range(0, n):
                closed = det_A_closed(k, cert.params, cert)
                if k == 0:
                    if closed != 1.0:
                        ok = False
                        notes.append(f"A(0) at ({n},{r})")
                    continue
                brute = det_A_brute(k, cert.params, cert.t_h)
                err = abs(closed - brute) / max(1.0, abs(brute))
                worst = max(worst, err)
                if err > 1e-9:
                    ok = False
                    notes.append(f"A({k}) at ({n},{r}): {err:.2e}")
    rng = np.random.default_rng(2024)
    negatives = 0
    for _ in range(1000):
        n = int(rng.integers(3, 17))
        r = int(rng.integers(2, n))
        l = int(rng.integers(1, min(15, n) + 1))
        cert = nilpotent_realization(FamilyParams(n, r))
        c = rng.uniform(1e-6, 10.0, l)
        if det_B_brute(l, cert.params, cert.t_h, c) <= 0:
            negatives += 1
    if negatives:
        ok = False
        notes.append(f"{negatives} nonpositive B determinants")
    elapsed = time.perf_counter() - t0
    if elapsed >= 30.0:
        ok = False
        notes.append("runtime")
    _report(
        3,
        "determinant closed form vs LU",
        ok,
        f"worst rel err={worst:.2e} B-negatives={negatives} time={elapsed:.1f}s "
        f"{'; '.join(notes)}",
    )


def test_criterion_4_jacobian_positivity_sweep():
    t0 = time.perf_counter()
    ok = True
    notes = []
    worst_gap = 0.0
    for n in range(3, 41):
        for r in range(2, n):
            cert = nilpotent_realization(FamilyParams(n, r))
            report = jacobian_det(cert.realization())
            gap = abs(report.det_lu - report.det_blocks) / max(1.0, abs(report.det_lu))
            worst_gap = max(worst_gap, gap)
            if not report.positive:
                ok = False
                notes.append(f"not positive at ({n},{r})")
            if gap > 1e-8:
                ok = False
                notes.append(f"route gap at ({n},{r}): {gap:.2e}")
    anchor = jacobian_det(nilpotent_realization(FamilyParams(3, 2)).realization())
    if abs(anchor.det_lu - 2.0) > 1e-9:
        ok = False
        notes.append("(3,2) anchor")
    elapsed = time.perf_counter() - t0
    if elapsed >= 60.0:
        ok = False
        notes.append("runtime")
    _report(
        4,
        "Jacobian positivity n<=40",
        ok,
        f"worst route gap={worst_gap:.2e} anchor det={anchor.det_lu:.12f} "
        f"time={elapsed:.1f}s {'; '.join(notes)}",
    )


def test_criterion_5_spectral_arbitrariness_demonstration():
    t0 = time.perf_counter()
    rng = np.random.default_rng(777)
    failures = 0
    worst = 0.0
    total = 0
    for n in range(3, 11):
        for r in range(2, n):
            p = FamilyParams(n, r)
            pat = build_pattern(p)
            for _ in range(100):
                total += 1
                alpha = tuple(rng.uniform(-5.0, 5.0, n))
                scale = max(1.0, max(abs(v) for v in alpha))
                try:
                    res = realize(p, CoeffVector(alpha))
                except RealizationFailed:
                    failures += 1
                    continue
                rel = res.residual / scale
                worst = max(worst, rel)
                if res.residual > 1e-8 * scale or not member_of_class(res.matrix, pat):
                    failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 300.0
    _report(
        5,
        "realization of random targets n<=10",
        ok,
        f"{total} targets, failures={failures}, worst rel residual={worst:.2e}, "
        f"time={elapsed:.1f}s",
    )


def test_criterion_6_msap_verification():
    t0 = time.perf_counter()
    ok = True
    notes = []
    for n in range(2, 13):
        for r in range(2, n + 1):
            p = FamilyParams(n, r)
            report = verify_msap(p, samples=1000, seed=0)
            if not report.verdict:
                ok = False
                notes.append(f"verdict false at ({n},{r})")
                continue
            for (i, j), obs in report.per_deletion:
                if j == i + 1 and i < n - 1:
                    expected = (REDUCIBLE_FIXED_TRACE, None, None)
                elif (i, j) == (0, 0):
                    expected = (FIXED_SIGN_COEFF, 1, "-")
                elif (i, j) == (n - 1, n - r):
                    expected = (FIXED_SIGN_COEFF, n, "-")
                elif (i, j) == (n - 1, n - 1):
                    expected = (FIXED_SIGN_COEFF, 1, "+")
                else:
                    expected = (FIXED_SIGN_COEFF, i + 2, "+")
                kind, idx, sign = expected
                if obs.kind != kind:
                    ok = False
                    notes.append(f"kind {obs.kind}!={kind} at ({n},{r}) del {(i, j)}")
                elif kind == FIXED_SIGN_COEFF:
                    if obs.detail["index"] != idx or obs.detail["sign"] != sign:
                        ok = False
                        notes.append(f"case detail at ({n},{r}) del {(i, j)}")
                    if not obs.detail["sample_confirmed"] or obs.detail["samples"] != 1000:
                        ok = False
                        notes.append(f"confirmation at ({n},{r}) del {(i, j)}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 60.0:
        ok = False
        notes.append("runtime")
    _report(
        6,
        "minimality verification n<=12",
        ok,
        f"time={elapsed:.1f}s {'; '.join(notes[:4])}",
    )


def test_criterion_7_oracle_agreement():
    t0 = time.perf_counter()
    rng = np.random.default_rng(555)
    ok = True
    notes = []
    worst_char = 0.0
    for _ in range(500):
        n = int(rng.integers(2, 11))
        A = rng.uniform(-1.0, 1.0, (n, n))
        fast = char_coeffs(A).values
        slow = char_coeffs_oracle(A).values
        norm = float(np.linalg.norm(A, np.inf))
        for j in range(1, n + 1):
            tol = 1e-10 * max(1.0, norm**j)
            err = abs(fast[j - 1] - slow[j - 1])
            worst_char = max(worst_char, err / tol * 1e-10)
            if err > tol:
                ok = False
                notes.append(f"char mismatch n={n} j={j}")
    worst_map = 0.0
    for _ in range(1000):
        n = int(rng.integers(3, 13))
        r = int(rng.integers(2, n))
        x = FamilyRealization(
            FamilyParams(n, r),
            a=tuple(rng.uniform(0.05, 4.0, n - 1)),
            b=float(rng.uniform(0.05, 4.0)),
        )
        closed = coeff_map(x).values
        direct = char_coeffs(build_matrix(x)).values
        scale = max(1.0, max(x.a), x.b) ** n
        err = max(abs(u - v) for u, v in zip(closed, direct))
        worst_map = max(worst_map, err / scale)
        if err > 1e-10 * scale:
            ok = False
            notes.append(f"map mismatch ({n},{r})")
    elapsed = time.perf_counter() - t0
    if elapsed >= 30.0:
        ok = False
        notes.append("runtime")
    _report(
        7,
        "independent oracle agreement",
        ok,
        f"worst scaled char err={worst_char:.2e} worst scaled map err={worst_map:.2e} "
        f"time={elapsed:.1f}s {'; '.join(notes[:4])}",
    )


def test_criterion_8_sweep_determinism(capsys):
    # the stated invocation, with the seed flag after the command name
    argv = ["sweep", "--n-max", "12", "--seed", "7"]
    code1 = main(list(argv))
    out1 = capsys.readouterr().out
    code2 = main(list(argv))
    out2 = capsys.readouterr().out
    ok = code1 == 0 and code2 == 0 and out1 == out2 and len(out1) > 0
    _report(
        8,
        "byte-identical sweep output",
        ok,
        f"bytes={len(out1)} identical={out1 == out2}",
    )
