"""Thirteen numbered release criteria, one test and one printed line each.

Every criterion pins its tolerances and its runtime caps where they apply;
run with ``pytest tests/test_acceptance.py -s`` to see the PASS/FAIL lines.
The asserts carry the measured quantities so a failing line is
self-describing.
"""

import math
import time
from contextlib import contextmanager

import numpy as np

from infostab import (
    Constant,
    Constant3,
    EndpointPatch,
    EntropySolution,
    FunctionSum,
    LevelNoise,
    ModifiedEntropySolution,
    PhiForm,
    PhiOfSum,
    PowerFamily,
    PowerLaw,
    PowerLog,
    ProductUV,
    ScaledBump,
    SimplexGrid,
    Sum3,
    Wave2,
    Wave3,
    XLogX,
    alpha_entropy,
    box_growth_constants,
    certify_associativity,
    certify_entropy_equation,
    certify_fundamental_closed,
    certify_fundamental_open,
    certify_hyperstable,
    certify_measure_sequence,
    certify_modified_entropy,
    certify_sum_form,
    certify_sum_form_mixed,
    derive_generating_defect,
    entropy_limit_gap,
    hyperstability_blowup_probe,
    shannon_entropy,
    stability_constant_K,
    stability_constant_T,
)
from infostab.cli import run

from _helpers import exact_measure

ALPHAS_OPEN = (0.3, 0.7, 2.0, 4.0)


@contextmanager
def criterion(num, label):
    try:
        yield
    except BaseException as exc:
        text = str(exc).strip().splitlines()[0] if str(exc).strip() else type(exc).__name__
        print(f"criterion {num:02d} ({label}): FAIL  {text}")
        raise
    print(f"criterion {num:02d} ({label}): PASS")


def test_criterion_01_constants():
    with criterion(1, "explicit stability constants"):
        t0 = time.perf_counter()
        K2 = stability_constant_K(2.0)
        T2 = stability_constant_T(2.0)
        gaps = []
        for a in (0.25, 0.5, 2.0, 3.0, 5.0):
            K = stability_constant_K(a)
            T = stability_constant_T(a)
            rhs = 4.0 * T + 3.0
            gaps.append(abs(K * abs(2.0 ** (1.0 - a) - 1.0) - rhs) / rhs)
        elapsed = time.perf_counter() - t0
        assert abs(K2 - 2406.0) <= 1e-9 * 2406.0, K2
        assert abs(T2 - 300.0) <= 1e-9 * 300.0, T2
        assert max(gaps) <= 1e-9, max(gaps)
        assert elapsed < 1e-3, f"constant evaluation took {elapsed * 1e3:.3f} ms"


def test_criterion_02_exact_family_round_trip():
    with criterion(2, "exact-family round trip at R=256"):
        rng = np.random.default_rng(20251104)
        t0 = time.perf_counter()
        for i in range(20):
            alpha = ALPHAS_OPEN[i % 4]
            a, b = rng.uniform(-3.0, 3.0, size=2)
            cert = certify_fundamental_open(PowerFamily(a, b, alpha), alpha, 256)
            assert cert.epsilon <= 1e-10, (alpha, cert.epsilon)
            assert abs(cert.candidate.a - a) <= 1e-6, (alpha, a, cert.candidate.a)
            assert abs(cert.candidate.b - b) <= 1e-6, (alpha, b, cert.candidate.b)
            assert cert.satisfied
        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"20 round trips took {elapsed:.2f} s"


def test_criterion_03_open_stability_bound():
    with criterion(3, "open-domain bound over 36 noise combinations"):
        hits = 0
        combos = 0
        for alpha in ALPHAS_OPEN:
            K = stability_constant_K(alpha)
            for delta in (1e-4, 1e-3, 1e-2):
                for seed in range(3):
                    combos += 1
                    rng = np.random.default_rng(1000 + 17 * seed + combos)
                    a, b = rng.uniform(-2.0, 2.0, size=2)
                    bump = ScaledBump(
                        rng.uniform(0.35, 0.65), rng.uniform(0.1, 0.25), delta
                    )
                    f = FunctionSum((PowerFamily(a, b, alpha), bump))
                    cert = certify_fundamental_open(f, alpha, 256)
                    cap = K * cert.epsilon
                    ok = (
                        cert.epsilon <= 4.0 * delta
                        and cert.distance <= cap + 1e-9 * (1.0 + cap)
                    )
                    hits += bool(ok)
        assert combos == 36
        assert hits == combos, f"{hits}/{combos} combinations within K(alpha)*eps"


def test_criterion_04_closed_domain():
    with criterion(4, "closed-domain certificates"):
        for alpha in (0.5, 2.0):
            cert = certify_fundamental_closed(PowerFamily(1.2, 0.4, alpha), alpha, 64)
            assert cert.epsilon <= 1e-10, (alpha, cert.epsilon)
            assert cert.satisfied
        cert = certify_fundamental_closed(EndpointPatch(Constant(1.3), 0.4, -0.2), 0.0, 64)
        assert cert.epsilon <= 1e-10, cert.epsilon
        assert cert.satisfied
        for alpha in (0.5, 2.0, 3.0):
            K = stability_constant_K(alpha)
            T = stability_constant_T(alpha)
            f = FunctionSum((PowerFamily(0.8, -0.6, alpha), ScaledBump(0.5, 0.2, 1e-3)))
            cert = certify_fundamental_closed(f, alpha, 64)
            assert cert.satisfied, alpha
            cap = max(K, T + 1.0) * cert.epsilon
            assert cert.distance <= cap + 1e-9 * (1.0 + cap), (alpha, cert.distance, cap)


def test_criterion_05_hyperstability():
    with criterion(5, "hyperstability and residual blow-up"):
        t0 = time.perf_counter()
        rng = np.random.default_rng(7)
        for alpha in (-0.5, -1.0, -2.0):
            a, b = rng.uniform(-2.0, 2.0, size=2)
            cert = certify_hyperstable(PowerFamily(a, b, alpha), alpha, 128)
            assert cert.satisfied, (alpha, cert.distance, cert.bound)
        noisy = FunctionSum((PowerFamily(1.0, 1.0, -1.0), ScaledBump(0.5, 0.2, 1e-3)))
        cert = certify_hyperstable(noisy, -1.0, 128)
        assert cert.satisfied is False
        margins = [2.0 ** -k for k in range(3, 10)]
        sups = [s for _, s in hyperstability_blowup_probe(noisy, -1.0, margins)]
        assert sups[-1] / sups[0] >= 10.0, f"growth ratio {sups[-1] / sups[0]:.2f}"
        elapsed = time.perf_counter() - t0
        assert elapsed < 10.0, f"hyperstability block took {elapsed:.2f} s"


def test_criterion_06_measure_sequences():
    with criterion(6, "measure sequences track the entropy family"):
        for alpha in (0.5, 2.0, -1.0):
            m = exact_measure(alpha, max_n=6)
            for n in range(2, 7):
                grid = SimplexGrid(n, 60, closed=False)
                sup = 0.0
                for block in grid.iter_blocks():
                    gap = np.abs(m.eval_rows(block) - alpha_entropy(block, alpha))
                    sup = max(sup, float(np.max(gap)))
                assert sup <= 1e-10, (alpha, n, sup)
        for alpha in (0.5, 2.0, -1.0):
            noise = tuple(LevelNoise(k, 1e-3, seed=40 + k) for k in (3, 4, 5))
            m = exact_measure(alpha, max_n=5, perturbations=noise)
            cert = certify_measure_sequence(m, 5, 24)
            assert cert.satisfied, alpha
            for row in cert.rows:
                assert row.distance <= row.bound + 1e-12, (alpha, row)


def test_criterion_07_generating_reduction():
    with criterion(7, "generating-function reduction bound, 20 seeds"):
        alphas = (0.5, 2.0, -1.0, 1.0)
        for seed in range(20):
            alpha = alphas[seed % 4]
            noise = (
                LevelNoise(3, 1e-3, seed=seed),
                LevelNoise(4, 5e-4, seed=100 + seed),
            )
            m = exact_measure(alpha, max_n=4, perturbations=noise)
            gd = derive_generating_defect(m, 16)
            assert gd.within, (alpha, seed, gd.report.sup, gd.bound)


def test_criterion_08_entropy_equation():
    with criterion(8, "ternary entropy-equation certificates"):
        for alpha in (0.5, 2.0):
            cert = certify_entropy_equation(EntropySolution(0.7, alpha), alpha, 12)
            assert cert.satisfied, alpha
            for key in ("eps1", "eps2", "eps3"):
                assert cert.trace[key] <= 1e-10, (alpha, key, cert.trace[key])
        cert = certify_entropy_equation(PhiForm(XLogX(0.8)), 1.0, 12)
        assert cert.satisfied
        for key in ("eps1", "eps2", "eps3"):
            assert cert.trace[key] <= 1e-10, (key, cert.trace[key])
        noisy = Sum3((EntropySolution(0.7, 2.0), Wave3(1e-4, seed=3)))
        cert = certify_entropy_equation(noisy, 2.0, 10)
        assert cert.satisfied
        assert cert.bound == cert.trace["eps1"] + cert.trace["eps2"]
        cert = certify_entropy_equation(Wave3(1e-3, seed=6), 0.0, 10)
        assert isinstance(cert.candidate, Constant3)
        assert cert.satisfied
        assert cert.bound == (
            49.0 * cert.trace["eps1"]
            + 25.0 * cert.trace["eps2"]
            + 8.0 * cert.trace["eps3"]
        )


def test_criterion_09_associativity_bridge():
    with criterion(9, "associativity bridge bounds"):
        UVW = ((0.0, 1.0), (0.0, 1.0), (0.0, 1.0))
        base = PhiOfSum(PowerLaw(1.0, 2.0))
        cert = certify_associativity(base, base, *UVW, resolution=8)
        assert cert.epsilon == 0.0
        assert cert.satisfied
        assert cert.distance_a <= 1e-12 and cert.distance_b <= 1e-12

        wave = Wave2(1e-3, seed=4)

        def noisy(u, v):
            return np.asarray(base(u, v)) + np.asarray(wave(u, v))

        for A, B in ((noisy, base), (base, noisy), (ProductUV(1.0), ProductUV(1.0))):
            cert = certify_associativity(A, B, *UVW, resolution=8)
            assert cert.satisfied
            assert cert.distance_a <= 2.0 * cert.epsilon + 1e-12, cert.distance_a
            assert cert.distance_b <= cert.epsilon + 1e-12, cert.distance_b


def test_criterion_10_modified_entropy_growth():
    with criterion(10, "modified-entropy bounds and coefficient growth"):
        exact = (
            (2.0, ModifiedEntropySolution(0.4, 2.0, XLogX(1.0))),
            (-1.0, ModifiedEntropySolution(0.4, -1.0, PowerLaw(0.3, 1.0))),
            (0.0, ModifiedEntropySolution(0.4, 0.0, XLogX(1.0))),
        )
        for alpha, f in exact:
            cert = certify_modified_entropy(f, alpha, 1.0, 12)
            assert cert.satisfied, alpha
        for alpha, f in exact:
            cert = certify_modified_entropy(Sum3((f, Wave3(1e-5, seed=2))), alpha, 1.0, 12)
            assert cert.satisfied, alpha
        cs = [box_growth_constants(n, 2.0)[0] for n in range(1, 11)]
        assert all(lo < hi for lo, hi in zip(cs, cs[1:])), cs
        ratio = cs[-1] / cs[0]
        assert abs(ratio - 100.0) <= 1e-9 * 100.0, (
            f"c_10(2)/c_1(2) = {ratio!r} (c_1 = {cs[0]!r}, c_10 = {cs[-1]!r}); "
            f"the additive +2 in c_n keeps the ratio below 100"
        )


def test_criterion_11_sum_form_fits():
    with criterion(11, "sum-form minimax and exact-form recovery"):
        for kappa_true, height in ((0.3, 1e-4), (0.8, 5e-5), (-0.5, 1e-4)):
            phi = FunctionSum((PowerLaw(kappa_true, 1.0), ScaledBump(0.5, 0.2, height)))
            cert = certify_sum_form(phi, 3, 64)
            assert abs(cert.trace["kappa"] - kappa_true) <= 1e-4, cert.trace["kappa"]
            assert cert.satisfied  # remainder stays within the measured epsilon
        cert = certify_sum_form_mixed(
            FunctionSum((PowerLaw(0.6, 2.0), PowerLaw(-0.6, 0.5))), 2.0, 0.5, 3, 3, 10
        )
        assert cert.distance <= 1e-8, cert.distance
        assert abs(cert.trace["c"] - 0.6) <= 1e-8
        cert = certify_sum_form_mixed(PowerLog(0.7, 2.0), 2.0, 2.0, 3, 3, 10)
        assert cert.distance <= 1e-8, cert.distance
        assert abs(cert.trace["lam"] - 0.7) <= 1e-8


def test_criterion_12_entropy_values():
    with criterion(12, "entropy values and the degree-one limit"):
        assert abs(shannon_entropy([1 / 3, 1 / 3, 1 / 3]) - math.log2(3.0)) <= 1e-12
        for alpha in (0.5, 1.0, 2.0):
            assert abs(alpha_entropy([0.5, 0.5], alpha) - 1.0) <= 1e-12, alpha
        for n in range(2, 7):
            pts = SimplexGrid(n, 12, closed=False).points
            for delta in (1e-4, -1e-4):
                worst = float(np.max(entropy_limit_gap(pts, delta)))
                assert worst <= 1e-3, (n, delta, worst)


def test_criterion_13_deterministic_reports(tmp_path):
    with criterion(13, "byte-identical reports across worker counts"):
        config = {
            "schema": 1,
            "job": "residual",
            "equation": "fundamental",
            "alpha": 0.5,
            "function": {
                "kind": "sum",
                "terms": [
                    {"kind": "power_family", "a": 2.0, "b": 1.0, "alpha": 0.5},
                    {"kind": "bump", "center": 0.5, "width": 0.2, "height": 1e-3},
                ],
            },
            "grid": {"kind": "triangle", "resolution": 256},
        }
        blobs = []
        for name, jobs in (("serial", 1), ("parallel", 8)):
            out = tmp_path / name
            out.mkdir()
            run(config, out_dir=str(out), jobs=jobs)
            blobs.append((out / "report.json").read_bytes())
        assert blobs[0] == blobs[1]
