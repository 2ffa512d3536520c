"""Acceptance gate: ten end-to-end criteria with fixed tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion with its elapsed time.  Every criterion also asserts,
so a silent run still fails loudly when a bar is missed.
"""

import time

import numpy as np

from kclose import circle, hardy, schatten
from kclose.circle import CircleFunction, from_coeffs
from kclose.embed import kq_embed, kq_embed_matrix
from kclose.factorize import outer_function
from kclose.kfunctional import CoupleId, kt_bruteforce, kt_closed_form
from kclose.schatten import (
    MatrixOperator,
    decompose_t1_tq,
    dist_triangular_inf,
    dist_triangular_inf_oracle,
    kt_schatten,
    schatten_norm,
    simultaneous_triangular_approx,
    singular_values,
)


def _report(idx, name, ok, t0, detail=""):
    status = "PASS" if ok else "FAIL"
    extra = f"  ({detail})" if detail else ""
    print(f"[{idx:2d}/10] {name:<34} {status} {time.perf_counter() - t0:7.2f}s{extra}")


def rand_matrix(n, seed):
    rng = np.random.default_rng(seed)
    return MatrixOperator(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def rand_triangular(n, seed):
    rng = np.random.default_rng(seed)
    g = np.triu(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    shift = 1.0 + np.sqrt(n)
    while True:
        cand = g + shift * np.eye(n)
        s = np.linalg.svd(cand, compute_uv=False)
        if s[-1] > 1e-3 * s[0]:
            return MatrixOperator(cand)
        shift *= 2.0


def rand_analytic(n, seed):
    rng = np.random.default_rng(seed)
    deg = n // 4
    c = np.zeros(n, dtype=np.complex128)
    c[: deg + 1] = (rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)) / np.maximum(
        1, np.arange(deg + 1)
    )
    return from_coeffs(c)


def rand_trig(n, seed):
    rng = np.random.default_rng(seed)
    deg = n // 4
    c = np.zeros(n, dtype=np.complex128)
    for j, k in enumerate(circle.frequencies(n)):
        if abs(int(k)) <= deg:
            c[j] = (rng.standard_normal() + 1j * rng.standard_normal()) / max(1, abs(int(k)))
    return from_coeffs(c)


def rand_weight(n, seed):
    rng = np.random.default_rng(seed)
    u = np.zeros(n)
    theta = 2 * np.pi * np.arange(n) / n
    for j in range(1, 9):
        u += 0.5 / j * (
            rng.standard_normal() * np.cos(j * theta) + rng.standard_normal() * np.sin(j * theta)
        )
    return np.exp(u)


def test_01_endpoint_matrix_identity():
    t0 = time.perf_counter()
    worst_closed, worst_brute = 0.0, 0.0
    sizes = (2, 4, 6)
    for i in range(50):
        x = rand_matrix(sizes[i % 3], 1000 + i)
        sv = singular_values(x).astype(np.complex128)
        for t in (0.4, 1.0, 2.0, 5.0):
            a = kt_schatten(x, 1, np.inf, t)
            b = kt_closed_form(sv, t, weight=1.0)
            c = kt_bruteforce(x, CoupleId("schatten", 1, np.inf), t, tol=1e-8)
            worst_closed = max(worst_closed, abs(a - b))
            worst_brute = max(worst_brute, abs(a - c.value))
    elapsed = time.perf_counter() - t0
    ok = worst_closed <= 1e-8 and worst_brute <= 1e-5 and elapsed <= 120.0
    _report(1, "endpoint matrix identity", ok, t0,
            f"closed dev {worst_closed:.1e}, oracle dev {worst_brute:.1e}")
    assert worst_closed <= 1e-8
    assert worst_brute <= 1e-5
    assert elapsed <= 120.0


def test_02_triangular_factorization():
    t0 = time.perf_counter()
    worst_tri, worst_rec, worst_norm = 0.0, 0.0, 0.0
    for i in range(100):
        n = 3 + i % 4  # sizes 3..6
        x = rand_triangular(n, 2000 + i)
        scale = float(np.abs(x.entries).max())
        for p, r, q in ((1.0, 2.0, 2.0), (2.0, 3.0, 6.0), (2.0, 6.0, 3.0)):
            fac = schatten.triangular_factor(x, p, r, q)
            a, b = fac.a.entries, fac.b.entries
            worst_tri = max(
                worst_tri,
                float(np.abs(np.tril(a, -1)).max(initial=0.0)) / scale,
                float(np.abs(np.tril(b, -1)).max(initial=0.0)) / scale,
            )
            worst_rec = max(worst_rec, float(np.abs(a @ b - x.entries).max()) / scale)
            target = schatten_norm(x, p)
            worst_norm = max(worst_norm, abs(fac.norm_a * fac.norm_b - target) / target)
    elapsed = time.perf_counter() - t0
    ok = worst_tri <= 1e-10 and worst_rec <= 1e-8 and worst_norm <= 1e-8 and elapsed <= 60.0
    _report(2, "triangular factorization", ok, t0,
            f"tri {worst_tri:.1e}, rec {worst_rec:.1e}, norm {worst_norm:.1e}")
    assert worst_tri <= 1e-10
    assert worst_rec <= 1e-8
    assert worst_norm <= 1e-8
    assert elapsed <= 60.0


def test_03_rearrangement_k_formula():
    t0 = time.perf_counter()
    worst = 0.0
    couple = CoupleId("lebesgue", 1, np.inf)
    for n in (16, 32):
        for i in range(30):
            rng = np.random.default_rng(3000 + 100 * n + i)
            f = CircleFunction(rng.standard_normal(n) + 1j * rng.standard_normal(n))
            for t in (0.05, 0.2, 0.7, 1.0, 3.0):
                closed = kt_closed_form(f, t)
                brute = kt_bruteforce(f, couple, t, tol=1e-8)
                worst = max(worst, abs(closed - brute.value))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed <= 300.0
    _report(3, "rearrangement closed form", ok, t0, f"max dev {worst:.1e}")
    assert worst <= 1e-6
    assert elapsed <= 300.0


def test_04_outer_factorization():
    t0 = time.perf_counter()
    n = 256
    worst_mod, worst_anal, worst_mult = 0.0, 0.0, 0.0
    prev = None
    for i in range(30):
        w = rand_weight(n, 4000 + i)
        o = outer_function(w)
        worst_mod = max(worst_mod, float(np.abs(np.abs(o.boundary.samples) - w).max() / w.max()))
        # negative-frequency content of the completed logarithm
        logo = np.log(o.boundary.samples.astype(np.complex128))
        co = np.fft.fft(logo) / n
        worst_anal = max(worst_anal, float(np.abs(co[circle.frequencies(n) < 0]).max()))
        if prev is not None:
            o12 = outer_function(prev * w)
            prod = outer_function(prev).boundary.samples * o.boundary.samples
            worst_mult = max(
                worst_mult,
                float(np.abs(o12.boundary.samples - prod).max() / np.abs(prod).max()),
            )
        prev = w
    elapsed = time.perf_counter() - t0
    ok = worst_mod <= 1e-6 and worst_anal <= 1e-6 and worst_mult <= 1e-6 and elapsed <= 30.0
    _report(4, "outer factorization", ok, t0,
            f"mod {worst_mod:.1e}, log-anal {worst_anal:.1e}, mult {worst_mult:.1e}")
    assert worst_mod <= 1e-6
    assert worst_anal <= 1e-6
    assert worst_mult <= 1e-6
    assert elapsed <= 30.0


def test_05_analytic_endpoint_splitting():
    t0 = time.perf_counter()
    n = 32
    t_grid = np.logspace(-2, 2, 12)
    worst_ratio, best_ratio = 0.0, np.inf
    for i in range(30):
        f = rand_analytic(n, 5000 + i)
        scale = float(np.abs(f.samples).max())
        for t in t_grid:
            dec = hardy.decompose_h1_hinf(f, float(t), backend="oracle", tol=1e-7)
            amb = kt_closed_form(f, float(t))
            ratio = dec.cost / amb
            worst_ratio = max(worst_ratio, ratio)
            best_ratio = min(best_ratio, ratio)
            rec = np.abs(dec.x0.samples + dec.x1.samples - f.samples).max()
            assert rec <= 1e-8 * max(1.0, scale)
            assert circle.analyticity_residual(dec.x0) <= 1e-6 * max(1.0, scale)
    elapsed = time.perf_counter() - t0
    ok = best_ratio >= 1.0 - 1e-9 and worst_ratio <= 20.0 and elapsed <= 600.0
    _report(5, "endpoint analytic splitting", ok, t0,
            f"ratio range [{best_ratio:.6f}, {worst_ratio:.6f}]")
    assert best_ratio >= 1.0 - 1e-9
    assert worst_ratio <= 20.0
    assert elapsed <= 600.0


def test_06_simultaneous_approximation():
    t0 = time.perf_counter()
    f = CircleFunction.harmonic(-1, 32)
    res_f = hardy.simultaneous_approx(f, tol=1e-6)
    e21 = np.zeros((2, 2)); e21[1, 0] = 1.0
    res_m = simultaneous_triangular_approx(MatrixOperator(e21), tol=1e-6)
    worst = 1.0
    for i in range(30):
        if i % 2 == 0:
            r = hardy.simultaneous_approx(rand_trig(16, 6000 + i), tol=1e-5)
            assert circle.analyticity_residual(r.h) <= 1e-8 * max(
                1.0, float(np.abs(r.h.samples).max())
            )
        else:
            r = simultaneous_triangular_approx(rand_matrix(3, 6000 + i), tol=1e-5)
            assert float(np.abs(np.tril(r.xhat.entries, -1)).max(initial=0.0)) == 0.0
        assert r.gap <= 1e-4 * max(1.0, r.k_achieved) + 1e-9
        worst = max(worst, r.k_achieved)
    elapsed = time.perf_counter() - t0
    ok = (
        res_f.k_achieved <= 1.0 + 1e-3
        and res_m.k_achieved <= 1.0 + 1e-3
        and worst <= 20.0
        and elapsed <= 600.0
    )
    _report(6, "simultaneous approximation", ok, t0,
            f"tight {res_f.k_achieved:.6f}/{res_m.k_achieved:.6f}, worst random {worst:.4f}")
    assert res_f.k_achieved <= 1.0 + 1e-3
    assert res_m.k_achieved <= 1.0 + 1e-3
    assert worst <= 20.0
    assert elapsed <= 600.0


def test_07_corner_distance_identity():
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(50):
        n = 2 + i % 4  # sizes 2..5
        x = rand_matrix(n, 7000 + i)
        corner = dist_triangular_inf(x)
        oracle, cert = dist_triangular_inf_oracle(x, tol=1e-8)
        worst = max(worst, abs(corner - oracle) / max(1.0, corner))
        assert cert.dual <= corner + 1e-6
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed <= 120.0
    _report(7, "corner distance identity", ok, t0, f"max dev {worst:.1e}")
    assert worst <= 1e-6
    assert elapsed <= 120.0


def test_08_weak_type_embeddings():
    t0 = time.perf_counter()
    flat = kq_embed(CircleFunction.constant(1.0, 32), 2.0, n_max=10_000)
    rng = np.random.default_rng(8000)
    f = CircleFunction(rng.standard_normal(32) + 1j * rng.standard_normal(32))
    residuals = [kq_embed(f, 2.0, n_max=m).residual for m in (1000, 2000, 4000, 8000)]
    mono_circle = all(b <= a + 1e-12 for a, b in zip(residuals, residuals[1:]))
    mat = [kq_embed_matrix(np.diag([3.0, 1.0]), 2.0, n_max=m).residual
           for m in (1000, 10_000, 100_000)]
    mono_matrix = all(b <= a + 1e-12 for a, b in zip(mat, mat[1:]))
    elapsed = time.perf_counter() - t0
    ok = flat.residual < 1e-4 and mono_circle and mono_matrix and elapsed <= 60.0
    _report(8, "weak-type embeddings", ok, t0,
            f"flat residual {flat.residual:.1e}, monotone {mono_circle}/{mono_matrix}")
    assert flat.residual < 1e-4
    assert mono_circle
    assert mono_matrix
    assert elapsed <= 60.0


def test_09_triangular_couple_splitting():
    t0 = time.perf_counter()
    t_grid = np.logspace(-1.5, 1.5, 8)
    worst_ratio = 0.0
    for i in range(20):
        x = rand_triangular(6, 9000 + i)
        sv = singular_values(x).astype(np.complex128)
        scale = max(1.0, float(np.abs(x.entries).max()))
        for t in t_grid:
            dec = decompose_t1_tq(x, 2.0, float(t))
            dec.validate(x)
            amb = kt_bruteforce(sv, CoupleId("sequence", 1, 2), float(t), tol=1e-9)
            worst_ratio = max(worst_ratio, dec.cost / amb.lower)
            assert dec.meta["expansion_residual"] <= 1e-6 * scale
    elapsed = time.perf_counter() - t0
    ok = worst_ratio <= 20.0 and elapsed <= 600.0
    _report(9, "triangular couple splitting", ok, t0, f"max ratio {worst_ratio:.6f}")
    assert worst_ratio <= 20.0
    assert elapsed <= 600.0


def test_10_cross_term_product_bound():
    t0 = time.perf_counter()
    worst_excess = -np.inf
    runs = 0
    for q in (1.5, 2.0, 4.0):
        for i in range(4):
            f = rand_analytic(32, 10_000 + i)
            for t in (0.3, 1.0, 3.0):
                dec = hardy.decompose_h1_hq(f, q, float(t))
                excess = dec.meta["cross_norm_p"] - dec.meta["holder_bound"]
                worst_excess = max(worst_excess, excess)
                runs += 1
    elapsed = time.perf_counter() - t0
    ok = worst_excess <= 1e-9
    _report(10, "cross-term product bound", ok, t0,
            f"{runs} runs, worst excess {worst_excess:.1e}")
    assert worst_excess <= 1e-9
