"""K- and J-functionals over the supported couples, with certified values.

A couple is identified by a kind -- ``lebesgue`` (circle grid), ``sequence``
(counting measure), ``schatten`` (matrices), ``hardy`` (analytic subspace of
the grid) or ``triangular`` (upper-triangular subspace of matrices) -- plus
an exponent pair.  K_t values come either from the exact rearrangement
formula (exponents (1, inf)) or from the convex solver, which always returns
a primal/dual sandwich so the reported number carries its own error bar.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from . import circle
from .circle import CircleFunction, Rearrangement
from .solver import (
    AnalyticMask,
    SchattenNorm,
    SplitProgram,
    TriangularMask,
    VectorNorm,
    solve_split,
)

__all__ = [
    "CoupleId",
    "CoupleDecomposition",
    "BruteForceResult",
    "KReport",
    "InterpNormResult",
    "kt_closed_form",
    "kt_bruteforce",
    "jt",
    "real_interp_norm",
    "k_closedness_report",
]

_KINDS = ("lebesgue", "sequence", "schatten", "hardy", "triangular")
_SUBSPACE_OF = {"hardy": "lebesgue", "triangular": "schatten"}

MAX_GRID = 64
MAX_MATRIX = 16
MAX_SEQUENCE = 4096


def _parse_exponent(p) -> float:
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "infty", "oo"):
            return float(np.inf)
        return float(s)
    return float(p)


@dataclass(frozen=True)
class CoupleId:
    """A compatible couple: kind plus ordered exponents p0 < p1."""

    kind: str
    p0: float
    p1: float

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown couple kind {self.kind!r}; choose from {_KINDS}")
        object.__setattr__(self, "p0", _parse_exponent(self.p0))
        object.__setattr__(self, "p1", _parse_exponent(self.p1))
        for p in (self.p0, self.p1):
            if p != np.inf and p < 1:
                raise ValueError(f"exponents must lie in [1, inf], got {p}")
        if not self.p0 < self.p1:
            raise ValueError(f"exponents must be ordered p0 < p1, got {self.p0}, {self.p1}")

    @property
    def ambient(self) -> "CoupleId":
        """The couple without the subspace constraint (self if already plain)."""
        amb = _SUBSPACE_OF.get(self.kind)
        return CoupleId(amb, self.p0, self.p1) if amb else self

    @property
    def has_subspace(self) -> bool:
        return self.kind in _SUBSPACE_OF

    @classmethod
    def parse(cls, text: str) -> "CoupleId":
        """Parse CLI-style tokens like 'L1,Linf', 'h1,hinf', 'S1,S2', 'T1,T2'."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2:
            raise ValueError(f"couple must be two comma-separated tokens, got {text!r}")
        prefixes = {"l": "lebesgue", "h": "hardy", "s": "schatten", "t": "triangular", "seq": "sequence"}
        kinds = set()
        exps = []
        for tok in parts:
            t = tok.lower()
            for pre, kind in sorted(prefixes.items(), key=lambda kv: -len(kv[0])):
                if t.startswith(pre):
                    kinds.add(kind)
                    exps.append(_parse_exponent(t[len(pre):]))
                    break
            else:
                raise ValueError(f"cannot parse couple token {tok!r}")
        if len(kinds) != 1:
            raise ValueError(f"couple tokens disagree on the space kind: {text!r}")
        return cls(kinds.pop(), exps[0], exps[1])


def _payload_array(x) -> np.ndarray:
    if isinstance(x, CircleFunction):
        return x.samples
    entries = getattr(x, "entries", None)
    if entries is not None:
        return np.asarray(entries, dtype=np.complex128)
    return np.asarray(x, dtype=np.complex128)


def _wrap_like(x, arr: np.ndarray):
    if isinstance(x, CircleFunction):
        return CircleFunction(arr)
    if hasattr(x, "entries"):
        return type(x)(arr.reshape(np.asarray(x.entries).shape))
    return arr.reshape(np.shape(x))


def couple_norms(couple: CoupleId, x):
    """(norm0, norm1, mask) triple realising the couple on the payload of x."""
    arr = _payload_array(x)
    if couple.kind in ("lebesgue", "hardy"):
        if arr.ndim != 1:
            raise ValueError("circle couples need one-dimensional sample arrays")
        n = arr.size
        circle._check_grid_size(n)
        if n > MAX_GRID:
            raise ValueError(f"grid size {n} above the supported bound {MAX_GRID}")
        w = 1.0 / n
        mask = AnalyticMask(n) if couple.kind == "hardy" else None
        return VectorNorm(couple.p0, w), VectorNorm(couple.p1, w), mask
    if couple.kind == "sequence":
        if arr.ndim != 1:
            raise ValueError("sequence couples need one-dimensional arrays")
        if arr.size > MAX_SEQUENCE:
            raise ValueError(f"sequence length {arr.size} above {MAX_SEQUENCE}")
        return VectorNorm(couple.p0, 1.0), VectorNorm(couple.p1, 1.0), None
    # matrix couples
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix couples need square arrays")
    n = arr.shape[0]
    if n > MAX_MATRIX:
        raise ValueError(f"matrix size {n} above the supported bound {MAX_MATRIX}")
    mask = TriangularMask(n) if couple.kind == "triangular" else None
    return SchattenNorm(couple.p0, n), SchattenNorm(couple.p1, n), mask


@dataclass
class CoupleDecomposition:
    """A certified two-part split x = x0 + x1 for a couple at parameter t."""

    couple: CoupleId
    t: float
    x0: object
    x1: object
    cost: float
    norm0: float
    norm1: float
    membership_residual: float = 0.0
    meta: dict = field(default_factory=dict)

    def reconstruction_residual(self, x) -> float:
        a = _payload_array(x)
        b = _payload_array(self.x0) + _payload_array(self.x1)
        return float(np.abs(a - b).max())

    def validate(self, x, rec_tol: float = 1e-8, mem_tol: float = 1e-6, cost_tol: float = 1e-10):
        """Re-verify the certificate against the original element."""
        scale = max(1.0, float(np.abs(_payload_array(x)).max()))
        rec = self.reconstruction_residual(x)
        if rec > rec_tol * scale:
            raise AssertionError(f"reconstruction residual {rec:.3e} above {rec_tol:.1e}")
        if self.membership_residual > mem_tol * scale:
            raise AssertionError(
                f"membership residual {self.membership_residual:.3e} above {mem_tol:.1e}"
            )
        if abs(self.cost - (self.norm0 + self.t * self.norm1)) > cost_tol * max(1.0, self.cost):
            raise AssertionError("recorded cost is inconsistent with the recorded norms")
        return True


def _membership_residual(couple: CoupleId, arr: np.ndarray) -> float:
    if couple.kind == "hardy":
        c = np.fft.fft(arr) / arr.size
        neg = np.abs(c[circle.frequencies(arr.size) < 0])
        return float(neg.max()) if neg.size else 0.0
    if couple.kind == "triangular":
        n = int(round(np.sqrt(arr.size)))
        low = np.tril(arr.reshape(n, n), -1)
        return float(np.abs(low).max())
    return 0.0


def make_decomposition(couple: CoupleId, t: float, x, a0: np.ndarray, a1: np.ndarray, meta=None):
    """Package a raw split into a decomposition, recomputing all figures."""
    n0, n1, _ = couple_norms(couple, x)
    v0, v1 = n0.value(a0.ravel()), n1.value(a1.ravel())
    mem = max(_membership_residual(couple, a0), _membership_residual(couple, a1))
    return CoupleDecomposition(
        couple=couple,
        t=t,
        x0=_wrap_like(x, a0),
        x1=_wrap_like(x, a1),
        cost=v0 + t * v1,
        norm0=v0,
        norm1=v1,
        membership_residual=mem,
        meta=dict(meta or {}),
    )


# ---------------------------------------------------------------------------
# closed form and brute force


def kt_closed_form(x, t: float, p0: float = 1, p1: float = np.inf, weight: float | None = None) -> float:
    """Exact K_t for (1, inf) couples from the decreasing rearrangement.

    ``x`` may be a Rearrangement, a CircleFunction, or a plain sequence of
    values (taken with counting measure unless ``weight`` is given).  Other
    exponent pairs have no closed form here; use :func:`kt_bruteforce`.
    """
    if not (_parse_exponent(p0) == 1 and _parse_exponent(p1) == np.inf):
        raise NotImplementedError(
            f"closed form only for exponents (1, inf); got ({p0}, {p1}) -- use kt_bruteforce"
        )
    if t < 0:
        raise ValueError("t must be nonnegative")
    if isinstance(x, CircleFunction):
        r = circle.rearrange(x)
    elif isinstance(x, Rearrangement):
        r = x
    else:
        vals = np.sort(np.abs(np.asarray(x, dtype=np.complex128)))[::-1]
        r = Rearrangement(values=vals, weight=1.0 if weight is None else weight)
    return circle._partial_integral(r.values, r.weight, t)


def _warm_start_l1_linf(couple: CoupleId, x, arr, t):
    """Exact optimal split and dual witness for ambient (1, inf) couples."""
    if couple.kind in ("lebesgue", "sequence"):
        weight = 1.0 / arr.size if couple.kind == "lebesgue" else 1.0
        moduli = np.abs(arr)
        order = np.argsort(-moduli, kind="stable")
        steps = t / weight
        full = int(np.floor(steps))
        lam = moduli[order[full]] if full < arr.size else 0.0
        scale = np.where(moduli > 0, np.minimum(moduli, lam) / np.where(moduli > 0, moduli, 1.0), 0.0)
        x1 = arr * scale
        x0 = arr - x1
        mu = np.zeros(arr.size)
        mu[order[: min(full, arr.size)]] = weight
        if full < arr.size:
            mu[order[full]] = t - full * weight
        phases = np.where(moduli > 0, arr / np.where(moduli > 0, moduli, 1.0), 1.0)
        z = phases * mu
        return x0, (z, -z)
    if couple.kind == "schatten":
        n = int(round(np.sqrt(arr.size)))
        m = arr.reshape(n, n)
        u, s, vh = np.linalg.svd(m)
        full = int(np.floor(t))
        lam = s[full] if full < n else 0.0
        s1 = np.minimum(s, lam)
        x1 = (u * s1) @ vh
        x0 = m - x1
        mu = np.zeros(n)
        mu[: min(full, n)] = 1.0
        if full < n:
            mu[full] = t - full
        z = ((u * mu) @ vh).ravel()
        return x0.ravel(), (z, -z)
    return None, None


@dataclass
class BruteForceResult:
    """Solver-certified K_t value: true K lies in [lower, value]."""

    value: float
    lower: float
    gap: float
    decomposition: CoupleDecomposition
    iterations: int
    converged: bool


def kt_bruteforce(
    x,
    couple: CoupleId,
    t: float,
    tol: float = 1e-7,
    max_iter: int = 200_000,
    warm: bool = True,
) -> BruteForceResult:
    """K_t as a convex program over splits, certified by a feasible dual point."""
    arr = _payload_array(x).ravel()
    n0, n1, mask = couple_norms(couple, x)
    prog = SplitProgram(arr, n0, n1, t, subspace=mask)
    warm_primal = warm_dual = None
    if warm and couple.p0 == 1 and couple.p1 == np.inf:
        w0, wd = _warm_start_l1_linf(couple.ambient, x, arr, t)
        if w0 is not None:
            warm_primal = mask.project(w0) if mask is not None else w0
            warm_dual = None if mask is not None else wd
    cert = solve_split(prog, tol=tol, max_iter=max_iter, warm_primal=warm_primal, warm_dual=warm_dual)
    dec = make_decomposition(couple, t, x, cert.x0, cert.x1, meta={
        "gap": cert.gap,
        "iterations": cert.iterations,
        "solver_converged": cert.converged,
    })
    return BruteForceResult(
        value=cert.primal,
        lower=cert.dual,
        gap=cert.gap,
        decomposition=dec,
        iterations=cert.iterations,
        converged=cert.converged,
    )


def jt(x, couple: CoupleId, t: float) -> float:
    """J-functional max(||x||_0, t*||x||_1) for elements of the intersection."""
    if t <= 0:
        raise ValueError("t must be positive")
    arr = _payload_array(x).ravel()
    n0, n1, mask = couple_norms(couple, x)
    if mask is not None:
        res = float(np.abs(mask.antiproject(arr)).max())
        scale = max(1.0, float(np.abs(arr).max()))
        if res > 1e-8 * scale:
            raise ValueError("element lies outside the couple's subspace")
    return max(n0.value(arr), t * n1.value(arr))


# ---------------------------------------------------------------------------
# interpolation norm and K-closedness reports


def default_t_grid(t_min: float = 1e-3, t_max: float = 1e3, points_per_decade: int = 20) -> np.ndarray:
    decades = np.log10(t_max / t_min)
    count = int(round(decades * points_per_decade)) + 1
    return np.logspace(np.log10(t_min), np.log10(t_max), count)


@dataclass
class InterpNormResult:
    value: float
    theta: float
    q: float
    t_grid: np.ndarray
    k_values: np.ndarray
    tail_bound: float


def real_interp_norm(
    x,
    couple: CoupleId,
    theta: float,
    q: float,
    t_grid: np.ndarray | None = None,
    tol: float = 1e-7,
) -> InterpNormResult:
    """Quadrature value of the (theta, q) interpolation norm over a log grid.

    The truncation error outside [t_min, t_max] is bounded through
    K_t <= min(||x||_0, t*||x||_1) and reported, not silently dropped.
    """
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    if q != np.inf and q < 1:
        raise ValueError("q must lie in [1, inf]")
    if t_grid is None:
        t_grid = default_t_grid()
    t_grid = np.asarray(t_grid, dtype=float)
    closed = couple.p0 == 1 and couple.p1 == np.inf and couple.kind in ("lebesgue", "sequence")
    if closed:
        ks = np.array([kt_closed_form(x, t) for t in t_grid])
    elif couple.kind == "schatten" and couple.p0 == 1 and couple.p1 == np.inf:
        sv = np.linalg.svd(_payload_array(x), compute_uv=False)
        ks = np.array([kt_closed_form(sv, t) for t in t_grid])
    else:
        ks = np.array([kt_bruteforce(x, couple, t, tol=tol).value for t in t_grid])
    arr = _payload_array(x).ravel()
    n0, n1, _ = couple_norms(couple, x)
    a0, a1 = n0.value(arr), n1.value(arr)
    t_min, t_max = float(t_grid[0]), float(t_grid[-1])
    if q == np.inf:
        value = float(np.max(t_grid ** (-theta) * ks))
        tail = max(t_min ** (1.0 - theta) * a1, t_max ** (-theta) * a0)
        tail_bound = max(0.0, tail - value)
    else:
        s = np.log(t_grid)
        integrand = (t_grid ** (-theta) * ks) ** q
        integral = float(np.trapezoid(integrand, s))
        tail_low = a1**q * t_min ** ((1.0 - theta) * q) / ((1.0 - theta) * q)
        tail_high = a0**q * t_max ** (-theta * q) / (theta * q)
        value = integral ** (1.0 / q)
        tail_bound = (integral + tail_low + tail_high) ** (1.0 / q) - value
    return InterpNormResult(value, theta, q, t_grid, ks, tail_bound)


@dataclass
class KReportRow:
    t: float
    ambient_k: float
    achieved_cost: float
    ratio: float


@dataclass
class KReport:
    """Per-t comparison of a subspace decomposition against the ambient K."""

    couple: CoupleId
    rows: list
    c_estimate: float
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "ambient_K", "achieved_cost", "ratio"])
        for r in self.rows:
            w.writerow([repr(r.t), repr(r.ambient_k), repr(r.achieved_cost), repr(r.ratio)])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "couple": {"kind": self.couple.kind, "p0": _exp_str(self.couple.p0), "p1": _exp_str(self.couple.p1)},
            "c_estimate": self.c_estimate,
            "rows": [
                {"t": r.t, "ambient_K": r.ambient_k, "achieved_cost": r.achieved_cost, "ratio": r.ratio}
                for r in self.rows
            ],
            "meta": self.meta,
        }


def _exp_str(p: float) -> str:
    return "inf" if p == np.inf else (str(int(p)) if float(p).is_integer() else str(p))


def ambient_k_lower(x, couple: CoupleId, t: float, tol: float = 1e-7) -> float:
    """A certified value of the ambient K_t (exact where a closed form exists,
    otherwise the solver's feasible dual lower bound)."""
    amb = couple.ambient
    if amb.p0 == 1 and amb.p1 == np.inf:
        if amb.kind in ("lebesgue", "sequence"):
            return kt_closed_form(x, t)
        if amb.kind == "schatten":
            sv = np.linalg.svd(_payload_array(x), compute_uv=False)
            return kt_closed_form(sv, t)
    return kt_bruteforce(x, amb, t, tol=tol).lower


def k_closedness_report(
    f,
    couple: CoupleId,
    decomposer,
    t_grid: np.ndarray | None = None,
    tol: float = 1e-7,
) -> KReport:
    """Run a decomposer across a t-grid and compare with the ambient K_t.

    ``decomposer(f, t)`` must return a :class:`CoupleDecomposition`.  The
    ratio uses a certified ambient value (exact or dual lower bound), so
    ratio >= 1 - 1e-9 holds whenever the certificate is genuine.
    """
    if not couple.has_subspace:
        raise ValueError("K-closedness reports need a subspace couple")
    if t_grid is None:
        t_grid = default_t_grid(1e-2, 1e2, 5)
    arr = _payload_array(f)
    zero = not np.any(arr)
    rows = []
    for t in np.asarray(t_grid, dtype=float):
        if zero:
            rows.append(KReportRow(float(t), 0.0, 0.0, 1.0))
            continue
        dec = decomposer(f, float(t))
        amb = ambient_k_lower(f, couple, float(t), tol=tol)
        ratio = dec.cost / amb if amb > 0 else 1.0
        rows.append(KReportRow(float(t), float(amb), float(dec.cost), float(ratio)))
    c_est = max((r.ratio for r in rows), default=1.0)
    return KReport(couple=couple, rows=rows, c_estimate=c_est)


def report_to_file(report: KReport, path_csv=None, path_json=None):
    if path_csv is not None:
        with open(path_csv, "w") as fh:
            fh.write(report.to_csv())
    if path_json is not None:
        with open(path_json, "w") as fh:
            json.dump(report.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")
