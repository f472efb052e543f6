"""Ball and heat-ball mean values, derivative-formula evaluators, MVI checkers.

The ball average is phi(r) = avg_{B_r(x)} u; its derivative equals the
weighted Laplacian average (1/|B_r|) int (r^2 - |x-y|^2)/(2r) Delta u.
The heat-ball average is phi(r) = (1/(4 r^n)) int_{E(x,t;r)} u |x-y|^2/(t-s)^2;
its derivative equals (n/r^{n+1}) int_{E(r)} Hu log(r^n Phi_n).  Both
derivative identities are evaluated by Monte Carlo in scale-free unit
coordinates, and the finite-difference cross-checks reuse common random
numbers so the difference quotient carries an honest per-sample error.

MVI checkers sample admissible pairs (a, r): a uniform in the domain and
r uniform in (0, R(a)] where R is the radius function of the ball system
on the domain, then test the mean value inequality with a 3-SE guard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    Box,
    EuclideanBall,
    BallSystem,
    Heatball,
    ModifiedHeatball,
    RadiusFunction,
    build_radius_function,
    heatball_shrink,
    euclidean_shrink,
    unit_ball_volume,
)
from .quadrature import QuadResult

__all__ = [
    "SMAX",
    "ball_average",
    "ball_average_fd",
    "deriv1_rhs",
    "heatball_average",
    "heatball_average_fd",
    "deriv2_rhs",
    "modified_heatball_average",
    "AverageFamily",
    "MviCheckReport",
    "pmvi_constant",
    "concave_mvi_constant",
    "sample_admissible",
    "check_mvi",
    "check_pmvi",
    "check_concave_mvi",
    "check_modified_heatball_mvi",
    "claim_laplace_drop",
    "claim_heat_drop",
    "dense_box_sup",
]

SMAX = 1.0 / (4.0 * math.pi)

_BATCH = 65536


def _require_box_inside(inner: Box, outer: Box | None, what: str) -> None:
    if outer is None:
        return
    lo_ok = all(a >= b for a, b in zip(inner.lo, outer.lo))
    hi_ok = all(a <= b for a, b in zip(inner.hi, outer.hi))
    if not (lo_ok and hi_ok):
        raise ValueError(f"{what} escapes the field's domain")


def _field_fn(u):
    return u.fn if hasattr(u, "fn") else u


def _moments(vals: np.ndarray) -> tuple[int, float, float]:
    n = len(vals)
    mean = float(np.mean(vals)) if n else 0.0
    m2 = float(np.sum((vals - mean) ** 2)) if n else 0.0
    return n, mean, m2


def _merge(parts) -> tuple[float, float, int]:
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        if nb == 0:
            continue
        delta = mb - mean
        tot = n + nb
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    var = m2 / (n - 1) if n > 1 else 0.0
    return mean, math.sqrt(max(var, 0.0) / n) if n else 0.0, n


def _batched(budget: int):
    full, rem = divmod(budget, _BATCH)
    return [_BATCH] * full + ([rem] if rem else [])


def _unit_ball_points(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((count, d))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    rad = rng.random(count) ** (1.0 / d)
    return rad[:, None] * z


def ball_average(u, x, r: float, budget: int = 100_000,
                 seed: int = 0) -> QuadResult:
    """avg_{B_r(x)} u by direct uniform sampling of the ball."""
    x = np.asarray(x, dtype=float)
    d = len(x)
    if r <= 0:
        raise ValueError("radius must be positive")
    dom = getattr(u, "domain", None)
    _require_box_inside(Box(tuple(x - r), tuple(x + r)), dom, "ball")
    fn = _field_fn(u)
    plan = _batched(budget)
    streams = np.random.SeedSequence(seed).spawn(len(plan))
    parts = []
    for st, count in zip(streams, plan):
        rng = np.random.default_rng(st)
        pts = x + r * _unit_ball_points(d, count, rng)
        parts.append(_moments(np.asarray(fn(pts), dtype=float)))
    mean, se, n = _merge(parts)
    return QuadResult(value=mean, std_error=se, samples=n, method="mc-ball")


def ball_average_fd(u, x, r: float, h: float | None = None,
                    budget: int = 100_000, seed: int = 0) -> QuadResult:
    """Centered difference quotient of the ball average in r.

    Both radii reuse the same unit samples (common random numbers), so the
    reported standard error is that of the per-sample difference quotient.
    """
    x = np.asarray(x, dtype=float)
    d = len(x)
    if h is None:
        h = 1e-3 * r
    if not 0 < h < r:
        raise ValueError("need 0 < h < r")
    dom = getattr(u, "domain", None)
    _require_box_inside(Box(tuple(x - (r + h)), tuple(x + (r + h))), dom, "ball")
    fn = _field_fn(u)
    plan = _batched(budget)
    streams = np.random.SeedSequence(seed).spawn(len(plan))
    parts = []
    for st, count in zip(streams, plan):
        rng = np.random.default_rng(st)
        z = _unit_ball_points(d, count, rng)
        hi = np.asarray(fn(x + (r + h) * z), dtype=float)
        lo = np.asarray(fn(x + (r - h) * z), dtype=float)
        parts.append(_moments((hi - lo) / (2.0 * h)))
    mean, se, n = _merge(parts)
    return QuadResult(value=mean, std_error=se, samples=n, method="mc-ball-fd")


def deriv1_rhs(u, x, r: float, budget: int = 100_000,
               seed: int = 0) -> QuadResult:
    """(1/|B_r|) int_{B_r(x)} (r^2 - |x-y|^2)/(2r) Delta u(y) dy.

    Uses the field's exact Hessian trace.  Equals d/dr of the ball average.
    """
    x = np.asarray(x, dtype=float)
    d = len(x)
    if r <= 0:
        raise ValueError("radius must be positive")
    dom = getattr(u, "domain", None)
    _require_box_inside(Box(tuple(x - r), tuple(x + r)), dom, "ball")
    if getattr(u, "hess_fn", None) is None:
        raise ValueError("field must carry an exact Hessian")
    plan = _batched(budget)
    streams = np.random.SeedSequence(seed).spawn(len(plan))
    parts = []
    for st, count in zip(streams, plan):
        rng = np.random.default_rng(st)
        z = _unit_ball_points(d, count, rng)
        pts = x + r * z
        lap = np.trace(u.hess_fn(pts), axis1=1, axis2=2)
        weight = r * (1.0 - np.sum(z * z, axis=1)) / 2.0
        parts.append(_moments(weight * lap))
    mean, se, n = _merge(parts)
    return QuadResult(value=mean, std_error=se, samples=n, method="mc-ball")


def _slice_samples(n: int, kernel_dim: int, count: int,
                   rng: np.random.Generator):
    """Importance samples of the unit heat ball with kernel dimension D.

    s = u^2/(4 pi) (density 1/(2 sqrt(s_max s))), y uniform in the slice
    ball of radius sqrt(2 D s log(1/(4 pi s))).  Returns (y, s, w) with
    w the importance weight such that int_{E(1)} g = E[g(y, s) w].
    """
    uu = np.maximum(rng.random(count), 1e-16)
    s = SMAX * uu * uu
    bigl = -2.0 * np.log(uu)
    rho = np.sqrt(2.0 * kernel_dim * s * bigl)
    y = rho[:, None] * _unit_ball_points(n, count, rng)
    w = unit_ball_volume(n) * rho**n * 2.0 * np.sqrt(SMAX * s)
    return y, s, w


def _check_heatball_domain(u, center, r: float, m: int | None) -> None:
    dom = getattr(u, "domain", None)
    if dom is None:
        return
    if m is None:
        hb = Heatball(tuple(center), r)
    else:
        hb = ModifiedHeatball(tuple(center), r, m)
    _require_box_inside(hb.bounding_box(), dom, "heat ball")


def heatball_average(u, center, r: float, budget: int = 100_000,
                     seed: int = 0) -> QuadResult:
    """(1/(4 r^n)) int_{E(center; r)} u(y, s) |x-y|^2/(t-s)^2 dy ds.

    Evaluated in unit coordinates with the slice importance sampler, which
    keeps the kernel weight bounded near s -> 0 in every dimension.
    """
    center = np.asarray(center, dtype=float)
    n = len(center) - 1
    if r <= 0:
        raise ValueError("radius must be positive")
    _check_heatball_domain(u, center, r, None)
    fn = _field_fn(u)
    plan = _batched(budget)
    streams = np.random.SeedSequence(seed).spawn(len(plan))
    parts = []
    for st, count in zip(streams, plan):
        rng = np.random.default_rng(st)
        y, s, w = _slice_samples(n, n, count, rng)
        pts = np.empty((count, n + 1))
        pts[:, :n] = center[:n] - r * y
        pts[:, n] = center[n] - r * r * s
        kern = np.sum(y * y, axis=1) / (s * s)
        vals = 0.25 * np.asarray(fn(pts), dtype=float) * kern * w
        parts.append(_moments(vals))
    mean, se, nn = _merge(parts)
    return QuadResult(value=mean, std_error=se, samples=nn, method="mc-slice-importance")


def heatball_average_fd(u, center, r: float, h: float | None = None,
                        budget: int = 100_000, seed: int = 0) -> QuadResult:
    """Centered difference quotient of the heat-ball average in r.

    Shares (y, s, w) samples between the two radii (common random numbers).
    """
    center = np.asarray(center, dtype=float)
    n = len(center) - 1
    if h is None:
        h = 1e-3 * r
    if not 0 < h < r:
        raise ValueError("need 0 < h < r")
    _check_heatball_domain(u, center, r + h, None)
    fn = _field_fn(u)
    plan = _batched(budget)
    streams = np.random.SeedSequence(seed).spawn(len(plan))
    parts = []
    for st, count in zip(streams, plan):
        rng = np.random.default_rng(st)
        y, s, w = _slice_samples(n, n, count, rng)
        kern = np.sum(y * y, axis=1) / (s * s)
        vals = None
        for sign in (1.0, -1.0):
            rr = r + sign * h
            pts = np.empty((count, n + 1))
            pts[:, :n] = center[:n] - rr * y
            pts[:, n] = center[n] - rr * rr * s
            term = 0.25 * np.asarray(fn(pts), dtype=float) * kern * w
            vals = term if vals is None else vals - term
        parts.append(_moments(vals / (2.0 * h)))
    mean, se, nn = _merge(parts)
    return QuadResult(value=mean, std_error=se, samples=nn,
                      method="mc-slice-importance-fd")


def deriv2_rhs(u, center, r: float, budget: int = 100_000,
               seed: int = 0) -> QuadResult:
    """(n/r^{n+1}) int_{E(center; r)} Hu log(r^n Phi_n(x-y, t-s)) dy ds.

    In unit coordinates the log factor is log Phi_n(y, s) >= 0 on E(1).
    Uses the field's exact spatial Hessian and time derivative.
    """
    center = np.asarray(center, dtype=float)
    n = len(center) - 1
    if r <= 0:
        raise ValueError("radius must be positive")
    _check_heatball_domain(u, center, r, None)
    if getattr(u, "hess_fn", None) is None or getattr(u, "grad_fn", None) is None:
        raise ValueError("field must carry exact derivatives")
    plan = _batched(budget)
    streams = np.random.SeedSequence(seed).spawn(len(plan))
    parts = []
    for st, count in zip(streams, plan):
        rng = np.random.default_rng(st)
        y, s, w = _slice_samples(n, n, count, rng)
        pts = np.empty((count, n + 1))
        pts[:, :n] = center[:n] - r * y
        pts[:, n] = center[n] - r * r * s
        hess = u.hess_fn(pts)
        grad = u.grad_fn(pts)
        hu = np.trace(hess[:, :n, :n], axis1=1, axis2=2) - grad[:, n]
        psi = (-0.5 * n * np.log(4.0 * math.pi * s)
               - np.sum(y * y, axis=1) / (4.0 * s))
        parts.append(_moments(n * r * hu * psi * w))
    mean, se, nn = _merge(parts)
    return QuadResult(value=mean, std_error=se, samples=nn,
                      method="mc-slice-importance")


def modified_heatball_average(u, center, r: float, m: int,
                              budget: int = 100_000, seed: int = 0) -> QuadResult:
    """(1/r^{n+2}) int_{E_m(center; r)} u(y, s) kappa_{m,n} dy ds.

    kappa is evaluated in unit coordinates; the average of u = 1 is exactly
    1 (the kernel integrates to 1 over the unit modified heat ball).
    """
    from .constants import kappa

    center = np.asarray(center, dtype=float)
    n = len(center) - 1
    if r <= 0:
        raise ValueError("radius must be positive")
    if m < 3:
        raise ValueError("m must be at least 3")
    _check_heatball_domain(u, center, r, m)
    fn = _field_fn(u)
    plan = _batched(budget)
    streams = np.random.SeedSequence(seed).spawn(len(plan))
    parts = []
    for st, count in zip(streams, plan):
        rng = np.random.default_rng(st)
        y, s, w = _slice_samples(n, m + n, count, rng)
        pts = np.empty((count, n + 1))
        pts[:, :n] = center[:n] - r * y
        pts[:, n] = center[n] - r * r * s
        k = kappa(m, n, y, s)
        vals = np.asarray(fn(pts), dtype=float) * k * w
        parts.append(_moments(vals))
    mean, se, nn = _merge(parts)
    return QuadResult(value=mean, std_error=se, samples=nn,
                      method="mc-slice-importance")


@dataclass
class AverageFamily:
    """phi(r) for a fixed field and center; phi(0) = u(center) exactly."""

    kind: str
    u: object
    center: tuple[float, ...]
    max_radius: float
    m: int | None = None
    budget: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("ball", "heatball", "modified-heatball"):
            raise ValueError(f"unknown average family kind {self.kind!r}")
        if self.max_radius <= 0:
            raise ValueError("max radius must be positive")

    def value(self, r: float) -> QuadResult:
        if not 0 <= r <= self.max_radius:
            raise ValueError("radius outside [0, R]")
        if r == 0:
            fn = _field_fn(self.u)
            v = float(np.asarray(fn(np.atleast_2d(np.asarray(self.center))))[0])
            return QuadResult(value=v, std_error=0.0, samples=1, method="exact")
        if self.kind == "ball":
            return ball_average(self.u, self.center, r, self.budget, self.seed)
        if self.kind == "heatball":
            return heatball_average(self.u, self.center, r, self.budget, self.seed)
        return modified_heatball_average(self.u, self.center, r, self.m,
                                         self.budget, self.seed)

    __call__ = value


@dataclass(frozen=True)
class MviCheckReport:
    kind: str
    constant: float
    trials: int
    violations: int
    worst_margin: float
    seed: int

    def as_row(self) -> dict:
        return {"kind": self.kind, "constant": self.constant,
                "trials": self.trials, "violations": self.violations,
                "worst_margin": self.worst_margin, "seed": self.seed}


def pmvi_constant(C: float, sys: BallSystem, R0: float, K: float,
                  p: float) -> float:
    """C~_p = 2 R0^{-A} (2 K^A)^{(1-p)/p} C with A the system degree."""
    if not 0.0 < R0 <= 1.0:
        raise ValueError("R0 must lie in (0, 1]")
    if K < 1.0:
        raise ValueError("K must be at least 1")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    A = sys.degree
    return 2.0 * R0 ** (-A) * (2.0 * K**A) ** ((1.0 - p) / p) * C


def concave_mvi_constant(C: float, sys: BallSystem, R0: float, K: float,
                         c_phi: float) -> float:
    """C_phi = 2 R0^{-A} c_phi^m C with m = ceil(log2(2 K^A)).

    Implementation-chosen closed form following the doubling proof sketch;
    reported as such wherever it is printed.
    """
    if c_phi < 1.0:
        raise ValueError("c_phi must be at least 1")
    A = sys.degree
    m = math.ceil(math.log2(2.0 * K**A))
    return 2.0 * R0 ** (-A) * c_phi**m * C


def _radius_function_values(sys: BallSystem, domain, a: np.ndarray) -> np.ndarray:
    """Vectorized radius function R(a) (sup by closed form where possible)."""
    divisor = 2.0 if all(v >= 1.0 for v in sys.lambdas) else 4.0
    lam = np.asarray(sys.lambdas)
    if isinstance(domain, Box):
        bb = domain
        ybar = np.maximum(np.abs(np.asarray(bb.lo)), np.abs(np.asarray(bb.hi)))
        margins = np.minimum(a - np.asarray(bb.lo), np.asarray(bb.hi) - a)
        margins = np.maximum(margins, 0.0)
        per_axis = (margins / ybar) ** (1.0 / lam)
        return np.min(per_axis, axis=1) / divisor
    rf = build_radius_function(sys, domain)
    return np.array([rf(ai) for ai in a])


def sample_admissible(sys: BallSystem, domain, trials: int,
                      rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """(a, r) pairs: a uniform in the domain, r uniform in (0, R(a)]."""
    d = sys.dim
    if hasattr(domain, "sample"):
        a = domain.sample(trials, rng)
    else:
        bb = domain.bounding_box()
        a = np.empty((trials, d))
        got = 0
        while got < trials:
            cand = bb.sample(max(trials, 1024), rng)
            keep = np.atleast_1d(domain.contains(cand))
            cand = cand[keep]
            take = min(len(cand), trials - got)
            a[got:got + take] = cand[:take]
            got += take
    rmax = _radius_function_values(sys, domain, a)
    if np.all(rmax <= 0):
        raise RuntimeError("no admissible (a, r) pair found")
    r = rng.random(trials) * rmax
    bad = r <= 0
    if np.any(bad):
        r[bad] = rmax[bad] * 0.5
        still = r <= 0
        if np.any(still):
            good = r[~still]
            if len(good) == 0:
                raise RuntimeError("no admissible (a, r) pair found")
            r[still] = float(np.min(good))
    return a, r


_ESCALATION = (64, 2048)


def _mvi_harness(kind: str, values_of, sys: BallSystem, constant: float,
                 trials: int, seed: int, domain, samples: int) -> MviCheckReport:
    """Shared MVI test loop.

    values_of maps raw field values to the tested transform (identity,
    p-th power, concave map).  A trial is a violation when
    lhs > rhs + 3 SE; trials whose ball sample mean is exactly zero while
    lhs > 0 are re-run at larger sample counts before being scored (thin
    positive slivers are otherwise invisible to small samples).
    """
    if domain is None:
        raise ValueError("no domain: pass one or use a field with a domain box")
    v1 = sys.unit_volume
    if v1 is None:
        raise ValueError("ball system needs a unit ball with known volume")
    ss = np.random.SeedSequence(seed)
    s_pairs, s_unit, s_esc = ss.spawn(3)
    rng = np.random.default_rng(s_pairs)
    a, r = sample_admissible(sys, domain, trials, rng)
    lam = np.asarray(sys.lambdas)
    unit_rng = np.random.default_rng(s_unit)
    unit = sys.unit_ball.sample(samples, unit_rng)

    lhs = values_of(np.asarray(a))
    means = np.empty(trials)
    ses = np.empty(trials)
    chunk = max(1, (4 << 20) // samples)
    for start in range(0, trials, chunk):
        stop = min(start + chunk, trials)
        scales = r[start:stop, None, None] ** lam[None, None, :]
        pts = a[start:stop, None, :] + scales * unit[None, :, :]
        flat = values_of(pts.reshape(-1, sys.dim)).reshape(stop - start, samples)
        means[start:stop] = np.mean(flat, axis=1)
        ses[start:stop] = np.std(flat, axis=1, ddof=1) / math.sqrt(samples)

    esc_rng = np.random.default_rng(s_esc)
    needs = np.flatnonzero((means == 0.0) & (lhs > 0.0))
    for i in needs:
        for factor in _ESCALATION:
            big = samples * factor
            unit_big = sys.unit_ball.sample(big, esc_rng)
            pts = a[i] + (r[i] ** lam) * unit_big
            vals = values_of(pts)
            means[i] = float(np.mean(vals))
            ses[i] = float(np.std(vals, ddof=1) / math.sqrt(big))
            if means[i] > 0.0:
                break

    rhs = constant * v1 * means
    band = 3.0 * constant * v1 * ses
    margins = rhs + band - lhs
    violations = int(np.count_nonzero(margins < 0.0))
    worst = float(np.min(margins))
    return MviCheckReport(kind=kind, constant=constant, trials=trials,
                          violations=violations, worst_margin=worst, seed=seed)


def _positive_values(u_plus):
    fn = _field_fn(u_plus)

    def values(pts):
        return np.maximum(np.asarray(fn(pts), dtype=float), 0.0)

    return values


def check_mvi(u_plus, sys: BallSystem, C: float, trials: int = 1000,
              seed: int = 0, domain=None,
              samples_per_trial: int = 1024) -> MviCheckReport:
    """Tests u_+(a) <= (C/r^A) int_{B_r(a)} u_+ + 3 SE on admissible pairs."""
    dom = domain if domain is not None else getattr(u_plus, "domain", None)
    base = _positive_values(u_plus)
    return _mvi_harness("mvi", base, sys, C, trials, seed, dom,
                        samples_per_trial)


def check_pmvi(u_plus, sys: BallSystem, C: float, p: float, trials: int = 1000,
               seed: int = 0, domain=None, R0: float = 0.5, K: float = 2.0,
               samples_per_trial: int = 1024) -> MviCheckReport:
    """p-th power MVI with the closed-form constant from pmvi_constant."""
    dom = domain if domain is not None else getattr(u_plus, "domain", None)
    ctil = pmvi_constant(C, sys, R0, K, p)
    base = _positive_values(u_plus)

    def values(pts):
        return base(pts) ** p

    return _mvi_harness(f"pmvi[p={p:g}]", values, sys, ctil, trials, seed,
                        dom, samples_per_trial)


def check_concave_mvi(u_plus, sys: BallSystem, C: float, phi, c_phi: float,
                      trials: int = 1000, seed: int = 0, domain=None,
                      R0: float = 0.5, K: float = 2.0,
                      samples_per_trial: int = 1024) -> MviCheckReport:
    """MVI for phi(u_+) with the implementation-chosen doubling constant.

    phi must be a vectorized concave increasing map with phi(0) = 0; c_phi
    bounds phi^{-1}(2t) <= c_phi phi^{-1}(t).
    """
    dom = domain if domain is not None else getattr(u_plus, "domain", None)
    z = float(np.asarray(phi(np.zeros(1)))[0])
    if abs(z) > 1e-12:
        raise ValueError("phi(0) must be 0")
    cphi_const = concave_mvi_constant(C, sys, R0, K, c_phi)
    base = _positive_values(u_plus)

    def values(pts):
        return np.asarray(phi(base(pts)), dtype=float)

    return _mvi_harness(f"concave[c_phi={c_phi:g}]", values, sys, cphi_const,
                        trials, seed, dom, samples_per_trial)


def check_modified_heatball_mvi(u_plus, m: int, center, R: float,
                                budget: int = 100_000, seed: int = 0,
                                constant: float | None = None) -> MviCheckReport:
    """u_+(x, t) <= (M_{m,n}/R^{n+2}) int_{E_m(x,t;R)} u_+ + 3 SE.

    center may be a single point or a list of points; each gets one trial.
    constant overrides M_{m,n} (used by the deliberately-failing sanity check).
    """
    from .constants import kappa_max

    centers = np.atleast_2d(np.asarray(center, dtype=float))
    n = centers.shape[1] - 1
    M = kappa_max(m, n).closed_form if constant is None else float(constant)
    base = _positive_values(u_plus)
    violations = 0
    worst = math.inf
    for i, c in enumerate(centers):
        # plain integral of u_+ over E_m: reuse the slice sampler weights
        res = _modified_integral(base, c, R, m, n, budget, seed + i)
        lhs = float(base(np.atleast_2d(c))[0])
        rhs = (M / R ** (n + 2)) * res.value
        band = 3.0 * (M / R ** (n + 2)) * res.std_error
        margin = rhs + band - lhs
        worst = min(worst, margin)
        if margin < 0:
            violations += 1
    return MviCheckReport(kind=f"modified-heatball[m={m}]", constant=M,
                          trials=len(centers), violations=violations,
                          worst_margin=float(worst), seed=seed)


def _modified_integral(values, center, r: float, m: int, n: int,
                       budget: int, seed: int) -> QuadResult:
    """int_{E_m(center; r)} values(y, s) dy ds via the slice sampler."""
    plan = _batched(budget)
    streams = np.random.SeedSequence(seed).spawn(len(plan))
    parts = []
    scale = r ** (n + 2)
    for st, count in zip(streams, plan):
        rng = np.random.default_rng(st)
        y, s, w = _slice_samples(n, m + n, count, rng)
        pts = np.empty((count, n + 1))
        pts[:, :n] = center[:n] - r * y
        pts[:, n] = center[n] - r * r * s
        parts.append(_moments(scale * values(pts) * w))
    mean, se, nn = _merge(parts)
    return QuadResult(value=mean, std_error=se, samples=nn,
                      method="mc-slice-importance")


def dense_box_sup(u, box: Box, interior: int = 128,
                  edge: int = 65537) -> float:
    """max of u over a box by interior lattice plus dense boundary scan.

    Subsolutions attain their max on the boundary, where the scan is much
    denser; the interior lattice is a safety net.
    """
    fn = _field_fn(u)
    d = box.dim
    best = -math.inf
    axes = [np.linspace(lo, hi, interior) for lo, hi in zip(box.lo, box.hi)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    best = max(best, float(np.max(fn(mesh))))
    face_res = edge if d == 2 else 513
    for axis in range(d):
        others = [np.linspace(lo, hi, face_res)
                  for i, (lo, hi) in enumerate(zip(box.lo, box.hi)) if i != axis]
        if others:
            grid = np.stack(np.meshgrid(*others, indexing="ij"), axis=-1)
            grid = grid.reshape(-1, d - 1)
        else:
            grid = np.zeros((1, 0))
        for side in (box.lo[axis], box.hi[axis]):
            face = np.insert(grid, axis, side, axis=1)
            best = max(best, float(np.max(fn(face))))
    return best


def claim_laplace_drop(u, omega: Box, R: float, n_points: int = 1000,
                       seed: int = 0) -> dict:
    """Fields with Delta u >= 1, u <= c on Omega satisfy
    u <= c - R^2/(2n+4) on the inner parallel set Omega_R."""
    n = omega.dim
    sup = dense_box_sup(u, omega)
    inner = euclidean_shrink(omega, R)
    if inner is None:
        raise ValueError("shrunken domain is empty")
    drop = R * R / (2.0 * n + 4.0)
    rng = np.random.default_rng(seed)
    pts = inner.sample(n_points, rng)
    fn = _field_fn(u)
    vals = np.asarray(fn(pts), dtype=float)
    tol = 1e-6 * max(1.0, abs(sup))
    margins = (sup - drop) - vals
    violations = int(np.count_nonzero(margins < -tol))
    return {"kind": "laplace-drop", "sup": sup, "drop": drop,
            "points": n_points, "violations": violations,
            "worst_margin": float(np.min(margins)), "R": R, "seed": seed}


def claim_heat_drop(u, omega: Box, R: float, n_points: int = 1000,
                    seed: int = 0) -> dict:
    """Fields with Hu >= 1, u <= c on Omega satisfy u <= c - K_n R^2 on the
    heat-ball shrink of Omega."""
    from .constants import k_heat_value

    n = omega.dim - 1
    sup = dense_box_sup(u, omega)
    inner = heatball_shrink(omega, R, n)
    if inner is None:
        raise ValueError("shrunken domain is empty")
    drop = k_heat_value(n) * R * R
    rng = np.random.default_rng(seed)
    pts = inner.sample(n_points, rng)
    fn = _field_fn(u)
    vals = np.asarray(fn(pts), dtype=float)
    tol = 1e-6 * max(1.0, abs(sup))
    margins = (sup - drop) - vals
    violations = int(np.count_nonzero(margins < -tol))
    return {"kind": "heat-drop", "sup": sup, "drop": drop,
            "points": n_points, "violations": violations,
            "worst_margin": float(np.min(margins)), "R": R, "seed": seed}
