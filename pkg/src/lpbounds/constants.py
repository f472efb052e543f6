"""Named constants: drop constants, heat-ball volumes, the kernel maximum
M_{m,n}, adjoint L^1 constants, the assembled L^p lower-bound constants,
and sublevel <-> p-mean conversion bounds.

Each quadrature-backed constant is reported as a ConstantReport carrying a
closed form, an independent cross-check, their relative gap, and the full
input provenance, so regression files are self-describing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.integrate import quad as _quad

from .geometry import (
    Box,
    EuclideanBall,
    BallSystem,
    euclidean_system,
    parabolic_box_system,
    euclidean_shrink,
    heatball_shrink,
    system_shrink,
    unit_ball_volume,
)
from .quadrature import QuadResult, integrate, measure
from .averages import SMAX, _slice_samples, _moments, _merge, _batched, pmvi_constant

__all__ = [
    "ConstantReport",
    "k_laplace",
    "k_heat_value",
    "k_heat",
    "heatball_unit_volume",
    "heatball_unit_volume_exact",
    "heatball_unit_volume_quad",
    "kappa",
    "kappa_max",
    "golden_max",
    "adjoint_constant",
    "assemble_cp_laplace",
    "assemble_cp_heat",
    "sublevel_to_pmean_bound",
    "pmean_to_sublevel_bound",
    "constants_table",
]


@dataclass
class ConstantReport:
    name: str
    closed_form: float
    cross_check: float | None = None
    inputs: dict = dc_field(default_factory=dict)
    rel_gap: float | None = None

    def __post_init__(self):
        if self.cross_check is not None and self.rel_gap is None:
            denom = max(abs(self.closed_form), 1e-300)
            self.rel_gap = abs(self.closed_form - self.cross_check) / denom

    def as_row(self) -> dict:
        return {"name": self.name, "inputs": dict(self.inputs),
                "closedForm": self.closed_form, "crossCheck": self.cross_check,
                "relGap": self.rel_gap}


def k_laplace(n: int) -> float:
    """Drop constant 1/(2n+4) of the ball-average lower bound."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return 1.0 / (2.0 * n + 4.0)


def heatball_unit_volume_exact(n: int, kernel_dim: int | None = None) -> float:
    """|E(1)| by the closed slice integral.

    The slice at age s is a ball of radius sqrt(2 d s log(1/(4 pi s))) in
    R^n (d = kernel dimension, n for plain heat balls, m+n for modified
    ones); substituting s = e^{-tau}/(4 pi) gives a Gamma integral.
    """
    d = n if kernel_dim is None else kernel_dim
    a = n / 2.0
    return (unit_ball_volume(n) * (2.0 * d) ** (n / 2.0)
            * SMAX ** (a + 1.0) * math.gamma(a + 1.0) / (a + 1.0) ** (a + 1.0))


def heatball_unit_volume_quad(n: int, kernel_dim: int | None = None) -> float:
    """|E(1)| by adaptive 1-D quadrature of the slice volumes (cross-check)."""
    d = n if kernel_dim is None else kernel_dim
    vn = unit_ball_volume(n)

    def slice_vol(s: float) -> float:
        if s <= 0.0 or s >= SMAX:
            return 0.0
        return vn * (2.0 * d * s * math.log(1.0 / (4.0 * math.pi * s))) ** (n / 2.0)

    val, _ = _quad(slice_vol, 0.0, SMAX, limit=200)
    return val


def heatball_unit_volume(n: int, budget: int = 200_000,
                         seed: int = 0) -> QuadResult:
    """Monte Carlo |E(1)| in slice coordinates (importance sampler weight)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    plan = _batched(budget)
    streams = np.random.SeedSequence(seed).spawn(len(plan))
    parts = []
    for st, count in zip(streams, plan):
        rng = np.random.default_rng(st)
        _, _, w = _slice_samples(n, n, count, rng)
        parts.append(_moments(w))
    mean, se, nn = _merge(parts)
    return QuadResult(value=mean, std_error=se, samples=nn,
                      method="mc-slice-importance")


def k_heat_value(n: int) -> float:
    """Heat drop constant (n^2/2) |E(1)| e^{-(n+2)}.

    The exponent is negative: the bounding slice factor (4 pi s)^{...} is
    maximized at s = e^{-(n+2)}/(4 pi), and the deliberately crude bound
    keeps that maximum; the positive exponent would exceed the actual drop
    of u = -t by e^{2(n+2)}.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    return (n * n / 2.0) * heatball_unit_volume_exact(n) * math.exp(-(n + 2.0))


def k_heat(n: int, budget: int = 200_000, seed: int = 0) -> ConstantReport:
    closed = k_heat_value(n)
    vol = heatball_unit_volume(n, budget=budget, seed=seed)
    cross = (n * n / 2.0) * vol.value * math.exp(-(n + 2.0))
    return ConstantReport(
        name=f"k_heat[n={n}]", closed_form=closed, cross_check=cross,
        inputs={"n": n, "exponent": -(n + 2), "volume_exact":
                heatball_unit_volume_exact(n), "volume_mc": vol.value,
                "volume_mc_se": vol.std_error})


def kappa(m: int, n: int, y, s):
    """Kernel of the modified heat-ball mean value property.

    kappa_{m,n}(y, s) = |B_1|/(2m+4) A~^m (m(m+n) L/s + |y|^2/s^2) with
    A~^2 = 2 s (m+n) L - |y|^2, L = log(1/(4 pi s)), and |B_1| the unit
    ball volume of R^m (the dimension of the integrated-out variables).
    Zero on the boundary A~ = 0 and extended by 0 at (0, 0).
    """
    if m < 3:
        raise ValueError("m must be at least 3")
    if n < 1:
        raise ValueError("n must be at least 1")
    yarr = np.asarray(y, dtype=float)
    single = yarr.ndim <= 1 and np.ndim(s) == 0
    yarr = np.atleast_2d(yarr)
    if yarr.shape[1] != n:
        raise ValueError(f"y must have {n} coordinates")
    sarr = np.broadcast_to(np.asarray(s, dtype=float), (len(yarr),)).copy()
    out = np.zeros(len(yarr))
    pos = sarr > 0.0
    if np.any(sarr < 0.0) or np.any(sarr > SMAX * (1.0 + 1e-12)):
        raise ValueError("point outside the modified heat ball")
    if np.any(pos):
        ss = sarr[pos]
        bigl = np.log(1.0 / (4.0 * math.pi * ss))
        y2 = np.sum(yarr[pos] ** 2, axis=1)
        a2 = 2.0 * ss * (m + n) * bigl - y2
        scale = np.maximum(2.0 * ss * (m + n) * np.maximum(bigl, 0.0), 1e-300)
        if np.any(a2 < -1e-9 * scale):
            raise ValueError("point outside the modified heat ball")
        a2 = np.maximum(a2, 0.0)
        out[pos] = (unit_ball_volume(m) / (2.0 * m + 4.0) * a2 ** (m / 2.0)
                    * (m * (m + n) * bigl / ss + y2 / ss**2))
    if np.any(~pos):
        y2z = np.sum(yarr[~pos] ** 2, axis=1)
        if np.any(y2z > 0.0):
            raise ValueError("point outside the modified heat ball")
    return float(out[0]) if single else out


def golden_max(fn, lo: float, hi: float, iters: int = 160) -> tuple[float, float]:
    """Golden-section maximization of a unimodal function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c1 = b - invphi * (b - a)
    c2 = a + invphi * (b - a)
    f1, f2 = fn(c1), fn(c2)
    for _ in range(iters):
        if f1 < f2:
            a, c1, f1 = c1, c2, f2
            c2 = a + invphi * (b - a)
            f2 = fn(c2)
        else:
            b, c2, f2 = c2, c1, f1
            c1 = b - invphi * (b - a)
            f1 = fn(c1)
    x = (a + b) / 2.0
    return x, fn(x)


def kappa_max(m: int, n: int) -> ConstantReport:
    """Maximum M_{m,n} of kappa over the unit modified heat ball.

    closedForm: |B_1| (2 pi/e) (2(m+n)(m+2) / ((4 pi e)(m-2)))^{m/2}
    (m(m+n)/(m-2)), attained at y = 0, s* = (4 pi e^{(m+2)/(m-2)})^{-1}.
    crossCheck: golden-section maximization over s at y = 0, after a grid
    verification that kappa decreases in |y|.
    """
    if m < 3:
        raise ValueError("m must be at least 3")
    vb = unit_ball_volume(m)
    closed = (vb * (2.0 * math.pi / math.e)
              * (2.0 * (m + n) * (m + 2.0)
                 / ((4.0 * math.pi * math.e) * (m - 2.0))) ** (m / 2.0)
              * (m * (m + n) / (m - 2.0)))
    s_star = 1.0 / (4.0 * math.pi * math.exp((m + 2.0) / (m - 2.0)))

    def profile(s: float) -> float:
        return kappa(m, n, np.zeros(n), s)

    s_num, cross = golden_max(profile, 1e-12, SMAX * (1.0 - 1e-12))

    # kappa must not exceed the y = 0 value anywhere on the s* slice
    bigl = math.log(1.0 / (4.0 * math.pi * s_star))
    ymax = math.sqrt(2.0 * s_star * (m + n) * bigl)
    radii = np.linspace(0.0, ymax * (1.0 - 1e-9), 64)
    ygrid = np.zeros((64, n))
    ygrid[:, 0] = radii
    slice_vals = kappa(m, n, ygrid, s_star)
    y_monotone = bool(np.max(slice_vals) <= slice_vals[0] * (1.0 + 1e-12))

    return ConstantReport(
        name=f"kappa_max[m={m},n={n}]", closed_form=closed, cross_check=cross,
        inputs={"m": m, "n": n, "s_star": s_star, "s_star_numeric": s_num,
                "unit_ball_dim": m, "y_slice_monotone": y_monotone})


def adjoint_constant(D, domain: Box, bump, budget: int = 100_000,
                     seed: int = 0) -> ConstantReport:
    """L^1 testing constant c = ||phi||_1 / ||D* phi||_inf for a bump phi.

    Numerator: radial closed-form quadrature, cross-checked by Monte Carlo.
    Denominator: sup of |D* phi| over a lattice plus random samples of the
    support, using the bump's exact derivatives.
    """
    center = np.asarray(bump.params["center"], dtype=float)
    radius = float(bump.params["radius"])
    d = len(center)
    if D.dim != d or domain.dim != d:
        raise ValueError("operator/domain/bump dimension mismatch")
    inside = (np.all(center - radius > np.asarray(domain.lo))
              and np.all(center + radius < np.asarray(domain.hi)))
    if not inside:
        raise ValueError("bump support escapes the domain")

    surface = d * unit_ball_volume(d)
    prof, _ = _quad(lambda t: math.exp(-1.0 / (1.0 - t * t)) * t ** (d - 1),
                    0.0, 1.0, limit=200)
    num_closed = radius**d * surface * prof

    ball = EuclideanBall(tuple(center), radius)
    num_mc = integrate(bump, ball, budget=budget, seed=seed).value

    dstar = D.adjoint()
    axes = [np.linspace(c - radius, c + radius, 96) for c in center]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    den = float(np.max(np.abs(dstar.apply(bump, mesh))))
    rng = np.random.default_rng(seed)
    pts = ball.sample(max(budget // 10, 1024), rng)
    den = max(den, float(np.max(np.abs(dstar.apply(bump, pts)))))
    if den <= 0.0:
        raise ValueError("adjoint sup vanished; degenerate operator")

    return ConstantReport(
        name=f"adjoint[{D.name}]", closed_form=num_closed / den,
        cross_check=num_mc / den,
        inputs={"operator": D.name, "order": D.order, "center": tuple(center),
                "radius": radius, "numerator_closed": num_closed,
                "numerator_mc": num_mc, "sup_adjoint": den})


def _sup_admissible(predicate, hi_start: float = 1.0) -> float:
    """sup{R > 0 : predicate(R)} by doubling then 60-step bisection."""
    hi = hi_start
    grew = 0
    while predicate(hi) and grew < 64:
        hi *= 2.0
        grew += 1
    lo = 0.0
    for _ in range(60):
        mid = (lo + hi) / 2.0
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    return lo


def assemble_cp_laplace(n: int, omega: Box, p: float, budget: int = 100_000,
                        seed: int = 0, R1: float | None = None,
                        R2: float | None = None) -> ConstantReport:
    """The assembled L^p lower-bound constant for Delta u >= 1 on a box.

    R1 = inradius/4, R2 = half the remaining inradius, c = K_n R2^2 / 2;
    c_p = min(c (R1^n / C~_p)^{1/p}, |c - K_n R2^2| |Omega_{R1+R2}|^{1/p}).
    The shrunken-domain measure is exact for boxes; Monte Carlo provides
    the cross-check.
    """
    if not isinstance(omega, Box):
        raise TypeError("assembly implemented for box domains only")
    if omega.dim != n:
        raise ValueError("domain dimension must equal n")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    rho = _sup_admissible(lambda R: euclidean_shrink(omega, R) is not None,
                          hi_start=float(np.min(omega.halfwidths())))
    if R1 is None:
        R1 = rho / 4.0
    if R2 is None:
        R2 = (rho - R1) / 2.0
    if R1 + R2 >= rho or min(R1, R2) <= 0:
        raise ValueError("domain too small for the chosen R1 + R2")
    kn = k_laplace(n)
    c = kn * R2 * R2 / 2.0
    sys = euclidean_system(n)
    ctil = pmvi_constant(1.0 / unit_ball_volume(n), sys, 0.5, 2.0, p)
    branch1 = c * (R1**n / ctil) ** (1.0 / p)
    shr = euclidean_shrink(omega, R1 + R2)
    vol_exact = shr.measure
    vol_mc = measure(omega, predicate=shr.contains, budget=budget,
                     seed=seed).value
    gap = abs(c - kn * R2 * R2)
    closed = min(branch1, gap * vol_exact ** (1.0 / p))
    cross = min(branch1, gap * vol_mc ** (1.0 / p))
    return ConstantReport(
        name=f"c_p[laplace,n={n},p={p:g}]", closed_form=closed,
        cross_check=cross,
        inputs={"n": n, "p": p, "R1": R1, "R2": R2, "c": c, "C_p": ctil,
                "inradius": rho, "vol_exact": vol_exact, "vol_mc": vol_mc,
                "branch_mvi": branch1,
                "branch_sublevel": gap * vol_exact ** (1.0 / p)})


def assemble_cp_heat(n: int, m: int, omega: Box, p: float,
                     budget: int = 100_000, seed: int = 0,
                     R1: float | None = None,
                     R2: float | None = None) -> ConstantReport:
    """The assembled L^p lower-bound constant for Hu >= 1 on a spacetime box.

    Branch 1 (MVI dichotomy) shrinks Omega by the bounding-box balls of the
    parabolic system, so every kept center has its full candidate box inside
    Omega, as the radius-function hypothesis requires; branch 2 shrinks the
    result by heat balls of radius R2.  c = K_n R2^2 / 2 with the heat drop
    constant, C~_p from the p-MVI with C = M_{m,n}, R(0) = 1/2, K = 2.
    """
    if not isinstance(omega, Box):
        raise TypeError("assembly implemented for box domains only")
    if omega.dim != n + 1:
        raise ValueError("domain dimension must equal n + 1")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if m < 3:
        raise ValueError("m must be at least 3")
    sys = parabolic_box_system(m, n)
    rho = _sup_admissible(lambda R: system_shrink(omega, sys, R) is not None)
    if R1 is None:
        R1 = rho / 4.0
    s1 = system_shrink(omega, sys, R1)
    if s1 is None:
        raise ValueError("domain too small for the chosen R1")
    sigma = _sup_admissible(lambda R: heatball_shrink(s1, R, n) is not None)
    if R2 is None:
        R2 = sigma / 2.0
    kn = k_heat_value(n)
    c = kn * R2 * R2 / 2.0
    mreport = kappa_max(m, n)
    ctil = pmvi_constant(mreport.closed_form, sys, 0.5, 2.0, p)
    branch1 = c * (R1 ** (n + 2) / ctil) ** (1.0 / p)
    omt = heatball_shrink(s1, R2, n)
    if omt is None:
        raise ValueError("domain too small for the chosen R2")
    vol_exact = omt.measure
    vol_mc = measure(omega, predicate=omt.contains, budget=budget,
                     seed=seed).value
    gap = abs(c - kn * R2 * R2)
    closed = min(branch1, gap * vol_exact ** (1.0 / p))
    cross = min(branch1, gap * vol_mc ** (1.0 / p))
    return ConstantReport(
        name=f"c_p[heat,n={n},m={m},p={p:g}]", closed_form=closed,
        cross_check=cross,
        inputs={"n": n, "m": m, "p": p, "R1": R1, "R2": R2, "c": c,
                "C_p": ctil, "M": mreport.closed_form, "inradius_box": rho,
                "inradius_heat": sigma, "vol_exact": vol_exact,
                "vol_mc": vol_mc, "branch_mvi": branch1,
                "branch_sublevel": gap * vol_exact ** (1.0 / p)})


def sublevel_to_pmean_bound(C: float, delta: float, p: float,
                            omega_vol: float) -> float:
    """Lower bound for the normalized p-mean from a sublevel estimate.

    Assumes |{|u| <= eps}| <= C eps^delta; valid for p in (-delta, 0).
    k0 is the smallest integer with 2^{k delta} C >= |Omega|.
    """
    if C <= 0 or delta <= 0 or omega_vol <= 0:
        raise ValueError("C, delta, and the volume must be positive")
    if not -delta < p < 0.0:
        raise ValueError("p must lie in (-delta, 0)")
    k0 = math.ceil(math.log2(omega_vol / C) / delta)
    while 2.0 ** ((k0 - 1) * delta) * C >= omega_vol:
        k0 -= 1
    while 2.0 ** (k0 * delta) * C < omega_vol:
        k0 += 1
    inner = (2.0 ** (-p + k0 * (delta + p)) * C
             / ((1.0 - 2.0 ** (-delta - p)) * omega_vol) + 2.0 ** (k0 * p))
    return inner ** (1.0 / p)


def pmean_to_sublevel_bound(c: float, p: float, omega_vol: float,
                            eps: float) -> float:
    """|{x : |u| <= eps}| <= c^p |Omega| eps^{-p} when the normalized
    p-mean is at least c (p < 0)."""
    if c <= 0 or eps <= 0 or omega_vol <= 0:
        raise ValueError("c, eps, and the volume must be positive")
    if p >= 0.0:
        raise ValueError("p must be negative")
    return c**p * omega_vol * eps ** (-p)


def constants_table(ns=(1, 2, 3), ms=(3, 4, 5, 6), budget: int = 200_000,
                    seed: int = 0) -> list[ConstantReport]:
    """The named-constants audit table used by the CLI."""
    rows: list[ConstantReport] = []
    for n in ns:
        rows.append(ConstantReport(name=f"k_laplace[n={n}]",
                                   closed_form=k_laplace(n),
                                   inputs={"n": n}))
    for n in ns:
        vol = heatball_unit_volume(n, budget=budget, seed=seed)
        rows.append(ConstantReport(
            name=f"heatball_volume[n={n}]",
            closed_form=heatball_unit_volume_exact(n), cross_check=vol.value,
            inputs={"n": n, "mc_se": vol.std_error, "mc_samples": vol.samples}))
    for n in ns:
        rows.append(k_heat(n, budget=budget, seed=seed))
    for m in ms:
        for n in ns:
            rows.append(kappa_max(m, n))
    return rows
