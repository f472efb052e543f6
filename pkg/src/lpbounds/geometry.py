"""Integration regions, anisotropic dilations, and radius functions.

Every region exposes a vectorized membership test plus an axis-aligned
bounding box; all Monte Carlo quadrature is built on that pair.  Exact
volumes are provided only where a closed form is elementary (boxes,
Euclidean balls, dilates of regions with known volume); heat balls get
theirs from quadrature elsewhere.

Conventions: spacetime points are ordered (x_1, ..., x_n, t) with time
last.  A heat ball of radius r centered at (x, t) is the superlevel set
{Phi(x - y, t - s) >= r^{-n}} of the heat kernel; it sits strictly in the
past of its center except for the center point itself, which belongs to
the (closed) set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Box",
    "EuclideanBall",
    "Heatball",
    "ModifiedHeatball",
    "DilatedRegion",
    "BallSystem",
    "RadiusFunction",
    "unit_ball_volume",
    "dilate",
    "euclidean_system",
    "parabolic_system",
    "parabolic_box_system",
    "box_system",
    "build_radius_function",
    "max_inscribed_radius",
    "euclidean_shrink",
    "heatball_shrink",
    "system_shrink",
    "heatball_contains",
    "heatball_bounding_box",
    "region_to_dict",
    "region_from_dict",
]


def unit_ball_volume(d: int) -> float:
    """Volume of the unit Euclidean ball in R^d."""
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def _as_points(p, dim: int) -> tuple[np.ndarray, bool]:
    """Normalize a point or batch of points to shape (N, dim).

    Returns the array and whether the input was a single point.
    """
    pts = np.asarray(p, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != dim:
        raise ValueError(f"expected points in R^{dim}, got shape {pts.shape}")
    return pts, single


def _scalar_or_array(out: np.ndarray, single: bool):
    return bool(out[0]) if single else out


@dataclass(frozen=True)
class Box:
    """Axis-aligned box prod_i [lo_i, hi_i]."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("lo and hi must be nonempty and of equal length")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError("box must satisfy lo < hi in every axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def measure(self) -> float:
        return float(np.prod(np.asarray(self.hi) - np.asarray(self.lo)))

    @property
    def center(self) -> tuple[float, ...]:
        return tuple((a + b) / 2.0 for a, b in zip(self.lo, self.hi))

    def halfwidths(self) -> np.ndarray:
        return (np.asarray(self.hi) - np.asarray(self.lo)) / 2.0

    def contains(self, p):
        pts, single = _as_points(p, self.dim)
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        out = np.all((pts >= lo) & (pts <= hi), axis=1)
        return _scalar_or_array(out, single)

    def bounding_box(self) -> "Box":
        return self

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, size=(count, self.dim))


@dataclass(frozen=True)
class EuclideanBall:
    """Open Euclidean ball B_r(c)."""

    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def measure(self) -> float:
        return unit_ball_volume(self.dim) * self.radius ** self.dim

    def contains(self, p):
        pts, single = _as_points(p, self.dim)
        d2 = np.sum((pts - np.asarray(self.center)) ** 2, axis=1)
        return _scalar_or_array(d2 < self.radius**2, single)

    def bounding_box(self) -> Box:
        c = np.asarray(self.center)
        return Box(tuple(c - self.radius), tuple(c + self.radius))

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        d = self.dim
        z = rng.standard_normal((count, d))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        u = rng.random(count) ** (1.0 / d)
        return np.asarray(self.center) + self.radius * u[:, None] * z


def _slice_width_sq(tau: np.ndarray, r: float, d: int) -> np.ndarray:
    """Squared spatial radius of the heat-ball slice at age tau, kernel dim d."""
    return 2.0 * d * tau * np.log(r * r / (4.0 * math.pi * tau))


@dataclass(frozen=True)
class Heatball:
    """Heat ball E(x, t; r): past superlevel set of the heat kernel.

    center = (x_1, ..., x_n, t), n = spatial dimension.  Membership is
    strict in the spatial inequality; the center point itself is a member.
    Volume is r^{n+2} times the unit volume, which has no elementary closed
    form and is computed in the constants module.
    """

    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if len(self.center) < 2:
            raise ValueError("heat ball needs at least one spatial axis plus time")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def spatial_dim(self) -> int:
        return len(self.center) - 1

    @property
    def measure(self):
        return None

    @property
    def depth(self) -> float:
        """Temporal extent r^2 / (4 pi)."""
        return self.radius**2 / (4.0 * math.pi)

    def contains(self, p):
        pts, single = _as_points(p, self.dim)
        n = self.spatial_dim
        x = np.asarray(self.center[:n])
        t = self.center[-1]
        tau = t - pts[:, -1]
        out = np.zeros(len(pts), dtype=bool)
        ok = (tau > 0) & (tau <= self.depth)
        if np.any(ok):
            d2 = np.sum((pts[ok, :n] - x) ** 2, axis=1)
            out[ok] = d2 < _slice_width_sq(tau[ok], self.radius, n)
        out |= np.all(pts == np.asarray(self.center), axis=1)
        return _scalar_or_array(out, single)

    def bounding_box(self) -> Box:
        n = self.spatial_dim
        w = self.radius * math.sqrt(n / (2.0 * math.pi * math.e))
        lo = [c - w for c in self.center[:n]] + [self.center[-1] - self.depth]
        hi = [c + w for c in self.center[:n]] + [self.center[-1]]
        return Box(tuple(lo), tuple(hi))


@dataclass(frozen=True)
class ModifiedHeatball:
    """Heat ball of an m-augmented kernel projected to n spatial variables.

    E_m(x, t; r) uses the heat kernel of R^{m+n} evaluated at (y, 0_m):
    slices have squared radius 2 (m+n) tau log(r^2 / (4 pi tau)).  Points
    are (y_1, ..., y_n, s) as for Heatball.
    """

    center: tuple[float, ...]
    radius: float
    m: int

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if len(self.center) < 2:
            raise ValueError("needs at least one spatial axis plus time")
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.m < 1:
            raise ValueError("m must be a positive integer")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def spatial_dim(self) -> int:
        return len(self.center) - 1

    @property
    def kernel_dim(self) -> int:
        return self.m + self.spatial_dim

    @property
    def measure(self):
        return None

    @property
    def depth(self) -> float:
        return self.radius**2 / (4.0 * math.pi)

    def contains(self, p):
        pts, single = _as_points(p, self.dim)
        n = self.spatial_dim
        x = np.asarray(self.center[:n])
        t = self.center[-1]
        tau = t - pts[:, -1]
        out = np.zeros(len(pts), dtype=bool)
        ok = (tau > 0) & (tau <= self.depth)
        if np.any(ok):
            d2 = np.sum((pts[ok, :n] - x) ** 2, axis=1)
            out[ok] = d2 < _slice_width_sq(tau[ok], self.radius, self.kernel_dim)
        out |= np.all(pts == np.asarray(self.center), axis=1)
        return _scalar_or_array(out, single)

    def bounding_box(self) -> Box:
        n = self.spatial_dim
        w = self.radius * math.sqrt(self.kernel_dim / (2.0 * math.pi * math.e))
        lo = [c - w for c in self.center[:n]] + [self.center[-1] - self.depth]
        hi = [c + w for c in self.center[:n]] + [self.center[-1]]
        return Box(tuple(lo), tuple(hi))


def heatball_contains(hb, p) -> bool:
    """Membership test for a single point in a (modified) heat ball."""
    return bool(hb.contains(p))


def heatball_bounding_box(hb) -> Box:
    return hb.bounding_box()


@dataclass(frozen=True)
class DilatedRegion:
    """Anisotropic dilate a + r^lambda . U of a unit region U.

    Axis i is scaled by r^{lambda_i}; volume scales by r^{sum lambda}.
    """

    unit: object
    center: tuple[float, ...]
    r: float
    lambdas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if self.r <= 0:
            raise ValueError("dilation factor must be positive")
        if len(self.center) != self.unit.dim or len(self.lambdas) != self.unit.dim:
            raise ValueError("center/lambdas dimension mismatch with unit region")

    @property
    def dim(self) -> int:
        return self.unit.dim

    @property
    def degree(self) -> float:
        return float(sum(self.lambdas))

    def _scales(self) -> np.ndarray:
        return self.r ** np.asarray(self.lambdas)

    @property
    def measure(self):
        base = self.unit.measure
        if base is None:
            return None
        return base * self.r**self.degree

    def contains(self, p):
        pts, single = _as_points(p, self.dim)
        y = (pts - np.asarray(self.center)) / self._scales()
        out = self.unit.contains(y)
        out = np.atleast_1d(out)
        return _scalar_or_array(out, single)

    def bounding_box(self) -> Box:
        bb = self.unit.bounding_box()
        s = self._scales()
        c = np.asarray(self.center)
        return Box(tuple(c + s * np.asarray(bb.lo)), tuple(c + s * np.asarray(bb.hi)))

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        y = self.unit.sample(count, rng)
        return np.asarray(self.center) + self._scales() * y


@dataclass(frozen=True)
class BallSystem:
    """A family of anisotropic balls B_r(a) = a + r^lambda . U.

    degree = sum of the scaling exponents; it is the volume-scaling power
    of the family.  center_on_boundary marks families (heat balls) whose
    center sits on the boundary of its own ball.
    """

    unit_ball: object
    lambdas: tuple[float, ...]
    center_on_boundary: bool = False
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if len(self.lambdas) != self.unit_ball.dim:
            raise ValueError("lambdas dimension mismatch with unit ball")
        if any(v <= 0 for v in self.lambdas):
            raise ValueError("scaling exponents must be positive")

    @property
    def dim(self) -> int:
        return self.unit_ball.dim

    @property
    def degree(self) -> float:
        return float(sum(self.lambdas))

    @property
    def unit_volume(self):
        return self.unit_ball.measure

    def ball(self, a, r: float):
        return dilate(self, a, r)


def dilate(sys: BallSystem, a, r: float):
    """The system ball B_r(a)."""
    a = tuple(float(v) for v in np.atleast_1d(np.asarray(a, dtype=float)))
    if r == 1.0 and all(v == 0.0 for v in a):
        return sys.unit_ball
    return DilatedRegion(sys.unit_ball, a, float(r), sys.lambdas)


def euclidean_system(d: int) -> BallSystem:
    """Standard Euclidean balls in R^d (lambda = 1, degree d)."""
    return BallSystem(EuclideanBall((0.0,) * d, 1.0), (1.0,) * d, name=f"euclid-{d}")


def box_system(halfwidths, lambdas, name: str = "box") -> BallSystem:
    hw = tuple(float(v) for v in halfwidths)
    return BallSystem(
        Box(tuple(-v for v in hw), hw), tuple(lambdas), name=name
    )


def parabolic_system(n: int) -> BallSystem:
    """Heat balls E(x, t; r) as a ball system (lambda = (1,..,1,2), degree n+2)."""
    unit = Heatball((0.0,) * (n + 1), 1.0)
    return BallSystem(unit, (1.0,) * n + (2.0,), center_on_boundary=True,
                      name=f"heat-{n}")


def parabolic_box_system(m: int, n: int) -> BallSystem:
    """Spacetime boxes dominating the m-augmented heat balls in R^n x R.

    Spatial half-width max((m+n)/(pi e), sqrt((m+n)/(2 pi e))): the second
    term is the spatial reach of the unit ball E_m(1), which exceeds the
    first when m + n = 4, and containment of the unit ball is required.
    Time half-width 1/(2 pi), exponents (1, .., 1, 2).
    """
    d = m + n
    w = max(d / (math.pi * math.e), math.sqrt(d / (2.0 * math.pi * math.e)))
    hw = (w,) * n + (1.0 / (2.0 * math.pi),)
    return box_system(hw, (1.0,) * n + (2.0,), name=f"parabolic-box-{m}-{n}")


def _cube_probes(d: int) -> np.ndarray:
    """Deterministic probe points of the cube [-1, 1]^d.

    Corners, a lattice on each face, and an interior lattice.  Used for
    containment tests of candidate boxes in non-box, non-ball domains.
    """
    pts = []
    corners = np.array(np.meshgrid(*([[-1.0, 1.0]] * d), indexing="ij"))
    pts.append(corners.reshape(d, -1).T)
    face_grid = np.linspace(-1.0, 1.0, 7)
    for axis in range(d):
        rest = [face_grid] * (d - 1)
        grid = np.array(np.meshgrid(*rest, indexing="ij")).reshape(d - 1, -1).T \
            if d > 1 else np.zeros((1, 0))
        for side in (-1.0, 1.0):
            face = np.insert(grid, axis, side, axis=1)
            pts.append(face)
    inner = np.linspace(-0.8, 0.8, 5)
    lattice = np.array(np.meshgrid(*([inner] * d), indexing="ij")).reshape(d, -1).T
    pts.append(lattice)
    return np.unique(np.vstack(pts), axis=0)


@dataclass
class RadiusFunction:
    """R(a) = sup{r : B~_r(a) subset domain} / divisor.

    B~_r(a) is the candidate box a + r^lambda . B~ where B~ is the smallest
    origin-symmetric axis-aligned box containing the domain.  The sup is
    found by doubling-then-bisection (60 iterations); containment is exact
    for Box and EuclideanBall domains and probe-based otherwise.

    The divisor (4 in general, 2 when every exponent is >= 1) makes the
    construction satisfy the two-sided admissibility axioms with ratio
    constant K = 2.
    """

    system: BallSystem
    domain: object
    divisor: float
    halfwidths: tuple[float, ...] = field(default=())
    iterations: int = 60

    def __post_init__(self):
        if not self.halfwidths:
            bb = self.domain.bounding_box()
            hw = np.maximum(np.abs(np.asarray(bb.lo)), np.abs(np.asarray(bb.hi)))
            self.halfwidths = tuple(float(v) for v in hw)
        if self.system.dim != self.domain.dim:
            raise ValueError("system/domain dimension mismatch")
        self._probes = None

    @property
    def ratio_constant(self) -> float:
        return 2.0

    def _candidate_box(self, a: np.ndarray, r: float) -> tuple[np.ndarray, np.ndarray]:
        w = (r ** np.asarray(self.system.lambdas)) * np.asarray(self.halfwidths)
        return a - w, a + w

    def _fits(self, a: np.ndarray, r: float) -> bool:
        lo, hi = self._candidate_box(a, r)
        dom = self.domain
        if isinstance(dom, Box):
            return bool(np.all(lo >= np.asarray(dom.lo)) and
                        np.all(hi <= np.asarray(dom.hi)))
        if isinstance(dom, EuclideanBall):
            c = np.asarray(dom.center)
            reach = np.abs(a - c) + (hi - lo) / 2.0
            return bool(np.sum(reach**2) < dom.radius**2)
        if self._probes is None:
            self._probes = _cube_probes(dom.dim)
        pts = a + self._probes * (hi - lo) / 2.0
        return bool(np.all(dom.contains(pts)))

    def sup_radius(self, a) -> float:
        a = np.asarray(a, dtype=float)
        if not self.domain.contains(a):
            raise ValueError("center must lie in the domain")
        hi = 1.0
        grew = 0
        while self._fits(a, hi) and grew < 64:
            hi *= 2.0
            grew += 1
        lo = 0.0
        for _ in range(self.iterations):
            mid = (lo + hi) / 2.0
            if self._fits(a, mid):
                lo = mid
            else:
                hi = mid
        return lo

    def __call__(self, a) -> float:
        return self.sup_radius(a) / self.divisor


def build_radius_function(sys: BallSystem, domain) -> RadiusFunction:
    """Radius function of Prop-2.9 type for a ball system on a domain.

    Divisor 2 when all scaling exponents are >= 1 (the candidate boxes are
    then monotone under r-halving in the required way), 4 in general.
    """
    divisor = 2.0 if all(v >= 1.0 for v in sys.lambdas) else 4.0
    return RadiusFunction(system=sys, domain=domain, divisor=divisor)


def max_inscribed_radius(sys: BallSystem, domain, a) -> float:
    """sup{r : closure of the system ball B_r(a) lies in the domain}.

    Closed forms for the cases used by the checkers; falls back to
    bisection on bounding-box containment (conservative) otherwise.
    """
    a = np.asarray(a, dtype=float)
    if not domain.contains(a):
        raise ValueError("center must lie in the domain")
    unit = sys.unit_ball
    lam = np.asarray(sys.lambdas)
    if isinstance(unit, EuclideanBall) and np.all(lam == 1.0):
        if isinstance(domain, Box):
            m = np.minimum(a - np.asarray(domain.lo), np.asarray(domain.hi) - a)
            return float(np.min(m) / unit.radius)
        if isinstance(domain, EuclideanBall):
            gap = domain.radius - np.linalg.norm(a - np.asarray(domain.center))
            return float(gap / unit.radius)
    if isinstance(unit, Box) and isinstance(domain, Box):
        hw = unit.halfwidths()
        m = np.minimum(a - np.asarray(domain.lo), np.asarray(domain.hi) - a)
        return float(np.min((m / hw) ** (1.0 / lam)))
    if isinstance(unit, Heatball) and isinstance(domain, Box):
        n = unit.spatial_dim
        wcoef = math.sqrt(n / (2.0 * math.pi * math.e))
        m = np.minimum(a[:n] - np.asarray(domain.lo[:n]),
                       np.asarray(domain.hi[:n]) - a[:n])
        r_space = float(np.min(m)) / wcoef
        r_time = math.sqrt(4.0 * math.pi * (a[-1] - domain.lo[-1]))
        return min(r_space, r_time)
    lo, hi = 0.0, 1.0
    grew = 0

    def fits(r: float) -> bool:
        bb = sys.ball(tuple(a), r).bounding_box()
        pts = np.array([bb.lo, bb.hi])
        return bool(np.all(domain.contains(pts)))

    while fits(hi) and grew < 64:
        hi *= 2.0
        grew += 1
    for _ in range(60):
        mid = (lo + hi) / 2.0
        if fits(mid):
            lo = mid
        else:
            hi = mid
    return lo


def euclidean_shrink(box: Box, r: float) -> Box | None:
    """Inner parallel box at Euclidean distance r; None if empty."""
    lo = np.asarray(box.lo) + r
    hi = np.asarray(box.hi) - r
    if np.any(lo >= hi):
        return None
    return Box(tuple(lo), tuple(hi))


def heatball_shrink(box: Box, r: float, n: int) -> Box | None:
    """Points of a spacetime box whose heat ball of radius r stays inside.

    Spatial margins r sqrt(n / (2 pi e)) on both sides, temporal margin
    r^2/(4 pi) at the bottom only (heat balls live in the past).
    """
    if box.dim != n + 1:
        raise ValueError("box dimension must be n + 1")
    w = r * math.sqrt(n / (2.0 * math.pi * math.e))
    lo = np.asarray(box.lo, dtype=float).copy()
    hi = np.asarray(box.hi, dtype=float).copy()
    lo[:n] += w
    hi[:n] -= w
    lo[n] += r**2 / (4.0 * math.pi)
    if np.any(lo >= hi):
        return None
    return Box(tuple(lo), tuple(hi))


def system_shrink(box: Box, sys: BallSystem, r: float) -> Box | None:
    """Points of a box whose system ball B_r stays inside (box unit balls)."""
    unit = sys.unit_ball
    if not isinstance(unit, Box):
        raise TypeError("system_shrink requires a box-shaped unit ball")
    w = (r ** np.asarray(sys.lambdas)) * unit.halfwidths()
    c = np.asarray(unit.center)
    if np.any(c != 0.0):
        raise ValueError("unit ball must be origin-symmetric")
    lo = np.asarray(box.lo) + w
    hi = np.asarray(box.hi) - w
    if np.any(lo >= hi):
        return None
    return Box(tuple(lo), tuple(hi))


def region_to_dict(region) -> dict:
    """JSON-serializable description of a region (round-trips exactly)."""
    if isinstance(region, Box):
        return {"kind": "box", "lo": list(region.lo), "hi": list(region.hi)}
    if isinstance(region, EuclideanBall):
        return {"kind": "ball", "center": list(region.center),
                "radius": region.radius}
    if isinstance(region, ModifiedHeatball):
        return {"kind": "modified-heatball", "center": list(region.center),
                "radius": region.radius, "m": region.m}
    if isinstance(region, Heatball):
        return {"kind": "heatball", "center": list(region.center),
                "radius": region.radius}
    if isinstance(region, DilatedRegion):
        return {"kind": "dilate", "unit": region_to_dict(region.unit),
                "center": list(region.center), "r": region.r,
                "lambdas": list(region.lambdas)}
    raise TypeError(f"cannot serialize region of type {type(region).__name__}")


def region_from_dict(data: dict):
    kind = data["kind"]
    if kind == "box":
        return Box(tuple(data["lo"]), tuple(data["hi"]))
    if kind == "ball":
        return EuclideanBall(tuple(data["center"]), data["radius"])
    if kind == "heatball":
        return Heatball(tuple(data["center"]), data["radius"])
    if kind == "modified-heatball":
        return ModifiedHeatball(tuple(data["center"]), data["radius"], data["m"])
    if kind == "dilate":
        return DilatedRegion(region_from_dict(data["unit"]), tuple(data["center"]),
                             data["r"], tuple(data["lambdas"]))
    raise ValueError(f"unknown region kind {kind!r}")
