"""Current-loop magnetic moment near a charged line: forces, hidden momentum,
mirror-bounce dynamics, and the moment-around-charge phase.

Geometry (v1): the charged line runs along z through ``axis_point``, the
moment is polarized along z, and motion stays in the x-y plane.  A moving
current loop acquires an electric dipole d = (v x mu)/c and therefore feels
the gradient force (d . grad)E in the line's field.  The loop also carries a
hidden mechanical momentum p_h = (mu x E)/c, and in this geometry the force
equals the convective rate (v . grad)p_h at every point.  Two laws of motion
are offered:

* ``full``: m dv/dt = F - (v . grad)p_h, the corrected law.  The right side
  cancels identically, so the kinetic velocity never changes and a bouncing
  moment conserves its energy.
* ``naive-boyer``: m dv/dt = F alone.  Because the induced dipole flips with
  the velocity, the force keeps feeding energy to a moment bouncing between
  two mirrors, which is exactly the perpetual-motion absurdity the corrected
  law removes.

The phase accumulated by a moment carried around the line is computed as the
loop integral of the hidden momentum, (1/hbar) contour_integral p_h . dl.
That integral form is this artifact's definition (the underlying claim is
only that the local field at the moment is responsible for the phase); it
evaluates to 4*pi*mu*lambda/(hbar*c) per winding and is path independent at
fixed winding number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

from .errors import DomainError, NumericalError, SingularityError, ValidationError
from .quadrature import refine_gauss_legendre
from .units import PhysicalConstants, Vec3, Z_HAT, cross

FULL_LAW = "full"
NAIVE_LAW = "naive-boyer"
LAWS = (FULL_LAW, NAIVE_LAW)

# Positions closer than this to the line axis are treated as singular (cm).
AXIS_EPSILON = 1e-9

# Mirror-crossing events are located to this accuracy along the flight axis (cm).
MIRROR_LOCATE_TOL = 1e-12


def _check_law(law: str):
    if law not in LAWS:
        raise ValidationError(f"unknown law {law!r}; expected one of {LAWS}")


@dataclass(frozen=True, slots=True)
class LineCharge:
    """Infinite straight line of charge: density lambda_c (statC/cm), axis
    along +z through axis_point (only the z axis is supported in v1).
    Positions closer than axis_epsilon to the line are treated as singular."""

    lambda_c: float
    axis: Vec3 = Z_HAT
    axis_point: Vec3 = Vec3(0.0, 0.0, 0.0)
    axis_epsilon: float = AXIS_EPSILON

    def __post_init__(self):
        if not math.isfinite(self.lambda_c):
            raise ValidationError(f"lambda_c must be finite, got {self.lambda_c!r}")
        if abs(self.axis.norm() - 1.0) > 1e-12:
            raise ValidationError(f"axis must be a unit vector, got |axis| = {self.axis.norm()!r}")
        if (self.axis - Z_HAT).norm() > 1e-12:
            raise ValidationError("v1 supports only a line along +z")
        self.axis_point.require_finite("axis_point")
        if not (math.isfinite(self.axis_epsilon) and self.axis_epsilon > 0.0):
            raise ValidationError(f"axis_epsilon must be positive, got {self.axis_epsilon!r}")


@dataclass(frozen=True, slots=True)
class NeutronModel:
    """Current-loop model of the neutron: mass (g) and magnetic moment mu
    (erg/G), restricted in v1 to polarization along the line axis (+-z)."""

    mass: float
    mu: Vec3

    def __post_init__(self):
        if not (math.isfinite(self.mass) and self.mass > 0.0):
            raise ValidationError(f"mass must be positive, got {self.mass!r}")
        self.mu.require_finite("mu")
        transverse = math.hypot(self.mu.x, self.mu.y)
        if transverse > 1e-12 * self.mu.norm():
            raise ValidationError(
                "v1 requires mu parallel to the line axis (z); "
                f"got transverse component {transverse!r}"
            )


@dataclass(frozen=True, slots=True)
class TrajectoryState:
    """Integrator state: time t (s), position (cm), kinetic velocity (cm/s)."""

    t: float
    pos: Vec3
    vel: Vec3

    def __post_init__(self):
        self.pos.require_finite("pos")
        self.vel.require_finite("vel")


@dataclass(frozen=True, slots=True)
class BounceConfig:
    """Mirror planes perpendicular to the x flight axis at mirror_a and
    mirror_b (cm), number of reflections to simulate, RK4 step dt (s),
    and the law of motion."""

    mirror_a: float
    mirror_b: float
    n_bounces: int
    dt: float
    law: str = FULL_LAW

    def __post_init__(self):
        if self.mirror_a == self.mirror_b:
            raise ValidationError("mirror planes must be distinct")
        if self.n_bounces < 1:
            raise ValidationError(f"n_bounces must be >= 1, got {self.n_bounces!r}")
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValidationError(f"dt must be positive, got {self.dt!r}")
        _check_law(self.law)


def _radial(lc: LineCharge, pos: Vec3) -> tuple[float, float, float]:
    rx = pos.x - lc.axis_point.x
    ry = pos.y - lc.axis_point.y
    rho2 = rx * rx + ry * ry
    if rho2 < lc.axis_epsilon * lc.axis_epsilon:
        raise SingularityError(
            f"position ({pos.x!r}, {pos.y!r}) lies within {lc.axis_epsilon:g} cm of the charged line"
        )
    return rx, ry, rho2


def line_field(lc: LineCharge, pos: Vec3) -> Vec3:
    """Electric field 2*lambda_c/rho radially outward from the line (statV/cm)."""
    rx, ry, rho2 = _radial(lc, pos)
    s = 2.0 * lc.lambda_c / rho2
    return Vec3(s * rx, s * ry, 0.0)


def line_field_gradient(lc: LineCharge, pos: Vec3) -> tuple[Vec3, Vec3]:
    """Columns dE/dx and dE/dy of the field Jacobian (dE/dz vanishes)."""
    rx, ry, rho2 = _radial(lc, pos)
    pref = 2.0 * lc.lambda_c / (rho2 * rho2)
    x2 = rx * rx
    y2 = ry * ry
    xy = rx * ry
    dedx = Vec3(pref * (y2 - x2), pref * (-2.0 * xy), 0.0)
    dedy = Vec3(pref * (-2.0 * xy), pref * (x2 - y2), 0.0)
    return dedx, dedy


def induced_dipole(vel: Vec3, mu: Vec3, k: PhysicalConstants) -> Vec3:
    """Electric dipole (v x mu)/c induced on a moving magnetic moment."""
    return cross(vel, mu) * (1.0 / k.c)


def boyer_force(lc: LineCharge, pos: Vec3, vel: Vec3, mu: Vec3, k: PhysicalConstants) -> Vec3:
    """Gradient force (d . grad)E on the induced dipole (dyn)."""
    d = induced_dipole(vel, mu, k)
    dedx, dedy = line_field_gradient(lc, pos)
    return dedx * d.x + dedy * d.y  # dE/dz = 0


def hidden_momentum(lc: LineCharge, pos: Vec3, mu: Vec3, k: PhysicalConstants) -> Vec3:
    """Hidden mechanical momentum (mu x E)/c of a current loop in the line field."""
    return cross(mu, line_field(lc, pos)) * (1.0 / k.c)


def hidden_momentum_rate(
    lc: LineCharge, pos: Vec3, vel: Vec3, mu: Vec3, k: PhysicalConstants
) -> Vec3:
    """Convective rate (v . grad)[(mu x E)/c] along a trajectory through pos."""
    dedx, dedy = line_field_gradient(lc, pos)
    de_along = dedx * vel.x + dedy * vel.y  # dE/dz = 0
    return cross(mu, de_along) * (1.0 / k.c)


def _acceleration(
    lc: LineCharge, n: NeutronModel, pos: Vec3, vel: Vec3, law: str, k: PhysicalConstants
) -> Vec3:
    force = boyer_force(lc, pos, vel, n.mu, k)
    if law == NAIVE_LAW:
        return force * (1.0 / n.mass)
    rate = hidden_momentum_rate(lc, pos, vel, n.mu, k)
    return (force - rate) * (1.0 / n.mass)


def step_trajectory(
    lc: LineCharge,
    n: NeutronModel,
    state: TrajectoryState,
    dt: float,
    law: str,
    k: PhysicalConstants,
) -> TrajectoryState:
    """Advance one fixed RK4 step under the selected law.

    Any stage that reaches the axis neighbourhood raises SingularityError and
    the step is rejected (the input state is returned unchanged by virtue of
    never being mutated).
    """
    if not (dt > 0.0 and math.isfinite(dt)):
        raise DomainError(f"dt must be positive, got {dt!r}")
    _check_law(law)
    p0, v0 = state.pos, state.vel
    half = 0.5 * dt
    a1 = _acceleration(lc, n, p0, v0, law, k)
    p2 = p0 + v0 * half
    v2 = v0 + a1 * half
    a2 = _acceleration(lc, n, p2, v2, law, k)
    p3 = p0 + v2 * half
    v3 = v0 + a2 * half
    a3 = _acceleration(lc, n, p3, v3, law, k)
    p4 = p0 + v3 * dt
    v4 = v0 + a3 * dt
    a4 = _acceleration(lc, n, p4, v4, law, k)
    sixth = dt / 6.0
    pos = p0 + (v0 + (v2 + v3) * 2.0 + v4) * sixth
    vel = v0 + (a1 + (a2 + a3) * 2.0 + a4) * sixth
    _radial(lc, pos)  # reject steps that land inside the axis neighbourhood
    return TrajectoryState(state.t + dt, pos, vel)


def kinetic_energy(n: NeutronModel, state: TrajectoryState) -> float:
    return 0.5 * n.mass * state.vel.norm2()


@dataclass(frozen=True, slots=True)
class BounceSample:
    t: float
    pos: Vec3
    vel: Vec3
    kinetic_energy: float
    hidden_momentum: Vec3


@dataclass(frozen=True, slots=True)
class BounceResult:
    law: str
    samples: tuple[BounceSample, ...]
    bounce_times: tuple[float, ...]
    bounce_kinetic_energies: tuple[float, ...]
    work_per_leg: tuple[float, ...]
    ke_gain_per_leg: tuple[float, ...]

    @property
    def initial_kinetic_energy(self) -> float:
        return self.samples[0].kinetic_energy

    @property
    def final_kinetic_energy(self) -> float:
        return self.samples[-1].kinetic_energy

    @property
    def total_work(self) -> float:
        return sum(self.work_per_leg)


def _power(lc: LineCharge, n: NeutronModel, st: TrajectoryState, law: str, k: PhysicalConstants) -> float:
    # Rate of work of the net accelerating force under the selected law.
    return _acceleration(lc, n, st.pos, st.vel, law, k).dot(st.vel) * n.mass


def _work_over_substep(
    lc: LineCharge,
    n: NeutronModel,
    start: TrajectoryState,
    h: float,
    law: str,
    k: PhysicalConstants,
    end: TrajectoryState,
) -> float:
    # Simpson in time with an RK4 half-step midpoint; O(h^4) globally, and a
    # route to the energy gain independent of the kinetic-energy bookkeeping.
    mid = step_trajectory(lc, n, start, 0.5 * h, law, k)
    return (
        h
        / 6.0
        * (
            _power(lc, n, start, law, k)
            + 4.0 * _power(lc, n, mid, law, k)
            + _power(lc, n, end, law, k)
        )
    )


def _locate_crossing(
    lc: LineCharge,
    n: NeutronModel,
    start: TrajectoryState,
    dt: float,
    plane: float,
    inside_sign: float,
    law: str,
    k: PhysicalConstants,
) -> tuple[float, TrajectoryState]:
    # Bisect the substep length until the endpoint sits on the mirror plane.
    lo, hi = 0.0, dt
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        candidate = step_trajectory(lc, n, start, mid, law, k)
        offset = candidate.pos.x - plane
        if abs(offset) <= MIRROR_LOCATE_TOL:
            return mid, candidate
        if offset * inside_sign > 0.0:  # still inside the cavity
            lo = mid
        else:
            hi = mid
    raise NumericalError(
        f"mirror crossing at x = {plane!r} could not be localized to {MIRROR_LOCATE_TOL:g} cm"
    )


def simulate_bounce_experiment(
    lc: LineCharge,
    n: NeutronModel,
    cfg: BounceConfig,
    initial: TrajectoryState,
    k: PhysicalConstants,
) -> BounceResult:
    """Bounce a polarized moment between two elastic mirrors near the line.

    Mirrors are planes perpendicular to the x axis; an elastic reflection
    flips the x velocity component (the hidden momentum depends only on
    position, so it is continuous across a bounce).  The returned series
    samples every step and every reflection; per-leg work integrals of the
    net force are accumulated with a Simpson rule as an independent oracle
    for the kinetic-energy change.
    """
    lo_mirror, hi_mirror = sorted((cfg.mirror_a, cfg.mirror_b))
    if not (lo_mirror <= initial.pos.x <= hi_mirror):
        raise ValidationError(
            f"initial position x = {initial.pos.x!r} lies outside the mirrors "
            f"[{lo_mirror!r}, {hi_mirror!r}]"
        )
    if initial.vel.x == 0.0:
        raise ValidationError("initial velocity needs a component along the flight (x) axis")
    center = 0.5 * (lo_mirror + hi_mirror)

    state = initial
    samples = [
        BounceSample(
            state.t, state.pos, state.vel, kinetic_energy(n, state), hidden_momentum(lc, state.pos, n.mu, k)
        )
    ]
    bounce_times: list[float] = []
    bounce_kes: list[float] = []
    work_per_leg: list[float] = []
    gain_per_leg: list[float] = []
    leg_work = 0.0
    leg_ke_start = kinetic_energy(n, state)

    while len(bounce_times) < cfg.n_bounces:
        nxt = step_trajectory(lc, n, state, cfg.dt, cfg.law, k)
        if nxt.pos.x > hi_mirror:
            plane = hi_mirror
        elif nxt.pos.x < lo_mirror:
            plane = lo_mirror
        else:
            plane = None
        if plane is None:
            leg_work += _work_over_substep(lc, n, state, cfg.dt, cfg.law, k, nxt)
            state = nxt
        else:
            inside_sign = math.copysign(1.0, center - plane)
            h_hit, hit = _locate_crossing(lc, n, state, cfg.dt, plane, inside_sign, cfg.law, k)
            leg_work += _work_over_substep(lc, n, state, h_hit, cfg.law, k, hit)
            state = TrajectoryState(hit.t, hit.pos, Vec3(-hit.vel.x, hit.vel.y, hit.vel.z))
            ke_now = kinetic_energy(n, state)
            bounce_times.append(state.t)
            bounce_kes.append(ke_now)
            work_per_leg.append(leg_work)
            gain_per_leg.append(ke_now - leg_ke_start)
            leg_work = 0.0
            leg_ke_start = ke_now
        samples.append(
            BounceSample(
                state.t,
                state.pos,
                state.vel,
                kinetic_energy(n, state),
                hidden_momentum(lc, state.pos, n.mu, k),
            )
        )
    return BounceResult(
        law=cfg.law,
        samples=tuple(samples),
        bounce_times=tuple(bounce_times),
        bounce_kinetic_energies=tuple(bounce_kes),
        work_per_leg=tuple(work_per_leg),
        ke_gain_per_leg=tuple(gain_per_leg),
    )


@dataclass(frozen=True, slots=True)
class CircleLoop:
    """Counterclockwise circle of given radius in the plane z = center.z."""

    center: Vec3
    radius: float

    def __post_init__(self):
        self.center.require_finite("center")
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValidationError(f"radius must be positive, got {self.radius!r}")


@dataclass(frozen=True, slots=True)
class PolylineLoop:
    """Closed polyline; the last vertex must repeat the first."""

    vertices: tuple[Vec3, ...]

    def __post_init__(self):
        if len(self.vertices) < 4:
            raise ValidationError("a closed polyline needs at least 3 distinct vertices")
        for v in self.vertices:
            v.require_finite("vertex")
        scale = max(1.0, max(abs(c) for v in self.vertices for c in v.as_tuple()))
        if (self.vertices[0] - self.vertices[-1]).norm() > 1e-12 * scale:
            raise DomainError("open path: polyline must end at its starting vertex")


LoopPath = Union[CircleLoop, PolylineLoop]


def _loop_segments(loop: LoopPath) -> list[tuple[Callable[[float], Vec3], Callable[[float], Vec3]]]:
    """Parametrized (point(t), tangent(t)) pairs, each over t in [0, 1]."""
    if isinstance(loop, CircleLoop):
        cx, cy, cz, rad = loop.center.x, loop.center.y, loop.center.z, loop.radius
        two_pi = 2.0 * math.pi

        def point(t: float) -> Vec3:
            ang = two_pi * t
            return Vec3(cx + rad * math.cos(ang), cy + rad * math.sin(ang), cz)

        def tangent(t: float) -> Vec3:
            ang = two_pi * t
            return Vec3(-rad * two_pi * math.sin(ang), rad * two_pi * math.cos(ang), 0.0)

        return [(point, tangent)]
    if isinstance(loop, PolylineLoop):
        segments = []
        for a, b in zip(loop.vertices, loop.vertices[1:]):
            delta = b - a

            def point(t: float, a=a, delta=delta) -> Vec3:
                return a + delta * t

            def tangent(t: float, delta=delta) -> Vec3:
                return delta

            segments.append((point, tangent))
        return segments
    raise ValidationError(f"unsupported loop path {loop!r}")


def _point_segment_clearance(a: Vec3, b: Vec3, px: float, py: float) -> float:
    # distance in the x-y plane from (px, py) to the segment [a, b]
    ax, ay = a.x - px, a.y - py
    bx, by = b.x - px, b.y - py
    dx, dy = bx - ax, by - ay
    len2 = dx * dx + dy * dy
    if len2 == 0.0:
        return math.hypot(ax, ay)
    t = min(1.0, max(0.0, -(ax * dx + ay * dy) / len2))
    return math.hypot(ax + t * dx, ay + t * dy)


def path_axis_clearance(loop: LoopPath, lc: LineCharge) -> float:
    """Minimum distance from the loop to the charged line (in the x-y plane)."""
    px, py = lc.axis_point.x, lc.axis_point.y
    if isinstance(loop, CircleLoop):
        return abs(math.hypot(loop.center.x - px, loop.center.y - py) - loop.radius)
    return min(
        _point_segment_clearance(a, b, px, py)
        for a, b in zip(loop.vertices, loop.vertices[1:])
    )


def ac_phase(
    lc: LineCharge,
    mu: Vec3,
    loop: LoopPath,
    k: PhysicalConstants,
    rel_tol: float = 1e-10,
) -> float:
    """Phase (1/hbar) contour_integral (mu x E)/c . dl around a closed path.

    Evaluated per segment by panel-doubling composite Gauss-Legendre to
    rel_tol, with an absolute floor tied to the integrand magnitude so loops
    that enclose no charge (integral zero by symmetry) still converge.
    """
    clearance = path_axis_clearance(loop, lc)
    if clearance < lc.axis_epsilon:
        raise SingularityError(
            f"loop path comes within {clearance:.3e} cm of the charged line "
            f"(minimum clearance {lc.axis_epsilon:g} cm)"
        )
    segments = _loop_segments(loop)

    def integrand_for(point, tangent):
        def f(t: float) -> float:
            return hidden_momentum(lc, point(t), mu, k).dot(tangent(t))

        return f

    # Natural zero scale: peak |p_h| x loop scale, probed on a coarse grid.
    probe = 0.0
    for point, tangent in segments:
        for i in range(8):
            t = (i + 0.5) / 8.0
            probe = max(probe, abs(hidden_momentum(lc, point(t), mu, k).dot(tangent(t))))
    abs_floor = rel_tol * probe * 1e-3

    total = 0.0
    for point, tangent in segments:
        total += refine_gauss_legendre(
            integrand_for(point, tangent), 0.0, 1.0, rel_tol=rel_tol, abs_floor=abs_floor
        )
    return total / k.hbar


def ac_phase_enclosed_value(lc: LineCharge, mu: Vec3, k: PhysicalConstants, winding: int = 1) -> float:
    """Analytic per-winding value 4*pi*mu_z*lambda_c/(hbar*c) of the loop phase."""
    return winding * 4.0 * math.pi * mu.z * lc.lambda_c / (k.hbar * k.c)


def loop_winding_number(loop: LoopPath, lc: LineCharge) -> int:
    """Winding number of the loop around the charged line."""
    if isinstance(loop, CircleLoop):
        offset = math.hypot(
            loop.center.x - lc.axis_point.x, loop.center.y - lc.axis_point.y
        )
        return 1 if offset < loop.radius else 0
    total = 0.0
    for a, b in zip(loop.vertices, loop.vertices[1:]):
        ang_a = math.atan2(a.y - lc.axis_point.y, a.x - lc.axis_point.x)
        ang_b = math.atan2(b.y - lc.axis_point.y, b.x - lc.axis_point.x)
        delta = ang_b - ang_a
        while delta > math.pi:
            delta -= 2.0 * math.pi
        while delta < -math.pi:
            delta += 2.0 * math.pi
        total += delta
    return round(total / (2.0 * math.pi))
