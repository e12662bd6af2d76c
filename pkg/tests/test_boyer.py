import math

import numpy as np
import pytest

from abclab import (
    BounceConfig,
    CircleLoop,
    DomainError,
    FULL_LAW,
    LineCharge,
    NAIVE_LAW,
    NeutronModel,
    PolylineLoop,
    SingularityError,
    TrajectoryState,
    ValidationError,
    Vec3,
    ac_phase,
    ac_phase_enclosed_value,
    boyer_force,
    hidden_momentum,
    hidden_momentum_rate,
    induced_dipole,
    kinetic_energy,
    line_field,
    loop_winding_number,
    make_constants,
    simulate_bounce_experiment,
    step_trajectory,
)

K1 = make_constants("scaled-unity")
LINE = LineCharge(lambda_c=1.0)
MU_Z = Vec3(0.0, 0.0, 1.0)
NEUTRON = NeutronModel(mass=1.0, mu=MU_Z)


def test_line_field_unit_distance():
    assert line_field(LINE, Vec3(1.0, 0.0, 0.0)) == Vec3(2.0, 0.0, 0.0)


def test_line_field_zero_charge():
    assert line_field(LineCharge(lambda_c=0.0), Vec3(0.3, -0.4, 2.0)) == Vec3(0.0, 0.0, 0.0)


def test_line_field_inverse_distance():
    near = line_field(LINE, Vec3(1.0, 0.0, 0.0)).norm()
    far = line_field(LINE, Vec3(2.0, 0.0, 0.0)).norm()
    assert far == pytest.approx(near / 2.0, rel=1e-15)


def test_line_field_off_origin_axis_point():
    shifted = LineCharge(lambda_c=1.0, axis_point=Vec3(3.0, 0.0, 0.0))
    assert shifted.axis_point.x == 3.0
    assert line_field(shifted, Vec3(4.0, 0.0, 0.0)) == Vec3(2.0, 0.0, 0.0)


def test_line_field_singularity():
    with pytest.raises(SingularityError):
        line_field(LINE, Vec3(0.0, 0.0, 5.0))
    with pytest.raises(SingularityError):
        line_field(LINE, Vec3(1e-10, 0.0, 0.0))


def test_line_charge_validation():
    with pytest.raises(ValidationError):
        LineCharge(lambda_c=1.0, axis=Vec3(0.0, 0.0, 2.0))
    with pytest.raises(ValidationError):
        LineCharge(lambda_c=1.0, axis=Vec3(1.0, 0.0, 0.0))  # v1: z axis only


def test_neutron_model_validation():
    with pytest.raises(ValidationError):
        NeutronModel(mass=0.0, mu=MU_Z)
    with pytest.raises(ValidationError):
        NeutronModel(mass=1.0, mu=Vec3(0.5, 0.0, 1.0))  # v1: polarization along z


def test_induced_dipole_static():
    assert induced_dipole(Vec3(0.0, 0.0, 0.0), MU_Z, K1) == Vec3(0.0, 0.0, 0.0)


def test_induced_dipole_x_cross_z():
    assert induced_dipole(Vec3(5.0, 0.0, 0.0), MU_Z, K1) == Vec3(0.0, -5.0, 0.0)


def test_induced_dipole_flips_with_velocity():
    d_fwd = induced_dipole(Vec3(2.0, -1.0, 0.0), MU_Z, K1)
    d_back = induced_dipole(Vec3(-2.0, 1.0, 0.0), MU_Z, K1)
    assert d_back == -d_fwd


def test_boyer_force_closed_form_anchor():
    force = boyer_force(LINE, Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0), MU_Z, K1)
    assert force.x == pytest.approx(-2.0, rel=1e-15)
    assert abs(force.y) <= 1e-15 and force.z == 0.0


def test_boyer_force_zero_velocity():
    assert boyer_force(LINE, Vec3(1.0, 2.0, 0.0), Vec3(0.0, 0.0, 0.0), MU_Z, K1) == Vec3(0.0, 0.0, 0.0)


def test_boyer_force_accelerates_in_bounce_orientation():
    # approach along the flight line offset from the charged line: the force
    # has a positive component along the velocity, and reversing the velocity
    # (which reverses the induced dipole too) keeps the power positive
    pos, vel = Vec3(3.0, 0.5, 0.0), Vec3(-2.0, 0.0, 0.0)
    assert boyer_force(LINE, pos, vel, MU_Z, K1).dot(vel) > 0.0
    back = Vec3(2.0, 0.0, 0.0)
    assert boyer_force(LINE, pos, back, MU_Z, K1).dot(back) > 0.0


def test_boyer_force_radial_power_vanishes():
    # head-on radial motion: the induced dipole is azimuthal and the force is
    # exactly perpendicular to the velocity
    vel = Vec3(-1.0, 0.0, 0.0)
    force = boyer_force(LINE, Vec3(2.0, 0.0, 0.0), vel, MU_Z, K1)
    assert force.dot(vel) == 0.0
    assert force.y > 0.0


def _fd_force(lc, pos, vel, mu, k, h):
    d = induced_dipole(vel, mu, k)
    dedx = (line_field(lc, Vec3(pos.x + h, pos.y, pos.z)) - line_field(lc, Vec3(pos.x - h, pos.y, pos.z))) * (
        1.0 / (2.0 * h)
    )
    dedy = (line_field(lc, Vec3(pos.x, pos.y + h, pos.z)) - line_field(lc, Vec3(pos.x, pos.y - h, pos.z))) * (
        1.0 / (2.0 * h)
    )
    return dedx * d.x + dedy * d.y


def test_boyer_force_matches_finite_differences():
    pos, vel = Vec3(1.1, 0.7, 0.0), Vec3(0.8, -0.5, 0.0)
    exact = boyer_force(LINE, pos, vel, MU_Z, K1)
    errors = [(_fd_force(LINE, pos, vel, MU_Z, K1, h) - exact).norm() for h in (0.04, 0.02, 0.01)]
    orders = [math.log2(a / b) for a, b in zip(errors, errors[1:])]
    # second order up to the O(h^2) width of the order estimate itself
    assert min(orders) >= 1.99
    rich = (_fd_force(LINE, pos, vel, MU_Z, K1, 0.01) * 4.0 - _fd_force(LINE, pos, vel, MU_Z, K1, 0.02)) * (
        1.0 / 3.0
    )
    assert (rich - exact).norm() <= 1e-7 * exact.norm()


def test_hidden_momentum_anchor():
    assert hidden_momentum(LINE, Vec3(1.0, 0.0, 0.0), MU_Z, K1) == Vec3(0.0, 2.0, 0.0)


def test_hidden_momentum_zero_moment():
    assert hidden_momentum(LINE, Vec3(1.0, 0.0, 0.0), Vec3(0.0, 0.0, 0.0), K1) == Vec3(0.0, 0.0, 0.0)


def test_hidden_momentum_magnitude_azimuth_independent():
    # |p_h| = 2 mu lambda / (c rho) around the line
    rho = 1.7
    for angle in (0.0, 0.9, 2.3, 4.0):
        pos = Vec3(rho * math.cos(angle), rho * math.sin(angle), 0.0)
        assert hidden_momentum(LINE, pos, MU_Z, K1).norm() == pytest.approx(2.0 / rho, rel=1e-14)


def test_momentum_rate_equals_force_anchor():
    pos, vel = Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0)
    rate = hidden_momentum_rate(LINE, pos, vel, MU_Z, K1)
    force = boyer_force(LINE, pos, vel, MU_Z, K1)
    assert rate.x == pytest.approx(-2.0, rel=1e-15)
    assert (rate - force).norm() <= 1e-15


def test_momentum_rate_zero_velocity():
    assert hidden_momentum_rate(LINE, Vec3(0.5, 0.5, 0.0), Vec3(0.0, 0.0, 0.0), MU_Z, K1) == Vec3(
        0.0, 0.0, 0.0
    )


def test_momentum_rate_matches_directional_finite_difference():
    pos, vel = Vec3(0.9, -1.3, 0.0), Vec3(0.6, 0.4, 0.0)
    exact = hidden_momentum_rate(LINE, pos, vel, MU_Z, K1)
    errors = []
    for h in (0.02, 0.01, 0.005):
        ahead = hidden_momentum(LINE, pos + vel * h, MU_Z, K1)
        behind = hidden_momentum(LINE, pos - vel * h, MU_Z, K1)
        errors.append(((ahead - behind) * (1.0 / (2.0 * h)) - exact).norm())
    orders = [math.log2(a / b) for a, b in zip(errors, errors[1:])]
    assert min(orders) >= 1.99


def test_force_equals_momentum_rate_randomized():
    rng = np.random.default_rng(23)
    for _ in range(1000):
        rho = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        angle = float(rng.uniform(0.0, 2.0 * math.pi))
        pos = Vec3(rho * math.cos(angle), rho * math.sin(angle), float(rng.uniform(-1, 1)))
        vel = Vec3(float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3)), 0.0)
        force = boyer_force(LINE, pos, vel, MU_Z, K1)
        rate = hidden_momentum_rate(LINE, pos, vel, MU_Z, K1)
        diff = force - rate
        assert max(abs(diff.x), abs(diff.y), abs(diff.z)) <= 1e-10 * max(force.norm(), 1e-300)


def test_full_law_preserves_speed_over_many_steps():
    state = TrajectoryState(t=0.0, pos=Vec3(2.5, 0.8, 0.0), vel=Vec3(-1.2, 0.7, 0.0))
    speed0 = state.vel.norm()
    for _ in range(10_000):
        state = step_trajectory(LINE, NEUTRON, state, 1e-3, FULL_LAW, K1)
    assert abs(state.vel.norm() / speed0 - 1.0) < 1e-8


def test_naive_law_speeds_up_during_approach():
    # Fig-geometry orientation: every step gains speed while closing in
    state = TrajectoryState(t=0.0, pos=Vec3(3.0, 0.5, 0.0), vel=Vec3(-2.0, 0.0, 0.0))
    speed = state.vel.norm()
    for _ in range(200):
        state = step_trajectory(LINE, NEUTRON, state, 1e-3, NAIVE_LAW, K1)
        assert state.vel.norm() > speed
        speed = state.vel.norm()


def test_naive_law_speeds_up_from_pure_radial_start():
    # even head on, the growing azimuthal velocity makes each full step gain
    state = TrajectoryState(t=0.0, pos=Vec3(2.0, 0.0, 0.0), vel=Vec3(-1.0, 0.0, 0.0))
    speed = state.vel.norm()
    for _ in range(100):
        state = step_trajectory(LINE, NEUTRON, state, 1e-2, NAIVE_LAW, K1)
        assert state.vel.norm() > speed
        speed = state.vel.norm()


def test_zero_charge_trajectories_agree_between_laws():
    empty = LineCharge(lambda_c=0.0)
    full = TrajectoryState(t=0.0, pos=Vec3(2.0, 0.5, 0.0), vel=Vec3(-1.0, 0.4, 0.0))
    naive = full
    for _ in range(500):
        full = step_trajectory(empty, NEUTRON, full, 1e-2, FULL_LAW, K1)
        naive = step_trajectory(empty, NEUTRON, naive, 1e-2, NAIVE_LAW, K1)
        assert (full.pos - naive.pos).norm() <= 1e-12


def test_step_rejected_on_axis_entry():
    # a stage evaluation inside the axis neighbourhood rejects the whole step
    state = TrajectoryState(t=0.0, pos=Vec3(2e-9, 0.0, 0.0), vel=Vec3(-1.0, 0.0, 0.0))
    with pytest.raises(SingularityError):
        step_trajectory(LINE, NEUTRON, state, 4e-9, FULL_LAW, K1)


def test_step_validates_inputs():
    state = TrajectoryState(t=0.0, pos=Vec3(1.0, 0.0, 0.0), vel=Vec3(1.0, 0.0, 0.0))
    with pytest.raises(DomainError):
        step_trajectory(LINE, NEUTRON, state, 0.0, FULL_LAW, K1)
    with pytest.raises(ValidationError):
        step_trajectory(LINE, NEUTRON, state, 0.1, "symplectic", K1)


BOUNCE_LINE = LineCharge(lambda_c=0.05)
BOUNCE_START = TrajectoryState(t=0.0, pos=Vec3(3.0, 0.5, 0.0), vel=Vec3(-2.0, 0.0, 0.0))


def bounce(law, n_bounces=10, dt=1.0 / 256.0, lc=BOUNCE_LINE, start=BOUNCE_START):
    cfg = BounceConfig(mirror_a=1.5, mirror_b=3.0, n_bounces=n_bounces, dt=dt, law=law)
    return simulate_bounce_experiment(lc, NEUTRON, cfg, start, K1)


def test_bounce_config_validation():
    with pytest.raises(ValidationError):
        BounceConfig(mirror_a=1.0, mirror_b=1.0, n_bounces=3, dt=0.1)
    with pytest.raises(ValidationError):
        BounceConfig(mirror_a=1.0, mirror_b=2.0, n_bounces=0, dt=0.1)
    with pytest.raises(ValidationError):
        BounceConfig(mirror_a=1.0, mirror_b=2.0, n_bounces=3, dt=-0.1)


def test_bounce_requires_start_between_mirrors():
    cfg = BounceConfig(mirror_a=1.5, mirror_b=3.0, n_bounces=1, dt=0.01)
    outside = TrajectoryState(t=0.0, pos=Vec3(5.0, 0.5, 0.0), vel=Vec3(-1.0, 0.0, 0.0))
    with pytest.raises(ValidationError):
        simulate_bounce_experiment(BOUNCE_LINE, NEUTRON, cfg, outside, K1)


def test_free_particle_bounce_period():
    # lambda_c = 0: exact constant kinetic energy, round trip 2*gap/|v|
    start = TrajectoryState(t=0.0, pos=Vec3(2.0, 0.5, 0.0), vel=Vec3(-1.5, 0.0, 0.0))
    result = bounce(FULL_LAW, n_bounces=5, dt=0.01, lc=LineCharge(lambda_c=0.0), start=start)
    kes = {s.kinetic_energy for s in result.samples}
    assert kes == {result.initial_kinetic_energy}
    round_trip = result.bounce_times[2] - result.bounce_times[0]
    assert round_trip == pytest.approx(2.0 * 1.5 / 1.5, abs=1e-10)


def test_full_law_conserves_bounce_energy():
    result = bounce(FULL_LAW)
    assert abs(result.final_kinetic_energy / result.initial_kinetic_energy - 1.0) < 1e-6


def test_naive_law_energy_strictly_grows():
    result = bounce(NAIVE_LAW)
    kes = [result.initial_kinetic_energy, *result.bounce_kinetic_energies]
    assert len(result.bounce_kinetic_energies) == 10
    assert all(b > a for a, b in zip(kes, kes[1:]))


def test_naive_law_gain_matches_work_integral():
    result = bounce(NAIVE_LAW)
    for gain, work in zip(result.ke_gain_per_leg, result.work_per_leg):
        assert abs(gain / work - 1.0) < 1e-6


def test_bounce_samples_carry_hidden_momentum():
    result = bounce(FULL_LAW, n_bounces=2)
    sample = result.samples[10]
    expected = hidden_momentum(BOUNCE_LINE, sample.pos, MU_Z, K1)
    assert (sample.hidden_momentum - expected).norm() == 0.0
    assert sample.kinetic_energy == pytest.approx(
        kinetic_energy(NEUTRON, TrajectoryState(sample.t, sample.pos, sample.vel))
    )


def test_ac_phase_circle_analytic_value():
    expected = ac_phase_enclosed_value(LINE, MU_Z, K1)
    assert expected == pytest.approx(4.0 * math.pi, rel=1e-15)
    for radius in (0.8, 2.5):
        loop = CircleLoop(center=Vec3(0.0, 0.0, 0.0), radius=radius)
        assert ac_phase(LINE, MU_Z, loop, K1) == pytest.approx(expected, rel=1e-9)


def test_ac_phase_non_enclosing_loop_vanishes():
    loop = CircleLoop(center=Vec3(5.0, 0.0, 0.0), radius=1.0)
    assert abs(ac_phase(LINE, MU_Z, loop, K1)) <= 1e-10


def test_ac_phase_zero_charge():
    loop = CircleLoop(center=Vec3(0.0, 0.0, 0.0), radius=1.0)
    assert ac_phase(LineCharge(lambda_c=0.0), MU_Z, loop, K1) == 0.0


def test_ac_phase_deformation_invariance():
    off_center = CircleLoop(center=Vec3(0.3, -0.2, 0.0), radius=1.5)
    square = PolylineLoop(
        (
            Vec3(1.2, 1.2, 0.0),
            Vec3(-1.2, 1.2, 0.0),
            Vec3(-1.2, -1.2, 0.0),
            Vec3(1.2, -1.2, 0.0),
            Vec3(1.2, 1.2, 0.0),
        )
    )
    a = ac_phase(LINE, MU_Z, off_center, K1)
    b = ac_phase(LINE, MU_Z, square, K1)
    assert abs(a / b - 1.0) < 1e-9


def test_ac_phase_linear_in_moment_and_charge():
    loop = CircleLoop(center=Vec3(0.0, 0.0, 0.0), radius=1.0)
    base = ac_phase(LINE, MU_Z, loop, K1)
    assert ac_phase(LineCharge(lambda_c=3.0), MU_Z, loop, K1) == pytest.approx(3.0 * base, rel=1e-10)
    assert ac_phase(LINE, Vec3(0.0, 0.0, 2.0), loop, K1) == pytest.approx(2.0 * base, rel=1e-10)


def test_ac_phase_open_path_rejected():
    with pytest.raises(DomainError):
        PolylineLoop((Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0), Vec3(-1.0, 0.0, 0.0), Vec3(0.0, -1.0, 0.0)))


def test_ac_phase_path_through_axis_rejected():
    square_through_origin = PolylineLoop(
        (
            Vec3(1.0, 0.0, 0.0),
            Vec3(0.0, 0.0, 0.0) + Vec3(0.0, 1e-12, 0.0),
            Vec3(-1.0, 0.0, 0.0),
            Vec3(0.0, -1.0, 0.0),
            Vec3(1.0, 0.0, 0.0),
        )
    )
    with pytest.raises(SingularityError):
        ac_phase(LINE, MU_Z, square_through_origin, K1)


def test_loop_winding_numbers():
    assert loop_winding_number(CircleLoop(center=Vec3(0.0, 0.0, 0.0), radius=1.0), LINE) == 1
    assert loop_winding_number(CircleLoop(center=Vec3(5.0, 0.0, 0.0), radius=1.0), LINE) == 0
    square = PolylineLoop(
        (
            Vec3(1.0, 1.0, 0.0),
            Vec3(-1.0, 1.0, 0.0),
            Vec3(-1.0, -1.0, 0.0),
            Vec3(1.0, -1.0, 0.0),
            Vec3(1.0, 1.0, 0.0),
        )
    )
    assert loop_winding_number(square, LINE) == 1
    reversed_square = PolylineLoop(tuple(reversed(square.vertices)))
    assert loop_winding_number(reversed_square, LINE) == -1
