import numpy as np
import pytest

from coaxvane.actuation import ActuatorCommand, BodyWrench, VehicleParams
from coaxvane.dynamics import (
    RigidBodyState,
    SimConfig,
    StepCommand,
    integrate_constant_wrench,
    simulate,
    state_derivative,
    step,
)
from coaxvane.errors import AllocationError, DivergenceError
from coaxvane.so3 import exp_so3, is_rotation

ZERO_WRENCH = BodyWrench(np.zeros(3), np.zeros(3))


@pytest.fixture
def params():
    return VehicleParams()


def tumbling_state(omega=(1.0, -0.5, 0.8)):
    s = RigidBodyState.at_rest()
    s.omega = np.array(omega)
    return s


class TestStateDerivative:
    def test_hover_equilibrium(self, params):
        s = RigidBodyState.at_rest()
        d = state_derivative(s, BodyWrench.hover(params), params)
        assert np.allclose(d.dvel, 0.0, atol=1e-14)
        assert np.array_equal(d.domega, np.zeros(3))

    def test_free_fall_acceleration(self, params):
        d = state_derivative(RigidBodyState.at_rest(), ZERO_WRENCH, params)
        assert np.allclose(d.dvel, [0.0, 0.0, -9.81])

    def test_principal_axis_spin_is_torque_free_equilibrium(self, params):
        for axis in range(3):
            s = RigidBodyState.at_rest()
            s.omega = np.zeros(3)
            s.omega[axis] = 2.0
            d = state_derivative(s, ZERO_WRENCH, params)
            assert np.allclose(d.domega, 0.0, atol=1e-15)

    def test_attitude_kinematics(self, params):
        s = RigidBodyState.at_rest()
        s.R = exp_so3(np.array([0.2, -0.1, 0.4]))
        s.omega = np.array([0.3, 0.2, -0.5])
        d = state_derivative(s, ZERO_WRENCH, params)
        from coaxvane.so3 import hat

        assert np.allclose(d.dR, s.R @ hat(s.omega))

    def test_velocity_passthrough(self, params):
        s = RigidBodyState.at_rest()
        s.vel = np.array([1.0, 2.0, 3.0])
        d = state_derivative(s, ZERO_WRENCH, params)
        assert np.array_equal(d.dpos, s.vel)


class TestStep:
    def test_hover_equilibrium_preserved(self, params):
        s = integrate_constant_wrench(
            RigidBodyState.at_rest(), BodyWrench.hover(params), params,
            dt=1e-3, n_steps=10_000, renorm_interval=100,
        )
        assert np.linalg.norm(s.pos) < 1e-6

    def test_free_fall_closed_form(self, params):
        s = integrate_constant_wrench(
            RigidBodyState.at_rest(), ZERO_WRENCH, params, dt=1e-3, n_steps=1000
        )
        assert s.pos[2] == pytest.approx(-0.5 * 9.81, abs=1e-6)
        assert s.vel[2] == pytest.approx(-9.81, abs=1e-9)

    def test_fourth_order_orientation_convergence(self, params):
        # torque-free tumble; Frobenius orientation error vs a dt/10 run
        def final_rotation(dt, duration=2.0):
            return integrate_constant_wrench(
                tumbling_state((2.0, -1.2, 1.5)), ZERO_WRENCH, params,
                dt=dt, n_steps=round(duration / dt),
            ).R

        for base_dt in (0.02, 0.01):
            ref = final_rotation(base_dt / 10.0)
            e_coarse = np.linalg.norm(final_rotation(base_dt) - ref)
            e_fine = np.linalg.norm(final_rotation(base_dt / 2.0) - ref)
            assert 12.0 < e_coarse / e_fine < 20.0

    def test_constant_body_rate_is_exact(self, params):
        # spherical inertia: omega stays constant, exponential update is exact
        p = VehicleParams(inertia=np.eye(3) * 5e-3)
        omega = np.array([0.7, -0.3, 1.1])
        s = integrate_constant_wrench(
            tumbling_state(omega), ZERO_WRENCH, p, dt=0.05, n_steps=100
        )
        assert np.linalg.norm(s.R - exp_so3(omega * 5.0)) < 1e-12

    def test_energy_and_momentum_conservation(self, params):
        s0 = tumbling_state()
        j = params.inertia
        energy0 = 0.5 * s0.omega @ j @ s0.omega
        momentum0 = s0.R @ (j @ s0.omega)
        s = integrate_constant_wrench(
            s0, ZERO_WRENCH, params, dt=1e-3, n_steps=10_000, renorm_interval=100
        )
        energy = 0.5 * s.omega @ j @ s.omega
        momentum = s.R @ (j @ s.omega)
        assert abs(energy - energy0) / energy0 < 1e-8
        assert np.linalg.norm(momentum - momentum0) / np.linalg.norm(momentum0) < 1e-8

    def test_orthonormality_drift_between_projections(self, params):
        s = integrate_constant_wrench(
            tumbling_state((3.0, 2.0, -1.0)), ZERO_WRENCH, params,
            dt=1e-3, n_steps=100,  # one renorm interval, no projection applied
        )
        assert np.linalg.norm(s.R.T @ s.R - np.eye(3)) < 1e-9
        assert is_rotation(s.R, tol=1e-9)

    def test_horizontal_momentum_exactly_conserved(self, params):
        s0 = RigidBodyState.at_rest()
        s0.vel = np.array([0.8, -0.6, 0.0])
        s0.omega = np.array([0.5, 0.5, 0.5])
        s = integrate_constant_wrench(s0, ZERO_WRENCH, params, dt=1e-3, n_steps=5000)
        assert s.vel[0] == s0.vel[0]
        assert s.vel[1] == s0.vel[1]

    def test_nonfinite_wrench_raises(self, params):
        bad = BodyWrench(np.array([np.nan, 0.0, 0.0]), np.zeros(3))
        with pytest.raises(DivergenceError):
            step(RigidBodyState.at_rest(), bad, params, 1e-3)

    def test_rejects_nonpositive_dt(self, params):
        with pytest.raises(ValueError):
            step(RigidBodyState.at_rest(), ZERO_WRENCH, params, 0.0)


class TestSimConfig:
    def test_defaults(self):
        cfg = SimConfig()
        assert cfg.steps_per_control == 2

    def test_rejects_dt_above_period(self):
        with pytest.raises(ValueError):
            SimConfig(dt=4e-3, controller_period=2e-3)

    def test_rejects_non_multiple_period(self):
        with pytest.raises(ValueError, match="multiple"):
            SimConfig(dt=1e-3, controller_period=2.5e-3)

    def test_rejects_bad_renorm(self):
        with pytest.raises(ValueError):
            SimConfig(renorm_interval=0)


class TestSimulate:
    def test_log_length_bookkeeping(self, params):
        hover = BodyWrench.hover(params)
        from coaxvane.actuation import mix

        command = mix(hover, params)
        controller = lambda t, s: StepCommand(command)  # noqa: E731
        cfg = SimConfig(dt=1e-3, duration=1.0, controller_period=2e-3)
        log = simulate(RigidBodyState.at_rest(), controller, cfg, params)
        assert len(log) == round(1.0 / 2e-3) + 1
        assert log.t[0] == 0.0
        assert log.t[-1] == pytest.approx(1.0)

    def test_hover_controller_stays_put(self, params):
        from coaxvane.actuation import mix

        command = mix(BodyWrench.hover(params), params)
        controller = lambda t, s: StepCommand(command)  # noqa: E731
        cfg = SimConfig(dt=1e-3, duration=30.0, controller_period=2e-3)
        log = simulate(RigidBodyState.at_rest(), controller, cfg, params)
        assert np.max(np.linalg.norm(log.pos, axis=1)) < 1e-3

    def test_invalid_thrust_halts_with_timestamp(self, params):
        def controller(t, s):
            f = -1.0 if t >= 0.01 else 4.66956
            return StepCommand(ActuatorCommand(f, 4.66956, 0, 0, 0, 0))

        cfg = SimConfig(dt=1e-3, duration=1.0, controller_period=2e-3)
        with pytest.raises(AllocationError, match="t = 0.01 s"):
            simulate(RigidBodyState.at_rest(), controller, cfg, params)

    def test_controller_error_is_timestamped(self, params):
        def controller(t, s):
            if t >= 0.1:
                raise AllocationError("deliberate failure")
            from coaxvane.actuation import mix

            return StepCommand(mix(BodyWrench.hover(params), params))

        cfg = SimConfig(dt=1e-3, duration=1.0, controller_period=2e-3)
        with pytest.raises(AllocationError) as err:
            simulate(RigidBodyState.at_rest(), controller, cfg, params)
        assert err.value.sim_time == pytest.approx(0.1)

    def test_initial_state_validated(self, params):
        s = RigidBodyState.at_rest()
        s.R = np.eye(3) * 1.5
        controller = lambda t, st: StepCommand(  # noqa: E731
            ActuatorCommand(4.0, 4.0, 0, 0, 0, 0)
        )
        with pytest.raises(ValueError):
            simulate(s, controller, SimConfig(duration=0.1), params)
