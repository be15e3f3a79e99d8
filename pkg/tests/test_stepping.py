import numpy as np
import pytest

from fracfront import (
    BistableCubic,
    DivergedError,
    FractionalParams,
    Grid1D,
    OperatorMatrix,
    OutOfRangeError,
    StepLimitError,
    StepperConfig,
    assemble_operator_matrix,
    green_function,
    integrate,
    make_schedule,
    step_explicit_rk,
    step_semi_implicit,
    step_spectral_imex,
)


class TestConfig:
    def test_bad_method(self):
        with pytest.raises(OutOfRangeError):
            StepperConfig(method="bdf")

    def test_bad_dt(self):
        with pytest.raises(OutOfRangeError):
            StepperConfig(method="semi-implicit", dt=0.0)

    def test_bad_tolerances(self):
        with pytest.raises(OutOfRangeError):
            StepperConfig(method="rk-adaptive", abs_tol=0.0)

    def test_schedule_shapes(self):
        s = make_schedule(2.0, 5)
        assert s[0] == 0.0 and s[-1] == 2.0 and len(s) == 5
        assert len(make_schedule(0.0, 1)) == 1


class TestSemiImplicit:
    def test_constant_is_fixed_point_without_reaction(self):
        g = Grid1D(10.0, 41)
        A = assemble_operator_matrix(g, FractionalParams(1.6, 0.2))
        u = np.full(g.n, 0.37)
        out = step_semi_implicit(u, 0.1, A, None)
        assert np.max(np.abs(out - u)) <= 1e-13

    def test_zero_operator_reduces_to_explicit_euler(self):
        g = Grid1D(10.0, 41)
        A = OperatorMatrix(np.zeros((g.n, g.n)), FractionalParams(1.6, 0.0),
                           g, False)
        nl = BistableCubic(0.4)
        u = np.linspace(0.0, 1.0, g.n)
        out = step_semi_implicit(u, 0.05, A, nl)
        assert np.max(np.abs(out - (u + 0.05 * nl.f(u)))) <= 1e-13

    def test_first_order_self_convergence(self):
        g = Grid1D(20.0, 121)
        p = FractionalParams(1.6, 0.2)
        nl = BistableCubic(0.45)
        ic = 1.0 / (1.0 + np.exp(-g.x))
        sched = make_schedule(1.0, 2)

        def final(dt):
            cfg = StepperConfig(method="semi-implicit", dt=dt)
            return integrate(ic, sched, cfg, g, p, nl).final

        ref = final(0.2 / 64)
        errs = [np.max(np.abs(final(dt) - ref)) for dt in (0.2, 0.1, 0.05)]
        for e_coarse, e_fine in zip(errs, errs[1:]):
            assert 1.5 <= e_coarse / e_fine <= 2.5
        order = np.log2(errs[0] / errs[1])
        assert 0.8 <= order <= 1.2


class TestExplicitRK:
    def test_zero_rhs_grows_step(self):
        u = np.ones(5)
        rhs = lambda t, v: np.zeros_like(v)
        u_new, dt_used, dt_next, accepted = step_explicit_rk(
            u, 0.0, 0.1, rhs, 1e-9, 1e-9)
        assert accepted
        assert np.all(u_new == u)
        assert dt_next == pytest.approx(0.5)     # maximal growth factor 5

    def test_scalar_exponential(self):
        rhs = lambda t, v: -v
        u = np.array([1.0])
        t, dt = 0.0, 1e-3
        rel_tol = 1e-8
        while t < 1.0:
            dt_try = min(dt, 1.0 - t)
            u_new, dt_used, dt_next, accepted = step_explicit_rk(
                u, t, dt_try, rhs, 1e-12, rel_tol)
            if accepted:
                u = u_new
                t += dt_used
            dt = dt_next
        assert abs(u[0] - np.exp(-1.0)) <= 10 * rel_tol

    def test_growth_factor_clamped(self):
        rhs = lambda t, v: -50.0 * v  # stiff scalar: rejections expected
        u = np.array([1.0])
        dt = 1.0
        for _ in range(20):
            _, dt_used, dt_next, _ = step_explicit_rk(
                u, 0.0, dt, rhs, 1e-8, 1e-8)
            assert 0.2 - 1e-12 <= dt_next / dt_used <= 5.0 + 1e-12
            dt = dt_next


class TestSpectralIMEX:
    def test_single_mode_decays(self):
        n, period = 64, 10.0
        p = FractionalParams(1.5, 0.0)
        x = period * np.arange(n) / n
        modes = np.fft.ifft(np.cos(2 * np.pi * 3 * x / period))
        mags = [np.abs(modes).max()]
        for _ in range(5):
            modes = step_spectral_imex(modes, 0.05, p, period, None)
            mags.append(np.abs(modes).max())
        assert all(m1 < m0 for m0, m1 in zip(mags, mags[1:]))

    def test_heat_decay_rate(self):
        # backward Euler vs exp(-xi^2 t): first order in dt
        n, period = 64, 2 * np.pi
        p = FractionalParams(2.0, 0.0)
        x = period * np.arange(n) / n
        k = 2.0
        u0 = np.cos(k * x)

        def relative_error(dt, nsteps):
            modes = np.fft.ifft(u0)
            for _ in range(nsteps):
                modes = step_spectral_imex(modes, dt, p, period, None)
            u = np.fft.fft(modes).real
            exact = np.exp(-k ** 2 * dt * nsteps) * u0
            return np.max(np.abs(u - exact)) / np.max(np.abs(exact))

        e1 = relative_error(0.01, 100)
        e2 = relative_error(0.005, 200)
        assert e1 <= 0.1
        assert 1.5 <= e1 / e2 <= 2.5

    def test_delta_route_matches_kernel(self):
        # two routes to the diffusion kernel: direct inversion of exp(t*psi)
        # versus 250k implicit per-mode steps from a discrete delta
        p = FractionalParams(1.5, 0.3)
        window, k = 800.0, 4096
        dx = window / k
        x, g = green_function(p, 1.0, window=window, k_modes=k)
        u0 = np.zeros(k)
        u0[k // 2] = 1.0 / dx
        dt = 4e-6
        nsteps = 250_000
        modes = np.fft.ifft(u0)
        for _ in range(nsteps):
            modes = step_spectral_imex(modes, dt, p, window, None)
        u = np.fft.fft(modes).real
        assert np.max(np.abs(u - g)) <= 1e-6


class TestSpectralIMEXIntegration:
    def test_periodic_diffusion_matches_closed_form(self):
        # linear periodic problem: integrate() vs the exact mode decay
        g = Grid1D(20.0, 129)           # period n*h
        p = FractionalParams(1.6, 0.3)
        period = g.n * g.h
        ic = np.exp(-g.x ** 2)
        cfg = StepperConfig(method="spectral-imex", dt=1e-3)
        res = integrate(ic, make_schedule(0.5, 3), cfg, g, p, None)
        from fracfront.operators import riesz_feller_symbol
        xi = 2 * np.pi * np.fft.fftfreq(g.n, d=g.h)
        exact = np.fft.fft(np.exp(0.5 * riesz_feller_symbol(p, xi))
                           * np.fft.ifft(ic)).real
        assert np.max(np.abs(res.final - exact)) <= 2e-3   # O(dt)
        # mode 0 is untouched: the spatial mean is conserved exactly
        assert np.mean(res.final) == pytest.approx(np.mean(ic), abs=1e-13)
        assert np.all(res.times == make_schedule(0.5, 3))


class TestIntegrate:
    def test_zero_horizon_returns_ic(self):
        g = Grid1D(10.0, 41)
        p = FractionalParams(1.5, 0.1)
        ic = np.linspace(0, 1, g.n)
        res = integrate(ic, make_schedule(0.0, 1),
                        StepperConfig(method="semi-implicit", dt=0.1),
                        g, p, BistableCubic(0.5))
        assert res.times.tolist() == [0.0]
        assert np.all(res.states[0] == ic)

    def test_snapshot_times_are_bitwise_exact(self):
        g = Grid1D(10.0, 41)
        p = FractionalParams(1.5, 0.1)
        sched = make_schedule(1.7, 6)
        for method in ("semi-implicit", "rk-adaptive"):
            cfg = StepperConfig(method=method, dt=0.03, abs_tol=1e-7,
                                rel_tol=1e-7)
            res = integrate(np.full(g.n, 0.2), sched, cfg, g, p,
                            BistableCubic(0.5))
            assert np.all(res.times == sched)

    def test_constant_states_are_equilibria(self):
        g = Grid1D(10.0, 41)
        p = FractionalParams(1.7, -0.2)
        nl = BistableCubic(0.35)
        sched = make_schedule(1.0, 3)
        for value in (0.0, 1.0):
            for method in ("semi-implicit", "rk-adaptive"):
                cfg = StepperConfig(method=method, dt=0.05,
                                    abs_tol=1e-8, rel_tol=1e-8)
                res = integrate(np.full(g.n, value), sched, cfg, g, p, nl)
                assert np.max(np.abs(res.final - value)) <= 1e-12

    def test_deterministic(self):
        g = Grid1D(15.0, 61)
        p = FractionalParams(1.8, 0.1)
        nl = BistableCubic(0.5)
        ic = 0.5 + 0.4 * np.tanh(g.x)
        sched = make_schedule(2.0, 5)
        cfg = StepperConfig(method="semi-implicit", dt=0.02)
        r1 = integrate(ic, sched, cfg, g, p, nl)
        r2 = integrate(ic, sched, cfg, g, p, nl)
        assert np.all(r1.states == r2.states)

    def test_divergence_guard(self):
        g = Grid1D(10.0, 41)
        p = FractionalParams(1.5, 0.0)
        cfg = StepperConfig(method="semi-implicit", dt=0.5)
        with pytest.raises(DivergedError):
            integrate(np.full(g.n, 2000.0), make_schedule(10.0, 3), cfg,
                      g, p, BistableCubic(0.5))

    def test_step_budget(self):
        g = Grid1D(10.0, 41)
        p = FractionalParams(1.5, 0.0)
        cfg = StepperConfig(method="semi-implicit", dt=0.001, max_steps=5)
        with pytest.raises(StepLimitError):
            integrate(np.full(g.n, 0.3), make_schedule(1.0, 2), cfg, g, p,
                      BistableCubic(0.5))

    def test_stats_recorded(self):
        g = Grid1D(10.0, 41)
        p = FractionalParams(1.5, 0.1)
        res = integrate(np.full(g.n, 0.3), make_schedule(1.0, 3),
                        StepperConfig(method="semi-implicit", dt=0.1),
                        g, p, BistableCubic(0.5))
        assert res.stats["steps"] == 10
        assert res.stats["rejected_steps"] == 0
        assert res.stats["wall_time_s"] > 0
        assert "u_min" in res.stats and "u_max" in res.stats
