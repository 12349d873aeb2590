"""0D driver: grids, determinism, metrics, attractor, convergence order."""

import dataclasses
import math

import numpy as np
import pytest

from abseize import ode
from abseize.params import (
    AbetaParams,
    BaseParams,
    IonicState,
    RESTING_STATE,
    RESTING_U,
    SEIZURE_ONSET_STATE,
)

BASE8 = dataclasses.replace(BaseParams(), k_bath=8.0)
AB0 = AbetaParams()


def short_run(**kw):
    defaults = dict(base=BASE8, abeta=AB0, u0=-67.0, state0=SEIZURE_ONSET_STATE,
                    dt=0.01, t_end=200.0, stride=10)
    defaults.update(kw)
    return ode.OdeRun(**defaults)


class TestIntegrate:
    def test_grid_and_columns(self):
        tr = ode.integrate(short_run())
        assert len(tr) == 2001
        assert tr.t[0] == 0.0
        assert tr.t[-1] == pytest.approx(200.0)
        assert np.all(np.diff(tr.t) > 0)
        for col in (tr.u, tr.ca_i, tr.k_o, tr.na_i, tr.j_abeta):
            assert col.shape == tr.t.shape

    def test_state_validity_at_samples(self):
        tr = ode.integrate(short_run(t_end=2000.0, stride=50))
        assert np.all(np.abs(tr.u) < 200)
        assert np.all(tr.ca_i >= 0)
        assert np.all(tr.k_o > 0)
        assert np.all(tr.na_i > 0)

    def test_determinism_bitwise(self):
        a = ode.integrate(short_run(t_end=500.0))
        b = ode.integrate(short_run(t_end=500.0))
        for x, y in ((a.u, b.u), (a.ca_i, b.ca_i), (a.k_o, b.k_o),
                     (a.na_i, b.na_i), (a.j_abeta, b.j_abeta)):
            assert np.array_equal(x, y)

    def test_diverged_error_carries_time(self):
        run = short_run(dt=5.0, t_end=500.0, stride=1, scheme="euler")
        with pytest.raises(ode.IntegrationDivergedError) as exc:
            ode.integrate(run)
        assert exc.value.t_last >= 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            ode.integrate(short_run(dt=-1.0))
        with pytest.raises(ValueError):
            ode.integrate(short_run(stride=0))
        with pytest.raises(ValueError):
            ode.integrate(short_run(scheme="leapfrog"))

    def test_gates_stay_in_unit_interval_at_coarse_dt(self):
        tr = ode.integrate(short_run(dt=0.05, t_end=2000.0, stride=1))
        assert np.all(np.abs(tr.u) < 200)  # survived with the coarse step


class TestSweep:
    def test_single_value(self):
        traces = ode.sweep([0.0], short_run(t_end=50.0))
        assert len(traces) == 1
        assert traces[0].abeta == 0.0

    def test_identical_grids(self):
        traces = ode.sweep([0.0, 1.0], short_run(t_end=50.0))
        assert np.array_equal(traces[0].t, traces[1].t)

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            ode.sweep([], short_run())
        with pytest.raises(ValueError):
            ode.sweep([-1.0], short_run())


class TestMetrics:
    def test_quiet_trace(self):
        t = np.arange(0.0, 1000.0, 0.5)
        tr = ode.Trace(t=t, u=np.full_like(t, -67.0), ca_i=np.zeros_like(t),
                       k_o=np.full_like(t, 4.0), na_i=np.full_like(t, 18.0),
                       j_abeta=np.zeros_like(t))
        m = ode.spike_burst_metrics(tr)
        assert m.spike_times.size == 0
        assert m.burst_count == 0
        assert m.duty_cycle == 0.0

    def test_square_pulse_train(self):
        # 10 pulses, 20 ms apart, 4 ms wide
        t = np.arange(0.0, 400.0, 0.5)
        u = np.full_like(t, -67.0)
        for k in range(10):
            on = (t >= 50 + 20 * k) & (t < 54 + 20 * k)
            u[on] = 20.0
        tr = ode.Trace(t=t, u=u, ca_i=np.zeros_like(t), k_o=np.ones_like(t),
                       na_i=np.ones_like(t), j_abeta=np.zeros_like(t))
        m = ode.spike_burst_metrics(tr)
        assert m.spike_times.size == 10
        assert m.burst_count == 1  # gaps are 20 ms << 500 ms
        m2 = ode.spike_burst_metrics(tr, burst_gap=10.0)
        assert m2.burst_count == 10

    def test_empty_trace_rejected(self):
        tr = ode.Trace(*(np.array([]),) * 6)
        with pytest.raises(ValueError):
            ode.spike_burst_metrics(tr)


class TestAttractor:
    def test_empty_when_burn_in_covers(self):
        tr = ode.integrate(short_run(t_end=100.0))
        with pytest.warns(UserWarning):
            att = ode.attractor_export(tr, burn_in=1e9)
        assert att.points.shape == (0, 4)

    def test_points_and_bounds(self):
        tr = ode.integrate(short_run(t_end=500.0))
        att = ode.attractor_export(tr, burn_in=100.0)
        assert att.points.shape[1] == 4
        assert np.all(att.bounds[0] <= att.bounds[1])
        assert att.points.shape[0] == int((tr.t >= 100.0).sum())


class TestCsv:
    def test_trace_roundtrip(self, tmp_path):
        tr = ode.integrate(short_run(t_end=50.0))
        p = tmp_path / "trace.csv"
        ode.write_trace_csv(tr, p)
        back = ode.read_trace_csv(p)
        np.testing.assert_array_equal(back.u, tr.u)
        np.testing.assert_array_equal(back.t, tr.t)
        header = p.read_text().splitlines()[0]
        assert header == "t,u,ca_i,k_o,na_i,j_abeta"

    def test_attractor_header(self, tmp_path):
        tr = ode.integrate(short_run(t_end=50.0))
        att = ode.attractor_export(tr, burn_in=0.0)
        p = tmp_path / "att.csv"
        ode.write_attractor_csv(att, p)
        assert p.read_text().splitlines()[0] == "ca_i,k_o,na_i,u"


class TestConvergence:
    """Richardson self-convergence on a smooth subthreshold window."""

    @staticmethod
    def _solve(dt, scheme, t_end=50.0):
        base = BaseParams()  # k_bath = 4: relaxation back to rest, no spikes
        run = ode.OdeRun(base=base, abeta=AB0, u0=-60.0, state0=RESTING_STATE,
                         dt=dt, t_end=t_end, stride=max(1, int(round(t_end / dt))),
                         scheme=scheme)
        tr = ode.integrate(run)
        return np.array([tr.u[-1], tr.ca_i[-1], tr.k_o[-1], tr.na_i[-1]])

    @pytest.mark.parametrize("scheme,order", [("rk4", 4.0), ("euler", 1.0)])
    def test_order(self, scheme, order):
        dts = [0.08, 0.04, 0.02] if scheme == "rk4" else [0.02, 0.01, 0.005]
        sols = [self._solve(dt, scheme) for dt in dts]
        e1 = np.linalg.norm(sols[0] - sols[1])
        e2 = np.linalg.norm(sols[1] - sols[2])
        measured = math.log2(e1 / e2)
        assert measured == pytest.approx(order, abs=0.2 * order)
