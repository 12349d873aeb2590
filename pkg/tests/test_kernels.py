"""Backend parity: compiled and pure-Python kernels against the readable model."""

import dataclasses

import numpy as np
import pytest

import abseize._kernels as kernels
from abseize import ionic
from abseize._kernels import reference
from abseize.params import AbetaParams, BaseParams, IonicState

BASE = dataclasses.replace(BaseParams(), k_bath=8.0)
AB = dataclasses.replace(AbetaParams(), abeta=5.0)

HAS_COMPILED = kernels.backend_name() == "compiled"
needs_compiled = pytest.mark.skipif(not HAS_COMPILED, reason="extension not built")


def random_batch(n, seed=0):
    rng = np.random.default_rng(seed)
    u = rng.uniform(-90, 60, n)
    y = np.vstack([
        rng.uniform(0, 3.0, n),
        rng.uniform(3.0, 14.0, n),
        rng.uniform(10.0, 25.0, n),
        rng.uniform(0, 1, n),
        rng.uniform(0, 1, n),
        rng.uniform(0, 1, n),
    ])
    return u, y


def test_reference_matches_pointwise_model():
    u, y = random_batch(64)
    prm = ionic.pack_base(BASE, AB)
    ab5 = ionic.pack_modifiers(AB, BASE).reshape(5, 1)
    out = np.empty((7, 64))
    reference.rhs_batch(u, np.ascontiguousarray(y), prm, ab5, out)
    for i in range(64):
        dy, f = ionic.rhs(u[i], IonicState(*y[:, i]), BASE, AB)
        expect = [dy.ca_i, dy.k_o, dy.na_i, dy.m, dy.h, dy.n, f]
        np.testing.assert_allclose(out[:, i], expect, rtol=1e-12, atol=1e-14)


@needs_compiled
def test_compiled_matches_reference_rhs():
    u, y = random_batch(256, seed=1)
    prm = ionic.pack_base(BASE, AB)
    ab5 = np.repeat(ionic.pack_modifiers(AB, BASE).reshape(5, 1), 256, axis=1)
    out_py = np.empty((7, 256))
    out_c = np.empty((7, 256))
    reference.rhs_batch(u, y.copy(), prm, np.ascontiguousarray(ab5), out_py)
    fast = kernels.get_backend("compiled")
    fast.rhs_batch(u, np.ascontiguousarray(y), prm,
                   np.ascontiguousarray(ab5), out_c)
    np.testing.assert_allclose(out_c, out_py, rtol=1e-13, atol=1e-15)


@needs_compiled
def test_compiled_matches_reference_integrate():
    prm = ionic.pack_base(BASE, AB)
    ab5 = ionic.pack_modifiers(AB, BASE)
    y0 = np.array([0.01, 7.8, 15.5, 0.0119, 0.9773, 0.0705])
    for scheme in (0, 1):
        rec_p, fin_p, st_p = kernels.integrate0d(
            -67.0, y0, prm, ab5, 0.01, 2000, 10, scheme,
            impl=kernels.get_backend("python"))
        rec_c, fin_c, st_c = kernels.integrate0d(
            -67.0, y0, prm, ab5, 0.01, 2000, 10, scheme,
            impl=kernels.get_backend("compiled"))
        assert st_p == st_c == -1
        np.testing.assert_allclose(rec_c, rec_p, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(fin_c, fin_p, rtol=1e-9, atol=1e-12)


def test_euler_step_batch_matches_rhs():
    u, y = random_batch(32, seed=2)
    prm = ionic.pack_base(BASE, AB)
    ab5 = ionic.pack_modifiers(AB, BASE).reshape(5, 1)
    out = np.empty((7, 32))
    y2 = y.copy()
    dt = 0.01
    kernels.ionic_step_batch(u, y2, prm, ab5, dt, out)
    ref = kernels.rhs_batch(u, y.copy(), prm, ab5)
    np.testing.assert_allclose(out, ref, rtol=1e-13)
    np.testing.assert_allclose(y2[:3], y[:3] + dt * ref[:3], rtol=1e-13)


def test_step_batch_locality():
    # the update at a node depends only on that node's (u, state)
    u, y = random_batch(50, seed=3)
    prm = ionic.pack_base(BASE, AB)
    ab5 = np.repeat(ionic.pack_modifiers(AB, BASE).reshape(5, 1), 50, axis=1)
    perm = np.random.default_rng(4).permutation(50)
    out_a = np.empty((7, 50))
    out_b = np.empty((7, 50))
    ya = y.copy()
    yb = np.ascontiguousarray(y[:, perm])
    kernels.ionic_step_batch(u, ya, prm, np.ascontiguousarray(ab5), 0.02, out_a)
    kernels.ionic_step_batch(np.ascontiguousarray(u[perm]), yb, prm,
                             np.ascontiguousarray(ab5[:, perm]), 0.02, out_b)
    np.testing.assert_allclose(yb, ya[:, perm], rtol=0, atol=0)
    np.testing.assert_allclose(out_b, out_a[:, perm], rtol=0, atol=0)


def test_divergence_reported():
    prm = ionic.pack_base(BASE, AB)
    ab5 = ionic.pack_modifiers(AB, BASE)
    y0 = np.array([0.01, 7.8, 15.5, 0.0119, 0.9773, 0.0705])
    rec, fin, status = kernels.integrate0d(-67.0, y0, prm, ab5, 50.0, 100, 1, 1)
    assert status >= 0


def test_backend_selector(monkeypatch):
    assert kernels.backend_name() in ("compiled", "python")
    assert kernels.get_backend("python") is reference
    with pytest.raises(ValueError):
        kernels.get_backend("nope")
