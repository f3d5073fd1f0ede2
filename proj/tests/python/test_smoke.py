import cmath
import math

import numpy as np
import pytest

import ggwpd


def test_packet_and_overlap():
    a = ggwpd.GaussianPacket.rotor(0.815, 0.2, 100)
    assert a.hbar == pytest.approx(1.0 / (200.0 * math.pi))
    assert abs(ggwpd.gaussian_overlap(a, a) - 1.0) < 1e-14
    assert abs(a(a.q)) == pytest.approx((2.0 * a.b / math.pi) ** 0.25)


def test_map_round_trip():
    p, q = ggwpd.map_step(0.3, -0.2, 8.25)
    assert ggwpd.inverse_map_step(p, q, 8.25) == pytest.approx((0.3, -0.2), abs=1e-14)
    tr = ggwpd.propagate(0.1 + 0.01j, 0.2, 2, 8.25)
    assert len(tr["q"]) == 3
    assert abs(np.linalg.det(tr["stability"]) - 1.0) < 1e-10


def test_floquet_unitary():
    F = ggwpd.floquet_matrix(64, 8.25)
    assert np.max(np.abs(F.conj().T @ F - np.eye(64))) < 1e-12
    assert np.allclose(np.abs(F), 1.0 / 8.0)


def test_integrable_saddle():
    a = ggwpd.GaussianPacket.rotor(0.815, 0.2, 80)
    b = ggwpd.GaussianPacket.rotor(0.77, 0.8, 80)
    seeds = ggwpd.find_seeds(a, b, 2, 0.05, ggwpd.Regime.integrable)
    assert len(seeds) == 1
    assert seeds[0].winding == (0, 1) or list(seeds[0].winding) == [0, 1]
    s = ggwpd.find_saddle(a, b, seeds[0], 0.05)
    assert abs(s.P0 - (0.8019843 + 0.0062830j)) < 2e-6
    assert abs(s.Q0 - (0.2062830 + 0.0130157j)) < 2e-6
    assert s.residual_norm < 1e-12

    N = 400
    a, b = ggwpd.GaussianPacket.rotor(0.815, 0.2, N), ggwpd.GaussianPacket.rotor(0.77, 0.8, N)
    qm = ggwpd.quantum_correlation(a, b, 2, N, 0.05)
    gg = ggwpd.ggwpd_correlation(a, b, [s])
    oc = ggwpd.offcenter_correlation(a, b, seeds, 0.05, 2)
    assert abs(qm - gg) < abs(qm - oc)


def test_chaotic_saddles_identity():
    a = ggwpd.GaussianPacket.rotor(0.0, 0.0, 80)
    b = ggwpd.GaussianPacket.rotor(0.0, 0.5, 80)
    seeds = ggwpd.find_seeds(a, b, 2, 8.25, ggwpd.Regime.chaotic, 2)
    assert len(seeds) == 4
    for seed in seeds:
        s = ggwpd.find_saddle(a, b, seed, 8.25)
        assert abs(s.P0 - 1j * s.Q0) < 1e-12


def test_free_particle():
    a = ggwpd.GaussianPacket.one_d(0.7, -0.3, 0.25, 1.0)
    for x in (-1.0, 0.5, 3.0):
        assert abs(ggwpd.free_particle_ggwpd(a, x, 2.0) - ggwpd.free_particle_exact(a, x, 2.0)) < 1e-12


def test_sweep_and_errors():
    rows = ggwpd.run_sweep('{"preset": "integrable-fig2", "N_list": [100, 200]}')
    assert [r["N"] for r in rows] == [100, 200]
    assert all(r["abs_err_ggwpd"] < r["abs_err_oc"] for r in rows)
    assert ggwpd.sweep_csv('{"preset": "integrable-fig2", "N_list": [100]}').startswith("N,qm_re,")
    assert "chaotic-fig6" in ggwpd.preset_names()
    with pytest.raises(ValueError):
        ggwpd.run_sweep("no-such-preset")
    a = ggwpd.GaussianPacket.rotor(0.815, 0.2, 80)
    b = ggwpd.GaussianPacket.rotor(0.77, 0.8, 80)
    seed = ggwpd.find_seeds(a, b, 2, 0.05, ggwpd.Regime.integrable)[0]
    with pytest.raises(ggwpd.NumericalError):
        ggwpd.find_saddle(a, b, seed, 0.05, max_iter=1)
    assert cmath.isfinite(ggwpd.linearized_correlation(a, b, 0.05, 2))
