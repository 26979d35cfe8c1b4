from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinpol.errors import ConfigError, SiteOutOfRange
from spinpol.spins import (
    SPIN_HALF,
    ChainSpec,
    build_dipolar,
    build_hamiltonian,
    build_secular_dipolar,
    build_zz,
    couplings,
    site_operator,
    total_iz,
)
from spinpol.states import basis_index

S = SPIN_HALF


def comm(a, b):
    return a @ b - b @ a


def test_single_spin_operators():
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1, -1])
    np.testing.assert_array_equal(S.ix, sx / 2)
    np.testing.assert_array_equal(S.iy, sy / 2)
    np.testing.assert_array_equal(S.iz, sz / 2)
    np.testing.assert_array_equal(S.iplus, S.ix + 1j * S.iy)
    np.testing.assert_array_equal(S.iminus, S.ix - 1j * S.iy)
    assert np.max(np.abs(comm(S.ix, S.iy) - 1j * S.iz)) < 1e-14


def test_operator_set_is_read_only():
    with pytest.raises(ValueError):
        S.ix[0, 0] = 5


def test_site_operator_examples():
    np.testing.assert_array_equal(site_operator(S.iz, 1, 1), np.diag([0.5, -0.5]))
    np.testing.assert_array_equal(site_operator(S.iz, 2, 2), np.diag([0.5, -0.5, 0.5, -0.5]))
    np.testing.assert_array_equal(site_operator(S.iz, 1, 2), np.diag([0.5, 0.5, -0.5, -0.5]))
    c = comm(site_operator(S.ix, 1, 3), site_operator(S.iy, 2, 3))
    assert np.max(np.abs(c)) == 0


def test_site_operator_trace_and_range():
    op = np.array([[1.0, 2.0], [3.0, 4.0]])
    for n in (1, 2, 4):
        for k in range(1, n + 1):
            assert np.trace(site_operator(op, k, n)) == pytest.approx(5.0 * 2 ** (n - 1))
    with pytest.raises(SiteOutOfRange):
        site_operator(S.iz, 0, 3)
    with pytest.raises(SiteOutOfRange):
        site_operator(S.iz, 4, 3)


def test_couplings_examples():
    assert couplings(ChainSpec(n=2))[0, 1] == 1.0
    d8 = couplings(ChainSpec(n=8, d12=2.0))
    assert d8[0, 7] == pytest.approx(2.0 / 343, rel=1e-15)
    assert d8[2, 4] == pytest.approx(2.0 / 8, rel=1e-15)
    nn = couplings(ChainSpec(n=3, coupling_law="nearest-neighbor"))
    assert nn[0, 2] == 0 and nn[0, 1] == nn[1, 2] == 1.0
    for d in (d8, nn):
        np.testing.assert_array_equal(d, d.T)
        assert np.all(np.diag(d) == 0)


def test_explicit_couplings_pass_through():
    m = np.array([[0, 0.3, 0.1], [0.3, 0, 0.2], [0.1, 0.2, 0]])
    np.testing.assert_array_equal(couplings(ChainSpec(n=3, coupling_law="explicit", coupling_matrix=m)), m)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=1),
        dict(n=2, coupling_law="dipolar"),
        dict(n=2, model="xy"),
        dict(n=2, exchange_form="swap"),
        dict(n=2, irradiated=(3,)),
        dict(n=2, irradiated=(1, 1)),
        dict(n=2, irradiated=(1,), omega1=-0.5),
        dict(n=2, irradiated=(1, 2), omega1=(0.5,)),
        dict(n=2, offsets=(0.1,)),
        dict(n=2, kappa=float("nan")),
        dict(n=2, coupling_law="explicit"),
        dict(n=2, coupling_law="explicit", coupling_matrix=[[0, 1], [2, 0]]),
        dict(n=2, coupling_law="explicit", coupling_matrix=[[1, 1], [1, 0]]),
    ],
)
def test_chain_spec_rejects_invalid(kwargs):
    with pytest.raises(ConfigError):
        ChainSpec(**kwargs)


def test_secular_two_spin_entries():
    h = build_secular_dipolar(ChainSpec(n=2, kappa=1.0))
    expected = np.array(
        [[0.25, 0, 0, 0], [0, -0.25, -0.25, 0], [0, -0.25, -0.25, 0], [0, 0, 0, 0.25]]
    )
    np.testing.assert_allclose(h, expected, atol=1e-16)


@pytest.mark.parametrize("kappa,d12", [(1.0, 1.0), (1.5, 1.0), (1.5, 2.5)])
def test_secular_two_spin_block_and_eigenstate(kappa, d12):
    h = build_secular_dipolar(ChainSpec(n=2, kappa=kappa, d12=d12))
    i01, i10, i11 = basis_index([0, 1]), basis_index([1, 0]), basis_index([1, 1])
    block = h[np.ix_([i01, i10], [i01, i10])]
    sx = np.array([[0, 1], [1, 0]])
    np.testing.assert_allclose(block, kappa * d12 * -0.25 * (np.eye(2) + sx), atol=1e-15)
    up = np.zeros(4)
    up[i11] = 1
    np.testing.assert_allclose(h @ up, kappa * d12 / 4 * up, atol=1e-15)
    assert h[i01, i10] == pytest.approx(-kappa * d12 / 4)


def test_zz_examples():
    np.testing.assert_array_equal(build_zz(ChainSpec(n=2, d12=3.0)), np.diag([0.75, -0.75, -0.75, 0.75]))
    h = build_zz(ChainSpec(n=3, coupling_law="nearest-neighbor"))
    assert h[basis_index([1, 1, 1]), basis_index([1, 1, 1])] == 0.5


@pytest.mark.parametrize("n", [2, 3, 5])
def test_zz_is_exactly_diagonal_and_commutes_with_iz(n):
    spec = ChainSpec(n=n, model="zz-only")
    h = build_hamiltonian(spec)
    assert np.max(np.abs(h - np.diag(np.diag(h)))) == 0
    for k in range(1, n + 1):
        assert np.max(np.abs(comm(h, site_operator(S.iz, k, n)))) < 1e-14


chains = st.builds(
    lambda n, law, kappa, d12, w: ChainSpec(n=n, coupling_law=law, kappa=kappa, d12=d12, zz_weight=w),
    st.integers(2, 5),
    st.sampled_from(["inverse-cube", "nearest-neighbor"]),
    st.floats(0.5, 2.0),
    st.floats(0.1, 3.0),
    st.floats(0.0, 1.0),
)


@settings(max_examples=30, deadline=None)
@given(chains)
def test_secular_part_conserves_total_iz(spec):
    h = build_secular_dipolar(spec)
    assert np.max(np.abs(h - h.conj().T)) < 1e-13
    assert np.max(np.abs(comm(h, total_iz(spec.n)))) < 1e-12


def test_double_quantum_form_breaks_iz_conservation():
    spec = ChainSpec(n=2, kappa=1.0, exchange_form="double-quantum")
    h = build_secular_dipolar(spec)
    i00, i11 = basis_index([0, 0]), basis_index([1, 1])
    assert h[i00, i11] == pytest.approx(-0.25)
    assert h[basis_index([0, 1]), basis_index([1, 0])] == 0
    assert np.max(np.abs(comm(h, total_iz(2)))) > 0.1


def test_hamiltonian_without_drive_is_dipolar_part():
    spec = ChainSpec(n=3)
    np.testing.assert_array_equal(build_hamiltonian(spec), build_dipolar(spec))


def test_two_spin_driven_hamiltonian():
    spec = ChainSpec(n=2, irradiated=(1, 2), omega1=0.5)
    h = build_hamiltonian(spec)
    drive = 0.5 * (site_operator(S.ix, 1, 2) + site_operator(S.ix, 2, 2))
    np.testing.assert_allclose(h, build_secular_dipolar(spec) + drive, atol=1e-16)
    assert np.max(np.abs(h - h.conj().T)) < 1e-13


def test_eight_spin_zz_selective_hamiltonian():
    spec = ChainSpec(n=8, model="zz-only", irradiated=(1, 8), omega1=0.5)
    h = build_hamiltonian(spec)
    assert h.shape == (256, 256)
    assert np.max(np.abs(h - h.conj().T)) < 1e-13
    for k in range(2, 8):
        assert np.max(np.abs(comm(h, site_operator(S.iz, k, 8)))) < 1e-14


def test_per_site_drives_and_offsets():
    spec = ChainSpec(n=2, irradiated=(2,), omega1=(0.7,), offsets=(0.1, -0.2))
    h = build_hamiltonian(spec)
    expected = (
        build_secular_dipolar(spec)
        + 0.7 * site_operator(S.ix, 2, 2)
        + 0.1 * site_operator(S.iz, 1, 2)
        - 0.2 * site_operator(S.iz, 2, 2)
    )
    np.testing.assert_allclose(h, expected, atol=1e-16)
    assert replace(spec, omega1=(0.0,)).drive_amplitudes() == (0.0,)
