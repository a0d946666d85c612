import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_connected_edges, tfim_kron
from tfim_qfi.deformation import perturbative_qfi_pure, spectral_deformation
from tfim_qfi.graph import graph_properties, make_graph, relabel
from tfim_qfi.hamiltonian import build_hamiltonian, field_generator
from tfim_qfi.qfi import qfi_field, qfi_field_matrix, qfi_temperature
from tfim_qfi.spectral import eigenvector_derivatives, eigh
from tfim_qfi.thermal import boltzmann_populations


@st.composite
def graphs(draw, min_n=2, max_n=5):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return make_graph(n, random_connected_edges(np.random.default_rng(seed), n))


couplings = st.sampled_from([1.0, -1.0])
fields = st.floats(0.02, 1.5)
temperatures = st.floats(0.02, 2.0)


@settings(max_examples=60)
@given(graphs(), couplings, fields)
def test_hamiltonian_matches_kron(g, J, h):
    H = build_hamiltonian(g, J, h).matrix
    np.testing.assert_allclose(H, tfim_kron(g.n_vertices, g.edges, J, h), atol=1e-14)


@settings(max_examples=60)
@given(graphs(), couplings, fields)
def test_eigh_is_a_decomposition(g, J, h):
    H = build_hamiltonian(g, J, h).matrix
    es = eigh(H)
    U, w = es.eigenvectors, es.eigenvalues
    assert np.max(np.abs(H @ U - U * w)) <= 1e-11
    assert np.max(np.abs(U.T @ U - np.eye(es.dim))) <= 1e-12
    np.testing.assert_allclose(w, np.linalg.eigvalsh(H), atol=1e-12)


@settings(max_examples=60)
@given(graphs(), couplings, fields, temperatures)
def test_qfi_invariants(g, J, h, T):
    f = qfi_field(g, J, h, T)
    ft = qfi_temperature(g, J, h, T)
    assert min(f.classical, f.quantum, ft.total) >= -1e-12
    assert np.isclose(f.total, f.classical + f.quantum, rtol=1e-14)
    p, _ = boltzmann_populations(eigh(build_hamiltonian(g, J, h)).eigenvalues, T)
    assert abs(p.sum() - 1.0) <= 1e-12 and np.all(p >= 0)


@settings(max_examples=40)
@given(graphs(min_n=3), couplings, fields, temperatures, st.floats(-50, 50))
def test_shift_invariance(g, J, h, T, c):
    H = build_hamiltonian(g, J, h).matrix
    V = field_generator(g.n_vertices).matrix
    a = qfi_field_matrix(H, V, T).total
    b = qfi_field_matrix(H + c * np.eye(len(H)), V, T).total
    assert abs(a - b) <= 1e-9 * a


@settings(max_examples=40)
@given(graphs(min_n=3), couplings, fields, temperatures, st.randoms(use_true_random=False))
def test_relabel_invariance(g, J, h, T, rnd):
    perm = list(range(g.n_vertices))
    rnd.shuffle(perm)
    r = relabel(g, perm)
    assert graph_properties(r, J) == graph_properties(g, J)
    a, b = qfi_field(g, J, h, T).total, qfi_field(r, J, h, T).total
    assert abs(a - b) <= 1e-9 * a
    a, b = qfi_temperature(g, J, h, T).total, qfi_temperature(r, J, h, T).total
    assert abs(a - b) <= 1e-9 * a


@settings(max_examples=40)
@given(graphs(min_n=3), couplings, fields)
def test_deformation_and_scaling(g, J, h):
    d = [spectral_deformation(g, J, h, n).D_n for n in range(1, 2**g.n_vertices + 1)]
    assert all(b >= a for a, b in zip(d, d[1:]))
    a, b = perturbative_qfi_pure(g, J, h), perturbative_qfi_pure(g, J, 2 * h)
    assert abs(b - 4 * a) <= 1e-12 * abs(4 * a)


@settings(max_examples=30)
@given(graphs(min_n=3, max_n=4), couplings, st.floats(0.1, 1.0))
def test_first_order_eigenvalue_error(g, J, h):
    # E(h + d) - E(h) - d E'(h) is O(d^2): halving d quarters the error
    es = eigh(build_hamiltonian(g, J, h))
    slope = eigenvector_derivatives(es, field_generator(g.n_vertices)).denergies
    ratios = []
    for d in (1e-2, 5e-3):
        shifted = eigh(build_hamiltonian(g, J, h + d)).eigenvalues
        ratios.append(np.max(np.abs(shifted - es.eigenvalues - d * slope)))
    if ratios[1] > 1e-10:
        assert 4 / 1.5 <= ratios[0] / ratios[1] <= 4 * 1.5
