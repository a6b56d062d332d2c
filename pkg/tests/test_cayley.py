"""Signed adjacency, spectra, projectors, enumeration, and exports."""
import numpy as np
import pytest

from caywalk.cayley import (
    CayleyGraph,
    adjacency_matrix,
    adjacency_to_csv,
    abelian_residue_counts,
    cayley_graph,
    connection_character_sums,
    enumerate_oriented_class_unions,
    graph_to_dot,
    idempotent,
    is_connected,
    make_connection_set,
    make_symmetric_connection_set,
    spectrum,
    spectrum_report,
    theta_from_residue_counts,
)
from caywalk.characters import abelian_character_table, character_table_for
from caywalk.errors import InconsistencyError, InvalidParameterError, OrientationError
from caywalk.groups import build_abelian_power, build_cyclic, build_extraspecial3, conjugacy


def cyclic_graph(r, classes, oriented=True):
    g = build_cyclic(r)
    conj = conjugacy(g)
    return cayley_graph(g, conj, classes, oriented=oriented)


# ---------------------------------------------------------------------------
# Connection set validation


def test_oriented_set_accepts_half_of_an_inverse_pair():
    g = build_cyclic(8)
    conj = conjugacy(g)
    conn = make_connection_set(conj, [1, 2, 5])
    assert conn.class_indices == (1, 2, 5)
    assert conn.elements == (1, 2, 5)
    assert conn.oriented and len(conn) == 3


def test_oriented_set_collects_every_violation():
    g = build_cyclic(8)
    conj = conjugacy(g)
    with pytest.raises(OrientationError) as exc:
        make_connection_set(conj, [0, 4, 1, 7])
    rules = sorted(rule for rule, _ in exc.value.violations)
    assert rules == [
        OrientationError.RULE_IDENTITY,
        OrientationError.RULE_INVERSE_PAIR,
        OrientationError.RULE_REAL,
    ]
    by_rule = {rule: cls for rule, cls in exc.value.violations}
    assert by_rule[OrientationError.RULE_IDENTITY] == (0,)
    assert by_rule[OrientationError.RULE_REAL] == (4,)
    assert set(by_rule[OrientationError.RULE_INVERSE_PAIR]) == {1, 7}


def test_oriented_set_rejects_empty_and_out_of_range():
    conj = conjugacy(build_cyclic(8))
    with pytest.raises(InvalidParameterError):
        make_connection_set(conj, [])
    with pytest.raises(InvalidParameterError):
        make_connection_set(conj, [99])


def test_symmetric_set_requires_inverse_closure():
    conj = conjugacy(build_cyclic(8))
    good = make_symmetric_connection_set(conj, [1, 7])
    assert good.elements == (1, 7) and not good.oriented
    with pytest.raises(OrientationError):
        make_symmetric_connection_set(conj, [1])
    with pytest.raises(OrientationError):
        make_symmetric_connection_set(conj, [0, 1, 7])


# ---------------------------------------------------------------------------
# Adjacency matrices


def test_adjacency_cyclic3_exact():
    graph = cyclic_graph(3, [1])
    a = adjacency_matrix(graph)
    assert np.array_equal(a, np.array([
        [0.0, -1.0, 1.0],
        [1.0, 0.0, -1.0],
        [-1.0, 1.0, 0.0],
    ]))


def test_adjacency_is_skew_with_small_entries():
    graph = cyclic_graph(8, [1, 2, 5])
    a = adjacency_matrix(graph)
    assert np.array_equal(a, -a.T)
    assert set(np.unique(a)) <= {-1.0, 0.0, 1.0}
    assert np.array_equal(a.sum(axis=0), np.zeros(8))
    assert np.array_equal(a.sum(axis=1), np.zeros(8))


def test_adjacency_undirected_cycle():
    graph = cyclic_graph(4, [1, 3], oriented=False)
    a = adjacency_matrix(graph)
    want = np.zeros((4, 4))
    for g in range(4):
        want[(g + 1) % 4, g] = 1.0
        want[(g - 1) % 4, g] = 1.0
    assert np.array_equal(a, want)
    assert np.array_equal(a, a.T)


# ---------------------------------------------------------------------------
# Spectra


def test_spectrum_cyclic3_eigenvalues():
    graph = cyclic_graph(3, [1])
    table = abelian_character_table(3, 1)
    spec = spectrum(graph, table)
    root3 = np.sqrt(3.0)
    assert np.allclose(sorted(spec.imag), [-root3, 0.0, root3])
    eig = np.linalg.eigvals(adjacency_matrix(graph))
    assert np.allclose(sorted(eig.imag), sorted(spec.imag), atol=1e-9)
    assert np.max(np.abs(eig.real)) < 1e-9


def test_spectrum_matches_residue_count_formula():
    graph = cyclic_graph(8, [1, 2, 5])
    table = abelian_character_table(8, 1)
    spec = spectrum(graph, table)
    for v in range(8):
        counts = abelian_residue_counts(graph.group, graph.conn, [v], 8)
        assert abs(spec.theta[v] - theta_from_residue_counts(counts, 8)) < 1e-12
    # the v = 1 value is 2i(sin 45 + sin 90 + sin 225) = 2i exactly
    assert abs(spec.theta[1] - 2j) < 1e-12


def test_character_sums_direct():
    graph = cyclic_graph(8, [1, 2, 5])
    table = abelian_character_table(8, 1)
    sums = connection_character_sums(table, graph.conn.class_indices)
    zeta = np.exp(2j * np.pi / 8)
    for v in range(8):
        assert abs(sums[v] - (zeta**v + zeta ** (2 * v) + zeta ** (5 * v))) < 1e-12


def test_spectrum_rejects_foreign_table():
    graph = cyclic_graph(8, [1, 2, 5])
    with pytest.raises(InconsistencyError):
        spectrum(graph, abelian_character_table(3, 1))


def first_oriented_class(conj):
    identity_class = int(conj.class_of[conj.group.identity])
    for c in range(len(conj.classes)):
        if c != identity_class and conj.class_inv[c] != c:
            return c
    raise AssertionError("no oriented class available")


def extraspecial_graph():
    g = build_extraspecial3(1)
    conj = conjugacy(g)
    c = first_oriented_class(conj)
    graph = cayley_graph(g, conj, [c])
    table = character_table_for(g, conj)
    return graph, table


def test_eigenvalue_multiset_from_degrees():
    """Adjacency eigenvalues must be the per-character values, each deg^2 times."""
    graph, table = extraspecial_graph()
    spec = spectrum(graph, table)
    predicted = []
    for i in range(table.n_chars):
        predicted.extend([spec.theta[i].imag] * int(table.degrees[i]) ** 2)
    eig = np.linalg.eigvals(adjacency_matrix(graph))
    assert np.max(np.abs(eig.real)) < 1e-9
    assert np.allclose(sorted(eig.imag), sorted(predicted), atol=1e-7)


def test_idempotents_resolve_adjacency():
    graph, table = extraspecial_graph()
    spec = spectrum(graph, table)
    a = adjacency_matrix(graph)
    n = graph.order
    total = np.zeros((n, n), dtype=np.complex128)
    rebuilt = np.zeros((n, n), dtype=np.complex128)
    for i in range(table.n_chars):
        e = idempotent(graph, table, i)
        assert np.max(np.abs(e @ e - e)) < 1e-9           # projector
        assert np.max(np.abs(e - e.conj().T)) < 1e-9       # hermitian
        assert np.max(np.abs(a @ e - spec.theta[i] * e)) < 1e-8  # eigenspace
        total += e
        rebuilt += spec.theta[i] * e
    assert np.max(np.abs(total - np.eye(n))) < 1e-9
    assert np.max(np.abs(rebuilt - a)) < 1e-8


def test_idempotent_ranks_square_degrees():
    graph, table = extraspecial_graph()
    for i in range(table.n_chars):
        e = idempotent(graph, table, i)
        rank = int(round(float(np.trace(e).real)))
        assert rank == int(table.degrees[i]) ** 2


# ---------------------------------------------------------------------------
# Connectivity and enumeration


def test_is_connected():
    assert is_connected(cyclic_graph(8, [1, 2, 5]))
    assert not is_connected(cyclic_graph(8, [2]))


def test_enumeration_count_cyclic8():
    conj = conjugacy(build_cyclic(8))
    sets = list(enumerate_oriented_class_unions(conj))
    assert len(sets) == 13
    seen = {s.class_indices for s in sets}
    assert len(seen) == 13
    assert (1, 2, 5) in seen


def test_enumeration_is_canonical_and_valid():
    conj = conjugacy(build_cyclic(8))
    for s in enumerate_oriented_class_unions(conj):
        make_connection_set(conj, s.class_indices)  # must not raise
        inverted = tuple(sorted(conj.class_inv[c] for c in s.class_indices))
        assert s.class_indices <= inverted


def test_enumeration_count_z4_squared():
    conj = conjugacy(build_abelian_power(4, 2))
    sets = list(enumerate_oriented_class_unions(conj))
    assert len(sets) == 364


def test_enumeration_class_cap():
    conj = conjugacy(build_cyclic(8))
    sets = list(enumerate_oriented_class_unions(conj, max_classes=1))
    assert sorted(s.class_indices for s in sets) == [(1,), (2,), (3,)]


# ---------------------------------------------------------------------------
# Exports


def test_dot_output_directed():
    graph = cyclic_graph(3, [1])
    dot = graph_to_dot(graph)
    assert dot.startswith("digraph")
    for edge in ("n0 -> n1", "n1 -> n2", "n2 -> n0"):
        assert edge in dot
    assert "n1 -> n0" not in dot
    assert 'label="0"' in dot


def test_dot_output_undirected_no_duplicate_edges():
    graph = cyclic_graph(4, [1, 3], oriented=False)
    dot = graph_to_dot(graph)
    assert dot.startswith("graph")
    assert dot.count("n0 -- n1") == 1
    assert "n1 -- n0" not in dot


def test_csv_output_exact():
    graph = cyclic_graph(3, [1])
    assert adjacency_to_csv(adjacency_matrix(graph)) == "0,-1,1\n1,0,-1\n-1,1,0\n"


def test_spectrum_report_fields():
    graph, table = extraspecial_graph()
    report = spectrum_report(table, spectrum(graph, table))
    assert len(report) == table.n_chars
    assert sum(r["multiplicity"] for r in report) == graph.order
    for r in report:
        assert set(r) == {"character", "degree", "theta_imag", "multiplicity"}
