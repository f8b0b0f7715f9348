import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermispec.circuits import Circuit, GateKind, cx, cy, cz, two_qubit_count
from fermispec.czgraph import (CZGraph, DecimationRule, DecimationStep,
                               apply_rule, decimate, format_edge_list,
                               graph_from_edges, needs_z_correction,
                               parse_edge_list, verify_equivalence)
from fermispec.fft import interleave_cz_graph, interleave_permutation, \
    imported_interleave_sequence
from fermispec.statevector import circuit_unitary, unitaries_equal_up_to_phase
from fermispec.tableau import tableau_of


def su(c):
    return circuit_unitary(c)


def cz_unitary(g: CZGraph):
    return su(Circuit(g.num_qubits, tuple(cz(a, b) for (a, b) in sorted(g.edges))))


# ---------------------------------------------------------------- rules

def test_cz_removal_toggles_and_involutes():
    g = graph_from_edges(3, [])
    step = DecimationStep(DecimationRule.CZ_REMOVAL, 0, 2)
    g1 = apply_rule(g, step)
    assert g1.edges == frozenset({(0, 2)})
    assert apply_rule(g1, step) == g


def test_cx_conjugation_star():
    # star centered at j=1 with leaves 2,3; i=0 not adjacent to 1
    g = graph_from_edges(4, [(1, 2), (1, 3)])
    step = DecimationStep(DecimationRule.CX_CONJUGATION, 0, 1)
    g1 = apply_rule(g, step)
    assert g1.edges == frozenset({(1, 2), (1, 3), (0, 2), (0, 3)})
    assert not needs_z_correction(g, step)


def test_cx_conjugation_involution():
    # n(j) never contains edges toggled by the move, so applying twice restores
    g = graph_from_edges(5, [(0, 1), (1, 2), (1, 3), (2, 4)])
    for (i, j) in [(0, 1), (4, 1), (2, 3), (3, 1)]:
        step = DecimationStep(DecimationRule.CX_CONJUGATION, i, j)
        assert apply_rule(apply_rule(g, step), step) == g


def test_cx_cy_wrap_on_path():
    # path 0-1-2, wrap on (0,1): toggles (0,2) and (0,1)
    g = graph_from_edges(3, [(0, 1), (1, 2)])
    step = DecimationStep(DecimationRule.CX_CY_WRAP, 0, 1)
    g1 = apply_rule(g, step)
    assert g1.edges == frozenset({(1, 2), (0, 2)})


def test_rule_identities_dense():
    """The rewrite identities hold exactly, including the Z_i by-products."""
    for edges in ([(0, 1)], [(1, 2)], [(0, 1), (1, 2)], [(0, 1), (0, 2), (1, 2)], []):
        g = graph_from_edges(3, edges)
        ug = cz_unitary(g)
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                for rule in (DecimationRule.CX_CONJUGATION, DecimationRule.CX_CY_WRAP):
                    step = DecimationStep(rule, i, j)
                    g1 = apply_rule(g, step)
                    zfix = np.diag([(-1.0) ** ((idx >> (2 - i)) & 1) for idx in range(8)]) \
                        if needs_z_correction(g, step) else np.eye(8)
                    u_cx = su(Circuit(3, (cx(i, j),)))
                    right = su(Circuit(3, (cy(i, j),))) if rule is DecimationRule.CX_CY_WRAP \
                        else u_cx
                    lhs = u_cx @ ug @ right
                    rhs = cz_unitary(g1) @ zfix
                    assert np.max(np.abs(lhs - rhs)) < 1e-12, (edges, rule, i, j)


def test_apply_rule_validates_indices():
    g = graph_from_edges(3, [])
    with pytest.raises(ValueError):
        apply_rule(g, DecimationStep(DecimationRule.CZ_REMOVAL, 1, 1))
    with pytest.raises(ValueError):
        apply_rule(g, DecimationStep(DecimationRule.CZ_REMOVAL, 0, 5))


def test_step_costs():
    assert DecimationStep(DecimationRule.CZ_REMOVAL, 0, 1).cost == 1
    assert DecimationStep(DecimationRule.CX_CONJUGATION, 0, 1).cost == 2
    assert DecimationStep(DecimationRule.CX_CY_WRAP, 0, 1).cost == 2


# ---------------------------------------------------------------- decimate

def test_decimate_empty_graph():
    assert decimate(graph_from_edges(3, [])).gates == ()


def test_decimate_single_edge():
    c = decimate(graph_from_edges(2, [(0, 1)]))
    assert [g.kind for g in c.gates] == [GateKind.CZ]


def test_decimate_nine_qubit_interleave():
    g = interleave_cz_graph(interleave_permutation(9, 3))
    c = decimate(g)
    assert two_qubit_count(c) <= 9
    assert verify_equivalence(c, g)
    assert tableau_of(c) == tableau_of(imported_interleave_sequence(9))


def test_decimate_deterministic():
    g = graph_from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 4), (3, 5)])
    assert decimate(g).gates == decimate(g).gates


@given(st.integers(2, 7), st.data())
@settings(max_examples=40)
def test_decimate_soundness(n, data):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = data.draw(st.lists(st.sampled_from(pairs), max_size=12, unique=True))
    g = graph_from_edges(n, edges)
    c = decimate(g)
    assert two_qubit_count(c) <= g.num_edges
    assert verify_equivalence(c, g)
    assert unitaries_equal_up_to_phase(su(c), cz_unitary(g), 1e-10)


def test_depth_penalty_variants_stay_sound():
    g = graph_from_edges(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    for penalty in (0.0, 0.5, 2.0):
        c = decimate(g, penalty)
        assert verify_equivalence(c, g)


# ---------------------------------------------------------------- verify

def test_verify_equivalence_examples():
    assert verify_equivalence(Circuit(2, (cz(0, 1),)), graph_from_edges(2, [(0, 1)]))
    assert not verify_equivalence(Circuit(2, (cx(0, 1),)), graph_from_edges(2, []))


def test_verify_equivalence_rejects_non_clifford():
    from fermispec.circuits import givens
    with pytest.raises(ValueError):
        verify_equivalence(Circuit(2, (givens(0.3, 0, 1),)), graph_from_edges(2, []))


def test_verify_27_qubit_listing_vs_graph():
    g = interleave_cz_graph(interleave_permutation(27, 3))
    assert verify_equivalence(imported_interleave_sequence(27), g)


def test_edge_list_round_trip():
    g = graph_from_edges(5, [(0, 3), (1, 2)])
    assert parse_edge_list(format_edge_list(g)) == g
