import numpy as np
import pytest

from sivic.errors import SynthesisError
from sivic.gates import (
    GATE_NAMES,
    GateTarget,
    KET_PLUS_X,
    KET_UP,
    canonical_gate_name,
    standard_gate,
)


def test_all_standard_gates_are_unitary():
    for name in GATE_NAMES:
        g = standard_gate(name)
        assert np.allclose(g.matrix @ g.matrix.conj().T, np.eye(2), atol=1e-14)


def test_x_gate_pairs():
    g = standard_gate("X")
    (chi0, chit0), (chi1, chit1) = g.state_pairs
    assert np.allclose(chi0, KET_UP)
    assert np.allclose(chit0, [0, 1])          # Up -> Down
    assert np.allclose(chi1, KET_PLUS_X)
    assert np.allclose(chit1, KET_PLUS_X)      # +X is an eigenstate


def test_pairs_are_nonorthogonal_and_distinct():
    for name in GATE_NAMES:
        (chi0, _), (chi1, _) = standard_gate(name).state_pairs
        overlap = abs(chi0.conj() @ chi1)
        assert 0.0 < overlap < 1.0


def test_phase_gate_algebra():
    s = standard_gate("S").matrix
    z = standard_gate("Z").matrix
    product = s @ s
    phase = product[0, 0] / z[0, 0]
    assert np.allclose(product, phase * z, atol=1e-14)

    t = standard_gate("T").matrix
    t_inv = standard_gate("T-1").matrix
    assert np.allclose(t_inv @ t, np.eye(2), atol=1e-14)

    h = standard_gate("H").matrix
    assert np.allclose(h @ h, np.eye(2), atol=1e-14)


def test_aliases():
    assert canonical_gate_name("sdg") == "S-1"
    assert canonical_gate_name("Tinv") == "T-1"
    assert canonical_gate_name("x") == "X"
    assert standard_gate("t^-1").name == "T-1"


def test_unknown_gate_rejected():
    with pytest.raises(SynthesisError, match="unknown gate"):
        standard_gate("CNOT")


def test_custom_target_requires_unitary():
    with pytest.raises(SynthesisError, match="unitary"):
        GateTarget.from_matrix("bad", np.array([[1, 0], [0, 2.0]]))
    custom = GateTarget.from_matrix("I", np.eye(2))
    assert np.allclose(custom.state_pairs[0][1], KET_UP)
