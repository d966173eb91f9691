import math

import numpy as np
import pytest

from artifact import cmatrix as cm
from artifact import conference as cf
from artifact import finite_field as ff
from artifact.constructions import build_eitff_4_5_2
from artifact.errors import ValidationError
from artifact.fusion_frame import certify
from artifact.harmonic import harmonic_ensemble


def test_basic_ops():
    assert np.allclose(cm.adjoint([[1j]]), [[-1j]])
    assert math.isclose(cm.frobenius_norm(cm.identity(3)), math.sqrt(3))
    assert cm.multiply(cm.identity(2), cm.zeros(2, 0)).shape == (2, 0)
    with pytest.raises(ValidationError):
        cm.multiply(cm.zeros(2, 3), cm.zeros(2, 3))
    assert cm.spectral_norm(np.diag([3, 1])) == pytest.approx(3)


def test_hermitian_eig():
    vals, vecs = cm.hermitian_eig(np.eye(2))
    assert np.allclose(vals, [1, 1])
    vals, vecs = cm.hermitian_eig([[0, 1], [1, 0]])
    assert np.allclose(vals, [1, -1])
    assert np.allclose(vecs.conj().T @ vecs, np.eye(2))
    with pytest.raises(ValidationError):
        cm.hermitian_eig([[0, 1], [0, 0]])


def test_signature_of_eitff_has_two_eigenvalues():
    s = cf.signature_of(harmonic_ensemble(build_eitff_4_5_2())).matrix
    vals, _ = cm.hermitian_eig(s)
    distinct = np.unique(np.round(vals, 8))
    assert len(distinct) == 2 and distinct[0] < 0 < distinct[1]


def test_singular_values():
    assert np.allclose(cm.singular_values(np.zeros((3, 2))), 0)
    q, _ = np.linalg.qr(np.random.default_rng(1).normal(size=(4, 4)) + 1j)
    assert np.allclose(cm.singular_values(q), 1)
    f = harmonic_ensemble(build_eitff_4_5_2())
    assert np.allclose(cm.singular_values(f.cross_gram(0, 1)), math.sqrt(3 / 8))
    assert cm.singular_values(cm.zeros(0, 3)).size == 0


def test_factor_gram():
    phi = cm.factor_gram(np.eye(3))
    assert phi.shape == (3, 3) and np.allclose(phi.conj().T @ phi, np.eye(3))
    j = np.ones((3, 3))
    phi = cm.factor_gram(j)
    assert phi.shape == (1, 3) and np.allclose(phi.conj().T @ phi, j)
    with pytest.raises(ValidationError):
        cm.factor_gram(np.diag([1.0, -1.0]))


def test_factor_gram_signature_pipeline_gf7():
    field = ff.build_field(7, 1)
    core = cf.extract_core(cf.paley_conference(field, 2))
    assert core.epsilon == 1
    sig = cf.signature_from_core(core)
    out = cf.frame_from_signature(sig)
    assert out.D == 7 and certify(out.frame).is_equiisoclinic


def test_orthocomplement_and_block_diag():
    phi = np.array([[1], [0], [0]], dtype=complex)
    comp = cm.orthocomplement(phi)
    assert comp.shape == (3, 2)
    assert np.allclose(comp.conj().T @ phi, 0) and np.allclose(comp.conj().T @ comp, np.eye(2))
    b = cm.block_diag(np.eye(1), np.ones((2, 0)), 2 * np.eye(2))
    assert b.shape == (5, 3)


def test_json_round_trip():
    m = np.array([[1 + 2j, 0.1], [1 / 3, -1j]])
    obj = cm.to_json(m)
    assert obj["rows"] == 2 and obj["cols"] == 2
    assert np.array_equal(cm.from_json(obj), m)
    assert cm.from_json(cm.to_json(cm.zeros(2, 0))).shape == (2, 0)
    with pytest.raises(ValidationError):
        cm.from_json({"rows": 2, "cols": 2, "re": [[1, 2]], "im": [[0, 0]]})
