import math

import numpy as np
import pytest

from artifact import finite_field as ff
from artifact.abelian_group import cyclic
from artifact.constructions import build_eitff_4_5_2, build_harmonic_etf, build_qm1_generator
from artifact.errors import ValidationError
from artifact.fusion_frame import (
    Certificate,
    FusionFrame,
    certify,
    check_tight,
    chordal_distance,
    direct_sum,
    fusion_gram,
    naimark_complement,
    principal_angles,
    spatial_complement,
    spectral_distance,
    welch_bound,
)
from artifact.harmonic import harmonic_ensemble


@pytest.fixture
def eitff452():
    return harmonic_ensemble(build_eitff_4_5_2())


@pytest.fixture
def etf37():
    return harmonic_ensemble(build_harmonic_etf(cyclic(7), [(1,), (2,), (4,)]))


def basis_partition(d, r):
    eye = np.eye(d, dtype=complex)
    return FusionFrame(d, tuple(eye[:, i * r:(i + 1) * r] for i in range(d // r)))


def test_gram_basics(eitff452):
    single = FusionFrame(3, (np.eye(3)[:, :2],))
    assert np.allclose(fusion_gram(single), np.eye(2))
    g = fusion_gram(eitff452)
    for i in range(5):
        for j in range(5):
            if i != j:
                sv = np.linalg.svd(g[2 * i:2 * i + 2, 2 * j:2 * j + 2], compute_uv=False)
                assert np.allclose(sv, math.sqrt(3 / 8))
    assert np.allclose(fusion_gram(basis_partition(6, 2)), np.eye(6))


def test_check_tight():
    copies = FusionFrame(3, tuple(np.eye(3) for _ in range(4)))
    ok, a, _ = check_tight(copies)
    assert ok and a == pytest.approx(4)
    gen = build_eitff_4_5_2().as_frame()
    ok, a, _ = check_tight(gen)
    assert ok and a == pytest.approx(2)
    rng = np.random.default_rng(7)
    mats = tuple(np.linalg.qr(rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2)))[0] for _ in range(5))
    ok, _, res = check_tight(FusionFrame(4, mats))
    assert not ok and res > 1e-9


def test_welch_bound():
    assert welch_bound(4, 5, 2) == pytest.approx(math.sqrt(3 / 8))
    assert welch_bound(3, 1, 1) is None


def test_angles_and_distances(eitff452):
    same = FusionFrame(3, (np.eye(3)[:, :2], np.eye(3)[:, :2]))
    assert np.allclose(principal_angles(same, 0, 1), 0, atol=1e-7)
    assert chordal_distance(same, 0, 1) == pytest.approx(0, abs=1e-7)
    assert spectral_distance(same, 0, 1) == pytest.approx(0, abs=1e-7)
    orth = basis_partition(4, 2)
    assert np.allclose(principal_angles(orth, 0, 1), math.pi / 2)
    assert chordal_distance(orth, 0, 1) == pytest.approx(math.sqrt(2))
    assert spectral_distance(orth, 0, 1) == pytest.approx(1)
    assert np.allclose(principal_angles(eitff452, 0, 3), math.acos(math.sqrt(3 / 8)))
    for i, j in ((0, 1), (2, 4)):
        assert spectral_distance(eitff452, i, j) == pytest.approx(chordal_distance(eitff452, i, j) / math.sqrt(2))
    with pytest.raises(ValidationError):
        principal_angles(eitff452, 1, 1)


def test_certify_classes(eitff452, etf37):
    c = certify(eitff452)
    assert c.is_tight and c.is_equiisoclinic and c.is_equichordal and c.sigma_matches_welch
    trivial = certify(basis_partition(6, 2))
    assert trivial.trivial and trivial.is_equiisoclinic and trivial.sigma == pytest.approx(0)
    e = certify(etf37)
    assert e.is_equiisoclinic and e.chordal_value == pytest.approx(math.sqrt(1 - 2 / 9))
    for i in range(7):
        for j in range(7):
            if i != j:
                assert abs(etf37.cross_gram(i, j)[0, 0]) == pytest.approx(math.sqrt(2) / 3)


def test_certify_tight_not_equichordal():
    rng = np.random.default_rng(3)
    u1, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    u2, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    mats = (u1[:, :2], u1[:, 2:], u2[:, :2], u2[:, 2:])
    c = certify(FusionFrame(4, mats))
    assert c.is_tight and not c.is_equichordal and not c.is_equiisoclinic


def test_certificate_invariants_and_json(eitff452):
    c = certify(eitff452)
    assert not c.is_equiisoclinic or c.is_equichordal
    residuals = (c.isometry_residual, c.tight_residual, c.equichordal_deviation, c.equiisoclinic_deviation)
    assert all(r >= 0 for r in residuals)
    assert Certificate.from_json(c.to_json()).to_json() == c.to_json()
    assert len(c.principal_angles) == 10


def test_naimark_complement(eitff452, etf37):
    comp = naimark_complement(eitff452)
    c = certify(comp)
    assert (comp.ambient_dim, comp.num_subspaces, comp.ranks[0]) == (6, 5, 2) and c.is_equiisoclinic
    e = naimark_complement(etf37)
    assert e.ambient_dim == 4 and certify(e).is_equiisoclinic
    with pytest.raises(ValidationError):
        naimark_complement(basis_partition(4, 2))


def test_spatial_complement(eitff452):
    gen = build_eitff_4_5_2().as_frame()
    comp = spatial_complement(gen)
    assert comp.ranks == (2, 1, 1, 1, 1) and certify(comp).is_tight
    half = certify(spatial_complement(eitff452))
    assert half.is_equiisoclinic
    eitff672 = harmonic_ensemble(build_qm1_generator(ff.build_field(7, 1), 2, [0, 1]))
    c = certify(spatial_complement(eitff672))
    assert c.ranks == [4] * 7
    assert c.is_tight and c.is_equichordal and not c.is_equiisoclinic


def test_direct_sum(etf37):
    two = direct_sum([etf37, etf37])
    c = certify(two)
    assert (two.ambient_dim, two.ranks[0]) == (6, 2) and c.is_equiisoclinic
    with pytest.raises(ValidationError, match="inconsistent"):
        direct_sum([etf37, naimark_complement(etf37)])
    one = direct_sum([etf37])
    assert np.allclose(fusion_gram(one), fusion_gram(etf37))


def test_perturbed_frame_is_not_tight(etf37):
    mats = list(etf37.isometries)
    mats[0] = mats[0] * 1.001
    assert not certify(FusionFrame(3, tuple(mats))).is_tight


def test_json_round_trip(etf37):
    back = FusionFrame.from_json(etf37.to_json())
    assert back.group == etf37.group
    assert np.array_equal(fusion_gram(back), fusion_gram(etf37))
    with pytest.raises(ValidationError):
        FusionFrame.from_json({"ambient_dim": 3})
