"""Explicit generating TFFs over finite fields and small cyclic groups."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import finite_field as ff
from .abelian_group import FiniteAbelianGroup, cyclic
from .cmatrix import DEFAULT_TOL
from .errors import ValidationError
from .finite_field import FiniteField
from .fusion_frame import FusionFrame
from .harmonic import GeneratingTFF, dft_spectrum, harmonic_ensemble

THETA = 2 * math.pi / 5
U_REAL = np.array([[math.sqrt(2), 0, 0], [0, 1, 1], [0, 1j, -1j]]) / math.sqrt(2)
GF11_DUAL_GENERATORS = (1, 3, 7, 9)
FIXED_TARGET = np.array(
    [
        [1, math.sqrt(2), math.sqrt(2)],
        [math.sqrt(2), (-1 + math.sqrt(5)) / 2, (-1 - math.sqrt(5)) / 2],
        [math.sqrt(2), (-1 - math.sqrt(5)) / 2, (-1 + math.sqrt(5)) / 2],
    ]
) / math.sqrt(5)


def _field_group(field: FiniteField) -> FiniteAbelianGroup:
    group, _, _ = ff.additive_group_of(field)
    return group


def _check_indices(field: FiniteField, R: int, char_indices: Sequence[int]) -> list[int]:
    q = field.q
    if not 1 <= R <= q - 1:
        raise ValidationError(f"R must lie in [1, {q - 1}], got {R}")
    idx = [int(m) % (q - 1) for m in char_indices]
    if len(idx) != R:
        raise ValidationError(f"need {R} character indices, got {len(idx)}")
    if len(set(idx)) != R:
        raise ValidationError(f"character indices must be distinct: {list(char_indices)}")
    if idx[0] != 0:
        raise ValidationError("the first character must be the trivial one (index 0)")
    return idx


def default_qm1_indices(field: FiniteField, R: int) -> list[int]:
    """[0, 1] for R = 2 (chi_1 is odd for odd Q), otherwise 0..R-1."""
    return list(range(R))


def default_q_indices(field: FiniteField, R: int) -> list[int]:
    """[0, 2] for R = 2 (the smallest even nontrivial character), otherwise 0..R-1."""
    if R == 2:
        m = next((m for m in range(1, field.q - 1) if ff.char_parity(field, m) == "even"), None)
        if m is None:
            raise ValidationError(f"GF({field.q}) has no even nontrivial multiplicative character")
        return [0, m]
    return list(range(R))


def build_qm1_generator(field: FiniteField, R: int, char_indices: Optional[Sequence[int]] = None) -> GeneratingTFF:
    """Psi_0 is R x 0 and Psi_x = (chi_r(x))_r / sqrt(R) for x != 0; D = Q - 1."""
    idx = _check_indices(field, R, default_qm1_indices(field, R) if char_indices is None else char_indices)
    chars = np.stack([ff.mult_char_vector(field, m) for m in idx])
    mats = [np.zeros((R, 0), dtype=complex)]
    mats += [chars[:, x:x + 1] / math.sqrt(R) for x in range(1, field.q)]
    return GeneratingTFF(_field_group(field), R, tuple(mats))


def build_q_generator(field: FiniteField, R: int, char_indices: Optional[Sequence[int]] = None) -> GeneratingTFF:
    """Psi_0 = e_1 and, for x != 0, Psi_x(1) = sqrt((Q-R)/(R(Q-1))), Psi_x(r) = sqrt(Q/(R(Q-1))) chi_r(x)."""
    q = field.q
    idx = _check_indices(field, R, default_q_indices(field, R) if char_indices is None else char_indices)
    chars = np.stack([ff.mult_char_vector(field, m) for m in idx])
    e1 = np.zeros((R, 1), dtype=complex)
    e1[0, 0] = 1
    mats = [e1]
    for x in range(1, q):
        col = math.sqrt(q / (R * (q - 1))) * chars[:, x].copy()
        col[0] = math.sqrt((q - R) / (R * (q - 1)))
        mats.append(col[:, None])
    return GeneratingTFF(_field_group(field), R, tuple(mats))


def gf11_omega(field: FiniteField, chi_index: int = 1) -> complex:
    """omega = <gamma_1, chi^6> / <gamma_1, chi>."""
    return ff.gauss_sum(field, 1, 6 * chi_index) / ff.gauss_sum(field, 1, chi_index)


def build_gf11_generator(realify: bool = False, chi_index: int = 1, theta: float = THETA) -> GeneratingTFF:
    """Rank-one generating TFF(3, 11, 1) over GF(11) for a generator chi = chi_m of the dual.

    With the default theta = 2 pi/5 the ensemble is equi-isoclinic for
    chi_1 and chi_9 only; chi_3 and chi_7 need theta = 4 pi/5.
    """
    if chi_index % 10 not in GF11_DUAL_GENERATORS:
        raise ValidationError(f"chi index must generate the dual of GF(11)^x, one of {GF11_DUAL_GENERATORS}")
    field = ff.build_field(11, 1)
    chi = ff.mult_char_vector(field, chi_index)
    omega = gf11_omega(field, chi_index)
    c, s = math.cos(theta), math.sin(theta)
    mats = [np.array([[1], [0], [0]], dtype=complex)]
    for x in range(1, 11):
        leg = ff.legendre(field, x)
        col = math.sqrt(11 / 30) * np.array(
            [
                math.sqrt(8 / 11),
                chi[x] * (c * leg + 1j * s * omega),
                np.conj(chi[x]) * (c * leg + 1j * s * np.conj(omega)),
            ]
        )
        mats.append(col[:, None])
    if realify:
        mats = [U_REAL @ m for m in mats]
    return GeneratingTFF(_field_group(field), 3, tuple(mats))


def build_harmonic_etf(group: FiniteAbelianGroup, subset: Sequence[Sequence[int]]) -> GeneratingTFF:
    """R = 1 generator with D_g = 1 exactly on the subset."""
    members = {group.index(g) for g in subset}
    if not members:
        raise ValidationError("subset must be nonempty")
    one = np.ones((1, 1), dtype=complex)
    empty = np.zeros((1, 0), dtype=complex)
    return GeneratingTFF(group, 1, tuple(one if i in members else empty for i in range(group.order)))


def build_eitff_4_5_2() -> GeneratingTFF:
    """Generator of the EITFF(4,5,2) over Z_5 with columns (1,1), (1,i), (1,-i), (1,-1) over sqrt 2."""
    cols = [np.zeros((2, 0), dtype=complex)]
    for v in (1, 1j, -1j, -1):
        cols.append(np.array([[1], [v]], dtype=complex) / math.sqrt(2))
    return GeneratingTFF(cyclic(5), 2, tuple(cols))


@dataclass(frozen=True, eq=False)
class FixedMatrixReport:
    chi_index: int
    omega: complex
    z51: complex
    fixed_matrix_residuals: list[float]
    cube_residuals: list[float]
    tol: float

    @property
    def max_fixed_residual(self) -> float:
        return max(self.fixed_matrix_residuals)

    @property
    def max_cube_residual(self) -> float:
        return max(self.cube_residuals)

    @property
    def passed(self) -> bool:
        return self.max_fixed_residual <= self.tol


def fixed_matrix_check(
    gen: GeneratingTFF, chi_index: int = 1, realified: bool = False, tol: float = DEFAULT_TOL
) -> FixedMatrixReport:
    """Check (3 sqrt5/11) Delta_y D_y M_y D_y* Delta_y against the fixed orthogonal matrix for y != 0."""
    field = ff.build_field(11, 1)
    if gen.group.factors != (11,) or gen.R != 3:
        raise ValidationError("expected the rank-one generating TFF(3, 11, 1) over GF(11)")
    m = dft_spectrum(gen).matrices
    if realified:
        m = np.einsum("ij,gjk,kl->gil", U_REAL.conj().T, m, U_REAL)
    omega = gf11_omega(field, chi_index)
    c, s = math.cos(THETA), math.sin(THETA)
    scale = 3 * math.sqrt(5) / 11
    fixed, cube = [], []
    for y in range(1, 11):
        z1y = ff.gauss_sum(field, y, chi_index)
        w = omega * z1y / math.sqrt(11)
        dy = np.diag([1, np.conj(w), w])
        leg = ff.legendre(field, y)
        delta = np.diag([1, c * leg - 1j * s, c * leg + 1j * s])
        core = scale * dy @ m[y] @ dy.conj().T
        fixed.append(float(np.linalg.norm(delta @ core @ delta - FIXED_TARGET)))
        cube.append(float(np.linalg.norm(np.linalg.matrix_power(core, 3) + np.eye(3))))
    return FixedMatrixReport(chi_index, omega, ff.gauss_sum(field, 1, 5 * chi_index), fixed, cube, tol)


FAMILIES = (
    "EITFF_Qm1_Q_2",
    "ECTFF_Qm1_Q_R",
    "EITFF_Q_Q_2",
    "ECTFF_Q_Q_R",
    "EITFF_11_11_3",
    "HARMONIC_ETF",
    "EXAMPLE_4_5_2",
)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    p: Optional[int] = None
    k: int = 1
    R: Optional[int] = None
    char_indices: Optional[tuple[int, ...]] = None
    group_factors: Optional[tuple[int, ...]] = None
    diff_set: Optional[tuple[tuple[int, ...], ...]] = None
    realify: bool = False
    chi_index: int = 1

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "p": self.p,
            "k": self.k,
            "R": self.R,
            "char_indices": None if self.char_indices is None else list(self.char_indices),
            "group": None if self.group_factors is None else {"factors": list(self.group_factors)},
            "diff_set": None if self.diff_set is None else [list(g) for g in self.diff_set],
            "realify": self.realify,
            "chi_index": self.chi_index,
        }


@dataclass(frozen=True)
class Claim:
    """Properties a family promises: 'tight', 'equichordal', 'equiisoclinic', 'real'."""

    properties: tuple[str, ...]
    shape: tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class Construction:
    spec: FamilySpec
    generator: GeneratingTFF
    frame: FusionFrame
    claim: Claim = field(default=None)


def _need_field(spec: FamilySpec) -> FiniteField:
    if spec.p is None:
        raise ValidationError(f"family {spec.family} needs a field")
    return ff.build_field(spec.p, spec.k)


def build_family(spec: FamilySpec) -> Construction:
    fam = spec.family
    if fam not in FAMILIES:
        raise ValidationError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
    props: tuple[str, ...]
    if fam in ("EITFF_Qm1_Q_2", "ECTFF_Qm1_Q_R"):
        field = _need_field(spec)
        if field.q % 2 == 0:
            raise ValidationError("this family needs odd Q")
        r = 2 if fam == "EITFF_Qm1_Q_2" else (spec.R or 2)
        if fam == "EITFF_Qm1_Q_2" and spec.char_indices is not None:
            m = spec.char_indices[-1]
            if ff.char_parity(field, m) != "odd":
                raise ValidationError(f"character {m} is even; this family needs an odd one")
        gen = build_qm1_generator(field, r, spec.char_indices)
        props = ("tight", "equiisoclinic") if fam == "EITFF_Qm1_Q_2" else ("tight", "equichordal")
        shape = (field.q - 1, field.q, r)
    elif fam in ("EITFF_Q_Q_2", "ECTFF_Q_Q_R"):
        field = _need_field(spec)
        if field.q < 4:
            raise ValidationError("this family needs Q >= 4")
        r = 2 if fam == "EITFF_Q_Q_2" else (spec.R or 2)
        if fam == "EITFF_Q_Q_2" and spec.char_indices is not None:
            m = spec.char_indices[-1]
            if ff.char_parity(field, m) != "even":
                raise ValidationError(f"character {m} is odd; this family needs an even one")
        gen = build_q_generator(field, r, spec.char_indices)
        props = ("tight", "equiisoclinic") if fam == "EITFF_Q_Q_2" else ("tight", "equichordal")
        shape = (field.q, field.q, r)
    elif fam == "EITFF_11_11_3":
        gen = build_gf11_generator(spec.realify, spec.chi_index)
        props = ("tight", "equiisoclinic") + (("real",) if spec.realify else ())
        shape = (11, 11, 3)
    elif fam == "HARMONIC_ETF":
        if spec.group_factors is None or not spec.diff_set:
            raise ValidationError("HARMONIC_ETF needs a group and a nonempty subset")
        group = FiniteAbelianGroup(spec.group_factors)
        gen = build_harmonic_etf(group, spec.diff_set)
        props = ("tight",)
        shape = (len({group.index(g) for g in spec.diff_set}), group.order, 1)
    else:
        gen = build_eitff_4_5_2()
        props = ("tight", "equiisoclinic")
        shape = (4, 5, 2)
    return Construction(spec, gen, harmonic_ensemble(gen), Claim(props, shape))
