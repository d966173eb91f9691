"""Harmonic matrix ensembles and their DFT-based classification.

A generating TFF is a group-indexed family of isometries Psi_g (R x D_g).
Its ensemble has one D x R isometry per character,

    Phi_gamma((g, d), r) = sqrt(R/D) gamma(g) conj(Psi_g(r, d)),

with rows ordered by group element and then by d. Cross-Grams satisfy
Phi_1* Phi_2 = (R/D) M_{gamma_1 gamma_2^-1} where M = entrywise DFT of the
projections P_g = Psi_g Psi_g*.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import cmatrix
from .abelian_group import FiniteAbelianGroup, character_table, entrywise_dft
from .cmatrix import DEFAULT_RANK_TOL, DEFAULT_TOL
from .errors import InconsistencyError, ValidationError
from .fusion_frame import FusionFrame, check_tight, fusion_gram


@dataclass(frozen=True, eq=False)
class GeneratingTFF:
    group: FiniteAbelianGroup
    R: int
    isometries: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        mats = tuple(cmatrix.as_matrix(m) for m in self.isometries)
        if len(mats) != self.group.order:
            raise ValidationError(f"need {self.group.order} isometries, got {len(mats)}")
        for i, m in enumerate(mats):
            if m.shape[0] != self.R:
                raise ValidationError(f"isometry {i} has {m.shape[0]} rows, expected R={self.R}")
        object.__setattr__(self, "isometries", mats)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(m.shape[1] for m in self.isometries)

    @property
    def D(self) -> int:
        return sum(self.dims)

    def projections(self) -> np.ndarray:
        """Array of shape (G, R, R) holding P_g = Psi_g Psi_g*."""
        return np.stack([m @ m.conj().T for m in self.isometries])

    def isometry_residual(self) -> float:
        return max(cmatrix.frobenius_norm(m.conj().T @ m - np.eye(m.shape[1])) for m in self.isometries)

    def tight_residual(self) -> float:
        return cmatrix.frobenius_norm(self.projections().sum(axis=0) - self.D / self.R * np.eye(self.R))

    def is_tff(self, tol: float = DEFAULT_TOL) -> bool:
        return self.isometry_residual() <= tol and self.tight_residual() <= tol

    def as_frame(self) -> FusionFrame:
        """The generator itself as a (nonuniform) fusion frame for C^R."""
        return FusionFrame(self.R, self.isometries, self.group)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "R": self.R,
            "isometries": [cmatrix.to_json(m) for m in self.isometries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratingTFF":
        try:
            return cls(
                FiniteAbelianGroup.from_json(obj["group"]),
                int(obj["R"]),
                tuple(cmatrix.from_json(m) for m in obj["isometries"]),
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed generating TFF: {exc}") from exc

    @classmethod
    def from_projections(
        cls, group: FiniteAbelianGroup, projections: Sequence, rank_tol: float = DEFAULT_RANK_TOL
    ) -> "GeneratingTFF":
        """Recover isometries Psi_g with Psi_g Psi_g* = P_g."""
        mats = [cmatrix.as_matrix(p) for p in projections]
        if not mats:
            raise ValidationError("no projections given")
        r = mats[0].shape[0]
        return cls(group, r, tuple(cmatrix.factor_gram(p, rank_tol).conj().T.reshape(r, -1) for p in mats))


def generator_spatial_complement(gen: GeneratingTFF) -> GeneratingTFF:
    return GeneratingTFF(gen.group, gen.R, tuple(cmatrix.orthocomplement(m) for m in gen.isometries))


def block_diagonal_generator(gens: Sequence[GeneratingTFF]) -> GeneratingTFF:
    """Psi_g = diag(Psi_g^(1), Psi_g^(2), ...) over a common group."""
    gens = list(gens)
    group = gens[0].group
    if any(g.group != group for g in gens):
        raise ValidationError("generators must share a group")
    mats = tuple(cmatrix.block_diag(*(g.isometries[i] for g in gens)) for i in range(group.order))
    return GeneratingTFF(group, sum(g.R for g in gens), mats)


def harmonic_ensemble(gen: GeneratingTFF) -> FusionFrame:
    """The G isometries Phi_gamma of the harmonic matrix ensemble."""
    d, r = gen.D, gen.R
    if d == 0:
        raise ValidationError("generating TFF has D = 0")
    psi_star = np.vstack([m.conj().T for m in gen.isometries])
    row_group = np.repeat(np.arange(gen.group.order), gen.dims)
    table = character_table(gen.group)
    scale = np.sqrt(r / d)
    mats = tuple(scale * table[row_group, c][:, None] * psi_star for c in range(gen.group.order))
    return FusionFrame(d, mats, gen.group)


@dataclass(frozen=True, eq=False)
class DftSpectrum:
    group: FiniteAbelianGroup
    R: int
    D: int
    dims: tuple[int, ...]
    projections: np.ndarray
    matrices: np.ndarray

    @property
    def A(self) -> float:
        return self.D / self.R

    @property
    def B(self) -> Optional[float]:
        g = self.group.order
        return None if g < 2 else self.D * (g * self.R - self.D) / (self.R**2 * (g - 1))

    @property
    def C(self) -> Optional[float]:
        g = self.group.order
        return None if g < 2 else self.D * (self.D - self.R) / (self.R**2 * (g - 1))

    def trace_residual(self) -> float:
        """max |Tr(M_gamma) - sum_g conj(gamma(g)) D_g|."""
        expect = character_table(self.group).conj().T @ np.array(self.dims, dtype=float)
        return float(np.max(np.abs(np.einsum("cii->c", self.matrices) - expect)))

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "R": self.R,
            "D": self.D,
            "A": self.A,
            "B": self.B,
            "C": self.C,
            "matrices": [cmatrix.to_json(m) for m in self.matrices],
        }


def dft_spectrum(gen: GeneratingTFF) -> DftSpectrum:
    p = gen.projections()
    return DftSpectrum(gen.group, gen.R, gen.D, gen.dims, p, entrywise_dft(gen.group, p))


def autocorrelation(group: FiniteAbelianGroup, projections: np.ndarray) -> np.ndarray:
    """A_g = sum_{g'} P_{g'} P_{g' + g}, shape (G, R, R)."""
    shifted = projections[group.add_table]
    return np.einsum("hij,hgjk->gik", projections, shifted)


@dataclass(frozen=True)
class HarmonicClass:
    kind: str
    A: float
    B: Optional[float]
    C: Optional[float]
    tight_deviation: float
    ei_deviation: Optional[float]
    ec_deviation: Optional[float]
    difference_deviation: Optional[float]
    trivial: bool

    @property
    def is_eitff(self) -> bool:
        return self.kind == "EITFF"

    @property
    def is_ectff(self) -> bool:
        return self.kind in ("EITFF", "ECTFF")


def classify_harmonic(spec: DftSpectrum, tol: float = DEFAULT_TOL) -> HarmonicClass:
    """EITFF / ECTFF / TFF classification from the DFT spectrum.

    EI is decided by ||M_gamma* M_gamma - B I||_F <= tol for gamma != 1 with B
    pinned to its closed form. The autocorrelation criterion is evaluated
    independently; the two deviations obey exact mutual bounds and a
    violation beyond 2 tol raises InconsistencyError.
    """
    g, r, d = spec.group.order, spec.R, spec.D
    m = spec.matrices
    eye = np.eye(r)
    tight_dev = cmatrix.frobenius_norm(m[0] - spec.A * eye)
    if tight_dev > tol:
        raise ValidationError(f"projections do not sum to (D/R) I (deviation {tight_dev:.3e})")
    trivial = d == g * r
    if g < 2:
        return HarmonicClass("EITFF", spec.A, None, None, tight_dev, 0.0, 0.0, 0.0, True)

    b, c = spec.B, spec.C
    gram = np.einsum("gji,gjk->gik", m.conj(), m)
    ei_dev = float(max(cmatrix.frobenius_norm(gram[k] - b * eye) for k in range(1, g)))
    ec_dev = float(max(abs(cmatrix.frobenius_norm(m[k]) ** 2 / r - b) for k in range(1, g)))

    auto = autocorrelation(spec.group, spec.projections)
    diff_dev = float(max(cmatrix.frobenius_norm(auto[k] - c * eye) for k in range(1, g)))
    zero_dev = cmatrix.frobenius_norm(auto[0] - spec.A * eye)
    one_dev = cmatrix.frobenius_norm(gram[0] - spec.A**2 * eye)
    if ei_dev > zero_dev + (g - 1) * diff_dev + 2 * tol or diff_dev > (one_dev + (g - 1) * ei_dev) / g + 2 * tol:
        raise InconsistencyError(
            f"operator and autocorrelation criteria disagree: {ei_dev:.3e} vs {diff_dev:.3e}"
        )

    if ei_dev <= tol and ec_dev <= tol:
        kind = "EITFF"
    elif ec_dev <= tol:
        kind = "ECTFF"
    else:
        kind = "TFF"
    return HarmonicClass(kind, spec.A, b, c, tight_dev, ei_dev, ec_dev, diff_dev, trivial)


def check_difference_projections(gen: GeneratingTFF, tol: float = DEFAULT_TOL) -> tuple[bool, Optional[float], float]:
    """Whether sum_{g'} P_{g'} P_{g'+g} = C I for all g != 0; returns (ok, C, deviation)."""
    g, r, d = gen.group.order, gen.R, gen.D
    if g < 2:
        return True, None, 0.0
    c = d * (d - r) / (r**2 * (g - 1))
    auto = autocorrelation(gen.group, gen.projections())
    dev = float(max(cmatrix.frobenius_norm(auto[k] - c * np.eye(r)) for k in range(1, g)))
    return dev <= tol, c, dev


def check_real(gen: GeneratingTFF, tol: float = DEFAULT_TOL) -> bool:
    """Sufficient realness test: P_g = conj(P_{-g}) entrywise for every g.

    A False result does not show the ensemble is non-real.
    """
    p = gen.projections()
    return float(np.max(np.abs(p - p[gen.group.neg_index].conj()))) <= tol


def check_block_circulant(f: FusionFrame, tol: float = DEFAULT_TOL) -> bool:
    """Whether Phi_1* Phi_2 depends only on gamma_1^-1 gamma_2."""
    if f.group is None:
        raise ValidationError("block-circulant test needs a group-indexed frame")
    if not f.is_uniform:
        raise ValidationError("block-circulant test needs uniform ranks")
    return _circulant_deviation(f) <= tol


def _circulant_deviation(f: FusionFrame) -> float:
    group = f.group
    n = group.order
    ref = [f.cross_gram(0, k) for k in range(n)]
    dev = 0.0
    for i in range(n):
        for j in range(n):
            k = group.add_table[group.neg_index[i], j]
            dev = max(dev, cmatrix.frobenius_norm(f.cross_gram(i, j) - ref[k]))
    return dev


@dataclass(frozen=True, eq=False)
class Representation:
    pi: np.ndarray
    unitarity_residual: float
    homomorphism_residual: float
    orbit_residual: float


def reconstruct_representation(f: FusionFrame, tol: float = DEFAULT_TOL) -> Representation:
    """pi(gamma_1) = (D/GR) sum_{gamma_2} Phi_{gamma_1 gamma_2} Phi_{gamma_2}*."""
    if f.group is None:
        raise ValidationError("representation needs a group-indexed frame")
    circ = _circulant_deviation(f) if f.is_uniform else float("inf")
    tight, _, tres = check_tight(f, tol)
    if circ > tol or not tight:
        raise ValidationError(
            f"frame must be tight with block-circulant Gram (circulant {circ:.3e}, tight {tres:.3e})"
        )
    group = f.group
    g, d, r = group.order, f.ambient_dim, f.ranks[0]
    phis = np.stack(f.isometries)
    add = group.add_table
    pi = np.stack([d / (g * r) * np.einsum("kij,klj->il", phis[add[c]], phis.conj()) for c in range(g)])
    eye = np.eye(d)
    unit = max(cmatrix.frobenius_norm(p.conj().T @ p - eye) for p in pi)
    hom = max(cmatrix.frobenius_norm(pi[a] @ pi[b] - pi[add[a, b]]) for a in range(g) for b in range(g))
    orbit = max(cmatrix.frobenius_norm(pi[c] @ phis[0] - phis[c]) for c in range(g))
    return Representation(pi, unit, hom, orbit)


def cross_gram_from_spectrum(spec: DftSpectrum, c1: int, c2: int) -> np.ndarray:
    """(R/D) M_{gamma_1 gamma_2^-1}."""
    group = spec.group
    k = group.add_table[c1, group.neg_index[c2]]
    return spec.R / spec.D * spec.matrices[k]


def ensemble_gram_residual(gen: GeneratingTFF) -> float:
    """Max deviation between the ensemble's cross-Grams and (R/D) M."""
    f = harmonic_ensemble(gen)
    spec = dft_spectrum(gen)
    g = fusion_gram(f)
    r, n = gen.R, gen.group.order
    dev = 0.0
    for i in range(n):
        for j in range(n):
            blk = g[i * r:(i + 1) * r, j * r:(j + 1) * r]
            dev = max(dev, cmatrix.frobenius_norm(blk - cross_gram_from_spectrum(spec, i, j)))
    return dev
