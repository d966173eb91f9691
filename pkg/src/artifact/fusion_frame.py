"""Fusion frames: Gram matrices, tightness, Welch-bound certificates, complements."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import cmatrix
from .abelian_group import FiniteAbelianGroup
from .cmatrix import DEFAULT_RANK_TOL, DEFAULT_TOL
from .errors import ValidationError


@dataclass(frozen=True, eq=False)
class FusionFrame:
    """Isometries Phi_n (D x R_n) of subspaces of C^D.

    Isometry is not enforced at construction so that perturbed or broken
    inputs can still be analysed; certify() reports the isometry residual.
    """

    ambient_dim: int
    isometries: tuple[np.ndarray, ...]
    group: Optional[FiniteAbelianGroup] = None

    def __post_init__(self) -> None:
        mats = tuple(cmatrix.as_matrix(m) for m in self.isometries)
        if not mats:
            raise ValidationError("a fusion frame needs at least one subspace")
        for i, m in enumerate(mats):
            if m.shape[0] != self.ambient_dim:
                raise ValidationError(f"isometry {i} has {m.shape[0]} rows, expected {self.ambient_dim}")
        if self.group is not None and self.group.order != len(mats):
            raise ValidationError(f"group of order {self.group.order} does not index {len(mats)} subspaces")
        object.__setattr__(self, "isometries", mats)

    @property
    def num_subspaces(self) -> int:
        return len(self.isometries)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(m.shape[1] for m in self.isometries)

    @property
    def total_rank(self) -> int:
        return sum(self.ranks)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.ranks)) == 1

    def offsets(self) -> list[int]:
        out = [0]
        for r in self.ranks:
            out.append(out[-1] + r)
        return out

    def synthesis(self) -> np.ndarray:
        return np.hstack(self.isometries)

    def cross_gram(self, n1: int, n2: int) -> np.ndarray:
        return self.isometries[n1].conj().T @ self.isometries[n2]

    def to_json(self) -> dict:
        out = {
            "ambient_dim": self.ambient_dim,
            "isometries": [cmatrix.to_json(m) for m in self.isometries],
        }
        if self.group is not None:
            out["group"] = self.group.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FusionFrame":
        try:
            d = int(obj["ambient_dim"])
            mats = tuple(cmatrix.from_json(m) for m in obj["isometries"])
            group = FiniteAbelianGroup.from_json(obj["group"]) if obj.get("group") is not None else None
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed frame: {exc}") from exc
        return cls(d, mats, group)


def fusion_gram(f: FusionFrame) -> np.ndarray:
    phi = f.synthesis()
    return phi.conj().T @ phi


def frame_operator(f: FusionFrame) -> np.ndarray:
    phi = f.synthesis()
    return phi @ phi.conj().T


def isometry_residual(f: FusionFrame) -> float:
    return max(cmatrix.frobenius_norm(m.conj().T @ m - np.eye(m.shape[1])) for m in f.isometries)


def check_tight(f: FusionFrame, tol: float = DEFAULT_TOL) -> tuple[bool, float, float]:
    """(tight, A, residual) with A = sum(R_n)/D and residual ||sum Phi_n Phi_n* - A I||_F."""
    if f.ambient_dim == 0:
        raise ValidationError("ambient dimension is zero")
    a = f.total_rank / f.ambient_dim
    res = cmatrix.frobenius_norm(frame_operator(f) - a * np.eye(f.ambient_dim))
    return res <= tol, a, res


def welch_bound(d: int, n: int, r: int) -> Optional[float]:
    """[(NR - D)/(D(N - 1))]^(1/2), or None when undefined."""
    if n < 2 or d <= 0 or n * r < d:
        return None
    return math.sqrt((n * r - d) / (d * (n - 1)))


def _pair_check(f: FusionFrame, n1: int, n2: int) -> None:
    if n1 == n2:
        raise ValidationError("need two distinct subspaces")
    for n in (n1, n2):
        if not 0 <= n < f.num_subspaces:
            raise ValidationError(f"subspace index {n} out of range")


def principal_angles(f: FusionFrame, n1: int, n2: int) -> list[float]:
    """Ascending principal angles between subspaces n1 and n2."""
    _pair_check(f, n1, n2)
    s = np.clip(cmatrix.singular_values(f.cross_gram(n1, n2)), 0.0, 1.0)
    return sorted(float(a) for a in np.arccos(s))


def chordal_distance(f: FusionFrame, n1: int, n2: int) -> float:
    _pair_check(f, n1, n2)
    r = min(f.ranks[n1], f.ranks[n2])
    return math.sqrt(max(r - cmatrix.frobenius_norm(f.cross_gram(n1, n2)) ** 2, 0.0))


def spectral_distance(f: FusionFrame, n1: int, n2: int) -> float:
    _pair_check(f, n1, n2)
    return math.sqrt(max(1.0 - cmatrix.spectral_norm(f.cross_gram(n1, n2)) ** 2, 0.0))


@dataclass
class Certificate:
    tol: float
    ambient_dim: int
    num_subspaces: int
    ranks: list[int]
    isometry_residual: float
    is_tight: bool
    frame_constant: float
    tight_residual: float
    is_uniform: bool
    welch_bound: Optional[float]
    is_equichordal: Optional[bool]
    chordal_value: Optional[float]
    equichordal_deviation: Optional[float]
    is_equiisoclinic: Optional[bool]
    sigma: Optional[float]
    equiisoclinic_deviation: Optional[float]
    sigma_matches_welch: Optional[bool]
    is_real: bool
    max_gram_imag: float
    trivial: bool
    principal_angles: list[dict] = field(default_factory=list)
    block_circulant: Optional[bool] = None

    @property
    def is_fusion_frame(self) -> bool:
        return self.isometry_residual <= self.tol

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        return cls(**obj)


def certify(f: FusionFrame, tol: float = DEFAULT_TOL) -> Certificate:
    """Measure tightness, equichordality, equi-isoclinism and realness.

    For a tight uniform frame sigma^2 is pinned to the squared Welch bound;
    otherwise it is the mean of ||B||_F^2 / R over pairs. EC and EI are only
    classified for uniform frames.
    """
    tight, a, tres = check_tight(f, tol)
    iso = isometry_residual(f)
    gram = fusion_gram(f)
    d, n = f.ambient_dim, f.num_subspaces
    uniform = f.is_uniform
    r = f.ranks[0] if uniform else None

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    offs = f.offsets()
    blocks = {p: gram[offs[p[0]]:offs[p[0] + 1], offs[p[1]]:offs[p[1] + 1]] for p in pairs}
    angles = []
    for (i, j), b in blocks.items():
        s = np.clip(cmatrix.singular_values(b), 0.0, 1.0)
        angles.append({"pair": [i, j], "angles": sorted(float(x) for x in np.arccos(s))})

    welch = welch_bound(d, n, r) if uniform else None
    ec = ei = matches = None
    chord = ec_dev = sigma = ei_dev = None
    trivial = bool(uniform and (n * r == d or r == d))
    if uniform and r > 0:
        sq = np.array([cmatrix.frobenius_norm(b) ** 2 for b in blocks.values()])
        if sq.size:
            mean_sq = float(sq.mean())
            ec_dev = float(np.max(np.abs(sq - mean_sq)))
            chord = math.sqrt(max(r - mean_sq, 0.0))
            s2 = welch**2 if (tight and welch is not None) else mean_sq / r
            sigma = math.sqrt(max(s2, 0.0))
            ident = np.eye(r)
            ei_dev = float(max(cmatrix.frobenius_norm(b.conj().T @ b - s2 * ident) for b in blocks.values()))
            ec = ec_dev <= tol
            ei = bool(ei_dev <= tol and ec)
            if welch is not None:
                matches = abs(sigma - welch) <= tol
        else:
            ec, ei, chord, ec_dev, sigma, ei_dev = True, True, None, 0.0, None, 0.0

    max_imag = float(np.max(np.abs(gram.imag))) if gram.size else 0.0
    return Certificate(
        tol=tol,
        ambient_dim=d,
        num_subspaces=n,
        ranks=list(f.ranks),
        isometry_residual=iso,
        is_tight=tight,
        frame_constant=a,
        tight_residual=tres,
        is_uniform=uniform,
        welch_bound=welch,
        is_equichordal=ec,
        chordal_value=chord,
        equichordal_deviation=ec_dev,
        is_equiisoclinic=ei,
        sigma=sigma,
        equiisoclinic_deviation=ei_dev,
        sigma_matches_welch=matches,
        is_real=max_imag <= tol,
        max_gram_imag=max_imag,
        trivial=trivial,
        principal_angles=angles,
    )


def naimark_complement(
    f: FusionFrame, tol: float = DEFAULT_TOL, rank_tol: float = DEFAULT_RANK_TOL
) -> FusionFrame:
    """TFF on sum(R_n) - D dimensions with Gram (A/(A-1))(I - G/A)."""
    tight, a, res = check_tight(f, tol)
    if not tight:
        raise ValidationError(f"Naimark complement needs a tight frame (residual {res:.3e})")
    total, d = f.total_rank, f.ambient_dim
    if total <= d:
        raise ValidationError("Naimark complement is empty when sum of ranks equals D")
    g = fusion_gram(f)
    target = a / (a - 1) * (np.eye(total) - g / a)
    phi = cmatrix.factor_gram(target, rank_tol, tol)
    if phi.shape[0] != total - d:
        raise ValidationError(f"complement has rank {phi.shape[0]}, expected {total - d}")
    offs = f.offsets()
    mats = tuple(phi[:, offs[i]:offs[i + 1]] for i in range(f.num_subspaces))
    return FusionFrame(total - d, mats, f.group)


def spatial_complement(f: FusionFrame, tol: float = DEFAULT_TOL) -> FusionFrame:
    """Orthogonal complements of every subspace in the same ambient space."""
    tight, _, res = check_tight(f, tol)
    if not tight:
        raise ValidationError(f"spatial complement needs a tight frame (residual {res:.3e})")
    if all(r == f.ambient_dim for r in f.ranks):
        raise ValidationError("every subspace is the whole space")
    return FusionFrame(f.ambient_dim, tuple(cmatrix.orthocomplement(m) for m in f.isometries), f.group)


def direct_sum(frames: Sequence[FusionFrame], tol: float = DEFAULT_TOL) -> FusionFrame:
    """Block-diagonal isometries; requires equal N and equal sum(R_n)/D."""
    frames = list(frames)
    if not frames:
        raise ValidationError("direct sum of nothing")
    if len(frames) == 1:
        return frames[0]
    n = frames[0].num_subspaces
    if any(f.num_subspaces != n for f in frames):
        raise ValidationError("direct sum needs the same number of subspaces in every summand")
    ratios = [f.total_rank / f.ambient_dim for f in frames]
    for j, rho in enumerate(ratios[1:], start=1):
        if abs(rho - ratios[0]) > tol:
            raise ValidationError(
                f"inconsistent summands: sum(R)/D = {frames[0].total_rank}/{frames[0].ambient_dim}"
                f" for summand 0 but {frames[j].total_rank}/{frames[j].ambient_dim} for summand {j}"
            )
    groups = {f.group for f in frames}
    group = frames[0].group if len(groups) == 1 else None
    mats = tuple(cmatrix.block_diag(*(f.isometries[i] for f in frames)) for i in range(n))
    return FusionFrame(sum(f.ambient_dim for f in frames), mats, group)
