"""Complex conference matrices, their cores, and signature-matrix EITFFs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import cmatrix
from . import finite_field as ff
from .cmatrix import DEFAULT_RANK_TOL, DEFAULT_TOL
from .errors import ValidationError
from .finite_field import FiniteField
from .fusion_frame import FusionFrame, fusion_gram, welch_bound


def _eps(epsilon) -> Optional[int]:
    if epsilon is None:
        return None
    e = int(epsilon)
    if e not in (1, -1):
        raise ValidationError(f"epsilon must be +1 or -1, got {epsilon!r}")
    return e


@dataclass(frozen=True, eq=False)
class ConferenceMatrix:
    matrix: np.ndarray
    epsilon: Optional[int] = None

    def __post_init__(self) -> None:
        m = cmatrix.as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ValidationError(f"conference matrix must be square, got {m.shape}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "epsilon", _eps(self.epsilon))

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def residuals(self) -> dict:
        c, m = self.matrix, self.size
        off = ~np.eye(m, dtype=bool)
        out = {
            "diagonal": float(np.max(np.abs(np.diag(c)))) if m else 0.0,
            "unimodular": float(np.max(np.abs(np.abs(c[off]) - 1))) if m > 1 else 0.0,
            "gram": cmatrix.frobenius_norm(c.conj().T @ c - (m - 1) * np.eye(m)),
        }
        if self.epsilon is not None:
            out["symmetry"] = cmatrix.frobenius_norm(c.T - self.epsilon * c)
        return out

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        return all(v <= tol for v in self.residuals().values())

    def to_json(self) -> dict:
        out = cmatrix.to_json(self.matrix)
        out["epsilon"] = self.epsilon
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ConferenceMatrix":
        return cls(cmatrix.from_json(obj), obj.get("epsilon"))


@dataclass(frozen=True, eq=False)
class Core:
    matrix: np.ndarray
    epsilon: int

    def __post_init__(self) -> None:
        z = cmatrix.as_matrix(self.matrix)
        if z.shape[0] != z.shape[1]:
            raise ValidationError(f"core must be square, got {z.shape}")
        object.__setattr__(self, "matrix", z)
        object.__setattr__(self, "epsilon", _eps(self.epsilon))

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def to_json(self) -> dict:
        out = cmatrix.to_json(self.matrix)
        out["epsilon"] = self.epsilon
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Core":
        if obj.get("epsilon") is None:
            raise ValidationError("core file needs an epsilon")
        return cls(cmatrix.from_json(obj), obj["epsilon"])


def auto_epsilon(c, tol: float = DEFAULT_TOL) -> Optional[int]:
    """+1 or -1 if the matrix is symmetric or skew-symmetric, else None."""
    c = cmatrix.as_matrix(c)
    for e in (1, -1):
        if cmatrix.frobenius_norm(c.T - e * c) <= tol:
            return e
    return None


def normalize(c: ConferenceMatrix, epsilon: int, tol: float = DEFAULT_TOL) -> ConferenceMatrix:
    """D_1 C D_2 with D_1(m,m) = conj(C(m,0)) and D_2(m,m) = eps conj(C(0,m)) for m > 0."""
    eps = _eps(epsilon)
    if not c.is_valid(tol):
        raise ValidationError(f"not a conference matrix: {c.residuals()}")
    m = c.matrix
    d1 = np.ones(c.size, dtype=complex)
    d2 = np.ones(c.size, dtype=complex)
    d1[1:] = m[1:, 0].conj()
    d2[1:] = eps * m[0, 1:].conj()
    out = d1[:, None] * m * d2[None, :]
    tag = eps if c.epsilon == eps else None
    return ConferenceMatrix(out, tag)


def extract_core(c: ConferenceMatrix, epsilon: Optional[int] = None) -> Core:
    eps = _eps(epsilon if epsilon is not None else c.epsilon)
    if eps is None:
        raise ValidationError("epsilon unknown; pass it explicitly")
    return Core(c.matrix[1:, 1:], eps)


def core_residuals(z, epsilon: int) -> dict:
    """Deviations from Z*Z = (M-1)I - J, Z^T = eps Z, zero diagonal, unimodular off-diagonal, Z1 = 0."""
    z = cmatrix.as_matrix(z)
    n = z.shape[0]
    off = ~np.eye(n, dtype=bool)
    ones = np.ones(n)
    return {
        "gram": cmatrix.frobenius_norm(z.conj().T @ z - (n * np.eye(n) - np.ones((n, n)))),
        "symmetry": cmatrix.frobenius_norm(z.T - epsilon * z),
        "diagonal": float(np.max(np.abs(np.diag(z)))) if n else 0.0,
        "unimodular": float(np.max(np.abs(np.abs(z[off]) - 1))) if n > 1 else 0.0,
        "row_sum": float(np.linalg.norm(z @ ones)),
    }


def verify_core(z, epsilon: int, tol: float = DEFAULT_TOL) -> bool:
    return all(v <= tol for v in core_residuals(z, _eps(epsilon)).values())


def paley_core(field: FiniteField, chi_index: int) -> Core:
    """C_0(x_1, x_2) = chi_0(x_1 - x_2) with chi_0(0) = 0."""
    if chi_index % (field.q - 1) == 0:
        raise ValidationError("the Paley construction needs a nontrivial character")
    chi0 = ff.mult_char_vector(field, chi_index)
    q = field.q
    diff = np.array([[field.sub(a, b) for b in range(q)] for a in range(q)])
    return Core(chi0[diff], ff.char_at_minus_one(field, chi_index))


def paley_conference(field: FiniteField, chi_index: int) -> ConferenceMatrix:
    """Bordered Paley matrix [[0, eps 1*], [1, C_0]] of size Q + 1."""
    core = paley_core(field, chi_index)
    eps = core.epsilon
    q = field.q
    c = np.zeros((q + 1, q + 1), dtype=complex)
    c[0, 1:] = eps
    c[1:, 0] = 1
    c[1:, 1:] = core.matrix
    return ConferenceMatrix(c, eps)


@dataclass(frozen=True, eq=False)
class SignatureMatrix:
    """N x N array of R x R blocks, stored as one NR x NR matrix."""

    N: int
    R: int
    matrix: np.ndarray
    target_dim: Optional[int] = None

    def __post_init__(self) -> None:
        s = cmatrix.as_matrix(self.matrix)
        if s.shape != (self.N * self.R, self.N * self.R):
            raise ValidationError(f"signature must be {self.N * self.R} square, got {s.shape}")
        object.__setattr__(self, "matrix", s)

    def block(self, n1: int, n2: int) -> np.ndarray:
        r = self.R
        return self.matrix[n1 * r:(n1 + 1) * r, n2 * r:(n2 + 1) * r]

    def to_json(self) -> dict:
        out = cmatrix.to_json(self.matrix)
        out.update({"N": self.N, "R": self.R, "target_dim": self.target_dim})
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SignatureMatrix":
        try:
            return cls(int(obj["N"]), int(obj["R"]), cmatrix.from_json(obj), obj.get("target_dim"))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed signature: {exc}") from exc


def signature_from_core(core: Core) -> SignatureMatrix:
    """Rank-two blocks built from Z; targets EITFF(N-1,N,2) for eps = -1 and EITFF(N,N,2) for eps = +1."""
    z, n = core.matrix, core.size
    s = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            w = z[i, j]
            if core.epsilon == -1:
                blk = np.array([[-1, -math.sqrt(n) * np.conj(w)], [math.sqrt(n) * w, -1]]) / math.sqrt(n + 1)
            else:
                blk = np.array([[1, math.sqrt(n - 2) * np.conj(w)], [math.sqrt(n - 2) * w, -1]]) / math.sqrt(n - 1)
            s[2 * i:2 * i + 2, 2 * j:2 * j + 2] = blk
    return SignatureMatrix(n, 2, s, n - 1 if core.epsilon == -1 else n)


def signature_of(f: FusionFrame) -> SignatureMatrix:
    """S = (Gram - I)/B for a uniform frame, B the Welch bound."""
    if not f.is_uniform:
        raise ValidationError("signature needs uniform ranks")
    n, r, d = f.num_subspaces, f.ranks[0], f.ambient_dim
    b = welch_bound(d, n, r)
    if not b:
        raise ValidationError("signature needs D < NR and N >= 2")
    g = fusion_gram(f)
    return SignatureMatrix(n, r, (g - np.eye(n * r)) / b, d)


def signature_residuals(s: SignatureMatrix, dim: Optional[int] = None) -> dict:
    """Deviations from zero diagonal blocks, S_12 = S_21*, unitary blocks, and the blockwise tightness identity."""
    d = s.target_dim if dim is None else dim
    n, r = s.N, s.R
    if d is None:
        raise ValidationError("target dimension unknown")
    if not 0 < d < n * r:
        raise ValidationError(f"target dimension {d} must lie in (0, {n * r})")
    coef = (n * r - 2 * d) * math.sqrt((n - 1) / (d * (n * r - d)))
    sq = s.matrix @ s.matrix
    eye = np.eye(r)
    out = {"diagonal": 0.0, "adjoint": 0.0, "unitary": 0.0, "tightness": 0.0, "tightness_diagonal": 0.0}
    for i in range(n):
        out["diagonal"] = max(out["diagonal"], cmatrix.frobenius_norm(s.block(i, i)))
        out["tightness_diagonal"] = max(
            out["tightness_diagonal"], cmatrix.frobenius_norm(sq[i * r:(i + 1) * r, i * r:(i + 1) * r] - (n - 1) * eye)
        )
        for j in range(n):
            if i == j:
                continue
            b = s.block(i, j)
            out["adjoint"] = max(out["adjoint"], cmatrix.frobenius_norm(b - s.block(j, i).conj().T))
            out["unitary"] = max(out["unitary"], cmatrix.frobenius_norm(b.conj().T @ b - eye))
            blk = sq[i * r:(i + 1) * r, j * r:(j + 1) * r]
            out["tightness"] = max(out["tightness"], cmatrix.frobenius_norm(blk - coef * b))
    return out


def check_signature(s: SignatureMatrix, dim: Optional[int] = None, tol: float = DEFAULT_TOL) -> bool:
    return all(v <= tol for v in signature_residuals(s, dim).values())


@dataclass(frozen=True, eq=False)
class SignatureFrame:
    frame: FusionFrame
    A: float
    B: float
    D: int
    fit_residual: float


def frame_from_signature(
    s: SignatureMatrix, tol: float = DEFAULT_TOL, rank_tol: float = DEFAULT_RANK_TOL
) -> SignatureFrame:
    """Fit S^2 = c S + e I, take the negative eigenvalue -F, and factor I + S/F."""
    m = s.matrix
    size = m.shape[0]
    if not cmatrix.is_hermitian(m, tol):
        raise ValidationError("signature matrix is not self-adjoint")
    sq = m @ m
    e = float(np.real(np.trace(sq))) / size
    ss = float(np.real(np.vdot(m, m)))
    if ss == 0:
        raise ValidationError("signature matrix is zero")
    c = float(np.real(np.vdot(m, sq - e * np.eye(size)))) / ss
    fit = cmatrix.frobenius_norm(sq - c * m - e * np.eye(size))
    if fit > tol * max(1.0, cmatrix.frobenius_norm(sq)):
        raise ValidationError(f"S^2 is not a combination of S and I (residual {fit:.3e})")
    disc = c * c + 4 * e
    if disc <= 0:
        raise ValidationError("signature spectrum is not two-point")
    lam_neg = (c - math.sqrt(disc)) / 2
    if lam_neg >= 0:
        raise ValidationError("signature matrix has no negative eigenvalue")
    f_val = -lam_neg
    gram = np.eye(size) + m / f_val
    phi = cmatrix.factor_gram(gram, rank_tol, tol)
    d = phi.shape[0]
    r = s.R
    mats = tuple(phi[:, i * r:(i + 1) * r] for i in range(s.N))
    return SignatureFrame(FusionFrame(d, mats), s.N * r / d, 1 / f_val, d, fit)
