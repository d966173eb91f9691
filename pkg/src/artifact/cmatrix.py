"""Dense complex matrices.

Matrices are 2-D ``numpy`` arrays of dtype complex128. Zero-row and
zero-column shapes are legal everywhere; a D x 0 matrix is the (unique)
isometry from the zero space.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

DEFAULT_TOL = 1e-9
DEFAULT_RANK_TOL = 1e-8


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=complex)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def adjoint(m) -> np.ndarray:
    return as_matrix(m).conj().T


def multiply(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValidationError(f"shape mismatch: {a.shape} times {b.shape}")
    return a @ b


def frobenius_norm(m) -> float:
    return float(np.linalg.norm(as_matrix(m)))


def singular_values(m) -> np.ndarray:
    """Singular values in nonincreasing order, length min(rows, cols)."""
    a = as_matrix(m)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def spectral_norm(m) -> float:
    s = singular_values(m)
    return float(s[0]) if s.size else 0.0


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    return frobenius_norm(a - a.conj().T) <= tol * max(1.0, frobenius_norm(a))


def hermitian_eig(m, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order and a unitary matrix of eigenvectors."""
    a = as_matrix(m)
    if not is_hermitian(a, tol):
        raise ValidationError("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()


def factor_gram(g, rank_tol: float = DEFAULT_RANK_TOL, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return Phi (D x N) with Phi* Phi = g, D = numerical rank of g.

    The rows are sqrt(lambda_j) v_j* for the eigenpairs above rank_tol * lambda_max.
    """
    g = as_matrix(g)
    n = g.shape[0]
    if n == 0:
        return zeros(0, 0)
    w, v = hermitian_eig(g, tol)
    lam_max = max(float(w[0]), 0.0)
    if w[-1] < -tol * max(1.0, lam_max):
        raise ValidationError(f"Gram matrix has negative eigenvalue {w[-1]:.3e}")
    keep = w > rank_tol * lam_max if lam_max > 0 else np.zeros(n, dtype=bool)
    return np.sqrt(w[keep])[:, None] * v[:, keep].conj().T


def orthocomplement(phi) -> np.ndarray:
    """Isometry onto the orthogonal complement of the column span of an isometry."""
    a = as_matrix(phi)
    d, r = a.shape
    if r == 0:
        return identity(d)
    u, _, _ = np.linalg.svd(a, full_matrices=True)
    return u[:, r:]


def block_diag(*blocks) -> np.ndarray:
    mats = [as_matrix(b) for b in blocks]
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = zeros(rows, cols)
    i = j = 0
    for m in mats:
        out[i:i + m.shape[0], j:j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out


def to_json(m) -> dict:
    a = as_matrix(m)
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }


def from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.array(obj["re"], dtype=float).reshape(rows, cols)
        im = np.array(obj["im"], dtype=float).reshape(rows, cols)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix: {exc}") from exc
    return re + 1j * im
