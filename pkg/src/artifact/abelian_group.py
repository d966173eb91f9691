"""Finite abelian groups Z_{n_1} x ... x Z_{n_k} and their characters.

The dual group is identified with the group itself through the pairing
gamma_m(g) = exp(2 pi i sum_j m_j g_j / n_j), so characters are labelled by
group elements.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ValidationError

GroupElement = tuple[int, ...]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    factors: tuple[int, ...]

    def __post_init__(self) -> None:
        factors = tuple(int(n) for n in self.factors)
        if not factors or any(n < 1 for n in factors):
            raise ValidationError(f"group factors must be positive integers, got {self.factors!r}")
        object.__setattr__(self, "factors", factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.factors)

    @cached_property
    def elements(self) -> tuple[GroupElement, ...]:
        return tuple(itertools.product(*(range(n) for n in self.factors)))

    @cached_property
    def _coords(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64).reshape(self.order, self.rank)

    @property
    def zero(self) -> GroupElement:
        return (0,) * self.rank

    def element(self, coords: Sequence[int]) -> GroupElement:
        if len(coords) != self.rank:
            raise ValidationError(f"expected {self.rank} coordinates, got {len(coords)}")
        return tuple(int(c) % n for c, n in zip(coords, self.factors))

    def index(self, g: Sequence[int]) -> int:
        """Position of g in the lexicographic enumeration."""
        idx = 0
        for c, n in zip(self.element(g), self.factors):
            idx = idx * n + c
        return idx

    def add(self, g1: Sequence[int], g2: Sequence[int]) -> GroupElement:
        return tuple((a + b) % n for a, b, n in zip(g1, g2, self.factors))

    def neg(self, g: Sequence[int]) -> GroupElement:
        return tuple((-a) % n for a, n in zip(g, self.factors))

    def sub(self, g1: Sequence[int], g2: Sequence[int]) -> GroupElement:
        return self.add(g1, self.neg(g2))

    @cached_property
    def add_table(self) -> np.ndarray:
        """G x G table of indices: add_table[i, j] = index(e_i + e_j)."""
        c = self._coords
        s = (c[:, None, :] + c[None, :, :]) % np.array(self.factors)
        return self._index_array(s)

    @cached_property
    def neg_index(self) -> np.ndarray:
        return self._index_array((-self._coords) % np.array(self.factors))

    def _index_array(self, coords: np.ndarray) -> np.ndarray:
        idx = np.zeros(coords.shape[:-1], dtype=np.int64)
        for j, n in enumerate(self.factors):
            idx = idx * n + coords[..., j]
        return idx

    def pairing_exponents(self) -> np.ndarray:
        """Integer matrix K with gamma_m(g) = exp(2 pi i K[g, m] / L), L the exponent."""
        scale = np.array([self.exponent // n for n in self.factors], dtype=np.int64)
        c = self._coords
        return ((c * scale) @ c.T) % self.exponent

    def to_json(self) -> dict:
        return {"factors": list(self.factors)}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteAbelianGroup":
        try:
            return cls(tuple(obj["factors"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed group: {obj!r}") from exc


def cyclic(n: int) -> FiniteAbelianGroup:
    return FiniteAbelianGroup((n,))


def enumerate_elements(group: FiniteAbelianGroup) -> tuple[GroupElement, ...]:
    return group.elements


def character_value(group: FiniteAbelianGroup, m: Sequence[int], g: Sequence[int]) -> complex:
    """gamma_m(g)."""
    L = group.exponent
    k = sum((a * b % n) * (L // n) for a, b, n in zip(group.element(m), group.element(g), group.factors)) % L
    return complex(np.exp(2j * np.pi * k / L))


def character_table(group: FiniteAbelianGroup) -> np.ndarray:
    """G x G matrix with entry (g, m) = gamma_m(g), rows and columns in enumeration order."""
    return np.exp(2j * np.pi * group.pairing_exponents() / group.exponent)


def _stack(group: FiniteAbelianGroup, seq) -> np.ndarray:
    mats = [np.asarray(p, dtype=complex) for p in seq]
    if len(mats) != group.order:
        raise ValidationError(f"need {group.order} matrices, got {len(mats)}")
    shapes = {m.shape for m in mats}
    if len(shapes) != 1:
        raise ValidationError(f"matrix sizes differ: {sorted(shapes)}")
    shape = shapes.pop()
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValidationError(f"matrices must be square, got {shape}")
    return np.stack(mats)


def entrywise_dft(group: FiniteAbelianGroup, seq) -> np.ndarray:
    """M_gamma = sum_g conj(gamma(g)) P_g, returned as an array of shape (G, R, R)."""
    P = _stack(group, seq)
    return np.einsum("gc,gij->cij", character_table(group).conj(), P)


def inverse_entrywise_dft(group: FiniteAbelianGroup, seq) -> np.ndarray:
    """P_g = (1/G) sum_gamma gamma(g) M_gamma."""
    M = _stack(group, seq)
    return np.einsum("gc,cij->gij", character_table(group), M) / group.order
