"""Arithmetic in GF(p^k), its characters, and Gauss sums.

An element is stored as the integer sum_i c_i p^i, where c_i is the
coefficient of t^i in the polynomial basis. Integer order is coefficient-lex
order with the leading coefficient most significant. A multiplicative
character is identified by its index m in Z_{Q-1}; an additive character by
its label y in the field.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .abelian_group import FiniteAbelianGroup, GroupElement
from .errors import ValidationError

MAX_ORDER = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """(p, k) with q = p^k; raises if q is not a prime power."""
    if q < 2:
        raise ValidationError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise ValidationError(f"{q} is not a prime power")
    return p, k


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    """Product of coefficient lists (low to high) modulo a monic polynomial."""
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for j in range(k + 1):
                prod[d - k + j] = (prod[d - k + j] - c * mod[j]) % p
    return (prod + [0] * k)[:k]


def _is_irreducible(mod: Sequence[int], p: int) -> bool:
    """Trial division of a monic polynomial by every monic polynomial of degree <= k/2."""
    k = len(mod) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            rem = list(mod)
            for top in range(k, d - 1, -1):
                c = rem[top]
                if c:
                    for j in range(d + 1):
                        rem[top - d + j] = (rem[top - d + j] - c * divisor[j]) % p
            if not any(rem[:d]):
                return False
    return True


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    for n in range(p**k):
        low = [(n // p**i) % p for i in range(k)]
        mod = low + [1]
        if _is_irreducible(mod, p):
            return tuple(mod)
    raise RuntimeError(f"no irreducible polynomial of degree {k} over Z_{p}")


@dataclass(frozen=True, eq=False)
class FiniteField:
    """GF(p^k) with precomputed exponential and discrete-log tables."""

    p: int
    k: int
    modulus: tuple[int, ...]
    generator: int
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def elements(self) -> range:
        return range(self.q)

    def coeffs(self, x: int) -> tuple[int, ...]:
        return tuple((x // self.p**i) % self.p for i in range(self.k))

    def from_coeffs(self, c: Sequence[int]) -> int:
        if len(c) != self.k:
            raise ValidationError(f"expected {self.k} coefficients, got {len(c)}")
        return sum((int(ci) % self.p) * self.p**i for i, ci in enumerate(c))

    def _check(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise ValidationError(f"{x} is not an element of GF({self.q})")
        return int(x)

    def add(self, x: int, y: int) -> int:
        cx, cy = self.coeffs(self._check(x)), self.coeffs(self._check(y))
        return self.from_coeffs([a + b for a, b in zip(cx, cy)])

    def neg(self, x: int) -> int:
        return self.from_coeffs([-a for a in self.coeffs(self._check(x))])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self._check(x) == 0 or self._check(y) == 0:
            return 0
        return int(self.exp_table[(self.log_table[x] + self.log_table[y]) % (self.q - 1)])

    def inv(self, x: int) -> int:
        if self._check(x) == 0:
            raise ValidationError("zero has no inverse")
        return int(self.exp_table[(-self.log_table[x]) % (self.q - 1)])

    def power(self, x: int, n: int) -> int:
        if self._check(x) == 0:
            if n <= 0:
                raise ValidationError("zero to a nonpositive power")
            return 0
        return int(self.exp_table[(self.log_table[x] * n) % (self.q - 1)])

    def dlog(self, x: int) -> int:
        if self._check(x) == 0:
            raise ValidationError("zero has no discrete logarithm")
        return int(self.log_table[x])

    def trace(self, x: int) -> int:
        """Absolute trace x + x^p + ... + x^(p^(k-1)), as an integer in [0, p)."""
        t, y = 0, self._check(x)
        for _ in range(self.k):
            t = self.add(t, y)
            y = self.power(y, self.p) if y else 0
        return t

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}


@functools.lru_cache(maxsize=None)
def build_field(p: int, k: int = 1) -> FiniteField:
    """GF(p^k) with the smallest monic irreducible modulus and smallest generator."""
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    if k < 1 or p**k > MAX_ORDER:
        raise ValidationError(f"unsupported extension degree {k} for p={p}")
    q = p**k
    mod = _smallest_irreducible(p, k)
    to_c = lambda x: [(x // p**i) % p for i in range(k)]
    to_i = lambda c: sum(ci * p**i for i, ci in enumerate(c))
    for cand in range(1, q):
        exp = [1]
        cur = [1] + [0] * (k - 1)
        gen_c = to_c(cand)
        for _ in range(q - 2):
            cur = _poly_mulmod(cur, gen_c, mod, p)
            exp.append(to_i(cur))
        if len(set(exp)) == q - 1:
            break
    else:
        raise RuntimeError(f"GF({q}) has no generator")
    exp_table = np.array(exp, dtype=np.int64)
    log_table = np.full(q, -1, dtype=np.int64)
    log_table[exp_table] = np.arange(q - 1)
    exp_table.setflags(write=False)
    log_table.setflags(write=False)
    return FiniteField(p, k, mod, cand, exp_table, log_table)


def field_of_order(q: int) -> FiniteField:
    return build_field(*prime_power(q))


def field_from_json(obj: dict) -> FiniteField:
    try:
        f = build_field(int(obj["p"]), int(obj.get("k", 1)))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed field: {obj!r}") from exc
    if "modulus" in obj and tuple(obj["modulus"]) != f.modulus:
        raise ValidationError(f"unsupported modulus {obj['modulus']}, expected {list(f.modulus)}")
    return f


def minus_one(field: FiniteField) -> int:
    return field.neg(1)


def mult_char_vector(field: FiniteField, m: int) -> np.ndarray:
    """Values chi_m(x) for x = 0..Q-1, extended by chi_m(0) = 0."""
    out = np.zeros(field.q, dtype=complex)
    n = field.q - 1
    logs = field.log_table[1:]
    out[1:] = np.exp(2j * np.pi * ((m * logs) % n) / n)
    return out


def mult_char(field: FiniteField, m: int, x: int) -> complex:
    return complex(mult_char_vector(field, m)[field._check(x)])


def add_char_vector(field: FiniteField, y: int) -> np.ndarray:
    """Values gamma_y(x) = exp(2 pi i Tr(xy)/p) for x = 0..Q-1."""
    tr = np.array([field.trace(field.mul(x, y)) for x in field.elements])
    return np.exp(2j * np.pi * tr / field.p)


def add_char(field: FiniteField, y: int, x: int) -> complex:
    return complex(np.exp(2j * np.pi * field.trace(field.mul(field._check(x), y)) / field.p))


def char_parity(field: FiniteField, m: int) -> str:
    """'even' if chi_m(-1) = 1, else 'odd'."""
    if field.p == 2:
        return "even"
    return "even" if (m * ((field.q - 1) // 2)) % (field.q - 1) == 0 else "odd"


def char_at_minus_one(field: FiniteField, m: int) -> int:
    return 1 if char_parity(field, m) == "even" else -1


def legendre_index(field: FiniteField) -> int:
    if field.q % 2 == 0:
        raise ValidationError("the Legendre symbol needs odd Q")
    return (field.q - 1) // 2


def legendre(field: FiniteField, x: int) -> int:
    """0 at 0, 1 on nonzero squares, -1 otherwise."""
    legendre_index(field)
    if field._check(x) == 0:
        return 0
    return 1 if field.dlog(x) % 2 == 0 else -1


def gauss_sum(field: FiniteField, y: int, m: int) -> complex:
    """<gamma_y, chi_m> = sum over nonzero x of conj(gamma_y(x)) chi_m(x)."""
    return complex(np.sum(add_char_vector(field, y).conj()[1:] * mult_char_vector(field, m)[1:]))


def additive_group_of(
    field: FiniteField,
) -> tuple[FiniteAbelianGroup, Callable[[int], GroupElement], Callable[[GroupElement], int]]:
    """The additive group (Z_p)^k with an order-preserving bijection.

    Element x maps to its coefficient tuple read from the top degree down, so
    the group's enumeration index of x equals x itself.
    """
    group = FiniteAbelianGroup((field.p,) * field.k)

    def to_group(x: int) -> GroupElement:
        return tuple(reversed(field.coeffs(field._check(x))))

    def from_group(g: Sequence[int]) -> int:
        return field.from_coeffs(list(reversed(group.element(g))))

    return group, to_group, from_group


def addchar_label(field: FiniteField, y: int) -> GroupElement:
    """Group label m with gamma_m(to_group(x)) = gamma_y(x) for every x."""
    basis = [field.p**i for i in range(field.k)]
    return tuple(field.trace(field.mul(b, y)) for b in reversed(basis))
