"""Cylinder sets, integer-valued cylinder functions and dyadic measure.

Keys are lattice sites for the toric diagonal and edges for the
standard one; anything :func:`~toric_diagonal.lattice.site_key` orders
can be a key.  A function on ``{-1, 1}^K`` is stored as a full
``numpy.int64`` table of length ``2**|K|``: bit ``i`` of a table index
is set when key ``i`` takes the value ``-1``.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Hashable, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from toric_diagonal.lattice import site_key

#: Largest key set a table may be built over.
MAX_KEYS = 16

Key = Hashable


def _sorted_keys(keys: Iterable[Key]) -> Tuple[Key, ...]:
    return tuple(sorted(set(keys), key=site_key))


@dataclass(frozen=True)
class Dyadic:
    """An exact dyadic rational ``numerator / 2**exponent`` in lowest terms."""

    numerator: int
    exponent: int = 0

    def __post_init__(self) -> None:
        if self.exponent < 0:
            raise ValueError(f"Negative exponent {self.exponent}")
        num, exp = self.numerator, self.exponent
        while exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "Dyadic":
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 2 ** self.exponent)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        exp = max(self.exponent, other.exponent)
        return Dyadic(
            self.numerator * 2 ** (exp - self.exponent)
            + other.numerator * 2 ** (exp - other.exponent),
            exp,
        )

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.numerator, self.exponent)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic(self.numerator * other.numerator, self.exponent + other.exponent)

    def __lt__(self, other: "Dyadic") -> bool:
        return self.to_fraction() < other.to_fraction()

    @property
    def is_nonnegative(self) -> bool:
        return self.numerator >= 0

    def __str__(self) -> str:
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"


@dataclass(frozen=True)
class CylinderSet:
    """``Ω(K, ε)``: configurations agreeing with ``ε`` on ``K``."""

    keys: Tuple[Key, ...] = ()
    pattern: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(self.keys) != len(self.pattern):
            raise ValueError("Pattern must assign one sign per key")
        if len(set(self.keys)) != len(self.keys):
            raise ValueError("Duplicate cylinder key")
        if any(s not in (1, -1) for s in self.pattern):
            raise ValueError(f"Cylinder pattern must be ±1, got {self.pattern}")
        order = sorted(range(len(self.keys)), key=lambda i: site_key(self.keys[i]))
        object.__setattr__(self, "keys", tuple(self.keys[i] for i in order))
        object.__setattr__(self, "pattern", tuple(self.pattern[i] for i in order))

    @classmethod
    def from_mapping(cls, values: Mapping[Key, int]) -> "CylinderSet":
        return cls(tuple(values), tuple(values.values()))

    @classmethod
    def canonical(cls, keys: Iterable[Key]) -> "CylinderSet":
        """The all-``+1`` cylinder on *keys*."""
        ks = _sorted_keys(keys)
        return cls(ks, (1,) * len(ks))

    def as_mapping(self) -> dict:
        return dict(zip(self.keys, self.pattern))

    @property
    def index(self) -> int:
        """Table index of the pattern."""
        return sum(1 << i for i, s in enumerate(self.pattern) if s == -1)

    def contains(self, f) -> bool:
        """Whether a configuration (anything with ``value(key)``) lies in the set."""
        return all(f.value(k) == s for k, s in zip(self.keys, self.pattern))


def refine(c: CylinderSet, k_prime: Iterable[Key]) -> List[CylinderSet]:
    """Split ``Ω(K, ε)`` into the ``2**|K'∖K|`` cylinders over ``K'``.

    Raises:
        ValueError: If ``K' ⊉ K``.
    """
    k_prime = set(k_prime)
    if not set(c.keys) <= k_prime:
        raise ValueError("Refinement key set must contain the cylinder's keys")
    extra = _sorted_keys(k_prime - set(c.keys))
    base = c.as_mapping()
    out = []
    for signs in cartesian((1, -1), repeat=len(extra)):
        values = dict(base)
        values.update(zip(extra, signs))
        out.append(CylinderSet.from_mapping(values))
    return out


def _positions(keys: Sequence[Key], within: Sequence[Key]) -> List[int]:
    where = {k: i for i, k in enumerate(within)}
    return [where[k] for k in keys]


class CylinderFunction:
    """``Q = Σ_ε table[ε]·1_{Ω(K, ε)}`` with integer values.

    Instances are immutable.  Arithmetic returns canonical functions
    (no key the table is independent of); equality compares canonical
    forms, so it is equality of the functions on ``Ω``.

    Raises:
        ValueError: If the table length is not ``2**|K|`` or ``K`` is
            larger than :data:`MAX_KEYS`.
    """

    __slots__ = ("keys", "table")

    def __init__(self, keys: Iterable[Key], table: Sequence[int]) -> None:
        keys = tuple(keys)
        if len(keys) > MAX_KEYS:
            raise ValueError(f"At most {MAX_KEYS} keys supported, got {len(keys)}")
        if len(set(keys)) != len(keys):
            raise ValueError("Duplicate cylinder key")
        arr = np.array(table, dtype=np.int64).reshape(-1)
        if arr.size != 1 << len(keys):
            raise ValueError(
                f"Table of length {arr.size} does not match {len(keys)} keys"
            )
        ordered = _sorted_keys(keys)
        if ordered != keys:
            arr = _permute(arr, keys, ordered)
        arr.setflags(write=False)
        object.__setattr__(self, "keys", ordered)
        object.__setattr__(self, "table", arr)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("CylinderFunction is immutable")

    @classmethod
    def constant(cls, value: int) -> "CylinderFunction":
        return cls((), [value])

    @classmethod
    def indicator(cls, c: CylinderSet) -> "CylinderFunction":
        table = np.zeros(1 << len(c.keys), dtype=np.int64)
        table[c.index] = 1
        return cls(c.keys, table)

    def value(self, f) -> int:
        idx = sum(1 << i for i, k in enumerate(self.keys) if f.value(k) == -1)
        return int(self.table[idx])

    def refine_to(self, keys: Iterable[Key]) -> "CylinderFunction":
        """The same function tabulated over a superset of its keys.

        Raises:
            ValueError: If *keys* misses one of the current keys.
        """
        target = _sorted_keys(keys)
        if not set(self.keys) <= set(target):
            raise ValueError("Refinement key set must contain the function's keys")
        pos = _positions(self.keys, target)
        idx = np.arange(1 << len(target), dtype=np.int64)
        old = np.zeros_like(idx)
        for j, p in enumerate(pos):
            old |= ((idx >> p) & 1) << j
        return CylinderFunction(target, self.table[old])

    def canonical(self) -> "CylinderFunction":
        """Drop every key the table does not depend on."""
        keys = list(self.keys)
        table = self.table.reshape((2,) * len(keys)) if keys else self.table
        i = 0
        while i < len(keys):
            axis = len(keys) - 1 - i
            lo = np.take(table, 0, axis=axis)
            hi = np.take(table, 1, axis=axis)
            if np.array_equal(lo, hi):
                table = lo
                del keys[i]
            else:
                i += 1
        return CylinderFunction(keys, np.asarray(table).reshape(-1))

    def _aligned(self, other: "CylinderFunction") -> Tuple[np.ndarray, np.ndarray, Tuple[Key, ...]]:
        keys = _sorted_keys(self.keys + other.keys)
        return self.refine_to(keys).table, other.refine_to(keys).table, keys

    def __add__(self, other: "CylinderFunction") -> "CylinderFunction":
        a, b, keys = self._aligned(other)
        return CylinderFunction(keys, a + b).canonical()

    def __sub__(self, other: "CylinderFunction") -> "CylinderFunction":
        a, b, keys = self._aligned(other)
        return CylinderFunction(keys, a - b).canonical()

    def __neg__(self) -> "CylinderFunction":
        return CylinderFunction(self.keys, -self.table)

    def scalar_multiply(self, k: int) -> "CylinderFunction":
        return CylinderFunction(self.keys, k * self.table).canonical()

    def with_table(self, table: np.ndarray) -> "CylinderFunction":
        return CylinderFunction(self.keys, table)

    @property
    def is_nonnegative(self) -> bool:
        return bool((self.table >= 0).all())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CylinderFunction):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.keys == b.keys and np.array_equal(a.table, b.table)

    def __hash__(self) -> int:
        c = self.canonical()
        return hash((c.keys, c.table.tobytes()))

    def __repr__(self) -> str:
        return f"CylinderFunction(keys={self.keys!r}, table={self.table.tolist()!r})"


def _permute(table: np.ndarray, keys: Sequence[Key], ordered: Sequence[Key]) -> np.ndarray:
    pos = _positions(keys, ordered)
    idx = np.arange(table.size, dtype=np.int64)
    old = np.zeros_like(idx)
    for j, p in enumerate(pos):
        old |= ((idx >> p) & 1) << j
    return table[old]


def measure(q: CylinderFunction) -> Dyadic:
    """``∫ Q dμ`` for the uniform Bernoulli measure: ``Σ table · 2^{-|K|}``."""
    return Dyadic(int(q.table.sum()), len(q.keys))
