"""Exact Pauli-group algebra over finite edge supports.

A :class:`PauliOperator` with x-support ``X``, z-support ``Z`` and
phase ``φ`` denotes ``φ · (∏_{e∈X} σ^x_e) · (∏_{e∈Z} σ^z_e)``: the
Z-factors act first.  Under this convention ``σ^x_e σ^z_e`` is the
operator with ``X = Z = {e}`` and phase ``1`` (that is, ``-iσ^y_e``).

Products, commutation and syndromes are computed on edge sets;
stabilizer-group membership and syndrome solving go through the
bit-packed :mod:`toric_diagonal.bitmatrix` kernel.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from toric_diagonal.bitmatrix import EchelonBasis, pack, row_parities
from toric_diagonal.lattice import (
    Edge,
    Face,
    LatticePath,
    PathKind,
    Patch,
    Site,
    Vertex,
    crossed_faces,
    edge_boundary,
    face_edges,
    site_key,
    star_edges,
)

logger = logging.getLogger(__name__)

_PHASE_LABELS = ("1", "i", "-1", "-i")


@dataclass(frozen=True)
class Phase:
    """An element ``i**power`` of ``{1, i, -1, -i}``."""

    power: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "power", self.power % 4)

    @classmethod
    def from_label(cls, label: str) -> "Phase":
        """Parse one of ``"1"``, ``"i"``, ``"-1"``, ``"-i"``.

        Raises:
            ValueError: On any other label.
        """
        try:
            return cls(_PHASE_LABELS.index(label.strip()))
        except ValueError:
            raise ValueError(f"Invalid phase label: {label!r}") from None

    @classmethod
    def from_sign(cls, sign: int) -> "Phase":
        if sign not in (1, -1):
            raise ValueError(f"Sign must be +1 or -1, got {sign}")
        return cls(0 if sign == 1 else 2)

    @property
    def label(self) -> str:
        return _PHASE_LABELS[self.power]

    @property
    def is_real(self) -> bool:
        return self.power % 2 == 0

    @property
    def sign(self) -> int:
        """``±1`` for a real phase.

        Raises:
            ValueError: If the phase is imaginary.
        """
        if not self.is_real:
            raise ValueError(f"Phase {self.label} has no real sign")
        return 1 if self.power == 0 else -1

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.power + other.power)

    def __neg__(self) -> "Phase":
        return Phase(self.power + 2)

    def inverse(self) -> "Phase":
        return Phase(-self.power)

    def to_gaussian(self) -> "GaussianRational":
        re, im = ((1, 0), (0, 1), (-1, 0), (0, -1))[self.power]
        return GaussianRational(Fraction(re), Fraction(im))

    def __str__(self) -> str:
        return self.label


ONE = Phase(0)
MINUS_ONE = Phase(2)


def _as_fraction(value: Union[int, Fraction]) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class GaussianRational:
    """An exact complex number ``re + i·im`` with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _as_fraction(self.re))
        object.__setattr__(self, "im", _as_fraction(self.im))

    @classmethod
    def coerce(cls, value: object) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, Phase):
            return value.to_gaussian()
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        raise TypeError(f"Cannot use {value!r} as an exact coefficient")

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __add__(self, other: object) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: object) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: object) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussianRational()


# ---------------------------------------------------------------------------
# Pauli operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PauliOperator:
    """A finitely supported element of the Pauli group.

    Attributes:
        x_support: Edges carrying a ``σ^x`` factor.
        z_support: Edges carrying a ``σ^z`` factor.
        phase: Global phase in ``{1, i, -1, -i}``.
    """

    x_support: FrozenSet[Edge] = field(default_factory=frozenset)
    z_support: FrozenSet[Edge] = field(default_factory=frozenset)
    phase: Phase = ONE

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_support", frozenset(self.x_support))
        object.__setattr__(self, "z_support", frozenset(self.z_support))

    @classmethod
    def identity(cls) -> "PauliOperator":
        return cls()

    @property
    def support(self) -> FrozenSet[Edge]:
        return self.x_support | self.z_support

    @property
    def weight(self) -> int:
        return len(self.support)

    @property
    def is_identity(self) -> bool:
        return not self.x_support and not self.z_support and self.phase == ONE

    @property
    def is_scalar(self) -> bool:
        return not self.x_support and not self.z_support

    @property
    def is_hermitian(self) -> bool:
        overlap = len(self.x_support & self.z_support)
        return self.phase.is_real == (overlap % 2 == 0)

    def with_phase(self, phase: Phase) -> "PauliOperator":
        return PauliOperator(self.x_support, self.z_support, phase)

    def unsigned(self) -> "PauliOperator":
        """The same supports with phase ``1``."""
        return self.with_phase(ONE)

    def scaled(self, phase: Phase) -> "PauliOperator":
        return self.with_phase(self.phase * phase)

    def adjoint(self) -> "PauliOperator":
        """The inverse (equivalently the adjoint) of the operator."""
        overlap = len(self.x_support & self.z_support)
        flip = Phase(2 * (overlap % 2))
        return self.with_phase(self.phase.inverse() * flip)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def sort_key(self) -> Tuple[Tuple, Tuple]:
        return (
            tuple(site_key(e) for e in sorted(self.x_support, key=site_key)),
            tuple(site_key(e) for e in sorted(self.z_support, key=site_key)),
        )

    def __str__(self) -> str:
        xs = " ".join(f"X{e}" for e in sorted(self.x_support, key=site_key))
        zs = " ".join(f"Z{e}" for e in sorted(self.z_support, key=site_key))
        body = " ".join(s for s in (xs, zs) if s) or "I"
        return f"{self.phase.label}·{body}" if self.phase != ONE else body


def sigma_x(e: Edge) -> PauliOperator:
    return PauliOperator(x_support=frozenset((e,)))


def sigma_z(e: Edge) -> PauliOperator:
    return PauliOperator(z_support=frozenset((e,)))


def sigma_y(e: Edge) -> PauliOperator:
    """``σ^y_e = i σ^x_e σ^z_e``."""
    return PauliOperator(frozenset((e,)), frozenset((e,)), Phase(1))


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact product ``p · q``.

    Moving ``Z(p.z)`` past ``X(q.x)`` contributes
    ``(-1)^{|p.z ∩ q.x|}``; supports combine by symmetric difference.
    """
    swap = len(p.z_support & q.x_support) % 2
    return PauliOperator(
        p.x_support ^ q.x_support,
        p.z_support ^ q.z_support,
        p.phase * q.phase * Phase(2 * swap),
    )


def product(operators: Iterable[PauliOperator]) -> PauliOperator:
    """Ordered product of the operators, identity when empty."""
    return reduce(multiply, operators, PauliOperator.identity())


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    """True iff ``|x_p ∩ z_q| + |z_p ∩ x_q|`` is even."""
    overlap = len(p.x_support & q.z_support) + len(p.z_support & q.x_support)
    return overlap % 2 == 0


def conjugate(u: PauliOperator, p: PauliOperator) -> PauliOperator:
    """``u · p · u⁻¹``."""
    return multiply(multiply(u, p), u.adjoint())


def ribbon_z(path: LatticePath) -> PauliOperator:
    """``F^z_ρ``: product of ``σ^z`` along a direct path.

    Raises:
        ValueError: If *path* is a dual path.
    """
    if path.kind is not PathKind.DIRECT:
        raise ValueError("ribbon_z needs a direct path")
    return PauliOperator(z_support=frozenset(path.edges))


def ribbon_x(path: LatticePath) -> PauliOperator:
    """``F^x_ρ̃``: product of ``σ^x`` over the edges a dual path crosses.

    Raises:
        ValueError: If *path* is a direct path.
    """
    if path.kind is not PathKind.DUAL:
        raise ValueError("ribbon_x needs a dual path")
    return PauliOperator(x_support=frozenset(path.edges))


def anticommutes_with_site(p: PauliOperator, w: Site) -> bool:
    """Whether *p* anticommutes with the star or face operator at *w*."""
    if isinstance(w, Vertex):
        return len(p.z_support & star_edges(w)) % 2 == 1
    if isinstance(w, Face):
        return len(p.x_support & face_edges(w)) % 2 == 1
    raise ValueError(f"Not a lattice site: {w!r}")


def syndrome(p: PauliOperator, sites: Sequence[Site]) -> Tuple[int, ...]:
    """Bit ``k`` is 1 iff *p* anticommutes with ``S_{sites[k]}``."""
    return tuple(int(anticommutes_with_site(p, w)) for w in sites)


def syndrome_sites(p: PauliOperator) -> Tuple[FrozenSet[Vertex], FrozenSet[Face]]:
    """Every star and face of the infinite lattice anticommuting with *p*."""
    return edge_boundary(p.z_support), crossed_faces(p.x_support)


# ---------------------------------------------------------------------------
# Symplectic encoding and stabilizer groups
# ---------------------------------------------------------------------------

class SymplecticEncoder:
    """Dense indexing of a working edge set for bit-packed rows.

    Bits ``[0, n)`` hold the x-support and ``[n, 2n)`` the z-support.
    """

    def __init__(self, edges: Iterable[Edge]) -> None:
        self.edges: Tuple[Edge, ...] = tuple(sorted(set(edges), key=site_key))
        self.index: Dict[Edge, int] = {e: i for i, e in enumerate(self.edges)}
        self.n = len(self.edges)

    @property
    def n_bits(self) -> int:
        return 2 * self.n

    def covers(self, p: PauliOperator) -> bool:
        return p.support <= self.index.keys()

    def encode(self, p: PauliOperator) -> np.ndarray:
        """Packed ``(x | z)`` row; edges outside the index are ignored."""
        bits = [self.index[e] for e in p.x_support if e in self.index]
        bits += [self.n + self.index[e] for e in p.z_support if e in self.index]
        return pack(bits, self.n_bits)

    def encode_swapped(self, p: PauliOperator) -> np.ndarray:
        """Packed ``(z | x)`` row: ANDed with :meth:`encode` of another
        operator, its popcount parity is the symplectic product."""
        bits = [self.index[e] for e in p.z_support if e in self.index]
        bits += [self.n + self.index[e] for e in p.x_support if e in self.index]
        return pack(bits, self.n_bits)

    def decode(self, bits: Iterable[int]) -> PauliOperator:
        xs, zs = set(), set()
        for b in bits:
            if b < self.n:
                xs.add(self.edges[b])
            else:
                zs.add(self.edges[b - self.n])
        return PauliOperator(frozenset(xs), frozenset(zs))


@dataclass(frozen=True)
class NotMember:
    """The operator is not ``± ∏`` of generators."""


@dataclass(frozen=True)
class Member:
    """``∏_{i ∈ witness} g_i = sign · p``, exactly, phase included."""

    sign: Phase
    witness: Tuple[int, ...]


MembershipResult = Union[NotMember, Member]


class SignedStabilizerGroup:
    """Group generated by independent, commuting, Hermitian Paulis.

    The generators are row-reduced once at construction; afterwards
    the group is read-only and safe to share.

    Args:
        generators: Operators with phase ``±1`` and empty x/z overlap.
        labels: Optional site label per generator (e.g. ``w`` for
            ``f(w)·S_w``).

    Raises:
        ValueError: If a generator is not Hermitian, two generators
            anticommute, or the generators are dependent.
    """

    def __init__(
        self,
        generators: Sequence[PauliOperator],
        labels: Optional[Sequence[Site]] = None,
    ) -> None:
        self.generators: Tuple[PauliOperator, ...] = tuple(generators)
        self.labels: Tuple[Site, ...] = tuple(labels) if labels is not None else ()
        if labels is not None and len(self.labels) != len(self.generators):
            raise ValueError("One label per generator is required")

        for i, g in enumerate(self.generators):
            if not g.phase.is_real or not g.is_hermitian:
                raise ValueError(f"Generator {i} ({g}) is not a Hermitian ±1 Pauli")

        self.encoder = SymplecticEncoder(
            e for g in self.generators for e in g.support
        )
        width = self.encoder.n_bits
        rows = [self.encoder.encode(g) for g in self.generators]
        self._rows = np.array(rows, dtype=np.uint64).reshape(len(rows), -1) \
            if rows else np.zeros((0, 1), dtype=np.uint64)
        self._swapped = np.array(
            [self.encoder.encode_swapped(g) for g in self.generators],
            dtype=np.uint64,
        ).reshape(len(rows), -1) if rows else np.zeros((0, 1), dtype=np.uint64)

        for i, row in enumerate(self._rows):
            clash = row_parities(self._swapped[i + 1:], row)
            if clash.any():
                j = i + 1 + int(np.flatnonzero(clash)[0])
                raise ValueError(f"Generators {i} and {j} anticommute")

        self._basis = EchelonBasis(width)
        for i, row in enumerate(self._rows):
            if not self._basis.insert(row, label=i):
                raise ValueError(f"Generator {i} ({self.generators[i]}) is dependent")
        logger.debug("Stabilizer group: %d generators on %d edges",
                     len(self.generators), self.encoder.n)

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def rank(self) -> int:
        return self._basis.rank

    @property
    def basis(self) -> EchelonBasis:
        return self._basis

    def anticommuting(self, p: PauliOperator) -> List[int]:
        """Indices of generators anticommuting with *p*."""
        if not self.generators:
            return []
        flags = row_parities(self._swapped, self.encoder.encode(p))
        return np.flatnonzero(flags).tolist()

    def membership(self, p: PauliOperator) -> MembershipResult:
        """Decide whether ``p ∈ {±1, ±i} · G``.

        Operators anticommuting with a generator, or supported outside
        the generators' edges, are :class:`NotMember`.
        """
        if not self.encoder.covers(p):
            return NotMember()
        if self.anticommuting(p):
            return NotMember()
        witness = self._basis.solve(self.encoder.encode(p))
        if witness is None:
            return NotMember()
        prod = product(self.generators[i] for i in witness)
        if prod.x_support != p.x_support or prod.z_support != p.z_support:
            raise RuntimeError("Echelon decomposition disagrees with the product")
        return Member(prod.phase * p.phase.inverse(), tuple(witness))


# ---------------------------------------------------------------------------
# Syndrome solving
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Infeasible:
    """No Pauli supported in the patch realizes the target syndrome."""


@dataclass(frozen=True)
class Solution:
    operator: PauliOperator


SyndromeSolution = Union[Infeasible, Solution]


def solve_syndrome(target: Mapping[Site, int], support: Patch) -> SyndromeSolution:
    """Find a Pauli on *support* with a prescribed syndrome.

    The unknowns are one x-bit and one z-bit per edge of *support*;
    each key of *target* contributes one GF(2) equation.  The target
    vector is decomposed over the column space with provenance
    tracking, so the decomposition is the solution.

    Args:
        target: Map site → desired bit (0 commute, 1 anticommute).
        support: Patch the solution must live on.

    Returns:
        :class:`Solution` whose syndrome on the target sites equals
        the target, or :class:`Infeasible`.
    """
    sites = sorted(target, key=site_key)
    row_of = {w: k for k, w in enumerate(sites)}
    edges = support.sorted_edges
    basis = EchelonBasis(len(sites))

    columns: List[Tuple[str, Edge]] = []
    for e in edges:
        for kind, touched in (("x", e.faces), ("z", e.endpoints)):
            bits = [row_of[w] for w in touched if w in row_of]
            basis.insert(pack(bits, len(sites)), label=len(columns))
            columns.append((kind, e))

    wanted = pack([row_of[w] for w in sites if target[w] & 1], len(sites))
    chosen = basis.solve(wanted)
    if chosen is None:
        return Infeasible()
    xs = frozenset(columns[c][1] for c in chosen if columns[c][0] == "x")
    zs = frozenset(columns[c][1] for c in chosen if columns[c][0] == "z")
    return Solution(PauliOperator(xs, zs))


# ---------------------------------------------------------------------------
# Pauli sums
# ---------------------------------------------------------------------------

_Key = Tuple[FrozenSet[Edge], FrozenSet[Edge]]


@dataclass(frozen=True)
class PauliSum:
    """A finite linear combination of Pauli operators.

    Terms are stored with phase-1 operators (the phase is folded into
    the coefficient), without duplicates or zero coefficients, in
    canonical order.
    """

    terms: Tuple[Tuple[PauliOperator, GaussianRational], ...] = ()

    @classmethod
    def from_terms(
        cls, terms: Iterable[Tuple[object, PauliOperator]]
    ) -> "PauliSum":
        acc: Dict[_Key, GaussianRational] = {}
        for coeff, op in terms:
            key = (op.x_support, op.z_support)
            c = GaussianRational.coerce(coeff) * op.phase.to_gaussian()
            acc[key] = acc.get(key, ZERO) + c
        ordered = sorted(
            ((PauliOperator(k[0], k[1]), c) for k, c in acc.items() if not c.is_zero),
            key=lambda t: t[0].sort_key(),
        )
        return cls(tuple(ordered))

    @classmethod
    def of(cls, op: PauliOperator, coeff: object = 1) -> "PauliSum":
        return cls.from_terms([(coeff, op)])

    @classmethod
    def scalar(cls, coeff: object) -> "PauliSum":
        return cls.of(PauliOperator.identity(), coeff)

    def __iter__(self) -> Iterator[Tuple[PauliOperator, GaussianRational]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support(self) -> FrozenSet[Edge]:
        return frozenset(e for op, _ in self.terms for e in op.support)

    def _pairs(self) -> List[Tuple[object, PauliOperator]]:
        return [(c, op) for op, c in self.terms]

    def __add__(self, other: "PauliSum") -> "PauliSum":
        return PauliSum.from_terms(self._pairs() + other._pairs())

    def __neg__(self) -> "PauliSum":
        return PauliSum.from_terms([(-c, op) for op, c in self.terms])

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-other)

    def __mul__(self, other: object) -> "PauliSum":
        if isinstance(other, PauliSum):
            return PauliSum.from_terms(
                (c1 * c2, multiply(p1, p2))
                for p1, c1 in self.terms
                for p2, c2 in other.terms
            )
        if isinstance(other, PauliOperator):
            return self * PauliSum.of(other)
        scale = GaussianRational.coerce(other)
        return PauliSum.from_terms([(c * scale, op) for op, c in self.terms])

    def __rmul__(self, other: object) -> "PauliSum":
        if isinstance(other, PauliOperator):
            return PauliSum.of(other) * self
        return self * other
