"""Brute-force dense ground truth on patches of at most 12 edges.

Operators are ``2^n × 2^n`` matrices over the Gaussian dyadics, stored
as a pair of sparse ``int64`` matrices (real and imaginary numerators)
with a shared power-of-two denominator.  Edge ``i`` of the patch's
canonical order is bit ``i`` of a basis-state index; a Pauli operator
is the signed permutation ``|s⟩ ↦ φ·(-1)^{|s ∧ z|}·|s ⊕ x⟩``.

Nothing here uses floating point, and nothing in the symbolic modules
imports this one.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, lcm
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from toric_diagonal.lattice import Edge, Patch
from toric_diagonal.pauli import (
    GaussianRational,
    Member,
    MembershipResult,
    NotMember,
    Phase,
    PauliOperator,
    product,
)
from toric_diagonal.toric import (
    CompressionResult,
    Configuration,
    ProjectorNetElement,
    Residual,
    Scalar,
    Zero,
    projector_net,
)

logger = logging.getLogger(__name__)

#: Largest patch the oracle will expand.
MAX_ORACLE_EDGES = 12

_PHASE_PARTS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def _csr(n: int, data=None, rows=None, cols=None) -> sparse.csr_matrix:
    dim = 1 << n
    if data is None:
        return sparse.csr_matrix((dim, dim), dtype=np.int64)
    m = sparse.csr_matrix((data, (rows, cols)), shape=(dim, dim), dtype=np.int64)
    m.eliminate_zeros()
    return m


class DenseOperator:
    """``(re + i·im) / 2**exponent`` for integer sparse matrices.

    Args:
        n_edges: Number of qubits; the dimension is ``2**n_edges``.
        re: Real numerators.
        im: Imaginary numerators.
        exponent: Power of two dividing every entry.
    """

    def __init__(self, n_edges: int, re: sparse.csr_matrix,
                 im: sparse.csr_matrix, exponent: int = 0) -> None:
        self.n_edges = n_edges
        self.re = sparse.csr_matrix(re, dtype=np.int64)
        self.im = sparse.csr_matrix(im, dtype=np.int64)
        self.re.eliminate_zeros()
        self.im.eliminate_zeros()
        self.exponent = exponent
        self._normalize()

    def _normalize(self) -> None:
        data = np.concatenate([self.re.data, self.im.data])
        if self.exponent == 0 or not data.size:
            self.exponent = 0 if not data.size else self.exponent
            return
        # largest power of two dividing every numerator
        twos = int(np.bitwise_count((data & -data) - 1).min())
        shift = min(twos, self.exponent)
        if shift:
            self.re = self.re.copy()
            self.im = self.im.copy()
            self.re.data >>= shift
            self.im.data >>= shift
            self.exponent -= shift

    @classmethod
    def identity(cls, n_edges: int) -> "DenseOperator":
        eye = sparse.identity(1 << n_edges, dtype=np.int64, format="csr")
        return cls(n_edges, eye, _csr(n_edges))

    @classmethod
    def zero(cls, n_edges: int) -> "DenseOperator":
        return cls(n_edges, _csr(n_edges), _csr(n_edges))

    @property
    def dimension(self) -> int:
        return 1 << self.n_edges

    def _check(self, other: "DenseOperator") -> None:
        if other.n_edges != self.n_edges:
            raise ValueError(
                f"Dimension mismatch: {self.n_edges} vs {other.n_edges} edges"
            )

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        self._check(other)
        re = self.re @ other.re - self.im @ other.im
        im = self.re @ other.im + self.im @ other.re
        return DenseOperator(self.n_edges, re, im, self.exponent + other.exponent)

    def _aligned(self, other: "DenseOperator"):
        self._check(other)
        exp = max(self.exponent, other.exponent)
        a, b = 1 << (exp - self.exponent), 1 << (exp - other.exponent)
        return self.re * a, self.im * a, other.re * b, other.im * b, exp

    def __add__(self, other: "DenseOperator") -> "DenseOperator":
        r1, i1, r2, i2, exp = self._aligned(other)
        return DenseOperator(self.n_edges, r1 + r2, i1 + i2, exp)

    def __sub__(self, other: "DenseOperator") -> "DenseOperator":
        r1, i1, r2, i2, exp = self._aligned(other)
        return DenseOperator(self.n_edges, r1 - r2, i1 - i2, exp)

    def scaled(self, re: int, im: int = 0) -> "DenseOperator":
        """Multiply by the Gaussian integer ``re + i·im``."""
        return DenseOperator(
            self.n_edges,
            self.re * re - self.im * im,
            self.re * im + self.im * re,
            self.exponent,
        )

    def halved(self, times: int = 1) -> "DenseOperator":
        return DenseOperator(self.n_edges, self.re, self.im, self.exponent + times)

    def adjoint(self) -> "DenseOperator":
        return DenseOperator(self.n_edges, self.re.T.tocsr(), -self.im.T.tocsr(), self.exponent)

    @property
    def is_zero(self) -> bool:
        return self.re.nnz == 0 and self.im.nnz == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseOperator):
            return NotImplemented
        return self.n_edges == other.n_edges and (self - other).is_zero

    __hash__ = None  # type: ignore[assignment]

    def trace(self) -> GaussianRational:
        den = 1 << self.exponent
        return GaussianRational(
            Fraction(int(self.re.diagonal().sum()), den),
            Fraction(int(self.im.diagonal().sum()), den),
        )

    @property
    def is_hermitian(self) -> bool:
        return self == self.adjoint()

    @property
    def is_projector(self) -> bool:
        return self.is_hermitian and self @ self == self

    def times(self, c: GaussianRational) -> "DenseOperator":
        """Multiply by an exact scalar with power-of-two denominator.

        Raises:
            ValueError: If the denominator is not a power of two.
        """
        den = lcm(c.re.denominator, c.im.denominator)
        if den & (den - 1):
            raise ValueError(f"Scalar {c} is not dyadic")
        out = self.scaled(int(c.re * den), int(c.im * den))
        return out.halved(den.bit_length() - 1)

    def __repr__(self) -> str:
        return (f"DenseOperator(n_edges={self.n_edges}, nnz={self.re.nnz + self.im.nnz}, "
                f"exponent={self.exponent})")


def _require_oracle_size(patch: Patch) -> None:
    if len(patch) > MAX_ORACLE_EDGES:
        raise ValueError(
            f"Oracle patches are limited to {MAX_ORACLE_EDGES} edges, got {len(patch)}"
        )


def _mask(edges: FrozenSet[Edge], index: Dict[Edge, int]) -> int:
    return sum(1 << index[e] for e in edges)


def dense(p: PauliOperator, patch: Patch) -> DenseOperator:
    """Expand *p* on the tensor product over *patch*'s edges.

    Raises:
        ValueError: If *p* is supported outside *patch* or the patch is
            larger than the oracle cap.
    """
    _require_oracle_size(patch)
    outside = p.support - patch.edges
    if outside:
        raise ValueError(
            f"Pauli support overflows the patch at {sorted(map(str, outside))}"
        )
    index = {e: i for i, e in enumerate(patch.sorted_edges)}
    n = len(patch)
    xmask = _mask(p.x_support, index)
    zmask = _mask(p.z_support, index)

    states = np.arange(1 << n, dtype=np.int64)
    signs = 1 - 2 * (np.bitwise_count(states & zmask).astype(np.int64) & 1)
    rows = states ^ xmask
    re_c, im_c = _PHASE_PARTS[p.phase.power]
    return DenseOperator(
        n,
        _csr(n, signs * re_c, rows, states),
        _csr(n, signs * im_c, rows, states),
    )


@lru_cache(maxsize=128)
def _projector(edges: FrozenSet[Edge], generators: Tuple[PauliOperator, ...]) -> DenseOperator:
    patch = Patch(edges)
    out = DenseOperator.identity(len(patch))
    eye = DenseOperator.identity(len(patch))
    for g in generators:
        out = out @ (eye + dense(g, patch)).halved()
    return out


def dense_projector(
    e: ProjectorNetElement, ambient: Optional[Patch] = None
) -> DenseOperator:
    """``∏ ½(1 + f(w)·S_w)``, optionally embedded in a larger patch.

    Raises:
        ValueError: If *ambient* does not contain the element's patch.
    """
    patch = e.patch if ambient is None else ambient
    if not e.patch.issubset(patch):
        raise ValueError("Ambient patch must contain the net element's patch")
    _require_oracle_size(patch)
    return _projector(patch.edges, e.group.generators)


def _sector_projector(
    generators: Sequence[PauliOperator], sector: Sequence[int], patch: Patch
) -> DenseOperator:
    eye = DenseOperator.identity(len(patch))
    out = eye
    for g, bit in zip(generators, sector):
        term = dense(g, patch).scaled(-1 if bit else 1)
        out = out @ (eye + term).halved()
    return out


def _scalar_subsets(generators: Sequence[PauliOperator]) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    """Generator subsets whose product is ``±1``, with that sign."""
    out = []
    m = len(generators)
    for size in range(m + 1):
        for subset in combinations(range(m), size):
            op = product(generators[i] for i in subset)
            if op.is_scalar:
                out.append((subset, op.phase.sign))
    return tuple(out)


def _sector_trace(
    scalars: Sequence[Tuple[Tuple[int, ...], int]], sector: Sequence[int], n: int
) -> int:
    """``Tr ∏ ½(1 + (-1)^{σ_i} g_i)``: only scalar products are not traceless."""
    m = len(sector)
    total = sum(
        sign * (-1) ** sum(sector[i] for i in subset) for subset, sign in scalars
    )
    return int(Fraction(total * 2 ** n, 2 ** m))


@dataclass(frozen=True)
class HamiltonianSpectrum:
    """Spectrum of ``H_Λ(f) = Σ_w ½(1 - f(w)·S_w)`` by syndrome sectors.

    Attributes:
        operator: The dense Hamiltonian.
        n_edges: Patch size.
        m: Number of interior sites (terms of ``H``).
        multiplicities: ``(eigenvalue, multiplicity)`` pairs, summed
            from dense sector traces where a sector was checked and
            from the symbolic expansion elsewhere.
        verified: Every checked sector satisfies ``H P_σ = |σ| P_σ``.
        sector_traces: ``(σ, dense trace, symbolic trace)`` for every
            checked sector.
    """

    operator: DenseOperator
    n_edges: int
    m: int
    multiplicities: Tuple[Tuple[int, int], ...]
    verified: bool
    sector_traces: Tuple[Tuple[Tuple[int, ...], Fraction, int], ...] = ()

    @property
    def eigenvalues(self) -> Tuple[int, ...]:
        return tuple(k for k, mult in self.multiplicities if mult)

    @property
    def traces_agree(self) -> bool:
        """Dense ``Tr P_σ`` equals the symbolic count on every checked sector."""
        return all(d == s for _, d, s in self.sector_traces)

    def matches_counting(self) -> bool:
        """Multiplicities equal ``C(m, k)·2^{n-m}``."""
        expected = tuple(
            (k, comb(self.m, k) * 2 ** (self.n_edges - self.m)) for k in range(self.m + 1)
        )
        return self.multiplicities == expected


def _checked_sectors(m: int) -> Iterable[Tuple[int, ...]]:
    if m <= 6:
        for idx in range(1 << m):
            yield tuple((idx >> i) & 1 for i in range(m))
        return
    yield (0,) * m
    for i in range(m):
        yield tuple(int(j == i) for j in range(m))
    yield (1,) * m


def dense_hamiltonian(patch: Patch, f: Configuration) -> HamiltonianSpectrum:
    """Build ``H_Λ(f)`` and its exact spectrum.

    Every checked sector (all of them for ``m <= 6``, a fixed sample
    otherwise) is expanded densely: ``H P_σ = |σ| P_σ`` is verified and
    ``Tr P_σ`` is read off the matrix and compared with the trace of
    the symbolic expansion, in which only scalar generator products
    contribute.
    """
    _require_oracle_size(patch)
    e = projector_net(patch, f)
    gens = e.group.generators
    n, m = len(patch), len(gens)
    eye = DenseOperator.identity(n)
    h = DenseOperator.zero(n)
    for g in gens:
        h = h + (eye - dense(g, patch)).halved()

    scalars = _scalar_subsets(gens)
    traces: Dict[Tuple[int, ...], Fraction] = {}
    for idx in range(1 << m):
        sector = tuple((idx >> i) & 1 for i in range(m))
        traces[sector] = Fraction(_sector_trace(scalars, sector, n))

    verified = True
    checked = []
    for sector in _checked_sectors(m):
        p_sigma = _sector_projector(gens, sector, patch)
        verified &= h @ p_sigma == p_sigma.scaled(sum(sector))
        tr = p_sigma.trace()
        dense_trace = tr.re if tr.im == 0 else Fraction(-1)
        checked.append((sector, dense_trace, int(traces[sector])))
        traces[sector] = dense_trace

    counts: Dict[int, Fraction] = {k: Fraction(0) for k in range(m + 1)}
    for sector, t in traces.items():
        counts[sum(sector)] += t
    multiplicities = tuple((k, int(c) if c.denominator == 1 else -1)
                           for k, c in sorted(counts.items()))
    logger.debug("Dense Hamiltonian on %d edges, %d terms: verified=%s", n, m, verified)
    return HamiltonianSpectrum(h, n, m, multiplicities, bool(verified), tuple(checked))


@dataclass(frozen=True)
class DenseCompression:
    """``P X P`` against ``ω(X)·P`` with ``ω(X) = Tr(P X P) / Tr(P)``."""

    is_zero: bool
    is_scalar: bool
    scalar: GaussianRational

    def agrees(self, result: CompressionResult) -> bool:
        """Whether a symbolic classification describes the same matrix."""
        if isinstance(result, Zero):
            return self.is_zero
        if isinstance(result, Scalar):
            return (not self.is_zero and self.is_scalar
                    and self.scalar == result.sign.to_gaussian())
        if isinstance(result, Residual):
            return not self.is_scalar
        return False


def dense_compress(
    p: PauliOperator, e: ProjectorNetElement, ambient: Optional[Patch] = None
) -> DenseCompression:
    patch = e.patch if ambient is None else ambient
    proj = dense_projector(e, patch)
    compressed = proj @ dense(p, patch) @ proj
    omega = compressed.trace() * GaussianRational(1 / proj.trace().re)
    return DenseCompression(
        is_zero=compressed.is_zero,
        is_scalar=compressed == proj.times(omega),
        scalar=omega,
    )


def dense_commutes(p: PauliOperator, q: PauliOperator, patch: Patch) -> bool:
    a, b = dense(p, patch), dense(q, patch)
    return a @ b == b @ a


def dense_membership(
    p: PauliOperator, generators: Sequence[PauliOperator], patch: Patch
) -> MembershipResult:
    """Search every generator subset for ``∏ g_i = s·p``."""
    target = dense(p, patch)
    mats = [dense(g, patch) for g in generators]
    scaled_targets = [(Phase(k), target.scaled(*_PHASE_PARTS[k])) for k in range(4)]
    for size in range(len(generators) + 1):
        for subset in combinations(range(len(generators)), size):
            prod = DenseOperator.identity(len(patch))
            for i in subset:
                prod = prod @ mats[i]
            for phase, candidate in scaled_targets:
                if prod == candidate:
                    return Member(phase, subset)
    return NotMember()
