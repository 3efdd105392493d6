"""The group Γ, its boundary map and the ∂Γ-action on configurations.

An element ``γ`` of Γ is a finite set of x-edges and a finite set of
z-edges.  Its boundary ``∂γ`` flips every vertex touching an odd
number of its z-edges and every face bordering an odd number of its
x-edges; boundaries act on configurations, cylinder sets and cylinder
functions by sign flips.

The standard diagonal is modelled alongside: its keys are edges and
its acting group is :class:`EdgeFlip`, finitely supported edge flips
without parity constraint.  :func:`invariant_triple` runs both models
through the same cylinder calculus.
"""

import enum
import logging
import random
from dataclasses import dataclass, field
from functools import singledispatch
from typing import (
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from toric_diagonal.cylinder import (
    CylinderFunction,
    CylinderSet,
    Dyadic,
    MAX_KEYS,
    measure,
)
from toric_diagonal.lattice import (
    Edge,
    Face,
    Patch,
    Site,
    Vertex,
    crossed_faces,
    edge_boundary,
    l_path,
    site_key,
)
from toric_diagonal.pauli import (
    PauliOperator,
    anticommutes_with_site,
    product,
    sigma_x,
    sigma_z,
)
from toric_diagonal.toric import Configuration

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GammaElement:
    """``γ ∈ Γ``: the x- and z-edges on which ``γ`` is ``-1``."""

    x_part: FrozenSet[Edge] = field(default_factory=frozenset)
    z_part: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_part", frozenset(self.x_part))
        object.__setattr__(self, "z_part", frozenset(self.z_part))

    def __mul__(self, other: "GammaElement") -> "GammaElement":
        return GammaElement(self.x_part ^ other.x_part, self.z_part ^ other.z_part)

    @property
    def is_identity(self) -> bool:
        return not self.x_part and not self.z_part


def _parity_error(flips: FrozenSet) -> Optional[str]:
    n_vertices = sum(isinstance(w, Vertex) for w in flips)
    n_faces = sum(isinstance(w, Face) for w in flips)
    if len(flips) != n_vertices + n_faces:
        return "boundary patterns flip sites only"
    if n_vertices % 2 or n_faces % 2:
        return f"odd flip counts ({n_vertices} vertices, {n_faces} faces)"
    return None


@dataclass(frozen=True)
class BoundaryPattern:
    """``∂γ``: the sites where the boundary is ``-1``.

    Raises:
        ValueError: If the vertex or face flip count is odd.
    """

    flips: FrozenSet[Site] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "flips", frozenset(self.flips))
        problem = _parity_error(self.flips)
        if problem:
            raise ValueError(f"Invalid boundary pattern: {problem}")

    def __mul__(self, other: "BoundaryPattern") -> "BoundaryPattern":
        return BoundaryPattern(self.flips ^ other.flips)

    def value(self, w: Site) -> int:
        return -1 if w in self.flips else 1


@dataclass(frozen=True)
class EdgeFlip:
    """Finitely supported sign flips of edges (the standard diagonal)."""

    flips: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "flips", frozenset(self.flips))

    def __mul__(self, other: "EdgeFlip") -> "EdgeFlip":
        return EdgeFlip(self.flips ^ other.flips)

    def value(self, e: Edge) -> int:
        return -1 if e in self.flips else 1


Pattern = Union[BoundaryPattern, EdgeFlip]


def boundary(gamma: GammaElement) -> BoundaryPattern:
    return BoundaryPattern(edge_boundary(gamma.z_part) | crossed_faces(gamma.x_part))


# ---------------------------------------------------------------------------
# Action
# ---------------------------------------------------------------------------

@singledispatch
def _flip(target: object, flips: FrozenSet) -> object:
    raise TypeError(f"Cannot act on {type(target).__name__}")


@_flip.register
def _(target: Configuration, flips: FrozenSet) -> Configuration:
    if target.default is None:
        flips = flips & target.window
    return target.with_flips(flips)


@_flip.register
def _(target: CylinderSet, flips: FrozenSet) -> CylinderSet:
    return CylinderSet(
        target.keys,
        tuple(-s if k in flips else s for k, s in zip(target.keys, target.pattern)),
    )


@_flip.register
def _(target: CylinderFunction, flips: FrozenSet) -> CylinderFunction:
    mask = sum(1 << i for i, k in enumerate(target.keys) if k in flips)
    idx = np.arange(target.table.size, dtype=np.int64)
    return target.with_table(target.table[idx ^ mask])


def act(b: Pattern, target):
    """Apply the sign flips of *b* to a configuration, cylinder set or
    cylinder function.  The action is an involution."""
    return _flip(target, b.flips)


# ---------------------------------------------------------------------------
# Constructive orbit results
# ---------------------------------------------------------------------------

def auxiliary_site(keys: Iterable[Hashable], kind: type) -> Site:
    """A site of type *kind* strictly outside the bounding box of *keys*.

    Uses ``(x_min - 2, y_min - 2)`` with the minimum taken over every
    coordinate appearing in *keys*.
    """
    coords = [(k.x, k.y) for k in keys]
    xmin = min((x for x, _ in coords), default=0)
    ymin = min((y for _, y in coords), default=0)
    corner = Vertex(xmin - 2, ymin - 2)
    return corner if kind is Vertex else Face(corner)


def _pair_up(flipped: List[Site], keys: Iterable[Site], kind: type) -> FrozenSet[Edge]:
    if len(flipped) % 2:
        flipped = flipped + [auxiliary_site(keys, kind)]
    edges: set = set()
    for a, b in zip(flipped[::2], flipped[1::2]):
        edges.symmetric_difference_update(l_path(a, b).edges)
    return frozenset(edges)


def solve_boundary(keys: Iterable[Site], target: Mapping[Site, int]) -> GammaElement:
    """Find ``γ`` with ``∂γ`` equal to *target* on *keys*.

    Flipped vertices are paired in order with L-shaped direct paths
    (faces with dual paths); an odd one out is routed to an auxiliary
    site outside the keys' bounding box.
    """
    keys = tuple(keys)
    flipped = sorted((k for k in keys if target.get(k, 1) == -1), key=site_key)
    vertices = [w for w in flipped if isinstance(w, Vertex)]
    faces = [w for w in flipped if isinstance(w, Face)]
    if len(vertices) + len(faces) != len(flipped):
        raise ValueError("solve_boundary keys must be vertices or faces")
    return GammaElement(
        x_part=_pair_up(faces, keys, Face),
        z_part=_pair_up(vertices, keys, Vertex),
    )


def exchange_element(c1: CylinderSet, c2: CylinderSet) -> GammaElement:
    """``γ`` whose boundary carries ``Ω(K, ε1)`` onto ``Ω(K, ε2)``.

    Raises:
        ValueError: If the cylinders have different key sets.
    """
    if c1.keys != c2.keys:
        raise ValueError("Cylinders must share their key set")
    mismatch = {k: a * b for k, a, b in zip(c1.keys, c1.pattern, c2.pattern)}
    return solve_boundary(c1.keys, mismatch)


def orbit_reach(f: Configuration, c: CylinderSet) -> GammaElement:
    """``γ`` with ``act(∂γ, f)`` inside ``c``: a density witness.

    Raises:
        ValueError: If *f* has no value on some key of *c*.
    """
    mismatch = {k: f.value(k) * s for k, s in zip(c.keys, c.pattern)}
    return solve_boundary(c.keys, mismatch)


def freeness_check(gamma: GammaElement, window: Iterable[Site]) -> bool:
    """Whether ``∂γ`` is visible on *window* and moves every point of it.

    A trivial boundary acts trivially, which is consistent with
    freeness; a non-trivial one flips at least one window site and so
    has no fixed point.
    """
    window = frozenset(window)
    b = boundary(gamma)
    if not b.flips <= window:
        return False
    if not b.flips:
        return True
    probe = Configuration.uniform(window)
    return act(b, probe) != probe


def ribbon_to_gamma(word: Sequence[Tuple[str, Edge]]) -> GammaElement:
    """``γ_u`` for the ribbon word ``u = ∏ σ^{kind}_e``.

    Raises:
        ValueError: If a letter kind is not ``"x"`` or ``"z"``.
    """
    gamma = GammaElement()
    for kind, e in word:
        if kind == "x":
            gamma = gamma * GammaElement(x_part=frozenset((e,)))
        elif kind == "z":
            gamma = gamma * GammaElement(z_part=frozenset((e,)))
        else:
            raise ValueError(f"Ribbon letter kind must be 'x' or 'z', got {kind!r}")
    return gamma


def word_operator(word: Sequence[Tuple[str, Edge]]) -> PauliOperator:
    """The Pauli product spelled by a ribbon word."""
    letters = {"x": sigma_x, "z": sigma_z}
    try:
        return product(letters[kind](e) for kind, e in word)
    except KeyError as exc:
        raise ValueError(f"Ribbon letter kind must be 'x' or 'z', got {exc.args[0]!r}") from None


def conjugation_signs(u: PauliOperator, sites: Iterable[Site]) -> Dict[Site, int]:
    """Sign by which ``Ad_u`` multiplies ``S_w`` for each site."""
    return {w: -1 if anticommutes_with_site(u, w) else 1 for w in sites}


def generated_subgroup(patterns: Sequence[Pattern]) -> FrozenSet[Pattern]:
    """Every product of the given patterns.

    The group is abelian and every element is an involution, so its
    size is ``2**rank`` of the generating set over GF(2).
    """
    if not patterns:
        return frozenset()
    kind = type(patterns[0])
    elements = {frozenset()}
    for p in patterns:
        elements |= {e ^ p.flips for e in elements}
    return frozenset(kind(e) for e in elements)


def class_reduce(q: CylinderFunction) -> Tuple[int, CylinderSet]:
    """Reduce ``[Q]`` to ``a·[1_{Ω(K, +1)}]``.

    Any two cylinders over the same keys are exchanged by a boundary,
    so each table entry contributes its value to the single class of
    the all-``+1`` cylinder over the canonical key set.
    """
    c = q.canonical()
    return int(c.table.sum()), CylinderSet.canonical(c.keys)


# ---------------------------------------------------------------------------
# The invariant triple
# ---------------------------------------------------------------------------

class Model(str, enum.Enum):
    """Which diagonal the cylinder calculus runs on."""

    TORIC = "toric_diagonal"
    STANDARD = "standard_diagonal"


def model_window(model: Model, patch: Patch) -> Tuple[Hashable, ...]:
    """Keys of *model* over *patch*: interior sites or edges."""
    if model is Model.TORIC:
        return patch.interior_sites()
    return patch.sorted_edges


def _pattern_for(model: Model, keys: Sequence[Hashable], mask: int) -> Pattern:
    target = {k: -1 if (mask >> i) & 1 else 1 for i, k in enumerate(keys)}
    if model is Model.TORIC:
        return boundary(solve_boundary(keys, target))
    return EdgeFlip(frozenset(k for k, s in target.items() if s == -1))


def reduce_to_unit_cylinder(
    q: CylinderFunction, model: Model
) -> Tuple[CylinderFunction, Tuple[Tuple[Pattern, CylinderFunction], ...]]:
    """Push the values of *q* onto the all-``+1`` cylinder over its keys.

    One step per key ``k_j``: with ``h`` the part of the current table
    where ``k_j = -1`` and ``b`` a pattern of *model* flipping exactly
    ``k_j`` among the keys, the table becomes ``current - h + h∘α_b``.

    Returns:
        The remainder ``r`` and the steps ``(b, h)``, with
        ``q = r + Σ (h - act(b, h))``.  If every pattern moves its key,
        ``r`` is zero off the all-``+1`` entry and that entry is
        ``measure(q)·2^{|K|}``.
    """
    keys = q.keys
    idx = np.arange(q.table.size, dtype=np.int64)
    table = q.table.copy()
    steps = []
    for j in range(len(keys)):
        h = CylinderFunction(keys, np.where((idx >> j) & 1 == 1, table, 0))
        b = _pattern_for(model, keys, 1 << j)
        table = table - h.table + act(b, h).table
        steps.append((b, h))
    return CylinderFunction(keys, table), tuple(steps)


def same_class(q1: CylinderFunction, q2: CylinderFunction, model: Model) -> bool:
    """Whether ``q1 - q2`` is a sum of commutators ``h - h∘α_b``.

    Decided constructively through :func:`reduce_to_unit_cylinder` over
    the union of the key sets: the classes agree iff nothing remains.
    """
    union = tuple(sorted(set(q1.keys) | set(q2.keys), key=site_key))
    diff = CylinderFunction(union, q1.refine_to(union).table - q2.refine_to(union).table)
    remainder, _ = reduce_to_unit_cylinder(diff, model)
    return not remainder.table.any()


@dataclass(frozen=True)
class InvariantReport:
    """Sampled evidence that ``φ`` realizes ``(ℤ[½], ℤ₊[½], 1)``.

    Attributes:
        model: Which diagonal was sampled.
        keys: Size of the key window the functions live on.
        samples: Number of random cylinder functions.
        class_consistent: ``measure(q) = a·2^{-|K|}`` for ``(a, K) =
            class_reduce(q)``, matching the remainder of
            :func:`reduce_to_unit_cylinder`, and invariant under
            refinement and the action.
        image_ok: Every measured value has denominator at most
            ``2**keys`` and every such dyadic is realized.
        positive_ok: Non-negative functions have non-negative measure.
        injective_ok: Two functions are in the same class exactly when
            their measures agree, the class decided by
            :func:`same_class`.
        unit_ok: The constant 1 maps to 1.
        exponents: Every ``j`` for which odd multiples of ``2^{-j}``
            were realized by cylinder indicators.
        image: Distinct measured values of the samples, sorted.
    """

    model: Model
    keys: int
    samples: int
    class_consistent: bool
    image_ok: bool
    positive_ok: bool
    injective_ok: bool
    unit_ok: bool
    exponents: Tuple[int, ...] = ()
    image: Tuple[Dyadic, ...] = ()

    @property
    def holds(self) -> bool:
        return (self.class_consistent and self.image_ok and self.positive_ok
                and self.injective_ok and self.unit_ok)

    def triple_data(self) -> Tuple:
        """Summary independent of the model and of the sampled tables.

        Equivalent diagonals give equal summaries for the same key
        window size, whatever their random streams.
        """
        return (
            self.keys,
            self.exponents,
            self.class_consistent,
            self.image_ok,
            self.positive_ok,
            self.injective_ok,
            self.unit_ok,
        )


def _random_function(
    keys: Sequence[Hashable], rng: random.Random
) -> Tuple[CylinderFunction, int]:
    m = rng.randint(0, len(keys))
    chosen = sorted(rng.sample(range(len(keys)), m))
    table = np.random.default_rng(rng.getrandbits(64)).integers(-3, 4, size=1 << m)
    if rng.random() < 0.5:
        table = np.abs(table)
    return CylinderFunction([keys[i] for i in chosen], table), rng.getrandbits(len(keys))


def invariant_triple(
    model: Model,
    window: Sequence[Hashable],
    samples: int,
    rng: random.Random,
    max_keys: int = 12,
) -> InvariantReport:
    """Sample cylinder functions and check ``φ`` is an injective order
    homomorphism onto the dyadics, sending 1 to 1.

    Functions are drawn over the first ``min(|window|, max_keys)``
    keys in canonical order.  Each sample is compared with its image
    under a random pattern (same class) and with the previous sample
    (same class iff equal measure).
    """
    k = min(len(window), max_keys, MAX_KEYS)
    keys = tuple(sorted(window, key=site_key))[:k]

    class_ok = image_ok = positive_ok = injective_ok = True
    image = set()
    previous: Optional[CylinderFunction] = None
    for _ in range(samples):
        q, mask = _random_function(keys, rng)
        coeff, rep = class_reduce(q)
        value = measure(q)
        image.add(value)

        refined = q.refine_to(keys)
        moved = act(_pattern_for(model, keys, mask), refined)
        remainder, _ = reduce_to_unit_cylinder(q, model)
        class_ok &= value == Dyadic(coeff, len(rep.keys))
        class_ok &= value == Dyadic(int(remainder.table[0]), len(remainder.keys))
        class_ok &= not remainder.table[1:].any()
        class_ok &= measure(refined) == value and measure(moved) == value
        class_ok &= same_class(refined, moved, model)

        image_ok &= value.exponent <= k
        positive_ok &= (not q.is_nonnegative) or value.is_nonnegative

        if previous is not None:
            injective_ok &= same_class(q, previous, model) == (measure(previous) == value)
        previous = q

    exponents = []
    for j in range(k + 1):
        a = 2 * rng.randint(-8, 8) + 1
        cyl = CylinderSet.canonical(keys[:j])
        if measure(CylinderFunction.indicator(cyl).scalar_multiply(a)) == Dyadic(a, j):
            exponents.append(j)
    image_ok &= exponents == list(range(k + 1))

    one = CylinderFunction.constant(1)
    unit_ok = measure(one) == Dyadic(1) and class_reduce(one) == (1, CylinderSet())

    report = InvariantReport(
        model=model,
        keys=k,
        samples=samples,
        class_consistent=bool(class_ok),
        image_ok=bool(image_ok),
        positive_ok=bool(positive_ok),
        injective_ok=bool(injective_ok),
        unit_ok=bool(unit_ok),
        exponents=tuple(exponents),
        image=tuple(sorted(image)),
    )
    logger.debug("Invariant triple for %s: %s", model.value, report.holds)
    return report
