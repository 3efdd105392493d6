"""The toric code model: stabilizers, signed projector nets and LTQO.

A configuration ``f`` assigns a sign to every site; the signed net
element over a patch ``Λ`` is the projector
``P_Λ(f) = ∏_{w interior} ½(1 + f(w)·S_w)``, represented symbolically
by the :class:`~toric_diagonal.pauli.SignedStabilizerGroup` of its
signed generators.  Every question about ``P_Λ(f)·X·P_Λ(f)`` reduces
to commutation and membership tests against that group.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from toric_diagonal.lattice import (
    Face,
    LatticePath,
    Patch,
    Routing,
    Site,
    Vertex,
    box_patch,
    boundary_dual_path,
    closure_patch,
    face_edges,
    l_path,
    rectangle_patch,
    site_key,
    star_edges,
    straight_path,
)
from toric_diagonal.pauli import (
    ONE,
    GaussianRational,
    Infeasible,
    Member,
    Phase,
    PauliOperator,
    PauliSum,
    SignedStabilizerGroup,
    Solution,
    conjugate,
    product,
    ribbon_x,
    ribbon_z,
    solve_syndrome,
    syndrome,
)

logger = logging.getLogger(__name__)

#: Default number of rings the LTQO growth may add before giving up.
DEFAULT_GROWTH_CAP = 10


class GrowthCapExceeded(RuntimeError):
    """Box growth reached its ring cap with unresolved terms."""


def star(v: Vertex) -> PauliOperator:
    """``A_v``: ``σ^x`` on the four edges incident to *v*."""
    return PauliOperator(x_support=star_edges(v))


def face(f: Face) -> PauliOperator:
    """``B_f``: ``σ^z`` on the four boundary edges of *f*."""
    return PauliOperator(z_support=face_edges(f))


def stabilizer(w: Site) -> PauliOperator:
    """``S_w``: the star of a vertex or the face operator of a face."""
    if isinstance(w, Vertex):
        return star(w)
    if isinstance(w, Face):
        return face(w)
    raise ValueError(f"Not a lattice site: {w!r}")


# ---------------------------------------------------------------------------
# Configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Configuration:
    """A point ``f`` of ``Ω = {-1, 1}^W`` given by finite data.

    Attributes:
        entries: ``(site, sign)`` pairs on the window, sorted by site.
        default: Sign of every site outside the window, or ``None``
            when the configuration is only defined on its window.
    """

    entries: Tuple[Tuple[Site, int], ...] = ()
    default: Optional[int] = None

    def __post_init__(self) -> None:
        entries = tuple(sorted(self.entries, key=lambda kv: site_key(kv[0])))
        seen = set()
        for site, sign in entries:
            if sign not in (1, -1):
                raise ValueError(f"Sign at {site} must be +1 or -1, got {sign}")
            if site in seen:
                raise ValueError(f"Site {site} assigned twice")
            seen.add(site)
        if self.default not in (None, 1, -1):
            raise ValueError(f"Default sign must be +1, -1 or None, got {self.default}")
        if self.default is not None:
            # entries equal to the default are implied
            entries = tuple((w, s) for w, s in entries if s != self.default)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_mapping(
        cls, values: Mapping[Site, int], default: Optional[int] = None
    ) -> "Configuration":
        return cls(tuple(values.items()), default)

    @classmethod
    def uniform(cls, sites: Iterable[Site], sign: int = 1) -> "Configuration":
        """Constant *sign* on *sites*, undefined elsewhere."""
        return cls(tuple((w, sign) for w in sites))

    @classmethod
    def constant(cls, sign: int = 1) -> "Configuration":
        """Constant *sign* on every site of the lattice."""
        return cls((), sign)

    @cached_property
    def _values(self) -> Dict[Site, int]:
        return dict(self.entries)

    @property
    def window(self) -> FrozenSet[Site]:
        return frozenset(self._values)

    def covers(self, sites: Iterable[Site]) -> bool:
        return self.default is not None or all(w in self._values for w in sites)

    def value(self, w: Site) -> int:
        """``f(w)``.

        Raises:
            ValueError: If *w* is outside the window and there is no
                default.
        """
        sign = self._values.get(w, self.default)
        if sign is None:
            raise ValueError(f"Configuration has no value at {w}")
        return sign

    @property
    def flips(self) -> Tuple[Site, ...]:
        """Window sites carrying ``-1``."""
        return tuple(w for w, s in self.entries if s == -1)

    def restrict(self, sites: Iterable[Site]) -> "Configuration":
        """The configuration on *sites* only, without default."""
        return Configuration(tuple((w, self.value(w)) for w in set(sites)))

    def with_flips(self, sites: Iterable[Site]) -> "Configuration":
        """Flip the sign at each of *sites* (windowing them if needed)."""
        values = dict(self._values)
        for w in sites:
            values[w] = -self.value(w)
        return Configuration(tuple(values.items()), self.default)

    def agrees_with(self, other: "Configuration", sites: Iterable[Site]) -> bool:
        return all(self.value(w) == other.value(w) for w in sites)


# ---------------------------------------------------------------------------
# Projector nets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectorNetElement:
    """``P_Λ(f)`` as the group generated by ``f(w)·S_w``, ``w`` interior."""

    patch: Patch
    config: Configuration
    group: SignedStabilizerGroup = field(compare=False, repr=False)

    @property
    def sites(self) -> Tuple[Site, ...]:
        return self.group.labels

    @property
    def rank(self) -> int:
        return len(self.group)


def projector_net(patch: Patch, f: Configuration) -> ProjectorNetElement:
    """Build the signed net element over *patch*.

    Raises:
        ValueError: If *f* has no value at some interior site.
    """
    sites = patch.interior_sites()
    generators = [
        stabilizer(w).with_phase(Phase.from_sign(f.value(w))) for w in sites
    ]
    return ProjectorNetElement(
        patch, f, SignedStabilizerGroup(generators, labels=sites)
    )


def ff_monotone(e1: ProjectorNetElement, e2: ProjectorNetElement) -> bool:
    """Symbolic witness of ``P_{Λ1}(f) ≤ P_{Λ2}(f)`` for ``Λ2 ⊆ Λ1``.

    Every signed generator of *e2* must be a ``Member(+1)`` of *e1*'s
    group, so that ``P_{Λ1}`` is absorbed by each factor of ``P_{Λ2}``.

    Raises:
        ValueError: If ``Λ2 ⊄ Λ1`` or the configurations disagree on a
            site interior to both patches.
    """
    if not e2.patch.issubset(e1.patch):
        raise ValueError("Second patch is not contained in the first")
    shared = set(e1.sites) & set(e2.sites)
    for w in sorted(shared, key=site_key):
        if e1.config.value(w) != e2.config.value(w):
            raise ValueError(f"Configurations disagree at {w}")
    for g in e2.group.generators:
        result = e1.group.membership(g)
        if not isinstance(result, Member) or result.sign != ONE:
            return False
    return True


@dataclass(frozen=True)
class Zero:
    """``P·p·P = 0``."""


@dataclass(frozen=True)
class Scalar:
    """``P·p·P = sign·P``."""

    sign: Phase


@dataclass(frozen=True)
class Residual:
    """``p`` commutes with the net but is not a multiple of a group element."""


CompressionResult = Union[Zero, Scalar, Residual]


def compress(p: PauliOperator, e: ProjectorNetElement) -> CompressionResult:
    """Classify ``P_Λ(f)·p·P_Λ(f)``.

    If ``∏ g_i = s·p`` then ``p = s⁻¹·∏ g_i`` and each ``g_i`` is
    absorbed by the projector, leaving ``s⁻¹·P_Λ(f)``.
    """
    if e.group.anticommuting(p):
        return Zero()
    result = e.group.membership(p)
    if isinstance(result, Member):
        return Scalar(result.sign.inverse())
    return Residual()


# ---------------------------------------------------------------------------
# Box growth and LTQO certificates
# ---------------------------------------------------------------------------

def _start_rectangle(
    support: Iterable, patch: Optional[Patch]
) -> Tuple[int, int, int, int]:
    edges = set(support)
    if patch is not None:
        edges |= patch.edges
    if not edges:
        return 0, 0, 0, 0
    return Patch(frozenset(edges)).bounding_box()


def growth_sequence(
    support: Iterable, patch: Optional[Patch] = None, cap: int = DEFAULT_GROWTH_CAP
) -> Iterable[Tuple[int, Patch]]:
    """``(rings, Δ)`` for concentric rectangles around the support.

    Ring 0 is the bounding rectangle of the support (and *patch*);
    each further ring inflates it by one lattice step on every side.
    """
    xmin, xmax, ymin, ymax = _start_rectangle(support, patch)
    for k in range(cap + 1):
        yield k, rectangle_patch(xmin - k, xmax + k, ymin - k, ymax + k)


@dataclass(frozen=True)
class LtqoCertificate:
    """A box ``Δ`` on which every term of a Pauli sum is resolved.

    Attributes:
        delta: The certifying box.
        rings: Number of growth rings added to the starting rectangle.
        terms: ``(operator, coefficient, classification)`` per term.
    """

    delta: Patch
    rings: int
    terms: Tuple[Tuple[PauliOperator, GaussianRational, CompressionResult], ...]

    def value(self) -> GaussianRational:
        """``ω_Δ(X)``: the scalar with ``P_Δ X P_Δ = ω_Δ(X)·P_Δ``."""
        total = GaussianRational()
        for _, coeff, result in self.terms:
            if isinstance(result, Scalar):
                total = total + coeff * result.sign
        return total


def _cap_error(what: object, delta: Patch, unresolved: int, cap: int) -> GrowthCapExceeded:
    return GrowthCapExceeded(
        f"No certificate for {what} after {cap} rings "
        f"(last box {delta.bounding_box() if delta.edges else 'empty'}, "
        f"{unresolved} unresolved terms)"
    )


def ltqo_radius(
    x: PauliSum,
    f: Configuration,
    patch: Optional[Patch] = None,
    cap: int = DEFAULT_GROWTH_CAP,
) -> LtqoCertificate:
    """Smallest box in the growth sequence resolving every term of *x*.

    Args:
        x: Local observable.
        f: Configuration with a default sign (or a window covering the
            largest box tried).
        patch: Optional patch ``Λ`` the box must contain.
        cap: Maximum number of rings.

    Raises:
        GrowthCapExceeded: If some term stays :class:`Residual`.
    """
    delta = Patch()
    unresolved = len(x)
    for k, delta in growth_sequence(x.support, patch, cap):
        element = projector_net(delta, f)
        classified = tuple(
            (op, coeff, compress(op, element)) for op, coeff in x
        )
        unresolved = sum(isinstance(r, Residual) for _, _, r in classified)
        logger.debug("LTQO ring %d: %d generators, %d unresolved",
                     k, element.rank, unresolved)
        if not unresolved:
            return LtqoCertificate(delta, k, classified)
    raise _cap_error("Pauli sum", delta, unresolved, cap)


def omega_f(
    p: PauliOperator, f: Configuration, cap: int = DEFAULT_GROWTH_CAP
) -> GaussianRational:
    """The pure-state value ``ω_f(p)``: 0 for Zero, the scalar for Scalar."""
    return ltqo_radius(PauliSum.of(p), f, cap=cap).value()


# ---------------------------------------------------------------------------
# Conditional expectation
# ---------------------------------------------------------------------------

Monomial = FrozenSet[Site]


def _monomial_key(m: Monomial) -> Tuple:
    return tuple(site_key(w) for w in sorted(m, key=site_key))


@dataclass(frozen=True)
class StabilizerPolynomial:
    """An exact polynomial in the commuting involutions ``S_w``.

    A monomial is the set of sites whose stabilizers it multiplies;
    ``S_w² = 1`` makes products symmetric differences.
    """

    terms: Tuple[Tuple[Monomial, GaussianRational], ...] = ()

    @classmethod
    def from_terms(
        cls, terms: Iterable[Tuple[Iterable[Site], object]]
    ) -> "StabilizerPolynomial":
        acc: Dict[Monomial, GaussianRational] = {}
        for sites, coeff in terms:
            m = frozenset(sites)
            acc[m] = acc.get(m, GaussianRational()) + GaussianRational.coerce(coeff)
        ordered = sorted(
            ((m, c) for m, c in acc.items() if not c.is_zero),
            key=lambda t: _monomial_key(t[0]),
        )
        return cls(tuple(ordered))

    @classmethod
    def constant(cls, coeff: object) -> "StabilizerPolynomial":
        return cls.from_terms([((), coeff)])

    @classmethod
    def monomial(cls, sites: Iterable[Site], coeff: object = 1) -> "StabilizerPolynomial":
        return cls.from_terms([(sites, coeff)])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "StabilizerPolynomial") -> "StabilizerPolynomial":
        return StabilizerPolynomial.from_terms(self.terms + other.terms)

    def __neg__(self) -> "StabilizerPolynomial":
        return StabilizerPolynomial(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "StabilizerPolynomial") -> "StabilizerPolynomial":
        return self + (-other)

    def __mul__(self, other: object) -> "StabilizerPolynomial":
        if isinstance(other, StabilizerPolynomial):
            return StabilizerPolynomial.from_terms(
                (m1 ^ m2, c1 * c2)
                for m1, c1 in self.terms
                for m2, c2 in other.terms
            )
        scale = GaussianRational.coerce(other)
        return StabilizerPolynomial.from_terms((m, c * scale) for m, c in self.terms)

    __rmul__ = __mul__

    def evaluate(self, f: Configuration) -> GaussianRational:
        """The value at *f*, substituting ``S_w ↦ f(w)``."""
        total = GaussianRational()
        for m, c in self.terms:
            sign = 1
            for w in m:
                sign *= f.value(w)
            total = total + c * sign
        return total

    def to_pauli_sum(self) -> PauliSum:
        return PauliSum.from_terms(
            (c, product(stabilizer(w) for w in sorted(m, key=site_key)))
            for m, c in self.terms
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            mono = "·".join(f"S{w}" for w in sorted(m, key=site_key))
            parts.append(f"({c})·{mono}" if mono else f"({c})")
        return " + ".join(parts)


def _expect_term(p: PauliOperator, cap: int) -> Tuple[Monomial, Optional[Phase]]:
    """``(sites, s)`` with ``p = s·∏ S_w``; ``s`` is ``None`` when ``E(p) = 0``."""
    unsigned = Configuration.constant(1)
    delta = Patch()
    for _, delta in growth_sequence(p.support, None, cap):
        element = projector_net(delta, unsigned)
        if element.group.anticommuting(p):
            return frozenset(), None
        result = element.group.membership(p)
        if isinstance(result, Member):
            return frozenset(element.sites[i] for i in result.witness), result.sign.inverse()
    raise _cap_error(p, delta, 1, cap)


def conditional_expectation(
    x: PauliSum, cap: int = DEFAULT_GROWTH_CAP
) -> StabilizerPolynomial:
    """``E(x)``: each term decomposed over the unsigned stabilizers.

    Terms anticommuting with some ``S_w`` contribute zero; the others
    are ``s·∏ S_{w_i}`` on a large enough box.

    Raises:
        GrowthCapExceeded: If a term is never decomposed.
    """
    pieces = []
    for op, coeff in x:
        sites, sign = _expect_term(op, cap)
        if sign is not None:
            pieces.append((sites, coeff * sign))
    return StabilizerPolynomial.from_terms(pieces)


# ---------------------------------------------------------------------------
# Symmetries
# ---------------------------------------------------------------------------

def symmetry_ribbon(w: Site, n: int) -> PauliOperator:
    """Truncated ribbon along ``straight_path(w, n)``."""
    path = straight_path(w, n)
    return ribbon_z(path) if isinstance(w, Vertex) else ribbon_x(path)


def truncated_symmetry(w: Site, n: int, p: PauliOperator) -> PauliOperator:
    """``α_w`` at truncation *n*: conjugation by the ribbon from *w*."""
    return conjugate(symmetry_ribbon(w, n), p)


def transport_symmetry(delta: Patch, f: Configuration) -> PauliOperator:
    """Product of truncated symmetries over the flipped interior sites.

    Each ribbon is long enough that its far end leaves ``Δ``, so
    conjugation flips exactly the flipped sites' stabilizers inside
    ``Δ`` and maps the net of ``f`` onto the unsigned one.
    """
    if not delta.edges:
        return PauliOperator.identity()
    _, xmax, _, _ = delta.bounding_box()
    ribbons = [
        symmetry_ribbon(w, xmax - w.x + 2)
        for w in delta.interior_sites()
        if f.value(w) == -1
    ]
    return product(ribbons)


def transport_maps_generators(delta: Patch, f: Configuration) -> bool:
    """Whether the transport carries ``f(w)·S_w`` to ``S_w`` for every
    interior site ``w`` of ``Δ``."""
    u = transport_symmetry(delta, f)
    signed = projector_net(delta, f)
    unsigned = projector_net(delta, Configuration.constant(1))
    return all(
        conjugate(u, g) == h
        for g, h in zip(signed.group.generators, unsigned.group.generators)
    )


def transported_compression_agrees(
    p: PauliOperator, delta: Patch, f: Configuration
) -> bool:
    """Check ``P_Δ(f) p P_Δ(f)`` against the transported unsigned compression.

    With ``U`` the transport symmetry, ``P_Δ(f) = U P_Δ(1) U`` so both
    sides must carry the same classification and scalar.
    """
    u = transport_symmetry(delta, f)
    direct = compress(p, projector_net(delta, f))
    moved = compress(conjugate(u, p), projector_net(delta, Configuration.constant(1)))
    return direct == moved


# ---------------------------------------------------------------------------
# Excitations
# ---------------------------------------------------------------------------

def excitation_operator(
    v_pairs: Sequence[Tuple[Vertex, Vertex]],
    f_pairs: Sequence[Tuple[Face, Face]],
    routing: Routing = Routing.HORIZONTAL_FIRST,
) -> PauliOperator:
    """Ribbon product creating excitations at the listed sites.

    Each pair is routed with an L-shaped path from its smaller to its
    larger endpoint; vertex pairs get ``F^z`` ribbons and face pairs
    ``F^x`` ribbons.

    Raises:
        ValueError: If a site is listed twice or a pair mixes types.
    """
    listed: List[Site] = [w for pair in (*v_pairs, *f_pairs) for w in pair]
    if len(set(listed)) != len(listed):
        raise ValueError("Excitation sites must be distinct")
    for a, b in v_pairs:
        if not (isinstance(a, Vertex) and isinstance(b, Vertex)):
            raise ValueError(f"Vertex pair expected, got ({a}, {b})")
    for a, b in f_pairs:
        if not (isinstance(a, Face) and isinstance(b, Face)):
            raise ValueError(f"Face pair expected, got ({a}, {b})")

    ribbons: List[PauliOperator] = []
    for a, b in v_pairs:
        lo, hi = sorted((a, b), key=site_key)
        ribbons.append(ribbon_z(l_path(lo, hi, routing)))
    for a, b in f_pairs:
        lo, hi = sorted((a, b), key=site_key)
        ribbons.append(ribbon_x(l_path(lo, hi, routing)))
    return product(ribbons)


# ---------------------------------------------------------------------------
# No-lift obstruction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoLiftReport:
    """Exact facts behind the absence of a local single-star flip.

    Attributes:
        n: Box size.
        star_count: Stars interior to the closed box.
        ribbon_steps: Steps of the surrounding dual ribbon.
        product_is_ribbon: The product of those stars equals the ribbon.
        single_flip_infeasible: No Pauli on the box flips only the
            central star among all box vertices.
        pair_feasible: Flipping the center and its right neighbour is
            solvable on the box.
        pair_ribbon_ok: The unit ribbon between them realizes that
            target exactly.
    """

    n: int
    star_count: int
    ribbon_steps: int
    product_is_ribbon: bool
    single_flip_infeasible: bool
    pair_feasible: bool
    pair_ribbon_ok: bool

    @property
    def holds(self) -> bool:
        return (
            self.product_is_ribbon
            and self.single_flip_infeasible
            and self.pair_feasible
            and self.pair_ribbon_ok
        )


def no_lift_certificate(n: int, center: Vertex = Vertex(0, 0)) -> NoLiftReport:
    """Verify the star-product identity and the single-flip infeasibility.

    Raises:
        ValueError: If ``n < 1``.
    """
    box = box_patch(center, n)
    ring: LatticePath = boundary_dual_path(box)
    stars = closure_patch(box).interior_vertices()
    star_product = product(star(v) for v in stars)

    vertices = sorted(box.vertices(), key=site_key)
    single = {v: int(v == center) for v in vertices}
    neighbour = Vertex(center.x + 1, center.y)
    pair = {v: int(v in (center, neighbour)) for v in vertices}

    pair_solution = solve_syndrome(pair, box)
    witness = ribbon_z(straight_path(center, 1))
    report = NoLiftReport(
        n=n,
        star_count=len(stars),
        ribbon_steps=len(ring),
        product_is_ribbon=star_product == ribbon_x(ring),
        single_flip_infeasible=isinstance(solve_syndrome(single, box), Infeasible),
        pair_feasible=isinstance(pair_solution, Solution)
        and syndrome(pair_solution.operator, vertices) == tuple(pair[v] for v in vertices),
        pair_ribbon_ok=syndrome(witness, vertices) == tuple(pair[v] for v in vertices),
    )
    logger.debug("No-lift n=%d: %s", n, report)
    return report
