"""Claim checks, grouped into the suites the runner executes.

Every check is registered under a stable ``claim_id`` of the form
``"<suite>.<name>"`` together with the formula it realizes.  A check
receives a :class:`CheckContext` (configuration, a private RNG stream
derived from the seed and the claim id, and its scaled sample count)
and returns an :class:`Outcome`.  Nothing here measures time or
catches errors; see :mod:`toric_diagonal.runner`.

Usage::

    from toric_diagonal.suites import checks_for, CheckContext

    for check in checks_for("algebra", config):
        outcome = check.run(CheckContext.for_claim(config, check.claim_id))
"""

import dataclasses
import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np

from toric_diagonal.bitmatrix import EchelonBasis, pack
from toric_diagonal.config import VerificationConfig
from toric_diagonal.cylinder import (
    CylinderFunction,
    CylinderSet,
    Dyadic,
    MAX_KEYS,
    measure,
)
from toric_diagonal.groupoid import (
    GammaElement,
    Model,
    act,
    boundary,
    class_reduce,
    conjugation_signs,
    exchange_element,
    freeness_check,
    generated_subgroup,
    invariant_triple,
    model_window,
    orbit_reach,
    ribbon_to_gamma,
    word_operator,
)
from toric_diagonal.lattice import (
    Edge,
    Face,
    LatticePath,
    Patch,
    Routing,
    Site,
    Vertex,
    box_patch,
    h_edge,
    l_path,
    path_through,
    rectangle_patch,
    site_key,
    star_edges,
)
from toric_diagonal.models import SUITES
from toric_diagonal.oracle import (
    dense,
    dense_commutes,
    dense_compress,
    dense_hamiltonian,
    dense_membership,
    dense_projector,
)
from toric_diagonal.pauli import (
    MINUS_ONE,
    ONE,
    GaussianRational,
    Member,
    Phase,
    PauliOperator,
    PauliSum,
    SignedStabilizerGroup,
    commutes,
    conjugate,
    multiply,
    product,
    ribbon_x,
    ribbon_z,
    sigma_x,
    sigma_y,
    sigma_z,
    syndrome,
    syndrome_sites,
)
from toric_diagonal.toric import (
    Configuration,
    StabilizerPolynomial,
    Zero,
    compress,
    conditional_expectation,
    excitation_operator,
    face,
    ff_monotone,
    ltqo_radius,
    no_lift_certificate,
    omega_f,
    projector_net,
    stabilizer,
    star,
    transport_maps_generators,
    transported_compression_agrees,
    truncated_symmetry,
)

logger = logging.getLogger(__name__)

ORIGIN = Vertex(0, 0)

#: Formula realized by every ``no-lift.box-<n>`` case.
NO_LIFT_ANCHOR = "∏ A_u over the closed box = F^x of the surrounding dual ribbon"


@dataclass(frozen=True)
class Outcome:
    """What a check found.

    Attributes:
        ok: Whether the claim held on every sample.
        parameters: Sizes and counts the check ran with.
        witness: Evidence on success, a counterexample on failure,
            or the reason for skipping.
        skipped: The check could not run under the configuration.
    """

    ok: bool
    parameters: Dict[str, Any] = field(default_factory=dict)
    witness: Dict[str, Any] = field(default_factory=dict)
    skipped: bool = False


def _skip(reason: str, parameters: Dict[str, Any]) -> Outcome:
    return Outcome(False, parameters, {"reason": reason}, skipped=True)


def _fail(parameters: Dict[str, Any], **counterexample: Any) -> Outcome:
    return Outcome(False, parameters, {"counterexample": counterexample})


@dataclass
class CheckContext:
    """Per-check state handed to a check function."""

    config: VerificationConfig
    claim_id: str
    rng: random.Random
    samples: int

    @classmethod
    def for_claim(cls, config: VerificationConfig, claim_id: str) -> "CheckContext":
        """A context whose RNG depends only on the seed and *claim_id*."""
        return cls(
            config=config,
            claim_id=claim_id,
            rng=random.Random(f"{config.seed}:{claim_id}"),
            samples=config.samples_for(claim_id),
        )

    @property
    def cap(self) -> int:
        return self.config.growth_cap

    def oracle_fits(self, patch: Patch) -> bool:
        return len(patch) <= self.config.oracle_max_edges


@dataclass(frozen=True)
class Check:
    """A registered claim check."""

    claim_id: str
    anchor: str
    run: Callable[[CheckContext], Outcome] = field(compare=False)

    @property
    def suite(self) -> str:
        return self.claim_id.split(".", 1)[0]


_REGISTRY: Dict[str, List[Check]] = {name: [] for name in SUITES}


def check(claim_id: str, anchor: str) -> Callable:
    """Register the decorated function as the check for *claim_id*."""
    suite = claim_id.split(".", 1)[0]
    if suite not in _REGISTRY:
        raise ValueError(f"Unknown suite in claim id {claim_id!r}")

    def decorator(func: Callable[[CheckContext], Outcome]) -> Callable:
        _REGISTRY[suite].append(Check(claim_id, anchor, func))
        return func

    return decorator


def checks_for(suite: str, config: VerificationConfig) -> List[Check]:
    """The checks of one suite, sorted by claim id.

    The no-lift suite has one case per box size of
    ``config.no_lift_range``.

    Raises:
        ValueError: On an unknown suite name.
    """
    if suite not in _REGISTRY:
        raise ValueError(
            f"Unknown suite {suite!r}; expected one of {', '.join(SUITES)}"
        )
    if suite == "no-lift":
        lo, hi = config.no_lift_range
        found = [
            Check(f"no-lift.box-{n}", NO_LIFT_ANCHOR, partial(_no_lift_case, n))
            for n in range(lo, hi + 1)
        ]
    else:
        found = list(_REGISTRY[suite])
    logger.debug("Suite %s: %d checks", suite, len(found))
    return sorted(found, key=lambda c: c.claim_id)


# ---------------------------------------------------------------------------
# Random inputs
# ---------------------------------------------------------------------------

def _window_sites(lo: int, hi: int) -> Tuple[Site, ...]:
    """Every vertex and face with both coordinates in ``[lo, hi]``."""
    vertices = tuple(Vertex(x, y) for x in range(lo, hi + 1) for y in range(lo, hi + 1))
    return vertices + tuple(Face(v) for v in vertices)


def _random_site(rng: random.Random, kind: type, lo: int, hi: int) -> Site:
    v = Vertex(rng.randint(lo, hi), rng.randint(lo, hi))
    return v if kind is Vertex else Face(v)


def _random_pair(rng: random.Random, kind: type, lo: int, hi: int) -> Tuple[Site, Site]:
    a = _random_site(rng, kind, lo, hi)
    b = a
    while b == a:
        b = _random_site(rng, kind, lo, hi)
    return a, b


def _random_l_path(rng: random.Random, kind: type, lo: int, hi: int) -> LatticePath:
    a, b = _random_pair(rng, kind, lo, hi)
    return l_path(a, b, rng.choice(list(Routing)))


def _random_pauli(
    rng: random.Random, edges: Sequence[Edge], max_weight: int
) -> PauliOperator:
    chosen = rng.sample(list(edges), rng.randint(1, min(max_weight, len(edges))))
    xs, zs = set(), set()
    for e in chosen:
        letter = rng.choice("xyz")
        if letter in "xy":
            xs.add(e)
        if letter in "yz":
            zs.add(e)
    return PauliOperator(frozenset(xs), frozenset(zs), Phase(rng.randrange(4)))


def _random_config(
    rng: random.Random, sites: Sequence[Site], default=None
) -> Configuration:
    return Configuration.from_mapping(
        {w: rng.choice((1, -1)) for w in sites}, default
    )


def _random_gamma(rng: random.Random, edges: Sequence[Edge], size: int = 8) -> GammaElement:
    edges = list(edges)
    return GammaElement(
        frozenset(rng.sample(edges, rng.randint(0, size))),
        frozenset(rng.sample(edges, rng.randint(0, size))),
    )


def _single_paulis(patch: Patch) -> List[PauliOperator]:
    """``σ^x``, ``σ^y`` and ``σ^z`` on every edge of *patch*."""
    return [make(e) for e in patch.sorted_edges for make in (sigma_x, sigma_y, sigma_z)]


def _path_text(path: LatticePath) -> str:
    return " ".join(str(e) for e in path.edges)


def _rectangle_loop(a: int, b: int, c: int, d: int) -> LatticePath:
    """Closed direct path around ``[a, b] × [c, d]``, counterclockwise."""
    corners = (
        [Vertex(x, c) for x in range(a, b)]
        + [Vertex(b, y) for y in range(c, d)]
        + [Vertex(x, d) for x in range(b, a, -1)]
        + [Vertex(a, y) for y in range(d, c, -1)]
    )
    return path_through(corners + [corners[0]])


def _enclosing_patch(a: Site, b: Site) -> Patch:
    """Smallest rectangle whose net contains every stabilizer enclosed by
    two L-routes between *a* and *b*."""
    xmin, xmax = sorted((a.x, b.x))
    ymin, ymax = sorted((a.y, b.y))
    if isinstance(a, Vertex):
        return rectangle_patch(xmin, xmax, ymin, ymax)
    return rectangle_patch(xmin, xmax + 1, ymin, ymax + 1)


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

@check("algebra.ribbon-commutation",
       "F^z_ρ A_v = (−1)^{1_{∂ρ}(v)} A_v F^z_ρ, F^x_ρ̃ B_ṽ = (−1)^{1_{∂ρ̃}(ṽ)} B_ṽ F^x_ρ̃, "
       "F^z_ρ F^x_ρ̃ = (−1)^{|ρ ∩ ρ̃|} F^x_ρ̃ F^z_ρ")
def _ribbon_commutation(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    params = {"window": "8x8", "samples": ctx.samples}
    for _ in range(ctx.samples):
        rho = _random_l_path(rng, Vertex, 0, 7)
        dual = _random_l_path(rng, Face, 0, 6)
        # endpoints are hit often enough to exercise the sign flip
        v = (rng.choice(sorted(rho.endpoints)) if rng.random() < 1 / 3
             else _random_site(rng, Vertex, -1, 8))
        f = (rng.choice(sorted(dual.endpoints)) if rng.random() < 1 / 3
             else _random_site(rng, Face, -1, 8))
        fz, fx = ribbon_z(rho), ribbon_x(dual)
        crossings = len(set(rho.edges) & set(dual.edges))
        rules = {
            "Fz-star": commutes(fz, star(v)) == (v not in rho.endpoints),
            "Fz-face": commutes(fz, face(f)),
            "Fx-face": commutes(fx, face(f)) == (f not in dual.endpoints),
            "Fx-star": commutes(fx, star(v)),
            "Fz-Fx": multiply(fz, fx)
            == multiply(fx, fz).scaled(Phase(2 * (crossings % 2))),
        }
        broken = sorted(name for name, ok in rules.items() if not ok)
        if broken:
            return _fail(params, rules=broken, direct=_path_text(rho),
                         dual=_path_text(dual), vertex=str(v), face=str(f))
    return Outcome(True, params, {"relations_checked": 5 * ctx.samples})


@check("algebra.stabilizer-involution", "A_v^2 = B_ṽ^2 = 1, [A_v, B_ṽ] = 0")
def _stabilizer_involution(ctx: CheckContext) -> Outcome:
    sites = _window_sites(0, 5)
    ops = [stabilizer(w) for w in sites]
    params = {"window": "6x6", "operators": len(ops)}
    for w, op in zip(sites, ops):
        if not multiply(op, op).is_identity:
            return _fail(params, site=str(w), square=str(multiply(op, op)))
    for i, p in enumerate(ops):
        for j in range(i + 1, len(ops)):
            if not commutes(p, ops[j]):
                return _fail(params, sites=[str(sites[i]), str(sites[j])])
    return Outcome(True, params, {"pairs": len(ops) * (len(ops) - 1) // 2})


@check("algebra.syndrome-parity", "The spectrum of H is 2ℕ")
def _syndrome_parity(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    edges = rectangle_patch(0, 9, 0, 9).sorted_edges
    params = {"window": "10x10", "samples": ctx.samples, "max_weight": 12}
    largest = 0
    for _ in range(ctx.samples):
        p = _random_pauli(rng, edges, 12)
        vertices, faces = syndrome_sites(p)
        if len(vertices) % 2 or len(faces) % 2:
            return _fail(params, operator=str(p), stars=len(vertices), faces=len(faces))
        nearby = sorted(
            {v for e in p.support for v in e.endpoints}
            | {f for e in p.support for f in e.faces},
            key=site_key,
        )
        flagged = {w for w, bit in zip(nearby, syndrome(p, nearby)) if bit}
        if flagged != set(vertices) | set(faces):
            return _fail(params, operator=str(p), reason="site-wise syndrome differs")
        largest = max(largest, len(flagged))
    return Outcome(True, params, {"largest_syndrome": largest})


@check("algebra.membership-loops", "∏_{e ∈ ∂R} σ^z_e = ∏_{ṽ ∈ R} B_ṽ")
def _membership_loops(ctx: CheckContext) -> Outcome:
    n = ctx.config.box_size
    net = projector_net(box_patch(ORIGIN, n), Configuration.constant(1))
    index = {w: i for i, w in enumerate(net.sites)}
    params = {"box": n}
    loops = 0
    for a in range(-n, n + 1):
        for b in range(a + 1, n + 1):
            for c in range(-n, n + 1):
                for d in range(c + 1, n + 1):
                    expected = tuple(sorted(
                        index[Face(Vertex(x, y))]
                        for x in range(a, b) for y in range(c, d)
                    ))
                    loop = _rectangle_loop(a, b, c, d)
                    result = net.group.membership(ribbon_z(loop))
                    if result != Member(ONE, expected):
                        return _fail(params, loop=_path_text(loop), result=repr(result))
                    loops += 1
    return Outcome(True, params, {"loops": loops})


@check("algebra.echelon-order", "row space of the net is independent of generator order")
def _echelon_order(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    box = box_patch(ORIGIN, 2)
    net = projector_net(box, _random_config(rng, box.interior_sites()))
    reference = net.group.basis.row_space_key()
    params = {"box": 2, "shuffles": 5}
    for k in range(5):
        gens = list(net.group.generators)
        rng.shuffle(gens)
        if SignedStabilizerGroup(gens).basis.row_space_key() != reference:
            return _fail(params, shuffle=k)
    return Outcome(True, params, {"rank": net.group.rank})


@check("algebra.excitation-path-independence",
       "R(v_{2k}, ṽ_{2n−2k}) is independent of the paths up to stabilizers")
def _excitation_paths(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    params = {"window": "6x6", "samples": ctx.samples,
              "routings": [r.value for r in Routing]}
    unsigned = Configuration.constant(1)
    for _ in range(ctx.samples):
        va, vb = _random_pair(rng, Vertex, 0, 5)
        fa, fb = _random_pair(rng, Face, 0, 5)
        mixed = excitation_operator([(va, vb)], [(fa, fb)])
        if syndrome_sites(mixed) != (frozenset((va, vb)), frozenset((fa, fb))):
            return _fail(params, vertices=[str(va), str(vb)], faces=[str(fa), str(fb)],
                         reason="syndrome differs from the listed sites")
        for a, b, pairs in ((va, vb, ([(va, vb)], [])), (fa, fb, ([], [(fa, fb)]))):
            r = excitation_operator(*pairs, routing=Routing.HORIZONTAL_FIRST)
            r2 = excitation_operator(*pairs, routing=Routing.VERTICAL_FIRST)
            if syndrome_sites(r) != syndrome_sites(r2):
                return _fail(params, sites=[str(a), str(b)], reason="routings disagree")
            net = projector_net(_enclosing_patch(a, b), unsigned)
            result = net.group.membership(multiply(r, r2.adjoint()))
            if not (isinstance(result, Member) and result.sign == ONE):
                return _fail(params, sites=[str(a), str(b)], result=repr(result))
    return Outcome(True, params, {"pairs": 2 * ctx.samples})


# ---------------------------------------------------------------------------
# frustration-free
# ---------------------------------------------------------------------------

@check("frustration-free.monotone", "P_Λ ≤ P_Λ' for any pair Λ ⊇ Λ'")
def _ff_monotone(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    n = ctx.config.box_size
    boxes = [box_patch(ORIGIN, k) for k in range(1, n + 1)]
    sites = boxes[-1].interior_sites()
    pairs = [(j, i) for j in range(n) for i in range(j + 1)]
    params = {"largest_box": n, "configurations": ctx.samples, "pairs": len(pairs)}
    for _ in range(ctx.samples):
        f = _random_config(rng, sites)
        nets = [projector_net(b, f) for b in boxes]
        for j, i in pairs:
            if not ff_monotone(nets[j], nets[i]):
                return _fail(params, outer=j + 1, inner=i + 1,
                             flips=[str(w) for w in f.flips])
    return Outcome(True, params, {"comparisons": len(pairs) * ctx.samples})


@check("frustration-free.oracle-inequality", "P_Λ P_Λ' = P_Λ' P_Λ = P_Λ for Λ ⊇ Λ'")
def _ff_oracle(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    outer = box_patch(ORIGIN, 1)
    inner = rectangle_patch(-1, 1, -1, 0)
    params = {"outer_edges": len(outer), "inner_edges": len(inner),
              "configurations": ctx.samples}
    if not ctx.oracle_fits(outer):
        return _skip("patch exceeds oracle_max_edges", params)
    for _ in range(ctx.samples):
        f = _random_config(rng, outer.interior_sites())
        e1, e2 = projector_net(outer, f), projector_net(inner, f)
        p1, p2 = dense_projector(e1), dense_projector(e2, ambient=outer)
        symbolic = ff_monotone(e1, e2)
        if not (symbolic and p1 @ p2 == p1 and p2 @ p1 == p1):
            return _fail(params, symbolic=symbolic, flips=[str(w) for w in f.flips])
    return Outcome(True, params, {"inequalities": ctx.samples})


@check("frustration-free.ground-space", "P_Λ = ∏ ½(1 + f(w) S_w), Tr P_Λ = 2^{|Λ| − m}")
def _ground_space(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    box = box_patch(ORIGIN, 1)
    sites = box.interior_sites()
    configs = [Configuration.uniform(sites)] + [_random_config(rng, sites) for _ in range(3)]
    params = {"edges": len(box), "configurations": len(configs)}
    if not ctx.oracle_fits(box):
        return _skip("patch exceeds oracle_max_edges", params)
    for f in configs:
        e = projector_net(box, f)
        p = dense_projector(e)
        expected = GaussianRational(2 ** (len(box) - e.rank))
        if not p.is_projector or p.trace() != expected:
            return _fail(params, flips=[str(w) for w in f.flips], trace=str(p.trace()))
    return Outcome(True, params, {"ground_dimension": 2 ** (len(box) - len(sites))})


# ---------------------------------------------------------------------------
# ltqo
# ---------------------------------------------------------------------------

@check("ltqo.single-pauli", "P_Δ X P_Δ = ω_Δ(X) P_Δ")
def _ltqo_single(ctx: CheckContext) -> Outcome:
    """Certificates grown from box(1); those found on a box the oracle
    can expand are compared with the dense compression."""
    rng = ctx.rng
    box = box_patch(ORIGIN, 1)
    paulis = _single_paulis(box)
    window = box_patch(ORIGIN, ctx.config.box_size).interior_sites()
    params = {"operators": len(paulis), "configurations": ctx.samples,
              "max_rings": 3, "oracle_max_edges": ctx.config.oracle_max_edges}
    rings: Counter = Counter()
    kinds: Counter = Counter()
    oracle_cache: Dict[Tuple, Any] = {}
    dense_checked = 0
    for _ in range(ctx.samples):
        f = _random_config(rng, window, default=1)
        for p in paulis:
            cert = ltqo_radius(PauliSum.of(p), f, patch=box, cap=ctx.cap)
            if cert.rings > 3:
                return _fail(params, operator=str(p), rings=cert.rings)
            result = cert.terms[0][2]
            rings[cert.rings] += 1
            kinds["zero" if isinstance(result, Zero) else "scalar"] += 1
            if not ctx.oracle_fits(cert.delta):
                continue
            e = projector_net(cert.delta, f)
            key = (p, e.group.generators)
            if key not in oracle_cache:
                oracle_cache[key] = dense_compress(p, e)
            if not oracle_cache[key].agrees(result):
                return _fail(params, operator=str(p), rings=cert.rings,
                             symbolic=repr(result), flips=[str(w) for w in f.flips])
            dense_checked += 1
    return Outcome(True, params, {
        "rings": {str(k): v for k, v in sorted(rings.items())},
        "classifications": dict(sorted(kinds.items())),
        "dense_checked": dense_checked,
    })


@check("ltqo.oracle-agreement", "P_Δ X P_Δ = ω_Δ(X) P_Δ, checked densely")
def _ltqo_oracle(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    box = box_patch(ORIGIN, 1)
    paulis = _single_paulis(box)
    params = {"edges": len(box), "operators": len(paulis),
              "configurations": ctx.samples}
    if not ctx.oracle_fits(box):
        return _skip("patch exceeds oracle_max_edges", params)
    for _ in range(ctx.samples):
        e = projector_net(box, _random_config(rng, box.interior_sites()))
        for p in paulis:
            symbolic = compress(p, e)
            if not dense_compress(p, e).agrees(symbolic):
                return _fail(params, operator=str(p), symbolic=repr(symbolic),
                             flips=[str(w) for w in e.config.flips])
    return Outcome(True, params, {"compressions": len(paulis) * ctx.samples})


@check("ltqo.generators", "P_Δ S_w P_Δ = f(w) P_Δ for w interior to Δ")
def _ltqo_generators(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    sites = box_patch(ORIGIN, 2).interior_sites()
    params = {"sites": len(sites), "configurations": ctx.samples}
    for _ in range(ctx.samples):
        f = _random_config(rng, sites, default=1)
        for w in sites:
            cert = ltqo_radius(PauliSum.of(stabilizer(w)), f, cap=ctx.cap)
            if cert.rings != 0 or cert.value() != GaussianRational(f.value(w)):
                return _fail(params, site=str(w), rings=cert.rings, value=str(cert.value()))
    return Outcome(True, params, {"certificates": len(sites) * ctx.samples})


@check("ltqo.ribbon-zero", "ω_f(F_ρ) = 0 for an open ribbon")
def _ltqo_ribbon_zero(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    window = _window_sites(-2, 9)
    params = {"window": "8x8", "samples": ctx.samples}
    for k in range(ctx.samples):
        if k % 2:
            ribbon = ribbon_x(_random_l_path(rng, Face, 0, 6))
        else:
            ribbon = ribbon_z(_random_l_path(rng, Vertex, 0, 7))
        f = _random_config(rng, window, default=1)
        value = omega_f(ribbon, f, cap=ctx.cap)
        if not value.is_zero:
            return _fail(params, operator=str(ribbon), value=str(value))
    return Outcome(True, params, {"ribbons": ctx.samples})


# ---------------------------------------------------------------------------
# expectation
# ---------------------------------------------------------------------------

def expectation_test_set() -> List[PauliSum]:
    """Fifty observables on box(1): single Paulis on the central star,
    every product of the box's stabilizers and a few mixed sums."""
    box = box_patch(ORIGIN, 1)
    out = [PauliSum.of(p) for p in _single_paulis(Patch(star_edges(ORIGIN)))]
    sites = box.interior_sites()
    for mask in range(1 << len(sites)):
        chosen = [sites[i] for i in range(len(sites)) if (mask >> i) & 1]
        out.append(PauliSum.of(product(stabilizer(w) for w in chosen)))
    faces = [w for w in sites if isinstance(w, Face)]
    a0, e0 = star(ORIGIN), h_edge(0, 0)
    for fc in faces:
        out.append(PauliSum.scalar(3) + PauliSum.of(multiply(a0, face(fc))))
    half = Fraction(1, 2)
    out.append(PauliSum.scalar(half) + PauliSum.of(a0, half) + PauliSum.of(sigma_x(e0)))
    out.append(
        PauliSum.of(multiply(face(faces[0]), sigma_z(e0)), Phase(1))
        - PauliSum.of(multiply(face(faces[1]), face(faces[2])), 2)
    )
    return out


def _dense_value(x: PauliSum, e, cache: Dict[PauliOperator, Any]) -> Any:
    """``ω(x)`` from dense compressions, or ``None`` if some term is
    not a multiple of the projector."""
    total = GaussianRational()
    for op, coeff in x:
        if op not in cache:
            cache[op] = dense_compress(op, e)
        dc = cache[op]
        if dc.is_zero:
            continue
        if not dc.is_scalar:
            return None
        total = total + coeff * dc.scalar
    return total


@check("expectation.oracle-agreement", "E(a)(f) = ω̃_f(a)")
def _expectation_oracle(ctx: CheckContext) -> Outcome:
    box = box_patch(ORIGIN, 1)
    sites = list(box.interior_sites())
    observables = expectation_test_set()
    configs = [
        Configuration.from_mapping(
            {w: -1 if (mask >> i) & 1 else 1 for i, w in enumerate(sites)}
        )
        for mask in range(1 << len(sites))
    ]
    params = {"observables": len(observables), "configurations": len(configs)}
    if not ctx.oracle_fits(box):
        return _skip("patch exceeds oracle_max_edges", params)
    nets = [projector_net(box, f) for f in configs]
    caches: List[Dict[PauliOperator, Any]] = [{} for _ in configs]
    for k, x in enumerate(observables):
        poly = conditional_expectation(x, cap=ctx.cap)
        for f, e, cache in zip(configs, nets, caches):
            expected = _dense_value(x, e, cache)
            if expected is None or poly.evaluate(f) != expected:
                return _fail(params, observable=k, polynomial=str(poly),
                             oracle=str(expected), flips=[str(w) for w in f.flips])
    return Outcome(True, params, {"evaluations": len(observables) * len(configs)})


@check("expectation.axioms", "E(c a c') = c E(a) c', E∘E = E, E(1) = 1")
def _expectation_axioms(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    sites = box_patch(ORIGIN, 1).interior_sites()
    observables = expectation_test_set()
    params = {"observables": len(observables), "monomial_pairs": 2}
    unit = conditional_expectation(PauliSum.scalar(1), cap=ctx.cap)
    if unit != StabilizerPolynomial.constant(1):
        return _fail(params, axiom="unit", value=str(unit))
    for k, x in enumerate(observables):
        ex = conditional_expectation(x, cap=ctx.cap)
        if conditional_expectation(ex.to_pauli_sum(), cap=ctx.cap) != ex:
            return _fail(params, axiom="idempotence", observable=k)
        for _ in range(2):
            left = StabilizerPolynomial.monomial(w for w in sites if rng.random() < 0.5)
            right = StabilizerPolynomial.monomial(w for w in sites if rng.random() < 0.5)
            sandwiched = left.to_pauli_sum() * x * right.to_pauli_sum()
            if conditional_expectation(sandwiched, cap=ctx.cap) != left * ex * right:
                return _fail(params, axiom="bimodule", observable=k,
                             left=str(left), right=str(right))
    return Outcome(True, params, {"observables_checked": len(observables)})


# ---------------------------------------------------------------------------
# symmetries
# ---------------------------------------------------------------------------

@check("symmetries.truncated-flip", "α_w(P_w) = 1 − P_w, α_w(P_{w'}) = P_{w'}")
def _truncated_flip(ctx: CheckContext) -> Outcome:
    box = box_patch(ORIGIN, 2)
    window = box.interior_sites()
    _, xmax, _, _ = box.bounding_box()
    local = _single_paulis(box_patch(ORIGIN, 1))
    params = {"window_sites": len(window), "local_operators": len(local)}
    for w in window:
        bound = xmax - w.x + 2
        for n in (bound, bound + 1):
            for w2 in window:
                image = truncated_symmetry(w, n, stabilizer(w2))
                expected = stabilizer(w2).scaled(MINUS_ONE) if w2 == w else stabilizer(w2)
                if image != expected:
                    return _fail(params, site=str(w), other=str(w2), length=n)
        for p in local:
            if truncated_symmetry(w, bound, p) != truncated_symmetry(w, bound + 1, p):
                return _fail(params, site=str(w), operator=str(p), reason="not stable")
    return Outcome(True, params, {"stabilization_bound": f"xmax - w.x + 2 = {xmax} - w.x + 2"})


@check("symmetries.transport", "P_Δ(f) = α(P_Δ(1)) with α a product of truncated symmetries")
def _transport(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    delta = box_patch(ORIGIN, 2)
    sites = delta.interior_sites()
    local = _single_paulis(box_patch(ORIGIN, 1))
    params = {"box": 2, "configurations": ctx.samples, "operators_per_configuration": 3}
    for _ in range(ctx.samples):
        f = _random_config(rng, sites)
        if not transport_maps_generators(delta, f):
            return _fail(params, flips=[str(w) for w in f.flips], reason="generators")
        for p in rng.sample(local, 3):
            if not transported_compression_agrees(p, delta, f):
                return _fail(params, flips=[str(w) for w in f.flips], operator=str(p))
    return Outcome(True, params, {"transports": ctx.samples})


# ---------------------------------------------------------------------------
# groupoid
# ---------------------------------------------------------------------------

@check("groupoid.boundary-homomorphism", "∂(γ_1 γ_2) = ∂γ_1 ∂γ_2, α_{b_1 b_2} = α_{b_1} ∘ α_{b_2}")
def _boundary_homomorphism(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    edges = rectangle_patch(0, 9, 0, 9).sorted_edges
    sites = _window_sites(-1, 10)
    params = {"window": "10x10", "samples": ctx.samples}
    for _ in range(ctx.samples):
        g1, g2 = _random_gamma(rng, edges), _random_gamma(rng, edges)
        b1, b2 = boundary(g1), boundary(g2)
        if boundary(g1 * g2) != b1 * b2:
            return _fail(params, reason="boundary is not multiplicative")
        f = _random_config(rng, sites, default=1)
        if act(b1 * b2, f) != act(b1, act(b2, f)) or act(b1, act(b1, f)) != f:
            return _fail(params, reason="action is not a group action",
                         flips=sorted(str(w) for w in (b1 * b2).flips))
    return Outcome(True, params, {"pairs": ctx.samples})


@check("groupoid.ribbon-conjugation", "u^* η(Q) u = η(Q ∘ α_{∂γ_u})")
def _ribbon_conjugation(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    edges = rectangle_patch(0, 9, 0, 9).sorted_edges
    sites = _window_sites(0, 9)
    params = {"window": "10x10", "words": ctx.samples, "letters": 20}
    for _ in range(ctx.samples):
        word = [(rng.choice("xz"), rng.choice(edges)) for _ in range(20)]
        b = boundary(ribbon_to_gamma(word))
        u = word_operator(word)
        signs = conjugation_signs(u, sites)
        wrong = [str(w) for w, s in signs.items() if s != b.value(w)]
        if wrong:
            return _fail(params, sites=wrong[:10])
        for w in rng.sample(sites, 5):
            if conjugate(u, stabilizer(w)) != stabilizer(w).scaled(Phase.from_sign(signs[w])):
                return _fail(params, site=str(w), reason="conjugation sign")
        if not ribbon_to_gamma(word + word[::-1]).is_identity:
            return _fail(params, reason="word times its reverse is not trivial")
    return Outcome(True, params, {"sites_compared": len(sites) * ctx.samples})


@check("groupoid.orbit-reach", "the action of ∂Γ on Ω is free and minimal")
def _orbit_reach(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    sites = _window_sites(0, 9)
    kmax = ctx.config.max_cylinder_keys
    params = {"window": "10x10", "samples": ctx.samples, "max_keys": kmax}
    moved_count = 0
    for _ in range(ctx.samples):
        keys = rng.sample(sites, rng.randint(1, kmax))
        c = CylinderSet(tuple(keys), tuple(rng.choice((1, -1)) for _ in keys))
        f = _random_config(rng, sites, default=1)
        gamma = orbit_reach(f, c)
        b = boundary(gamma)
        moved = act(b, f)
        if not c.contains(moved):
            return _fail(params, keys=[str(k) for k in c.keys], reason="cylinder not reached")
        if b.flips and moved == f:
            return _fail(params, reason="non-trivial boundary fixed a point")
        if not freeness_check(gamma, set(sites) | b.flips):
            return _fail(params, reason="freeness check failed")
        moved_count += bool(b.flips)
    return Outcome(True, params, {"non_trivial_moves": moved_count})


@check("groupoid.local-finiteness", "finitely generated subgroups of ∂Γ are finite")
def _local_finiteness(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    edges = rectangle_patch(0, 5, 0, 5).sorted_edges
    params = {"samples": ctx.samples, "max_generators": 6}
    largest = 0
    for _ in range(ctx.samples):
        patterns = [boundary(_random_gamma(rng, edges, 3)) for _ in range(rng.randint(1, 6))]
        group = generated_subgroup(patterns)
        flips = sorted(set().union(*(p.flips for p in patterns)), key=site_key)
        index = {w: i for i, w in enumerate(flips)}
        basis = EchelonBasis(len(flips))
        for i, p in enumerate(patterns):
            basis.insert(pack([index[w] for w in p.flips], len(flips)), label=i)
        if len(group) != 2 ** basis.rank:
            return _fail(params, size=len(group), rank=basis.rank)
        if any(a * b not in group for a in group for b in group):
            return _fail(params, reason="not closed under products")
        largest = max(largest, len(group))
    return Outcome(True, params, {"largest_subgroup": largest})


@check("groupoid.class-reduction", "[Q] = a [1_{Ω(K, ε)}], [Q − Q∘α_b] = 0")
def _class_reduction(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    sites = _window_sites(0, 5)
    edges = rectangle_patch(0, 5, 0, 5).sorted_edges
    params = {"samples": ctx.samples, "max_keys": 6}
    for _ in range(ctx.samples):
        keys = tuple(rng.sample(sites, rng.randint(1, 6)))
        c1 = CylinderSet(keys, tuple(rng.choice((1, -1)) for _ in keys))
        c2 = CylinderSet(keys, tuple(rng.choice((1, -1)) for _ in keys))
        if act(boundary(exchange_element(c1, c2)), c1) != c2:
            return _fail(params, reason="exchange", keys=[str(k) for k in c1.keys])
        if class_reduce(CylinderFunction.indicator(c1)) != (1, CylinderSet.canonical(keys)):
            return _fail(params, reason="indicator class")
        both = CylinderFunction.indicator(c1) + CylinderFunction.indicator(c2)
        coeff, rep = class_reduce(both)
        if Dyadic(coeff, len(rep.keys)) != Dyadic(2, len(keys)):
            return _fail(params, reason="sum class", coefficient=coeff)
        q = CylinderFunction(keys, [rng.randint(-3, 3) for _ in range(1 << len(keys))])
        b = boundary(_random_gamma(rng, edges, 4))
        if class_reduce(q - act(b, q))[0] != 0:
            return _fail(params, reason="commutator class")
    return Outcome(True, params, {"reductions": 3 * ctx.samples})


# ---------------------------------------------------------------------------
# invariant
# ---------------------------------------------------------------------------

@check("invariant.measure-consistency", "φ(1_{Ω(K,ε)}) = 2^{−|K|}, φ([Q]) = a 2^{−|K|}")
def _measure_consistency(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    sites = _window_sites(0, 9)
    kmax = min(ctx.config.max_cylinder_keys, MAX_KEYS - 2)
    params = {"samples": ctx.samples, "max_keys": kmax}
    for _ in range(ctx.samples):
        keys = rng.sample(sites, rng.randint(0, kmax))
        tables = np.random.default_rng(rng.getrandbits(64))
        q = CylinderFunction(keys, tables.integers(-3, 4, size=1 << len(keys)))
        coeff, rep = class_reduce(q)
        value = measure(q)
        if value != Dyadic(coeff, len(rep.keys)):
            return _fail(params, reason="class and measure disagree", value=str(value))
        extra = rng.sample(sites, 2)
        if measure(q.refine_to(set(q.keys) | set(extra))) != value:
            return _fail(params, reason="refinement changed the measure")
        c = CylinderSet(tuple(keys), tuple(rng.choice((1, -1)) for _ in keys))
        if measure(CylinderFunction.indicator(c)) != Dyadic(1, len(keys)):
            return _fail(params, reason="cylinder measure", keys=len(keys))
    if measure(CylinderFunction.constant(1)) != Dyadic(1):
        return _fail(params, reason="unit")
    return Outcome(True, params, {"functions": ctx.samples})


@check("invariant.triple", "(ℤ[½], ℤ₊[½], 1) for both diagonals")
def _invariant_triple(ctx: CheckContext) -> Outcome:
    box = box_patch(ORIGIN, ctx.config.box_size)
    windows = {m: model_window(m, box) for m in Model}
    k = min([ctx.config.max_cylinder_keys] + [len(w) for w in windows.values()])
    params = {"box": ctx.config.box_size, "keys": k, "samples": ctx.samples}
    reports = {
        m: invariant_triple(m, windows[m], ctx.samples,
                            random.Random(f"{ctx.config.seed}:{ctx.claim_id}:{m.value}"),
                            max_keys=k)
        for m in Model
    }
    toric, standard = reports[Model.TORIC], reports[Model.STANDARD]
    image = toric.image
    witness = {
        "image_size": len(image),
        "image_min": str(image[0]) if image else None,
        "image_max": str(image[-1]) if image else None,
        "unit": "1",
        "exponents": list(toric.exponents),
        "models": {m.value: r.holds for m, r in reports.items()},
    }
    if not (toric.holds and standard.holds):
        return Outcome(False, params, witness)
    if toric.triple_data() != standard.triple_data():
        return _fail(params, reason="models disagree")
    return Outcome(True, params, witness)


# ---------------------------------------------------------------------------
# no-lift
# ---------------------------------------------------------------------------

def _no_lift_case(n: int, ctx: CheckContext) -> Outcome:
    report = no_lift_certificate(n)
    params = {"n": n}
    witness = dataclasses.asdict(report)
    witness["expected_star_count"] = (2 * n + 1) ** 2
    witness["expected_ribbon_steps"] = 8 * n + 4
    ok = (report.holds
          and report.star_count == witness["expected_star_count"]
          and report.ribbon_steps == witness["expected_ribbon_steps"])
    return Outcome(ok, params, witness)


# ---------------------------------------------------------------------------
# oracle-crosscheck
# ---------------------------------------------------------------------------

@check("oracle-crosscheck.exhaustive-small", "H_Λ := ⊗_{e ∈ Λ} H_e, exhaustive on 6 edges")
def _oracle_exhaustive(ctx: CheckContext) -> Outcome:
    patch = Patch(frozenset(box_patch(ORIGIN, 1).sorted_edges[:6]))
    square = rectangle_patch(0, 1, 0, 1)
    params = {"edges": len(patch), "membership_edges": len(square)}
    if not (ctx.oracle_fits(patch) and ctx.oracle_fits(square)):
        return _skip("patch exceeds oracle_max_edges", params)

    ops = [PauliOperator.identity()] + _single_paulis(patch)
    mats = [dense(p, patch) for p in ops]
    for i, p in enumerate(ops):
        for j, q in enumerate(ops):
            if dense(multiply(p, q), patch) != mats[i] @ mats[j]:
                return _fail(params, left=str(p), right=str(q), reason="product")
            if commutes(p, q) != dense_commutes(p, q, patch):
                return _fail(params, left=str(p), right=str(q), reason="commutation")

    group = projector_net(square, Configuration.constant(1)).group
    letters = [PauliOperator.identity(), *group.generators, *_single_paulis(square)]
    checked = 0
    for i, p in enumerate(letters):
        for j, q in enumerate(letters):
            candidate = multiply(p, q).scaled(Phase(i + j))
            symbolic = group.membership(candidate)
            if symbolic != dense_membership(candidate, group.generators, square):
                return _fail(params, operator=str(candidate), symbolic=repr(symbolic))
            checked += 1
    return Outcome(True, params, {"pairs": len(ops) ** 2, "memberships": checked})


@check("oracle-crosscheck.random-pairs", "H_Λ := ⊗_{e ∈ Λ} H_e, random pairs on 12 edges")
def _oracle_random_pairs(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    box = box_patch(ORIGIN, 1)
    params = {"edges": len(box), "pairs": ctx.samples}
    if not ctx.oracle_fits(box):
        return _skip("patch exceeds oracle_max_edges", params)
    edges = box.sorted_edges
    anticommuting = 0
    for _ in range(ctx.samples):
        p, q = _random_pauli(rng, edges, 12), _random_pauli(rng, edges, 12)
        dp, dq = dense(p, box), dense(q, box)
        pq = dp @ dq
        if dense(multiply(p, q), box) != pq:
            return _fail(params, left=str(p), right=str(q), reason="product")
        if commutes(p, q) != (pq == dq @ dp):
            return _fail(params, left=str(p), right=str(q), reason="commutation")
        if not dp.trace().is_zero:
            return _fail(params, operator=str(p), reason="trace")
        anticommuting += not commutes(p, q)
    return Outcome(True, params, {"anticommuting_pairs": anticommuting})


@check("oracle-crosscheck.membership", "∏ g_i = s·p decided symbolically and densely")
def _oracle_membership(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    box = box_patch(ORIGIN, 1)
    params = {"edges": len(box), "samples": ctx.samples}
    if not ctx.oracle_fits(box):
        return _skip("patch exceeds oracle_max_edges", params)
    members = 0
    for _ in range(ctx.samples):
        group = projector_net(box, _random_config(rng, box.interior_sites())).group
        if rng.random() < 0.5:
            chosen = [g for g in group.generators if rng.random() < 0.5]
            p = product(chosen).scaled(Phase(rng.randrange(4)))
        else:
            p = _random_pauli(rng, box.sorted_edges, 4)
        symbolic = group.membership(p)
        if symbolic != dense_membership(p, group.generators, box):
            return _fail(params, operator=str(p), symbolic=repr(symbolic))
        members += isinstance(symbolic, Member)
    return Outcome(True, params, {"members": members})


@check("oracle-crosscheck.hamiltonian-spectrum",
       "H_Λ = Σ_w ½(1 − f(w) S_w) has spectrum {0..m} with multiplicities C(m,k) 2^{|Λ|−m}")
def _oracle_spectrum(ctx: CheckContext) -> Outcome:
    rng = ctx.rng
    box, strip = box_patch(ORIGIN, 1), rectangle_patch(0, 3, 0, 1)
    cases = [
        (box, Configuration.constant(1)),
        (strip, _random_config(rng, strip.interior_sites())),
        (strip, Configuration.constant(-1)),
    ]
    params = {"patches": [len(p) for p, _ in cases]}
    if not all(ctx.oracle_fits(p) for p, _ in cases):
        return _skip("patch exceeds oracle_max_edges", params)
    spectra = []
    dense_sectors = 0
    for patch, f in cases:
        spectrum = dense_hamiltonian(patch, f)
        dense_sectors += len(spectrum.sector_traces)
        if not spectrum.traces_agree:
            return _fail(params, edges=len(patch), reason="dense and symbolic traces differ",
                         sectors=[list(s) for s, d, t in spectrum.sector_traces if d != t][:10])
        if not (spectrum.verified and spectrum.matches_counting()
                and spectrum.eigenvalues == tuple(range(spectrum.m + 1))):
            return _fail(params, edges=len(patch), multiplicities=[
                list(m) for m in spectrum.multiplicities])
        spectra.append({"edges": spectrum.n_edges, "terms": spectrum.m,
                        "multiplicities": [list(m) for m in spectrum.multiplicities]})
    return Outcome(True, params, {"spectra": spectra, "dense_sectors": dense_sectors})
