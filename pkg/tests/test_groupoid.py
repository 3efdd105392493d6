"""Tests for Γ, boundary patterns, the action and the invariant triple."""

import random

import pytest

from toric_diagonal import groupoid
from toric_diagonal.cylinder import CylinderFunction, CylinderSet
from toric_diagonal.groupoid import (
    BoundaryPattern,
    EdgeFlip,
    GammaElement,
    Model,
    act,
    auxiliary_site,
    boundary,
    class_reduce,
    conjugation_signs,
    exchange_element,
    freeness_check,
    generated_subgroup,
    invariant_triple,
    model_window,
    orbit_reach,
    reduce_to_unit_cylinder,
    ribbon_to_gamma,
    same_class,
    solve_boundary,
    word_operator,
)
from toric_diagonal.lattice import Face, Patch, Vertex, h_edge, straight_path, v_edge
from toric_diagonal.pauli import multiply, ribbon_z, sigma_x, sigma_z
from toric_diagonal.toric import Configuration

ORIGIN = Vertex(0, 0)
V10 = Vertex(1, 0)
F00 = Face(ORIGIN)


class TestBoundary:
    """``∂: Γ → ∂Γ``."""

    def test_z_edge_flips_its_endpoints(self) -> None:
        b = boundary(GammaElement(z_part=frozenset({h_edge(0, 0)})))
        assert b.flips == {ORIGIN, V10}

    def test_x_edge_flips_its_faces(self) -> None:
        b = boundary(GammaElement(x_part=frozenset({h_edge(0, 0)})))
        assert b.flips == {Face(Vertex(0, -1)), F00}

    def test_homomorphism(self, rng: random.Random) -> None:
        edges = [h_edge(x, y) for x in range(-2, 2) for y in range(-2, 2)]
        edges += [v_edge(x, y) for x in range(-2, 2) for y in range(-2, 2)]
        for _ in range(20):
            g1 = GammaElement(frozenset(rng.sample(edges, 3)), frozenset(rng.sample(edges, 3)))
            g2 = GammaElement(frozenset(rng.sample(edges, 3)), frozenset(rng.sample(edges, 3)))
            assert boundary(g1 * g2) == boundary(g1) * boundary(g2)
        assert (g1 * g1).is_identity

    def test_pattern_parity_checked(self) -> None:
        with pytest.raises(ValueError, match="odd flip counts"):
            BoundaryPattern(frozenset({ORIGIN}))
        with pytest.raises(ValueError, match="sites only"):
            BoundaryPattern(frozenset({h_edge(0, 0), h_edge(1, 0)}))
        assert BoundaryPattern(frozenset({ORIGIN, V10})).value(ORIGIN) == -1

    def test_edge_flip(self) -> None:
        b = EdgeFlip(frozenset({h_edge(0, 0)}))
        assert b.value(h_edge(0, 0)) == -1
        assert b.value(v_edge(0, 0)) == 1
        assert (b * b).flips == frozenset()


class TestAction:
    """Sign flips on configurations, cylinders and functions."""

    def test_configuration(self) -> None:
        b = BoundaryPattern(frozenset({ORIGIN, V10}))
        f = Configuration.constant(1)
        moved = act(b, f)
        assert moved.flips == (ORIGIN, V10)
        assert act(b, moved) == f

    def test_windowed_configuration_ignores_outside_flips(self) -> None:
        b = BoundaryPattern(frozenset({ORIGIN, Vertex(9, 9)}))
        f = Configuration.uniform([ORIGIN, F00])
        moved = act(b, f)
        assert moved.window == f.window
        assert moved.value(ORIGIN) == -1

    def test_cylinder_set(self) -> None:
        b = BoundaryPattern(frozenset({ORIGIN, V10}))
        c = CylinderSet.from_mapping({ORIGIN: 1, F00: -1})
        assert act(b, c) == CylinderSet.from_mapping({ORIGIN: -1, F00: -1})

    def test_cylinder_function(self) -> None:
        b = BoundaryPattern(frozenset({ORIGIN, V10}))
        q = CylinderFunction((ORIGIN, F00), [0, 1, 2, 3])
        assert act(b, q).table.tolist() == [1, 0, 3, 2]
        assert act(b, act(b, q)) == q

    def test_indicator_follows_its_cylinder(self) -> None:
        b = BoundaryPattern(frozenset({F00, Face(Vertex(1, 1))}))
        c = CylinderSet.from_mapping({ORIGIN: -1, F00: 1})
        assert act(b, CylinderFunction.indicator(c)) == CylinderFunction.indicator(act(b, c))

    def test_unsupported_target(self) -> None:
        with pytest.raises(TypeError):
            act(EdgeFlip(), "configuration")


class TestOrbits:
    """Constructive density and exchange witnesses."""

    def test_auxiliary_site(self) -> None:
        keys = [Vertex(1, 3), Face(Vertex(-1, 2))]
        assert auxiliary_site(keys, Vertex) == Vertex(-3, 0)
        assert auxiliary_site(keys, Face) == Face(Vertex(-3, 0))

    def test_solve_boundary_matches_target(self) -> None:
        keys = [ORIGIN, Vertex(2, 1), V10, F00, Face(Vertex(3, 3)), Face(Vertex(-1, 0))]
        target = {ORIGIN: -1, Vertex(2, 1): -1, F00: -1, Face(Vertex(3, 3)): -1}
        b = boundary(solve_boundary(keys, target))
        assert all(b.value(k) == target.get(k, 1) for k in keys)

    def test_odd_flip_uses_auxiliary_site(self) -> None:
        b = boundary(solve_boundary([ORIGIN, V10], {ORIGIN: -1}))
        assert b.flips == {ORIGIN, Vertex(-2, -2)}

    def test_solve_boundary_rejects_edges(self) -> None:
        with pytest.raises(ValueError):
            solve_boundary([h_edge(0, 0)], {h_edge(0, 0): -1})

    def test_exchange(self, rng: random.Random, box1: Patch) -> None:
        keys = box1.interior_sites()
        for _ in range(10):
            c1 = CylinderSet(keys, tuple(rng.choice((1, -1)) for _ in keys))
            c2 = CylinderSet(keys, tuple(rng.choice((1, -1)) for _ in keys))
            assert act(boundary(exchange_element(c1, c2)), c1) == c2

    def test_exchange_needs_shared_keys(self) -> None:
        with pytest.raises(ValueError, match="key set"):
            exchange_element(CylinderSet.canonical([ORIGIN]), CylinderSet.canonical([F00]))

    def test_orbit_reach(self, rng: random.Random, box2: Patch) -> None:
        sites = box2.interior_sites()
        f = Configuration.from_mapping({w: rng.choice((1, -1)) for w in sites})
        for _ in range(10):
            keys = rng.sample(sites, 6)
            c = CylinderSet(tuple(keys), tuple(rng.choice((1, -1)) for _ in keys))
            assert c.contains(act(boundary(orbit_reach(f, c)), f))

    def test_orbit_reach_needs_values(self) -> None:
        with pytest.raises(ValueError):
            orbit_reach(Configuration.uniform([ORIGIN]), CylinderSet.canonical([F00]))

    def test_freeness(self) -> None:
        gamma = GammaElement(z_part=frozenset({h_edge(0, 0)}))
        assert freeness_check(gamma, [ORIGIN, V10, F00])
        assert not freeness_check(gamma, [ORIGIN, F00])
        assert freeness_check(GammaElement(), [ORIGIN])


class TestRibbonWords:
    """Ribbon words, their Γ elements and conjugation signs."""

    def test_gamma_of_word(self) -> None:
        word = [("z", h_edge(0, 0)), ("z", h_edge(1, 0)), ("x", v_edge(0, 0)), ("z", h_edge(1, 0))]
        gamma = ribbon_to_gamma(word)
        assert gamma.z_part == {h_edge(0, 0)}
        assert gamma.x_part == {v_edge(0, 0)}

    def test_word_operator(self) -> None:
        e = h_edge(0, 0)
        assert word_operator([("x", e), ("z", e)]) == multiply(sigma_x(e), sigma_z(e))

    def test_invalid_letters(self) -> None:
        with pytest.raises(ValueError, match="'x' or 'z'"):
            ribbon_to_gamma([("y", h_edge(0, 0))])
        with pytest.raises(ValueError, match="'x' or 'z'"):
            word_operator([("y", h_edge(0, 0))])

    def test_conjugation_signs(self) -> None:
        u = ribbon_z(straight_path(ORIGIN, 2))
        signs = conjugation_signs(u, [ORIGIN, V10, Vertex(2, 0), F00])
        assert signs == {ORIGIN: -1, V10: 1, Vertex(2, 0): -1, F00: 1}

    def test_conjugation_matches_boundary(self, rng: random.Random, box2: Patch) -> None:
        edges = box2.sorted_edges
        sites = box2.interior_sites()
        for _ in range(10):
            word = [(rng.choice("xz"), rng.choice(edges)) for _ in range(6)]
            b = boundary(ribbon_to_gamma(word))
            signs = conjugation_signs(word_operator(word), sites)
            assert signs == {w: b.value(w) for w in sites}


class TestClasses:
    """Subgroups and class reduction."""

    def test_generated_subgroup(self) -> None:
        a = BoundaryPattern(frozenset({ORIGIN, V10}))
        b = BoundaryPattern(frozenset({F00, Face(V10)}))
        group = generated_subgroup([a, b])
        assert len(group) == 4
        assert BoundaryPattern() in group
        assert len(generated_subgroup([a, b, a * b])) == 4
        assert generated_subgroup([]) == frozenset()

    def test_class_reduce(self) -> None:
        q = CylinderFunction((ORIGIN, F00), [1, 2, 0, 0])
        assert class_reduce(q) == (3, CylinderSet.canonical([ORIGIN, F00]))
        r = CylinderFunction((ORIGIN, F00), [2, 2, 5, 5])
        assert class_reduce(r) == (7, CylinderSet.canonical([F00]))

    def test_class_invariant_under_action(self) -> None:
        q = CylinderFunction((ORIGIN, F00), [1, 2, 0, 4])
        b = BoundaryPattern(frozenset({ORIGIN, V10}))
        assert class_reduce(act(b, q)) == class_reduce(q)


class TestInvariantTriple:
    """Sampled invariants of both diagonals."""

    def test_windows(self, box1: Patch) -> None:
        assert len(model_window(Model.TORIC, box1)) == 5
        assert len(model_window(Model.STANDARD, box1)) == 12

    @pytest.mark.parametrize("model", list(Model))
    def test_holds(self, model: Model, box1: Patch) -> None:
        report = invariant_triple(model, model_window(model, box1), 25, random.Random(3))
        assert report.holds
        assert report.samples == 25
        assert all(d.exponent <= report.keys for d in report.image)

    def test_unit(self) -> None:
        report = invariant_triple(Model.TORIC, [ORIGIN, F00], 0, random.Random(0))
        assert report.unit_ok
        assert report.image == ()

    def test_models_agree(self, box1: Patch) -> None:
        """Independent streams give the same model-free summary."""
        toric = invariant_triple(Model.TORIC, model_window(Model.TORIC, box1), 25,
                                 random.Random(11), max_keys=5)
        standard = invariant_triple(Model.STANDARD, model_window(Model.STANDARD, box1), 25,
                                    random.Random(12), max_keys=5)
        assert toric.keys == standard.keys == 5
        assert toric.exponents == (0, 1, 2, 3, 4, 5)
        assert toric.triple_data() == standard.triple_data()

    def test_broken_action_is_detected(self, box1: Patch,
                                       monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(groupoid, "_pattern_for", lambda model, keys, mask: EdgeFlip())
        report = invariant_triple(Model.TORIC, model_window(Model.TORIC, box1), 25,
                                  random.Random(3))
        assert not report.class_consistent
        assert not report.holds


class TestSameClass:
    """Constructive commutator reduction."""

    @pytest.mark.parametrize(
        "model, keys",
        [
            (Model.TORIC, (ORIGIN, F00)),
            (Model.STANDARD, (h_edge(0, 0), v_edge(0, 0))),
        ],
    )
    def test_reduction_moves_everything_to_one_entry(self, model: Model, keys: tuple) -> None:
        q = CylinderFunction(keys, [1, -1, 2, 4])
        remainder, steps = reduce_to_unit_cylinder(q, model)
        assert remainder.table.tolist() == [6, 0, 0, 0]
        assert len(steps) == 2
        rebuilt = remainder
        for b, h in steps:
            rebuilt = rebuilt + (h - act(b, h))
        assert rebuilt == q

    def test_equal_measure_same_class(self) -> None:
        a = CylinderFunction.indicator(CylinderSet((ORIGIN,), (-1,)))
        b = CylinderFunction.indicator(CylinderSet((F00,), (1,)))
        assert same_class(a, b, Model.TORIC)

    def test_different_measure_different_class(self) -> None:
        a = CylinderFunction.indicator(CylinderSet((ORIGIN,), (-1,)))
        assert not same_class(a, CylinderFunction.constant(1), Model.TORIC)
        assert not same_class(a, CylinderFunction.constant(0), Model.TORIC)

    def test_pattern_that_moves_nothing(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(groupoid, "_pattern_for", lambda model, keys, mask: EdgeFlip())
        a = CylinderFunction.indicator(CylinderSet((ORIGIN,), (-1,)))
        b = CylinderFunction.indicator(CylinderSet((ORIGIN,), (1,)))
        assert not same_class(a, b, Model.TORIC)
