"""Tests for the toric code layer: configurations, nets, LTQO and symmetries."""

from fractions import Fraction

import pytest

from toric_diagonal.lattice import (
    Face,
    Patch,
    Routing,
    Vertex,
    box_patch,
    h_edge,
    l_path,
    rectangle_patch,
    v_edge,
)
from toric_diagonal.pauli import (
    MINUS_ONE,
    ONE,
    GaussianRational,
    PauliSum,
    commutes,
    multiply,
    product,
    ribbon_z,
    sigma_x,
    sigma_y,
    sigma_z,
    syndrome_sites,
)
from toric_diagonal.toric import (
    Configuration,
    GrowthCapExceeded,
    Residual,
    Scalar,
    StabilizerPolynomial,
    Zero,
    compress,
    conditional_expectation,
    excitation_operator,
    face,
    ff_monotone,
    growth_sequence,
    ltqo_radius,
    no_lift_certificate,
    omega_f,
    projector_net,
    stabilizer,
    star,
    transport_maps_generators,
    transport_symmetry,
    transported_compression_agrees,
    truncated_symmetry,
)

ORIGIN = Vertex(0, 0)
F00 = Face(ORIGIN)


class TestStabilizers:
    """Star and face operators."""

    def test_supports(self) -> None:
        assert star(ORIGIN).weight == 4
        assert face(F00).z_support == {h_edge(0, 0), h_edge(0, 1), v_edge(0, 0), v_edge(1, 0)}
        assert stabilizer(ORIGIN) == star(ORIGIN)
        assert stabilizer(F00) == face(F00)

    def test_involution_and_commutation(self) -> None:
        sites = [Vertex(x, y) for x in range(3) for y in range(3)]
        sites += [Face(v) for v in sites]
        ops = [stabilizer(w) for w in sites]
        for p in ops:
            assert multiply(p, p).is_identity
            assert all(commutes(p, q) for q in ops)

    def test_not_a_site(self) -> None:
        with pytest.raises(ValueError):
            stabilizer(h_edge(0, 0))


class TestConfiguration:
    """Finite descriptions of points of Ω."""

    def test_window_and_default(self) -> None:
        f = Configuration.from_mapping({ORIGIN: -1, F00: 1})
        assert f.value(ORIGIN) == -1
        assert f.flips == (ORIGIN,)
        with pytest.raises(ValueError, match="no value"):
            f.value(Vertex(5, 5))
        g = Configuration.from_mapping({ORIGIN: -1}, default=1)
        assert g.value(Vertex(5, 5)) == 1

    def test_default_valued_entries_are_implied(self) -> None:
        a = Configuration.from_mapping({ORIGIN: 1, F00: -1}, default=1)
        b = Configuration.from_mapping({F00: -1}, default=1)
        assert a == b
        assert a.with_flips([ORIGIN]).with_flips([ORIGIN]) == a

    def test_invalid_signs(self) -> None:
        with pytest.raises(ValueError):
            Configuration.from_mapping({ORIGIN: 0})
        with pytest.raises(ValueError):
            Configuration((), default=2)
        with pytest.raises(ValueError, match="twice"):
            Configuration(((ORIGIN, 1), (ORIGIN, -1)))

    def test_restrict_and_agree(self) -> None:
        f = Configuration.constant(-1)
        r = f.restrict([ORIGIN, F00])
        assert r.default is None
        assert r.window == {ORIGIN, F00}
        assert r.agrees_with(f, [ORIGIN, F00])
        assert not r.covers([Vertex(1, 1)])
        assert f.covers([Vertex(1, 1)])


class TestProjectorNet:
    """Signed net elements and frustration-freeness."""

    def test_rank_is_interior_count(self, box2: Patch, unsigned: Configuration) -> None:
        e = projector_net(box2, unsigned)
        assert e.rank == 25
        assert e.sites == box2.interior_sites()

    def test_missing_site_rejected(self, box2: Patch, box1_uniform: Configuration) -> None:
        with pytest.raises(ValueError):
            projector_net(box2, box1_uniform)

    def test_monotone_on_nested_boxes(self, rng) -> None:
        sites = box_patch(ORIGIN, 3).interior_sites()
        f = Configuration.from_mapping({w: rng.choice((1, -1)) for w in sites})
        nets = [projector_net(box_patch(ORIGIN, n), f) for n in (1, 2, 3)]
        assert ff_monotone(nets[2], nets[0])
        assert ff_monotone(nets[1], nets[0])
        assert ff_monotone(nets[2], nets[1])

    def test_monotone_needs_containment(self, box1: Patch, box2: Patch,
                                        unsigned: Configuration) -> None:
        with pytest.raises(ValueError, match="contained"):
            ff_monotone(projector_net(box1, unsigned), projector_net(box2, unsigned))

    def test_monotone_detects_disagreement(self, box1: Patch, box2: Patch) -> None:
        e1 = projector_net(box2, Configuration.constant(1))
        e2 = projector_net(box1, Configuration.constant(-1))
        with pytest.raises(ValueError, match="disagree"):
            ff_monotone(e1, e2)


class TestCompress:
    """Classification of ``P p P``."""

    def test_single_paulis_on_box1_vanish(self, box1: Patch, unsigned: Configuration) -> None:
        e = projector_net(box1, unsigned)
        for edge in box1.sorted_edges:
            assert compress(sigma_x(edge), e) == Zero()
        assert compress(sigma_z(h_edge(0, 0)), e) == Zero()
        assert compress(sigma_z(h_edge(-1, 1)), e) == Residual()

    def test_generator_gives_its_sign(self, box1: Patch) -> None:
        f = Configuration.from_mapping({w: -1 for w in box1.interior_sites()})
        e = projector_net(box1, f)
        assert compress(star(ORIGIN), e) == Scalar(MINUS_ONE)
        assert compress(star(ORIGIN).scaled(MINUS_ONE), e) == Scalar(ONE)

    def test_outside_operator_is_residual(self, box1: Patch, unsigned: Configuration) -> None:
        e = projector_net(box1, unsigned)
        assert compress(sigma_z(h_edge(7, 7)), e) == Residual()


class TestLtqo:
    """Box growth certificates."""

    def test_growth_sequence(self) -> None:
        steps = list(growth_sequence([h_edge(0, 0)], cap=2))
        assert [k for k, _ in steps] == [0, 1, 2]
        assert steps[0][1] == rectangle_patch(0, 1, 0, 0)
        assert steps[2][1] == rectangle_patch(-2, 3, -2, 2)

    def test_single_pauli_resolves_quickly(self, unsigned: Configuration) -> None:
        for make in (sigma_x, sigma_y, sigma_z):
            cert = ltqo_radius(PauliSum.of(make(h_edge(0, 0))), unsigned)
            assert cert.rings <= 3
            assert isinstance(cert.terms[0][2], Zero)
            assert cert.value() == GaussianRational()

    def test_generator_value(self) -> None:
        f = Configuration.from_mapping({F00: -1}, default=1)
        cert = ltqo_radius(PauliSum.of(face(F00)), f)
        assert cert.rings == 0
        assert cert.value() == GaussianRational(-1)

    def test_sum_value(self) -> None:
        f = Configuration.from_mapping({ORIGIN: -1}, default=1)
        x = PauliSum.scalar(Fraction(1, 2)) + PauliSum.of(star(ORIGIN), 3)
        assert ltqo_radius(x, f).value() == GaussianRational(Fraction(-5, 2))

    def test_patch_is_contained(self, box2: Patch, unsigned: Configuration) -> None:
        cert = ltqo_radius(PauliSum.of(sigma_x(h_edge(0, 0))), unsigned, patch=box2)
        assert box2.issubset(cert.delta)

    def test_open_ribbon_has_zero_value(self) -> None:
        f = Configuration.constant(-1)
        ribbon = ribbon_z(l_path(Vertex(0, 0), Vertex(4, 2)))
        assert omega_f(ribbon, f) == GaussianRational()

    def test_closed_loop_value(self) -> None:
        loop = ribbon_z(l_path(Vertex(0, 0), Vertex(1, 0)))
        loop = multiply(loop, ribbon_z(l_path(Vertex(1, 0), Vertex(0, 1), Routing.VERTICAL_FIRST)))
        loop = multiply(loop, ribbon_z(l_path(Vertex(0, 1), Vertex(0, 0))))
        f = Configuration.from_mapping({F00: -1}, default=1)
        assert omega_f(loop, f) == GaussianRational(-1)

    def test_cap_exceeded(self, unsigned: Configuration) -> None:
        # ring 0 is the bare segment, which has no interior sites
        ribbon = ribbon_z(l_path(Vertex(0, 0), Vertex(3, 0)))
        with pytest.raises(GrowthCapExceeded, match="rings"):
            ltqo_radius(PauliSum.of(ribbon), unsigned, cap=0)


class TestConditionalExpectation:
    """``E`` as a polynomial in the stabilizers."""

    def test_unit(self) -> None:
        assert conditional_expectation(PauliSum.scalar(1)) == StabilizerPolynomial.constant(1)

    def test_stabilizer_products(self) -> None:
        x = PauliSum.of(multiply(star(ORIGIN), face(F00)), 2)
        expected = StabilizerPolynomial.monomial([ORIGIN, F00], 2)
        assert conditional_expectation(x) == expected

    def test_non_stabilizer_vanishes(self) -> None:
        assert conditional_expectation(PauliSum.of(sigma_y(h_edge(0, 0)))).is_zero

    def test_evaluate(self) -> None:
        poly = StabilizerPolynomial.from_terms([((), 3), ((ORIGIN, F00), Fraction(1, 2))])
        f = Configuration.from_mapping({ORIGIN: -1, F00: 1})
        assert poly.evaluate(f) == GaussianRational(Fraction(5, 2))

    def test_polynomial_product_uses_involution(self) -> None:
        a = StabilizerPolynomial.monomial([ORIGIN])
        assert a * a == StabilizerPolynomial.constant(1)
        assert (a + StabilizerPolynomial.constant(1)) * 2 == \
            StabilizerPolynomial.from_terms([((), 2), ((ORIGIN,), 2)])

    def test_idempotent(self) -> None:
        x = PauliSum.of(star(ORIGIN)) + PauliSum.of(sigma_x(h_edge(0, 0)))
        ex = conditional_expectation(x)
        assert conditional_expectation(ex.to_pauli_sum()) == ex

    def test_bimodule(self) -> None:
        m = StabilizerPolynomial.monomial([F00])
        x = PauliSum.of(multiply(star(ORIGIN), face(Face(Vertex(-1, 0)))))
        lhs = conditional_expectation(m.to_pauli_sum() * x)
        assert lhs == m * conditional_expectation(x)


class TestSymmetries:
    """Truncated ribbon symmetries and transport."""

    @pytest.mark.parametrize("w", [ORIGIN, F00])
    def test_truncated_flip(self, w) -> None:
        assert truncated_symmetry(w, 3, stabilizer(w)) == stabilizer(w).scaled(MINUS_ONE)
        neighbour = Vertex(0, 1) if isinstance(w, Vertex) else Face(Vertex(0, 1))
        assert truncated_symmetry(w, 3, stabilizer(neighbour)) == stabilizer(neighbour)

    def test_far_end_flips_too(self) -> None:
        far = Vertex(3, 0)
        assert truncated_symmetry(ORIGIN, 3, star(far)) == star(far).scaled(MINUS_ONE)

    def test_transport_for_random_configurations(self, box2: Patch, rng) -> None:
        sites = box2.interior_sites()
        for _ in range(5):
            f = Configuration.from_mapping({w: rng.choice((1, -1)) for w in sites})
            assert transport_maps_generators(box2, f)
            for edge in rng.sample(box_patch(ORIGIN, 1).sorted_edges, 3):
                assert transported_compression_agrees(sigma_x(edge), box2, f)
                assert transported_compression_agrees(star(ORIGIN), box2, f)

    def test_transport_of_unsigned_is_identity(self, box2: Patch, unsigned: Configuration) -> None:
        assert transport_symmetry(box2, unsigned).is_identity
        assert transport_symmetry(Patch(), unsigned).is_identity


class TestExcitations:
    """Ribbon products creating prescribed excitations."""

    def test_mixed_syndrome(self) -> None:
        va, vb = Vertex(0, 0), Vertex(3, 2)
        fa, fb = Face(Vertex(1, 1)), Face(Vertex(-1, 4))
        r = excitation_operator([(va, vb)], [(fa, fb)])
        assert syndrome_sites(r) == ({va, vb}, {fa, fb})

    def test_routings_differ_by_enclosed_stabilizers(self) -> None:
        a, b = Vertex(0, 0), Vertex(2, 2)
        r1 = excitation_operator([(a, b)], [], Routing.HORIZONTAL_FIRST)
        r2 = excitation_operator([(a, b)], [], Routing.VERTICAL_FIRST)
        enclosed = product(face(Face(Vertex(x, y))) for x in range(2) for y in range(2))
        assert multiply(r1, r2.adjoint()) == enclosed

    def test_distinct_sites_required(self) -> None:
        with pytest.raises(ValueError, match="distinct"):
            excitation_operator([(ORIGIN, Vertex(1, 0)), (ORIGIN, Vertex(2, 0))], [])

    def test_pair_types_checked(self) -> None:
        with pytest.raises(ValueError):
            excitation_operator([(ORIGIN, F00)], [])
        with pytest.raises(ValueError):
            excitation_operator([], [(ORIGIN, Vertex(1, 0))])


class TestNoLift:
    """Product of stars against the surrounding ribbon."""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_certificate(self, n: int) -> None:
        report = no_lift_certificate(n)
        assert report.holds
        assert report.star_count == (2 * n + 1) ** 2
        assert report.ribbon_steps == 8 * n + 4

    def test_off_center(self) -> None:
        assert no_lift_certificate(1, Vertex(5, -3)).holds

    def test_box_size_checked(self) -> None:
        with pytest.raises(ValueError):
            no_lift_certificate(0)
