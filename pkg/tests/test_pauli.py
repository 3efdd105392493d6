"""Tests for the exact Pauli algebra, stabilizer groups and syndromes."""

from fractions import Fraction

import pytest

from toric_diagonal.lattice import Face, Patch, Vertex, box_patch, h_edge, l_path, v_edge
from toric_diagonal.pauli import (
    MINUS_ONE,
    ONE,
    GaussianRational,
    Infeasible,
    Member,
    NotMember,
    Phase,
    PauliOperator,
    PauliSum,
    SignedStabilizerGroup,
    Solution,
    commutes,
    conjugate,
    multiply,
    product,
    ribbon_x,
    ribbon_z,
    sigma_x,
    sigma_y,
    sigma_z,
    solve_syndrome,
    syndrome,
    syndrome_sites,
)
from toric_diagonal.toric import face, star

E0 = h_edge(0, 0)
E1 = v_edge(0, 0)
ORIGIN = Vertex(0, 0)


class TestPhase:
    """Fourth roots of unity."""

    def test_labels_round_trip(self) -> None:
        for label in ("1", "i", "-1", "-i"):
            assert Phase.from_label(label).label == label

    def test_invalid_label(self) -> None:
        with pytest.raises(ValueError, match="Invalid phase"):
            Phase.from_label("2")

    def test_arithmetic(self) -> None:
        i = Phase(1)
        assert i * i == MINUS_ONE
        assert i.inverse() == Phase(3)
        assert -ONE == MINUS_ONE
        assert Phase(6) == MINUS_ONE

    def test_sign(self) -> None:
        assert MINUS_ONE.sign == -1
        assert Phase.from_sign(1) == ONE
        with pytest.raises(ValueError):
            Phase(1).sign
        with pytest.raises(ValueError):
            Phase.from_sign(0)


class TestGaussianRational:
    """Exact complex coefficients."""

    def test_multiplication(self) -> None:
        a = GaussianRational(Fraction(1, 2), 1)
        b = GaussianRational(2, -1)
        assert a * b == GaussianRational(2, Fraction(3, 2))

    def test_coercion(self) -> None:
        assert GaussianRational.coerce(Phase(1)) == GaussianRational(0, 1)
        assert GaussianRational(1) + 2 == GaussianRational(3)
        with pytest.raises(TypeError):
            GaussianRational.coerce(0.5)

    def test_str(self) -> None:
        assert str(GaussianRational(Fraction(1, 2))) == "1/2"
        assert str(GaussianRational(0, -1)) == "-1i"
        assert str(GaussianRational(1, 2)) == "1+2i"


class TestMultiply:
    """Products under the Z-first convention."""

    def test_single_edge_relations(self) -> None:
        x, y, z = sigma_x(E0), sigma_y(E0), sigma_z(E0)
        assert multiply(x, x).is_identity
        assert multiply(y, y).is_identity
        assert multiply(z, z).is_identity
        # σx σz = -i σy, σz σx = i σy
        assert multiply(x, z) == y.scaled(Phase(3))
        assert multiply(z, x) == y.scaled(Phase(1))

    def test_anticommuting_pair(self) -> None:
        x, z = sigma_x(E0), sigma_z(E0)
        assert multiply(x, z) == multiply(z, x).scaled(MINUS_ONE)
        assert not commutes(x, z)
        assert commutes(x, sigma_z(E1))

    def test_adjoint_is_inverse(self, rng) -> None:
        edges = box_patch(ORIGIN, 1).sorted_edges
        for _ in range(50):
            p = PauliOperator(
                frozenset(rng.sample(edges, 4)),
                frozenset(rng.sample(edges, 4)),
                Phase(rng.randrange(4)),
            )
            assert multiply(p, p.adjoint()).is_identity
            assert multiply(p.adjoint(), p).is_identity

    def test_hermitian_y(self) -> None:
        assert sigma_y(E0).is_hermitian
        assert not sigma_y(E0).scaled(Phase(1)).is_hermitian
        assert PauliOperator(frozenset((E0,)), frozenset((E0,))).is_hermitian is False

    def test_product_of_empty_is_identity(self) -> None:
        assert product([]).is_identity

    def test_conjugate_by_anticommuting(self) -> None:
        assert conjugate(sigma_x(E0), sigma_z(E0)) == sigma_z(E0).scaled(MINUS_ONE)
        assert conjugate(sigma_x(E0), sigma_x(E0)) == sigma_x(E0)

    def test_str(self) -> None:
        assert str(PauliOperator.identity()) == "I"
        assert str(sigma_z(E0).scaled(MINUS_ONE)) == "-1·ZH@(0,0)"


class TestRibbons:
    """Ribbon operators and their syndromes."""

    def test_ribbon_z_syndrome(self) -> None:
        path = l_path(Vertex(0, 0), Vertex(2, 3))
        vertices, faces = syndrome_sites(ribbon_z(path))
        assert vertices == {Vertex(0, 0), Vertex(2, 3)}
        assert faces == frozenset()

    def test_ribbon_x_syndrome(self) -> None:
        a, b = Face(Vertex(0, 0)), Face(Vertex(-2, 1))
        vertices, faces = syndrome_sites(ribbon_x(l_path(a, b)))
        assert vertices == frozenset()
        assert faces == {a, b}

    def test_ribbon_kind_checked(self) -> None:
        with pytest.raises(ValueError, match="direct"):
            ribbon_z(l_path(Face(ORIGIN), Face(Vertex(1, 0))))
        with pytest.raises(ValueError, match="dual"):
            ribbon_x(l_path(ORIGIN, Vertex(1, 0)))

    def test_syndrome_bits(self) -> None:
        sites = [ORIGIN, Vertex(1, 0), Vertex(2, 0), Face(ORIGIN)]
        assert syndrome(sigma_z(E0), sites) == (1, 1, 0, 0)
        assert syndrome(sigma_x(E0), sites) == (0, 0, 0, 1)


class TestSignedStabilizerGroup:
    """Membership with exact signs."""

    def test_face_loop_membership(self, box1: Patch) -> None:
        faces = box1.interior_faces()
        group = SignedStabilizerGroup([face(f) for f in faces], labels=faces)
        target = product(face(f) for f in faces)
        assert group.membership(target) == Member(ONE, (0, 1, 2, 3))
        assert group.membership(target.scaled(MINUS_ONE)) == Member(MINUS_ONE, (0, 1, 2, 3))

    def test_identity_is_member_of_empty_group(self) -> None:
        group = SignedStabilizerGroup([])
        assert group.membership(PauliOperator.identity()) == Member(ONE, ())
        assert group.membership(sigma_x(E0)) == NotMember()
        assert group.anticommuting(sigma_x(E0)) == []

    def test_signed_generators(self) -> None:
        group = SignedStabilizerGroup([star(ORIGIN).scaled(MINUS_ONE)])
        assert group.membership(star(ORIGIN)) == Member(MINUS_ONE, (0,))

    def test_imaginary_member_sign(self) -> None:
        group = SignedStabilizerGroup([star(ORIGIN)])
        assert group.membership(star(ORIGIN).scaled(Phase(1))) == Member(Phase(3), (0,))

    def test_anticommuting_is_not_member(self) -> None:
        group = SignedStabilizerGroup([star(ORIGIN)])
        assert group.anticommuting(sigma_z(E0)) == [0]
        assert group.membership(sigma_z(E0)) == NotMember()

    def test_invalid_generators(self) -> None:
        with pytest.raises(ValueError, match="anticommute"):
            SignedStabilizerGroup([sigma_x(E0), sigma_z(E0)])
        with pytest.raises(ValueError, match="dependent"):
            SignedStabilizerGroup([star(ORIGIN), star(ORIGIN).scaled(MINUS_ONE)])
        with pytest.raises(ValueError, match="Hermitian"):
            SignedStabilizerGroup([star(ORIGIN).scaled(Phase(1))])
        with pytest.raises(ValueError, match="label"):
            SignedStabilizerGroup([star(ORIGIN)], labels=[])


class TestSolveSyndrome:
    """GF(2) syndrome solving."""

    def test_pair_is_feasible(self, box1: Patch) -> None:
        target = {v: 0 for v in box1.vertices()}
        target[ORIGIN] = target[Vertex(1, 0)] = 1
        result = solve_syndrome(target, box1)
        assert isinstance(result, Solution)
        sites = sorted(target)
        assert syndrome(result.operator, sites) == tuple(target[v] for v in sites)

    def test_single_flip_is_infeasible_on_all_vertices(self, box1: Patch) -> None:
        target = {v: int(v == ORIGIN) for v in box1.vertices()}
        assert solve_syndrome(target, box1) == Infeasible()

    def test_single_interior_flip_is_feasible(self, box1: Patch) -> None:
        assert isinstance(solve_syndrome({ORIGIN: 1}, box1), Solution)


class TestPauliSum:
    """Linear combinations."""

    def test_phase_folds_into_coefficient(self) -> None:
        s = PauliSum.of(sigma_x(E0).scaled(Phase(1)), 2)
        ((op, coeff),) = list(s)
        assert op == sigma_x(E0)
        assert coeff == GaussianRational(0, 2)

    def test_cancellation(self) -> None:
        s = PauliSum.of(sigma_z(E0)) - PauliSum.of(sigma_z(E0))
        assert s.is_zero
        assert len(s) == 0

    def test_product_of_sums(self) -> None:
        a = PauliSum.scalar(1) + PauliSum.of(sigma_x(E0))
        assert a * a == PauliSum.scalar(2) + PauliSum.of(sigma_x(E0), 2)

    def test_anticommutator_vanishes(self) -> None:
        x, z = PauliSum.of(sigma_x(E0)), PauliSum.of(sigma_z(E0))
        assert (x * z + z * x).is_zero

    def test_support(self) -> None:
        s = PauliSum.of(sigma_x(E0)) + PauliSum.of(sigma_z(E1), Fraction(1, 3))
        assert s.support == {E0, E1}
