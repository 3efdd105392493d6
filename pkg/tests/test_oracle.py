"""Tests for the dense oracle on small patches."""

from fractions import Fraction
import random

import numpy as np
import pytest

from toric_diagonal import oracle
from toric_diagonal.lattice import Face, Patch, Vertex, h_edge, rectangle_patch, v_edge
from toric_diagonal.oracle import (
    MAX_ORACLE_EDGES,
    DenseOperator,
    dense,
    dense_commutes,
    dense_compress,
    dense_hamiltonian,
    dense_membership,
    dense_projector,
)
from toric_diagonal.pauli import (
    MINUS_ONE,
    GaussianRational,
    NotMember,
    Phase,
    PauliOperator,
    SignedStabilizerGroup,
    commutes,
    multiply,
    sigma_x,
    sigma_y,
    sigma_z,
)
from toric_diagonal.toric import Configuration, compress, face, projector_net

E0 = h_edge(0, 0)
F00 = Face(Vertex(0, 0))
SINGLE = Patch(frozenset({E0}))


@pytest.fixture
def square() -> Patch:
    """The four edges around one face."""
    return rectangle_patch(0, 1, 0, 1)


@pytest.fixture
def domino() -> Patch:
    """Two faces side by side: seven edges, no interior vertex."""
    return rectangle_patch(0, 2, 0, 1)


def _entries(op: DenseOperator):
    return (op.re.toarray().tolist(), op.im.toarray().tolist(), op.exponent)


class TestDense:
    """Single-qubit matrices and the product convention."""

    def test_pauli_matrices(self) -> None:
        assert _entries(dense(sigma_x(E0), SINGLE)) == ([[0, 1], [1, 0]], [[0, 0], [0, 0]], 0)
        assert _entries(dense(sigma_z(E0), SINGLE)) == ([[1, 0], [0, -1]], [[0, 0], [0, 0]], 0)
        assert _entries(dense(sigma_y(E0), SINGLE)) == ([[0, 0], [0, 0]], [[0, -1], [1, 0]], 0)

    def test_multiply_matches_matrix_product(self, square: Patch) -> None:
        rng = random.Random(5)
        edges = square.sorted_edges
        for _ in range(20):
            p = PauliOperator(frozenset(rng.sample(edges, 2)), frozenset(rng.sample(edges, 2)),
                              Phase(rng.randrange(4)))
            q = PauliOperator(frozenset(rng.sample(edges, 2)), frozenset(rng.sample(edges, 2)),
                              Phase(rng.randrange(4)))
            assert dense(multiply(p, q), square) == dense(p, square) @ dense(q, square)
            assert dense_commutes(p, q, square) == commutes(p, q)
            assert dense(p.adjoint(), square) == dense(p, square).adjoint()

    def test_support_overflow(self, square: Patch) -> None:
        with pytest.raises(ValueError, match="overflows"):
            dense(sigma_x(h_edge(5, 5)), square)

    def test_size_cap(self) -> None:
        big = rectangle_patch(0, 3, 0, 2)
        assert len(big) > MAX_ORACLE_EDGES
        with pytest.raises(ValueError, match="limited"):
            dense(sigma_x(E0), big)


class TestDenseOperator:
    """Exact Gaussian-dyadic arithmetic."""

    def test_identity_trace(self, square: Patch) -> None:
        eye = DenseOperator.identity(len(square))
        assert eye.dimension == 16
        assert eye.trace() == GaussianRational(16)
        assert eye.is_projector
        assert DenseOperator.zero(4).is_zero

    def test_exponent_normalized(self) -> None:
        eye = DenseOperator.identity(1)
        doubled = eye.scaled(2).halved()
        assert doubled.exponent == 0
        assert doubled == eye
        assert eye.halved(3).trace() == GaussianRational(Fraction(1, 4))

    def test_times(self) -> None:
        eye = DenseOperator.identity(1)
        c = GaussianRational(Fraction(3, 4), Fraction(-1, 2))
        assert eye.times(c).trace() == GaussianRational(Fraction(3, 2), -1)
        with pytest.raises(ValueError, match="dyadic"):
            eye.times(GaussianRational(Fraction(1, 3)))

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(ValueError, match="mismatch"):
            DenseOperator.identity(1) @ DenseOperator.identity(2)

    def test_hermitian(self) -> None:
        assert dense(sigma_y(E0), SINGLE).is_hermitian
        assert not dense(sigma_y(E0).scaled(Phase(1)), SINGLE).is_hermitian

    def test_unhashable(self) -> None:
        with pytest.raises(TypeError):
            hash(DenseOperator.identity(1))


class TestProjectors:
    """Dense projectors and compressions."""

    def test_projector_trace(self, square: Patch, domino: Patch) -> None:
        for patch, expected in ((square, 8), (domino, 32)):
            proj = dense_projector(projector_net(patch, Configuration.constant(1)))
            assert proj.is_projector
            assert proj.trace() == GaussianRational(expected)

    def test_box1_projector(self, box1: Patch) -> None:
        proj = dense_projector(projector_net(box1, Configuration.constant(-1)))
        assert proj.trace() == GaussianRational(128)
        assert proj @ proj == proj

    def test_embedding(self, square: Patch, domino: Patch) -> None:
        e = projector_net(square, Configuration.constant(1))
        proj = dense_projector(e, ambient=domino)
        assert proj.trace() == GaussianRational(64)
        with pytest.raises(ValueError, match="contain"):
            dense_projector(projector_net(domino, Configuration.constant(1)), ambient=square)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_compress_agrees(self, square: Patch, sign: int) -> None:
        e = projector_net(square, Configuration.constant(sign))
        for p in (sigma_x(E0), sigma_y(E0), sigma_z(E0), face(F00), face(F00).scaled(MINUS_ONE),
                  PauliOperator.identity()):
            assert dense_compress(p, e).agrees(compress(p, e))

    def test_compress_scalar(self, square: Patch) -> None:
        e = projector_net(square, Configuration.constant(-1))
        result = dense_compress(face(F00), e)
        assert result.is_scalar
        assert result.scalar == GaussianRational(-1)
        residual = dense_compress(sigma_z(E0), e)
        assert not residual.is_scalar
        assert not residual.is_zero


class TestHamiltonian:
    """Exact spectra by syndrome sectors."""

    def test_square(self, square: Patch) -> None:
        spectrum = dense_hamiltonian(square, Configuration.constant(1))
        assert spectrum.m == 1
        assert spectrum.multiplicities == ((0, 8), (1, 8))
        assert spectrum.eigenvalues == (0, 1)
        assert spectrum.verified
        assert spectrum.matches_counting()

    def test_domino_signed(self, domino: Patch) -> None:
        f = Configuration.from_mapping({F00: -1, Face(Vertex(1, 0)): 1})
        spectrum = dense_hamiltonian(domino, f)
        assert spectrum.multiplicities == ((0, 32), (1, 64), (2, 32))
        assert spectrum.verified
        assert spectrum.matches_counting()

    def test_dense_traces_match_symbolic(self, domino: Patch) -> None:
        spectrum = dense_hamiltonian(domino, Configuration.constant(1))
        assert [s for s, _, _ in spectrum.sector_traces] == [(0, 0), (1, 0), (0, 1), (1, 1)]
        assert all(d == s == 32 for _, d, s in spectrum.sector_traces)
        assert spectrum.traces_agree

    def test_wrong_symbolic_trace_is_caught(self, domino: Patch,
                                            monkeypatch: pytest.MonkeyPatch) -> None:
        """Multiplicities come from the matrices, not the expansion."""
        monkeypatch.setattr(oracle, "_sector_trace", lambda scalars, sector, n: 0)
        spectrum = dense_hamiltonian(domino, Configuration.constant(1))
        assert not spectrum.traces_agree
        assert spectrum.multiplicities == ((0, 32), (1, 64), (2, 32))

    def test_ground_space_is_projector(self, domino: Patch) -> None:
        f = Configuration.constant(1)
        spectrum = dense_hamiltonian(domino, f)
        proj = dense_projector(projector_net(domino, f))
        assert (spectrum.operator @ proj).is_zero


class TestMembership:
    """Brute-force subset search against the symbolic group."""

    def test_agrees_with_symbolic(self, domino: Patch) -> None:
        faces = domino.interior_faces()
        gens = [face(faces[0]).scaled(MINUS_ONE), face(faces[1])]
        group = SignedStabilizerGroup(gens, labels=faces)
        both = multiply(face(faces[0]), face(faces[1]))
        for p in (face(faces[0]), both, both.scaled(Phase(1)), sigma_x(v_edge(1, 0)),
                  PauliOperator.identity()):
            assert dense_membership(p, gens, domino) == group.membership(p)

    def test_not_member(self, square: Patch) -> None:
        assert dense_membership(sigma_z(E0), [face(F00)], square) == NotMember()

    def test_sparse_storage(self, square: Patch) -> None:
        op = dense(face(F00), square)
        assert op.re.nnz == 16
        assert op.im.nnz == 0
        assert np.all(np.abs(op.re.data) == 1)
