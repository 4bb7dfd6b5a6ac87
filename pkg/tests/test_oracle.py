import numpy as np
import pytest

from hoffman.linalg import NormTag
from hoffman.oracle import (
    OracleSizeError,
    inner_min_norm,
    oracle_bilevel_maxmin,
    oracle_facial_faces,
    oracle_gordan_surjective,
    oracle_hoffman_enumerate,
    oracle_mixed_enumerate,
    ray_boundary_distance,
)
from hoffman.polylp import NormConfig, min_conic_image_norm

from conftest import THREE_ROWS, gaussian

LL = NormConfig(NormTag.LINF, NormTag.LINF)


def test_enumerate_examples():
    assert oracle_hoffman_enumerate(THREE_ROWS, LL) == pytest.approx(2.0)
    assert oracle_hoffman_enumerate(np.eye(3), LL) == pytest.approx(1.0)
    assert oracle_hoffman_enumerate([[1.0], [-1.0]], LL) == pytest.approx(1.0)


def test_bilevel_examples():
    assert oracle_bilevel_maxmin(THREE_ROWS, {0, 2}, LL) == pytest.approx(2.0)
    assert oracle_bilevel_maxmin(np.eye(2), {0, 1}, LL) == pytest.approx(1.0)
    assert oracle_bilevel_maxmin(THREE_ROWS, set(), LL) == 0.0


def test_inner_min_norm_infeasible():
    assert inner_min_norm([[1.0], [-1.0]], [0, 1], [-1.0, -1.0], NormTag.LINF) == np.inf


def test_primal_dual_agreement():
    A = gaussian(11, 5, 3)
    for J in ({0, 1}, {0, 2, 4}, {1, 3}):
        out = min_conic_image_norm(A, J, LL)
        if out.surjective:
            assert oracle_bilevel_maxmin(A, J, LL) == pytest.approx(1 / out.value, rel=1e-7)


def test_gordan():
    assert oracle_gordan_surjective(np.eye(2), {0, 1})
    assert not oracle_gordan_surjective([[1.0], [-1.0]], {0, 1})
    assert oracle_gordan_surjective([[1.0], [-1.0]], set())


def test_face_examples():
    assert oracle_facial_faces(np.eye(2)) == pytest.approx(2.0)
    assert oracle_facial_faces(np.eye(2), NormConfig(NormTag.L1, NormTag.L2)) == pytest.approx(2 ** 0.5, rel=1e-6)
    assert oracle_facial_faces([[1.0], [0.0]]) == np.inf
    # triangle: min over vertex-to-opposite-edge and edge-to-opposite-vertex distances
    tri = np.array([[0.0, 2.0, 0.0], [0.0, 0.0, 2.0]])
    assert oracle_facial_faces(tri) == pytest.approx(2.0)


def test_mixed_examples():
    cfg = NormConfig(NormTag.LINF, NormTag.L1)
    assert oracle_mixed_enumerate([[1.0]], np.zeros((0, 1)), cfg) == pytest.approx(1.0)


def test_ray_distance():
    assert ray_boundary_distance(np.zeros((0, 1)), [[-1.0]], [0], [-1.0]) == pytest.approx(1.0)
    assert ray_boundary_distance([[1.0]], np.zeros((0, 1)), [], [1.0]) == pytest.approx(1.0)
    assert ray_boundary_distance([[1.0]], np.zeros((0, 1)), [], [-1.0]) == pytest.approx(1.0)


def test_size_guards():
    with pytest.raises(OracleSizeError):
        oracle_hoffman_enumerate(np.ones((15, 1)), LL)
    with pytest.raises(OracleSizeError):
        oracle_bilevel_maxmin(np.ones((17, 1)), range(17), LL)
    with pytest.raises(OracleSizeError):
        oracle_facial_faces(np.ones((1, 9)))
    with pytest.raises(ValueError):
        oracle_bilevel_maxmin(np.eye(2), {0}, NormConfig(NormTag.LINF, NormTag.L1))
