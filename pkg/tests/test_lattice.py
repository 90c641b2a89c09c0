import numpy as np
import pytest
from lab import B
from fareystat.lattice import (
    PrimitivePoint,
    h_matrix,
    a_matrix,
    m_matrix,
    h_dagger,
    horosphere_image,
    exgcd,
    complete_to_unimodular,
    integer_det
)
from fareystat.util import gcd_all

from .util import allclose, approx


def test_primitive_point():
    pt = PrimitivePoint([1, 2], 5)
    assert pt.n == 2
    assert pt.row == (1, 2, 5)
    allclose(pt.position(), [0.2, 0.4])
    assert pt == PrimitivePoint((1, 2), 5)
    assert len({pt, PrimitivePoint([1, 2], 5)}) == 1

    with pytest.raises(ValueError):
        PrimitivePoint([2, 4], 6)
    with pytest.raises(ValueError):
        PrimitivePoint([1], 0)


def test_h_matrix():
    allclose(h_matrix([0, 0]), np.eye(3))
    allclose(h_matrix(0.5), [[1, 0], [-0.5, 1]])
    allclose(np.dot([1, 2], h_matrix(0.5)), [0, 2])


def test_a_matrix():
    allclose(a_matrix(1, 2), np.eye(3))
    allclose(a_matrix(4, 1), np.diag([4, 0.25]))
    allclose(a_matrix(8, 2), np.diag([8 ** 0.5, 8 ** 0.5, 1 / 8]))

    with pytest.raises(ValueError):
        a_matrix(0, 1)


def test_m_matrix_h_dagger():
    allclose(h_dagger([0, 0]), np.eye(3))
    allclose(m_matrix([3]), np.eye(2))
    allclose(m_matrix([2, 2]), np.eye(3))
    allclose(m_matrix([4, 1]), np.diag([2, 0.5, 1]))

    with pytest.raises(ValueError):
        m_matrix([1, 0])


def test_determinants():
    for _ in range(20):
        n = np.random.randint(1, 4)
        x = np.random.randn(n)
        y = np.random.rand(n) + 0.1
        approx(B.det(h_matrix(x)), 1, decimal=9)
        approx(B.det(a_matrix(np.random.rand() + 0.1, n)), 1, decimal=9)
        approx(B.det(m_matrix(y)), 1, decimal=9)
        allclose(B.matmul(h_dagger(x), B.transpose(h_matrix(x))),
                 np.eye(n + 1), atol=1e-12)


def test_horosphere_image():
    for _ in range(100):
        n = np.random.randint(1, 4)
        x = np.random.rand(n)
        Q = np.random.randint(1, 1000)
        q = np.random.randint(1, 50)
        p = np.random.randint(-50, 50, size=n)
        image = horosphere_image(np.append(p, q), x, Q)
        expected = np.append(Q ** (1 / n) * (p - q * x), q / Q)
        allclose(image[0], expected, rtol=1e-12, atol=1e-12)


def test_exgcd():
    for a, b in [(3, 7), (12, 18), (0, 5), (-4, 6), (7, 0)]:
        m = exgcd(a, b)
        assert integer_det(m) == 1
        g = m[0][0] * a + m[0][1] * b
        assert g == gcd_all([a, b])
        assert m[1][0] * a + m[1][1] * b == 0


def _check_completion(a):
    gamma = complete_to_unimodular(a)
    assert integer_det(gamma) == 1
    image = [sum(g * x for g, x in zip(row, a)) for row in gamma]
    assert image == [0] * (len(a) - 1) + [1]


def test_complete_to_unimodular():
    assert complete_to_unimodular([0, 0, 1]) == [[1, 0, 0],
                                                 [0, 1, 0],
                                                 [0, 0, 1]]
    _check_completion([3, 7])
    _check_completion([0, 0, 0, 1])
    _check_completion([0, -1])
    _check_completion([0, 0, -1])

    for _ in range(1000):
        a = np.random.randint(-50, 51, size=3).tolist()
        if gcd_all(a) == 1:
            _check_completion(a)

    with pytest.raises(ValueError):
        complete_to_unimodular([2, 4])


def test_integer_det():
    assert integer_det([[7, -3], [-2, 1]]) == 1
    assert integer_det([[2]]) == 2
    assert integer_det([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
