"""Tensor helper checks: shapes are enforced and arithmetic is exact."""

import numpy as np
import pytest

from cxrnet import tensor
from cxrnet.exceptions import EmptyTensorError, ShapeMismatchError


class TestMatmul:
    def test_known_product(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        b = np.array([[5.0, 6.0], [7.0, 8.0]])
        np.testing.assert_array_equal(
            tensor.matmul(a, b), np.array([[19.0, 22.0], [43.0, 50.0]])
        )

    def test_identity_is_noop(self):
        rng = np.random.default_rng(0)
        a = rng.random((4, 5))
        np.testing.assert_array_equal(tensor.matmul(a, np.eye(5)), a)

    def test_matches_numpy_on_random_inputs(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            m, k, n = rng.integers(1, 8, size=3)
            a = rng.random((m, k))
            b = rng.random((k, n))
            np.testing.assert_allclose(tensor.matmul(a, b), a @ b, rtol=1e-12)

    def test_inner_dimension_mismatch(self):
        with pytest.raises(ShapeMismatchError) as exc:
            tensor.matmul(np.ones((2, 3)), np.ones((4, 2)))
        assert "(2, 3)" in str(exc.value) and "(4, 2)" in str(exc.value)

    def test_rank_enforced(self):
        with pytest.raises(ShapeMismatchError):
            tensor.matmul(np.ones(3), np.ones((3, 2)))
        with pytest.raises(ShapeMismatchError):
            tensor.matmul(np.ones((2, 3)), np.ones((3, 2, 1)))


class TestReshape:
    def test_round_trip(self):
        t = np.arange(24.0).reshape(2, 3, 4)
        flat = tensor.reshape(t, (24,))
        np.testing.assert_array_equal(tensor.reshape(flat, (2, 3, 4)), t)

    def test_row_major_order(self):
        t = np.array([[1, 2], [3, 4]])
        np.testing.assert_array_equal(tensor.reshape(t, (4,)), [1, 2, 3, 4])

    def test_element_count_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            tensor.reshape(np.ones((2, 3)), (7,))


class TestArgmax:
    def test_returns_python_int(self):
        out = tensor.argmax(np.array([0.1, 0.9, 0.3]))
        assert out == 1 and type(out) is int

    def test_tie_breaks_to_lowest_index(self):
        assert tensor.argmax(np.array([2.0, 5.0, 5.0, 1.0])) == 1

    def test_rejects_matrix(self):
        with pytest.raises(ShapeMismatchError):
            tensor.argmax(np.ones((2, 2)))

    def test_rejects_empty(self):
        with pytest.raises(EmptyTensorError):
            tensor.argmax(np.array([]))


class TestElementwise:
    def test_add_subtract_multiply_scale(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        b = np.array([[10.0, 20.0], [30.0, 40.0]])
        np.testing.assert_array_equal(tensor.add(a, b), a + b)
        np.testing.assert_array_equal(tensor.subtract(b, a), b - a)
        np.testing.assert_array_equal(tensor.multiply(a, b), a * b)
        np.testing.assert_array_equal(tensor.scale(a, 2.5), a * 2.5)

    def test_shape_mismatch_rejected(self):
        for op in (tensor.add, tensor.subtract, tensor.multiply):
            with pytest.raises(ShapeMismatchError):
                op(np.ones((2, 2)), np.ones((2, 3)))

    def test_no_broadcasting(self):
        # Same-shape contract: a scalar-shaped array is not silently broadcast.
        with pytest.raises(ShapeMismatchError):
            tensor.add(np.ones((2, 2)), np.ones(()))
