"""Tensor construction, the d-ary product, identitaries, transposes, blow/forget."""

import random
from itertools import permutations, product

import pytest

from tensordag import (CardinalityMismatch, OrderMismatch, Permutation, PolyScalar,
                       PositionOutOfRange, ShapeMismatch, SlotOutOfRange, Tensor,
                       blow, bmp, forget, identitary, outer_product, parse_expr,
                       sigma_transpose, summand_ordered_bmp)
from golden import (ALPHA, BETA, CONFIRMED_PRODUCT_CELLS, COUNTING_CUBE_PRODUCT,
                    REJECTED_PRODUCT_CELLS, counting_cube, random_int_tensor)


def brute_force_triple_product(f0, f1, f2):
    """Independent reference for the 3-ary product: bare loops, no strides.

    Contraction axes: f0 in axis 1, f1 in axis 2, f2 in axis 0, so

        cell[i, j, k] = sum over h of f0[i, h, k] * f1[i, j, h] * f2[h, j, k]
    """
    shape = (f0.shape[0], f1.shape[1], f2.shape[2])
    l = f0.shape[1]
    cells = {}
    for i, j, k in product(*(range(dim) for dim in shape)):
        total = PolyScalar.zero()
        for h in range(l):
            total = total + f0[(i, h, k)] * f1[(i, j, h)] * f2[(h, j, k)]
        cells[(i, j, k)] = total
    return cells


def naive_matmul(a, b):
    rows, inner = a.shape
    inner2, cols = b.shape
    assert inner == inner2
    out = []
    for i in range(rows):
        for j in range(cols):
            acc = PolyScalar.zero()
            for k in range(inner):
                acc = acc + a[(i, k)] * b[(k, j)]
            out.append(acc)
    return Tensor((rows, cols), out)


class TestTensorBasics:
    def test_row_major_layout(self):
        t = Tensor((2, 3), [1, 2, 3, 4, 5, 6])
        assert t[(0, 0)] == 1 and t[(0, 2)] == 3 and t[(1, 0)] == 4
        assert list(t.indices())[:4] == [(0, 0), (0, 1), (0, 2), (1, 0)]

    def test_from_nested(self):
        t = Tensor.from_nested([[[1, 2], [3, 4]], [[5, 6], [7, 8]]])
        assert t.shape == (2, 2, 2)
        assert t[(1, 0, 1)] == 6

    def test_cells_accept_strings(self):
        t = Tensor.vector(["alpha", "2*beta"])
        assert t[(0,)] == ALPHA and t[(1,)] == 2 * BETA

    def test_cell_count_must_match_shape(self):
        with pytest.raises(ValueError):
            Tensor((2, 2), [1, 2, 3])

    def test_order_zero_rejected(self):
        with pytest.raises(ValueError):
            Tensor((), [1])

    def test_bad_dimension_rejected(self):
        with pytest.raises(ValueError):
            Tensor((2, 0), [])

    def test_index_bounds(self):
        t = Tensor((2, 2), [1, 2, 3, 4])
        with pytest.raises(IndexError):
            t[(2, 0)]
        with pytest.raises(IndexError):
            t[(0, 0, 0)]

    def test_equality_is_exact(self):
        assert Tensor.vector([ALPHA]) == Tensor.vector([parse_expr("alpha")])
        assert Tensor.vector([ALPHA]) != Tensor.vector([BETA])

    def test_immutability(self):
        t = Tensor((2,), [1, 2])
        with pytest.raises(AttributeError):
            t.shape = (3,)


class TestPermutation:
    def test_must_be_a_bijection(self):
        with pytest.raises(ValueError):
            Permutation((0, 0, 2))

    def test_inverse_composes_to_identity(self):
        sigma = Permutation((2, 0, 1))
        inv = sigma.inverse()
        assert all(inv(sigma(k)) == k for k in range(3))
        assert Permutation.identity(3).images == (0, 1, 2)

    def test_involution_detection(self):
        assert Permutation((1, 0, 2)).is_involution()
        assert not Permutation((1, 2, 0)).is_involution()


class TestProduct:
    def test_two_by_two_matrix_product(self):
        a = Tensor.from_nested([[1, 2], [3, 4]])
        b = Tensor.from_nested([[5, 6], [7, 8]])
        assert bmp([a, b]) == Tensor.from_nested([[19, 22], [43, 50]])

    def test_rectangular_matrix_product(self):
        rng = random.Random(11)
        for _ in range(20):
            rows, inner, cols = (rng.randint(1, 4) for _ in range(3))
            a = random_int_tensor(rng, (rows, inner))
            b = random_int_tensor(rng, (inner, cols))
            assert bmp([a, b]) == naive_matmul(a, b)

    def test_matrix_degeneration_on_random_square_pairs(self):
        rng = random.Random(23)
        for _ in range(60):
            n = rng.randint(1, 5)
            a = random_int_tensor(rng, (n, n))
            b = random_int_tensor(rng, (n, n))
            assert bmp([a, b]) == naive_matmul(a, b)

    def test_counting_cubes_match_brute_force(self):
        factors = [counting_cube(9), counting_cube(17), counting_cube(1)]
        result = bmp(factors)
        oracle = brute_force_triple_product(*factors)
        for idx, value in oracle.items():
            assert result[idx] == value

    def test_counting_cubes_confirmed_cells(self):
        result = bmp([counting_cube(9), counting_cube(17), counting_cube(1)])
        for idx, value in CONFIRMED_PRODUCT_CELLS.items():
            assert result[idx] == value

    def test_counting_cubes_full_table(self):
        result = bmp([counting_cube(9), counting_cube(17), counting_cube(1)])
        for idx, value in COUNTING_CUBE_PRODUCT.items():
            assert result[idx] == value

    def test_rejected_renderings_are_not_reproduced(self):
        # These four values circulate for the same product but contradict the
        # definition on every cyclic slot assignment; make sure no code change
        # quietly starts producing them.
        result = bmp([counting_cube(9), counting_cube(17), counting_cube(1)])
        for idx, wrong in REJECTED_PRODUCT_CELLS.items():
            assert result[idx] != wrong

    def test_single_factor_is_identity(self):
        v = Tensor.vector([ALPHA, BETA])
        assert bmp([v]) == v
        assert summand_ordered_bmp([v]) == v

    def test_summand_order_is_a_rotation(self):
        rng = random.Random(5)
        us = [random_int_tensor(rng, (2, 2, 2)) for _ in range(3)]
        assert summand_ordered_bmp(us) == bmp([us[1], us[2], us[0]])

    def test_empty_argument_list_rejected(self):
        with pytest.raises(OrderMismatch):
            bmp([])

    def test_wrong_order_rejected(self):
        with pytest.raises(OrderMismatch):
            bmp([Tensor.vector([1, 2]), Tensor.from_nested([[1, 2], [3, 4]])])

    def test_contracted_dimension_mismatch(self):
        a = Tensor.from_nested([[1, 2, 3], [4, 5, 6]])  # 2 x 3
        b = Tensor.from_nested([[1, 2], [3, 4]])        # 2 x 2
        with pytest.raises(ShapeMismatch) as info:
            bmp([a, b])
        assert info.value.arg is not None

    def test_shared_dimension_mismatch(self):
        rng = random.Random(1)
        a = random_int_tensor(rng, (2, 2, 2))
        b = random_int_tensor(rng, (2, 2, 2))
        c = random_int_tensor(rng, (2, 2, 3))  # axis 2 disagrees where not contracted
        with pytest.raises(ShapeMismatch):
            bmp([a, c, b])

    def test_multilinearity_in_each_slot(self):
        rng = random.Random(17)
        for d in (2, 3):
            base = [random_int_tensor(rng, (2,) * d) for _ in range(d)]
            for slot in range(d):
                x = random_int_tensor(rng, (2,) * d)
                y = random_int_tensor(rng, (2,) * d)
                combined = Tensor(x.shape, [3 * a + b for a, b in zip(x.cells, y.cells)])
                with_x = bmp([combined if k == slot else t for k, t in enumerate(base)])
                fx = bmp([x if k == slot else t for k, t in enumerate(base)])
                fy = bmp([y if k == slot else t for k, t in enumerate(base)])
                expected = Tensor(fx.shape, [3 * a + b for a, b in zip(fx.cells, fy.cells)])
                assert with_x == expected

    def test_pinned_noncommutativity_counterexample(self):
        a = Tensor((2, 2, 2), [1, 1, 0, 1, 2, 1, 1, 1])
        b = Tensor((2, 2, 2), [1, 1, 2, 0, 2, 0, 1, 0])
        c = Tensor((2, 2, 2), [0, 2, 1, 2, 2, 2, 0, 1])
        left = bmp([a, b, c])
        right = bmp([b, a, c])
        assert left.cells[0] == 0 and right.cells[0] == 4
        assert left != right

    def test_pinned_nonassociativity_counterexample(self):
        a = Tensor((2, 2, 2), [1, 1, 0, 1, 2, 1, 1, 1])
        b = Tensor((2, 2, 2), [1, 1, 2, 0, 2, 0, 1, 0])
        c = Tensor((2, 2, 2), [0, 2, 1, 2, 2, 2, 0, 1])
        d = Tensor((2, 2, 2), [0, 2, 0, 2, 1, 1, 2, 0])
        e = Tensor((2, 2, 2), [1, 1, 1, 2, 2, 0, 2, 1])
        nested_left = bmp([bmp([a, b, c]), d, e])
        nested_right = bmp([a, b, bmp([c, d, e])])
        assert nested_left.cells[0] == 8 and nested_right.cells[0] == 4
        assert nested_left != nested_right


class TestIdentitary:
    def test_order_two_is_the_identity_matrix(self):
        assert identitary(2, 2, 0, 1) == Tensor.from_nested([[1, 0], [0, 1]])

    def test_order_three_pattern(self):
        t = identitary(3, 2, 0, 2)
        ones = {idx for idx in t.indices() if t[idx] == 1}
        assert ones == {(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)}

    def test_number_of_ones_by_enumeration(self):
        t = identitary(3, 3, 1, 2)
        expected = sum(1 for idx in product(range(3), repeat=3) if idx[1] == idx[2])
        assert expected == 9
        assert sum(1 for c in t.cells if c == 1) == expected

    def test_slot_validation(self):
        with pytest.raises(SlotOutOfRange):
            identitary(3, 2, 2, 1)
        with pytest.raises(SlotOutOfRange):
            identitary(3, 2, 0, 3)
        with pytest.raises(SlotOutOfRange):
            identitary(2, 2, 1, 1)

    def test_sandwich_returns_the_tensor_unchanged(self):
        rng = random.Random(31)
        for d in (2, 3, 4):
            for n in (2, 3):
                for j in range(d):
                    a = random_int_tensor(rng, (n,) * d)
                    factors = [a if m == j else identitary(d, n, min(m, j), max(m, j))
                               for m in range(d)]
                    assert summand_ordered_bmp(factors) == a


class TestSigmaTranspose:
    def test_identity_permutation(self):
        rng = random.Random(3)
        t = random_int_tensor(rng, (2, 3, 2))
        assert sigma_transpose(t, Permutation.identity(3)) == t

    def test_matrix_transpose(self):
        t = Tensor.from_nested([[1, 2], [3, 4]])
        assert sigma_transpose(t, Permutation((1, 0))) == Tensor.from_nested([[1, 3], [2, 4]])

    def test_index_relabeling(self):
        cube = counting_cube(1)
        swapped = sigma_transpose(cube, Permutation((1, 0, 2)))
        # the cell at (1,0,0) picks up the source cell at (0,1,0)
        assert swapped[(1, 0, 0)] == cube[(0, 1, 0)] == 2
        for idx in swapped.indices():
            assert swapped[idx] == cube[(idx[1], idx[0], idx[2])]

    def test_rectangular_shape_follows_the_relabeling(self):
        t = Tensor.from_nested([[1, 2, 3], [4, 5, 6]])  # 2 x 3
        flipped = sigma_transpose(t, Permutation((1, 0)))
        assert flipped.shape == (3, 2)
        sigma = Permutation((1, 2, 0))
        rng = random.Random(9)
        s = random_int_tensor(rng, (2, 3, 4))
        moved = sigma_transpose(s, sigma)
        for idx in moved.indices():
            assert moved[idx] == s[tuple(idx[sigma(m)] for m in range(3))]

    def test_order_mismatch(self):
        with pytest.raises(OrderMismatch):
            sigma_transpose(Tensor.vector([1, 2]), Permutation((1, 0)))

    def test_transposition_law_with_inverse_reindexing(self):
        # Transposing the product equals the product of the transposes taken
        # in sigma^{-1} order of the summand positions.
        rng = random.Random(41)
        for d in (2, 3):
            for images in permutations(range(d)):
                sigma = Permutation(images)
                inv = sigma.inverse()
                for n in (2, 3):
                    us = [random_int_tensor(rng, (n,) * d) for _ in range(d)]
                    lhs = sigma_transpose(summand_ordered_bmp(us), sigma)
                    rhs = summand_ordered_bmp(
                        [sigma_transpose(us[inv(k)], sigma) for k in range(d)])
                    assert lhs == rhs

    def test_transposition_law_plain_form_for_involutions(self):
        rng = random.Random(43)
        for d in (2, 3):
            for images in permutations(range(d)):
                sigma = Permutation(images)
                if not sigma.is_involution():
                    continue
                us = [random_int_tensor(rng, (3,) * d) for _ in range(d)]
                lhs = sigma_transpose(summand_ordered_bmp(us), sigma)
                rhs = summand_ordered_bmp(
                    [sigma_transpose(us[sigma(k)], sigma) for k in range(d)])
                assert lhs == rhs

    def test_plain_form_fails_for_some_non_involution(self):
        # keeps the necessity of the inverse reindexing honest
        rng = random.Random(47)
        sigma = Permutation((1, 2, 0))
        broken = 0
        for _ in range(10):
            us = [random_int_tensor(rng, (2, 2, 2)) for _ in range(3)]
            lhs = sigma_transpose(summand_ordered_bmp(us), sigma)
            rhs = summand_ordered_bmp([sigma_transpose(us[sigma(k)], sigma) for k in range(3)])
            broken += lhs != rhs
        assert broken > 0


class TestBlow:
    def test_matrix_blow(self):
        m = Tensor.from_nested([["a", "b"], ["c", "d"]])
        t = blow(m)
        assert t.shape == (2, 2, 2)
        nonzero = {idx: str(t[idx]) for idx in t.indices() if not t[idx].is_zero()}
        assert nonzero == {(0, 0, 0): "a", (0, 1, 0): "b", (1, 0, 1): "c", (1, 1, 1): "d"}

    def test_vector_blow_is_a_diagonal_matrix(self):
        assert blow(Tensor.vector([ALPHA, BETA])) == Tensor.from_nested(
            [[ALPHA, 0], [0, BETA]])

    def test_rank_one_blow_closed_form(self):
        rng = random.Random(53)
        for _ in range(10):
            v1 = random_int_tensor(rng, (3,))
            v2 = random_int_tensor(rng, (2,))
            blown = blow(outer_product([v1, v2]))
            # sum over i of v1[i] * (e_i (x) v2 (x) e_i)
            expected = Tensor.from_function(
                (3, 2, 3),
                lambda idx: v1[(idx[0],)] * v2[(idx[1],)] if idx[0] == idx[2]
                else PolyScalar.zero())
            assert blown == expected

    def test_marginalizing_the_new_axis_recovers_the_input(self):
        rng = random.Random(59)
        t = random_int_tensor(rng, (2, 3))
        b = blow(t)
        for idx in t.indices():
            total = PolyScalar.zero()
            for h in range(b.shape[-1]):
                total = total + b[idx + (h,)]
            assert total == t[idx]

    def test_off_diagonal_cells_vanish(self):
        rng = random.Random(61)
        b = blow(random_int_tensor(rng, (3, 2)))
        for idx in b.indices():
            if idx[0] != idx[-1]:
                assert b[idx].is_zero()


class TestForget:
    def test_no_positions_is_identity(self):
        t = Tensor.from_nested([[1, 2], [3, 4]])
        assert forget(t, [], 2) is t

    def test_insert_trailing_axis_copies_faces(self):
        m = Tensor.from_nested([["a", "b"], ["c", "d"]])
        t = forget(m, [2], 2)
        assert t.shape == (2, 2, 2)
        for idx in m.indices():
            assert t[idx + (0,)] == m[idx] and t[idx + (1,)] == m[idx]

    def test_insert_middle_axis(self):
        m = Tensor.from_nested([["a", "b"], ["c", "d"]])
        t = forget(m, [1], 3)
        assert t.shape == (2, 3, 2)
        for i, j, k in t.indices():
            assert t[(i, j, k)] == m[(i, k)]

    def test_rank_one_forget_inserts_ones_vectors(self):
        rng = random.Random(67)
        v1 = random_int_tensor(rng, (2,))
        v2 = random_int_tensor(rng, (3,))
        ones = Tensor.vector([1, 1])
        assert forget(outer_product([v1, v2]), [1], 2) == outer_product([v1, ones, v2])

    def test_multiple_positions_with_mixed_dims(self):
        v = Tensor.vector([ALPHA, BETA])
        t = forget(v, [0, 2], [3, 4])
        assert t.shape == (3, 2, 4)
        for idx in t.indices():
            assert t[idx] == v[(idx[1],)]

    def test_position_out_of_range(self):
        v = Tensor.vector([1, 2])
        with pytest.raises(PositionOutOfRange):
            forget(v, [3], 2)
        with pytest.raises(PositionOutOfRange):
            forget(v, [-1], 2)
        with pytest.raises(PositionOutOfRange):
            forget(v, [1, 1], 2)

    def test_cardinality_mismatch(self):
        with pytest.raises(CardinalityMismatch):
            forget(Tensor.vector([1, 2]), [0, 1], [2])


class TestOuterProduct:
    def test_ones(self):
        assert outer_product([Tensor.vector([1]), Tensor.vector([1, 1])]) == Tensor(
            (1, 2), [1, 1])

    def test_two_parameter_square(self):
        v = Tensor.vector([ALPHA, BETA])
        expected = Tensor.from_nested([[ALPHA ** 2, ALPHA * BETA], [ALPHA * BETA, BETA ** 2]])
        assert outer_product([v, v]) == expected

    def test_triple_product_cell(self):
        v = Tensor.vector([ALPHA, BETA])
        cube = outer_product([v, v, v])
        assert cube[(0, 1, 1)] == ALPHA * BETA ** 2

    def test_requires_vectors(self):
        with pytest.raises(OrderMismatch):
            outer_product([Tensor.from_nested([[1, 2], [3, 4]])])
