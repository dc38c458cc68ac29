#!/usr/bin/env python3
"""The d-ary tensor product, its identity tensors, and transposes.

The product takes d tensors of order d and contracts one rotating axis per
factor over a shared index: factor k is contracted in axis (k+1) mod d.
At d = 2 it is exactly the matrix product.
"""

from tensordag import (Permutation, Tensor, bmp, identitary, sigma_transpose,
                       summand_ordered_bmp)

print("# d = 2: the ordinary matrix product")
a = Tensor.from_nested([[1, 2], [3, 4]])
b = Tensor.from_nested([[5, 6], [7, 8]])
print("rows of bmp([a, b]):", [[str(bmp([a, b])[(i, j)]) for j in (0, 1)] for i in (0, 1)])

print()
print("# d = 3: three cubes at once")
c1 = Tensor.from_function((2, 2, 2), lambda x: 1 + 4 * x[0] + 2 * x[2] + x[1])
c2 = Tensor.from_function((2, 2, 2), lambda x: 9 + 4 * x[0] + 2 * x[2] + x[1])
c3 = Tensor.from_function((2, 2, 2), lambda x: 17 + 4 * x[0] + 2 * x[2] + x[1])
cube = bmp([c2, c3, c1])
for idx in cube.indices():
    print(f"  cell {idx} = {cube[idx]}")

print()
print("# summand order lists the factor contracted in axis m at position m;")
print("# it is the same product after one cyclic rotation of the arguments")
print("equal?", summand_ordered_bmp([c1, c2, c3]) == bmp([c2, c3, c1]))

print()
print("# identitary tensors generalize the identity matrix: sandwiching any")
print("# tensor between them returns it unchanged")
t = Tensor.from_function((2, 2, 2), lambda x: 10 * x[0] + x[1] - x[2])
j = 1
factors = [t if m == j else identitary(3, 2, min(m, j), max(m, j)) for m in range(3)]
print("recovered exactly?", summand_ordered_bmp(factors) == t)

print()
print("# transposes relabel axes by a permutation")
sigma = Permutation((1, 0, 2))
moved = sigma_transpose(c1, sigma)
print("cell (1,0,0) of the transpose =", moved[(1, 0, 0)], "= source cell (0,1,0) =", c1[(0, 1, 0)])

print()
print("# transposing a product = product of transposes, reindexed by sigma^(-1)")
inv = sigma.inverse()
us = [c1, c2, c3]
lhs = sigma_transpose(summand_ordered_bmp(us), sigma)
rhs = summand_ordered_bmp([sigma_transpose(us[inv(k)], sigma) for k in range(3)])
print("law holds?", lhs == rhs)
