#!/usr/bin/env python3
"""Blow and forget: the two order-raising expansions behind node tensors.

``blow`` appends an axis tied to axis 0 (off-diagonal cells vanish);
``forget`` inserts axes the tensor simply ignores.  Together they embed a
small activation tensor into the order-d space of a whole network.
"""

from tensordag import Tensor, blow, forget, outer_product, serialize_tensor

m = Tensor.from_nested([["a", "b"], ["c", "d"]])

print("# blow of a 2x2 matrix: order 3, new last axis locked to the first")
print(serialize_tensor(blow(m)))

print("# blow of a vector is the diagonal matrix carrying it")
print(serialize_tensor(blow(Tensor.vector(["alpha", "beta"]))))

print("# forget inserts an axis the result does not depend on:")
print("# here a trailing axis, so front and back faces repeat the matrix")
print(serialize_tensor(forget(m, [2], 2)))

print("# inserting in the middle instead")
print(serialize_tensor(forget(m, [1], 2)))

print("# on rank-1 tensors, forget inserts all-ones directions ...")
v1, v2 = Tensor.vector([2, 3]), Tensor.vector([5, 7])
ones = Tensor.vector([1, 1])
print("forget == outer with ones?",
      forget(outer_product([v1, v2]), [1], 2) == outer_product([v1, ones, v2]))

print()
print("# ... while blow generally breaks rank 1: it scatters the first")
print("# factor's weights along a diagonal")
print(serialize_tensor(blow(outer_product([v1, v2]))))
