#!/usr/bin/env python3
"""A five-node network loaded from its JSON document.

Topology: b -> c, b -> d, c -> d, d -> e, c -> a, e -> a.  The two-parent
nodes use the quantum threshold rule (fire iff some parent fired, with a
disobedience weight beta); the single-parent nodes copy-or-flip.  Every cell
of the 2^5 total tensor is a degree-5 monomial in alpha and beta.
"""

from collections import Counter
from pathlib import Path

from tensordag import (parse_network, serialize_tensor, stochastic_report,
                       topological_order, total_bmp, total_direct, validate)

document = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "five_node.json"
spec = parse_network(document.read_text())

print("# validation and ordering")
print("violations:", validate(spec))
print("topological order:", topological_order(spec.node_ids(), spec.edges()))
print("stochastic?", {c.node: c.stochastic for c in stochastic_report(spec)})

print()
print("# both total-tensor routes, compared exactly")
direct = total_direct(spec)
via_product = total_bmp(spec)
print("routes agree on all 32 cells?", direct == via_product)

print()
print("# the totals, cell by cell (1-based indices)")
print(serialize_tensor(direct), end="")

print()
print("# how the 32 monomials distribute over the degree split")
histogram = Counter(str(cell) for cell in direct.cells)
for expr, count in sorted(histogram.items()):
    print(f"  {expr:<16} x {count}")
