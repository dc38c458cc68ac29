#!/usr/bin/env python3
"""Exact polynomial scalars: build, parse, simplify, evaluate.

Every value in this package is a polynomial with rational coefficients over
named parameters, so equality between two computations is decided exactly,
never within a tolerance.
"""

from fractions import Fraction

from tensordag import PolyScalar, parse_expr

alpha = PolyScalar.parameter("alpha")
beta = PolyScalar.parameter("beta")

print("# building polynomials from parameters")
p = (alpha + beta) ** 2
print("(alpha + beta)^2          =", p)
print("expanded minus cross term =", p - 2 * alpha * beta)

print()
print("# the same polynomial from text")
q = parse_expr("alpha^2 + 2*alpha*beta + beta^2")
print("parse_expr round trip     =", q)
print("equal to the built value? ", p == q)

print()
print("# rational coefficients stay exact")
r = parse_expr("1/3*alpha + 1/6*alpha")
print("1/3*alpha + 1/6*alpha     =", r)

print()
print("# cancellation reaches the canonical zero")
print("alpha - alpha             =", alpha - alpha)

print()
print("# evaluation: exact with rational bindings, float with float bindings")
print("p at alpha=1/2, beta=1/2  =", p.evaluate({"alpha": Fraction(1, 2), "beta": Fraction(1, 2)}))
print("p at alpha=0.25, beta=3   =", p.evaluate({"alpha": 0.25, "beta": 3}))

print()
print("# serialization is canonical: graded order, ties broken lexicographically")
messy = parse_expr("beta + alpha^3 + alpha*beta + 1")
print("canonical text            =", messy)
