"""Exact commutative-ring scalars: rationals and multivariate polynomials.

Every tensor cell in this package is a :class:`PolyScalar`, a polynomial
with rational coefficients over named parameters.  Working symbolically
means equality checks between two computation paths are exact; there is no
tolerance anywhere in the library.

Representation
--------------
A polynomial is stored as a dict mapping monomials to coefficients:

    alpha^2*beta + 5/2   ->   {(("alpha", 2), ("beta", 1)): 1, (): Fraction(5, 2)}

A monomial is a tuple of ``(name, power)`` pairs, sorted by name, with every
power >= 1 (absent name = power 0).  Coefficients are ``int`` or
``fractions.Fraction`` and never zero; Fractions that reduce to integers are
stored as ``int`` to keep the common integer-only arithmetic fast.  The zero
polynomial is the empty dict.  This form is canonical: two PolyScalars are
equal iff their term dicts are equal.

For serialization and evaluation, terms are ordered graded-lexicographically
(higher total degree first, ties broken by the exponent vector over the
lexicographically sorted parameter names), so text output and floating-point
evaluation are deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Union

#: Exact rational number used for coefficients and evaluation points.
Rational = Fraction

#: A monomial: ``(name, power)`` pairs sorted by name, powers >= 1.
Monomial = tuple[tuple[str, int], ...]

Coefficient = Union[int, Fraction]

#: Parameter bindings for evaluation.  Fraction/int values keep the result
#: exact; a float value makes the result a float (binary64).
Assignment = Mapping[str, Union[int, Fraction, float]]


class UnboundParameter(ValueError):
    """A parameter of the polynomial has no value in the assignment."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no value bound for parameter {name!r}")


class ExprSyntaxError(ValueError):
    """Malformed expression text, with the offset where parsing failed."""

    def __init__(self, position: int, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"at offset {position}: expected {expected}, found {found}")


class NegativeExponent(ValueError):
    """Exponents must be nonnegative integers; the grammar has no inverses."""

    def __init__(self, position: int):
        self.position = position
        super().__init__(f"at offset {position}: negative exponent is not allowed")


def _as_coefficient(value: int | Fraction) -> Coefficient:
    """Normalize a coefficient: Fractions with denominator 1 become ints."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return value
    return value


class PolyScalar:
    """An immutable exact multivariate polynomial.

    Supports ``+``, ``-``, ``*`` and ``**`` with other PolyScalars and with
    plain ``int``/``Fraction`` values.  ``str()`` returns the canonical text
    form, which :func:`parse_expr` reads back.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, int | Fraction] | None = None):
        normalized: dict[Monomial, Coefficient] = {}
        if terms:
            for mono, coeff in terms.items():
                merged: dict[str, int] = {}
                for name, power in mono:
                    if power < 0:
                        raise ValueError(f"negative power {power} for {name!r}")
                    merged[name] = merged.get(name, 0) + power
                key = tuple(sorted((n, p) for n, p in merged.items() if p != 0))
                value = _as_coefficient(Fraction(coeff) if not isinstance(coeff, (int, Fraction)) else coeff)
                if key in normalized:
                    value = _as_coefficient(normalized[key] + value)
                if value == 0:
                    normalized.pop(key, None)
                else:
                    normalized[key] = value
        self._terms = normalized

    @classmethod
    def _raw(cls, terms: dict[Monomial, Coefficient]) -> "PolyScalar":
        """Wrap an already-canonical term dict without re-normalizing."""
        p = cls.__new__(cls)
        p._terms = terms
        return p

    @classmethod
    def zero(cls) -> "PolyScalar":
        return cls._raw({})

    @classmethod
    def constant(cls, value: int | Fraction) -> "PolyScalar":
        coeff = _as_coefficient(value if isinstance(value, (int, Fraction)) else Fraction(value))
        return cls._raw({(): coeff} if coeff != 0 else {})

    @classmethod
    def parameter(cls, name: str) -> "PolyScalar":
        return cls._raw({((name, 1),): 1})

    @classmethod
    def monomial(cls, coeff: int | Fraction, powers: Mapping[str, int]) -> "PolyScalar":
        return cls({tuple(powers.items()): coeff})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def parameters(self) -> set[str]:
        """Names of all parameters appearing with nonzero power."""
        return {name for mono in self._terms for name, _ in mono}

    def total_degree(self) -> int:
        """Maximum total degree over all terms; 0 for the zero polynomial."""
        if not self._terms:
            return 0
        return max(sum(p for _, p in mono) for mono in self._terms)

    def terms(self) -> list[tuple[Monomial, Coefficient]]:
        """Terms in canonical (graded-lex descending) order."""
        names = sorted({name for mono in self._terms for name, _ in mono})
        index = {name: i for i, name in enumerate(names)}

        def grade(mono: Monomial) -> tuple[int, tuple[int, ...]]:
            vector = [0] * len(names)
            for name, power in mono:
                vector[index[name]] = power
            return (sum(vector), tuple(vector))

        return [(m, self._terms[m]) for m in sorted(self._terms, key=grade, reverse=True)]

    # -- ring operations -------------------------------------------------

    @staticmethod
    def _coerce(value: object) -> "PolyScalar | None":
        if isinstance(value, PolyScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return PolyScalar.constant(value)
        return None

    def __add__(self, other: object) -> "PolyScalar":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        if not self._terms:
            return rhs
        if not rhs._terms:
            return self
        out = dict(self._terms)
        for mono, coeff in rhs._terms.items():
            total = _as_coefficient(out.get(mono, 0) + coeff)
            if total == 0:
                out.pop(mono, None)
            else:
                out[mono] = total
        return PolyScalar._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "PolyScalar":
        return PolyScalar._raw({mono: -coeff for mono, coeff in self._terms.items()})

    def __sub__(self, other: object) -> "PolyScalar":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> "PolyScalar":
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def __mul__(self, other: object) -> "PolyScalar":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        a, b = self._terms, rhs._terms
        if not a or not b:
            return _ZERO
        if len(a) == 1 and len(b) == 1:
            # Monomial times monomial: the overwhelmingly common case for
            # network totals, worth the dedicated path.
            (ma, ca), = a.items()
            (mb, cb), = b.items()
            return PolyScalar._raw({_merge_monomials(ma, mb): _as_coefficient(ca * cb)})
        out: dict[Monomial, Coefficient] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                mono = _merge_monomials(ma, mb)
                total = _as_coefficient(out.get(mono, 0) + ca * cb)
                if total == 0:
                    out.pop(mono, None)
                else:
                    out[mono] = total
        return PolyScalar._raw(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "PolyScalar":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {exponent!r}")
        result = _ONE
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._terms == rhs._terms

    def __hash__(self) -> int:
        if not self._terms:
            return hash(0)
        if len(self._terms) == 1 and () in self._terms:
            return hash(self._terms[()])
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- evaluation ------------------------------------------------------

    def evaluate(self, assignment: Assignment) -> int | Fraction | float:
        """Evaluate with every parameter bound in ``assignment``.

        Terms are summed in canonical order, so a result involving floats is
        deterministic.  With only int/Fraction bindings the result is exact.

        Raises:
            UnboundParameter: a parameter of the polynomial has no binding.
        """
        total: int | Fraction | float = 0
        for mono, coeff in self.terms():
            value: int | Fraction | float = coeff
            for name, power in mono:
                if name not in assignment:
                    raise UnboundParameter(name)
                value = value * assignment[name] ** power
            total = total + value
        return total

    # -- text form -------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for i, (mono, coeff) in enumerate(self.terms()):
            negative = coeff < 0
            magnitude = -coeff if negative else coeff
            factors = []
            if magnitude != 1 or not mono:
                factors.append(str(magnitude))
            factors.extend(name if power == 1 else f"{name}^{power}" for name, power in mono)
            if i == 0 and negative and not factors[0][0].isdigit() and mono[0][1] > 1:
                # A leading "-name^k" would parse as (-name)^k; pin the -1.
                factors.insert(0, "1")
            body = "*".join(factors)
            if i == 0:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"PolyScalar({str(self)!r})"


_ZERO = PolyScalar.zero()
_ONE = PolyScalar.constant(1)


def _merge_monomials(a: Monomial, b: Monomial) -> Monomial:
    """Multiply two monomials by adding powers of matching names."""
    if not a:
        return b
    if not b:
        return a
    merged: list[tuple[str, int]] = []
    i = j = 0
    while i < len(a) and j < len(b):
        na, pa = a[i]
        nb, pb = b[j]
        if na == nb:
            merged.append((na, pa + pb))
            i += 1
            j += 1
        elif na < nb:
            merged.append(a[i])
            i += 1
        else:
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged)


# ---------------------------------------------------------------------------
# Expression parsing
#
# expr   := term (('+'|'-') term)*
# term   := factor ('*' factor)*
# factor := atom ('^' uint)?
# atom   := uint | uint '/' uint | ident | '(' expr ')' | '-' atom
# ident  := [A-Za-z_][A-Za-z0-9_]*
#
# Whitespace is insignificant.  Division appears only between integer
# literals (rational constants); general division and negative exponents are
# rejected.
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, expected: str) -> "ExprSyntaxError":
        found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
        return ExprSyntaxError(self.pos, expected, found)

    def take_uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.fail("an unsigned integer")
        return int(self.text[start : self.pos])

    def take_ident(self) -> str:
        self.skip_ws()
        start = self.pos
        ch = self.text[self.pos] if self.pos < len(self.text) else ""
        if not (ch.isalpha() or ch == "_"):
            raise self.fail("an identifier")
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start : self.pos]

    def expr(self) -> PolyScalar:
        value = self.term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                value = value + self.term()
            elif ch == "-":
                self.pos += 1
                value = value - self.term()
            else:
                return value

    def term(self) -> PolyScalar:
        value = self.factor()
        while self.peek() == "*":
            self.pos += 1
            value = value * self.factor()
        return value

    def factor(self) -> PolyScalar:
        value = self.atom()
        if self.peek() == "^":
            self.pos += 1
            if self.peek() == "-":
                raise NegativeExponent(self.pos)
            value = value ** self.take_uint()
        return value

    def atom(self) -> PolyScalar:
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return -self.atom()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                raise self.fail("')'")
            self.pos += 1
            return value
        if ch.isdigit():
            numerator = self.take_uint()
            if self.peek() == "/":
                self.pos += 1
                mark = self.pos
                denominator = self.take_uint()
                if denominator == 0:
                    raise ExprSyntaxError(mark, "a nonzero denominator", "0")
                return PolyScalar.constant(Fraction(numerator, denominator))
            return PolyScalar.constant(numerator)
        if ch.isalpha() or ch == "_":
            return PolyScalar.parameter(self.take_ident())
        raise self.fail("an integer, identifier, '(' or '-'")


def parse_expr(text: str) -> PolyScalar:
    """Parse expression text into a canonical :class:`PolyScalar`.

    ``parse_expr(str(p)) == p`` holds for every PolyScalar ``p``.

    Raises:
        ExprSyntaxError: the text does not conform to the grammar.
        NegativeExponent: a ``^`` is followed by a minus sign.
    """
    parser = _Parser(text)
    value = parser.expr()
    parser.skip_ws()
    if parser.pos != len(text):
        raise parser.fail("end of input")
    return value
