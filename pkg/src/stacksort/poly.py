"""Sparse multivariate polynomials with exact integer coefficients."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

Exps = tuple[int, ...]


class MultiPoly:
    """Polynomial in a fixed number of variables, stored as {exponent vector: coefficient}.

    Zero coefficients are never stored.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms", "_compiled")

    def __init__(self, nvars: int, terms: Mapping[Exps, int] | Iterable[tuple[Exps, int]] = ()):
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exps, int] = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            acc[e] = acc.get(e, 0) + c
        self.terms = {e: c for e, c in acc.items() if c}
        self._compiled = None

    # constructors

    @classmethod
    def constant(cls, c: int, nvars: int) -> MultiPoly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i: int, nvars: int) -> MultiPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> MultiPoly:
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def univariate(cls, coeffs: Sequence[int]) -> MultiPoly:
        """From a coefficient list, constant term first."""
        return cls(1, {(i,): c for i, c in enumerate(coeffs)})

    # basic queries

    def __eq__(self, other):
        if isinstance(other, int):
            other = MultiPoly.constant(other, self.nvars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    @property
    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=0)

    def coefficients(self) -> list[int]:
        """Dense coefficient list of a univariate polynomial, constant term first."""
        if self.nvars != 1:
            raise ValueError("coefficients() needs a univariate polynomial")
        out = [0] * (self.total_degree() + 1)
        for (d,), c in self.terms.items():
            out[d] = c
        return out

    # arithmetic

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, int):
            return MultiPoly.constant(other, self.nvars)
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars}")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Exps, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.constant(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def exact_div(self, other: MultiPoly) -> MultiPoly:
        """Quotient of a division known to be exact (lex-order long division)."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_e = max(other.terms)
        lead_c = other.terms[lead_e]
        rem = dict(self.terms)
        quot: dict[Exps, int] = {}
        while rem:
            e = max(rem)
            c = rem[e]
            shift = tuple(a - b for a, b in zip(e, lead_e))
            if any(s < 0 for s in shift) or c % lead_c:
                raise ValueError("polynomial division is not exact")
            q = c // lead_c
            quot[shift] = q
            for oe, oc in other.terms.items():
                t = tuple(a + b for a, b in zip(oe, shift))
                v = rem.get(t, 0) - q * oc
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return MultiPoly(self.nvars, quot)

    # substitution and evaluation

    def substitute(self, weights: Sequence[int]) -> MultiPoly:
        """Univariate image under x_i -> x**weights[i]."""
        if len(weights) != self.nvars:
            raise ValueError("one weight per variable required")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        return MultiPoly(1, [((sum(a * w for a, w in zip(e, weights)),), c) for e, c in self.terms.items()])

    def identify(self, groups: Sequence[Sequence[int]]) -> MultiPoly:
        """Merge variables: every variable of ``groups[j]`` becomes new variable j."""
        target = {}
        for j, g in enumerate(groups):
            for i in g:
                if i in target:
                    raise ValueError(f"variable {i} in two groups")
                target[i] = j
        if sorted(target) != list(range(self.nvars)):
            raise ValueError("groups must cover every variable exactly once")
        terms = []
        for e, c in self.terms.items():
            ne = [0] * len(groups)
            for i, a in enumerate(e):
                ne[target[i]] += a
            terms.append((tuple(ne), c))
        return MultiPoly(len(groups), terms)

    def derivative(self, i: int) -> MultiPoly:
        terms = []
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms.append((tuple(ne), c * e[i]))
        return MultiPoly(self.nvars, terms)

    def _arrays(self):
        if self._compiled is None:
            keys = sorted(self.terms)
            exps = np.array(keys, dtype=float).reshape(len(keys), self.nvars)
            coeffs = np.array([float(self.terms[e]) for e in keys])
            self._compiled = (exps, coeffs)
        return self._compiled

    def __call__(self, *point: float) -> float:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates")
        if not self.terms:
            return 0.0
        exps, coeffs = self._arrays()
        return float(coeffs @ np.prod(np.asarray(point, dtype=float) ** exps, axis=1))

    def along_ray(self, direction: Sequence[float]) -> list[float]:
        """Coefficients (constant first) of t -> self(t * direction)."""
        out = [0.0] * (self.total_degree() + 1)
        for e, c in self.terms.items():
            out[sum(e)] += c * float(np.prod([d**a for d, a in zip(direction, e)]))
        return out

    # text and JSON

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.terms!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        names = ["x"] if self.nvars == 1 else [f"x{i + 1}" for i in range(self.nvars)]
        pieces = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-a for a in e))):
            c = self.terms[e]
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a)
            mag = abs(c)
            body = mono if mono and mag == 1 else (f"{mag}*{mono}" if mono else str(mag))
            pieces.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[1:]

    def to_json(self) -> list[dict]:
        return [{"exponents": list(e), "coeff": self.terms[e]} for e in sorted(self.terms)]

    @classmethod
    def from_json(cls, data: list[dict], nvars: int | None = None) -> MultiPoly:
        if nvars is None:
            if not data:
                raise ValueError("cannot infer arity of an empty polynomial")
            nvars = len(data[0]["exponents"])
        return cls(nvars, [(tuple(t["exponents"]), int(t["coeff"])) for t in data])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def bareiss_det(matrix: list[list[MultiPoly]]) -> MultiPoly:
    """Fraction-free determinant of a square polynomial matrix."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    nvars = matrix[0][0].nvars
    m = [row[:] for row in matrix]
    sign = 1
    prev = MultiPoly.constant(1, nvars)
    for p in range(n - 1):
        if m[p][p].is_zero():
            swap = next((r for r in range(p + 1, n) if not m[r][p].is_zero()), None)
            if swap is None:
                return MultiPoly(nvars)
            m[p], m[swap] = m[swap], m[p]
            sign = -sign
        for i in range(p + 1, n):
            for j in range(p + 1, n):
                m[i][j] = (m[i][j] * m[p][p] - m[i][p] * m[p][j]).exact_div(prev)
        prev = m[p][p]
    return m[n - 1][n - 1] * sign


@dataclass(frozen=True)
class RationalGF:
    numerator: MultiPoly
    denominator: MultiPoly

    def __post_init__(self):
        if self.numerator.nvars != self.denominator.nvars:
            raise ValueError("numerator and denominator arities differ")
        if self.denominator.constant_term == 0:
            raise ValueError("denominator needs a nonzero constant term")

    @property
    def nvars(self) -> int:
        return self.denominator.nvars

    def substitute(self, weights: Sequence[int]) -> RationalGF:
        return RationalGF(self.numerator.substitute(weights), self.denominator.substitute(weights))

    def identify(self, groups: Sequence[Sequence[int]]) -> RationalGF:
        return RationalGF(self.numerator.identify(groups), self.denominator.identify(groups))

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> RationalGF:
        n = data["nvars"]
        return cls(MultiPoly.from_json(data["numerator"], n), MultiPoly.from_json(data["denominator"], n))

    def __str__(self):
        return f"({self.numerator}) / ({self.denominator})"
