"""Generating functions for words avoiding a set of forbidden factors.

The Goulden-Jackson cluster method gives

    f = 1 / (1 - sum_a w(a) - sum_v C[v]),
    C[v] = -w(v) - sum_u sum_{o in overlaps(u, v)} w(v[o:]) * C[u],

where ``C[v]`` is the signed generating function of clusters whose last
word is ``v`` and ``overlaps(u, v)`` are the lengths of proper suffixes of
``u`` that are proper prefixes of ``v``.  The system is solved exactly,
one strongly connected component of the overlap graph at a time (see
``cluster_sum``).
"""

from __future__ import annotations

import re
from collections import Counter
from itertools import product
from typing import Iterable, Sequence

import networkx as nx

from .poly import MultiPoly, RationalGF

DEFAULT_BRUTE_CAP = 14


class CapExceeded(ValueError):
    pass


# -- letter weights ---------------------------------------------------------


def uniform_weights(num_letters: int) -> list[MultiPoly]:
    """Every letter weighted by the same variable x."""
    return [MultiPoly.var(0, 1)] * num_letters


def letter_weights(num_letters: int, groups: Sequence[Sequence[int]] | None = None) -> list[MultiPoly]:
    """One variable per letter, or one per group of letters sharing a weight.

    ``groups`` lists 0-based letter indices, e.g. ``[[0, 2], [1]]`` gives m1 and
    m3 the variable x1 and m2 the variable x2.
    """
    if groups is None:
        groups = [[i] for i in range(num_letters)]
    nvars = len(groups)
    out: list[MultiPoly | None] = [None] * num_letters
    for j, g in enumerate(groups):
        for i in g:
            out[i] = MultiPoly.var(j, nvars)
    if any(w is None for w in out):
        raise ValueError("every letter needs a weight")
    return out


def word_weight(word: str, weights: Sequence[MultiPoly]) -> MultiPoly:
    nvars = weights[0].nvars
    exps = [0] * nvars
    coeff = 1
    for ch in word:
        w = weights[int(ch) - 1]
        ((e, c),) = w.terms.items()
        exps = [a + b for a, b in zip(exps, e)]
        coeff *= c
    return MultiPoly(nvars, {tuple(exps): coeff})


# -- cluster method ---------------------------------------------------------


def overlaps(u: str, v: str) -> list[int]:
    """Lengths o with 1 <= o < min(|u|, |v|) and u[-o:] == v[:o]."""
    return [o for o in range(1, min(len(u), len(v))) if u[-o:] == v[:o]]


def _overlap_edges(words: list[str]) -> dict[tuple[int, int], list[int]]:
    """{(u, v): overlap lengths} for every ordered pair with a nonempty overlap."""
    by_prefix: dict[str, list[int]] = {}
    for b, v in enumerate(words):
        for o in range(1, len(v)):
            by_prefix.setdefault(v[:o], []).append(b)
    edges: dict[tuple[int, int], list[int]] = {}
    for a, u in enumerate(words):
        for o in range(1, len(u)):
            for b in by_prefix.get(u[-o:], ()):
                edges.setdefault((a, b), []).append(o)
    return edges


def _add_scaled(acc: dict, poly: MultiPoly, exps, coeff: int) -> None:
    # acc += coeff * x^exps * poly, in place
    for e, c in poly.terms.items():
        t = tuple(a + b for a, b in zip(e, exps))
        v = acc.get(t, 0) + coeff * c
        if v:
            acc[t] = v
        else:
            acc.pop(t, None)


def bareiss_solve(matrix: list[list[MultiPoly]], rhs: list[MultiPoly]) -> tuple[list[MultiPoly], MultiPoly]:
    """Fraction-free solve of ``matrix @ x = rhs``; returns (d * x, d) with d = +-det."""
    n = len(matrix)
    nvars = rhs[0].nvars
    m = [row[:] + [b] for row, b in zip(matrix, rhs)]
    prev = MultiPoly.constant(1, nvars)
    for p in range(n - 1):
        if m[p][p].is_zero():
            swap = next((r for r in range(p + 1, n) if not m[r][p].is_zero()), None)
            if swap is None:
                raise ZeroDivisionError("singular cluster system")
            m[p], m[swap] = m[swap], m[p]
        for i in range(p + 1, n):
            for j in range(p + 1, n + 1):
                m[i][j] = (m[i][j] * m[p][p] - m[i][p] * m[p][j]).exact_div(prev)
            m[i][p] = MultiPoly(nvars)
        prev = m[p][p]
    d = m[n - 1][n - 1]
    if d.is_zero():
        raise ZeroDivisionError("singular cluster system")
    x = [MultiPoly(nvars)] * n
    for i in range(n - 1, -1, -1):
        acc = d * m[i][n]
        for j in range(i + 1, n):
            acc = acc - m[i][j] * x[j]
        x[i] = acc.exact_div(m[i][i])
    return x, d


def cluster_sum(words: Sequence[str], weights: Sequence[MultiPoly]) -> tuple[MultiPoly, MultiPoly]:
    """(N, D) with sum_v C[v] = N / D.

    Words are processed by strongly connected components of the overlap
    graph in topological order.  Components without cycles are solved by
    substitution; each cyclic component is solved fraction-free and its
    determinant joins the common denominator D.
    """
    words = list(words)
    nvars = weights[0].nvars
    edges = _overlap_edges(words)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(words)))
    graph.add_edges_from(edges)
    incoming: dict[int, list[int]] = {}
    for u, v in edges:
        incoming.setdefault(v, []).append(u)
    wt = [word_weight(w, weights) for w in words]
    tails: dict[tuple[int, int], tuple] = {}

    def tail(v, o):
        if (v, o) not in tails:
            ((e, c),) = word_weight(words[v][o:], weights).terms.items()
            tails[(v, o)] = (e, c)
        return tails[(v, o)]

    cond = nx.condensation(graph)
    den = MultiPoly.constant(1, nvars)
    num: dict[int, MultiPoly] = {}  # C[v] = num[v] / den
    for comp in nx.lexicographical_topological_sort(cond):
        members = sorted(cond.nodes[comp]["members"])
        inside = set(members)
        rhs = []
        for v in members:
            acc = dict((-den * wt[v]).terms)
            for u in incoming.get(v, ()):
                if u in inside:
                    continue
                for o in edges[(u, v)]:
                    e, c = tail(v, o)
                    _add_scaled(acc, num[u], e, -c)
            rhs.append(MultiPoly(nvars, acc))
        cyclic = len(members) > 1 or (members[0], members[0]) in edges
        if not cyclic:
            num[members[0]] = rhs[0]
            continue
        one = MultiPoly.constant(1, nvars)
        a = [[one if r == c else MultiPoly(nvars) for c in range(len(members))] for r in range(len(members))]
        for r, v in enumerate(members):
            for c, u in enumerate(members):
                for o in edges.get((u, v), ()):
                    a[r][c] = a[r][c] + word_weight(words[v][o:], weights)
        solution, det = bareiss_solve(a, rhs)
        for u in num:
            num[u] = num[u] * det
        den = den * det
        for v, x in zip(members, solution):
            num[v] = x
    total: dict = {}
    for p in num.values():
        _add_scaled(total, p, (0,) * nvars, 1)
    return MultiPoly(nvars, total), den


def cluster_gf(forbidden: Iterable[str], weights: Sequence[MultiPoly]) -> RationalGF:
    """Generating function of words over ``len(weights)`` letters avoiding every forbidden factor.

    Each word is weighted by the product of its letters' weights; letter
    weights must be monomials.
    """
    words = sorted(set(forbidden), key=lambda w: (len(w), w))
    nvars = weights[0].nvars
    for w in weights:
        if len(w.terms) != 1:
            raise ValueError("letter weights must be monomials")
    for w in words:
        if not w or any(not ("1" <= ch <= str(len(weights))) for ch in w):
            raise ValueError(f"forbidden word {w!r} is empty or uses letters outside the alphabet")
    for a in words:
        for b in words:
            if a != b and a in b:
                raise ValueError(f"forbidden set is not minimal: {a} occurs in {b}")

    letters_total = sum(weights, MultiPoly(nvars))
    big_n, big_d = cluster_sum(words, weights)
    # f = 1 / (1 - letters - N/D) = D / (D (1 - letters) - N)
    return RationalGF(big_d, (1 - letters_total) * big_d - big_n)


# -- series expansion -------------------------------------------------------


def _vectors_up_to(nvars: int, cap: int):
    """Exponent vectors ordered by total degree, each degree in lex order."""
    for total in range(cap + 1):
        yield from _compositions(total, nvars)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def series_coefficients(
    gf: RationalGF,
    degree_cap: int | None = None,
    box: Sequence[int] | None = None,
    max_terms: int = 5_000_000,
) -> dict[tuple[int, ...], int]:
    """Exact power-series coefficients of ``gf``.

    Either all exponent vectors of total degree <= ``degree_cap``, or all
    vectors bounded coordinatewise by ``box``.  The denominator's constant
    term must be +1 or -1 so that the coefficients stay integral.
    """
    den = gf.denominator
    c0 = den.constant_term
    if c0 not in (1, -1):
        raise ValueError("denominator constant term must be +-1 for integer expansion")
    nvars = gf.nvars
    if (degree_cap is None) == (box is None):
        raise ValueError("give exactly one of degree_cap and box")
    if box is not None:
        if len(box) != nvars:
            raise ValueError("box needs one bound per variable")
        count = 1
        for b in box:
            count *= b + 1
        if count > max_terms:
            raise CapExceeded(f"{count} coefficients requested")
        vectors = sorted(product(*(range(b + 1) for b in box)), key=lambda e: (sum(e), e))
    else:
        vectors = list(_vectors_up_to(nvars, degree_cap))
        if len(vectors) > max_terms:
            raise CapExceeded(f"{len(vectors)} coefficients requested")
    rest = [(e, c) for e, c in den.terms.items() if any(e)]
    num = gf.numerator.terms
    out: dict[tuple[int, ...], int] = {}
    for e in vectors:
        acc = num.get(e, 0)
        for d, c in rest:
            prev = tuple(a - b for a, b in zip(e, d))
            if min(prev) >= 0:
                acc -= c * out.get(prev, 0)
        out[e] = acc * c0
    return out


def univariate_series(gf: RationalGF, degree_cap: int) -> list[int]:
    if gf.nvars != 1:
        raise ValueError("univariate_series needs a one-variable generating function")
    table = series_coefficients(gf, degree_cap=degree_cap)
    return [table[(d,)] for d in range(degree_cap + 1)]


# -- brute-force oracle -----------------------------------------------------


def _matcher(forbidden: Iterable[str]):
    words = sorted(set(forbidden))
    if not words:
        return lambda s: False
    pattern = re.compile("|".join(map(re.escape, words)))
    return lambda s: pattern.search(s) is not None


def brute_count(
    forbidden: Iterable[str],
    length: int | None = None,
    counts: Sequence[int] | None = None,
    num_letters: int = 3,
    cap: int = DEFAULT_BRUTE_CAP,
) -> int:
    """Count avoiding words of a given length or a given letter-count vector by enumeration."""
    if (length is None) == (counts is None):
        raise ValueError("give exactly one of length and counts")
    total = length if length is not None else sum(counts)
    if total > cap:
        raise CapExceeded(f"length {total} exceeds brute-force cap {cap}")
    hits = _matcher(forbidden)
    letters = "123456789"[:num_letters]
    n = 0
    for t in product(letters, repeat=total):
        s = "".join(t)
        if counts is not None and any(s.count(letters[i]) != counts[i] for i in range(num_letters)):
            continue
        if not hits(s):
            n += 1
    return n


def brute_count_table(
    forbidden: Iterable[str], max_len: int, num_letters: int = 3, cap: int = DEFAULT_BRUTE_CAP
) -> Counter:
    """Avoiding words of length <= ``max_len`` tallied by letter-count vector."""
    if max_len > cap:
        raise CapExceeded(f"length {max_len} exceeds brute-force cap {cap}")
    hits = _matcher(forbidden)
    letters = "123456789"[:num_letters]
    table: Counter = Counter()
    for length in range(max_len + 1):
        for t in product(letters, repeat=length):
            s = "".join(t)
            if not hits(s):
                table[tuple(s.count(ch) for ch in letters)] += 1
    return table
