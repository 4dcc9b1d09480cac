"""Growth rates from generating-function denominators and optimal letter weights.

For a series with non-negative coefficients the smallest positive zero of
the denominator is the dominant singularity, so ``[x^n] ~ lambda_min^-n``
up to polynomial factors.  For a multivariate denominator ``q`` the best
exponential bound on the diagonal coefficient ``[x1^n ... xr^n]`` is
``1 / max prod x_j`` over points of the first zero surface of ``q`` in the
positive orthant, which is where the Lagrange conditions are solved.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .poly import MultiPoly, RationalGF

ROOT_TOL = 1e-12
OPT_TOL = 1e-10
SCAN_POINTS = 4096


class NoRootFound(ValueError):
    pass


class OptimizationFailed(RuntimeError):
    pass


# -- roots ------------------------------------------------------------------


def _coeffs(p: MultiPoly | Sequence[float]) -> np.ndarray:
    if isinstance(p, MultiPoly):
        p = p.coefficients()
    return np.asarray(p, dtype=float)


def root_bracket(p: MultiPoly | Sequence[float], upper: float = 1.0) -> tuple[float, float]:
    """First grid interval in (0, upper] across which ``p`` changes sign."""
    c = _coeffs(p)[::-1]
    if np.polyval(c, 0.0) <= 0:
        raise NoRootFound("polynomial must be positive at 0")
    grid = np.linspace(0.0, upper, SCAN_POINTS + 1)
    vals = np.polyval(c, grid)
    bad = np.nonzero(vals <= 0)[0]
    if len(bad) == 0:
        raise NoRootFound(f"no sign change in (0, {upper}]")
    i = bad[0]
    return float(grid[i - 1]), float(grid[i])


def min_positive_root(p: MultiPoly | Sequence[float], tol: float = ROOT_TOL, upper: float = 1.0) -> float:
    """Smallest positive real zero of a univariate polynomial with p(0) > 0.

    Scans (0, upper] for the first sign change, then Brent's method and one
    Newton step.
    """
    coeffs = _coeffs(p)
    c = coeffs[::-1]
    dc = np.polyder(c) if len(c) > 1 else np.zeros(1)
    a, b = root_bracket(coeffs, upper)
    if np.polyval(c, b) == 0:
        return b
    x = brentq(lambda t: np.polyval(c, t), a, b, xtol=tol / 4, rtol=4 * np.finfo(float).eps)
    slope = np.polyval(dc, x)
    if slope:
        y = x - np.polyval(c, x) / slope
        if a <= y <= b and abs(np.polyval(c, y)) < abs(np.polyval(c, x)):
            x = y
    return float(x)


# -- growth and bounds ------------------------------------------------------


@dataclass(frozen=True)
class GrowthReport:
    lambda_min: float
    per_string_growth: float
    per_element_growth: float
    letters_per_element: int

    def to_record(self) -> dict:
        return asdict(self)


def growth_per_element(gf: RationalGF | MultiPoly, letters_per_element: int) -> GrowthReport:
    """Exponential growth of ``[x^(n * letters_per_element)]`` as a function of n.

    Accepts a univariate generating function or just its denominator.
    """
    den = gf.denominator if isinstance(gf, RationalGF) else gf
    if den.nvars != 1:
        raise ValueError("growth_per_element needs a univariate denominator")
    lam = min_positive_root(den)
    return GrowthReport(lam, 1 / lam, lam ** (-letters_per_element), letters_per_element)


def weighted_growth(
    gf: RationalGF | MultiPoly, weights: Sequence[int], multiplicities: Sequence[int] | None = None
) -> GrowthReport:
    """Growth per element after substituting x_j -> x**weights[j].

    ``multiplicities[j]`` is how many letters of one element share variable j
    (2 for x1 when m1 and m3 are identified).
    """
    den = gf.denominator if isinstance(gf, RationalGF) else gf
    if multiplicities is None:
        multiplicities = [1] * den.nvars
    per_element = sum(a * m for a, m in zip(weights, multiplicities))
    return growth_per_element(den.substitute(weights), per_element)


@dataclass(frozen=True)
class BoundReport:
    ell: int
    b: float
    constant: float

    def to_record(self) -> dict:
        return asdict(self)


def bound_constant(ell: int, b: float) -> BoundReport:
    """Coefficient of log2(n) in the lower bound on k_n when |P(n, ell)| = O(b^n)."""
    if b <= 1 or ell < 1:
        raise ValueError("need b > 1 and ell >= 1")
    return BoundReport(ell, b, ell / math.log2(b))


# -- weight optimization ----------------------------------------------------


@dataclass(frozen=True)
class OptimizationResult:
    point: tuple[float, ...]
    objective: float
    constraint_residual: float
    stationarity_residual: float
    multiplier: float
    multiplicities: tuple[int, ...]
    groups: tuple[tuple[int, ...], ...] | None = None
    method: str = "newton"
    starts_tried: int = field(default=0, compare=False)

    def expanded_point(self) -> tuple[float, ...]:
        """Point in the variables of the original denominator."""
        if self.groups is None:
            return self.point
        out = [0.0] * sum(len(g) for g in self.groups)
        for y, g in zip(self.point, self.groups):
            for i in g:
                out[i] = y
        return tuple(out)

    def to_record(self) -> dict:
        rec = asdict(self)
        rec["expanded_point"] = list(self.expanded_point())
        return rec


class _Problem:
    def __init__(self, q: MultiPoly, mult: Sequence[int]):
        self.q = q
        self.m = np.asarray(mult, dtype=float)
        self.n = q.nvars
        self.grad = [q.derivative(i) for i in range(self.n)]
        self.hess = [[g.derivative(j) for j in range(self.n)] for g in self.grad]

    def ray_root(self, direction: np.ndarray) -> float:
        coeffs = self.q.along_ray(direction)
        upper = 1.0 / float(np.max(direction))
        return min_positive_root(coeffs, upper=upper)

    def log_objective(self, y: np.ndarray) -> float:
        return float(self.m @ np.log(y))

    def residual(self, y: np.ndarray, lam: float) -> np.ndarray:
        g = np.array([d(*y) for d in self.grad]) * y
        return np.append(self.m + lam * g, self.q(*y))

    def newton(self, y: np.ndarray, tol: float, max_iter: int = 100):
        """Damped Newton on the Lagrange system in log coordinates."""
        n = self.n
        g = np.array([d(*y) for d in self.grad]) * y
        lam = -float(self.m @ g) / float(g @ g)
        z = np.log(y)
        res = self.residual(y, lam)
        for _ in range(max_iter):
            if np.max(np.abs(res)) < tol:
                break
            y = np.exp(z)
            grad = np.array([d(*y) for d in self.grad])
            g = grad * y
            jac = np.zeros((n + 1, n + 1))
            for i in range(n):
                for j in range(n):
                    jac[j, i] = lam * ((g[j] if i == j else 0.0) + y[i] * y[j] * self.hess[j][i](*y))
                jac[i, n] = g[i]
                jac[n, i] = g[i]
            try:
                step = np.linalg.solve(jac, -res)
            except np.linalg.LinAlgError:
                return None
            size = 1.0
            base = np.max(np.abs(res))
            while size > 1e-6:
                z_new = z + size * step[:n]
                lam_new = lam + size * step[n]
                r_new = self.residual(np.exp(z_new), lam_new)
                if np.all(np.isfinite(r_new)) and np.max(np.abs(r_new)) < base:
                    break
                size /= 2
            else:
                return None
            z, lam, res = z_new, lam_new, r_new
        y = np.exp(z)
        if np.max(np.abs(res)) >= tol:
            return None
        return y, lam, res

    def on_first_surface(self, y: np.ndarray) -> bool:
        # the point must be the first zero along its own ray
        try:
            t = min_positive_root(self.q.along_ray(y), upper=1.0 + 1e-6)
        except ValueError:
            return False
        return abs(t - 1.0) < 1e-7

    def grid_search(self, rounds: int = 12, points: int = 9) -> np.ndarray:
        """Refine a grid over ray directions, maximizing the log objective on the surface."""
        n = self.n
        center = np.zeros(n - 1)
        width = 4.0

        def score(u):
            d = np.exp(np.append(u, 0.0))
            d /= d.max()
            try:
                t = self.ray_root(d)
            except ValueError:
                return -np.inf, None
            y = t * d
            return self.log_objective(y), y

        best_val, best_y = score(center)
        for _ in range(rounds):
            axes = [np.linspace(c - width, c + width, points) for c in center]
            for u in np.array(np.meshgrid(*axes, indexing="ij")).reshape(n - 1, -1).T:
                val, y = score(u)
                if val > best_val:
                    best_val, best_y, center = val, y, u
            width /= 3
        if best_y is None:
            raise OptimizationFailed("no ray from the origin meets the zero set")
        return best_y


def _starts(n: int) -> list[np.ndarray]:
    starts = [np.ones(n)]
    for j in range(n):
        for f in (2.0, 0.5):
            d = np.ones(n)
            d[j] = f
            starts.append(d)
    return starts


def optimize_weights(
    den: MultiPoly,
    identify: Sequence[Sequence[int]] | None = None,
    multiplicities: Sequence[int] | None = None,
    tol: float = OPT_TOL,
) -> OptimizationResult:
    """Best exponential bound on diagonal coefficients of 1/den.

    Finds the point of the first positive zero surface of ``den`` maximizing
    prod x_j**m_j (so the reported objective, its reciprocal, is minimal)
    by solving the Lagrange conditions with damped Newton from several
    deterministic starts, falling back to a refined grid over directions.
    ``identify`` merges variables (e.g. ``[[0, 2], [1]]`` for x3 = x1);
    ``multiplicities`` gives the exponents of an already merged polynomial.
    """
    groups = None
    if identify is not None:
        groups = tuple(tuple(g) for g in identify)
        q = den.identify(groups)
        mult = tuple(len(g) for g in groups)
    else:
        q = den
        mult = tuple(multiplicities) if multiplicities is not None else (1,) * den.nvars
    if len(mult) != q.nvars:
        raise ValueError("one multiplicity per variable required")
    prob = _Problem(q, mult)
    newton_tol = min(tol, 1e-12)

    candidates = []
    starts = _starts(q.nvars)
    for d in starts:
        try:
            y0 = prob.ray_root(d / d.max()) * d / d.max()
        except ValueError:
            continue
        out = prob.newton(y0, newton_tol)
        if out is not None and prob.on_first_surface(out[0]):
            candidates.append((out, "newton"))
    if not candidates:
        y0 = prob.grid_search()
        out = prob.newton(y0, newton_tol)
        if out is None or not prob.on_first_surface(out[0]):
            raise OptimizationFailed("Newton did not converge from the grid optimum")
        candidates.append((out, "grid+newton"))

    def key(item):
        (y, _, _), _ = item
        return (-prob.log_objective(y), tuple(y))

    (y, lam, res), method = min(candidates, key=key)
    if np.any(y <= 0) or np.any(y >= 1):
        raise OptimizationFailed(f"optimum {y} outside the open unit box")
    return OptimizationResult(
        point=tuple(float(v) for v in y),
        objective=float(math.exp(-prob.log_objective(y))),
        constraint_residual=float(abs(res[-1])),
        stationarity_residual=float(np.max(np.abs(res[:-1]))),
        multiplier=float(lam),
        multiplicities=mult,
        groups=groups,
        method=method,
        starts_tried=len(starts),
    )


# -- integer weights --------------------------------------------------------


def convergents(x: float, max_terms: int = 30) -> list[Fraction]:
    """Continued-fraction convergents of a positive real."""
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    for _ in range(max_terms):
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        out.append(Fraction(h1, k1))
        frac = x - a
        if frac < 1e-12:
            break
        x = 1 / frac
    return out


def rationalize_weights(point: Sequence[float], max_weight: int) -> tuple[int, ...]:
    """Integer exponents alpha with x_j ~ x**alpha_j, i.e. alpha_j / alpha_0 ~ log x_j / log x_0.

    Each ratio is replaced by its deepest continued-fraction convergent that
    keeps every weight, after scaling to a common first weight, at most
    ``max_weight``.
    """
    if any(not 0 < v < 1 for v in point):
        raise ValueError("coordinates must lie in (0, 1)")
    ratios = [math.log(v) / math.log(point[0]) for v in point]
    options = [[c for c in convergents(r) if c > 0] for r in ratios]
    depth = [len(o) - 1 for o in options]

    def combine():
        chosen = [options[j][depth[j]] for j in range(len(ratios))]
        base = math.lcm(*(c.denominator for c in chosen))
        return tuple(int(c * base) for c in chosen)

    alpha = combine()
    while max(alpha) > max_weight:
        # back off the ratio whose current convergent is most expensive
        j = max(
            (j for j in range(len(ratios)) if depth[j] > 0),
            key=lambda j: (options[j][depth[j]].denominator, options[j][depth[j]].numerator),
            default=None,
        )
        if j is None:
            raise ValueError(f"no weights within max_weight={max_weight}")
        depth[j] -= 1
        alpha = combine()
    return alpha
