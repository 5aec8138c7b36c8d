"""Lattices in the Minkowski space of a number field.

Coordinates: r1 real embeddings then r2 complex pairs stored as (re, im),
with the inner product weighting each complex coordinate by 2, so
||x||^2 = sum x_i^2 + 2 sum (re_j^2 + im_j^2).  All metric computations run
off an exact rational Gram matrix; a basis is optional and only used for
embedding coordinates and serialization.  Enumeration is Fincke-Pohst on a
float Cholesky factor with a safety inflation, followed by an exact
rational norm check at every candidate.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt, floor, ceil

from mpmath import mp

from . import quadratic

ENUM_INFLATION = 1e-9
MAX_RANK = 8
MAX_DK = 12


class EnumerationBudgetError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact linear algebra helpers (d <= 8, Fractions)


def _identity(d):
    return [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]


def _mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def _mat_inv(G):
    d = len(G)
    A = [[Fraction(G[i][j]) for j in range(d)] + [Fraction(int(i == j)) for j in range(d)]
         for i in range(d)]
    for col in range(d):
        piv = next((r for r in range(col, d) if A[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(d):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[d:] for row in A]


def _gso(G):
    """Gram-Schmidt data from a Gram matrix: (mu, B) with B the squared
    lengths of the orthogonalized vectors.  Raises if G is not positive
    definite."""
    d = len(G)
    mu = [[Fraction(0)] * d for _ in range(d)]
    B = [Fraction(0)] * d
    for i in range(d):
        for j in range(i):
            s = G[i][j] - sum(mu[i][k] * mu[j][k] * B[k] for k in range(j))
            mu[i][j] = s / B[j]
        B[i] = G[i][i] - sum(mu[i][k] ** 2 * B[k] for k in range(i))
        if B[i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
        mu[i][i] = Fraction(1)
    return mu, B


def _round_half(x: Fraction) -> int:
    return floor(x + Fraction(1, 2))


def lll_reduce_gram(G, delta=Fraction(3, 4)):
    """LLL on the Gram matrix alone.  Returns (G', U) with G' = U G U^T
    reduced and U unimodular."""
    d = len(G)
    G = [[Fraction(x) for x in row] for row in G]
    U = _identity(d)

    def row_op(k, j, c):
        # b_k <- b_k + c * b_j
        for t in range(d):
            G[k][t] += c * G[j][t]
        for t in range(d):
            G[t][k] += c * G[t][j]
        for t in range(d):
            U[k][t] += c * U[j][t]

    def swap(k):
        G[k], G[k - 1] = G[k - 1], G[k]
        for row in G:
            row[k], row[k - 1] = row[k - 1], row[k]
        U[k], U[k - 1] = U[k - 1], U[k]

    mu, B = _gso(G)
    k = 1
    while k < d:
        for j in reversed(range(k)):
            q = _round_half(mu[k][j])
            if q:
                row_op(k, j, -q)
                mu, B = _gso(G)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            swap(k)
            mu, B = _gso(G)
            k = max(k - 1, 1)
    return G, U


# ---------------------------------------------------------------------------


class MinkowskiSpace:
    """R^{r1} x C^{r2} with complex coordinates flattened to (re, im)."""

    def __init__(self, r1: int, r2: int):
        if r1 < 0 or r2 < 0 or r1 + 2 * r2 < 1:
            raise ValueError(f"bad signature ({r1}, {r2})")
        self.r1 = r1
        self.r2 = r2
        self.weights = [1] * r1 + [2] * (2 * r2)

    @property
    def d(self) -> int:
        return self.r1 + 2 * self.r2

    def inner(self, x, y):
        return sum(w * a * b for w, a, b in zip(self.weights, x, y))

    def norm2(self, x):
        return self.inner(x, x)

    def __eq__(self, other):
        return (isinstance(other, MinkowskiSpace)
                and (self.r1, self.r2) == (other.r1, other.r2))

    def __repr__(self):
        return f"MinkowskiSpace(r1={self.r1}, r2={self.r2})"


def unit_ball_volume(space: MinkowskiSpace):
    """Lebesgue volume of {||x|| <= 1}: each complex pair scales the
    standard ball by 1/2."""
    d = space.d
    omega = mp.pi ** (mp.mpf(d) / 2) / mp.gamma(mp.mpf(d) / 2 + 1)
    return omega * mp.mpf(2) ** (-space.r2)


def mc_unit_ball_volume(space: MinkowskiSpace, samples: int = 200000, seed: int = 0):
    """Monte-Carlo estimate of unit_ball_volume with its standard error."""
    rng = random.Random(seed)
    d = space.d
    half = [1 / sqrt(w) for w in space.weights]
    box = 1.0
    for h in half:
        box *= 2 * h
    hits = 0
    for _ in range(samples):
        x = [rng.uniform(-h, h) for h in half]
        if sum(w * t * t for w, t in zip(space.weights, x)) <= 1.0:
            hits += 1
    p = hits / samples
    est = box * p
    stderr = box * sqrt(max(p * (1 - p), 1e-12) / samples)
    return est, stderr


class Lattice:
    """Full-rank lattice described by an exact rational Gram matrix, with an
    optional embedding basis (rows of floats or Fractions)."""

    def __init__(self, space: MinkowskiSpace, gram, basis=None):
        d = space.d
        if len(gram) != d or any(len(r) != d for r in gram):
            raise ValueError("gram must be d x d")
        self.space = space
        self.gram = [[Fraction(x) for x in row] for row in gram]
        for i in range(d):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("gram must be symmetric")
        _, B = _gso(self.gram)  # positive definiteness
        self._gso_B = B
        self.basis = basis
        self._reduced = None
        self._minima = None

    @classmethod
    def from_basis(cls, space: MinkowskiSpace, rows):
        rows = [[Fraction(x) for x in row] for row in rows]
        if len(rows) != space.d or any(len(r) != space.d for r in rows):
            raise ValueError("need d independent rows of length d")
        gram = [[space.inner(a, b) for b in rows] for a in rows]
        return cls(space, gram, basis=rows)

    @classmethod
    def from_gram(cls, gram, space=None):
        if space is None:
            d = len(gram)
            space = MinkowskiSpace(d, 0)
        return cls(space, gram)

    @property
    def d(self):
        return self.space.d

    def det_squared(self) -> Fraction:
        out = Fraction(1)
        for b in self._gso_B:
            out *= b
        return out

    def det(self):
        return mp.sqrt(mp.mpf(self.det_squared().numerator)
                       / self.det_squared().denominator)

    def norm2_of_coeffs(self, c) -> Fraction:
        G = self.gram
        d = self.d
        return sum(Fraction(c[i]) * G[i][j] * c[j] for i in range(d) for j in range(d))

    def vector_from_coeffs(self, c):
        if self.basis is None:
            raise ValueError("lattice has no embedding basis")
        d = self.d
        return [sum(Fraction(c[i]) * self.basis[i][t] for i in range(d))
                for t in range(d)]

    def reduced(self):
        if self._reduced is None:
            self._reduced = lll_reduce_gram(self.gram)
        return self._reduced

    def to_dict(self):
        def enc(x):
            if isinstance(x, Fraction):
                return f"{x.numerator}/{x.denominator}"
            return float(x)
        out = {"r1": self.space.r1, "r2": self.space.r2,
               "gram": [[enc(x) for x in row] for row in self.gram],
               "det": float(self.det())}
        if self.basis is not None:
            rows = []
            for row in self.basis:
                flat = [enc(x) for x in row[:self.space.r1]]
                for j in range(self.space.r2):
                    re = row[self.space.r1 + 2 * j]
                    im = row[self.space.r1 + 2 * j + 1]
                    flat.append([float(re), float(im)])
                rows.append(flat)
            out["basis"] = rows
        return out

    def __repr__(self):
        return f"Lattice(d={self.d}, det~{float(self.det()):.6g})"


# ---------------------------------------------------------------------------
# enumeration


def _enumerate_coeffs(G_red, bound: Fraction):
    """All nonzero coefficient vectors c (w.r.t. the reduced Gram) with
    c G c^T <= bound, one representative per +-pair (last nonzero > 0).
    Exact rational check at every candidate; float pruning with inflation."""
    d = len(G_red)
    Gf = [[float(x) for x in row] for row in G_red]
    # Cholesky, upper triangular R with G = R^T R
    R = [[0.0] * d for _ in range(d)]
    for i in range(d):
        s = Gf[i][i] - sum(R[k][i] ** 2 for k in range(i))
        R[i][i] = sqrt(max(s, 1e-300))
        for j in range(i + 1, d):
            R[i][j] = (Gf[i][j] - sum(R[k][i] * R[k][j] for k in range(i))) / R[i][i]
    Cf = float(bound) * (1 + ENUM_INFLATION) + 1e-12
    c = [0] * d
    out = []

    def recurse(level, remaining, center_shift):
        # center_shift[j] = sum_{t>level} R[j][t] c[t]
        if level < 0:
            if any(c):
                cc = tuple(c)
                if self_norm(cc) <= bound:
                    out.append(cc)
            return
        center = -center_shift[level] / R[level][level]
        radius = sqrt(max(remaining, 0.0)) / R[level][level]
        lo = ceil(center - radius - ENUM_INFLATION)
        hi = floor(center + radius + ENUM_INFLATION)
        if all(v == 0 for v in c[level + 1:]):
            lo = max(lo, 0)  # half enumeration
        for val in range(lo, hi + 1):
            c[level] = val
            t = center_shift[level] + R[level][level] * val
            rem2 = remaining - t * t
            if rem2 < -ENUM_INFLATION * max(1.0, Cf):
                continue
            new_shift = [center_shift[j] + R[j][level] * val for j in range(level)]
            recurse(level - 1, rem2, new_shift + [0.0] * (d - level))
        c[level] = 0

    def self_norm(cc):
        return sum(Fraction(cc[i]) * G_red[i][j] * cc[j]
                   for i in range(d) for j in range(d))

    recurse(d - 1, Cf, [0.0] * d)
    return out


@dataclass
class SuccessiveMinima:
    values_squared: list   # exact Fractions, nondecreasing
    witnesses: list        # coefficient vectors in the original basis

    @property
    def values(self):
        return [mp.sqrt(mp.mpf(v.numerator) / v.denominator)
                for v in self.values_squared]

    def to_dict(self):
        return {"values": [float(v) for v in self.values],
                "values_squared": [f"{v.numerator}/{v.denominator}"
                                   for v in self.values_squared],
                "witnesses": [list(w) for w in self.witnesses]}


def _canonical_sign(c):
    for x in c:
        if x > 0:
            return tuple(c)
        if x < 0:
            return tuple(-y for y in c)
    return tuple(c)


def _independent(chosen, cand):
    """Exact rank check: is cand outside the span of chosen?"""
    rows = [list(map(Fraction, r)) for r in chosen] + [list(map(Fraction, cand))]
    n = len(rows[0])
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r == len(chosen) + 1


def successive_minima(L: Lattice) -> SuccessiveMinima:
    """Exact successive minima with greedy witnesses, deterministic
    tie-break: candidates are sign-normalized (first nonzero coefficient
    positive) and compared lexicographically."""
    d = L.d
    if d > MAX_RANK:
        raise EnumerationBudgetError(f"rank {d} exceeds the enumeration budget {MAX_RANK}")
    if L._minima is not None:
        return L._minima
    G_red, U = L.reduced()
    bound = max(G_red[i][i] for i in range(d))
    cands = _enumerate_coeffs(G_red, bound)
    # map to original-basis coefficients and canonical sign
    seen = []
    for cc in cands:
        orig = [sum(cc[i] * U[i][t] for i in range(d)) for t in range(d)]
        seen.append((sum(Fraction(cc[i]) * G_red[i][j] * cc[j]
                         for i in range(d) for j in range(d)),
                     _canonical_sign(orig)))
    seen.sort(key=lambda t: (t[0], t[1]))
    values, witnesses = [], []
    for q, vec in seen:
        if len(witnesses) == d:
            break
        if _independent(witnesses, vec):
            values.append(q)
            witnesses.append(vec)
    if len(witnesses) < d:
        raise EnumerationBudgetError(
            f"enumeration bound {float(bound):.6g} yielded only {len(witnesses)} "
            f"independent vectors")
    L._minima = SuccessiveMinima(values, witnesses)
    return L._minima


def shortest_vector(L: Lattice):
    sm = successive_minima(L)
    return sm.values_squared[0], sm.witnesses[0]


def dual(L: Lattice) -> Lattice:
    """Metric dual: Gram of the dual basis is the inverse Gram; the dual
    embedding basis solves <b*_i, b_j> = delta_ij."""
    try:
        Ginv = _mat_inv(L.gram)
    except ZeroDivisionError as exc:
        raise ValueError("gram is singular beyond working precision") from exc
    basis = None
    if L.basis is not None and all(isinstance(x, Fraction)
                                   for row in L.basis for x in row):
        # rows of (G^{-1} B) weighted by J^{-1}... directly: B* = G^{-1} B
        # since <G^{-1}B e_i, B e_j> = (G^{-1} G)_{ij}
        basis = _mat_mul(Ginv, L.basis)
    return Lattice(L.space, Ginv, basis=basis)


# ---------------------------------------------------------------------------
# verification reports


def verify_minkowski_second(L: Lattice):
    """2^d covol / (d! v_r) <= prod lambda_i <= 2^d covol / v_r with v_r the
    Lebesgue volume of the unit ball and covol the Lebesgue covolume
    (= sqrt(det gram) / 2^{r2})."""
    sm = successive_minima(L)
    d = L.d
    with mp.extraprec(30):
        v_r = unit_ball_volume(L.space)
        covol = L.det() * mp.mpf(2) ** (-L.space.r2)
        prod2 = Fraction(1)
        for v in sm.values_squared:
            prod2 *= v
        prod = mp.sqrt(mp.mpf(prod2.numerator) / prod2.denominator)
        lower = mp.mpf(2) ** d * covol / (mp.factorial(d) * v_r)
        upper = mp.mpf(2) ** d * covol / v_r
        eps = mp.mpf(2) ** (-mp.prec + 10) * upper
        holds = (lower <= prod + eps) and (prod <= upper + eps)
    return bool(holds), {
        "lower": float(lower), "product": float(prod), "upper": float(upper),
        "holds": bool(holds),
    }


def verify_duality_pairing(L: Lattice):
    """lambda_i(L) * lambda_{d-i+1}(L*) >= 1 for all i, compared exactly on
    squared values."""
    sm = successive_minima(L)
    smd = successive_minima(dual(L))
    d = L.d
    products2 = []
    holds = True
    for i in range(d):
        p2 = sm.values_squared[i] * smd.values_squared[d - 1 - i]
        products2.append(p2)
        if p2 < 1:
            holds = False
    return bool(holds), {
        "products_squared": [f"{p.numerator}/{p.denominator}" for p in products2],
        "products": [float(sqrt(p.numerator / p.denominator)) for p in products2],
        "holds": bool(holds),
    }


def verify_witness_index(L: Lattice):
    """Index of the sublattice spanned by the minima witnesses, checked
    against 2^d / v_r."""
    sm = successive_minima(L)
    d = L.d
    # index = |det of witness coefficient matrix|
    M = [list(map(Fraction, w)) for w in sm.witnesses]
    detM = Fraction(1)
    rows = [r[:] for r in M]
    sign = 1
    for col in range(d):
        piv = next((i for i in range(col, d) if rows[i][col] != 0), None)
        if piv is None:
            detM = Fraction(0)
            break
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        detM *= rows[col][col]
        for i in range(col + 1, d):
            f = rows[i][col] / rows[col][col]
            rows[i] = [a - f * b for a, b in zip(rows[i], rows[col])]
    index = abs(sign * detM)
    with mp.extraprec(20):
        rhs = mp.mpf(2) ** d / unit_ball_volume(L.space)
        holds = mp.mpf(index.numerator) / index.denominator <= rhs
    return bool(holds), {"index": f"{index.numerator}/{index.denominator}",
                         "rhs": float(rhs), "holds": bool(holds)}


# ---------------------------------------------------------------------------
# point counting over powers of the dual


def _dual_points_with_norms(L: Lattice, r2_bound: Fraction):
    """All dual-lattice points with ||x||^2 <= r2_bound, as a sorted list of
    (norm2, multiplicity) pairs, origin included."""
    Ld = dual(L)
    G_red, _ = Ld.reduced()
    shells = {Fraction(0): 1}
    if r2_bound > 0:
        for cc in _enumerate_coeffs(G_red, r2_bound):
            n2 = sum(Fraction(cc[i]) * G_red[i][j] * cc[j]
                     for i in range(len(cc)) for j in range(len(cc)))
            shells[n2] = shells.get(n2, 0) + 2  # +-pair
    return sorted(shells.items())


def _power_sums(shells, K: int, r2: Fraction):
    """K-fold convolution of the (norm2, count) shell list, pruned at r2:
    {total norm2: number of K-tuples}."""
    sums = {Fraction(0): 1}
    for _ in range(K):
        new = {}
        for s, cnt in sums.items():
            for n2, mult in shells:
                t = s + n2
                if t > r2:
                    break
                new[t] = new.get(t, 0) + cnt * mult
        sums = new
    return sums


def count_points(L: Lattice, K: int, r):
    """Count X in (L*)^K with ||X|| <= r, and check the two-case bound:
    exactly 1 when r < lambda_d(L)^{-1}, else at most (3 r lambda_d)^{dK}.

    The threshold and the bound are evaluated exactly on squares (r is
    taken as an exact binary rational).  Also reports the sharper threshold
    lambda_1(L*)."""
    d = L.d
    if K < 1:
        raise ValueError("K must be >= 1")
    if d * K > MAX_DK:
        raise EnumerationBudgetError(f"dK = {d * K} exceeds budget {MAX_DK}")
    if r <= 0:
        raise ValueError("r must be positive")
    r_frac = Fraction(r)
    r2 = r_frac * r_frac
    shells = _dual_points_with_norms(L, r2)
    count = sum(_power_sums(shells, K, r2).values())

    lam = successive_minima(L)
    lam_d2 = lam.values_squared[-1]            # lambda_d(L)^2
    below_threshold = r2 * lam_d2 < 1          # r < 1/lambda_d exactly
    lam1_dual2 = successive_minima(dual(L)).values_squared[0]
    sharper_below = r2 * lam1_dual2 < 1        # r < lambda_1(L*) exactly

    if below_threshold:
        bound_ok = (count == 1)
        bound_repr = "1"
    else:
        # count <= (3 r lambda_d)^{dK}  <=>  count^2 <= (9 r^2 lam_d^2)^{dK}
        rhs2 = (9 * r2 * lam_d2) ** (d * K)
        bound_ok = Fraction(count) ** 2 <= rhs2
        bound_repr = f"(3 r lambda_d)^{d * K}"
    return {
        "count": count,
        "below_threshold": bool(below_threshold),
        "sharper_below_threshold": bool(sharper_below),
        "bound": bound_repr,
        "bound_value": float((3 * float(r_frac) * sqrt(lam_d2.numerator / lam_d2.denominator)) ** (d * K)),
        "bound_holds": bool(bound_ok),
        "r": float(r_frac), "K": K, "dK": d * K,
    }


def count_points_oracle(L: Lattice, K: int, r):
    """Naive oracle: iterate the full coefficient box given by
    |c_i| <= r * sqrt((G*^{-1})_{ii}) (Cauchy-Schwarz) per dual copy."""
    Ld = dual(L)
    d = L.d
    r_frac = Fraction(r)
    r2 = r_frac * r_frac
    Ginv = _mat_inv(Ld.gram)
    bounds = [floor(sqrt(float(r2 * Ginv[i][i]))) + 1 for i in range(d)]
    singles = []
    for c in itertools.product(*[range(-b, b + 1) for b in bounds]):
        n2 = Ld.norm2_of_coeffs(c)
        if n2 <= r2:
            singles.append(n2)
    count = 0
    for combo in itertools.product(singles, repeat=K):
        if sum(combo) <= r2:
            count += 1
    return count


def dual_sum(L: Lattice, K: int, t, radius=8):
    """sum over nonzero X in (L*)^K of ||X||^{-(dK+t)}: partial sum over
    points with ||X|| <= radius plus a rigorous dyadic-shell tail bound
    (6 lambda_d)^{dK} radius^{-t} / (1 - 2^{-t}).  Checked against
    6^{dK} zeta(t) lambda_d^{dK+t}; an overwhelming tail yields an
    inconclusive report instead of a failure."""
    d = L.d
    if t < 1.01:
        raise ValueError("t must be >= 1.01")
    if d * K > MAX_DK:
        raise EnumerationBudgetError(f"dK = {d * K} exceeds budget {MAX_DK}")
    r_frac = Fraction(radius)
    r2 = r_frac * r_frac
    shells = _dual_points_with_norms(L, r2)
    sums = _power_sums(shells, K, r2)
    with mp.extraprec(20):
        texp = mp.mpf(t)
        partial = mp.mpf(0)
        for s, cnt in sums.items():
            if s == 0:
                continue
            partial += cnt * (mp.mpf(s.numerator) / s.denominator) ** (-(d * K + texp) / 2)
        lam_d2 = successive_minima(L).values_squared[-1]
        lam_d = mp.sqrt(mp.mpf(lam_d2.numerator) / lam_d2.denominator)
        r_mpf = mp.mpf(r_frac.numerator) / r_frac.denominator
        tail = ((6 * lam_d) ** (d * K) * r_mpf ** (-texp)
                / (1 - mp.mpf(2) ** (-texp)))
        rhs = 6 ** (d * K) * mp.zeta(texp) * lam_d ** (d * K + texp)
        total = partial + tail
        if total <= rhs:
            status = "verified"
        elif partial > rhs:
            status = "failed"
        else:
            status = "inconclusive"
    return {
        "partial_sum": float(partial), "tail_bound": float(tail),
        "total_bound": float(total), "rhs": float(rhs),
        "status": status, "radius": float(r_frac), "t": float(t),
        "K": K, "dK": d * K,
    }


# ---------------------------------------------------------------------------
# ideal lattices of quadratic fields


def _omega_data(m: int):
    """(e, f) with omega^2 = e + f*omega for the maximal-order generator."""
    if m % 4 == 1:
        return (m - 1) // 4, 1
    return m, 0


def _ideal_norm_form(m: int, x, y):
    """N(x + y*omega) for the quadratic order of radicand m."""
    e, f = _omega_data(m)
    return x * x + f * x * y - e * y * y


@dataclass
class IdealLattice:
    field: object            # NumberField, quadratic
    ideal: tuple             # (a, b, c): Z-module a*Z + (b + c*omega)*Z
    scale: Fraction          # overall factor (1 for integral ideals)
    embedded: Lattice
    norm: Fraction

    def to_dict(self):
        a, b, c = self.ideal
        return {"field": self.field.label, "a": a, "b": b, "c": c,
                "scale": f"{self.scale.numerator}/{self.scale.denominator}",
                "norm": f"{self.norm.numerator}/{self.norm.denominator}",
                "det": float(self.embedded.det())}


def _trace_pairing_gram(F, gens, scale=Fraction(1)):
    """Gram of {scale * g : g in gens}, g = (x, y) meaning x + y*omega, under
    Tr(u * conj v) (imaginary) or Tr(u v) (real)."""
    m = F.m
    e, f = _omega_data(m)

    def pair(u, v):
        x1, y1 = u
        x2, y2 = v
        if m < 0:
            # conj(x + y w) = (x + f y) - y w
            x2, y2 = x2 + f * y2, -y2
        # (x1 + y1 w)(x2 + y2 w) = x1 x2 + e y1 y2 + (x1 y2 + x2 y1 + f y1 y2) w
        u0 = x1 * x2 + e * y1 * y2
        u1 = x1 * y2 + x2 * y1 + f * y1 * y2
        return 2 * u0 + f * u1  # Tr(u0 + u1 w) = 2 u0 + f u1

    s2 = scale * scale
    return [[s2 * pair(g, h) for h in gens] for g in gens]


def ideal_lattice(F, ideal_spec) -> IdealLattice:
    """Embedded lattice of an O_F-ideal of a quadratic field.

    ideal_spec: (a, b) for the module aZ + (b + omega)Z, or (a, b, c) in
    Hermite form aZ + (b + c*omega)Z.  Rejects Z-modules that are not
    O_F-ideals (c | a, c | b, ca | N(b + c*omega))."""
    if not getattr(F, "is_quadratic", lambda: False)():
        raise ValueError("ideal lattices require a quadratic field")
    if len(ideal_spec) == 2:
        a, b = ideal_spec
        c = 1
    else:
        a, b, c = ideal_spec
    if a <= 0 or c <= 0:
        raise ValueError("Hermite data needs a > 0, c > 0")
    m = F.m
    b %= a
    if a % c or b % c:
        raise ValueError(f"({a}, {b}, {c}) is not in Hermite form: c must divide a and b")
    if _ideal_norm_form(m, b, c) % (c * a):
        raise ValueError(f"({a}, {b}, {c}) is not an ideal of the maximal order")
    gens = [(a, 0), (b, c)]
    gram = _trace_pairing_gram(F, gens)
    lat = Lattice(MinkowskiSpace(F.signature.r1, F.signature.r2), gram)
    norm = Fraction(a * c)
    # det identity: det(gram) = |D| * N^2 exactly
    det2 = lat.det_squared()
    assert det2 == Fraction(F.abs_disc) * norm * norm, (det2, F.abs_disc, norm)
    return IdealLattice(field=F, ideal=(a, b, c), scale=Fraction(1),
                        embedded=lat, norm=norm)


def inverse_ideal_lattice(F, ideal_spec) -> IdealLattice:
    """The fractional ideal a^{-1} = conj(a) / N(a), embedded."""
    base = ideal_lattice(F, ideal_spec)
    a, b, c = base.ideal
    _, f = _omega_data(F.m)
    b_conj = (-b - c * f) % a
    if _ideal_norm_form(F.m, b_conj, c) % (c * a):
        raise ValueError("conjugate module is not an ideal; input rejected")
    N = base.norm
    gens = [(a, 0), (b_conj, c)]
    gram = _trace_pairing_gram(F, gens, scale=Fraction(1, int(N)))
    lat = Lattice(MinkowskiSpace(F.signature.r1, F.signature.r2), gram)
    det2 = lat.det_squared()
    assert det2 == Fraction(F.abs_disc) / (N * N), (det2, F.abs_disc, N)
    return IdealLattice(field=F, ideal=(a, b_conj, c), scale=Fraction(1, int(N)),
                        embedded=lat, norm=1 / N)


def prime_ideal(F, p: int, index: int = 0):
    """Hermite data of a prime ideal above p in a quadratic field."""
    m = F.m
    e, f = _omega_data(m)
    ch = F.chi(p)
    if ch == -1:
        if index:
            raise ValueError(f"{p} is inert: only one prime above it")
        return (p, 0, p)
    roots = [b for b in range(p) if (_ideal_norm_form(m, b, 1)) % p == 0]
    if ch == 0 and len(roots) == 1:
        if index:
            raise ValueError(f"{p} is ramified: only one prime above it")
        return (p, roots[0], 1)
    if len(roots) != 2:
        raise ArithmeticError(f"unexpected factorization of {p}")
    return (p, sorted(roots)[index], 1)


def minkowski_representatives(F):
    """One ideal per class of an imaginary quadratic field, each of norm
    at most (2/pi) sqrt|D|, from the reduced binary quadratic forms."""
    if not F.is_quadratic() or F.disc >= 0:
        raise ValueError("Minkowski representatives here require an imaginary quadratic field")
    D = F.disc
    out = []
    for (a, b, _cform) in quadratic.reduced_forms(D):
        # odd discriminant forces b odd, even forces b even
        if D % 4 == 1:
            assert b % 2 == 1
            b_h = ((-b - 1) // 2) % a
        else:
            assert b % 2 == 0
            b_h = (-b // 2) % a
        out.append(ideal_lattice(F, (a, b_h)))
    out.sort(key=lambda il: (il.norm, il.ideal))
    with mp.extraprec(10):
        M_F = 2 / mp.pi * mp.sqrt(F.abs_disc)
        assert all(mp.mpf(int(il.norm)) <= M_F for il in out)
    return out


# ---------------------------------------------------------------------------
# fundamental domain data


def fundamental_domain_radii(F, n: int):
    """Explicit constants for the height-ball covering of GL(n) over F:
    the radius 2^{2d} v_r^{-2} Delta_F, the exact Haar volume
    (lambda_{-1})^n of the norm-one torus block, and the discriminant power
    Delta_F^{n(n-1)d/2} controlling the unipotent block."""
    from . import numberfield as nf
    d = F.degree
    with mp.extraprec(20):
        space = MinkowskiSpace(F.signature.r1, F.signature.r2)
        v_r = unit_ball_volume(space)
        radius = mp.mpf(2) ** (2 * d) * v_r ** (-2) * F.delta()
        lam = nf.residue(F)
        vol_m = lam ** n
        n_bound = F.delta() ** (n * (n - 1) * d / mp.mpf(2))
    return {
        "field": F.label, "n": n, "d": d,
        "radius": float(radius),
        "v_r": float(v_r),
        "vol_m": float(vol_m),
        "n_volume_bound": float(n_bound),
    }


def covering_check(F, radius, samples: int = 200, seed: int = 0):
    """Monte-Carlo sanity check that translates of the radius-ball by the
    ring of integers cover the archimedean space (quadratic fields)."""
    if not F.is_quadratic():
        raise ValueError("covering check implemented for quadratic fields")
    il = ideal_lattice(F, (1, 0))
    G = [[float(x) for x in row] for row in il.embedded.gram]
    rng = random.Random(seed)
    ok = 0
    scale = 10.0
    for _ in range(samples):
        # coefficients of a random point w.r.t. the O_F basis
        t = [rng.uniform(-scale, scale) for _ in range(2)]
        frac = [ti - round(ti) for ti in t]
        n2 = sum(frac[i] * G[i][j] * frac[j] for i in range(2) for j in range(2))
        if n2 <= float(radius) ** 2:
            ok += 1
    return {"samples": samples, "covered": ok, "all_covered": ok == samples}
