"""Local zeta factors zeta_q(s) = (1 - q^{-s})^{-1} and their derivatives
at s = 1.

The m-th derivative of (1 - q^{-s})^{-1} at s = 1 equals
(-log q)^m * A_m(1/q) * (1/q) / (1 - 1/q)^{m+1} where A_m is the Eulerian
polynomial, so everything splits into an exact rational carried as a
Fraction and a transcendental log power handled symbolically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from mpmath import mp

_EULERIAN_MAX = 16
_eulerian_rows = [[1]]


def eulerian_row(m: int):
    """Row m of the Eulerian triangle: A(m, k) for k = 0..max(m-1, 0)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m > _EULERIAN_MAX:
        raise ValueError(f"derivative order {m} > {_EULERIAN_MAX} not supported")
    while len(_eulerian_rows) <= m:
        prev = _eulerian_rows[-1]
        r = len(_eulerian_rows)
        row = []
        for k in range(max(r - 1, 0) + 1):
            left = (k + 1) * (prev[k] if k < len(prev) else 0)
            right = (r - k) * (prev[k - 1] if 0 <= k - 1 < len(prev) else 0)
            row.append(left + right)
        _eulerian_rows.append(row)
    return list(_eulerian_rows[m])


def eulerian_poly_at(m: int, x: Fraction) -> Fraction:
    row = eulerian_row(m)
    acc = Fraction(0)
    for c in reversed(row):
        acc = acc * x + c
    return acc


def _check_prime_power(q: int):
    if q < 2:
        raise ValueError(f"q = {q} is not a prime power")
    n = q
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            if n != 1:
                raise ValueError(f"q = {q} is not a prime power")
            return
        p += 1
    # n prime


@dataclass(frozen=True)
class LocalZetaValue:
    """Value of the m-th derivative of zeta_q at s = 1, split as
    sign * rational_part * (log q)^log_power."""

    q: int
    m: int
    rational_part: Fraction
    log_power: int
    sign: int

    def numeric(self):
        return (self.sign * mp.mpf(self.rational_part.numerator)
                / self.rational_part.denominator
                * mp.log(self.q) ** self.log_power)

    def to_dict(self):
        return {"q": self.q, "m": self.m,
                "rational_part": f"{self.rational_part.numerator}/{self.rational_part.denominator}",
                "log_power": self.log_power, "sign": self.sign}


def rational_part(q: int, m: int) -> Fraction:
    """|zeta_q^{(m)}(1)| / (log q)^m as an exact rational."""
    _check_prime_power(q)
    if m < 0:
        raise ValueError("m must be >= 0")
    x = Fraction(1, q)
    if m == 0:
        return 1 / (1 - x)
    return eulerian_poly_at(m, x) * x / (1 - x) ** (m + 1)


def local_value(q: int, m: int) -> LocalZetaValue:
    rp = rational_part(q, m)
    return LocalZetaValue(q=q, m=m, rational_part=rp, log_power=m,
                          sign=(-1) ** m if m else 1)


def log_derivative_ratio(q: int, m: int):
    """zeta_q^{(m)}(1) / zeta_q(1) as (signed Fraction, log power).

    The log power is always m; the rational factor stays bounded in q.
    """
    rp = rational_part(q, m) / rational_part(q, 0)
    return ((-1) ** m * rp, m)


def ratio_bound_constant(m1: int, m2: int) -> Fraction:
    """2^{2(m1+m2)+2}, the constant in the two-derivative ratio bound."""
    return Fraction(2 ** (2 * (m1 + m2) + 2))


def verify_ratio_lemma(q: int, m1: int, m2: int):
    """Check |zeta_q^{(m1)}(1) zeta_q^{(m2)}(1) / zeta_q(1)^2| <=
    2^{2(m1+m2)+2} (log q)^{m1+m2} exactly, comparing rationals.

    With m1 = m2 = 0 the statement degenerates to 1 <= 4; the mixed
    single-factor case |zeta_q(1)| = q/(q-1) <= 2 is covered by m=0.
    """
    _check_prime_power(q)
    lhs_rat = abs(rational_part(q, m1) * rational_part(q, m2)
                  / rational_part(q, 0) ** 2)
    rhs_rat = ratio_bound_constant(m1, m2)
    holds = lhs_rat <= rhs_rat
    return bool(holds), {
        "q": q, "m1": m1, "m2": m2,
        "lhs_rational": f"{lhs_rat.numerator}/{lhs_rat.denominator}",
        "rhs_rational": f"{rhs_rat.numerator}/{rhs_rat.denominator}",
        "log_power": m1 + m2,
        "holds": bool(holds),
    }


def ratio_envelope(q_max: int = 100, s_max: int = 6):
    """min and max of |ratio(q, s)| (q - 1) / (log q)^s ... the rational part
    of the s-th log-derivative ratio scaled by (q - 1), over prime powers
    q <= q_max and 1 <= s <= s_max.  Gives the empirical sandwich
    c1 / (q - 1) <= |ratio| / (log q)^s <= c2 / (q - 1)."""
    lo, hi = None, None
    argmin, argmax = None, None
    for q in range(2, q_max + 1):
        try:
            _check_prime_power(q)
        except ValueError:
            continue
        for s in range(1, s_max + 1):
            rp, _ = log_derivative_ratio(q, s)
            scaled = abs(rp) * (q - 1)
            if lo is None or scaled < lo:
                lo, argmin = scaled, (q, s)
            if hi is None or scaled > hi:
                hi, argmax = scaled, (q, s)
    return {"min": float(lo), "max": float(hi),
            "min_rational": f"{lo.numerator}/{lo.denominator}",
            "max_rational": f"{hi.numerator}/{hi.denominator}",
            "argmin": argmin, "argmax": argmax,
            "q_max": q_max, "s_max": s_max}


# ---------------------------------------------------------------------------
# Symbolic combinations of log powers


class LogCombo:
    """Finite Q-linear combination of products prod_i (log q_i)^{e_i}.

    Keys are sorted tuples of (q, exponent) pairs with distinct q and
    exponent >= 1; the empty tuple is the rational term.  Supports exact
    equality, which is what the truncated-product checks need.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                self._add_term(key, Fraction(coeff))

    def _add_term(self, key, coeff):
        key = tuple(sorted(key))
        for q, e in key:
            if e < 1:
                raise ValueError("log exponents must be >= 1")
        if len({q for q, _ in key}) != len(key):
            raise ValueError("duplicate q in a log monomial")
        new = self.terms.get(key, Fraction(0)) + coeff
        if new == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    @classmethod
    def rational(cls, c):
        return cls({(): Fraction(c)})

    @classmethod
    def log_power(cls, q: int, e: int, coeff=1):
        if e == 0:
            return cls.rational(coeff)
        return cls({((q, e),): Fraction(coeff)})

    def __add__(self, other):
        out = LogCombo(self.terms)
        for key, coeff in other.terms.items():
            out._add_term(key, coeff)
        return out

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LogCombo({k: c * other for k, c in self.terms.items()})
        out = LogCombo()
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                merged = {}
                for q, e in itertools.chain(k1, k2):
                    merged[q] = merged.get(q, 0) + e
                out._add_term(tuple(merged.items()), c1 * c2)
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LogCombo.rational(other)
        return isinstance(other, LogCombo) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "LogCombo(0)"
        bits = []
        for key in sorted(self.terms):
            c = self.terms[key]
            mono = "*".join(f"log({q})^{e}" if e > 1 else f"log({q})"
                            for q, e in key) or "1"
            bits.append(f"({c})*{mono}")
        return "LogCombo(" + " + ".join(bits) + ")"

    def numeric(self):
        total = mp.mpf(0)
        for key, coeff in self.terms.items():
            term = mp.mpf(coeff.numerator) / coeff.denominator
            for q, e in key:
                term *= mp.log(q) ** e
            total += term
        return total

    def to_dict(self):
        out = {}
        for key, coeff in sorted(self.terms.items()):
            name = "*".join(f"log({q})^{e}" for q, e in key) or "1"
            out[name] = f"{coeff.numerator}/{coeff.denominator}"
        return out


def _ratio_polynomial(q: int, eta: int):
    """|zeta_q^{(s)}(1) / zeta_q(1)| for s = 0..eta, as LogCombos."""
    out = []
    for s in range(eta + 1):
        rational, power = log_derivative_ratio(q, s)
        mag = abs(rational)
        out.append(LogCombo.log_power(q, power, mag) if power else LogCombo.rational(mag))
    return out


def zeta_factor(places, eta: int):
    """Sum over derivative-order tuples (s_v), s_v >= 0 with total <= eta,
    of prod_v |zeta_{q_v}^{(s_v)}(1) / zeta_{q_v}(1)|.

    Computed by forming, for each place, the degree-eta polynomial
    sum_s |ratio(q_v, s)| t^s, multiplying the polynomials truncating
    above degree eta, and adding the coefficients of degrees 0..eta.

    places: iterable of residue cardinalities q_v (repeats allowed: distinct
    places may share q).  Returns {"coefficients": [LogCombo] * (eta + 1),
    "sum": LogCombo, "breakdown": per-place ratio dicts}.  Every local
    polynomial has constant coefficient 1, so the sum is >= 1 and
    nondecreasing under raising eta or adding places.
    """
    if eta < 0:
        raise ValueError("eta must be >= 0")
    qs = list(places)
    for q in qs:
        _check_prime_power(q)
    # polynomial product truncated at degree eta
    prod = [LogCombo.rational(1)] + [LogCombo() for _ in range(eta)]
    breakdown = []
    for q in qs:
        local = _ratio_polynomial(q, eta)
        breakdown.append({"q": q, "ratios": [c.to_dict() for c in local]})
        new = [LogCombo() for _ in range(eta + 1)]
        for i in range(eta + 1):
            for j in range(eta + 1 - i):
                new[i + j] = new[i + j] + prod[i] * local[j]
        prod = new
    total = LogCombo()
    for c in prod:
        total = total + c
    return {"coefficients": prod, "sum": total,
            "breakdown": breakdown, "eta": eta, "places": qs}


def zeta_factor_bruteforce(places, eta: int):
    """Independent route for tests: enumerate the order tuples directly and
    build each local ratio from geometric power sums instead of the Eulerian
    recursion behind rational_part.  Expanding zeta_q(s) = sum_k q^{-ks}
    termwise gives |zeta_q^{(m)}(1)| = (log q)^m sum_k k^m q^{-k}, and
    zeta_q(1) is the m = 0 sum.
    """
    if eta < 0:
        raise ValueError("eta must be >= 0")
    qs = list(places)
    locals_ = []
    for q in qs:
        _check_prime_power(q)
        s0 = _power_sum_geometric(q, 0)
        per = []
        for m in range(eta + 1):
            mag = _power_sum_geometric(q, m) / s0
            per.append(LogCombo.log_power(q, m, mag) if m else LogCombo.rational(mag))
        locals_.append(per)
    coeffs = [LogCombo() for _ in range(eta + 1)]
    total = LogCombo()
    for tup in itertools.product(range(eta + 1), repeat=len(qs)):
        degree = sum(tup)
        if degree > eta:
            continue
        term = LogCombo.rational(1)
        for per, s in zip(locals_, tup):
            term = term * per[s]
        coeffs[degree] = coeffs[degree] + term
        total = total + term
    return {"coefficients": coeffs, "sum": total, "eta": eta, "places": qs}


def _power_sum_geometric(q: int, m: int) -> Fraction:
    """sum_{k>=0} k^m q^{-k}, exact, via the recurrence
    S_m = x/(1-x) * sum_{j<m} C(m,j) S_j with x = 1/q  (from shifting k)."""
    x = Fraction(1, q)
    sums = [1 / (1 - x)]
    for mm in range(1, m + 1):
        acc = Fraction(0)
        for j in range(mm):
            acc += comb(mm, j) * sums[j]
        sums.append(acc * x / (1 - x))
    return sums[m]
