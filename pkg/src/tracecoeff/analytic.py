"""High-precision analytic building blocks.

Everything here is about the expansion of zeta and Dirichlet L-functions
around s = 1 and their values at integer points s >= 2.  The quadratic
Dedekind zeta factors as zeta(s) * L(s, chi_D), so the Laurent data of
zeta_F at s = 1 reduces to L(1, chi), L'(1, chi), L''(1, chi) together
with the Stieltjes constants of zeta itself.

L-derivatives at 1 are obtained from the Hurwitz decomposition

    L(s, chi) = q^{-s} sum_{a=1}^{q-1} chi(a) zeta(s, a/q)

whose pole parts cancel (sum chi(a) = 0), leaving the generalized
Stieltjes constants gamma_n(a/q).  Those are evaluated by Euler-Maclaurin
directly; mpmath's stieltjes(n, a) would do but is orders of magnitude
too slow for family sweeps.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mp

import gmpy2

# First two Stieltjes constants of zeta(s) = 1/(s-1) + sum (-1)^n gamma_n (s-1)^n / n!,
# as 50-decimal-digit literals.  Universal constants, embedded rather than computed.
GAMMA0 = "0.57721566490153286060651209008240243104215933593992"
GAMMA1 = "-0.07281584548367672486058637587490131913773633833434"

_GUARD_BITS = 24


def euler_gamma():
    return mp.mpf(GAMMA0)


def stieltjes_gamma1():
    return mp.mpf(GAMMA1)


def kronecker_chi(D: int, a: int) -> int:
    """Kronecker symbol (D/a), the quadratic character mod |D|."""
    return int(gmpy2.kronecker(D, a))


# ---------------------------------------------------------------------------
# Generalized Stieltjes constants by Euler-Maclaurin.
#
# gamma_n(x) = lim_M [ sum_{k=0}^{M} log^n(k+x)/(k+x) - log^{n+1}(M+x)/(n+1) ].
#
# With f(t) = log^n(t+x)/(t+x) and F its antiderivative, summation by EM from
# k = N gives
#
#   gamma_n(x) = sum_{k<N} f(k) - F(N) + f(N)/2
#                - sum_{j>=1} B_{2j}/(2j)! f^{(2j-1)}(N) + R.
#
# Derivatives of f stay in the span of log^i(u)/u^{k+1}, i <= n, so the
# coefficient arrays below are small integer tables.

def _deriv_coeffs(n: int, kmax: int):
    # c[k][i]: f^(k)(t) = sum_i c[k][i] * log^i(t+x) / (t+x)^(k+1)
    c = [[0] * (n + 1) for _ in range(kmax + 1)]
    c[0][n] = 1
    for k in range(kmax):
        for i in range(n + 1):
            v = -(k + 1) * c[k][i]
            if i + 1 <= n:
                v += (i + 1) * c[k][i + 1]
            c[k + 1][i] = v
    return c


def stieltjes_g(n: int, x) -> mp.mpf:
    """gamma_n(x) for 0 < x <= 1, n in {0, 1, 2}, at the current precision."""
    if n < 0 or n > 2:
        raise ValueError("only orders 0..2 are needed and supported")
    with mp.extraprec(_GUARD_BITS):
        xm = mp.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mp.mpf(x)
        if not (0 < xm <= 1):
            raise ValueError("x must lie in (0, 1]")
        N = max(40, int(mp.prec // 4))
        J = max(24, int(mp.prec // 8))
        total = mp.mpf(0)
        for k in range(N):
            u = k + xm
            total += mp.log(u) ** n / u
        u = N + xm
        L = mp.log(u)
        total -= L ** (n + 1) / (n + 1)
        total += L ** n / u / 2
        coeffs = _deriv_coeffs(n, 2 * J - 1)
        Lpow = [L ** i for i in range(n + 1)]
        upow = u * u
        for j in range(1, J + 1):
            ck = coeffs[2 * j - 1]
            fd = sum(ck[i] * Lpow[i] for i in range(n + 1)) / upow
            total -= mpmath.bernoulli(2 * j) / mp.factorial(2 * j) * fd
            upow *= u * u
    return +total


# ---------------------------------------------------------------------------
# Dirichlet L-values for the real primitive character chi_D.

def l_chi_derivatives(D: int, orders: int = 3):
    """(L(1,chi), L'(1,chi), L''(1,chi)) for the Kronecker character of
    discriminant D, via generalized Stieltjes constants.

    Returns the first `orders` of the three values (always computes chi-sums
    c_n = sum_a chi(a) gamma_n(a/q) for n < orders).
    """
    q = abs(D)
    with mp.extraprec(_GUARD_BITS):
        c = [mp.mpf(0) for _ in range(orders)]
        for a in range(1, q):
            ch = kronecker_chi(D, a)
            if ch == 0:
                continue
            for nn in range(orders):
                c[nn] += ch * stieltjes_g(nn, Fraction(a, q))
        logq = mp.log(q)
        out = [c[0] / q]
        if orders > 1:
            out.append((-c[1] - logq * c[0]) / q)
        if orders > 2:
            out.append((c[2] + 2 * logq * c[1] + logq ** 2 * c[0]) / q)
    return tuple(+v for v in out)


def l_chi_one_closed(D: int):
    """L(1, chi_D) by the finite closed forms.

    D < 0 (odd character):  -pi q^{-3/2} sum_a chi(a) a.
    D > 0 (even character): -q^{-1/2} sum_a chi(a) log sin(pi a / q).
    """
    q = abs(D)
    if D < 0:
        s = sum(kronecker_chi(D, a) * a for a in range(1, q))
        return -mp.pi * s / (mp.mpf(q) ** mp.mpf("1.5"))
    with mp.extraprec(_GUARD_BITS):
        total = mp.mpf(0)
        for a in range(1, q):
            ch = kronecker_chi(D, a)
            if ch:
                total += ch * mp.log(mp.sin(mp.pi * a / q))
        total = -total / mp.sqrt(q)
    return +total


def l_chi_at(D: int, k: int):
    """L(k, chi_D) for integer k >= 2, by the Hurwitz decomposition."""
    q = abs(D)
    with mp.extraprec(_GUARD_BITS):
        total = mp.mpf(0)
        for a in range(1, q):
            ch = kronecker_chi(D, a)
            if ch:
                total += ch * mp.zeta(k, mp.mpf(a) / q)
        total /= mp.mpf(q) ** k
    return +total


def l_chi_prime_at(D: int, k: int):
    """L'(k, chi_D) for integer k >= 2."""
    q = abs(D)
    with mp.extraprec(_GUARD_BITS):
        total = mp.mpf(0)
        logq = mp.log(q)
        for a in range(1, q):
            ch = kronecker_chi(D, a)
            if ch:
                x = mp.mpf(a) / q
                total += ch * (mp.zeta(k, x, 1) - logq * mp.zeta(k, x))
        total /= mp.mpf(q) ** k
    return +total


def zeta_laurent_q():
    """(lambda_-1, lambda_0, lambda_1) of the Riemann zeta at s = 1."""
    return mp.mpf(1), euler_gamma(), -stieltjes_gamma1()


def quadratic_laurent(D: int):
    """(lambda_-1, lambda_0, lambda_1) of zeta_F, F quadratic of discriminant D.

    zeta_F = zeta * L(., chi_D); multiplying the two expansions at s = 1:
       lambda_-1 = L(1)
       lambda_0  = gamma L(1) + L'(1)
       lambda_1  = -gamma_1 L(1) + gamma L'(1) + L''(1)/2
    """
    L0, L1, L2 = l_chi_derivatives(D, 3)
    g0 = euler_gamma()
    g1 = stieltjes_gamma1()
    return L0, g0 * L0 + L1, -g1 * L0 + g0 * L1 + L2 / 2
