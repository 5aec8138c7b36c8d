"""Quadratic field arithmetic from scratch.

Class numbers of imaginary quadratic fields by reduced primitive binary
quadratic forms; fundamental units of real quadratic fields by the
continued-fraction (Pell) method with an exact cube-root index check;
real class numbers by the Dirichlet closed form.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from mpmath import mp

from .analytic import l_chi_one_closed


def is_squarefree(m: int) -> bool:
    m = abs(m)
    if m == 0:
        return False
    if m % 4 == 0:
        return False
    i = 3
    while i * i <= m:
        if m % (i * i) == 0:
            return False
        i += 2
    return True


def squarefree_kernel(n: int) -> int:
    """The squarefree integer m with n = m * (square); sign preserved."""
    if n == 0:
        raise ValueError("0 has no squarefree kernel")
    sign = -1 if n < 0 else 1
    n = abs(n)
    m = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e % 2:
                m *= d
        d += 1 if d == 2 else 2
    return sign * m * n


def discriminant_of(m: int) -> int:
    """Field discriminant of Q(sqrt(m)), m squarefree != 0, 1."""
    if not is_squarefree(m) or m in (0, 1):
        raise ValueError(f"m = {m} is not a valid quadratic radicand (squarefree, != 0, 1)")
    return m if m % 4 == 1 else 4 * m


def reduced_forms(D: int):
    """All reduced primitive forms (a, b, c) of discriminant D < 0.

    Reduced: -a < b <= a <= c, and b >= 0 if a == c.  One per ideal class.
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("D must be a negative discriminant")
    forms = []
    amax = gmpy2.isqrt(-D // 3)
    for a in range(1, int(amax) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if gmpy2.gcd(gmpy2.gcd(a, b), c) != 1:
                continue
            forms.append((a, b, c))
    forms.sort()
    return forms


def class_number_imaginary(D: int) -> int:
    return len(reduced_forms(D))


def pell_unit(m: int):
    """Fundamental solution (x, y) of x^2 - m y^2 = ±1 via the continued
    fraction of sqrt(m); returns (x, y, norm) with x, y > 0."""
    if m <= 1 or int(gmpy2.isqrt(m)) ** 2 == m:
        raise ValueError("m must be a nonsquare integer > 1")
    a0 = int(gmpy2.isqrt(m))
    # CF state: (P + sqrt(m))/Q
    P, Q, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    while True:
        P = a * Q - P
        Q = (m - P * P) // Q
        a = (a0 + P) // Q
        if Q == 1 and a == 2 * a0:
            # period closes; current convergent (h, k) solves Pell
            break
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k
    norm = h * h - m * k * k
    assert norm in (1, -1)
    return h, k, norm


def fundamental_unit(m: int):
    """Fundamental unit of O_{Q(sqrt m)}, m > 1 squarefree, as Fractions
    (x, y) meaning x + y sqrt(m), x, y > 0.

    For m ≡ 1 mod 4 the Pell unit generates a subgroup of index 1 or 3 of
    the full unit group; the possible cube root (a + b sqrt m)/2 is guessed
    numerically and certified by exact integer cubing.
    """
    x0, y0, _ = pell_unit(m)
    if m % 4 != 1:
        return Fraction(x0), Fraction(y0)
    with mp.workprec(max(mp.prec, 2 * int(gmpy2.bit_length(x0)) + 64)):
        u = x0 + y0 * mp.sqrt(m)
        r = mp.cbrt(u)
        for nrm in (1, -1):
            a = int(mp.nint(r + nrm / r))
            b = int(mp.nint((2 * r - a) / mp.sqrt(m)))
            if a <= 0 or b <= 0 or (a - b) % 2:
                continue
            # ((a + b sqrt m)/2)^3 = (a^3 + 3 a b^2 m)/8 + (3 a^2 b + b^3 m)/8 sqrt m
            xn = a * a * a + 3 * a * b * b * m
            yn = 3 * a * a * b + b * b * b * m
            if xn == 8 * x0 and yn == 8 * y0 and a * a - m * b * b == 4 * nrm:
                return Fraction(a, 2), Fraction(b, 2)
    return Fraction(x0), Fraction(y0)


def regulator(m: int):
    """log of the fundamental unit of Q(sqrt m), m > 1 squarefree."""
    x, y = fundamental_unit(m)
    with mp.extraprec(16):
        val = mp.log(mp.mpf(x.numerator) / x.denominator
                     + mp.mpf(y.numerator) / y.denominator * mp.sqrt(m))
    return +val


def class_number_real(m: int) -> int:
    """h of Q(sqrt m), m > 1 squarefree, by h = sqrt(D) L(1,chi) / (2R),
    rounded with a certified distance-from-integer check."""
    D = discriminant_of(m)
    with mp.extraprec(16):
        h_raw = mp.sqrt(D) * l_chi_one_closed(D) / (2 * regulator(m))
        h = int(mp.nint(h_raw))
        dist = abs(h_raw - h)
        if dist > mp.mpf("1e-6"):
            raise ArithmeticError(
                f"class number of Q(sqrt {m}) did not certify: {mp.nstr(h_raw, 25)} "
                f"is {mp.nstr(dist, 5)} from the nearest integer")
    if h < 1:
        raise ArithmeticError(f"nonpositive class number for m = {m}")
    return h


def fundamental_discriminants_imaginary(bound: int):
    """All fundamental D < 0 with |D| <= bound, ascending in |D|."""
    out = []
    for n in range(3, bound + 1):
        if n % 4 == 3 and is_squarefree(n):
            out.append(-n)  # m = -n ≡ 1 mod 4
        elif n % 4 == 0:
            mm = -(n // 4)
            if is_squarefree(mm) and (-mm) % 4 in (1, 2):
                out.append(-n)
    return out


def fundamental_discriminants_real(bound: int):
    """All fundamental D > 1 with D <= bound, ascending."""
    out = []
    for n in range(5, bound + 1):
        if n % 4 == 1 and is_squarefree(n):
            out.append(n)
        elif n % 4 == 0:
            mm = n // 4
            if is_squarefree(mm) and mm % 4 in (2, 3):
                out.append(n)
    return out
