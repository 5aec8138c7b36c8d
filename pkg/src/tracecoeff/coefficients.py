"""Partial Dedekind zeta Laurent data and the closed-form global
coefficients for GL(1), GL(2), GL(3).

The partial zeta zeta_F^S(s) drops the Euler factors at the finite places
of S, so its Laurent data at s = 1 is the base data multiplied by the
Taylor series of each (1 - q_v^{-s}).  Unipotent coefficients for n <= 3
are explicit combinations of those Laurent coefficients and zeta_F(2),
zeta_F(3); coefficients of general semisimple elements in GL(2, Q) reduce
to a residue over the splitting field or vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from mpmath import mp

from . import analytic
from .gln import Partition, format_partition, richardson_levi
from .localzeta import zeta_factor
from .numberfield import NumberField, PlaceSet, laurent_data
from .quadratic import squarefree_kernel


def _require_same_field(F: NumberField, S: PlaceSet):
    if S.field.label != F.label:
        raise ValueError(f"place set belongs to {S.field.label}, not {F.label}")


@dataclass(frozen=True)
class PartialLaurentData:
    base: object            # LaurentData of zeta_F
    places: PlaceSet
    lambda_m1_S: object     # mpf
    lambda_0_S: object
    lambda_1_S: object
    error_bound: tuple

    def __post_init__(self):
        if not self.lambda_m1_S > 0:
            raise ArithmeticError("partial residue must stay positive")

    def ratio_0(self):
        """lambda_0^S / lambda_{-1}^S."""
        return self.lambda_0_S / self.lambda_m1_S

    def ratio_1(self):
        """lambda_1^S / lambda_{-1}^S."""
        return self.lambda_1_S / self.lambda_m1_S

    def to_dict(self):
        ds = max(2, int(self.base.precision_bits * 0.302))
        return {
            "lm1_S": mp.nstr(self.lambda_m1_S, ds),
            "l0_S": mp.nstr(self.lambda_0_S, ds),
            "l1_S": mp.nstr(self.lambda_1_S, ds),
            "places": [p.q for p in self.places.finite_places],
            "error_bound": [mp.nstr(e, 3) for e in self.error_bound],
        }


def partial_laurent(F: NumberField, S: PlaceSet,
                    precision_bits: int = 128) -> PartialLaurentData:
    """Laurent data of zeta_F^S at s = 1: the base series times the Taylor
    series of (1 - q_v^{-s}) for each finite v in S.  With S_fin empty the
    base data is returned unchanged."""
    _require_same_field(F, S)
    base = laurent_data(F, precision_bits)
    if not S.finite_places:
        return PartialLaurentData(base, S, base.lambda_m1, base.lambda_0,
                                  base.lambda_1, base.error_bound)
    with mp.workprec(precision_bits + 16):
        cm1, c0, c1 = base.lambda_m1, base.lambda_0, base.lambda_1
        em1, e0, e1 = (mp.mpf(e) for e in base.error_bound)
        for v in S.finite_places:
            q = v.q
            lg = mp.log(q)
            t0 = 1 - mp.mpf(1) / q          # value at s = 1
            t1 = lg / q                     # first derivative
            t2 = -(lg * lg) / (2 * q)       # half the second derivative
            cm1, c0, c1 = (cm1 * t0,
                           cm1 * t1 + c0 * t0,
                           cm1 * t2 + c0 * t1 + c1 * t0)
            em1, e0, e1 = (em1 * t0,
                           em1 * t1 + e0 * t0,
                           em1 * abs(t2) + e0 * t1 + e1 * t0)
        ulp = mp.mpf(2) ** (-precision_bits)
        bounds = tuple(+(e + ulp * (1 + abs(c)) * 8)
                       for e, c in ((em1, cm1), (e0, c0), (e1, c1)))
        return PartialLaurentData(base, S, +cm1, +c0, +c1, bounds)


def zeta_field_value(F: NumberField, k: int):
    """zeta_F(k) for integer k >= 2.  Quadratic fields factor through the
    Kronecker character; higher degree needs externally supplied values."""
    if k < 2:
        raise ValueError("k must be >= 2 (s = 1 is the pole)")
    if F.degree == 1:
        return +mp.zeta(k)
    if F.is_quadratic():
        return mp.zeta(k) * analytic.l_chi_at(F.disc, k)
    raise ValueError(f"zeta_{{{F.label}}}({k}): degree > 2 needs ingested zeta values")


def zeta_field_prime(F: NumberField, k: int = 2):
    """zeta_F'(k) by the product rule through zeta(s) L(s, chi)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if F.degree == 1:
        return +mp.zeta(k, 1, 1)
    if F.is_quadratic():
        return (mp.zeta(k, 1, 1) * analytic.l_chi_at(F.disc, k)
                + mp.zeta(k) * analytic.l_chi_prime_at(F.disc, k))
    raise ValueError(f"zeta_{{{F.label}}}'({k}): degree > 2 needs ingested zeta values")


def volume_gl(F: NumberField, n: int, precision_bits: int = 128):
    """vol(GL_n(F)\\GL_n(A_F)^1) = lambda_{-1} * zeta_F(2) * ... * zeta_F(n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    with mp.workprec(precision_bits + 16):
        val = laurent_data(F, precision_bits).lambda_m1
        for k in range(2, n + 1):
            val = val * zeta_field_value(F, k)
        return +val


@dataclass(frozen=True)
class EllipticDatum:
    """Splitting data of a semisimple part: per block the characteristic
    polynomial over the base field, the absolute discriminant of the
    extension generated by it, and the GL-rank over that extension."""
    char_polys: tuple       # per block, monic integer coefficients high to low
    extension_discs: tuple  # abs disc D_E per block
    ranks: tuple            # k_i per block
    discr_norm: int

    def __post_init__(self):
        if not (len(self.char_polys) == len(self.extension_discs) == len(self.ranks)):
            raise ValueError("per-block data of unequal lengths")
        for poly in self.char_polys:
            if poly[0] != 1 or any(c != int(c) for c in poly):
                raise ValueError(f"characteristic polynomial {poly} is not monic integral")
        prod = 1
        for d, k in zip(self.extension_discs, self.ranks):
            prod *= d ** k
        if prod > self.discr_norm:
            raise ArithmeticError(
                f"discriminant inequality fails: prod D_E^k = {prod} "
                f"> {self.discr_norm} = |discr|")

    @property
    def eta(self) -> int:
        return sum(k - 1 for k in self.ranks)

    def to_dict(self):
        return {"char_polys": [list(p) for p in self.char_polys],
                "extension_discs": list(self.extension_discs),
                "ranks": list(self.ranks),
                "discr_norm": self.discr_norm,
                "eta": self.eta}


@dataclass(frozen=True)
class CoefficientValue:
    n: int
    class_label: str
    field_label: str
    places: tuple           # finite residue cardinalities
    value: object           # mpf
    breakdown: tuple        # ((name, mpf), ...), product equals value
    error_bound: object
    elliptic: object = None
    eta_default: int = 0

    def __post_init__(self):
        prod = mp.mpf(1)
        for _, factor in self.breakdown:
            prod = prod * factor
        tol = self.error_bound + mp.mpf(2) ** (-mp.prec + 8) * (1 + abs(self.value))
        if abs(self.value - prod) > tol:
            raise ArithmeticError(
                f"value {mp.nstr(self.value, 20)} drifted from its breakdown "
                f"product {mp.nstr(prod, 20)}")

    def to_dict(self):
        return {"n": self.n, "class": self.class_label,
                "field": self.field_label, "places": list(self.places),
                "value": mp.nstr(self.value, 25),
                "breakdown": [[name, mp.nstr(v, 25)] for name, v in self.breakdown],
                "error_bound": mp.nstr(self.error_bound, 3),
                "elliptic": self.elliptic.to_dict() if self.elliptic else None,
                "eta": self.eta_default}


def _finite_qs(S: PlaceSet):
    return tuple(p.q for p in S.finite_places)


def coeff_gl1(F: NumberField, S: PlaceSet, precision_bits: int = 128) -> CoefficientValue:
    """The GL(1) coefficient: vol(F^x \\ A_F^1) = lambda_{-1}, independent of S."""
    _require_same_field(F, S)
    base = laurent_data(F, precision_bits)
    with mp.workprec(precision_bits + 16):
        return CoefficientValue(
            n=1, class_label="1", field_label=F.label, places=_finite_qs(S),
            value=base.lambda_m1, breakdown=(("lambda_m1", base.lambda_m1),),
            error_bound=mp.mpf(base.error_bound[0]))


def coeff_gl2_regular(F: NumberField, S: PlaceSet,
                      precision_bits: int = 128) -> CoefficientValue:
    """Regular unipotent coefficient for GL(2):
    (lambda_{-1})^2 * lambda_0^S / lambda_{-1}^S.

    A second route, lambda_{-1} lambda_0 + (lambda_{-1})^2 * sum_v
    |zeta_{q_v}'(1)/zeta_{q_v}(1)|, must agree to 1e-10 relative; a drift
    beyond that means the series product or the local ratios are wrong."""
    _require_same_field(F, S)
    pl = partial_laurent(F, S, precision_bits)
    base = pl.base
    with mp.workprec(precision_bits + 16):
        ratio = pl.ratio_0()
        lm1_sq = base.lambda_m1 ** 2
        value = lm1_sq * ratio
        local_sum = mp.mpf(0)
        for q in _finite_qs(S):
            local_sum += mp.log(q) / (q - 1)
        second = base.lambda_m1 * base.lambda_0 + lm1_sq * local_sum
        scale = max(abs(value), abs(second), mp.mpf(1))
        if abs(value - second) > mp.mpf("1e-10") * scale:
            raise ArithmeticError(
                f"two routes disagree: {mp.nstr(value, 20)} vs {mp.nstr(second, 20)}")
        err = mp.mpf(pl.error_bound[0]) * abs(ratio) * 4 + mp.mpf(pl.error_bound[1]) * 4
        return CoefficientValue(
            n=2, class_label="2", field_label=F.label, places=_finite_qs(S),
            value=+value,
            breakdown=(("lambda_m1_squared", +lm1_sq),
                       ("lambda0S_over_lambdam1S", +ratio)),
            error_bound=+err, eta_default=1)


def coeff_gl3(F: NumberField, S: PlaceSet, which: str,
              precision_bits: int = 128) -> CoefficientValue:
    """GL(3) unipotent coefficients by class:

    regular    (lambda_{-1})^3 ((lambda_0^S/lambda_{-1}^S)^2 + lambda_1^S/lambda_{-1}^S)
    subregular vol(GL_2 x GL_1) * (zeta_F^S)'(2) / zeta_F^S(2)
    trivial    vol(GL_3)
    """
    _require_same_field(F, S)
    if which not in ("regular", "subregular", "trivial"):
        raise ValueError(f"unknown class {which!r}: regular, subregular, or trivial")
    qs = _finite_qs(S)
    with mp.workprec(precision_bits + 16):
        base = laurent_data(F, precision_bits)
        if which == "regular":
            pl = partial_laurent(F, S, precision_bits)
            combo = pl.ratio_0() ** 2 + pl.ratio_1()
            lm1_cu = base.lambda_m1 ** 3
            err = (mp.mpf(pl.error_bound[0]) + mp.mpf(pl.error_bound[1])
                   + mp.mpf(pl.error_bound[2])) * 16 * (1 + abs(combo))
            return CoefficientValue(
                n=3, class_label="3", field_label=F.label, places=qs,
                value=+(lm1_cu * combo),
                breakdown=(("lambda_m1_cubed", +lm1_cu),
                           ("laurent_ratio_combination", +combo)),
                error_bound=+err, eta_default=2)
        if which == "subregular":
            z2 = zeta_field_value(F, 2)
            core = zeta_field_prime(F, 2) / z2
            for q in qs:
                qi = mp.mpf(1) / (q * q)
                core += mp.log(q) * qi / (1 - qi)
            vol_m = base.lambda_m1 * z2 * base.lambda_m1
            err = mp.mpf(base.error_bound[0]) * 8 * (1 + abs(core)) * (1 + abs(z2))
            return CoefficientValue(
                n=3, class_label="2+1", field_label=F.label, places=qs,
                value=+(vol_m * core),
                breakdown=(("volume_gl2", +(base.lambda_m1 * z2)),
                           ("lambda_m1", base.lambda_m1),
                           ("partial_zeta_log_derivative_at_2", +core)),
                error_bound=+err, eta_default=1)
        vol = volume_gl(F, 3, precision_bits)
        err = mp.mpf(base.error_bound[0]) * 8 * abs(vol) / abs(base.lambda_m1)
        return CoefficientValue(
            n=3, class_label="1+1+1", field_label=F.label, places=qs,
            value=vol,
            breakdown=(("lambda_m1", base.lambda_m1),
                       ("zeta_F_2", zeta_field_value(F, 2)),
                       ("zeta_F_3", zeta_field_value(F, 3))),
            error_bound=+err, eta_default=0)


def coeff_trivial(F: NumberField, S: PlaceSet, n: int,
                  precision_bits: int = 128) -> CoefficientValue:
    """Coefficient of the trivial class of GL(n): the volume, S-independent."""
    _require_same_field(F, S)
    if n == 3:
        return coeff_gl3(F, S, "trivial", precision_bits)
    if n == 1:
        return coeff_gl1(F, S, precision_bits)
    if n != 2:
        raise ValueError("exact coefficients stop at n = 3")
    with mp.workprec(precision_bits + 16):
        base = laurent_data(F, precision_bits)
        vol = volume_gl(F, 2, precision_bits)
        err = mp.mpf(base.error_bound[0]) * 8 * abs(vol) / abs(base.lambda_m1)
        return CoefficientValue(
            n=2, class_label="1+1", field_label=F.label, places=_finite_qs(S),
            value=vol,
            breakdown=(("lambda_m1", base.lambda_m1),
                       ("zeta_F_2", zeta_field_value(F, 2))),
            error_bound=+err, eta_default=0)


def coeff_factorize(levi, per_block) -> CoefficientValue:
    """Coefficient of a product class on a Levi GL_{n_1} x ... x GL_{n_r}:
    the product of the block coefficients.  Blocks above GL(3) have no
    exact value and are rejected."""
    levi = tuple(int(x) for x in levi)
    if not levi or any(x < 1 for x in levi):
        raise ValueError("levi must be a nonempty tuple of positive block sizes")
    if len(levi) != len(per_block):
        raise ValueError(f"{len(levi)} blocks but {len(per_block)} coefficients")
    for size, cv in zip(levi, per_block):
        if size > 3:
            raise ValueError(f"unsupported block GL({size}): exact values stop at 3")
        if cv.n != size:
            raise ValueError(f"block of size {size} paired with a GL({cv.n}) value")
    fields = {cv.field_label for cv in per_block}
    places = {cv.places for cv in per_block}
    if len(fields) != 1 or len(places) != 1:
        raise ValueError("blocks must share one field and one place set")
    with mp.workprec(mp.prec + 80):
        value = mp.mpf(1)
        err = mp.mpf(0)
        breakdown = []
        for cv in per_block:
            err = err * abs(cv.value) + cv.error_bound * abs(value)
            value = value * cv.value
            breakdown.extend(cv.breakdown)
        return CoefficientValue(
            n=sum(levi), class_label="|".join(cv.class_label for cv in per_block),
            field_label=fields.pop(), places=places.pop(),
            value=+value, breakdown=tuple(breakdown),
            error_bound=+(err + mp.mpf(2) ** (-mp.prec + 8) * (1 + abs(value))),
            eta_default=sum(cv.eta_default for cv in per_block))


def _parse_matrix_2x2(gamma):
    if len(gamma) != 2 or any(len(row) != 2 for row in gamma):
        raise ValueError("gamma must be a 2x2 matrix")
    return [[Fraction(x) for x in row] for row in gamma]


def coeff_general_gl2(F: NumberField, gamma, S: PlaceSet,
                      precision_bits: int = 128) -> CoefficientValue:
    """Coefficient of a general semisimple-times-unipotent element of
    GL(2, Q), decided from the characteristic polynomial x^2 - t x + n:

    irreducible (t^2 - 4n not a square) -> elliptic; the value is the
        partial residue of zeta_E over E = Q(sqrt(t^2 - 4n)), with S
        replaced by the places of E above S_fin;
    split with distinct rational eigenvalues -> exactly 0;
    central alpha -> the unipotent part decides: scalar gamma gives the
        GL(2) volume, a nontrivial Jordan block gives the regular
        unipotent coefficient.

    The value is invariant under gamma -> alpha * gamma, so a non-integral
    characteristic polynomial only means the caller should clear
    denominators by scaling."""
    if F.degree != 1:
        raise ValueError("general coefficients need splitting fields over the "
                         "base; only Q is computed from scratch (larger bases "
                         "require ingested field data)")
    _require_same_field(F, S)
    g = _parse_matrix_2x2(gamma)
    t = g[0][0] + g[1][1]
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    if det == 0:
        raise ValueError("gamma must be invertible")
    if t.denominator != 1 or det.denominator != 1:
        raise ValueError(
            f"characteristic polynomial x^2 - ({t}) x + ({det}) is not "
            "integral; scale gamma by an integer (the coefficient is "
            "invariant under gamma -> alpha * gamma) and retry")
    t, det = int(t), int(det)
    disc = t * t - 4 * det
    label = f"gamma(t={t},n={det})"
    qs = _finite_qs(S)

    if disc == 0:
        # central semisimple part alpha = t/2 (t is even since t^2 = 4n)
        alpha = t // 2
        datum = EllipticDatum(((1, -alpha),), (1,), (2,), 1)
        scalar = (g[0][1] == 0 and g[1][0] == 0 and g[0][0] == g[1][1])
        inner = (coeff_trivial(F, S, 2, precision_bits) if scalar
                 else coeff_gl2_regular(F, S, precision_bits))
        with mp.workprec(precision_bits + 16):
            return CoefficientValue(
                n=2, class_label=label + ("|scalar" if scalar else "|regular"),
                field_label=F.label, places=qs, value=inner.value,
                breakdown=inner.breakdown, error_bound=inner.error_bound,
                elliptic=datum, eta_default=datum.eta)

    if disc > 0 and isqrt(disc) ** 2 == disc:
        # split semisimple with distinct rational eigenvalues: not elliptic
        with mp.workprec(precision_bits + 16):
            return CoefficientValue(
                n=2, class_label=label + "|split", field_label=F.label,
                places=qs, value=mp.mpf(0),
                breakdown=(("non_elliptic", mp.mpf(0)),),
                error_bound=mp.mpf(0), eta_default=0)

    m = squarefree_kernel(disc)
    E = NumberField.quadratic(m)
    datum = EllipticDatum(((1, -t, det),), (E.abs_disc,), (1,), abs(disc))
    S_E = PlaceSet.from_primes(E, [p.over_prime for p in S.finite_places])
    pl = partial_laurent(E, S_E, precision_bits)
    with mp.workprec(precision_bits + 16):
        breakdown = [("residue_E", pl.base.lambda_m1)]
        val = pl.base.lambda_m1
        for w in S_E.finite_places:
            fac = 1 - mp.mpf(1) / w.q
            breakdown.append((f"local_factor_q{w.q}", fac))
            val = val * fac
        return CoefficientValue(
            n=2, class_label=label + f"|elliptic({E.label})",
            field_label=F.label, places=qs, value=pl.lambda_m1_S,
            breakdown=tuple(breakdown),
            error_bound=mp.mpf(pl.error_bound[0]) + abs(val - pl.lambda_m1_S),
            elliptic=datum, eta_default=datum.eta)


def bound_rhs(F: NumberField, S: PlaceSet, eta: int, kappa, C):
    """C * D_F^kappa * (truncated tuple sum of local zeta ratios over S)."""
    _require_same_field(F, S)
    zf = zeta_factor(_finite_qs(S), eta)
    return mp.mpf(C) * mp.mpf(F.abs_disc) ** mp.mpf(kappa) * zf["sum"].numeric()


_CLASS_NAMES = {
    (1, "trivial"): (1,), (1, "regular"): (1,),
    (2, "regular"): (2,), (2, "trivial"): (1, 1),
    (3, "regular"): (3,), (3, "subregular"): (2, 1), (3, "trivial"): (1, 1, 1),
}


def _parse_class(n: int, cls) -> Partition:
    if isinstance(cls, str):
        key = (n, cls)
        if key not in _CLASS_NAMES:
            raise ValueError(f"no class named {cls!r} for GL({n})")
        return Partition(_CLASS_NAMES[key])
    p = Partition(cls)
    if p.size != n:
        raise ValueError(f"class {p} does not partition {n}")
    return p


def coefficient_for(F: NumberField, S: PlaceSet, n: int, cls,
                    precision_bits: int = 128) -> CoefficientValue:
    """Dispatch to the exact coefficient of a unipotent class of GL(n), n <= 3."""
    p = _parse_class(n, cls)
    if n == 1:
        return coeff_gl1(F, S, precision_bits)
    if n == 2:
        if p == (2,):
            return coeff_gl2_regular(F, S, precision_bits)
        return coeff_trivial(F, S, 2, precision_bits)
    if n == 3:
        which = {(3,): "regular", (2, 1): "subregular", (1, 1, 1): "trivial"}[tuple(p)]
        return coeff_gl3(F, S, which, precision_bits)
    raise ValueError("exact coefficients stop at n = 3")


def conjecture_ratio_report(F: NumberField, S: PlaceSet, n: int, cls,
                            eta: int = None, precision_bits: int = 128) -> dict:
    """Ratio of a class coefficient to the volume coefficient of its
    Richardson Levi, divided by the truncated local zeta sum: the quantity
    whose growth in D_F the bound conjecture controls.  The denominator
    prod_i vol(GL_{m_i}) is S-independent."""
    if n not in (1, 2, 3):
        raise ValueError("reports cover n in {1, 2, 3}")
    p = _parse_class(n, cls)
    cv = coefficient_for(F, S, n, p, precision_bits)
    if eta is None:
        eta = cv.eta_default
    with mp.workprec(precision_bits + 16):
        denom = mp.mpf(1)
        for part in richardson_levi(p):
            denom *= volume_gl(F, part, precision_bits)
        ratio = cv.value / denom
        zf = zeta_factor(_finite_qs(S), eta)["sum"].numeric()
        constant = abs(ratio) / zf
        return {"field": F.label, "disc": F.disc, "n": n,
                "class": format_partition(p),
                "levi": format_partition(richardson_levi(p)),
                "value": +cv.value, "denominator": +denom, "ratio": +ratio,
                "eta": eta, "zeta_factor": +zf, "constant": +constant,
                "places": list(_finite_qs(S))}


def conjecture_sweep(fields, n: int, cls, primes=(), eta: int = None,
                     precision_bits: int = 128) -> dict:
    """conjecture_ratio_report over a family, sorted by |disc|, with the
    empirical fit constant = C * D^kappa: kappa by least squares on logs
    (over D > 1) and the max constant at kappa = 0.  Purely empirical; the
    true constants are non-effective and never asserted."""
    if not fields:
        raise ValueError("empty family")
    rows = []
    for F in sorted(fields, key=lambda f: (f.abs_disc, f.disc)):
        S = PlaceSet.from_primes(F, primes)
        rows.append(conjecture_ratio_report(F, S, n, cls, eta, precision_bits))
    pts = [(mp.log(r["disc"] if r["disc"] > 0 else -r["disc"]), mp.log(r["constant"]))
           for r in rows if abs(r["disc"]) > 1 and r["constant"] > 0]
    fit = {"C_max_kappa0": max(r["constant"] for r in rows), "count": len(rows)}
    if len(pts) >= 2:
        mx = sum(x for x, _ in pts) / len(pts)
        my = sum(y for _, y in pts) / len(pts)
        sxx = sum((x - mx) ** 2 for x, _ in pts)
        sxy = sum((x - mx) * (y - my) for x, y in pts)
        if sxx > 0:
            kappa = sxy / sxx
            fit["kappa_lsq"] = kappa
            fit["C_lsq"] = mp.e ** (my - kappa * mx)
    return {"n": n, "class": format_partition(_parse_class(n, cls)),
            "eta": rows[0]["eta"], "rows": rows, "fit": fit}
