"""Number field invariants and Dedekind zeta Laurent data.

Quadratic fields are computed from scratch (forms, units, L-values);
higher-degree fields come in through JSONL ingestion and are treated as
opaque records that only get internal-consistency checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import gmpy2
from mpmath import mp

from . import analytic, quadratic


class NoLaurentPath(ValueError):
    """Raised when a field has no computed or ingested route to Laurent data."""


@dataclass(frozen=True)
class Signature:
    r1: int
    r2: int

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0 or self.d < 1:
            raise ValueError(f"bad signature ({self.r1}, {self.r2})")

    @property
    def d(self) -> int:
        return self.r1 + 2 * self.r2


@dataclass(frozen=True)
class LaurentData:
    lambda_m1: object  # mpf
    lambda_0: object
    lambda_1: object
    precision_bits: int
    error_bound: tuple  # one bound per coefficient

    def to_dict(self):
        ds = max(2, int(self.precision_bits * 0.302))
        return {
            "lm1": mp.nstr(self.lambda_m1, ds),
            "l0": mp.nstr(self.lambda_0, ds),
            "l1": mp.nstr(self.lambda_1, ds),
            "precision_bits": self.precision_bits,
            "error_bound": [mp.nstr(e, 3) for e in self.error_bound],
        }


@dataclass(frozen=True)
class FinitePlace:
    q: int               # residue field cardinality
    different_norm: int  # N(D_v); 1 at unramified places
    over_prime: int
    index: int = 0       # distinguishes the two places over a split prime

    def __post_init__(self):
        for val, name in ((self.q, "q"), (self.different_norm, "different_norm")):
            n = val
            p = self.over_prime
            while n % p == 0:
                n //= p
            if n != 1:
                raise ValueError(f"{name} = {val} is not a power of {self.over_prime}")

    def sort_key(self):
        return (self.over_prime, self.index, self.q)

    def to_dict(self):
        return {"q": self.q, "different_norm": self.different_norm,
                "over_prime": self.over_prime, "index": self.index}


class PlaceSet:
    """All archimedean places together with a finite set S_fin of finite places."""

    includes_all_archimedean = True

    def __init__(self, field: "NumberField", finite_places=()):
        places = sorted(finite_places, key=FinitePlace.sort_key)
        keys = [p.sort_key() for p in places]
        if len(set(keys)) != len(keys):
            raise ValueError("finite places must be pairwise distinct")
        self.field = field
        self.finite_places = tuple(places)

    @classmethod
    def from_primes(cls, field: "NumberField", primes):
        places = []
        for p in sorted(set(primes)):
            places.extend(places_above(field, p))
        return cls(field, places)

    def __repr__(self):
        qs = ",".join(str(p.q) for p in self.finite_places)
        return f"PlaceSet({self.field.label}; S_fin=[{qs}])"

    def to_dict(self):
        return {"field": self.field.label,
                "finite_places": [p.to_dict() for p in self.finite_places]}


class NumberField:
    """Arithmetic datum of a number field: signature, discriminant, h, R, w.

    provenance is one of 'rationals', 'computed_quadratic', 'ingested'.
    For real quadratic fields the fundamental unit is kept exactly as a
    coordinate pair so the regulator can be re-evaluated at any precision.
    """

    def __init__(self, signature, disc, h, w, label, provenance,
                 unit=None, regulator_value=None, m=None, laurent_strings=None):
        self.signature = signature
        self.disc = disc
        self.h = h
        self.w = w
        self.label = label
        self.provenance = provenance
        self.unit = unit                      # (x, y) Fractions: x + y sqrt(m), or None
        self._regulator_value = regulator_value  # decimal string (ingested) or exact 1
        self.m = m                            # squarefree radicand for quadratic fields
        self.laurent_strings = laurent_strings  # ingested {lm1, l0, l1} decimal strings
        self._laurent_cache = {}
        if h < 1:
            raise ValueError("class number must be >= 1")
        if w < 2:
            raise ValueError("w must be >= 2")
        if disc % 4 not in (0, 1):
            raise ValueError("discriminant must be 0 or 1 mod 4")

    # -- constructors -------------------------------------------------

    @classmethod
    def rationals(cls):
        return cls(Signature(1, 0), 1, 1, 2, "Q", "rationals", regulator_value=1)

    @classmethod
    def quadratic(cls, m: int):
        D = quadratic.discriminant_of(m)
        label = f"Q(sqrt({m}))"
        if m < 0:
            h = quadratic.class_number_imaginary(D)
            w = 4 if D == -4 else 6 if D == -3 else 2
            return cls(Signature(0, 1), D, h, w, label, "computed_quadratic",
                       regulator_value=1, m=m)
        unit = quadratic.fundamental_unit(m)
        h = quadratic.class_number_real(m)
        return cls(Signature(2, 0), D, h, 2, label, "computed_quadratic",
                   unit=unit, m=m)

    @classmethod
    def from_record(cls, rec: dict):
        sig = Signature(rec["r1"], rec["r2"])
        if sig.d != rec["degree"]:
            raise ValueError(f"degree {rec['degree']} != r1 + 2 r2 = {sig.d}")
        disc = rec["disc"]
        if rec["degree"] == 2:
            if disc % 4 not in (0, 1):
                raise ValueError("quadratic disc must be 0 or 1 mod 4")
            if (disc > 0) != (sig.r1 == 2):
                raise ValueError("sign of disc contradicts signature")
        reg = rec["regulator"]
        if float(reg) <= 0:
            raise ValueError("regulator must be positive")
        m = None
        if rec["degree"] == 2:
            m = quadratic.squarefree_kernel(disc)
        return cls(sig, disc, rec["h"], rec["w"],
                   rec.get("label", f"ingested[disc={disc}]"), "ingested",
                   regulator_value=str(reg), m=m,
                   laurent_strings=rec.get("laurent"))

    # -- basic invariants ---------------------------------------------

    @property
    def degree(self):
        return self.signature.d

    @property
    def abs_disc(self):
        return abs(self.disc)

    def delta(self):
        return mp.sqrt(self.abs_disc)

    def regulator(self):
        if self.unit is not None:
            x, y = self.unit
            with mp.extraprec(16):
                val = mp.log(mp.mpf(x.numerator) / x.denominator
                             + mp.mpf(y.numerator) / y.denominator * mp.sqrt(self.m))
            return +val
        return mp.mpf(self._regulator_value)

    def minkowski_constant(self):
        d = self.degree
        val = self.delta() * (4 / mp.pi) ** self.signature.r2 \
            * mp.factorial(d) / mp.mpf(d) ** d
        return val

    def is_quadratic(self):
        return self.degree == 2 and self.m is not None

    def chi(self, a: int) -> int:
        if not self.is_quadratic():
            raise ValueError("chi is defined for quadratic fields only")
        return analytic.kronecker_chi(self.disc, a)

    def __repr__(self):
        return (f"NumberField({self.label}, disc={self.disc}, h={self.h}, "
                f"w={self.w}, sig=({self.signature.r1},{self.signature.r2}))")

    def __eq__(self, other):
        return (isinstance(other, NumberField)
                and self.signature == other.signature
                and self.disc == other.disc and self.h == other.h
                and self.w == other.w)

    def __hash__(self):
        return hash((self.signature, self.disc, self.h, self.w))

    def to_record(self):
        rec = {
            "degree": self.degree, "r1": self.signature.r1, "r2": self.signature.r2,
            "disc": self.disc, "h": self.h,
            "regulator": mp.nstr(self.regulator(), int(mp.dps) + 5),
            "w": self.w, "label": self.label,
        }
        if self.laurent_strings:
            rec["laurent"] = dict(self.laurent_strings)
        return rec


# ---------------------------------------------------------------------------
# Operations


def residue(F: NumberField):
    """lambda_-1 = 2^{r1} (2 pi)^{r2} h R / (w sqrt|D|), the residue of zeta_F."""
    sig = F.signature
    val = (mp.mpf(2) ** sig.r1 * (2 * mp.pi) ** sig.r2
           * F.h * F.regulator() / (F.w * F.delta()))
    assert val > 0
    return val


def laurent_data(F: NumberField, precision_bits: int = 128) -> LaurentData:
    cached = F._laurent_cache.get(precision_bits)
    if cached is not None:
        return cached
    with mp.workprec(precision_bits + 16):
        if F.provenance == "rationals":
            lm1, l0, l1 = analytic.zeta_laurent_q()
        elif F.laurent_strings:
            lm1 = mp.mpf(F.laurent_strings["lm1"])
            l0 = mp.mpf(F.laurent_strings["l0"])
            l1 = mp.mpf(F.laurent_strings["l1"])
        elif F.is_quadratic():
            lm1, l0, l1 = analytic.quadratic_laurent(F.disc)
        else:
            raise NoLaurentPath(f"no Laurent path for {F.label}")
        ulp = mp.mpf(2) ** (-precision_bits)
        bounds = tuple(ulp * (1 + abs(v)) * 8 for v in (lm1, l0, l1))
        if lm1 <= 0:
            raise ValueError("residue of a Dedekind zeta must be positive")
        res = residue(F)
        # An ingested regulator of a field with unit rank > 0 is a decimal
        # string; the class number formula can only be checked to the
        # precision that string carries.  Rank zero means R = 1 exactly.
        slack = mp.mpf(0)
        rank = F.signature.r1 + F.signature.r2 - 1
        if rank > 0 and F.unit is None and isinstance(F._regulator_value, str):
            digits = sum(c.isdigit() for c in F._regulator_value.split("e")[0].lstrip("-0."))
            slack = abs(res) * mp.mpf(10) ** (2 - max(digits, 2))
        if abs(lm1 - res) > bounds[0] + ulp * (1 + abs(res)) * 8 + slack:
            raise ArithmeticError(
                f"Laurent residue {mp.nstr(lm1, 20)} disagrees with the class "
                f"number formula {mp.nstr(res, 20)} for {F.label}")
        data = LaurentData(+lm1, +l0, +l1, precision_bits, bounds)
    F._laurent_cache[precision_bits] = data
    return data


def places_above(F: NumberField, p: int) -> list:
    if F.provenance == "rationals":
        return [FinitePlace(q=p, different_norm=1, over_prime=p)]
    if not F.is_quadratic():
        raise ValueError(f"no splitting data for {F.label} (degree > 2 is ingestion-only)")
    ch = F.chi(p)
    if ch == 1:
        return [FinitePlace(q=p, different_norm=1, over_prime=p, index=0),
                FinitePlace(q=p, different_norm=1, over_prime=p, index=1)]
    if ch == -1:
        return [FinitePlace(q=p * p, different_norm=1, over_prime=p)]
    v, n = 0, F.abs_disc
    while n % p == 0:
        n //= p
        v += 1
    return [FinitePlace(q=p, different_norm=p ** v, over_prime=p)]


def ramified_different_product(F: NumberField) -> int:
    """Product of N(D_v) over ramified places; equals |D_F| for quadratic F."""
    if not F.is_quadratic():
        raise ValueError("defined for quadratic fields")
    prod = 1
    n = F.abs_disc
    d = 2
    while d * d <= n:
        if n % d == 0:
            prod *= places_above(F, d)[0].different_norm
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        prod *= places_above(F, n)[0].different_norm
    return prod


def verify_class_number_bound(F: NumberField):
    """h_F <= (2/pi)^{r2} Delta_F (d-1+log D_F)^{d-1} / (d-1)!"""
    if F.degree < 2:
        raise ValueError("bound applies to degree >= 2")
    d = F.degree
    rhs = ((2 / mp.pi) ** F.signature.r2 * F.delta()
           * (d - 1 + mp.log(F.abs_disc)) ** (d - 1) / mp.factorial(d - 1))
    holds = mp.mpf(F.h) <= rhs
    return bool(holds), {"field": F.label, "h": F.h, "rhs": float(rhs), "holds": bool(holds)}


def brauer_siegel_sweep(family, k: int, eps):
    """Empirical fit of |lambda_k| <= C * D^eps over a same-degree family.

    Also reports C' with |lambda_-1| <= C' (log D)^{d-1}.  Purely empirical:
    the asymptotic constants are non-effective and never asserted.
    """
    if not family:
        raise ValueError("empty family")
    degs = {F.degree for F in family}
    if len(degs) != 1:
        raise ValueError(f"mixed degrees in family: {sorted(degs)}")
    d = degs.pop()
    if isinstance(eps, Fraction):
        eps = mp.mpf(eps.numerator) / eps.denominator
    else:
        eps = mp.mpf(eps)
    if k not in (-1, 0, 1):
        raise ValueError("k must be in {-1, 0, 1}")
    rows = []
    c_fit = mp.mpf(0)
    c_log_fit = mp.mpf(0)
    for F in sorted(family, key=lambda f: (f.abs_disc, f.disc)):
        ld = laurent_data(F)
        lam = {-1: ld.lambda_m1, 0: ld.lambda_0, 1: ld.lambda_1}[k]
        ratio = abs(lam) / mp.mpf(F.abs_disc) ** eps
        logd = mp.log(F.abs_disc) if F.abs_disc > 1 else mp.mpf(1)
        ratio_log = abs(ld.lambda_m1) / logd ** (d - 1) if d > 1 else abs(ld.lambda_m1)
        c_fit = max(c_fit, ratio)
        c_log_fit = max(c_log_fit, ratio_log)
        rows.append({"label": F.label, "disc": F.disc, "lambda_k": float(lam),
                     "ratio": float(ratio)})
    return {"k": k, "eps": float(eps), "degree": d, "count": len(rows),
            "C_fit": float(c_fit), "C_log_fit": float(c_log_fit), "rows": rows}


def ingest_fields(path):
    """Read JSONL field records.  Returns (fields, errors); bad lines are
    reported with their line number, good lines are kept."""
    fields, errors = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                fields.append(NumberField.from_record(rec))
            except (ValueError, KeyError, TypeError) as exc:
                errors.append((ln, str(exc)))
    return fields, errors


def emit_fields(fields, path):
    with open(path, "w", encoding="utf-8") as fh:
        for F in fields:
            fh.write(json.dumps(F.to_record(), sort_keys=True) + "\n")
