"""Command-line front door.

Grammar: tracecoeff <field|orbits|zeta|lattice|coeff|bound|verify|sweep|siegel>
with --json / --precision / --cache / --seed accepted by every subcommand.
Exit codes: 0 success, 1 usage error, 2 verification failure, 3 computation
error.  JSON output is deterministic: keys sorted, numbers rendered at a
digit count fixed by the precision setting.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from . import coefficients as co
from . import gln
from . import lattice as lat
from . import localzeta as lz
from . import numberfield as nf


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    precision_bits: int = 128
    cache_path: str = None
    output_format: str = "table"
    seed: int = 0

    def __post_init__(self):
        if self.precision_bits < 64:
            raise UsageError("--precision must be at least 64 bits")

    @property
    def digits(self) -> int:
        return max(10, int(self.precision_bits * 0.30103) - 4)


def _config_from(args) -> RunConfig:
    precision = args.precision
    if precision is None:
        precision = int(os.environ.get("TRACECOEFF_PRECISION", "128"))
    cache = args.cache or os.environ.get("TRACECOEFF_CACHE") or None
    fmt = "json" if args.json else getattr(args, "default_format", "table")
    return RunConfig(precision_bits=precision, cache_path=cache,
                     output_format=fmt, seed=args.seed)


def _field_from_spec(spec: str) -> nf.NumberField:
    s = spec.strip()
    if s in ("Q", "q"):
        return nf.NumberField.rationals()
    if s.startswith("Q(sqrt(") and s.endswith("))"):
        s = s[len("Q(sqrt("):-2]
    try:
        m = int(s)
    except ValueError:
        raise UsageError(f"unknown field spec {spec!r}: use Q, an integer "
                         "radicand, or Q(sqrt(m))")
    if m in (0, 1):
        raise UsageError("radicand must not be 0 or 1")
    return nf.NumberField.quadratic(m)


def _primes_from(s: str):
    if not s:
        return ()
    try:
        ps = tuple(int(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"--S expects comma-separated primes, got {s!r}")
    for p in ps:
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise UsageError(f"{p} is not a rational prime")
    return ps


def _num(x, cfg: RunConfig) -> str:
    return mp.nstr(mp.mpf(x), cfg.digits)


def _emit_json(payload) -> str:
    return json.dumps(payload, sort_keys=True)


def _parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise UsageError(f"bad matrix entry {x!r}")
    if isinstance(x, (int, str)):
        return Fraction(str(x))
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10 ** 12)
    raise UsageError(f"bad matrix entry {x!r}")


def _parse_matrix(text: str, complex_ok: bool = False):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"matrix is not valid JSON: {exc}")
    if not isinstance(raw, list) or any(not isinstance(r, list) for r in raw):
        raise UsageError("matrix must be a JSON list of rows")
    out = []
    for row in raw:
        cells = []
        for x in row:
            if isinstance(x, list):
                if not complex_ok:
                    raise UsageError("complex entries are not allowed here")
                if len(x) != 2:
                    raise UsageError(f"complex entry {x!r} needs [re, im]")
                cells.append((_parse_rational(x[0]), _parse_rational(x[1])))
            else:
                cells.append(_parse_rational(x))
        out.append(cells)
    return out


# ---------------------------------------------------------------------------
# field


def _field_report(F: nf.NumberField, cfg: RunConfig) -> dict:
    # Ingested fields of degree > 2 may carry no Laurent data; report what
    # the invariants alone determine and leave the expansion unavailable.
    try:
        base = nf.laurent_data(F, cfg.precision_bits)
        lam = {"lambda_m1": _num(base.lambda_m1, cfg),
               "lambda_0": _num(base.lambda_0, cfg),
               "lambda_1": _num(base.lambda_1, cfg)}
    except nf.NoLaurentPath:
        lam = {"lambda_m1": "unavailable", "lambda_0": "unavailable",
               "lambda_1": "unavailable"}
    return {
        "label": F.label, "degree": F.degree,
        "r1": F.signature.r1, "r2": F.signature.r2,
        "disc": F.disc, "h": F.h, "w": F.w,
        "regulator": _num(F.regulator(), cfg),
        "residue": _num(nf.residue(F), cfg),
        **lam,
        "minkowski_constant": _num(F.minkowski_constant(), cfg),
    }


_FIELD_KEYS = ["label", "degree", "r1", "r2", "disc", "h", "w", "regulator",
               "residue", "lambda_m1", "lambda_0", "lambda_1",
               "minkowski_constant"]


def cmd_field(args, cfg: RunConfig):
    modes = [args.quadratic is not None, args.rationals, args.ingest is not None]
    if sum(modes) != 1:
        raise UsageError("pick exactly one of --quadratic M, --rationals, --ingest PATH")
    if args.ingest:
        fields, errors = nf.ingest_fields(args.ingest)
        for ln, msg in errors:
            print(f"line {ln}: {msg}", file=sys.stderr)
        reports = [_field_report(F, cfg) for F in fields]
        if cfg.output_format == "json":
            return 0 if (reports or not errors) else 3, _emit_json(reports)
        lines = []
        for rep in reports:
            lines.extend(f"{k} = {rep[k]}" for k in _FIELD_KEYS)
            lines.append("")
        return 0 if (reports or not errors) else 3, "\n".join(lines).rstrip("\n")
    F = (nf.NumberField.rationals() if args.rationals
         else nf.NumberField.quadratic(args.quadratic))
    rep = _field_report(F, cfg)
    if cfg.output_format == "json":
        return 0, _emit_json(rep)
    return 0, "\n".join(f"{k} = {rep[k]}" for k in _FIELD_KEYS)


# ---------------------------------------------------------------------------
# orbits


def _orbit_rows(n: int):
    rows = []
    for row in gln.orbit_table(n):
        rows.append({
            "levi": gln.format_partition(row["levi"]),
            "classes": "|".join(gln.format_partition(c) for c in row["classes"]),
            "induced": gln.format_partition(row["induced"]),
            "M": gln.format_partition(row["m_levi"]),
        })
    return rows


def _render_columns(rows, headers):
    widths = [max(len(h), max((len(r[h]) for r in rows), default=0))
              for h in headers]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(r[h].ljust(w)
                               for h, w in zip(headers, widths)).rstrip())
    return "\n".join(lines)


def cmd_orbits(args, cfg: RunConfig):
    if args.n < 1:
        raise UsageError("n must be positive")
    if args.classes:
        text = gln.classes_csv(args.n)
        if cfg.output_format == "json":
            header, *body = text.strip().split("\n")
            keys = header.split(",")
            return 0, _emit_json([dict(zip(keys, line.split(",")))
                                  for line in body])
        return 0, text.rstrip("\n")
    rows = _orbit_rows(args.n)
    if cfg.output_format == "json":
        return 0, _emit_json(rows)
    return 0, _render_columns(rows, ["levi", "classes", "induced", "M"])


# ---------------------------------------------------------------------------
# zeta


def cmd_zeta(args, cfg: RunConfig):
    if (args.q is None) == (args.places is None):
        raise UsageError("pick one of --q Q --m M (local derivative) or "
                         "--places LIST --eta N (truncated ratio sum)")
    if args.q is not None:
        v = lz.local_value(args.q, args.m)
        rp, power = lz.log_derivative_ratio(args.q, args.m)
        rep = {
            "q": args.q, "m": args.m,
            "rational_part": str(lz.rational_part(args.q, args.m)),
            "ratio_rational": str(rp), "ratio_log_power": power,
            "value": _num(v.numeric(), cfg),
        }
        if cfg.output_format == "json":
            return 0, _emit_json(rep)
        return 0, "\n".join(f"{k} = {rep[k]}" for k in
                            ["q", "m", "rational_part", "ratio_rational",
                             "ratio_log_power", "value"])
    try:
        places = [int(x) for x in args.places.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--places expects comma-separated integers, got {args.places!r}")
    zf = lz.zeta_factor(places, args.eta)
    rep = {
        "places": places, "eta": args.eta,
        "sum": _num(zf["sum"].numeric(), cfg),
        "coefficients": [c.to_dict() for c in zf["coefficients"]],
    }
    if cfg.output_format == "json":
        return 0, _emit_json(rep)
    lines = [f"places = {','.join(str(q) for q in places)}",
             f"eta = {args.eta}", f"sum = {rep['sum']}"]
    for k, c in enumerate(rep["coefficients"]):
        body = " + ".join(f"({v})*{name}" for name, v in sorted(c.items()))
        lines.append(f"degree {k}: {body if body else '0'}")
    return 0, "\n".join(lines)


# ---------------------------------------------------------------------------
# lattice


def cmd_lattice(args, cfg: RunConfig):
    if (args.gram is None) == (args.ideal is None):
        raise UsageError("pick one of --gram MATRIX or --ideal A,B --field M")
    if args.gram is not None:
        G = _parse_matrix(args.gram)
        L = lat.Lattice.from_gram(G)
        label = "gram"
        extra = {}
    else:
        if args.field is None:
            raise UsageError("--ideal needs --field M (quadratic radicand)")
        F = _field_from_spec(args.field)
        parts = [int(x) for x in args.ideal.split(",")]
        if len(parts) != 2:
            raise UsageError("--ideal expects A,B for the module A Z + (B + omega) Z")
        il = lat.ideal_lattice(F, tuple(parts))
        L = il.embedded
        label = f"ideal({parts[0]},{parts[1]}) of {F.label}"
        extra = {"ideal": il.to_dict()}
    sm = lat.successive_minima(L)
    ok_mink, rep_mink = lat.verify_minkowski_second(L)
    ok_dual, rep_dual = lat.verify_duality_pairing(L)
    rep = {
        "lattice": label, "dimension": L.d,
        "det": _num(L.det(), cfg),
        "minima_squared": [str(v) for v in sm.values_squared],
        "witnesses": [[int(c) if Fraction(c).denominator == 1 else str(c)
                       for c in w] for w in sm.witnesses],
        "minkowski_second": rep_mink, "duality_pairing": rep_dual,
        **extra,
    }
    code = 0 if (ok_mink and ok_dual) else 2
    if args.count is not None:
        r = Fraction(args.count)
        rep["count"] = lat.count_points(L, args.K, r)
        if not rep["count"]["bound_holds"]:
            code = 2
    if cfg.output_format == "json":
        return code, _emit_json(rep)
    lines = [f"lattice = {label}", f"dimension = {L.d}", f"det = {rep['det']}",
             f"minima_squared = {' '.join(rep['minima_squared'])}",
             f"minkowski_second = {'pass' if ok_mink else 'FAIL'}",
             f"duality_pairing = {'pass' if ok_dual else 'FAIL'}"]
    if "ideal" in rep:
        lines.append(f"ideal_norm = {rep['ideal']['norm']}")
    if "count" in rep:
        c = rep["count"]
        lines.append(f"count(r={c['r']}, K={c['K']}) = {c['count']} "
                     f"bound_holds={c['bound_holds']}")
    return code, "\n".join(lines)


# ---------------------------------------------------------------------------
# coeff / bound


def cmd_coeff(args, cfg: RunConfig):
    F = _field_from_spec(args.field)
    S = nf.PlaceSet.from_primes(F, _primes_from(args.S))
    modes = [args.gl1, args.gl2, args.gl3, args.general is not None]
    if sum(modes) != 1:
        raise UsageError("pick exactly one of --gl1, --gl2, --gl3, --general MATRIX")
    if args.general is not None:
        g = _parse_matrix(args.general)
        cv = co.coeff_general_gl2(F, g, S, cfg.precision_bits)
    elif args.gl1:
        cv = co.coeff_gl1(F, S, cfg.precision_bits)
    elif args.gl2:
        cv = co.coefficient_for(F, S, 2, args.cls, cfg.precision_bits)
    else:
        cv = co.coefficient_for(F, S, 3, args.cls, cfg.precision_bits)
    rep = cv.to_dict()
    rep["value"] = _num(cv.value, cfg)
    rep["breakdown"] = [[name, _num(v, cfg)] for name, v in cv.breakdown]
    if cfg.output_format == "json":
        return 0, _emit_json(rep)
    lines = [f"field = {rep['field']}", f"n = {rep['n']}",
             f"class = {rep['class']}",
             f"S_fin = {','.join(str(q) for q in rep['places'])}",
             f"value = {rep['value']}"]
    for name, v in rep["breakdown"]:
        lines.append(f"  factor {name} = {v}")
    if rep["elliptic"]:
        lines.append(f"elliptic = {json.dumps(rep['elliptic'], sort_keys=True)}")
    return 0, "\n".join(lines)


def cmd_bound(args, cfg: RunConfig):
    F = _field_from_spec(args.field)
    S = nf.PlaceSet.from_primes(F, _primes_from(args.S))
    val = co.bound_rhs(F, S, args.eta, mp.mpf(args.kappa), mp.mpf(args.C))
    rep = {"field": F.label, "disc": F.disc,
           "places": [p.q for p in S.finite_places],
           "eta": args.eta, "kappa": args.kappa, "C": args.C,
           "value": _num(val, cfg)}
    if cfg.output_format == "json":
        return 0, _emit_json(rep)
    return 0, "\n".join(f"{k} = {rep[k]}" for k in
                        ["field", "places", "eta", "kappa", "C", "value"])


# ---------------------------------------------------------------------------
# verify


def _prime_powers(qmax: int):
    for q in range(2, qmax + 1):
        p = min(f for f in range(2, q + 1) if q % f == 0)
        n = q
        while n % p == 0:
            n //= p
        if n == 1:
            yield q


def _imaginary_quadratics(dmax: int):
    fields = []
    for mm in range(1, dmax + 1):
        m = -mm
        if abs(m) != abs(nf.quadratic.squarefree_kernel(m)):
            continue
        F = nf.NumberField.quadratic(m)
        if F.abs_disc <= dmax:
            fields.append(F)
    fields.sort(key=lambda f: f.abs_disc)
    return fields


def _random_int_lattice(rng, d: int) -> lat.Lattice:
    while True:
        B = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(d)]
        G = [[Fraction(sum(B[i][k] * B[j][k] for k in range(d)))
              for j in range(d)] for i in range(d)]
        try:
            return lat.Lattice.from_gram(G)
        except (ValueError, ZeroDivisionError):
            continue


def _random_rational_g(rng):
    while True:
        g = [[Fraction(rng.randint(-9, 9), rng.randint(1, 9))
              for _ in range(2)] for _ in range(2)]
        if g[0][0] * g[1][1] - g[0][1] * g[1][0] != 0:
            return g


def _random_gaussian_g(rng):
    while True:
        g = [[(Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
               Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
              for _ in range(2)] for _ in range(2)]
        det_re = (g[0][0][0] * g[1][1][0] - g[0][0][1] * g[1][1][1]
                  - g[0][1][0] * g[1][0][0] + g[0][1][1] * g[1][0][1])
        det_im = (g[0][0][0] * g[1][1][1] + g[0][0][1] * g[1][1][0]
                  - g[0][1][0] * g[1][0][1] - g[0][1][1] * g[1][0][0])
        if det_re != 0 or det_im != 0:
            return g


def _suite_zeta_ratio(args, cfg):
    checks, failures = 0, []
    for q in _prime_powers(args.qmax):
        for m1 in range(args.mmax + 1):
            for m2 in range(args.mmax + 1 - m1):
                ok, rep = lz.verify_ratio_lemma(q, m1, m2)
                checks += 1
                if not ok:
                    failures.append(rep)
    return checks, failures


def _suite_minkowski(args, cfg):
    checks, failures = 0, []
    rng = random.Random(cfg.seed)
    lattices = [lat.Lattice.from_gram(
        [[Fraction(1 if i == j else 0) for j in range(d)] for i in range(d)])
        for d in range(1, 5)]
    lattices += [_random_int_lattice(rng, rng.randint(1, 4))
                 for _ in range(args.trials)]
    for i, L in enumerate(lattices):
        for name, verifier in (("minkowski_second", lat.verify_minkowski_second),
                               ("duality_pairing", lat.verify_duality_pairing),
                               ("witness_index", lat.verify_witness_index)):
            ok, rep = verifier(L)
            checks += 1
            if not ok:
                failures.append({"lattice": i, "check": name, **rep})
    return checks, failures


def _suite_lattice_count(args, cfg):
    checks, failures = 0, []
    rng = random.Random(cfg.seed)
    lattices = [lat.Lattice.from_gram([[Fraction(1)]]),
                lat.Lattice.from_gram([[Fraction(1), 0], [0, Fraction(1)]]),
                lat.Lattice.from_gram([[Fraction(2), 1], [1, Fraction(2)]])]
    lattices += [_random_int_lattice(rng, rng.randint(1, 2)) for _ in range(4)]
    for i, L in enumerate(lattices):
        for K in (1, 2):
            for r in (Fraction(1), Fraction(3, 2), Fraction(2)):
                got = lat.count_points(L, K, r)
                want = lat.count_points_oracle(L, K, r)
                checks += 1
                if got["count"] != want or not got["bound_holds"]:
                    failures.append({"lattice": i, "K": K, "r": str(r),
                                     "count": got["count"], "oracle": want,
                                     "bound_holds": got["bound_holds"]})
    return checks, failures


def _suite_class_bound(args, cfg):
    checks, failures = 0, []
    for F in _imaginary_quadratics(args.dmax):
        ok, rep = nf.verify_class_number_bound(F)
        checks += 1
        if not ok:
            failures.append(rep)
    return checks, failures


def _compositions(n: int):
    for mask in range(1 << (n - 1)):
        out, run = [], 1
        for i in range(n - 1):
            if mask >> i & 1:
                out.append(run)
                run = 1
            else:
                run += 1
        out.append(run)
        yield tuple(out)


def _suite_induction_oracle(args, cfg):
    checks, failures = 0, []
    for n in range(1, args.n + 1):
        for levi in _compositions(n):
            cls = [gln.trivial_class(b) for b in levi]
            got = gln.induce_oracle(levi, cls, trials=3, seed=cfg.seed)
            want = gln.induce(levi, cls)
            checks += 1
            if got != want:
                failures.append({"levi": levi, "classes": "trivial",
                                 "induce": list(want), "oracle": list(got)})
    rng = random.Random(cfg.seed + 1)
    for t in range(args.trials):
        n = rng.randint(2, min(args.n, 6))
        levi = rng.choice(list(_compositions(n)))
        cls = [rng.choice(gln.partitions_of(b)) for b in levi]
        got = gln.induce_oracle(levi, cls, trials=4, seed=cfg.seed + t)
        want = gln.induce(levi, cls)
        checks += 1
        if got != want:
            failures.append({"levi": levi, "classes": [list(c) for c in cls],
                             "induce": list(want), "oracle": list(got)})
    return checks, failures


def _suite_siegel(args, cfg):
    checks, failures = 0, []
    for t in range(args.trials):
        rng = random.Random(cfg.seed * 1000003 + t)
        if t % 2 == 0:
            F, g = "Q", _random_rational_g(rng)
        else:
            F, g = "-1", _random_gaussian_g(rng)
        checks += 1
        try:
            rep = gln.gl2_siegel_certify(_field_from_spec(F), g)
            if rep["margin"] < 1:
                failures.append({"trial": t, "field": F, "margin": rep["margin"]})
        except ArithmeticError as exc:
            failures.append({"trial": t, "field": F, "error": str(exc)})
    return checks, failures


def _suite_gl2_routes(args, cfg):
    checks, failures = 0, []
    fields = [nf.NumberField.rationals(), nf.NumberField.quadratic(-1),
              nf.NumberField.quadratic(-3), nf.NumberField.quadratic(5)]
    for F in fields:
        for primes in ((), (2,), (2, 3), (5, 7)):
            checks += 1
            try:
                S = nf.PlaceSet.from_primes(F, primes)
                co.coeff_gl2_regular(F, S, cfg.precision_bits)
            except ArithmeticError as exc:
                failures.append({"field": F.label, "primes": list(primes),
                                 "error": str(exc)})
    return checks, failures


_SUITES = {
    "zeta-ratio": _suite_zeta_ratio,
    "minkowski": _suite_minkowski,
    "lattice-count": _suite_lattice_count,
    "class-bound": _suite_class_bound,
    "induction-oracle": _suite_induction_oracle,
    "siegel": _suite_siegel,
    "gl2-routes": _suite_gl2_routes,
}


def cmd_verify(args, cfg: RunConfig):
    suites = list(_SUITES) if args.suite == "all" else [args.suite]
    total, reports, all_ok = 0, [], True
    for name in suites:
        checks, failures = _SUITES[name](args, cfg)
        total += checks
        ok = not failures
        all_ok = all_ok and ok
        reports.append({"suite": name, "checks": checks,
                        "failures": failures, "pass": ok})
    code = 0 if all_ok else 2
    if cfg.output_format == "json":
        return code, _emit_json({"reports": reports, "pass": all_ok,
                                 "total_checks": total})
    lines = []
    for rep in reports:
        status = "PASS" if rep["pass"] else "FAIL"
        lines.append(f"{rep['suite']}: {status} ({rep['checks']} checks)")
        for f in rep["failures"][:5]:
            lines.append(f"  failure: {json.dumps(f, sort_keys=True, default=str)}")
    lines.append(f"{'all suites pass' if all_ok else 'FAILURES present'} "
                 f"({total} checks)")
    return code, "\n".join(lines)


# ---------------------------------------------------------------------------
# sweep


_CONJECTURES = {
    "gl2": (2, "regular"),
    "gl2-trivial": (2, "trivial"),
    "gl3-regular": (3, "regular"),
    "gl3-subregular": (3, "subregular"),
    "gl3-trivial": (3, "trivial"),
}

_SWEEP_COLUMNS = ["field", "disc", "class", "value", "denominator", "ratio",
                  "eta", "zeta_factor", "constant"]


def _render_sweep_row(row, cfg: RunConfig) -> dict:
    out = {}
    for k in _SWEEP_COLUMNS:
        v = row[k]
        out[k] = _num(v, cfg) if isinstance(v, mp.mpf) else v
    return out


def _cache_key(args, cfg: RunConfig) -> str:
    return (f"conjecture={args.conjecture};dmax={args.dmax};"
            f"primes={args.primes or ''};eta={args.eta};"
            f"precision={cfg.precision_bits}")


def _cache_load(cfg: RunConfig, key: str) -> dict:
    rows = {}
    if not cfg.cache_path or not os.path.exists(cfg.cache_path):
        return rows
    with open(cfg.cache_path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                continue
            if rec.get("key") == key:
                rows[rec["disc"]] = rec["row"]
    return rows


def _cache_append(cfg: RunConfig, key: str, disc: int, row: dict):
    if not cfg.cache_path:
        return
    with open(cfg.cache_path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps({"key": key, "disc": disc, "row": row},
                            sort_keys=True) + "\n")
        fh.flush()


def cmd_sweep(args, cfg: RunConfig):
    if (args.conjecture is None) == (args.brauer_siegel is None):
        raise UsageError("pick one of --conjecture NAME or --brauer-siegel K")
    fields = _imaginary_quadratics(args.dmax)
    if not fields:
        raise UsageError(f"no fields with |disc| <= {args.dmax}")

    if args.brauer_siegel is not None:
        sweep = nf.brauer_siegel_sweep(fields, args.brauer_siegel,
                                       mp.mpf(args.eps))
        if cfg.output_format == "json":
            return 0, _emit_json(sweep)
        lines = ["label,disc,lambda_k,ratio"]
        for r in sweep["rows"]:
            lines.append(f"{r['label']},{r['disc']},{r['lambda_k']!r},{r['ratio']!r}")
        lines.append(f"# C_fit={sweep['C_fit']!r} C_log_fit={sweep['C_log_fit']!r}")
        return 0, "\n".join(lines)

    if args.conjecture not in _CONJECTURES:
        raise UsageError(f"unknown conjecture {args.conjecture!r}: "
                         f"{', '.join(sorted(_CONJECTURES))}")
    n, cls = _CONJECTURES[args.conjecture]
    primes = _primes_from(args.primes)
    key = _cache_key(args, cfg)
    cached = _cache_load(cfg, key)
    rows = []
    for F in fields:
        if F.disc in cached:
            rows.append(cached[F.disc])
            continue
        S = nf.PlaceSet.from_primes(F, primes)
        row = co.conjecture_ratio_report(F, S, n, cls, args.eta,
                                         cfg.precision_bits)
        rendered = _render_sweep_row(row, cfg)
        _cache_append(cfg, key, F.disc, rendered)
        rows.append(rendered)
    constants = [mp.mpf(r["constant"]) for r in rows]
    fit = {"C_max_kappa0": _num(max(constants), cfg), "count": len(rows)}
    pts = [(mp.log(abs(int(r["disc"]))), mp.log(mp.mpf(r["constant"])))
           for r in rows if abs(int(r["disc"])) > 1 and mp.mpf(r["constant"]) > 0]
    if len(pts) >= 2:
        mx = sum(x for x, _ in pts) / len(pts)
        my = sum(y for _, y in pts) / len(pts)
        sxx = sum((x - mx) ** 2 for x, _ in pts)
        if sxx > 0:
            kappa = sum((x - mx) * (y - my) for x, y in pts) / sxx
            fit["kappa_lsq"] = _num(kappa, cfg)
            fit["C_lsq"] = _num(mp.e ** (my - kappa * mx), cfg)
    if cfg.output_format == "json":
        return 0, _emit_json({"rows": rows, "fit": fit, "n": n, "class": cls})
    lines = [",".join(_SWEEP_COLUMNS)]
    for r in rows:
        lines.append(",".join(str(r[k]) for k in _SWEEP_COLUMNS))
    lines.append("# " + " ".join(f"{k}={v}" for k, v in sorted(fit.items())))
    return 0, "\n".join(lines)


# ---------------------------------------------------------------------------
# siegel


def cmd_siegel(args, cfg: RunConfig):
    modes = [args.matrix is not None, args.random is not None,
             args.constants]
    if sum(modes) != 1:
        raise UsageError("pick one of --matrix MATRIX, --random N, --constants")
    F = _field_from_spec(args.field)
    if args.constants:
        rc = gln.reduction_constants(F, args.n)
        rep = rc.to_dict()
        if cfg.output_format == "json":
            return 0, _emit_json(rep)
        lines = [f"field = {rep['field']}", f"n = {rep['n']}",
                 f"c_F = {rep['c_F']!r}"]
        for gap in rep["roots"]:
            lines.append(f"root {gap['root']}: gap = {gap['gap']!r}")
        return 0, "\n".join(lines)
    if args.matrix is not None:
        g = _parse_matrix(args.matrix, complex_ok=(F.degree == 2))
        rep = gln.gl2_siegel_certify(F, g)
        payload = {"field": rep["field"], "c_F": _num(rep["c_F"], cfg),
                   "gap": _num(rep["gap"], cfg),
                   "margin": _num(rep["margin"], cfg),
                   "gap_exact": rep["gap_exact"], "z0": rep["z0"],
                   "gamma": rep["gamma"]}
        if cfg.output_format == "json":
            return 0, _emit_json(payload)
        return 0, "\n".join([f"field = {payload['field']}",
                             f"gap = {payload['gap']}",
                             f"c_F = {payload['c_F']}",
                             f"margin = {payload['margin']}",
                             f"gamma = {json.dumps(payload['gamma'])}"])
    worst = None
    for t in range(args.random):
        rng = random.Random(cfg.seed * 1000003 + t)
        g = (_random_rational_g(rng) if F.degree == 1
             else _random_gaussian_g(rng))
        rep = gln.gl2_siegel_certify(F, g)
        if worst is None or rep["margin"] < worst["margin"]:
            worst = rep
    payload = {"field": F.label, "trials": args.random,
               "c_F": _num(worst["c_F"], cfg),
               "min_margin": _num(worst["margin"], cfg),
               "min_gap": _num(worst["gap"], cfg), "all_certified": True}
    if cfg.output_format == "json":
        return 0, _emit_json(payload)
    return 0, "\n".join(f"{k} = {payload[k]}" for k in
                        ["field", "trials", "c_F", "min_gap", "min_margin",
                         "all_certified"])


# ---------------------------------------------------------------------------
# parser assembly


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="machine-readable output")
    common.add_argument("--precision", type=int, default=None,
                        help="working precision in bits (>= 64; "
                             "env TRACECOEFF_PRECISION)")
    common.add_argument("--cache", default=None,
                        help="append-only JSONL cache file (env TRACECOEFF_CACHE)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized checks")

    parser = _Parser(prog="tracecoeff",
                     description="number-field zeta Laurent data, lattice "
                                 "geometry, unipotent orbit combinatorics, "
                                 "and exact low-rank trace coefficients")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", parents=[common],
                       help="field invariants, residue, Laurent data")
    p.add_argument("--quadratic", type=int, default=None, metavar="M",
                   help="quadratic field of radicand M")
    p.add_argument("--rationals", action="store_true", help="the base field Q")
    p.add_argument("--ingest", default=None, metavar="PATH",
                   help="JSONL field records")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("orbits", parents=[common],
                       help="unipotent classes and induction table")
    p.add_argument("n", type=int)
    p.add_argument("--classes", action="store_true",
                   help="per-class CSV with duals and dimensions")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("zeta", parents=[common],
                       help="local zeta derivatives and truncated ratio sums")
    p.add_argument("--q", type=int, default=None,
                   help="residue cardinality (prime power)")
    p.add_argument("--m", type=int, default=0, help="derivative order")
    p.add_argument("--places", default=None,
                   help="comma-separated residue cardinalities")
    p.add_argument("--eta", type=int, default=1, help="truncation degree")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("lattice", parents=[common],
                       help="successive minima, point counts, ideal lattices")
    p.add_argument("--gram", default=None, help="Gram matrix as JSON")
    p.add_argument("--ideal", default=None, metavar="A,B",
                   help="ideal A Z + (B + omega) Z of a quadratic field")
    p.add_argument("--field", default=None, metavar="M",
                   help="quadratic radicand for --ideal")
    p.add_argument("--count", default=None, metavar="R",
                   help="count dual points of norm <= R (exact rational)")
    p.add_argument("--K", type=int, default=1, help="number of dual copies")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("coeff", parents=[common],
                       help="exact GL(1)/GL(2)/GL(3) coefficients")
    p.add_argument("--field", default="Q")
    p.add_argument("--S", default="", help="comma-separated rational primes")
    p.add_argument("--gl1", action="store_true")
    p.add_argument("--gl2", action="store_true")
    p.add_argument("--gl3", action="store_true")
    p.add_argument("--cls", default="regular",
                   choices=["regular", "subregular", "trivial"])
    p.add_argument("--general", default=None, metavar="MATRIX",
                   help="2x2 matrix as JSON for the general coefficient")
    p.set_defaults(func=cmd_coeff)

    p = sub.add_parser("bound", parents=[common],
                       help="C * D^kappa * truncated local ratio sum")
    p.add_argument("--field", default="Q")
    p.add_argument("--S", default="")
    p.add_argument("--eta", type=int, required=True)
    p.add_argument("--kappa", default="0")
    p.add_argument("--C", default="1")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", parents=[common],
                       help="batch verification suites")
    p.add_argument("suite", choices=sorted(_SUITES) + ["all"])
    p.add_argument("--qmax", type=int, default=100)
    p.add_argument("--mmax", type=int, default=6)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--dmax", type=int, default=1000)
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common],
                       help="family sweeps with empirical constant fits")
    p.add_argument("--conjecture", default=None,
                   choices=sorted(_CONJECTURES))
    p.add_argument("--brauer-siegel", dest="brauer_siegel", type=int,
                   default=None, choices=[-1, 0, 1], metavar="K",
                   help="Laurent coefficient growth sweep instead")
    p.add_argument("--eps", default="0.5", help="exponent for --brauer-siegel")
    p.add_argument("--dmax", type=int, default=100,
                   help="imaginary quadratic fields with |disc| <= dmax")
    p.add_argument("--primes", default="", help="finite places, e.g. 2,3")
    p.add_argument("--eta", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("siegel", parents=[common],
                       help="certified Siegel-set gaps and reduction constants")
    p.add_argument("--field", default="Q", help="Q, -1, or -3")
    p.add_argument("--matrix", default=None,
                   help="2x2 matrix as JSON; complex entries as [re, im]")
    p.add_argument("--random", type=int, default=None, metavar="N",
                   help="certify N seeded random matrices")
    p.add_argument("--constants", action="store_true",
                   help="reduction-theory constants for GL(n)")
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_siegel)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    old_prec = mp.prec
    try:
        args = parser.parse_args(argv)
        cfg = _config_from(args)
        mp.prec = cfg.precision_bits + 16
        code, text = args.func(args, cfg)
        if text:
            print(text)
        return code
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, ZeroDivisionError, OSError,
            KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    finally:
        mp.prec = old_prec


if __name__ == "__main__":
    sys.exit(main())
