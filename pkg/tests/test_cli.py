"""End-to-end checks of the command line front door.

Every test drives cli.main with an argv list, so the full
parse -> compute -> render -> exit code path is exercised in process.
"""

import json
import subprocess
import sys
from pathlib import Path

import pytest
from mpmath import mp

from tracecoeff import cli

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- orbits -----------------------------------------------------------


def test_orbits_golden_table(capsys):
    code, out, err = run(capsys, "orbits", "3")
    assert code == 0
    assert err == ""
    assert out == (GOLDEN / "orbits3.txt").read_text()


def test_orbits_single_block(capsys):
    code, out, _ = run(capsys, "orbits", "1")
    assert code == 0
    assert out.splitlines() == ["levi  classes  induced  M",
                                "1     1        1        1"]


def test_orbits_row_counts(capsys):
    # induction rows: one per (partition of n, class tuple of its blocks)
    _, out, _ = run(capsys, "orbits", "6")
    assert len(out.splitlines()) == 1 + 66
    _, out, _ = run(capsys, "orbits", "6", "--classes")
    assert len(out.splitlines()) == 1 + 11


def test_orbits_classes_csv(capsys):
    code, out, _ = run(capsys, "orbits", "3", "--classes")
    assert code == 0
    assert out == ("partition,dual,dim_class,dim_radical,dim_a_L_G\n"
                   "1+1+1,3,0,0,0\n"
                   "2+1,2+1,4,2,1\n"
                   "3,1+1+1,6,3,2\n")


def test_orbits_rejects_nonpositive(capsys):
    code, _, err = run(capsys, "orbits", "0")
    assert code == 1
    assert "usage error" in err


# -- field ------------------------------------------------------------


def test_field_gaussian_invariants(capsys):
    code, out, _ = run(capsys, "field", "--quadratic", "-1")
    assert code == 0
    lines = dict(ln.split(" = ", 1) for ln in out.splitlines())
    assert lines["label"] == "Q(sqrt(-1))"
    assert lines["disc"] == "-4"
    assert lines["h"] == "1"
    assert lines["w"] == "4"
    assert lines["residue"].startswith("0.78539816339744830961566")
    assert lines["residue"] == lines["lambda_m1"]
    assert lines["lambda_0"].startswith("0.646245439894813")


def test_field_rationals(capsys):
    code, out, _ = run(capsys, "field", "--rationals")
    lines = dict(ln.split(" = ", 1) for ln in out.splitlines())
    assert code == 0
    assert lines["label"] == "Q"
    assert lines["residue"] == "1.0"
    assert lines["lambda_0"].startswith("0.57721566490153286")


def test_field_requires_exactly_one_mode(capsys):
    assert run(capsys, "field")[0] == 1
    assert run(capsys, "field", "--rationals", "--quadratic", "5")[0] == 1


def test_field_ingest_batch(tmp_path, capsys):
    path = tmp_path / "fields.jsonl"
    path.write_text("\n".join([
        '{"degree": 2, "r1": 0, "r2": 1, "disc": -4, "h": 1, "w": 4,'
        ' "regulator": "1.0", "label": "gauss"}',
        '{"degree": 3, "r1": 1, "r2": 1, "disc": -23, "h": 1, "w": 2,'
        ' "regulator": "0.2811949487", "label": "cubic23"}',
        "not json",
        '{"degree": 2, "r1": 1, "r2": 1, "disc": -4, "h": 1, "w": 4,'
        ' "regulator": "1.0"}',
    ]) + "\n")
    code, out, err = run(capsys, "field", "--ingest", str(path))
    assert code == 0
    assert "line 3" in err and "line 4" in err
    assert "label = gauss" in out
    assert "label = cubic23" in out
    # quadratic records get the computed expansion, the cubic has none
    assert "lambda_m1 = 0.78539816339744830961566" in out
    assert "lambda_m1 = unavailable" in out


def test_field_ingest_all_bad_is_an_error(tmp_path, capsys):
    path = tmp_path / "junk.jsonl"
    path.write_text("nope\n")
    code, out, err = run(capsys, "field", "--ingest", str(path))
    assert code == 3
    assert "line 1" in err


def test_field_ingest_missing_file(capsys):
    code, _, err = run(capsys, "field", "--ingest", "/nonexistent/f.jsonl")
    assert code == 3
    assert "error" in err


# -- zeta -------------------------------------------------------------


def test_zeta_local_derivative(capsys):
    code, out, _ = run(capsys, "zeta", "--q", "2", "--m", "1")
    lines = dict(ln.split(" = ", 1) for ln in out.splitlines())
    assert code == 0
    assert lines["rational_part"] == "2"
    assert lines["ratio_rational"] == "-1"
    assert lines["ratio_log_power"] == "1"
    assert lines["value"].startswith("-1.38629436111989")


def test_zeta_places_sum(capsys):
    code, out, _ = run(capsys, "zeta", "--places", "2,3", "--eta", "1")
    assert code == 0
    assert "sum = 2.2424533248940001" in out
    assert "degree 0: (1/1)*1" in out
    assert "(1/2)*log(3)^1" in out


def test_zeta_requires_one_mode(capsys):
    assert run(capsys, "zeta")[0] == 1
    assert run(capsys, "zeta", "--q", "2", "--places", "2,3")[0] == 1
    assert run(capsys, "zeta", "--places", "2,x")[0] == 1


def test_zeta_rejects_non_prime_power(capsys):
    code, _, err = run(capsys, "zeta", "--q", "6", "--m", "1")
    assert code == 3
    assert "error" in err


# -- lattice ----------------------------------------------------------


def test_lattice_gram_report(capsys):
    code, out, _ = run(capsys, "lattice", "--gram", "[[2,0],[0,3]]")
    assert code == 0
    lines = dict(ln.split(" = ", 1) for ln in out.splitlines())
    assert lines["minima_squared"] == "2 3"
    assert lines["minkowski_second"] == "pass"
    assert lines["duality_pairing"] == "pass"


def test_lattice_ideal_json(capsys):
    code, out, _ = run(capsys, "lattice", "--ideal", "2,1", "--field", "-1",
                       "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["dimension"] == 2
    assert payload["det"] == "4.0"
    assert payload["ideal"]["norm"] == "2/1"
    assert all(isinstance(c, (int, str)) for w in payload["witnesses"] for c in w)


def test_lattice_count(capsys):
    code, out, _ = run(capsys, "lattice", "--gram", "[[1,0],[0,1]]",
                       "--count", "1", "--K", "1")
    assert code == 0
    assert "count(r=1.0, K=1) = 5 bound_holds=True" in out


def test_lattice_mode_errors(capsys):
    assert run(capsys, "lattice")[0] == 1
    assert run(capsys, "lattice", "--gram", "[[1]]", "--ideal", "2,1")[0] == 1
    assert run(capsys, "lattice", "--ideal", "2,1")[0] == 1  # needs --field
    code, _, err = run(capsys, "lattice", "--gram", "[[0,0],[0,0]]")
    assert code == 3


# -- coeff ------------------------------------------------------------


def test_coeff_gl2_with_place(capsys):
    code, out, _ = run(capsys, "coeff", "--gl2", "--field", "Q", "--S", "2")
    assert code == 0
    lines = dict(ln.split(" = ", 1) for ln in out.splitlines()
                 if not ln.startswith(" "))
    assert lines["class"] == "2"
    assert lines["value"].startswith("1.2703628454614781")


def test_coeff_gl3_subregular(capsys):
    code, out, _ = run(capsys, "coeff", "--gl3", "--cls", "subregular",
                       "--field", "Q")
    assert code == 0
    assert "class = 2+1" in out
    assert "value = -0.93754825431584375" in out


def test_coeff_general_rotation(capsys):
    code, out, _ = run(capsys, "coeff", "--general", "[[0,-1],[1,0]]",
                       "--field", "Q")
    assert code == 0
    assert "value = 0.78539816339744830961566" in out
    assert "elliptic(Q(sqrt(-1)))" in out
    elliptic = json.loads(out.split("elliptic = ", 1)[1].splitlines()[0])
    assert elliptic["char_polys"] == [[1, 0, 1]]
    assert elliptic["extension_discs"] == [4]


def test_coeff_general_split_is_zero(capsys):
    code, out, _ = run(capsys, "coeff", "--general", "[[1,0],[0,2]]",
                       "--field", "Q")
    assert code == 0
    assert "value = 0.0" in out
    assert "split" in out


def test_coeff_mode_errors(capsys):
    assert run(capsys, "coeff")[0] == 1
    assert run(capsys, "coeff", "--gl1", "--gl2")[0] == 1
    code, _, err = run(capsys, "coeff", "--general", "[[1,1],[1,1]]")
    assert code == 3  # singular


# -- bound ------------------------------------------------------------


def test_bound_worked_value(capsys):
    code, out, _ = run(capsys, "bound", "--eta", "1", "--kappa", "0",
                       "--C", "1", "--field", "Q", "--S", "2")
    assert code == 0
    assert "value = 1.6931471805599453" in out


def test_bound_requires_eta(capsys):
    assert run(capsys, "bound", "--field", "Q")[0] == 1


def test_bound_scales_with_constant(capsys):
    _, out1, _ = run(capsys, "bound", "--eta", "0", "--C", "1", "--json")
    _, out2, _ = run(capsys, "bound", "--eta", "0", "--C", "2.5", "--json")
    v1 = mp.mpf(json.loads(out1)["value"])
    v2 = mp.mpf(json.loads(out2)["value"])
    assert abs(v2 - mp.mpf("2.5") * v1) < mp.mpf(10) ** -20


# -- verify -----------------------------------------------------------


def test_verify_suite_passes(capsys):
    code, out, _ = run(capsys, "verify", "zeta-ratio", "--qmax", "20",
                       "--mmax", "3")
    assert code == 0
    assert "zeta-ratio: PASS (120 checks)" in out
    assert "all suites pass" in out


def test_verify_all_small(capsys):
    code, out, _ = run(capsys, "verify", "all", "--qmax", "20", "--mmax", "3",
                       "--n", "4", "--dmax", "120", "--trials", "4")
    assert code == 0
    assert "FAIL" not in out


def test_verify_json_payload(capsys):
    code, out, _ = run(capsys, "verify", "zeta-ratio", "--qmax", "20",
                       "--mmax", "3", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["pass"] is True
    assert payload["total_checks"] == 120


def test_verify_failure_sets_exit_two(capsys, monkeypatch):
    monkeypatch.setitem(cli._SUITES, "zeta-ratio",
                        lambda args, cfg: (3, [{"q": 2, "why": "synthetic"}]))
    code, out, _ = run(capsys, "verify", "zeta-ratio")
    assert code == 2
    assert "zeta-ratio: FAIL" in out
    assert "synthetic" in out


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "no-such-suite")[0] == 1


# -- sweep ------------------------------------------------------------


def test_sweep_conjecture_table(capsys):
    code, out, _ = run(capsys, "sweep", "--conjecture", "gl2", "--dmax", "24",
                       "--primes", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ("field,disc,class,value,denominator,ratio,eta,"
                        "zeta_factor,constant")
    assert len(lines) == 1 + 10 + 1
    assert lines[1].startswith("Q(sqrt(-3)),-3,2,")
    assert lines[-1].startswith("# C_lsq=")
    assert "kappa_lsq=" in lines[-1] and "count=10" in lines[-1]


def test_sweep_cache_resume_is_byte_identical(tmp_path, capsys):
    cache = tmp_path / "sweep.jsonl"
    argv = ["sweep", "--conjecture", "gl2", "--dmax", "24", "--primes", "2",
            "--json", "--cache", str(cache)]
    code1, out1, _ = run(capsys, *argv)
    assert code1 == 0
    first = cache.read_text()
    assert len(first.splitlines()) == 10
    code2, out2, _ = run(capsys, *argv)
    assert code2 == 0
    assert out2 == out1
    assert cache.read_text() == first  # nothing recomputed, nothing appended


def test_sweep_cache_key_isolation(tmp_path, capsys):
    # same cache file, different eta: rows must not be reused across keys
    cache = tmp_path / "sweep.jsonl"
    base = ["sweep", "--conjecture", "gl2", "--dmax", "12", "--primes", "",
            "--json", "--cache", str(cache)]
    _, out1, _ = run(capsys, *base)
    _, out2, _ = run(capsys, *base[:-3], "--eta", "2", "--json",
                     "--cache", str(cache))
    assert out1 != out2
    keys = {json.loads(ln)["key"] for ln in cache.read_text().splitlines()}
    assert len(keys) == 2


def test_sweep_brauer_siegel(capsys):
    code, out, _ = run(capsys, "sweep", "--brauer-siegel", "0", "--dmax", "24")
    assert code == 0
    assert out.splitlines()[0] == "label,disc,lambda_k,ratio"
    assert any(ln.startswith("Q(sqrt(-1)),-4,0.64624") for ln in out.splitlines())


def test_sweep_requires_one_mode(capsys):
    assert run(capsys, "sweep")[0] == 1
    assert run(capsys, "sweep", "--conjecture", "gl2",
               "--brauer-siegel", "0")[0] == 1


# -- siegel -----------------------------------------------------------


def test_siegel_matrix_certificate(capsys):
    code, out, _ = run(capsys, "siegel", "--matrix", "[[1,1],[0,1]]",
                       "--field", "Q")
    lines = dict(ln.split(" = ", 1) for ln in out.splitlines())
    assert code == 0
    assert lines["gap"] == "1.0"
    assert lines["c_F"].startswith("0.78539816339744830")
    assert mp.mpf(lines["margin"]) > 1


def test_siegel_random_batch(capsys):
    code, out, _ = run(capsys, "siegel", "--random", "5", "--field", "-1",
                       "--seed", "3")
    lines = dict(ln.split(" = ", 1) for ln in out.splitlines())
    assert code == 0
    assert lines["trials"] == "5"
    assert lines["all_certified"] == "True"
    assert mp.mpf(lines["min_gap"]) >= mp.mpf(lines["c_F"])


def test_siegel_random_deterministic(capsys):
    argv = ["siegel", "--random", "4", "--field", "Q", "--seed", "11", "--json"]
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2


def test_siegel_constants(capsys):
    code, out, _ = run(capsys, "siegel", "--constants", "--n", "3",
                       "--field", "Q")
    assert code == 0
    assert "root [0, 1]: gap = 1.2732395447351628" in out
    assert "root [0, 2]: gap = 1.6211389382774044" in out


def test_siegel_unsupported_field(capsys):
    code, _, err = run(capsys, "siegel", "--matrix", "[[1,0],[0,1]]",
                       "--field", "5")
    assert code == 3


# -- config and determinism -------------------------------------------


def test_json_output_deterministic(capsys):
    for argv in (["field", "--quadratic", "-3", "--json"],
                 ["coeff", "--gl2", "--field", "Q", "--S", "2,3", "--json"],
                 ["zeta", "--places", "2,3", "--eta", "2", "--json"]):
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2
        payload = json.loads(out1)
        assert out1.strip() == json.dumps(payload, sort_keys=True)


def test_precision_env_and_flag_precedence(capsys, monkeypatch):
    _, out_default, _ = run(capsys, "field", "--rationals", "--json")
    monkeypatch.setenv("TRACECOEFF_PRECISION", "96")
    _, out_env, _ = run(capsys, "field", "--rationals", "--json")
    _, out_flag, _ = run(capsys, "field", "--rationals", "--precision", "192",
                         "--json")
    d = json.loads(out_default)["lambda_0"]
    e = json.loads(out_env)["lambda_0"]
    f = json.loads(out_flag)["lambda_0"]
    assert len(e) < len(d) < len(f)
    assert d.startswith(e[: len(e) - 2])
    assert f.startswith(d[: len(d) - 2])


def test_precision_floor(capsys):
    code, _, err = run(capsys, "field", "--rationals", "--precision", "32")
    assert code == 1
    assert "at least 64" in err


def test_precision_restored_after_run(capsys):
    before = mp.prec
    run(capsys, "field", "--quadratic", "5", "--precision", "256")
    assert mp.prec == before


def test_unknown_subcommand_is_usage_error(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1
    assert "usage error" in err


def test_errors_go_to_stderr_not_stdout(capsys):
    code, out, err = run(capsys, "field", "--quadratic", "0")
    assert code == 3
    assert out == ""
    assert err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tracecoeff.cli"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    proc = subprocess.run(
        [sys.executable, "-m", "tracecoeff.cli", "bound", "--eta", "0"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "value = 1.0" in proc.stdout
