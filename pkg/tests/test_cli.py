"""Serialization and the command line front end."""

import json
import random
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from koszul_mf import GF, QQ, OneHomotopyModule, Poly, PolyMatrix, RingTower, TwoHomotopyModule, pullback_a, pushforward_a
from koszul_mf.cli import main
from koszul_mf.generators import random_chain_map, random_matrix, random_mf, random_short_one, random_short_two, random_tower
from koszul_mf.mf import fold
from koszul_mf.serialize import ParseError, dump, dumps, load, loads, to_obj


def one(x, F=QQ):
    return PolyMatrix.from_rows(F, [[x]])


@pytest.fixture
def ss(tmp_path, T2):
    M = TwoHomotopyModule.two_term(T2, one(T2.s), one(T2.s), one(T2.s))
    p = tmp_path / "M.json"
    dump(M, str(p))
    return M, str(p)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# -- serialization -----------------------------------------------------------------


@given(st.integers(0, 2**32))
def test_round_trip_random(seed):
    rng = random.Random(seed)
    T = random_tower(rng, rng.choice((QQ, GF(5), GF(7))), 3)
    T = RingTower(T.field, T.e, T.field(rng.choice((1, -2))) if T.field.p == 0 else T.u)
    x = rng.choice(
        [
            lambda: random_short_two(rng, T),
            lambda: random_short_one(rng, T),
            lambda: random_mf(rng, T, rng.randint(1, 3)),
            lambda: random_matrix(rng, T.field, rng.randint(0, 3), rng.randint(0, 3)),
        ]
    )()
    assert loads(dumps(x)) == x
    assert dumps(loads(dumps(x))) == dumps(x)


def test_rational_encoding():
    T = RingTower(QQ, 2, "-3/4")
    M = OneHomotopyModule.two_term(T, one(T.s), one(Poly(QQ, [0, QQ("-3/4")])))
    obj = to_obj(M)
    assert obj["tower"]["u"] == ["-3", "4"]
    assert obj["matrices"]["h"][1][0][0] == [["0", "1"], ["-3", "4"]]
    assert loads(dumps(M)) == M


def test_morphism_round_trip(T2):
    rng = random.Random(3)
    E, F = random_short_one(rng, T2, 1), random_short_one(rng, T2, 1)
    phi = random_chain_map(rng, E, F)
    back = loads(dumps(phi))
    assert back.as_dict() == phi.as_dict() and back.source == E and back.target == F
    f = fold(phi)
    g = loads(dumps(f))
    assert (g.phi0, g.phi1) == (f.phi0, f.phi1)


@pytest.mark.parametrize(
    "text,where",
    [
        ("{", "line 1"),
        ("[]", "$"),
        ('{"version": 2, "kind": "mf"}', "$.version"),
        ('{"version": 1, "kind": "mf", "tower": {"field": "Q", "e": 2, "u": ["1", "1"]}, "ranks": [1, 1], "matrices": {"d": [[[["1"]]]], "h": [[[]]]}}', "$.matrices.d[0][0][0]"),
        ('{"version": 1, "kind": "one", "tower": {"field": {"Fp": 5}, "e": 1, "u": 7}, "min_degree": 0, "ranks": [], "matrices": {"d": [], "h": []}}', "$.tower.u"),
        ('{"version": 1, "kind": "mf", "tower": {"field": {"Fp": 4}, "e": 1, "u": 1}}', "$.tower.field"),
    ],
)
def test_parse_errors_carry_position(text, where):
    with pytest.raises(ParseError) as info:
        loads(text)
    assert info.value.where.startswith(where)


# -- commands -------------------------------------------------------------------------


def test_validate_exit_codes(capsys, tmp_path, ss, T2):
    _, path = ss
    code, out, _ = run(capsys, "validate", path)
    assert code == 0 and out.startswith("VALID two")
    assert json.loads(out.strip().splitlines()[-1])["valid"] is True

    bad = OneHomotopyModule.two_term(T2, one(T2.s), one(1))
    bp = tmp_path / "bad.json"
    dump(bad, str(bp))
    code, out, _ = run(capsys, "validate", bp)
    report = json.loads(out.strip().splitlines()[-1])
    assert code == 1 and not report["valid"]
    assert {v["degree"] for v in report["violations"]} <= {0, 1}
    assert "degree" in out.splitlines()[1]

    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    code, _, err = run(capsys, "validate", junk)
    assert code == 2 and "line 1" in err
    assert run(capsys, "validate", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2


def test_engine_errors_get_distinct_codes(capsys, tmp_path, T2, ss):
    _, path = ss
    code, _, err = run(capsys, "twist", path, "--c", "-2")
    assert code == 11 and "NotARoot" in err
    code, _, err = run(capsys, "split3", path)
    assert code == 12
    four = pullback_a(1, OneHomotopyModule.two_term(T2, one(T2.s), one(T2.s)))
    four = pullback_a(2, pushforward_a(1, four))
    fp = tmp_path / "four.json"
    dump(four, str(fp))
    code, _, err = run(capsys, "periodicity", fp)
    assert code == 8 and "NeedsReduction" in err


def test_periodicity_command(capsys, ss):
    _, path = ss
    code, out, _ = run(capsys, "periodicity", path)
    assert code == 0 and out.startswith("QUASI-ISO VERIFIED")
    code, out, _ = run(capsys, "periodicity", path, "--json")
    assert json.loads(out)["quasi_iso"] is True


def test_fold_unfold_cycle(capsys, tmp_path, T2):
    N = OneHomotopyModule.two_term(T2, one(T2.s), one(T2.s))
    n = tmp_path / "N.json"
    dump(N, str(n))
    e = tmp_path / "E.json"
    assert run(capsys, "fold", n, "-o", e)[0] == 0
    u = tmp_path / "U.json"
    assert run(capsys, "unfold", e, "-o", u)[0] == 0
    back = tmp_path / "B.json"
    assert run(capsys, "pushforward", u, "--i", 1, "-o", back)[0] == 0
    assert load(str(back)) == N


def test_cohomology_command(capsys, ss):
    _, path = ss
    code, out, _ = run(capsys, "cohomology", path, "--json")
    assert code == 0
    assert json.loads(out) == {"cohomology": {"1": {"free_rank": 0, "torsion": ["s"]}}}
    code, out, _ = run(capsys, "cohomology", path)
    assert "H^1" in out


def test_predicates_and_report(capsys, ss, tmp_path):
    M, path = ss
    assert json.loads(run(capsys, "kernel-member", path, "--json")[1]) == {"relative_kernel_member": False}
    r = json.loads(run(capsys, "report", path, "--json")[1])
    assert r["euler_class"] == -1 and r["periodicity_verified"] is True
    one_p = tmp_path / "one.json"
    run(capsys, "pushforward", path, "--i", 2, "-o", one_p)
    assert json.loads(run(capsys, "perfect", one_p, "--json")[1]) == {"perfect": False}
    assert json.loads(run(capsys, "euler", one_p, "--json")[1]) == {"euler_class": -1}


def test_hom_commands(capsys, ss):
    _, path = ss
    code, out, _ = run(capsys, "homotopy-classes", path, path, "--json")
    assert code == 0 and json.loads(out) == {"H0": {"free_rank": 0, "torsion": ["s"]}}
    code, out, _ = run(capsys, "hom", path, path, "--json")
    assert json.loads(out)["ranks"]["0"] == 1


def test_other_transformations(capsys, tmp_path, ss):
    _, path = ss
    for argv in (["shift", "--k", "2"], ["diagonal"], ["pullback", "--i", "1"], ["extend", "--e2", "2"], ["twist", "--c", "-1"]):
        src = path
        if argv[0] in ("diagonal", "pullback"):
            src = str(tmp_path / "one.json")
            run(capsys, "pushforward", path, "--i", 1, "-o", src)
        outp = tmp_path / f"{argv[0]}.json"
        code, _, err = run(capsys, argv[0], src, *argv[1:], "-o", outp)
        assert code == 0, err
        assert run(capsys, "validate", outp)[0] == 0


def test_split3_command(capsys, tmp_path):
    from koszul_mf.generators import random_three_term_two

    T = RingTower(QQ, 2, 1)
    M = random_three_term_two(random.Random(0), T, 1, 1)
    p = tmp_path / "M3.json"
    dump(M, str(p))
    prefix = tmp_path / "piece"
    code, out, _ = run(capsys, "split3", p, "-o", prefix, "--json")
    assert code == 0
    for name in json.loads(out)["written"]:
        assert run(capsys, "validate", name)[0] == 0


def test_selftest_command(capsys, tmp_path):
    code, out, err = run(capsys, "selftest", "--count", 3, "--seed", 1, "--reproducer", tmp_path / "r.json")
    assert code == 0 and out.rstrip().endswith("result: PASS")
    assert "s" in err  # timings go to stderr
    assert not (tmp_path / "r.json").exists()
    code, out, _ = run(capsys, "selftest", "--count", 3, "--field", "Fp", "--p", 5, "--suite", "snf")
    assert code == 0 and out.count("ok") == 1


def test_selftest_writes_reproducer(capsys, tmp_path, monkeypatch):
    from koszul_mf import selftest

    def failing(rng, F, emax):
        A = random_matrix(rng, F, rng.randint(1, 3), rng.randint(1, 3))
        return ("forced failure", A)

    monkeypatch.setattr(selftest, "SUITES", [("always-fails", failing)])
    rp = tmp_path / "repro.json"
    code, out, _ = run(capsys, "selftest", "--count", 5, "--reproducer", rp)
    assert code == 1 and "FAIL" in out
    data = json.loads(rp.read_text())
    assert data["suite"] == "always-fails" and data["message"] == "forced failure"
    # the smallest failing object was kept, and it parses back
    assert loads(json.dumps(data["object"])).rows >= 1


def test_module_entry_point(ss):
    _, path = ss
    r = subprocess.run([sys.executable, "-m", "koszul_mf", "periodicity", path], capture_output=True, text=True)
    assert r.returncode == 0 and "QUASI-ISO VERIFIED" in r.stdout
