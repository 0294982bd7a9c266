import json

import pytest

from drwitt.cli import main


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("args, expected", [
    (["witt", "decompose", "--p", "2", "--n", "3", "--", "-1", "0", "0"], "-1·[1] + 1·V(1)\n"),
    (["witt", "teich", "--p", "2", "--n", "3", "2"], "(2,0,0)\n"),
    (["witt", "ghost", "--p", "2", "--n", "3", "0", "1", "0"], "(0,2,2)\n"),
    (["witt", "add", "--n", "2", "1", "0", "1", "0"], "(2,-1)\n"),
    (["table", "groups", "--p", "2", "--n", "3"], "deg0: ℤ³\ndeg1: ℤ/2 ⊕ ℤ/4\n"),
    (["table", "groups", "--p", "2", "--n", "1"], "deg0: ℤ\ndeg1: 0\n"),
    (["drw", "mul", "--n", "4", "V(1)", "dV^2(1)"], "2·dV^2(1) + 4·dV^3(1) @ {p=2, n=4}\n"),
    (["poly", "teich", "--n", "2", "X+1"], "[1]·[X]^0 + [1]·[X]^1 + V([1]·[X]^1) @ {p=2, n=2, q=0}\n"),
])
def test_outputs(capsys, args, expected):
    code, out, _ = run(capsys, *args)
    assert code == 0
    assert out == expected


def test_log_groups(capsys):
    _, out, _ = run(capsys, "table", "groups", "--p", "2", "--n", "3", "--log")
    assert out.splitlines()[1].endswith("ℤ/8·dlog[2]")


def test_non_integral_ghost_exit_code(capsys):
    code, _, err = run(capsys, "witt", "unghost", "--p", "2", "--n", "3", "0", "1", "0")
    assert code == 3
    assert "ghost index 1" in err


@pytest.mark.parametrize("args", [
    ["witt", "ghost", "--n", "3", "1", "2"],
    ["witt", "ghost", "--n", "3", "a", "b", "c"],
    ["witt", "ghost", "--n", "3", "--bogus", "1", "2", "3"],
    ["table", "groups", "--n", "17"],
    ["table", "groups", "--p", "7"],
    ["drw", "show", "--n", "2", "dV^3(1)"],
    ["check", "nothing"],
])
def test_usage_errors(capsys, args):
    code, _, _ = run(capsys, *args)
    assert code == 2


def test_check_exit_codes_and_json(capsys):
    code, out, _ = run(capsys, "check", "axioms", "--p", "2", "--n", "3", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "pass"
    assert all(r["status"] == "pass" for r in report["relations"])


def test_logcoeffs_output(capsys):
    code, out, _ = run(capsys, "check", "logcoeffs", "--jmax", "6")
    assert code == 0
    assert "residues:         (1,3,4,0,0,0)" in out
    assert "balanced:         (1,-1,4,0,0,0)" in out


def test_json_round_trips_through_formats(capsys):
    from drwitt.formats import drw_from_json, parse_drw, poly_from_json, parse_poly_drw

    _, out, _ = run(capsys, "drw", "mul", "--n", "4", "V(1)", "dV^2(1)", "--json")
    assert drw_from_json(json.loads(out)) == parse_drw("2·dV^2(1) + 4·dV^3(1)", 2, 4)
    _, out, _ = run(capsys, "poly", "d", "--n", "3", "[1]·[X]^3", "--json")
    assert poly_from_json(json.loads(out)) == parse_poly_drw("3·[1]·[X]^2·d[X]", 2, 3, 1)


def test_determinism(capsys):
    args = ["check", "associativity", "--n", "4", "--fuel", "2", "--seed", "3", "--json"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


@pytest.mark.parametrize("kind", ["products", "operators"])
def test_tables(capsys, kind):
    code, out, _ = run(capsys, "table", kind, "--n", "3", "--log")
    assert code == 0
    assert out.startswith("@ {p=2, n=3, log}")


def test_log_rows(capsys):
    _, out, _ = run(capsys, "log", "rows", "--n", "3")
    assert "V(1) · dlog[2] = 2·dlog[2] + dV(1) + 3·dV^2(1)" in out
