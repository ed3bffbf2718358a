import json
import os

import pytest

from mindeg.cli import parse_group_file, run_cli

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir,
                        "src", "mindeg", "fixtures")


def fx(name):
    return os.path.join(FIXTURES, name)


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- group file parsing --------------------------------------------------------


def test_parse_fixture_files():
    for name, order in (("A5.grp", 60), ("PGL27.grp", 336),
                        ("Z6.grp", 6), ("M12.grp", 95040)):
        gf = parse_group_file(fx(name))
        assert gf.group.order() == order
        assert gf.kernel is None


def test_parse_kernel_block():
    gf = parse_group_file(fx("S4modV4.grp"))
    assert gf.group.order() == 24
    assert gf.kernel.order() == 4
    assert gf.quotient().index() == 6


def test_parse_rejects_malformed(tmp_path):
    cases = [
        "gen (1 2)\n",                       # gen before degree
        "degree 4\ndegree 4\n",              # duplicate degree
        "degree 4\nwhat\n",                  # unknown line
        "degree 4\ngen (1 9)\n",             # point out of range
        "degree 4\nkernel\nkernel\n",        # duplicate kernel
        "# only a comment\n",                # missing degree
        "degree 4\ngen (1 2 3)\nkernel\ngen (1 4)\n",  # K not normal
    ]
    for i, text in enumerate(cases):
        p = tmp_path / f"bad{i}.grp"
        p.write_text(text)
        with pytest.raises(ValueError):
            parse_group_file(str(p))


# --- subcommands ---------------------------------------------------------------


def test_order_and_quotient_order(capsys):
    code, out, _ = run(capsys, "order", fx("A6.grp"))
    assert code == 0 and out.strip() == "order 360"
    code, out, _ = run(capsys, "order", fx("S4modV4.grp"))
    assert code == 0 and out.strip() == "order 6"


def test_recognize(capsys):
    code, out, _ = run(capsys, "recognize", fx("PSL27.grp"), "--json")
    assert code == 0
    data = json.loads(out)
    assert data["name"] == "PSL(2,7)"
    assert data["family"] == "PSL" and data["params"] == [2, 7]


def test_socle_and_min_normal(capsys):
    code, out, _ = run(capsys, "socle", fx("A5wrZ2.grp"), "--json")
    assert code == 0
    data = json.loads(out)
    assert data["socle_order"] == 3600
    assert data["factor_orders"] == [60, 60]
    assert data["minimal_normal_blocks"] == [[0, 1]]
    assert data["fitting_free"]

    code, out, _ = run(capsys, "min-normal", fx("A5xA6.grp"))
    assert code == 0
    assert out.strip().splitlines() == ["0", "1"]


def test_mu_text_and_json(capsys):
    code, out, _ = run(capsys, "mu", fx("PGL27.grp"))
    assert code == 0 and out.strip() == "mu 8"
    code, out, _ = run(capsys, "mu", fx("PGL27.grp"), "--json")
    assert code == 0
    cert = json.loads(out)
    assert cert["total"] == 8
    assert cert["records"][0]["rule"] == "row 2"


def test_mu_oracle_matches_mu(capsys):
    for name in ("A5.grp", "PSL27.grp"):
        code, out, _ = run(capsys, "mu", fx(name))
        mu_pipeline = int(out.split()[1])
        code2, out2, _ = run(capsys, "mu-oracle", fx(name), "--json")
        assert code == code2 == 0
        assert json.loads(out2)["mu"] == mu_pipeline


def test_mu_oracle_abelian_example(capsys):
    code, out, _ = run(capsys, "mu-oracle", fx("Z6.grp"), "--limit", "100")
    assert code == 0
    assert out.splitlines()[0] == "mu 5"


def test_mu_quotient(capsys):
    code, out, _ = run(capsys, "mu-quotient", fx("S4modV4.grp"))
    assert code == 0 and out.strip() == "mu 3"


# --- exit codes ----------------------------------------------------------------


def test_exit_1_on_missing_file(capsys):
    code, out, err = run(capsys, "order", fx("nope.grp"))
    assert code == 1 and "error" in err


def test_exit_1_on_not_fitting_free(capsys):
    code, out, err = run(capsys, "mu", fx("S4.grp"))
    assert code == 1 and "abelian" in err


def test_exit_1_on_limit_exceeded(capsys):
    code, out, err = run(capsys, "mu-oracle", fx("A6.grp"), "--limit", "100")
    assert code == 1 and "error" in err


def test_exit_2_with_partial_certificate(capsys):
    code, out, err = run(capsys, "mu", fx("PSL34_2.grp"))
    assert code == 2
    partial = json.loads(out)
    assert partial["flags"]["unsupported-case"]
    assert partial["records"][0]["error"]
    assert "hint" in err


def test_hinted_graph_extension(capsys):
    code, out, _ = run(capsys, "mu", fx("PSL34_2.grp"),
                       "--hint", fx("PSL34_2.hint.json"))
    assert code == 0 and out.strip() == "mu 42"


# --- output stability ----------------------------------------------------------


def test_json_round_trips(capsys):
    for cmd, name in (("mu", "PGL27.grp"), ("socle", "A5wrZ2.grp"),
                      ("mu-oracle", "Z6.grp"), ("order", "A5.grp")):
        code, out, _ = run(capsys, cmd, fx(name), "--json")
        assert code == 0
        assert json.dumps(json.loads(out), indent=2, sort_keys=True) == \
            out.strip()


def test_same_seed_byte_identical(capsys):
    runs = []
    for _ in range(2):
        code, out, _ = run(capsys, "mu", fx("A5xA6.grp"), "--json",
                           "--seed", "99")
        assert code == 0
        runs.append(out)
    assert runs[0] == runs[1]
