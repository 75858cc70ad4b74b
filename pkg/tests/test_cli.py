import io
import json

import pytest

from fswitch.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def envelope(*argv):
    code, out, err = call(*argv, "--json")
    assert code == 0, err
    data = json.loads(out)
    assert data["schema"] == 1
    return data


def test_switch_json():
    data = envelope("switch", "--m", "4", "--n", "2", "--k", "3")
    assert data["command"] == "switch"
    assert data["result"]["virtual_rank"] == 3
    assert len(data["result"]["steps"]) == 3
    assert data["inputs"] == {"k": 3, "m": 4, "n": 2, "truncation": 4, "with_u": False}


def test_switch_with_u():
    data = envelope("switch", "--m", "4", "--n", "2", "--k", "3", "--with-u")
    assert [p["exponent"] for p in data["result"]["sym_pieces"]] == [0, 0, 2]
    assert data["result"]["chern_of_v"].startswith("1 ")


def test_hirzebruch_human():
    code, out, _ = call("hirzebruch", "h0", "--n", "2", "--a", "3", "--b", "1")
    assert code == 0
    assert "h0: 6" in out.splitlines()


def test_hirzebruch_chooseb():
    data = envelope("hirzebruch", "chooseb", "--a", "6", "--n", "2")
    assert data["result"]["b"] == -2
    assert data["result"]["h0"] == data["result"]["h2"] == 0
    assert data["warnings"] == []


def test_afsw_commands():
    data = envelope("afsw", "pure", "--dimb", "1", "--q", "0", "--rankv", "1", "--rankw", "1")
    assert data["result"]["class"] == "-v1 + w1"
    assert data["result"]["chain_verified"] is True
    data = envelope("afsw", "ksteps", "--degs", "2,0,-1,-3")
    assert data["result"]["virtual_rank"] == 3 + 1 + 0 - 2
    data = envelope("afsw", "zero", "--e-sq", "-1", "--e-dot-k", "-1", "--e-dot-c", "0")
    assert data["result"]["gap"] == 1


def test_graph_commands():
    data = envelope("graphs", "enumerate", "--n", "3")
    assert data["result"]["count"] == 6
    g = '{"n": 2, "edges": []}'
    g2 = '{"n": 2, "edges": [[1, 2]]}'
    data = envelope("graphs", "compare", "--g", g, "--g2", g2, "--m", "1,2")
    assert data["result"]["gt"] is True and data["result"]["gg"] is True
    data = envelope("graphs", "interpolate", "--g", g, "--g2", g2, "--m", "1,2")
    assert data["result"]["J0"] == [1]
    assert data["result"]["graph"] == {"n": 2, "edges": []}


def test_eval_command():
    data = envelope("eval", "grade(c(sym(U,2)),1)", "--bind", "U=rank2")
    assert data["result"]["value"] == "3*U_c1"
    data = envelope("eval", "rank(sym(U,3))", "--bind", "U=rank2:roots a,b")
    assert data["result"]["value"] == "4"


def test_rationals_render_as_fractions():
    data = envelope("eval", "1/2 - 5/6 * a", "--bind", "L=rank1:roots a")
    assert data["result"]["value"] == "1/2 - 5/6*a"


def test_deterministic_output():
    argv = ("switch", "--m", "-2", "--n", "2", "--k", "3", "--with-u", "--json")
    assert call(*argv)[1] == call(*argv)[1]


@pytest.mark.parametrize(
    "argv",
    [
        ("switch", "--m", "3", "--n", "2", "--k", "1"),
        ("hirzebruch", "chooseb", "--a", "1", "--n", "2"),
        ("hirzebruch", "h0", "--n", "0", "--a", "1", "--b", "1"),
        ("afsw", "pure", "--dimb", "1", "--q", "0", "--rankv", "2", "--rankw", "1", "--pg", "1", "--febd", "2"),
        ("afsw", "zero", "--e-sq", "-1", "--e-dot-k", "0", "--e-dot-c", "-1"),
        ("graphs", "enumerate", "--n", "9"),
        ("graphs", "interpolate", "--g", '{"n":2,"edges":[[1,2]]}', "--g2", '{"n":2,"edges":[]}', "--m", "1,1"),
        ("eval", "c(V", "--bind", "V=rank1"),
        ("eval", "W", "--bind", "V=rank1"),
    ],
)
def test_domain_errors_exit_one(argv):
    code, out, err = call(*argv)
    assert code == 1
    assert "error:" in err and err.strip()


def test_parity_message():
    _, _, err = call("switch", "--m", "3", "--n", "2", "--k", "1")
    assert "even" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("switch", "--m", "x", "--n", "2", "--k", "1"),
        ("switch", "--n", "2", "--k", "1"),
        ("bogus",),
        ("graphs", "compare", "--g", "nope", "--g2", "{}", "--m", "1"),
        ("afsw", "ksteps", "--degs", "1,a"),
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    code, _, _ = call(*argv)
    assert code == 2
    assert "usage error" in capsys.readouterr().err
