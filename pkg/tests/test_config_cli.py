import json
import random
from pathlib import Path

import pytest

from nrbrane import encode
from nrbrane.cli import main
from nrbrane.config import build, desk_config, load_config, parse_config
from nrbrane.errors import ConfigError
from nrbrane.exactfield import field
from nrbrane.picard import random_class
from nrbrane.selfcheck import galois_closed_places, random_divisor

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

BASE = {"p": 11, "roots": [0, 1, 2, 3, 4], "genus": 2, "S": [0, 1]}


def write(tmp_path, text):
    path = tmp_path / "run.toml"
    path.write_text(text)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- configuration ---------------------------------------------------------


def test_shipped_configs_match_reference():
    for g in (2, 3):
        cfg = load_config(CONFIGS / f"desk_g{g}.toml")
        ref = desk_config(g)
        assert (cfg.p, cfg.f, cfg.genus, cfg.S) == (ref.p, ref.f, ref.genus, ref.S)
        assert build(cfg).M.degree == g - 1


@pytest.mark.parametrize(
    "patch",
    [
        {"extra": 1},
        {"p": 12},
        {"f": [0, 1, 0, 0, 0, 1]},
        {"format": "xml"},
        {"M": {"points": [[1]]}},
        {"M": 3},
        {"S": "01"},
    ],
)
def test_parse_rejects(patch):
    with pytest.raises(ConfigError):
        parse_config({**BASE, **patch})


def test_parse_requires_keys():
    for key in ("p", "genus", "S"):
        data = dict(BASE)
        del data[key]
        with pytest.raises(ConfigError):
            parse_config(data)
    with pytest.raises(ConfigError):
        parse_config({k: v for k, v in BASE.items() if k != "roots"})


@pytest.mark.parametrize(
    "patch",
    [
        {"roots": [0, 0, 2, 3, 4]},
        {"roots": [0, 1, 2, 3]},
        {"genus": 3},
        {"S": [0, 9]},
        {"S": []},
        {"S": [0, 1, 2, 3, 4]},
        {"M": {"inf": 3}},
        {"M": {"points": [[0, 1]], "inf": 0}},
    ],
)
def test_build_rejects(patch):
    with pytest.raises(ConfigError):
        build(parse_config({**BASE, **patch}))


def test_load_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "p = = 3"))


# -- encodings ---------------------------------------------------------------


def test_encode_round_trips(desk):
    C = desk.curve
    rnd = random.Random(0)
    for _ in range(10):
        c = random_class(C, rnd, rnd.randint(-2, 2))
        assert encode.decode_pic(C, json.loads(json.dumps(encode.pic(c)))) == c
    places = galois_closed_places(C)
    for _ in range(10):
        D = random_divisor(rnd, places)
        assert encode.decode_divisor(C.p, json.loads(json.dumps(encode.divisor(D)))) == D
    e = field(C.p, 2)([3, 1])
    assert encode.decode_elem(C.p, encode.elem(e)) == e
    assert encode.point(desk.curve.weierstrass_points()[0]) == [0, 0]


# -- command line ------------------------------------------------------------


def test_strata_default_json(capsys):
    code, out, _ = run(capsys, "strata", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["genus"] == 2 and doc["p"] == 11 and len(doc["rows"]) == 4
    assert [r["contains_very_stable"] for r in doc["rows"]] == [True, False, False, True]
    assert [r["dim"] for r in doc["rows"]] == [0, 1, 1, 2]


def test_strata_deterministic_and_parallel(capsys):
    g3 = str(CONFIGS / "desk_g3.toml")
    _, first, _ = run(capsys, "strata", "--config", g3, "--format", "json", "--seed", "4")
    _, second, _ = run(capsys, "strata", "--config", g3, "--format", "json", "--seed", "4")
    _, par, _ = run(capsys, "strata", "--config", g3, "--format", "json", "--seed", "4", "--parallel")
    assert first == second == par
    assert len(json.loads(first)["rows"]) == 16


def test_formats(capsys):
    _, csv_out, _ = run(capsys, "limits", "--format", "csv")
    lines = csv_out.splitlines()
    assert lines[0] == "D,dim,limit,label,wobbly" and len(lines) == 5
    _, table, _ = run(capsys, "strata", "--format", "table")
    assert table.startswith("# M: ") and "contains_very_stable" in table


def test_selfcheck(capsys):
    code, out, _ = run(capsys, "selfcheck", "--format", "json")
    assert code == 0
    assert all(r["status"] == "PASS" for r in json.loads(out)["rows"])


def test_wobbly_search_cli(capsys):
    code, out, _ = run(capsys, "wobbly-search", "--delta", "0")
    doc = json.loads(out)
    assert code == 0 and doc["warning"] is None and len(doc["rows"]) == 8
    code, out, _ = run(capsys, "wobbly-search", "--delta", "0", "--budget", "5")
    assert code == 0 and "exhausted" in json.loads(out)["warning"]
    code, out, _ = run(capsys, "wobbly-search", "--delta", "0", "--ext", "2")
    assert code == 0 and len(json.loads(out)["rows"]) >= 8


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "wobbly-search", "--delta", "1")[0] == 4
    assert run(capsys, "wobbly-search")[0] == 4
    zero_b = write(tmp_path, 'p = 11\nroots = [0,1,2,3,4]\ngenus = 2\nS = [0,1]\nb = [0]\n')
    code, _, err = run(capsys, "strata", "--config", zero_b)
    assert code == 3 and "sampling" in err
    bad = write(tmp_path, 'p = 11\nroots = [0,0,2,3,4]\ngenus = 2\nS = [0,1]\n')
    code, _, err = run(capsys, "strata", "--config", bad)
    assert code == 2 and "config error" in err
    assert run(capsys, "selfcheck", "--config", str(tmp_path / "nope.toml"))[0] == 2
