import json

import pytest

from wittdr.cli import main
from wittdr.config import CONFIG_ENV, default_config, load_config
from wittdr.errors import ConfigInvalid
from wittdr.suite import dump_report, plan, run_suite, validate_report


def small(**kw):
    cfg = {"primes": [2, 3], "groups": ["rigidity", "lemma59"], "rings": []}
    cfg.update(kw)
    return cfg


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


# -- configuration ---------------------------------------------------------------


def test_default_config_valid():
    cfg = load_config(default_config())
    assert cfg["seed"] == 0


@pytest.mark.parametrize("patch,field", [
    ({"wittLevels": [9]}, "wittLevels"),
    ({"primes": [11]}, "primes"),
    ({"primes": [4]}, "primes"),
    ({"groups": ["nope"]}, "groups"),
    ({"rings": [{"ring": "Q[", "p": 2, "n": 2}]}, "rings/0/ring"),
    ({"bogus": 1}, "<root>"),
    ({"wittLevels": [4]}, "wittLevels"),
])
def test_config_invalid(patch, field):
    with pytest.raises(ConfigInvalid) as exc:
        load_config(patch)
    assert any(field in line for line in exc.value.problems)


def test_exhaustive_level_only_for_exhaustive_groups():
    cfg = load_config({"wittLevels": [5], "groups": ["witt-axioms"], "rings": []})
    assert cfg["wittLevels"] == [5]


def test_config_from_env(tmp_path, monkeypatch):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(small(seed=7)))
    monkeypatch.setenv(CONFIG_ENV, str(path))
    assert load_config()["seed"] == 7


def test_unreadable_config(tmp_path):
    with pytest.raises(ConfigInvalid):
        load_config(str(tmp_path / "missing.json"))


# -- suite ---------------------------------------------------------------------


def test_plan_ids_unique():
    ids = [i for i, _, _ in plan(load_config(default_config()))]
    assert len(ids) == len(set(ids))


def test_lemma_p2_skipped():
    report = run_suite(small(groups=["lemma59"]))
    by_id = {c["id"]: c for c in report["checks"]}
    c2 = by_id["lemma59.kernel:p2"]
    assert c2["status"] == "skipped"
    assert c2["witness"]["extraTerms"] == {"b": 1}
    assert c2["witness"]["kernelDimension"] == 0
    assert by_id["lemma59.kernel:p3"]["status"] == "pass"


def test_report_schema_and_determinism():
    cfg = small(groups=["rigidity", "cech-weights"], seed=11)
    a = run_suite(cfg)
    validate_report(a)
    assert a["summary"]["fail"] == 0
    assert dump_report(a) == dump_report(run_suite(cfg))
    assert dump_report(a) == dump_report(run_suite({**cfg, "jobs": 2}))


def test_every_check_appears_once():
    cfg = load_config(small(groups=["rigidity"]))
    report = run_suite(cfg)
    assert [c["id"] for c in report["checks"]] == [i for i, _, _ in plan(cfg)]


# -- command line ----------------------------------------------------------------


def test_cli_witt_add(capsys):
    code, out, _ = run_cli(capsys, "witt", "--p", "2", "--n", "2", "--ring", "Z", "add [1,0] [1,0]")
    assert code == 0 and out == "[2,-1]"


def test_cli_endo_compose(capsys):
    code, out, _ = run_cli(capsys, "endo", "compose", '{"u":[1,"a"],"i":1}', '{"u":[1,"b"],"i":0}')
    assert code == 0
    assert json.loads(out) == {"u": [1, "a+b^2"], "i": 1}


def test_cli_pd(capsys):
    code, out, _ = run_cli(capsys, "pd", "mul", "gamma_2(x)", "gamma_2(x)", "--p", "2", "--K", "0")
    assert code == 0 and json.loads(out)["result"] == "6*gamma_4(x)"


def test_cli_rigidity(capsys):
    code, out, _ = run_cli(capsys, "rigidity", "--p", "3", "--what", "pin-down", "--N", "1")
    r = json.loads(out)
    assert code == 0 and r["closed_form"] == 2160 and r["oracle"] == 60480


def test_cli_cech(capsys):
    code, out, _ = run_cli(capsys, "cech", "--p", "2", "--n-w", "3")
    assert code == 0
    deg1 = json.loads(out)["degrees"]["1"]
    assert deg1["betti"] == [1, 1]
    assert deg1["H1"] == [{"class": "Y0", "weight": 1}]


def test_cli_suite_splitting(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, _, _ = run_cli(capsys, "suite", "--group", "splitting", "--p", "3", "--out", str(out_path))
    assert code == 0
    report = json.loads(out_path.read_text())
    step1 = [c for c in report["checks"] if c["id"] == "splitting.section:p3:step1"][0]
    assert step1["status"] == "pass"
    assert step1["witness"]["section"] == "gamma_3(x)"


def test_cli_config_invalid(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"wittLevels": [9]}))
    code, _, err = run_cli(capsys, "suite", "--config", str(path))
    assert code == 2 and "wittLevels" in err


def test_cli_parse_error(capsys):
    code, _, err = run_cli(capsys, "witt", "--p", "2", "--n", "2", "--ring", "Z", "add [1,0] [1,")
    assert code == 2 and err
