import json
from dataclasses import replace
from pathlib import Path

import pytest

from vgcg.harness import cli, runner
from vgcg.harness.config import ConfigError, Experiment, dump, load, parse
from vgcg.harness.presets import CATALOG, DELTA_FIGURES, names, preset
from vgcg.llf import SolverAbort, SolverConfig
from vgcg.model import ParameterError, validate_params

SMALL = SolverConfig(nx=100, x_min=-50, x_max=50, iterations=4, steps_per_iteration=20)

INI = """
[experiment]
name = tiny

[params]
A = -10
gamma = -2
k = 0.01
eta = 3
beta = 10

[riemann]
left = 1, 3
right = 0.5, 8

[solver]
nx = 100
x_min = -50
x_max = 50
iterations = 4
steps_per_iteration = 20

[analyses]
run = solver, classify, waveid
"""


def _params(exp):
    p = exp.params
    return (p.A, p.gamma, p.k, p.eta, p.beta)


def test_preset_parameters():
    assert _params(preset("case1-region6-s1c2")) == (-10, -2, 0.01, 3, 10)
    assert _params(preset("case1-regionshift-delta")) == (-10, -2, 2, 3, 10)
    wd = preset("wdelta-eta-eq-minus-kgamma")
    assert _params(wd) == (-10, -4, 1, 4, 2)
    assert wd.frame == "primitive" and wd.left == (2.0, 3.0) and wd.right == (4.0, 2.0)


def test_catalog_covers_figure_families():
    ks = {preset(n).params.k for n in names()}
    assert {0.01, -0.01, 2.0, -2.0, 0.6, -0.6} <= ks
    assert {n.split("-")[0] for n in names()} >= {"case1", "case2", "case3", "case4", "wdelta"}
    assert DELTA_FIGURES <= set(CATALOG)
    assert any("region9" in n for n in names())


def test_unknown_preset_lists_catalog():
    with pytest.raises(KeyError, match="case1-region6-s1c2"):
        preset("nope")


def test_preset_out_dir_override():
    assert preset("case1-region6-s1c2", out_dir="x").out_dir == "x"


def test_parse_and_round_trip():
    exp = parse(INI)
    assert exp.name == "tiny" and exp.solver.nx == 100
    assert exp.ordered_analyses() == ["classify", "solver", "waveid"]
    assert parse(dump(exp)) == exp
    for name in names():
        e = preset(name)
        assert parse(dump(e)) == e


@pytest.mark.parametrize("bad,err", [
    (INI.replace("[riemann]", "[other]"), ConfigError),
    (INI.replace("gamma = -2", "gamma = -1"), ConfigError),
    (INI.replace("right = 0.5, 8", "right = -0.5, 8"), ConfigError),
    (INI.replace("right = 0.5, 8", "right = 0.5"), ConfigError),
    (INI.replace("run = solver, classify, waveid", "run = classify, waveid"), ConfigError),
    (INI.replace("run = solver, classify, waveid", "run = plot"), ConfigError),
    (INI.replace("nx = 100", "nx = 2"), ConfigError),
])
def test_parse_errors(bad, err):
    with pytest.raises(err):
        parse(bad)


def test_primitive_frame_states():
    e = preset("wdelta-eta-eq-minus-kgamma")
    left, right = e.states()
    assert (left.v, left.w, right.v, right.w) == (2.0, 3.0, 4.0, 2.0)


def test_run_experiment_files(tmp_path):
    exp = replace(preset("case1-region6-s1c2"), solver=SMALL)
    man = runner.run_experiment(exp, tmp_path / "a")
    assert man.ok, man.errors
    files = set(man.files)
    assert {"snapshot_00.csv", "snapshot_04.csv", "regions.csv", "waves.txt",
            "metadata.json", "experiment.ini"} <= files
    for f in files:
        assert (tmp_path / "a" / f).exists()
    meta = json.loads((tmp_path / "a" / "metadata.json").read_text())
    assert meta["verdicts"]["classify"]["form_t0"] == "S1C2"
    assert "numpy" in meta["versions"]
    assert (tmp_path / "a" / "snapshot_01.csv").read_text().splitlines()[0] == "x,v,w,rho,u"
    # the recorded configuration reproduces the run
    assert load(tmp_path / "a" / "experiment.ini") == replace(exp, out_dir=exp.out_dir)


def test_constant_experiment(tmp_path):
    exp = Experiment("const", validate_params(-10, -2, 0.01, 3, 10), (1, 3), (1, 3), solver=SMALL)
    man = runner.run_experiment(exp, tmp_path)
    assert man.ok
    assert man.verdicts["classify"]["form_t0"] == "Constant"
    assert man.verdicts["waveid"]["sequence"] == []


def test_determinism(tmp_path):
    exp = replace(preset("case1-region5-delta"), solver=replace(preset("case1-region5-delta").solver, nx=200))
    a = runner.run_experiment(exp, tmp_path / "a")
    b = runner.run_experiment(exp, tmp_path / "b")
    assert a.files == b.files
    for f in a.files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes(), f


def test_json_format(tmp_path):
    exp = replace(preset("case1-region6-s1c2"), solver=SMALL, fmt="json")
    man = runner.run_experiment(exp, tmp_path)
    assert "snapshot_01.json" in man.files
    doc = json.loads((tmp_path / "snapshot_01.json").read_text())
    assert doc["columns"] == ["x", "v", "w", "rho", "u"]


def test_delta_outputs(tmp_path):
    exp = preset("wdelta-eta-eq-minus-kgamma")
    man = runner.run_experiment(exp, tmp_path)
    assert man.ok, man.errors
    d = man.verdicts["delta"]
    assert d["residual_ok"]
    traj = next(f for f in man.files if f.startswith("trajectory"))
    assert (tmp_path / traj).read_text().splitlines()[0] == "t,x,w_delta,u_delta,omega1,omega_bar,res1,res2"


def test_solver_abort_recorded(tmp_path, monkeypatch):
    def boom(prob, cfg, params=None):
        raise SolverAbort("positivity lost", t=0.1)
    monkeypatch.setattr(runner, "run", boom)
    exp = replace(preset("case1-region6-s1c2"), solver=SMALL, analyses=("classify", "solver", "waveid"))
    man = runner.run_experiment(exp, tmp_path)
    assert man.solver_aborted
    assert "classify" in man.verdicts
    assert (tmp_path / "manifest.json").exists()


def test_batch_order_and_equivalence(tmp_path):
    exps = [replace(preset(n), solver=SMALL) for n in ("case1-region6-s1c2", "case2-region1-r2c2")]
    par = runner.batch(exps, 2, [tmp_path / "p0", tmp_path / "p1"])
    seq = [runner.run_experiment(e, tmp_path / f"s{i}") for i, e in enumerate(exps)]
    assert [m.name for m in par] == [e.name for e in exps]
    for i, (mp, ms) in enumerate(zip(par, seq)):
        assert mp.files == ms.files
        for f in mp.files:
            assert (tmp_path / f"p{i}" / f).read_bytes() == (tmp_path / f"s{i}" / f).read_bytes()


def test_batch_isolation(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("not a directory")
    exps = [replace(preset("case1-region6-s1c2"), solver=SMALL),
            replace(preset("case2-region1-r2c2"), solver=SMALL)]
    mans = runner.batch(exps, 2, [blocker / "sub", tmp_path / "ok"])
    assert not mans[0].ok
    assert mans[1].ok


def test_batch_distinct_dirs(tmp_path):
    e = replace(preset("case1-region6-s1c2"), solver=SMALL)
    with pytest.raises(ValueError):
        runner.batch([e, e], 1, [tmp_path, tmp_path])


def test_cli_exit_codes(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "tiny.ini"
    cfg.write_text(INI)
    assert cli.main(["run", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "manifest.json").exists()
    assert cli.main(["run", "no-such-preset"]) == 1
    bad = tmp_path / "bad.ini"
    bad.write_text(INI.replace("A = -10", "A = 10"))
    assert cli.main(["run", str(bad)]) == 1
    assert cli.main(["preset", "list"]) == 0
    assert "case1-region6-s1c2" in capsys.readouterr().out
    assert cli.main(["preset", "show", "nope"]) == 1
    assert cli.main(["run", "--jobs", "x"]) == 1

    def boom(prob, cfg, params=None):
        raise SolverAbort("positivity lost", t=0.1)
    monkeypatch.setattr(runner, "run", boom)
    assert cli.main(["run", str(cfg), "--out", str(tmp_path / "x")]) == 2


def test_cli_subcommands(tmp_path, capsys):
    assert cli.main(["classify", "--preset", "case1-regionshift-delta", "--horizon", "3"]) == 0
    out = capsys.readouterr().out
    assert "IX" in out and "1.26286" in out
    assert cli.main(["curves", "--preset", "case1-region6-s1c2", "--kind", "C2", "--n", "5"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "kind,v,w"
    assert cli.main(["regions", "--preset", "case1-region6-s1c2", "--out", str(tmp_path / "r.csv")]) == 0
    assert (tmp_path / "r.csv").read_text().startswith("v,w,label")
    assert cli.main(["delta", "--preset", "wdelta-eta-eq-minus-kgamma", "--t-end", "0.5",
                     "--out", str(tmp_path / "d.csv")]) == 0
    assert (tmp_path / "d.csv").read_text().startswith("t,x,w_delta")
    assert cli.main(["classify", "--params=-10,-1,0.01,3,10", "--left", "1,3", "--right", "2,2"]) == 1
