"""CLI surface: subcommands, reports, determinism, exit codes, figures."""

import json
import os

from dga.cli import main

SAMPLES = os.path.join(os.path.dirname(__file__), "..", "samples")


def sample(name):
    return os.path.join(SAMPLES, name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", sample("arrow_d2.dga"))
    assert code == 0
    report = json.loads(out)
    assert report["schema"] == "dga-report/1"
    assert report["payload"]["valid"] is True
    assert report["payload"]["dim"] == 3


def test_validate_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.dga"
    bad.write_text("field Q\nvertices 1\narrow a : 1 -> 2 deg -1\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 1
    assert "unknown vertex" in err


def test_gd_closing_example(capsys):
    code, out, _ = run(capsys, "gd", sample("arrow_d2.dga"))
    assert code == 0
    report = json.loads(out)
    assert report["payload"]["kind"] == "exact"
    assert report["payload"]["value"] == 3


def test_ext_table_and_csv(capsys):
    code, out, _ = run(capsys, "ext", sample("arrow_d2.dga"),
                       "--from", "simples_sum", "--to", "simples_sum",
                       "--range", "0..8")
    assert code == 0
    report = json.loads(out)
    dims = {int(k): v for k, v in report["payload"]["dims"].items()}
    assert dims[0] == 2 and dims[3] == 1
    assert all(dims[n] == 0 for n in range(9) if n not in (0, 3))

    code, out, _ = run(capsys, "ext", sample("arrow_d2.dga"),
                       "--from", "simples_sum", "--to", "simples_sum",
                       "--range", "0..4", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "n,dim"
    assert "0,2" in out and "3,1" in out


def test_pd_builtin_modules(capsys):
    code, out, _ = run(capsys, "pd", sample("arrow_d2.dga"), "--module", "free(1)[4]")
    assert code == 0
    assert json.loads(out)["payload"]["value"] == 4
    code, out, _ = run(capsys, "pd", sample("arrow_d2.dga"), "--module", "simples_sum")
    assert json.loads(out)["payload"]["value"] == 3


def test_pd_module_file(capsys):
    code, out, _ = run(capsys, "pd", sample("a3_bound.dga"),
                       "--module", sample("band_module.dgm"))
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["kind"] == "exact"


def test_h0_and_cohomology(capsys):
    code, out, _ = run(capsys, "h0", sample("dual_numbers.dga"))
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["dim"] == 2 and payload["radical_dim"] == 1

    code, out, _ = run(capsys, "cohomology", sample("graded_a3.dga"))
    assert code == 0
    dims = json.loads(out)["payload"]["dims"]
    assert dims["0"] >= 3


def test_field_override(capsys):
    code, out, _ = run(capsys, "gd", sample("arrow_d2.dga"), "--field", "F5")
    assert code == 0
    report = json.loads(out)
    assert report["field"] == "F5"
    assert report["payload"]["value"] == 3


def test_gd_cutoff_on_cyclic(capsys):
    code, out, _ = run(capsys, "gd", sample("dual_numbers.dga"), "--cutoff", "5")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["kind"] == "at_least"
    assert payload.get("warning") is not None or payload["cutoff_provenance"] == "user"


def test_report_determinism(tmp_path, capsys):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    for path in (out1, out2):
        code, _, _ = run(capsys, "ext", sample("arrow_d2.dga"),
                         "--from", "simples_sum", "--to", "simples_sum",
                         "--range", "0..6", "--out", str(path))
        assert code == 0
    r1 = json.loads(out1.read_text())
    r2 = json.loads(out2.read_text())
    r1.pop("timing_ms")
    r2.pop("timing_ms")
    assert r1 == r2


def test_verify_subcommand_and_plot(tmp_path, capsys):
    fig = tmp_path / "acyclic.png"
    out = tmp_path / "report.csv"
    code, stdout, _ = run(capsys, "verify", "acyclic", "--trials", "3",
                          "--seed", "5", "--out", str(out), "--format", "csv",
                          "--plot", str(fig))
    assert code == 0
    assert fig.exists() and fig.stat().st_size > 0
    assert out.exists()
    header = out.read_text().splitlines()[0]
    assert "status" in header
    # the JSON twin is written alongside the delimited output
    assert (tmp_path / "report.csv.json").exists()


def test_ext_plot(tmp_path, capsys):
    fig = tmp_path / "ext.png"
    code, _, _ = run(capsys, "ext", sample("arrow_d2.dga"),
                     "--from", "simples_sum", "--to", "simples_sum",
                     "--range", "0..6", "--plot", str(fig))
    assert code == 0
    assert fig.exists() and fig.stat().st_size > 0


def test_verify_deterministic_rows(tmp_path, capsys):
    reports = []
    for _ in range(2):
        code, out, _ = run(capsys, "verify", "triangle", "--trials", "2",
                           "--seed", "9")
        assert code == 0
        data = json.loads(out)
        data.pop("timing_ms")
        reports.append(data)
    assert reports[0] == reports[1]


def test_unknown_module_designator(capsys):
    code, _, err = run(capsys, "pd", sample("arrow_d2.dga"),
                       "--module", "simple(9)")
    assert code == 1
    assert "unknown vertex" in err


def test_gd_and_cohomology_plots(tmp_path, capsys):
    for cmd, extra in (("gd", []), ("pd", ["--module", "simples_sum"]),
                       ("cohomology", [])):
        fig = tmp_path / f"{cmd}.png"
        code, _, _ = run(capsys, cmd, sample("arrow_d2.dga"), *extra,
                         "--plot", str(fig))
        assert code == 0
        assert fig.exists() and fig.stat().st_size > 0


def test_cross_process_determinism():
    import subprocess
    import sys

    argv = [sys.executable, "-m", "dga.cli", "verify", "acyclic",
            "--trials", "3", "--seed", "17"]
    outs = []
    for _ in range(2):
        proc = subprocess.run(argv, capture_output=True, text=True, check=True)
        data = json.loads(proc.stdout)
        data.pop("timing_ms")
        outs.append(json.dumps(data, sort_keys=True))
    assert outs[0] == outs[1]


def test_ext_reps_flag(capsys):
    code, out, _ = run(capsys, "ext", sample("arrow_d2.dga"),
                       "--from", "simples_sum", "--to", "simples_sum",
                       "--range", "0..4", "--reps")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert "representatives" in payload
    assert payload["representatives"]["3"]
