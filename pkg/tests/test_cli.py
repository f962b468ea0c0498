import csv
import io
import json

import numpy as np
import pytest

from gbk.cli import RunConfig, build_parser, compile_expression, main, make_config, render
from gbk.cones import LO_ANGLES
from gbk.errors import InvalidInputError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_frame(path, n, m, rows):
    path.write_text(json.dumps({"n": n, "m": m, "frame": [list(map(float, r)) for r in rows]}))
    return str(path)


@pytest.fixture
def pair_files(tmp_path):
    e = np.eye(5)
    p = write_frame(tmp_path / "p.json", 3, 2, e[:3])
    q = write_frame(tmp_path / "q.json", 3, 2, e[[3, 1, 2]])
    return p, q


def test_jordan_identity_frames(capsys, pair_files):
    p, _ = pair_files
    code, out, _ = run(capsys, "jordan", "--p", p, "--q", p)
    rep = json.loads(out)
    assert code == 0
    assert np.allclose(rep["angles"], 0.0, atol=1e-7)
    assert rep["w"] == pytest.approx(1.0)


def test_jordan_pair_is_s_orthogonal(capsys, pair_files):
    code, out, _ = run(capsys, "jordan", "--p", pair_files[0], "--q", pair_files[1])
    rep = json.loads(out)
    assert rep["s_orthogonal"] and rep["w"] == 0.0


def test_jordan_lo_frame(capsys, tmp_path):
    frame = tmp_path / "lo.json"
    code, _, _ = run(capsys, "lo-cone", "--samples", "3", "--frame-out", str(frame))
    assert code == 0
    coord = write_frame(tmp_path / "coord.json", 4, 3, np.eye(7)[:4])
    code, out, _ = run(capsys, "jordan", "--p", str(frame), "--q", coord)
    rep = json.loads(out)
    assert np.allclose(rep["angles"], LO_ANGLES, atol=1e-8)
    assert rep["w"] == pytest.approx(1 / 9, abs=1e-10)


def test_malformed_frame_file(capsys, tmp_path, pair_files):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3, "m": 2,\n "frame": [[1, 0, 0, 0, 0],\n [0, 1 0 0 0]]}')
    code, _, err = run(capsys, "jordan", "--p", str(bad), "--q", pair_files[1])
    assert code == 2
    assert "bad.json:3:" in err
    short = write_frame(tmp_path / "short.json", 2, 2, [[1, 0, 0, 0], [0, 1, 0]])
    code, _, err = run(capsys, "jordan", "--p", short, "--q", short)
    assert code == 2 and "row 2" in err


def test_smap(capsys, pair_files):
    p, q = pair_files
    code, out, _ = run(capsys, "smap", "--p", p, "--q", q, "--s", q, "--random", "5")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 6
    assert (rows[0]["x1"], rows[0]["x2"]) == pytest.approx((0.0, 1.0))
    assert all(r["radius"] < 1 for r in rows[1:])
    code, _, err = run(capsys, "smap", "--p", p, "--q", p)
    assert code == 2


def test_region_check(capsys):
    code, out, _ = run(capsys, "region-check", "--samples", "15", "--t", "0.5")
    rep = json.loads(out)
    assert code == 0 and rep["violations"] == 0
    assert rep["beta"] == pytest.approx(1.0, abs=1e-8)


def test_graph_check_affine_passes(capsys):
    code, out, _ = run(capsys, "graph-check", "--example", "affine")
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_graph_check_lo_fails_with_witnesses(capsys):
    code, out, _ = run(capsys, "graph-check", "--example", "lawson-osserman", "--beta1", "2.99",
                       "--alpha", "2", "--index", "1")
    rep = json.loads(out)
    assert code == 1 and rep["verdict"] == "fail" and rep["witnesses"]
    assert rep["min_admissible_beta1"] == pytest.approx(9 / np.sqrt(6), abs=1e-9)


def test_graph_check_expression_and_table(capsys, tmp_path):
    code, out, _ = run(capsys, "graph-check", "--expr", "0.1*x1^2", "--expr", "x1*x2/10", "--n", "2",
                       "--box", "-1", "1", "--beta0", "3", "--beta1", "2.9")
    rep = json.loads(out)
    assert code == 0 and rep["mode"] == "finite-difference"
    axes = np.linspace(-1, 1, 11)
    table = tmp_path / "t.csv"
    with open(table, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x1", "x2", "f1"])
        for a in axes:
            for b in axes:
                w.writerow([a, b, 0.1 * a * b])
    code, out, _ = run(capsys, "graph-check", "--table", str(table), "--n", "2", "--box", "-0.9", "0.9")
    rep = json.loads(out)
    assert code == 0 and rep["mode"] == "finite-difference"


def test_graph_check_bad_expression(capsys):
    code, _, err = run(capsys, "graph-check", "--expr", "__import__('os')", "--n", "2")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "graph-check", "--expr", "x3", "--n", "2")
    assert code == 2


@pytest.mark.parametrize("identity", ["pluck", "lo-constants", "level-set", "dw", "delta-w", "rank",
                                      "subhar3"])
def test_verify_identities(capsys, identity):
    code, out, _ = run(capsys, "verify", identity, "--samples", "8")
    rep = json.loads(out)
    assert code == 0 and rep["pass"], rep
    if identity == "pluck":
        assert rep["worst_residual"] < 1e-10
    if identity == "level-set":
        assert all(abs(r["w_t"] - 0.45) < 1e-10 for r in rep["rows"])
    if identity == "lo-constants":
        assert all(r["delta_f"] == pytest.approx(9.0) for r in rep["rows"])


def test_verify_unknown_identity(capsys):
    code, _, _ = run(capsys, "verify", "nonsense")
    assert code == 2


def test_rigidity(capsys, tmp_path):
    e = np.eye(4)
    p = write_frame(tmp_path / "p.json", 1, 3, e[[0]])
    q = write_frame(tmp_path / "q.json", 1, 3, e[[2]])
    code, out, _ = run(capsys, "rigidity", "--p", p, "--q", q, "--samples", "200")
    rep = json.loads(out)
    assert code == 1 and rep["witnesses"]


def test_csv_output_round_trips(capsys, pair_files):
    code, out, _ = run(capsys, "smap", "--p", pair_files[0], "--q", pair_files[1], "--random", "3",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    code, out2, _ = run(capsys, "smap", "--p", pair_files[0], "--q", pair_files[1], "--random", "3")
    first = json.loads(out2)["rows"][0]
    assert float(rows[0]["x1"]) == first["x1"]  # repr floats are exact


def test_output_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "lo-cone", "--samples", "4", "--seed", "3", "-o", str(a))
    run(capsys, "lo-cone", "--samples", "4", "--seed", "3", "-o", str(b))
    assert a.read_text() == b.read_text()


def test_config_precedence(tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"seed": 5, "samples": 7, "c": 0.5}))
    parser = build_parser()
    args = parser.parse_args(["lo-cone", "--config", str(cfg_file)])
    cfg = make_config(args, environ={})
    assert (cfg.seed, cfg.samples, cfg.c) == (5, 7, 0.5)
    assert make_config(args, environ={"GBK_SEED": "9"}).seed == 9
    args = parser.parse_args(["lo-cone", "--config", str(cfg_file), "--seed", "11"])
    assert make_config(args, environ={"GBK_SEED": "9"}).seed == 11
    with pytest.raises(InvalidInputError):
        make_config(args, environ={"GBK_SEED": "x"})
    with pytest.raises(InvalidInputError):
        RunConfig.from_mapping({"bogus": 1})


def test_bad_flags_exit_2(capsys):
    assert main(["jordan"]) == 2
    assert main(["nope"]) == 2
    capsys.readouterr()


def test_compile_expression():
    f = compile_expression("sqrt(x1^2 + x2**2) + sin(0) - exp(0) + 1", 2)
    assert compile_expression("-x1^2", 1)(np.array([3.0])) == pytest.approx(-9.0)
    assert f(np.array([3.0, 4.0])) == pytest.approx(5.0)
    for bad in ("x1.real", "open('f')", "x1 if x2 else 0", "lambda: 1", "[x1]"):
        with pytest.raises(InvalidInputError):
            compile_expression(bad, 2)


def test_render_nan_becomes_null():
    assert json.loads(render({"a": float("nan"), "rows": []}, "json")) == {"a": None, "rows": []}
