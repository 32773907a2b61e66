import json

from c2o.cli import main

from conftest import CORPUS, GOLDEN


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_compile_ok_and_emits(tmp_path):
    out = tmp_path / "out"
    rc = main(["compile", str(CORPUS / "table1/guarantee.agc"), "--int-width", "16", "--unsigned",
               "--emit", "osl", "--emit", "matlab", "--out", str(out)])
    assert rc == 0
    assert (out / "B.osl").read_text() == (GOLDEN / "range_uint16.osl").read_text()
    assert (out / "B.m").read_text() == (GOLDEN / "range_uint16.m").read_text()


def test_dump_ir(tmp_path, capsys):
    assert main(["compile", str(CORPUS / "bscu/com.agc"), "--dump-ir",
                 "--out", str(tmp_path)]) == 0
    text = capsys.readouterr().out
    ir = json.loads(text[:text.rindex("}") + 1])
    assert ir["component"] == "COM"
    assert [s["name"] for s in ir["inputs"]] == ["LO_Button", "Active"]


def test_missing_file_is_usage_error_and_writes_nothing(tmp_path):
    out = tmp_path / "out"
    assert main(["compile", str(tmp_path / "nope.agc"), "--out", str(out)]) == 1
    assert not out.exists()


def test_bad_flag_is_usage_error():
    assert main(["compile"]) == 1
    assert main(["verify", "a.agc", "b.agc", "--mode", "sideways"]) == 1


def test_parse_error_exit_2(tmp_path, capsys):
    f = write(tmp_path, "bad.agc", "component X { input x : int guarantee }")
    assert main(["compile", f, "--out", str(tmp_path / "o")]) == 2
    assert not (tmp_path / "o").exists()


def test_wellformedness_exit_3(tmp_path, capsys):
    f = write(tmp_path, "wf.agc",
              'component W { input x : int; guarantee "g" : pre x > 0; }')
    assert main(["compile", f, "--out", str(tmp_path / "o")]) == 3
    assert "wf.agc" in capsys.readouterr().err


def test_interface_mismatch_exit_5(tmp_path, capsys):
    rc = main(["verify", str(CORPUS / "drift/channel.agc"),
               str(CORPUS / "drift/channel_model_drifted.agc"), "--out", str(tmp_path / "o")])
    assert rc == 5
    err = capsys.readouterr().err
    assert "Sync.Level: field missing in model" in err
    assert not (tmp_path / "o").exists()


def test_verify_bscu(tmp_path):
    out = tmp_path / "ok"
    assert main(["verify", str(CORPUS / "bscu/com.agc"), str(CORPUS / "bscu/com_model.agc"),
                 "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["COM.verify.json", "COM.verify.txt"]
    report = json.loads((out / "COM.verify.json").read_text())
    assert report["result"]["status"] == "pass"
    assert set(report["manifest"]["inputs"]) == {str(CORPUS / "bscu/com.agc"),
                                                 str(CORPUS / "bscu/com_model.agc")}


def test_verify_defect_and_replay(tmp_path):
    out = tmp_path / "bad"
    model = str(CORPUS / "bscu/com_model_initial_step.agc")
    assert main(["verify", str(CORPUS / "bscu/com.agc"), model, "--out", str(out)]) == 10
    cex = out / "COM.cex.csv"
    assert cex.exists()
    assert main(["replay", str(CORPUS / "bscu/com.agc"), model, str(cex)]) == 10
    assert main(["replay", str(CORPUS / "bscu/com.agc"), str(CORPUS / "bscu/com_model.agc"),
                 str(cex)]) == 0


def test_verify_builtin_and_domain(tmp_path):
    args = ["verify", str(CORPUS / "range/range.agc"), "builtin:identity",
            "--domain", "Input=0,19", "--depth", "3", "--out", str(tmp_path)]
    assert main(args) == 0
    res = json.loads((tmp_path / "B.verify.json").read_text())["result"]
    assert res["explored"] == 8
    assert main(args[:3] + ["--domain", "Nope=1", "--out", str(tmp_path)]) == 1
    assert main(["verify", str(CORPUS / "range/range.agc"), "builtin:missing",
                 "--out", str(tmp_path)]) == 1


def test_random_mode(tmp_path):
    assert main(["verify", str(CORPUS / "range/range.agc"), str(CORPUS / "range/plus20_model.agc"),
                 "--mode", "random", "--trials", "50", "--seed", "4",
                 "--out", str(tmp_path)]) == 10


def _strip(path):
    d = json.loads(path.read_text())
    d["manifest"].pop("timestamp")
    d["manifest"].pop("argv")  # differs only in --out
    return d


def test_diff_reproducible(tmp_path):
    files = [str(CORPUS / "table1/arith_ops.agc"), str(CORPUS / "table1/pre.agc")]
    for name in ("a", "b"):
        assert main(["diff", *files, "--trials", "50", "--depth", "5", "--seed", "9",
                     "--jobs", "2", "--out", str(tmp_path / name)]) == 0
    assert _strip(tmp_path / "a/diff.json") == _strip(tmp_path / "b/diff.json")
    results = _strip(tmp_path / "a/diff.json")["result"]
    assert [r["file"] for r in results] == files


def test_diff_single_trial(tmp_path):
    assert main(["diff", str(CORPUS / "table1/arrow.agc"), "--trials", "1", "--depth", "1",
                 "--jobs", "1", "--out", str(tmp_path)]) == 0
    res = json.loads((tmp_path / "diff.json").read_text())["result"][0]
    assert res["trials"] == 1


def test_nothing_written_outside_out(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    out = tmp_path / "only"
    main(["verify", str(CORPUS / "bscu/com.agc"), str(CORPUS / "bscu/com_model_initial_step.agc"),
          "--out", str(out)])
    main(["diff", str(CORPUS / "table1/pre.agc"), "--trials", "5", "--jobs", "1",
          "--out", str(out)])
    assert [p.name for p in tmp_path.iterdir()] == ["only"]
