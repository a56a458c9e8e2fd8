"""End-to-end checks of the command-line entry point."""

import json

import pytest

from rankone.cli import RunConfig, SpecFileError, main, parse_spec

CHACON_DOC = {
    "stages": [{"q": 3, "a": [0, 1, 0]}],
    "tail": {"kind": "periodic", "period": 1},
}


def test_parse_spec_schedule_and_levels():
    spec = parse_spec(json.dumps({"schedule": CHACON_DOC, "telescope_levels": [0, 1, 3]}))
    assert spec.schedule is not None
    assert spec.schedule.stages[0].q == 3
    assert spec.telescope_levels == (0, 1, 3)
    assert spec.preset is None


def test_parse_spec_preset():
    spec = parse_spec('{"preset": "chacon"}')
    assert spec.preset == "chacon"
    assert spec.schedule is not None
    none_spec = parse_spec('{"preset": "period-doubling"}')
    assert none_spec.schedule is None


@pytest.mark.parametrize(
    "text, needle",
    [
        ("[]", "expected an object"),
        ("{", "invalid JSON"),
        ('{"preset": "chacon", "schedule": {}}', "exactly one"),
        ("{}", "exactly one"),
        ('{"preset": "nope"}', "$.preset"),
        ('{"schedule": {"stages": [], "tail": {"kind": "none"}}, "k": 1}', "$.k"),
        ('{"preset": "chacon", "telescope_levels": [0, "x"]}', "$.telescope_levels"),
        ('{"schedule": {"stages": 3, "tail": {"kind": "none"}}}', "$.schedule.stages"),
    ],
)
def test_parse_spec_rejects(text, needle):
    with pytest.raises(SpecFileError) as err:
        parse_spec(text)
    assert needle in str(err.value)


def test_run_config_bounds():
    with pytest.raises(ValueError):
        RunConfig(depth=0)
    with pytest.raises(ValueError):
        RunConfig(samples=-1)
    with pytest.raises(ValueError):
        RunConfig(budget=0)


def test_heights_json_and_text(capsys):
    assert main(["heights", "--preset", "chacon", "--depth", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == {"h": [1, 4, 13, 40]}
    assert main(["heights", "--preset", "chacon", "--depth", "3", "--format", "text"]) == 0
    assert capsys.readouterr().out == "1 4 13 40\n"


def test_block_command(capsys):
    assert main(["block", "--preset", "chacon", "--depth", "2"]) == 0
    assert capsys.readouterr().out == "0010001010010\n"


def test_expand_emit_blocks(capsys):
    code = main(["expand", "--preset", "dyadic-odometer", "--stages", "2", "--emit-blocks"])
    assert code == 0
    assert capsys.readouterr().out == "01\n01010111\n"


def test_expand_json(capsys):
    assert main(["expand", "--preset", "chacon", "--stages", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["m"] == [0, 1, 3]
    assert doc["stages"][0]["Q_new"] == 2
    assert doc["stages"][0]["A_new"] == [0, 2]


def test_telescope_deterministic(capsys):
    assert main(["telescope", "--preset", "chacon", "--stages", "2"]) == 0
    first = capsys.readouterr().out
    assert main(["telescope", "--preset", "chacon", "--stages", "2"]) == 0
    assert capsys.readouterr().out == first
    doc = json.loads(first)
    assert doc["m"] == [0, 1, 3]
    assert doc["H"] == [1, 4, 40]


def test_variant_default_and_bad_picks(capsys):
    assert main(["variant", "--preset", "chacon", "--stages", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["picks"] == [2, 8]  # defaults to the last copy per stage
    assert main(["variant", "--preset", "chacon", "--stages", "2", "--picks", "0,8"]) == 2
    assert "error:" in capsys.readouterr().err


def test_vershik_word(capsys):
    assert main(["vershik", "--preset", "chacon", "--depth", "2", "--length", "13"]) == 0
    assert capsys.readouterr().out == "0010001010010\n"
    # orbit longer than the truncation: partial word on stdout, exit 2
    assert main(["vershik", "--preset", "chacon", "--depth", "1", "--length", "10"]) == 2
    captured = capsys.readouterr()
    assert captured.out == "0010\n"
    assert "overflow" in captured.err


def test_measure_json(capsys):
    assert main(["measure", "--preset", "chacon", "--stages", "1", "--depth", "15"]) == 0
    doc = json.loads(capsys.readouterr().out)
    lo_n, lo_d = doc["lo"].split("/")
    assert int(lo_n) / int(lo_d) == pytest.approx(2 / 9, abs=1e-6)
    assert doc["tail_bounded"] is True


def test_dot_output(capsys):
    assert main(["dot", "--preset", "dyadic-odometer", "--depth", "1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph")
    assert out.count("->") == 5


def test_verify_text_and_json(capsys):
    assert main(["verify", "--preset", "chacon", "--depth", "2", "--exhaustive"]) == 0
    assert "PASS" in capsys.readouterr().out
    assert main(
        ["verify", "--preset", "chacon", "--depth", "2", "--samples", "10",
         "--seed", "3", "--format", "json"]
    ) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] is True
    assert doc["paths_tested"] == 10


def test_pd_check(capsys):
    assert main(["pd-check", "--length", "1024", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["gaps_all_multiples_of_4"] is True
    assert all(g % 4 == 0 for g in doc["distinct_gaps"])


def test_schedule_less_preset_rejected(capsys):
    assert main(["heights", "--preset", "period-doubling"]) == 2
    assert "stage schedule" in capsys.readouterr().err


def test_spec_file_round_trip(tmp_path, capsys):
    spec = tmp_path / "sys.json"
    spec.write_text(json.dumps({"schedule": CHACON_DOC, "telescope_levels": [0, 1, 3]}))
    assert main(["telescope", "--spec", str(spec)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["m"] == [0, 1, 3]
    assert main(["verify", "--spec", str(spec), "--depth", "2", "--exhaustive"]) == 0
    capsys.readouterr()

    missing = tmp_path / "nope.json"
    assert main(["heights", "--spec", str(missing)]) == 2
    assert "error:" in capsys.readouterr().err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "blocks.txt"
    code = main(
        ["expand", "--preset", "dyadic-odometer", "--stages", "2",
         "--emit-blocks", "--out", str(target)]
    )
    assert code == 0
    assert capsys.readouterr().out == ""
    assert target.read_text() == "01\n01010111\n"


def test_bad_cli_bounds(capsys):
    assert main(["heights", "--preset", "chacon", "--depth", "0"]) == 2
    assert "error:" in capsys.readouterr().err
