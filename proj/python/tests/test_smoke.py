import json
import os
import sys

sys.path.insert(0, os.environ["GAUDINLAB_MODULE_DIR"])

import gaudinlab


def run(config, **kwargs):
    code, report_json, csvs = gaudinlab.run_config(json.dumps(config), **kwargs)
    return code, json.loads(report_json), csvs


def test_version():
    assert gaudinlab.version() == "0.1.0"


def test_commute_run_and_replay():
    code, report, csvs = run({
        "schema": 1,
        "kind": "commute-check",
        "cases": [{"N": 2, "weights": [1, 1], "z": ["0/1", "1/1"]}],
    })
    assert code == 0
    assert report["verdicts"] == {"case1": "pass"}
    assert report["tables"]["cases"][0]["max_commutator_norm"] == "0/1"
    assert csvs == []
    replay_code, message = gaudinlab.replay(json.dumps(report))
    assert replay_code == 0, message


def test_config_error_gives_exit_1_record():
    code, report, _ = run({
        "schema": 1,
        "kind": "commute-check",
        "cases": [{"N": 2, "weights": [1, 1], "z": ["0/1", "0/1"]}],
    })
    assert code == 1
    assert "sites not pairwise distinct" in report["error"]


def test_schur_weyl_spectra_csv():
    code, report, csvs = run({
        "schema": 1,
        "kind": "schur-weyl",
        "cases": [{"N": 3, "n": 3}],
    })
    assert code == 0
    assert report["tables"]["cases"][0]["tuple_count"] == 4
    ((name, body),) = csvs
    assert name == "spectra.csv"
    assert body.startswith("tuple_index,member_label,")
    assert len(body.strip().splitlines()) == 1 + 4 * 2


def test_overrides_are_echoed():
    code, report, _ = run(
        {
            "schema": 1,
            "kind": "spectrum",
            "cases": [{"N": 2, "weights": [1, 1], "trials": 1}],
        },
        seed=7,
    )
    assert code == 0
    assert report["seed"] == 7
    assert report["overrides"] == {"seed": 7}


def test_tableau_contents():
    assert gaudinlab.expected_jm_tuples(2, 2) == [[-1], [1]]
    assert gaudinlab.syt_contents([2, 1]) == [[-1, 1], [1, -1]]
    assert len(gaudinlab.expected_jm_tuples(3, 3)) == 4
    assert len(gaudinlab.expected_jm_tuples(5, 5)) == 26
