import csv
import io
import json

import pytest

from hypmod.cli import CacheStore, main, verify_campaign, verify_prime
from hypmod.qseries import QSeries


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


@pytest.fixture(autouse=True)
def no_cache(monkeypatch):
    monkeypatch.delenv("HYPMOD_CACHE", raising=False)


def test_verify_small_range(capsys):
    code, out, err = run(capsys, "verify", "--p-max", "61")
    recs = jsonl(out)
    assert code == 0 and "0 failures" in err
    assert recs[-1]["failures"] == 0 and recs[-1]["summary"]["command"] == "verify"
    body = recs[:-1]
    assert all(r["schema"] == 1 and r["match"] for r in body)
    assert {tuple(r["pair"]) for r in body} == {(2, 3), (3, 3), (4, 3), (6, 3), (12, 3)}
    assert {r["p"] for r in body if r["pair"] == [12, 3]} == {13, 37, 61}
    assert sorted(r["j"] for r in body if r["pair"] == [12, 3] and r["p"] == 13) == [1, 5, 7, 11]


def test_verify_record_fields():
    rec = verify_prime(12, 37)[0].to_json()
    assert set(rec) == {"schema", "pair", "p", "j", "hp", "psi", "ap", "match", "residual"}
    with pytest.raises(ValueError):
        verify_prime(5, 31)
    with pytest.raises(ValueError):
        verify_prime(12, 31)


def test_jobs_and_cache_do_not_change_output(tmp_path):
    a = verify_campaign((3, 12), 13, 200, jobs=1)
    b = verify_campaign((3, 12), 13, 200, jobs=3)
    assert a == b
    cache = CacheStore(tmp_path)
    c = verify_campaign((3, 12), 13, 200, cache=cache)
    assert (tmp_path / "verify.jsonl").exists()
    d = verify_campaign((3, 12), 13, 200, cache=CacheStore(tmp_path))
    assert a == c == d
    lines = (tmp_path / "verify.jsonl").read_text().splitlines()
    assert len(lines) == len({json.loads(l)["key"] for l in lines})


def test_cli_cache_replay_is_byte_identical(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("HYPMOD_CACHE", str(tmp_path))
    _, first, _ = run(capsys, "verify", "--pair", "4", "--p-max", "150")
    _, second, _ = run(capsys, "verify", "--pair", "4", "--p-max", "150")
    assert first == second


def test_timestamps_opt_in():
    recs = verify_campaign((2,), 13, 20, timestamps=True)
    assert all("timestamps" in r for r in recs)


def test_csv_output(capsys):
    code, out, _ = run(capsys, "verify", "--pair", "12", "--p-max", "40", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["schema"] == "1" and rows[0]["pair"] == "[12, 3]"


def test_output_file(capsys, tmp_path):
    path = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "hecke", "--family", "2", "-p", "2", "-o", str(path))
    assert code == 0 and out == ""
    rec = jsonl(path.read_text())[0]
    assert rec["matrix"] == [["0", "1"], ["-9", "0"]] and rec["basis"] == ["1/3", "2/3"]


def test_identities_hecke(capsys):
    code, out, _ = run(capsys, "identities", "--suite", "hecke")
    recs = jsonl(out)
    assert code == 0 and all(r["ok"] for r in recs[:-1])


def test_identities_paley_small(capsys):
    code, out, _ = run(capsys, "identities", "--suite", "paley", "--p-max", "60")
    assert code == 0 and jsonl(out)[-1]["failures"] == 0


def test_expand_text_and_json(capsys):
    code, out, _ = run(capsys, "expand", "--eta", "1:1", "-N", "6")
    assert code == 0 and out.startswith("q^(1/24) * (1 + -1*q^(24/24) + -1*q^(48/24)")
    _, out, _ = run(capsys, "expand", "--k3", "1/2", "--scaled", "-N", "10", "--format", "jsonl")
    s = QSeries.from_json(jsonl(out)[0])
    assert s.lead == 24 and s.coeff_q(1) == 1
    code, _, err = run(capsys, "expand", "--k3", "1/5", "--scaled")
    assert code == 2 and "expand" in err


def test_expand_theta_csv(capsys):
    _, out, _ = run(capsys, "expand", "--theta", "a", "-N", "4", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[:3] == [["exponent_24", "coeff"], ["0", "1"], ["24", "6"]]


def test_hp_command(capsys):
    code, out, _ = run(capsys, "hp", "--dm", "3,3", "-p", "13")
    rec = jsonl(out)[0]
    assert code == 0 and rec["verified"] and rec["p"] == 13
    code, out, _ = run(capsys, "hp", "--k3", "1/12", "--p-max", "100")
    assert code == 0 and [r["p"] for r in jsonl(out)[:-1]] == [13, 37, 61, 73, 97]


def test_paley_command(capsys):
    code, out, _ = run(capsys, "paley", "--q", "13", "--k", "3")
    rec = jsonl(out)[0]
    assert code == 0 and rec["agree"] and (rec["c"], rec["d"]) == (-5, 3)
    code, _, err = run(capsys, "paley", "--q", "11", "--k", "3")
    assert code == 2 and "paley" in err


def test_eigenform_command(capsys):
    code, out, _ = run(capsys, "eigenform", "--family", "5", "--ap-max", "13")
    rec = jsonl(out)[0]
    assert code == 0 and rec["ap"]["5"] == "3*sqrt(5)" and rec["ap"]["13"].lstrip("-").isdigit()
    code, out, _ = run(capsys, "eigenform", "--family", "5", "--constant", "5/12=-3*sqrt(5)")
    assert code == 0


def test_p3f2_and_lvalue(capsys):
    code, out, _ = run(capsys, "p3f2", "--r", "1/2", "--check", "--digits", "10")
    rec = jsonl(out)[0]
    assert code == 0 and rec["check"]["ok"]
    code, out, _ = run(capsys, "lvalue", "--family", "1", "--digits", "10")
    assert code == 0 and "L1" in jsonl(out)[0]


def test_bad_arguments_exit_nonzero(capsys):
    with pytest.raises(SystemExit) as e:
        main(["verify", "--pair", "5"])
    assert e.value.code != 0
