import subprocess
import sys

import pytest

from qmonogamy.cli import EXIT_DOMAIN, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, load_config, main, parse_coeffs
from qmonogamy.errors import InvariantError, UsageError
from qmonogamy.sweep import CSV_HEADER


def test_table1(capsys):
    assert main(["table1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PD" in out and ">2" in out


def test_sweep_to_file(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--state", "w", "--coeffs", "1,2,3", "--p-steps", "3", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER and len(lines) == 4


def test_sweep_to_stdout(capsys):
    assert main(["sweep", "--channel", "dep", "--p-steps", "2"]) == EXIT_OK
    assert capsys.readouterr().out.startswith(CSV_HEADER)


def test_measure(capsys):
    assert main(["measure", "--state", "ghz", "--p", "0.2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "tau_c" in out and "rank     2" in out
    assert main(["measure", "--state", "ghz", "--channel", "dep", "--p", "0.2"]) == EXIT_OK
    assert "unavailable" in capsys.readouterr().out


def test_config_file(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("# damped W\nstate = w\ncoeffs = 1,2,3  # caption state\np-steps = 3\nchannel = ad\n")
    assert load_config(str(conf)) == {"state": "w", "coeffs": "1,2,3", "p_steps": "3", "channel": "ad"}
    assert main(["sweep", "--config", str(conf)]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 4
    # command-line flags override the file
    assert main(["sweep", "--config", str(conf), "--p-steps", "2"]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.conf"
    bad.write_text("state w\n")
    with pytest.raises(UsageError):
        load_config(str(bad))
    assert main(["sweep", "--config", str(bad)]) == EXIT_USAGE
    assert main(["sweep", "--config", str(tmp_path / "nope.conf")]) == EXIT_USAGE


def test_parse_coeffs():
    assert parse_coeffs("1, 2j, 0.5-1j") == (1, 2j, 0.5 - 1j)
    with pytest.raises(UsageError):
        parse_coeffs("1,x")


@pytest.mark.parametrize(
    "argv,code",
    [
        (["sweep", "--state", "w", "--coeffs", "1,2"], EXIT_USAGE),
        (["sweep", "--state", "ghz", "--coeffs", "0,0"], EXIT_DOMAIN),
        (["sweep", "--p-start", "0.6", "--p-stop", "0.2"], EXIT_DOMAIN),
        (["measure", "--p", "1.5"], EXIT_DOMAIN),
        (["table1", "--p-sample", "0"], EXIT_DOMAIN),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert capsys.readouterr().err


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--channel", "bogus"])
    assert exc.value.code == EXIT_USAGE


def test_internal_error_exit(monkeypatch):
    import qmonogamy.cli as cli

    def boom(args):
        raise InvariantError("rank 3 on a rank-2 combination")

    monkeypatch.setattr(cli, "_cmd_sweep", boom)
    assert main(["sweep"]) == EXIT_INTERNAL


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "qmonogamy", "table1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "GHZ" in proc.stdout
