"""
Tests de la ligne de commande (click.testing.CliRunner).
"""

import json
from pathlib import Path

import pandas as pd
import pytest
from click.testing import CliRunner
from loguru import logger

from src.main import ExitCode, cli

ROOT = Path(__file__).resolve().parent.parent
CONFIG_DIR = str(ROOT / "config")
FINITE = str(ROOT / "data" / "finite.model")
UNBOUNDED = str(ROOT / "data" / "unbounded.model")
CORPUS = str(ROOT / "data" / "corpus.txt")


class TestCli:
    """Codes de sortie et sorties de référence."""

    def setup_method(self):
        self.runner = CliRunner(mix_stderr=False)

    def teardown_method(self):
        # Le sink console pointe sur le flux capturé par CliRunner
        logger.remove()

    def run(self, *args):
        return self.runner.invoke(cli, ["--config-dir", CONFIG_DIR, *args])

    def test_parse(self):
        result = self.run("parse", "-e", "/u/ . O/v/")
        assert result.exit_code == ExitCode.OK
        assert result.stdout.startswith("<expr>:1: slash")

    def test_logger_configured_once_from_settings(self, mocker):
        config = mocker.patch("src.main.LoggerConfig")
        result = self.run("--log-level", "info", "parse", "-e", "/u/")
        assert result.exit_code == ExitCode.OK
        config.assert_called_once()
        assert config.call_args.kwargs['level'] == "INFO"
        assert config.call_args.kwargs['format_type'] == "text"

    def test_parse_error(self):
        result = self.run("parse", "-e", "<u|/v/")
        assert result.exit_code == ExitCode.PARSE
        assert "<expr>:1:4: error:" in result.stderr

    def test_convert_bra_operator(self):
        result = self.run("convert", "--to", "slash", "-e", "<psi|O")
        assert result.exit_code == ExitCode.OK
        assert result.stdout == "dag(O)/psi/ .\n"

    def test_convert_to_braket_notes_chained_form(self):
        result = self.run("convert", "--to", "braket", "-e", "/u/ . O/v/")
        assert result.exit_code == ExitCode.OK
        assert result.stdout == "<u|O|v>\n"
        assert "note:" in result.stderr

    def test_convert_latex(self):
        result = self.run("convert", "--to", "latex-slash", "-e", "/u/ . /v/")
        assert result.stdout == "/u/\\lcdot/v/\n"

    def test_convert_trace(self):
        result = self.run("convert", "--to", "slash", "--trace", "-e", "<u|O|v>")
        assert result.stdout.splitlines() == [
            "/u/ . O/v/",
            "1. chained-to-product: /u/O/v/ => /u/ . O/v/",
        ]

    def test_check_rejects_chained_element(self):
        result = self.run("check", "-m", UNBOUNDED, "-e", "<u|P|v>")
        assert result.exit_code == ExitCode.CHECK
        assert "error BK1 1:1" in result.stdout
        assert "[suggestion: /u/ . P/v/]" in result.stdout

    def test_check_accepts_slash_form(self):
        result = self.run("check", "-m", UNBOUNDED, "-e", "/u/ . P/v/")
        assert result.exit_code == ExitCode.OK
        assert result.stdout == "<expr>:1: ok\n"

    def test_check_acting_right(self):
        result = self.run("check", "-m", UNBOUNDED, "--acting-right", "-e", "<u|P|v>")
        assert result.exit_code == ExitCode.OK

    def test_check_unknown_symbol(self):
        result = self.run("check", "-m", UNBOUNDED, "-e", "/z/ . /v/")
        assert result.exit_code == ExitCode.CHECK
        assert "z" in result.stderr

    def test_check_corpus_on_finite_model(self):
        result = self.run("check", "-m", FINITE, CORPUS)
        assert result.exit_code == ExitCode.OK, result.stdout

    def test_check_requires_model(self):
        result = self.run("check", "-e", "/u/ . /v/")
        assert result.exit_code == 2
        assert "requires a model" in result.stderr

    def test_structured_output(self):
        result = self.run("--format", "structured", "check", "-m", UNBOUNDED, "-e", "<u|P|v>")
        record = json.loads(result.stdout.splitlines()[0])
        assert record['rule'] == "BK1"
        assert record['source'] == "<expr>"

    def test_bad_model(self, tmp_path):
        model = tmp_path / "bad.model"
        model.write_text("[space]\nkind = bogus\n", encoding="utf-8")
        result = self.run("check", "-m", str(model), "-e", "/u/ . /v/")
        assert result.exit_code == ExitCode.MODEL
        assert "unknown model kind" in result.stderr

    def test_missing_model_file(self, tmp_path):
        result = self.run("check", "-m", str(tmp_path / "absent.model"), "-e", "/u/ . /v/")
        assert result.exit_code == ExitCode.MODEL

    def test_eval_functional(self):
        result = self.run("eval", "-m", FINITE, "-e", "<F|v>")
        assert result.exit_code == ExitCode.OK
        assert result.stdout == "2+3j\n"

    def test_eval_scalar_option(self):
        result = self.run("eval", "-m", FINITE, "--scalar", "c=2", "-e", "c/u/ . /u/")
        assert result.stdout == "2+0j\n"

    def test_eval_needs_truncation(self):
        result = self.run("eval", "-m", UNBOUNDED, "-e", "/u/ . P/v/")
        assert result.exit_code == 2
        assert "-N" in result.stderr

    def test_eval_forced(self):
        refused = self.run("eval", "-m", UNBOUNDED, "-N", "100", "-e", "<u|P|v>")
        assert refused.exit_code == ExitCode.CHECK
        forced = self.run("eval", "-m", UNBOUNDED, "-N", "100", "--force", "-e", "<u|P|v>")
        assert forced.exit_code == ExitCode.OK
        assert forced.stdout.rstrip().endswith("(forced: truncation-dependent)")
        assert "warning: forced evaluation" in forced.stderr

    def test_sweep(self, tmp_path):
        plot = tmp_path / "sweep.csv"
        result = self.run("sweep", "-m", UNBOUNDED, "--ns", "16,64,256,1024,4096",
                          "--plot-data", str(plot), "-e", "/u/ . P/v/")
        assert result.exit_code == ExitCode.OK
        assert "verdict: convergent" in result.stdout
        assert pd.read_csv(plot)['N'].tolist() == [16, 64, 256, 1024, 4096]

    def test_sweep_rejects_unordered_levels(self):
        result = self.run("sweep", "-m", UNBOUNDED, "--ns", "100,10", "-e", "/u/ . P/v/")
        assert result.exit_code == 2

    def test_probe(self):
        result = self.run("probe", "-m", UNBOUNDED, "--op", "P", "--state", "u",
                          "--ns", "16,256,4096")
        assert result.exit_code == ExitCode.OK
        assert "verdict: divergent" in result.stdout

    def test_rewrite_identity(self):
        result = self.run("rewrite", "--op", "identity", "--basis", "e", "-m", FINITE,
                          "-e", "/x/ . /y/")
        assert result.stdout == "/x/ . /e1/ ^ /e1/ . /y/ + /x/ . /e2/ ^ /e2/ . /y/\n"

    def test_rewrite_identity_needs_basis(self):
        result = self.run("rewrite", "--op", "identity", "-e", "/x/ . /y/")
        assert result.exit_code == 2

    def test_rewrite_adjoint_error(self):
        result = self.run("rewrite", "--op", "adjoint", "-e", "/u/ . /v/")
        assert result.exit_code == ExitCode.CHECK

    @pytest.mark.parametrize("name", ["unbounded", "hellinger"])
    def test_growth_demos(self, name):
        result = self.run("demo", name)
        assert result.exit_code == ExitCode.OK
        assert result.stdout.rstrip().endswith("ok")

    def test_riesz_demo(self):
        result = self.run("demo", "riesz", "--dim", "8", "--seed", "7")
        assert result.exit_code == ExitCode.OK
        assert "seed 7" in result.stdout

    def test_explain(self):
        result = self.run("explain", "bk1")
        assert result.exit_code == ExitCode.OK
        assert result.stdout.startswith("BK1: ")
        assert self.run("explain", "ZZ9").exit_code == ExitCode.CHECK
