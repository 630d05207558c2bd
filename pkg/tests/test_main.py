"""
End-to-end tests of the command line: argument wiring, reports and exit codes.
"""

import json
import shutil
import tempfile
from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest

import main
import processing.spectra
from config import RunConfig
from fock.document import load_spec
from models.jahn_teller import JahnTellerParams, jahn_teller
from run_strategies import EXIT_FAILED, EXIT_OK, EXIT_USAGE

JC_FLAGS = ["--model", "jc", "--omega", "1", "--omega0", "0.8", "--lambda1", "0.3", "--lambda2", "0.5"]
JT_FLAGS = ["--model", "jahn-teller", "--mu", "0.1", "--kappa", "0.2"]
KERR_FLAGS = ["--model", "jc-kerr", "--omega", "1", "--omega0", "0.8", "--kappa", "0.2", "--lambda", "0.1"]


@pytest.mark.unit
class TestArgumentWiring:
    """Parser and strategy dispatch"""

    def test_model_flags_reach_config(self):
        """Model flags become model values, --lambda maps to the Kerr strength"""
        args = main.build_parser().parse_args(["spectrum", *KERR_FLAGS, "--sector", "j=1", "--cutoff", "6,0"])
        config = main.make_config(args)
        assert config.model.name == "jc-kerr"
        assert config.source.values == {"omega": 1.0, "omega0": 0.8, "kappa": 0.2, "lambda": 0.1}
        assert config.cutoff == (6, 0)
        assert config.sectors == ["j=1"]

    def test_dispatch_to_strategy(self):
        """Each subcommand runs its strategy with the built config"""
        strategy = MagicMock()
        strategy.return_value.run.return_value = EXIT_OK
        with patch.dict(main.STRATEGIES, {"build": strategy}):
            assert main.main(["build", *JT_FLAGS]) == EXIT_OK
        config = strategy.call_args.args[0]
        assert isinstance(config, RunConfig)
        assert config.model.name == "jahn-teller"
        strategy.return_value.run.assert_called_once()

    def test_progress_and_tolerance_reach_scan(self, mocker, capsys):
        """--progress and --tol are handed to the convergence scan"""
        scan = mocker.patch(
            "run_strategies.spectrum_strategy.convergence_scan", wraps=processing.spectra.convergence_scan
        )
        argv = ["spectrum", *JT_FLAGS, "--sector", "j=0", "--cutoffs", "20,30", "-k", "2", "--progress", "--tol", "1e-3"]
        assert main.main(argv) == EXIT_OK
        assert scan.call_args.kwargs["progress"] is True
        assert scan.call_args.kwargs["tol"] == 1e-3

    def test_unknown_subcommand(self):
        """argparse rejects unknown subcommands"""
        with pytest.raises(SystemExit):
            main.main(["rotate"])

    def test_usage_errors(self, capsys):
        """Configuration errors give exit code 2"""
        assert main.main(["build", "--model", "jc", "--omega", "1"]) == EXIT_USAGE
        assert main.main(["spectrum", *JC_FLAGS]) == EXIT_USAGE
        assert main.main(["check-symmetry", *JC_FLAGS, "--cutoff", "x"]) == EXIT_USAGE


@pytest.mark.integration
class TestCommands:
    """Commands run end to end on the built-in models"""

    def setup_method(self):
        """Temporary directory for documents and reports"""
        self.temp_dir = Path(tempfile.mkdtemp())

    def teardown_method(self):
        """Clean up after each test"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_build_round_trip(self):
        """A built document rebuilds to the same bytes"""
        first = self.temp_dir / "jt.json"
        second = self.temp_dir / "again.json"
        assert main.main(["build", *JT_FLAGS, "-o", str(first)]) == EXIT_OK
        assert load_spec(first) == jahn_teller(JahnTellerParams(0.1, 0.2))
        assert main.main(["build", "--spec-file", str(first), "-o", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_empty_hamiltonian(self):
        """An empty document is a usage error"""
        path = self.temp_dir / "empty.json"
        path.write_text(json.dumps({"terms": []}))
        assert main.main(["check-symmetry", "--spec-file", str(path)]) == EXIT_USAGE

    def test_malformed_document(self):
        """Schema violations are usage errors"""
        path = self.temp_dir / "bad.json"
        path.write_text(json.dumps({"terms": [{"channel": "sigma_z"}]}))
        assert main.main(["build", "--spec-file", str(path)]) == EXIT_USAGE

    def test_check_symmetry(self, capsys):
        """The JC number operator is found and conserved"""
        assert main.main(["check-symmetry", *JC_FLAGS, "-f", "structured", "--cutoff", "4,4"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["conserved"] is True
        assert data["solutions"] == [{"s": "1", "p": "1", "r": "1/2"}]
        assert data["numeric_residual"] < 1e-12

    def test_check_symmetry_violation(self, capsys):
        """Jahn-Teller breaks the JC number operator"""
        assert main.main(["check-symmetry", *JT_FLAGS, "--number-operator", "1,1,1/2"]) == EXIT_FAILED
        assert "NOT conserved" in capsys.readouterr().out

    def test_check_symmetry_without_solution(self, capsys):
        """A Hamiltonian with no conserved N fails"""
        path = self.temp_dir / "broken.json"
        path.write_text(
            json.dumps(
                {
                    "terms": [
                        {"channel": "sigma_plus", "v1": 1, "v2": 0, "v3": 0, "v4": 0, "coefficient": 1.0},
                        {"channel": "identity", "v1": 0, "v2": 0, "v3": 1, "v4": 0, "coefficient": 1.0},
                        {"channel": "identity", "v1": 0, "v2": 1, "v3": 0, "v4": 0, "coefficient": 1.0},
                    ]
                }
            )
        )
        assert main.main(["check-symmetry", "--spec-file", str(path)]) == EXIT_FAILED
        assert main.main(["sectors", "--spec-file", str(path)]) == EXIT_FAILED

    def test_sectors_csv(self, capsys):
        """Sector listing in CSV keeps one row per sector"""
        assert main.main(["sectors", *JC_FLAGS, "--cutoff", "2,2", "-f", "csv", "--sector", "j=1"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "label,dimension,states"
        assert lines[1].startswith("3/2,5,")

    def test_spectrum_with_analytic(self, capsys):
        """jc spectra agree with the closed-form levels"""
        argv = ["spectrum", *JC_FLAGS, "--sector", "j=2", "--analytic", "--count", "7", "-f", "structured"]
        assert main.main(argv) == EXIT_OK
        sector = json.loads(capsys.readouterr().out)["sectors"][0]
        assert len(sector["eigenvalues"]) == 7
        assert sector["max_analytic_gap"] < 1e-9
        assert len(sector["roots"]) == 7

    @pytest.mark.slow
    def test_spectrum_convergence_scan(self, capsys):
        """Jahn-Teller levels converge between 60 and 80 states"""
        argv = ["spectrum", *JT_FLAGS, "--sector", "j=0", "--cutoffs", "60,80", "-k", "5", "-f", "csv"]
        assert main.main(argv) == EXIT_OK
        rows = capsys.readouterr().out.strip().splitlines()
        assert len(rows) == 6
        assert all(row.endswith(",true") for row in rows[1:])

    def test_spectrum_scan_not_converged(self):
        """A scan that is too short fails"""
        argv = ["spectrum", *JT_FLAGS, "--sector", "j=0", "--cutoffs", "4,6", "-k", "4", "--tol", "1e-12"]
        assert main.main(argv) == EXIT_FAILED

    def test_ode(self, capsys):
        """The JC sector ODE is first order in the ratio variable"""
        assert main.main(["ode", *JC_FLAGS, "--sector", "j=1", "-f", "structured"]) == EXIT_OK
        ode = json.loads(capsys.readouterr().out)["odes"][0]
        assert ode["variable"] == "z1^-1*z2"
        assert len(ode["orders"]) == 2

    def test_ode_scale(self, capsys):
        """--scale multiplies every coefficient"""
        assert main.main(["ode", *JT_FLAGS, "--sector", "j=0", "--scale", "1/2", "-f", "structured"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["scale"] == "1/2"
        assert main.main(["ode", *JT_FLAGS, "--sector", "j=0", "--scale", "0"]) == EXIT_USAGE

    def test_verify_algebra(self, capsys):
        """Catalog sets close on the default cutoff"""
        assert main.main(["verify-algebra", "--set", "su2"]) == EXIT_OK
        assert "closed" in capsys.readouterr().out
        assert main.main(["verify-algebra", "--set", "sp4r", "-f", "structured"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert set(data["subalgebras"]) == {"su2", "su11"}
        assert data["added_generators"] == []
        assert main.main(["verify-algebra", "--set", "osp21_a", "--cutoff", "6,6"]) == EXIT_OK
        assert "added generators: Z" in capsys.readouterr().out

    def test_compare_jc(self, capsys):
        """Full, reduced, polynomial and closed-form spectra agree"""
        argv = ["compare", *JC_FLAGS, "--cutoff", "6,6", "--sector", "j=0", "--sector", "j=2", "-f", "structured"]
        assert main.main(argv) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["passed"] is True
        assert all(record["reduced_vs_analytic"] < 1e-9 for record in data["sectors"])

    def test_compare_escaping_sector(self):
        """A sector that does not fit the cutoff is a mismatch"""
        assert main.main(["compare", *JC_FLAGS, "--cutoff", "2,2", "--sector", "j=4"]) == EXIT_FAILED

    def test_compare_kerr(self, capsys):
        """Kerr sectors and the deformed su(2) form agree"""
        argv = ["compare", *KERR_FLAGS, "--cutoff", "10,0", "--sector", "1/2", "--sector", "5/2", "-f", "structured"]
        assert main.main(argv) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["deformed_su2"]["passed"] is True

    def test_report_written_to_file(self):
        """-o writes the report instead of printing it"""
        target = self.temp_dir / "report.json"
        assert main.main(["verify-algebra", "--set", "su11", "-f", "structured", "-o", str(target)]) == EXIT_OK
        assert json.loads(target.read_text())["set"] == "su11"
