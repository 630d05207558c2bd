"""
Tests for Hamiltonian sources: documents, built-in models and parameter files.
"""

import json
import shutil
import tempfile
from pathlib import Path

import jsonschema
import pytest

from fock.document import dump_spec
from models.jaynes_cummings import ModifiedJCParams, modified_jc
from sources import BuiltinModel, ModelParameterFile, SpecFile


@pytest.mark.unit
class TestSpecFile:
    """Hamiltonian documents on disk"""

    def setup_method(self):
        """Temporary directory holding one JC document"""
        self.temp_dir = Path(tempfile.mkdtemp())
        self.spec = modified_jc(ModifiedJCParams(1.0, 0.8, 0.3, 0.5))
        (self.temp_dir / "jc.json").write_text(dump_spec(self.spec))

    def teardown_method(self):
        """Clean up after each test"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_relative_path_resolves_against_base(self):
        """Relative paths resolve against base_dir"""
        source = SpecFile("jc.json", base_dir=self.temp_dir)
        assert source.path == (self.temp_dir / "jc.json").resolve()
        assert source.load() == self.spec

    def test_absolute_path(self):
        """Absolute paths are kept"""
        assert SpecFile(self.temp_dir / "jc.json").load() == self.spec

    def test_missing_file(self):
        """A missing document raises FileNotFoundError"""
        with pytest.raises(FileNotFoundError):
            SpecFile("absent.json", base_dir=self.temp_dir).load()

    def test_malformed_document(self):
        """Records violating the schema are rejected"""
        (self.temp_dir / "bad.json").write_text(json.dumps({"terms": [{"channel": "sigma_z"}]}))
        with pytest.raises(jsonschema.ValidationError):
            SpecFile("bad.json", base_dir=self.temp_dir).load()


@pytest.mark.unit
class TestModelSources:
    """Built-in models with parameters from flags or a file"""

    def setup_method(self):
        """Temporary directory for parameter files"""
        self.temp_dir = Path(tempfile.mkdtemp())

    def teardown_method(self):
        """Clean up after each test"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_builtin_model(self):
        """Named model and values give the model's spec"""
        source = BuiltinModel("jahn-teller", {"mu": 0.1, "kappa": 0.2})
        assert len(source.load()) == 8
        assert source.describe() == "jahn-teller(kappa=0.2, mu=0.1)"

    def test_builtin_model_errors(self):
        """Unknown models and missing values fail early"""
        with pytest.raises(ValueError):
            BuiltinModel("rabi", {})
        with pytest.raises(ValueError, match="Missing"):
            BuiltinModel("jc", {"omega": 1.0})

    def test_parameter_file(self):
        """A {model, params} record builds the model"""
        path = self.temp_dir / "jt.json"
        path.write_text(json.dumps({"model": "jahn-teller", "params": {"mu": 0.1, "kappa": 0.2}}))
        source = ModelParameterFile(path)
        assert source.model.name == "jahn-teller"
        assert source.params.kappa == 0.2

    def test_parameter_file_schema(self):
        """Non-numeric parameters and extra keys violate the schema"""
        path = self.temp_dir / "bad.json"
        path.write_text(json.dumps({"model": "jc", "params": {"omega": "one"}}))
        with pytest.raises(jsonschema.ValidationError):
            ModelParameterFile(path)
        path.write_text(json.dumps({"model": "jc", "params": {}, "extra": 1}))
        with pytest.raises(jsonschema.ValidationError):
            ModelParameterFile(path)

    def test_parameter_file_missing(self):
        """A missing parameter file raises FileNotFoundError"""
        with pytest.raises(FileNotFoundError):
            ModelParameterFile(self.temp_dir / "absent.json")
