"""
Tests for the Hamiltonian document codec.
"""

import json
import shutil
import tempfile
from pathlib import Path

import jsonschema
import pytest

from fock.core import SpinChannel, elementary, monomial
from fock.document import SPEC_SCHEMA, dump_spec, dumps, format_number, load_spec, spec_from_dict, spec_to_dict
from models.jaynes_cummings import ModifiedJCParams, modified_jc


@pytest.mark.unit
class TestSpecDocument:
    """Canonical JSON form of a HamiltonianSpec"""

    def setup_method(self):
        """Temporary directory and a small spec"""
        self.temp_dir = tempfile.mkdtemp()
        self.spec = monomial(0.3, 1, 0, 0, 0, SpinChannel.SIGMA_MINUS) + elementary("sigma0", 0.4)

    def teardown_method(self):
        """Clean up after each test"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_document_matches_schema(self):
        """spec_to_dict output validates against the document schema"""
        data = spec_to_dict(self.spec)
        jsonschema.validate(instance=data, schema=SPEC_SCHEMA)
        assert [record["channel"] for record in data["terms"]] == ["sigma0", "sigma_minus"]

    def test_dict_round_trip(self):
        """Reading a written document gives back the same spec"""
        assert spec_from_dict(spec_to_dict(self.spec)) == self.spec

    def test_dump_is_byte_stable(self):
        """Loading and dumping a canonical file reproduces its bytes"""
        text = dump_spec(modified_jc(ModifiedJCParams(1.0, 0.8, 0.3, 0.5)))
        path = Path(self.temp_dir) / "jc.json"
        path.write_text(text, encoding="utf-8")
        assert dump_spec(load_spec(path)) == text
        assert text.endswith("\n")

    def test_malformed_document_rejected(self):
        """Unknown channels and negative exponents fail schema validation"""
        bad_channel = {"terms": [{"channel": "sigma_x", "v1": 0, "v2": 0, "v3": 0, "v4": 0, "coefficient": 1.0}]}
        with pytest.raises(jsonschema.ValidationError):
            spec_from_dict(bad_channel)
        negative = {"terms": [{"channel": "identity", "v1": -1, "v2": 0, "v3": 0, "v4": 0, "coefficient": 1.0}]}
        with pytest.raises(jsonschema.ValidationError):
            spec_from_dict(negative)

    def test_duplicate_records_merge(self):
        """Duplicate rows in a document merge into one term"""
        row = {"channel": "identity", "v1": 1, "v2": 1, "v3": 0, "v4": 0, "coefficient": 0.25}
        spec = spec_from_dict({"terms": [row, dict(row)]})
        assert len(spec) == 1
        assert spec.terms[0].coefficient == 0.5

    def test_number_formatting(self):
        """Numbers print with 12 significant digits"""
        assert format_number(1 / 3) == "0.333333333333"
        assert format_number(2.0) == "2"

    def test_dumps_layout(self):
        """JSON documents use four-space indentation and keep non-ASCII text"""
        text = dumps({"label": "ω"})
        assert text == '{\n    "label": "ω"\n}\n'
        assert json.loads(text) == {"label": "ω"}
