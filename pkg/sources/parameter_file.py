import json
import logging
from pathlib import Path

import jsonschema

from .builtin_model import BuiltinModel
from .spec_file import SpecFile

logger = logging.getLogger(__name__)

PARAMETER_SCHEMA = {
    "type": "object",
    "required": ["model", "params"],
    "properties": {
        "model": {"type": "string"},
        "params": {
            "type": "object",
            "additionalProperties": {"type": "number"},
        },
    },
    "additionalProperties": False,
}


class ModelParameterFile(BuiltinModel):
    """A built-in model whose name and parameters come from a JSON record on disk."""

    def __init__(self, file_path: str | Path, base_dir: str | Path | None = None):
        self.file_path = SpecFile(file_path, base_dir).path
        if not self.file_path.is_file():
            raise FileNotFoundError(f"Parameter file not found: {self.file_path}")
        with open(self.file_path, "r", encoding="utf-8") as file:
            data = json.load(file)
        jsonschema.validate(instance=data, schema=PARAMETER_SCHEMA)
        logger.info(f"Read parameters for model '{data['model']}' from {self.file_path}")
        super().__init__(data["model"], data["params"])
