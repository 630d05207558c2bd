import json
import logging
from pathlib import Path

import jsonschema

from fock.core import HamiltonianSpec, MonomialTerm, SpinChannel

logger = logging.getLogger(__name__)

SPEC_SCHEMA = {
    "type": "object",
    "required": ["terms"],
    "properties": {
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["channel", "v1", "v2", "v3", "v4", "coefficient"],
                "properties": {
                    "channel": {"enum": [c.value for c in SpinChannel]},
                    "v1": {"type": "integer", "minimum": 0},
                    "v2": {"type": "integer", "minimum": 0},
                    "v3": {"type": "integer", "minimum": 0},
                    "v4": {"type": "integer", "minimum": 0},
                    "coefficient": {"type": "number"},
                },
                "additionalProperties": False,
            },
        },
    },
}


def spec_to_dict(spec: HamiltonianSpec) -> dict:
    return {
        "terms": [
            {
                "channel": term.channel.value,
                "v1": term.exponents[0],
                "v2": term.exponents[1],
                "v3": term.exponents[2],
                "v4": term.exponents[3],
                "coefficient": term.coefficient,
            }
            for term in spec.terms
        ]
    }


def spec_from_dict(data: dict) -> HamiltonianSpec:
    jsonschema.validate(instance=data, schema=SPEC_SCHEMA)
    return HamiltonianSpec.from_terms(
        MonomialTerm(
            float(record["coefficient"]),
            (record["v1"], record["v2"], record["v3"], record["v4"]),
            SpinChannel(record["channel"]),
        )
        for record in data["terms"]
    )


def format_number(value: float) -> str:
    return f"{value:.12g}"


def dumps(data: dict) -> str:
    """Canonical JSON text; identical inputs always give identical bytes."""
    return json.dumps(data, ensure_ascii=False, indent=4) + "\n"


def dump_spec(spec: HamiltonianSpec) -> str:
    return dumps(spec_to_dict(spec))


def load_spec(path: str | Path) -> HamiltonianSpec:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as file:
        data = json.load(file)
    spec = spec_from_dict(data)
    logger.info(f"Loaded {len(spec)} terms from {path}")
    return spec
