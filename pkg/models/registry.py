import logging
from dataclasses import dataclass, fields
from typing import Callable

from fock.core import HamiltonianSpec
from processing.symmetry import NumberOperatorSpec

from .jahn_teller import CONSERVED_N as JT_N
from .jahn_teller import JahnTellerParams, jahn_teller
from .jaynes_cummings import CONSERVED_N as JC_N
from .jaynes_cummings import ModifiedJCParams, modified_jc
from .jc_kerr import CONSERVED_N as KERR_N
from .jc_kerr import JCKerrParams, jc_kerr

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelEntry:
    name: str
    params_type: type
    build: Callable[..., HamiltonianSpec]
    conserved: NumberOperatorSpec
    # external parameter name -> dataclass field
    parameters: dict[str, str]
    description: str = ""

    def make_params(self, values: dict):
        unknown = sorted(set(values) - set(self.parameters))
        if unknown:
            raise ValueError(f"Unknown parameters for model '{self.name}': {unknown}")
        missing = sorted(set(self.parameters) - set(values))
        if missing:
            raise ValueError(f"Missing parameters for model '{self.name}': {missing}")
        try:
            kwargs = {self.parameters[key]: float(value) for key, value in values.items()}
        except (TypeError, ValueError) as e:
            raise ValueError(f"Malformed parameters for model '{self.name}': {e}") from e
        return self.params_type(**kwargs)

    def spec(self, values: dict) -> HamiltonianSpec:
        params = self.make_params(values)
        logger.info(f"Building model '{self.name}' with {params}")
        return self.build(params)


MODELS = {
    "jc": ModelEntry(
        name="jc",
        params_type=ModifiedJCParams,
        build=modified_jc,
        conserved=JC_N,
        parameters={"omega": "omega", "omega0": "omega0", "lambda1": "lambda1", "lambda2": "lambda2"},
        description="two-mode Jaynes-Cummings atom",
    ),
    "jahn-teller": ModelEntry(
        name="jahn-teller",
        params_type=JahnTellerParams,
        build=jahn_teller,
        conserved=JT_N,
        parameters={"mu": "mu", "kappa": "kappa"},
        description="two-level Jahn-Teller system",
    ),
    "jc-kerr": ModelEntry(
        name="jc-kerr",
        params_type=JCKerrParams,
        build=jc_kerr,
        conserved=KERR_N,
        parameters={"omega": "omega", "omega0": "omega0", "kappa": "kappa", "lambda": "lam"},
        description="Jaynes-Cummings atom in a Kerr medium",
    ),
}


def get_model(name: str) -> ModelEntry:
    if name not in MODELS:
        raise ValueError(f"Unknown model '{name}', expected one of {sorted(MODELS)}")
    return MODELS[name]


def params_to_dict(entry: ModelEntry, params) -> dict:
    by_field = {field: key for key, field in entry.parameters.items()}
    return {by_field[f.name]: getattr(params, f.name) for f in fields(params)}
