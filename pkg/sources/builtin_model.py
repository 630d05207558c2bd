import logging

from fock.core import HamiltonianSpec
from models.registry import ModelEntry, get_model

logger = logging.getLogger(__name__)


class BuiltinModel:
    def __init__(self, name: str, values: dict):
        self.model: ModelEntry = get_model(name)
        self.values = dict(values)
        self.params = self.model.make_params(self.values)

    def load(self) -> HamiltonianSpec:
        spec = self.model.build(self.params)
        logger.info(f"Model '{self.model.name}' gives {len(spec)} terms")
        return spec

    def describe(self) -> str:
        values = ", ".join(f"{key}={value:.12g}" for key, value in sorted(self.values.items()))
        return f"{self.model.name}({values})"
