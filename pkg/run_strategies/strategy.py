import logging
from abc import ABC, abstractmethod
from typing import Callable

from config import RunConfig
from fock.core import HamiltonianSpec
from fock.document import dumps
from processing.symmetry import NotConservedError, NumberOperatorSpec, SectorLabel, solve_conservation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class RunStrategy(ABC):
    def __init__(self, configuration: RunConfig):
        self.config = configuration

    @abstractmethod
    def run(self) -> int:
        """
        Primary execution method of the child classes, returns the process exit code
        """
        pass

    def fetch_spec(self) -> HamiltonianSpec:
        return self.config.load_spec()

    def number_operator(self, spec: HamiltonianSpec) -> NumberOperatorSpec:
        """
        The N to work with: the --number-operator override, then the model's
        documented N, then the first solution of the conservation system.
        """
        if self.config.number_operator is not None:
            return self.config.number_operator
        if self.config.model is not None:
            return self.config.model.conserved
        solutions = solve_conservation(spec)
        if not solutions:
            raise NotConservedError("No number operator s n1 + p n2 + r sigma0 commutes with this Hamiltonian")
        if len(solutions) > 1:
            logger.warning(f"{len(solutions)} independent conserved N found, using {solutions[0]}")
        return solutions[0]

    def selected_sectors(self, n: NumberOperatorSpec) -> list[SectorLabel]:
        sectors = self.config.resolve_sectors(n)
        if not sectors:
            raise ValueError("Select at least one sector with --sector (e.g. 'j=2' or '5/2')")
        return sectors

    def render(self, data: dict, table: Callable[[], str], csv: Callable[[], str] | None = None) -> str:
        fmt = self.config.output_format
        if fmt == "structured":
            return dumps(data)
        if fmt == "csv":
            if csv is None:
                raise ValueError(f"{type(self).__name__} has no csv output, use table or structured")
            return csv()
        text = table()
        return text if text.endswith("\n") else text + "\n"
