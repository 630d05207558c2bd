import logging

import sympy

from processing.bargmann import extract_ode

from .strategy import EXIT_OK, RunStrategy

logger = logging.getLogger(__name__)


def parse_scale(text: str | None) -> sympy.Rational | None:
    if text is None:
        return None
    try:
        factor = sympy.Rational(text)
    except (TypeError, ValueError) as e:
        raise ValueError(f"Malformed scale factor '{text}'") from e
    if factor == 0:
        raise ValueError("Scale factor must not be zero")
    return factor


class OdeStrategy(RunStrategy):
    def run(self) -> int:
        """
        Prints the coupled 2x2 polynomial ODE of each selected sector, optionally
        multiplied through by --scale. Table output is the pretty form, structured
        output the exact coefficient strings.
        """
        spec = self.fetch_spec()
        n = self.number_operator(spec)
        factor = parse_scale(self.config.scale)
        odes = []
        for sector in self.selected_sectors(n):
            ode = extract_ode(spec, n, sector)
            odes.append(ode if factor is None else ode.scaled(factor))

        data = {"number_operator": n.to_dict(), "odes": [ode.to_dict() for ode in odes]}
        if factor is not None:
            data["scale"] = str(factor)
        self.config.emit(self.render(data, lambda: "\n\n".join(ode.pretty() for ode in odes)))
        return EXIT_OK
