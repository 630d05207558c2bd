import logging

from processing.algebra import CATALOG, catalog, span_residual, verify_closure

from .strategy import EXIT_FAILED, EXIT_OK, RunStrategy

logger = logging.getLogger(__name__)

# generator sets that must lie inside the span of a larger one
SUBALGEBRAS = {"sp4r": ("su2", "su11")}


class VerifyAlgebraStrategy(RunStrategy):
    def run(self) -> int:
        """
        Checks closure of one catalog generator set on the interior of the cutoff
        basis. For sp4r the su(2) and su(1,1) generators are also expanded in its span.
        """
        name = self.config.generator_set
        if not name:
            raise ValueError(f"Choose a generator set with --set, one of {sorted(CATALOG)}")
        gens = catalog(name)
        tol = self.config.tol
        report = verify_closure(gens, self.config.cutoff, tol)
        data = report.to_dict()
        passed = report.passed

        subalgebras = {}
        for sub in SUBALGEBRAS.get(name, ()):
            residual = span_residual(catalog(sub), gens, self.config.cutoff)
            subalgebras[sub] = residual
            passed = passed and residual < tol
        if subalgebras:
            data["subalgebras"] = subalgebras
        data["passed"] = passed

        def table() -> str:
            lines = [f"{gens.name}: {gens.description}", f"cutoff {report.cutoff}, tol {tol:.3g}"]
            if gens.added:
                lines.append(f"added generators: {', '.join(gens.added)}")
            for result in report.results:
                status = "ok" if result.residual < tol else "FAILED"
                lines.append(f"  {result.relation.describe():50s} residual {result.residual:.3g}  {status}")
                if result.relation.expected is None and result.coefficients:
                    expansion = " + ".join(f"{c:.12g} {label}" for label, c in result.coefficients.items())
                    lines.append(f"      = {expansion}")
            for sub, residual in subalgebras.items():
                lines.append(f"  {sub} inside {gens.name}: residual {residual:.3g}")
            lines.append("closed" if passed else "NOT closed")
            return "\n".join(lines)

        self.config.emit(self.render(data, table))
        if not passed:
            logger.error(f"{gens.name}: {len(report.failures())} relations fail above {tol}")
            return EXIT_FAILED
        return EXIT_OK
