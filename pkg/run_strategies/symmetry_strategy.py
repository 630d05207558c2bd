import csv
import io
import logging

from fock.core import Basis
from processing.symmetry import check_conservation, numeric_conservation_check, sector_decompose, solve_conservation

from .strategy import EXIT_FAILED, EXIT_OK, RunStrategy

logger = logging.getLogger(__name__)


class CheckSymmetryStrategy(RunStrategy):
    def run(self) -> int:
        """
        Reports the conserved (s, p, r) span of the Hamiltonian and the per-term
        residuals for one N: the --number-operator override, otherwise the first
        solution. Exit code 0 iff that N is conserved.
        """
        spec = self.fetch_spec()
        solutions = solve_conservation(spec)
        n = self.config.number_operator or (solutions[0] if solutions else None)
        data = {"solutions": [s.to_dict() for s in solutions]}

        if n is None:
            data.update({"number_operator": None, "conserved": False, "terms": []})
            self.config.emit(self.render(data, lambda: "no conserved number operator of the form s n1 + p n2 + r sigma0"))
            logger.error("Hamiltonian conserves no number operator")
            return EXIT_FAILED

        report = check_conservation(spec, n)
        data.update(report.to_dict())
        data["numeric_residual"] = numeric_conservation_check(spec, n, self.config.cutoff)

        def table() -> str:
            lines = ["conserved span: " + (", ".join(str(s) for s in solutions) or "none")]
            lines.append(f"N = {n}: {'conserved' if report.conserved else 'NOT conserved'}")
            for record in report.records:
                marker = "" if record.residual == 0 else "  <-- violates"
                lines.append(f"  {str(record.term):40s} residual {record.residual}{marker}")
            lines.append(f"max |[N, H]| on cutoff {self.config.cutoff} interior: {data['numeric_residual']:.3g}")
            return "\n".join(lines)

        self.config.emit(self.render(data, table))
        if not report.conserved:
            logger.error(f"N={n} is not conserved by {len(report.violations())} terms")
            return EXIT_FAILED
        return EXIT_OK


class SectorsStrategy(RunStrategy):
    def run(self) -> int:
        """
        Lists the sectors of the truncated basis: label, dimension and states.
        Selectors given with --sector restrict the listing.
        """
        spec = self.fetch_spec()
        n = self.number_operator(spec)
        sectors = sector_decompose(Basis(self.config.cutoff), n)
        wanted = self.config.resolve_sectors(n)
        if wanted:
            sectors = {label: states for label, states in sectors.items() if label in wanted}
        logger.info(f"{len(sectors)} sectors of N={n} inside cutoff {self.config.cutoff}")

        data = {
            "number_operator": n.to_dict(),
            "cutoff": list(self.config.cutoff),
            "sectors": [
                {"label": str(label), "dimension": len(states), "states": [str(s) for s in states]}
                for label, states in sectors.items()
            ],
        }

        def table() -> str:
            lines = [f"N = {n}, cutoff {self.config.cutoff}"]
            for record in data["sectors"]:
                lines.append(f"  {record['label']:>8s}  dim {record['dimension']:3d}  " + " ".join(record["states"]))
            return "\n".join(lines)

        def csv_text() -> str:
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(["label", "dimension", "states"])
            for r in data["sectors"]:
                writer.writerow([r["label"], r["dimension"], " ".join(r["states"])])
            return buffer.getvalue()

        self.config.emit(self.render(data, table, csv_text))
        return EXIT_OK
