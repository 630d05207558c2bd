import logging

import numpy as np

from fock.core import Basis, assemble_operator
from fock.document import format_number
from models.jaynes_cummings import jc_sector_levels
from models.jc_kerr import jc_kerr_deformed_form
from processing.bargmann import energy_polynomials, qes_roots, reduce_sector
from processing.spectra import (
    CONVERGENCE_TOL,
    SpectrumResult,
    convergence_scan,
    cross_validate,
    diagonalize,
    sort_spectrum,
    spectrum_csv,
)
from processing.symmetry import NumberOperatorSpec, SectorLabel, j_for_sector

from .strategy import EXIT_FAILED, EXIT_OK, RunStrategy

logger = logging.getLogger(__name__)

ANALYTIC_TOL = 1e-9
CROSS_VALIDATION_TOL = 1e-9


def _model_name(strategy: RunStrategy) -> str | None:
    model = strategy.config.model
    return None if model is None else model.name


def _jc_index(n: NumberOperatorSpec, sector: SectorLabel) -> int:
    j = j_for_sector(n, sector)
    if j.denominator != 1 or j < 0:
        raise ValueError(f"Sector {sector} is not a Jaynes-Cummings sector j = 0, 1, 2, ...")
    return int(j)


def _analytic_gap(numeric: np.ndarray, analytic: np.ndarray) -> float:
    if len(numeric) != len(analytic):
        return float("inf")
    return float(np.max(np.abs(np.sort(np.real(numeric)) - analytic))) if len(analytic) else 0.0


class SpectrumStrategy(RunStrategy):
    def run(self) -> int:
        """
        Eigenvalues of the selected sectors.

        - With --cutoffs the truncation is scanned and every level is flagged as
          converged or not between the last two truncations.
        - Otherwise the reduced block is diagonalized once: exactly for finite
          sectors, at --truncation for infinite ones.
        - --count k adds the roots of the energy polynomial P_k.
        - --analytic (Jaynes-Cummings only) adds the closed-form levels.
        """
        spec = self.fetch_spec()
        n = self.number_operator(spec)
        sectors = self.selected_sectors(n)
        analytic = self.config.analytic and _model_name(self) == "jc"
        if self.config.analytic and not analytic:
            logger.warning("--analytic only applies to the jc model; ignoring it")

        results: list[SpectrumResult] = []
        extras: list[dict] = []
        exit_code = EXIT_OK
        for sector in sectors:
            if self.config.cutoffs:
                tol = self.config.tolerance_for(CONVERGENCE_TOL)
                result = convergence_scan(
                    spec, n, sector, self.config.cutoffs, self.config.levels, tol=tol, progress=self.config.progress
                )
                if not np.all(result.converged):
                    logger.error(f"Sector {sector}: levels not converged below {tol}")
                    exit_code = EXIT_FAILED
                reduced = None
            else:
                reduced = reduce_sector(spec, n, sector, truncation=self.config.truncation)
                result = diagonalize(reduced)
                if reduced.truncated:
                    result.eigenvalues = result.eigenvalues[: self.config.levels]
            results.append(result)

            extra = {"sector": str(sector)}
            if self.config.count is not None:
                reduced = reduced or reduce_sector(spec, n, sector, truncation=self.config.truncation)
                sequence = energy_polynomials(reduced, min(self.config.count, reduced.dimension))
                extra["polynomial"] = sequence.metadata()
                extra["roots"] = [float(np.real(r)) for r in qes_roots(sequence)]
            if analytic:
                levels = jc_sector_levels(self.config.source.params, _jc_index(n, sector))
                gap = _analytic_gap(result.eigenvalues, levels)
                extra["analytic"] = [float(v) for v in levels]
                extra["max_analytic_gap"] = gap
                tol = self.config.tolerance_for(ANALYTIC_TOL)
                if not gap < tol:
                    logger.error(f"Sector {sector}: closed-form levels differ by {gap:.3g}")
                    exit_code = EXIT_FAILED
            extras.append(extra)

        data = {
            "number_operator": n.to_dict(),
            "sectors": [dict(result.to_dict(), **extra) for result, extra in zip(results, extras)],
        }
        self.config.emit(self.render(data, lambda: self._table(results, extras), lambda: spectrum_csv(results)))
        return exit_code

    def _table(self, results: list[SpectrumResult], extras: list[dict]) -> str:
        lines = []
        for result, extra in zip(results, extras):
            lines.append(f"sector {result.sector}" + (f" (truncation {result.truncation})" if result.truncation else ""))
            analytic = extra.get("analytic")
            for row in result.rows():
                cells = [f"{row['index']:4d}", f"{format_number(row['re']):>18s}"]
                if row["im"] != 0.0:
                    cells.append(f"{format_number(row['im']):>14s}i")
                if row["delta"] is not None:
                    cells.append(f"delta {format_number(row['delta']):>12s}")
                    cells.append("converged" if row["converged"] else "NOT converged")
                if analytic is not None and row["index"] < len(analytic):
                    cells.append(f"analytic {format_number(analytic[row['index']]):>18s}")
                lines.append("  " + "  ".join(cells))
            if "roots" in extra:
                roots = ", ".join(format_number(r) for r in extra["roots"])
                lines.append(f"  roots of P_{extra['polynomial']['count']}: {roots}")
            if analytic is not None:
                lines.append(f"  max |numeric - analytic| = {extra['max_analytic_gap']:.3g}")
        return "\n".join(lines)


class CompareStrategy(RunStrategy):
    def run(self) -> int:
        """
        Cross-validates each selected finite sector: full truncated matrix, reduced
        block and energy-polynomial roots must agree. The jc model is also checked
        against its closed-form levels and the jc-kerr model against its deformed
        su(2) form. Exit code 1 on any mismatch.
        """
        spec = self.fetch_spec()
        n = self.number_operator(spec)
        sectors = self.selected_sectors(n)
        tol = self.config.tolerance_for(CROSS_VALIDATION_TOL)
        operator = assemble_operator(spec, Basis(self.config.cutoff))
        model = _model_name(self)

        records = []
        passed = True
        for sector in sectors:
            check = cross_validate(spec, n, sector, self.config.cutoff, tol=tol, operator=operator)
            record = check.to_dict()
            ok = check.passed
            if model == "jc":
                levels = jc_sector_levels(self.config.source.params, _jc_index(n, sector))
                gap = _analytic_gap(sort_spectrum(check.reduced), levels)
                record["reduced_vs_analytic"] = gap
                ok = ok and gap < tol
            record["passed"] = ok
            passed = passed and ok
            records.append(record)

        data = {"number_operator": n.to_dict(), "cutoff": list(self.config.cutoff), "tol": tol, "sectors": records}
        if model == "jc-kerr":
            deformed = jc_kerr_deformed_form(self.config.source.params, self.config.cutoff)
            data["deformed_su2"] = dict(deformed.to_dict(), passed=deformed.residual < tol)
            passed = passed and deformed.residual < tol
        data["passed"] = passed

        def table() -> str:
            lines = [f"N = {n}, cutoff {self.config.cutoff}, tol {tol:.3g}"]
            for record in records:
                gaps = [f"full/reduced {record['full_vs_reduced']:.3g}", f"reduced/roots {record['reduced_vs_roots']:.3g}"]
                if "reduced_vs_analytic" in record:
                    gaps.append(f"reduced/analytic {record['reduced_vs_analytic']:.3g}")
                status = "ok" if record["passed"] else "MISMATCH"
                if not record["contained"]:
                    status += " (sector exceeds cutoff)"
                lines.append(f"  sector {record['sector']:>8s}  " + "  ".join(gaps) + f"  {status}")
            if "deformed_su2" in data:
                deformed = data["deformed_su2"]
                lines.append(
                    f"  deformed su(2) form: shift {deformed['constant_shift']:.3g}, residual {deformed['residual']:.3g}"
                )
            return "\n".join(lines)

        self.config.emit(self.render(data, table))
        if not passed:
            logger.error("Cross-validation found mismatches")
            return EXIT_FAILED
        return EXIT_OK
