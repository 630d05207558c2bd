"""
Tests for sector diagonalization, convergence scans and three-way cross-validation.
"""

import csv
import io
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg

from fock.core import Basis, assemble_operator
from models.jahn_teller import JahnTellerParams, jahn_teller
from models.jaynes_cummings import ModifiedJCParams, modified_jc
from models.jc_kerr import JCKerrParams, jc_kerr
from processing.bargmann import reduce_sector
from processing.spectra import (
    CSV_COLUMNS,
    NonFiniteBlockError,
    convergence_scan,
    cross_validate,
    diagonalize,
    sector_ordinals,
    sector_spectrum_full,
    sort_spectrum,
    spectrum_csv,
)
from processing.symmetry import NumberOperatorSpec, SectorLabel, sector_decompose, sector_for_j

JC_N = NumberOperatorSpec(1, 1, "1/2")
JT_N = NumberOperatorSpec(1, -1, "1/2")
KERR_N = NumberOperatorSpec(1, 0, "1/2")


@pytest.mark.unit
class TestDiagonalize:
    """Dense eigenvalue solving"""

    def test_diagonal_block(self):
        """Diagonal blocks are read off and sorted"""
        result = diagonalize(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_array_equal(result.eigenvalues, [1.0, 2.0, 3.0])
        assert result.symmetric

    def test_symmetric_block(self):
        """Symmetric blocks give real sorted eigenvalues and orthonormal vectors"""
        block = np.array([[2.0, 1.0], [1.0, 2.0]])
        result = diagonalize(block, vectors=True)
        np.testing.assert_allclose(result.eigenvalues, [1.0, 3.0])
        for i, value in enumerate(result.eigenvalues):
            np.testing.assert_allclose(block @ result.eigenvectors[:, i], value * result.eigenvectors[:, i], atol=1e-12)

    def test_general_block(self):
        """Non-symmetric blocks go through the general solver"""
        result = diagonalize(np.array([[1.0, 2.0], [0.0, 3.0]]))
        assert not result.symmetric
        np.testing.assert_allclose(np.real(result.eigenvalues), [1.0, 3.0])

    def test_complex_eigenvalues_sorted(self):
        """Complex pairs sort by real then imaginary part"""
        result = diagonalize(np.array([[0.0, -1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(np.imag(result.eigenvalues), [-1.0, 1.0])

    def test_invalid_blocks(self):
        """Non-finite and non-square blocks are rejected"""
        with pytest.raises(NonFiniteBlockError):
            diagonalize(np.array([[np.nan, 0.0], [0.0, 1.0]]))
        with pytest.raises(ValueError):
            diagonalize(np.ones((2, 3)))

    def test_sort_spectrum(self):
        """Sorting is by real part first"""
        values = sort_spectrum([2.0, 1.0 + 1.0j, 1.0 - 1.0j])
        np.testing.assert_array_equal(values, [1.0 - 1.0j, 1.0 + 1.0j, 2.0])

    def test_csv_rows(self):
        """CSV output has the documented header and one row per level"""
        result = diagonalize(np.diag([1.0, 2.0]), sector=SectorLabel.parse("1/2"))
        rows = list(csv.reader(io.StringIO(spectrum_csv([result]))))
        assert rows[0] == CSV_COLUMNS
        assert rows[1] == ["1/2", "0", "1", "0", "", ""]
        assert len(rows) == 3


@pytest.mark.integration
class TestSectorSpectra:
    """Reduced blocks against the full truncated matrix"""

    def setup_method(self):
        """JC model and a basis holding sectors j = 0..4 completely"""
        self.spec = modified_jc(ModifiedJCParams(1.0, 0.8, 0.3, 0.5))
        self.cutoff = (6, 6)
        self.operator = assemble_operator(self.spec, Basis(self.cutoff))

    def test_reduced_equals_full_block(self):
        """Each contained sector has the same spectrum in both routes"""
        for j in range(5):
            sector = sector_for_j(JC_N, j)
            full = sector_spectrum_full(self.spec, JC_N, sector, self.cutoff, self.operator)
            reduced = diagonalize(reduce_sector(self.spec, JC_N, sector))
            np.testing.assert_allclose(full.eigenvalues, reduced.eigenvalues, atol=1e-9)

    def test_union_of_sectors_is_full_spectrum(self):
        """Sector spectra together give the whole block-diagonal truncated spectrum"""
        basis = Basis((3, 3))
        operator = assemble_operator(self.spec, basis)
        values = []
        for label in sector_decompose(basis, JC_N):
            values.extend(sector_spectrum_full(self.spec, JC_N, label, basis.cutoff, operator).eigenvalues)
        np.testing.assert_allclose(
            np.sort(values), np.sort(scipy.linalg.eigvalsh(operator.toarray())), atol=1e-9
        )

    def test_cross_validation_passes(self):
        """Full block, reduced block and polynomial roots agree for JC sectors"""
        for j in range(4):
            check = cross_validate(self.spec, JC_N, sector_for_j(JC_N, j), self.cutoff, operator=self.operator)
            assert check.contained
            assert check.passed, check.to_dict()

    def test_cross_validation_flags_escaping_sector(self):
        """A sector larger than the cutoff box is flagged and fails"""
        check = cross_validate(self.spec, JC_N, sector_for_j(JC_N, 4), (2, 2))
        assert not check.contained
        assert not check.passed

    def test_kerr_sectors_ignore_spectator_mode(self):
        """Kerr sectors compare against the full matrix with mode 2 in its vacuum"""
        spec = jc_kerr(JCKerrParams(1.0, 0.8, 0.2, 0.1))
        basis = Basis((8, 3))
        assert len(sector_ordinals(basis, KERR_N, SectorLabel.parse("5/2"), spec)) == 2
        assert len(sector_ordinals(basis, KERR_N, SectorLabel.parse("5/2"))) == 8
        for m in range(5):
            check = cross_validate(spec, KERR_N, SectorLabel(Fraction(2 * m + 1, 2)), (8, 3))
            assert check.passed, check.to_dict()

    def test_infinite_sector_rejected(self):
        """Cross-validation needs a finite sector"""
        spec = jahn_teller(JahnTellerParams(0.1, 0.2))
        with pytest.raises(ValueError):
            cross_validate(spec, JT_N, sector_for_j(JT_N, 0), (6, 6))


@pytest.mark.integration
class TestConvergenceScan:
    """Truncation scans for infinite sectors"""

    def setup_method(self):
        """Jahn-Teller model at weak coupling"""
        self.spec = jahn_teller(JahnTellerParams(0.1, 0.2))

    def test_lowest_levels_converge(self):
        """Lowest five levels of sector j = 0 change by less than 1e-8 from 60 to 80 states"""
        result = convergence_scan(self.spec, JT_N, sector_for_j(JT_N, 0), [60, 80], k=5)
        assert len(result) == 5
        assert np.all(result.converged)
        assert np.all(result.deltas < 1e-8)
        assert sorted(result.history) == [60, 80]
        assert result.truncation == 80

    def test_coarse_scan_not_converged(self):
        """Very short truncations leave the upper tracked levels unconverged"""
        result = convergence_scan(self.spec, JT_N, sector_for_j(JT_N, 0), [4, 6], k=4, tol=1e-12)
        assert not np.all(result.converged)

    def test_scan_requires_increasing_truncations(self):
        """A scan needs at least two increasing truncations"""
        with pytest.raises(ValueError):
            convergence_scan(self.spec, JT_N, sector_for_j(JT_N, 0), [40], k=3)
        with pytest.raises(ValueError):
            convergence_scan(self.spec, JT_N, sector_for_j(JT_N, 0), [60, 40], k=3)
