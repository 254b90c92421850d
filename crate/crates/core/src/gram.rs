//! Gram matrices of operator families and the spectral rank test that
//! stands in for exact linear-independence decisions.

use crate::eigen::{hermitian_eigenvalues, HERMITICITY_REL_TOL};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::TolerancePolicy;

/// Hermitian positive-semidefinite matrix of pairwise Hilbert-Schmidt inner
/// products of an operator family.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    matrix: ComplexMatrix,
}

/// Outcome of a spectral rank decision, with enough diagnostics to judge
/// how close the verdict came to the cutoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankDiagnostics {
    pub order: usize,
    pub rank: usize,
    pub cutoff: f64,
    /// Smallest eigenvalue counted toward the rank (None when rank = 0).
    pub smallest_kept: Option<f64>,
    /// Largest eigenvalue below the cutoff (None when full rank).
    pub largest_dropped: Option<f64>,
    /// True when the decisive eigenvalue sits within a factor of 1e3 of the
    /// cutoff, i.e. the verdict should not be trusted blindly.
    pub ill_conditioned: bool,
}

impl GramMatrix {
    /// Wrap an externally assembled Gram matrix, enforcing squareness and
    /// Hermitian symmetry within tolerance.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let tolerance = HERMITICITY_REL_TOL * matrix.max_abs().max(1.0);
        let deviation = matrix.hermiticity_deviation();
        if deviation > tolerance {
            return Err(Error::NotHermitian {
                deviation,
                tolerance,
            });
        }
        Ok(Self { matrix })
    }

    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Full real spectrum, descending. The matrix is symmetrized internally
    /// before the eigensolve.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Count of eigenvalues above `tol.rank_cutoff(lambda_max)`.
    pub fn numerical_rank(&self, tol: &TolerancePolicy) -> Result<usize> {
        Ok(self.rank_diagnostics(tol)?.rank)
    }

    pub fn rank_diagnostics(&self, tol: &TolerancePolicy) -> Result<RankDiagnostics> {
        let values = self.eigenvalues()?;
        Ok(diagnostics_from_spectrum(&values, tol))
    }
}

/// Rank decision on a precomputed descending spectrum.
pub fn diagnostics_from_spectrum(values: &[f64], tol: &TolerancePolicy) -> RankDiagnostics {
    let order = values.len();
    let lambda_max = values.first().copied().unwrap_or(0.0);
    let cutoff = tol.rank_cutoff(lambda_max);
    let rank = values.iter().take_while(|&&v| v > cutoff).count();
    let smallest_kept = (rank > 0).then(|| values[rank - 1]);
    let largest_dropped = (rank < order).then(|| values[rank]);
    // The decisive eigenvalue is the one nearest the cutoff on the side that
    // produced the verdict.
    let ill_conditioned = match (smallest_kept, largest_dropped) {
        (Some(kept), _) if kept <= cutoff * 1e3 => true,
        (_, Some(dropped)) if dropped >= cutoff * 1e-3 => true,
        _ => false,
    };
    RankDiagnostics {
        order,
        rank,
        cutoff,
        smallest_kept,
        largest_dropped,
        ill_conditioned,
    }
}

/// Gram matrix G_ij = <family[i], family[j]> of a non-empty same-shape
/// operator family.
pub fn gram(family: &[ComplexMatrix]) -> Result<GramMatrix> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let shape = family[0].shape();
    for member in family {
        if member.shape() != shape {
            return Err(Error::ShapeMismatch {
                expected_rows: shape.0,
                expected_cols: shape.1,
                found_rows: member.rows(),
                found_cols: member.cols(),
            });
        }
    }
    let n = family.len();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(family[i].hs_inner(&family[j])?);
        }
    }
    let matrix = ComplexMatrix::new(n, n, entries)?;
    GramMatrix::new(matrix)
}

/// A family is linearly independent iff its Gram matrix has full numerical
/// rank.
pub fn linear_independence(family: &[ComplexMatrix], tol: &TolerancePolicy) -> Result<bool> {
    let g = gram(family)?;
    Ok(g.numerical_rank(tol)? == family.len())
}
