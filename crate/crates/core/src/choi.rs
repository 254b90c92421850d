//! Choi transform of a channel, its partial-trace invariant, minimal-Kraus
//! extraction and the Choi rank.
//!
//! Conventions, fixed once and asserted by the round-trip tests: vec(E) is
//! the column-stacking of E, so the entry E[a, i] lands at index
//! i*dim_out + a, pairing the input index i with the output index a in
//! lexicographic order. With Omega = sum_i x_i (x) x_i over the standard
//! basis, the Choi matrix of eps is (id (x) eps)(|Omega><Omega|) =
//! sum_k vec(E_k) vec(E_k)†, indexed by (input, output) pairs.

use crate::channel::KrausSet;
use crate::eigen::{hermitian_eigen, hermitian_eigenvalues, HERMITICITY_REL_TOL};
use crate::error::{Error, Result};
use crate::gram::{diagnostics_from_spectrum, RankDiagnostics};
use crate::matrix::{ComplexMatrix, C64};
use crate::tolerance::TolerancePolicy;

/// Hermitian positive-semidefinite matrix of order dim_in * dim_out
/// representing a CP map under the Choi-Jamiolkowski isomorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    dim_in: usize,
    dim_out: usize,
    matrix: ComplexMatrix,
}

/// A minimal Kraus set together with the rank decision that established
/// minimality.
#[derive(Clone, Debug)]
pub struct Minimized {
    pub kraus: KrausSet,
    /// The decision Gram: the operator Gram when the presented family was
    /// already independent, the Choi spectrum otherwise. Either way `rank`
    /// is the Choi rank of the map.
    pub rank_decision: RankDiagnostics,
}

impl ChoiMatrix {
    /// Wrap an externally supplied Choi matrix, validating the order and
    /// Hermitian symmetry.
    pub fn new(dim_in: usize, dim_out: usize, matrix: ComplexMatrix) -> Result<Self> {
        let order = dim_in * dim_out;
        if matrix.shape() != (order, order) {
            return Err(Error::ShapeMismatch {
                expected_rows: order,
                expected_cols: order,
                found_rows: matrix.rows(),
                found_cols: matrix.cols(),
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
        Ok(Self {
            dim_in,
            dim_out,
            matrix,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn order(&self) -> usize {
        self.dim_in * self.dim_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Partial trace over the output factor: a dim_in x dim_in matrix that
    /// equals the identity exactly when the source channel is trace
    /// preserving.
    pub fn partial_trace_out(&self) -> ComplexMatrix {
        let d_out = self.dim_out;
        ComplexMatrix::from_fn(self.dim_in, self.dim_in, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..d_out {
                acc += self.matrix.get(i * d_out + a, j * d_out + a);
            }
            acc
        })
    }

    /// Descending Choi spectrum.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Numerical rank of the Choi matrix, i.e. the Choi rank of the map.
    pub fn rank(&self, tol: &TolerancePolicy) -> Result<usize> {
        Ok(self.rank_diagnostics(tol)?.rank)
    }

    pub fn rank_diagnostics(&self, tol: &TolerancePolicy) -> Result<RankDiagnostics> {
        let values = self.eigenvalues()?;
        Ok(diagnostics_from_spectrum(&values, tol))
    }

    /// Extract a linearly independent Kraus family from the spectral
    /// decomposition: one operator sqrt(lambda) * unvec(v) per eigenpair
    /// above the rank cutoff. Fails if the spectrum dips below the
    /// positivity tolerance.
    ///
    /// A zero Choi matrix (the zero map) yields a single zero operator,
    /// the only representation a non-empty Kraus set admits.
    pub fn minimal_kraus(&self, tol: &TolerancePolicy) -> Result<KrausSet> {
        let eig = hermitian_eigen(&self.matrix)?;
        let lambda_max = eig.eigenvalues.first().copied().unwrap_or(0.0);
        let cutoff = tol.rank_cutoff(lambda_max);
        if let Some(&min) = eig.eigenvalues.last() {
            if min < -cutoff {
                return Err(Error::NotPositive {
                    min_eigenvalue: min,
                    tolerance: cutoff,
                });
            }
        }
        let order = self.order();
        let mut ops = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= cutoff {
                break; // descending spectrum
            }
            let scale = lambda.sqrt();
            let column: Vec<C64> = (0..order)
                .map(|i| eig.eigenvectors.get(i, k) * scale)
                .collect();
            ops.push(ComplexMatrix::from_column_stacked(
                self.dim_out,
                self.dim_in,
                &column,
            )?);
        }
        if ops.is_empty() {
            ops.push(ComplexMatrix::zeros(self.dim_out, self.dim_in));
        }
        KrausSet::new(ops)
    }
}

/// Choi matrix of a Kraus set: sum_k vec(E_k) vec(E_k)†.
pub fn choi_of(k: &KrausSet) -> ChoiMatrix {
    let order = k.dim_in() * k.dim_out();
    let mut data = vec![C64::new(0.0, 0.0); order * order];
    for e in k.ops() {
        let v = e.column_stacked();
        for (i, vi) in v.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                data[i * order + j] += vi * vj.conj();
            }
        }
    }
    ChoiMatrix {
        dim_in: k.dim_in(),
        dim_out: k.dim_out(),
        matrix: ComplexMatrix::new(order, order, data).expect("finite by construction"),
    }
}

/// Choi rank: the minimum number of Kraus operators representing the map.
pub fn choi_rank(k: &KrausSet, tol: &TolerancePolicy) -> Result<usize> {
    choi_of(k).rank(tol)
}

/// Minimal (linearly independent) Kraus set for the same map. An already
/// independent set is returned as given, preserving the caller's operator
/// basis; otherwise the operators are rebuilt from the Choi eigenvectors.
pub fn minimize(k: &KrausSet, tol: &TolerancePolicy) -> Result<KrausSet> {
    Ok(minimize_detailed(k, tol)?.kraus)
}

/// [`minimize`] plus the diagnostics behind the rank decision.
///
/// Independence of the presented family is decided on its r x r operator
/// Gram, which is much smaller than the Choi matrix; the Choi spectrum is
/// only computed when the family is actually redundant.
pub fn minimize_detailed(k: &KrausSet, tol: &TolerancePolicy) -> Result<Minimized> {
    let ops_gram = crate::gram::gram(k.ops())?;
    let ops_diag = ops_gram.rank_diagnostics(tol)?;
    if ops_diag.rank == k.len() {
        // Independent family of size r: the map's Choi rank is exactly r.
        return Ok(Minimized {
            kraus: k.clone(),
            rank_decision: ops_diag,
        });
    }
    let choi = choi_of(k);
    let rank_decision = choi.rank_diagnostics(tol)?;
    let kraus = choi.minimal_kraus(tol)?;
    Ok(Minimized {
        kraus,
        rank_decision,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{haar_unitary, mix, random_channel, unitary_channel};
    use crate::gram::linear_independence;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn identity_channel(d: usize) -> KrausSet {
        KrausSet::new(vec![ComplexMatrix::identity(d)]).unwrap()
    }

    #[test]
    fn choi_of_identity_is_omega_projector() {
        let d = 2;
        let c = choi_of(&identity_channel(d));
        // |Omega><Omega| with Omega[(i,a)] = delta_{ia}.
        let expected = ComplexMatrix::from_fn(4, 4, |r, c_| {
            let (i, a) = (r / d, r % d);
            let (j, b) = (c_ / d, c_ % d);
            if i == a && j == b {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        assert_eq!(c.matrix(), &expected);
        assert!((c.matrix().trace().re - d as f64).abs() < 1e-15);
        assert_eq!(c.rank(&tol()).unwrap(), 1);
    }

    #[test]
    fn partial_trace_is_identity_for_tp_channels() {
        let c = choi_of(&identity_channel(3));
        assert!(c.partial_trace_out().identity_residual() < 1e-15);

        let k = random_channel(3, 2, 4, 5).unwrap();
        let pt = choi_of(&k).partial_trace_out();
        assert!(pt.identity_residual() < 1e-12);
    }

    #[test]
    fn partial_trace_of_scaled_identity_channel() {
        let half =
            KrausSet::new(vec![ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0))]).unwrap();
        let pt = choi_of(&half).partial_trace_out();
        let expected = ComplexMatrix::identity(2).scale(C64::new(0.25, 0.0));
        assert!(pt.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn depolarizing_choi_is_scaled_identity() {
        let mut ops = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                ops.push(ComplexMatrix::from_fn(2, 2, |r, c| {
                    if (r, c) == (i, j) {
                        C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                }));
            }
        }
        let k = KrausSet::new(ops).unwrap();
        let c = choi_of(&k);
        let expected = ComplexMatrix::identity(4).scale(C64::new(0.5, 0.0));
        assert!(c.matrix().max_abs_diff(&expected) < 1e-15);
        assert_eq!(c.rank(&tol()).unwrap(), 4);
    }

    #[test]
    fn minimal_kraus_of_identity_choi_is_identity_up_to_phase() {
        let c = choi_of(&identity_channel(2));
        let m = c.minimal_kraus(&tol()).unwrap();
        assert_eq!(m.len(), 1);
        let e = m.op(0);
        // e = phase * I: divide out the (0,0) entry.
        let phase = e.get(0, 0);
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        let normalized = e.scale(C64::new(1.0, 0.0) / phase);
        assert!(normalized.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn redundant_mixture_minimizes_to_single_unitary() {
        let u = unitary_channel(&haar_unitary(3, 17)).unwrap();
        let m = mix(&[u.clone(), u.clone()], &[0.5, 0.5]).unwrap();
        assert_eq!(m.len(), 2);
        let minimal = minimize(&m, &tol()).unwrap();
        assert_eq!(minimal.len(), 1);
        // Same map: Choi matrices agree.
        let diff = choi_of(&minimal)
            .matrix()
            .max_abs_diff(choi_of(&u).matrix());
        assert!(diff < 1e-10);
    }

    #[test]
    fn minimal_kraus_round_trips_and_is_independent() {
        for (din, dout, rank, seed) in [(2, 2, 3, 1u64), (3, 3, 4, 2), (3, 2, 2, 3), (2, 3, 5, 4)] {
            let k = random_channel(din, dout, rank, seed).unwrap();
            let c = choi_of(&k);
            let m = c.minimal_kraus(&tol()).unwrap();
            assert_eq!(m.len(), rank, "generic seeds give Choi rank = Kraus rank");
            assert!(linear_independence(m.ops(), &tol()).unwrap());
            let back = choi_of(&m);
            assert!(back.matrix().max_abs_diff(c.matrix()) < 1e-8);
        }
    }

    #[test]
    fn minimize_keeps_already_minimal_sets_as_given() {
        let k = random_channel(3, 3, 2, 33).unwrap();
        let m = minimize(&k, &tol()).unwrap();
        assert_eq!(&m, &k);
    }

    #[test]
    fn choi_rank_examples() {
        let u = unitary_channel(&haar_unitary(4, 8)).unwrap();
        assert_eq!(choi_rank(&u, &tol()).unwrap(), 1);
        for (rank, seed) in [(2usize, 10u64), (3, 11), (6, 12)] {
            let k = random_channel(3, 3, rank, seed).unwrap();
            assert_eq!(choi_rank(&k, &tol()).unwrap(), rank);
        }
    }

    #[test]
    fn choi_rank_is_multiplicative_under_tensor() {
        let a = random_channel(2, 2, 2, 20).unwrap();
        let b = random_channel(3, 3, 3, 21).unwrap();
        let t = a.tensor(&b);
        assert_eq!(choi_rank(&t, &tol()).unwrap(), 6);
    }

    #[test]
    fn choi_is_linear_in_mixtures() {
        let k1 = random_channel(2, 2, 2, 40).unwrap();
        let k2 = random_channel(2, 2, 3, 41).unwrap();
        let weights = [0.25, 0.75];
        let m = mix(&[k1.clone(), k2.clone()], &weights).unwrap();
        let lhs = choi_of(&m);
        let rhs = &choi_of(&k1).matrix().scale(C64::new(0.25, 0.0))
            + &choi_of(&k2).matrix().scale(C64::new(0.75, 0.0));
        assert!(lhs.matrix().max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn trace_of_choi_equals_dim_in_for_tp() {
        let k = random_channel(4, 2, 3, 50).unwrap();
        let c = choi_of(&k);
        assert!((c.matrix().trace().re - 4.0).abs() < 1e-12);
        assert!(c.matrix().trace().im.abs() < 1e-14);
    }

    #[test]
    fn new_validates_order_and_hermiticity() {
        assert!(ChoiMatrix::new(2, 2, ComplexMatrix::zeros(3, 3)).is_err());
        let bad = ComplexMatrix::real(4, 4, &{
            let mut v = [0.0; 16];
            v[1] = 1.0; // asymmetric
            v
        })
        .unwrap();
        assert!(matches!(
            ChoiMatrix::new(2, 2, bad),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn minimal_kraus_rejects_negative_choi() {
        let m = ComplexMatrix::real(4, 4, &{
            let mut v = [0.0; 16];
            v[0] = 1.0;
            v[5] = -1.0;
            v[10] = 1.0;
            v[15] = 1.0;
            v
        })
        .unwrap();
        let c = ChoiMatrix::new(2, 2, m).unwrap();
        assert!(matches!(
            c.minimal_kraus(&tol()),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn zero_choi_yields_single_zero_operator() {
        let c = ChoiMatrix::new(2, 2, ComplexMatrix::zeros(4, 4)).unwrap();
        let m = c.minimal_kraus(&tol()).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.op(0), &ComplexMatrix::zeros(2, 2));
    }
}
