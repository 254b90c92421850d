//! Kraus-operator representation of completely positive maps and the
//! structural operations on them: application, classification, duality,
//! tensor products, convex mixtures and seeded random generation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::tolerance::TolerancePolicy;

/// A completely positive map presented by operation elements (Kraus
/// operators): eps(A) = sum_k E_k A E_k\u{2020}. Every operator maps the input
/// space (dimension `dim_in`) to the output space (dimension `dim_out`),
/// i.e. has shape dim_out x dim_in. The set is never minimized implicitly;
/// see the `choi` module for that.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    dim_in: usize,
    dim_out: usize,
    ops: Vec<ComplexMatrix>,
}

/// Boolean verdict together with the max-norm residual it was derived from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualCheck {
    pub passed: bool,
    pub residual: f64,
}

/// The most specific class a channel belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelClass {
    Cp,
    Cpt,
    Ucp,
    Ucpt,
}

impl ChannelClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelClass::Cp => "CP",
            ChannelClass::Cpt => "CPT",
            ChannelClass::Ucp => "UCP",
            ChannelClass::Ucpt => "UCPT",
        }
    }
}

/// Classification flags. Complete positivity holds for every Kraus set by
/// construction; UCPT additionally requires equal input and output
/// dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Classification {
    pub trace_preserving: ResidualCheck,
    pub unital: ResidualCheck,
    pub ucpt: bool,
}

impl Classification {
    pub fn is_cpt(&self) -> bool {
        self.trace_preserving.passed
    }

    pub fn is_ucp(&self) -> bool {
        self.unital.passed
    }

    pub fn is_ucpt(&self) -> bool {
        self.ucpt
    }

    pub fn label(&self) -> ChannelClass {
        if self.ucpt {
            ChannelClass::Ucpt
        } else if self.trace_preserving.passed {
            ChannelClass::Cpt
        } else if self.unital.passed {
            ChannelClass::Ucp
        } else {
            ChannelClass::Cp
        }
    }
}

impl KrausSet {
    /// Build a Kraus set from a non-empty family of equally shaped
    /// operators.
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops.first().ok_or(Error::EmptyKraus)?;
        let (dim_out, dim_in) = first.shape();
        for op in &ops {
            if op.shape() != (dim_out, dim_in) {
                return Err(Error::ShapeMismatch {
                    expected_rows: dim_out,
                    expected_cols: dim_in,
                    found_rows: op.rows(),
                    found_cols: op.cols(),
                });
            }
        }
        Ok(Self {
            dim_in,
            dim_out,
            ops,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one operator
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn op(&self, k: usize) -> &ComplexMatrix {
        &self.ops[k]
    }

    /// Apply the channel: sum_k E_k A E_k\u{2020} for a dim_in x dim_in input.
    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.shape() != (self.dim_in, self.dim_in) {
            return Err(Error::ShapeMismatch {
                expected_rows: self.dim_in,
                expected_cols: self.dim_in,
                found_rows: a.rows(),
                found_cols: a.cols(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for e in &self.ops {
            let term = &(e * a) * &e.adjoint();
            out = &out + &term;
        }
        Ok(out)
    }

    /// sum_k E_k\u{2020} E_k, the observable that decides trace preservation.
    pub fn completeness_sum(&self) -> ComplexMatrix {
        let mut sum = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for e in &self.ops {
            sum = &sum + &(&e.adjoint() * e);
        }
        sum
    }

    /// sum_k E_k E_k\u{2020}, the image of the identity.
    pub fn unitality_sum(&self) -> ComplexMatrix {
        let mut sum = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for e in &self.ops {
            sum = &sum + &(e * &e.adjoint());
        }
        sum
    }

    /// Trace preservation: sum_k E_k\u{2020} E_k = I on the input space.
    pub fn is_trace_preserving(&self, tol: &TolerancePolicy) -> ResidualCheck {
        let residual = self.completeness_sum().identity_residual();
        ResidualCheck {
            passed: residual <= tol.abs_check_tol(),
            residual,
        }
    }

    /// Unitality: sum_k E_k E_k\u{2020} = I on the output space.
    pub fn is_unital(&self, tol: &TolerancePolicy) -> ResidualCheck {
        let residual = self.unitality_sum().identity_residual();
        ResidualCheck {
            passed: residual <= tol.abs_check_tol(),
            residual,
        }
    }

    pub fn classify(&self, tol: &TolerancePolicy) -> Classification {
        let trace_preserving = self.is_trace_preserving(tol);
        let unital = self.is_unital(tol);
        let ucpt = trace_preserving.passed && unital.passed && self.dim_in == self.dim_out;
        Classification {
            trace_preserving,
            unital,
            ucpt,
        }
    }

    /// Dual (adjoint) map with respect to the Hilbert-Schmidt inner product:
    /// operation elements (E_k\u{2020})_k, dimensions swapped. An exact
    /// involution: `dual(dual(k)) == k` entrywise.
    pub fn dual(&self) -> KrausSet {
        KrausSet {
            dim_in: self.dim_out,
            dim_out: self.dim_in,
            ops: self.ops.iter().map(ComplexMatrix::adjoint).collect(),
        }
    }

    /// Tensor product channel with operation elements (E_k \u{2297} F_l)_{k,l}
    /// in lexicographic order.
    pub fn tensor(&self, other: &KrausSet) -> KrausSet {
        let mut ops = Vec::with_capacity(self.ops.len() * other.ops.len());
        for e in &self.ops {
            for f in &other.ops {
                ops.push(e.kronecker(f));
            }
        }
        KrausSet {
            dim_in: self.dim_in * other.dim_in,
            dim_out: self.dim_out * other.dim_out,
            ops,
        }
    }
}

/// Convex mixture sum_i p_i eps_i, realized by concatenating the factor
/// Kraus sets scaled by sqrt(p_i).
pub fn mix(channels: &[KrausSet], weights: &[f64]) -> Result<KrausSet> {
    if channels.is_empty() {
        return Err(Error::EmptyKraus);
    }
    if channels.len() != weights.len() {
        return Err(Error::WeightCount {
            channels: channels.len(),
            weights: weights.len(),
        });
    }
    let (dim_in, dim_out) = (channels[0].dim_in, channels[0].dim_out);
    for k in channels {
        if (k.dim_in, k.dim_out) != (dim_in, dim_out) {
            return Err(Error::ShapeMismatch {
                expected_rows: dim_out,
                expected_cols: dim_in,
                found_rows: k.dim_out,
                found_cols: k.dim_in,
            });
        }
    }
    for (index, &weight) in weights.iter().enumerate() {
        if weight < 0.0 || !weight.is_finite() {
            return Err(Error::NegativeWeight { index, weight });
        }
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::WeightSum { sum });
    }
    let mut ops = Vec::new();
    for (channel, &weight) in channels.iter().zip(weights.iter()) {
        let scale = C64::new(weight.sqrt(), 0.0);
        for op in &channel.ops {
            ops.push(op.scale(scale));
        }
    }
    KrausSet::new(ops)
}

/// The unitary conjugation channel A -> U A U\u{2020}. Rejects operators that
/// are not unitary within the default check tolerance.
pub fn unitary_channel(u: &ComplexMatrix) -> Result<KrausSet> {
    if !u.is_square() {
        return Err(Error::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let residual = (&u.adjoint() * u).identity_residual();
    if residual > TolerancePolicy::DEFAULT_ABS_CHECK_TOL {
        return Err(Error::NotUnitary { residual });
    }
    KrausSet::new(vec![u.clone()])
}

/// Complex standard-normal matrix, deterministic in the seed.
fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    })
}

/// Orthonormalize the columns of `g` by modified Gram-Schmidt with one
/// reorthogonalization pass. Columns that collapse (probability zero for
/// Gaussian input) are replaced with fresh samples.
fn orthonormal_columns(g: ComplexMatrix, rng: &mut ChaCha12Rng) -> ComplexMatrix {
    let rows = g.rows();
    let cols = g.cols();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    let mut j = 0;
    let mut column: Vec<C64> = (0..rows).map(|i| g.get(i, j)).collect();
    loop {
        for _pass in 0..2 {
            for q in &basis {
                let overlap: C64 = q
                    .iter()
                    .zip(column.iter())
                    .map(|(qi, ci)| qi.conj() * ci)
                    .sum();
                for (ci, qi) in column.iter_mut().zip(q.iter()) {
                    *ci -= overlap * qi;
                }
            }
        }
        let norm = column.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-10 {
            let scale = std::f64::consts::FRAC_1_SQRT_2;
            column = (0..rows)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    C64::new(re * scale, im * scale)
                })
                .collect();
            continue;
        }
        for z in &mut column {
            *z /= norm;
        }
        basis.push(column);
        j += 1;
        if j == cols {
            break;
        }
        column = (0..rows).map(|i| g.get(i, j)).collect();
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| basis[j][i])
}

/// Seeded random trace-preserving channel of prescribed Kraus rank.
///
/// A Gaussian (rank * dim_out) x dim_in matrix is orthonormalized into an
/// isometry V and sliced row-wise into `rank` blocks of shape
/// dim_out x dim_in, so sum_k E_k\u{2020} E_k = V\u{2020} V = I holds by
/// construction. The Choi rank of the result equals `rank` for generic
/// seeds.
pub fn random_channel(dim_in: usize, dim_out: usize, rank: usize, seed: u64) -> Result<KrausSet> {
    if dim_in == 0 || dim_out == 0 {
        return Err(Error::EmptyKraus);
    }
    // An isometry (rank*dim_out) x dim_in needs at least dim_in rows; ranks
    // beyond dim_in*dim_out are impossible for any Kraus family.
    let min_rank = dim_in.div_ceil(dim_out);
    let max_rank = dim_in * dim_out;
    if rank < min_rank.max(1) || rank > max_rank {
        return Err(Error::KrausRankRange {
            rank,
            min: min_rank.max(1),
            max: max_rank,
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let gaussian = gaussian_matrix(rank * dim_out, dim_in, &mut rng);
    let isometry = orthonormal_columns(gaussian, &mut rng);
    let ops = (0..rank)
        .map(|k| ComplexMatrix::from_fn(dim_out, dim_in, |i, j| isometry.get(k * dim_out + i, j)))
        .collect();
    KrausSet::new(ops)
}

/// Seeded Haar-like random unitary (the single Kraus operator of a rank-1
/// random channel).
pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let channel = random_channel(dim, dim, 1, seed).expect("rank 1 is always admissible");
    channel.ops.into_iter().next().expect("one operator")
}
