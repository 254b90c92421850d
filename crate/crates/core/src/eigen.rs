//! Hermitian eigendecomposition.
//!
//! Householder reduction to real symmetric tridiagonal form followed by the
//! implicit-shift QL iteration, after the classic EISPACK/Jama routines
//! (HTRIDI/TQL2 lineage). Dimensions here stay small (a few hundred at most),
//! so a plain dense O(n^3) solver is plenty. The code is strictly
//! sequential: identical inputs give bit-identical spectra.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Relative tolerance used when deciding whether an input matrix still
/// counts as Hermitian (scaled by max(1, largest entry modulus)).
pub const HERMITICITY_REL_TOL: f64 = 1e-9;

/// Maximum QL iterations per eigenvalue before giving up.
const MAX_QL_ITERATIONS: usize = 50;

/// Full spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Real eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors; column k pairs with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

/// Eigendecomposition with eigenvectors; the input is symmetrized to
/// (A + A†)/2 before reduction.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let (values, vectors) = decompose(a, true)?;
    Ok(HermitianEigen {
        eigenvalues: values,
        eigenvectors: vectors.expect("eigenvectors requested"),
    })
}

/// Eigenvalues only (descending). Same reduction as [`hermitian_eigen`]
/// without accumulating the transform, which roughly halves the work.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let (values, _) = decompose(a, false)?;
    Ok(values)
}

fn validate(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let tolerance = HERMITICITY_REL_TOL * a.max_abs().max(1.0);
    let deviation = a.hermiticity_deviation();
    if deviation > tolerance {
        return Err(Error::NotHermitian {
            deviation,
            tolerance,
        });
    }
    Ok(())
}

fn decompose(a: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    validate(a)?;
    let n = a.rows();
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(|| ComplexMatrix::zeros(0, 0))));
    }

    // Symmetrized working copy, row-major.
    let mut m: Vec<C64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            m.push((a.get(i, j) + a.get(j, i).conj()) * 0.5);
        }
    }

    let mut q: Option<Vec<C64>> = if want_vectors {
        let mut id = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            id[i * n + i] = C64::new(1.0, 0.0);
        }
        Some(id)
    } else {
        None
    };

    householder_tridiagonalize(&mut m, q.as_deref_mut(), n);

    // Phase the subdiagonal real and non-negative: with delta[0] = 1 and
    // delta[i+1] = delta[i] * m[i+1][i]/|m[i+1][i]|, the similarity
    // D† M D has subdiagonal |m[i+1][i]|.
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut delta = vec![C64::new(1.0, 0.0); n];
    for i in 0..n - 1 {
        let t = m[(i + 1) * n + i];
        let r = t.norm();
        delta[i + 1] = if r > 0.0 {
            delta[i] * (t / r)
        } else {
            delta[i]
        };
        e[i] = r;
    }
    for i in 0..n {
        d[i] = m[i * n + i].re;
    }
    if let Some(q) = q.as_deref_mut() {
        for row in 0..n {
            for (j, dj) in delta.iter().enumerate() {
                q[row * n + j] *= dj;
            }
        }
    }

    ql_implicit(&mut d, &mut e, q.as_deref_mut(), n)?;

    // Sort descending; ties keep their QL output order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).expect("finite eigenvalues"));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = q.map(|q| ComplexMatrix::from_fn(n, n, |row, col| q[row * n + order[col]]));
    Ok((values, vectors))
}

/// Unitary reduction to Hermitian tridiagonal form. On return `m` is
/// tridiagonal (complex subdiagonal) and `q`, when present, holds the
/// accumulated transform so that q† · a · q = m.
#[allow(clippy::needless_range_loop)] // index symmetry mirrors the math
fn householder_tridiagonalize(m: &mut [C64], mut q: Option<&mut [C64]>, n: usize) {
    if n < 3 {
        return;
    }
    let zero = C64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];

    for k in 0..n - 2 {
        let mm = n - k - 1; // trailing block size
        let norm_sq: f64 = (k + 1..n).map(|i| m[i * n + k].norm_sqr()).sum();
        if norm_sq == 0.0 {
            continue;
        }
        let norm = norm_sq.sqrt();
        let x0 = m[(k + 1) * n + k];
        let phase = if x0 == zero {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;

        // Householder vector v = x - alpha*e1 (no cancellation in v[0]).
        for i in 0..mm {
            v[i] = m[(k + 1 + i) * n + k];
        }
        v[0] -= alpha;
        let v_norm_sq: f64 = v[..mm].iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sq == 0.0 {
            continue;
        }
        let tau = 2.0 / v_norm_sq;

        // Column k and row k collapse to the single subdiagonal entry alpha.
        m[(k + 1) * n + k] = alpha;
        m[k * n + (k + 1)] = alpha.conj();
        for i in k + 2..n {
            m[i * n + k] = zero;
            m[k * n + i] = zero;
        }

        // Rank-2 update of the trailing Hermitian block:
        //   p = tau * B v,  w = p - (tau/2) Re(v† p) v,  B -= v w† + w v†.
        for i in 0..mm {
            let mut acc = zero;
            let row = (k + 1 + i) * n + (k + 1);
            for j in 0..mm {
                acc += m[row + j] * v[j];
            }
            p[i] = acc * tau;
        }
        let vp_re: f64 = v[..mm]
            .iter()
            .zip(p[..mm].iter())
            .map(|(vi, pi)| (vi.conj() * pi).re)
            .sum();
        let mu = 0.5 * tau * vp_re;
        for i in 0..mm {
            p[i] -= mu * v[i];
        }
        for i in 0..mm {
            let vi = v[i];
            let wi = p[i];
            let row = (k + 1 + i) * n + (k + 1);
            for j in 0..mm {
                m[row + j] -= vi * p[j].conj() + wi * v[j].conj();
            }
        }

        // Q <- Q H: Q[:, k+1..] -= tau (Q[:, k+1..] v) v†.
        if let Some(q) = q.as_deref_mut() {
            for row in 0..n {
                let base = row * n + (k + 1);
                let mut acc = zero;
                for j in 0..mm {
                    acc += q[base + j] * v[j];
                }
                acc *= tau;
                for j in 0..mm {
                    q[base + j] -= acc * v[j].conj();
                }
            }
        }
    }
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix, rotations
/// accumulated into the complex columns of `q`. `e[i]` couples `d[i]` and
/// `d[i+1]`; `e[n-1]` must be zero on entry.
#[allow(clippy::needless_range_loop)]
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut q: Option<&mut [C64]>, n: usize) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    let eps = f64::EPSILON / 2.0; // 2^-53
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut iter = 0;
        loop {
            // Find the first negligible subdiagonal at or after l.
            let mut m_idx = l;
            while m_idx < n - 1 {
                if e[m_idx].abs() <= eps * tst1 {
                    break;
                }
                m_idx += 1;
            }
            if m_idx == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence { iterations: iter });
            }

            // Wilkinson-style implicit shift.
            let g = d[l];
            let p_shift = (d[l + 1] - g) / (2.0 * e[l]);
            let mut r = p_shift.hypot(1.0);
            if p_shift < 0.0 {
                r = -r;
            }
            d[l] = e[l] / (p_shift + r);
            d[l + 1] = e[l] * (p_shift + r);
            let dl1 = d[l + 1];
            let mut h = g - d[l];
            for i in l + 2..n {
                d[i] -= h;
            }
            f += h;

            // Implicit QL sweep from m_idx down to l.
            let mut p = d[m_idx];
            let mut c = 1.0;
            let mut c2 = c;
            let mut c3 = c;
            let el1 = e[l + 1];
            let mut s = 0.0;
            let mut s2 = 0.0;
            for i in (l..m_idx).rev() {
                c3 = c2;
                c2 = c;
                s2 = s;
                let g_i = c * e[i];
                h = c * p;
                r = p.hypot(e[i]);
                e[i + 1] = s * r;
                s = e[i] / r;
                c = p / r;
                p = c * d[i] - s * g_i;
                d[i + 1] = h + s * (c * g_i + s * d[i]);

                if let Some(q) = q.as_deref_mut() {
                    for row in 0..n {
                        let a = q[row * n + i];
                        let b = q[row * n + i + 1];
                        q[row * n + i + 1] = s * a + c * b;
                        q[row * n + i] = c * a - s * b;
                    }
                }
            }
            p = -s * s2 * c3 * el1 * e[l] / dl1;
            e[l] = s * p;
            d[l] = c * p;

            if e[l].abs() <= eps * tst1 {
                break;
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
