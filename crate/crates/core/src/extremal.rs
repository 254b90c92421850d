//! Extremality tests for channels inside the convex sets of CPT, UCP and
//! UCPT maps.
//!
//! All three tests reduce to a linear-independence question about products
//! of a minimal Kraus family, decided through the numerical rank of a Gram
//! matrix:
//!
//! * CPT:  the family (E_k† E_l)_{k,l} must be linearly independent;
//! * UCP:  the family (E_k E_l†)_{k,l} must be linearly independent;
//! * UCPT: the direct sums (E_k† E_l (+) E_l E_k†)_{k,l} must be linearly
//!   independent as vectors of End(X) (+) End(X), stored here as stacked
//!   2d^2-component columns.
//!
//! For UCPT there is also a rank obstruction that decides many cases
//! without building the Gram matrix: an extreme map must satisfy
//! CR(eps)^2 <= 2 d^2, so a Choi rank above sqrt(2)*d rules extremality
//! out. Tensor products of high-rank extreme maps land above that bound
//! because Choi ranks multiply.

use crate::channel::{Classification, KrausSet};
use crate::choi::{minimize_detailed, Minimized};
use crate::error::{Error, Result};
use crate::gram::{gram, linear_independence, GramMatrix, RankDiagnostics};
use crate::matrix::ComplexMatrix;
use crate::tolerance::TolerancePolicy;

/// Tri-state extremality verdict. Class preconditions that fail (e.g. a
/// non-unital channel probed for UCP extremality) yield `NotApplicable`
/// rather than an error, so reports can always be assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Extreme,
    NotExtreme,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Extreme => "true",
            Verdict::NotExtreme => "false",
            Verdict::NotApplicable => "not-applicable",
        }
    }

    pub fn from_bool(extreme: bool) -> Self {
        if extreme {
            Verdict::Extreme
        } else {
            Verdict::NotExtreme
        }
    }
}

/// How an extremality verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionPath {
    /// Excluded by the Choi-rank upper bound, no Gram matrix built.
    RankBound,
    /// Decided by the numerical rank of the criterion Gram matrix.
    GramTest,
}

impl DecisionPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecisionPath::RankBound => "rank-bound",
            DecisionPath::GramTest => "gram-test",
        }
    }
}

/// Verdict plus the numerics that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalityOutcome {
    pub verdict: Verdict,
    pub decided_by: Option<DecisionPath>,
    pub diagnostics: Option<RankDiagnostics>,
}

impl ExtremalityOutcome {
    fn not_applicable() -> Self {
        Self {
            verdict: Verdict::NotApplicable,
            decided_by: None,
            diagnostics: None,
        }
    }

    fn from_gram(diag: RankDiagnostics) -> Self {
        Self {
            verdict: Verdict::from_bool(diag.rank == diag.order),
            decided_by: Some(DecisionPath::GramTest),
            diagnostics: Some(diag),
        }
    }

    pub fn is_extreme(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Extreme => Some(true),
            Verdict::NotExtreme => Some(false),
            Verdict::NotApplicable => None,
        }
    }

    pub fn ill_conditioned(&self) -> bool {
        self.diagnostics.is_some_and(|d| d.ill_conditioned)
    }
}

/// Consolidated verdicts and diagnostics for one channel.
#[derive(Clone, Debug)]
pub struct ExtremalityReport {
    pub dim_in: usize,
    pub dim_out: usize,
    /// Number of operators the channel was presented with.
    pub kraus_given: usize,
    pub classification: Classification,
    pub choi_rank: usize,
    pub extreme_cpt: ExtremalityOutcome,
    pub extreme_ucp: ExtremalityOutcome,
    pub extreme_ucpt: ExtremalityOutcome,
    /// Headline Gram data: the most specific criterion Gram that was built
    /// (UCPT, then CPT, then UCP); falls back to the rank decision that
    /// established the minimal Kraus family when no criterion Gram ran.
    pub gram_order: usize,
    pub gram_rank: usize,
    pub smallest_kept_eigenvalue: Option<f64>,
    pub largest_dropped_eigenvalue: Option<f64>,
    /// sqrt(2 d^2 - 1) for square channels.
    pub ucpt_rank_bound: Option<f64>,
    pub bound_violated: bool,
    /// True when any decisive Gram eigenvalue sat within a factor of 1e3 of
    /// its cutoff.
    pub ill_conditioned: bool,
}

/// The r^2 products E_k† E_l in lexicographic (k, l) order, the CPT
/// extremality criterion family. The operators must already be linearly
/// independent.
pub fn cpt_criterion_family(k: &KrausSet, tol: &TolerancePolicy) -> Result<Vec<ComplexMatrix>> {
    if !linear_independence(k.ops(), tol)? {
        return Err(Error::DependentKraus);
    }
    Ok(products_adjoint_left(k))
}

/// The r^2 products E_k E_l† in lexicographic (k, l) order, the UCP
/// extremality criterion family.
pub fn ucp_criterion_family(k: &KrausSet, tol: &TolerancePolicy) -> Result<Vec<ComplexMatrix>> {
    if !linear_independence(k.ops(), tol)? {
        return Err(Error::DependentKraus);
    }
    Ok(products_adjoint_right(k))
}

/// The r^2 direct sums E_k† E_l (+) E_l E_k† in lexicographic (k, l) order,
/// stored as stacked 2d^2 x 1 columns, the UCPT extremality criterion
/// family. Requires equal dimensions and linearly independent operators.
pub fn ucpt_criterion_family(k: &KrausSet, tol: &TolerancePolicy) -> Result<Vec<ComplexMatrix>> {
    if k.dim_in() != k.dim_out() {
        return Err(Error::NotSquareChannel {
            dim_in: k.dim_in(),
            dim_out: k.dim_out(),
        });
    }
    if !linear_independence(k.ops(), tol)? {
        return Err(Error::DependentKraus);
    }
    Ok(direct_sum_family(k))
}

fn products_adjoint_left(k: &KrausSet) -> Vec<ComplexMatrix> {
    let mut family = Vec::with_capacity(k.len() * k.len());
    for e_k in k.ops() {
        let ek_adj = e_k.adjoint();
        for e_l in k.ops() {
            family.push(&ek_adj * e_l);
        }
    }
    family
}

fn products_adjoint_right(k: &KrausSet) -> Vec<ComplexMatrix> {
    let mut family = Vec::with_capacity(k.len() * k.len());
    for e_k in k.ops() {
        for e_l in k.ops() {
            family.push(e_k * &e_l.adjoint());
        }
    }
    family
}

/// Stacked representation of E_k† E_l (+) E_l E_k†: vec of the first block
/// over vec of the second, so the inner product of two stacked columns is
/// the sum of the two Hilbert-Schmidt inner products.
fn direct_sum_family(k: &KrausSet) -> Vec<ComplexMatrix> {
    let d = k.dim_in();
    let len = 2 * d * d;
    let mut family = Vec::with_capacity(k.len() * k.len());
    for e_k in k.ops() {
        let ek_adj = e_k.adjoint();
        for e_l in k.ops() {
            let first = (&ek_adj * e_l).column_stacked();
            let second = (e_l * &ek_adj).column_stacked();
            let mut stacked = Vec::with_capacity(len);
            stacked.extend_from_slice(&first);
            stacked.extend_from_slice(&second);
            family.push(ComplexMatrix::new(len, 1, stacked).expect("finite by construction"));
        }
    }
    family
}

/// Gram matrix of the UCPT criterion family of a minimal Kraus set
/// (minimizing first when needed). Exposed for the scaling law of the
/// tensor-with-unitary invariance, G' = dim(Y) * G.
pub fn ucpt_criterion_gram(k: &KrausSet, tol: &TolerancePolicy) -> Result<GramMatrix> {
    if k.dim_in() != k.dim_out() {
        return Err(Error::NotSquareChannel {
            dim_in: k.dim_in(),
            dim_out: k.dim_out(),
        });
    }
    let minimal = crate::choi::minimize(k, tol)?;
    gram(&direct_sum_family(&minimal))
}

/// Extremality in CPT(X, Y). Not applicable unless the channel is trace
/// preserving.
pub fn is_extreme_cpt(k: &KrausSet, tol: &TolerancePolicy) -> Result<ExtremalityOutcome> {
    if !k.is_trace_preserving(tol).passed {
        return Ok(ExtremalityOutcome::not_applicable());
    }
    let minimal = crate::choi::minimize(k, tol)?;
    cpt_outcome_of_minimal(&minimal, tol)
}

fn cpt_outcome_of_minimal(minimal: &KrausSet, tol: &TolerancePolicy) -> Result<ExtremalityOutcome> {
    let g = gram(&products_adjoint_left(minimal))?;
    Ok(ExtremalityOutcome::from_gram(g.rank_diagnostics(tol)?))
}

/// Extremality in UCP(X, Y). Not applicable unless the channel is unital.
pub fn is_extreme_ucp(k: &KrausSet, tol: &TolerancePolicy) -> Result<ExtremalityOutcome> {
    if !k.is_unital(tol).passed {
        return Ok(ExtremalityOutcome::not_applicable());
    }
    let minimal = crate::choi::minimize(k, tol)?;
    ucp_outcome_of_minimal(&minimal, tol)
}

fn ucp_outcome_of_minimal(minimal: &KrausSet, tol: &TolerancePolicy) -> Result<ExtremalityOutcome> {
    let g = gram(&products_adjoint_right(minimal))?;
    Ok(ExtremalityOutcome::from_gram(g.rank_diagnostics(tol)?))
}

/// Extremality in UCPT(X). Not applicable unless the channel is unital,
/// trace preserving and square. Applies the Choi-rank obstruction before
/// falling back to the Gram test; the outcome records which path decided.
pub fn is_extreme_ucpt(k: &KrausSet, tol: &TolerancePolicy) -> Result<ExtremalityOutcome> {
    ucpt_outcome(k, tol, true)
}

/// [`is_extreme_ucpt`] with the rank shortcut disabled, forcing the full
/// Gram test. Used to cross-check shortcut verdicts.
pub fn is_extreme_ucpt_by_gram(k: &KrausSet, tol: &TolerancePolicy) -> Result<ExtremalityOutcome> {
    ucpt_outcome(k, tol, false)
}

fn ucpt_outcome(
    k: &KrausSet,
    tol: &TolerancePolicy,
    allow_shortcut: bool,
) -> Result<ExtremalityOutcome> {
    if !k.classify(tol).is_ucpt() {
        return Ok(ExtremalityOutcome::not_applicable());
    }
    let minimal = crate::choi::minimize(k, tol)?;
    ucpt_outcome_of_minimal(&minimal, tol, allow_shortcut)
}

fn ucpt_outcome_of_minimal(
    minimal: &KrausSet,
    tol: &TolerancePolicy,
    allow_shortcut: bool,
) -> Result<ExtremalityOutcome> {
    let d = minimal.dim_in();
    let cr = minimal.len();
    if allow_shortcut && cr * cr > 2 * d * d {
        return Ok(ExtremalityOutcome {
            verdict: Verdict::NotExtreme,
            decided_by: Some(DecisionPath::RankBound),
            diagnostics: None,
        });
    }
    let g = gram(&direct_sum_family(minimal))?;
    Ok(ExtremalityOutcome::from_gram(g.rank_diagnostics(tol)?))
}

/// The Choi-rank upper bound sqrt(2 d^2 - 1) an extreme UCPT map on a
/// d-dimensional space must respect.
pub fn ucpt_rank_bound(d: usize) -> f64 {
    ((2 * d * d - 1) as f64).sqrt()
}

/// The coarser bound sqrt(2) * d implied by dimension counting alone.
pub fn ucpt_rank_bound_coarse(d: usize) -> f64 {
    std::f64::consts::SQRT_2 * d as f64
}

/// Shortcut hypothesis for tensor non-extremality: true iff both factors
/// are UCPT with Choi rank strictly above 2^(1/4) times their dimension.
/// When true, the tensor product's Choi rank CR*CR' exceeds
/// sqrt(2) * dim(X (x) Y), so the tensor product cannot be extreme UCPT.
/// False means the shortcut is silent, not that the tensor is extreme.
pub fn tensor_nonextremality_check(
    a: &KrausSet,
    b: &KrausSet,
    tol: &TolerancePolicy,
) -> Result<bool> {
    if !a.classify(tol).is_ucpt() || !b.classify(tol).is_ucpt() {
        return Ok(false);
    }
    let cr_a = crate::choi::choi_rank(a, tol)?;
    let cr_b = crate::choi::choi_rank(b, tol)?;
    let fourth_root = 2f64.powf(0.25);
    Ok(cr_a as f64 > fourth_root * a.dim_in() as f64
        && cr_b as f64 > fourth_root * b.dim_in() as f64)
}

/// Run every applicable test and assemble the consolidated report.
pub fn analyze(k: &KrausSet, tol: &TolerancePolicy) -> Result<ExtremalityReport> {
    let classification = k.classify(tol);
    let Minimized {
        kraus: minimal,
        rank_decision,
    } = minimize_detailed(k, tol)?;
    let choi_rank = rank_decision.rank;

    let extreme_cpt = if classification.is_cpt() {
        cpt_outcome_of_minimal(&minimal, tol)?
    } else {
        ExtremalityOutcome::not_applicable()
    };
    let extreme_ucp = if classification.is_ucp() {
        ucp_outcome_of_minimal(&minimal, tol)?
    } else {
        ExtremalityOutcome::not_applicable()
    };
    let extreme_ucpt = if classification.is_ucpt() {
        ucpt_outcome_of_minimal(&minimal, tol, true)?
    } else {
        ExtremalityOutcome::not_applicable()
    };

    let square = k.dim_in() == k.dim_out();
    let rank_bound = square.then(|| ucpt_rank_bound(k.dim_in()));
    // For integer ranks CR > sqrt(2d^2 - 1) coincides with CR^2 > 2d^2
    // (2d^2 is never a perfect square), so this matches the shortcut.
    let bound_violated = classification.is_ucpt()
        && square
        && choi_rank * choi_rank > 2 * k.dim_in() * k.dim_in() - 1;

    let headline = [&extreme_ucpt, &extreme_cpt, &extreme_ucp]
        .into_iter()
        .find_map(|o| o.diagnostics)
        .unwrap_or(rank_decision);
    let ill_conditioned = extreme_cpt.ill_conditioned()
        || extreme_ucp.ill_conditioned()
        || extreme_ucpt.ill_conditioned()
        || rank_decision.ill_conditioned;

    Ok(ExtremalityReport {
        dim_in: k.dim_in(),
        dim_out: k.dim_out(),
        kraus_given: k.len(),
        classification,
        choi_rank,
        extreme_cpt,
        extreme_ucp,
        extreme_ucpt,
        gram_order: headline.order,
        gram_rank: headline.rank,
        smallest_kept_eigenvalue: headline.smallest_kept,
        largest_dropped_eigenvalue: headline.largest_dropped,
        ucpt_rank_bound: rank_bound,
        bound_violated,
        ill_conditioned,
    })
}
