//! JSON documents exchanged by the command line: channels as explicit
//! Kraus matrices with [re, im] entry pairs, analysis reports, and Choi
//! matrix dumps. Field order is fixed by declaration order, so serialized
//! output is byte-stable for identical inputs.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use qchan_core::extremal::ExtremalityReport;
use qchan_core::matrix::{ComplexMatrix, C64};
use qchan_core::{ChoiMatrix, KrausSet, TolerancePolicy};

pub const FORMAT_VERSION: u32 = 1;

/// A channel as a list of Kraus matrices. Each matrix is a row-major list
/// of rows; each entry is a two-element [real, imaginary] array.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub format_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelDocument {
    pub fn from_kraus(kraus: &KrausSet, name: Option<String>, provenance: Option<String>) -> Self {
        let ops = kraus
            .ops()
            .iter()
            .map(|op| {
                (0..op.rows())
                    .map(|i| {
                        (0..op.cols())
                            .map(|j| {
                                let z = op.get(i, j);
                                [z.re, z.im]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            name,
            provenance,
            dim_in: kraus.dim_in(),
            dim_out: kraus.dim_out(),
            kraus: ops,
        }
    }

    pub fn to_kraus(&self) -> anyhow::Result<KrausSet> {
        if self.format_version != FORMAT_VERSION {
            bail!(
                "unsupported format_version {} (expected {})",
                self.format_version,
                FORMAT_VERSION
            );
        }
        if self.dim_in == 0 || self.dim_out == 0 {
            bail!("dimensions must be at least 1");
        }
        if self.kraus.is_empty() {
            bail!("channel document contains no Kraus operators");
        }
        let mut ops = Vec::with_capacity(self.kraus.len());
        for (index, matrix) in self.kraus.iter().enumerate() {
            if matrix.len() != self.dim_out {
                bail!(
                    "Kraus operator {index} has {} rows, expected dim_out = {}",
                    matrix.len(),
                    self.dim_out
                );
            }
            let mut data = Vec::with_capacity(self.dim_out * self.dim_in);
            for (r, row) in matrix.iter().enumerate() {
                if row.len() != self.dim_in {
                    bail!(
                        "Kraus operator {index} row {r} has {} entries, expected dim_in = {}",
                        row.len(),
                        self.dim_in
                    );
                }
                for &[re, im] in row {
                    data.push(C64::new(re, im));
                }
            }
            let op = ComplexMatrix::new(self.dim_out, self.dim_in, data)
                .with_context(|| format!("Kraus operator {index}"))?;
            ops.push(op);
        }
        Ok(KrausSet::new(ops)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToleranceDocument {
    pub rank_tol: f64,
    pub check_tol: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationDocument {
    pub cp: bool,
    pub trace_preserving: bool,
    pub tp_residual: f64,
    pub unital: bool,
    pub unital_residual: f64,
    pub ucpt: bool,
    pub class: String,
}

/// JSON rendering of an extremality report. Verdict fields are the strings
/// "true", "false" or "not-applicable". The timing field is only emitted on
/// request so that default output is byte-stable across runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus_given: usize,
    pub tolerance: ToleranceDocument,
    pub classification: ClassificationDocument,
    pub choi_rank: usize,
    pub extreme_cpt: String,
    pub extreme_ucp: String,
    pub extreme_ucpt: String,
    pub ucpt_decided_by: Option<String>,
    pub gram_order: usize,
    pub gram_rank: usize,
    pub smallest_kept_eigenvalue: Option<f64>,
    pub largest_dropped_eigenvalue: Option<f64>,
    pub ucpt_rank_bound: Option<f64>,
    pub bound_violated: bool,
    pub ill_conditioned: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl ReportDocument {
    pub fn from_report(
        report: &ExtremalityReport,
        name: Option<String>,
        tol: &TolerancePolicy,
        timing_ms: Option<u64>,
    ) -> Self {
        let classification = ClassificationDocument {
            cp: true,
            trace_preserving: report.classification.trace_preserving.passed,
            tp_residual: report.classification.trace_preserving.residual,
            unital: report.classification.unital.passed,
            unital_residual: report.classification.unital.residual,
            ucpt: report.classification.is_ucpt(),
            class: report.classification.label().as_str().to_owned(),
        };
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            name,
            dim_in: report.dim_in,
            dim_out: report.dim_out,
            kraus_given: report.kraus_given,
            tolerance: ToleranceDocument {
                rank_tol: tol.rel_rank_tol(),
                check_tol: tol.abs_check_tol(),
            },
            classification,
            choi_rank: report.choi_rank,
            extreme_cpt: report.extreme_cpt.verdict.as_str().to_owned(),
            extreme_ucp: report.extreme_ucp.verdict.as_str().to_owned(),
            extreme_ucpt: report.extreme_ucpt.verdict.as_str().to_owned(),
            ucpt_decided_by: report
                .extreme_ucpt
                .decided_by
                .map(|p| p.as_str().to_owned()),
            gram_order: report.gram_order,
            gram_rank: report.gram_rank,
            smallest_kept_eigenvalue: report.smallest_kept_eigenvalue,
            largest_dropped_eigenvalue: report.largest_dropped_eigenvalue,
            ucpt_rank_bound: report.ucpt_rank_bound,
            bound_violated: report.bound_violated,
            ill_conditioned: report.ill_conditioned,
            timing_ms,
        }
    }
}

/// Choi matrix dump: a row-major complex matrix of order dim_in * dim_out.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChoiDocument {
    pub format_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim_in: usize,
    pub dim_out: usize,
    pub order: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl ChoiDocument {
    pub fn from_choi(choi: &ChoiMatrix, name: Option<String>) -> Self {
        let m = choi.matrix();
        let matrix = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| {
                        let z = m.get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            name,
            dim_in: choi.dim_in(),
            dim_out: choi.dim_out(),
            order: choi.order(),
            matrix,
        }
    }
}
