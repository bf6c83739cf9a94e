//! Prediction against the class-group oracle, one row per `n`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::is_squarefree;
use crate::classgroup::{class_group, ClassGroupConfig, NumberFieldOrder, OracleStatus};
use crate::error::{Error, Result};
use crate::quadfield::{disc_of_sqrt, QuadraticField};
use crate::selmer::{predicted_rk4, xn_candidates, yn_candidates};

/// Which `n` a campaign visits: squarefree `1 < |n| <= nmax`, filtered by parity and sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub nmax: u64,
    pub odd_only: bool,
    pub include_negative: bool,
}

impl SampleSpec {
    /// Odd squarefree `1 < n <= nmax`.
    pub fn odd_positive(nmax: u64) -> Self {
        SampleSpec {
            nmax,
            odd_only: true,
            include_negative: false,
        }
    }

    pub fn values(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for m in 2..=self.nmax as i64 {
            if (self.odd_only && m % 2 == 0) || !is_squarefree(m) {
                continue;
            }
            out.push(m);
            if self.include_negative {
                out.push(-m);
            }
        }
        if self.include_negative {
            out.push(-1);
        }
        out.sort_by_key(|&n| (n.unsigned_abs(), n < 0));
        out
    }
}

/// Oracle outcome for a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Certified,
    Stable,
    /// Budget exhausted or discriminant past the oracle bound.
    Failed,
}

impl From<OracleStatus> for RowStatus {
    fn from(s: OracleStatus) -> Self {
        match s {
            OracleStatus::Certified => RowStatus::Certified,
            OracleStatus::Stable => RowStatus::Stable,
        }
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Certified => "certified",
            RowStatus::Stable => "stable",
            RowStatus::Failed => "failed",
        })
    }
}

/// One line of `campaign.csv`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignRow {
    pub n: i64,
    pub delta_n: i64,
    pub omega_inert: usize,
    pub predicted: i64,
    pub generic_x: bool,
    pub generic_y: bool,
    pub oracle_rk4: Option<usize>,
    pub oracle_status: RowStatus,
    /// `None` when the oracle failed.
    pub agree: Option<bool>,
}

impl CampaignRow {
    pub fn generic(&self) -> bool {
        self.generic_x && self.generic_y
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub z: i64,
    pub rows: Vec<CampaignRow>,
    /// Sample values with `K(sqrt n) = K`, left out of `rows`.
    pub rejected: Vec<i64>,
    /// Generic rows with a certified or stable oracle value.
    pub generic_checked: usize,
    pub generic_agreeing: usize,
    /// Generic checked rows where the oracle is below the prediction.
    pub oracle_below: Vec<i64>,
}

impl CampaignReport {
    pub fn agreement_rate(&self) -> Option<f64> {
        (self.generic_checked > 0)
            .then(|| self.generic_agreeing as f64 / self.generic_checked as f64)
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &CampaignRow> {
        self.rows
            .iter()
            .filter(|r| r.generic() && r.agree == Some(false))
    }
}

/// Where the oracle values come from.
pub enum OracleSource<'a> {
    Compute(&'a ClassGroupConfig),
    /// Precomputed `(n, rk4, status)`; rows without an entry are marked failed.
    Table(&'a [(i64, usize, RowStatus)]),
}

fn oracle_row(
    field: &QuadraticField,
    n: i64,
    src: &OracleSource<'_>,
) -> (Option<usize>, RowStatus) {
    match src {
        OracleSource::Compute(cfg) => {
            let res =
                NumberFieldOrder::maximal_order(field.z(), n).and_then(|o| class_group(&o, cfg));
            match res {
                Ok(r) => (Some(r.group.rk4()), r.status.into()),
                Err(_) => (None, RowStatus::Failed),
            }
        }
        OracleSource::Table(t) => t
            .iter()
            .find(|e| e.0 == n)
            .map_or((None, RowStatus::Failed), |e| (Some(e.1), e.2)),
    }
}

/// Runs the campaign with the built-in oracle.
pub fn verify_campaign(
    field: &QuadraticField,
    sample: &SampleSpec,
    cfg: &ClassGroupConfig,
) -> Result<CampaignReport> {
    verify_campaign_with(field, sample, &OracleSource::Compute(cfg))
}

/// Rows are computed in parallel and kept in sample order. Oracle failures become
/// `failed` rows; only a missing `Cl(K)` is an error.
pub fn verify_campaign_with(
    field: &QuadraticField,
    sample: &SampleSpec,
    src: &OracleSource<'_>,
) -> Result<CampaignReport> {
    if field.class_group().is_none() {
        return Err(Error::State(format!(
            "Cl(K) for K = Q(sqrt {}) has not been computed",
            field.z()
        )));
    }
    let (ns, rejected): (Vec<i64>, Vec<i64>) =
        sample.values().into_iter().partition(|&n| n != field.z());
    let rows: Vec<CampaignRow> = ns
        .par_iter()
        .map(|&n| -> Result<CampaignRow> {
            let delta_n = disc_of_sqrt(n)?;
            let omega_inert = field.omega_inert_of(delta_n);
            let predicted = predicted_rk4(field, n)?;
            let generic_x = xn_candidates(field, n)?.is_trivial();
            let generic_y = yn_candidates(field, n)?.is_trivial();
            let (oracle_rk4, oracle_status) = oracle_row(field, n, src);
            Ok(CampaignRow {
                n,
                delta_n,
                omega_inert,
                predicted,
                generic_x,
                generic_y,
                oracle_rk4,
                oracle_status,
                agree: oracle_rk4.map(|r| r as i64 == predicted),
            })
        })
        .collect::<Result<_>>()?;
    let checked: Vec<&CampaignRow> = rows
        .iter()
        .filter(|r| r.generic() && r.oracle_status != RowStatus::Failed)
        .collect();
    let oracle_below = checked
        .iter()
        .filter(|r| (r.oracle_rk4.expect("checked") as i64) < r.predicted)
        .map(|r| r.n)
        .collect();
    Ok(CampaignReport {
        z: field.z(),
        generic_checked: checked.len(),
        generic_agreeing: checked.iter().filter(|r| r.agree == Some(true)).count(),
        oracle_below,
        rows,
        rejected,
    })
}
