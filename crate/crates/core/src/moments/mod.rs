//! Batch statistics over squarefree `n`.
//!
//! The first-moment sum of the candidate bound is computed two ways: over
//! divisors `d | 2 Delta n` ([`xn_sum_direct`]) and over pairwise coprime
//! variables ([`xn_sum_reparam`]). They agree exactly. The remaining reports
//! tabulate set sizes, `omega_inert` averages, the distribution of the predicted
//! 4-rank and a prediction-vs-oracle campaign.

pub mod baselines;
mod campaign;
mod dyadic;
pub mod output;
mod report;
mod sums;

pub use baselines::Baselines;
pub use campaign::{
    verify_campaign, verify_campaign_with, CampaignReport, CampaignRow, OracleSource, RowStatus,
    SampleSpec,
};
pub use dyadic::Dyadic;
pub use report::{
    candidate_sizes, default_z_grid, erdos_kac_report, moment_report, omega_inert_disc, phi,
    turan_report, DecadeRow, EkReport, EkRow, MomentReport, MomentRow, TuranReport, TWO_OVER_ZETA2,
};
pub use sums::{
    direct_summand, direct_terms, sum_terms, xn_sum_direct, xn_sum_direct_with, xn_sum_reparam,
    xn_sum_reparam_with, z_tuples, DirectTerm, MomentConfig, SumTerm,
};
