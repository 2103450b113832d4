//! Seeded finite-scale checks of singular-value inequalities and limit
//! lemmas. Exact statements are checked exactly; asymptotic ones become
//! bound or trend probes with documented gates.

mod commutation;
mod inequalities;
mod limits;
mod trials;

use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Result};
use crate::exec::Exec;
use crate::orlicz::TorusFunction;

pub use commutation::{
    commutation_rung, positive_part_commutation_test, CommutationRung, COMMUTATION_DECAY, ZERO_FLOOR_FACTOR,
    ZERO_TOLERANCE,
};
pub use inequalities::{
    holder_positive_part_test, holder_sample, product_inequality_test, product_slack, HolderRung, HolderSample,
    ProductRung, HOLDER_GROWTH, HOLDER_MAX_RATIO, PRODUCT_SLACK,
};
pub use limits::{
    direct_sum_lemma_test, limit_transfer_test, perturbation_limit_test, tensor_lemma_test, DirectSumCase,
    PerturbationCase, Profile, TensorCase, TransferRow, DEFAULT_N_MAX, DIRECT_SUM_RTOL, LIMIT_RTOL, TENSOR_BOUND_SLACK,
    TENSOR_MIN_LEN,
};
pub use trials::{
    conjugated_profile, gaussian_hermitian, orthonormal_columns, random_unitary, Distribution, TrialConfig,
    DEFAULT_SEED,
};

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub test: String,
    pub seed: u64,
    pub trials: usize,
    /// The suite's worst observed statistic, compared against `threshold`.
    pub worst_case: f64,
    pub threshold: f64,
    pub pass: bool,
    pub details: serde_json::Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Product,
    Holder,
    Tensor,
    DirectSum,
    Perturbation,
    LimitTransfer,
    PositivePart,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Product,
        Suite::Holder,
        Suite::Tensor,
        Suite::DirectSum,
        Suite::Perturbation,
        Suite::LimitTransfer,
        Suite::PositivePart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Product => "product",
            Suite::Holder => "holder",
            Suite::Tensor => "tensor",
            Suite::DirectSum => "direct_sum",
            Suite::Perturbation => "perturbation",
            Suite::LimitTransfer => "limit_transfer",
            Suite::PositivePart => "positive_part",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        Suite::ALL.into_iter().find(|x| x.name() == key).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            invalid_param(format!("unknown suite '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

/// Parameters of every suite; the defaults are the reference run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LemmaSettings {
    pub seed: u64,
    pub distribution: Distribution,
    pub product_trials: usize,
    pub product_sizes: Vec<usize>,
    pub holder_trials: usize,
    pub holder_sizes: Vec<usize>,
    pub tensor_alphas: Vec<Vec<f64>>,
    pub direct_sums: Vec<Vec<Profile>>,
    pub n_max: usize,
    pub perturbation_size: usize,
    pub perturbation_rank: usize,
    pub perturbation_magnitude: f64,
    pub transfer_steps: u32,
    pub commutation_schedule: Vec<f64>,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for LemmaSettings {
    fn default() -> Self {
        let p = |alpha, delta| Profile { alpha, delta };
        Self {
            seed: DEFAULT_SEED,
            distribution: Distribution::default(),
            product_trials: 500,
            product_sizes: vec![8, 16, 32],
            holder_trials: 500,
            holder_sizes: vec![16, 32, 64],
            tensor_alphas: vec![vec![1.0], vec![1.0, 1.0], vec![3.0, 1.0, 0.5]],
            direct_sums: vec![
                vec![p(2.0, 0.0)],
                vec![p(1.0, 0.0), p(1.0, 0.0)],
                vec![p(1.0, 5.0), p(2.0, -1.0), p(3.0, 2.0)],
            ],
            n_max: DEFAULT_N_MAX,
            perturbation_size: 4096,
            perturbation_rank: 3,
            perturbation_magnitude: 10.0,
            transfer_steps: 10,
            commutation_schedule: vec![256.0, 512.0, 1024.0],
            exec: Exec::best(),
        }
    }
}

impl LemmaSettings {
    fn trials(&self, trials: usize, sizes: &[usize]) -> TrialConfig {
        TrialConfig {
            seed: self.seed,
            trials,
            sizes: sizes.to_vec(),
            distribution: self.distribution,
        }
    }
}

/// Runs one suite.
pub fn run_suite(suite: Suite, s: &LemmaSettings) -> Result<Verdict> {
    match suite {
        Suite::Product => product_inequality_test(&s.trials(s.product_trials, &s.product_sizes), s.exec),
        Suite::Holder => holder_positive_part_test(&s.trials(s.holder_trials, &s.holder_sizes), s.exec),
        Suite::Tensor => tensor_lemma_test(&s.tensor_alphas, s.n_max),
        Suite::DirectSum => direct_sum_lemma_test(&s.direct_sums, s.n_max),
        Suite::Perturbation => perturbation_limit_test(
            s.perturbation_size,
            s.perturbation_rank,
            s.perturbation_magnitude,
            s.seed,
            s.exec,
        ),
        Suite::LimitTransfer => limit_transfer_test(s.transfer_steps, s.n_max),
        Suite::PositivePart => {
            positive_part_commutation_test(&TorusFunction::cosine(1)?, &s.commutation_schedule, s.exec)
        }
    }
}

/// Runs `suites` in order.
pub fn run_suites(suites: &[Suite], s: &LemmaSettings) -> Result<Vec<Verdict>> {
    suites.iter().map(|&x| run_suite(x, s)).collect()
}
