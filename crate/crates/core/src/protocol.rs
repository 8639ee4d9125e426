//! The end-to-end protocol: weak measurement, effective angle, optimal cloner.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cloner::{clone, fidelity_general, CloneCoeffs};
use crate::optimal::optimum;
use crate::par::{map_indexed, Execution};
use crate::qmath::{fidelity_pure, partial_trace, state_pair, PureQubit, StateAngle, Subsystem};
use crate::weakmeas::{
    effective_angle, post_select_yes, sample_outcome, success_prob, Outcome, WeakStrength,
};
use crate::{Error, Result};

/// Trials per work item in [`monte_carlo`]. Block boundaries are fixed so the
/// floating-point reduction order never depends on scheduling.
const BLOCK: usize = 4096;

/// Everything computed for one `(ξ, p)` operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PipelineReport {
    pub xi: StateAngle,
    pub p: WeakStrength,
    pub p_yes: f64,
    pub xi_prime: StateAngle,
    pub coeffs: CloneCoeffs,
    pub fidelity_closed: f64,
    pub fidelity_sim: f64,
}

/// Maximum success probability for exact probabilistic cloning of the pair,
/// `1/(1 + sin 2ξ)`.
pub fn duan_guo_bound(xi: StateAngle) -> f64 {
    1.0 / (1.0 + xi.sin2())
}

pub fn run_pipeline(xi: StateAngle, p: WeakStrength) -> Result<PipelineReport> {
    let xi_prime = effective_angle(xi, p)?;
    let coeffs = optimum(xi, xi_prime).coeffs;

    let (target, _) = state_pair(xi);
    let (intermediate, _) = post_select_yes(&target, p)?;
    let out = clone(&intermediate, &coeffs);
    let fidelity_sim = fidelity_pure(&partial_trace(&out, Subsystem::First), &target);

    Ok(PipelineReport {
        xi,
        p,
        p_yes: success_prob(xi, p),
        xi_prime,
        coeffs,
        fidelity_closed: fidelity_general(xi, xi_prime, &coeffs),
        fidelity_sim,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloStats {
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub mean_fidelity_clone1: f64,
    pub mean_fidelity_clone2: f64,
    /// Standard error of `mean_fidelity_clone1`.
    pub standard_error: f64,
    /// Binomial standard error of `success_rate`.
    pub success_rate_error: f64,
    /// Worst single-clone fidelity over all successful trials.
    pub min_fidelity: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
struct Tally {
    successes: u64,
    sum1: f64,
    sum2: f64,
    sum_sq1: f64,
    min: f64,
}

impl Default for Tally {
    fn default() -> Self {
        Tally {
            successes: 0,
            sum1: 0.0,
            sum2: 0.0,
            sum_sq1: 0.0,
            min: f64::INFINITY,
        }
    }
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            successes: self.successes + other.successes,
            sum1: self.sum1 + other.sum1,
            sum2: self.sum2 + other.sum2,
            sum_sq1: self.sum_sq1 + other.sum_sq1,
            min: self.min.min(other.min),
        }
    }
}

/// The random stream for trial `index`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One trial: draw ψ₁ or ψ₂, measure, and on `yes` clone. Returns the two
/// clone fidelities against the drawn state.
fn trial(
    pair: &(PureQubit, PureQubit),
    p: WeakStrength,
    coeffs: &CloneCoeffs,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(f64, f64)>> {
    let target = if rng.random::<bool>() {
        &pair.0
    } else {
        &pair.1
    };
    let outcome = sample_outcome(target, p, rng)?;
    if outcome.tag == Outcome::No {
        return Ok(None);
    }
    let out = clone(&outcome.state, coeffs);
    Ok(Some((
        fidelity_pure(&partial_trace(&out, Subsystem::First), target),
        fidelity_pure(&partial_trace(&out, Subsystem::Second), target),
    )))
}

pub fn monte_carlo(
    xi: StateAngle,
    p: WeakStrength,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloStats> {
    monte_carlo_with(xi, p, trials, seed, Execution::default())
}

/// [`monte_carlo`] with an explicit execution mode. Output is bit-identical
/// across modes and thread counts.
pub fn monte_carlo_with(
    xi: StateAngle,
    p: WeakStrength,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<MonteCarloStats> {
    if trials == 0 {
        return Err(Error::InvalidTrialCount);
    }
    let report = run_pipeline(xi, p)?;
    let pair = state_pair(xi);
    let coeffs = report.coeffs;

    let blocks = trials.div_ceil(BLOCK as u64) as usize;
    let partials = map_indexed(blocks, exec, |blk| -> Result<Tally> {
        let start = blk as u64 * BLOCK as u64;
        let end = (start + BLOCK as u64).min(trials);
        let mut tally = Tally::default();
        for i in start..end {
            let mut rng = trial_rng(seed, i);
            if let Some((f1, f2)) = trial(&pair, p, &coeffs, &mut rng)? {
                tally.successes += 1;
                tally.sum1 += f1;
                tally.sum2 += f2;
                tally.sum_sq1 += f1 * f1;
                tally.min = tally.min.min(f1).min(f2);
            }
        }
        Ok(tally)
    });
    let mut total = Tally::default();
    for part in partials {
        total = total.merge(part?);
    }

    let n = trials as f64;
    let k = total.successes as f64;
    let success_rate = k / n;
    let (mean1, mean2, standard_error) = if total.successes == 0 {
        (f64::NAN, f64::NAN, f64::NAN)
    } else {
        let mean1 = total.sum1 / k;
        let var = if total.successes > 1 {
            ((total.sum_sq1 - k * mean1 * mean1) / (k - 1.0)).max(0.0)
        } else {
            0.0
        };
        (mean1, total.sum2 / k, (var / k).sqrt())
    };
    Ok(MonteCarloStats {
        trials,
        successes: total.successes,
        success_rate,
        mean_fidelity_clone1: mean1,
        mean_fidelity_clone2: mean2,
        standard_error,
        success_rate_error: (success_rate * (1.0 - success_rate) / n).sqrt(),
        min_fidelity: if total.successes == 0 {
            f64::NAN
        } else {
            total.min
        },
        seed,
    })
}
