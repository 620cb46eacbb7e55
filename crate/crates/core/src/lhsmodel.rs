//! Classical models of temporal correlations.
//!
//! A hidden variable `λ` with weight `p_λ` fixes a response `P_λ(x0)` for the
//! earlier measurement and a hidden state `ρ_λ` whose Born probabilities
//! `Q_λ(x) = Tr[ρ_λ Π_x]` answer the later one:
//!
//! `P(x0, x) = Σ_λ p_λ P_λ(x0) Q_λ(x)`
//!
//! Every such model satisfies the temporal steering inequality checked by
//! [`crate::bounds::steering_witness`]; [`theorem_sweep`] verifies that on
//! random ensembles.

use rand::Rng;
use rayon::prelude::*;

use crate::bounds::{max_overlap_c, steering_witness};
use crate::error::{Error, Result};
use crate::infotheory::{conditional_entropy, shannon, Distribution};
use crate::quantum::{measure_distribution, DensityMatrix, JointDistribution, Observable, Outcome};
use crate::random::{derive_seed, random_density_matrix, rng_from_seed};

/// Which of the two sequential contexts a prior response belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Context {
    X,
    Z,
}

#[derive(Debug, Clone)]
pub struct LhsMember {
    pub weight: f64,
    pub prior_x: Distribution,
    pub prior_z: Distribution,
    pub hidden_state: DensityMatrix,
}

impl LhsMember {
    pub fn prior(&self, context: Context) -> &Distribution {
        match context {
            Context::X => &self.prior_x,
            Context::Z => &self.prior_z,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LhsEnsemble {
    members: Vec<LhsMember>,
}

impl LhsEnsemble {
    pub fn new(members: Vec<LhsMember>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidDistribution("ensemble has no members".into()))?;
        let dim = first.hidden_state.dim();
        let (nx, nz) = (first.prior_x.len(), first.prior_z.len());
        let mut total = 0.0;
        for m in &members {
            if !(0.0..=1.0).contains(&m.weight) {
                return Err(Error::ProbabilityOutOfRange(m.weight));
            }
            if m.hidden_state.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "LhsEnsemble hidden states",
                    expected: dim,
                    found: m.hidden_state.dim(),
                });
            }
            if m.prior_x.len() != nx || m.prior_z.len() != nz {
                return Err(Error::InvalidDistribution(
                    "prior responses differ in outcome count across members".into(),
                ));
            }
            total += m.weight;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "ensemble weights sum to {total}"
            )));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[LhsMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].hidden_state.dim()
    }

    /// `P(x0) = Σ_λ p_λ P_λ(x0)`
    pub fn prior_marginal(&self, context: Context) -> Vec<f64> {
        let n = self.members[0].prior(context).len();
        (0..n)
            .map(|a| {
                self.members
                    .iter()
                    .map(|m| m.weight * m.prior(context).probs()[a])
                    .sum()
            })
            .collect()
    }
}

/// `Q_λ(x) = Tr[ρ_λ Π_x]`
pub fn member_response(member: &LhsMember, later: &Observable) -> Result<Distribution> {
    measure_distribution(&member.hidden_state, later)
}

/// `Σ_λ p_λ H(Q_λ)`: the floor the averaging step puts under `H(X|X0)`.
pub fn averaged_member_entropy(e: &LhsEnsemble, later: &Observable) -> Result<f64> {
    e.members
        .iter()
        .map(|m| Ok(m.weight * shannon(&member_response(m, later)?)))
        .sum()
}

/// Joint statistics of an ensemble for one context.
pub fn lhs_joint(
    e: &LhsEnsemble,
    context: Context,
    later: &Observable,
) -> Result<JointDistribution> {
    if later.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            context: "lhs_joint",
            expected: e.dim(),
            found: later.dim(),
        });
    }
    let n_a = e.members[0].prior(context).len();
    let n_b = later.n_outcomes();
    let mut p = vec![0.0; n_a * n_b];
    for m in &e.members {
        let q = member_response(m, later)?;
        for (a, &pa) in m.prior(context).probs().iter().enumerate() {
            for (b, &qb) in q.probs().iter().enumerate() {
                p[a * n_b + b] += m.weight * pa * qb;
            }
        }
    }
    JointDistribution::new(
        (0..n_a).map(Outcome::Index).collect(),
        later.outcomes().to_vec(),
        p,
    )
}

/// Posterior over `λ` after observing `x0`:
/// `p_{λ,x0} = p_λ P_λ(x0) / Σ_λ' p_λ' P_λ'(x0)`.
pub fn lhs_conditional_decomposition(
    e: &LhsEnsemble,
    context: Context,
    x0: usize,
) -> Result<Distribution> {
    let n = e.members[0].prior(context).len();
    if x0 >= n {
        return Err(Error::DimensionMismatch {
            context: "lhs_conditional_decomposition outcome",
            expected: n,
            found: x0,
        });
    }
    let joint: Vec<f64> = e
        .members
        .iter()
        .map(|m| m.weight * m.prior(context).probs()[x0])
        .collect();
    let marginal: f64 = joint.iter().sum();
    if marginal <= crate::tol::CONDITIONING {
        return Err(Error::ZeroProbabilityOutcome {
            outcome: x0,
            probability: marginal,
        });
    }
    Distribution::new(joint.into_iter().map(|w| w / marginal).collect())
}

fn normalized_uniform(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    if total > 0.0 {
        raw.into_iter().map(|x| x / total).collect()
    } else {
        vec![1.0 / n as f64; n]
    }
}

/// Reproducible random ensemble: uniform-draw weights and priors (over
/// `dim` prior outcomes), hidden states as random mixtures of pure states.
///
/// Seeds a ChaCha8 stream with `seed`.
pub fn random_lhs_ensemble(dim: usize, n_members: usize, seed: u64) -> LhsEnsemble {
    assert!(dim >= 2, "dimension must be at least 2");
    assert!(n_members >= 1, "ensemble needs at least one member");
    let mut rng = rng_from_seed(seed);
    let weights = normalized_uniform(n_members, &mut rng);
    let members = weights
        .into_iter()
        .map(|weight| LhsMember {
            weight,
            prior_x: Distribution::new(normalized_uniform(dim, &mut rng)).expect("normalized"),
            prior_z: Distribution::new(normalized_uniform(dim, &mut rng)).expect("normalized"),
            hidden_state: random_density_matrix(dim, &mut rng),
        })
        .collect();
    LhsEnsemble::new(members).expect("generated ensemble is valid")
}

/// Per-trial numbers behind [`theorem_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// `H(X|X0) + H(Z|Z0) + 2 log2 c`
    pub witness_slack: f64,
    /// min over λ of `H(Q_λ^X) + H(Q_λ^Z) + 2 log2 c`
    pub member_mu_slack: f64,
    /// min over contexts of `H(X|X0) - Σ_λ p_λ H(Q_λ^X)`
    pub averaging_slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremSweep {
    pub trials: usize,
    pub min_slack: f64,
    pub violations: usize,
    pub min_member_mu_slack: f64,
    pub min_averaging_slack: f64,
}

impl TheoremSweep {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Evaluates one ensemble against the steering inequality and the two
/// intermediate inequalities it rests on.
pub fn evaluate_ensemble(e: &LhsEnsemble, x: &Observable, z: &Observable) -> Result<TrialOutcome> {
    let c = max_overlap_c(x, z)?;
    let floor = -2.0 * c.log2();
    let jx = lhs_joint(e, Context::X, x)?;
    let jz = lhs_joint(e, Context::Z, z)?;
    let witness = steering_witness(&jx, &jz, c)?;

    let mut member_mu_slack = f64::INFINITY;
    for m in e.members() {
        let h = shannon(&member_response(m, x)?) + shannon(&member_response(m, z)?);
        member_mu_slack = member_mu_slack.min(h - floor);
    }
    let averaging_slack = (conditional_entropy(&jx) - averaged_member_entropy(e, x)?)
        .min(conditional_entropy(&jz) - averaged_member_entropy(e, z)?);

    Ok(TrialOutcome {
        witness_slack: witness.slack,
        member_mu_slack,
        averaging_slack,
    })
}

/// Members per trial, in `1..=8`, derived from the trial seed.
pub fn members_for_trial(trial_seed: u64) -> usize {
    1 + (trial_seed % 8) as usize
}

/// Runs `trials` random ensembles through the temporal steering
/// inequality. Trial `i` uses seed `derive_seed(seed, i)`, so the result
/// does not depend on how trials are scheduled across threads.
pub fn theorem_sweep(
    dim: usize,
    trials: usize,
    x: &Observable,
    z: &Observable,
    seed: u64,
) -> Result<TheoremSweep> {
    if x.dim() != dim || z.dim() != dim {
        return Err(Error::DimensionMismatch {
            context: "theorem_sweep",
            expected: dim,
            found: if x.dim() != dim { x.dim() } else { z.dim() },
        });
    }
    max_overlap_c(x, z)?;
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let trial_seed = derive_seed(seed, i);
            let e = random_lhs_ensemble(dim, members_for_trial(trial_seed), trial_seed);
            evaluate_ensemble(&e, x, z)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut summary = TheoremSweep {
        trials,
        min_slack: f64::INFINITY,
        violations: 0,
        min_member_mu_slack: f64::INFINITY,
        min_averaging_slack: f64::INFINITY,
    };
    for o in outcomes {
        summary.min_slack = summary.min_slack.min(o.witness_slack);
        summary.min_member_mu_slack = summary.min_member_mu_slack.min(o.member_mu_slack);
        summary.min_averaging_slack = summary.min_averaging_slack.min(o.averaging_slack);
        if o.witness_slack < -crate::tol::VIOLATION {
            summary.violations += 1;
        }
    }
    Ok(summary)
}
