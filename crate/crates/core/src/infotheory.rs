//! Shannon and von Neumann entropy functionals. Everything is in bits.

use crate::error::{Error, Result};
use crate::numkernel::Subsystem;
use crate::quantum::{BipartiteState, DensityMatrix, JointDistribution};
use crate::tol;

/// Clamps rounding noise and validates a probability vector in place.
///
/// Entries in `[-PROB_CLAMP, 0)` become 0; anything more negative, a
/// non-finite entry, or a total off by more than `PROB_SUM` is an error.
/// Small total drift is renormalized away.
pub(crate) fn sanitize_probabilities(p: &mut [f64]) -> Result<()> {
    for x in p.iter_mut() {
        if !x.is_finite() {
            return Err(Error::InvalidDistribution(format!("non-finite entry {x}")));
        }
        if *x < -tol::PROB_CLAMP {
            return Err(Error::InvalidDistribution(format!("negative entry {x:e}")));
        }
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol::PROB_SUM {
        return Err(Error::InvalidDistribution(format!(
            "entries sum to {total}"
        )));
    }
    if total != 1.0 {
        for x in p.iter_mut() {
            *x /= total;
        }
    }
    Ok(())
}

/// Finite probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    p: Vec<f64>,
}

impl Distribution {
    pub fn new(mut p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        sanitize_probabilities(&mut p)?;
        Ok(Self { p })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            p: vec![1.0 / n as f64; n],
        }
    }

    pub fn point(n: usize, k: usize) -> Self {
        let mut p = vec![0.0; n];
        p[k] = 1.0;
        Self { p }
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

fn entropy_of(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x >= tol::ENTROPY_FLOOR)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

pub fn shannon(p: &Distribution) -> f64 {
    entropy_of(&p.p)
}

/// `H(p) = -p log p - (1-p) log(1-p)`
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(entropy_of(&[p, 1.0 - p]))
}

/// `H(A, B)` over all cells of the joint.
pub fn joint_entropy(j: &JointDistribution) -> f64 {
    entropy_of(j.entries())
}

pub fn marginal_entropy_a(j: &JointDistribution) -> f64 {
    entropy_of(&j.marginal_a())
}

pub fn marginal_entropy_b(j: &JointDistribution) -> f64 {
    entropy_of(&j.marginal_b())
}

/// `H(B|A) = H(A, B) - H(A)`, with `A` the first (conditioning) index.
pub fn conditional_entropy(j: &JointDistribution) -> f64 {
    joint_entropy(j) - marginal_entropy_a(j)
}

/// `I(A:B) = H(A) + H(B) - H(A, B)`
pub fn mutual_information(j: &JointDistribution) -> f64 {
    marginal_entropy_a(j) + marginal_entropy_b(j) - joint_entropy(j)
}

/// `D(p||q) = Σ p log(p/q)`.
///
/// Returns `f64::INFINITY` when `p` puts weight where `q` has none.
pub fn relative_entropy(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            context: "relative_entropy",
            expected: p.len(),
            found: q.len(),
        });
    }
    let mut acc = 0.0;
    for (&pk, &qk) in p.p.iter().zip(&q.p) {
        if pk < tol::ENTROPY_FLOOR {
            continue;
        }
        if qk < tol::ENTROPY_FLOOR {
            return Ok(f64::INFINITY);
        }
        acc += pk * (pk / qk).log2();
    }
    Ok(acc.max(0.0))
}

/// `S(ρ) = -Tr ρ log ρ`
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    -rho.eigenvalues()
        .iter()
        .filter(|&&l| l > tol::VN_EIGEN_FLOOR)
        .map(|&l| l * l.log2())
        .sum::<f64>()
}

/// `S(A|B) = S(ρ_AB) - S(ρ_B)`; negative for entangled states.
pub fn conditional_vn(rho_ab: &BipartiteState) -> f64 {
    von_neumann_entropy(rho_ab.state()) - von_neumann_entropy(&rho_ab.reduced_b())
}

/// Entropy of the subsystem that survives tracing out `traced`.
pub fn reduced_entropy(rho_ab: &BipartiteState, traced: Subsystem) -> f64 {
    match traced {
        Subsystem::A => von_neumann_entropy(&rho_ab.reduced_b()),
        Subsystem::B => von_neumann_entropy(&rho_ab.reduced_a()),
    }
}
