//! Uncertainty relations and the temporal-memory witness.
//!
//! Every check returns a [`BoundReport`] comparing a left-hand side against
//! its lower bound. Entropic quantities are in bits.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::infotheory::{conditional_entropy, conditional_vn, shannon};
use crate::quantum::{
    measure_distribution, post_measurement_bipartite, sequential_joint, sequential_joint_spin,
    BipartiteState, DensityMatrix, JointDistribution, Observable,
};
use crate::spin::{spin_operators, SpinLabel, MAX_TWICE_SPIN};
use crate::tol;

/// `lhs >= rhs` together with its slack `lhs - rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
}

impl BoundReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            lhs,
            rhs,
            slack,
            satisfied: slack >= -tol::VIOLATION,
        }
    }

    pub fn violated(&self) -> bool {
        !self.satisfied
    }
}

/// `c(X, Z) = max_{x,z} |<x|z>|` over the eigenbases.
pub fn max_overlap_c(x: &Observable, z: &Observable) -> Result<f64> {
    if x.dim() != z.dim() {
        return Err(Error::DimensionMismatch {
            context: "max_overlap_c",
            expected: x.dim(),
            found: z.dim(),
        });
    }
    if x.is_degenerate() || z.is_degenerate() {
        return Err(Error::DegenerateObservable);
    }
    let overlaps = x.eigenbasis().adjoint().matmul(z.eigenbasis());
    Ok(overlaps.max_abs().min(1.0))
}

/// `-2 log2 c(X, Z)`
pub fn mu_bound(x: &Observable, z: &Observable) -> Result<f64> {
    Ok(-2.0 * max_overlap_c(x, z)?.log2())
}

fn check_dims(context: &'static str, expected: usize, found: &[usize]) -> Result<()> {
    match found.iter().find(|&&d| d != expected) {
        Some(&d) => Err(Error::DimensionMismatch {
            context,
            expected,
            found: d,
        }),
        None => Ok(()),
    }
}

/// `(ΔX)(ΔZ) >= |<[X, Z]>| / 2`. Not an entropic quantity; always holds.
pub fn robertson_check(rho: &DensityMatrix, x: &Observable, z: &Observable) -> Result<BoundReport> {
    check_dims("robertson_check", rho.dim(), &[x.dim(), z.dim()])?;
    let std_dev = |a: &Observable| {
        let m = a.matrix();
        let mean = rho.expectation(m).re;
        let second = rho.expectation(&m.matmul(m)).re;
        (second - mean * mean).max(0.0).sqrt()
    };
    let lhs = std_dev(x) * std_dev(z);
    let rhs = 0.5 * rho.expectation(&x.matrix().commutator(z.matrix())).norm();
    Ok(BoundReport::new(lhs, rhs))
}

/// Maassen–Uffink: `H(X) + H(Z) >= -2 log2 c(X, Z)`.
pub fn mu_check(rho: &DensityMatrix, x: &Observable, z: &Observable) -> Result<BoundReport> {
    let rhs = mu_bound(x, z)?;
    let lhs = shannon(&measure_distribution(rho, x)?) + shannon(&measure_distribution(rho, z)?);
    Ok(BoundReport::new(lhs, rhs))
}

/// Quantum-memory bound: `S(X|B) + S(Z|B) >= -2 log2 c(X, Z) + S(A|B)`,
/// with `X`, `Z` measured on subsystem A.
pub fn berta_check(rho_ab: &BipartiteState, x: &Observable, z: &Observable) -> Result<BoundReport> {
    let rhs = mu_bound(x, z)? + conditional_vn(rho_ab);
    let after_x = post_measurement_bipartite(rho_ab, x)?;
    let after_z = post_measurement_bipartite(rho_ab, z)?;
    let lhs = conditional_vn(&after_x) + conditional_vn(&after_z);
    Ok(BoundReport::new(lhs, rhs))
}

/// Floor on `H(X|X0) + H(Z|Z0)` when earlier measurements of `X0`, `Z0`
/// act as a temporal memory:
///
/// `max[0, -2 log2 c(X, Z) - min(H(X), H(X0)) - min(H(Z), H(Z0))]`
///
/// The marginal entropies are those of each observable measured directly
/// on `rho`.
pub fn conditioned_bound(
    rho: &DensityMatrix,
    x0: &Observable,
    x: &Observable,
    z0: &Observable,
    z: &Observable,
) -> Result<BoundReport> {
    check_dims(
        "conditioned_bound",
        rho.dim(),
        &[x0.dim(), x.dim(), z0.dim(), z.dim()],
    )?;
    let entropy = |o: &Observable| measure_distribution(rho, o).map(|p| shannon(&p));
    let h_min_x = entropy(x)?.min(entropy(x0)?);
    let h_min_z = entropy(z)?.min(entropy(z0)?);
    let rhs = (mu_bound(x, z)? - h_min_x - h_min_z).max(0.0);

    let lhs = conditional_entropy(&sequential_joint(rho, x0, x)?)
        + conditional_entropy(&sequential_joint(rho, z0, z)?);
    Ok(BoundReport::new(lhs, rhs))
}

/// Temporal entropic steering inequality `H(X|X0) + H(Z|Z0) >= -2 log2 c`.
///
/// Holds for every classical (hidden-state) model of the two sequential
/// contexts, so a violation certifies quantum temporal memory.
pub fn steering_witness(
    jx: &JointDistribution,
    jz: &JointDistribution,
    c: f64,
) -> Result<BoundReport> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::InvalidConfig {
            field: "c",
            message: format!("overlap must lie in (0, 1], got {c}"),
        });
    }
    let lhs = conditional_entropy(jx) + conditional_entropy(jz);
    Ok(BoundReport::new(lhs, -2.0 * c.log2()))
}

/// Conditional entropy of the rotor's sequential `S_z(t)` outcomes for a
/// dimensionless time separation `angle` (starting from `I/(2s+1)`).
pub fn rotor_conditional_entropy(spin: SpinLabel, angle: f64) -> f64 {
    conditional_entropy(&sequential_joint_spin(spin, angle))
}

/// `c(S_x, S_z)` for spin `s`, computed once per spin.
pub fn spin_overlap_c(spin: SpinLabel) -> f64 {
    static CACHE: [OnceLock<f64>; MAX_TWICE_SPIN as usize + 1] =
        [const { OnceLock::new() }; MAX_TWICE_SPIN as usize + 1];
    *CACHE[spin.twice_s() as usize].get_or_init(|| {
        let ops = spin_operators(spin);
        let sx = Observable::spin_component(ops.x, spin).expect("S_x has spin eigenvalues");
        let sz = Observable::spin_component(ops.z, spin).expect("S_z has spin eigenvalues");
        max_overlap_c(&sx, &sz).expect("spin components are nondegenerate")
    })
}

/// `M_s(θ, φ) = H(θ) + H(φ) + 2 log2 c(S_x, S_z)`.
///
/// Negative values mean the temporally conditioned entropies of `S_x` and
/// `S_z` beat the Maassen–Uffink bound.
pub fn m_witness(spin: SpinLabel, theta: f64, phi: f64) -> f64 {
    rotor_conditional_entropy(spin, theta)
        + rotor_conditional_entropy(spin, phi)
        + 2.0 * spin_overlap_c(spin).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infotheory::binary_entropy;
    use crate::numkernel::{ComplexMatrix, I, ONE, ZERO};
    use crate::quantum::{bell_state, pauli};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, PI};

    fn obs(m: ComplexMatrix) -> Observable {
        Observable::new(m).unwrap()
    }

    fn qubit_joint(angle: f64, later: ComplexMatrix, prior_offset: f64) -> JointDistribution {
        sequential_joint(
            &DensityMatrix::maximally_mixed(2),
            &obs(pauli::xz_axis(angle + prior_offset)),
            &obs(later),
        )
        .unwrap()
    }

    #[test]
    fn overlap_examples() {
        let c = max_overlap_c(&obs(pauli::x()), &obs(pauli::z())).unwrap();
        assert_abs_diff_eq!(c, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            max_overlap_c(&obs(pauli::x()), &obs(pauli::x())).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let one = SpinLabel::from_twice(2).unwrap();
        assert_abs_diff_eq!(spin_overlap_c(one), FRAC_1_SQRT_2, epsilon = 1e-14);
        // c(S_x, S_z) = max |d^s(π/2)|: s = 3/2 gives sqrt(3)/(2 sqrt 2)
        let three_halves = SpinLabel::from_twice(3).unwrap();
        assert_abs_diff_eq!(
            spin_overlap_c(three_halves),
            3f64.sqrt() / 8f64.sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn overlap_rejects_degenerate_and_mismatched() {
        let deg = obs(ComplexMatrix::identity(2));
        assert!(matches!(
            max_overlap_c(&deg, &obs(pauli::z())),
            Err(Error::DegenerateObservable)
        ));
        assert!(matches!(
            max_overlap_c(
                &obs(ComplexMatrix::diagonal(&[ONE, ZERO, -ONE])),
                &obs(pauli::z())
            ),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn robertson_examples() {
        let up = DensityMatrix::pure(&[ONE, ZERO]).unwrap();
        let r = robertson_check(&up, &obs(pauli::x()), &obs(pauli::z())).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rhs, 0.0, epsilon = 1e-15);

        let y_plus = DensityMatrix::pure(&[ONE, I]).unwrap();
        let r = robertson_check(&y_plus, &obs(pauli::x()), &obs(pauli::z())).unwrap();
        assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.rhs, 1.0, epsilon = 1e-14);
        assert!(r.satisfied);

        let r = robertson_check(
            &DensityMatrix::maximally_mixed(2),
            &obs(pauli::x()),
            &obs(pauli::z()),
        )
        .unwrap();
        assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rhs, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn mu_examples() {
        let r = mu_check(
            &DensityMatrix::maximally_mixed(2),
            &obs(pauli::x()),
            &obs(pauli::z()),
        )
        .unwrap();
        assert_abs_diff_eq!(r.lhs, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.rhs, 1.0, epsilon = 1e-14);

        let x_plus = DensityMatrix::pure(&[ONE, ONE]).unwrap();
        let r = mu_check(&x_plus, &obs(pauli::x()), &obs(pauli::z())).unwrap();
        assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-12);
        assert!(r.satisfied);
    }

    #[test]
    fn berta_examples() {
        let r = berta_check(&bell_state(2).unwrap(), &obs(pauli::x()), &obs(pauli::z())).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r.rhs, 0.0, epsilon = 1e-10);

        let mixed = BipartiteState::new(DensityMatrix::maximally_mixed(4), (2, 2)).unwrap();
        let r = berta_check(&mixed, &obs(pauli::x()), &obs(pauli::z())).unwrap();
        assert_abs_diff_eq!(r.lhs, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rhs, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn berta_reduces_to_mu_for_product_states() {
        let a = DensityMatrix::new(ComplexMatrix::from_vec(
            2,
            2,
            vec![
                ONE * 0.7,
                Complex64::new(0.1, 0.2),
                Complex64::new(0.1, -0.2),
                ONE * 0.3,
            ],
        ))
        .unwrap();
        let b = DensityMatrix::new(ComplexMatrix::from_real(2, 2, &[0.6, 0.2, 0.2, 0.4])).unwrap();
        let (x, z) = (obs(pauli::x()), obs(pauli::xz_axis(0.4)));
        let berta = berta_check(&BipartiteState::product(&a, &b), &x, &z).unwrap();
        let mu = mu_check(&a, &x, &z).unwrap();
        // S(X|B) = H(X) and S(A|B) = S(ρ_A) for product states
        let s_a = crate::infotheory::von_neumann_entropy(&a);
        assert_abs_diff_eq!(berta.lhs, mu.lhs, epsilon = 1e-12);
        assert_abs_diff_eq!(berta.rhs, mu.rhs + s_a, epsilon = 1e-12);
        assert_abs_diff_eq!(berta.slack + s_a, mu.slack, epsilon = 1e-12);
    }

    #[test]
    fn conditioned_bound_qubit_example() {
        let rho = DensityMatrix::maximally_mixed(2);
        for &(theta, phi) in &[(0.3, 1.4), (2.0, 0.1), (0.0, 0.0)] {
            let r = conditioned_bound(
                &rho,
                &obs(pauli::xz_axis(theta + FRAC_PI_2)),
                &obs(pauli::x()),
                &obs(pauli::xz_axis(phi)),
                &obs(pauli::z()),
            )
            .unwrap();
            let expected = binary_entropy((theta / 2.0).cos().powi(2)).unwrap()
                + binary_entropy((phi / 2.0).cos().powi(2)).unwrap();
            assert_abs_diff_eq!(r.lhs, expected, epsilon = 1e-12);
            assert_eq!(r.rhs, 0.0);
            assert!(r.satisfied);
        }
    }

    #[test]
    fn steering_witness_examples() {
        let c = FRAC_1_SQRT_2;
        let jx = qubit_joint(FRAC_PI_3, pauli::x(), FRAC_PI_2);
        let jz = qubit_joint(FRAC_PI_3, pauli::z(), 0.0);
        let r = steering_witness(&jx, &jz, c).unwrap();
        assert_abs_diff_eq!(r.lhs, 1.6225562489182657, epsilon = 1e-12);
        assert!(r.satisfied);

        let jx = qubit_joint(0.0, pauli::x(), FRAC_PI_2);
        let jz = qubit_joint(0.0, pauli::z(), 0.0);
        let r = steering_witness(&jx, &jz, c).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-12);
        assert!(r.violated());

        assert!(steering_witness(&jx, &jz, 0.0).is_err());
        assert!(steering_witness(&jx, &jz, 1.5).is_err());
    }

    #[test]
    fn m_witness_spin_half() {
        let half = SpinLabel::half();
        assert_abs_diff_eq!(m_witness(half, 0.0, 0.0), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m_witness(half, FRAC_PI_2, FRAC_PI_2), 1.0, epsilon = 1e-12);
        for &theta in &[0.2f64, 1.0, 2.2, 3.0] {
            let h = binary_entropy((theta / 2.0).cos().powi(2)).unwrap();
            assert_abs_diff_eq!(
                m_witness(half, theta, theta),
                2.0 * h - 1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn m_witness_symmetries() {
        for ts in 1..=4 {
            let s = SpinLabel::from_twice(ts).unwrap();
            for &(t, p) in &[(0.4, 1.3), (2.5, 0.2), (5.1, 3.3)] {
                let m = m_witness(s, t, p);
                assert_abs_diff_eq!(m, m_witness(s, p, t), epsilon = 1e-12);
                assert_abs_diff_eq!(m, m_witness(s, -t, p), epsilon = 1e-12);
                assert_abs_diff_eq!(m, m_witness(s, 2.0 * PI - t, p), epsilon = 1e-12);
            }
            assert!(m_witness(s, 0.0, 0.0) < 0.0);
        }
    }
}
