use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use temporal_eur::bounds::{
    conditioned_bound, m_witness, max_overlap_c, mu_bound, robertson_check, spin_overlap_c,
    steering_witness,
};
use temporal_eur::quantum::{pauli, sequential_joint_spin, DensityMatrix, Observable};
use temporal_eur::random::{derive_seed, random_density_matrix, random_observable, rng_from_seed};
use temporal_eur::scan::{run_checks, spin_pair, CheckKind};
use temporal_eur::spin::SpinLabel;

fn spins() -> impl Iterator<Item = SpinLabel> {
    (1..=4).map(|t| SpinLabel::from_twice(t).unwrap())
}

#[test]
fn mu_sweep_small_dims() {
    for dim in 2..=5 {
        let s = run_checks(CheckKind::Mu, 500, dim, 101).unwrap();
        assert_eq!(s.violations, 0, "{s}");
    }
}

#[test]
fn berta_sweep_small_dims() {
    for dim in 2..=3 {
        let s = run_checks(CheckKind::Berta, 200, dim, 202).unwrap();
        assert_eq!(s.violations, 0, "{s}");
    }
}

#[test]
fn robertson_holds_on_random_draws() {
    for i in 0..300 {
        let mut rng = rng_from_seed(derive_seed(303, i));
        let dim = 2 + (i % 4) as usize;
        let rho = random_density_matrix(dim, &mut rng);
        let x = random_observable(dim, &mut rng);
        let z = random_observable(dim, &mut rng);
        assert!(!robertson_check(&rho, &x, &z).unwrap().violated());
    }
}

#[test]
fn conditioned_bound_on_random_qutrits() {
    for i in 0..300 {
        let mut rng = rng_from_seed(derive_seed(404, i));
        let rho = random_density_matrix(3, &mut rng);
        let [x0, x, z0, z] = [(); 4].map(|_| random_observable(3, &mut rng));
        let r = conditioned_bound(&rho, &x0, &x, &z0, &z).unwrap();
        assert!(!r.violated(), "trial {i}: {r:?}");
    }
}

#[test]
fn qubit_conditioned_lhs_is_witness_plus_floor() {
    let rho = DensityMatrix::maximally_mixed(2);
    let (x, z) = (
        Observable::new(pauli::x()).unwrap(),
        Observable::new(pauli::z()).unwrap(),
    );
    let floor = mu_bound(&x, &z).unwrap();
    for k in 0..25 {
        for l in 0..25 {
            let (theta, phi) = (k as f64 * 0.26, l as f64 * 0.26);
            let x0 = Observable::new(pauli::xz_axis(theta + FRAC_PI_2)).unwrap();
            let z0 = Observable::new(pauli::xz_axis(phi)).unwrap();
            let r = conditioned_bound(&rho, &x0, &x, &z0, &z).unwrap();
            assert!(!r.violated());
            let m = m_witness(SpinLabel::half(), theta, phi);
            assert!(
                (r.lhs - floor - m).abs() < 1e-12,
                "({theta}, {phi}): {} vs {m}",
                r.lhs - floor
            );
        }
    }
}

#[test]
fn witness_at_origin_is_twice_log_overlap() {
    for spin in spins() {
        let (x, z) = spin_pair(spin.dim()).unwrap();
        let c = max_overlap_c(&x, &z).unwrap();
        assert!((spin_overlap_c(spin) - c).abs() < 1e-12);
        let m0 = m_witness(spin, 0.0, 0.0);
        assert!((m0 - 2.0 * c.log2()).abs() < 1e-12, "{spin}: {m0}");
        assert!(m0 < 0.0);
    }
    assert!((m_witness(SpinLabel::half(), 0.0, 0.0) + 1.0).abs() < 1e-12);
}

#[test]
fn quantum_joints_beat_the_steering_bound() {
    let j = sequential_joint_spin(SpinLabel::half(), 0.0);
    let r = steering_witness(&j, &j, std::f64::consts::FRAC_1_SQRT_2).unwrap();
    assert!(r.violated());
    assert!((r.slack + 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn witness_symmetries(twice_s in 1u32..=4, theta in -7.0f64..7.0, phi in -7.0f64..7.0) {
        let spin = SpinLabel::from_twice(twice_s).unwrap();
        let m = m_witness(spin, theta, phi);
        prop_assert!((m - m_witness(spin, phi, theta)).abs() < 1e-12);
        prop_assert!((m - m_witness(spin, -theta, phi)).abs() < 1e-12);
        prop_assert!((m - m_witness(spin, 2.0 * PI - theta, phi)).abs() < 1e-12);
    }

    #[test]
    fn witness_is_steering_slack(twice_s in 1u32..=4, theta in -7.0f64..7.0, phi in -7.0f64..7.0) {
        let spin = SpinLabel::from_twice(twice_s).unwrap();
        let jx = sequential_joint_spin(spin, theta);
        let jz = sequential_joint_spin(spin, phi);
        let r = steering_witness(&jx, &jz, spin_overlap_c(spin)).unwrap();
        prop_assert!((r.slack - m_witness(spin, theta, phi)).abs() < 1e-12);
    }
}

#[test]
fn conditioned_bound_with_positive_floor() {
    // pure states aligned with X0 and Z0 keep the marginal entropies low
    let mut nontrivial = 0;
    for i in 0..300 {
        let mut rng = rng_from_seed(derive_seed(505, i));
        let [x0, x, z0, z] = [(); 4].map(|_| random_observable(3, &mut rng));
        let k = (i % 3) as usize;
        let rho = DensityMatrix::pure(&x0.eigenbasis().column(k)).unwrap();
        let r = conditioned_bound(&rho, &x0, &x, &z0, &z).unwrap();
        assert!(!r.violated(), "trial {i}: {r:?}");
        if r.rhs > 1e-6 {
            nontrivial += 1;
        }
    }
    assert!(nontrivial > 0);
}
