//! Spin-s angular momentum: operators, Wigner small-d matrices and the
//! rotor observable `S_z(t)` under `H = ω S_y`.
//!
//! Basis convention: index `k` of every `(2s+1)`-dimensional matrix is the
//! state `|s, m>` with `m = s - k`, i.e. rows run from `m = s` down to
//! `m = -s`. Half-integer quantum numbers are carried as doubled integers.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::{ComplexMatrix, ZERO};

/// Largest supported `2s`. Factorials up to `(2s)!` must stay well inside f64.
pub const MAX_TWICE_SPIN: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinLabel {
    twice_s: u32,
}

impl SpinLabel {
    pub fn from_twice(twice_s: u32) -> Result<Self> {
        if twice_s == 0 {
            return Err(Error::InvalidSpin("spin must be positive".into()));
        }
        if twice_s > MAX_TWICE_SPIN {
            return Err(Error::InvalidSpin(format!(
                "2s = {twice_s} exceeds the supported maximum {MAX_TWICE_SPIN}"
            )));
        }
        Ok(Self { twice_s })
    }

    pub fn half() -> Self {
        Self { twice_s: 1 }
    }

    pub fn twice_s(self) -> u32 {
        self.twice_s
    }

    pub fn s(self) -> f64 {
        f64::from(self.twice_s) / 2.0
    }

    pub fn dim(self) -> usize {
        self.twice_s as usize + 1
    }

    /// Doubled magnetic quantum number of basis index `k`.
    pub fn twice_m(self, k: usize) -> i32 {
        self.twice_s as i32 - 2 * k as i32
    }

    /// Basis index of the doubled magnetic quantum number `twice_m`.
    pub fn index_of(self, twice_m: i32) -> Option<usize> {
        let ts = self.twice_s as i32;
        if twice_m.abs() > ts || (ts - twice_m) % 2 != 0 {
            return None;
        }
        Some(((ts - twice_m) / 2) as usize)
    }

    /// `2m` for `m = s, s-1, ..., -s`.
    pub fn twice_ms(self) -> impl Iterator<Item = i32> {
        (0..self.dim()).map(move |k| self.twice_m(k))
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_s.is_multiple_of(2) {
            write!(f, "{}", self.twice_s / 2)
        } else {
            write!(f, "{}/2", self.twice_s)
        }
    }
}

/// Accepts `3/2`, `1`, `1.5` or `0.5`.
impl FromStr for SpinLabel {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::InvalidSpin(format!("cannot parse `{text}` as a spin"));
        let twice = if let Some((num, den)) = text.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            let den: u32 = den.trim().parse().map_err(|_| bad())?;
            match den {
                1 => num.checked_mul(2).ok_or_else(bad)?,
                2 => num,
                _ => return Err(bad()),
            }
        } else if let Ok(n) = text.parse::<u32>() {
            n.checked_mul(2).ok_or_else(bad)?
        } else {
            let x: f64 = text.parse().map_err(|_| bad())?;
            let t = 2.0 * x;
            if !t.is_finite() || t < 0.0 || (t - t.round()).abs() > 1e-12 {
                return Err(bad());
            }
            t.round() as u32
        };
        Self::from_twice(twice)
    }
}

#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
}

/// `S_x, S_y, S_z` (ħ = 1) in the `|s, m>` basis, built from the ladder
/// elements `<m+1|S_+|m> = sqrt(s(s+1) - m(m+1))`.
pub fn spin_operators(spin: SpinLabel) -> SpinOperators {
    let d = spin.dim();
    let ts = spin.twice_s as f64;
    let mut plus = ComplexMatrix::zeros(d, d);
    for k in 1..d {
        let tm = spin.twice_m(k) as f64;
        // s(s+1) - m(m+1) = (2s(2s+2) - 2m(2m+2)) / 4
        let amp = ((ts * (ts + 2.0) - tm * (tm + 2.0)) / 4.0).sqrt();
        plus[(k - 1, k)] = Complex64::new(amp, 0.0);
    }
    let minus = plus.adjoint();
    let x = (&plus + &minus).scale_real(0.5);
    let y = (&plus - &minus).scale(Complex64::new(0.0, -0.5));
    let z = ComplexMatrix::diagonal(
        &spin
            .twice_ms()
            .map(|tm| Complex64::new(f64::from(tm) / 2.0, 0.0))
            .collect::<Vec<_>>(),
    );
    SpinOperators { x, y, z }
}

/// Real `(2s+1) x (2s+1)` matrix of `d^s_{m'm}(θ) = <s,m'| exp(-iθ S_y) |s,m>`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerD {
    spin: SpinLabel,
    angle: f64,
    matrix: Vec<f64>,
}

impl WignerD {
    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    /// Entry at basis indices `(row, col)`, i.e. `m' = s - row`, `m = s - col`.
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.dim() + col]
    }

    /// `d^s_{m'm}` addressed by doubled quantum numbers.
    pub fn element(&self, twice_m_prime: i32, twice_m: i32) -> Option<f64> {
        let r = self.spin.index_of(twice_m_prime)?;
        let c = self.spin.index_of(twice_m)?;
        Some(self.at(r, c))
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |r, c| Complex64::new(self.at(r, c), 0.0))
    }

    pub fn matmul(&self, other: &WignerD) -> Vec<f64> {
        let d = self.dim();
        assert_eq!(d, other.dim());
        let mut out = vec![0.0; d * d];
        for r in 0..d {
            for c in 0..d {
                out[r * d + c] = (0..d).map(|k| self.at(r, k) * other.at(k, c)).sum();
            }
        }
        out
    }

    pub fn entries(&self) -> &[f64] {
        &self.matrix
    }
}

const FACTORIALS: [f64; MAX_TWICE_SPIN as usize + 1] = {
    let mut table = [1.0; MAX_TWICE_SPIN as usize + 1];
    let mut n = 1;
    while n < table.len() {
        table[n] = table[n - 1] * n as f64;
        n += 1;
    }
    table
};

fn factorial(n: i32) -> f64 {
    FACTORIALS[n as usize]
}

/// Neumaier-compensated sum, for the alternating Wigner series.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for t in terms {
        let next = sum + t;
        if sum.abs() >= t.abs() {
            carry += (sum - next) + t;
        } else {
            carry += (t - next) + sum;
        }
        sum = next;
    }
    sum + carry
}

/// Explicit Wigner sum for a single element, all arguments doubled.
fn small_d_element(twice_j: i32, twice_mp: i32, twice_m: i32, cos_half: f64, sin_half: f64) -> f64 {
    let j_plus_mp = (twice_j + twice_mp) / 2;
    let j_minus_mp = (twice_j - twice_mp) / 2;
    let j_plus_m = (twice_j + twice_m) / 2;
    let j_minus_m = (twice_j - twice_m) / 2;
    let mp_minus_m = (twice_mp - twice_m) / 2;

    let prefactor =
        (factorial(j_plus_mp) * factorial(j_minus_mp) * factorial(j_plus_m) * factorial(j_minus_m))
            .sqrt();

    let k_min = 0.max(-mp_minus_m);
    let k_max = j_plus_m.min(j_minus_mp);
    let terms = (k_min..=k_max).map(|k| {
        let sign = if (k + mp_minus_m) % 2 == 0 { 1.0 } else { -1.0 };
        let denom = factorial(j_plus_m - k)
            * factorial(k)
            * factorial(j_minus_mp - k)
            * factorial(k + mp_minus_m);
        let cos_pow = twice_j - 2 * k - mp_minus_m;
        let sin_pow = 2 * k + mp_minus_m;
        sign / denom * cos_half.powi(cos_pow) * sin_half.powi(sin_pow)
    });
    prefactor * compensated_sum(terms)
}

pub fn wigner_small_d(spin: SpinLabel, theta: f64) -> WignerD {
    let d = spin.dim();
    let tj = spin.twice_s as i32;
    let (sin_half, cos_half) = (theta / 2.0).sin_cos();
    let mut matrix = vec![0.0; d * d];
    for r in 0..d {
        for c in 0..d {
            matrix[r * d + c] =
                small_d_element(tj, spin.twice_m(r), spin.twice_m(c), cos_half, sin_half);
        }
    }
    WignerD {
        spin,
        angle: theta,
        matrix,
    }
}

/// `S_z(t) = S_z cos(ωt) + S_x sin(ωt)`.
pub fn evolved_sz(spin: SpinLabel, omega_t: f64) -> ComplexMatrix {
    let ops = spin_operators(spin);
    let (sin, cos) = omega_t.sin_cos();
    let mut out = ops.z.scale_real(cos);
    let sx = ops.x.scale_real(sin);
    for r in 0..spin.dim() {
        for c in 0..spin.dim() {
            out[(r, c)] += sx[(r, c)];
            if out[(r, c)].norm() == 0.0 {
                out[(r, c)] = ZERO;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{expm_skew_hermitian, I};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn spin(ts: u32) -> SpinLabel {
        SpinLabel::from_twice(ts).unwrap()
    }

    #[test]
    fn parse_spin_labels() {
        assert_eq!("1/2".parse::<SpinLabel>().unwrap().twice_s(), 1);
        assert_eq!("3/2".parse::<SpinLabel>().unwrap().twice_s(), 3);
        assert_eq!("2".parse::<SpinLabel>().unwrap().twice_s(), 4);
        assert_eq!("1.5".parse::<SpinLabel>().unwrap().twice_s(), 3);
        assert_eq!("4/1".parse::<SpinLabel>().unwrap().twice_s(), 8);
        for bad in ["0", "1/3", "0.3", "-1", "abc", "", "21"] {
            assert!(
                bad.parse::<SpinLabel>().is_err(),
                "{bad} should be rejected"
            );
        }
        assert_eq!(spin(3).to_string(), "3/2");
        assert_eq!(spin(4).to_string(), "2");
    }

    #[test]
    fn magnetic_numbers_descend() {
        let s = spin(3);
        assert_eq!(s.twice_ms().collect::<Vec<_>>(), vec![3, 1, -1, -3]);
        assert_eq!(s.index_of(-1), Some(2));
        assert_eq!(s.index_of(0), None);
        assert_eq!(s.index_of(5), None);
    }

    #[test]
    fn spin_half_is_pauli_over_two() {
        let ops = spin_operators(SpinLabel::half());
        let z = ComplexMatrix::from_real(2, 2, &[0.5, 0.0, 0.0, -0.5]);
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let y = ComplexMatrix::from_vec(2, 2, vec![ZERO, -I * 0.5, I * 0.5, ZERO]);
        assert!(ops.z.approx_eq(&z, 1e-15));
        assert!(ops.x.approx_eq(&x, 1e-15));
        assert!(ops.y.approx_eq(&y, 1e-15));
    }

    #[test]
    fn spin_one_ladder_construction() {
        let ops = spin_operators(spin(2));
        let h = FRAC_1_SQRT_2;
        let x = ComplexMatrix::from_real(3, 3, &[0.0, h, 0.0, h, 0.0, h, 0.0, h, 0.0]);
        assert!(ops.x.approx_eq(&x, 1e-15));
        let z = ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        assert!(ops.z.approx_eq(&z, 1e-15));
    }

    #[test]
    fn angular_momentum_algebra() {
        for ts in 1..=10 {
            let s = spin(ts);
            let ops = spin_operators(s);
            assert!(ops.z.trace().norm() < 1e-14);
            let comm = ops.x.commutator(&ops.y);
            assert!(comm.approx_eq(&ops.z.scale(I), 1e-12));
            let casimir = &(&ops.x.matmul(&ops.x) + &ops.y.matmul(&ops.y)) + &ops.z.matmul(&ops.z);
            let ss1 = s.s() * (s.s() + 1.0);
            assert!(casimir.approx_eq(&ComplexMatrix::identity(s.dim()).scale_real(ss1), 1e-12));
        }
    }

    #[test]
    fn wigner_at_zero_is_identity() {
        for ts in 1..=8 {
            let d = wigner_small_d(spin(ts), 0.0);
            assert!(d
                .to_complex()
                .approx_eq(&ComplexMatrix::identity(ts as usize + 1), 0.0));
        }
    }

    #[test]
    fn wigner_spin_half_closed_form() {
        for &theta in &[0.3, 1.0, 2.5, -0.7, 5.9] {
            let d = wigner_small_d(SpinLabel::half(), theta);
            let (s, c) = (theta / 2.0).sin_cos();
            let expected = [c, -s, s, c];
            for (a, b) in d.entries().iter().zip(expected) {
                assert!((a - b).abs() < 1e-15);
            }
            let oracle = expm_skew_hermitian(&spin_operators(SpinLabel::half()).y, theta).unwrap();
            assert!(d.to_complex().approx_eq(&oracle, 1e-14));
        }
    }

    #[test]
    fn wigner_spin_one_quarter_turn() {
        let d = wigner_small_d(spin(2), FRAC_PI_2);
        assert!(d.element(0, 0).unwrap().abs() < 1e-15);
        for (r, c) in [(0, 0), (0, 2), (2, 0), (2, 2)] {
            assert!((d.at(r, c).abs() - 0.5).abs() < 1e-15);
        }
        for (r, c) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
            assert!((d.at(r, c).abs() - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        let oracle = expm_skew_hermitian(&spin_operators(spin(2)).y, FRAC_PI_2).unwrap();
        assert!(d.to_complex().approx_eq(&oracle, 1e-14));
    }

    #[test]
    fn evolved_sz_endpoints() {
        let s = spin(3);
        let ops = spin_operators(s);
        assert!(evolved_sz(s, 0.0).approx_eq(&ops.z, 0.0));
        assert!(evolved_sz(s, FRAC_PI_2).approx_eq(&ops.x, 1e-15));
        assert!(evolved_sz(s, PI).approx_eq(&ops.z.scale_real(-1.0), 1e-15));
    }

    #[test]
    fn evolved_sz_matches_rotation() {
        // U S_z U† with U = exp(-iωt S_y) is the closed form S_z cos + S_x sin.
        for ts in 1..=6 {
            let s = spin(ts);
            let ops = spin_operators(s);
            for &wt in &[0.37, 1.9, -2.2, 4.4] {
                let u = expm_skew_hermitian(&ops.y, wt).unwrap();
                let rotated = u.matmul(&ops.z).matmul(&u.adjoint());
                assert!(rotated.approx_eq(&evolved_sz(s, wt), 1e-12));
            }
        }
    }
}
