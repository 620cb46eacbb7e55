//! States, observables and projective (von Neumann) measurement statistics,
//! including two-time sequential measurements and local measurements on one
//! half of a bipartite state.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::infotheory::{sanitize_probabilities, Distribution};
use crate::numkernel::{
    eig_hermitian, kron, partial_trace, ComplexMatrix, EigenSystem, Subsystem, I, ONE, ZERO,
};
use crate::spin::{wigner_small_d, SpinLabel};
use crate::tol;

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > tol::HERMITIAN {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {deviation:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - ONE).norm() > tol::TRACE {
            return Err(Error::InvalidState(format!("trace is {trace}, not 1")));
        }
        let state = Self::from_trusted(matrix);
        if let Some(&lowest) = state.eigenvalues.first() {
            if lowest < -tol::PSD {
                return Err(Error::InvalidState(format!(
                    "negative eigenvalue {lowest:e}"
                )));
            }
        }
        Ok(state)
    }

    /// For matrices that are valid by construction (partial traces,
    /// measurement updates); only re-symmetrizes.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        let matrix = matrix.hermitian_part();
        let eigenvalues = eig_hermitian(&matrix)
            .expect("Hermitian part of a square matrix")
            .eigenvalues;
        Self {
            matrix,
            eigenvalues,
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// `|ψ><ψ|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState(
                "zero or non-finite state vector".into(),
            ));
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::from_trusted(ComplexMatrix::outer(&unit, &unit)))
    }

    /// `Σ w_k ρ_k` for weights summing to one.
    pub fn mixture(components: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let d = first.1.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (w, rho) in components {
            if rho.dim() != d {
                return Err(Error::DimensionMismatch {
                    context: "DensityMatrix::mixture",
                    expected: d,
                    found: rho.dim(),
                });
            }
            if *w < 0.0 {
                return Err(Error::InvalidState(format!("negative mixture weight {w}")));
            }
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        Self::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// `Tr(ρ A)`
    pub fn expectation(&self, a: &ComplexMatrix) -> Complex64 {
        self.matrix.trace_product(a)
    }

    /// `U ρ U†`
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> DensityMatrix {
        Self::from_trusted(u.matmul(&self.matrix).matmul(&u.adjoint()))
    }
}

/// Label of a measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    /// Doubled magnetic quantum number `2m` of a spin component.
    TwiceM(i32),
    /// Eigenvalue of a general observable.
    Value(f64),
    /// Abstract outcome index (hidden-variable response functions).
    Index(usize),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Outcome::TwiceM(tm) if tm % 2 == 0 => write!(f, "{}", tm / 2),
            Outcome::TwiceM(tm) => write!(f, "{tm}/2"),
            Outcome::Value(v) => write!(f, "{v}"),
            Outcome::Index(k) => write!(f, "#{k}"),
        }
    }
}

/// Hermitian operator with its spectral projectors.
///
/// Eigenvalues within [`tol::DEGENERACY`] of each other share one outcome
/// whose projector is the sum of the rank-1 projectors of the cluster.
/// Outcomes are ordered by ascending eigenvalue.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
    spectrum: EigenSystem,
    outcomes: Vec<Outcome>,
    projectors: Vec<ComplexMatrix>,
    /// Indices into `spectrum` for each outcome.
    clusters: Vec<Vec<usize>>,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let spectrum = eig_hermitian(&matrix)?;
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (k, &lambda) in spectrum.eigenvalues.iter().enumerate() {
            match clusters.last_mut() {
                Some(cluster)
                    if lambda - spectrum.eigenvalues[*cluster.last().unwrap()]
                        <= tol::DEGENERACY =>
                {
                    cluster.push(k)
                }
                _ => clusters.push(vec![k]),
            }
        }
        let d = matrix.rows();
        let projectors = clusters
            .iter()
            .map(|cluster| {
                cluster.iter().fold(ComplexMatrix::zeros(d, d), |acc, &k| {
                    let v = spectrum.eigenvector(k);
                    &acc + &ComplexMatrix::outer(&v, &v)
                })
            })
            .collect();
        let outcomes = clusters
            .iter()
            .map(|cluster| {
                let mean = cluster
                    .iter()
                    .map(|&k| spectrum.eigenvalues[k])
                    .sum::<f64>()
                    / cluster.len() as f64;
                Outcome::Value(mean)
            })
            .collect();
        Ok(Self {
            matrix,
            spectrum,
            outcomes,
            projectors,
            clusters,
        })
    }

    /// A spin component: every eigenvalue must be a magnetic quantum number
    /// of `spin`, and outcomes are labelled by `2m` exactly.
    pub fn spin_component(matrix: ComplexMatrix, spin: SpinLabel) -> Result<Self> {
        if matrix.rows() != spin.dim() {
            return Err(Error::DimensionMismatch {
                context: "Observable::spin_component",
                expected: spin.dim(),
                found: matrix.rows(),
            });
        }
        let mut obs = Self::new(matrix)?;
        let labels = obs
            .outcomes
            .iter()
            .map(|o| {
                let Outcome::Value(v) = *o else {
                    unreachable!()
                };
                let twice = (2.0 * v).round();
                if (2.0 * v - twice).abs() > 1e-8 || spin.index_of(twice as i32).is_none() {
                    return Err(Error::InvalidSpin(format!(
                        "eigenvalue {v} is not a magnetic quantum number of spin {spin}"
                    )));
                }
                Ok(Outcome::TwiceM(twice as i32))
            })
            .collect::<Result<Vec<_>>>()?;
        obs.outcomes = labels;
        Ok(obs)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &EigenSystem {
        &self.spectrum
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn n_outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.clusters.iter().any(|c| c.len() > 1)
    }

    /// Orthonormal eigenbasis, one column per eigenvalue (ascending).
    pub fn eigenbasis(&self) -> &ComplexMatrix {
        &self.spectrum.eigenvectors
    }
}

pub mod pauli {
    use super::*;

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![ZERO, -I, I, ZERO])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    /// `cos θ σ_z + sin θ σ_x`
    pub fn xz_axis(theta: f64) -> ComplexMatrix {
        let (s, c) = theta.sin_cos();
        &z().scale_real(c) + &x().scale_real(s)
    }
}

/// Probabilities `P(a, b)` on the outcome grid of two measurements.
///
/// Row index `a` refers to `labels_a` (the earlier / conditioning
/// measurement), column `b` to `labels_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    labels_a: Vec<Outcome>,
    labels_b: Vec<Outcome>,
    p: Vec<f64>,
}

impl JointDistribution {
    /// Entries in `[-1e-12, 0)` are clamped to zero; a total off by more
    /// than `1e-10` is rejected.
    pub fn new(labels_a: Vec<Outcome>, labels_b: Vec<Outcome>, mut p: Vec<f64>) -> Result<Self> {
        if p.len() != labels_a.len() * labels_b.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} entries for a {}x{} outcome grid",
                p.len(),
                labels_a.len(),
                labels_b.len()
            )));
        }
        sanitize_probabilities(&mut p)?;
        Ok(Self {
            labels_a,
            labels_b,
            p,
        })
    }

    /// Unlabelled joint from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_a = rows.len();
        let n_b = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_b) {
            return Err(Error::InvalidDistribution("ragged rows".into()));
        }
        Self::new(
            (0..n_a).map(Outcome::Index).collect(),
            (0..n_b).map(Outcome::Index).collect(),
            rows.concat(),
        )
    }

    pub fn labels_a(&self) -> &[Outcome] {
        &self.labels_a
    }

    pub fn labels_b(&self) -> &[Outcome] {
        &self.labels_b
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.labels_a.len(), self.labels_b.len())
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.p[a * self.labels_b.len() + b]
    }

    pub fn entries(&self) -> &[f64] {
        &self.p
    }

    pub fn row(&self, a: usize) -> &[f64] {
        let n_b = self.labels_b.len();
        &self.p[a * n_b..(a + 1) * n_b]
    }

    pub fn marginal_a(&self) -> Vec<f64> {
        (0..self.labels_a.len())
            .map(|a| self.row(a).iter().sum())
            .collect()
    }

    pub fn marginal_b(&self) -> Vec<f64> {
        let (n_a, n_b) = self.shape();
        (0..n_b)
            .map(|b| (0..n_a).map(|a| self.get(a, b)).sum())
            .collect()
    }

    /// Swaps the roles of the two measurements.
    pub fn transposed(&self) -> Self {
        let (n_a, n_b) = self.shape();
        let mut p = Vec::with_capacity(self.p.len());
        for b in 0..n_b {
            for a in 0..n_a {
                p.push(self.get(a, b));
            }
        }
        Self {
            labels_a: self.labels_b.clone(),
            labels_b: self.labels_a.clone(),
            p,
        }
    }
}

fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        });
    }
    Ok(())
}

/// Born probabilities `p_k = Tr[ρ Π_k]`.
pub fn measure_distribution(rho: &DensityMatrix, obs: &Observable) -> Result<Distribution> {
    check_dim("measure_distribution", rho.dim(), obs.dim())?;
    let p = obs
        .projectors()
        .iter()
        .map(|pi| rho.expectation(pi).re)
        .collect();
    Distribution::new(p)
}

/// Two-time statistics `P(a, b) = Tr[Π_a ρ Π_a Π_b]` of measuring `first`
/// and then `second` on the collapsed state.
pub fn sequential_joint(
    rho: &DensityMatrix,
    first: &Observable,
    second: &Observable,
) -> Result<JointDistribution> {
    check_dim("sequential_joint (first)", rho.dim(), first.dim())?;
    check_dim("sequential_joint (second)", rho.dim(), second.dim())?;
    let mut p = Vec::with_capacity(first.n_outcomes() * second.n_outcomes());
    for pa in first.projectors() {
        let collapsed = pa.matmul(rho.matrix()).matmul(pa);
        for pb in second.projectors() {
            p.push(collapsed.trace_product(pb).re);
        }
    }
    JointDistribution::new(first.outcomes().to_vec(), second.outcomes().to_vec(), p)
}

/// Closed form of the rotor's sequential statistics on `ρ = I/(2s+1)`:
/// `P(m0, m) = |d^s_{m m0}(angle)|² / (2s+1)`.
///
/// Outcomes are ordered by ascending `m` on both axes, matching
/// [`Observable`] ordering.
pub fn sequential_joint_spin(spin: SpinLabel, angle: f64) -> JointDistribution {
    let d = spin.dim();
    let w = wigner_small_d(spin, angle);
    let norm = 1.0 / d as f64;
    // ascending index i <-> descending basis index d-1-i
    let mut p = Vec::with_capacity(d * d);
    for i0 in 0..d {
        for i in 0..d {
            let x = w.at(d - 1 - i, d - 1 - i0);
            p.push(x * x * norm);
        }
    }
    let labels: Vec<Outcome> = (0..d)
        .rev()
        .map(|k| Outcome::TwiceM(spin.twice_m(k)))
        .collect();
    JointDistribution::new(labels.clone(), labels, p)
        .expect("squared orthogonal matrix rows sum to one")
}

/// Density matrix on `C^{d_A} ⊗ C^{d_B}`.
#[derive(Debug, Clone)]
pub struct BipartiteState {
    dims: (usize, usize),
    state: DensityMatrix,
}

impl BipartiteState {
    pub fn new(state: DensityMatrix, dims: (usize, usize)) -> Result<Self> {
        check_dim("BipartiteState", dims.0 * dims.1, state.dim())?;
        Ok(Self { dims, state })
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        Self {
            dims: (a.dim(), b.dim()),
            state: DensityMatrix::from_trusted(kron(a.matrix(), b.matrix())),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    /// `ρ_A = Tr_B ρ_AB`
    pub fn reduced_a(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(
            partial_trace(self.matrix(), Subsystem::B, self.dims).expect("dims checked"),
        )
    }

    /// `ρ_B = Tr_A ρ_AB`
    pub fn reduced_b(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(
            partial_trace(self.matrix(), Subsystem::A, self.dims).expect("dims checked"),
        )
    }
}

/// `Σ_x (Π_x ⊗ I_B) ρ_AB (Π_x ⊗ I_B)` for a measurement on subsystem A.
pub fn post_measurement_bipartite(
    rho_ab: &BipartiteState,
    obs_on_a: &Observable,
) -> Result<BipartiteState> {
    let (d_a, d_b) = rho_ab.dims;
    check_dim("post_measurement_bipartite", d_a, obs_on_a.dim())?;
    let id_b = ComplexMatrix::identity(d_b);
    let n = d_a * d_b;
    let mut acc = ComplexMatrix::zeros(n, n);
    for pi in obs_on_a.projectors() {
        let lifted = kron(pi, &id_b);
        acc = &acc + &lifted.matmul(rho_ab.matrix()).matmul(&lifted);
    }
    Ok(BipartiteState {
        dims: rho_ab.dims,
        state: DensityMatrix::from_trusted(acc),
    })
}

/// Maximally entangled `|Φ> = d^{-1/2} Σ_k |k>|k>`.
pub fn bell_state(d: usize) -> Result<BipartiteState> {
    if d < 2 {
        return Err(Error::InvalidConfig {
            field: "d",
            message: format!("Bell state needs local dimension >= 2, got {d}"),
        });
    }
    let mut phi = vec![ZERO; d * d];
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for k in 0..d {
        phi[k * d + k] = amp;
    }
    Ok(BipartiteState {
        dims: (d, d),
        state: DensityMatrix::pure(&phi)?,
    })
}
