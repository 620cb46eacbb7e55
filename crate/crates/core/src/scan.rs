//! `(θ, φ)` grid scans of the witness `M_s`, bound-check sweeps, and the
//! CSV/JSON formats the `teur` binary writes.
//!
//! Grids use inclusive linspaces on both axes and are stored row-major with
//! θ as the outer index. Rows are computed on a bounded rayon pool and
//! written into a preallocated grid, so the output never depends on the
//! worker count.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{berta_check, m_witness, mu_check};
use crate::error::{Error, Result};
use crate::lhsmodel::theorem_sweep;
use crate::quantum::Observable;
use crate::random::{
    derive_seed, random_bipartite, random_density_matrix, random_observable, rng_from_seed,
};
use crate::spin::{spin_operators, SpinLabel};
use crate::tol;

/// Consulted for the worker count when `threads` is 0.
pub const THREADS_ENV: &str = "TEUR_THREADS";

/// Largest Hilbert-space dimension accepted by [`run_checks`].
pub const MAX_CHECK_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidConfig {
                field: "format",
                message: format!("expected csv or json, got {other:?}"),
            }),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub twice_s: u32,
    pub theta_min: f64,
    pub theta_max: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub resolution: usize,
    pub format: OutputFormat,
    /// `None` writes to stdout.
    pub output: Option<PathBuf>,
    /// 0 selects [`THREADS_ENV`] or the rayon default.
    pub threads: usize,
}

impl Default for ScanConfig {
    /// One full period on both axes at 101 points: `M_s` is 2π-periodic.
    fn default() -> Self {
        let tau = 2.0 * std::f64::consts::PI;
        Self {
            twice_s: 1,
            theta_min: 0.0,
            theta_max: tau,
            phi_min: 0.0,
            phi_max: tau,
            resolution: 101,
            format: OutputFormat::Csv,
            output: None,
            threads: 0,
        }
    }
}

fn invalid(field: &'static str, message: impl Into<String>) -> Error {
    Error::InvalidConfig {
        field,
        message: message.into(),
    }
}

impl ScanConfig {
    pub fn for_spin(spin: SpinLabel) -> Self {
        Self {
            twice_s: spin.twice_s(),
            ..Self::default()
        }
    }

    pub fn spin(&self) -> Result<SpinLabel> {
        SpinLabel::from_twice(self.twice_s).map_err(|e| invalid("spin", e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.spin()?;
        if self.resolution < 2 {
            return Err(invalid(
                "resolution",
                format!("need at least 2 points per axis, got {}", self.resolution),
            ));
        }
        for (field, lo, hi) in [
            ("theta_range", self.theta_min, self.theta_max),
            ("phi_range", self.phi_min, self.phi_max),
        ] {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(invalid(
                    field,
                    format!("bounds must be finite, got {lo}:{hi}"),
                ));
            }
            if hi <= lo {
                return Err(invalid(
                    field,
                    format!("max must exceed min, got {lo}:{hi}"),
                ));
            }
        }
        Ok(())
    }

    /// Applies one `key=value` setting. Unknown keys are an error.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "spin" => {
                let spin: SpinLabel = value
                    .parse()
                    .map_err(|e: Error| invalid("spin", e.to_string()))?;
                self.twice_s = spin.twice_s();
            }
            "twice_s" => self.twice_s = parse_field("twice_s", value)?,
            "res" | "resolution" => self.resolution = parse_field("resolution", value)?,
            "theta_range" => (self.theta_min, self.theta_max) = parse_range("theta_range", value)?,
            "phi_range" => (self.phi_min, self.phi_max) = parse_range("phi_range", value)?,
            "theta_min" => self.theta_min = parse_angle("theta_min", value)?,
            "theta_max" => self.theta_max = parse_angle("theta_max", value)?,
            "phi_min" => self.phi_min = parse_angle("phi_min", value)?,
            "phi_max" => self.phi_max = parse_angle("phi_max", value)?,
            "format" => self.format = value.parse()?,
            "out" | "output" => self.output = Some(PathBuf::from(value)),
            "threads" => self.threads = parse_field("threads", value)?,
            _ => return Err(Error::Parse(format!("unknown scan setting {key:?}"))),
        }
        Ok(())
    }

    pub fn is_key(key: &str) -> bool {
        matches!(
            key,
            "spin"
                | "twice_s"
                | "res"
                | "resolution"
                | "theta_range"
                | "phi_range"
                | "theta_min"
                | "theta_max"
                | "phi_min"
                | "phi_max"
                | "format"
                | "out"
                | "output"
                | "threads"
        )
    }

    /// `key=value` lines that [`ScanConfig::set`] reads back unchanged.
    pub fn to_key_values(&self) -> String {
        let spin = self
            .spin()
            .map(|s| s.to_string())
            .unwrap_or_else(|_| format!("{}/2", self.twice_s));
        let mut out = format!(
            "spin={spin}\nresolution={}\ntheta_min={:?}\ntheta_max={:?}\nphi_min={:?}\nphi_max={:?}\nformat={}\nthreads={}\n",
            self.resolution, self.theta_min, self.theta_max, self.phi_min, self.phi_max, self.format, self.threads
        );
        if let Some(path) = &self.output {
            out.push_str(&format!("out={}\n", path.display()));
        }
        out
    }
}

fn parse_field<T: FromStr>(field: &'static str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e: T::Err| invalid(field, format!("{value:?}: {e}")))
}

/// Reads `1.5`, `pi`, `2pi`, `-pi/2` or `3pi/4`.
pub fn parse_angle(field: &'static str, value: &str) -> Result<f64> {
    let v = value.trim().to_ascii_lowercase();
    let bad = || invalid(field, format!("not an angle: {value:?}"));
    let Some(pos) = v.find("pi") else {
        return v.parse::<f64>().map_err(|_| bad());
    };
    let (coef, rest) = (&v[..pos], &v[pos + 2..]);
    let coef = match coef.trim_end_matches('*') {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let div = match rest {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(bad)?,
    };
    Ok(coef * std::f64::consts::PI / div)
}

/// Reads `a:b`.
pub fn parse_range(field: &'static str, value: &str) -> Result<(f64, f64)> {
    let (a, b) = value
        .split_once(':')
        .ok_or_else(|| invalid(field, format!("expected min:max, got {value:?}")))?;
    Ok((parse_angle(field, a)?, parse_angle(field, b)?))
}

/// Parses a `key=value` file. Blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("line {}: expected key=value, got {raw:?}", n + 1))
        })?;
        out.push((k.trim().replace('-', "_"), v.trim().to_string()));
    }
    Ok(out)
}

/// `n` points from `lo` to `hi`, both included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

pub fn effective_threads(requested: usize) -> usize {
    if requested > 0 {
        return requested;
    }
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(effective_threads(threads))
        .build()
        .map_err(|e| invalid("threads", e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub config: ScanConfig,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// Row-major, θ outer.
    pub grid: Vec<f64>,
    pub negative_fraction: f64,
    pub min_value: f64,
    pub argmin: (f64, f64),
}

impl ScanResult {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.grid[i * self.phi.len() + j]
    }

    pub fn resolution(&self) -> usize {
        self.theta.len()
    }

    pub fn negative_count(&self) -> usize {
        self.grid.iter().filter(|&&v| v < -tol::VIOLATION).count()
    }
}

pub fn run_scan(cfg: &ScanConfig) -> Result<ScanResult> {
    cfg.validate()?;
    let spin = cfg.spin()?;
    let n = cfg.resolution;
    let theta = linspace(cfg.theta_min, cfg.theta_max, n);
    let phi = linspace(cfg.phi_min, cfg.phi_max, n);

    let mut grid = vec![0.0; n * n];
    pool(cfg.threads)?.install(|| {
        grid.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = m_witness(spin, theta[i], phi[j]);
            }
        })
    });

    let mut best = 0;
    for (k, &v) in grid.iter().enumerate() {
        if v < grid[best] {
            best = k;
        }
    }
    let negatives = grid.iter().filter(|&&v| v < -tol::VIOLATION).count();
    Ok(ScanResult {
        config: cfg.clone(),
        negative_fraction: negatives as f64 / (n * n) as f64,
        min_value: grid[best],
        argmin: (theta[best / n], phi[best % n]),
        theta,
        phi,
        grid,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonConfig {
    pub spin: String,
    pub twice_s: u32,
    pub theta_min: f64,
    pub theta_max: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonSummary {
    pub negative_fraction: f64,
    pub min_value: f64,
    pub argmin_theta: f64,
    pub argmin_phi: f64,
}

/// The JSON document: config, axes, flat grid and summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanDocument {
    pub config: JsonConfig,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub grid: Vec<f64>,
    pub summary: JsonSummary,
}

impl ScanDocument {
    pub fn from_result(r: &ScanResult) -> Result<Self> {
        let c = &r.config;
        Ok(Self {
            config: JsonConfig {
                spin: c.spin()?.to_string(),
                twice_s: c.twice_s,
                theta_min: c.theta_min,
                theta_max: c.theta_max,
                phi_min: c.phi_min,
                phi_max: c.phi_max,
                resolution: c.resolution,
            },
            theta: r.theta.clone(),
            phi: r.phi.clone(),
            grid: r.grid.clone(),
            summary: JsonSummary {
                negative_fraction: r.negative_fraction,
                min_value: r.min_value,
                argmin_theta: r.argmin.0,
                argmin_phi: r.argmin.1,
            },
        })
    }
}

/// One CSV number: 12 significant digits in scientific notation.
pub fn format_value(v: f64) -> String {
    format!("{v:.11e}")
}

pub const CSV_HEADER: &str = "theta,phi,m";

pub fn write_csv(r: &ScanResult, w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for (i, &t) in r.theta.iter().enumerate() {
        for (j, &p) in r.phi.iter().enumerate() {
            writeln!(
                w,
                "{},{},{}",
                format_value(t),
                format_value(p),
                format_value(r.value(i, j))
            )?;
        }
    }
    Ok(())
}

pub fn write_json(r: &ScanResult, w: &mut impl Write) -> Result<()> {
    let doc = ScanDocument::from_result(r)?;
    serde_json::to_writer_pretty(&mut *w, &doc).map_err(|e| Error::Io(e.into()))?;
    writeln!(w)?;
    Ok(())
}

pub fn render(r: &ScanResult, format: OutputFormat) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        OutputFormat::Csv => write_csv(r, &mut buf)?,
        OutputFormat::Json => write_json(r, &mut buf)?,
    }
    Ok(buf)
}

/// Writes the result to `cfg.output`, or stdout when unset.
pub fn emit(r: &ScanResult, cfg: &ScanConfig) -> Result<()> {
    let bytes = render(r, cfg.format)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

/// `(theta, phi, m)` rows of a CSV scan.
pub fn parse_csv(text: &str) -> Result<Vec<(f64, f64, f64)>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => {
            return Err(Error::Parse(format!(
                "expected header {CSV_HEADER:?}, got {other:?}"
            )))
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, line)| {
            let cols: Vec<&str> = line.split(',').collect();
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: bad number {s:?}", n + 1)))
            };
            match cols.as_slice() {
                [t, p, m] => Ok((num(t)?, num(p)?, num(m)?)),
                _ => Err(Error::Parse(format!("row {}: expected 3 columns", n + 1))),
            }
        })
        .collect()
}

pub fn parse_json(text: &str) -> Result<ScanDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Mu,
    Berta,
    Theorem,
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mu" => Ok(Self::Mu),
            "berta" => Ok(Self::Berta),
            "theorem" => Ok(Self::Theorem),
            other => Err(invalid(
                "kind",
                format!("unsupported check {other:?}; expected mu, berta or theorem"),
            )),
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Mu => "mu",
            Self::Berta => "berta",
            Self::Theorem => "theorem",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckSummary {
    pub kind: CheckKind,
    pub trials: usize,
    pub dim: usize,
    pub seed: u64,
    pub min_slack: f64,
    pub violations: usize,
}

impl CheckSummary {
    pub fn exit_code(&self) -> i32 {
        if self.violations == 0 {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for CheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check={} dim={} trials={} seed={} min_slack={:.6e} violations={} result={}",
            self.kind,
            self.dim,
            self.trials,
            self.seed,
            self.min_slack,
            self.violations,
            if self.violations == 0 {
                "ok"
            } else {
                "VIOLATED"
            }
        )
    }
}

/// `S_x` and `S_z` of spin `(dim - 1)/2`: a nondegenerate pair in any dimension.
pub fn spin_pair(dim: usize) -> Result<(Observable, Observable)> {
    let spin = SpinLabel::from_twice(dim as u32 - 1)?;
    let ops = spin_operators(spin);
    Ok((
        Observable::spin_component(ops.x, spin)?,
        Observable::spin_component(ops.z, spin)?,
    ))
}

fn fold_slacks(slacks: &[f64]) -> (f64, usize) {
    let min = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    let violations = slacks.iter().filter(|&&s| s < -tol::VIOLATION).count();
    (min, violations)
}

/// Random sweep of one bound. Trial `i` draws from `derive_seed(seed, i)`.
///
/// * `mu`: random state and random nondegenerate pair on `C^dim`.
/// * `berta`: random state on `C^dim ⊗ C^dim`, random pair on the first factor.
/// * `theorem`: random LHS ensembles against `S_x`, `S_z` of spin `(dim-1)/2`.
pub fn run_checks(kind: CheckKind, trials: usize, dim: usize, seed: u64) -> Result<CheckSummary> {
    if !(2..=MAX_CHECK_DIM).contains(&dim) {
        return Err(invalid(
            "dim",
            format!("expected 2..={MAX_CHECK_DIM}, got {dim}"),
        ));
    }
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    let (min_slack, violations) = match kind {
        CheckKind::Theorem => {
            let (x, z) = spin_pair(dim)?;
            let s = theorem_sweep(dim, trials, &x, &z, seed)?;
            (s.min_slack, s.violations)
        }
        CheckKind::Mu | CheckKind::Berta => {
            let slacks = (0..trials as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = rng_from_seed(derive_seed(seed, i));
                    let report = if kind == CheckKind::Mu {
                        let rho = random_density_matrix(dim, &mut rng);
                        let x = random_observable(dim, &mut rng);
                        let z = random_observable(dim, &mut rng);
                        mu_check(&rho, &x, &z)?
                    } else {
                        let rho = random_bipartite(dim, dim, &mut rng);
                        let x = random_observable(dim, &mut rng);
                        let z = random_observable(dim, &mut rng);
                        berta_check(&rho, &x, &z)?
                    };
                    Ok(report.slack)
                })
                .collect::<Result<Vec<f64>>>()?;
            fold_slacks(&slacks)
        }
    };
    Ok(CheckSummary {
        kind,
        trials,
        dim,
        seed,
        min_slack,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn small(twice_s: u32, resolution: usize) -> ScanConfig {
        ScanConfig {
            twice_s,
            resolution,
            ..ScanConfig::default()
        }
    }

    #[test]
    fn linspace_includes_endpoints() {
        let v = linspace(0.0, 2.0 * PI, 101);
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[100], 2.0 * PI);
        assert_eq!(linspace(-1.0, 1.0, 2), vec![-1.0, 1.0]);
    }

    #[test]
    fn corner_scan_matches_direct_calls() {
        let r = run_scan(&small(1, 2)).unwrap();
        assert_eq!(r.grid.len(), 4);
        let spin = SpinLabel::half();
        for (i, &t) in [0.0, 2.0 * PI].iter().enumerate() {
            for (j, &p) in [0.0, 2.0 * PI].iter().enumerate() {
                assert_eq!(r.value(i, j), m_witness(spin, t, p));
            }
        }
    }

    #[test]
    fn qubit_scan_minimum_at_origin() {
        let r = run_scan(&small(1, 21)).unwrap();
        assert!((r.min_value + 1.0).abs() < 1e-12);
        assert_eq!(r.argmin, (0.0, 0.0));
        assert!(r.negative_fraction > 0.0);
    }

    #[test]
    fn validation_names_the_field() {
        let field = |cfg: ScanConfig| match cfg.validate() {
            Err(Error::InvalidConfig { field, .. }) => field,
            other => panic!("expected InvalidConfig, got {other:?}"),
        };
        assert_eq!(field(small(1, 1)), "resolution");
        assert_eq!(field(small(0, 11)), "spin");
        assert_eq!(field(small(41, 11)), "spin");
        let mut c = small(1, 11);
        c.theta_max = c.theta_min;
        assert_eq!(field(c), "theta_range");
        let mut c = small(1, 11);
        c.phi_min = 1.0;
        c.phi_max = 0.5;
        assert_eq!(field(c), "phi_range");
        let mut c = small(1, 11);
        c.phi_max = f64::NAN;
        assert_eq!(field(c), "phi_range");
    }

    #[test]
    fn angles_and_ranges() {
        assert_eq!(parse_angle("x", "pi").unwrap(), PI);
        assert_eq!(parse_angle("x", "2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("x", "-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("x", "3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("x", "0.25").unwrap(), 0.25);
        assert!(parse_angle("x", "pi/0").is_err());
        assert!(parse_angle("x", "tau").is_err());
        assert_eq!(parse_range("r", "0:2pi").unwrap(), (0.0, 2.0 * PI));
        assert!(parse_range("r", "0-1").is_err());
    }

    #[test]
    fn key_values_round_trip() {
        let mut cfg = small(3, 17);
        cfg.theta_min = -0.1;
        cfg.format = OutputFormat::Json;
        cfg.output = Some(PathBuf::from("grid.json"));
        let mut back = ScanConfig::default();
        for (k, v) in parse_key_values(&cfg.to_key_values()).unwrap() {
            back.set(&k, &v).unwrap();
        }
        assert_eq!(back, cfg);

        let kv = parse_key_values("# comment\n\ntheta-range = 0:pi  # trailing\n").unwrap();
        assert_eq!(kv, vec![("theta_range".to_string(), "0:pi".to_string())]);
        assert!(parse_key_values("novalue").is_err());
        assert!(ScanConfig::default().set("colour", "red").is_err());
    }

    #[test]
    fn csv_layout() {
        let r = run_scan(&small(1, 2)).unwrap();
        let text = String::from_utf8(render(&r, OutputFormat::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "theta,phi,m");
        assert_eq!(lines[1], "0.00000000000e0,0.00000000000e0,-1.00000000000e0");
        assert!(lines[2].starts_with("0.00000000000e0,6.28318530718e0,"));
        let rows = parse_csv(&text).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0], (0.0, 0.0, -1.0));
    }

    #[test]
    fn csv_round_trip_reproduces_text() {
        let r = run_scan(&small(2, 7)).unwrap();
        let text = String::from_utf8(render(&r, OutputFormat::Csv).unwrap()).unwrap();
        let rows = parse_csv(&text).unwrap();
        let mut again = String::from("theta,phi,m\n");
        for (t, p, m) in rows {
            again.push_str(&format!(
                "{},{},{}\n",
                format_value(t),
                format_value(p),
                format_value(m)
            ));
        }
        assert_eq!(again, text);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = run_scan(&small(3, 9)).unwrap();
        let text = String::from_utf8(render(&r, OutputFormat::Json).unwrap()).unwrap();
        let doc = parse_json(&text).unwrap();
        assert_eq!(doc.grid, r.grid);
        assert_eq!(doc.theta, r.theta);
        assert_eq!(doc.config.spin, "3/2");
        assert_eq!(doc.summary.min_value, r.min_value);
        assert!(parse_json("{\"grid\": []}").is_err());
    }

    #[test]
    fn thread_count_does_not_change_grid() {
        let mut one = small(2, 15);
        one.threads = 1;
        let mut four = one.clone();
        four.threads = 4;
        assert_eq!(run_scan(&one).unwrap().grid, run_scan(&four).unwrap().grid);
    }

    #[test]
    fn check_kinds() {
        assert_eq!("MU".parse::<CheckKind>().unwrap(), CheckKind::Mu);
        assert!("robertson".parse::<CheckKind>().is_err());
        for kind in [CheckKind::Mu, CheckKind::Berta, CheckKind::Theorem] {
            let s = run_checks(kind, 20, 2, 1).unwrap();
            assert_eq!(s.exit_code(), 0, "{s}");
            assert!(s.to_string().contains("result=ok"));
        }
        assert!(run_checks(CheckKind::Mu, 10, 1, 0).is_err());
        assert!(run_checks(CheckKind::Mu, 0, 2, 0).is_err());
    }

    #[test]
    fn spin_pair_is_nondegenerate() {
        for dim in 2..=5 {
            let (x, z) = spin_pair(dim).unwrap();
            assert!(!x.is_degenerate() && !z.is_degenerate());
            assert_eq!(x.n_outcomes(), dim);
        }
    }
}
