//! Block-positivity by see-saw over product vectors, operator classification and
//! sampling probes for map positivity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{hermitian_eigen, min_eigenvalue};
use crate::error::{Error, Result};
use crate::matrix::{BipartiteDims, ComplexMatrix, C64, HERMITIAN_TOL, ZERO};
use crate::random::{haar_vector, random_pure_state, seeded_rng, stream_rng};
use crate::witness::MapOperator;

pub const PSD_TOL: f64 = 1e-10;
pub const BLOCK_POSITIVE_TOL: f64 = 1e-8;
pub const VIOLATION_TOL: f64 = 1e-6;
const PROBE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeeSawConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub conv_tol: f64,
    pub seed: u64,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        Self { restarts: 50, max_iters: 200, conv_tol: 1e-12, seed: 0 }
    }
}

impl SeeSawConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidSpec("restarts and max_iters must be positive".into()));
        }
        if !(self.conv_tol > 0.0 && self.conv_tol.is_finite()) {
            return Err(Error::InvalidSpec(format!("conv_tol must be positive, got {}", self.conv_tol)));
        }
        Ok(())
    }
}

/// Best product vector found. `history` holds the objective after every
/// half-step of the winning restart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeeSawResult {
    pub value: f64,
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub restart: usize,
    pub iterations: usize,
    pub history: Vec<f64>,
}

/// `A(y)_ij = <i (x) y| W |j (x) y>`.
fn reduce_second(w: &ComplexMatrix, dims: BipartiteDims, y: &[C64]) -> ComplexMatrix {
    let d2 = dims.d2;
    ComplexMatrix::from_fn(dims.d1, dims.d1, |i, j| {
        let mut s = ZERO;
        for k in 0..d2 {
            let row = w.row(i * d2 + k);
            let mut inner = ZERO;
            for (l, yl) in y.iter().enumerate() {
                inner += row[j * d2 + l] * yl;
            }
            s += y[k].conj() * inner;
        }
        s
    })
}

/// `B(x)_kl = <x (x) k| W |x (x) l>`.
fn reduce_first(w: &ComplexMatrix, dims: BipartiteDims, x: &[C64]) -> ComplexMatrix {
    let d2 = dims.d2;
    ComplexMatrix::from_fn(d2, d2, |k, l| {
        let mut s = ZERO;
        for (i, xi) in x.iter().enumerate() {
            let row = w.row(i * d2 + k);
            let mut inner = ZERO;
            for (j, xj) in x.iter().enumerate() {
                inner += row[j * d2 + l] * xj;
            }
            s += xi.conj() * inner;
        }
        s
    })
}

/// Lowest eigenpair of a small Hermitian matrix, exactly Hermitized first.
fn lowest(m: &ComplexMatrix) -> Result<(f64, Vec<C64>)> {
    let h = (m + &m.dagger()).scale_real(0.5);
    let e = hermitian_eigen(&h)?;
    Ok((e.values[0], e.vector(0)))
}

fn run_restart(w: &ComplexMatrix, dims: BipartiteDims, cfg: &SeeSawConfig, restart: usize) -> Result<SeeSawResult> {
    let mut rng = stream_rng(cfg.seed, restart as u64);
    let mut y = haar_vector(&mut rng, dims.d2);
    let mut x;
    let mut history = Vec::with_capacity(2 * cfg.max_iters);
    let mut prev = f64::INFINITY;
    let mut value;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let (vx, nx) = lowest(&reduce_second(w, dims, &y))?;
        x = nx;
        history.push(vx);
        let (vy, ny) = lowest(&reduce_first(w, dims, &x))?;
        y = ny;
        history.push(vy);
        value = vy;
        if prev - value < cfg.conv_tol || iterations >= cfg.max_iters {
            break;
        }
        prev = value;
    }
    Ok(SeeSawResult { value, x, y, restart, iterations, history })
}

/// Smallest `<x (x) y| W |x (x) y>` over unit vectors found by alternating exact
/// minimisation, best over `cfg.restarts` seeded restarts. An upper bound on the
/// true minimum.
pub fn min_product_expectation(w: &ComplexMatrix, dims: BipartiteDims, cfg: &SeeSawConfig) -> Result<SeeSawResult> {
    cfg.validate()?;
    if !w.is_square() || w.rows() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on {}x{}",
            w.rows(),
            w.cols(),
            dims.d1,
            dims.d2
        )));
    }
    let dev = w.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let runs = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(w, dims, cfg, r))
        .collect::<Result<Vec<_>>>()?;
    runs.into_iter()
        .reduce(|best, r| if r.value < best.value { r } else { best })
        .ok_or_else(|| Error::Internal("no see-saw restarts".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessLabel {
    PositiveSemidefinite,
    ProperWitness,
    NotBlockPositive,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessClass {
    pub label: WitnessLabel,
    pub min_eig: f64,
    pub min_product_value: f64,
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub config: SeeSawConfig,
}

/// `positive-semidefinite` if `min_eig >= -1e-10`; otherwise `proper-witness`
/// when the see-saw stays above `-1e-8`, `not-block-positive` below `-1e-6`,
/// `inconclusive` in between. Only the negative outcome is a certificate.
pub fn classify(w: &ComplexMatrix, dims: BipartiteDims, cfg: &SeeSawConfig) -> Result<WitnessClass> {
    let min_eig = min_eigenvalue(w)?;
    let ss = min_product_expectation(w, dims, cfg)?;
    let v = ss.value;
    let label = if min_eig >= -PSD_TOL {
        if v < -BLOCK_POSITIVE_TOL {
            return Err(Error::Internal(format!(
                "product value {v:.3e} below minimal eigenvalue {min_eig:.3e}"
            )));
        }
        WitnessLabel::PositiveSemidefinite
    } else if v >= -BLOCK_POSITIVE_TOL {
        WitnessLabel::ProperWitness
    } else if v < -VIOLATION_TOL {
        WitnessLabel::NotBlockPositive
    } else {
        WitnessLabel::Inconclusive
    };
    Ok(WitnessClass { label, min_eig, min_product_value: v, x: ss.x, y: ss.y, config: *cfg })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub samples: usize,
    pub seed: u64,
    /// Smallest eigenvalue of any `Phi(P)`.
    pub worst_min_eig: f64,
    /// `1/(d-1)`.
    pub purity_bound: f64,
    pub max_purity: f64,
    pub min_purity: f64,
    pub worst_trace_defect: f64,
    pub passed: bool,
}

impl ProbeReport {
    /// `max_purity - 1/(d-1)`, nonpositive when the ball criterion holds.
    pub fn purity_margin(&self) -> f64 {
        self.max_purity - self.purity_bound
    }
}

/// Applies `phi` to `samples` random rank-one projectors and records the worst
/// positivity, purity and trace margins.
pub fn map_positivity_probe(phi: &MapOperator, samples: usize, seed: u64) -> Result<ProbeReport> {
    let d = phi.dim();
    if d < 2 {
        return Err(Error::InvalidSpec("map dimension must be at least 2".into()));
    }
    let mut rng = seeded_rng(seed);
    let purity_bound = 1.0 / (d - 1) as f64;
    let mut worst_min_eig = f64::INFINITY;
    let mut max_purity = f64::NEG_INFINITY;
    let mut min_purity = f64::INFINITY;
    let mut worst_trace_defect: f64 = 0.0;
    for _ in 0..samples {
        let p = random_pure_state(&mut rng, d);
        let out = phi.apply(&p)?;
        let out = (&out + &out.dagger()).scale_real(0.5);
        worst_min_eig = worst_min_eig.min(min_eigenvalue(&out)?);
        let pur = out.trace_product(&out)?.re;
        max_purity = max_purity.max(pur);
        min_purity = min_purity.min(pur);
        worst_trace_defect = worst_trace_defect.max((out.trace() - 1.0).norm());
    }
    let passed = samples > 0
        && worst_min_eig >= -PROBE_TOL
        && max_purity <= purity_bound + PROBE_TOL
        && worst_trace_defect <= PROBE_TOL;
    Ok(ProbeReport { samples, seed, worst_min_eig, purity_bound, max_purity, min_purity, worst_trace_defect, passed })
}
