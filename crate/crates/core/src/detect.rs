//! State certification: PPT and realignment tests, witness expectations, purity
//! and tomography relative to a complete MUB family, and torus scans for d = 3.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::min_eigenvalue;
use crate::error::{Error, Result};
use crate::matrix::{partial_transpose, realignment_value, BipartiteDims, ComplexMatrix, Subsystem, C64, HERMITIAN_TOL};
use crate::mub::MubFamily;
use crate::witness::{witness_d3_closed_form, TorusPoint};

/// Witness values below `-DETECTION_TOL` count as detection.
pub const DETECTION_TOL: f64 = 1e-10;
/// Smallest eigenvalue of `rho^Gamma` still accepted as PPT.
pub const PPT_TOL: f64 = 1e-10;
const STATE_TOL: f64 = 1e-10;
const BALL_TOL: f64 = 1e-12;
pub const DEFAULT_GRID: usize = 24;

/// The 3x3 PPT entangled state: 1/15 times an integer matrix with diagonal
/// (1,2,2, 2,1,2, 2,2,1), ones linking |00>, |11>, |22> and minus ones between
/// |01>,|12>,|20> and |02>,|10>,|21>.
pub fn canonical_rho() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(9, 9);
    for (i, v) in [1.0, 2.0, 2.0, 2.0, 1.0, 2.0, 2.0, 2.0, 1.0].into_iter().enumerate() {
        m[(i, i)] = v.into();
    }
    for i in [0, 4, 8] {
        for j in [0, 4, 8] {
            m[(i, j)] = 1.0.into();
        }
    }
    for (i, j) in [(1, 5), (1, 6), (2, 3), (2, 7), (3, 7), (5, 6)] {
        m[(i, j)] = (-1.0).into();
        m[(j, i)] = (-1.0).into();
    }
    m.scale_real(1.0 / 15.0)
}

pub fn maximally_mixed(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n).scale_real(1.0 / n as f64)
}

/// `|phi+><phi+|` with `|phi+> = sum_i |ii> / sqrt(d)`.
pub fn maximally_entangled(d: usize) -> ComplexMatrix {
    let mut v = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    }
    ComplexMatrix::projector(&v)
}

/// Hermitian, unit trace and positive semidefinite within `1e-10`.
pub fn validate_state(rho: &ComplexMatrix) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::InvalidState(format!("{}x{} is not square", rho.rows(), rho.cols())));
    }
    if !rho.is_hermitian() {
        return Err(Error::InvalidState(format!(
            "not Hermitian (deviation {:.3e})",
            rho.hermiticity_deviation()
        )));
    }
    let tr = rho.trace();
    if (tr - 1.0).norm() > STATE_TOL {
        return Err(Error::InvalidState(format!("trace is {tr}, not 1")));
    }
    let lam = min_eigenvalue(rho)?;
    if lam < -STATE_TOL {
        return Err(Error::InvalidState(format!("negative eigenvalue {lam:.3e}")));
    }
    Ok(())
}

/// `Tr(rho W)`; the imaginary residue must stay below `1e-12`.
pub fn witness_expectation(rho: &ComplexMatrix, w: &ComplexMatrix) -> Result<f64> {
    if !rho.is_square() || rho.rows() != w.rows() || !w.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, witness is {}x{}",
            rho.rows(),
            rho.cols(),
            w.rows(),
            w.cols()
        )));
    }
    for m in [rho, w] {
        let dev = m.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
    }
    let v = rho.trace_product(w)?;
    if v.im.abs() >= 1e-12 {
        return Err(Error::Internal(format!("Tr(rho W) has imaginary part {:.3e}", v.im)));
    }
    Ok(v.re)
}

pub fn ppt_min_eigenvalue(rho: &ComplexMatrix, dims: BipartiteDims) -> Result<f64> {
    min_eigenvalue(&partial_transpose(rho, dims, Subsystem::Second)?)
}

pub fn is_ppt(rho: &ComplexMatrix, dims: BipartiteDims) -> Result<bool> {
    validate_state(rho)?;
    Ok(ppt_min_eigenvalue(rho, dims)? >= -PPT_TOL)
}

/// `Tr rho^2` (real part).
pub fn purity(rho: &ComplexMatrix) -> f64 {
    rho.trace_product(rho).map(|z| z.re).unwrap_or(f64::NAN)
}

/// `Tr rho^2 <= 1/(d-1)`: the largest ball around `I/d` inside the state space.
pub fn ball_membership(rho: &ComplexMatrix) -> bool {
    let d = rho.rows();
    d >= 2 && purity(rho) <= 1.0 / (d - 1) as f64 + BALL_TOL
}

/// `a_k^(alpha) = Tr(rho P_k^(alpha)) - 1/d` over a complete family.
pub fn tomography_coeffs(rho: &ComplexMatrix, family: &MubFamily) -> Result<Vec<Vec<f64>>> {
    let d = family.dim();
    if family.len() != d + 1 {
        return Err(Error::InvalidSpec(format!(
            "tomography needs all d + 1 = {} bases, got {}",
            d + 1,
            family.len()
        )));
    }
    if rho.rows() != d || !rho.is_square() {
        return Err(Error::DimensionMismatch(format!("state must be {d}x{d}")));
    }
    family
        .bases()
        .iter()
        .map(|b| {
            b.projectors()
                .iter()
                .map(|p| Ok(rho.trace_product(p)?.re - 1.0 / d as f64))
                .collect::<Result<Vec<f64>>>()
        })
        .collect()
}

/// `rho = I/d + sum_alpha sum_k a_k^(alpha) P_k^(alpha)`.
pub fn reconstruct_from_tomography(coeffs: &[Vec<f64>], family: &MubFamily) -> ComplexMatrix {
    let d = family.dim();
    let mut rho = maximally_mixed(d);
    for (basis, a) in family.bases().iter().zip(coeffs) {
        for (p, &ak) in basis.projectors().iter().zip(a) {
            rho = &rho + &p.scale_real(ak);
        }
    }
    rho
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessValue {
    pub id: String,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Some witness value below `-1e-10`.
    Detected,
    /// Some witness value in `(-1e-10, 0)`.
    Inconclusive,
    NotDetected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub ppt: bool,
    pub ppt_min_eigenvalue: f64,
    pub realignment: f64,
    /// `R > 1 + 1e-9`, which by itself certifies entanglement.
    pub realignment_exceeds_one: bool,
    pub witness_values: Vec<WitnessValue>,
    pub purity: f64,
    pub in_ball: bool,
    pub detected: bool,
    pub verdict: Verdict,
}

fn verdict(values: &[WitnessValue]) -> Verdict {
    if values.iter().any(|v| v.value < -DETECTION_TOL) {
        Verdict::Detected
    } else if values.iter().any(|v| v.value < 0.0) {
        Verdict::Inconclusive
    } else {
        Verdict::NotDetected
    }
}

pub fn check_state(
    rho: &ComplexMatrix,
    dims: BipartiteDims,
    witnesses: &[(String, ComplexMatrix)],
) -> Result<DetectionReport> {
    validate_state(rho)?;
    if dims.total() != rho.rows() {
        return Err(Error::DimensionMismatch(format!(
            "state has side {} but dims are {}x{}",
            rho.rows(),
            dims.d1,
            dims.d2
        )));
    }
    let witness_values = witnesses
        .iter()
        .map(|(id, w)| Ok(WitnessValue { id: id.clone(), value: witness_expectation(rho, w)? }))
        .collect::<Result<Vec<_>>>()?;
    report_from_values(rho, dims, witness_values)
}

fn report_from_values(
    rho: &ComplexMatrix,
    dims: BipartiteDims,
    witness_values: Vec<WitnessValue>,
) -> Result<DetectionReport> {
    let ppt_min_eigenvalue = ppt_min_eigenvalue(rho, dims)?;
    let realignment = realignment_value(rho, dims)?;
    let verdict = verdict(&witness_values);
    Ok(DetectionReport {
        ppt: ppt_min_eigenvalue >= -PPT_TOL,
        ppt_min_eigenvalue,
        realignment,
        realignment_exceeds_one: realignment > 1.0 + 1e-9,
        purity: purity(rho),
        in_ball: ball_membership(rho),
        detected: verdict == Verdict::Detected,
        verdict,
        witness_values,
    })
}

/// Which part of the qutrit torus to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanFamily {
    /// Four angles with all but `phi_{index+1}` pinned to zero.
    SingleAngle(usize),
    /// Full product grid over `L` angles, `L` in `{2, 3, 4}`.
    Torus(usize),
}

impl ScanFamily {
    fn len(self) -> usize {
        match self {
            ScanFamily::SingleAngle(_) => 4,
            ScanFamily::Torus(l) => l,
        }
    }

    fn points(self, grid: usize) -> usize {
        match self {
            ScanFamily::SingleAngle(_) => grid,
            ScanFamily::Torus(l) => grid.pow(l as u32),
        }
    }

    fn angles(self, grid: usize, idx: usize) -> Vec<f64> {
        match self {
            ScanFamily::SingleAngle(a) => {
                let mut v = vec![0.0; 4];
                v[a] = grid_angle(grid, idx);
                v
            }
            ScanFamily::Torus(l) => {
                let mut rest = idx;
                let mut v = vec![0.0; l];
                for slot in v.iter_mut().rev() {
                    *slot = grid_angle(grid, rest % grid);
                    rest /= grid;
                }
                v
            }
        }
    }

    fn id(self) -> String {
        match self {
            ScanFamily::SingleAngle(a) => format!("single-angle-{}", a + 1),
            ScanFamily::Torus(l) => format!("torus-{l}"),
        }
    }
}

/// `2 pi k / n`, computed so that nested grids share their points bit for bit.
pub fn grid_angle(n: usize, k: usize) -> f64 {
    PI * ((2 * k) as f64 / n as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub angles: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub family: ScanFamily,
    pub grid: usize,
    pub points: usize,
    pub min_value: f64,
    pub argmin: Vec<f64>,
    pub report: DetectionReport,
    #[serde(skip)]
    pub samples: Vec<ScanSample>,
}

impl ScanResult {
    /// Header line plus one `phi_1,...,phi_L,value` row per grid point.
    pub fn to_csv(&self) -> String {
        let l = self.family.len();
        let mut out = (1..=l).map(|i| format!("phi{i}")).collect::<Vec<_>>().join(",");
        out.push_str(",value\n");
        for s in &self.samples {
            for a in &s.angles {
                let _ = write!(out, "{a:?},");
            }
            let _ = writeln!(out, "{:?}", s.value);
        }
        out
    }
}

fn cmp_sample(a: &ScanSample, b: &ScanSample) -> Ordering {
    a.value.total_cmp(&b.value).then_with(|| {
        a.angles
            .iter()
            .zip(&b.angles)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Minimum of `Tr(rho W(t))` over a grid of `grid` points per angle. Set
/// `keep_samples` to retain every evaluation (for CSV export).
pub fn detection_scan(rho: &ComplexMatrix, family: ScanFamily, grid: usize, keep_samples: bool) -> Result<ScanResult> {
    validate_state(rho)?;
    if rho.rows() != 9 {
        return Err(Error::DimensionMismatch("torus scans act on 3x3 states".into()));
    }
    match family {
        ScanFamily::SingleAngle(a) if a >= 4 => {
            return Err(Error::InvalidSpec(format!("single-angle family index {a} out of 0..4")))
        }
        ScanFamily::Torus(l) if !(2..=4).contains(&l) => {
            return Err(Error::InvalidSpec(format!("torus scans need L in 2..=4, got {l}")))
        }
        _ => {}
    }
    if grid == 0 {
        return Err(Error::InvalidSpec("grid must have at least one point".into()));
    }
    let points = family.points(grid);
    let eval = |idx: usize| -> Result<ScanSample> {
        let angles = family.angles(grid, idx);
        let w = witness_d3_closed_form(&TorusPoint::new(angles.clone())?);
        Ok(ScanSample { value: witness_expectation(rho, &w)?, angles })
    };
    let (best, samples) = if keep_samples {
        let samples = (0..points).into_par_iter().map(eval).collect::<Result<Vec<_>>>()?;
        let best = samples.iter().min_by(|a, b| cmp_sample(a, b)).cloned();
        (best, samples)
    } else {
        let best = (0..points)
            .into_par_iter()
            .map(eval)
            .try_reduce_with(|a, b| Ok(if cmp_sample(&b, &a).is_lt() { b } else { a }))
            .transpose()?;
        (best, Vec::new())
    };
    let best = best.ok_or_else(|| Error::Internal("empty scan".into()))?;
    let report = report_from_values(
        rho,
        BipartiteDims::square(3),
        vec![WitnessValue { id: format!("{}:{:?}", family.id(), best.angles), value: best.value }],
    )?;
    Ok(ScanResult { family, grid, points, min_value: best.value, argmin: best.angles, report, samples })
}
