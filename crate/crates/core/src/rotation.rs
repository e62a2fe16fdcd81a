//! Real orthogonal matrices fixing the uniform axis `n* = (1, ..., 1) / sqrt(d)`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ROTATION_TOL: f64 = 1e-12;

/// Orthogonal `O` with `O n* = n*`. Reflections sending `n*` to `-n*` are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisRotation {
    d: usize,
    /// Row-major.
    entries: Vec<f64>,
}

impl AxisRotation {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidRotation("matrix must be square and non-empty".into()));
        }
        if let Some(defect) = axis_rotation_defect(&rows) {
            if defect > ROTATION_TOL {
                return Err(Error::InvalidRotation(format!(
                    "not an orthogonal matrix fixing n* (defect {defect:.3e})"
                )));
            }
        } else {
            return Err(Error::InvalidRotation("non-finite entry".into()));
        }
        Ok(Self { d, entries: rows.into_iter().flatten().collect() })
    }

    pub fn identity(d: usize) -> Self {
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1.0;
        }
        Self { d, entries }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.entries[k * self.d + l]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.d).map(<[f64]>::to_vec).collect()
    }

    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d);
        let d = self.d;
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = (0..d).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        Self { d, entries }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// `max(|O^T O - I|, |O n* - n*|)` entrywise, or `None` for NaN/Inf input.
fn axis_rotation_defect(rows: &[Vec<f64>]) -> Option<f64> {
    let d = rows.len();
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return None;
    }
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let g: f64 = (0..d).map(|k| rows[k][i] * rows[k][j]).sum();
            worst = worst.max((g - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    let n = 1.0 / (d as f64).sqrt();
    for row in rows {
        worst = worst.max((row.iter().sum::<f64>() * n - n).abs());
    }
    Some(worst)
}

pub fn validate_axis_rotation(rows: &[Vec<f64>]) -> bool {
    let d = rows.len();
    d > 0
        && rows.iter().all(|r| r.len() == d)
        && axis_rotation_defect(rows).is_some_and(|e| e <= ROTATION_TOL)
}

pub fn reduce_angle(phi: f64) -> f64 {
    phi.rem_euclid(TAU)
}

/// Proper rotation of `R^3` by `phi` about the unit axis `n` (right-handed).
/// About `n*` this is `rotation_nstar_d3(-phi)`.
pub fn rodrigues(n: [f64; 3], phi: f64) -> Result<[[f64; 3]; 3]> {
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > ROTATION_TOL {
        return Err(Error::InvalidRotation(format!("axis norm {norm} is not 1")));
    }
    let phi = reduce_angle(phi);
    let (s, c) = phi.sin_cos();
    let v = 1.0 - c;
    let [n1, n2, n3] = n;
    Ok([
        [c + n1 * n1 * v, n1 * n2 * v - n3 * s, n1 * n3 * v + n2 * s],
        [n1 * n2 * v + n3 * s, c + n2 * n2 * v, n2 * n3 * v - n1 * s],
        [n3 * n1 * v - n2 * s, n3 * n2 * v + n1 * s, c + n3 * n3 * v],
    ])
}

/// Circulant coefficients `(c1, c2, c3)` of the rotation about `n*` in `R^3`.
pub fn circulant_coefficients(phi: f64) -> [f64; 3] {
    let phi = reduce_angle(phi);
    let third = 2.0 * PI / 3.0;
    [
        2.0 / 3.0 * phi.cos() + 1.0 / 3.0,
        2.0 / 3.0 * (phi - third).cos() + 1.0 / 3.0,
        2.0 / 3.0 * (phi + third).cos() + 1.0 / 3.0,
    ]
}

/// Rotation by `phi` about `n*` in `R^3`: rows `(c1 c2 c3), (c3 c1 c2), (c2 c3 c1)`.
pub fn rotation_nstar_d3(phi: f64) -> AxisRotation {
    let [c1, c2, c3] = circulant_coefficients(phi);
    AxisRotation { d: 3, entries: vec![c1, c2, c3, c3, c1, c2, c2, c3, c1] }
}

/// Permutation matrix with `O e_i = e_{perm[i]}` (0-based images).
pub fn permutation_rotation(perm: &[usize]) -> Result<AxisRotation> {
    let d = perm.len();
    let mut seen = vec![false; d];
    for &p in perm {
        if p >= d || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidRotation(format!("{perm:?} is not a permutation of 0..{d}")));
        }
    }
    let mut entries = vec![0.0; d * d];
    for (i, &p) in perm.iter().enumerate() {
        entries[p * d + i] = 1.0;
    }
    Ok(AxisRotation { d, entries })
}

/// Cyclic shift `S e_i = e_{i+1 mod d}`.
pub fn shift_permutation(d: usize) -> AxisRotation {
    let perm: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
    permutation_rotation(&perm).expect("cyclic shift is a bijection")
}

pub fn inverse_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// One slot of a witness construction: how the rotation for a basis is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationSpec {
    /// Angle in radians about `n*`; only meaningful for `d = 3`.
    Angle(f64),
    /// 0-based images of a permutation.
    Perm(Vec<usize>),
    /// Explicit real matrix, row-major rows.
    Matrix(Vec<Vec<f64>>),
}

impl RotationSpec {
    pub fn resolve(&self, d: usize) -> Result<AxisRotation> {
        let rot = match self {
            RotationSpec::Angle(phi) => {
                if d != 3 {
                    return Err(Error::InvalidRotation(format!(
                        "angle rotations are only defined for d = 3 (got d = {d})"
                    )));
                }
                rotation_nstar_d3(*phi)
            }
            RotationSpec::Perm(p) => permutation_rotation(p)?,
            RotationSpec::Matrix(rows) => AxisRotation::new(rows.clone())?,
        };
        if rot.dim() != d {
            return Err(Error::InvalidRotation(format!("rotation has dimension {} but d = {d}", rot.dim())));
        }
        Ok(rot)
    }
}
