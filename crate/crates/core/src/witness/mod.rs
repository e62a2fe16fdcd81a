//! Positive maps and entanglement witnesses assembled from a family of mutually
//! unbiased bases and one axis-fixing rotation per basis.
//!
//! For bases `P_l^(a)` and rotations `O^(a)` the map is
//!
//! ```text
//! Phi X = 1/(d-1) { (d+L-1)/d  I Tr X  -  sum_a sum_kl O^(a)_kl Tr(X P_l^(a)) P_k^(a) }
//! ```
//!
//! and the witness is
//! `W = (d+L-1)/d I (x) I - sum_a sum_kl O^(a)_kl conj(P_l^(a)) (x) P_k^(a)`,
//! which coincides with `(d-1) sum_ij |i><j| (x) Phi(|i><j|)`.

pub mod d3;
pub mod special;
pub mod weyl_form;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{kron, ComplexMatrix, C64, ONE, ZERO};
use crate::mub::{mub_d3, mub_from_families, unbiasedness_defect, MubFamily, MUB_TOL};
use crate::rotation::{AxisRotation, RotationSpec};
use crate::weyl::is_prime;

pub use d3::{
    closed_form_params, coeffs_torus_to_weyl, torus_spec, witness_d3_closed_form, ClosedFormParams, TorusPoint,
};
pub use special::{
    ando_map, depolarizing_map, pinching, permutation_witness, reduction_map, shift_operator,
    shift_permutation_map,
};
pub use weyl_form::{weyl_expansion, witness_from_weyl, WeylCoeffs};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MubSource {
    /// The four explicit qutrit bases.
    D3Canonical,
    /// Eigenbases of the commuting Weyl classes (prime `d`).
    PrimeWeyl,
    /// A `mubs.json` file.
    File(PathBuf),
}

impl MubSource {
    /// `d3-canonical` for `d = 3`, `prime-weyl` for other primes.
    pub fn default_for(d: usize) -> Result<Self> {
        match d {
            3 => Ok(Self::D3Canonical),
            d if is_prime(d) => Ok(Self::PrimeWeyl),
            d => Err(Error::InvalidSpec(format!(
                "no built-in bases for composite d = {d}; supply a mubs file"
            ))),
        }
    }

    pub fn load(&self, d: usize) -> Result<MubFamily> {
        let fam = match self {
            Self::D3Canonical if d == 3 => mub_d3(),
            Self::D3Canonical => {
                return Err(Error::InvalidSpec(format!("d3-canonical bases requested for d = {d}")))
            }
            Self::PrimeWeyl => mub_from_families(d)?,
            Self::File(path) => MubFamily::load(path)?,
        };
        if fam.dim() != d {
            return Err(Error::InvalidSpec(format!("bases have dimension {} but d = {d}", fam.dim())));
        }
        Ok(fam)
    }
}

/// Everything needed to rebuild a witness: dimension, one rotation per basis and
/// where the bases come from. `L` is carried explicitly and must match.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub d: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub rotations: Vec<RotationSpec>,
    pub mub_source: MubSource,
}

impl WitnessSpec {
    pub fn new(d: usize, rotations: Vec<RotationSpec>, mub_source: MubSource) -> Self {
        Self { d, l: rotations.len(), rotations, mub_source }
    }

    /// `d = 3`, canonical bases, rotation angles about `n*`.
    pub fn d3_angles(angles: &[f64]) -> Self {
        Self::new(3, angles.iter().map(|&a| RotationSpec::Angle(a)).collect(), MubSource::D3Canonical)
    }

    /// Identity rotations on the first `l` bases.
    pub fn identity(d: usize, l: usize, mub_source: MubSource) -> Self {
        Self::new(d, (0..l).map(|_| RotationSpec::Perm((0..d).collect())).collect(), mub_source)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidSpec(format!("d must be at least 2 (got {})", self.d)));
        }
        if self.l != self.rotations.len() {
            return Err(Error::InvalidSpec(format!(
                "L = {} but {} rotations given",
                self.l,
                self.rotations.len()
            )));
        }
        check_l(self.d, self.l)
    }

    /// Loads the bases (the first `L` of the source) and resolves every rotation.
    pub fn resolve(&self) -> Result<(MubFamily, Vec<AxisRotation>)> {
        self.validate()?;
        let family = self.mub_source.load(self.d)?;
        if family.len() < self.l {
            return Err(Error::InvalidSpec(format!(
                "source provides {} bases, L = {} requested",
                family.len(),
                self.l
            )));
        }
        let family = family.truncated(self.l)?;
        let rotations = self.rotations.iter().map(|r| r.resolve(self.d)).collect::<Result<Vec<_>>>()?;
        Ok((family, rotations))
    }
}

fn check_l(d: usize, l: usize) -> Result<()> {
    if l == 1 {
        return Err(Error::InvalidSpec(
            "L = 1 always yields a positive semidefinite operator, not a witness".into(),
        ));
    }
    if l == 0 || l > d + 1 {
        return Err(Error::InvalidSpec(format!("L must lie in 2..={} (got {l})", d + 1)));
    }
    Ok(())
}

fn check_parts(family: &MubFamily, rotations: &[AxisRotation]) -> Result<()> {
    let d = family.dim();
    check_l(d, rotations.len())?;
    if family.len() != rotations.len() {
        return Err(Error::InvalidSpec(format!(
            "{} bases but {} rotations",
            family.len(),
            rotations.len()
        )));
    }
    if let Some(r) = rotations.iter().find(|r| r.dim() != d) {
        return Err(Error::InvalidRotation(format!("rotation of dimension {} for d = {d}", r.dim())));
    }
    let defect = unbiasedness_defect(family);
    if defect > MUB_TOL {
        return Err(Error::InvalidMub(format!("bases are not mutually unbiased (defect {defect:.3e})")));
    }
    Ok(())
}

/// Linear map on `d x d` matrices stored as its `d^2 x d^2` transfer matrix in the
/// column-stacking convention: `vec(X)[i + j d] = X_ij`, `vec(Phi X) = T vec(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapOperator {
    d: usize,
    transfer: ComplexMatrix,
}

impl MapOperator {
    pub fn from_transfer(d: usize, transfer: ComplexMatrix) -> Result<Self> {
        if transfer.rows() != d * d || transfer.cols() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "transfer matrix must be {0}x{0} for d = {d}",
                d * d
            )));
        }
        Ok(Self { d, transfer })
    }

    /// Tabulates `f` on the matrix units `|i><j|`.
    pub fn from_fn(d: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let mut transfer = ComplexMatrix::zeros(d * d, d * d);
        for j in 0..d {
            for i in 0..d {
                let mut unit = ComplexMatrix::zeros(d, d);
                unit[(i, j)] = ONE;
                let image = f(&unit);
                let col = i + j * d;
                for (row, z) in vectorize(&image).into_iter().enumerate() {
                    transfer[(row, col)] = z;
                }
            }
        }
        Self { d, transfer }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn transfer(&self) -> &ComplexMatrix {
        &self.transfer
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.d || x.cols() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "map acts on {0}x{0} matrices, got {1}x{2}",
                self.d,
                x.rows(),
                x.cols()
            )));
        }
        Ok(unvectorize(&self.transfer.mul_vec(&vectorize(x)), self.d))
    }

    /// Adjoint under the Hilbert-Schmidt pairing, `Tr(Y^dagger Phi X) = Tr((Phi* Y)^dagger X)`.
    /// For Hermiticity-preserving maps this is also the bilinear trace dual.
    pub fn dual(&self) -> Self {
        Self { d: self.d, transfer: self.transfer.dagger() }
    }

    /// `(d - 1) sum_ij |i><j| (x) Phi(|i><j|)`.
    pub fn choi_witness(&self) -> ComplexMatrix {
        let d = self.d;
        let mut w = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let mut unit = ComplexMatrix::zeros(d, d);
                unit[(i, j)] = ONE;
                let image = self.apply(&unit).expect("unit has map dimension");
                w = &w + &kron(&unit, &image);
            }
        }
        w.scale_real((d - 1) as f64)
    }

    /// Worst `|Tr(Phi E_ij) - delta_ij|` over matrix units.
    pub fn trace_preservation_defect(&self) -> f64 {
        let d = self.d;
        let mut worst: f64 = 0.0;
        for j in 0..d {
            for i in 0..d {
                let col = i + j * d;
                let tr: C64 = (0..d).map(|k| self.transfer[(k + k * d, col)]).sum();
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((tr - target).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.transfer.max_abs_diff(&other.transfer)
    }
}

pub fn vectorize(x: &ComplexMatrix) -> Vec<C64> {
    let d = x.rows();
    let mut v = vec![ZERO; d * x.cols()];
    for j in 0..x.cols() {
        for i in 0..d {
            v[i + j * d] = x[(i, j)];
        }
    }
    v
}

pub fn unvectorize(v: &[C64], d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| v[i + j * d])
}

/// Applies the defining formula of the map directly.
pub fn apply_mub_map(family: &MubFamily, rotations: &[AxisRotation], x: &ComplexMatrix) -> ComplexMatrix {
    let d = family.dim();
    let l = family.len();
    let mut out = ComplexMatrix::identity(d).scale(x.trace() * ((d + l - 1) as f64 / d as f64));
    for (basis, rot) in family.bases().iter().zip(rotations) {
        let projectors = basis.projectors();
        let overlaps: Vec<C64> = projectors
            .iter()
            .map(|p| x.trace_product(p).expect("square matrices of equal size"))
            .collect();
        for (k, pk) in projectors.iter().enumerate() {
            let coeff: C64 = (0..d).map(|l| overlaps[l] * rot.get(k, l)).sum();
            if coeff != ZERO {
                out = &out - &pk.scale(coeff);
            }
        }
    }
    out.scale_real(1.0 / (d - 1) as f64)
}

pub fn map_from_parts(family: &MubFamily, rotations: &[AxisRotation]) -> Result<MapOperator> {
    check_parts(family, rotations)?;
    Ok(MapOperator::from_fn(family.dim(), |x| apply_mub_map(family, rotations, x)))
}

pub fn witness_from_parts(family: &MubFamily, rotations: &[AxisRotation]) -> Result<ComplexMatrix> {
    check_parts(family, rotations)?;
    let d = family.dim();
    let l = family.len();
    let mut w = ComplexMatrix::identity(d * d).scale_real((d + l - 1) as f64 / d as f64);
    for (basis, rot) in family.bases().iter().zip(rotations) {
        let projectors = basis.projectors();
        let conjugated: Vec<ComplexMatrix> = projectors.iter().map(ComplexMatrix::conj).collect();
        for (k, pk) in projectors.iter().enumerate() {
            for (l, pl_bar) in conjugated.iter().enumerate() {
                let o = rot.get(k, l);
                if o != 0.0 {
                    w = &w - &kron(pl_bar, pk).scale_real(o);
                }
            }
        }
    }
    Ok(w)
}

pub fn build_map(spec: &WitnessSpec) -> Result<MapOperator> {
    let (family, rotations) = spec.resolve()?;
    map_from_parts(&family, &rotations)
}

pub fn build_witness(spec: &WitnessSpec) -> Result<ComplexMatrix> {
    let (family, rotations) = spec.resolve()?;
    witness_from_parts(&family, &rotations)
}

/// Witness file: the spec next to the matrix so the file is self-describing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFile {
    pub spec: WitnessSpec,
    pub witness: ComplexMatrix,
}

impl WitnessFile {
    pub fn build(spec: WitnessSpec) -> Result<Self> {
        let witness = build_witness(&spec)?;
        Ok(Self { spec, witness })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite witness always serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
