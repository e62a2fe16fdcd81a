//! Mutually unbiased bases: the explicit qutrit quartet and prime-dimension
//! families obtained as common eigenbases of commuting Weyl classes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::eigen::fix_phase;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::weyl::{commuting_families, omega_pow, weyl_operator};

pub const MUB_TOL: f64 = 1e-12;

/// An orthonormal basis of `C^d`, stored as a list of vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    vectors: Vec<Vec<C64>>,
}

impl Basis {
    pub fn new(vectors: Vec<Vec<C64>>) -> Result<Self> {
        let d = vectors.len();
        if d == 0 || vectors.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidMub(format!("basis needs {d} vectors of length {d}")));
        }
        let b = Self { vectors };
        let dev = b.orthonormality_defect();
        if dev > MUB_TOL {
            return Err(Error::InvalidMub(format!("basis not orthonormal (defect {dev:.3e})")));
        }
        Ok(b)
    }

    pub fn computational(d: usize) -> Self {
        Self {
            vectors: (0..d).map(|i| (0..d).map(|k| if k == i { ONE } else { ZERO }).collect()).collect(),
        }
    }

    /// Columns of `u` as basis vectors, i.e. `|psi_k> = U |k>`.
    pub fn from_unitary_columns(u: &ComplexMatrix) -> Result<Self> {
        Self::new((0..u.cols()).map(|k| u.column(k)).collect())
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[C64] {
        &self.vectors[k]
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        self.vectors.iter().map(|v| ComplexMatrix::projector(v)).collect()
    }

    fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(u, v) - target).norm());
            }
        }
        worst
    }
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Ordered list of `L` bases of `C^d`. Construction through [`MubFamily::new`]
/// does not enforce unbiasedness; use [`verify_mub`] or [`MubFamily::checked`].
#[derive(Debug, Clone, PartialEq)]
pub struct MubFamily {
    d: usize,
    bases: Vec<Basis>,
}

impl MubFamily {
    pub fn new(bases: Vec<Basis>) -> Result<Self> {
        let d = bases.first().map(Basis::dim).ok_or_else(|| Error::InvalidMub("no bases".into()))?;
        if bases.iter().any(|b| b.dim() != d) {
            return Err(Error::InvalidMub("bases of different dimensions".into()));
        }
        if bases.len() > d + 1 {
            return Err(Error::InvalidMub(format!("{} bases exceed the bound d + 1 = {}", bases.len(), d + 1)));
        }
        Ok(Self { d, bases })
    }

    /// As [`MubFamily::new`] but also rejects families that are not pairwise unbiased.
    pub fn checked(bases: Vec<Basis>) -> Result<Self> {
        let f = Self::new(bases)?;
        let defect = unbiasedness_defect(&f);
        if defect > MUB_TOL {
            return Err(Error::InvalidMub(format!("bases are not mutually unbiased (defect {defect:.3e})")));
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn basis(&self, alpha: usize) -> &Basis {
        &self.bases[alpha]
    }

    /// The first `l` bases.
    pub fn truncated(&self, l: usize) -> Result<Self> {
        if l == 0 || l > self.bases.len() {
            return Err(Error::InvalidMub(format!("cannot take {l} of {} bases", self.bases.len())));
        }
        Ok(Self { d: self.d, bases: self.bases[..l].to_vec() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&MubsJson::from(self)).expect("finite entries always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: MubsJson = serde_json::from_str(s)?;
        j.try_into()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// `mubs.json`: `{"d": d, "bases": [[[ [re, im], ... ], ...], ...]}`, a list of
/// bases, each a list of vectors, each a list of `[re, im]` components.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MubsJson {
    pub d: usize,
    pub bases: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<&MubFamily> for MubsJson {
    fn from(f: &MubFamily) -> Self {
        Self {
            d: f.d,
            bases: f
                .bases
                .iter()
                .map(|b| b.vectors.iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect()).collect())
                .collect(),
        }
    }
}

impl TryFrom<MubsJson> for MubFamily {
    type Error = Error;

    fn try_from(j: MubsJson) -> Result<Self> {
        let mut bases = Vec::with_capacity(j.bases.len());
        for (a, b) in j.bases.into_iter().enumerate() {
            let vectors: Vec<Vec<C64>> =
                b.into_iter().map(|v| v.into_iter().map(|[re, im]| C64::new(re, im)).collect()).collect();
            if vectors.len() != j.d || vectors.iter().any(|v| v.len() != j.d) {
                return Err(Error::Format(format!("basis {a} is not {0} vectors of length {0}", j.d)));
            }
            bases.push(Basis::new(vectors)?);
        }
        MubFamily::new(bases)
    }
}

/// Largest `| |<psi_k^a | psi_l^b>|^2 - 1/d |` over distinct bases, combined with
/// the orthonormality defect of each basis.
pub fn unbiasedness_defect(f: &MubFamily) -> f64 {
    let d = f.d as f64;
    let mut worst = f.bases.iter().map(Basis::orthonormality_defect).fold(0.0, f64::max);
    for (a, ba) in f.bases.iter().enumerate() {
        for bb in &f.bases[a + 1..] {
            for u in &ba.vectors {
                for v in &bb.vectors {
                    worst = worst.max((inner(u, v).norm_sqr() - 1.0 / d).abs());
                }
            }
        }
    }
    worst
}

pub fn verify_mub(f: &MubFamily) -> bool {
    unbiasedness_defect(f) <= MUB_TOL
}

/// The four qutrit bases `B1..B4`: computational, then the columns of `U2`, `U3`
/// and `U4 = conj(U3)`.
pub fn mub_d3() -> MubFamily {
    let w = omega_pow(3, 1);
    let wc = w.conj();
    let s = 1.0 / 3f64.sqrt();
    let u2 = [[ONE, ONE, ONE], [ONE, wc, w], [ONE, w, wc]];
    let u3 = [[ONE, ONE, ONE], [ONE, w, wc], [wc, w, ONE]];
    let to_matrix = |rows: [[C64; 3]; 3]| {
        ComplexMatrix::from_fn(3, 3, |i, j| rows[i][j] * s)
    };
    let u2 = to_matrix(u2);
    let u3 = to_matrix(u3);
    let u4 = u3.conj();
    let bases = vec![
        Basis::computational(3),
        Basis::from_unitary_columns(&u2).expect("U2 is unitary"),
        Basis::from_unitary_columns(&u3).expect("U3 is unitary"),
        Basis::from_unitary_columns(&u4).expect("U4 is unitary"),
    ];
    MubFamily::new(bases).expect("four qutrit bases")
}

/// Common eigenbases of the `d + 1` commuting Weyl classes for prime `d`.
///
/// In each class the first operator `U` is diagonalized. Its spectrum is
/// `mu^{1/d} omega^j`, `j = 0..d-1`, with `U^d = mu I`; eigenvector `j` is read
/// off the spectral projector `(1/d) sum_n (U / lambda_j)^n`, and vectors are
/// ordered by `j` with the first nonzero component made real positive.
pub fn mub_from_families(d: usize) -> Result<MubFamily> {
    let families = commuting_families(d)?;
    let mut bases = Vec::with_capacity(d + 1);
    for fam in &families {
        let u = weyl_operator(d, fam[0]);
        bases.push(eigenbasis_of_weyl(&u, d)?);
    }
    MubFamily::new(bases)
}

fn eigenbasis_of_weyl(u: &ComplexMatrix, d: usize) -> Result<Basis> {
    let mut power = ComplexMatrix::identity(d);
    let mut powers = Vec::with_capacity(d);
    for _ in 0..d {
        powers.push(power.clone());
        power = &power * u;
    }
    // power == U^d == mu I
    let mu = power[(0, 0)];
    if (&power - &ComplexMatrix::identity(d).scale(mu)).max_abs() > 1e-12 {
        return Err(Error::InvalidMub("Weyl operator power is not scalar".into()));
    }
    let root = C64::from_polar(1.0, mu.arg() / d as f64);
    let mut vectors = Vec::with_capacity(d);
    for j in 0..d {
        let lambda = root * omega_pow(d, j as i64);
        let mut proj = ComplexMatrix::zeros(d, d);
        let mut coeff = ONE;
        for p in &powers {
            proj = &proj + &p.scale(coeff);
            coeff /= lambda;
        }
        let proj = proj.scale_real(1.0 / d as f64);
        let rank = proj.trace();
        if (rank - ONE).norm() > 1e-10 {
            return Err(Error::InvalidMub(format!("eigenvalue {j} is degenerate (projector trace {rank})")));
        }
        let best = (0..d)
            .max_by(|&a, &b| {
                let na: f64 = proj.column(a).iter().map(C64::norm_sqr).sum();
                let nb: f64 = proj.column(b).iter().map(C64::norm_sqr).sum();
                na.total_cmp(&nb)
            })
            .expect("d >= 2");
        let mut v = proj.column(best);
        let norm = v.iter().map(C64::norm_sqr).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        fix_phase(&mut v);
        vectors.push(v);
    }
    Basis::new(vectors)
}
