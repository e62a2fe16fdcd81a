//! Witnesses expanded in Weyl pairs, `W = a sum_kl c_kl U_kl (x) U_{-k,l}`.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::weyl::{weyl_pair, WeylIndex};

const COEFF_TOL: f64 = 1e-12;

/// Scale `a > 0` and a `d x d` coefficient table with `c_00 = d - 1` and
/// `conj(c_kl) = c_{-k,-l}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylCoeffs {
    d: usize,
    scale: f64,
    /// Row-major, index `k * d + l`.
    c: Vec<C64>,
}

impl WeylCoeffs {
    pub fn new(d: usize, scale: f64, c: Vec<C64>) -> Result<Self> {
        if d < 2 || c.len() != d * d {
            return Err(Error::InvalidCoeffs(format!("need {} coefficients for d = {d}", d * d)));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidCoeffs(format!("scale must be positive, got {scale}")));
        }
        if (c[0] - C64::new((d - 1) as f64, 0.0)).norm() > COEFF_TOL {
            return Err(Error::InvalidCoeffs(format!("c_00 must equal d - 1 = {}, got {}", d - 1, c[0])));
        }
        for k in 0..d {
            for l in 0..d {
                let neg = ((d - k) % d) * d + (d - l) % d;
                if (c[k * d + l].conj() - c[neg]).norm() > COEFF_TOL {
                    return Err(Error::InvalidCoeffs(format!(
                        "Hermiticity requires conj(c_{k}{l}) = c_{{-{k},-{l}}}"
                    )));
                }
            }
        }
        Ok(Self { d, scale, c })
    }

    /// `a = 1/d`, all off-origin coefficients `-1`: the reduction-map witness.
    pub fn reduction(d: usize) -> Self {
        let mut c = vec![C64::new(-1.0, 0.0); d * d];
        c[0] = C64::new((d - 1) as f64, 0.0);
        Self { d, scale: 1.0 / d as f64, c }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn get(&self, k: usize, l: usize) -> C64 {
        self.c[(k % self.d) * self.d + l % self.d]
    }

    /// Whether `|c_kl| <= 1` off the origin, the condition under which the
    /// operator is guaranteed block-positive.
    pub fn certifies_block_positivity(&self) -> bool {
        self.c.iter().skip(1).all(|z| z.norm() <= 1.0 + COEFF_TOL)
    }
}

pub fn witness_from_weyl(coeffs: &WeylCoeffs) -> Result<ComplexMatrix> {
    let d = coeffs.d;
    let mut w = ComplexMatrix::zeros(d * d, d * d);
    for k in 0..d {
        for l in 0..d {
            let c = coeffs.get(k, l);
            if c.norm() == 0.0 {
                continue;
            }
            w = &w + &weyl_pair(d, WeylIndex { k, l }).scale(c * coeffs.scale);
        }
    }
    Ok(w)
}

/// Coefficients of `w` in the (Hilbert-Schmidt orthogonal) Weyl-pair basis,
/// normalised by `scale`: `c_kl = Tr(B_kl^dagger w) / (d^2 scale)`.
pub fn weyl_expansion(w: &ComplexMatrix, d: usize, scale: f64) -> Result<Vec<C64>> {
    if !w.is_square() || w.rows() != d * d {
        return Err(Error::DimensionMismatch(format!("expected a {0}x{0} operator", d * d)));
    }
    let mut c = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let b = weyl_pair(d, WeylIndex { k, l });
            c.push(b.dagger().trace_product(w)? / ((d * d) as f64 * scale));
        }
    }
    Ok(c)
}
