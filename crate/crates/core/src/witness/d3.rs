//! Closed-form qutrit witnesses on the `L`-torus of rotation angles.
//!
//! All members share one sparsity pattern (indices `3 m + n`):
//!
//! ```text
//!  a . . | . p* . | . . p
//!  . b . | . . q* | q . .
//!  . . c | r* . . | . r .
//!  ------+--------+------
//!  . . r | c . .  | . r* .
//!  p . . | . a .  | . . p*
//!  . q . | . . b  | q* . .
//!  ------+--------+------
//!  . q* .| . . q  | b . .
//!  . . r*| r . .  | . c .
//!  p* . .| . p .  | . . a
//! ```
//!
//! with `(a, b, c)` fixed by the first angle and `(p, q, r)` by the rest.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::rotation::reduce_angle;
use crate::weyl::omega_pow;

use super::weyl_form::WeylCoeffs;
use super::WitnessSpec;

/// Angles `(phi_1, ..., phi_L)` in radians, `L` in `{2, 3, 4}`. Angle `alpha`
/// rotates basis `B_alpha` of the canonical qutrit family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    angles: Vec<f64>,
}

impl TorusPoint {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if !(2..=4).contains(&angles.len()) {
            return Err(Error::InvalidSpec(format!("torus points need 2 to 4 angles, got {}", angles.len())));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidSpec("non-finite angle".into()));
        }
        Ok(Self { angles: angles.into_iter().map(reduce_angle).collect() })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub p: C64,
    pub q: C64,
    pub r: C64,
}

fn eix(x: f64) -> C64 {
    C64::from_polar(1.0, x)
}

pub fn closed_form_params(t: &TorusPoint) -> ClosedFormParams {
    let phi = t.angles();
    let (s1, c1) = phi[0].sin_cos();
    let h = 3f64.sqrt() / 2.0;
    let a = 2.0 / 3.0 * (1.0 - c1);
    let b = 2.0 / 3.0 * (h * s1 + 0.5 * c1 + 1.0);
    let c = 2.0 / 3.0 * (-h * s1 + 0.5 * c1 + 1.0);

    let w = omega_pow(3, 1);
    let wc = w.conj();
    let third = C64::new(-1.0 / 3.0, 0.0);
    let (p, q, r) = match phi.len() {
        4 => {
            let (x, y, z) = (eix(phi[1]), eix(-phi[2]), eix(phi[3]));
            ((x + y + z) * third, (x + wc * y + w * z) * third, (x + w * y + wc * z) * third)
        }
        3 => {
            let (x, y) = (eix(phi[1]), eix(-phi[2]));
            ((x + y) * third, (x + wc * y) * third, (x + w * y) * third)
        }
        _ => {
            let z = eix(phi[1]) * third;
            (z, z, z)
        }
    };
    ClosedFormParams { a, b, c, p, q, r }
}

/// Places `(a, b, c, p, q, r)` into the 9x9 pattern.
pub fn pattern_matrix(x: &ClosedFormParams) -> ComplexMatrix {
    let re = |v: f64| C64::new(v, 0.0);
    let (p, q, r) = (x.p, x.q, x.r);
    let (pc, qc, rc) = (p.conj(), q.conj(), r.conj());
    let mut w = ComplexMatrix::zeros(9, 9);
    for (i, v) in [x.a, x.b, x.c, x.c, x.a, x.b, x.b, x.c, x.a].into_iter().enumerate() {
        w[(i, i)] = re(v);
    }
    let off = [
        (0, 4, pc),
        (0, 8, p),
        (1, 5, qc),
        (1, 6, q),
        (2, 3, rc),
        (2, 7, r),
        (3, 2, r),
        (3, 7, rc),
        (4, 0, p),
        (4, 8, pc),
        (5, 1, q),
        (5, 6, qc),
        (6, 1, qc),
        (6, 5, q),
        (7, 2, rc),
        (7, 3, r),
        (8, 0, pc),
        (8, 4, p),
    ];
    for (i, j, v) in off {
        w[(i, j)] = v;
    }
    w
}

pub fn witness_d3_closed_form(t: &TorusPoint) -> ComplexMatrix {
    pattern_matrix(&closed_form_params(t))
}

/// The general-constructor spec for a torus point.
pub fn torus_spec(t: &TorusPoint) -> WitnessSpec {
    WitnessSpec::d3_angles(t.angles())
}

/// Weyl coefficients (scale `1/3`) reproducing the closed-form witness at a
/// four-angle torus point. Every off-origin coefficient is a unit-modulus phase:
/// `c10 = -e^{-i phi1}, c01 = -e^{-i phi2}, c12 = -e^{-i phi3}, c11 = -e^{-i phi4}`,
/// the others following from `conj(c_kl) = c_{-k,-l}`.
pub fn coeffs_torus_to_weyl(t: &TorusPoint) -> Result<WeylCoeffs> {
    if t.len() != 4 {
        return Err(Error::InvalidSpec(format!("Weyl correspondence needs L = 4, got {}", t.len())));
    }
    let phi = t.angles();
    let mut c = vec![C64::new(0.0, 0.0); 9];
    let mut set = |k: usize, l: usize, v: C64| {
        c[k * 3 + l] = v;
        c[((3 - k) % 3) * 3 + (3 - l) % 3] = v.conj();
    };
    set(0, 0, C64::new(2.0, 0.0));
    set(1, 0, -eix(-phi[0]));
    set(0, 1, -eix(-phi[1]));
    set(1, 2, -eix(-phi[2]));
    set(1, 1, -eix(-phi[3]));
    WeylCoeffs::new(3, 1.0 / 3.0, c)
}
