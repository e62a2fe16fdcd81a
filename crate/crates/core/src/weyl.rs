//! Weyl (clock-and-shift) operators `U_kl = sum_m omega^{km} |m><m+l|`.
//!
//! With this convention the product rule reads
//! `U_kl U_rs = omega^{lr} U_{k+r, l+s}` and the adjoint is
//! `U_kl^dagger = omega^{kl} U_{-k,-l}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylIndex {
    pub k: usize,
    pub l: usize,
}

impl WeylIndex {
    pub fn new(k: usize, l: usize, d: usize) -> Self {
        Self { k: k % d, l: l % d }
    }

    pub fn neg(self, d: usize) -> Self {
        Self::new(d - self.k, d - self.l, d)
    }
}

/// `omega^n` with `omega = exp(2 pi i / d)`; the exponent is reduced mod d first
/// so equal powers give bit-identical values.
pub fn omega_pow(d: usize, n: i64) -> C64 {
    let r = n.rem_euclid(d as i64);
    match (r, d) {
        (0, _) => C64::new(1.0, 0.0),
        _ => C64::from_polar(1.0, 2.0 * PI * r as f64 / d as f64),
    }
}

pub fn weyl_operator(d: usize, idx: WeylIndex) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(d, d);
    for m in 0..d {
        u[(m, (m + idx.l) % d)] = omega_pow(d, (idx.k * m) as i64);
    }
    u
}

/// Checks the product rule and the adjoint rule over all index pairs. Entries are
/// roots of unity computed from reduced exponents, so agreement is exact up to a
/// single rounding of the complex product (tolerance 1e-13).
pub fn weyl_relation_check(d: usize) -> bool {
    weyl_relation_defect(d) <= 1e-13
}

/// Worst entrywise violation of the two Weyl relations.
pub fn weyl_relation_defect(d: usize) -> f64 {
    let ops: Vec<Vec<ComplexMatrix>> = (0..d)
        .map(|k| (0..d).map(|l| weyl_operator(d, WeylIndex { k, l })).collect())
        .collect();
    let mut worst: f64 = 0.0;
    for k in 0..d {
        for l in 0..d {
            let u = &ops[k][l];
            let adj = &ops[(d - k) % d][(d - l) % d];
            worst = worst.max(u.dagger().max_abs_diff(&adj.scale(omega_pow(d, (k * l) as i64))));
            for r in 0..d {
                for s in 0..d {
                    let prod = u * &ops[r][s];
                    let target = &ops[(k + r) % d][(l + s) % d];
                    worst = worst.max(prod.max_abs_diff(&target.scale(omega_pow(d, (l * r) as i64))));
                }
            }
        }
    }
    worst
}

/// `[U_kl, U_ij] = 0` iff `k j = i l (mod d)`.
pub fn commute(d: usize, a: WeylIndex, b: WeylIndex) -> bool {
    (a.k * b.l) % d == (b.k * a.l) % d
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

/// The `d + 1` commuting classes of `{(k, l) != (0, 0)}` for prime `d`, ordered
/// `{(n, n s)}` for slopes `s = 0..d-1` followed by `{(0, n)}`; within a class by
/// the multiplier `n = 1..d-1`. For `d = 3` this is
/// `{U10,U20}, {U11,U22}, {U12,U21}, {U01,U02}`.
pub fn commuting_families(d: usize) -> Result<Vec<Vec<WeylIndex>>> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    let mut families: Vec<Vec<WeylIndex>> = (0..d)
        .map(|s| (1..d).map(|n| WeylIndex::new(n, n * s, d)).collect())
        .collect();
    families.push((1..d).map(|n| WeylIndex::new(0, n, d)).collect());
    Ok(families)
}

/// Largest commutator norm inside any family; zero up to rounding for prime d.
pub fn family_commutator_defect(d: usize, families: &[Vec<WeylIndex>]) -> f64 {
    let mut worst: f64 = 0.0;
    for fam in families {
        for a in fam {
            for b in fam {
                let ua = weyl_operator(d, *a);
                let ub = weyl_operator(d, *b);
                let comm = &(&ua * &ub) - &(&ub * &ua);
                worst = worst.max(comm.frobenius_norm());
            }
        }
    }
    worst
}

/// `sum_m omega^{km} |m><m+l|` tensored as `U_kl (x) U_{-k,l}`, the building block
/// of Weyl-expanded witnesses.
pub fn weyl_pair(d: usize, idx: WeylIndex) -> ComplexMatrix {
    let first = weyl_operator(d, idx);
    let second = weyl_operator(d, WeylIndex::new(d - idx.k, idx.l, d));
    crate::matrix::kron(&first, &second)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w3() -> C64 {
        omega_pow(3, 1)
    }

    #[test]
    fn identity_and_clock() {
        assert_eq!(weyl_operator(3, WeylIndex { k: 0, l: 0 }), ComplexMatrix::identity(3));
        let u10 = weyl_operator(3, WeylIndex { k: 1, l: 0 });
        let w = w3();
        let expected = ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), w, w * w]);
        assert!(u10.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn displayed_u11_u12_u22() {
        let w = w3();
        let w2 = omega_pow(3, 2);
        let u11 = weyl_operator(3, WeylIndex { k: 1, l: 1 });
        assert!((u11[(0, 1)] - 1.0).norm() < 1e-15);
        assert!((u11[(1, 2)] - w).norm() < 1e-15);
        assert!((u11[(2, 0)] - w2).norm() < 1e-15);
        let u12 = weyl_operator(3, WeylIndex { k: 1, l: 2 });
        assert!((u12[(0, 2)] - 1.0).norm() < 1e-15);
        assert!((u12[(1, 0)] - w).norm() < 1e-15);
        assert!((u12[(2, 1)] - w2).norm() < 1e-15);
        let u22 = weyl_operator(3, WeylIndex { k: 2, l: 2 });
        assert!((u22[(1, 0)] - w2).norm() < 1e-15);
        assert!((u22[(2, 1)] - w).norm() < 1e-15);
        let u01 = weyl_operator(3, WeylIndex { k: 0, l: 1 });
        assert_eq!(u01[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(u01[(2, 0)], C64::new(1.0, 0.0));
    }

    #[test]
    fn relations_hold() {
        for d in [2, 3, 5] {
            assert!(weyl_relation_check(d), "d = {d}: defect {}", weyl_relation_defect(d));
        }
    }

    #[test]
    fn literal_omega_ks_product_rule_fails() {
        // U10 U01 = U11 while omega^{ks} would predict omega U11.
        let u10 = weyl_operator(3, WeylIndex { k: 1, l: 0 });
        let u01 = weyl_operator(3, WeylIndex { k: 0, l: 1 });
        let u11 = weyl_operator(3, WeylIndex { k: 1, l: 1 });
        let prod = &u10 * &u01;
        assert!(prod.max_abs_diff(&u11) < 1e-15);
        assert!(prod.max_abs_diff(&u11.scale(w3())) > 0.5);
    }

    #[test]
    fn unitary() {
        for d in [2, 3, 4, 5] {
            for k in 0..d {
                for l in 0..d {
                    let u = weyl_operator(d, WeylIndex { k, l });
                    assert!((&u * &u.dagger()).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-13);
                }
            }
        }
    }

    #[test]
    fn families_d3_match_display() {
        let fams = commuting_families(3).unwrap();
        let pairs: Vec<Vec<(usize, usize)>> =
            fams.iter().map(|f| f.iter().map(|i| (i.k, i.l)).collect()).collect();
        assert_eq!(
            pairs,
            vec![vec![(1, 0), (2, 0)], vec![(1, 1), (2, 2)], vec![(1, 2), (2, 1)], vec![(0, 1), (0, 2)]]
        );
    }

    #[test]
    fn families_d2_and_d5() {
        let f2 = commuting_families(2).unwrap();
        assert_eq!(
            f2,
            vec![vec![WeylIndex { k: 1, l: 0 }], vec![WeylIndex { k: 1, l: 1 }], vec![WeylIndex { k: 0, l: 1 }]]
        );
        let f5 = commuting_families(5).unwrap();
        assert_eq!(f5.len(), 6);
        assert!(f5.iter().all(|f| f.len() == 4));
        let mut all: Vec<_> = f5.iter().flatten().copied().collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 24);
        assert!(family_commutator_defect(5, &f5) < 1e-14);
        // commutation criterion agrees with matrices
        for a in &all {
            for b in &all {
                let ua = weyl_operator(5, *a);
                let ub = weyl_operator(5, *b);
                let defect = (&(&ua * &ub) - &(&ub * &ua)).frobenius_norm();
                assert_eq!(commute(5, *a, *b), defect < 1e-12);
            }
        }
    }

    #[test]
    fn families_reject_composite() {
        assert!(matches!(commuting_families(4), Err(Error::NotPrime(4))));
        assert!(matches!(commuting_families(1), Err(Error::NotPrime(1))));
    }
}
