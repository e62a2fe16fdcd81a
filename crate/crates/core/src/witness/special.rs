//! Maps with permutation rotations: reduction, cyclic-shift and Ando-type maps,
//! and witnesses built from one permutation per basis.

use crate::error::{Error, Result};
use crate::matrix::{kron, ComplexMatrix};
use crate::mub::MubFamily;
use crate::rotation::{inverse_permutation, permutation_rotation};

use super::{witness_from_parts, MapOperator};

/// `X -> (I Tr X - X) / (d - 1)`.
pub fn reduction_map(d: usize) -> MapOperator {
    MapOperator::from_fn(d, |x| {
        (&ComplexMatrix::identity(d).scale(x.trace()) - x).scale_real(1.0 / (d - 1) as f64)
    })
}

/// `X -> I Tr X / d`.
pub fn depolarizing_map(d: usize) -> MapOperator {
    MapOperator::from_fn(d, |x| ComplexMatrix::identity(d).scale(x.trace() / d as f64))
}

/// Diagonal part in the computational basis.
pub fn pinching(x: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(x.rows(), x.cols(), |i, j| if i == j { x[(i, i)] } else { 0.0.into() })
}

/// `S|i> = |i + 1 mod d>`.
pub fn shift_operator(d: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        s[((i + 1) % d, i)] = 1.0.into();
    }
    s
}

fn shift_power(d: usize, i: usize) -> ComplexMatrix {
    let s = shift_operator(d);
    (0..i).fold(ComplexMatrix::identity(d), |acc, _| &acc * &s)
}

/// `eps[S^i X S^{dagger i}]`.
fn shifted_pinching(x: &ComplexMatrix, i: usize) -> ComplexMatrix {
    let si = shift_power(x.rows(), i);
    pinching(&(&(&si * x) * &si.dagger()))
}

/// `tau_{d,k}[X] = ((d - k) eps[X] + sum_{i=1..k} eps[S^i X S^{dagger i}] - X) / (d - 1)`.
pub fn ando_map(d: usize, k: usize) -> Result<MapOperator> {
    if d < 2 || k >= d {
        return Err(Error::InvalidSpec(format!("Ando map needs 0 <= k <= d - 1 (d = {d}, k = {k})")));
    }
    Ok(MapOperator::from_fn(d, |x| {
        let mut out = pinching(x).scale_real((d - k) as f64);
        for i in 1..=k {
            out = &out + &shifted_pinching(x, i);
        }
        (&out - x).scale_real(1.0 / (d - 1) as f64)
    }))
}

/// `X -> (2 eps[X] + sum_{i=2..d-1} eps[S^i X S^{dagger i}] - X) / (d - 1)`: the
/// map obtained with the shift on the computational basis and identity elsewhere.
pub fn shift_permutation_map(d: usize) -> MapOperator {
    MapOperator::from_fn(d, |x| {
        let mut out = pinching(x).scale_real(2.0);
        for i in 2..d {
            out = &out + &shifted_pinching(x, i);
        }
        (&out - x).scale_real(1.0 / (d - 1) as f64)
    })
}

/// `W = (d+L-1)/d I (x) I - sum_a sum_k conj(P^(a)_{pi_a(k)}) (x) P^(a)_k`.
///
/// Equivalent to the general construction with rotation `permutation_rotation(pi_a^{-1})`
/// in slot `a`.
pub fn permutation_witness(family: &MubFamily, perms: &[Vec<usize>]) -> Result<ComplexMatrix> {
    let d = family.dim();
    if perms.len() != family.len() {
        return Err(Error::InvalidSpec(format!(
            "{} permutations for {} bases",
            perms.len(),
            family.len()
        )));
    }
    for p in perms {
        // validates bijection and dimension
        let rot = permutation_rotation(p)?;
        if rot.dim() != d {
            return Err(Error::InvalidRotation(format!("permutation of length {} for d = {d}", p.len())));
        }
    }
    // same validation as the general path for L and unbiasedness
    let rotations: Vec<_> = perms
        .iter()
        .map(|p| permutation_rotation(&inverse_permutation(p)).expect("validated above"))
        .collect();
    witness_from_parts(family, &rotations)?;

    let l = family.len();
    let mut w = ComplexMatrix::identity(d * d).scale_real((d + l - 1) as f64 / d as f64);
    for (basis, perm) in family.bases().iter().zip(perms) {
        let projectors = basis.projectors();
        for (k, pk) in projectors.iter().enumerate() {
            w = &w - &kron(&projectors[perm[k]].conj(), pk);
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;
    use crate::mub::{mub_d3, mub_from_families};
    use crate::witness::{build_witness, MubSource, WitnessSpec};

    fn sample(d: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(d, d, |i, j| C64::new((i * d + j) as f64 * 0.37 - 1.0, (i as f64 - j as f64).sin()))
    }

    #[test]
    fn ando_k0_is_pinching_minus_identity() {
        let x = sample(3);
        let expected = (&pinching(&x).scale_real(3.0) - &x).scale_real(0.5);
        assert!(ando_map(3, 0).unwrap().apply(&x).unwrap().max_abs_diff(&expected) < 1e-15);
        assert!(ando_map(3, 3).is_err());
    }

    #[test]
    fn ando_maps_preserve_trace() {
        for d in [2, 3, 4, 5] {
            for k in 0..d {
                assert!(ando_map(d, k).unwrap().trace_preservation_defect() < 1e-13);
            }
        }
    }

    #[test]
    fn shift_map_is_dual_of_ando_d_minus_2() {
        for d in [3, 4, 5] {
            let dual = ando_map(d, d - 2).unwrap().dual();
            assert!(shift_permutation_map(d).max_abs_diff(&dual) < 1e-13, "d = {d}");
        }
    }

    #[test]
    fn identity_perms_give_reduction_witness() {
        let fam = mub_d3();
        let id: Vec<Vec<usize>> = vec![vec![0, 1, 2]; 4];
        let w = permutation_witness(&fam, &id).unwrap();
        let reduction = reduction_map(3).choi_witness();
        assert!(w.max_abs_diff(&reduction) < 1e-13);
    }

    #[test]
    fn permutation_witness_agrees_with_general_constructor() {
        let fam = mub_from_families(5).unwrap();
        let perms: Vec<Vec<usize>> = vec![
            vec![1, 2, 3, 4, 0],
            vec![0, 1, 2, 3, 4],
            vec![4, 3, 2, 1, 0],
            vec![2, 0, 1, 4, 3],
            vec![0, 2, 4, 1, 3],
            vec![3, 4, 0, 1, 2],
        ];
        let w = permutation_witness(&fam, &perms).unwrap();
        let spec = WitnessSpec::new(
            5,
            perms.iter().map(|p| crate::rotation::RotationSpec::Perm(inverse_permutation(p))).collect(),
            MubSource::PrimeWeyl,
        );
        assert!(w.max_abs_diff(&build_witness(&spec).unwrap()) < 1e-13);
        assert!(w.is_hermitian());
        assert!(permutation_witness(&fam, &perms[..2]).is_err());
    }
}
