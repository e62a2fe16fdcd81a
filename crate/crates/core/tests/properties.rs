use std::f64::consts::TAU;

use mubw_core::blockpos::{classify, min_product_expectation, SeeSawConfig, WitnessLabel};
use mubw_core::detect::{
    canonical_rho, detection_scan, purity, reconstruct_from_tomography, tomography_coeffs, ScanFamily,
};
use mubw_core::eigen::{hermitian_eigen, reconstruct};
use mubw_core::matrix::{kron, partial_transpose, BipartiteDims, ComplexMatrix, Subsystem, C64};
use mubw_core::mub::{mub_d3, mub_from_families, MubFamily};
use mubw_core::random::{
    haar_vector, random_density_matrix, random_hermitian, random_matrix, random_pure_state, seeded_rng,
};
use mubw_core::rotation::{rodrigues, rotation_nstar_d3, validate_axis_rotation, AxisRotation};
use mubw_core::weyl::{weyl_operator, WeylIndex};
use mubw_core::witness::{
    build_map, build_witness, witness_d3_closed_form, witness_from_weyl, torus_spec, TorusPoint, WeylCoeffs,
    WitnessSpec,
};
use proptest::prelude::*;
use rand::Rng;

fn angles(l: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-TAU..TAU, l)
}

fn torus_angles() -> impl Strategy<Value = Vec<f64>> {
    (2usize..=4).prop_flat_map(angles)
}

fn families() -> Vec<MubFamily> {
    vec![mub_from_families(2).unwrap(), mub_d3(), mub_from_families(5).unwrap()]
}

fn overlap_sum(family: &MubFamily, p: &ComplexMatrix) -> f64 {
    family
        .bases()
        .iter()
        .flat_map(|b| b.projectors())
        .map(|q| p.trace_product(&q).unwrap().re.powi(2))
        .sum()
}

fn random_weyl_coeffs(seed: u64, d: usize) -> WeylCoeffs {
    let mut rng = seeded_rng(seed);
    let mut c = vec![C64::new(0.0, 0.0); d * d];
    c[0] = C64::new((d - 1) as f64, 0.0);
    for k in 0..d {
        for l in 0..d {
            let idx = k * d + l;
            let neg = ((d - k) % d) * d + (d - l) % d;
            if idx == 0 || neg < idx {
                continue;
            }
            let r: f64 = rng.random_range(0.0..=1.0);
            if neg == idx {
                c[idx] = C64::new(if rng.random_bool(0.5) { r } else { -r }, 0.0);
            } else {
                let z = C64::from_polar(r, rng.random_range(0.0..TAU));
                c[idx] = z;
                c[neg] = z.conj();
            }
        }
    }
    WeylCoeffs::new(d, 1.0 / d as f64, c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative_and_bilinear(seed in any::<u64>(), s in -3.0f64..3.0) {
        let mut rng = seeded_rng(seed);
        let a = random_matrix(&mut rng, 2);
        let b = random_matrix(&mut rng, 3);
        let c = random_matrix(&mut rng, 2);
        let b2 = random_matrix(&mut rng, 3);
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
        let sum = kron(&a, &(&b + &b2.scale_real(s)));
        let split = &kron(&a, &b) + &kron(&a, &b2).scale_real(s);
        prop_assert!(sum.max_abs_diff(&split) < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_exact_involution(entries in prop::collection::vec((-64i32..64, -64i32..64), 36)) {
        let data: Vec<C64> = entries.iter().map(|&(r, i)| C64::new(r as f64 / 8.0, i as f64 / 16.0)).collect();
        let m = ComplexMatrix::from_vec(6, 6, data).unwrap();
        let h = (&m + &m.dagger()).scale_real(0.5);
        for dims in [BipartiteDims::new(2, 3), BipartiteDims::new(3, 2)] {
            for sub in [Subsystem::First, Subsystem::Second] {
                let once = partial_transpose(&m, dims, sub).unwrap();
                prop_assert_eq!(partial_transpose(&once, dims, sub).unwrap(), m.clone());
                prop_assert_eq!(once.trace(), m.trace());
                prop_assert!(partial_transpose(&h, dims, sub).unwrap().is_hermitian());
            }
        }
    }

    #[test]
    fn eigen_reconstruction(seed in any::<u64>(), n in 1usize..10) {
        let h = random_hermitian(&mut seeded_rng(seed), n);
        let e = hermitian_eigen(&h).unwrap();
        prop_assert!(reconstruct(&e).max_abs_diff(&h) < 1e-9);
        prop_assert!((e.values.iter().sum::<f64>() - h.trace().re).abs() < 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn weyl_operators_are_unitary(d in 2usize..8, k in 0usize..8, l in 0usize..8) {
        let u = weyl_operator(d, WeylIndex::new(k, l, d));
        prop_assert!((&u * &u.dagger()).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-13);
    }

    #[test]
    fn projector_sums_to_identity_per_basis(idx in 0usize..3) {
        let fam = &families()[idx];
        for b in fam.bases() {
            let sum = b.projectors().iter().fold(ComplexMatrix::zeros(fam.dim(), fam.dim()), |acc, p| &acc + p);
            prop_assert!(sum.max_abs_diff(&ComplexMatrix::identity(fam.dim())) < 1e-13);
        }
    }

    #[test]
    fn overlap_identity_and_inequality(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        for fam in families() {
            let d = fam.dim();
            let p = random_pure_state(&mut rng, d);
            prop_assert!((overlap_sum(&fam, &p) - 2.0).abs() < 1e-10);
            for l in 1..=d {
                let part = fam.truncated(l).unwrap();
                prop_assert!(overlap_sum(&part, &p) <= 1.0 + (l - 1) as f64 / d as f64 + 1e-10);
            }
        }
    }

    #[test]
    fn rotation_one_parameter_group(a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let lhs = rotation_nstar_d3(a).compose(&rotation_nstar_d3(b));
        prop_assert!(lhs.max_abs_diff(&rotation_nstar_d3(a + b)) < 1e-12);
        prop_assert!(validate_axis_rotation(&lhs.rows()));
    }

    #[test]
    fn rodrigues_about_nstar_is_circulant_transpose(phi in -10.0f64..10.0) {
        // the right-handed axis-angle matrix about n* is the circulant at -phi
        let s = 1.0 / 3f64.sqrt();
        let r = rodrigues([s, s, s], phi).unwrap();
        let rows: Vec<Vec<f64>> = r.iter().map(|row| row.to_vec()).collect();
        let rot = AxisRotation::new(rows).unwrap();
        prop_assert!(rot.max_abs_diff(&rotation_nstar_d3(-phi)) < 1e-13);
    }

    #[test]
    fn ball_criterion_and_sphere(a in torus_angles(), seed in any::<u64>()) {
        let l = a.len();
        let map = build_map(&WitnessSpec::d3_angles(&a)).unwrap();
        let mut rng = seeded_rng(seed);
        for _ in 0..20 {
            let out = map.apply(&random_pure_state(&mut rng, 3)).unwrap();
            let pur = purity(&out);
            prop_assert!(pur <= 0.5 + 1e-10);
            if l == 4 {
                prop_assert!((pur - 0.5).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn tomography_and_purity_decomposition(seed in any::<u64>(), idx in 0usize..3) {
        let fam = &families()[idx];
        let d = fam.dim();
        let rho = random_density_matrix(&mut seeded_rng(seed), d);
        let a = tomography_coeffs(&rho, fam).unwrap();
        for basis in &a {
            prop_assert!(basis.iter().sum::<f64>().abs() < 1e-12);
        }
        prop_assert!(reconstruct_from_tomography(&a, fam).max_abs_diff(&rho) < 1e-12);
        let norm2: f64 = a.iter().flatten().map(|x| x * x).sum();
        prop_assert!((purity(&rho) - (1.0 / d as f64 + norm2)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_general_constructor(a in torus_angles()) {
        let t = TorusPoint::new(a).unwrap();
        let general = build_witness(&torus_spec(&t)).unwrap();
        prop_assert!(witness_d3_closed_form(&t).max_abs_diff(&general) < 1e-12);
    }

    #[test]
    fn witness_is_choi_of_map_with_fixed_trace(a in torus_angles()) {
        let spec = WitnessSpec::d3_angles(&a);
        let w = build_witness(&spec).unwrap();
        prop_assert!(w.max_abs_diff(&build_map(&spec).unwrap().choi_witness()) < 1e-12);
        prop_assert!((w.trace() - C64::new(6.0, 0.0)).norm() < 1e-12);
        prop_assert!(build_map(&spec).unwrap().trace_preservation_defect() < 1e-12);
    }

    #[test]
    fn witnesses_nonnegative_on_product_states(a in torus_angles(), seed in any::<u64>()) {
        let w = build_witness(&WitnessSpec::d3_angles(&a)).unwrap();
        let mut rng = seeded_rng(seed);
        for _ in 0..500 {
            let x = haar_vector(&mut rng, 3);
            let y = haar_vector(&mut rng, 3);
            let xy: Vec<C64> = x.iter().flat_map(|p| y.iter().map(move |q| p * q)).collect();
            prop_assert!(w.sandwich(&xy, &xy).re >= -1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn see_saw_monotone_and_deterministic(a in angles(4), seed in any::<u64>()) {
        let w = build_witness(&WitnessSpec::d3_angles(&a)).unwrap();
        let cfg = SeeSawConfig { restarts: 6, ..SeeSawConfig::with_seed(seed) };
        let r = min_product_expectation(&w, BipartiteDims::square(3), &cfg).unwrap();
        for pair in r.history.windows(2) {
            prop_assert!(pair[1] <= pair[0] + 1e-12);
        }
        let again = min_product_expectation(&w, BipartiteDims::square(3), &cfg).unwrap();
        prop_assert_eq!(r.value.to_bits(), again.value.to_bits());
        prop_assert_eq!(r.x, again.x);
    }

    #[test]
    fn scan_minimum_never_increases_under_refinement(n in 1usize..7, m in 2usize..4) {
        let rho = canonical_rho();
        let coarse = detection_scan(&rho, ScanFamily::Torus(2), n, false).unwrap();
        let fine = detection_scan(&rho, ScanFamily::Torus(2), n * m, false).unwrap();
        prop_assert!(fine.min_value <= coarse.min_value);
    }
}

#[test]
fn weyl_form_with_bounded_coefficients_is_never_refuted() {
    let dims3 = BipartiteDims::square(3);
    let dims2 = BipartiteDims::square(2);
    for seed in 0..100u64 {
        let (d, dims) = if seed % 4 == 0 { (2, dims2) } else { (3, dims3) };
        let coeffs = random_weyl_coeffs(seed, d);
        assert!(coeffs.certifies_block_positivity());
        let w = witness_from_weyl(&coeffs).unwrap();
        let cfg = SeeSawConfig { restarts: 20, ..SeeSawConfig::with_seed(seed) };
        let class = classify(&w, dims, &cfg).unwrap();
        assert_ne!(class.label, WitnessLabel::NotBlockPositive, "seed {seed}");
        assert!(class.min_product_value >= -1e-8, "seed {seed}: {}", class.min_product_value);
    }
}

#[test]
fn single_angle_grids_nest_with_the_default_grid() {
    let rho = canonical_rho();
    for a in 0..4 {
        let coarse = detection_scan(&rho, ScanFamily::SingleAngle(a), 24, false).unwrap();
        let fine = detection_scan(&rho, ScanFamily::SingleAngle(a), 720, false).unwrap();
        assert!(fine.min_value <= coarse.min_value);
    }
}
