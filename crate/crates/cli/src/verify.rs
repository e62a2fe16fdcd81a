use std::f64::consts::{PI, TAU};

use mubw_core::blockpos::map_positivity_probe;
use mubw_core::detect::{canonical_rho, detection_scan, grid_angle, ppt_min_eigenvalue, witness_expectation, ScanFamily};
use mubw_core::eigen::min_eigenvalue;
use mubw_core::matrix::{realignment_value, BipartiteDims, ComplexMatrix, C64};
use mubw_core::mub::{mub_d3, mub_from_families, unbiasedness_defect, verify_mub, MubFamily};
use mubw_core::random::{random_matrix, seeded_rng};
use mubw_core::rotation::RotationSpec;
use mubw_core::weyl::{commuting_families, family_commutator_defect, is_prime, weyl_operator, weyl_relation_defect, WeylIndex};
use mubw_core::witness::{
    ando_map, build_map, build_witness, coeffs_torus_to_weyl, shift_permutation_map, torus_spec,
    witness_d3_closed_form, witness_from_weyl, MubSource, TorusPoint, WitnessSpec,
};
use serde::Serialize;

use crate::commands::{to_json, usage, CliResult, Status};
use crate::{Format, Suite, VerifyArgs};

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: String) -> Check {
    Check { name: name.into(), pass, detail }
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    suite: &'a str,
    seed: u64,
    passed: bool,
    checks: &'a [Check],
}

pub fn run(a: VerifyArgs) -> CliResult<Status> {
    let (name, checks) = match a.suite {
        Suite::Mub => ("mub", mub_suite(a.d)?),
        Suite::Weyl => ("weyl", weyl_suite(a.d)?),
        Suite::Theorem1 => ("theorem1", theorem1_suite(a.d.unwrap_or(3), a.samples, a.seed)?),
        Suite::Closedform => ("closedform", closedform_suite(a.seed)?),
        Suite::PaperNumbers => ("paper-numbers", paper_numbers()?),
    };
    let passed = checks.iter().all(|c| c.pass);
    if a.format == Some(Format::Json) {
        println!("{}", to_json(&Summary { suite: name, seed: a.seed, passed, checks: &checks }));
    } else {
        for c in &checks {
            println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let failed = checks.iter().filter(|c| !c.pass).count();
        println!("{name}: {} passed, {failed} failed (seed {})", checks.len() - failed, a.seed);
    }
    Ok(if passed { Status::Ok } else { Status::CheckFailed })
}

fn require_prime(d: usize) -> CliResult<()> {
    if is_prime(d) {
        Ok(())
    } else {
        Err(usage(format!("d = {d} is not prime")))
    }
}

fn mub_check(label: String, f: &MubFamily) -> Check {
    let defect = unbiasedness_defect(f);
    let sums = f
        .bases()
        .iter()
        .map(|b| {
            let s = b.projectors().iter().fold(ComplexMatrix::zeros(f.dim(), f.dim()), |acc, p| &acc + p);
            s.max_abs_diff(&ComplexMatrix::identity(f.dim()))
        })
        .fold(0.0, f64::max);
    check(
        label,
        verify_mub(f) && f.len() == f.dim() + 1 && sums <= 1e-13,
        format!("{} bases, unbiasedness defect {defect:.2e}, projector-sum defect {sums:.2e}", f.len()),
    )
}

fn mub_suite(d: Option<usize>) -> CliResult<Vec<Check>> {
    let dims = match d {
        Some(d) => {
            require_prime(d)?;
            vec![d]
        }
        None => vec![2, 3, 5, 7],
    };
    let mut out = Vec::new();
    if dims.contains(&3) {
        out.push(mub_check("canonical qutrit bases".into(), &mub_d3()));
    }
    for d in dims {
        out.push(mub_check(format!("Weyl eigenbases d={d}"), &mub_from_families(d)?));
    }
    Ok(out)
}

fn weyl_suite(d: Option<usize>) -> CliResult<Vec<Check>> {
    let dims = match d {
        Some(d) => {
            require_prime(d)?;
            vec![d]
        }
        None => vec![2, 3, 5],
    };
    let mut out = Vec::new();
    for d in dims {
        let rel = weyl_relation_defect(d);
        out.push(check(format!("product and adjoint relations d={d}"), rel <= 1e-13, format!("defect {rel:.2e}")));
        let mut unit: f64 = 0.0;
        for k in 0..d {
            for l in 0..d {
                let u = weyl_operator(d, WeylIndex { k, l });
                unit = unit.max((&u * &u.dagger()).max_abs_diff(&ComplexMatrix::identity(d)));
            }
        }
        out.push(check(format!("unitarity d={d}"), unit <= 1e-13, format!("defect {unit:.2e}")));
        let fams = commuting_families(d)?;
        let comm = family_commutator_defect(d, &fams);
        let sizes_ok = fams.len() == d + 1 && fams.iter().all(|f| f.len() == d - 1);
        out.push(check(
            format!("commuting partition d={d}"),
            sizes_ok && comm <= 1e-13,
            format!("{} classes, commutator defect {comm:.2e}", fams.len()),
        ));
    }
    Ok(out)
}

fn theorem1_suite(d: usize, samples: usize, seed: u64) -> CliResult<Vec<Check>> {
    require_prime(d)?;
    let mut rng = seeded_rng(seed);
    let mut specs: Vec<(String, WitnessSpec)> = Vec::new();
    let src = MubSource::default_for(d)?;
    for l in 2..=d + 1 {
        specs.push((format!("identity rotations L={l}"), WitnessSpec::identity(d, l, src.clone())));
    }
    if d == 3 {
        use rand::Rng;
        for l in 2..=4 {
            for _ in 0..5 {
                let angles: Vec<f64> = (0..l).map(|_| rng.random_range(0.0..TAU)).collect();
                specs.push((format!("torus L={l} {angles:.3?}"), WitnessSpec::d3_angles(&angles)));
            }
        }
    } else {
        let shift: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
        let mut rots = vec![RotationSpec::Perm((0..d).collect()); d + 1];
        rots[0] = RotationSpec::Perm(shift);
        specs.push(("shift on first basis".into(), WitnessSpec::new(d, rots, src)));
    }
    let mut out = Vec::new();
    for (i, (label, spec)) in specs.iter().enumerate() {
        let map = build_map(spec)?;
        let r = map_positivity_probe(&map, samples, seed.wrapping_add(i as u64))?;
        let sphere = spec.l == d + 1;
        let sphere_ok = !sphere || (r.purity_margin().abs() <= 1e-10 && (r.min_purity - r.purity_bound).abs() <= 1e-10);
        out.push(check(
            label.clone(),
            r.passed && sphere_ok,
            format!(
                "min eig {:.3e}, max purity - 1/(d-1) = {:.3e}, trace defect {:.2e}{}",
                r.worst_min_eig,
                r.purity_margin(),
                r.worst_trace_defect,
                if sphere { format!(", min purity - 1/(d-1) = {:.3e}", r.min_purity - r.purity_bound) } else { String::new() }
            ),
        ));
    }
    Ok(out)
}

fn closedform_suite(seed: u64) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    for l in 2..=4usize {
        let mut worst: f64 = 0.0;
        for idx in 0..5usize.pow(l as u32) {
            let mut rest = idx;
            let angles: Vec<f64> = (0..l)
                .map(|_| {
                    let a = grid_angle(5, rest % 5);
                    rest /= 5;
                    a
                })
                .collect();
            let t = TorusPoint::new(angles)?;
            worst = worst.max(witness_d3_closed_form(&t).max_abs_diff(&build_witness(&torus_spec(&t))?));
        }
        out.push(check(format!("closed form vs constructor L={l}"), worst < 1e-12, format!("worst deviation {worst:.2e}")));
    }
    use rand::Rng;
    let mut rng = seeded_rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let t = TorusPoint::new((0..4).map(|_| rng.random_range(0.0..TAU)).collect())?;
        worst = worst.max(witness_from_weyl(&coeffs_torus_to_weyl(&t)?)?.max_abs_diff(&witness_d3_closed_form(&t)));
    }
    out.push(check("Weyl form vs closed form", worst < 1e-12, format!("worst deviation {worst:.2e} on 50 points")));
    Ok(out)
}

fn paper_numbers() -> CliResult<Vec<Check>> {
    let rho = canonical_rho();
    let dims = BipartiteDims::square(3);
    let w = build_witness(&WitnessSpec::d3_angles(&[PI, PI, 0.0, 0.0]))?;
    let v = witness_expectation(&rho, &w)?;
    let mut out = vec![check("Tr(rho W) at (pi,pi,0,0)", (v + 2.0 / 15.0).abs() < 1e-12, format!("{v:.15} (expected -2/15)"))];

    let pt = ppt_min_eigenvalue(&rho, dims)?;
    out.push(check("rho is PPT", pt >= -1e-12, format!("min eig(rho^Gamma) = {pt:.3e}")));
    let r = realignment_value(&rho, dims)?;
    out.push(check("realignment R = 1", (r - 1.0).abs() <= 1e-9, format!("R = {r:.12}")));

    let mut mins = Vec::new();
    for a in 0..4 {
        mins.push(detection_scan(&rho, ScanFamily::SingleAngle(a), 720, false)?.min_value);
    }
    let worst = mins.iter().copied().fold(f64::INFINITY, f64::min);
    out.push(check("single-angle families do not detect", worst >= -1e-10, format!("minimum {worst:.3e} on 720 points")));

    let mut rng = seeded_rng(0);
    let map = build_map(&WitnessSpec::identity(3, 4, MubSource::D3Canonical))?;
    let mut dev: f64 = 0.0;
    for _ in 0..100 {
        let x = random_matrix(&mut rng, 3);
        let red = (&ComplexMatrix::identity(3).scale(x.trace()) - &x).scale_real(0.5);
        dev = dev.max(map.apply(&x)?.max_abs_diff(&red));
    }
    out.push(check("identity rotations give the reduction map", dev < 1e-12, format!("deviation {dev:.2e}")));

    let l3 = build_witness(&WitnessSpec::d3_angles(&[PI, 0.0, 0.0]))?;
    let lam = min_eigenvalue(&l3)?;
    let diag_ok = (l3[(0, 0)] - C64::new(4.0 / 3.0, 0.0)).norm() < 1e-12 && (l3[(1, 1)] - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-12;
    out.push(check("L=3 (pi,0,0) witness is PSD", lam >= -1e-12 && diag_ok, format!("min eig {lam:.3e}")));

    let dual = ando_map(3, 1)?.dual();
    let diff = shift_permutation_map(3).max_abs_diff(&dual);
    out.push(check("shift map is dual to tau_{3,1}", diff < 1e-12, format!("deviation {diff:.2e}")));
    Ok(out)
}
