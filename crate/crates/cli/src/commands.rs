use std::fmt;
use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use mubw_core::angle::parse_angle_list;
use mubw_core::blockpos::{classify as classify_operator, SeeSawConfig};
use mubw_core::detect::{canonical_rho, check_state as check, detection_scan, ScanFamily};
use mubw_core::matrix::{BipartiteDims, ComplexMatrix};
use mubw_core::rotation::RotationSpec;
use mubw_core::witness::{build_witness, MubSource, WitnessFile, WitnessSpec};
use mubw_core::Error;
use serde::Serialize;

use crate::{BuildArgs, CheckStateArgs, ClassifyArgs, ExportArgs, Format, ScanArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Detected = 3,
    CheckFailed = 4,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or input files.
    Usage(String),
    /// A numerical consistency check failed.
    Check(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Check(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Check(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::NoConvergence(_) => CliError::Check(e.to_string()),
            e => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(usage(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports contain only finite numbers and strings")
}

fn parse_perms(raw: &[String]) -> CliResult<Vec<RotationSpec>> {
    raw.iter()
        .flat_map(|s| s.split(';'))
        .filter(|s| !s.trim().is_empty())
        .map(|p| {
            p.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| usage(format!("bad permutation entry `{x}` in `{p}`"))))
                .collect::<CliResult<Vec<usize>>>()
                .map(RotationSpec::Perm)
        })
        .collect()
}

fn parse_rotation_file(path: &Path) -> CliResult<Vec<RotationSpec>> {
    let text = read(path)?;
    if let Ok(specs) = serde_json::from_str::<Vec<RotationSpec>>(&text) {
        return Ok(specs);
    }
    serde_json::from_str::<Vec<Vec<Vec<f64>>>>(&text)
        .map(|ms| ms.into_iter().map(RotationSpec::Matrix).collect())
        .map_err(|e| usage(format!("{}: expected a list of rotation specs or matrices ({e})", path.display())))
}

fn angle_specs(list: &str) -> CliResult<Vec<RotationSpec>> {
    Ok(parse_angle_list(list)?.into_iter().map(RotationSpec::Angle).collect())
}

pub fn build_spec(a: &BuildArgs) -> CliResult<WitnessSpec> {
    let mut rotations = if let Some(list) = &a.angles {
        angle_specs(list)?
    } else if !a.perms.is_empty() {
        parse_perms(&a.perms)?
    } else if let Some(path) = &a.matrix_file {
        parse_rotation_file(path)?
    } else {
        Vec::new()
    };
    let l = a.l.unwrap_or(if rotations.is_empty() { a.d + 1 } else { rotations.len() });
    if rotations.is_empty() {
        rotations = (0..l).map(|_| RotationSpec::Perm((0..a.d).collect())).collect();
    }
    let mub_source = match &a.mubs_file {
        Some(p) => MubSource::File(p.clone()),
        None => MubSource::default_for(a.d)?,
    };
    Ok(WitnessSpec { d: a.d, l, rotations, mub_source })
}

pub fn build(a: BuildArgs) -> CliResult<Status> {
    let spec = build_spec(&a)?;
    let file = WitnessFile::build(spec)?;
    emit(a.out.as_deref(), &file.to_json())?;
    Ok(Status::Ok)
}

pub fn load_state(arg: &str) -> CliResult<ComplexMatrix> {
    if arg == "canonical" {
        return Ok(canonical_rho());
    }
    let path = PathBuf::from(arg);
    Ok(ComplexMatrix::from_json(&read(&path)?)?)
}

/// Witness file with spec, or a bare matrix.
pub fn load_witness(path: &Path) -> CliResult<ComplexMatrix> {
    let text = read(path)?;
    if let Ok(f) = WitnessFile::from_json(&text) {
        return Ok(f.witness);
    }
    ComplexMatrix::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn dims_for(n: usize, d: Option<usize>) -> CliResult<BipartiteDims> {
    match d {
        Some(d) if d > 0 && n.is_multiple_of(d) => Ok(BipartiteDims::new(d, n / d)),
        Some(d) => Err(usage(format!("--d {d} does not divide the dimension {n}"))),
        None => Ok(BipartiteDims::infer_square(n)?),
    }
}

fn torus_witness(list: &str) -> CliResult<ComplexMatrix> {
    Ok(build_witness(&WitnessSpec::d3_angles(&parse_angle_list(list)?))?)
}

pub fn check_state(a: CheckStateArgs) -> CliResult<Status> {
    let rho = load_state(&a.state)?;
    let dims = dims_for(rho.rows(), a.d)?;
    let mut witnesses = a
        .witness
        .iter()
        .map(|p| Ok((p.display().to_string(), load_witness(p)?)))
        .collect::<CliResult<Vec<_>>>()?;
    if let Some(list) = &a.angles {
        witnesses.push((format!("angles:{list}"), torus_witness(list)?));
    }
    let report = check(&rho, dims, &witnesses)?;
    emit(a.out.as_deref(), &to_json(&report))?;
    Ok(if report.detected { Status::Detected } else { Status::Ok })
}

fn parse_family(name: &str, l: usize) -> CliResult<ScanFamily> {
    if name == "torus" {
        return Ok(ScanFamily::Torus(l));
    }
    match name.strip_prefix("single-").and_then(|i| i.parse::<usize>().ok()) {
        Some(i @ 1..=4) => Ok(ScanFamily::SingleAngle(i - 1)),
        _ => Err(usage(format!("unknown family `{name}` (torus, single-1 .. single-4)"))),
    }
}

pub fn scan(a: ScanArgs) -> CliResult<Status> {
    let rho = load_state(&a.state)?;
    let family = parse_family(&a.family, a.l)?;
    let result = detection_scan(&rho, family, a.grid, a.format == Format::Csv)?;
    let text = match a.format {
        Format::Json => to_json(&result),
        Format::Csv => result.to_csv(),
    };
    emit(a.out.as_deref(), text.trim_end())?;
    Ok(if result.report.detected { Status::Detected } else { Status::Ok })
}

pub fn classify(a: ClassifyArgs) -> CliResult<Status> {
    let w = match (&a.witness, &a.angles) {
        (Some(p), _) => load_witness(p)?,
        (None, Some(list)) => torus_witness(list)?,
        (None, None) => return Err(usage("classify needs --witness or --angles")),
    };
    let dims = dims_for(w.rows(), a.d)?;
    let cfg = SeeSawConfig { restarts: a.restarts, max_iters: a.max_iters, conv_tol: a.conv_tol, seed: a.seed };
    let class = classify_operator(&w, dims, &cfg)?;
    emit(a.out.as_deref(), &to_json(&class))?;
    Ok(Status::Ok)
}

pub fn export_mubs(a: ExportArgs) -> CliResult<Status> {
    let source = match a.source.as_deref() {
        None => MubSource::default_for(a.d)?,
        Some("d3-canonical") => MubSource::D3Canonical,
        Some("prime-weyl") => MubSource::PrimeWeyl,
        Some(other) => return Err(usage(format!("unknown source `{other}` (d3-canonical, prime-weyl)"))),
    };
    let family = source.load(a.d)?;
    emit(a.out.as_deref(), &family.to_json())?;
    Ok(Status::Ok)
}
