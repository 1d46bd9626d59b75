//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::dpw::{grid_sample, GridSpec, SurfaceSample, DEFAULT_TOL};
use crate::geometry::{homogeneity_residual, pipeline_residuals, symmetry_residual, ResidualReport, HOMOGENEITY_TS};
use crate::painleve::{solve_piii_with, PainleveParams, SolveOptions, DEFAULT_S0};
use crate::periodicity::ClosingProblem;
use crate::potentials::{homogeneity_params, PotentialKind, PotentialSpec, SpecDocument};
use crate::su3_loop::DEFAULT_TRUNC;
use crate::{ComplexMatrix3, Error};

/// Exit status of a successful run.
pub const EXIT_OK: i32 = 0;
/// Malformed spec, grid or flag.
pub const EXIT_SCHEMA: i32 = 2;
/// A numerical module failed.
pub const EXIT_NUMERIC: i32 = 3;
/// A validation residual exceeded its threshold.
pub const EXIT_THRESHOLD: i32 = 4;

/// Thresholds applied by `validate`.
pub const STRUCTURE_THRESHOLD: f64 = 1e-5;
pub const TZITZEICA_THRESHOLD: f64 = 1e-4;
pub const CODAZZI_THRESHOLD: f64 = 1e-5;
pub const UNITARITY_THRESHOLD: f64 = 1e-8;
/// Threshold applied by `symmetry`.
pub const SYMMETRY_THRESHOLD: f64 = 1e-7;
/// Finite-difference spacing of `validate`.
pub const STENCIL_H: f64 = 1e-3;
/// Spacing of the second-derivative cubic-form check.
pub const PSI_STENCIL_H: f64 = 1e-2;

#[derive(Debug, Parser)]
#[command(name = "lagdpw", version, about = "Minimal Lagrangian surfaces in CP² by the loop-group method")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a surface on a grid and write samples.csv, report.json and mesh.obj.
    Build(CommonArgs),
    /// Certify a surface by finite-difference residuals; exit 4 above threshold.
    Validate(CommonArgs),
    /// Integrate the radial Painlevé III profile and write painleve.csv.
    Painleve(PainleveArgs),
    /// Solve the Clifford closing conditions for one lattice point.
    Closing(ClosingArgs),
    /// Measure the rotational or homogeneity symmetry of a spec.
    Symmetry(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Obj,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Potential spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Grid as JSON or `cartesian:EXTENT:NX:NY`, `polar:R_MIN:RADIUS:N_R:N_THETA`, `ray:RADIUS:N:ANGLE`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Arguments θ of the spectral values λ₀ = e^{iθ}, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub lambda: Vec<f64>,
    /// Fourier truncation per side; defaults to the spec's value or 16.
    #[arg(long)]
    pub trunc: Option<usize>,
    /// ODE tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Artifacts to write.
    #[arg(long, value_delimiter = ',', default_value = "csv,json")]
    pub format: Vec<Format>,
    /// Lift components used as mesh coordinates, from re1 im1 re2 im2 re3 im3.
    #[arg(long, default_value = "re1,im1,re2")]
    pub project: String,
}

#[derive(Debug, Clone, Args)]
pub struct PainleveArgs {
    /// Radial spec supplying k, n, |ψ₀| and |a_k|; overrides the numeric flags.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 1.0)]
    pub psi0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub ak: f64,
    #[arg(long, default_value_t = DEFAULT_S0)]
    pub s0: f64,
    #[arg(long, default_value_t = 10.0)]
    pub s_max: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ClosingArgs {
    /// Lattice integers l1,l2,l3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1, required = true)]
    pub l: Vec<i64>,
    /// Argument θ of λ₀ = e^{iθ}.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Also write closing.json here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated run configuration shared by the grid commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: PotentialSpec,
    pub name: String,
    pub grid: GridSpec,
    pub lambdas: Vec<Complex64>,
    pub trunc: usize,
    pub tol: f64,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
    pub project: [usize; 3],
}

/// Failure carrying its exit status and machine-readable body.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub body: serde_json::Value,
}

impl CliError {
    fn schema(path: &str, message: impl Into<String>) -> Self {
        let message = message.into();
        Self { code: EXIT_SCHEMA, body: json!({ "error": "schema", "path": path, "message": message }) }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self { code: EXIT_NUMERIC, body: json!({ "error": "io", "path": path.display().to_string(), "message": e.to_string() }) }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match &e {
            Error::Schema { path, message } => Self::schema(path, message.clone()),
            _ => Self { code: EXIT_NUMERIC, body: json!({ "error": error_kind(&e), "message": e.to_string() }) },
        }
    }
}

/// Stable identifier of an error variant.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::SingularLoop(_) => "singular_loop",
        Error::OutsideBigCell(_) => "outside_big_cell",
        Error::IllConditioned(_) => "ill_conditioned",
        Error::NotVacuum(..) => "not_vacuum",
        Error::PoleAtOrigin => "pole_at_origin",
        Error::PoleOnPath(_) => "pole_on_path",
        Error::TruncationOverflow(_) => "truncation_overflow",
        Error::GridTooCoarse(_) => "grid_too_coarse",
        Error::DomainError(..) => "domain_error",
        Error::SeedTooLarge(_) => "seed_too_large",
        Error::NotRadialPIII(_) => "not_radial_piii",
        Error::StepUnderflow(_) => "step_underflow",
        Error::Schema { .. } => "schema",
    }
}

/// Parse and validate a spec file.
pub fn parse_spec(path: &Path) -> Result<(PotentialSpec, SpecDocument), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::schema("$", format!("cannot read {}: {e}", path.display())))?;
    let doc = SpecDocument::from_json(&text)?;
    let spec = doc.to_spec()?;
    Ok((spec, doc))
}

/// Parse the `--grid` flag.
pub fn parse_grid(text: &str) -> Result<GridSpec, CliError> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| CliError::schema("--grid", e.to_string()));
    }
    let parts: Vec<&str> = trimmed.split(':').collect();
    let num = |i: usize| -> Result<f64, CliError> {
        parts.get(i).and_then(|s| s.parse::<f64>().ok()).ok_or_else(|| CliError::schema("--grid", format!("field {i} of `{trimmed}` is not a number")))
    };
    let count = |i: usize| -> Result<usize, CliError> {
        parts.get(i).and_then(|s| s.parse::<usize>().ok()).ok_or_else(|| CliError::schema("--grid", format!("field {i} of `{trimmed}` is not a count")))
    };
    match parts[0] {
        "cartesian" if parts.len() == 4 => Ok(GridSpec::Cartesian { extent: num(1)?, nx: count(2)?, ny: count(3)? }),
        "polar" if parts.len() == 5 => Ok(GridSpec::Polar { r_min: num(1)?, radius: num(2)?, n_r: count(3)?, n_theta: count(4)? }),
        "ray" if parts.len() == 4 => Ok(GridSpec::Ray { radius: num(1)?, n: count(2)?, angle: num(3)? }),
        _ => Err(CliError::schema("--grid", format!("unrecognized grid `{trimmed}`"))),
    }
}

fn grid_counts(grid: &GridSpec) -> Vec<usize> {
    match *grid {
        GridSpec::Cartesian { nx, ny, .. } => vec![nx, ny],
        GridSpec::Polar { n_r, n_theta, .. } => vec![n_r, n_theta],
        GridSpec::Ray { n, .. } => vec![n],
    }
}

fn parse_projection(text: &str) -> Result<[usize; 3], CliError> {
    let names = ["re1", "im1", "re2", "im2", "re3", "im3"];
    let idx: Vec<usize> = text
        .split(',')
        .map(|t| names.iter().position(|n| *n == t.trim()).ok_or_else(|| CliError::schema("--project", format!("unknown component `{t}`"))))
        .collect::<Result<_, _>>()?;
    idx.try_into().map_err(|_| CliError::schema("--project", "exactly three components are required"))
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self, CliError> {
        let (spec, doc) = parse_spec(&args.spec)?;
        let grid = match (&args.grid, &doc.grid) {
            (Some(g), _) => parse_grid(g)?,
            (None, Some(g)) => g.clone(),
            (None, None) => GridSpec::Cartesian { extent: 1.0, nx: 8, ny: 8 },
        };
        if grid_counts(&grid).iter().any(|&c| c < 1) {
            return Err(CliError::schema("grid", "grid counts must be at least 1"));
        }
        let trunc = args.trunc.or(doc.trunc).unwrap_or(DEFAULT_TRUNC);
        if trunc < 4 {
            return Err(CliError::schema("--trunc", "truncation must be at least 4"));
        }
        if !(args.tol > 0.0 && args.tol <= 1e-4) {
            return Err(CliError::schema("--tol", "tolerance must lie in (0, 1e-4]"));
        }
        if args.lambda.is_empty() || args.lambda.iter().any(|t| !t.is_finite()) {
            return Err(CliError::schema("--lambda", "at least one finite angle is required"));
        }
        let name = doc.name.clone().unwrap_or_else(|| args.spec.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
        Ok(Self {
            spec,
            name,
            grid,
            lambdas: args.lambda.iter().map(|&t| Complex64::from_polar(1.0, t)).collect(),
            trunc,
            tol: args.tol,
            out_dir: args.out.clone(),
            formats: args.format.clone(),
            project: parse_projection(&args.project)?,
        })
    }

    fn normalization_note(&self) -> serde_json::Value {
        match &self.spec.normalization {
            Some(n) => json!({
                "coordinate_scale": [n.coordinate_scale.re, n.coordinate_scale.im],
                "gauge_phase": n.gauge_phase,
            }),
            None => serde_json::Value::Null,
        }
    }
}

/// CSV header of `samples.csv`.
pub const CSV_HEADER: &str = "z_re,z_im,lambda_re,lambda_im,f1_re,f1_im,f2_re,f2_im,f3_re,f3_im,u,psi_re,psi_im,v0_re,v0_im,singular,residual,tail_norm";

/// One `samples.csv` row, floats in 17-significant-digit scientific notation.
pub fn csv_row(s: &SurfaceSample) -> String {
    let mut fields: Vec<f64> = vec![s.z.re, s.z.im, s.lambda0.re, s.lambda0.im];
    for c in &s.lift {
        fields.extend([c.re, c.im]);
    }
    fields.extend([s.u, s.psi.re, s.psi.im, s.v0.re, s.v0.im]);
    let mut row: Vec<String> = fields.iter().map(|x| format!("{x:.16e}")).collect();
    row.push(u8::from(s.singular).to_string());
    row.push(format!("{:.16e}", s.residual));
    row.push(format!("{:.16e}", s.tail_norm));
    row.join(",")
}

fn component(s: &SurfaceSample, idx: usize) -> f64 {
    let c = s.lift[idx / 2];
    if idx % 2 == 0 {
        c.re
    } else {
        c.im
    }
}

/// Wavefront OBJ of the projected lift, one object per `λ₀`.
///
/// A visualization aid: three real coordinates of the lift in `ℝ⁶`, not an
/// isometric picture of the surface.
pub fn mesh_obj(grid: &GridSpec, samples: &[SurfaceSample], lambdas: usize, project: [usize; 3]) -> String {
    let nodes = samples.len() / lambdas.max(1);
    let mut out = String::from("# lagdpw mesh: projection of the horizontal lift\n");
    let quads: Vec<[usize; 4]> = match *grid {
        GridSpec::Cartesian { nx, ny, .. } => (0..ny.saturating_sub(1))
            .flat_map(|j| (0..nx.saturating_sub(1)).map(move |i| [j * nx + i, j * nx + i + 1, (j + 1) * nx + i + 1, (j + 1) * nx + i]))
            .collect(),
        GridSpec::Polar { n_r, n_theta, .. } => (0..n_r.saturating_sub(1))
            .flat_map(|i| (0..n_theta).map(move |j| [i * n_theta + j, i * n_theta + (j + 1) % n_theta, (i + 1) * n_theta + (j + 1) % n_theta, (i + 1) * n_theta + j]))
            .collect(),
        GridSpec::Ray { .. } => Vec::new(),
    };
    for l in 0..lambdas {
        out.push_str(&format!("o lambda_{l}\n"));
        let at = |node: usize| &samples[node * lambdas + l];
        for node in 0..nodes {
            let s = at(node);
            out.push_str(&format!("v {:.16e} {:.16e} {:.16e}\n", component(s, project[0]), component(s, project[1]), component(s, project[2])));
        }
        let base = l * nodes + 1;
        for q in &quads {
            if q.iter().any(|&v| at(v).singular) {
                continue;
            }
            out.push_str(&format!("f {} {} {}\n", base + q[0], base + q[1], base + q[2]));
            out.push_str(&format!("f {} {} {}\n", base + q[0], base + q[2], base + q[3]));
        }
    }
    out
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report values serialize") + "\n"
}

fn fold_max(samples: &[SurfaceSample], f: impl Fn(&SurfaceSample) -> f64) -> f64 {
    samples.iter().filter(|s| !s.singular).map(f).fold(0.0, f64::max)
}

/// `build`: sample the grid and write the artifacts.
pub fn build(config: &RunConfig) -> Result<i32, CliError> {
    let nodes = config.grid.nodes();
    let result = grid_sample(&config.spec, &nodes, &config.lambdas, config.trunc, config.tol);
    let samples = &result.samples;
    if config.formats.contains(&Format::Csv) {
        let mut text = String::with_capacity(samples.len() * 400);
        text.push_str(CSV_HEADER);
        text.push('\n');
        for s in samples {
            text.push_str(&csv_row(s));
            text.push('\n');
        }
        write_file(&config.out_dir, "samples.csv", &text)?;
    }
    let errors: Vec<serde_json::Value> = result
        .frames
        .errors
        .iter()
        .map(|(idx, z, e)| json!({ "node": idx, "z": [z.re, z.im], "error": error_kind(e), "message": e.to_string() }))
        .collect();
    if config.formats.contains(&Format::Json) {
        let report = json!({
            "spec": config.name,
            "nodes": nodes.len(),
            "lambdas": config.lambdas.len(),
            "trunc": config.trunc,
            "singular_samples": samples.iter().filter(|s| s.singular).count(),
            "max_factorization_residual": fold_max(samples, |s| s.residual),
            "max_tail_norm": fold_max(samples, |s| s.tail_norm),
            "max_unitarity_defect": fold_max(samples, |s| s.unitarity),
            "max_determinant_defect": fold_max(samples, |s| s.det_defect),
            "normalization": config.normalization_note(),
            "errors": errors,
        });
        write_file(&config.out_dir, "report.json", &pretty(&report))?;
    }
    if config.formats.contains(&Format::Obj) {
        write_file(&config.out_dir, "mesh.obj", &mesh_obj(&config.grid, samples, config.lambdas.len(), config.project))?;
    }
    if let Some((_, _, e)) = result.frames.errors.first() {
        let mut err = CliError::from(e.clone());
        err.code = EXIT_NUMERIC;
        err.body["failed_nodes"] = json!(errors.len());
        return Err(err);
    }
    Ok(EXIT_OK)
}

/// Residual report plus thresholds, as written to `report.json` by `validate`.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub spec: String,
    pub residuals: ResidualReport,
    pub max_tail_norm: f64,
    pub max_factorization_residual: f64,
    pub thresholds: serde_json::Value,
    pub passed: bool,
    pub normalization: serde_json::Value,
}

/// `validate`: residuals on stencil patches centred at every grid node, at the first `λ₀`.
pub fn validate(config: &RunConfig) -> Result<(i32, ValidationReport), CliError> {
    let nodes = config.grid.nodes();
    let lambda0 = config.lambdas[0];
    let residuals = pipeline_residuals(&config.spec, &nodes, STENCIL_H, Some(PSI_STENCIL_H), lambda0, config.trunc, config.tol)?;
    let samples = grid_sample(&config.spec, &nodes, &[lambda0], config.trunc, config.tol);
    if let Some((_, _, e)) = samples.frames.errors.first() {
        return Err(e.clone().into());
    }
    let r = &residuals;
    let passed = r.horizontality < STRUCTURE_THRESHOLD
        && r.conformality < STRUCTURE_THRESHOLD
        && r.unitarity < UNITARITY_THRESHOLD
        && r.determinant < UNITARITY_THRESHOLD
        && r.tzitzeica < TZITZEICA_THRESHOLD
        && r.codazzi < CODAZZI_THRESHOLD
        && r.psi_lift.is_none_or(|x| x < STRUCTURE_THRESHOLD);
    let report = ValidationReport {
        spec: config.name.clone(),
        residuals,
        max_tail_norm: fold_max(&samples.samples, |s| s.tail_norm),
        max_factorization_residual: fold_max(&samples.samples, |s| s.residual),
        thresholds: json!({
            "horizontality": STRUCTURE_THRESHOLD,
            "conformality": STRUCTURE_THRESHOLD,
            "unitarity": UNITARITY_THRESHOLD,
            "determinant": UNITARITY_THRESHOLD,
            "tzitzeica": TZITZEICA_THRESHOLD,
            "codazzi": CODAZZI_THRESHOLD,
            "psi_lift": STRUCTURE_THRESHOLD,
        }),
        passed,
        normalization: config.normalization_note(),
    };
    write_file(&config.out_dir, "report.json", &pretty(&report))?;
    Ok((if passed { EXIT_OK } else { EXIT_THRESHOLD }, report))
}


/// `symmetry`: rotational specs compare `f(e^{2πi/m}z)` with `T f(z)`;
/// radial specs compare `F(p_t z, q_t λ)` with `T F(z, λ) T⁻¹`.
pub fn symmetry(config: &RunConfig) -> Result<(i32, serde_json::Value), CliError> {
    let nodes = config.grid.nodes();
    let lambda0 = config.lambdas[0];
    let spec = &config.spec;
    let body = if let (PotentialKind::Rotational, Some(m)) = (spec.kind, spec.m) {
        let rot = Complex64::from_polar(1.0, std::f64::consts::TAU / m as f64);
        let t = ComplexMatrix3::diag([rot, rot.conj(), Complex64::new(1.0, 0.0)]);
        let residual = symmetry_residual(spec, |z| rot * z, &t, &nodes, lambda0, config.trunc)?;
        json!({ "spec": config.name, "kind": "rotational", "m": m, "residual": residual })
    } else if let Some((k, n, _, _)) = spec.radial_params() {
        let data = homogeneity_params(k, n, 1.0);
        let residual = homogeneity_residual(spec, &data, &HOMOGENEITY_TS, &nodes, lambda0, config.trunc)?;
        json!({ "spec": config.name, "kind": "homogeneity", "k": k, "n": n, "t": HOMOGENEITY_TS, "residual": residual })
    } else {
        return Err(CliError::schema("$.kind", "symmetry needs a rotational or radial spec"));
    };
    let residual = body["residual"].as_f64().unwrap_or(f64::INFINITY);
    let mut body = body;
    body["threshold"] = json!(SYMMETRY_THRESHOLD);
    body["passed"] = json!(residual < SYMMETRY_THRESHOLD);
    write_file(&config.out_dir, "symmetry.json", &pretty(&body))?;
    Ok((if residual < SYMMETRY_THRESHOLD { EXIT_OK } else { EXIT_THRESHOLD }, body))
}

/// `painleve`: integrate and write `painleve.csv`; the summary goes to stdout.
pub fn painleve(args: &PainleveArgs) -> Result<(i32, serde_json::Value), CliError> {
    let params = match &args.spec {
        Some(path) => PainleveParams::from_spec(&parse_spec(path)?.0)?,
        None => {
            if !(args.psi0 > 0.0 && args.ak > 0.0) {
                return Err(CliError::schema("--psi0", "|ψ₀| and |a_k| must be positive"));
            }
            PainleveParams::new(args.k, args.n, args.psi0, args.ak)
        }
    };
    if !(args.tol > 0.0 && args.tol <= 1e-4) {
        return Err(CliError::schema("--tol", "tolerance must lie in (0, 1e-4]"));
    }
    if !(args.s0 > 0.0 && args.s_max >= args.s0) {
        return Err(CliError::schema("--s-max", "need 0 < s0 <= s_max"));
    }
    let sol = solve_piii_with(&params, args.s_max, &SolveOptions { s0: args.s0, tol: args.tol, ..SolveOptions::default() })?;
    let mut buf = Vec::new();
    sol.write_csv(&mut buf).map_err(|e| CliError::io(&args.out, e))?;
    write_file(&args.out, "painleve.csv", &String::from_utf8(buf).expect("CSV is ASCII"))?;
    let summary = json!({
        "k": params.k,
        "n": params.n,
        "psi0_abs": params.psi0_abs,
        "ak_abs": params.ak_abs,
        "samples": sol.s_samples.len(),
        "s_end": sol.s_max(),
        "max_residual": sol.max_residual,
        "blowup_at": sol.blowup_at,
    });
    Ok((EXIT_OK, summary))
}

/// `closing`: solve the closing problem and report it as JSON.
pub fn closing(args: &ClosingArgs) -> Result<(i32, serde_json::Value), CliError> {
    let [l1, l2, l3]: [i64; 3] = args.l.clone().try_into().map_err(|_| CliError::schema("--l", "exactly three integers are required"))?;
    if !args.lambda.is_finite() {
        return Err(CliError::schema("--lambda", "angle must be finite"));
    }
    let problem = ClosingProblem::solve(l1, l2, l3, Complex64::from_polar(1.0, args.lambda));
    let value = serde_json::to_value(problem).expect("closing problem serializes");
    if let Some(dir) = &args.out {
        write_file(dir, "closing.json", &pretty(&value))?;
    }
    Ok((EXIT_OK, value))
}

/// Execute a parsed command line; returns the exit status.
pub fn run(cli: Cli, stdout: &mut impl Write, stderr: &mut impl Write) -> i32 {
    let result: Result<i32, CliError> = (|| match &cli.command {
        Command::Build(args) => {
            let config = RunConfig::from_args(args)?;
            note_normalization(&config, stderr);
            build(&config)
        }
        Command::Validate(args) => {
            let config = RunConfig::from_args(args)?;
            note_normalization(&config, stderr);
            let (code, report) = validate(&config)?;
            let _ = writeln!(stdout, "{}", serde_json::to_string(&report).expect("report serializes"));
            Ok(code)
        }
        Command::Symmetry(args) => {
            let config = RunConfig::from_args(args)?;
            let (code, body) = symmetry(&config)?;
            let _ = writeln!(stdout, "{body}");
            Ok(code)
        }
        Command::Painleve(args) => {
            let (code, body) = painleve(args)?;
            let _ = writeln!(stdout, "{body}");
            Ok(code)
        }
        Command::Closing(args) => {
            let (code, body) = closing(args)?;
            let _ = writeln!(stdout, "{body}");
            Ok(code)
        }
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.body);
            e.code
        }
    }
}

fn note_normalization(config: &RunConfig, stderr: &mut impl Write) {
    if config.spec.normalization.is_some() {
        let _ = writeln!(stderr, "{}", json!({ "note": "normalization", "applied": config.normalization_note() }));
    }
}
