use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use sedlab::cd_algebra::{parse_element_text, CdElement, Sedenion};
use sedlab::coeff_solver::{
    default_pairs, format_polynomial, holdout_failures, reference_pairs, parse_pairs, solve_coefficients_for, FitTarget,
};
use sedlab::holonomy::{fit_json, holonomy_report, run_great_circle, sweep, trace_csv, TransportConfig};
use sedlab::invariants::{
    d1, d2_full, d2_geometric, delta, find_annihilator, find_annihilator_exact, is_zero_divisor, kernel_dimension,
    FactorizationReport, DEFAULT_ZD_TOL,
};
use sedlab::manifest::{sibling, RunManifest};
use sedlab::mult_operator::{
    det_exact, left_mult_matrix, left_mult_matrix_with, right_mult_matrix, sedenion_block_matrix, Determinant,
    OperatorMatrix,
};
use sedlab::rng::SeededRng;
use sedlab::sampling::rational_sedenion;
use sedlab::slice_model::{
    contour_csv, field_dump, isosurface, mesh_colors_csv, mesh_obj, mesh_residual, plane_csv, sample_plane_z0,
    SliceParams,
};
use sedlab::{split, BasisTable, Rational, Scalar, SedError};

#[derive(Parser)]
#[command(name = "sedlab", version, about = "Sedenion determinant, zero-divisor, slice and transport experiments")]
struct Cli {
    /// Coerce decimal vector input to exact rationals.
    #[arg(long, global = true)]
    exact: bool,
    /// Manifest path (default: next to the first output, or stderr).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Law {
    /// det M(v) = D1^4 D2^2
    Stated,
    /// det M(v) = D1^4 d2_full^2
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    Left,
    Right,
    Block,
}

#[derive(Subcommand)]
enum Command {
    /// Check the determinant factorization on random or given sedenions.
    Verify {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Coefficients are drawn from [-R, R].
        #[arg(long, default_value_t = 3)]
        coeff_range: i64,
        #[arg(long, default_value_t = 3)]
        max_den: i64,
        /// Check this vector instead of random samples.
        #[arg(long)]
        vector: Option<String>,
        /// Zero the real parts of both octonion halves.
        #[arg(long)]
        pure_imaginary: bool,
        #[arg(long, value_enum, default_value = "stated")]
        law: Law,
        /// JSONL report path.
        #[arg(long, default_value = "verify.jsonl")]
        out: PathBuf,
        /// `I,J`: flip the sign of e_I e_J (negative control).
        #[arg(long, hide = true)]
        corrupt_table: Option<String>,
    },
    /// Solve for the six monomial coefficients.
    Coeffs {
        #[arg(long, conflicts_with = "paper_pairs")]
        pairs: Option<PathBuf>,
        /// Use the six reference pairs; their system is singular.
        #[arg(long)]
        paper_pairs: bool,
        #[arg(long, default_value = "delta")]
        target: FitTarget,
        /// Held-out pairs used to check the fit.
        #[arg(long, default_value_t = 200)]
        holdout: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Sample the cyclic slice and extract the eps level set.
    Slice {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3), default_value_t = 2)]
        dim: u8,
        #[arg(long, default_value_t = 81)]
        grid: usize,
        #[arg(long, default_value_t = 1.0)]
        range: f64,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the raw 3D field.
        #[arg(long)]
        field_dump: bool,
    },
    /// Transport a frame around the great circle and fit the fiber angle.
    Holonomy {
        #[arg(long, default_value_t = 400)]
        steps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_delimiter = ',')]
        sweep: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print D1, D2, det M(v) and the zero-divisor verdict.
    Check {
        vector: String,
        #[arg(long, default_value_t = DEFAULT_ZD_TOL)]
        tol: f64,
    },
    /// Print a unit annihilator w and |v w|.
    Annihilate { vector: String },
    /// Print a multiplication matrix.
    DumpMatrix {
        vector: String,
        #[arg(long, value_enum, default_value = "left")]
        kind: MatrixKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit status and its reason.
struct Failure {
    code: u8,
    message: String,
}

impl From<SedError> for Failure {
    fn from(e: SedError) -> Self {
        let code = match e {
            SedError::SingularSystem { .. } | SedError::NotZeroDivisor | SedError::NotOnLocus => 1,
            SedError::FiberDegenerate | SedError::FiberAngleUndefined => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn counterexample(message: String) -> Failure {
    Failure { code: 1, message }
}

type CmdResult = std::result::Result<(), Failure>;

enum Parsed {
    Exact(Sedenion<Rational>),
    Float(Sedenion<f64>),
}

fn parse_vector(text: &str, exact: bool) -> std::result::Result<Parsed, SedError> {
    let (v, decimal) = parse_element_text(text, 4)?;
    if v.level() != 4 {
        return Err(SedError::WrongLevel { expected: 4, actual: v.level() });
    }
    Ok(if decimal && !exact { Parsed::Float(v.to_f64()) } else { Parsed::Exact(v) })
}

fn configure_threads() {
    if let Some(n) = std::env::var("SEDLAB_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn emit_manifest(m: &RunManifest, explicit: Option<&Path>) {
    let path = explicit.map(Path::to_path_buf).or_else(|| {
        m.outputs.first().map(|o| sibling(Path::new(&o.path), ".manifest.json"))
    });
    match path {
        Some(p) => {
            if let Err(e) = sedlab::manifest::write_atomic(&p, m.to_json().as_bytes()) {
                eprintln!("warning: could not write manifest {}: {e}", p.display());
            }
        }
        None => eprintln!("manifest: {}", serde_json::to_string(m).expect("manifest serializes")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    configure_threads();
    let mut manifest = RunManifest::new(match &cli.command {
        Command::Verify { .. } => "verify",
        Command::Coeffs { .. } => "coeffs",
        Command::Slice { .. } => "slice",
        Command::Holonomy { .. } => "holonomy",
        Command::Check { .. } => "check",
        Command::Annihilate { .. } => "annihilate",
        Command::DumpMatrix { .. } => "dump-matrix",
    });
    manifest.flag("exact", cli.exact);
    let result = run(&cli, &mut manifest);
    emit_manifest(&manifest, cli.manifest.as_deref());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli, m: &mut RunManifest) -> CmdResult {
    match &cli.command {
        Command::Verify { samples, seed, coeff_range, max_den, vector, pure_imaginary, law, out, corrupt_table } => {
            m.flag("samples", samples).flag("seed", seed).flag("coeff-range", coeff_range).flag("max-den", max_den);
            m.flag("pure-imaginary", pure_imaginary).flag("law", name(law));
            if let Some(v) = vector {
                m.flag("vector", v);
            }
            let table = match corrupt_table {
                Some(arg) => {
                    let idx: Vec<usize> = arg.split(',').filter_map(|s| s.trim().parse().ok()).collect();
                    match idx[..] {
                        [i, j] if i < 16 && j < 16 => {
                            m.flag("corrupt-table", arg);
                            Some(BasisTable::cached(4).corrupted(i, j))
                        }
                        _ => return Err(SedError::InvalidParameter("corrupt-table expects I,J below 16".into()).into()),
                    }
                }
                None => None,
            };
            cmd_verify(cli.exact, *samples, *seed, *coeff_range, *max_den, vector.as_deref(), *pure_imaginary, *law, out, table.as_ref(), m)
        }
        Command::Coeffs { pairs, paper_pairs: reference, target, holdout, seed } => {
            m.flag("paper-pairs", reference).flag("target", target).flag("holdout", holdout).flag("seed", seed);
            if let Some(p) = pairs {
                m.flag("pairs", p.display());
            }
            cmd_coeffs(pairs.as_deref(), *reference, *target, *holdout, *seed)
        }
        Command::Slice { dim, grid, range, c, eps, out, field_dump: dump } => {
            m.flag("dim", dim).flag("grid", grid).flag("range", range).flag("c", c).flag("eps", eps);
            let params = SliceParams { c: *c, range: *range, n: *grid, eps: *eps };
            cmd_slice(*dim, &params, out.as_deref(), *dump, m)
        }
        Command::Holonomy { steps, seed, sweep: counts, out } => {
            m.flag("steps", steps).flag("seed", seed);
            if let Some(s) = counts {
                m.flag("sweep", s.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
            }
            cmd_holonomy(*steps, *seed, counts.as_deref(), out.as_deref(), m)
        }
        Command::Check { vector, tol } => {
            m.flag("vector", vector).flag("tol", tol);
            cmd_check(&parse_vector(vector, cli.exact)?, *tol)
        }
        Command::Annihilate { vector } => {
            m.flag("vector", vector);
            cmd_annihilate(&parse_vector(vector, cli.exact)?)
        }
        Command::DumpMatrix { vector, kind, out } => {
            m.flag("vector", vector).flag("kind", name(kind));
            let text = match parse_vector(vector, cli.exact)? {
                Parsed::Exact(v) => matrix(&v, *kind)?.to_text(),
                Parsed::Float(v) => matrix(&v, *kind)?.to_text(),
            };
            match out {
                Some(p) => m.write_output(p, text.as_bytes())?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

fn matrix<T: Scalar>(v: &Sedenion<T>, kind: MatrixKind) -> std::result::Result<OperatorMatrix<T>, SedError> {
    Ok(match kind {
        MatrixKind::Left => left_mult_matrix(v),
        MatrixKind::Right => right_mult_matrix(v),
        MatrixKind::Block => sedenion_block_matrix(&split(v)?),
    })
}

fn factorization<T: Determinant>(v: &Sedenion<T>, law: Law, table: Option<&BasisTable>) -> std::result::Result<FactorizationReport<T>, SedError> {
    let det = match table {
        Some(t) => T::det(&left_mult_matrix_with(v, t)),
        None => delta(v),
    };
    let a = d1(v)?;
    let b = match law {
        Law::Stated => d2_geometric(v)?,
        Law::Full => d2_full(v)?,
    };
    let a2 = a.clone() * a.clone();
    let rhs = a2.clone() * a2 * b.clone() * b.clone();
    let holds = if T::EXACT {
        det == rhs
    } else {
        let (l, r) = (det.to_f64(), rhs.to_f64());
        (l - r).abs() <= 1e-9 * l.abs().max(r.abs()).max(a.to_f64().powi(8))
    };
    Ok(FactorizationReport { v: v.clone(), delta: det, d1: a, d2: b, holds })
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    exact: bool,
    samples: usize,
    seed: u64,
    range: i64,
    max_den: i64,
    vector: Option<&str>,
    pure_imaginary: bool,
    law: Law,
    out: &Path,
    table: Option<&BasisTable>,
    m: &mut RunManifest,
) -> CmdResult {
    if samples == 0 || range < 1 || max_den < 1 {
        return Err(SedError::InvalidParameter("samples, coeff-range and max-den must be positive".into()).into());
    }
    let lines: Vec<(bool, String)> = match vector.map(|v| parse_vector(v, exact)).transpose()? {
        Some(Parsed::Float(v)) => {
            let r = factorization(&v, law, table)?;
            vec![(r.holds, r.to_json_line())]
        }
        Some(Parsed::Exact(v)) => {
            let r = factorization(&v, law, table)?;
            vec![(r.holds, r.to_json_line())]
        }
        None => {
            let mut rng = SeededRng::new(seed);
            let mut vs = Vec::with_capacity(samples);
            while vs.len() < samples {
                let mut v = rational_sedenion(&mut rng, range, max_den);
                if pure_imaginary {
                    let mut c = v.coeffs().to_vec();
                    c[0] = Rational::from_i64(0);
                    c[8] = Rational::from_i64(0);
                    v = CdElement::new(4, c)?;
                }
                if !v.is_zero() {
                    vs.push(v);
                }
            }
            vs.par_iter()
                .map(|v| factorization(v, law, table).map(|r| (r.holds, r.to_json_line())))
                .collect::<std::result::Result<_, _>>()?
        }
    };
    let mut report = String::new();
    for (_, l) in &lines {
        report.push_str(l);
        report.push('\n');
    }
    m.write_output(out, report.as_bytes())?;
    let bad: Vec<&String> = lines.iter().filter(|(h, _)| !h).map(|(_, l)| l).collect();
    println!("{} samples, {} counterexamples", lines.len(), bad.len());
    println!("report: {}", out.display());
    match bad.first() {
        None => Ok(()),
        Some(first) => Err(counterexample(format!("factorization fails; first counterexample {first}"))),
    }
}

fn cmd_coeffs(pairs: Option<&Path>, reference: bool, target: FitTarget, holdout: usize, seed: u64) -> CmdResult {
    let pairs = match (pairs, reference) {
        (Some(p), _) => parse_pairs(&std::fs::read_to_string(p).map_err(SedError::from)?)?,
        (None, true) => reference_pairs(),
        (None, false) => default_pairs(),
    };
    let coeffs = solve_coefficients_for(&pairs, target)?;
    println!("{}", coeffs.iter().map(|c| c.to_text()).collect::<Vec<_>>().join(" "));
    println!("G = {}", format_polynomial(&coeffs));
    let failures = holdout_failures(&coeffs, target, holdout, seed)?;
    if failures > 0 {
        return Err(counterexample(format!("fit disagrees with the target on {failures} of {holdout} held-out pairs")));
    }
    Ok(())
}

fn cmd_slice(dim: u8, params: &SliceParams, out: Option<&Path>, dump: bool, m: &mut RunManifest) -> CmdResult {
    if dim == 2 {
        let s = sample_plane_z0(params)?;
        println!("contour segments: {}", s.contour.segments.len());
        println!("max |D2 - eps| on contour: {:e}", s.contour_residual());
        println!("sub-eps cells: {}, cross-shaped: {}", s.sub_eps_cells().len(), s.cross_shape().is_cross());
        if let Some(p) = out {
            m.write_output(p, plane_csv(&s).as_bytes())?;
            m.write_output(&sibling(p, "_contour.csv"), contour_csv(&s.contour).as_bytes())?;
        }
    } else {
        let (field, mesh) = isosurface(params)?;
        println!("vertices: {}, triangles: {}", mesh.vertices.len(), mesh.triangles.len());
        println!("max |D2 - eps| on mesh: {:e}", mesh_residual(&mesh, params));
        if let Some(p) = out {
            m.write_output(p, mesh_obj(&mesh, params).as_bytes())?;
            m.write_output(&sibling(p, "_colors.csv"), mesh_colors_csv(&mesh).as_bytes())?;
            if dump {
                m.write_output(&sibling(p, "_field.txt"), field_dump(&field, params).as_bytes())?;
            }
        }
    }
    Ok(())
}

fn cmd_holonomy(steps: usize, seed: u64, counts: Option<&[usize]>, out: Option<&Path>, m: &mut RunManifest) -> CmdResult {
    let tr = run_great_circle(&TransportConfig::new(steps, seed))?;
    let fit = fit_json(&tr);
    println!("{fit}");
    let r = holonomy_report(&tr);
    println!("{}", serde_json::to_string(&r).expect("report serializes"));
    println!("max orthogonality error {:e}, max norm error {:e}", tr.max_orth_err(), tr.max_norm_err());
    let sweep_lines = match counts {
        Some(c) => {
            let lines: Vec<String> = sweep(c, seed)?.iter().map(fit_json).collect();
            for l in &lines {
                println!("{l}");
            }
            Some(lines.join("\n") + "\n")
        }
        None => None,
    };
    if let Some(p) = out {
        m.write_output(p, trace_csv(&tr).as_bytes())?;
        m.write_output(&sibling(p, "_fit.json"), (fit + "\n").as_bytes())?;
        if let Some(s) = sweep_lines {
            m.write_output(&sibling(p, "_sweep.jsonl"), s.as_bytes())?;
        }
    }
    Ok(())
}

fn cmd_check(v: &Parsed, tol: f64) -> CmdResult {
    match v {
        Parsed::Exact(v) => {
            let zd = is_zero_divisor(v, 0.0)?;
            let det = det_exact(&left_mult_matrix(v));
            println!("backend: exact");
            println!("D1: {}", d1(v)?.to_text());
            println!("D2: {}", d2_geometric(v)?.to_text());
            println!("d2_full: {}", d2_full(v)?.to_text());
            println!("delta: {}", det.to_text());
            println!("delta (float): {:e}", det.to_f64());
            println!("zero-divisor: {zd}");
            println!("kernel dimension: {}", kernel_dimension(v));
        }
        Parsed::Float(v) => {
            let zd = is_zero_divisor(v, tol)?;
            println!("backend: float");
            println!("D1: {}", d1(v)?);
            println!("D2: {}", d2_geometric(v)?);
            println!("d2_full: {}", d2_full(v)?);
            println!("delta: {:e}", delta(v));
            println!("zero-divisor: {zd}");
        }
    }
    Ok(())
}

fn cmd_annihilate(v: &Parsed) -> CmdResult {
    let (w, residual, dim) = match v {
        Parsed::Exact(v) => {
            let a = find_annihilator_exact(v)?;
            let w = a.unit_f64();
            let r = v.to_f64().multiply(&w)?.norm_sq().sqrt();
            (w, r, a.kernel_dim)
        }
        Parsed::Float(v) => {
            let a = find_annihilator(v)?;
            (a.w, a.residual, a.kernel_dim)
        }
    };
    println!("w: {}", w.to_text());
    println!("|v w|: {residual:e}");
    println!("kernel dimension: {dim}");
    Ok(())
}

fn name(v: &impl ValueEnum) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}
