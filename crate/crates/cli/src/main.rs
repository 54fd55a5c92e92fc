mod corpus;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dualsub::analyze::{
    contractivity_bound, contractivity_range, refine_values, reproduction_degree, reproduction_errors, subdivide_curve,
    Boundary, LineRegularity, RangeSearch, DEFAULT_DEPTH, DEFAULT_LEVELS, DEFAULT_REPRODUCTION_TOL,
};
use dualsub::catalog;
use dualsub::charax::{verify_dual_interpolatory, verify_lemma_form, verify_refinability, IdentityResidual};
use dualsub::construct::{derive, ConstructionProblem, Derivation, SolutionFamily};
use dualsub::exactalg::parse_rational;
use dualsub::io::{parse_samples, read_json, to_json};
use dualsub::{Mask, SampleSet};
use serde::Serialize;

const INFEASIBLE: u8 = 1;
const BAD_INPUT: u8 = 2;
const VIOLATED: u8 = 3;

/// Construction and analysis of dual interpolatory subdivision schemes.
///
/// Masks are given as JSON files or by name: `ternary`, `cantor`,
/// `quaternary-quartic`, `quinary:W`. Samples are JSON files or one of
/// `dd4`, `dd6`, `dd:N`, `mix:W`, `cantor`.
#[derive(Parser, Debug)]
#[command(name = "dualsub", version)]
struct Cli {
    /// Worker threads for sweep and corpus [default: all cores]
    #[arg(long, global = true, env = "DUALSUB_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the construction system for a mask or family of masks.
    Derive {
        #[arg(long)]
        arity: u32,
        /// Polynomial generation degree d (smoothing factor order)
        #[arg(long)]
        smoothing: u32,
        /// Support parameter k*; the mask lives on [1 - k*, k*]
        #[arg(long)]
        kstar: i64,
        #[arg(long)]
        samples: String,
        /// Restrict to masks symmetric about 1/2
        #[arg(long)]
        symmetric: bool,
        /// Output file [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the identity characterizing a mask and its samples.
    Verify {
        #[arg(long)]
        mask: String,
        #[arg(long)]
        samples: String,
        #[arg(long, value_enum, default_value_t = Identity::Auto)]
        identity: Identity,
        /// Lattice density T of the general identity [default: the sample density]
        #[arg(long)]
        lattice: Option<u32>,
    },
    /// Evaluate the refinable function on the lattice Z / (T m^depth).
    Eval {
        #[arg(long)]
        mask: String,
        #[arg(long)]
        samples: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        /// CSV output [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contractivity of the difference scheme certifying C^order.
    Regularity {
        #[arg(long)]
        mask: String,
        #[arg(long, default_value_t = 0)]
        order: u32,
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        levels: u32,
    },
    /// Contractivity along a one-parameter family.
    Sweep {
        /// Family JSON from `derive`
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 0)]
        order: u32,
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        levels: u32,
        /// Parameter interval a:b
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Grid points across the interval
        #[arg(long, default_value_t = 2001)]
        points: usize,
        /// Report the contractive interval, refined by bisection, instead of the grid
        #[arg(long)]
        bisect: bool,
        /// Bisection tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Parametrize by coefficient K scaled by S (parameter = S a_K) instead of the solver's chart
        #[arg(long, value_name = "K:S", allow_hyphen_values = true)]
        coord: Option<String>,
    },
    /// Highest polynomial degree reproduced by the limit function.
    Reproduce {
        #[arg(long)]
        mask: String,
        #[arg(long)]
        samples: String,
        #[arg(long, default_value_t = 4)]
        maxdeg: u32,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        #[arg(long, default_value_t = DEFAULT_REPRODUCTION_TOL)]
        tol: f64,
    },
    /// Subdivide a control polygon given as CSV rows of coordinates.
    Curve {
        #[arg(long)]
        mask: String,
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        steps: u32,
        /// Treat the polygon as closed
        #[arg(long)]
        closed: bool,
        /// CSV output [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive every catalogued mask and print a pass/fail table.
    Corpus {
        /// Also write the derived masks and families to this directory
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Identity {
    /// `dual` when it applies, otherwise `general`
    Auto,
    General,
    Dual,
    Lemma,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(BAD_INPUT);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(BAD_INPUT)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Derive {
            arity,
            smoothing,
            kstar,
            samples,
            symmetric,
            out,
        } => {
            let problem = ConstructionProblem::new(arity, smoothing, kstar, samples_arg(&samples)?, symmetric)?;
            match derive(&problem)? {
                Derivation::Infeasible => {
                    eprintln!("infeasible");
                    Ok(INFEASIBLE)
                }
                Derivation::UniqueMask(mask) => emit(out.as_deref(), &mask).map(|_| 0),
                Derivation::Family(family) => {
                    eprintln!("family of dimension {}", family.dimension());
                    emit(out.as_deref(), &family).map(|_| 0)
                }
            }
        }
        Command::Verify {
            mask,
            samples,
            identity,
            lattice,
        } => {
            let (mask, samples) = (mask_arg(&mask)?, samples_arg(&samples)?);
            let (name, r) = check_identity(&mask, &samples, identity, lattice)?;
            #[derive(Serialize)]
            struct Report<'a> {
                identity: &'a str,
                #[serde(flatten)]
                result: IdentityResidual,
            }
            let satisfied = r.satisfied;
            print_json(&Report {
                identity: name,
                result: r,
            })?;
            Ok(if satisfied { 0 } else { VIOLATED })
        }
        Command::Eval {
            mask,
            samples,
            depth,
            out,
        } => {
            let f = refine_values(&mask_arg(&mask)?, &samples_arg(&samples)?, depth)?;
            let mut w = csv::Writer::from_writer(sink(out.as_deref())?);
            for p in f.points() {
                w.serialize(p)?;
            }
            w.flush()?;
            Ok(0)
        }
        Command::Regularity { mask, order, levels } => {
            let report = contractivity_bound(&mask_arg(&mask)?, order, levels)?;
            print_json(&report)?;
            Ok(0)
        }
        Command::Sweep {
            family,
            order,
            levels,
            range,
            points,
            bisect,
            tol,
            coord,
        } => sweep(&family, order, levels, &range, points, bisect, tol, coord.as_deref()),
        Command::Reproduce {
            mask,
            samples,
            maxdeg,
            depth,
            tol,
        } => {
            let (mask, samples) = (mask_arg(&mask)?, samples_arg(&samples)?);
            #[derive(Serialize)]
            struct Report {
                degree: Option<u32>,
                errors: Vec<f64>,
                tol: f64,
            }
            let report = Report {
                degree: reproduction_degree(&mask, &samples, maxdeg, depth, tol)?,
                errors: reproduction_errors(&mask, &samples, maxdeg, depth)?,
                tol,
            };
            print_json(&report)?;
            Ok(0)
        }
        Command::Curve {
            mask,
            points,
            steps,
            closed,
            out,
        } => {
            let mask = mask_arg(&mask)?;
            let control = read_points(&points)?;
            let boundary = if closed { Boundary::Closed } else { Boundary::Open };
            let line = subdivide_curve(&mask, &control, steps, boundary);
            let dim = control[0].len();
            let mut w = csv::Writer::from_writer(sink(out.as_deref())?);
            let mut header = vec!["t".to_string()];
            header.extend((0..dim).map(|i| match (dim, i) {
                (2..=3, 0) => "x".into(),
                (2..=3, 1) => "y".into(),
                (3, 2) => "z".into(),
                _ => format!("c{i}"),
            }));
            w.write_record(&header)?;
            for (t, p) in line.parameters.iter().zip(&line.points) {
                let mut row = vec![t.to_string()];
                row.extend(p.iter().map(f64::to_string));
                w.write_record(&row)?;
            }
            w.flush()?;
            Ok(0)
        }
        Command::Corpus { emit } => {
            let entries = corpus::run(emit.as_deref())?;
            let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
            let mut failed = 0;
            let mut table = String::new();
            for e in &entries {
                let status = if e.passed { "PASS" } else { "FAIL" };
                failed += usize::from(!e.passed);
                table.push_str(&format!("{status}  {:width$}  {}\n", e.name, e.detail));
            }
            table.push_str(&format!("{} passed, {failed} failed\n", entries.len() - failed));
            io::stdout().lock().write_all(table.as_bytes())?;
            Ok(if failed == 0 { 0 } else { VIOLATED })
        }
    }
}

fn samples_arg(spec: &str) -> Result<SampleSet> {
    parse_samples(spec).with_context(|| format!("samples {spec:?}"))
}

fn mask_arg(spec: &str) -> Result<Mask> {
    match spec {
        "ternary" => return Ok(catalog::ternary_mask()),
        "cantor" => return Ok(catalog::cantor_mask()),
        "quaternary-quartic" => return Ok(catalog::quaternary_quartic_mask()),
        _ => {}
    }
    if let Some(w) = spec.strip_prefix("quinary:") {
        return Ok(catalog::quinary_mask(&parse_rational(w)?));
    }
    read_json(spec).with_context(|| format!("mask {spec:?}"))
}

fn check_identity(
    mask: &Mask,
    samples: &SampleSet,
    identity: Identity,
    lattice: Option<u32>,
) -> Result<(&'static str, IdentityResidual)> {
    let general = |t: Option<u32>| verify_refinability(mask, samples, t.unwrap_or(samples.density()));
    Ok(match identity {
        Identity::General => ("general", general(lattice)?),
        Identity::Dual => ("dual", verify_dual_interpolatory(mask, samples)?),
        Identity::Lemma => ("lemma", verify_lemma_form(mask, samples)?),
        Identity::Auto => match verify_dual_interpolatory(mask, samples) {
            Ok(r) if lattice.is_none() => ("dual", r),
            _ => ("general", general(lattice)?),
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    family: &Path,
    order: u32,
    levels: u32,
    range: &str,
    points: usize,
    bisect: bool,
    tol: f64,
    coord: Option<&str>,
) -> Result<u8> {
    let family: SolutionFamily = read_json(family).with_context(|| format!("family {}", family.display()))?;
    let line = match coord {
        None => family.line()?,
        Some(c) => {
            let (k, s) = c
                .split_once(':')
                .ok_or_else(|| anyhow!("--coord expects K:S, got {c:?}"))?;
            family.line_by_coordinate(k.parse().context("--coord index")?, &parse_rational(s)?)?
        }
    };
    let (a, b) = parse_range(range)?;
    if bisect {
        let (lo, hi) = contractivity_range(&line, order, levels, (a, b), RangeSearch { samples: points, tol })?;
        #[derive(Serialize)]
        struct Range {
            order: u32,
            levels: u32,
            range: [f64; 2],
        }
        print_json(&Range {
            order,
            levels,
            range: [lo, hi],
        })?;
        return Ok(0);
    }
    use rayon::prelude::*;
    let reg = LineRegularity::new(&line, order, levels)?;
    let n = points.max(2);
    let rows: Vec<(f64, Vec<f64>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let t = a + (b - a) * i as f64 / (n - 1) as f64;
            (t, reg.bounds(t))
        })
        .collect();
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    let mut header = vec!["t".to_string()];
    header.extend((1..=levels).map(|l| format!("level{l}")));
    header.push("contractive".into());
    w.write_record(&header)?;
    for (t, bounds) in rows {
        let mut row = vec![t.to_string()];
        let last = bounds.last().copied().unwrap_or(f64::INFINITY);
        row.extend(bounds.iter().map(f64::to_string));
        row.push((last < 1.0).to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(0)
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("--range expects a:b, got {s:?}"))?;
    let (a, b): (f64, f64) = (a.trim().parse()?, b.trim().parse()?);
    if !a.is_finite() || !b.is_finite() || a >= b {
        bail!("empty range {s:?}");
    }
    Ok((a, b))
}

/// Rows of numbers; a leading non-numeric row is taken as a header.
fn read_points(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("points {}", path.display()))?;
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse).collect();
        match row {
            Ok(p) => out.push(p),
            Err(_) if i == 0 => continue,
            Err(e) => bail!("{}: row {}: {e}", path.display(), i + 1),
        }
    }
    let dim = out.first().map_or(0, Vec::len);
    if dim == 0 || out.iter().any(|p| p.len() != dim) {
        bail!("{}: expected rows of equal, nonzero length", path.display());
    }
    Ok(out)
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    emit(None, value)
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<csv::Error>()
                .is_some_and(|e| matches!(e.kind(), csv::ErrorKind::Io(e) if e.kind() == io::ErrorKind::BrokenPipe))
    })
}

fn emit<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut w = sink(path)?;
    writeln!(w, "{}", to_json(value)?)?;
    Ok(())
}
