mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use ptwave_core::asymptotics::{ladder_zero, max_admissible_index};
use ptwave_core::continuation::{atlas, threshold, trace_zero, Branch, Drive};
use ptwave_core::model::eval_f;
use ptwave_core::singularities::{design_for_k_with, gap_certificate, min_scan, scan_gaps, DesignOptions, SingularityPoint};
use ptwave_core::zerofinder::{find_zeros, SearchRegion};
use ptwave_core::{Error, ModelParams};

use table::{Cell, Output, Table};

#[derive(Parser, Debug)]
#[command(name = "ptwave", version, about = "Zeros and spectral singularities of a PT-symmetric double-step waveguide")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DriveArg {
    Ell,
    Gamma,
}

impl From<DriveArg> for Drive {
    fn from(d: DriveArg) -> Self {
        match d {
            DriveArg::Ell => Drive::Ell,
            DriveArg::Gamma => Drive::Gamma,
        }
    }
}

#[derive(Args, Debug)]
struct Point {
    #[arg(long, value_parser = finite)]
    gamma: f64,
    #[arg(long, value_parser = finite, default_value_t = 0.0)]
    ell: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// F and dF/dk at one point.
    Eval {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        k: Complex64,
    },
    /// Zeros of F in a rectangle.
    Zeros {
        #[command(flatten)]
        point: Point,
        /// re0,re1,im0,im1
        #[arg(long, value_parser = window, allow_hyphen_values = true)]
        window: [f64; 4],
        #[arg(long, value_parser = positive, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Ladder zeros against the large-distance expansion.
    Ladder {
        #[command(flatten)]
        point: Point,
        /// Single index; all admissible indices by default.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, value_parser = positive, default_value_t = 1e-13)]
        tol: f64,
    },
    /// Spectral singularities at a prescribed wavenumber.
    Design {
        #[arg(long, value_parser = positive)]
        k: f64,
        #[arg(long, value_parser = positive, default_value_t = 10.0)]
        ell_max: f64,
    },
    /// Minimal amplitude and distance over a wavenumber grid.
    Scan {
        #[arg(long, value_parser = positive, default_value_t = 10.0)]
        kmax: f64,
        #[arg(long, value_parser = positive, default_value_t = 0.01)]
        dk: f64,
    },
    /// The root-free amplitude gap of the solvability condition.
    Gap,
    /// The symmetry-breaking threshold curve.
    Threshold {
        #[arg(long, value_parser = interval, default_value = "0,3")]
        range: (f64, f64),
        #[arg(long, value_parser = positive, default_value_t = 0.05)]
        step: f64,
    },
    /// Singularity curves from the zero-distance seeds and their shifts.
    Atlas {
        #[arg(long, value_parser = positive, default_value_t = 15.0)]
        gamma_max: f64,
        #[arg(long, value_parser = positive, default_value_t = 20.0)]
        ell_max: f64,
    },
    /// Follow one zero while ell or gamma varies.
    Trace {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        k: Complex64,
        #[arg(long, value_enum, default_value_t = DriveArg::Ell)]
        drive: DriveArg,
        #[arg(long, value_parser = interval, allow_hyphen_values = true)]
        range: (f64, f64),
        /// Initial step; range/200 when zero.
        #[arg(long, value_parser = finite, default_value_t = 0.0)]
        step: f64,
    },
}

fn finite(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let x = finite(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{s:?} must be positive"))
    }
}

fn complex(s: &str) -> Result<Complex64, String> {
    let z: Complex64 = s.trim().parse().map_err(|_| format!("{s:?} is not a complex number like 1+0.5i"))?;
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn list(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v = s.split(',').map(finite).collect::<Result<Vec<_>, _>>()?;
    if v.len() == n {
        Ok(v)
    } else {
        Err(format!("expected {n} comma-separated numbers, got {s:?}"))
    }
}

fn window(s: &str) -> Result<[f64; 4], String> {
    let v = list(s, 4)?;
    if !(v[0] < v[1] && v[2] < v[3]) {
        return Err(format!("{s:?} needs re0 < re1 and im0 < im1"));
    }
    Ok([v[0], v[1], v[2], v[3]])
}

fn interval(s: &str) -> Result<(f64, f64), String> {
    let v = list(s, 2)?;
    Ok((v[0], v[1]))
}

fn params(p: &Point) -> Result<ModelParams, Error> {
    ModelParams::new(p.gamma, p.ell)
}

fn run(cmd: &Command) -> Result<Output, Error> {
    match cmd {
        Command::Eval { point, k } => {
            let v = eval_f(*k, params(point)?)?;
            let mut t = Table::new(&["re_k", "im_k", "re_f", "im_f", "re_df", "im_df", "log_scale"]);
            t.push(vec![k.re.into(), k.im.into(), v.f.re.into(), v.f.im.into(), v.df.re.into(), v.df.im.into(), v.log_scale.into()]);
            Ok(Output::new("eval", t))
        }
        Command::Zeros { point, window, tol } => {
            let region = SearchRegion::new(window[0], window[1], window[2], window[3])?;
            let zeros = find_zeros(region, params(point)?, *tol)?;
            let mut t = Table::new(&["re_k", "im_k", "class", "multiplicity", "residual", "newton_iters", "unresolved"]);
            for z in zeros {
                t.push(vec![
                    z.k.re.into(),
                    z.k.im.into(),
                    z.classification.as_str().into(),
                    z.multiplicity.into(),
                    z.residual.into(),
                    z.newton_iters.into(),
                    z.unresolved.into(),
                ]);
            }
            Ok(Output::new("zeros", t))
        }
        Command::Ladder { point, n, tol } => {
            let p = params(point)?;
            let indices: Vec<i64> = match n {
                Some(n) => vec![*n],
                None => (1..=max_admissible_index(p)?.unwrap_or(0)).collect(),
            };
            let mut t = Table::new(&["n", "admissible", "re_pred", "im_pred", "radius", "count", "re_found", "im_found", "distance"]);
            for n in indices {
                let z = ladder_zero(n, p, *tol)?;
                let found = z.found.map(|r| r.k);
                t.push(vec![
                    n.into(),
                    z.prediction.admissible.into(),
                    z.prediction.k_pred.re.into(),
                    z.prediction.k_pred.im.into(),
                    z.prediction.radius.into(),
                    z.count.into(),
                    found.map(|k| k.re).into(),
                    found.map(|k| k.im).into(),
                    found.map(|k| (k - z.prediction.k_pred).norm()).into(),
                ]);
            }
            Ok(Output::new("ladder", t))
        }
        Command::Design { k, ell_max } => {
            let d = design_for_k_with(*k, DesignOptions { ell_max: *ell_max, ..DesignOptions::default() })?;
            let mut summary = Table::new(&["k", "range_exhausted", "beta_min"]);
            summary.push(vec![d.k.into(), d.range_exhausted.into(), d.beta_roots.first().copied().into()]);
            Ok(Output::new("design", point_table(&d.points)).with("summary", summary))
        }
        Command::Scan { kmax, dk } => {
            let rows = min_scan(*kmax, *dk)?;
            let mut t = Table::new(&["k", "gamma_min", "ell_min", "ell_1", "ell_2", "ell_3"]);
            for r in &rows {
                let fam = |j: usize| r.ell_family.get(j).copied();
                t.push(vec![r.k.into(), r.gamma_min.into(), r.ell_min.into(), fam(1).into(), fam(2).into(), fam(3).into()]);
            }
            let gaps = scan_gaps(&rows);
            let mut jumps = Table::new(&["field", "k_before", "k_after", "before", "after"]);
            for j in &gaps.jumps {
                let field = serde_json::to_value(j.field).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                jumps.push(vec![field.into(), j.k_before.into(), j.k_after.into(), j.before.into(), j.after.into()]);
            }
            let mut empty = Table::new(&["k"]);
            for k in &gaps.empty {
                empty.push(vec![(*k).into()]);
            }
            Ok(Output::new("scan", t).with("jumps", jumps).with("empty", empty))
        }
        Command::Gap => {
            let c = gap_certificate()?;
            let (g0, g1) = c.gamma_gap();
            let mut t = Table::new(&["beta_lo", "beta_hi", "u_star", "beta_star", "grid_margin", "gamma_lo", "gamma_hi", "by_bisection"]);
            t.push(vec![
                c.beta_lo.into(),
                c.beta_hi.into(),
                c.u_star.into(),
                c.beta_star.into(),
                c.grid_margin.into(),
                g0.into(),
                g1.into(),
                c.by_bisection.into(),
            ]);
            Ok(Output::new("gap", t))
        }
        Command::Threshold { range, step } => {
            let b = threshold(*range, *step)?;
            Ok(Output::new("threshold", branch_table(&[b])))
        }
        Command::Atlas { gamma_max, ell_max } => {
            let a = atlas(*gamma_max, *ell_max)?;
            let mut inter = Table::new(&["branch_a", "branch_b", "ell", "gamma", "k_a", "k_b"]);
            for x in &a.intersections {
                inter.push(vec![x.branch_a.into(), x.branch_b.into(), x.ell.into(), x.gamma.into(), x.k_a.into(), x.k_b.into()]);
            }
            Ok(Output::new("atlas", branch_table(&a.branches))
                .with("seeds", point_table(&a.seeds))
                .with("intersections", inter))
        }
        Command::Trace { point, k, drive, range, step } => {
            let b = trace_zero(*k, params(point)?, (*drive).into(), *range, *step)?;
            let mut events = Table::new(&["param", "re_k", "im_k", "downward"]);
            for e in &b.events {
                events.push(vec![e.param.into(), e.k.re.into(), e.k.im.into(), e.downward.into()]);
            }
            Ok(Output::new("trace", branch_table(&[b])).with("events", events))
        }
    }
}

fn point_table(points: &[SingularityPoint]) -> Table {
    let mut t = Table::new(&["k", "gamma", "ell", "u", "beta", "n", "residual", "flagged"]);
    for p in points {
        t.push(vec![p.k.into(), p.gamma.into(), p.ell.into(), p.u.into(), p.beta.into(), p.n.into(), p.residual.into(), p.flagged.into()]);
    }
    t
}

fn branch_table(branches: &[Branch]) -> Table {
    let mut t = Table::new(&["ell", "gamma", "re_k", "im_k", "kind", "seed_id", "flags", "shift", "branch"]);
    for (i, b) in branches.iter().enumerate() {
        let seed = b.origin.seed_id.map_or(Cell::Empty, Cell::from);
        for p in &b.points {
            t.push(vec![
                p.params.ell.into(),
                p.params.gamma.into(),
                p.k.re.into(),
                p.k.im.into(),
                b.kind.as_str().into(),
                seed.clone(),
                b.flags.labels().into(),
                b.origin.shift.into(),
                i.into(),
            ]);
        }
    }
    t
}

fn emit(out: &Output, format: Format, path: Option<&PathBuf>) -> io::Result<()> {
    let mut w: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match format {
        Format::Csv => out.write_csv(&mut w).map_err(io::Error::other)?,
        Format::Json => out.write_json(&mut w)?,
    }
    w.flush()
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain { .. } => "domain",
        Error::Contour { .. } => "contour",
        Error::Accuracy { .. } => "accuracy",
        Error::Consistency { .. } => "consistency",
        Error::Convergence { .. } => "convergence",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(out) => match emit(&out, cli.format, cli.out.as_ref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{}", json!({ "error": "io", "message": e.to_string() }));
                ExitCode::from(1)
            }
        },
        Err(e) => {
            let record = json!({
                "error": error_kind(&e),
                "module": e.module().as_str(),
                "message": e.to_string(),
            });
            eprintln!("{record}");
            ExitCode::from(3)
        }
    }
}
