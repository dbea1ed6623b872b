use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pathgroup::geodesic::exp_point;
use pathgroup::group::{classify, reduce_to_origin};
use pathgroup::optimality::{
    conjugate_time, cut_info, cut_locus_margin, cut_time, cut_time_at_point, in_cut_locus, phi0,
};
use pathgroup::symmetry::invariants_of;
use pathgroup::synthesis::{synthesize, trajectory};
use pathgroup::verify::{run_all, VerifyConfig};
use pathgroup::{GeodesicParams, GroupPoint, DEFAULT_TOL};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "pathgroup",
    version,
    about = "Optimal synthesis on (n+1, 2n+1) Carnot path groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Relative tolerance for stratum and cut-locus decisions.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a geodesic from the identity on a time grid.
    Exp {
        /// GeodesicParams JSON, inline or a file path.
        #[arg(long)]
        params: String,
        #[arg(long, value_parser = parse_grid)]
        t_grid: Grid,
    },
    /// SO(n) invariants of a point.
    Invariants {
        /// GroupPoint JSON, inline or a file path.
        #[arg(long)]
        point: String,
    },
    /// Cut time of a geodesic.
    CutTime {
        #[arg(long)]
        params: String,
    },
    /// Cut-locus membership of a point, with details.
    CutLocusCheck {
        #[arg(long)]
        point: String,
    },
    /// Band of the cut locus in the plane x = 0 swept by fixed σ.
    LocusSlice {
        /// Comma-separated σ values.
        #[arg(long, value_delimiter = ',', required = true)]
        sigma: Vec<f64>,
        /// Grid of |ℓ| values.
        #[arg(long, value_parser = parse_grid, default_value = "0:2:21")]
        l_grid: Grid,
    },
    /// Minimizing geodesics between two points.
    Synth {
        /// Target GroupPoint.
        #[arg(long)]
        point: String,
        /// Start GroupPoint (identity when absent).
        #[arg(long)]
        from: Option<String>,
        /// Emit the minimizers sampled on this time grid as CSV instead of the result JSON.
        #[arg(long, value_parser = parse_grid)]
        emit_trajectory: Option<Grid>,
    },
    /// Run the acceptance suites.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Fraction of the full sample counts.
        #[arg(long, default_value_t = 1.0)]
        size: f64,
    },
}

#[derive(Clone, Debug)]
struct Grid(Vec<f64>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, c] = parts[..] else {
        return Err("expected start:stop:count".into());
    };
    let start: f64 = a.trim().parse().map_err(|e| format!("start: {e}"))?;
    let stop: f64 = b.trim().parse().map_err(|e| format!("stop: {e}"))?;
    let count: usize = c.trim().parse().map_err(|e| format!("count: {e}"))?;
    if !start.is_finite() || !stop.is_finite() || count == 0 {
        return Err("start and stop must be finite and count positive".into());
    }
    if count == 1 {
        return Ok(Grid(vec![start]));
    }
    let h = (stop - start) / (count - 1) as f64;
    Ok(Grid(
        (0..count)
            .map(|i| {
                if i + 1 == count {
                    stop
                } else {
                    start + h * i as f64
                }
            })
            .collect(),
    ))
}

enum Failure {
    Usage(String),
    Numeric(pathgroup::Error),
    Io(String),
    Verification(usize),
}

impl From<pathgroup::Error> for Failure {
    fn from(e: pathgroup::Error) -> Self {
        Failure::Numeric(e)
    }
}

/// Inline JSON when the value starts with `{`, otherwise a file path.
fn read_json<T: DeserializeOwned>(flag: &str, value: &str) -> Result<T, Failure> {
    let text = if value.trim_start().starts_with('{') {
        value.to_owned()
    } else {
        fs::read_to_string(value)
            .map_err(|e| Failure::Usage(format!("--{flag}: cannot read {value}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_header(out: &mut String, lead: &[&str], n: usize) {
    let mut cols: Vec<String> = lead.iter().map(|s| s.to_string()).collect();
    cols.push("x".into());
    cols.extend((1..=n).map(|i| format!("l_{i}")));
    cols.extend((1..=n).map(|i| format!("y_{i}")));
    out.push_str(&cols.join(","));
    out.push('\n');
}

fn csv_row(out: &mut String, lead: &[String], p: &GroupPoint) {
    let mut cols: Vec<String> = lead.to_vec();
    cols.push(num(p.x));
    cols.extend(p.l.iter().chain(&p.y).map(|&v| num(v)));
    out.push_str(&cols.join(","));
    out.push('\n');
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Usage("--tol: must be positive and finite".into()));
    }
    let fmt = |default: Format| cli.format.unwrap_or(default);
    let mut out = String::new();
    match &cli.command {
        Command::Exp { params, t_grid } => {
            let g: GeodesicParams = read_json("params", params)?;
            let pts: Vec<(f64, GroupPoint)> =
                t_grid.0.iter().map(|&t| (t, exp_point(&g, t))).collect();
            match fmt(Format::Csv) {
                Format::Csv => {
                    csv_header(&mut out, &["t"], g.dim());
                    for (t, p) in &pts {
                        csv_row(&mut out, &[num(*t)], p);
                    }
                }
                Format::Json => {
                    let rows: Vec<_> = pts
                        .iter()
                        .map(|(t, p)| json!({"t": t, "point": p}))
                        .collect();
                    out = to_json(&rows);
                }
            }
        }
        Command::Invariants { point } => {
            let p: GroupPoint = read_json("point", point)?;
            let inv = invariants_of(&p);
            match fmt(Format::Json) {
                Format::Json => out = to_json(&inv),
                Format::Csv => {
                    out.push_str("x,l2,ldoty,lwedge,y2,phi\n");
                    let phi = inv.phi().map(num).unwrap_or_default();
                    let row = [inv.x, inv.l2, inv.ldoty, inv.lwedge, inv.y2]
                        .map(num)
                        .join(",");
                    let _ = writeln!(out, "{row},{phi}");
                }
            }
        }
        Command::CutTime { params } => {
            let g: GeodesicParams = read_json("params", params)?;
            let t = cut_time(&g);
            match fmt(Format::Csv) {
                Format::Csv => out = format!("{}\n", num(t)),
                Format::Json => {
                    let t_conj = conjugate_time(&g)?;
                    let info = g.as_helix().map(cut_info);
                    out = to_json(&json!({
                        "t_cut": t.is_finite().then_some(t),
                        "t_conj": t_conj.is_finite().then_some(t_conj),
                        "is_conjugate_at_cut": info.as_ref().map(|i| i.is_conjugate_at_cut),
                        "multiplicity": info.map(|i| i.multiplicity),
                    }));
                }
            }
        }
        Command::CutLocusCheck { point } => {
            let p: GroupPoint = read_json("point", point)?;
            let inv = invariants_of(&p);
            let member = in_cut_locus(&p, tol);
            let t_cut = if member {
                Some(cut_time_at_point(&p, tol)?)
            } else {
                None
            };
            let details = json!({
                "in_cut_locus": member,
                "stratum": classify(&p, tol),
                "margin": cut_locus_margin(&p),
                "phi": inv.phi(),
                "phi0": (inv.l2 > 0.0 && inv.y2 > 0.0).then(|| phi0(inv.l_norm(), inv.y_norm())),
                "t_cut": t_cut,
            });
            match fmt(Format::Json) {
                Format::Json => out = to_json(&details),
                Format::Csv => {
                    out.push_str("in_cut_locus,margin,t_cut\n");
                    let t = t_cut.map(num).unwrap_or_default();
                    let _ = writeln!(out, "{member},{},{t}", num(cut_locus_margin(&p)));
                }
            }
        }
        Command::LocusSlice { sigma, l_grid } => {
            if let Some(s) = sigma.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
                return Err(Failure::Usage(format!("--sigma: {s} is not positive")));
            }
            let rows: Vec<[f64; 4]> = sigma
                .iter()
                .flat_map(|&s| {
                    let k = 1.0 / (4.0 * std::f64::consts::PI * s * s);
                    let widen = (1.0 + 4.0 * s * s).sqrt();
                    l_grid
                        .0
                        .iter()
                        .map(move |&l| [s, l, k * l * l, widen * k * l * l])
                })
                .collect();
            match fmt(Format::Csv) {
                Format::Csv => {
                    out.push_str("sigma,l_norm,y_lower,y_upper\n");
                    for r in &rows {
                        out.push_str(&r.map(num).join(","));
                        out.push('\n');
                    }
                }
                Format::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|r| json!({"sigma": r[0], "l_norm": r[1], "y_lower": r[2], "y_upper": r[3]}))
                        .collect();
                    out = to_json(&v);
                }
            }
        }
        Command::Synth {
            point,
            from,
            emit_trajectory,
        } => {
            let q1: GroupPoint = read_json("point", point)?;
            let q0 = match from {
                Some(f) => read_json("from", f)?,
                None => GroupPoint::identity(q1.dim()),
            };
            if q0.dim() != q1.dim() {
                return Err(Failure::Usage(format!(
                    "--from: dimension {} does not match --point dimension {}",
                    q0.dim(),
                    q1.dim()
                )));
            }
            let result = synthesize(&reduce_to_origin(&q0, &q1)?, tol)?;
            match emit_trajectory {
                None => out = to_json(&result),
                Some(grid) => {
                    csv_header(&mut out, &["solution", "t"], q1.dim());
                    for (i, sol) in result.solutions.iter().enumerate() {
                        for (t, p) in grid.0.iter().zip(trajectory(&q0, &sol.params, &grid.0)?) {
                            csv_row(&mut out, &[i.to_string(), num(*t)], &p);
                        }
                    }
                }
            }
        }
        Command::Verify { seed, size } => {
            if !(*size > 0.0 && size.is_finite()) {
                return Err(Failure::Usage("--size: must be positive".into()));
            }
            let reports = run_all(&VerifyConfig {
                seed: *seed,
                size: *size,
            });
            match fmt(Format::Csv) {
                Format::Csv => {
                    for r in &reports {
                        out.push_str(&r.line());
                        out.push('\n');
                    }
                }
                Format::Json => out = to_json(&reports),
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                emit(cli, &out)?;
                return Err(Failure::Verification(failed));
            }
        }
    }
    Ok(out)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PATHGROUP_LOG", "off")).init();
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|text| emit(&cli, &text));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(f) => {
            let (kind, message) = match f {
                Failure::Numeric(e) => (e.kind(), e.to_string()),
                Failure::Io(m) => ("Io", m),
                Failure::Verification(k) => ("VerificationFailed", format!("{k} criteria failed")),
                Failure::Usage(_) => unreachable!(),
            };
            eprintln!("{}", json!({"kind": kind, "message": message}));
            ExitCode::from(1)
        }
    }
}
