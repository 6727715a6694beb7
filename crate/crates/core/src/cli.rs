//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a checked claim failed (or the point set is
//! degenerate), 2 usage or input error, 3 resource or precision limit.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::claims::{
    check_hockey_stick_parity, check_ss07_bound, mesh_ratio_scan, verify_lemma, verify_theorem,
    DEFAULT_SCALE_CAP,
};
use crate::digitalseq::{builtin_spec, prefix, reduce_precision, SequenceSpec, DEFAULT_PRECISION};
use crate::greedypack::{greedy_sequence, DEFAULT_GREEDY_TOL};
use crate::io::{
    claims_table, read_points_csv, render_svg, write_claims_csv, write_point_set_csv,
    write_real_points_csv, write_reports_csv, ClaimRow, CsvPoints,
};
use crate::pointgeom::{
    fill_distance_real, mesh_ratio, mesh_ratio_real, separation, separation_real, RealPoints,
    DEFAULT_FILL_TOL,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "quasiuniform",
    version,
    about = "Digital sequences and mesh-ratio diagnostics"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

/// Where a point set comes from: a CSV file or a built-in sequence prefix.
#[derive(Debug, Args)]
pub struct Source {
    /// Point-set CSV to read.
    #[arg(long, conflicts_with_all = ["seq", "n"])]
    pub input: Option<PathBuf>,
    /// Built-in sequence (sobol2d, vdc).
    #[arg(long)]
    pub seq: Option<String>,
    /// Prefix length.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the first n points of a sequence as CSV.
    Generate {
        #[arg(long, default_value = "sobol2d")]
        seq: String,
        #[arg(long)]
        n: usize,
        /// Output precision in bits; defaults to the smallest exact one.
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Exact separation radius and closest pair.
    Separation {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        output: Option<PathBuf>,
        /// SVG scatter with the closest pair highlighted.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Certified fill-distance interval.
    Fill {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_FILL_TOL)]
        tol: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Mesh ratio h/q of one point set.
    MeshRatio {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_FILL_TOL)]
        tol: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the parity lemma, the separation theorem and the lower bounds.
    /// With no selection flags every check runs.
    Verify {
        #[arg(long)]
        theorem: bool,
        /// Values of w for the theorem check.
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 4])]
        w: Vec<u32>,
        #[arg(long, default_value_t = DEFAULT_SCALE_CAP)]
        scale_cap: u64,
        #[arg(long)]
        lemma: bool,
        #[arg(long, default_value_t = 6)]
        wmax: u32,
        #[arg(long)]
        hockey: bool,
        #[arg(long, default_value_t = 64)]
        mmax: u64,
        #[arg(long)]
        ss07: bool,
        /// Check q >= sqrt(d)/(2n) as literally stated instead of the halved form.
        #[arg(long)]
        literal: bool,
        #[arg(long, default_value_t = 4096)]
        nmax: usize,
        /// Also write the results as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Mesh ratio along a list of prefix lengths.
    Scan {
        #[arg(long, default_value = "sobol2d")]
        seq: String,
        #[arg(long, value_delimiter = ',', default_values_t = [7usize, 127, 32767])]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_FILL_TOL)]
        tol: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Greedy packing sequence in [0,1]^d.
    Greedy {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_GREEDY_TOL)]
        tol: f64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Print mesh-ratio reports for every prefix of length >= 2.
        #[arg(long)]
        report: bool,
    },
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Argument(_) | Error::Range(_) | Error::Parse { .. } | Error::Io(_) => EXIT_USAGE,
        Error::Precision(_) | Error::Resource(_) => EXIT_RESOURCE,
        Error::Degenerate(_) => EXIT_CLAIM_FAILED,
    }
}

/// Runs a parsed command, writing primary output to `out` unless a file is
/// requested. Errors are reported on stderr and mapped to exit codes.
pub fn run(config: RunConfig, out: &mut dyn Write) -> i32 {
    match dispatch(config.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn spec_by_name(name: &str) -> Result<SequenceSpec> {
    builtin_spec(name).ok_or_else(|| Error::Argument(format!("unknown sequence '{name}'")))
}

fn load(source: &Source) -> Result<CsvPoints> {
    if let Some(path) = &source.input {
        return read_points_csv(BufReader::new(File::open(path)?));
    }
    let name = source.seq.as_deref().unwrap_or("sobol2d");
    let n = source
        .n
        .ok_or_else(|| Error::Argument("either --input or --n is required".into()))?;
    let spec = spec_by_name(name)?;
    let ps = prefix(&spec, n, spec.depth().min(DEFAULT_PRECISION))?;
    Ok(CsvPoints::Dyadic(ps.to_minimal_precision()))
}

/// Writes through `out`, or to `path` when one is given.
fn emit(
    path: Option<&Path>,
    out: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(out),
    }
}

fn write_svg(path: &Path, points: &RealPoints, highlight: Option<(usize, usize)>) -> Result<()> {
    std::fs::write(path, render_svg(points, highlight)?)?;
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Generate {
            seq,
            n,
            precision,
            output,
            svg,
        } => {
            let spec = spec_by_name(&seq)?;
            let full = prefix(&spec, n, spec.depth().min(DEFAULT_PRECISION))?;
            let ps = match precision {
                Some(p) => reduce_precision(&full, p)?,
                None => full.to_minimal_precision(),
            };
            emit(output.as_deref(), out, |w| write_point_set_csv(&ps, w))?;
            if let Some(path) = svg {
                write_svg(&path, &RealPoints::from_point_set(&ps), None)?;
            }
            Ok(EXIT_OK)
        }
        Command::Separation {
            source,
            output,
            svg,
        } => {
            let points = load(&source)?;
            let (row, witness) = match &points {
                CsvPoints::Dyadic(ps) => {
                    let r = separation(ps)?;
                    let row = format!(
                        "{},{},{},{},{},{}",
                        ps.len(),
                        r.q_value(),
                        r.s,
                        r.p,
                        r.witness.0,
                        r.witness.1
                    );
                    (row, r.witness)
                }
                CsvPoints::Real { points, .. } => {
                    let r = separation_real(points)?;
                    let row = format!(
                        "{},{},,,{},{}",
                        points.len(),
                        r.q_value,
                        r.witness.0,
                        r.witness.1
                    );
                    (row, r.witness)
                }
            };
            emit(output.as_deref(), out, |w| {
                writeln!(w, "n,q,s,p,i,j")?;
                writeln!(w, "{row}")?;
                Ok(())
            })?;
            if let Some(path) = svg {
                write_svg(&path, &points.to_real(), Some(witness))?;
            }
            Ok(EXIT_OK)
        }
        Command::Fill {
            source,
            tol,
            output,
        } => {
            let points = load(&source)?.to_real();
            let r = fill_distance_real(&points, tol)?;
            let witness: Vec<String> = r.witness.iter().map(|c| c.to_string()).collect();
            emit(output.as_deref(), out, |w| {
                writeln!(w, "n,h_lo,h_hi,tol,witness")?;
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    points.len(),
                    r.h_lo,
                    r.h_hi,
                    r.tol,
                    witness.join(" ")
                )?;
                Ok(())
            })?;
            Ok(EXIT_OK)
        }
        Command::MeshRatio {
            source,
            tol,
            output,
        } => {
            let report = match load(&source)? {
                CsvPoints::Dyadic(ps) => mesh_ratio(&ps, tol)?,
                CsvPoints::Real { points, .. } => mesh_ratio_real(&points, tol)?,
            };
            emit(output.as_deref(), out, |w| write_reports_csv(&[report], w))?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            theorem,
            w,
            scale_cap,
            lemma,
            wmax,
            hockey,
            mmax,
            ss07,
            literal,
            nmax,
            csv,
        } => {
            let all = !(theorem || lemma || hockey || ss07);
            let mut rows = Vec::new();
            if lemma || all {
                rows.push(ClaimRow {
                    id: "lemma".into(),
                    params: format!("w=1..{wmax}"),
                    passed: verify_lemma(wmax)?,
                    detail: "odd row sums in the upper-left (2^w-1) Pascal block".into(),
                });
            }
            if hockey || all {
                rows.push(ClaimRow {
                    id: "hockey-stick".into(),
                    params: format!("m<={mmax}"),
                    passed: check_hockey_stick_parity(mmax)?,
                    detail: "sum_j C(j-1;i-1) = C(m;i) mod 2".into(),
                });
            }
            if theorem || all {
                for &wv in &w {
                    rows.push(ClaimRow::theorem(&verify_theorem(wv, scale_cap)?));
                }
            }
            if ss07 || all {
                let violations = check_ss07_bound(nmax, !literal)?;
                let shown: Vec<String> =
                    violations.iter().take(20).map(|n| n.to_string()).collect();
                let more = violations.len().saturating_sub(shown.len());
                let mut detail = format!("violations={}", violations.len());
                if !shown.is_empty() {
                    detail.push_str(&format!(" n={}", shown.join(" ")));
                    if more > 0 {
                        detail.push_str(&format!(" (+{more} more)"));
                    }
                }
                rows.push(ClaimRow {
                    id: if literal {
                        "ss07-literal"
                    } else {
                        "ss07-halved"
                    }
                    .into(),
                    params: format!("n<={nmax}"),
                    passed: violations.is_empty(),
                    detail,
                });
            }
            write!(out, "{}", claims_table(&rows))?;
            if let Some(path) = csv {
                emit(Some(&path), out, |w| write_claims_csv(&rows, w))?;
            }
            Ok(if rows.iter().all(|r| r.passed) {
                EXIT_OK
            } else {
                EXIT_CLAIM_FAILED
            })
        }
        Command::Scan {
            seq,
            n_list,
            tol,
            output,
        } => {
            let spec = spec_by_name(&seq)?;
            let reports = mesh_ratio_scan(&spec, &n_list, tol)?;
            emit(output.as_deref(), out, |w| write_reports_csv(&reports, w))?;
            Ok(EXIT_OK)
        }
        Command::Greedy {
            d,
            n,
            tol,
            output,
            svg,
            report,
        } => {
            let points = greedy_sequence(d, n, tol)?;
            if report {
                let reports = (2..=n)
                    .map(|k| mesh_ratio_real(&points.truncated(k), DEFAULT_FILL_TOL))
                    .collect::<Result<Vec<_>>>()?;
                emit(output.as_deref(), out, |w| write_reports_csv(&reports, w))?;
            } else {
                emit(output.as_deref(), out, |w| {
                    write_real_points_csv(&points, "greedy", w)
                })?;
            }
            if let Some(path) = svg {
                write_svg(&path, &points, None)?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `std::env::args` and runs; used by the binary.
pub fn main_entry() -> i32 {
    let config = RunConfig::parse();
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let code = run(config, &mut lock);
    let _ = lock.flush();
    code
}
