//! CSV and SVG rendering of point sets and reports.
//!
//! Point-set CSV:
//!
//! ```text
//! # precision=3 dim=2 n=3 label=sobol2d
//! x1,x2
//! 0,0
//! 0.5,0.5
//! 0.25,0.75
//! ```
//!
//! Dyadic coordinates are written as exact decimal expansions of
//! `mantissa / 2^precision`. Real-valued sets use `precision=real`.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::claims::TheoremCertificate;
use crate::digitalseq::PointSet;
use crate::pointgeom::{MeshRatioReport, RealPoints};
use crate::{Error, Result};

/// Exact decimal expansion of `mantissa / 2^precision`.
pub fn dyadic_to_decimal(mantissa: u64, precision: u32) -> String {
    if mantissa == 0 {
        return "0".to_string();
    }
    let mask: u128 = (1u128 << precision) - 1;
    let mut rest = mantissa as u128;
    let mut out = String::from("0.");
    while rest != 0 {
        rest *= 10;
        out.push(char::from(b'0' + (rest >> precision) as u8));
        rest &= mask;
    }
    out
}

/// Parses an exact decimal in `[0, 1)` into a mantissa at `precision`.
pub fn decimal_to_dyadic(text: &str, precision: u32) -> std::result::Result<u64, String> {
    let frac = match text.trim() {
        "0" | "0." | "0.0" => return Ok(0),
        t => t
            .strip_prefix("0.")
            .ok_or_else(|| format!("'{t}' is not a decimal in [0, 1)"))?,
    };
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("'{text}' is not a decimal in [0, 1)"));
    }
    // Horner from the last digit; every partial value is an integer
    // multiple of 2^{-precision} exactly when the whole number is.
    let scale = 1u128 << precision;
    let mut acc: u128 = 0;
    for b in frac.bytes().rev() {
        let v = (b - b'0') as u128 * scale + acc;
        if !v.is_multiple_of(10) {
            return Err(format!("'{text}' is not a multiple of 2^-{precision}"));
        }
        acc = v / 10;
    }
    u64::try_from(acc)
        .ok()
        .filter(|&m| precision == 64 || m >> precision == 0)
        .ok_or_else(|| format!("'{text}' does not fit {precision} bits"))
}

fn coordinate_header(dim: usize) -> String {
    (1..=dim)
        .map(|j| format!("x{j}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn write_point_set_csv(ps: &PointSet, out: &mut (impl Write + ?Sized)) -> Result<()> {
    writeln!(
        out,
        "# precision={} dim={} n={} label={}",
        ps.precision(),
        ps.dim(),
        ps.len(),
        ps.label()
    )?;
    writeln!(out, "{}", coordinate_header(ps.dim()))?;
    let mut line = String::new();
    for x in ps.iter() {
        line.clear();
        for (k, &m) in x.iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            line.push_str(&dyadic_to_decimal(m, ps.precision()));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn write_real_points_csv(
    points: &RealPoints,
    label: &str,
    out: &mut (impl Write + ?Sized),
) -> Result<()> {
    writeln!(
        out,
        "# precision=real dim={} n={} label={label}",
        points.dim(),
        points.len()
    )?;
    writeln!(out, "{}", coordinate_header(points.dim()))?;
    for x in points.iter() {
        let row: Vec<String> = x.iter().map(|c| format!("{c}")).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// A point set read back from CSV.
#[derive(Clone, Debug, PartialEq)]
pub enum CsvPoints {
    Dyadic(PointSet),
    Real { points: RealPoints, label: String },
}

impl CsvPoints {
    pub fn to_real(&self) -> RealPoints {
        match self {
            CsvPoints::Dyadic(ps) => RealPoints::from_point_set(ps),
            CsvPoints::Real { points, .. } => points.clone(),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn read_points_csv(input: impl BufRead) -> Result<CsvPoints> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, meta) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let meta = meta?;
    let meta = meta
        .strip_prefix('#')
        .ok_or_else(|| parse_err(1, "missing '# precision=...' header"))?;
    let mut precision = None;
    let mut dim = None;
    let mut count = None;
    let mut label = String::new();
    for field in meta.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(1, format!("malformed header field '{field}'")))?;
        match key {
            "precision" => precision = Some(value.to_string()),
            "dim" => dim = value.parse::<usize>().ok(),
            "n" => count = value.parse::<usize>().ok(),
            "label" => label = value.to_string(),
            _ => {}
        }
    }
    let precision = precision.ok_or_else(|| parse_err(1, "header lacks precision"))?;
    let dim = dim
        .filter(|&d| d > 0)
        .ok_or_else(|| parse_err(1, "header lacks a valid dim"))?;

    let (ln, columns) = lines
        .next()
        .ok_or_else(|| parse_err(2, "missing column header"))?;
    if columns?.trim() != coordinate_header(dim) {
        return Err(parse_err(ln, "column header does not match dim"));
    }

    let dyadic_precision = match precision.as_str() {
        "real" => None,
        p => Some(
            p.parse::<u32>()
                .ok()
                .filter(|p| (1..=64).contains(p))
                .ok_or_else(|| parse_err(1, format!("invalid precision '{p}'")))?,
        ),
    };
    let mut mantissas = Vec::new();
    let mut reals = Vec::new();
    for (ln, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != dim {
            return Err(parse_err(
                ln,
                format!("expected {dim} columns, got {}", cells.len()),
            ));
        }
        for cell in cells {
            match dyadic_precision {
                Some(p) => {
                    mantissas.push(decimal_to_dyadic(cell, p).map_err(|e| parse_err(ln, e))?)
                }
                None => reals.push(
                    cell.trim()
                        .parse::<f64>()
                        .map_err(|e| parse_err(ln, format!("'{cell}': {e}")))?,
                ),
            }
        }
    }
    let parsed = match dyadic_precision {
        Some(p) => CsvPoints::Dyadic(PointSet::from_flat(mantissas, dim, p, label)?),
        None => CsvPoints::Real {
            points: RealPoints::new(reals, dim)?,
            label,
        },
    };
    let n = match &parsed {
        CsvPoints::Dyadic(ps) => ps.len(),
        CsvPoints::Real { points, .. } => points.len(),
    };
    if let Some(expected) = count.filter(|&c| c != n) {
        return Err(parse_err(
            1,
            format!("header says n={expected}, found {n} rows"),
        ));
    }
    Ok(parsed)
}

pub const REPORT_HEADER: &str = "n,q,s,p,h_lo,h_hi,ratio_lo,ratio_hi";

/// One report row; `s` and `p` are empty for floating-point separations.
pub fn report_row(r: &MeshRatioReport) -> String {
    let (s, p) = match r.sep.exact() {
        Some(e) => (e.s.to_string(), e.p.to_string()),
        None => (String::new(), String::new()),
    };
    format!(
        "{},{},{},{},{},{},{},{}",
        r.n,
        r.sep.q_value(),
        s,
        p,
        r.fill.h_lo,
        r.fill.h_hi,
        r.ratio_lo,
        r.ratio_hi
    )
}

pub fn write_reports_csv(
    reports: &[MeshRatioReport],
    out: &mut (impl Write + ?Sized),
) -> Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    for r in reports {
        writeln!(out, "{}", report_row(r))?;
    }
    Ok(())
}

/// Result of one claim check, as rendered by `verify`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimRow {
    pub id: String,
    pub params: String,
    pub passed: bool,
    pub detail: String,
}

impl ClaimRow {
    pub fn theorem(cert: &TheoremCertificate) -> Self {
        Self {
            id: "theorem".into(),
            params: format!("w={} m={} n={}", cert.w, cert.m, cert.n),
            passed: cert.all_checks_hold(),
            detail: format!(
                "s={} witness=({};{}) s(1;n-1)={} x_(n-1)_ok={} permutation_ok={} nonsingular_ok={}",
                cert.s,
                cert.witness.0,
                cert.witness.1,
                cert.proof_pair_s,
                cert.last_point_ok,
                cert.permutation_ok,
                cert.nonsingular_ok
            ),
        }
    }
}

pub const CLAIMS_HEADER: &str = "claim,params,status,detail";

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn write_claims_csv(rows: &[ClaimRow], out: &mut (impl Write + ?Sized)) -> Result<()> {
    writeln!(out, "{CLAIMS_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.id,
            r.params,
            status(r.passed),
            r.detail
        )?;
    }
    Ok(())
}

pub fn claims_table(rows: &[ClaimRow]) -> String {
    let w_id = rows.iter().map(|r| r.id.len()).max().unwrap_or(0).max(5);
    let w_params = rows
        .iter()
        .map(|r| r.params.len())
        .max()
        .unwrap_or(0)
        .max(6);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<w_id$}  {:<w_params$}  {:<6}  detail",
        "claim", "params", "status"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<w_id$}  {:<w_params$}  {:<6}  {}",
            r.id,
            r.params,
            status(r.passed),
            r.detail
        );
    }
    s
}

/// Static SVG scatter of a 2D point set in the unit square, with an
/// optional highlighted pair joined by a segment.
pub fn render_svg(points: &RealPoints, highlight: Option<(usize, usize)>) -> Result<String> {
    if points.dim() != 2 {
        return Err(Error::Argument(format!(
            "SVG output needs dimension 2, got {}",
            points.dim()
        )));
    }
    const SIZE: f64 = 512.0;
    const PAD: f64 = 16.0;
    let map = |p: &[f64]| (PAD + p[0] * SIZE, PAD + (1.0 - p[1]) * SIZE);
    let radius = (SIZE / (points.len() as f64).sqrt() / 8.0).clamp(0.5, 4.0);
    let full = SIZE + 2.0 * PAD;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{full}" height="{full}" viewBox="0 0 {full} {full}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}" fill="white" stroke="black" stroke-width="1"/>"#
    );
    for p in points.iter() {
        let (x, y) = map(p);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="{radius:.3}" fill="black"/>"#
        );
    }
    if let Some((i, j)) = highlight {
        let (x1, y1) = map(points.point(i));
        let (x2, y2) = map(points.point(j));
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="red" stroke-width="1.5"/>"#
        );
        for (x, y) in [(x1, y1), (x2, y2)] {
            let _ = writeln!(
                s,
                r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="none" stroke="red" stroke-width="1.5"/>"#,
                radius * 2.0
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
