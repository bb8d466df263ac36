//! Command-line front end.
//!
//! Exit codes: 0 success with no anomaly, 1 anomaly found, 2 usage or parse
//! error, 3 internal assertion failure.

use std::ffi::OsString;
use std::io::{self, Write};
use std::ops::ControlFlow;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    conjecture_sweep_with, divisibility_search, image_probe, monotonicity_check, SweepCheckpoint,
    SweepOptions,
};
use crate::arith::BigNat;
use crate::error::Error;
use crate::group_spec::{parse_group, parse_shape};
use crate::oracle::{
    psi_bruteforce, psi_relative, subgroup_closure, ComponentList, ElementTuple,
    DEFAULT_ENUMERATION_CAP,
};
use crate::polynomial::{
    eval_nonneg, psi_symbolic, verify_closed_form, ClosedFormFamily, FamilyOutcome,
};
use crate::psi::{
    psi_abelian, psi_cyclic, psi_elem_abelian, psi_near_elem, psi_p_alt, psi_rank2, psi_rank3,
    AbelianGroupType,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ANOMALY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "psi-orders",
    version,
    about = "Sum of element orders of finite abelian groups"
)]
pub struct Cli {
    /// Emit one JSON document instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ψ and order of a group such as `13^[1,1]*23`.
    Compute(ComputeArgs),
    /// Every abelian group of an order, with ψ.
    List { order: u64 },
    /// ψ of a p-group type as a polynomial in p, e.g. `[1,1,2]`.
    Poly { shape: String },
    /// Range checks.
    Sweep(SweepArgs),
    /// ψ relative to the subgroup generated by the given elements.
    Relative(RelativeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Theorem1,
    Remark3,
    Corollary,
    Symbolic,
    Bruteforce,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    pub spec: String,
    /// Cross-check against element enumeration.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, value_enum, default_value = "theorem1")]
    pub method: Method,
    /// Largest group the enumeration oracle will visit.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub max_enum: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Conjecture,
    Divisibility,
    Monotonicity,
    Image,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub kind: SweepKind,
    /// First order (conjecture sweep).
    #[arg(long, default_value_t = 2)]
    pub from: u64,
    /// Last order (conjecture, divisibility, image).
    #[arg(long)]
    pub to: Option<u64>,
    /// Exponent n of the p-group order pⁿ (monotonicity).
    #[arg(long)]
    pub n: Option<u32>,
    /// Prime p (monotonicity).
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Checkpoint file for the conjecture sweep, rewritten after every block.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue from an existing checkpoint.
    #[arg(long, requires = "checkpoint")]
    pub resume: bool,
    /// Orders per checkpoint block.
    #[arg(long, default_value_t = 5000)]
    pub block_size: u64,
    /// Also write the final report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RelativeArgs {
    pub spec: String,
    /// Subgroup generator as comma-separated residues, one per cyclic
    /// factor, e.g. `1,0` or `(1,0)`. Repeatable.
    #[arg(long = "gen")]
    pub generators: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub max_enum: u64,
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_internal() {
                EXIT_INTERNAL
            } else {
                EXIT_USAGE
            }
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, Error> {
    match &cli.command {
        Command::Compute(args) => compute(args, cli.json, out),
        Command::List { order } => list(*order, cli.json, out),
        Command::Poly { shape } => poly(shape, cli.json, out),
        Command::Sweep(args) => sweep(args, cli.json, out),
        Command::Relative(args) => relative(args, cli.json, out),
    }
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> Result<(), Error> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

/// Left-aligned columns separated by two spaces.
fn emit_table(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |out: &mut dyn Write, cells: Vec<&str>| -> io::Result<()> {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(&format!("{c:<w$}  "));
            }
        }
        writeln!(out, "{}", s.trim_end())
    };
    line(out, header.to_vec())?;
    for row in rows {
        line(out, row.iter().map(String::as_str).collect())?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct VerifyRecord {
    oracle: Option<BigNat>,
    matches: Option<bool>,
    skipped: Option<String>,
}

#[derive(Debug, Serialize)]
struct ComputeRecord {
    group: String,
    order: BigNat,
    psi: BigNat,
    method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<VerifyRecord>,
    elapsed_us: u128,
}

/// ψ through a single p-group closed form, choosing the first family that
/// covers the shape.
fn psi_by_corollary(g: &AbelianGroupType) -> Result<(BigNat, &'static str), Error> {
    let mut pgs = g.p_groups();
    let (Some(pg), None) = (pgs.next(), pgs.next()) else {
        return Err(Error::InvalidArgument(
            "closed forms apply to groups of prime-power order".into(),
        ));
    };
    let shape = pg.shape();
    let parts = shape.parts();
    let p = pg.p();
    let family = *ClosedFormFamily::applicable(shape)
        .first()
        .ok_or_else(|| Error::InvalidArgument(format!("no closed form covers shape {shape}")))?;
    let value = match family {
        ClosedFormFamily::Cyclic => psi_cyclic(p, shape.n())?,
        ClosedFormFamily::Elementary => psi_elem_abelian(p, shape.n())?,
        ClosedFormFamily::NearElementary => psi_near_elem(p, shape.n())?,
        ClosedFormFamily::Rank2 => psi_rank2(p, parts[0], parts[1])?,
        ClosedFormFamily::Rank3 => psi_rank3(p, parts[0], parts[1], parts[2])?,
    };
    Ok((value, family.tag()))
}

fn compute(args: &ComputeArgs, json_out: bool, out: &mut dyn Write) -> Result<u8, Error> {
    let g = parse_group(&args.spec)?;
    let started = Instant::now();
    let oracle_list = || ComponentList::from_group_type(&g).map(|c| c.with_cap(args.max_enum));
    let (psi, method) = match args.method {
        Method::Theorem1 => (psi_abelian(&g), "theorem1"),
        Method::Remark3 => (g.p_groups().map(|pg| psi_p_alt(&pg)).product(), "remark3"),
        Method::Corollary => psi_by_corollary(&g)?,
        Method::Symbolic => {
            let v = g
                .p_groups()
                .map(|pg| {
                    eval_nonneg(&psi_symbolic(pg.shape()), pg.p()).ok_or_else(|| {
                        Error::InexactDivision {
                            formula: "negative polynomial value".into(),
                        }
                    })
                })
                .product::<Result<BigNat, Error>>()?;
            (v, "symbolic")
        }
        Method::Bruteforce => (psi_bruteforce(&oracle_list()?)?, "bruteforce"),
    };
    let elapsed_us = started.elapsed().as_micros();

    let verify = if args.verify {
        Some(match oracle_list().and_then(|c| psi_bruteforce(&c)) {
            Ok(v) => VerifyRecord {
                matches: Some(v == psi),
                oracle: Some(v),
                skipped: None,
            },
            Err(e @ (Error::TooLarge { .. } | Error::InvalidArgument(_))) => VerifyRecord {
                oracle: None,
                matches: None,
                skipped: Some(e.to_string()),
            },
            Err(e) => return Err(e),
        })
    } else {
        None
    };
    let mismatch = verify.as_ref().and_then(|v| v.matches) == Some(false);
    let record = ComputeRecord {
        group: g.to_string(),
        order: g.order(),
        psi,
        method: method.to_string(),
        verify,
        elapsed_us,
    };
    if json_out {
        emit_json(out, &record)?;
    } else {
        writeln!(out, "group   {}", record.group)?;
        writeln!(out, "order   {}", record.order)?;
        writeln!(out, "psi     {}", record.psi)?;
        writeln!(out, "method  {}", record.method)?;
        if let Some(v) = &record.verify {
            match (&v.oracle, v.matches, &v.skipped) {
                (Some(o), Some(m), _) => writeln!(
                    out,
                    "oracle  {o} ({})",
                    if m { "match" } else { "MISMATCH" }
                )?,
                (_, _, Some(reason)) => writeln!(out, "oracle  skipped: {reason}")?,
                _ => {}
            }
        }
    }
    Ok(if mismatch { EXIT_ANOMALY } else { EXIT_OK })
}

fn list(order: u64, json_out: bool, out: &mut dyn Write) -> Result<u8, Error> {
    if order == 0 {
        return Err(Error::NonPositive("order"));
    }
    let types = crate::psi::group_type_of_order(order)?;
    let rows: Vec<(String, BigNat)> = types
        .iter()
        .map(|g| (g.to_string(), psi_abelian(g)))
        .collect();
    if json_out {
        let records: Vec<Value> = rows
            .iter()
            .map(|(g, psi)| json!({ "group": g, "order": order.to_string(), "psi": psi, "method": "theorem1" }))
            .collect();
        emit_json(
            out,
            &json!({ "order": order.to_string(), "types": records }),
        )?;
    } else {
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|(g, psi)| vec![g.clone(), psi.to_string()])
            .collect();
        emit_table(out, &["group", "psi"], &table)?;
    }
    Ok(EXIT_OK)
}

fn poly(shape: &str, json_out: bool, out: &mut dyn Write) -> Result<u8, Error> {
    let shape = parse_shape(shape)?;
    let poly = psi_symbolic(&shape);
    let degree = poly.degree().expect("ψ is a nonzero polynomial");
    let checks: Vec<Value> = match verify_closed_form(&shape) {
        Ok(report) => report
            .checks
            .iter()
            .map(|c| {
                let (status, detail) = match &c.outcome {
                    FamilyOutcome::Equal => ("equal", None),
                    FamilyOutcome::Mismatch { residual } => {
                        ("mismatch", Some(residual.to_string()))
                    }
                    FamilyOutcome::InexactDivision { detail } => ("inexact", Some(detail.clone())),
                };
                json!({ "family": c.family.tag(), "status": status, "detail": detail })
            })
            .collect(),
        Err(_) => Vec::new(),
    };
    let failed = checks.iter().any(|c| c["status"] != "equal");
    if json_out {
        emit_json(
            out,
            &json!({
                "shape": shape.to_string(),
                "polynomial": poly.to_string(),
                "degree": degree,
                "method": "symbolic",
                "closed_forms": checks,
            }),
        )?;
    } else {
        writeln!(out, "{poly}")?;
        writeln!(out, "degree {degree}")?;
        for c in &checks {
            writeln!(
                out,
                "{} {}",
                c["family"].as_str().unwrap_or(""),
                c["status"].as_str().unwrap_or("")
            )?;
        }
    }
    Ok(if failed { EXIT_INTERNAL } else { EXIT_OK })
}

fn require_to(args: &SweepArgs) -> Result<u64, Error> {
    args.to.ok_or_else(|| {
        Error::InvalidArgument(format!("sweep {:?} needs --to", args.kind).to_lowercase())
    })
}

fn write_report(args: &SweepArgs, text: &str) -> Result<(), Error> {
    if let Some(path) = &args.report {
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn sweep(args: &SweepArgs, json_out: bool, out: &mut dyn Write) -> Result<u8, Error> {
    if args.workers == 0 {
        return Err(Error::InvalidArgument(
            "--workers must be at least 1".into(),
        ));
    }
    match args.kind {
        SweepKind::Conjecture => {
            let to = require_to(args)?;
            let start = match (&args.checkpoint, args.resume) {
                (Some(path), true) if path.exists() => SweepCheckpoint::load(path)?,
                _ => SweepCheckpoint::new(),
            };
            let options = SweepOptions {
                workers: args.workers,
                block_size: args.block_size,
            };
            let run = conjecture_sweep_with(args.from, to, start, options, |ck| {
                if let Some(path) = &args.checkpoint {
                    ck.save_atomic(path)?;
                }
                Ok(ControlFlow::Continue(()))
            })?;
            let ck = run.checkpoint;
            if let Some(path) = &args.checkpoint {
                ck.save_atomic(path)?;
            }
            let text = ck.to_json()?;
            write_report(args, &text)?;
            if json_out {
                out.write_all(text.as_bytes())?;
            } else {
                writeln!(out, "orders swept    {}..={}", args.from, ck.max_done)?;
                writeln!(out, "collisions      {}", ck.collisions.len())?;
                for c in &ck.collisions {
                    writeln!(
                        out,
                        "  order {}: {} and {} share psi {}",
                        c.order, c.first, c.second, c.psi
                    )?;
                }
                writeln!(out, "divisible hits  {}", ck.divisible_hits.len())?;
                for h in &ck.divisible_hits {
                    writeln!(
                        out,
                        "  {} (order {}): psi {} = {} * {}",
                        h.group, h.order, h.psi, h.order, h.quotient
                    )?;
                }
            }
            Ok(if ck.collisions.is_empty() {
                EXIT_OK
            } else {
                EXIT_ANOMALY
            })
        }
        SweepKind::Divisibility => {
            let to = require_to(args)?;
            let hits = divisibility_search(to)?;
            let even = hits.iter().filter(|h| h.order % 2 == 0).count();
            let report = json!({
                "max_order": to.to_string(),
                "hits": hits,
                "even_order_hits": even,
                "smallest_order": hits.first().map(|h| h.order.to_string()),
                "note": "smallest_order is computed by this search over abelian groups only",
            });
            let text = format!("{}\n", serde_json::to_string_pretty(&report)?);
            write_report(args, &text)?;
            if json_out {
                out.write_all(text.as_bytes())?;
            } else {
                let rows: Vec<Vec<String>> = hits
                    .iter()
                    .map(|h| {
                        vec![
                            h.order.to_string(),
                            h.group.clone(),
                            h.psi.to_string(),
                            h.quotient.to_string(),
                        ]
                    })
                    .collect();
                emit_table(out, &["order", "group", "psi", "psi/order"], &rows)?;
                writeln!(out, "{} hit(s) up to order {to}", hits.len())?;
            }
            Ok(if hits.is_empty() {
                EXIT_OK
            } else {
                EXIT_ANOMALY
            })
        }
        SweepKind::Monotonicity => {
            let n = args
                .n
                .ok_or_else(|| Error::InvalidArgument("sweep monotonicity needs --n".into()))?;
            let report = monotonicity_check(n, args.p)?;
            let text = format!("{}\n", serde_json::to_string_pretty(&report)?);
            write_report(args, &text)?;
            if json_out {
                out.write_all(text.as_bytes())?;
            } else {
                let rows: Vec<Vec<String>> = report
                    .chain
                    .iter()
                    .map(|e| vec![e.partition.to_padded_tuple().to_string(), e.psi.to_string()])
                    .collect();
                if rows.len() <= 64 {
                    emit_table(out, &["type", "psi"], &rows)?;
                }
                writeln!(
                    out,
                    "{} types of order {}^{}, {} violation(s), min elementary: {}, max cyclic: {}",
                    report.chain.len(),
                    report.p,
                    report.n,
                    report.violations.len(),
                    report.min_is_elementary,
                    report.max_is_cyclic
                )?;
            }
            Ok(if report.is_clean() {
                EXIT_OK
            } else {
                EXIT_ANOMALY
            })
        }
        SweepKind::Image => {
            let to = require_to(args)?;
            let report = image_probe(to)?;
            let text = format!("{}\n", serde_json::to_string_pretty(&report)?);
            write_report(args, &text)?;
            if json_out {
                out.write_all(text.as_bytes())?;
            } else {
                writeln!(out, "types checked         {}", report.types_checked)?;
                writeln!(out, "all odd               {}", report.all_odd)?;
                writeln!(out, "psi >= 2|G|-1         {}", report.lower_bound_holds)?;
                writeln!(out, "5 observed            {}", report.five_observed)?;
                writeln!(out, "{}", report.conclusion)?;
            }
            Ok(if report.is_clean() {
                EXIT_OK
            } else {
                EXIT_ANOMALY
            })
        }
    }
}

/// Parses `1,0` or `(1,0)` into a residue tuple.
fn parse_generator(index: usize, text: &str) -> Result<ElementTuple, Error> {
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(text);
    let base = if inner.len() == text.len() { 0 } else { 1 };
    let mut residues = Vec::new();
    let mut offset = base;
    for piece in inner.split(',') {
        let v = piece.parse::<u64>().map_err(|_| Error::Parse {
            offset,
            message: format!("generator {}: {piece:?} is not a residue", index + 1),
        })?;
        residues.push(v);
        offset += piece.len() + 1;
    }
    Ok(ElementTuple(residues))
}

fn relative(args: &RelativeArgs, json_out: bool, out: &mut dyn Write) -> Result<u8, Error> {
    let g = parse_group(&args.spec)?;
    let c = ComponentList::from_group_type(&g)?.with_cap(args.max_enum);
    let gens = args
        .generators
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let e = parse_generator(i, t)?;
            if e.0.len() != c.moduli().len() {
                return Err(Error::InvalidElement(format!(
                    "generator {} has {} residues but {} has {} cyclic factors {:?}",
                    i + 1,
                    e.0.len(),
                    g,
                    c.moduli().len(),
                    c.moduli()
                )));
            }
            if let Some((pos, (r, m))) =
                e.0.iter()
                    .zip(c.moduli())
                    .enumerate()
                    .find(|(_, (r, m))| r >= m)
            {
                return Err(Error::InvalidElement(format!(
                    "generator {}, position {}: residue {r} is outside Z_{m}",
                    i + 1,
                    pos + 1
                )));
            }
            Ok(e)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let h = subgroup_closure(&c, &gens)?;
    let value = psi_relative(&c, &h)?;
    let h_order = BigNat::from(h.len());
    let per_element = value.exact_div(&h_order);
    if json_out {
        emit_json(
            out,
            &json!({
                "group": g.to_string(),
                "order": g.order(),
                "moduli": c.moduli().iter().map(u64::to_string).collect::<Vec<_>>(),
                "subgroup_order": h_order,
                "psi_relative": value,
                "psi_relative_over_subgroup_order": per_element,
                "method": "bruteforce",
            }),
        )?;
    } else {
        writeln!(out, "group        {g} (factors {:?})", c.moduli())?;
        writeln!(out, "|H|          {h_order}")?;
        writeln!(out, "psi_H(G)     {value}")?;
        if let Some(q) = per_element {
            writeln!(out, "psi_H(G)/|H| {q}")?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(
            std::iter::once("psi-orders").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn generator_parsing() {
        assert_eq!(
            parse_generator(0, "(1,0)").unwrap(),
            ElementTuple(vec![1, 0])
        );
        assert_eq!(parse_generator(0, "2").unwrap(), ElementTuple(vec![2]));
        match parse_generator(1, "(1,x)") {
            Err(Error::Parse { offset, message }) => {
                assert_eq!(offset, 3);
                assert!(message.contains("generator 2"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn compute_methods_agree() {
        for method in ["theorem1", "remark3", "corollary", "symbolic", "bruteforce"] {
            let (code, out, _) = run_args(&["compute", "3^[1,2]", "--method", method, "--json"]);
            assert_eq!(code, 0, "{method}");
            let v: Value = serde_json::from_str(&out).unwrap();
            assert_eq!(v["psi"], "187", "{method}");
        }
        let (code, _, err) = run_args(&["compute", "2*3", "--method", "corollary"]);
        assert_eq!(code, 2);
        assert!(err.contains("prime-power"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["compute", "4"]).0, 2);
        assert_eq!(run_args(&["compute", "2^[2,1]"]).0, 2);
        assert_eq!(run_args(&["list", "0"]).0, 2);
        assert_eq!(run_args(&["bogus"]).0, 2);
        assert_eq!(run_args(&["poly", "[1"]).0, 2);
        assert_eq!(run_args(&["sweep", "image"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }
}
