//! Instance text format and telemetry CSV.
//!
//! ```text
//! # comment
//! servers 3
//! capacity 0 2
//! client 0 0 1
//! client 1 2
//! ```
//!
//! `capacity` lines are optional and must precede the first client; servers
//! without one get capacity 1. Client ids must run `0, 1, 2, ...`.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::flow::Rational;
use crate::graph::ArrivalInstance;
use crate::runlog::RunLog;

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected {what}, found {tok:?}"),
    })
}

pub fn parse_instance(text: &str) -> Result<ArrivalInstance> {
    let mut servers: Option<usize> = None;
    let mut capacities: Option<Vec<Option<usize>>> = None;
    let mut arrivals: Vec<Vec<usize>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let mut toks = body.split_whitespace();
        let keyword = toks.next().expect("nonempty line");
        let rest: Vec<&str> = toks.collect();
        match (keyword, servers) {
            ("servers", None) => {
                let [n] = rest[..] else {
                    return Err(err("usage: servers <count>".into()));
                };
                servers = Some(parse_usize(n, line, "a server count")?);
            }
            ("servers", Some(_)) => return Err(err("duplicate servers line".into())),
            (_, None) => return Err(err("the first line must be `servers <count>`".into())),
            ("capacity", Some(ns)) => {
                if !arrivals.is_empty() {
                    return Err(err("capacity lines must precede clients".into()));
                }
                let [s, u] = rest[..] else {
                    return Err(err("usage: capacity <server> <capacity>".into()));
                };
                let (s, u) = (parse_usize(s, line, "a server")?, parse_usize(u, line, "a capacity")?);
                if s >= ns || u == 0 {
                    return Err(err(format!("bad capacity {u} for server {s}")));
                }
                let caps = capacities.get_or_insert_with(|| vec![None; ns]);
                if caps[s].replace(u).is_some() {
                    return Err(err(format!("duplicate capacity for server {s}")));
                }
            }
            ("client", Some(ns)) => {
                let Some((id, nbrs)) = rest.split_first() else {
                    return Err(err("usage: client <id> <server>...".into()));
                };
                let id = parse_usize(id, line, "a client id")?;
                if id != arrivals.len() {
                    return Err(err(format!("client {id} out of order, expected {}", arrivals.len())));
                }
                let nbrs = nbrs
                    .iter()
                    .map(|t| parse_usize(t, line, "a server"))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(&s) = nbrs.iter().find(|&&s| s >= ns) {
                    return Err(err(format!("server {s} out of range")));
                }
                arrivals.push(nbrs);
            }
            (other, _) => return Err(err(format!("unknown keyword {other:?}"))),
        }
    }

    let servers = servers.ok_or(Error::Parse { line: 0, msg: "missing servers line".into() })?;
    let instance = ArrivalInstance::new(servers, arrivals)?;
    match capacities {
        Some(caps) => instance.with_capacities(caps.into_iter().map(|u| u.unwrap_or(1)).collect()),
        None => Ok(instance),
    }
}

/// Canonical text form; `parse_instance` reads it back unchanged.
pub fn write_instance(instance: &ArrivalInstance) -> String {
    let mut out = format!("servers {}\n", instance.server_count());
    if let Some(caps) = instance.capacities() {
        for (s, u) in caps.iter().enumerate() {
            writeln!(out, "capacity {s} {u}").expect("string write");
        }
    }
    for (c, nbrs) in instance.arrivals().iter().enumerate() {
        write!(out, "client {c}").expect("string write");
        for s in nbrs {
            write!(out, " {s}").expect("string write");
        }
        out.push('\n');
    }
    out
}

pub fn read_instance_file(path: &std::path::Path) -> Result<ArrivalInstance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

/// Per-arrival analysis values for the optional CSV columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArrivalAnalysis {
    pub max_alpha: Rational,
    pub opt_load: usize,
}

pub const TELEMETRY_HEADER: [&str; 8] = [
    "arrival",
    "client",
    "matched",
    "path_edges",
    "replacements",
    "cum_replacements",
    "cum_path_edges",
    "engine",
];

pub const ANALYSIS_HEADER: [&str; 3] = ["max_alpha_num", "max_alpha_den", "opt_load"];

/// One row per arrival. `analysis`, when given, must have one entry per
/// arrival.
pub fn write_telemetry<W: Write>(
    out: W,
    log: &RunLog,
    engine: &str,
    analysis: Option<&[ArrivalAnalysis]>,
) -> Result<()> {
    if analysis.is_some_and(|a| a.len() != log.len()) {
        return Err(Error::param("analysis rows do not match the run length"));
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = TELEMETRY_HEADER.to_vec();
    if analysis.is_some() {
        header.extend(ANALYSIS_HEADER);
    }
    w.write_record(&header)?;
    let (mut reps, mut edges) = (0u64, 0u64);
    for (t, r) in log.records().iter().enumerate() {
        reps += r.replacements as u64;
        edges += r.path_edges.unwrap_or(0) as u64;
        let mut row = vec![
            t.to_string(),
            r.client.to_string(),
            u8::from(r.matched).to_string(),
            r.path_edges.map(|e| e.to_string()).unwrap_or_default(),
            r.replacements.to_string(),
            reps.to_string(),
            edges.to_string(),
            engine.to_string(),
        ];
        if let Some(a) = analysis {
            let a = a[t];
            row.push(a.max_alpha.numer().to_string());
            row.push(a.max_alpha.denom().to_string());
            row.push(a.opt_load.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses `3`, `1/2` or `0.25` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::param(format!("not a rational number: {text:?}"));
    let text = text.trim();
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 12 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let part: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = whole.abs() * den + part;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(num, den));
    }
    text.parse::<Rational>().map_err(|_| bad())
}
