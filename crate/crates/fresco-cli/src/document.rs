//! The line-based fresco description format:
//!
//! ```text
//! # comments start with '#'
//! rank = 3
//! lambda = 4, 5, 6
//! S1 = {0: 1, 1: 1}
//! S2 = {0: 1, 3: 1}
//! truncation = 24
//! ```
//!
//! Without a `truncation` line the connections are exact polynomials.

use std::collections::BTreeMap;
use std::fmt::Write;

use fresco::series::parse_rational;
use fresco::{Error, Fresco, PowerSeries, Rational};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrescoDocument {
    pub rank: usize,
    pub lambda: Vec<Rational>,
    /// Sparse `exponent -> coefficient` maps for `S_1 .. S_{k-1}`.
    pub connections: Vec<BTreeMap<usize, Rational>>,
    pub truncation: Option<usize>,
}

fn parse_error(line: usize, field: &str, message: impl Into<String>) -> CliError {
    CliError::Parse { line, field: field.to_string(), message: message.into() }
}

fn parse_sparse(line: usize, field: &str, value: &str) -> Result<BTreeMap<usize, Rational>, CliError> {
    let inner = value
        .strip_prefix('{')
        .and_then(|v| v.strip_suffix('}'))
        .ok_or_else(|| parse_error(line, field, "expected {exponent: coefficient, ...}"))?;
    let mut map = BTreeMap::new();
    for entry in inner.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let (exp, coeff) = entry
            .split_once(':')
            .ok_or_else(|| parse_error(line, field, format!("entry '{}' has no ':'", entry)))?;
        let exp: usize = exp
            .trim()
            .parse()
            .map_err(|_| parse_error(line, field, format!("exponent '{}' is not a non-negative integer", exp.trim())))?;
        let coeff = parse_rational(coeff.trim())
            .ok_or_else(|| parse_error(line, field, format!("coefficient '{}' is not a rational", coeff.trim())))?;
        if map.insert(exp, coeff).is_some() {
            return Err(parse_error(line, field, format!("exponent {} appears twice", exp)));
        }
    }
    map.retain(|_, c: &mut Rational| !num_traits::Zero::is_zero(c));
    Ok(map)
}

impl FrescoDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut rank = None;
        let mut lambda = None;
        let mut truncation = None;
        let mut conn: BTreeMap<usize, (usize, BTreeMap<usize, Rational>)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| parse_error(line, content, "expected 'key = value'"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "rank" => {
                    let k: usize = value
                        .parse()
                        .ok()
                        .filter(|k| *k >= 1)
                        .ok_or_else(|| parse_error(line, key, "rank must be a positive integer"))?;
                    if rank.replace(k).is_some() {
                        return Err(parse_error(line, key, "given twice"));
                    }
                }
                "lambda" => {
                    let values = value
                        .split(',')
                        .map(|v| {
                            parse_rational(v.trim())
                                .ok_or_else(|| parse_error(line, key, format!("'{}' is not a rational", v.trim())))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    if lambda.replace(values).is_some() {
                        return Err(parse_error(line, key, "given twice"));
                    }
                }
                "truncation" => {
                    let n: usize = value
                        .parse()
                        .ok()
                        .filter(|n| *n >= 1)
                        .ok_or_else(|| parse_error(line, key, "truncation must be a positive integer"))?;
                    if truncation.replace(n).is_some() {
                        return Err(parse_error(line, key, "given twice"));
                    }
                }
                _ => {
                    let j: usize = key
                        .strip_prefix('S')
                        .and_then(|j| j.parse().ok())
                        .filter(|j| *j >= 1)
                        .ok_or_else(|| parse_error(line, key, "unknown field (expected rank, lambda, S<j> or truncation)"))?;
                    let map = parse_sparse(line, key, value)?;
                    if conn.insert(j, (line, map)).is_some() {
                        return Err(parse_error(line, key, "given twice"));
                    }
                }
            }
        }
        let rank = rank.ok_or_else(|| CliError::validation("rank", "missing"))?;
        let lambda = lambda.ok_or_else(|| CliError::validation("lambda", "missing"))?;
        if lambda.len() != rank {
            return Err(CliError::validation(
                "lambda",
                format!("rank {} needs {} values, got {}", rank, rank, lambda.len()),
            ));
        }
        if let Some((&j, &(line, _))) = conn.iter().find(|(j, _)| **j >= rank) {
            return Err(parse_error(line, &format!("S{}", j), format!("rank {} has connections S1..S{}", rank, rank - 1)));
        }
        let mut connections = Vec::with_capacity(rank - 1);
        for j in 1..rank {
            let (line, map) = conn.remove(&j).ok_or_else(|| CliError::validation(format!("S{}", j), "missing"))?;
            if let (Some(n), Some(&top)) = (truncation, map.keys().next_back()) {
                if top >= n {
                    return Err(parse_error(line, &format!("S{}", j), format!("exponent {} is not below truncation {}", top, n)));
                }
            }
            connections.push(map);
        }
        Ok(FrescoDocument { rank, lambda, connections, truncation })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "rank = {}", self.rank).unwrap();
        let lambda: Vec<String> = self.lambda.iter().map(ToString::to_string).collect();
        writeln!(out, "lambda = {}", lambda.join(", ")).unwrap();
        for (j, map) in self.connections.iter().enumerate() {
            let entries: Vec<String> = map.iter().map(|(e, c)| format!("{}: {}", e, c)).collect();
            writeln!(out, "S{} = {{{}}}", j + 1, entries.join(", ")).unwrap();
        }
        if let Some(n) = self.truncation {
            writeln!(out, "truncation = {}", n).unwrap();
        }
        out
    }

    pub fn from_fresco(f: &Fresco) -> Self {
        FrescoDocument {
            rank: f.rank(),
            lambda: f.lambda().to_vec(),
            connections: f.connections().iter().map(|s| s.sparse().into_iter().collect()).collect(),
            truncation: Some(f.order()),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.truncation.is_none()
    }

    /// Order used for computations: the flag if given, else the stated
    /// truncation, else the default for these invariants.
    pub fn working_order(&self, flag: Option<usize>) -> Result<usize, CliError> {
        match (flag, self.truncation) {
            (Some(n), Some(t)) if n > t => Err(CliError::validation(
                "truncation",
                format!("--truncation {} exceeds the document's truncation {}", n, t),
            )),
            (Some(n), _) => Ok(n),
            (None, Some(t)) => Ok(t),
            (None, None) => Ok(fresco::fresco_core::default_order(&self.lambda)),
        }
    }

    pub fn to_fresco(&self, order: usize) -> Result<Fresco, CliError> {
        let conn = self
            .connections
            .iter()
            .map(|m| PowerSeries::from_sparse(m.iter().map(|(e, c)| (*e, c.clone())), order))
            .collect();
        Fresco::new(self.lambda.clone(), conn, order).map_err(|e| match e {
            Error::NotGeometric(m) => CliError::validation("lambda", m),
            Error::InvalidPresentation(m) if m.starts_with("connection S") => {
                let index: String = m.chars().filter(char::is_ascii_digit).collect();
                CliError::validation(format!("S{}", index), m)
            }
            Error::InvalidPresentation(m) => CliError::validation("lambda", m),
            other => CliError::from(other),
        })
    }
}
