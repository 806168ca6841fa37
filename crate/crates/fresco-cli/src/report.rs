use std::collections::BTreeMap;

use fresco::invariants::{self, Rank1Family, StratumReport};
use fresco::{Element, Fresco, Rational};
use serde::Serialize;

use crate::document::FrescoDocument;
use crate::error::CliError;

fn text(r: &Rational) -> String {
    r.to_string()
}

fn texts(rs: &[Rational]) -> Vec<String> {
    rs.iter().map(text).collect()
}

type Sparse = BTreeMap<usize, String>;

#[derive(Serialize)]
pub struct DocumentEcho {
    pub rank: usize,
    pub lambda: Vec<String>,
    pub connections: Vec<Sparse>,
    pub truncation: Option<usize>,
}

impl From<&FrescoDocument> for DocumentEcho {
    fn from(doc: &FrescoDocument) -> Self {
        DocumentEcho {
            rank: doc.rank,
            lambda: texts(&doc.lambda),
            connections: doc
                .connections
                .iter()
                .map(|m| m.iter().map(|(e, c)| (*e, text(c))).collect())
                .collect(),
            truncation: doc.truncation,
        }
    }
}

/// A value or the reason it could not be computed.
#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome<T> {
    Value(T),
    Unavailable(String),
}

fn outcome<T, U>(r: fresco::Result<T>, f: impl FnOnce(T) -> U) -> Result<Outcome<U>, CliError> {
    match r {
        Ok(v) => Ok(Outcome::Value(f(v))),
        Err(e) if e.is_precision() => Err(e.into()),
        Err(e) => Ok(Outcome::Unavailable(e.to_string())),
    }
}

#[derive(Serialize)]
pub struct WindowEntry {
    pub window: [usize; 2],
    pub beta: String,
}

#[derive(Serialize)]
pub struct Stratum {
    pub level: usize,
    pub rank: usize,
    pub semisimple: bool,
    pub failing: Vec<WindowEntry>,
}

impl Stratum {
    pub fn new(report: StratumReport, rank: usize) -> Self {
        Stratum {
            level: report.level,
            rank,
            semisimple: report.level == rank,
            failing: report
                .failing
                .into_iter()
                .map(|w| WindowEntry { window: [w.start, w.end], beta: text(&w.beta) })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct Report {
    pub input: DocumentEcho,
    pub order: usize,
    pub lambda: Vec<String>,
    pub steps: Vec<String>,
    pub p_total: Outcome<String>,
    pub mu: String,
    pub bernstein_roots: Vec<String>,
    pub alpha: Outcome<Vec<String>>,
    pub beta: Outcome<String>,
    pub stratum: Stratum,
}

pub fn report(doc: &FrescoDocument, f: &Fresco) -> Result<Report, CliError> {
    Ok(Report {
        input: doc.into(),
        order: f.order(),
        lambda: texts(f.lambda()),
        steps: texts(&f.steps()),
        p_total: outcome(invariants::p_total(f), |p| text(&p))?,
        mu: text(&f.mu()),
        bernstein_roots: texts(&f.bernstein_roots()),
        alpha: outcome(invariants::alphas(f), |a| texts(&a))?,
        beta: outcome(invariants::beta(f), |b| text(&b))?,
        stratum: Stratum::new(invariants::stratum_level(f)?, f.rank()),
    })
}

fn element(x: &Element) -> Vec<Sparse> {
    x.coords()
        .iter()
        .map(|s| s.sparse().into_iter().map(|(e, c)| (e, text(&c))).collect())
        .collect()
}

#[derive(Serialize)]
pub struct Family {
    pub mu: String,
    pub dimension: usize,
    pub particular: Vec<Sparse>,
    pub directions: Vec<Vec<Sparse>>,
}

impl From<&Rank1Family> for Family {
    fn from(fam: &Rank1Family) -> Self {
        Family {
            mu: text(&fam.mu),
            dimension: fam.dimension(),
            particular: element(&fam.particular),
            directions: fam.directions.iter().map(element).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct Rank1Report {
    pub order: usize,
    pub families: Vec<Family>,
}

#[derive(Serialize)]
pub struct BetaReport {
    pub order: usize,
    pub beta: String,
}

#[derive(Serialize)]
pub struct SemisimpleReport {
    pub order: usize,
    pub semisimple: bool,
    pub stratum: Stratum,
}
