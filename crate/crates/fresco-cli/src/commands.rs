use fresco::series::parse_rational;
use fresco::transforms::{canonicalization_loss, change_variable, dual_twist, ChangeOfVariable};
use fresco::{invariants, Fresco, Rational};
use serde::Serialize;

use crate::document::FrescoDocument;
use crate::error::CliError;
use crate::report::{self, BetaReport, Family, Rank1Report, SemisimpleReport, Stratum};

/// Largest order tried when looking for one that suffices.
const SEARCH_LIMIT: usize = 1024;

#[derive(Clone, Debug)]
pub enum Command {
    Report,
    Rank1,
    Beta,
    Semisimple,
    Window { start: usize, end: usize },
    Dual { delta: Rational },
    ChangeVar { theta: ChangeOfVariable },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Output {
    Json(String),
    Document(String),
}

impl Output {
    pub fn text(&self) -> &str {
        match self {
            Output::Json(s) | Output::Document(s) => s,
        }
    }
}

pub fn parse_delta(s: &str) -> Result<Rational, CliError> {
    parse_rational(s.trim()).ok_or_else(|| CliError::validation("delta", format!("'{}' is not a rational", s)))
}

/// Coefficients of `a, a^2, ...` in the new variable.
pub fn parse_theta(s: &str) -> Result<ChangeOfVariable, CliError> {
    let coeffs = s
        .split(',')
        .map(|c| {
            parse_rational(c.trim()).ok_or_else(|| CliError::validation("theta", format!("'{}' is not a rational", c.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut full = vec![Rational::from_integer(0.into())];
    full.extend(coeffs);
    ChangeOfVariable::new(full).map_err(|e| CliError::validation("theta", e.to_string()))
}

fn json<T: Serialize>(value: &T) -> Output {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    Output::Json(s)
}

fn window_document(doc: &FrescoDocument, start: usize, end: usize) -> Result<FrescoDocument, CliError> {
    if !(1 <= start && start <= end && end <= doc.rank) {
        return Err(CliError::validation(
            "window",
            format!("need 1 <= i <= j <= {}, got {} {}", doc.rank, start, end),
        ));
    }
    Ok(FrescoDocument {
        rank: end - start + 1,
        lambda: doc.lambda[start - 1..end].to_vec(),
        connections: doc.connections[start - 1..end - 1].to_vec(),
        truncation: doc.truncation,
    })
}

fn evaluate(cmd: &Command, doc: &FrescoDocument, f: &Fresco) -> Result<Output, CliError> {
    // Exact input loses no information by padding before a canonicalization.
    let roomy = || {
        if doc.is_exact() {
            f.padded(f.order() + canonicalization_loss(f.rank()))
        } else {
            f.clone()
        }
    };
    match cmd {
        Command::Report => Ok(json(&report::report(doc, f)?)),
        Command::Rank1 => {
            let families = invariants::rank1_normal_submodules(f)?;
            Ok(json(&Rank1Report { order: f.order(), families: families.iter().map(Family::from).collect() }))
        }
        Command::Beta => {
            let beta = invariants::beta(f)?;
            Ok(json(&BetaReport { order: f.order(), beta: beta.to_string() }))
        }
        Command::Semisimple => {
            let stratum = Stratum::new(invariants::stratum_level(f)?, f.rank());
            Ok(json(&SemisimpleReport { order: f.order(), semisimple: stratum.semisimple, stratum }))
        }
        Command::Window { start, end } => {
            let w = window_document(doc, *start, *end)?;
            w.to_fresco(f.order())?;
            Ok(Output::Document(w.render()))
        }
        Command::Dual { delta } => {
            let d = dual_twist(&roomy(), delta)?;
            Ok(Output::Document(FrescoDocument::from_fresco(&d).render()))
        }
        Command::ChangeVar { theta } => {
            let g = change_variable(&roomy(), theta)?;
            Ok(Output::Document(FrescoDocument::from_fresco(&g).render()))
        }
    }
}

fn succeeds_at(cmd: &Command, doc: &FrescoDocument, order: usize) -> bool {
    let exact = FrescoDocument { truncation: None, ..doc.clone() };
    match exact.to_fresco(order) {
        Ok(f) => !matches!(evaluate(cmd, &exact, &f), Err(CliError::Precision { .. })),
        Err(_) => false,
    }
}

/// Smallest order at which the computation no longer runs out of terms,
/// treating the known terms as exact.
fn minimal_order(cmd: &Command, doc: &FrescoDocument, available: usize) -> Option<usize> {
    let mut low = available;
    let mut high = (2 * low).max(8);
    while !succeeds_at(cmd, doc, high) {
        if high >= SEARCH_LIMIT {
            return None;
        }
        low = high;
        high = (2 * high).min(SEARCH_LIMIT);
    }
    while high - low > 1 {
        let mid = (low + high) / 2;
        if succeeds_at(cmd, doc, mid) {
            high = mid;
        } else {
            low = mid;
        }
    }
    Some(high)
}

pub fn run(cmd: &Command, doc: &FrescoDocument, truncation: Option<usize>) -> Result<Output, CliError> {
    let order = doc.working_order(truncation)?;
    let f = doc.to_fresco(order)?;
    match evaluate(cmd, doc, &f) {
        Err(CliError::Precision { .. }) => {
            Err(CliError::Precision { available: f.order(), suggested: minimal_order(cmd, doc, f.order()) })
        }
        other => other,
    }
}
