//! Knot data: a graded space with the two differentials d₊ and d₋,
//! validation, JSON I/O, built-in fixtures and the mirror/reverse
//! involutions.

mod catalog;
mod io;

use std::fmt;

use thiserror::Error;

use crate::linalg::{homology_dims, Complex, GradedMap, GradedSpace, Grading, LinalgError, Z2};

pub use catalog::{by_name, catalog, random_knot, CATALOG_NAMES};
pub use io::{from_json_str, load, save, to_json_string};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotComplexData {
    pub name: String,
    pub genus: i64,
    /// `q` of the framing basis; 1 for knots in S³.
    pub q: i64,
    pub q0: i64,
    pub space: GradedSpace,
    pub d_plus: GradedMap,
    pub d_minus: GradedMap,
}

#[derive(Debug, Error)]
pub enum KnotError {
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("validation failed: {0}")]
    Validation(ValidationReport),
}

/// Outcome of one invariant check, with the offending generators or entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    pub offenders: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<InvariantCheck>,
    /// Grading of the unique d₊-homology class, when it exists.
    pub plus_class: Option<Grading>,
    pub minus_class: Option<Grading>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fails: Vec<String> =
            self.failures().map(|c| format!("{} [{}]", c.name, c.offenders.join(", "))).collect();
        if fails.is_empty() {
            write!(f, "all invariants hold")
        } else {
            write!(f, "{}", fails.join("; "))
        }
    }
}

pub const CHECK_PLUS_SQUARE: &str = "d_plus squares to zero";
pub const CHECK_MINUS_SQUARE: &str = "d_minus squares to zero";
pub const CHECK_PLUS_RAISES: &str = "d_plus raises grading by multiples of 2q";
pub const CHECK_MINUS_LOWERS: &str = "d_minus lowers grading by multiples of 2q";
pub const CHECK_FLIPS_H: &str = "differentials flip h";
pub const CHECK_RANGE: &str = "gradings within genus bounds";
pub const CHECK_PARITY: &str = "grading parity matches q";
pub const CHECK_PLUS_UNIT: &str = "unit d_plus-homology";
pub const CHECK_MINUS_UNIT: &str = "unit d_minus-homology";

impl KnotComplexData {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Largest and smallest admissible alex2 values.
    pub fn alex2_max(&self) -> i64 {
        (self.q - 1) + 2 * self.genus
    }

    pub fn alex2_min(&self) -> i64 {
        -self.alex2_max()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let entry = |m: &GradedMap, f: usize, t: usize| format!("{} -> {}", m.source().label(f), m.target().label(t));
        let square = |m: &GradedMap| {
            let x = m.to_matrix();
            x.mul(&x).is_zero()
        };
        checks.push(InvariantCheck {
            name: CHECK_PLUS_SQUARE,
            passed: square(&self.d_plus),
            offenders: vec![],
        });
        checks.push(InvariantCheck {
            name: CHECK_MINUS_SQUARE,
            passed: square(&self.d_minus),
            offenders: vec![],
        });
        for (name, m, sign) in [(CHECK_PLUS_RAISES, &self.d_plus, 1), (CHECK_MINUS_LOWERS, &self.d_minus, -1)] {
            let offenders: Vec<String> = m
                .entries()
                .iter()
                .filter(|(f, t, _)| {
                    let shift = sign * m.entry_shift(*f, *t).0;
                    shift <= 0 || shift % (2 * self.q) != 0
                })
                .map(|(f, t, _)| entry(m, *f, *t))
                .collect();
            checks.push(InvariantCheck { name, passed: offenders.is_empty(), offenders });
        }
        let offenders: Vec<String> = [("d_plus", &self.d_plus), ("d_minus", &self.d_minus)]
            .into_iter()
            .flat_map(|(tag, m)| {
                m.entries()
                    .iter()
                    .filter(|(f, t, _)| m.entry_shift(*f, *t).1 != Z2::ODD)
                    .map(move |(f, t, _)| format!("{tag}: {}", entry(m, *f, *t)))
            })
            .collect();
        checks.push(InvariantCheck { name: CHECK_FLIPS_H, passed: offenders.is_empty(), offenders });
        let (lo, hi) = (self.alex2_min(), self.alex2_max());
        let offenders: Vec<String> = self
            .space
            .generators()
            .iter()
            .filter(|g| g.grading.alex2 < lo || g.grading.alex2 > hi)
            .map(|g| g.label.clone())
            .collect();
        checks.push(InvariantCheck { name: CHECK_RANGE, passed: offenders.is_empty(), offenders });
        let offenders: Vec<String> = self
            .space
            .generators()
            .iter()
            .filter(|g| (g.grading.alex2 - (self.q - 1)).rem_euclid(2) != 0)
            .map(|g| g.label.clone())
            .collect();
        checks.push(InvariantCheck { name: CHECK_PARITY, passed: offenders.is_empty(), offenders });

        let mut classes = [None, None];
        for (k, (name, m)) in [(CHECK_PLUS_UNIT, &self.d_plus), (CHECK_MINUS_UNIT, &self.d_minus)].into_iter().enumerate()
        {
            let check = match Complex::new(self.space.clone(), m.clone()) {
                Ok(c) => {
                    let dims = homology_dims(&c);
                    if dims.total == 1 {
                        classes[k] = dims.by_grading.and_then(|b| b.keys().next().copied());
                    }
                    InvariantCheck {
                        name,
                        passed: dims.total == 1,
                        offenders: if dims.total == 1 { vec![] } else { vec![format!("dimension {}", dims.total)] },
                    }
                }
                Err(_) => InvariantCheck { name, passed: false, offenders: vec!["not a differential".into()] },
            };
            checks.push(check);
        }
        ValidationReport { checks, plus_class: classes[0], minus_class: classes[1] }
    }

    /// Returns `self` if every invariant holds.
    pub fn validated(self) -> Result<Self, KnotError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(self)
        } else {
            Err(KnotError::Validation(report))
        }
    }

    /// `(space, d₊)` as a complex.
    pub fn plus_complex(&self) -> Result<Complex, LinalgError> {
        Complex::new(self.space.clone(), self.d_plus.clone())
    }

    /// `(space, d₋)` as a complex.
    pub fn minus_complex(&self) -> Result<Complex, LinalgError> {
        Complex::new(self.space.clone(), self.d_minus.clone())
    }

    /// Dual complex: negate every Alexander grading and transpose both
    /// differentials. Transposition already turns the lowered grading of a
    /// raising map back into a raise after negation, so d₊ stays d₊.
    pub fn mirror(&self) -> KnotComplexData {
        let space = self.space.map_gradings(|g| Grading::new(-g.alex2, g.h));
        KnotComplexData {
            name: involution_name(&self.name, "mirror"),
            genus: self.genus,
            q: self.q,
            q0: self.q0,
            d_plus: self.d_plus.transpose().with_spaces(space.clone(), space.clone()),
            d_minus: self.d_minus.transpose().with_spaces(space.clone(), space.clone()),
            space,
        }
    }

    /// Orientation reversal: negate every Alexander grading and swap d₊ with d₋.
    pub fn reverse(&self) -> KnotComplexData {
        let space = self.space.map_gradings(|g| Grading::new(-g.alex2, g.h));
        KnotComplexData {
            name: involution_name(&self.name, "reverse"),
            genus: self.genus,
            q: self.q,
            q0: self.q0,
            d_plus: self.d_minus.with_spaces(space.clone(), space.clone()),
            d_minus: self.d_plus.with_spaces(space.clone(), space.clone()),
            space,
        }
    }

    /// Equality of everything except the name.
    pub fn same_data(&self, other: &KnotComplexData) -> bool {
        self.genus == other.genus
            && self.q == other.q
            && self.q0 == other.q0
            && self.space == other.space
            && self.d_plus == other.d_plus
            && self.d_minus == other.d_minus
    }
}

// mirror(mirror(K)) gets K's name back.
fn involution_name(name: &str, op: &str) -> String {
    let prefix = format!("{op}(");
    match name.strip_prefix(&prefix).and_then(|s| s.strip_suffix(')')) {
        Some(inner) => inner.to_string(),
        None => format!("{op}({name})"),
    }
}
