use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::rational::Rational;
use super::LinalgError;

/// Element of ℤ₂, the homological grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Z2(u8);

impl Z2 {
    pub const EVEN: Z2 = Z2(0);
    pub const ODD: Z2 = Z2(1);

    pub fn new(v: i64) -> Z2 {
        Z2(v.rem_euclid(2) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn flip(self) -> Z2 {
        Z2(1 - self.0)
    }

    pub fn add(self, other: Z2) -> Z2 {
        Z2((self.0 + other.0) % 2)
    }

    /// `other - self`, which in ℤ₂ is the same as the sum.
    pub fn diff(self, other: Z2) -> Z2 {
        self.add(other)
    }
}

impl fmt::Display for Z2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Bigrading of a generator: twice the Alexander grading, and ℤ₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grading {
    pub alex2: i64,
    pub h: Z2,
}

impl Grading {
    pub fn new(alex2: i64, h: Z2) -> Self {
        Self { alex2, h }
    }

    pub fn shift_h(self, by: Z2) -> Self {
        Self { alex2: self.alex2, h: self.h.add(by) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub grading: Grading,
}

/// Ordered list of labelled, graded basis vectors.
#[derive(Clone, Debug, Default)]
pub struct GradedSpace {
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for GradedSpace {}

impl GradedSpace {
    pub fn new(gens: Vec<Generator>) -> Result<Self, LinalgError> {
        let mut index = HashMap::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if index.insert(g.label.clone(), i).is_some() {
                return Err(LinalgError::DuplicateLabel(g.label.clone()));
            }
        }
        Ok(Self { gens, index })
    }

    pub fn from_pairs<S: Into<String>>(
        pairs: impl IntoIterator<Item = (S, Grading)>,
    ) -> Result<Self, LinalgError> {
        Self::new(
            pairs.into_iter().map(|(label, grading)| Generator { label: label.into(), grading }).collect(),
        )
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn grading(&self, i: usize) -> Grading {
        self.gens[i].grading
    }

    pub fn label(&self, i: usize) -> &str {
        &self.gens[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Subspace spanned by the generators at the given indices, in order.
    pub fn restrict(&self, idx: &[usize]) -> GradedSpace {
        GradedSpace::new(idx.iter().map(|&i| self.gens[i].clone()).collect())
            .expect("labels of a subset stay unique")
    }

    /// Indices of generators satisfying a predicate.
    pub fn select(&self, pred: impl Fn(&Generator) -> bool) -> Vec<usize> {
        (0..self.dim()).filter(|&i| pred(&self.gens[i])).collect()
    }

    /// Same generators with every grading transformed.
    pub fn map_gradings(&self, f: impl Fn(Grading) -> Grading) -> GradedSpace {
        GradedSpace::new(
            self.gens.iter().map(|g| Generator { label: g.label.clone(), grading: f(g.grading) }).collect(),
        )
        .expect("labels unchanged")
    }

    pub fn gradings(&self) -> BTreeSet<Grading> {
        self.gens.iter().map(|g| g.grading).collect()
    }
}

/// Linear map between graded spaces, stored as sorted `(from, to, coeff)`
/// triplets with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    entries: Vec<(usize, usize, Rational)>,
}

impl GradedMap {
    pub fn zero(source: GradedSpace, target: GradedSpace) -> Self {
        Self { source, target, entries: Vec::new() }
    }

    pub fn identity(space: GradedSpace) -> Self {
        let entries = (0..space.dim()).map(|i| (i, i, Rational::one())).collect();
        Self { source: space.clone(), target: space, entries }
    }

    /// Entries by index; duplicates are summed and zeros dropped.
    pub fn from_indexed(
        source: GradedSpace,
        target: GradedSpace,
        entries: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self, LinalgError> {
        let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (from, to, c) in entries {
            if from >= source.dim() || to >= target.dim() {
                return Err(LinalgError::IndexOutOfRange { from, to });
            }
            *acc.entry((from, to)).or_insert_with(Rational::zero) += c;
        }
        let entries = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((f, t), c)| (f, t, c)).collect();
        Ok(Self { source, target, entries })
    }

    /// Entries by label.
    pub fn from_labels<'a>(
        source: GradedSpace,
        target: GradedSpace,
        entries: impl IntoIterator<Item = (&'a str, &'a str, Rational)>,
    ) -> Result<Self, LinalgError> {
        let mut idx = Vec::new();
        for (from, to, c) in entries {
            let f = source.index_of(from).ok_or_else(|| LinalgError::UnknownLabel(from.to_string()))?;
            let t = target.index_of(to).ok_or_else(|| LinalgError::UnknownLabel(to.to_string()))?;
            idx.push((f, t, c));
        }
        Self::from_indexed(source, target, idx)
    }

    pub fn from_matrix(source: GradedSpace, target: GradedSpace, m: &Matrix) -> Self {
        assert_eq!((m.rows(), m.cols()), (target.dim(), source.dim()));
        let mut entries = Vec::new();
        for from in 0..source.dim() {
            for to in 0..target.dim() {
                let c = m.get(to, from);
                if !c.is_zero() {
                    entries.push((from, to, c.clone()));
                }
            }
        }
        Self { source, target, entries }
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn entries(&self) -> &[(usize, usize, Rational)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries as `(from-label, to-label, coeff)`.
    pub fn labelled_entries(&self) -> impl Iterator<Item = (&str, &str, &Rational)> {
        self.entries.iter().map(|(f, t, c)| (self.source.label(*f), self.target.label(*t), c))
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.target.dim(), self.source.dim());
        for (f, t, c) in &self.entries {
            m.set(*t, *f, c.clone());
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.to_matrix().rank()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GradedMap) -> Result<GradedMap, LinalgError> {
        if first.target != self.source {
            return Err(LinalgError::DimensionMismatch("composition"));
        }
        let m = self.to_matrix().mul(&first.to_matrix());
        Ok(GradedMap::from_matrix(first.source.clone(), self.target.clone(), &m))
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap, LinalgError> {
        if self.source != other.source || self.target != other.target {
            return Err(LinalgError::DimensionMismatch("sum"));
        }
        GradedMap::from_indexed(
            self.source.clone(),
            self.target.clone(),
            self.entries.iter().chain(&other.entries).cloned(),
        )
    }

    pub fn scale(&self, c: &Rational) -> GradedMap {
        if c.is_zero() {
            return GradedMap::zero(self.source.clone(), self.target.clone());
        }
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            entries: self.entries.iter().map(|(f, t, x)| (*f, *t, x * c)).collect(),
        }
    }

    /// Same coefficients on new source/target spaces with equal dimensions.
    pub fn with_spaces(&self, source: GradedSpace, target: GradedSpace) -> GradedMap {
        assert_eq!((source.dim(), target.dim()), (self.source.dim(), self.target.dim()));
        GradedMap { source, target, entries: self.entries.clone() }
    }

    /// The transposed map `target -> source`.
    pub fn transpose(&self) -> GradedMap {
        GradedMap::from_indexed(
            self.target.clone(),
            self.source.clone(),
            self.entries.iter().map(|(f, t, c)| (*t, *f, c.clone())),
        )
        .expect("indices valid")
    }

    /// `(alex2 shift, h shift)` of one entry.
    pub fn entry_shift(&self, from: usize, to: usize) -> (i64, Z2) {
        let a = self.source.grading(from);
        let b = self.target.grading(to);
        (b.alex2 - a.alex2, a.h.diff(b.h))
    }

    /// Distinct shifts occurring among the entries.
    pub fn shifts(&self) -> BTreeSet<(i64, Z2)> {
        self.entries.iter().map(|(f, t, _)| self.entry_shift(*f, *t)).collect()
    }

    /// Whether every entry has the given `(alex2, h)` shift.
    pub fn is_homogeneous(&self, alex2: i64, h: Z2) -> bool {
        self.entries.iter().all(|(f, t, _)| self.entry_shift(*f, *t) == (alex2, h))
    }

    /// Whether every entry has the given ℤ₂ shift.
    pub fn is_h_homogeneous(&self, h: Z2) -> bool {
        self.entries.iter().all(|(f, t, _)| self.entry_shift(*f, *t).1 == h)
    }

    /// Restriction to a subset of source and target generators.
    pub fn restrict(&self, src_idx: &[usize], tgt_idx: &[usize]) -> GradedMap {
        let src_pos: HashMap<usize, usize> = src_idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let tgt_pos: HashMap<usize, usize> = tgt_idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let entries: Vec<_> = self
            .entries
            .iter()
            .filter_map(|(f, t, c)| Some((*src_pos.get(f)?, *tgt_pos.get(t)?, c.clone())))
            .collect();
        GradedMap::from_indexed(self.source.restrict(src_idx), self.target.restrict(tgt_idx), entries)
            .expect("restricted indices valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;

    fn space(gs: &[(&str, i64, i64)]) -> GradedSpace {
        GradedSpace::from_pairs(gs.iter().map(|&(l, a, h)| (l, Grading::new(a, Z2::new(h))))).unwrap()
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(matches!(
            GradedSpace::from_pairs([("a", Grading::new(0, Z2::EVEN)), ("a", Grading::new(2, Z2::EVEN))]),
            Err(LinalgError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn entries_merge_and_shift() {
        let s = space(&[("x", 0, 1), ("y", 2, 0)]);
        let f = GradedMap::from_labels(s.clone(), s.clone(), [("x", "y", int(1)), ("x", "y", int(2))]).unwrap();
        assert_eq!(f.entries(), &[(0, 1, int(3))]);
        assert!(f.is_homogeneous(2, Z2::ODD));
        let g = GradedMap::from_labels(s.clone(), s, [("x", "y", int(1)), ("x", "y", int(-1))]).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn unknown_label() {
        let s = space(&[("x", 0, 0)]);
        assert!(matches!(
            GradedMap::from_labels(s.clone(), s, [("x", "z", int(1))]),
            Err(LinalgError::UnknownLabel(l)) if l == "z"
        ));
    }

    #[test]
    fn transpose_and_compose() {
        let s = space(&[("a", 0, 0), ("b", 2, 1)]);
        let f = GradedMap::from_labels(s.clone(), s.clone(), [("a", "b", int(5))]).unwrap();
        let t = f.transpose();
        assert_eq!(t.entries(), &[(1, 0, int(5))]);
        assert!(f.compose(&f).unwrap().is_zero());
        assert_eq!(t.compose(&f).unwrap().entries(), &[(0, 0, int(25))]);
    }
}
