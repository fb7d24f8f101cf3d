//! Bent complexes A(s), the half complexes B±(s), B⁺(≥s), B⁻(≤s), the
//! projections π±(s), and the thresholds τ and ν.
//!
//! Gradings are doubled throughout: `s2 = 2s`.

use thiserror::Error;

use crate::knot::KnotComplexData;
use crate::linalg::{induced_map, Complex, GradedMap, HomologyMap, LinalgError, Matrix, Rational};

use num_traits::One;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BentError {
    #[error("convention mismatch: {0}")]
    ConventionMismatch(String),
    #[error("operation requires q = 1, data has q = {0}")]
    UnsupportedQ(i64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `A(s)`: d₊ above s, d₊ + d₋ at s, d₋ below s.
#[derive(Clone, Debug)]
pub struct BentComplex {
    pub s2: i64,
    /// Indices into the knot's generators.
    pub gens: Vec<usize>,
    pub complex: Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HalfKind {
    /// `B⁺(s)`: the whole level with d₊.
    Bplus,
    /// `B⁻(s)`: the whole level with d₋.
    Bminus,
    /// `B⁺(≥s)`: gradings ≥ s with d₊.
    BplusGeq,
    /// `B⁻(≤s)`: gradings ≤ s with d₋.
    BminusLeq,
}

#[derive(Clone, Debug)]
pub struct HalfComplex {
    pub kind: HalfKind,
    pub s2: i64,
    pub gens: Vec<usize>,
    pub complex: Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Generators whose grading is congruent to `s2` modulo `2q`.
fn level(k: &KnotComplexData, s2: i64) -> Vec<usize> {
    k.space.select(|g| (g.grading.alex2 - s2).rem_euclid(2 * k.q) == 0)
}

fn restricted(k: &KnotComplexData, gens: &[usize], d: &GradedMap) -> Result<Complex, LinalgError> {
    Complex::new(k.space.restrict(gens), d.restrict(gens, gens))
}

pub fn build_a(k: &KnotComplexData, s2: i64) -> Result<BentComplex, BentError> {
    let gens = level(k, s2);
    let space = k.space.restrict(&gens);
    let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
    let plus = k.d_plus.restrict(&gens, &gens);
    let minus = k.d_minus.restrict(&gens, &gens);
    for (f, t, c) in plus.entries() {
        if space.grading(*f).alex2 >= s2 {
            entries.push((*f, *t, c.clone()));
        }
    }
    for (f, t, c) in minus.entries() {
        if space.grading(*f).alex2 <= s2 {
            entries.push((*f, *t, c.clone()));
        }
    }
    let d = GradedMap::from_indexed(space.clone(), space.clone(), entries)?;
    Ok(BentComplex { s2, gens, complex: Complex::new(space, d)? })
}

pub fn build_b(k: &KnotComplexData, kind: HalfKind, s2: i64) -> Result<HalfComplex, BentError> {
    let all = level(k, s2);
    let (gens, d) = match kind {
        HalfKind::Bplus => (all, &k.d_plus),
        HalfKind::Bminus => (all, &k.d_minus),
        HalfKind::BplusGeq => (all.into_iter().filter(|&i| k.space.grading(i).alex2 >= s2).collect(), &k.d_plus),
        HalfKind::BminusLeq => (all.into_iter().filter(|&i| k.space.grading(i).alex2 <= s2).collect(), &k.d_minus),
    };
    let complex = restricted(k, &gens, d)?;
    Ok(HalfComplex { kind, s2, gens, complex })
}

/// `π⁺(s)` keeps gradings ≥ s, `π⁻(s)` keeps gradings ≤ s; both are chain
/// maps `A(s) → B±(s)`.
pub fn pi_map(k: &KnotComplexData, sign: Sign, s2: i64) -> Result<HomologyMap, BentError> {
    let a = build_a(k, s2)?;
    pi_map_from(k, &a, sign)
}

pub(crate) fn pi_map_from(k: &KnotComplexData, a: &BentComplex, sign: Sign) -> Result<HomologyMap, BentError> {
    let kind = if sign == Sign::Plus { HalfKind::Bplus } else { HalfKind::Bminus };
    let b = build_b(k, kind, a.s2)?;
    let space = a.complex.space();
    let keep = |i: usize| match sign {
        Sign::Plus => space.grading(i).alex2 >= a.s2,
        Sign::Minus => space.grading(i).alex2 <= a.s2,
    };
    let entries = (0..space.dim()).filter(|&i| keep(i)).map(|i| (i, i, Rational::one()));
    let f = GradedMap::from_indexed(space.clone(), b.complex.space().clone(), entries)?;
    Ok(induced_map(&f, &a.complex, &b.complex)?)
}

/// Induced map of the inclusion `B⁺(≥s) → B⁺(s)` or `B⁻(≤s) → B⁻(s)`.
pub fn inclusion_map(k: &KnotComplexData, sign: Sign, s2: i64) -> Result<HomologyMap, BentError> {
    let (sub_kind, full_kind) = match sign {
        Sign::Plus => (HalfKind::BplusGeq, HalfKind::Bplus),
        Sign::Minus => (HalfKind::BminusLeq, HalfKind::Bminus),
    };
    let sub = build_b(k, sub_kind, s2)?;
    let full = build_b(k, full_kind, s2)?;
    let entries = sub.gens.iter().enumerate().map(|(pos, g)| {
        let t = full.gens.iter().position(|x| x == g).expect("sub level is inside the level");
        (pos, t, Rational::one())
    });
    let f = GradedMap::from_indexed(sub.complex.space().clone(), full.complex.space().clone(), entries)?;
    Ok(induced_map(&f, &sub.complex, &full.complex)?)
}

/// Doubled `(î^n_max, î^n_min)` for the framing `n`.
pub fn grading_bounds(k: &KnotComplexData, n: i64) -> (i64, i64) {
    let max2 = (k.q0 - n * k.q).abs() - 1 + 2 * k.genus;
    (max2, -max2)
}

/// Doubled `(î^μ_max, î^μ_min)`.
pub fn grading_bounds_mu(k: &KnotComplexData) -> (i64, i64) {
    let max2 = k.q - 1 + 2 * k.genus;
    (max2, -max2)
}

fn distinct_gradings(k: &KnotComplexData) -> Vec<i64> {
    let mut v: Vec<i64> = k.space.generators().iter().map(|g| g.grading.alex2).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Rank of `H(span{gens with pred}) → H(all, d)`.
fn threshold_rank(k: &KnotComplexData, d: &GradedMap, pred: impl Fn(i64) -> bool) -> Result<usize, BentError> {
    let c = Complex::new(k.space.clone(), d.clone())?;
    let sub = k.space.select(|g| pred(g.grading.alex2));
    Ok(c.inclusion_rank(&sub)?)
}

/// Doubled τ: minus the lowest grading `i` at which `H(B⁻(≤i)) → H(B⁻)`
/// is nonzero, cross-checked against the highest `i` at which
/// `H(B⁺(≥i)) → H(B⁺)` is nonzero.
pub fn tau(k: &KnotComplexData) -> Result<i64, BentError> {
    let levels = distinct_gradings(k);
    let mut minus_threshold = None;
    for &i in &levels {
        if threshold_rank(k, &k.d_minus, |a| a <= i)? > 0 {
            minus_threshold = Some(i);
            break;
        }
    }
    let mut plus_threshold = None;
    for &i in levels.iter().rev() {
        if threshold_rank(k, &k.d_plus, |a| a >= i)? > 0 {
            plus_threshold = Some(i);
            break;
        }
    }
    match (minus_threshold, plus_threshold) {
        (Some(m), Some(p)) if -m == p => Ok(p),
        (m, p) => Err(BentError::ConventionMismatch(format!(
            "d₋ threshold {m:?} and d₊ threshold {p:?} give different τ"
        ))),
    }
}

/// Doubled ν: τ + 1 if π⁺(τ) ≠ 0, else τ. Cross-checked against
/// `max{s : π⁺(s) ≠ 0} + 1`.
pub fn nu(k: &KnotComplexData) -> Result<i64, BentError> {
    let t = tau(k)?;
    nu_with_tau(k, t)
}

pub(crate) fn nu_with_tau(k: &KnotComplexData, tau2: i64) -> Result<i64, BentError> {
    if k.q != 1 {
        return Err(BentError::UnsupportedQ(k.q));
    }
    let at_tau = !pi_map(k, Sign::Plus, tau2)?.is_zero();
    let nu2 = if at_tau { tau2 + 2 } else { tau2 };
    let (hi, lo) = grading_bounds_mu(k);
    let mut last = None;
    let mut s2 = hi + 2;
    while s2 >= lo - 2 {
        if !pi_map(k, Sign::Plus, s2)?.is_zero() {
            last = Some(s2);
            break;
        }
        s2 -= 2;
    }
    match last {
        Some(s) if s + 2 == nu2 => Ok(nu2),
        other => Err(BentError::ConventionMismatch(format!(
            "ν from π⁺(τ) is {nu2}/2, last nonzero π⁺ is at {other:?}"
        ))),
    }
}

/// `dim H(A(s))` for every `s` in `[−g, g]` (q = 1).
pub fn large_surgery_table(k: &KnotComplexData) -> Result<Vec<(i64, usize)>, BentError> {
    if k.q != 1 {
        return Err(BentError::UnsupportedQ(k.q));
    }
    (-k.genus..=k.genus).map(|s| Ok((s, build_a(k, 2 * s)?.complex.homology().dim()))).collect()
}

/// `H(A(s))` together with the matrices of `π⁻(s)` and `π⁺(s)` in the
/// canonical bases, for every `s` of a q = 1 knot.
#[derive(Clone, Debug)]
pub struct BentLevel {
    pub s2: i64,
    pub dim_a: usize,
    pub pi_minus: Matrix,
    pub pi_plus: Matrix,
}

/// All bent levels of a knot. Outside `[−g, g]` every `A(s)` is the same
/// complex as its neighbour closer to the range, so only `g + 2` levels
/// on each side are computed.
#[derive(Clone, Debug)]
pub struct BentFamily {
    lo: i64,
    hi: i64,
    levels: Vec<BentLevel>,
}

impl BentFamily {
    pub fn new(k: &KnotComplexData) -> Result<Self, BentError> {
        if k.q != 1 {
            return Err(BentError::UnsupportedQ(k.q));
        }
        let (hi, lo) = grading_bounds_mu(k);
        let (lo, hi) = (lo - 2, hi + 2);
        let mut levels = Vec::new();
        let mut s2 = lo;
        while s2 <= hi {
            let a = build_a(k, s2)?;
            let minus = pi_map_from(k, &a, Sign::Minus)?;
            let plus = pi_map_from(k, &a, Sign::Plus)?;
            levels.push(BentLevel { s2, dim_a: minus.source.dim(), pi_minus: minus.matrix, pi_plus: plus.matrix });
            s2 += 2;
        }
        Ok(Self { lo, hi, levels })
    }

    /// Level at doubled grading `s2` (even).
    pub fn level(&self, s2: i64) -> &BentLevel {
        let c = s2.clamp(self.lo, self.hi);
        &self.levels[((c - self.lo) / 2) as usize]
    }

    /// The computed range of doubled gradings; outside it levels repeat.
    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::by_name;

    fn k(name: &str) -> KnotComplexData {
        by_name(name).unwrap()
    }

    #[test]
    fn bent_examples() {
        let u = build_a(&k("unknot"), 6).unwrap();
        assert_eq!((u.complex.dim(), u.complex.homology().dim()), (1, 1));
        let t = build_a(&k("trefoil-neg"), 0).unwrap();
        let d: Vec<(&str, &str)> = t.complex.differential().labelled_entries().map(|(a, b, _)| (a, b)).collect();
        assert_eq!(d, vec![("x2", "x1"), ("x2", "x3")]);
        assert_eq!(t.complex.homology().dim(), 1);
        assert_eq!(build_a(&k("box"), 0).unwrap().complex.homology().dim(), 1);
    }

    #[test]
    fn half_examples() {
        let e = build_b(&k("unknot"), HalfKind::BminusLeq, -2).unwrap();
        assert_eq!((e.complex.dim(), e.complex.homology().dim()), (0, 0));
        let t = k("trefoil-neg");
        for s2 in [-4, 0, 6] {
            let b = build_b(&t, HalfKind::Bplus, s2).unwrap();
            let reps = b.complex.homology().reps();
            assert_eq!(reps.len(), 1);
            let support: Vec<usize> = (0..3).filter(|&i| reps[0].vector[i] != Rational::from_integer(0.into())).collect();
            assert_eq!(support, vec![2]);
        }
        let geq = build_b(&t, HalfKind::BplusGeq, 0).unwrap();
        assert_eq!((geq.complex.dim(), geq.complex.homology().dim()), (2, 0));
    }

    #[test]
    fn pi_examples() {
        assert_eq!(pi_map(&k("unknot"), Sign::Plus, 0).unwrap().rank(), 1);
        let t = k("trefoil-neg");
        assert!(pi_map(&t, Sign::Plus, 0).unwrap().is_zero());
        assert_eq!(pi_map(&t, Sign::Minus, 2).unwrap().rank(), 1);
    }

    #[test]
    fn pi_factors_through_inclusion() {
        // rank π± ≤ rank of the inclusion it factors through.
        for knot in crate::knot::catalog() {
            for s2 in (-6..=6).step_by(2) {
                for sign in [Sign::Plus, Sign::Minus] {
                    let p = pi_map(&knot, sign, s2).unwrap().rank();
                    let i = inclusion_map(&knot, sign, s2).unwrap().rank();
                    assert!(p <= i, "{} {sign:?} {s2}", knot.name);
                }
            }
        }
    }

    #[test]
    fn bounds() {
        let mut t = k("unknot");
        t.genus = 2;
        assert_eq!(grading_bounds(&t, 1), (4, -4));
        t.genus = 0;
        assert_eq!(grading_bounds(&t, 5), (4, -4));
        t.genus = 1;
        t.q = 2;
        assert_eq!(grading_bounds_mu(&t), (3, -3));
    }

    #[test]
    fn thresholds() {
        assert_eq!(tau(&k("unknot")).unwrap(), 0);
        assert_eq!(tau(&k("trefoil-neg")).unwrap(), -2);
        assert_eq!(tau(&k("trefoil-pos")).unwrap(), 2);
        assert_eq!(tau(&k("box")).unwrap(), 0);
        assert_eq!(nu(&k("unknot")).unwrap(), 2);
        assert_eq!(nu(&k("trefoil-neg")).unwrap(), 0);
        assert_eq!(nu(&k("box")).unwrap(), 2);
    }

    #[test]
    fn family_matches_direct_maps() {
        let t = k("trefoil-box");
        let fam = BentFamily::new(&t).unwrap();
        for s2 in (-10..=10).step_by(2) {
            let l = fam.level(s2);
            assert_eq!(l.pi_minus, pi_map(&t, Sign::Minus, s2).unwrap().matrix);
            assert_eq!(l.pi_plus, pi_map(&t, Sign::Plus, s2).unwrap().matrix);
        }
    }

    #[test]
    fn large_table() {
        assert_eq!(large_surgery_table(&k("unknot")).unwrap(), vec![(0, 1)]);
        assert_eq!(large_surgery_table(&k("trefoil-neg")).unwrap(), vec![(-1, 1), (0, 1), (1, 1)]);
    }
}
