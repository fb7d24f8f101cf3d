//! Surgery mapping cones: integer and zero surgeries, the invariants ν♯
//! and r₀, rational slopes, and dual-knot homology.
//!
//! Slopes are surgery coefficients on S³. Internally `m = −n`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::bent::{
    build_b, grading_bounds, grading_bounds_mu, inclusion_map, nu_with_tau, tau, BentError, BentFamily, HalfKind,
    Sign,
};
use crate::knot::KnotComplexData;
use crate::linalg::{Matrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error(transparent)]
    Bent(#[from] BentError),
    #[error("slope 0 has no single total; use the zero-surgery table")]
    ZeroSlope,
    #[error("τ = 0: ν♯ is not determined by ν")]
    TauZero,
    #[error("surgery dimension at slope {slope} changed from {base} to {larger} when the window grew")]
    WindowUnstable { slope: i64, base: usize, larger: usize },
    #[error("invalid slope: {0}")]
    InvalidSlope(String),
    #[error("operation requires q = 1, data has q = {0}")]
    UnsupportedQ(i64),
    #[error("convention mismatch: {0}")]
    ConventionMismatch(String),
}

/// A block of the assembled map, used to attach scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    /// `π⁻(s): H(A(s)) → H(B⁻(s))`.
    Minus(i64),
    /// `Ξ ∘ π⁺(s): H(A(s)) → H(B⁻(s + m))`.
    Plus(i64),
}

/// Truncated mapping cone of `π⁻ + Ξ_m ∘ π⁺` for `m ≠ 0` and q = 1.
///
/// Sources are `H(A(s))` for `|s| ≤ S`, targets `H(B⁻(t))` for
/// `t ∈ [m − S, S]`. Outside the window every source has exactly one
/// nonzero block, an isomorphism, and cancels against its target.
#[derive(Clone, Debug)]
pub struct ConeAssembly {
    pub m: i64,
    pub window: i64,
    pub sources: Vec<i64>,
    pub targets: Vec<i64>,
    source_dims: Vec<usize>,
    minus: Vec<Matrix>,
    plus: Vec<Matrix>,
}

impl ConeAssembly {
    pub fn new(family: &BentFamily, m: i64, window: i64) -> Self {
        let sources: Vec<i64> = (-window..=window).collect();
        let targets: Vec<i64> = (m - window..=window).collect();
        let mut source_dims = Vec::new();
        let mut minus = Vec::new();
        let mut plus = Vec::new();
        for &s in &sources {
            let l = family.level(2 * s);
            source_dims.push(l.dim_a);
            minus.push(l.pi_minus.clone());
            plus.push(l.pi_plus.clone());
        }
        Self { m, window, sources, targets, source_dims, minus, plus }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dims.iter().sum()
    }

    pub fn target_dim(&self) -> usize {
        self.targets.len()
    }

    /// The total map with every block multiplied by `scalar(block)`.
    pub fn matrix_with(&self, scalar: &mut dyn FnMut(Block) -> Rational) -> Matrix {
        let mut out = Matrix::zeros(self.target_dim(), self.source_dim());
        let row = |t: i64| (t - (self.m - self.window)) as usize;
        let mut col = 0;
        for (k, &s) in self.sources.iter().enumerate() {
            for (block, t, mat) in [(Block::Minus(s), s, &self.minus[k]), (Block::Plus(s), s + self.m, &self.plus[k])] {
                if mat.is_zero() || !(self.m - self.window..=self.window).contains(&t) {
                    continue;
                }
                let c = scalar(block);
                for j in 0..mat.cols() {
                    out.add_to(row(t), col + j, &(mat.get(0, j) * &c));
                }
            }
            col += self.source_dims[k];
        }
        out
    }

    pub fn matrix(&self) -> Matrix {
        self.matrix_with(&mut |_| Rational::one())
    }

    /// `dim H(cone)` with unit scalars.
    pub fn dim(&self) -> usize {
        self.dim_of(&self.matrix())
    }

    pub fn dim_with(&self, scalar: &mut dyn FnMut(Block) -> Rational) -> usize {
        self.dim_of(&self.matrix_with(scalar))
    }

    fn dim_of(&self, m: &Matrix) -> usize {
        let r = m.rank();
        self.source_dim() + self.target_dim() - 2 * r
    }
}

fn require_q1(k: &KnotComplexData) -> Result<(), SurgeryError> {
    if k.q != 1 {
        return Err(SurgeryError::UnsupportedQ(k.q));
    }
    Ok(())
}

/// Default truncation halfwidth for slope parameter `m`.
pub fn default_window(k: &KnotComplexData, m: i64) -> i64 {
    k.genus + m.abs() + 2
}

/// `dim I♯(S³_n(K))` for `n ≠ 0`, checked stable under a window enlarged by 3.
pub fn integer_surgery_dim(k: &KnotComplexData, n: i64) -> Result<usize, SurgeryError> {
    require_q1(k)?;
    let family = BentFamily::new(k)?;
    integer_surgery_dim_in(k, &family, n)
}

pub fn integer_surgery_dim_in(k: &KnotComplexData, family: &BentFamily, n: i64) -> Result<usize, SurgeryError> {
    if n == 0 {
        return Err(SurgeryError::ZeroSlope);
    }
    let m = -n;
    let s = default_window(k, m);
    let base = ConeAssembly::new(family, m, s).dim();
    let larger = ConeAssembly::new(family, m, s + 3).dim();
    if base != larger {
        return Err(SurgeryError::WindowUnstable { slope: n, base, larger });
    }
    Ok(base)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroCell {
    Dim(usize),
    Indeterminate,
}

impl ZeroCell {
    pub fn dim(self) -> Option<usize> {
        match self {
            ZeroCell::Dim(d) => Some(d),
            ZeroCell::Indeterminate => None,
        }
    }
}

/// Per-grading `dim I♯(S³_0(K), s)` for `s ∈ [1−g, g−1]`, always including
/// `s = 0`. Grading 0 is indeterminate when τ = 0 and ν = 1.
pub fn zero_surgery_dims(k: &KnotComplexData) -> Result<BTreeMap<i64, ZeroCell>, SurgeryError> {
    require_q1(k)?;
    let t = tau(k)?;
    let (work, t) = if t > 0 { (k.mirror(), -t) } else { (k.clone(), t) };
    let nu2 = nu_with_tau(&work, t)?;
    let family = BentFamily::new(&work)?;
    let mut out = BTreeMap::new();
    for s in (1 - k.genus).min(0)..=(k.genus - 1).max(0) {
        let l = family.level(2 * s);
        let minus_zero = l.pi_minus.is_zero();
        let plus_zero = l.pi_plus.is_zero();
        if s == 0 && t == 0 {
            if nu2 != 0 {
                out.insert(0, ZeroCell::Indeterminate);
                continue;
            }
            if !minus_zero {
                return Err(SurgeryError::ConventionMismatch("τ = ν = 0 but π⁻(0) ≠ 0".into()));
            }
        }
        if !minus_zero && !plus_zero {
            return Err(SurgeryError::ConventionMismatch(format!("π⁺({s}) and π⁻({s}) are both nonzero with τ ≤ 0")));
        }
        out.insert(s, ZeroCell::Dim(zero_cell_dim(&family, s, &mut |_| Rational::one())));
    }
    Ok(out)
}

/// `dim H(cone(a·π⁻(s) + b·Ξ_{0,s}∘π⁺(s)))` with `a, b` from `scalar`.
pub fn zero_cell_dim(family: &BentFamily, s: i64, scalar: &mut dyn FnMut(Block) -> Rational) -> usize {
    let l = family.level(2 * s);
    let a = scalar(Block::Minus(s));
    let b = scalar(Block::Plus(s));
    let m = l.pi_minus.scale(&a).add(&l.pi_plus.scale(&b));
    l.dim_a + 1 - 2 * m.rank()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub tau2: i64,
    pub nu2: i64,
    /// `2ν − 1`; absent when τ = 0.
    pub nu_sharp: Option<i64>,
    /// `dim I♯(S³_{2ν−1}(K))`; absent when τ = 0.
    pub r0: Option<usize>,
}

pub fn invariants(k: &KnotComplexData) -> Result<InvariantReport, SurgeryError> {
    require_q1(k)?;
    let tau2 = tau(k)?;
    let nu2 = nu_with_tau(k, tau2)?;
    let (nu_sharp, r0) = if tau2 == 0 {
        (None, None)
    } else {
        let ns = nu2 - 1;
        (Some(ns), Some(integer_surgery_dim(k, ns)?))
    };
    Ok(InvariantReport { tau2, nu2, nu_sharp, r0 })
}

pub fn nu_sharp(k: &KnotComplexData) -> Result<i64, SurgeryError> {
    invariants(k)?.nu_sharp.ok_or(SurgeryError::TauZero)
}

pub fn r0(k: &KnotComplexData) -> Result<usize, SurgeryError> {
    invariants(k)?.r0.ok_or(SurgeryError::TauZero)
}

/// `q·r₀ + |p − q·ν♯|` for the slope `p/q`.
pub fn rational_surgery_dim(k: &KnotComplexData, p: i64, q: i64) -> Result<usize, SurgeryError> {
    if q < 1 {
        return Err(SurgeryError::InvalidSlope(format!("denominator {q} must be positive")));
    }
    if p.gcd(&q) != 1 {
        return Err(SurgeryError::InvalidSlope(format!("{p}/{q} is not reduced")));
    }
    let inv = invariants(k)?;
    let (ns, r0) = match (inv.nu_sharp, inv.r0) {
        (Some(ns), Some(r0)) => (ns, r0),
        _ => return Err(SurgeryError::TauZero),
    };
    Ok(q as usize * r0 + (p - q * ns).unsigned_abs() as usize)
}

/// Dimension of the dual knot's homology in doubled grading `j2` after
/// surgery with parameter `m`: the cone of
/// `(I⁻(j⁻), Ξ′ ∘ I⁺(j⁺)): H(B⁻(≤j⁻)) ⊕ H(B⁺(≥j⁺)) → H(B⁻(j⁻))`.
pub fn dual_knot_dim(k: &KnotComplexData, m: i64, j2: i64) -> Result<usize, SurgeryError> {
    let (max_m, min_m) = grading_bounds(k, m);
    let (max_mu, min_mu) = grading_bounds_mu(k);
    let jp = j2 - max_m + max_mu;
    let jm = j2 - min_m + min_mu;
    let minus = inclusion_map(k, Sign::Minus, jm)?;
    let plus = inclusion_map(k, Sign::Plus, jp)?;
    let target = minus.target.dim();
    if plus.target.dim() != target {
        return Err(SurgeryError::ConventionMismatch(format!(
            "H(B⁺({jp}/2)) and H(B⁻({jm}/2)) differ in dimension"
        )));
    }
    let map = minus.matrix.hstack(&plus.matrix);
    let r = map.rank();
    Ok(map.cols() - r + target - r)
}

/// Dual-knot dimensions over every doubled grading `j2` in `[î^m_min, î^m_max]`.
pub fn dual_knot_table(k: &KnotComplexData, m: i64) -> Result<Vec<(i64, usize)>, SurgeryError> {
    let (max_m, min_m) = grading_bounds(k, m);
    (min_m..=max_m).step_by(2).map(|j2| Ok((j2, dual_knot_dim(k, m, j2)?))).collect()
}

/// `dim H(B⁻(≤i))` at doubled grading `i2`.
pub fn minus_sublevel_dim(k: &KnotComplexData, i2: i64) -> Result<usize, SurgeryError> {
    Ok(build_b(k, HalfKind::BminusLeq, i2)?.complex.homology().dim())
}

/// The case formulas for `dim I♯(−S³_{−m}(K))` in terms of τ, ν, g and
/// `Σ_{|i|<g} dim H(A(i))`. Knots with τ > 0 are replaced by their mirror
/// with `m` negated.
pub fn closed_form_case_dims(k: &KnotComplexData, m: i64) -> Result<i64, SurgeryError> {
    require_q1(k)?;
    if m == 0 {
        return Err(SurgeryError::ZeroSlope);
    }
    let t2 = tau(k)?;
    if t2 == 0 {
        return Err(SurgeryError::TauZero);
    }
    let (k, m, t2) = if t2 > 0 { (k.mirror(), -m, -t2) } else { (k.clone(), m, t2) };
    let nu2 = nu_with_tau(&k, t2)?;
    let family = BentFamily::new(&k)?;
    let (g, t) = (k.genus, t2 / 2);
    let sum_a: i64 = (1 - g..g).map(|i| family.level(2 * i).dim_a as i64).sum();
    let dim = if nu2 == t2 + 2 {
        if m > 0 && m <= -2 * t - 1 {
            sum_a - 2 * g - 4 * t - 1 - m
        } else if m > 0 {
            sum_a - 2 * g + 1 + m
        } else {
            sum_a - 2 * g - 4 * t - 1 - m
        }
    } else if m > 0 && m <= -2 * t + 1 {
        sum_a - 2 * g - 4 * t + 3 - m
    } else if m > 0 {
        sum_a - 2 * g + 1 + m
    } else {
        sum_a - 2 * g - 4 * t + 3 - m
    };
    Ok(dim)
}

/// `dim H(A(s))` for `s ∈ [−g, g]`; every `|s| > g` contributes 1.
pub fn large_surgery_table(k: &KnotComplexData) -> Result<Vec<(i64, usize)>, SurgeryError> {
    Ok(crate::bent::large_surgery_table(k)?)
}

/// Result for one slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeResult {
    Total(usize),
    Zero(BTreeMap<i64, ZeroCell>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryReport {
    pub rows: Vec<(i64, SlopeResult)>,
}

impl SurgeryReport {
    pub fn has_indeterminate(&self) -> bool {
        self.rows.iter().any(|(_, r)| matches!(r, SlopeResult::Zero(z) if z.values().any(|c| *c == ZeroCell::Indeterminate)))
    }
}

pub fn surgery_report(k: &KnotComplexData, slopes: impl IntoIterator<Item = i64>) -> Result<SurgeryReport, SurgeryError> {
    require_q1(k)?;
    let family = BentFamily::new(k)?;
    let mut rows = Vec::new();
    for n in slopes {
        let r = if n == 0 {
            SlopeResult::Zero(zero_surgery_dims(k)?)
        } else {
            SlopeResult::Total(integer_surgery_dim_in(k, &family, n)?)
        };
        rows.push((n, r));
    }
    Ok(SurgeryReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::by_name;

    fn k(name: &str) -> KnotComplexData {
        by_name(name).unwrap()
    }

    #[test]
    fn unknot_surgeries() {
        let u = k("unknot");
        assert_eq!(integer_surgery_dim(&u, -5).unwrap(), 5);
        assert_eq!(integer_surgery_dim(&u, 3).unwrap(), 3);
        assert_eq!(integer_surgery_dim(&u, 0), Err(SurgeryError::ZeroSlope));
    }

    #[test]
    fn trefoil_surgeries() {
        let t = k("trefoil-neg");
        assert_eq!(integer_surgery_dim(&t, -1).unwrap(), 1);
        assert_eq!(integer_surgery_dim(&t, -2).unwrap(), 2);
        assert_eq!(integer_surgery_dim(&t, 1).unwrap(), 3);
    }

    #[test]
    fn zero_surgery_examples() {
        assert_eq!(zero_surgery_dims(&k("trefoil-neg")).unwrap(), BTreeMap::from([(0, ZeroCell::Dim(2))]));
        assert_eq!(zero_surgery_dims(&k("box")).unwrap(), BTreeMap::from([(0, ZeroCell::Indeterminate)]));
        assert_eq!(zero_surgery_dims(&k("unknot")).unwrap(), BTreeMap::from([(0, ZeroCell::Indeterminate)]));
    }

    #[test]
    fn invariant_examples() {
        let t = invariants(&k("trefoil-neg")).unwrap();
        assert_eq!(t, InvariantReport { tau2: -2, nu2: 0, nu_sharp: Some(-1), r0: Some(1) });
        assert_eq!(nu_sharp(&k("trefoil-pos")).unwrap(), 1);
        assert_eq!(r0(&k("trefoil-pos")).unwrap(), 1);
        assert_eq!(nu_sharp(&k("unknot")), Err(SurgeryError::TauZero));
    }

    #[test]
    fn rational_examples() {
        let t = k("trefoil-neg");
        assert_eq!(rational_surgery_dim(&t, 1, 1).unwrap(), 3);
        assert_eq!(rational_surgery_dim(&t, 1, 2).unwrap(), 5);
        assert_eq!(rational_surgery_dim(&t, -1, 1).unwrap(), 1);
        assert_eq!(rational_surgery_dim(&t, 0, 1).unwrap(), 2);
        assert!(matches!(rational_surgery_dim(&t, 2, 4), Err(SurgeryError::InvalidSlope(_))));
        assert_eq!(rational_surgery_dim(&k("unknot"), 1, 1), Err(SurgeryError::TauZero));
    }

    #[test]
    fn dual_examples() {
        let u = k("unknot");
        for j2 in [-4, -2, 0, 2, 4] {
            assert_eq!(dual_knot_dim(&u, 5, j2).unwrap(), 1);
        }
        assert_eq!(dual_knot_dim(&u, 5, 6).unwrap(), 0);
        assert_eq!(dual_knot_table(&u, 5).unwrap().iter().map(|x| x.1).sum::<usize>(), 5);
        assert_eq!(dual_knot_dim(&k("trefoil-neg"), 7, 0).unwrap(), 1);
    }

    #[test]
    fn closed_form_examples() {
        let t = k("trefoil-neg");
        assert_eq!(closed_form_case_dims(&t, 1).unwrap(), 1);
        assert_eq!(closed_form_case_dims(&t, 3).unwrap(), 3);
        assert_eq!(closed_form_case_dims(&k("unknot"), 1), Err(SurgeryError::TauZero));
    }

    #[test]
    fn report_rows() {
        let r = surgery_report(&k("trefoil-neg"), -3..=3).unwrap();
        assert_eq!(r.rows.len(), 7);
        assert_eq!(r.rows[3], (0, SlopeResult::Zero(BTreeMap::from([(0, ZeroCell::Dim(2))]))));
        assert!(!r.has_indeterminate());
        assert!(surgery_report(&k("box"), [0]).unwrap().has_indeterminate());
    }
}
