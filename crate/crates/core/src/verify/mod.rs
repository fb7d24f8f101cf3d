//! Executable checks of the structural properties of cones, bent complexes
//! and surgery dimensions, on fixed knots and on seeded random instances.

mod lemmas;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bent::{
    build_a, build_b, grading_bounds, grading_bounds_mu, inclusion_map, nu, tau, BentFamily, HalfKind, Sign,
};
use crate::knot::{KnotComplexData, KnotError};
use crate::linalg::{mapping_cone, homology_dims, ratio, GradedMap, Rational};
use crate::surgery::{
    closed_form_case_dims, default_window, dual_knot_dim, integer_surgery_dim_in, minus_sublevel_dim,
    zero_cell_dim, zero_surgery_dims, ConeAssembly, ZeroCell,
};

pub use lemmas::{check_projectivity, check_replacing_maps, ProjectivityInstance, ReplacingInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    /// Knot name or random-instance descriptor.
    pub instance: String,
    pub status: Status,
    /// Counterexample on failure, reason when skipped.
    pub detail: String,
    pub seed: u64,
}

impl CheckResult {
    fn new(name: &str, instance: &str, seed: u64, outcome: Outcome) -> Self {
        let (status, detail) = match outcome {
            Outcome::Pass => (Status::Pass, String::new()),
            Outcome::Fail(d) => (Status::Fail, d),
            Outcome::Skip(d) => (Status::Skipped, d),
        };
        Self { name: name.to_string(), instance: instance.to_string(), status, detail, seed }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

pub enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Outcome {
    if cond {
        Outcome::Pass
    } else {
        Outcome::Fail(detail())
    }
}

/// A random nonzero rational with small numerator and denominator.
pub(crate) fn random_scalar(rng: &mut ChaCha8Rng) -> Rational {
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-9..=9);
    }
    ratio(p, rng.gen_range(1..=9))
}

/// Nonzero surgery slopes checked by the suite.
pub const SLOPES: [i64; 16] = [-8, -7, -6, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 6, 7, 8];

/// Runs every property check against `k`. Random parts are driven by `seed`.
pub fn check_suite(k: &KnotComplexData, seed: u64) -> Result<Vec<CheckResult>, KnotError> {
    let report = k.validate();
    if !report.is_valid() {
        return Err(KnotError::Validation(report));
    }
    let name = k.name.as_str();
    let mut out = vec![
        CheckResult::new("projectivity", &format!("random seed {seed}"), seed, check_projectivity(seed).outcome()),
        CheckResult::new("replacing-maps", &format!("random seed {seed}"), seed, check_replacing_maps(seed).outcome()),
    ];
    let run = |f: &dyn Fn() -> Result<Outcome, String>| f().unwrap_or_else(|e| Outcome::Fail(format!("error: {e}")));
    let checks: Vec<(&str, Box<dyn Fn() -> Result<Outcome, String>>)> = vec![
        ("cone-les", Box::new(|| cone_les(k))),
        ("unit-half-homology", Box::new(|| unit_half_homology(k))),
        ("monotone-thresholds", Box::new(|| monotone_thresholds(k))),
        ("pi-bands", Box::new(|| pi_bands(k))),
        ("stabilization", Box::new(|| stabilization(k))),
        ("tau-mirror", Box::new(|| tau_mirror(k))),
        ("tau-reverse", Box::new(|| tau_reverse(k))),
        ("nu-range", Box::new(|| nu_range(k))),
        ("window-stability", Box::new(|| window_stability(k))),
        ("scalar-invariance", Box::new(|| scalar_invariance(k, seed, 5))),
        ("affine-law", Box::new(|| affine_law(k))),
        ("closed-form", Box::new(|| closed_form(k))),
        ("mirror-duality", Box::new(|| mirror_duality(k))),
        ("zero-surgery-symmetry", Box::new(|| zero_symmetry(k))),
        ("zero-surgery-s0", Box::new(|| zero_s0(k))),
        ("dual-middle-band", Box::new(|| dual_middle_band(k))),
        ("subcomplex-convergence", Box::new(|| subcomplex_convergence(k))),
        ("large-surgery-constancy", Box::new(|| large_surgery_constancy(k))),
    ];
    for (check, f) in checks {
        out.push(CheckResult::new(check, name, seed, run(f.as_ref())));
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

fn integer_range(k: &KnotComplexData) -> impl Iterator<Item = i64> {
    -k.genus - 1..=k.genus + 1
}

/// dim H(cone f) = dim H(C) − rank H(f) + dim H(D) − rank H(f) for the
/// chain-level projections π±(s).
pub fn cone_les(k: &KnotComplexData) -> Result<Outcome, String> {
    for s in integer_range(k) {
        let a = build_a(k, 2 * s).map_err(err)?;
        for (sign, kind) in [(Sign::Plus, HalfKind::Bplus), (Sign::Minus, HalfKind::Bminus)] {
            let b = build_b(k, kind, 2 * s).map_err(err)?;
            let space = a.complex.space();
            let keep = |i: usize| match sign {
                Sign::Plus => space.grading(i).alex2 >= 2 * s,
                Sign::Minus => space.grading(i).alex2 <= 2 * s,
            };
            let f = GradedMap::from_indexed(
                space.clone(),
                b.complex.space().clone(),
                (0..space.dim()).filter(|&i| keep(i)).map(|i| (i, i, Rational::from_integer(1.into()))),
            )
            .map_err(err)?;
            let cone = mapping_cone(&a.complex, &b.complex, &f).map_err(err)?;
            let r = crate::linalg::induced_map(&f, &a.complex, &b.complex).map_err(err)?.rank();
            let lhs = homology_dims(&cone.complex).total;
            let rhs = a.complex.homology().dim() + b.complex.homology().dim() - 2 * r;
            if lhs != rhs {
                return Ok(Outcome::Fail(format!("π{sign:?}({s}): cone {lhs}, LES count {rhs}")));
            }
        }
    }
    Ok(Outcome::Pass)
}

pub fn unit_half_homology(k: &KnotComplexData) -> Result<Outcome, String> {
    for s in integer_range(k) {
        for kind in [HalfKind::Bplus, HalfKind::Bminus] {
            let d = build_b(k, kind, 2 * s).map_err(err)?.complex.homology().dim();
            if d != 1 {
                return Ok(Outcome::Fail(format!("dim H({kind:?}({s})) = {d}")));
            }
        }
    }
    Ok(Outcome::Pass)
}

pub fn monotone_thresholds(k: &KnotComplexData) -> Result<Outcome, String> {
    let range: Vec<i64> = integer_range(k).collect();
    let minus: Vec<usize> =
        range.iter().map(|&i| inclusion_map(k, Sign::Minus, 2 * i).map(|m| m.rank())).collect::<Result<_, _>>().map_err(err)?;
    let plus: Vec<usize> =
        range.iter().map(|&i| inclusion_map(k, Sign::Plus, 2 * i).map(|m| m.rank())).collect::<Result<_, _>>().map_err(err)?;
    let up = minus.windows(2).all(|w| w[0] <= w[1]) && minus.first() == Some(&0) && minus.last() == Some(&1);
    let down = plus.windows(2).all(|w| w[0] >= w[1]) && plus.first() == Some(&1) && plus.last() == Some(&0);
    Ok(ensure(up && down, || format!("B⁻(≤i) ranks {minus:?}, B⁺(≥i) ranks {plus:?} over i ∈ {range:?}")))
}

pub fn pi_bands(k: &KnotComplexData) -> Result<Outcome, String> {
    let t = tau(k).map_err(err)? / 2;
    let fam = BentFamily::new(k).map_err(err)?;
    for s in integer_range(k) {
        let l = fam.level(2 * s);
        let plus_ok = if s > t { l.pi_plus.is_zero() } else if s < t { !l.pi_plus.is_zero() } else { true };
        let minus_ok = if s < -t { l.pi_minus.is_zero() } else if s > -t { !l.pi_minus.is_zero() } else { true };
        if !plus_ok || !minus_ok {
            return Ok(Outcome::Fail(format!("τ = {t}, s = {s}: π⁺ zero {}, π⁻ zero {}", l.pi_plus.is_zero(), l.pi_minus.is_zero())));
        }
    }
    Ok(Outcome::Pass)
}

/// Far enough out, B⁺(≥s) is all of B⁺(s) and the inclusion is the identity.
pub fn stabilization(k: &KnotComplexData) -> Result<Outcome, String> {
    let (hi, lo) = grading_bounds_mu(k);
    for (sign, s2) in [(Sign::Plus, lo), (Sign::Plus, lo - 6), (Sign::Minus, hi), (Sign::Minus, hi + 6)] {
        let m = inclusion_map(k, sign, s2).map_err(err)?;
        let n = m.matrix.rows();
        if m.matrix != crate::linalg::Matrix::identity(n) || m.matrix.cols() != n {
            return Ok(Outcome::Fail(format!("{sign:?} inclusion at {s2}/2 is {:?}", m.matrix)));
        }
    }
    Ok(Outcome::Pass)
}

pub fn tau_mirror(k: &KnotComplexData) -> Result<Outcome, String> {
    let (a, b) = (tau(k).map_err(err)?, tau(&k.mirror()).map_err(err)?);
    Ok(ensure(a == -b, || format!("τ2 = {a}, τ2(mirror) = {b}")))
}

pub fn tau_reverse(k: &KnotComplexData) -> Result<Outcome, String> {
    let (a, b) = (tau(k).map_err(err)?, tau(&k.reverse()).map_err(err)?);
    Ok(ensure(a == b, || format!("τ2 = {a}, τ2(reverse) = {b}")))
}

pub fn nu_range(k: &KnotComplexData) -> Result<Outcome, String> {
    let (t, n) = (tau(k).map_err(err)?, nu(k).map_err(err)?);
    Ok(ensure(n == t || n == t + 2, || format!("τ2 = {t}, ν2 = {n}")))
}

pub fn window_stability(k: &KnotComplexData) -> Result<Outcome, String> {
    let fam = BentFamily::new(k).map_err(err)?;
    for n in SLOPES {
        let m = -n;
        let s = default_window(k, m);
        let dims: Vec<usize> = [0, 3, 5].iter().map(|e| ConeAssembly::new(&fam, m, s + e).dim()).collect();
        if dims.iter().any(|d| *d != dims[0]) {
            return Ok(Outcome::Fail(format!("slope {n}: dims {dims:?} at windows S, S+3, S+5")));
        }
    }
    Ok(Outcome::Pass)
}

/// Random nonzero scalars on every block leave integer-surgery dims and
/// determinate zero-surgery cells unchanged.
pub fn scalar_invariance(k: &KnotComplexData, seed: u64, trials: usize) -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fam = BentFamily::new(k).map_err(err)?;
    for n in SLOPES {
        let a = ConeAssembly::new(&fam, -n, default_window(k, -n));
        let base = a.dim();
        for _ in 0..trials {
            let d = a.dim_with(&mut |_| random_scalar(&mut rng));
            if d != base {
                return Ok(Outcome::Fail(format!("slope {n}: unit scalars give {base}, rescaled {d}")));
            }
        }
    }
    for s in -k.genus..=k.genus {
        let l = fam.level(2 * s);
        if !l.pi_minus.is_zero() && !l.pi_plus.is_zero() {
            continue;
        }
        let base = zero_cell_dim(&fam, s, &mut |_| Rational::from_integer(1.into()));
        for _ in 0..trials {
            let d = zero_cell_dim(&fam, s, &mut |_| random_scalar(&mut rng));
            if d != base {
                return Ok(Outcome::Fail(format!("zero surgery grading {s}: {base} vs {d}")));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn dims_by_slope(k: &KnotComplexData) -> Result<Vec<(i64, usize)>, String> {
    let fam = BentFamily::new(k).map_err(err)?;
    SLOPES.iter().map(|&n| integer_surgery_dim_in(k, &fam, n).map(|d| (n, d)).map_err(err)).collect()
}

pub fn affine_law(k: &KnotComplexData) -> Result<Outcome, String> {
    let t = tau(k).map_err(err)?;
    if t == 0 {
        return Ok(Outcome::Skip("τ = 0".into()));
    }
    let nu2 = nu(k).map_err(err)?;
    let ns = nu2 - 1;
    let fam = BentFamily::new(k).map_err(err)?;
    let r0 = integer_surgery_dim_in(k, &fam, ns).map_err(err)? as i64;
    for (n, d) in dims_by_slope(k)? {
        let expect = r0 + (n - ns).abs();
        if d as i64 != expect {
            return Ok(Outcome::Fail(format!("slope {n}: cone {d}, affine law {expect}")));
        }
    }
    Ok(Outcome::Pass)
}

pub fn closed_form(k: &KnotComplexData) -> Result<Outcome, String> {
    if tau(k).map_err(err)? == 0 {
        return Ok(Outcome::Skip("τ = 0".into()));
    }
    for (n, d) in dims_by_slope(k)? {
        let c = closed_form_case_dims(k, -n).map_err(err)?;
        if c != d as i64 {
            return Ok(Outcome::Fail(format!("m = {}: closed form {c}, cone {d}", -n)));
        }
    }
    Ok(Outcome::Pass)
}

pub fn mirror_duality(k: &KnotComplexData) -> Result<Outcome, String> {
    let mine = dims_by_slope(k)?;
    let mirror = dims_by_slope(&k.mirror())?;
    for (n, d) in &mine {
        let other = mirror.iter().find(|(x, _)| *x == -n).map(|x| x.1);
        if other != Some(*d) {
            return Ok(Outcome::Fail(format!("slope {n}: {d}, mirror at {}: {other:?}", -n)));
        }
    }
    Ok(Outcome::Pass)
}

pub fn zero_symmetry(k: &KnotComplexData) -> Result<Outcome, String> {
    let z = zero_surgery_dims(k).map_err(err)?;
    for (s, c) in &z {
        if let (ZeroCell::Dim(a), Some(ZeroCell::Dim(b))) = (c, z.get(&-s)) {
            if a != b {
                return Ok(Outcome::Fail(format!("grading {s}: {a}, grading {}: {b}", -s)));
            }
        }
    }
    Ok(Outcome::Pass)
}

pub fn zero_s0(k: &KnotComplexData) -> Result<Outcome, String> {
    let z = zero_surgery_dims(k).map_err(err)?;
    Ok(match z.get(&0) {
        Some(ZeroCell::Dim(_)) => Outcome::Pass,
        Some(ZeroCell::Indeterminate) => Outcome::Skip("indeterminate: τ = 0, ν = 1".into()),
        None => Outcome::Fail("grading 0 missing".into()),
    })
}

pub fn dual_middle_band(k: &KnotComplexData) -> Result<Outcome, String> {
    for m in 2 * k.genus + 1..=2 * k.genus + 3 {
        let reach = m - 1 - 2 * k.genus;
        for j2 in (-reach..=reach).step_by(2) {
            let d = dual_knot_dim(k, m, j2).map_err(err)?;
            if d != 1 {
                return Ok(Outcome::Fail(format!("m = {m}, j = {j2}/2: dim {d}")));
            }
        }
    }
    Ok(Outcome::Pass)
}

/// `dual_knot_dim(K, n, i + î^n_min − î^μ_min) = dim H(B⁻(≤i))` for `i < î^μ_min + nq`.
pub fn subcomplex_convergence(k: &KnotComplexData) -> Result<Outcome, String> {
    let (_, min_mu) = grading_bounds_mu(k);
    for n in [1, 2, 3, 2 * k.genus + 1] {
        let (_, min_n) = grading_bounds(k, n);
        let mut i2 = min_mu - 4;
        while i2 < min_mu + 2 * n * k.q {
            let dual = dual_knot_dim(k, n, i2 + min_n - min_mu).map_err(err)?;
            let sub = minus_sublevel_dim(k, i2).map_err(err)?;
            if dual != sub {
                return Ok(Outcome::Fail(format!("n = {n}, i = {i2}/2: dual {dual}, H(B⁻(≤i)) {sub}")));
            }
            i2 += 2;
        }
    }
    Ok(Outcome::Pass)
}

pub fn large_surgery_constancy(k: &KnotComplexData) -> Result<Outcome, String> {
    let fam = BentFamily::new(k).map_err(err)?;
    let start = 2 * k.genus + 1;
    let vals: Vec<i64> = (start..start + 5)
        .map(|n| integer_surgery_dim_in(k, &fam, -n).map(|d| d as i64 - n).map_err(err))
        .collect::<Result<_, _>>()?;
    Ok(ensure(vals.iter().all(|v| *v == vals[0]), || format!("dim(−n) − n over n ≥ {start}: {vals:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::{by_name, catalog};

    #[test]
    fn catalog_suites_pass() {
        for k in catalog() {
            let results = check_suite(&k, 7).unwrap();
            for r in &results {
                assert!(r.passed(), "{} on {}: {}", r.name, r.instance, r.detail);
            }
        }
    }

    #[test]
    fn suite_marks_indeterminate_as_skipped() {
        let r = check_suite(&by_name("unknot").unwrap(), 1).unwrap();
        let s0 = r.iter().find(|c| c.name == "zero-surgery-s0").unwrap();
        assert_eq!(s0.status, Status::Skipped);
        let names: Vec<&str> = r.iter().map(|c| c.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn invalid_knot_refused() {
        let mut k = by_name("trefoil-neg").unwrap();
        k.d_plus = GradedMap::zero(k.space.clone(), k.space.clone());
        assert!(matches!(check_suite(&k, 0), Err(KnotError::Validation(_))));
    }

    #[test]
    fn deterministic() {
        let k = by_name("box").unwrap();
        assert_eq!(check_suite(&k, 3).unwrap(), check_suite(&k, 3).unwrap());
    }
}
