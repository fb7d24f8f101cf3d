//! Random instances for the two homological-algebra lemmas: scalar
//! invariance of cones of sums of homogeneous maps with distinct shifts,
//! and replacing a cone map by one built from homogeneous pieces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{random_scalar, Outcome};
use crate::linalg::{homology_dims, int, mapping_cone, Complex, GradedMap, GradedSpace, Grading, Matrix, Rational, Z2};

fn random_space(rng: &mut ChaCha8Rng, prefix: &str, dim: usize, spread: i64) -> GradedSpace {
    GradedSpace::from_pairs(
        (0..dim).map(|i| (format!("{prefix}{i}"), Grading::new(rng.gen_range(-spread..=spread), Z2::EVEN))),
    )
    .expect("labels are unique")
}

/// Random homogeneous map of alex2 shift `shift` (h preserved).
fn random_homogeneous(rng: &mut ChaCha8Rng, x: &GradedSpace, y: &GradedSpace, shift: i64, density: f64) -> GradedMap {
    let mut entries = Vec::new();
    for i in 0..x.dim() {
        for j in 0..y.dim() {
            let (gx, gy) = (x.grading(i), y.grading(j));
            if gy.alex2 - gx.alex2 == shift && gy.h == gx.h && rng.gen_bool(density) {
                entries.push((i, j, int(rng.gen_range(-3..=3))));
            }
        }
    }
    GradedMap::from_indexed(x.clone(), y.clone(), entries).expect("indices in range")
}

/// `dim H(cone(f))` for a map between spaces with zero differential.
fn cone_dim(f: &GradedMap) -> usize {
    let c = Complex::trivial(f.source().clone());
    let d = Complex::trivial(f.target().clone());
    homology_dims(&mapping_cone(&c, &d, f).expect("maps between trivial complexes are chain maps").complex).total
}

#[derive(Clone, Debug)]
pub struct ProjectivityInstance {
    pub f: GradedMap,
    pub g: GradedMap,
    pub shifts: (i64, i64),
}

impl ProjectivityInstance {
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (nx, ny) = (rng.gen_range(2..=6), rng.gen_range(2..=6));
        let x = random_space(&mut rng, "x", nx, 3);
        let y = random_space(&mut rng, "y", ny, 3);
        let k1 = rng.gen_range(-2..=2);
        let mut k2 = rng.gen_range(-2..=2);
        while k2 == k1 {
            k2 = rng.gen_range(-2..=2);
        }
        let f = if rng.gen_bool(0.1) {
            GradedMap::zero(x.clone(), y.clone())
        } else {
            random_homogeneous(&mut rng, &x, &y, k1, 0.7)
        };
        let g = random_homogeneous(&mut rng, &x, &y, k2, 0.7);
        Self { f, g, shifts: (k1, k2) }
    }

    pub fn cone_dim(&self, c1: &Rational, c2: &Rational) -> usize {
        cone_dim(&self.f.scale(c1).add(&self.g.scale(c2)).expect("same spaces"))
    }

    /// Cone dimensions for `trials` random scalar pairs, after `(1, 1)`.
    pub fn dims(&self, seed: u64, trials: usize) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut out = vec![self.cone_dim(&int(1), &int(1))];
        for _ in 0..trials {
            let (a, b) = (random_scalar(&mut rng), random_scalar(&mut rng));
            out.push(self.cone_dim(&a, &b));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct LemmaCheck {
    pub dims: Vec<usize>,
    pub failure: Option<String>,
    pub skipped: Option<String>,
}

impl LemmaCheck {
    pub(crate) fn outcome(&self) -> Outcome {
        match (&self.failure, &self.skipped) {
            (Some(f), _) => Outcome::Fail(f.clone()),
            (None, Some(s)) => Outcome::Skip(s.clone()),
            _ => Outcome::Pass,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Cone homology of `c₁f + c₂g` is constant over 20 random scalar pairs.
pub fn check_projectivity(seed: u64) -> LemmaCheck {
    let inst = ProjectivityInstance::random(seed);
    let dims = inst.dims(seed, 20);
    let failure = dims
        .iter()
        .any(|d| *d != dims[0])
        .then(|| format!("shifts {:?}: cone dims {dims:?}", inst.shifts));
    LemmaCheck { dims, failure, skipped: None }
}

/// A diagram
///
/// ```text
/// Z --j--> Y' --l'--> X{1}
/// |        |φ, φ'     | f = a + b
/// Z ------> X' --l--> Y{1}
/// ```
///
/// with exact rows, `φ∘j = φ'∘j`, `l∘φ = f∘l'`, `φ' = a' + b'` where
/// `l∘a' ∝ a∘l'` and `l∘b' ∝ b∘l'`, every named piece homogeneous and
/// the shifts of `a, b` (hence of `a', b'`) distinct.
#[derive(Clone, Debug)]
pub struct ReplacingInstance {
    pub j: GradedMap,
    pub l_prime: GradedMap,
    pub l: GradedMap,
    pub a: GradedMap,
    pub b: GradedMap,
    pub phi: GradedMap,
    pub a_prime: GradedMap,
    pub b_prime: GradedMap,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReplacingOptions {
    /// Take `b = 0` (and so `b'` supported on the kernel part only).
    pub zero_b: bool,
    /// Take unit scalars and `φ = φ'`.
    pub phi_is_phi_prime: bool,
}

fn block_matrix(rows: usize, cols: usize, place: &[(usize, usize, &Matrix)]) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for (r0, c0, blk) in place {
        for i in 0..blk.rows() {
            for j in 0..blk.cols() {
                m.set(r0 + i, c0 + j, blk.get(i, j).clone());
            }
        }
    }
    m
}

impl ReplacingInstance {
    /// Builds an instance backwards from chosen images and kernels.
    pub fn random(seed: u64, opts: ReplacingOptions) -> Result<Self, String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (nu, nv) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let u = random_space(&mut rng, "u", nu, 2);
        let v = random_space(&mut rng, "v", nv, 2);
        let ka = rng.gen_range(-1..=1);
        let mut kb = rng.gen_range(-1..=1);
        while kb == ka {
            kb = rng.gen_range(-1..=1);
        }
        let (kl, klp) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        let a = random_homogeneous(&mut rng, &u, &v, ka, 0.8);
        let b = if opts.zero_b { GradedMap::zero(u.clone(), v.clone()) } else { random_homogeneous(&mut rng, &u, &v, kb, 0.8) };

        // W = im l', spanned by a random nonempty set of basis vectors of U.
        let mut w_idx: Vec<usize> = (0..u.dim()).filter(|_| rng.gen_bool(0.6)).collect();
        if w_idx.is_empty() {
            w_idx.push(0);
        }
        // I = im l ⊇ a(W) + b(W), with a homogeneous basis.
        let (am, bm) = (a.to_matrix(), b.to_matrix());
        let mut image_vectors: Vec<(i64, Vec<Rational>)> = Vec::new();
        for &w in &w_idx {
            let g = u.grading(w).alex2;
            image_vectors.push((g + ka, am.column(w)));
            image_vectors.push((g + kb, bm.column(w)));
        }
        if rng.gen_bool(0.5) {
            let e = rng.gen_range(0..v.dim());
            let mut col = vec![int(0); v.dim()];
            col[e] = int(1);
            image_vectors.push((v.grading(e).alex2, col));
        }
        let mut i_basis: Vec<(i64, Vec<Rational>)> = Vec::new();
        let mut grades: Vec<i64> = image_vectors.iter().map(|x| x.0).collect();
        grades.sort_unstable();
        grades.dedup();
        for g in grades {
            let cols: Vec<Vec<Rational>> = image_vectors.iter().filter(|x| x.0 == g).map(|x| x.1.clone()).collect();
            for c in Matrix::from_columns(v.dim(), &cols).column_basis() {
                i_basis.push((g, c));
            }
        }
        if i_basis.is_empty() {
            return Err("a(W) + b(W) is zero".into());
        }

        // Y' = K' ⊕ Y'', X' = K ⊕ X''.
        let kp_dim: usize = rng.gen_range(0..=2);
        let k_dim = if kp_dim == 0 { 0 } else { rng.gen_range(1..=kp_dim) };
        let sa = ka - kl + klp;
        let sb = kb - kl + klp;
        let mut yp = Vec::new();
        for i in 0..kp_dim {
            yp.push((format!("k'{i}"), Grading::new(rng.gen_range(-2..=2), Z2::EVEN)));
        }
        for (n, &w) in w_idx.iter().enumerate() {
            yp.push((format!("y{n}"), Grading::new(u.grading(w).alex2 - klp, Z2::EVEN)));
        }
        let mut xp = Vec::new();
        // K gradings are reachable from K' by both shifts so A_K + B_K can be onto.
        for i in 0..k_dim {
            let base = yp[i.min(kp_dim.saturating_sub(1))].1.alex2;
            let shift = if rng.gen_bool(0.5) { sa } else { sb };
            xp.push((format!("k{i}"), Grading::new(base + shift, Z2::EVEN)));
        }
        for (n, (g, _)) in i_basis.iter().enumerate() {
            xp.push((format!("x{n}"), Grading::new(g - kl, Z2::EVEN)));
        }
        let y_prime = GradedSpace::from_pairs(yp).map_err(|e| e.to_string())?;
        let x_prime = GradedSpace::from_pairs(xp).map_err(|e| e.to_string())?;
        let z = y_prime.restrict(&(0..kp_dim).collect::<Vec<_>>());
        let ny = w_idx.len();
        let nx = i_basis.len();

        // j: Z → Y' inclusion; l': K' ↦ 0, y_n ↦ w_n; l: K ↦ 0, x_n ↦ v_n.
        let j = GradedMap::from_indexed(z.clone(), y_prime.clone(), (0..kp_dim).map(|i| (i, i, int(1)))).unwrap();
        let l_prime = GradedMap::from_indexed(
            y_prime.clone(),
            u.clone(),
            w_idx.iter().enumerate().map(|(n, &w)| (kp_dim + n, w, int(1))),
        )
        .unwrap();
        let i_cols: Vec<Vec<Rational>> = i_basis.iter().map(|x| x.1.clone()).collect();
        let i_mat = Matrix::from_columns(v.dim(), &i_cols);
        let l_mat = block_matrix(v.dim(), k_dim + nx, &[(0, k_dim, &i_mat)]);
        let l = GradedMap::from_matrix(x_prime.clone(), v.clone(), &l_mat);
        let lift = |target: &[Rational]| -> Result<Vec<Rational>, String> {
            i_mat.solve(target).ok_or_else(|| "image vector outside I".to_string())
        };

        // Homogeneous kernel parts A_K, B_K : K' → K with shifts sa, sb.
        let kernel_part = |rng: &mut ChaCha8Rng, shift: i64| -> Matrix {
            let mut m = Matrix::zeros(k_dim, kp_dim);
            for r in 0..k_dim {
                for c in 0..kp_dim {
                    if x_prime.grading(r).alex2 - y_prime.grading(c).alex2 == shift {
                        m.set(r, c, int(rng.gen_range(-3..=3)));
                    }
                }
            }
            m
        };
        let ak = kernel_part(&mut rng, sa);
        let bk = kernel_part(&mut rng, sb);
        if ak.add(&bk).rank() != k_dim {
            return Err("φ∘j does not cover ker l".into());
        }
        // Terms of a', b' from Y'' into K, homogeneous.
        let tail = |rng: &mut ChaCha8Rng, shift: i64| -> Matrix {
            let mut m = Matrix::zeros(k_dim, ny);
            for r in 0..k_dim {
                for c in 0..ny {
                    if x_prime.grading(r).alex2 - y_prime.grading(kp_dim + c).alex2 == shift && rng.gen_bool(0.5) {
                        m.set(r, c, int(rng.gen_range(-2..=2)));
                    }
                }
            }
            m
        };
        let (c1, c2) = if opts.phi_is_phi_prime { (int(1), int(1)) } else { (random_scalar(&mut rng), random_scalar(&mut rng)) };
        let a_tail = tail(&mut rng, sa);
        let b_tail = tail(&mut rng, sb);
        let mut a_lift = Vec::new();
        let mut b_lift = Vec::new();
        let mut f_lift = Vec::new();
        for &w in &w_idx {
            let (ac, bc) = (am.column(w), bm.column(w));
            let fc: Vec<Rational> = ac.iter().zip(&bc).map(|(x, y)| x + y).collect();
            a_lift.push(lift(&ac)?.into_iter().map(|x| x * &c1).collect::<Vec<_>>());
            b_lift.push(lift(&bc)?.into_iter().map(|x| x * &c2).collect::<Vec<_>>());
            f_lift.push(lift(&fc)?);
        }
        let a_low = Matrix::from_columns(nx, &a_lift);
        let b_low = Matrix::from_columns(nx, &b_lift);
        let (ry, rx) = (kp_dim + ny, k_dim + nx);
        let a_prime_m = block_matrix(rx, ry, &[(0, 0, &ak), (0, kp_dim, &a_tail), (k_dim, kp_dim, &a_low)]);
        let b_prime_m = block_matrix(rx, ry, &[(0, 0, &bk), (0, kp_dim, &b_tail), (k_dim, kp_dim, &b_low)]);
        let phi_m = if opts.phi_is_phi_prime {
            a_prime_m.add(&b_prime_m)
        } else {
            let f_low = Matrix::from_columns(nx, &f_lift);
            let mut extra = Matrix::zeros(k_dim, ny);
            for r in 0..k_dim {
                for c in 0..ny {
                    extra.set(r, c, int(rng.gen_range(-2..=2)));
                }
            }
            let akbk = ak.add(&bk);
            block_matrix(rx, ry, &[(0, 0, &akbk), (0, kp_dim, &extra), (k_dim, kp_dim, &f_low)])
        };
        Ok(Self {
            j,
            l_prime,
            l,
            a,
            b,
            phi: GradedMap::from_matrix(y_prime.clone(), x_prime.clone(), &phi_m),
            a_prime: GradedMap::from_matrix(y_prime.clone(), x_prime.clone(), &a_prime_m),
            b_prime: GradedMap::from_matrix(y_prime, x_prime, &b_prime_m),
        })
    }

    pub fn phi_prime(&self) -> GradedMap {
        self.a_prime.add(&self.b_prime).expect("same spaces")
    }

    /// Re-checks every hypothesis numerically; returns the first violation.
    pub fn verify_hypotheses(&self) -> Result<(), String> {
        let (j, lp, l) = (self.j.to_matrix(), self.l_prime.to_matrix(), self.l.to_matrix());
        let (phi, phip) = (self.phi.to_matrix(), self.phi_prime().to_matrix());
        let f = self.a.add(&self.b).map_err(|e| e.to_string())?.to_matrix();
        // Exact at Y': im j = ker l'.
        if !lp.mul(&j).is_zero() || j.rank() != lp.cols() - lp.rank() {
            return Err("row Z → Y' → X{1} not exact".into());
        }
        // Exact at X': im(φ∘j) = ker l.
        let pj = phi.mul(&j);
        if !l.mul(&pj).is_zero() || pj.rank() != l.cols() - l.rank() {
            return Err("row Z → X' → Y{1} not exact".into());
        }
        if pj != phip.mul(&j) {
            return Err("φ∘j ≠ φ'∘j".into());
        }
        if l.mul(&phi) != f.mul(&lp) {
            return Err("l∘φ ≠ f∘l'".into());
        }
        for (name, top, bottom) in [("a", &self.a, &self.a_prime), ("b", &self.b, &self.b_prime)] {
            let lhs = l.mul(&bottom.to_matrix());
            let rhs = top.to_matrix().mul(&lp);
            if !proportional(&lhs, &rhs) {
                return Err(format!("square for {name} does not commute up to scalar"));
            }
        }
        for (name, m) in [("l", &self.l), ("l'", &self.l_prime)] {
            if m.shifts().len() > 1 {
                return Err(format!("{name} is not homogeneous"));
            }
        }
        for (x, y, tag) in [(&self.a, &self.b, "a, b"), (&self.a_prime, &self.b_prime, "a', b'")] {
            let (sx, sy) = (x.shifts(), y.shifts());
            if sx.len() > 1 || sy.len() > 1 || (!sx.is_empty() && sx == sy) {
                return Err(format!("{tag} are not homogeneous with distinct shifts"));
            }
        }
        Ok(())
    }

    /// `(dim H(cone φ), dim H(cone φ'))`.
    pub fn cone_dims(&self) -> (usize, usize) {
        (cone_dim(&self.phi), cone_dim(&self.phi_prime()))
    }
}

// Whether `x = c·y` for a nonzero scalar `c` (both zero counts).
fn proportional(x: &Matrix, y: &Matrix) -> bool {
    if x.is_zero() || y.is_zero() {
        return x.is_zero() && y.is_zero();
    }
    for i in 0..y.rows() {
        for j in 0..y.cols() {
            let yv = y.get(i, j);
            if *yv != int(0) {
                let c = x.get(i, j) / yv;
                return *x == y.scale(&c);
            }
        }
    }
    false
}

/// Builds an instance, verifies its hypotheses, and compares cone dimensions.
/// Instances that cannot be completed are reported as skipped.
pub fn check_replacing_maps(seed: u64) -> LemmaCheck {
    let inst = match ReplacingInstance::random(seed, ReplacingOptions::default()) {
        Ok(i) => i,
        Err(e) => return LemmaCheck { dims: vec![], failure: None, skipped: Some(format!("generator failure: {e}")) },
    };
    if let Err(e) = inst.verify_hypotheses() {
        return LemmaCheck { dims: vec![], failure: Some(format!("hypotheses violated: {e}")), skipped: None };
    }
    let (x, y) = inst.cone_dims();
    let failure = (x != y).then(|| format!("dim H(cone φ) = {x}, dim H(cone φ') = {y}"));
    LemmaCheck { dims: vec![x, y], failure, skipped: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projectivity_seeds() {
        for seed in 0..50 {
            let c = check_projectivity(seed);
            assert!(c.passed(), "seed {seed}: {:?}", c.failure);
        }
    }

    #[test]
    fn projectivity_shifts_distinct() {
        for seed in 0..50 {
            let i = ProjectivityInstance::random(seed);
            assert_ne!(i.shifts.0, i.shifts.1);
            assert!(i.f.is_zero() || i.f.shifts().iter().all(|s| s.0 == i.shifts.0));
        }
    }

    #[test]
    fn replacing_seeds() {
        let mut built = 0;
        for seed in 0..50 {
            let c = check_replacing_maps(seed);
            assert!(c.passed(), "seed {seed}: {:?}", c.failure);
            if c.skipped.is_none() {
                built += 1;
            }
        }
        assert!(built >= 25, "only {built} instances built");
    }

    #[test]
    fn phi_equal_to_phi_prime() {
        let opts = ReplacingOptions { phi_is_phi_prime: true, ..Default::default() };
        let inst = (0..20).find_map(|s| ReplacingInstance::random(s, opts).ok()).unwrap();
        inst.verify_hypotheses().unwrap();
        assert_eq!(inst.phi, inst.phi_prime());
        let (x, y) = inst.cone_dims();
        assert_eq!(x, y);
    }

    #[test]
    fn zero_b_instance() {
        let opts = ReplacingOptions { zero_b: true, ..Default::default() };
        let inst = (0..20).find_map(|s| ReplacingInstance::random(s, opts).ok()).unwrap();
        inst.verify_hypotheses().unwrap();
        assert!(inst.b.is_zero());
        let (x, y) = inst.cone_dims();
        assert_eq!(x, y);
    }

    #[test]
    fn seed_42_instance() {
        let c = check_replacing_maps(42);
        assert!(c.passed(), "{:?}", c.failure);
    }
}
