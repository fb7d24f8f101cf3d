use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::KnotComplexData;
use crate::linalg::{int, ratio, GradedMap, GradedSpace, Grading, Matrix, Rational, Z2};

/// Names accepted by [`by_name`], in catalog order.
pub const CATALOG_NAMES: &[&str] =
    &["unknot", "trefoil-neg", "trefoil-pos", "box", "staircase-neg", "staircase-pos", "trefoil-box"];

/// Small synthetic fixtures. They are shaped after familiar knot complexes
/// but are not claimed to be the instanton homology of any particular knot.
pub fn catalog() -> Vec<KnotComplexData> {
    CATALOG_NAMES.iter().map(|n| by_name(n).expect("catalog name")).collect()
}

pub fn by_name(name: &str) -> Option<KnotComplexData> {
    let k = match name {
        "unknot" => Builder::new(0).gen("u", 0, 0).build(name),
        "trefoil-neg" => Builder::new(1).staircase(&[2, 2]).build(name),
        "trefoil-pos" => renamed(by_name("trefoil-neg")?.mirror(), name),
        "box" => Builder::new(1).gen("u", 0, 0).square("", 0, 2, 1, 1, false).build(name),
        "staircase-neg" => Builder::new(2).staircase(&[2, 2, 2, 2]).build(name),
        "staircase-pos" => renamed(by_name("staircase-neg")?.mirror(), name),
        "trefoil-box" => Builder::new(1).staircase(&[2, 2]).square("b", 0, 2, 1, 1, true).build(name),
        _ => return None,
    };
    Some(k)
}

fn renamed(mut k: KnotComplexData, name: &str) -> KnotComplexData {
    k.name = name.to_string();
    k
}

struct Builder {
    genus: i64,
    gens: Vec<(String, Grading)>,
    plus: Vec<(String, String, Rational)>,
    minus: Vec<(String, String, Rational)>,
}

impl Builder {
    fn new(genus: i64) -> Self {
        Self { genus, gens: vec![], plus: vec![], minus: vec![] }
    }

    fn gen(mut self, label: &str, alex2: i64, h: i64) -> Self {
        self.gens.push((label.to_string(), Grading::new(alex2, Z2::new(h))));
        self
    }

    fn plus(mut self, from: &str, to: &str, c: Rational) -> Self {
        self.plus.push((from.into(), to.into(), c));
        self
    }

    fn minus(mut self, from: &str, to: &str, c: Rational) -> Self {
        self.minus.push((from.into(), to.into(), c));
        self
    }

    /// Staircase `x1, ..., x(2k+1)` descending by `steps`; odd-position
    /// generators map up by d₊ and down by d₋. Steps should be a palindrome.
    fn staircase(mut self, steps: &[i64]) -> Self {
        let mut a = steps.iter().sum::<i64>() / 2;
        for i in 0..=steps.len() {
            self = self.gen(&format!("x{}", i + 1), a, (i % 2) as i64);
            if i < steps.len() {
                a -= steps[i];
            }
        }
        for i in (1..steps.len()).step_by(2) {
            let (up, mid, down) = (format!("x{i}"), format!("x{}", i + 1), format!("x{}", i + 2));
            self = self.plus(&mid, &up, int(1)).minus(&mid, &down, int(1));
        }
        self
    }

    /// Acyclic square `p:c+w, q:c, t:c, s:c−w` with d₊q = αp, d₊s = βt,
    /// d₋t = αs, d₋p = βq. `q` and `t` are odd unless `flip`.
    fn square(self, tag: &str, c: i64, w: i64, alpha: i64, beta: i64, flip: bool) -> Self {
        let (even, odd) = if flip { (1, 0) } else { (0, 1) };
        let l = |s: &str| format!("{tag}{s}");
        self.gen(&l("p"), c + w, even)
            .gen(&l("q"), c, odd)
            .gen(&l("t"), c, odd)
            .gen(&l("s"), c - w, even)
            .plus(&l("q"), &l("p"), int(alpha))
            .plus(&l("s"), &l("t"), int(beta))
            .minus(&l("t"), &l("s"), int(alpha))
            .minus(&l("p"), &l("q"), int(beta))
    }

    fn build(self, name: &str) -> KnotComplexData {
        let space = GradedSpace::from_pairs(self.gens).expect("fixture labels are unique");
        let map = |es: Vec<(String, String, Rational)>| {
            GradedMap::from_labels(space.clone(), space.clone(), es.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.clone())))
                .expect("fixture labels exist")
        };
        KnotComplexData {
            name: name.to_string(),
            genus: self.genus,
            q: 1,
            q0: 0,
            d_plus: map(self.plus),
            d_minus: map(self.minus),
            space,
        }
    }
}

fn nonzero_coeff(rng: &mut ChaCha8Rng) -> Rational {
    let choices = [int(1), int(-1), int(2), int(-3), ratio(1, 2), ratio(-2, 3)];
    choices.choose(rng).expect("nonempty").clone()
}

/// A random valid complex with at most 12 generators, reproducible from
/// `seed`. It is a staircase or a single generator, plus acyclic squares
/// placed symmetrically, optionally mirrored, then hidden behind a random
/// grading-preserving change of basis.
pub fn random_knot(seed: u64) -> KnotComplexData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::new(0);
    if rng.gen_bool(0.3) {
        b = b.gen("u", 0, 0);
    } else {
        let half: Vec<i64> = (0..rng.gen_range(1..=2)).map(|_| *[2, 4].choose(&mut rng).unwrap()).collect();
        let steps: Vec<i64> = half.iter().chain(half.iter().rev()).copied().collect();
        b = b.staircase(&steps);
    }
    // Coefficients on the staircase are rescaled to random nonzero values;
    // this is an isomorphism since the staircase is a tree.
    for e in b.plus.iter_mut().chain(b.minus.iter_mut()) {
        e.2 = nonzero_coeff(&mut rng);
    }
    if rng.gen_bool(0.5) {
        let (w, a, be, flip) = (2 * rng.gen_range(1..=2), rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_bool(0.5));
        b = b.square("b", 0, w, a, be, flip);
    }
    if b.gens.len() + 8 <= 12 && rng.gen_bool(0.5) {
        let c = 2 * rng.gen_range(1..=2);
        let (w, a, be, flip) = (2 * rng.gen_range(1..=2), rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_bool(0.5));
        b = b.square("c", c, w, a, be, flip).square("d", -c, w, a, be, flip);
    }
    let top = b.gens.iter().map(|(_, g)| g.alex2.abs()).max().unwrap_or(0);
    b.genus = top / 2;
    let mut k = b.build(&format!("random-{seed}"));
    if rng.gen_bool(0.5) {
        k = renamed(k.mirror(), &format!("random-{seed}"));
    }
    change_basis(k, &mut rng)
}

// Conjugates both differentials by a random invertible map preserving
// every bigrading.
fn change_basis(mut k: KnotComplexData, rng: &mut ChaCha8Rng) -> KnotComplexData {
    let n = k.dim();
    let mut p = Matrix::identity(n);
    for g in k.space.gradings() {
        let idx = k.space.select(|x| x.grading == g);
        let m = idx.len();
        if m < 2 {
            continue;
        }
        let mut lower = Matrix::identity(m);
        let mut upper = Matrix::identity(m);
        for i in 0..m {
            for j in 0..i {
                lower.set(i, j, int(rng.gen_range(-2..=2)));
                upper.set(j, i, int(rng.gen_range(-2..=2)));
            }
        }
        let block = lower.mul(&upper);
        for (a, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                p.set(i, j, block.get(a, c).clone());
            }
        }
    }
    let inv = p.inverse().expect("unit triangular factors are invertible");
    let conj = |d: &GradedMap| {
        GradedMap::from_matrix(k.space.clone(), k.space.clone(), &p.mul(&d.to_matrix()).mul(&inv))
    };
    k.d_plus = conj(&k.d_plus);
    k.d_minus = conj(&k.d_minus);
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert!(by_name("nope").is_none());
        for n in CATALOG_NAMES {
            assert_eq!(by_name(n).unwrap().name, *n);
        }
    }

    #[test]
    fn fixture_shapes() {
        let t = by_name("trefoil-neg").unwrap();
        let labels: Vec<(&str, i64)> =
            t.space.generators().iter().map(|g| (g.label.as_str(), g.grading.alex2)).collect();
        assert_eq!(labels, vec![("x1", 2), ("x2", 0), ("x3", -2)]);
        assert_eq!(t.d_plus.labelled_entries().map(|(a, b, _)| (a, b)).collect::<Vec<_>>(), vec![("x2", "x1")]);
        assert_eq!(t.d_minus.labelled_entries().map(|(a, b, _)| (a, b)).collect::<Vec<_>>(), vec![("x2", "x3")]);
        assert_eq!(by_name("box").unwrap().dim(), 5);
    }

    #[test]
    fn random_knots_are_valid_and_reproducible() {
        for seed in 0..60 {
            let k = random_knot(seed);
            assert!(k.dim() <= 12);
            let r = k.validate();
            assert!(r.is_valid(), "seed {seed}: {r}");
            assert_eq!(random_knot(seed), k);
        }
    }
}
