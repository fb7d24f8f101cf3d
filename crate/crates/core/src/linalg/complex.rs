use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::graded::{Generator, GradedMap, GradedSpace, Grading, Z2};
use super::matrix::Matrix;
use super::rational::Rational;
use super::LinalgError;

/// ℤ₂-graded chain complex: a graded space with a square-zero
/// differential that flips the homological grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    space: GradedSpace,
    differential: GradedMap,
}

impl Complex {
    pub fn new(space: GradedSpace, differential: GradedMap) -> Result<Self, LinalgError> {
        if differential.source() != &space || differential.target() != &space {
            return Err(LinalgError::InvalidComplex("differential is not an endomorphism of the space".into()));
        }
        if let Some((f, t, _)) =
            differential.entries().iter().find(|(f, t, _)| differential.entry_shift(*f, *t).1 != Z2::ODD)
        {
            return Err(LinalgError::InvalidComplex(format!(
                "differential entry {} -> {} does not flip h",
                space.label(*f),
                space.label(*t)
            )));
        }
        let m = differential.to_matrix();
        if !m.mul(&m).is_zero() {
            return Err(LinalgError::InvalidComplex("d∘d ≠ 0".into()));
        }
        Ok(Self { space, differential })
    }

    /// Complex with zero differential.
    pub fn trivial(space: GradedSpace) -> Self {
        let differential = GradedMap::zero(space.clone(), space.clone());
        Self { space, differential }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Whether the span of `subset` is closed under the differential.
    pub fn is_subcomplex(&self, subset: &[usize]) -> bool {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        self.differential.entries().iter().all(|(f, t, _)| !set.contains(f) || set.contains(t))
    }

    /// The subcomplex spanned by `subset`. Fails if it is not closed under d.
    pub fn subcomplex(&self, subset: &[usize]) -> Result<Complex, LinalgError> {
        if !self.is_subcomplex(subset) {
            return Err(LinalgError::NotSubcomplex);
        }
        Ok(Complex {
            space: self.space.restrict(subset),
            differential: self.differential.restrict(subset, subset),
        })
    }

    pub fn homology(&self) -> Homology {
        Homology::compute(self)
    }

    /// Rank of the map `H(sub) -> H(self)` induced by including the
    /// subcomplex spanned by `subset`.
    pub fn inclusion_rank(&self, subset: &[usize]) -> Result<usize, LinalgError> {
        if !self.is_subcomplex(subset) {
            return Err(LinalgError::NotSubcomplex);
        }
        let total = [Z2::EVEN, Z2::ODD].into_iter().map(|h| inclusion_rank_h(self, subset, h)).sum();
        Ok(total)
    }
}

/// A chosen basis of homology, given by cycle representatives in ambient
/// coordinates, together with the data needed to express any cycle in it.
#[derive(Clone, Debug)]
pub struct Homology {
    ambient: usize,
    parts: Vec<HomologyPart>,
}

#[derive(Clone, Debug)]
struct HomologyPart {
    h: Z2,
    idx: Vec<usize>,
    reps: Vec<Vec<Rational>>,
    // Columns: representatives followed by a basis of boundaries, in `idx` coordinates.
    solver: Matrix,
}

/// A homology class representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRep {
    pub h: Z2,
    pub vector: Vec<Rational>,
}

impl Homology {
    fn compute(c: &Complex) -> Homology {
        let d = c.differential.to_matrix();
        let mut parts = Vec::new();
        for h in [Z2::EVEN, Z2::ODD] {
            let idx = c.space.select(|g| g.grading.h == h);
            let other = c.space.select(|g| g.grading.h != h);
            let boundaries = d.select_rows(&idx).select_cols(&other).column_basis();
            let cycles = d.select_cols(&idx).nullspace();
            let n = idx.len();
            let mut span = boundaries.clone();
            let mut rank = Matrix::from_columns(n, &span).rank();
            let mut reps = Vec::new();
            for z in cycles {
                span.push(z.clone());
                let r = Matrix::from_columns(n, &span).rank();
                if r > rank {
                    rank = r;
                    reps.push(z);
                } else {
                    span.pop();
                }
            }
            let solver = Matrix::from_columns(n, &[reps.clone(), boundaries].concat());
            parts.push(HomologyPart { h, idx, reps, solver });
        }
        Homology { ambient: c.dim(), parts }
    }

    pub fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.reps.len()).sum()
    }

    pub fn dim_h(&self, h: Z2) -> usize {
        self.parts.iter().filter(|p| p.h == h).map(|p| p.reps.len()).sum()
    }

    /// Representatives in basis order (even classes first).
    pub fn reps(&self) -> Vec<ClassRep> {
        self.parts
            .iter()
            .flat_map(|p| {
                p.reps.iter().map(move |z| {
                    let mut v = vec![Rational::zero(); self.ambient];
                    for (k, &i) in p.idx.iter().enumerate() {
                        v[i] = z[k].clone();
                    }
                    ClassRep { h: p.h, vector: v }
                })
            })
            .collect()
    }

    /// Coordinates of the class of `cycle` in this basis.
    pub fn coords(&self, cycle: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        assert_eq!(cycle.len(), self.ambient);
        let mut out = Vec::with_capacity(self.dim());
        for p in &self.parts {
            let local: Vec<Rational> = p.idx.iter().map(|&i| cycle[i].clone()).collect();
            let x = p.solver.solve(&local).ok_or(LinalgError::NotACycle)?;
            out.extend(x.into_iter().take(p.reps.len()));
        }
        Ok(out)
    }
}

/// Matrix of an induced map between chosen homology bases.
#[derive(Clone, Debug)]
pub struct HomologyMap {
    pub matrix: Matrix,
    pub source: Homology,
    pub target: Homology,
}

impl HomologyMap {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

fn check_chain_map(f: &GradedMap, source: &Complex, target: &Complex) -> Result<(), LinalgError> {
    if f.source() != source.space() || f.target() != target.space() {
        return Err(LinalgError::DimensionMismatch("chain map spaces"));
    }
    let fm = f.to_matrix();
    let lhs = fm.mul(&source.differential().to_matrix());
    let rhs = target.differential().to_matrix().mul(&fm);
    if lhs != rhs {
        return Err(LinalgError::NotChainMap);
    }
    Ok(())
}

/// Matrix of `H(f): H(source) -> H(target)` in the canonical bases.
pub fn induced_map(f: &GradedMap, source: &Complex, target: &Complex) -> Result<HomologyMap, LinalgError> {
    check_chain_map(f, source, target)?;
    let hs = source.homology();
    let ht = target.homology();
    let fm = f.to_matrix();
    let cols: Vec<Vec<Rational>> =
        hs.reps().iter().map(|z| ht.coords(&fm.apply(&z.vector))).collect::<Result<_, _>>()?;
    let matrix = Matrix::from_columns(ht.dim(), &cols);
    Ok(HomologyMap { matrix, source: hs, target: ht })
}

/// Exact rank of a graded map over ℚ.
pub fn rank(f: &GradedMap) -> usize {
    f.rank()
}

/// Homology dimensions of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyDims {
    pub total: usize,
    pub even: usize,
    pub odd: usize,
    /// Per-bigrading dimensions. The Alexander part is the associated
    /// graded of the Alexander filtration, so it is only available when
    /// every differential entry moves the grading in the same direction.
    pub by_grading: Option<BTreeMap<Grading, usize>>,
}

pub fn homology_dims(c: &Complex) -> HomologyDims {
    let hom = c.homology();
    let shifts: BTreeSet<i64> = c.differential().shifts().iter().map(|s| s.0).collect();
    let ascending = shifts.iter().all(|&s| s >= 0);
    let descending = shifts.iter().all(|&s| s <= 0);
    let by_grading = (ascending || descending).then(|| filtration_dims(c, ascending));
    HomologyDims { total: hom.dim(), even: hom.dim_h(Z2::EVEN), odd: hom.dim_h(Z2::ODD), by_grading }
}

fn filtration_dims(c: &Complex, ascending: bool) -> BTreeMap<Grading, usize> {
    let levels: BTreeSet<i64> = c.space().generators().iter().map(|g| g.grading.alex2).collect();
    let levels: Vec<i64> = levels.into_iter().collect();
    // For each level, rank of H(F_level) -> H(C) split by h.
    let image_rank = |level: i64, h: Z2| -> usize {
        let sub = c.space().select(|g| if ascending { g.grading.alex2 >= level } else { g.grading.alex2 <= level });
        inclusion_rank_h(c, &sub, h)
    };
    let mut out = BTreeMap::new();
    for (k, &a) in levels.iter().enumerate() {
        let next = if ascending { levels.get(k + 1) } else { k.checked_sub(1).map(|j| &levels[j]) };
        for h in [Z2::EVEN, Z2::ODD] {
            let here = image_rank(a, h);
            let beyond = next.map_or(0, |&b| image_rank(b, h));
            if here > beyond {
                out.insert(Grading::new(a, h), here - beyond);
            }
        }
    }
    out
}

// Rank in ℤ₂-degree `h` of H(span(sub)) -> H(C).
fn inclusion_rank_h(c: &Complex, sub: &[usize], h: Z2) -> usize {
    let d = c.differential().to_matrix();
    let idx = c.space().select(|g| g.grading.h == h);
    let other = c.space().select(|g| g.grading.h != h);
    let boundaries = d.select_rows(&idx).select_cols(&other).column_basis();
    let sub_pos: Vec<usize> = idx.iter().enumerate().filter(|(_, i)| sub.contains(i)).map(|(k, _)| k).collect();
    let sub_global: Vec<usize> = sub_pos.iter().map(|&k| idx[k]).collect();
    let cycles: Vec<Vec<Rational>> = d
        .select_cols(&sub_global)
        .nullspace()
        .into_iter()
        .map(|z| {
            let mut v = vec![Rational::zero(); idx.len()];
            for (pos, &k) in sub_pos.iter().enumerate() {
                v[k] = z[pos].clone();
            }
            v
        })
        .collect();
    let n = idx.len();
    Matrix::from_columns(n, &[boundaries.clone(), cycles].concat()).rank() - Matrix::from_columns(n, &boundaries).rank()
}

/// Mapping cone of a chain map `f: C -> D`: the space `D ⊕ C{1}` with
/// differential `[[d_D, -f], [0, -d_C]]`.
#[derive(Clone, Debug)]
pub struct ConeComplex {
    pub complex: Complex,
    pub target_dim: usize,
    pub source_dim: usize,
}

pub fn mapping_cone(source: &Complex, target: &Complex, f: &GradedMap) -> Result<ConeComplex, LinalgError> {
    if !f.is_h_homogeneous(Z2::EVEN) {
        return Err(LinalgError::NotChainMap);
    }
    check_chain_map(f, source, target)?;
    let nd = target.dim();
    let nc = source.dim();
    let gens: Vec<Generator> = target
        .space()
        .generators()
        .iter()
        .map(|g| Generator { label: format!("d:{}", g.label), grading: g.grading })
        .chain(
            source
                .space()
                .generators()
                .iter()
                .map(|g| Generator { label: format!("c:{}", g.label), grading: g.grading.shift_h(Z2::ODD) }),
        )
        .collect();
    let space = GradedSpace::new(gens)?;
    let entries = target
        .differential()
        .entries()
        .iter()
        .cloned()
        .chain(f.entries().iter().map(|(a, b, c)| (nd + a, *b, -c.clone())))
        .chain(source.differential().entries().iter().map(|(a, b, c)| (nd + a, nd + b, -c.clone())))
        .collect::<Vec<_>>();
    let differential = GradedMap::from_indexed(space.clone(), space.clone(), entries)?;
    let complex = Complex::new(space, differential)?;
    Ok(ConeComplex { complex, target_dim: nd, source_dim: nc })
}

/// Scales every entry `x -> y` by the scalar attached to the grading of `x`.
pub fn rescale_by_grading(f: &GradedMap, scalars: &BTreeMap<Grading, Rational>) -> Result<GradedMap, LinalgError> {
    let mut entries = Vec::with_capacity(f.entries().len());
    for (from, to, c) in f.entries() {
        let g = f.source().grading(*from);
        let s = scalars.get(&g).ok_or(LinalgError::MissingScalar(g))?;
        if s.is_zero() {
            return Err(LinalgError::ZeroScalar(g));
        }
        entries.push((*from, *to, c * s));
    }
    GradedMap::from_indexed(f.source().clone(), f.target().clone(), entries)
}
