//! Bounded cochain complexes of representations, cohomology, derived
//! barcodes and the derived interleaving and bottleneck distances.
//!
//! The path algebra of A_n(a) is hereditary, so a complex is determined up to
//! quasi-isomorphism by its cohomology: `X ≅ ⊕ H^i(X)[−i]`. All distance work
//! goes through the graded barcode.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::distances::{bottleneck_distance, interleaving_distance, ExtRational};
use crate::error::{invalid, Error, Result};
use crate::field_linear::{Matrix, PrimeField};
use crate::quiver_rep::{decompose, hom_basis, Barcode, Interval, Morphism, QuiverAn, Representation};

/// A bounded complex `⋯ → X^i → X^{i+1} → ⋯`; absent degrees are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    quiver: QuiverAn,
    field: PrimeField,
    terms: BTreeMap<i64, Representation>,
    differentials: BTreeMap<i64, Morphism>,
}

impl CochainComplex {
    /// Validates shapes, commutativity and `d^{i+1} ∘ d^i = 0`.
    pub fn new(
        quiver: QuiverAn,
        field: PrimeField,
        terms: BTreeMap<i64, Representation>,
        differentials: BTreeMap<i64, Morphism>,
    ) -> Result<Self> {
        let zero = Representation::zero(&quiver, field);
        for (i, t) in &terms {
            zero.same_category(t).map_err(|e| Error::InvalidInput(format!("term {i}: {e}")))?;
        }
        let terms: BTreeMap<i64, Representation> = terms.into_iter().filter(|(_, t)| !t.is_zero()).collect();
        let differentials: BTreeMap<i64, Morphism> =
            differentials.into_iter().filter(|(_, d)| !d.is_zero()).collect();
        let c = CochainComplex { quiver, field, terms, differentials };
        for (&i, d) in &c.differentials {
            if d.source().dims() != c.term(i).dims() || d.target().dims() != c.term(i + 1).dims() {
                return invalid(format!("differential d^{i} does not map X^{i} to X^{}", i + 1));
            }
            if d.source() != &c.term(i) || d.target() != &c.term(i + 1) {
                return invalid(format!("differential d^{i} is attached to different structure maps"));
            }
            if !d.is_valid() {
                return invalid(format!("differential d^{i} is not a morphism of representations"));
            }
            if let Some(next) = c.differentials.get(&(i + 1)) {
                if !d.then(next)?.is_zero() {
                    return invalid(format!("d^{} ∘ d^{i} is nonzero", i + 1));
                }
            }
        }
        Ok(c)
    }

    pub fn zero(quiver: &QuiverAn, field: PrimeField) -> Self {
        CochainComplex { quiver: quiver.clone(), field, terms: BTreeMap::new(), differentials: BTreeMap::new() }
    }

    /// The stalk complex `M[−i]`, concentrated in degree `i`.
    pub fn stalk(m: &Representation, i: i64) -> Self {
        let mut c = CochainComplex::zero(m.quiver(), m.field());
        if !m.is_zero() {
            c.terms.insert(i, m.clone());
        }
        c
    }

    /// The two-term complex `f` placed in degrees `i, i+1`.
    pub fn two_term(f: &Morphism, i: i64) -> Result<Self> {
        let mut terms = BTreeMap::new();
        terms.insert(i, f.source().clone());
        terms.insert(i + 1, f.target().clone());
        let mut diffs = BTreeMap::new();
        diffs.insert(i, f.clone());
        let q = f.source().quiver().clone();
        CochainComplex::new(q, f.source().field(), terms, diffs)
    }

    pub fn quiver(&self) -> &QuiverAn {
        &self.quiver
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn term(&self, i: i64) -> Representation {
        self.terms.get(&i).cloned().unwrap_or_else(|| Representation::zero(&self.quiver, self.field))
    }

    pub fn differential(&self, i: i64) -> Morphism {
        self.differentials.get(&i).cloned().unwrap_or_else(|| {
            Morphism::zero(&self.term(i), &self.term(i + 1)).expect("terms share the quiver")
        })
    }

    /// Degrees with nonzero terms.
    pub fn degrees(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    /// `H^i = ker d^i / im d^{i−1}` with induced structure maps.
    pub fn cohomology(&self, i: i64) -> Representation {
        let (k, incl) = self.differential(i).kernel();
        let prev = self.differential(i - 1);
        // coordinates of im d^{i−1} inside the chosen kernel basis
        let comps: Vec<Matrix> = (0..self.quiver.n())
            .map(|x| incl.comps()[x].solve_matrix(&prev.comps()[x]).expect("d^i ∘ d^{i−1} = 0"))
            .collect();
        let into_kernel = Morphism::new(prev.source().clone(), k, comps).expect("shapes follow from the kernel");
        into_kernel.cokernel().0
    }

    /// The translate `X[l]` with `X[l]^i = X^{i+l}` and `d_{X[l]} = (−1)^l d_X`.
    pub fn translate(&self, l: i64) -> Self {
        let sign = if l.rem_euclid(2) == 0 { 1 } else { self.field.neg(1) };
        CochainComplex {
            quiver: self.quiver.clone(),
            field: self.field,
            terms: self.terms.iter().map(|(&i, t)| (i - l, t.clone())).collect(),
            differentials: self.differentials.iter().map(|(&i, d)| (i - l, d.scale(sign))).collect(),
        }
    }

    /// Degreewise δ-shift (equioriented).
    pub fn shift(&self, delta: i64) -> Result<Self> {
        let terms = self.terms.iter().map(|(&i, t)| Ok((i, t.shift(delta)?))).collect::<Result<_>>()?;
        let diffs = self.differentials.iter().map(|(&i, d)| Ok((i, d.shift(delta)?))).collect::<Result<_>>()?;
        CochainComplex::new(self.quiver.clone(), self.field, terms, diffs)
    }

    /// Degreewise direct sum.
    pub fn direct_sum(&self, other: &CochainComplex) -> Result<Self> {
        let degrees: BTreeSet<i64> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for &i in &degrees {
            terms.insert(i, self.term(i).direct_sum(&other.term(i))?);
            diffs.insert(i, self.differential(i).direct_sum(&other.differential(i))?);
        }
        CochainComplex::new(self.quiver.clone(), self.field, terms, diffs)
    }

    /// Degreewise change of basis by random invertible matrices.
    pub fn random_conjugate(&self, rng: &mut impl Rng) -> Self {
        let lo = self.terms.keys().next().copied().unwrap_or(0);
        let hi = self.terms.keys().last().copied().unwrap_or(-1);
        let bases: BTreeMap<i64, Vec<Matrix>> = (lo..=hi + 1)
            .map(|i| {
                let t = self.term(i);
                (i, t.dims().iter().map(|&d| Matrix::random_invertible(rng, self.field, d)).collect())
            })
            .collect();
        let terms = self.terms.iter().map(|(&i, t)| (i, t.conjugate(&bases[&i]).expect("invertible"))).collect();
        let diffs = self
            .differentials
            .iter()
            .map(|(&i, d)| (i, d.conjugate(&bases[&i], &bases[&(i + 1)]).expect("invertible")))
            .collect();
        CochainComplex::new(self.quiver.clone(), self.field, terms, diffs).expect("conjugation preserves complexes")
    }
}

/// Degree `i ↦` barcode of `H^i`; zero degrees are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedBarcode {
    degrees: BTreeMap<i64, Barcode>,
}

impl GradedBarcode {
    pub fn new() -> Self {
        GradedBarcode::default()
    }

    pub fn stalk(b: Barcode, i: i64) -> Self {
        let mut g = GradedBarcode::new();
        g.insert(i, b);
        g
    }

    /// Replaces the barcode in degree `i`.
    pub fn insert(&mut self, i: i64, b: Barcode) {
        if b.is_empty() {
            self.degrees.remove(&i);
        } else {
            self.degrees.insert(i, b);
        }
    }

    pub fn add(&mut self, i: i64, interval: Interval, mult: usize) {
        if mult > 0 {
            self.degrees.entry(i).or_default().add(interval, mult);
        }
    }

    pub fn get(&self, i: i64) -> Barcode {
        self.degrees.get(&i).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Barcode)> + '_ {
        self.degrees.iter().map(|(&i, b)| (i, b))
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.degrees.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn union(&self, other: &GradedBarcode) -> GradedBarcode {
        let mut g = self.clone();
        for (i, b) in other.iter() {
            g.insert(i, g.get(i).union(b));
        }
        g
    }

    /// Degreewise δ-shift of bars over A_n.
    pub fn shifted(&self, delta: i64, n: usize) -> GradedBarcode {
        let mut g = GradedBarcode::new();
        for (i, b) in self.iter() {
            g.insert(i, b.shifted(delta, n));
        }
        g
    }

    /// The graded barcode of `X[l]`.
    pub fn translated(&self, l: i64) -> GradedBarcode {
        GradedBarcode { degrees: self.degrees.iter().map(|(&i, b)| (i - l, b.clone())).collect() }
    }

    /// `⊕ B^i[−i]` as a complex of stalks over `q`.
    pub fn to_complex(&self, q: &QuiverAn, field: PrimeField) -> Result<CochainComplex> {
        let mut terms = BTreeMap::new();
        for (i, b) in self.iter() {
            terms.insert(i, Representation::from_barcode(q, field, b)?);
        }
        CochainComplex::new(q.clone(), field, terms, BTreeMap::new())
    }

    pub fn max_vertex(&self) -> usize {
        self.degrees.values().map(Barcode::max_vertex).max().unwrap_or(0)
    }
}

impl fmt::Display for GradedBarcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, b)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}: {b}")?;
        }
        write!(f, "}}")
    }
}

pub fn cohomology(x: &CochainComplex, i: i64) -> Representation {
    x.cohomology(i)
}

/// Degree `i ↦ B(H^i(X))`.
pub fn decompose_complex(x: &CochainComplex) -> GradedBarcode {
    let lo = x.terms.keys().next().copied().unwrap_or(0);
    let hi = x.terms.keys().last().copied().unwrap_or(-1);
    let parts: Vec<(i64, Barcode)> = (lo..=hi).into_par_iter().map(|i| (i, decompose(&x.cohomology(i)))).collect();
    let mut g = GradedBarcode::new();
    for (i, b) in parts {
        g.insert(i, b);
    }
    g
}

/// `d_I^D(M[−i], N[−j])`.
pub fn stalk_distance(m: &Representation, i: i64, n: &Representation, j: i64) -> Result<ExtRational> {
    if i == j {
        return interleaving_distance(m, n);
    }
    let zm = Representation::zero(m.quiver(), m.field());
    let zn = Representation::zero(n.quiver(), n.field());
    Ok(interleaving_distance(m, &zm)?.max(interleaving_distance(n, &zn)?))
}

/// `d_I^D` as the maximum over degrees of the interleaving distances of cohomology.
pub fn derived_interleaving_distance(x: &CochainComplex, y: &CochainComplex) -> Result<ExtRational> {
    if x.quiver() != y.quiver() || x.field() != y.field() {
        return invalid("complexes live over different quivers or fields");
    }
    if !x.quiver().is_equioriented() {
        return Err(Error::Unsupported("derived interleavings need an equioriented quiver".into()));
    }
    let degrees: BTreeSet<i64> = x.terms.keys().chain(y.terms.keys()).copied().collect();
    let (Some(&lo), Some(&hi)) = (degrees.first(), degrees.last()) else {
        return Ok(ExtRational::ZERO);
    };
    let per_degree: Vec<Result<ExtRational>> =
        (lo..=hi).into_par_iter().map(|i| interleaving_distance(&x.cohomology(i), &y.cohomology(i))).collect();
    per_degree.into_iter().try_fold(ExtRational::ZERO, |acc, d| Ok(acc.max(d?)))
}

/// `d_I^D` of the stalk complexes realizing two graded barcodes over A_n.
pub fn derived_interleaving_distance_graded(
    a: &GradedBarcode,
    b: &GradedBarcode,
    n: usize,
    field: PrimeField,
) -> Result<ExtRational> {
    let q = QuiverAn::equioriented(n);
    derived_interleaving_distance(&a.to_complex(&q, field)?, &b.to_complex(&q, field)?)
}

/// The maximum over degrees of the bottleneck distances.
pub fn derived_bottleneck(a: &GradedBarcode, b: &GradedBarcode) -> ExtRational {
    let degrees: BTreeSet<i64> = a.degrees.keys().chain(b.degrees.keys()).copied().collect();
    degrees.into_iter().map(|i| bottleneck_distance(&a.get(i), &b.get(i))).max().unwrap_or(ExtRational::ZERO)
}

fn canonical_map(src: &Representation, dst: &Representation) -> Morphism {
    hom_basis(src, dst)
        .expect("same quiver")
        .into_iter()
        .next()
        .expect("the intervals admit a nonzero map")
}

/// A random complex over equioriented A_n whose derived barcode is `g`.
///
/// Each bar is realized as a stalk, as a projective presentation
/// `P_{d+1} ↪ P_b`, or as an injective copresentation `I[1,d] ↠ I[1,b−1]`;
/// contractible summands `Z →id Z` are mixed in and every degree is conjugated.
pub fn random_complex_realizing(
    rng: &mut impl Rng,
    g: &GradedBarcode,
    n: usize,
    field: PrimeField,
) -> Result<CochainComplex> {
    let q = QuiverAn::equioriented(n);
    let rep = |i: Interval| Representation::interval(&q, field, i);
    let mut acc = CochainComplex::zero(&q, field);
    for (deg, b) in g.iter() {
        for bar in b.expanded() {
            if bar.d > n {
                return invalid(format!("{bar} does not fit on A_{n}"));
            }
            let piece = match rng.gen_range(0..3) {
                1 if bar.d < n => {
                    let f = canonical_map(&rep(Interval { b: bar.d + 1, d: n })?, &rep(Interval { b: bar.b, d: n })?);
                    CochainComplex::two_term(&f, deg - 1)?
                }
                2 if bar.b > 1 => {
                    let f = canonical_map(&rep(Interval { b: 1, d: bar.d })?, &rep(Interval { b: 1, d: bar.b - 1 })?);
                    CochainComplex::two_term(&f, deg)?
                }
                _ => CochainComplex::stalk(&rep(bar)?, deg),
            };
            acc = acc.direct_sum(&piece)?;
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let b = rng.gen_range(1..=n);
        let z = rep(Interval { b, d: rng.gen_range(b..=n) })?;
        let deg = rng.gen_range(-3..=2);
        acc = acc.direct_sum(&CochainComplex::two_term(&Morphism::identity(&z), deg)?)?;
    }
    Ok(acc.random_conjugate(rng))
}

/// A random graded barcode over A_n in the given degree range.
pub fn random_graded_barcode(
    rng: &mut impl Rng,
    n: usize,
    degrees: std::ops::RangeInclusive<i64>,
    max_bars: usize,
) -> GradedBarcode {
    let mut g = GradedBarcode::new();
    for i in degrees {
        if rng.gen_bool(0.6) {
            g.insert(i, crate::quiver_rep::random_barcode(rng, n, max_bars));
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn iv(b: usize, d: usize) -> Interval {
        Interval { b, d }
    }

    fn f2() -> PrimeField {
        PrimeField::gf2()
    }

    #[test]
    fn cohomology_examples() {
        let q = QuiverAn::equioriented(3);
        let m = Representation::interval(&q, f2(), iv(1, 2)).unwrap();
        let s = CochainComplex::stalk(&m, 0);
        assert_eq!(decompose(&s.cohomology(0)), Barcode::from_intervals([iv(1, 2)]));
        assert!(s.cohomology(1).is_zero() && s.cohomology(-1).is_zero());
        let exact = CochainComplex::two_term(&Morphism::identity(&m), 0).unwrap();
        assert!(decompose_complex(&exact).is_empty());
        let sub = Representation::interval(&q, f2(), iv(2, 3)).unwrap();
        let big = Representation::interval(&q, f2(), iv(1, 3)).unwrap();
        let incl = canonical_map(&sub, &big);
        let c = CochainComplex::two_term(&incl, 0).unwrap();
        assert!(c.cohomology(0).is_zero());
        assert_eq!(decompose(&c.cohomology(1)), Barcode::from_intervals([iv(1, 1)]));
        assert_eq!(decompose_complex(&c), GradedBarcode::stalk(Barcode::from_intervals([iv(1, 1)]), 1));
    }

    #[test]
    fn rejects_non_complexes() {
        let q = QuiverAn::equioriented(2);
        let m = Representation::interval(&q, f2(), iv(1, 2)).unwrap();
        let id = Morphism::identity(&m);
        let terms: BTreeMap<i64, Representation> = [(0, m.clone()), (1, m.clone()), (2, m.clone())].into();
        let diffs: BTreeMap<i64, Morphism> = [(0, id.clone()), (1, id)].into();
        assert!(CochainComplex::new(q, f2(), terms, diffs).is_err());
    }

    #[test]
    fn distance_examples() {
        let q = QuiverAn::equioriented(3);
        let r = |b, d| Representation::interval(&q, f2(), iv(b, d)).unwrap();
        assert_eq!(stalk_distance(&r(1, 2), 0, &r(1, 2), 0).unwrap(), ExtRational::ZERO);
        assert_eq!(stalk_distance(&r(1, 2), 0, &r(1, 2), 1).unwrap(), 1.into());
        assert_eq!(stalk_distance(&r(1, 3), 0, &r(2, 2), 0).unwrap(), 1.into());
        let a = GradedBarcode::stalk(Barcode::from_intervals([iv(1, 2)]), 0);
        let b = GradedBarcode::stalk(Barcode::from_intervals([iv(1, 2)]), 1);
        assert_eq!(derived_interleaving_distance_graded(&a, &b, 3, f2()).unwrap(), 1.into());
        let a = GradedBarcode::stalk(Barcode::from_intervals([iv(1, 5)]), 0);
        let b = GradedBarcode::stalk(Barcode::from_intervals([iv(1, 5)]), 1);
        assert_eq!(derived_interleaving_distance_graded(&a, &b, 6, f2()).unwrap(), 3.into());
        assert_eq!(derived_bottleneck(&a, &b), 3.into());
        assert_eq!(derived_bottleneck(&a, &a), ExtRational::ZERO);
    }

    #[test]
    fn realizations_recover_the_graded_barcode() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let p = [2, 3, 5][rng.gen_range(0..3)];
            let field = PrimeField::new(p).unwrap();
            let g = random_graded_barcode(&mut rng, n, -2..=2, 3);
            let c = random_complex_realizing(&mut rng, &g, n, field).unwrap();
            assert_eq!(decompose_complex(&c), g);
            // translation and shift act on the graded barcode as expected
            assert_eq!(decompose_complex(&c.translate(1)), g.translated(1));
            assert_eq!(decompose_complex(&c.shift(1).unwrap()), g.shifted(1, n));
            let h = random_graded_barcode(&mut rng, n, -2..=2, 2);
            let d = random_complex_realizing(&mut rng, &h, n, field).unwrap();
            assert_eq!(decompose_complex(&c.direct_sum(&d).unwrap()), g.union(&h));
        }
    }

    #[test]
    fn derived_isometry_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let n = rng.gen_range(1..=6);
            let a = random_graded_barcode(&mut rng, n, -2..=2, 3);
            let b = random_graded_barcode(&mut rng, n, -2..=2, 3);
            let x = random_complex_realizing(&mut rng, &a, n, f2()).unwrap();
            let y = random_complex_realizing(&mut rng, &b, n, f2()).unwrap();
            assert_eq!(derived_interleaving_distance(&x, &y).unwrap(), derived_bottleneck(&a, &b));
        }
    }
}
