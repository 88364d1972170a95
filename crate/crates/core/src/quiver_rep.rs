//! A_n-type quivers, their representations and morphisms, the δ-shift
//! calculus, and interval decomposition.
//!
//! Vertices are numbered `1..=n` in the public API. Arrow `k` (0-based)
//! joins vertices `k+1` and `k+2`; its matrix has shape
//! `dims[target] × dims[source]`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ar_quiver::ArQuiver;
use crate::error::{invalid, Error, Result};
use crate::field_linear::{LinearSystem, Matrix, PrimeField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// `x → x+1`
    Forward,
    /// `x ← x+1`
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// Orientation of the `n-1` arrows of A_n(a).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation(Vec<Direction>);

impl Orientation {
    pub fn new(arrows: Vec<Direction>) -> Self {
        Orientation(arrows)
    }

    /// All arrows forward.
    pub fn equioriented(n: usize) -> Self {
        Orientation(vec![Direction::Forward; n.saturating_sub(1)])
    }

    /// Alternating with vertex 1 a sink: `1 ← 2 → 3 ← ⋯`.
    pub fn z1(n: usize) -> Self {
        Orientation(
            (0..n.saturating_sub(1))
                .map(|k| if k % 2 == 0 { Direction::Backward } else { Direction::Forward })
                .collect(),
        )
    }

    /// Alternating with vertex 1 a source: `1 → 2 ← 3 → ⋯`.
    pub fn z2(n: usize) -> Self {
        Orientation(Orientation::z1(n).0.into_iter().map(Direction::flip).collect())
    }

    /// Every orientation of A_n, in lexicographic order of the `f`/`b` string.
    pub fn all(n: usize) -> Vec<Orientation> {
        let m = n.saturating_sub(1);
        let mut out: Vec<Orientation> = (0..1u64 << m)
            .map(|mask| {
                Orientation(
                    (0..m)
                        .map(|k| {
                            if mask >> (m - 1 - k) & 1 == 1 {
                                Direction::Forward
                            } else {
                                Direction::Backward
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// Parses a string over `{f, b}`.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                'f' | 'F' => Ok(Direction::Forward),
                'b' | 'B' => Ok(Direction::Backward),
                other => invalid(format!("orientation character {i} is {other:?}, expected 'f' or 'b'")),
            })
            .collect::<Result<Vec<_>>>()
            .map(Orientation)
    }

    pub fn arrows(&self) -> &[Direction] {
        &self.0
    }

    pub fn num_arrows(&self) -> usize {
        self.0.len()
    }

    pub fn is_equioriented(&self) -> bool {
        self.0.iter().all(|&d| d == Direction::Forward)
    }

    pub fn is_z1(&self) -> bool {
        *self == Orientation::z1(self.0.len() + 1)
    }

    pub fn is_z2(&self) -> bool {
        *self == Orientation::z2(self.0.len() + 1)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            f.write_str(match d {
                Direction::Forward => "f",
                Direction::Backward => "b",
            })?;
        }
        Ok(())
    }
}

/// The quiver A_n(a).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuiverAn {
    n: usize,
    orientation: Orientation,
}

impl QuiverAn {
    pub fn new(n: usize, orientation: Orientation) -> Result<Self> {
        if n == 0 {
            return invalid("A_n needs at least one vertex");
        }
        if orientation.num_arrows() != n - 1 {
            return invalid(format!(
                "orientation has {} arrows, A_{n} needs {}",
                orientation.num_arrows(),
                n - 1
            ));
        }
        Ok(QuiverAn { n, orientation })
    }

    pub fn equioriented(n: usize) -> Self {
        QuiverAn::new(n, Orientation::equioriented(n)).expect("n >= 1")
    }

    pub fn z1(n: usize) -> Self {
        QuiverAn::new(n, Orientation::z1(n)).expect("n >= 1")
    }

    pub fn z2(n: usize) -> Self {
        QuiverAn::new(n, Orientation::z2(n)).expect("n >= 1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn is_equioriented(&self) -> bool {
        self.orientation.is_equioriented()
    }

    pub fn direction(&self, arrow: usize) -> Direction {
        self.orientation.0[arrow]
    }

    /// `(source, target)` of arrow `k`, as 0-based vertex indices.
    pub fn arrow_ends(&self, arrow: usize) -> (usize, usize) {
        match self.orientation.0[arrow] {
            Direction::Forward => (arrow, arrow + 1),
            Direction::Backward => (arrow + 1, arrow),
        }
    }

    /// All intervals, sorted by `(b, d)`.
    pub fn intervals(&self) -> Vec<Interval> {
        let mut v = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for b in 1..=self.n {
            for d in b..=self.n {
                v.push(Interval { b, d });
            }
        }
        v
    }

    pub fn check_interval(&self, i: Interval) -> Result<()> {
        if i.b < 1 || i.b > i.d || i.d > self.n {
            return invalid(format!("{i} is not an interval of A_{}", self.n));
        }
        Ok(())
    }

    /// The indecomposable projective at vertex `i`: vertices reachable from `i`.
    pub fn projective(&self, i: usize) -> Interval {
        let mut l = i;
        while l > 1 && self.direction(l - 2) == Direction::Backward {
            l -= 1;
        }
        let mut r = i;
        while r < self.n && self.direction(r - 1) == Direction::Forward {
            r += 1;
        }
        Interval { b: l, d: r }
    }

    /// The indecomposable injective at vertex `i`: vertices from which `i` is reachable.
    pub fn injective(&self, i: usize) -> Interval {
        let mut l = i;
        while l > 1 && self.direction(l - 2) == Direction::Forward {
            l -= 1;
        }
        let mut r = i;
        while r < self.n && self.direction(r - 1) == Direction::Backward {
            r += 1;
        }
        Interval { b: l, d: r }
    }

    /// Whether `Hom(I[x], I[y]) ≠ 0` (it is then one-dimensional).
    pub fn interval_hom_nonzero(&self, x: Interval, y: Interval) -> bool {
        let lo = x.b.max(y.b);
        let hi = x.d.min(y.d);
        if lo > hi {
            return false;
        }
        // the overlap must be a quotient of x and a submodule of y
        let left_ok = match x.b.cmp(&y.b) {
            std::cmp::Ordering::Less => self.direction(y.b - 2) == Direction::Backward,
            std::cmp::Ordering::Greater => self.direction(x.b - 2) == Direction::Forward,
            std::cmp::Ordering::Equal => true,
        };
        let right_ok = match x.d.cmp(&y.d) {
            std::cmp::Ordering::Greater => self.direction(y.d - 1) == Direction::Forward,
            std::cmp::Ordering::Less => self.direction(x.d - 1) == Direction::Backward,
            std::cmp::Ordering::Equal => true,
        };
        left_ok && right_ok
    }
}

/// The interval `[b, d]` of vertices, `1 ≤ b ≤ d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub b: usize,
    pub d: usize,
}

impl Interval {
    pub fn new(b: usize, d: usize) -> Result<Self> {
        if b < 1 || b > d {
            return invalid(format!("[{b},{d}] is not a nonempty interval of positive vertices"));
        }
        Ok(Interval { b, d })
    }

    pub fn contains(&self, x: usize) -> bool {
        self.b <= x && x <= self.d
    }

    pub fn len(&self) -> usize {
        self.d - self.b + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Translates by `-δ` and clips to `[1, n]`.
    pub fn shifted(&self, delta: i64, n: usize) -> Option<Interval> {
        let b = (self.b as i64 - delta).max(1);
        let d = (self.d as i64 - delta).min(n as i64);
        (b <= d).then(|| Interval { b: b as usize, d: d as usize })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I[{},{}]", self.b, self.d)
    }
}

/// A multiset of intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Barcode {
    bars: BTreeMap<Interval, usize>,
}

impl Barcode {
    pub fn new() -> Self {
        Barcode::default()
    }

    pub fn from_intervals(it: impl IntoIterator<Item = Interval>) -> Self {
        let mut b = Barcode::new();
        for i in it {
            b.add(i, 1);
        }
        b
    }

    pub fn add(&mut self, i: Interval, mult: usize) {
        if mult > 0 {
            *self.bars.entry(i).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, i: Interval) -> usize {
        self.bars.get(&i).copied().unwrap_or(0)
    }

    /// `(interval, multiplicity)` pairs in increasing interval order.
    pub fn iter(&self) -> impl Iterator<Item = (Interval, usize)> + '_ {
        self.bars.iter().map(|(&i, &m)| (i, m))
    }

    /// Every bar listed once per multiplicity, sorted.
    pub fn expanded(&self) -> Vec<Interval> {
        self.bars.iter().flat_map(|(&i, &m)| std::iter::repeat(i).take(m)).collect()
    }

    pub fn num_bars(&self) -> usize {
        self.bars.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn total_dimension(&self) -> usize {
        self.bars.iter().map(|(i, m)| i.len() * m).sum()
    }

    pub fn union(&self, other: &Barcode) -> Barcode {
        let mut out = self.clone();
        for (i, m) in other.iter() {
            out.add(i, m);
        }
        out
    }

    pub fn max_vertex(&self) -> usize {
        self.bars.keys().map(|i| i.d).max().unwrap_or(0)
    }

    /// Translates every bar by `-δ`, clipping to `[1, n]` and dropping empty bars.
    pub fn shifted(&self, delta: i64, n: usize) -> Barcode {
        let mut out = Barcode::new();
        for (i, m) in self.iter() {
            if let Some(j) = i.shifted(delta, n) {
                out.add(j, m);
            }
        }
        out
    }

    /// Translates every bar by `+k` without clipping.
    pub fn translated_up(&self, k: usize) -> Barcode {
        let mut out = Barcode::new();
        for (i, m) in self.iter() {
            out.add(Interval { b: i.b + k, d: i.d + k }, m);
        }
        out
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (i, m)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "⟨{},{}⟩:{m}", i.b, i.d)?;
        }
        f.write_str("}")
    }
}

/// A finite-dimensional representation of A_n(a) over GF(p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    quiver: QuiverAn,
    field: PrimeField,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl Representation {
    pub fn new(quiver: QuiverAn, field: PrimeField, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        if dims.len() != quiver.n() {
            return invalid(format!("{} dimensions given for {} vertices", dims.len(), quiver.n()));
        }
        if maps.len() != quiver.n() - 1 {
            return invalid(format!("{} maps given for {} arrows", maps.len(), quiver.n() - 1));
        }
        for (k, m) in maps.iter().enumerate() {
            let (s, t) = quiver.arrow_ends(k);
            if m.shape() != (dims[t], dims[s]) {
                return invalid(format!(
                    "map {k} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[t],
                    dims[s]
                ));
            }
            if m.field() != field {
                return invalid(format!("map {k} is over a different field"));
            }
        }
        Ok(Representation { quiver, field, dims, maps })
    }

    pub fn zero(quiver: &QuiverAn, field: PrimeField) -> Self {
        let n = quiver.n();
        Representation {
            quiver: quiver.clone(),
            field,
            dims: vec![0; n],
            maps: (0..n - 1).map(|_| Matrix::zeros(field, 0, 0)).collect(),
        }
    }

    /// The interval module `I[b,d]`.
    pub fn interval(quiver: &QuiverAn, field: PrimeField, i: Interval) -> Result<Self> {
        quiver.check_interval(i)?;
        let n = quiver.n();
        let dims: Vec<usize> = (1..=n).map(|x| i.contains(x) as usize).collect();
        let maps = (0..n - 1)
            .map(|k| {
                let (s, t) = quiver.arrow_ends(k);
                if dims[s] == 1 && dims[t] == 1 {
                    Matrix::identity(field, 1)
                } else {
                    Matrix::zeros(field, dims[t], dims[s])
                }
            })
            .collect();
        Ok(Representation { quiver: quiver.clone(), field, dims, maps })
    }

    /// Direct sum of interval modules.
    pub fn from_barcode(quiver: &QuiverAn, field: PrimeField, barcode: &Barcode) -> Result<Self> {
        let mut m = Representation::zero(quiver, field);
        for i in barcode.expanded() {
            m = m.direct_sum(&Representation::interval(quiver, field, i)?)?;
        }
        Ok(m)
    }

    pub fn quiver(&self) -> &QuiverAn {
        &self.quiver
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.quiver.n()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension at 1-based vertex `x`.
    pub fn dim(&self, x: usize) -> usize {
        self.dims[x - 1]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &Matrix {
        &self.maps[arrow]
    }

    pub fn same_category(&self, other: &Representation) -> Result<()> {
        if self.quiver != other.quiver {
            return invalid("representations live over different quivers");
        }
        if self.field != other.field {
            return invalid("representations live over different fields");
        }
        Ok(())
    }

    pub(crate) fn require_equioriented(&self, what: &str) -> Result<()> {
        if !self.quiver.is_equioriented() {
            return Err(Error::Unsupported(format!("{what} needs an equioriented quiver")));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        self.same_category(other)?;
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.block_diag(b)).collect();
        Ok(Representation { quiver: self.quiver.clone(), field: self.field, dims, maps })
    }

    /// Change of basis: the representation with maps `B_t M_α B_s⁻¹`.
    pub fn conjugate(&self, bases: &[Matrix]) -> Result<Representation> {
        if bases.len() != self.n() {
            return invalid("one basis change per vertex is required");
        }
        let mut inverses = Vec::with_capacity(bases.len());
        for (x, b) in bases.iter().enumerate() {
            if b.shape() != (self.dims[x], self.dims[x]) {
                return invalid(format!("basis change at vertex {} has the wrong shape", x + 1));
            }
            inverses.push(b.inverse().ok_or_else(|| {
                Error::InvalidInput(format!("basis change at vertex {} is singular", x + 1))
            })?);
        }
        let maps = (0..self.n() - 1)
            .map(|k| {
                let (s, t) = self.quiver.arrow_ends(k);
                bases[t].mul(&self.maps[k]).mul(&inverses[s])
            })
            .collect();
        Ok(Representation { quiver: self.quiver.clone(), field: self.field, dims: self.dims.clone(), maps })
    }

    /// Conjugates by random invertible matrices; returns the new module and the bases used.
    pub fn random_conjugate(&self, rng: &mut impl Rng) -> (Representation, Vec<Matrix>) {
        let bases: Vec<Matrix> =
            self.dims.iter().map(|&d| Matrix::random_invertible(rng, self.field, d)).collect();
        let m = self.conjugate(&bases).expect("bases are invertible and well shaped");
        (m, bases)
    }

    /// The structure map `φ_M(s, t): M_s → M_t` for `s ≤ t` on an equioriented quiver.
    pub fn path_map(&self, s: usize, t: usize) -> Result<Matrix> {
        self.require_equioriented("path maps")?;
        if s < 1 || s > t || t > self.n() {
            return invalid(format!("no path from {s} to {t}"));
        }
        let mut acc = Matrix::identity(self.field, self.dim(s));
        for k in (s - 1)..(t - 1) {
            acc = self.maps[k].mul(&acc);
        }
        Ok(acc)
    }

    /// The δ-shift `M(δ)_x = M_{x+δ}` (zero outside `1..=n`).
    pub fn shift(&self, delta: i64) -> Result<Representation> {
        self.require_equioriented("the δ-shift")?;
        let n = self.n() as i64;
        let inside = |x: i64| x >= 1 && x <= n;
        let dims: Vec<usize> = (1..=n)
            .map(|x| if inside(x + delta) { self.dim((x + delta) as usize) } else { 0 })
            .collect();
        let maps = (1..n)
            .map(|x| {
                let (s, t) = (x + delta, x + 1 + delta);
                if inside(s) && inside(t) {
                    self.maps[(s - 1) as usize].clone()
                } else {
                    Matrix::zeros(self.field, dims[x as usize], dims[(x - 1) as usize])
                }
            })
            .collect();
        Ok(Representation { quiver: self.quiver.clone(), field: self.field, dims, maps })
    }

    /// The transition morphism `φ^δ_M: M → M(δ)`.
    pub fn transition(&self, delta: usize) -> Result<Morphism> {
        let target = self.shift(delta as i64)?;
        let n = self.n();
        let comps = (1..=n)
            .map(|x| {
                if x + delta <= n {
                    self.path_map(x, x + delta)
                } else {
                    Ok(Matrix::zeros(self.field, 0, self.dim(x)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism { source: self.clone(), target, comps })
    }

    pub fn is_delta_trivial(&self, delta: usize) -> Result<bool> {
        Ok(self.transition(delta)?.is_zero())
    }

    /// Zero-pads on vertices `n+1..=ℓ`.
    pub fn extend(&self, ell: usize) -> Result<Representation> {
        if ell < self.n() {
            return invalid(format!("cannot extend A_{} to A_{ell}", self.n()));
        }
        self.pad(0, ell - self.n())
    }

    /// Zero-pads with `left` vertices before vertex 1 and `right` after vertex n (equioriented).
    pub fn pad(&self, left: usize, right: usize) -> Result<Representation> {
        self.require_equioriented("zero padding")?;
        let ell = self.n() + left + right;
        let q = QuiverAn::equioriented(ell);
        let mut dims = vec![0; left];
        dims.extend_from_slice(&self.dims);
        dims.resize(ell, 0);
        let maps = (0..ell - 1)
            .map(|k| {
                if k >= left && k + 1 < left + self.n() {
                    self.maps[k - left].clone()
                } else {
                    Matrix::zeros(self.field, dims[k + 1], dims[k])
                }
            })
            .collect();
        Representation::new(q, self.field, dims, maps)
    }
}

/// A morphism of representations given by its vertex components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Representation,
    target: Representation,
    comps: Vec<Matrix>,
}

impl Morphism {
    /// Checks shapes only; use [`Morphism::is_valid`] for commutativity.
    pub fn new(source: Representation, target: Representation, comps: Vec<Matrix>) -> Result<Self> {
        source.same_category(&target)?;
        if comps.len() != source.n() {
            return invalid("one component per vertex is required");
        }
        for (x, c) in comps.iter().enumerate() {
            if c.shape() != (target.dims[x], source.dims[x]) {
                return invalid(format!(
                    "component at vertex {} has shape {}x{}, expected {}x{}",
                    x + 1,
                    c.rows(),
                    c.cols(),
                    target.dims[x],
                    source.dims[x]
                ));
            }
        }
        Ok(Morphism { source, target, comps })
    }

    pub fn identity(m: &Representation) -> Morphism {
        let comps = m.dims.iter().map(|&d| Matrix::identity(m.field, d)).collect();
        Morphism { source: m.clone(), target: m.clone(), comps }
    }

    pub fn zero(source: &Representation, target: &Representation) -> Result<Morphism> {
        source.same_category(target)?;
        let comps =
            (0..source.n()).map(|x| Matrix::zeros(source.field, target.dims[x], source.dims[x])).collect();
        Ok(Morphism { source: source.clone(), target: target.clone(), comps })
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn comps(&self) -> &[Matrix] {
        &self.comps
    }

    /// Component at 1-based vertex `x`.
    pub fn comp(&self, x: usize) -> &Matrix {
        &self.comps[x - 1]
    }

    /// Whether every square commutes.
    pub fn is_valid(&self) -> bool {
        let q = self.source.quiver();
        (0..q.n() - 1).all(|k| {
            let (s, t) = q.arrow_ends(k);
            self.comps[t].mul(&self.source.maps[k]) == self.target.maps[k].mul(&self.comps[s])
        })
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism> {
        if self.target.dims != other.source.dims || self.target.quiver != other.source.quiver {
            return invalid("morphisms are not composable");
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(f, g)| g.mul(f)).collect();
        Ok(Morphism { source: self.source.clone(), target: other.target.clone(), comps })
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        if self.source.dims != other.source.dims || self.target.dims != other.target.dims {
            return invalid("morphisms have different shapes");
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(f, g)| f.add(g)).collect();
        Ok(Morphism { source: self.source.clone(), target: self.target.clone(), comps })
    }

    pub fn scale(&self, s: u32) -> Morphism {
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// `f ⊕ g` with block-diagonal components.
    pub fn direct_sum(&self, other: &Morphism) -> Result<Morphism> {
        let source = self.source.direct_sum(&other.source)?;
        let target = self.target.direct_sum(&other.target)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.block_diag(b)).collect();
        Ok(Morphism { source, target, comps })
    }

    /// `Q f P⁻¹` between the conjugated source and target.
    pub fn conjugate(&self, source_bases: &[Matrix], target_bases: &[Matrix]) -> Result<Morphism> {
        let source = self.source.conjugate(source_bases)?;
        let target = self.target.conjugate(target_bases)?;
        let comps = self
            .comps
            .iter()
            .zip(source_bases.iter().zip(target_bases))
            .map(|(f, (p, q))| q.mul(f).mul(&p.inverse().expect("checked by conjugate")))
            .collect();
        Ok(Morphism { source, target, comps })
    }

    /// Concatenation of all components in row-major order.
    pub fn to_vector(&self) -> Vec<u32> {
        self.comps.iter().flat_map(|c| c.entries().iter().copied()).collect()
    }

    /// The shifted morphism `f(δ): M(δ) → N(δ)`.
    pub fn shift(&self, delta: i64) -> Result<Morphism> {
        let source = self.source.shift(delta)?;
        let target = self.target.shift(delta)?;
        let n = self.source.n() as i64;
        let comps = (1..=n)
            .map(|x| {
                let y = x + delta;
                if y >= 1 && y <= n {
                    self.comps[(y - 1) as usize].clone()
                } else {
                    Matrix::zeros(self.source.field, 0, 0)
                }
            })
            .collect();
        Ok(Morphism { source, target, comps })
    }

    /// Zero-pads source, target and components (equioriented).
    pub fn pad(&self, left: usize, right: usize) -> Result<Morphism> {
        let source = self.source.pad(left, right)?;
        let target = self.target.pad(left, right)?;
        let f = self.source.field;
        let comps = (0..source.n())
            .map(|x| {
                if x >= left && x < left + self.source.n() {
                    self.comps[x - left].clone()
                } else {
                    Matrix::zeros(f, 0, 0)
                }
            })
            .collect();
        Ok(Morphism { source, target, comps })
    }

    /// `ker f` with its inclusion into the source.
    pub fn kernel(&self) -> (Representation, Morphism) {
        let q = self.source.quiver().clone();
        let field = self.source.field;
        let bases: Vec<Matrix> = self.comps.iter().map(Matrix::nullspace_matrix).collect();
        let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
        let maps = (0..q.n() - 1)
            .map(|k| {
                let (s, t) = q.arrow_ends(k);
                let img = self.source.maps[k].mul(&bases[s]);
                bases[t].solve_matrix(&img).expect("kernel is a subrepresentation")
            })
            .collect();
        let k = Representation { quiver: q, field, dims, maps };
        let incl = Morphism { source: k.clone(), target: self.source.clone(), comps: bases };
        (k, incl)
    }

    /// `im f` with the factorization `source ↠ im f ↪ target`.
    pub fn image(&self) -> (Representation, Morphism, Morphism) {
        let q = self.source.quiver().clone();
        let field = self.source.field;
        let bases: Vec<Matrix> = self.comps.iter().map(Matrix::column_space_basis).collect();
        let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
        let maps = (0..q.n() - 1)
            .map(|k| {
                let (s, t) = q.arrow_ends(k);
                let img = self.target.maps[k].mul(&bases[s]);
                bases[t].solve_matrix(&img).expect("image is a subrepresentation")
            })
            .collect();
        let im = Representation { quiver: q, field, dims, maps };
        let proj = self
            .comps
            .iter()
            .zip(&bases)
            .map(|(c, b)| b.solve_matrix(c).expect("components land in their image"))
            .collect();
        let pi = Morphism { source: self.source.clone(), target: im.clone(), comps: proj };
        let mu = Morphism { source: im, target: self.target.clone(), comps: bases };
        (pi.target.clone(), pi, mu)
    }

    /// `coker f` with the projection from the target.
    pub fn cokernel(&self) -> (Representation, Morphism) {
        let q = self.source.quiver().clone();
        let field = self.source.field;
        let projs: Vec<Matrix> = self.comps.iter().map(Matrix::cokernel_projection).collect();
        let sections: Vec<Matrix> = projs
            .iter()
            .map(|p| p.solve_matrix(&Matrix::identity(field, p.rows())).expect("projection has full row rank"))
            .collect();
        let dims: Vec<usize> = projs.iter().map(Matrix::rows).collect();
        let maps = (0..q.n() - 1)
            .map(|k| {
                let (s, t) = q.arrow_ends(k);
                projs[t].mul(&self.target.maps[k]).mul(&sections[s])
            })
            .collect();
        let c = Representation { quiver: q, field, dims, maps };
        let proj = Morphism { source: self.target.clone(), target: c.clone(), comps: projs };
        (c, proj)
    }
}

/// Validates the commutativity of `f`.
pub fn validate_morphism(f: &Morphism) -> bool {
    f.is_valid()
}

pub fn make_interval_rep(q: &QuiverAn, field: PrimeField, i: Interval) -> Result<Representation> {
    Representation::interval(q, field, i)
}

pub fn direct_sum(m: &Representation, n: &Representation) -> Result<Representation> {
    m.direct_sum(n)
}

pub fn shift(m: &Representation, delta: i64) -> Result<Representation> {
    m.shift(delta)
}

pub fn transition(m: &Representation, delta: usize) -> Result<Morphism> {
    m.transition(delta)
}

pub fn is_delta_trivial(m: &Representation, delta: usize) -> Result<bool> {
    m.is_delta_trivial(delta)
}

pub fn extend(m: &Representation, ell: usize) -> Result<Representation> {
    m.extend(ell)
}

/// The commutativity constraints whose solution space is `Hom(M, N)`.
fn hom_system(m: &Representation, n: &Representation) -> LinearSystem {
    let q = m.quiver();
    let f = m.field;
    let sizes: Vec<usize> = (0..q.n()).map(|x| n.dims[x] * m.dims[x]).collect();
    let mut sys = LinearSystem::new(f, &sizes);
    for k in 0..q.n() - 1 {
        let (s, t) = q.arrow_ends(k);
        if n.dims[t] == 0 || m.dims[s] == 0 {
            continue;
        }
        // f_t M_α − N_α f_s = 0, vectorized row-major
        let left = Matrix::identity(f, n.dims[t]).kron(&m.maps[k].transpose());
        let right = n.maps[k].kron(&Matrix::identity(f, m.dims[s])).scale(f.neg(1));
        let mut terms: Vec<(usize, &Matrix)> = Vec::new();
        if sizes[t] > 0 {
            terms.push((t, &left));
        }
        if sizes[s] > 0 {
            terms.push((s, &right));
        }
        if !terms.is_empty() {
            sys.add_equations(&terms, None).expect("shapes follow from the dimensions");
        }
    }
    sys
}

/// `dim Hom(M, N)`.
pub fn hom_dim(m: &Representation, n: &Representation) -> Result<usize> {
    m.same_category(n)?;
    let sys = hom_system(m, n);
    Ok(sys.num_vars() - sys.coefficient_matrix().rank())
}

/// A basis of `Hom(M, N)`.
pub fn hom_basis(m: &Representation, n: &Representation) -> Result<Vec<Morphism>> {
    m.same_category(n)?;
    let sys = hom_system(m, n);
    let q = m.quiver();
    let basis = sys.coefficient_matrix().nullspace_basis();
    Ok(basis
        .into_iter()
        .map(|v| {
            let comps = (0..q.n())
                .map(|x| {
                    let off = sys.block_offset(x);
                    let (r, c) = (n.dims[x], m.dims[x]);
                    Matrix::from_fn(m.field, r, c, |i, j| v[off + i * c + j])
                })
                .collect();
            Morphism { source: m.clone(), target: n.clone(), comps }
        })
        .collect())
}

/// Interval decomposition via the Auslander–Reiten mesh formula.
///
/// For an indecomposable `X` with almost split sequence
/// `0 → τX → E → X → 0`, the multiplicity of `X` in `M` is
/// `hom(M,X) − hom(M,E) + hom(M,τX)`; for projective `X` the middle
/// term is `rad X` and there is no `τX`.
pub fn decompose(m: &Representation) -> Barcode {
    let g = ArQuiver::shared(m.quiver());
    let mut homs: BTreeMap<Interval, i64> = BTreeMap::new();
    for &x in g.vertices() {
        let xi = Representation::interval(m.quiver(), m.field, x).expect("vertex of the AR quiver");
        homs.insert(x, hom_dim(m, &xi).expect("same quiver") as i64);
    }
    let mut out = Barcode::new();
    for &x in g.vertices() {
        let mut mult = homs[&x];
        for e in g.predecessors(x) {
            mult -= homs[&e];
        }
        if let Some(tx) = g.tau(x) {
            mult += homs[&tx];
        }
        assert!(mult >= 0, "negative mesh multiplicity for {x}");
        out.add(x, mult as usize);
    }
    out
}

/// Rank of the canonical map from the limit to the colimit of `M` restricted to `[b, d]`.
pub fn generalized_rank(m: &Representation, b: usize, d: usize) -> usize {
    if b < 1 || d > m.n() || b > d {
        return 0;
    }
    let q = m.quiver();
    let f = m.field;
    let mut offsets = Vec::new();
    let mut total = 0;
    for x in b..=d {
        offsets.push(total);
        total += m.dim(x);
    }
    let off = |x: usize| offsets[x - b];
    // compatible families: M_α v_s = v_t for arrows inside [b, d]
    let mut constraint = Matrix::zeros(f, 0, total);
    // relations ι_s(e) − ι_t(M_α e) spanning the kernel of ⊕ M_x → colim
    let mut relations = Matrix::zeros(f, total, 0);
    for k in (b - 1)..(d - 1) {
        let (s, t) = q.arrow_ends(k);
        let (s1, t1) = (s + 1, t + 1);
        let ma = m.map(k);
        let mut c = Matrix::zeros(f, m.dim(t1), total);
        c.paste(0, off(s1), ma);
        c.paste(0, off(t1), &Matrix::identity(f, m.dim(t1)).scale(f.neg(1)));
        constraint = constraint.vstack(&c);
        let mut r = Matrix::zeros(f, total, m.dim(s1));
        r.paste(off(s1), 0, &Matrix::identity(f, m.dim(s1)));
        r.paste(off(t1), 0, &ma.scale(f.neg(1)));
        relations = relations.hstack(&r);
    }
    let lim = constraint.nullspace_basis();
    let db = m.dim(b);
    let images = Matrix::from_fn(f, total, lim.len(), |r, c| if r < db { lim[c][r] } else { 0 });
    relations.hstack(&images).rank() - relations.rank()
}

/// Interval decomposition by inclusion–exclusion over generalized ranks.
pub fn barcode_from_rank_invariant(m: &Representation) -> Barcode {
    let n = m.n();
    let mut r = vec![vec![0i64; n + 2]; n + 2];
    for b in 1..=n {
        for d in b..=n {
            r[b][d] = generalized_rank(m, b, d) as i64;
        }
    }
    let get = |b: usize, d: usize| if b >= 1 && d <= n && b <= d { r[b][d] } else { 0 };
    let mut out = Barcode::new();
    for b in 1..=n {
        for d in b..=n {
            let mult = get(b, d) - get(b - 1, d) - get(b, d + 1) + get(b - 1, d + 1);
            assert!(mult >= 0, "negative rank multiplicity at [{b},{d}]");
            out.add(Interval { b, d }, mult as usize);
        }
    }
    out
}

/// A random barcode with at most `max_bars` bars over A_n.
pub fn random_barcode(rng: &mut impl Rng, n: usize, max_bars: usize) -> Barcode {
    let k = rng.gen_range(0..=max_bars);
    Barcode::from_intervals((0..k).map(|_| {
        let b = rng.gen_range(1..=n);
        let d = rng.gen_range(b..=n);
        Interval { b, d }
    }))
}
