//! The infinite zigzag poset ZZ, its four interval kinds, the block
//! distance, the embeddings of A_n(z1), A_n(z2) and A_n(a) into zigzags,
//! and the translation to constructible sheaves on the real line.
//!
//! ZZ has vertices `(i, i)` and `(i+1, i)`. We index them linearly by
//! `(i, i) ↦ 2i` and `(i+1, i) ↦ 2i+1`, so an interval is a segment of
//! integers and its kind is read off the parities of the ends.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::derived::{derived_interleaving_distance_graded, GradedBarcode};
use crate::distances::{bottleneck_matching, ExtRational};
use crate::error::{invalid, Error, Result};
use crate::field_linear::{Matrix, PrimeField};
use crate::quiver_rep::{decompose, Barcode, Direction, Interval, Orientation, QuiverAn, Representation};
use crate::tilting_transport::{induced_bottleneck, torsion_class_of, Refined, TorsionClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZZKind {
    Closed,
    RightOpen,
    LeftOpen,
    Open,
}

impl ZZKind {
    pub const ALL: [ZZKind; 4] = [ZZKind::Closed, ZZKind::RightOpen, ZZKind::LeftOpen, ZZKind::Open];

    pub fn is_half_open(self) -> bool {
        matches!(self, ZZKind::RightOpen | ZZKind::LeftOpen)
    }

    fn left_closed(self) -> bool {
        matches!(self, ZZKind::Closed | ZZKind::RightOpen)
    }

    fn right_closed(self) -> bool {
        matches!(self, ZZKind::Closed | ZZKind::LeftOpen)
    }

    fn from_ends(left_closed: bool, right_closed: bool) -> ZZKind {
        match (left_closed, right_closed) {
            (true, true) => ZZKind::Closed,
            (true, false) => ZZKind::RightOpen,
            (false, true) => ZZKind::LeftOpen,
            (false, false) => ZZKind::Open,
        }
    }
}

/// An interval `⟨b, d⟩` of ZZ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZZInterval {
    pub b: i64,
    pub d: i64,
    pub kind: ZZKind,
}

impl ZZInterval {
    /// Requires a nonempty interval: `b ≤ d` when closed, `b < d` otherwise.
    pub fn new(b: i64, d: i64, kind: ZZKind) -> Result<Self> {
        let ok = if kind == ZZKind::Closed { b <= d } else { b < d };
        if !ok {
            return invalid(format!("empty ZZ interval with ends {b}, {d} and kind {kind:?}"));
        }
        Ok(ZZInterval { b, d, kind })
    }

    /// The interval spanning linear positions `lo..=hi`.
    pub fn from_linear(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return invalid(format!("empty segment {lo}..={hi}"));
        }
        let left_closed = lo.rem_euclid(2) == 0;
        let right_closed = hi.rem_euclid(2) == 0;
        let b = if left_closed { lo / 2 } else { (lo - 1).div_euclid(2) };
        let d = if right_closed { hi / 2 } else { (hi + 1).div_euclid(2) };
        ZZInterval::new(b, d, ZZKind::from_ends(left_closed, right_closed))
    }

    /// Linear positions of the first and last vertex.
    pub fn linear(&self) -> (i64, i64) {
        let lo = if self.kind.left_closed() { 2 * self.b } else { 2 * self.b + 1 };
        let hi = if self.kind.right_closed() { 2 * self.d } else { 2 * self.d - 1 };
        (lo, hi)
    }

    pub fn len(&self) -> u64 {
        self.d.abs_diff(self.b)
    }

    /// `d_BL(I, 0)`: infinite when closed, `|d−b|/2` when half-open, `|d−b|/4` when open.
    pub fn deletion_cost(&self) -> ExtRational {
        match self.kind {
            ZZKind::Closed => ExtRational::Infinite,
            ZZKind::RightOpen | ZZKind::LeftOpen => ExtRational::new(self.len(), 2),
            ZZKind::Open => ExtRational::new(self.len(), 4),
        }
    }
}

impl fmt::Display for ZZInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.kind.left_closed() { '[' } else { '(' };
        let r = if self.kind.right_closed() { ']' } else { ')' };
        write!(f, "{l}{},{}{r}", self.b, self.d)
    }
}

/// Block shapes of the 2D extension of a ZZ interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockType {
    BbMinus,
    DbPlus,
    Hb,
    Vb,
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockType::BbMinus => "bb-",
            BlockType::DbPlus => "db+",
            BlockType::Hb => "hb",
            BlockType::Vb => "vb",
        })
    }
}

pub fn block_type_of(z: ZZInterval) -> BlockType {
    match z.kind {
        ZZKind::Closed => BlockType::BbMinus,
        ZZKind::Open => BlockType::DbPlus,
        ZZKind::RightOpen => BlockType::Hb,
        ZZKind::LeftOpen => BlockType::Vb,
    }
}

/// `μ1`: vertex `2i−1 ↦ (i, i)`, `2i ↦ (i+1, i)`.
pub fn mu1(i: Interval, orientation: &Orientation) -> Result<ZZInterval> {
    if !orientation.is_z1() {
        return invalid(format!("μ1 needs the orientation z1, got {orientation}"));
    }
    ZZInterval::from_linear(i.b as i64 + 1, i.d as i64 + 1)
}

/// `μ2`: vertex `2i ↦ (i, i)`, `2i−1 ↦ (i, i−1)`.
pub fn mu2(i: Interval, orientation: &Orientation) -> Result<ZZInterval> {
    if !orientation.is_z2() {
        return invalid(format!("μ2 needs the orientation z2, got {orientation}"));
    }
    ZZInterval::from_linear(i.b as i64, i.d as i64)
}

/// Exact block distance between two ZZ intervals (or zero).
pub fn d_bl_intervals(x: Option<ZZInterval>, y: Option<ZZInterval>) -> ExtRational {
    match (x, y) {
        (None, None) => ExtRational::ZERO,
        (Some(z), None) | (None, Some(z)) => z.deletion_cost(),
        (Some(z), Some(w)) => {
            let del = z.deletion_cost().max(w.deletion_cost());
            if z.kind == w.kind {
                let shift = z.b.abs_diff(w.b).max(z.d.abs_diff(w.d));
                ExtRational::integer(shift).min(del)
            } else {
                del
            }
        }
    }
}

/// Block distance of two finite multisets as a bottleneck over pair and deletion costs.
pub fn d_bl(x: &[ZZInterval], y: &[ZZInterval]) -> ExtRational {
    let ldel: Vec<ExtRational> = x.iter().map(ZZInterval::deletion_cost).collect();
    let rdel: Vec<ExtRational> = y.iter().map(ZZInterval::deletion_cost).collect();
    bottleneck_matching(&ldel, &rdel, |l, r| d_bl_intervals(Some(x[l]), Some(y[r])))
        .map(|(c, _)| c)
        .unwrap_or(ExtRational::ZERO)
}

/// Bars of a representation of A_n(z1) as ZZ intervals.
pub fn zz_bars_z1(m: &Representation) -> Result<Vec<ZZInterval>> {
    let o = m.quiver().orientation().clone();
    decompose(m).expanded().into_iter().map(|i| mu1(i, &o)).collect()
}

/// The padding `ι_a`: positions of each vertex of A_n(a) inside A_m(z1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagPadding {
    pub m: usize,
    /// `spans[i-1] = (first, last)` positions occupied by vertex `i`.
    pub spans: Vec<(usize, usize)>,
}

impl ZigzagPadding {
    pub fn new(a: &Orientation) -> Self {
        let z1_dir = |p: usize| if p % 2 == 1 { Direction::Backward } else { Direction::Forward };
        let mut spans = vec![(1, 1)];
        let mut p = 1;
        for &dir in a.arrows() {
            if dir != z1_dir(p) {
                // identity arrow in the required direction, then the real arrow
                p += 1;
                spans.last_mut().expect("nonempty").1 = p;
            }
            p += 1;
            spans.push((p, p));
        }
        ZigzagPadding { m: p, spans }
    }

    pub fn interval(&self, i: Interval) -> Interval {
        Interval { b: self.spans[i.b - 1].0, d: self.spans[i.d - 1].1 }
    }

    /// The padded representation `M̃` over A_m(z1).
    pub fn apply(&self, m: &Representation) -> Result<Representation> {
        let field = m.field();
        let q = QuiverAn::z1(self.m);
        let mut dims = vec![0; self.m];
        for (x, &(lo, hi)) in self.spans.iter().enumerate() {
            for p in lo..=hi {
                dims[p - 1] = m.dims()[x];
            }
        }
        let mut maps = Vec::with_capacity(self.m.saturating_sub(1));
        for (x, &(lo, hi)) in self.spans.iter().enumerate() {
            for _ in lo..hi {
                maps.push(Matrix::identity(field, m.dims()[x]));
            }
            if x + 1 < self.spans.len() {
                maps.push(m.maps()[x].clone());
            }
        }
        Representation::new(q, field, dims, maps)
    }
}

pub fn iota_a(m: &Representation) -> Result<Representation> {
    ZigzagPadding::new(m.quiver().orientation()).apply(m)
}

/// `d_BL^a(M, N) = d_BL(μ̃1 ι_a M, μ̃1 ι_a N)`.
pub fn d_bl_a(m: &Representation, n: &Representation) -> Result<ExtRational> {
    m.same_category(n)?;
    Ok(d_bl(&zz_bars_z1(&iota_a(m)?)?, &zz_bars_z1(&iota_a(n)?)?))
}

/// `d_BL^a` on barcodes of A_n(a), padding each bar directly.
pub fn d_bl_a_barcodes(x: &Barcode, y: &Barcode, a: &Orientation) -> Result<ExtRational> {
    let pad = ZigzagPadding::new(a);
    let z1 = Orientation::z1(pad.m);
    let bars = |b: &Barcode| -> Result<Vec<ZZInterval>> {
        b.expanded()
            .into_iter()
            .map(|i| {
                if i.d > a.num_arrows() + 1 {
                    return invalid(format!("{i} does not fit on A_{}", a.num_arrows() + 1));
                }
                mu1(pad.interval(i), &z1)
            })
            .collect()
    };
    Ok(d_bl(&bars(x)?, &bars(y)?))
}

/// An interval of the real line with integer ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SheafBar {
    pub lo: i64,
    pub hi: i64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl SheafBar {
    pub fn new(lo: i64, hi: i64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        let ok = if lo_closed && hi_closed { lo <= hi } else { lo < hi };
        if !ok {
            return invalid(format!("empty real interval with ends {lo}, {hi}"));
        }
        Ok(SheafBar { lo, hi, lo_closed, hi_closed })
    }

    pub fn is_open(&self) -> bool {
        !self.lo_closed && !self.hi_closed
    }
}

impl fmt::Display for SheafBar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{},{}{r}", self.lo, self.hi)
    }
}

/// A sheaf on ℝ constant off the integers, recorded by its interval summands.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SheafObject {
    pub bars: Vec<SheafBar>,
}

impl SheafObject {
    pub fn new(mut bars: Vec<SheafBar>) -> Result<Self> {
        for b in &bars {
            SheafBar::new(b.lo, b.hi, b.lo_closed, b.hi_closed)?;
        }
        bars.sort();
        Ok(SheafObject { bars })
    }

    pub fn has_open_summand(&self) -> bool {
        self.bars.iter().any(SheafBar::is_open)
    }
}

/// Θ: a ZZ interval `⟨b, d⟩` becomes the real interval with the same ends and end types.
pub fn theta(x: &[ZZInterval]) -> SheafObject {
    let mut bars: Vec<SheafBar> = x
        .iter()
        .map(|z| SheafBar { lo: z.b, hi: z.d, lo_closed: z.kind.left_closed(), hi_closed: z.kind.right_closed() })
        .collect();
    bars.sort();
    SheafObject { bars }
}

pub fn theta_inverse(f: &SheafObject) -> Result<Vec<ZZInterval>> {
    let mut out: Vec<ZZInterval> = f
        .bars
        .iter()
        .map(|b| ZZInterval::new(b.lo, b.hi, ZZKind::from_ends(b.lo_closed, b.hi_closed)))
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

/// The non-derived convolution distance and whether an open summand is present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvolutionDistance {
    pub value: ExtRational,
    /// Set when some summand is open, where the derived convolution distance may be larger.
    pub open_summand: bool,
}

pub fn d_c_nd(f: &SheafObject, g: &SheafObject) -> Result<ConvolutionDistance> {
    let value = d_bl(&theta_inverse(f)?, &theta_inverse(g)?);
    Ok(ConvolutionDistance { value, open_summand: f.has_open_summand() || g.has_open_summand() })
}

/// A graded object of Sh_{m,+}: bars `[a, c)` with `1 ≤ a < c ≤ m+1` in each degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShmPlus {
    pub m: usize,
    pub degrees: BTreeMap<i64, SheafObject>,
}

impl ShmPlus {
    pub fn new(m: usize, degrees: BTreeMap<i64, SheafObject>) -> Result<Self> {
        let s = ShmPlus { m, degrees };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let top = self.m as i64 + 1;
        for (i, obj) in &self.degrees {
            for b in &obj.bars {
                if !(b.lo_closed && !b.hi_closed && 1 <= b.lo && b.lo < b.hi && b.hi <= top) {
                    return Err(Error::InvalidInput(format!(
                        "bar {b} in degree {i} is not of the form [a,c) with 1 ≤ a < c ≤ {top}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Θ′: `I[b, d][−i]` over A_m becomes `[b, d+1)` in degree `i`.
pub fn theta_prime(g: &GradedBarcode, m: usize) -> Result<ShmPlus> {
    let mut degrees = BTreeMap::new();
    for (i, b) in g.iter() {
        if b.max_vertex() > m {
            return invalid(format!("degree {i} has bars beyond vertex {m}"));
        }
        let bars = b
            .expanded()
            .into_iter()
            .map(|x| SheafBar { lo: x.b as i64, hi: x.d as i64 + 1, lo_closed: true, hi_closed: false })
            .collect();
        degrees.insert(i, SheafObject::new(bars)?);
    }
    ShmPlus::new(m, degrees)
}

pub fn theta_prime_inverse(s: &ShmPlus) -> Result<GradedBarcode> {
    s.validate()?;
    let mut g = GradedBarcode::new();
    for (&i, obj) in &s.degrees {
        for b in &obj.bars {
            g.add(i, Interval { b: b.lo as usize, d: (b.hi - 1) as usize }, 1);
        }
    }
    Ok(g)
}

/// `d_{C,m,+}` through the derived interleaving distance of Θ′-preimages over A_m.
pub fn d_c_m_plus(f: &ShmPlus, g: &ShmPlus) -> Result<ExtRational> {
    if f.m != g.m {
        return invalid(format!("objects live on different windows: m = {} and m = {}", f.m, g.m));
    }
    derived_interleaving_distance_graded(&theta_prime_inverse(f)?, &theta_prime_inverse(g)?, f.m.max(1), PrimeField::gf2())
}

/// One evaluated pair of the comparison between `d^{z1}` and `d_BL`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub x: Interval,
    /// `None` stands for the zero module.
    pub y: Option<Interval>,
    pub class_x: TorsionClass,
    pub class_y: Option<TorsionClass>,
    pub d_zz: ExtRational,
    pub d_bl: ExtRational,
}

impl ComparisonRow {
    /// Ordering of `d_BL` relative to `d^{z1}`.
    pub fn relation(&self) -> Ordering {
        self.d_bl.cmp(&self.d_zz)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub n: usize,
    pub rows: Vec<ComparisonRow>,
    /// Violated inequality with the offending pair.
    pub violations: Vec<String>,
    /// Pairs `x ∈ X_oc`, `y ∈ X_o` with `d_BL > d^{z1}`, and those with `d_BL < d^{z1}`.
    pub xoc_xo_bl_greater: Vec<(Interval, Interval)>,
    pub xoc_xo_bl_less: Vec<(Interval, Interval)>,
}

impl ComparisonReport {
    pub fn incomparable_cell_witnessed(&self) -> bool {
        !self.xoc_xo_bl_greater.is_empty() && !self.xoc_xo_bl_less.is_empty()
    }

    pub fn row(&self, x: Interval, y: Option<Interval>) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.x == x && r.y == y)
    }

    /// CSV with columns `pair,class1,class2,d_zz,d_bl,relation`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["pair", "class1", "class2", "d_zz", "d_bl", "relation"]).expect("in-memory write");
        for r in &self.rows {
            let y = r.y.map(|y| y.to_string()).unwrap_or_else(|| "0".into());
            let c2 = r.class_y.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
            let rel = match r.relation() {
                Ordering::Less => "bl<zz",
                Ordering::Equal => "bl=zz",
                Ordering::Greater => "bl>zz",
            };
            w.write_record([
                format!("({},{y})", r.x),
                r.class_x.to_string(),
                c2,
                r.d_zz.to_string(),
                r.d_bl.to_string(),
                rel.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

/// Evaluates `d^{z1}` and `d_BL` on every interval pair of A_n(z1) and checks the four
/// comparison inequalities on their stated class combinations.
pub fn comparison_report(n: usize) -> Result<ComparisonReport> {
    if n % 2 == 0 {
        return invalid(format!("the comparison is stated for odd n, got {n}"));
    }
    let a = Orientation::z1(n);
    let q = QuiverAn::z1(n);
    let ints = q.intervals();
    let classes: BTreeMap<Interval, TorsionClass> =
        ints.iter().map(|&i| Ok((i, torsion_class_of(i, &a)?))).collect::<Result<_>>()?;
    let zz: BTreeMap<Interval, ZZInterval> = ints.iter().map(|&i| Ok((i, mu1(i, &a)?))).collect::<Result<_>>()?;
    let refined = |i: Interval| {
        classes[&i].refined.ok_or_else(|| Error::Precondition(format!("{i} has no refined class")))
    };

    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for &x in &ints {
        let d_zz = induced_bottleneck(&Barcode::from_intervals([x]), &Barcode::new(), &a)?;
        let d_bl0 = d_bl_intervals(Some(zz[&x]), None);
        let cx = refined(x)?;
        match cx {
            Refined::Yc if !(d_zz < d_bl0 && d_bl0 == ExtRational::Infinite) => {
                violations.push(format!("(2) fails at ({x}, 0): d_zz = {d_zz}, d_bl = {d_bl0}"))
            }
            Refined::Yco | Refined::Xo | Refined::Xoc if d_bl0 > d_zz => {
                violations.push(format!("(1) fails at ({x}, 0): d_bl = {d_bl0} > d_zz = {d_zz}"))
            }
            _ => {}
        }
        rows.push(ComparisonRow { x, y: None, class_x: classes[&x], class_y: None, d_zz, d_bl: d_bl0 });
    }

    let mut greater = Vec::new();
    let mut less = Vec::new();
    for &x in &ints {
        for &y in &ints {
            let d_zz = induced_bottleneck(&Barcode::from_intervals([x]), &Barcode::from_intervals([y]), &a)?;
            let d_bl = d_bl_intervals(Some(zz[&x]), Some(zz[&y]));
            let (cx, cy) = (refined(x)?, refined(y)?);
            let same_half = cx == cy && matches!(cx, Refined::Yco | Refined::Xo | Refined::Xoc);
            let mixed = cx == Refined::Yco && matches!(cy, Refined::Xo | Refined::Xoc);
            if (same_half || mixed) && d_bl > d_zz {
                violations.push(format!("(3) fails at ({x}, {y}): d_bl = {d_bl} > d_zz = {d_zz}"));
            }
            if cx == Refined::Yc && d_zz > d_bl {
                violations.push(format!("(4) fails at ({x}, {y}): d_zz = {d_zz} > d_bl = {d_bl}"));
            }
            if cx == Refined::Xoc && cy == Refined::Xo {
                match d_bl.cmp(&d_zz) {
                    Ordering::Greater => greater.push((x, y)),
                    Ordering::Less => less.push((x, y)),
                    Ordering::Equal => {}
                }
            }
            rows.push(ComparisonRow { x, y: Some(y), class_x: classes[&x], class_y: Some(classes[&y]), d_zz, d_bl });
        }
    }
    Ok(ComparisonReport { n, rows, violations, xoc_xo_bl_greater: greater, xoc_xo_bl_less: less })
}

/// The least odd `n ≤ max_n` whose X_oc/X_o cell has pairs with both strict relations.
pub fn smallest_incomparable_n(max_n: usize) -> Result<Option<usize>> {
    for n in (1..=max_n).step_by(2) {
        if comparison_report(n)?.incomparable_cell_witnessed() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn iv(b: usize, d: usize) -> Interval {
        Interval { b, d }
    }

    fn zz(b: i64, d: i64, kind: ZZKind) -> ZZInterval {
        ZZInterval::new(b, d, kind).unwrap()
    }

    #[test]
    fn mu1_examples() {
        let a = Orientation::z1(7);
        assert_eq!(mu1(iv(2, 7), &a).unwrap(), zz(1, 4, ZZKind::LeftOpen));
        assert_eq!(mu1(iv(2, 6), &a).unwrap(), zz(1, 4, ZZKind::Open));
        assert_eq!(mu1(iv(2, 2), &a).unwrap(), zz(1, 2, ZZKind::Open));
        assert_eq!(mu1(iv(1, 1), &a).unwrap(), zz(1, 1, ZZKind::Closed));
        assert!(mu1(iv(1, 1), &Orientation::z2(7)).is_err());
        // the parity table: s = 2b−1 or 2b, t = 2d−1 or 2d−2
        for n in 1..=9 {
            let a = Orientation::z1(n);
            for i in QuiverAn::z1(n).intervals() {
                let z = mu1(i, &a).unwrap();
                let (s, t) = (i.b as i64, i.d as i64);
                let expected = match (s % 2, t % 2) {
                    (1, 1) => zz((s + 1) / 2, (t + 1) / 2, ZZKind::Closed),
                    (1, 0) => zz((s + 1) / 2, (t + 2) / 2, ZZKind::RightOpen),
                    (0, 1) => zz(s / 2, (t + 1) / 2, ZZKind::LeftOpen),
                    _ => zz(s / 2, (t + 2) / 2, ZZKind::Open),
                };
                assert_eq!(z, expected);
                assert!(1 <= z.b && z.d as usize <= n.div_ceil(2) + 1);
            }
        }
    }

    #[test]
    fn mu2_injective() {
        let a = Orientation::z2(4);
        assert_eq!(mu2(iv(2, 2), &a).unwrap(), zz(1, 1, ZZKind::Closed));
        for n in 1..=9 {
            let a = Orientation::z2(n);
            let imgs: std::collections::BTreeSet<_> =
                QuiverAn::z2(n).intervals().into_iter().map(|i| mu2(i, &a).unwrap()).collect();
            assert_eq!(imgs.len(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn block_distances() {
        assert_eq!(d_bl_intervals(Some(zz(1, 3, ZZKind::Closed)), None), ExtRational::Infinite);
        let lo = zz(1, 4, ZZKind::LeftOpen);
        assert_eq!(d_bl_intervals(Some(lo), Some(zz(1, 4, ZZKind::Open))), ExtRational::new(3, 2));
        assert_eq!(d_bl_intervals(Some(lo), Some(zz(1, 2, ZZKind::Open))), ExtRational::new(3, 2));
        assert_eq!(d_bl(&[zz(1, 3, ZZKind::Closed)], &[]), ExtRational::Infinite);
        assert_eq!(d_bl(&[lo], &[zz(1, 4, ZZKind::Open)]), ExtRational::new(3, 2));
        assert_eq!(d_bl(&[lo, lo], &[lo, lo]), ExtRational::ZERO);
        assert_eq!(block_type_of(zz(0, 1, ZZKind::Closed)), BlockType::BbMinus);
        assert_eq!(block_type_of(zz(0, 1, ZZKind::Open)), BlockType::DbPlus);
        assert_eq!(block_type_of(zz(0, 1, ZZKind::RightOpen)), BlockType::Hb);
        assert_eq!(block_type_of(zz(0, 1, ZZKind::LeftOpen)), BlockType::Vb);
        assert_eq!(d_bl_intervals(Some(zz(0, 1, ZZKind::Open)), None), ExtRational::new(1, 4));
    }

    #[test]
    fn block_pseudometric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let random = |rng: &mut ChaCha8Rng| -> Vec<ZZInterval> {
            (0..rng.gen_range(0..4))
                .map(|_| {
                    let lo = rng.gen_range(0..10);
                    ZZInterval::from_linear(lo, lo + rng.gen_range(0..6)).unwrap()
                })
                .collect()
        };
        let mut checked = 0;
        for _ in 0..500 {
            let (x, y, z) = (random(&mut rng), random(&mut rng), random(&mut rng));
            assert_eq!(d_bl(&x, &y), d_bl(&y, &x));
            assert_eq!(d_bl(&x, &x), ExtRational::ZERO);
            let (xy, yz, xz) = (d_bl(&x, &y), d_bl(&y, &z), d_bl(&x, &z));
            if let (Some(a), Some(b), Some(c)) = (xy.as_ratio(), yz.as_ratio(), xz.as_ratio()) {
                assert!(c <= a + b);
                checked += 1;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn padding_examples() {
        let a = Orientation::parse("ffb").unwrap();
        let pad = ZigzagPadding::new(&a);
        assert_eq!(pad.m, 6);
        assert_eq!(pad.spans, vec![(1, 2), (3, 4), (5, 5), (6, 6)]);
        let z = ZigzagPadding::new(&Orientation::z1(5));
        assert_eq!(z.m, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let orient = Orientation::all(n).remove(rng.gen_range(0..1 << (n - 1)));
            let q = QuiverAn::new(n, orient).unwrap();
            let b = crate::quiver_rep::random_barcode(&mut rng, n, 4);
            let m = Representation::from_barcode(&q, PrimeField::gf2(), &b).unwrap();
            let (m, _) = m.random_conjugate(&mut rng);
            let padded = iota_a(&m).unwrap();
            let pad = ZigzagPadding::new(q.orientation());
            let expected = Barcode::from_intervals(b.expanded().into_iter().map(|i| pad.interval(i)));
            assert_eq!(decompose(&padded), expected);
        }
    }

    #[test]
    fn padded_block_values() {
        let f = PrimeField::gf2();
        for n in 2..=6 {
            for a in Orientation::all(n) {
                let q = QuiverAn::new(n, a.clone()).unwrap();
                let zero = Representation::zero(&q, f);
                if a.arrows()[0] == Direction::Forward {
                    let m = Representation::interval(&q, f, iv(1, 1)).unwrap();
                    assert_eq!(d_bl_a(&m, &zero).unwrap(), ExtRational::new(1, 2));
                }
                if n >= 3 && a.arrows()[0] == Direction::Backward && a.arrows()[1] == Direction::Backward {
                    let m = Representation::interval(&q, f, iv(2, 2)).unwrap();
                    assert_eq!(d_bl_a(&m, &zero).unwrap(), ExtRational::new(1, 2));
                }
            }
        }
    }

    #[test]
    fn padded_barcodes_agree_with_padded_modules() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = PrimeField::new(3).unwrap();
        for _ in 0..60 {
            let n = rng.gen_range(1..=6);
            let a = Orientation::all(n).remove(rng.gen_range(0..1 << (n - 1)));
            let q = QuiverAn::new(n, a.clone()).unwrap();
            let (x, y) = (crate::quiver_rep::random_barcode(&mut rng, n, 3), crate::quiver_rep::random_barcode(&mut rng, n, 3));
            let (m, _) = Representation::from_barcode(&q, f, &x).unwrap().random_conjugate(&mut rng);
            let k = Representation::from_barcode(&q, f, &y).unwrap();
            assert_eq!(d_bl_a(&m, &k).unwrap(), d_bl_a_barcodes(&x, &y, &a).unwrap());
        }
    }

    #[test]
    fn theta_round_trip() {
        let mut all = Vec::new();
        for b in -3..3 {
            for len in 0..=5 {
                for kind in ZZKind::ALL {
                    if let Ok(z) = ZZInterval::new(b, b + len, kind) {
                        all.push(z);
                    }
                }
            }
        }
        for z in &all {
            let s = theta(&[*z]);
            assert_eq!(theta_inverse(&s).unwrap(), vec![*z]);
            assert_eq!(s.has_open_summand(), z.kind == ZZKind::Open);
            let (lo, hi) = z.linear();
            assert_eq!(ZZInterval::from_linear(lo, hi).unwrap(), *z);
        }
        assert_eq!(theta(&[]), SheafObject::default());
        assert!(theta_inverse(&SheafObject { bars: vec![SheafBar { lo: 1, hi: 1, lo_closed: false, hi_closed: true }] }).is_err());
    }

    #[test]
    fn convolution_values() {
        let a = theta(&[zz(1, 4, ZZKind::LeftOpen)]);
        let b = theta(&[zz(1, 4, ZZKind::Open)]);
        let c = d_c_nd(&a, &b).unwrap();
        assert_eq!(c.value, ExtRational::new(3, 2));
        assert!(c.open_summand);
        assert!(!d_c_nd(&a, &a).unwrap().open_summand);
        assert_eq!(d_c_nd(&theta(&[zz(1, 3, ZZKind::Closed)]), &SheafObject::default()).unwrap().value, ExtRational::Infinite);

        let g = GradedBarcode::stalk(Barcode::from_intervals([iv(1, 5)]), 0);
        let f = theta_prime(&g, 6).unwrap();
        let z = theta_prime(&GradedBarcode::new(), 6).unwrap();
        assert_eq!(d_c_m_plus(&f, &z).unwrap(), 3.into());
        assert_eq!(d_c_m_plus(&f, &f).unwrap(), ExtRational::ZERO);
        assert_eq!(theta_prime_inverse(&f).unwrap(), g);
        let bad = SheafObject { bars: vec![SheafBar { lo: 1, hi: 3, lo_closed: true, hi_closed: true }] };
        let err = ShmPlus::new(6, [(0, bad)].into()).unwrap_err();
        assert!(err.to_string().contains("[1,3]"));
    }

    #[test]
    fn report_n7_contains_remark_pairs() {
        let r = comparison_report(7).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        let row = r.row(iv(2, 7), Some(iv(2, 6))).unwrap();
        assert_eq!((row.d_bl, row.d_zz), (ExtRational::new(3, 2), 1.into()));
        let row = r.row(iv(2, 7), Some(iv(2, 2))).unwrap();
        assert_eq!((row.d_bl, row.d_zz), (ExtRational::new(3, 2), 3.into()));
        assert!(r.incomparable_cell_witnessed());
        assert!(r.to_csv().lines().count() > 1);
        assert!(comparison_report(4).is_err());
    }

    #[test]
    fn incomparable_cell_first_appears_at_seven() {
        assert_eq!(smallest_incomparable_n(9).unwrap(), Some(7));
        for n in [9, 11] {
            assert!(comparison_report(n).unwrap().violations.is_empty());
        }
    }
}
