//! Transport of intervals of A_n(a) to the derived category of equioriented A_n
//! along the tilting module `T` of the section realizing `a`, and the
//! distance `d^a` it induces.
//!
//! For an interval `L` of equioriented A_n exactly one of `Hom(T, L)` and
//! `Ext¹(T, L)` is nonzero, and it is an interval `J` of A_n(a). The table
//! records `J ↦ (L, degree)` with degree 0 for the Hom side and 1 for the
//! Ext side; `J` in degree `k` corresponds to `L` in degree `k − degree`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::ar_quiver::{tilting_for_orientation, TiltingModule};
use crate::block_sheaf::{mu1, mu2, ZZKind};
use crate::derived::{derived_bottleneck, derived_interleaving_distance_graded, random_complex_realizing, GradedBarcode};
use crate::distances::{search_distance, ExtRational, OracleBudget};
use crate::error::{invalid, Error, Result};
use crate::field_linear::{Matrix, PrimeField, SolutionSet};
use crate::quiver_rep::{decompose, hom_basis, Barcode, Direction, Interval, Morphism, Orientation, QuiverAn, Representation};

/// The two halves of the torsion pair on A_n(a)-modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// Images `Ext¹(T, L)` of the torsion-free part.
    X,
    /// Images `Hom(T, L)` of the torsion part.
    Y,
}

/// The torsion pair `(T, F)` on equioriented A_n-modules cut out by `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SourceSide {
    T,
    F,
}

/// Refinement of the sides by the kind of zigzag interval (alternating orientations only).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Refined {
    Yc,
    Yco,
    Xo,
    Xoc,
}

impl fmt::Display for Refined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Refined::Yc => "Y_c",
            Refined::Yco => "Y_co",
            Refined::Xo => "X_o",
            Refined::Xoc => "X_oc",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionClass {
    pub side: Side,
    pub refined: Option<Refined>,
}

impl fmt::Display for TorsionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.refined, self.side) {
            (Some(r), _) => write!(f, "{r}"),
            (None, Side::X) => f.write_str("X"),
            (None, Side::Y) => f.write_str("Y"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransportEntry {
    /// Interval of A_n(a).
    pub source: Interval,
    /// Interval of equioriented A_n.
    pub target: Interval,
    pub degree: u8,
}

impl TransportEntry {
    pub fn side(&self) -> Side {
        if self.degree == 0 {
            Side::Y
        } else {
            Side::X
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportTable {
    orientation: Orientation,
    tilting: TiltingModule,
    entries: BTreeMap<Interval, TransportEntry>,
}

impl TransportTable {
    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn n(&self) -> usize {
        self.orientation.num_arrows() + 1
    }

    pub fn tilting(&self) -> &TiltingModule {
        &self.tilting
    }

    pub fn entries(&self) -> impl Iterator<Item = &TransportEntry> + '_ {
        self.entries.values()
    }

    pub fn get(&self, j: Interval) -> Result<TransportEntry> {
        self.entries
            .get(&j)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("{j} is not an interval of A_{}", self.n())))
    }

    /// Source side of `L` over equioriented A_n, found by inverting the table.
    pub fn source_side(&self, l: Interval) -> Result<SourceSide> {
        self.entries
            .values()
            .find(|e| e.target == l)
            .map(|e| if e.degree == 0 { SourceSide::T } else { SourceSide::F })
            .ok_or_else(|| Error::InvalidInput(format!("{l} is not an interval of A_{}", self.n())))
    }

    /// CSV with columns `source_interval,target_interval,degree,torsion_tag`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["source_interval", "target_interval", "degree", "torsion_tag"]).expect("in-memory write");
        for e in self.entries.values() {
            let tag = TorsionClass { side: e.side(), refined: refine(e.source, e.side(), &self.orientation).ok() };
            w.write_record([e.source.to_string(), e.target.to_string(), e.degree.to_string(), tag.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

fn coordinates(basis: &Matrix, v: &[u32]) -> Vec<u32> {
    match basis.solve(v) {
        SolutionSet::Affine { particular, .. } => particular,
        SolutionSet::Inconsistent => unreachable!("vector outside the span of a Hom basis"),
    }
}

fn basis_matrix(field: PrimeField, basis: &[Morphism], len: usize) -> Matrix {
    let cols: Vec<Vec<u32>> = basis.iter().map(Morphism::to_vector).collect();
    Matrix::from_columns(field, len, &cols)
}

fn summand_reps(t: &TiltingModule, field: PrimeField) -> Result<Vec<Representation>> {
    let q = t.source_quiver();
    t.summands().iter().map(|&x| Representation::interval(&q, field, x)).collect()
}

/// The canonical map between consecutive summands along arrow `i` of A_n(a),
/// oriented as `X_{i+1} → X_i` for forward arrows and `X_i → X_{i+1}` for backward ones.
fn section_map(xs: &[Representation], a: &Orientation, i: usize) -> Result<Morphism> {
    let (src, dst) = match a.arrows()[i] {
        Direction::Forward => (&xs[i + 1], &xs[i]),
        Direction::Backward => (&xs[i], &xs[i + 1]),
    };
    hom_basis(src, dst)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Precondition("consecutive summands have no nonzero map".into()))
}

fn check_source(t: &TiltingModule, l: &Representation) -> Result<()> {
    if *l.quiver() != t.source_quiver() {
        return invalid(format!("expected a representation of equioriented A_{}", t.n()));
    }
    Ok(())
}

/// `Hom(T, L)` as a representation of A_n(a).
pub fn hom_functor_image(t: &TiltingModule, l: &Representation) -> Result<Representation> {
    check_source(t, l)?;
    let a = t.target_orientation().ok_or_else(|| Error::Precondition("tilting module has no target orientation".into()))?;
    let field = l.field();
    let xs = summand_reps(t, field)?;
    let bases: Vec<Vec<Morphism>> = xs.iter().map(|x| hom_basis(x, l)).collect::<Result<_>>()?;
    let lens: Vec<usize> = xs.iter().map(|x| x.dims().iter().zip(l.dims()).map(|(a, b)| a * b).sum()).collect();
    let mats: Vec<Matrix> = bases.iter().zip(&lens).map(|(b, &len)| basis_matrix(field, b, len)).collect();
    let mut maps = Vec::with_capacity(t.n().saturating_sub(1));
    for i in 0..t.n().saturating_sub(1) {
        let g = section_map(&xs, a, i)?;
        // precomposition with g runs from the target of g to its source
        let (from, to) = match a.arrows()[i] {
            Direction::Forward => (i, i + 1),
            Direction::Backward => (i + 1, i),
        };
        let cols: Vec<Vec<u32>> =
            bases[from].iter().map(|h| Ok(coordinates(&mats[to], &g.then(h)?.to_vector()))).collect::<Result<_>>()?;
        maps.push(Matrix::from_columns(field, bases[to].len(), &cols));
    }
    let q = QuiverAn::new(t.n(), a.clone())?;
    Representation::new(q, field, bases.iter().map(Vec::len).collect(), maps)
}

/// `Ext¹(I[b,d], L) = L_{d+1} / im φ_L(b, d+1)` with its projection and a section.
struct ExtSpace {
    proj: Matrix,
    section: Matrix,
    d: usize,
}

fn ext_space(l: &Representation, x: Interval) -> Result<Option<ExtSpace>> {
    if x.d == l.n() {
        return Ok(None);
    }
    let field = l.field();
    let phi = l.path_map(x.b, x.d + 1)?;
    let proj = phi.cokernel_projection();
    let section = if proj.rows() == 0 {
        Matrix::zeros(field, l.dim(x.d + 1), 0)
    } else {
        proj.solve_matrix(&Matrix::identity(field, proj.rows())).expect("projection is surjective")
    };
    Ok(Some(ExtSpace { proj, section, d: x.d }))
}

/// `Ext¹(T, L)` as a representation of A_n(a).
pub fn ext_functor_image(t: &TiltingModule, l: &Representation) -> Result<Representation> {
    check_source(t, l)?;
    let a = t.target_orientation().ok_or_else(|| Error::Precondition("tilting module has no target orientation".into()))?;
    let field = l.field();
    let spaces: Vec<Option<ExtSpace>> = t.summands().iter().map(|&x| ext_space(l, x)).collect::<Result<_>>()?;
    let dim = |s: &Option<ExtSpace>| s.as_ref().map_or(0, |s| s.proj.rows());
    let mut maps = Vec::with_capacity(t.n().saturating_sub(1));
    for i in 0..t.n().saturating_sub(1) {
        // g: X' → X induces Ext¹(X, L) → Ext¹(X', L) through φ_L(d+1, d'+1)
        let (x, xp) = match a.arrows()[i] {
            Direction::Forward => (i, i + 1),
            Direction::Backward => (i + 1, i),
        };
        let m = match (&spaces[x], &spaces[xp]) {
            (Some(s), Some(sp)) => sp.proj.mul(&l.path_map(s.d + 1, sp.d + 1)?).mul(&s.section),
            _ => Matrix::zeros(field, dim(&spaces[xp]), dim(&spaces[x])),
        };
        maps.push(m);
    }
    let q = QuiverAn::new(t.n(), a.clone())?;
    Representation::new(q, field, spaces.iter().map(dim).collect(), maps)
}

fn single_interval(r: &Representation) -> Option<Interval> {
    let b = decompose(r);
    match b.expanded().as_slice() {
        [j] => Some(*j),
        _ => None,
    }
}

pub fn build_transport_table(a: &Orientation) -> Result<TransportTable> {
    let tilting = tilting_for_orientation(a)?;
    let q = tilting.source_quiver();
    let field = PrimeField::gf2();
    let mut entries = BTreeMap::new();
    for l in q.intervals() {
        let lr = Representation::interval(&q, field, l)?;
        let h = hom_functor_image(&tilting, &lr)?;
        let e = ext_functor_image(&tilting, &lr)?;
        let (img, degree) = match (h.is_zero(), e.is_zero()) {
            (false, true) => (h, 0),
            (true, false) => (e, 1),
            _ => return Err(Error::Precondition(format!("{l} is not split by the torsion pair of T"))),
        };
        let j = single_interval(&img).ok_or_else(|| Error::Precondition(format!("the image of {l} is decomposable")))?;
        if entries.insert(j, TransportEntry { source: j, target: l, degree }).is_some() {
            return Err(Error::Precondition(format!("{j} is hit twice")));
        }
    }
    Ok(TransportTable { orientation: a.clone(), tilting, entries })
}

/// Memoized [`build_transport_table`].
pub fn transport_table(a: &Orientation) -> Result<Arc<TransportTable>> {
    static CACHE: OnceLock<Mutex<HashMap<Orientation, Arc<TransportTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("transport cache poisoned").get(a) {
        return Ok(t.clone());
    }
    let t = Arc::new(build_transport_table(a)?);
    Ok(cache.lock().expect("transport cache poisoned").entry(a.clone()).or_insert(t).clone())
}

fn refine(j: Interval, side: Side, a: &Orientation) -> Result<Refined> {
    let z = if a.is_z1() {
        mu1(j, a)?
    } else if a.is_z2() {
        mu2(j, a)?
    } else {
        return Err(Error::Unsupported("refined classes need an alternating orientation".into()));
    };
    match (side, z.kind) {
        (Side::Y, ZZKind::Closed) => Ok(Refined::Yc),
        (Side::Y, ZZKind::RightOpen) => Ok(Refined::Yco),
        (Side::X, ZZKind::Open) => Ok(Refined::Xo),
        (Side::X, ZZKind::LeftOpen) => Ok(Refined::Xoc),
        _ => Err(Error::Precondition(format!("{j} lies in {side:?} but its zigzag kind is {:?}", z.kind))),
    }
}

/// The side of the interval `j` of A_n(a), refined when `a` is alternating and the kinds agree.
pub fn torsion_class_of(j: Interval, a: &Orientation) -> Result<TorsionClass> {
    let side = transport_table(a)?.get(j)?.side();
    Ok(TorsionClass { side, refined: refine(j, side, a).ok() })
}

pub fn source_class_of(l: Interval, a: &Orientation) -> Result<SourceSide> {
    transport_table(a)?.source_side(l)
}

/// The derived barcode over equioriented A_n of a module over A_n(a).
pub fn corresponding_barcode(b: &Barcode, a: &Orientation) -> Result<GradedBarcode> {
    corresponding_graded(&GradedBarcode::stalk(b.clone(), 0), a)
}

/// Degree-wise transport: `J` in degree `k` becomes `L` in degree `k − degree`.
pub fn corresponding_graded(g: &GradedBarcode, a: &Orientation) -> Result<GradedBarcode> {
    let table = transport_table(a)?;
    let mut out = GradedBarcode::new();
    for (k, b) in g.iter() {
        for (j, mult) in b.iter() {
            let e = table.get(j)?;
            out.add(k - e.degree as i64, e.target, mult);
        }
    }
    Ok(out)
}

/// A complex over equioriented A_n realizing the transport of `m`, with random conjugation.
pub fn corresponding_complex(
    rng: &mut impl Rng,
    m: &Representation,
    field: PrimeField,
) -> Result<crate::derived::CochainComplex> {
    let g = corresponding_barcode(&decompose(m), m.quiver().orientation())?;
    random_complex_realizing(rng, &g, m.n(), field)
}

/// `d^a` on barcodes of A_n(a), through the bottleneck distance of the transports.
pub fn induced_bottleneck(x: &Barcode, y: &Barcode, a: &Orientation) -> Result<ExtRational> {
    Ok(derived_bottleneck(&corresponding_barcode(x, a)?, &corresponding_barcode(y, a)?))
}

/// `d^a(M, N)`: the derived interleaving distance of the corresponding complexes.
pub fn induced_distance(m: &Representation, n: &Representation) -> Result<ExtRational> {
    m.same_category(n)?;
    let a = m.quiver().orientation();
    let (gm, gn) = (corresponding_barcode(&decompose(m), a)?, corresponding_barcode(&decompose(n), a)?);
    derived_interleaving_distance_graded(&gm, &gn, m.n(), m.field())
}

/// `d^a` computed degree by degree with the interleaving search on realized modules.
pub fn induced_distance_by_search(m: &Representation, n: &Representation, budget: &OracleBudget) -> Result<ExtRational> {
    m.same_category(n)?;
    let a = m.quiver().orientation();
    let (gm, gn) = (corresponding_barcode(&decompose(m), a)?, corresponding_barcode(&decompose(n), a)?);
    let q = QuiverAn::equioriented(m.n());
    let field = m.field();
    let mut best = ExtRational::ZERO;
    for k in gm.degrees().into_iter().chain(gn.degrees()) {
        let rm = Representation::from_barcode(&q, field, &gm.get(k))?;
        let rn = Representation::from_barcode(&q, field, &gn.get(k))?;
        best = best.max(search_distance(&rm, &rn, budget)?.into());
    }
    Ok(best)
}

/// Closed form of the transport for A_n(z1) with `n` odd, from the parity of the ends.
pub fn z1_endpoint_formula(j: Interval, n: usize) -> Result<TransportEntry> {
    if n % 2 == 0 || j.b < 1 || j.b > j.d || j.d > n {
        return invalid(format!("{j} is not an interval of A_{n} with n odd"));
    }
    let (s, t) = (j.b, j.d);
    let (target, degree) = match (s % 2, t % 2) {
        (1, 1) => (Interval { b: (s + 1) / 2, d: n - (t + 1) / 2 + 1 }, 0),
        (1, 0) => (Interval { b: (s + 1) / 2, d: t / 2 }, 0),
        (0, 1) => (Interval { b: n - (t + 1) / 2 + 2, d: n - s / 2 + 1 }, 1),
        _ => (Interval { b: (t + 2) / 2, d: n - s / 2 + 1 }, 1),
    };
    Ok(TransportEntry { source: j, target, degree })
}
