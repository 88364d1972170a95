//! Interleaving and bottleneck distances, δ-matchings, induced matchings and
//! the brute-force interleaving oracle.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::field_linear::PrimeField;
use crate::quiver_rep::{decompose, hom_basis, Barcode, Interval, Morphism, Representation};

/// A nonnegative rational or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRational {
    Finite(Ratio<u64>),
    Infinite,
}

impl ExtRational {
    pub const ZERO: ExtRational = ExtRational::Finite(Ratio::new_raw(0, 1));

    pub fn integer(v: u64) -> Self {
        ExtRational::Finite(Ratio::from_integer(v))
    }

    pub fn new(numer: u64, denom: u64) -> Self {
        ExtRational::Finite(Ratio::new(numer, denom))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn as_ratio(&self) -> Option<Ratio<u64>> {
        match self {
            ExtRational::Finite(r) => Some(*r),
            ExtRational::Infinite => None,
        }
    }

    /// The integer value, if finite and integral.
    pub fn as_integer(&self) -> Option<u64> {
        self.as_ratio().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }
}

impl Default for ExtRational {
    fn default() -> Self {
        ExtRational::ZERO
    }
}

impl From<u64> for ExtRational {
    fn from(v: u64) -> Self {
        ExtRational::integer(v)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Infinite => write!(f, "inf"),
            ExtRational::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            ExtRational::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for ExtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ExtRational::Infinite);
        }
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| Error::InvalidInput(format!("{s:?}: {e}")));
        match s.split_once('/') {
            Some((p, q)) => {
                let q = parse(q)?;
                if q == 0 {
                    return invalid("zero denominator");
                }
                Ok(ExtRational::new(parse(p)?, q))
            }
            None => Ok(ExtRational::integer(parse(s)?)),
        }
    }
}

/// A partial matching between the expanded bar lists of two barcodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMatching {
    pub delta: u64,
    pub left: Vec<Interval>,
    pub right: Vec<Interval>,
    /// `(i, j)` matches `left[i]` with `right[j]`.
    pub pairs: Vec<(usize, usize)>,
}

fn long_bar(i: Interval, delta: u64) -> bool {
    (i.d - i.b) as u64 >= 2 * delta
}

fn pair_within(x: Interval, y: Interval, delta: u64) -> bool {
    (x.b.abs_diff(y.b) as u64) <= delta && (x.d.abs_diff(y.d) as u64) <= delta
}

impl DeltaMatching {
    /// Checks injectivity, coverage of all bars with `d − b ≥ 2δ`, and the endpoint bounds.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut used_l = vec![false; self.left.len()];
        let mut used_r = vec![false; self.right.len()];
        for &(i, j) in &self.pairs {
            if i >= self.left.len() || j >= self.right.len() {
                return Err(format!("pair ({i}, {j}) is out of range"));
            }
            if std::mem::replace(&mut used_l[i], true) || std::mem::replace(&mut used_r[j], true) {
                return Err(format!("pair ({i}, {j}) reuses a bar"));
            }
            let (x, y) = (self.left[i], self.right[j]);
            if !pair_within(x, y, self.delta) {
                return Err(format!("{x} and {y} are more than {} apart", self.delta));
            }
        }
        for (side, bars, used) in [("left", &self.left, &used_l), ("right", &self.right, &used_r)] {
            if let Some(k) = (0..bars.len()).find(|&k| !used[k] && long_bar(bars[k], self.delta)) {
                return Err(format!("{side} bar {} is long but unmatched", bars[k]));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

/// Maximum bipartite matching; `adj[l]` lists the right neighbours of `l`.
/// Returns the partner of every left vertex.
pub fn hopcroft_karp(n_right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    const INF: usize = usize::MAX;
    let n_left = adj.len();
    let mut pair_l: Vec<Option<usize>> = vec![None; n_left];
    let mut pair_r: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![INF; n_left];

    loop {
        let mut queue = VecDeque::new();
        for l in 0..n_left {
            if pair_l[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = INF;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                match pair_r[r] {
                    None => found = true,
                    Some(l2) if dist[l2] == INF => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        fn augment(
            l: usize,
            adj: &[Vec<usize>],
            dist: &mut [usize],
            pair_l: &mut [Option<usize>],
            pair_r: &mut [Option<usize>],
        ) -> bool {
            for &r in &adj[l] {
                let ok = match pair_r[r] {
                    None => true,
                    Some(l2) => dist[l2] == dist[l] + 1 && augment(l2, adj, dist, pair_l, pair_r),
                };
                if ok {
                    pair_l[l] = Some(r);
                    pair_r[r] = Some(l);
                    return true;
                }
            }
            dist[l] = usize::MAX;
            false
        }
        for l in 0..n_left {
            if pair_l[l].is_none() {
                augment(l, adj, &mut dist, &mut pair_l, &mut pair_r);
            }
        }
    }
    pair_l
}

/// A matching with all pair costs and all deletion costs of unmatched items at most `threshold`.
pub fn threshold_matching<C: Ord + Copy>(
    left_deletion: &[C],
    right_deletion: &[C],
    pair_cost: impl Fn(usize, usize) -> C,
    threshold: C,
) -> Option<Vec<(usize, usize)>> {
    let (nl, nr) = (left_deletion.len(), right_deletion.len());
    // left side: real left items, then one dummy per right item; symmetric on the right
    let mut adj = vec![Vec::new(); nl + nr];
    for l in 0..nl {
        for r in 0..nr {
            if pair_cost(l, r) <= threshold {
                adj[l].push(r);
            }
        }
        if left_deletion[l] <= threshold {
            adj[l].push(nr + l);
        }
    }
    for r in 0..nr {
        if right_deletion[r] <= threshold {
            adj[nl + r].push(r);
        }
        adj[nl + r].extend((0..nl).map(|l| nr + l));
    }
    let m = hopcroft_karp(nr + nl, &adj);
    if m.iter().any(Option::is_none) {
        return None;
    }
    Some((0..nl).filter_map(|l| m[l].filter(|&r| r < nr).map(|r| (l, r))).collect())
}

/// The least threshold admitting a matching, over the finite candidate set of all costs.
pub fn bottleneck_matching<C: Ord + Copy>(
    left_deletion: &[C],
    right_deletion: &[C],
    pair_cost: impl Fn(usize, usize) -> C,
) -> Option<(C, Vec<(usize, usize)>)> {
    let mut candidates: Vec<C> = left_deletion.iter().chain(right_deletion).copied().collect();
    for l in 0..left_deletion.len() {
        for r in 0..right_deletion.len() {
            candidates.push(pair_cost(l, r));
        }
    }
    candidates.sort();
    candidates.dedup();
    // feasibility is monotone in the threshold
    let (mut lo, mut hi) = (0usize, candidates.len());
    let mut best = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match threshold_matching(left_deletion, right_deletion, &pair_cost, candidates[mid]) {
            Some(p) => {
                best = Some((candidates[mid], p));
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    best
}

/// `d_I(I, 0) = ⌈(d − b + 1)/2⌉`.
pub fn interval_length_cost(i: Interval) -> u64 {
    (i.d - i.b + 2) as u64 / 2
}

/// Closed-form interleaving distance between two interval modules (or zero) over A_n.
pub fn interval_interleaving_distance(x: Option<Interval>, y: Option<Interval>) -> ExtRational {
    let v = match (x, y) {
        (None, None) => 0,
        (Some(i), None) | (None, Some(i)) => interval_length_cost(i),
        (Some(i), Some(j)) => {
            let shift = i.b.abs_diff(j.b).max(i.d.abs_diff(j.d)) as u64;
            shift.min(interval_length_cost(i).max(interval_length_cost(j)))
        }
    };
    ExtRational::integer(v)
}

/// A δ-matching between `b1` and `b2`, if one exists.
pub fn delta_matching_exists(b1: &Barcode, b2: &Barcode, delta: u64) -> Option<DeltaMatching> {
    let left = b1.expanded();
    let right = b2.expanded();
    let ldel: Vec<bool> = left.iter().map(|&i| long_bar(i, delta)).collect();
    let rdel: Vec<bool> = right.iter().map(|&i| long_bar(i, delta)).collect();
    // costs as booleans: `true` means forbidden at this δ
    let pairs = threshold_matching(&ldel, &rdel, |l, r| !pair_within(left[l], right[r], delta), false)?;
    Some(DeltaMatching { delta, left, right, pairs })
}

/// The least integer δ admitting a δ-matching.
pub fn bottleneck_distance(b1: &Barcode, b2: &Barcode) -> ExtRational {
    ExtRational::integer(bottleneck_witness(b1, b2).delta)
}

/// An optimal matching realizing [`bottleneck_distance`].
pub fn bottleneck_witness(b1: &Barcode, b2: &Barcode) -> DeltaMatching {
    let bound = b1.iter().chain(b2.iter()).map(|(i, _)| interval_length_cost(i)).max().unwrap_or(0);
    (0..=bound)
        .find_map(|delta| delta_matching_exists(b1, b2, delta))
        .expect("deleting every bar is a matching at the largest half-length")
}

/// `d_I` via the isometry with the bottleneck distance.
pub fn interleaving_distance(m: &Representation, n: &Representation) -> Result<ExtRational> {
    m.same_category(n)?;
    if !m.quiver().is_equioriented() {
        return Err(Error::Unsupported("interleaving distance needs an equioriented quiver".into()));
    }
    Ok(bottleneck_distance(&decompose(m), &decompose(n)))
}

/// Caps the number of candidates enumerated by the brute-force oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub cap: u128,
}

impl OracleBudget {
    pub const DEFAULT_CAP: u128 = 1 << 20;
    pub const ENV_VAR: &'static str = "ZZM_ORACLE_CAP";

    pub fn new(cap: u128) -> Self {
        OracleBudget { cap }
    }

    /// Reads `ZZM_ORACLE_CAP`, falling back to 2^20.
    pub fn from_env() -> Self {
        let cap = std::env::var(Self::ENV_VAR).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(Self::DEFAULT_CAP);
        OracleBudget { cap }
    }

    fn charge(&self, needed: u128) -> Result<()> {
        if needed > self.cap {
            Err(Error::BudgetExceeded { needed, cap: self.cap })
        } else {
            Ok(())
        }
    }
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget::new(Self::DEFAULT_CAP)
    }
}

fn count_elements(field: PrimeField, dim: usize) -> u128 {
    (field.characteristic() as u128).checked_pow(dim as u32).unwrap_or(u128::MAX)
}

/// Coefficient vectors of `F_p^k` in lexicographic order, decoded from an index.
fn coefficients(field: PrimeField, k: usize, mut idx: u64) -> Vec<u32> {
    let p = field.characteristic() as u64;
    (0..k)
        .map(|_| {
            let c = (idx % p) as u32;
            idx /= p;
            c
        })
        .collect()
}

struct InterleavingData {
    field: PrimeField,
    f_basis: Vec<Morphism>,
    g_basis: Vec<Morphism>,
    /// `gf[i][j] = g_j(δ) ∘ f_i` and `fg[j][i] = f_i(δ) ∘ g_j` as vectors.
    gf: Vec<Vec<Vec<u32>>>,
    fg: Vec<Vec<Vec<u32>>>,
    phi_m: Vec<u32>,
    phi_n: Vec<u32>,
}

fn interleaving_data(m: &Representation, n: &Representation, delta: usize) -> Result<InterleavingData> {
    m.same_category(n)?;
    if !m.quiver().is_equioriented() {
        return Err(Error::Unsupported("interleavings need an equioriented quiver".into()));
    }
    let d = delta as i64;
    let f_basis = hom_basis(m, &n.shift(d)?)?;
    let g_basis = hom_basis(n, &m.shift(d)?)?;
    let f_shift: Vec<Morphism> = f_basis.iter().map(|f| f.shift(d)).collect::<Result<_>>()?;
    let g_shift: Vec<Morphism> = g_basis.iter().map(|g| g.shift(d)).collect::<Result<_>>()?;
    let gf = f_basis
        .iter()
        .map(|f| g_shift.iter().map(|g| Ok(f.then(g)?.to_vector())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let fg = g_basis
        .iter()
        .map(|g| f_shift.iter().map(|f| Ok(g.then(f)?.to_vector())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(InterleavingData {
        field: m.field(),
        f_basis,
        g_basis,
        gf,
        fg,
        phi_m: m.transition(2 * delta)?.to_vector(),
        phi_n: n.transition(2 * delta)?.to_vector(),
    })
}

impl InterleavingData {
    /// `Σ_i α_i β_j table[i][j]` evaluated at the given coefficients.
    fn bilinear(&self, table: &[Vec<Vec<u32>>], a: &[u32], b: &[u32], len: usize) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0u32; len];
        for (i, row) in table.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            for (j, v) in row.iter().enumerate() {
                let c = f.mul(a[i], b[j]);
                if c != 0 {
                    for (o, &x) in out.iter_mut().zip(v) {
                        *o = f.add(*o, f.mul(c, x));
                    }
                }
            }
        }
        out
    }

    fn morphism(&self, basis: &[Morphism], coeffs: &[u32]) -> Morphism {
        let mut acc = Morphism::zero(basis[0].source(), basis[0].target()).expect("basis elements share a shape");
        for (b, &c) in basis.iter().zip(coeffs) {
            if c != 0 {
                acc = acc.add(&b.scale(c)).expect("basis elements share a shape");
            }
        }
        acc
    }
}

/// Enumerates every pair `(f, g)` of `Hom(M, N(δ)) × Hom(N, M(δ))` and returns a δ-interleaving.
pub fn find_interleaving(
    m: &Representation,
    n: &Representation,
    delta: usize,
    budget: &OracleBudget,
) -> Result<Option<(Morphism, Morphism)>> {
    let data = interleaving_data(m, n, delta)?;
    let (k1, k2) = (data.f_basis.len(), data.g_basis.len());
    let nf = count_elements(data.field, k1);
    let ng = count_elements(data.field, k2);
    budget.charge(nf.saturating_mul(ng))?;
    let (nf, ng) = (nf as u64, ng as u64);
    let hit = (0..nf).into_par_iter().find_first(|&a| {
        let a = coefficients(data.field, k1, a);
        (0..ng).any(|b| {
            let b = coefficients(data.field, k2, b);
            data.bilinear(&data.gf, &a, &b, data.phi_m.len()) == data.phi_m
                && data.bilinear(&data.fg, &b, &a, data.phi_n.len()) == data.phi_n
        })
    });
    let Some(a) = hit else { return Ok(None) };
    let a = coefficients(data.field, k1, a);
    let b = (0..ng)
        .map(|b| coefficients(data.field, k2, b))
        .find(|b| {
            data.bilinear(&data.gf, &a, b, data.phi_m.len()) == data.phi_m
                && data.bilinear(&data.fg, b, &a, data.phi_n.len()) == data.phi_n
        })
        .expect("witness found above");
    let f = if k1 == 0 {
        Morphism::zero(m, &n.shift(delta as i64)?)?
    } else {
        data.morphism(&data.f_basis, &a)
    };
    let g = if k2 == 0 {
        Morphism::zero(n, &m.shift(delta as i64)?)?
    } else {
        data.morphism(&data.g_basis, &b)
    };
    Ok(Some((f, g)))
}

/// Decides δ-interleaving by exhaustive enumeration of both Hom spaces.
pub fn brute_force_interleaved(
    m: &Representation,
    n: &Representation,
    delta: usize,
    budget: &OracleBudget,
) -> Result<bool> {
    Ok(find_interleaving(m, n, delta, budget)?.is_some())
}

/// Decides δ-interleaving by enumerating `f` only; the conditions on `g` are then linear.
pub fn interleaved_by_search(
    m: &Representation,
    n: &Representation,
    delta: usize,
    budget: &OracleBudget,
) -> Result<bool> {
    let data = interleaving_data(m, n, delta)?;
    let f = data.field;
    let (k1, k2) = (data.f_basis.len(), data.g_basis.len());
    let nf = count_elements(f, k1);
    budget.charge(nf)?;
    let nf = nf as u64;
    let (lm, ln) = (data.phi_m.len(), data.phi_n.len());
    Ok((0..nf).into_par_iter().any(|a| {
        let a = coefficients(f, k1, a);
        // columns: the contribution of each g_j, stacked for both equations
        let cols: Vec<Vec<u32>> = (0..k2)
            .map(|j| {
                let mut e = vec![0u32; k2];
                e[j] = 1;
                let mut c = data.bilinear(&data.gf, &a, &e, lm);
                c.extend(data.bilinear(&data.fg, &e, &a, ln));
                c
            })
            .collect();
        let mut rhs = data.phi_m.clone();
        rhs.extend(&data.phi_n);
        if k2 == 0 {
            return rhs.iter().all(|&x| x == 0);
        }
        let mat = crate::field_linear::Matrix::from_columns(f, lm + ln, &cols);
        mat.solve(&rhs).is_consistent()
    }))
}

/// The least δ accepted by [`brute_force_interleaved`].
pub fn brute_force_distance(m: &Representation, n: &Representation, budget: &OracleBudget) -> Result<u64> {
    let bound = m.n().div_ceil(2) + 1;
    for delta in 0..=bound {
        if brute_force_interleaved(m, n, delta, budget)? {
            return Ok(delta as u64);
        }
    }
    unreachable!("every pair is interleaved once all transitions vanish")
}

/// The least δ accepted by [`interleaved_by_search`].
pub fn search_distance(m: &Representation, n: &Representation, budget: &OracleBudget) -> Result<u64> {
    let bound = m.n().div_ceil(2) + 1;
    for delta in 0..=bound {
        if interleaved_by_search(m, n, delta, budget)? {
            return Ok(delta as u64);
        }
    }
    unreachable!("every pair is interleaved once all transitions vanish")
}

/// Matches equal keys in order: the `k`-th bar of `group_a[key]` with the `k`-th of `group_b[key]`.
fn canonical_pairs(
    left: &[Interval],
    right: &[Interval],
    key: impl Fn(Interval) -> usize,
    // longer bars first, i.e. reverse inclusion
    order: impl Fn(&Interval, &Interval) -> Ordering,
) -> Vec<(usize, usize)> {
    let group = |bars: &[Interval]| {
        let mut g: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, &i) in bars.iter().enumerate() {
            g.entry(key(i)).or_default().push(k);
        }
        for v in g.values_mut() {
            v.sort_by(|&x, &y| order(&bars[x], &bars[y]).then(x.cmp(&y)));
        }
        g
    };
    let (gl, gr) = (group(left), group(right));
    let mut pairs = Vec::new();
    for (k, ls) in &gl {
        if let Some(rs) = gr.get(k) {
            pairs.extend(ls.iter().copied().zip(rs.iter().copied()));
        }
    }
    pairs.sort_unstable();
    pairs
}

/// The induced matching `B(f) = B(μ) ∘ B(π)` of `f = μ ∘ π` through its image.
pub fn induced_matching(f: &Morphism) -> Result<DeltaMatching> {
    if !f.is_valid() {
        return invalid("morphism does not commute with the structure maps");
    }
    if !f.source().quiver().is_equioriented() {
        return Err(Error::Unsupported("induced matchings need an equioriented quiver".into()));
    }
    let (im, _, _) = f.image();
    let left = decompose(f.source()).expanded();
    let mid = decompose(&im).expanded();
    let right = decompose(f.target()).expanded();
    // a surjection keeps births, an injection keeps deaths
    let surj = canonical_pairs(&left, &mid, |i| i.b, |x, y| y.d.cmp(&x.d));
    let inj = canonical_pairs(&mid, &right, |i| i.d, |x, y| x.b.cmp(&y.b));
    let inj: BTreeMap<usize, usize> = inj.into_iter().collect();
    let pairs = surj.into_iter().filter_map(|(l, m)| inj.get(&m).map(|&r| (l, r))).collect();
    Ok(DeltaMatching { delta: 0, left, right, pairs })
}

/// Checks that `B(f) ∘ r_M^δ` is a δ-matching after zero-padding by δ on both sides.
pub fn verify_imt(f: &Morphism, delta: usize) -> Result<bool> {
    let two = 2 * delta;
    let (k, _) = f.kernel();
    let (c, _) = f.cokernel();
    if !k.is_delta_trivial(two)? || !c.is_delta_trivial(two)? {
        return Err(Error::Precondition(format!("kernel or cokernel is not {two}-trivial")));
    }
    let padded = f.pad(delta, delta)?;
    let b = induced_matching(&padded)?;
    // r_M^δ: ⟨b, d⟩ of M(δ) ↦ ⟨b + δ, d + δ⟩ of M, a bijection after padding
    let left: Vec<Interval> = b.left.iter().map(|i| Interval { b: i.b - delta, d: i.d - delta }).collect();
    let m = DeltaMatching { delta: delta as u64, left, right: b.right, pairs: b.pairs };
    Ok(m.is_valid())
}
