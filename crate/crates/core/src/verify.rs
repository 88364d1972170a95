//! Seeded self-check suites run by `zzm verify`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::block_sheaf::{comparison_report, d_bl, d_c_nd, theta, theta_inverse, ZZInterval, ZZKind};
use crate::derived::{derived_bottleneck, derived_interleaving_distance, random_complex_realizing, random_graded_barcode};
use crate::distances::{bottleneck_distance, search_distance, verify_imt, OracleBudget};
use crate::error::Result;
use crate::field_linear::PrimeField;
use crate::quiver_rep::{decompose, hom_basis, random_barcode, Interval, Morphism, Orientation, QuiverAn, Representation};
use crate::tilting_transport::{build_transport_table, induced_bottleneck, induced_distance, transport_table, z1_endpoint_formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Isometry,
    Imt,
    Transport,
    Blocks,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Isometry => "isometry",
            Suite::Imt => "imt",
            Suite::Transport => "transport",
            Suite::Blocks => "blocks",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub trials: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.failure {
                None => writeln!(f, "PASS {} ({} trials)", c.name, c.trials)?,
                Some(why) => writeln!(f, "FAIL {}: {why}", c.name)?,
            }
        }
        let ok = self.checks.iter().filter(|c| c.failure.is_none()).count();
        write!(f, "suite {} seed {}: {ok}/{} checks passed", self.suite.name(), self.seed, self.checks.len())
    }
}

struct Checker {
    name: String,
    trials: usize,
    failure: Option<String>,
}

impl Checker {
    fn new(name: &str) -> Self {
        Checker { name: name.into(), trials: 0, failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn done(self) -> Check {
        Check { name: self.name, trials: self.trials, failure: self.failure }
    }
}

fn random_orientation(rng: &mut impl Rng, n: usize) -> Orientation {
    let mut all = Orientation::all(n);
    all.swap_remove(rng.gen_range(0..all.len()))
}

/// A random morphism over equioriented A_n between perturbed barcodes, and the least δ
/// for which its kernel and cokernel are 2δ-trivial.
pub fn random_imt_morphism(rng: &mut impl Rng, n: usize, field: PrimeField) -> Result<(Morphism, usize)> {
    let q = QuiverAn::equioriented(n);
    let b = random_barcode(rng, n, 4);
    let mut jittered = crate::quiver_rep::Barcode::new();
    for i in b.expanded() {
        let lo = i.b.saturating_sub(rng.gen_range(0..=1)).max(1);
        let hi = (i.d + rng.gen_range(0..=1)).min(n);
        jittered.add(Interval { b: lo, d: hi }, 1);
    }
    jittered = jittered.union(&random_barcode(rng, n, 1));
    let (m, _) = Representation::from_barcode(&q, field, &b)?.random_conjugate(rng);
    let (t, _) = Representation::from_barcode(&q, field, &jittered)?.random_conjugate(rng);
    let mut f = Morphism::zero(&m, &t)?;
    for h in hom_basis(&m, &t)? {
        let c = rng.gen_range(0..field.characteristic());
        if c != 0 {
            f = f.add(&h.scale(c))?;
        }
    }
    let (k, _) = f.kernel();
    let (c, _) = f.cokernel();
    let mut delta = 0;
    while !(k.is_delta_trivial(2 * delta)? && c.is_delta_trivial(2 * delta)?) {
        delta += 1;
    }
    Ok((f, delta))
}

fn isometry(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let budget = OracleBudget::from_env();
    let mut c = Checker::new("bottleneck equals searched interleaving distance");
    for _ in 0..150 {
        let n = rng.gen_range(1..=5);
        let field = PrimeField::new([2, 3][rng.gen_range(0..2)])?;
        let q = QuiverAn::equioriented(n);
        let (m, _) = Representation::from_barcode(&q, field, &random_barcode(rng, n, 3))?.random_conjugate(rng);
        let (x, _) = Representation::from_barcode(&q, field, &random_barcode(rng, n, 3))?.random_conjugate(rng);
        let (bm, bx) = (decompose(&m), decompose(&x));
        let d_b = bottleneck_distance(&bm, &bx);
        let d_i = search_distance(&m, &x, &budget)?;
        c.check(d_b == d_i.into(), || format!("n={n}: {bm} vs {bx}: d_B = {d_b}, d_I = {d_i}"));
    }
    let mut d = Checker::new("derived bottleneck equals derived interleaving distance");
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let field = PrimeField::gf2();
        let (g, h) = (random_graded_barcode(rng, n, -2..=2, 3), random_graded_barcode(rng, n, -2..=2, 3));
        let (x, y) = (random_complex_realizing(rng, &g, n, field)?, random_complex_realizing(rng, &h, n, field)?);
        let (lhs, rhs) = (derived_bottleneck(&g, &h), derived_interleaving_distance(&x, &y)?);
        d.check(lhs == rhs, || format!("n={n}: {g} vs {h}: {lhs} != {rhs}"));
    }
    Ok(vec![c.done(), d.done()])
}

fn imt(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut c = Checker::new("induced matching of a morphism is a δ-matching");
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let field = PrimeField::new([2, 3, 5][rng.gen_range(0..3)])?;
        let (f, delta) = random_imt_morphism(rng, n, field)?;
        let ok = verify_imt(&f, delta)?;
        c.check(ok, || format!("n={n}, δ={delta}: {} → {}", decompose(f.source()), decompose(f.target())));
    }
    Ok(vec![c.done()])
}

fn transport(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut bij = Checker::new("transport is a bijection for every orientation");
    for n in 1..=6 {
        for a in Orientation::all(n) {
            let t = build_transport_table(&a);
            let ok = t.as_ref().map(|t| {
                let targets: std::collections::BTreeSet<_> = t.entries().map(|e| e.target).collect();
                t.entries().count() == n * (n + 1) / 2 && targets.len() == n * (n + 1) / 2
            });
            bij.check(matches!(ok, Ok(true)), || format!("orientation {a}: {ok:?}"));
        }
    }
    let mut closed = Checker::new("alternating transport matches the endpoint formulas");
    for n in (1..=9).step_by(2) {
        let t = transport_table(&Orientation::z1(n))?;
        for e in t.entries() {
            let expected = z1_endpoint_formula(e.source, n)?;
            closed.check(*e == expected, || format!("n={n}: {e:?} vs {expected:?}"));
        }
    }
    let mut iso = Checker::new("induced bottleneck equals induced distance");
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let a = random_orientation(rng, n);
        let q = QuiverAn::new(n, a.clone())?;
        let (x, y) = (random_barcode(rng, n, 3), random_barcode(rng, n, 3));
        let field = PrimeField::gf2();
        let (m, _) = Representation::from_barcode(&q, field, &x)?.random_conjugate(rng);
        let (k, _) = Representation::from_barcode(&q, field, &y)?.random_conjugate(rng);
        let (lhs, rhs) = (induced_bottleneck(&x, &y, &a)?, induced_distance(&m, &k)?);
        iso.check(lhs == rhs, || format!("{a}: {x} vs {y}: {lhs} != {rhs}"));
    }
    Ok(vec![bij.done(), closed.done(), iso.done()])
}

fn random_zz(rng: &mut impl Rng) -> Vec<ZZInterval> {
    (0..rng.gen_range(0..4))
        .map(|_| {
            let lo = rng.gen_range(-4..8);
            ZZInterval::from_linear(lo, lo + rng.gen_range(0..8)).expect("nonempty segment")
        })
        .collect()
}

fn blocks(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut cmp = Checker::new("comparison inequalities");
    for n in [5, 7] {
        let r = comparison_report(n)?;
        cmp.check(r.violations.is_empty(), || format!("n={n}: {}", r.violations.join("; ")));
    }
    let r7 = comparison_report(7)?;
    cmp.check(r7.incomparable_cell_witnessed(), || "n=7 has no two-sided X_oc/X_o witnesses".into());
    let mut round = Checker::new("theta round trip");
    for b in -2..=2 {
        for len in 0..=5 {
            for kind in ZZKind::ALL {
                if let Ok(z) = ZZInterval::new(b, b + len, kind) {
                    round.check(theta_inverse(&theta(&[z]))? == vec![z], || format!("{z}"));
                }
            }
        }
    }
    let mut conv = Checker::new("non-derived convolution distance equals block distance");
    for _ in 0..200 {
        let (x, y) = (random_zz(rng), random_zz(rng));
        let c = d_c_nd(&theta(&x), &theta(&y))?;
        let expected_flag = x.iter().chain(&y).any(|z| z.kind == ZZKind::Open);
        conv.check(c.value == d_bl(&x, &y) && c.open_summand == expected_flag, || format!("{x:?} vs {y:?}"));
    }
    Ok(vec![cmp.done(), round.done(), conv.done()])
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = match suite {
        Suite::Isometry => isometry(&mut rng)?,
        Suite::Imt => imt(&mut rng)?,
        Suite::Transport => transport(&mut rng)?,
        Suite::Blocks => blocks(&mut rng)?,
    };
    Ok(SuiteReport { suite, seed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_deterministic() {
        for suite in [Suite::Imt, Suite::Blocks, Suite::Transport] {
            let a = run_suite(suite, 3).unwrap();
            assert!(a.passed(), "{a}");
            assert_eq!(a, run_suite(suite, 3).unwrap());
        }
    }

    #[test]
    fn imt_morphisms_vary() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let deltas: std::collections::BTreeSet<usize> =
            (0..100).map(|_| random_imt_morphism(&mut rng, 6, PrimeField::gf2()).unwrap().1).collect();
        assert!(deltas.len() >= 3, "{deltas:?}");
    }
}
