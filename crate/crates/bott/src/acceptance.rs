//! The acceptance suite: ten exact checks of closed forms against oracles
//! and of the surface computations against reference values.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use bott_core::chern::{self, Polarization, SurfacePairing};
use bott_core::divisor::{self, InvariantDivisor, ReducedDivisor};
use bott_core::filtration::{self, FiltrationBundle};
use bott_core::{klyachko, positivity, rational, BottMatrix, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 0x5eed_b077;

/// Criterion 1 must finish within this on the small grid.
pub const SMALL_GRID_BUDGET: Duration = Duration::from_secs(60);

/// Criterion 8 fails on `H_0`: there `v_1` and `v_3` span one line, so no
/// candidate has degree `b`. It is reported as failing, never skipped.
pub const KNOWN_DEVIATIONS: &[u8] = &[8];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    Small,
    Full,
}

/// Deliberate faults, used to check that the suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Swap `D_2 . D_3` and `D_2 . D_4` in the reference pairing table.
    WrongPairing,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub grid: Grid,
    pub seed: u64,
    pub cap: usize,
    pub fault: Option<Fault>,
}

impl Default for Options {
    fn default() -> Self {
        Options { grid: Grid::Small, seed: DEFAULT_SEED, cap: bott_core::DEFAULT_CLOSURE_CAP, fault: None }
    }
}

impl Options {
    fn reference_pairing(&self, r: i64) -> SurfacePairing {
        let mut p = SurfacePairing::new(r);
        if self.fault == Some(Fault::WrongPairing) {
            p.table[1].swap(2, 3);
            p.table[2][1] = p.table[1][2];
            p.table[3][1] = p.table[1][3];
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub detail: String,
    pub millis: u64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("[{verdict}] {:>2} {} ({} cases, {} ms): {}", self.id, self.name, self.cases, self.millis, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub grid: Grid,
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

impl Summary {
    pub fn failing(&self) -> Vec<u8> {
        self.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect()
    }
}

/// Every upper-triangular Bott matrix of height `k` with entries from `values`.
pub fn bott_matrices(k: usize, values: &[i64]) -> Vec<BottMatrix> {
    let slots: Vec<(usize, usize)> = (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect();
    let mut digits = vec![0usize; slots.len()];
    let mut out = Vec::new();
    loop {
        let entries: BTreeMap<(usize, usize), i64> = slots.iter().zip(&digits).map(|(&s, &d)| (s, values[d])).collect();
        out.push(BottMatrix::from_upper(k, |i, j| entries[&(i, j)]).expect("triangular matrices are valid"));
        let Some(pos) = digits.iter().position(|&d| d + 1 < values.len()) else { break };
        digits[pos] += 1;
        digits[..pos].fill(0);
    }
    out
}

/// Every reduced divisor of length `k` with entries in `0..=max`.
pub fn reduced_divisors(k: usize, max: i64) -> Vec<ReducedDivisor> {
    let base = (max + 1) as usize;
    (0..base.pow(k as u32))
        .map(|n| ReducedDivisor::new((0..k).map(|i| ((n / base.pow(i as u32)) % base) as i64).collect()))
        .collect()
}

struct Tally {
    cases: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, id: u8, name: &str, started: Instant, note: String) -> CriterionResult {
        let passed = self.failures.is_empty();
        let detail = if passed {
            note
        } else {
            let shown: Vec<&str> = self.failures.iter().take(3).map(String::as_str).collect();
            format!("{} failures, first: {}", self.failures.len(), shown.join("; "))
        };
        CriterionResult {
            id,
            name: name.into(),
            passed,
            cases: self.cases,
            detail,
            millis: started.elapsed().as_millis() as u64,
        }
    }
}

fn errored(id: u8, name: &str, started: Instant, e: bott_core::Error) -> CriterionResult {
    CriterionResult {
        id,
        name: name.into(),
        passed: false,
        cases: 0,
        detail: format!("error: {e}"),
        millis: started.elapsed().as_millis() as u64,
    }
}

struct PositivityGrid {
    matrices: Vec<BottMatrix>,
    divisor_max: i64,
}

impl PositivityGrid {
    fn new(grid: Grid) -> Self {
        let matrices = match grid {
            Grid::Small => bott_matrices(3, &[0, 1, 2]),
            Grid::Full => (2..=4).flat_map(|k| bott_matrices(k, &[0, 1, 2])).collect(),
        };
        PositivityGrid { matrices, divisor_max: 3 }
    }
}

fn sjet_equivalence(grid: &PositivityGrid, t: &mut Tally) -> Result<()> {
    for c in &grid.matrices {
        let relations = c.wall_relations();
        for a in reduced_divisors(c.height(), grid.divisor_max) {
            let closed = positivity::sjet_closed(c, &a)?;
            let oracle = positivity::sjet_oracle_with(&relations, &a.embed()).max(-1);
            t.check(closed == oracle, || format!("{:?} a={:?}: closed {closed}, oracle {oracle}", c.rows(), a.a));
        }
    }
    Ok(())
}

fn fano_consistency(grid: &PositivityGrid, t: &mut Tally) -> Result<()> {
    for c in &grid.matrices {
        let k = c.height();
        let minus_k = divisor::anticanonical(c);
        let fano = positivity::is_fano(c)?;
        let weak = positivity::is_weak_fano(c)?;
        let max_row = (1..=k).map(|i| c.row_sum(i)).max().unwrap_or(0);
        t.check(fano == positivity::is_ample(c, &minus_k)?, || format!("{:?}: fano vs ample -K", c.rows()));
        t.check(weak == positivity::is_nef_and_big(c, &minus_k)?, || format!("{:?}: weak fano vs nef and big -K", c.rows()));
        t.check(fano == (max_row <= 1), || format!("{:?}: fano vs row sums", c.rows()));
        t.check(weak == (max_row <= 2), || format!("{:?}: weak fano vs row sums", c.rows()));
    }
    Ok(())
}

fn nef_and_big_vs_polytope(grid: &PositivityGrid, t: &mut Tally) -> Result<()> {
    for c in &grid.matrices {
        let relations = c.wall_relations();
        for a in reduced_divisors(c.height(), grid.divisor_max) {
            let d = a.embed();
            let closed = positivity::is_nef_and_big(c, &a)?;
            let nef = positivity::sjet_oracle_with(&relations, &d) >= 0;
            let oracle = nef && positivity::big_oracle(c, &d)?;
            t.check(closed == oracle, || format!("{:?} a={:?}: closed {closed}, oracle {oracle}", c.rows(), a.a));
        }
    }
    Ok(())
}

fn hirzebruch_pairing(opts: &Options, t: &mut Tally) -> Result<()> {
    let r_max = if opts.grid == Grid::Full { 10 } else { 5 };
    for r in 0..=r_max {
        let reference = opts.reference_pairing(r);
        let fan = SurfacePairing::from_fan(r)?;
        for i in 0..4 {
            for j in 0..4 {
                let (x, y) = (fan.table[i][j], reference.table[i][j]);
                t.check(x == y, || format!("r={r}: D{}.D{} is {x} from the fan, {y} in the table", i + 1, j + 1));
            }
        }
        for (i, j, v) in [(2, 3, 1), (4, 3, 1), (1, 4, 1), (4, 4, r)] {
            let x = fan.table[i - 1][j - 1];
            t.check(x == v, || format!("r={r}: D{i}.D{j} = {x}, expected {v}"));
        }
    }
    Ok(())
}

fn anticanonical_jet_bound(grid: &PositivityGrid, t: &mut Tally) -> Result<()> {
    for c in &grid.matrices {
        let s = positivity::sjet_closed(c, &divisor::anticanonical(c))?;
        t.check(s <= 2 && (s == 2) == c.is_identity(), || format!("{:?}: -K is {s}-jet ample", c.rows()));
    }
    Ok(())
}

fn tangent_splitting(opts: &Options, t: &mut Tally) -> Result<()> {
    let k_max = if opts.grid == Grid::Full { 4 } else { 3 };
    for k in 1..=k_max {
        for c in bott_matrices(k, &[0, 1, 2]) {
            let geometric = klyachko::tangent_splits_geometric(&c);
            let split = klyachko::is_split(&c, &klyachko::tangent_bundle(&c), opts.cap)?;
            t.check(geometric == c.is_identity() && split == geometric, || {
                format!("{:?}: geometric {geometric}, filtrations {split}", c.rows())
            });
        }
    }
    Ok(())
}

/// Returns the number of steps whose two sides differ as bundles.
fn normalization_identity(opts: &Options, rng: &mut StdRng, t: &mut Tally) -> Result<u64> {
    let completions = if opts.grid == Grid::Full { 500 } else { 100 };
    let mut non_isomorphic = 0;
    for k in 2..=4usize {
        let columns = last_columns(k - 1);
        for column in columns {
            let tries = if k == 2 { 1 } else { completions };
            for _ in 0..tries {
                let upper: BTreeMap<(usize, usize), i64> = (1..k - 1)
                    .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                    .map(|s| (s, rng.gen_range(-3..=3)))
                    .collect();
                let c = BottMatrix::from_upper(k, |i, j| if j == k { column[i - 1] } else { upper[&(i, j)] })?;
                let step = klyachko::normalization_step(&c)?;
                let expected = BottMatrix::from_upper(k, |i, j| if j == k { c.entry(i, j).abs() } else { c.entry(i, j) })?;
                t.check(step.identity_holds && step.normalized == expected, || format!("{:?}", c.rows()));
                if !step.isomorphic {
                    non_isomorphic += 1;
                }
            }
        }
    }
    Ok(non_isomorphic)
}

/// Every vector of length `n` with entries in `-3..=3`.
fn last_columns(n: usize) -> Vec<Vec<i64>> {
    (0..7usize.pow(n as u32))
        .map(|x| (0..n).map(|i| ((x / 7usize.pow(i as u32)) % 7) as i64 - 3).collect())
        .collect()
}

fn slope_formula(opts: &Options, t: &mut Tally) -> Result<()> {
    let (r_max, ab_max) = if opts.grid == Grid::Full { (5, 6) } else { (3, 4) };
    for r in 0..=r_max {
        let pairing = opts.reference_pairing(r);
        let tangent = klyachko::tangent_bundle(&pairing.matrix());
        for a in 1..=ab_max {
            for b in 1..=ab_max {
                let h = Polarization::new(a, b)?;
                let mu = chern::slope(&tangent, h, &pairing)?;
                let expected = bott_core::Rational::new((2 * a + b * (r + 2)).into(), 2.into());
                t.check(mu == expected, || {
                    format!("r={r} a={a} b={b}: slope {}, expected {}", rational::format(&mu), rational::format(&expected))
                });
                let degrees: Vec<i64> =
                    chern::destabilizing_candidates(&tangent, h, &pairing)?.iter().map(|c| c.degree).collect();
                t.check(degrees.contains(&b) && degrees.contains(&(2 * a + b * r)), || {
                    format!("r={r} a={a} b={b}: candidate degrees {degrees:?} lack {b} or {}", 2 * a + b * r)
                });
            }
        }
    }
    Ok(())
}

fn random_line(rng: &mut StdRng) -> InvariantDivisor {
    InvariantDivisor::new((0..4).map(|_| rng.gen_range(-3..=3)).collect())
}

/// A rank-2 bundle on `H_r`: a sum of two lines or a twist of the tangent bundle.
fn random_rank2(rng: &mut StdRng, c: &BottMatrix) -> Result<FiltrationBundle> {
    if rng.gen_bool(0.5) {
        filtration::direct_sum(&filtration::line_bundle(&random_line(rng)), &filtration::line_bundle(&random_line(rng)))
    } else {
        filtration::twist(&klyachko::tangent_bundle(c), &random_line(rng))
    }
}

fn chern_and_discriminant(opts: &Options, rng: &mut StdRng, t: &mut Tally) -> Result<()> {
    let pairing = opts.reference_pairing(1);
    let tangent = klyachko::tangent_bundle(&pairing.matrix());
    let cd = chern::chern_data(&tangent, &pairing, opts.cap)?;
    let delta = chern::discriminant(&cd, &pairing)?;
    t.check(cd.c1.m == [1, 1, 1, 1], || format!("c1(T) = {:?}", cd.c1.m));
    t.check(cd.c2 == 4, || format!("c2(T) = {}", cd.c2));
    t.check(delta == rational::int(2), || format!("discriminant of T is {}", rational::format(&delta)));
    let pairs = if opts.grid == Grid::Full { 200 } else { 50 };
    for _ in 0..pairs {
        let r = rng.gen_range(0..=3);
        let pairing = opts.reference_pairing(r);
        let e = random_rank2(rng, &pairing.matrix())?;
        let l = random_line(rng);
        let before = chern::discriminant(&chern::chern_data(&e, &pairing, opts.cap)?, &pairing)?;
        let twisted = filtration::twist(&e, &l)?;
        let after = chern::discriminant(&chern::chern_data(&twisted, &pairing, opts.cap)?, &pairing)?;
        t.check(before == after, || {
            format!("r={r} L={:?}: {} before, {} after", l.m, rational::format(&before), rational::format(&after))
        });
    }
    Ok(())
}

fn semistability_sanity(opts: &Options, rng: &mut StdRng, t: &mut Tally) -> Result<()> {
    let ab_max = if opts.grid == Grid::Full { 8 } else { 5 };
    let h2 = opts.reference_pairing(2);
    let t2 = klyachko::tangent_bundle(&h2.matrix());
    let h0 = opts.reference_pairing(0);
    let t0 = klyachko::tangent_bundle(&h0.matrix());
    for a in 1..=ab_max {
        for b in 1..=ab_max {
            let s = chern::is_semistable_rank2(&t2, Polarization::new(a, b)?, &h2)?;
            t.check(!s.semistable, || format!("T on H_2 semistable for a={a} b={b}"));
        }
        let s = chern::is_semistable_rank2(&t0, Polarization::new(a, a)?, &h0)?;
        t.check(s.semistable, || format!("T on H_0 unstable for a=b={a}"));
    }
    let cases = if opts.grid == Grid::Full { 100 } else { 20 };
    for _ in 0..cases {
        let r = rng.gen_range(0..=3);
        let pairing = opts.reference_pairing(r);
        let e = random_rank2(rng, &pairing.matrix())?;
        let h = Polarization::new(rng.gen_range(1..=5), rng.gen_range(1..=5))?;
        let scale = rng.gen_range(2..=20);
        let before = chern::is_semistable_rank2(&e, h, &pairing)?.semistable;
        let after = chern::is_semistable_rank2(&e, h.scale(scale)?, &pairing)?.semistable;
        t.check(before == after, || format!("r={r} {h:?} scaled by {scale}: {before} then {after}"));
    }
    Ok(())
}

pub const NAMES: [&str; 10] = [
    "s-jet closed form equals the curve oracle",
    "Fano and weak Fano by row sums",
    "nef and big equals the polytope oracle",
    "Hirzebruch pairing table",
    "anticanonical jet bound",
    "tangent splitting",
    "sign normalization identity",
    "slope of the tangent bundle",
    "Chern classes and discriminant",
    "semistability sanity",
];

pub fn run(opts: &Options) -> Summary {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let grid = PositivityGrid::new(opts.grid);
    let mut criteria = Vec::with_capacity(10);
    for id in 1..=10u8 {
        let name = NAMES[id as usize - 1];
        let started = Instant::now();
        let mut t = Tally::new();
        let outcome = match id {
            1 => sjet_equivalence(&grid, &mut t).map(|()| String::new()),
            2 => fano_consistency(&grid, &mut t).map(|()| String::new()),
            3 => nef_and_big_vs_polytope(&grid, &mut t).map(|()| String::new()),
            4 => hirzebruch_pairing(opts, &mut t).map(|()| String::new()),
            5 => anticanonical_jet_bound(&grid, &mut t).map(|()| String::new()),
            6 => tangent_splitting(opts, &mut t).map(|()| String::new()),
            7 => normalization_identity(opts, &mut rng, &mut t)
                .map(|n| format!("{n} steps are not isomorphisms of bundles")),
            8 => slope_formula(opts, &mut t).map(|()| String::new()),
            9 => chern_and_discriminant(opts, &mut rng, &mut t).map(|()| String::new()),
            _ => semistability_sanity(opts, &mut rng, &mut t).map(|()| String::new()),
        };
        let mut result = match outcome {
            Ok(note) => t.finish(id, name, started, note),
            Err(e) => errored(id, name, started, e),
        };
        if id == 1 && opts.grid == Grid::Small && started.elapsed() > SMALL_GRID_BUDGET {
            result.passed = false;
            result.detail = format!("took {} ms, over the {} s budget", result.millis, SMALL_GRID_BUDGET.as_secs());
        }
        criteria.push(result);
    }
    Summary { grid: opts.grid, seed: opts.seed, passed: criteria.iter().all(|c| c.passed), criteria }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(bott_matrices(3, &[0, 1, 2]).len(), 27);
        assert_eq!(bott_matrices(1, &[0, 1]).len(), 1);
        assert_eq!(reduced_divisors(3, 3).len(), 64);
        assert_eq!(last_columns(3).len(), 343);
    }

    #[test]
    fn fault_changes_the_table() {
        let opts = Options { fault: Some(Fault::WrongPairing), ..Options::default() };
        let p = opts.reference_pairing(1);
        assert_ne!(p.table, SurfacePairing::new(1).table);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(p.table[i][j], p.table[j][i]);
            }
        }
    }
}
