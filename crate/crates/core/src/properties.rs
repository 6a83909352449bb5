//! Seeded randomized invariant suite. The report contains no timings, so the
//! same configuration always renders to the same bytes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::crystal::{build_crystal, character, check_normal_crystal, highest_elements, Crystal, CrystalGraph};
use crate::error::Result;
use crate::levi::{branch_crystal, d_gl_check, string_structure_check};
use crate::oracle::{branch_chars, freudenthal, is_weight, klimyk, weyl_dim, CharacterCache};
use crate::path::Path;
use crate::root_datum::{LatticeQuotient, RootDatum, Weight};
use crate::tensor::{closed_family_certificate, tensor};
use crate::worked_examples::{dim_by_coroots, dim_repellent};

/// Data sampled by the suite.
pub const DATA: &[&str] = &["A1", "A2", "A3", "B2", "C2", "G2", "GL2", "GL3", "GL4"];

const MAX_DIM: u64 = 400;
const MAX_STORED: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct PropertyConfig {
    pub max_height: u32,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyOutcome {
    pub property: &'static str,
    pub cases: usize,
    pub status: &'static str,
    pub violation_count: usize,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertiesReport {
    pub config: PropertyConfig,
    pub outcomes: Vec<PropertyOutcome>,
}

impl PropertiesReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.violation_count == 0)
    }
}

struct Tally {
    property: &'static str,
    cases: usize,
    violations: Vec<String>,
    count: usize,
}

impl Tally {
    fn new(property: &'static str) -> Tally {
        Tally { property, cases: 0, violations: Vec::new(), count: 0 }
    }

    fn fail(&mut self, message: String) {
        self.count += 1;
        if self.violations.len() < MAX_STORED {
            self.violations.push(message);
        }
    }

    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.fail(message());
        }
    }

    /// Runs one case; an error counts as a violation.
    fn case(&mut self, label: &str, body: impl FnOnce(&mut Tally) -> Result<()>) {
        self.cases += 1;
        if let Err(e) = body(self) {
            self.fail(format!("{label}: {e}"));
        }
    }

    fn finish(self) -> PropertyOutcome {
        PropertyOutcome {
            property: self.property,
            cases: self.cases,
            status: if self.count == 0 { "pass" } else { "fail" },
            violation_count: self.count,
            violations: self.violations,
        }
    }
}

fn sample_datum(rng: &mut ChaCha8Rng) -> Arc<RootDatum> {
    let name = DATA.choose(rng).expect("nonempty data list");
    Arc::new(RootDatum::parse(name).expect("listed data parse"))
}

/// Dominant weight with `Σ⟨λ, α̌_i⟩ ≤ max_height` and dimension at most `cap`.
fn sample_dominant(rd: &RootDatum, rng: &mut ChaCha8Rng, max_height: u32, cap: u64) -> Result<Weight> {
    let l = rd.num_simple();
    loop {
        let budget = rng.gen_range(0..=max_height);
        let mut p = vec![0i64; l];
        if l > 0 {
            for _ in 0..budget {
                p[rng.gen_range(0..l)] += 1;
            }
        }
        let mut lambda = rd.weight_from_pairings(&p)?;
        if rd.name().starts_with("GL") {
            let shift = rng.gen_range(-2..=2);
            lambda = &lambda + &Weight(vec![shift; rd.rank()]);
        }
        if weyl_dim(rd, &lambda)? <= cap {
            return Ok(lambda);
        }
    }
}

fn sample_levi(rd: &RootDatum, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..rd.num_simple()).filter(|_| rng.gen_bool(0.5)).collect()
}

fn crystal_and_oracle(t: &mut Tally, rd: &Arc<RootDatum>, lambda: &Weight) -> Result<Crystal> {
    let c = build_crystal(rd, lambda, usize::MAX)?;
    let table = freudenthal(rd, lambda)?;
    t.check(character(&c) == table.mults, || format!("{} {lambda}: character differs from Freudenthal", rd.name()));
    let dim = weyl_dim(rd, lambda)?;
    t.check(c.len() as u64 == dim, || format!("{} {lambda}: |B| = {} but dim = {dim}", rd.name(), c.len()));
    Ok(c)
}

pub fn run_properties(config: &PropertyConfig) -> Result<PropertiesReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let h = config.max_height;
    let mut outcomes = Vec::new();

    let mut t = Tally::new("crystal character equals oracle; normal axioms; i-strings");
    for _ in 0..config.samples {
        let rd = sample_datum(&mut rng);
        let lambda = sample_dominant(&rd, &mut rng, h, MAX_DIM)?;
        t.case(&format!("{} {lambda}", rd.name()), |t| {
            let c = crystal_and_oracle(t, &rd, &lambda)?;
            let normal = check_normal_crystal(&c);
            t.check(normal.passed(), || format!("{} {lambda}: {} axiom violations", rd.name(), normal.violation_count));
            for i in 0..rd.num_simple() {
                let s = string_structure_check(&c, i);
                t.check(s.passed(), || format!("{} {lambda}: i={} string violations {:?}", rd.name(), i + 1, s.violations.first()));
            }
            Ok(())
        });
    }
    outcomes.push(t.finish());

    let mut t = Tally::new("tensor decomposition, retraction and embedding");
    for _ in 0..config.samples {
        let rd = sample_datum(&mut rng);
        let a = sample_dominant(&rd, &mut rng, h, 60)?;
        let b = sample_dominant(&rd, &mut rng, h, 60)?;
        t.case(&format!("{} {a} ⊗ {b}", rd.name()), |t| {
            let cert = closed_family_certificate(&rd, &a, &b, usize::MAX)?;
            t.check(cert.report.passed(), || format!("{} {a} ⊗ {b}: {:?}", rd.name(), cert.report.violations.first()));
            let sym = klimyk(&rd, &b, &a)? == klimyk(&rd, &a, &b)?;
            t.check(sym, || format!("{} {a} ⊗ {b}: Klimyk not symmetric", rd.name()));
            let (ca, cb) = (build_crystal(&rd, &a, usize::MAX)?, build_crystal(&rd, &b, usize::MAX)?);
            let prod = tensor(&ca, &cb)?;
            let mut conv: BTreeMap<Weight, u64> = BTreeMap::new();
            for (x, m) in character(&ca) {
                for (y, n) in character(&cb) {
                    *conv.entry(&x + &y).or_insert(0) += m * n;
                }
            }
            t.check(character(&prod) == conv, || format!("{} {a} ⊗ {b}: character is not the convolution", rd.name()));
            Ok(())
        });
    }
    outcomes.push(t.finish());

    let mut t = Tally::new("branching equals character stripping; weight-fiber identity; bijection");
    for _ in 0..config.samples {
        let rd = sample_datum(&mut rng);
        let lambda = sample_dominant(&rd, &mut rng, h, MAX_DIM)?;
        let levi = sample_levi(&rd, &mut rng);
        let choice: u64 = rng.gen();
        t.case(&format!("{} {lambda} {levi:?}", rd.name()), |t| {
            let c = build_crystal(&rd, &lambda, usize::MAX)?;
            let crystal_side = branch_crystal(&c, &levi)?;
            let oracle_side = branch_chars(&rd, &lambda, &levi)?;
            t.check(crystal_side == oracle_side, || format!("{} {lambda} {levi:?}: tables differ", rd.name()));
            let levi_datum = Arc::new(rd.levi(&levi)?);
            let cache = CharacterCache::new(levi_datum.clone());
            let mut total = 0;
            let mut fibers: BTreeMap<Weight, u64> = BTreeMap::new();
            for (nu, n) in &crystal_side.table {
                total += n * weyl_dim(&levi_datum, nu)?;
                for (mu, m) in &cache.get(nu)?.mults {
                    *fibers.entry(mu.clone()).or_insert(0) += n * m;
                }
            }
            t.check(total == c.len() as u64, || format!("{} {lambda} {levi:?}: sum rule gives {total}", rd.name()));
            t.check(fibers == character(&c), || format!("{} {lambda} {levi:?}: weight fibers differ", rd.name()));
            let weights: Vec<&Weight> = fibers.keys().collect();
            let mu = weights[(choice % weights.len() as u64) as usize];
            let r = d_gl_check(&rd, &lambda, mu, &levi, usize::MAX)?;
            t.check(r.passed(), || format!("{} {lambda} {levi:?} μ={mu}: {:?}", rd.name(), r.violations.first()));
            Ok(())
        });
    }
    outcomes.push(t.finish());

    let mut t = Tally::new("central grading is constant on Levi components");
    for _ in 0..config.samples {
        let rd = sample_datum(&mut rng);
        let lambda = sample_dominant(&rd, &mut rng, h, MAX_DIM)?;
        let levi = sample_levi(&rd, &mut rng);
        t.case(&format!("{} {lambda} {levi:?}", rd.name()), |t| {
            let c = build_crystal(&rd, &lambda, usize::MAX)?;
            let q = LatticeQuotient::new(&rd, &levi)?;
            for top in highest_elements(&c, &levi) {
                let class = q.class_of(c.weight(top));
                let mut seen = BTreeSet::from([top]);
                let mut queue = VecDeque::from([top]);
                while let Some(b) = queue.pop_front() {
                    t.check(q.class_of(c.weight(b)) == class, || format!("{} {lambda} {levi:?}: class changes at b{b}", rd.name()));
                    for &i in &levi {
                        if let Some(x) = c.f(i, b) {
                            if seen.insert(x) {
                                queue.push_back(x);
                            }
                        }
                    }
                }
            }
            Ok(())
        });
    }
    outcomes.push(t.finish());

    let mut t = Tally::new("weight tests agree; repellent dimension formulas agree");
    for _ in 0..config.samples {
        let rd = sample_datum(&mut rng);
        let lambda = sample_dominant(&rd, &mut rng, h, MAX_DIM)?;
        let offsets: Vec<i64> = (0..rd.rank()).map(|_| rng.gen_range(-2..=2)).collect();
        t.case(&format!("{} {lambda}", rd.name()), |t| {
            let table = freudenthal(&rd, &lambda)?;
            for mu in table.mults.keys() {
                t.check(is_weight(&rd, &lambda, mu)?, || format!("{} {lambda}: {mu} rejected", rd.name()));
                let (a, b) = (dim_repellent(&rd, &lambda, mu)?, dim_by_coroots(&rd, &lambda, mu)?);
                t.check(a == b, || format!("{} {lambda} {mu}: height {a}, coroot sum {b}", rd.name()));
            }
            let probe = &lambda + &Weight(offsets.clone());
            let inside = is_weight(&rd, &lambda, &probe)?;
            t.check(inside == table.mults.contains_key(&probe), || format!("{} {lambda}: probe {probe} misjudged", rd.name()));
            Ok(())
        });
    }
    outcomes.push(t.finish());

    let mut t = Tally::new("paths round-trip through JSON");
    for _ in 0..config.samples {
        let rd = sample_datum(&mut rng);
        let lambda = sample_dominant(&rd, &mut rng, h, MAX_DIM)?;
        let choice: u64 = rng.gen();
        t.case(&format!("{} {lambda}", rd.name()), |t| {
            let c = build_crystal(&rd, &lambda, usize::MAX)?;
            let b = (choice % c.len() as u64) as usize;
            let text = serde_json::to_string(c.path(b)).map_err(|e| crate::error::Error::Internal(e.to_string()))?;
            let back: Path = serde_json::from_str(&text).map_err(|e| crate::error::Error::Parse(e.to_string()))?;
            t.check(&back == c.path(b), || format!("{} {lambda}: b{b} changed in round trip", rd.name()));
            t.check(c.index_of(&back) == Some(b), || format!("{} {lambda}: b{b} not found after round trip", rd.name()));
            Ok(())
        });
    }
    outcomes.push(t.finish());

    Ok(PropertiesReport { config: config.clone(), outcomes })
}
