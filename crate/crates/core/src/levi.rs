//! Restriction to Levi subgroups: branching tables, the `Λ`-sets, `λ̃`,
//! the weight-space bijection and string structure checks.
//!
//! Levi subsets are 0-based positions in the simple roots of the ambient
//! datum; `rd.levi(I_L)` renumbers them `0..|I_L|` in the given order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::crystal::{build_crystal, decompose, Crystal, CrystalGraph};
use crate::error::{Error, Result};
use crate::oracle::{branch_chars, freudenthal, is_weight_by_dominance, CharacterCache};
use crate::report::Report;
use crate::root_datum::{alpha_gp, QuotientClass, RootDatum, Weight};

const GEOMETRY_NOTE: &str = "geometric loci are represented only by index sets and cardinalities";

/// Multiplicities `n_ν` of `V_L(ν)` in the restriction of `V(λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchResult {
    pub levi: Vec<usize>,
    pub table: BTreeMap<Weight, u64>,
}

impl Serialize for BranchResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let levi: Vec<usize> = self.levi.iter().map(|i| i + 1).collect();
        let table: Vec<_> = self.table.iter().map(|(nu, m)| json!({"nu": nu, "mult": m})).collect();
        let mut st = s.serialize_struct("BranchResult", 2)?;
        st.serialize_field("levi", &levi)?;
        st.serialize_field("table", &table)?;
        st.end()
    }
}

/// Branching read off an already built `B(λ)`.
pub fn branch_crystal(c: &Crystal, levi: &[usize]) -> Result<BranchResult> {
    c.datum().check_indices(levi)?;
    Ok(BranchResult { levi: levi.to_vec(), table: decompose(c, levi) })
}

/// Counts `I_L`-highest elements of `B(λ)` by weight.
pub fn branch(rd: &Arc<RootDatum>, lambda: &Weight, levi: &[usize], max_elements: usize) -> Result<BranchResult> {
    rd.check_indices(levi)?;
    branch_crystal(&build_crystal(rd, lambda, max_elements)?, levi)
}

/// `μ + Σ_{i∈I_L} n_i α_i` where `λ − μ = Σ_i n_i α_i`.
pub fn lambda_tilde(rd: &RootDatum, lambda: &Weight, mu: &Weight, levi: &[usize]) -> Result<Weight> {
    rd.check_indices(levi)?;
    rd.check_weight(mu)?;
    let diff = lambda - mu;
    let n = match rd.integer_root_coords(&diff, &rd.full_index_set())? {
        Some(n) if n.iter().all(|&x| x >= 0) => n,
        _ => return Err(Error::NotInRootCone(diff)),
    };
    let mut out = mu.clone();
    for &i in levi {
        out = out.add_scaled(rd.simple_root(i), n[i]);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum LambdaFilter {
    None,
    /// keep `ν` with `μ` a weight of `V_L(ν)`
    Mu(Weight),
    /// keep `ν` in the given class of `X / ℤ⟨α_i : i ∈ I_L⟩`
    Theta(QuotientClass),
}

/// Keys of the branching table, optionally filtered.
pub fn lambda_sets_from(rd: &RootDatum, table: &BranchResult, filter: &LambdaFilter) -> Result<Vec<Weight>> {
    let levi = &table.levi;
    let levi_datum = rd.levi(levi)?;
    let mut out = Vec::new();
    for nu in table.table.keys() {
        let keep = match filter {
            LambdaFilter::None => true,
            LambdaFilter::Mu(mu) => is_weight_by_dominance(&levi_datum, nu, mu)?,
            LambdaFilter::Theta(theta) => &alpha_gp(rd, nu, levi)? == theta,
        };
        if keep {
            out.push(nu.clone());
        }
    }
    Ok(out)
}

pub fn lambda_sets(rd: &Arc<RootDatum>, lambda: &Weight, levi: &[usize], filter: &LambdaFilter, max_elements: usize) -> Result<Vec<Weight>> {
    if let LambdaFilter::Mu(mu) = filter {
        rd.check_weight(mu)?;
    }
    let table = branch(rd, lambda, levi, max_elements)?;
    lambda_sets_from(rd, &table, filter)
}

/// Climbs to the `I_L`-highest element, returning it with the `f`-word (in
/// application order) that leads back down.
fn climb<C: CrystalGraph + ?Sized>(c: &C, levi: &[usize], mut b: usize) -> (usize, Vec<usize>) {
    let mut word = Vec::new();
    'up: loop {
        for (k, &i) in levi.iter().enumerate() {
            if let Some(up) = c.e(i, b) {
                word.push(k);
                b = up;
                continue 'up;
            }
        }
        word.reverse();
        return (b, word);
    }
}

/// One row of the bijection `⊔_ν B_L^G(λ)_ν × B^L(ν)_μ → B(λ)_μ`.
#[derive(Clone, Debug, Serialize)]
pub struct BijectionRow {
    pub element: usize,
    pub nu: Weight,
    /// the `I_L`-highest element of its `L`-component in `B(λ)`
    pub component: usize,
    /// position within the weight-`μ` fiber of `B^L(ν)`
    pub position: usize,
}

/// Checks `|B(λ)_μ| = Σ_ν n_ν · mult_{V_L(ν)}(μ)` with both sides from the
/// character oracle, and builds the explicit bijection from the crystal.
pub fn d_gl_check(rd: &Arc<RootDatum>, lambda: &Weight, mu: &Weight, levi: &[usize], max_elements: usize) -> Result<Report> {
    rd.check_indices(levi)?;
    rd.check_weight(mu)?;
    let c = build_crystal(rd, lambda, max_elements)?;
    let levi_datum = Arc::new(rd.levi(levi)?);
    let mut report = Report::new("Levi weight-space bijection").with_note(GEOMETRY_NOTE);

    // oracle side
    let full = freudenthal(rd, lambda)?;
    let chars = branch_chars(rd, lambda, levi)?;
    let cache = CharacterCache::new(levi_datum.clone());
    let mut oracle_sum = 0;
    for (nu, n) in &chars.table {
        oracle_sum += n * cache.get(nu)?.mult(mu);
    }
    let fiber = c.weight_fiber(mu);
    report.require(fiber.len() as u64 == full.mult(mu), || format!("|B(λ)_μ| = {} but oracle multiplicity is {}", fiber.len(), full.mult(mu)));
    report.require(fiber.len() as u64 == oracle_sum, || format!("|B(λ)_μ| = {} but Σ n_ν mult_ν(μ) = {oracle_sum}", fiber.len()));

    // crystal side
    let mut levi_crystals: HashMap<Weight, Crystal> = HashMap::new();
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for &b in &fiber {
        let (top, word) = climb(&c, levi, b);
        let nu = c.weight(top).clone();
        if !levi_crystals.contains_key(&nu) {
            levi_crystals.insert(nu.clone(), build_crystal(&levi_datum, &nu, max_elements)?);
        }
        let small = &levi_crystals[&nu];
        let mut y = Some(small.highest());
        for &k in &word {
            y = y.and_then(|y| small.f(k, y));
        }
        let Some(y) = y else {
            report.violation(format!("b{b}: f-word from its L-highest element does not apply in B_L({nu})"));
            continue;
        };
        let small_fiber = small.weight_fiber(mu);
        let Some(position) = small_fiber.iter().position(|&z| z == y) else {
            report.violation(format!("b{b}: transported element has weight {} in B_L({nu})", small.weight(y)));
            continue;
        };
        report.require(seen.insert((top, position)), || format!("b{b}: pair (b{top}, {position}) already used"));
        rows.push(BijectionRow { element: b, nu, component: top, position });
    }
    report.detail("fiber_size", fiber.len());
    report.detail("oracle_sum", oracle_sum);
    report.detail("bijection", &rows);
    Ok(report)
}

/// Checks that the `{i}`-components are `i`-strings: chains whose positions
/// match `ε_i`, `φ_i`, with each weight occurring once, and that moving one
/// step along the chain reproduces `e_i`, `f_i`.
pub fn string_structure_check<C: CrystalGraph + ?Sized>(c: &C, i: usize) -> Report {
    let mut report = Report::new(format!("i-string structure, i={}", i + 1));
    let n = c.len();
    // union-find over both edge directions
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for b in 0..n {
        for t in [c.e(i, b), c.f(i, b)].into_iter().flatten() {
            if t >= n {
                report.violation(format!("b{b}: edge to missing element {t}"));
                continue;
            }
            let (x, y) = (find(&mut parent, b), find(&mut parent, t));
            parent[x] = y;
        }
    }
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for b in 0..n {
        let r = find(&mut parent, b);
        components.entry(r).or_default().push(b);
    }
    let mut lengths = Vec::new();
    for members in components.values() {
        let tops: Vec<usize> = members.iter().copied().filter(|&b| c.e(i, b).is_none()).collect();
        if tops.len() != 1 {
            report.violation(format!("component of b{} has {} e-maximal elements", members[0], tops.len()));
            continue;
        }
        let mut chain = vec![tops[0]];
        while let Some(next) = c.f(i, *chain.last().unwrap()) {
            if next >= n || chain.contains(&next) || chain.len() > members.len() {
                break;
            }
            chain.push(next);
        }
        if chain.len() != members.len() {
            report.violation(format!("component of b{} is not a chain ({} of {} reached)", members[0], chain.len(), members.len()));
            continue;
        }
        let weights: BTreeSet<&Weight> = chain.iter().map(|&b| c.weight(b)).collect();
        report.require(weights.len() == chain.len(), || format!("string from b{} repeats a weight", chain[0]));
        let last = chain.len() - 1;
        for (k, &b) in chain.iter().enumerate() {
            report.require(c.epsilon(i, b) == k as i64, || format!("b{b}: ε = {} at string position {k}", c.epsilon(i, b)));
            report.require(c.phi(i, b) == (last - k) as i64, || format!("b{b}: φ = {} with {} steps left", c.phi(i, b), last - k));
            let up = k.checked_sub(1).map(|j| chain[j]);
            let down = chain.get(k + 1).copied();
            report.require(c.e(i, b) == up, || format!("b{b}: e differs from the string step"));
            report.require(c.f(i, b) == down, || format!("b{b}: f differs from the string step"));
        }
        lengths.push(chain.len());
    }
    report.detail("strings", lengths.len());
    report
}

/// Inclusions `Λ_μ ⊆ {ν in table : μ ≤_L ν} ⊆ {ν L-dominant : μ ≤_L ν ≤_L λ̃}`,
/// with strictness of each reported.
pub fn embeddings_shadow_check(rd: &Arc<RootDatum>, lambda: &Weight, mu: &Weight, levi: &[usize], max_elements: usize) -> Result<Report> {
    let tilde = lambda_tilde(rd, lambda, mu, levi)?;
    let table = branch(rd, lambda, levi, max_elements)?;
    let inner: BTreeSet<Weight> = lambda_sets_from(rd, &table, &LambdaFilter::Mu(mu.clone()))?.into_iter().collect();
    let mut middle = BTreeSet::new();
    for nu in table.table.keys() {
        if rd.dominance_leq(mu, nu, levi)? {
            middle.insert(nu.clone());
        }
    }
    // ν = μ + Σ c_i α_i with 0 ≤ c_i ≤ n_i
    let n = rd.integer_root_coords(&(&tilde - mu), levi)?.ok_or_else(|| Error::Internal("λ̃ − μ left the Levi root lattice".into()))?;
    let bound: u64 = n.iter().map(|&x| x as u64 + 1).product();
    if bound > max_elements as u64 {
        return Err(Error::GuardExceeded { lambda: tilde, limit: max_elements });
    }
    let mut outer = BTreeSet::new();
    let mut counter = vec![0i64; levi.len()];
    loop {
        let mut nu = mu.clone();
        for (k, &i) in levi.iter().enumerate() {
            nu = nu.add_scaled(rd.simple_root(i), counter[k]);
        }
        if rd.is_dominant_for(&nu, levi) {
            outer.insert(nu);
        }
        let Some(k) = (0..levi.len()).find(|&k| counter[k] < n[k]) else { break };
        counter[k] += 1;
        for c in &mut counter[..k] {
            *c = 0;
        }
    }

    let mut report = Report::new("Levi embeddings shadow").with_note(GEOMETRY_NOTE);
    for nu in inner.difference(&middle) {
        report.violation(format!("ν = {nu} has μ as an L-weight but μ ≰_L ν"));
    }
    for nu in middle.difference(&outer) {
        report.violation(format!("ν = {nu} is in the table with μ ≤_L ν but ν ≰_L λ̃"));
    }
    let lambda_tilde_dom = rd.dominant_representative(&tilde, &rd.full_index_set())?.0;
    report.detail("lambda_tilde", &tilde);
    report.detail("lambda_tilde_is_weight", is_weight_by_dominance(rd, lambda, &tilde)?);
    report.detail("lambda_tilde_dominant", &lambda_tilde_dom);
    report.detail("weights_with_mu", inner.len());
    report.detail("table_above_mu", middle.len());
    report.detail("below_lambda_tilde", outer.len());
    report.detail("first_inclusion_strict", inner.len() < middle.len());
    report.detail("second_inclusion_strict", middle.len() < outer.len());
    Ok(report)
}
