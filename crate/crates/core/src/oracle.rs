//! Character-formula oracle, independent of the crystal engine: Weyl
//! dimension, Freudenthal multiplicities, Klimyk tensor decomposition,
//! branching by character stripping and weight membership.
//!
//! `ρ` is never formed as a vector. With `β̌ = Σ d_i α̌_i` we use
//! `⟨λ+ρ, β̌⟩ = Σ d_i (⟨λ, α̌_i⟩ + 1)`, which stays integral for reductive data
//! whose `ρ` is only half-integral. Weights below `λ` are addressed by their
//! simple-root coordinates `c` in `λ − Σ c_i α_i`, so central coordinates
//! ride along unchanged.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::error::{Error, Result};
use crate::levi::BranchResult;
use crate::root_datum::{RootDatum, Weight};

/// Weight multiplicities of an irreducible representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub highest_weight: Weight,
    pub mults: BTreeMap<Weight, u64>,
}

impl Serialize for CharacterTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let table: Vec<_> = self.mults.iter().map(|(nu, m)| json!({"nu": nu, "mult": m})).collect();
        let mut st = s.serialize_struct("CharacterTable", 2)?;
        st.serialize_field("highest_weight", &self.highest_weight)?;
        st.serialize_field("table", &table)?;
        st.end()
    }
}

impl CharacterTable {
    pub fn mult(&self, mu: &Weight) -> u64 {
        self.mults.get(mu).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.mults.values().sum()
    }
}

/// `Π_{β̌>0} ⟨λ+ρ, β̌⟩ / ⟨ρ, β̌⟩`.
pub fn weyl_dim(rd: &RootDatum, lambda: &Weight) -> Result<u64> {
    rd.ensure_dominant(lambda)?;
    let p = rd.pairings(lambda);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for r in rd.positive_roots() {
        let shifted: i64 = r.coroot_coords.iter().zip(&p).map(|(d, pi)| d * (pi + 1)).sum();
        let base: i64 = r.coroot_coords.iter().sum();
        num *= BigUint::from(shifted as u64);
        den *= BigUint::from(base as u64);
    }
    if &num % &den != BigUint::default() {
        return Err(Error::Internal(format!("Weyl dimension of {lambda} is not integral")));
    }
    (num / den).to_u64().ok_or_else(|| Error::InvalidInput(format!("dimension of {lambda} overflows u64")))
}

/// Inner products needed by Freudenthal's formula, in simple-root coordinates.
struct Form<'a> {
    rd: &'a RootDatum,
    /// `⟨λ, α̌_j⟩`
    p: Vec<i64>,
}

impl Form<'_> {
    /// `⟨λ − Σ c_i α_i, α̌_j⟩`
    fn pair(&self, c: &[i64], j: usize) -> i64 {
        let a = self.rd.cartan_matrix();
        self.p[j] - c.iter().enumerate().map(|(i, ci)| ci * a[j][i]).sum::<i64>()
    }

    /// `(λ − Σ c_i α_i, β)` for `β = Σ a_j α_j`.
    fn inner_with_root(&self, c: &[i64], root: &[i64]) -> i64 {
        let r = self.rd.symmetrizer();
        root.iter().enumerate().filter(|(_, a)| **a != 0).map(|(j, a)| a * r[j] * self.pair(c, j)).sum()
    }

    /// `|λ+ρ|² − |λ+ρ−β|² = 2(λ+ρ, β) − (β, β)` for `β = Σ c_i α_i`.
    fn norm_drop(&self, c: &[i64]) -> i64 {
        let r = self.rd.symmetrizer();
        let a = self.rd.cartan_matrix();
        let lin: i64 = c.iter().enumerate().map(|(i, ci)| ci * r[i] * (self.p[i] + 1)).sum();
        let mut quad = 0;
        for (i, ci) in c.iter().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                quad += ci * cj * r[i] * a[i][j];
            }
        }
        2 * lin - quad
    }
}

/// Freudenthal's recursion, level by level below `λ`.
///
/// `tails[c][k] = Σ_{n≥0} m(c − n a_k)·(μ_c + n β_k, β_k)` is kept for every
/// computed coordinate so the inner sum over each root string costs O(1).
pub fn freudenthal(rd: &RootDatum, lambda: &Weight) -> Result<CharacterTable> {
    rd.ensure_dominant(lambda)?;
    let l = rd.num_simple();
    let form = Form { rd, p: rd.pairings(lambda) };
    let roots: Vec<&[i64]> = rd.positive_roots().iter().map(|r| r.root_coords.as_slice()).collect();

    let mut mult: HashMap<Vec<i64>, u64> = HashMap::new();
    let mut tails: HashMap<Vec<i64>, Vec<i128>> = HashMap::new();

    let tail_of = |tails: &HashMap<Vec<i64>, Vec<i128>>, c: &[i64], k: usize| -> i128 {
        // walk up the β_k-string until a computed coordinate (or above λ)
        let mut cur: Vec<i64> = c.to_vec();
        loop {
            if cur.iter().any(|&x| x < 0) {
                return 0;
            }
            if let Some(t) = tails.get(&cur) {
                return t[k];
            }
            for (x, a) in cur.iter_mut().zip(roots[k]) {
                *x -= a;
            }
        }
    };

    let zero = vec![0i64; l];
    let top_tails: Vec<i128> = roots.iter().map(|a| i128::from(form.inner_with_root(&zero, a))).collect();
    mult.insert(zero.clone(), 1);
    tails.insert(zero.clone(), top_tails);
    let mut level = vec![zero];

    while !level.is_empty() {
        let mut candidates: Vec<Vec<i64>> = Vec::new();
        for c in &level {
            for i in 0..l {
                let mut next = c.clone();
                next[i] += 1;
                candidates.push(next);
            }
        }
        candidates.sort();
        candidates.dedup();

        let mut next_level = Vec::new();
        for c in candidates {
            let mut numer: i128 = 0;
            for (k, a) in roots.iter().enumerate() {
                let above: Vec<i64> = c.iter().zip(a.iter()).map(|(x, y)| x - y).collect();
                numer += tail_of(&tails, &above, k);
            }
            numer *= 2;
            let denom = i128::from(form.norm_drop(&c));
            // |λ+ρ| > |μ+ρ| for every weight μ ≠ λ, so the remaining candidates are not weights
            if denom <= 0 && numer != 0 {
                return Err(Error::Internal(format!("nonzero Freudenthal sum {numer} outside the weights at {c:?}")));
            }
            let denom = denom.max(1);
            if numer % denom != 0 {
                return Err(Error::Internal(format!("Freudenthal quotient {numer}/{denom} is not integral at {c:?}")));
            }
            let m = numer / denom;
            if m < 0 {
                return Err(Error::Internal(format!("negative multiplicity at {c:?}")));
            }
            let m = m as u64;
            let own: Vec<i128> = roots
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    let above: Vec<i64> = c.iter().zip(a.iter()).map(|(x, y)| x - y).collect();
                    i128::from(m) * i128::from(form.inner_with_root(&c, a)) + tail_of(&tails, &above, k)
                })
                .collect();
            tails.insert(c.clone(), own);
            if m > 0 {
                mult.insert(c.clone(), m);
                next_level.push(c);
            }
        }
        level = next_level;
    }

    let mut mults = BTreeMap::new();
    for (c, m) in mult {
        let mut w = lambda.clone();
        for (i, ci) in c.iter().enumerate() {
            w = w.add_scaled(rd.simple_root(i), -ci);
        }
        mults.insert(w, m);
    }
    Ok(CharacterTable { highest_weight: lambda.clone(), mults })
}

/// Read-mostly memo of Freudenthal tables for one datum.
#[derive(Debug)]
pub struct CharacterCache {
    datum: Arc<RootDatum>,
    tables: RwLock<HashMap<Weight, Arc<CharacterTable>>>,
}

impl CharacterCache {
    pub fn new(datum: Arc<RootDatum>) -> CharacterCache {
        CharacterCache { datum, tables: RwLock::new(HashMap::new()) }
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn get(&self, lambda: &Weight) -> Result<Arc<CharacterTable>> {
        if let Some(t) = self.tables.read().expect("cache lock").get(lambda) {
            return Ok(t.clone());
        }
        let table = Arc::new(freudenthal(&self.datum, lambda)?);
        let mut guard = self.tables.write().expect("cache lock");
        Ok(guard.entry(lambda.clone()).or_insert(table).clone())
    }
}

/// Moves `μ` to the dominant chamber under the dot action
/// `s_i · μ = μ − (⟨μ, α̌_i⟩ + 1) α_i`. Returns `None` for singular `μ + ρ`.
pub(crate) fn dot_dominant(rd: &RootDatum, mu: &Weight) -> Option<(Weight, i64)> {
    let mut w = mu.clone();
    let mut sign = 1;
    loop {
        let mut moved = false;
        for i in 0..rd.num_simple() {
            let s = rd.pair(&w, i) + 1;
            if s == 0 {
                return None;
            }
            if s < 0 {
                w = w.add_scaled(rd.simple_root(i), -s);
                sign = -sign;
                moved = true;
            }
        }
        if !moved {
            return Some((w, sign));
        }
    }
}

/// Irreducible decomposition of `V(λ₁) ⊗ V(λ₂)` by Klimyk's formula.
pub fn klimyk(rd: &RootDatum, lambda1: &Weight, lambda2: &Weight) -> Result<BTreeMap<Weight, u64>> {
    rd.ensure_dominant(lambda1)?;
    let table = freudenthal(rd, lambda2)?;
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    for (nu, &m) in &table.mults {
        if let Some((dom, sign)) = dot_dominant(rd, &(lambda1 + nu)) {
            *acc.entry(dom).or_insert(0) += sign * m as i64;
        }
    }
    let mut out = BTreeMap::new();
    for (w, m) in acc {
        match m {
            0 => {}
            m if m > 0 => {
                out.insert(w, m as u64);
            }
            m => return Err(Error::Internal(format!("Klimyk produced negative multiplicity {m} at {w}"))),
        }
    }
    Ok(out)
}

/// Branching to the Levi on `levi` by stripping `L`-characters off the
/// character of `V(λ)`, highest remaining `L`-height first.
pub fn branch_chars(rd: &RootDatum, lambda: &Weight, levi: &[usize]) -> Result<BranchResult> {
    rd.check_indices(levi)?;
    let full = freudenthal(rd, lambda)?;
    let levi_datum = Arc::new(rd.levi(levi)?);
    let cache = CharacterCache::new(levi_datum);
    let all = rd.full_index_set();

    // L-height of ν is −Σ_{i∈I_L} c_i where λ − ν = Σ c_i α_i
    let mut remaining: BTreeMap<Weight, i64> = BTreeMap::new();
    let mut depth: HashMap<Weight, i64> = HashMap::new();
    for (w, &m) in &full.mults {
        let c = rd
            .integer_root_coords(&(lambda - w), &all)?
            .ok_or_else(|| Error::Internal(format!("{w} is not in λ + root lattice")))?;
        depth.insert(w.clone(), levi.iter().map(|&i| c[i]).sum());
        remaining.insert(w.clone(), m as i64);
    }

    let mut table = BTreeMap::new();
    while let Some(nu) = remaining.keys().min_by_key(|w| (depth[*w], (*w).clone())).cloned() {
        let n = remaining[&nu];
        if !rd.is_dominant_for(&nu, levi) {
            return Err(Error::Internal(format!("L-maximal weight {nu} is not L-dominant")));
        }
        let sub = cache.get(&nu)?;
        for (w, &m) in &sub.mults {
            let entry = remaining
                .get_mut(w)
                .ok_or_else(|| Error::Internal(format!("stripping V_L({nu}) hits {w} outside the character")))?;
            *entry -= n * m as i64;
            if *entry < 0 {
                return Err(Error::Internal(format!("negative remainder at {w} after stripping V_L({nu})")));
            }
        }
        remaining.retain(|_, m| *m != 0);
        table.insert(nu, n as u64);
    }
    Ok(BranchResult { levi: levi.to_vec(), table })
}

/// `μ` is a weight of `V(λ)` iff its dominant conjugate lies below `λ`.
pub fn is_weight_by_dominance(rd: &RootDatum, lambda: &Weight, mu: &Weight) -> Result<bool> {
    rd.ensure_dominant(lambda)?;
    let (dom, _) = rd.dominant_representative(mu, &rd.full_index_set())?;
    rd.dominance_leq(&dom, lambda, &rd.full_index_set())
}

/// Weight membership, computed by dominance and by Freudenthal multiplicity;
/// the two must agree.
pub fn is_weight(rd: &RootDatum, lambda: &Weight, mu: &Weight) -> Result<bool> {
    let by_dominance = is_weight_by_dominance(rd, lambda, mu)?;
    let by_multiplicity = freudenthal(rd, lambda)?.mult(mu) > 0;
    if by_dominance != by_multiplicity {
        return Err(Error::Internal(format!(
            "weight test disagrees for {mu} in V({lambda}): dominance {by_dominance}, multiplicity {by_multiplicity}"
        )));
    }
    Ok(by_dominance)
}
