//! Finite crystal graphs: generation of `B(λ)` from the straight path,
//! characters, decomposition into highest-weight components and the
//! normal-crystal axiom check.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::path::Path;
use crate::report::Report;
use crate::root_datum::{RootDatum, Weight};

/// Default bound on the number of elements `build_crystal` will generate.
pub const DEFAULT_MAX_ELEMENTS: usize = 1_000_000;

/// Read access to a finite crystal. Elements are `0..len()`, indices are
/// 0-based positions in the datum's simple roots.
pub trait CrystalGraph {
    fn datum(&self) -> &RootDatum;
    fn len(&self) -> usize;
    fn weight(&self, b: usize) -> &Weight;
    fn f(&self, i: usize, b: usize) -> Option<usize>;
    fn e(&self, i: usize, b: usize) -> Option<usize>;
    /// `ε_i(b)` as reported by the model, independent of the edges.
    fn epsilon(&self, i: usize, b: usize) -> i64;
    /// `φ_i(b)` as reported by the model, independent of the edges.
    fn phi(&self, i: usize, b: usize) -> i64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn num_indices(&self) -> usize {
        self.datum().num_simple()
    }
}

/// Materialized crystal structure shared by [`Crystal`] and tensor products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GraphData {
    pub weights: Vec<Weight>,
    /// `f[i][b]`
    pub f: Vec<Vec<Option<usize>>>,
    pub e: Vec<Vec<Option<usize>>>,
    pub eps: Vec<Vec<i64>>,
    pub phi: Vec<Vec<i64>>,
}

/// The highest-weight crystal `B(λ)` realized by Littelmann paths.
#[derive(Clone, Debug)]
pub struct Crystal {
    datum: Arc<RootDatum>,
    highest_weight: Weight,
    elements: Vec<Path>,
    highest: usize,
    data: GraphData,
}

impl Crystal {
    pub fn datum_arc(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn highest_weight(&self) -> &Weight {
        &self.highest_weight
    }

    /// Index of `b_λ`.
    pub fn highest(&self) -> usize {
        self.highest
    }

    pub fn path(&self, b: usize) -> &Path {
        &self.elements[b]
    }

    pub fn paths(&self) -> &[Path] {
        &self.elements
    }

    pub fn index_of(&self, path: &Path) -> Option<usize> {
        self.elements.binary_search(path).ok()
    }

    /// Elements of weight `mu`, in element order.
    pub fn weight_fiber(&self, mu: &Weight) -> Vec<usize> {
        (0..self.len()).filter(|&b| &self.data.weights[b] == mu).collect()
    }
}

impl CrystalGraph for Crystal {
    fn datum(&self) -> &RootDatum {
        &self.datum
    }
    fn len(&self) -> usize {
        self.elements.len()
    }
    fn weight(&self, b: usize) -> &Weight {
        &self.data.weights[b]
    }
    fn f(&self, i: usize, b: usize) -> Option<usize> {
        self.data.f[i][b]
    }
    fn e(&self, i: usize, b: usize) -> Option<usize> {
        self.data.e[i][b]
    }
    fn epsilon(&self, i: usize, b: usize) -> i64 {
        self.data.eps[i][b]
    }
    fn phi(&self, i: usize, b: usize) -> i64 {
        self.data.phi[i][b]
    }
}

/// Closure of the straight path `t ↦ tλ` under all `f_i`.
pub fn build_crystal(rd: &Arc<RootDatum>, lambda: &Weight, max_elements: usize) -> Result<Crystal> {
    if max_elements == 0 {
        return Err(Error::InvalidInput("element guard must be positive".into()));
    }
    rd.ensure_dominant(lambda)?;
    let l = rd.num_simple();
    let top = Path::straight_unchecked(lambda);

    let mut index: HashMap<Path, usize> = HashMap::new();
    let mut paths: Vec<Path> = Vec::new();
    let mut f_raw: Vec<Vec<Option<usize>>> = vec![Vec::new(); l];
    index.insert(top.clone(), 0);
    paths.push(top);
    let mut queue = VecDeque::from([0usize]);
    while let Some(b) = queue.pop_front() {
        for (i, f_i) in f_raw.iter_mut().enumerate() {
            let target = match paths[b].lower(rd, i) {
                None => None,
                Some(p) => Some(match index.get(&p) {
                    Some(&k) => k,
                    None => {
                        let k = paths.len();
                        if k >= max_elements {
                            return Err(Error::GuardExceeded { lambda: lambda.clone(), limit: max_elements });
                        }
                        index.insert(p.clone(), k);
                        paths.push(p);
                        queue.push_back(k);
                        k
                    }
                }),
            };
            if f_i.len() <= b {
                f_i.resize(b + 1, None);
            }
            f_i[b] = target;
        }
    }
    let n = paths.len();
    for f_i in f_raw.iter_mut() {
        f_i.resize(n, None);
    }

    // canonical order: sort by path encoding
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| paths[a].cmp(&paths[b]));
    let mut rank_of = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        rank_of[old] = new;
    }
    let elements: Vec<Path> = order.iter().map(|&old| paths[old].clone()).collect();
    let f: Vec<Vec<Option<usize>>> = f_raw
        .iter()
        .map(|f_i| order.iter().map(|&old| f_i[old].map(|t| rank_of[t])).collect())
        .collect();
    let mut e: Vec<Vec<Option<usize>>> = vec![vec![None; n]; l];
    for i in 0..l {
        for b in 0..n {
            if let Some(t) = f[i][b] {
                e[i][t] = Some(b);
            }
        }
    }
    let rank = rd.rank();
    let weights = elements.iter().map(|p| p.weight(rank)).collect::<Result<Vec<_>>>()?;
    let mut eps = vec![vec![0i64; n]; l];
    let mut phi = vec![vec![0i64; n]; l];
    for (b, p) in elements.iter().enumerate() {
        for i in 0..l {
            let sd = p.string_data(rd, i)?;
            eps[i][b] = sd.epsilon;
            phi[i][b] = sd.phi;
        }
    }
    Ok(Crystal {
        datum: rd.clone(),
        highest_weight: lambda.clone(),
        highest: rank_of[0],
        elements,
        data: GraphData { weights, f, e, eps, phi },
    })
}

/// Weight multiplicities.
pub fn character<C: CrystalGraph + ?Sized>(c: &C) -> BTreeMap<Weight, u64> {
    let mut out = BTreeMap::new();
    for b in 0..c.len() {
        *out.entry(c.weight(b).clone()).or_insert(0) += 1;
    }
    out
}

/// Elements killed by every `e_i`, `i ∈ indices`.
pub fn highest_elements<C: CrystalGraph + ?Sized>(c: &C, indices: &[usize]) -> Vec<usize> {
    (0..c.len()).filter(|&b| indices.iter().all(|&i| c.e(i, b).is_none())).collect()
}

/// `I`-highest elements grouped by weight: for `I = I_G` on a normal crystal
/// this is the irreducible decomposition, for a Levi subset it gives the
/// branching multiplicities.
pub fn decompose<C: CrystalGraph + ?Sized>(c: &C, indices: &[usize]) -> BTreeMap<Weight, u64> {
    let mut out = BTreeMap::new();
    for b in highest_elements(c, indices) {
        *out.entry(c.weight(b).clone()).or_insert(0) += 1;
    }
    out
}

/// Lengths of `e_i`- (`up`) or `f_i`-strings starting at every element;
/// `None` where the chain runs into a cycle or a dangling edge.
fn string_lengths<C: CrystalGraph + ?Sized>(c: &C, i: usize, up: bool) -> Vec<Option<i64>> {
    let n = c.len();
    let step = |b: usize| if up { c.e(i, b) } else { c.f(i, b) };
    let mut len: Vec<Option<i64>> = vec![None; n];
    // 0 = unvisited, 1 = on the current chain, 2 = done
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] == 2 {
            continue;
        }
        let mut chain = Vec::new();
        let mut cur = Some(start);
        let base = loop {
            match cur {
                None => break Some(-1),
                Some(b) if b >= n || state[b] == 1 => break None,
                Some(b) if state[b] == 2 => break len[b],
                Some(b) => {
                    state[b] = 1;
                    chain.push(b);
                    cur = step(b);
                }
            }
        };
        for (k, &b) in chain.iter().rev().enumerate() {
            len[b] = base.map(|x| x + 1 + k as i64);
            state[b] = 2;
        }
    }
    len
}

/// Checks the crystal axioms and the normality equalities
/// `ε_i(b) = max{n : e_iⁿ b ≠ 0}`, `φ_i(b) = max{n : f_iⁿ b ≠ 0}`.
pub fn check_normal_crystal<C: CrystalGraph + ?Sized>(c: &C) -> Report {
    let mut report = Report::new("normal crystal axioms");
    let rd = c.datum();
    let n = c.len();
    for i in 0..c.num_indices() {
        let alpha = rd.simple_root(i);
        let e_len = string_lengths(c, i, true);
        let f_len = string_lengths(c, i, false);
        for b in 0..n {
            let (eps, phi) = (c.epsilon(i, b), c.phi(i, b));
            let wt = c.weight(b);
            report.require(eps >= 0 && phi >= 0, || format!("b{b}, i={}: negative ε/φ ({eps}, {phi})", i + 1));
            // (a)
            let pairing = rd.pair(wt, i);
            report.require(phi - eps == pairing, || format!("(a) b{b}, i={}: φ−ε = {} but ⟨wt, α̌⟩ = {pairing}", i + 1, phi - eps));
            // (b) and (c) for e_i
            if let Some(t) = c.e(i, b) {
                if t >= n {
                    report.violation(format!("b{b}, i={}: e-edge to missing element {t}", i + 1));
                    continue;
                }
                report.require(c.weight(t) == &(wt + alpha), || format!("(b) b{b}, i={}: wt(e b) ≠ wt(b) + α", i + 1));
                report.require(c.epsilon(i, t) == eps - 1, || format!("(b) b{b}, i={}: ε(e b) ≠ ε(b) − 1", i + 1));
                report.require(c.phi(i, t) == phi + 1, || format!("(b) b{b}, i={}: φ(e b) ≠ φ(b) + 1", i + 1));
                report.require(c.f(i, t) == Some(b), || format!("(c) b{b}, i={}: e b = b{t} but f b{t} ≠ b{b}", i + 1));
            }
            if let Some(t) = c.f(i, b) {
                if t >= n {
                    report.violation(format!("b{b}, i={}: f-edge to missing element {t}", i + 1));
                    continue;
                }
                report.require(c.weight(t) == &(wt - alpha), || format!("(b) b{b}, i={}: wt(f b) ≠ wt(b) − α", i + 1));
                report.require(c.epsilon(i, t) == eps + 1, || format!("(b) b{b}, i={}: ε(f b) ≠ ε(b) + 1", i + 1));
                report.require(c.phi(i, t) == phi - 1, || format!("(b) b{b}, i={}: φ(f b) ≠ φ(b) − 1", i + 1));
                report.require(c.e(i, t) == Some(b), || format!("(c) b{b}, i={}: f b = b{t} but e b{t} ≠ b{b}", i + 1));
            }
            // normality
            report.require(e_len[b] == Some(eps), || format!("normality b{b}, i={}: ε = {eps}, e-string length {:?}", i + 1, e_len[b]));
            report.require(f_len[b] == Some(phi), || format!("normality b{b}, i={}: φ = {phi}, f-string length {:?}", i + 1, f_len[b]));
        }
    }
    report.detail("elements", n);
    report
}
