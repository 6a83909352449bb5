//! Tensor products of crystals, crystal maps, the retraction
//! `B(λ₁) ⊗ B(λ₂) → B(λ₁+λ₂) ∪ {0}` and its section.
//!
//! Convention: `e_i` acts on the left factor when `ε_i(b) > φ_i(b̂)`, `f_i`
//! when `ε_i(b) ≥ φ_i(b̂)`; `b_{λ₁} ⊗ b_{λ₂}` is the highest element.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::crystal::{build_crystal, check_normal_crystal, decompose, Crystal, CrystalGraph, GraphData};
use crate::error::{Error, Result};
use crate::oracle::klimyk;
use crate::report::Report;
use crate::root_datum::{RootDatum, Weight};

/// `B₁ ⊗ B₂` with elements `x ⊗ y` numbered `x·|B₂| + y`.
#[derive(Clone, Debug)]
pub struct TensorCrystal {
    datum: Arc<RootDatum>,
    left_len: usize,
    right_len: usize,
    data: GraphData,
}

impl TensorCrystal {
    pub fn left_len(&self) -> usize {
        self.left_len
    }

    pub fn right_len(&self) -> usize {
        self.right_len
    }

    /// Factors of a tensor element.
    pub fn pair(&self, b: usize) -> (usize, usize) {
        (b / self.right_len, b % self.right_len)
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        x * self.right_len + y
    }

    pub fn datum_arc(&self) -> &Arc<RootDatum> {
        &self.datum
    }
}

impl CrystalGraph for TensorCrystal {
    fn datum(&self) -> &RootDatum {
        &self.datum
    }
    fn len(&self) -> usize {
        self.data.weights.len()
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

pub fn tensor<A, B>(left: &A, right: &B) -> Result<TensorCrystal>
where
    A: CrystalGraph + ?Sized,
    B: CrystalGraph + ?Sized,
{
    if left.datum() != right.datum() {
        return Err(Error::DatumMismatch);
    }
    let (n1, n2) = (left.len(), right.len());
    let n = n1 * n2;
    let l = left.num_indices();
    let mut data = GraphData {
        weights: Vec::with_capacity(n),
        f: vec![vec![None; n]; l],
        e: vec![vec![None; n]; l],
        eps: vec![vec![0; n]; l],
        phi: vec![vec![0; n]; l],
    };
    for x in 0..n1 {
        for y in 0..n2 {
            data.weights.push(left.weight(x) + right.weight(y));
        }
    }
    for i in 0..l {
        for x in 0..n1 {
            let (ex, px) = (left.epsilon(i, x), left.phi(i, x));
            for y in 0..n2 {
                let (ey, py) = (right.epsilon(i, y), right.phi(i, y));
                let b = x * n2 + y;
                data.eps[i][b] = ey.max(ex - py + ey);
                data.phi[i][b] = px.max(py - ex + px);
                data.e[i][b] = if ex > py {
                    left.e(i, x).map(|x2| x2 * n2 + y)
                } else {
                    right.e(i, y).map(|y2| x * n2 + y2)
                };
                data.f[i][b] = if ex >= py {
                    left.f(i, x).map(|x2| x2 * n2 + y)
                } else {
                    right.f(i, y).map(|y2| x * n2 + y2)
                };
            }
        }
    }
    Ok(TensorCrystal { datum: Arc::new(left.datum().clone()), left_len: n1, right_len: n2, data })
}

/// A map `B₁ → B₂ ∪ {0}`; `None` is zero. Source and target are supplied
/// when the map is checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystalMap {
    pub assignment: Vec<Option<usize>>,
}

impl CrystalMap {
    pub fn identity(n: usize) -> CrystalMap {
        CrystalMap { assignment: (0..n).map(Some).collect() }
    }

    pub fn apply(&self, b: usize) -> Option<usize> {
        self.assignment[b]
    }

    pub fn zero_count(&self) -> usize {
        self.assignment.iter().filter(|t| t.is_none()).count()
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    assignment: Vec<(usize, Option<usize>)>,
}

impl Serialize for CrystalMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapJson { assignment: self.assignment.iter().copied().enumerate().collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CrystalMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MapJson::deserialize(d)?;
        let mut assignment = vec![None; raw.assignment.len()];
        let mut seen = vec![false; raw.assignment.len()];
        for (src, dst) in raw.assignment {
            if src >= assignment.len() || seen[src] {
                return Err(serde::de::Error::custom(format!("assignment source {src} missing or repeated")));
            }
            seen[src] = true;
            assignment[src] = dst;
        }
        Ok(CrystalMap { assignment })
    }
}

/// Checks the morphism conditions: (a) `wt`, `ε_i`, `φ_i` preserved where the
/// image is nonzero; (b), (c) commutation with `e_i`, `f_i` where both images
/// are nonzero. With `strict`, full commutation with `0` absorbing.
pub fn verify_morphism<S, T>(source: &S, target: &T, map: &CrystalMap, strict: bool) -> Report
where
    S: CrystalGraph + ?Sized,
    T: CrystalGraph + ?Sized,
{
    let mut report = Report::new(if strict { "strict crystal morphism" } else { "crystal morphism" });
    if source.datum() != target.datum() {
        report.violation("source and target have different root data");
        return report;
    }
    if map.assignment.len() != source.len() {
        report.violation(format!("map covers {} of {} source elements", map.assignment.len(), source.len()));
        return report;
    }
    if let Some((b, t)) = map.assignment.iter().enumerate().find_map(|(b, t)| t.filter(|&t| t >= target.len()).map(|t| (b, t))) {
        report.violation(format!("b{b} maps to missing target element {t}"));
        return report;
    }
    let l = source.num_indices();
    let p = |b: Option<usize>| b.and_then(|b| map.apply(b));
    for b in 0..source.len() {
        let image = map.apply(b);
        if let Some(t) = image {
            report.require(source.weight(b) == target.weight(t), || {
                format!("(a) b{b}: wt {} maps to wt {}", source.weight(b), target.weight(t))
            });
            for i in 0..l {
                report.require(source.epsilon(i, b) == target.epsilon(i, t), || format!("(a) b{b}, i={}: ε not preserved", i + 1));
                report.require(source.phi(i, b) == target.phi(i, t), || format!("(a) b{b}, i={}: φ not preserved", i + 1));
            }
        }
        for i in 0..l {
            let up = p(source.e(i, b));
            let down = p(source.f(i, b));
            let up_t = image.and_then(|t| target.e(i, t));
            let down_t = image.and_then(|t| target.f(i, t));
            if image.is_some() && up.is_some() {
                report.require(up == up_t, || format!("(b) b{b}, i={}: p(e b) ≠ e p(b)", i + 1));
            } else if strict {
                report.require(up == up_t, || format!("strict b{b}, i={}: p(e b) ≠ e p(b) with zero", i + 1));
            }
            if image.is_some() && down.is_some() {
                report.require(down == down_t, || format!("(c) b{b}, i={}: p(f b) ≠ f p(b)", i + 1));
            } else if strict {
                report.require(down == down_t, || format!("strict b{b}, i={}: p(f b) ≠ f p(b) with zero", i + 1));
            }
        }
    }
    report
}

/// The retraction together with the crystals it relates.
#[derive(Clone, Debug)]
pub struct Retraction {
    pub tensor: TensorCrystal,
    pub target: Crystal,
    pub map: CrystalMap,
}

/// `p_{λ₁,λ₂}`: transports f-words from `b_{λ₁} ⊗ b_{λ₂}` to `b_{λ₁+λ₂}`; every
/// element outside that component goes to zero.
pub fn retraction(b1: &Crystal, b2: &Crystal, max_elements: usize) -> Result<Retraction> {
    if b1.datum() != b2.datum() {
        return Err(Error::DatumMismatch);
    }
    let tensor = tensor(b1, b2)?;
    let target = build_crystal(b1.datum_arc(), &(b1.highest_weight() + b2.highest_weight()), max_elements)?;
    let top = tensor.index(b1.highest(), b2.highest());
    let mut assignment = vec![None; tensor.len()];
    assignment[top] = Some(target.highest());
    let mut queue = VecDeque::from([top]);
    while let Some(x) = queue.pop_front() {
        let y = assignment[x].expect("queued elements are assigned");
        for i in 0..tensor.num_indices() {
            match (tensor.f(i, x), target.f(i, y)) {
                (None, None) => {}
                (Some(x2), Some(y2)) => match assignment[x2] {
                    None => {
                        assignment[x2] = Some(y2);
                        queue.push_back(x2);
                    }
                    Some(prev) if prev == y2 => {}
                    Some(prev) => {
                        return Err(Error::Internal(format!("f-word transport is ambiguous at b{x2}: b{prev} vs b{y2}")))
                    }
                },
                _ => return Err(Error::Internal(format!("f_{} defined on only one side at b{x}", i + 1))),
            }
        }
    }
    Ok(Retraction { tensor, target, map: CrystalMap { assignment } })
}

/// Section `ι` of a retraction: each target element goes to its preimage.
pub fn section(map: &CrystalMap, target_len: usize) -> Result<CrystalMap> {
    let mut assignment = vec![None; target_len];
    for (x, t) in map.assignment.iter().enumerate() {
        if let Some(t) = *t {
            if assignment[t].replace(x).is_some() {
                return Err(Error::Internal(format!("b{t} has several preimages")));
            }
        }
    }
    if let Some(t) = assignment.iter().position(Option::is_none) {
        return Err(Error::Internal(format!("b{t} is not in the image")));
    }
    Ok(CrystalMap { assignment })
}

/// Outcome of the closed-family check for one pair of highest weights.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub retraction: Retraction,
    pub embedding: CrystalMap,
    pub report: Report,
}

/// Builds `p_{λ₁,λ₂}` and `ι_{λ₁,λ₂}` and checks: the tensor crystal is normal,
/// `p` is a strict retraction, `ι` is an injective strict morphism with
/// `p ∘ ι = id`, the zero fiber has the expected size, and the decomposition
/// matches Klimyk's formula.
pub fn closed_family_certificate(rd: &Arc<RootDatum>, lambda1: &Weight, lambda2: &Weight, max_elements: usize) -> Result<Certificate> {
    let b1 = build_crystal(rd, lambda1, max_elements)?;
    let b2 = build_crystal(rd, lambda2, max_elements)?;
    let ret = retraction(&b1, &b2, max_elements)?;
    let (tensor, target, p) = (&ret.tensor, &ret.target, &ret.map);
    let mut report = Report::new(format!("closed family {lambda1} ⊗ {lambda2}"));

    report.absorb(check_normal_crystal(tensor));
    report.absorb(verify_morphism(tensor, target, p, true));
    let iota = section(p, target.len())?;
    report.absorb(verify_morphism(target, tensor, &iota, true));
    let mut seen = vec![false; tensor.len()];
    for (b, x) in iota.assignment.iter().enumerate() {
        let x = x.expect("section is total");
        report.require(!std::mem::replace(&mut seen[x], true), || format!("ι is not injective at b{b}"));
        report.require(p.apply(x) == Some(b), || format!("p ∘ ι ≠ id at b{b}"));
    }
    let expected_zero = tensor.len() - target.len();
    report.require(p.zero_count() == expected_zero, || format!("{} elements map to zero, expected {expected_zero}", p.zero_count()));

    let found = decompose(tensor, &rd.full_index_set());
    let oracle = klimyk(rd, lambda1, lambda2)?;
    report.require(found == oracle, || format!("decomposition {} ≠ Klimyk {}", fmt_decomp(&found), fmt_decomp(&oracle)));
    report.detail("tensor_size", tensor.len());
    report.detail("component_size", target.len());
    report.detail("zero_fiber", p.zero_count());
    Ok(Certificate { retraction: ret, embedding: iota, report })
}

pub(crate) fn fmt_decomp(d: &BTreeMap<Weight, u64>) -> String {
    let parts: Vec<String> = d.iter().map(|(w, m)| format!("{w}×{m}")).collect();
    format!("{{{}}}", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{character, DEFAULT_MAX_ELEMENTS};

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn datum(name: &str) -> Arc<RootDatum> {
        Arc::new(RootDatum::parse(name).unwrap())
    }

    fn build(rd: &Arc<RootDatum>, hw: &[i64]) -> Crystal {
        build_crystal(rd, &w(hw), DEFAULT_MAX_ELEMENTS).unwrap()
    }

    #[test]
    fn a1_two_by_two() {
        let rd = datum("A1");
        let v = build(&rd, &[1]);
        let t = tensor(&v, &v).unwrap();
        assert_eq!(t.len(), 4);
        assert!(check_normal_crystal(&t).passed());
        assert_eq!(decompose(&t, &[0]), BTreeMap::from([(w(&[2]), 1), (w(&[0]), 1)]));
        // ε/φ of u⊗u, u⊗d, d⊗u, d⊗d
        let (u, d) = (v.highest(), 1 - v.highest());
        assert_eq!(t.f(0, t.index(u, u)), Some(t.index(u, d)));
        assert_eq!(t.f(0, t.index(u, d)), Some(t.index(d, d)));
        assert_eq!(t.f(0, t.index(d, u)), None);
        assert_eq!(t.e(0, t.index(d, u)), None);
    }

    #[test]
    fn unit_object_is_isomorphic() {
        let rd = datum("A2");
        let one = build(&rd, &[0, 0]);
        let v = build(&rd, &[2, 1]);
        for t in [tensor(&one, &v).unwrap(), tensor(&v, &one).unwrap()] {
            assert_eq!(t.len(), v.len());
            for b in 0..v.len() {
                let tb = if t.left_len() == 1 { t.index(0, b) } else { t.index(b, 0) };
                assert_eq!(t.weight(tb), v.weight(b));
                for i in 0..2 {
                    let fb = v.f(i, b).map(|x| if t.left_len() == 1 { t.index(0, x) } else { t.index(x, 0) });
                    assert_eq!(t.f(i, tb), fb);
                    assert_eq!(t.epsilon(i, tb), v.epsilon(i, b));
                }
            }
        }
    }

    #[test]
    fn a2_three_by_three_bar() {
        let rd = datum("A2");
        let t = tensor(&build(&rd, &[1, 0]), &build(&rd, &[0, 1])).unwrap();
        assert_eq!(decompose(&t, &[0, 1]), BTreeMap::from([(w(&[1, 1]), 1), (w(&[0, 0]), 1)]));
    }

    #[test]
    fn character_is_convolution() {
        let rd = datum("B2");
        let (x, y) = (build(&rd, &[1, 0]), build(&rd, &[0, 1]));
        let t = tensor(&x, &y).unwrap();
        let mut conv: BTreeMap<Weight, u64> = BTreeMap::new();
        for (a, m) in character(&x) {
            for (b, n) in character(&y) {
                *conv.entry(&a + &b).or_insert(0) += m * n;
            }
        }
        assert_eq!(character(&t), conv);
    }

    #[test]
    fn associativity_of_decomposition() {
        let rd = datum("A2");
        let (x, y, z) = (build(&rd, &[1, 0]), build(&rd, &[0, 1]), build(&rd, &[1, 1]));
        let left = tensor(&tensor(&x, &y).unwrap(), &z).unwrap();
        let right = tensor(&x, &tensor(&y, &z).unwrap()).unwrap();
        assert!(check_normal_crystal(&left).passed());
        assert_eq!(decompose(&left, &[0, 1]), decompose(&right, &[0, 1]));
    }

    #[test]
    fn datum_mismatch() {
        let a = build(&datum("A2"), &[1, 0]);
        let b = build(&datum("GL3"), &[1, 0, 0]);
        assert!(matches!(tensor(&a, &b), Err(Error::DatumMismatch)));
    }

    #[test]
    fn a1_retraction() {
        let rd = datum("A1");
        let v = build(&rd, &[1]);
        let r = retraction(&v, &v, DEFAULT_MAX_ELEMENTS).unwrap();
        let (u, d) = (v.highest(), 1 - v.highest());
        let t = &r.tensor;
        assert_eq!(r.map.apply(t.index(u, u)), Some(r.target.highest()));
        let mid = r.map.apply(t.index(u, d)).unwrap();
        assert_eq!(r.target.weight(mid), &w(&[0]));
        assert_eq!(r.map.apply(t.index(d, u)), None);
        assert_eq!(r.map.zero_count(), 1);
        assert!(verify_morphism(t, &r.target, &r.map, true).passed());
    }

    #[test]
    fn identity_and_mutation() {
        let rd = datum("A2");
        let v = build(&rd, &[1, 1]);
        let id = CrystalMap::identity(v.len());
        assert!(verify_morphism(&v, &v, &id, true).passed());
        let mut bad = id.clone();
        let (a, b) = (v.highest(), v.f(0, v.highest()).unwrap());
        bad.assignment.swap(a, b);
        let report = verify_morphism(&v, &v, &bad, false);
        assert!(report.violations.iter().any(|m| m.starts_with("(a)")), "{report}");
    }

    #[test]
    fn certificates() {
        for (name, x, y) in [("A1", vec![1], vec![1]), ("A2", vec![2, 1], vec![0, 0]), ("G2", vec![1, 0], vec![1, 0]), ("GL3", vec![2, 1, 0], vec![1, 0, 0])] {
            let rd = datum(name);
            let cert = closed_family_certificate(&rd, &w(&x), &w(&y), DEFAULT_MAX_ELEMENTS).unwrap();
            assert!(cert.report.passed(), "{name}: {}", cert.report);
        }
        let cert = closed_family_certificate(&datum("A1"), &w(&[1]), &w(&[1]), DEFAULT_MAX_ELEMENTS).unwrap();
        assert_eq!(cert.embedding.assignment.len(), 3);
        assert_eq!(cert.retraction.tensor.len(), 4);
    }

    #[test]
    fn map_json_round_trip() {
        let m = CrystalMap { assignment: vec![Some(2), None, Some(0)] };
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"assignment":[[0,2],[1,null],[2,0]]}"#);
        assert_eq!(serde_json::from_str::<CrystalMap>(&s).unwrap(), m);
    }
}
