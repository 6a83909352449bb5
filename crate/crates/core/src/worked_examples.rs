//! Explicit small cases: the GL₂ slice family, the PGL₃ repellent, the GL₄
//! and GL₃ Levi examples, and the height formula for repellent dimensions.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::crystal::DEFAULT_MAX_ELEMENTS;
use crate::error::{Error, Result};
use crate::lattice::rank;
use crate::levi::{branch, embeddings_shadow_check, lambda_sets_from, lambda_tilde, LambdaFilter};
use crate::oracle::{freudenthal, is_weight, is_weight_by_dominance, weyl_dim};
use crate::poly::{det2, IntPoly};
use crate::report::Report;
use crate::root_datum::{RootDatum, Weight};

fn w(v: &[i64]) -> Weight {
    Weight(v.to_vec())
}

/// `Σ n_i` for `λ − μ = Σ n_i α_i`, the dimension of the repellent.
pub fn dim_repellent(rd: &RootDatum, lambda: &Weight, mu: &Weight) -> Result<u64> {
    rd.check_weight(lambda)?;
    rd.check_weight(mu)?;
    let diff = lambda - mu;
    match rd.integer_root_coords(&diff, &rd.full_index_set())? {
        Some(n) if n.iter().all(|&x| x >= 0) => Ok(n.iter().sum::<i64>() as u64),
        _ => Err(Error::NotInRootCone(diff)),
    }
}

/// `½ Σ_{β̌>0} ⟨λ − μ, β̌⟩`, computed without root coordinates.
pub fn dim_by_coroots(rd: &RootDatum, lambda: &Weight, mu: &Weight) -> Result<u64> {
    rd.check_weight(lambda)?;
    rd.check_weight(mu)?;
    let diff = lambda - mu;
    let twice: i64 = rd.positive_roots().iter().map(|r| diff.dot(&r.coroot)).sum();
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::NotInRootCone(diff));
    }
    Ok(twice as u64 / 2)
}

/// `det [[z^{N−m}, 0], [C, z^m]] = z^N` with `C = Σ_{k<m} c_k z^k`, `m` free
/// parameters, and agreement with the GL₂ weight and height data.
pub fn gl2_slice_check(n: u32, m: u32) -> Result<Report> {
    gl2_slice_check_on(&RootDatum::gl(2)?, n, m)
}

pub fn gl2_slice_check_on(gl2: &RootDatum, n: u32, m: u32) -> Result<Report> {
    if m > n {
        return Err(Error::InvalidInput(format!("m = {m} exceeds N = {n}: (N−m, m) is not a weight of V(N, 0)")));
    }
    let mut report = Report::new(format!("GL2 slice N={n} m={m}"));
    let mut c = IntPoly::zero();
    for k in 0..m {
        c = &c + &(&IntPoly::param(k as usize) * &IntPoly::z_pow(k));
    }
    let matrix = [[IntPoly::z_pow(n - m), IntPoly::zero()], [c.clone(), IntPoly::z_pow(m)]];
    let det = det2(&matrix);
    report.require(det == IntPoly::z_pow(n), || format!("det = {det}, expected z^{n}"));
    if let Some(d) = c.degree_z() {
        report.require(d < m, || format!("deg C = {d} is not below m = {m}"));
    }
    let params = c.parameters().len();
    report.require(params == m as usize, || format!("{params} free parameters, expected {m}"));
    let (n, m) = (i64::from(n), i64::from(m));
    let (lambda, mu) = (w(&[n, 0]), w(&[n - m, m]));
    let dim = dim_repellent(gl2, &lambda, &mu)?;
    report.require(dim == m as u64, || format!("dim_repellent = {dim}, expected {m}"));
    report.require(is_weight(gl2, &lambda, &mu)?, || format!("{mu} is not a weight of V({lambda})"));
    report.detail("determinant", det.to_string());
    report.detail("parameters", params);
    Ok(report)
}

/// PGL₃ with `λ = ϖ₁`, `μ = −ϖ₂`: `λ − μ = α₁ + α₂`, a plane.
pub fn pgl3_check(pgl3: &RootDatum) -> Result<Report> {
    let mut report = Report::new("PGL3 repellent dimension");
    let (lambda, mu) = (w(&[1, 0]), w(&[0, -1]));
    let coords = rd_coords(pgl3, &(&lambda - &mu))?;
    report.require(coords == vec![1, 1], || format!("λ − μ has root coordinates {coords:?}"));
    let dim = dim_repellent(pgl3, &lambda, &mu)?;
    let by_coroots = dim_by_coroots(pgl3, &lambda, &mu)?;
    report.require(dim == 2, || format!("dim_repellent = {dim}, expected 2"));
    report.require(by_coroots == dim, || format!("coroot formula gives {by_coroots}"));
    report.detail("dim_repellent", dim);
    Ok(report)
}

fn rd_coords(rd: &RootDatum, v: &Weight) -> Result<Vec<i64>> {
    rd.integer_root_coords(v, &rd.full_index_set())?.ok_or_else(|| Error::NotInRootCone(v.clone()))
}

/// GL₄, `λ = 2ε₁ − 2ε₄`, `μ = −ε₂ + ε₃`, `I_L = {1, 3}`.
pub fn gl4_lambda_tilde_check(gl4: &RootDatum) -> Result<Report> {
    let mut report = Report::new("GL4 lambda tilde");
    let (lambda, mu) = (w(&[2, 0, 0, -2]), w(&[0, -1, 1, 0]));
    let levi = [0, 2];
    let coords = rd_coords(gl4, &(&lambda - &mu))?;
    report.require(coords == vec![2, 3, 2], || format!("λ − μ has root coordinates {coords:?}"));
    let tilde = lambda_tilde(gl4, &lambda, &mu, &levi)?;
    report.require(tilde == w(&[2, -3, 3, -2]), || format!("λ̃ = {tilde}"));
    let tilde_is_weight = is_weight(gl4, &lambda, &tilde)?;
    report.require(!tilde_is_weight, || "λ̃ is a weight of V(λ)".into());
    let (dom, _) = gl4.dominant_representative(&tilde, &gl4.full_index_set())?;
    report.require(dom == w(&[3, 2, -2, -3]), || format!("dominant conjugate of λ̃ is {dom}"));
    let above = rd_coords(gl4, &(&dom - &lambda))?;
    report.require(above.iter().all(|&x| x >= 0) && above.iter().any(|&x| x > 0), || format!("λ̃^dom − λ = {above:?} is not strictly positive"));
    report.detail("lambda_tilde", &tilde);
    report.detail("lambda_tilde_is_weight", tilde_is_weight);
    report.detail("lambda_tilde_dominant", &dom);
    report.detail("dominant_minus_lambda_root_coords", &above);
    Ok(report)
}

/// `ℂ³ ⊗ Λ²ℂ³`, basis `v_a ⊗ (v_b ∧ v_c)` with `b < c`.
mod wedge {
    pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

    pub fn index(a: usize, b: usize, c: usize) -> (usize, i64) {
        match (b, c) {
            _ if b == c => (usize::MAX, 0),
            _ if b < c => (a * 3 + PAIRS.iter().position(|&p| p == (b, c)).unwrap(), 1),
            _ => (a * 3 + PAIRS.iter().position(|&p| p == (c, b)).unwrap(), -1),
        }
    }

    fn add(out: &mut [i64], (k, sign): (usize, i64), coef: i64) {
        if sign != 0 {
            out[k] += sign * coef;
        }
    }

    /// Action of the matrix unit `E_{ij}` (`E_{ij} v_k = δ_{jk} v_i`).
    pub fn act(i: usize, j: usize, x: &[i64]) -> Vec<i64> {
        let mut out = vec![0; 9];
        for a in 0..3 {
            for (p, &(b, c)) in PAIRS.iter().enumerate() {
                let coef = x[a * 3 + p];
                if coef == 0 {
                    continue;
                }
                if a == j {
                    add(&mut out, index(i, b, c), coef);
                }
                if b == j {
                    add(&mut out, index(a, i, c), coef);
                }
                if c == j {
                    add(&mut out, index(a, b, i), coef);
                }
            }
        }
        out
    }

    /// Row of the map `v_a ⊗ (v_b ∧ v_c) ↦ v_a ∧ v_b ∧ v_c` to `Λ³ℂ³`.
    pub fn to_top() -> Vec<i64> {
        let mut row = vec![0; 9];
        for a in 0..3 {
            for (p, &(b, c)) in PAIRS.iter().enumerate() {
                if a != b && a != c {
                    // a is inserted in front of b < c
                    let inversions = usize::from(a > b) + usize::from(a > c);
                    row[a * 3 + p] = if inversions % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        row
    }
}

/// The vector `2v₃⊗(v₁∧v₂) + v₂⊗(v₁∧v₃) − v₁⊗(v₂∧v₃)`.
pub fn gl3_vector() -> Vec<i64> {
    let mut x = vec![0; 9];
    x[wedge::index(2, 0, 1).0] = 2;
    x[wedge::index(1, 0, 2).0] = 1;
    x[wedge::index(0, 1, 2).0] = -1;
    x
}

pub fn gl3_branch_vector_check() -> Result<Report> {
    gl3_branch_vector_check_on(&Arc::new(RootDatum::gl(3)?))
}

/// Linear algebra on the explicit vector, cross-checked against the crystal
/// branching table and the weight tests for `λ = 2ε₁ + ε₂`, `I_L = {1}`.
pub fn gl3_branch_vector_check_on(gl3: &Arc<RootDatum>) -> Result<Report> {
    let mut report = Report::new("GL3 branching vector");
    let x = gl3_vector();
    let nu = w(&[1, 1, 1]);
    let (lambda, mu) = (w(&[2, 1, 0]), w(&[0, 2, 1]));
    let levi = [0];

    for k in 0..3 {
        report.require(wedge::act(k, k, &x) == x, || format!("E_{k}{k} does not act by 1"));
    }
    let raised = wedge::act(0, 1, &x);
    report.require(raised.iter().all(|&c| c == 0), || format!("E_12 x = {raised:?}"));
    let raised_other = wedge::act(1, 2, &x);
    report.detail("annihilated_by_E23", raised_other.iter().all(|&c| c == 0));

    let top = wedge::to_top();
    let image: i64 = top.iter().zip(&x).map(|(a, b)| a * b).sum();
    report.require(image == 0, || format!("x maps to {image} in the top exterior power"));
    let kernel_dim = 9 - rank(&[top]) as u64;
    let dim = weyl_dim(gl3, &lambda)?;
    report.require(kernel_dim == dim, || format!("kernel dimension {kernel_dim} ≠ dim V(λ) = {dim}"));
    let det_dim = weyl_dim(gl3, &w(&[1, 1, 1]))?;
    report.require(dim + det_dim == 9, || format!("{dim} + {det_dim} ≠ 9"));

    let table = branch(gl3, &lambda, &levi, DEFAULT_MAX_ELEMENTS)?;
    report.require(table.table.get(&nu) == Some(&1), || format!("n_ν = {:?} for ν = {nu}", table.table.get(&nu)));
    report.require(is_weight(gl3, &lambda, &mu)?, || format!("{mu} is not a weight of V(λ)"));
    let below = gl3.dominance_leq(&mu, &nu, &levi)? && mu != nu;
    report.require(below, || format!("{mu} is not strictly below {nu} for L"));
    let levi_datum = gl3.levi(&levi)?;
    let l_weight = is_weight_by_dominance(&levi_datum, &nu, &mu)?;
    let l_mult = freudenthal(&levi_datum, &nu)?.mult(&mu);
    report.require(!l_weight && l_mult == 0, || format!("{mu} is a weight of V_L({nu})"));
    let with_mu = lambda_sets_from(gl3, &table, &LambdaFilter::Mu(mu.clone()))?;
    report.require(!with_mu.contains(&nu), || format!("{nu} survives the μ filter"));

    report.detail("weight", &nu);
    report.detail("isotypic_kernel_dim", kernel_dim);
    report.detail("mu_below_nu", below);
    report.detail("mu_is_l_weight", l_weight);
    Ok(report)
}

/// Fundamental-representation dimensions, for data with the listed labels.
const FUNDAMENTAL_DIMS: &[(&str, &[u64])] =
    &[("A2", &[3, 3]), ("B2", &[5, 4]), ("C2", &[4, 5]), ("G2", &[7, 14]), ("GL3", &[3, 3]), ("PGL3", &[3, 3])];

/// Height and coroot formulas agree on every weight of each fundamental
/// representation; the dimensions match the frozen table.
pub fn dimension_formula_check(rd: &RootDatum) -> Result<Report> {
    let mut report = Report::new(format!("dimension formula {}", rd.name()));
    let expected = FUNDAMENTAL_DIMS.iter().find(|(n, _)| *n == rd.name()).map(|(_, d)| *d);
    let l = rd.num_simple();
    let mut dims = Vec::new();
    for i in 0..l {
        let pairings: Vec<i64> = (0..l).map(|k| i64::from(k == i)).collect();
        let lambda = rd.weight_from_pairings(&pairings)?;
        let table = freudenthal(rd, &lambda)?;
        for mu in table.mults.keys() {
            let a = dim_repellent(rd, &lambda, mu)?;
            let b = dim_by_coroots(rd, &lambda, mu)?;
            report.require(a == b, || format!("λ = {lambda}, μ = {mu}: height {a}, coroot sum {b}"));
        }
        dims.push(weyl_dim(rd, &lambda)?);
    }
    if let Some(expected) = expected {
        report.require(dims == expected, || format!("fundamental dimensions {dims:?}, expected {expected:?}"));
    }
    report.detail("fundamental_dims", &dims);
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleEntry {
    pub example: String,
    pub paper_location: String,
    pub status: &'static str,
    pub details: Value,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct ExamplesReport {
    pub entries: Vec<ExampleEntry>,
}

impl ExamplesReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status == "pass")
    }

    pub fn table(&self) -> String {
        let width = self.entries.iter().map(|e| e.example.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for e in &self.entries {
            let pad = width - e.example.chars().count();
            out.push_str(&format!("{}{}  {:4}  {:>6} ms  {}\n", e.example, " ".repeat(pad), e.status, e.elapsed_ms, e.paper_location));
        }
        out
    }
}

fn entry(example: &str, location: &str, run: impl FnOnce() -> Result<Report>) -> ExampleEntry {
    let start = Instant::now();
    let outcome = run();
    let elapsed_ms = start.elapsed().as_millis();
    let (status, details) = match outcome {
        Ok(r) => (
            if r.passed() { "pass" } else { "fail" },
            json!({"violations": r.violations, "values": r.details, "note": r.note}),
        ),
        Err(e) => ("fail", json!({"error": e.to_string()})),
    };
    ExampleEntry { example: example.into(), paper_location: location.into(), status, details, elapsed_ms }
}

pub fn run_examples() -> ExamplesReport {
    run_examples_with(&|name| RootDatum::parse(name))
}

/// Runs every example with data supplied by `resolve`, so a corrupted datum
/// only affects the entries that use it.
pub fn run_examples_with(resolve: &dyn Fn(&str) -> Result<RootDatum>) -> ExamplesReport {
    let get = |name: &str| resolve(name).map(Arc::new);
    let mut entries = vec![
        entry("GL2 slice family", "GL2 example: matrix slice and its affine repellent", || {
            let gl2 = get("GL2")?;
            let mut report = Report::new("GL2 slice family");
            for n in 0..=8 {
                for m in 0..=n {
                    report.absorb(gl2_slice_check_on(&gl2, n, m)?);
                }
            }
            report.require(gl2_slice_check_on(&gl2, 2, 3).is_err(), || "m > N accepted".into());
            Ok(report)
        }),
        entry("PGL3 repellent", "remark: the PGL3 repellent is an affine plane", || pgl3_check(&resolve("PGL3")?)),
        entry("GL4 lambda tilde", "first Levi example, GL4", || gl4_lambda_tilde_check(&resolve("GL4")?)),
        entry("GL3 branching vector", "second Levi example, GL3", || gl3_branch_vector_check_on(&get("GL3")?)),
        entry("GL4 embeddings shadow", "inclusions of Levi fixed-point loci, GL4 case", || {
            let gl4 = get("GL4")?;
            let mut r = embeddings_shadow_check(&gl4, &w(&[2, 0, 0, -2]), &w(&[0, -1, 1, 0]), &[0, 2], DEFAULT_MAX_ELEMENTS)?;
            let strict = r.details.get("second_inclusion_strict") == Some(&Value::Bool(true));
            r.require(strict, || "λ̃ is expected to lie outside the branching table".into());
            Ok(r)
        }),
        entry("GL3 embeddings shadow", "inclusions of Levi fixed-point loci, GL3 case", || {
            let gl3 = get("GL3")?;
            let mut r = embeddings_shadow_check(&gl3, &w(&[2, 1, 0]), &w(&[0, 2, 1]), &[0], DEFAULT_MAX_ELEMENTS)?;
            let strict = r.details.get("first_inclusion_strict") == Some(&Value::Bool(true));
            r.require(strict, || "ν = (1,1,1) is expected to be above μ without containing it".into());
            Ok(r)
        }),
    ];
    for name in ["A2", "B2", "G2", "GL3", "PGL3"] {
        entries.push(entry(&format!("dimension formula {name}"), "repellent dimension equals the height of λ − μ", || {
            dimension_formula_check(&resolve(name)?)
        }));
    }
    ExamplesReport { entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_repellent_examples() {
        let gl2 = RootDatum::gl(2).unwrap();
        for n in 0..6 {
            for m in 0..=n {
                assert_eq!(dim_repellent(&gl2, &w(&[n, 0]), &w(&[n - m, m])).unwrap(), m as u64);
            }
        }
        let pgl3 = RootDatum::parse("PGL3").unwrap();
        assert_eq!(dim_repellent(&pgl3, &w(&[1, 0]), &w(&[0, -1])).unwrap(), 2);
        assert_eq!(dim_repellent(&pgl3, &w(&[1, 1]), &w(&[1, 1])).unwrap(), 0);
        assert!(matches!(dim_repellent(&gl2, &w(&[0, 2]), &w(&[2, 0])), Err(Error::NotInRootCone(_))));
    }

    #[test]
    fn gl2_slices() {
        let r = gl2_slice_check(3, 2).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.details["parameters"], 2);
        assert_eq!(r.details["determinant"], "z^3");
        let point = gl2_slice_check(4, 0).unwrap();
        assert_eq!(point.details["parameters"], 0);
        assert!(gl2_slice_check(2, 3).is_err());
    }

    #[test]
    fn gl3_vector() {
        let r = gl3_branch_vector_check().unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.details["weight"], json!([1, 1, 1]));
        assert_eq!(r.details["annihilated_by_E23"], false);
    }

    #[test]
    fn wedge_action_is_a_representation() {
        // [E12, E21] = E11 − E22 on a basis vector
        let x: Vec<i64> = (0..9).map(|k| i64::from(k == 4)).collect();
        let ab = wedge::act(0, 1, &wedge::act(1, 0, &x));
        let ba = wedge::act(1, 0, &wedge::act(0, 1, &x));
        let h: Vec<i64> = wedge::act(0, 0, &x).iter().zip(wedge::act(1, 1, &x)).map(|(a, b)| a - b).collect();
        let comm: Vec<i64> = ab.iter().zip(&ba).map(|(a, b)| a - b).collect();
        assert_eq!(comm, h);
    }

    #[test]
    fn all_examples_pass() {
        let report = run_examples();
        for e in &report.entries {
            assert_eq!(e.status, "pass", "{}: {}", e.example, e.details);
        }
    }

    #[test]
    fn transposed_b2_is_localized() {
        let report = run_examples_with(&|name| {
            if name == "B2" {
                RootDatum::from_cartan("B2", &[vec![2, -2], vec![-1, 2]])
            } else {
                RootDatum::parse(name)
            }
        });
        let failed: Vec<&str> = report.entries.iter().filter(|e| e.status != "pass").map(|e| e.example.as_str()).collect();
        assert_eq!(failed, vec!["dimension formula B2"]);
    }
}
