//! JSON, DOT and plain-table renderings of crystal graphs. Index labels are
//! 1-based in every output.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::crystal::{Crystal, CrystalGraph};
use crate::tensor::TensorCrystal;

fn edges<C: CrystalGraph + ?Sized>(c: &C) -> Vec<Value> {
    let mut out = Vec::new();
    for b in 0..c.len() {
        for i in 0..c.num_indices() {
            if let Some(t) = c.f(i, b) {
                out.push(json!({"from": b, "to": t, "label": i + 1}));
            }
        }
    }
    out
}

pub fn crystal_json(c: &Crystal) -> Value {
    let elements: Vec<Value> =
        (0..c.len()).map(|b| json!({"id": b, "weight": c.weight(b), "path": c.path(b)})).collect();
    json!({
        "datum": c.datum().to_spec(),
        "highest_weight": c.highest_weight(),
        "elements": elements,
        "edges": edges(c),
    })
}

/// Elements carry their factor ids in place of a path.
pub fn tensor_json(t: &TensorCrystal) -> Value {
    let elements: Vec<Value> = (0..t.len())
        .map(|b| {
            let (x, y) = t.pair(b);
            json!({"id": b, "weight": t.weight(b), "factors": [x, y]})
        })
        .collect();
    json!({
        "datum": t.datum().to_spec(),
        "elements": elements,
        "edges": edges(t),
    })
}

fn coords(c: &(impl CrystalGraph + ?Sized), b: usize) -> String {
    let w: Vec<String> = c.weight(b).coords().iter().map(i64::to_string).collect();
    w.join(",")
}

pub fn to_dot<C: CrystalGraph + ?Sized>(c: &C, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "'"));
    for b in 0..c.len() {
        let _ = writeln!(out, "  n{b} [label=\"({})\"];", coords(c, b));
    }
    for b in 0..c.len() {
        for i in 0..c.num_indices() {
            if let Some(t) = c.f(i, b) {
                let _ = writeln!(out, "  n{b} -> n{t} [label=\"{}\"];", i + 1);
            }
        }
    }
    out.push_str("}\n");
    out
}

/// One line per element: id, weight, then `ε_i` and `φ_i` lists.
pub fn weight_table<C: CrystalGraph + ?Sized>(c: &C) -> String {
    let mut out = String::new();
    for b in 0..c.len() {
        let eps: Vec<String> = (0..c.num_indices()).map(|i| c.epsilon(i, b).to_string()).collect();
        let phi: Vec<String> = (0..c.num_indices()).map(|i| c.phi(i, b).to_string()).collect();
        let _ = writeln!(out, "{b}\t({})\teps=[{}]\tphi=[{}]", coords(c, b), eps.join(","), phi.join(","));
    }
    out
}
