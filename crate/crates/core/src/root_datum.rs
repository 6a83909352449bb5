//! Reductive root data in an ambient integer lattice.
//!
//! A datum stores simple roots `α_i` and simple coroots `α̌_i` as integer
//! vectors in the same coordinate system, so that the pairing `⟨v, α̌_i⟩` is a
//! plain dot product. Semisimple named types (`A2`, `G2`, …) use
//! fundamental-weight coordinates: `α̌_i` is the `i`-th unit vector and `α_j`
//! is the `j`-th column of the Cartan matrix. `GLn` uses the ε-basis.
//!
//! Crystals attached to a group `G` are crystals for its Langlands dual, so a
//! datum here always describes the weight side of the dual group. `PGL3`
//! therefore has the weight lattice of `SL3` (fundamental coordinates) and
//! `SL3` has the root lattice of `SL3` (simple-root coordinates).

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, SmithForm};

/// Upper bound on the number of positive roots the closure may produce
/// before the Cartan data is declared non-finite.
const MAX_POSITIVE_ROOTS: usize = 4096;

/// A point of the ambient weight lattice.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn dot(&self, other: &Weight) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|x| x * k).collect())
    }

    /// `self + k·other`
    pub fn add_scaled(&self, other: &Weight, k: i64) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }

    /// Parses comma-separated integer coordinates, e.g. `"2,0,0,-2"`.
    pub fn parse(s: &str) -> Result<Weight> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Weight(Vec::new()));
        }
        s.split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))))
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl SubAssign<&Weight> for Weight {
    fn sub_assign(&mut self, rhs: &Weight) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|x| -x).collect())
    }
}

/// A positive root together with its coroot, both in ambient coordinates and
/// in simple-root (resp. simple-coroot) coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveRoot {
    pub root: Weight,
    pub coroot: Weight,
    pub root_coords: Vec<i64>,
    pub coroot_coords: Vec<i64>,
}

impl PositiveRoot {
    pub fn height(&self) -> i64 {
        self.root_coords.iter().sum()
    }
}

/// JSON form of an explicit datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumSpec {
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    #[serde(default)]
    pub name: String,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    name: String,
    rank: usize,
    simple_roots: Vec<Weight>,
    simple_coroots: Vec<Weight>,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<PositiveRoot>,
    /// Positive integers `r_i` with `r_i A[i][j] = r_j A[j][i]`; `r_i` is half
    /// the squared length of `α_i` for a W-invariant form.
    symmetrizer: Vec<i64>,
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.simple_roots == other.simple_roots
            && self.simple_coroots == other.simple_coroots
    }
}

impl Eq for RootDatum {}

impl RootDatum {
    pub fn new(
        name: impl Into<String>,
        rank: usize,
        simple_roots: Vec<Weight>,
        simple_coroots: Vec<Weight>,
    ) -> Result<RootDatum> {
        let name = name.into();
        if rank == 0 {
            return Err(Error::InvalidCartan("ambient rank must be positive".into()));
        }
        if simple_roots.len() != simple_coroots.len() {
            return Err(Error::InvalidCartan(format!(
                "{} simple roots but {} simple coroots",
                simple_roots.len(),
                simple_coroots.len()
            )));
        }
        if simple_roots.len() > rank {
            return Err(Error::InvalidCartan("more simple roots than the ambient rank".into()));
        }
        for v in simple_roots.iter().chain(&simple_coroots) {
            if v.len() != rank {
                return Err(Error::RankMismatch { expected: rank, found: v.len() });
            }
        }
        let l = simple_roots.len();
        let cartan: Vec<Vec<i64>> = (0..l)
            .map(|i| (0..l).map(|j| simple_roots[j].dot(&simple_coroots[i])).collect())
            .collect();
        for i in 0..l {
            if cartan[i][i] != 2 {
                return Err(Error::InvalidCartan(format!("⟨α_{0}, α̌_{0}⟩ = {1}, expected 2", i + 1, cartan[i][i])));
            }
            for j in 0..l {
                if i == j {
                    continue;
                }
                if cartan[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!("off-diagonal entry A[{}][{}] = {} is positive", i + 1, j + 1, cartan[i][j])));
                }
                if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!("A[{0}][{1}] and A[{1}][{0}] disagree on vanishing", i + 1, j + 1)));
                }
            }
        }
        let root_vecs: Vec<Vec<i64>> = simple_roots.iter().map(|w| w.0.clone()).collect();
        if lattice::rank(&root_vecs) != l {
            return Err(Error::DependentRoots("roots"));
        }
        let coroot_vecs: Vec<Vec<i64>> = simple_coroots.iter().map(|w| w.0.clone()).collect();
        if lattice::rank(&coroot_vecs) != l {
            return Err(Error::DependentRoots("coroots"));
        }
        let symmetrizer = symmetrize(&cartan)?;
        let positive_roots = close_positive_roots(&cartan, &simple_roots, &simple_coroots)?;
        Ok(RootDatum { name, rank, simple_roots, simple_coroots, cartan, positive_roots, symmetrizer })
    }

    /// Semisimple datum in fundamental-weight coordinates for a Cartan matrix.
    pub fn from_cartan(name: impl Into<String>, cartan: &[Vec<i64>]) -> Result<RootDatum> {
        let l = cartan.len();
        let roots = (0..l).map(|j| Weight((0..l).map(|i| cartan[i][j]).collect())).collect();
        let coroots = (0..l).map(|i| Weight((0..l).map(|k| i64::from(i == k)).collect())).collect();
        RootDatum::new(name, l, roots, coroots)
    }

    /// Semisimple datum in simple-root coordinates (root lattice as weights).
    pub fn from_cartan_adjoint(name: impl Into<String>, cartan: &[Vec<i64>]) -> Result<RootDatum> {
        let l = cartan.len();
        let roots = (0..l).map(|j| Weight((0..l).map(|k| i64::from(j == k)).collect())).collect();
        let coroots = (0..l).map(|i| Weight(cartan[i].clone())).collect();
        RootDatum::new(name, l, roots, coroots)
    }

    pub fn gl(n: usize) -> Result<RootDatum> {
        if n == 0 {
            return Err(Error::UnknownDatum("GL0".into()));
        }
        let mut roots = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let mut v = vec![0; n];
            v[i] = 1;
            v[i + 1] = -1;
            roots.push(Weight(v));
        }
        RootDatum::new(format!("GL{n}"), n, roots.clone(), roots)
    }

    /// Orthogonal direct sum of ambient lattices.
    pub fn product(factors: &[RootDatum]) -> Result<RootDatum> {
        let rank: usize = factors.iter().map(|d| d.rank).sum();
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        let mut offset = 0;
        for d in factors {
            for (a, c) in d.simple_roots.iter().zip(&d.simple_coroots) {
                let mut ra = vec![0; rank];
                let mut rc = vec![0; rank];
                ra[offset..offset + d.rank].copy_from_slice(&a.0);
                rc[offset..offset + d.rank].copy_from_slice(&c.0);
                roots.push(Weight(ra));
                coroots.push(Weight(rc));
            }
            offset += d.rank;
        }
        let name = factors.iter().map(|d| d.name.as_str()).collect::<Vec<_>>().join("x");
        RootDatum::new(name, rank, roots, coroots)
    }

    /// Parses a compact descriptor (`"A2"`, `"GL4"`, `"GL2xGL2"`) or a JSON object.
    pub fn parse(descriptor: &str) -> Result<RootDatum> {
        let d = descriptor.trim();
        if d.starts_with('{') {
            let spec: DatumSpec = serde_json::from_str(d).map_err(|e| Error::Parse(e.to_string()))?;
            return RootDatum::from_spec(&spec);
        }
        let parts: Vec<&str> = d.split('x').collect();
        if parts.len() > 1 {
            let factors = parts.iter().map(|p| named(p)).collect::<Result<Vec<_>>>()?;
            return RootDatum::product(&factors);
        }
        named(d)
    }

    pub fn from_spec(spec: &DatumSpec) -> Result<RootDatum> {
        RootDatum::new(
            if spec.name.is_empty() { "custom".to_string() } else { spec.name.clone() },
            spec.rank,
            spec.simple_roots.iter().cloned().map(Weight).collect(),
            spec.simple_coroots.iter().cloned().map(Weight).collect(),
        )
    }

    pub fn to_spec(&self) -> DatumSpec {
        DatumSpec {
            rank: self.rank,
            simple_roots: self.simple_roots.iter().map(|w| w.0.clone()).collect(),
            simple_coroots: self.simple_coroots.iter().map(|w| w.0.clone()).collect(),
            name: self.name.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Rank of the ambient lattice.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of simple roots, `|I_G|`.
    pub fn num_simple(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn full_index_set(&self) -> Vec<usize> {
        (0..self.num_simple()).collect()
    }

    pub fn simple_root(&self, i: usize) -> &Weight {
        &self.simple_roots[i]
    }

    pub fn simple_coroot(&self, i: usize) -> &Weight {
        &self.simple_coroots[i]
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Weight] {
        &self.simple_coroots
    }

    /// `A[i][j] = ⟨α_j, α̌_i⟩`.
    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn positive_roots(&self) -> &[PositiveRoot] {
        &self.positive_roots
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.num_simple() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, count: self.num_simple() })
        }
    }

    pub fn check_indices(&self, indices: &[usize]) -> Result<()> {
        indices.iter().try_for_each(|&i| self.check_index(i))
    }

    pub fn check_weight(&self, v: &Weight) -> Result<()> {
        if v.len() == self.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch { expected: self.rank, found: v.len() })
        }
    }

    /// `⟨v, α̌_i⟩`
    pub fn pairing(&self, v: &Weight, i: usize) -> Result<i64> {
        self.check_index(i)?;
        self.check_weight(v)?;
        Ok(self.pair(v, i))
    }

    #[inline]
    pub(crate) fn pair(&self, v: &Weight, i: usize) -> i64 {
        v.dot(&self.simple_coroots[i])
    }

    /// `s_i(v) = v − ⟨v, α̌_i⟩ α_i`
    pub fn reflect(&self, v: &Weight, i: usize) -> Result<Weight> {
        self.check_index(i)?;
        self.check_weight(v)?;
        Ok(self.reflect_unchecked(v, i))
    }

    pub(crate) fn reflect_unchecked(&self, v: &Weight, i: usize) -> Weight {
        let p = self.pair(v, i);
        v.add_scaled(&self.simple_roots[i], -p)
    }

    pub fn is_dominant(&self, v: &Weight) -> bool {
        self.is_dominant_for(v, &self.full_index_set())
    }

    pub fn is_dominant_for(&self, v: &Weight, indices: &[usize]) -> bool {
        indices.iter().all(|&i| self.pair(v, i) >= 0)
    }

    pub fn ensure_dominant(&self, v: &Weight) -> Result<()> {
        self.check_weight(v)?;
        if self.is_dominant(v) {
            Ok(())
        } else {
            Err(Error::NotDominant(v.clone()))
        }
    }

    /// The `W_I`-dominant element of the orbit of `v`, together with the word
    /// of simple reflections applied (first applied first). Replaying the word
    /// in reverse order on the result recovers `v`.
    pub fn dominant_representative(&self, v: &Weight, indices: &[usize]) -> Result<(Weight, Vec<usize>)> {
        self.check_indices(indices)?;
        self.check_weight(v)?;
        let mut w = v.clone();
        let mut word = Vec::new();
        while let Some(&i) = indices.iter().find(|&&i| self.pair(&w, i) < 0) {
            w = self.reflect_unchecked(&w, i);
            word.push(i);
        }
        Ok((w, word))
    }

    /// Coefficients `c_i` with `v = Σ_{i∈I} c_i α_i`, if `v` lies in the
    /// rational span of those simple roots.
    pub fn root_coords(&self, v: &Weight, indices: &[usize]) -> Result<Option<Vec<Rational64>>> {
        self.check_indices(indices)?;
        self.check_weight(v)?;
        let cols: Vec<Vec<i64>> = indices.iter().map(|&i| self.simple_roots[i].0.clone()).collect();
        Ok(lattice::solve_rational(&cols, &v.0))
    }

    /// Integer simple-root coordinates over `indices`, if they exist.
    pub fn integer_root_coords(&self, v: &Weight, indices: &[usize]) -> Result<Option<Vec<i64>>> {
        Ok(self.root_coords(v, indices)?.and_then(|c| lattice::to_integers(&c)))
    }

    /// `μ ≤_I λ`: `λ − μ` is a nonnegative integer combination of `{α_i : i ∈ I}`.
    pub fn dominance_leq(&self, mu: &Weight, lambda: &Weight, indices: &[usize]) -> Result<bool> {
        Ok(self
            .root_coords(&(lambda - mu), indices)?
            .is_some_and(|c| lattice::is_nonneg_integral(&c)))
    }

    /// `⟨ρ̌, v⟩` for `v` in the root span: the sum of its simple-root coordinates.
    pub fn height(&self, v: &Weight) -> Result<Option<Rational64>> {
        Ok(self.root_coords(v, &self.full_index_set())?.map(|c| c.into_iter().sum()))
    }

    /// Roots and coroots exchanged; the Cartan matrix is transposed.
    pub fn langlands_dual(&self) -> RootDatum {
        let name = dual_name(&self.name);
        RootDatum::new(name, self.rank, self.simple_coroots.clone(), self.simple_roots.clone())
            .expect("the dual of a valid datum is valid")
    }

    /// The Levi sub-datum on `indices`, in the same ambient lattice. Index `k`
    /// of the result is `indices[k]` of `self`.
    pub fn levi(&self, indices: &[usize]) -> Result<RootDatum> {
        self.check_indices(indices)?;
        let labels: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
        RootDatum::new(
            format!("{}|L{{{}}}", self.name, labels.join(",")),
            self.rank,
            indices.iter().map(|&i| self.simple_roots[i].clone()).collect(),
            indices.iter().map(|&i| self.simple_coroots[i].clone()).collect(),
        )
    }

    /// An integer weight with prescribed pairings `⟨λ, α̌_i⟩ = p_i`, if one exists.
    pub fn weight_from_pairings(&self, pairings: &[i64]) -> Result<Weight> {
        let l = self.num_simple();
        if pairings.len() != l {
            return Err(Error::RankMismatch { expected: l, found: pairings.len() });
        }
        if l == 0 {
            return Ok(Weight::zero(self.rank));
        }
        let coroots: Vec<Vec<i64>> = self.simple_coroots.iter().map(|w| w.0.clone()).collect();
        let snf = lattice::smith_normal_form(&coroots, self.rank);
        let up = lattice::mat_vec(&snf.u, pairings);
        let mut y = vec![0i64; self.rank];
        for (k, &d) in snf.diagonal.iter().enumerate() {
            if up[k] % d != 0 {
                return Err(Error::InvalidInput(format!(
                    "no integral weight has pairings {pairings:?} in {}",
                    self.name
                )));
            }
            y[k] = up[k] / d;
        }
        let lambda = Weight(lattice::mat_vec(&snf.v, &y));
        debug_assert!((0..l).all(|i| self.pair(&lambda, i) == pairings[i]));
        Ok(lambda)
    }

    /// `(⟨v, α̌_i⟩)_i` over all simple indices.
    pub fn pairings(&self, v: &Weight) -> Vec<i64> {
        (0..self.num_simple()).map(|i| self.pair(v, i)).collect()
    }
}

impl fmt::Display for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

fn dual_name(name: &str) -> String {
    if name.contains('x') && !name.contains('|') {
        return name.split('x').map(dual_name).collect::<Vec<_>>().join("x");
    }
    if let Some(stripped) = name.strip_suffix("^v") {
        return stripped.to_string();
    }
    if let Some(n) = name.strip_prefix('B').filter(|n| n.parse::<u32>().is_ok()) {
        return format!("C{n}");
    }
    if let Some(n) = name.strip_prefix('C').filter(|n| n.parse::<u32>().is_ok()) {
        return format!("B{n}");
    }
    if let Some(n) = name.strip_prefix("PGL") {
        return format!("SL{n}");
    }
    if let Some(n) = name.strip_prefix("SL") {
        return format!("PGL{n}");
    }
    if name.starts_with("GL") || name.starts_with('A') || name.starts_with('D') || name == "G2" || name == "F4" {
        return name.to_string();
    }
    format!("{name}^v")
}

/// Published Cartan matrix of a finite type, `A[i][j] = ⟨α_j, α̌_i⟩`.
pub fn cartan_of_type(kind: char, n: usize) -> Option<Vec<Vec<i64>>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    match kind {
        'A' if n >= 1 => {
            for i in 0..n.saturating_sub(1) {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        'B' | 'C' if n >= 2 => {
            for i in 0..n - 1 {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            if kind == 'B' {
                a[n - 1][n - 2] = -2;
            } else {
                a[n - 2][n - 1] = -2;
            }
        }
        'D' if n >= 4 => {
            for i in 0..n - 2 {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
        }
        'G' if n == 2 => {
            a[0][1] = -3;
            a[1][0] = -1;
        }
        'F' if n == 4 => {
            a[0][1] = -1;
            a[1][0] = -1;
            a[1][2] = -1;
            a[2][1] = -2;
            a[2][3] = -1;
            a[3][2] = -1;
        }
        'E' if (6..=8).contains(&n) => {
            // Bourbaki: 1-3-4-5-6(-7-8), 2 attached to 4
            let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
            for &(i, j) in edges.iter().filter(|&&(i, j)| i < n && j < n) {
                a[i][j] = -1;
                a[j][i] = -1;
            }
        }
        _ => return None,
    }
    Some(a)
}

fn named(name: &str) -> Result<RootDatum> {
    let unknown = || Error::UnknownDatum(name.to_string());
    let split = name.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?;
    let (prefix, digits) = name.split_at(split);
    let n: usize = digits.parse().map_err(|_| unknown())?;
    if n == 0 || n > 8 {
        return Err(unknown());
    }
    match prefix {
        "GL" => RootDatum::gl(n),
        "PGL" => {
            let cartan = cartan_of_type('A', n - 1).filter(|_| n >= 2).ok_or_else(unknown)?;
            RootDatum::from_cartan(name, &cartan)
        }
        "SL" => {
            let cartan = cartan_of_type('A', n - 1).filter(|_| n >= 2).ok_or_else(unknown)?;
            RootDatum::from_cartan_adjoint(name, &cartan)
        }
        "A" | "B" | "C" | "D" | "E" | "F" | "G" => {
            let kind = prefix.chars().next().unwrap();
            let cartan = cartan_of_type(kind, n).ok_or_else(unknown)?;
            RootDatum::from_cartan(name, &cartan)
        }
        _ => Err(unknown()),
    }
}

fn symmetrize(cartan: &[Vec<i64>]) -> Result<Vec<i64>> {
    let l = cartan.len();
    let mut r: Vec<Option<Rational64>> = vec![None; l];
    for start in 0..l {
        if r[start].is_some() {
            continue;
        }
        r[start] = Some(Rational64::from(1));
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let ri = r[i].unwrap();
            for j in 0..l {
                if i == j || cartan[i][j] == 0 {
                    continue;
                }
                let rj = ri * Rational64::new(cartan[i][j], cartan[j][i]);
                match r[j] {
                    None => {
                        r[j] = Some(rj);
                        queue.push_back(j);
                    }
                    Some(existing) if existing != rj => {
                        return Err(Error::InvalidCartan("Cartan matrix is not symmetrizable".into()));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let r: Vec<Rational64> = r.into_iter().map(Option::unwrap).collect();
    let scale = lattice::lcm_of_denominators(&r);
    Ok(r.iter().map(|x| (x * scale).to_integer()).collect())
}

/// Reflection closure of the simple roots, kept inside the positive cone.
fn close_positive_roots(cartan: &[Vec<i64>], roots: &[Weight], coroots: &[Weight]) -> Result<Vec<PositiveRoot>> {
    let l = cartan.len();
    let unit = |i: usize| (0..l).map(|k| i64::from(k == i)).collect::<Vec<i64>>();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut found: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    let mut queue: VecDeque<(Vec<i64>, Vec<i64>)> = VecDeque::new();
    for i in 0..l {
        seen.insert(unit(i));
        queue.push_back((unit(i), unit(i)));
    }
    while let Some((c, d)) = queue.pop_front() {
        for j in 0..l {
            // ⟨β, α̌_j⟩ and ⟨α_j, β̌⟩ in simple coordinates
            let p: i64 = (0..l).map(|k| c[k] * cartan[j][k]).sum();
            let q: i64 = (0..l).map(|k| d[k] * cartan[k][j]).sum();
            let mut c2 = c.clone();
            c2[j] -= p;
            let mut d2 = d.clone();
            d2[j] -= q;
            if c2.iter().all(|&x| x >= 0) && c2.iter().any(|&x| x > 0) && seen.insert(c2.clone()) {
                if seen.len() > MAX_POSITIVE_ROOTS {
                    return Err(Error::InvalidCartan("positive-root closure does not terminate (not of finite type)".into()));
                }
                queue.push_back((c2, d2));
            }
        }
        found.push((c, d));
    }
    let rank = roots.first().map_or(0, Weight::len);
    let mut out: Vec<PositiveRoot> = found
        .into_iter()
        .map(|(c, d)| {
            let mut root = Weight::zero(rank);
            let mut coroot = Weight::zero(rank);
            for k in 0..l {
                root = root.add_scaled(&roots[k], c[k]);
                coroot = coroot.add_scaled(&coroots[k], d[k]);
            }
            PositiveRoot { root, coroot, root_coords: c, coroot_coords: d }
        })
        .collect();
    out.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.root_coords.cmp(&a.root_coords)));
    Ok(out)
}

/// `Λ / ℤ{α_i : i ∈ I}` described through a Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeQuotient {
    indices: Vec<usize>,
    snf: SmithForm,
}

/// Class of a weight in a [`LatticeQuotient`]. Equality ignores the representative.
#[derive(Clone, Debug)]
pub struct QuotientClass {
    pub representative: Weight,
    /// Reduced coordinates: residues modulo the invariant factors followed by
    /// the free coordinates.
    coords: Vec<i64>,
    moduli: Arc<Vec<i64>>,
}

impl QuotientClass {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

impl PartialEq for QuotientClass {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for QuotientClass {}

impl std::hash::Hash for QuotientClass {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl PartialOrd for QuotientClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuotientClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl Add for &QuotientClass {
    type Output = QuotientClass;
    fn add(self, rhs: &QuotientClass) -> QuotientClass {
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .enumerate()
            .map(|(k, (a, b))| reduce(a + b, self.moduli.get(k).copied()))
            .collect();
        QuotientClass { representative: &self.representative + &rhs.representative, coords, moduli: self.moduli.clone() }
    }
}

fn reduce(x: i64, modulus: Option<i64>) -> i64 {
    match modulus {
        Some(d) => x.rem_euclid(d),
        None => x,
    }
}

impl LatticeQuotient {
    pub fn new(rd: &RootDatum, indices: &[usize]) -> Result<LatticeQuotient> {
        rd.check_indices(indices)?;
        let m: Vec<Vec<i64>> = (0..rd.rank())
            .map(|r| indices.iter().map(|&i| rd.simple_root(i).0[r]).collect())
            .collect();
        let snf = lattice::smith_normal_form(&m, indices.len());
        Ok(LatticeQuotient { indices: indices.to_vec(), snf })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Invariant factors of the sublattice; the quotient is
    /// `⊕ ℤ/d_k ⊕ ℤ^{rank − #d}`.
    pub fn invariant_factors(&self) -> &[i64] {
        &self.snf.diagonal
    }

    pub fn class_of(&self, mu: &Weight) -> QuotientClass {
        let y = lattice::mat_vec(&self.snf.u, &mu.0);
        let moduli = Arc::new(self.snf.diagonal.clone());
        let coords = y.iter().enumerate().map(|(k, &x)| reduce(x, moduli.get(k).copied())).collect();
        QuotientClass { representative: mu.clone(), coords, moduli }
    }
}

/// `α_{G,P}`: the class of `μ` in `Λ / ℤ{α_i : i ∈ I_L}`.
pub fn alpha_gp(rd: &RootDatum, mu: &Weight, levi: &[usize]) -> Result<QuotientClass> {
    rd.check_weight(mu)?;
    Ok(LatticeQuotient::new(rd, levi)?.class_of(mu))
}

/// Parses a 1-based comma-separated index list (`"1,3"`) into 0-based indices.
pub fn parse_index_set(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = BTreeSet::new();
    for t in s.split(',') {
        let k: usize = t.trim().parse().map_err(|e| Error::Parse(format!("index `{t}`: {e}")))?;
        if k == 0 {
            return Err(Error::Parse("indices are 1-based".into()));
        }
        out.insert(k - 1);
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn a1_basics() {
        let rd = RootDatum::parse("A1").unwrap();
        assert_eq!(rd.rank(), 1);
        assert_eq!(rd.cartan_matrix(), &[vec![2]]);
        assert_eq!(rd.reflect(&w(&[1]), 0).unwrap(), w(&[-1]));
    }

    #[test]
    fn gl3_cartan_is_a2() {
        let rd = RootDatum::parse("GL3").unwrap();
        assert_eq!(rd.rank(), 3);
        assert_eq!(rd.simple_root(0), &w(&[1, -1, 0]));
        assert_eq!(rd.simple_root(1), &w(&[0, 1, -1]));
        assert_eq!(rd.cartan_matrix(), cartan_of_type('A', 2).unwrap().as_slice());
    }

    #[test]
    fn product_blocks_are_orthogonal() {
        let rd = RootDatum::parse("GL2xGL2").unwrap();
        assert_eq!(rd.rank(), 4);
        assert_eq!(rd.num_simple(), 2);
        assert_eq!(rd.pairing(rd.simple_root(0), 1).unwrap(), 0);
        assert_eq!(rd.cartan_matrix(), &[vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn pairing_examples() {
        let gl2 = RootDatum::parse("GL2").unwrap();
        assert_eq!(gl2.pairing(&w(&[1, 0]), 0).unwrap(), 1);
        let a2 = RootDatum::parse("A2").unwrap();
        assert_eq!(a2.pairing(&w(&[0, 0]), 1).unwrap(), 0);
        assert_eq!(a2.pairing(a2.simple_root(0), 1).unwrap(), -1);
        assert!(matches!(a2.pairing(&w(&[0, 0]), 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn reflect_examples() {
        let gl3 = RootDatum::parse("GL3").unwrap();
        assert_eq!(gl3.reflect(&w(&[1, 0, 0]), 0).unwrap(), w(&[0, 1, 0]));
        assert_eq!(gl3.reflect(&w(&[1, 1, 0]), 0).unwrap(), w(&[1, 1, 0]));
    }

    #[test]
    fn dominant_representative_gl4_example() {
        let rd = RootDatum::parse("GL4").unwrap();
        let (dom, word) = rd.dominant_representative(&w(&[2, -3, 3, -2]), &[0, 1, 2]).unwrap();
        assert_eq!(dom, w(&[3, 2, -2, -3]));
        let mut back = dom.clone();
        for &i in word.iter().rev() {
            back = rd.reflect(&back, i).unwrap();
        }
        assert_eq!(back, w(&[2, -3, 3, -2]));
        let (same, empty) = rd.dominant_representative(&dom, &[0, 1, 2]).unwrap();
        assert_eq!(same, dom);
        assert!(empty.is_empty());
    }

    #[test]
    fn dominant_representative_negative_root() {
        let a2 = RootDatum::parse("A2").unwrap();
        let neg = -a2.simple_root(0);
        let (dom, word) = a2.dominant_representative(&neg, &[0]).unwrap();
        assert_eq!(&dom, a2.simple_root(0));
        assert_eq!(word, vec![0]);
        assert_eq!(a2.pairing(&dom, 0).unwrap(), 2);
    }

    #[test]
    fn root_coords_examples() {
        let rd = RootDatum::parse("GL4").unwrap();
        let v = &w(&[2, 0, 0, -2]) - &w(&[0, -1, 1, 0]);
        let c = rd.integer_root_coords(&v, &[0, 1, 2]).unwrap().unwrap();
        assert_eq!(c, vec![2, 3, 2]);
        let zero = rd.integer_root_coords(&Weight::zero(4), &[0, 1, 2]).unwrap().unwrap();
        assert_eq!(zero, vec![0, 0, 0]);
        let gl2 = RootDatum::parse("GL2").unwrap();
        assert!(gl2.root_coords(&w(&[1, 1]), &[0]).unwrap().is_none());
    }

    #[test]
    fn positive_root_counts() {
        for (name, count) in [("A1", 1), ("A2", 3), ("A3", 6), ("B2", 4), ("C3", 9), ("D4", 12), ("G2", 6), ("F4", 24), ("GL4", 6)] {
            let rd = RootDatum::parse(name).unwrap();
            assert_eq!(rd.positive_roots().len(), count, "{name}");
        }
        let a2 = RootDatum::parse("A2").unwrap();
        let coords: Vec<Vec<i64>> = a2.positive_roots().iter().map(|r| r.root_coords.clone()).collect();
        assert_eq!(coords, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn coroots_pair_to_two() {
        for name in ["B3", "C3", "G2", "F4", "GL3", "SL3"] {
            let rd = RootDatum::parse(name).unwrap();
            for r in rd.positive_roots() {
                assert_eq!(r.root.dot(&r.coroot), 2, "{name} {:?}", r.root_coords);
            }
        }
    }

    #[test]
    fn langlands_dual_transposes() {
        let b2 = RootDatum::parse("B2").unwrap();
        let dual = b2.langlands_dual();
        let c2 = cartan_of_type('C', 2).unwrap();
        assert_eq!(dual.cartan_matrix(), c2.as_slice());
        assert_eq!(dual.name(), "C2");
        let a2 = RootDatum::parse("A2").unwrap();
        assert_eq!(a2.langlands_dual().cartan_matrix(), a2.cartan_matrix());
        for name in ["B3", "G2", "GL3", "PGL3", "GL2xGL2"] {
            let rd = RootDatum::parse(name).unwrap();
            assert_eq!(rd.langlands_dual().langlands_dual(), rd);
        }
        let pgl = RootDatum::parse("PGL3").unwrap();
        assert_eq!(pgl.langlands_dual(), RootDatum::parse("SL3").unwrap());
    }

    #[test]
    fn invalid_data_rejected() {
        assert!(matches!(RootDatum::parse("Z3"), Err(Error::UnknownDatum(_))));
        assert!(matches!(RootDatum::parse("G3"), Err(Error::UnknownDatum(_))));
        // affine A1: closure does not terminate
        let affine = RootDatum::new("aff", 2, vec![w(&[2, -2]), w(&[-2, 2])], vec![w(&[1, 0]), w(&[0, 1])]);
        assert!(affine.is_err());
        let positive = RootDatum::new("bad", 2, vec![w(&[2, 1]), w(&[1, 2])], vec![w(&[1, 0]), w(&[0, 1])]);
        assert!(matches!(positive, Err(Error::InvalidCartan(_))));
        let dependent = RootDatum::new("dep", 2, vec![w(&[1, -1]), w(&[1, -1])], vec![w(&[1, -1]), w(&[1, -1])]);
        assert!(dependent.is_err());
    }

    #[test]
    fn json_descriptor() {
        let rd = RootDatum::parse(r#"{"rank": 2, "simple_roots": [[1,-1]], "simple_coroots": [[1,-1]], "name": "gl2"}"#).unwrap();
        assert_eq!(rd, RootDatum::parse("GL2").unwrap());
        assert_eq!(rd.name(), "gl2");
    }

    #[test]
    fn alpha_gp_examples() {
        let rd = RootDatum::parse("GL3").unwrap();
        let a = alpha_gp(&rd, &w(&[1, 0, 0]), &[0]).unwrap();
        let b = alpha_gp(&rd, &w(&[0, 1, 0]), &[0]).unwrap();
        let c = alpha_gp(&rd, &w(&[0, 0, 1]), &[0]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(alpha_gp(&rd, rd.simple_root(0), &[0]).unwrap().is_zero());
    }

    #[test]
    fn weight_from_pairings_hits_target() {
        for name in ["GL3", "G2", "SL3", "GL2xGL2", "B3"] {
            let rd = RootDatum::parse(name).unwrap();
            let p: Vec<i64> = (0..rd.num_simple() as i64).map(|k| k + 1).collect();
            match rd.weight_from_pairings(&p) {
                Ok(lambda) => assert_eq!(rd.pairings(&lambda), p),
                Err(_) => assert_eq!(name, "SL3"),
            }
        }
    }

    #[test]
    fn published_cartan_matrices() {
        let table: [(&str, Vec<Vec<i64>>); 5] = [
            ("B2", vec![vec![2, -1], vec![-2, 2]]),
            ("C2", vec![vec![2, -2], vec![-1, 2]]),
            ("G2", vec![vec![2, -3], vec![-1, 2]]),
            ("B3", vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]]),
            ("F4", vec![vec![2, -1, 0, 0], vec![-1, 2, -1, 0], vec![0, -2, 2, -1], vec![0, 0, -1, 2]]),
        ];
        for (name, a) in table {
            assert_eq!(RootDatum::parse(name).unwrap().cartan_matrix(), a.as_slice(), "{name}");
        }
        let d4 = RootDatum::parse("D4").unwrap();
        assert_eq!(d4.cartan_matrix()[1], vec![-1, 2, -1, -1]);
    }

    #[test]
    fn symmetrizer_makes_cartan_symmetric() {
        for name in ["B3", "C3", "G2", "F4"] {
            let rd = RootDatum::parse(name).unwrap();
            let a = rd.cartan_matrix();
            let r = rd.symmetrizer();
            for i in 0..a.len() {
                for j in 0..a.len() {
                    assert_eq!(r[i] * a[i][j], r[j] * a[j][i]);
                }
            }
        }
    }

    fn datum_strategy() -> impl Strategy<Value = RootDatum> {
        prop::sample::select(vec!["A1", "A2", "A3", "B2", "C3", "G2", "GL3", "GL4", "F4", "GL2xGL2"])
            .prop_map(|n| RootDatum::parse(n).unwrap())
    }

    proptest! {
        #[test]
        fn reflection_laws(rd in datum_strategy(), seed in prop::collection::vec(-6i64..6, 4), i in 0usize..4) {
            let v = Weight(seed.into_iter().cycle().take(rd.rank()).collect());
            let i = i % rd.num_simple();
            let s = rd.reflect(&v, i).unwrap();
            prop_assert_eq!(rd.pairing(&s, i).unwrap(), -rd.pairing(&v, i).unwrap());
            prop_assert_eq!(rd.reflect(&s, i).unwrap(), v.clone());
            let all = rd.full_index_set();
            let (dom, word) = rd.dominant_representative(&v, &all).unwrap();
            prop_assert!(rd.is_dominant(&dom));
            let (again, empty) = rd.dominant_representative(&dom, &all).unwrap();
            prop_assert_eq!(&again, &dom);
            prop_assert!(empty.is_empty());
            let mut back = dom;
            for &k in word.iter().rev() {
                back = rd.reflect(&back, k).unwrap();
            }
            prop_assert_eq!(back, v);
        }

        #[test]
        fn root_coords_round_trip(rd in datum_strategy(), coeffs in prop::collection::vec(-5i64..6, 4)) {
            let all = rd.full_index_set();
            let mut v = Weight::zero(rd.rank());
            for (k, &i) in all.iter().enumerate() {
                v = v.add_scaled(rd.simple_root(i), coeffs[k]);
            }
            let c = rd.integer_root_coords(&v, &all).unwrap().unwrap();
            prop_assert_eq!(&c[..], &coeffs[..all.len()]);
        }

        #[test]
        fn quotient_matches_integrality(a in prop::collection::vec(-4i64..5, 3), b in prop::collection::vec(-4i64..5, 3), levi in prop::sample::subsequence(vec![0usize, 1], 0..=2)) {
            let rd = RootDatum::parse("GL3").unwrap();
            let (mu, nu) = (Weight(a), Weight(b));
            let q = LatticeQuotient::new(&rd, &levi).unwrap();
            let same = q.class_of(&mu) == q.class_of(&nu);
            let integral = rd.integer_root_coords(&(&mu - &nu), &levi).unwrap().is_some();
            prop_assert_eq!(same, integral);
            let sum = &q.class_of(&mu) + &q.class_of(&nu);
            prop_assert_eq!(sum, q.class_of(&(&mu + &nu)));
        }
    }
}
