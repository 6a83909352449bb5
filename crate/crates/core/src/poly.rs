//! Integer polynomials in `z` and a finite list of opaque parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector: position 0 is `z`, position `k + 1` is parameter `c_k`.
type Monomial = Vec<u32>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly {
    terms: BTreeMap<Monomial, i64>,
}

impl IntPoly {
    pub fn zero() -> IntPoly {
        IntPoly::default()
    }

    pub fn constant(c: i64) -> IntPoly {
        IntPoly::monomial(c, vec![])
    }

    /// `z^n`
    pub fn z_pow(n: u32) -> IntPoly {
        IntPoly::monomial(1, vec![n])
    }

    /// The generator `c_k`.
    pub fn param(k: usize) -> IntPoly {
        let mut exps = vec![0; k + 2];
        exps[k + 1] = 1;
        IntPoly::monomial(1, exps)
    }

    fn monomial(c: i64, mut exps: Monomial) -> IntPoly {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(exps, c);
        }
        IntPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree in `z`; `None` for the zero polynomial.
    pub fn degree_z(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.first().copied().unwrap_or(0)).max()
    }

    /// Indices of the parameters that occur.
    pub fn parameters(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().enumerate().skip(1).filter(|(_, e)| **e > 0).map(|(k, _)| k - 1))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn insert(&mut self, m: Monomial, c: i64) {
        let entry = self.terms.entry(m).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), *c);
        }
        out
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let len = a.len().max(b.len());
                let m: Monomial = (0..len).map(|k| a.get(k).unwrap_or(&0) + b.get(k).unwrap_or(&0)).collect();
                out.insert(m, x * y);
            }
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (k, e) in m.iter().enumerate().filter(|(_, e)| **e > 0) {
                let name = if k == 0 { "z".to_string() } else { format!("c{}", k - 1) };
                factors.push(if *e == 1 { name } else { format!("{name}^{e}") });
            }
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            let sep = if first { "" } else { " " };
            let mag = c.abs();
            let body = match (mag, factors.is_empty()) {
                (_, true) => mag.to_string(),
                (1, false) => factors.join("*"),
                _ => format!("{mag}*{}", factors.join("*")),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sep}{sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// `ad − bc`
pub fn det2(m: &[[IntPoly; 2]; 2]) -> IntPoly {
    &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
}
