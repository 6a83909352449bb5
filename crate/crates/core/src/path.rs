//! Littelmann paths and the root operators `e_i`, `f_i`.
//!
//! A path is a piecewise-linear map `π: [0,1] → Λ ⊗ ℚ` starting at the origin,
//! stored as consecutive segments `(direction, duration)`. Every path reached
//! from a straight dominant path moves along Weyl conjugates of `λ`, so the
//! directions are integral and only the breakpoint times are rational.
//!
//! For a simple index `i` let `h(t) = ⟨π(t), α̌_i⟩` and `m = min h`. On
//! generated paths `m` is an integer attained at a breakpoint, and
//!
//! * `ε_i(π) = −m`, `φ_i(π) = h(1) − m`;
//! * `e_i π` reflects the piece between `t₀ = max{t ≤ t₁ : h(t) = m+1}` and
//!   `t₁ = min{t : h(t) = m}` by `s_i` and translates the tail by `α_i`;
//! * `f_i π` reflects the piece between `t₀ = max{t : h(t) = m}` and
//!   `t₁ = min{t ≥ t₀ : h(t) = m+1}` and translates the tail by `−α_i`.

use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::root_datum::{RootDatum, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub dir: Weight,
    pub dur: Rational64,
}

/// A normalized path: no zero durations, no two consecutive equal
/// directions, durations summing to one. The constant path has no segments.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    segments: Vec<Segment>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootDirection {
    /// `e_i`
    Raise,
    /// `f_i`
    Lower,
}

/// `i`-string statistics of a path.
///
/// `t0` and `t1` are the first and last times at which `h` attains its
/// minimum; the raising operator acts just before `t0`, the lowering operator
/// just after `t1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StringData {
    pub epsilon: i64,
    pub phi: i64,
    pub min_value: i64,
    pub t0: Rational64,
    pub t1: Rational64,
}

/// Breakpoint times and values of `h(t) = ⟨π(t), α̌_i⟩`, plus per-segment slopes.
struct Profile {
    times: Vec<Rational64>,
    values: Vec<Rational64>,
    slopes: Vec<i64>,
}

impl Path {
    /// The straight path `t ↦ tλ`; `λ` must be dominant.
    pub fn straight(rd: &RootDatum, lambda: &Weight) -> Result<Path> {
        rd.ensure_dominant(lambda)?;
        Ok(Path::straight_unchecked(lambda))
    }

    pub(crate) fn straight_unchecked(lambda: &Weight) -> Path {
        if lambda.is_zero() {
            Path::default()
        } else {
            Path { segments: vec![Segment { dir: lambda.clone(), dur: Rational64::one() }] }
        }
    }

    /// Validates and normalizes raw segments.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Path> {
        let rank = segments.first().map(|s| s.dir.len());
        if segments.iter().any(|s| Some(s.dir.len()) != rank) {
            return Err(Error::InvalidInput("segment directions have different lengths".into()));
        }
        if segments.iter().any(|s| s.dur.is_negative()) {
            return Err(Error::InvalidInput("negative segment duration".into()));
        }
        let total: Rational64 = segments.iter().map(|s| s.dur).sum();
        if !segments.is_empty() && total != Rational64::one() {
            return Err(Error::InvalidInput(format!("durations sum to {total}, expected 1")));
        }
        Ok(Path::normalized(segments))
    }

    fn normalized(raw: Vec<Segment>) -> Path {
        let mut segments: Vec<Segment> = Vec::with_capacity(raw.len());
        for s in raw {
            if s.dur.is_zero() {
                continue;
            }
            match segments.last_mut() {
                Some(last) if last.dir == s.dir => last.dur += s.dur,
                _ => segments.push(s),
            }
        }
        if segments.iter().all(|s| s.dir.is_zero()) {
            segments.clear();
        }
        Path { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_constant(&self) -> bool {
        self.segments.is_empty()
    }

    /// `π(1)` with rational coordinates; `None` for the constant path with
    /// unknown rank.
    pub fn endpoint(&self) -> Option<Vec<Rational64>> {
        let rank = self.segments.first()?.dir.len();
        let mut end = vec![Rational64::zero(); rank];
        for s in &self.segments {
            for (e, &d) in end.iter_mut().zip(&s.dir.0) {
                *e += s.dur * d;
            }
        }
        Some(end)
    }

    /// The integral endpoint `wt(π)`, in a lattice of the given rank.
    pub fn weight(&self, rank: usize) -> Result<Weight> {
        let Some(end) = self.endpoint() else {
            return Ok(Weight::zero(rank));
        };
        if end.len() != rank {
            return Err(Error::RankMismatch { expected: rank, found: end.len() });
        }
        end.iter()
            .map(|c| if c.is_integer() { Ok(c.to_integer()) } else { Err(Error::ForeignPath(format!("endpoint coordinate {c} is not integral"))) })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }

    fn profile(&self, rd: &RootDatum, i: usize) -> Profile {
        let n = self.segments.len();
        let mut times = Vec::with_capacity(n + 1);
        let mut values = Vec::with_capacity(n + 1);
        let mut slopes = Vec::with_capacity(n);
        let (mut t, mut h) = (Rational64::zero(), Rational64::zero());
        times.push(t);
        values.push(h);
        for s in &self.segments {
            let slope = rd.pair(&s.dir, i);
            t += s.dur;
            h += s.dur * slope;
            times.push(t);
            values.push(h);
            slopes.push(slope);
        }
        Profile { times, values, slopes }
    }

    pub fn string_data(&self, rd: &RootDatum, i: usize) -> Result<StringData> {
        rd.check_index(i)?;
        let p = self.profile(rd, i);
        let m = *p.values.iter().min().expect("profile is nonempty");
        if !m.is_integer() {
            return Err(Error::ForeignPath(format!("minimum {m} of the {}-th height function is not integral", i + 1)));
        }
        let last = *p.values.last().unwrap();
        if !last.is_integer() {
            return Err(Error::ForeignPath(format!("endpoint pairing {last} is not integral")));
        }
        let first = p.values.iter().position(|v| *v == m).unwrap();
        let final_ = p.values.iter().rposition(|v| *v == m).unwrap();
        let m = m.to_integer();
        Ok(StringData {
            epsilon: -m,
            phi: last.to_integer() - m,
            min_value: m,
            t0: p.times[first],
            t1: p.times[final_],
        })
    }

    /// `e_i π` or `f_i π`; `None` when the operator kills the path.
    pub fn root_operator(&self, rd: &RootDatum, i: usize, dir: RootDirection) -> Result<Option<Path>> {
        self.string_data(rd, i)?;
        Ok(match dir {
            RootDirection::Raise => self.raise(rd, i),
            RootDirection::Lower => self.lower(rd, i),
        })
    }

    /// `e_i`, assuming the path is crystal-generated.
    pub(crate) fn raise(&self, rd: &RootDatum, i: usize) -> Option<Path> {
        let p = self.profile(rd, i);
        let m = *p.values.iter().min().unwrap();
        if m > -Rational64::one() {
            return None;
        }
        let j1 = p.values.iter().position(|v| *v == m).unwrap();
        let target = m + 1;
        let mut t0 = None;
        for k in (0..j1).rev() {
            let (a, b) = (p.values[k], p.values[k + 1]);
            if b == target {
                t0 = Some(p.times[k + 1]);
                break;
            }
            if (a - target) * (b - target) < Rational64::zero() {
                t0 = Some(p.times[k] + (target - a) / p.slopes[k]);
                break;
            }
        }
        // h(0) = 0 ≥ m + 1, so the level m + 1 is crossed before t₁
        let t0 = t0.unwrap_or_else(Rational64::zero);
        Some(self.reflect_between(rd, i, t0, p.times[j1]))
    }

    /// `f_i`, assuming the path is crystal-generated.
    pub(crate) fn lower(&self, rd: &RootDatum, i: usize) -> Option<Path> {
        let p = self.profile(rd, i);
        let m = *p.values.iter().min().unwrap();
        let last = *p.values.last().unwrap();
        if last - m < Rational64::one() {
            return None;
        }
        let j0 = p.values.iter().rposition(|v| *v == m).unwrap();
        let target = m + 1;
        let mut t1 = None;
        for k in j0..p.slopes.len() {
            let (a, b) = (p.values[k], p.values[k + 1]);
            if a == target {
                t1 = Some(p.times[k]);
                break;
            }
            if (a - target) * (b - target) < Rational64::zero() {
                t1 = Some(p.times[k] + (target - a) / p.slopes[k]);
                break;
            }
            if b == target {
                t1 = Some(p.times[k + 1]);
                break;
            }
        }
        let t1 = t1.expect("h(1) ≥ m + 1 forces a crossing after t₀");
        Some(self.reflect_between(rd, i, p.times[j0], t1))
    }

    /// Applies `s_i` to the directions on `[t0, t1]`; the tail keeps its
    /// directions, which translates it by the reflected displacement.
    fn reflect_between(&self, rd: &RootDatum, i: usize, t0: Rational64, t1: Rational64) -> Path {
        let mut out = Vec::with_capacity(self.segments.len() + 2);
        let mut start = Rational64::zero();
        for s in &self.segments {
            let end = start + s.dur;
            let before = end.min(t0) - start;
            let middle = end.min(t1) - start.max(t0);
            let after = end - start.max(t1);
            if before.is_positive() {
                out.push(Segment { dir: s.dir.clone(), dur: before });
            }
            if middle.is_positive() {
                out.push(Segment { dir: rd.reflect_unchecked(&s.dir, i), dur: middle });
            }
            if after.is_positive() {
                out.push(Segment { dir: s.dir.clone(), dur: after });
            }
            start = end;
        }
        Path::normalized(out)
    }
}

/// Formats a rational as `"p/q"`, always with an explicit denominator.
pub fn format_rational(q: &Rational64) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = |e: std::num::ParseIntError| Error::Parse(format!("rational `{s}`: {e}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let q: i64 = q.trim().parse().map_err(bad)?;
            if q == 0 {
                return Err(Error::Parse(format!("rational `{s}` has zero denominator")));
            }
            Ok(Rational64::new(p.trim().parse().map_err(bad)?, q))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(bad)?)),
    }
}

#[derive(Serialize, Deserialize)]
struct SegmentJson {
    dir: Vec<String>,
    dur: String,
}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let segs: Vec<SegmentJson> = self
            .segments
            .iter()
            .map(|s| SegmentJson {
                dir: s.dir.0.iter().map(|&d| format_rational(&Rational64::from(d))).collect(),
                dur: format_rational(&s.dur),
            })
            .collect();
        segs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Path, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<SegmentJson>::deserialize(deserializer)?;
        let mut segments = Vec::with_capacity(raw.len());
        for s in raw {
            let dir = s
                .dir
                .iter()
                .map(|c| {
                    let q = parse_rational(c).map_err(D::Error::custom)?;
                    if q.is_integer() {
                        Ok(q.to_integer())
                    } else {
                        Err(D::Error::custom(format!("direction coordinate {q} is not integral")))
                    }
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let dur = parse_rational(&s.dur).map_err(D::Error::custom)?;
            segments.push(Segment { dir: Weight(dir), dur });
        }
        Path::from_segments(segments).map_err(D::Error::custom)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segments.is_empty() {
            return write!(f, "[]");
        }
        for (k, s) in self.segments.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", s.dir, s.dur)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn q(p: i64, d: i64) -> Rational64 {
        Rational64::new(p, d)
    }

    #[test]
    fn straight_paths() {
        let a1 = RootDatum::parse("A1").unwrap();
        let p = Path::straight(&a1, &w(&[1])).unwrap();
        assert_eq!(p.segments().len(), 1);
        assert_eq!(p.weight(1).unwrap(), w(&[1]));
        let a2 = RootDatum::parse("A2").unwrap();
        let zero = Path::straight(&a2, &w(&[0, 0])).unwrap();
        assert!(zero.is_constant());
        assert_eq!(zero.weight(2).unwrap(), w(&[0, 0]));
        assert!(matches!(Path::straight(&a2, &w(&[1, -1])), Err(Error::NotDominant(_))));
        let gl3 = RootDatum::parse("GL3").unwrap();
        let p = Path::straight(&gl3, &w(&[2, 1, 0])).unwrap();
        for i in 0..2 {
            let sd = p.string_data(&gl3, i).unwrap();
            assert_eq!((sd.epsilon, sd.min_value), (0, 0));
            assert_eq!(sd.phi, gl3.pairing(&w(&[2, 1, 0]), i).unwrap());
        }
    }

    #[test]
    fn a1_lower_once() {
        let a1 = RootDatum::parse("A1").unwrap();
        let top = Path::straight(&a1, &w(&[1])).unwrap();
        let low = top.root_operator(&a1, 0, RootDirection::Lower).unwrap().unwrap();
        assert_eq!(low.weight(1).unwrap(), w(&[-1]));
        // the whole straight path is reflected
        assert_eq!(low.segments(), &[Segment { dir: w(&[-1]), dur: q(1, 1) }]);
        let sd = low.string_data(&a1, 0).unwrap();
        assert_eq!((sd.min_value, sd.epsilon, sd.phi), (-1, 1, 0));
        let back = low.root_operator(&a1, 0, RootDirection::Raise).unwrap().unwrap();
        assert_eq!(back, top);
        assert!(top.root_operator(&a1, 0, RootDirection::Raise).unwrap().is_none());
    }

    #[test]
    fn a1_string_of_length_three() {
        let a1 = RootDatum::parse("A1").unwrap();
        let top = Path::straight(&a1, &w(&[2])).unwrap();
        let mid = top.lower(&a1, 0).unwrap();
        // f₁ on the straight path 2ϖ₁ reflects the first half
        assert_eq!(mid.segments(), &[Segment { dir: w(&[-2]), dur: q(1, 2) }, Segment { dir: w(&[2]), dur: q(1, 2) }]);
        assert_eq!(mid.weight(1).unwrap(), w(&[0]));
        let bottom = mid.lower(&a1, 0).unwrap();
        assert_eq!(bottom.weight(1).unwrap(), w(&[-2]));
        assert!(bottom.lower(&a1, 0).is_none());
        assert_eq!(bottom.raise(&a1, 0).unwrap().raise(&a1, 0).unwrap(), top);
    }

    #[test]
    fn a2_fundamental_string_data() {
        let a2 = RootDatum::parse("A2").unwrap();
        let top = Path::straight(&a2, &w(&[1, 0])).unwrap();
        let p = top.lower(&a2, 0).unwrap().lower(&a2, 1).unwrap();
        let sd = p.string_data(&a2, 1).unwrap();
        assert_eq!((sd.epsilon, sd.phi, sd.min_value), (1, 0, -1));
        assert_eq!(p.weight(2).unwrap(), w(&[0, -1]));
    }

    #[test]
    fn foreign_paths_rejected() {
        let a1 = RootDatum::parse("A1").unwrap();
        let half = Path::from_segments(vec![
            Segment { dir: w(&[1]), dur: q(1, 2) },
            Segment { dir: w(&[-2]), dur: q(1, 2) },
        ])
        .unwrap();
        assert!(matches!(half.string_data(&a1, 0), Err(Error::ForeignPath(_))));
        assert!(Path::from_segments(vec![Segment { dir: w(&[1]), dur: q(1, 2) }]).is_err());
    }

    #[test]
    fn normalization_merges_equal_directions() {
        let p = Path::from_segments(vec![
            Segment { dir: w(&[1, 0]), dur: q(1, 3) },
            Segment { dir: w(&[1, 0]), dur: q(2, 3) },
            Segment { dir: w(&[0, 1]), dur: q(0, 1) },
        ])
        .unwrap();
        assert_eq!(p.segments(), &[Segment { dir: w(&[1, 0]), dur: q(1, 1) }]);
    }

    #[test]
    fn json_round_trip() {
        let a2 = RootDatum::parse("A2").unwrap();
        let p = Path::straight(&a2, &w(&[2, 1])).unwrap().lower(&a2, 0).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"[{"dir":["-2/1","3/1"],"dur":"1/2"},{"dir":["2/1","1/1"],"dur":"1/2"}]"#);
        let back: Path = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}
