//! Exact linear algebra over ℤ and ℚ for the small matrices that show up in
//! root data: rational solves, ranks and Smith normal form.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

/// Solves `Σ c_j columns[j] = target` over ℚ.
///
/// Returns `None` when the target is outside the rational span. The columns
/// are assumed linearly independent, so a solution is unique when it exists.
pub fn solve_rational(columns: &[Vec<i64>], target: &[i64]) -> Option<Vec<Rational64>> {
    let rows = target.len();
    let cols = columns.len();
    // augmented matrix, one row per ambient coordinate
    let mut m: Vec<Vec<Rational64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational64> = columns.iter().map(|c| Rational64::from(c[r])).collect();
            row.push(Rational64::from(target[r]));
            row
        })
        .collect();

    let mut pivots = Vec::with_capacity(cols);
    let mut pr = 0;
    for c in 0..cols {
        let Some(p) = (pr..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(pr, p);
        let inv = m[pr][c].recip();
        for v in m[pr].iter_mut() {
            *v *= inv;
        }
        for r in 0..rows {
            if r != pr && !m[r][c].is_zero() {
                let factor = m[r][c];
                for k in 0..=cols {
                    let delta = factor * m[pr][k];
                    m[r][k] -= delta;
                }
            }
        }
        pivots.push((pr, c));
        pr += 1;
    }
    if (pr..rows).any(|r| !m[r][cols].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational64::zero(); cols];
    for (r, c) in pivots {
        sol[c] = m[r][cols];
    }
    Some(sol)
}

/// Rank over ℚ of the given list of vectors.
pub fn rank(vectors: &[Vec<i64>]) -> usize {
    let Some(len) = vectors.first().map(Vec::len) else {
        return 0;
    };
    let mut m: Vec<Vec<Rational64>> =
        vectors.iter().map(|v| v.iter().map(|&x| Rational64::from(x)).collect()).collect();
    let mut rank = 0;
    for c in 0..len {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if !m[r][c].is_zero() {
                let factor = m[r][c] / m[rank][c];
                for k in c..len {
                    let delta = factor * m[rank][k];
                    m[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Smith normal form `U · M · V = D` of an integer matrix `M`.
///
/// `diagonal` holds the nonzero invariant factors `d_1 | d_2 | …`, all positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub diagonal: Vec<i64>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn smith_normal_form(m: &[Vec<i64>], cols: usize) -> SmithForm {
    let rows = m.len();
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    // row ops are mirrored on `u`, column ops on `v`
    let add_row = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, dst: usize, src: usize, k: i64| {
        for j in 0..a[dst].len() {
            a[dst][j] -= k * a[src][j];
        }
        for j in 0..u[dst].len() {
            u[dst][j] -= k * u[src][j];
        }
    };
    let add_col = |a: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, dst: usize, src: usize, k: i64| {
        for row in a.iter_mut() {
            row[dst] -= k * row[src];
        }
        for row in v.iter_mut() {
            row[dst] -= k * row[src];
        }
    };

    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let pivot = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| a[r][c] != 0)
            .min_by_key(|&(r, c)| a[r][c].abs());
        let Some((pr, pc)) = pivot else { break };
        a.swap(t, pr);
        u.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        for row in v.iter_mut() {
            row.swap(t, pc);
        }

        loop {
            let p = a[t][t];
            let mut dirty = false;
            for r in t + 1..rows {
                if a[r][t] != 0 {
                    let q = Integer::div_floor(&a[r][t], &p);
                    add_row(&mut a, &mut u, r, t, q);
                    if a[r][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for c in t + 1..cols {
                if a[t][c] != 0 {
                    let q = Integer::div_floor(&a[t][c], &p);
                    add_col(&mut a, &mut v, c, t, q);
                    if a[t][c] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // enforce the divisibility chain on the trailing block
                let bad = (t + 1..rows)
                    .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                    .find(|&(r, c)| a[r][c] % p != 0);
                match bad {
                    None => break,
                    Some((r, _)) => {
                        add_row(&mut a, &mut u, t, r, -1);
                        dirty = true;
                    }
                }
            }
            if dirty {
                let pivot = (t..rows)
                    .flat_map(|r| (t..cols).map(move |c| (r, c)))
                    .filter(|&(r, c)| a[r][c] != 0 && (r == t || c == t))
                    .min_by_key(|&(r, c)| a[r][c].abs());
                if let Some((pr, pc)) = pivot {
                    a.swap(t, pr);
                    u.swap(t, pr);
                    for row in a.iter_mut() {
                        row.swap(t, pc);
                    }
                    for row in v.iter_mut() {
                        row.swap(t, pc);
                    }
                }
            }
        }
        if a[t][t] < 0 {
            for j in 0..cols {
                a[t][j] = -a[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
        diagonal.push(a[t][t]);
        t += 1;
    }
    SmithForm { u, v, diagonal }
}

/// Applies an integer matrix to an integer vector.
pub fn mat_vec(m: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

pub(crate) fn is_nonneg_integral(coeffs: &[Rational64]) -> bool {
    coeffs.iter().all(|c| c.is_integer() && !c.is_negative())
}

pub(crate) fn to_integers(coeffs: &[Rational64]) -> Option<Vec<i64>> {
    coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
}

pub(crate) fn lcm_of_denominators(values: &[Rational64]) -> i64 {
    values.iter().fold(1i64, |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| (0..n).map(|j| row.iter().enumerate().map(|(k, x)| x * b[k][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn solve_in_and_out_of_span() {
        let cols = vec![vec![1, -1, 0], vec![0, 1, -1]];
        let sol = solve_rational(&cols, &[1, 0, -1]).unwrap();
        assert_eq!(sol, vec![Rational64::from(1), Rational64::from(1)]);
        assert!(solve_rational(&cols, &[1, 1, 1]).is_none());
    }

    #[test]
    fn snf_reconstructs() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith_normal_form(&m, 3);
        assert_eq!(s.diagonal, vec![2, 6, 12]);
        let d = mat_mul(&mat_mul(&s.u, &m), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let expected = if i == j { s.diagonal[i] } else { 0 };
                assert_eq!(x, expected);
            }
        }
    }

    #[test]
    fn snf_rectangular() {
        // columns α1 = ε1-ε2 and α2 = ε2-ε3 in ℤ³
        let m = vec![vec![1, 0], vec![-1, 1], vec![0, -1]];
        let s = smith_normal_form(&m, 2);
        assert_eq!(s.diagonal, vec![1, 1]);
        let d = mat_mul(&mat_mul(&s.u, &m), &s.v);
        assert_eq!(d, vec![vec![1, 0], vec![0, 1], vec![0, 0]]);
    }

    #[test]
    fn rank_detects_dependence() {
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(&[vec![1, 2], vec![2, 5]]), 2);
    }
}
