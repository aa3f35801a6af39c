//! Test-only oracles, kept apart from the code paths they check.
#![allow(dead_code)]

use lensbook::matrix::IntMatrix;

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Cofactor expansion along the first row.
pub fn det_by_cofactors(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        k => (0..k)
            .filter(|&c| m[0][c] != 0)
            .map(|c| {
                let sub: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det_by_cofactors(&sub)
            })
            .sum(),
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// `k×k` minors and the `k`-th factor is `d_k / d_{k-1}`. Exhaustive over
/// minors, no elimination.
pub fn invariant_factors_by_minors(m: &IntMatrix) -> Vec<i128> {
    let rows = m.to_rows();
    let (r, c) = (m.rows(), m.cols());
    let size = r.min(c);
    let mut divisors = vec![1i128];
    for k in 1..=size {
        let mut g = 0i128;
        for rs in combinations(r, k) {
            for cs in combinations(c, k) {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j]).collect()).collect();
                g = gcd(g, det_by_cofactors(&sub));
                if g == 1 {
                    break;
                }
            }
            if g == 1 {
                break;
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    let mut factors: Vec<i128> = divisors.windows(2).map(|w| w[1] / w[0]).collect();
    factors.resize(size, 0);
    factors
}

/// Sorted framings of all blow-up circles.
pub fn circle_framings(d: &lensbook::MixedDiagram) -> Vec<i64> {
    let mut f: Vec<i64> = d.circles().iter().map(|c| c.framing).collect();
    f.sort();
    f
}
