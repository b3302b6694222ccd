//! Exact counting identities for the cubes and cube types of a piece.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `binom(a, b)`, zero when `b < 0` or `b > a`.
pub fn binom(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for j in 0..b {
        acc = acc * BigInt::from(a - j) / BigInt::from(j + 1);
    }
    acc
}

/// Sums `weight(left, i_0) * weight(left - i_0, i_1) * ...` over the counts
/// `(i_0, ..., i_{k-2})` of letters `0..k-2` in a word of length `n`, with
/// `i_0 + ... + i_s >= 2s + 2` when `constrained`. `left` is the number of
/// letters not yet assigned. The tail sum depends only on how many letters
/// are placed, so it is tabulated level by level.
fn count_vector_sum(k: usize, n: i64, constrained: bool, weight: impl Fn(i64, i64) -> BigInt) -> BigInt {
    let width = n as usize + 1;
    let mut tail = vec![BigInt::one(); width];
    for depth in (0..k.saturating_sub(1)).rev() {
        let lower_bound = if constrained { 2 * depth as i64 + 2 } else { 0 };
        tail = (0..width as i64)
            .map(|used| {
                let lower = (lower_bound - used).max(0);
                (lower..=n - used).map(|i| weight(n - used, i) * &tail[(used + i) as usize]).sum()
            })
            .collect();
    }
    tail.swap_remove(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combo1 {
    pub nested_sum: BigInt,
    pub k_power: BigInt,
    pub spanning_trees: BigInt,
}

impl Combo1 {
    pub fn holds(&self) -> bool {
        self.nested_sum == self.k_power && self.k_power == self.spanning_trees
    }
}

/// The number of cubes of `X_0` counted three ways.
pub fn combo1(k: u32) -> Combo1 {
    let k_us = k as usize;
    let n = 2 * k as i64 - 1;
    let nested_sum = count_vector_sum(k_us, n, true, binom);
    let k_power = BigInt::from(k).pow(n as u32 - 1);
    let spanning_trees = complete_bipartite_spanning_trees(k_us);
    Combo1 { nested_sum, k_power, spanning_trees }
}

/// Spanning trees of `K_{j,j}` by the matrix-tree theorem.
pub fn complete_bipartite_spanning_trees(j: usize) -> BigInt {
    let size = 2 * j;
    let mut lap = vec![vec![BigInt::zero(); size]; size];
    for a in 0..j {
        for b in j..size {
            lap[a][b] = BigInt::from(-1);
            lap[b][a] = BigInt::from(-1);
        }
    }
    for (v, row) in lap.iter_mut().enumerate() {
        row[v] = BigInt::from(j);
    }
    let minor: Vec<Vec<BigInt>> = lap[1..].iter().map(|row| row[1..].to_vec()).collect();
    determinant(minor)
}

/// Exact determinant by fraction-free Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for p in 0..n {
        if m[p][p].is_zero() {
            match (p + 1..n).find(|&r| !m[r][p].is_zero()) {
                Some(r) => {
                    m.swap(p, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for r in p + 1..n {
            for c in p + 1..n {
                let v = (&m[r][c] * &m[p][p] - &m[r][p] * &m[p][c]) / &prev;
                m[r][c] = v;
            }
        }
        prev = m[p][p].clone();
    }
    sign * &m[n - 1][n - 1]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combo2 {
    pub lhs: BigInt,
    pub mid: BigInt,
    pub rhs: BigInt,
}

impl Combo2 {
    pub fn holds(&self) -> bool {
        self.lhs == self.mid && self.mid == self.rhs
    }
}

/// The number of cube types of `T^n` counted three ways.
pub fn combo2(k: u32) -> Combo2 {
    let n = 2 * k as i64 - 1;
    let constrained = count_vector_sum(k as usize, n, true, |_, _| BigInt::one());
    let free = count_vector_sum(k as usize, n, false, |_, _| BigInt::one());
    Combo2 { lhs: constrained * BigInt::from(k), mid: free, rhs: binom(3 * k as i64 - 2, k as i64 - 1) }
}

/// Number of non-decreasing words of length `n` over `0..k`, by direct
/// enumeration.
pub fn enumerate_cube_types(k: u32, n: usize) -> u64 {
    fn rec(pos: usize, n: usize, min: u32, k: u32) -> u64 {
        if pos == n {
            return 1;
        }
        (min..k).map(|v| rec(pos + 1, n, v, k)).sum()
    }
    rec(0, n, 0, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let c = combo1(2);
        assert_eq!(c.nested_sum, BigInt::from(4));
        assert!(c.holds());
        assert_eq!(combo1(3).nested_sum, BigInt::from(81));
        let d = combo2(2);
        assert_eq!(d.mid, BigInt::from(4));
        assert!(d.holds());
        assert_eq!(combo2(3).rhs, BigInt::from(21));
    }

    /// Direct enumeration of the constrained count vectors, summing the
    /// product of binomials.
    fn enumerated_nested_sum(k: usize, n: i64) -> BigInt {
        fn rec(depth: usize, k: usize, n: i64, used: i64, term: BigInt, acc: &mut BigInt) {
            if depth + 1 == k {
                *acc += term;
                return;
            }
            for i in (2 * depth as i64 + 2 - used).max(0)..=n - used {
                rec(depth + 1, k, n, used + i, &term * binom(n - used, i), acc);
            }
        }
        let mut acc = BigInt::zero();
        rec(0, k, n, 0, BigInt::one(), &mut acc);
        acc
    }

    #[test]
    fn tabulated_sum_matches_enumeration() {
        for k in 2..=6u32 {
            assert_eq!(combo1(k).nested_sum, enumerated_nested_sum(k as usize, 2 * k as i64 - 1), "k={k}");
        }
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binom(5, -1), BigInt::zero());
        assert_eq!(binom(5, 7), BigInt::zero());
        assert_eq!(binom(7, 2), BigInt::from(21));
    }

    #[test]
    fn determinant_of_small_matrix() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(3)],
            vec![BigInt::from(1), BigInt::from(4), BigInt::from(5)],
        ];
        // 2*(0*5-3*4) - 1*(0*5-3*1) + 0 = -24 + 3 = -21
        assert_eq!(determinant(m), BigInt::from(-21));
    }
}
