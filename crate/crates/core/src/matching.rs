//! Small bipartite matching and assignment routines used by orbit membership
//! and orbit intersection.

/// Whether the bipartite graph given by `adj` (left vertex -> bitmask of right
/// vertices) has a matching saturating every left vertex.
pub fn has_perfect_matching(adj: &[u64]) -> bool {
    let mut owner = [usize::MAX; 64];
    for left in 0..adj.len() {
        let mut seen = 0u64;
        if !augment(left, adj, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(left: usize, adj: &[u64], owner: &mut [usize; 64], seen: &mut u64) -> bool {
    let mut cand = adj[left] & !*seen;
    while cand != 0 {
        let right = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        *seen |= 1 << right;
        if owner[right] == usize::MAX || augment(owner[right], adj, owner, seen) {
            owner[right] = left;
            return true;
        }
    }
    false
}

/// Maximum total weight of a perfect assignment in a square matrix, where
/// `None` marks a forbidden pair. Returns `None` when no perfect assignment
/// avoids the forbidden pairs.
pub fn max_weight_assignment(weights: &[Vec<Option<i64>>]) -> Option<i64> {
    let n = weights.len();
    if n == 0 {
        return Some(0);
    }
    let max_w = weights
        .iter()
        .flatten()
        .flatten()
        .map(|w| w.abs())
        .max()
        .unwrap_or(0);
    let forbidden = (max_w + 1) * (n as i64 + 1) * 4;
    let cost = |i: usize, j: usize| -> i64 {
        match weights[i][j] {
            Some(w) => -w,
            None => forbidden,
        }
    };
    // Hungarian method, potentials formulation, 1-based internal indices.
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut total = 0i64;
    for j in 1..=n {
        let w = weights[p[j] - 1][j - 1]?;
        total += w;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(weights: &[Vec<Option<i64>>]) -> Option<i64> {
        let n = weights.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<i64> = None;
        loop {
            let mut total = Some(0i64);
            for (i, &j) in perm.iter().enumerate() {
                total = match (total, weights[i][j]) {
                    (Some(t), Some(w)) => Some(t + w),
                    _ => None,
                };
            }
            if let Some(t) = total {
                best = Some(best.map_or(t, |b: i64| b.max(t)));
            }
            if !next_permutation(&mut perm) {
                return best;
            }
        }
    }

    fn next_permutation(v: &mut [usize]) -> bool {
        if v.len() < 2 {
            return false;
        }
        let mut i = v.len() - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = v.len() - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }

    #[test]
    fn assignment_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(1..=6);
            let w: Vec<Vec<Option<i64>>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| if rng.gen_bool(0.3) { None } else { Some(rng.gen_range(0..3)) })
                        .collect()
                })
                .collect();
            assert_eq!(max_weight_assignment(&w), brute(&w), "{w:?}");
            let adj: Vec<u64> = w
                .iter()
                .map(|row| row.iter().enumerate().filter(|(_, x)| x.is_some()).fold(0u64, |m, (j, _)| m | 1 << j))
                .collect();
            assert_eq!(has_perfect_matching(&adj), brute(&w).is_some());
        }
    }
}
