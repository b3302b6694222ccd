//! Permutation helpers.

/// Advances `v` to the next lexicographic permutation; returns `false` (and
/// leaves `v` sorted descending) when `v` was the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
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

/// Calls `visit` once for every distinct rearrangement of `items`.
pub fn for_each_distinct_permutation<T: Ord + Clone>(items: &[T], mut visit: impl FnMut(&[T])) {
    let mut v = items.to_vec();
    v.sort();
    loop {
        visit(&v);
        if !next_permutation(&mut v) {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_permutation_counts() {
        let mut count = 0;
        for_each_distinct_permutation(&[1, 1, 2, 3], |_| count += 1);
        assert_eq!(count, 12);
        let mut all = 0;
        for_each_distinct_permutation(&[0, 1, 2, 3], |_| all += 1);
        assert_eq!(all, 24);
    }
}
