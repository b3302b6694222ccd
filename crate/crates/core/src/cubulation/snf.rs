//! Smith normal form of small integer matrices.

/// The nonzero diagonal entries `d_1 | d_2 | ...` of the Smith normal form of
/// `m`, all positive. Their count is the rank of `m`.
pub fn elementary_divisors(m: &[Vec<i64>]) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = smallest_entry(&a, t) else { break };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for r in t + 1..rows {
                let q = a[r][t] / p;
                if q != 0 {
                    for c in t..cols {
                        a[r][c] -= q * a[t][c];
                    }
                }
                dirty |= a[r][t] != 0;
            }
            for c in t + 1..cols {
                let q = a[t][c] / p;
                if q != 0 {
                    for r in t..rows {
                        a[r][c] -= q * a[r][t];
                    }
                }
                dirty |= a[t][c] != 0;
            }
            if !dirty {
                // The pivot must divide every remaining entry.
                let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| a[r][c] % p != 0));
                match bad {
                    Some(r) => {
                        for c in t..cols {
                            a[t][c] += a[r][c];
                        }
                    }
                    None => break,
                }
            }
            let (pr, pc) = smallest_entry_in_cross(&a, t);
            a.swap(t, pr);
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
        }
        out.push(a[t][t].unsigned_abs() as i64);
        t += 1;
    }
    out
}

fn smallest_entry(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for (r, row) in a.iter().enumerate().skip(t) {
        for (c, &v) in row.iter().enumerate().skip(t) {
            if v != 0 && best.is_none_or(|(b, _, _)| v.abs() < b) {
                best = Some((v.abs(), r, c));
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

/// Smallest nonzero entry in row `t` or column `t` (from `t` on).
fn smallest_entry_in_cross(a: &[Vec<i128>], t: usize) -> (usize, usize) {
    let mut best = (a[t][t].abs(), t, t);
    for (r, row) in a.iter().enumerate().skip(t) {
        let v = row[t].abs();
        if v != 0 && (best.0 == 0 || v < best.0) {
            best = (v, r, t);
        }
    }
    for (c, &v) in a[t].iter().enumerate().skip(t) {
        if v != 0 && (best.0 == 0 || v.abs() < best.0) {
            best = (v.abs(), t, c);
        }
    }
    (best.1, best.2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        assert_eq!(elementary_divisors(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(elementary_divisors(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(elementary_divisors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(elementary_divisors(&[vec![1, -1, 0], vec![1, 0, -1], vec![0, 1, -1]]), vec![1, 1]);
    }

    fn det(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 1 {
            return m[0][0] as i128;
        }
        (0..n)
            .map(|c| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect()).collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] as i128 * det(&minor)
            })
            .sum()
    }

    proptest! {
        #[test]
        fn product_of_divisors_is_the_determinant(m in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 3)) {
            let d = elementary_divisors(&m);
            let full = d.len() == 3;
            let prod: i128 = d.iter().map(|&x| x as i128).product();
            prop_assert_eq!(if full { prod } else { 0 }, det(&m).abs());
            for w in d.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }
    }
}
