use multisect::golden;
use multisect::handles::{decompose, Decomposition};
use multisect::{Factor, TorusParams};
use std::collections::BTreeMap;

/// Rows whose printed glue column disagrees with the geometry.
fn printed_glue_errata() -> BTreeMap<&'static str, Vec<usize>> {
    BTreeMap::from([
        ("T7X012", vec![10, 11, 12]),
        ("T91", vec![16]),
        ("T92", vec![17, 18, 19, 24, 29, 30, 31, 32, 33, 34, 35, 36, 37, 38, 39, 40]),
        ("T111", vec![8, 21, 22, 37, 38, 42, 48, 49, 51, 52, 67, 68]),
    ])
}

/// Largest total meet dimension over all bijections between factor lists,
/// by exhaustive search.
fn exhaustive_meet(params: &TorusParams, a: &[Factor], b: &[Factor]) -> Option<usize> {
    fn rec(m: i32, a: &[Factor], b: &[Factor], p: usize, used: &mut Vec<bool>, acc: usize, best: &mut Option<usize>) {
        if p == a.len() {
            *best = (*best).max(Some(acc));
            return;
        }
        for q in 0..b.len() {
            if used[q] {
                continue;
            }
            if let Some(d) = a[p].meet_dim(&b[q], m) {
                used[q] = true;
                rec(m, a, b, p + 1, used, acc + d, best);
                used[q] = false;
            }
        }
    }
    let mut best = None;
    rec(params.modulus(), a, b, 0, &mut vec![false; b.len()], 0, &mut best);
    best
}

fn computed(name: &str) -> (golden::GoldenTable, Decomposition) {
    let t = golden::load(name).unwrap();
    let params = t.params().unwrap();
    let d = decompose(&params, &t.set().unwrap(), &t.order(), Some(t.rows.len())).unwrap();
    (t, d)
}

fn odd_tables() -> Vec<&'static str> {
    golden::names().into_iter().filter(|n| golden::load(n).unwrap().n % 2 == 1).collect()
}

#[test]
fn handle_indices_match_every_printed_table() {
    for name in odd_tables() {
        let (t, d) = computed(name);
        assert_eq!(d.records.len(), t.rows.len(), "{name}");
        let hs: Vec<usize> = d.records.iter().map(|r| r.h).collect();
        let printed: Vec<usize> = t.rows.iter().map(|r| r.h).collect();
        assert_eq!(hs, printed, "{name}");
    }
}

#[test]
fn t7_pair_h_sequence() {
    let (_, d) = computed("T7X02");
    let hs: Vec<usize> = d.records.iter().map(|r| r.h).collect();
    assert_eq!(hs, vec![0, 0, 1, 0, 1, 0, 1, 1, 1, 2, 1, 2]);
}

#[test]
fn glue_matches_outside_documented_errata() {
    let errata = printed_glue_errata();
    for name in odd_tables() {
        let (t, d) = computed(name);
        let mismatched: Vec<usize> = d
            .records
            .iter()
            .zip(&t.rows)
            .filter(|(r, p)| r.glue_to != p.glue_to)
            .map(|(r, _)| r.z)
            .collect();
        let expected = errata.get(name).cloned().unwrap_or_default();
        assert_eq!(mismatched, expected, "{name}");
    }
}

#[test]
fn erratum_rows_agree_with_exhaustive_oracle() {
    for (name, rows) in printed_glue_errata() {
        let (t, d) = computed(name);
        let params = d.params;
        let target = params.n - d.set.len();
        for z in rows {
            let rec = &d.records[z - 1];
            let mine = rec.rep.all_factors();
            let printed = &t.rows[z - 1].glue_to;
            let mut candidates: Vec<usize> = rec.glue_to.iter().chain(printed).copied().collect();
            candidates.sort_unstable();
            candidates.dedup();
            for w in candidates {
                let other = d.records[w - 1].rep.all_factors();
                let dim = exhaustive_meet(&params, &mine, &other);
                assert_eq!(dim == Some(target), rec.glue_to.contains(&w), "{name} z={z} w={w} dim={dim:?}");
            }
        }
    }
}

#[test]
fn first_rows_are_zero_handles_and_h_is_bounded() {
    for name in odd_tables() {
        let (t, d) = computed(name);
        assert_eq!(d.records[0].h, 0, "{name}");
        assert!(d.records[0].glue_to.is_empty());
        assert!(d.max_h() <= t.index_set.len(), "{name}");
        for r in &d.records {
            let total: usize = r.groups.iter().map(|g| g.dim).sum();
            assert_eq!(total, d.params.n + 1 - d.set.len(), "{name} z={}", r.z);
        }
    }
}

#[test]
fn unknown_table_is_an_error() {
    assert!(golden::load("T99").is_err());
}
