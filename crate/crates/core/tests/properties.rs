use multisect::cubulation::{homology, lift_multisection, vertex_link_check, DirectedCubeComplex, Gluing, Quotient, Sign};
use multisect::handles::descriptor::EnumerationOrder;
use multisect::handles::{decompose, Decomposition};
use multisect::identities::{binom, combo1, combo2, enumerate_cube_types};
use multisect::multisection::build_piece;
use multisect::perm::for_each_distinct_permutation;
use multisect::torus::{
    cutoff_indices, in_piece, membership_disagreement, monotonic_sort, orbit_intersection, periodic_extend, point_in_orbit, SubcubeWord,
};
use multisect::{Factor, IndexSet, OrbitBox, ScaledPoint, TorusParams};
use proptest::prelude::*;

fn point(k: u32) -> impl Strategy<Value = (TorusParams, Vec<i32>)> {
    let params = TorusParams::odd(k).unwrap();
    prop::collection::vec(0..params.modulus(), params.n).prop_map(move |c| (params, c))
}

fn any_point() -> impl Strategy<Value = (TorusParams, Vec<i32>)> {
    (2u32..=4).prop_flat_map(point)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn sorting_is_idempotent_and_ignores_input_order((params, coords) in any_point(), rot in 0usize..7) {
        let x = ScaledPoint::new(&params, coords.clone()).unwrap();
        let m = monotonic_sort(&x);
        prop_assert!(m.point.coords.windows(2).all(|w| w[0] <= w[1]));
        let permuted: Vec<i32> = m.perm.iter().map(|&i| coords[i]).collect();
        prop_assert_eq!(&permuted, &m.point.coords);
        prop_assert_eq!(&monotonic_sort(&m.point).point, &m.point);
        let mut rotated = coords.clone();
        rotated.rotate_left(rot % coords.len());
        prop_assert_eq!(monotonic_sort(&ScaledPoint::new(&params, rotated).unwrap()).point, m.point);
    }

    #[test]
    fn cutoff_indices_interleave((params, coords) in any_point(), r in -3i64..6) {
        let x = monotonic_sort(&ScaledPoint::new(&params, coords).unwrap());
        prop_assume!(!x.diagonal);
        let (a, b) = cutoff_indices(&params, &x, r).unwrap();
        let (a_next, _) = cutoff_indices(&params, &x, r + 1).unwrap();
        prop_assert!(a <= b && b <= a_next);
        let hits_r = periodic_extend(&params, &x, a + 1).unwrap() == 6 * r;
        prop_assert_eq!(a == b, !hits_r);
        let n = params.n as i64;
        let (ak, bk) = cutoff_indices(&params, &x, r + params.k as i64).unwrap();
        prop_assert_eq!((ak, bk), (a + n, b + n));
        prop_assert_eq!(periodic_extend(&params, &x, a + 1 + n).unwrap(), periodic_extend(&params, &x, a + 1).unwrap() + params.modulus() as i64);
    }

    #[test]
    fn cutoff_and_box_membership_agree((params, coords) in any_point()) {
        prop_assert_eq!(membership_disagreement(&params, &coords).unwrap(), None);
    }

    #[test]
    fn pieces_are_translates((params, coords) in any_point(), r in 0i64..4) {
        let x = ScaledPoint::new(&params, coords).unwrap();
        prop_assert_eq!(in_piece(&params, &x, r).unwrap(), in_piece(&params, &x.translate(&params, 1), r + 1).unwrap());
    }

    #[test]
    fn every_point_lies_in_some_piece((params, coords) in any_point()) {
        let x = ScaledPoint::new(&params, coords).unwrap();
        let count = (0..params.k as i64).filter(|&r| in_piece(&params, &x, r).unwrap()).count();
        prop_assert!(count >= 1);
    }
}

fn factor(m: i32) -> impl Strategy<Value = Factor> {
    (0..m, prop::sample::select(vec![0, 0, 2, 3, 6, 6, 12]))
        .prop_map(|(lo, len)| if len == 0 { Factor::point(lo) } else { Factor::interval(lo, lo + len) })
}

/// Largest total meet dimension over all bijections, or `None` when every
/// bijection has an empty pair.
fn brute_force_meet(m: i32, a: &[Factor], b: &[Factor]) -> Option<usize> {
    let mut best = None;
    for_each_distinct_permutation(b, |perm| {
        let dims: Option<usize> = a.iter().zip(perm).map(|(x, y)| x.meet_dim(y, m)).sum();
        best = best.max(dims);
    });
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn orbit_intersection_matches_brute_force(
        k in 2u32..=3,
        a in prop::collection::vec(factor(18), 5),
        b in prop::collection::vec(factor(18), 5),
    ) {
        let params = TorusParams::odd(k).unwrap();
        let m = params.modulus();
        let a: Vec<Factor> = a.into_iter().take(params.n).map(|f| f.reduced(&params)).collect();
        let b: Vec<Factor> = b.into_iter().take(params.n).map(|f| f.reduced(&params)).collect();
        let fast = orbit_intersection(&params, &OrbitBox::single(a.clone()), &OrbitBox::single(b.clone())).unwrap();
        prop_assert_eq!(fast, brute_force_meet(m, &a, &b));
    }
}

#[test]
fn pieces_are_translation_equivariant_and_symmetric() {
    for k in 2..=4 {
        let params = TorusParams::odd(k).unwrap();
        let base = build_piece(&params, 0).unwrap();
        for r in 1..k {
            let shifted: std::collections::BTreeSet<SubcubeWord> = base.cubes.iter().map(|w| w.translate(k, r)).collect();
            assert_eq!(shifted, build_piece(&params, r).unwrap().cubes, "k={k} r={r}");
        }
        for w in &base.cubes {
            let mut rotated = w.w.clone();
            rotated.rotate_left(1);
            let mut swapped = w.w.clone();
            swapped.swap(0, 1);
            assert!(base.cubes.contains(&SubcubeWord::new(rotated)));
            assert!(base.cubes.contains(&SubcubeWord::new(swapped)));
        }
    }
}

#[test]
fn binomials_vanish_outside_range_and_identities_hold() {
    assert_eq!(binom(3, -1), 0.into());
    assert_eq!(binom(3, 4), 0.into());
    for k in 2..=12 {
        assert!(combo1(k).holds(), "k={k}");
        assert!(combo2(k).holds(), "k={k}");
    }
    for k in 2..=6 {
        assert_eq!(combo2(k).mid, enumerate_cube_types(k, 2 * k as usize - 1).into(), "k={k}");
    }
}

fn all_decompositions(max_k: u32) -> Vec<Decomposition> {
    (2..=max_k)
        .flat_map(|k| {
            let params = TorusParams::odd(k).unwrap();
            IndexSet::all_simple_proper(k)
                .into_iter()
                .map(move |set| decompose(&params, &set, &EnumerationOrder::default(), None).unwrap())
        })
        .collect()
}

/// Pairs `(k, I, z, w)` of pieces that differ only in `U⁻` yet share
/// boundary points once both are closed up under the full symmetric group.
const U_MINUS_CONTACTS: [(u32, &str, usize, usize); 4] =
    [(4, "{0,1,2}", 15, 16), (5, "{0,1,2}", 15, 16), (5, "{0,1,2,3}", 46, 47), (5, "{0,1,2,3}", 52, 56)];

#[test]
fn pieces_differing_only_in_u_minus_have_disjoint_interiors() {
    let mut pairs = 0;
    let mut contacts = Vec::new();
    for d in all_decompositions(5) {
        let facet_dim = d.params.n - d.set.len();
        for (zi, a) in d.records.iter().enumerate() {
            for b in &d.records[zi + 1..] {
                let (da, db) = (a.descriptor.as_ref().unwrap(), b.descriptor.as_ref().unwrap());
                let same = da.j == db.j && da.i_star == db.i_star && da.v_minus == db.v_minus && da.u_circ == db.u_circ;
                if !same || da.u_minus == db.u_minus {
                    continue;
                }
                pairs += 1;
                let meet = orbit_intersection(&d.params, &a.rep, &OrbitBox::single(b.rep.all_factors())).unwrap();
                if let Some(dim) = meet {
                    assert!(dim < facet_dim, "{} z={} w={} meet in dimension {dim}", d.set, a.z, b.z);
                    assert!(!b.glue_to.contains(&a.z));
                    contacts.push((d.params.k, d.set.to_string(), a.z, b.z));
                }
            }
        }
    }
    assert!(pairs > 0);
    let expected: Vec<(u32, String, usize, usize)> =
        U_MINUS_CONTACTS.iter().map(|&(k, s, z, w)| (k, s.to_string(), z, w)).collect();
    assert_eq!(contacts, expected);
}

#[test]
fn u_minus_contact_point_lies_in_both_pieces() {
    let params = TorusParams::odd(4).unwrap();
    let set = IndexSet::parse(4, "0,1,2").unwrap();
    let d = decompose(&params, &set, &EnumerationOrder::default(), None).unwrap();
    let x = [18, 0, 0, 6, 6, 12, 15];
    for z in [15, 16] {
        assert!(point_in_orbit(&params, &x, &d.records[z - 1].rep.all_factors()), "z={z}");
    }
}

#[test]
fn every_group_matches_a_shape_and_dimensions_add_up() {
    for d in all_decompositions(5) {
        let dim = d.params.n + 1 - d.set.len();
        for r in &d.records {
            assert!(r.groups.iter().all(|g| g.row.is_some()), "{} z={}", d.set, r.z);
            assert_eq!(r.groups.iter().map(|g| g.dim).sum::<usize>(), dim);
            let attaching: usize = r.groups.iter().filter(|g| g.class == multisect::handles::classify::GroupClass::A).map(|g| g.dim).sum();
            assert_eq!(attaching, r.h);
            assert!(r.h <= d.set.len());
        }
        assert_eq!(d.records[0].h, 0);
    }
}

/// A closed complex of `cubes` three-cubes: positive facets matched to
/// negative facets by `pairing`, each gluing using a coordinate bijection
/// chosen by `twists`.
fn random_complex(cubes: usize, pairing: Vec<usize>, twists: Vec<usize>) -> DirectedCubeComplex {
    let n = 3;
    let mut gluings = Vec::new();
    for (slot, &target) in pairing.iter().enumerate() {
        let (from, from_axis) = (slot / n, slot % n);
        let (to, to_axis) = (target / n, target % n);
        let others: Vec<usize> = (0..n).filter(|&a| a != to_axis).collect();
        let rest: Vec<usize> = (0..n).filter(|&a| a != from_axis).collect();
        let flip = twists[slot] % 2 == 1;
        let mut perm = vec![0i32; n];
        perm[from_axis] = to_axis as i32 + 1;
        for (idx, &src) in rest.iter().enumerate() {
            let dst = if flip { others[1 - idx] } else { others[idx] };
            perm[src] = dst as i32 + 1;
        }
        gluings.push(Gluing { from, from_sign: Sign::Plus, from_axis: from_axis + 1, to, to_sign: Sign::Minus, to_axis: to_axis + 1, perm });
    }
    DirectedCubeComplex { n, cubes, gluings }
}

fn complexes() -> impl Strategy<Value = DirectedCubeComplex> {
    (1usize..=3).prop_flat_map(|cubes| {
        let slots = 3 * cubes;
        (Just(cubes), Just((0..slots).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(0usize..2, slots))
            .prop_map(|(c, p, t)| random_complex(c, p, t))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_directed_complexes_are_valid_and_lift_consistently(c in complexes()) {
        let v = c.validate();
        prop_assert!(v.ok(), "{:?}", v.violations);
        let manifold = vertex_link_check(&c).unwrap().iter().all(|l| l.is_sphere());
        let alternating = |counts: &[usize]| -> i64 {
            counts.iter().enumerate().map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
        };
        let q = Quotient::new(&c, 1).unwrap();
        if let Ok(cc) = q.chain_complex() {
            prop_assert!(cc.is_complex());
            let ranks: Vec<usize> = homology(&cc).iter().map(|g| g.rank).collect();
            prop_assert_eq!(alternating(&ranks), alternating(&q.cell_counts()));
            if manifold {
                prop_assert_eq!(alternating(&ranks), 0);
            }
        }
        let lift = lift_multisection(&c).unwrap();
        prop_assert!(lift.consistent(), "{:?}", lift.mismatches);
        if manifold {
            prop_assert_eq!(alternating(&lift.cell_counts), 0);
        }
    }

    #[test]
    fn twisted_cubes_are_valid(sigma in Just(vec![1usize, 2, 3, 4, 5]).prop_shuffle()) {
        let c = DirectedCubeComplex::from_permutation(&sigma).unwrap();
        prop_assert!(c.validate().ok());
        let cc = Quotient::new(&c, 1).unwrap().chain_complex();
        if let Ok(cc) = cc {
            prop_assert!(cc.is_complex());
        }
    }
}
