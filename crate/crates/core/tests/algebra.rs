mod common;

use common::{closure, WordPoly};
use proptest::prelude::*;
use stfix::algebra::{
    kernel_word_image, kernel_word_power, pair_group, single_group, steinberg_generators, truncation_map,
    verify_steinberg_relations, Pair, Ring, TruncatedPoly,
};

fn build(ring: Ring, terms: &[(Vec<usize>, i64)]) -> TruncatedPoly {
    terms.iter().fold(ring.zero(), |acc, (w, c)| {
        acc.add(&ring.monomial(w, *c).unwrap()).unwrap()
    })
}

fn terms_strategy(vars: usize, max_len: usize) -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..vars, 0..=max_len), -20i64..20), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_match_word_oracle(a in terms_strategy(2, 3), b in terms_strategy(2, 3)) {
        let ring = Ring::new(5, 2, 4).unwrap();
        let (pa, pb) = (build(ring, &a), build(ring, &b));
        let lib = WordPoly::from_lib(&pa.mul(&pb).unwrap());
        let oracle = WordPoly::from_lib(&pa).mul(&WordPoly::from_lib(&pb));
        prop_assert_eq!(lib, oracle);
        let sum = WordPoly::from_lib(&pa.add(&pb).unwrap());
        prop_assert_eq!(sum, WordPoly::from_lib(&pa).add(&WordPoly::from_lib(&pb)));
    }

    #[test]
    fn ring_axioms(a in terms_strategy(3, 2), b in terms_strategy(3, 2), c in terms_strategy(3, 2)) {
        let ring = Ring::new(3, 3, 3).unwrap();
        let (a, b, c) = (build(ring, &a), build(ring, &b), build(ring, &c));
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&ring.one()).unwrap(), a.clone());
    }

    #[test]
    fn truncation_drops_only_long_words(a in terms_strategy(2, 4)) {
        let ring = Ring::new(7, 2, 4).unwrap();
        let q = build(ring, &a);
        let cut = WordPoly::from_lib(&q.truncate(2).unwrap());
        let mut expect = WordPoly::from_lib(&q);
        expect.terms.retain(|w, _| w.len() <= 2);
        prop_assert_eq!(cut.terms, expect.terms);
    }
}

#[test]
fn truncation_kills_long_products() {
    let ring = Ring::new(5, 2, 2).unwrap();
    let t1t2 = ring.monomial(&[0, 1], 1).unwrap();
    let t1 = ring.var(1).unwrap();
    assert!(t1t2.mul(&t1).unwrap().is_zero());
}

#[test]
fn heisenberg_pairs_have_order_p_cubed() {
    for p in [3u32, 5] {
        let gens = steinberg_generators(3, 1, p, 3).unwrap();
        let pg = pair_group(&gens, Pair::OneTwo, 20_000).unwrap();
        assert_eq!(pg.table.order(), (p * p * p) as usize);
        assert_eq!(pg.first.len(), p as usize);
        assert_eq!(pg.second.len(), p as usize);
        // the two generating subgroups generate the whole table
        let mut both = pg.first.clone();
        both.extend_from_slice(&pg.second);
        assert_eq!(closure(&pg.table, &both).len(), pg.table.order());
    }
}

#[test]
fn third_subgroup_order_is_measured() {
    // <G_3> is elementary abelian of rank (n-2)(k+1)
    for (n, k, p) in [(3usize, 1usize, 3u32), (3, 2, 3), (4, 1, 3)] {
        let gens = steinberg_generators(n, k, p, n).unwrap();
        let g3 = single_group(&gens, 2, 20_000).unwrap();
        assert_eq!(g3.order(), (p as usize).pow(((n - 2) * (k + 1)) as u32));
    }
}

#[test]
fn closures_agree_across_truncation_degrees() {
    let coarse_gens = steinberg_generators(3, 1, 5, 3).unwrap();
    let fine_gens = steinberg_generators(3, 1, 5, 4).unwrap();
    for pair in Pair::ALL {
        let coarse = pair_group(&coarse_gens, pair, 20_000).unwrap();
        let fine = pair_group(&fine_gens, pair, 20_000).unwrap();
        assert_eq!(coarse.table.order(), fine.table.order(), "{pair}");
        let map = truncation_map(&coarse.table, &fine.table).unwrap();
        // fine id -> coarse id must be a homomorphism
        for a in (0..fine.table.order()).step_by(7) {
            for b in (0..fine.table.order()).step_by(11) {
                assert_eq!(map[fine.table.mul(a, b)], coarse.table.mul(map[a], map[b]));
            }
        }
    }
}

#[test]
fn kernel_word_has_order_two() {
    for n in [3, 4, 5] {
        assert!(kernel_word_image(n).unwrap().is_identity());
        assert!(!kernel_word_power(n, 2).unwrap().is_identity());
    }
}

#[test]
fn relations_hold_on_degree_one_pool() {
    let ring = Ring::new(3, 1, 3).unwrap();
    let pool = ring.degree_one_pool();
    let report = verify_steinberg_relations(3, 1, 3, 3, &pool).unwrap();
    assert_eq!(report.total_violations(), 0);
    assert!(report.families.iter().all(|f| f.checked > 0));
}
