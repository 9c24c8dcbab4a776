mod common;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use common::{from_value, json, load, path, q};
use num_traits::{One, Zero};
use orbring_core::datum::{load_resolution, SkeletonDoc};
use orbring_core::hkr::{self, IsoCandidate, Scalings};
use orbring_core::linalg::{determinant, solve, Solution};
use orbring_core::rational::{format_rational, rat};
use orbring_core::verify::{self, Suite};
use orbring_core::{
    parse_rational, AlgebraElement, FiniteAlgebra, FiniteGroup, InvariantRing, KClass, ProductTable, Rational,
    StringyElement, StringyRing, Theory,
};
use proptest::prelude::*;

fn ring(name: &'static str, theory: Theory) -> &'static StringyRing {
    static RINGS: OnceLock<std::sync::Mutex<BTreeMap<(&'static str, Theory), &'static StringyRing>>> = OnceLock::new();
    let mut m = RINGS.get_or_init(Default::default).lock().unwrap();
    m.entry((name, theory))
        .or_insert_with(|| Box::leak(Box::new(StringyRing::new(load(name), theory).unwrap())))
}

fn small() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn element(r: &StringyRing) -> impl Strategy<Value = StringyElement> + '_ {
    proptest::collection::vec(small(), r.dim()).prop_map(move |c| r.element(c).unwrap())
}

fn p2() -> Arc<FiniteAlgebra> {
    load("p2_z2").sector(&load("p2_z2").untwisted()).unwrap().clone()
}

/// Honest class on P^2: lines with roots a H and integer multiplicities.
fn bundle(alg: Arc<FiniteAlgebra>) -> impl Strategy<Value = KClass> {
    proptest::collection::vec((-3i64..=3, 0i64..=2), 0..4).prop_map(move |lines| {
        let h = alg.index_of("H").unwrap();
        KClass::from_lines(
            &alg,
            lines
                .into_iter()
                .map(|(a, m)| (AlgebraElement::basis(&alg, h).scale(&rat(a, 1)), rat(m, 1))),
        )
        .unwrap()
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_round_trip_through_text(n in -1000i64..1000, d in 1i64..1000) {
        let x = rat(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn permutation_groups_satisfy_the_axioms(gens in proptest::collection::vec(permutation(4), 1..3)) {
        let g = FiniteGroup::from_permutations(&gens).unwrap();
        let els: Vec<_> = g.elements().collect();
        prop_assert_eq!(24 % els.len(), 0);
        for &a in &els {
            prop_assert_eq!(g.mul(a, g.inverse(a)), orbring_core::Element::IDENTITY);
            for &b in &els {
                for &c in &els {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
                // Conjugation is a left action.
                for &x in &els {
                    prop_assert_eq!(g.conjugate(g.mul(a, b), x), g.conjugate(a, g.conjugate(b, x)));
                }
            }
        }
        let classes = g.conjugacy_classes();
        prop_assert_eq!(classes.iter().map(|c| c.len()).sum::<usize>(), els.len());
        for c in &classes {
            let rep = c.representative;
            prop_assert_eq!(c.len() * g.centralizer(rep).len(), els.len());
        }
    }

    #[test]
    fn chern_classes_are_multiplicative(e in bundle(p2()), f in bundle(p2())) {
        let sum = e.add(&f).unwrap();
        prop_assert_eq!(sum.rank(), e.rank() + f.rank());
        prop_assert_eq!(sum.ch(2).unwrap(), &e.ch(2).unwrap() + &f.ch(2).unwrap());
        prop_assert_eq!(sum.todd().unwrap(), e.todd().unwrap().mul(&f.todd().unwrap()).unwrap());
        prop_assert_eq!(sum.total_chern().unwrap(), e.total_chern().unwrap().mul(&f.total_chern().unwrap()).unwrap());
        prop_assert_eq!(sum.c_top().unwrap(), e.c_top().unwrap().mul(&f.c_top().unwrap()).unwrap());
        prop_assert_eq!(sum.euler_k().unwrap(), e.euler_k().unwrap().mul(&f.euler_k().unwrap()).unwrap());
    }

    #[test]
    fn todd_times_k_euler_class_is_top_chern(e in bundle(p2())) {
        prop_assert_eq!(e.todd().unwrap().mul(&e.euler_k().unwrap()).unwrap(), e.c_top().unwrap());
        prop_assert_eq!(e.neg().todd().unwrap().mul(&e.todd().unwrap()).unwrap(), AlgebraElement::one(e.owner()));
    }

    #[test]
    fn stringy_products_are_associative(
        (x, y, z) in (element(ring("p2_z3", Theory::K)), element(ring("p2_z3", Theory::K)), element(ring("p2_z3", Theory::K)))
    ) {
        let r = ring("p2_z3", Theory::K);
        let left = r.mul(&r.mul(&x, &y).unwrap(), &z).unwrap();
        let right = r.mul(&x, &r.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let one = r.basis(r.identity_index());
        prop_assert_eq!(r.mul(&one, &x).unwrap(), x);
    }

    #[test]
    fn stringy_chern_character_is_a_ring_map(
        (x, y) in (element(ring("p2_z2", Theory::K)), element(ring("p2_z2", Theory::K)))
    ) {
        let k = ring("p2_z2", Theory::K);
        let chow = ring("p2_z2", Theory::Chow);
        let lhs = k.chern(&k.mul(&x, &y).unwrap()).unwrap();
        let rhs = chow.mul(&k.chern(&x).unwrap(), &k.chern(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn group_action_respects_products(
        (x, y) in (element(ring("bg_s3", Theory::Chow)), element(ring("bg_s3", Theory::Chow))),
        h in 0usize..6,
    ) {
        let r = ring("bg_s3", Theory::Chow);
        let h = r.datum().group.elements().nth(h).unwrap();
        let lhs = r.act(h, &r.mul(&x, &y).unwrap()).unwrap();
        let rhs = r.mul(&r.act(h, &x).unwrap(), &r.act(h, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projector_is_idempotent_with_invariant_image(x in element(ring("bg_s3", Theory::K))) {
        let r = ring("bg_s3", Theory::K);
        let inv = InvariantRing::new(r).unwrap();
        let p = inv.project(&x.coeffs);
        prop_assert_eq!(inv.project(&p), p.clone());
        prop_assert!(inv.coords(&p).is_some());
    }

    #[test]
    fn dimension_comparison_is_symmetric_and_basis_independent(perm in permutation(24)) {
        let a = kummer_tables().0.clone();
        let b = reorder(&kummer_tables().1, &perm);
        let ab = hkr::compare_graded_dims(&a, &b);
        let ba = hkr::compare_graded_dims(&b, &a);
        prop_assert_eq!(ab.mismatches(), ba.mismatches());
        prop_assert_eq!(ab.swapped(), ba);
        prop_assert_eq!(ab, hkr::compare_graded_dims(&a, &kummer_tables().1));
    }

    #[test]
    fn solver_and_checker_agree(scales in proptest::collection::vec((1i64..=4, 1i64..=3, any::<bool>()), 16)) {
        // Rescale the image of each exceptional generator by t; the square of
        // its scalar must become -1/(2 t^2).
        let (orb, res, map) = kummer_tables();
        let mut map = map.clone();
        let mut expected = BTreeMap::new();
        for (i, (n, d, neg)) in map.unknowns().into_iter().zip(scales) {
            let t = rat(if neg { -n } else { n }, d);
            for x in map.images[i].iter_mut() {
                *x *= &t;
            }
            expected.insert(i, q("-1/2") / (&t * &t));
        }
        match hkr::solve_scalings(orb, res, &map).unwrap() {
            Scalings::Unique(s) => {
                prop_assert_eq!(&s, &expected);
                prop_assert!(hkr::check_iso(orb, res, &map, &s).unwrap().passed());
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn linear_solutions_satisfy_the_system(
        a in proptest::collection::vec(proptest::collection::vec(small(), 3), 1..5),
        x in proptest::collection::vec(small(), 3),
    ) {
        let b: Vec<Rational> = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
        let check = |s: &[Rational]| a.iter().zip(&b).all(|(row, bi)| row.iter().zip(s).map(|(p, q)| p * q).sum::<Rational>() == *bi);
        match solve(&a, &b, 3) {
            Solution::Unique(s) => prop_assert!(check(&s)),
            Solution::Underdetermined { particular, .. } => prop_assert!(check(&particular)),
            Solution::Inconsistent(e) => prop_assert!(false, "consistent system reported inconsistent at {}", e),
        }
    }

    #[test]
    fn determinant_is_multiplicative(
        a in proptest::collection::vec(proptest::collection::vec(small(), 3), 3),
        b in proptest::collection::vec(proptest::collection::vec(small(), 3), 3),
    ) {
        let ab: Vec<Vec<Rational>> = (0..3)
            .map(|i| (0..3).map(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
            .collect();
        prop_assert_eq!(determinant(ab), determinant(a) * determinant(b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn single_perturbations_of_the_a2_datum_are_detected(site in 0usize..1000, delta in prop_oneof![-3i64..0, 1i64..=3]) {
        let sites = a2_sites();
        let site = &sites[site % sites.len()];
        let mut v = json("c2_z3");
        let leaf = v.pointer_mut(site).unwrap();
        let old = parse_rational(leaf.as_str().unwrap()).unwrap();
        *leaf = serde_json::Value::String(format_rational(&(old + rat(delta, 1))));
        let detected = match from_value(&v) {
            Err(_) => true,
            Ok(d) => !verify::all_passed(&verify::run(&Arc::new(d), &Suite::ALL, None)),
        };
        prop_assert!(detected, "undetected perturbation at {}", site);
    }
}

fn kummer_tables() -> &'static (ProductTable, ProductTable, IsoCandidate) {
    static T: OnceLock<(ProductTable, ProductTable, IsoCandidate)> = OnceLock::new();
    T.get_or_init(|| {
        let r = ring("kummer", Theory::Chow);
        let orb = InvariantRing::new(r).unwrap().table().clone();
        let res = ProductTable::from_algebra(&load_resolution(path("kummer_resolution")).unwrap());
        let doc: SkeletonDoc =
            serde_json::from_str(&std::fs::read_to_string(path("kummer_skeleton")).unwrap()).unwrap();
        let map = IsoCandidate::from_skeleton(&doc, &orb, &res).unwrap();
        (orb, res, map)
    })
}

fn reorder(t: &ProductTable, perm: &[usize]) -> ProductTable {
    let inv: Vec<usize> = {
        let mut v = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            v[old] = new;
        }
        v
    };
    ProductTable {
        labels: perm.iter().map(|&i| t.labels[i].clone()).collect(),
        degrees: perm.iter().map(|&i| t.degrees[i].clone()).collect(),
        odd: perm.iter().map(|&i| t.odd[i]).collect(),
        constants: perm
            .iter()
            .map(|&i| {
                perm.iter()
                    .map(|&j| {
                        let mut v = vec![Rational::zero(); t.dim()];
                        for (k, c) in t.product(i, j).iter().enumerate() {
                            v[inv[k]] = c.clone();
                        }
                        v
                    })
                    .collect()
            })
            .collect(),
    }
}

/// JSON pointers of the structure constants, eigen multiplicities and matrix
/// entries of the A2 datum.
fn a2_sites() -> &'static [String] {
    static S: OnceLock<Vec<String>> = OnceLock::new();
    S.get_or_init(|| {
        fn walk(v: &serde_json::Value, at: &mut Vec<String>, keys: &mut Vec<String>, out: &mut Vec<String>) {
            match v {
                serde_json::Value::Object(m) => {
                    for (k, x) in m {
                        at.push(k.clone());
                        keys.push(k.clone());
                        walk(x, at, keys, out);
                        keys.pop();
                        at.pop();
                    }
                }
                serde_json::Value::Array(a) => {
                    for (i, x) in a.iter().enumerate() {
                        at.push(i.to_string());
                        walk(x, at, keys, out);
                        at.pop();
                    }
                }
                serde_json::Value::String(_) => {
                    let site = match keys.last().map(String::as_str) {
                        Some("pullback" | "pushforward") => true,
                        Some("mult") => keys.iter().any(|k| k == "eigen"),
                        Some("products") => at.last().map(String::as_str) == Some("3"),
                        _ => false,
                    };
                    if site {
                        out.push(format!("/{}", at.join("/")));
                    }
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(&json("c2_z3"), &mut Vec::new(), &mut Vec::new(), &mut out);
        out
    })
}

#[test]
fn the_a2_datum_has_enough_injection_sites() {
    assert!(a2_sites().len() >= 50);
    assert!(Rational::one() > Rational::zero());
}
