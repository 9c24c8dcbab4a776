mod common;

use common::{load, path, q};
use num_traits::Zero;
use orbring_core::datum::{load_resolution, SkeletonDoc};
use orbring_core::hkr::{self, IsoCandidate, Scalings, Verdict};
use orbring_core::{Error, InvariantRing, ProductTable, StringyRing, Theory};

fn orbifold(name: &str) -> ProductTable {
    let r = StringyRing::new(load(name), Theory::Chow).unwrap();
    InvariantRing::new(&r).unwrap().table().clone()
}

fn k3() -> ProductTable {
    ProductTable::from_algebra(&load_resolution(path("kummer_resolution")).unwrap())
}

fn skeleton() -> SkeletonDoc {
    serde_json::from_str(&std::fs::read_to_string(path("kummer_skeleton")).unwrap()).unwrap()
}

/// The table restricted to all basis elements but one.
fn drop_basis(t: &ProductTable, gone: usize) -> ProductTable {
    let keep: Vec<usize> = (0..t.dim()).filter(|&i| i != gone).collect();
    ProductTable {
        labels: keep.iter().map(|&i| t.labels[i].clone()).collect(),
        degrees: keep.iter().map(|&i| t.degrees[i].clone()).collect(),
        odd: keep.iter().map(|&i| t.odd[i]).collect(),
        constants: keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| keep.iter().map(|&k| t.product(i, j)[k].clone()).collect())
                    .collect()
            })
            .collect(),
    }
}

#[test]
fn kummer_is_isomorphic_to_its_resolution() {
    let orb = orbifold("kummer");
    let res = k3();
    let map = IsoCandidate::from_skeleton(&skeleton(), &orb, &res).unwrap();
    let report = hkr::compare(&orb, &res, Some(&map)).unwrap();
    assert_eq!(report.verdict.to_string(), "iso with s² = -1/2");
    assert_eq!(report.pairs_checked, 24 * 24);
    assert!(report.dims.is_match());
}

#[test]
fn automatic_matching_reproduces_the_shipped_skeleton() {
    let orb = orbifold("kummer");
    let res = k3();
    assert_eq!(
        IsoCandidate::auto(&orb, &res).unwrap(),
        IsoCandidate::from_skeleton(&skeleton(), &orb, &res).unwrap()
    );
}

#[test]
fn wrong_scalars_fail_on_the_square_of_a_generator() {
    let orb = orbifold("kummer");
    let res = k3();
    let map = IsoCandidate::from_skeleton(&skeleton(), &orb, &res).unwrap();
    let ones = map.unknowns().into_iter().map(|i| (i, q("1"))).collect();
    let report = hkr::check_iso(&orb, &res, &map, &ones).unwrap();
    let ((i, j), _) = report.witness.unwrap();
    assert_eq!(i, j);
    assert!(map.scalable[i]);
    assert_eq!(orb.labels[i], "g#0:1");
}

#[test]
fn dropping_a_twisted_sector_is_a_degree_one_mismatch() {
    let orb = orbifold("kummer");
    let orb = drop_basis(&orb, orb.index_of("g#15:1").unwrap());
    let report = hkr::compare(&orb, &k3(), None).unwrap();
    assert_eq!(report.verdict.to_string(), "dimension mismatch at degree 1");
}

#[test]
fn bg_against_k3_is_a_plain_dimension_table() {
    let report = hkr::compare(&orbifold("bg_z2"), &k3(), None).unwrap();
    assert!(matches!(report.verdict, Verdict::DimensionMismatch { .. }));
    let text = report.dims.to_string();
    assert!(text.starts_with("degree"), "{text}");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn missing_map_gives_dims_only() {
    let report = hkr::compare(&orbifold("kummer"), &k3(), None).unwrap();
    assert_eq!(report.verdict, Verdict::DimsOnly);
}

#[test]
fn self_comparison() {
    let orb = orbifold("p2_z3");
    let id = IsoCandidate::identity(&orb);
    assert_eq!(
        hkr::solve_scalings(&orb, &orb, &id).unwrap(),
        Scalings::Unique(Default::default())
    );
    assert_eq!(hkr::compare(&orb, &orb, Some(&id)).unwrap().verdict.to_string(), "iso");

    let kummer = orbifold("kummer");
    let auto = IsoCandidate::auto(&kummer, &kummer).unwrap();
    assert_eq!(
        hkr::compare(&kummer, &kummer, Some(&auto)).unwrap().verdict.to_string(),
        "iso with s² = 1"
    );
}

#[test]
fn incompatible_pairing_is_inconsistent() {
    let orb = orbifold("kummer");
    let res = k3();
    let mut map = IsoCandidate::from_skeleton(&skeleton(), &orb, &res).unwrap();
    // Send the second exceptional generator onto the first curve as well.
    let b0 = orb.index_of("g#0:1").unwrap();
    let b1 = orb.index_of("g#1:1").unwrap();
    map.images[b1] = map.images[b0].clone();
    match hkr::solve_scalings(&orb, &res, &map).unwrap() {
        Scalings::Inconsistent(eq) => {
            let text = eq.describe(&orb, &res);
            assert!(text.contains("g#0:1") && text.contains("g#1:1"), "{text}");
        }
        other => panic!("expected inconsistency, got {other:?}"),
    }
    assert!(matches!(
        hkr::compare(&orb, &res, Some(&map)).unwrap().verdict,
        Verdict::Inconsistent { .. }
    ));
}

#[test]
fn unconstrained_scalars_are_reported_as_underdetermined() {
    // On the A1 singularity the twisted class squares to zero on both sides.
    let orb = orbifold("c2_z2");
    let mut map = IsoCandidate::identity(&orb);
    map.scalable[orb.index_of("g#0:1").unwrap()] = true;
    match hkr::solve_scalings(&orb, &orb, &map).unwrap() {
        Scalings::Underdetermined { free, .. } => assert_eq!(free, vec![orb.index_of("g#0:1").unwrap()]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn maps_must_preserve_degree() {
    let orb = orbifold("kummer");
    let res = k3();
    let mut map = IsoCandidate::from_skeleton(&skeleton(), &orb, &res).unwrap();
    let b0 = orb.index_of("g#0:1").unwrap();
    map.images[b0] = res.basis(res.index_of("pt").unwrap());
    assert!(matches!(hkr::solve_scalings(&orb, &res, &map), Err(Error::Degree(_))));
}

#[test]
fn squares_must_all_be_given() {
    let orb = orbifold("kummer");
    let res = k3();
    let map = IsoCandidate::from_skeleton(&skeleton(), &orb, &res).unwrap();
    let partial = [(map.unknowns()[0], q("-1/2"))].into_iter().collect();
    assert!(hkr::check_iso(&orb, &res, &map, &partial).is_err());
}

#[test]
fn every_equation_of_the_kummer_system_is_satisfied() {
    let orb = orbifold("kummer");
    let res = k3();
    let map = IsoCandidate::from_skeleton(&skeleton(), &orb, &res).unwrap();
    let squares = map.unknowns().into_iter().map(|i| (i, q("-1/2"))).collect();
    let eqs = hkr::all_equations(&orb, &res, &map);
    assert!(!eqs.is_empty());
    assert!(eqs.iter().all(|e| e.evaluate(&squares).unwrap().is_zero()));
}
