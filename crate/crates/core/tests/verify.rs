mod common;

use common::{from_value, json, load, FILES};
use orbring_core::verify::{self, CheckReport, Suite};
use orbring_core::{SectorKey, StringyRing, Theory};
use serde_json::json;
use std::sync::Arc;

fn failures(reports: &[CheckReport]) -> Vec<&CheckReport> {
    reports.iter().filter(|r| !r.passed).collect()
}

#[test]
fn every_suite_passes_on_the_corpus() {
    for name in FILES {
        let reports = verify::run(&load(name), &Suite::ALL, None);
        assert!(verify::all_passed(&reports), "{name}: {:?}", failures(&reports));
        let suites: std::collections::BTreeSet<Suite> = reports.iter().map(|r| r.suite).collect();
        assert_eq!(suites.len(), Suite::ALL.len(), "{name}");
    }
}

#[test]
fn corrupted_angle_fails_eq6_at_that_element() {
    let mut v = json("c2_z3");
    for e in v["eigen"].as_array_mut().unwrap() {
        if e["sector"]["key"][0] == "g" {
            e["entries"][0]["alpha"] = json!("1/4");
        }
    }
    let d = from_value(&v).unwrap();
    let bad = verify::check_eq6(&d);
    let bad = failures(&bad);
    assert!(!bad.is_empty());
    assert!(bad.iter().any(|r| r.instance == "(g)#0"), "{bad:?}");
    assert!(bad[0].lhs.is_some() && bad[0].rhs.is_some());
}

#[test]
fn obstruction_identity_per_triple() {
    for name in ["bg_s3", "c2_z2", "c2_z3"] {
        let d = load(name);
        let g = d.group.elements().last().unwrap();
        let key = SectorKey::new(vec![g, g, g], 0);
        let reports = verify::check_obstruction_identity(&d, &key);
        assert!(verify::all_passed(&reports), "{name}");
        assert_eq!(reports.len(), 3);
    }
    // On A2 both routes equal 3 Im_g - N at (g,g,g), since g^3 = e: rank 1.
    let d = load("c2_z3");
    let g = d.group.element_by_name("g").unwrap();
    let [l, r, c] = verify::obstruction_sides(&d, &SectorKey::new(vec![g, g, g], 0)).unwrap();
    assert_eq!(l, c);
    assert_eq!(r, c);
    assert_eq!(c.rank(), common::q("1"));
}

#[test]
fn perturbed_obstruction_breaks_associativity_with_a_witness() {
    let mut v = json("p2_z3");
    for n in v["normal"].as_array_mut().unwrap() {
        if n["sector"]["key"] == json!(["g", "g2"]) && n["sector"]["component"] == 0 {
            n["lines"][0]["mult"] = json!("0");
        }
    }
    let d = Arc::new(from_value(&v).unwrap());
    let r = StringyRing::new(d, Theory::Chow).unwrap();
    let reports = verify::check_associativity(&r);
    let witness = failures(&reports)
        .into_iter()
        .find(|x| x.check == "chow associativity")
        .expect("associativity fails");
    assert_eq!(witness.instance, "g#0:1, g#0:1, g#0:1");
    assert_ne!(witness.lhs, witness.rhs);
}

#[test]
fn s3_twisted_commutativity_instance() {
    let r = StringyRing::new(load("bg_s3"), Theory::K).unwrap();
    let t = r.table();
    let i = |l: &str| t.index_of(l).unwrap();
    // (23)^*(x_(12)) = x_(13)
    assert_eq!(
        t.product(i("(12)#0:1"), i("(23)#0:1")),
        t.product(i("(23)#0:1"), i("(13)#0:1"))
    );
    assert_ne!(
        t.product(i("(12)#0:1"), i("(23)#0:1")),
        t.product(i("(23)#0:1"), i("(12)#0:1"))
    );
    assert!(verify::all_passed(&verify::check_commutativity(&r)));
}

#[test]
fn odd_classes_anticommute() {
    for theory in Theory::ALL {
        let r = StringyRing::new(load("sign_z2"), theory).unwrap();
        let t = r.table();
        let a = t.index_of("e#0:a").unwrap();
        let b = t.index_of("e#0:b").unwrap();
        let ab: Vec<_> = t.product(a, b).to_vec();
        let ba: Vec<_> = t.product(b, a).iter().map(|x| -x).collect();
        assert_eq!(ab, ba);
        assert!(ab.iter().any(|x| !num_traits::Zero::is_zero(x)));
        assert!(verify::all_passed(&verify::check_commutativity(&r)));
    }
}

#[test]
fn rank_and_grading() {
    let reports = verify::check_rank_and_grading(&load("kummer"));
    assert!(verify::all_passed(&reports));
    assert!(reports.iter().all(|r| r.suite == Suite::Rank));
}

#[test]
fn suites_parse_by_name() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("everything".parse::<Suite>().is_err());
}

#[test]
fn semisimplicity_distinguishes_group_algebras_from_nilpotents() {
    let r = StringyRing::new(load("bg_z2"), Theory::Chow).unwrap();
    assert!(verify::is_commutative_semisimple(r.table()));
    // H*(P^2) has nilpotents, so its trace form is degenerate.
    let r = StringyRing::new(load("p2_z2"), Theory::Chow).unwrap();
    let inv = orbring_core::InvariantRing::new(&r).unwrap();
    assert!(!verify::is_commutative_semisimple(inv.table()));
}

#[test]
fn reports_are_deterministic() {
    let d = load("p2_z3");
    assert_eq!(verify::run(&d, &Suite::ALL, None), verify::run(&d, &Suite::ALL, None));
}

#[test]
fn failures_are_capped_with_a_summary_line() {
    let mut v = json("kummer");
    // Double every pushforward along the untwisted product map.
    let doubles = v["correspondences"]["double"].as_array_mut().unwrap();
    for dd in doubles.iter_mut() {
        if dd["sector"]["key"] == json!(["e", "e"]) {
            let push = dd["mu"]["pushforward"].as_array_mut().unwrap();
            for (i, row) in push.iter_mut().enumerate() {
                row[i] = json!("2");
            }
        }
    }
    let d = Arc::new(from_value(&v).unwrap());
    let reports = verify::run(&d, &[Suite::Assoc], Some(Theory::Chow));
    let assoc: Vec<_> = reports.iter().filter(|r| r.check == "chow associativity").collect();
    assert!(assoc.len() <= 9);
    let last = assoc.last().unwrap();
    assert!(!last.passed && last.instance.ends_with("further instances"), "{last}");
}
