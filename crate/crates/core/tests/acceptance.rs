use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;
use orbring_core::datum::{load_resolution, SkeletonDoc};
use orbring_core::hkr::{self, IsoCandidate, Scalings};
use orbring_core::stringy::obstruction;
use orbring_core::verify::{self, Suite};
use orbring_core::{
    parse_rational, InvariantRing, OrbifoldDatum, ProductTable, Rational, SectorKey, StringyDegree, StringyRing, Theory,
};

const FILES: [&str; 8] = [
    "bg_z2", "bg_s3", "c2_z2", "c2_z3", "p2_z2", "p2_z3", "kummer", "sign_z2",
];

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.json"))
}

fn load(name: &str) -> Result<Arc<OrbifoldDatum>, String> {
    OrbifoldDatum::load(path(name))
        .map(Arc::new)
        .map_err(|e| format!("{name}: {e}"))
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Runs suites on every corpus file; returns the number of checked lines.
fn suites_everywhere(suites: &[Suite], limit: Duration) -> Outcome {
    let start = Instant::now();
    let mut lines = 0;
    let mut instances = 0;
    for name in FILES {
        let d = load(name)?;
        let reports = verify::run(&d, suites, None);
        if let Some(bad) = reports.iter().find(|r| !r.passed) {
            return Err(format!("{name}: {bad}"));
        }
        lines += reports.len();
        instances += reports.iter().map(|r| r.count).sum::<usize>();
    }
    let elapsed = start.elapsed();
    if elapsed > limit {
        return Err(format!("took {elapsed:?}, limit {limit:?}"));
    }
    Ok(format!(
        "{lines} checks over {instances} instances on {} files in {:.2?}",
        FILES.len(),
        elapsed
    ))
}

fn identity_suite() -> Outcome {
    suites_everywhere(&[Suite::Eq6, Suite::Eq1], Duration::from_secs(5))
}

fn associativity() -> Outcome {
    suites_everywhere(&[Suite::Assoc], Duration::from_secs(30))
}

fn commutativity() -> Outcome {
    suites_everywhere(&[Suite::Comm], Duration::from_secs(30))
}

fn chern() -> Outcome {
    let summary = suites_everywhere(&[Suite::Chern], Duration::from_secs(30))?;
    let d = load("c2_z3")?;
    let g = d.group.element_by_name("g").unwrap();
    let rank = obstruction(&d, &SectorKey::new(vec![g, g], 0))
        .map_err(|e| e.to_string())?
        .rank();
    if rank != q("1") {
        return Err(format!("c2_z3 obstruction rank {rank}, expected 1"));
    }
    Ok(format!("{summary}; c2_z3 rank R(g,g) = 1"))
}

/// The group algebra of the group itself, built straight from the
/// multiplication table.
fn group_algebra_oracle(d: &OrbifoldDatum, table: &ProductTable) -> Vec<Vec<Vec<Rational>>> {
    let n = d.group.order();
    let index = |g| {
        table
            .index_of(&format!("{}#0:1", d.group.name(g)))
            .expect("one class per group element")
    };
    let mut out = vec![vec![vec![Rational::zero(); n]; n]; n];
    for g in d.group.elements() {
        for h in d.group.elements() {
            out[index(g)][index(h)][index(d.group.mul(g, h))] = q("1");
        }
    }
    out
}

fn bg_sanity() -> Outcome {
    let d = load("bg_s3")?;
    let ring = StringyRing::new(d.clone(), Theory::K).map_err(|e| e.to_string())?;
    if ring.table().constants != group_algebra_oracle(&d, ring.table()) {
        return Err("K table differs from the group algebra".into());
    }
    let inv = InvariantRing::new(&ring).map_err(|e| e.to_string())?;
    let classes = d.group.conjugacy_classes().len();
    if inv.dim() != 3 || classes != 3 {
        return Err(format!(
            "invariant dimension {}, {classes} conjugacy classes",
            inv.dim()
        ));
    }
    let assoc = verify::check_associativity(&ring);
    if !verify::all_passed(&assoc) {
        return Err("associativity fails".into());
    }
    if !verify::is_commutative_semisimple(inv.table()) {
        return Err("invariant subring is not commutative semisimple".into());
    }
    Ok("K table = group algebra of S3; invariant dimension 3, commutative, trace form nondegenerate".into())
}

fn ranks() -> Outcome {
    for (name, expected) in [("c2_z2", "0"), ("c2_z3", "1")] {
        let d = load(name)?;
        let g = d.group.element_by_name("g").unwrap();
        let r = obstruction(&d, &SectorKey::new(vec![g, g], 0))
            .map_err(|e| e.to_string())?
            .rank();
        if r != q(expected) {
            return Err(format!("{name}: rank R(g,g) = {r}, expected {expected}"));
        }
    }
    let summary = suites_everywhere(&[Suite::Rank], Duration::from_secs(30))?;
    Ok(format!("rank R(g,g) = 0 on c2_z2 and 1 on c2_z3; {summary}"))
}

fn kummer_resolution() -> Outcome {
    let d = load("kummer")?;
    let ring = StringyRing::new(d, Theory::Chow).map_err(|e| e.to_string())?;
    let inv = InvariantRing::new(&ring).map_err(|e| e.to_string())?;
    let orb = inv.table();
    let alg = load_resolution(path("kummer_resolution")).map_err(|e| e.to_string())?;
    let res = ProductTable::from_algebra(&alg);

    let dims = hkr::compare_graded_dims(orb, &res);
    let expected: BTreeMap<StringyDegree, usize> = [("0", 1), ("1", 22), ("2", 1)]
        .into_iter()
        .map(|(p, n)| (StringyDegree::new(q(p), 0), n))
        .collect();
    if dims.left != expected || dims.right != expected {
        return Err(format!("graded dimensions\n{dims}"));
    }

    let text = std::fs::read_to_string(path("kummer_skeleton")).map_err(|e| e.to_string())?;
    let skeleton: SkeletonDoc = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let map = IsoCandidate::from_skeleton(&skeleton, orb, &res).map_err(|e| e.to_string())?;
    let squares = match hkr::solve_scalings(orb, &res, &map).map_err(|e| e.to_string())? {
        Scalings::Unique(s) => s,
        other => return Err(format!("scalings not unique: {other:?}")),
    };
    // Hand solution of s^2 (E.E) = b*b on the point class, per generator.
    let pt_orb = orb.index_of("e#0:a1a2a3a4").unwrap();
    let pt_res = res.index_of("pt").unwrap();
    let mut generators = 0;
    for (&i, s2) in &squares {
        let e = map.images[i].iter().position(|x| !x.is_zero()).unwrap();
        let oracle = &orb.product(i, i)[pt_orb] / &res.product(e, e)[pt_res];
        if *s2 != oracle || *s2 != q("-1/2") {
            return Err(format!("{}: s^2 = {s2}, hand value {oracle}", orb.labels[i]));
        }
        generators += 1;
    }
    if generators != 16 {
        return Err(format!("{generators} scalable generators"));
    }
    let iso = hkr::check_iso(orb, &res, &map, &squares).map_err(|e| e.to_string())?;
    if !iso.passed() {
        return Err(format!("iso check: {:?}", iso.witness));
    }
    Ok(format!(
        "dims (1, 22, 1) match; s^2 = -1/2 for all 16 generators; iso holds on {} pairs",
        iso.pairs_checked
    ))
}

/// Leaves of the document that are structure constants, eigen
/// multiplicities or matrix entries.
fn injection_sites(v: &serde_json::Value, at: &mut Vec<String>, keys: &mut Vec<String>, out: &mut Vec<String>) {
    use serde_json::Value;
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                at.push(k.clone());
                keys.push(k.clone());
                injection_sites(x, at, keys, out);
                keys.pop();
                at.pop();
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                at.push(i.to_string());
                injection_sites(x, at, keys, out);
                at.pop();
            }
        }
        _ => {
            let last = keys.last().map(String::as_str);
            let site = match last {
                Some("pullback" | "pushforward") => true,
                Some("mult") => keys.iter().any(|k| k == "eigen"),
                Some("products") => at.last().map(String::as_str) == Some("3"),
                _ => false,
            };
            if site {
                out.push(format!("/{}", at.join("/")));
            }
        }
    }
}

fn bump(v: &mut serde_json::Value) {
    use serde_json::Value;
    *v = match &*v {
        Value::String(s) => Value::String(orbring_core::rational::format_rational(&(q(s) + q("1")))),
        Value::Number(n) => Value::from(n.as_i64().unwrap() + 1),
        other => panic!("not a rational leaf: {other}"),
    };
}

fn fault_injection() -> Outcome {
    let text = std::fs::read_to_string(path("c2_z3")).map_err(|e| e.to_string())?;
    let base: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let mut sites = Vec::new();
    injection_sites(&base, &mut Vec::new(), &mut Vec::new(), &mut sites);
    if sites.len() < 50 {
        return Err(format!("only {} sites", sites.len()));
    }
    let mut missed = Vec::new();
    for site in &sites {
        let mut doc = base.clone();
        bump(doc.pointer_mut(site).unwrap());
        let detected = match OrbifoldDatum::from_json(&doc.to_string()) {
            Err(_) => true,
            Ok(d) => !verify::all_passed(&verify::run(&Arc::new(d), &Suite::ALL, None)),
        };
        if !detected {
            missed.push(site.clone());
        }
    }
    if missed.is_empty() {
        Ok(format!("all {} single-entry perturbations detected", sites.len()))
    } else {
        Err(format!(
            "{} of {} undetected: {}",
            missed.len(),
            sites.len(),
            missed.join(", ")
        ))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("identity suite", identity_suite),
        ("associativity", associativity),
        ("twisted commutativity", commutativity),
        ("stringy Chern character", chern),
        ("BG sanity", bg_sanity),
        ("obstruction ranks and grading", ranks),
        ("Kummer resolution comparison", kummer_resolution),
        ("fault injection", fault_injection),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
