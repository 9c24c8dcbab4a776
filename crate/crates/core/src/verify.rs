//! Check suites: each identity is re-executed on a datum as an exact finite
//! computation and reported per instance.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{AlgebraElement, LinearMap};
use crate::datum::{OrbifoldDatum, SectorKey};
use crate::error::{Error, Result};
use crate::kclass::KClass;
use crate::linalg::determinant;
use crate::rational::{is_nonnegative_integer, Rational};
use crate::stringy::{
    age, chern_twist, im_class, obstruction, product_normal, InvariantRing, ProductTable, StringyRing, Theory,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Validate,
    Eq6,
    Eq1,
    Assoc,
    Comm,
    Chern,
    Rank,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Validate,
        Suite::Eq6,
        Suite::Eq1,
        Suite::Assoc,
        Suite::Comm,
        Suite::Chern,
        Suite::Rank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Validate => "validate",
            Suite::Eq6 => "eq6",
            Suite::Eq1 => "eq1",
            Suite::Assoc => "assoc",
            Suite::Comm => "comm",
            Suite::Chern => "chern",
            Suite::Rank => "rank",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::MissingData(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one check on one instance (or on a whole family of instances
/// when it passes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub check: String,
    pub instance: String,
    pub passed: bool,
    /// Instances covered by this line.
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} {} [{}]", self.suite, self.check, self.instance)?;
        if self.count > 1 {
            write!(f, " x{}", self.count)?;
        }
        match (&self.lhs, &self.rhs) {
            (Some(l), Some(r)) => write!(f, ": {l} != {r}"),
            (Some(l), None) => write!(f, ": {l}"),
            _ => Ok(()),
        }
    }
}

/// Witnesses kept per failing check before the rest are only counted.
const MAX_WITNESSES: usize = 8;

/// Collects instance results for one named check.
struct Tally {
    suite: Suite,
    check: String,
    family: String,
    passed: usize,
    failed: usize,
    out: Vec<CheckReport>,
}

impl Tally {
    fn new(suite: Suite, check: &str, family: impl Into<String>) -> Self {
        Tally {
            suite,
            check: check.into(),
            family: family.into(),
            passed: 0,
            failed: 0,
            out: Vec::new(),
        }
    }

    fn pass(&mut self) {
        self.passed += 1;
    }

    fn fail(&mut self, instance: impl Into<String>, lhs: String, rhs: Option<String>) {
        self.failed += 1;
        if self.failed <= MAX_WITNESSES {
            self.out.push(CheckReport {
                suite: self.suite,
                check: self.check.clone(),
                instance: instance.into(),
                passed: false,
                count: 1,
                lhs: Some(lhs),
                rhs,
            });
        }
    }

    fn compare<T: PartialEq + fmt::Display>(&mut self, instance: impl FnOnce() -> String, lhs: &T, rhs: &T) {
        if lhs == rhs {
            self.pass();
        } else {
            self.fail(instance(), lhs.to_string(), Some(rhs.to_string()));
        }
    }

    fn error(&mut self, instance: impl Into<String>, e: &Error) {
        self.fail(instance, format!("error: {e}"), None);
    }

    fn finish(mut self, reports: &mut Vec<CheckReport>) {
        if self.failed > MAX_WITNESSES {
            self.out.push(CheckReport {
                suite: self.suite,
                check: self.check.clone(),
                instance: format!("{} further instances", self.failed - MAX_WITNESSES),
                passed: false,
                count: self.failed - MAX_WITNESSES,
                lhs: None,
                rhs: None,
            });
        }
        if self.failed == 0 {
            self.out.push(CheckReport {
                suite: self.suite,
                check: self.check,
                instance: self.family,
                passed: true,
                count: self.passed,
                lhs: None,
                rhs: None,
            });
        }
        reports.append(&mut self.out);
    }
}

/// Vector over a product table's basis, for readable witnesses.
struct Vector<'a>(&'a ProductTable, Vec<Rational>);

impl PartialEq for Vector<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.1 == other.1
    }
}

impl fmt::Display for Vector<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.format_vector(&self.1))
    }
}

/// Runs the requested suites. `theory` restricts the theory-dependent
/// suites (associativity and commutativity) to one theory.
pub fn run(d: &Arc<OrbifoldDatum>, suites: &[Suite], theory: Option<Theory>) -> Vec<CheckReport> {
    let theories: Vec<Theory> = match theory {
        Some(t) => vec![t],
        None => Theory::ALL.to_vec(),
    };
    let mut rings: HashMap<Theory, std::result::Result<StringyRing, String>> = HashMap::new();
    let mut ring = |t: Theory| -> std::result::Result<StringyRing, String> {
        rings
            .entry(t)
            .or_insert_with(|| StringyRing::new(d.clone(), t).map_err(|e| e.to_string()))
            .clone()
    };
    let mut out = Vec::new();
    for &suite in suites {
        match suite {
            Suite::Validate => out.extend(check_validate(d)),
            Suite::Eq6 => out.extend(check_eq6(d)),
            Suite::Eq1 => out.extend(check_eq1(d)),
            Suite::Assoc => {
                for &t in &theories {
                    match ring(t) {
                        Ok(r) => out.extend(check_associativity(&r)),
                        Err(e) => out.push(ring_error(suite, t, e)),
                    }
                }
            }
            Suite::Comm => {
                for &t in &theories {
                    match ring(t) {
                        Ok(r) => out.extend(check_commutativity(&r)),
                        Err(e) => out.push(ring_error(suite, t, e)),
                    }
                }
            }
            Suite::Chern => match (ring(Theory::K), ring(Theory::Chow)) {
                (Ok(k), Ok(c)) => out.extend(check_chern_multiplicative(&k, &c)),
                (Err(e), _) => out.push(ring_error(suite, Theory::K, e)),
                (_, Err(e)) => out.push(ring_error(suite, Theory::Chow, e)),
            },
            Suite::Rank => {
                out.extend(check_obstruction_ranks(d));
                match ring(Theory::Chow) {
                    Ok(r) => out.extend(check_grading(&r)),
                    Err(e) => out.push(ring_error(suite, Theory::Chow, e)),
                }
            }
        }
    }
    out
}

fn ring_error(suite: Suite, t: Theory, e: String) -> CheckReport {
    CheckReport {
        suite,
        check: format!("{t} product table"),
        instance: "datum".into(),
        passed: false,
        count: 1,
        lhs: Some(format!("error: {e}")),
        rhs: None,
    }
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

/// Datum validation as a suite.
pub fn check_validate(d: &OrbifoldDatum) -> Vec<CheckReport> {
    let report = d.validate();
    let mut t = Tally::new(Suite::Validate, "datum invariants", "datum");
    t.passed = report.checked.saturating_sub(report.failures.len());
    for f in &report.failures {
        t.fail(f.instance.clone(), format!("{}: {}", f.check, f.detail), None);
    }
    let mut out = Vec::new();
    t.finish(&mut out);
    out
}

/// `Im_g + sigma^* Im_{g^-1} = N` on every component of every `X^g`.
pub fn check_eq6(d: &OrbifoldDatum) -> Vec<CheckReport> {
    let mut t = Tally::new(Suite::Eq6, "Im_g + sigma^* Im_g^-1 = N", "all sectors");
    for (key, _) in d.single_sectors() {
        let name = d.key_name(key);
        let sides = || -> Result<(KClass, KClass)> {
            let s = d.sigma(key)?;
            let lhs = im_class(d, key)?.add(&im_class(d, &s.target)?.pullback(&s.pullback)?)?;
            Ok((lhs, d.normal(key)?))
        };
        match sides() {
            Ok((l, r)) => t.compare(|| name.clone(), &l, &r),
            Err(e) => t.error(name, &e),
        }
    }
    let mut out = Vec::new();
    t.finish(&mut out);
    out
}

/// Pullbacks and pushforwards of a triple-sector component to the four
/// corners `X^{g1}`, `X^{g2}`, `X^{g3}`, `X^{g1 g2 g3}`.
pub struct Corners {
    pub targets: [SectorKey; 4],
    pub pullbacks: [LinearMap; 4],
    pub push: LinearMap,
}

pub fn corners(d: &OrbifoldDatum, key: &SectorKey) -> Result<Corners> {
    let t = d.triple_maps(key)?;
    let d12 = d.double_maps(&t.e12.target)?;
    let d12_3 = d.double_maps(&t.mu12_3.target)?;
    let j = |outer: &crate::datum::Edge, inner: &crate::datum::Edge| outer.pullback.then(&inner.pullback);
    Ok(Corners {
        targets: [
            d12.e1.target.clone(),
            d12.e2.target.clone(),
            d12_3.e2.target.clone(),
            d12_3.mu.target.clone(),
        ],
        pullbacks: [
            j(&d12.e1, &t.e12)?,
            j(&d12.e2, &t.e12)?,
            j(&d12_3.e2, &t.mu12_3)?,
            j(&d12_3.mu, &t.mu12_3)?,
        ],
        push: t.mu12_3.push()?.then(d12_3.mu.push()?)?,
    })
}

/// The three expressions of the obstruction identity on a triple component:
/// through `X^{g1,g2}` and `X^{g1g2,g3}` with the first excess class, through
/// `X^{g1,g2g3}` and `X^{g2,g3}` with the second, and the closed form
/// `sum Im_gi| + Im_(g1g2g3)^-1| - N`.
pub fn obstruction_sides(d: &OrbifoldDatum, key: &SectorKey) -> Result<[KClass; 3]> {
    let t = d.triple_maps(key)?;
    let n = d.normal(key)?;
    let excess = |e: &crate::datum::Edge, f: &crate::datum::Edge| -> Result<KClass> {
        let pulled = product_normal(d, &e.target)?.pullback(&e.pullback)?;
        let intrinsic = n.sub(&d.normal(&f.target)?.pullback(&f.pullback)?)?;
        pulled.sub(&intrinsic)
    };
    let restrict = |e: &crate::datum::Edge| -> Result<KClass> { obstruction(d, &e.target)?.pullback(&e.pullback) };
    let left = restrict(&t.e12)?
        .add(&restrict(&t.mu12_3)?)?
        .add(&excess(&t.e12, &t.mu12_3)?)?;
    let right = restrict(&t.mu1_23)?
        .add(&restrict(&t.e23)?)?
        .add(&excess(&t.e23, &t.mu1_23)?)?;

    let c = corners(d, key)?;
    let mut closed = n.neg();
    for i in 0..3 {
        closed = closed.add(&im_class(d, &c.targets[i])?.pullback(&c.pullbacks[i])?)?;
    }
    let s = d.sigma(&c.targets[3])?;
    let last = im_class(d, &s.target)?
        .pullback(&s.pullback)?
        .pullback(&c.pullbacks[3])?;
    closed = closed.add(&last)?;
    Ok([left, right, closed])
}

/// Excess classes `E12`, `E23` of the two fibre squares at a triple component.
pub fn excess_classes(d: &OrbifoldDatum, key: &SectorKey) -> Result<[KClass; 2]> {
    let t = d.triple_maps(key)?;
    let n = d.normal(key)?;
    let excess = |e: &crate::datum::Edge, f: &crate::datum::Edge| -> Result<KClass> {
        let pulled = product_normal(d, &e.target)?.pullback(&e.pullback)?;
        pulled.sub(&n.sub(&d.normal(&f.target)?.pullback(&f.pullback)?)?)
    };
    Ok([excess(&t.e12, &t.mu12_3)?, excess(&t.e23, &t.mu1_23)?])
}

pub fn check_eq1(d: &OrbifoldDatum) -> Vec<CheckReport> {
    eq1_over(d, d.triple_keys(), "all triple components")
}

/// The obstruction identity on a single triple-sector component.
pub fn check_obstruction_identity(d: &OrbifoldDatum, key: &SectorKey) -> Vec<CheckReport> {
    eq1_over(d, std::iter::once(key), &d.key_name(key))
}

fn eq1_over<'a>(d: &OrbifoldDatum, keys: impl Iterator<Item = &'a SectorKey>, family: &str) -> Vec<CheckReport> {
    let mut left = Tally::new(Suite::Eq1, "left route = closed form", family);
    let mut right = Tally::new(Suite::Eq1, "right route = closed form", family);
    let mut excess = Tally::new(Suite::Eq1, "excess classes are bundles", family);
    for key in keys {
        let name = d.key_name(key);
        match obstruction_sides(d, key) {
            Ok([l, r, c]) => {
                left.compare(|| name.clone(), &l, &c);
                right.compare(|| name.clone(), &r, &c);
            }
            Err(e) => {
                left.error(name.clone(), &e);
                right.error(name.clone(), &e);
            }
        }
        match excess_classes(d, key) {
            Ok(es) => {
                for e in es {
                    if is_nonnegative_integer(&e.rank()) {
                        excess.pass();
                    } else {
                        excess.fail(name.clone(), format!("rank of {e} is not a nonnegative integer"), None);
                    }
                }
            }
            Err(e) => excess.error(name.clone(), &e),
        }
    }
    let mut out = Vec::new();
    left.finish(&mut out);
    right.finish(&mut out);
    excess.finish(&mut out);
    out
}

fn instance(table: &ProductTable, idx: &[usize]) -> String {
    idx.iter()
        .map(|&i| table.labels[i].as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

/// `(x y) z = x (y z)` over all basis triples of a table.
fn table_associativity(table: &ProductTable, suite: Suite, check: &str, family: &str) -> Vec<CheckReport> {
    let n = table.dim();
    let mut t = Tally::new(suite, check, family);
    for i in 0..n {
        for j in 0..n {
            let xy = table.product(i, j);
            for k in 0..n {
                let yz = table.product(j, k);
                let left = table.mul(xy, &table.basis(k));
                let right = table.mul(&table.basis(i), yz);
                t.compare(
                    || instance(table, &[i, j, k]),
                    &Vector(table, left),
                    &Vector(table, right),
                );
            }
        }
    }
    let mut out = Vec::new();
    t.finish(&mut out);
    out
}

/// Identity, associativity of the full and invariant tables, and the triple
/// route `(x y) z = j4_*(j1^*x j2^*y j3^*z K)` through the triple sectors.
pub fn check_associativity(ring: &StringyRing) -> Vec<CheckReport> {
    let theory = ring.theory();
    let table = ring.table();
    let n = table.dim();
    let mut out = Vec::new();

    let one = ring.identity_index();
    let mut unit = Tally::new(
        Suite::Assoc,
        &format!("{theory} untwisted unit is an identity"),
        "all basis elements",
    );
    for i in 0..n {
        let b = Vector(table, table.basis(i));
        unit.compare(
            || table.labels[i].clone(),
            &Vector(table, table.product(one, i).to_vec()),
            &b,
        );
        unit.compare(
            || table.labels[i].clone(),
            &Vector(table, table.product(i, one).to_vec()),
            &b,
        );
    }
    unit.finish(&mut out);

    out.extend(table_associativity(
        table,
        Suite::Assoc,
        &format!("{theory} associativity"),
        "all basis triples",
    ));
    match InvariantRing::new(ring) {
        Ok(inv) => out.extend(table_associativity(
            inv.table(),
            Suite::Assoc,
            &format!("{theory} invariant associativity"),
            "all invariant basis triples",
        )),
        Err(e) => {
            let mut t = Tally::new(Suite::Assoc, &format!("{theory} invariant subring"), "datum");
            t.error("datum", &e);
            t.finish(&mut out);
        }
    }
    out.extend(triple_route(ring));
    out
}

/// Kernel multiplied in on a triple component before pushing forward to
/// `X^{g1g2g3}`.
pub fn triple_kernel(d: &OrbifoldDatum, key: &SectorKey, theory: Theory) -> Result<AlgebraElement> {
    let t = d.triple_maps(key)?;
    let r12 = obstruction(d, &t.e12.target)?.pullback(&t.e12.pullback)?;
    let r123 = obstruction(d, &t.mu12_3.target)?.pullback(&t.mu12_3.pullback)?;
    let [e12, _] = excess_classes(d, key)?;
    match theory {
        Theory::Chow => r12.c_top()?.mul(&r123.c_top()?)?.mul(&e12.c_top()?),
        Theory::K => {
            let c = corners(d, key)?;
            let normal = d
                .normal(key)?
                .sub(&d.normal(&c.targets[3])?.pullback(&c.pullbacks[3])?)?;
            r12.euler_k()?
                .mul(&r123.euler_k()?)?
                .mul(&e12.euler_k()?)?
                .mul(&normal.neg().todd()?)
        }
    }
}

fn triple_route(ring: &StringyRing) -> Vec<CheckReport> {
    let d = ring.datum();
    let theory = ring.theory();
    let table = ring.table();
    let mut t = Tally::new(
        Suite::Assoc,
        &format!("{theory} triple-sector route"),
        "all basis triples",
    );
    let mut acc: HashMap<(usize, usize, usize), Vec<Rational>> = HashMap::new();
    let mut covered = true;
    for key in d.triple_keys() {
        let mut step = || -> Result<()> {
            let c = corners(d, key)?;
            let kernel = triple_kernel(d, key, theory)?;
            let blocks = [
                ring.block(&c.targets[0])?,
                ring.block(&c.targets[1])?,
                ring.block(&c.targets[2])?,
            ];
            let out_block = ring.block(&c.targets[3])?;
            let pulls: Vec<Vec<AlgebraElement>> = (0..3)
                .map(|s| {
                    let src = c.pullbacks[s].source().clone();
                    (0..src.size())
                        .map(|a| c.pullbacks[s].apply(&AlgebraElement::basis(&src, a)))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            for (a, x) in pulls[0].iter().enumerate() {
                let xk = x.mul(&kernel)?;
                if xk.is_zero() {
                    continue;
                }
                for (b, y) in pulls[1].iter().enumerate() {
                    let xy = xk.mul(y)?;
                    if xy.is_zero() {
                        continue;
                    }
                    for (c3, z) in pulls[2].iter().enumerate() {
                        let v = c.push.apply(&xy.mul(z)?)?;
                        if v.is_zero() {
                            continue;
                        }
                        let entry = acc
                            .entry((blocks[0].start + a, blocks[1].start + b, blocks[2].start + c3))
                            .or_insert_with(|| vec![Rational::zero(); table.dim()]);
                        for (k, x) in v.coeffs().iter().enumerate() {
                            if !x.is_zero() {
                                entry[out_block.start + k] += x;
                            }
                        }
                    }
                }
            }
            Ok(())
        };
        if let Err(e) = step() {
            t.error(d.key_name(key), &e);
            covered = false;
        }
    }
    if covered {
        let n = table.dim();
        for i in 0..n {
            for j in 0..n {
                let xy = table.product(i, j);
                for k in 0..n {
                    let lhs = table.mul(xy, &table.basis(k));
                    let rhs = acc.remove(&(i, j, k)).unwrap_or_else(|| vec![Rational::zero(); n]);
                    t.compare(|| instance(table, &[i, j, k]), &Vector(table, lhs), &Vector(table, rhs));
                }
            }
        }
    }
    let mut out = Vec::new();
    t.finish(&mut out);
    out
}

/// Twisted commutativity `x y = (-1)^{|x||y|} y h^*(x)` for `y` on `X^h`,
/// G-equivariance of the product, and signed commutativity of the invariant
/// subring.
pub fn check_commutativity(ring: &StringyRing) -> Vec<CheckReport> {
    let d = ring.datum();
    let theory = ring.theory();
    let table = ring.table();
    let n = table.dim();
    let mut out = Vec::new();

    let actions: Result<Vec<(crate::group::Element, Vec<Vec<Rational>>)>> =
        d.group.elements().map(|h| Ok((h, ring.action_matrix(h)?))).collect();
    let actions = match actions {
        Ok(a) => a,
        Err(e) => {
            let mut t = Tally::new(Suite::Comm, &format!("{theory} group action"), "datum");
            t.error("datum", &e);
            t.finish(&mut out);
            return out;
        }
    };
    let action_of = |h: crate::group::Element| &actions[h.index()].1;
    let column = |m: &[Vec<Rational>], i: usize| -> Vec<Rational> { m.iter().map(|r| r[i].clone()).collect() };

    let mut twisted = Tally::new(
        Suite::Comm,
        &format!("{theory} twisted commutativity"),
        "all basis pairs",
    );
    for i in 0..n {
        for j in 0..n {
            let h = ring.locate(j).0.g();
            let hx = column(action_of(h), i);
            let lhs = table.product(i, j).to_vec();
            let rhs: Vec<Rational> = table
                .mul(&table.basis(j), &hx)
                .into_iter()
                .map(|x| x * table.swap_sign(i, j))
                .collect();
            twisted.compare(|| instance(table, &[i, j]), &Vector(table, lhs), &Vector(table, rhs));
        }
    }
    twisted.finish(&mut out);

    let mut equivariant = Tally::new(
        Suite::Comm,
        &format!("{theory} G-equivariance"),
        "all group elements and basis pairs",
    );
    for (h, m) in &actions {
        let images: Vec<Vec<Rational>> = (0..n).map(|i| column(m, i)).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = crate::stringy::apply_matrix(m, table.product(i, j));
                let rhs = table.mul(&images[i], &images[j]);
                equivariant.compare(
                    || format!("{}; {}", d.group.name(*h), instance(table, &[i, j])),
                    &Vector(table, lhs),
                    &Vector(table, rhs),
                );
            }
        }
    }
    equivariant.finish(&mut out);

    match InvariantRing::new(ring) {
        Ok(inv) => {
            let it = inv.table();
            let mut signed = Tally::new(
                Suite::Comm,
                &format!("{theory} invariant signed commutativity"),
                "all invariant basis pairs",
            );
            for a in 0..it.dim() {
                for b in 0..it.dim() {
                    let lhs = it.product(a, b).to_vec();
                    let rhs: Vec<Rational> = it.product(b, a).iter().map(|x| x * it.swap_sign(a, b)).collect();
                    signed.compare(|| instance(it, &[a, b]), &Vector(it, lhs), &Vector(it, rhs));
                }
            }
            signed.finish(&mut out);
        }
        Err(e) => {
            let mut t = Tally::new(Suite::Comm, &format!("{theory} invariant subring"), "datum");
            t.error("datum", &e);
            t.finish(&mut out);
        }
    }
    out
}

/// `Ch(x *_K y) = Ch(x) *_Chow Ch(y)` on all basis pairs, together with the
/// K-class identity behind it and the Todd-Chern identity on every
/// obstruction bundle.
pub fn check_chern_multiplicative(k: &StringyRing, chow: &StringyRing) -> Vec<CheckReport> {
    let d = k.datum();
    let mut out = Vec::new();
    let table = chow.table();
    let n = table.dim();

    let mut mult = Tally::new(
        Suite::Chern,
        "stringy Chern character is multiplicative",
        "all basis pairs",
    );
    match k.chern_matrix() {
        Ok(m) => {
            let images: Vec<Vec<Rational>> = (0..n).map(|i| m.iter().map(|r| r[i].clone()).collect()).collect();
            for i in 0..n {
                for j in 0..n {
                    let lhs = crate::stringy::apply_matrix(&m, k.table().product(i, j));
                    let rhs = table.mul(&images[i], &images[j]);
                    mult.compare(|| instance(table, &[i, j]), &Vector(table, lhs), &Vector(table, rhs));
                }
            }
        }
        Err(e) => mult.error("datum", &e),
    }
    mult.finish(&mut out);

    let mut compare = Tally::new(
        Suite::Chern,
        "R - e1^*Im_g1 - e2^*Im_g2 = -N_mu - mu^*Im_g1g2",
        "all double components",
    );
    let mut todd = Tally::new(
        Suite::Chern,
        "td(R) ch(lambda_-1 R^vee) = c_top(R)",
        "all double components",
    );
    for key in d.double_keys() {
        let name = d.key_name(key);
        let sides = || -> Result<(KClass, KClass)> {
            let maps = d.double_maps(key)?;
            let lhs = obstruction(d, key)?
                .sub(&im_class(d, &maps.e1.target)?.pullback(&maps.e1.pullback)?)?
                .sub(&im_class(d, &maps.e2.target)?.pullback(&maps.e2.pullback)?)?;
            let rhs = product_normal(d, key)?
                .neg()
                .sub(&im_class(d, &maps.mu.target)?.pullback(&maps.mu.pullback)?)?;
            Ok((lhs, rhs))
        };
        match sides() {
            Ok((l, r)) => compare.compare(|| name.clone(), &l, &r),
            Err(e) => compare.error(name.clone(), &e),
        }
        let identity = || -> Result<(AlgebraElement, AlgebraElement)> {
            let r = obstruction(d, key)?;
            Ok((r.todd()?.mul(&r.euler_k()?)?, r.c_top()?))
        };
        match identity() {
            Ok((l, r)) => todd.compare(|| name.clone(), &l, &r),
            Err(e) => todd.error(name, &e),
        }
    }
    compare.finish(&mut out);
    todd.finish(&mut out);

    let mut twist = Tally::new(
        Suite::Chern,
        "untwisted Chern correction is trivial",
        "untwisted sector",
    );
    match chern_twist(d, &d.untwisted()) {
        Ok(x) => twist.compare(|| "untwisted".into(), &x, &AlgebraElement::one(x.owner())),
        Err(e) => twist.error("untwisted", &e),
    }
    twist.finish(&mut out);
    out
}

/// Rank of every obstruction bundle: a nonnegative integer equal to the sum
/// of the three ages minus the codimension.
pub fn check_obstruction_ranks(d: &OrbifoldDatum) -> Vec<CheckReport> {
    let mut honest = Tally::new(Suite::Rank, "rank R is a nonnegative integer", "all double components");
    let mut formula = Tally::new(
        Suite::Rank,
        "rank R = sum of ages - codimension",
        "all double components",
    );
    for key in d.double_keys() {
        let name = d.key_name(key);
        let ranks = || -> Result<(Rational, Rational)> {
            let maps = d.double_maps(key)?;
            let r = obstruction(d, key)?.rank();
            let inv = d.sigma(&maps.mu.target)?.target.clone();
            let expected = age(d, &maps.e1.target)? + age(d, &maps.e2.target)? + age(d, &inv)? - d.normal(key)?.rank();
            Ok((r, expected))
        };
        match ranks() {
            Ok((r, e)) => {
                if is_nonnegative_integer(&r) {
                    honest.pass();
                } else {
                    honest.fail(
                        name.clone(),
                        format!("rank {}", crate::rational::format_rational(&r)),
                        None,
                    );
                }
                formula.compare(|| name.clone(), &Q(r), &Q(e));
            }
            Err(e) => {
                honest.error(name.clone(), &e);
                formula.error(name, &e);
            }
        }
    }
    let mut out = Vec::new();
    honest.finish(&mut out);
    formula.finish(&mut out);
    out
}

struct Q(Rational);

impl PartialEq for Q {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::rational::format_rational(&self.0))
    }
}

/// Obstruction ranks together with grading additivity of the Chow table.
pub fn check_rank_and_grading(d: &Arc<OrbifoldDatum>) -> Vec<CheckReport> {
    run(d, &[Suite::Rank], Some(Theory::Chow))
}

/// Every nonzero coefficient of `b_i * b_j` sits in degree `deg b_i + deg b_j`.
pub fn check_grading(ring: &StringyRing) -> Vec<CheckReport> {
    let table = ring.table();
    let n = table.dim();
    let mut t = Tally::new(
        Suite::Rank,
        &format!("{} grading is additive", ring.theory()),
        "all basis pairs",
    );
    for i in 0..n {
        for j in 0..n {
            let expected = &table.degrees[i] + &table.degrees[j];
            let bad: Vec<String> = table
                .product(i, j)
                .iter()
                .enumerate()
                .filter(|(k, c)| !c.is_zero() && table.degrees[*k] != expected)
                .map(|(k, _)| format!("{} in degree {}", table.labels[k], table.degrees[k]))
                .collect();
            if bad.is_empty() {
                t.pass();
            } else {
                t.fail(
                    instance(table, &[i, j]),
                    format!("expected degree {expected}, found {}", bad.join(", ")),
                    None,
                );
            }
        }
    }
    let mut out = Vec::new();
    t.finish(&mut out);
    out
}

/// Trace form `Tr(L_a L_b)` of a product table.
pub fn trace_form(table: &ProductTable) -> Vec<Vec<Rational>> {
    let n = table.dim();
    // L_a has matrix (L_a)[k][j] = c_{a j k}.
    let mult = |a: usize| -> Vec<Vec<Rational>> {
        (0..n)
            .map(|k| (0..n).map(|j| table.product(a, j)[k].clone()).collect())
            .collect()
    };
    let ls: Vec<Vec<Vec<Rational>>> = (0..n).map(mult).collect();
    let mut form = vec![vec![Rational::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut tr = Rational::zero();
            for i in 0..n {
                for k in 0..n {
                    if !ls[a][i][k].is_zero() && !ls[b][k][i].is_zero() {
                        tr += &ls[a][i][k] * &ls[b][k][i];
                    }
                }
            }
            form[a][b] = tr;
        }
    }
    form
}

/// Commutative with a nondegenerate trace form, which over a field of
/// characteristic zero means the algebra is semisimple.
pub fn is_commutative_semisimple(table: &ProductTable) -> bool {
    let n = table.dim();
    let commutative = (0..n).all(|i| (0..n).all(|j| table.product(i, j) == table.product(j, i)));
    commutative && !determinant(trace_form(table)).is_zero()
}

/// Count of passing and failing lines.
pub fn summary(reports: &[CheckReport]) -> (usize, usize) {
    let failed = reports.iter().filter(|r| !r.passed).count();
    (reports.len() - failed, failed)
}
