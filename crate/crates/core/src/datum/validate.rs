use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{Edge, OrbifoldDatum, SectorKey};
use crate::algebra::{LinearMap, MapKind};
use crate::kclass::KClass;
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationFailure {
    pub check: String,
    pub instance: String,
    pub detail: String,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.check, self.instance, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
    /// Number of individual identities that were checked.
    pub checked: usize,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, check: &str, instance: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(ValidationFailure {
                check: check.to_string(),
                instance: instance(),
                detail: detail(),
            });
        }
    }

    fn fail(&mut self, check: &str, instance: String, detail: String) {
        self.record(false, check, || instance, || detail);
    }
}

fn pull_through(outer: &Edge, inner: &Edge) -> Option<LinearMap> {
    outer.pullback.then(&inner.pullback).ok()
}

fn corner<'a>(a: &'a Edge, b: &Edge) -> (&'a SectorKey, Option<LinearMap>) {
    (&a.target, pull_through(a, b))
}

fn same_edge(a: (&SectorKey, Option<LinearMap>), b: (&SectorKey, Option<LinearMap>)) -> bool {
    match (a.1, b.1) {
        (Some(x), Some(y)) => a.0 == b.0 && x.same_matrix(&y),
        _ => false,
    }
}

pub(super) fn validate(d: &OrbifoldDatum) -> ValidationReport {
    let mut r = ValidationReport::default();
    let g = &d.group;
    let Ok(ambient) = d.ambient_dim() else {
        r.fail("untwisted sector", "(e)".into(), "missing".into());
        return r;
    };

    for a in g.elements() {
        for b in g.elements() {
            r.record(
                d.is_declared(&[a, b]),
                "double sector declared",
                || format!("({},{})", g.name(a), g.name(b)),
                || "no components and not declared empty".into(),
            );
            for c in g.elements() {
                r.record(
                    d.is_declared(&[a, b, c]),
                    "triple sector declared",
                    || format!("({},{},{})", g.name(a), g.name(b), g.name(c)),
                    || "no components and not declared empty".into(),
                );
            }
        }
    }

    let mut edges: Vec<(String, &Edge)> = Vec::new();
    for key in d.sectors.keys() {
        match key.level() {
            2 => match d.doubles.get(key) {
                Some(m) => {
                    for (n, e) in [("e1", &m.e1), ("e2", &m.e2), ("mu", &m.mu)] {
                        edges.push((format!("{} {n}", d.key_name(key)), e));
                    }
                    r.record(
                        m.mu.pushforward.is_some(),
                        "pushforward present",
                        || format!("{} mu", d.key_name(key)),
                        || "missing".into(),
                    );
                }
                None => r.fail("double maps present", d.key_name(key), "missing".into()),
            },
            3 => match d.triples.get(key) {
                Some(m) => {
                    for (n, e) in [
                        ("e12", &m.e12),
                        ("e23", &m.e23),
                        ("mu12_3", &m.mu12_3),
                        ("mu1_23", &m.mu1_23),
                    ] {
                        edges.push((format!("{} {n}", d.key_name(key)), e));
                    }
                    for (n, e) in [("mu12_3", &m.mu12_3), ("mu1_23", &m.mu1_23)] {
                        r.record(
                            e.pushforward.is_some(),
                            "pushforward present",
                            || format!("{} {n}", d.key_name(key)),
                            || "missing".into(),
                        );
                    }
                }
                None => r.fail("triple maps present", d.key_name(key), "missing".into()),
            },
            _ => {}
        }
    }
    for (key, e) in &d.sigma {
        edges.push((format!("{} sigma", d.key_name(key)), e));
    }
    for (h, maps) in &d.gaction {
        for (key, e) in maps {
            edges.push((format!("{} action of {}", d.key_name(key), g.name(*h)), e));
        }
    }

    for (name, e) in &edges {
        for f in e.pullback.pullback_failures() {
            r.fail("pullback axioms", name.clone(), f);
        }
        r.checked += 1;
        if let Some(push) = &e.pushforward {
            for f in push.pushforward_failures() {
                r.fail("pushforward axioms", name.clone(), f);
            }
            match push.projection_formula_failures(&e.pullback) {
                Ok(fs) => {
                    for f in fs {
                        r.fail("projection formula", name.clone(), f);
                    }
                }
                Err(err) => r.fail("projection formula", name.clone(), err.to_string()),
            }
            r.checked += 1;
            // A closed embedding of connected pieces of equal dimension is an
            // isomorphism, so pushforward must invert pullback.
            if push.source().dim() == push.target().dim() {
                let inverse = push
                    .then(&e.pullback)
                    .map(|m| m.same_matrix(&LinearMap::identity(push.source(), m.kind())));
                if !matches!(inverse, Ok(true)) {
                    r.fail(
                        "equidimensional embedding",
                        name.clone(),
                        "pushforward is not inverse to pullback".into(),
                    );
                }
                r.checked += 1;
            }
        }
    }

    // Involution.
    for (key, _) in d.single_sectors() {
        let Some(s) = d.sigma.get(key) else {
            r.fail("involution present", d.key_name(key), "missing".into());
            continue;
        };
        let back = d.sigma.get(&s.target);
        let ok = back.is_some_and(|b| {
            b.target == *key
                && pull_through(b, s)
                    .is_some_and(|m| m.same_matrix(&LinearMap::identity(m.source(), MapKind::Pullback)))
        });
        r.record(
            ok,
            "involution squares to identity",
            || d.key_name(key),
            || format!("through {}", d.key_name(&s.target)),
        );
    }

    // Commutation identities of the triple diagram.
    for (key, t) in &d.triples {
        let doubles = [&t.e12, &t.e23, &t.mu12_3, &t.mu1_23].map(|e| d.doubles.get(&e.target));
        let [Some(d12), Some(d23), Some(d12_3), Some(d1_23)] = doubles else {
            r.fail("triple diagram", d.key_name(key), "maps of a face are missing".into());
            continue;
        };
        let identities = [
            ("first corner", corner(&d12.e1, &t.e12), corner(&d1_23.e1, &t.mu1_23)),
            ("second corner", corner(&d12.e2, &t.e12), corner(&d23.e1, &t.e23)),
            ("third corner", corner(&d12_3.e2, &t.mu12_3), corner(&d23.e2, &t.e23)),
            (
                "product corner",
                corner(&d12_3.mu, &t.mu12_3),
                corner(&d1_23.mu, &t.mu1_23),
            ),
            ("left square", corner(&d12.mu, &t.e12), corner(&d12_3.e1, &t.mu12_3)),
            ("right square", corner(&d23.mu, &t.e23), corner(&d1_23.e2, &t.mu1_23)),
        ];
        for (name, a, b) in identities {
            r.record(
                same_edge(a, b),
                "triple diagram commutes",
                || d.key_name(key),
                || format!("{name} differs between the two routes"),
            );
        }
        let push = |inner: &Edge, outer: &Edge| -> Option<LinearMap> {
            inner.pushforward.as_ref()?.then(outer.pushforward.as_ref()?).ok()
        };
        let ok = match (push(&t.mu12_3, &d12_3.mu), push(&t.mu1_23, &d1_23.mu)) {
            (Some(a), Some(b)) => a.same_matrix(&b),
            _ => false,
        };
        r.record(
            ok,
            "triple diagram commutes",
            || d.key_name(key),
            || "pushforwards along the product corner differ".into(),
        );
    }

    // Normal bundles.
    for (key, alg) in &d.sectors {
        let n = d.normal(key).expect("sector exists");
        let expected = Rational::from_integer((ambient as i64 - alg.dim() as i64).into());
        r.record(
            n.rank() == expected,
            "normal rank mismatch",
            || d.key_name(key),
            || {
                format!(
                    "rank {} but codimension {}",
                    format_rational(&n.rank()),
                    format_rational(&expected)
                )
            },
        );
        r.record(
            n.is_honest(),
            "normal bundle not honest",
            || d.key_name(key),
            || n.to_string(),
        );
    }

    // Eigen data.
    for (key, alg) in d.single_sectors() {
        if key.g().is_identity() {
            continue;
        }
        let Some(entries) = d.eigen.get(key) else {
            r.fail("eigen data present", d.key_name(key), "missing".into());
            continue;
        };
        let mut total = KClass::zero(alg);
        for e in entries {
            r.record(
                e.alpha.is_positive() && e.alpha < Rational::one(),
                "eigenvalue angle out of range",
                || d.key_name(key),
                || format_rational(&e.alpha),
            );
            r.record(
                e.lines.is_honest(),
                "eigen multiplicity not a nonnegative integer",
                || d.key_name(key),
                || e.lines.to_string(),
            );
            if let Ok(t) = total.add(&e.lines) {
                total = t;
            }
        }
        let n = d.normal(key).expect("sector exists");
        r.record(
            total == n,
            "eigen-decomposition incomplete",
            || d.key_name(key),
            || format!("eigenlines sum to {total}, normal bundle is {n}"),
        );
    }

    // Group action.
    let singles: Vec<&SectorKey> = d.single_sectors().map(|(k, _)| k).collect();
    for h in g.elements() {
        let hinv = g.inverse(h);
        for key in &singles {
            let Ok(e) = d.action(h, key) else {
                r.fail("action present", d.key_name(key), format!("no map for {}", g.name(h)));
                continue;
            };
            let conj = g.conjugate(hinv, key.g());
            r.record(
                e.target.elements == [conj],
                "action permutes sectors by conjugation",
                || d.key_name(key),
                || format!("{} sends it to {}", g.name(h), d.key_name(&e.target)),
            );
            let (a, b) = (age(d, key), age(d, &e.target));
            r.record(
                a == b,
                "age invariant under conjugation",
                || d.key_name(key),
                || format!("{} vs {} on {}", fmt_opt(&a), fmt_opt(&b), d.key_name(&e.target)),
            );
            if h.is_identity() {
                let ok = e.target == **key
                    && e.pullback
                        .same_matrix(&LinearMap::identity(e.pullback.source(), MapKind::Pullback));
                r.record(
                    ok,
                    "identity acts trivially",
                    || d.key_name(key),
                    || "non-identity map".into(),
                );
            }
        }
    }
    for h1 in g.elements() {
        for h2 in g.elements() {
            let h12 = g.mul(h1, h2);
            for key in &singles {
                let (Ok(a), Ok(c)) = (d.action(h1, key), d.action(h12, key)) else {
                    continue;
                };
                let Ok(b) = d.action(h2, &a.target) else {
                    continue;
                };
                let ok = b.target == c.target && a.pullback.then(&b.pullback).is_ok_and(|m| m.same_matrix(&c.pullback));
                r.record(
                    ok,
                    "action is functorial",
                    || d.key_name(key),
                    || {
                        format!(
                            "({}{})^* differs from {}^* after {}^*",
                            g.name(h1),
                            g.name(h2),
                            g.name(h2),
                            g.name(h1)
                        )
                    },
                );
            }
        }
    }
    r
}

fn fmt_opt(q: &Option<Rational>) -> String {
    q.as_ref().map_or("?".into(), format_rational)
}

fn age(d: &OrbifoldDatum, key: &SectorKey) -> Option<Rational> {
    let entries = d.eigen(key).ok()?;
    let mut total = Rational::zero();
    for e in entries {
        total += &e.alpha * e.lines.rank();
    }
    Some(total)
}
