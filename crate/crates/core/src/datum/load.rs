use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::schema::{
    AlgebraDoc, CorpusDocument, EdgeDoc, ElemRef, GroupDoc, LineDoc, MatrixDoc, ResolutionDocument, SectorRef,
};
use super::{DoubleMaps, Edge, EigenEntry, OrbifoldDatum, SectorKey, TripleMaps};
use crate::algebra::{AlgebraElement, BasisElement, FiniteAlgebra, LinearMap, MapKind};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::kclass::KClass;
use crate::rational::Rational;

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::schema(
            if path == "." { "document".into() } else { path },
            e.into_inner().to_string(),
        )
    })
}

pub(super) fn load_str(text: &str) -> Result<OrbifoldDatum> {
    let doc: CorpusDocument = parse(text)?;
    load_document(&doc)
}

/// Reads a standalone resolution-side algebra document.
pub fn load_resolution_str(text: &str) -> Result<Arc<FiniteAlgebra>> {
    let doc: ResolutionDocument = parse(text)?;
    build_algebra(&doc.name, &doc.resolution, "resolution")
}

pub fn load_resolution(path: impl AsRef<std::path::Path>) -> Result<Arc<FiniteAlgebra>> {
    load_resolution_str(&std::fs::read_to_string(path)?)
}

pub(crate) fn build_algebra(name: &str, doc: &AlgebraDoc, path: &str) -> Result<Arc<FiniteAlgebra>> {
    let basis: Vec<BasisElement> = doc
        .basis
        .iter()
        .map(|b| {
            let e = BasisElement::new(b.label.clone(), b.p.0.clone(), b.n);
            match b.odd {
                Some(odd) => e.with_parity(odd),
                None => e,
            }
        })
        .collect();
    let index = |label: &str, at: String| {
        basis
            .iter()
            .position(|b| b.label == label)
            .ok_or_else(|| Error::schema(at, format!("unknown basis label {label:?}")))
    };
    let unit_label = doc.unit.as_deref().unwrap_or("1");
    let unit = index(unit_label, format!("{path}.unit"))?;
    let mut constants = Vec::with_capacity(doc.products.len());
    for (i, (a, b, c, q)) in doc.products.iter().enumerate() {
        let at = format!("{path}.products[{i}]");
        constants.push((index(a, at.clone())?, index(b, at.clone())?, index(c, at)?, q.0.clone()));
    }
    FiniteAlgebra::new(name, doc.dim, basis, unit, constants)
        .map(Arc::new)
        .map_err(|e| Error::schema(path, e.to_string()))
}

struct Loader {
    group: FiniteGroup,
    sectors: BTreeMap<SectorKey, Arc<FiniteAlgebra>>,
}

impl Loader {
    fn elem(&self, r: &ElemRef, at: &str) -> Result<Element> {
        match r {
            ElemRef::Index(i) => self
                .group
                .check(Element(*i))
                .map_err(|e| Error::schema(at, e.to_string())),
            ElemRef::Name(n) => self
                .group
                .element_by_name(n)
                .ok_or_else(|| Error::schema(at, format!("unknown group element {n:?}"))),
        }
    }

    fn key(&self, r: &SectorRef, level: usize, at: &str) -> Result<SectorKey> {
        if r.key.len() != level {
            return Err(Error::schema(
                format!("{at}.key"),
                format!("expected {level} group elements, found {}", r.key.len()),
            ));
        }
        let elements = r
            .key
            .iter()
            .enumerate()
            .map(|(i, e)| self.elem(e, &format!("{at}.key[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let key = SectorKey::new(elements, r.component);
        if !self.sectors.contains_key(&key) {
            return Err(Error::schema(at, format!("undefined sector {}", self.name(&key))));
        }
        Ok(key)
    }

    fn name(&self, key: &SectorKey) -> String {
        let elems: Vec<&str> = key.elements.iter().map(|g| self.group.name(*g)).collect();
        format!("({})#{}", elems.join(","), key.component)
    }

    fn alg(&self, key: &SectorKey, at: &str) -> Result<Arc<FiniteAlgebra>> {
        self.sectors
            .get(key)
            .cloned()
            .ok_or_else(|| Error::schema(at, format!("undefined sector {}", self.name(key))))
    }

    fn matrix(
        &self,
        m: &MatrixDoc,
        source: &Arc<FiniteAlgebra>,
        target: &Arc<FiniteAlgebra>,
        kind: MapKind,
        at: &str,
    ) -> Result<LinearMap> {
        let rows = match m {
            MatrixDoc::Named(n) if n == "identity" => {
                if source.size() != target.size() {
                    return Err(Error::schema(
                        at,
                        format!(
                            "identity between algebras of sizes {} and {}",
                            source.size(),
                            target.size()
                        ),
                    ));
                }
                (0..target.size())
                    .map(|r| {
                        (0..source.size())
                            .map(|c| if r == c { Rational::one() } else { Rational::zero() })
                            .collect()
                    })
                    .collect()
            }
            MatrixDoc::Named(n) => return Err(Error::schema(at, format!("unknown matrix name {n:?}"))),
            MatrixDoc::Dense(rows) => rows.iter().map(|r| r.iter().map(|q| q.0.clone()).collect()).collect(),
        };
        LinearMap::new(source.clone(), target.clone(), rows, kind).map_err(|e| Error::schema(at, e.to_string()))
    }

    /// An edge from `from` to component `doc.component` of `to_elements`.
    fn edge(&self, from: &SectorKey, to_elements: Vec<Element>, doc: &EdgeDoc, at: &str) -> Result<Edge> {
        let target = SectorKey::new(to_elements, doc.component);
        let src = self.alg(from, at)?;
        let tgt = self.alg(&target, &format!("{at}.component"))?;
        let pullback = self.matrix(&doc.pullback, &tgt, &src, MapKind::Pullback, &format!("{at}.pullback"))?;
        let pushforward = doc
            .pushforward
            .as_ref()
            .map(|m| self.matrix(m, &src, &tgt, MapKind::Pushforward, &format!("{at}.pushforward")))
            .transpose()?;
        Ok(Edge {
            target,
            pullback,
            pushforward,
        })
    }

    fn lines(&self, owner: &Arc<FiniteAlgebra>, lines: &[LineDoc], at: &str) -> Result<KClass> {
        let mut pairs = Vec::with_capacity(lines.len());
        for (i, l) in lines.iter().enumerate() {
            let mut coeffs = vec![Rational::zero(); owner.size()];
            for (label, q) in &l.root {
                let j = owner.index_of(label).ok_or_else(|| {
                    Error::schema(
                        format!("{at}[{i}].root"),
                        format!("unknown basis label {label:?} in {}", owner.name()),
                    )
                })?;
                coeffs[j] = q.0.clone();
            }
            let root = AlgebraElement::from_coeffs(owner, coeffs)?;
            pairs.push((root, l.mult.0.clone()));
        }
        KClass::from_lines(owner, pairs).map_err(|e| Error::schema(at, e.to_string()))
    }
}

pub(super) fn load_document(doc: &CorpusDocument) -> Result<OrbifoldDatum> {
    let group = match &doc.group {
        GroupDoc::Table { table, names } => FiniteGroup::from_table(table.clone(), names.clone()),
        GroupDoc::Permutations { permutations } => FiniteGroup::from_permutations(permutations),
    }
    .map_err(|e| Error::schema("group", e.to_string()))?;

    let mut algebras = BTreeMap::new();
    for (name, a) in &doc.algebras {
        algebras.insert(name.clone(), build_algebra(name, a, &format!("algebras.{name}"))?);
    }

    let mut ld = Loader {
        group,
        sectors: BTreeMap::new(),
    };
    let mut declared = BTreeSet::new();
    let blocks = [
        ("sectors", &doc.sectors, 1),
        ("double_sectors", &doc.double_sectors, 2),
        ("triple_sectors", &doc.triple_sectors, 3),
    ];
    let mut empty = BTreeSet::new();
    for (block, list, level) in blocks {
        for (i, s) in list.iter().enumerate() {
            let at = format!("{block}[{i}]");
            if s.key.len() != level {
                return Err(Error::schema(
                    format!("{at}.key"),
                    format!("expected {level} group elements, found {}", s.key.len()),
                ));
            }
            let elements = s
                .key
                .iter()
                .enumerate()
                .map(|(j, e)| ld.elem(e, &format!("{at}.key[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            if s.empty {
                if s.algebra.is_some() || ld.sectors.keys().any(|k| k.elements == elements) {
                    return Err(Error::schema(at, "empty sector must not carry components"));
                }
                empty.insert(elements.clone());
                declared.insert(elements);
                continue;
            }
            if empty.contains(&elements) {
                return Err(Error::schema(at, "sector was declared empty"));
            }
            let name = s
                .algebra
                .as_ref()
                .ok_or_else(|| Error::schema(format!("{at}.algebra"), "missing algebra"))?;
            let alg = algebras
                .get(name)
                .cloned()
                .ok_or_else(|| Error::schema(format!("{at}.algebra"), format!("unknown algebra {name:?}")))?;
            let key = SectorKey::new(elements.clone(), s.component);
            if ld.sectors.insert(key.clone(), alg).is_some() {
                return Err(Error::schema(at, format!("duplicate sector {}", ld.name(&key))));
            }
            declared.insert(elements);
        }
    }

    // Components of each declared locus must be numbered 0..n.
    let mut counts: BTreeMap<&Vec<Element>, Vec<usize>> = BTreeMap::new();
    for k in ld.sectors.keys() {
        counts.entry(&k.elements).or_default().push(k.component);
    }
    for (elements, comps) in &counts {
        if comps.iter().enumerate().any(|(i, c)| i != *c) {
            let names: Vec<&str> = elements.iter().map(|g| ld.group.name(*g)).collect();
            return Err(Error::schema(
                "sectors",
                format!(
                    "components of ({}) are not numbered 0..{}",
                    names.join(","),
                    comps.len()
                ),
            ));
        }
    }
    for g in ld.group.elements() {
        if !declared.contains(&vec![g]) {
            return Err(Error::schema(
                "sectors",
                format!("no sector declared for element {}", ld.group.name(g)),
            ));
        }
    }
    let untwisted = SectorKey::single(Element::IDENTITY, 0);
    if !ld.sectors.contains_key(&untwisted) || ld.sectors.contains_key(&SectorKey::single(Element::IDENTITY, 1)) {
        return Err(Error::schema(
            "sectors",
            "the untwisted sector must have exactly one component",
        ));
    }

    let mut sigma = BTreeMap::new();
    for (i, s) in doc.correspondences.sigma.iter().enumerate() {
        let at = format!("correspondences.sigma[{i}]");
        let key = ld.key(&s.sector, 1, &format!("{at}.sector"))?;
        let inv = ld.group.inverse(key.g());
        let edge = ld.edge(
            &key,
            vec![inv],
            &EdgeDoc {
                component: s.component,
                pullback: s.pullback.clone(),
                pushforward: None,
            },
            &at,
        )?;
        if sigma.insert(key.clone(), edge).is_some() {
            return Err(Error::schema(at, format!("duplicate involution for {}", ld.name(&key))));
        }
    }
    if !sigma.contains_key(&untwisted) {
        let alg = ld.alg(&untwisted, "sectors")?;
        sigma.insert(
            untwisted.clone(),
            Edge {
                target: untwisted.clone(),
                pullback: LinearMap::identity(&alg, MapKind::Pullback),
                pushforward: None,
            },
        );
    }

    let mut doubles = BTreeMap::new();
    for (i, d) in doc.correspondences.double.iter().enumerate() {
        let at = format!("correspondences.double[{i}]");
        let key = ld.key(&d.sector, 2, &format!("{at}.sector"))?;
        let (g1, g2) = (key.elements[0], key.elements[1]);
        let maps = DoubleMaps {
            e1: ld.edge(&key, vec![g1], &d.e1, &format!("{at}.e1"))?,
            e2: ld.edge(&key, vec![g2], &d.e2, &format!("{at}.e2"))?,
            mu: ld.edge(&key, vec![ld.group.mul(g1, g2)], &d.mu, &format!("{at}.mu"))?,
        };
        if doubles.insert(key.clone(), maps).is_some() {
            return Err(Error::schema(at, format!("duplicate maps for {}", ld.name(&key))));
        }
    }

    let mut triples = BTreeMap::new();
    for (i, t) in doc.correspondences.triple.iter().enumerate() {
        let at = format!("correspondences.triple[{i}]");
        let key = ld.key(&t.sector, 3, &format!("{at}.sector"))?;
        let (g1, g2, g3) = (key.elements[0], key.elements[1], key.elements[2]);
        let maps = TripleMaps {
            e12: ld.edge(&key, vec![g1, g2], &t.e12, &format!("{at}.e12"))?,
            e23: ld.edge(&key, vec![g2, g3], &t.e23, &format!("{at}.e23"))?,
            mu12_3: ld.edge(&key, vec![ld.group.mul(g1, g2), g3], &t.mu12_3, &format!("{at}.mu12_3"))?,
            mu1_23: ld.edge(&key, vec![g1, ld.group.mul(g2, g3)], &t.mu1_23, &format!("{at}.mu1_23"))?,
        };
        if triples.insert(key.clone(), maps).is_some() {
            return Err(Error::schema(at, format!("duplicate maps for {}", ld.name(&key))));
        }
    }

    let mut normal = BTreeMap::new();
    for (i, n) in doc.normal.iter().enumerate() {
        let at = format!("normal[{i}]");
        let level = n.sector.key.len().clamp(1, 3);
        let key = ld.key(&n.sector, level, &format!("{at}.sector"))?;
        let alg = ld.alg(&key, &at)?;
        let class = ld.lines(&alg, &n.lines, &format!("{at}.lines"))?;
        if normal.insert(key.clone(), class).is_some() {
            return Err(Error::schema(
                at,
                format!("duplicate normal bundle for {}", ld.name(&key)),
            ));
        }
    }

    let mut eigen = BTreeMap::new();
    for (i, e) in doc.eigen.iter().enumerate() {
        let at = format!("eigen[{i}]");
        let key = ld.key(&e.sector, 1, &format!("{at}.sector"))?;
        let alg = ld.alg(&key, &at)?;
        let entries = e
            .entries
            .iter()
            .enumerate()
            .map(|(j, en)| {
                Ok(EigenEntry {
                    alpha: en.alpha.0.clone(),
                    lines: ld.lines(&alg, &en.lines, &format!("{at}.entries[{j}].lines"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if eigen.insert(key.clone(), entries).is_some() {
            return Err(Error::schema(at, format!("duplicate eigen data for {}", ld.name(&key))));
        }
    }

    let mut gaction: BTreeMap<Element, BTreeMap<SectorKey, Edge>> = BTreeMap::new();
    let singles: Vec<SectorKey> = ld.sectors.keys().filter(|k| k.level() == 1).cloned().collect();
    for (i, a) in doc.gaction.iter().enumerate() {
        let at = format!("gaction[{i}]");
        let h = ld.elem(&a.element, &format!("{at}.element"))?;
        if gaction.contains_key(&h) {
            return Err(Error::schema(at, format!("duplicate action of {}", ld.group.name(h))));
        }
        let hinv = ld.group.inverse(h);
        let mut maps = BTreeMap::new();
        if a.identity {
            for key in &singles {
                let conj = ld.group.conjugate(hinv, key.g());
                let edge = ld.edge(
                    key,
                    vec![conj],
                    &EdgeDoc {
                        component: key.component,
                        pullback: MatrixDoc::Named("identity".into()),
                        pushforward: None,
                    },
                    &at,
                )?;
                maps.insert(key.clone(), edge);
            }
        }
        for (j, m) in a.maps.iter().enumerate() {
            let mat = format!("{at}.maps[{j}]");
            let key = ld.key(&m.source, 1, &format!("{mat}.source"))?;
            let conj = ld.group.conjugate(hinv, key.g());
            let target = SectorKey::single(conj, m.component);
            let src = ld.alg(&key, &mat)?;
            let tgt = ld.alg(&target, &format!("{mat}.component"))?;
            // h^* runs from the algebra of X^g to that of X^{h^-1 g h}.
            let pullback = ld.matrix(&m.pullback, &src, &tgt, MapKind::Pullback, &format!("{mat}.pullback"))?;
            maps.insert(
                key,
                Edge {
                    target,
                    pullback,
                    pushforward: None,
                },
            );
        }
        gaction.insert(h, maps);
    }
    if !gaction.contains_key(&Element::IDENTITY) {
        let maps = singles
            .iter()
            .map(|k| {
                let alg = ld.alg(k, "sectors")?;
                Ok((
                    k.clone(),
                    Edge {
                        target: k.clone(),
                        pullback: LinearMap::identity(&alg, MapKind::Pullback),
                        pushforward: None,
                    },
                ))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        gaction.insert(Element::IDENTITY, maps);
    }

    let resolution = doc
        .resolution
        .as_ref()
        .map(|r| build_algebra("resolution", r, "resolution"))
        .transpose()?;

    Ok(OrbifoldDatum {
        name: doc.name.clone(),
        description: doc.description.clone(),
        group: ld.group,
        sectors: ld.sectors,
        declared,
        sigma,
        doubles,
        triples,
        normal,
        eigen,
        gaction,
        resolution,
        iso_skeleton: doc.iso_skeleton.clone(),
    })
}
