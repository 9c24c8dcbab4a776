//! Finitely presented G-varieties: sector algebras of the inertia diagrams
//! up to triple level, the maps between them, normal bundles, eigenvalue
//! data and the G-action.

mod load;
pub mod schema;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, LinearMap};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::kclass::KClass;
use crate::rational::Rational;

pub use load::{load_resolution, load_resolution_str};
pub use schema::{CorpusDocument, SkeletonDoc};
pub use validate::{ValidationFailure, ValidationReport};

/// One connected component of `X^{g}`, `X^{g1,g2}` or `X^{g1,g2,g3}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorKey {
    pub elements: Vec<Element>,
    pub component: usize,
}

impl SectorKey {
    pub fn new(elements: Vec<Element>, component: usize) -> Self {
        SectorKey { elements, component }
    }

    pub fn single(g: Element, component: usize) -> Self {
        Self::new(vec![g], component)
    }

    pub fn level(&self) -> usize {
        self.elements.len()
    }

    /// The group element of a single-sector key.
    pub fn g(&self) -> Element {
        self.elements[0]
    }
}

impl fmt::Display for SectorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elems: Vec<String> = self.elements.iter().map(|g| g.to_string()).collect();
        write!(f, "({})#{}", elems.join(","), self.component)
    }
}

/// A map out of a sector component: pullback from the target's algebra,
/// optional pushforward into it.
#[derive(Debug, Clone)]
pub struct Edge {
    pub target: SectorKey,
    pub pullback: LinearMap,
    pub pushforward: Option<LinearMap>,
}

impl Edge {
    pub fn push(&self) -> Result<&LinearMap> {
        self.pushforward
            .as_ref()
            .ok_or_else(|| Error::MissingData(format!("pushforward to {}", self.target)))
    }
}

/// `e1`, `e2`, `mu` out of a component of `X^{g1,g2}`.
#[derive(Debug, Clone)]
pub struct DoubleMaps {
    pub e1: Edge,
    pub e2: Edge,
    pub mu: Edge,
}

/// Maps out of a component of `X^{g1,g2,g3}`: `e12` drops `g3`, `e23` drops
/// `g1`, `mu12_3` multiplies the first two entries and `mu1_23` the last two.
#[derive(Debug, Clone)]
pub struct TripleMaps {
    pub e12: Edge,
    pub e23: Edge,
    pub mu12_3: Edge,
    pub mu1_23: Edge,
}

#[derive(Debug, Clone)]
pub struct EigenEntry {
    pub alpha: Rational,
    pub lines: KClass,
}

#[derive(Debug, Clone)]
pub struct OrbifoldDatum {
    pub name: String,
    pub description: Option<String>,
    pub group: FiniteGroup,
    pub(crate) sectors: BTreeMap<SectorKey, Arc<FiniteAlgebra>>,
    pub(crate) declared: BTreeSet<Vec<Element>>,
    pub(crate) sigma: BTreeMap<SectorKey, Edge>,
    pub(crate) doubles: BTreeMap<SectorKey, DoubleMaps>,
    pub(crate) triples: BTreeMap<SectorKey, TripleMaps>,
    pub(crate) normal: BTreeMap<SectorKey, KClass>,
    pub(crate) eigen: BTreeMap<SectorKey, Vec<EigenEntry>>,
    pub(crate) gaction: BTreeMap<Element, BTreeMap<SectorKey, Edge>>,
    pub resolution: Option<Arc<FiniteAlgebra>>,
    pub iso_skeleton: Option<SkeletonDoc>,
}

impl OrbifoldDatum {
    /// Loads and cross-links a corpus document given as JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        load::load_str(text)
    }

    pub fn from_document(doc: &CorpusDocument) -> Result<Self> {
        load::load_document(doc)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    pub fn sector(&self, key: &SectorKey) -> Result<&Arc<FiniteAlgebra>> {
        self.sectors
            .get(key)
            .ok_or_else(|| Error::MissingData(format!("sector {}", self.key_name(key))))
    }

    /// Components of the fixed locus indexed by `elements`, in order.
    pub fn components(&self, elements: &[Element]) -> Vec<SectorKey> {
        let start = SectorKey::new(elements.to_vec(), 0);
        self.sectors
            .range(start..)
            .take_while(|(k, _)| k.elements == elements)
            .map(|(k, _)| k.clone())
            .collect()
    }

    /// Whether the fixed locus indexed by `elements` was declared, possibly
    /// as empty.
    pub fn is_declared(&self, elements: &[Element]) -> bool {
        self.declared.contains(elements)
    }

    /// Components of `I_G(X)`, ordered by group element then component.
    pub fn single_sectors(&self) -> impl Iterator<Item = (&SectorKey, &Arc<FiniteAlgebra>)> {
        self.sectors.iter().filter(|(k, _)| k.level() == 1)
    }

    pub fn double_sectors(&self, g: Element, h: Element) -> Vec<SectorKey> {
        self.components(&[g, h])
    }

    pub fn triple_sectors(&self, g1: Element, g2: Element, g3: Element) -> Vec<SectorKey> {
        self.components(&[g1, g2, g3])
    }

    pub fn untwisted(&self) -> SectorKey {
        SectorKey::single(Element::IDENTITY, 0)
    }

    pub fn ambient_dim(&self) -> Result<u32> {
        Ok(self.sector(&self.untwisted())?.dim())
    }

    pub fn double_maps(&self, key: &SectorKey) -> Result<&DoubleMaps> {
        self.doubles
            .get(key)
            .ok_or_else(|| Error::MissingData(format!("maps for double sector {}", self.key_name(key))))
    }

    pub fn triple_maps(&self, key: &SectorKey) -> Result<&TripleMaps> {
        self.triples
            .get(key)
            .ok_or_else(|| Error::MissingData(format!("maps for triple sector {}", self.key_name(key))))
    }

    pub fn sigma(&self, key: &SectorKey) -> Result<&Edge> {
        self.sigma
            .get(key)
            .ok_or_else(|| Error::MissingData(format!("involution data for {}", self.key_name(key))))
    }

    /// Normal bundle of the component in `X`; zero when none was supplied.
    pub fn normal(&self, key: &SectorKey) -> Result<KClass> {
        let alg = self.sector(key)?;
        Ok(self.normal.get(key).cloned().unwrap_or_else(|| KClass::zero(alg)))
    }

    /// Eigen data of `g` on the normal bundle of `X^g`. The untwisted sector
    /// has none; a missing entry elsewhere is an error.
    pub fn eigen(&self, key: &SectorKey) -> Result<&[EigenEntry]> {
        if key.g().is_identity() {
            return Ok(&[]);
        }
        self.eigen
            .get(key)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingData(format!("eigen data for {}", self.key_name(key))))
    }

    /// `h^*` on one component of `I_G(X)`.
    pub fn action(&self, h: Element, key: &SectorKey) -> Result<&Edge> {
        self.gaction
            .get(&h)
            .and_then(|m| m.get(key))
            .ok_or_else(|| Error::MissingData(format!("action of {} on {}", self.group.name(h), self.key_name(key))))
    }

    pub fn key_name(&self, key: &SectorKey) -> String {
        let elems: Vec<&str> = key.elements.iter().map(|g| self.group.name(*g)).collect();
        format!("({})#{}", elems.join(","), key.component)
    }

    pub fn double_keys(&self) -> impl Iterator<Item = &SectorKey> {
        self.doubles.keys()
    }

    pub fn triple_keys(&self) -> impl Iterator<Item = &SectorKey> {
        self.triples.keys()
    }
}
