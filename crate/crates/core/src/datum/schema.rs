//! Serialized form of corpus documents.
//!
//! All rationals are written as `"p/q"` strings (plain integers are also
//! accepted); matrices are row-major lists of rows, one row per basis element
//! of the map's target algebra, or the string `"identity"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub group: GroupDoc,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraDoc>,
    pub sectors: Vec<SectorDoc>,
    #[serde(default)]
    pub double_sectors: Vec<SectorDoc>,
    #[serde(default)]
    pub triple_sectors: Vec<SectorDoc>,
    #[serde(default)]
    pub correspondences: CorrespondenceDoc,
    #[serde(default)]
    pub normal: Vec<NormalDoc>,
    #[serde(default)]
    pub eigen: Vec<EigenDoc>,
    #[serde(default)]
    pub gaction: Vec<GActionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<AlgebraDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iso_skeleton: Option<SkeletonDoc>,
}

/// A group either as a full table (element 0 the identity) or as
/// permutation generators, each given as the list of images of `0..degree`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GroupDoc {
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    Permutations {
        permutations: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub dim: u32,
    pub basis: Vec<BasisDoc>,
    /// Label of the unit; defaults to `"1"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    /// `[a, b, c, coefficient]`: `a * b` has `coefficient` on `c`.
    pub products: Vec<(String, String, String, Q)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDoc {
    pub label: String,
    pub p: Q,
    #[serde(default)]
    pub n: u32,
    /// Parity bit; defaults to `n mod 2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorDoc {
    pub key: Vec<ElemRef>,
    #[serde(default)]
    pub component: usize,
    /// Name of an entry in `algebras`; absent when `empty` is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    /// Declares that this fixed locus is empty.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorRef {
    pub key: Vec<ElemRef>,
    #[serde(default)]
    pub component: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixDoc {
    Named(String),
    Dense(Vec<Vec<Q>>),
}

/// A map from a sector component to a component of another sector whose
/// key is implied by the context. `pullback` goes from the target's
/// algebra to the source's; `pushforward` the other way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    #[serde(default)]
    pub component: usize,
    pub pullback: MatrixDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pushforward: Option<MatrixDoc>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrespondenceDoc {
    #[serde(default)]
    pub sigma: Vec<SigmaDoc>,
    #[serde(default)]
    pub double: Vec<DoubleDoc>,
    #[serde(default)]
    pub triple: Vec<TripleDoc>,
}

/// The involution `X^g -> X^{g^-1}` on one component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaDoc {
    pub sector: SectorRef,
    #[serde(default)]
    pub component: usize,
    pub pullback: MatrixDoc,
}

/// Maps out of one component of `X^{g1,g2}`: `e1` to `X^{g1}`, `e2` to
/// `X^{g2}`, `mu` to `X^{g1 g2}` (with pushforward).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleDoc {
    pub sector: SectorRef,
    pub e1: EdgeDoc,
    pub e2: EdgeDoc,
    pub mu: EdgeDoc,
}

/// Maps out of one component of `X^{g1,g2,g3}`: `e12` to `X^{g1,g2}`,
/// `e23` to `X^{g2,g3}`, `mu12_3` to `X^{g1 g2, g3}` and `mu1_23` to
/// `X^{g1, g2 g3}` (the last two with pushforwards).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleDoc {
    pub sector: SectorRef,
    pub e12: EdgeDoc,
    pub e23: EdgeDoc,
    pub mu12_3: EdgeDoc,
    pub mu1_23: EdgeDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineDoc {
    /// Root as `label -> coefficient`; empty for the trivial line.
    #[serde(default)]
    pub root: BTreeMap<String, Q>,
    pub mult: Q,
}

/// Normal bundle of a sector component in `X`, split into lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalDoc {
    pub sector: SectorRef,
    pub lines: Vec<LineDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenEntryDoc {
    pub alpha: Q,
    pub lines: Vec<LineDoc>,
}

/// Eigen-decomposition of the normal bundle of `X^g` under `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenDoc {
    pub sector: SectorRef,
    pub entries: Vec<EigenEntryDoc>,
}

/// Pullback `h^*: CH(X^g) -> CH(X^{h^-1 g h})` for one component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GMapDoc {
    pub source: SectorRef,
    #[serde(default)]
    pub component: usize,
    pub pullback: MatrixDoc,
}

/// Action of one group element. `identity: true` means every component is
/// sent to the same-index component of the conjugate sector by the
/// identity matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GActionDoc {
    pub element: ElemRef,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub identity: bool,
    #[serde(default)]
    pub maps: Vec<GMapDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResolutionImage {
    Label(String),
    Combination(BTreeMap<String, Q>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    /// Label of a basis element of the orbifold (invariant) ring.
    pub orbifold: String,
    pub resolution: ResolutionImage,
}

/// Map skeleton: where each orbifold basis element goes, and which ones
/// carry an unknown scalar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonDoc {
    pub pairs: Vec<PairDoc>,
    #[serde(default)]
    pub scalable: Vec<String>,
}

/// Standalone file holding a resolution-side algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub resolution: AlgebraDoc,
}
