//! Exact-arithmetic engine for stringy and orbifold product rings of a
//! finite group acting on a smooth variety, presented by finite data.

pub mod algebra;
pub mod datum;
pub mod error;
pub mod group;
pub mod hkr;
pub mod kclass;
pub mod linalg;
pub mod rational;
pub mod stringy;
pub mod verify;

pub use algebra::{AlgebraElement, BasisElement, Bidegree, FiniteAlgebra, LinearMap, MapKind};
pub use datum::{OrbifoldDatum, SectorKey, ValidationReport};
pub use error::{Error, Result};
pub use group::{ConjugacyClass, Element, FiniteGroup};
pub use kclass::KClass;
pub use rational::{parse_rational, Rational};
pub use stringy::{InvariantRing, ProductTable, StringyDegree, StringyElement, StringyRing, Theory};
