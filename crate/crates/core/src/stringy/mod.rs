//! Ages, logarithmic classes, obstruction bundles and the stringy products
//! on the Chow side and on the K side in Chern-character coordinates.

mod invariant;
mod ring;

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::algebra::AlgebraElement;
use crate::datum::{OrbifoldDatum, SectorKey};
use crate::error::{Error, Result};
use crate::kclass::KClass;
use crate::rational::Rational;

pub use invariant::InvariantRing;
pub(crate) use ring::apply_matrix;
pub use ring::{ProductTable, StringyDegree, StringyElement, StringyRing};

/// Which product is computed. `K` works with Chern-character images of
/// K-classes, so both theories share the same underlying vector spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    Chow,
    K,
}

impl Theory {
    pub const ALL: [Theory; 2] = [Theory::Chow, Theory::K];

    pub fn name(self) -> &'static str {
        match self {
            Theory::Chow => "chow",
            Theory::K => "k",
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chow" => Ok(Theory::Chow),
            "k" | "ktheory" | "ktheory-ch" => Ok(Theory::K),
            other => Err(Error::TheoryMismatch(format!("unknown theory {other:?}"))),
        }
    }
}

/// `sum_k alpha_k [W_k]`: the eigenlines of `g` weighted by their angles.
pub fn im_class(d: &OrbifoldDatum, key: &SectorKey) -> Result<KClass> {
    let alg = d.sector(key)?;
    let mut out = KClass::zero(alg);
    for e in d.eigen(key)? {
        out = out.add(&e.lines.scale(&e.alpha))?;
    }
    Ok(out)
}

/// Age of `g` on one component of `X^g`: the rank of its logarithmic class.
pub fn age(d: &OrbifoldDatum, key: &SectorKey) -> Result<Rational> {
    let mut total = Rational::zero();
    for e in d.eigen(key)? {
        total += &e.alpha * e.lines.rank();
    }
    Ok(total)
}

/// Logarithmic class of `(g1 g2)^-1` pulled back to a double-sector component
/// through the product map and the involution.
pub fn im_inverse_product(d: &OrbifoldDatum, key: &SectorKey) -> Result<KClass> {
    let maps = d.double_maps(key)?;
    let s = d.sigma(&maps.mu.target)?;
    im_class(d, &s.target)?
        .pullback(&s.pullback)?
        .pullback(&maps.mu.pullback)
}

/// Obstruction class `e1^* Im_g1 + e2^* Im_g2 + (sigma mu)^* Im_(g1g2)^-1 - N`
/// on a component of `X^{g1,g2}`.
pub fn obstruction(d: &OrbifoldDatum, key: &SectorKey) -> Result<KClass> {
    let maps = d.double_maps(key)?;
    let first = im_class(d, &maps.e1.target)?.pullback(&maps.e1.pullback)?;
    let second = im_class(d, &maps.e2.target)?.pullback(&maps.e2.pullback)?;
    first
        .add(&second)?
        .add(&im_inverse_product(d, key)?)?
        .sub(&d.normal(key)?)
}

/// Normal bundle of a double-sector component inside `X^{g1 g2}`.
pub fn product_normal(d: &OrbifoldDatum, key: &SectorKey) -> Result<KClass> {
    let maps = d.double_maps(key)?;
    let ambient = d.normal(&maps.mu.target)?.pullback(&maps.mu.pullback)?;
    d.normal(key)?.sub(&ambient)
}

/// The class multiplied in before pushing forward along the product map:
/// `c_top(R)` for Chow, and `ch(lambda_-1 R^vee) td(-N_mu)` for K, the Todd
/// factor coming from Grothendieck-Riemann-Roch for the closed embedding.
pub fn product_kernel(d: &OrbifoldDatum, key: &SectorKey, theory: Theory) -> Result<AlgebraElement> {
    let r = obstruction(d, key)?;
    match theory {
        Theory::Chow => r.c_top(),
        Theory::K => r.euler_k()?.mul(&product_normal(d, key)?.neg().todd()?),
    }
}

/// Correction factor `td(-Im_g)` of the stringy Chern character.
pub fn chern_twist(d: &OrbifoldDatum, key: &SectorKey) -> Result<AlgebraElement> {
    im_class(d, key)?.neg().todd()
}
