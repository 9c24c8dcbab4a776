//! Finite bigraded commutative algebras over the rationals, given by structure
//! constants, and the linear maps (pullbacks, pushforwards) between them.
//!
//! Every basis element carries a bidegree `(p, n)`: `p` is the codimension
//! (rational, so that odd cohomology can sit in half-integer degree) and `n`
//! the higher degree. Commutativity holds up to the sign `(-1)^(s_i s_j)`
//! where `s` is a per-basis parity bit, by default `n mod 2`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bidegree {
    pub p: Rational,
    pub n: u32,
}

impl Bidegree {
    pub fn new(p: Rational, n: u32) -> Self {
        Bidegree { p, n }
    }

    pub fn zero() -> Self {
        Bidegree::new(Rational::zero(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.n == 0
    }
}

impl Add for &Bidegree {
    type Output = Bidegree;

    fn add(self, rhs: &Bidegree) -> Bidegree {
        Bidegree::new(&self.p + &rhs.p, self.n + rhs.n)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.p), self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub degree: Bidegree,
    pub odd: bool,
}

impl BasisElement {
    /// Basis element with the default parity `n mod 2`.
    pub fn new(label: impl Into<String>, p: Rational, n: u32) -> Self {
        BasisElement {
            label: label.into(),
            degree: Bidegree::new(p, n),
            odd: n % 2 == 1,
        }
    }

    pub fn with_parity(mut self, odd: bool) -> Self {
        self.odd = odd;
        self
    }
}

type Sparse = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    basis: Vec<BasisElement>,
    products: Vec<Vec<Sparse>>,
    unit: usize,
    dim: u32,
}

impl FiniteAlgebra {
    /// Builds and validates an algebra from sparse structure constants
    /// `(i, j, k, c)` meaning `e_i * e_j` has coefficient `c` on `e_k`.
    ///
    /// Checks: unit in bidegree (0,0) acting as a two-sided identity,
    /// bidegree and parity additivity, the sign rule, vanishing above `dim`,
    /// and associativity on every basis triple.
    pub fn new(
        name: impl Into<String>,
        dim: u32,
        basis: Vec<BasisElement>,
        unit: usize,
        constants: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self> {
        let name = name.into();
        let fail = |message: String| Error::InvalidAlgebra {
            algebra: name.clone(),
            message,
        };
        let size = basis.len();
        if size == 0 {
            return Err(fail("empty basis".into()));
        }
        for (i, b) in basis.iter().enumerate() {
            if basis[..i].iter().any(|c| c.label == b.label) {
                return Err(fail(format!("duplicate basis label {:?}", b.label)));
            }
            if b.degree.p.is_negative() {
                return Err(fail(format!("basis element {:?} has negative p-degree", b.label)));
            }
            if b.degree.p > int(dim as i64) {
                return Err(fail(format!(
                    "basis element {:?} has p-degree {} above the dimension {dim}",
                    b.label,
                    format_rational(&b.degree.p)
                )));
            }
        }
        if unit >= size {
            return Err(fail(format!("unit index {unit} out of range")));
        }
        if !basis[unit].degree.is_zero() || basis[unit].odd {
            return Err(fail(format!(
                "unit {:?} is not an even element of bidegree (0, 0)",
                basis[unit].label
            )));
        }

        let mut products: Vec<Vec<Sparse>> = vec![vec![Vec::new(); size]; size];
        for (i, j, k, c) in constants {
            if i >= size || j >= size || k >= size {
                return Err(fail(format!("structure constant index ({i}, {j}, {k}) out of range")));
            }
            if c.is_zero() {
                continue;
            }
            let entry = &mut products[i][j];
            if entry.iter().any(|(kk, _)| *kk == k) {
                return Err(fail(format!(
                    "structure constant for {} * {} -> {} given twice",
                    basis[i].label, basis[j].label, basis[k].label
                )));
            }
            let expected = &basis[i].degree + &basis[j].degree;
            if basis[k].degree != expected {
                return Err(fail(format!(
                    "product {} * {} has a term on {} of bidegree {}, expected {}",
                    basis[i].label, basis[j].label, basis[k].label, basis[k].degree, expected
                )));
            }
            if basis[k].odd != (basis[i].odd ^ basis[j].odd) {
                return Err(fail(format!(
                    "product {} * {} has a term on {} of the wrong parity",
                    basis[i].label, basis[j].label, basis[k].label
                )));
            }
            entry.push((k, c));
        }
        for row in &mut products {
            for entry in row {
                entry.sort_by_key(|(k, _)| *k);
            }
        }
        let algebra = FiniteAlgebra {
            name: name.clone(),
            basis,
            products,
            unit,
            dim,
        };
        algebra.check_axioms().map_err(fail)?;
        Ok(algebra)
    }

    fn check_axioms(&self) -> std::result::Result<(), String> {
        let size = self.size();
        let label = |i: usize| self.basis[i].label.as_str();
        for j in 0..size {
            let expected: Sparse = vec![(j, Rational::one())];
            if self.products[self.unit][j] != expected || self.products[j][self.unit] != expected {
                return Err(format!("unit is not a two-sided identity on {}", label(j)));
            }
        }
        for i in 0..size {
            for j in i..size {
                let sign_odd = self.basis[i].odd && self.basis[j].odd;
                let lhs = &self.products[i][j];
                let rhs: Sparse = self.products[j][i]
                    .iter()
                    .map(|(k, c)| (*k, if sign_odd { -c } else { c.clone() }))
                    .collect();
                if *lhs != rhs {
                    return Err(format!("sign rule violated on basis pair ({}, {})", label(i), label(j)));
                }
            }
        }
        for i in 0..size {
            for j in 0..size {
                for k in 0..size {
                    let left = self.basis_product(i, j).mul_unchecked(&self.basis_vec(k));
                    let right = self.basis_vec(i).mul_unchecked(&self.basis_product(j, k));
                    if left != right {
                        return Err(format!(
                            "multiplication is not associative on ({}, {}, {})",
                            label(i),
                            label(j),
                            label(k)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn basis_vec(&self, i: usize) -> Coeffs<'_> {
        let mut v = vec![Rational::zero(); self.size()];
        v[i] = Rational::one();
        Coeffs { alg: self, v }
    }

    fn basis_product(&self, i: usize, j: usize) -> Coeffs<'_> {
        let mut v = vec![Rational::zero(); self.size()];
        for (k, c) in &self.products[i][j] {
            v[*k] = c.clone();
        }
        Coeffs { alg: self, v }
    }

    /// The one-dimensional algebra of a point.
    pub fn point() -> Self {
        FiniteAlgebra::new(
            "pt",
            0,
            vec![BasisElement::new("1", Rational::zero(), 0)],
            0,
            [(0, 0, 0, Rational::one())],
        )
        .expect("point algebra is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    pub fn degree(&self, i: usize) -> &Bidegree {
        &self.basis[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.basis[i].odd
    }

    /// Nonzero structure constants of `e_i * e_j`.
    pub fn product_terms(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.products[i][j]
    }

    /// All nonzero structure constants as `(i, j, k, c)`, in index order.
    pub fn constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> + '_ {
        self.products.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(j, terms)| terms.iter().map(move |(k, c)| (i, j, *k, c)))
        })
    }

    pub fn same(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// Dense coefficient vector borrowed against an algebra, for axiom checks
/// before the algebra is wrapped in an `Arc`.
struct Coeffs<'a> {
    alg: &'a FiniteAlgebra,
    v: Vec<Rational>,
}

impl Coeffs<'_> {
    fn mul_unchecked(&self, other: &Coeffs<'_>) -> Vec<Rational> {
        multiply_coeffs(self.alg, &self.v, &other.v)
    }
}

fn multiply_coeffs(alg: &FiniteAlgebra, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); alg.size()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let xy = x * y;
            for (k, c) in &alg.products[i][j] {
                out[*k] += &xy * c;
            }
        }
    }
    out
}

/// An element of a finite algebra.
///
/// The additive operators panic when the operands belong to different
/// algebras; `mul` reports the mismatch as an error.
#[derive(Clone)]
pub struct AlgebraElement {
    owner: Arc<FiniteAlgebra>,
    coeffs: Vec<Rational>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.owner.name, self)
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        FiniteAlgebra::same(&self.owner, &other.owner) && self.coeffs == other.coeffs
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn zero(owner: &Arc<FiniteAlgebra>) -> Self {
        AlgebraElement {
            coeffs: vec![Rational::zero(); owner.size()],
            owner: owner.clone(),
        }
    }

    pub fn one(owner: &Arc<FiniteAlgebra>) -> Self {
        Self::basis(owner, owner.unit)
    }

    pub fn basis(owner: &Arc<FiniteAlgebra>, i: usize) -> Self {
        let mut e = Self::zero(owner);
        e.coeffs[i] = Rational::one();
        e
    }

    pub fn from_coeffs(owner: &Arc<FiniteAlgebra>, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != owner.size() {
            return Err(Error::Degree(format!(
                "{} coefficients given for algebra {} of size {}",
                coeffs.len(),
                owner.name,
                owner.size()
            )));
        }
        Ok(AlgebraElement {
            owner: owner.clone(),
            coeffs,
        })
    }

    pub fn owner(&self) -> &Arc<FiniteAlgebra> {
        &self.owner
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_owner(&self, other: &AlgebraElement) -> Result<()> {
        if FiniteAlgebra::same(&self.owner, &other.owner) {
            Ok(())
        } else {
            Err(Error::OwnerMismatch {
                expected: self.owner.name.clone(),
                found: other.owner.name.clone(),
            })
        }
    }

    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_owner(other)?;
        Ok(AlgebraElement {
            coeffs: multiply_coeffs(&self.owner, &self.coeffs, &other.coeffs),
            owner: self.owner.clone(),
        })
    }

    pub fn scale(&self, q: &Rational) -> AlgebraElement {
        AlgebraElement {
            owner: self.owner.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, q: &Rational) {
        assert!(
            FiniteAlgebra::same(&self.owner, &other.owner),
            "adding elements of different algebras"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b * q;
            }
        }
    }

    /// Component in p-degree `p` (all n-degrees).
    pub fn p_part(&self, p: &Rational) -> AlgebraElement {
        AlgebraElement {
            owner: self.owner.clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if self.owner.basis[i].degree.p == *p {
                        c.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        }
    }

    /// Indices of nonzero coefficients.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    /// The common bidegree and parity of the support, or `None` if the
    /// element is zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<(Bidegree, bool)> {
        let mut it = self.support();
        let first = it.next()?;
        let b = &self.owner.basis[first];
        for i in it {
            let c = &self.owner.basis[i];
            if c.degree != b.degree || c.odd != b.odd {
                return None;
            }
        }
        Some((b.degree.clone(), b.odd))
    }

    /// True when every nonzero coefficient sits in bidegree `(p, n)`.
    pub fn is_pure(&self, p: &Rational, n: u32) -> bool {
        self.support()
            .all(|i| self.owner.basis[i].degree.p == *p && self.owner.basis[i].degree.n == n)
    }

    /// Evaluates `sum_k series[k] * self^k`. `self` must have no component
    /// in p-degree 0, so powers beyond the algebra dimension vanish.
    pub fn eval_series(&self, series: &[Rational]) -> AlgebraElement {
        let mut out = AlgebraElement::zero(&self.owner);
        let mut power = AlgebraElement::one(&self.owner);
        for (k, a) in series.iter().enumerate() {
            if k > 0 {
                power = power.mul(self).expect("same owner");
            }
            if power.is_zero() {
                break;
            }
            if !a.is_zero() {
                out.add_scaled(&power, a);
            }
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.support() {
            let c = &self.coeffs[i];
            let label = &self.owner.basis[i].label;
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "{label}")?;
            } else {
                write!(f, "{}*{label}", format_rational(&mag))?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        self.scale(&-Rational::one())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Pullback,
    Pushforward,
}

/// A linear map between two finite algebras. The matrix has one row per
/// basis element of `target` and one column per basis element of `source`.
///
/// For a morphism `f: Y -> Z`, the pullback `f^*` has source `CH(Z)` and
/// target `CH(Y)`; the pushforward `f_*` has source `CH(Y)`, target `CH(Z)`
/// and raises p-degree by `degree_shift = dim Z - dim Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    source: Arc<FiniteAlgebra>,
    target: Arc<FiniteAlgebra>,
    matrix: Vec<Vec<Rational>>,
    kind: MapKind,
    degree_shift: i64,
}

impl LinearMap {
    pub fn new(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        matrix: Vec<Vec<Rational>>,
        kind: MapKind,
    ) -> Result<Self> {
        if matrix.len() != target.size() || matrix.iter().any(|r| r.len() != source.size()) {
            return Err(Error::Degree(format!(
                "matrix for a map {} -> {} must be {}x{}",
                source.name,
                target.name,
                target.size(),
                source.size()
            )));
        }
        let degree_shift = match kind {
            MapKind::Pullback => 0,
            MapKind::Pushforward => target.dim as i64 - source.dim as i64,
        };
        if degree_shift < 0 {
            return Err(Error::Degree(format!(
                "pushforward {} -> {} lowers dimension",
                source.name, target.name
            )));
        }
        Ok(LinearMap {
            source,
            target,
            matrix,
            kind,
            degree_shift,
        })
    }

    pub fn identity(alg: &Arc<FiniteAlgebra>, kind: MapKind) -> Self {
        let n = alg.size();
        let matrix = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if r == c { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        LinearMap::new(alg.clone(), alg.clone(), matrix, kind).expect("square identity")
    }

    pub fn source(&self) -> &Arc<FiniteAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteAlgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn degree_shift(&self) -> i64 {
        self.degree_shift
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if !FiniteAlgebra::same(&self.source, &a.owner) {
            return Err(Error::OwnerMismatch {
                expected: self.source.name.clone(),
                found: a.owner.name.clone(),
            });
        }
        let mut out = vec![Rational::zero(); self.target.size()];
        for (j, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (row, o) in self.matrix.iter().zip(out.iter_mut()) {
                if !row[j].is_zero() {
                    *o += &row[j] * x;
                }
            }
        }
        Ok(AlgebraElement {
            owner: self.target.clone(),
            coeffs: out,
        })
    }

    /// `next ∘ self` as a linear map; the result keeps `self`'s kind.
    pub fn then(&self, next: &LinearMap) -> Result<LinearMap> {
        if !FiniteAlgebra::same(&self.target, &next.source) {
            return Err(Error::OwnerMismatch {
                expected: next.source.name.clone(),
                found: self.target.name.clone(),
            });
        }
        let matrix = (0..next.target.size())
            .map(|r| {
                (0..self.source.size())
                    .map(|c| {
                        let mut acc = Rational::zero();
                        for (m, x) in next.matrix[r].iter().enumerate() {
                            if !x.is_zero() && !self.matrix[m][c].is_zero() {
                                acc += x * &self.matrix[m][c];
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let mut out = LinearMap::new(self.source.clone(), next.target.clone(), matrix, self.kind)?;
        if self.kind == MapKind::Pushforward {
            out.degree_shift = self.degree_shift + next.degree_shift;
        }
        Ok(out)
    }

    /// Same matrix and endpoints, ignoring kind.
    pub fn same_matrix(&self, other: &LinearMap) -> bool {
        FiniteAlgebra::same(&self.source, &other.source)
            && FiniteAlgebra::same(&self.target, &other.target)
            && self.matrix == other.matrix
    }

    fn column(&self, j: usize) -> AlgebraElement {
        AlgebraElement {
            owner: self.target.clone(),
            coeffs: self.matrix.iter().map(|r| r[j].clone()).collect(),
        }
    }

    /// Ring-map axioms: unit to unit, bidegree and parity preserved,
    /// multiplicative on every basis pair.
    pub fn pullback_failures(&self) -> Vec<String> {
        let mut failures = Vec::new();
        let src = &self.source;
        if self.column(src.unit) != AlgebraElement::one(&self.target) {
            failures.push("pullback does not send unit to unit".to_string());
        }
        for j in 0..src.size() {
            let image = self.column(j);
            for i in image.support() {
                if self.target.basis[i].degree != src.basis[j].degree || self.target.basis[i].odd != src.basis[j].odd {
                    failures.push(format!(
                        "pullback of {} has a term on {} of different degree",
                        src.basis[j].label, self.target.basis[i].label
                    ));
                }
            }
        }
        let images: Vec<AlgebraElement> = (0..src.size()).map(|j| self.column(j)).collect();
        for i in 0..src.size() {
            for j in 0..src.size() {
                let prod = self
                    .apply(
                        &AlgebraElement::basis(src, i)
                            .mul(&AlgebraElement::basis(src, j))
                            .unwrap(),
                    )
                    .unwrap();
                let expected = images[i].mul(&images[j]).unwrap();
                if prod != expected {
                    failures.push(format!(
                        "pullback not multiplicative on ({}, {})",
                        src.basis[i].label, src.basis[j].label
                    ));
                }
            }
        }
        failures
    }

    /// Pushforward degree axiom: p-degree raised by `degree_shift`, n-degree
    /// and parity preserved.
    pub fn pushforward_failures(&self) -> Vec<String> {
        let mut failures = Vec::new();
        let shift = int(self.degree_shift);
        for j in 0..self.source.size() {
            let sb = &self.source.basis[j];
            for i in self.column(j).support() {
                let tb = &self.target.basis[i];
                if tb.degree.p != &sb.degree.p + &shift || tb.degree.n != sb.degree.n || tb.odd != sb.odd {
                    failures.push(format!(
                        "pushforward of {} has a term on {} not in degree shifted by {}",
                        sb.label, tb.label, self.degree_shift
                    ));
                }
            }
        }
        failures
    }

    /// Projection formula `f_*(x * f^* y) = f_*(x) * y` on all basis pairs,
    /// with `self = f_*` and `pullback = f^*`.
    pub fn projection_formula_failures(&self, pullback: &LinearMap) -> Result<Vec<String>> {
        if !FiniteAlgebra::same(&self.source, &pullback.target) || !FiniteAlgebra::same(&self.target, &pullback.source)
        {
            return Err(Error::OwnerMismatch {
                expected: format!("{} <-> {}", self.source.name, self.target.name),
                found: format!("{} <-> {}", pullback.target.name, pullback.source.name),
            });
        }
        let mut failures = Vec::new();
        for i in 0..self.source.size() {
            let x = AlgebraElement::basis(&self.source, i);
            let fx = self.apply(&x)?;
            for j in 0..self.target.size() {
                let y = AlgebraElement::basis(&self.target, j);
                let lhs = self.apply(&x.mul(&pullback.apply(&y)?)?)?;
                let rhs = fx.mul(&y)?;
                if lhs != rhs {
                    failures.push(format!(
                        "projection formula fails on ({}, {}): {} != {}",
                        self.source.basis[i].label, self.target.basis[j].label, lhs, rhs
                    ));
                }
            }
        }
        Ok(failures)
    }
}
