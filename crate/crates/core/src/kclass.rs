//! Rational K-classes written as formal sums of line classes (Chern roots
//! with rational multiplicities), and the characteristic classes computed
//! from them: Chern character, Todd class, top Chern class and the
//! K-theoretic Euler class `ch(lambda_{-1}(E^vee))`.
//!
//! All series are evaluated in the nilpotent algebra of the owning sector:
//! a root sits in bidegree (1, 0), so its powers vanish beyond the sector
//! dimension and every series is a finite sum.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgebraElement, FiniteAlgebra, LinearMap};
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, is_integer, is_nonnegative_integer, Rational};

/// Truncated power series in one variable: coefficients of `t^0..t^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries(pub Vec<Rational>);

impl PowerSeries {
    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    fn zeros(order: usize) -> Self {
        PowerSeries(vec![Rational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.0[0] = Rational::one();
        s
    }

    /// `exp(t)`.
    pub fn exp_t(order: usize) -> Self {
        let mut s = Self::zeros(order);
        let mut fact = Rational::one();
        for k in 0..=order {
            if k > 0 {
                fact *= int(k as i64);
            }
            s.0[k] = fact.recip();
        }
        s
    }

    /// `1 - exp(-t)`.
    pub fn one_minus_exp_neg_t(order: usize) -> Self {
        let mut s = Self::zeros(order);
        let mut fact = Rational::one();
        for k in 1..=order {
            fact *= int(k as i64);
            let sign = if k % 2 == 1 { int(1) } else { int(-1) };
            s.0[k] = sign / &fact;
        }
        s
    }

    /// `t / (1 - exp(-t))`, the Todd series.
    pub fn todd(order: usize) -> Self {
        // (1 - e^{-t}) / t = sum_k (-1)^k t^k / (k+1)!
        let mut s = Self::zeros(order);
        let mut fact = Rational::one();
        for k in 0..=order {
            fact *= int(k as i64 + 1);
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            s.0[k] = sign / &fact;
        }
        s.inverse()
    }

    /// `1 + t`.
    pub fn one_plus_t(order: usize) -> Self {
        let mut s = Self::one(order);
        if order >= 1 {
            s.0[1] = Rational::one();
        }
        s
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        let mut out = Self::zeros(order);
        for (i, a) in self.0.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate().take(order + 1 - i) {
                out.0[i + j] += a * b;
            }
        }
        out
    }

    fn scale(&self, q: &Rational) -> PowerSeries {
        PowerSeries(self.0.iter().map(|c| c * q).collect())
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> PowerSeries {
        let order = self.order();
        let a0 = self.0[0].clone();
        assert!(!a0.is_zero(), "power series with zero constant term is not invertible");
        let mut out = Self::zeros(order);
        out.0[0] = a0.recip();
        for k in 1..=order {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &self.0[j] * &out.0[k - j];
            }
            out.0[k] = -acc / &a0;
        }
        out
    }

    /// `log(self)` for a series with constant term 1.
    pub fn log(&self) -> PowerSeries {
        assert!(self.0[0].is_one(), "log needs constant term 1");
        let order = self.order();
        let mut x = self.clone();
        x.0[0] = Rational::zero();
        let mut out = Self::zeros(order);
        let mut power = Self::one(order);
        for k in 1..=order {
            power = power.mul(&x);
            let sign = if k % 2 == 1 { int(1) } else { int(-1) };
            out = out.add(&power.scale(&(sign / int(k as i64))));
        }
        out
    }

    /// `exp(self)` for a series with constant term 0.
    pub fn exp(&self) -> PowerSeries {
        assert!(self.0[0].is_zero(), "exp needs constant term 0");
        let order = self.order();
        let mut out = Self::one(order);
        let mut power = Self::one(order);
        let mut fact = Rational::one();
        for k in 1..=order {
            power = power.mul(self);
            fact *= int(k as i64);
            out = out.add(&power.scale(&fact.recip()));
        }
        out
    }

    fn add(&self, other: &PowerSeries) -> PowerSeries {
        PowerSeries(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self^m` for a rational exponent, via `exp(m log self)`; the constant
    /// term must be 1.
    pub fn pow_rational(&self, m: &Rational) -> PowerSeries {
        if m.is_zero() {
            return Self::one(self.order());
        }
        self.log().scale(m).exp()
    }

    /// `self^m` for a nonnegative integer exponent.
    pub fn pow_int(&self, m: u64) -> PowerSeries {
        let mut out = Self::one(self.order());
        for _ in 0..m {
            out = out.mul(self);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Line {
    pub root: Vec<Rational>,
    pub mult: Rational,
}

/// A rational K-class on a sector in split form, kept canonical: equal roots
/// merged, zero multiplicities dropped, lines sorted by root.
#[derive(Clone)]
pub struct KClass {
    owner: Arc<FiniteAlgebra>,
    lines: Vec<Line>,
}

impl PartialEq for KClass {
    fn eq(&self, other: &Self) -> bool {
        FiniteAlgebra::same(&self.owner, &other.owner) && self.lines == other.lines
    }
}

impl Eq for KClass {}

impl fmt::Debug for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KClass[{}]{{{}}}", self.owner.name(), self)
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lines.is_empty() {
            return write!(f, "0");
        }
        for (i, line) in self.lines.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let root = AlgebraElement::from_coeffs(&self.owner, line.root.clone()).expect("root length matches owner");
            write!(f, "({root}, {})", format_rational(&line.mult))?;
        }
        Ok(())
    }
}

impl KClass {
    pub fn zero(owner: &Arc<FiniteAlgebra>) -> Self {
        KClass {
            owner: owner.clone(),
            lines: Vec::new(),
        }
    }

    /// Builds a class from `(root, multiplicity)` pairs. Roots must live in
    /// bidegree (1, 0) of `owner`.
    pub fn from_lines(
        owner: &Arc<FiniteAlgebra>,
        lines: impl IntoIterator<Item = (AlgebraElement, Rational)>,
    ) -> Result<Self> {
        let mut raw = Vec::new();
        for (root, mult) in lines {
            if !FiniteAlgebra::same(root.owner(), owner) {
                return Err(Error::OwnerMismatch {
                    expected: owner.name().to_string(),
                    found: root.owner().name().to_string(),
                });
            }
            if !root.is_pure(&int(1), 0) {
                return Err(Error::Degree(format!("root {root} is not in bidegree (1, 0)")));
            }
            raw.push(Line {
                root: root.into_coeffs(),
                mult,
            });
        }
        Ok(Self::canonical(owner, raw))
    }

    /// A single line bundle with root `root` and multiplicity 1.
    pub fn line(root: AlgebraElement) -> Result<Self> {
        let owner = root.owner().clone();
        Self::from_lines(&owner, [(root, Rational::one())])
    }

    /// `mult` copies of the trivial line.
    pub fn trivial(owner: &Arc<FiniteAlgebra>, mult: Rational) -> Self {
        Self::canonical(
            owner,
            vec![Line {
                root: vec![Rational::zero(); owner.size()],
                mult,
            }],
        )
    }

    fn canonical(owner: &Arc<FiniteAlgebra>, mut raw: Vec<Line>) -> Self {
        raw.sort_by(|a, b| a.root.cmp(&b.root));
        let mut lines: Vec<Line> = Vec::with_capacity(raw.len());
        for line in raw {
            match lines.last_mut() {
                Some(last) if last.root == line.root => last.mult += line.mult,
                _ => lines.push(line),
            }
        }
        lines.retain(|l| !l.mult.is_zero());
        KClass {
            owner: owner.clone(),
            lines,
        }
    }

    pub fn owner(&self) -> &Arc<FiniteAlgebra> {
        &self.owner
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn is_zero(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn root(&self, line: &Line) -> AlgebraElement {
        AlgebraElement::from_coeffs(&self.owner, line.root.clone()).expect("root length")
    }

    pub fn rank(&self) -> Rational {
        self.lines.iter().map(|l| l.mult.clone()).sum()
    }

    /// All multiplicities are nonnegative integers.
    pub fn is_honest(&self) -> bool {
        self.lines.iter().all(|l| is_nonnegative_integer(&l.mult))
    }

    pub fn scale(&self, q: &Rational) -> KClass {
        let raw = self
            .lines
            .iter()
            .map(|l| Line {
                root: l.root.clone(),
                mult: &l.mult * q,
            })
            .collect();
        Self::canonical(&self.owner, raw)
    }

    pub fn neg(&self) -> KClass {
        self.scale(&-Rational::one())
    }

    pub fn add(&self, other: &KClass) -> Result<KClass> {
        if !FiniteAlgebra::same(&self.owner, &other.owner) {
            return Err(Error::OwnerMismatch {
                expected: self.owner.name().to_string(),
                found: other.owner.name().to_string(),
            });
        }
        let raw = self.lines.iter().chain(&other.lines).cloned().collect();
        Ok(Self::canonical(&self.owner, raw))
    }

    pub fn sub(&self, other: &KClass) -> Result<KClass> {
        self.add(&other.neg())
    }

    /// Pulls every root back along a ring map whose source is `owner`.
    pub fn pullback(&self, map: &LinearMap) -> Result<KClass> {
        let raw = self
            .lines
            .iter()
            .map(|l| {
                let root = map.apply(&self.root(l))?;
                Ok(Line {
                    root: root.into_coeffs(),
                    mult: l.mult.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::canonical(map.target(), raw))
    }

    fn order(&self) -> usize {
        self.owner.dim() as usize
    }

    /// Product over lines of `series(root)^mult`, with `power` turning the
    /// one-variable series into its `mult`-th power.
    fn product_over_lines(&self, mut power: impl FnMut(&Rational) -> Result<PowerSeries>) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::one(&self.owner);
        for line in &self.lines {
            let series = power(&line.mult)?;
            let factor = self.root(line).eval_series(&series.0);
            out = out.mul(&factor)?;
        }
        Ok(out)
    }

    /// Chern character `sum_i mult_i exp(root_i)`, expanding each exponential
    /// to order `truncation` (at least the sector dimension).
    pub fn ch(&self, truncation: usize) -> Result<AlgebraElement> {
        if truncation < self.order() {
            return Err(Error::Degree(format!(
                "truncation {truncation} below sector dimension {}",
                self.order()
            )));
        }
        let exp = PowerSeries::exp_t(truncation);
        let mut out = AlgebraElement::zero(&self.owner);
        for line in &self.lines {
            out.add_scaled(&self.root(line).eval_series(&exp.0), &line.mult);
        }
        Ok(out)
    }

    /// Todd class `prod_i Q(root_i)^mult_i` with `Q(t) = t / (1 - e^-t)`.
    pub fn todd(&self) -> Result<AlgebraElement> {
        let q = PowerSeries::todd(self.order());
        self.product_over_lines(|m| Ok(q.pow_rational(m)))
    }

    /// Total Chern class `prod_i (1 + root_i)^mult_i`.
    pub fn total_chern(&self) -> Result<AlgebraElement> {
        let c = PowerSeries::one_plus_t(self.order());
        self.product_over_lines(|m| Ok(c.pow_rational(m)))
    }

    fn integer_rank(&self) -> Result<Rational> {
        let r = self.rank();
        if !is_integer(&r) || r.is_negative() {
            return Err(Error::NotHonest(format!(
                "rank {} of {self} is not a nonnegative integer",
                format_rational(&r)
            )));
        }
        Ok(r)
    }

    /// Top Chern class: the p-degree `rank` part of the total Chern class.
    pub fn c_top(&self) -> Result<AlgebraElement> {
        let r = self.integer_rank()?;
        Ok(self.total_chern()?.p_part(&r))
    }

    /// `ch(lambda_{-1}(E^vee)) = prod_i (1 - e^{-root_i})^mult_i`. Needs
    /// every merged multiplicity to be a nonnegative integer, since
    /// `1 - e^{-t}` is not invertible.
    pub fn euler_k(&self) -> Result<AlgebraElement> {
        self.integer_rank()?;
        let base = PowerSeries::one_minus_exp_neg_t(self.order());
        self.product_over_lines(|m| {
            if !is_nonnegative_integer(m) {
                return Err(Error::NotHonest(format!(
                    "line multiplicity {} in {self}",
                    format_rational(m)
                )));
            }
            let e: u64 = m
                .to_integer()
                .try_into()
                .map_err(|_| Error::NotHonest(format!("multiplicity {} too large", format_rational(m))))?;
            Ok(base.pow_int(e))
        })
    }
}
