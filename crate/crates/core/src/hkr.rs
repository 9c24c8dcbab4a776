//! Comparison of an orbifold (invariant) ring with a resolution-side algebra:
//! graded dimensions, a candidate linear map with unknown scalars on some
//! generators, and exact solving for the squares of those scalars.
//!
//! A scalable generator `b_i` maps to `s_i * m_i`. Only `v_i = s_i^2` is ever
//! represented; the scalars themselves are treated as formally independent,
//! so every identity is required coefficientwise in the square-free
//! monomials of the `s_i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::datum::schema::ResolutionImage;
use crate::datum::SkeletonDoc;
use crate::error::{Error, Result};
use crate::linalg::{determinant, solve, Solution};
use crate::rational::{format_rational, Rational};
use crate::stringy::{ProductTable, StringyDegree};

pub fn graded_dims(t: &ProductTable) -> BTreeMap<StringyDegree, usize> {
    let mut out = BTreeMap::new();
    for d in &t.degrees {
        *out.entry(d.clone()).or_insert(0) += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimComparison {
    pub left: BTreeMap<StringyDegree, usize>,
    pub right: BTreeMap<StringyDegree, usize>,
}

impl DimComparison {
    /// Degrees where the two sides differ, in increasing order.
    pub fn mismatches(&self) -> Vec<StringyDegree> {
        let degrees: BTreeSet<&StringyDegree> = self.left.keys().chain(self.right.keys()).collect();
        degrees
            .into_iter()
            .filter(|d| self.left.get(*d).unwrap_or(&0) != self.right.get(*d).unwrap_or(&0))
            .cloned()
            .collect()
    }

    pub fn is_match(&self) -> bool {
        self.mismatches().is_empty()
    }

    pub fn swapped(&self) -> DimComparison {
        DimComparison {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

impl fmt::Display for DimComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degrees: BTreeSet<&StringyDegree> = self.left.keys().chain(self.right.keys()).collect();
        let rows: Vec<[String; 3]> = degrees
            .into_iter()
            .map(|d| {
                [
                    d.to_string(),
                    self.left.get(d).unwrap_or(&0).to_string(),
                    self.right.get(d).unwrap_or(&0).to_string(),
                ]
            })
            .collect();
        let w = rows.iter().map(|r| r[0].len()).max().unwrap_or(0).max("degree".len());
        writeln!(f, "{:<w$}  {:>8}  {:>10}", "degree", "orbifold", "resolution")?;
        for r in rows {
            writeln!(f, "{:<w$}  {:>8}  {:>10}", r[0], r[1], r[2])?;
        }
        Ok(())
    }
}

pub fn compare_graded_dims(orbifold: &ProductTable, resolution: &ProductTable) -> DimComparison {
    DimComparison {
        left: graded_dims(orbifold),
        right: graded_dims(resolution),
    }
}

/// Linear map from the orbifold basis to the resolution basis, with a set
/// of generators carrying an unknown scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoCandidate {
    /// `images[i]` holds the resolution coordinates of the image of `b_i`.
    pub images: Vec<Vec<Rational>>,
    pub scalable: Vec<bool>,
}

impl IsoCandidate {
    /// Identity map of a table onto itself, nothing scalable.
    pub fn identity(t: &ProductTable) -> Self {
        IsoCandidate {
            images: (0..t.dim()).map(|i| t.basis(i)).collect(),
            scalable: vec![false; t.dim()],
        }
    }

    pub fn from_skeleton(doc: &SkeletonDoc, orbifold: &ProductTable, resolution: &ProductTable) -> Result<Self> {
        let n = orbifold.dim();
        let mut images: Vec<Option<Vec<Rational>>> = vec![None; n];
        let lookup = |table: &ProductTable, label: &str, side: &str| {
            table
                .index_of(label)
                .ok_or_else(|| Error::MissingData(format!("no {side} basis element labelled {label:?}")))
        };
        for pair in &doc.pairs {
            let i = lookup(orbifold, &pair.orbifold, "orbifold")?;
            let mut v = vec![Rational::zero(); resolution.dim()];
            match &pair.resolution {
                ResolutionImage::Label(l) => v[lookup(resolution, l, "resolution")?] = Rational::one(),
                ResolutionImage::Combination(terms) => {
                    for (l, q) in terms {
                        v[lookup(resolution, l, "resolution")?] += &q.0;
                    }
                }
            }
            if images[i].replace(v).is_some() {
                return Err(Error::MissingData(format!("{:?} is paired twice", pair.orbifold)));
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::MissingData(format!("{:?} has no image", orbifold.labels[i]))))
            .collect::<Result<Vec<_>>>()?;
        let mut scalable = vec![false; n];
        for l in &doc.scalable {
            scalable[lookup(orbifold, l, "orbifold")?] = true;
        }
        let c = IsoCandidate { images, scalable };
        c.check_degrees(orbifold, resolution)?;
        Ok(c)
    }

    /// Matching by degree for resolutions of isolated quotient points:
    /// untwisted classes go to the resolution class with the same label when
    /// there is one, the rest are paired in basis order within each degree
    /// with untwisted classes first, and every twisted class is scalable.
    pub fn auto(orbifold: &ProductTable, resolution: &ProductTable) -> Result<Self> {
        let n = orbifold.dim();
        let untwisted = |label: &str| label.starts_with("e#") || label.starts_with("[e#");
        let short = |label: &str| label.split_once(':').map(|(_, b)| b.trim_end_matches(']').to_string());
        let mut target: Vec<Option<usize>> = vec![None; n];
        let mut used = vec![false; resolution.dim()];
        for i in 0..n {
            let l = &orbifold.labels[i];
            if !untwisted(l) {
                continue;
            }
            if let Some(k) = short(l).and_then(|s| resolution.index_of(&s)) {
                if !used[k] && resolution.degrees[k] == orbifold.degrees[i] {
                    target[i] = Some(k);
                    used[k] = true;
                }
            }
        }
        let mut rest: BTreeMap<StringyDegree, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        let mut order: Vec<usize> = (0..n).filter(|&i| target[i].is_none()).collect();
        order.sort_by_key(|&i| !untwisted(&orbifold.labels[i]));
        for i in order {
            rest.entry(orbifold.degrees[i].clone()).or_default().0.push(i);
        }
        for k in (0..resolution.dim()).filter(|&k| !used[k]) {
            rest.entry(resolution.degrees[k].clone()).or_default().1.push(k);
        }
        for (d, (orb, res)) in rest {
            if orb.len() != res.len() {
                return Err(Error::Degree(format!(
                    "cannot match degree {d}: {} orbifold classes against {} resolution classes",
                    orb.len(),
                    res.len()
                )));
            }
            for (i, k) in orb.into_iter().zip(res) {
                target[i] = Some(k);
            }
        }
        let images = target
            .iter()
            .map(|k| {
                let mut v = vec![Rational::zero(); resolution.dim()];
                v[k.expect("every class matched")] = Rational::one();
                v
            })
            .collect();
        let scalable = orbifold.labels.iter().map(|l| !untwisted(l)).collect();
        let c = IsoCandidate { images, scalable };
        c.check_degrees(orbifold, resolution)?;
        Ok(c)
    }

    pub fn check_degrees(&self, orbifold: &ProductTable, resolution: &ProductTable) -> Result<()> {
        if self.images.len() != orbifold.dim() || self.scalable.len() != orbifold.dim() {
            return Err(Error::MissingData("map size does not match the orbifold basis".into()));
        }
        for (i, v) in self.images.iter().enumerate() {
            if v.len() != resolution.dim() {
                return Err(Error::MissingData(format!(
                    "image of {} has the wrong length",
                    orbifold.labels[i]
                )));
            }
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero()
                    && (resolution.degrees[k] != orbifold.degrees[i] || resolution.odd[k] != orbifold.odd[i])
                {
                    return Err(Error::Degree(format!(
                        "map is not degree-preserving: {} (degree {}) has {} (degree {}) in its image",
                        orbifold.labels[i], orbifold.degrees[i], resolution.labels[k], resolution.degrees[k]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Orbifold indices of the scalable generators.
    pub fn unknowns(&self) -> Vec<usize> {
        (0..self.scalable.len()).filter(|&i| self.scalable[i]).collect()
    }

    pub fn is_bijective(&self) -> bool {
        let n = self.images.len();
        if self.images.iter().any(|v| v.len() != n) {
            return false;
        }
        !determinant(self.images.clone()).is_zero()
    }
}

/// One scalar condition `constant + sum coeffs[i] * s_i^2 = 0`: the
/// coefficient of `prod_{a in monomial} s_a` on one resolution basis element
/// in `phi(b_i * b_j) - phi(b_i) phi(b_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub pair: (usize, usize),
    pub component: usize,
    pub monomial: Vec<usize>,
    pub constant: Rational,
    pub coeffs: BTreeMap<usize, Rational>,
}

impl Equation {
    fn is_trivial(&self) -> bool {
        self.constant.is_zero() && self.coeffs.values().all(Zero::is_zero)
    }

    pub fn evaluate(&self, squares: &BTreeMap<usize, Rational>) -> Option<Rational> {
        let mut total = self.constant.clone();
        for (i, c) in &self.coeffs {
            total += c * squares.get(i)?;
        }
        Some(total)
    }

    pub fn describe(&self, orbifold: &ProductTable, resolution: &ProductTable) -> String {
        let (i, j) = self.pair;
        let mut s = format!("{} * {}", orbifold.labels[i], orbifold.labels[j]);
        if !self.monomial.is_empty() {
            let m: Vec<String> = self
                .monomial
                .iter()
                .map(|&a| format!("s[{}]", orbifold.labels[a]))
                .collect();
            s += &format!(", coefficient of {}", m.join(" "));
        }
        s += &format!(" on {}: ", resolution.labels[self.component]);
        let mut terms = vec![format_rational(&self.constant)];
        for (a, c) in &self.coeffs {
            if !c.is_zero() {
                terms.push(format!("{} s[{}]^2", format_rational(c), orbifold.labels[*a]));
            }
        }
        s + &terms.join(" + ") + " = 0"
    }
}

/// Constants and square coefficients per resolution basis element.
type Slot = (Vec<Rational>, Vec<BTreeMap<usize, Rational>>);

/// All nontrivial scalar conditions for `phi` to be multiplicative on the
/// basis pair `(i, j)`.
pub fn pair_equations(
    orbifold: &ProductTable,
    resolution: &ProductTable,
    c: &IsoCandidate,
    i: usize,
    j: usize,
) -> Vec<Equation> {
    let r = resolution.dim();
    let mut acc: BTreeMap<Vec<usize>, Slot> = BTreeMap::new();
    fn slot(acc: &mut BTreeMap<Vec<usize>, Slot>, m: Vec<usize>, r: usize) -> &mut Slot {
        acc.entry(m)
            .or_insert_with(|| (vec![Rational::zero(); r], vec![BTreeMap::new(); r]))
    }
    for (k, x) in orbifold.product(i, j).iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let m = if c.scalable[k] { vec![k] } else { Vec::new() };
        let e = slot(&mut acc, m, r);
        for (t, y) in c.images[k].iter().enumerate() {
            if !y.is_zero() {
                e.0[t] += x * y;
            }
        }
    }
    let product = resolution.mul(&c.images[i], &c.images[j]);
    if product.iter().any(|x| !x.is_zero()) {
        if i == j && c.scalable[i] {
            let e = slot(&mut acc, Vec::new(), r);
            for (t, y) in product.iter().enumerate() {
                if !y.is_zero() {
                    *e.1[t].entry(i).or_insert_with(Rational::zero) -= y;
                }
            }
        } else {
            let mut m: Vec<usize> = [i, j].into_iter().filter(|&a| c.scalable[a]).collect();
            m.sort_unstable();
            let e = slot(&mut acc, m, r);
            for (t, y) in product.iter().enumerate() {
                e.0[t] -= y;
            }
        }
    }
    let mut out = Vec::new();
    for (m, (constants, coeffs)) in acc {
        for (t, (constant, coeffs)) in constants.into_iter().zip(coeffs).enumerate() {
            let eq = Equation {
                pair: (i, j),
                component: t,
                monomial: m.clone(),
                constant,
                coeffs,
            };
            if !eq.is_trivial() {
                out.push(eq);
            }
        }
    }
    out
}

pub fn all_equations(orbifold: &ProductTable, resolution: &ProductTable, c: &IsoCandidate) -> Vec<Equation> {
    let n = orbifold.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.extend(pair_equations(orbifold, resolution, c, i, j));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport {
    pub pairs_checked: usize,
    /// First failing pair with the violated condition.
    pub witness: Option<((usize, usize), String)>,
    pub bijective: bool,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none() && self.bijective
    }
}

/// Checks `phi(x * y) = phi(x) phi(y)` on all basis pairs with the squares
/// of the scalars substituted.
pub fn check_iso(
    orbifold: &ProductTable,
    resolution: &ProductTable,
    c: &IsoCandidate,
    squares: &BTreeMap<usize, Rational>,
) -> Result<IsoReport> {
    c.check_degrees(orbifold, resolution)?;
    if let Some(&i) = c.unknowns().iter().find(|i| !squares.contains_key(i)) {
        return Err(Error::MissingData(format!(
            "no square given for {}",
            orbifold.labels[i]
        )));
    }
    let n = orbifold.dim();
    let mut witness = None;
    let mut pairs_checked = 0;
    'pairs: for i in 0..n {
        for j in 0..n {
            pairs_checked += 1;
            for eq in pair_equations(orbifold, resolution, c, i, j) {
                if !eq.evaluate(squares).is_some_and(|v| v.is_zero()) {
                    witness = Some(((i, j), eq.describe(orbifold, resolution)));
                    break 'pairs;
                }
            }
        }
    }
    let bijective = c.is_bijective() && squares.values().all(|v| !v.is_zero());
    Ok(IsoReport {
        pairs_checked,
        witness,
        bijective,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalings {
    /// The squares `s_i^2`, keyed by orbifold index.
    Unique(BTreeMap<usize, Rational>),
    Underdetermined {
        particular: BTreeMap<usize, Rational>,
        free: Vec<usize>,
    },
    Inconsistent(Equation),
}

/// Solves for the squares of the scalars. The conditions are linear in the
/// squares once every identity is split by square-free monomial.
pub fn solve_scalings(orbifold: &ProductTable, resolution: &ProductTable, c: &IsoCandidate) -> Result<Scalings> {
    c.check_degrees(orbifold, resolution)?;
    let unknowns = c.unknowns();
    let column: BTreeMap<usize, usize> = unknowns.iter().enumerate().map(|(col, &i)| (i, col)).collect();
    let equations = all_equations(orbifold, resolution, c);
    let a: Vec<Vec<Rational>> = equations
        .iter()
        .map(|eq| {
            let mut row = vec![Rational::zero(); unknowns.len()];
            for (i, x) in &eq.coeffs {
                row[column[i]] += x;
            }
            row
        })
        .collect();
    let b: Vec<Rational> = equations.iter().map(|eq| -eq.constant.clone()).collect();
    let keyed = |v: Vec<Rational>| unknowns.iter().copied().zip(v).collect::<BTreeMap<_, _>>();
    Ok(match solve(&a, &b, unknowns.len()) {
        Solution::Unique(v) => Scalings::Unique(keyed(v)),
        Solution::Underdetermined { particular, free } => Scalings::Underdetermined {
            particular: keyed(particular),
            free: free.into_iter().map(|f| unknowns[f]).collect(),
        },
        Solution::Inconsistent(e) => Scalings::Inconsistent(equations[e].clone()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Iso { squares: BTreeMap<String, String> },
    DimensionMismatch { degree: String },
    Inconsistent { equation: String },
    Underdetermined { free: Vec<String> },
    Degenerate { generator: String },
    NotIso { witness: String },
    DimsOnly,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Iso { squares } => {
                let values: BTreeSet<&String> = squares.values().collect();
                match values.len() {
                    0 => f.write_str("iso"),
                    1 => write!(f, "iso with s² = {}", values.into_iter().next().unwrap()),
                    _ => {
                        let parts: Vec<String> = squares.iter().map(|(l, v)| format!("s[{l}]² = {v}")).collect();
                        write!(f, "iso with {}", parts.join(", "))
                    }
                }
            }
            Verdict::DimensionMismatch { degree } => write!(f, "dimension mismatch at degree {degree}"),
            Verdict::Inconsistent { equation } => write!(f, "inconsistent: {equation}"),
            Verdict::Underdetermined { free } => write!(f, "underdetermined: free scalings for {}", free.join(", ")),
            Verdict::Degenerate { generator } => write!(f, "degenerate: s² = 0 for {generator}"),
            Verdict::NotIso { witness } => write!(f, "not an isomorphism: {witness}"),
            Verdict::DimsOnly => f.write_str("dimensions only"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HkrReport {
    pub dims: DimComparison,
    pub verdict: Verdict,
    pub pairs_checked: usize,
}

/// Dimension comparison followed, when a map is given and the dimensions
/// agree, by solving for the scalings and checking the resulting map.
pub fn compare(orbifold: &ProductTable, resolution: &ProductTable, map: Option<&IsoCandidate>) -> Result<HkrReport> {
    let dims = compare_graded_dims(orbifold, resolution);
    let report = |verdict, pairs_checked| HkrReport {
        dims: dims.clone(),
        verdict,
        pairs_checked,
    };
    if let Some(d) = dims.mismatches().first() {
        return Ok(report(Verdict::DimensionMismatch { degree: d.to_string() }, 0));
    }
    let Some(c) = map else {
        return Ok(report(Verdict::DimsOnly, 0));
    };
    let label = |i: usize| orbifold.labels[i].clone();
    let squares = match solve_scalings(orbifold, resolution, c)? {
        Scalings::Unique(s) => s,
        Scalings::Underdetermined { free, .. } => {
            return Ok(report(
                Verdict::Underdetermined {
                    free: free.into_iter().map(label).collect(),
                },
                0,
            ))
        }
        Scalings::Inconsistent(eq) => {
            return Ok(report(
                Verdict::Inconsistent {
                    equation: eq.describe(orbifold, resolution),
                },
                0,
            ))
        }
    };
    if let Some((&i, _)) = squares.iter().find(|(_, v)| v.is_zero()) {
        return Ok(report(Verdict::Degenerate { generator: label(i) }, 0));
    }
    let iso = check_iso(orbifold, resolution, c, &squares)?;
    let verdict = match (&iso.witness, iso.bijective) {
        (Some((_, w)), _) => Verdict::NotIso { witness: w.clone() },
        (None, false) => Verdict::NotIso {
            witness: "map is not bijective".into(),
        },
        (None, true) => Verdict::Iso {
            squares: squares.iter().map(|(&i, v)| (label(i), format_rational(v))).collect(),
        },
    };
    Ok(report(verdict, iso.pairs_checked))
}
