use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{age, chern_twist, product_kernel, Theory};
use crate::algebra::{AlgebraElement, FiniteAlgebra};
use crate::datum::{OrbifoldDatum, SectorKey};
use crate::error::{Error, Result};
use crate::group::Element;
use crate::rational::{format_rational, Rational};

/// Age-shifted p-degree together with the n-degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringyDegree {
    pub p: Rational,
    pub n: u32,
}

impl StringyDegree {
    pub fn new(p: Rational, n: u32) -> Self {
        StringyDegree { p, n }
    }
}

impl std::ops::Add for &StringyDegree {
    type Output = StringyDegree;

    fn add(self, rhs: &StringyDegree) -> StringyDegree {
        StringyDegree::new(&self.p + &rhs.p, self.n + rhs.n)
    }
}

impl fmt::Display for StringyDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 0 {
            write!(f, "{}", format_rational(&self.p))
        } else {
            write!(f, "({}, {})", format_rational(&self.p), self.n)
        }
    }
}

/// Structure constants on a labelled, graded basis: `constants[i][j]` is the
/// coefficient vector of `b_i * b_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTable {
    pub labels: Vec<String>,
    pub degrees: Vec<StringyDegree>,
    pub odd: Vec<bool>,
    pub constants: Vec<Vec<Vec<Rational>>>,
}

impl ProductTable {
    /// Table of an ordinary algebra, graded by its own bidegrees.
    pub fn from_algebra(alg: &FiniteAlgebra) -> Self {
        let n = alg.size();
        let mut constants = vec![vec![vec![Rational::zero(); n]; n]; n];
        for (i, j, k, c) in alg.constants() {
            constants[i][j][k] = c.clone();
        }
        ProductTable {
            labels: (0..n).map(|i| alg.label(i).to_string()).collect(),
            degrees: (0..n)
                .map(|i| StringyDegree::new(alg.degree(i).p.clone(), alg.degree(i).n))
                .collect(),
            odd: (0..n).map(|i| alg.is_odd(i)).collect(),
            constants,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn product(&self, i: usize, j: usize) -> &[Rational] {
        &self.constants[i][j]
    }

    /// Bilinear extension of the table.
    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (o, c) in out.iter_mut().zip(&self.constants[i][j]) {
                    if !c.is_zero() {
                        *o += &ab * c;
                    }
                }
            }
        }
        out
    }

    pub fn basis(&self, i: usize) -> Vec<Rational> {
        (0..self.dim())
            .map(|k| if k == i { Rational::one() } else { Rational::zero() })
            .collect()
    }

    /// Graded dimensions by p-degree (all n-degrees together).
    pub fn graded_dims(&self) -> BTreeMap<Rational, usize> {
        let mut out = BTreeMap::new();
        for d in &self.degrees {
            *out.entry(d.p.clone()).or_insert(0) += 1;
        }
        out
    }

    /// Koszul sign for swapping basis elements `i` and `j`.
    pub fn swap_sign(&self, i: usize, j: usize) -> Rational {
        if self.odd[i] && self.odd[j] {
            -Rational::one()
        } else {
            Rational::one()
        }
    }

    pub fn format_vector(&self, v: &[Rational]) -> String {
        let mut out = String::new();
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c < &Rational::zero() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format_rational(&mag));
                out.push('*');
            }
            out.push_str(&self.labels[k]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// A vector over the basis of every component of the inertia variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringyElement {
    pub theory: Theory,
    pub coeffs: Vec<Rational>,
}

#[derive(Debug, Clone)]
struct Block {
    key: SectorKey,
    alg: Arc<FiniteAlgebra>,
    offset: usize,
}

/// The stringy ring of a datum in one theory, with its full product table.
#[derive(Debug, Clone)]
pub struct StringyRing {
    datum: Arc<OrbifoldDatum>,
    theory: Theory,
    blocks: Vec<Block>,
    index: BTreeMap<SectorKey, usize>,
    table: ProductTable,
    ages: Vec<Rational>,
}

impl StringyRing {
    pub fn new(datum: Arc<OrbifoldDatum>, theory: Theory) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut index = BTreeMap::new();
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        let mut odd = Vec::new();
        let mut ages = Vec::new();
        let mut offset = 0;
        for (key, alg) in datum.single_sectors() {
            let a = age(&datum, key)?;
            let gname = datum.group.name(key.g());
            for (i, b) in alg.basis().iter().enumerate() {
                labels.push(format!("{gname}#{}:{}", key.component, b.label));
                degrees.push(StringyDegree::new(&b.degree.p + &a, b.degree.n));
                odd.push(alg.is_odd(i));
            }
            index.insert(key.clone(), blocks.len());
            blocks.push(Block {
                key: key.clone(),
                alg: alg.clone(),
                offset,
            });
            ages.push(a);
            offset += alg.size();
        }
        let dim = offset;

        let present: Vec<Element> = {
            let mut v: Vec<Element> = blocks.iter().map(|b| b.key.g()).collect();
            v.dedup();
            v
        };
        for &g1 in &present {
            for &g2 in &present {
                if !datum.is_declared(&[g1, g2]) {
                    return Err(Error::MissingData(format!(
                        "double sector ({},{})",
                        datum.group.name(g1),
                        datum.group.name(g2)
                    )));
                }
            }
        }

        let mut constants = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        for key2 in datum.sectors.keys().filter(|k| k.level() == 2) {
            let maps = datum.double_maps(key2)?;
            let lookup = |k: &SectorKey| {
                index
                    .get(k)
                    .map(|&b| &blocks[b])
                    .ok_or_else(|| Error::MissingData(format!("sector {}", datum.key_name(k))))
            };
            let (b1, b2, b3) = (
                lookup(&maps.e1.target)?,
                lookup(&maps.e2.target)?,
                lookup(&maps.mu.target)?,
            );
            let kernel = product_kernel(&datum, key2, theory)?;
            let push = maps.mu.push()?;
            let left: Vec<AlgebraElement> = (0..b1.alg.size())
                .map(|a| maps.e1.pullback.apply(&AlgebraElement::basis(&b1.alg, a))?.mul(&kernel))
                .collect::<Result<_>>()?;
            let right: Vec<AlgebraElement> = (0..b2.alg.size())
                .map(|b| maps.e2.pullback.apply(&AlgebraElement::basis(&b2.alg, b)))
                .collect::<Result<_>>()?;
            for (a, l) in left.iter().enumerate() {
                if l.is_zero() {
                    continue;
                }
                for (b, r) in right.iter().enumerate() {
                    let z = push.apply(&l.mul(r)?)?;
                    let row = &mut constants[b1.offset + a][b2.offset + b];
                    for (k, c) in z.coeffs().iter().enumerate() {
                        if !c.is_zero() {
                            row[b3.offset + k] += c;
                        }
                    }
                }
            }
        }

        Ok(StringyRing {
            datum,
            theory,
            blocks,
            index,
            table: ProductTable {
                labels,
                degrees,
                odd,
                constants,
            },
            ages,
        })
    }

    pub fn datum(&self) -> &Arc<OrbifoldDatum> {
        &self.datum
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn table(&self) -> &ProductTable {
        &self.table
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn keys(&self) -> impl Iterator<Item = &SectorKey> {
        self.blocks.iter().map(|b| &b.key)
    }

    /// Range of basis indices belonging to a sector component.
    pub fn block(&self, key: &SectorKey) -> Result<std::ops::Range<usize>> {
        let b = self
            .index
            .get(key)
            .map(|&i| &self.blocks[i])
            .ok_or_else(|| Error::MissingData(format!("sector {}", self.datum.key_name(key))))?;
        Ok(b.offset..b.offset + b.alg.size())
    }

    /// Sector component and local basis index of a global basis index.
    pub fn locate(&self, i: usize) -> (&SectorKey, usize) {
        let b = self
            .blocks
            .iter()
            .rev()
            .find(|b| b.offset <= i)
            .expect("index in range");
        (&b.key, i - b.offset)
    }

    pub fn age_of(&self, key: &SectorKey) -> Option<&Rational> {
        self.index.get(key).map(|&i| &self.ages[i])
    }

    /// Untwisted unit class.
    pub fn identity_index(&self) -> usize {
        let b = &self.blocks[self.index[&self.datum.untwisted()]];
        b.offset + b.alg.unit_index()
    }

    pub fn element(&self, coeffs: Vec<Rational>) -> Result<StringyElement> {
        if coeffs.len() != self.dim() {
            return Err(Error::Degree(format!(
                "stringy element has {} coefficients, expected {}",
                coeffs.len(),
                self.dim()
            )));
        }
        Ok(StringyElement {
            theory: self.theory,
            coeffs,
        })
    }

    pub fn basis(&self, i: usize) -> StringyElement {
        StringyElement {
            theory: self.theory,
            coeffs: self.table.basis(i),
        }
    }

    pub fn basis_by_label(&self, label: &str) -> Option<StringyElement> {
        self.table.index_of(label).map(|i| self.basis(i))
    }

    /// Embeds a class living on one sector component.
    pub fn from_sector(&self, key: &SectorKey, x: &AlgebraElement) -> Result<StringyElement> {
        let range = self.block(key)?;
        let mut coeffs = vec![Rational::zero(); self.dim()];
        if x.coeffs().len() != range.len() {
            return Err(Error::OwnerMismatch {
                expected: self.datum.key_name(key),
                found: x.owner().name().to_string(),
            });
        }
        coeffs[range].clone_from_slice(x.coeffs());
        self.element(coeffs)
    }

    fn check(&self, x: &StringyElement) -> Result<()> {
        if x.theory != self.theory {
            return Err(Error::TheoryMismatch(format!(
                "{} element used in the {} ring",
                x.theory, self.theory
            )));
        }
        if x.coeffs.len() != self.dim() {
            return Err(Error::Degree("stringy element of the wrong length".into()));
        }
        Ok(())
    }

    pub fn mul(&self, x: &StringyElement, y: &StringyElement) -> Result<StringyElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(StringyElement {
            theory: self.theory,
            coeffs: self.table.mul(&x.coeffs, &y.coeffs),
        })
    }

    /// Matrix of `h^*` on the whole space; column `i` is the image of `b_i`.
    pub fn action_matrix(&self, h: Element) -> Result<Vec<Vec<Rational>>> {
        let n = self.dim();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for b in &self.blocks {
            let edge = self.datum.action(h, &b.key)?;
            let target = self.block(&edge.target)?;
            for (r, row) in edge.pullback.matrix().iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    m[target.start + r][b.offset + c] = x.clone();
                }
            }
        }
        Ok(m)
    }

    pub fn act(&self, h: Element, x: &StringyElement) -> Result<StringyElement> {
        self.check(x)?;
        let m = self.action_matrix(h)?;
        Ok(StringyElement {
            theory: self.theory,
            coeffs: apply_matrix(&m, &x.coeffs),
        })
    }

    /// Common stringy degree of the support, `None` when zero or mixed.
    pub fn degree(&self, x: &StringyElement) -> Option<StringyDegree> {
        let mut out: Option<&StringyDegree> = None;
        for (i, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match out {
                None => out = Some(&self.table.degrees[i]),
                Some(d) if *d != self.table.degrees[i] => return None,
                _ => {}
            }
        }
        out.cloned()
    }

    /// Stringy Chern character: multiplies each component by `td(-Im_g)`.
    /// Takes a K-side element to the Chow side.
    pub fn chern(&self, x: &StringyElement) -> Result<StringyElement> {
        if x.theory != Theory::K {
            return Err(Error::TheoryMismatch(
                "the stringy Chern character takes K-side elements".into(),
            ));
        }
        let mut coeffs = vec![Rational::zero(); self.dim()];
        for b in &self.blocks {
            let range = b.offset..b.offset + b.alg.size();
            let part = AlgebraElement::from_coeffs(&b.alg, x.coeffs[range.clone()].to_vec())?;
            if part.is_zero() {
                continue;
            }
            let twisted = part.mul(&chern_twist(&self.datum, &b.key)?)?;
            coeffs[range].clone_from_slice(twisted.coeffs());
        }
        Ok(StringyElement {
            theory: Theory::Chow,
            coeffs,
        })
    }

    /// Matrix of the stringy Chern character, column `i` the image of `b_i`.
    pub fn chern_matrix(&self) -> Result<Vec<Vec<Rational>>> {
        let n = self.dim();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for b in &self.blocks {
            let twist = chern_twist(&self.datum, &b.key)?;
            for a in 0..b.alg.size() {
                let img = AlgebraElement::basis(&b.alg, a).mul(&twist)?;
                for (k, c) in img.coeffs().iter().enumerate() {
                    m[b.offset + k][b.offset + a] = c.clone();
                }
            }
        }
        Ok(m)
    }
}

pub(crate) fn apply_matrix(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| {
            let mut acc = Rational::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            acc
        })
        .collect()
}
