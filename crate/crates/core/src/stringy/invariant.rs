use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::ring::{apply_matrix, ProductTable, StringyRing};
use super::StringyDegree;
use crate::error::{Error, Result};
use crate::linalg::rref;
use crate::rational::Rational;

/// The G-invariant part of a stringy ring, with a basis obtained by row
/// reducing the image of the averaging projector one homogeneous block at a
/// time.
#[derive(Debug, Clone)]
pub struct InvariantRing {
    projector: Vec<Vec<Rational>>,
    vectors: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    table: ProductTable,
}

impl InvariantRing {
    pub fn new(ring: &StringyRing) -> Result<Self> {
        let n = ring.dim();
        let group = &ring.datum().group;
        let mut projector = vec![vec![Rational::zero(); n]; n];
        for h in group.elements() {
            let m = ring.action_matrix(h)?;
            for (prow, mrow) in projector.iter_mut().zip(&m) {
                for (p, x) in prow.iter_mut().zip(mrow) {
                    if !x.is_zero() {
                        *p += x;
                    }
                }
            }
        }
        let scale = Rational::one() / Rational::from_integer((group.order() as i64).into());
        for row in projector.iter_mut() {
            for x in row.iter_mut() {
                *x *= &scale;
            }
        }

        let full = ring.table();
        let mut blocks: BTreeMap<(StringyDegree, bool), Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            blocks
                .entry((full.degrees[i].clone(), full.odd[i]))
                .or_default()
                .push(i);
        }
        let mut found: Vec<(usize, Vec<Rational>, StringyDegree, bool)> = Vec::new();
        for ((degree, odd), members) in blocks {
            let rows = members
                .iter()
                .map(|&i| projector.iter().map(|r| r[i].clone()).collect())
                .collect();
            let (rows, pivots) = rref(rows);
            for (row, p) in rows.into_iter().zip(pivots) {
                found.push((p, row, degree.clone(), odd));
            }
        }
        found.sort_by_key(|f| f.0);

        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        let mut odd = Vec::new();
        let mut vectors = Vec::new();
        let mut pivots = Vec::new();
        for (p, v, d, o) in found {
            let support = v.iter().filter(|x| !x.is_zero()).count();
            labels.push(if support == 1 {
                full.labels[p].clone()
            } else {
                format!("[{}]", full.labels[p])
            });
            degrees.push(d);
            odd.push(o);
            vectors.push(v);
            pivots.push(p);
        }

        let mut inv = InvariantRing {
            projector,
            vectors,
            pivots,
            table: ProductTable {
                labels,
                degrees,
                odd,
                constants: Vec::new(),
            },
        };
        let m = inv.vectors.len();
        let mut constants = vec![vec![Vec::new(); m]; m];
        for a in 0..m {
            for b in 0..m {
                let v = full.mul(&inv.vectors[a], &inv.vectors[b]);
                constants[a][b] = inv.coords(&v).ok_or_else(|| {
                    Error::MissingData(format!(
                        "product {} * {} leaves the invariant subspace",
                        inv.table.labels[a], inv.table.labels[b]
                    ))
                })?;
            }
        }
        inv.table.constants = constants;
        Ok(inv)
    }

    pub fn projector(&self) -> &[Vec<Rational>] {
        &self.projector
    }

    /// Basis vectors in the coordinates of the full stringy space.
    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn table(&self) -> &ProductTable {
        &self.table
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn project(&self, v: &[Rational]) -> Vec<Rational> {
        apply_matrix(&self.projector, v)
    }

    /// Coordinates of a full-space vector in the invariant basis, or `None`
    /// when it is not invariant.
    pub fn coords(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let c: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (x, u) in c.iter().zip(&self.vectors) {
            if x.is_zero() {
                continue;
            }
            for (r, y) in rest.iter_mut().zip(u) {
                if !y.is_zero() {
                    *r -= x * y;
                }
            }
        }
        rest.iter().all(Zero::is_zero).then_some(c)
    }

    /// Full-space vector of invariant coordinates.
    pub fn lift(&self, c: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.projector.len()];
        for (x, u) in c.iter().zip(&self.vectors) {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(u) {
                if !y.is_zero() {
                    *o += x * y;
                }
            }
        }
        out
    }
}
