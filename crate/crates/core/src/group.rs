//! Finite groups given by multiplication tables, and the conjugation
//! combinatorics used to index sectors.
//!
//! Element `0` is always the identity. Groups built from permutations use the
//! composition convention `(s * t)(i) = s(t(i))`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Element(pub usize);

impl Element {
    pub const IDENTITY: Element = Element(0);

    pub fn index(self) -> usize {
        self.0
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: Element,
    pub members: BTreeSet<Element>,
}

impl ConjugacyClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl FiniteGroup {
    /// Builds a group from a full multiplication table, checking every axiom
    /// by enumeration.
    pub fn from_table(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::ElementOutOfRange(bad, n));
            }
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(Error::InvalidGroup(format!(
                    "element 0 is not a two-sided identity (fails on {g})"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "multiplication is not associative on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == 0 && table[h][g] == 0) {
                Some(h) => inverses.push(h),
                None => {
                    return Err(Error::InvalidGroup(format!("element {g} has no inverse")));
                }
            }
        }
        let names = match names {
            Some(names) => {
                if names.len() != n {
                    return Err(Error::InvalidGroup(format!(
                        "{} names given for a group of order {n}",
                        names.len()
                    )));
                }
                let unique: BTreeSet<_> = names.iter().collect();
                if unique.len() != n {
                    return Err(Error::InvalidGroup("element names are not unique".into()));
                }
                names
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(FiniteGroup { table, inverses, names })
    }

    /// Generates the permutation group spanned by `generators` (images of
    /// `0..degree`). Elements are ordered lexicographically by image list, so
    /// the identity comes first; names are cycle notation on `1..=degree`.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self> {
        let degree = generators.first().map_or(0, Vec::len);
        for (i, gen) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if gen.len() != degree {
                return Err(Error::InvalidGroup(format!(
                    "generator {i} has degree {}, expected {degree}",
                    gen.len()
                )));
            }
            for &x in gen {
                if x >= degree || seen[x] {
                    return Err(Error::InvalidGroup(format!(
                        "generator {i} is not a permutation of 0..{degree}"
                    )));
                }
                seen[x] = true;
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        found.insert(identity.clone());
        queue.push_back(identity);
        while let Some(p) = queue.pop_front() {
            for gen in generators {
                let q = compose(&p, gen);
                if found.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        let perms: Vec<Vec<usize>> = found.into_iter().collect();
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
        let table = perms
            .iter()
            .map(|s| perms.iter().map(|t| index(&compose(s, t))).collect())
            .collect();
        let names = perms.iter().map(|p| cycle_notation(p)).collect();
        FiniteGroup::from_table(table, Some(names))
    }

    /// The cyclic group of order `n`, element `k` standing for `t^k`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "t".to_string(),
                _ => format!("t{k}"),
            })
            .collect();
        FiniteGroup::from_table(table, Some(names)).expect("cyclic group table is valid")
    }

    /// The symmetric group on three letters.
    pub fn symmetric3() -> Self {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![0, 2, 1]]).expect("S3 generators are permutations")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(Element)
    }

    pub fn check(&self, g: Element) -> Result<Element> {
        if g.0 < self.order() {
            Ok(g)
        } else {
            Err(Error::ElementOutOfRange(g.0, self.order()))
        }
    }

    pub fn multiply(&self, g: Element, h: Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    /// Table lookup without range checks; callers hold valid elements.
    pub fn mul(&self, g: Element, h: Element) -> Element {
        Element(self.table[g.0][h.0])
    }

    pub fn inverse(&self, g: Element) -> Element {
        Element(self.inverses[g.0])
    }

    /// `h g h^-1`.
    pub fn conjugate(&self, h: Element, g: Element) -> Element {
        self.mul(self.mul(h, g), self.inverse(h))
    }

    pub fn name(&self, g: Element) -> &str {
        &self.names[g.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element_by_name(&self, name: &str) -> Option<Element> {
        self.names.iter().position(|n| n == name).map(Element)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|g| self.elements().all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// Conjugacy classes, identity class first, the rest ordered by their
    /// smallest member.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let mut assigned = vec![false; self.order()];
        let mut classes = Vec::new();
        for g in self.elements() {
            if assigned[g.0] {
                continue;
            }
            let members: BTreeSet<Element> = self.elements().map(|h| self.conjugate(h, g)).collect();
            for m in &members {
                assigned[m.0] = true;
            }
            classes.push(ConjugacyClass {
                representative: g,
                members,
            });
        }
        classes
    }

    pub fn centralizer(&self, g: Element) -> BTreeSet<Element> {
        self.elements().filter(|&h| self.mul(h, g) == self.mul(g, h)).collect()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// `(s * t)(i) = s(t(i))`.
fn compose(s: &[usize], t: &[usize]) -> Vec<usize> {
    t.iter().map(|&i| s[i]).collect()
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric3()
    }

    #[test]
    fn identity_and_inverse_axioms() {
        let g = s3();
        for x in g.elements() {
            assert_eq!(g.multiply(Element::IDENTITY, x).unwrap(), x);
            assert_eq!(g.mul(x, g.inverse(x)), Element::IDENTITY);
        }
        assert_eq!(g.inverse(Element::IDENTITY), Element::IDENTITY);
    }

    #[test]
    fn permutation_composition_convention() {
        let g = s3();
        let p12 = g.element_by_name("(12)").unwrap();
        let p23 = g.element_by_name("(23)").unwrap();
        let c123 = g.element_by_name("(123)").unwrap();
        let c132 = g.element_by_name("(132)").unwrap();
        assert_eq!(g.mul(p12, p23), c123);
        assert_eq!(g.inverse(c123), c132);
        assert_eq!(g.name(Element::IDENTITY), "e");
    }

    #[test]
    fn cyclic_inverse() {
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.inverse(Element(1)), Element(3));
    }

    #[test]
    fn out_of_range_is_an_error() {
        let z2 = FiniteGroup::cyclic(2);
        assert!(matches!(
            z2.multiply(Element(2), Element(0)),
            Err(Error::ElementOutOfRange(2, 2))
        ));
    }

    #[test]
    fn conjugacy_classes_and_centralizers() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(z2.conjugacy_classes().len(), 2);
        let z3 = FiniteGroup::cyclic(3);
        assert!(z3.conjugacy_classes().iter().all(|c| c.len() == 1));

        let g = s3();
        let sizes: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        let p12 = g.element_by_name("(12)").unwrap();
        let expected: BTreeSet<_> = [Element::IDENTITY, p12].into_iter().collect();
        assert_eq!(g.centralizer(p12), expected);
        assert_eq!(g.centralizer(Element::IDENTITY).len(), 6);
        for x in z3.elements() {
            assert_eq!(z3.centralizer(x).len(), 3);
        }
    }

    #[test]
    fn orbit_stabilizer_and_partition() {
        for g in [s3(), FiniteGroup::cyclic(5)] {
            let classes = g.conjugacy_classes();
            let total: usize = classes.iter().map(ConjugacyClass::len).sum();
            assert_eq!(total, g.order());
            assert_eq!(classes[0].members.len(), 1);
            for class in &classes {
                for &x in &class.members {
                    let size = class.len();
                    assert_eq!(size * g.centralizer(x).len(), g.order());
                    for h in g.elements() {
                        assert!(class.members.contains(&g.conjugate(h, x)));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_non_groups() {
        let not_assoc = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 1]];
        assert!(FiniteGroup::from_table(not_assoc, None).is_err());
        let bad_identity = vec![vec![1, 0], vec![0, 1]];
        assert!(FiniteGroup::from_table(bad_identity, None).is_err());
        assert!(FiniteGroup::from_permutations(&[vec![0, 0, 1]]).is_err());
    }
}
