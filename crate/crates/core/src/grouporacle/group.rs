use std::collections::VecDeque;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::field::FiniteField;
use super::matrix::{self, Matrix};
use super::OracleError;
use crate::exactalg::numtheory::lcm;

/// A label in Z/A x Z/B, the quotient K of a Clifford setting.
pub type Label = [u32; 2];

/// A finite matrix group, enumerated.
///
/// Element 0 is the identity; the remaining elements appear in breadth-first
/// order from the generators (right multiplication), so the numbering is
/// stable across runs.
#[derive(Clone)]
pub struct GroupTable {
    field: Arc<FiniteField>,
    dim: usize,
    elements: Vec<Matrix>,
    index: FxHashMap<Matrix, u32>,
    inverse: Vec<u32>,
    generators: Vec<u32>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupTable(order {}, dim {}, {:?})", self.order(), self.dim, self.field)
    }
}

fn check_generator(field: &FiniteField, dim: usize, g: &[u32]) -> Result<(), OracleError> {
    if g.len() != dim * dim {
        return Err(OracleError::InvalidParameters(format!(
            "generator has {} entries, expected {}",
            g.len(),
            dim * dim
        )));
    }
    if g.iter().any(|&x| x >= field.size()) {
        return Err(OracleError::InvalidParameters("matrix entry outside the field".into()));
    }
    if matrix::det(field, dim, g) == 0 {
        return Err(OracleError::Singular);
    }
    Ok(())
}

/// Breadth-first closure of `gens`, carrying a homomorphism to Z/A x Z/B.
/// Each generator comes with its label; a revisited element with a different
/// label means the labels do not define a homomorphism.
pub fn generate_labeled(
    field: &Arc<FiniteField>,
    dim: usize,
    gens: &[(Matrix, Label)],
    moduli: [u32; 2],
    cap: usize,
) -> Result<(GroupTable, Vec<Label>), OracleError> {
    for (g, _) in gens {
        check_generator(field, dim, g)?;
    }
    let id = matrix::identity(dim);
    let mut elements = vec![id.clone()];
    let mut labels: Vec<Label> = vec![[0, 0]];
    let mut index = FxHashMap::default();
    index.insert(id, 0u32);
    let mut queue = VecDeque::from([0u32]);
    let mut buf = vec![0u32; dim * dim];
    while let Some(i) = queue.pop_front() {
        for (g, gl) in gens {
            matrix::mul_into(field, dim, &elements[i as usize], g, &mut buf);
            let li = labels[i as usize];
            let lab = [(li[0] + gl[0]) % moduli[0], (li[1] + gl[1]) % moduli[1]];
            match index.get(&buf) {
                Some(&j) => {
                    if labels[j as usize] != lab {
                        return Err(OracleError::InconsistentLabels);
                    }
                }
                None => {
                    if elements.len() >= cap {
                        return Err(OracleError::CapExceeded { what: "group order", limit: cap as u64 });
                    }
                    let j = elements.len() as u32;
                    index.insert(buf.clone(), j);
                    elements.push(buf.clone());
                    labels.push(lab);
                    queue.push_back(j);
                }
            }
        }
    }
    let generators = gens.iter().map(|(g, _)| index[g]).collect();
    let table = GroupTable::finish(field.clone(), dim, elements, index, generators)?;
    Ok((table, labels))
}

/// Breadth-first closure of `gens`.
pub fn generate_group(
    field: &Arc<FiniteField>,
    dim: usize,
    gens: &[Matrix],
    cap: usize,
) -> Result<GroupTable, OracleError> {
    let labeled: Vec<(Matrix, Label)> = gens.iter().map(|g| (g.clone(), [0, 0])).collect();
    generate_labeled(field, dim, &labeled, [1, 1], cap).map(|(t, _)| t)
}

impl GroupTable {
    fn finish(
        field: Arc<FiniteField>,
        dim: usize,
        elements: Vec<Matrix>,
        index: FxHashMap<Matrix, u32>,
        generators: Vec<u32>,
    ) -> Result<Self, OracleError> {
        let mut inverse = Vec::with_capacity(elements.len());
        for e in &elements {
            let inv = matrix::inverse(&field, dim, e).ok_or(OracleError::Singular)?;
            let j = *index.get(&inv).ok_or(OracleError::NotClosed)?;
            inverse.push(j);
        }
        Ok(Self { field, dim, elements, index, inverse, generators })
    }

    /// Rebuild a table from a stored enumeration, keeping its numbering.
    /// Element 0 must be the identity and the set must be closed under
    /// inverses; products are not rechecked.
    pub fn from_enumeration(
        field: &Arc<FiniteField>,
        dim: usize,
        elements: Vec<Matrix>,
        generators: Vec<u32>,
    ) -> Result<Self, OracleError> {
        if elements.first() != Some(&matrix::identity(dim)) {
            return Err(OracleError::InvalidParameters("enumeration must start with the identity".into()));
        }
        let mut index = FxHashMap::default();
        for (i, e) in elements.iter().enumerate() {
            if e.len() != dim * dim || e.iter().any(|&x| x >= field.size()) {
                return Err(OracleError::InvalidParameters(format!("element {i} is not a {dim}x{dim} matrix")));
            }
            if index.insert(e.clone(), i as u32).is_some() {
                return Err(OracleError::InvalidParameters(format!("element {i} is repeated")));
            }
        }
        if generators.iter().any(|&g| g as usize >= elements.len()) {
            return Err(OracleError::InvalidParameters("generator index out of range".into()));
        }
        GroupTable::finish(field.clone(), dim, elements, index, generators)
    }

    /// The subgroup on a given element set. Generators are chosen greedily in
    /// the given order; the closure must reproduce the set exactly.
    pub fn from_elements(
        field: &Arc<FiniteField>,
        dim: usize,
        set: &[Matrix],
    ) -> Result<Self, OracleError> {
        let target: FxHashMap<&Matrix, ()> = set.iter().map(|m| (m, ())).collect();
        let mut gens: Vec<Matrix> = Vec::new();
        let mut current = generate_group(field, dim, &gens, set.len().max(1))?;
        for m in set {
            if current.index_of(m).is_some() {
                continue;
            }
            gens.push(m.clone());
            current = generate_group(field, dim, &gens, set.len() + 1)
                .map_err(|_| OracleError::NotClosed)?;
        }
        if current.order() != target.len() || current.elements.iter().any(|e| !target.contains_key(e)) {
            return Err(OracleError::NotClosed);
        }
        Ok(current)
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: u32) -> &Matrix {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn index_of(&self, m: &[u32]) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn inverse(&self, i: u32) -> u32 {
        self.inverse[i as usize]
    }

    pub fn mul(&self, i: u32, j: u32) -> u32 {
        let m = matrix::mul(&self.field, self.dim, &self.elements[i as usize], &self.elements[j as usize]);
        self.index[&m]
    }

    /// g x g^{-1}.
    pub fn conjugate(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inverse(g))
    }

    /// x y x^{-1} y^{-1}.
    pub fn commutator(&self, x: u32, y: u32) -> u32 {
        self.mul(self.mul(x, y), self.mul(self.inverse(x), self.inverse(y)))
    }

    pub fn power(&self, x: u32, k: u64) -> u32 {
        let (mut acc, mut base, mut k) = (0u32, x, k);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: u32) -> u64 {
        let (mut cur, mut k) = (x, 1u64);
        while cur != 0 {
            cur = self.mul(cur, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn det(&self, x: u32) -> u32 {
        matrix::det(&self.field, self.dim, &self.elements[x as usize])
    }
}

/// Conjugacy classes, numbered by their least element index (so class 0 is
/// the identity).
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    pub class_of: Vec<u32>,
    pub members: Vec<Vec<u32>>,
    /// Class of the inverses of each class.
    pub inverse: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn rep(&self, c: usize) -> u32 {
        self.members[c][0]
    }

    pub fn size(&self, c: usize) -> usize {
        self.members[c].len()
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self, g: &GroupTable) -> u64 {
        (0..self.count()).fold(1, |e, c| lcm(e, g.element_order(self.rep(c))))
    }
}

pub fn conjugacy_classes(g: &GroupTable) -> ConjugacyClasses {
    let n = g.order();
    let mut class_of = vec![u32::MAX; n];
    let mut members = Vec::new();
    if g.is_abelian() {
        for x in 0..n {
            class_of[x] = x as u32;
            members.push(vec![x as u32]);
        }
        let inverse = (0..n).map(|x| g.inverse(x as u32) as usize).collect();
        return ConjugacyClasses { class_of, members, inverse };
    }
    let gens = g.generators().to_vec();
    for x in 0..n as u32 {
        if class_of[x as usize] != u32::MAX {
            continue;
        }
        let c = members.len() as u32;
        let mut orbit = vec![x];
        class_of[x as usize] = c;
        let mut i = 0;
        while i < orbit.len() {
            let y = orbit[i];
            for &s in &gens {
                let z = g.conjugate(s, y);
                if class_of[z as usize] == u32::MAX {
                    class_of[z as usize] = c;
                    orbit.push(z);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        members.push(orbit);
    }
    let inverse = members.iter().map(|m| class_of[g.inverse(m[0]) as usize] as usize).collect();
    ConjugacyClasses { class_of, members, inverse }
}

#[cfg(test)]
mod tests {
    use super::super::field::make_field;
    use super::*;

    pub(crate) fn sl2_3() -> GroupTable {
        let f = make_field(3, 1).unwrap();
        generate_group(&f, 2, &[vec![1, 1, 0, 1], vec![1, 0, 1, 1]], 1000).unwrap()
    }

    #[test]
    fn enumeration_round_trip() {
        let sl = sl2_3();
        let back = GroupTable::from_enumeration(sl.field(), 2, sl.elements().to_vec(), sl.generators().to_vec()).unwrap();
        assert_eq!(back.elements(), sl.elements());
        assert_eq!((0..24).map(|i| back.inverse(i)).collect::<Vec<_>>(), (0..24).map(|i| sl.inverse(i)).collect::<Vec<_>>());
        let mut shuffled = sl.elements().to_vec();
        shuffled.swap(0, 1);
        assert!(GroupTable::from_enumeration(sl.field(), 2, shuffled, vec![]).is_err());
        let mut missing = sl.elements().to_vec();
        missing.pop();
        assert!(GroupTable::from_enumeration(sl.field(), 2, missing, vec![]).is_err());
    }

    #[test]
    fn documented_orders_and_classes() {
        let sl = sl2_3();
        assert_eq!(sl.order(), 24);
        assert_eq!(conjugacy_classes(&sl).count(), 7);
        let f = make_field(3, 1).unwrap();
        let gl = generate_group(&f, 2, &[vec![1, 1, 0, 1], vec![1, 0, 1, 1], vec![2, 0, 0, 1]], 1000)
            .unwrap();
        assert_eq!(gl.order(), 48);
        let cl = conjugacy_classes(&gl);
        assert_eq!(cl.count(), 8);
        assert_eq!(cl.members.iter().map(Vec::len).sum::<usize>(), 48);
        // abelian: one class per element
        let f5 = make_field(5, 1).unwrap();
        let t = generate_group(&f5, 2, &[vec![2, 0, 0, 3]], 100).unwrap();
        assert_eq!(t.order(), 4);
        assert_eq!(conjugacy_classes(&t).count(), 4);
    }

    #[test]
    fn cap_and_labels() {
        let f = make_field(5, 1).unwrap();
        let err = generate_group(&f, 2, &[vec![1, 1, 0, 1], vec![1, 0, 1, 1]], 50).unwrap_err();
        assert!(matches!(err, OracleError::CapExceeded { .. }));
        // the sign of a 2x2 permutation matrix is not a Z/3 label
        let swap = vec![0, 1, 1, 0];
        let err = generate_labeled(&f, 2, &[(swap.clone(), [1, 0])], [3, 1], 100).unwrap_err();
        assert_eq!(err, OracleError::InconsistentLabels);
        let (t, labels) = generate_labeled(&f, 2, &[(swap, [1, 0])], [2, 1], 100).unwrap();
        assert_eq!(t.order(), 2);
        assert_eq!(labels, vec![[0, 0], [1, 0]]);
        assert_eq!(generate_group(&f, 2, &[vec![1, 2, 2, 4]], 10).unwrap_err(), OracleError::Singular);
    }

    #[test]
    fn subgroup_from_elements() {
        let sl = sl2_3();
        let center: Vec<Matrix> =
            sl.elements().iter().filter(|m| m[1] == 0 && m[2] == 0 && m[0] == m[3]).cloned().collect();
        let z = GroupTable::from_elements(sl.field(), 2, &center).unwrap();
        assert_eq!(z.order(), 2);
        let not_closed = vec![sl.element(1).clone()];
        assert_eq!(GroupTable::from_elements(sl.field(), 2, &not_closed).unwrap_err(), OracleError::NotClosed);
    }
}
