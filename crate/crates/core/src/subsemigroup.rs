//! Inverse subsemigroups `S <= A`, built by closure or as the image of an
//! abstract semigroup under an assignment of its generators.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::algebra::InverseAlgebra;
use crate::error::{AlgebraError, InvariantViolation};
use crate::table::{CarrierTable, CayleyTable};

/// A homomorphism from an abstract table onto a subsemigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation<E> {
    pub table: CayleyTable,
    /// `images[i]` is the image of table element `i`.
    pub images: Vec<E>,
    pub injective: bool,
}

#[derive(Debug, Clone)]
pub struct Subsemigroup<'a, A: InverseAlgebra> {
    alg: &'a A,
    elements: Vec<A::Elem>,
    generators: Vec<A::Elem>,
    representation: Option<Representation<A::Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("`{0}` is not an element of the table")]
    UnknownGenerator(String),
    #[error("`{0}` is assigned twice")]
    DuplicateAssignment(String),
    #[error("the assigned generators do not generate `{0}`")]
    NotGenerating(String),
    #[error("assignment is not a homomorphism: {0}")]
    Inconsistent(String),
}

impl<'a, A: InverseAlgebra> Subsemigroup<'a, A> {
    /// The inverse subsemigroup generated by `generators`.
    pub fn close(alg: &'a A, generators: &[A::Elem]) -> Result<Self, AlgebraError> {
        if generators.is_empty() {
            return Err(AlgebraError::EmptyGenerators);
        }
        for g in generators {
            alg.check_member(g)?;
        }
        let mut letters: Vec<A::Elem> = Vec::new();
        for g in generators {
            for h in [g.clone(), alg.inverse(g)] {
                if !letters.contains(&h) {
                    letters.push(h);
                }
            }
        }
        let mut seen: BTreeSet<A::Elem> = letters.iter().cloned().collect();
        let mut frontier: Vec<A::Elem> = seen.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for h in &letters {
                    let y = alg.compose(x, h);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let mut gens = generators.to_vec();
        gens.dedup();
        Ok(Subsemigroup {
            alg,
            elements: seen.into_iter().collect(),
            generators: gens,
            representation: None,
        })
    }

    /// Wraps a set already known to be an inverse subsemigroup; closure is
    /// checked on every pair.
    pub fn from_elements(alg: &'a A, elements: &[A::Elem]) -> Result<Self, InvariantViolation> {
        let set: BTreeSet<A::Elem> = elements.iter().cloned().collect();
        if set.is_empty() {
            return Err(InvariantViolation::new("closure", "empty element set"));
        }
        for x in &set {
            if !alg.contains(x) {
                return Err(InvariantViolation::new(
                    "closure",
                    format!("{x:?} is not in the algebra"),
                ));
            }
            if !set.contains(&alg.inverse(x)) {
                return Err(InvariantViolation::new(
                    "closure",
                    format!("inverse of {} missing", alg.format(x)),
                ));
            }
            for y in &set {
                if !set.contains(&alg.compose(x, y)) {
                    return Err(InvariantViolation::new(
                        "closure",
                        format!("{} {} missing", alg.format(x), alg.format(y)),
                    ));
                }
            }
        }
        Ok(Subsemigroup {
            alg,
            elements: set.into_iter().collect(),
            generators: Vec::new(),
            representation: None,
        })
    }

    /// The image of `table` under the homomorphism determined by
    /// `assignment` (table label, element). The homomorphism property is
    /// checked on every product of the table.
    pub fn image_of(alg: &'a A, table: &CayleyTable, assignment: &[(String, A::Elem)]) -> Result<Self, ImageError> {
        let n = table.len();
        let mut images: Vec<Option<A::Elem>> = vec![None; n];
        let mut gens = Vec::new();
        for (label, e) in assignment {
            alg.check_member(e)?;
            let i = table
                .index_of(label)
                .ok_or_else(|| ImageError::UnknownGenerator(label.clone()))?;
            if gens.contains(&i) {
                return Err(ImageError::DuplicateAssignment(label.clone()));
            }
            gens.push(i);
            images[i as usize] = Some(e.clone());
        }
        if gens.is_empty() {
            return Err(AlgebraError::EmptyGenerators.into());
        }
        // Images of inverse letters, then everything reachable by words.
        for &g in &gens {
            let gi = table.inv(g);
            let want = alg.inverse(images[g as usize].as_ref().unwrap());
            match &images[gi as usize] {
                Some(have) if *have != want => {
                    return Err(ImageError::Inconsistent(format!(
                        "{} is inverse to {} in the table but their images are not mutually inverse",
                        table.label(gi),
                        table.label(g)
                    )))
                }
                _ => images[gi as usize] = Some(want),
            }
        }
        for (y, from) in table.words(&gens) {
            if let Some((x, h)) = from {
                let img = alg.compose(
                    images[x as usize].as_ref().unwrap(),
                    images[h as usize].as_ref().unwrap(),
                );
                images[y as usize].get_or_insert(img);
            }
        }
        if let Some(missing) = images.iter().position(Option::is_none) {
            return Err(ImageError::NotGenerating(table.label(missing as u32).to_string()));
        }
        let images: Vec<A::Elem> = images.into_iter().map(Option::unwrap).collect();
        for i in 0..n as u32 {
            if images[table.inv(i) as usize] != alg.inverse(&images[i as usize]) {
                return Err(ImageError::Inconsistent(format!(
                    "image of {}' is not the inverse of the image of {}",
                    table.label(i),
                    table.label(i)
                )));
            }
            for j in 0..n as u32 {
                let prod = alg.compose(&images[i as usize], &images[j as usize]);
                if images[table.mul(i, j) as usize] != prod {
                    return Err(ImageError::Inconsistent(format!(
                        "{} {} = {} in the table, but the images multiply to {}",
                        table.label(i),
                        table.label(j),
                        table.label(table.mul(i, j)),
                        alg.format(&prod)
                    )));
                }
            }
        }
        let elements: BTreeSet<A::Elem> = images.iter().cloned().collect();
        let injective = elements.len() == n;
        Ok(Subsemigroup {
            alg,
            elements: elements.into_iter().collect(),
            generators: gens.iter().map(|&g| images[g as usize].clone()).collect(),
            representation: Some(Representation {
                table: table.clone(),
                images,
                injective,
            }),
        })
    }

    pub fn algebra(&self) -> &'a A {
        self.alg
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> &[A::Elem] {
        &self.elements
    }

    pub fn generators(&self) -> &[A::Elem] {
        &self.generators
    }

    pub fn representation(&self) -> Option<&Representation<A::Elem>> {
        self.representation.as_ref()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &A::Elem) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// `S* = S \ {0}`
    pub fn nonzero(&self) -> impl Iterator<Item = &A::Elem> + '_ {
        self.elements.iter().filter(move |x| !self.alg.is_zero(x))
    }

    /// Elements every member of `S` is a product of: the generators and
    /// their inverses when known, otherwise all of `S`.
    pub fn letters(&self) -> Vec<A::Elem> {
        if self.generators.is_empty() {
            return self.elements.clone();
        }
        let mut out: Vec<A::Elem> = Vec::new();
        for g in &self.generators {
            for h in [g.clone(), self.alg.inverse(g)] {
                if !out.contains(&h) {
                    out.push(h);
                }
            }
        }
        out
    }

    /// Abstract table of `S`, labelled by element notation.
    pub fn cayley_table(&self) -> CayleyTable {
        let index: HashMap<&A::Elem, usize> = self.elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let labels = self.elements.iter().map(|e| self.alg.format(e)).collect();
        let rows = self
            .elements
            .iter()
            .map(|x| self.elements.iter().map(|y| index[&self.alg.compose(x, y)]).collect())
            .collect();
        let inv = self.elements.iter().map(|x| index[&self.alg.inverse(x)]).collect();
        CayleyTable::from_parts(labels, rows, inv).expect("a closed subsemigroup tabulates")
    }
}

/// Every distinct inverse subsemigroup generated by one or two elements of
/// the algebra, in canonical order of their sorted element lists.
pub fn generated_by_at_most_two<A: InverseAlgebra>(alg: &A) -> Result<Vec<Subsemigroup<'_, A>>, AlgebraError> {
    let table = CarrierTable::build(alg)?;
    let n = table.len() as u32;
    let mut seen: HashMap<Vec<u32>, (u32, u32)> = HashMap::new();
    for a in 0..n {
        for b in a..n {
            let key = table.closure(&[a, b]);
            seen.entry(key).or_insert((a, b));
        }
    }
    let mut found: Vec<(Vec<u32>, (u32, u32))> = seen.into_iter().collect();
    found.sort();
    Ok(found
        .into_iter()
        .map(|(idx, (a, b))| {
            let mut generators = vec![table.element(a).clone()];
            if a != b {
                generators.push(table.element(b).clone());
            }
            Subsemigroup {
                alg,
                elements: idx.iter().map(|&i| table.element(i).clone()).collect(),
                generators,
                representation: None,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{DualSymInv, SymInv};

    #[test]
    fn closure_of_brandt_pair() {
        let alg = DualSymInv::new(4).unwrap();
        let a = alg.parse("(12->13|34->24)").unwrap();
        let d = alg.parse("(1|234)").unwrap();
        let s = Subsemigroup::close(&alg, &[a.clone(), d.clone()]).unwrap();
        let mut expected = vec![
            alg.zero(),
            d,
            a.clone(),
            alg.inverse(&a),
            alg.compose(&a, &alg.inverse(&a)),
            alg.compose(&alg.inverse(&a), &a),
        ];
        expected.sort();
        assert_eq!(s.elements(), expected.as_slice());
    }

    #[test]
    fn closure_is_idempotent_and_monotone() {
        let alg = SymInv::new(3).unwrap();
        let f = alg.parse("[1->2, 2->3]").unwrap();
        let g = alg.parse("[1->1]").unwrap();
        let s = Subsemigroup::close(&alg, std::slice::from_ref(&f)).unwrap();
        let again = Subsemigroup::close(&alg, s.elements()).unwrap();
        assert_eq!(s.elements(), again.elements());
        let bigger = Subsemigroup::close(&alg, &[f, g]).unwrap();
        assert!(s.elements().iter().all(|x| bigger.contains(x)));
        let id = Subsemigroup::close(&alg, &[alg.identity()]).unwrap();
        assert_eq!(id.elements(), &[alg.identity()]);
    }

    #[test]
    fn empty_generators_rejected() {
        let alg = SymInv::new(2).unwrap();
        assert_eq!(
            Subsemigroup::close(&alg, &[]).unwrap_err(),
            AlgebraError::EmptyGenerators
        );
    }

    #[test]
    fn image_of_brandt() {
        let table = CayleyTable::load(include_str!("../data/b2.table")).unwrap();
        let alg = DualSymInv::new(5).unwrap();
        let alpha = alg.parse("(1->2|4->3|235->145)").unwrap();
        let s = Subsemigroup::image_of(&alg, &table, &[("a".into(), alpha)]).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.representation().unwrap().injective);

        let s0 = Subsemigroup::image_of(&alg, &table, &[("a".into(), alg.zero())]).unwrap();
        assert_eq!(s0.elements(), &[alg.zero()]);
        assert!(!s0.representation().unwrap().injective);
    }

    #[test]
    fn image_rejects_non_homomorphism() {
        let table = CayleyTable::load(include_str!("../data/b2.table")).unwrap();
        let alg = SymInv::new(2).unwrap();
        // a e = 0 in the table, but a transposition fixes the identity
        let swap = alg.parse("[1->2, 2->1]").unwrap();
        let err = Subsemigroup::image_of(&alg, &table, &[("a".into(), swap)]).unwrap_err();
        assert!(matches!(err, ImageError::Inconsistent(_)));
        let err = Subsemigroup::image_of(&alg, &table, &[("e".into(), alg.identity())]).unwrap_err();
        assert!(matches!(err, ImageError::NotGenerating(_)));
        let err = Subsemigroup::image_of(&alg, &table, &[("z".into(), alg.identity())]).unwrap_err();
        assert!(matches!(err, ImageError::UnknownGenerator(_)));
    }

    #[test]
    fn sweep_counts_are_stable() {
        let alg = SymInv::new(2).unwrap();
        let all = generated_by_at_most_two(&alg).unwrap();
        // every singleton-generated subsemigroup appears, and the whole monoid
        assert!(all.iter().any(|s| s.len() == 7));
        let keys: BTreeSet<Vec<_>> = all.iter().map(|s| s.elements().to_vec()).collect();
        assert_eq!(keys.len(), all.len());
    }
}
