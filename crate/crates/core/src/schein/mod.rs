//! Bounded products of projections, the supremum map `omega`, and
//! certificates that a product is a Schein sum.

mod equivalence;
mod theorems;

pub use equivalence::{equivalent, EquivalenceError, EquivalenceVerdict};
pub use theorems::{
    check_alternative, enumerate_alternatives, verify_theorem, Alternative, AlternativeOutcome, Clause, Status,
    Theorem, TheoremVerdict, VerifyContext,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{ehresmann_sup, sup_below, InverseAlgebra};
use crate::error::AlgebraError;
use crate::orbits::OrbitDecomposition;

/// A family `(t_i)` with an upper bound `u` for all of its entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedTuple<E> {
    entries: Vec<E>,
    bound: E,
}

impl<E: Clone> BoundedTuple<E> {
    pub fn new<A: InverseAlgebra<Elem = E>>(alg: &A, entries: Vec<E>, bound: E) -> Result<Self, AlgebraError> {
        alg.check_member(&bound)?;
        for t in &entries {
            alg.check_member(t)?;
            if !alg.le(t, &bound) {
                return Err(AlgebraError::Unbounded {
                    element: alg.format(t),
                    bound: alg.format(&bound),
                });
            }
        }
        Ok(BoundedTuple { entries, bound })
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn bound(&self) -> &E {
        &self.bound
    }

    /// Keeps only the listed coordinates.
    pub fn restrict(&self, coords: &[usize]) -> Self {
        BoundedTuple {
            entries: coords.iter().map(|&c| self.entries[c].clone()).collect(),
            bound: self.bound.clone(),
        }
    }
}

/// `sup { t_i }`, re-checking the bound.
pub fn omega<A: InverseAlgebra>(alg: &A, t: &BoundedTuple<A::Elem>) -> Result<A::Elem, AlgebraError> {
    ehresmann_sup(alg, &t.entries, &t.bound)
}

/// Outcome of one clause of a certificate, with the first failure found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl Check {
    fn from_witness(w: Option<String>) -> Self {
        Check {
            holds: w.is_none(),
            witness: w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheinRow<E> {
    pub element: E,
    pub tuple: Vec<E>,
}

/// The product map `S -> prod T_i` as a table, with every verdict derived
/// from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheinSumCertificate<E> {
    pub rows: Vec<ScheinRow<E>>,
    /// Row indices whose elements generate `S`; products are checked against
    /// them. Empty means all rows.
    pub letters: Vec<usize>,
    /// Each tuple is bounded above by its own element.
    pub bounded: Check,
    /// The product map is a homomorphism.
    pub homomorphism: Check,
    /// `omega` is a homomorphism on the image.
    pub schein: Check,
    /// `omega` after the product map is the identity.
    pub recovery: Check,
    /// Distinct coordinate images multiply to zero.
    pub orthogonal: Check,
    pub injective: Check,
}

impl<E: Clone + Eq + Ord> ScheinSumCertificate<E> {
    /// Builds the certificate from its table.
    pub fn from_rows<A: InverseAlgebra<Elem = E>>(alg: &A, rows: Vec<ScheinRow<E>>, letters: Vec<usize>) -> Self {
        let fmt_tuple = |t: &[E]| format!("({})", t.iter().map(|x| alg.format(x)).collect::<Vec<_>>().join(", "));
        let row_of = |x: &E| rows.iter().position(|r| r.element == *x);
        let letter_rows: Vec<usize> = if letters.is_empty() {
            (0..rows.len()).collect()
        } else {
            letters.clone()
        };

        let bounded = Check::from_witness(rows.iter().find_map(|r| {
            r.tuple
                .iter()
                .find(|t| !alg.le(t, &r.element))
                .map(|t| format!("{} is not below {}", alg.format(t), alg.format(&r.element)))
        }));

        let omega_of = |tuple: &[E], bound: &E| sup_below(alg, tuple, bound);
        let mut hom_w = None;
        let mut schein_w = None;
        'outer: for r in &rows {
            for &l in &letter_rows {
                let h = &rows[l];
                let st = alg.compose(&r.element, &h.element);
                let prod: Vec<E> = r.tuple.iter().zip(&h.tuple).map(|(a, b)| alg.compose(a, b)).collect();
                match row_of(&st) {
                    Some(k) if rows[k].tuple == prod => {}
                    _ => {
                        hom_w.get_or_insert_with(|| {
                            format!(
                                "image of {} {} differs from {}",
                                alg.format(&r.element),
                                alg.format(&h.element),
                                fmt_tuple(&prod)
                            )
                        });
                    }
                }
                let lhs = omega_of(&prod, &st);
                let rhs = alg.compose(&omega_of(&r.tuple, &r.element), &omega_of(&h.tuple, &h.element));
                if lhs != rhs {
                    schein_w = Some(format!(
                        "omega({} {}) = {} but omega {} omega {} = {}",
                        fmt_tuple(&r.tuple),
                        fmt_tuple(&h.tuple),
                        alg.format(&lhs),
                        fmt_tuple(&r.tuple),
                        fmt_tuple(&h.tuple),
                        alg.format(&rhs)
                    ));
                    break 'outer;
                }
            }
        }
        let recovery = Check::from_witness(rows.iter().find_map(|r| {
            let w = omega_of(&r.tuple, &r.element);
            (w != r.element).then(|| format!("omega of {} is {}", alg.format(&r.element), alg.format(&w)))
        }));

        // x y = 0 iff (x^-1 x)(y y^-1) = 0, so idempotents suffice.
        let width = rows.first().map_or(0, |r| r.tuple.len());
        let mut orth_w = None;
        'orth: for i in 0..width {
            let mut dom_i: Vec<(E, E)> = rows
                .iter()
                .map(|r| (alg.compose(&alg.inverse(&r.tuple[i]), &r.tuple[i]), r.tuple[i].clone()))
                .collect();
            dom_i.sort();
            dom_i.dedup_by(|a, b| a.0 == b.0);
            for j in (0..width).filter(|&j| j != i) {
                let mut ran_j: Vec<(E, E)> = rows
                    .iter()
                    .map(|r| (alg.compose(&r.tuple[j], &alg.inverse(&r.tuple[j])), r.tuple[j].clone()))
                    .collect();
                ran_j.sort();
                ran_j.dedup_by(|a, b| a.0 == b.0);
                for (d, x) in &dom_i {
                    for (r, y) in &ran_j {
                        if !alg.is_zero(&alg.compose(d, r)) {
                            orth_w = Some(format!(
                                "coordinates {} and {}: {} {} != 0",
                                i + 1,
                                j + 1,
                                alg.format(x),
                                alg.format(y)
                            ));
                            break 'orth;
                        }
                    }
                }
            }
        }

        let mut tuples: Vec<(&Vec<E>, &E)> = rows.iter().map(|r| (&r.tuple, &r.element)).collect();
        tuples.sort();
        let injective = Check::from_witness(tuples.windows(2).find(|w| w[0].0 == w[1].0).map(|w| {
            format!(
                "{} and {} share the tuple {}",
                alg.format(w[0].1),
                alg.format(w[1].1),
                fmt_tuple(w[0].0)
            )
        }));

        ScheinSumCertificate {
            rows,
            letters,
            bounded,
            homomorphism: Check::from_witness(hom_w),
            schein: Check::from_witness(schein_w),
            recovery,
            orthogonal: Check::from_witness(orth_w),
            injective,
        }
    }

    /// Re-derives every verdict from the stored table.
    pub fn recompute<A: InverseAlgebra<Elem = E>>(&self, alg: &A) -> Self {
        Self::from_rows(alg, self.rows.clone(), self.letters.clone())
    }

    pub fn is_schein_sum(&self) -> bool {
        self.bounded.holds && self.homomorphism.holds && self.schein.holds
    }
}

/// Certificate for `s -> (s phi_i)_i` over the orbits of `d`.
pub fn certify_schein<A: InverseAlgebra>(
    s: &crate::subsemigroup::Subsemigroup<'_, A>,
    d: &OrbitDecomposition<A::Elem>,
) -> ScheinSumCertificate<A::Elem> {
    certify_schein_components(s, d, &(0..d.len()).collect::<Vec<_>>())
}

/// As [`certify_schein`], keeping only the listed orbit projections.
pub fn certify_schein_components<A: InverseAlgebra>(
    s: &crate::subsemigroup::Subsemigroup<'_, A>,
    d: &OrbitDecomposition<A::Elem>,
    coords: &[usize],
) -> ScheinSumCertificate<A::Elem> {
    let alg = s.algebra();
    let rows: Vec<ScheinRow<A::Elem>> = d
        .elements
        .iter()
        .enumerate()
        .map(|(k, x)| ScheinRow {
            element: x.clone(),
            tuple: coords.iter().map(|&i| d.orbits[i].projection[k].clone()).collect(),
        })
        .collect();
    let letters = s
        .letters()
        .iter()
        .filter_map(|l| d.elements.iter().position(|x| x == l))
        .collect();
    ScheinSumCertificate::from_rows(alg, rows, letters)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SummandError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("summands {first} and {second} overlap in {element}")]
    Overlap {
        first: usize,
        second: usize,
        element: String,
    },
    #[error("summands {first} and {second} do not multiply to zero: {x} {y} != 0")]
    CrossProduct {
        first: usize,
        second: usize,
        x: String,
        y: String,
    },
}

/// The map `sigma` of a 0-direct sum: each nonzero element goes to the tuple
/// holding it in its own coordinate and zero elsewhere. Summands are 1-based
/// in error messages.
pub fn zero_direct_sigma<A: InverseAlgebra>(
    alg: &A,
    summands: &[Vec<A::Elem>],
) -> Result<ScheinSumCertificate<A::Elem>, SummandError> {
    let parts: Vec<Vec<A::Elem>> = summands
        .iter()
        .map(|t| {
            let mut v: Vec<A::Elem> = t.iter().filter(|x| !alg.is_zero(x)).cloned().collect();
            v.sort();
            v.dedup();
            v
        })
        .collect();
    for (i, ti) in parts.iter().enumerate() {
        for x in ti {
            alg.check_member(x)?;
        }
        for (j, tj) in parts.iter().enumerate().skip(i + 1) {
            if let Some(x) = ti.iter().find(|x| tj.contains(x)) {
                return Err(SummandError::Overlap {
                    first: i + 1,
                    second: j + 1,
                    element: alg.format(x),
                });
            }
        }
    }
    for (i, ti) in parts.iter().enumerate() {
        for (j, tj) in parts.iter().enumerate() {
            if i == j {
                continue;
            }
            for x in ti {
                if let Some(y) = tj.iter().find(|y| !alg.is_zero(&alg.compose(x, y))) {
                    return Err(SummandError::CrossProduct {
                        first: i + 1,
                        second: j + 1,
                        x: alg.format(x),
                        y: alg.format(y),
                    });
                }
            }
        }
    }
    let zero = alg.zero();
    let mut rows = vec![ScheinRow {
        element: zero.clone(),
        tuple: vec![zero.clone(); parts.len()],
    }];
    for (i, ti) in parts.iter().enumerate() {
        for x in ti {
            let mut tuple = vec![zero.clone(); parts.len()];
            tuple[i] = x.clone();
            rows.push(ScheinRow {
                element: x.clone(),
                tuple,
            });
        }
    }
    rows.sort_by(|a, b| a.element.cmp(&b.element));
    Ok(ScheinSumCertificate::from_rows(alg, rows, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::decompose;
    use crate::subsemigroup::Subsemigroup;
    use crate::{DualSymInv, SymInv};

    #[test]
    fn constant_tuple_omega() {
        let alg = SymInv::new(3).unwrap();
        let t = alg.parse("[1->2, 3->1]").unwrap();
        let tup = BoundedTuple::new(&alg, vec![t.clone(); 3], t.clone()).unwrap();
        assert_eq!(omega(&alg, &tup).unwrap(), t);
        let other = alg.parse("[2->2]").unwrap();
        assert!(BoundedTuple::new(&alg, vec![other], t).is_err());
    }

    #[test]
    fn example_four_sub_sums_recover_alpha() {
        let alg = DualSymInv::new(5).unwrap();
        let a = alg.parse("(1->2|4->3|235->145)").unwrap();
        let s = Subsemigroup::close(&alg, std::slice::from_ref(&a)).unwrap();
        let d = decompose(&s).unwrap();
        assert_eq!(d.len(), 3);
        let k = d.elements.iter().position(|x| *x == a).unwrap();
        let full: Vec<_> = d.orbits.iter().map(|o| o.projection[k].clone()).collect();
        let t = BoundedTuple::new(&alg, full, a.clone()).unwrap();
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert_eq!(omega(&alg, &t.restrict(&pair)).unwrap(), a);
        }
        let cert = certify_schein(&s, &d);
        assert!(cert.is_schein_sum() && cert.recovery.holds && cert.orthogonal.holds);
        assert_eq!(cert.recompute(&alg), cert);
    }

    #[test]
    fn example_one_is_not_orthogonal() {
        let alg = DualSymInv::new(4).unwrap();
        let a = alg.parse("(12->13|34->24)").unwrap();
        let dl = alg.parse("(1|234)").unwrap();
        let s = Subsemigroup::close(&alg, &[a, dl]).unwrap();
        let d = decompose(&s).unwrap();
        let cert = certify_schein(&s, &d);
        assert!(cert.recovery.holds && cert.is_schein_sum());
        assert!(!cert.orthogonal.holds && cert.orthogonal.witness.is_some());
    }

    #[test]
    fn sigma_of_summands() {
        let alg = SymInv::new(3).unwrap();
        let brandt: Vec<_> = ["[1->1]", "[2->2]", "[1->2]", "[2->1]"]
            .iter()
            .map(|t| alg.parse(t).unwrap())
            .collect();
        let point = vec![alg.parse("[3->3]").unwrap()];
        let cert = zero_direct_sigma(&alg, &[brandt.clone(), point]).unwrap();
        assert!(cert.injective.holds && cert.is_schein_sum() && cert.recovery.holds);

        let single = zero_direct_sigma(&alg, std::slice::from_ref(&brandt)).unwrap();
        assert!(single.rows.iter().all(|r| r.tuple == vec![r.element.clone()]));

        let clash = vec![alg.parse("[2->3]").unwrap(), alg.parse("[3->2]").unwrap()];
        assert!(matches!(
            zero_direct_sigma(&alg, &[brandt, clash]),
            Err(SummandError::CrossProduct { .. })
        ));
    }
}
