//! The abstract interface of a finite complete atomistic inverse algebra, and
//! the order-theoretic operations every such algebra inherits from it.
//!
//! Products are written left to right: `compose(a, b)` is "first `a`, then
//! `b`". The natural partial order is `a <= b` iff `a = (a a^-1) b`; the zero
//! is its bottom element.

use std::fmt::{self, Debug};
use std::hash::Hash;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, ParseError};
use crate::table::CarrierTable;

/// Which concrete family an algebra instance belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "sym")]
    Sym,
    #[serde(rename = "dual-sym")]
    DualSym,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Sym => "sym",
            Family::DualSym => "dual-sym",
        })
    }
}

/// A finite complete atomistic inverse algebra with identity and zero.
///
/// Implementations provide the primitive operations; everything order
/// theoretic (meets, suprema, complements) is derived generically in this
/// module. All methods are pure, so instances are freely shareable.
pub trait InverseAlgebra: Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn family(&self) -> Family;

    /// Size of the ground set.
    fn degree(&self) -> usize;

    /// Whether `a` is a well-formed element of this particular instance.
    fn contains(&self, a: &Self::Elem) -> bool;

    fn compose(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    fn zero(&self) -> Self::Elem;

    fn identity(&self) -> Self::Elem;

    fn is_idempotent(&self, a: &Self::Elem) -> bool {
        self.compose(a, a) == *a
    }

    /// Least upper bound of a set of idempotents. The empty set yields zero.
    fn idempotent_sup(&self, idempotents: &[Self::Elem]) -> Self::Elem;

    /// Atoms of the natural order lying below `a`, in canonical order.
    fn atoms_below(&self, a: &Self::Elem) -> Vec<Self::Elem>;

    fn all_atoms(&self) -> Vec<Self::Elem>;

    /// The atoms of the idempotent lattice, in canonical order.
    fn primitive_idempotents(&self) -> Vec<Self::Elem>;

    /// Every element, sorted by the canonical order. Computed once per instance.
    fn carrier(&self) -> &[Self::Elem];

    fn format(&self, a: &Self::Elem) -> String;

    fn parse(&self, text: &str) -> Result<Self::Elem, ParseError>;

    /// Symbolic name for distinguished elements, if the notation has one.
    fn symbol(&self, _a: &Self::Elem) -> Option<&'static str> {
        None
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// The natural order, without membership checks.
    fn le(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        let range_id = self.compose(a, &self.inverse(a));
        self.compose(&range_id, b) == *a
    }

    fn check_member(&self, a: &Self::Elem) -> Result<(), AlgebraError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(AlgebraError::DomainMismatch(format!("{a:?}")))
        }
    }
}

/// `a <= b` in the natural partial order.
pub fn natural_leq<A: InverseAlgebra>(alg: &A, a: &A::Elem, b: &A::Elem) -> Result<bool, AlgebraError> {
    alg.check_member(a)?;
    alg.check_member(b)?;
    Ok(alg.le(a, b))
}

/// Greatest lower bound, computed from the atoms the two elements share.
pub fn meet<A: InverseAlgebra>(alg: &A, a: &A::Elem, b: &A::Elem) -> Result<A::Elem, AlgebraError> {
    alg.check_member(a)?;
    alg.check_member(b)?;
    let below_b = alg.atoms_below(b);
    let common: Vec<_> = alg.atoms_below(a).into_iter().filter(|x| below_b.contains(x)).collect();
    Ok(sup_below(alg, &common, a))
}

/// Least upper bound of `xs`, all of which must lie below `bound`:
/// `sup X = (sup { x x^-1 }) u`.
pub fn ehresmann_sup<A: InverseAlgebra>(alg: &A, xs: &[A::Elem], bound: &A::Elem) -> Result<A::Elem, AlgebraError> {
    check_bounded(alg, xs, bound)?;
    Ok(sup_below(alg, xs, bound))
}

/// The mirror form of [`ehresmann_sup`]: `sup X = u (sup { x^-1 x })`.
pub fn ehresmann_sup_dual<A: InverseAlgebra>(
    alg: &A,
    xs: &[A::Elem],
    bound: &A::Elem,
) -> Result<A::Elem, AlgebraError> {
    check_bounded(alg, xs, bound)?;
    if xs.is_empty() {
        return Ok(alg.zero());
    }
    let domains: Vec<_> = xs.iter().map(|x| alg.compose(&alg.inverse(x), x)).collect();
    Ok(alg.compose(bound, &alg.idempotent_sup(&domains)))
}

fn check_bounded<A: InverseAlgebra>(alg: &A, xs: &[A::Elem], bound: &A::Elem) -> Result<(), AlgebraError> {
    alg.check_member(bound)?;
    for x in xs {
        alg.check_member(x)?;
        if !alg.le(x, bound) {
            return Err(AlgebraError::Unbounded {
                element: alg.format(x),
                bound: alg.format(bound),
            });
        }
    }
    Ok(())
}

/// Supremum of elements already known to lie below `bound`.
pub(crate) fn sup_below<A: InverseAlgebra>(alg: &A, xs: &[A::Elem], bound: &A::Elem) -> A::Elem {
    if xs.is_empty() {
        return alg.zero();
    }
    let ranges: Vec<_> = xs.iter().map(|x| alg.compose(x, &alg.inverse(x))).collect();
    alg.compose(&alg.idempotent_sup(&ranges), bound)
}

/// `sup { p in P : p e = 0 }`.
pub fn boolean_complement<A: InverseAlgebra>(alg: &A, e: &A::Elem) -> Result<A::Elem, AlgebraError> {
    alg.check_member(e)?;
    if !alg.is_idempotent(e) {
        return Err(AlgebraError::NotIdempotent(alg.format(e)));
    }
    let killers: Vec<_> = alg
        .primitive_idempotents()
        .into_iter()
        .filter(|p| alg.is_zero(&alg.compose(p, e)))
        .collect();
    Ok(alg.idempotent_sup(&killers))
}

/// A failure of `x (sup Y) = sup { x y : y in Y }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributivityWitness<E> {
    pub x: E,
    pub ys: Vec<E>,
    /// An upper bound of `ys`, used to form both suprema.
    pub bound: E,
    /// `x (sup Y)`
    pub lhs: E,
    /// `sup { x y }`
    pub rhs: E,
}

/// Searches bounded sets `Y` with `1 <= |Y| <= max_set_size`, and every `x`,
/// for a failure of complete distributivity.
///
/// Iteration order is by `|Y|`, then `Y` lexicographically in the canonical
/// order of the carrier, then `x`; the first failure found is returned.
pub fn find_distributivity_violation<A: InverseAlgebra>(
    alg: &A,
    max_set_size: usize,
) -> Result<Option<DistributivityWitness<A::Elem>>, AlgebraError> {
    let table = CarrierTable::build(alg)?;
    let size = table.len();
    let idempotents: Vec<u32> = (0..size as u32).filter(|&i| table.is_idempotent(i)).collect();
    let mut join_table = vec![u32::MAX; size * size];
    for &e in &idempotents {
        for &f in &idempotents {
            let sup = alg.idempotent_sup(&[table.element(e).clone(), table.element(f).clone()]);
            join_table[e as usize * size + f as usize] = table.index_of(&sup).expect("sup lies in carrier");
        }
    }
    let join = |e: u32, f: u32| join_table[e as usize * size + f as usize];
    // upper[y] = indices u with y <= u
    let upper: Vec<Vec<u32>> = (0..size as u32)
        .map(|y| (0..size as u32).filter(|&u| table.le(y, u)).collect())
        .collect();
    let sup_of = |ys: &[u32], bound: u32| -> u32 {
        let mut e = table.range_idempotent(ys[0]);
        for &y in &ys[1..] {
            e = join(e, table.range_idempotent(y));
        }
        table.mul(e, bound)
    };

    for k in 1..=max_set_size {
        for ys in (0..size as u32).combinations(k) {
            let Some(bound) = upper[ys[0] as usize]
                .iter()
                .copied()
                .find(|&u| ys[1..].iter().all(|&y| table.le(y, u)))
            else {
                continue;
            };
            let sup_y = sup_of(&ys, bound);
            for x in 0..size as u32 {
                let lhs = table.mul(x, sup_y);
                let products: Vec<u32> = ys.iter().map(|&y| table.mul(x, y)).collect();
                let rhs = sup_of(&products, table.mul(x, bound));
                if lhs != rhs {
                    return Ok(Some(DistributivityWitness {
                        x: table.element(x).clone(),
                        ys: ys.iter().map(|&y| table.element(y).clone()).collect(),
                        bound: table.element(bound).clone(),
                        lhs: table.element(lhs).clone(),
                        rhs: table.element(rhs).clone(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Re-evaluates a witness directly with the algebra operations.
pub fn confirm_distributivity_witness<A: InverseAlgebra>(
    alg: &A,
    w: &DistributivityWitness<A::Elem>,
) -> Result<bool, AlgebraError> {
    let sup_y = ehresmann_sup(alg, &w.ys, &w.bound)?;
    let lhs = alg.compose(&w.x, &sup_y);
    let products: Vec<_> = w.ys.iter().map(|y| alg.compose(&w.x, y)).collect();
    let rhs = ehresmann_sup(alg, &products, &alg.compose(&w.x, &w.bound))?;
    Ok(lhs != rhs && lhs == w.lhs && rhs == w.rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{DualSymInv, SymInv};
    use itertools::Itertools;

    /// `a <= b` iff `a = e b` for some idempotent `e`, by scanning the carrier.
    fn below_by_scan<A: InverseAlgebra>(alg: &A, a: &A::Elem, b: &A::Elem) -> bool {
        alg.carrier()
            .iter()
            .any(|e| alg.is_idempotent(e) && alg.compose(e, b) == *a)
    }

    /// Least upper bound by scanning every upper bound in the carrier.
    fn lub_by_scan<A: InverseAlgebra>(alg: &A, xs: &[A::Elem]) -> Option<A::Elem> {
        let uppers: Vec<_> = alg
            .carrier()
            .iter()
            .filter(|u| xs.iter().all(|x| below_by_scan(alg, x, u)))
            .collect();
        uppers
            .iter()
            .find(|m| uppers.iter().all(|u| below_by_scan(alg, m, u)))
            .map(|m| (*m).clone())
    }

    fn axioms<A: InverseAlgebra>(alg: &A) {
        let c = alg.carrier();
        for a in c {
            assert_eq!(alg.compose(&alg.compose(a, &alg.inverse(a)), a), *a);
            assert_eq!(alg.inverse(&alg.inverse(a)), *a);
            assert_eq!(alg.compose(&alg.zero(), a), alg.zero());
            assert_eq!(alg.compose(a, &alg.identity()), *a);
            for b in c {
                let ab = alg.compose(a, b);
                assert_eq!(alg.inverse(&ab), alg.compose(&alg.inverse(b), &alg.inverse(a)));
                if alg.is_idempotent(a) && alg.is_idempotent(b) {
                    assert_eq!(ab, alg.compose(b, a));
                }
                for x in c {
                    assert_eq!(alg.compose(&ab, x), alg.compose(a, &alg.compose(b, x)));
                }
            }
        }
    }

    #[test]
    fn inverse_semigroup_axioms_on_three_points() {
        axioms(&SymInv::new(3).unwrap());
        axioms(&DualSymInv::new(3).unwrap());
    }

    fn order_and_meet<A: InverseAlgebra>(alg: &A) {
        for a in alg.carrier() {
            assert!(natural_leq(alg, &alg.zero(), a).unwrap());
            assert!(natural_leq(alg, a, a).unwrap());
            assert_eq!(meet(alg, a, a).unwrap(), *a);
            assert_eq!(meet(alg, a, &alg.zero()).unwrap(), alg.zero());
            for b in alg.carrier() {
                let le = natural_leq(alg, a, b).unwrap();
                assert_eq!(le, below_by_scan(alg, a, b));
                let m = meet(alg, a, b).unwrap();
                assert_eq!(le, m == *a);
                let lower: Vec<_> = alg
                    .carrier()
                    .iter()
                    .filter(|x| below_by_scan(alg, x, a) && below_by_scan(alg, x, b))
                    .collect();
                assert!(lower.contains(&&m));
                assert!(lower.iter().all(|x| below_by_scan(alg, x, &m)));
            }
        }
    }

    #[test]
    fn order_and_meet_on_three_points() {
        order_and_meet(&SymInv::new(3).unwrap());
        order_and_meet(&DualSymInv::new(3).unwrap());
    }

    #[test]
    fn delta_is_above_the_first_example_identity() {
        let alg = DualSymInv::new(4).unwrap();
        let e2 = alg.parse("(1|234)").unwrap();
        assert!(natural_leq(&alg, &e2, &alg.identity()).unwrap());
        assert!(!natural_leq(&alg, &alg.identity(), &e2).unwrap());
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let small = DualSymInv::new(3).unwrap();
        let big = DualSymInv::new(4).unwrap();
        let x = small.identity();
        assert!(matches!(
            natural_leq(&big, &x, &big.identity()),
            Err(AlgebraError::DomainMismatch(_))
        ));
        assert!(matches!(
            meet(&big, &big.zero(), &x),
            Err(AlgebraError::DomainMismatch(_))
        ));
    }

    fn sup_forms<A: InverseAlgebra>(alg: &A) {
        let c = alg.carrier();
        for a in c {
            assert_eq!(ehresmann_sup(alg, std::slice::from_ref(a), a).unwrap(), *a);
            assert_eq!(ehresmann_sup(alg, &alg.atoms_below(a), a).unwrap(), *a);
            assert_eq!(ehresmann_sup(alg, &[], a).unwrap(), alg.zero());
        }
        for k in 1..=3 {
            for xs in c.iter().cloned().combinations(k) {
                let Some(lub) = lub_by_scan(alg, &xs) else { continue };
                for u in c.iter().filter(|u| xs.iter().all(|x| alg.le(x, u))) {
                    let primary = ehresmann_sup(alg, &xs, u).unwrap();
                    assert_eq!(primary, ehresmann_sup_dual(alg, &xs, u).unwrap());
                    assert_eq!(primary, lub);
                }
            }
        }
    }

    #[test]
    fn both_sup_forms_match_the_scanned_least_upper_bound() {
        sup_forms(&SymInv::new(3).unwrap());
        sup_forms(&DualSymInv::new(3).unwrap());
    }

    #[test]
    fn sup_of_the_first_example_idempotents() {
        let alg = DualSymInv::new(4).unwrap();
        let xs = [alg.parse("(12|34)").unwrap(), alg.parse("(13|24)").unwrap()];
        assert_eq!(ehresmann_sup(&alg, &xs, &alg.identity()).unwrap(), alg.identity());
        let unbounded = ehresmann_sup(&alg, &xs, &xs[0]);
        assert!(matches!(unbounded, Err(AlgebraError::Unbounded { .. })));
    }

    #[test]
    fn complements_of_the_extremes() {
        for alg in [DualSymInv::new(3).unwrap(), DualSymInv::new(4).unwrap()] {
            assert_eq!(boolean_complement(&alg, &alg.identity()).unwrap(), alg.zero());
            assert_eq!(boolean_complement(&alg, &alg.zero()).unwrap(), alg.identity());
        }
        let sym = SymInv::new(3).unwrap();
        assert_eq!(boolean_complement(&sym, &sym.zero()).unwrap(), sym.identity());
        let a = sym.parse("[1->2]").unwrap();
        assert!(matches!(
            boolean_complement(&sym, &a),
            Err(AlgebraError::NotIdempotent(_))
        ));
    }

    #[test]
    fn distributivity_dichotomy() {
        let sym = SymInv::new(3).unwrap();
        assert_eq!(find_distributivity_violation(&sym, 2).unwrap(), None);
        let dual = DualSymInv::new(3).unwrap();
        let w = find_distributivity_violation(&dual, 2).unwrap().expect("a witness");
        assert_eq!(w.ys.len(), 2);
        assert!(confirm_distributivity_witness(&dual, &w).unwrap());
        assert_eq!(find_distributivity_violation(&dual, 1).unwrap(), None);
    }
}
