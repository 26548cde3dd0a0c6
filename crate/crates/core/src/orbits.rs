//! The orbit relation on primitive idempotents and the projections of `S`
//! onto the local algebras its orbits span.

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::algebra::InverseAlgebra;
use crate::error::{AlgebraError, InvariantViolation};
use crate::subsemigroup::Subsemigroup;

/// The partial equivalence `p ~ q` iff `p s q != 0` for some `s in S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TRelation<E> {
    /// All primitive idempotents under consideration, in canonical order.
    pub primitives: Vec<E>,
    /// Classes as indices into `primitives`, ordered by least member.
    pub classes: Vec<Vec<usize>>,
    /// `class_of[k]` is the class of `primitives[k]`, or `None` off the domain.
    pub class_of: Vec<Option<usize>>,
}

impl<E: Clone + PartialEq> TRelation<E> {
    pub fn in_domain(&self, k: usize) -> bool {
        self.class_of[k].is_some()
    }

    pub fn domain(&self) -> Vec<E> {
        (0..self.primitives.len())
            .filter(|&k| self.in_domain(k))
            .map(|k| self.primitives[k].clone())
            .collect()
    }

    pub fn class(&self, i: usize) -> Vec<E> {
        self.classes[i].iter().map(|&k| self.primitives[k].clone()).collect()
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        matches!((self.class_of[a], self.class_of[b]), (Some(x), Some(y)) if x == y)
    }

    pub fn is_total(&self) -> bool {
        self.class_of.iter().all(Option::is_some)
    }

    pub fn is_universal(&self) -> bool {
        self.is_total() && self.classes.len() <= 1
    }
}

/// `T_S` over all primitive idempotents of the algebra.
pub fn build_t_relation<A: InverseAlgebra>(alg: &A, elements: &[A::Elem]) -> TRelation<A::Elem> {
    build_t_relation_in(alg, elements, alg.primitive_idempotents())
}

/// `T_S` over a given set of primitive idempotents, such as those of a local
/// algebra `eAe`.
pub fn build_t_relation_in<A: InverseAlgebra>(
    alg: &A,
    elements: &[A::Elem],
    primitives: Vec<A::Elem>,
) -> TRelation<A::Elem> {
    let k = primitives.len();
    let mut uf = UnionFind::<usize>::new(k);
    let mut in_dom = vec![false; k];
    for s in elements {
        for (a, p) in primitives.iter().enumerate() {
            let ps = alg.compose(p, s);
            if alg.is_zero(&ps) {
                continue;
            }
            in_dom[a] = true;
            for (b, q) in primitives.iter().enumerate() {
                if !alg.is_zero(&alg.compose(&ps, q)) {
                    uf.union(a, b);
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_class: Vec<Option<usize>> = vec![None; k];
    let mut class_of = vec![None; k];
    for a in (0..k).filter(|&a| in_dom[a]) {
        let r = uf.find(a);
        let c = *root_class[r].get_or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(a);
        class_of[a] = Some(c);
    }
    TRelation {
        primitives,
        classes,
        class_of,
    }
}

fn check_primitive<A: InverseAlgebra>(alg: &A, p: &A::Elem) -> Result<(), AlgebraError> {
    alg.check_member(p)?;
    if alg.primitive_idempotents().contains(p) {
        Ok(())
    } else {
        Err(AlgebraError::NotPrimitive(alg.format(p)))
    }
}

/// The four conditions `q = s^-1 p s`, `ps = sq != 0`, `psq = ps = sq != 0`
/// and `psq != 0`, evaluated independently.
pub fn check_tfae<A: InverseAlgebra>(
    alg: &A,
    p: &A::Elem,
    q: &A::Elem,
    s: &A::Elem,
) -> Result<[bool; 4], AlgebraError> {
    check_primitive(alg, p)?;
    check_primitive(alg, q)?;
    alg.check_member(s)?;
    Ok(tfae_unchecked(alg, p, q, s))
}

pub(crate) fn tfae_unchecked<A: InverseAlgebra>(alg: &A, p: &A::Elem, q: &A::Elem, s: &A::Elem) -> [bool; 4] {
    let ps = alg.compose(p, s);
    let sq = alg.compose(s, q);
    let psq = alg.compose(&ps, q);
    let conj = alg.compose(&alg.compose(&alg.inverse(s), p), s);
    [
        *q == conj,
        ps == sq && !alg.is_zero(&ps),
        psq == ps && ps == sq && !alg.is_zero(&ps),
        !alg.is_zero(&psq),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassifierFlags {
    pub weakly_transitive: bool,
    pub transitive: bool,
    pub weakly_effective: bool,
    pub effective: bool,
    pub disperse: bool,
}

/// One orbit `P_i` with its local identity, projection and image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit<E> {
    pub primitives: Vec<E>,
    /// `e_i = sup P_i`
    pub identity: E,
    /// `projection[k]` is the image of the `k`-th element of `S`.
    pub projection: Vec<E>,
    /// `S_i`, sorted and deduplicated.
    pub image: Vec<E>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition<E> {
    /// The elements of `S`, in the order `projection` refers to.
    pub elements: Vec<E>,
    /// The identity of the ambient (possibly local) algebra.
    pub ambient: E,
    pub relation: TRelation<E>,
    pub orbits: Vec<Orbit<E>>,
    pub flags: ClassifierFlags,
}

impl<E> OrbitDecomposition<E> {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }
}

/// Primitive idempotents of the local algebra `eAe`.
pub fn local_primitives<A: InverseAlgebra>(alg: &A, e: &A::Elem) -> Vec<A::Elem> {
    alg.primitive_idempotents()
        .into_iter()
        .filter(|p| alg.le(p, e))
        .collect()
}

/// Least idempotent `e` with `S <= eAe`.
pub fn enclosing_identity<A: InverseAlgebra>(alg: &A, elements: &[A::Elem]) -> A::Elem {
    let ids: Vec<A::Elem> = elements
        .iter()
        .flat_map(|s| {
            let si = alg.inverse(s);
            [alg.compose(s, &si), alg.compose(&si, s)]
        })
        .collect();
    alg.idempotent_sup(&ids)
}

/// Classifier flags for `S` inside the algebra.
pub fn classify<A: InverseAlgebra>(alg: &A, elements: &[A::Elem]) -> ClassifierFlags {
    classify_in(alg, elements, &alg.identity())
}

/// Classifier flags for `S` inside the local algebra `eAe`; `S` must lie in it.
pub fn classify_in<A: InverseAlgebra>(alg: &A, elements: &[A::Elem], e: &A::Elem) -> ClassifierFlags {
    let relation = build_t_relation_in(alg, elements, local_primitives(alg, e));
    let identities: Vec<A::Elem> = relation
        .classes
        .iter()
        .map(|c| alg.idempotent_sup(&c.iter().map(|&k| relation.primitives[k].clone()).collect::<Vec<_>>()))
        .collect();
    flags_from(alg, elements, e, &relation, &identities)
}

fn flags_from<A: InverseAlgebra>(
    alg: &A,
    elements: &[A::Elem],
    e: &A::Elem,
    relation: &TRelation<A::Elem>,
    identities: &[A::Elem],
) -> ClassifierFlags {
    let disperse = identities.iter().enumerate().all(|(i, ei)| {
        relation
            .classes
            .iter()
            .enumerate()
            .all(|(j, pj)| i == j || !pj.iter().any(|&k| alg.le(&relation.primitives[k], ei)))
    });
    ClassifierFlags {
        weakly_transitive: relation.classes.len() <= 1,
        transitive: relation.is_universal(),
        weakly_effective: enclosing_identity(alg, elements) == *e,
        effective: relation.is_total(),
        disperse,
    }
}

/// Computes the orbits, local identities and projections `s -> e_i s` of
/// `S`, checking that `e_i s = s e_i = e_i s e_i` and that each projection is
/// a homomorphism.
pub fn decompose<A: InverseAlgebra>(
    s: &Subsemigroup<'_, A>,
) -> Result<OrbitDecomposition<A::Elem>, InvariantViolation> {
    decompose_in(s.algebra(), s.elements(), &s.letters(), &s.algebra().identity())
}

/// As [`decompose`], relative to the local algebra `eAe`. `letters` must
/// generate `elements` as a semigroup.
pub fn decompose_in<A: InverseAlgebra>(
    alg: &A,
    elements: &[A::Elem],
    letters: &[A::Elem],
    e: &A::Elem,
) -> Result<OrbitDecomposition<A::Elem>, InvariantViolation> {
    let relation = build_t_relation_in(alg, elements, local_primitives(alg, e));
    let mut orbits = Vec::with_capacity(relation.classes.len());
    for i in 0..relation.classes.len() {
        let primitives = relation.class(i);
        let ei = alg.idempotent_sup(&primitives);
        let mut projection = Vec::with_capacity(elements.len());
        for s in elements {
            let left = alg.compose(&ei, s);
            let right = alg.compose(s, &ei);
            let both = alg.compose(&left, &ei);
            if left != right || right != both {
                return Err(InvariantViolation::new(
                    "projection formula",
                    format!(
                        "orbit {}: for s = {}, e s = {}, s e = {}, e s e = {}",
                        i + 1,
                        alg.format(s),
                        alg.format(&left),
                        alg.format(&right),
                        alg.format(&both)
                    ),
                ));
            }
            projection.push(left);
        }
        // Homomorphism on s h for every letter h suffices, by induction on
        // the length of a word for t in phi(s t) = phi(s) phi(t).
        for (k, s) in elements.iter().enumerate() {
            for h in letters {
                let st = alg.compose(s, h);
                let lhs = alg.compose(&ei, &st);
                let rhs = alg.compose(&projection[k], &alg.compose(&ei, h));
                if lhs != rhs {
                    return Err(InvariantViolation::new(
                        "projection is a homomorphism",
                        format!("orbit {}: s = {}, t = {}", i + 1, alg.format(s), alg.format(h)),
                    ));
                }
            }
        }
        let mut image = projection.clone();
        image.sort();
        image.dedup();
        orbits.push(Orbit {
            primitives,
            identity: ei,
            projection,
            image,
        });
    }
    let identities: Vec<A::Elem> = orbits.iter().map(|o| o.identity.clone()).collect();
    let flags = flags_from(alg, elements, e, &relation, &identities);
    Ok(OrbitDecomposition {
        elements: elements.to_vec(),
        ambient: e.clone(),
        relation,
        orbits,
        flags,
    })
}

/// Flags of the image `S_i` evaluated inside `A_i = e_i A e_i`.
pub fn factor_properties<A: InverseAlgebra>(
    alg: &A,
    d: &OrbitDecomposition<A::Elem>,
    i: usize,
) -> Result<ClassifierFlags, InvariantViolation> {
    let orbit = d
        .orbits
        .get(i)
        .ok_or_else(|| InvariantViolation::new("orbit index", format!("{i} out of range 0..{}", d.orbits.len())))?;
    Ok(classify_in(alg, &orbit.image, &orbit.identity))
}

/// What the class structure alone predicts for the factor flags of orbit `i`:
/// weak effectiveness always; effectiveness iff `P ∩ A_i` is a union of
/// classes; weak transitivity iff no other class lies in `A_i`; transitivity
/// iff `P ∩ A_i = P_i`.
pub fn predicted_factor_properties<A: InverseAlgebra>(
    alg: &A,
    d: &OrbitDecomposition<A::Elem>,
    i: usize,
) -> ClassifierFlags {
    let ei = &d.orbits[i].identity;
    let rel = &d.relation;
    let inside: Vec<usize> = (0..rel.primitives.len())
        .filter(|&k| alg.le(&rel.primitives[k], ei))
        .collect();
    let union_of_classes = inside
        .iter()
        .all(|&k| rel.class_of[k].is_some_and(|c| rel.classes[c].iter().all(|m| inside.contains(m))));
    let foreign = (0..rel.classes.len())
        .filter(|&j| j != i)
        .any(|j| rel.classes[j].iter().all(|k| inside.contains(k)));
    let exactly_own = inside == rel.classes[i];
    ClassifierFlags {
        weakly_transitive: !foreign,
        transitive: exactly_own,
        weakly_effective: true,
        effective: union_of_classes,
        // not predicted by the class structure; filled from the computation
        disperse: false,
    }
}
