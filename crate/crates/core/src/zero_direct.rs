//! The coarser decomposition of `S` into a 0-direct sum of irreducible
//! summands, via the incidence `N` between primitive idempotents and the
//! nonzero elements of `S`.

use petgraph::unionfind::UnionFind;

use crate::algebra::InverseAlgebra;
use crate::error::{AlgebraError, InvariantViolation};
use crate::orbits::{classify_in, ClassifierFlags};
use crate::subsemigroup::Subsemigroup;

/// `(p, s)` in `N` iff `p s != 0` or `p s^-1 != 0`.
pub fn incident<A: InverseAlgebra>(alg: &A, p: &A::Elem, s: &A::Elem) -> bool {
    !alg.is_zero(&alg.compose(p, s)) || !alg.is_zero(&alg.compose(p, &alg.inverse(s)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand<E> {
    /// `Q_alpha`
    pub primitives: Vec<E>,
    /// `S_alpha`, nonzero elements only.
    pub elements: Vec<E>,
    /// `e_alpha = sup Q_alpha`
    pub identity: E,
    pub irreducible: bool,
    pub weakly_effective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroDirectDecomposition<E> {
    /// Ordered by least primitive idempotent.
    pub summands: Vec<Summand<E>>,
}

impl<E: PartialEq> ZeroDirectDecomposition<E> {
    pub fn summand_of(&self, s: &E) -> Option<usize> {
        self.summands.iter().position(|m| m.elements.contains(s))
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }
}

pub fn decompose_zero_direct<A: InverseAlgebra>(
    s: &Subsemigroup<'_, A>,
) -> Result<ZeroDirectDecomposition<A::Elem>, InvariantViolation> {
    decompose_elements(s.algebra(), s.elements(), true)
}

/// `(Q_alpha, S_alpha)`
type Component<E> = (Vec<E>, Vec<E>);

/// Components by connected components of `N`, without the structural checks.
fn components<A: InverseAlgebra>(alg: &A, elements: &[A::Elem]) -> Vec<Component<A::Elem>> {
    let prims = alg.primitive_idempotents();
    let nonzero: Vec<&A::Elem> = elements.iter().filter(|x| !alg.is_zero(x)).collect();
    let k = prims.len();
    let mut uf = UnionFind::<usize>::new(k + nonzero.len());
    let mut in_q = vec![false; k];
    for (a, p) in prims.iter().enumerate() {
        for (b, s) in nonzero.iter().enumerate() {
            if incident(alg, p, s) {
                in_q[a] = true;
                uf.union(a, k + b);
            }
        }
    }
    let mut out: Vec<(usize, Component<A::Elem>)> = Vec::new();
    for a in (0..k).filter(|&a| in_q[a]) {
        let r = uf.find(a);
        match out.iter_mut().find(|(root, _)| *root == r) {
            Some((_, c)) => c.0.push(prims[a].clone()),
            None => out.push((r, (vec![prims[a].clone()], Vec::new()))),
        }
    }
    for (b, s) in nonzero.iter().enumerate() {
        let r = uf.find(k + b);
        if let Some((_, c)) = out.iter_mut().find(|(root, _)| *root == r) {
            c.1.push((*s).clone());
        }
    }
    out.into_iter().map(|(_, c)| c).collect()
}

fn decompose_elements<A: InverseAlgebra>(
    alg: &A,
    elements: &[A::Elem],
    check_irreducible: bool,
) -> Result<ZeroDirectDecomposition<A::Elem>, InvariantViolation> {
    let comps = components(alg, elements);
    let covered: usize = comps.iter().map(|c| c.1.len()).sum();
    let nonzero = elements.iter().filter(|x| !alg.is_zero(x)).count();
    if covered != nonzero {
        return Err(InvariantViolation::new(
            "summands partition S*",
            format!("{covered} of {nonzero} nonzero elements lie in a summand"),
        ));
    }
    let mut summands = Vec::with_capacity(comps.len());
    for (alpha, (q, sa)) in comps.iter().enumerate() {
        let e = alg.idempotent_sup(q);
        for s in sa {
            if alg.compose(&e, s) != *s || alg.compose(s, &e) != *s {
                return Err(InvariantViolation::new(
                    "summand lies in its local algebra",
                    format!(
                        "summand {}: {} is not fixed by {}",
                        alpha + 1,
                        alg.format(s),
                        alg.format(&e)
                    ),
                ));
            }
        }
        for x in sa {
            for y in sa {
                let xy = alg.compose(x, y);
                if !alg.is_zero(&xy) && !sa.contains(&xy) {
                    return Err(InvariantViolation::new(
                        "summand with zero is closed",
                        format!("summand {}: {} {} leaves it", alpha + 1, alg.format(x), alg.format(y)),
                    ));
                }
            }
        }
        let mut with_zero = sa.clone();
        with_zero.push(alg.zero());
        let irreducible = if check_irreducible {
            decompose_elements(alg, &with_zero, false)?.len() == 1
        } else {
            true
        };
        let flags: ClassifierFlags = classify_in(alg, &with_zero, &e);
        summands.push(Summand {
            primitives: q.clone(),
            elements: sa.clone(),
            identity: e,
            irreducible,
            weakly_effective: flags.weakly_effective,
        });
    }
    if let Some((a, b, x, y)) = cross_product_witness(alg, &summands) {
        return Err(InvariantViolation::new(
            "distinct summands multiply to zero",
            format!(
                "summands {} and {}: {} {} != 0",
                a + 1,
                b + 1,
                alg.format(&x),
                alg.format(&y)
            ),
        ));
    }
    Ok(ZeroDirectDecomposition { summands })
}

/// First `x in S_a`, `y in S_b` (`a != b`) with `x y != 0`.
fn cross_product_witness<A: InverseAlgebra>(
    alg: &A,
    summands: &[Summand<A::Elem>],
) -> Option<(usize, usize, A::Elem, A::Elem)> {
    for (a, sa) in summands.iter().enumerate() {
        for (b, sb) in summands.iter().enumerate() {
            if a == b {
                continue;
            }
            for x in &sa.elements {
                for y in &sb.elements {
                    if !alg.is_zero(&alg.compose(x, y)) {
                        return Some((a, b, x.clone(), y.clone()));
                    }
                }
            }
        }
    }
    None
}

/// If `s t != 0` then `s`, `t` and `s t` share a summand.
pub fn check_stnz<A: InverseAlgebra>(
    d: &ZeroDirectDecomposition<A::Elem>,
    s_sub: &Subsemigroup<'_, A>,
    s: &A::Elem,
    t: &A::Elem,
) -> Result<bool, AlgebraError> {
    let alg = s_sub.algebra();
    for x in [s, t] {
        if !s_sub.contains(x) {
            return Err(AlgebraError::DomainMismatch(alg.format(x)));
        }
    }
    let st = alg.compose(s, t);
    if alg.is_zero(&st) {
        return Ok(true);
    }
    let k = d.summand_of(s);
    Ok(k.is_some() && k == d.summand_of(t) && k == d.summand_of(&st))
}
