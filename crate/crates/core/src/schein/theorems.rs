//! Executable checks of the four decomposition theorems.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::algebra::{find_distributivity_violation, DistributivityWitness, InverseAlgebra};
use crate::error::{AlgebraError, InvariantViolation};
use crate::orbits::{classify_in, decompose, factor_properties, OrbitDecomposition};
use crate::schein::certify_schein;
use crate::subsemigroup::Subsemigroup;
use crate::zero_direct::decompose_zero_direct;

/// Largest `|Y|` probed when deciding whether the algebra is completely
/// distributive.
pub const DISTRIBUTIVITY_SET_SIZE: usize = 2;

/// Most orbit classes for which alternative factorizations are enumerated.
pub const MAX_ALTERNATIVE_CLASSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    T1,
    T2,
    T3,
    T4,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::T1, Theorem::T2, Theorem::T3, Theorem::T4];
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Ok(Theorem::T1),
            "T2" => Ok(Theorem::T2),
            "T3" => Ok(Theorem::T3),
            "T4" => Ok(Theorem::T4),
            _ => Err(format!("unknown theorem `{s}` (expected T1..T4)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Clause {
    fn new(name: &str, holds: bool, detail: Option<String>) -> Self {
        Clause {
            name: name.to_string(),
            holds,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub theorem: Theorem,
    pub status: Status,
    pub clauses: Vec<Clause>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl TheoremVerdict {
    fn from_clauses(theorem: Theorem, clauses: Vec<Clause>) -> Self {
        let status = if clauses.iter().all(|c| c.holds) {
            Status::Holds
        } else {
            Status::Fails
        };
        TheoremVerdict {
            theorem,
            status,
            clauses,
            reason: None,
        }
    }

    fn not_applicable(theorem: Theorem, reason: String) -> Self {
        TheoremVerdict {
            theorem,
            status: Status::NotApplicable,
            clauses: Vec::new(),
            reason: Some(reason),
        }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

type Distributivity<E> = Result<Option<DistributivityWitness<E>>, AlgebraError>;

/// Per-algebra state shared across many verifications; the distributivity
/// probe runs at most once.
pub struct VerifyContext<'a, A: InverseAlgebra> {
    alg: &'a A,
    distributivity: OnceLock<Distributivity<A::Elem>>,
}

impl<'a, A: InverseAlgebra> VerifyContext<'a, A> {
    pub fn new(alg: &'a A) -> Self {
        VerifyContext {
            alg,
            distributivity: OnceLock::new(),
        }
    }

    pub fn algebra(&self) -> &'a A {
        self.alg
    }

    pub fn distributivity(&self) -> &Distributivity<A::Elem> {
        self.distributivity
            .get_or_init(|| find_distributivity_violation(self.alg, DISTRIBUTIVITY_SET_SIZE))
    }
}

/// A candidate factorization: local identities `f_j`, each the supremum of
/// a group of orbit classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternative<E> {
    pub groups: Vec<Vec<usize>>,
    pub identities: Vec<E>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternativeOutcome<E> {
    /// `(f_j, U_j)` with `U_j = { f_j s f_j }` sorted.
    pub factors: Vec<(E, Vec<E>)>,
    pub weakly_transitive: Vec<bool>,
    pub recovery: bool,
}

impl<E> AlternativeOutcome<E> {
    pub fn valid(&self) -> bool {
        self.recovery && self.weakly_transitive.iter().all(|&b| b)
    }
}

/// Checks whether `S` is recovered as the supremum of its compressions into
/// the local algebras `f_j A f_j`, with each compression weakly transitive
/// there.
pub fn check_alternative<A: InverseAlgebra>(
    alg: &A,
    elements: &[A::Elem],
    identities: &[A::Elem],
) -> Result<AlternativeOutcome<A::Elem>, AlgebraError> {
    for f in identities {
        alg.check_member(f)?;
        if !alg.is_idempotent(f) {
            return Err(AlgebraError::NotIdempotent(alg.format(f)));
        }
    }
    let compress = |f: &A::Elem, s: &A::Elem| alg.compose(&alg.compose(f, s), f);
    let mut factors = Vec::with_capacity(identities.len());
    let mut weakly_transitive = Vec::with_capacity(identities.len());
    for f in identities {
        let u: Vec<A::Elem> = elements.iter().map(|s| compress(f, s)).sorted().dedup().collect();
        weakly_transitive.push(classify_in(alg, &u, f).weakly_transitive);
        factors.push((f.clone(), u));
    }
    let recovery = elements.iter().all(|s| {
        let parts: Vec<A::Elem> = identities.iter().map(|f| compress(f, s)).collect();
        parts.iter().all(|x| alg.le(x, s)) && crate::algebra::sup_below(alg, &parts, s) == *s
    });
    Ok(AlternativeOutcome {
        factors,
        weakly_transitive,
        recovery,
    })
}

/// Every way of choosing some orbit classes and grouping them.
pub fn enumerate_alternatives<A: InverseAlgebra>(
    alg: &A,
    d: &OrbitDecomposition<A::Elem>,
) -> Result<Vec<Alternative<A::Elem>>, AlgebraError> {
    let k = d.len();
    if k > MAX_ALTERNATIVE_CLASSES {
        return Err(AlgebraError::SizeGuard {
            guard: "orbit classes for alternative enumeration",
            n: k,
            max: MAX_ALTERNATIVE_CLASSES,
        });
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        let chosen: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        for groups in set_partitions_of(&chosen) {
            let identities = groups
                .iter()
                .map(|g| {
                    let prims: Vec<A::Elem> = g.iter().flat_map(|&i| d.orbits[i].primitives.clone()).collect();
                    alg.idempotent_sup(&prims)
                })
                .collect();
            out.push(Alternative { groups, identities });
        }
    }
    Ok(out)
}

fn set_partitions_of(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions_of(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        let mut q = p;
        q.insert(0, vec![first]);
        out.push(q);
    }
    out
}

pub fn verify_theorem<A: InverseAlgebra>(
    ctx: &VerifyContext<'_, A>,
    s: &Subsemigroup<'_, A>,
    which: Theorem,
) -> Result<TheoremVerdict, InvariantViolation> {
    let alg = ctx.algebra();
    if which == Theorem::T1 {
        return verify_t1(s);
    }
    let d = decompose(s)?;
    let cert = certify_schein(s, &d);
    let factor_flags = (0..d.len())
        .map(|i| factor_properties(alg, &d, i))
        .collect::<Result<Vec<_>, _>>()?;
    let failing = |pred: &dyn Fn(usize) -> bool| -> Option<String> {
        let bad: Vec<String> = (0..d.len())
            .filter(|&i| !pred(i))
            .map(|i| (i + 1).to_string())
            .collect();
        (!bad.is_empty()).then(|| format!("factors {}", bad.join(", ")))
    };
    let schein_clause = || {
        let detail = [&cert.bounded, &cert.homomorphism, &cert.schein]
            .iter()
            .find_map(|c| c.witness.clone());
        Clause::new("product of projections is a Schein sum", cert.is_schein_sum(), detail)
    };
    let recovery_clause = || {
        Clause::new(
            "omega recovers every element",
            cert.recovery.holds,
            cert.recovery.witness.clone(),
        )
    };
    let wt = failing(&|i| factor_flags[i].weakly_transitive);
    let tr = failing(&|i| factor_flags[i].transitive);

    match which {
        Theorem::T1 => unreachable!(),
        Theorem::T2 => {
            let we = failing(&|i| factor_flags[i].weakly_effective);
            Ok(TheoremVerdict::from_clauses(
                which,
                vec![
                    Clause::new("each factor weakly effective in its local algebra", we.is_none(), we),
                    schein_clause(),
                    recovery_clause(),
                ],
            ))
        }
        Theorem::T3 => {
            if !d.flags.disperse {
                return Ok(TheoremVerdict::not_applicable(which, "S is not disperse".into()));
            }
            let we = failing(&|i| factor_flags[i].weakly_effective);
            let mut clauses = vec![
                Clause::new("each factor weakly effective in its local algebra", we.is_none(), we),
                Clause::new("each factor weakly transitive", wt.is_none(), wt),
                schein_clause(),
                recovery_clause(),
            ];
            if d.flags.effective {
                clauses.push(Clause::new("S effective, so each factor transitive", tr.is_none(), tr));
            }
            Ok(TheoremVerdict::from_clauses(which, clauses))
        }
        Theorem::T4 => {
            match ctx.distributivity() {
                Err(e) => {
                    return Ok(TheoremVerdict::not_applicable(
                        which,
                        format!("complete distributivity cannot be checked: {e}"),
                    ))
                }
                Ok(Some(w)) => {
                    return Ok(TheoremVerdict::not_applicable(
                        which,
                        format!(
                            "algebra is not completely distributive: {} sup{{{}}} != sup{{x y}}",
                            alg.format(&w.x),
                            w.ys.iter().map(|y| alg.format(y)).join(", ")
                        ),
                    ))
                }
                Ok(None) => {}
            }
            if !d.flags.effective {
                return Ok(TheoremVerdict::not_applicable(which, "S is not effective".into()));
            }
            let uniqueness = match uniqueness_clause(alg, &d) {
                Ok(c) => c,
                Err(e) => return Ok(TheoremVerdict::not_applicable(which, e.to_string())),
            };
            Ok(TheoremVerdict::from_clauses(
                which,
                vec![
                    Clause::new("each factor transitive", tr.is_none(), tr),
                    schein_clause(),
                    Clause::new(
                        "Schein sum is orthogonal",
                        cert.orthogonal.holds,
                        cert.orthogonal.witness.clone(),
                    ),
                    recovery_clause(),
                    uniqueness,
                ],
            ))
        }
    }
}

fn uniqueness_clause<A: InverseAlgebra>(alg: &A, d: &OrbitDecomposition<A::Elem>) -> Result<Clause, AlgebraError> {
    let mut canonical: Vec<(A::Elem, Vec<A::Elem>)> =
        d.orbits.iter().map(|o| (o.identity.clone(), o.image.clone())).collect();
    canonical.sort();
    let alternatives = enumerate_alternatives(alg, d)?;
    let mut valid = 0;
    for alt in &alternatives {
        let outcome = check_alternative(alg, &d.elements, &alt.identities)?;
        if !outcome.valid() {
            continue;
        }
        valid += 1;
        let mut factors = outcome.factors;
        factors.sort();
        if factors != canonical {
            let groups = alt
                .groups
                .iter()
                .map(|g| format!("{{{}}}", g.iter().map(|i| i + 1).join(",")))
                .join(" ");
            return Ok(Clause::new(
                "factors unique up to order",
                false,
                Some(format!("grouping {groups} is valid with different factors")),
            ));
        }
    }
    Ok(Clause::new(
        "factors unique up to order",
        valid > 0,
        Some(format!(
            "{valid} of {} enumerated factorizations are valid, all with the canonical factors",
            alternatives.len()
        )),
    ))
}

fn verify_t1<A: InverseAlgebra>(s: &Subsemigroup<'_, A>) -> Result<TheoremVerdict, InvariantViolation> {
    let alg = s.algebra();
    let z = decompose_zero_direct(s)?;
    let parts: Vec<Vec<A::Elem>> = z.summands.iter().map(|m| m.elements.clone()).collect();
    let irreducible: Vec<String> = (0..z.len())
        .filter(|&i| !z.summands[i].irreducible)
        .map(|i| (i + 1).to_string())
        .collect();
    let effective: Vec<String> = (0..z.len())
        .filter(|&i| !z.summands[i].weakly_effective)
        .map(|i| (i + 1).to_string())
        .collect();
    let sigma = match crate::schein::zero_direct_sigma(alg, &parts) {
        Ok(cert) => {
            let ok = cert.injective.holds && cert.is_schein_sum() && cert.recovery.holds;
            let w = [&cert.injective, &cert.homomorphism, &cert.schein, &cert.recovery]
                .iter()
                .find_map(|c| c.witness.clone());
            Clause::new("sigma is an injective Schein sum", ok, w)
        }
        Err(e) => Clause::new("sigma is an injective Schein sum", false, Some(e.to_string())),
    };
    let covered: usize = parts.iter().map(Vec::len).sum();
    let expected = s.nonzero().count();
    let list = |v: Vec<String>| (!v.is_empty()).then(|| format!("summands {}", v.join(", ")));
    Ok(TheoremVerdict::from_clauses(
        Theorem::T1,
        vec![
            Clause::new(
                "summands partition the nonzero elements",
                covered == expected,
                Some(format!("{} summands", z.len())),
            ),
            Clause::new("each summand irreducible", irreducible.is_empty(), list(irreducible)),
            Clause::new(
                "each summand weakly effective in its local algebra",
                effective.is_empty(),
                list(effective),
            ),
            sigma,
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{DualSymInv, SymInv};

    #[test]
    fn partitions_of_subsets() {
        assert_eq!(set_partitions_of(&[0, 1, 2]).len(), 5);
        assert_eq!(set_partitions_of(&[]).len(), 1);
    }

    #[test]
    fn example_one_theorems() {
        let alg = DualSymInv::new(4).unwrap();
        let ctx = VerifyContext::new(&alg);
        let a = alg.parse("(12->13|34->24)").unwrap();
        let d = alg.parse("(1|234)").unwrap();
        let s = Subsemigroup::close(&alg, &[a, d]).unwrap();
        assert!(verify_theorem(&ctx, &s, Theorem::T1).unwrap().holds());
        assert!(verify_theorem(&ctx, &s, Theorem::T2).unwrap().holds());
        assert_eq!(
            verify_theorem(&ctx, &s, Theorem::T3).unwrap().status,
            Status::NotApplicable
        );
        assert_eq!(
            verify_theorem(&ctx, &s, Theorem::T4).unwrap().status,
            Status::NotApplicable
        );
    }

    #[test]
    fn example_four_t3() {
        let alg = DualSymInv::new(5).unwrap();
        let ctx = VerifyContext::new(&alg);
        let a = alg.parse("(1->2|4->3|235->145)").unwrap();
        let s = Subsemigroup::close(&alg, &[a]).unwrap();
        let v = verify_theorem(&ctx, &s, Theorem::T3).unwrap();
        assert!(v.holds(), "{v:?}");
    }

    #[test]
    fn partial_injection_t4() {
        let alg = SymInv::new(3).unwrap();
        let ctx = VerifyContext::new(&alg);
        let f = alg.parse("[1->2, 2->3, 3->1]").unwrap();
        let s = Subsemigroup::close(&alg, &[f]).unwrap();
        let v = verify_theorem(&ctx, &s, Theorem::T4).unwrap();
        assert!(v.holds(), "{v:?}");

        let g = alg.parse("[1->1, 2->2, 3->3]").unwrap();
        let s = Subsemigroup::close(&alg, &[g, alg.parse("[1->1]").unwrap()]).unwrap();
        let v = verify_theorem(&ctx, &s, Theorem::T4).unwrap();
        assert!(v.holds(), "{v:?}");
        let d = decompose(&s).unwrap();
        // merging the three fixed points is not weakly transitive
        let merged = check_alternative(&alg, &d.elements, &[alg.identity()]).unwrap();
        assert!(!merged.valid());
    }

    #[test]
    fn theorem_names_parse() {
        assert_eq!("t3".parse::<Theorem>().unwrap(), Theorem::T3);
        assert!("T5".parse::<Theorem>().is_err());
    }
}
