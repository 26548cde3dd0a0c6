//! Weak and strong equivalence of two representations of one table.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::InverseAlgebra;
use crate::error::AlgebraError;
use crate::homsearch::{find_embedding, SearchOptions, SearchOutcome};
use crate::subsemigroup::Subsemigroup;
use crate::table::CarrierTable;

/// Largest degree for which strong equivalence searches the whole codomain.
pub const MAX_STRONG_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("representation {0} has no source table attached")]
    MissingRepresentation(usize),
    #[error("the two representations have different source tables")]
    DifferentSources,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("isomorphism search exceeded its budget")]
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    /// An isomorphism of the images commutes with the representations.
    pub weak: bool,
    /// An isomorphism of the codomains does; `None` when not asked for.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub strong: Option<bool>,
    /// The forced isomorphism of images, as (from, to) pairs, when it exists.
    pub theta: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl EquivalenceVerdict {
    pub fn equivalent(&self) -> bool {
        self.strong.unwrap_or(self.weak)
    }
}

/// Decides whether `phi` and `psi` are weakly equivalent, and when `weak` is
/// false also whether they are strongly equivalent.
pub fn equivalent<A: InverseAlgebra, B: InverseAlgebra>(
    phi: &Subsemigroup<'_, A>,
    psi: &Subsemigroup<'_, B>,
    weak: bool,
) -> Result<EquivalenceVerdict, EquivalenceError> {
    let (a1, a2) = (phi.algebra(), psi.algebra());
    let r1 = phi.representation().ok_or(EquivalenceError::MissingRepresentation(1))?;
    let r2 = psi.representation().ok_or(EquivalenceError::MissingRepresentation(2))?;
    if r1.table != r2.table {
        return Err(EquivalenceError::DifferentSources);
    }
    // theta is forced: theta(phi t) = psi t.
    let n = r1.table.len();
    let mut theta: Vec<(usize, usize)> = Vec::new();
    let mut reason = None;
    'pairs: for t in 0..n {
        for u in 0..n {
            let same1 = r1.images[t] == r1.images[u];
            let same2 = r2.images[t] == r2.images[u];
            if same1 != same2 {
                let label = |k: usize| r1.table.label(k as u32).to_string();
                reason = Some(format!(
                    "{} and {} are identified by {} representation only",
                    label(t),
                    label(u),
                    if same1 { "the first" } else { "the second" }
                ));
                theta.clear();
                break 'pairs;
            }
        }
        if !theta.iter().any(|&(x, _)| r1.images[x] == r1.images[t]) {
            theta.push((t, t));
        }
    }
    let weak_ok = reason.is_none();
    let theta_text: Vec<(String, String)> = theta
        .iter()
        .map(|&(t, _)| (a1.format(&r1.images[t]), a2.format(&r2.images[t])))
        .collect();
    if weak || !weak_ok {
        return Ok(EquivalenceVerdict {
            weak: weak_ok,
            strong: (!weak).then_some(false),
            theta: theta_text,
            reason,
        });
    }

    for d in [a1.degree(), a2.degree()] {
        if d > MAX_STRONG_DEGREE {
            return Err(AlgebraError::SizeGuard {
                guard: "strong equivalence degree",
                n: d,
                max: MAX_STRONG_DEGREE,
            }
            .into());
        }
    }
    let t1 = CarrierTable::build(a1)?;
    let t2 = CarrierTable::build(a2)?;
    if t1.len() != t2.len() {
        return Ok(EquivalenceVerdict {
            weak: true,
            strong: Some(false),
            theta: theta_text,
            reason: Some(format!("codomains have {} and {} elements", t1.len(), t2.len())),
        });
    }
    let forced = theta
        .iter()
        .map(|&(t, _)| {
            (
                t1.index_of(&r1.images[t]).expect("image lies in carrier"),
                t2.index_of(&r2.images[t]).expect("image lies in carrier"),
            )
        })
        .collect();
    let opts = SearchOptions {
        forced,
        match_down_sets: true,
        ..SearchOptions::default()
    };
    let (strong, reason) = match find_embedding(&t1.to_cayley(a1), &t2, &opts) {
        SearchOutcome::Found(_) => (true, None),
        SearchOutcome::NotFound => (false, Some("no isomorphism of the codomains extends theta".to_string())),
        SearchOutcome::BudgetExhausted => return Err(EquivalenceError::BudgetExhausted),
    };
    Ok(EquivalenceVerdict {
        weak: true,
        strong: Some(strong),
        theta: theta_text,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::CayleyTable;
    use crate::DualSymInv;

    const T: &str = include_str!("../../data/brandt_plus_point.table");

    #[test]
    fn examples_one_and_two_are_weakly_but_not_strongly_equivalent() {
        let table = CayleyTable::load(T).unwrap();
        let alg = DualSymInv::new(4).unwrap();
        let p = |s: &str| alg.parse(s).unwrap();
        let phi = Subsemigroup::image_of(
            &alg,
            &table,
            &[("a".into(), p("(12->13|34->24)")), ("d".into(), p("(1|234)"))],
        )
        .unwrap();
        let psi = Subsemigroup::image_of(
            &alg,
            &table,
            &[("a".into(), p("(12->2|34->134)")), ("d".into(), p("(1|234)"))],
        )
        .unwrap();
        assert!(phi.representation().unwrap().injective && psi.representation().unwrap().injective);
        let v = equivalent(&phi, &psi, true).unwrap();
        assert!(v.weak && v.strong.is_none());
        let v = equivalent(&phi, &psi, false).unwrap();
        assert_eq!(v.strong, Some(false));
        let v = equivalent(&phi, &phi, false).unwrap();
        assert_eq!(v.strong, Some(true));
    }

    #[test]
    fn faithful_and_zero_are_inequivalent() {
        let table = CayleyTable::load(T).unwrap();
        let alg = DualSymInv::new(4).unwrap();
        let p = |s: &str| alg.parse(s).unwrap();
        let phi = Subsemigroup::image_of(
            &alg,
            &table,
            &[("a".into(), p("(12->13|34->24)")), ("d".into(), p("(1|234)"))],
        )
        .unwrap();
        let zero = Subsemigroup::image_of(&alg, &table, &[("a".into(), alg.zero()), ("d".into(), alg.zero())]).unwrap();
        let v = equivalent(&phi, &zero, true).unwrap();
        assert!(!v.weak && !v.equivalent());
    }
}
