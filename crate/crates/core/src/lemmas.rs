//! Exhaustive structural checks on a single subsemigroup. Each check is
//! evaluated directly from the definitions, independently of the shortcuts
//! taken by the decomposition code, and every failure is collected.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{ehresmann_sup, InverseAlgebra};
use crate::orbits::{
    build_t_relation_in, classify, decompose, factor_properties, local_primitives, predicted_factor_properties,
    tfae_unchecked, OrbitDecomposition,
};
use crate::schein::certify_schein;
use crate::subsemigroup::Subsemigroup;
use crate::zero_direct::{check_stnz, decompose_zero_direct, incident, ZeroDirectDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// The four characterizations of `p T q` via one `s` agree.
    Tfae,
    /// transitive => effective, and effective + weakly transitive => transitive.
    TransitiveImpliesEffective,
    /// `s phi_i = e_i s = s e_i = e_i s e_i`.
    ProjectionFormula,
    /// `T_{S_i}` is `T_S` restricted to `A_i`.
    RestrictedRelation,
    /// A class meeting `A_i` lies inside it.
    ClassRefinement,
    /// Factor flags agree with what the class structure predicts.
    FactorFlags,
    /// `phi_i` is a homomorphism on all pairs.
    ProjectionHomomorphism,
    /// `s = sup { s phi_i }`.
    Recovery,
    /// `omega` is a homomorphism on the image and undoes the product map.
    OmegaIdentity,
    /// Bounded tuples are closed under product and inverse.
    BoundedClosed,
    /// `U N = N K` for the transitive closures.
    IncidenceClosures,
    /// Each summand is fixed by its local identity.
    SummandLocal,
    /// `s t != 0` puts `s`, `t`, `s t` in one summand.
    NonzeroProductSameSummand,
    /// Each summand with zero is closed.
    SummandClosed,
    /// Distinct summands multiply to zero.
    SummandsOrthogonal,
    /// Each summand is irreducible and weakly effective in its local algebra.
    SummandFlags,
    /// Every orbit lies in a single summand's primitives.
    OrbitInSummand,
    /// Related primitives are D-related through an element below `S`.
    RelationInsideD,
    /// `e_i e_j = 0` iff `A_i A_j = {0}` iff `A_i ∩ A_j = {0}`.
    LocalAlgebraIndependence,
    /// Independent local algebras give `S_i S_j = {0}` and `S_i ∩ S_j ⊆ {0}`.
    IndependentImages,
    /// Pairwise `e_i e_j = 0` implies disperse.
    OrthogonalIdentitiesDisperse,
    /// Under complete distributivity, `A_i ∩ P = P_i` and `e_i e_j = 0`.
    DistributiveLocalPrimitives,
    /// The decomposition code itself reported a violated invariant.
    Internal,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&kebab_name(*self))
    }
}

fn kebab_name(c: Check) -> String {
    let raw = format!("{c:?}");
    let mut out = String::new();
    for (i, ch) in raw.chars().enumerate() {
        if ch.is_ascii_uppercase() {
            if i > 0 {
                out.push('-');
            }
            out.push(ch.to_ascii_lowercase());
        } else {
            out.push(ch);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: Check,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LemmaOptions {
    /// The algebra is known to be completely distributive.
    pub distributive: bool,
    /// Enumerate local algebras `e_i A e_i` for the independence checks.
    pub enumerate_local_algebras: bool,
}

struct Collector(Vec<Violation>);

impl Collector {
    fn fail(&mut self, check: Check, detail: impl Into<String>) {
        self.0.push(Violation {
            check,
            detail: detail.into(),
        });
    }

    fn ensure(&mut self, check: Check, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.fail(check, detail());
        }
    }
}

/// Runs every check on `S`. An empty result means no violation.
pub fn check_subsemigroup<A: InverseAlgebra>(s: &Subsemigroup<'_, A>, opts: LemmaOptions) -> Vec<Violation> {
    let alg = s.algebra();
    let mut out = Collector(Vec::new());
    let f = |x: &A::Elem| alg.format(x);
    let elements = s.elements();
    let prims = alg.primitive_idempotents();

    for p in &prims {
        for q in &prims {
            for x in elements {
                let v = tfae_unchecked(alg, p, q, x);
                out.ensure(Check::Tfae, v.iter().all(|&b| b == v[0]), || {
                    format!("p = {}, q = {}, s = {}: {v:?}", f(p), f(q), f(x))
                });
            }
        }
    }

    let flags = classify(alg, elements);
    out.ensure(
        Check::TransitiveImpliesEffective,
        !flags.transitive || flags.effective,
        || "transitive but not effective".into(),
    );
    out.ensure(
        Check::TransitiveImpliesEffective,
        !(flags.effective && flags.weakly_transitive) || flags.transitive,
        || "effective and weakly transitive but not transitive".into(),
    );

    match decompose(s) {
        Ok(d) => check_orbits(s, &d, opts, &mut out),
        Err(e) => out.fail(Check::Internal, e.to_string()),
    }
    match decompose_zero_direct(s) {
        Ok(z) => check_zero_direct(s, &z, &mut out),
        Err(e) => out.fail(Check::Internal, e.to_string()),
    }
    if let (Ok(d), Ok(z)) = (decompose(s), decompose_zero_direct(s)) {
        for (i, o) in d.orbits.iter().enumerate() {
            let hits = z
                .summands
                .iter()
                .filter(|m| o.primitives.iter().all(|p| m.primitives.contains(p)))
                .count();
            out.ensure(Check::OrbitInSummand, hits == 1, || {
                format!("orbit {} lies in {hits} summands", i + 1)
            });
        }
    }
    out.0
}

fn check_orbits<A: InverseAlgebra>(
    s: &Subsemigroup<'_, A>,
    d: &OrbitDecomposition<A::Elem>,
    opts: LemmaOptions,
    out: &mut Collector,
) {
    let alg = s.algebra();
    let f = |x: &A::Elem| alg.format(x);
    let elements = &d.elements;
    let index: HashMap<&A::Elem, usize> = elements.iter().enumerate().map(|(k, x)| (x, k)).collect();
    let rel = &d.relation;
    let prim_index: HashMap<&A::Elem, usize> = rel.primitives.iter().enumerate().map(|(k, p)| (p, k)).collect();

    for (i, o) in d.orbits.iter().enumerate() {
        let e = &o.identity;
        for (k, x) in elements.iter().enumerate() {
            let forms = [
                o.projection[k].clone(),
                alg.compose(e, x),
                alg.compose(x, e),
                alg.compose(&alg.compose(e, x), e),
            ];
            out.ensure(Check::ProjectionFormula, forms.iter().all(|y| *y == forms[0]), || {
                format!(
                    "orbit {}, s = {}: {}",
                    i + 1,
                    f(x),
                    forms.iter().map(f).collect::<Vec<_>>().join(" / ")
                )
            });
        }

        // restriction of T_S to A_i against T_{S_i} computed inside A_i
        let local = local_primitives(alg, e);
        let inner = build_t_relation_in(alg, &o.image, local.clone());
        for (a, p) in local.iter().enumerate() {
            for (b, q) in local.iter().enumerate() {
                let outer = rel.related(prim_index[p], prim_index[q]);
                out.ensure(Check::RestrictedRelation, inner.related(a, b) == outer, || {
                    format!(
                        "orbit {}: ({}, {}) related in S_i: {}, in S: {outer}",
                        i + 1,
                        f(p),
                        f(q),
                        !outer
                    )
                });
            }
        }

        for (j, c) in rel.classes.iter().enumerate() {
            let inside = c.iter().filter(|&&k| alg.le(&rel.primitives[k], e)).count();
            out.ensure(Check::ClassRefinement, inside == 0 || inside == c.len(), || {
                format!(
                    "class {} meets A_{} in {inside} of {} primitives",
                    j + 1,
                    i + 1,
                    c.len()
                )
            });
        }

        match factor_properties(alg, d, i) {
            Ok(got) => {
                let want = predicted_factor_properties(alg, d, i);
                let pairs = [
                    ("weakly effective", got.weakly_effective, want.weakly_effective),
                    ("effective", got.effective, want.effective),
                    ("weakly transitive", got.weakly_transitive, want.weakly_transitive),
                    ("transitive", got.transitive, want.transitive),
                ];
                for (name, g, w) in pairs {
                    out.ensure(Check::FactorFlags, g == w, || {
                        format!("factor {}: {name} is {g}, predicted {w}", i + 1)
                    });
                }
            }
            Err(e) => out.fail(Check::Internal, e.to_string()),
        }

        for (a, x) in elements.iter().enumerate() {
            for (b, y) in elements.iter().enumerate() {
                let c = index[&alg.compose(x, y)];
                let lhs = &o.projection[c];
                let rhs = alg.compose(&o.projection[a], &o.projection[b]);
                out.ensure(Check::ProjectionHomomorphism, *lhs == rhs, || {
                    format!("orbit {}: s = {}, t = {}", i + 1, f(x), f(y))
                });
            }
        }
    }

    for (k, x) in elements.iter().enumerate() {
        let parts: Vec<A::Elem> = d.orbits.iter().map(|o| o.projection[k].clone()).collect();
        match ehresmann_sup(alg, &parts, x) {
            Ok(w) => out.ensure(Check::Recovery, w == *x, || {
                format!("sup of projections of {} is {}", f(x), f(&w))
            }),
            Err(e) => out.fail(Check::Recovery, e.to_string()),
        }
    }

    let cert = certify_schein(s, d);
    for (name, c) in [
        ("bounded", &cert.bounded),
        ("product map", &cert.homomorphism),
        ("omega", &cert.schein),
        ("recovery", &cert.recovery),
    ] {
        out.ensure(Check::OmegaIdentity, c.holds, || {
            format!("{name}: {}", c.witness.clone().unwrap_or_default())
        });
    }
    for r in &cert.rows {
        let inv: Vec<A::Elem> = r.tuple.iter().map(|t| alg.inverse(t)).collect();
        let ri = alg.inverse(&r.element);
        out.ensure(Check::BoundedClosed, inv.iter().all(|t| alg.le(t, &ri)), || {
            format!("inverse tuple of {} is not bounded by {}", f(&r.element), f(&ri))
        });
        for h in &cert.rows {
            let st = alg.compose(&r.element, &h.element);
            let ok = r
                .tuple
                .iter()
                .zip(&h.tuple)
                .all(|(a, b)| alg.le(&alg.compose(a, b), &st));
            out.ensure(Check::BoundedClosed, ok, || {
                format!(
                    "product tuple of {} and {} is not bounded",
                    f(&r.element),
                    f(&h.element)
                )
            });
        }
    }

    related_primitives_are_d_related(alg, d, out);
    local_algebra_checks(s, d, opts, out);
}

fn related_primitives_are_d_related<A: InverseAlgebra>(alg: &A, d: &OrbitDecomposition<A::Elem>, out: &mut Collector) {
    let rel = &d.relation;
    for c in &rel.classes {
        for &a in c {
            for &b in c {
                let (p, q) = (&rel.primitives[a], &rel.primitives[b]);
                // an element x <= p s q with x x^-1 = p and x^-1 x = q
                let found = d.elements.iter().any(|s| {
                    let x = alg.compose(&alg.compose(p, s), q);
                    !alg.is_zero(&x)
                        && alg.compose(&x, &alg.inverse(&x)) == *p
                        && alg.compose(&alg.inverse(&x), &x) == *q
                });
                let (fp, fq) = (alg.format(p), alg.format(q));
                out.ensure(Check::RelationInsideD, found, || format!("no witness for {fp} D {fq}"));
            }
        }
    }
}

fn local_algebra_checks<A: InverseAlgebra>(
    s: &Subsemigroup<'_, A>,
    d: &OrbitDecomposition<A::Elem>,
    opts: LemmaOptions,
    out: &mut Collector,
) {
    let alg = s.algebra();
    let f = |x: &A::Elem| alg.format(x);
    let ids: Vec<&A::Elem> = d.orbits.iter().map(|o| &o.identity).collect();
    let k = ids.len();
    let orthogonal = |i: usize, j: usize| alg.is_zero(&alg.compose(ids[i], ids[j]));

    let all_orthogonal = (0..k).all(|i| (0..k).all(|j| i == j || orthogonal(i, j)));
    out.ensure(
        Check::OrthogonalIdentitiesDisperse,
        !all_orthogonal || d.flags.disperse,
        || "identities pairwise orthogonal but S is not disperse".into(),
    );

    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            if !orthogonal(i, j) {
                continue;
            }
            let (si, sj) = (&d.orbits[i].image, &d.orbits[j].image);
            let products_zero = si.iter().all(|x| sj.iter().all(|y| alg.is_zero(&alg.compose(x, y))));
            let meet_zero = si.iter().all(|x| alg.is_zero(x) || !sj.contains(x));
            out.ensure(Check::IndependentImages, products_zero && meet_zero, || {
                format!("e_{} e_{} = 0 but S_{} and S_{} interact", i + 1, j + 1, i + 1, j + 1)
            });
        }
    }

    if opts.enumerate_local_algebras && k > 1 {
        let locals: Vec<Vec<A::Elem>> = ids
            .iter()
            .map(|e| {
                let mut v: Vec<A::Elem> = alg
                    .carrier()
                    .iter()
                    .map(|x| alg.compose(&alg.compose(e, x), e))
                    .collect();
                v.sort();
                v.dedup();
                v
            })
            .collect();
        for i in 0..k {
            for j in (0..k).filter(|&j| j != i) {
                let c1 = orthogonal(i, j);
                let c2 = locals[i]
                    .iter()
                    .all(|x| locals[j].iter().all(|y| alg.is_zero(&alg.compose(x, y))));
                let c3 = locals[i]
                    .iter()
                    .all(|x| alg.is_zero(x) || locals[j].binary_search(x).is_err());
                out.ensure(Check::LocalAlgebraIndependence, c1 == c2 && c2 == c3, || {
                    format!("local algebras {} and {}: {c1} / {c2} / {c3}", i + 1, j + 1)
                });
            }
        }
    }

    if opts.distributive {
        let rel = &d.relation;
        for (i, o) in d.orbits.iter().enumerate() {
            let inside: Vec<usize> = (0..rel.primitives.len())
                .filter(|&m| alg.le(&rel.primitives[m], &o.identity))
                .collect();
            out.ensure(Check::DistributiveLocalPrimitives, inside == rel.classes[i], || {
                format!("A_{} contains primitives outside its orbit", i + 1)
            });
            for j in (0..k).filter(|&j| j != i) {
                out.ensure(Check::DistributiveLocalPrimitives, orthogonal(i, j), || {
                    format!("e_{} e_{} = {}", i + 1, j + 1, f(&alg.compose(ids[i], ids[j])))
                });
            }
        }
    }
}

/// Reflexive-transitive closure of a symmetric relation by Warshall's
/// algorithm, restricted to the given domain.
fn warshall(mut m: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    let n = m.len();
    for k in 0..n {
        let through = m[k].clone();
        for row in m.iter_mut().filter(|row| row[k]) {
            for (x, &y) in row.iter_mut().zip(&through) {
                *x |= y;
            }
        }
    }
    m
}

fn check_zero_direct<A: InverseAlgebra>(
    s: &Subsemigroup<'_, A>,
    z: &ZeroDirectDecomposition<A::Elem>,
    out: &mut Collector,
) {
    let alg = s.algebra();
    let f = |x: &A::Elem| alg.format(x);
    let prims = alg.primitive_idempotents();
    let nonzero: Vec<A::Elem> = s.nonzero().cloned().collect();
    let n: Vec<Vec<bool>> = prims
        .iter()
        .map(|p| nonzero.iter().map(|x| incident(alg, p, x)).collect())
        .collect();
    let (np, ns) = (prims.len(), nonzero.len());
    let q_dom: Vec<bool> = (0..np).map(|a| n[a].iter().any(|&b| b)).collect();
    // N N^-1 on Q and N^-1 N on S*
    let nn: Vec<Vec<bool>> = (0..np)
        .map(|a| (0..np).map(|b| (0..ns).any(|x| n[a][x] && n[b][x])).collect())
        .collect();
    let nin: Vec<Vec<bool>> = (0..ns)
        .map(|x| (0..ns).map(|y| (0..np).any(|a| n[a][x] && n[a][y])).collect())
        .collect();
    let u = warshall(nn);
    let k = warshall(nin);
    for a in 0..np {
        for x in 0..ns {
            let un = (0..np).any(|b| u[a][b] && n[b][x]);
            let nk = (0..ns).any(|y| n[a][y] && k[y][x]);
            out.ensure(Check::IncidenceClosures, un == nk, || {
                format!("p = {}, s = {}: U N {un}, N K {nk}", f(&prims[a]), f(&nonzero[x]))
            });
        }
    }
    // the union-find summands agree with the closures
    for x in 0..ns {
        for y in 0..ns {
            let same = z.summand_of(&nonzero[x]).is_some() && z.summand_of(&nonzero[x]) == z.summand_of(&nonzero[y]);
            out.ensure(Check::IncidenceClosures, same == k[x][y], || {
                format!(
                    "{} and {}: summands {same}, K {}",
                    f(&nonzero[x]),
                    f(&nonzero[y]),
                    k[x][y]
                )
            });
        }
    }
    for a in (0..np).filter(|&a| q_dom[a]) {
        for b in (0..np).filter(|&b| q_dom[b]) {
            let same = z
                .summands
                .iter()
                .any(|m| m.primitives.contains(&prims[a]) && m.primitives.contains(&prims[b]));
            out.ensure(Check::IncidenceClosures, same == u[a][b], || {
                format!("{} and {}: summands {same}, U {}", f(&prims[a]), f(&prims[b]), u[a][b])
            });
        }
    }

    for (i, m) in z.summands.iter().enumerate() {
        for x in &m.elements {
            out.ensure(
                Check::SummandLocal,
                alg.compose(&m.identity, x) == *x && alg.compose(x, &m.identity) == *x,
                || format!("summand {}: {}", i + 1, f(x)),
            );
            for y in &m.elements {
                let xy = alg.compose(x, y);
                out.ensure(
                    Check::SummandClosed,
                    alg.is_zero(&xy) || m.elements.contains(&xy),
                    || format!("summand {}: {} {} = {}", i + 1, f(x), f(y), f(&xy)),
                );
            }
        }
        out.ensure(Check::SummandFlags, m.irreducible && m.weakly_effective, || {
            format!(
                "summand {}: irreducible {}, weakly effective {}",
                i + 1,
                m.irreducible,
                m.weakly_effective
            )
        });
        for (j, other) in z.summands.iter().enumerate().filter(|&(j, _)| j != i) {
            for x in &m.elements {
                for y in &other.elements {
                    out.ensure(Check::SummandsOrthogonal, alg.is_zero(&alg.compose(x, y)), || {
                        format!("summands {} and {}: {} {}", i + 1, j + 1, f(x), f(y))
                    });
                }
            }
        }
    }

    for x in s.elements() {
        for y in s.elements() {
            let ok = check_stnz(z, s, x, y).unwrap_or(false);
            out.ensure(Check::NonzeroProductSameSummand, ok, || {
                format!("s = {}, t = {}", f(x), f(y))
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{DualSymInv, SymInv};

    #[test]
    fn example_one_is_clean() {
        let alg = DualSymInv::new(4).unwrap();
        let a = alg.parse("(12->13|34->24)").unwrap();
        let d = alg.parse("(1|234)").unwrap();
        let s = Subsemigroup::close(&alg, &[a, d]).unwrap();
        let opts = LemmaOptions {
            enumerate_local_algebras: true,
            ..LemmaOptions::default()
        };
        assert_eq!(check_subsemigroup(&s, opts), Vec::new());
    }

    #[test]
    fn partial_injection_sample_is_clean() {
        let alg = SymInv::new(3).unwrap();
        let opts = LemmaOptions {
            distributive: true,
            enumerate_local_algebras: true,
        };
        for text in ["[1->2, 2->3]", "[1->1, 2->3, 3->2]", "[1->2]", "[]"] {
            let s = Subsemigroup::close(&alg, &[alg.parse(text).unwrap()]).unwrap();
            assert_eq!(check_subsemigroup(&s, opts), Vec::new(), "{text}");
        }
    }

    #[test]
    fn distributive_claims_fail_on_example_one() {
        // A_1 = whole algebra contains (1|234), which is another orbit
        let alg = DualSymInv::new(4).unwrap();
        let a = alg.parse("(12->13|34->24)").unwrap();
        let d = alg.parse("(1|234)").unwrap();
        let s = Subsemigroup::close(&alg, &[a, d]).unwrap();
        let opts = LemmaOptions {
            distributive: true,
            ..LemmaOptions::default()
        };
        let v = check_subsemigroup(&s, opts);
        assert!(!v.is_empty());
        assert!(v.iter().all(|x| x.check == Check::DistributiveLocalPrimitives));
    }

    #[test]
    fn check_names_are_kebab_case() {
        assert_eq!(
            Check::TransitiveImpliesEffective.to_string(),
            "transitive-implies-effective"
        );
        assert_eq!(Check::Tfae.to_string(), "tfae");
    }
}
