//! Replays four worked block-bijection examples and compares every recorded
//! value with the computed one.

use serde::{Deserialize, Serialize};

use crate::algebra::{ehresmann_sup, InverseAlgebra};
use crate::error::AlgebraError;
use crate::orbits::{classify, decompose, enclosing_identity, factor_properties, OrbitDecomposition};
use crate::schein::{omega, BoundedTuple};
use crate::subsemigroup::Subsemigroup;
use crate::table::CayleyTable;
use crate::DualSymInv;

pub const EXAMPLES: [usize; 4] = [1, 2, 3, 4];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub name: String,
    pub expected: String,
    pub computed: String,
}

impl Item {
    pub fn ok(&self) -> bool {
        self.expected == self.computed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleOutcome {
    pub example: usize,
    pub items: Vec<Item>,
}

impl ExampleOutcome {
    pub fn passed(&self) -> bool {
        self.items.iter().all(Item::ok)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Item> {
        self.items.iter().filter(|i| !i.ok())
    }
}

struct Run<'a, A: InverseAlgebra> {
    alg: &'a A,
    items: Vec<Item>,
}

impl<'a, A: InverseAlgebra> Run<'a, A> {
    fn new(alg: &'a A) -> Self {
        Run { alg, items: Vec::new() }
    }

    fn check(&mut self, name: &str, expected: impl ToString, computed: impl ToString) {
        self.items.push(Item {
            name: name.to_string(),
            expected: expected.to_string(),
            computed: computed.to_string(),
        });
    }

    fn el(&self, text: &str) -> A::Elem {
        self.alg
            .parse(text)
            .unwrap_or_else(|e| panic!("corpus notation `{text}` does not parse: {e}"))
    }

    fn fmt(&self, x: &A::Elem) -> String {
        self.alg.format(x)
    }

    /// Sorted, comma-joined notation of a set.
    fn set<'x>(&self, xs: impl IntoIterator<Item = &'x A::Elem>) -> String
    where
        A::Elem: 'x,
    {
        let mut v: Vec<String> = xs.into_iter().map(|x| self.fmt(x)).collect();
        v.sort();
        v.dedup();
        format!("{{{}}}", v.join(", "))
    }

    fn set_of(&self, texts: &[&str]) -> String {
        let v: Vec<A::Elem> = texts.iter().map(|t| self.el(t)).collect();
        self.set(&v)
    }

    fn close(&mut self, gens: &[&str]) -> Option<Subsemigroup<'a, A>> {
        let gens: Vec<A::Elem> = gens.iter().map(|t| self.el(t)).collect();
        match Subsemigroup::close(self.alg, &gens) {
            Ok(s) => Some(s),
            Err(e) => {
                self.check("closure", "a subsemigroup", e);
                None
            }
        }
    }

    fn decompose(&mut self, s: &Subsemigroup<'_, A>) -> Option<OrbitDecomposition<A::Elem>> {
        match decompose(s) {
            Ok(d) => Some(d),
            Err(e) => {
                self.check("decompose", "no invariant violation", e);
                None
            }
        }
    }

    /// Index of the orbit whose primitives are exactly `texts`.
    fn orbit(&mut self, d: &OrbitDecomposition<A::Elem>, texts: &[&str]) -> Option<usize> {
        let want = self.set_of(texts);
        let found = d.orbits.iter().position(|o| self.set(&o.primitives) == want);
        if found.is_none() {
            let have: Vec<String> = d.orbits.iter().map(|o| self.set(&o.primitives)).collect();
            self.check("orbit present", &want, have.join(" "));
        }
        found
    }

    /// `phi` of orbit `i` as `x -> y` pairs over the listed elements.
    fn projection(&self, d: &OrbitDecomposition<A::Elem>, i: usize, of: &[A::Elem]) -> String {
        of.iter()
            .map(|x| match d.elements.iter().position(|y| y == x) {
                Some(k) => format!("{} -> {}", self.fmt(x), self.fmt(&d.orbits[i].projection[k])),
                None => format!("{} -> (not in S)", self.fmt(x)),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }

    fn map_text(&self, pairs: &[(&A::Elem, &A::Elem)]) -> String {
        pairs
            .iter()
            .map(|(x, y)| format!("{} -> {}", self.fmt(x), self.fmt(y)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Runs the corpus on the block-bijection algebras.
pub fn run_corpus(only: Option<usize>) -> Result<Vec<ExampleOutcome>, AlgebraError> {
    run_corpus_with(DualSymInv::new, only)
}

/// Runs the corpus on algebras built by `make(n)`, which must accept the
/// block-bijection notation.
pub fn run_corpus_with<A: InverseAlgebra>(
    make: impl Fn(usize) -> Result<A, AlgebraError>,
    only: Option<usize>,
) -> Result<Vec<ExampleOutcome>, AlgebraError> {
    let mut out = Vec::new();
    for example in EXAMPLES {
        if only.is_some_and(|k| k != example) {
            continue;
        }
        let items = match example {
            1 => example_one(&make(4)?),
            2 => example_two(&make(4)?),
            3 => example_three(&make(3)?),
            _ => example_four(&make(5)?),
        };
        out.push(ExampleOutcome { example, items });
    }
    Ok(out)
}

fn example_one<A: InverseAlgebra>(alg: &A) -> Vec<Item> {
    let mut r = Run::new(alg);
    let a = r.el("(12->13|34->24)");
    let delta = r.el("(1|234)");
    let ai = alg.inverse(&a);
    r.check("alpha alpha^-1", "(12|34)", r.fmt(&alg.compose(&a, &ai)));
    r.check("alpha^-1 alpha", "(13|24)", r.fmt(&alg.compose(&ai, &a)));
    let Some(s) = r.close(&["(12->13|34->24)", "(1|234)"]) else {
        return r.items;
    };
    r.check("|S|", 6, s.len());
    let listed = [
        alg.zero(),
        delta.clone(),
        a.clone(),
        ai.clone(),
        alg.compose(&a, &ai),
        alg.compose(&ai, &a),
    ];
    r.check("S", r.set(&listed), r.set(s.elements()));

    let p = r.el("(2|134)");
    let killed: Vec<A::Elem> = [alg.zero(), delta.clone(), a.clone(), ai.clone()]
        .iter()
        .map(|x| alg.compose(&p, x))
        .collect();
    r.check(
        "(2|134) x for x in {NABLA, delta, alpha, alpha^-1}",
        r.set_of(&["(1234)"]),
        r.set(&killed),
    );

    let flags = classify(alg, s.elements());
    r.check("weakly effective", true, flags.weakly_effective);
    r.check("effective", false, flags.effective);
    let sup = ehresmann_sup(alg, &[r.el("(12|34)"), r.el("(13|24)")], &alg.identity());
    r.check(
        "sup{(12|34), (13|24)}",
        "(1|2|3|4)",
        sup.map_or_else(|e| e.to_string(), |x| r.fmt(&x)),
    );

    let Some(d) = r.decompose(&s) else {
        return r.items;
    };
    r.check("number of orbits", 2, d.len());
    let (Some(i1), Some(i2)) = (r.orbit(&d, &["(12|34)", "(13|24)"]), r.orbit(&d, &["(1|234)"])) else {
        return r.items;
    };
    let p_dead = d.relation.primitives.iter().position(|x| *x == p);
    r.check(
        "(2|134) outside dom T",
        true,
        p_dead.is_some_and(|k| !d.relation.in_domain(k)),
    );
    let (e1, e2) = (&d.orbits[i1].identity, &d.orbits[i2].identity);
    r.check("e1", "(1|2|3|4)", r.fmt(e1));
    r.check("e2", "(1|234)", r.fmt(e2));
    r.check("e2 <= e1", true, alg.le(e2, e1));

    let ids: Vec<(&A::Elem, &A::Elem)> = s.elements().iter().map(|x| (x, x)).collect();
    r.check("phi1", r.map_text(&ids), r.projection(&d, i1, s.elements()));
    let zero = alg.zero();
    let phi2: Vec<(&A::Elem, &A::Elem)> = s
        .elements()
        .iter()
        .map(|x| (x, if *x == delta { x } else { &zero }))
        .collect();
    r.check("phi2", r.map_text(&phi2), r.projection(&d, i2, s.elements()));
    r.check("S1", r.set(s.elements()), r.set(&d.orbits[i1].image));
    r.check("S2", r.set(&[delta.clone(), alg.zero()]), r.set(&d.orbits[i2].image));

    match (factor_properties(alg, &d, i1), factor_properties(alg, &d, i2)) {
        (Ok(f1), Ok(f2)) => {
            r.check("S1 weakly transitive", false, f1.weakly_transitive);
            r.check("S2 transitive", true, f2.transitive);
        }
        (Err(e), _) | (_, Err(e)) => r.check("factor flags", "computed", e),
    }
    r.items
}

fn example_two<A: InverseAlgebra>(alg: &A) -> Vec<Item> {
    let mut r = Run::new(alg);
    let b = r.el("(12->2|34->134)");
    let delta = r.el("(1|234)");
    let Some(s) = r.close(&["(12->2|34->134)", "(1|234)"]) else {
        return r.items;
    };
    let bi = alg.inverse(&b);
    let listed = [
        alg.zero(),
        delta,
        b.clone(),
        bi.clone(),
        alg.compose(&b, &bi),
        alg.compose(&bi, &b),
    ];
    r.check("|S|", 6, s.len());
    r.check("S", r.set(&listed), r.set(s.elements()));
    let p = r.el("(4|123)");
    let ps: Vec<A::Elem> = s.elements().iter().map(|x| alg.compose(&p, x)).collect();
    r.check("(4|123) S", r.set_of(&["(1234)"]), r.set(&ps));
    let e = enclosing_identity(alg, s.elements());
    r.check("least enclosing local identity", "(1|2|34)", r.fmt(&e));
    r.check("enclosing identity is not DELTA", true, e != alg.identity());
    let flags = classify(alg, s.elements());
    r.check("weakly effective", false, flags.weakly_effective);
    r.check("effective", false, flags.effective);
    r.items
}

fn example_three<A: InverseAlgebra>(alg: &A) -> Vec<Item> {
    let mut r = Run::new(alg);
    let g = r.el("(12->2|3->13)");
    let eps = r.el("(1|23)");
    let Some(s) = r.close(&["(12->2|3->13)", "(1|23)"]) else {
        return r.items;
    };
    let gi = alg.inverse(&g);
    let listed = [
        alg.zero(),
        eps.clone(),
        g.clone(),
        gi.clone(),
        alg.compose(&g, &gi),
        alg.compose(&gi, &g),
    ];
    r.check("|S|", 6, s.len());
    r.check("S", r.set(&listed), r.set(s.elements()));
    let prims = alg.primitive_idempotents();
    r.check("every primitive lies in S", true, prims.iter().all(|p| s.contains(p)));
    r.check(
        "p in pS for every primitive p",
        true,
        prims
            .iter()
            .all(|p| s.elements().iter().any(|x| alg.compose(p, x) == *p)),
    );
    r.check("effective", true, classify(alg, s.elements()).effective);
    let Some(d) = r.decompose(&s) else {
        return r.items;
    };
    r.check("number of orbits", 2, d.len());
    let (Some(i1), Some(i2)) = (r.orbit(&d, &["(12|3)", "(2|13)"]), r.orbit(&d, &["(1|23)"])) else {
        return r.items;
    };
    r.check("e1", "(1|2|3)", r.fmt(&d.orbits[i1].identity));
    r.check("e2", "(1|23)", r.fmt(&d.orbits[i2].identity));
    let ids: Vec<(&A::Elem, &A::Elem)> = s.elements().iter().map(|x| (x, x)).collect();
    r.check("phi1", r.map_text(&ids), r.projection(&d, i1, s.elements()));
    let zero = alg.zero();
    let phi2: Vec<(&A::Elem, &A::Elem)> = s
        .elements()
        .iter()
        .map(|x| (x, if *x == eps { x } else { &zero }))
        .collect();
    r.check("phi2", r.map_text(&phi2), r.projection(&d, i2, s.elements()));
    r.items
}

fn example_four<A: InverseAlgebra>(alg: &A) -> Vec<Item> {
    let mut r = Run::new(alg);
    let a = r.el("(1->2|4->3|235->145)");
    r.check("alpha alpha", "(12345)", r.fmt(&alg.compose(&a, &a)));
    let Some(s) = r.close(&["(1->2|4->3|235->145)"]) else {
        return r.items;
    };
    r.check("|S|", 5, s.len());
    let b2 = CayleyTable::load(include_str!("../data/b2.table")).expect("bundled table");
    match Subsemigroup::image_of(alg, &b2, &[("a".into(), a.clone())]) {
        Ok(img) => {
            let injective = img.representation().is_some_and(|rep| rep.injective);
            r.check("a -> alpha embeds B2", true, injective);
            r.check("image of B2", r.set(s.elements()), r.set(img.elements()));
        }
        Err(e) => r.check("a -> alpha embeds B2", true, e),
    }
    let Some(d) = r.decompose(&s) else {
        return r.items;
    };
    let printed = [
        ["(1|2345)", "(2|1345)"],
        ["(3|1245)", "(4|1235)"],
        ["(14|235)", "(23|145)"],
    ];
    let want: Vec<String> = printed.iter().map(|c| r.set_of(c)).collect();
    let have: Vec<String> = d.orbits.iter().map(|o| r.set(&o.primitives)).collect();
    r.check("orbits in order", want.join(" "), have.join(" "));
    if d.len() != 3 {
        return r.items;
    }
    let ids = ["(1|2|345)", "(3|4|125)", "(14|23|5)"];
    for (i, want) in ids.iter().enumerate() {
        r.check(&format!("e{}", i + 1), r.fmt(&r.el(want)), r.fmt(&d.orbits[i].identity));
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            let prod = alg.compose(&d.orbits[i].identity, &d.orbits[j].identity);
            r.check(&format!("e{} e{}", i + 1, j + 1), "(12345)", r.fmt(&prod));
        }
    }
    r.check("disperse", true, d.flags.disperse);

    let k = d.elements.iter().position(|x| *x == a).expect("alpha generates S");
    let phis = ["(1->2|2345->1345)", "(4->3|1235->1245)", "(14->23|235->145)"];
    for (i, want) in phis.iter().enumerate() {
        r.check(
            &format!("alpha phi{}", i + 1),
            r.fmt(&r.el(want)),
            r.fmt(&d.orbits[i].projection[k]),
        );
    }
    let entries: Vec<A::Elem> = (0..3).map(|i| d.orbits[i].projection[k].clone()).collect();
    match BoundedTuple::new(alg, entries, a.clone()) {
        Ok(t) => {
            for coords in [vec![0, 1, 2], vec![0, 1], vec![0, 2], vec![1, 2]] {
                let name = format!(
                    "omega over phi{}",
                    coords
                        .iter()
                        .map(|c| (c + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(", phi")
                );
                let w = omega(alg, &t.restrict(&coords));
                r.check(&name, r.fmt(&a), w.map_or_else(|e| e.to_string(), |x| r.fmt(&x)));
            }
        }
        Err(e) => r.check("projections bounded by alpha", "bounded", e),
    }
    r.items
}
