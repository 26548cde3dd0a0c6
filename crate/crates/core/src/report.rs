//! Serializable record of a full analysis of one subsemigroup, and its text
//! rendering.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Family, InverseAlgebra};
use crate::embed::{check_degree_bounds, degree_search, BoundsVerdict, DegreeOutcome, DegreeResult};
use crate::error::{AlgebraError, InvariantViolation};
use crate::orbits::{decompose, factor_properties, ClassifierFlags};
use crate::schein::{
    certify_schein, certify_schein_components, verify_theorem, Check, Theorem, TheoremVerdict, VerifyContext,
};
use crate::subsemigroup::Subsemigroup;
use crate::zero_direct::decompose_zero_direct;

pub const SCHEMA_VERSION: u32 = 1;

/// Most orbits for which every sub-sum is tried.
pub const MAX_SUB_SUM_ORBITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Invariant(#[from] InvariantViolation),
}

/// An element in notation, with `NABLA` or `DELTA` where it applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementText {
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symbol: Option<String>,
}

impl ElementText {
    pub fn of<A: InverseAlgebra>(alg: &A, x: &A::Elem) -> Self {
        ElementText {
            text: alg.format(x),
            symbol: alg.symbol(x).map(str::to_string),
        }
    }
}

impl fmt::Display for ElementText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.symbol {
            Some(sym) => write!(f, "{} {}", sym, self.text),
            None => f.write_str(&self.text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub algebra: String,
    pub n: usize,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionEntry {
    pub from: ElementText,
    pub to: ElementText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub primitives: Vec<ElementText>,
    pub identity: ElementText,
    pub projection: Vec<ProjectionEntry>,
    pub image: Vec<ElementText>,
    pub factor_flags: ClassifierFlags,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheinReport {
    pub bounded: Check,
    pub homomorphism: Check,
    pub schein: Check,
    pub recovery: Check,
    pub orthogonal: Check,
    pub injective: Check,
    /// Proper subsets of orbits (1-based) whose projections alone already
    /// form a Schein sum recovering `S`.
    pub recovering_sub_sums: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandReport {
    pub primitives: Vec<ElementText>,
    pub identity: ElementText,
    pub elements: Vec<ElementText>,
    pub irreducible: bool,
    pub weakly_effective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationReport {
    pub source: Vec<String>,
    pub images: Vec<MapEntry>,
    pub injective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub deg: DegreeOutcome,
    pub degstar: DegreeOutcome,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bounds: Option<BoundsVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub schema: u32,
    pub input: InputEcho,
    pub notation: String,
    pub elements: Vec<ElementText>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub representation: Option<RepresentationReport>,
    pub flags: ClassifierFlags,
    pub orbits: Vec<OrbitReport>,
    pub schein: ScheinReport,
    pub zero_direct: Vec<SummandReport>,
    pub theorems: Vec<TheoremVerdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<DegreeReport>,
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub theorems: Vec<Theorem>,
    /// `(n_max for sym, n_max for dual-sym, budget)`
    pub degree: Option<(usize, usize, u64)>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            theorems: Theorem::ALL.to_vec(),
            degree: None,
        }
    }
}

fn notation_note(family: Family) -> String {
    match family {
        Family::Sym => "partial injections as [x->y, ...], pairs sorted by source".into(),
        Family::DualSym => "block bijections as (D->R|...), blocks ordered by least point; \
            identity blocks print without an arrow, so a dichotomy prints with the block containing 1 first"
            .into(),
    }
}

pub fn build_report<A: InverseAlgebra>(
    ctx: &VerifyContext<'_, A>,
    s: &Subsemigroup<'_, A>,
    opts: &ReportOptions,
) -> Result<DecompositionReport, ReportError> {
    let alg = ctx.algebra();
    let text = |x: &A::Elem| ElementText::of(alg, x);
    let texts = |xs: &[A::Elem]| xs.iter().map(text).collect::<Vec<_>>();

    let d = decompose(s)?;
    let mut orbits = Vec::with_capacity(d.len());
    for (i, o) in d.orbits.iter().enumerate() {
        orbits.push(OrbitReport {
            primitives: texts(&o.primitives),
            identity: text(&o.identity),
            projection: d
                .elements
                .iter()
                .zip(&o.projection)
                .map(|(x, y)| ProjectionEntry {
                    from: text(x),
                    to: text(y),
                })
                .collect(),
            image: texts(&o.image),
            factor_flags: factor_properties(alg, &d, i)?,
        });
    }

    let cert = certify_schein(s, &d);
    let mut recovering_sub_sums = Vec::new();
    if d.len() <= MAX_SUB_SUM_ORBITS {
        for mask in 1u32..(1 << d.len()).max(1) - 1 {
            let coords: Vec<usize> = (0..d.len()).filter(|&i| mask >> i & 1 == 1).collect();
            let sub = certify_schein_components(s, &d, &coords);
            if sub.is_schein_sum() && sub.recovery.holds {
                recovering_sub_sums.push(coords.iter().map(|i| i + 1).collect());
            }
        }
    }
    let schein = ScheinReport {
        bounded: cert.bounded,
        homomorphism: cert.homomorphism,
        schein: cert.schein,
        recovery: cert.recovery,
        orthogonal: cert.orthogonal,
        injective: cert.injective,
        recovering_sub_sums,
    };

    let z = decompose_zero_direct(s)?;
    let zero_direct = z
        .summands
        .iter()
        .map(|m| SummandReport {
            primitives: texts(&m.primitives),
            identity: text(&m.identity),
            elements: texts(&m.elements),
            irreducible: m.irreducible,
            weakly_effective: m.weakly_effective,
        })
        .collect();

    let theorems = opts
        .theorems
        .iter()
        .map(|&t| verify_theorem(ctx, s, t))
        .collect::<Result<Vec<_>, _>>()?;

    let representation = s.representation().map(|r| RepresentationReport {
        source: r.table.labels().to_vec(),
        images: r
            .table
            .labels()
            .iter()
            .zip(&r.images)
            .map(|(l, x)| MapEntry {
                from: l.clone(),
                to: alg.format(x),
            })
            .collect(),
        injective: r.injective,
    });

    let degree = match opts.degree {
        None => None,
        Some((n_sym, n_dual, budget)) => {
            let table = match s.representation() {
                Some(r) => r.table.clone(),
                None => s.cayley_table(),
            };
            let result = DegreeResult {
                deg: degree_search(&table, Family::Sym, n_sym, budget)?,
                degstar: degree_search(&table, Family::DualSym, n_dual, budget)?,
            };
            Some(DegreeReport {
                bounds: check_degree_bounds(&result).ok(),
                deg: result.deg,
                degstar: result.degstar,
            })
        }
    };

    Ok(DecompositionReport {
        schema: SCHEMA_VERSION,
        input: input_echo(s),
        notation: notation_note(alg.family()),
        elements: texts(s.elements()),
        representation,
        flags: d.flags,
        orbits,
        schein,
        zero_direct,
        theorems,
        degree,
    })
}

/// Theorem verdicts for one subsemigroup, without the full decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub input: InputEcho,
    pub theorems: Vec<TheoremVerdict>,
}

impl VerifyReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "algebra: {} on {} points", self.input.algebra, self.input.n).expect("String write");
        render_verdicts(&mut out, &self.theorems).expect("String write");
        out
    }

    pub fn all_hold_or_inapplicable(&self) -> bool {
        self.theorems.iter().all(|t| t.status != crate::schein::Status::Fails)
    }
}

pub fn build_verify_report<A: InverseAlgebra>(
    ctx: &VerifyContext<'_, A>,
    s: &Subsemigroup<'_, A>,
    theorems: &[Theorem],
) -> Result<VerifyReport, InvariantViolation> {
    Ok(VerifyReport {
        schema: SCHEMA_VERSION,
        input: input_echo(s),
        theorems: theorems
            .iter()
            .map(|&t| verify_theorem(ctx, s, t))
            .collect::<Result<Vec<_>, _>>()?,
    })
}

fn input_echo<A: InverseAlgebra>(s: &Subsemigroup<'_, A>) -> InputEcho {
    let alg = s.algebra();
    InputEcho {
        algebra: alg.family().to_string(),
        n: alg.degree(),
        generators: s.generators().iter().map(|g| alg.format(g)).collect(),
    }
}

fn flag_line(f: &ClassifierFlags) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" };
    format!(
        "weakly effective {}, effective {}, weakly transitive {}, transitive {}, disperse {}",
        yn(f.weakly_effective),
        yn(f.effective),
        yn(f.weakly_transitive),
        yn(f.transitive),
        yn(f.disperse)
    )
}

fn check_line(out: &mut String, name: &str, c: &Check) -> fmt::Result {
    write!(out, "  {name}: {}", if c.holds { "holds" } else { "fails" })?;
    if let Some(w) = &c.witness {
        write!(out, " ({w})")?;
    }
    writeln!(out)
}

fn join(xs: &[ElementText]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl DecompositionReport {
    pub fn render_text(&self) -> String {
        self.try_render().expect("writing to a String cannot fail")
    }

    fn try_render(&self) -> Result<String, fmt::Error> {
        let mut out = String::new();
        let o = &mut out;
        writeln!(o, "algebra: {} on {} points", self.input.algebra, self.input.n)?;
        if !self.input.generators.is_empty() {
            writeln!(o, "generators: {}", self.input.generators.join("; "))?;
        }
        writeln!(o, "notation: {}", self.notation)?;
        writeln!(o, "elements ({}): {}", self.elements.len(), join(&self.elements))?;
        if let Some(r) = &self.representation {
            let injective = if r.injective { "injective" } else { "not injective" };
            writeln!(o, "representation ({injective}):")?;
            for m in &r.images {
                writeln!(o, "  {} -> {}", m.from, m.to)?;
            }
        }
        writeln!(o, "flags: {}", flag_line(&self.flags))?;
        writeln!(o, "orbits: {}", self.orbits.len())?;
        for (i, orb) in self.orbits.iter().enumerate() {
            writeln!(o, "  P{} = {{{}}}", i + 1, join(&orb.primitives))?;
            writeln!(o, "    e{} = {}", i + 1, orb.identity)?;
            writeln!(o, "    S{} = {{{}}}", i + 1, join(&orb.image))?;
            writeln!(o, "    factor: {}", flag_line(&orb.factor_flags))?;
            for m in &orb.projection {
                writeln!(o, "    phi{}: {} -> {}", i + 1, m.from, m.to)?;
            }
        }
        writeln!(o, "schein sum:")?;
        check_line(o, "bounded", &self.schein.bounded)?;
        check_line(o, "product map is a homomorphism", &self.schein.homomorphism)?;
        check_line(o, "omega is a homomorphism", &self.schein.schein)?;
        check_line(o, "recovery", &self.schein.recovery)?;
        check_line(o, "orthogonal", &self.schein.orthogonal)?;
        check_line(o, "injective", &self.schein.injective)?;
        if !self.schein.recovering_sub_sums.is_empty() {
            let subs: Vec<String> = self
                .schein
                .recovering_sub_sums
                .iter()
                .map(|c| {
                    format!(
                        "{{{}}}",
                        c.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
                    )
                })
                .collect();
            writeln!(o, "  recovering sub-sums: {}", subs.join(" "))?;
        }
        writeln!(o, "0-direct summands: {}", self.zero_direct.len())?;
        for (i, m) in self.zero_direct.iter().enumerate() {
            writeln!(
                o,
                "  {}: identity {}, irreducible {}, weakly effective {}",
                i + 1,
                m.identity,
                m.irreducible,
                m.weakly_effective
            )?;
            writeln!(o, "     elements {{{}}}", join(&m.elements))?;
        }
        render_verdicts(o, &self.theorems)?;
        if let Some(d) = &self.degree {
            writeln!(o, "degree: {}", outcome_line(&d.deg))?;
            writeln!(o, "dual degree: {}", outcome_line(&d.degstar))?;
            match &d.bounds {
                Some(b) => writeln!(
                    o,
                    "bounds: log2(deg + 2) <= deg* {}, deg* <= deg + 1 {}, deg <= 2^deg* - 2 {}",
                    b.lower, b.upper, b.hat
                )?,
                None => writeln!(o, "bounds: not evaluated (a degree is unresolved)")?,
            }
        }
        Ok(out)
    }

    pub fn all_hold_or_inapplicable(&self) -> bool {
        self.theorems.iter().all(|t| t.status != crate::schein::Status::Fails)
    }
}

fn render_verdicts(o: &mut String, verdicts: &[TheoremVerdict]) -> fmt::Result {
    for t in verdicts {
        let status = status_word(t);
        writeln!(o, "theorem {}: {status}", t.theorem)?;
        if let Some(r) = &t.reason {
            writeln!(o, "  {r}")?;
        }
        for c in &t.clauses {
            write!(o, "  [{}] {}", if c.holds { "ok" } else { "FAIL" }, c.name)?;
            if let Some(d) = &c.detail {
                write!(o, ": {d}")?;
            }
            writeln!(o)?;
        }
    }
    Ok(())
}

fn status_word(t: &TheoremVerdict) -> &'static str {
    match t.status {
        crate::schein::Status::Holds => "holds",
        crate::schein::Status::Fails => "FAILS",
        crate::schein::Status::NotApplicable => "not applicable",
    }
}

fn outcome_line(d: &DegreeOutcome) -> String {
    match d {
        DegreeOutcome::Exact { degree, witness } => {
            let w: Vec<String> = witness.iter().map(|(l, x)| format!("{l} -> {x}")).collect();
            format!("{degree} (witness {})", w.join(", "))
        }
        DegreeOutcome::Above { n_max } => format!("> {n_max}"),
        DegreeOutcome::BudgetExhausted { at } => format!("search budget exhausted at {at}"),
    }
}
