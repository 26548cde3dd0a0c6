//! Embeddings between the two families and minimal-degree searches.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Family, InverseAlgebra};
use crate::dual_sym::{BlockBijection, DualSymInv};
use crate::error::AlgebraError;
use crate::homsearch::{find_embedding, is_embedding, SearchOptions, SearchOutcome};
use crate::sym::{PartialInjection, SymInv};
use crate::table::{CarrierTable, CayleyTable};

/// Largest degree accepted by [`hat_embed`] and [`adjoin_zero_embed`].
pub const MAX_EMBED_DEGREE: usize = 5;
/// Largest source table accepted by [`degree_search`].
pub const MAX_SEARCH_TABLE: usize = 8;
pub const MAX_SEARCH_SYM: usize = 5;
pub const MAX_SEARCH_DUAL_SYM: usize = 4;

fn guard(what: &'static str, n: usize, max: usize) -> Result<(), AlgebraError> {
    if n > max {
        Err(AlgebraError::SizeGuard { guard: what, n, max })
    } else {
        Ok(())
    }
}

/// `beta -> beta^`, acting on the proper nonempty subsets of `{1..n}`.
///
/// Subset `X` is the point whose binary expansion is `X` (point `i` is bit
/// `i - 1`), so the ground set is `1..=2^n - 2`. A union of domain blocks is
/// sent to the union of the matching range blocks.
pub fn hat_embed(beta: &BlockBijection) -> Result<PartialInjection, AlgebraError> {
    let n = beta.degree();
    guard("hat embedding degree", n, MAX_EMBED_DEGREE)?;
    let full = (1usize << n) - 1;
    let blocks = beta.blocks();
    let k = blocks.len();
    let mut pairs = Vec::new();
    for j in 1..(1usize << k) {
        let (mut d, mut r) = (0usize, 0usize);
        for (b, &(db, rb)) in blocks.iter().enumerate() {
            if j >> b & 1 == 1 {
                d |= db as usize;
                r |= rb as usize;
            }
        }
        if d != full {
            pairs.push((d, r));
        }
    }
    Ok(PartialInjection::new(full - 1, pairs).expect("block unions form a partial injection"))
}

/// `f -> (x -> f(x) singletons | rest + 0 -> rest + 0)` on `n + 1` points,
/// the extra point being `n + 1`.
pub fn adjoin_zero_embed(f: &PartialInjection) -> Result<BlockBijection, AlgebraError> {
    let n = f.degree();
    guard("zero-adjoined embedding degree", n, MAX_EMBED_DEGREE)?;
    let bit = |x: usize| 1u16 << (x - 1);
    let mut pairs: Vec<(u16, u16)> = f.pairs().map(|(x, y)| (bit(x), bit(y))).collect();
    let all = (1u16 << (n + 1)) - 1;
    let dom = f.domain().fold(0, |m, x| m | bit(x));
    let ran = f.range().fold(0, |m, y| m | bit(y));
    pairs.push((all & !dom, all & !ran));
    Ok(BlockBijection::from_masks(n + 1, pairs).expect("complements partition the ground set"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DegreeOutcome {
    Exact {
        degree: usize,
        /// `(table label, image in notation)` for every table element.
        witness: Vec<(String, String)>,
    },
    Above {
        n_max: usize,
    },
    BudgetExhausted {
        at: usize,
    },
}

impl DegreeOutcome {
    pub fn degree(&self) -> Option<usize> {
        match self {
            DegreeOutcome::Exact { degree, .. } => Some(*degree),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("degree of the {0} family is unresolved")]
    Unresolved(Family),
}

fn search_family<A: InverseAlgebra>(
    table: &CayleyTable,
    alg: &A,
    budget: u64,
) -> Result<Option<SearchOutcome>, AlgebraError> {
    if alg.carrier().len() < table.len() {
        return Ok(None);
    }
    let target = CarrierTable::build(alg)?;
    let opts = SearchOptions {
        budget,
        ..SearchOptions::default()
    };
    let outcome = find_embedding(table, &target, &opts);
    if let SearchOutcome::Found(map) = &outcome {
        if !is_embedding(table, &target, map) {
            return Err(AlgebraError::DomainMismatch("search returned a non-embedding".into()));
        }
    }
    Ok(Some(outcome))
}

fn witness<A: InverseAlgebra>(table: &CayleyTable, alg: &A, map: &[u32]) -> Vec<(String, String)> {
    let target = alg.carrier();
    map.iter()
        .enumerate()
        .map(|(i, &c)| (table.label(i as u32).to_string(), alg.format(&target[c as usize])))
        .collect()
}

/// Smallest `n <= n_max` such that `table` embeds in the `n`-point algebra
/// of `family`.
pub fn degree_search(
    table: &CayleyTable,
    family: Family,
    n_max: usize,
    budget: u64,
) -> Result<DegreeOutcome, AlgebraError> {
    guard("degree search table size", table.len(), MAX_SEARCH_TABLE)?;
    let cap = match family {
        Family::Sym => MAX_SEARCH_SYM,
        Family::DualSym => MAX_SEARCH_DUAL_SYM,
    };
    guard("degree search n_max", n_max, cap)?;
    for n in 1..=n_max {
        let decided = match family {
            Family::Sym => try_degree(table, &SymInv::new(n)?, n, budget)?,
            Family::DualSym => try_degree(table, &DualSymInv::new(n)?, n, budget)?,
        };
        if let Some(outcome) = decided {
            return Ok(outcome);
        }
    }
    Ok(DegreeOutcome::Above { n_max })
}

/// `Some` when the search at this degree settles the answer.
fn try_degree<A: InverseAlgebra>(
    table: &CayleyTable,
    alg: &A,
    n: usize,
    budget: u64,
) -> Result<Option<DegreeOutcome>, AlgebraError> {
    Ok(match search_family(table, alg, budget)? {
        None | Some(SearchOutcome::NotFound) => None,
        Some(SearchOutcome::BudgetExhausted) => Some(DegreeOutcome::BudgetExhausted { at: n }),
        Some(SearchOutcome::Found(map)) => Some(DegreeOutcome::Exact {
            degree: n,
            witness: witness(table, alg, &map),
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeResult {
    pub deg: DegreeOutcome,
    pub degstar: DegreeOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsVerdict {
    pub deg: usize,
    pub degstar: usize,
    /// `log2(deg + 2) <= deg*`
    pub lower: bool,
    /// `deg* <= deg + 1`
    pub upper: bool,
    /// `deg <= 2^deg* - 2`
    pub hat: bool,
}

impl BoundsVerdict {
    pub fn holds(&self) -> bool {
        self.lower && self.upper && self.hat
    }
}

/// Evaluates the bound chain on the two degrees as found, in exact integer
/// arithmetic (`log2(d + 2) <= m` iff `d + 2 <= 2^m`).
pub fn check_degree_bounds(r: &DegreeResult) -> Result<BoundsVerdict, DegreeError> {
    let deg = r.deg.degree().ok_or(DegreeError::Unresolved(Family::Sym))?;
    let degstar = r.degstar.degree().ok_or(DegreeError::Unresolved(Family::DualSym))?;
    let pow = 1u128 << degstar.min(100);
    Ok(BoundsVerdict {
        deg,
        degstar,
        lower: (deg as u128 + 2) <= pow,
        upper: degstar <= deg + 1,
        hat: deg as u128 <= pow - 2,
    })
}
