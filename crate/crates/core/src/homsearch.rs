//! Backtracking search for injective homomorphisms between finite inverse
//! semigroups given by tables.
//!
//! The source is generated greedily; each generator is assigned a target
//! element and the partial map is extended along words, failing as soon as
//! two words disagree or two sources collide.

use std::collections::VecDeque;

use crate::table::{CarrierTable, CayleyTable};

/// Read access to a multiplication table with inverses.
pub trait TableView {
    fn size(&self) -> usize;
    fn product(&self, i: u32, j: u32) -> u32;
    fn inverse_of(&self, i: u32) -> u32;
}

impl TableView for CayleyTable {
    fn size(&self) -> usize {
        self.len()
    }
    fn product(&self, i: u32, j: u32) -> u32 {
        self.mul(i, j)
    }
    fn inverse_of(&self, i: u32) -> u32 {
        self.inv(i)
    }
}

impl<E: Clone + Eq + std::hash::Hash> TableView for CarrierTable<E> {
    fn size(&self) -> usize {
        self.len()
    }
    fn product(&self, i: u32, j: u32) -> u32 {
        self.mul(i, j)
    }
    fn inverse_of(&self, i: u32) -> u32 {
        self.inv(i)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// `map[i]` is the image of source element `i`.
    Found(Vec<u32>),
    NotFound,
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Source/target pairs the map must contain.
    pub forced: Vec<(u32, u32)>,
    /// Maximum number of candidate assignments tried.
    pub budget: u64,
    /// Also require equal down-set sizes, valid only for isomorphisms.
    pub match_down_sets: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            forced: Vec::new(),
            budget: 5_000_000,
            match_down_sets: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Signature {
    idempotent: bool,
    monogenic: usize,
    down_set: usize,
}

fn monogenic_size<T: TableView>(t: &T, x: u32) -> usize {
    let letters = [x, t.inverse_of(x)];
    let mut seen = vec![x, letters[1]];
    seen.dedup();
    let mut k = 0;
    while k < seen.len() {
        let y = seen[k];
        for &h in &letters {
            let z = t.product(y, h);
            if !seen.contains(&z) {
                seen.push(z);
            }
        }
        k += 1;
    }
    seen.len()
}

fn signatures<T: TableView>(t: &T, down_sets: bool) -> Vec<Signature> {
    let n = t.size() as u32;
    (0..n)
        .map(|x| Signature {
            idempotent: t.product(x, x) == x,
            monogenic: monogenic_size(t, x),
            down_set: if down_sets {
                (0..n)
                    .filter(|&y| t.product(t.product(y, t.inverse_of(y)), x) == y)
                    .count()
            } else {
                0
            },
        })
        .collect()
}

const NONE: u32 = u32::MAX;

struct Search<'s, S: TableView, T: TableView> {
    source: &'s S,
    target: &'s T,
    gens: Vec<u32>,
    candidates: Vec<Vec<u32>>,
    forced: Vec<(u32, u32)>,
    budget: u64,
}

impl<S: TableView, T: TableView> Search<'_, S, T> {
    /// The map determined by the first `images.len()` generators, or `None`
    /// if it is not a well-defined injective homomorphism so far.
    fn extend(&self, images: &[u32]) -> Option<Vec<u32>> {
        let (src, tgt) = (self.source, self.target);
        let mut map = vec![NONE; src.size()];
        let mut rev = vec![NONE; tgt.size()];
        let mut queue = VecDeque::new();
        let mut letters: Vec<u32> = Vec::new();
        let mut set = |x: u32, c: u32, map: &mut Vec<u32>, queue: &mut VecDeque<u32>| -> bool {
            match map[x as usize] {
                NONE => {
                    if rev[c as usize] != NONE {
                        return false;
                    }
                    map[x as usize] = c;
                    rev[c as usize] = x;
                    queue.push_back(x);
                    true
                }
                old => old == c,
            }
        };
        for (&g, &c) in self.gens.iter().zip(images) {
            let gi = src.inverse_of(g);
            if !set(g, c, &mut map, &mut queue) || !set(gi, tgt.inverse_of(c), &mut map, &mut queue) {
                return None;
            }
            letters.push(g);
            if gi != g {
                letters.push(gi);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &h in &letters {
                let y = src.product(x, h);
                let c = tgt.product(map[x as usize], map[h as usize]);
                if !set(y, c, &mut map, &mut queue) {
                    return None;
                }
            }
        }
        for &(x, c) in &self.forced {
            if map[x as usize] != NONE && map[x as usize] != c {
                return None;
            }
        }
        Some(map)
    }

    fn run(&mut self, images: &mut Vec<u32>) -> SearchOutcome {
        if images.len() == self.gens.len() {
            return match self.extend(images) {
                Some(map) if map.iter().all(|&c| c != NONE) => SearchOutcome::Found(map),
                _ => SearchOutcome::NotFound,
            };
        }
        let depth = images.len();
        for k in 0..self.candidates[depth].len() {
            if self.budget == 0 {
                return SearchOutcome::BudgetExhausted;
            }
            self.budget -= 1;
            images.push(self.candidates[depth][k]);
            if self.extend(images).is_some() {
                match self.run(images) {
                    SearchOutcome::NotFound => {}
                    other => return other,
                }
            }
            images.pop();
        }
        SearchOutcome::NotFound
    }
}

/// Searches for an injective homomorphism `source -> target` containing the
/// forced pairs. Candidates are tried in ascending target order, so the
/// first map found is deterministic.
pub fn find_embedding<T: TableView>(source: &CayleyTable, target: &T, opts: &SearchOptions) -> SearchOutcome {
    if source.len() > target.size() {
        return SearchOutcome::NotFound;
    }
    let src_sig = signatures(source, opts.match_down_sets);
    let tgt_sig = signatures(target, opts.match_down_sets);
    let forced_sources: Vec<u32> = opts.forced.iter().map(|p| p.0).collect();
    let gens = source.generating_set(&forced_sources, |x| src_sig[x as usize].monogenic);
    let candidates = gens
        .iter()
        .map(|&g| match opts.forced.iter().find(|p| p.0 == g) {
            Some(&(_, c)) => vec![c],
            None => (0..target.size() as u32)
                .filter(|&c| tgt_sig[c as usize] == src_sig[g as usize])
                .collect(),
        })
        .collect();
    let mut search = Search {
        source,
        target,
        gens,
        candidates,
        forced: opts.forced.clone(),
        budget: opts.budget,
    };
    let outcome = search.run(&mut Vec::new());
    if let SearchOutcome::Found(map) = &outcome {
        debug_assert!(is_embedding(source, target, map));
    }
    outcome
}

/// Exhaustive check that `map` is an injective homomorphism.
pub fn is_embedding<S: TableView, T: TableView>(source: &S, target: &T, map: &[u32]) -> bool {
    let n = source.size();
    if map.len() != n || map.iter().any(|&c| c as usize >= target.size()) {
        return false;
    }
    let mut sorted = map.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != n {
        return false;
    }
    (0..n as u32).all(|x| {
        map[source.inverse_of(x) as usize] == target.inverse_of(map[x as usize])
            && (0..n as u32)
                .all(|y| map[source.product(x, y) as usize] == target.product(map[x as usize], map[y as usize]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{DualSymInv, InverseAlgebra, SymInv};

    fn b2() -> CayleyTable {
        CayleyTable::load(include_str!("../data/b2.table")).unwrap()
    }

    #[test]
    fn brandt_needs_two_points() {
        let t1 = CarrierTable::build(&SymInv::new(1).unwrap()).unwrap();
        assert_eq!(
            find_embedding(&b2(), &t1, &SearchOptions::default()),
            SearchOutcome::NotFound
        );
        let t2 = CarrierTable::build(&SymInv::new(2).unwrap()).unwrap();
        match find_embedding(&b2(), &t2, &SearchOptions::default()) {
            SearchOutcome::Found(map) => assert!(is_embedding(&b2(), &t2, &map)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn brandt_in_dual_three() {
        let alg = DualSymInv::new(3).unwrap();
        let t = CarrierTable::build(&alg).unwrap();
        assert!(matches!(
            find_embedding(&b2(), &t, &SearchOptions::default()),
            SearchOutcome::Found(_)
        ));
    }

    #[test]
    fn budget_is_reported() {
        let t = CarrierTable::build(&SymInv::new(3).unwrap()).unwrap();
        let opts = SearchOptions {
            budget: 0,
            ..SearchOptions::default()
        };
        assert_eq!(find_embedding(&b2(), &t, &opts), SearchOutcome::BudgetExhausted);
    }

    #[test]
    fn automorphism_with_forced_point() {
        let alg = SymInv::new(3).unwrap();
        let t = CarrierTable::build(&alg).unwrap();
        let src = t.to_cayley(&alg);
        let f = t.index_of(&alg.parse("[1->2]").unwrap()).unwrap();
        let g = t.index_of(&alg.parse("[3->1]").unwrap()).unwrap();
        let opts = SearchOptions {
            forced: vec![(f, g)],
            match_down_sets: true,
            ..SearchOptions::default()
        };
        match find_embedding(&src, &t, &opts) {
            SearchOutcome::Found(map) => {
                assert_eq!(map[f as usize], g);
                assert!(is_embedding(&src, &t, &map));
            }
            other => panic!("{other:?}"),
        }
        // a rank-one map cannot be sent to a rank-two one
        let h = t.index_of(&alg.parse("[1->2, 2->3]").unwrap()).unwrap();
        let opts = SearchOptions {
            forced: vec![(f, h)],
            match_down_sets: true,
            ..SearchOptions::default()
        };
        assert_eq!(find_embedding(&src, &t, &opts), SearchOutcome::NotFound);
    }
}
