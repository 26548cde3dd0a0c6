//! Finite semigroups given by their multiplication tables.
//!
//! [`CayleyTable`] is the abstract, labelled form used for source semigroups
//! of representations. [`CarrierTable`] indexes the whole carrier of an
//! algebra so that sweeps can multiply by lookup.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::InverseAlgebra;
use crate::error::AlgebraError;

/// Largest carrier [`CarrierTable::build`] will tabulate.
pub const MAX_TABULATED: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("table is not an inverse semigroup: {0}")]
    NotInverse(TableViolation),
    #[error("malformed table: {0}")]
    Shape(String),
}

/// The first failure of the inverse-semigroup axioms found in a table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableViolation {
    #[error("({x}{y}){z} != {x}({y}{z})")]
    Associativity { x: String, y: String, z: String },
    #[error("{x} and the listed inverse {inverse} fail x x' x = x or x' x x' = x'")]
    InverseLaw { x: String, inverse: String },
    #[error("idempotents {e} and {f} do not commute")]
    IdempotentsDoNotCommute { e: String, f: String },
}

/// A finite semigroup with a unary inverse, elements indexed `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    labels: Vec<String>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl CayleyTable {
    /// Structural constructor: checks shape and index ranges only.
    pub fn from_parts(labels: Vec<String>, rows: Vec<Vec<usize>>, inv: Vec<usize>) -> Result<Self, TableError> {
        let n = labels.len();
        if n == 0 {
            return Err(TableError::Shape("no elements".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(char::is_whitespace) {
                return Err(TableError::Shape(format!("label {l:?} is not a single token")));
            }
            if labels[..i].contains(l) {
                return Err(TableError::Shape(format!("label {l} repeated")));
            }
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) || inv.len() != n {
            return Err(TableError::Shape(format!("expected a {n}x{n} table and {n} inverses")));
        }
        if rows.iter().flatten().chain(&inv).any(|&k| k >= n) {
            return Err(TableError::Shape("entry out of range".into()));
        }
        Ok(CayleyTable {
            labels,
            mul: rows.into_iter().flatten().map(|k| k as u32).collect(),
            inv: inv.into_iter().map(|k| k as u32).collect(),
        })
    }

    /// Parses the line-oriented text format (shape only, axioms unchecked):
    ///
    /// ```text
    /// elements: 0 e f a b
    /// inv: 0->0 e->e f->f a->b b->a
    /// 0 0 0 0 0
    /// ...
    /// ```
    ///
    /// Row `i` lists `x_i x_j` for each `j`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
            .filter(|(_, l)| !l.trim().is_empty())
            .collect();
        let err = |line: usize, column: usize, message: String| TableError::Parse { line, column, message };
        let tokens = |l: &str| -> Vec<(usize, String)> {
            let mut out = Vec::new();
            let mut start = None;
            for (i, c) in l.char_indices().chain([(l.len(), ' ')]) {
                match (c.is_whitespace(), start) {
                    (false, None) => start = Some(i),
                    (true, Some(s)) => {
                        out.push((l[..s].chars().count() + 1, l[s..i].to_string()));
                        start = None;
                    }
                    _ => {}
                }
            }
            out
        };

        let Some(&(hline, header)) = lines.first() else {
            return Err(err(1, 1, "empty table".into()));
        };
        let header_body = header
            .trim_start()
            .strip_prefix("elements:")
            .ok_or_else(|| err(hline, 1, "expected `elements:` header".into()))?;
        let offset = header.len() - header_body.len();
        let labels: Vec<String> = tokens(header_body).into_iter().map(|(_, t)| t).collect();
        let n = labels.len();
        if n == 0 {
            return Err(err(hline, offset + 1, "no elements listed".into()));
        }
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        if index.len() != n {
            return Err(err(hline, offset + 1, "repeated element label".into()));
        }
        let lookup = |line: usize, col: usize, t: &str| -> Result<usize, TableError> {
            index
                .get(t)
                .copied()
                .ok_or_else(|| err(line, col, format!("unknown element `{t}`")))
        };

        let Some(&(iline, inv_line)) = lines.get(1) else {
            return Err(err(hline + 1, 1, "missing `inv:` line".into()));
        };
        let inv_body = inv_line
            .trim_start()
            .strip_prefix("inv:")
            .ok_or_else(|| err(iline, 1, "expected `inv:` line".into()))?;
        let offset = inv_line.len() - inv_body.len();
        let mut inv = vec![usize::MAX; n];
        for (col, tok) in tokens(inv_body) {
            let col = col + offset;
            let (x, y) = tok
                .split_once("->")
                .ok_or_else(|| err(iline, col, format!("expected `x->y`, found `{tok}`")))?;
            let xi = lookup(iline, col, x)?;
            let yi = lookup(iline, col, y)?;
            if inv[xi] != usize::MAX {
                return Err(err(iline, col, format!("inverse of `{x}` given twice")));
            }
            inv[xi] = yi;
        }
        if let Some(missing) = inv.iter().position(|&k| k == usize::MAX) {
            return Err(err(iline, 1, format!("no inverse given for `{}`", labels[missing])));
        }

        let body = &lines[2..];
        if body.len() != n {
            let line = body.get(n).map_or(iline + 1, |l| l.0);
            return Err(err(line, 1, format!("expected {n} product rows, found {}", body.len())));
        }
        let mut rows = Vec::with_capacity(n);
        for &(line, l) in body {
            let toks = tokens(l);
            if toks.len() != n {
                let col = toks.get(n).map_or(l.len() + 1, |t| t.0);
                return Err(err(line, col, format!("expected {n} entries, found {}", toks.len())));
            }
            rows.push(
                toks.iter()
                    .map(|(col, t)| lookup(line, *col, t))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        CayleyTable::from_parts(labels, rows, inv)
    }

    /// Parses and then checks the inverse-semigroup axioms.
    pub fn load(text: &str) -> Result<Self, TableError> {
        let t = Self::parse(text)?;
        match t.first_violation() {
            None => Ok(t),
            Some(v) => Err(TableError::NotInverse(v)),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("elements: {}\ninv:", self.labels.join(" "));
        for i in 0..self.len() {
            write!(s, " {}->{}", self.labels[i], self.labels[self.inv[i] as usize]).unwrap();
        }
        s.push('\n');
        for i in 0..self.len() as u32 {
            let row: Vec<&str> = (0..self.len() as u32).map(|j| self.label(self.mul(i, j))).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: u32) -> &str {
        &self.labels[i as usize]
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    #[inline]
    pub fn mul(&self, i: u32, j: u32) -> u32 {
        self.mul[i as usize * self.labels.len() + j as usize]
    }

    #[inline]
    pub fn inv(&self, i: u32) -> u32 {
        self.inv[i as usize]
    }

    pub fn is_idempotent(&self, i: u32) -> bool {
        self.mul(i, i) == i
    }

    /// The element `z` with `z x = x z = z` for all `x`, if any.
    pub fn zero(&self) -> Option<u32> {
        let n = self.len() as u32;
        (0..n).find(|&z| (0..n).all(|x| self.mul(z, x) == z && self.mul(x, z) == z))
    }

    /// Natural order on the table: `x <= y` iff `x = (x x') y`.
    pub fn le(&self, x: u32, y: u32) -> bool {
        self.mul(self.mul(x, self.inv(x)), y) == x
    }

    /// Associativity, the inverse laws for the listed inverses, and commuting
    /// idempotents; together these characterise inverse semigroups.
    pub fn first_violation(&self) -> Option<TableViolation> {
        let n = self.len() as u32;
        let l = |i: u32| self.label(i).to_string();
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Some(TableViolation::Associativity {
                            x: l(x),
                            y: l(y),
                            z: l(z),
                        });
                    }
                }
            }
        }
        for x in 0..n {
            let xi = self.inv(x);
            if self.mul(self.mul(x, xi), x) != x || self.mul(self.mul(xi, x), xi) != xi {
                return Some(TableViolation::InverseLaw {
                    x: l(x),
                    inverse: l(xi),
                });
            }
        }
        let idem: Vec<u32> = (0..n).filter(|&e| self.is_idempotent(e)).collect();
        for &e in &idem {
            for &f in &idem {
                if self.mul(e, f) != self.mul(f, e) {
                    return Some(TableViolation::IdempotentsDoNotCommute { e: l(e), f: l(f) });
                }
            }
        }
        None
    }

    /// Elements generated as an inverse semigroup by `gens`, each with the
    /// element and generator it was reached from (`None` for seeds).
    pub(crate) fn words(&self, gens: &[u32]) -> Vec<(u32, Option<(u32, u32)>)> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        let letters = self.letters(gens);
        for &g in &letters {
            if !std::mem::replace(&mut seen[g as usize], true) {
                out.push((g, None));
                queue.push_back(g);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &h in &letters {
                let y = self.mul(x, h);
                if !std::mem::replace(&mut seen[y as usize], true) {
                    out.push((y, Some((x, h))));
                    queue.push_back(y);
                }
            }
        }
        out
    }

    pub(crate) fn letters(&self, gens: &[u32]) -> Vec<u32> {
        let mut letters: Vec<u32> = gens.iter().flat_map(|&g| [g, self.inv(g)]).collect();
        letters.dedup();
        let mut seen = Vec::new();
        letters.retain(|g| {
            if seen.contains(g) {
                false
            } else {
                seen.push(*g);
                true
            }
        });
        letters
    }

    /// A generating set built greedily: `preferred` first, then every element
    /// not yet generated, taken in the order given by `rank` (descending).
    pub fn generating_set(&self, preferred: &[u32], rank: impl Fn(u32) -> usize) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut covered = vec![false; self.len()];
        let mut order: Vec<u32> = preferred.to_vec();
        let mut rest: Vec<u32> = (0..self.len() as u32).collect();
        rest.sort_by_key(|&x| std::cmp::Reverse(rank(x)));
        order.extend(rest);
        for x in order {
            if covered[x as usize] {
                continue;
            }
            gens.push(x);
            for (y, _) in self.words(&gens) {
                covered[y as usize] = true;
            }
            if covered.iter().all(|&c| c) {
                break;
            }
        }
        gens
    }
}

/// The carrier of an algebra, indexed in canonical order, with full
/// multiplication and inverse tables.
#[derive(Debug, Clone)]
pub struct CarrierTable<E> {
    elements: Vec<E>,
    index: HashMap<E, u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl<E: Clone + Eq + std::hash::Hash> CarrierTable<E> {
    pub fn build<A: InverseAlgebra<Elem = E>>(alg: &A) -> Result<Self, AlgebraError> {
        let elements = alg.carrier().to_vec();
        let n = elements.len();
        if n > MAX_TABULATED {
            return Err(AlgebraError::SizeGuard {
                guard: "tabulated carrier size",
                n,
                max: MAX_TABULATED,
            });
        }
        let index: HashMap<E, u32> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i as u32))
            .collect();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                mul.push(index[&alg.compose(a, b)]);
            }
        }
        let inv = elements.iter().map(|a| index[&alg.inverse(a)]).collect();
        Ok(CarrierTable {
            elements,
            index,
            mul,
            inv,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &E {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, e: &E) -> Option<u32> {
        self.index.get(e).copied()
    }

    #[inline]
    pub fn mul(&self, i: u32, j: u32) -> u32 {
        self.mul[i as usize * self.elements.len() + j as usize]
    }

    #[inline]
    pub fn inv(&self, i: u32) -> u32 {
        self.inv[i as usize]
    }

    pub fn is_idempotent(&self, i: u32) -> bool {
        self.mul(i, i) == i
    }

    /// `x x^-1`
    pub fn range_idempotent(&self, i: u32) -> u32 {
        self.mul(i, self.inv(i))
    }

    pub fn le(&self, x: u32, y: u32) -> bool {
        self.mul(self.range_idempotent(x), y) == x
    }

    /// Sorted indices of the inverse subsemigroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.len()];
        let mut letters: Vec<u32> = gens.iter().flat_map(|&g| [g, self.inv(g)]).collect();
        letters.sort_unstable();
        letters.dedup();
        let mut stack: Vec<u32> = Vec::new();
        for &g in &letters {
            if !std::mem::replace(&mut seen[g as usize], true) {
                stack.push(g);
            }
        }
        while let Some(x) = stack.pop() {
            for &h in &letters {
                let y = self.mul(x, h);
                if !std::mem::replace(&mut seen[y as usize], true) {
                    stack.push(y);
                }
            }
        }
        (0..self.len() as u32).filter(|&i| seen[i as usize]).collect()
    }

    /// The whole carrier as an abstract table labelled in element notation.
    pub fn to_cayley<A: InverseAlgebra<Elem = E>>(&self, alg: &A) -> CayleyTable {
        CayleyTable {
            labels: self.elements.iter().map(|e| alg.format(e)).collect(),
            mul: self.mul.clone(),
            inv: self.inv.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B2: &str = include_str!("../data/b2.table");

    #[test]
    fn brandt_table_is_valid() {
        let t = CayleyTable::load(B2).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.zero(), t.index_of("0"));
        assert_eq!(CayleyTable::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn non_commuting_idempotents_are_reported() {
        // Left-zero band on two points: e f = e, f e = f.
        let t =
            CayleyTable::from_parts(vec!["e".into(), "f".into()], vec![vec![0, 0], vec![1, 1]], vec![0, 1]).unwrap();
        assert_eq!(
            t.first_violation(),
            Some(TableViolation::IdempotentsDoNotCommute {
                e: "e".into(),
                f: "f".into()
            })
        );
    }

    #[test]
    fn non_associative_table_is_reported() {
        let t =
            CayleyTable::from_parts(vec!["a".into(), "b".into()], vec![vec![1, 0], vec![0, 0]], vec![0, 1]).unwrap();
        assert!(matches!(
            t.first_violation(),
            Some(TableViolation::Associativity { .. })
        ));
    }

    #[test]
    fn parse_errors_name_positions() {
        let bad = "elements: a b\ninv: a->a b->b\na b\na c\n";
        match CayleyTable::parse(bad) {
            Err(TableError::Parse { line, column, .. }) => assert_eq!((line, column), (4, 3)),
            other => panic!("unexpected {other:?}"),
        }
        let short = "elements: a b\ninv: a->a b->b\na b\n";
        assert!(matches!(
            CayleyTable::parse(short),
            Err(TableError::Parse { line: 3, .. })
        ));
        let noinv = "elements: a b\ninv: a->a\na b\nb b\n";
        assert!(matches!(
            CayleyTable::parse(noinv),
            Err(TableError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn generating_set_of_brandt() {
        let t = CayleyTable::load(B2).unwrap();
        let gens = t.generating_set(&[], |x| if t.is_idempotent(x) { 0 } else { 1 });
        assert_eq!(gens.len(), 1);
        assert!(!t.is_idempotent(gens[0]));
    }
}
