//! The symmetric inverse monoid: partial injections of `{1..n}`.

use std::fmt;
use std::sync::OnceLock;

use smallvec::SmallVec;

use crate::algebra::{Family, InverseAlgebra};
use crate::error::{AlgebraError, ParseError};
use crate::notation::Cursor;

/// Largest `n` for which the carrier may be enumerated.
pub const MAX_SYM_DEGREE: usize = 7;

/// A partial injection, stored as its graph: `(source, target)` pairs sorted
/// by source. Points are `1..=n`.
///
/// The derived ordering compares the degree first and then the pair lists
/// lexicographically, which is the canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialInjection {
    n: u8,
    pairs: SmallVec<[(u8, u8); 8]>,
}

impl PartialInjection {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, String> {
        if n > u8::MAX as usize {
            return Err(format!("ground set of size {n} is too large"));
        }
        let mut out: SmallVec<[(u8, u8); 8]> = SmallVec::new();
        let mut seen_src = vec![false; n + 1];
        let mut seen_dst = vec![false; n + 1];
        for (x, y) in pairs {
            if x == 0 || x > n || y == 0 || y > n {
                return Err(format!("pair {x}->{y} lies outside 1..={n}"));
            }
            if std::mem::replace(&mut seen_src[x], true) {
                return Err(format!("point {x} is mapped twice"));
            }
            if std::mem::replace(&mut seen_dst[y], true) {
                return Err(format!("point {y} is hit twice"));
            }
            out.push((x as u8, y as u8));
        }
        out.sort_unstable();
        Ok(PartialInjection { n: n as u8, pairs: out })
    }

    pub fn empty(n: usize) -> Self {
        PartialInjection {
            n: n as u8,
            pairs: SmallVec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::partial_identity(n, 1..=n)
    }

    pub fn partial_identity(n: usize, points: impl IntoIterator<Item = usize>) -> Self {
        let mut pairs: SmallVec<[(u8, u8); 8]> = points.into_iter().map(|x| (x as u8, x as u8)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        PartialInjection { n: n as u8, pairs }
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|&(x, y)| (x as usize, y as usize))
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&(x as u8), |&(s, _)| s)
            .ok()
            .map(|i| self.pairs[i].1 as usize)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().map(|&(x, _)| x as usize)
    }

    pub fn range(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().map(|&(_, y)| y as usize)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &PartialInjection) -> PartialInjection {
        let pairs = self
            .pairs
            .iter()
            .filter_map(|&(x, y)| other.apply(y as usize).map(|z| (x, z as u8)))
            .collect();
        PartialInjection { n: self.n, pairs }
    }

    pub fn inverse(&self) -> PartialInjection {
        let mut pairs: SmallVec<[(u8, u8); 8]> = self.pairs.iter().map(|&(x, y)| (y, x)).collect();
        pairs.sort_unstable();
        PartialInjection { n: self.n, pairs }
    }

    pub fn is_partial_identity(&self) -> bool {
        self.pairs.iter().all(|&(x, y)| x == y)
    }

    /// Parses `[1->2, 3->3]`; the empty map is `[]`.
    pub fn parse(text: &str, n: usize) -> Result<Self, ParseError> {
        let mut cur = Cursor::new(text);
        cur.skip_ws();
        cur.expect('[')?;
        let mut pairs = Vec::new();
        cur.skip_ws();
        if !cur.eat(']') {
            loop {
                cur.skip_ws();
                let (col, x) = cur.number()?;
                cur.skip_ws();
                cur.expect('-')?;
                cur.expect('>')?;
                cur.skip_ws();
                let (_, y) = cur.number()?;
                pairs.push((col, x, y));
                cur.skip_ws();
                if cur.eat(']') {
                    break;
                }
                cur.expect(',')?;
            }
        }
        cur.skip_ws();
        if let Some((col, c)) = cur.peek() {
            return Err(ParseError::new(col, format!("unexpected trailing `{c}`")));
        }
        let mut src = vec![false; n + 1];
        let mut dst = vec![false; n + 1];
        for &(col, x, y) in &pairs {
            if x == 0 || x > n || y == 0 || y > n {
                return Err(ParseError::new(col, format!("{x}->{y} lies outside 1..={n}")));
            }
            if std::mem::replace(&mut src[x], true) {
                return Err(ParseError::new(col, format!("point {x} is mapped twice")));
            }
            if std::mem::replace(&mut dst[y], true) {
                return Err(ParseError::new(col, format!("point {y} is hit twice")));
            }
        }
        PartialInjection::new(n, pairs.into_iter().map(|(_, x, y)| (x, y))).map_err(|m| ParseError::new(1, m))
    }
}

impl fmt::Display for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, (x, y)) in self.pairs().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `I_n`, the symmetric inverse monoid on `{1..n}`.
#[derive(Debug)]
pub struct SymInv {
    n: usize,
    carrier: OnceLock<Vec<PartialInjection>>,
}

impl SymInv {
    pub fn new(n: usize) -> Result<Self, AlgebraError> {
        if n == 0 || n > MAX_SYM_DEGREE {
            return Err(AlgebraError::SizeGuard {
                guard: "sym degree",
                n,
                max: MAX_SYM_DEGREE,
            });
        }
        Ok(SymInv {
            n,
            carrier: OnceLock::new(),
        })
    }

    fn enumerate(&self) -> Vec<PartialInjection> {
        fn go(
            n: usize,
            x: usize,
            used: &mut Vec<bool>,
            cur: &mut Vec<(usize, usize)>,
            out: &mut Vec<PartialInjection>,
        ) {
            if x > n {
                out.push(PartialInjection::new(n, cur.iter().copied()).expect("valid by construction"));
                return;
            }
            go(n, x + 1, used, cur, out);
            for y in 1..=n {
                if !used[y] {
                    used[y] = true;
                    cur.push((x, y));
                    go(n, x + 1, used, cur, out);
                    cur.pop();
                    used[y] = false;
                }
            }
        }
        let mut out = Vec::new();
        go(self.n, 1, &mut vec![false; self.n + 1], &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl InverseAlgebra for SymInv {
    type Elem = PartialInjection;

    fn family(&self) -> Family {
        Family::Sym
    }

    fn degree(&self) -> usize {
        self.n
    }

    fn contains(&self, a: &PartialInjection) -> bool {
        a.degree() == self.n
    }

    fn compose(&self, a: &PartialInjection, b: &PartialInjection) -> PartialInjection {
        a.then(b)
    }

    fn inverse(&self, a: &PartialInjection) -> PartialInjection {
        a.inverse()
    }

    fn zero(&self) -> PartialInjection {
        PartialInjection::empty(self.n)
    }

    fn identity(&self) -> PartialInjection {
        PartialInjection::identity(self.n)
    }

    fn is_idempotent(&self, a: &PartialInjection) -> bool {
        a.is_partial_identity()
    }

    fn is_zero(&self, a: &PartialInjection) -> bool {
        a.rank() == 0
    }

    fn le(&self, a: &PartialInjection, b: &PartialInjection) -> bool {
        a.pairs().all(|(x, y)| b.apply(x) == Some(y))
    }

    fn idempotent_sup(&self, idempotents: &[PartialInjection]) -> PartialInjection {
        PartialInjection::partial_identity(self.n, idempotents.iter().flat_map(|e| e.domain()))
    }

    fn atoms_below(&self, a: &PartialInjection) -> Vec<PartialInjection> {
        a.pairs()
            .map(|(x, y)| PartialInjection::new(self.n, [(x, y)]).expect("restriction"))
            .collect()
    }

    fn all_atoms(&self) -> Vec<PartialInjection> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for x in 1..=self.n {
            for y in 1..=self.n {
                out.push(PartialInjection::new(self.n, [(x, y)]).expect("single pair"));
            }
        }
        out
    }

    fn primitive_idempotents(&self) -> Vec<PartialInjection> {
        (1..=self.n)
            .map(|x| PartialInjection::partial_identity(self.n, [x]))
            .collect()
    }

    fn carrier(&self) -> &[PartialInjection] {
        self.carrier.get_or_init(|| self.enumerate())
    }

    fn format(&self, a: &PartialInjection) -> String {
        a.to_string()
    }

    fn parse(&self, text: &str) -> Result<PartialInjection, ParseError> {
        PartialInjection::parse(text, self.n)
    }
}
