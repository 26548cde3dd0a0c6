//! The dual symmetric inverse monoid: block bijections between partitions of
//! `{1..n}`, with the two-line notation `(12->13|34->24)`.
//!
//! Here the zero is the one-block map ∇ and the identity is the all-singletons
//! map Δ. On idempotents the natural order is reverse refinement, so suprema
//! of idempotents are common refinements.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use smallvec::SmallVec;

use crate::algebra::{Family, InverseAlgebra};
use crate::error::{AlgebraError, ParseError};
use crate::notation::Cursor;

pub const MAX_DUAL_SYM_DEGREE: usize = 6;

/// Largest ground set the bitmask representation can hold.
pub const MAX_BLOCK_POINTS: usize = 16;

/// A bijection between the blocks of two partitions of `{1..n}`.
///
/// Blocks are bitmasks (bit `k` is point `k + 1`). Pairs are kept sorted by
/// domain block, comparing blocks as sorted point lists; since the blocks are
/// disjoint this is the same as sorting by least point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockBijection {
    n: u8,
    blocks: SmallVec<[(u16, u16); 6]>,
}

/// Compares two blocks as ascending point lists.
fn block_cmp(mut a: u16, mut b: u16) -> Ordering {
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {
                let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
                if x != y {
                    return x.cmp(&y);
                }
                a &= a - 1;
                b &= b - 1;
            }
        }
    }
}

impl Ord for BlockBijection {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for (&(d1, r1), &(d2, r2)) in self.blocks.iter().zip(other.blocks.iter()) {
                let o = block_cmp(d1, d2).then_with(|| block_cmp(r1, r2));
                if o != Ordering::Equal {
                    return o;
                }
            }
            self.blocks.len().cmp(&other.blocks.len())
        })
    }
}

impl PartialOrd for BlockBijection {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn full_mask(n: usize) -> u16 {
    ((1u32 << n) - 1) as u16
}

fn is_partition(n: usize, blocks: impl Iterator<Item = u16>) -> bool {
    let mut seen = 0u16;
    for b in blocks {
        if b == 0 || seen & b != 0 {
            return false;
        }
        seen |= b;
    }
    seen == full_mask(n)
}

impl BlockBijection {
    /// Builds from `(domain block, range block)` bitmask pairs.
    pub fn from_masks(n: usize, pairs: impl IntoIterator<Item = (u16, u16)>) -> Result<Self, String> {
        if n == 0 || n > MAX_BLOCK_POINTS {
            return Err(format!("ground set of size {n} is not supported"));
        }
        let blocks: SmallVec<[(u16, u16); 6]> = pairs.into_iter().collect();
        if blocks.iter().any(|&(d, r)| (d | r) & !full_mask(n) != 0) {
            return Err(format!("a block contains a point outside 1..={n}"));
        }
        if !is_partition(n, blocks.iter().map(|b| b.0)) {
            return Err("domain blocks do not partition the ground set".into());
        }
        if !is_partition(n, blocks.iter().map(|b| b.1)) {
            return Err("range blocks do not partition the ground set".into());
        }
        Ok(Self::canonical(n, blocks))
    }

    fn canonical(n: usize, mut blocks: SmallVec<[(u16, u16); 6]>) -> Self {
        blocks.sort_unstable_by_key(|&(d, _)| d.trailing_zeros());
        BlockBijection { n: n as u8, blocks }
    }

    /// The identity on a partition given by its blocks.
    pub fn partition_identity(n: usize, blocks: impl IntoIterator<Item = u16>) -> Result<Self, String> {
        Self::from_masks(n, blocks.into_iter().map(|b| (b, b)))
    }

    pub fn nabla(n: usize) -> Self {
        let f = full_mask(n);
        BlockBijection {
            n: n as u8,
            blocks: SmallVec::from_slice(&[(f, f)]),
        }
    }

    pub fn delta(n: usize) -> Self {
        BlockBijection {
            n: n as u8,
            blocks: (0..n).map(|k| (1u16 << k, 1u16 << k)).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    /// Number of blocks.
    pub fn rank(&self) -> usize {
        self.blocks.len()
    }

    /// `(domain, range)` block pairs as bitmasks, in canonical order.
    pub fn blocks(&self) -> &[(u16, u16)] {
        &self.blocks
    }

    pub fn is_partition_identity(&self) -> bool {
        self.blocks.iter().all(|&(d, r)| d == r)
    }

    /// `self` followed by `other`: the middle partitions are joined, and each
    /// block of the join carries the union of the domain blocks feeding into it
    /// to the union of the range blocks coming out of it.
    pub fn then(&self, other: &BlockBijection) -> BlockBijection {
        let k1 = self.blocks.len();
        let k2 = other.blocks.len();
        let mut uf = UnionFind::<usize>::new(k1 + k2);
        for (i, &(_, r)) in self.blocks.iter().enumerate() {
            for (j, &(d, _)) in other.blocks.iter().enumerate() {
                if r & d != 0 {
                    uf.union(i, k1 + j);
                }
            }
        }
        let mut acc: SmallVec<[(usize, u16, u16); 6]> = SmallVec::new();
        let slot = |root: usize, d: u16, r: u16, acc: &mut SmallVec<[(usize, u16, u16); 6]>| match acc
            .iter_mut()
            .find(|(x, _, _)| *x == root)
        {
            Some(entry) => {
                entry.1 |= d;
                entry.2 |= r;
            }
            None => acc.push((root, d, r)),
        };
        for (i, &(d, _)) in self.blocks.iter().enumerate() {
            slot(uf.find(i), d, 0, &mut acc);
        }
        for (j, &(_, r)) in other.blocks.iter().enumerate() {
            slot(uf.find(k1 + j), 0, r, &mut acc);
        }
        Self::canonical(self.n as usize, acc.into_iter().map(|(_, d, r)| (d, r)).collect())
    }

    pub fn inverse(&self) -> BlockBijection {
        Self::canonical(self.n as usize, self.blocks.iter().map(|&(d, r)| (r, d)).collect())
    }

    /// Parses two-line notation. `(1|234)` abbreviates blocks mapped to
    /// themselves; `{1,10}` spells a block when labels exceed 9.
    /// `NABLA` and `DELTA` are accepted for the zero and identity.
    pub fn parse(text: &str, n: usize) -> Result<Self, ParseError> {
        if n == 0 || n > MAX_BLOCK_POINTS {
            return Err(ParseError::new(1, format!("ground set of size {n} is not supported")));
        }
        match text.trim() {
            "NABLA" => return Ok(Self::nabla(n)),
            "DELTA" => return Ok(Self::delta(n)),
            _ => {}
        }
        let mut cur = Cursor::new(text);
        cur.skip_ws();
        cur.expect('(')?;
        let mut pairs: Vec<(u16, u16)> = Vec::new();
        let mut dom_seen = 0u16;
        let mut ran_seen = 0u16;
        loop {
            cur.skip_ws();
            let col = cur.column();
            let d = parse_block(&mut cur, n)?;
            cur.skip_ws();
            let r = if cur.eat('-') {
                cur.expect('>')?;
                cur.skip_ws();
                parse_block(&mut cur, n)?
            } else {
                d
            };
            if dom_seen & d != 0 {
                return Err(ParseError::new(col, "domain blocks overlap"));
            }
            if ran_seen & r != 0 {
                return Err(ParseError::new(col, "range blocks overlap"));
            }
            dom_seen |= d;
            ran_seen |= r;
            pairs.push((d, r));
            cur.skip_ws();
            if cur.eat(')') {
                break;
            }
            cur.expect('|')?;
        }
        cur.skip_ws();
        if let Some((col, c)) = cur.peek() {
            return Err(ParseError::new(col, format!("unexpected trailing `{c}`")));
        }
        let end = cur.column();
        if dom_seen != full_mask(n) {
            return Err(ParseError::new(end, format!("domain blocks do not cover 1..={n}")));
        }
        if ran_seen != full_mask(n) {
            return Err(ParseError::new(end, format!("range blocks do not cover 1..={n}")));
        }
        Self::from_masks(n, pairs).map_err(|m| ParseError::new(end, m))
    }

    fn write_block(&self, f: &mut fmt::Formatter<'_>, mask: u16) -> fmt::Result {
        let points = (0..self.n as usize).filter(|k| mask & (1 << k) != 0).map(|k| k + 1);
        if self.n <= 9 {
            for p in points {
                write!(f, "{p}")?;
            }
            Ok(())
        } else {
            write!(f, "{{{}}}", points.format(","))
        }
    }
}

fn parse_block(cur: &mut Cursor<'_>, n: usize) -> Result<u16, ParseError> {
    let mut mask = 0u16;
    let add = |col: usize, p: usize, mask: &mut u16| -> Result<(), ParseError> {
        if p == 0 || p > n {
            return Err(ParseError::new(col, format!("point {p} lies outside 1..={n}")));
        }
        let bit = 1u16 << (p - 1);
        if *mask & bit != 0 {
            return Err(ParseError::new(col, format!("point {p} repeated in a block")));
        }
        *mask |= bit;
        Ok(())
    };
    if cur.eat('{') {
        loop {
            cur.skip_ws();
            let (col, p) = cur.number()?;
            add(col, p, &mut mask)?;
            cur.skip_ws();
            if cur.eat('}') {
                break;
            }
            cur.expect(',')?;
        }
        return Ok(mask);
    }
    while let Some((col, c)) = cur.peek() {
        let Some(d) = c.to_digit(10) else { break };
        cur.bump();
        add(col, d as usize, &mut mask)?;
    }
    if mask == 0 {
        return Err(match cur.peek() {
            Some((col, c)) => ParseError::new(col, format!("expected a block, found `{c}`")),
            None => ParseError::new(cur.column(), "expected a block, found end of input"),
        });
    }
    Ok(mask)
}

impl fmt::Display for BlockBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, &(d, r)) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            self.write_block(f, d)?;
            if d != r {
                f.write_str("->")?;
                self.write_block(f, r)?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for BlockBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All set partitions of `{1..n}` as block bitmasks, blocks ordered by least point.
pub fn set_partitions(n: usize) -> Vec<Vec<u16>> {
    fn go(n: usize, k: usize, blocks: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if k == n {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i] |= 1 << k;
            go(n, k + 1, blocks, out);
            blocks[i] &= !(1 << k);
        }
        blocks.push(1 << k);
        go(n, k + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(n, 0, &mut Vec::new(), &mut out);
    out
}

/// `I*_n`, the dual symmetric inverse monoid on `{1..n}`.
#[derive(Debug)]
pub struct DualSymInv {
    n: usize,
    carrier: OnceLock<Vec<BlockBijection>>,
}

impl DualSymInv {
    pub fn new(n: usize) -> Result<Self, AlgebraError> {
        if n == 0 || n > MAX_DUAL_SYM_DEGREE {
            return Err(AlgebraError::SizeGuard {
                guard: "dual-sym degree",
                n,
                max: MAX_DUAL_SYM_DEGREE,
            });
        }
        Ok(DualSymInv {
            n,
            carrier: OnceLock::new(),
        })
    }

    fn enumerate(&self) -> Vec<BlockBijection> {
        let partitions = set_partitions(self.n);
        let mut out = Vec::new();
        for dom in &partitions {
            for ran in partitions.iter().filter(|r| r.len() == dom.len()) {
                for perm in (0..ran.len()).permutations(ran.len()) {
                    let blocks = dom.iter().zip(&perm).map(|(&d, &j)| (d, ran[j])).collect();
                    out.push(BlockBijection::canonical(self.n, blocks));
                }
            }
        }
        out.sort();
        out
    }

    /// The two-block partition `(Y | X \ Y)` as an idempotent.
    fn dichotomy(&self, y: u16) -> BlockBijection {
        BlockBijection::canonical(
            self.n,
            SmallVec::from_slice(&[(y, y), (!y & full_mask(self.n), !y & full_mask(self.n))]),
        )
    }

    /// Subsets containing point 1 that are proper, i.e. one side of each dichotomy.
    fn dichotomy_sides(&self) -> impl Iterator<Item = u16> + '_ {
        let full = full_mask(self.n);
        (0..full).map(|m| m | 1).filter(move |&m| m != full).dedup()
    }
}

impl InverseAlgebra for DualSymInv {
    type Elem = BlockBijection;

    fn family(&self) -> Family {
        Family::DualSym
    }

    fn degree(&self) -> usize {
        self.n
    }

    fn contains(&self, a: &BlockBijection) -> bool {
        a.degree() == self.n
    }

    fn compose(&self, a: &BlockBijection, b: &BlockBijection) -> BlockBijection {
        a.then(b)
    }

    fn inverse(&self, a: &BlockBijection) -> BlockBijection {
        a.inverse()
    }

    fn zero(&self) -> BlockBijection {
        BlockBijection::nabla(self.n)
    }

    fn identity(&self) -> BlockBijection {
        BlockBijection::delta(self.n)
    }

    fn is_idempotent(&self, a: &BlockBijection) -> bool {
        a.is_partition_identity()
    }

    fn is_zero(&self, a: &BlockBijection) -> bool {
        a.rank() == 1
    }

    fn idempotent_sup(&self, idempotents: &[BlockBijection]) -> BlockBijection {
        if idempotents.is_empty() {
            return self.zero();
        }
        let mut blocks: Vec<u16> = vec![full_mask(self.n)];
        for e in idempotents {
            blocks = blocks
                .iter()
                .flat_map(|&b| e.blocks.iter().map(move |&(d, _)| b & d))
                .filter(|&b| b != 0)
                .collect();
        }
        BlockBijection::canonical(self.n, blocks.into_iter().map(|b| (b, b)).collect())
    }

    fn atoms_below(&self, a: &BlockBijection) -> Vec<BlockBijection> {
        let k = a.rank();
        if k < 2 {
            return Vec::new();
        }
        let full = full_mask(self.n);
        // The block containing 1 always sits on the left of the split.
        (0..(1u32 << (k - 1)) - 1)
            .map(|m| {
                let chosen = (m << 1) | 1;
                let (mut d, mut r) = (0u16, 0u16);
                for (i, &(bd, br)) in a.blocks.iter().enumerate() {
                    if chosen & (1 << i) != 0 {
                        d |= bd;
                        r |= br;
                    }
                }
                BlockBijection::canonical(self.n, SmallVec::from_slice(&[(d, r), (full & !d, full & !r)]))
            })
            .sorted()
            .collect()
    }

    fn all_atoms(&self) -> Vec<BlockBijection> {
        let full = full_mask(self.n);
        let sides: Vec<u16> = self.dichotomy_sides().collect();
        let mut out = Vec::new();
        for &d in &sides {
            for &r in &sides {
                out.push(BlockBijection::canonical(
                    self.n,
                    SmallVec::from_slice(&[(d, r), (full & !d, full & !r)]),
                ));
                out.push(BlockBijection::canonical(
                    self.n,
                    SmallVec::from_slice(&[(d, full & !r), (full & !d, r)]),
                ));
            }
        }
        out.sort();
        out
    }

    fn primitive_idempotents(&self) -> Vec<BlockBijection> {
        self.dichotomy_sides().map(|y| self.dichotomy(y)).sorted().collect()
    }

    fn carrier(&self) -> &[BlockBijection] {
        self.carrier.get_or_init(|| self.enumerate())
    }

    fn format(&self, a: &BlockBijection) -> String {
        a.to_string()
    }

    fn parse(&self, text: &str) -> Result<BlockBijection, ParseError> {
        BlockBijection::parse(text, self.n)
    }

    fn symbol(&self, a: &BlockBijection) -> Option<&'static str> {
        if a.rank() == 1 {
            Some("NABLA")
        } else if a.rank() == self.n && a.is_partition_identity() {
            Some("DELTA")
        } else {
            None
        }
    }
}
