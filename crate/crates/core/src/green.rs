//! Green's relations on `𝔅ₙ` and enumeration of elements and class keys.
//!
//! An R-class is determined by the cups among the left points, an L-class by
//! the cups among the right points. D (= J) is equality of rank.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

use crate::diagram::BrauerDiagram;
use crate::error::{Error, Result};
use crate::perm::Permutation;

const UNSET: u8 = u8::MAX;

/// Default bound on `n` for the exhaustive element stream.
pub const DEFAULT_ELEMENT_LIMIT: usize = 7;

/// A set of disjoint unordered pairs on `{1..n}`; the key of an R-class
/// (left cups) or an L-class (right cups).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialMatching {
    mate: SmallVec<[u8; 16]>,
}

impl PartialMatching {
    pub fn empty(n: usize) -> Self {
        Self { mate: smallvec![UNSET; n] }
    }

    /// Builds a matching from 1-based pairs.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::empty(n);
        for &(a, b) in pairs {
            if a == 0 || b == 0 || a > n || b > n || a == b {
                return Err(Error::OutOfRange(format!("pair {{{a},{b}}} on 1..{n}")));
            }
            if m.mate[a - 1] != UNSET {
                return Err(Error::DuplicatePoint(a.to_string()));
            }
            if m.mate[b - 1] != UNSET {
                return Err(Error::DuplicatePoint(b.to_string()));
            }
            m.mate[a - 1] = (b - 1) as u8;
            m.mate[b - 1] = (a - 1) as u8;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.mate.len()
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.mate.iter().filter(|&&m| m != UNSET).count() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.mate.iter().all(|&m| m == UNSET)
    }

    /// 0-based mate of a 0-based point.
    #[inline]
    pub fn mate(&self, x: usize) -> Option<usize> {
        let m = self.mate[x];
        (m != UNSET).then_some(m as usize)
    }

    /// 1-based pairs `(a, b)` with `a < b`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.pairs0().map(|(a, b)| (a + 1, b + 1)).collect()
    }

    pub(crate) fn pairs0(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mate.iter().enumerate().filter_map(|(a, &b)| (b != UNSET && a < b as usize).then_some((a, b as usize)))
    }

    /// Whether `{i, j}` (1-based) is one of the pairs.
    pub fn contains_pair(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && i <= self.n() && j <= self.n() && self.mate[i - 1] as usize == j - 1
    }

    /// Image of the matching under a relabelling of points.
    pub fn relabel(&self, sigma: &Permutation) -> Self {
        let mut mate: SmallVec<[u8; 16]> = smallvec![UNSET; self.n()];
        for (a, b) in self.pairs0() {
            let (x, y) = (sigma.apply(a), sigma.apply(b));
            mate[x] = y as u8;
            mate[y] = x as u8;
        }
        Self { mate }
    }
}

impl Ord for PartialMatching {
    /// Fewer pairs first, then lexicographic on the sorted pair list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n()
            .cmp(&other.n())
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.pairs0().cmp(other.pairs0()))
    }
}

impl PartialOrd for PartialMatching {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartialMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        for (k, (a, b)) in self.pairs().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{{a},{b}}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PartialMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialMatching({self})")
    }
}

impl Serialize for PartialMatching {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Cups among the left points; the R-class key.
pub fn left_cups(a: &BrauerDiagram) -> PartialMatching {
    let n = a.n();
    let mate = (0..n)
        .map(|x| {
            let y = a.partner(x);
            if y < n {
                y as u8
            } else {
                UNSET
            }
        })
        .collect();
    PartialMatching { mate }
}

/// Cups among the right points, written with unprimed labels; the L-class key.
pub fn right_cups(a: &BrauerDiagram) -> PartialMatching {
    let n = a.n();
    let mate = (n..2 * n)
        .map(|x| {
            let y = a.partner(x);
            if y >= n {
                (y - n) as u8
            } else {
                UNSET
            }
        })
        .collect();
    PartialMatching { mate }
}

/// The five Green's relations.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum GreenRelation {
    L,
    R,
    H,
    D,
    J,
}

impl GreenRelation {
    pub const ALL: [GreenRelation; 5] = [Self::L, Self::R, Self::H, Self::D, Self::J];
}

impl FromStr for GreenRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" => Ok(Self::L),
            "R" | "r" => Ok(Self::R),
            "H" | "h" => Ok(Self::H),
            "D" | "d" => Ok(Self::D),
            "J" | "j" => Ok(Self::J),
            _ => Err(Error::Parse(format!("unknown Green's relation {s}"))),
        }
    }
}

pub fn related(a: &BrauerDiagram, b: &BrauerDiagram, rel: GreenRelation) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch { expected: a.n(), found: b.n() });
    }
    Ok(match rel {
        GreenRelation::R => left_cups(a) == left_cups(b),
        GreenRelation::L => right_cups(a) == right_cups(b),
        GreenRelation::H => left_cups(a) == left_cups(b) && right_cups(a) == right_cups(b),
        GreenRelation::D | GreenRelation::J => a.rank() == b.rank(),
    })
}

/// `(2k−1)!! = 1·3·…·(2k−1)`, saturating.
pub fn double_factorial_odd(k: usize) -> u128 {
    (1..=k as u128).fold(1u128, |acc, i| acc.saturating_mul(2 * i - 1))
}

/// Binomial coefficient, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc.saturating_mul(n as u128 - i) / (i + 1);
    }
    acc
}

/// `|𝔅ₙ| = (2n−1)!!`.
pub fn element_count(n: usize) -> u128 {
    double_factorial_odd(n)
}

/// Number of R-classes of the given corank: `C(n, 2k)·(2k−1)!!`.
pub fn r_class_count_of_corank(n: usize, corank: usize) -> u128 {
    if !corank.is_multiple_of(2) || corank > n {
        return 0;
    }
    binomial(n, corank).saturating_mul(double_factorial_odd(corank / 2))
}

/// Total number of R-classes (equivalently of partial matchings of `{1..n}`).
pub fn r_class_count(n: usize) -> u128 {
    (0..=n / 2).map(|k| r_class_count_of_corank(n, 2 * k)).fold(0, u128::saturating_add)
}

const UNDECIDED: u8 = u8::MAX - 1;
const SINGLE: u8 = u8::MAX - 2;

/// Depth-first matching enumerator: the smallest undecided point is left
/// single (if allowed) or paired with a larger undecided point.
struct MatchingDfs {
    state: Vec<u8>,
    frames: Vec<(usize, u8)>,
    allow_single: bool,
    started: bool,
    done: bool,
}

impl MatchingDfs {
    fn new(points: usize, allow_single: bool) -> Self {
        debug_assert!(points < SINGLE as usize);
        Self { state: vec![UNDECIDED; points], frames: Vec::new(), allow_single, started: false, done: false }
    }

    fn first_undecided(&self) -> Option<usize> {
        self.state.iter().position(|&s| s == UNDECIDED)
    }

    fn next_free_after(&self, p: usize, after: usize) -> Option<usize> {
        (after.max(p) + 1..self.state.len()).find(|&q| self.state[q] == UNDECIDED)
    }

    fn first_choice(&self, p: usize) -> Option<u8> {
        if self.allow_single {
            Some(SINGLE)
        } else {
            self.next_free_after(p, p).map(|q| q as u8)
        }
    }

    fn next_choice(&self, p: usize, cur: u8) -> Option<u8> {
        let after = if cur == SINGLE { p } else { cur as usize };
        self.next_free_after(p, after).map(|q| q as u8)
    }

    fn apply(&mut self, p: usize, choice: u8) {
        if choice == SINGLE {
            self.state[p] = SINGLE;
        } else {
            self.state[p] = choice;
            self.state[choice as usize] = p as u8;
        }
    }

    fn undo(&mut self, p: usize, choice: u8) {
        self.state[p] = UNDECIDED;
        if choice != SINGLE {
            self.state[choice as usize] = UNDECIDED;
        }
    }

    fn descend(&mut self) -> bool {
        while let Some(p) = self.first_undecided() {
            match self.first_choice(p) {
                Some(c) => {
                    self.apply(p, c);
                    self.frames.push((p, c));
                }
                None => return false,
            }
        }
        true
    }

    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            if self.descend() {
                return true;
            }
        }
        while let Some((p, c)) = self.frames.pop() {
            self.undo(p, c);
            if let Some(c2) = self.next_choice(p, c) {
                self.apply(p, c2);
                self.frames.push((p, c2));
                if self.descend() {
                    return true;
                }
            }
        }
        self.done = true;
        false
    }
}

/// Streams every partial matching of `{1..n}` exactly once.
pub struct RKeys {
    dfs: MatchingDfs,
}

impl Iterator for RKeys {
    type Item = PartialMatching;

    fn next(&mut self) -> Option<PartialMatching> {
        if !self.dfs.advance() {
            return None;
        }
        let mate = self.dfs.state.iter().map(|&s| if s == SINGLE { UNSET } else { s }).collect();
        Some(PartialMatching { mate })
    }
}

pub fn enumerate_r_keys(n: usize) -> RKeys {
    RKeys { dfs: MatchingDfs::new(n, true) }
}

/// Streams every element of `𝔅ₙ` exactly once.
pub struct Elements {
    dfs: MatchingDfs,
}

impl Iterator for Elements {
    type Item = BrauerDiagram;

    fn next(&mut self) -> Option<BrauerDiagram> {
        if !self.dfs.advance() {
            return None;
        }
        Some(BrauerDiagram::from_partner(&self.dfs.state).expect("perfect matching"))
    }
}

pub fn enumerate_elements(n: usize) -> Result<Elements> {
    enumerate_elements_with_limit(n, DEFAULT_ELEMENT_LIMIT)
}

pub fn enumerate_elements_with_limit(n: usize, limit: usize) -> Result<Elements> {
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    Ok(Elements { dfs: MatchingDfs::new(2 * n, false) })
}

/// All diagrams whose left cups are exactly `key`.
pub fn r_class_members(key: &PartialMatching) -> Vec<BrauerDiagram> {
    let n = key.n();
    let k = key.len();
    let singles: Vec<usize> = (0..n).filter(|&x| key.mate(x).is_none()).collect();
    let mut out = Vec::new();
    // right cups: any matching with k pairs; lines: a bijection from singles to the rest
    for rc in enumerate_r_keys(n).filter(|m| m.len() == k) {
        let free: Vec<usize> = (0..n).filter(|&y| rc.mate(y).is_none()).collect();
        for p in Permutation::all(free.len()) {
            let mut partner = vec![0u8; 2 * n];
            for (a, b) in key.pairs0() {
                partner[a] = b as u8;
                partner[b] = a as u8;
            }
            for (a, b) in rc.pairs0() {
                partner[n + a] = (n + b) as u8;
                partner[n + b] = (n + a) as u8;
            }
            for (idx, &s) in singles.iter().enumerate() {
                let t = n + free[p.apply(idx)];
                partner[s] = t as u8;
                partner[t] = s as u8;
            }
            out.push(BrauerDiagram::from_partner(&partner).expect("valid by construction"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;
    use std::collections::HashSet;

    #[test]
    fn cups_of_sample_element() {
        let a = parse("{1,2},{3,1'},{4,2'},{3',4'}", None).unwrap();
        assert_eq!(left_cups(&a).pairs(), vec![(1, 2)]);
        assert_eq!(right_cups(&a).pairs(), vec![(3, 4)]);
        assert!(left_cups(&BrauerDiagram::identity(4)).is_empty());
    }

    #[test]
    fn cup_count_is_half_corank_on_b4() {
        for a in enumerate_elements(4).unwrap() {
            assert_eq!(2 * left_cups(&a).len(), a.corank());
            assert_eq!(2 * right_cups(&a).len(), a.corank());
        }
    }

    #[test]
    fn class_counts() {
        assert_eq!(r_class_count(4), 1 + 6 + 3);
        assert_eq!(r_class_count_of_corank(9, 2), 36);
        assert_eq!(r_class_count(7), 232);
        assert_eq!(r_class_count_of_corank(5, 3), 0);
        for n in 0..=9 {
            assert_eq!(enumerate_r_keys(n).count() as u128, r_class_count(n), "n={n}");
            for k in 0..=n / 2 {
                let c = enumerate_r_keys(n).filter(|m| m.len() == k).count() as u128;
                assert_eq!(c, r_class_count_of_corank(n, 2 * k));
            }
        }
    }

    #[test]
    fn r_keys_are_distinct() {
        let keys: Vec<_> = enumerate_r_keys(7).collect();
        let set: HashSet<_> = keys.iter().cloned().collect();
        assert_eq!(set.len(), keys.len());
    }

    #[test]
    fn element_stream() {
        let one: Vec<_> = enumerate_elements(1).unwrap().collect();
        assert_eq!(one, vec![BrauerDiagram::identity(1)]);
        assert_eq!(enumerate_elements(3).unwrap().count(), 15);
        let five: HashSet<_> = enumerate_elements(5).unwrap().collect();
        assert_eq!(five.len(), 945);
        assert_eq!(enumerate_elements(0).unwrap().count(), 1);
        assert!(matches!(enumerate_elements(8), Err(Error::LimitExceeded { n: 8, limit: 7 })));
    }

    #[test]
    fn distinct_left_cups_equal_r_class_count() {
        for n in 1..=6 {
            let keys: HashSet<_> = enumerate_elements(n).unwrap().map(|a| left_cups(&a)).collect();
            assert_eq!(keys.len() as u128, r_class_count(n));
        }
    }

    #[test]
    fn r_class_members_partition_the_monoid() {
        let mut total = 0;
        for key in enumerate_r_keys(4) {
            let members = r_class_members(&key);
            assert!(members.iter().all(|m| left_cups(m) == key));
            total += members.len();
        }
        assert_eq!(total, 105);
    }

    #[test]
    fn relations_reflexive_and_right_multiplication_preserves_r() {
        let all: Vec<_> = enumerate_elements(3).unwrap().collect();
        for a in &all {
            for rel in GreenRelation::ALL {
                assert!(related(a, a, rel).unwrap());
            }
            for s in Permutation::all(3) {
                let b = a * &BrauerDiagram::from_permutation(&s);
                assert!(related(a, &b, GreenRelation::R).unwrap());
            }
        }
        assert!(related(&all[0], &BrauerDiagram::identity(2), GreenRelation::R).is_err());
    }

    #[test]
    fn d_has_one_class_per_rank_parity() {
        for n in 1..=6 {
            let ranks: HashSet<_> = enumerate_elements(n).unwrap().map(|a| a.rank()).collect();
            assert_eq!(ranks.len(), n / 2 + 1);
        }
    }

    #[test]
    fn ordering_is_by_size_then_lexicographic() {
        let a = PartialMatching::new(4, &[(3, 4)]).unwrap();
        let b = PartialMatching::new(4, &[(1, 2), (3, 4)]).unwrap();
        let c = PartialMatching::new(4, &[(1, 2)]).unwrap();
        let mut v = vec![b.clone(), a.clone(), PartialMatching::empty(4), c.clone()];
        v.sort();
        assert_eq!(v, vec![PartialMatching::empty(4), c, a, b]);
    }
}
