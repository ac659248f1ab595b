//! Brauer diagrams and their composition.
//!
//! A diagram of `𝔅ₙ` is a perfect matching on `2n` points. Point index
//! `x < n` is the left point `x+1`; index `n + y` is the right point `(y+1)'`.

use std::fmt;
use std::ops::Mul;

use serde::{Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::perm::{PartialInjection, Permutation};

pub(crate) type Points = SmallVec<[u8; 16]>;

const UNSET: u8 = u8::MAX;

/// Largest supported `n`; point indices must fit in a byte.
pub const MAX_N: usize = 127;

/// A point label as written in text: `Left(3)` is `3`, `Right(3)` is `3'`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Point {
    Left(usize),
    Right(usize),
}

impl Point {
    fn index(self, n: usize) -> Result<usize> {
        let (label, offset) = match self {
            Point::Left(i) => (i, 0),
            Point::Right(i) => (i, n),
        };
        if label == 0 || label > n {
            return Err(Error::InvalidDiagram(format!("point {self} outside 1..{n}")));
        }
        Ok(label - 1 + offset)
    }

    fn from_index(x: usize, n: usize) -> Self {
        if x < n {
            Point::Left(x + 1)
        } else {
            Point::Right(x - n + 1)
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Left(i) => write!(f, "{i}"),
            Point::Right(i) => write!(f, "{i}'"),
        }
    }
}

/// An element of the Brauer monoid `𝔅ₙ`.
///
/// Stored as the partner array of the matching, so equality is equality of
/// matchings. Circles removed during composition are not part of the value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerDiagram {
    partner: Points,
}

/// Product of two diagrams together with the number of closed loops that
/// formed in the identified middle layer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompositionResult {
    pub product: BrauerDiagram,
    pub circles: usize,
}

impl BrauerDiagram {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_N, "n={n} exceeds {MAX_N}");
        let mut partner: Points = smallvec![0; 2 * n];
        for i in 0..n {
            partner[i] = (n + i) as u8;
            partner[n + i] = i as u8;
        }
        Self { partner }
    }

    /// Builds a diagram from a 0-based partner array of even length.
    pub fn from_partner(partner: &[u8]) -> Result<Self> {
        if !partner.len().is_multiple_of(2) {
            return Err(Error::InvalidDiagram(format!("odd point count {}", partner.len())));
        }
        if partner.len() / 2 > MAX_N {
            return Err(Error::InvalidDiagram(format!("n exceeds {MAX_N}")));
        }
        let len = partner.len();
        for (x, &p) in partner.iter().enumerate() {
            let p = p as usize;
            if p >= len || p == x || partner[p] as usize != x {
                return Err(Error::InvalidDiagram(format!(
                    "partner array {partner:?} is not a fixed-point-free involution"
                )));
            }
        }
        Ok(Self { partner: partner.into() })
    }

    /// Builds a diagram of `𝔅ₙ` from its blocks.
    pub fn from_blocks(n: usize, blocks: &[(Point, Point)]) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::InvalidDiagram(format!("n exceeds {MAX_N}")));
        }
        if blocks.len() != n {
            return Err(Error::PointCount { expected: 2 * n, found: 2 * blocks.len() });
        }
        let mut partner: Points = smallvec![UNSET; 2 * n];
        for &(p, q) in blocks {
            let (x, y) = (p.index(n)?, q.index(n)?);
            if x == y {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
            for (idx, pt) in [(x, p), (y, q)] {
                if partner[idx] != UNSET {
                    return Err(Error::DuplicatePoint(pt.to_string()));
                }
            }
            partner[x] = y as u8;
            partner[y] = x as u8;
        }
        Ok(Self { partner })
    }

    /// The image of `σ` under `σ ↦ {1,σ(1)'} ∪ … ∪ {n,σ(n)'}`.
    pub fn from_permutation(sigma: &Permutation) -> Self {
        let n = sigma.n();
        let mut partner: Points = smallvec![0; 2 * n];
        for i in 0..n {
            let j = n + sigma.apply(i);
            partner[i] = j as u8;
            partner[j] = i as u8;
        }
        Self { partner }
    }

    /// Embeds `σ ∈ IS_k` into `𝔅ₙ` (`n ≥ 2k`) by doubling each point `i`
    /// into the pair `{2i−1, 2i}`.
    pub fn embed_is(sigma: &PartialInjection, n: usize) -> Result<Self> {
        let k = sigma.m();
        if n < 2 * k {
            return Err(Error::OutOfRange(format!("cannot embed IS_{k} into B_{n}: need n >= {}", 2 * k)));
        }
        let mut partner: Points = smallvec![UNSET; 2 * n];
        let mut link = |x: usize, y: usize| {
            partner[x] = y as u8;
            partner[y] = x as u8;
        };
        for i in 0..k {
            match sigma.apply(i) {
                Some(j) => {
                    link(2 * i, n + 2 * j);
                    link(2 * i + 1, n + 2 * j + 1);
                }
                None => link(2 * i, 2 * i + 1),
            }
        }
        let range = sigma.range();
        for i in 0..k {
            if !range.contains(&(i + 1)) {
                link(n + 2 * i, n + 2 * i + 1);
            }
        }
        for i in 2 * k..n {
            link(i, n + i);
        }
        Ok(Self { partner })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    /// Partner of a 0-based point index.
    #[inline]
    pub fn partner(&self, x: usize) -> usize {
        self.partner[x] as usize
    }

    pub fn partner_array(&self) -> &[u8] {
        &self.partner
    }

    /// Whether the 1-based labels `p` and `q` form a block.
    pub fn joins(&self, p: Point, q: Point) -> bool {
        let n = self.n();
        match (p.index(n), q.index(n)) {
            (Ok(x), Ok(y)) => self.partner(x) == y,
            _ => false,
        }
    }

    /// Blocks as 0-based index pairs `(x, y)` with `x < y`, ordered by `x`.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.partner.len()).filter_map(move |x| {
            let y = self.partner(x);
            (x < y).then_some((x, y))
        })
    }

    /// Blocks as labelled points, in canonical order.
    pub fn labelled_blocks(&self) -> Vec<(Point, Point)> {
        let n = self.n();
        self.blocks().map(|(x, y)| (Point::from_index(x, n), Point::from_index(y, n))).collect()
    }

    /// Composes `self` then `other`: right pins of `self` are joined to the
    /// left pins of `other`.
    pub fn compose(&self, other: &Self) -> Result<CompositionResult> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch { expected: self.n(), found: other.n() });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> CompositionResult {
        let n = self.n();
        let a = &self.partner;
        let b = &other.partner;
        let mut out: Points = smallvec![UNSET; 2 * n];
        let mut mid_seen: SmallVec<[bool; 16]> = smallvec![false; n];

        for x in 0..n {
            if out[x] != UNSET {
                continue;
            }
            let mut p = a[x] as usize;
            let end = loop {
                if p < n {
                    break p;
                }
                let m = p - n;
                mid_seen[m] = true;
                let q = b[m] as usize;
                if q >= n {
                    break q;
                }
                mid_seen[q] = true;
                p = a[n + q] as usize;
            };
            out[x] = end as u8;
            out[end] = x as u8;
        }
        for y in n..2 * n {
            if out[y] != UNSET {
                continue;
            }
            let mut q = b[y] as usize;
            let end = loop {
                if q >= n {
                    break q;
                }
                mid_seen[q] = true;
                let p = a[n + q] as usize;
                if p < n {
                    break p;
                }
                let m = p - n;
                mid_seen[m] = true;
                q = b[m] as usize;
            };
            out[y] = end as u8;
            out[end] = y as u8;
        }

        let mut circles = 0;
        for start in 0..n {
            if mid_seen[start] {
                continue;
            }
            circles += 1;
            let mut cur = start;
            loop {
                mid_seen[cur] = true;
                let across = b[cur] as usize;
                mid_seen[across] = true;
                cur = a[n + across] as usize - n;
                if cur == start {
                    break;
                }
            }
        }
        CompositionResult { product: Self { partner: out }, circles }
    }

    /// Mirror image: swaps primed and unprimed points.
    pub fn involution(&self) -> Self {
        let n = self.n();
        let flip = |x: usize| if x < n { x + n } else { x - n };
        let mut partner: Points = smallvec![0; 2 * n];
        for x in 0..2 * n {
            partner[flip(x)] = flip(self.partner(x)) as u8;
        }
        Self { partner }
    }

    /// Number of lines, i.e. blocks joining a left and a right point.
    pub fn rank(&self) -> usize {
        let n = self.n();
        (0..n).filter(|&x| self.partner(x) >= n).count()
    }

    pub fn corank(&self) -> usize {
        self.n() - self.rank()
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.n()
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        let n = self.n();
        if !self.is_permutation() {
            return None;
        }
        Permutation::from_images0((0..n).map(|x| (self.partner(x) - n) as u8).collect()).ok()
    }

    pub fn is_idempotent(&self) -> bool {
        self.compose_unchecked(self).product == *self
    }

    /// The unique idempotent among the positive powers of `self`.
    pub fn idempotent_power(&self) -> Self {
        let mut powers = vec![self.clone()];
        loop {
            let next = &powers[powers.len() - 1] * self;
            if let Some(start) = powers.iter().position(|p| *p == next) {
                return powers[start..]
                    .iter()
                    .find(|p| p.is_idempotent())
                    .cloned()
                    .expect("the cyclic part of a monogenic semigroup contains an idempotent");
            }
            powers.push(next);
        }
    }

    pub fn stable_rank(&self) -> usize {
        self.idempotent_power().rank()
    }

    /// Whether `X ∪ X'` is a union of blocks; `subset` holds 1-based labels.
    pub fn is_invariant(&self, subset: &[usize]) -> bool {
        let n = self.n();
        let Some(mask) = subset_mask(n, subset) else { return false };
        (0..2 * n).all(|x| {
            let inside = mask[x % n];
            let y = self.partner(x);
            !inside || mask[y % n]
        })
    }

    /// Restriction to an invariant subset, relabelled onto `1..|X|` in order.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        let n = self.n();
        let mask = subset_mask(n, subset)
            .ok_or_else(|| Error::NotInvariant(format!("{subset:?} is not a subset of 1..{n}")))?;
        if !self.is_invariant(subset) {
            return Err(Error::NotInvariant(format!("{subset:?} is not invariant")));
        }
        let mut relabel = vec![UNSET; n];
        let mut k = 0;
        for i in 0..n {
            if mask[i] {
                relabel[i] = k as u8;
                k += 1;
            }
        }
        let mut partner: Points = smallvec![0; 2 * k];
        let map = |x: usize| {
            if x < n {
                relabel[x] as usize
            } else {
                k + relabel[x - n] as usize
            }
        };
        for x in 0..2 * n {
            if mask[x % n] {
                partner[map(x)] = map(self.partner(x)) as u8;
            }
        }
        Ok(Self { partner })
    }

    /// `σ⁻¹ · self · σ`, computed by relabelling both sides by `σ`.
    pub fn conjugate(&self, sigma: &Permutation) -> Self {
        let n = self.n();
        assert_eq!(n, sigma.n(), "permutation size mismatch");
        let map = |x: usize| if x < n { sigma.apply(x) } else { n + sigma.apply(x - n) };
        let mut partner: Points = smallvec![0; 2 * n];
        for x in 0..2 * n {
            partner[map(x)] = map(self.partner(x)) as u8;
        }
        Self { partner }
    }
}

fn subset_mask(n: usize, subset: &[usize]) -> Option<Vec<bool>> {
    let mut mask = vec![false; n];
    for &x in subset {
        if x == 0 || x > n {
            return None;
        }
        mask[x - 1] = true;
    }
    Some(mask)
}

impl Mul for &BrauerDiagram {
    type Output = BrauerDiagram;

    /// Product without the circle count. Panics on size mismatch.
    fn mul(self, rhs: &BrauerDiagram) -> BrauerDiagram {
        assert_eq!(self.n(), rhs.n(), "diagram size mismatch");
        self.compose_unchecked(rhs).product
    }
}

impl fmt::Display for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format(self))
    }
}

impl fmt::Debug for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BrauerDiagram({self})")
    }
}

impl Serialize for BrauerDiagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
