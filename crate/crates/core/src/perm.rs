//! Permutations of `{1..n}` and partial injections of `{1..m}`.
//!
//! Products are written left to right, matching diagram composition:
//! `a.then(&b)` maps `x` to `b(a(x))`. With this convention the embedding
//! of permutations (and of partial injections) into the Brauer monoid is a
//! homomorphism for the chip product.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A bijection of `{1..n}`, stored 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { image: (0..n as u8).collect() }
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images0(image: Vec<u8>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{image:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Self { image })
    }

    /// Builds a permutation from 1-based images `[σ(1), …, σ(n)]`.
    pub fn from_images(image: &[usize]) -> Result<Self> {
        let zero = image
            .iter()
            .map(|&x| {
                if x == 0 || x > u8::MAX as usize {
                    Err(Error::InvalidPermutation(format!("image {x} out of range")))
                } else {
                    Ok((x - 1) as u8)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images0(zero)
    }

    /// The transposition of the 1-based points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > n || b > n || a == b {
            return Err(Error::InvalidPermutation(format!("bad transposition ({a} {b}) in S_{n}")));
        }
        let mut p = Self::identity(n);
        p.image.swap(a - 1, b - 1);
        Ok(p)
    }

    /// Product of disjoint or overlapping cycles given 1-based, composed left to right.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut acc = Self::identity(n);
        for cycle in cycles {
            if cycle.iter().any(|&x| x == 0 || x > n) {
                return Err(Error::InvalidPermutation(format!("cycle {cycle:?} out of range")));
            }
            let mut c = Self::identity(n);
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                c.image[x - 1] = (y - 1) as u8;
            }
            let c = Self::from_images0(c.image)?;
            acc = acc.then(&c);
        }
        Ok(acc)
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// 0-based image of the 0-based point `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    pub fn images0(&self) -> &[u8] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Self { image: inv }
    }

    /// Left-to-right product: first `self`, then `other`.
    pub fn then(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n(), "permutation size mismatch");
        Self { image: self.image.iter().map(|&x| other.image[x as usize]).collect() }
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.then(self);
            k += 1;
        }
        k
    }

    /// Nontrivial cycles, 1-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// All of `S_n` in lexicographic order of image vectors.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations { next: Some((0..n as u8).collect()) }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Iterator over `S_n` in lexicographic order.
pub struct AllPermutations {
    next: Option<Vec<u8>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        // standard next-permutation step
        let n = succ.len();
        if n >= 2 {
            let mut i = n - 1;
            while i > 0 && succ[i - 1] >= succ[i] {
                i -= 1;
            }
            if i > 0 {
                let mut j = n - 1;
                while succ[j] <= succ[i - 1] {
                    j -= 1;
                }
                succ.swap(i - 1, j);
                succ[i..].reverse();
                self.next = Some(succ);
            }
        }
        Some(Permutation { image: cur })
    }
}

/// A partial injective map on `{1..m}`, stored 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PartialInjection {
    map: Vec<Option<u8>>,
}

impl PartialInjection {
    /// Builds a partial injection on `{1..m}` from 1-based `(point, image)` pairs.
    pub fn new(m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut map = vec![None; m];
        let mut used = vec![false; m];
        for &(x, y) in pairs {
            if x == 0 || y == 0 || x > m || y > m {
                return Err(Error::InvalidPartialInjection(format!("{x} -> {y} outside 1..{m}")));
            }
            if map[x - 1].is_some() {
                return Err(Error::InvalidPartialInjection(format!("{x} mapped twice")));
            }
            if used[y - 1] {
                return Err(Error::InvalidPartialInjection(format!("{y} hit twice")));
            }
            map[x - 1] = Some((y - 1) as u8);
            used[y - 1] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(m: usize) -> Self {
        Self { map: (0..m as u8).map(Some).collect() }
    }

    pub fn empty(m: usize) -> Self {
        Self { map: vec![None; m] }
    }

    /// The partial identity on `{1..k}` inside `IS_m`.
    pub fn partial_identity(m: usize, k: usize) -> Self {
        Self { map: (0..m as u8).map(|x| (usize::from(x) < k).then_some(x)).collect() }
    }

    pub fn from_permutation(p: &Permutation) -> Self {
        Self { map: p.images0().iter().copied().map(Some).collect() }
    }

    pub fn m(&self) -> usize {
        self.map.len()
    }

    /// 0-based image of a 0-based point.
    #[inline]
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map[x].map(usize::from)
    }

    pub fn rank(&self) -> usize {
        self.map.iter().filter(|x| x.is_some()).count()
    }

    /// 1-based domain.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.m()).filter(|&x| self.map[x].is_some()).map(|x| x + 1).collect()
    }

    /// 1-based range.
    pub fn range(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.map.iter().flatten().map(|&y| y as usize + 1).collect();
        r.sort_unstable();
        r
    }

    /// 1-based `(point, image)` pairs in increasing point order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.map.iter().enumerate().filter_map(|(x, y)| y.map(|y| (x + 1, y as usize + 1))).collect()
    }

    /// Left-to-right product: first `self`, then `other`.
    pub fn then(&self, other: &Self) -> Self {
        assert_eq!(self.m(), other.m(), "partial injection size mismatch");
        Self { map: self.map.iter().map(|y| y.and_then(|y| other.map[y as usize])).collect() }
    }

    /// All of `IS_m`.
    pub fn all(m: usize) -> Vec<Self> {
        fn rec(x: usize, cur: &mut Vec<Option<u8>>, used: &mut Vec<bool>, out: &mut Vec<PartialInjection>) {
            let m = used.len();
            if x == m {
                out.push(PartialInjection { map: cur.clone() });
                return;
            }
            cur[x] = None;
            rec(x + 1, cur, used, out);
            for y in 0..m {
                if !used[y] {
                    used[y] = true;
                    cur[x] = Some(y as u8);
                    rec(x + 1, cur, used, out);
                    used[y] = false;
                }
            }
            cur[x] = None;
        }
        let mut out = Vec::new();
        rec(0, &mut vec![None; m], &mut vec![false; m], &mut out);
        out
    }
}

impl fmt::Display for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (x, y)) in self.pairs().into_iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        write!(f, "]")
    }
}
