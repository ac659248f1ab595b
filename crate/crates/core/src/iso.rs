//! Isomorphism of cross-sections as abstract monoids.
//!
//! Both sections are generated by their corank-2 members, so a bijection of
//! those generators fixes everything else. The search assigns generators one
//! at a time and closes the partial map under products, backing out on the
//! first collision.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::BrauerDiagram;
use crate::error::{Error, Result};
use crate::section::CrossSection;

const NONE: u16 = u16::MAX;

/// Multiplication table of a cross-section over element indices.
pub struct Table {
    size: usize,
    mul: Vec<u16>,
    identity: usize,
}

impl Table {
    pub fn new(cs: &CrossSection) -> Result<Self> {
        let els = cs.elements();
        let size = els.len();
        if size >= NONE as usize {
            return Err(Error::LimitExceeded { n: cs.n(), limit: 9 });
        }
        let index: HashMap<&BrauerDiagram, u16> = els.iter().enumerate().map(|(k, a)| (a, k as u16)).collect();
        let rows: Vec<Vec<u16>> = els
            .par_iter()
            .map(|a| els.iter().map(|b| index.get(&(a * b)).copied().ok_or(Error::NotMember)).collect())
            .collect::<Result<_>>()?;
        let identity = els.iter().position(BrauerDiagram::is_permutation).ok_or(Error::NotMember)?;
        Ok(Self { size, mul: rows.concat(), identity })
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size + y] as usize
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// Isomorphism invariants of one element.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct Signature {
    corank: usize,
    stable_rank: usize,
    idempotent: bool,
    right_fixers: usize,
    left_fixers: usize,
    row_image: usize,
    column_image: usize,
}

fn signatures(cs: &CrossSection, t: &Table) -> Vec<Signature> {
    let n = t.size;
    (0..n)
        .into_par_iter()
        .map(|x| {
            let a = &cs.elements()[x];
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            let (mut rf, mut lf) = (0, 0);
            for y in 0..n {
                let (p, q) = (t.mul(x, y), t.mul(y, x));
                rf += usize::from(p == x);
                lf += usize::from(q == x);
                row[p] = true;
                col[q] = true;
            }
            Signature {
                corank: a.corank(),
                stable_rank: a.stable_rank(),
                idempotent: t.mul(x, x) == x,
                right_fixers: rf,
                left_fixers: lf,
                row_image: row.iter().filter(|&&b| b).count(),
                column_image: col.iter().filter(|&&b| b).count(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoResult {
    pub found: bool,
    /// Pairs `(a, φ(a))` in the element order of the first section.
    pub mapping: Option<Vec<(BrauerDiagram, BrauerDiagram)>>,
    /// Generator assignments tried.
    pub nodes: u64,
}

struct Search<'a> {
    ta: &'a Table,
    tb: &'a Table,
    sa: &'a [Signature],
    sb: &'a [Signature],
    order: Vec<usize>,
    gens_b: Vec<usize>,
    f: Vec<u16>,
    inv: Vec<u16>,
    trail: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn assign(&mut self, a: usize, b: usize) -> bool {
        let mut queue = vec![(a, b)];
        while let Some((x, y)) = queue.pop() {
            if self.f[x] as usize == y {
                continue;
            }
            if self.f[x] != NONE || self.inv[y] != NONE || self.sa[x] != self.sb[y] {
                return false;
            }
            self.f[x] = y as u16;
            self.inv[y] = x as u16;
            self.trail.push(x);
            for k in 0..self.trail.len() {
                let z = self.trail[k];
                let fz = self.f[z] as usize;
                queue.push((self.ta.mul(x, z), self.tb.mul(y, fz)));
                queue.push((self.ta.mul(z, x), self.tb.mul(fz, y)));
            }
        }
        true
    }

    fn rollback(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().expect("nonempty");
            self.inv[self.f[x] as usize] = NONE;
            self.f[x] = NONE;
        }
    }

    fn run(&mut self, depth: usize) -> bool {
        let Some(&g) = self.order[depth..].iter().find(|&&g| self.f[g] == NONE) else {
            return self.f.iter().all(|&v| v != NONE);
        };
        let depth = self.order.iter().position(|&x| x == g).expect("listed");
        for k in 0..self.gens_b.len() {
            let h = self.gens_b[k];
            if self.inv[h] != NONE || self.sa[g] != self.sb[h] {
                continue;
            }
            self.nodes += 1;
            let mark = self.trail.len();
            if self.assign(g, h) && self.run(depth + 1) {
                return true;
            }
            self.rollback(mark);
        }
        false
    }
}

/// Decides whether `a` and `b` are isomorphic monoids; exhaustive when the
/// answer is no.
pub fn find_isomorphism(a: &CrossSection, b: &CrossSection) -> Result<IsoResult> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch { expected: a.n(), found: b.n() });
    }
    let none = |nodes| IsoResult { found: false, mapping: None, nodes };
    if a.len() != b.len() {
        return Ok(none(0));
    }
    let (ta, tb) = (Table::new(a)?, Table::new(b)?);
    let (sa, sb) = (signatures(a, &ta), signatures(b, &tb));
    let mut ca = sa.clone();
    let mut cb = sb.clone();
    ca.sort();
    cb.sort();
    if ca != cb {
        return Ok(none(0));
    }
    let mut class_size: HashMap<Signature, usize> = HashMap::new();
    for s in &sb {
        *class_size.entry(*s).or_default() += 1;
    }
    let gens =
        |cs: &CrossSection| -> Vec<usize> { (0..cs.len()).filter(|&k| cs.elements()[k].corank() == 2).collect() };
    let mut order = gens(a);
    order.sort_by_key(|&g| (class_size[&sa[g]], sa[g], g));
    let mut s = Search {
        ta: &ta,
        tb: &tb,
        sa: &sa,
        sb: &sb,
        order,
        gens_b: gens(b),
        f: vec![NONE; ta.size],
        inv: vec![NONE; tb.size],
        trail: Vec::new(),
        nodes: 0,
    };
    if !s.assign(ta.identity, tb.identity) || !s.run(0) {
        return Ok(none(s.nodes));
    }
    let f: Vec<usize> = s.f.iter().map(|&v| v as usize).collect();
    debug_assert!(is_homomorphism(&ta, &tb, &f));
    if !is_homomorphism(&ta, &tb, &f) {
        return Ok(none(s.nodes));
    }
    let mapping = f.iter().enumerate().map(|(x, &y)| (a.elements()[x].clone(), b.elements()[y].clone())).collect();
    Ok(IsoResult { found: true, mapping: Some(mapping), nodes: s.nodes })
}

fn is_homomorphism(ta: &Table, tb: &Table, f: &[usize]) -> bool {
    (0..ta.size).into_par_iter().all(|x| (0..ta.size).all(|y| f[ta.mul(x, y)] == tb.mul(f[x], f[y])))
}

/// Checks a claimed isomorphism against both full multiplication tables.
pub fn is_isomorphism(a: &CrossSection, b: &CrossSection, mapping: &[(BrauerDiagram, BrauerDiagram)]) -> Result<bool> {
    if a.len() != b.len() || mapping.len() != a.len() {
        return Ok(false);
    }
    let (ta, tb) = (Table::new(a)?, Table::new(b)?);
    let mut f = vec![usize::MAX; a.len()];
    let mut hit = vec![false; b.len()];
    for (x, y) in mapping {
        let (Some(i), Some(j)) = (a.index_of(x), b.index_of(y)) else { return Ok(false) };
        if f[i] != usize::MAX || hit[j] {
            return Ok(false);
        }
        f[i] = j;
        hit[j] = true;
    }
    Ok(is_homomorphism(&ta, &tb, &f))
}
