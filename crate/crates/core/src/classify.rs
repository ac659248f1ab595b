//! Conjugation action of `Sₙ` on cross-sections: orbits, stabilizers and
//! the enumeration of every R-cross-section.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::{build_canonical, extract_params, frak_a, params_from_xy, slots, ParamTable, XYParams};
use crate::diagram::BrauerDiagram;
use crate::error::{Error, Result};
use crate::green::{enumerate_r_keys, left_cups, r_class_members, PartialMatching};
use crate::perm::Permutation;
use crate::section::{verify_cross_section, CrossSection, SectionKind};

/// Largest `n` for which every parameter table is tried.
pub const EXHAUSTIVE_TABLE_LIMIT: usize = 7;
/// Default bound for [`enumerate_canonical`].
pub const DEFAULT_CANONICAL_LIMIT: usize = 10;
/// Default bound for materializing every cross-section.
pub const DEFAULT_ALL_LIMIT: usize = 7;

/// `{σ⁻¹ a σ : a ∈ cs}`.
pub fn conjugate(cs: &CrossSection, sigma: &Permutation) -> Result<CrossSection> {
    if sigma.n() != cs.n() {
        return Err(Error::SizeMismatch { expected: cs.n(), found: sigma.n() });
    }
    let elements = cs.elements().iter().map(|a| a.conjugate(sigma)).collect();
    CrossSection::from_elements(cs.n(), cs.kind(), elements)
}

fn fixes(cs: &CrossSection, sigma: &Permutation) -> bool {
    cs.elements().iter().all(|a| cs.contains(&a.conjugate(sigma)))
}

/// Every `σ ∈ Sₙ` with `cs^σ = cs`, by exhausting `Sₙ`.
pub fn stabilizer(cs: &CrossSection) -> Vec<Permutation> {
    let perms: Vec<Permutation> = Permutation::all(cs.n()).collect();
    let mut out: Vec<Permutation> = perms.into_par_iter().filter(|s| fixes(cs, s)).collect();
    out.sort();
    out
}

/// Permutations preserving each trailing pair `{n−1,n}, {n−3,n−2}, …`
/// (and hence fixing `1` when `n` is odd).
pub fn block_preserving(n: usize) -> Vec<Permutation> {
    let blocks: Vec<(usize, usize)> = (0..n / 2).map(|t| (n - 2 * t - 1, n - 2 * t)).collect();
    let mut out: Vec<Permutation> = (0u64..1 << blocks.len())
        .map(|mask| {
            let cycles: Vec<[usize; 2]> =
                blocks.iter().enumerate().filter(|(t, _)| mask >> t & 1 == 1).map(|(_, &(a, b))| [a, b]).collect();
            let refs: Vec<&[usize]> = cycles.iter().map(|c| &c[..]).collect();
            Permutation::from_cycles(n, &refs).expect("disjoint transpositions")
        })
        .collect();
    out.sort();
    out
}

/// Stabilizer of a canonical cross-section. A conjugate of a canonical
/// section is canonical only if `σ` preserves every trailing pair, so only
/// [`block_preserving`] permutations need testing.
pub fn stabilizer_pruned(cs: &CrossSection) -> Result<Vec<Permutation>> {
    if !cs.is_canonical() {
        return Err(Error::NotCanonical("pruned stabilizer search needs a canonical section".into()));
    }
    Ok(block_preserving(cs.n()).into_iter().filter(|s| fixes(cs, s)).collect())
}

/// `(n−1 n) · ∏ (i i+1)` over the pairs of [`frak_a`].
pub fn expected_stabilizer_element(n: usize) -> Permutation {
    if n < 2 {
        return Permutation::identity(n);
    }
    let mut cycles: Vec<[usize; 2]> = vec![[n - 1, n]];
    cycles.extend(frak_a(n).into_iter().map(|(i, j)| [i, j]));
    let refs: Vec<&[usize]> = cycles.iter().map(|c| &c[..]).collect();
    Permutation::from_cycles(n, &refs).expect("disjoint transpositions")
}

/// Every canonical R-cross-section of `𝔅ₙ`, sorted by parameter table.
///
/// Up to [`EXHAUSTIVE_TABLE_LIMIT`] every table is built and verified; above
/// it only the x/y tables are.
pub fn enumerate_canonical(n: usize) -> Result<Vec<CrossSection>> {
    enumerate_canonical_with_limit(n, DEFAULT_CANONICAL_LIMIT)
}

pub fn enumerate_canonical_with_limit(n: usize, limit: usize) -> Result<Vec<CrossSection>> {
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    let tables: Vec<ParamTable> = if n <= EXHAUSTIVE_TABLE_LIMIT {
        (0u64..1 << slots(n).len()).map(|b| ParamTable::from_bits(n, b)).collect()
    } else {
        XYParams::all(n).iter().map(params_from_xy).collect()
    };
    let mut found: Vec<(ParamTable, CrossSection)> = tables
        .into_par_iter()
        .filter_map(|t| {
            let cs = build_canonical(n, &t).ok()?;
            cs.verify().is_ok().then_some((t, cs))
        })
        .collect();
    found.sort_by_key(|(t, _)| t.to_bits());
    Ok(found.into_iter().map(|(_, cs)| cs).collect())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Strategy {
    /// One element per R-class, chosen depth-first with closure propagation.
    Backtrack,
    /// Conjugates of the canonical sections.
    Orbits,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitInfo {
    pub representative: ParamTable,
    pub representative_xy: Option<XYParams>,
    pub size: u128,
    pub canonical_members: usize,
    pub stabilizer: Vec<Permutation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub n: usize,
    pub canonical_count: usize,
    pub total: u128,
    pub orbits: Vec<OrbitInfo>,
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Groups the canonical sections into `Sₙ`-orbits. Canonical sections can
/// only be conjugate by block-preserving permutations, and orbit sizes
/// follow from the stabilizers, so nothing of size `n!` is materialized.
pub fn orbit_report(n: usize) -> Result<OrbitReport> {
    let canon = enumerate_canonical(n)?;
    orbit_report_from(n, &canon)
}

pub fn orbit_report_from(n: usize, canon: &[CrossSection]) -> Result<OrbitReport> {
    let index: HashMap<&CrossSection, usize> = canon.iter().enumerate().map(|(k, c)| (c, k)).collect();
    let group = block_preserving(n);
    let mut orbit_of = vec![usize::MAX; canon.len()];
    let mut orbits = Vec::new();
    for k in 0..canon.len() {
        if orbit_of[k] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = 0;
        let mut stab = Vec::new();
        for s in &group {
            let c = conjugate(&canon[k], s)?;
            let m = *index.get(&c).ok_or_else(|| Error::NotCanonical("conjugate left the canonical set".into()))?;
            if m == k {
                stab.push(s.clone());
            }
            if orbit_of[m] == usize::MAX {
                orbit_of[m] = id;
                members += 1;
            }
        }
        let params = extract_params(&canon[k])?;
        orbits.push(OrbitInfo {
            representative_xy: params.to_xy().ok(),
            representative: params,
            size: factorial(n) / stab.len() as u128,
            canonical_members: members,
            stabilizer: stab,
        });
    }
    let total = orbits.iter().map(|o| o.size).sum();
    Ok(OrbitReport { n, canonical_count: canon.len(), total, orbits })
}

/// Every R-cross-section of `𝔅ₙ`, sorted, together with the orbit report.
pub fn enumerate_all(n: usize, strategy: Strategy) -> Result<(Vec<CrossSection>, OrbitReport)> {
    enumerate_all_with_limit(n, strategy, DEFAULT_ALL_LIMIT)
}

pub fn enumerate_all_with_limit(
    n: usize,
    strategy: Strategy,
    limit: usize,
) -> Result<(Vec<CrossSection>, OrbitReport)> {
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    let canon = enumerate_canonical(n)?;
    let report = orbit_report_from(n, &canon)?;
    let all = match strategy {
        Strategy::Orbits => all_by_orbits(n, &canon)?,
        Strategy::Backtrack => all_by_backtracking(n),
    };
    Ok((all, report))
}

fn all_by_orbits(n: usize, canon: &[CrossSection]) -> Result<Vec<CrossSection>> {
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let mut seen: HashSet<CrossSection> = HashSet::new();
    for cs in canon {
        if seen.contains(cs) {
            continue;
        }
        let orbit: Vec<CrossSection> = perms.par_iter().map(|s| conjugate(cs, s)).collect::<Result<_>>()?;
        seen.extend(orbit);
    }
    let mut out: Vec<CrossSection> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

struct Backtracker {
    keys: Vec<PartialMatching>,
    key_index: HashMap<PartialMatching, usize>,
    candidates: Vec<Vec<BrauerDiagram>>,
}

struct State {
    chosen: Vec<Option<BrauerDiagram>>,
    assigned: Vec<usize>,
}

impl Backtracker {
    fn new(n: usize) -> Self {
        let mut keys: Vec<PartialMatching> = enumerate_r_keys(n).collect();
        keys.sort();
        let key_index = keys.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
        let candidates = keys
            .iter()
            .map(|k| if k.is_empty() { vec![BrauerDiagram::identity(n)] } else { r_class_members(k) })
            .collect();
        Self { keys, key_index, candidates }
    }

    /// Assigns `a` and everything it forces. On a conflict the state is left
    /// partially extended; callers roll back to their trail mark.
    fn assign(&self, st: &mut State, a: BrauerDiagram) -> bool {
        let mut queue = vec![a];
        while let Some(x) = queue.pop() {
            let k = self.key_index[&left_cups(&x)];
            match &st.chosen[k] {
                Some(y) if *y == x => continue,
                Some(_) => return false,
                None => {}
            }
            st.chosen[k] = Some(x.clone());
            st.assigned.push(k);
            for &j in &st.assigned {
                let y = st.chosen[j].as_ref().expect("assigned");
                for p in [&x * y, y * &x] {
                    let pk = self.key_index[&left_cups(&p)];
                    match &st.chosen[pk] {
                        Some(q) if *q == p => {}
                        Some(_) => return false,
                        None => queue.push(p),
                    }
                }
            }
        }
        true
    }

    fn rollback(st: &mut State, mark: usize) {
        while st.assigned.len() > mark {
            let k = st.assigned.pop().expect("nonempty");
            st.chosen[k] = None;
        }
    }

    fn search(&self, st: &mut State, out: &mut Vec<Vec<BrauerDiagram>>) {
        let Some(k) = (0..self.keys.len()).find(|&k| st.chosen[k].is_none()) else {
            out.push(st.chosen.iter().map(|c| c.clone().expect("complete")).collect());
            return;
        };
        for c in &self.candidates[k] {
            let mark = st.assigned.len();
            if self.assign(st, c.clone()) {
                self.search(st, out);
            }
            Self::rollback(st, mark);
        }
    }
}

/// Direct search, independent of any structure theory: one element per
/// R-class, with every product of chosen elements forced into place.
fn all_by_backtracking(n: usize) -> Vec<CrossSection> {
    let bt = Backtracker::new(n);
    let fresh = || State { chosen: vec![None; bt.keys.len()], assigned: Vec::new() };
    let mut root = fresh();
    assert!(bt.assign(&mut root, BrauerDiagram::identity(n)), "identity is closed");
    let first = (0..bt.keys.len()).find(|&k| root.chosen[k].is_none());
    let results: Vec<Vec<BrauerDiagram>> = match first {
        None => vec![root.chosen.iter().map(|c| c.clone().expect("complete")).collect()],
        Some(k) => bt.candidates[k]
            .par_iter()
            .flat_map_iter(|c| {
                let mut st = fresh();
                let mut out = Vec::new();
                if bt.assign(&mut st, BrauerDiagram::identity(n)) && bt.assign(&mut st, c.clone()) {
                    bt.search(&mut st, &mut out);
                }
                out
            })
            .collect(),
    };
    let mut sections: Vec<CrossSection> = results
        .into_iter()
        .map(|els| {
            debug_assert!(verify_cross_section(n, &els, SectionKind::R).is_ok());
            CrossSection::from_elements(n, SectionKind::R, els).expect("one element per class")
        })
        .collect();
    sections.sort();
    sections.dedup();
    sections
}

/// The L-cross-section obtained by applying the involution elementwise.
pub fn l_cross_sections(cs: &CrossSection) -> Result<CrossSection> {
    if cs.kind() != SectionKind::R {
        return Err(Error::Parse("expected an R-cross-section".into()));
    }
    Ok(cs.involution())
}
