//! H- and D-cross-sections of `𝔅ₙ`.
//!
//! H-cross-sections exist only for `n ≤ 3`, where they are the idempotents.
//! D-cross-sections are lifted from D-cross-sections of `IS_m`,
//! `m = ⌊n/2⌋`, by letting `i ∈ {1..m}` stand for the pair
//! `{n−2i+1, n−2i+2}`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::BrauerDiagram;
use crate::error::{Error, Result};
use crate::green::{enumerate_elements_with_limit, left_cups, right_cups, PartialMatching, DEFAULT_ELEMENT_LIMIT};
use crate::perm::PartialInjection;

/// Largest `n` for which the idempotent closure is recomputed by default.
pub const DEFAULT_CLOSURE_LIMIT: usize = 4;

/// Upper bound on the number of candidate H-transversals tried by brute force.
const BRUTE_FORCE_CAP: u128 = 1 << 20;

pub fn idempotents(n: usize) -> Result<Vec<BrauerDiagram>> {
    idempotents_with_limit(n, DEFAULT_ELEMENT_LIMIT)
}

pub fn idempotents_with_limit(n: usize, limit: usize) -> Result<Vec<BrauerDiagram>> {
    let mut out: Vec<_> = enumerate_elements_with_limit(n, limit)?.filter(BrauerDiagram::is_idempotent).collect();
    out.sort();
    Ok(out)
}

fn h_key(a: &BrauerDiagram) -> (PartialMatching, PartialMatching) {
    (left_cups(a), right_cups(a))
}

/// Subsemigroup generated by `gens`, by breadth-first saturation.
pub fn closure(gens: &[BrauerDiagram]) -> Vec<BrauerDiagram> {
    let mut seen: HashSet<BrauerDiagram> = gens.iter().cloned().collect();
    let mut frontier: Vec<BrauerDiagram> = seen.iter().cloned().collect();
    while !frontier.is_empty() {
        let fresh: HashSet<BrauerDiagram> = frontier
            .par_iter()
            .flat_map_iter(|x| gens.iter().flat_map(move |g| [x * g, g * x]))
            .filter(|p| !seen.contains(p))
            .collect();
        frontier = fresh.iter().cloned().collect();
        seen.extend(fresh);
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HMethod {
    /// Idempotents checked directly, uniqueness by trying every transversal.
    Exhaustive,
    /// Idempotent closure computed and an H-related pair found in it.
    Closure,
    /// Certificate from `𝔅₄` carried over by the embedding `𝔅₄ ↪ 𝔅ₙ`.
    Embedding,
}

/// Two distinct H-related elements that every H-cross-section would have
/// to contain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HCertificate {
    pub first: BrauerDiagram,
    pub second: BrauerDiagram,
}

#[derive(Clone, Debug, Serialize)]
pub struct HReport {
    pub n: usize,
    pub method: HMethod,
    pub exists: bool,
    pub unique: Option<bool>,
    pub idempotent_count: Option<usize>,
    pub h_class_count: Option<usize>,
    pub closure_size: Option<usize>,
    /// Transversals that are subsemigroups, found by brute force.
    pub transversals_closed: Option<usize>,
    pub section: Option<Vec<BrauerDiagram>>,
    pub certificate: Option<HCertificate>,
    pub note: String,
}

pub fn h_cross_section_check(n: usize) -> Result<HReport> {
    h_cross_section_check_with_limit(n, DEFAULT_CLOSURE_LIMIT)
}

/// `closure_limit` is the largest `n ≥ 4` at which `⟨E(𝔅ₙ)⟩` is computed
/// directly; beyond it the `𝔅₄` certificate is embedded.
pub fn h_cross_section_check_with_limit(n: usize, closure_limit: usize) -> Result<HReport> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    if n <= 3 {
        return small_h_check(n);
    }
    if n <= closure_limit {
        let e = idempotents(n)?;
        let c = closure(&e);
        let certificate = h_pair(&c)
            .ok_or_else(|| Error::Constraint(format!("idempotent closure of B_{n} has singleton H-classes")))?;
        return Ok(HReport {
            n,
            method: HMethod::Closure,
            exists: false,
            unique: None,
            idempotent_count: Some(e.len()),
            h_class_count: None,
            closure_size: Some(c.len()),
            transversals_closed: None,
            section: None,
            note: "an H-cross-section contains every idempotent, hence their closure, which meets some H-class twice"
                .into(),
            certificate: Some(certificate),
        });
    }
    let base = h_cross_section_check_with_limit(4, 4)?;
    let c = base.certificate.expect("B_4 certificate");
    let certificate = HCertificate { first: pad(&c.first, n), second: pad(&c.second, n) };
    Ok(HReport {
        n,
        method: HMethod::Embedding,
        exists: false,
        unique: None,
        idempotent_count: None,
        h_class_count: None,
        closure_size: None,
        transversals_closed: None,
        section: None,
        note: format!(
            "B_4 embeds in B_{n} by adding lines k-k' for k > 4; idempotents go to idempotents and H-classes to H-classes, so the B_4 pair stays H-related inside the idempotent closure"
        ),
        certificate: Some(certificate),
    })
}

fn pad(a: &BrauerDiagram, n: usize) -> BrauerDiagram {
    let k = a.n();
    let mut partner = vec![0u8; 2 * n];
    for x in 0..2 * k {
        let side = |y: usize| if y < k { y } else { n + y - k };
        partner[side(x)] = side(a.partner(x)) as u8;
    }
    for i in k..n {
        partner[i] = (n + i) as u8;
        partner[n + i] = i as u8;
    }
    BrauerDiagram::from_partner(&partner).expect("padded matching")
}

fn h_pair(c: &[BrauerDiagram]) -> Option<HCertificate> {
    let mut by_key: BTreeMap<(PartialMatching, PartialMatching), Vec<&BrauerDiagram>> = BTreeMap::new();
    for a in c {
        by_key.entry(h_key(a)).or_default().push(a);
    }
    by_key.into_values().find(|v| v.len() > 1).map(|v| HCertificate { first: v[0].clone(), second: v[1].clone() })
}

fn is_closed(set: &[BrauerDiagram]) -> bool {
    let s: HashSet<&BrauerDiagram> = set.iter().collect();
    set.par_iter().all(|a| set.iter().all(|b| s.contains(&(a * b))))
}

fn small_h_check(n: usize) -> Result<HReport> {
    let e = idempotents(n)?;
    let mut classes: BTreeMap<(PartialMatching, PartialMatching), Vec<BrauerDiagram>> = BTreeMap::new();
    for a in enumerate_elements_with_limit(n, DEFAULT_ELEMENT_LIMIT)? {
        classes.entry(h_key(&a)).or_default().push(a);
    }
    let keys: HashSet<_> = e.iter().map(h_key).collect();
    let transversal = keys.len() == e.len() && keys.len() == classes.len();
    let closed = is_closed(&e);
    let choices: Vec<Vec<BrauerDiagram>> = classes.into_values().collect();
    let total: u128 = choices.iter().map(|c| c.len() as u128).product();
    if total > BRUTE_FORCE_CAP {
        return Err(Error::LimitExceeded { n, limit: 3 });
    }
    let mut found = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let pick: Vec<BrauerDiagram> = idx.iter().zip(&choices).map(|(&k, c)| c[k].clone()).collect();
        if is_closed(&pick) {
            let mut p = pick;
            p.sort();
            found.push(p);
        }
        let mut d = 0;
        while d < idx.len() {
            idx[d] += 1;
            if idx[d] < choices[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == idx.len() {
            break;
        }
    }
    let exists = transversal && closed;
    let unique = found.len() == 1 && found[0] == e;
    Ok(HReport {
        n,
        method: HMethod::Exhaustive,
        exists,
        unique: Some(unique),
        idempotent_count: Some(e.len()),
        h_class_count: Some(choices.len()),
        closure_size: None,
        transversals_closed: Some(found.len()),
        section: exists.then(|| e.clone()),
        certificate: None,
        note: "the idempotents are closed and meet every H-class once; no other transversal is a subsemigroup".into(),
    })
}

/// The diagram `α_f` attached to `f ∈ IS_m`, `m = ⌊n/2⌋`.
pub fn lift(f: &PartialInjection, n: usize) -> Result<BrauerDiagram> {
    let m = n / 2;
    if f.m() != m {
        return Err(Error::SizeMismatch { expected: m, found: f.m() });
    }
    let mut partner = vec![u8::MAX; 2 * n];
    let mut link = |x: usize, y: usize| {
        partner[x] = y as u8;
        partner[y] = x as u8;
    };
    let lo = |i: usize| n - 2 * i - 2;
    let range = f.range();
    for i in 0..m {
        match f.apply(i) {
            Some(j) => {
                link(lo(i), n + lo(j));
                link(lo(i) + 1, n + lo(j) + 1);
            }
            None => link(lo(i), lo(i) + 1),
        }
        if !range.contains(&(i + 1)) {
            link(n + lo(i), n + lo(i) + 1);
        }
    }
    if n % 2 == 1 {
        link(0, n);
    }
    BrauerDiagram::from_partner(&partner)
}

/// One element per D-class of `𝔅ₙ`, keyed by corank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DCrossSection {
    pub n: usize,
    pub elements: BTreeMap<usize, BrauerDiagram>,
}

impl DCrossSection {
    pub fn diagrams(&self) -> Vec<BrauerDiagram> {
        self.elements.values().cloned().collect()
    }

    pub fn verify(&self) -> DReport {
        verify_d_cross_section(self.n, &self.diagrams())
    }
}

/// Outcome of a D-cross-section check. Strata are coranks in `𝔅ₙ` and
/// ranks in `IS_m`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DReport {
    pub size: usize,
    pub size_mismatches: usize,
    pub missing: Vec<usize>,
    pub duplicated: Vec<usize>,
    pub closure_violations: usize,
    /// `(x, y, x·y)` for the first few products that leave the set.
    pub examples: Vec<(String, String, String)>,
}

impl DReport {
    pub fn is_ok(&self) -> bool {
        self.size_mismatches == 0
            && self.missing.is_empty()
            && self.duplicated.is_empty()
            && self.closure_violations == 0
    }
}

fn stratum_report<T, S, M>(size: usize, items: &[T], strata: &[usize], stratum: S, mul: M) -> DReport
where
    T: Eq + std::hash::Hash + std::fmt::Display + Sync,
    S: Fn(&T) -> Option<usize>,
    M: Fn(&T, &T) -> T + Sync,
{
    let mut r = DReport { size, ..DReport::default() };
    let mut count: HashMap<usize, usize> = HashMap::new();
    let mut good = Vec::new();
    for x in items {
        match stratum(x) {
            Some(s) => {
                *count.entry(s).or_default() += 1;
                good.push(x);
            }
            None => r.size_mismatches += 1,
        }
    }
    r.missing = strata.iter().copied().filter(|s| !count.contains_key(s)).collect();
    r.duplicated = strata.iter().copied().filter(|s| count.get(s).is_some_and(|&c| c > 1)).collect();
    let set: HashSet<&T> = good.iter().copied().collect();
    let bad: Vec<(String, String, String)> = good
        .par_iter()
        .flat_map_iter(|&x| {
            let set = &set;
            let mul = &mul;
            good.iter().filter_map(move |&y| {
                let p = mul(x, y);
                (!set.contains(&p)).then(|| (x.to_string(), y.to_string(), p.to_string()))
            })
        })
        .collect();
    r.closure_violations = bad.len();
    r.examples = bad.into_iter().take(8).collect();
    r
}

/// One element per corank `0, 2, …` and closure under composition.
pub fn verify_d_cross_section(n: usize, elements: &[BrauerDiagram]) -> DReport {
    let strata: Vec<usize> = (0..=n / 2).map(|k| 2 * k).collect();
    stratum_report(n, elements, &strata, |a| (a.n() == n).then(|| a.corank()), |a, b| a * b)
}

/// One element per rank `0..=m` and closure under `then`.
pub fn verify_is_d_cross_section(m: usize, gamma: &[PartialInjection]) -> DReport {
    let strata: Vec<usize> = (0..=m).collect();
    stratum_report(m, gamma, &strata, |f| (f.m() == m).then(|| f.rank()), |f, g| f.then(g))
}

/// `{e₀, …, e_m}` with `e_k` the identity on `{1..k}`.
pub fn chain_d_section(m: usize) -> Vec<PartialInjection> {
    (0..=m).map(|k| PartialInjection::partial_identity(m, k)).collect()
}

pub fn d_from_is(gamma: &[PartialInjection], n: usize) -> Result<DCrossSection> {
    let m = n / 2;
    if let Some(f) = gamma.iter().find(|f| f.m() != m) {
        return Err(Error::SizeMismatch { expected: m, found: f.m() });
    }
    let r = verify_is_d_cross_section(m, gamma);
    if !r.is_ok() {
        return Err(Error::NotDCrossSection(format!(
            "in IS_{m}: missing ranks {:?}, repeated ranks {:?}, {} products outside",
            r.missing, r.duplicated, r.closure_violations
        )));
    }
    let elements = gamma.iter().map(|f| lift(f, n).map(|a| (a.corank(), a))).collect::<Result<BTreeMap<_, _>>>()?;
    Ok(DCrossSection { n, elements })
}

/// A `dom:` line and the mappings listed under it.
type GammaBlock = (Vec<usize>, Vec<(usize, usize)>);

/// Parses a list of partial injections: an optional `m=<M>` header, then
/// one block per map, opened by `dom: a b c` and followed by `k -> v` lines.
/// `m` is taken from the header when present, otherwise from `m`.
pub fn parse_gamma(text: &str, m: Option<usize>) -> Result<Vec<PartialInjection>> {
    let mut header = None;
    let mut blocks: Vec<GammaBlock> = Vec::new();
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad number {s:?}")));
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(v) = line.strip_prefix("m=") {
            if header.is_some() || !blocks.is_empty() {
                return Err(Error::Parse(format!("line {}: m= must come first", ln + 1)));
            }
            header = Some(num(v)?);
        } else if let Some(rest) = line.strip_prefix("dom:") {
            let dom = rest.split([' ', ',']).filter(|s| !s.is_empty()).map(num).collect::<Result<Vec<_>>>()?;
            blocks.push((dom, Vec::new()));
        } else if let Some((a, b)) = line.split_once("->") {
            let Some(block) = blocks.last_mut() else {
                return Err(Error::Parse(format!("line {}: mapping before any dom: line", ln + 1)));
            };
            block.1.push((num(a)?, num(b)?));
        } else {
            return Err(Error::Parse(format!("line {}: unrecognised {line:?}", ln + 1)));
        }
    }
    let m = match (header, m) {
        (Some(h), Some(given)) if h != given => return Err(Error::SizeMismatch { expected: given, found: h }),
        (Some(h), _) | (None, Some(h)) => h,
        (None, None) => return Err(Error::Parse("no m= header".into())),
    };
    blocks
        .into_iter()
        .map(|(mut dom, pairs)| {
            let mut keys: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            dom.sort_unstable();
            keys.sort_unstable();
            if dom != keys {
                return Err(Error::Parse(format!("dom: {dom:?} does not match mapped points {keys:?}")));
            }
            PartialInjection::new(m, &pairs)
        })
        .collect()
}

pub fn gamma_to_text(m: usize, gamma: &[PartialInjection]) -> String {
    let mut s = format!("m={m}\n");
    for f in gamma {
        let dom: Vec<String> = f.domain().iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "dom: {}", dom.join(" "));
        for (x, y) in f.pairs() {
            let _ = writeln!(s, "{x} -> {y}");
        }
    }
    s
}
