//! Cross-sections of the R- and L-relations and their verification.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::diagram::BrauerDiagram;
use crate::error::{Error, Result};
use crate::green::{left_cups, r_class_count, r_class_count_of_corank, right_cups, PartialMatching};
use crate::text;

/// Which Green's relation a cross-section is taken with respect to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum SectionKind {
    R,
    L,
}

impl SectionKind {
    /// The class key of `a` for this relation.
    pub fn key(self, a: &BrauerDiagram) -> PartialMatching {
        match self {
            SectionKind::R => left_cups(a),
            SectionKind::L => right_cups(a),
        }
    }

    pub fn dual(self) -> Self {
        match self {
            SectionKind::R => SectionKind::L,
            SectionKind::L => SectionKind::R,
        }
    }
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SectionKind::R => "R",
            SectionKind::L => "L",
        })
    }
}

impl FromStr for SectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(SectionKind::R),
            "L" | "l" => Ok(SectionKind::L),
            _ => Err(Error::Parse(format!("unknown cross-section kind {s}"))),
        }
    }
}

/// Whether `a` carries the trailing right cups `{(n−2k+1)',(n−2k+2)'}, …,
/// {(n−1)',n'}` where `2k = corank(a)`.
pub fn has_canonical_right_cups(a: &BrauerDiagram) -> bool {
    let n = a.n();
    let k = a.corank() / 2;
    (0..k).all(|t| {
        // 0-based right points n-2t-2 and n-2t-1
        let x = n + n - 2 * t - 2;
        a.partner(x) == x + 1
    })
}

/// A set of diagrams with exactly one member in every R-class (or L-class).
///
/// Elements are kept sorted by class key, which makes the element list a
/// canonical identity for the whole cross-section.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CrossSection {
    n: usize,
    kind: SectionKind,
    elements: Vec<BrauerDiagram>,
    canonical: bool,
}

impl CrossSection {
    /// Wraps a set that has exactly one element per class. Closure under
    /// composition is not checked here; see [`verify_cross_section`].
    pub fn from_elements(n: usize, kind: SectionKind, elements: Vec<BrauerDiagram>) -> Result<Self> {
        if let Some(bad) = elements.iter().find(|a| a.n() != n) {
            return Err(Error::SizeMismatch { expected: n, found: bad.n() });
        }
        let mut keyed: Vec<(PartialMatching, BrauerDiagram)> =
            elements.into_iter().map(|a| (kind.key(&a), a)).collect();
        keyed.sort_by(|x, y| x.0.cmp(&y.0));
        for w in keyed.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::StratumMismatch {
                    corank: 2 * w[0].0.len(),
                    detail: format!("two elements share the class key {}", w[0].0),
                });
            }
        }
        if keyed.len() as u128 != r_class_count(n) {
            return Err(Error::StratumMismatch {
                corank: 0,
                detail: format!("{} elements for {} classes", keyed.len(), r_class_count(n)),
            });
        }
        let elements: Vec<BrauerDiagram> = keyed.into_iter().map(|(_, a)| a).collect();
        let canonical = kind == SectionKind::R && elements.iter().all(has_canonical_right_cups);
        Ok(Self { n, kind, elements, canonical })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> SectionKind {
        self.kind
    }

    /// Elements sorted by class key.
    pub fn elements(&self) -> &[BrauerDiagram] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Whether this is a canonical R-cross-section.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn key_of(&self, a: &BrauerDiagram) -> PartialMatching {
        self.kind.key(a)
    }

    /// The unique element in the class with the given key.
    pub fn get(&self, key: &PartialMatching) -> Option<&BrauerDiagram> {
        self.elements.binary_search_by(|a| self.kind.key(a).cmp(key)).ok().map(|i| &self.elements[i])
    }

    /// Position of `a` in [`Self::elements`], if it is a member.
    pub fn index_of(&self, a: &BrauerDiagram) -> Option<usize> {
        if a.n() != self.n {
            return None;
        }
        let key = self.kind.key(a);
        let i = self.elements.binary_search_by(|x| self.kind.key(x).cmp(&key)).ok()?;
        (self.elements[i] == *a).then_some(i)
    }

    pub fn contains(&self, a: &BrauerDiagram) -> bool {
        self.index_of(a).is_some()
    }

    /// Members of corank `corank`.
    pub fn stratum(&self, corank: usize) -> impl Iterator<Item = &BrauerDiagram> + '_ {
        self.elements.iter().filter(move |a| a.corank() == corank)
    }

    /// Elementwise image under the anti-involution; swaps R and L.
    pub fn involution(&self) -> Self {
        let elements = self.elements.iter().map(BrauerDiagram::involution).collect();
        Self::from_elements(self.n, self.kind.dual(), elements).expect("involution maps classes to classes")
    }

    /// Text form: a header line `n=<N> kind=<R|L>` and one element per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("n={} kind={}\n", self.n, self.kind);
        for a in &self.elements {
            s.push_str(&text::format(a));
            s.push('\n');
        }
        s
    }

    pub fn from_text(input: &str) -> Result<Self> {
        let (n, kind, elements) = parse_section_text(input)?;
        Self::from_elements(n, kind, elements)
    }

    pub fn to_doc(&self) -> CrossSectionDoc {
        CrossSectionDoc { n: self.n, kind: self.kind, canonical: Some(self.canonical), elements: self.elements.clone() }
    }
}

/// Serialized cross-section as used in JSON output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossSectionDoc {
    pub n: usize,
    pub kind: SectionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<bool>,
    pub elements: Vec<BrauerDiagram>,
}

impl<'de> Deserialize<'de> for BrauerDiagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        text::parse(&s, None).map_err(serde::de::Error::custom)
    }
}

/// Parses the text form into its raw parts without any checks beyond syntax.
pub fn parse_section_text(input: &str) -> Result<(usize, SectionKind, Vec<BrauerDiagram>)> {
    let mut lines = input.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty cross-section file".into()))?;
    let mut n = None;
    let mut kind = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => n = Some(v.parse::<usize>().map_err(|_| Error::Parse(format!("bad n in header: {v}")))?),
            Some(("kind", v)) => kind = Some(v.parse::<SectionKind>()?),
            _ => return Err(Error::Parse(format!("unexpected header field {field}"))),
        }
    }
    let n = n.ok_or_else(|| Error::Parse("header lacks n=".into()))?;
    let kind = kind.ok_or_else(|| Error::Parse("header lacks kind=".into()))?;
    let elements = lines.map(|l| text::parse(l, Some(n))).collect::<Result<Vec<_>>>()?;
    Ok((n, kind, elements))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub enum VerifyMode {
    /// Every product of two members.
    #[default]
    Full,
    /// Products with corank-2 members only, plus stratum sizes. Sound for
    /// sets generated by their corank-2 members.
    Fast,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ClosureViolation {
    pub left: BrauerDiagram,
    pub right: BrauerDiagram,
    pub product: BrauerDiagram,
}

/// Outcome of [`verify_cross_section`]; empty means the set is a cross-section.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub kind: SectionKind,
    pub mode: VerifyMode,
    pub size_mismatches: usize,
    pub missing: Vec<PartialMatching>,
    pub duplicated: Vec<PartialMatching>,
    pub stratum_errors: Vec<(usize, u128, u128)>,
    pub closure_violation_count: usize,
    /// The first few violations.
    pub closure_violations: Vec<ClosureViolation>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.size_mismatches == 0
            && self.missing.is_empty()
            && self.duplicated.is_empty()
            && self.stratum_errors.is_empty()
            && self.closure_violation_count == 0
    }
}

const MAX_RECORDED_VIOLATIONS: usize = 16;

pub fn verify_cross_section(n: usize, set: &[BrauerDiagram], kind: SectionKind) -> VerifyReport {
    verify_cross_section_with(n, set, kind, VerifyMode::Full)
}

pub fn verify_cross_section_with(n: usize, set: &[BrauerDiagram], kind: SectionKind, mode: VerifyMode) -> VerifyReport {
    let size_mismatches = set.iter().filter(|a| a.n() != n).count();
    let members: Vec<&BrauerDiagram> = {
        let mut seen = HashSet::new();
        set.iter().filter(|a| a.n() == n && seen.insert(*a)).collect()
    };

    let mut by_key: HashMap<PartialMatching, usize> = HashMap::new();
    for a in &members {
        *by_key.entry(kind.key(a)).or_default() += 1;
    }
    let mut duplicated: Vec<PartialMatching> = by_key.iter().filter(|(_, &c)| c > 1).map(|(k, _)| k.clone()).collect();
    duplicated.sort();
    let missing: Vec<PartialMatching> = crate::green::enumerate_r_keys(n).filter(|k| !by_key.contains_key(k)).collect();

    let mut stratum_errors = Vec::new();
    if mode == VerifyMode::Fast {
        for k in 0..=n / 2 {
            let have = members.iter().filter(|a| a.corank() == 2 * k).count() as u128;
            let want = r_class_count_of_corank(n, 2 * k);
            if have != want {
                stratum_errors.push((2 * k, want, have));
            }
        }
    }

    let lookup: HashSet<&BrauerDiagram> = members.iter().copied().collect();
    let right_factors: Vec<&BrauerDiagram> = match mode {
        VerifyMode::Full => members.clone(),
        VerifyMode::Fast => members.iter().copied().filter(|a| a.corank() == 2).collect(),
    };
    let check = |x: &BrauerDiagram, y: &BrauerDiagram, out: &mut (usize, Vec<ClosureViolation>)| {
        let p = x * y;
        if !lookup.contains(&p) {
            out.0 += 1;
            if out.1.len() < MAX_RECORDED_VIOLATIONS {
                out.1.push(ClosureViolation { left: x.clone(), right: y.clone(), product: p });
            }
        }
    };
    let (closure_violation_count, mut closure_violations) = members
        .par_iter()
        .map(|a| {
            let mut acc = (0usize, Vec::new());
            for g in &right_factors {
                check(a, g, &mut acc);
                if mode == VerifyMode::Fast {
                    check(g, a, &mut acc);
                }
            }
            acc
        })
        .reduce(
            || (0, Vec::new()),
            |mut x, y| {
                x.0 += y.0;
                x.1.extend(y.1);
                x
            },
        );
    closure_violations.truncate(MAX_RECORDED_VIOLATIONS);

    VerifyReport {
        n,
        kind,
        mode,
        size_mismatches,
        missing,
        duplicated,
        stratum_errors,
        closure_violation_count,
        closure_violations,
    }
}

impl CrossSection {
    pub fn verify(&self) -> VerifyReport {
        verify_cross_section(self.n, &self.elements, self.kind)
    }
}
