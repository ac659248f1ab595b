//! Canonical R-cross-sections: generators `α_{i,j}`, their tail parameters,
//! the stratified construction and the structural checks on the result.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Mul;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::diagram::BrauerDiagram;
use crate::error::{Error, Result};
use crate::green::{left_cups, r_class_count_of_corank, PartialMatching};
use crate::section::{CrossSection, SectionKind};

/// An element of `S₂`, written multiplicatively.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct S2Value {
    pub flipped: bool,
}

impl S2Value {
    pub const ID: S2Value = S2Value { flipped: false };
    pub const FLIP: S2Value = S2Value { flipped: true };

    pub fn from_bit(b: bool) -> Self {
        Self { flipped: b }
    }

    pub fn bit(self) -> char {
        if self.flipped {
            '1'
        } else {
            '0'
        }
    }
}

impl Mul for S2Value {
    type Output = S2Value;

    fn mul(self, rhs: S2Value) -> S2Value {
        S2Value { flipped: self.flipped != rhs.flipped }
    }
}

impl fmt::Display for S2Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.flipped { "(1,2)" } else { "id" })
    }
}

impl Serialize for S2Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A tail slot `(i, j, l)`, 1-based.
pub type Slot = (usize, usize, usize);

/// All slots for `n`, in lexicographic order: `1 ≤ i < j ≤ n−2` and
/// `1 ≤ l ≤ ⌊(n−j)/2⌋`.
pub fn slots(n: usize) -> Vec<Slot> {
    let mut out = Vec::new();
    for i in 1..n.saturating_sub(2) {
        for j in i + 1..=n - 2 {
            for l in 1..=(n - j) / 2 {
                out.push((i, j, l));
            }
        }
    }
    out
}

/// The adjacent pairs `(n−3,n−2), (n−5,n−4), …` down to `(1,2)` or `(2,3)`.
pub fn frak_a(n: usize) -> Vec<(usize, usize)> {
    (1..)
        .map(|t| (n as isize - 2 * t - 1, n as isize - 2 * t))
        .take_while(|&(i, _)| i >= 1)
        .map(|(i, j)| (i as usize, j as usize))
        .collect()
}

pub fn in_frak_a(n: usize, i: usize, j: usize) -> bool {
    i >= 1 && j == i + 1 && j + 2 <= n && (n - j).is_multiple_of(2)
}

/// Tail orientations of every generator `α_{i,j}` with `j ≤ n−2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParamTable {
    n: usize,
    entries: BTreeMap<Slot, S2Value>,
}

impl ParamTable {
    /// All slots trivial.
    pub fn regular(n: usize) -> Self {
        Self { n, entries: slots(n).into_iter().map(|s| (s, S2Value::ID)).collect() }
    }

    pub fn alternating(n: usize) -> Self {
        params_from_xy(&XYParams::alternating(n))
    }

    /// Bit `k` of `bits` is the value of the `k`-th slot of [`slots`].
    pub fn from_bits(n: usize, bits: u64) -> Self {
        let entries = slots(n)
            .into_iter()
            .enumerate()
            .map(|(k, s)| (s, S2Value::from_bit(k < 64 && bits >> k & 1 == 1)))
            .collect();
        Self { n, entries }
    }

    pub fn to_bits(&self) -> u64 {
        self.entries.values().enumerate().fold(0, |acc, (k, v)| acc | (v.flipped as u64) << k)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slot_count(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> Result<S2Value> {
        self.entries.get(&(i, j, l)).copied().ok_or(Error::MissingSlot { n: self.n, i, j, l })
    }

    pub fn set(&mut self, i: usize, j: usize, l: usize, v: S2Value) -> Result<()> {
        match self.entries.get_mut(&(i, j, l)) {
            Some(e) => {
                *e = v;
                Ok(())
            }
            None => Err(Error::MissingSlot { n: self.n, i, j, l }),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (Slot, S2Value)> + '_ {
        self.entries.iter().map(|(&s, &v)| (s, v))
    }

    pub fn is_regular(&self) -> bool {
        self.entries.values().all(|v| !v.flipped)
    }

    /// The x/y description, if the table is constant on each family and the
    /// families satisfy the exchange condition.
    pub fn to_xy(&self) -> Result<XYParams> {
        let n = self.n;
        let mut x = vec![None; n.saturating_sub(2) / 2];
        let mut y = vec![None; n.saturating_sub(3) / 2];
        for (&(i, j, l), &v) in &self.entries {
            let fam = if in_frak_a(n, i, j) { &mut x } else { &mut y };
            let cell = &mut fam[l - 1];
            match cell {
                None => *cell = Some(v),
                Some(w) if *w != v => {
                    return Err(Error::Constraint(format!("slot ({i},{j},{l}) disagrees with its family")));
                }
                _ => {}
            }
        }
        let fill = |v: Vec<Option<S2Value>>| v.into_iter().map(Option::unwrap_or_default).collect();
        XYParams::new(n, fill(x), fill(y))
    }

    /// One `(i,j,l)=0|1` line per slot.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (&(i, j, l), v) in &self.entries {
            s.push_str(&format!("({i},{j},{l})={}\n", v.bit()));
        }
        s
    }

    /// Reads either an `x=<bits> y=<bits>` line or one `(i,j,l)=0|1` line
    /// per slot. Lines starting with `#` are ignored.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
        if lines.len() == 1 && lines[0].starts_with("x=") {
            return Ok(params_from_xy(&XYParams::parse(n, lines[0])?));
        }
        let mut table = Self::regular(n);
        let mut seen = std::collections::HashSet::new();
        for line in lines {
            let (lhs, rhs) =
                line.split_once('=').ok_or_else(|| Error::Parse(format!("expected (i,j,l)=0|1, got {line}")))?;
            let inner = lhs
                .trim()
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("bad slot {lhs}")))?;
            let nums = inner
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad slot {lhs}"))))
                .collect::<Result<Vec<_>>>()?;
            let [i, j, l] = nums[..] else {
                return Err(Error::Parse(format!("bad slot {lhs}")));
            };
            let v = parse_bit(rhs.trim())?;
            table.set(i, j, l, v)?;
            seen.insert((i, j, l));
        }
        if let Some(&(i, j, l)) = table.entries.keys().find(|s| !seen.contains(s)) {
            return Err(Error::MissingSlot { n, i, j, l });
        }
        Ok(table)
    }
}

fn parse_bit(s: &str) -> Result<S2Value> {
    match s {
        "0" | "id" => Ok(S2Value::ID),
        "1" | "(1,2)" => Ok(S2Value::FLIP),
        _ => Err(Error::Parse(format!("expected 0 or 1, got {s}"))),
    }
}

impl Serialize for ParamTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.entries.len()))?;
        for (&(i, j, l), v) in &self.entries {
            m.serialize_entry(&format!("({i},{j},{l})"), v)?;
        }
        m.end()
    }
}

/// Two `S₂` sequences: `x` for the pairs of [`frak_a`], `y` for every other
/// generator, subject to `x_s y_{s+1} = y_s x_{s+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct XYParams {
    n: usize,
    x: Vec<S2Value>,
    y: Vec<S2Value>,
}

impl XYParams {
    pub fn new(n: usize, x: Vec<S2Value>, y: Vec<S2Value>) -> Result<Self> {
        let (lx, ly) = (n.saturating_sub(2) / 2, n.saturating_sub(3) / 2);
        if x.len() != lx || y.len() != ly {
            return Err(Error::Constraint(format!(
                "n={n} needs {lx} x-values and {ly} y-values, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        for s in 0..lx.min(ly).saturating_sub(1) {
            if x[s] * y[s + 1] != y[s] * x[s + 1] {
                return Err(Error::Constraint(format!("x{}·y{} ≠ y{}·x{}", s + 1, s + 2, s + 1, s + 2)));
            }
        }
        Ok(Self { n, x, y })
    }

    pub fn regular(n: usize) -> Self {
        Self { n, x: vec![S2Value::ID; n.saturating_sub(2) / 2], y: vec![S2Value::ID; n.saturating_sub(3) / 2] }
    }

    /// `x` trivial, `y` flipped.
    pub fn alternating(n: usize) -> Self {
        Self { n, x: vec![S2Value::ID; n.saturating_sub(2) / 2], y: vec![S2Value::FLIP; n.saturating_sub(3) / 2] }
    }

    /// Every admissible choice, ordered by the bit string `x₁…y₁…`.
    pub fn all(n: usize) -> Vec<Self> {
        let (lx, ly) = (n.saturating_sub(2) / 2, n.saturating_sub(3) / 2);
        (0u64..1 << (lx + ly))
            .filter_map(|b| {
                let x = (0..lx).map(|k| S2Value::from_bit(b >> (lx + ly - 1 - k) & 1 == 1)).collect();
                let y = (0..ly).map(|k| S2Value::from_bit(b >> (ly - 1 - k) & 1 == 1)).collect();
                Self::new(n, x, y).ok()
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &[S2Value] {
        &self.x
    }

    pub fn y(&self) -> &[S2Value] {
        &self.y
    }

    /// Parses `x=<bits> y=<bits>`, with `x₁` first. Either field may be empty.
    pub fn parse(n: usize, line: &str) -> Result<Self> {
        let mut x = None;
        let mut y = None;
        for field in line.split_whitespace() {
            let bits = |v: &str| v.chars().map(|c| parse_bit(&c.to_string())).collect::<Result<Vec<_>>>();
            match field.split_once('=') {
                Some(("x", v)) => x = Some(bits(v)?),
                Some(("y", v)) => y = Some(bits(v)?),
                _ => return Err(Error::Parse(format!("unexpected field {field}"))),
            }
        }
        Self::new(n, x.unwrap_or_default(), y.unwrap_or_default())
    }
}

impl fmt::Display for XYParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[S2Value]| v.iter().map(|s| s.bit()).collect::<String>();
        write!(f, "x={} y={}", bits(&self.x), bits(&self.y))
    }
}

pub fn params_from_xy(xy: &XYParams) -> ParamTable {
    let n = xy.n;
    let entries = slots(n)
        .into_iter()
        .map(|(i, j, l)| {
            let v = if in_frak_a(n, i, j) { xy.x[l - 1] } else { xy.y[l - 1] };
            ((i, j, l), v)
        })
        .collect();
    ParamTable { n, entries }
}

/// 1-based block builder.
struct Draft {
    n: usize,
    partner: Vec<u8>,
}

impl Draft {
    fn new(n: usize) -> Self {
        Self { n, partner: vec![u8::MAX; 2 * n] }
    }

    fn join(&mut self, x: usize, y: usize) {
        self.partner[x] = y as u8;
        self.partner[y] = x as u8;
    }

    fn line(&mut self, left: usize, right: usize) {
        self.join(left - 1, self.n + right - 1);
    }

    fn cup(&mut self, a: usize, b: usize) {
        self.join(a - 1, b - 1);
    }

    fn cap(&mut self, a: usize, b: usize) {
        self.join(self.n + a - 1, self.n + b - 1);
    }

    fn finish(self) -> BrauerDiagram {
        BrauerDiagram::from_partner(&self.partner).expect("generator construction covers every point")
    }
}

/// The idempotent with `i` trailing cups on each side and lines `s → s'`
/// elsewhere.
pub fn beta(n: usize, i: usize) -> Result<BrauerDiagram> {
    if 2 * i > n {
        return Err(Error::OutOfRange(format!("beta index {i} for n={n}")));
    }
    let mut d = Draft::new(n);
    for s in 1..=n - 2 * i {
        d.line(s, s);
    }
    for s in (n - 2 * i + 1..=n).step_by(2) {
        d.cup(s, s + 1);
        d.cap(s, s + 1);
    }
    Ok(d.finish())
}

/// The corank-2 generator with left cup `{i, j}` and right cup `{n−1, n}`
/// determined by the tail parameters.
pub fn alpha(n: usize, params: &ParamTable, i: usize, j: usize) -> Result<BrauerDiagram> {
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::OutOfRange(format!("generator ({i},{j}) for n={n}")));
    }
    if params.n != n {
        return Err(Error::SizeMismatch { expected: n, found: params.n });
    }
    if j >= n - 1 {
        if (i, j) == (n - 1, n) {
            return beta(n, 1);
        }
        let mut d = Draft::new(n);
        for s in (1..=n - 2).filter(|&s| s != i) {
            d.line(s, s);
        }
        let jbar = if j == n { n - 1 } else { n };
        d.line(jbar, i);
        d.cup(i, j);
        d.cap(n - 1, n);
        return Ok(d.finish());
    }
    let mut d = Draft::new(n);
    d.cup(i, j);
    d.cap(n - 1, n);
    let tail = if (n - j).is_multiple_of(2) {
        for s in (1..=j.saturating_sub(2)).filter(|&s| s != i) {
            d.line(s, s);
        }
        if i + 1 < j {
            d.line(j - 1, i);
        }
        (n - j) / 2
    } else {
        for s in (1..j).filter(|&s| s != i) {
            d.line(s, s);
        }
        d.line(j + 1, i);
        (n - j - 1) / 2
    };
    for l in 1..=tail {
        let (hi, lo) = (n - 2 * l + 2, n - 2 * l + 1);
        if params.get(i, j, l)?.flipped {
            d.line(hi, n - 2 * l - 1);
            d.line(lo, n - 2 * l);
        } else {
            d.line(hi, n - 2 * l);
            d.line(lo, n - 2 * l - 1);
        }
    }
    Ok(d.finish())
}

/// Reads the orientation of tail block `l`: where does `n−2l+2` go?
pub fn tail_value(a: &BrauerDiagram, l: usize) -> Option<S2Value> {
    let n = a.n();
    if l == 0 || 2 * l + 2 > n {
        return None;
    }
    let p = a.partner(n - 2 * l + 1);
    if p == n + n - 2 * l - 1 {
        Some(S2Value::ID)
    } else if p == n + n - 2 * l - 2 {
        Some(S2Value::FLIP)
    } else {
        None
    }
}

/// Orientation of block `l` in a product of two tail-carrying generators,
/// where the block is shifted down by four: where does `n−2l+1` go?
pub fn staggered_value(b: &BrauerDiagram, l: usize) -> Option<S2Value> {
    let n = b.n();
    if l == 0 || 2 * l + 4 > n {
        return None;
    }
    let p = b.partner(n - 2 * l);
    if p == n + n - 2 * l - 4 {
        Some(S2Value::ID)
    } else if p == n + n - 2 * l - 3 {
        Some(S2Value::FLIP)
    } else {
        None
    }
}

/// All generators `α_{i,j}` in lexicographic order of `(i, j)`.
pub fn generators(n: usize, params: &ParamTable) -> Result<Vec<((usize, usize), BrauerDiagram)>> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(((i, j), alpha(n, params, i, j)?));
        }
    }
    Ok(out)
}

/// Builds the monoid generated by the `α_{i,j}` stratum by stratum:
/// stratum `k` is every product of stratum `k−1` with a generator whose
/// larger index is at most `n−2(k−1)`.
///
/// Fails when two such products land in the same R-class or a stratum has
/// the wrong size; either way the table does not describe a cross-section.
pub fn build_canonical(n: usize, params: &ParamTable) -> Result<CrossSection> {
    let gens = generators(n, params)?;
    let mut all = vec![BrauerDiagram::identity(n)];
    let mut prev = vec![BrauerDiagram::identity(n)];
    for k in 1..=n / 2 {
        let gk: Vec<&BrauerDiagram> = gens.iter().filter(|((_, j), _)| *j + 2 * (k - 1) <= n).map(|(_, g)| g).collect();
        let mut stratum: HashMap<PartialMatching, BrauerDiagram> = HashMap::new();
        for a in &prev {
            for g in &gk {
                let p = a * *g;
                if p.corank() != 2 * k {
                    return Err(Error::StratumMismatch {
                        corank: 2 * k,
                        detail: format!("{a} * {g} has corank {}", p.corank()),
                    });
                }
                let key = left_cups(&p);
                match stratum.get(&key) {
                    Some(q) if *q != p => {
                        return Err(Error::StratumMismatch {
                            corank: 2 * k,
                            detail: format!("{q} and {p} share the class key {key}"),
                        });
                    }
                    Some(_) => {}
                    None => {
                        stratum.insert(key, p);
                    }
                }
            }
        }
        let want = r_class_count_of_corank(n, 2 * k);
        if stratum.len() as u128 != want {
            return Err(Error::StratumMismatch {
                corank: 2 * k,
                detail: format!("{} elements for {want} classes", stratum.len()),
            });
        }
        prev = stratum.into_values().collect();
        all.extend(prev.iter().cloned());
    }
    CrossSection::from_elements(n, SectionKind::R, all)
}

pub fn is_canonical(cs: &CrossSection) -> bool {
    cs.is_canonical()
}

fn require_canonical(cs: &CrossSection) -> Result<()> {
    if cs.is_canonical() {
        Ok(())
    } else {
        Err(Error::NotCanonical(format!("n={} kind={}", cs.n(), cs.kind())))
    }
}

/// The member of `cs` with the single left cup `{i, j}`.
pub fn generator(cs: &CrossSection, i: usize, j: usize) -> Result<&BrauerDiagram> {
    let key = PartialMatching::new(cs.n(), &[(i, j)])?;
    cs.get(&key).ok_or(Error::NotMember)
}

/// Reads every tail parameter off the corank-2 members.
pub fn extract_params(cs: &CrossSection) -> Result<ParamTable> {
    require_canonical(cs)?;
    let n = cs.n();
    let mut table = ParamTable::regular(n);
    for (i, j, l) in slots(n) {
        let a = generator(cs, i, j)?;
        let v = tail_value(a, l)
            .ok_or_else(|| Error::NotCanonical(format!("tail block {l} of the generator ({i},{j}) is not a block")))?;
        table.set(i, j, l, v)?;
    }
    Ok(table)
}

/// `(α_{n−1,n} · β)` restricted to `{1..n−2}`.
pub fn phi(cs: &CrossSection, beta: &BrauerDiagram) -> Result<BrauerDiagram> {
    let n = cs.n();
    if n <= 2 {
        return Err(Error::OutOfRange(format!("recursion needs n > 2, got {n}")));
    }
    let a = generator(cs, n - 1, n)?;
    let keep: Vec<usize> = (1..=n - 2).collect();
    (a * beta).restrict(&keep)
}

/// The image of `cs` under [`phi`], a cross-section of `𝔅_{n−2}`.
pub fn phi_recursion(cs: &CrossSection) -> Result<CrossSection> {
    require_canonical(cs)?;
    let mut image: Vec<BrauerDiagram> = cs.elements().iter().map(|b| phi(cs, b)).collect::<Result<_>>()?;
    image.sort();
    image.dedup();
    CrossSection::from_elements(cs.n() - 2, SectionKind::R, image)
}

/// Two factorizations `α_{s,t} α_{i,j} = α_{u,v} α_{x,y}` of one corank-4 member.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Relation {
    pub element: BrauerDiagram,
    pub lhs: [(usize, usize); 2],
    pub rhs: [(usize, usize); 2],
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct PresentationReport {
    pub absorption_checked: usize,
    /// `(s, t, i, j)` with `α_{s,t} α_{i,j} ≠ α_{s,t}`.
    pub absorption_violations: Vec<(usize, usize, usize, usize)>,
    pub relations: Vec<Relation>,
    /// Corank-4 members without exactly two factorizations, with their count.
    pub factorization_violations: Vec<(BrauerDiagram, usize)>,
}

impl PresentationReport {
    pub fn is_ok(&self) -> bool {
        self.absorption_violations.is_empty() && self.factorization_violations.is_empty()
    }
}

/// Checks the two relation families of the copresentation on concrete
/// elements.
pub fn check_presentation(cs: &CrossSection) -> Result<PresentationReport> {
    require_canonical(cs)?;
    let n = cs.n();
    let mut report = PresentationReport::default();
    let gens: Vec<((usize, usize), &BrauerDiagram)> = cs
        .stratum(2)
        .map(|g| {
            let p = left_cups(g).pairs()[0];
            (p, g)
        })
        .collect();
    for &((s, t), a) in &gens {
        for &((i, j), g) in &gens {
            if j + 1 >= n {
                report.absorption_checked += 1;
                if a * g != *a {
                    report.absorption_violations.push((s, t, i, j));
                }
            }
        }
    }
    if n >= 4 {
        let mut facts: BTreeMap<PartialMatching, Vec<[(usize, usize); 2]>> = BTreeMap::new();
        for &(p, a) in &gens {
            for &(q, g) in gens.iter().filter(|((_, j), _)| *j + 2 <= n) {
                let prod = a * g;
                if prod.corank() == 4 && cs.contains(&prod) {
                    facts.entry(left_cups(&prod)).or_default().push([p, q]);
                }
            }
        }
        for e in cs.stratum(4) {
            let f = facts.get(&left_cups(e)).map(Vec::as_slice).unwrap_or_default();
            if f.len() == 2 {
                report.relations.push(Relation { element: e.clone(), lhs: f[0], rhs: f[1] });
            } else {
                report.factorization_violations.push((e.clone(), f.len()));
            }
        }
    }
    Ok(report)
}

/// Number of tuples `(η₁, …, η_k)` with `η_m` a generator whose larger index
/// is at most `n−2(m−1)` and `η₁⋯η_k = a`, where `corank(a) = 2k`.
pub fn mult_map_fiber(cs: &CrossSection, a: &BrauerDiagram) -> Result<usize> {
    if !cs.contains(a) {
        return Err(Error::NotMember);
    }
    let n = cs.n();
    let k = a.corank() / 2;
    let target = left_cups(a);
    let gens: Vec<(usize, &BrauerDiagram)> = cs.stratum(2).map(|g| (left_cups(g).pairs()[0].1, g)).collect();
    struct Search<'a> {
        n: usize,
        k: usize,
        target: &'a PartialMatching,
        a: &'a BrauerDiagram,
        gens: &'a [(usize, &'a BrauerDiagram)],
    }
    impl Search<'_> {
        fn go(&self, m: usize, acc: &BrauerDiagram) -> usize {
            if m > self.k {
                return usize::from(acc == self.a);
            }
            let mut count = 0;
            for (j, g) in self.gens {
                if *j + 2 * (m - 1) > self.n {
                    continue;
                }
                let next = acc * *g;
                // left cups only accumulate, so a stray cup is never undone
                if left_cups(&next).pairs0().all(|(x, y)| self.target.mate(x) == Some(y)) {
                    count += self.go(m + 1, &next);
                }
            }
            count
        }
    }
    let search = Search { n, k, target: &target, a, gens: &gens };
    Ok(search.go(1, &BrauerDiagram::identity(n)))
}
