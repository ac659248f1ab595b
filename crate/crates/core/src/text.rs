//! Text form of diagrams.
//!
//! ```text
//! element := block ("," block)*
//! block   := "{" point "," point "}"
//! point   := INT | INT "'"
//! ```
//!
//! Whitespace is ignored. Canonical output orders points
//! `1 < … < n < 1' < … < n'`, writes the smaller point of each block first
//! and sorts blocks by their first point.

use std::fmt::Write;

use crate::diagram::{BrauerDiagram, Point};
use crate::error::{Error, Result};

/// Parses a diagram. When `n` is `None` it is inferred as the largest label.
pub fn parse(text: &str, n: Option<usize>) -> Result<BrauerDiagram> {
    let blocks = parse_blocks(text)?;
    let max_label = blocks
        .iter()
        .flat_map(|&(p, q)| [p, q])
        .map(|p| match p {
            Point::Left(i) | Point::Right(i) => i,
        })
        .max()
        .unwrap_or(0);
    let n = n.unwrap_or(max_label);
    if max_label > n {
        return Err(Error::Parse(format!("label {max_label} exceeds n={n}")));
    }
    // duplicate points are reported before the count so the message names the point
    let mut seen = std::collections::HashSet::new();
    for &(p, q) in &blocks {
        for pt in [p, q] {
            if !seen.insert(pt) {
                return Err(Error::DuplicatePoint(pt.to_string()));
            }
        }
    }
    BrauerDiagram::from_blocks(n, &blocks)
}

fn parse_blocks(text: &str) -> Result<Vec<(Point, Point)>> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let mut blocks = Vec::new();
    if chars.is_empty() {
        return Ok(blocks);
    }
    loop {
        expect(&chars, &mut pos, '{')?;
        let p = parse_point(&chars, &mut pos)?;
        expect(&chars, &mut pos, ',')?;
        let q = parse_point(&chars, &mut pos)?;
        expect(&chars, &mut pos, '}')?;
        blocks.push((p, q));
        if pos == chars.len() {
            return Ok(blocks);
        }
        expect(&chars, &mut pos, ',')?;
    }
}

fn expect(chars: &[char], pos: &mut usize, c: char) -> Result<()> {
    match chars.get(*pos) {
        Some(&x) if x == c => {
            *pos += 1;
            Ok(())
        }
        Some(&x) => Err(Error::Parse(format!("expected '{c}' at position {}, found '{x}'", *pos))),
        None => Err(Error::Parse(format!("expected '{c}', found end of input"))),
    }
}

fn parse_point(chars: &[char], pos: &mut usize) -> Result<Point> {
    let start = *pos;
    while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Parse(format!("expected a point label at position {start}")));
    }
    let digits: String = chars[start..*pos].iter().collect();
    let label: usize = digits.parse().map_err(|_| Error::Parse(format!("bad label {digits}")))?;
    if label == 0 {
        return Err(Error::Parse("point labels start at 1".into()));
    }
    if chars.get(*pos) == Some(&'\'') {
        *pos += 1;
        Ok(Point::Right(label))
    } else {
        Ok(Point::Left(label))
    }
}

/// Canonical text form.
pub fn format(a: &BrauerDiagram) -> String {
    let mut s = String::new();
    for (k, (p, q)) in a.labelled_blocks().into_iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        let _ = write!(s, "{{{p},{q}}}");
    }
    s
}

fn block_label(k: usize) -> String {
    match k {
        0..=25 => ((b'a' + k as u8) as char).to_string(),
        26..=51 => ((b'A' + (k - 26) as u8) as char).to_string(),
        _ => format!("#{k}"),
    }
}

/// ASCII picture of the chip: each block gets a tag printed next to both of
/// its pins, followed by a legend.
pub fn render_ascii(a: &BrauerDiagram) -> String {
    let n = a.n();
    let mut tag = vec![String::new(); 2 * n];
    let mut legend = Vec::new();
    for (k, (x, y)) in a.blocks().enumerate() {
        let t = block_label(k);
        tag[x] = t.clone();
        tag[y] = t.clone();
        let kind = match (x < n, y < n) {
            (true, true) => "cup",
            (false, false) => "cap",
            _ => "line",
        };
        let blocks = a.labelled_blocks();
        legend.push(format!("{t}: {kind} {{{},{}}}", blocks[k].0, blocks[k].1));
    }
    let tw = tag.iter().map(String::len).max().unwrap_or(1);
    let lw = n.to_string().len();
    let inner = 2 * tw + 5;
    let mut s = String::new();
    let border = format!("{:lw$} +{}+\n", "", "-".repeat(inner), lw = lw);
    s.push_str(&border);
    for i in 0..n {
        let _ = writeln!(s, "{:>lw$} |o {:<tw$}   {:>tw$} o| {}'", i + 1, tag[i], tag[n + i], i + 1, lw = lw, tw = tw);
    }
    s.push_str(&border);
    for line in legend {
        s.push_str(&line);
        s.push('\n');
    }
    s
}
