//! The line-oriented algebroid document format.
//!
//! ```text
//! # comment
//! [chart]
//! name = heis
//! coords = t
//! rank = 4
//! labels = e1, e2, e3, e4      (optional)
//!
//! [anchor]                     row a: ρ^1_a, …, ρ^n_a (missing rows are zero)
//! 1 = 0
//!
//! [bracket]                    a b c = C^c_ab, 1-based, a < b
//! 1 2 3 = 1
//!
//! [J]                          row b: J^b_1, …, J^b_r
//! [metric]                     row a: g_a1, …, g_ar
//! [projector]                  row b: Π^b_1, …, Π^b_r
//!
//! [import]                     instead of [chart]/[anchor]/[bracket]
//! fixture = heis_j
//! ```

use crate::algebroid::matrix::Matrix;
use crate::algebroid::{Algebroid, Chart};
use crate::constructions::{fixture, Fixture};
use crate::expr::{parse_with_coords, ExprError, Scalar};
use crate::jstruct::EndoField;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct DocError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> DocError {
    DocError {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    None,
    Chart,
    Anchor,
    Bracket,
    J,
    Metric,
    Projector,
    Import,
}

/// A parsed document.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub name: String,
    pub algebroid: Algebroid,
    pub j: Option<Matrix>,
    pub metric: Option<Matrix>,
    pub projector: Option<Matrix>,
}

impl Document {
    pub fn from_fixture(f: &Fixture) -> Document {
        Document {
            name: f.name.clone(),
            algebroid: f.algebroid.clone(),
            j: f.j.as_ref().map(|j| j.matrix().clone()),
            metric: f.metric.clone(),
            projector: None,
        }
    }

    pub fn into_fixture(self) -> Result<Fixture, DocError> {
        let j = match self.j {
            Some(m) => Some(EndoField::new(m).map_err(|e| err(0, 0, e.to_string()))?),
            None => None,
        };
        Ok(Fixture {
            name: self.name,
            algebroid: self.algebroid,
            j,
            metric: self.metric,
        })
    }

    /// Serializes in the document format; [`parse`] reads it back.
    pub fn emit(&self) -> String {
        let alg = &self.algebroid;
        let st = alg.structure();
        let r = alg.rank();
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.name);
        let _ = writeln!(out, "[chart]");
        let _ = writeln!(out, "name = {}", alg.chart().name());
        let _ = writeln!(out, "coords = {}", alg.chart().coords().join(", "));
        let _ = writeln!(out, "rank = {r}");
        let _ = writeln!(out, "labels = {}", alg.labels().join(", "));
        let _ = writeln!(out, "\n[anchor]");
        for a in 0..r {
            let row: Vec<String> = st.anchor_rows()[a].iter().map(Scalar::to_string).collect();
            let _ = writeln!(out, "{} = {}", a + 1, row.join(", "));
        }
        let _ = writeln!(out, "\n[bracket]");
        for a in 0..r {
            for b in a + 1..r {
                for c in 0..r {
                    let v = st.c(c, a, b);
                    if !v.is_zero() {
                        let _ = writeln!(out, "{} {} {} = {}", a + 1, b + 1, c + 1, v);
                    }
                }
            }
        }
        for (title, m) in [("J", &self.j), ("metric", &self.metric), ("projector", &self.projector)] {
            if let Some(m) = m {
                let _ = writeln!(out, "\n[{title}]");
                for (k, row) in m.iter().enumerate() {
                    let row: Vec<String> = row.iter().map(Scalar::to_string).collect();
                    let _ = writeln!(out, "{} = {}", k + 1, row.join(", "));
                }
            }
        }
        out
    }
}

/// Splits on commas outside parentheses, returning `(offset, piece)`.
fn split_list(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &text[start..k]));
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

fn trimmed(offset: usize, piece: &str) -> (usize, &str) {
    let lead = piece.len() - piece.trim_start().len();
    (offset + lead, piece.trim())
}

fn expr_pos(e: &ExprError) -> usize {
    match e {
        ExprError::Syntax { pos, .. }
        | ExprError::UnknownIdentifier { pos, .. }
        | ExprError::NonIntegerExponent { pos } => *pos,
        ExprError::DivisionByZero { pos } => pos.unwrap_or(0),
        _ => 0,
    }
}

struct Line<'a> {
    no: usize,
    key: &'a str,
    key_col: usize,
    value: &'a str,
    value_col: usize,
}

#[derive(Default)]
struct Raw<'a> {
    name: Option<String>,
    coords: Option<Vec<String>>,
    rank: Option<usize>,
    labels: Option<Vec<String>>,
    import: Option<(usize, String)>,
    anchor: Vec<Line<'a>>,
    bracket: Vec<Line<'a>>,
    j: Vec<Line<'a>>,
    metric: Vec<Line<'a>>,
    projector: Vec<Line<'a>>,
    seen_structure: Option<usize>,
}

fn list_of_names(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn split_line(no: usize, raw: &str) -> Result<Line<'_>, DocError> {
    let eq = raw
        .find('=')
        .ok_or_else(|| err(no, 1, "expected 'key = value'"))?;
    let (key_col, key) = trimmed(0, &raw[..eq]);
    let (value_col, value) = trimmed(eq + 1, &raw[eq + 1..]);
    if key.is_empty() {
        return Err(err(no, 1, "missing key before '='"));
    }
    Ok(Line {
        no,
        key,
        key_col: key_col + 1,
        value,
        value_col: value_col + 1,
    })
}

fn parse_index(line: &Line, text: &str, col: usize, size: usize, labels: &[String]) -> Result<usize, DocError> {
    if let Some(k) = labels.iter().position(|l| l == text) {
        return Ok(k);
    }
    match text.parse::<usize>() {
        Ok(k) if (1..=size).contains(&k) => Ok(k - 1),
        _ => Err(err(line.no, col, format!("index '{text}' must be a label or in 1..={size}"))),
    }
}

fn parse_row(line: &Line, coords: &[String], len: usize) -> Result<Vec<Scalar>, DocError> {
    let pieces = split_list(line.value);
    if pieces.len() != len {
        return Err(err(
            line.no,
            line.value_col,
            format!("expected {len} entries, found {}", pieces.len()),
        ));
    }
    pieces
        .into_iter()
        .map(|(off, piece)| {
            let (off, text) = trimmed(off, piece);
            parse_with_coords(text, coords).map_err(|e| err(line.no, line.value_col + off + expr_pos(&e), e.to_string()))
        })
        .collect()
}

fn parse_matrix(lines: &[Line], coords: &[String], size: usize, labels: &[String]) -> Result<Option<Matrix>, DocError> {
    if lines.is_empty() {
        return Ok(None);
    }
    let mut m: Vec<Option<Vec<Scalar>>> = vec![None; size];
    for line in lines {
        let k = parse_index(line, line.key, line.key_col, size, labels)?;
        if m[k].is_some() {
            return Err(err(line.no, line.key_col, format!("row {} given twice", k + 1)));
        }
        m[k] = Some(parse_row(line, coords, size)?);
    }
    let last = lines.last().map(|l| l.no).unwrap_or(0);
    m.into_iter()
        .enumerate()
        .map(|(k, row)| row.ok_or_else(|| err(last, 1, format!("matrix row {} missing", k + 1))))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

/// Parses a document.
pub fn parse(text: &str) -> Result<Document, DocError> {
    let mut raw = Raw::default();
    let mut section = Section::None;
    for (k, full) in text.lines().enumerate() {
        let no = k + 1;
        let content = full.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let t = content.trim();
        if t.starts_with('[') {
            let col = content.find('[').unwrap_or(0) + 1;
            let name = t
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| err(no, col, "malformed section header"))?;
            section = match name.trim() {
                "chart" => Section::Chart,
                "anchor" => Section::Anchor,
                "bracket" => Section::Bracket,
                "J" | "j" => Section::J,
                "metric" => Section::Metric,
                "projector" => Section::Projector,
                "import" => Section::Import,
                other => return Err(err(no, col, format!("unknown section '{other}'"))),
            };
            if matches!(section, Section::Chart | Section::Anchor | Section::Bracket) {
                raw.seen_structure.get_or_insert(no);
            }
            continue;
        }
        let line = split_line(no, content)?;
        match section {
            Section::None => return Err(err(no, 1, "content before the first section header")),
            Section::Chart => match line.key {
                "name" => raw.name = Some(line.value.to_string()),
                "coords" => raw.coords = Some(list_of_names(line.value)),
                "labels" => raw.labels = Some(list_of_names(line.value)),
                "rank" => {
                    let r = line
                        .value
                        .parse::<usize>()
                        .map_err(|_| err(no, line.value_col, "rank must be a positive integer"))?;
                    raw.rank = Some(r);
                }
                other => return Err(err(no, line.key_col, format!("unknown chart key '{other}'"))),
            },
            Section::Import => match line.key {
                "fixture" => raw.import = Some((no, line.value.to_string())),
                other => return Err(err(no, line.key_col, format!("unknown import key '{other}'"))),
            },
            Section::Anchor => raw.anchor.push(line),
            Section::Bracket => raw.bracket.push(line),
            Section::J => raw.j.push(line),
            Section::Metric => raw.metric.push(line),
            Section::Projector => raw.projector.push(line),
        }
    }
    build(raw)
}

fn build(raw: Raw) -> Result<Document, DocError> {
    if let Some((no, name)) = &raw.import {
        if let Some(at) = raw.seen_structure {
            return Err(err(at, 1, "[import] cannot be combined with [chart], [anchor] or [bracket]"));
        }
        let f = fixture(name).map_err(|e| err(*no, 1, e.to_string()))?;
        let coords = f.algebroid.chart().coords().to_vec();
        let r = f.algebroid.rank();
        let labels = f.algebroid.labels().to_vec();
        let mut doc = Document::from_fixture(&f);
        if let Some(j) = parse_matrix(&raw.j, &coords, r, &labels)? {
            doc.j = Some(j);
        }
        if let Some(g) = parse_matrix(&raw.metric, &coords, r, &labels)? {
            doc.metric = Some(g);
        }
        doc.projector = parse_matrix(&raw.projector, &coords, r, &labels)?;
        return Ok(doc);
    }
    let coords = raw.coords.ok_or_else(|| err(1, 1, "[chart] must declare coords"))?;
    let r = raw.rank.ok_or_else(|| err(1, 1, "[chart] must declare rank"))?;
    let name = raw.name.unwrap_or_else(|| "document".to_string());
    let chart = Chart::new(&name, &coords).map_err(|e| err(1, 1, e.to_string()))?;
    let labels = raw.labels.clone().unwrap_or_else(|| (1..=r).map(|a| format!("e{a}")).collect());
    let mut b = Algebroid::builder(chart, r).labels(labels.clone());
    let mut seen_anchor = vec![false; r];
    for line in &raw.anchor {
        let a = parse_index(line, line.key, line.key_col, r, &labels)?;
        if std::mem::replace(&mut seen_anchor[a], true) {
            return Err(err(line.no, line.key_col, format!("anchor row {} given twice", a + 1)));
        }
        b = b.anchor_row(a, parse_row(line, &coords, coords.len())?);
    }
    for line in &raw.bracket {
        let parts: Vec<(usize, &str)> = line
            .key
            .split_whitespace()
            .map(|p| (line.key.find(p).unwrap_or(0), p))
            .collect();
        if parts.len() != 3 {
            return Err(err(line.no, line.key_col, "bracket key must be 'a b c'"));
        }
        let idx: Vec<usize> = parts
            .iter()
            .map(|(off, p)| parse_index(line, p, line.key_col + off, r, &labels))
            .collect::<Result<_, _>>()?;
        if idx[0] >= idx[1] {
            return Err(err(line.no, line.key_col, "bracket entries need a < b"));
        }
        let v = parse_with_coords(line.value, &coords)
            .map_err(|e| err(line.no, line.value_col + expr_pos(&e), e.to_string()))?;
        b = b.bracket(idx[0], idx[1], idx[2], v);
    }
    let algebroid = b.build().map_err(|e| err(1, 1, e.to_string()))?;
    Ok(Document {
        name,
        j: parse_matrix(&raw.j, &coords, r, &labels)?,
        metric: parse_matrix(&raw.metric, &coords, r, &labels)?,
        projector: parse_matrix(&raw.projector, &coords, r, &labels)?,
        algebroid,
    })
}

/// Reads the `[projector]` section of a standalone file against the
/// coordinates and rank of the algebroid it will act on.
pub fn parse_projector(text: &str, coords: &[String], rank: usize, labels: &[String]) -> Result<Matrix, DocError> {
    let mut lines = Vec::new();
    let mut inside = false;
    for (k, full) in text.lines().enumerate() {
        let no = k + 1;
        let content = full.split('#').next().unwrap_or("");
        let t = content.trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with('[') {
            inside = t == "[projector]";
            continue;
        }
        if inside {
            lines.push(split_line(no, content)?);
        }
    }
    parse_matrix(&lines, coords, rank, labels)?.ok_or_else(|| err(1, 1, "no [projector] section"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEIS: &str = "\
# Heisenberg
[chart]
name = heis
coords = t
rank = 4

[anchor]
1 = 0

[bracket]
1 2 3 = 1
";

    #[test]
    fn parses_heisenberg() {
        let doc = parse(HEIS).unwrap();
        let st = doc.algebroid.structure();
        assert_eq!(st.c(2, 0, 1), &Scalar::one());
        assert_eq!(st.c(2, 1, 0), &Scalar::int(-1));
        assert!(doc.j.is_none());
    }

    #[test]
    fn reports_positions() {
        let bad = HEIS.replace("1 2 3 = 1", "1 2 3 = 1 + * t");
        let e = parse(&bad).unwrap_err();
        assert_eq!(e.line, 11);
        assert!(e.column > 8, "{e}");
        let e = parse("[chart]\nname = x\n[weird]\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
        let e = parse(&HEIS.replace("1 = 0", "5 = 0")).unwrap_err();
        assert_eq!(e.line, 8);
    }

    #[test]
    fn emit_round_trips() {
        for name in crate::constructions::SUITE {
            let f = fixture(name).unwrap();
            let doc = Document::from_fixture(&f);
            let back = parse(&doc.emit()).unwrap();
            assert_eq!(back.algebroid.structure(), f.algebroid.structure(), "{name}");
            assert_eq!(back.j, doc.j, "{name}");
            assert_eq!(back.metric, doc.metric, "{name}");
        }
    }

    #[test]
    fn import_with_override() {
        let doc = parse("[import]\nfixture = flat_r2\n[metric]\n1 = 2, 0\n2 = 0, 2\n").unwrap();
        assert_eq!(doc.metric.unwrap()[0][0], Scalar::int(2));
        assert!(doc.j.is_some());
    }
}
