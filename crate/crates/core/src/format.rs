//! Line-oriented text formats for complexes, chains, covers and glueing
//! instances. Serialization is canonical: parsing a serialized object gives
//! it back, and serializing a parsed file sorts it into canonical order.
//!
//! Blank lines and lines starting with `#` are ignored everywhere.
//!
//! ```text
//! complex tri chain l1
//! degree 0: 0 1 2
//! degree 1: 0.1 0.2 1.2
//! map 1: 0 0.1 -1
//! ```
//!
//! Covers use `simplex v…`, `subspace: v…`, `member NAME: v…` and an optional
//! `rc2-asserted` line. Glueing instances start with `glue N`, followed by
//! complex blocks (one per piece, named after the piece) and the lines
//! `cycle P: label=value …`, `free P: label …` and `identify P:x Q:y`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::exactlp::{SparseMat, SparseVec};
use crate::gluecalc::{GlueingInstance, Piece};
use crate::nervekit::CoverData;
use crate::normcx::{Direction, NormFlavor, NormedComplex};
use crate::rational::Rational;
use crate::simplicial::SimplicialComplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

/// Non-comment lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_rational(line: usize, s: &str) -> Result<Rational, FormatError> {
    s.parse::<Rational>()
        .or_else(|e| err(line, format!("bad rational `{s}`: {e}")))
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && !s.contains('=') && !s.contains('#') && !s.chars().any(char::is_whitespace)
}

/// Splits `keyword rest` / `keyword arg: rest` forms.
fn split_colon(line: usize, s: &str) -> Result<(String, String), FormatError> {
    match s.split_once(':') {
        Some((head, tail)) => Ok((head.trim().to_string(), tail.trim().to_string())),
        None => err(line, format!("expected `:` in `{s}`")),
    }
}

#[derive(Default)]
struct ComplexBlock {
    line: usize,
    name: String,
    direction: Option<Direction>,
    flavor: Option<NormFlavor>,
    bases: BTreeMap<i64, (usize, Vec<String>)>,
    entries: Vec<(usize, i64, String, String, Rational)>,
}

impl ComplexBlock {
    fn header(line: usize, rest: &str) -> Result<Self, FormatError> {
        let parts: Vec<&str> = rest.split_whitespace().collect();
        if parts.len() != 3 {
            return err(line, "expected `complex <name> <direction> <norm>`");
        }
        let direction = match parts[1] {
            "chain" => Direction::Chain,
            "cochain" => Direction::Cochain,
            d => return err(line, format!("unknown direction `{d}`")),
        };
        let flavor = match parts[2] {
            "l1" => NormFlavor::L1,
            "linf" => NormFlavor::Linf,
            f => return err(line, format!("unknown norm `{f}`")),
        };
        if !valid_label(parts[0]) {
            return err(line, format!("invalid complex name `{}`", parts[0]));
        }
        Ok(ComplexBlock {
            line,
            name: parts[0].to_string(),
            direction: Some(direction),
            flavor: Some(flavor),
            ..Default::default()
        })
    }

    fn degree_line(&mut self, line: usize, rest: &str) -> Result<(), FormatError> {
        let (k, labels) = split_colon(line, rest)?;
        let k: i64 = k.parse().or_else(|_| err(line, format!("bad degree `{k}`")))?;
        let labels: Vec<String> = labels.split_whitespace().map(str::to_string).collect();
        if let Some(l) = labels.iter().find(|l| !valid_label(l)) {
            return err(line, format!("invalid label `{l}`"));
        }
        let mut seen = BTreeSet::new();
        if let Some(l) = labels.iter().find(|l| !seen.insert(*l)) {
            return err(line, format!("duplicate label `{l}` in degree {k}"));
        }
        if self.bases.insert(k, (line, labels)).is_some() {
            return err(line, format!("degree {k} declared twice"));
        }
        Ok(())
    }

    fn map_line(&mut self, line: usize, rest: &str) -> Result<(), FormatError> {
        let (k, entry) = split_colon(line, rest)?;
        let k: i64 = k.parse().or_else(|_| err(line, format!("bad degree `{k}`")))?;
        let parts: Vec<&str> = entry.split_whitespace().collect();
        if parts.len() != 3 {
            return err(line, "expected `map k: row col value`");
        }
        let v = parse_rational(line, parts[2])?;
        if v.is_zero() {
            return err(line, "zero entries are not written");
        }
        self.entries
            .push((line, k, parts[0].to_string(), parts[1].to_string(), v));
        Ok(())
    }

    fn finish(self) -> Result<NormedComplex, FormatError> {
        let direction = self.direction.expect("set by header");
        let flavor = self.flavor.expect("set by header");
        let bases: BTreeMap<i64, Vec<String>> =
            self.bases.iter().map(|(k, (_, b))| (*k, b.clone())).collect();
        let mut grouped: BTreeMap<i64, Vec<(usize, String, String, Rational)>> = BTreeMap::new();
        for (line, k, r, c, v) in self.entries {
            grouped.entry(k).or_default().push((line, r, c, v));
        }
        let mut maps = BTreeMap::new();
        for (k, entries) in grouped {
            let line = entries[0].0;
            let target = k + direction.step();
            let (Some(cols), Some(rows)) = (bases.get(&k), bases.get(&target)) else {
                return err(line, format!("map {k} needs degrees {k} and {target}"));
            };
            let mut m = SparseMat::zeros(rows.clone(), cols.clone())
                .or_else(|e| err(line, e.to_string()))?;
            let mut seen = BTreeSet::new();
            for (line, r, c, v) in entries {
                let Some(i) = m.row_position(&r) else {
                    return err(line, format!("`{r}` is not in degree {target}"));
                };
                let Some(j) = m.col_position(&c) else {
                    return err(line, format!("`{c}` is not in degree {k}"));
                };
                if !seen.insert((i, j)) {
                    return err(line, format!("entry ({r}, {c}) given twice"));
                }
                m.add_at(i, j, &v);
            }
            maps.insert(k, m);
        }
        NormedComplex::from_parts(self.name, direction, flavor, bases, maps)
            .or_else(|e| err(self.line, e.to_string()))
    }
}

/// Parses one or more `complex` blocks, in file order.
pub fn parse_complexes(text: &str) -> Result<Vec<NormedComplex>, FormatError> {
    let mut out = Vec::new();
    let mut current: Option<ComplexBlock> = None;
    for (line, l) in lines(text) {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match kw {
            "complex" => {
                if let Some(b) = current.take() {
                    out.push(b.finish()?);
                }
                current = Some(ComplexBlock::header(line, rest)?);
            }
            "degree" | "map" => {
                let Some(b) = current.as_mut() else {
                    return err(line, "`degree`/`map` before any `complex` header");
                };
                if kw == "degree" {
                    b.degree_line(line, rest)?;
                } else {
                    b.map_line(line, rest)?;
                }
            }
            _ => return err(line, format!("unexpected `{kw}`")),
        }
    }
    if let Some(b) = current {
        out.push(b.finish()?);
    }
    Ok(out)
}

/// Parses a file holding exactly one complex.
pub fn parse_complex(text: &str) -> Result<NormedComplex, FormatError> {
    let mut all = parse_complexes(text)?;
    match all.len() {
        1 => Ok(all.pop().expect("one element")),
        0 => err(1, "no complex found"),
        n => err(1, format!("expected one complex, found {n}")),
    }
}

pub fn serialize_complex(c: &NormedComplex) -> String {
    let mut out = String::new();
    writeln!(out, "complex {} {} {}", c.name(), c.direction().as_str(), c.flavor().as_str()).unwrap();
    for (k, labels) in c.bases() {
        if labels.is_empty() {
            writeln!(out, "degree {k}:").unwrap();
        } else {
            writeln!(out, "degree {k}: {}", labels.join(" ")).unwrap();
        }
    }
    for (k, m) in c.maps() {
        let mut entries: Vec<(&String, &String, &Rational)> = m
            .triples()
            .map(|(i, j, v)| (&m.rows()[i], &m.cols()[j], v))
            .collect();
        entries.sort();
        for (r, col, v) in entries {
            writeln!(out, "map {k}: {r} {col} {v}").unwrap();
        }
    }
    out
}

pub fn serialize_complexes(cs: &[NormedComplex]) -> String {
    cs.iter().map(serialize_complex).collect()
}

/// `label=value` tokens.
pub fn parse_entries<'a>(
    line: usize,
    tokens: impl IntoIterator<Item = &'a str>,
) -> Result<SparseVec, FormatError> {
    let mut v = SparseVec::new();
    let mut seen = BTreeSet::new();
    for t in tokens {
        let Some((label, value)) = t.split_once('=') else {
            return err(line, format!("expected `label=value`, got `{t}`"));
        };
        if !valid_label(label) {
            return err(line, format!("invalid label `{label}`"));
        }
        if !seen.insert(label.to_string()) {
            return err(line, format!("label `{label}` given twice"));
        }
        v.set(label, parse_rational(line, value)?);
    }
    Ok(v)
}

/// A chain file: one `label value` pair per line.
pub fn parse_chain(text: &str) -> Result<SparseVec, FormatError> {
    let mut v = SparseVec::new();
    for (line, l) in lines(text) {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 2 {
            return err(line, "expected `label value`");
        }
        if !valid_label(parts[0]) {
            return err(line, format!("invalid label `{}`", parts[0]));
        }
        if !v.get(parts[0]).is_zero() {
            return err(line, format!("label `{}` given twice", parts[0]));
        }
        let x = parse_rational(line, parts[1])?;
        if x.is_zero() {
            return err(line, "zero entries are not written");
        }
        v.set(parts[0], x);
    }
    Ok(v)
}

pub fn serialize_chain(v: &SparseVec) -> String {
    v.iter().map(|(l, x)| format!("{l} {x}\n")).collect()
}

fn vertex_labels(x: &SimplicialComplex, vs: impl IntoIterator<Item = usize>) -> Vec<String> {
    vs.into_iter().map(|v| x.vertices()[v].clone()).collect()
}

fn parse_simplices(text: &str, allow: &[&str]) -> Result<(Vec<Vec<String>>, usize), FormatError> {
    let mut gens = Vec::new();
    let mut first = 0;
    for (line, l) in lines(text) {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let kw_base = kw.trim_end_matches(':');
        if kw == "simplex" {
            let vs: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if vs.is_empty() {
                return err(line, "empty simplex");
            }
            first = if first == 0 { line } else { first };
            gens.push(vs);
        } else if !allow.contains(&kw_base) {
            return err(line, format!("unexpected `{kw}`"));
        }
    }
    Ok((gens, first.max(1)))
}

/// A simplicial complex given by `simplex` lines; vertices are ordered by label.
pub fn parse_simplicial(text: &str) -> Result<SimplicialComplex, FormatError> {
    let (gens, first) = parse_simplices(text, &[])?;
    SimplicialComplex::from_generators(gens).or_else(|e| err(first, e.to_string()))
}

fn simplex_lines(x: &SimplicialComplex) -> Vec<String> {
    let mut lines: Vec<Vec<String>> = x
        .maximal_simplices()
        .into_iter()
        .map(|s| {
            let mut l = vertex_labels(x, s.iter().copied());
            l.sort();
            l
        })
        .collect();
    lines.sort();
    lines
        .into_iter()
        .map(|l| format!("simplex {}\n", l.join(" ")))
        .collect()
}

pub fn serialize_simplicial(x: &SimplicialComplex) -> String {
    simplex_lines(x).concat()
}

pub fn parse_cover(text: &str) -> Result<CoverData, FormatError> {
    let (gens, first) = parse_simplices(text, &["subspace", "member", "rc2-asserted"])?;
    let ambient = SimplicialComplex::from_generators(gens).or_else(|e| err(first, e.to_string()))?;
    let mut subspace: Option<Vec<String>> = None;
    let mut members: Vec<(String, Vec<String>)> = Vec::new();
    let mut rc2 = false;
    let mut cover_line = first;
    for (line, l) in lines(text) {
        if l == "rc2-asserted" {
            rc2 = true;
        } else if l.starts_with("subspace") {
            let (_, rest) = split_colon(line, l)?;
            if subspace.is_some() {
                return err(line, "subspace given twice");
            }
            subspace = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if let Some(rest) = l.strip_prefix("member") {
            let (name, verts) = split_colon(line, rest)?;
            members.push((name, verts.split_whitespace().map(str::to_string).collect()));
            cover_line = line;
        }
    }
    let subspace = subspace.unwrap_or_default();
    let sub_refs: Vec<&str> = subspace.iter().map(String::as_str).collect();
    let member_refs: Vec<(&str, Vec<&str>)> = members
        .iter()
        .map(|(n, vs)| (n.as_str(), vs.iter().map(String::as_str).collect()))
        .collect();
    let mut cover =
        CoverData::new(ambient, &sub_refs, &member_refs).or_else(|e| err(cover_line, e.to_string()))?;
    cover.rc2_user_asserted = rc2;
    Ok(cover)
}

pub fn serialize_cover(c: &CoverData) -> String {
    let x = c.ambient();
    let mut out = simplex_lines(x).concat();
    let mut sub = vertex_labels(x, c.subspace().iter().copied());
    sub.sort();
    if sub.is_empty() {
        out.push_str("subspace:\n");
    } else {
        writeln!(out, "subspace: {}", sub.join(" ")).unwrap();
    }
    for (name, m) in c.members() {
        let mut vs = vertex_labels(x, m.iter().copied());
        vs.sort();
        writeln!(out, "member {name}: {}", vs.join(" ")).unwrap();
    }
    if c.rc2_user_asserted {
        out.push_str("rc2-asserted\n");
    }
    out
}

pub fn parse_glueing(text: &str) -> Result<GlueingInstance, FormatError> {
    let mut n: Option<(usize, i64)> = None;
    let mut complex_text = String::new();
    let mut cycles: Vec<(usize, String, SparseVec)> = Vec::new();
    let mut frees: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut idents: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match kw {
            "glue" => {
                let k: i64 = rest.trim().parse().or_else(|_| err(line, "expected `glue <n>`"))?;
                if n.replace((line, k)).is_some() {
                    return err(line, "`glue` given twice");
                }
            }
            "cycle" => {
                let (piece, entries) = split_colon(line, rest)?;
                cycles.push((line, piece, parse_entries(line, entries.split_whitespace())?));
            }
            "free" => {
                let (piece, labels) = split_colon(line, rest)?;
                frees.push((line, piece, labels.split_whitespace().map(str::to_string).collect()));
            }
            "identify" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return err(line, "expected `identify P:x Q:y`");
                }
                idents.push((line, parts[0].to_string(), parts[1].to_string()));
            }
            _ => {}
        }
        // keep line numbers intact for the complex parser
        if matches!(kw, "glue" | "cycle" | "free" | "identify") {
            complex_text.push('\n');
        } else {
            complex_text.push_str(raw);
            complex_text.push('\n');
        }
    }
    let Some((_, n)) = n else {
        return err(1, "missing `glue <n>` line");
    };
    let complexes = parse_complexes(&complex_text)?;
    let mut pieces: Vec<Piece> = complexes
        .into_iter()
        .map(|c| Piece {
            name: c.name().to_string(),
            complex: c,
            cycle: SparseVec::new(),
            free: BTreeSet::new(),
        })
        .collect();
    let find = |pieces: &[Piece], line: usize, name: &str| -> Result<usize, FormatError> {
        pieces
            .iter()
            .position(|p| p.name == name)
            .map_or_else(|| err(line, format!("unknown piece `{name}`")), Ok)
    };
    for (line, piece, v) in cycles {
        let i = find(&pieces, line, &piece)?;
        if !pieces[i].cycle.is_empty() {
            return err(line, format!("cycle of `{piece}` given twice"));
        }
        pieces[i].cycle = v;
    }
    for (line, piece, labels) in frees {
        let i = find(&pieces, line, &piece)?;
        pieces[i].free.extend(labels);
    }
    let mut identifications = Vec::new();
    let mut first_ident = 1;
    for (line, a, b) in idents {
        first_ident = line;
        let face = |s: &str| -> Result<(usize, String), FormatError> {
            let Some((p, l)) = s.split_once(':') else {
                return err(line, format!("expected `piece:label`, got `{s}`"));
            };
            Ok((find(&pieces, line, p)?, l.to_string()))
        };
        identifications.push((face(&a)?, face(&b)?));
    }
    GlueingInstance::new(n, pieces, identifications).or_else(|e| err(first_ident, e.to_string()))
}

pub fn serialize_glueing(inst: &GlueingInstance) -> String {
    let mut out = format!("glue {}\n", inst.n());
    for p in inst.pieces() {
        out.push_str(&serialize_complex(&p.complex));
    }
    for p in inst.pieces() {
        if !p.cycle.is_empty() {
            let entries: Vec<String> = p.cycle.iter().map(|(l, v)| format!("{l}={v}")).collect();
            writeln!(out, "cycle {}: {}", p.name, entries.join(" ")).unwrap();
        }
    }
    for p in inst.pieces() {
        if !p.free.is_empty() {
            let labels: Vec<&str> = p.free.iter().map(String::as_str).collect();
            writeln!(out, "free {}: {}", p.name, labels.join(" ")).unwrap();
        }
    }
    let names = |i: usize| inst.pieces()[i].name.as_str();
    let mut idents: Vec<String> = inst
        .identifications()
        .iter()
        .map(|((pa, la), (pb, lb))| format!("identify {}:{} {}:{}\n", names(*pa), la, names(*pb), lb))
        .collect();
    idents.sort();
    out.push_str(&idents.concat());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRI: &str = "complex tri chain l1
degree 0: 0 1 2
degree 1: 0.1 0.2 1.2
degree 2: 0.1.2
map 1: 0 0.1 -1
map 1: 0 0.2 -1
map 1: 1 0.1 1
map 1: 1 1.2 -1
map 1: 2 0.2 1
map 1: 2 1.2 1
map 2: 0.1 0.1.2 1
map 2: 0.2 0.1.2 -1
map 2: 1.2 0.1.2 1
";

    #[test]
    fn complex_roundtrip() {
        let c = parse_complex(TRI).unwrap();
        c.validate().unwrap();
        assert_eq!(serialize_complex(&c), TRI);
        let x = SimplicialComplex::from_generators([vec!["0", "1", "2"]]).unwrap();
        assert_eq!(c, x.chain_complex("tri"));
        let mut shuffled: Vec<&str> = TRI.lines().collect();
        shuffled[1..].reverse();
        let again = parse_complex(&shuffled.join("\n")).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_bad_lines() {
        let bad = TRI.replace("map 2: 1.2 0.1.2 1", "map 2: 1.2 0.1.2 2/4");
        let e = parse_complex(&bad).unwrap_err();
        assert_eq!(e.line, 13);
        assert!(parse_complex("degree 0: a").is_err());
        assert!(parse_complex("complex x chain l2").is_err());
        assert!(parse_complex("complex x chain l1\ndegree 0: a a").is_err());
        assert!(parse_complex("complex x chain l1\ndegree 0: a\nmap 0: a a 1").is_err());
    }

    #[test]
    fn chain_and_cover_roundtrip() {
        let v = parse_chain("0.1 1\n1.2 -1/2\n").unwrap();
        assert_eq!(serialize_chain(&v), "0.1 1\n1.2 -1/2\n");
        let text = "simplex a b\nsimplex b c\nsubspace: a\nmember U: a b\nmember V: b c\n";
        let cover = parse_cover(text).unwrap();
        assert_eq!(serialize_cover(&cover), text);
        assert_eq!(parse_cover(&serialize_cover(&cover)).unwrap(), cover);
        assert!(parse_cover("simplex a b\nmember U: a\n").is_err());
    }
}
