//! The line-oriented `tower v1` text format.
//!
//! ```text
//! tower v1
//! base_genus 0
//! degree 2
//! branch b1 (1 2) signs 11
//! handle a 1 (1 2) signs 00
//! glue b1 1 b2 2
//! ```
//!
//! Sheets, handle indices and cycle indices are 1-based. Signs give `ε_i` for
//! sheet `i` from left to right. When any line carries signs the file is a
//! tower and `glue` indices name cycles of the lifted action on the `2n` sheets
//! `2i + s` of `C~`; otherwise the file is a plain cover and they name cycles
//! of the permutation itself.

use std::fmt::Write as _;

use super::{BaseCurve, FiberPoint, GluedCover, GluedTower, MonodromyCover, SignedTower};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::weyl::SignedPerm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerFile {
    pub base_genus: usize,
    pub degree: usize,
    pub labels: Vec<String>,
    pub branches: Vec<(Perm, Option<u64>)>,
    /// `α_1, β_1, α_2, …`
    pub handles: Vec<(Perm, Option<u64>)>,
    pub glue: Vec<(FiberPoint, FiberPoint)>,
}

/// A parsed file: a nodal cover, or a nodal tower when signs are present.
#[derive(Clone, Debug)]
pub enum Loaded {
    Cover(GluedCover),
    Tower(GluedTower),
}

fn parse_signs(text: &str, n: usize, line: usize) -> Result<u64> {
    if text.len() != n || !text.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::Parse(format!("line {line}: signs must be {n} binary digits, got {text:?}")));
    }
    Ok(text.chars().enumerate().fold(0, |m, (i, c)| m | (u64::from(c == '1') << i)))
}

/// Splits `"<perm> [signs <bits>]"`.
fn parse_perm_and_signs(text: &str, n: usize, line: usize) -> Result<(Perm, Option<u64>)> {
    let (perm_text, signs) = match text.find("signs") {
        Some(k) => (&text[..k], Some(text[k + 5..].trim())),
        None => (text, None),
    };
    let perm = Perm::parse(perm_text, n).map_err(|e| Error::Parse(format!("line {line}: {e}")))?;
    let signs = signs.map(|s| parse_signs(s, n, line)).transpose()?;
    Ok((perm, signs))
}

fn parse_usize(tok: Option<&str>, what: &str, line: usize) -> Result<usize> {
    tok.ok_or_else(|| Error::Parse(format!("line {line}: missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: {what} is not a number")))
}

pub fn parse_tower_file(text: &str) -> Result<TowerFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, "tower v1")) => {}
        Some((k, other)) => return Err(Error::Parse(format!("line {k}: expected \"tower v1\", got {other:?}"))),
        None => return Err(Error::Parse("empty file".into())),
    }
    let mut base_genus = None;
    let mut degree = None;
    let mut labels = Vec::new();
    let mut branches = Vec::new();
    let mut handles: Vec<Option<(Perm, Option<u64>)>> = Vec::new();
    let mut glue_raw: Vec<(usize, String, usize, String, usize)> = Vec::new();
    for (k, line) in lines {
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "base_genus" => base_genus = Some(parse_usize(Some(rest), "base genus", k)?),
            "degree" => {
                let n = parse_usize(Some(rest), "degree", k)?;
                if n == 0 || n > 63 {
                    return Err(Error::Parse(format!("line {k}: degree {n} outside 1..=63")));
                }
                degree = Some(n);
            }
            "branch" => {
                let n = degree.ok_or_else(|| Error::Parse(format!("line {k}: branch before degree")))?;
                let (label, body) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::Parse(format!("line {k}: branch needs a label and a permutation")))?;
                labels.push(label.to_string());
                branches.push(parse_perm_and_signs(body, n, k)?);
            }
            "handle" => {
                let n = degree.ok_or_else(|| Error::Parse(format!("line {k}: handle before degree")))?;
                let mut toks = rest.splitn(3, char::is_whitespace);
                let which = toks.next().unwrap_or("");
                let offset = match which {
                    "a" => 0,
                    "b" => 1,
                    _ => return Err(Error::Parse(format!("line {k}: handle kind must be a or b"))),
                };
                let index = parse_usize(toks.next(), "handle index", k)?;
                if index == 0 {
                    return Err(Error::Parse(format!("line {k}: handle indices start at 1")));
                }
                let slot = 2 * (index - 1) + offset;
                if handles.len() <= slot {
                    handles.resize(slot + 1, None);
                }
                if handles[slot].is_some() {
                    return Err(Error::Parse(format!("line {k}: handle {which} {index} given twice")));
                }
                handles[slot] = Some(parse_perm_and_signs(toks.next().unwrap_or(""), n, k)?);
            }
            "glue" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 4 {
                    return Err(Error::Parse(format!("line {k}: glue needs label index label index")));
                }
                glue_raw.push((
                    k,
                    toks[0].to_string(),
                    parse_usize(Some(toks[1]), "cycle index", k)?,
                    toks[2].to_string(),
                    parse_usize(Some(toks[3]), "cycle index", k)?,
                ));
            }
            other => return Err(Error::Parse(format!("line {k}: unknown keyword {other:?}"))),
        }
    }
    let base_genus = base_genus.ok_or_else(|| Error::Parse("missing base_genus".into()))?;
    let degree = degree.ok_or_else(|| Error::Parse("missing degree".into()))?;
    if handles.len() != 2 * base_genus || handles.iter().any(Option::is_none) {
        return Err(Error::Parse(format!(
            "base genus {base_genus} needs handles a 1, b 1, … a {base_genus}, b {base_genus}"
        )));
    }
    let handles: Vec<_> = handles.into_iter().map(|h| h.expect("checked")).collect();
    let mut glue = Vec::new();
    for (k, la, ia, lb, ib) in glue_raw {
        let find = |l: &str| {
            labels.iter().position(|x| x == l).ok_or_else(|| Error::Parse(format!("line {k}: unknown label {l}")))
        };
        if ia == 0 || ib == 0 {
            return Err(Error::Parse(format!("line {k}: cycle indices start at 1")));
        }
        glue.push((FiberPoint::new(find(&la)?, ia - 1), FiberPoint::new(find(&lb)?, ib - 1)));
    }
    Ok(TowerFile { base_genus, degree, labels, branches, handles, glue })
}

impl TowerFile {
    pub fn is_signed(&self) -> bool {
        self.branches.iter().chain(&self.handles).any(|(_, s)| s.is_some())
    }

    fn base(&self) -> Result<BaseCurve> {
        BaseCurve::new(self.base_genus, self.labels.clone())
    }

    pub fn cover(&self) -> Result<MonodromyCover> {
        let perms = |v: &[(Perm, Option<u64>)]| v.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>();
        MonodromyCover::new(self.base()?, self.degree, perms(&self.handles), perms(&self.branches))
    }

    /// The tower, missing signs read as zero.
    pub fn tower(&self) -> Result<SignedTower> {
        let signed = |v: &[(Perm, Option<u64>)]| {
            v.iter().map(|(p, s)| SignedPerm::new(p.clone(), s.unwrap_or(0))).collect::<Result<Vec<_>>>()
        };
        SignedTower::new(self.base()?, self.degree, signed(&self.handles)?, signed(&self.branches)?)
    }

    pub fn load(&self) -> Result<Loaded> {
        if self.is_signed() {
            Ok(Loaded::Tower(GluedTower::new(self.tower()?, self.glue.clone())?))
        } else {
            Ok(Loaded::Cover(GluedCover::new(self.cover()?, self.glue.clone())?))
        }
    }
}

fn signs_text(g: &SignedPerm) -> String {
    g.eps_bits().iter().map(|b| char::from(b'0' + b)).collect()
}

fn write_glue(out: &mut String, labels: &[String], glue: &[(FiberPoint, FiberPoint)]) {
    for (a, b) in glue {
        let _ = writeln!(out, "glue {} {} {} {}", labels[a.label], a.cycle + 1, labels[b.label], b.cycle + 1);
    }
}

/// Serializes a tower; `glue` names points of `C~`.
pub fn write_tower(tower: &SignedTower, glue: &[(FiberPoint, FiberPoint)]) -> String {
    let base = tower.base();
    let mut out = String::from("tower v1\n");
    let _ = writeln!(out, "base_genus {}", base.genus());
    let _ = writeln!(out, "degree {}", tower.degree());
    for (k, g) in tower.handles().iter().enumerate() {
        let which = if k % 2 == 0 { "a" } else { "b" };
        let _ = writeln!(out, "handle {which} {} {} signs {}", k / 2 + 1, g.sigma(), signs_text(g));
    }
    for (label, g) in base.labels().iter().zip(tower.branches()) {
        let _ = writeln!(out, "branch {label} {} signs {}", g.sigma(), signs_text(g));
    }
    write_glue(&mut out, base.labels(), glue);
    out
}

/// Serializes an unsigned cover; `glue` names its points.
pub fn write_cover(cover: &MonodromyCover, glue: &[(FiberPoint, FiberPoint)]) -> String {
    let base = cover.base();
    let mut out = String::from("tower v1\n");
    let _ = writeln!(out, "base_genus {}", base.genus());
    let _ = writeln!(out, "degree {}", cover.degree());
    for (k, p) in cover.handles().iter().enumerate() {
        let which = if k % 2 == 0 { "a" } else { "b" };
        let _ = writeln!(out, "handle {which} {} {p}", k / 2 + 1);
    }
    for (label, p) in base.labels().iter().zip(cover.branches()) {
        let _ = writeln!(out, "branch {label} {p}");
    }
    write_glue(&mut out, base.labels(), glue);
    out
}
