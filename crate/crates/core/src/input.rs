//! Line-oriented conic records.
//!
//! A document is a sequence of records separated by blank lines. Each record
//! holds `key = value` lines:
//!
//! ```text
//! # a hyperbolic circle of Euclidean radius 0.5 in the disk
//! absolute = hyperbolic
//! form = 1, 0, 0, 1, 0, -0.25
//! label = circle r=0.5
//! ```
//!
//! `absolute` is `spherical` or `hyperbolic`, `form` lists the upper triangle
//! `m00, m01, m02, m11, m12, m22` and `label` is optional free text up to the
//! end of the line. Lines starting with `#` are ignored.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::projective::{GeometryContext, GeometryKind, SymForm3};

#[derive(Debug, Clone, PartialEq)]
pub struct ConicSpec {
    pub absolute: GeometryKind,
    pub form: SymForm3,
    pub label: Option<String>,
}

impl ConicSpec {
    pub fn new(absolute: GeometryKind, form: SymForm3) -> Self {
        ConicSpec { absolute, form, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn context(&self) -> GeometryContext {
        match self.absolute {
            GeometryKind::Spherical => GeometryContext::spherical(),
            GeometryKind::Hyperbolic => GeometryContext::hyperbolic(),
        }
    }

    /// Spherical records need a real nondegenerate cone; hyperbolic records
    /// only a nonzero finite form.
    pub fn validate(&self) -> Result<()> {
        let e = self.form.entries();
        if e.iter().any(|x| !x.is_finite()) {
            return Err(Error::ValidationError("form has non-finite entries".into()));
        }
        if self.form.normalize().is_err() {
            return Err(Error::ValidationError("form is zero".into()));
        }
        if let Some(l) = &self.label {
            if l.contains('\n') || l.trim() != l || l.is_empty() {
                return Err(Error::ValidationError(format!("bad label {l:?}")));
            }
        }
        if self.absolute == GeometryKind::Spherical {
            if self.form.is_degenerate() {
                return Err(Error::ValidationError("spherical conic is degenerate".into()));
            }
            let (p, n) = self.form.signature();
            if p == 0 || n == 0 {
                return Err(Error::ValidationError("spherical conic has no real points".into()));
            }
        }
        Ok(())
    }
}

fn kind_name(k: GeometryKind) -> &'static str {
    match k {
        GeometryKind::Spherical => "spherical",
        GeometryKind::Hyperbolic => "hyperbolic",
    }
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::ParseError { line, column, message: message.into() }
}

#[derive(Default)]
struct Partial {
    start: usize,
    absolute: Option<GeometryKind>,
    form: Option<SymForm3>,
    label: Option<String>,
}

impl Partial {
    fn finish(self) -> Result<ConicSpec> {
        let absolute = self.absolute.ok_or_else(|| perr(self.start, 1, "record has no absolute"))?;
        let form = self.form.ok_or_else(|| perr(self.start, 1, "record has no form"))?;
        let spec = ConicSpec { absolute, form, label: self.label };
        spec.validate().map_err(|e| match e {
            Error::ValidationError(m) => Error::ValidationError(format!("record at line {}: {m}", self.start)),
            e => e,
        })?;
        Ok(spec)
    }
}

fn parse_form(value: &str, line: usize, col0: usize) -> Result<SymForm3> {
    let mut out = [0.0; 6];
    let mut n = 0;
    let mut offset = 0;
    for part in value.split(',') {
        let col = col0 + offset + (part.len() - part.trim_start().len());
        offset += part.len() + 1;
        let t = part.trim();
        if n == 6 {
            return Err(perr(line, col, "form has more than six entries"));
        }
        out[n] = t.parse::<f64>().map_err(|_| perr(line, col, format!("expected a number, found {t:?}")))?;
        n += 1;
    }
    if n != 6 {
        let first = col0 + (value.len() - value.trim_start().len());
        return Err(perr(line, first, format!("form needs six entries, found {n}")));
    }
    Ok(SymForm3::from_entries(out))
}

/// Parse and validate a document.
pub fn parse_spec(text: &str) -> Result<Vec<ConicSpec>> {
    let mut specs = vec![];
    let mut cur: Option<Partial> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            if let Some(p) = cur.take() {
                specs.push(p.finish()?);
            }
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        let Some(eq) = raw.find('=') else {
            return Err(perr(line, indent + 1, "expected key = value"));
        };
        let key = raw[..eq].trim();
        let vstart = eq + 1 + (raw[eq + 1..].len() - raw[eq + 1..].trim_start().len());
        let value = raw[eq + 1..].trim();
        let p = cur.get_or_insert_with(|| Partial { start: line, ..Default::default() });
        let dup = || perr(line, indent + 1, format!("duplicate key {key}"));
        match key {
            "absolute" => {
                if p.absolute.is_some() {
                    return Err(dup());
                }
                p.absolute = Some(match value {
                    "spherical" => GeometryKind::Spherical,
                    "hyperbolic" => GeometryKind::Hyperbolic,
                    v => return Err(perr(line, vstart + 1, format!("unknown absolute {v:?}"))),
                });
            }
            "form" => {
                if p.form.is_some() {
                    return Err(dup());
                }
                p.form = Some(parse_form(&raw[eq + 1..], line, eq + 2)?);
            }
            "label" => {
                if p.label.is_some() {
                    return Err(dup());
                }
                if !value.is_empty() {
                    p.label = Some(value.to_string());
                }
            }
            k => return Err(perr(line, indent + 1, format!("unknown key {k:?}"))),
        }
    }
    if let Some(p) = cur.take() {
        specs.push(p.finish()?);
    }
    Ok(specs)
}

/// Print records so that `parse_spec(print_spec(s)) == s`.
pub fn print_spec(specs: &[ConicSpec]) -> String {
    let mut out = String::new();
    for (i, s) in specs.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let e = s.form.entries();
        let _ = writeln!(out, "absolute = {}", kind_name(s.absolute));
        let _ = writeln!(out, "form = {}, {}, {}, {}, {}, {}", e[0], e[1], e[2], e[3], e[4], e[5]);
        if let Some(l) = &s.label {
            let _ = writeln!(out, "label = {l}");
        }
    }
    out
}
