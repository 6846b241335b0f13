//! Text format for describing algebras.
//!
//! ```text
//! # quaternionic H-type algebra n(1,1)
//! algebra A { family = H; p = 1; q = 1; }
//!
//! algebra B {
//!     dim_v = 2;
//!     dim_z = 2;
//!     J1 = [[0, 1], [-1, 0]];
//!     J2 = [[0, -1], [1, 0]];
//! }
//! ```
//!
//! Statements are `key = value;` inside `algebra <name> { … }` blocks.
//! Matrix entries are integers, fractions `a/b` or finite decimals, all read
//! as exact rationals. `#` and `//` start line comments.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::algebra::JMap;
use crate::composition::{build_j_pq, Family, HTypeParams};
use crate::linalg::Matrix;
use crate::scalar::{parse_rational, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Malformed input (exit code 1).
    Syntax,
    /// Well-formed input describing an invalid algebra (exit code 2).
    Validation,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecSource {
    Constructor(HTypeParams),
    Raw { n: usize, mats: Vec<Matrix<Rational>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpec {
    pub name: String,
    pub source: SpecSource,
    /// 1-based position of the `algebra` keyword.
    pub line: usize,
    pub col: usize,
}

impl AlgebraSpec {
    pub fn constructor(name: impl Into<String>, params: HTypeParams) -> Self {
        AlgebraSpec {
            name: name.into(),
            source: SpecSource::Constructor(params),
            line: 0,
            col: 0,
        }
    }

    pub fn dim_v(&self) -> usize {
        match &self.source {
            SpecSource::Constructor(p) => p.n(),
            SpecSource::Raw { n, .. } => *n,
        }
    }

    pub fn dim_z(&self) -> usize {
        match &self.source {
            SpecSource::Constructor(p) => p.m(),
            SpecSource::Raw { mats, .. } => mats.len(),
        }
    }

    /// The `j` map in the requested arithmetic.
    pub fn jmap<S: Scalar>(&self) -> JMap<S> {
        match &self.source {
            SpecSource::Constructor(p) => build_j_pq(*p).0,
            SpecSource::Raw { n, mats } => JMap::new(*n, mats.iter().map(|m| m.map(S::from_rational)).collect())
                .expect("raw matrices are validated at parse time"),
        }
    }

    /// Raw matrices, expanding constructors.
    pub fn raw_matrices(&self) -> Vec<Matrix<Rational>> {
        match &self.source {
            SpecSource::Constructor(_) => self.jmap::<Rational>().matrices().to_vec(),
            SpecSource::Raw { mats, .. } => mats.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Semi,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Semi => f.write_str("`;`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax,
        line,
        col,
        message: message.into(),
    }
}

fn invalid(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Validation,
        line,
        col,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let ch = chars.next();
            if ch == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            ch
        };
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(tok) = single {
            bump(&mut chars);
            out.push(Spanned { tok, line: tl, col: tc });
            continue;
        }
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' || (c == '/' && text[byte_offset(text, tl, tc)..].starts_with("//")) {
            while let Some(&d) = chars.peek() {
                if d == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() || matches!(d, '-' | '+' | '.' | '/') {
                    s.push(d);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            out.push(Spanned {
                tok: Tok::Number(s),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c.is_alphanumeric() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_alphanumeric() || d == '_' {
                    s.push(d);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: tl,
                col: tc,
            });
            continue;
        }
        return Err(syntax(tl, tc, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

fn byte_offset(text: &str, line: usize, col: usize) -> usize {
    let line_start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    let rest = &text[line_start..];
    line_start + rest.char_indices().nth(col - 1).map_or(rest.len(), |(i, _)| i)
}

#[derive(Debug, Clone)]
enum Value {
    Word(String),
    Number(Rational, String),
    Matrix(Vec<Vec<Rational>>),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.col))
    }

    fn next(&mut self, what: &str) -> Result<Spanned, ParseError> {
        let t = self.peek().cloned().ok_or_else(|| {
            let (l, c) = self.end;
            syntax(l, c, format!("unexpected end of input, expected {what}"))
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, tok: Tok) -> Result<Spanned, ParseError> {
        let t = self.next(&tok.to_string())?;
        if t.tok != tok {
            return Err(syntax(t.line, t.col, format!("expected {tok}, found {}", t.tok)));
        }
        Ok(t)
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize, usize), ParseError> {
        let t = self.next(what)?;
        match t.tok {
            Tok::Ident(s) => Ok((s, t.line, t.col)),
            other => Err(syntax(t.line, t.col, format!("expected {what}, found {other}"))),
        }
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        let t = self.next("a number")?;
        match t.tok {
            Tok::Number(s) => parse_rational(&s).ok_or_else(|| syntax(t.line, t.col, format!("malformed number `{s}`"))),
            other => Err(syntax(t.line, t.col, format!("expected a number, found {other}"))),
        }
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        let (line, col) = self.here();
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Value::Word(s))
            }
            Some(Tok::Number(s)) => {
                let r = self.number()?;
                Ok(Value::Number(r, s))
            }
            Some(Tok::LBracket) => self.matrix().map(Value::Matrix),
            Some(other) => Err(syntax(line, col, format!("expected a value, found {other}"))),
            None => Err(syntax(line, col, "unexpected end of input, expected a value")),
        }
    }

    fn matrix(&mut self) -> Result<Vec<Vec<Rational>>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut rows = Vec::new();
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::RBracket)) {
            self.pos += 1;
            return Ok(rows);
        }
        loop {
            self.expect(Tok::LBracket)?;
            let mut row = Vec::new();
            if !matches!(self.peek().map(|t| &t.tok), Some(Tok::RBracket)) {
                loop {
                    row.push(self.number()?);
                    let t = self.next("`,` or `]`")?;
                    match t.tok {
                        Tok::Comma => continue,
                        Tok::RBracket => break,
                        other => return Err(syntax(t.line, t.col, format!("expected `,` or `]`, found {other}"))),
                    }
                }
            } else {
                self.pos += 1;
            }
            rows.push(row);
            let t = self.next("`,` or `]`")?;
            match t.tok {
                Tok::Comma => continue,
                Tok::RBracket => break,
                other => return Err(syntax(t.line, t.col, format!("expected `,` or `]`, found {other}"))),
            }
        }
        Ok(rows)
    }
}

struct Entry {
    value: Value,
    line: usize,
    col: usize,
}

/// Parses every `algebra` block in `text`, in input order.
pub fn parse_spec(text: &str) -> Result<Vec<AlgebraSpec>, ParseError> {
    let toks = tokenize(text)?;
    let end = {
        let lines = text.split('\n').collect::<Vec<_>>();
        (lines.len(), lines.last().map_or(0, |l| l.chars().count()) + 1)
    };
    let mut p = Parser { toks, pos: 0, end };
    let mut specs: Vec<AlgebraSpec> = Vec::new();
    while p.peek().is_some() {
        let (kw, line, col) = p.ident("`algebra`")?;
        if kw != "algebra" {
            return Err(syntax(line, col, format!("expected `algebra`, found `{kw}`")));
        }
        let (name, nl, nc) = p.ident("an algebra name")?;
        if specs.iter().any(|s| s.name == name) {
            return Err(invalid(nl, nc, format!("duplicate algebra name `{name}`")));
        }
        p.expect(Tok::LBrace)?;
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        loop {
            if matches!(p.peek().map(|t| &t.tok), Some(Tok::RBrace)) {
                p.pos += 1;
                break;
            }
            let (key, kl, kc) = p.ident("a key or `}`")?;
            p.expect(Tok::Eq)?;
            let value = p.value()?;
            p.expect(Tok::Semi)?;
            if entries.contains_key(&key) {
                return Err(invalid(kl, kc, format!("duplicate key `{key}`")));
            }
            entries.insert(key, Entry { value, line: kl, col: kc });
        }
        let source = build_source(&name, entries, line, col)?;
        specs.push(AlgebraSpec { name, source, line, col });
    }
    Ok(specs)
}

fn count(entries: &BTreeMap<String, Entry>, key: &str) -> Result<Option<usize>, ParseError> {
    let Some(e) = entries.get(key) else { return Ok(None) };
    match &e.value {
        Value::Number(r, text) if r.is_integer() && *r >= Rational::from_integer(0.into()) => text
            .trim_start_matches('+')
            .parse::<usize>()
            .map(Some)
            .map_err(|_| invalid(e.line, e.col, format!("`{key}` must be a non-negative integer"))),
        _ => Err(invalid(e.line, e.col, format!("`{key}` must be a non-negative integer"))),
    }
}

fn build_source(
    name: &str,
    entries: BTreeMap<String, Entry>,
    line: usize,
    col: usize,
) -> Result<SpecSource, ParseError> {
    let constructor_keys = ["family", "p", "q"];
    let is_constructor = entries.contains_key("family");
    for (key, e) in &entries {
        let known = if is_constructor {
            constructor_keys.contains(&key.as_str())
        } else {
            key == "dim_v" || key == "dim_z" || matrix_index(key).is_some()
        };
        if !known {
            return Err(invalid(e.line, e.col, format!("unexpected key `{key}` in algebra `{name}`")));
        }
    }
    if is_constructor {
        let fam = &entries["family"];
        let family = match &fam.value {
            Value::Word(w) => Family::from_symbol(w),
            _ => None,
        }
        .ok_or_else(|| invalid(fam.line, fam.col, "family must be one of C, H, O"))?;
        let p = count(&entries, "p")?.ok_or_else(|| invalid(line, col, format!("algebra `{name}` is missing `p`")))?;
        let q = count(&entries, "q")?.unwrap_or(0);
        let params = HTypeParams::new(family, p, q).map_err(|_| invalid(line, col, "p + q ≥ 1 required"))?;
        return Ok(SpecSource::Constructor(params));
    }
    let n = count(&entries, "dim_v")?.ok_or_else(|| invalid(line, col, format!("algebra `{name}` is missing `dim_v`")))?;
    let m = count(&entries, "dim_z")?.ok_or_else(|| invalid(line, col, format!("algebra `{name}` is missing `dim_z`")))?;
    let mut mats = Vec::with_capacity(m);
    for a in 1..=m {
        let key = format!("J{a}");
        let e = entries
            .get(&key)
            .ok_or_else(|| invalid(line, col, format!("algebra `{name}` is missing `{key}`")))?;
        let Value::Matrix(rows) = &e.value else {
            return Err(invalid(e.line, e.col, format!("`{key}` must be a matrix")));
        };
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(invalid(e.line, e.col, format!("`{key}` must be {n}x{n}")));
        }
        let mat = if n == 0 {
            Matrix::zeros(0, 0)
        } else {
            Matrix::from_rows(rows.clone()).expect("rectangular")
        };
        if let Some((i, j)) = mat.skew_violation() {
            return Err(invalid(
                e.line,
                e.col,
                format!("`{key}` is not skew-symmetric: entry ({}, {}) differs from minus entry ({}, {})", i + 1, j + 1, j + 1, i + 1),
            ));
        }
        mats.push(mat);
    }
    for (key, e) in &entries {
        if let Some(a) = matrix_index(key) {
            if a == 0 || a > m {
                return Err(invalid(e.line, e.col, format!("`{key}` exceeds dim_z = {m}")));
            }
        }
    }
    Ok(SpecSource::Raw { n, mats })
}

fn matrix_index(key: &str) -> Option<usize> {
    key.strip_prefix('J')?.parse().ok()
}

/// Output formats for [`export`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// This text format, with every algebra written as raw matrices.
    Spec,
    /// JSON with J matrices and sparse structure constants.
    Json,
}

pub fn export(specs: &[AlgebraSpec], format: ExportFormat) -> String {
    match format {
        ExportFormat::Spec => export_spec(specs),
        ExportFormat::Json => {
            let algebras: Vec<serde_json::Value> = specs.iter().map(export_json).collect();
            let doc = serde_json::json!({ "schema": 1, "algebras": algebras });
            let mut s = serde_json::to_string_pretty(&doc).expect("json serialization");
            s.push('\n');
            s
        }
    }
}

fn export_spec(specs: &[AlgebraSpec]) -> String {
    let mut out = String::new();
    for spec in specs {
        if let SpecSource::Constructor(p) = &spec.source {
            let _ = writeln!(out, "# {p}");
        }
        let _ = writeln!(out, "algebra {} {{", spec.name);
        let _ = writeln!(out, "    dim_v = {};", spec.dim_v());
        let _ = writeln!(out, "    dim_z = {};", spec.dim_z());
        for (a, m) in spec.raw_matrices().iter().enumerate() {
            let rows: Vec<String> = m
                .to_rows()
                .iter()
                .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
                .collect();
            let _ = writeln!(out, "    J{} = [{}];", a + 1, rows.join(", "));
        }
        out.push_str("}\n");
    }
    out
}

fn export_json(spec: &AlgebraSpec) -> serde_json::Value {
    let mats = spec.raw_matrices();
    let j: Vec<Vec<Vec<String>>> = mats
        .iter()
        .map(|m| m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect())
        .collect();
    // [i, j, a, value] with A[a][i][j] = ⟨[e_i, e_j], f_a⟩, 1-based.
    let mut structure = Vec::new();
    for (a, m) in mats.iter().enumerate() {
        for i in 0..m.rows() {
            for k in 0..m.cols() {
                let v = &m[(i, k)];
                if !num_traits::Zero::is_zero(v) {
                    structure.push(serde_json::json!([i + 1, k + 1, a + 1, v.to_string()]));
                }
            }
        }
    }
    let mut obj = serde_json::json!({
        "name": spec.name,
        "dim-v": spec.dim_v(),
        "dim-z": spec.dim_z(),
        "j": j,
        "structure-constants": structure,
    });
    if let SpecSource::Constructor(p) = &spec.source {
        obj["constructor"] = serde_json::json!({ "family": p.family(), "p": p.p(), "q": p.q() });
    }
    obj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn parses_constructor_block() {
        let specs = parse_spec("algebra A { family = H; p = 1; q = 1; }").unwrap();
        assert_eq!(specs.len(), 1);
        assert_eq!(specs[0].name, "A");
        assert_eq!(
            specs[0].source,
            SpecSource::Constructor(HTypeParams::new(Family::Quaternion, 1, 1).unwrap())
        );
    }

    #[test]
    fn parses_raw_block() {
        let specs = parse_spec("algebra B { dim_v = 2; dim_z = 2; J1 = [[0,1],[-1,0]]; J2 = [[0,-1],[1,0]]; }").unwrap();
        let SpecSource::Raw { n, mats } = &specs[0].source else { panic!() };
        assert_eq!(*n, 2);
        assert_eq!(mats[0], Matrix::from_i64_rows(&[&[0, 1], &[-1, 0]]));
        assert_eq!(mats[1][(1, 0)], int::<Rational>(1));
    }

    #[test]
    fn rejects_empty_module_count() {
        let err = parse_spec("algebra C { family = H; p = 0; q = 0; }").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Validation);
        assert!(err.message.contains("p + q ≥ 1 required"));
        assert_eq!((err.line, err.col), (1, 1));
    }

    #[test]
    fn reports_position_of_syntax_errors() {
        let err = parse_spec("algebra A {\n  family = H\n  p = 1;\n}").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
        assert_eq!((err.line, err.col), (3, 3));
    }

    #[test]
    fn reports_non_skew_entry() {
        let err = parse_spec("algebra X { dim_v = 2; dim_z = 1; J1 = [[0,1],[1,0]]; }").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Validation);
        assert!(err.message.contains("entry (1, 2)"), "{}", err.message);
    }

    #[test]
    fn reports_dimension_mismatch() {
        let err = parse_spec("algebra X { dim_v = 3; dim_z = 1; J1 = [[0,1],[-1,0]]; }").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Validation);
        assert!(err.message.contains("3x3"));
        let err = parse_spec("algebra X { dim_v = 2; dim_z = 2; J1 = [[0,1],[-1,0]]; }").unwrap_err();
        assert!(err.message.contains("missing `J2`"));
    }

    #[test]
    fn fractions_decimals_and_comments() {
        let text = "# comment\nalgebra R { // trailing\n dim_v = 2; dim_z = 1; J1 = [[0, 1/2], [-0.5, 0]]; }";
        let specs = parse_spec(text).unwrap();
        let m = &specs[0].raw_matrices()[0];
        assert_eq!(m[(0, 1)], Rational::new(1.into(), 2.into()));
    }

    #[test]
    fn unicode_family_symbols() {
        let specs = parse_spec("algebra O { family = 𝕆; p = 2; }").unwrap();
        assert_eq!(specs[0].dim_v(), 16);
        assert_eq!(specs[0].dim_z(), 7);
    }

    #[test]
    fn duplicate_names_and_keys_are_rejected() {
        assert!(parse_spec("algebra A { family = C; p = 1; } algebra A { family = C; p = 2; }").is_err());
        assert!(parse_spec("algebra A { family = C; p = 1; p = 2; }").is_err());
        assert!(parse_spec("algebra A { family = C; p = 1; dim_v = 2; }").is_err());
    }

    #[test]
    fn export_then_parse_round_trips() {
        let text = "algebra A { family = H; p = 1; q = 1; }\nalgebra B { dim_v = 2; dim_z = 1; J1 = [[0, 3/4], [-3/4, 0]]; }";
        let specs = parse_spec(text).unwrap();
        let again = parse_spec(&export(&specs, ExportFormat::Spec)).unwrap();
        assert_eq!(again.len(), 2);
        for (a, b) in specs.iter().zip(&again) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.raw_matrices(), b.raw_matrices());
        }
        let json: serde_json::Value = serde_json::from_str(&export(&specs, ExportFormat::Json)).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["algebras"][0]["dim-v"], 8);
        assert_eq!(json["algebras"][1]["structure-constants"][0], serde_json::json!([1, 2, 1, "3/4"]));
    }
}
