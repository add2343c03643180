//! Expression parsing and canonical rendering.
//!
//! Grammar (whitespace insignificant, explicit `*`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' INT)?
//! atom   := INT | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers match `[A-Za-z][A-Za-z0-9_]*`. Parsed values are reduced
//! rational functions; [`parse_poly`] additionally requires a constant
//! denominator.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::CurveParam;
use crate::surface::Classification;
use crate::poly::{fmt_q, MPoly, PolyError, RatFn, VarSet, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown variable `{name}`")]
    UnknownVariable { line: usize, col: usize, name: String },
    #[error("{line}:{col}: exponent must be a nonnegative integer")]
    BadExponent { line: usize, col: usize },
    #[error("{line}:{col}: division by zero")]
    DivisionByZero { line: usize, col: usize },
    #[error("expression is not a polynomial (non-constant denominator)")]
    NotPolynomial,
    #[error("expected 3 comma-separated coordinates, found {0}")]
    WrongArity(usize),
    #[error("more than one parameter: found `{found}` besides `{param}`")]
    MultipleParameters { param: String, found: String },
    #[error("coordinate {0} has an identically zero denominator")]
    ZeroDenominator(usize),
    #[error("malformed document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            _src: src,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek_char(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Pos)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while self.peek_char().is_some_and(char::is_whitespace) {
                self.bump();
            }
            let pos = Pos {
                line: self.line,
                col: self.col,
            };
            let Some(c) = self.peek_char() else {
                out.push((Tok::End, pos));
                return Ok(out);
            };
            if c.is_ascii_digit() {
                let mut s = String::new();
                while self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(self.bump().unwrap());
                }
                out.push((Tok::Int(s.parse().unwrap()), pos));
            } else if c.is_ascii_alphabetic() {
                let mut s = String::new();
                while self
                    .peek_char()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    s.push(self.bump().unwrap());
                }
                out.push((Tok::Ident(s), pos));
            } else if "+-*/^(),".contains(c) {
                self.bump();
                out.push((Tok::Sym(c), pos));
            } else {
                return Err(ParseError::Syntax {
                    line: pos.line,
                    col: pos.col,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
    }
}

struct Parser<'v> {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    vars: &'v VarSet,
    /// When set, identifiers outside `vars` are reported as extra parameters.
    param: Option<&'v str>,
}

impl<'v> Parser<'v> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        let p = self.pos();
        ParseError::Syntax {
            line: p.line,
            col: p.col,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<RatFn, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Tok::Sym('-') => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFn, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.next();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Sym('/') => {
                    let p = self.pos();
                    self.next();
                    let d = self.unary()?;
                    acc = acc.div(&d).map_err(|_| ParseError::DivisionByZero {
                        line: p.line,
                        col: p.col,
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFn, ParseError> {
        match self.peek() {
            Tok::Sym('-') => {
                self.next();
                Ok(self.unary()?.neg())
            }
            Tok::Sym('+') => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFn, ParseError> {
        let base = self.atom()?;
        if self.peek() != &Tok::Sym('^') {
            return Ok(base);
        }
        self.next();
        let p = self.pos();
        let bad = ParseError::BadExponent {
            line: p.line,
            col: p.col,
        };
        let e = match self.next() {
            Tok::Int(n) => n,
            Tok::Sym('-') => return Err(bad),
            Tok::Sym('(') => {
                // allow a parenthesized literal, reject anything else
                let inner = self.expr()?;
                if self.next() != Tok::Sym(')') {
                    return Err(self.syntax("expected `)`"));
                }
                match inner.constant_value() {
                    Some(c) if c.is_integer() && c >= Q::zero() => c.to_integer(),
                    _ => return Err(bad),
                }
            }
            _ => return Err(self.syntax("expected exponent")),
        };
        if self.peek() == &Tok::Sym('^') {
            return Err(self.syntax("chained `^` is ambiguous; use parentheses"));
        }
        let e: u32 = e.try_into().map_err(|_| bad)?;
        let num = base.num().pow(e);
        let den = base.den().pow(e);
        Ok(RatFn::new(num, den).expect("nonzero denominator"))
    }

    fn atom(&mut self) -> Result<RatFn, ParseError> {
        let p = self.pos();
        match self.next() {
            Tok::Int(n) => Ok(RatFn::constant(self.vars, Q::from_integer(n))),
            Tok::Ident(name) => match self.vars.index_of(&name) {
                Some(i) => Ok(RatFn::var(self.vars, i)),
                None => Err(match self.param {
                    Some(param) => ParseError::MultipleParameters {
                        param: param.to_string(),
                        found: name,
                    },
                    None => ParseError::UnknownVariable {
                        line: p.line,
                        col: p.col,
                        name,
                    },
                }),
            },
            Tok::Sym('(') => {
                let e = self.expr()?;
                match self.next() {
                    Tok::Sym(')') => Ok(e),
                    _ => {
                        self.i -= 1;
                        Err(self.syntax("expected `)`"))
                    }
                }
            }
            Tok::End => Err(ParseError::Syntax {
                line: p.line,
                col: p.col,
                msg: "unexpected end of input".into(),
            }),
            Tok::Sym(c) => Err(ParseError::Syntax {
                line: p.line,
                col: p.col,
                msg: format!("unexpected `{c}`"),
            }),
        }
    }
}

fn parse_list(text: &str, vars: &VarSet, param: Option<&str>) -> Result<Vec<RatFn>, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser {
        toks,
        i: 0,
        vars,
        param,
    };
    let mut out = vec![p.expr()?];
    while p.peek() == &Tok::Sym(',') {
        p.next();
        out.push(p.expr()?);
    }
    if p.peek() != &Tok::End {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(out)
}

/// Parse a rational-function expression over `vars`.
pub fn parse_ratfn(text: &str, vars: &VarSet) -> Result<RatFn, ParseError> {
    let mut list = parse_list(text, vars, None)?;
    if list.len() != 1 {
        return Err(ParseError::Syntax {
            line: 1,
            col: 1,
            msg: "expected a single expression".into(),
        });
    }
    Ok(list.pop().unwrap())
}

/// Parse a polynomial over `vars`.
pub fn parse_poly(text: &str, vars: &VarSet) -> Result<MPoly, ParseError> {
    let r = parse_ratfn(text, vars)?;
    if !r.den().is_one() {
        return Err(ParseError::NotPolynomial);
    }
    Ok(r.num().clone())
}

/// Parse `"c1, c2, c3"` of rational expressions in the single parameter `param`.
pub fn parse_param_triple(text: &str, param: &str) -> Result<CurveParam, ParseError> {
    let vars = VarSet::new([param]).map_err(|e| ParseError::Document(e.to_string()))?;
    let list = parse_list(text, &vars, Some(param))?;
    if list.len() != 3 {
        return Err(ParseError::WrongArity(list.len()));
    }
    let [a, b, c]: [RatFn; 3] = list.try_into().unwrap();
    Ok(CurveParam::new_unchecked([a, b, c]))
}

/// Build a triple from `{num, den}` text pairs.
pub fn param_from_pairs(pairs: &[CoordText; 3], param: &str) -> Result<CurveParam, ParseError> {
    let vars = VarSet::new([param]).map_err(|e| ParseError::Document(e.to_string()))?;
    let mut coords = Vec::new();
    for (i, p) in pairs.iter().enumerate() {
        let n = parse_poly(&p.num, &vars)?;
        let d = parse_poly(&p.den, &vars)?;
        coords.push(RatFn::new(n, d).map_err(|_| ParseError::ZeroDenominator(i))?);
    }
    let [a, b, c]: [RatFn; 3] = coords.try_into().unwrap();
    Ok(CurveParam::new_unchecked([a, b, c]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

/// Canonical rendering in either output format.
pub trait Render {
    fn render(&self, format: Format) -> String;
}

impl Render for MPoly {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_string(),
            Format::Structured => serde_json::to_string(&self.to_string()).unwrap(),
        }
    }
}

impl Render for RatFn {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_string(),
            Format::Structured => serde_json::to_string(&CoordText::from(self)).unwrap(),
        }
    }
}

impl Render for CurveParam {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_string(),
            Format::Structured => serde_json::to_string(&coord_texts(self)).unwrap(),
        }
    }
}

impl Render for ResultDocument {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Structured => self.to_json(),
        }
    }
}

/// Current structured-output schema.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordText {
    pub num: String,
    pub den: String,
}

impl From<&RatFn> for CoordText {
    fn from(r: &RatFn) -> Self {
        CoordText {
            num: r.num().to_string(),
            den: r.den().to_string(),
        }
    }
}

pub fn coord_texts(p: &CurveParam) -> [CoordText; 3] {
    let c = p.coords();
    [(&c[0]).into(), (&c[1]).into(), (&c[2]).into()]
}

pub fn q_text(c: &Q) -> String {
    fmt_q(c)
}

/// Parse a rational literal such as `-3/4`.
pub fn parse_q(s: &str) -> Result<Q, ParseError> {
    let vars = VarSet::param("_");
    parse_ratfn(s, &vars)?
        .constant_value()
        .ok_or_else(|| ParseError::Document(format!("`{s}` is not a rational constant")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateText {
    pub vector: [String; 3],
    pub s1: String,
    pub s2: String,
    pub shift: String,
    pub offset: [String; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportText {
    pub count: usize,
    pub passed: usize,
    pub failed: usize,
    pub failing_seeds: Vec<u64>,
    pub timings_ms: Vec<u64>,
}

/// Machine-readable outcome of a command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub classification: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<[CoordText; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p2: Option<[CoordText; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportText>,
    pub diagnostics: Vec<String>,
}

pub const CLASSIFICATIONS: [&str; 4] = ["plane", "cylinder", "translational", "undecided"];

impl ResultDocument {
    pub fn new(classification: &str) -> Self {
        ResultDocument {
            schema_version: SCHEMA_VERSION,
            classification: classification.to_string(),
            p1: None,
            p2: None,
            direction: None,
            certificate: None,
            report: None,
            diagnostics: Vec::new(),
        }
    }

    /// Document for a classification result; Undecided evidence becomes
    /// diagnostics.
    pub fn from_classification(c: &Classification) -> Self {
        let triple = |v: &[Q; 3]| v.clone().map(|x| q_text(&x));
        match c {
            Classification::Plane(sp) => {
                let mut d = ResultDocument::new("plane");
                d.p1 = Some(coord_texts(&sp.p1));
                d.p2 = Some(coord_texts(&sp.p2));
                d
            }
            Classification::Cylinder(a) => {
                let mut d = ResultDocument::new("cylinder");
                d.direction = Some(triple(a));
                d
            }
            Classification::Translational(sp, cert) => {
                let mut d = ResultDocument::new("translational");
                d.p1 = Some(coord_texts(&sp.p1));
                d.p2 = Some(coord_texts(&sp.p2));
                let (s1, s2) = match &cert.samples {
                    Some((a, b)) => (q_text(a), q_text(b)),
                    None => ("none".into(), "none".into()),
                };
                d.certificate = Some(CertificateText {
                    vector: triple(cert.vector.components()),
                    s1,
                    s2,
                    shift: q_text(&cert.shift),
                    offset: triple(&cert.offset),
                });
                d
            }
            Classification::Undecided(evidence) => {
                let mut d = ResultDocument::new("undecided");
                d.diagnostics = evidence.clone();
                d
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap()
    }

    /// Parse and validate against the schema.
    pub fn from_json(s: &str) -> Result<Self, ParseError> {
        let doc: ResultDocument =
            serde_json::from_str(s).map_err(|e| ParseError::Document(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<(), ParseError> {
        let bad = |m: String| Err(ParseError::Document(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!("unsupported schema_version {}", self.schema_version));
        }
        if !CLASSIFICATIONS.contains(&self.classification.as_str()) && self.classification != "report" {
            return bad(format!("unknown classification `{}`", self.classification));
        }
        for (name, p) in [("p1", &self.p1), ("p2", &self.p2)] {
            if let Some(pairs) = p {
                let param = if name == "p1" { "t1" } else { "t2" };
                param_from_pairs(pairs, param)?;
            }
        }
        if let Some(c) = &self.certificate {
            for s in c.vector.iter().chain([&c.shift]).chain(&c.offset) {
                parse_q(s)?;
            }
            match (c.s1.as_str(), c.s2.as_str()) {
                ("none", "none") => {}
                (s1, s2) => {
                    parse_q(s1)?;
                    parse_q(s2)?;
                }
            }
        }
        if let Some(d) = &self.direction {
            for s in d {
                parse_q(s)?;
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("classification: {}\n", self.classification);
        let triple = |t: &[CoordText; 3]| -> String {
            t.iter()
                .map(|c| {
                    if c.den == "1" {
                        c.num.clone()
                    } else {
                        format!("({})/({})", c.num, c.den)
                    }
                })
                .collect::<Vec<_>>()
                .join(", ")
        };
        if let Some(p) = &self.p1 {
            out += &format!("p1: {}\n", triple(p));
        }
        if let Some(p) = &self.p2 {
            out += &format!("p2: {}\n", triple(p));
        }
        if let Some(d) = &self.direction {
            out += &format!("direction: ({})\n", d.join(", "));
        }
        if let Some(c) = &self.certificate {
            out += &format!(
                "certificate: vector=({}) s1={} s2={} shift={} offset=({})\n",
                c.vector.join(", "),
                c.s1,
                c.s2,
                c.shift,
                c.offset.join(", ")
            );
        }
        if let Some(r) = &self.report {
            out += &format!(
                "report: {} instances, {} passed, {} failed\n",
                r.count, r.passed, r.failed
            );
            if !r.failing_seeds.is_empty() {
                out += &format!("failing seeds: {:?}\n", r.failing_seeds);
            }
        }
        out
    }
}

impl fmt::Display for ResultDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl From<PolyError> for ParseError {
    fn from(e: PolyError) -> Self {
        ParseError::Document(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q_frac, q_int, Monomial};

    fn sp() -> VarSet {
        VarSet::space()
    }

    #[test]
    fn parses_example_surface() {
        let f = parse_poly("x3+5*x1^2-6*x1*x2+2*x2^2", &sp()).unwrap();
        assert_eq!(f.nterms(), 4);
        assert_eq!(f.to_string(), "5*x1^2-6*x1*x2+2*x2^2+x3");
    }

    #[test]
    fn zero_and_rational_literals() {
        assert!(parse_poly("0", &sp()).unwrap().is_zero());
        let p = parse_poly("x1^2 - (1/2)*x2", &sp()).unwrap();
        assert_eq!(p.coeff(&Monomial::from_exps(vec![2, 0, 0])), q_int(1));
        assert_eq!(p.coeff(&Monomial::from_exps(vec![0, 1, 0])), q_frac(-1, 2));
        assert_eq!(p.nterms(), 2);
    }

    #[test]
    fn error_positions() {
        match parse_poly("x1 +\n  * x2", &sp()) {
            Err(ParseError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_poly("x1 + y", &sp()),
            Err(ParseError::UnknownVariable { col: 6, .. })
        ));
        assert!(matches!(parse_poly("x1^-2", &sp()), Err(ParseError::BadExponent { .. })));
        assert!(matches!(parse_poly("x1^(1/2)", &sp()), Err(ParseError::BadExponent { .. })));
        assert!(matches!(parse_poly("1/x1", &sp()), Err(ParseError::NotPolynomial)));
        assert!(matches!(parse_poly("x1/0", &sp()), Err(ParseError::DivisionByZero { .. })));
        assert!(parse_poly("x1 x2", &sp()).is_err());
    }

    #[test]
    fn param_triples() {
        let p1 = parse_param_triple("t1, (1+t1^2)/t1^2, 1/t1", "t1").unwrap();
        assert_eq!(p1.to_string(), "t1, (t1^2+1)/(t1^2), (1)/(t1)");
        let p2 = parse_param_triple("t2^2, t2^3, t2", "t2").unwrap();
        assert_eq!(p2.to_string(), "t2^2, t2^3, t2");
        let z = parse_param_triple("0, 0, 0", "t").unwrap();
        assert!(z.coords().iter().all(RatFn::is_zero));
        assert!(matches!(
            parse_param_triple("t, s, 1", "t"),
            Err(ParseError::MultipleParameters { .. })
        ));
        assert!(matches!(parse_param_triple("t, 1", "t"), Err(ParseError::WrongArity(2))));
        assert!(parse_param_triple("t, 1/(t-t), 1", "t").is_err());
    }

    #[test]
    fn render_translational_p2() {
        let p2 = parse_param_triple("t2, t2, -t2*(t2-1)", "t2").unwrap();
        assert_eq!(p2.render(Format::Text), "t2, t2, -t2^2+t2");
        assert_eq!(MPoly::zero(&sp()).render(Format::Text), "0");
    }

    #[test]
    fn document_roundtrip() {
        let mut d = ResultDocument::new("translational");
        d.p1 = Some(coord_texts(&parse_param_triple("t1, (4*t1+1)/2, -(2*t1^2+2*t1+1)/2", "t1").unwrap()));
        d.p2 = Some(coord_texts(&parse_param_triple("t2, t2, -t2^2+t2", "t2").unwrap()));
        d.certificate = Some(CertificateText {
            vector: ["1".into(), "1".into(), "1".into()],
            s1: "1".into(),
            s2: "-3".into(),
            shift: "0".into(),
            offset: ["0".into(), "0".into(), "0".into()],
        });
        d.diagnostics.push("vector (1, 1, 1) accepted".into());
        let s = d.to_json();
        let back = ResultDocument::from_json(&s).unwrap();
        assert_eq!(back.to_json(), s);
        assert!(ResultDocument::from_json(&s.replace("translational", "maybe")).is_err());
    }
}
