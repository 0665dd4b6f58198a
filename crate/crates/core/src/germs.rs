//! Polynomial map-germs: the text DSL, the normal-form catalog, and jets.
//!
//! ```text
//! curve R->R^3: t, t^2, t^3
//! surface R^2->R^3: t+s, t^2+2*s*t, t^3+3*s*t^2
//! ```
//!
//! Whitespace and newlines may appear between tokens, `#` starts a comment.
//! Coefficients are integers or quotients of constants (`3/2*s*t`).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Location, Result};
use crate::jets::{Jet, JetVector};
use crate::poly::Poly;
use crate::scalar::{self, Rational};

pub const CURVE_VARS: [&str; 1] = ["t"];
pub const SURFACE_VARS: [&str; 2] = ["t", "s"];

const MAX_EXPONENT: u32 = 64;
const MAX_DEGREE: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GermKind {
    Curve,
    Surface,
}

impl GermKind {
    pub fn source_dim(self) -> usize {
        match self {
            GermKind::Curve => 1,
            GermKind::Surface => 2,
        }
    }

    pub fn var_names(self) -> &'static [&'static str] {
        match self {
            GermKind::Curve => &CURVE_VARS,
            GermKind::Surface => &SURFACE_VARS,
        }
    }
}

/// A polynomial map-germ `(R^n, base) -> R^m`, `n` in {1, 2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapGerm {
    kind: GermKind,
    components: Vec<Poly>,
    base_point: Vec<Rational>,
}

impl MapGerm {
    pub fn new(kind: GermKind, components: Vec<Poly>) -> Result<MapGerm> {
        let n = kind.source_dim();
        if components.len() < n {
            return Err(Error::usage(format!(
                "target dimension {} is below source dimension {n}",
                components.len()
            )));
        }
        if components.iter().any(|p| p.nvars() != n) {
            return Err(Error::usage("component over the wrong variable set"));
        }
        Ok(MapGerm {
            kind,
            components,
            base_point: vec![Rational::zero(); n],
        })
    }

    pub fn curve(components: Vec<Poly>) -> Result<MapGerm> {
        MapGerm::new(GermKind::Curve, components)
    }

    pub fn surface(components: Vec<Poly>) -> Result<MapGerm> {
        MapGerm::new(GermKind::Surface, components)
    }

    pub fn with_base_point(mut self, base: Vec<Rational>) -> Result<MapGerm> {
        if base.len() != self.source_dim() {
            return Err(Error::usage("base point has the wrong dimension"));
        }
        self.base_point = base;
        Ok(self)
    }

    pub fn kind(&self) -> GermKind {
        self.kind
    }

    pub fn source_dim(&self) -> usize {
        self.kind.source_dim()
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn base_point(&self) -> &[Rational] {
        &self.base_point
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(Poly::degree).max().unwrap_or(0)
    }

    /// Components re-expanded around the base point.
    pub fn recentered_components(&self) -> Vec<Poly> {
        let n = self.source_dim();
        if self.base_point.iter().all(Rational::is_zero) {
            return self.components.clone();
        }
        let shift: Vec<Poly> = (0..n)
            .map(|i| Poly::var(n, i).add(&Poly::constant(n, self.base_point[i].clone())))
            .collect();
        self.components.iter().map(|p| p.compose(&shift)).collect()
    }

    /// Taylor expansion at the base point, truncated at order `k`.
    pub fn to_jets(&self, k: u32) -> JetVector {
        self.recentered_components()
            .iter()
            .map(|p| p.to_jet(k))
            .collect()
    }

    /// Jets at an order large enough to hold the germ exactly.
    pub fn to_exact_jets(&self) -> JetVector {
        self.to_jets(self.degree().max(1))
    }

    pub fn value_at_base(&self) -> Vec<Rational> {
        self.components
            .iter()
            .map(|p| p.eval(&self.base_point))
            .collect()
    }

    /// Component list `(p1, p2, ...)`.
    pub fn tuple_text(&self) -> String {
        let names = self.kind.var_names();
        let parts: Vec<String> = self.components.iter().map(|p| p.to_text(names)).collect();
        format!("({})", parts.join(", "))
    }

    /// DSL text accepted by [`parse_germ`].
    pub fn to_canonical(&self) -> String {
        let names = self.kind.var_names();
        let parts: Vec<String> = self.components.iter().map(|p| p.to_text(names)).collect();
        let (kind, src) = match self.kind {
            GermKind::Curve => ("curve", "R"),
            GermKind::Surface => ("surface", "R^2"),
        };
        format!(
            "{kind} {src}->R^{}: {}",
            self.target_dim(),
            parts.join(", ")
        )
    }

    /// Builds a germ from jets, reading them as polynomials.
    pub fn from_jets(kind: GermKind, jets: &[Jet]) -> Result<MapGerm> {
        MapGerm::new(kind, jets.iter().map(Poly::from_jet).collect())
    }
}

impl fmt::Display for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

/// Taylor expansion of `g` at `base` (source coordinates).
pub fn germ_to_jet(g: &MapGerm, order: u32, base: &[Rational]) -> Result<JetVector> {
    Ok(g.clone().with_base_point(base.to_vec())?.to_jets(order))
}

// Normal forms.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormalFormTag {
    CuspidalEdge,
    Swallowtail,
    FoldedUmbrella,
    OpenSwallowtail,
    OpenFoldedUmbrella,
    WhitneyCusp,
    Fold,
    MondSurface,
}

impl NormalFormTag {
    pub const ALL: [NormalFormTag; 8] = [
        NormalFormTag::CuspidalEdge,
        NormalFormTag::Swallowtail,
        NormalFormTag::FoldedUmbrella,
        NormalFormTag::OpenSwallowtail,
        NormalFormTag::OpenFoldedUmbrella,
        NormalFormTag::WhitneyCusp,
        NormalFormTag::Fold,
        NormalFormTag::MondSurface,
    ];

    pub fn min_ambient(self) -> usize {
        match self {
            NormalFormTag::WhitneyCusp | NormalFormTag::Fold => 2,
            NormalFormTag::CuspidalEdge
            | NormalFormTag::Swallowtail
            | NormalFormTag::FoldedUmbrella
            | NormalFormTag::MondSurface => 3,
            NormalFormTag::OpenSwallowtail | NormalFormTag::OpenFoldedUmbrella => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NormalFormTag::CuspidalEdge => "CuspidalEdge",
            NormalFormTag::Swallowtail => "Swallowtail",
            NormalFormTag::FoldedUmbrella => "FoldedUmbrella",
            NormalFormTag::OpenSwallowtail => "OpenSwallowtail",
            NormalFormTag::OpenFoldedUmbrella => "OpenFoldedUmbrella",
            NormalFormTag::WhitneyCusp => "WhitneyCusp",
            NormalFormTag::Fold => "Fold",
            NormalFormTag::MondSurface => "MondSurface",
        }
    }

    pub fn from_name(s: &str) -> Option<NormalFormTag> {
        NormalFormTag::ALL.into_iter().find(|t| t.name() == s)
    }
}

/// Normal form with target dimension `m`, padded with zero components.
pub fn normal_form(tag: NormalFormTag, m: usize) -> Result<MapGerm> {
    if m < tag.min_ambient() {
        return Err(Error::InvalidAmbient {
            class: tag.name().to_string(),
            dim: m,
        });
    }
    let comps: &[&str] = match tag {
        NormalFormTag::CuspidalEdge => &["t+s", "t^2+2*s*t", "t^3+3*s*t^2"],
        NormalFormTag::Swallowtail => &["t^2+s", "t^3+3/2*s*t", "t^4+2*s*t^2"],
        NormalFormTag::FoldedUmbrella => &["t+s", "t^2+2*s*t", "t^4+4*s*t^3"],
        NormalFormTag::OpenSwallowtail => &["t^2+s", "t^3+3/2*s*t", "t^4+2*s*t^2", "t^5+5/2*s*t^3"],
        NormalFormTag::OpenFoldedUmbrella => &["t+s", "t^2+2*s*t", "t^4+4*s*t^3", "t^5+5*s*t^4"],
        NormalFormTag::WhitneyCusp => &["t^2+s", "t^3+3/2*s*t"],
        NormalFormTag::Fold => &["t", "1/2*s^2"],
        NormalFormTag::MondSurface => &["t+s", "t^3+3*s*t^2", "t^4+4*s*t^3"],
    };
    let mut polys: Vec<Poly> = comps
        .iter()
        .map(|c| parse_poly(c, &SURFACE_VARS).expect("catalog entries parse"))
        .collect();
    polys.resize(m, Poly::zero(2));
    MapGerm::surface(polys)
}

// Lexer.

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn perr(at: Location, message: impl Into<String>) -> Error {
    Error::Parse {
        at,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Location)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let at = Location { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                return Err(perr(
                    at,
                    "decimal literals are not exact rationals; write a fraction such as 3/2",
                ));
            }
            let digits: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Int(digits.parse().expect("digits")), at));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), at));
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            col += 2;
            out.push((Tok::Arrow, at));
            continue;
        }
        if "+-*/^(),:".contains(c) {
            i += 1;
            col += 1;
            out.push((Tok::Sym(c), at));
            continue;
        }
        return Err(perr(at, format!("unexpected character `{c}`")));
    }
    out.push((Tok::Eof, Location { line, column: col }));
    Ok(out)
}

// Parser.

struct Parser<'a> {
    toks: Vec<(Tok, Location)>,
    pos: usize,
    vars: &'a [&'a str],
    /// Variables that are valid elsewhere but not here (for diagnostics).
    foreign: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn new(text: &str, vars: &'a [&'a str], foreign: &'a [&'a str]) -> Result<Parser<'a>> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            vars,
            foreign,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn loc(&self) -> Location {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Location) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.bump() {
            (Tok::Sym(d), _) if d == c => Ok(()),
            (t, at) => Err(perr(at, format!("expected `{c}`, found {t}"))),
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<()> {
        match self.bump() {
            (Tok::Ident(s), _) if s == name => Ok(()),
            (t, at) => Err(perr(at, format!("expected `{name}`, found {t}"))),
        }
    }

    fn expect_int(&mut self) -> Result<(BigInt, Location)> {
        match self.bump() {
            (Tok::Int(n), at) => Ok((n, at)),
            (t, at) => Err(perr(at, format!("expected an integer, found {t}"))),
        }
    }

    fn expect_eof(&mut self) -> Result<()> {
        match self.bump() {
            (Tok::Eof, _) => Ok(()),
            (t, at) => Err(perr(at, format!("unexpected {t} after the last component"))),
        }
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn poly_list(&mut self) -> Result<Vec<Poly>> {
        let mut out = vec![self.expr()?];
        while self.peek() == &Tok::Sym(',') {
            self.bump();
            if matches!(self.peek(), Tok::Eof | Tok::Sym(',')) {
                return Err(perr(self.loc(), "expected a polynomial after `,`"));
            }
            out.push(self.expr()?);
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Tok::Sym('+') => {
                self.bump();
                self.term()?
            }
            Tok::Sym('-') => {
                self.bump();
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    let at = self.loc();
                    self.bump();
                    let rhs = self.unary()?;
                    check_degree(acc.degree() + rhs.degree(), at)?;
                    acc = acc.mul(&rhs);
                }
                Tok::Sym('/') => {
                    let at = self.loc();
                    self.bump();
                    let d = self.unary()?;
                    let c = d.as_constant().ok_or_else(|| {
                        perr(
                            at,
                            "division by a non-constant; components must be polynomials",
                        )
                    })?;
                    if c.is_zero() {
                        return Err(perr(at, "division by zero"));
                    }
                    acc = acc.scale(&(scalar::one() / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.peek() == &Tok::Sym('-') {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == &Tok::Sym('^') {
            self.bump();
            let (n, at) = self.expect_int()?;
            let k = n
                .to_u32()
                .filter(|&k| k <= MAX_EXPONENT)
                .ok_or_else(|| perr(at, format!("exponent exceeds {MAX_EXPONENT}")))?;
            check_degree(base.degree() * k, at)?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let n = self.nvars();
        match self.bump() {
            (Tok::Int(v), _) => Ok(Poly::constant(n, Rational::from_integer(v))),
            (Tok::Ident(name), at) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    Ok(Poly::var(n, i))
                } else if self.foreign.contains(&name.as_str()) {
                    Err(perr(
                        at,
                        format!(
                            "variable `{name}` is not allowed here (variables: {})",
                            self.vars.join(", ")
                        ),
                    ))
                } else {
                    Err(perr(at, format!("unknown identifier `{name}`")))
                }
            }
            (Tok::Sym('('), _) => {
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            (t, at) => Err(perr(at, format!("expected a term, found {t}"))),
        }
    }
}

fn check_degree(d: u32, at: Location) -> Result<()> {
    if d > MAX_DEGREE {
        return Err(perr(at, format!("degree exceeds {MAX_DEGREE}")));
    }
    Ok(())
}

/// Parses germ DSL text.
pub fn parse_germ(text: &str) -> Result<MapGerm> {
    let mut header = Parser::new(text, &[], &[])?;
    let kind = match header.bump() {
        (Tok::Ident(s), _) if s == "curve" => GermKind::Curve,
        (Tok::Ident(s), _) if s == "surface" => GermKind::Surface,
        (t, at) => {
            return Err(perr(
                at,
                format!("expected `curve` or `surface`, found {t}"),
            ));
        }
    };
    header.expect_ident("R")?;
    let src_at = header.loc();
    let src = if header.peek() == &Tok::Sym('^') {
        header.bump();
        header.expect_int()?.0
    } else {
        BigInt::from(1)
    };
    if src != BigInt::from(kind.source_dim()) {
        return Err(perr(
            src_at,
            match kind {
                GermKind::Curve => "a curve has source `R`",
                GermKind::Surface => "a surface has source `R^2`",
            },
        ));
    }
    match header.bump() {
        (Tok::Arrow, _) => {}
        (t, at) => return Err(perr(at, format!("expected `->`, found {t}"))),
    }
    header.expect_ident("R")?;
    header.expect_sym('^')?;
    let (m, m_at) = header.expect_int()?;
    let m = m
        .to_usize()
        .filter(|&m| m >= kind.source_dim() && m <= 64)
        .ok_or_else(|| {
            perr(
                m_at,
                "target dimension must be between the source dimension and 64",
            )
        })?;
    header.expect_sym(':')?;

    let mut body = Parser {
        toks: header.toks,
        pos: header.pos,
        vars: kind.var_names(),
        foreign: &SURFACE_VARS,
    };
    let list_at = body.loc();
    let comps = body.poly_list()?;
    body.expect_eof()?;
    if comps.len() != m {
        return Err(perr(
            list_at,
            format!("declared R^{m} but found {} components", comps.len()),
        ));
    }
    MapGerm::new(kind, comps)
}

/// Parses a single polynomial over the given variable names.
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<Poly> {
    let mut p = Parser::new(text, vars, &[])?;
    let out = p.expr()?;
    p.expect_eof()?;
    Ok(out)
}

/// Parses a comma-separated polynomial list.
pub fn parse_poly_list(text: &str, vars: &[&str]) -> Result<Vec<Poly>> {
    let mut p = Parser::new(text, vars, &[])?;
    let out = p.poly_list()?;
    p.expect_eof()?;
    Ok(out)
}
