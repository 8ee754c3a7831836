//! The algebra description language.
//!
//! ```text
//! algebra NAME { gen IDENT : INT ; ...  d IDENT = POLY ; ... }
//! lie NAME { dim INT ; [Xi, Xj] = POLY ; ... }
//! fibration NAME { base = NAME ; fiber = NAME ; d IDENT = POLY ; ... }
//! ring NAME { gen IDENT : INT ; ...  rel POLY ; ...  top INT ; }
//! ```
//!
//! POLY uses `+ - * ^`, rational literals `p/q`, parentheses, and declared
//! identifiers. `#` starts a line comment. Omitted differentials are zero in
//! `algebra` blocks; in `fibration` blocks an omitted fiber differential
//! keeps the fiber's own differential (the product extension).

use std::collections::BTreeMap;
use std::fmt;

use cdga_core::scalar;
use cdga_core::{
    Cdga, Generators, LieAlgebraSpec, Polynomial, PresentedRing, RelativeModel, Scalar,
};

/// A parse or resolution error with a source position and, for token-level
/// failures, the set of expected tokens.
#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        message: message.into(),
        expected: vec![],
    })
}

// ---- lexer ----

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Semi,
    Colon,
    Comma,
    Eq,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&c) = chars.peek() {
                    if let Some(d) = c.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(d as u64))
                            .ok_or_else(|| ParseError {
                                line: tline,
                                col: tcol,
                                message: "integer literal too large".into(),
                                expected: vec![],
                            })?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Int(n),
                    line: tline,
                    col: tcol,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Ident(s),
                    line: tline,
                    col: tcol,
                });
            }
            _ => {
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ';' => Tok::Semi,
                    ':' => Tok::Colon,
                    ',' => Tok::Comma,
                    '=' => Tok::Eq,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    other => {
                        return err(tline, tcol, format!("unexpected character `{other}`"));
                    }
                };
                chars.next();
                col += 1;
                out.push(Spanned {
                    tok,
                    line: tline,
                    col: tcol,
                });
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

// ---- polynomial AST ----

#[derive(Debug, Clone, PartialEq)]
pub enum PolyAst {
    Number(Scalar),
    Var(String, usize, usize),
    Pow(Box<PolyAst>, u32),
    Mul(Box<PolyAst>, Box<PolyAst>),
    Add(Box<PolyAst>, Box<PolyAst>),
    Sub(Box<PolyAst>, Box<PolyAst>),
    Neg(Box<PolyAst>),
}

impl PolyAst {
    /// Evaluate against a generator set; unknown identifiers carry their
    /// source position into the error.
    pub fn eval(&self, gens: &Generators) -> Result<Polynomial, ParseError> {
        match self {
            PolyAst::Number(c) => Ok(Polynomial::constant(c.clone())),
            PolyAst::Var(name, line, col) => match gens.find(name) {
                Some(id) => Polynomial::generator(gens, id).map_err(|e| ParseError {
                    line: *line,
                    col: *col,
                    message: e.to_string(),
                    expected: vec![],
                }),
                None => err(*line, *col, format!("unknown identifier `{name}`")),
            },
            PolyAst::Pow(base, exp) => {
                let b = base.eval(gens)?;
                b.pow(gens, *exp).map_err(|e| ParseError {
                    line: 0,
                    col: 0,
                    message: e.to_string(),
                    expected: vec![],
                })
            }
            PolyAst::Mul(a, b) => {
                let pa = a.eval(gens)?;
                let pb = b.eval(gens)?;
                pa.mul(gens, &pb).map_err(|e| ParseError {
                    line: 0,
                    col: 0,
                    message: e.to_string(),
                    expected: vec![],
                })
            }
            PolyAst::Add(a, b) => Ok(a.eval(gens)?.add(&b.eval(gens)?)),
            PolyAst::Sub(a, b) => Ok(a.eval(gens)?.sub(&b.eval(gens)?)),
            PolyAst::Neg(a) => Ok(a.eval(gens)?.neg()),
        }
    }
}

// ---- document AST ----

#[derive(Debug, Clone)]
pub struct AlgebraAst {
    pub name: String,
    pub gens: Vec<(String, u32, usize, usize)>,
    pub diffs: Vec<(String, PolyAst, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct LieAst {
    pub name: String,
    pub dim: usize,
    pub brackets: Vec<(usize, usize, PolyAst, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct FibrationAst {
    pub name: String,
    pub base: (String, usize, usize),
    pub fiber: (String, usize, usize),
    pub diffs: Vec<(String, PolyAst, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct RingAst {
    pub name: String,
    pub gens: Vec<(String, u32, usize, usize)>,
    pub rels: Vec<(PolyAst, usize, usize)>,
    pub top: Option<(u32, usize, usize)>,
}

#[derive(Debug, Clone)]
pub enum ItemAst {
    Algebra(AlgebraAst),
    Lie(LieAst),
    Fibration(FibrationAst),
    Ring(RingAst),
}

impl ItemAst {
    pub fn name(&self) -> &str {
        match self {
            ItemAst::Algebra(a) => &a.name,
            ItemAst::Lie(l) => &l.name,
            ItemAst::Fibration(f) => &f.name,
            ItemAst::Ring(r) => &r.name,
        }
    }
}

const RESERVED: &[&str] = &[
    "algebra",
    "lie",
    "fibration",
    "ring",
    "gen",
    "d",
    "dim",
    "rel",
    "top",
    "base",
    "fiber",
];

// ---- parser ----

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError {
            line: t.line,
            col: t.col,
            message: format!("unexpected {}", t.tok),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            self.unexpected(&[what])
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize, usize), ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                let t = self.advance();
                Ok((s, t.line, t.col))
            }
            _ => self.unexpected(&[what]),
        }
    }

    fn fresh_ident(&mut self, what: &str) -> Result<(String, usize, usize), ParseError> {
        let (s, line, col) = self.ident(what)?;
        if RESERVED.contains(&s.as_str()) {
            return err(line, col, format!("`{s}` is a reserved word"));
        }
        Ok((s, line, col))
    }

    fn int(&mut self, what: &str) -> Result<(u64, usize, usize), ParseError> {
        match self.peek().tok {
            Tok::Int(n) => {
                let t = self.advance();
                Ok((n, t.line, t.col))
            }
            _ => self.unexpected(&[what]),
        }
    }

    fn document(&mut self) -> Result<Vec<ItemAst>, ParseError> {
        let mut items = Vec::new();
        loop {
            match self.peek().tok.clone() {
                Tok::Eof => return Ok(items),
                Tok::Ident(kw) => match kw.as_str() {
                    "algebra" => items.push(ItemAst::Algebra(self.algebra_block()?)),
                    "lie" => items.push(ItemAst::Lie(self.lie_block()?)),
                    "fibration" => items.push(ItemAst::Fibration(self.fibration_block()?)),
                    "ring" => items.push(ItemAst::Ring(self.ring_block()?)),
                    _ => return self.unexpected(&["`algebra`", "`lie`", "`fibration`", "`ring`"]),
                },
                _ => return self.unexpected(&["`algebra`", "`lie`", "`fibration`", "`ring`"]),
            }
        }
    }

    fn algebra_block(&mut self) -> Result<AlgebraAst, ParseError> {
        self.advance(); // `algebra`
        let (name, _, _) = self.fresh_ident("block name")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut gens = Vec::new();
        let mut diffs = Vec::new();
        loop {
            match self.peek().tok.clone() {
                Tok::RBrace => {
                    self.advance();
                    return Ok(AlgebraAst { name, gens, diffs });
                }
                Tok::Ident(kw) if kw == "gen" => {
                    self.advance();
                    let (gname, line, col) = self.fresh_ident("generator name")?;
                    self.expect(Tok::Colon, "`:`")?;
                    let (deg, dline, dcol) = self.int("degree")?;
                    if deg == 0 {
                        return err(dline, dcol, "generator degree must be >= 1");
                    }
                    self.expect(Tok::Semi, "`;`")?;
                    gens.push((gname, deg as u32, line, col));
                }
                Tok::Ident(kw) if kw == "d" => {
                    self.advance();
                    let (gname, line, col) = self.fresh_ident("generator name")?;
                    self.expect(Tok::Eq, "`=`")?;
                    let poly = self.poly()?;
                    self.expect(Tok::Semi, "`;`")?;
                    diffs.push((gname, poly, line, col));
                }
                _ => return self.unexpected(&["`gen`", "`d`", "`}`"]),
            }
        }
    }

    fn lie_block(&mut self) -> Result<LieAst, ParseError> {
        self.advance(); // `lie`
        let (name, _, _) = self.fresh_ident("block name")?;
        self.expect(Tok::LBrace, "`{`")?;
        // dim first
        match self.peek().tok.clone() {
            Tok::Ident(kw) if kw == "dim" => {
                self.advance();
            }
            _ => return self.unexpected(&["`dim`"]),
        }
        let (dim, dline, dcol) = self.int("dimension")?;
        if dim == 0 {
            return err(dline, dcol, "dimension must be >= 1");
        }
        self.expect(Tok::Semi, "`;`")?;
        let mut brackets = Vec::new();
        loop {
            match self.peek().tok.clone() {
                Tok::RBrace => {
                    self.advance();
                    return Ok(LieAst {
                        name,
                        dim: dim as usize,
                        brackets,
                    });
                }
                Tok::LBracket => {
                    let open = self.advance();
                    let (i, _, _) = self.basis_index(dim as usize)?;
                    self.expect(Tok::Comma, "`,`")?;
                    let (j, jline, jcol) = self.basis_index(dim as usize)?;
                    self.expect(Tok::RBracket, "`]`")?;
                    self.expect(Tok::Eq, "`=`")?;
                    let rhs = self.poly()?;
                    self.expect(Tok::Semi, "`;`")?;
                    if i >= j {
                        return err(jline, jcol, "brackets must be given as [Xi, Xj] with i < j");
                    }
                    brackets.push((i, j, rhs, open.line, open.col));
                }
                _ => return self.unexpected(&["`[`", "`}`"]),
            }
        }
    }

    /// `X<k>` with 1 <= k <= dim, 0-based on return.
    fn basis_index(&mut self, dim: usize) -> Result<(usize, usize, usize), ParseError> {
        let (s, line, col) = self.ident("basis element `X<k>`")?;
        let Some(num) = s.strip_prefix('X').and_then(|t| t.parse::<usize>().ok()) else {
            return err(line, col, format!("expected `X<k>`, got `{s}`"));
        };
        if num == 0 || num > dim {
            return err(line, col, format!("X{num} is out of range 1..={dim}"));
        }
        Ok((num - 1, line, col))
    }

    fn fibration_block(&mut self) -> Result<FibrationAst, ParseError> {
        self.advance(); // `fibration`
        let (name, _, _) = self.fresh_ident("block name")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut base = None;
        let mut fiber = None;
        let mut diffs = Vec::new();
        loop {
            match self.peek().tok.clone() {
                Tok::RBrace => {
                    let t = self.advance();
                    let Some(base) = base else {
                        return err(t.line, t.col, "fibration block is missing `base = NAME;`");
                    };
                    let Some(fiber) = fiber else {
                        return err(t.line, t.col, "fibration block is missing `fiber = NAME;`");
                    };
                    return Ok(FibrationAst {
                        name,
                        base,
                        fiber,
                        diffs,
                    });
                }
                Tok::Ident(kw) if kw == "base" || kw == "fiber" => {
                    self.advance();
                    self.expect(Tok::Eq, "`=`")?;
                    let target = self.fresh_ident("algebra name")?;
                    self.expect(Tok::Semi, "`;`")?;
                    if kw == "base" {
                        base = Some(target);
                    } else {
                        fiber = Some(target);
                    }
                }
                Tok::Ident(kw) if kw == "d" => {
                    self.advance();
                    let (gname, line, col) = self.fresh_ident("generator name")?;
                    self.expect(Tok::Eq, "`=`")?;
                    let poly = self.poly()?;
                    self.expect(Tok::Semi, "`;`")?;
                    diffs.push((gname, poly, line, col));
                }
                _ => return self.unexpected(&["`base`", "`fiber`", "`d`", "`}`"]),
            }
        }
    }

    fn ring_block(&mut self) -> Result<RingAst, ParseError> {
        self.advance(); // `ring`
        let (name, _, _) = self.fresh_ident("block name")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut gens = Vec::new();
        let mut rels = Vec::new();
        let mut top = None;
        loop {
            match self.peek().tok.clone() {
                Tok::RBrace => {
                    self.advance();
                    return Ok(RingAst {
                        name,
                        gens,
                        rels,
                        top,
                    });
                }
                Tok::Ident(kw) if kw == "gen" => {
                    self.advance();
                    let (gname, line, col) = self.fresh_ident("generator name")?;
                    self.expect(Tok::Colon, "`:`")?;
                    let (deg, dline, dcol) = self.int("degree")?;
                    if deg == 0 {
                        return err(dline, dcol, "generator degree must be >= 1");
                    }
                    self.expect(Tok::Semi, "`;`")?;
                    gens.push((gname, deg as u32, line, col));
                }
                Tok::Ident(kw) if kw == "rel" => {
                    let t = self.advance();
                    let poly = self.poly()?;
                    self.expect(Tok::Semi, "`;`")?;
                    rels.push((poly, t.line, t.col));
                }
                Tok::Ident(kw) if kw == "top" => {
                    self.advance();
                    let (deg, line, col) = self.int("top degree")?;
                    self.expect(Tok::Semi, "`;`")?;
                    top = Some((deg as u32, line, col));
                }
                _ => return self.unexpected(&["`gen`", "`rel`", "`top`", "`}`"]),
            }
        }
    }

    // poly := ['-'] term (('+'|'-') term)*
    fn poly(&mut self) -> Result<PolyAst, ParseError> {
        let mut acc = if self.peek().tok == Tok::Minus {
            self.advance();
            PolyAst::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.advance();
                    acc = PolyAst::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.advance();
                    acc = PolyAst::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<PolyAst, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.advance();
            acc = PolyAst::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    // factor := atom ['^' INT]
    fn factor(&mut self) -> Result<PolyAst, ParseError> {
        let atom = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.advance();
            let (exp, line, col) = self.int("exponent")?;
            if exp > u32::MAX as u64 {
                return err(line, col, "exponent too large");
            }
            return Ok(PolyAst::Pow(Box::new(atom), exp as u32));
        }
        Ok(atom)
    }

    // atom := RATIONAL | IDENT | '(' poly ')'
    fn atom(&mut self) -> Result<PolyAst, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.advance();
                let numer = n as i64;
                if self.peek().tok == Tok::Slash {
                    self.advance();
                    let (d, line, col) = self.int("denominator")?;
                    if d == 0 {
                        return err(line, col, "zero denominator");
                    }
                    Ok(PolyAst::Number(scalar::ratio(numer, d as i64)))
                } else {
                    Ok(PolyAst::Number(scalar::int(numer)))
                }
            }
            Tok::Ident(s) => {
                let t = self.advance();
                if RESERVED.contains(&s.as_str()) {
                    return err(t.line, t.col, format!("`{s}` is a reserved word"));
                }
                Ok(PolyAst::Var(s, t.line, t.col))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.poly()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.unexpected(&["number", "identifier", "`(`"]),
        }
    }
}

/// Parse source text into the raw block AST.
pub fn parse_ast(text: &str) -> Result<Vec<ItemAst>, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    p.document()
}

// ---- resolved documents ----

/// A named, fully resolved item.
#[derive(Debug, Clone)]
pub enum Item {
    Algebra(Cdga),
    Lie(LieAlgebraSpec),
    Fibration {
        base_name: String,
        fiber_name: String,
        model: RelativeModel,
    },
    Ring(PresentedRing),
}

impl Item {
    pub fn kind(&self) -> &'static str {
        match self {
            Item::Algebra(_) => "algebra",
            Item::Lie(_) => "lie",
            Item::Fibration { .. } => "fibration",
            Item::Ring(_) => "ring",
        }
    }
}

/// A resolved document: named items in declaration order.
#[derive(Debug, Clone)]
pub struct SpecDocument {
    pub items: Vec<(String, Item)>,
}

impl SpecDocument {
    pub fn get(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }

    pub fn names_of_kind(&self, kind: &str) -> Vec<&str> {
        self.items
            .iter()
            .filter(|(_, i)| i.kind() == kind)
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

fn build_algebra(ast: &AlgebraAst) -> Result<Cdga, ParseError> {
    let gens = Generators::new(
        ast.gens
            .iter()
            .map(|(n, d, _, _)| (n.clone(), *d))
            .collect::<Vec<_>>(),
    )
    .map_err(|e| ParseError {
        line: ast.gens.first().map_or(1, |g| g.2),
        col: ast.gens.first().map_or(1, |g| g.3),
        message: e.to_string(),
        expected: vec![],
    })?;
    let mut images = Vec::new();
    for (gname, poly, line, col) in &ast.diffs {
        let Some(id) = gens.find(gname) else {
            return err(*line, *col, format!("unknown generator `{gname}`"));
        };
        let p = poly.eval(&gens)?;
        match p.homogeneous_degree() {
            Ok(None) => {}
            Ok(Some(d)) if d == gens.degree(id) + 1 => {}
            _ => {
                return err(
                    *line,
                    *col,
                    format!(
                        "d {gname} must be homogeneous of degree {}",
                        gens.degree(id) + 1
                    ),
                )
            }
        }
        images.push((id, p));
    }
    Cdga::new(gens, images).map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: e.to_string(),
        expected: vec![],
    })
}

fn build_lie(ast: &LieAst) -> Result<LieAlgebraSpec, ParseError> {
    let mut spec = LieAlgebraSpec::abelian(ast.dim);
    // evaluate bracket right-hand sides against virtual degree-1 basis X1..Xn
    let xgens = Generators::new(
        (1..=ast.dim)
            .map(|i| (format!("X{i}"), 1))
            .collect::<Vec<_>>(),
    )
    .expect("basis generators");
    for (i, j, rhs, line, col) in &ast.brackets {
        let p = rhs.eval(&xgens)?;
        let mut coeffs: Vec<(usize, Scalar)> = Vec::new();
        for (mono, c) in p.terms() {
            if mono.word_length() != 1 {
                return err(
                    *line,
                    *col,
                    "bracket right-hand side must be a linear combination of X's",
                );
            }
            coeffs.push((mono.factors()[0].0, c.clone()));
        }
        spec.set_bracket(*i, *j, coeffs).map_err(|e| ParseError {
            line: *line,
            col: *col,
            message: e.to_string(),
            expected: vec![],
        })?;
    }
    Ok(spec)
}

fn build_ring(ast: &RingAst) -> Result<PresentedRing, ParseError> {
    let gens = Generators::new(
        ast.gens
            .iter()
            .map(|(n, d, _, _)| (n.clone(), *d))
            .collect::<Vec<_>>(),
    )
    .map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: e.to_string(),
        expected: vec![],
    })?;
    let Some((top, _, _)) = ast.top else {
        return err(1, 1, format!("ring `{}` is missing `top N;`", ast.name));
    };
    let mut rels = Vec::new();
    for (rel, line, col) in &ast.rels {
        let p = rel.eval(&gens)?;
        if p.homogeneous_degree().is_err() {
            return err(*line, *col, "relations must be homogeneous");
        }
        rels.push(p);
    }
    PresentedRing::new(gens, rels, top).map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: e.to_string(),
        expected: vec![],
    })
}

/// Resolve the block AST into models. Fibrations may reference algebra
/// blocks appearing anywhere in the document.
pub fn resolve(asts: &[ItemAst]) -> Result<SpecDocument, ParseError> {
    let mut items: Vec<(String, Item)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for ast in asts {
        if !seen.insert(ast.name().to_string()) {
            return err(1, 1, format!("duplicate item name `{}`", ast.name()));
        }
    }
    // algebras, lie algebras, rings first
    let mut algebras: BTreeMap<String, Cdga> = BTreeMap::new();
    for ast in asts {
        match ast {
            ItemAst::Algebra(a) => {
                let c = build_algebra(a)?;
                algebras.insert(a.name.clone(), c.clone());
                items.push((a.name.clone(), Item::Algebra(c)));
            }
            ItemAst::Lie(l) => items.push((l.name.clone(), Item::Lie(build_lie(l)?))),
            ItemAst::Ring(r) => items.push((r.name.clone(), Item::Ring(build_ring(r)?))),
            ItemAst::Fibration(_) => {}
        }
    }
    // then fibrations
    for ast in asts {
        let ItemAst::Fibration(f) = ast else { continue };
        let Some(base) = algebras.get(&f.base.0) else {
            return err(
                f.base.1,
                f.base.2,
                format!("unknown base algebra `{}`", f.base.0),
            );
        };
        let Some(fiber) = algebras.get(&f.fiber.0) else {
            return err(
                f.fiber.1,
                f.fiber.2,
                format!("unknown fiber algebra `{}`", f.fiber.0),
            );
        };
        let total_gens = base
            .generators()
            .concat(fiber.generators())
            .map_err(|e| ParseError {
                line: f.base.1,
                col: f.base.2,
                message: e.to_string(),
                expected: vec![],
            })?;
        let mut overrides = Vec::new();
        for (gname, poly, line, col) in &f.diffs {
            let Some(fiber_id) = fiber.generators().find(gname) else {
                return err(
                    *line,
                    *col,
                    format!("`{gname}` is not a fiber generator (base differentials are fixed)"),
                );
            };
            let p = poly.eval(&total_gens)?;
            match p.homogeneous_degree() {
                Ok(None) => {}
                Ok(Some(d)) if d == fiber.generators().degree(fiber_id) + 1 => {}
                _ => {
                    return err(
                        *line,
                        *col,
                        format!(
                            "d {gname} must be homogeneous of degree {}",
                            fiber.generators().degree(fiber_id) + 1
                        ),
                    )
                }
            }
            overrides.push((fiber_id, p));
        }
        let model =
            RelativeModel::new(base.clone(), fiber.clone(), overrides).map_err(|e| ParseError {
                line: f.base.1,
                col: f.base.2,
                message: e.to_string(),
                expected: vec![],
            })?;
        items.push((
            f.name.clone(),
            Item::Fibration {
                base_name: f.base.0.clone(),
                fiber_name: f.fiber.0.clone(),
                model,
            },
        ));
    }
    // restore declaration order
    let order: Vec<String> = asts.iter().map(|a| a.name().to_string()).collect();
    items.sort_by_key(|(n, _)| order.iter().position(|o| o == n).unwrap());
    Ok(SpecDocument { items })
}

/// Parse and resolve in one step.
pub fn parse_document(text: &str) -> Result<SpecDocument, ParseError> {
    resolve(&parse_ast(text)?)
}

/// Parse a standalone polynomial expression against a generator set (used
/// for class arguments on the command line).
pub fn parse_poly_expr(text: &str, gens: &Generators) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let ast = p.poly()?;
    if p.peek().tok != Tok::Eof {
        return p.unexpected(&["end of expression"]);
    }
    ast.eval(gens)
}

// ---- printer ----

fn print_lie_rhs(coeffs: &[Scalar]) -> String {
    use num_traits::{Signed, Zero};
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let abs = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if !scalar::is_one(&abs) {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str(&format!("X{}", k + 1));
    }
    out
}

/// Regenerate DSL text. Parsing the output reproduces the document.
pub fn print_document(doc: &SpecDocument) -> String {
    let mut out = String::new();
    for (name, item) in &doc.items {
        match item {
            Item::Algebra(c) => out.push_str(&print_algebra(name, c)),
            Item::Lie(l) => {
                out.push_str(&format!("lie {name} {{\n  dim {};\n", l.dim()));
                for ((i, j), coeffs) in l.brackets() {
                    out.push_str(&format!(
                        "  [X{}, X{}] = {};\n",
                        i + 1,
                        j + 1,
                        print_lie_rhs(coeffs)
                    ));
                }
                out.push_str("}\n");
            }
            Item::Fibration {
                base_name,
                fiber_name,
                model,
            } => {
                out.push_str(&format!(
                    "fibration {name} {{\n  base = {base_name};\n  fiber = {fiber_name};\n"
                ));
                let nb = model.base_count();
                let total_gens = model.total().generators();
                for fiber_id in 0..model.fiber().generators().len() {
                    let lifted = model
                        .fiber()
                        .d_of(fiber_id)
                        .map_gen_ids(total_gens, |g| Some(g + nb))
                        .expect("lift");
                    let actual = model.d_total_of_fiber(fiber_id);
                    if actual != &lifted {
                        out.push_str(&format!(
                            "  d {} = {};\n",
                            model.fiber().generators().name(fiber_id),
                            actual.display(total_gens)
                        ));
                    }
                }
                out.push_str("}\n");
            }
            Item::Ring(r) => {
                out.push_str(&format!("ring {name} {{\n"));
                for s in r.generators().symbols() {
                    out.push_str(&format!("  gen {}: {};\n", s.name, s.degree));
                }
                for rel in r.relations() {
                    out.push_str(&format!("  rel {};\n", rel.display(r.generators())));
                }
                out.push_str(&format!("  top {};\n}}\n", r.top_degree()));
            }
        }
        out.push('\n');
    }
    out
}

/// Print one algebra block (also used by the `ce` command).
pub fn print_algebra(name: &str, c: &Cdga) -> String {
    let mut out = format!("algebra {name} {{\n");
    for s in c.generators().symbols() {
        out.push_str(&format!("  gen {}: {};\n", s.name, s.degree));
    }
    for id in 0..c.generators().len() {
        if !c.d_of(id).is_zero() {
            out.push_str(&format!(
                "  d {} = {};\n",
                c.generators().name(id),
                c.d_of(id).display(c.generators())
            ));
        }
    }
    out.push_str("}\n");
    out
}
