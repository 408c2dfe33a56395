//! Recursive-descent parser for the input language.
//!
//! ```text
//! base point;  |  base curve [var NAME] [conj | tau A, B];  |  base sphere;  |  base presented;
//! prime NAME, ...;  function NAME = DIVISOR;  tau NAME = NAME | WORD;      (presented bases)
//! opaque POLY;                                                              (curve bases)
//! segdiv [NAME =] SEGDIV;
//! pair [NAME] dpd D = DIVISOR, h = FUNCTION;
//! pair [NAME] phs D = SEGDIV | NAME, h = FUNCTION;
//! validate [NAME]; convert [NAME]; graded [NAME] [mmax N]; classify [NAME]; equiv NAME NAME;
//! downgrade weights W, ... [labels L, ...];
//! mj verify P = POLY, r = N;  mj equiv P1 = POLY, P2 = POLY, r = N;
//! corpus [filter WORD];
//! ```
//!
//! Divisor terms are `coef*{point}`, `coef*NAME` or `coef*<poly>`;
//! segmental terms are `[a,b]*prime` or `{a}*prime` (also `[a,b](prime)`).
//! The last `;` may be omitted.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};

use phscalc_core::arith::{GaussianRational, Poly1, Rational, RationalFunction};
use phscalc_core::geometry::{Base, BaseFunction, CurveBase, FunctionWord, PresentedBase, PrimeDivisor, WeilQDivisor};
use phscalc_core::segdiv::{Segment, SegmentalDivisor};

use crate::document::{Document, PairDecl, PairDivisor, Task};
use crate::lexer::{tokenize, Tok, Token};
use crate::ParseError;

/// Arithmetic expression before it is read on a particular base.
#[derive(Clone, Debug)]
enum Expr {
    Num(GaussianRational),
    Sym(String, usize, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize, usize),
    Pow(Box<Expr>, i64),
}

#[derive(Default)]
struct PresentedDraft {
    primes: Vec<String>,
    relations: BTreeMap<String, BTreeMap<String, i64>>,
    tau_primes: BTreeMap<String, String>,
    tau_functions: BTreeMap<String, FunctionWord>,
    at: (usize, usize),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    base: Option<Base>,
    draft: Option<PresentedDraft>,
    segdivs: Vec<(String, SegmentalDivisor)>,
    pairs: Vec<PairDecl>,
    tasks: Vec<Task>,
}

pub fn parse(src: &str) -> Result<Document, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        base: None,
        draft: None,
        segdivs: Vec::new(),
        pairs: Vec::new(),
        tasks: Vec::new(),
    };
    while !p.at_eof() {
        p.statement()?;
        if !p.at_eof() {
            p.expect_sym(';')?;
        }
        while p.eat_sym(';') {}
    }
    p.finish_presented()?;
    let base = p.base.ok_or_else(|| ParseError::syntax(1, 1, "missing base declaration"))?;
    Ok(Document { base, segdivs: p.segdivs, pairs: p.pairs, tasks: p.tasks })
}

/// Parses a polynomial in a single variable with any name.
pub fn parse_poly(src: &str) -> Result<Poly1, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        base: None,
        draft: None,
        segdivs: Vec::new(),
        pairs: Vec::new(),
        tasks: Vec::new(),
    };
    let poly = p.any_var_poly()?;
    if !p.at_eof() {
        return Err(p.error("trailing input"));
    }
    Ok(poly)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError::syntax(t.line, t.col, msg)
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        if self.eat_word(w) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{w}'")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => Err(self.error("expected a name")),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat_sym('-');
        match self.peek().tok.clone() {
            Tok::Num { value, imag: false } if value.is_integer() => {
                let v = value.to_integer().to_i64().ok_or_else(|| self.error("integer out of range"))?;
                self.advance();
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.error("expected an integer")),
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let neg = self.eat_sym('-');
        if !neg {
            self.eat_sym('+');
        }
        match self.peek().tok.clone() {
            Tok::Num { value, imag: false } => {
                self.advance();
                Ok(if neg { -value } else { value })
            }
            _ => Err(self.error("expected a rational number")),
        }
    }

    fn base(&self) -> Result<&Base, ParseError> {
        self.base.as_ref().ok_or_else(|| self.error("declare the base first"))
    }

    // ---- statements ----

    fn statement(&mut self) -> Result<(), ParseError> {
        let word = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.error("expected a statement")),
        };
        if !matches!(word.as_str(), "prime" | "function" | "tau") {
            self.finish_presented()?;
        }
        self.advance();
        match word.as_str() {
            "base" => self.base_decl(),
            "prime" | "function" | "tau" => self.presented_decl(&word),
            "opaque" => self.opaque_decl(),
            "segdiv" => self.segdiv_decl(),
            "pair" => self.pair_decl(),
            "validate" => {
                let p = self.pair_ref_opt()?;
                self.tasks.push(Task::Validate(p));
                Ok(())
            }
            "convert" => {
                let p = self.pair_ref_opt()?;
                self.tasks.push(Task::Convert(p));
                Ok(())
            }
            "classify" => {
                let p = self.pair_ref_opt()?;
                self.tasks.push(Task::Classify(p));
                Ok(())
            }
            "graded" => {
                let pair = self.pair_ref_opt()?;
                let mmax = if self.eat_word("mmax") {
                    let m = self.integer()?;
                    if m < 1 {
                        return Err(self.error("mmax must be positive"));
                    }
                    Some(m)
                } else {
                    None
                };
                self.tasks.push(Task::Graded { pair, mmax });
                Ok(())
            }
            "equiv" => {
                let a = self.pair_ref()?;
                self.eat_sym(',');
                let b = self.pair_ref()?;
                self.tasks.push(Task::Equiv(a, b));
                Ok(())
            }
            "downgrade" => self.downgrade_task(),
            "mj" => self.mj_task(),
            "corpus" => {
                let filter = if self.eat_word("filter") { Some(self.ident()?) } else { None };
                self.tasks.push(Task::Corpus { filter });
                Ok(())
            }
            other => {
                self.pos -= 1;
                Err(self.error(format!("unknown statement '{other}'")))
            }
        }
    }

    fn base_decl(&mut self) -> Result<(), ParseError> {
        if self.base.is_some() {
            return Err(self.error("base declared twice"));
        }
        let at = (self.peek().line, self.peek().col);
        let kind = self.ident()?;
        let base = match kind.as_str() {
            "point" => Base::Point,
            "sphere" => Base::Presented(PresentedBase::sphere()),
            "presented" => {
                self.draft = Some(PresentedDraft { at, ..Default::default() });
                return Ok(());
            }
            "curve" => {
                let var = if self.eat_word("var") { self.ident()? } else { "w".to_string() };
                if var == "i" {
                    return Err(self.error("'i' is the imaginary unit"));
                }
                let (a, b) = if self.eat_word("tau") {
                    let a = self.constant()?;
                    self.expect_sym(',')?;
                    (a, self.constant()?)
                } else {
                    self.eat_word("conj");
                    (GaussianRational::one(), GaussianRational::zero())
                };
                let curve = CurveBase::new(a, b, var).map_err(|e| ParseError::syntax(at.0, at.1, e.to_string()))?;
                Base::Curve(curve)
            }
            _ => return Err(ParseError::syntax(at.0, at.1, format!("unknown base kind '{kind}'"))),
        };
        self.base = Some(base);
        Ok(())
    }

    fn presented_decl(&mut self, word: &str) -> Result<(), ParseError> {
        if self.draft.is_none() {
            return Err(self.error(format!("'{word}' needs 'base presented'")));
        }
        match word {
            "prime" => loop {
                let name = self.ident()?;
                let draft = self.draft.as_mut().expect("checked");
                if draft.primes.contains(&name) {
                    return Err(self.error(format!("prime {name} declared twice")));
                }
                draft.primes.push(name);
                if !self.eat_sym(',') {
                    return Ok(());
                }
            },
            "function" => {
                let name = self.ident()?;
                self.expect_sym('=')?;
                let mut rel = BTreeMap::new();
                for (p, c) in self.weil_terms()?.terms() {
                    let PrimeDivisor::Named(s) = p else {
                        return Err(self.error("relations use named primes"));
                    };
                    if !c.is_integer() {
                        return Err(self.error("principal divisors have integer coefficients"));
                    }
                    rel.insert(s.clone(), c.to_integer().to_i64().ok_or_else(|| self.error("coefficient out of range"))?);
                }
                self.draft.as_mut().expect("checked").relations.insert(name, rel);
                Ok(())
            }
            _ => {
                let (line, col) = (self.peek().line, self.peek().col);
                let name = self.ident()?;
                self.expect_sym('=')?;
                let draft = self.draft.as_ref().expect("checked");
                if draft.primes.contains(&name) {
                    let image = self.ident()?;
                    let draft = self.draft.as_mut().expect("checked");
                    if !draft.primes.contains(&image) {
                        return Err(ParseError::undeclared(line, col, image));
                    }
                    for (p, q) in [(&name, &image), (&image, &name)] {
                        if let Some(old) = draft.tau_primes.get(p) {
                            if old != q {
                                return Err(ParseError::syntax(line, col, format!("conflicting tau image for {p}")));
                            }
                        }
                    }
                    draft.tau_primes.insert(name.clone(), image.clone());
                    draft.tau_primes.insert(image, name);
                } else if draft.relations.contains_key(&name) {
                    let e = self.expr()?;
                    let w = self.word_of(&e)?;
                    self.draft.as_mut().expect("checked").tau_functions.insert(name, w);
                } else {
                    return Err(ParseError::undeclared(line, col, name));
                }
                Ok(())
            }
        }
    }

    fn finish_presented(&mut self) -> Result<(), ParseError> {
        let Some(d) = self.draft.take() else { return Ok(()) };
        let base = PresentedBase::new(d.primes, d.relations, d.tau_primes, d.tau_functions)
            .map_err(|e| ParseError::syntax(d.at.0, d.at.1, e.to_string()))?;
        self.base = Some(Base::Presented(base));
        Ok(())
    }

    fn opaque_decl(&mut self) -> Result<(), ParseError> {
        let (line, col) = (self.peek().line, self.peek().col);
        let Some(Base::Curve(curve)) = self.base.as_ref() else {
            return Err(self.error("opaque primes need a curve base"));
        };
        let var = curve.var().to_string();
        let e = self.expr()?;
        let p = self.poly_of(&e, &var)?;
        let Some(Base::Curve(curve)) = self.base.as_mut() else { unreachable!() };
        curve.declare_prime(&p).map_err(|e| ParseError::syntax(line, col, e.to_string()))?;
        Ok(())
    }

    fn segdiv_decl(&mut self) -> Result<(), ParseError> {
        self.base()?;
        let name = if matches!(self.peek_at(0), Tok::Ident(_)) && *self.peek_at(1) == Tok::Sym('=') {
            let n = self.ident()?;
            self.advance();
            n
        } else {
            format!("s{}", self.segdivs.len() + 1)
        };
        if self.segdivs.iter().any(|(n, _)| *n == name) {
            return Err(self.error(format!("segdiv {name} declared twice")));
        }
        let d = self.segdiv()?;
        self.segdivs.push((name, d));
        Ok(())
    }

    fn pair_decl(&mut self) -> Result<(), ParseError> {
        self.base()?;
        let name = if self.is_word("dpd") || self.is_word("phs") {
            format!("p{}", self.pairs.len() + 1)
        } else {
            self.ident()?
        };
        if self.pairs.iter().any(|p| p.name == name) {
            return Err(self.error(format!("pair {name} declared twice")));
        }
        let kind = self.ident()?;
        self.expect_word("D")?;
        self.expect_sym('=')?;
        let divisor = match kind.as_str() {
            "dpd" => PairDivisor::Dpd(self.weil_terms()?),
            "phs" => {
                let named = match self.peek_at(0) {
                    Tok::Ident(s) if matches!(self.peek_at(1), Tok::Sym(',')) => {
                        self.segdivs.iter().find(|(n, _)| n == s).map(|(_, d)| d.clone())
                    }
                    _ => None,
                };
                match named {
                    Some(d) => {
                        self.advance();
                        PairDivisor::Phs(d)
                    }
                    None => PairDivisor::Phs(self.segdiv()?),
                }
            }
            _ => return Err(self.error("expected 'dpd' or 'phs'")),
        };
        self.expect_sym(',')?;
        self.expect_word("h")?;
        self.expect_sym('=')?;
        let h = self.function()?;
        self.pairs.push(PairDecl { name, divisor, h });
        Ok(())
    }

    fn pair_ref(&mut self) -> Result<String, ParseError> {
        let (line, col) = (self.peek().line, self.peek().col);
        let name = self.ident()?;
        if self.pairs.iter().any(|p| p.name == name) {
            Ok(name)
        } else {
            Err(ParseError::undeclared(line, col, name))
        }
    }

    fn pair_ref_opt(&mut self) -> Result<Option<String>, ParseError> {
        match self.peek_at(0) {
            Tok::Ident(s) if s != "mmax" => Ok(Some(self.pair_ref()?)),
            // the most recent pair so far
            _ => Ok(self.pairs.last().map(|p| p.name.clone())),
        }
    }

    fn downgrade_task(&mut self) -> Result<(), ParseError> {
        self.expect_word("weights")?;
        let mut weights = vec![self.integer()?];
        while self.eat_sym(',') {
            weights.push(self.integer()?);
        }
        let mut labels = Vec::new();
        if self.eat_word("labels") {
            labels.push(self.ident()?);
            while self.eat_sym(',') {
                labels.push(self.ident()?);
            }
        }
        self.tasks.push(Task::Downgrade { weights, labels });
        Ok(())
    }

    fn mj_task(&mut self) -> Result<(), ParseError> {
        let r_value = |p: &mut Parser| -> Result<u32, ParseError> {
            p.expect_word("r")?;
            p.expect_sym('=')?;
            let r = p.integer()?;
            u32::try_from(r).ok().filter(|r| *r >= 1).ok_or_else(|| p.error("r must be a positive integer"))
        };
        if self.eat_word("verify") {
            self.expect_word("P")?;
            self.expect_sym('=')?;
            let p = self.any_var_poly()?;
            self.expect_sym(',')?;
            let r = r_value(self)?;
            self.tasks.push(Task::MjVerify { p, r });
            Ok(())
        } else if self.eat_word("equiv") {
            self.expect_word("P1")?;
            self.expect_sym('=')?;
            let p1 = self.any_var_poly()?;
            self.expect_sym(',')?;
            self.expect_word("P2")?;
            self.expect_sym('=')?;
            let p2 = self.any_var_poly()?;
            self.expect_sym(',')?;
            let r = r_value(self)?;
            self.tasks.push(Task::MjEquiv { p1, p2, r });
            Ok(())
        } else {
            Err(self.error("expected 'verify' or 'equiv'"))
        }
    }

    // ---- divisors ----

    fn prime(&mut self) -> Result<PrimeDivisor, ParseError> {
        let (line, col) = (self.peek().line, self.peek().col);
        if self.draft.is_some() {
            let name = self.ident()?;
            return if self.draft.as_ref().is_some_and(|d| d.primes.contains(&name)) {
                Ok(PrimeDivisor::Named(name))
            } else {
                Err(ParseError::undeclared(line, col, name))
            };
        }
        let base = self.base()?.clone();
        if self.eat_sym('{') {
            let c = self.constant_until('}')?;
            self.expect_sym('}')?;
            if !matches!(base, Base::Curve(_)) {
                return Err(ParseError::syntax(line, col, "points need a curve base"));
            }
            return Ok(PrimeDivisor::Point(c));
        }
        if self.eat_sym('<') {
            let Base::Curve(curve) = &base else {
                return Err(ParseError::syntax(line, col, "opaque primes need a curve base"));
            };
            let e = self.expr()?;
            self.expect_sym('>')?;
            let p = self.poly_of(&e, curve.var())?.monic();
            if !curve.opaque_primes().any(|q| *q == p) {
                return Err(ParseError::undeclared(line, col, format!("<{}>", p.display_in(curve.var()))));
            }
            return Ok(PrimeDivisor::Opaque(p));
        }
        let name = self.ident()?;
        if matches!(&base, Base::Presented(p) if p.has_prime(&name)) {
            Ok(PrimeDivisor::Named(name))
        } else {
            Err(ParseError::undeclared(line, col, name))
        }
    }

    /// `0` or a signed sum of `coef*prime` terms.
    fn weil_terms(&mut self) -> Result<WeilQDivisor, ParseError> {
        if matches!(self.peek_at(0), Tok::Num { value, imag: false } if value.is_zero())
            && !matches!(self.peek_at(1), Tok::Sym('*'))
        {
            self.advance();
            return Ok(WeilQDivisor::zero());
        }
        let mut d = WeilQDivisor::zero();
        let mut first = true;
        loop {
            let sign = if self.eat_sym('-') {
                -Rational::one()
            } else {
                if !self.eat_sym('+') && !first {
                    break;
                }
                Rational::one()
            };
            first = false;
            let coef = if matches!(self.peek_at(0), Tok::Num { .. }) {
                let c = self.rational()?;
                self.expect_sym('*')?;
                c
            } else {
                Rational::one()
            };
            let p = self.prime()?;
            d.add_term(p, sign * coef);
            if !(self.is_sym('+') || self.is_sym('-')) {
                break;
            }
        }
        Ok(d)
    }

    fn segment(&mut self) -> Result<Segment, ParseError> {
        let (line, col) = (self.peek().line, self.peek().col);
        if self.eat_sym('{') {
            let a = self.rational()?;
            self.expect_sym('}')?;
            return Ok(Segment::point(a));
        }
        self.expect_sym('[')?;
        let a = self.rational()?;
        self.expect_sym(',')?;
        let b = self.rational()?;
        self.expect_sym(']')?;
        Segment::new(a.clone(), b.clone())
            .map_err(|_| ParseError::syntax(line, col, format!("segment [{a},{b}] has lo > hi")))
    }

    fn segdiv(&mut self) -> Result<SegmentalDivisor, ParseError> {
        if matches!(self.peek_at(0), Tok::Num { value, imag: false } if value.is_zero()) {
            self.advance();
            return Ok(SegmentalDivisor::zero());
        }
        let mut d = SegmentalDivisor::zero();
        loop {
            let s = self.segment()?;
            let p = if self.eat_sym('(') {
                let p = self.prime()?;
                self.expect_sym(')')?;
                p
            } else {
                self.expect_sym('*')?;
                self.prime()?
            };
            d.add_term(p, s);
            if !self.eat_sym('+') {
                break;
            }
        }
        Ok(d)
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = if self.eat_sym('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat_sym('+');
            self.term()?
        };
        loop {
            if self.eat_sym('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_sym('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_sym('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.is_sym('/') {
                let t = self.advance();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), t.line, t.col);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let atom = self.atom()?;
        if self.eat_sym('^') {
            let e = self.integer()?;
            return Ok(Expr::Pow(Box::new(atom), e));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num { value, imag } => {
                self.advance();
                Ok(Expr::Num(if imag {
                    GaussianRational::new(Rational::zero(), value)
                } else {
                    GaussianRational::real(value)
                }))
            }
            Tok::Ident(s) => {
                self.advance();
                if s == "i" {
                    Ok(Expr::Num(GaussianRational::i()))
                } else {
                    Ok(Expr::Sym(s, t.line, t.col))
                }
            }
            Tok::Sym('(') => {
                self.advance();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            _ => Err(self.error("expected a number, a name or '('")),
        }
    }

    /// Constant expression up to (not including) `close`.
    fn constant_until(&mut self, close: char) -> Result<GaussianRational, ParseError> {
        let e = self.expr()?;
        if !self.is_sym(close) {
            return Err(self.error(format!("expected '{close}'")));
        }
        self.const_of(&e)
    }

    fn constant(&mut self) -> Result<GaussianRational, ParseError> {
        let e = self.expr()?;
        self.const_of(&e)
    }

    fn const_of(&self, e: &Expr) -> Result<GaussianRational, ParseError> {
        let f = self.ratfun_of(e, None)?;
        f.as_constant().ok_or_else(|| self.error("expected a constant"))
    }

    fn poly_of(&self, e: &Expr, var: &str) -> Result<Poly1, ParseError> {
        let f = self.ratfun_of(e, Some(var))?;
        f.as_polynomial().cloned().ok_or_else(|| self.error("expected a polynomial"))
    }

    fn any_var_poly(&mut self) -> Result<Poly1, ParseError> {
        let e = self.expr()?;
        let mut names = Vec::new();
        collect_syms(&e, &mut names);
        names.sort();
        names.dedup();
        if names.len() > 1 {
            return Err(self.error(format!("polynomial in more than one variable: {}", names.join(", "))));
        }
        let var = names.pop().unwrap_or_else(|| "z".into());
        self.poly_of(&e, &var)
    }

    fn ratfun_of(&self, e: &Expr, var: Option<&str>) -> Result<RationalFunction, ParseError> {
        Ok(match e {
            Expr::Num(c) => RationalFunction::constant(c.clone()),
            Expr::Sym(s, line, col) => {
                if Some(s.as_str()) == var {
                    RationalFunction::var()
                } else {
                    return Err(ParseError::undeclared(*line, *col, s.clone()));
                }
            }
            Expr::Neg(a) => -&self.ratfun_of(a, var)?,
            Expr::Add(a, b) => &self.ratfun_of(a, var)? + &self.ratfun_of(b, var)?,
            Expr::Sub(a, b) => &self.ratfun_of(a, var)? - &self.ratfun_of(b, var)?,
            Expr::Mul(a, b) => &self.ratfun_of(a, var)? * &self.ratfun_of(b, var)?,
            Expr::Div(a, b, line, col) => {
                let d = self.ratfun_of(b, var)?;
                if d.is_zero() {
                    return Err(ParseError::syntax(*line, *col, "division by zero"));
                }
                &self.ratfun_of(a, var)? / &d
            }
            Expr::Pow(a, k) => {
                let base = self.ratfun_of(a, var)?;
                base.pow(*k).ok_or_else(|| self.error("zero to a negative power"))?
            }
        })
    }

    fn word_of(&self, e: &Expr) -> Result<FunctionWord, ParseError> {
        let known = |s: &str| match (&self.draft, &self.base) {
            (Some(d), _) => d.relations.contains_key(s),
            (None, Some(Base::Presented(p))) => p.has_function(s),
            _ => false,
        };
        let real = |c: &GaussianRational| {
            if c.is_real() {
                Ok(c.re.clone())
            } else {
                Err(self.error("scalars on a presented base are rational"))
            }
        };
        Ok(match e {
            Expr::Num(c) => FunctionWord::constant(real(c)?),
            Expr::Sym(s, line, col) => {
                if !known(s) {
                    return Err(ParseError::undeclared(*line, *col, s.clone()));
                }
                FunctionWord::symbol(s.clone())
            }
            Expr::Neg(a) => FunctionWord::constant(-Rational::one()).mul(&self.word_of(a)?),
            Expr::Mul(a, b) => self.word_of(a)?.mul(&self.word_of(b)?),
            Expr::Div(a, b, line, col) => {
                let inv = self.word_of(b)?.inv().ok_or_else(|| ParseError::syntax(*line, *col, "division by zero"))?;
                self.word_of(a)?.mul(&inv)
            }
            Expr::Pow(a, k) => self.word_of(a)?.pow(*k).ok_or_else(|| self.error("zero to a negative power"))?,
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (x, y) = (self.word_of(a)?, self.word_of(b)?);
                if !(x.is_constant() && y.is_constant()) {
                    return Err(self.error("sums of functions are not words on a presented base"));
                }
                let y = if matches!(e, Expr::Sub(..)) { -y.scalar } else { y.scalar };
                FunctionWord::constant(x.scalar + y)
            }
        })
    }

    fn function(&mut self) -> Result<BaseFunction, ParseError> {
        let e = self.expr()?;
        match self.base()? {
            Base::Point => Ok(BaseFunction::constant(self.const_of(&e)?)),
            Base::Curve(c) => Ok(BaseFunction::Rational(self.ratfun_of(&e, Some(c.var()))?)),
            Base::Presented(_) => {
                let w = self.word_of(&e)?;
                if w.is_constant() {
                    Ok(BaseFunction::constant(GaussianRational::real(w.scalar)))
                } else {
                    Ok(BaseFunction::Word(w))
                }
            }
        }
    }
}

fn collect_syms(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Num(_) => {}
        Expr::Sym(s, ..) => out.push(s.clone()),
        Expr::Neg(a) | Expr::Pow(a, _) => collect_syms(a, out),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, ..) => {
            collect_syms(a, out);
            collect_syms(b, out);
        }
    }
}
