//! Parsed input: a base, declarations and a list of tasks. `Display` prints
//! a document back in the input grammar; parsing the printout gives the
//! same document.

use std::fmt;

use phscalc_core::arith::{int, Poly1};
use phscalc_core::geometry::{Base, BaseFunction, PresentedBase, PrimeDivisor, WeilQDivisor};
use phscalc_core::segdiv::SegmentalDivisor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairDivisor {
    Dpd(WeilQDivisor),
    Phs(SegmentalDivisor),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDecl {
    pub name: String,
    pub divisor: PairDivisor,
    pub h: BaseFunction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Task {
    Validate(Option<String>),
    Convert(Option<String>),
    Graded { pair: Option<String>, mmax: Option<i64> },
    Classify(Option<String>),
    Equiv(String, String),
    Downgrade { weights: Vec<i64>, labels: Vec<String> },
    MjVerify { p: Poly1, r: u32 },
    MjEquiv { p1: Poly1, p2: Poly1, r: u32 },
    Corpus { filter: Option<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub base: Base,
    pub segdivs: Vec<(String, SegmentalDivisor)>,
    pub pairs: Vec<PairDecl>,
    pub tasks: Vec<Task>,
}

impl Document {
    /// Point base, nothing declared.
    pub fn empty() -> Self {
        Document { base: Base::Point, segdivs: Vec::new(), pairs: Vec::new(), tasks: Vec::new() }
    }

    pub fn pair(&self, name: &str) -> Option<&PairDecl> {
        self.pairs.iter().find(|p| p.name == name)
    }
}

/// `seg*prime` terms joined by `+`.
pub struct SegInput<'a> {
    pub d: &'a SegmentalDivisor,
    pub var: &'a str,
}

impl fmt::Display for SegInput<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d.is_zero() {
            return write!(f, "0");
        }
        for (idx, (p, s)) in self.d.terms().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{s}*{}", p.display_in(self.var))?;
        }
        Ok(())
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

fn write_presented(f: &mut fmt::Formatter<'_>, base: &PresentedBase) -> fmt::Result {
    writeln!(f, "base presented;")?;
    writeln!(f, "prime {};", base.primes().join(", "))?;
    for g in base.functions() {
        let rel = base.relation(g).expect("declared");
        let d = WeilQDivisor::from_terms(rel.iter().map(|(p, e)| (PrimeDivisor::named(p.clone()), int(*e))));
        writeln!(f, "function {g} = {d};")?;
    }
    for (p, q) in base.declared_tau_primes() {
        if p <= q {
            writeln!(f, "tau {p} = {q};")?;
        }
    }
    for (g, w) in base.declared_tau_functions() {
        writeln!(f, "tau {g} = {w};")?;
    }
    Ok(())
}

fn opt(name: &Option<String>) -> String {
    name.as_ref().map(|n| format!(" {n}")).unwrap_or_default()
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Task::Validate(p) => write!(f, "validate{};", opt(p)),
            Task::Convert(p) => write!(f, "convert{};", opt(p)),
            Task::Graded { pair, mmax } => {
                write!(f, "graded{}", opt(pair))?;
                if let Some(m) = mmax {
                    write!(f, " mmax {m}")?;
                }
                write!(f, ";")
            }
            Task::Classify(p) => write!(f, "classify{};", opt(p)),
            Task::Equiv(a, b) => write!(f, "equiv {a} {b};"),
            Task::Downgrade { weights, labels } => {
                write!(f, "downgrade weights ")?;
                write_list(f, weights)?;
                if !labels.is_empty() {
                    write!(f, " labels ")?;
                    write_list(f, labels)?;
                }
                write!(f, ";")
            }
            Task::MjVerify { p, r } => write!(f, "mj verify P = {}, r = {r};", p.display_in("z")),
            Task::MjEquiv { p1, p2, r } => {
                write!(f, "mj equiv P1 = {}, P2 = {}, r = {r};", p1.display_in("z"), p2.display_in("z"))
            }
            Task::Corpus { filter } => match filter {
                Some(x) => write!(f, "corpus filter {x};"),
                None => write!(f, "corpus;"),
            },
        }
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.base.var();
        match &self.base {
            Base::Point => writeln!(f, "base point;")?,
            Base::Curve(c) => {
                if c.is_standard() {
                    writeln!(f, "base curve var {} conj;", c.var())?;
                } else {
                    writeln!(f, "base curve var {} tau {}, {};", c.var(), paren(c.a()), paren(c.b()))?;
                }
                for p in c.opaque_primes() {
                    writeln!(f, "opaque {};", p.display_in(c.var()))?;
                }
            }
            Base::Presented(p) if *p == PresentedBase::sphere() => writeln!(f, "base sphere;")?,
            Base::Presented(p) => write_presented(f, p)?,
        }
        for (name, d) in &self.segdivs {
            writeln!(f, "segdiv {name} = {};", SegInput { d, var })?;
        }
        for p in &self.pairs {
            let h = self.base.display_function(&p.h);
            match &p.divisor {
                PairDivisor::Dpd(d) => writeln!(f, "pair {} dpd D = {}, h = {h};", p.name, d.display_in(var))?,
                PairDivisor::Phs(d) => writeln!(f, "pair {} phs D = {}, h = {h};", p.name, SegInput { d, var })?,
            }
        }
        for t in &self.tasks {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

fn paren(c: &phscalc_core::arith::GaussianRational) -> String {
    format!("({c})")
}
