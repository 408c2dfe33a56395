//! Runs the tasks of a document and renders the report.
//!
//! Each task prints a header line `== task ==`, free-form text, and, with
//! `machine` set, a block of `key=value` lines closed by `end`.

use std::fmt::Write as _;

use phscalc_core::classify::{classify_point_pair, mj_equiv, pair_equiv, real_forms, verify_witness, EquivDecision, MjEquiv};
use phscalc_core::geometry::{Base, BaseFunction};
use phscalc_core::graded::{ah_center_ideal, build_graded, generation_degree, hyperbolicity_check, point_invariants};
use phscalc_core::pairs::{dpd_validate, phs_validate, DpdPair, PhsPair};
use phscalc_core::segdiv::Properness;
use phscalc_core::symbolic::{build_mp, build_sigma_p, verify_hp};
use phscalc_core::toric::{downgrade, LatticeMap};
use phscalc_core::arith::Poly1;

use crate::document::{Document, PairDecl, PairDivisor, Task};

pub const DEFAULT_MMAX: i64 = 12;

#[derive(Clone, Debug)]
pub struct Options {
    pub mmax: Option<i64>,
    pub machine: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { mmax: None, machine: false }
    }
}

impl Options {
    /// Task value, then this option, then `PHSCALC_MMAX`, then the default.
    pub fn mmax_for(&self, task: Option<i64>) -> Result<i64, String> {
        if let Some(m) = task.or(self.mmax) {
            return Ok(m);
        }
        match std::env::var("PHSCALC_MMAX") {
            Ok(s) => match s.trim().parse::<i64>() {
                Ok(m) if m >= 1 => Ok(m),
                _ => Err(format!("PHSCALC_MMAX must be a positive integer, got {s:?}")),
            },
            Err(_) => Ok(DEFAULT_MMAX),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The input was read but a check failed.
    Failed,
    /// The task could not be carried out on this input.
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => crate::EXIT_OK,
            Status::Failed => crate::EXIT_VALIDATION,
            Status::InputError => crate::EXIT_INPUT,
        }
    }

    /// Input errors dominate validation failures.
    pub fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::InputError, _) | (_, Status::InputError) => Status::InputError,
            (Status::Failed, _) | (_, Status::Failed) => Status::Failed,
            _ => Status::Ok,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub title: String,
    pub lines: Vec<String>,
    pub keys: Vec<(String, String)>,
    pub status: Status,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), lines: Vec::new(), keys: Vec::new(), status: Status::Ok }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn key(&mut self, k: &str, v: impl ToString) {
        self.keys.push((k.to_string(), v.to_string()));
    }

    fn fail(&mut self, status: Status, msg: impl Into<String>) {
        self.status = self.status.combine(status);
        let msg = msg.into();
        self.key("error", &msg);
        self.line(match status {
            Status::InputError => format!("error: {msg}"),
            _ => format!("FAIL: {msg}"),
        });
    }

    pub fn render(&self, machine: bool) -> String {
        let mut out = format!("== {} ==\n", self.title);
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        if machine {
            for (k, v) in &self.keys {
                let _ = writeln!(out, "{k}={v}");
            }
            let status = match self.status {
                Status::Ok => "ok",
                Status::Failed => "fail",
                Status::InputError => "error",
            };
            let _ = writeln!(out, "status={status}\nend");
        }
        out
    }
}

enum Validated {
    Dpd(DpdPair),
    Phs(PhsPair),
}

impl Validated {
    fn dpd(&self) -> DpdPair {
        match self {
            Validated::Dpd(p) => p.clone(),
            Validated::Phs(p) => p.to_dpd(),
        }
    }

    fn phs(&self) -> PhsPair {
        match self {
            Validated::Dpd(p) => p.to_phs(),
            Validated::Phs(p) => p.clone(),
        }
    }
}

fn validate_decl(base: &Base, p: &PairDecl) -> Result<Validated, String> {
    match &p.divisor {
        PairDivisor::Dpd(d) => dpd_validate(base, d.clone(), p.h.clone()).map(Validated::Dpd),
        PairDivisor::Phs(d) => phs_validate(base, d.clone(), p.h.clone()).map(Validated::Phs),
    }
    .map_err(|e| e.to_string())
}

/// Named pair, or the last declared one.
fn resolve<'a>(doc: &'a Document, name: &Option<String>) -> Result<&'a PairDecl, String> {
    match name {
        Some(n) => doc.pair(n).ok_or_else(|| format!("undeclared pair {n}")),
        None => doc.pairs.last().ok_or_else(|| "no pair declared".to_string()),
    }
}

/// Resolves and validates, recording failures in `rep`.
fn pair_for(doc: &Document, name: &Option<String>, rep: &mut Report) -> Option<(String, Validated)> {
    let decl = match resolve(doc, name) {
        Ok(d) => d,
        Err(e) => {
            rep.fail(Status::InputError, e);
            return None;
        }
    };
    rep.key("pair", &decl.name);
    match validate_decl(&doc.base, decl) {
        Ok(v) => Some((decl.name.clone(), v)),
        Err(e) => {
            rep.fail(Status::Failed, format!("pair {} does not validate: {e}", decl.name));
            None
        }
    }
}

pub fn run_task(doc: &Document, task: &Task, opts: &Options) -> Report {
    let var = doc.base.var();
    match task {
        Task::Validate(name) => {
            let mut rep = Report::new(format!("validate{}", suffix(name)));
            if let Some((n, v)) = pair_for(doc, name, &mut rep) {
                match &v {
                    Validated::Dpd(p) => rep.line(format!("{n}: valid DPD pair {}", p.display())),
                    Validated::Phs(p) => {
                        rep.line(format!("{n}: valid phs-pair {}", p.display()));
                        match p.properness() {
                            Properness::Proper => rep.line("properness: proper"),
                            Properness::AssertedProper => rep.line("properness: asserted (presented base)"),
                            Properness::NotProper(why) => rep.line(format!("properness: not proper ({why})")),
                        }
                    }
                }
                rep.key("valid", true);
            }
            rep
        }
        Task::Convert(name) => {
            let mut rep = Report::new(format!("convert{}", suffix(name)));
            if let Some((n, v)) = pair_for(doc, name, &mut rep) {
                match &v {
                    Validated::Dpd(p) => {
                        let s = p.to_phs();
                        rep.line(format!("{n}: DPD {} -> phs {}", p.display(), s.display()));
                        rep.key("phs", s.divisor().display_in(var));
                    }
                    Validated::Phs(p) => {
                        let d = p.to_dpd();
                        rep.line(format!("{n}: phs {} -> DPD {}", p.display(), d.display()));
                        rep.key("dpd", d.divisor().display_in(var));
                    }
                }
            }
            rep
        }
        Task::Graded { pair, mmax } => {
            let mut rep = Report::new(format!("graded{}", suffix(pair)));
            let m_max = match opts.mmax_for(*mmax) {
                Ok(m) => m,
                Err(e) => {
                    rep.fail(Status::InputError, e);
                    return rep;
                }
            };
            if let Some((_, v)) = pair_for(doc, pair, &mut rep) {
                graded_report(&v.phs(), m_max, var, &mut rep);
            }
            rep
        }
        Task::Classify(name) => {
            let mut rep = Report::new(format!("classify{}", suffix(name)));
            if let Some((n, v)) = pair_for(doc, name, &mut rep) {
                classify_report(&n, &v.dpd(), &mut rep);
            }
            rep
        }
        Task::Equiv(a, b) => {
            let mut rep = Report::new(format!("equiv {a} {b}"));
            let Some((_, p1)) = pair_for(doc, &Some(a.clone()), &mut rep) else { return rep };
            let Some((_, p2)) = pair_for(doc, &Some(b.clone()), &mut rep) else { return rep };
            equiv_report(&p1.dpd(), &p2.dpd(), var, &mut rep);
            rep
        }
        Task::Downgrade { weights, labels } => downgrade_report(weights, labels),
        Task::MjVerify { p, r } => mj_verify_report(p, *r),
        Task::MjEquiv { p1, p2, r } => {
            let mut rep = Report::new(format!("mj equiv r={r}"));
            rep.line(format!("P1 = {}, P2 = {}", p1.display_in("z"), p2.display_in("z")));
            match mj_equiv(p1, p2, *r) {
                Ok(MjEquiv::Rational(c)) => {
                    rep.line(format!("equivalent: P2(z) = c*P1(c^2*z) mod z^{r} with c = {c}"));
                    rep.key("c", c);
                }
                Ok(MjEquiv::RealIrrational { exponent, rho }) => {
                    rep.line(format!("equivalent: c^{exponent} = {rho}, c irrational"));
                    rep.key("c", format!("({rho})^(1/{exponent})"));
                }
                Ok(MjEquiv::Inequivalent) => {
                    rep.line("inequivalent: no real c");
                    rep.key("c", "none");
                }
                Err(e) => rep.fail(Status::InputError, e.to_string()),
            }
            rep
        }
        Task::Corpus { filter } => {
            let results = crate::corpus::run(filter.as_deref(), &crate::corpus::Faults::default());
            crate::corpus::report(&results)
        }
    }
}

fn suffix(name: &Option<String>) -> String {
    name.as_ref().map(|n| format!(" {n}")).unwrap_or_default()
}

fn graded_report(pair: &PhsPair, m_max: i64, var: &str, rep: &mut Report) {
    let (slice, inv) = match build_graded(pair, m_max) {
        Ok(x) => x,
        Err(e) => {
            rep.fail(Status::Failed, e.to_string());
            return;
        }
    };
    rep.key("mmax", m_max);
    rep.line(format!("{:>4}  {:<28}  tau_m*(g_m)", "m", "g_m"));
    for m in slice.degrees() {
        let g = slice.generator(m).map_or("0".to_string(), |g| g.display_in(var).to_string());
        let t = inv.image(m).map_or("0".to_string(), |g| g.display_in(var).to_string());
        rep.line(format!("{m:>4}  {g:<28}  {t}"));
    }
    let hyp = hyperbolicity_check(&slice);
    rep.line(format!("hyperbolic: {hyp}"));
    rep.key("hyperbolic", hyp);
    match generation_degree(&slice, m_max) {
        Ok(d) => {
            rep.line(format!("generation degree: {d}"));
            rep.key("generation_degree", d);
            match ah_center_ideal(&slice, d) {
                Ok(gens) => {
                    let parts: Vec<String> = gens.iter().map(|p| p.display_in(var).to_string()).collect();
                    let ideal = format!("<{}>", parts.join(","));
                    rep.line(format!("center ideal: {ideal}"));
                    rep.key("center_ideal", ideal);
                }
                Err(e) => rep.line(format!("center ideal: unavailable ({e})")),
            }
        }
        Err(e) => rep.line(format!("generation degree: unavailable ({e})")),
    }
}

fn classify_report(name: &str, pair: &DpdPair, rep: &mut Report) {
    match pair.base() {
        Base::Point => {
            let h = match pair.h() {
                BaseFunction::Rational(r) => r.as_constant().filter(|c| c.is_real()).map(|c| c.re),
                BaseFunction::Word(_) => None,
            };
            let Some(h) = h else {
                rep.fail(Status::InputError, "h must be a real constant on the point base");
                return;
            };
            let class = match classify_point_pair(&h) {
                Ok(c) => c,
                Err(e) => {
                    rep.fail(Status::InputError, e.to_string());
                    return;
                }
            };
            rep.line(format!("{name}: class {class}"));
            rep.key("class", class);
            match point_invariants(&h) {
                Ok(inv) => {
                    let rel = inv.relation.display_with(&inv.names);
                    rep.line(format!("relation: {rel} = 0"));
                    rep.line(format!("verified: {}", inv.verified));
                    rep.key("relation", rel);
                    rep.key("verified", inv.verified);
                    if !inv.verified {
                        rep.fail(Status::Failed, "relation check failed");
                    }
                }
                Err(e) => rep.fail(Status::Failed, e.to_string()),
            }
        }
        Base::Curve(_) => match real_forms(pair) {
            Ok(forms) => {
                rep.line(format!("{name}: {} real form(s) with this complexification", forms.count()));
                rep.line(format!("  (D, h)  = {}", forms.plus.display()));
                rep.line(format!("  (D, -h) = {}", forms.minus.display()));
                match &forms.decision {
                    EquivDecision::Equivalent(w) => rep.line(format!(
                        "  equivalent via psi(z) = ({})*z+({}), f = {}",
                        w.psi.alpha,
                        w.psi.beta,
                        w.f.display_in(pair.base().var())
                    )),
                    EquivDecision::Inequivalent(o) => rep.line(format!("  distinct: {o}")),
                }
                rep.key("real_forms", forms.count());
            }
            Err(e) => rep.fail(Status::InputError, e.to_string()),
        },
        Base::Presented(_) => rep.fail(Status::InputError, "classification needs a point or curve base"),
    }
}

fn equiv_report(p1: &DpdPair, p2: &DpdPair, var: &str, rep: &mut Report) {
    match pair_equiv(p1, p2) {
        Ok(EquivDecision::Equivalent(w)) => {
            let replay = verify_witness(p1, p2, &w);
            rep.line("equivalent");
            rep.line(format!("psi(z) = ({})*z+({})", w.psi.alpha, w.psi.beta));
            rep.line(format!("f = {}", w.f.display_in(var)));
            rep.line(format!("residual = {}", w.residual));
            rep.line(format!("witness replay: {}", if replay { "ok" } else { "FAILED" }));
            rep.key("equivalent", true);
            rep.key("psi", format!("({})*z+({})", w.psi.alpha, w.psi.beta));
            rep.key("f", w.f.display_in(var));
            rep.key("residual", &w.residual);
            if !replay {
                rep.fail(Status::Failed, "witness does not replay");
            }
        }
        Ok(EquivDecision::Inequivalent(o)) => {
            rep.line(format!("inequivalent: {o}"));
            rep.key("equivalent", false);
            rep.key("obstruction", o);
        }
        Err(e) => rep.fail(Status::InputError, e.to_string()),
    }
}

fn downgrade_report(weights: &[i64], labels: &[String]) -> Report {
    let w: Vec<String> = weights.iter().map(i64::to_string).collect();
    let mut rep = Report::new(format!("downgrade weights {}", w.join(",")));
    let d = match downgrade(weights, labels) {
        Ok(d) => d,
        Err(e) => {
            rep.fail(Status::InputError, e.to_string());
            return rep;
        }
    };
    rep.line(format!("rays ({}):", d.rays.len()));
    for ray in &d.rays {
        let from = if ray.images_of.is_empty() {
            String::new()
        } else {
            let e: Vec<String> = ray.images_of.iter().map(|i| format!("e{}", i + 1)).collect();
            format!("  image of {}", e.join(","))
        };
        rep.line(format!("  {} = {:?}  segment {}{from}", ray.name, ray.generator, ray.segment));
    }
    for rel in &d.relations {
        let terms: Vec<String> = rel.terms.iter().map(|(c, i)| format!("{c}*{}", d.rays[*i].name)).collect();
        rep.line(format!("relation: {} = {}", d.rays[rel.target].name, terms.join(" + ")));
    }
    let s = d.segdiv();
    rep.line(format!("segmental divisor: {}", s.display_in("z")));
    rep.key("rays", d.rays.len());
    rep.key("segdiv", s.display_in("z"));
    // (2,-2,n,-n) with n = 2r+1: also show the divisor in the coordinates
    // where the quotient map reads (u,v,z,w)
    if let [2, -2, n, m] = *weights {
        if n == -m && n >= 3 && n % 2 == 1 {
            let g = LatticeMap::new(vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![n, 0, 0, 2]], 4);
            match d.rebase(&g, &[0, (n - 1) / 2, 1, 0]) {
                Ok((moved, matching)) => {
                    let ms = moved.segdiv();
                    rep.line(format!("matched by {:?}: {}", matching.matrix, ms.display_in("z")));
                    rep.key("segdiv_matched", ms.display_in("z"));
                }
                Err(e) => rep.line(format!("no matching: {e}")),
            }
        }
    }
    rep
}

fn mj_verify_report(p: &Poly1, r: u32) -> Report {
    let mut rep = Report::new(format!("mj verify r={r}"));
    rep.line(format!("P = {}", p.display_in("z")));
    let det = match build_mp(p, r) {
        Ok(m) => m.det(),
        Err(e) => {
            rep.fail(Status::InputError, e.to_string());
            return rep;
        }
    };
    let det_ok = det.display_with(&phscalc_core::symbolic::VARS).to_string() == "1";
    rep.line(format!("det M_P = {}", det.display_with(&phscalc_core::symbolic::VARS)));
    let inv_ok = match build_sigma_p(p, r) {
        Ok(s) => s.square().is_identity(),
        Err(e) => {
            rep.fail(Status::InputError, e.to_string());
            return rep;
        }
    };
    rep.line(format!("sigma_P^2 = id: {inv_ok}"));
    match verify_hp(p, r) {
        Ok(report) => {
            rep.line(report.to_string());
            rep.key("det_one", det_ok);
            rep.key("involution", inv_ok);
            rep.key("h_p", report.holds());
            if !report.holds() {
                rep.key("difference", report.difference.display_with(&phscalc_core::symbolic::VARS));
            }
            if !(det_ok && inv_ok && report.holds() && report.invariant) {
                rep.fail(Status::Failed, "mj verification failed");
            }
        }
        Err(e) => rep.fail(Status::InputError, e.to_string()),
    }
    rep
}

/// Runs every task; returns the rendered report and the exit code.
pub fn run_document(doc: &Document, opts: &Options) -> (String, i32) {
    let mut out = String::new();
    let mut status = Status::Ok;
    for t in &doc.tasks {
        let rep = run_task(doc, t, opts);
        status = status.combine(rep.status);
        out.push_str(&rep.render(opts.machine));
    }
    (out, status.exit_code())
}
