//! Evaluating documents and executing their tasks into a JSON report.

use std::collections::BTreeMap;

use crformal::crmap::CrMap;
use crformal::families::{self, FamilyError};
use crformal::hypersurface::{Convention, NormalHypersurface, TypeKind};
use crformal::linalg::FracSeries;
use crformal::prolongation::{
    b_coefficient, forward_expand, minimal_ordered_nonzero, ProlongationInstance,
};
use crformal::scalar;
use crformal::verify::{self, ConventionResolution, Registry, SuiteStatus, TheoremSuiteResult};
use crformal::{FormalMap, MultiIndex, Series, Verdict};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::grammar::{Definition, Document, Expr, Pos, Statement, Suite};

pub const SCHEMA: &str = "crformal-report/1";
pub const DEFAULT_DEGREE: u32 = 10;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalError {
    pub pos: Option<Pos>,
    pub message: String,
}

impl std::fmt::Display for EvalError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.pos {
            Some(p) => write!(f, "{p}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn fail<T>(pos: Option<Pos>, message: impl Into<String>) -> Result<T, EvalError> {
    Err(EvalError {
        pos,
        message: message.into(),
    })
}

fn lift<E: std::fmt::Display>(pos: Pos) -> impl Fn(E) -> EvalError {
    move |e| EvalError {
        pos: Some(pos),
        message: e.to_string(),
    }
}

/// Which coordinates an expression may use, and their positions.
#[derive(Debug, Clone, Copy)]
enum Ctx {
    /// `(z_1..z_n, chi_1..chi_n, tau)`
    Hypersurface(usize),
    /// `(z_1..z_n, w)`
    Map(usize),
    /// `(z_1..z_n)`
    Psi(usize),
    /// `(z_1..z_n, chi_1..chi_n)`
    Relation(usize),
}

impl Ctx {
    fn arity(self) -> usize {
        match self {
            Ctx::Hypersurface(n) => 2 * n + 1,
            Ctx::Map(n) => n + 1,
            Ctx::Psi(n) => n,
            Ctx::Relation(n) => 2 * n,
        }
    }

    fn index(self, var: &str) -> Option<usize> {
        let (block, k) = split_variable(var)?;
        match (self, block) {
            (Ctx::Hypersurface(n) | Ctx::Map(n) | Ctx::Psi(n) | Ctx::Relation(n), "z")
                if k <= n =>
            {
                Some(k - 1)
            }
            (Ctx::Hypersurface(n) | Ctx::Relation(n), "chi") if k <= n => Some(n + k - 1),
            (Ctx::Hypersurface(n), "tau") => Some(2 * n),
            (Ctx::Map(n), "w") => Some(n),
            _ => None,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Ctx::Hypersurface(_) => "a hypersurface (z, chi, tau)",
            Ctx::Map(_) => "a map component (z, w)",
            Ctx::Psi(_) => "an m_psi component (z)",
            Ctx::Relation(_) => "a prolongation series (z, chi)",
        }
    }
}

/// `z3 -> ("z", 3)`, `z -> ("z", 1)`, `tau -> ("tau", 1)`.
fn split_variable(name: &str) -> Option<(&'static str, usize)> {
    for block in ["chi", "z", "tau", "w"] {
        if let Some(rest) = name.strip_prefix(block) {
            if rest.is_empty() {
                return Some((block, 1));
            }
            if matches!(block, "z" | "chi") && crate::grammar::is_variable(name) {
                return rest.parse().ok().map(|k| (block, k));
            }
        }
    }
    None
}

#[derive(Debug, Clone)]
enum Object {
    Series(Expr),
    Hypersurface(NormalHypersurface),
    Map(CrMap),
}

pub struct Session {
    pub degree: u32,
    pub convention: Convention,
    pub seed: u64,
    objects: BTreeMap<String, Object>,
}

fn family_err(pos: Pos) -> impl Fn(FamilyError) -> EvalError {
    lift(pos)
}

impl Session {
    pub fn new(degree: u32, convention: Convention, seed: u64) -> Self {
        Session {
            degree,
            convention,
            seed,
            objects: BTreeMap::new(),
        }
    }

    /// Largest coordinate index in the `z` and `chi` blocks, following named series.
    fn max_index(&self, e: &Expr, depth: usize) -> usize {
        match e {
            Expr::Var(name, _) => match (split_variable(name), self.objects.get(name)) {
                (Some(("z" | "chi", k)), _) => k,
                (_, Some(Object::Series(inner))) if depth < 64 => self.max_index(inner, depth + 1),
                _ => 0,
            },
            Expr::Num(_) | Expr::I => 0,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) => self.max_index(a, depth),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                self.max_index(a, depth).max(self.max_index(b, depth))
            }
        }
    }

    fn eval(&self, e: &Expr, ctx: Ctx, depth: usize) -> Result<Series, EvalError> {
        let (a, d) = (ctx.arity(), self.degree);
        Ok(match e {
            Expr::Num(r) => Series::constant(a, d, scalar::from_rational(r.clone())),
            Expr::I => Series::constant(a, d, scalar::imag_unit()),
            Expr::Var(name, pos) => {
                if let Some(i) = ctx.index(name) {
                    Series::variable(a, d, i)
                } else if split_variable(name).is_some() {
                    return fail(
                        Some(*pos),
                        format!("variable `{name}` is not available in {}", ctx.describe()),
                    );
                } else {
                    match self.objects.get(name) {
                        Some(Object::Series(inner)) if depth < 64 => {
                            self.eval(inner, ctx, depth + 1)?
                        }
                        Some(Object::Series(_)) => {
                            return fail(
                                Some(*pos),
                                format!("`{name}` is defined in terms of itself"),
                            )
                        }
                        Some(_) => return fail(Some(*pos), format!("`{name}` is not a series")),
                        None => return fail(Some(*pos), format!("undeclared name `{name}`")),
                    }
                }
            }
            Expr::Neg(x) => self.eval(x, ctx, depth)?.scale(&scalar::from_int(-1)),
            Expr::Add(x, y) => &self.eval(x, ctx, depth)? + &self.eval(y, ctx, depth)?,
            Expr::Sub(x, y) => &self.eval(x, ctx, depth)? - &self.eval(y, ctx, depth)?,
            Expr::Mul(x, y) => &self.eval(x, ctx, depth)? * &self.eval(y, ctx, depth)?,
            Expr::Div(x, y) => {
                let den = self.eval(y, ctx, depth)?;
                let pos = first_pos(y);
                if den.constant_term().is_zero() {
                    let what = if den.is_zero() {
                        "division by zero".to_string()
                    } else {
                        format!("division by `{y}`, which is not a unit (zero constant term)")
                    };
                    return fail(pos, what);
                }
                let inv = den.invert_unit().map_err(|e| EvalError {
                    pos,
                    message: e.to_string(),
                })?;
                &self.eval(x, ctx, depth)? * &inv
            }
            Expr::Pow(x, k) => self.eval(x, ctx, depth)?.pow(*k),
            Expr::Exp(x) => {
                let arg = self.eval(x, ctx, depth)?;
                if !arg.constant_term().is_zero() {
                    return fail(
                        first_pos(x),
                        "exp(...) needs an argument vanishing at the origin",
                    );
                }
                arg.exp_series().map_err(|e| EvalError {
                    pos: first_pos(x),
                    message: e.to_string(),
                })?
            }
        })
    }

    fn define(&mut self, name: &str, pos: Pos, def: &Definition) -> Result<(), EvalError> {
        let (d, conv) = (self.degree, self.convention);
        let obj = match def {
            Definition::Series(e) => {
                self.check_names(e)?;
                Object::Series(e.clone())
            }
            Definition::HypersurfaceQ(e) => Object::Hypersurface(self.hypersurface_from_q(e, pos)?),
            Definition::HypersurfacePhi(e) => {
                let n = self.max_index(e, 0).max(1);
                let phi = self.eval(e, Ctx::Hypersurface(n), 0)?;
                Object::Hypersurface(
                    NormalHypersurface::from_graph(n, &phi, conv).map_err(lift(pos))?,
                )
            }
            Definition::Heisenberg(n) => {
                if *n == 0 {
                    return fail(Some(pos), "heisenberg(n) needs n >= 1");
                }
                Object::Hypersurface(
                    families::heisenberg(*n as usize, d, conv).map_err(family_err(pos))?,
                )
            }
            Definition::MPsi(es) => {
                let n = es
                    .iter()
                    .map(|e| self.max_index(e, 0))
                    .max()
                    .unwrap_or(0)
                    .max(1);
                let comps = es
                    .iter()
                    .map(|e| self.eval(e, Ctx::Psi(n), 0))
                    .collect::<Result<Vec<_>, _>>()?;
                let psi = FormalMap::new(comps).map_err(lift(pos))?;
                Object::Hypersurface(families::m_psi(&psi, n, d, conv).map_err(family_err(pos))?)
            }
            Definition::Blowup(b, c) => Object::Hypersurface(
                families::blowup_hypersurface(*b, *c, d, conv).map_err(family_err(pos))?,
            ),
            Definition::ExpModel(k) => {
                Object::Hypersurface(families::exp_model(*k, d).map_err(family_err(pos))?)
            }
            Definition::Remark => {
                let (m, _, _) = families::remark_instance(d, conv).map_err(family_err(pos))?;
                Object::Hypersurface(m)
            }
            Definition::Map { f, g } => {
                let ctx = Ctx::Map(f.len());
                let fs = f
                    .iter()
                    .map(|e| self.eval(e, ctx, 0))
                    .collect::<Result<Vec<_>, _>>()?;
                let g = self.eval(g, ctx, 0)?;
                Object::Map(CrMap::new(fs, g).map_err(lift(pos))?)
            }
        };
        self.objects.insert(name.to_string(), obj);
        Ok(())
    }

    /// Names used in a series definition must already exist or be coordinates.
    fn check_names(&self, e: &Expr) -> Result<(), EvalError> {
        match e {
            Expr::Var(name, pos) => {
                if split_variable(name).is_none()
                    && !matches!(self.objects.get(name), Some(Object::Series(_)))
                {
                    return fail(Some(*pos), format!("undeclared name `{name}`"));
                }
                Ok(())
            }
            Expr::Num(_) | Expr::I => Ok(()),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) => self.check_names(a),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                self.check_names(a)?;
                self.check_names(b)
            }
        }
    }

    fn hypersurface_from_q(&self, e: &Expr, pos: Pos) -> Result<NormalHypersurface, EvalError> {
        let n = self.max_index(e, 0).max(1);
        let q = self.eval(e, Ctx::Hypersurface(n), 0)?;
        NormalHypersurface::new(n, q, self.convention).map_err(lift(pos))
    }

    fn hypersurface(&self, name: &str, pos: Pos) -> Result<NormalHypersurface, EvalError> {
        match self.objects.get(name) {
            Some(Object::Hypersurface(m)) => Ok(m.clone()),
            Some(Object::Series(e)) => self.hypersurface_from_q(e, pos),
            Some(Object::Map(_)) => {
                fail(Some(pos), format!("`{name}` is a map, not a hypersurface"))
            }
            None => fail(Some(pos), format!("undeclared name `{name}`")),
        }
    }

    fn map(&self, name: &str, pos: Pos) -> Result<CrMap, EvalError> {
        match self.objects.get(name) {
            Some(Object::Map(h)) => Ok(h.clone()),
            Some(_) => fail(Some(pos), format!("`{name}` is not a map")),
            None => fail(Some(pos), format!("undeclared name `{name}`")),
        }
    }

    pub fn classify(&self, name: &str, pos: Pos) -> Result<Value, EvalError> {
        let m = self.hypersurface(name, pos)?;
        Ok(classify_report(name, &m, self.seed))
    }

    pub fn check_map(
        &self,
        map: &str,
        source: &str,
        target: &str,
        pos: Pos,
    ) -> Result<Value, EvalError> {
        let h = self.map(map, pos)?;
        let m = self.hypersurface(source, pos)?;
        let m2 = self.hypersurface(target, pos)?;
        check_map_report(map, source, target, &h, &m, &m2, self.seed).map_err(lift(pos))
    }

    pub fn prolong(
        &self,
        a: &str,
        b: &[Expr],
        alpha: &[u32],
        pos: Pos,
    ) -> Result<Value, EvalError> {
        let a_expr = match self.objects.get(a) {
            Some(Object::Series(e)) => e.clone(),
            Some(_) => return fail(Some(pos), format!("`{a}` is not a series")),
            None => return fail(Some(pos), format!("undeclared name `{a}`")),
        };
        let n = b
            .iter()
            .chain(std::iter::once(&a_expr))
            .map(|e| self.max_index(e, 0))
            .max()
            .unwrap_or(0)
            .max(alpha.len())
            .max(1);
        if alpha.len() != n {
            return fail(
                Some(pos),
                format!(
                    "alpha has {} entries but the series use {n} z-variables",
                    alpha.len()
                ),
            );
        }
        let ctx = Ctx::Relation(n);
        let a_series = self.eval(&a_expr, ctx, 0)?;
        let bs = b
            .iter()
            .map(|e| self.eval(e, ctx, 0))
            .collect::<Result<Vec<_>, _>>()?;
        let alpha = MultiIndex::new(alpha.to_vec());
        let alpha0 = minimal_ordered_nonzero(&a_series, n).map_err(lift(pos))?;
        let order = alpha.degree() + alpha0.degree();
        let v = forward_expand(&a_series, &bs, n, order).map_err(lift(pos))?;
        let inst = ProlongationInstance::new(a_series, n, n, bs.len(), v).map_err(lift(pos))?;
        let sol = inst.solve_all(&alpha).map_err(lift(pos))?;
        let names = relation_chi_names(n);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut jets = Vec::new();
        let mut all_match = true;
        for (gamma, comps) in &sol.jets {
            let truth = b_coefficient(&bs, n, gamma).map_err(lift(pos))?;
            let matches = comps
                .iter()
                .zip(&truth)
                .all(|(x, t)| x.eq_certified(&FracSeries::from_series(t.clone())));
            all_match &= matches;
            jets.push(json!({
                "gamma": gamma.exponents(),
                "components": comps.iter().map(|x| frac_display(x, &refs)).collect::<Vec<_>>(),
                "matches_input": matches,
            }));
        }
        Ok(json!({
            "task": "prolong",
            "a": a,
            "n": n,
            "alpha": alpha.exponents(),
            "alpha0": inst.alpha0().exponents(),
            "k": inst.k(),
            "max_jet_accessed": sol.max_jet_accessed,
            "jets": jets,
            "round_trip": all_match,
        }))
    }
}

fn relation_chi_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["chi".into()]
    } else {
        (1..=n).map(|i| format!("chi{i}")).collect()
    }
}

fn frac_display(x: &FracSeries, names: &[&str]) -> String {
    let num = x.numerator().display_with(names);
    let den = x.denominator();
    if den == Series::one(den.arity(), den.trunc_degree()) {
        num
    } else {
        format!("({num}) / ({})", den.display_with(names))
    }
}

fn first_pos(e: &Expr) -> Option<Pos> {
    match e {
        Expr::Var(_, p) => Some(*p),
        Expr::Num(_) | Expr::I => None,
        Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) => first_pos(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            first_pos(a).or_else(|| first_pos(b))
        }
    }
}

fn verdict_or_error<E: std::fmt::Display>(r: Result<Verdict, E>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).expect("verdicts serialize"),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

pub fn classify_report(name: &str, m: &NormalHypersurface, seed: u64) -> Value {
    let d = m.trunc_degree();
    let k_max = d.saturating_sub(1);
    let ty = m.classify_type();
    let (kind, order) = match ty.kind {
        TypeKind::Finite => ("finite", None),
        TypeKind::Infinite(k) => ("infinite", Some(k)),
        TypeKind::UnknownAtTruncation => ("unknown", None),
    };
    let mut out = json!({
        "task": "classify",
        "name": name,
        "hypersurface": m.to_string(),
        "n": m.n(),
        "degree": d,
        "valid": m.validate(),
        "type": kind,
        "m": order,
        "type_witness": ty.witness.as_ref().map(|w| w.exponents().to_vec()),
        "class_c": verdict_or_error(m.is_class_c(k_max, seed)),
        "holomorphically_nondegenerate": verdict_or_error(m.is_holomorphically_nondegenerate(k_max, seed)),
    });
    if let Some(k) = order {
        out["class_cm"] = verdict_or_error(m.is_class_cm(k, k_max, seed));
        if let Ok(e) = m.exceptional_hypersurface() {
            out["exceptional"] = json!(e.to_string());
        }
    }
    if kind == "unknown" {
        out["hint"] = json!(format!("undecided at degree {d}; raise --degree"));
    }
    out
}

pub fn check_map_report(
    map: &str,
    source: &str,
    target: &str,
    h: &CrMap,
    m: &NormalHypersurface,
    m2: &NormalHypersurface,
    seed: u64,
) -> Result<Value, crformal::crmap::CrMapError> {
    let trord = match h.transversal_order() {
        Ok(t) => json!(t.to_string()),
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(json!({
        "task": "check-map",
        "map": map,
        "source": source,
        "target": target,
        "components": h.to_string(),
        "sends_into": h.sends_into(m, m2)?,
        "cr_transversal": h.is_cr_transversal(),
        "transversally_flat": h.is_transversally_flat(),
        "not_totally_degenerate": verdict_or_error(h.is_not_totally_degenerate(seed)),
        "jacobian": h.jacobian()?.display_with(&h.variable_names().iter().map(String::as_str).collect::<Vec<_>>()),
        "jac_nonzero": verdict_or_error(h.is_jac_nonzero()),
        "trord": trord,
        "normal_component_real_constant": verdict_or_error(h.normal_component_reality_check(m, m2)),
        "trord_bound": verdict_or_error(h.trord_bound_check(m, m2)),
        "automorphism": h.is_automorphism(),
    }))
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Summary {
    pub confirmed: usize,
    pub hypothesis_not_certified: usize,
    pub inconclusive: usize,
    pub falsified: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub input_digest: String,
    pub degree: u32,
    pub convention: Convention,
    pub seed: u64,
    pub tasks: Vec<Value>,
    pub suites: Vec<TheoremSuiteResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remark_convention: Option<Vec<ConventionResolution>>,
    pub errors: Vec<String>,
    pub summary: Summary,
}

impl Report {
    pub fn new(input: &str, degree: u32, convention: Convention, seed: u64) -> Self {
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            input_digest: hex::encode(Sha256::digest(input.as_bytes())),
            degree,
            convention,
            seed,
            tasks: Vec::new(),
            suites: Vec::new(),
            remark_convention: None,
            errors: Vec::new(),
            summary: Summary::default(),
        }
    }

    fn finish(&mut self) {
        let s = &self.suites;
        let invalid = self
            .tasks
            .iter()
            .filter(|t| t["valid"]["status"] == json!("certified_false"))
            .count();
        self.summary = Summary {
            confirmed: verify::count(s, SuiteStatus::Confirmed),
            hypothesis_not_certified: verify::count(s, SuiteStatus::HypothesisNotCertified),
            inconclusive: verify::count(s, SuiteStatus::Inconclusive),
            falsified: verify::count(s, SuiteStatus::Falsified),
            errors: self.errors.len() + invalid,
        };
    }

    /// 0 when nothing was falsified and nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.falsified > 0 || self.summary.errors > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn add_suite(&mut self, suite: Suite) {
        let registry = match Registry::standard(self.degree, self.convention, self.seed) {
            Ok(r) => r,
            Err(e) => {
                self.errors.push(format!("registry: {e}"));
                return;
            }
        };
        let results = match suite {
            Suite::FiniteType => verify::suite_finite_type(&registry),
            Suite::InfiniteType => verify::suite_infinite_type(&registry),
            Suite::LinearPart => verify::suite_linear_part(&registry),
            Suite::All => verify::run_all(&registry),
        };
        if matches!(suite, Suite::FiniteType | Suite::All) {
            self.remark_convention = Some(verify::remark_convention_resolution(self.degree));
        }
        self.suites.extend(results);
    }

    pub fn add_examples(&mut self) {
        match examples(self.degree, self.convention, self.seed) {
            Ok(v) => self.tasks.extend(v),
            Err(e) => self.errors.push(format!("examples: {e}")),
        }
    }
}

/// Which kinds of task to execute from a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskFilter {
    All,
    Classify,
    CheckMap,
    Prolong,
}

/// Settings given on the command line take precedence over the document.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub degree: Option<u32>,
    pub convention: Option<Convention>,
    pub seed: Option<u64>,
}

pub fn run_document(input: &str, doc: &Document, filter: TaskFilter, ov: Overrides) -> Report {
    let degree = ov.degree.or(doc.degree()).unwrap_or(DEFAULT_DEGREE);
    let convention = ov.convention.or(doc.convention()).unwrap_or_default();
    let seed = ov.seed.or(doc.seed()).unwrap_or(DEFAULT_SEED);
    let mut report = Report::new(input, degree, convention, seed);
    let mut session = Session::new(degree, convention, seed);
    let wants = |f: TaskFilter| filter == TaskFilter::All || filter == f;
    let mut ran = false;
    for st in &doc.statements {
        let outcome = match st {
            Statement::Degree(_) | Statement::Convention(_) | Statement::Seed(_) => Ok(None),
            Statement::Let { name, pos, def } => session.define(name, *pos, def).map(|_| None),
            Statement::Classify { name, pos } if wants(TaskFilter::Classify) => {
                session.classify(name, *pos).map(Some)
            }
            Statement::CheckMap {
                map,
                source,
                target,
                pos,
            } if wants(TaskFilter::CheckMap) => {
                session.check_map(map, source, target, *pos).map(Some)
            }
            Statement::Prolong { a, b, alpha, pos } if wants(TaskFilter::Prolong) => {
                session.prolong(a, b, alpha, *pos).map(Some)
            }
            Statement::Verify(s) if filter == TaskFilter::All => {
                report.add_suite(*s);
                Ok(None)
            }
            Statement::Examples if filter == TaskFilter::All => {
                report.add_examples();
                Ok(None)
            }
            _ => Ok(None),
        };
        match outcome {
            Ok(Some(v)) => {
                ran = true;
                report.tasks.push(v);
            }
            Ok(None) => {}
            Err(e) => report.errors.push(e.to_string()),
        }
    }
    // `classify` without explicit tasks classifies every declared hypersurface
    if filter == TaskFilter::Classify && !ran {
        for (name, obj) in &session.objects {
            if let Object::Hypersurface(m) = obj {
                report.tasks.push(classify_report(name, m, seed));
            }
        }
    }
    report.finish();
    report
}

pub fn run_suite(suite: Suite, degree: u32, convention: Convention, seed: u64) -> Report {
    let mut report = Report::new(
        &format!("verify {}", suite.as_str()),
        degree,
        convention,
        seed,
    );
    report.add_suite(suite);
    report.finish();
    report
}

pub fn run_examples(degree: u32, convention: Convention, seed: u64) -> Report {
    let mut report = Report::new("examples", degree, convention, seed);
    report.add_examples();
    report.finish();
    report
}

fn agreement(name: &str, expected: String, observed: String) -> Value {
    json!({
        "task": "example",
        "name": name,
        "expected": expected,
        "observed": observed,
        "agrees": expected == observed,
    })
}

/// The standard family checks with their expected outcomes.
fn examples(d: u32, conv: Convention, seed: u64) -> Result<Vec<Value>, String> {
    let e = |x: &dyn std::fmt::Display| x.to_string();
    let mut out = Vec::new();
    for (b, c) in [(1u32, 1u32), (2, 3), (3, 4), (4, 4)] {
        let m = families::blowup_hypersurface(b, c, d, conv).map_err(|x| e(&x))?;
        let observed = match m.classify_type().kind {
            TypeKind::Infinite(k) => format!("infinite type {k}"),
            other => format!("{other:?}"),
        };
        out.push(agreement(
            &format!("type of blowup({b}, {c})"),
            format!("infinite type {}", 2 * b - c + 1),
            observed,
        ));
    }
    let h34 = families::blowup_map(3, 4, d).map_err(|x| e(&x))?;
    let h11 = families::blowup_map(1, 1, d).map_err(|x| e(&x))?;
    let h44 = families::blowup_map(4, 4, d).map_err(|x| e(&x))?;
    let comp = h34.compose(&h11).map_err(|x| e(&x))?;
    out.push(agreement(
        "H(3,4) after H(1,1)",
        h44.to_string(),
        comp.to_string(),
    ));
    let m44 = families::blowup_hypersurface(4, 4, d, conv).map_err(|x| e(&x))?;
    let m34 = families::blowup_hypersurface(3, 4, d, conv).map_err(|x| e(&x))?;
    out.push(
        check_map_report(
            "H(1,1)",
            "blowup(4, 4)",
            "blowup(3, 4)",
            &h11,
            &m44,
            &m34,
            seed,
        )
        .map_err(|x| e(&x))?,
    );
    let m1 = families::exp_model(1, d).map_err(|x| e(&x))?;
    for k in [2u32, 3] {
        let mk = families::exp_model(k, d).map_err(|x| e(&x))?;
        let tk = families::tk_map(k, d).map_err(|x| e(&x))?;
        let sends = tk.sends_into(&mk, &m1).map_err(|x| e(&x))?;
        out.push(agreement(
            &format!("T({k}) sends exp_model({k}) into exp_model(1)"),
            "CertifiedTrue".into(),
            format!("{:?}", sends.status),
        ));
        let trord = tk.transversal_order().map_err(|x| e(&x))?;
        out.push(agreement(
            &format!("trord T({k})"),
            k.to_string(),
            trord.to_string(),
        ));
    }
    let h4 = families::hk_map(4, d).map_err(|x| e(&x))?;
    out.push(agreement(
        "trord H(4) on exp_model(1)",
        "4".into(),
        h4.transversal_order().map_err(|x| e(&x))?.to_string(),
    ));
    let psi = families::psi_example(d);
    let mpsi = families::m_psi(&psi, 2, d, conv).map_err(|x| e(&x))?;
    let heis2 = families::heisenberg(2, d, conv).map_err(|x| e(&x))?;
    let hpsi = families::psi_map(&psi, 2, d).map_err(|x| e(&x))?;
    out.push(
        check_map_report(
            "(psi, w)",
            "m_psi(z1, z1*z2)",
            "heisenberg(2)",
            &hpsi,
            &mpsi,
            &heis2,
            seed,
        )
        .map_err(|x| e(&x))?,
    );
    let (rm, rm2, rh) = families::remark_instance(d, conv).map_err(|x| e(&x))?;
    out.push(classify_report("Im w = |z w|^2", &rm, seed));
    out.push(
        check_map_report(
            "(z, z*w)",
            "Im w = |z w|^2",
            "heisenberg(1)",
            &rh,
            &rm,
            &rm2,
            seed,
        )
        .map_err(|x| e(&x))?,
    );
    let dil = families::dilation(scalar::from_int(2), d);
    out.push(
        check_map_report(
            "(2*z, w)",
            "exp_model(1)",
            "exp_model(1)",
            &dil,
            &m1,
            &m1,
            seed,
        )
        .map_err(|x| e(&x))?,
    );
    Ok(out)
}
