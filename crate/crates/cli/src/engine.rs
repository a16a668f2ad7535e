//! Executes scenario steps against the core library.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use ciwb_core::avoidance::{avoid_maximal_ideals, fixtures, residual_ideal, AvoidSearch};
use ciwb_core::ideal_ops::{congruence_holds, construct_b, is_regular_sequence, recognize_b};
use ciwb_core::k0_models::{builtin_model, divisibility_check, sphere_obstruction_demo, theorem81_witness, ModelFile};
use ciwb_core::lambda_ring::{chern_total, gamma_filtration, whitney_batch, FiltrationReport, K0Class, K0Model};
use ciwb_core::lattice::Lattice;
use ciwb_core::patching::{
    is_idempotent, k0_class_of_patched, patch_module_with, sampled_ranks, trivial_gluing, universal_gluing,
    verify_surjection, verify_surjection_onto, PatchedModule,
};
use ciwb_core::suslin::{complete_row, universal_certificate, verify_certificate, SuslinCertificate};
use ciwb_core::universal::builtin_ring;
use ciwb_core::{Budget, Colength, Execution, Ideal, PolyRing, Polynomial, RingPresentation};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::scenario::{Scenario, Step};

pub const REPORT_SCHEMA: &str = "ciwb.report/v1";

pub const OPS: &[&str] = &[
    "groebner.basis",
    "groebner.member",
    "groebner.normal_form",
    "groebner.colength",
    "ideal.equal",
    "ideal.sum",
    "ideal.product",
    "ideal.intersection",
    "ideal.colon",
    "ideal.power",
    "ideal.bj",
    "ideal.recognize",
    "ideal.regular",
    "avoid.fixture",
    "avoid.residual",
    "suslin.complete",
    "suslin.verify",
    "suslin.det",
    "patch.universal",
    "patch.trivial",
    "patch.idempotent",
    "patch.ranks",
    "patch.surjection",
    "patch.class",
    "k0.filtration",
    "k0.graded",
    "k0.index",
    "k0.top_multiple",
    "k0.class",
    "k0.chern",
    "k0.divisible",
    "k0.witness",
    "k0.whitney",
    "k0.sphere",
];

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub seed: u64,
    pub budget: Budget,
    pub exec: Execution,
}

enum Obj {
    Poly(Polynomial),
    Polys(Vec<Polynomial>),
    Ideal(Ideal),
    Cert(Box<SuslinCertificate>),
    Module(Box<PatchedModule>),
    Filtration(Box<FiltrationReport>),
    Class(K0Class),
    Plain,
}

/// What a step produced: text for people, JSON for machines, and the
/// object for later references.
struct Produced {
    display: String,
    value: Value,
    obj: Obj,
}

fn plain(display: String, value: Value) -> Produced {
    Produced { display, value, obj: Obj::Plain }
}

fn boolean(b: bool) -> Produced {
    plain(b.to_string(), Value::Bool(b))
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn list(xs: &[Polynomial]) -> String {
    format!("[{}]", strings(xs).join(", "))
}

#[derive(Debug, Serialize)]
pub struct StepResult {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub op: String,
    pub inputs: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    pub display: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<Value>,
    /// `None` when the step has no expectation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// The machine-readable report. The scenario fields come first, so a report
/// parses back as the scenario that produced it.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    #[serde(flatten)]
    pub scenario: Scenario,
    pub seed: u64,
    pub results: Vec<StepResult>,
    pub passed: bool,
}

pub struct Outcome {
    pub report: Report,
    /// Set when a step failed with an error rather than a mismatch.
    pub error: Option<CliError>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        match &self.error {
            Some(e) => e.exit_code(),
            None if self.report.passed => 0,
            None => 1,
        }
    }
}

struct Ctx<'a> {
    sc: &'a Scenario,
    opts: Options,
    base: PathBuf,
    ring: Option<Arc<RingPresentation>>,
    objs: BTreeMap<String, Obj>,
    displays: BTreeMap<String, String>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Argument(msg.into())
}

pub fn parse_ring(decl: &str, relations: &[String], budget: &Budget) -> Result<Arc<RingPresentation>, CliError> {
    let decl = decl.trim();
    if !decl.starts_with('Q') {
        if !relations.is_empty() {
            return Err(bad(format!("builtin ring `{decl}` takes no extra relations")));
        }
        return builtin_ring(decl).map_err(|_| CliError::Parse(format!("unknown ring `{decl}`")));
    }
    let ring = PolyRing::parse_decl(decl)?;
    let rels = relations.iter().map(|r| Polynomial::parse(&ring, r)).collect::<Result<Vec<_>, _>>()?;
    Ok(RingPresentation::with_budget(ring, rels, budget)?)
}

/// Runs every step in order. Mismatches are recorded and execution goes
/// on; an operation error stops the run.
pub fn run(sc: &Scenario, opts: Options, base: PathBuf) -> Outcome {
    let mut results = Vec::with_capacity(sc.steps.len());
    let mut ctx = Ctx { sc, opts, base, ring: None, objs: BTreeMap::new(), displays: BTreeMap::new() };
    let mut error = None;
    if let Some(decl) = &sc.ring {
        match parse_ring(decl, &sc.relations, &opts.budget) {
            Ok(r) => ctx.ring = Some(r),
            Err(e) => error = Some(e),
        }
    }
    if error.is_none() {
        for (i, step) in sc.steps.iter().enumerate() {
            let inputs = ctx.render_inputs(step);
            let mut res = StepResult {
                index: i + 1,
                name: step.name.clone(),
                op: step.op.clone(),
                inputs,
                output: None,
                display: String::new(),
                expect: step.expect.clone(),
                passed: None,
                error: None,
            };
            match ctx.exec(step) {
                Ok(p) => {
                    res.passed = step.expect.as_ref().map(|e| matches(e, &p));
                    res.display = p.display.clone();
                    res.output = Some(p.value);
                    if let Some(n) = &step.name {
                        ctx.displays.insert(n.clone(), p.display);
                        ctx.objs.insert(n.clone(), p.obj);
                    }
                    results.push(res);
                }
                Err(e) => {
                    res.error = Some(e.to_string());
                    res.passed = Some(false);
                    results.push(res);
                    error = Some(e);
                    break;
                }
            }
        }
    }
    let passed = error.is_none() && results.iter().all(|r| r.passed != Some(false));
    Outcome { report: Report { schema: REPORT_SCHEMA, scenario: sc.clone(), seed: opts.seed, results, passed }, error }
}

fn matches(expect: &Value, p: &Produced) -> bool {
    if *expect == p.value {
        return true;
    }
    match (expect, &p.obj) {
        (Value::String(s), Obj::Class(c)) => c.model().parse_class(s).map(|e| e == *c).unwrap_or(false),
        (Value::String(s), _) => normalise(s) == normalise(&p.display),
        (Value::Number(n), _) => n.to_string() == p.display,
        _ => false,
    }
}

fn normalise(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl Ctx<'_> {
    fn render_inputs(&self, step: &Step) -> Map<String, Value> {
        fn render(v: &Value, d: &BTreeMap<String, String>) -> Value {
            match v {
                Value::String(s) => match s.strip_prefix('@').and_then(|r| d.get(r)) {
                    Some(text) => Value::String(text.clone()),
                    None => v.clone(),
                },
                Value::Array(xs) => Value::Array(xs.iter().map(|x| render(x, d)).collect()),
                _ => v.clone(),
            }
        }
        step.args.iter().map(|(k, v)| (k.clone(), render(v, &self.displays))).collect()
    }

    fn ring(&self) -> Result<&Arc<RingPresentation>, CliError> {
        self.ring.as_ref().ok_or_else(|| bad("this operation needs a `ring` declaration"))
    }

    fn reference(&self, v: &Value) -> Option<&Obj> {
        v.as_str().and_then(|s| s.strip_prefix('@')).and_then(|r| self.objs.get(r))
    }

    fn poly(&self, v: &Value) -> Result<Polynomial, CliError> {
        if let Some(obj) = self.reference(v) {
            return match obj {
                Obj::Poly(p) => Ok(p.clone()),
                _ => Err(bad("reference is not a polynomial")),
            };
        }
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(bad(format!("expected a polynomial, got {v}"))),
        };
        let ring = self.ring()?;
        let text = self.sc.polys.get(&text).cloned().unwrap_or(text);
        Ok(ring.reduce(&ring.parse_poly(&text)?))
    }

    fn polys(&self, v: &Value) -> Result<Vec<Polynomial>, CliError> {
        if let Some(obj) = self.reference(v) {
            return match obj {
                Obj::Polys(ps) => Ok(ps.clone()),
                Obj::Ideal(i) => Ok(i.generators().to_vec()),
                Obj::Poly(p) => Ok(vec![p.clone()]),
                _ => Err(bad("reference is not a list of polynomials")),
            };
        }
        match v {
            Value::Array(xs) => xs.iter().map(|x| self.poly(x)).collect(),
            Value::String(s) if self.sc.ideals.contains_key(s) => {
                self.sc.ideals[s].iter().map(|p| self.poly(&Value::String(p.clone()))).collect()
            }
            Value::String(s) => s.split(',').map(|p| self.poly(&Value::String(p.trim().to_string()))).collect(),
            _ => Err(bad(format!("expected a list of polynomials, got {v}"))),
        }
    }

    fn ideal(&self, v: &Value) -> Result<Ideal, CliError> {
        if let Some(Obj::Ideal(i)) = self.reference(v) {
            return Ok(i.clone());
        }
        let gens = self.polys(v)?;
        Ok(Ideal::new(self.ring()?, gens)?.with_budget(self.opts.budget))
    }

    fn model(&self, step: &Step) -> Result<Arc<K0Model>, CliError> {
        Ok(self.models(step)?.0)
    }

    fn models(&self, step: &Step) -> Result<(Arc<K0Model>, Option<Arc<ciwb_core::k0_models::ChowModel>>), CliError> {
        if let Some(path) = step.args.get("model_file").and_then(Value::as_str) {
            let text = std::fs::read_to_string(self.base.join(path))?;
            return Ok(ModelFile::parse(&text)?.build()?);
        }
        let name = str_arg(step, "model")?;
        let (k0, chow) = builtin_model(name)?;
        Ok((k0, Some(chow)))
    }

    fn filtration(&self, step: &Step) -> Result<FiltrationReport, CliError> {
        match step.args.get("filtration").and_then(|v| self.reference(v)) {
            Some(Obj::Filtration(f)) => Ok((**f).clone()),
            Some(_) => Err(bad("`filtration` does not reference a filtration")),
            None => Ok(gamma_filtration(&self.model(step)?)?),
        }
    }

    fn module(&self, step: &Step) -> Result<&PatchedModule, CliError> {
        match step.args.get("module").and_then(|v| self.reference(v)) {
            Some(Obj::Module(m)) => Ok(m),
            _ => Err(bad("`module` must reference a patched module")),
        }
    }

    fn certificate(&self, step: &Step) -> Result<&SuslinCertificate, CliError> {
        match step.args.get("certificate").and_then(|v| self.reference(v)) {
            Some(Obj::Cert(c)) => Ok(c),
            _ => Err(bad("`certificate` must reference a certificate")),
        }
    }

    fn class(&self, model: &Arc<K0Model>, v: &Value) -> Result<K0Class, CliError> {
        if let Some(Obj::Class(c)) = self.reference(v) {
            return Ok(c.clone());
        }
        match v {
            Value::String(s) => Ok(model.named_class(s).map_or_else(|| model.parse_class(s), Ok)?),
            Value::Array(xs) => {
                let coords = xs.iter().map(|x| x.as_i64().ok_or_else(|| bad("class coordinates must be integers")));
                Ok(model.class(&coords.collect::<Result<Vec<_>, _>>()?)?)
            }
            Value::Number(n) => Ok(model.parse_class(&n.to_string())?),
            _ => Err(bad(format!("expected a class, got {v}"))),
        }
    }

    fn exec(&self, step: &Step) -> Result<Produced, CliError> {
        let a = |k: &str| arg(step, k);
        Ok(match step.op.as_str() {
            "groebner.basis" => {
                let b = self.ideal(a("ideal")?)?.basis()?.to_vec();
                Produced { display: list(&b), value: json!(strings(&b)), obj: Obj::Polys(b) }
            }
            "groebner.member" => boolean(self.ideal(a("ideal")?)?.contains(&self.poly(a("poly")?)?)?),
            "groebner.normal_form" => {
                let nf = self.ideal(a("ideal")?)?.normal_form(&self.poly(a("poly")?)?)?;
                Produced { display: nf.to_string(), value: json!(nf.to_string()), obj: Obj::Poly(nf) }
            }
            "groebner.colength" => match self.ideal(a("ideal")?)?.colength()? {
                Colength::Finite(n) => plain(n.to_string(), json!(n)),
                Colength::Infinite => plain("infinite".into(), json!("infinite")),
            },
            "ideal.equal" => boolean(self.ideal(a("left")?)?.equals(&self.ideal(a("right")?)?)?),
            "ideal.sum" => ideal_out(self.ideal(a("left")?)?.sum(&self.ideal(a("right")?)?)?)?,
            "ideal.product" => ideal_out(self.ideal(a("left")?)?.product(&self.ideal(a("right")?)?)?)?,
            "ideal.intersection" => ideal_out(self.ideal(a("left")?)?.intersection(&self.ideal(a("right")?)?)?)?,
            "ideal.colon" => ideal_out(self.ideal(a("left")?)?.colon(&self.ideal(a("right")?)?)?)?,
            "ideal.power" => ideal_out(self.ideal(a("ideal")?)?.power(u32_arg(step, "k")?)?)?,
            "ideal.bj" => {
                let j = self.ideal(a("ideal")?)?;
                let gens = match step.args.get("gens") {
                    Some(v) => self.polys(v)?,
                    None => j.generators().to_vec(),
                };
                ideal_out(construct_b(&j, &gens)?.result)?
            }
            "ideal.recognize" => {
                let j = self.ideal(a("ideal")?)?;
                match recognize_b(&j, &self.polys(a("pattern")?)?)? {
                    Some(c) => {
                        let base = c.base.simplified()?;
                        plain(format!("J = B({base})"), json!({ "recognised": true, "base": strings(base.generators()) }))
                    }
                    None => plain("not of the form B(J0)".into(), json!({ "recognised": false })),
                }
            }
            "ideal.regular" => boolean(is_regular_sequence(&self.polys(a("polys")?)?, self.ring()?)?),
            "avoid.fixture" => self.avoid_fixture(str_arg(step, "fixture")?)?,
            "avoid.residual" => ideal_out(residual_ideal(&self.polys(a("polys")?)?, &self.ideal(a("ideal")?)?)?)?,
            "suslin.complete" => {
                let c = match step.args.get("r") {
                    Some(_) => universal_certificate(usize_arg(step, "r")?)?,
                    None => complete_row(
                        self.ring()?,
                        &self.polys(a("row")?)?,
                        &self.polys(a("cofactors")?)?,
                        &self.poly(a("w")?)?,
                    )?,
                };
                let rows: Vec<String> = c.matrix.to_strings().iter().map(|r| format!("[{}]", r.join(", "))).collect();
                let det = c.witness.pow(c.exponent);
                let display = format!("{}\ndet = ({})^{} = {det}", rows.join("\n"), c.witness, c.exponent);
                Produced { display, value: serde_json::to_value(c.record()).expect("record"), obj: Obj::Cert(Box::new(c)) }
            }
            "suslin.verify" => boolean(verify_certificate(self.certificate(step)?)),
            "suslin.det" => {
                let c = self.certificate(step)?;
                let d = c.presentation().reduce(&c.matrix.det()?);
                Produced { display: d.to_string(), value: json!(d.to_string()), obj: Obj::Poly(d) }
            }
            "patch.universal" | "patch.trivial" => {
                let g = if step.op == "patch.universal" {
                    universal_gluing(usize_arg(step, "n")?)?
                } else {
                    trivial_gluing(self.ring()?, usize_arg(step, "r")?)?
                };
                let p = patch_module_with(&g, self.opts.exec)?;
                let rows: Vec<String> = p.idempotent.to_strings().iter().map(|r| format!("[{}]", r.join(", "))).collect();
                let display = format!(
                    "rank {} summand of A^{} over {}\ne =\n{}",
                    p.rank,
                    p.size(),
                    ring_name(p.presentation()),
                    rows.join("\n")
                );
                Produced { display, value: serde_json::to_value(p.record()).expect("record"), obj: Obj::Module(Box::new(p)) }
            }
            "patch.idempotent" => boolean(is_idempotent(self.module(step)?)),
            "patch.ranks" => {
                let count = opt_usize(step, "points", 20)?;
                let r = sampled_ranks(self.module(step)?, count, self.opts.seed, self.opts.exec)?;
                plain(format!("{r:?}"), json!(r))
            }
            "patch.surjection" => {
                let p = self.module(step)?;
                match step.args.get("ideal") {
                    Some(v) => boolean(verify_surjection_onto(p, &self.ideal(v)?)),
                    None => boolean(verify_surjection(p)),
                }
            }
            "patch.class" => {
                let p = self.module(step)?;
                let model = match step.args.get("model").or_else(|| step.args.get("model_file")) {
                    Some(_) => self.model(step)?,
                    None => builtin_model(&ring_name(p.presentation()))?.0,
                };
                class_out(k0_class_of_patched(p, &model)?)
            }
            "k0.filtration" => {
                let f = self.filtration(step)?;
                let lines = f.describe();
                Produced { display: lines.join("\n"), value: json!(lines), obj: Obj::Filtration(Box::new(f)) }
            }
            "k0.graded" => {
                let f = self.filtration(step)?;
                let k = usize_arg(step, "degree")?;
                let g = f.graded(k).ok_or_else(|| bad(format!("no graded piece Γ^{k}")))?.to_string();
                plain(g.clone(), json!(g))
            }
            "k0.index" => {
                let (f, top) = self.with_top(step)?;
                let k = usize_arg(step, "degree")?;
                match top.index_of(f.level(k)) {
                    Some(i) => plain(i.to_string(), json!(i.to_string())),
                    None => return Err(bad(format!("F^{k} is not a finite-index sublattice of the top cycles"))),
                }
            }
            "k0.top_multiple" => {
                let (f, top) = self.with_top(step)?;
                let k = usize_arg(step, "degree")?;
                let m = top_multiple(&top, f.level(k)).ok_or_else(|| {
                    CliError::Core(ciwb_core::Error::Model(format!("F^{k} is not a multiple of the top cycle lattice")))
                })?;
                plain(m.to_string(), json!(m.to_string()))
            }
            "k0.class" => {
                let m = self.model(step)?;
                class_out(self.class(&m, a("class")?)?)
            }
            "k0.chern" => {
                let f = self.filtration(step)?;
                let x = self.class(f.model(), a("class")?)?;
                let c = chern_total(&x, &f)?;
                let k = usize_arg(step, "degree")?;
                if k >= c.classes.len() {
                    return Err(bad(format!("degree {k} exceeds the dimension")));
                }
                let rep = K0Class::new(f.model(), c.get(k).rep.clone())?;
                let mut p = class_out(rep);
                p.value = json!({ "degree": k, "class": p.display });
                p
            }
            "k0.divisible" => {
                let m = self.model(step)?;
                let x = self.class(&m, a("class")?)?;
                match divisibility_check(&x, u64_arg(step, "by")?) {
                    Some(y) => class_out(y),
                    None => plain("absent".into(), Value::Null),
                }
            }
            "k0.witness" => {
                let (m, chow) = self.models(step)?;
                let f = gamma_filtration(&m)?;
                let (q, q0) = (self.class(&m, a("q")?)?, self.class(&m, a("q0")?)?);
                let run = theorem81_witness(&q, &q0, &f, chow.as_deref())?;
                let chain: Vec<String> = run.chain.iter().map(|(r, k)| format!("{k}·ρ ∈ F^{r}")).collect();
                let display = format!(
                    "Σ(-1)^i λ^i(Q) = {}\nwitness = {}\n{}",
                    run.alternating_sum,
                    run.witness,
                    chain.join("\n")
                );
                Produced {
                    display,
                    value: json!({ "alternating_sum": run.alternating_sum.to_string(), "witness": run.witness.to_string(), "chain": chain }),
                    obj: Obj::Class(run.witness),
                }
            }
            "k0.whitney" => {
                let f = self.filtration(step)?;
                let m = f.model().clone();
                let pairs = opt_usize(step, "pairs", 200)?;
                let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
                let mut draw = || {
                    let c: Vec<i64> = (0..m.ngens()).map(|_| rng.gen_range(-6..=6)).collect();
                    m.class(&c)
                };
                let mut batch = Vec::with_capacity(pairs);
                for _ in 0..pairs {
                    batch.push((draw()?, draw()?));
                }
                let held = whitney_batch(&batch, &f, self.opts.exec)?;
                let failures = held.iter().filter(|h| !**h).count();
                plain(
                    format!("Whitney holds on {}/{pairs} pairs", pairs - failures),
                    json!({ "pairs": pairs, "failures": failures, "holds": failures == 0 }),
                )
            }
            "k0.sphere" => {
                let r = sphere_obstruction_demo()?;
                plain(r.lines.join("\n"), serde_json::to_value(&r).expect("report"))
            }
            other => return Err(CliError::Parse(format!("unknown operation `{other}`"))),
        })
    }

    fn with_top(&self, step: &Step) -> Result<(FiltrationReport, Lattice), CliError> {
        let f = self.filtration(step)?;
        let top = f.model().top_cycle_lattice().ok_or_else(|| bad("the model registers no top cycle lattice"))?;
        Ok((f, top))
    }

    fn avoid_fixture(&self, name: &str) -> Result<Produced, CliError> {
        let fx = fixtures::all()
            .into_iter()
            .find(|f| f.name == name)
            .ok_or_else(|| bad(format!("unknown fixture `{name}`")))?;
        let fs = avoid_maximal_ideals(&fx.ideal, &fx.gens, &fx.avoid, &fx.oracle, &AvoidSearch::default())?;
        let pres = fx.ideal.presentation();
        let regular = is_regular_sequence(&fs, pres)?;
        let congruence = congruence_holds(&fx.ideal, &fs)?;
        let residual = residual_ideal(&fs, &fx.ideal)?;
        let display = format!(
            "f' = {}\nregular: {regular}\nI = (f') + I^2: {congruence}\nresidual J = {residual}",
            list(&fs)
        );
        Ok(Produced {
            display,
            value: json!({
                "sequence": strings(&fs),
                "regular": regular,
                "congruence": congruence,
                "residual": strings(residual.generators()),
            }),
            obj: Obj::Polys(fs),
        })
    }
}

fn ring_name(p: &RingPresentation) -> String {
    p.name().map_or_else(|| p.ring().to_string(), str::to_string)
}

fn ideal_out(i: Ideal) -> Result<Produced, CliError> {
    let s = i.simplified()?;
    Ok(Produced { display: s.to_string(), value: json!(strings(s.generators())), obj: Obj::Ideal(s) })
}

fn class_out(c: K0Class) -> Produced {
    let s = c.to_string();
    Produced { display: s.clone(), value: Value::String(s), obj: Obj::Class(c) }
}

/// The `m ≥ 1` with `sub = m·top`, if any.
fn top_multiple(top: &Lattice, sub: &Lattice) -> Option<BigInt> {
    let index = top.index_of(sub)?;
    let rank = top.rank() as u32;
    if rank == 0 {
        return Some(BigInt::one());
    }
    let m = index.nth_root(rank);
    let scaled = top.scaled(&m);
    (scaled.contains_lattice(sub) && sub.contains_lattice(&scaled)).then_some(m)
}

fn arg<'a>(step: &'a Step, key: &str) -> Result<&'a Value, CliError> {
    step.args.get(key).ok_or_else(|| bad(format!("`{}` needs the argument `{key}`", step.op)))
}

fn str_arg<'a>(step: &'a Step, key: &str) -> Result<&'a str, CliError> {
    arg(step, key)?.as_str().ok_or_else(|| bad(format!("`{key}` must be a string")))
}

fn u64_arg(step: &Step, key: &str) -> Result<u64, CliError> {
    let v = arg(step, key)?;
    v.as_u64()
        .or_else(|| v.as_str().and_then(|s| s.parse().ok()))
        .ok_or_else(|| bad(format!("`{key}` must be a non-negative integer")))
}

fn usize_arg(step: &Step, key: &str) -> Result<usize, CliError> {
    u64_arg(step, key)?.to_usize().ok_or_else(|| bad(format!("`{key}` is too large")))
}

fn u32_arg(step: &Step, key: &str) -> Result<u32, CliError> {
    u64_arg(step, key)?.to_u32().ok_or_else(|| bad(format!("`{key}` is too large")))
}

fn opt_usize(step: &Step, key: &str, default: usize) -> Result<usize, CliError> {
    if step.args.contains_key(key) {
        usize_arg(step, key)
    } else {
        Ok(default)
    }
}
