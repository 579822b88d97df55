//! Scenario execution and report rendering.

use std::fmt::Write as _;
use std::sync::Arc;

use relstab_core::chctx::{complex_from_data, direct_sum, disk, sphere, FComplex};
use relstab_core::groups::{subgroup_generated, FiniteGroup, SubgroupEmbedding, DEFAULT_CLOSURE_BOUND};
use relstab_core::linalg::{Mat, PrimeField};
use relstab_core::localize::{
    build_ladder, localization_triangle, remark_iii_check, verify_localization, Conditional, VerificationReport,
};
use relstab_core::modctx::{direct_sum_modules, induce, jordan, regular, trivial, GModule};
use relstab_core::oracle::{hom_oracle, homology_stablehom_oracle, phom_dual_route, OracleReport, DEFAULT_BRUTE_BUDGET};
use relstab_core::precover::{
    build_resolution, check_hypotheses, AddList, HypothesisReport, Named, Outcome, PrecoverSystem, Resolution,
    SubgroupInduced, Truncation,
};
use relstab_core::stable::{is_stably_zero_object, stable_hom, ComplexContext, FrobeniusContext, ModuleContext};
use relstab_core::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::scenario::{
    jordan_size, sphere_or_disk, ContextKind, GroupSpec, ObjectSpec, Scenario, SystemSpec, TaskKind,
};

/// Factorization spot-check pairs run alongside `verify`.
const HYPOTHESIS_PAIRS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
    InputError,
    Exhausted,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::InputError => 2,
            Status::Exhausted => 3,
        }
    }
}

pub fn status_of(err: &Error) -> Status {
    match err {
        Error::NotFinite { .. } | Error::DimensionBudgetExceeded { .. } | Error::BudgetExceeded { .. } => {
            Status::Exhausted
        }
        Error::WellDefinednessFailure { .. }
        | Error::ConditionalViolated
        | Error::CompositeNonzero { .. }
        | Error::FactorizationFailure { .. } => Status::Failed,
        _ => Status::InputError,
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub json: Value,
    pub text: String,
    pub status: Status,
}

impl RunOutput {
    pub fn json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[derive(Serialize)]
struct StepRow {
    k_dim: usize,
    r_dim: usize,
    kernel_dim: usize,
    conflation: bool,
}

#[derive(Serialize)]
struct ResolutionJson {
    outcome: Outcome,
    kernel_dims: Vec<usize>,
    steps: Vec<StepRow>,
}

#[derive(Serialize)]
struct LadderJson {
    depth: usize,
    l_dims: Vec<usize>,
    l0_dim: usize,
    x_dim: usize,
    x_perp_dim: usize,
    x_perp_stably_zero: bool,
    remark_iii: Conditional,
}

#[derive(Serialize)]
struct PairOracle {
    pair: String,
    #[serde(flatten)]
    report: OracleReport,
}

#[derive(Serialize, Default)]
struct OracleJson {
    hom: Option<OracleReport>,
    hom_skipped: Option<String>,
    phom: Vec<PairOracle>,
    homology: Option<OracleReport>,
}

impl OracleJson {
    fn agree(&self) -> bool {
        self.hom.as_ref().map_or(true, |r| r.agree)
            && self.phom.iter().all(|p| p.report.agree)
            && self.homology.as_ref().map_or(true, |r| r.agree)
    }
}

#[derive(Serialize)]
struct StableHomJson {
    source: String,
    hom_dim: usize,
    phom_dim: usize,
    stable_dim: usize,
}

#[derive(Default)]
struct Sections {
    hypotheses: Option<HypothesisReport>,
    resolution: Option<ResolutionJson>,
    ladder: Option<LadderJson>,
    verification: Option<Value>,
    oracle: Option<OracleJson>,
    verdict: &'static str,
    status: Option<Status>,
}

/// Run a validated scenario. Domain errors that stop the pipeline come back
/// as `Err`; exhausted caps inside `localize`/`verify` are reported.
pub fn run(sc: &Scenario) -> Result<RunOutput> {
    let field = PrimeField::new(sc.p)?;
    let sections = match sc.context {
        ContextKind::Module => {
            let group = Arc::new(build_group(sc)?);
            let ctx = ModuleContext::new(group.clone(), field);
            let emb = match &sc.subgroup {
                Some(elems) => Some(subgroup_generated(&group, elems)?),
                None => None,
            };
            let piece = |name: &str| module_piece(&ctx, emb.as_ref(), name);
            let sys: Box<dyn PrecoverSystem<ModuleContext>> = match &sc.system {
                SystemSpec::SubgroupInduced => Box::new(SubgroupInduced::new(emb.clone().expect("validated"))),
                SystemSpec::AddList { gens, prune } => {
                    let named = gens.iter().map(|g| Ok(Named::new(g.clone(), piece(g)?))).collect::<Result<_>>()?;
                    Box::new(AddList::modules(&ctx, named, *prune))
                }
                SystemSpec::Truncation => unreachable!("validated"),
            };
            let ObjectSpec::Sum { parts } = &sc.object else { unreachable!("validated") };
            let pieces = parts.iter().map(|p| piece(p)).collect::<Result<Vec<_>>>()?;
            let x = direct_sum_modules(&group, field, &pieces).module;
            let source = sc.task.source.as_deref().map(piece).transpose()?;
            execute(&ctx, &*sys, &x, source, sc, |_| Ok(None))?
        }
        ContextKind::Complex => {
            let ctx = ComplexContext::new(field);
            let piece = |name: &str| complex_piece(field, name);
            let sys: Box<dyn PrecoverSystem<ComplexContext>> = match &sc.system {
                SystemSpec::Truncation => Box::new(Truncation),
                SystemSpec::AddList { gens, prune } => {
                    let named = gens.iter().map(|g| Ok(Named::new(g.clone(), piece(g)?))).collect::<Result<_>>()?;
                    Box::new(AddList::complexes(&ctx, named, *prune)?)
                }
                SystemSpec::SubgroupInduced => unreachable!("validated"),
            };
            let x = match &sc.object {
                ObjectSpec::Sum { parts } => {
                    let pieces = parts.iter().map(|p| piece(p)).collect::<Result<Vec<_>>>()?;
                    direct_sum(field, &pieces).complex
                }
                ObjectSpec::Complex { degrees, dims, diffs } => {
                    let mats = degrees
                        .iter()
                        .enumerate()
                        .map(|(i, deg)| {
                            let rows = if i == 0 { 0 } else { dims[i - 1] };
                            match diffs.get(deg) {
                                Some(m) if rows > 0 => Mat::from_rows(field, m),
                                _ => Ok(Mat::zeros(field, rows, dims[i])),
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Arc::new(complex_from_data(field, degrees[0], dims, &mats)?)
                }
            };
            let source = sc.task.source.as_deref().map(piece).transpose()?;
            let cc = ctx.clone();
            execute(&ctx, &*sys, &x, source, sc, move |x| homology_stablehom_oracle(&cc, x, -3..=3).map(Some))?
        }
    };
    Ok(render(sc, sections))
}

fn build_group(sc: &Scenario) -> Result<FiniteGroup> {
    match sc.group.as_ref().expect("validated") {
        GroupSpec::Cyclic { n } => FiniteGroup::cyclic(*n),
        GroupSpec::Dihedral { n } => FiniteGroup::dihedral(*n),
        GroupSpec::KleinFour => Ok(FiniteGroup::klein_four()),
        GroupSpec::Permutations { gens } => FiniteGroup::from_permutations(gens, DEFAULT_CLOSURE_BOUND),
    }
}

pub fn module_piece(ctx: &ModuleContext, emb: Option<&SubgroupEmbedding>, name: &str) -> Result<Arc<GModule>> {
    let need_sub = || emb.ok_or_else(|| Error::Validation { key: "subgroup.elems".into(), message: format!("`{name}` needs a subgroup") });
    let m = match name {
        "trivial" => trivial(&ctx.group, ctx.field),
        "regular" => regular(&ctx.group, ctx.field),
        "Ind" => {
            let e = need_sub()?;
            induce(&ctx.group, e, &trivial(&Arc::new(e.sub.clone()), ctx.field))
        }
        _ => {
            if let Some(s) = jordan_size(name) {
                jordan(&ctx.group, ctx.field, s)?
            } else {
                let inner = name.strip_prefix("Ind(").and_then(|r| r.strip_suffix(')'));
                let s = inner.and_then(jordan_size).ok_or_else(|| Error::KindUnavailable(name.to_string()))?;
                let e = need_sub()?;
                induce(&ctx.group, e, &jordan(&Arc::new(e.sub.clone()), ctx.field, s)?)
            }
        }
    };
    Ok(Arc::new(m))
}

pub fn complex_piece(field: PrimeField, name: &str) -> Result<Arc<FComplex>> {
    match sphere_or_disk(name) {
        Some(('S', i)) => Ok(Arc::new(sphere(field, i)?)),
        Some((_, i)) => Ok(Arc::new(disk(field, i)?)),
        None => Err(Error::KindUnavailable(name.to_string())),
    }
}

fn resolution_json<C: FrobeniusContext>(ctx: &C, res: &Resolution<C>) -> ResolutionJson {
    ResolutionJson {
        outcome: res.outcome,
        kernel_dims: res.kernel_dims(ctx),
        steps: res
            .steps
            .iter()
            .map(|s| StepRow {
                k_dim: ctx.dim(&s.k),
                r_dim: ctx.dim(&s.r),
                kernel_dim: ctx.dim(&s.kernel),
                conflation: s.conflation,
            })
            .collect(),
    }
}

fn execute<C: FrobeniusContext>(
    ctx: &C,
    sys: &dyn PrecoverSystem<C>,
    x: &C::Obj,
    source: Option<C::Obj>,
    sc: &Scenario,
    homology: impl Fn(&C::Obj) -> Result<Option<OracleReport>>,
) -> Result<Sections> {
    let t = &sc.task;
    let mut out = Sections { verdict: "pass", ..Default::default() };
    match t.kind {
        TaskKind::StableHom => {
            let src = source.expect("validated");
            let s = stable_hom(ctx, &src, x)?;
            let body = StableHomJson {
                source: t.source.clone().unwrap_or_default(),
                hom_dim: s.hom_dim(),
                phom_dim: s.phom_dim(),
                stable_dim: s.dim(),
            };
            out.verification = Some(json!({ "stable_hom": body }));
        }
        TaskKind::Resolve => {
            let res = build_resolution(ctx, sys, x, t.cap, t.budget)?;
            out.resolution = Some(resolution_json(ctx, &res));
        }
        TaskKind::Localize | TaskKind::Verify => {
            if t.kind == TaskKind::Verify {
                out.hypotheses = Some(check_hypotheses(ctx, sys, HYPOTHESIS_PAIRS, t.seed)?);
            }
            let res = build_resolution(ctx, sys, x, t.cap, t.budget)?;
            out.resolution = Some(resolution_json(ctx, &res));
            let ladder = match build_ladder(ctx, &res) {
                Ok(l) => l,
                Err(Error::NotFinite { .. }) => {
                    out.verdict = "not_finite";
                    out.status = Some(Status::Exhausted);
                    return Ok(out);
                }
                Err(e) => return Err(e),
            };
            let tri = localization_triangle(ctx, &ladder)?;
            let remark = remark_iii_check(ctx, &tri, &ladder)?;
            out.ladder = Some(LadderJson {
                depth: ladder.depth(),
                l_dims: (0..ladder.rungs.len()).map(|i| ctx.dim(ladder.l(i))).collect(),
                l0_dim: ctx.dim(&tri.x_r),
                x_dim: ctx.dim(&tri.x),
                x_perp_dim: ctx.dim(&tri.x_perp),
                x_perp_stably_zero: is_stably_zero_object(ctx, &tri.x_perp)?,
                remark_iii: remark,
            });
            if t.kind == TaskKind::Verify {
                let rep: VerificationReport = verify_localization(ctx, &tri, sys, t.window, t.seed, t.depth)?;
                if !rep.verdict {
                    out.verdict = "fail";
                    out.status = Some(Status::Failed);
                }
                out.verification = Some(serde_json::to_value(&rep).expect("reports serialize"));
            }
        }
        TaskKind::Oracle => {
            let mut o = OracleJson::default();
            match hom_oracle(ctx, x, x, DEFAULT_BRUTE_BUDGET) {
                Ok(r) => o.hom = Some(r),
                Err(Error::BudgetExceeded { size, budget }) => {
                    o.hom_skipped = Some(format!("search space {size} exceeds {budget}"))
                }
                Err(e) => return Err(e),
            }
            o.phom.push(PairOracle { pair: "(X, X)".into(), report: phom_dual_route(ctx, x, x)? });
            for g in sys.generators(ctx)? {
                o.phom.push(PairOracle { pair: format!("({}, X)", g.label), report: phom_dual_route(ctx, &g.obj, x)? });
            }
            o.homology = homology(x)?;
            if !o.agree() {
                out.verdict = "fail";
                out.status = Some(Status::Failed);
            }
            out.oracle = Some(o);
        }
    }
    Ok(out)
}

fn render(sc: &Scenario, s: Sections) -> RunOutput {
    let json = json!({
        "scenario": sc,
        "hypotheses": s.hypotheses,
        "resolution": s.resolution,
        "ladder": s.ladder,
        "verification": s.verification,
        "oracle": s.oracle,
        "verdict": s.verdict,
        "seed": sc.task.seed,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let text = render_text(sc, &s);
    RunOutput { json, text, status: s.status.unwrap_or(Status::Ok) }
}

fn yes(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn render_text(sc: &Scenario, s: &Sections) -> String {
    let mut t = String::new();
    let ctx = match (&sc.context, &sc.group) {
        (ContextKind::Module, Some(g)) => format!("modules over F_{}, {}", sc.p, serde_json::to_string(g).unwrap()),
        _ => format!("complexes over F_{}", sc.p),
    };
    let task = &sc.task;
    let _ = writeln!(t, "context      {ctx}");
    let _ = writeln!(t, "system       {}", serde_json::to_string(&sc.system).unwrap());
    let _ = writeln!(
        t,
        "task         {} cap={} window={} seed={} depth={} budget={}",
        snake(&task.kind), task.cap, task.window, task.seed, task.depth, task.budget
    );
    if let Some(h) = &s.hypotheses {
        let _ = writeln!(
            t,
            "hypotheses   (i) {}  (ii)+ {}  (ii)- {}  (iii) {}",
            yes(h.precovering()),
            yes(h.closed_up()),
            if h.closed_down() { "pass" } else { "fail (informational)" },
            yes(h.hull_closed())
        );
        for w in h.shift_up_witnesses() {
            let _ = writeln!(t, "  not a member: {w}");
        }
    }
    if let Some(r) = &s.resolution {
        let outcome = match r.outcome {
            Outcome::FiniteDim(d) => format!("finite dimension {d}"),
            Outcome::CapReached(c) => format!("cap {c} reached"),
        };
        let _ = writeln!(t, "resolution   {outcome}; kernel dims {:?}", r.kernel_dims);
        for (i, st) in r.steps.iter().enumerate() {
            let _ = writeln!(
                t,
                "  step {i}: dim K={} dim R={} dim ker={} conflation={}",
                st.k_dim, st.r_dim, st.kernel_dim, st.conflation
            );
        }
    }
    if let Some(l) = &s.ladder {
        let _ = writeln!(
            t,
            "ladder       depth {}; dim L0={} dim X={} dim X_perp={} (stably zero: {}); remark iii: {}",
            l.depth, l.l0_dim, l.x_dim, l.x_perp_dim, l.x_perp_stably_zero, snake(&l.remark_iii)
        );
    }
    if let Some(v) = &s.verification {
        if let Some(sh) = v.get("stable_hom") {
            let _ = writeln!(
                t,
                "stable hom   from {}: hom {} projective {} stable {}",
                sh["source"].as_str().unwrap_or(""),
                sh["hom_dim"],
                sh["phom_dim"],
                sh["stable_dim"]
            );
        } else {
            let _ = writeln!(t, "{:<40} {:>7} {:>7} {:>5} {:>9}", "test object", "(R,L0)", "(R,X)", "iso", "(R,Xperp)");
            for section in ["per_object", "extension"] {
                for row in v[section].as_array().into_iter().flatten() {
                    let _ = writeln!(
                        t,
                        "{:<40} {:>7} {:>7} {:>5} {:>9}",
                        row["object"].as_str().unwrap_or(""),
                        row["dim_from_l0"].to_string(),
                        row["dim_from_x"].to_string(),
                        if row["iso"].as_bool() == Some(true) { "yes" } else { "NO" },
                        row["perp_dim"].to_string()
                    );
                }
            }
        }
    }
    if let Some(o) = &s.oracle {
        match (&o.hom, &o.hom_skipped) {
            (Some(r), _) => {
                let _ = writeln!(t, "oracle hom   {} ({} candidates)", yes(r.agree), r.search_space);
            }
            (None, Some(why)) => {
                let _ = writeln!(t, "oracle hom   skipped: {why}");
            }
            _ => {}
        }
        for p in &o.phom {
            let _ = writeln!(t, "oracle phom  {:<20} {}", p.pair, yes(p.report.agree));
        }
        if let Some(h) = &o.homology {
            let _ = writeln!(t, "oracle H_*   {} {:?}", yes(h.agree), h.route_b[0]);
        }
    }
    let _ = writeln!(t, "verdict      {}", s.verdict);
    t
}

fn snake<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}
