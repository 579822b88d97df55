//! Precovering families, resolutions and the hypothesis checks.
//!
//! A family is given by a precover `R_x → x` for every object `x`. An object
//! is a member exactly when its precover splits, so membership never needs a
//! decomposition into indecomposables.

use std::sync::Arc;

use rand::Rng;
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::chctx::{disk, sphere, truncation_w, FComplex};
use crate::error::{Error, Result};
use crate::groups::SubgroupEmbedding;
use crate::linalg::{solve_linear, Mat};
use crate::modctx::{counit_hom, induce, jordan, regular, trivial, GModule};
use crate::stable::{desuspend, rng, suspend, ComplexContext, FrobeniusContext, ModuleContext};

pub const DEFAULT_CAP: usize = 4;
pub const DEFAULT_BUDGET: usize = 4096;

/// An object with a display label.
#[derive(Clone, Debug)]
pub struct Named<O> {
    pub label: String,
    pub obj: O,
}

impl<O> Named<O> {
    pub fn new(label: impl Into<String>, obj: O) -> Self {
        Self { label: label.into(), obj }
    }
}

pub trait PrecoverSystem<C: FrobeniusContext>: Send + Sync {
    fn name(&self) -> String;
    fn precover_of(&self, ctx: &C, x: &C::Obj) -> Result<C::Hom>;
    fn generators(&self, ctx: &C) -> Result<Vec<Named<C::Obj>>>;

    /// Objects standing in for "every member" during verification:
    /// generators and their shifts up to `window`.
    fn test_objects(&self, ctx: &C, window: usize, _seed: u64) -> Result<Vec<Named<C::Obj>>> {
        let mut out = Vec::new();
        for g in self.generators(ctx)? {
            let (mut up, mut down) = (g.obj.clone(), g.obj.clone());
            out.push(g.clone());
            for k in 1..=window {
                up = suspend(ctx, &up)?.0;
                out.push(Named::new(format!("{}[{k}]", g.label), up.clone()));
                down = desuspend(ctx, &down)?.0;
                out.push(Named::new(format!("{}[-{k}]", g.label), down.clone()));
            }
        }
        Ok(out)
    }

    /// Objects to resolve or to probe the precover with.
    fn sample_object(&self, ctx: &C, rng: &mut SplitMix64) -> C::Obj {
        ctx.random_object(rng)
    }
}

/// Counit precovers `Ind Res x → x` for a subgroup `H ≤ G`: the members are
/// the relatively `H`-projective modules.
pub struct SubgroupInduced {
    pub emb: SubgroupEmbedding,
}

impl SubgroupInduced {
    pub fn new(emb: SubgroupEmbedding) -> Self {
        Self { emb }
    }
}

impl PrecoverSystem<ModuleContext> for SubgroupInduced {
    fn name(&self) -> String {
        format!("subgroup_induced(index {})", self.emb.index())
    }

    fn precover_of(&self, _ctx: &ModuleContext, x: &Arc<GModule>) -> Result<crate::modctx::GModuleHom> {
        Ok(counit_hom(x, &self.emb))
    }

    fn generators(&self, ctx: &ModuleContext) -> Result<Vec<Named<Arc<GModule>>>> {
        let sub = Arc::new(self.emb.sub.clone());
        let mut out = vec![Named::new("Ind(k)", Arc::new(induce(&ctx.group, &self.emb, &trivial(&sub, ctx.field))))];
        for s in 2..sub.order() {
            if let Ok(j) = jordan(&sub, ctx.field, s) {
                out.push(Named::new(format!("Ind(J{s})"), Arc::new(induce(&ctx.group, &self.emb, &j))));
            }
        }
        out.push(Named::new("kG", Arc::new(regular(&ctx.group, ctx.field))));
        Ok(out)
    }
}

/// Precovers by evaluation from finitely many generators: `R_x` is a sum of
/// copies of generators, one per hom basis element into `x`.
pub struct AddList<C: FrobeniusContext> {
    gens: Vec<Named<C::Obj>>,
    /// drop components that already factor through the ones kept
    pub prune: bool,
}

impl<C: FrobeniusContext> AddList<C> {
    /// Generators as given; callers adjoin the projective-injective ones.
    pub fn with_generators(gens: Vec<Named<C::Obj>>, prune: bool) -> Self {
        Self { gens, prune }
    }

    pub fn gens(&self) -> &[Named<C::Obj>] {
        &self.gens
    }
}

impl AddList<ModuleContext> {
    /// The regular module is always adjoined last.
    pub fn modules(ctx: &ModuleContext, mut gens: Vec<Named<Arc<GModule>>>, prune: bool) -> Self {
        gens.push(Named::new("kG", Arc::new(regular(&ctx.group, ctx.field))));
        Self { gens, prune }
    }
}

impl AddList<ComplexContext> {
    /// Disks covering the context's degree range are always adjoined last.
    pub fn complexes(ctx: &ComplexContext, mut gens: Vec<Named<Arc<FComplex>>>, prune: bool) -> Result<Self> {
        for i in ctx.lo..=ctx.hi + 1 {
            gens.push(Named::new(format!("D({i})"), Arc::new(disk(ctx.field, i)?)));
        }
        Ok(Self { gens, prune })
    }
}

impl<C: FrobeniusContext> PrecoverSystem<C> for AddList<C> {
    fn name(&self) -> String {
        let labels: Vec<&str> = self.gens.iter().map(|g| g.label.as_str()).collect();
        format!("add_list{{{}}}", labels.join(", "))
    }

    fn precover_of(&self, ctx: &C, x: &C::Obj) -> Result<C::Hom> {
        let mut parts: Vec<C::Obj> = Vec::new();
        let mut comps: Vec<C::Hom> = Vec::new();
        for g in &self.gens {
            for b in ctx.hom_basis(&g.obj, x) {
                if self.prune && !parts.is_empty() {
                    let partial = evaluation(ctx, &parts, &comps, x);
                    if factor_all(ctx, std::slice::from_ref(&b), &partial) {
                        continue;
                    }
                }
                parts.push(g.obj.clone());
                comps.push(b);
            }
        }
        Ok(evaluation(ctx, &parts, &comps, x))
    }

    fn generators(&self, _ctx: &C) -> Result<Vec<Named<C::Obj>>> {
        Ok(self.gens.clone())
    }
}

/// `⊕ parts → x` with the given components.
fn evaluation<C: FrobeniusContext>(ctx: &C, parts: &[C::Obj], comps: &[C::Hom], x: &C::Obj) -> C::Hom {
    let sum = ctx.direct_sum(parts);
    let mut acc = ctx.zero_hom(&sum.obj, x);
    for (c, pr) in comps.iter().zip(&sum.projections) {
        acc = ctx.add(&acc, &ctx.compose(c, pr));
    }
    acc
}

/// Precovers by the good truncation `W(x) ↪ x`; the members are the
/// complexes supported in non-negative degrees.
pub struct Truncation;

impl PrecoverSystem<ComplexContext> for Truncation {
    fn name(&self) -> String {
        "truncation".into()
    }

    fn precover_of(&self, _ctx: &ComplexContext, x: &Arc<FComplex>) -> Result<crate::chctx::ChainMap> {
        Ok(truncation_w(x).1)
    }

    fn generators(&self, ctx: &ComplexContext) -> Result<Vec<Named<Arc<FComplex>>>> {
        let mut out = Vec::new();
        for i in 0..=ctx.hi.max(0) {
            out.push(Named::new(format!("S({i})"), Arc::new(sphere(ctx.field, i)?)));
        }
        out.push(Named::new("D(1)", Arc::new(disk(ctx.field, 1)?)));
        Ok(out)
    }

    fn test_objects(&self, ctx: &ComplexContext, window: usize, seed: u64) -> Result<Vec<Named<Arc<FComplex>>>> {
        let w = window as i32;
        let mut out = Vec::new();
        for i in 0..=w {
            out.push(Named::new(format!("S({i})"), Arc::new(sphere(ctx.field, i)?)));
        }
        for i in 1..=w {
            out.push(Named::new(format!("D({i})"), Arc::new(disk(ctx.field, i)?)));
        }
        let mut r = rng(seed);
        for k in 0..3 {
            let c = crate::chctx::random_complex(ctx.field, 0, w, ctx.max_dim, &mut r)?;
            out.push(Named::new(format!("rand{k}[0,{w}]"), Arc::new(c)));
        }
        Ok(out)
    }
}

/// Whether every `f` in `fs` factors as `target ∘ g`, decided by one solve
/// over a hom basis into the source of `target`.
pub fn factor_all<C: FrobeniusContext>(ctx: &C, fs: &[C::Hom], target: &C::Hom) -> bool {
    let Some(first) = fs.first() else { return true };
    if fs.iter().all(|f| ctx.is_zero(f)) {
        return true;
    }
    let (r, x) = (ctx.src(first), ctx.src(target));
    let basis = ctx.hom_basis(&r, &x);
    let rows = ctx.flatten(first).len();
    let cols: Vec<Vec<u32>> = basis.iter().map(|b| ctx.flatten(&ctx.compose(target, b))).collect();
    let a = Mat::from_columns(ctx.field(), rows, &cols);
    let rhs: Vec<Vec<u32>> = fs.iter().map(|f| ctx.flatten(f)).collect();
    let b = Mat::from_columns(ctx.field(), rows, &rhs);
    matches!(solve_linear(&a, &b), Ok(Some(_)))
}

/// Membership: the precover of `x` is a split epimorphism.
pub fn is_member<C: FrobeniusContext, S: PrecoverSystem<C> + ?Sized>(ctx: &C, sys: &S, x: &C::Obj) -> Result<bool> {
    if ctx.dim(x) == 0 {
        return Ok(true);
    }
    let p = sys.precover_of(ctx, x)?;
    if !ctx.is_epi(&p) {
        return Ok(false);
    }
    Ok(factor_all(ctx, &[ctx.identity(x)], &p))
}

#[derive(Clone, Debug)]
pub struct Step<C: FrobeniusContext> {
    pub k: C::Obj,
    pub r: C::Obj,
    /// `R_i → K_i`
    pub precover: C::Hom,
    pub kernel: C::Obj,
    /// `K_{i+1} → R_i`
    pub inclusion: C::Hom,
    pub conflation: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Outcome {
    FiniteDim(usize),
    CapReached(usize),
}

#[derive(Clone, Debug)]
pub struct Resolution<C: FrobeniusContext> {
    pub x: C::Obj,
    pub steps: Vec<Step<C>>,
    pub outcome: Outcome,
}

impl<C: FrobeniusContext> Resolution<C> {
    /// `K_i`, with `K_0 = x`.
    pub fn k(&self, i: usize) -> &C::Obj {
        if i == 0 {
            &self.x
        } else {
            &self.steps[i - 1].kernel
        }
    }

    pub fn kernel_dims(&self, ctx: &C) -> Vec<usize> {
        self.steps.iter().map(|s| ctx.dim(&s.kernel)).collect()
    }

    pub fn all_conflations(&self) -> bool {
        self.steps.iter().all(|s| s.conflation)
    }
}

/// Precover, take the kernel, repeat until a kernel is a member or `cap`
/// steps are taken. The budget bounds `dim R_i · dim K_i` at each step.
pub fn build_resolution<C: FrobeniusContext, S: PrecoverSystem<C> + ?Sized>(
    ctx: &C,
    sys: &S,
    x: &C::Obj,
    cap: usize,
    budget: usize,
) -> Result<Resolution<C>> {
    let mut steps: Vec<Step<C>> = Vec::new();
    let mut k = x.clone();
    loop {
        if is_member(ctx, sys, &k)? {
            return Ok(Resolution { x: x.clone(), outcome: Outcome::FiniteDim(steps.len()), steps });
        }
        if steps.len() == cap {
            return Ok(Resolution { x: x.clone(), outcome: Outcome::CapReached(cap), steps });
        }
        let precover = sys.precover_of(ctx, &k)?;
        let r = ctx.src(&precover);
        let used = ctx.dim(&r) * ctx.dim(&k);
        if used > budget {
            return Err(Error::DimensionBudgetExceeded { used, budget });
        }
        let (kernel, inclusion) = ctx.kernel(&precover);
        assert!(ctx.is_zero(&ctx.compose(&precover, &inclusion)), "precover ∘ kernel inclusion must vanish");
        let conflation = ctx.is_epi(&precover);
        steps.push(Step { k: k.clone(), r, precover, kernel: kernel.clone(), inclusion, conflation });
        k = kernel;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureCheck {
    pub object: String,
    pub member: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub system: String,
    pub factorization_pairs: usize,
    pub factorization_failures: Vec<String>,
    pub shift_up: Vec<ClosureCheck>,
    pub shift_down: Vec<ClosureCheck>,
    pub injective_hull: Vec<ClosureCheck>,
}

impl HypothesisReport {
    pub fn precovering(&self) -> bool {
        self.factorization_failures.is_empty()
    }

    pub fn closed_up(&self) -> bool {
        self.shift_up.iter().all(|c| c.member)
    }

    pub fn closed_down(&self) -> bool {
        self.shift_down.iter().all(|c| c.member)
    }

    pub fn hull_closed(&self) -> bool {
        self.injective_hull.iter().all(|c| c.member)
    }

    /// The hypotheses as the ladder uses them; closure under the inverse
    /// shift is informational only.
    pub fn passes(&self) -> bool {
        self.precovering() && self.closed_up() && self.hull_closed()
    }

    pub fn shift_up_witnesses(&self) -> Vec<&str> {
        self.shift_up.iter().filter(|c| !c.member).map(|c| c.object.as_str()).collect()
    }
}

/// Spot-checks that every hom from a member into `x` factors through the
/// precover of `x`; one `(generator, sample)` pair per round.
pub fn factorization_spot_check<C: FrobeniusContext, S: PrecoverSystem<C> + ?Sized>(
    ctx: &C,
    sys: &S,
    pairs: usize,
    seed: u64,
) -> Result<Vec<String>> {
    let gens = sys.generators(ctx)?;
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for round in 0..pairs {
        let g = &gens[r.gen_range(0..gens.len())];
        let x = sys.sample_object(ctx, &mut r);
        let p = sys.precover_of(ctx, &x)?;
        let homs = ctx.hom_basis(&g.obj, &x);
        if !factor_all(ctx, &homs, &p) {
            failures.push(format!("{} -> sample {round}", g.label));
        }
    }
    Ok(failures)
}

pub fn check_hypotheses<C: FrobeniusContext, S: PrecoverSystem<C> + ?Sized>(
    ctx: &C,
    sys: &S,
    pairs: usize,
    seed: u64,
) -> Result<HypothesisReport> {
    let factorization_failures = factorization_spot_check(ctx, sys, pairs, seed)?;
    let gens = sys.generators(ctx)?;
    let mut shift_up = Vec::new();
    let mut shift_down = Vec::new();
    let mut injective_hull = Vec::new();
    for g in &gens {
        let up = suspend(ctx, &g.obj)?.0;
        shift_up.push(ClosureCheck { object: format!("suspend({})", g.label), member: is_member(ctx, sys, &up)? });
        let down = desuspend(ctx, &g.obj)?.0;
        shift_down
            .push(ClosureCheck { object: format!("desuspend({})", g.label), member: is_member(ctx, sys, &down)? });
        let hull = ctx.dst(&ctx.injective_embedding(&g.obj)?);
        injective_hull.push(ClosureCheck { object: format!("I({})", g.label), member: is_member(ctx, sys, &hull)? });
    }
    Ok(HypothesisReport {
        system: sys.name(),
        factorization_pairs: pairs,
        factorization_failures,
        shift_up,
        shift_down,
        injective_hull,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chctx::direct_sum;
    use crate::groups::{subgroup_generated, FiniteGroup};
    use crate::linalg::PrimeField;

    fn c4() -> ModuleContext {
        ModuleContext::new(Arc::new(FiniteGroup::cyclic(4).unwrap()), PrimeField::new(2).unwrap())
    }

    fn c2_in_c4(ctx: &ModuleContext) -> SubgroupInduced {
        SubgroupInduced::new(subgroup_generated(&ctx.group, &[2]).unwrap())
    }

    fn j(ctx: &ModuleContext, s: usize) -> Arc<GModule> {
        Arc::new(jordan(&ctx.group, ctx.field, s).unwrap())
    }

    fn s0_plus_sm1(cc: &ComplexContext) -> Arc<FComplex> {
        let a = Arc::new(sphere(cc.field, 0).unwrap());
        let b = Arc::new(sphere(cc.field, -1).unwrap());
        direct_sum(cc.field, &[a, b]).complex
    }

    #[test]
    fn precover_examples() {
        let ctx = c4();
        let sys = c2_in_c4(&ctx);
        let triv = Arc::new(trivial(&ctx.group, ctx.field));
        let p = sys.precover_of(&ctx, &triv).unwrap();
        assert_eq!(p.src.dim(), 2);
        assert!(ctx.is_epi(&p));

        // hom(J2, J1) and hom(kC4, J1) are both one-dimensional
        let list = AddList::modules(&ctx, vec![Named::new("J2", j(&ctx, 2))], false);
        let p = list.precover_of(&ctx, &j(&ctx, 1)).unwrap();
        assert_eq!(p.src.dim(), 2 + 4);
        assert!(ctx.is_morphism(&p));

        let cc = ComplexContext::new(PrimeField::new(2).unwrap());
        let x = s0_plus_sm1(&cc);
        let p = Truncation.precover_of(&cc, &x).unwrap();
        assert_eq!(p.src.slot_dims(), sphere(cc.field, 0).unwrap().slot_dims());
        assert!(cc.is_morphism(&p));
    }

    #[test]
    fn membership_examples() {
        let ctx = c4();
        let list = AddList::modules(&ctx, vec![Named::new("J2", j(&ctx, 2))], false);
        for g in list.gens() {
            assert!(is_member(&ctx, &list, &g.obj).unwrap(), "{}", g.label);
        }
        assert!(!is_member(&ctx, &list, &j(&ctx, 1)).unwrap());
        let sys = c2_in_c4(&ctx);
        assert!(!is_member(&ctx, &sys, &Arc::new(trivial(&ctx.group, ctx.field))).unwrap());
        assert!(is_member(&ctx, &sys, &j(&ctx, 2)).unwrap());

        let cc = ComplexContext::new(PrimeField::new(2).unwrap());
        assert!(!is_member(&cc, &Truncation, &s0_plus_sm1(&cc)).unwrap());
        assert!(is_member(&cc, &Truncation, &Arc::new(disk(cc.field, 1).unwrap())).unwrap());
        assert!(!is_member(&cc, &Truncation, &Arc::new(disk(cc.field, 0).unwrap())).unwrap());
    }

    #[test]
    fn pruning_keeps_a_precover() {
        let ctx = c4();
        let gens = vec![Named::new("J1", j(&ctx, 1)), Named::new("J3", j(&ctx, 3))];
        let full = AddList::modules(&ctx, gens.clone(), false);
        let pruned = AddList::modules(&ctx, gens, true);
        let x = j(&ctx, 2);
        let pf = full.precover_of(&ctx, &x).unwrap();
        let pp = pruned.precover_of(&ctx, &x).unwrap();
        assert_eq!(pf.src.dim(), 1 + 2 * 3 + 2 * 4);
        assert_eq!(pp.src.dim(), 1 + 3);
        assert!(factor_all(&ctx, &[pf.clone()], &pp));
        assert!(factor_all(&ctx, &[pp], &pf));
    }

    #[test]
    fn resolution_examples() {
        let ctx = c4();
        let sys = c2_in_c4(&ctx);
        let triv = Arc::new(trivial(&ctx.group, ctx.field));
        let res = build_resolution(&ctx, &sys, &triv, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.outcome, Outcome::CapReached(5));
        assert_eq!(res.kernel_dims(&ctx), vec![1; 5]);
        assert!(res.all_conflations());

        let member = j(&ctx, 2);
        let res = build_resolution(&ctx, &sys, &member, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.outcome, Outcome::FiniteDim(0));
        assert!(res.steps.is_empty());

        let cc = ComplexContext::new(PrimeField::new(2).unwrap());
        let res = build_resolution(&cc, &Truncation, &s0_plus_sm1(&cc), 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.outcome, Outcome::FiniteDim(1));
        assert_eq!(res.kernel_dims(&cc), vec![0]);
        assert!(!res.steps[0].conflation);
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = c4();
        let list = AddList::modules(&ctx, vec![Named::new("J1", j(&ctx, 1))], false);
        let err = build_resolution(&ctx, &list, &j(&ctx, 2), 4, 10).unwrap_err();
        assert!(matches!(err, Error::DimensionBudgetExceeded { budget: 10, .. }));
    }

    #[test]
    fn hypothesis_examples() {
        let ctx = c4();
        let rep = check_hypotheses(&ctx, &c2_in_c4(&ctx), 10, 3).unwrap();
        assert!(rep.passes() && rep.closed_down());

        let list = AddList::modules(&ctx, vec![Named::new("J1", j(&ctx, 1))], false);
        let rep = check_hypotheses(&ctx, &list, 10, 3).unwrap();
        assert!(rep.precovering() && rep.hull_closed());
        assert!(!rep.closed_up());
        assert_eq!(rep.shift_up_witnesses(), vec!["suspend(J1)"]);

        let cc = ComplexContext::new(PrimeField::new(2).unwrap());
        let rep = check_hypotheses(&cc, &Truncation, 10, 3).unwrap();
        assert!(rep.passes());
        assert!(!rep.closed_down());
    }
}
