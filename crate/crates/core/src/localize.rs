//! Homotopy approximation of a finite resolution and the localization
//! triangle `X_R → X → X_{R⊥} →`.
//!
//! Going up the resolution from the left, each `L_i` is the cone of
//! `ε_{i+1}: L_{i+1} → R_i` and the filler `μ_i: L_i → K_i` is the map that
//! is the precover on `R_i` and zero on the injective block. The filler is
//! well defined because `p_i ∘ ε_{i+1} = 0` holds exactly in `E`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::precover::{build_resolution, factor_all, Named, Outcome, PrecoverSystem, Resolution, Step};
use crate::stable::{
    cone_triangle, induced_matrix, is_stably_zero_object, random_hom, rng, stable_hom, FrobeniusContext, Triangle,
};

/// One level of the ladder.
#[derive(Clone, Debug)]
pub struct Rung<C: FrobeniusContext> {
    /// `L_i = cone(ε_{i+1})`
    pub triangle: Triangle<C>,
    /// `μ_i: L_i → K_i`
    pub filler: C::Hom,
    /// `ε_i = incl ∘ μ_i: L_i → R_{i-1}`, absent at the bottom
    pub eps: Option<C::Hom>,
}

#[derive(Clone, Debug)]
pub struct Ladder<C: FrobeniusContext> {
    pub x: C::Obj,
    pub steps: Vec<Step<C>>,
    /// `rungs[i]` produces `L_i`
    pub rungs: Vec<Rung<C>>,
    pub l0: C::Obj,
    pub lambda: C::Hom,
}

impl<C: FrobeniusContext> Ladder<C> {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn l(&self, i: usize) -> &C::Obj {
        &self.rungs[i].triangle.c
    }

    pub fn all_conflations(&self) -> bool {
        self.steps.iter().all(|s| s.conflation)
    }
}

pub fn build_ladder<C: FrobeniusContext>(ctx: &C, res: &Resolution<C>) -> Result<Ladder<C>> {
    match res.outcome {
        Outcome::CapReached(cap) => Err(Error::NotFinite { cap }),
        Outcome::FiniteDim(_) => ladder_from_steps(ctx, &res.x, &res.steps),
    }
}

fn ladder_from_steps<C: FrobeniusContext>(ctx: &C, x: &C::Obj, steps: &[Step<C>]) -> Result<Ladder<C>> {
    let d = steps.len();
    if d == 0 {
        return Ok(Ladder {
            x: x.clone(),
            steps: Vec::new(),
            rungs: Vec::new(),
            l0: x.clone(),
            lambda: ctx.identity(x),
        });
    }
    // R_d := K_d, so ε_d is the last kernel inclusion
    let mut eps = steps[d - 1].inclusion.clone();
    let mut rungs: Vec<Rung<C>> = Vec::with_capacity(d);
    for i in (0..d).rev() {
        let p = &steps[i].precover;
        if !ctx.is_zero(&ctx.compose(p, &eps)) {
            return Err(Error::WellDefinednessFailure { step: i });
        }
        let triangle = cone_triangle(ctx, &eps)?;
        let on_sum = ctx.compose(p, &triangle.cone.sum.projections[0]);
        let filler = ctx
            .lift_through_cokernel(&triangle.cone.proj, &on_sum)
            .ok_or(Error::WellDefinednessFailure { step: i })?;
        let next = (i > 0).then(|| ctx.compose(&steps[i - 1].inclusion, &filler));
        if let Some(e) = &next {
            eps = e.clone();
        }
        rungs.push(Rung { triangle, filler, eps: next });
    }
    rungs.reverse();
    let lambda = rungs[0].filler.clone();
    let l0 = rungs[0].triangle.c.clone();
    // the square R_0 → L_0 → X commutes on the nose
    assert!(
        ctx.equal(&ctx.compose(&lambda, &rungs[0].triangle.g), &steps[0].precover),
        "λ ∘ (R_0 → L_0) must equal the precover of X"
    );
    Ok(Ladder { x: x.clone(), steps: steps.to_vec(), rungs, l0, lambda })
}

#[derive(Clone, Debug)]
pub struct LocalizationTriangle<C: FrobeniusContext> {
    pub x_r: C::Obj,
    pub x: C::Obj,
    pub x_perp: C::Obj,
    pub lambda: C::Hom,
    pub mu: C::Hom,
    pub connecting: C::Hom,
    pub triangle: Triangle<C>,
}

pub fn localization_triangle<C: FrobeniusContext>(ctx: &C, ladder: &Ladder<C>) -> Result<LocalizationTriangle<C>> {
    let t = cone_triangle(ctx, &ladder.lambda)?;
    Ok(LocalizationTriangle {
        x_r: ladder.l0.clone(),
        x: ladder.x.clone(),
        x_perp: t.c.clone(),
        lambda: t.f.clone(),
        mu: t.g.clone(),
        connecting: t.h.clone(),
        triangle: t,
    })
}

/// `(i^!(X), j_!(X)) = (L_0, X_{R⊥})`.
pub fn adjoint_values<C: FrobeniusContext, S: PrecoverSystem<C> + ?Sized>(
    ctx: &C,
    sys: &S,
    x: &C::Obj,
    cap: usize,
    budget: usize,
) -> Result<(C::Obj, C::Obj)> {
    let res = build_resolution(ctx, sys, x, cap, budget)?;
    let ladder = build_ladder(ctx, &res)?;
    let tri = localization_triangle(ctx, &ladder)?;
    Ok((tri.x_r, tri.x_perp))
}

#[derive(Clone, Debug, Serialize)]
pub struct ObjectCheck {
    pub object: String,
    pub dim_from_l0: usize,
    pub dim_from_x: usize,
    /// `(R, L_0)_T → (R, X)_T`, one row per target coordinate
    pub induced: Vec<Vec<u32>>,
    pub iso: bool,
    pub perp_dim: usize,
}

impl ObjectCheck {
    pub fn ok(&self) -> bool {
        self.iso && self.perp_dim == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub per_object: Vec<ObjectCheck>,
    pub extension: Vec<ObjectCheck>,
    pub verdict: bool,
}

pub fn check_object<C: FrobeniusContext>(
    ctx: &C,
    tri: &LocalizationTriangle<C>,
    r: &Named<C::Obj>,
) -> Result<ObjectCheck> {
    let from = stable_hom(ctx, &r.obj, &tri.x_r)?;
    let to = stable_hom(ctx, &r.obj, &tri.x)?;
    let m = induced_matrix(ctx, &from, &to, &tri.lambda);
    let iso = m.rows() == m.cols() && m.rank() == m.rows();
    let perp_dim = stable_hom(ctx, &r.obj, &tri.x_perp)?.dim();
    let induced = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    Ok(ObjectCheck { object: r.label.clone(), dim_from_l0: from.dim(), dim_from_x: to.dim(), induced, iso, perp_dim })
}

/// Samples built from test objects by up to `depth` cone steps of seeded
/// random maps. The base pool keeps test objects no larger than the largest
/// generator so that iterated cones stay small.
pub fn extension_samples<C: FrobeniusContext, S: PrecoverSystem<C> + ?Sized>(
    ctx: &C,
    sys: &S,
    tests: &[Named<C::Obj>],
    depth: usize,
    seed: u64,
) -> Result<Vec<Named<C::Obj>>> {
    const PER_LEVEL: usize = 2;
    let bound = sys.generators(ctx)?.iter().map(|g| ctx.dim(&g.obj)).max().unwrap_or(0);
    let mut pool: Vec<Named<C::Obj>> = tests.iter().filter(|t| ctx.dim(&t.obj) <= bound).cloned().collect();
    if pool.is_empty() {
        return Ok(Vec::new());
    }
    let mut r = rng(seed ^ 0x5eed_0e17);
    let mut out = Vec::new();
    for level in 1..=depth {
        let mut fresh = Vec::new();
        for _ in 0..PER_LEVEL {
            let a = &pool[r.gen_range(0..pool.len())];
            let b = &pool[r.gen_range(0..pool.len())];
            let f = random_hom(ctx, &a.obj, &b.obj, &mut r);
            let c = cone_triangle(ctx, &f)?.c;
            fresh.push(Named::new(format!("cone{level}({} -> {})", a.label, b.label), c));
        }
        pool.extend(fresh.iter().cloned());
        out.extend(fresh);
    }
    Ok(out)
}

pub fn verify_localization<C: FrobeniusContext, S: PrecoverSystem<C> + ?Sized>(
    ctx: &C,
    tri: &LocalizationTriangle<C>,
    sys: &S,
    window: usize,
    seed: u64,
    depth: usize,
) -> Result<VerificationReport> {
    let tests = sys.test_objects(ctx, window, seed)?;
    let samples = extension_samples(ctx, sys, &tests, depth, seed)?;
    let per_object = tests.par_iter().map(|r| check_object(ctx, tri, r)).collect::<Result<Vec<_>>>()?;
    let extension = samples.par_iter().map(|r| check_object(ctx, tri, r)).collect::<Result<Vec<_>>>()?;
    let verdict = per_object.iter().chain(&extension).all(ObjectCheck::ok);
    Ok(VerificationReport { per_object, extension, verdict })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conditional {
    NotApplicable,
    Held,
}

/// When every resolution step was a conflation, `L_0 → X` must be a stable
/// isomorphism, i.e. its cone is stably zero.
pub fn remark_iii_check<C: FrobeniusContext>(ctx: &C, tri: &LocalizationTriangle<C>, ladder: &Ladder<C>) -> Result<Conditional> {
    if !ladder.all_conflations() {
        return Ok(Conditional::NotApplicable);
    }
    if is_stably_zero_object(ctx, &tri.x_perp)? {
        Ok(Conditional::Held)
    } else {
        Err(Error::ConditionalViolated)
    }
}

#[derive(Clone, Debug)]
pub enum Mode<O> {
    /// structural invariants only
    Lax,
    /// every precover must also pass factorization checks from these objects
    Strict(Vec<O>),
}

/// One externally supplied step: `R_i → K_i` and `K_{i+1} → R_i`.
#[derive(Clone, Debug)]
pub struct ChainStep<C: FrobeniusContext> {
    pub precover: C::Hom,
    pub inclusion: C::Hom,
}

/// Runs the ladder on a hand-built chain `K_{i+1} → R_i → K_i` ending at `x`.
pub fn synthetic_ladder<C: FrobeniusContext>(
    ctx: &C,
    x: &C::Obj,
    chain: &[ChainStep<C>],
    mode: &Mode<C::Obj>,
) -> Result<Ladder<C>> {
    let mut steps = Vec::with_capacity(chain.len());
    for (i, s) in chain.iter().enumerate() {
        if !ctx.is_zero(&ctx.compose(&s.precover, &s.inclusion)) {
            return Err(Error::CompositeNonzero { step: i });
        }
        let k = ctx.dst(&s.precover);
        if let Mode::Strict(members) = mode {
            for r in members {
                if !factor_all(ctx, &ctx.hom_basis(r, &k), &s.precover) {
                    return Err(Error::FactorizationFailure { step: i });
                }
            }
        }
        steps.push(Step {
            k,
            r: ctx.src(&s.precover),
            precover: s.precover.clone(),
            kernel: ctx.src(&s.inclusion),
            inclusion: s.inclusion.clone(),
            conflation: ctx.is_epi(&s.precover),
        });
    }
    ladder_from_steps(ctx, x, &steps)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::chctx::{direct_sum, disk, homology_at, sphere};
    use crate::groups::{subgroup_generated, FiniteGroup};
    use crate::linalg::PrimeField;
    use crate::modctx::{jordan, trivial};
    use crate::precover::{SubgroupInduced, Truncation, DEFAULT_BUDGET};
    use crate::stable::{ComplexContext, ModuleContext};

    fn cc() -> ComplexContext {
        ComplexContext::new(PrimeField::new(2).unwrap())
    }

    fn s0_plus_sm1(cc: &ComplexContext) -> Arc<crate::chctx::FComplex> {
        let a = Arc::new(sphere(cc.field, 0).unwrap());
        let b = Arc::new(sphere(cc.field, -1).unwrap());
        direct_sum(cc.field, &[a, b]).complex
    }

    #[test]
    fn depth_zero_is_identity() {
        let ctx = ModuleContext::new(Arc::new(FiniteGroup::cyclic(4).unwrap()), PrimeField::new(2).unwrap());
        let sys = SubgroupInduced::new(subgroup_generated(&ctx.group, &[2]).unwrap());
        let x = Arc::new(jordan(&ctx.group, ctx.field, 2).unwrap());
        let res = build_resolution(&ctx, &sys, &x, 4, DEFAULT_BUDGET).unwrap();
        let ladder = build_ladder(&ctx, &res).unwrap();
        assert!(ctx.equal(&ladder.lambda, &ctx.identity(&x)));
        let tri = localization_triangle(&ctx, &ladder).unwrap();
        assert!(is_stably_zero_object(&ctx, &tri.x_perp).unwrap());
        assert_eq!(remark_iii_check(&ctx, &tri, &ladder).unwrap(), Conditional::Held);
        let rep = verify_localization(&ctx, &tri, &sys, 1, 1, 1).unwrap();
        assert!(rep.verdict);
    }

    #[test]
    fn truncation_ladder() {
        let cc = cc();
        let x = s0_plus_sm1(&cc);
        let res = build_resolution(&cc, &Truncation, &x, 4, DEFAULT_BUDGET).unwrap();
        let ladder = build_ladder(&cc, &res).unwrap();
        assert_eq!(ladder.depth(), 1);
        // d = 1: L_0 is the cone of the kernel inclusion into R_0
        assert!(cc.equal(&ladder.rungs[0].triangle.f, &res.steps[0].inclusion));
        let tri = localization_triangle(&cc, &ladder).unwrap();
        for i in -2..=2 {
            let s = Arc::new(sphere(cc.field, i).unwrap());
            let l0 = stable_hom(&cc, &s, &tri.x_r).unwrap().dim();
            let perp = stable_hom(&cc, &s, &tri.x_perp).unwrap().dim();
            assert_eq!(l0, if i >= 0 { homology_at(&x, i) } else { 0 }, "degree {i}");
            assert_eq!(perp, if i < 0 { homology_at(&x, i) } else { 0 }, "degree {i}");
        }
        assert_eq!(remark_iii_check(&cc, &tri, &ladder).unwrap(), Conditional::NotApplicable);
        let rep = verify_localization(&cc, &tri, &Truncation, 2, 7, 2).unwrap();
        assert!(rep.verdict);
        assert!(!rep.extension.is_empty());
    }

    #[test]
    fn contractible_input() {
        let cc = cc();
        let x = Arc::new(disk(cc.field, 0).unwrap());
        let (l0, perp) = adjoint_values(&cc, &Truncation, &x, 4, DEFAULT_BUDGET).unwrap();
        assert!(is_stably_zero_object(&cc, &l0).unwrap());
        assert!(is_stably_zero_object(&cc, &perp).unwrap());
    }

    #[test]
    fn cap_reached_is_not_finite() {
        let ctx = ModuleContext::new(Arc::new(FiniteGroup::cyclic(4).unwrap()), PrimeField::new(2).unwrap());
        let sys = SubgroupInduced::new(subgroup_generated(&ctx.group, &[2]).unwrap());
        let x = Arc::new(trivial(&ctx.group, ctx.field));
        let err = adjoint_values(&ctx, &sys, &x, 4, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, Error::NotFinite { cap: 4 }));
    }
}
