//! Deliberately naive second routes for the solvers in the other modules.

use serde::Serialize;

use crate::chctx::{homology_at, sphere, FComplex};
use crate::error::{Error, Result};
use crate::linalg::RowSpace;
use crate::stable::{stable_hom, ComplexContext, FrobeniusContext};

pub const DEFAULT_BRUTE_BUDGET: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub route_a: Vec<Vec<u32>>,
    pub route_b: Vec<Vec<u32>>,
    pub agree: bool,
    pub search_space: u128,
}

fn rows(space: &RowSpace) -> Vec<Vec<u32>> {
    (0..space.dim()).map(|i| space.basis().row(i).to_vec()).collect()
}

fn report(a: &RowSpace, b: &RowSpace, search_space: u128) -> OracleReport {
    OracleReport { route_a: rows(a), route_b: rows(b), agree: a.same_as(b), search_space }
}

/// Every matrix of the right shape, filtered to the morphisms; the span of
/// the survivors in flattened coordinates.
pub fn hom_span_bruteforce<C: FrobeniusContext>(
    ctx: &C,
    m: &C::Obj,
    n: &C::Obj,
    budget: u128,
) -> Result<(RowSpace, u128)> {
    let field = ctx.field();
    let p = field.p() as u128;
    let len = ctx.flatten(&ctx.zero_hom(m, n)).len();
    let size = (0..len).try_fold(1u128, |acc, _| acc.checked_mul(p)).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let mut found: Vec<Vec<u32>> = Vec::new();
    let mut v = vec![0u32; len];
    for _ in 0..size {
        let f = ctx.unflatten(m, n, &v);
        if ctx.is_morphism(&f) && v.iter().any(|&c| c != 0) {
            found.push(v.clone());
        }
        for c in v.iter_mut() {
            *c += 1;
            if *c < field.p() {
                break;
            }
            *c = 0;
        }
    }
    Ok((RowSpace::from_vectors(field, len, &found), size))
}

pub fn hom_basis_bruteforce<C: FrobeniusContext>(ctx: &C, m: &C::Obj, n: &C::Obj, budget: u128) -> Result<Vec<C::Hom>> {
    let (span, _) = hom_span_bruteforce(ctx, m, n, budget)?;
    Ok((0..span.dim()).map(|i| ctx.unflatten(m, n, span.basis().row(i))).collect())
}

/// Route A: the solver's hom basis; route B: exhaustive enumeration.
pub fn hom_oracle<C: FrobeniusContext>(ctx: &C, m: &C::Obj, n: &C::Obj, budget: u128) -> Result<OracleReport> {
    let len = ctx.flatten(&ctx.zero_hom(m, n)).len();
    let solved: Vec<Vec<u32>> = ctx.hom_basis(m, n).iter().map(|f| ctx.flatten(f)).collect();
    let a = RowSpace::from_vectors(ctx.field(), len, &solved);
    let (b, size) = hom_span_bruteforce(ctx, m, n, budget)?;
    Ok(report(&a, &b, size))
}

/// Maps `m → n` factoring through a projective-injective, computed as
/// `{h ∘ ι_m}` (route A) and as `{π_n ∘ h}` (route B); agreement also
/// requires both to match the stable layer's own subspace.
pub fn phom_dual_route<C: FrobeniusContext>(ctx: &C, m: &C::Obj, n: &C::Obj) -> Result<OracleReport> {
    let field = ctx.field();
    let len = ctx.flatten(&ctx.zero_hom(m, n)).len();
    let iota = ctx.injective_embedding(m)?;
    let via_hull: Vec<Vec<u32>> =
        ctx.hom_basis(&ctx.dst(&iota), n).iter().map(|h| ctx.flatten(&ctx.compose(h, &iota))).collect();
    let pi = ctx.projective_cover(n)?;
    let via_cover: Vec<Vec<u32>> =
        ctx.hom_basis(m, &ctx.src(&pi)).iter().map(|h| ctx.flatten(&ctx.compose(&pi, h))).collect();
    let a = RowSpace::from_vectors(field, len, &via_hull);
    let b = RowSpace::from_vectors(field, len, &via_cover);
    let primary = stable_hom(ctx, m, n)?.phom_ambient();
    let mut out = report(&a, &b, 0);
    out.agree = out.agree && primary.same_as(&a);
    Ok(out)
}

/// Route A: `dim (S(i), x)_T`; route B: `dim H_i(x)`, for `i` in `range`.
pub fn homology_stablehom_oracle(
    ctx: &ComplexContext,
    x: &std::sync::Arc<FComplex>,
    range: std::ops::RangeInclusive<i32>,
) -> Result<OracleReport> {
    let mut stable = Vec::new();
    let mut homology = Vec::new();
    for i in range {
        let s = std::sync::Arc::new(sphere(ctx.field, i)?);
        stable.push(stable_hom(ctx, &s, x)?.dim() as u32);
        homology.push(homology_at(x, i) as u32);
    }
    let agree = stable == homology;
    Ok(OracleReport { route_a: vec![stable], route_b: vec![homology], agree, search_space: 0 })
}
