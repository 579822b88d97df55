use std::sync::Arc;

use relstab_core::chctx::{direct_sum, sphere};
use relstab_core::groups::{subgroup_generated, FiniteGroup};
use relstab_core::linalg::PrimeField;
use relstab_core::localize::{
    adjoint_values, build_ladder, localization_triangle, remark_iii_check, verify_localization, Conditional,
};
use relstab_core::modctx::{induce, trivial};
use relstab_core::precover::{build_resolution, Outcome, SubgroupInduced, Truncation, DEFAULT_BUDGET, DEFAULT_CAP};
use relstab_core::stable::{is_stably_zero_object, stable_hom, ComplexContext, FrobeniusContext, ModuleContext};
use relstab_core::Error;

#[test]
fn two_sphere_complex_splits_into_its_truncations() {
    let cc = ComplexContext::new(PrimeField::new(2).unwrap());
    let s0 = Arc::new(sphere(cc.field, 0).unwrap());
    let sm1 = Arc::new(sphere(cc.field, -1).unwrap());
    let x = direct_sum(cc.field, &[s0.clone(), sm1.clone()]).complex;
    let (l0, perp) = adjoint_values(&cc, &Truncation, &x, DEFAULT_CAP, DEFAULT_BUDGET).unwrap();
    for i in -3..=3 {
        let s = Arc::new(sphere(cc.field, i).unwrap());
        assert_eq!(stable_hom(&cc, &s, &l0).unwrap().dim(), usize::from(i == 0), "L0 at {i}");
        assert_eq!(stable_hom(&cc, &s, &perp).unwrap().dim(), usize::from(i == -1), "perp at {i}");
    }
}

#[test]
fn trivial_module_over_c4_never_stops() {
    let ctx = ModuleContext::new(Arc::new(FiniteGroup::cyclic(4).unwrap()), PrimeField::new(2).unwrap());
    let sys = SubgroupInduced::new(subgroup_generated(&ctx.group, &[2]).unwrap());
    let k = Arc::new(trivial(&ctx.group, ctx.field));
    let res = build_resolution(&ctx, &sys, &k, 4, DEFAULT_BUDGET).unwrap();
    assert_eq!(res.outcome, Outcome::CapReached(4));
    assert_eq!(res.kernel_dims(&ctx), vec![1, 1, 1, 1]);
    assert!(matches!(adjoint_values(&ctx, &sys, &k, 4, DEFAULT_BUDGET), Err(Error::NotFinite { .. })));
}

#[test]
fn induced_members_are_fixed() {
    let ctx = ModuleContext::new(Arc::new(FiniteGroup::klein_four()), PrimeField::new(2).unwrap());
    let emb = subgroup_generated(&ctx.group, &[3]).unwrap();
    let sys = SubgroupInduced::new(emb.clone());
    let ind = Arc::new(induce(&ctx.group, &emb, &trivial(&Arc::new(emb.sub.clone()), ctx.field)));
    let x = ctx.direct_sum(&[ind.clone(), ind]).obj;
    let res = build_resolution(&ctx, &sys, &x, DEFAULT_CAP, DEFAULT_BUDGET).unwrap();
    assert_eq!(res.outcome, Outcome::FiniteDim(0));
    let ladder = build_ladder(&ctx, &res).unwrap();
    assert!(ctx.equal(&ladder.lambda, &ctx.identity(&x)));
    let tri = localization_triangle(&ctx, &ladder).unwrap();
    assert!(is_stably_zero_object(&ctx, &tri.x_perp).unwrap());
    assert_eq!(remark_iii_check(&ctx, &tri, &ladder).unwrap(), Conditional::Held);
}

#[test]
fn truncation_ladders_are_not_conflations() {
    let cc = ComplexContext::new(PrimeField::new(3).unwrap());
    let s1 = Arc::new(sphere(cc.field, 1).unwrap());
    let sm2 = Arc::new(sphere(cc.field, -2).unwrap());
    let x = direct_sum(cc.field, &[s1, sm2]).complex;
    let res = build_resolution(&cc, &Truncation, &x, DEFAULT_CAP, DEFAULT_BUDGET).unwrap();
    assert_eq!(res.outcome, Outcome::FiniteDim(1));
    let ladder = build_ladder(&cc, &res).unwrap();
    let tri = localization_triangle(&cc, &ladder).unwrap();
    assert_eq!(remark_iii_check(&cc, &tri, &ladder).unwrap(), Conditional::NotApplicable);
    let rep = verify_localization(&cc, &tri, &Truncation, 2, 5, 2).unwrap();
    assert!(rep.verdict);
    assert!(rep.per_object.iter().all(|o| o.perp_dim == 0));
    let labels: Vec<_> = rep.per_object.iter().map(|o| o.object.clone()).collect();
    assert!(labels.contains(&"S(0)".to_string()), "{labels:?}");
}
