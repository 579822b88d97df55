use std::sync::Arc;

use relstab_core::chctx::{direct_sum, shift, sphere};
use relstab_core::groups::FiniteGroup;
use relstab_core::linalg::PrimeField;
use relstab_core::modctx::jordan;
use relstab_core::stable::{
    cone_triangle, desuspend, is_stably_zero_object, les_exact_check, random_hom, rng, stable_dim_vector, stable_hom,
    suspend, ComplexContext, FrobeniusContext, ModuleContext,
};

fn kc4() -> ModuleContext {
    ModuleContext::new(Arc::new(FiniteGroup::cyclic(4).unwrap()), PrimeField::new(2).unwrap())
}

fn jordans(ctx: &ModuleContext) -> Vec<Arc<relstab_core::modctx::GModule>> {
    (1..=4).map(|s| Arc::new(jordan(&ctx.group, ctx.field, s).unwrap())).collect()
}

#[test]
fn omega_swaps_jordan_blocks_over_c4() {
    let ctx = kc4();
    let js = jordans(&ctx);
    for s in 1..=3 {
        let (up, _) = suspend(&ctx, &js[s - 1]).unwrap();
        let want = stable_dim_vector(&ctx, &js, &js[3 - s]).unwrap();
        assert_eq!(stable_dim_vector(&ctx, &js, &up).unwrap(), want, "J{s}");
        let (down, _) = desuspend(&ctx, &js[s - 1]).unwrap();
        assert_eq!(stable_dim_vector(&ctx, &js, &down).unwrap(), want, "J{s}");
    }
}

#[test]
fn suspension_of_spheres_shifts_degree() {
    let cc = ComplexContext::new(PrimeField::new(3).unwrap());
    let tests: Vec<_> = (-3..=3).map(|i| Arc::new(sphere(cc.field, i).unwrap())).collect();
    for i in -2..=2 {
        let s = Arc::new(sphere(cc.field, i).unwrap());
        let (up, _) = suspend(&cc, &s).unwrap();
        let want = stable_dim_vector(&cc, &tests, &Arc::new(shift(&s, 1).unwrap())).unwrap();
        assert_eq!(stable_dim_vector(&cc, &tests, &up).unwrap(), want);
    }
}

#[test]
fn cones_of_isomorphisms_vanish() {
    let ctx = kc4();
    let mut r = rng(3);
    for _ in 0..20 {
        let m = ctx.random_object(&mut r);
        let t = cone_triangle(&ctx, &ctx.neg(&ctx.identity(&m))).unwrap();
        assert!(is_stably_zero_object(&ctx, &t.c).unwrap());
    }
}

#[test]
fn long_exact_sequences_on_random_triangles() {
    let cc = ComplexContext::new(PrimeField::new(2).unwrap());
    let tests: Vec<_> = (-2..=2).map(|i| Arc::new(sphere(cc.field, i).unwrap())).collect();
    let mut r = rng(21);
    for _ in 0..25 {
        let a = cc.random_object(&mut r);
        let b = cc.random_object(&mut r);
        let f = random_hom(&cc, &a, &b, &mut r);
        let t = cone_triangle(&cc, &f).unwrap();
        for x in &tests {
            assert!(les_exact_check(&cc, x, &t).unwrap());
        }
    }
}

#[test]
fn stable_hom_is_additive() {
    let cc = ComplexContext::new(PrimeField::new(2).unwrap());
    let s0 = Arc::new(sphere(cc.field, 0).unwrap());
    let s1 = Arc::new(sphere(cc.field, 1).unwrap());
    let sum = direct_sum(cc.field, &[s0.clone(), s1.clone(), s0.clone()]).complex;
    assert_eq!(stable_hom(&cc, &s0, &sum).unwrap().dim(), 2);
    assert_eq!(stable_hom(&cc, &sum, &s1).unwrap().dim(), 1);
    assert_eq!(stable_hom(&cc, &sum, &sum).unwrap().dim(), 5);
}
