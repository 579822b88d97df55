use proptest::prelude::*;
use relstab_core::linalg::{kernel_basis, rref, solve_linear, Mat, PrimeField, RowSpace};

fn field() -> impl Strategy<Value = PrimeField> {
    prop::sample::select(vec![2u32, 3, 5, 7, 97]).prop_map(|p| PrimeField::new(p).unwrap())
}

fn mat_in(k: PrimeField, rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(0..k.p(), rows * cols).prop_map(move |v| Mat::from_vec(k, rows, cols, v).unwrap())
}

fn matrix() -> impl Strategy<Value = Mat> {
    (field(), 1usize..7, 1usize..7).prop_flat_map(|(k, r, c)| mat_in(k, r, c))
}

fn square() -> impl Strategy<Value = Mat> {
    (field(), 1usize..6).prop_flat_map(|(k, n)| mat_in(k, n, n))
}

proptest! {
    #[test]
    fn rank_nullity(a in matrix()) {
        let ker = kernel_basis(&a);
        prop_assert_eq!(a.rank() + ker.cols(), a.cols());
        prop_assert!(a.dot(&ker).is_zero());
        prop_assert_eq!(ker.rank(), ker.cols());
    }

    #[test]
    fn rref_is_idempotent_and_row_equivalent(a in matrix()) {
        let r = rref(&a);
        let again = rref(&r.reduced);
        prop_assert_eq!(&again.reduced, &r.reduced);
        prop_assert!(RowSpace::span(&a).same_as(&RowSpace::span(&r.reduced)));
    }

    #[test]
    fn solve_finds_preimages((a, x) in matrix().prop_flat_map(|a| {
        let (k, c) = (a.field(), a.cols());
        (Just(a), mat_in(k, c, 2))
    })) {
        let b = a.dot(&x);
        let sol = solve_linear(&a, &b).unwrap().expect("consistent by construction");
        prop_assert_eq!(a.dot(&sol), b);
    }

    #[test]
    fn inverse_is_two_sided(a in square()) {
        let n = a.rows();
        match a.inverse() {
            Some(inv) => {
                let id = Mat::identity(a.field(), n);
                prop_assert_eq!(a.dot(&inv), id.clone());
                prop_assert_eq!(inv.dot(&a), id);
            }
            None => prop_assert!(a.rank() < n),
        }
    }

    #[test]
    fn rowspace_coords_reconstruct(a in matrix()) {
        let s = RowSpace::span(&a);
        for i in 0..a.rows() {
            let v = a.row(i);
            let c = s.coords(v).expect("rows lie in their span");
            let mut back = vec![0u32; a.cols()];
            for (j, &cj) in c.iter().enumerate() {
                for (b, &e) in back.iter_mut().zip(s.basis().row(j)) {
                    *b = a.field().add(*b, a.field().mul(cj, e));
                }
            }
            prop_assert_eq!(&back[..], v);
        }
    }
}
