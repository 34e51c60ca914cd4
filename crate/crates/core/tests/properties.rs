//! Property tests for the exact-arithmetic substrate.

use proptest::prelude::*;

use tautring::grassmann::{self, GrassmannRing};
use tautring::linalg::{DenseMatrix, SolveOutcome};
use tautring::ring::CycleElement;
use tautring::Scalar;

fn small_scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::frac(n, d))
}

fn small_matrix() -> impl Strategy<Value = DenseMatrix> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(r, c)| {
            proptest::collection::vec(small_scalar(), r * c)
                .prop_map(move |entries| DenseMatrix::new(r, c, entries))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_transpose_invariant(m in small_matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rref_is_idempotent(m in small_matrix()) {
        let (r1, p1) = m.rref();
        let (r2, p2) = r1.rref();
        prop_assert_eq!(r1, r2);
        prop_assert_eq!(p1, p2);
    }

    #[test]
    fn solve_is_exact(m in small_matrix(), xs in proptest::collection::vec(small_scalar(), 4)) {
        // manufacture a consistent system: b = m * x
        let x: Vec<Scalar> = xs.into_iter().take(m.cols()).collect();
        if x.len() < m.cols() {
            return Ok(());
        }
        let b = m.mul_vec(&x);
        match m.solve(&b) {
            SolveOutcome::Solution { particular, kernel } => {
                prop_assert_eq!(m.mul_vec(&particular), b);
                for k in &kernel {
                    prop_assert!(m.mul_vec(k).iter().all(Scalar::is_zero));
                }
            }
            SolveOutcome::Inconsistent => prop_assert!(false, "consistent system reported inconsistent"),
        }
    }

    #[test]
    fn normal_form_is_a_linear_projection(
        coeffs in proptest::collection::vec(small_scalar(), 3),
        a in small_scalar(),
        b in small_scalar(),
    ) {
        // random degree-4 elements of the fourfold's ring
        let gr = GrassmannRing::new();
        let numbers = grassmann::fano_intersection_numbers(&gr);
        let fano = tautring::fano::FanoRing::new(&numbers);
        let monos = [
            fano.gc_monomial(4, 0),
            fano.gc_monomial(2, 1),
            fano.gc_monomial(0, 2),
        ];
        let mut x = CycleElement::zero(&fano.ring, 4);
        let mut y = CycleElement::zero(&fano.ring, 4);
        for (i, c) in coeffs.iter().enumerate() {
            x = x.try_add(&monos[i].scale(c)).unwrap();
            y = y.try_add(&monos[(i + 1) % 3].scale(c)).unwrap();
        }
        let lhs = (&x.scale(&a) + &y.scale(&b)).normal_form();
        let rhs = &x.normal_form().scale(&a) + &y.normal_form().scale(&b);
        prop_assert!(lhs.eq_mod_relations(&rhs));
        // idempotency
        prop_assert_eq!(lhs.normal_form().render(), lhs.render());
    }
}
