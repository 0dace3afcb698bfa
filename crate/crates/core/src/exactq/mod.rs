//! Exact linear algebra over the rationals.

mod matrix;
mod rational;

pub use matrix::{
    image_basis, kernel_basis, kernel_with_free, quotient_basis, rank, rref, solve, span_basis, span_contains,
    span_rank, Quotient, SparseRationalMatrix, Vector,
};
pub use rational::{ParseRationalError, Rational};

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn matrix_strategy() -> impl Strategy<Value = SparseRationalMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r).prop_map(move |rows| {
                let dense: Vec<Vec<Rational>> =
                    rows.into_iter().map(|row| row.into_iter().map(Rational::from_int).collect()).collect();
                SparseRationalMatrix::from_dense(r, c, &dense)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix_strategy()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(m.cols(), rank(&m) + k.len());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(Rational::is_zero));
            }
            prop_assert_eq!(image_basis(&m).len(), rank(&m));
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn quotient_kills_exactly_the_subspace(m in matrix_strategy(), w in proptest::collection::vec(-2i64..=2, 1..6)) {
            let sub = image_basis(&m);
            let q = quotient_basis(m.rows(), &sub).unwrap();
            prop_assert_eq!(q.dim() + sub.len(), m.rows());
            for v in &sub {
                prop_assert!(q.project(v).iter().all(Rational::is_zero));
            }
            for (k, r) in q.representatives.iter().enumerate() {
                let p = q.project(r);
                for (j, x) in p.iter().enumerate() {
                    prop_assert_eq!(x.is_one(), j == k);
                }
            }
            let mut v: Vector = w.into_iter().map(Rational::from_int).collect();
            v.resize(m.rows(), Rational::zero());
            let in_span = span_contains(&sub, std::slice::from_ref(&v));
            prop_assert_eq!(q.project(&v).iter().all(Rational::is_zero), in_span);
        }

        #[test]
        fn canonical_bases_are_deterministic(m in matrix_strategy()) {
            let mut shuffled = SparseRationalMatrix::zeros(m.rows(), m.cols());
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    shuffled.set(m.rows() - 1 - r, c, m.get(r, c));
                }
            }
            prop_assert_eq!(kernel_basis(&m), kernel_basis(&shuffled));
        }
    }
}
