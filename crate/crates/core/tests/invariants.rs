use proptest::prelude::*;

use glnn_core::borelcomb::{enumerate_borels, odd_reflection, odd_simple_roots, rho, simple_roots};
use glnn_core::superalg::bracket;
use glnn_core::weightlat::{atypicality, from_tuple, relative_tuple};
use glnn_core::{AlgebraElement, BorelLabel, MatrixUnit, Rational, RhoTuple, Weight};

/// Homogeneous element: a combination of units of one parity.
fn element(n: usize, parity: bool) -> impl Strategy<Value = AlgebraElement> {
    let units: Vec<MatrixUnit> = MatrixUnit::all(n).filter(|u| u.parity().is_odd() == parity).collect();
    prop::collection::vec((0..units.len(), -3i64..=3), 1..4).prop_map(move |terms| {
        let mut x = AlgebraElement::zero(n);
        for (k, c) in terms {
            x.add_term(units[k], &Rational::from_int(c));
        }
        x
    })
}

fn sign(p: bool, q: bool) -> Rational {
    Rational::from_int(if p && q { -1 } else { 1 })
}

fn label(n: usize) -> impl Strategy<Value = BorelLabel> {
    let all = enumerate_borels(n);
    (0..all.len()).prop_map(move |k| all[k].clone())
}

fn brute_atypicality(first: &[i64], second: &[i64]) -> usize {
    fn go(first: &[i64], rest: &mut Vec<i64>) -> usize {
        let Some((&x, tail)) = first.split_first() else { return 0 };
        let mut best = 0;
        for k in 0..rest.len() {
            let y = rest.remove(k);
            best = best.max(usize::from(x == y) + go(tail, rest));
            rest.insert(k, y);
        }
        best
    }
    go(first, &mut second.to_vec())
}

proptest! {
    #[test]
    fn super_jacobi(
        (p, x, y, z) in (1usize..=3, any::<[bool; 3]>()).prop_flat_map(|(n, p)| {
            (Just(p), element(n, p[0]), element(n, p[1]), element(n, p[2]))
        })
    ) {
        let xy = bracket(&x, &y).unwrap();
        let yx = bracket(&y, &x).unwrap();
        prop_assert!(xy.add(&yx.scale(&sign(p[0], p[1]))).unwrap().is_zero());
        let lhs = bracket(&x, &bracket(&y, &z).unwrap()).unwrap();
        let rhs = bracket(&xy, &z).unwrap()
            .add(&bracket(&y, &bracket(&x, &z).unwrap()).unwrap().scale(&sign(p[0], p[1])))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn odd_reflections_are_involutions(b in (1usize..=4).prop_flat_map(label)) {
        for alpha in odd_simple_roots(&b) {
            let c = odd_reflection(&b, alpha).unwrap();
            prop_assert_ne!(&c, &b);
            prop_assert!(odd_simple_roots(&c).contains(&alpha.neg()));
            prop_assert_eq!(odd_reflection(&c, alpha.neg()).unwrap(), b.clone());
            // rho shifts by the reflected root.
            prop_assert_eq!(rho(&c), rho(&b).add(&Weight::from_root(alpha)));
            prop_assert_eq!(c.size().abs_diff(b.size()), 1);
        }
    }

    #[test]
    fn simple_roots_count(b in (1usize..=4).prop_flat_map(label)) {
        prop_assert_eq!(simple_roots(&b).len(), 2 * b.n - 1);
    }

    #[test]
    fn tuples_round_trip(
        b in (1usize..=4).prop_flat_map(label),
        v in prop::collection::vec(-5i64..=5, 8),
    ) {
        let n = b.n;
        let t = RhoTuple::from_blocks(&v[..n], &v[4..4 + n]);
        prop_assert_eq!(relative_tuple(&from_tuple(&t, &b), &b), t);
    }

    #[test]
    fn atypicality_is_a_maximum_matching(
        n in 1usize..=4,
        v in prop::collection::vec(-2i64..=2, 8),
    ) {
        let t = RhoTuple::from_blocks(&v[..n], &v[4..4 + n]);
        prop_assert_eq!(atypicality(&t), brute_atypicality(t.first(), t.second()));
    }
}
