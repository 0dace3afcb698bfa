//! Truncated induced modules: PBW bases, straightening and generator matrices.

mod datum;
mod module;
mod pbw;

pub use datum::{
    bg_datum, block_roots, borel_sum_datum, ij_blocks, levi_datum, levi_roots, levi_verma_datum, nilradical,
    parabolic_datum, principal_blocks, principal_nilradical, verma_datum, verma_datum_weight, InductionDatum,
};
pub(crate) use module::vstack;
pub use module::{induce, induce_module, ModuleRealization, ModuleVector};
pub use pbw::{PBWMonomial, MAX_EXPONENT, MAX_FACTORS};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borelcomb::{enumerate_borels, BorelLabel};
    use crate::exactq::Rational;
    use crate::superalg::{bracket, AlgebraElement, MatrixUnit};
    use crate::weightlat::{bg_character, verma_character, RhoTuple, Weight};

    fn t(s: &str) -> RhoTuple {
        s.parse().unwrap()
    }

    fn e(n: usize, i: usize, j: usize) -> MatrixUnit {
        MatrixUnit::new(n, i, j).unwrap()
    }

    fn vec_of(terms: &[(&[u32], i64)]) -> ModuleVector {
        let mut v = ModuleVector::default();
        for (exps, c) in terms {
            v.add_term(PBWMonomial::from_exponents(exps), &Rational::from_int(*c));
        }
        v
    }

    fn sum_datum(a: i64, b: i64, c: i64) -> InductionDatum {
        let hw = Weight::new(vec![a, b], vec![-b, -c]);
        let borels = [BorelLabel::empty(2), BorelLabel::parse(2, "(1)").unwrap()];
        borel_sum_datum(&borels, hw).unwrap()
    }

    #[test]
    fn spec_action_examples() {
        let m = induce(&bg_datum(&t("(2,5|2,5)")).unwrap(), 4).unwrap();
        let v = m.act_unit(e(2, 1, 3), PBWMonomial::from_exponents(&[1, 0, 0, 0])).unwrap();
        assert_eq!(v, vec_of(&[(&[0, 1, 0, 0], -1)]));
        let v = m.act_unit(e(2, 1, 3), PBWMonomial::from_exponents(&[0, 0, 1, 0])).unwrap();
        assert_eq!(v, vec_of(&[(&[0, 0, 0, 1], 1)]));
        let m = induce(&sum_datum(3, 1, -2), 4).unwrap();
        let v = m.act_unit(e(2, 3, 2), PBWMonomial::from_exponents(&[1, 0, 0, 0, 0])).unwrap();
        assert_eq!(v, vec_of(&[(&[0, 1, 0, 0, 0], 1)]));
    }

    #[test]
    fn truncation_overflow_is_reported() {
        let m = induce(&verma_datum(&BorelLabel::empty(2), &t("(0,0|0,0)")).unwrap(), 1).unwrap();
        let r = m.act_unit(e(2, 2, 1), PBWMonomial::from_exponents(&[1, 0, 0, 0, 0, 0]));
        assert!(matches!(r, Err(crate::Error::Truncation { .. })));
    }

    #[test]
    fn census_matches_verma_characters() {
        for n in 1..=2 {
            for b in enumerate_borels(n) {
                let tt = RhoTuple::from_blocks(&vec![1; n], &vec![1; n]);
                let m = induce(&verma_datum(&b, &tt).unwrap(), 4).unwrap();
                let ch = verma_character(&b, &tt, 4);
                assert_eq!(m.character().support, ch.support, "{b}");
            }
        }
    }

    #[test]
    fn census_matches_bg_characters() {
        for s in ["(2,5|2,5)", "(1,1|1,2)", "(0,3|1,2)"] {
            let m = induce(&bg_datum(&t(s)).unwrap(), 5).unwrap();
            assert_eq!(m.character().support, bg_character(&t(s), 5).support, "{s}");
        }
    }

    #[test]
    fn gl11_singular_vectors() {
        let b = BorelLabel::empty(1);
        let m = induce(&verma_datum(&b, &t("(3|3)")).unwrap(), 4).unwrap();
        let top = m.datum.hw.clone();
        let low = top.add_root(crate::superalg::Root::odd(1, 1, 1), -1);
        assert_eq!(m.singular_vectors(&b, &top).unwrap().len(), 1);
        assert_eq!(m.singular_vectors(&b, &low).unwrap().len(), 1);
        let m = induce(&verma_datum(&b, &t("(3|4)")).unwrap(), 4).unwrap();
        assert!(m.singular_vectors(&b, &low).unwrap().is_empty());
    }

    #[test]
    fn cartan_and_nilpotency() {
        let b = BorelLabel::parse(2, "(1)").unwrap();
        let m = induce(&verma_datum(&b, &t("(1,-1|2,0)")).unwrap(), 4).unwrap();
        for w in m.weights().to_vec() {
            let h = m.generator_matrix(e(2, 2, 2), &w).unwrap();
            let d = m.dim_at(&w);
            let expected = crate::SparseRationalMatrix::identity(d).scale(&Rational::from_int(w.eps[1]));
            assert_eq!(*h, expected);
            let x = e(2, 3, 1);
            let below = w.add_root(crate::superalg::Root::odd(2, 1, 1), -1);
            if m.depth_of(&below) + 3 <= 4 {
                let a = m.generator_matrix(x, &w).unwrap();
                let bm = m.generator_matrix(x, &w.add_root(crate::superalg::Root::odd(2, 1, 1), -1)).unwrap();
                assert!(bm.mul(&a).is_zero());
            }
        }
    }

    fn check_relations(m: &ModuleRealization, units: &[MatrixUnit]) {
        for &a in units {
            for &b in units {
                let ab = bracket(&AlgebraElement::unit(a), &AlgebraElement::unit(b)).unwrap();
                for w in m.weights() {
                    let (wa, wb) = (w.add(&root_shift(a)), w.add(&root_shift(b)));
                    let mats = (
                        m.generator_matrix(b, w),
                        m.generator_matrix(a, &wb),
                        m.generator_matrix(a, w),
                        m.generator_matrix(b, &wa),
                    );
                    let (Ok(b1), Ok(a2), Ok(a1), Ok(b2)) = mats else { continue };
                    let s = Rational::from_int(a.parity().koszul(b.parity()));
                    let lhs = a2.mul(&b1).sub(&b2.mul(&a1).scale(&s));
                    let rhs = if ab.is_zero() {
                        crate::SparseRationalMatrix::zeros(lhs.rows(), lhs.cols())
                    } else {
                        m.element_matrix(&ab, w).unwrap()
                    };
                    assert_eq!(lhs, rhs, "[{a}, {b}] at {w}");
                }
            }
        }
    }

    fn root_shift(u: MatrixUnit) -> Weight {
        match crate::superalg::root_of(u) {
            Some(r) => Weight::from_root(r),
            None => Weight::zero(u.n),
        }
    }

    #[test]
    fn matrices_satisfy_bracket_relations() {
        let b = BorelLabel::parse(2, "(1)").unwrap();
        let m = induce(&verma_datum(&b, &t("(1,-1|2,0)")).unwrap(), 3).unwrap();
        let units = [e(2, 1, 3), e(2, 3, 1), e(2, 2, 1), e(2, 1, 2), e(2, 4, 2), e(2, 2, 4), e(2, 3, 2)];
        check_relations(&m, &units);
        let m = induce(&bg_datum(&t("(2,5|2,5)")).unwrap(), 3).unwrap();
        check_relations(&m, &units);
    }

    fn mono(exps: &[u32]) -> PBWMonomial {
        PBWMonomial::from_exponents(exps)
    }

    #[test]
    fn golden_e13_on_bg() {
        let m = induce(&bg_datum(&t("(2,5|2,5)")).unwrap(), 18).unwrap();
        for a in 0..=3u32 {
            for d in 0..=3u32 {
                for (b, c) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    let got = m.act_unit(e(2, 1, 3), mono(&[a, b, c, d])).unwrap();
                    let ai = a as i64;
                    let sub1 = |x: u32| x.saturating_sub(1);
                    let want = match (b, c) {
                        (0, 0) => vec_of(&[(&[sub1(a), 1, 0, d], -ai)]),
                        (1, 0) => vec_of(&[]),
                        (0, 1) => vec_of(&[(&[a, 0, 0, d + 1], 1), (&[sub1(a), 1, 1, d], -ai)]),
                        _ => vec_of(&[(&[a, 1, 0, d + 1], -1)]),
                    };
                    assert_eq!(got, want, "a21={a} a23={b} a41={c} a43={d}");
                }
            }
        }
    }
}
