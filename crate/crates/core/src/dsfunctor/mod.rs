//! Duflo-Serganova homology of truncated modules, the induced action of
//! the centralizer, and certification against Verma modules.

mod certify;
mod contraction;
mod hinich;
mod homology;
mod tensor;

pub use certify::{
    certify_copies, certify_verma_iso, certify_verma_iso_with, certify_zero, Certification, CertifyOptions,
    Counterexample, Verdict,
};
pub use contraction::{contraction_check, ContractionReport};
pub use hinich::{hinich_supercharacter_check, ses_dimension_check, HinichEntry, HinichReport};
pub use homology::{complementary_indices, ds_homology, DSResult, WeightHomology};
pub use tensor::{ds_tensor_factor, SplitMismatch, TensorDS};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borelcomb::{enumerate_borels, odd_simple_roots, restrict_label, BorelLabel};
    use crate::envmod::{
        bg_datum, induce, levi_datum, principal_blocks, verma_datum, verma_datum_weight, ModuleRealization,
    };
    use crate::exactq::rank;
    use crate::superalg::{bracket, AlgebraElement, MatrixUnit, Root};
    use crate::weightlat::{pr_alpha, RhoTuple, Weight};

    fn t(s: &str) -> RhoTuple {
        s.parse().unwrap()
    }

    fn verma(label: &str, n: usize, tuple: &str, depth: i64) -> ModuleRealization {
        induce(&verma_datum(&BorelLabel::parse(n, label).unwrap(), &t(tuple)).unwrap(), depth).unwrap()
    }

    #[test]
    fn gl11_table() {
        let a1 = Root::odd(1, 1, 1);
        for a in -2..=2 {
            let tt = format!("({a}|{a})");
            let m = verma("()", 1, &tt, 8);
            assert_eq!(ds_homology(&m, a1).unwrap().total(), (1, 1));
            let m = verma("(1)", 1, &tt, 8);
            assert_eq!(ds_homology(&m, a1).unwrap().total(), (0, 0));
            for label in ["()", "(1)"] {
                let m = verma(label, 1, &format!("({a}|{})", a + 1), 8);
                assert_eq!(ds_homology(&m, a1).unwrap().total(), (0, 0));
            }
            let l = induce(&bg_datum(&t(&tt)).unwrap(), 8).unwrap();
            let (e, o) = ds_homology(&l, a1).unwrap().total();
            assert_eq!(e + o, 1);
        }
    }

    #[test]
    fn rejects_even_roots_and_empty_regions() {
        let m = verma("()", 2, "(0,1|0,1)", 2);
        assert!(matches!(ds_homology(&m, Root::new(2, 1, 2).unwrap()), Err(crate::Error::NotOdd(_))));
        let m = verma("()", 2, "(0,1|0,1)", 0);
        assert!(matches!(ds_homology(&m, Root::odd(2, 1, 1)), Err(crate::Error::EmptyRegion { .. })));
    }

    #[test]
    fn homology_dimension_formula() {
        for b in enumerate_borels(2) {
            let m = verma(&b.to_string(), 2, "(1,0|1,2)", 4);
            for alpha in Root::all(2).filter(|r| r.is_odd()) {
                let r = ds_homology(&m, alpha).unwrap();
                for mu in r.valid_weights() {
                    let out = m.generator_matrix(alpha.unit(), mu).unwrap();
                    let inc = m.generator_matrix(alpha.unit(), &mu.add_root(alpha, -1)).unwrap();
                    let expected = m.dim_at(mu) - rank(&out) - rank(&inc);
                    assert_eq!(r.dim_at(mu), expected, "{b} {alpha} {mu}");
                }
            }
        }
    }

    #[test]
    fn certified_on_b_o_verma() {
        let alpha = Root::odd(2, 1, 1);
        for (a, b) in [(0, 0), (2, -1), (-1, 1)] {
            let m = verma("(1)", 2, &format!("({a},{b}|{a},{b})"), 6);
            let r = ds_homology(&m, alpha).unwrap();
            let opts = CertifyOptions { intertwine: true };
            let c = certify_verma_iso_with(&r, &BorelLabel::empty(1), &t(&format!("({b}|{b})")), opts);
            assert_eq!(c.verdict, Verdict::Certified, "{c:?}");
            assert!(c.checks.iter().any(|s| s == "intertwining"));
            assert_eq!(r.total(), (2, 2));
        }
    }

    #[test]
    fn typical_projection_is_zero() {
        let m = verma("(1)", 2, "(2,0|1,0)", 6);
        let r = ds_homology(&m, Root::odd(2, 1, 1)).unwrap();
        assert_eq!(certify_zero(&r).verdict, Verdict::Certified);
        let c = certify_verma_iso(&r, &BorelLabel::empty(1), &t("(0|0)"));
        assert_eq!(c.verdict, Verdict::Refuted);
        assert!(c.counterexample.is_some());
    }

    #[test]
    fn ds_e23_on_gl22_verma() {
        let (a, b, c) = (1, -1, 2);
        let hw = Weight::new(vec![a, b], vec![-b, -c]);
        let m = induce(&verma_datum_weight(&BorelLabel::empty(2), hw.clone()).unwrap(), 6).unwrap();
        let alpha = Root::odd(2, 2, 1);
        let r = ds_homology(&m, alpha).unwrap();
        let target = restrict_label(&BorelLabel::empty(2), alpha).unwrap();
        let keep = complementary_indices(alpha);
        assert_eq!(keep, vec![1, 4]);
        let nu = pr_alpha(&hw, alpha).unwrap();
        assert_eq!(nu, Weight::new(vec![a], vec![-c]));
        let tops = [hw.clone(), hw.add_root(alpha, -1)];
        let cert = certify_copies(&r, &target, &nu, &tops, CertifyOptions { intertwine: true });
        assert_eq!(cert.verdict, Verdict::Certified, "{cert:?}");
    }

    #[test]
    fn conjecture_small_grid() {
        for b in enumerate_borels(2) {
            for alpha in odd_simple_roots(&b) {
                for tt in ["(0,1|0,1)", "(1,1|0,1)", "(0,-1|1,0)", "(2,0|0,2)"] {
                    let m = verma(&b.to_string(), 2, tt, 5);
                    let r = ds_homology(&m, alpha).unwrap();
                    let hw = m.datum.hw.clone();
                    let form = crate::weightlat::bilinear_form(&hw, &Weight::from_root(alpha)).unwrap();
                    let cert = if form != 0 {
                        certify_zero(&r)
                    } else {
                        let target = restrict_label(&b, alpha).unwrap();
                        let nu = pr_alpha(&hw, alpha).unwrap();
                        let tops = [hw.clone(), hw.add_root(alpha, -1)];
                        certify_copies(&r, &target, &nu, &tops, CertifyOptions::default())
                    };
                    assert_eq!(cert.verdict, Verdict::Certified, "{b} {alpha} {tt}: {cert:?}");
                }
            }
        }
    }

    fn check_induced_relations(r: &DSResult<'_>, units: &[MatrixUnit]) -> usize {
        let mut checked = 0;
        for &a in units {
            for &b in units {
                let ab = bracket(&AlgebraElement::unit(a), &AlgebraElement::unit(b)).unwrap();
                let s = crate::Rational::from_int(a.parity().koszul(b.parity()));
                let shift = |u: MatrixUnit| crate::superalg::root_of(u).map_or(Weight::zero(u.n), Weight::from_root);
                for mu in r.valid_weights() {
                    let (wa, wb) = (mu.add(&shift(a)), mu.add(&shift(b)));
                    let mats = (
                        r.induced_action(b, mu),
                        r.induced_action(a, &wb),
                        r.induced_action(a, mu),
                        r.induced_action(b, &wa),
                    );
                    let (Ok(b1), Ok(a2), Ok(a1), Ok(b2)) = mats else { continue };
                    let lhs = a2.mul(&b1).sub(&b2.mul(&a1).scale(&s));
                    let mut rhs = crate::SparseRationalMatrix::zeros(lhs.rows(), lhs.cols());
                    for (u, c) in ab.terms() {
                        rhs = rhs.add(&r.induced_action(u, mu).unwrap().scale(c));
                    }
                    assert_eq!(lhs, rhs, "[{a}, {b}] at {mu}");
                    checked += 1;
                }
            }
        }
        checked
    }

    #[test]
    fn induced_action_is_a_representation() {
        let m = verma("(1)", 2, "(0,1|0,1)", 4);
        let alpha = Root::odd(2, 1, 1);
        let r = ds_homology(&m, alpha).unwrap();
        let units: Vec<MatrixUnit> =
            [(2, 2), (4, 4), (2, 4), (4, 2)].iter().map(|&(i, j)| MatrixUnit::new(2, i, j).unwrap()).collect();
        assert!(check_induced_relations(&r, &units) > 0);
        let err = r.induced_action(MatrixUnit::new(2, 1, 2).unwrap(), &m.datum.hw);
        assert!(matches!(err, Err(crate::Error::NotCentralizing(..))));
    }

    #[test]
    fn contraction_small() {
        let rep = contraction_check(2, 4);
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.generators, vec!["e2,1", "e2,3", "e4,1", "e4,3"]);
    }

    fn levi_gl11_pair(first_verma: bool, a: i64, b: i64, depth: i64) -> ModuleRealization {
        let n = 2;
        let mut inducing = std::collections::BTreeSet::new();
        inducing.insert(Root::odd(n, 1, 1));
        if !first_verma {
            inducing.insert(Root::odd(n, 1, 1).neg());
        }
        inducing.insert(Root::odd(n, 2, 2));
        inducing.insert(Root::odd(n, 2, 2).neg());
        let hw = Weight::new(vec![a, b], vec![-a, -b]);
        induce(&levi_datum(n, &principal_blocks(n), inducing, hw).unwrap(), depth).unwrap()
    }

    #[test]
    fn tensor_factor_matches_direct() {
        for first_verma in [true, false] {
            let m = levi_gl11_pair(first_verma, 1, 0, 6);
            let alpha = Root::odd(2, 1, 1);
            let tf = ds_tensor_factor(&m, alpha).unwrap();
            assert_eq!(tf.first_block, vec![1, 3]);
            let direct = ds_homology(&m, alpha).unwrap();
            assert_eq!(tf.mismatch(&direct), None);
            let total: u64 = tf.census.values().map(|(e, o)| e + o).sum();
            assert_eq!(total, if first_verma { 2 } else { 1 });
        }
        let m = levi_gl11_pair(true, 1, 0, 6);
        assert!(ds_tensor_factor(&m, Root::odd(2, 1, 2)).is_err());
    }

    #[test]
    fn hinich_rejects_non_exact_input() {
        let m = verma("(1)", 2, "(0,1|0,1)", 5);
        let r = ds_homology(&m, Root::odd(2, 1, 1)).unwrap();
        assert!(matches!(hinich_supercharacter_check(&r, &r, &r), Err(crate::Error::Precondition(_))));
    }
}
