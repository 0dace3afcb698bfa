use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::borelcomb::{enumerate_borels, height_functional, positive_roots, root_height, BorelLabel};
use crate::error::{Error, Result};
use crate::superalg::{bracket_units, Parity, Root};
use crate::weightlat::{from_tuple, par, RhoTuple, Weight};

use super::pbw::MAX_FACTORS;

/// Data for `Ind_s^g k_lambda`: the inducing roots (with the Cartan), an
/// ordered complement and the highest weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductionDatum {
    pub n: usize,
    pub inducing_roots: BTreeSet<Root>,
    pub complement_order: Vec<Root>,
    pub hw: Weight,
    pub parity_shift: Parity,
    /// Height functional; every complement root has negative height.
    pub xi: Vec<i64>,
    /// Borel from which `xi` was taken.
    pub height_borel: BorelLabel,
}

/// Sort key for the PBW order: row, then column of the root vector.
fn pbw_sorted(mut roots: Vec<Root>) -> Vec<Root> {
    roots.sort_by_key(|r| (r.a, r.b));
    roots
}

fn borel_negatives(b: &BorelLabel) -> Vec<Root> {
    pbw_sorted(positive_roots(b).into_iter().map(|r| r.neg()).collect())
}

impl InductionDatum {
    /// Validates and completes a datum. The height functional is taken from
    /// the first Borel (in enumeration order) in which every complement root
    /// is negative.
    pub fn new(n: usize, inducing_roots: BTreeSet<Root>, complement_order: Vec<Root>, hw: Weight) -> Result<Self> {
        let height_borel = enumerate_borels(n)
            .into_iter()
            .find(|b| {
                let pos = positive_roots(b);
                complement_order.iter().all(|r| pos.contains(&r.neg()))
            })
            .ok_or_else(|| Error::InvalidDatum("no Borel makes the complement negative".into()))?;
        Self::with_height(n, inducing_roots, complement_order, hw, height_borel)
    }

    pub fn with_height(
        n: usize,
        inducing_roots: BTreeSet<Root>,
        complement_order: Vec<Root>,
        hw: Weight,
        height_borel: BorelLabel,
    ) -> Result<Self> {
        let xi = height_functional(&height_borel);
        let parity_shift = par(&hw);
        let d = Self { n, inducing_roots, complement_order, hw, parity_shift, xi, height_borel };
        d.validate()?;
        Ok(d)
    }

    pub fn with_parity_shift(mut self, p: Parity) -> Self {
        self.parity_shift = p;
        self
    }

    /// Roots of the subalgebra in which the datum lives.
    pub fn universe(&self) -> BTreeSet<Root> {
        self.inducing_roots.iter().chain(&self.complement_order).copied().collect()
    }

    pub fn is_full(&self) -> bool {
        self.universe().len() == 2 * self.n * (2 * self.n - 1)
    }

    pub fn complement_index(&self, r: Root) -> Option<usize> {
        self.complement_order.iter().position(|&c| c == r)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.hw.n() != n {
            return Err(Error::RankMismatch(self.hw.n(), n));
        }
        if self.complement_order.len() > MAX_FACTORS {
            return Err(Error::InvalidDatum(format!(
                "{} complement roots exceed the supported {MAX_FACTORS}",
                self.complement_order.len()
            )));
        }
        let comp: BTreeSet<Root> = self.complement_order.iter().copied().collect();
        if comp.len() != self.complement_order.len() {
            return Err(Error::InvalidDatum("repeated complement root".into()));
        }
        if let Some(r) = comp.intersection(&self.inducing_roots).next() {
            return Err(Error::InvalidDatum(format!("{r} is both inducing and complement")));
        }
        let universe = self.universe();
        for r in &universe {
            if r.n != n {
                return Err(Error::RankMismatch(r.n, n));
            }
        }
        let contains = |u: crate::superalg::MatrixUnit, set: &BTreeSet<Root>| {
            u.is_cartan() || set.contains(&Root::raw(n, u.i, u.j))
        };
        for a in &universe {
            for b in &universe {
                for (u, _) in bracket_units(a.unit(), b.unit()) {
                    if !contains(u, &universe) {
                        return Err(Error::InvalidDatum(format!("[{a}, {b}] leaves the universe")));
                    }
                }
            }
        }
        for a in &self.inducing_roots {
            for b in &self.inducing_roots {
                for (u, c) in bracket_units(a.unit(), b.unit()) {
                    if !contains(u, &self.inducing_roots) {
                        return Err(Error::InvalidDatum(format!("inducing roots not closed: [{a}, {b}] = {u}")));
                    }
                    let _ = c;
                }
                if a.neg() == *b {
                    let value: i64 =
                        bracket_units(a.unit(), b.unit()).into_iter().map(|(u, c)| c * self.hw.eval_cartan(u.i)).sum();
                    if value != 0 {
                        return Err(Error::InvalidDatum(format!("weight {} does not vanish on [{a}, {b}]", self.hw)));
                    }
                }
            }
        }
        for r in &self.complement_order {
            if root_height(&self.xi, *r) >= 0 {
                return Err(Error::InvalidDatum(format!("complement root {r} is not lowering")));
            }
        }
        Ok(())
    }
}

/// Verma datum for `M^b(t)`.
pub fn verma_datum(b: &BorelLabel, t: &RhoTuple) -> Result<InductionDatum> {
    if b.n != t.n() {
        return Err(Error::RankMismatch(b.n, t.n()));
    }
    InductionDatum::with_height(b.n, positive_roots(b), borel_negatives(b), from_tuple(t, b), b.clone())
}

/// Verma datum with an explicit highest weight.
pub fn verma_datum_weight(b: &BorelLabel, hw: Weight) -> Result<InductionDatum> {
    InductionDatum::with_height(b.n, positive_roots(b), borel_negatives(b), hw, b.clone())
}

/// Datum of the Brundan-Goodwin module `BG(t)`.
pub fn bg_datum(t: &RhoTuple) -> Result<InductionDatum> {
    let n = t.n();
    let bo = BorelLabel::b_o(n);
    let mut inducing = positive_roots(&bo);
    for i in 1..=n {
        if t.at(i) == t.at(n + i) {
            inducing.insert(Root::odd(n, i, i).neg());
        }
    }
    let complement = borel_negatives(&bo).into_iter().filter(|r| !inducing.contains(r)).collect();
    InductionDatum::with_height(n, inducing, complement, from_tuple(t, &bo), bo)
}

/// Datum for `Ind k_lambda` from the subalgebra spanned by several Borels.
pub fn borel_sum_datum(borels: &[BorelLabel], hw: Weight) -> Result<InductionDatum> {
    let n = hw.n();
    let mut inducing = BTreeSet::new();
    for b in borels {
        if b.n != n {
            return Err(Error::RankMismatch(b.n, n));
        }
        inducing.extend(positive_roots(b));
    }
    let complement = pbw_sorted(Root::all(n).filter(|r| !inducing.contains(r)).collect());
    InductionDatum::new(n, inducing, complement, hw)
}

/// Roots with both indices in `block` (unified 1-based indices).
pub fn block_roots(n: usize, block: &[usize]) -> BTreeSet<Root> {
    let mut out = BTreeSet::new();
    for &a in block {
        for &b in block {
            if a != b {
                out.insert(Root::raw(n, a, b));
            }
        }
    }
    out
}

/// Levi subalgebra roots for a partition of `1..=2n` into blocks.
pub fn levi_roots(n: usize, blocks: &[Vec<usize>]) -> BTreeSet<Root> {
    blocks.iter().flat_map(|b| block_roots(n, b)).collect()
}

/// Datum for a one-dimensionally induced module of the Levi subalgebra:
/// `inducing ∪ complement` is the set of Levi roots.
pub fn levi_datum(n: usize, blocks: &[Vec<usize>], inducing: BTreeSet<Root>, hw: Weight) -> Result<InductionDatum> {
    let roots = levi_roots(n, blocks);
    if let Some(r) = inducing.iter().find(|r| !roots.contains(r)) {
        return Err(Error::InvalidDatum(format!("{r} is not a Levi root")));
    }
    let complement = pbw_sorted(roots.iter().filter(|r| !inducing.contains(r)).copied().collect());
    InductionDatum::new(n, inducing, complement, hw)
}

/// Levi datum given by a Borel of `g`: `(b ∩ l)`-Verma module of `l`.
pub fn levi_verma_datum(blocks: &[Vec<usize>], b: &BorelLabel, hw: Weight) -> Result<InductionDatum> {
    let n = b.n;
    let roots = levi_roots(n, blocks);
    let inducing = positive_roots(b).into_iter().filter(|r| roots.contains(r)).collect();
    levi_datum(n, blocks, inducing, hw)
}

/// Parabolic induction by transitivity: the Levi datum `levi` is extended by
/// the nilradical `u_plus` (acting by zero), and `u_minus` is placed before
/// the Levi complement in the PBW order.
pub fn parabolic_datum(levi: &InductionDatum, u_plus: &BTreeSet<Root>) -> Result<InductionDatum> {
    let n = levi.n;
    let universe = levi.universe();
    if let Some(r) = u_plus.iter().find(|r| universe.contains(r)) {
        return Err(Error::InvalidDatum(format!("{r} lies in the Levi")));
    }
    let mut inducing = levi.inducing_roots.clone();
    inducing.extend(u_plus.iter().copied());
    let mut complement = pbw_sorted(u_plus.iter().map(|r| r.neg()).collect());
    complement.extend(levi.complement_order.iter().copied());
    let d = InductionDatum::new(n, inducing, complement, levi.hw.clone())?;
    if !d.is_full() {
        return Err(Error::InvalidDatum("parabolic does not complete the Levi".into()));
    }
    Ok(d.with_parity_shift(levi.parity_shift))
}

/// Blocks `I = {1, n+1}` and `J` = the rest.
pub fn ij_blocks(n: usize) -> Vec<Vec<usize>> {
    let j: Vec<usize> = (2..=n).chain(n + 2..=2 * n).collect();
    vec![vec![1, n + 1], j]
}

/// Blocks `{i, n+i}` of the principal Levi `gl(1|1)^n`.
pub fn principal_blocks(n: usize) -> Vec<Vec<usize>> {
    (1..=n).map(|i| vec![i, n + i]).collect()
}

/// Nilradical of `p_IJ` for a Borel `b` containing it: positive roots of `b`
/// outside the Levi.
pub fn nilradical(b: &BorelLabel, blocks: &[Vec<usize>]) -> BTreeSet<Root> {
    let l = levi_roots(b.n, blocks);
    positive_roots(b).into_iter().filter(|r| !l.contains(r)).collect()
}

/// Nilradical of the principal parabolic `b_o + b_i`.
pub fn principal_nilradical(n: usize) -> BTreeSet<Root> {
    let l = levi_roots(n, &principal_blocks(n));
    let mut out = positive_roots(&BorelLabel::b_o(n));
    out.extend(positive_roots(&BorelLabel::b_i(n)));
    out.into_iter().filter(|r| !l.contains(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> RhoTuple {
        s.parse().unwrap()
    }

    #[test]
    fn verma_complements() {
        let d = verma_datum(&BorelLabel::empty(1), &t("(0|0)")).unwrap();
        assert_eq!(d.complement_order, vec![Root::odd(1, 1, 1).neg()]);
        let d = verma_datum(&BorelLabel::empty(2), &t("(1,2|3,4)")).unwrap();
        let odd = d.complement_order.iter().filter(|r| r.is_odd()).count();
        assert_eq!((d.complement_order.len() - odd, odd), (2, 4));
        assert_eq!(d.parity_shift, par(&d.hw));
    }

    #[test]
    fn bg_complement_mabg() {
        let d = bg_datum(&t("(3,5|3,5)")).unwrap();
        let units: Vec<(usize, usize)> = d.complement_order.iter().map(|r| (r.a, r.b)).collect();
        assert_eq!(units, vec![(2, 1), (2, 3), (4, 1), (4, 3)]);
        let d = bg_datum(&t("(1|1)")).unwrap();
        assert!(d.complement_order.is_empty());
        let d = bg_datum(&t("(1|2)")).unwrap();
        assert_eq!(d.inducing_roots, positive_roots(&BorelLabel::empty(1)));
    }

    #[test]
    fn borel_sum_order_and_validation() {
        let hw = Weight::new(vec![4, 7], vec![-7, -2]);
        let b = [BorelLabel::empty(2), BorelLabel::parse(2, "(1)").unwrap()];
        let d = borel_sum_datum(&b, hw).unwrap();
        let units: Vec<(usize, usize)> = d.complement_order.iter().map(|r| (r.a, r.b)).collect();
        assert_eq!(units, vec![(2, 1), (3, 1), (4, 1), (4, 2), (4, 3)]);
        let bad = Weight::new(vec![4, 7], vec![-6, -2]);
        assert!(matches!(borel_sum_datum(&b, bad), Err(Error::InvalidDatum(_))));
    }

    #[test]
    fn non_closed_inducing_rejected() {
        let n = 2;
        let inducing: BTreeSet<Root> = [Root::raw(n, 1, 2), Root::raw(n, 2, 3)].into_iter().collect();
        let complement = Root::all(n).filter(|r| !inducing.contains(r)).collect();
        assert!(InductionDatum::new(n, inducing, complement, Weight::zero(n)).is_err());
    }

    #[test]
    fn parabolic_from_levi() {
        let n = 2;
        let b = crate::borelcomb::star(&BorelLabel::empty(1), &BorelLabel::full(1)).unwrap();
        let blocks = ij_blocks(n);
        let hw = from_tuple(&t("(1,2|1,3)"), &b);
        let levi = levi_verma_datum(&blocks, &b, hw).unwrap();
        assert!(!levi.is_full());
        let d = parabolic_datum(&levi, &nilradical(&b, &blocks)).unwrap();
        assert!(d.is_full());
        assert_eq!(d.complement_order.len(), 6);
        assert_eq!(&d.complement_order[4..], &levi.complement_order[..]);
    }
}
