use std::collections::{BTreeMap, BTreeSet};

use crate::envmod::{induce, InductionDatum, ModuleRealization};
use crate::error::{Error, Result};
use crate::superalg::{Parity, Root};
use crate::weightlat::Weight;

use super::homology::{ds_homology, DSResult};

/// `DS_alpha(M ⊠ N)` computed as `DS_alpha(M) ⊠ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorDS {
    pub alpha: Root,
    /// Indices of the factor containing `alpha`.
    pub first_block: Vec<usize>,
    pub first: BTreeMap<Weight, (u64, u64)>,
    pub second: BTreeMap<Weight, (u64, u64)>,
    /// Combined census on the valid region of the product.
    pub census: BTreeMap<Weight, (u64, u64)>,
}

/// A weight with two disagreeing `(even, odd)` dimensions.
pub type SplitMismatch = (Weight, (u64, u64), (u64, u64));

impl TensorDS {
    /// First weight valid for `r` where the two censuses differ.
    pub fn mismatch(&self, r: &DSResult<'_>) -> Option<SplitMismatch> {
        let direct = r.census();
        let keys: BTreeSet<Weight> = direct.keys().chain(self.census.keys()).cloned().collect();
        keys.into_iter().filter(|w| r.is_valid(w)).find_map(|w| {
            let (a, b) =
                (self.census.get(&w).copied().unwrap_or_default(), direct.get(&w).copied().unwrap_or_default());
            (a != b).then_some((w, a, b))
        })
    }
}

fn components(n: usize, roots: &BTreeSet<Root>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..=2 * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for r in roots {
        let (a, b) = (find(&mut parent, r.a), find(&mut parent, r.b));
        parent[a] = b;
    }
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 1..=2 * n {
        let c = find(&mut parent, k);
        out.entry(c).or_default().push(k);
    }
    out.into_values().collect()
}

fn restrict(d: &InductionDatum, keep: impl Fn(&Root) -> bool) -> Result<InductionDatum> {
    InductionDatum::with_height(
        d.n,
        d.inducing_roots.iter().copied().filter(&keep).collect(),
        d.complement_order.iter().copied().filter(&keep).collect(),
        d.hw.clone(),
        d.height_borel.clone(),
    )
}

fn split(p: Parity, k: u64) -> (u64, u64) {
    if p.is_odd() {
        (0, k)
    } else {
        (k, 0)
    }
}

/// Splits a module induced over a direct sum of blocks into the factor
/// containing `alpha` and the rest, computes the homology on the first factor
/// and tensors it with the character of the second.
pub fn ds_tensor_factor(m: &ModuleRealization, alpha: Root) -> Result<TensorDS> {
    let (i, j) = alpha.odd_pair().ok_or_else(|| Error::NotOdd(alpha.to_string()))?;
    let n = m.n();
    let comps = components(n, &m.datum.universe());
    let block = comps
        .into_iter()
        .find(|c| c.contains(&i))
        .ok_or_else(|| Error::Precondition("index outside every block".into()))?;
    if !block.contains(&(n + j)) {
        return Err(Error::Precondition(format!("{alpha} joins two tensor factors")));
    }
    let inside = |r: &Root| block.contains(&r.a);
    let m1 = induce(&restrict(&m.datum, inside)?, m.depth)?;
    let m2 = induce(&restrict(&m.datum, |r| !inside(r))?, m.depth)?;
    let ds1 = ds_homology(&m1, alpha)?;
    let first = ds1.census();
    let second: BTreeMap<Weight, (u64, u64)> = m2
        .weights()
        .iter()
        .map(|w| (w.clone(), split(m2.parity_at(w).expect("nonzero"), m2.dim_at(w) as u64)))
        .collect();
    let hw = &m.datum.hw;
    let shift = m.datum.parity_shift;
    let mut census: BTreeMap<Weight, (u64, u64)> = BTreeMap::new();
    for (w1, d1) in &first {
        for (w2, d2) in &second {
            let w = w1.add(w2).sub(hw);
            if m.depth_of(&w) + ds1.cost > m.depth {
                continue;
            }
            let p1 = if d1.0 > 0 { Parity::Even } else { Parity::Odd };
            let p2 = if d2.0 > 0 { Parity::Even } else { Parity::Odd };
            let k = (d1.0 + d1.1) * (d2.0 + d2.1);
            let (e, o) = split(p1 + p2 + shift, k);
            let entry = census.entry(w).or_default();
            entry.0 += e;
            entry.1 += o;
        }
    }
    Ok(TensorDS { alpha, first_block: block, first, second, census })
}
