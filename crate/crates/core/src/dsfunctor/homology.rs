use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::borelcomb::root_height;
use crate::envmod::ModuleRealization;
use crate::error::{Error, Result};
use crate::exactq::{image_basis, kernel_with_free, quotient_basis, Quotient, SparseRationalMatrix, Vector};
use crate::superalg::{bracket_units, MatrixUnit, Parity, Root};
use crate::weightlat::{par, pr_alpha, Weight};

/// Homology of `x` at one weight.
#[derive(Clone, Debug)]
pub struct WeightHomology {
    pub parity: Parity,
    pub ambient_dim: usize,
    /// Canonical basis of `ker x` in the PBW basis of the weight space.
    pub kernel: Vec<Vector>,
    free: Vec<usize>,
    /// Canonical basis of `im x` in the PBW basis of the weight space.
    pub image: Vec<Vector>,
    /// Cosets of the image inside the kernel, in kernel coordinates.
    pub quotient: Quotient,
}

impl WeightHomology {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Kernel vector representing the `k`-th homology basis element.
    pub fn representative(&self, k: usize) -> &Vector {
        &self.kernel[self.quotient.rep_indices[k]]
    }

    /// Homology coordinates of a vector known to lie in the kernel.
    pub fn project(&self, v: &[crate::Rational]) -> Vector {
        let coords: Vector = self.free.iter().map(|&f| v[f].clone()).collect();
        self.quotient.project(&coords)
    }

    /// `(even, odd)` dimensions.
    pub fn split(&self) -> (u64, u64) {
        let d = self.dim() as u64;
        if self.parity.is_odd() {
            (0, d)
        } else {
            (d, 0)
        }
    }
}

/// `DS_alpha` of a truncated module, on the weights where both `x`-matrices
/// through the weight space are complete.
pub struct DSResult<'a> {
    pub source: &'a ModuleRealization,
    pub alpha: Root,
    pub x: MatrixUnit,
    /// `|xi(alpha)|` for the height functional of the source.
    pub cost: i64,
    homology: BTreeMap<Weight, WeightHomology>,
    induced: Mutex<HashMap<(MatrixUnit, Weight), Arc<SparseRationalMatrix>>>,
}

impl std::fmt::Debug for DSResult<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DSResult")
            .field("alpha", &self.alpha)
            .field("depth", &self.source.depth)
            .field("census", &self.census())
            .finish()
    }
}

fn homology_at(m: &ModuleRealization, x: MatrixUnit, alpha: Root, mu: &Weight) -> Result<WeightHomology> {
    let out = m.generator_matrix(x, mu)?;
    let below = mu.add_root(alpha, -1);
    let inc = m.generator_matrix(x, &below)?;
    if !out.mul(&inc).is_zero() {
        return Err(Error::Precondition(format!("{x} does not square to zero at {mu}")));
    }
    let (kernel, free) = kernel_with_free(&out);
    let image = image_basis(&inc);
    let coords: Vec<Vector> = image.iter().map(|v| free.iter().map(|&f| v[f].clone()).collect()).collect();
    let quotient = quotient_basis(kernel.len(), &coords)?;
    Ok(WeightHomology {
        parity: m.parity_at(mu).expect("nonzero weight space"),
        ambient_dim: m.dim_at(mu),
        kernel,
        free,
        image,
        quotient,
    })
}

/// Computes `ker x / im x` for `x = e_alpha` at every valid weight.
pub fn ds_homology(m: &ModuleRealization, alpha: Root) -> Result<DSResult<'_>> {
    if !alpha.is_odd() {
        return Err(Error::NotOdd(alpha.to_string()));
    }
    if alpha.n != m.n() {
        return Err(Error::RankMismatch(alpha.n, m.n()));
    }
    let x = alpha.unit();
    assert!(bracket_units(x, x).is_empty(), "[x, x] must vanish");
    let cost = root_height(&m.datum.xi, alpha).abs();
    if cost > m.depth {
        return Err(Error::EmptyRegion { depth: m.depth, cost });
    }
    let valid: Vec<&Weight> = m.weights().iter().filter(|w| m.depth_of(w) + cost <= m.depth).collect();
    let computed: Result<Vec<(Weight, WeightHomology)>> =
        valid.par_iter().map(|mu| Ok(((*mu).clone(), homology_at(m, x, alpha, mu)?))).collect();
    Ok(DSResult {
        source: m,
        alpha,
        x,
        cost,
        homology: computed?.into_iter().collect(),
        induced: Mutex::new(HashMap::new()),
    })
}

/// Indices of `gl(n|n)` outside `{i, n + j}` for `alpha = ±(eps_i - delta_j)`.
pub fn complementary_indices(alpha: Root) -> Vec<usize> {
    let (i, j) = alpha.odd_pair().expect("odd root");
    let n = alpha.n;
    (1..=2 * n).filter(|&k| k != i && k != n + j).collect()
}

impl<'a> DSResult<'a> {
    pub fn depth(&self) -> i64 {
        self.source.depth
    }

    pub fn is_valid(&self, mu: &Weight) -> bool {
        self.source.depth_of(mu) + self.cost <= self.source.depth
    }

    /// Homology at `mu`; `None` if `mu` is valid with zero weight space or
    /// outside the valid region.
    pub fn at(&self, mu: &Weight) -> Option<&WeightHomology> {
        self.homology.get(mu)
    }

    pub fn dim_at(&self, mu: &Weight) -> usize {
        self.at(mu).map_or(0, WeightHomology::dim)
    }

    pub fn split_at(&self, mu: &Weight) -> (u64, u64) {
        self.at(mu).map_or((0, 0), WeightHomology::split)
    }

    /// Valid weights carrying a nonzero weight space of the source.
    pub fn valid_weights(&self) -> impl Iterator<Item = &Weight> {
        self.homology.keys()
    }

    /// Nonzero homology dimensions `(even, odd)` per weight.
    pub fn census(&self) -> BTreeMap<Weight, (u64, u64)> {
        self.homology.iter().filter(|(_, h)| h.dim() > 0).map(|(w, h)| (w.clone(), h.split())).collect()
    }

    pub fn total(&self) -> (u64, u64) {
        self.census().values().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    }

    /// Parity of the source at any weight of its lattice coset.
    pub fn source_parity(&self, mu: &Weight) -> Parity {
        self.source.datum.parity_shift + par(&self.source.datum.hw.sub(mu))
    }

    /// The weights `nu + c alpha` (lifted) on which the source can be
    /// nonzero. Finite because odd factors change the eps-sum of a weight by
    /// at most one each.
    pub fn fibre(&self, nu: &Weight) -> Vec<Weight> {
        let n = self.source.n();
        let hw = &self.source.datum.hw;
        let keep = complementary_indices(self.alpha);
        let mu0 = lift(&keep, nu, hw);
        if mu0.coords().iter().sum::<i64>() != hw.coords().iter().sum::<i64>() {
            return Vec::new();
        }
        let eps_sum = |w: &Weight| -> i64 { w.eps.iter().sum() };
        let shift = |r: &Root| -> i64 { (r.a <= n) as i64 - (r.b <= n) as i64 };
        let (mut down, mut up) = (0i64, 0i64);
        for r in self.source.datum.complement_order.iter().filter(|r| r.is_odd()) {
            if shift(r) < 0 {
                down += 1;
            } else {
                up += 1;
            }
        }
        let (top, s0, step) = (eps_sum(hw), eps_sum(&mu0), shift(&self.alpha));
        let (lo, hi) = ((top - down - s0) * step, (top + up - s0) * step);
        (lo.min(hi)..=lo.max(hi)).map(|c| mu0.add_root(self.alpha, c)).collect()
    }

    /// Homology summed over the fibre of `pr_alpha` over `nu`, or `None` if
    /// the fibre leaves the valid region.
    pub fn projected_at(&self, nu: &Weight) -> Option<(u64, u64)> {
        let fibre = self.fibre(nu);
        if !fibre.iter().all(|w| self.is_valid(w)) {
            return None;
        }
        Some(fibre.iter().map(|w| self.split_at(w)).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1)))
    }

    /// Nonzero projected homology over all complete fibres meeting the
    /// source.
    pub fn projected_census(&self) -> BTreeMap<Weight, (u64, u64)> {
        let nus: std::collections::BTreeSet<Weight> =
            self.homology.keys().map(|mu| pr_alpha(mu, self.alpha).expect("odd root")).collect();
        nus.into_iter().filter_map(|nu| self.projected_at(&nu).filter(|d| *d != (0, 0)).map(|d| (nu, d))).collect()
    }

    /// Matrix of the induced action of `g` from the homology at `mu` to the
    /// homology at `mu + wt(g)`, with `g` a unit of the copy of
    /// `gl(n-1|n-1)` on the complementary indices.
    pub fn induced_action(&self, g: MatrixUnit, mu: &Weight) -> Result<Arc<SparseRationalMatrix>> {
        let keep = complementary_indices(self.alpha);
        if !keep.contains(&g.i) || !keep.contains(&g.j) {
            return Err(Error::NotCentralizing(g.to_string(), self.x.to_string()));
        }
        debug_assert!(bracket_units(g, self.x).is_empty());
        if let Some(m) = self.induced.lock().expect("cache").get(&(g, mu.clone())) {
            return Ok(m.clone());
        }
        let target = match crate::superalg::root_of(g) {
            Some(r) => mu.add_root(r, 1),
            None => mu.clone(),
        };
        for w in [mu, &target] {
            if !self.is_valid(w) {
                return Err(Error::Truncation {
                    weight: w.to_string(),
                    depth: self.source.depth_of(w),
                    max: self.source.depth - self.cost,
                });
            }
        }
        let (src, tgt) = (self.at(mu), self.at(&target));
        let (sd, td) = (src.map_or(0, |h| h.dim()), tgt.map_or(0, |h| h.dim()));
        let mut mat = SparseRationalMatrix::zeros(td, sd);
        // A missing entry means the weight space itself is zero.
        if let (Some(src), Some(tgt)) = (src, tgt) {
            let gm = self.source.generator_matrix(g, mu)?;
            let out = self.source.generator_matrix(self.x, &target)?;
            for k in 0..sd {
                let w = gm.mul_vec(src.representative(k));
                if !out.mul_vec(&w).iter().all(|c| c.is_zero()) {
                    return Err(Error::Precondition(format!("{g} does not preserve ker x at {mu}")));
                }
                for (row, c) in tgt.project(&w).into_iter().enumerate() {
                    if !c.is_zero() {
                        mat.set(row, k, c);
                    }
                }
            }
            for v in &src.image {
                let w = gm.mul_vec(v);
                if !tgt.project(&w).iter().all(|c| c.is_zero()) {
                    return Err(Error::Precondition(format!("{g} does not preserve im x at {mu}")));
                }
            }
        }
        let mat = Arc::new(mat);
        self.induced.lock().expect("cache").insert((g, mu.clone()), mat.clone());
        Ok(mat)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            weight: String,
            coords: Weight,
            even: u64,
            odd: u64,
        }
        let census: Vec<Entry> = self
            .census()
            .into_iter()
            .map(|(w, (even, odd))| Entry { weight: w.to_string(), coords: w, even, odd })
            .collect();
        let (even, odd) = self.total();
        serde_json::json!({
            "alpha": self.alpha.to_string(),
            "x": self.x.to_string(),
            "depth": self.source.depth,
            "valid_region": {
                "height_borel": self.source.datum.height_borel.to_string(),
                "top": self.source.datum.hw.to_string(),
                "max_depth": self.source.depth - self.cost,
                "weights": self.homology.len(),
            },
            "homology": census,
            "total": { "even": even, "odd": odd },
        })
    }
}

/// Lifts a weight of the smaller algebra, taking the removed coordinates
/// from `fill`.
pub(crate) fn lift(keep: &[usize], nu: &Weight, fill: &Weight) -> Weight {
    let mut c = fill.coords();
    for (k, &full) in keep.iter().enumerate() {
        c[full - 1] = nu.coord(k + 1);
    }
    Weight::from_coords(fill.n(), &c)
}
