use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::borelcomb::{root_height, simple_roots, BorelLabel};
use crate::error::{Error, Result};
use crate::exactq::{kernel_basis, Rational, SparseRationalMatrix, Vector};
use crate::superalg::{bracket_units, AlgebraElement, MatrixUnit, Parity, Root};
use crate::weightlat::{Character, Region, Weight};

use super::datum::InductionDatum;
use super::pbw::{PBWMonomial, MAX_EXPONENT};

type Terms = Vec<(PBWMonomial, i64)>;

/// A truncated realization of `Ind_s^g k_lambda` on all weights of depth at
/// most `depth`.
pub struct ModuleRealization {
    pub datum: InductionDatum,
    pub depth: i64,
    weights: Vec<Weight>,
    weight_index: HashMap<Weight, usize>,
    spaces: Vec<Vec<PBWMonomial>>,
    position: HashMap<PBWMonomial, (usize, usize)>,
    comp_units: Vec<MatrixUnit>,
    comp_index: HashMap<MatrixUnit, usize>,
    memo: Mutex<HashMap<(MatrixUnit, PBWMonomial), Arc<Terms>>>,
    matrices: Mutex<HashMap<(MatrixUnit, usize), Arc<SparseRationalMatrix>>>,
}

impl std::fmt::Debug for ModuleRealization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModuleRealization")
            .field("datum", &self.datum)
            .field("depth", &self.depth)
            .field("dim", &self.dim())
            .finish()
    }
}

/// A vector of a module realization in its PBW basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModuleVector {
    pub terms: BTreeMap<PBWMonomial, Rational>,
}

impl ModuleVector {
    pub fn basis(m: PBWMonomial) -> Self {
        let mut v = Self::default();
        v.terms.insert(m, Rational::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: PBWMonomial, c: &Rational) {
        let e = self.terms.entry(m).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }
}

fn add_into(acc: &mut HashMap<PBWMonomial, i64>, m: PBWMonomial, c: i64) {
    if c == 0 {
        return;
    }
    let e = acc.entry(m).or_insert(0);
    *e = e.checked_add(c).expect("coefficient overflow");
    if *e == 0 {
        acc.remove(&m);
    }
}

fn finish(acc: HashMap<PBWMonomial, i64>) -> Terms {
    let mut v: Terms = acc.into_iter().collect();
    v.sort_unstable_by_key(|e| e.0);
    v
}

impl ModuleRealization {
    /// Enumerates the PBW basis on all weights of depth at most `depth`.
    pub fn new(datum: InductionDatum, depth: i64) -> Result<Self> {
        datum.validate()?;
        let comp = &datum.complement_order;
        let costs: Vec<i64> = comp.iter().map(|r| -root_height(&datum.xi, *r)).collect();
        for (r, c) in comp.iter().zip(&costs) {
            if !r.is_odd() && depth / c > MAX_EXPONENT as i64 {
                return Err(Error::ExponentOverflow { root: r.to_string(), exponent: depth / c, depth });
            }
        }
        let mut by_weight: BTreeMap<Weight, Vec<PBWMonomial>> = BTreeMap::new();
        let mut stack = vec![(0usize, PBWMonomial::ONE, datum.hw.clone(), depth)];
        while let Some((k, m, w, budget)) = stack.pop() {
            if k == comp.len() {
                by_weight.entry(w).or_default().push(m);
                continue;
            }
            let max = if comp[k].is_odd() { 1 } else { budget / costs[k] };
            let mut cur = w;
            for e in 0..=max.min(budget / costs[k]) {
                if e > 0 {
                    cur = cur.add_root(comp[k], 1);
                }
                stack.push((k + 1, m.with(k, e as u32), cur.clone(), budget - e * costs[k]));
            }
        }
        let mut weights = Vec::new();
        let mut weight_index = HashMap::new();
        let mut spaces = Vec::new();
        let mut position = HashMap::new();
        for (w, mut monos) in by_weight {
            monos.sort();
            let id = weights.len();
            for (p, m) in monos.iter().enumerate() {
                position.insert(*m, (id, p));
            }
            weight_index.insert(w.clone(), id);
            weights.push(w);
            spaces.push(monos);
        }
        let comp_units: Vec<MatrixUnit> = comp.iter().map(Root::unit).collect();
        let comp_index = comp_units.iter().enumerate().map(|(k, u)| (*u, k)).collect();
        Ok(Self {
            datum,
            depth,
            weights,
            weight_index,
            spaces,
            position,
            comp_units,
            comp_index,
            memo: Mutex::new(HashMap::new()),
            matrices: Mutex::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.datum.n
    }

    pub fn dim(&self) -> usize {
        self.position.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn region(&self) -> Region {
        Region::new(self.datum.height_borel.clone(), self.datum.hw.clone(), self.depth)
    }

    pub fn depth_of(&self, mu: &Weight) -> i64 {
        self.datum.hw.sub(mu).dot(&self.datum.xi)
    }

    pub fn in_region(&self, mu: &Weight) -> bool {
        self.depth_of(mu) <= self.depth
    }

    /// Ordered basis of the weight space at `mu` (empty if none).
    pub fn basis_at(&self, mu: &Weight) -> &[PBWMonomial] {
        self.weight_index.get(mu).map_or(&[], |&k| &self.spaces[k])
    }

    pub fn dim_at(&self, mu: &Weight) -> usize {
        self.basis_at(mu).len()
    }

    pub fn weight_of(&self, m: PBWMonomial) -> Weight {
        let mut w = self.datum.hw.clone();
        for (k, r) in self.datum.complement_order.iter().enumerate() {
            let e = m.get(k);
            if e > 0 {
                w = w.add_root(*r, e as i64);
            }
        }
        w
    }

    pub fn parity_of(&self, m: PBWMonomial) -> Parity {
        let odd: u32 =
            self.datum.complement_order.iter().enumerate().filter(|(_, r)| r.is_odd()).map(|(k, _)| m.get(k)).sum();
        self.datum.parity_shift + Parity::from_int(odd as i64)
    }

    /// Parity of the weight space at `mu` (weight spaces are homogeneous).
    pub fn parity_at(&self, mu: &Weight) -> Option<Parity> {
        self.basis_at(mu).first().map(|m| self.parity_of(*m))
    }

    pub fn character(&self) -> Character {
        let mut ch = Character::new(self.region());
        for (w, s) in self.weights.iter().zip(&self.spaces) {
            for m in s {
                ch.add(w.clone(), self.parity_of(*m), 1);
            }
        }
        ch
    }

    fn check_unit(&self, g: MatrixUnit) -> Result<()> {
        if g.n != self.n() {
            return Err(Error::RankMismatch(g.n, self.n()));
        }
        if g.is_cartan() {
            return Ok(());
        }
        let r = Root::raw(g.n, g.i, g.j);
        if self.datum.inducing_roots.contains(&r) || self.comp_index.contains_key(&g) {
            Ok(())
        } else {
            Err(Error::InvalidDatum(format!("{g} is outside the algebra acting on this module")))
        }
    }

    /// `g . m` in the PBW basis, by straightening.
    fn act_mono(&self, g: MatrixUnit, m: PBWMonomial) -> Arc<Terms> {
        if g.is_cartan() {
            let c = self.weight_of(m).eval_cartan(g.i);
            return Arc::new(if c == 0 { Vec::new() } else { vec![(m, c)] });
        }
        if let Some(t) = self.memo.lock().expect("memo").get(&(g, m)) {
            return t.clone();
        }
        let out = Arc::new(self.straighten(g, m));
        self.memo.lock().expect("memo").insert((g, m), out.clone());
        out
    }

    fn straighten(&self, g: MatrixUnit, m: PBWMonomial) -> Terms {
        let q = self.comp_index.get(&g).copied();
        let Some(p) = m.first() else {
            return match q {
                Some(q) => vec![(m.with(q, 1), 1)],
                None => Vec::new(),
            };
        };
        let a = m.get(p);
        if let Some(q) = q {
            if q < p {
                return vec![(m.with(q, 1), 1)];
            }
            if q == p {
                if g.parity().is_odd() {
                    return Vec::new();
                }
                return vec![(m.with(p, a + 1), 1)];
            }
        }
        let f1 = self.comp_units[p];
        let rest = m.with(p, a - 1);
        let mut acc: HashMap<PBWMonomial, i64> = HashMap::new();
        for (h, c) in bracket_units(g, f1) {
            for (mm, x) in self.act_mono(h, rest).iter() {
                add_into(&mut acc, *mm, c * x);
            }
        }
        let sign = g.parity().koszul(f1.parity());
        for (mm, x) in self.act_mono(g, rest).iter() {
            for (m2, y) in self.act_mono(f1, *mm).iter() {
                add_into(&mut acc, *m2, sign * x.checked_mul(*y).expect("coefficient overflow"));
            }
        }
        finish(acc)
    }

    fn target_weight(&self, g: MatrixUnit, mu: &Weight) -> Weight {
        match crate::superalg::root_of(g) {
            Some(r) => mu.add_root(r, 1),
            None => mu.clone(),
        }
    }

    /// `g . v` for a homogeneous element of the acting algebra.
    pub fn act(&self, g: &AlgebraElement, v: &ModuleVector) -> Result<ModuleVector> {
        let mut out = ModuleVector::default();
        for (u, c) in g.terms() {
            self.check_unit(u)?;
            for (m, x) in &v.terms {
                for (m2, y) in self.act_mono(u, *m).iter() {
                    out.add_term(*m2, &(&(c * x) * &Rational::from_int(*y)));
                }
            }
        }
        for m in out.terms.keys() {
            let w = self.weight_of(*m);
            if !self.in_region(&w) {
                return Err(Error::Truncation { weight: w.to_string(), depth: self.depth_of(&w), max: self.depth });
            }
        }
        Ok(out)
    }

    /// `g . m` for a single unit and basis monomial.
    pub fn act_unit(&self, g: MatrixUnit, m: PBWMonomial) -> Result<ModuleVector> {
        self.act(&AlgebraElement::unit(g), &ModuleVector::basis(m))
    }

    /// Matrix of `g` from the weight space at `mu` to the one at `mu + wt(g)`.
    pub fn generator_matrix(&self, g: MatrixUnit, mu: &Weight) -> Result<Arc<SparseRationalMatrix>> {
        self.check_unit(g)?;
        let target = self.target_weight(g, mu);
        let src_dim = self.dim_at(mu);
        if src_dim > 0 && !self.in_region(&target) {
            return Err(Error::Truncation {
                weight: target.to_string(),
                depth: self.depth_of(&target),
                max: self.depth,
            });
        }
        let key = self.weight_index.get(mu).copied();
        if let Some(k) = key {
            if let Some(mat) = self.matrices.lock().expect("cache").get(&(g, k)) {
                return Ok(mat.clone());
            }
        }
        let tgt_dim = self.dim_at(&target);
        let mut mat = SparseRationalMatrix::zeros(tgt_dim, src_dim);
        for (col, m) in self.basis_at(mu).iter().enumerate() {
            for (m2, c) in self.act_mono(g, *m).iter() {
                let (_, row) = self.position[m2];
                mat.set(row, col, Rational::from_int(*c));
            }
        }
        let mat = Arc::new(mat);
        if let Some(k) = key {
            self.matrices.lock().expect("cache").insert((g, k), mat.clone());
        }
        Ok(mat)
    }

    /// Matrix of a linear combination of units at `mu`; all terms must have
    /// the same weight.
    pub fn element_matrix(&self, g: &AlgebraElement, mu: &Weight) -> Result<SparseRationalMatrix> {
        let mut out: Option<SparseRationalMatrix> = None;
        for (u, c) in g.terms() {
            let m = self.generator_matrix(u, mu)?.scale(c);
            out = Some(match out {
                None => m,
                Some(acc) => {
                    if (acc.rows(), acc.cols()) != (m.rows(), m.cols()) {
                        return Err(Error::Precondition("element is not weight-homogeneous".into()));
                    }
                    acc.add(&m)
                }
            });
        }
        Ok(out.unwrap_or_else(|| SparseRationalMatrix::zeros(self.dim_at(mu), self.dim_at(mu))))
    }

    /// Joint kernel at `mu` of the raising operators of all `b`-simple roots.
    pub fn singular_vectors(&self, b: &BorelLabel, mu: &Weight) -> Result<Vec<Vector>> {
        let units: Vec<MatrixUnit> = simple_roots(b).iter().map(Root::unit).collect();
        self.joint_kernel(&units, mu)
    }

    /// Joint kernel at `mu` of the given units.
    pub fn joint_kernel(&self, units: &[MatrixUnit], mu: &Weight) -> Result<Vec<Vector>> {
        let d = self.dim_at(mu);
        let mut stacked = SparseRationalMatrix::zeros(0, d);
        for &u in units {
            let m = self.generator_matrix(u, mu)?;
            stacked = vstack(&stacked, &m);
        }
        Ok(kernel_basis(&stacked))
    }

    pub fn to_json(&self, with_matrices: bool) -> Result<serde_json::Value> {
        #[derive(Serialize)]
        struct Space {
            weight: String,
            coords: Weight,
            even: usize,
            odd: usize,
        }
        let spaces: Vec<Space> = self
            .weights
            .iter()
            .zip(&self.spaces)
            .map(|(w, s)| {
                let odd = s.iter().filter(|m| self.parity_of(**m).is_odd()).count();
                Space { weight: w.to_string(), coords: w.clone(), even: s.len() - odd, odd }
            })
            .collect();
        let mut v = serde_json::json!({
            "datum": {
                "n": self.datum.n,
                "inducing": self.datum.inducing_roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "complement": self.datum.complement_order.iter().map(|r| r.unit().to_string()).collect::<Vec<_>>(),
                "hw": self.datum.hw.to_string(),
                "parity_shift": self.datum.parity_shift,
                "height_borel": self.datum.height_borel.to_string(),
            },
            "depth": self.depth,
            "weight_spaces": spaces,
        });
        if with_matrices {
            let mut mats = Vec::new();
            for r in &self.datum.complement_order {
                for u in [r.unit(), r.neg().unit()] {
                    if self.check_unit(u).is_err() {
                        continue;
                    }
                    for w in &self.weights {
                        let Ok(m) = self.generator_matrix(u, w) else { continue };
                        if m.is_zero() {
                            continue;
                        }
                        let triplets: Vec<(usize, usize, String)> =
                            m.triplets().map(|(r, c, x)| (r, c, x.to_string())).collect();
                        mats.push(serde_json::json!({
                            "generator": u.to_string(),
                            "source": w.to_string(),
                            "rows": m.rows(),
                            "cols": m.cols(),
                            "entries": triplets,
                        }));
                    }
                }
            }
            v["matrices"] = serde_json::Value::Array(mats);
        }
        Ok(v)
    }
}

pub(crate) fn vstack(a: &SparseRationalMatrix, b: &SparseRationalMatrix) -> SparseRationalMatrix {
    assert_eq!(a.cols(), b.cols(), "column mismatch");
    let mut out = SparseRationalMatrix::zeros(a.rows() + b.rows(), a.cols());
    for (r, c, x) in a.triplets() {
        out.set(r, c, x.clone());
    }
    for (r, c, x) in b.triplets() {
        out.set(a.rows() + r, c, x.clone());
    }
    out
}

/// Builds the truncated module.
pub fn induce(datum: &InductionDatum, depth: i64) -> Result<ModuleRealization> {
    ModuleRealization::new(datum.clone(), depth)
}

/// Induces from the parabolic with Levi datum `levi` and nilradical `u_plus`.
pub fn induce_module(
    levi: &InductionDatum,
    u_plus: &std::collections::BTreeSet<Root>,
    depth: i64,
) -> Result<ModuleRealization> {
    induce(&super::datum::parabolic_datum(levi, u_plus)?, depth)
}
