use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::borelcomb::{positive_roots, root_height, simple_roots, BorelLabel};
use crate::envmod::{induce, verma_datum_weight, PBWMonomial};
use crate::error::Result;
use crate::exactq::{span_basis, span_rank, SparseRationalMatrix, Vector};
use crate::superalg::{MatrixUnit, Parity, Root};
use crate::weightlat::{expand_product, from_tuple, par, RhoTuple, Weight};

use super::homology::{complementary_indices, lift, DSResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "CERTIFIED-TO-DEPTH")]
    Certified,
    #[serde(rename = "REFUTED")]
    Refuted,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Refuted | Verdict::Fail)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "CERTIFIED-TO-DEPTH",
            Verdict::Refuted => "REFUTED",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Weight at which a claim fails, with the expected and observed
/// `(even, odd)` dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: String,
    pub weight: String,
    pub expected: (u64, u64),
    pub found: (u64, u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub verdict: Verdict,
    pub target: String,
    pub depth: i64,
    pub checks: Vec<String>,
    /// Parity of the top copy relative to the target's own parity.
    pub orientation: Option<u8>,
    pub counterexample: Option<Counterexample>,
    pub note: Option<String>,
}

impl Certification {
    fn new(target: String, depth: i64) -> Self {
        Self {
            verdict: Verdict::Certified,
            target,
            depth,
            checks: Vec::new(),
            orientation: None,
            counterexample: None,
            note: None,
        }
    }

    fn inconclusive(mut self, why: impl Into<String>) -> Self {
        self.verdict = Verdict::Inconclusive;
        self.note = Some(why.into());
        self
    }

    fn refute(mut self, check: &str, weight: &Weight, expected: (u64, u64), found: (u64, u64)) -> Self {
        self.verdict = Verdict::Refuted;
        self.counterexample = Some(Counterexample { check: check.into(), weight: weight.to_string(), expected, found });
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Also build the target Verma module and check that the map generated
    /// by the singular vectors intertwines the actions.
    pub intertwine: bool,
}

/// Embeds a unit of `gl(n-1|n-1)` on the complementary indices.
fn embed_unit(keep: &[usize], u: MatrixUnit) -> MatrixUnit {
    MatrixUnit::raw(keep.len() / 2 + 1, keep[u.i - 1], keep[u.j - 1])
}

fn embed_root(keep: &[usize], r: Root) -> Root {
    Root::raw(keep.len() / 2 + 1, keep[r.a - 1], keep[r.b - 1])
}

struct Copy {
    top: Weight,
    parity: Parity,
    expected: BTreeMap<Weight, (u64, u64)>,
}

fn add_split(map: &mut BTreeMap<Weight, (u64, u64)>, w: &Weight, p: Parity) {
    let e = map.entry(w.clone()).or_default();
    if p.is_odd() {
        e.1 += 1;
    } else {
        e.0 += 1;
    }
}

/// Certifies `DS_alpha M ≅ M^{target_b}(t) ⊕ Π M^{target_b}(t)` to the
/// truncation depth, with the two copies on top of the source highest
/// weight and of that weight minus `alpha`.
pub fn certify_verma_iso(r: &DSResult<'_>, target_b: &BorelLabel, target_t: &RhoTuple) -> Certification {
    certify_verma_iso_with(r, target_b, target_t, CertifyOptions::default())
}

pub fn certify_verma_iso_with(
    r: &DSResult<'_>,
    target_b: &BorelLabel,
    target_t: &RhoTuple,
    opts: CertifyOptions,
) -> Certification {
    let hw = from_tuple(target_t, target_b);
    let keep = complementary_indices(r.alpha);
    let top = lift(&keep, &hw, &r.source.datum.hw);
    certify_copies(r, target_b, &hw, &[top.clone(), top.add_root(r.alpha, -1)], opts)
}

/// Certifies that `DS_alpha M` is the direct sum of copies of the Verma
/// module `M^{target_b}(target_hw)` with highest weight vectors at `tops`.
pub fn certify_copies(
    r: &DSResult<'_>,
    target_b: &BorelLabel,
    target_hw: &Weight,
    tops: &[Weight],
    opts: CertifyOptions,
) -> Certification {
    let label = if tops.len() == 1 { String::new() } else { format!("{} x ", tops.len()) };
    let mut cert = Certification::new(format!("{label}M^{target_b}({target_hw})"), r.depth());
    let keep = complementary_indices(r.alpha);
    if target_b.n + 1 != r.source.n() || target_hw.n() != target_b.n {
        return cert.inconclusive("target rank does not match");
    }
    if r.valid_weights().next().is_none() {
        return cert.inconclusive("valid region is empty");
    }
    if let Some(t) = tops.iter().find(|t| !r.is_valid(t)) {
        return cert.inconclusive(format!("copy top {t} lies outside the valid region"));
    }
    let xi = &r.source.datum.xi;
    let lowering: Vec<Root> = positive_roots(target_b).iter().map(|p| embed_root(&keep, p.neg())).collect();
    if lowering.iter().any(|l| root_height(xi, *l) >= 0) {
        return cert.inconclusive("target Borel is not compatible with the source height");
    }

    // (a) character
    let base_parity = r.source_parity(&tops[0]);
    let copies: Vec<Copy> = tops
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let parity = base_parity + Parity::from_int(k as i64);
            let mut expected = BTreeMap::new();
            let budget = r.depth() - r.cost - r.source.depth_of(t);
            expand_product(t, &lowering, xi, budget, &mut |w, odd| {
                add_split(&mut expected, w, parity + Parity::from_int(odd as i64));
            });
            Copy { top: t.clone(), parity, expected }
        })
        .collect();
    cert.orientation = Some((base_parity + par(target_hw)).bit() as u8);
    let mut total: BTreeMap<Weight, (u64, u64)> = BTreeMap::new();
    for c in &copies {
        for (w, (e, o)) in &c.expected {
            let t = total.entry(w.clone()).or_default();
            t.0 += e;
            t.1 += o;
        }
    }
    let weights: BTreeSet<Weight> = total.keys().cloned().chain(r.census().into_keys()).collect();
    for w in weights.iter().filter(|w| r.is_valid(w)) {
        let exp = total.get(w).copied().unwrap_or_default();
        let found = r.split_at(w);
        if exp != found {
            return cert.refute("character", w, exp, found);
        }
    }
    cert.checks.push(format!("character on {} weights", weights.len()));

    // (b) singular vectors
    let raising: Vec<MatrixUnit> = simple_roots(target_b).iter().map(|s| embed_root(&keep, *s).unit()).collect();
    let mut singular: Vec<Vector> = Vec::new();
    for c in &copies {
        let d = r.dim_at(&c.top);
        let mut stacked = SparseRationalMatrix::zeros(0, d);
        for &u in &raising {
            match r.induced_action(u, &c.top) {
                Ok(m) => stacked = crate::envmod::vstack(&stacked, &m),
                Err(e) => return cert.inconclusive(e.to_string()),
            }
        }
        let ker = crate::exactq::kernel_basis(&stacked);
        if ker.len() != 1 {
            let p = c.parity;
            let unit = if p.is_odd() { (0, 1) } else { (1, 0) };
            let k = ker.len() as u64;
            return cert.refute("singular vectors", &c.top, unit, if p.is_odd() { (0, k) } else { (k, 0) });
        }
        singular.push(ker.into_iter().next().expect("one vector"));
    }
    cert.checks.push("singular vectors".into());

    // (c) freeness
    let lowering_simple: Vec<MatrixUnit> =
        simple_roots(target_b).iter().map(|s| embed_root(&keep, s.neg()).unit()).collect();
    let mut spans: Vec<BTreeMap<Weight, Vec<Vector>>> = Vec::new();
    for (c, s) in copies.iter().zip(&singular) {
        let mut order: Vec<&Weight> = c.expected.keys().collect();
        order.sort_by_key(|w| r.source.depth_of(w));
        let mut span: BTreeMap<Weight, Vec<Vector>> = BTreeMap::new();
        span.insert(c.top.clone(), vec![s.clone()]);
        for w in order {
            if *w == c.top {
                continue;
            }
            let mut gens = Vec::new();
            for &f in &lowering_simple {
                let above = w.add_root(crate::superalg::root_of(f).expect("root").neg(), 1);
                let Some(src) = span.get(&above) else { continue };
                let m = match r.induced_action(f, &above) {
                    Ok(m) => m,
                    Err(e) => return cert.inconclusive(e.to_string()),
                };
                gens.extend(src.iter().map(|v| m.mul_vec(v)));
            }
            let basis = span_basis(r.dim_at(w), &gens);
            let exp = c.expected.get(w).copied().unwrap_or_default();
            if basis.len() as u64 != exp.0 + exp.1 {
                let found =
                    if c.parity == r.source_parity(w) { (basis.len() as u64, 0) } else { (0, basis.len() as u64) };
                return cert.refute("freeness", w, exp, found);
            }
            if !basis.is_empty() {
                span.insert(w.clone(), basis);
            }
        }
        spans.push(span);
    }
    for w in r.census().keys() {
        let all: Vec<Vector> = spans.iter().filter_map(|s| s.get(w)).flatten().cloned().collect();
        if span_rank(&all) != r.dim_at(w) {
            let d = r.split_at(w);
            return cert.refute("freeness", w, d, (span_rank(&all) as u64, 0));
        }
    }
    cert.checks.push("freeness".into());

    if opts.intertwine && target_b.n > 0 {
        match intertwine(r, target_b, target_hw, &keep, &copies, &singular) {
            Ok(None) => cert.checks.push("intertwining".into()),
            Ok(Some(w)) => return cert.refute("intertwining", &w, (0, 0), (0, 0)),
            Err(e) => return cert.inconclusive(e.to_string()),
        }
    }
    cert
}

/// Builds `phi: M^{target_b}(target_hw) -> DS M` from each singular vector
/// and checks that it is injective and commutes with the simple root
/// vectors. Returns a weight where this fails.
fn intertwine(
    r: &DSResult<'_>,
    target_b: &BorelLabel,
    target_hw: &Weight,
    keep: &[usize],
    copies: &[Copy],
    singular: &[Vector],
) -> Result<Option<Weight>> {
    let v = induce(&verma_datum_weight(target_b, target_hw.clone())?, r.depth())?;
    let comp: Vec<MatrixUnit> = v.datum.complement_order.iter().map(|c| embed_unit(keep, c.unit())).collect();
    let simple = simple_roots(target_b);
    let gens: Vec<MatrixUnit> = simple.iter().flat_map(|s| [s.unit(), s.neg().unit()]).collect();
    for (c, s) in copies.iter().zip(singular) {
        let project = |w: &Weight| crate::weightlat::pr_alpha(w, r.alpha).expect("odd");
        let mut phi: BTreeMap<Weight, SparseRationalMatrix> = BTreeMap::new();
        for w in c.expected.keys() {
            let nu = project(w);
            if !v.in_region(&nu) {
                continue;
            }
            let basis: &[PBWMonomial] = v.basis_at(&nu);
            let mut cols = Vec::with_capacity(basis.len());
            for m in basis {
                let mut vec = s.clone();
                let mut cur = c.top.clone();
                for k in (0..comp.len()).rev() {
                    for _ in 0..m.get(k) {
                        let a = r.induced_action(comp[k], &cur)?;
                        vec = a.mul_vec(&vec);
                        cur = cur.add_root(crate::superalg::root_of(comp[k]).expect("root"), 1);
                    }
                }
                cols.push(vec);
            }
            let mat = SparseRationalMatrix::from_columns(r.dim_at(w), &cols);
            if crate::exactq::rank(&mat) != basis.len() {
                return Ok(Some(w.clone()));
            }
            phi.insert(w.clone(), mat);
        }
        for (w, p) in &phi {
            let nu = project(w);
            for &g in &gens {
                let shift = crate::superalg::root_of(g).expect("root");
                let (w2, nu2) = (w.add_root(embed_root(keep, shift), 1), nu.add_root(shift, 1));
                let Some(p2) = phi.get(&w2) else {
                    if c.expected.contains_key(&w2) || !r.is_valid(&w2) || !v.in_region(&nu2) {
                        continue;
                    }
                    // Above the top of this copy: g must kill the image.
                    let h = r.induced_action(embed_unit(keep, g), w)?;
                    if !h.mul(p).is_zero() {
                        return Ok(Some(w.clone()));
                    }
                    continue;
                };
                let h = r.induced_action(embed_unit(keep, g), w)?;
                let vg = v.generator_matrix(g, &nu)?;
                if h.mul(p) != p2.mul(&vg) {
                    return Ok(Some(w.clone()));
                }
            }
        }
    }
    Ok(None)
}

/// Certifies that the homology vanishes on the valid region.
pub fn certify_zero(r: &DSResult<'_>) -> Certification {
    let cert = Certification::new("0".into(), r.depth());
    if r.valid_weights().next().is_none() {
        return cert.inconclusive("valid region is empty");
    }
    match r.census().into_iter().next() {
        Some((w, found)) => cert.refute("character", &w, (0, 0), found),
        None => {
            let mut cert = cert;
            cert.checks.push("zero census".into());
            cert
        }
    }
}
