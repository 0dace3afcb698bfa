//! Named verification scenarios and their reports.

mod conjecture;
mod gl22;
mod mabg;
mod structure;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use crate::dsfunctor::Verdict;
use crate::dsfunctor::{DSResult, SplitMismatch};
use crate::weightlat::{RhoTuple, Weight};

pub use conjecture::{verify_conjecture, ConjectureParams};
pub use gl22::{golden_formula_cases, verify_gl22_examples, Gl11Module, Sequence, SEQUENCES};
pub use mabg::verify_mabg;
pub use structure::verify_structure;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "GLNN_THREADS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub key: String,
    pub verdict: Verdict,
    pub detail: serde_json::Value,
}

impl CaseResult {
    pub fn new(key: impl Into<String>, verdict: Verdict, detail: serde_json::Value) -> Self {
        Self { key: key.into(), verdict, detail }
    }

    pub fn check(key: impl Into<String>, ok: bool, detail: serde_json::Value) -> Self {
        Self::new(key, if ok { Verdict::Pass } else { Verdict::Fail }, detail)
    }

    pub fn error(key: impl Into<String>, e: &crate::Error) -> Self {
        Self::new(key, Verdict::Fail, serde_json::json!({ "error": e.to_string() }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub params: serde_json::Value,
    pub cases: Vec<CaseResult>,
    pub wall_time_ms: u64,
}

impl ScenarioReport {
    fn finish(scenario: &str, params: serde_json::Value, mut cases: Vec<CaseResult>, start: Instant) -> Self {
        cases.sort_by(|a, b| a.key.cmp(&b.key));
        Self { scenario: scenario.into(), params, cases, wall_time_ms: start.elapsed().as_millis() as u64 }
    }

    pub fn counts(&self) -> BTreeMap<Verdict, usize> {
        let mut out = BTreeMap::new();
        for c in &self.cases {
            *out.entry(c.verdict).or_default() += 1;
        }
        out
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.cases.iter().filter(|c| c.verdict == v).count()
    }

    /// No case is REFUTED or FAIL.
    pub fn passed(&self) -> bool {
        !self.cases.iter().any(|c| c.verdict.is_failure())
    }

    /// Process exit code: 0 unless a case is REFUTED or FAIL.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// Zeroes the timing so that reports are byte-identical across runs.
    pub fn deterministic(mut self) -> Self {
        self.wall_time_ms = 0;
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| c.verdict.is_failure())
    }

    pub fn summary(&self) -> String {
        let counts: Vec<String> = self.counts().iter().map(|(v, k)| format!("{v}: {k}")).collect();
        format!("{} [{}] {} ms", self.scenario, counts.join(", "), self.wall_time_ms)
    }
}

/// Builds the global thread pool from an explicit count or `GLNN_THREADS`.
/// Has no effect once the pool exists.
pub fn init_threads(explicit: Option<usize>) {
    let n = explicit.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.parse().ok()));
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Default truncation depth per rank.
pub fn default_depth(n: usize) -> i64 {
    match n {
        0 | 1 => 8,
        2 => 6,
        _ => 4,
    }
}

/// All tuples with entries in `lo..=hi`, in lexicographic order.
pub fn tuple_grid(n: usize, lo: i64, hi: i64) -> Vec<RhoTuple> {
    let mut out = vec![Vec::new()];
    for _ in 0..2 * n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|v| RhoTuple::new(v).expect("even length")).collect()
}

/// Seeded sample of tuples with entries in `lo..=hi`; every other sample has
/// `t_1 = t_{n+1}`, so that both cases of the `eps_1 - delta_1` dichotomy
/// occur.
pub fn sample_tuples(n: usize, count: usize, seed: u64, lo: i64, hi: i64) -> Vec<RhoTuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let mut v: Vec<i64> = (0..2 * n).map(|_| rng.random_range(lo..=hi)).collect();
            if k % 2 == 0 {
                v[n] = v[0];
            }
            RhoTuple::new(v).expect("even length")
        })
        .collect()
}

/// Maximally atypical diagonal tuples `(a_1..a_n | a_1..a_n)`.
pub fn mabg_grid(n: usize, lo: i64, hi: i64) -> Vec<RhoTuple> {
    tuple_grid(n, lo, hi).into_iter().filter(|t| t.first() == t.second()).collect()
}

fn flip(d: (u64, u64), tau: u8) -> (u64, u64) {
    if tau == 1 {
        (d.1, d.0)
    } else {
        d
    }
}

/// Comparison of a projected census with an expected parity-split
/// character, up to a global parity flip `tau`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct TwistMatch {
    pub compared: usize,
    /// The flips under which every compared weight agrees.
    pub taus: Vec<u8>,
    /// Expected weights whose fibre leaves the valid region.
    pub incomplete: Vec<Weight>,
    /// First disagreement without a flip: weight, expected, found.
    pub mismatch: Option<SplitMismatch>,
}

impl TwistMatch {
    pub fn ok(&self) -> bool {
        !self.taus.is_empty()
    }

    pub fn detail(&self) -> serde_json::Value {
        serde_json::json!({
            "compared": self.compared,
            "orientations": self.taus,
            "incomplete": self.incomplete.len(),
            "mismatch": self.mismatch.as_ref().map(|(w, e, f)| serde_json::json!({
                "weight": w.to_string(), "expected": [e.0, e.1], "found": [f.0, f.1],
            })),
        })
    }
}

/// Compares `r.projected_at` with `expected` on every weight of either
/// side whose fibre is complete and which `comparable` admits.
pub(crate) fn match_projected(
    r: &DSResult<'_>,
    expected: &BTreeMap<Weight, (u64, u64)>,
    comparable: impl Fn(&Weight) -> bool,
) -> TwistMatch {
    let found = r.projected_census();
    let keys: std::collections::BTreeSet<&Weight> = found.keys().chain(expected.keys()).collect();
    let mut out = TwistMatch::default();
    let mut pairs = Vec::new();
    for nu in keys {
        if !comparable(nu) {
            continue;
        }
        let exp = expected.get(nu).copied().unwrap_or_default();
        match r.projected_at(nu) {
            Some(f) => pairs.push((nu.clone(), exp, f)),
            None if exp != (0, 0) => out.incomplete.push(nu.clone()),
            None => {}
        }
    }
    out.compared = pairs.len();
    out.taus = (0..2u8).filter(|&t| pairs.iter().all(|(_, e, f)| flip(*e, t) == *f)).collect();
    out.mismatch = pairs.into_iter().find(|(_, e, f)| e != f);
    out
}

/// Seeded sample of maximally atypical tuples `(a|a)` with entries in
/// `lo..=hi`.
pub fn sample_mabg(n: usize, count: usize, seed: u64, lo: i64, hi: i64) -> Vec<RhoTuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a: Vec<i64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
            RhoTuple::from_blocks(&a, &a)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(tuple_grid(1, -2, 2).len(), 25);
        assert_eq!(tuple_grid(2, -2, 2).len(), 625);
        assert_eq!(mabg_grid(2, -1, 1).len(), 9);
        let s = sample_tuples(3, 10, 7, -2, 2);
        assert_eq!(s, sample_tuples(3, 10, 7, -2, 2));
        assert!(s.iter().step_by(2).all(|t| t.at(1) == t.at(4)));
        assert!(sample_mabg(3, 5, 1, -2, 2).iter().all(crate::weightlat::in_lambda_mabg));
    }

    #[test]
    fn report_codes() {
        let ok = CaseResult::check("a", true, serde_json::Value::Null);
        let unsure = CaseResult::new("b", Verdict::Inconclusive, serde_json::Value::Null);
        let r = ScenarioReport::finish("s", serde_json::Value::Null, vec![unsure.clone(), ok.clone()], Instant::now());
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.cases[0].key, "a");
        let bad = CaseResult::new("c", Verdict::Refuted, serde_json::Value::Null);
        let r = ScenarioReport::finish("s", serde_json::Value::Null, vec![ok, bad], Instant::now());
        assert_eq!(r.exit_code(), 1);
        let json = serde_json::to_value(r.deterministic()).unwrap();
        assert_eq!(json["cases"][1]["verdict"], "REFUTED");
        assert_eq!(json["wall_time_ms"], 0);
    }
}
