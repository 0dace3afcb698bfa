use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::envmod::ModuleRealization;
use crate::error::{Error, Result};
use crate::weightlat::Weight;

use super::homology::DSResult;

/// Checks `ch M = ch L + ch N` with parities on the weights inside all three
/// truncation regions.
pub fn ses_dimension_check(l: &ModuleRealization, m: &ModuleRealization, n: &ModuleRealization) -> Result<usize> {
    let (cl, cm, cn) = (l.character(), m.character(), n.character());
    let weights: BTreeSet<&Weight> = cl.support.keys().chain(cm.support.keys()).chain(cn.support.keys()).collect();
    let mut checked = 0;
    for w in weights {
        if !(l.in_region(w) && m.in_region(w) && n.in_region(w)) {
            continue;
        }
        let (a, b, c) = (cl.get(w), cm.get(w), cn.get(w));
        if b != (a.0 + c.0, a.1 + c.1) {
            return Err(Error::Precondition(format!("not a short exact sequence at {w}: {b:?} != {a:?} + {c:?}")));
        }
        checked += 1;
    }
    Ok(checked)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HinichEntry {
    pub weight: String,
    pub ssch_l: i64,
    pub ssch_m: i64,
    pub ssch_n: i64,
    /// `dim E` at this weight.
    pub e_slack: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HinichReport {
    pub ses_weights: usize,
    pub constraint_holds: bool,
    pub entries: Vec<HinichEntry>,
    /// Total dimension of `E` on the compared weights.
    pub e_total: u64,
    #[serde(skip)]
    pub e_census: BTreeMap<Weight, u64>,
}

fn ssch(x: (u64, u64)) -> i64 {
    x.0 as i64 - x.1 as i64
}

/// Checks `ssch DS M = ssch DS L + ssch DS N` on the fibres complete for all
/// three results and reports `dim E = (dim DS L + dim DS N - dim DS M) / 2`
/// per weight of the smaller algebra.
pub fn hinich_supercharacter_check(l: &DSResult<'_>, m: &DSResult<'_>, n: &DSResult<'_>) -> Result<HinichReport> {
    let ses_weights = ses_dimension_check(l.source, m.source, n.source)?;
    let (pl, pm, pn) = (l.projected_census(), m.projected_census(), n.projected_census());
    let keys: BTreeSet<&Weight> = pl.keys().chain(pm.keys()).chain(pn.keys()).collect();
    let mut report = HinichReport {
        ses_weights,
        constraint_holds: true,
        entries: Vec::new(),
        e_total: 0,
        e_census: BTreeMap::new(),
    };
    for nu in keys {
        let (Some(a), Some(b), Some(c)) = (l.projected_at(nu), m.projected_at(nu), n.projected_at(nu)) else {
            continue;
        };
        let twice_e = (a.0 + a.1 + c.0 + c.1) as i64 - (b.0 + b.1) as i64;
        if ssch(b) != ssch(a) + ssch(c) || twice_e < 0 || twice_e % 2 != 0 {
            report.constraint_holds = false;
        }
        let e = (twice_e.max(0) / 2) as u64;
        report.e_total += e;
        if e > 0 {
            report.e_census.insert(nu.clone(), e);
        }
        report.entries.push(HinichEntry {
            weight: nu.to_string(),
            ssch_l: ssch(a),
            ssch_m: ssch(b),
            ssch_n: ssch(c),
            e_slack: e,
        });
    }
    Ok(report)
}
