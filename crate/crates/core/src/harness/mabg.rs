use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use crate::dsfunctor::{ds_homology, Verdict};
use crate::envmod::{bg_datum, induce};
use crate::error::{Error, Result};
use crate::superalg::Root;
use crate::weightlat::{bg_character, in_lambda_mabg, par, pr_i, RhoTuple};

use super::{match_projected, CaseResult, ScenarioReport};

fn case(t: &RhoTuple, depth: i64) -> Result<(Verdict, serde_json::Value)> {
    let n = t.n();
    let alpha = Root::odd(n, 1, 1);
    let m = induce(&bg_datum(t)?, depth)?;
    let r = ds_homology(&m, alpha)?;
    let hw = m.datum.hw.clone();
    let target = t.project(1, 1);
    let expected_ch = bg_character(&target, depth + 2 * n as i64);
    let region = expected_ch.region.clone();
    let tw = match_projected(&r, &expected_ch.support, |nu| region.contains(nu));
    let predicted = par(&pr_i(&hw)).bit() as u8;
    let mut detail = json!({
        "target": target.to_string(),
        "predicted_orientation": predicted,
        "projected": tw.detail(),
        "total": [r.total().0, r.total().1],
    });
    let mut ok = tw.ok() && tw.taus.contains(&predicted) && tw.compared > 0;
    if n == 2 {
        let census = r.census();
        let single = census.len() == 1 && census.get(&hw).is_some_and(|(e, o)| e + o == 1);
        detail["character_is_hw"] = json!(single);
        ok &= single;
    }
    let verdict = if ok {
        Verdict::Pass
    } else if tw.compared == 0 || (!tw.incomplete.is_empty() && tw.ok()) {
        Verdict::Inconclusive
    } else {
        Verdict::Fail
    };
    Ok((verdict, detail))
}

/// DS along `eps_1 - delta_1` of the Brundan-Goodwin module of every
/// maximally atypical tuple: the projected census is that of the rank
/// `n - 1` module, parity-twisted by `par(pr_I hw)`. At rank two the
/// homology is also checked to be one-dimensional at the highest weight.
pub fn verify_mabg(n: usize, tuples: &[RhoTuple], depth: i64) -> Result<ScenarioReport> {
    let start = Instant::now();
    if n < 2 {
        return Err(Error::Precondition("maBG reduction needs n >= 2".into()));
    }
    if let Some(t) = tuples.iter().find(|t| t.n() != n || !in_lambda_mabg(t)) {
        return Err(Error::Precondition(format!("{t} is not a maximally atypical rank-{n} tuple")));
    }
    let cases: Vec<CaseResult> = tuples
        .par_iter()
        .map(|t| {
            let key = t.to_string();
            match case(t, depth) {
                Ok((v, d)) => CaseResult::new(key, v, d),
                Err(e) => CaseResult::error(key, &e),
            }
        })
        .collect();
    let params = json!({ "n": n, "tuples": tuples.len(), "depth": depth });
    Ok(ScenarioReport::finish("mabg", params, cases, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::mabg_grid;

    #[test]
    fn rank_two_grid() {
        let r = verify_mabg(2, &mabg_grid(2, -1, 1), 6).unwrap();
        assert_eq!(r.cases.len(), 9);
        assert_eq!(r.count(Verdict::Pass), 9, "{:?}", r.failures().next());
    }

    #[test]
    fn rejects_other_tuples() {
        let t: RhoTuple = "(0,1|0,2)".parse().unwrap();
        assert!(matches!(verify_mabg(2, &[t], 4), Err(Error::Precondition(_))));
    }
}
