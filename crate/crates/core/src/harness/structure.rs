use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::borelcomb::{borel_graph_edges, enumerate_borels, hypercube_labels, positive_roots, rho, BorelLabel};
use crate::dsfunctor::contraction_check;
use crate::envmod::{
    bg_datum, induce, levi_verma_datum, parabolic_datum, principal_blocks, principal_nilradical, verma_datum,
};
use crate::error::Result;
use crate::exactq::Rational;
use crate::superalg::{bracket, AlgebraElement, MatrixUnit};
use crate::weightlat::{bg_character, from_tuple, in_lambda_bg, Character, RhoTuple, Weight};

use super::{tuple_grid, CaseResult, ScenarioReport};

const SEED: u64 = 0x676c6e6e;

fn super_axioms(a: MatrixUnit, b: MatrixUnit, c: MatrixUnit) -> Result<bool> {
    let (x, y, z) = (AlgebraElement::unit(a), AlgebraElement::unit(b), AlgebraElement::unit(c));
    let sign = |p: MatrixUnit, q: MatrixUnit| Rational::from_int(p.parity().koszul(q.parity()));
    let xy = bracket(&x, &y)?;
    let yx = bracket(&y, &x)?;
    if !xy.add(&yx.scale(&sign(a, b)))?.is_zero() {
        return Ok(false);
    }
    let lhs = bracket(&x, &bracket(&y, &z)?)?;
    let rhs = bracket(&xy, &z)?.add(&bracket(&y, &bracket(&x, &z)?)?.scale(&sign(a, b)))?;
    Ok(lhs == rhs)
}

fn algebra_case(n: usize, samples: Option<usize>) -> CaseResult {
    let units: Vec<MatrixUnit> = MatrixUnit::all(n).collect();
    let triples: Vec<(MatrixUnit, MatrixUnit, MatrixUnit)> = match samples {
        None => {
            let u = &units;
            u.iter().flat_map(|&a| u.iter().flat_map(move |&b| u.iter().map(move |&c| (a, b, c)))).collect()
        }
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + n as u64);
            let mut pick = || units[rng.random_range(0..units.len())];
            (0..k).map(|_| (pick(), pick(), pick())).collect()
        }
    };
    let bad = triples.iter().find(|&&(a, b, c)| !super_axioms(a, b, c).unwrap_or(false));
    CaseResult::check(
        format!("algebra/n={n}"),
        bad.is_none(),
        json!({
            "triples": triples.len(),
            "exhaustive": samples.is_none(),
            "failure": bad.map(|(a, b, c)| format!("{a} {b} {c}")),
        }),
    )
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

/// One box added: containment of Young diagrams with sizes one apart.
fn covers(a: &BorelLabel, b: &BorelLabel) -> bool {
    b.size() == a.size() + 1 && (1..=a.n).all(|k| a.beta(k) <= b.beta(k))
}

fn graph_case() -> CaseResult {
    let labels = enumerate_borels(3);
    let edges = borel_graph_edges(&labels);
    let named: Vec<(String, String)> =
        edges.iter().map(|&(u, v)| (labels[u].to_string(), labels[v].to_string())).collect();
    let has = |a: &str, b: &str| named.iter().any(|(x, y)| (x == a && y == b) || (x == b && y == a));
    let mut ok = labels.len() == 20 && has("()", "(1)");
    for nb in ["(1^2)", "(2)", "(2^2)", "(31)", "(21^2)"] {
        ok &= has("(21)", nb);
    }
    let oracle = labels
        .iter()
        .enumerate()
        .flat_map(|(u, a)| labels.iter().enumerate().map(move |(v, b)| (u, v, a, b)))
        .filter(|(_, _, a, b)| covers(a, b) || covers(b, a))
        .filter(|(u, v, _, _)| u < v)
        .count();
    ok &= oracle == edges.len();
    let cube: Vec<BorelLabel> = hypercube_labels(3).into_iter().map(|(_, l)| l).collect();
    let idx: Vec<usize> = cube.iter().map(|c| labels.binary_search(c).expect("enumerated")).collect();
    let inner = edges.iter().filter(|(u, v)| idx.contains(u) && idx.contains(v)).count();
    let cube_ok = hypercube_labels(3).iter().all(|(g, l)| {
        hypercube_labels(3).iter().all(|(h, m)| {
            let hamming = g.iter().zip(h).filter(|(x, y)| x != y).count();
            let adjacent = named.iter().any(|(x, y)| {
                (*x == l.to_string() && *y == m.to_string()) || (*y == l.to_string() && *x == m.to_string())
            });
            (hamming == 1) == adjacent
        })
    });
    ok &= inner == 12 && cube_ok;
    CaseResult::check(
        "borel/graph n=3",
        ok,
        json!({ "vertices": labels.len(), "edges": edges.len(), "oracle_edges": oracle, "cube_edges": inner }),
    )
}

/// `2 rho^b = sum of even positive roots - sum of odd positive roots + ber`.
fn rho_oracle(b: &BorelLabel) -> Option<Weight> {
    let n = b.n;
    let mut twice = Weight::ber(n);
    for r in positive_roots(b) {
        twice = twice.add_root(r, if r.is_odd() { -1 } else { 1 });
    }
    let c = twice.coords();
    c.iter().all(|x| x % 2 == 0).then(|| Weight::from_coords(n, &c.iter().map(|x| x / 2).collect::<Vec<_>>()))
}

fn rho_case(n: usize) -> CaseResult {
    let ber = Weight::ber(n);
    let mut bad = Vec::new();
    for b in enumerate_borels(n) {
        let r = rho(&b);
        if rho_oracle(&b).as_ref() != Some(&r) {
            bad.push(b.to_string());
        }
        let proportional = r == ber.scale(r.eps[0]);
        let corner = b == BorelLabel::b_o(n) || b == BorelLabel::b_i(n);
        if proportional != corner {
            bad.push(format!("{b} proportional to ber"));
        }
    }
    let corners = rho(&BorelLabel::b_o(n)).is_zero() && rho(&BorelLabel::b_i(n)) == ber;
    CaseResult::check(format!("rho/n={n}"), bad.is_empty() && corners, json!({ "failures": bad }))
}

/// Parity-split agreement on the weights inside both regions.
fn split_mismatch(a: &Character, b: &Character) -> Option<String> {
    a.support
        .keys()
        .chain(b.support.keys())
        .filter(|w| a.region.contains(w) && b.region.contains(w))
        .find(|w| a.get(w) != b.get(w))
        .map(|w| format!("{w}: {:?} vs {:?}", a.get(w), b.get(w)))
}

fn independence_case(n: usize, tuples: &[RhoTuple], depth: i64) -> Result<CaseResult> {
    let mut compared = 0;
    for t in tuples {
        let chars: Vec<(BorelLabel, Character)> = enumerate_borels(n)
            .into_iter()
            .map(|b| Ok((b.clone(), induce(&verma_datum(&b, t)?, depth)?.character())))
            .collect::<Result<_>>()?;
        for (b, ch) in &chars[1..] {
            if let Some(m) = split_mismatch(&chars[0].1, ch) {
                return Ok(CaseResult::check(
                    format!("character/independence n={n}"),
                    false,
                    json!({ "tuple": t.to_string(), "borel": b.to_string(), "mismatch": m }),
                ));
            }
            compared += 1;
        }
    }
    Ok(CaseResult::check(
        format!("character/independence n={n}"),
        true,
        json!({ "tuples": tuples.len(), "comparisons": compared, "depth": depth }),
    ))
}

fn bg_product_case(n: usize, tuples: &[RhoTuple], depth: i64) -> Result<CaseResult> {
    let mut bad = Vec::new();
    for t in tuples.iter().filter(|t| in_lambda_bg(t)) {
        let m = induce(&bg_datum(t)?, depth)?;
        if m.character().support != bg_character(t, depth).support {
            bad.push(t.to_string());
        }
    }
    Ok(CaseResult::check(
        format!("character/bg-product n={n}"),
        bad.is_empty(),
        json!({ "depth": depth, "failures": bad }),
    ))
}

/// Parabolic induction of the hypercube Levi Verma agrees with the full
/// hypercube Verma module.
fn bg_of_verma_case(n: usize, tuples: &[RhoTuple], depth: i64) -> Result<CaseResult> {
    let mut bad = Vec::new();
    let mut compared = 0;
    for (g, b) in hypercube_labels(n) {
        for t in tuples {
            let hw = from_tuple(t, &b);
            let levi = levi_verma_datum(&principal_blocks(n), &b, hw)?;
            let bg = induce(&parabolic_datum(&levi, &principal_nilradical(n))?, depth)?;
            let verma = induce(&verma_datum(&b, t)?, depth)?;
            compared += 1;
            if let Some(m) = split_mismatch(&bg.character(), &verma.character()) {
                let bits: String = g.iter().map(|x| if *x { '1' } else { '0' }).collect();
                bad.push(format!("gamma={bits} {t}: {m}"));
            }
        }
    }
    Ok(CaseResult::check(
        format!("character/bg-of-verma n={n}"),
        bad.is_empty(),
        json!({ "depth": depth, "comparisons": compared, "failures": bad }),
    ))
}

fn contraction_case(n: usize, degree: usize) -> CaseResult {
    let rep = contraction_check(n, degree);
    CaseResult::check(
        format!("contraction/n={n}"),
        rep.passed(),
        json!({ "max_degree": degree, "monomials": rep.monomials_checked, "failures": rep.failures.len() }),
    )
}

/// Structural invariants. Module checks run for ranks up to `n` (at most
/// 3); combinatorial checks cover ranks up to 4, and Borel counts up to 5.
pub fn verify_structure(n: usize) -> ScenarioReport {
    let start = Instant::now();
    let n = n.clamp(1, 3);
    let mut cases = Vec::new();
    for k in 1..=n {
        cases.push(algebra_case(k, (k >= 3).then_some(10_000)));
    }
    let counts: BTreeMap<usize, usize> = (1..=5).map(|k| (k, enumerate_borels(k).len())).collect();
    let counts_ok = counts.iter().all(|(&k, &c)| c as u64 == binomial(2 * k as u64, k as u64));
    cases.push(CaseResult::check("borel/counts", counts_ok, json!(counts)));
    cases.push(graph_case());
    for k in 1..=4 {
        cases.push(rho_case(k));
    }
    let mut module_cases = || -> Result<()> {
        let grid2: Vec<RhoTuple> = ["(0,0|0,0)", "(1,0|1,0)", "(2,-1|0,1)", "(1,2|1,0)", "(0,1|1,-1)"]
            .iter()
            .map(|s| s.parse().expect("literal"))
            .collect();
        cases.push(independence_case(1, &tuple_grid(1, -2, 2), 6)?);
        if n >= 2 {
            cases.push(independence_case(2, &grid2, 4)?);
            cases.push(bg_product_case(2, &tuple_grid(2, -1, 1), 5)?);
            cases.push(bg_of_verma_case(2, &grid2, 4)?);
            cases.push(contraction_case(2, 6));
        }
        if n >= 3 {
            let grid3: Vec<RhoTuple> = ["(0,1,2|0,1,2)", "(1,0,2|1,3,2)", "(0,0,1|0,1,1)"]
                .iter()
                .map(|s| s.parse().expect("literal"))
                .collect();
            cases.push(bg_product_case(3, &grid3, 3)?);
            cases.push(contraction_case(3, 6));
        }
        Ok(())
    };
    if let Err(e) = module_cases() {
        cases.push(CaseResult::error("modules", &e));
    }
    ScenarioReport::finish("structure", json!({ "n": n }), cases, start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_oracle_examples() {
        let b = BorelLabel::parse(2, "()").unwrap();
        assert_eq!(rho_oracle(&b).unwrap().to_string(), "-e2+d1");
        assert!(rho_oracle(&BorelLabel::b_o(3)).unwrap().is_zero());
    }

    #[test]
    fn cover_relation() {
        let l = |s| BorelLabel::parse(2, s).unwrap();
        assert!(covers(&l("(1)"), &l("(2)")));
        assert!(!covers(&l("(2)"), &l("(1^2)")));
        assert!(!covers(&l("()"), &l("(2)")));
    }

    #[test]
    fn rank_two_suite() {
        let r = verify_structure(2);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.cases.iter().any(|c| c.key == "algebra/n=2" && c.detail["triples"] == 4096));
    }
}
