//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use glnn_core::borelcomb::{enumerate_borels, hypercube_labels, odd_simple_roots, rho, star};
use glnn_core::dsfunctor::{contraction_check, ds_homology, DSResult, Verdict};
use glnn_core::envmod::{bg_datum, induce, verma_datum};
use glnn_core::harness::{
    golden_formula_cases, mabg_grid, sample_mabg, sample_tuples, tuple_grid, verify_conjecture, verify_gl22_examples,
    verify_mabg, verify_structure, ConjectureParams, ScenarioReport,
};
use glnn_core::superalg::{bracket, root_of};
use glnn_core::weightlat::par;
use glnn_core::{AlgebraElement, BorelLabel, MatrixUnit, Rational, RhoTuple, Root, SparseRationalMatrix, Weight};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(r: &ScenarioReport, prefix: &str, expect: Verdict) -> Result<usize, String> {
    let cases: Vec<_> = r.cases.iter().filter(|c| c.key.starts_with(prefix)).collect();
    ensure(!cases.is_empty(), || format!("no cases under {prefix}"))?;
    if let Some(c) = cases.iter().find(|c| c.verdict != expect) {
        return Err(format!("{}: {} {}", c.key, c.verdict, c.detail));
    }
    Ok(cases.len())
}

fn tuple(s: &str) -> RhoTuple {
    s.parse().expect("tuple literal")
}

fn label(n: usize, s: &str) -> BorelLabel {
    BorelLabel::parse(n, s).expect("label literal")
}

/// Dense `2n x 2n` supermatrix of a unit.
fn dense(u: MatrixUnit) -> Vec<Vec<i64>> {
    let d = 2 * u.n;
    let mut m = vec![vec![0; d]; d];
    m[u.i - 1][u.j - 1] = 1;
    m
}

fn dense_of(x: &AlgebraElement, n: usize) -> Vec<Vec<i64>> {
    let d = 2 * n;
    let mut m = vec![vec![0; d]; d];
    for (u, c) in x.terms() {
        m[u.i - 1][u.j - 1] += c.to_i64().expect("integral structure constants");
    }
    m
}

fn dense_super_commutator(a: MatrixUnit, b: MatrixUnit) -> Vec<Vec<i64>> {
    let (x, y) = (dense(a), dense(b));
    let d = x.len();
    let sign = a.parity().koszul(b.parity());
    let mul = |p: &Vec<Vec<i64>>, q: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| p[i][k] * q[k][j]).sum()).collect()).collect()
    };
    let (xy, yx) = (mul(&x, &y), mul(&y, &x));
    (0..d).map(|i| (0..d).map(|j| xy[i][j] - sign * yx[i][j]).collect()).collect()
}

fn criterion_1() -> Check {
    for n in [2, 3] {
        for a in MatrixUnit::all(n) {
            for b in MatrixUnit::all(n) {
                let got = bracket(&AlgebraElement::unit(a), &AlgebraElement::unit(b)).map_err(|e| e.to_string())?;
                ensure(dense_of(&got, n) == dense_super_commutator(a, b), || {
                    format!("[{a}, {b}] disagrees with matrices")
                })?;
            }
        }
    }
    let r = verify_structure(3);
    let mut triples = Vec::new();
    for (n, exhaustive) in [(2, true), (3, false)] {
        let c = r.cases.iter().find(|c| c.key == format!("algebra/n={n}")).ok_or("missing algebra case")?;
        ensure(c.verdict == Verdict::Pass, || format!("{} {}", c.key, c.detail))?;
        let k = c.detail["triples"].as_u64().unwrap_or(0);
        ensure(c.detail["exhaustive"] == json!(exhaustive), || format!("n={n} coverage"))?;
        ensure(if exhaustive { k == 4096 } else { k >= 10_000 }, || format!("n={n} checked {k} triples"))?;
        triples.push(k);
    }
    Ok(format!("brackets match supermatrices; axioms on {} + {} triples", triples[0], triples[1]))
}

fn criterion_2() -> Check {
    let counts: Vec<usize> = (1..=5).map(|n| enumerate_borels(n).len()).collect();
    ensure(counts == [2, 6, 20, 70, 252], || format!("counts {counts:?}"))?;
    let r = verify_structure(3);
    all_pass(&r, "borel/", Verdict::Pass)?;
    let cube = hypercube_labels(3);
    ensure(cube.len() == 8, || "cube size".into())?;
    // b_gamma has parts (n-1+g_n, n-2+g_{n-1}, ..., g_1).
    for (gamma, b) in &cube {
        let parts: Vec<usize> = (0..3).map(|k| 2 - k + usize::from(gamma[2 - k])).filter(|&p| p > 0).collect();
        let want = BorelLabel::from_parts(3, parts).map_err(|e| e.to_string())?;
        ensure(*b == want, || format!("gamma {gamma:?} gives {b}, expected {want}"))?;
    }
    Ok(format!("counts {counts:?}; graph and cube checks pass"))
}

/// `2 rho` from the eps-delta word: even positive roots minus odd positive
/// roots plus ber, with the positive roots read off left to right.
fn rho_from_word(b: &BorelLabel) -> Weight {
    let n = b.n;
    let word = b.sequence().word();
    let mut seen = (0, 0);
    let letters: Vec<(bool, usize)> = word
        .chars()
        .map(|ch| {
            if ch == 'e' {
                seen.0 += 1;
                (true, seen.0)
            } else {
                seen.1 += 1;
                (false, seen.1)
            }
        })
        .collect();
    let mut twice = Weight::ber(n);
    let unit = |(is_eps, k): (bool, usize)| {
        let mut w = Weight::zero(n);
        if is_eps {
            w.eps[k - 1] = 1;
        } else {
            w.del[k - 1] = 1;
        }
        w
    };
    for p in 0..letters.len() {
        for q in p + 1..letters.len() {
            let root = unit(letters[p]).sub(&unit(letters[q]));
            twice = if letters[p].0 == letters[q].0 { twice.add(&root) } else { twice.sub(&root) };
        }
    }
    assert!(twice.coords().iter().all(|c| c % 2 == 0), "2 rho is even");
    Weight::new(twice.eps.iter().map(|c| c / 2).collect(), twice.del.iter().map(|c| c / 2).collect())
}

fn criterion_3() -> Check {
    let mut checked = 0;
    for n in 1..=4 {
        let ber = Weight::ber(n);
        for b in enumerate_borels(n) {
            let r = rho(&b);
            ensure(r == rho_from_word(&b), || format!("rho{b} = {r}, oracle {}", rho_from_word(&b)))?;
            let proportional = (-2..=2).any(|k| r == ber.scale(k));
            let distinguished = b == BorelLabel::b_o(n) || b == BorelLabel::b_i(n);
            ensure(proportional == distinguished, || format!("{b}: proportional {proportional}"))?;
            checked += 1;
        }
        ensure(rho(&BorelLabel::b_o(n)).is_zero(), || format!("rho b_o at n={n}"))?;
        ensure(rho(&BorelLabel::b_i(n)) == ber, || format!("rho b_i at n={n}"))?;
    }
    ensure(rho(&label(2, "()")).to_string() == "-e2+d1", || "rho of () at rank 2".into())?;
    Ok(format!("{checked} labels"))
}

fn criterion_4() -> Check {
    let alpha = Root::odd(1, 1, 1);
    let depth = 8;
    let mut rows = 0;
    for a in -3..=3 {
        let t = tuple(&format!("({a}|{a})"));
        let l = induce(&bg_datum(&t).map_err(|e| e.to_string())?, depth).map_err(|e| e.to_string())?;
        ensure(l.dim() == 1, || format!("L({a}|{a}) has dim {}", l.dim()))?;
        let r = ds_homology(&l, alpha).map_err(|e| e.to_string())?;
        let want = if par(&l.datum.hw).is_odd() { (0, 1) } else { (1, 0) };
        ensure(r.total() == want, || format!("DS L({a}|{a}) = {:?}", r.total()))?;
        for (lab, want) in [("()", (1, 1)), ("(1)", (0, 0))] {
            let m = induce(&verma_datum(&label(1, lab), &t).map_err(|e| e.to_string())?, depth)
                .map_err(|e| e.to_string())?;
            let r = ds_homology(&m, alpha).map_err(|e| e.to_string())?;
            ensure(r.total() == want, || format!("DS M^{lab}({a}|{a}) = {:?}", r.total()))?;
        }
        for c in -3..=3 {
            if c == a {
                continue;
            }
            let t = tuple(&format!("({a}|{c})"));
            for lab in ["()", "(1)"] {
                let m = induce(&verma_datum(&label(1, lab), &t).map_err(|e| e.to_string())?, depth)
                    .map_err(|e| e.to_string())?;
                let r = ds_homology(&m, alpha).map_err(|e| e.to_string())?;
                ensure(r.total() == (0, 0), || format!("DS M^{lab}({a}|{c}) = {:?}", r.total()))?;
            }
        }
        rows += 1;
    }
    let p = ConjectureParams::all_borels(1, tuple_grid(1, -2, 2), depth);
    let r = verify_conjecture(&p);
    ensure(r.count(Verdict::Certified) == r.cases.len(), || format!("{:?}", r.failures().next()))?;
    Ok(format!("{rows} atypical weights, {} typical pairs per Borel", rows * 6))
}

fn criterion_5() -> Check {
    let mut generators = 0;
    for n in [2, 3] {
        let rep = contraction_check(n, 6);
        ensure(rep.passed(), || format!("n={n}: {:?}", rep.failures.first()))?;
        generators += rep.generators.len();
    }
    Ok(format!("degree 6, {generators} generators over n=2,3"))
}

fn criterion_6() -> Check {
    let p = ConjectureParams::all_borels(2, tuple_grid(2, -2, 2), 6);
    let r = verify_conjecture(&p);
    let expected: usize = enumerate_borels(2).iter().map(|b| odd_simple_roots(b).len()).sum::<usize>() * 625;
    ensure(r.cases.len() == expected, || format!("{} cases, expected {expected}", r.cases.len()))?;
    ensure(r.count(Verdict::Refuted) == 0, || format!("{:?}", r.failures().next()))?;
    let mut atypical = 0;
    for c in &r.cases {
        ensure(c.verdict == Verdict::Certified, || format!("{} {}", c.key, c.verdict))?;
        let h = &c.detail["homology"];
        if h["form"] == 0 {
            atypical += 1;
        } else {
            ensure(h["total"] == json!([0, 0]), || format!("{} nonzero homology {}", c.key, h["total"]))?;
        }
    }
    Ok(format!("{} cases certified, {atypical} atypical", r.cases.len()))
}

fn criterion_7() -> Check {
    let p = ConjectureParams::star_family(3, sample_tuples(3, 16, 7, -2, 2), 4);
    ensure(p.borels.len() == 6, || "six star Borels".into())?;
    let first = label(1, "()");
    for (b, b2) in p.borels.iter().zip(enumerate_borels(2)) {
        ensure(*b == star(&first, &b2).map_err(|e| e.to_string())?, || format!("{b}"))?;
    }
    let r = verify_conjecture(&p);
    let n = all_pass(&r, "", Verdict::Certified)?;
    Ok(format!("{n} cases certified"))
}

fn criterion_8() -> Check {
    let r2 = verify_mabg(2, &mabg_grid(2, -2, 2), 6).map_err(|e| e.to_string())?;
    let k2 = all_pass(&r2, "", Verdict::Pass)?;
    for c in &r2.cases {
        ensure(c.detail["character_is_hw"] == json!(true), || c.key.clone())?;
    }
    let r3 = verify_mabg(3, &sample_mabg(3, 24, 5, -2, 2), 7).map_err(|e| e.to_string())?;
    let k3 = all_pass(&r3, "", Verdict::Pass)?;
    let bad = tuple("(0,1|0,2)");
    ensure(verify_mabg(2, &[bad], 4).is_err(), || "non-maBG input accepted".into())?;
    Ok(format!("{k2} rank-2 and {k3} rank-3 tuples"))
}

fn criterion_9() -> Check {
    let r = verify_gl22_examples(6);
    let k = all_pass(&r, "sequence/", Verdict::Pass)?;
    ensure(k == 8 * 9, || format!("{k} sequence cases"))?;
    all_pass(&r, "ses/", Verdict::Pass)?;
    let direct = all_pass(&r, "direct/", Verdict::Certified)?;
    Ok(format!("{k} sequence cases, {direct} direct computations"))
}

fn criterion_10() -> Check {
    let cases = golden_formula_cases();
    let bad = cases.iter().find(|c| c.verdict != Verdict::Pass);
    ensure(bad.is_none(), || format!("{:?}", bad.map(|c| (&c.key, &c.detail))))?;
    ensure(cases.len() == 6, || format!("{} formula cases", cases.len()))?;
    Ok(format!("{} formula families", cases.len()))
}

fn criterion_11() -> Check {
    let r = verify_structure(3);
    let k = all_pass(&r, "character/", Verdict::Pass)?;
    for key in ["character/independence n=2", "character/bg-product n=3", "character/bg-of-verma n=2"] {
        ensure(r.cases.iter().any(|c| c.key == key), || format!("missing {key}"))?;
    }
    Ok(format!("{k} character suites"))
}

fn shift(u: MatrixUnit) -> Weight {
    root_of(u).map_or(Weight::zero(u.n), Weight::from_root)
}

/// Checks `[rho(a), rho(b)] = rho([a, b])` for the induced action on every
/// valid weight where all the matrices are defined.
fn induced_relations(r: &DSResult<'_>, pairs: &[(MatrixUnit, MatrixUnit)]) -> Result<(usize, usize), String> {
    let (mut checked, mut nonzero) = (0, 0);
    for &(a, b) in pairs {
        let ab = bracket(&AlgebraElement::unit(a), &AlgebraElement::unit(b)).map_err(|e| e.to_string())?;
        let s = Rational::from_int(a.parity().koszul(b.parity()));
        for mu in r.valid_weights() {
            let (wa, wb) = (mu.add(&shift(a)), mu.add(&shift(b)));
            let mats =
                (r.induced_action(b, mu), r.induced_action(a, &wb), r.induced_action(a, mu), r.induced_action(b, &wa));
            let (Ok(b1), Ok(a2), Ok(a1), Ok(b2)) = mats else { continue };
            let lhs = a2.mul(&b1).sub(&b2.mul(&a1).scale(&s));
            let mut rhs = SparseRationalMatrix::zeros(lhs.rows(), lhs.cols());
            for (u, c) in ab.terms() {
                rhs = rhs.add(&r.induced_action(u, mu).map_err(|e| e.to_string())?.scale(c));
            }
            ensure(lhs == rhs, || format!("[{a}, {b}] at {mu}"))?;
            checked += 1;
            nonzero += usize::from(!lhs.is_zero());
        }
    }
    Ok((checked, nonzero))
}

fn criterion_12() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut checked, mut nonzero) = (0, 0);
    let modules: [(usize, BorelLabel, &str); 4] = [
        (2, label(2, "(1)"), "(0,1|0,1)"),
        (2, label(2, "()"), "(1,0|1,2)"),
        (3, star(&label(1, "()"), &label(2, "(1)")).map_err(|e| e.to_string())?, "(0,1,2|0,1,2)"),
        (3, star(&label(1, "()"), &label(2, "(2)")).map_err(|e| e.to_string())?, "(1,-1,0|1,0,2)"),
    ];
    for (n, b, t) in modules {
        let alpha = Root::odd(n, 1, 1);
        let m = induce(&verma_datum(&b, &tuple(t)).map_err(|e| e.to_string())?, 4).map_err(|e| e.to_string())?;
        let r = ds_homology(&m, alpha).map_err(|e| e.to_string())?;
        ensure(r.total() != (0, 0), || format!("{b} {t}: zero homology"))?;
        let keep: Vec<usize> = (2..=n).chain(n + 2..=2 * n).collect();
        let units: Vec<MatrixUnit> =
            keep.iter().flat_map(|&i| keep.iter().map(move |&j| MatrixUnit::new(n, i, j).expect("in range"))).collect();
        let pairs: Vec<(MatrixUnit, MatrixUnit)> = if n == 2 {
            units.iter().flat_map(|&a| units.iter().map(move |&b| (a, b))).collect()
        } else {
            (0..80)
                .map(|_| (units[rng.random_range(0..units.len())], units[rng.random_range(0..units.len())]))
                .collect()
        };
        let (c, z) = induced_relations(&r, &pairs)?;
        checked += c;
        nonzero += z;
    }
    ensure(nonzero > 0, || "every checked relation was trivially zero".into())?;
    Ok(format!("{checked} relations, {nonzero} with nonzero matrices"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("superalgebra axioms", criterion_1, Duration::from_secs(5)),
        ("Borel combinatorics", criterion_2, Duration::from_secs(1)),
        ("rho vectors", criterion_3, Duration::from_secs(1)),
        ("gl(1|1) DS table", criterion_4, Duration::from_secs(1)),
        ("contraction identities", criterion_5, Duration::from_secs(10)),
        ("Verma DS at rank 2", criterion_6, Duration::from_secs(180)),
        ("star Verma DS at rank 3", criterion_7, Duration::from_secs(180)),
        ("maBG reduction", criterion_8, Duration::from_secs(60)),
        ("rank-2 sequences", criterion_9, Duration::from_secs(60)),
        ("PBW golden formulas", criterion_10, Duration::from_secs(5)),
        ("character identities", criterion_11, Duration::from_secs(60)),
        ("induced action", criterion_12, Duration::from_secs(60)),
    ];
    let mut results = BTreeMap::new();
    for (k, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let ok = outcome.is_ok();
        let note = match &outcome {
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        let over = if took > budget { format!(" (over budget {budget:?})") } else { String::new() };
        println!("{} {:>2} {name}: {note} [{took:.2?}]{over}", if ok { "PASS" } else { "FAIL" }, k + 1);
        results.insert(k + 1, ok);
    }
    let failed: Vec<_> = results.iter().filter(|(_, ok)| !**ok).map(|(k, _)| *k).collect();
    println!("{} of {} criteria pass", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
