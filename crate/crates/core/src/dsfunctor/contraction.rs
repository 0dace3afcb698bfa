//! The Koszul-type contraction on the supersymmetric algebra of the
//! generators `e_{i,1}, e_{i,n+1}` (`i` outside `{1, n+1}`).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exactq::Rational;
use crate::superalg::{bracket_units, index_parity, MatrixUnit, Parity};

/// Element of the truncated supersymmetric algebra: sorted generator
/// multisets (odd generators at most once) with coefficients.
type Poly = BTreeMap<Vec<usize>, Rational>;

struct Algebra {
    units: Vec<MatrixUnit>,
    parity: Vec<Parity>,
}

impl Algebra {
    fn new(n: usize) -> Self {
        let mut units = Vec::new();
        for i in (2..=n).chain(n + 2..=2 * n) {
            units.push(MatrixUnit::raw(n, i, 1));
            units.push(MatrixUnit::raw(n, i, n + 1));
        }
        let parity = units.iter().map(|u| u.parity()).collect();
        Self { units, parity }
    }

    fn index(&self, u: MatrixUnit) -> usize {
        self.units.iter().position(|&v| v == u).expect("generator")
    }

    /// Sorts a word into normal order with the Koszul sign; `None` if an odd
    /// generator repeats.
    fn normal(&self, word: &[usize]) -> Option<(Vec<usize>, i64)> {
        let mut w = word.to_vec();
        let mut sign = 1;
        for a in 1..w.len() {
            let mut b = a;
            while b > 0 && w[b - 1] > w[b] {
                sign *= self.parity[w[b - 1]].koszul(self.parity[w[b]]);
                w.swap(b - 1, b);
                b -= 1;
            }
        }
        if w.windows(2).any(|p| p[0] == p[1] && self.parity[p[0]].is_odd()) {
            return None;
        }
        Some((w, sign))
    }

    fn word_parity(&self, w: &[usize]) -> Parity {
        w.iter().fold(Parity::Even, |p, &g| p + self.parity[g])
    }

    /// Applies the derivation of parity `dp` with the given generator images.
    fn derivation(&self, dp: Parity, images: &[Vec<(usize, Rational)>], x: &Poly) -> Poly {
        let mut out = Poly::new();
        for (w, c) in x {
            for t in 0..w.len() {
                let sign = Rational::from_int(dp.koszul(self.word_parity(&w[..t])));
                for (g, a) in &images[w[t]] {
                    let mut word = w.clone();
                    word[t] = *g;
                    if let Some((nw, s)) = self.normal(&word) {
                        let e = out.entry(nw.clone()).or_default();
                        *e += &(&(c * a) * &sign) * &Rational::from_int(s);
                        if e.is_zero() {
                            out.remove(&nw);
                        }
                    }
                }
            }
        }
        out
    }

    fn monomials(&self, max_degree: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for w in &frontier {
                let start = w.last().copied().unwrap_or(0);
                for g in start..self.units.len() {
                    if w.last() == Some(&g) && self.parity[g].is_odd() {
                        continue;
                    }
                    let mut nw: Vec<usize> = w.clone();
                    nw.push(g);
                    next.push(nw);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (w, c) in b {
        let e = out.entry(w.clone()).or_default();
        *e += c;
        if e.is_zero() {
            out.remove(w);
        }
    }
    out
}

fn scale(a: &Poly, s: &Rational) -> Poly {
    a.iter().map(|(w, c)| (w.clone(), c * s)).filter(|(_, c)| !c.is_zero()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    pub n: usize,
    pub max_degree: usize,
    pub generators: Vec<String>,
    pub monomials_checked: usize,
    /// Monomials on which an identity fails, with the identity's name.
    pub failures: Vec<(String, String)>,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `delta h + h delta = D` and `delta s + s delta = id - pi` on every
/// monomial of degree at most `max_degree`, where `delta = [e_{1,n+1}, -]`,
/// `h(e_{i,n+1}) = -(-1)^{|i|} e_{i,1}`, `D` is the degree and
/// `s = D^{-1} h` in positive degree.
pub fn contraction_check(n: usize, max_degree: usize) -> ContractionReport {
    assert!(n >= 2, "contraction needs n >= 2");
    let alg = Algebra::new(n);
    let x = MatrixUnit::raw(n, 1, n + 1);
    let m = alg.units.len();
    let mut delta: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); m];
    let mut h: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); m];
    for (k, &u) in alg.units.iter().enumerate() {
        for (v, c) in bracket_units(x, u) {
            delta[k].push((alg.index(v), Rational::from_int(c)));
        }
        if u.j == n + 1 {
            let sign = -index_parity(n, u.i).koszul(Parity::Odd);
            h[k].push((alg.index(MatrixUnit::raw(n, u.i, 1)), Rational::from_int(sign)));
        }
    }
    let mut report = ContractionReport {
        n,
        max_degree,
        generators: alg.units.iter().map(|u| u.to_string()).collect(),
        monomials_checked: 0,
        failures: Vec::new(),
    };
    let s = |p: &Poly| -> Poly {
        let hp = alg.derivation(Parity::Odd, &h, p);
        hp.into_iter()
            .map(|(w, c)| {
                let d = Rational::from_int(w.len() as i64);
                (w, &c / &d)
            })
            .collect()
    };
    for w in alg.monomials(max_degree) {
        let mono: Poly = [(w.clone(), Rational::one())].into_iter().collect();
        let dh = alg.derivation(Parity::Odd, &delta, &alg.derivation(Parity::Odd, &h, &mono));
        let hd = alg.derivation(Parity::Odd, &h, &alg.derivation(Parity::Odd, &delta, &mono));
        let degree = scale(&mono, &Rational::from_int(w.len() as i64));
        let name = || w.iter().map(|&g| alg.units[g].to_string()).collect::<Vec<_>>().join("*");
        if add(&dh, &hd) != degree {
            report.failures.push((name(), "delta h + h delta = D".into()));
        }
        let ds = alg.derivation(Parity::Odd, &delta, &s(&mono));
        let sd = s(&alg.derivation(Parity::Odd, &delta, &mono));
        let expected = if w.is_empty() { Poly::new() } else { mono.clone() };
        if add(&ds, &sd) != expected {
            report.failures.push((name(), "delta s + s delta = id - pi".into()));
        }
        report.monomials_checked += 1;
    }
    report
}
