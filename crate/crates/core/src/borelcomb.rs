//! Borel subalgebras of gl(n|n) with standard even part, labelled by
//! partitions in the n x n box.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::superalg::{Parity, Root};
use crate::weightlat::Weight;

/// A partition in the n x n box. Parts are stored without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BorelLabel {
    pub n: usize,
    parts: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    Eps(usize),
    Del(usize),
}

impl Symbol {
    /// Unified 1-based basis index.
    pub fn index(self, n: usize) -> usize {
        match self {
            Symbol::Eps(i) => i,
            Symbol::Del(j) => n + j,
        }
    }

    pub fn is_eps(self) -> bool {
        matches!(self, Symbol::Eps(_))
    }
}

/// Ordered sequence of the 2n basis functionals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EpsDeltaSequence {
    pub n: usize,
    pub symbols: Vec<Symbol>,
}

impl EpsDeltaSequence {
    /// Builds from an `e`/`d` word such as `"eded"`.
    pub fn from_word(word: &str) -> Result<Self> {
        let n = word.len() / 2;
        let (mut i, mut j) = (0, 0);
        let mut symbols = Vec::with_capacity(word.len());
        for (pos, ch) in word.chars().enumerate() {
            match ch {
                'e' | 'ε' => {
                    i += 1;
                    symbols.push(Symbol::Eps(i));
                }
                'd' | 'δ' => {
                    j += 1;
                    symbols.push(Symbol::Del(j));
                }
                _ => return Err(Error::Parse { pos, msg: format!("unexpected {ch:?}") }),
            }
        }
        if i != j || 2 * n != word.chars().count() {
            return Err(Error::InvalidLabel(format!("{word} needs equally many e and d")));
        }
        Ok(Self { n, symbols })
    }

    pub fn word(&self) -> String {
        self.symbols.iter().map(|s| if s.is_eps() { 'e' } else { 'd' }).collect()
    }

    /// Position (0-based) of each unified index.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; 2 * self.n + 1];
        for (p, s) in self.symbols.iter().enumerate() {
            pos[s.index(self.n)] = p;
        }
        pos
    }

    pub fn to_label(&self) -> BorelLabel {
        let n = self.n;
        let mut beta = vec![0; n];
        let mut dels = 0;
        for s in &self.symbols {
            match s {
                Symbol::Del(_) => dels += 1,
                Symbol::Eps(i) => beta[n - i] = dels,
            }
        }
        BorelLabel::from_parts(n, beta).expect("sequence yields a partition")
    }

    /// The (n|n)-shuffle: image position (1-based) of each unified index.
    pub fn shuffle(&self) -> Vec<usize> {
        self.positions()[1..].iter().map(|p| p + 1).collect()
    }
}

impl fmt::Display for EpsDeltaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

impl BorelLabel {
    pub fn from_parts(n: usize, mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.len() > n {
            return Err(Error::InvalidLabel(format!("{parts:?} has more than {n} parts")));
        }
        if parts.iter().any(|&p| p > n) {
            return Err(Error::InvalidLabel(format!("{parts:?} has a part larger than {n}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidLabel(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self { n, parts })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, parts: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self { n, parts: vec![n; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `beta_k`, 1-based, zero beyond the length.
    pub fn beta(&self, k: usize) -> usize {
        self.parts.get(k - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let parts = parse_parts(s)?;
        Self::from_parts(n, parts)
    }

    pub fn sequence(&self) -> EpsDeltaSequence {
        let n = self.n;
        let mut symbols = Vec::with_capacity(2 * n);
        let mut dels = 0;
        for i in 1..=n {
            while dels < self.beta(n + 1 - i) {
                dels += 1;
                symbols.push(Symbol::Del(dels));
            }
            symbols.push(Symbol::Eps(i));
        }
        while dels < n {
            dels += 1;
            symbols.push(Symbol::Del(dels));
        }
        EpsDeltaSequence { n, symbols }
    }

    /// The distinguished hypercube corner `(n-1, ..., 1, 0)`.
    pub fn b_o(n: usize) -> Self {
        Self::from_parts(n, (0..n).rev().collect()).expect("staircase")
    }

    /// The corner `(n, ..., 2, 1)`.
    pub fn b_i(n: usize) -> Self {
        Self::from_parts(n, (1..=n).rev().collect()).expect("staircase")
    }
}

fn parse_parts(s: &str) -> Result<Vec<usize>> {
    let t = s.trim();
    let offset = s.len() - s.trim_start().len();
    let (body, shift) = match (t.strip_prefix('('), t.ends_with(')')) {
        (Some(rest), true) => (&rest[..rest.len() - 1], offset + 1),
        (None, false) => (t, offset),
        _ => return Err(Error::Parse { pos: offset, msg: "unbalanced parentheses".into() }),
    };
    if body.contains(',') {
        return body
            .split(',')
            .scan(shift, |pos, tok| {
                let here = *pos;
                *pos += tok.len() + 1;
                Some(
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse { pos: here, msg: format!("bad part {:?}", tok.trim()) }),
                )
            })
            .collect();
    }
    let mut parts = Vec::new();
    let mut chars = body.char_indices().peekable();
    while let Some((pos, ch)) = chars.next() {
        let digit =
            ch.to_digit(10).ok_or_else(|| Error::Parse { pos: shift + pos, msg: format!("unexpected {ch:?}") })?
                as usize;
        let mut exp = 1;
        if let Some(&(_, next)) = chars.peek() {
            if next == '^' {
                chars.next();
                let mut e = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        e.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                exp = e.parse().map_err(|_| Error::Parse { pos: shift + pos + 1, msg: "missing exponent".into() })?;
            } else if let Some(k) = superscript(next) {
                chars.next();
                exp = k;
                while let Some(k2) = chars.peek().and_then(|&(_, c)| superscript(c)) {
                    chars.next();
                    exp = 10 * exp + k2;
                }
            }
        }
        parts.extend(std::iter::repeat_n(digit, exp));
    }
    Ok(parts)
}

fn superscript(c: char) -> Option<usize> {
    "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|d| d == c)
}

impl fmt::Display for BorelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        let wide = self.parts.iter().any(|&p| p >= 10);
        let mut k = 0;
        let mut first = true;
        while k < self.parts.len() {
            let p = self.parts[k];
            let run = self.parts[k..].iter().take_while(|&&q| q == p).count();
            if wide && !first {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            k += run;
            first = false;
        }
        f.write_str(")")
    }
}

impl FromStr for BorelLabel {
    type Err = Error;

    /// Parses a label and takes `n` to be the smallest box that contains it.
    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_parts(s)?;
        let n = parts.len().max(parts.first().copied().unwrap_or(0)).max(1);
        Self::from_parts(n, parts)
    }
}

/// All labels in the n x n box, lexicographically sorted.
pub fn enumerate_borels(n: usize) -> Vec<BorelLabel> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<BorelLabel>) {
        out.push(BorelLabel { n, parts: cur.clone() });
        if cur.len() == n {
            return;
        }
        for p in 1..=max {
            cur.push(p);
            rec(n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Positive roots `eps_a - eps_b` with `a` before `b` in the sequence.
pub fn positive_roots(b: &BorelLabel) -> BTreeSet<Root> {
    let seq = b.sequence();
    let n = b.n;
    let idx: Vec<usize> = seq.symbols.iter().map(|s| s.index(n)).collect();
    let mut out = BTreeSet::new();
    for p in 0..idx.len() {
        for q in p + 1..idx.len() {
            out.insert(Root::raw(n, idx[p], idx[q]));
        }
    }
    out
}

/// Simple roots: consecutive differences in the sequence.
pub fn simple_roots(b: &BorelLabel) -> Vec<Root> {
    let n = b.n;
    b.sequence().symbols.windows(2).map(|w| Root::raw(n, w[0].index(n), w[1].index(n))).collect()
}

pub fn odd_simple_roots(b: &BorelLabel) -> Vec<Root> {
    simple_roots(b).into_iter().filter(Root::is_odd).collect()
}

/// Label obtained by reflecting in an odd simple root.
pub fn odd_reflection(b: &BorelLabel, alpha: Root) -> Result<BorelLabel> {
    let mut seq = b.sequence();
    let n = b.n;
    let p = seq
        .symbols
        .windows(2)
        .position(|w| w[0].index(n) == alpha.a && w[1].index(n) == alpha.b)
        .filter(|_| alpha.is_odd())
        .ok_or_else(|| Error::Precondition(format!("{alpha} is not an odd simple root of {b}")))?;
    seq.symbols.swap(p, p + 1);
    Ok(seq.to_label())
}

/// Neighbours in the odd-reflection graph, sorted.
pub fn odd_reflection_neighbors(b: &BorelLabel) -> Vec<BorelLabel> {
    let mut out: Vec<BorelLabel> =
        odd_simple_roots(b).into_iter().map(|a| odd_reflection(b, a).expect("odd simple")).collect();
    out.sort();
    out
}

/// Number of epsilons after `delta_j` in the sequence.
fn beta_prime(seq: &EpsDeltaSequence, j: usize) -> usize {
    let p = seq.symbols.iter().position(|s| *s == Symbol::Del(j)).expect("delta present");
    seq.symbols[p..].iter().filter(|s| s.is_eps()).count()
}

/// The integral Weyl vector `rho^b`.
pub fn rho(b: &BorelLabel) -> Weight {
    let n = b.n as i64;
    let seq = b.sequence();
    let eps = (1..=b.n).map(|i| b.beta(b.n + 1 - i) as i64 - i as i64 + 1).collect();
    let del = (1..=b.n).map(|j| n - j as i64 - beta_prime(&seq, j) as i64).collect();
    Weight::new(eps, del)
}

/// `(n-1+gamma_n, ..., 1+gamma_2, gamma_1)`.
pub fn hypercube_label(gamma: &[bool]) -> BorelLabel {
    let n = gamma.len();
    let parts = (1..=n).map(|k| n - k + gamma[n - k] as usize).collect();
    BorelLabel::from_parts(n, parts).expect("hypercube labels fit the box")
}

/// All 2^n hypercube labels, indexed by `gamma` read as a little-endian integer.
pub fn hypercube_labels(n: usize) -> Vec<(Vec<bool>, BorelLabel)> {
    (0..1usize << n)
        .map(|m| {
            let g: Vec<bool> = (0..n).map(|k| m >> k & 1 == 1).collect();
            let l = hypercube_label(&g);
            (g, l)
        })
        .collect()
}

/// `(beta'_1+1, ..., beta'_{n-1}+1, beta_1)` for `b1` of rank 1 and `b2` of rank n-1.
pub fn star(b1: &BorelLabel, b2: &BorelLabel) -> Result<BorelLabel> {
    if b1.n != 1 {
        return Err(Error::RankMismatch(b1.n, 1));
    }
    let n = b2.n + 1;
    let mut parts: Vec<usize> = (1..n).map(|k| b2.beta(k) + 1).collect();
    parts.push(b1.beta(1));
    BorelLabel::from_parts(n, parts)
}

/// Image under `(.)^c`: the complement in the box.
pub fn complement_label(b: &BorelLabel) -> BorelLabel {
    let n = b.n;
    let parts = (1..=n).map(|k| n - b.beta(n + 1 - k)).collect();
    BorelLabel::from_parts(n, parts).expect("complement fits the box")
}

/// Image under `(.)^at`: reverse the sequence and swap the two letters.
pub fn antitranspose_label(b: &BorelLabel) -> BorelLabel {
    let word: String = b.sequence().word().chars().rev().map(|c| if c == 'e' { 'd' } else { 'e' }).collect();
    EpsDeltaSequence::from_word(&word).expect("valid word").to_label()
}

/// Label of the Borel `b ∩ gl(J)` of the centralizer of `e_alpha`, where
/// `alpha = eps_i - delta_j`: the sequence with both symbols removed.
pub fn restrict_label(b: &BorelLabel, alpha: Root) -> Result<BorelLabel> {
    let (i, j) = alpha.odd_pair().ok_or_else(|| Error::NotOdd(alpha.to_string()))?;
    let word: String = b
        .sequence()
        .symbols
        .iter()
        .filter(|s| **s != Symbol::Eps(i) && **s != Symbol::Del(j))
        .map(|s| if s.is_eps() { 'e' } else { 'd' })
        .collect();
    if b.n == 1 {
        return Ok(BorelLabel::empty(0));
    }
    Ok(EpsDeltaSequence::from_word(&word)?.to_label())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

impl FromStr for GraphFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(GraphFormat::Dot),
            "json" => Ok(GraphFormat::Json),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown graph format {s:?}") }),
        }
    }
}

/// Edges of the odd-reflection graph as pairs of vertex indices `u < v`.
pub fn borel_graph_edges(labels: &[BorelLabel]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (u, b) in labels.iter().enumerate() {
        for nb in odd_reflection_neighbors(b) {
            let v = labels.binary_search(&nb).expect("neighbour enumerated");
            if u < v {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// The odd-reflection graph as DOT or JSON adjacency.
pub fn emit_borel_graph(n: usize, format: GraphFormat) -> Result<String> {
    if n > 6 {
        return Err(Error::GraphTooLarge(n));
    }
    let labels = enumerate_borels(n);
    let edges = borel_graph_edges(&labels);
    Ok(match format {
        GraphFormat::Dot => {
            let mut s = format!("graph L{n}{n} {{\n");
            for (k, b) in labels.iter().enumerate() {
                s += &format!("  v{k} [label=\"{b}\"];\n");
            }
            for (u, v) in &edges {
                s += &format!("  v{u} -- v{v};\n");
            }
            s += "}\n";
            s
        }
        GraphFormat::Json => {
            let vertices: Vec<String> = labels.iter().map(|b| b.to_string()).collect();
            let adjacency: Vec<Vec<usize>> = (0..labels.len())
                .map(|u| {
                    edges
                        .iter()
                        .filter_map(|&(a, b)| {
                            if a == u {
                                Some(b)
                            } else if b == u {
                                Some(a)
                            } else {
                                None
                            }
                        })
                        .collect()
                })
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({
                "n": n,
                "vertices": vertices,
                "edges": edges,
                "adjacency": adjacency,
            }))
            .expect("json")
        }
    })
}

/// Height functional: `2n - 1 - p` on the symbol at 0-based position `p`.
pub fn height_functional(b: &BorelLabel) -> Vec<i64> {
    let n = b.n;
    let mut xi = vec![0; 2 * n];
    for (p, s) in b.sequence().symbols.iter().enumerate() {
        xi[s.index(n) - 1] = (2 * n - 1 - p) as i64;
    }
    xi
}

pub fn root_height(xi: &[i64], r: Root) -> i64 {
    xi[r.a - 1] - xi[r.b - 1]
}

pub fn is_simple_odd(b: &BorelLabel, alpha: Root) -> bool {
    alpha.parity() == Parity::Odd && simple_roots(b).contains(&alpha)
}
