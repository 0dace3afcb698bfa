//! The Lie superalgebra gl(n|n): matrix units, supercommutator, roots,
//! the principal good grading and the automorphisms `c` and `at`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactq::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: bool) -> Self {
        if b {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_bit(k.rem_euclid(2) == 1)
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> usize {
        self as usize
    }

    pub fn flip(self) -> Self {
        Self::from_bit(!self.is_odd())
    }

    /// `(-1)^(self * other)`.
    pub fn koszul(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.is_odd() != rhs.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_odd() { "odd" } else { "even" })
    }
}

/// Parity of the basis index `i` (1-based): even on `1..=n`, odd above.
pub fn index_parity(n: usize, i: usize) -> Parity {
    Parity::from_bit(i > n)
}

/// The matrix unit `e_ij` of gl(n|n), 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatrixUnit {
    pub n: usize,
    pub i: usize,
    pub j: usize,
}

impl MatrixUnit {
    pub fn new(n: usize, i: usize, j: usize) -> Result<Self> {
        for k in [i, j] {
            if k == 0 || k > 2 * n {
                return Err(Error::IndexRange { index: k, max: 2 * n });
            }
        }
        Ok(Self { n, i, j })
    }

    pub(crate) fn raw(n: usize, i: usize, j: usize) -> Self {
        debug_assert!(i >= 1 && j >= 1 && i <= 2 * n && j <= 2 * n);
        Self { n, i, j }
    }

    pub fn parity(&self) -> Parity {
        index_parity(self.n, self.i) + index_parity(self.n, self.j)
    }

    pub fn is_cartan(&self) -> bool {
        self.i == self.j
    }

    pub fn all(n: usize) -> impl Iterator<Item = MatrixUnit> {
        (1..=2 * n).flat_map(move |i| (1..=2 * n).map(move |j| MatrixUnit::raw(n, i, j)))
    }
}

impl fmt::Display for MatrixUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{},{}", self.i, self.j)
    }
}

/// Supercommutator of two matrix units as at most two signed units.
pub fn bracket_units(a: MatrixUnit, b: MatrixUnit) -> Vec<(MatrixUnit, i64)> {
    let n = a.n;
    let mut out = Vec::with_capacity(2);
    if a.j == b.i {
        out.push((MatrixUnit::raw(n, a.i, b.j), 1));
    }
    if b.j == a.i {
        let s = -a.parity().koszul(b.parity());
        let u = MatrixUnit::raw(n, b.i, a.j);
        match out.iter_mut().find(|(v, _)| *v == u) {
            Some(e) => e.1 += s,
            None => out.push((u, s)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    out
}

/// A finite linear combination of matrix units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub n: usize,
    terms: BTreeMap<(usize, usize), Rational>,
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn unit(u: MatrixUnit) -> Self {
        Self::term(u, Rational::one())
    }

    pub fn term(u: MatrixUnit, c: Rational) -> Self {
        let mut e = Self::zero(u.n);
        e.add_term(u, &c);
        e
    }

    pub fn add_term(&mut self, u: MatrixUnit, c: &Rational) {
        assert_eq!(u.n, self.n, "rank mismatch");
        let k = (u.i, u.j);
        let v = self.terms.entry(k).or_default();
        *v += c;
        if v.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (MatrixUnit, &Rational)> {
        let n = self.n;
        self.terms.iter().map(move |(&(i, j), c)| (MatrixUnit::raw(n, i, j), c))
    }

    pub fn coefficient(&self, u: MatrixUnit) -> Rational {
        self.terms.get(&(u.i, u.j)).cloned().unwrap_or_default()
    }

    /// The common parity of all terms, if homogeneous and nonzero.
    pub fn parity(&self) -> Option<Parity> {
        let mut ps = self.terms().map(|(u, _)| u.parity());
        let first = ps.next()?;
        ps.all(|p| p == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (u, c) in other.terms() {
            out.add_term(u, c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        for (u, c) in self.terms() {
            out.add_term(u, &(c * s));
        }
        out
    }

    pub fn map_units(&self, f: impl Fn(MatrixUnit) -> (MatrixUnit, i64)) -> Self {
        let mut out = Self::zero(self.n);
        for (u, c) in self.terms() {
            let (v, s) = f(u);
            out.add_term(v, &(c * &Rational::from_int(s)));
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (u, c)) in self.terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{u}")?;
            } else {
                write!(f, "({c}){u}")?;
            }
        }
        Ok(())
    }
}

/// Bilinear supercommutator.
pub fn bracket(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    if a.n != b.n {
        return Err(Error::RankMismatch(a.n, b.n));
    }
    let mut out = AlgebraElement::zero(a.n);
    for (u, x) in a.terms() {
        for (v, y) in b.terms() {
            for (w, s) in bracket_units(u, v) {
                out.add_term(w, &(&(x * y) * &Rational::from_int(s)));
            }
        }
    }
    Ok(out)
}

/// A root `eps_a - eps_b` in unified 1-based indices, where `eps_{n+k}` is `delta_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub n: usize,
    pub a: usize,
    pub b: usize,
}

impl Root {
    pub fn new(n: usize, a: usize, b: usize) -> Result<Self> {
        MatrixUnit::new(n, a, b)?;
        if a == b {
            return Err(Error::Precondition("a root needs distinct indices".into()));
        }
        Ok(Self { n, a, b })
    }

    pub(crate) fn raw(n: usize, a: usize, b: usize) -> Self {
        Self { n, a, b }
    }

    /// `eps_i - delta_j`.
    pub fn odd(n: usize, i: usize, j: usize) -> Self {
        Self::raw(n, i, n + j)
    }

    pub fn parity(&self) -> Parity {
        index_parity(self.n, self.a) + index_parity(self.n, self.b)
    }

    pub fn is_odd(&self) -> bool {
        self.parity().is_odd()
    }

    pub fn neg(&self) -> Self {
        Self::raw(self.n, self.b, self.a)
    }

    /// The fixed root vector `e_ab`.
    pub fn unit(&self) -> MatrixUnit {
        MatrixUnit::raw(self.n, self.a, self.b)
    }

    /// Coordinates in the `eps_1..eps_n, delta_1..delta_n` basis.
    pub fn coords(&self) -> Vec<i64> {
        let mut v = vec![0; 2 * self.n];
        v[self.a - 1] += 1;
        v[self.b - 1] -= 1;
        v
    }

    /// For an odd root, the pair `(i, j)` with `{eps_i, delta_j}` its support.
    pub fn odd_pair(&self) -> Option<(usize, usize)> {
        if !self.is_odd() {
            return None;
        }
        let n = self.n;
        Some(if self.a <= n { (self.a, self.b - n) } else { (self.b, self.a - n) })
    }

    pub fn all(n: usize) -> impl Iterator<Item = Root> {
        MatrixUnit::all(n).filter(|u| !u.is_cartan()).map(move |u| Root::raw(n, u.i, u.j))
    }
}

pub(crate) fn basis_name(n: usize, k: usize) -> String {
    if k <= n {
        format!("e{k}")
    } else {
        format!("d{}", k - n)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", basis_name(self.n, self.a), basis_name(self.n, self.b))
    }
}

/// Root of `e_ij`, or `None` for the Cartan units.
pub fn root_of(u: MatrixUnit) -> Option<Root> {
    (!u.is_cartan()).then(|| Root::raw(u.n, u.i, u.j))
}

/// Principal good grading.
pub fn good_degree(u: MatrixUnit) -> i64 {
    let (n, i, j) = (u.n as i64, u.i as i64, u.j as i64);
    match (i <= n, j <= n) {
        (true, false) => j - i - n,
        (false, true) => j - i + n,
        _ => j - i,
    }
}

fn in_top_odd(u: MatrixUnit) -> bool {
    u.i > u.n && u.j <= u.n
}

/// `e_ij -> ±e_{w0(j), w0(i)}` with `w0` reversing each block; the sign is
/// `+` exactly on the odd part of the `(n^n)` Borel.
pub fn automorphism_c(u: MatrixUnit) -> (MatrixUnit, i64) {
    let n = u.n;
    let w = |k: usize| if k <= n { n + 1 - k } else { 3 * n + 1 - k };
    let s = if in_top_odd(u) { 1 } else { -1 };
    (MatrixUnit::raw(n, w(u.j), w(u.i)), s)
}

/// Antidiagonal transpose `e_ij -> ±e_{2n+1-j, 2n+1-i}` with the same sign rule.
pub fn automorphism_at(u: MatrixUnit) -> (MatrixUnit, i64) {
    let n = u.n;
    let s = if in_top_odd(u) { 1 } else { -1 };
    (MatrixUnit::raw(n, 2 * n + 1 - u.j, 2 * n + 1 - u.i), s)
}
