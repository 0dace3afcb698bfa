use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported complement length.
pub const MAX_FACTORS: usize = 32;
/// Largest supported exponent of a single factor.
pub const MAX_EXPONENT: u32 = 15;

/// Exponent vector packed into 4-bit slots, slot `k` holding the exponent of
/// the `k`-th complement root.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PBWMonomial(pub(crate) u128);

impl PBWMonomial {
    pub const ONE: PBWMonomial = PBWMonomial(0);

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_FACTORS, "too many factors");
        let mut m = 0u128;
        for (k, &e) in exps.iter().enumerate() {
            assert!(e <= MAX_EXPONENT, "exponent {e} too large");
            m |= (e as u128) << (4 * k);
        }
        PBWMonomial(m)
    }

    pub fn get(self, k: usize) -> u32 {
        ((self.0 >> (4 * k)) & 0xf) as u32
    }

    pub fn with(self, k: usize, e: u32) -> Self {
        assert!(e <= MAX_EXPONENT, "exponent {e} too large");
        let mask = !(0xfu128 << (4 * k));
        PBWMonomial((self.0 & mask) | ((e as u128) << (4 * k)))
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// Index of the first factor with nonzero exponent.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize / 4)
    }

    pub fn exponents(self, len: usize) -> Vec<u32> {
        (0..len).map(|k| self.get(k)).collect()
    }

    pub fn degree(self, len: usize) -> u32 {
        (0..len).map(|k| self.get(k)).sum()
    }
}

impl fmt::Debug for PBWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = MAX_FACTORS - (self.0.leading_zeros() as usize / 4);
        write!(f, "{:?}", self.exponents(len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing() {
        let m = PBWMonomial::from_exponents(&[0, 3, 0, 1]);
        assert_eq!(m.first(), Some(1));
        assert_eq!(m.get(3), 1);
        assert_eq!(m.with(1, 0).first(), Some(3));
        assert_eq!(m.exponents(4), vec![0, 3, 0, 1]);
        assert_eq!(m.degree(4), 4);
        assert_eq!(PBWMonomial::ONE.first(), None);
        assert_eq!(PBWMonomial::from_exponents(&[0; 31]).with(31, 15).get(31), 15);
    }
}
