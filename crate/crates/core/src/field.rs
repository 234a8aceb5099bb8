//! Prime fields `F_p` with `p < 2^32`.
//!
//! Elements are plain `u64` values kept in canonical form `[0, p)`. The
//! modulus bound guarantees that a product of two reduced elements fits in a
//! `u64` before reduction.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// The Mersenne prime `2^31 - 1`, the default modulus.
pub const DEFAULT_PRIME: u64 = (1 << 31) - 1;

/// A prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    p: u64,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec { p: DEFAULT_PRIME }
    }
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self, CoreError> {
        if p >= 1 << 32 {
            return Err(CoreError::InvalidInput(format!(
                "prime {p} exceeds the supported bound 2^32"
            )));
        }
        if !is_prime(p) {
            return Err(CoreError::InvalidInput(format!("{p} is not prime")));
        }
        Ok(FieldSpec { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    /// Reduces a signed integer to its canonical representative.
    #[inline]
    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }
}

/// Trial division; adequate for moduli below `2^32`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_large_moduli() {
        assert!(FieldSpec::new(4).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(0).is_err());
        assert!(FieldSpec::new((1 << 32) + 15).is_err());
        assert!(FieldSpec::new(2).is_ok());
        assert!(FieldSpec::new(DEFAULT_PRIME).is_ok());
    }

    #[test]
    fn inverse_round_trips() {
        for p in [2, 3, 5, 7, 101, DEFAULT_PRIME] {
            let f = FieldSpec::new(p).unwrap();
            for a in 1..p.min(50) {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn signed_reduction() {
        let f = FieldSpec::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.from_i64(-15), 6);
        assert_eq!(f.from_i64(15), 1);
    }
}
