//! Levels (p, m), valuations and angular components.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A prime power level: the ring `Z/p^m Z` together with the additive
/// character `exp(2 pi i . / p^m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicLevel {
    p: u64,
    m: u32,
    modulus: BigUint,
}

impl PadicLevel {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if m < 1 {
            return Err(Error::LevelTooSmall { min: 1, got: m });
        }
        Ok(PadicLevel {
            p,
            m,
            modulus: BigUint::from(p).pow(m),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `p^m` as an exact integer.
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// `p^m` when it fits in a machine word pair.
    pub fn modulus_u128(&self) -> Option<u128> {
        checked_pow_u128(self.p as u128, self.m)
    }

    /// The level (p, m') for m' <= m.
    pub fn reduce_to(&self, m: u32) -> Result<Self> {
        PadicLevel::new(self.p, m)
    }
}

/// `p^k` with overflow check.
pub fn checked_pow_u128(p: u128, k: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// Valuation and angular component of `z` in `[0, p^m)`.
///
/// Returns `(v, Some(ac))` with `z = ac * p^v mod p^(v+1)` and `ac` a unit in
/// `[1, p)` when `v < m`; returns `(m, None)` for `z = 0`, meaning "valuation
/// at least m".
pub fn ord_and_ac(z: &BigUint, level: &PadicLevel) -> (u32, Option<u64>) {
    if z.is_zero() {
        return (level.m(), None);
    }
    let p = BigUint::from(level.p());
    let mut v = 0u32;
    let mut rest = z.clone();
    while (&rest % &p).is_zero() {
        rest /= &p;
        v += 1;
    }
    let ac = (&rest % &p)
        .to_u64_digits()
        .first()
        .copied()
        .unwrap_or(0);
    (v, Some(ac))
}

/// Machine-word version of [`ord_and_ac`] for residues below `2^128`.
pub fn ord_and_ac_u128(z: u128, p: u64, m: u32) -> (u32, Option<u64>) {
    if z == 0 {
        return (m, None);
    }
    let p = p as u128;
    let mut v = 0u32;
    let mut rest = z;
    while rest % p == 0 {
        rest /= p;
        v += 1;
    }
    (v, Some((rest % p) as u64))
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn mod_pow_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, n);
        }
        base = mul_mod_u64(base, base, n);
        exp >>= 1;
    }
    acc
}

impl std::fmt::Display for PadicLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^{}", self.p, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_validation() {
        assert!(PadicLevel::new(5, 2).is_ok());
        assert!(matches!(PadicLevel::new(6, 2), Err(Error::NotPrime(6))));
        assert!(matches!(
            PadicLevel::new(5, 0),
            Err(Error::LevelTooSmall { .. })
        ));
        assert_eq!(
            PadicLevel::new(7, 3).unwrap().modulus(),
            &BigUint::from(343u32)
        );
    }

    #[test]
    fn ord_ac_examples() {
        let l = PadicLevel::new(5, 3).unwrap();
        assert_eq!(ord_and_ac(&BigUint::from(50u32), &l), (2, Some(2)));
        assert_eq!(ord_and_ac(&BigUint::from(0u32), &l), (3, None));
        let l2 = PadicLevel::new(7, 2).unwrap();
        assert_eq!(ord_and_ac(&BigUint::from(12u32), &l2), (0, Some(5)));
    }

    #[test]
    fn ord_ac_reconstruction_property() {
        // z = ac * p^v mod p^(v+1), ac a unit, and p^v | z but p^(v+1) does not.
        for p in [2u64, 3, 5, 7] {
            let l = PadicLevel::new(p, 4).unwrap();
            let q = l.modulus_u128().unwrap();
            for z in 0..q {
                let (v, ac) = ord_and_ac_u128(z, p, 4);
                let (vb, acb) = ord_and_ac(&BigUint::from(z), &l);
                assert_eq!((v, ac), (vb, acb));
                if z == 0 {
                    assert_eq!(v, 4);
                    assert!(ac.is_none());
                } else {
                    let pv = checked_pow_u128(p as u128, v).unwrap();
                    assert_eq!(z % pv, 0);
                    if v < 4 {
                        assert_ne!(z % (pv * p as u128), 0);
                        let a = ac.unwrap();
                        assert!((1..p).contains(&a));
                        assert_eq!((z / pv) % p as u128, a as u128);
                    }
                }
            }
        }
    }

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (2..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime_u64(2_147_483_647));
        assert!(!is_prime_u64(2_147_483_649));
    }
}
