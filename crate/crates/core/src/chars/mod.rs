//! Multiplicative characters of `F_p^x`, Gauss sums and the Weil bound
//! checker for one-variable power sums.
//!
//! Characters are labeled by `(order d, index)` against the smallest positive
//! primitive root g of p: the character sends `g` to `exp(2 pi i index / d)`.
//! Only conductor-1 characters are materialized; every zeta factor twisted by
//! a character of conductor above 1 vanishes in the good-reduction regime, so
//! nothing else ever enters a reconstruction.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::arith::{is_prime_u64, mod_pow_u64, mul_mod_u64};
use crate::error::{Error, Result};

/// A multiplicative character of `F_p^x` of order dividing `d`, with
/// `chi(g) = exp(2 pi i index / d)` for the fixed primitive root `g`.
///
/// By convention `chi(0) = 0`.
#[derive(Debug, Clone)]
pub struct MultChar {
    p: u64,
    order: u64,
    index: u64,
    generator: u64,
    /// dlog[u] = discrete log of u base g, for u in [1, p).
    dlog: std::sync::Arc<Vec<u32>>,
}

impl MultChar {
    pub fn new(p: u64, order: u64, index: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if order == 0 || (p - 1) % order != 0 {
            return Err(Error::OrderDoesNotDivide { d: order, pm1: p - 1 });
        }
        if index >= order {
            return Err(Error::InvalidArgument(format!(
                "character index {index} not below order {order}"
            )));
        }
        let generator = primitive_root(p);
        Ok(MultChar {
            p,
            order,
            index,
            generator,
            dlog: std::sync::Arc::new(dlog_table(p, generator)),
        })
    }

    pub fn trivial(p: u64) -> Result<Self> {
        MultChar::new(p, 1, 0)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    /// The exact order of this character as a group element.
    pub fn exact_order(&self) -> u64 {
        if self.index == 0 {
            1
        } else {
            self.order / gcd(self.order, self.index)
        }
    }

    /// The inverse character, with the same `(order, index)` labeling.
    pub fn inverse(&self) -> MultChar {
        MultChar {
            p: self.p,
            order: self.order,
            index: if self.index == 0 {
                0
            } else {
                self.order - self.index
            },
            generator: self.generator,
            dlog: self.dlog.clone(),
        }
    }

    /// `chi(u)`: a root of unity for `u` a unit, `0` for `u = 0 mod p`.
    pub fn value(&self, u: u64) -> Complex64 {
        let u = u % self.p;
        if u == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let t = self.dlog[u as usize] as u64;
        let num = mul_mod_u64(self.index % self.order, t % self.order, self.order);
        unit_phase(num as f64 / self.order as f64)
    }

    /// Gauss sum `g_chi = (1/(p-1)) sum_{v in F_p^x} chi(v) e(v/p)`,
    /// the conductor-1 kernel of the reconstruction formula.
    pub fn gauss_sum(&self) -> Complex64 {
        let p = self.p;
        let mut s = Complex64::new(0.0, 0.0);
        for v in 1..p {
            s += self.value(v) * unit_phase(v as f64 / p as f64);
        }
        s / (p - 1) as f64
    }
}

/// `exp(2 pi i frac)` for `frac` in [0, 1).
pub fn unit_phase(frac: f64) -> Complex64 {
    let theta = TAU * frac;
    Complex64::new(theta.cos(), theta.sin())
}

/// The smallest positive primitive root mod p (deterministic).
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    'cand: for g in 2..p {
        for &q in &factors {
            if mod_pow_u64(g, (p - 1) / q, p) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root");
}

/// dlog[u] = discrete log of u base g, for u in [1, p); dlog[0] unused.
pub(crate) fn dlog_table(p: u64, g: u64) -> Vec<u32> {
    let mut table = vec![0u32; p as usize];
    let mut acc = 1u64;
    for t in 0..p - 1 {
        table[acc as usize] = t as u32;
        acc = mul_mod_u64(acc, g, p);
    }
    table
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Outcome of one Weil power-sum check.
#[derive(Debug, Clone)]
pub struct WeilCheck {
    pub p: u64,
    pub d: u64,
    pub xi: u64,
    pub sum_magnitude: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Checks `|sum_{u in F_p^x} e(u^d xi / p)| <= (d-1) sqrt(p) + 1`.
///
/// Requires `d | p - 1`; the orbit decomposition behind the bound needs it,
/// so other `d` are rejected rather than silently accepted.
pub fn weil_power_sum_check(p: u64, d: u64, xi: u64) -> Result<WeilCheck> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if d == 0 || (p - 1) % d != 0 {
        return Err(Error::OrderDoesNotDivide { d, pm1: p - 1 });
    }
    if xi == 0 || xi >= p {
        return Err(Error::InvalidArgument(format!(
            "xi must lie in [1, p), got {xi}"
        )));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for u in 1..p {
        let e = mul_mod_u64(mod_pow_u64(u, d, p), xi, p);
        s += unit_phase(e as f64 / p as f64);
    }
    let sum_magnitude = s.norm();
    let bound = (d - 1) as f64 * (p as f64).sqrt() + 1.0;
    Ok(WeilCheck {
        p,
        d,
        xi,
        sum_magnitude,
        bound,
        ok: sum_magnitude <= bound + 1e-9,
    })
}

/// All nontrivial conductor-1 characters of `F_p^x` with exact order `d`,
/// i.e. the labels `(d, k)` with `gcd(k, d) = 1`.
pub fn characters_of_exact_order(p: u64, d: u64) -> Result<Vec<MultChar>> {
    if d == 0 || (p - 1) % d != 0 {
        return Err(Error::OrderDoesNotDivide { d, pm1: p - 1 });
    }
    (1..d)
        .filter(|&k| gcd(k, d) == 1)
        .map(|k| MultChar::new(p, d, k))
        .collect()
}
