//! Sparse integer multivariate polynomials with exact modular evaluation.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::arith::padic::PadicLevel;

/// A sparse polynomial in `Z[x_1, ..., x_n]`.
///
/// Terms are kept in a canonical form: sorted descending by exponent vector,
/// no duplicate exponent vectors, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(BigInt, Vec<u32>)>,
}

impl Polynomial {
    /// Builds a polynomial from raw terms, normalizing to canonical form.
    pub fn new(nvars: usize, terms: Vec<(BigInt, Vec<u32>)>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidArgument("nvars must be >= 1".into()));
        }
        for (_, exps) in &terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: exps.len(),
                });
            }
        }
        let mut poly = Polynomial { nvars, terms };
        poly.normalize();
        Ok(poly)
    }

    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.push((c, vec![0; nvars]));
        }
        p
    }

    /// The monomial `x_{var}` (zero-based index).
    pub fn variable(nvars: usize, var: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        Polynomial {
            nvars,
            terms: vec![(BigInt::one(), exps)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(BigInt, Vec<u32>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(_, e)| e.iter().all(|&a| a == 0))
    }

    /// Total degree; 0 for constants and the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, e)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Fails with `ConstantPolynomial` unless the polynomial is non-constant.
    pub fn require_non_constant(&self) -> Result<()> {
        if self.is_constant() {
            Err(Error::ConstantPolynomial(self.to_string()))
        } else {
            Ok(())
        }
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| b.1.cmp(&a.1));
        let mut merged: Vec<(BigInt, Vec<u32>)> = Vec::with_capacity(self.terms.len());
        for (c, e) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((lc, le)) if *le == e => *lc += c,
                _ => merged.push((c, e)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        self.terms = merged;
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let mut p = Polynomial {
            nvars: self.nvars,
            terms,
        };
        p.normalize();
        p
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(c, e)| (-c, e.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, ea) in &self.terms {
            for (cb, eb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                terms.push((ca * cb, exps));
            }
        }
        let mut p = Polynomial {
            nvars: self.nvars,
            terms,
        };
        p.normalize();
        p
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.nvars, BigInt::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation over the integers.
    pub fn eval(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut total = BigInt::zero();
        for (c, exps) in &self.terms {
            let mut t = c.clone();
            for (x, &a) in point.iter().zip(exps) {
                for _ in 0..a {
                    t *= x;
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// `f(x) mod p^m`, exact for any input size.
    pub fn eval_mod(&self, point: &[BigInt], level: &PadicLevel) -> Result<BigUint> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let modulus = BigInt::from(level.modulus().clone());
        let reduced: Vec<BigInt> = point.iter().map(|x| x.mod_floor_ref(&modulus)).collect();
        let mut total = BigInt::zero();
        for (c, exps) in &self.terms {
            let mut t = c.mod_floor_ref(&modulus);
            for (x, &a) in reduced.iter().zip(exps) {
                for _ in 0..a {
                    t = (&t * x) % &modulus;
                }
            }
            total = (total + t) % &modulus;
        }
        Ok(total
            .mod_floor_ref(&modulus)
            .to_biguint()
            .expect("non-negative after mod_floor"))
    }

    /// Partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[var] > 0)
            .map(|(c, e)| {
                let mut e2 = e.clone();
                e2[var] -= 1;
                (c * BigInt::from(e[var]), e2)
            })
            .collect();
        let mut p = Polynomial {
            nvars: self.nvars,
            terms,
        };
        p.normalize();
        p
    }

    /// Substitutes `x_j = y_j + s * u_j`, returning the polynomial in `u`.
    ///
    /// This is the change of variables carrying a multiball `y + (s Z)^n`
    /// to the standard box; coefficients stay exact integers.
    pub fn shift_scale(&self, y: &[BigInt], s: &BigInt) -> Result<Polynomial> {
        if y.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: y.len(),
            });
        }
        let n = self.nvars;
        // y_j + s*u_j as degree-1 polynomials in u.
        let subs: Vec<Polynomial> = (0..n)
            .map(|j| {
                Polynomial::constant(n, y[j].clone())
                    .add(&Polynomial::variable(n, j).mul(&Polynomial::constant(n, s.clone())))
            })
            .collect();
        let mut out = Polynomial::zero(n);
        for (c, exps) in &self.terms {
            let mut t = Polynomial::constant(n, c.clone());
            for (j, &a) in exps.iter().enumerate() {
                if a > 0 {
                    t = t.mul(&subs[j].pow(a));
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Minimum p-adic valuation over all coefficients; `None` for the zero
    /// polynomial.
    pub fn min_coeff_valuation(&self, p: u64) -> Option<u32> {
        let pb = BigInt::from(p);
        self.terms
            .iter()
            .map(|(c, _)| {
                let mut c = c.clone();
                let mut v = 0u32;
                while (&c % &pb).is_zero() {
                    c /= &pb;
                    v += 1;
                }
                v
            })
            .min()
    }

    /// Divides every coefficient by `p^e` (must be exact).
    pub fn divide_coeffs_by_pow(&self, p: u64, e: u32) -> Polynomial {
        let mut d = BigInt::one();
        for _ in 0..e {
            d *= p;
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(c, ex)| (c / &d, ex.clone()))
                .collect(),
        }
    }
}

trait ModFloorRef {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt;
}

impl ModFloorRef for BigInt {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, exps)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let has_vars = exps.iter().any(|&a| a > 0);
            let mut wrote = false;
            if !abs.is_one() || !has_vars {
                write!(f, "{abs}")?;
                wrote = true;
            }
            for (j, &a) in exps.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "x{}", j + 1)?;
                if a > 1 {
                    write!(f, "^{a}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}
