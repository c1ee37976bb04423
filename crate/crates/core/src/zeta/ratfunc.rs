//! Rational functions in `t = p^{-s}` with factored denominators of the
//! shape `prod (1 - t^N p^{-nu})`, kept exact end to end.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A denominator factor `1 - t^N p^{-nu}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenFactor {
    pub n_pow: u32,
    pub nu: u32,
}

/// Exact rational function in t with the factored denominator preserved
/// (poles are read off the factors, never found numerically).
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunctionT {
    p: u64,
    /// Ascending coefficients of the numerator polynomial.
    numerator: Vec<BigRational>,
    denominator: Vec<DenFactor>,
}

impl RationalFunctionT {
    pub fn new(p: u64, numerator: Vec<BigRational>, denominator: Vec<DenFactor>) -> Self {
        let mut rf = RationalFunctionT {
            p,
            numerator,
            denominator,
        };
        rf.trim();
        rf
    }

    pub fn zero(p: u64) -> Self {
        RationalFunctionT {
            p,
            numerator: Vec::new(),
            denominator: Vec::new(),
        }
    }

    fn trim(&mut self) {
        while self.numerator.last().is_some_and(|c| c.is_zero()) {
            self.numerator.pop();
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn numerator(&self) -> &[BigRational] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[DenFactor] {
        &self.denominator
    }

    pub fn numerator_degree(&self) -> Option<u32> {
        if self.numerator.is_empty() {
            None
        } else {
            Some(self.numerator.len() as u32 - 1)
        }
    }

    pub fn denominator_degree(&self) -> u32 {
        self.denominator.iter().map(|f| f.n_pow).sum()
    }

    /// `p^{-k}` as an exact rational.
    pub fn p_pow_neg(p: u64, k: u32) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(p).pow(k))
    }

    /// Evaluates the function at an exact t; the denominator factors must
    /// not vanish there.
    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut num = BigRational::zero();
        let mut tp = BigRational::one();
        for c in &self.numerator {
            num += c * &tp;
            tp *= t;
        }
        let mut den = BigRational::one();
        for f in &self.denominator {
            let tn = pow_rational(t, f.n_pow);
            den *= BigRational::one() - tn * Self::p_pow_neg(self.p, f.nu);
        }
        num / den
    }

    /// Value at `s = 0`, i.e. `t = 1`. Always defined: every factor is
    /// `1 - p^{-nu}` with `nu >= 1`.
    pub fn eval_at_one(&self) -> BigRational {
        self.eval(&BigRational::one())
    }

    /// Taylor coefficients `[t^0] .. [t^k]` of the power-series expansion at
    /// t = 0, exact.
    pub fn series(&self, k: u32) -> Vec<BigRational> {
        let len = k as usize + 1;
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, c) in self.numerator.iter().take(len).enumerate() {
            coeffs[i] = c.clone();
        }
        // Multiplying by 1/(1 - a t^N) is the prefix recurrence
        // c[i] += a * c[i - N].
        for f in &self.denominator {
            let a = Self::p_pow_neg(self.p, f.nu);
            let step = f.n_pow as usize;
            if step == 0 {
                continue;
            }
            for i in step..len {
                let add = &a * &coeffs[i - step];
                coeffs[i] += add;
            }
        }
        coeffs
    }

    /// Coefficient of `t^k` in the power series.
    pub fn coeff(&self, k: u32) -> BigRational {
        self.series(k).pop().expect("series has k+1 entries")
    }

    /// `sum_{j <= k}` of the series coefficients: the coefficient of `t^k`
    /// in `self / (1 - t)`.
    pub fn coeff_cumulative(&self, k: u32) -> BigRational {
        self.series(k).into_iter().sum()
    }
}

fn pow_rational(t: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= t;
    }
    acc
}

impl fmt::Display for RationalFunctionT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numerator.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        write!(f, "(")?;
        for (i, c) in self.numerator.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else if i == 1 {
                write!(f, "{c}*t")?;
            } else {
                write!(f, "{c}*t^{i}")?;
            }
        }
        write!(f, ")")?;
        for d in &self.denominator {
            if d.n_pow == 1 {
                write!(f, " / (1 - t/{}^{})", self.p, d.nu)?;
            } else {
                write!(f, " / (1 - t^{}/{}^{})", d.n_pow, self.p, d.nu)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn geometric_series() {
        // 1/(1 - t/5): coefficients (1/5)^k.
        let rf = RationalFunctionT::new(5, vec![rat(1, 1)], vec![DenFactor { n_pow: 1, nu: 1 }]);
        for k in 0..10u32 {
            assert_eq!(rf.coeff(k), rat(1, 5i64.pow(k)));
        }
        // Cumulative: (1 - a^(k+1)) / (1 - a) with a = 1/5.
        for k in 0..10u32 {
            let a = rat(1, 5);
            let expected = (BigRational::one() - pow_rational(&a, k + 1))
                / (BigRational::one() - a.clone());
            assert_eq!(rf.coeff_cumulative(k), expected);
        }
    }

    #[test]
    fn even_series() {
        // (1 - 1/5)/(1 - t^2/5): coefficient of t^4 is (4/5)(1/25).
        let rf = RationalFunctionT::new(5, vec![rat(4, 5)], vec![DenFactor { n_pow: 2, nu: 1 }]);
        assert_eq!(rf.coeff(4), rat(4, 125));
        assert_eq!(rf.coeff(3), rat(0, 1));
        assert_eq!(rf.coeff(0), rf.eval(&BigRational::zero()));
    }

    #[test]
    fn eval_at_one() {
        let rf = RationalFunctionT::new(5, vec![rat(4, 5)], vec![DenFactor { n_pow: 1, nu: 1 }]);
        assert_eq!(rf.eval_at_one(), rat(1, 1));
    }
}
