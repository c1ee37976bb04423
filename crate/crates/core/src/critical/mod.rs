//! Critical points and values of f mod p, the genericity condition checks,
//! and the splitting of the full-box sum by critical value.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::arith::{checked_pow_u128, PadicLevel, Polynomial};
use crate::engine::ValueHistogram;
use crate::error::{Error, Result};

/// Critical data of `f mod p`, plus the three genericity conditions checked
/// against a supplied list of rational critical values:
/// (1) every supplied value is a p-adic unit, (2) distinct supplied values
/// stay distinct mod p, (3) every critical point of `f mod p` takes its
/// value in the supplied set.
#[derive(Debug, Clone)]
pub struct CriticalReport {
    pub p: u64,
    pub crit_points_mod_p: Vec<Vec<u64>>,
    /// Distinct critical values, sorted.
    pub crit_values_mod_p: Vec<u64>,
    pub rational_critical_values: Option<Vec<BigInt>>,
    /// Set when rational critical values were supplied.
    pub condition_checks: Option<[bool; 3]>,
}

/// Enumerates `F_p^n`, collects the points where every partial vanishes and
/// their values, and evaluates the condition checks when a rational
/// critical-value list is supplied.
pub fn critical_data_mod_p(
    f: &Polynomial,
    p: u64,
    rational_critical_values: Option<&[BigInt]>,
    budget: crate::engine::Budget,
) -> Result<CriticalReport> {
    f.require_non_constant()?;
    let n = f.nvars();
    let total = checked_pow_u128(p as u128, n as u32)
        .ok_or_else(|| Error::RangeExceeded("p^n exceeds 128 bits".into()))?;
    if total > budget.0 {
        return Err(Error::BudgetExceeded {
            required: total.to_string(),
            allowed: budget.0.to_string(),
        });
    }

    let level = PadicLevel::new(p, 1)?;
    let partials: Vec<Polynomial> = (0..n).map(|j| f.partial(j)).collect();

    let mut crit_points = Vec::new();
    let mut crit_values = std::collections::BTreeSet::new();
    for idx in 0..total {
        let mut rest = idx;
        let mut pt_u = Vec::with_capacity(n);
        let mut pt = Vec::with_capacity(n);
        for _ in 0..n {
            let c = (rest % p as u128) as u64;
            pt_u.push(c);
            pt.push(BigInt::from(c));
            rest /= p as u128;
        }
        let critical = partials
            .iter()
            .all(|g| g.eval_mod(&pt, &level).map(|v| v.is_zero()).unwrap_or(false));
        if critical {
            let value = f.eval_mod(&pt, &level)?;
            crit_values.insert(u64::try_from(&value).expect("residue below p"));
            crit_points.push(pt_u);
        }
    }
    let crit_values_mod_p: Vec<u64> = crit_values.into_iter().collect();

    let condition_checks = rational_critical_values.map(|zs| {
        let reduced: Vec<u64> = zs.iter().map(|z| reduce_mod(z, p)).collect();
        let cond1 = reduced.iter().all(|&r| r != 0);
        let mut cond2 = true;
        for i in 0..reduced.len() {
            for j in i + 1..reduced.len() {
                if reduced[i] == reduced[j] {
                    cond2 = false;
                }
            }
        }
        let cond3 = crit_values_mod_p.iter().all(|v| reduced.contains(v));
        [cond1, cond2, cond3]
    });

    Ok(CriticalReport {
        p,
        crit_points_mod_p: crit_points,
        crit_values_mod_p,
        rational_critical_values: rational_critical_values.map(|z| z.to_vec()),
        condition_checks,
    })
}

fn reduce_mod(z: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut r = z % &pb;
    if r.is_negative() {
        r += &pb;
    }
    u64::try_from(&r).expect("residue below p")
}

/// Searches the integer box `|coordinate| <= bound` for points with a
/// vanishing exact gradient, returning the distinct values of f there.
///
/// Desk-scale substitute for elimination theory: it finds every rational
/// critical value whose critical point lies in the box.
pub fn find_rational_critical_values(
    f: &Polynomial,
    bound: u64,
    budget: crate::engine::Budget,
) -> Result<Vec<BigInt>> {
    f.require_non_constant()?;
    let n = f.nvars();
    let side = 2 * bound + 1;
    let total = checked_pow_u128(side as u128, n as u32)
        .ok_or_else(|| Error::RangeExceeded("search box exceeds 128 bits".into()))?;
    if total > budget.0 {
        return Err(Error::BudgetExceeded {
            required: total.to_string(),
            allowed: budget.0.to_string(),
        });
    }
    let partials: Vec<Polynomial> = (0..n).map(|j| f.partial(j)).collect();
    let mut values = std::collections::BTreeSet::new();
    for idx in 0..total {
        let mut rest = idx;
        let mut pt = Vec::with_capacity(n);
        for _ in 0..n {
            let c = (rest % side as u128) as i64 - bound as i64;
            pt.push(BigInt::from(c));
            rest /= side as u128;
        }
        if partials
            .iter()
            .all(|g| g.eval(&pt).map(|v| v.is_zero()).unwrap_or(false))
        {
            values.insert(f.eval(&pt)?);
        }
    }
    Ok(values.into_iter().collect())
}

/// One part of the critical-value splitting of a full-box sum.
#[derive(Debug, Clone)]
pub struct CriticalPart {
    pub z: BigInt,
    /// `p^(-mn) sum over x with f(x) = z mod p` of `e(f(x)/p^m)`.
    pub value: Complex64,
}

/// The critical-value partition of `E_{m,p}(f)`.
#[derive(Debug, Clone)]
pub struct CriticalSplit {
    pub parts: Vec<CriticalPart>,
    /// The subsum over points whose value avoids every critical value mod p.
    pub remainder: Complex64,
    pub total: Complex64,
}

/// Splits the full-box sum by which critical value `f(x)` reduces to mod p.
///
/// The parts and remainder always add up to the total (they partition one
/// histogram); the interesting empirical fact is the remainder vanishing for
/// `m >= 2` at good primes.
pub fn split_exp_sum_by_critical_values(
    hist: &ValueHistogram,
    critical_values: &[BigInt],
) -> Result<CriticalSplit> {
    let m = hist.level().m();
    if m < 2 {
        return Err(Error::LevelTooSmall { min: 2, got: m });
    }
    if !hist.residue_box().is_full() {
        return Err(Error::InvalidArgument(
            "critical-value splitting is defined on the full box".into(),
        ));
    }
    let p = hist.level().p();
    let reduced: Vec<u64> = critical_values.iter().map(|z| reduce_mod(z, p)).collect();
    for i in 0..reduced.len() {
        for j in i + 1..reduced.len() {
            if reduced[i] == reduced[j] {
                return Err(Error::CongruentCriticalValues {
                    a: critical_values[i].to_string(),
                    b: critical_values[j].to_string(),
                    p,
                });
            }
        }
    }

    let q = hist.level().modulus_u128().expect("checked at build") as f64;
    let norm = (p as f64).powi((m * hist.nvars() as u32) as i32);
    let mut part_sums = vec![Complex64::new(0.0, 0.0); reduced.len()];
    let mut remainder = Complex64::new(0.0, 0.0);
    for (&r, &c) in hist.counts() {
        let phase = crate::chars::unit_phase(r as f64 / q) * c as f64;
        let class = (r % p as u128) as u64;
        match reduced.iter().position(|&z| z == class) {
            Some(i) => part_sums[i] += phase,
            None => remainder += phase,
        }
    }
    let parts: Vec<CriticalPart> = critical_values
        .iter()
        .zip(part_sums)
        .map(|(z, s)| CriticalPart {
            z: z.clone(),
            value: s / norm,
        })
        .collect();
    let remainder = remainder / norm;
    let total = parts.iter().map(|p| p.value).sum::<Complex64>() + remainder;
    Ok(CriticalSplit {
        parts,
        remainder,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_polynomial, ResidueBox};
    use crate::engine::{build_histogram, exp_sum, Budget};

    const TOL: f64 = 1e-9;

    #[test]
    fn cubic_critical_data() {
        let f = parse_polynomial("x^3 - 3*x", 1).unwrap();
        let r = critical_data_mod_p(&f, 7, None, Budget::default()).unwrap();
        assert_eq!(r.crit_points_mod_p, vec![vec![1], vec![6]]);
        assert_eq!(r.crit_values_mod_p, vec![2, 5]);
    }

    #[test]
    fn linear_has_no_critical_points() {
        let f = parse_polynomial("x", 1).unwrap();
        let r = critical_data_mod_p(&f, 7, Some(&[]), Budget::default()).unwrap();
        assert!(r.crit_points_mod_p.is_empty());
        assert_eq!(r.condition_checks, Some([true, true, true]));
    }

    #[test]
    fn square_fails_condition_one() {
        let f = parse_polynomial("x^2", 1).unwrap();
        let zs = [BigInt::from(0)];
        let r = critical_data_mod_p(&f, 5, Some(&zs), Budget::default()).unwrap();
        let checks = r.condition_checks.unwrap();
        assert!(!checks[0]);
        assert!(checks[2]); // the only critical value 0 is in the list
    }

    #[test]
    fn integer_search_finds_cubic_values() {
        let f = parse_polynomial("x^3 - 3*x", 1).unwrap();
        let vs = find_rational_critical_values(&f, 5, Budget::default()).unwrap();
        assert_eq!(vs, vec![BigInt::from(-2), BigInt::from(2)]);
    }

    #[test]
    fn split_identity_and_remainder() {
        let f = parse_polynomial("x^3 - 3*x", 1).unwrap();
        let zs = [BigInt::from(-2), BigInt::from(2)];
        for p in [7u64, 11, 13] {
            for m in [2u32, 3] {
                let level = PadicLevel::new(p, m).unwrap();
                let hist =
                    build_histogram(&f, &level, &ResidueBox::Full, Budget::default()).unwrap();
                let split = split_exp_sum_by_critical_values(&hist, &zs).unwrap();
                let direct = exp_sum(&hist);
                assert!((split.total - direct.value).norm() < TOL, "p={p} m={m}");
                assert!(
                    split.remainder.norm() < TOL,
                    "remainder nonzero at p={p} m={m}: {}",
                    split.remainder.norm()
                );
            }
        }
    }

    #[test]
    fn split_with_no_critical_values_is_all_remainder() {
        let f = parse_polynomial("x", 1).unwrap();
        let level = PadicLevel::new(5, 2).unwrap();
        let hist = build_histogram(&f, &level, &ResidueBox::Full, Budget::default()).unwrap();
        let split = split_exp_sum_by_critical_values(&hist, &[]).unwrap();
        assert!(split.parts.is_empty());
        let direct = exp_sum(&hist);
        assert!((split.remainder - direct.value).norm() < TOL);
    }

    #[test]
    fn congruent_values_rejected() {
        let f = parse_polynomial("x^3 - 3*x", 1).unwrap();
        let level = PadicLevel::new(2, 2).unwrap();
        let hist = build_histogram(&f, &level, &ResidueBox::Full, Budget::default()).unwrap();
        let zs = [BigInt::from(-2), BigInt::from(2)];
        assert!(matches!(
            split_exp_sum_by_critical_values(&hist, &zs),
            Err(Error::CongruentCriticalValues { .. })
        ));
    }
}
