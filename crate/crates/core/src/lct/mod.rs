//! Log-canonical thresholds: the exact resolution route (min nu/N over
//! components through the origin fiber) and the empirical jet route
//! (contact-locus point counts across primes, codimension by log-log slope).

use num_rational::BigRational;

use crate::arith::{Polynomial, ResidueBox};
use crate::engine::{contact_zero_counts, Budget, ExecMode};
use crate::error::{Error, Result};
use crate::zeta::ResolutionData;

/// Exact lct from resolution data: `min nu_i / N_i` over the components the
/// fiber filter keeps (`meets_origin` in the data file).
pub fn lct_from_resolution(data: &ResolutionData) -> Result<BigRational> {
    data.validate()?;
    data.components
        .iter()
        .filter(|c| c.meets_origin.unwrap_or(false))
        .map(|c| BigRational::new(c.nu.into(), c.n_mult.into()))
        .min()
        .ok_or(Error::EmptyFiberFilter)
}

/// `#{x in box mod p^m : f(x) = 0 mod p^m}`, by solution lifting.
///
/// This agrees with the `ord >= m` stratum of the value histogram
/// everywhere both run; the lifting tree also covers levels whose boxes are
/// far beyond any enumeration budget.
pub fn contact_count(
    f: &Polynomial,
    p: u64,
    m: u32,
    box_: &ResidueBox,
    budget: Budget,
    mode: ExecMode,
) -> Result<u128> {
    Ok(*contact_zero_counts(f, p, m, box_, budget, mode)?
        .last()
        .expect("m >= 1"))
}

/// Jet-level estimate at one truncation level m.
#[derive(Debug, Clone)]
pub struct JetLevel {
    pub m: u32,
    /// (p, exact count) pairs used in the fit.
    pub counts: Vec<(u64, u128)>,
    /// Least-squares slope of `ln count` against `ln p`.
    pub dim_fit: f64,
    /// Root-mean-square residual of the fit, for judging quality.
    pub residual: f64,
    /// `mn - dim_fit`, the codimension in the full jet space `K^{nm}`.
    pub codim: f64,
    /// `codim / m`.
    pub ratio: f64,
}

/// The jet-route lct estimate.
#[derive(Debug, Clone)]
pub struct LctEstimate {
    pub per_m: Vec<JetLevel>,
    /// `min_m codim/m` over the computed range.
    pub inf_value: f64,
    /// The m attaining the minimum.
    pub argmin_m: u32,
    /// Set when the minimizing m equals m_max: the infimum may not be
    /// attained in range.
    pub truncated_at_boundary: bool,
    /// Exact value from resolution data, when one was supplied.
    pub resolution_value: Option<BigRational>,
}

/// Estimates `c_0(f)` (or `c(f)` on the full box) as
/// `inf_m codim Cont^{>= m} / m`, with the codimension fitted from exact
/// contact counts across at least two primes.
pub fn lct_jet_estimate(
    f: &Polynomial,
    primes: &[u64],
    m_max: u32,
    box_: &ResidueBox,
    budget: Budget,
    mode: ExecMode,
) -> Result<LctEstimate> {
    if primes.len() < 2 {
        return Err(Error::Underdetermined {
            what: "primes for the dimension fit".into(),
            min: 2,
            got: primes.len(),
        });
    }
    if m_max < 1 {
        return Err(Error::LevelTooSmall { min: 1, got: m_max });
    }
    f.require_non_constant()?;
    let n = f.nvars() as f64;

    let mut by_prime = Vec::with_capacity(primes.len());
    for &p in primes {
        by_prime.push((p, contact_zero_counts(f, p, m_max, box_, budget, mode)?));
    }

    let mut per_m = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let counts: Vec<(u64, u128)> = by_prime
            .iter()
            .map(|(p, cs)| (*p, cs[(m - 1) as usize]))
            .collect();
        let pts: Vec<(f64, f64)> = counts
            .iter()
            .filter(|(_, c)| *c > 0)
            .map(|(p, c)| ((*p as f64).ln(), (*c as f64).ln()))
            .collect();
        let (dim_fit, residual) = if pts.len() < 2 {
            // Empty contact locus at this level: maximal codimension.
            (0.0, 0.0)
        } else {
            slope_fit(&pts)
        };
        let codim = (m as f64) * n - dim_fit;
        per_m.push(JetLevel {
            m,
            counts,
            dim_fit,
            residual,
            codim,
            ratio: codim / m as f64,
        });
    }

    let best = per_m
        .iter()
        .min_by(|a, b| a.ratio.partial_cmp(&b.ratio).expect("finite ratios"))
        .expect("m_max >= 1");
    Ok(LctEstimate {
        inf_value: best.ratio,
        argmin_m: best.m,
        truncated_at_boundary: best.m == m_max,
        resolution_value: None,
        per_m,
    })
}

/// Least-squares line through (x, y): returns (slope, rms residual).
pub(crate) fn slope_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let xbar = pts.iter().map(|(x, _)| x).sum::<f64>() / n;
    let ybar = pts.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|(x, _)| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = ybar - slope * xbar;
    let rss: f64 = pts
        .iter()
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    (slope, (rss / n).sqrt())
}

/// The decay exponent of the main bounds: `sigma = min(lct, 1/2)`.
pub fn sigma_of(lct_value: f64) -> f64 {
    lct_value.min(0.5)
}

/// The CSV table for a jet estimate, columns frozen:
/// `m,p,count,log_p_count,dim_fit,codim,codim_over_m`.
pub fn jet_estimate_csv(est: &LctEstimate) -> String {
    let mut out = String::from("m,p,count,log_p_count,dim_fit,codim,codim_over_m\n");
    for level in &est.per_m {
        for (p, c) in &level.counts {
            let logp = if *c > 0 {
                (*c as f64).ln() / (*p as f64).ln()
            } else {
                f64::NEG_INFINITY
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                level.m,
                p,
                c,
                fmt_f64(logp),
                fmt_f64(level.dim_fit),
                fmt_f64(level.codim),
                fmt_f64(level.ratio)
            ));
        }
    }
    out
}

pub(crate) fn fmt_f64(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.6}")
    }
}
