//! Contact-set point counts: the strata `ord_p f = m-1` and `ord_p f >= m`.
//!
//! Counts can be read off a histogram, or computed by a solution-lifting
//! tree that enumerates `f = 0 mod p^j` level by level. The tree never
//! touches non-vanishing points, so it handles levels whose boxes are far
//! beyond any enumeration budget; both routes agree exactly wherever both
//! run.

use num_bigint::BigInt;

use crate::arith::{checked_pow_u128, ord_and_ac_u128, Polynomial, ResidueBox};
use crate::engine::histogram::ValueHistogram;
use crate::engine::reduce::FastPoly;
use crate::engine::{Budget, ExecMode};
use crate::error::{Error, Result};

/// Counts of the two deepest valuation strata on a box mod `p^m`: the
/// contact set `ord_p f >= m` and the shell `ord_p f = m-1` just above it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactCounts {
    pub box_label: String,
    /// `#{x in box : ord_p f(x) = m-1}`.
    pub ord_eq_m_minus_1: u128,
    /// `#{x in box : ord_p f(x) >= m}`.
    pub ord_ge_m: u128,
}

/// Reads the two strata counts off a histogram.
pub fn contact_counts(hist: &ValueHistogram) -> ContactCounts {
    let p = hist.level().p();
    let m = hist.level().m();
    let mut eq = 0u128;
    for (&r, &c) in hist.counts() {
        if ord_and_ac_u128(r, p, m).0 == m - 1 {
            eq += c;
        }
    }
    ContactCounts {
        box_label: hist.residue_box().label(),
        ord_eq_m_minus_1: eq,
        ord_ge_m: hist.count(0),
    }
}

/// `N_j = #{x in box mod p^j : f(x) = 0 mod p^j}` for `j = 1..=m_max`,
/// computed by lifting solutions digit by digit.
///
/// Work is proportional to `sum_j N_j * p^n` after the shifted box is reduced
/// through its coefficient content, so deep levels stay cheap whenever the
/// solution sets are thin. The budget bounds the per-level expansion.
pub fn contact_zero_counts(
    f: &Polynomial,
    p: u64,
    m_max: u32,
    box_: &ResidueBox,
    budget: Budget,
    mode: ExecMode,
) -> Result<Vec<u128>> {
    f.require_non_constant()?;
    let n = f.nvars();
    if checked_pow_u128(p as u128, m_max)
        .map(|q| q > u64::MAX as u128)
        .unwrap_or(true)
    {
        return Err(Error::RangeExceeded("p^m exceeds 64 bits".into()));
    }

    match box_ {
        ResidueBox::Full => {
            let g = f.clone();
            let e = g.min_coeff_valuation(p).unwrap_or(m_max).min(m_max);
            let h = g.divide_coeffs_by_pow(p, e);
            // N_j = p^(n e) T_{j-e} with T the tree counts for h; levels
            // j <= e hold automatically.
            let t = lift_tree_counts(&h, p, m_max.saturating_sub(e), n, None, budget, mode)?;
            assemble_counts(p, n as u32, m_max, e, m_max, &t)
        }
        ResidueBox::Shifted { y } => {
            let g = f.shift_scale(y, &BigInt::from(p))?;
            let e = g.min_coeff_valuation(p).unwrap_or(m_max).min(m_max);
            let h = g.divide_coeffs_by_pow(p, e);
            if e >= 1 {
                let t = lift_tree_counts(&h, p, m_max.saturating_sub(e), n, None, budget, mode)?;
                // Box at level j has p^((j-1)n) points; the h-condition at
                // level j - e leaves multiplicity p^((e-1)n).
                assemble_counts(p, n as u32, m_max, e, m_max - 1, &t)
            } else {
                // Unit content: f(y) decides level 1 outright, then the tree
                // runs on g with the condition one level ahead of the
                // coordinates.
                let t = lift_tree_counts(&h, p, m_max, n, Some(()), budget, mode)?;
                Ok(t)
            }
        }
    }
}

/// Stitches tree counts `T_i` for the content-free part back into box-level
/// counts: levels `j <= e` are unconstrained, above that each solution of the
/// `h`-condition carries `p^(free * n)` box points.
fn assemble_counts(
    p: u64,
    n: u32,
    m_max: u32,
    e: u32,
    box_levels_at_m: u32,
    t: &[u128],
) -> Result<Vec<u128>> {
    let mut out = Vec::with_capacity(m_max as usize);
    for j in 1..=m_max {
        let box_levels = box_levels_at_m - (m_max - j); // j or j-1
        if j <= e {
            out.push(
                checked_pow_u128(p as u128, box_levels * n)
                    .ok_or_else(|| Error::RangeExceeded("count exceeds 128 bits".into()))?,
            );
        } else {
            let ti = t[(j - e - 1) as usize];
            let free = box_levels - (j - e);
            let mult = checked_pow_u128(p as u128, free * n)
                .ok_or_else(|| Error::RangeExceeded("count exceeds 128 bits".into()))?;
            out.push(ti.checked_mul(mult).ok_or_else(|| {
                Error::RangeExceeded("count exceeds 128 bits".into())
            })?);
        }
    }
    Ok(out)
}

/// Tree counts `T_i = #{u mod p^i : h(u) = 0 mod p^i}` for `i = 1..=depth`.
///
/// With `offset_condition` set (shifted box, unit content), coordinates lag
/// the condition by one digit: `T_i = #{u mod p^(i-1) : h(u) = 0 mod p^i}`,
/// rooted at the single empty point.
fn lift_tree_counts(
    h: &Polynomial,
    p: u64,
    depth: u32,
    n: usize,
    offset_condition: Option<()>,
    budget: Budget,
    mode: ExecMode,
) -> Result<Vec<u128>> {
    if depth == 0 {
        return Ok(Vec::new());
    }
    let offset = offset_condition.is_some();
    let mut counts = Vec::with_capacity(depth as usize);

    // Frontier at condition level i: points u (mod p^(i) or p^(i-1)).
    let mut frontier: Vec<Vec<u64>> = if offset {
        let q1 = FastPoly::reduce(h, p)?;
        if q1.eval(&vec![0; n]) == 0 {
            vec![vec![0; n]]
        } else {
            Vec::new()
        }
    } else {
        let q1 = FastPoly::reduce(h, p)?;
        if (p as u128).pow(n as u32) > budget.0 {
            return Err(Error::BudgetExceeded {
                required: (p as u128).pow(n as u32).to_string(),
                allowed: budget.0.to_string(),
            });
        }
        enumerate_roots_mod_p(&q1, n, p)
    };
    counts.push(frontier.len() as u128);

    for i in 2..=depth {
        let cond_q = p.pow(i);
        let step = if offset { p.pow(i - 2) } else { p.pow(i - 1) };
        let poly = FastPoly::reduce(h, cond_q)?;
        let required = frontier.len() as u128 * (p as u128).pow(n as u32);
        if required > budget.0 {
            return Err(Error::BudgetExceeded {
                required: required.to_string(),
                allowed: budget.0.to_string(),
            });
        }
        let last_level = i == depth;
        if last_level {
            counts.push(expand_count(&frontier, &poly, p, step, mode));
        } else {
            frontier = expand_collect(&frontier, &poly, p, step, mode);
            counts.push(frontier.len() as u128);
        }
    }
    Ok(counts)
}

fn enumerate_roots_mod_p(poly: &FastPoly, n: usize, p: u64) -> Vec<Vec<u64>> {
    let total = (p as u128).pow(n as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let mut pt = Vec::with_capacity(n);
        for _ in 0..n {
            pt.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        if poly.eval(&pt) == 0 {
            out.push(pt);
        }
    }
    out
}

fn lifts_of(point: &[u64], p: u64, step: u64) -> impl Iterator<Item = Vec<u64>> + '_ {
    let n = point.len();
    let total = (p as u128).pow(n as u32);
    (0..total).map(move |idx| {
        let mut rest = idx;
        let mut lifted = point.to_vec();
        for c in lifted.iter_mut() {
            *c += (rest % p as u128) as u64 * step;
            rest /= p as u128;
        }
        lifted
    })
}

fn expand_collect(
    frontier: &[Vec<u64>],
    poly: &FastPoly,
    p: u64,
    step: u64,
    mode: ExecMode,
) -> Vec<Vec<u64>> {
    let expand = |pt: &Vec<u64>| -> Vec<Vec<u64>> {
        lifts_of(pt, p, step)
            .filter(|cand| poly.eval(cand) == 0)
            .collect()
    };
    let mut next: Vec<Vec<u64>> = match mode {
        ExecMode::Sequential => frontier.iter().flat_map(expand).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            frontier.par_iter().flat_map_iter(expand).collect()
        }
    };
    // Deterministic frontier regardless of the parallel split.
    next.sort_unstable();
    next
}

fn expand_count(frontier: &[Vec<u64>], poly: &FastPoly, p: u64, step: u64, mode: ExecMode) -> u128 {
    let count_one = |pt: &Vec<u64>| -> u128 {
        lifts_of(pt, p, step)
            .filter(|cand| poly.eval(cand) == 0)
            .count() as u128
    };
    match mode {
        ExecMode::Sequential => frontier.iter().map(count_one).sum(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            frontier.par_iter().map(count_one).sum()
        }
    }
}
