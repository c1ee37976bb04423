//! Igusa local zeta functions from resolution numerical data, coefficient
//! extraction two independent ways, the pole ledger, and reconstruction of
//! exponential sums from zeta coefficients.
//!
//! The two coefficient routes are the module's double-entry bookkeeping:
//! `coeff(k)` of the assembled rational function must equal the direct
//! lattice-point sum over `J_{I,k+1}` as exact rationals, always.

mod data;
mod ratfunc;

pub use data::{Affine, CharCount, Component, ResolutionData, Stratum};
pub use ratfunc::{DenFactor, RationalFunctionT};

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chars::characters_of_exact_order;
use crate::error::{Error, Result};

/// Builds `Z_Phi(p, chi, s, f)` for the character labeled `(order, index)`
/// as an exact rational function in `t = p^{-s}`:
///
/// `p^{-n} sum_{I : d | N_i} c_{I,chi} prod_{i in I} (p-1) t^{N_i} p^{-nu_i}
///  / (1 - t^{N_i} p^{-nu_i})`.
pub fn denef_zeta(
    data: &ResolutionData,
    p: u64,
    order: u64,
    index: u64,
) -> Result<RationalFunctionT> {
    data.validate()?;
    let strata = admitted_strata(data, p, order, index)?;

    // Components appearing in some admitted stratum with a nonzero count at p.
    let mut used: BTreeSet<u32> = BTreeSet::new();
    for (s, c) in &strata {
        if !c.is_zero() {
            used.extend(s.ids.iter().copied());
        }
    }
    let factors: Vec<(u32, DenFactor)> = used
        .iter()
        .map(|id| {
            let comp = data.component(*id).expect("validated");
            (
                *id,
                DenFactor {
                    n_pow: comp.n_mult,
                    nu: comp.nu,
                },
            )
        })
        .collect();

    let pn = RationalFunctionT::p_pow_neg(p, data.n);
    let pm1 = BigRational::from(BigInt::from(p - 1));
    let mut numerator: Vec<BigRational> = Vec::new();
    for (s, c) in &strata {
        if c.is_zero() {
            continue;
        }
        // c_I (p-1)^{#I} t^{sum N_i} p^{-sum nu_i} times the complementary
        // denominator factors.
        let mut piece = vec![BigRational::from(c.clone()) * &pn];
        for id in &s.ids {
            let comp = data.component(*id).expect("validated");
            let mut shifted = vec![BigRational::zero(); comp.n_mult as usize + 1];
            shifted[comp.n_mult as usize] = &pm1 * RationalFunctionT::p_pow_neg(p, comp.nu);
            piece = poly_mul(&piece, &shifted);
        }
        let in_stratum: BTreeSet<u32> = s.ids.iter().copied().collect();
        for (id, f) in &factors {
            if !in_stratum.contains(id) {
                let mut lin = vec![BigRational::zero(); f.n_pow as usize + 1];
                lin[0] = BigRational::one();
                lin[f.n_pow as usize] = -RationalFunctionT::p_pow_neg(p, f.nu);
                piece = poly_mul(&piece, &lin);
            }
        }
        poly_add_assign(&mut numerator, &piece);
    }

    Ok(RationalFunctionT::new(
        p,
        numerator,
        factors.into_iter().map(|(_, f)| f).collect(),
    ))
}

/// The strata admitted for a character of exact order `order` (every `N_i`
/// on the stratum divisible by it), with counts evaluated at p.
///
/// Admitted strata must carry a count entry for the label; the trivial
/// character additionally requires its counts to be non-negative point
/// counts.
fn admitted_strata(
    data: &ResolutionData,
    p: u64,
    order: u64,
    index: u64,
) -> Result<Vec<(&Stratum, BigInt)>> {
    let mut out = Vec::new();
    for s in &data.strata {
        let admitted = s.ids.iter().all(|id| {
            let comp = data.component(*id).expect("validated");
            comp.n_mult as u64 % order == 0
        });
        if !admitted {
            continue;
        }
        let count = s
            .count_for(order, index)
            .ok_or(Error::MissingCharacterData { order, index })?
            .eval(p);
        if order == 1 && count.is_negative() {
            return Err(Error::ResolutionData(format!(
                "stratum I={:?}: trivial-character count {} is negative at p={p} \
                 (it must be a point count)",
                s.ids, count
            )));
        }
        out.push((s, count));
    }
    Ok(out)
}

/// Coefficient of `t^k` computed directly by bounded lattice-point
/// enumeration over `J_{I,k+1} = {(a_i) : sum N_i (a_i + 1) = k}`:
///
/// `p^{-n} sum_I c_I (p-1)^{#I} sum_{J_{I,k+1}} p^{-sum nu_i (a_i + 1)}`.
pub fn coeff_lattice(
    data: &ResolutionData,
    p: u64,
    order: u64,
    index: u64,
    k: u32,
) -> Result<BigRational> {
    lattice_sum(data, p, order, index, k, false)
}

/// Cumulative variant over `J'_{I,k+1} = {(a_i) : sum N_i (a_i + 1) <= k}`,
/// realizing the coefficient of `t^k` in `Z / (1 - t)`.
pub fn coeff_truncated_cumulative(
    data: &ResolutionData,
    p: u64,
    order: u64,
    index: u64,
    k: u32,
) -> Result<BigRational> {
    lattice_sum(data, p, order, index, k, true)
}

fn lattice_sum(
    data: &ResolutionData,
    p: u64,
    order: u64,
    index: u64,
    k: u32,
    cumulative: bool,
) -> Result<BigRational> {
    data.validate()?;
    let strata = admitted_strata(data, p, order, index)?;
    let pn = RationalFunctionT::p_pow_neg(p, data.n);
    let pm1 = BigRational::from(BigInt::from(p - 1));
    let mut total = BigRational::zero();
    for (s, c) in &strata {
        if c.is_zero() {
            continue;
        }
        let comps: Vec<(u32, u32)> = s
            .ids
            .iter()
            .map(|id| {
                let comp = data.component(*id).expect("validated");
                (comp.n_mult, comp.nu)
            })
            .collect();
        let inner = lattice_rec(&comps, p, k, cumulative);
        if inner.is_zero() {
            continue;
        }
        let mut weight = BigRational::from(c.clone()) * &pn;
        for _ in 0..comps.len() {
            weight *= &pm1;
        }
        total += weight * inner;
    }
    Ok(total)
}

/// `sum over (a_i) in N^len with sum N_i (a_i+1) = budget (or <= budget,
/// cumulative) of p^{-sum nu_i (a_i+1)}`.
fn lattice_rec(comps: &[(u32, u32)], p: u64, budget: u32, cumulative: bool) -> BigRational {
    match comps.split_first() {
        None => {
            if cumulative || budget == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }
        Some((&(n_mult, nu), rest)) => {
            let mut acc = BigRational::zero();
            let mut a = 0u32;
            loop {
                let spend = n_mult * (a + 1);
                if spend > budget {
                    break;
                }
                let tail = lattice_rec(rest, p, budget - spend, cumulative);
                if !tail.is_zero() {
                    acc += RationalFunctionT::p_pow_neg(p, nu * (a + 1)) * tail;
                }
                a += 1;
            }
            acc
        }
    }
}

/// A candidate pole `Re(s) = lambda` with its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleEntry {
    pub lambda: BigRational,
    pub multiplicity: u32,
}

/// Candidate poles read off the factored denominator: the ratios `-nu/N`
/// over components appearing in nonzero strata, plus the `lambda = -1`
/// candidate contributed by the `1/(1-t)` kernel of the reconstruction
/// formula. Sorted descending (shallowest decay first).
pub fn pole_ledger(data: &ResolutionData, p: u64) -> Result<Vec<PoleEntry>> {
    data.validate()?;
    let mut mult: std::collections::BTreeMap<BigRational, u32> = std::collections::BTreeMap::new();
    for s in &data.strata {
        let nonzero = s.counts.iter().any(|c| !c.eval(p).is_zero());
        if !nonzero || s.ids.is_empty() {
            continue;
        }
        let mut per_stratum: std::collections::BTreeMap<BigRational, u32> =
            std::collections::BTreeMap::new();
        for id in &s.ids {
            let comp = data.component(*id).expect("validated");
            let ratio = -BigRational::new(BigInt::from(comp.nu), BigInt::from(comp.n_mult));
            *per_stratum.entry(ratio).or_insert(0) += 1;
        }
        for (ratio, count) in per_stratum {
            let entry = mult.entry(ratio).or_insert(0);
            *entry = (*entry).max(count);
        }
    }
    // The (1-t) kernel factor contributes lambda = -1.
    let kernel = -BigRational::one();
    let entry = mult.entry(kernel).or_insert(0);
    *entry = (*entry).max(1);

    Ok(mult
        .into_iter()
        .rev()
        .map(|(lambda, multiplicity)| PoleEntry {
            lambda,
            multiplicity,
        })
        .collect())
}

/// One character's contribution to a reconstruction, for reporting.
#[derive(Debug, Clone)]
pub struct CharTerm {
    pub order: u64,
    pub index: u64,
    pub gauss: Complex64,
    pub chi_u: Complex64,
    pub coeff: BigRational,
}

/// A reconstructed sum value `E_Phi(u p^{-m})` with its three-term breakdown.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub value: Complex64,
    /// `Z(p, chi_triv, 0, f)`, i.e. the zeta value at t = 1.
    pub zeta_at_zero_s: BigRational,
    /// `-Coeff_{t^(m-1)}(Z)/(p-1) - Coeff_{t^(m-1)}(Z/(1-t))`, the expanded
    /// `(t-q)/((q-1)(1-t))` kernel.
    pub kernel_term: BigRational,
    pub char_terms: Vec<CharTerm>,
}

/// Evaluates the three-term formula for `E_Phi(u p^{-m})` from the zeta
/// data: zeta at `s = 0`, the expanded kernel coefficient, and the
/// conductor-1 Gauss-sum twist for every required nontrivial order.
pub fn reconstruct_exp_sum(
    data: &ResolutionData,
    p: u64,
    m: u32,
    u: u64,
) -> Result<Reconstruction> {
    data.validate()?;
    if !data.good_reduction_regime {
        return Err(Error::NotGoodReduction);
    }
    if m < 2 {
        return Err(Error::LevelTooSmall { min: 2, got: m });
    }
    if u % p == 0 {
        return Err(Error::InvalidArgument(format!(
            "u = {u} is not a unit mod {p}"
        )));
    }

    let z_triv = denef_zeta(data, p, 1, 0)?;
    let zeta_at_zero_s = z_triv.eval_at_one();
    // (t - p)/((p-1)(1-t)) = -1/(p-1) - 1/(1-t).
    let series = z_triv.series(m - 1);
    let coeff_m1 = series.last().expect("nonempty").clone();
    let cumulative: BigRational = series.into_iter().sum();
    let kernel_term = -&coeff_m1 / BigRational::from(BigInt::from(p - 1)) - cumulative;

    let mut char_terms = Vec::new();
    let mut char_sum = Complex64::new(0.0, 0.0);
    for d in data.required_orders() {
        if (p - 1) % d != 0 {
            // No character of this order exists mod p.
            continue;
        }
        for chi in characters_of_exact_order(p, d)? {
            let z_chi = denef_zeta(data, p, d, chi.index())?;
            let coeff = z_chi.coeff(m - 1);
            let gauss = chi.inverse().gauss_sum();
            let chi_u = chi.value(u % p);
            char_sum += gauss * chi_u * rational_to_f64(&coeff);
            char_terms.push(CharTerm {
                order: d,
                index: chi.index(),
                gauss,
                chi_u,
                coeff,
            });
        }
    }

    let value = Complex64::new(
        rational_to_f64(&zeta_at_zero_s) + rational_to_f64(&kernel_term),
        0.0,
    ) + char_sum;
    Ok(Reconstruction {
        value,
        zeta_at_zero_s,
        kernel_term,
        char_terms,
    })
}

/// Lossy conversion of an exact rational for float-side consumers.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    out
}

fn poly_add_assign(a: &mut Vec<BigRational>, b: &[BigRational]) {
    if a.len() < b.len() {
        a.resize(b.len(), BigRational::zero());
    }
    for (i, cb) in b.iter().enumerate() {
        a[i] += cb;
    }
}
