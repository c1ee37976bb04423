//! Normalized exponential sums and their valuation-strata decomposition.

use num_complex::Complex64;

use crate::arith::ord_and_ac_u128;
use crate::chars::unit_phase;
use crate::engine::histogram::ValueHistogram;
use crate::error::{Error, Result};

/// Descriptor of the histogram a sum was derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistogramMeta {
    pub p: u64,
    pub m: u32,
    pub nvars: usize,
    pub box_label: String,
    pub total_points: u128,
}

impl HistogramMeta {
    fn of(hist: &ValueHistogram) -> Self {
        HistogramMeta {
            p: hist.level().p(),
            m: hist.level().m(),
            nvars: hist.nvars(),
            box_label: hist.residue_box().label(),
            total_points: hist.total_points(),
        }
    }
}

/// A complex sum value together with its magnitude and provenance.
#[derive(Debug, Clone)]
pub struct ExpSumValue {
    pub value: Complex64,
    pub magnitude: f64,
    pub source: HistogramMeta,
}

impl ExpSumValue {
    fn new(value: Complex64, source: HistogramMeta) -> Self {
        ExpSumValue {
            value,
            magnitude: value.norm(),
            source,
        }
    }
}

/// The three partial sums over the strata `ord_p f(x) <= m-2`, `= m-1`,
/// `>= m`. Their values add up to the full sum exactly (disjoint slices of
/// one histogram).
#[derive(Debug, Clone)]
pub struct SubsumTriple {
    pub low: ExpSumValue,
    pub mid: ExpSumValue,
    pub high: ExpSumValue,
}

impl SubsumTriple {
    pub fn total_value(&self) -> Complex64 {
        self.low.value + self.mid.value + self.high.value
    }
}

/// Normalizer `p^(mn)`, used for every box kind: the shifted sums `E^y` keep
/// the full-box normalizer by definition.
fn normalizer(hist: &ValueHistogram) -> f64 {
    (hist.level().p() as f64).powi((hist.level().m() * hist.nvars() as u32) as i32)
}

fn weighted_sum<F: Fn(u128) -> bool>(hist: &ValueHistogram, keep: F) -> Complex64 {
    let q = hist.level().modulus_u128().expect("checked at build") as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for (&r, &c) in hist.counts() {
        if keep(r) {
            s += unit_phase(r as f64 / q) * c as f64;
        }
    }
    s / normalizer(hist)
}

/// `p^(-mn) sum_r count(r) exp(2 pi i r / p^m)`.
pub fn exp_sum(hist: &ValueHistogram) -> ExpSumValue {
    ExpSumValue::new(weighted_sum(hist, |_| true), HistogramMeta::of(hist))
}

/// Splits the sum along the valuation strata of `f(x)`. Requires `m >= 2`.
pub fn subsum_decomposition(hist: &ValueHistogram) -> Result<SubsumTriple> {
    let m = hist.level().m();
    if m < 2 {
        return Err(Error::LevelTooSmall { min: 2, got: m });
    }
    let p = hist.level().p();
    let meta = HistogramMeta::of(hist);
    let ord = |r: u128| ord_and_ac_u128(r, p, m).0;
    let low = weighted_sum(hist, |r| ord(r) <= m - 2);
    let mid = weighted_sum(hist, |r| ord(r) == m - 1);
    let high = weighted_sum(hist, |r| ord(r) >= m);
    Ok(SubsumTriple {
        low: ExpSumValue::new(low, meta.clone()),
        mid: ExpSumValue::new(mid, meta.clone()),
        high: ExpSumValue::new(high, meta),
    })
}
