//! Exact structural checks behind the subsum estimates: lift-count constancy
//! (which forces the low subsum to vanish) and orbit constancy of the
//! `ord = m-1` stratum under the mu_(p-1) action.
//!
//! Both are integer tests on histogram counts; no floating point enters the
//! verdicts. The underlying statements hold for all primes above an
//! f-dependent threshold that is existence-only, so callers get a per-(p, m)
//! report instead of an assertion.

use num_complex::Complex64;

use crate::arith::ord_and_ac_u128;
use crate::chars::{dlog_table, primitive_root, unit_phase};
use crate::engine::histogram::ValueHistogram;
use crate::error::{Error, Result};

/// Outcome of the lift-count constancy test.
#[derive(Debug, Clone)]
pub struct Lemma31Report {
    pub holds: bool,
    /// Violating classes `z mod p^(m-1)` with their `p` lift counts.
    pub witnesses: Vec<(u128, Vec<u128>)>,
}

/// Checks, for every class `z mod p^(m-1)` with `ord_p(z) <= m-2`, that the
/// counts of the `p` lifts `z + k p^(m-1)` are all equal.
///
/// Constancy makes each class's contribution a full inner character sum, so
/// it forces the `ord <= m-2` subsum to vanish exactly. Requires `m >= 3`
/// (the statement is vacuous below that).
pub fn lemma31_check(hist: &ValueHistogram) -> Result<Lemma31Report> {
    let m = hist.level().m();
    if m < 3 {
        return Err(Error::LevelTooSmall { min: 3, got: m });
    }
    let p = hist.level().p() as u128;
    let half_modulus = hist.level().modulus_u128().expect("checked at build") / p;

    let mut witnesses = Vec::new();
    let mut classes: std::collections::BTreeMap<u128, Vec<(u128, u128)>> =
        std::collections::BTreeMap::new();
    for (&r, &c) in hist.counts() {
        let class = r % half_modulus;
        if class == 0 {
            // ord >= m-1: outside the low stratum.
            continue;
        }
        classes.entry(class).or_default().push((r, c));
    }
    for (class, present) in classes {
        let mut lifts = vec![0u128; p as usize];
        for (r, c) in present {
            lifts[(r / half_modulus) as usize] = c;
        }
        if lifts.iter().any(|&c| c != lifts[0]) {
            witnesses.push((class, lifts));
        }
    }
    Ok(Lemma31Report {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

/// Outcome of the orbit constancy test on the `ord = m-1` stratum.
#[derive(Debug, Clone)]
pub struct OrbitReport {
    /// Number of orbits: `gcd(m-1, p-1)`.
    pub d: u64,
    pub holds: bool,
    /// The common count on each orbit (by orbit index), when constancy holds;
    /// filled with the first-seen count otherwise.
    pub orbit_counts: Vec<u128>,
    /// Violations as (angular component, its count, orbit index).
    pub violations: Vec<(u64, u128, usize)>,
    /// `p^(-mn) sum_i G_i sum_{c in Y_i} e(c/p)`, the mid subsum rebuilt from
    /// the orbit constants; `None` when constancy fails.
    pub mid_from_orbits: Option<Complex64>,
}

/// Partitions the units `ac_p(z)` of the `ord = m-1` stratum into the
/// `d = gcd(m-1, p-1)` cosets of the d-th powers and tests that histogram
/// counts are constant on each coset.
///
/// Requires `m >= 2` and the origin box (the stratum decomposition lives on
/// `E^0`).
pub fn orbit_constancy_check(hist: &ValueHistogram) -> Result<OrbitReport> {
    let m = hist.level().m();
    if m < 2 {
        return Err(Error::LevelTooSmall { min: 2, got: m });
    }
    match hist.residue_box() {
        crate::arith::ResidueBox::Shifted { y }
            if y.iter().all(|c| c == &num_bigint::BigInt::from(0)) => {}
        other => {
            return Err(Error::InvalidArgument(format!(
                "orbit constancy is defined on the origin box, got {}",
                other.label()
            )))
        }
    }
    let p = hist.level().p();
    let d = gcd((m - 1) as u64, p - 1);
    let g = primitive_root(p);
    let dlog = dlog_table(p, g);
    let q = hist.level().modulus_u128().expect("checked at build");
    let step = q / p as u128; // p^(m-1)

    // counts[c] for z = c * p^(m-1), c in [1, p).
    let mut counts = vec![0u128; p as usize];
    for (&r, &c) in hist.counts() {
        let (v, ac) = ord_and_ac_u128(r, p, m);
        if v == m - 1 {
            counts[ac.expect("nonzero residue") as usize] = c;
        }
    }
    debug_assert!(step * p as u128 == q);

    let mut orbit_counts: Vec<Option<u128>> = vec![None; d as usize];
    let mut violations = Vec::new();
    for c in 1..p {
        let orbit = (dlog[c as usize] as u64 % d) as usize;
        match orbit_counts[orbit] {
            None => orbit_counts[orbit] = Some(counts[c as usize]),
            Some(expected) => {
                if counts[c as usize] != expected {
                    violations.push((c, counts[c as usize], orbit));
                }
            }
        }
    }
    let holds = violations.is_empty();
    let orbit_counts: Vec<u128> = orbit_counts.into_iter().map(|c| c.unwrap_or(0)).collect();

    let mid_from_orbits = holds.then(|| {
        let norm = (p as f64).powi((m * hist.nvars() as u32) as i32);
        let mut s = Complex64::new(0.0, 0.0);
        for c in 1..p {
            let orbit = (dlog[c as usize] as u64 % d) as usize;
            s += unit_phase(c as f64 / p as f64) * orbit_counts[orbit] as f64;
        }
        s / norm
    });

    Ok(OrbitReport {
        d,
        holds,
        orbit_counts,
        violations,
        mid_from_orbits,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
