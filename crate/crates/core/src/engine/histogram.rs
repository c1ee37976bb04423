//! Exact value histograms of `f` over residue boxes.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use num_bigint::BigInt;

use crate::arith::{PadicLevel, Polynomial, ResidueBox};
use crate::engine::reduce::{FastPoly, ReducedBox};
use crate::engine::{Budget, ExecMode};
use crate::error::{Error, Result};

/// Exact counts of `#{x in box : f(x) = r mod p^m}` for every residue `r`.
///
/// This is the single source of truth for every sum downstream: complex
/// values are always derived from these integer counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueHistogram {
    level: PadicLevel,
    nvars: usize,
    box_: ResidueBox,
    counts: BTreeMap<u128, u128>,
    total: u128,
}

impl ValueHistogram {
    pub fn level(&self) -> &PadicLevel {
        &self.level
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn residue_box(&self) -> &ResidueBox {
        &self.box_
    }

    /// Residue -> count map; absent keys mean count zero.
    pub fn counts(&self) -> &BTreeMap<u128, u128> {
        &self.counts
    }

    pub fn count(&self, residue: u128) -> u128 {
        self.counts.get(&residue).copied().unwrap_or(0)
    }

    /// Total number of box points (equals the sum of all counts).
    pub fn total_points(&self) -> u128 {
        self.total
    }

    /// Compact text form: a header line then one `residue,count` per line.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "p={} m={} n={} box={}",
            self.level.p(),
            self.level.m(),
            self.nvars,
            self.box_.label()
        )?;
        for (r, c) in &self.counts {
            writeln!(w, "{r},{c}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("write to vec");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<ValueHistogram> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::HistogramFormat("empty file".into()))?
            .map_err(|e| Error::HistogramFormat(e.to_string()))?;
        let mut p = None;
        let mut m = None;
        let mut n = None;
        let mut box_ = None;
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::HistogramFormat(format!("bad header field '{field}'")))?;
            match key {
                "p" => p = Some(value.parse::<u64>().map_err(hf)?),
                "m" => m = Some(value.parse::<u32>().map_err(hf)?),
                "n" => n = Some(value.parse::<usize>().map_err(hf)?),
                "box" => box_ = Some(value.to_owned()),
                other => {
                    return Err(Error::HistogramFormat(format!(
                        "unknown header key '{other}'"
                    )))
                }
            }
        }
        let (p, m, n, box_label) = match (p, m, n, box_) {
            (Some(p), Some(m), Some(n), Some(b)) => (p, m, n, b),
            _ => return Err(Error::HistogramFormat("incomplete header".into())),
        };
        let box_ = parse_box_label(&box_label, n)?;
        let level = PadicLevel::new(p, m)?;
        let mut counts = BTreeMap::new();
        let mut total: u128 = 0;
        for line in lines {
            let line = line.map_err(|e| Error::HistogramFormat(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let (res, cnt) = line
                .split_once(',')
                .ok_or_else(|| Error::HistogramFormat(format!("bad line '{line}'")))?;
            let res: u128 = res.trim().parse().map_err(hf)?;
            let cnt: u128 = cnt.trim().parse().map_err(hf)?;
            if counts.insert(res, cnt).is_some() {
                return Err(Error::HistogramFormat(format!("duplicate residue {res}")));
            }
            total += cnt;
        }
        Ok(ValueHistogram {
            level,
            nvars: n,
            box_,
            counts,
            total,
        })
    }
}

fn hf<E: std::fmt::Display>(e: E) -> Error {
    Error::HistogramFormat(e.to_string())
}

fn parse_box_label(label: &str, nvars: usize) -> Result<ResidueBox> {
    match label {
        "full" => Ok(ResidueBox::Full),
        "origin" => Ok(ResidueBox::origin(nvars)),
        other => {
            let inner = other
                .strip_prefix("shifted[")
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| Error::HistogramFormat(format!("bad box label '{other}'")))?;
            let y = inner
                .split(',')
                .map(|c| c.trim().parse::<BigInt>().map_err(hf))
                .collect::<Result<Vec<_>>>()?;
            if y.len() != nvars {
                return Err(Error::HistogramFormat(format!(
                    "box has {} coordinates, header says n={}",
                    y.len(),
                    nvars
                )));
            }
            Ok(ResidueBox::Shifted { y })
        }
    }
}

/// Builds the exact value histogram of `f` over the box at `level`, using
/// the default execution mode.
pub fn build_histogram(
    f: &Polynomial,
    level: &PadicLevel,
    box_: &ResidueBox,
    budget: Budget,
) -> Result<ValueHistogram> {
    build_histogram_with(f, level, box_, budget, ExecMode::default())
}

/// As [`build_histogram`] with an explicit execution mode. The result is
/// bit-identical whichever mode runs.
pub fn build_histogram_with(
    f: &Polynomial,
    level: &PadicLevel,
    box_: &ResidueBox,
    budget: Budget,
    mode: ExecMode,
) -> Result<ValueHistogram> {
    let reduced = ReducedBox::prepare(f, level, box_, budget)?;
    let n = f.nvars();
    let p = level.p();
    let q = crate::arith::checked_pow_u128(p as u128, reduced.value_m)
        .filter(|&q| q <= u64::MAX as u128)
        .map(|q| q as u64)
        .ok_or_else(|| Error::RangeExceeded("value modulus exceeds 64 bits".into()))?
        .max(1);
    let poly = FastPoly::reduce(&reduced.h, q)?;
    let side = crate::arith::checked_pow_u128(p as u128, reduced.enum_m)
        .expect("within budget") as u64;

    let raw = enumerate_counts(&poly, n, side, mode);

    let mut counts = BTreeMap::new();
    let mut total: u128 = 0;
    for (value, cnt) in raw {
        let c = cnt as u128 * reduced.multiplicity;
        total += c;
        *counts.entry(reduced.scale * value as u128).or_insert(0) += c;
    }
    debug_assert_eq!(total, reduced.total_points);

    Ok(ValueHistogram {
        level: level.clone(),
        nvars: n,
        box_: box_.clone(),
        counts,
        total,
    })
}

/// Enumerates `h(u) mod q` over `[0, side)^n` and counts values.
///
/// Parallel execution splits the leading coordinate; per-chunk maps merge by
/// summing counts, so the result does not depend on the partition.
fn enumerate_counts(poly: &FastPoly, n: usize, side: u64, mode: ExecMode) -> HashMap<u64, u64> {
    match mode {
        ExecMode::Sequential => {
            let mut map = HashMap::new();
            count_chunk(poly, n, side, 0..side, &mut map);
            map
        }
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            let threads = rayon::current_num_threads() as u64;
            let chunks = chunk_ranges(side, threads * 4);
            chunks
                .into_par_iter()
                .map(|range| {
                    let mut map = HashMap::new();
                    count_chunk(poly, n, side, range, &mut map);
                    map
                })
                .reduce(HashMap::new, |mut a, b| {
                    for (k, v) in b {
                        *a.entry(k).or_insert(0) += v;
                    }
                    a
                })
        }
    }
}

#[cfg(feature = "parallel")]
fn chunk_ranges(side: u64, parts: u64) -> Vec<std::ops::Range<u64>> {
    let parts = parts.clamp(1, side.max(1));
    let base = side / parts;
    let rem = side % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = 0;
    for i in 0..parts {
        let len = base + u64::from(i < rem);
        if len > 0 {
            out.push(start..start + len);
        }
        start += len;
    }
    out
}

/// Counts values with the leading coordinate restricted to `lead`.
fn count_chunk(
    poly: &FastPoly,
    n: usize,
    side: u64,
    lead: std::ops::Range<u64>,
    map: &mut HashMap<u64, u64>,
) {
    if n == 1 {
        let coeffs = dense_coeffs(poly, 0);
        for x in lead {
            *map.entry(horner(&coeffs, x, poly.q)).or_insert(0) += 1;
        }
        return;
    }
    for x in lead {
        let restricted = poly.substitute_leading(x);
        count_chunk(&restricted, n - 1, side, 0..side, map);
    }
}

/// Dense coefficient vector of a univariate `FastPoly` (variable index 0).
fn dense_coeffs(poly: &FastPoly, var: usize) -> Vec<u64> {
    let deg = poly
        .terms
        .iter()
        .map(|(_, e)| e[var])
        .max()
        .unwrap_or(0) as usize;
    let mut coeffs = vec![0u64; deg + 1];
    for (c, e) in &poly.terms {
        coeffs[e[var] as usize] = ((coeffs[e[var] as usize] as u128 + *c as u128)
            % poly.q as u128) as u64;
    }
    coeffs
}

fn horner(coeffs: &[u64], x: u64, q: u64) -> u64 {
    let x = x as u128 % q as u128;
    let mut acc: u128 = 0;
    for &c in coeffs.iter().rev() {
        acc = (acc * x + c as u128) % q as u128;
    }
    acc as u64
}

impl FastPoly {
    /// Partially evaluates the first variable at `x`, returning a FastPoly in
    /// the remaining variables.
    fn substitute_leading(&self, x: u64) -> FastPoly {
        let q = self.q as u128;
        let mut merged: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (c, exps) in &self.terms {
            let scaled =
                (*c as u128 * super::reduce::pow_mod(x, exps[0], self.q) as u128 % q) as u64;
            let rest: Vec<u32> = exps[1..].to_vec();
            let entry = merged.entry(rest).or_insert(0);
            *entry = ((*entry as u128 + scaled as u128) % q) as u64;
        }
        FastPoly {
            terms: merged.into_iter().map(|(e, c)| (c, e)).collect(),
            q: self.q,
        }
    }
}
