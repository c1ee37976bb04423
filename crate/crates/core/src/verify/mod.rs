//! End-to-end verification of the decay bound `|E| <= C m^(n-1) p^(-m sigma)`:
//! (p, m) grid sweeps with the fitted constant, violation detection, and the
//! exponential-polynomial model fit for the sum's closed shape.

use num_complex::Complex64;

use crate::arith::{parse_polynomial, PadicLevel, Polynomial, ResidueBox};
use crate::engine::{build_histogram_with, exp_sum, Budget, ExecMode};
use crate::error::{Error, Result};

/// Which sum a sweep evaluates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SumVariant {
    /// `E_{m,p}` over the full box (defined for m >= 2).
    Full,
    /// `E^0_{m,p}` over the origin box.
    Origin,
    /// `E^y_{m,p}` over a shifted box.
    Shifted { y: Vec<num_bigint::BigInt> },
}

impl SumVariant {
    pub fn residue_box(&self, nvars: usize) -> ResidueBox {
        match self {
            SumVariant::Full => ResidueBox::Full,
            SumVariant::Origin => ResidueBox::origin(nvars),
            SumVariant::Shifted { y } => ResidueBox::Shifted { y: y.clone() },
        }
    }

    pub fn label(&self) -> String {
        match self {
            SumVariant::Full => "full".into(),
            SumVariant::Origin => "origin".into(),
            SumVariant::Shifted { y } => ResidueBox::Shifted { y: y.clone() }.label(),
        }
    }
}

/// One grid entry of a bound sweep.
#[derive(Debug, Clone)]
pub struct GridPoint {
    pub p: u64,
    pub m: u32,
    pub abs_e: f64,
    /// `|E| m^(1-n) p^(m sigma)`; the bound asserts this stays below C.
    pub bound_ratio: f64,
}

/// Result of a bound sweep over a (p, m) grid.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub poly: String,
    pub variant: String,
    pub sigma: f64,
    pub grid: Vec<GridPoint>,
    /// `max bound_ratio` over the grid.
    pub c_fit: f64,
    /// `max bound_ratio` over the upper half of the prime list.
    pub c_fit_top_half: f64,
    /// `max bound_ratio` restricted to the largest prime.
    pub c_fit_largest_p: f64,
    pub declared_c: Option<f64>,
    pub violations: Vec<GridPoint>,
}

/// Sweeps the (p, m) grid, computing every `|E|` from an exact histogram,
/// and fits the constant as the max of the bound ratios.
///
/// For the full-box variant, m = 1 entries are excluded (the bound is
/// asserted from m = 2 there).
#[allow(clippy::too_many_arguments)]
pub fn sweep_and_fit(
    f: &Polynomial,
    variant: &SumVariant,
    sigma: f64,
    primes: &[u64],
    m_range: (u32, u32),
    budget: Budget,
    declared_c: Option<f64>,
    mode: ExecMode,
) -> Result<BoundReport> {
    f.require_non_constant()?;
    if primes.is_empty() {
        return Err(Error::Underdetermined {
            what: "primes in the sweep".into(),
            min: 1,
            got: 0,
        });
    }
    let (m_lo, m_hi) = m_range;
    let m_lo = if *variant == SumVariant::Full {
        m_lo.max(2)
    } else {
        m_lo.max(1)
    };
    if m_lo > m_hi {
        return Err(Error::InvalidArgument(format!(
            "empty m range [{m_lo}, {m_hi}] for variant {}",
            variant.label()
        )));
    }
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    primes.dedup();

    let n = f.nvars() as u32;
    let box_ = variant.residue_box(f.nvars());
    let cells: Vec<(u64, u32)> = primes
        .iter()
        .flat_map(|&p| (m_lo..=m_hi).map(move |m| (p, m)))
        .collect();

    let eval_cell = |&(p, m): &(u64, u32)| -> Result<GridPoint> {
        let level = PadicLevel::new(p, m)?;
        let hist = build_histogram_with(f, &level, &box_, budget, mode)?;
        let abs_e = exp_sum(&hist).magnitude;
        let bound_ratio =
            abs_e * (m as f64).powi(1 - n as i32) * (p as f64).powf(m as f64 * sigma);
        Ok(GridPoint {
            p,
            m,
            abs_e,
            bound_ratio,
        })
    };

    let mut grid: Vec<GridPoint> = run_cells(&cells, eval_cell, mode)?;
    grid.sort_by_key(|g| (g.p, g.m));

    let c_fit = max_ratio(grid.iter());
    let top_half = &primes[primes.len() / 2..];
    let c_fit_top_half = max_ratio(grid.iter().filter(|g| top_half.contains(&g.p)));
    let largest = *primes.last().expect("nonempty");
    let c_fit_largest_p = max_ratio(grid.iter().filter(|g| g.p == largest));

    let violations = match declared_c {
        Some(c) => grid
            .iter()
            .filter(|g| g.bound_ratio > c)
            .cloned()
            .collect(),
        None => Vec::new(),
    };

    Ok(BoundReport {
        poly: f.to_string(),
        variant: variant.label(),
        sigma,
        grid,
        c_fit,
        c_fit_top_half,
        c_fit_largest_p,
        declared_c,
        violations,
    })
}

fn run_cells<F>(cells: &[(u64, u32)], eval_cell: F, mode: ExecMode) -> Result<Vec<GridPoint>>
where
    F: Fn(&(u64, u32)) -> Result<GridPoint> + Send + Sync,
{
    match mode {
        ExecMode::Sequential => cells.iter().map(eval_cell).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            cells.par_iter().map(eval_cell).collect()
        }
    }
}

fn max_ratio<'a, I: Iterator<Item = &'a GridPoint>>(iter: I) -> f64 {
    iter.map(|g| g.bound_ratio).fold(0.0, f64::max)
}

/// One fitted basis term `a * m^beta * p^(-lambda m)`.
#[derive(Debug, Clone)]
pub struct FitTerm {
    pub lambda: f64,
    pub beta: u32,
    pub coeff: Complex64,
}

/// Result of fitting the sum values against the exponential-polynomial
/// basis, per residue class of m when a period is given.
#[derive(Debug, Clone)]
pub struct ModelFit {
    /// Residue class of m this fit covers (class, modulus); (0, 1) = all m.
    pub class: (u32, u32),
    pub terms: Vec<FitTerm>,
    /// Relative l2 residual over the class's sample.
    pub residual: f64,
    /// Residual above the 1e-6 relative threshold.
    pub flagged: bool,
}

/// Fits `E(m) ~ sum a_i m^beta p^(-lambda m)` by least squares over the
/// candidate `lambda` list and `beta in [0, n-1]`, separately on each
/// residue class of m mod `period` (1 = joint fit).
pub fn fit_cor27_model(
    samples: &[(u32, Complex64)],
    p: u64,
    lambdas: &[f64],
    n: u32,
    period: u32,
) -> Result<Vec<ModelFit>> {
    if lambdas.is_empty() {
        return Err(Error::InvalidArgument("no candidate exponents".into()));
    }
    let period = period.max(1);
    let betas: Vec<u32> = (0..n.max(1)).collect();
    let ncols = lambdas.len() * betas.len();

    let mut fits = Vec::new();
    for class in 0..period {
        let rows: Vec<&(u32, Complex64)> = samples
            .iter()
            .filter(|(m, _)| m % period == class)
            .collect();
        if rows.is_empty() {
            continue;
        }
        if rows.len() < ncols {
            return Err(Error::Underdetermined {
                what: format!("m values in class {class} mod {period}"),
                min: ncols,
                got: rows.len(),
            });
        }
        let design: Vec<Vec<f64>> = rows
            .iter()
            .map(|(m, _)| {
                let mut row = Vec::with_capacity(ncols);
                for &lambda in lambdas {
                    for &beta in &betas {
                        row.push((*m as f64).powi(beta as i32) * (p as f64).powf(-lambda * *m as f64));
                    }
                }
                row
            })
            .collect();
        let rhs: Vec<Complex64> = rows.iter().map(|(_, v)| *v).collect();
        let coeffs = least_squares(&design, &rhs)?;

        // Relative residual.
        let mut rss = 0.0;
        let mut yss = 0.0;
        for (row, y) in design.iter().zip(&rhs) {
            let fitted: Complex64 = row
                .iter()
                .zip(&coeffs)
                .map(|(a, c)| c * *a)
                .sum();
            rss += (y - fitted).norm_sqr();
            yss += y.norm_sqr();
        }
        let residual = (rss / yss.max(1e-300)).sqrt().min(rss.sqrt());

        let mut terms = Vec::with_capacity(ncols);
        let mut idx = 0;
        for &lambda in lambdas {
            for &beta in &betas {
                terms.push(FitTerm {
                    lambda,
                    beta,
                    coeff: coeffs[idx],
                });
                idx += 1;
            }
        }
        fits.push(ModelFit {
            class: (class, period),
            terms,
            residual,
            flagged: residual > 1e-6,
        });
    }
    Ok(fits)
}

/// Solves `min ||A x - y||` via the normal equations with Gaussian
/// elimination; fine for the handful of basis columns a fit uses.
fn least_squares(a: &[Vec<f64>], y: &[Complex64]) -> Result<Vec<Complex64>> {
    let rows = a.len();
    let cols = a[0].len();
    let mut ata = vec![vec![0.0f64; cols]; cols];
    let mut aty = vec![Complex64::new(0.0, 0.0); cols];
    for r in 0..rows {
        for i in 0..cols {
            for j in 0..cols {
                ata[i][j] += a[r][i] * a[r][j];
            }
            aty[i] += y[r] * a[r][i];
        }
    }
    // Gaussian elimination with partial pivoting, complex RHS.
    let mut mat = ata;
    let mut rhs = aty;
    for col in 0..cols {
        let pivot = (col..cols)
            .max_by(|&i, &j| {
                mat[i][col]
                    .abs()
                    .partial_cmp(&mat[j][col].abs())
                    .expect("finite")
            })
            .expect("nonempty");
        if mat[pivot][col].abs() < 1e-300 {
            return Err(Error::Underdetermined {
                what: "independent basis columns".into(),
                min: cols,
                got: col,
            });
        }
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..cols {
            let factor = mat[row][col] / mat[col][col];
            for k in col..cols {
                mat[row][k] -= factor * mat[col][k];
            }
            let sub = rhs[col] * factor;
            rhs[row] -= sub;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); cols];
    for col in (0..cols).rev() {
        let mut acc = rhs[col];
        for k in col + 1..cols {
            acc -= x[k] * mat[col][k];
        }
        x[col] = acc / mat[col][col];
    }
    Ok(x)
}

/// Convenience: sweep from polynomial text.
#[allow(clippy::too_many_arguments)]
pub fn sweep_text(
    poly: &str,
    nvars: usize,
    variant: &SumVariant,
    sigma: f64,
    primes: &[u64],
    m_range: (u32, u32),
    budget: Budget,
    declared_c: Option<f64>,
) -> Result<BoundReport> {
    let f = parse_polynomial(poly, nvars)?;
    sweep_and_fit(
        &f,
        variant,
        sigma,
        primes,
        m_range,
        budget,
        declared_c,
        ExecMode::default(),
    )
}
