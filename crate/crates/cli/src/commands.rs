//! Subcommand implementations. Each returns the rendered report plus a
//! check-failure flag (exit 1), with hard errors mapped to exit 2/3 by main.

use anyhow::{anyhow, Context, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde_json::{json, Value};

use igusa_core::arith::{parse_polynomial, PadicLevel, Polynomial, ResidueBox};
use igusa_core::chars::weil_power_sum_check;
use igusa_core::critical::{critical_data_mod_p, find_rational_critical_values,
                           split_exp_sum_by_critical_values};
use igusa_core::engine::{
    build_histogram, contact_counts, exp_sum, lemma31_check, orbit_constancy_check,
    subsum_decomposition, Budget, ValueHistogram,
};
use igusa_core::lct::{jet_estimate_csv, lct_from_resolution, lct_jet_estimate, sigma_of};
use igusa_core::verify::{fit_cor27_model, sweep_and_fit, SumVariant};
use igusa_core::zeta::{
    coeff_lattice, coeff_truncated_cumulative, denef_zeta, pole_ledger, reconstruct_exp_sum,
    ResolutionData,
};

use crate::output::{complex_json, envelope, rational_str, render_csv, render_json, Format};

pub struct CmdResult {
    pub text: String,
    pub check_failed: bool,
    pub output_path: Option<String>,
}

fn fmtc(z: Complex64) -> String {
    format!("{}{}{}i", z.re, if z.im < 0.0 { "" } else { "+" }, z.im)
}

pub struct Resolved {
    pub poly: Polynomial,
    pub poly_text: String,
    pub nvars: usize,
    pub budget: Budget,
    pub format: Format,
}

pub fn resolve_poly(
    poly: Option<String>,
    nvars: Option<usize>,
    budget: u128,
    format: Format,
) -> Result<Resolved> {
    let poly_text = poly.ok_or_else(|| anyhow!("--poly is required"))?;
    let nvars = nvars.unwrap_or(1);
    let poly = parse_polynomial(&poly_text, nvars)?;
    Ok(Resolved {
        poly,
        poly_text,
        nvars,
        budget: Budget(budget),
        format,
    })
}

pub fn parse_variant(variant: &str, y: Option<&[i64]>, nvars: usize) -> Result<SumVariant> {
    match variant {
        "full" => Ok(SumVariant::Full),
        "origin" => Ok(SumVariant::Origin),
        "shifted" => {
            let y = y.ok_or_else(|| anyhow!("--y is required for the shifted variant"))?;
            if y.len() != nvars {
                anyhow::bail!("--y has {} coordinates, polynomial has {nvars}", y.len());
            }
            Ok(SumVariant::Shifted {
                y: y.iter().map(|&c| BigInt::from(c)).collect(),
            })
        }
        other => anyhow::bail!("unknown variant '{other}' (full|origin|shifted)"),
    }
}

fn build(
    r: &Resolved,
    p: u64,
    m: u32,
    variant: &SumVariant,
) -> Result<ValueHistogram> {
    let level = PadicLevel::new(p, m)?;
    Ok(build_histogram(
        &r.poly,
        &level,
        &variant.residue_box(r.nvars),
        r.budget,
    )?)
}

// ---------------------------------------------------------------- expsum

#[allow(clippy::too_many_arguments)]
pub fn cmd_expsum(
    r: Resolved,
    p: u64,
    m: u32,
    variant: SumVariant,
    dump_histogram: Option<String>,
    output: Option<String>,
) -> Result<CmdResult> {
    let hist = build(&r, p, m, &variant)?;
    let total = exp_sum(&hist);
    let subsums = if m >= 2 {
        Some(subsum_decomposition(&hist)?)
    } else {
        None
    };
    let contacts = contact_counts(&hist);

    if let Some(path) = &dump_histogram {
        std::fs::write(path, hist.to_text()).with_context(|| format!("writing {path}"))?;
    }

    let config = json!({
        "poly": r.poly_text, "nvars": r.nvars, "p": p, "m": m,
        "variant": variant.label(), "budget": r.budget.0.to_string(),
    });
    let text = match r.format {
        Format::Json => {
            let mut result = json!({
                "value": complex_json(total.value),
                "magnitude": total.magnitude,
                "box_points": hist.total_points().to_string(),
                "distinct_residues": hist.counts().len(),
                "contact": {
                    "ord_eq_m_minus_1": contacts.ord_eq_m_minus_1.to_string(),
                    "ord_ge_m": contacts.ord_ge_m.to_string(),
                },
            });
            if let Some(t) = &subsums {
                result["subsums"] = json!({
                    "low": complex_json(t.low.value),
                    "mid": complex_json(t.mid.value),
                    "high": complex_json(t.high.value),
                });
            }
            render_json(&envelope("expsum", config, result))
        }
        Format::Csv => {
            let mut table = String::from("part,p,m,variant,re,im,magnitude\n");
            table.push_str(&format!(
                "total,{p},{m},{},{},{},{}\n",
                variant.label(),
                total.value.re,
                total.value.im,
                total.magnitude
            ));
            if let Some(t) = &subsums {
                for (name, v) in [("low", &t.low), ("mid", &t.mid), ("high", &t.high)] {
                    table.push_str(&format!(
                        "{name},{p},{m},{},{},{},{}\n",
                        variant.label(),
                        v.value.re,
                        v.value.im,
                        v.magnitude
                    ));
                }
            }
            render_csv(&config_pairs(&config), &table)
        }
        Format::Plain => {
            let mut s = format!(
                "E ({} box) at p={p}, m={m}: {}  |E| = {}\n",
                variant.label(),
                fmtc(total.value),
                total.magnitude
            );
            if let Some(t) = &subsums {
                s.push_str(&format!(
                    "  low  (ord<=m-2): {}\n  mid  (ord=m-1) : {}\n  high (ord>=m)  : {}\n",
                    fmtc(t.low.value),
                    fmtc(t.mid.value),
                    fmtc(t.high.value)
                ));
            }
            s
        }
    };
    Ok(CmdResult {
        text,
        check_failed: false,
        output_path: output,
    })
}

fn config_pairs(config: &Value) -> Vec<(String, String)> {
    config
        .as_object()
        .map(|m| {
            m.iter()
                .map(|(k, v)| {
                    let s = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    (k.clone(), s)
                })
                .collect()
        })
        .unwrap_or_default()
}

// ------------------------------------------------------------ lemma-check

pub fn cmd_lemma_check(
    r: Resolved,
    primes: Vec<u64>,
    m_list: Vec<u32>,
    weil_dmax: u64,
    output: Option<String>,
) -> Result<CmdResult> {
    let mut rows = Vec::new();
    let mut any_failure = false;

    for &p in &primes {
        for &m in &m_list {
            let hist = build(&r, p, m, &SumVariant::Origin)?;
            let t = subsum_decomposition(&hist)?;
            if m >= 3 {
                let rep = lemma31_check(&hist)?;
                let low_ok = t.low.magnitude <= 1e-9;
                // Constancy is a sufficient condition for vanishing; if it
                // holds the low subsum must be zero.
                let consistent = !rep.holds || low_ok;
                any_failure |= !rep.holds || !consistent;
                rows.push(json!({
                    "check": "lift_constancy", "p": p, "m": m,
                    "holds": rep.holds,
                    "witness_classes": rep.witnesses.len(),
                    "low_magnitude": t.low.magnitude,
                    "implies_vanishing_ok": consistent,
                }));
            }
            let orb = orbit_constancy_check(&hist)?;
            let mid_diff = orb
                .mid_from_orbits
                .map(|v| (v - t.mid.value).norm());
            let mid_ok = mid_diff.map(|d| d <= 1e-9).unwrap_or(false);
            any_failure |= !orb.holds || !mid_ok;
            rows.push(json!({
                "check": "orbit_constancy", "p": p, "m": m,
                "d": orb.d,
                "holds": orb.holds,
                "violations": orb.violations.len(),
                "mid_rebuild_diff": mid_diff,
                "mid_rebuild_ok": mid_ok,
            }));
        }
        let mut weil_ok = true;
        let mut weil_max_ratio: f64 = 0.0;
        for d in 1..=weil_dmax.min(p - 1) {
            if (p - 1) % d != 0 {
                continue;
            }
            for xi in 1..p {
                let c = weil_power_sum_check(p, d, xi)?;
                weil_ok &= c.ok;
                weil_max_ratio = weil_max_ratio.max(c.sum_magnitude / c.bound);
            }
        }
        any_failure |= !weil_ok;
        rows.push(json!({
            "check": "weil_power_sum", "p": p, "dmax": weil_dmax,
            "holds": weil_ok, "max_ratio": weil_max_ratio,
        }));
    }

    let config = json!({
        "poly": r.poly_text, "nvars": r.nvars, "primes": primes, "m_list": m_list,
        "weil_dmax": weil_dmax, "budget": r.budget.0.to_string(), "variant": "origin",
    });
    let text = match r.format {
        Format::Json => render_json(&envelope(
            "lemma-check",
            config,
            json!({ "checks": rows, "all_hold": !any_failure }),
        )),
        Format::Csv => {
            let mut table = String::from("check,p,m,holds,detail\n");
            for row in &rows {
                table.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row["check"].as_str().unwrap_or(""),
                    row["p"],
                    row.get("m").unwrap_or(&Value::Null),
                    row["holds"],
                    row.get("low_magnitude")
                        .or(row.get("mid_rebuild_diff"))
                        .or(row.get("max_ratio"))
                        .unwrap_or(&Value::Null),
                ));
            }
            render_csv(&config_pairs(&config), &table)
        }
        Format::Plain => {
            let mut s = String::new();
            for row in &rows {
                s.push_str(&format!(
                    "{} p={} {} holds={}\n",
                    row["check"].as_str().unwrap_or(""),
                    row["p"],
                    row.get("m").map(|m| format!("m={m}")).unwrap_or_default(),
                    row["holds"]
                ));
            }
            s.push_str(&format!("all_hold: {}\n", !any_failure));
            s
        }
    };
    Ok(CmdResult {
        text,
        check_failed: any_failure,
        output_path: output,
    })
}

// ------------------------------------------------------------------- zeta

pub fn cmd_zeta(
    data_path: String,
    p: u64,
    order: u64,
    index: u64,
    kmax: u32,
    format: Format,
    output: Option<String>,
) -> Result<CmdResult> {
    let data = load_data(&data_path)?;
    let z = denef_zeta(&data, p, order, index)?;
    let series = z.series(kmax);

    let mut coeff_rows = Vec::new();
    let mut all_equal = true;
    let mut cum = num_rational::BigRational::from(BigInt::from(0));
    for k in 0..=kmax {
        let s = series[k as usize].clone();
        cum += &s;
        let lat = coeff_lattice(&data, p, order, index, k)?;
        let latc = coeff_truncated_cumulative(&data, p, order, index, k)?;
        let equal = s == lat && cum == latc;
        all_equal &= equal;
        coeff_rows.push((k, s, lat, cum.clone(), latc, equal));
    }
    let poles = pole_ledger(&data, p)?;

    let config = json!({
        "data": data_path, "p": p, "order": order, "index": index, "kmax": kmax,
        "phi_label": data.phi_label,
    });
    let text = match format {
        Format::Json => {
            let result = json!({
                "rational_function": z.to_string(),
                "value_at_s0": rational_str(&z.eval_at_one()),
                "coefficients": coeff_rows.iter().map(|(k, s, lat, cum, latc, eq)| json!({
                    "k": k,
                    "series": rational_str(s),
                    "lattice": rational_str(lat),
                    "cumulative_series": rational_str(cum),
                    "cumulative_lattice": rational_str(latc),
                    "equal": eq,
                })).collect::<Vec<_>>(),
                "routes_agree": all_equal,
                "poles": poles.iter().map(|e| json!({
                    "lambda": rational_str(&e.lambda),
                    "multiplicity": e.multiplicity,
                })).collect::<Vec<_>>(),
            });
            render_json(&envelope("zeta", config, result))
        }
        Format::Csv => {
            let mut table = String::from("k,series,lattice,cumulative_series,cumulative_lattice,equal\n");
            for (k, s, lat, cum, latc, eq) in &coeff_rows {
                table.push_str(&format!(
                    "{k},{},{},{},{},{eq}\n",
                    rational_str(s),
                    rational_str(lat),
                    rational_str(cum),
                    rational_str(latc)
                ));
            }
            render_csv(&config_pairs(&config), &table)
        }
        Format::Plain => {
            let mut s = format!("Z(p={p}, chi=({order},{index})) = {z}\n");
            s.push_str(&format!("Z at s=0: {}\n", rational_str(&z.eval_at_one())));
            s.push_str("poles: ");
            for e in &poles {
                s.push_str(&format!("{} (mult {})  ", rational_str(&e.lambda), e.multiplicity));
            }
            s.push('\n');
            s.push_str(&format!("series == lattice for k <= {kmax}: {all_equal}\n"));
            s
        }
    };
    Ok(CmdResult {
        text,
        check_failed: !all_equal,
        output_path: output,
    })
}

fn load_data(path: &str) -> Result<ResolutionData> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading data file {path}"))?;
    Ok(ResolutionData::from_json(&text)?)
}

// ------------------------------------------------------------ reconstruct

#[allow(clippy::too_many_arguments)]
pub fn cmd_reconstruct(
    r: Resolved,
    data_path: String,
    variant: SumVariant,
    primes: Vec<u64>,
    m_range: (u32, u32),
    u: u64,
    output: Option<String>,
) -> Result<CmdResult> {
    let data = load_data(&data_path)?;
    let mut rows = Vec::new();
    let mut all_ok = true;
    for &p in &primes {
        for m in m_range.0.max(2)..=m_range.1 {
            let recon = reconstruct_exp_sum(&data, p, m, u)?;
            let hist = build(&r, p, m, &variant)?;
            let direct = exp_sum(&hist);
            let diff = (recon.value - direct.value).norm();
            let ok = diff <= 1e-9;
            all_ok &= ok;
            rows.push((p, m, recon.value, direct.value, diff, ok));
        }
    }
    let config = json!({
        "poly": r.poly_text, "nvars": r.nvars, "data": data_path,
        "variant": variant.label(), "primes": primes,
        "m_range": [m_range.0, m_range.1], "u": u,
        "budget": r.budget.0.to_string(),
    });
    let text = match r.format {
        Format::Json => {
            let result = json!({
                "grid": rows.iter().map(|(p, m, rec, dir, diff, ok)| json!({
                    "p": p, "m": m,
                    "reconstructed": complex_json(*rec),
                    "direct": complex_json(*dir),
                    "abs_diff": diff, "ok": ok,
                })).collect::<Vec<_>>(),
                "all_ok": all_ok,
            });
            render_json(&envelope("reconstruct", config, result))
        }
        Format::Csv => {
            let mut table =
                String::from("p,m,recon_re,recon_im,direct_re,direct_im,abs_diff,ok\n");
            for (p, m, rec, dir, diff, ok) in &rows {
                table.push_str(&format!(
                    "{p},{m},{},{},{},{},{diff},{ok}\n",
                    rec.re, rec.im, dir.re, dir.im
                ));
            }
            render_csv(&config_pairs(&config), &table)
        }
        Format::Plain => {
            let mut s = String::new();
            for (p, m, rec, dir, diff, ok) in &rows {
                s.push_str(&format!(
                    "p={p} m={m}: recon {} direct {} |diff| {diff} {}\n",
                    fmtc(*rec),
                    fmtc(*dir),
                    if *ok { "ok" } else { "MISMATCH" }
                ));
            }
            s
        }
    };
    Ok(CmdResult {
        text,
        check_failed: !all_ok,
        output_path: output,
    })
}

// -------------------------------------------------------------------- lct

#[allow(clippy::too_many_arguments)]
pub fn cmd_lct(
    r: Resolved,
    primes: Vec<u64>,
    mmax: u32,
    box_name: String,
    resolution: Option<String>,
    output: Option<String>,
) -> Result<CmdResult> {
    let box_ = match box_name.as_str() {
        "origin" => ResidueBox::origin(r.nvars),
        "full" => ResidueBox::Full,
        other => anyhow::bail!("unknown box '{other}' (origin|full)"),
    };
    let mut est = lct_jet_estimate(
        &r.poly,
        &primes,
        mmax,
        &box_,
        r.budget,
        Default::default(),
    )?;
    if let Some(path) = &resolution {
        let data = load_data(path)?;
        est.resolution_value = Some(lct_from_resolution(&data)?);
    }
    let lct_best = est
        .resolution_value
        .as_ref()
        .map(igusa_core::zeta::rational_to_f64)
        .unwrap_or(est.inf_value);
    let sigma = sigma_of(lct_best);

    let config = json!({
        "poly": r.poly_text, "nvars": r.nvars, "primes": primes, "mmax": mmax,
        "box": box_name, "resolution": resolution,
        "budget": r.budget.0.to_string(),
    });
    let text = match r.format {
        Format::Json => {
            let result = json!({
                "per_m": est.per_m.iter().map(|l| json!({
                    "m": l.m,
                    "counts": l.counts.iter().map(|(p, c)| json!({
                        "p": p, "count": c.to_string(),
                    })).collect::<Vec<_>>(),
                    "dim_fit": l.dim_fit,
                    "residual": l.residual,
                    "codim": l.codim,
                    "codim_over_m": l.ratio,
                })).collect::<Vec<_>>(),
                "inf_value": est.inf_value,
                "argmin_m": est.argmin_m,
                "truncated_at_boundary": est.truncated_at_boundary,
                "resolution_value": est.resolution_value.as_ref().map(rational_str),
                "sigma": sigma,
            });
            render_json(&envelope("lct", config, result))
        }
        Format::Csv => render_csv(&config_pairs(&config), &jet_estimate_csv(&est)),
        Format::Plain => {
            let mut s = String::new();
            for l in &est.per_m {
                s.push_str(&format!(
                    "m={}: dim {:.4} codim {:.4} codim/m {:.4}\n",
                    l.m, l.dim_fit, l.codim, l.ratio
                ));
            }
            s.push_str(&format!(
                "inf codim/m = {:.4} (argmin m = {}{})\n",
                est.inf_value,
                est.argmin_m,
                if est.truncated_at_boundary {
                    ", at truncation boundary"
                } else {
                    ""
                }
            ));
            if let Some(v) = &est.resolution_value {
                s.push_str(&format!("resolution lct = {}\n", rational_str(v)));
            }
            s.push_str(&format!("sigma = {sigma}\n"));
            s
        }
    };
    Ok(CmdResult {
        text,
        check_failed: false,
        output_path: output,
    })
}

// --------------------------------------------------------------- critical

#[allow(clippy::too_many_arguments)]
pub fn cmd_critical(
    r: Resolved,
    primes: Vec<u64>,
    m: u32,
    values: Option<Vec<i64>>,
    search_bound: u64,
    output: Option<String>,
) -> Result<CmdResult> {
    let values: Vec<BigInt> = match values {
        Some(vs) => vs.into_iter().map(BigInt::from).collect(),
        None => find_rational_critical_values(&r.poly, search_bound, r.budget)?,
    };
    let mut reports = Vec::new();
    let mut identity_ok = true;
    for &p in &primes {
        let rep = critical_data_mod_p(&r.poly, p, Some(&values), r.budget)?;
        let hist = build(&r, p, m, &SumVariant::Full)?;
        let split = split_exp_sum_by_critical_values(&hist, &values)?;
        let direct = exp_sum(&hist);
        let diff = (split.total - direct.value).norm();
        identity_ok &= diff <= 1e-9;
        reports.push((p, rep, split, direct.value, diff));
    }
    let config = json!({
        "poly": r.poly_text, "nvars": r.nvars, "primes": primes, "m": m,
        "critical_values": values.iter().map(|z| z.to_string()).collect::<Vec<_>>(),
        "budget": r.budget.0.to_string(),
    });
    let text = match r.format {
        Format::Json => {
            let result = json!({
                "per_p": reports.iter().map(|(p, rep, split, direct, diff)| json!({
                    "p": p,
                    "crit_points_mod_p": rep.crit_points_mod_p,
                    "crit_values_mod_p": rep.crit_values_mod_p,
                    "conditions": rep.condition_checks,
                    "split": {
                        "parts": split.parts.iter().map(|part| json!({
                            "z": part.z.to_string(),
                            "value": complex_json(part.value),
                        })).collect::<Vec<_>>(),
                        "remainder": complex_json(split.remainder),
                        "remainder_magnitude": split.remainder.norm(),
                        "total": complex_json(split.total),
                    },
                    "direct": complex_json(*direct),
                    "identity_diff": diff,
                })).collect::<Vec<_>>(),
                "identity_ok": identity_ok,
            });
            render_json(&envelope("critical", config, result))
        }
        Format::Csv => {
            let mut table = String::from("p,m,part,re,im,magnitude\n");
            for (p, _, split, direct, _) in &reports {
                for part in &split.parts {
                    table.push_str(&format!(
                        "{p},{m},z={},{},{},{}\n",
                        part.z,
                        part.value.re,
                        part.value.im,
                        part.value.norm()
                    ));
                }
                table.push_str(&format!(
                    "{p},{m},remainder,{},{},{}\n",
                    split.remainder.re,
                    split.remainder.im,
                    split.remainder.norm()
                ));
                table.push_str(&format!(
                    "{p},{m},total,{},{},{}\n",
                    direct.re,
                    direct.im,
                    direct.norm()
                ));
            }
            render_csv(&config_pairs(&config), &table)
        }
        Format::Plain => {
            let mut s = String::new();
            for (p, rep, split, _, diff) in &reports {
                s.push_str(&format!(
                    "p={p}: crit values mod p {:?}, conditions {:?}\n",
                    rep.crit_values_mod_p, rep.condition_checks
                ));
                for part in &split.parts {
                    s.push_str(&format!("  part z={}: {}\n", part.z, fmtc(part.value)));
                }
                s.push_str(&format!(
                    "  remainder: {} (|.| = {})\n  identity diff: {diff}\n",
                    fmtc(split.remainder),
                    split.remainder.norm()
                ));
            }
            s
        }
    };
    Ok(CmdResult {
        text,
        check_failed: !identity_ok,
        output_path: output,
    })
}

// ----------------------------------------------------------------- verify

pub enum SigmaSource {
    Explicit(f64),
    Resolution(String),
    Jet,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_verify(
    r: Resolved,
    variant: SumVariant,
    sigma_source: SigmaSource,
    primes: Vec<u64>,
    m_range: (u32, u32),
    declared_c: Option<f64>,
    fit_lambdas: Option<Vec<f64>>,
    fit_period: u32,
    output: Option<String>,
) -> Result<CmdResult> {
    let (sigma, sigma_desc, lambdas_from_data) = match &sigma_source {
        SigmaSource::Explicit(s) => (*s, format!("explicit:{s}"), None),
        SigmaSource::Resolution(path) => {
            let data = load_data(path)?;
            let lct = lct_from_resolution(&data)?;
            let poles = pole_ledger(&data, *primes.first().unwrap_or(&5))?;
            let lambdas: Vec<f64> = poles
                .iter()
                .map(|e| -igusa_core::zeta::rational_to_f64(&e.lambda))
                .collect();
            (
                sigma_of(igusa_core::zeta::rational_to_f64(&lct)),
                format!("resolution:{path}"),
                Some(lambdas),
            )
        }
        SigmaSource::Jet => {
            let est = lct_jet_estimate(
                &r.poly,
                &primes,
                m_range.1.min(6),
                &variant.residue_box(r.nvars),
                r.budget,
                Default::default(),
            )?;
            (sigma_of(est.inf_value), "jet-estimate".into(), None)
        }
    };

    let report = sweep_and_fit(
        &r.poly,
        &variant,
        sigma,
        &primes,
        m_range,
        r.budget,
        declared_c,
        Default::default(),
    )?;

    // Decay-model fit against the candidate exponents, when supplied.
    let lambdas = fit_lambdas.or(lambdas_from_data);
    let fit = match &lambdas {
        Some(ls) if !ls.is_empty() => {
            let p = *primes.last().expect("nonempty");
            let samples: Vec<(u32, Complex64)> = report
                .grid
                .iter()
                .filter(|g| g.p == p)
                .map(|g| {
                    let level = PadicLevel::new(g.p, g.m)?;
                    let hist = build_histogram(
                        &r.poly,
                        &level,
                        &variant.residue_box(r.nvars),
                        r.budget,
                    )?;
                    Ok((g.m, exp_sum(&hist).value))
                })
                .collect::<Result<_>>()?;
            Some((p, fit_cor27_model(&samples, p, ls, r.nvars as u32, fit_period)?))
        }
        _ => None,
    };

    let config = json!({
        "poly": r.poly_text, "nvars": r.nvars, "variant": variant.label(),
        "sigma": sigma, "sigma_source": sigma_desc, "primes": primes,
        "m_range": [m_range.0, m_range.1], "declared_c": declared_c,
        "fit_lambdas": lambdas, "fit_period": fit_period,
        "budget": r.budget.0.to_string(),
    });
    let check_failed = !report.violations.is_empty();
    let text = match r.format {
        Format::Json => {
            let mut result = json!({
                "grid": report.grid.iter().map(|g| json!({
                    "p": g.p, "m": g.m, "abs_e": g.abs_e, "bound_ratio": g.bound_ratio,
                })).collect::<Vec<_>>(),
                "c_fit": report.c_fit,
                "c_fit_top_half": report.c_fit_top_half,
                "c_fit_largest_p": report.c_fit_largest_p,
                "violations": report.violations.iter().map(|g| json!({
                    "p": g.p, "m": g.m, "bound_ratio": g.bound_ratio,
                })).collect::<Vec<_>>(),
            });
            if let Some((p, fits)) = &fit {
                result["fit"] = json!({
                    "p": p,
                    "classes": fits.iter().map(|f| json!({
                        "class": f.class.0, "modulus": f.class.1,
                        "terms": f.terms.iter().map(|t| json!({
                            "lambda": t.lambda, "beta": t.beta,
                            "coeff": complex_json(t.coeff),
                        })).collect::<Vec<_>>(),
                        "residual": f.residual,
                        "flagged": f.flagged,
                    })).collect::<Vec<_>>(),
                });
            }
            render_json(&envelope("verify", config, result))
        }
        Format::Csv => {
            let mut table = String::from("p,m,abs_e,bound_ratio,violation\n");
            for g in &report.grid {
                let viol = declared_c.map(|c| g.bound_ratio > c).unwrap_or(false);
                table.push_str(&format!(
                    "{},{},{},{},{}\n",
                    g.p, g.m, g.abs_e, g.bound_ratio, viol
                ));
            }
            render_csv(&config_pairs(&config), &table)
        }
        Format::Plain => {
            let mut s = format!(
                "sweep {} variant={} sigma={sigma}\n",
                r.poly_text,
                variant.label()
            );
            s.push_str(&format!(
                "C_fit = {} (top-half primes {}, largest prime {})\n",
                report.c_fit, report.c_fit_top_half, report.c_fit_largest_p
            ));
            s.push_str(&format!("violations: {}\n", report.violations.len()));
            if let Some((p, fits)) = &fit {
                for f in fits {
                    s.push_str(&format!(
                        "fit at p={p} class {} mod {}: residual {}\n",
                        f.class.0, f.class.1, f.residual
                    ));
                }
            }
            s
        }
    };
    Ok(CmdResult {
        text,
        check_failed,
        output_path: output,
    })
}
