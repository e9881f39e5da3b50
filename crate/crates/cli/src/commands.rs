use chrono::Month;
use serde::Serialize;
use serde_json::{json, Value};
use valuscope::complexity::{
    complexity_profile, default_taus, entropy_report, generalized_hurst, lyapunov_spectrum_with,
    EntropyParams, LyapunovParams, ProfileEntry, ProfileParams,
};
use valuscope::distribution::{
    asymmetry, build_pmf, conditional_cells, monthly_pmfs, pmf_stats, Pmf, PmfStats,
};
use valuscope::horizons::{
    cagr_table, forward_returns, ladder_summaries, parse_ladder, trapping_horizon, HorizonSpec,
};
use valuscope::infoflow::{
    lagged_nmi, mutual_information, normalized_mutual_information, pe_return_pairs,
    transfer_entropy, JointHistogram,
};
use valuscope::market_data::eps_proxy;
use valuscope::{DailySeries, Error};

use crate::args::*;
use crate::report::fmt_num;
use crate::svg::{emit_svg, Plot};
use crate::CliError;

/// P/E levels marked on the P/E distribution.
pub const PE_MARKERS: [f64; 3] = [16.0, 26.0, 30.0];

/// Everything one subcommand produces, before it is written to disk.
pub struct Output {
    pub name: &'static str,
    pub parameters: Value,
    pub report: Value,
    pub csv: Option<String>,
    /// `(file stem, document)`.
    pub svgs: Vec<(String, String)>,
}

impl Output {
    fn new(name: &'static str, args: &impl Serialize, report: Value) -> Self {
        let parameters = serde_json::to_value(args).expect("arguments serialize");
        Self { name, parameters, report, csv: None, svgs: Vec::new() }
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV text is UTF-8")
}

fn ratio_cell(r: Option<f64>) -> String {
    r.map(fmt_num).unwrap_or_default()
}

fn error_entry(label: &str, days: usize, e: &Error) -> Value {
    json!({ "label": label, "days": days, "error": e.to_string() })
}

pub fn series_values(series: &DailySeries, kind: SeriesKind) -> Result<Vec<f64>, Error> {
    match kind {
        SeriesKind::Pe => {
            let v = series.pe_values();
            if v.is_empty() {
                Err(Error::NoPeCoverage)
            } else {
                Ok(v)
            }
        }
        SeriesKind::Close => Ok(series.close().to_vec()),
        SeriesKind::Returns => {
            Ok(forward_returns(series, &HorizonSpec::new("1D", 1)?)?.returns)
        }
    }
}

/// Parses `1..5`, `0.5,2` or a mix such as `1..3,4.5`.
pub fn parse_orders(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("invalid order list {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (u32, u32) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            out.extend((a..=b).map(f64::from));
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn pmf_json(pmf: &Pmf, stats: &PmfStats) -> Value {
    json!({ "pmf": pmf, "stats": stats, "asymmetry": asymmetry(pmf) })
}

fn bin_rows(prefix: &[String], pmf: &Pmf) -> Vec<Vec<String>> {
    let e = pmf.edges();
    (0..pmf.bins())
        .map(|i| {
            let mut row = prefix.to_vec();
            row.extend([fmt_num(e[i]), fmt_num(e[i + 1]), fmt_num(pmf.mids()[i]), fmt_num(pmf.probs()[i])]);
            row
        })
        .collect()
}

#[derive(Serialize)]
struct NoArgs {}

pub fn ingest_check(series: &DailySeries) -> Result<Output, CliError> {
    let eps = match eps_proxy(series) {
        Ok(e) => Some(e),
        Err(Error::NoPeCoverage) => None,
        Err(e) => return Err(e.into()),
    };
    let start = series.pe_start();
    let date = |i: usize| series.dates()[i].to_string();
    let report = json!({
        "rows": series.len(),
        "first_date": date(0),
        "last_date": date(series.len() - 1),
        "pe_start": start.map(date),
        "pe_rows": start.map_or(0, |s| series.len() - s),
        "last_eps": eps.as_ref().and_then(|e| e.eps.last()),
        "last_trailing_eps_growth": eps.as_ref().and_then(|e| e.trailing_growth.last().copied().flatten()),
    });
    let offset = start.unwrap_or(series.len());
    let rows = (0..series.len()).map(|i| {
        let pe = series.pe()[i];
        let (e, g) = match (&eps, i.checked_sub(offset)) {
            (Some(eps), Some(j)) => (fmt_num(eps.eps[j]), eps.trailing_growth[j].map(fmt_num).unwrap_or_default()),
            _ => (String::new(), String::new()),
        };
        vec![date(i), fmt_num(series.close()[i]), pe.map(fmt_num).unwrap_or_default(), e, g]
    });
    let csv = table(&["Date", "Close", "PE", "EPS", "Trailing EPS Growth (%)"], rows);
    Ok(Output::new("ingest-check", &NoArgs {}, report).with_csv(csv))
}

pub fn returns(series: &DailySeries, args: &LadderArgs) -> Result<Output, CliError> {
    let ladder = parse_ladder(&args.horizons)?;
    let results = ladder_summaries(series, &ladder);
    let mut entries = Vec::new();
    let mut summaries = Vec::new();
    for (spec, r) in ladder.iter().zip(&results) {
        match r {
            Ok((set, pmf, summary)) => {
                entries.push(json!({
                    "label": spec.label,
                    "days": spec.days,
                    "n": set.returns.len(),
                    "summary": summary,
                    "returns": set.returns,
                    "pmf": pmf,
                }));
                summaries.push(summary.clone());
            }
            Err(e) => entries.push(error_entry(&spec.label, spec.days, e)),
        }
    }
    let trapping = trapping_horizon(&summaries);
    let report = json!({ "horizons": entries, "trapping_horizon": trapping.map(|s| s.label) });
    let rows = summaries.iter().map(|s| {
        vec![
            s.spec.label.clone(),
            s.spec.days.to_string(),
            fmt_num(s.min),
            fmt_num(s.max),
            fmt_num(s.mode),
            fmt_num(s.mode_prob),
        ]
    });
    let csv = table(&["Horizon", "Days", "Min (%)", "Max (%)", "Mode (%)", "Mode Probability"], rows);
    let mut out = Output::new("returns", args, report).with_csv(csv);
    if let Ok(svg) = emit_svg(&Plot::HorizonLines(&summaries)) {
        out.svgs.push(("returns".into(), svg));
    }
    Ok(out)
}

pub fn cagr(series: &DailySeries, args: &YearsArgs) -> Result<Output, CliError> {
    let table_rows = cagr_table(series, args.max_years);
    let entries: Vec<Value> = table_rows
        .iter()
        .zip(1..)
        .map(|(r, years): (_, u32)| match r {
            Ok(row) => serde_json::to_value(row).expect("serializes"),
            Err(e) => json!({ "years": years, "error": e.to_string() }),
        })
        .collect();
    let rows = table_rows.iter().flatten().map(|r| {
        vec![format!("{} Year", r.years), fmt_num(r.min_cagr), fmt_num(r.max_cagr), fmt_num(r.mode_cagr)]
    });
    let csv = table(&["Holding Period", "Min CAGR (%)", "Max CAGR (%)", "Mode CAGR (%)"], rows);
    Ok(Output::new("cagr", args, json!({ "rows": entries })).with_csv(csv))
}

pub fn pmf(series: &DailySeries, args: &PmfArgs) -> Result<Output, CliError> {
    let ladder = parse_ladder(&args.horizons)?;
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut svgs = Vec::new();
    for spec in &ladder {
        let built = forward_returns(series, spec).and_then(|set| Ok((build_pmf(&set.returns)?, set)));
        match built {
            Ok((pmf, set)) => {
                let stats = pmf_stats(&pmf, &set.returns, &[0.0]);
                let mut entry = pmf_json(&pmf, &stats);
                entry["label"] = json!(spec.label);
                entry["days"] = json!(spec.days);
                entries.push(entry);
                rows.extend(bin_rows(std::slice::from_ref(&spec.label), &pmf));
                let title = format!("{} return PMF (%)", spec.label);
                let svg = emit_svg(&Plot::PmfBars { title: &title, pmf: &pmf, stats: &stats })?;
                svgs.push((format!("pmf-{}", spec.label), svg));
            }
            Err(e) => entries.push(error_entry(&spec.label, spec.days, &e)),
        }
    }
    let csv = table(&["Horizon", "Bin Low", "Bin High", "Midpoint", "Probability"], rows);
    let mut out = Output::new("pmf", args, json!({ "horizons": entries })).with_csv(csv);
    out.svgs = svgs;
    Ok(out)
}

pub fn pe_pmf(series: &DailySeries) -> Result<Output, CliError> {
    let pe = series_values(series, SeriesKind::Pe)?;
    let pmf = build_pmf(&pe)?;
    let stats = pmf_stats(&pmf, &pe, &PE_MARKERS);
    let mut report = pmf_json(&pmf, &stats);
    report["n"] = json!(pe.len());
    let csv = table(&["Bin Low", "Bin High", "Midpoint", "Probability"], bin_rows(&[], &pmf));
    let svg = emit_svg(&Plot::PmfBars { title: "P/E ratio PMF", pmf: &pmf, stats: &stats })?;
    let mut out = Output::new("pe-pmf", &NoArgs {}, report).with_csv(csv);
    out.svgs.push(("pe-pmf".into(), svg));
    Ok(out)
}

pub fn pe_monthly(series: &DailySeries) -> Result<Output, CliError> {
    let start = series.pe_start().ok_or(Error::NoPeCoverage)?;
    let months = monthly_pmfs(&series.dates()[start..], &series.pe_values())?;
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for m in &months {
        let name = Month::try_from(m.month as u8).expect("months are 1..=12").name();
        match &m.pmf {
            Ok(pmf) => {
                let stats = pmf_stats(pmf, &m.samples, &PE_MARKERS);
                rows.push(vec![
                    name.to_string(),
                    m.samples.len().to_string(),
                    fmt_num(stats.mode),
                    fmt_num(stats.mode_prob),
                    fmt_num(stats.mean),
                    fmt_num(stats.std),
                ]);
                entries.push(json!({ "month": m.month, "name": name, "n": m.samples.len(), "pmf": pmf, "stats": stats }));
            }
            Err(e) => entries.push(json!({ "month": m.month, "name": name, "n": 0, "error": e.to_string() })),
        }
    }
    let csv = table(&["Month", "Samples", "Mode", "Mode Probability", "Mean", "Std"], rows);
    Ok(Output::new("pe-monthly", &NoArgs {}, json!({ "months": entries })).with_csv(csv))
}

pub fn entropy(series: &DailySeries, args: &EntropyArgs) -> Result<Output, CliError> {
    let x = series_values(series, args.series)?;
    let params = EntropyParams {
        tsallis_qs: args.tsallis_q.clone(),
        sample_m: args.m,
        sample_r_factor: args.r,
        perm_order: args.order,
        perm_delay: args.delay,
    };
    let r = entropy_report(&x, &params)?;
    let lib = "valuscope".to_string();
    let mut rows = vec![vec![lib.clone(), "Shannon Entropy".into(), fmt_num(r.shannon_norm)]];
    for (q, v) in &r.tsallis_norm {
        rows.push(vec![lib.clone(), format!("Tsallis Entropy (q={})", fmt_num(*q)), fmt_num(*v)]);
    }
    rows.push(vec![lib.clone(), "Sample Entropy".into(), r.sample_entropy.map(fmt_num).unwrap_or_default()]);
    rows.push(vec![lib, "Permutation Entropy".into(), fmt_num(r.permutation_norm)]);
    let csv = table(&["Library", "Entropy Type", "Normalized Value"], rows);
    let report = json!({ "n": x.len(), "entropy": r });
    Ok(Output::new("entropy", args, report).with_csv(csv))
}

pub fn hurst(series: &DailySeries, args: &HurstArgs) -> Result<Output, CliError> {
    let x = series_values(series, args.series)?;
    let qs = parse_orders(&args.q)?;
    let curve = generalized_hurst(&x, &qs, &default_taus())?;
    let rows = curve.qs.iter().zip(&curve.h).map(|(q, h)| vec![fmt_num(*q), fmt_num(*h)]);
    let csv = table(&["Order q", "Generalized Hurst Exponent H(q)"], rows);
    Ok(Output::new("hurst", args, json!({ "n": x.len(), "hurst": curve })).with_csv(csv))
}

pub fn lyapunov(series: &DailySeries, args: &LyapunovArgs) -> Result<Output, CliError> {
    let x = series_values(series, args.series)?;
    let r = lyapunov_spectrum_with(&x, LyapunovParams::new(args.embedding.dim, args.embedding.delay))?;
    let mut rows: Vec<Vec<String>> =
        r.spectrum.iter().enumerate().map(|(i, v)| vec![format!("λ{}", i + 1), fmt_num(*v)]).collect();
    rows.push(vec!["h_KS".into(), fmt_num(r.ks_entropy)]);
    rows.push(vec!["D_KY".into(), fmt_num(r.ky_dimension)]);
    let csv = table(&["Lyapunov Exponent", "Value"], rows);
    Ok(Output::new("lyapunov", args, json!({ "n": x.len(), "lyapunov": r })).with_csv(csv))
}

#[derive(Serialize)]
struct ProfileArgs<'a> {
    #[serde(flatten)]
    ladder: &'a LadderArgs,
    #[serde(flatten)]
    embedding: &'a EmbeddingArgs,
}

pub fn profile(series: &DailySeries, ladder: &LadderArgs, embedding: &EmbeddingArgs) -> Result<Output, CliError> {
    let specs = parse_ladder(&ladder.horizons)?;
    let params = ProfileParams {
        taus: default_taus(),
        lyapunov: LyapunovParams::new(embedding.dim, embedding.delay),
    };
    let mut entries = Vec::new();
    let mut ok: Vec<ProfileEntry> = Vec::new();
    for (spec, r) in complexity_profile(series, &specs, &params) {
        match r {
            Ok(e) => {
                entries.push(serde_json::to_value(&e).expect("serializes"));
                ok.push(e);
            }
            Err(e) => entries.push(error_entry(&spec.label, spec.days, &e)),
        }
    }
    let rows = ok.iter().map(|e| {
        vec![
            e.spec.label.clone(),
            e.spec.days.to_string(),
            e.n.to_string(),
            fmt_num(e.sne),
            fmt_num(e.hurst2),
            fmt_num(e.largest_lyapunov),
        ]
    });
    let csv = table(&["Horizon", "Days", "Samples", "SNE", "H(2)", "LLE"], rows);
    let args = ProfileArgs { ladder, embedding };
    let mut out = Output::new("profile", &args, json!({ "horizons": entries })).with_csv(csv);
    if let Ok(svg) = emit_svg(&Plot::ComplexityTriptych(&ok)) {
        out.svgs.push(("profile".into(), svg));
    }
    Ok(out)
}

pub fn mi(series: &DailySeries) -> Result<Output, CliError> {
    let (driver, target) = pe_return_pairs(series)?;
    let value = mutual_information(&driver, &target)?;
    let nmi = normalized_mutual_information(&driver, &target)?;
    let h = JointHistogram::new(&driver, &target)?;
    let report = json!({
        "n": driver.len(),
        "mi": value,
        "nmi": nmi,
        "driver_edges": h.x_edges,
        "target_edges": h.y_edges,
    });
    Ok(Output::new("mi", &NoArgs {}, report))
}

pub fn nmi(series: &DailySeries, args: &NmiArgs) -> Result<Output, CliError> {
    let (driver, target) = pe_return_pairs(series)?;
    let curve = lagged_nmi(&driver, &target, args.max_lag)?;
    let lags: Vec<usize> = (1..=curve.len()).collect();
    let peak = curve
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, v)| match best {
            Some((_, b)) if b >= *v => best,
            _ => Some((i + 1, *v)),
        });
    let report = json!({
        "n": driver.len(),
        "lags": lags,
        "nmi": curve,
        "peak_lag": peak.map(|p| p.0),
    });
    let rows = curve.iter().zip(1..).map(|(v, lag): (_, usize)| vec![lag.to_string(), fmt_num(*v)]);
    let csv = table(&["Lag", "NMI"], rows);
    let mut out = Output::new("nmi", args, report).with_csv(csv);
    if let Ok(svg) = emit_svg(&Plot::NmiCurve(&curve)) {
        out.svgs.push(("nmi".into(), svg));
    }
    Ok(out)
}

pub fn te(series: &DailySeries, args: &TeArgs) -> Result<Output, CliError> {
    let (driver, target) = pe_return_pairs(series)?;
    let forward = transfer_entropy(&driver, &target, args.k)?;
    let backward = if args.both { Some(transfer_entropy(&target, &driver, args.k)?) } else { None };
    let report = json!({ "n": driver.len(), "k": args.k, "forward": forward, "backward": backward });
    Ok(Output::new("te", args, report))
}

pub fn conditional(series: &DailySeries, args: &ConditionalArgs) -> Result<Output, CliError> {
    let cells = conditional_cells(series, args.max_years)?;
    let entries: Vec<Value> = cells
        .iter()
        .map(|c| {
            let mut v = serde_json::to_value(c).expect("serializes");
            v["band"] = json!(c.band_label());
            v
        })
        .collect();
    let rows = cells.iter().map(|c| {
        vec![
            c.band_label(),
            format!("{} Year", c.years),
            fmt_num(c.stats.prp),
            fmt_num(c.stats.nrp),
            ratio_cell(c.stats.rrr_magnitude),
            ratio_cell(c.stats.rrr_probability),
        ]
    });
    let csv = table(
        &["PE Range", "Duration", "PRP", "NRP", "RRR (magnitude)", "RRR (probability)"],
        rows,
    );
    Ok(Output::new("conditional", args, json!({ "cells": entries })).with_csv(csv))
}
