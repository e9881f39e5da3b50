mod common;

use approx::assert_relative_eq;
use proptest::prelude::*;
use valuscope::complexity::*;
use valuscope::distribution::*;
use valuscope::horizons::*;
use valuscope::infoflow::*;
use valuscope::market_data::{eps_proxy, ingest_reader};
use valuscope::{DailySeries, IngestConfig, TRADING_YEAR};

fn prices(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1.0f64..5000.0, len)
}

/// Samples on a 1/64 grid so shifted bin edges never land within rounding
/// distance of a sample.
fn dyadic(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-6400i32..6400).prop_map(|k| f64::from(k) / 64.0), len)
}

fn series_with_pe() -> impl Strategy<Value = DailySeries> {
    (prices(2..80), 0usize..80, prop::collection::vec(1.0f64..80.0, 80)).prop_map(
        |(close, gap, pe)| {
            let n = close.len();
            let start = gap.min(n);
            let pe = (0..n).map(|i| (i >= start).then(|| pe[i])).collect();
            DailySeries::new(common::dates(n), close, pe).unwrap()
        },
    )
}

fn distinct(xs: &[f64]) -> bool {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    s.windows(2).all(|w| w[0] < w[1])
}

/// Strictly increasing piecewise-linear map sending the i-th smallest
/// sample to i.
fn rank_map(xs: &[f64]) -> impl Fn(f64) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    move |v| {
        let n = s.len();
        if v <= s[0] {
            return v - s[0];
        }
        if v >= s[n - 1] {
            return (n - 1) as f64 + (v - s[n - 1]);
        }
        let i = s.partition_point(|x| *x <= v) - 1;
        i as f64 + (v - s[i]) / (s[i + 1] - s[i])
    }
}

proptest! {
    #[test]
    fn csv_round_trip(series in series_with_pe()) {
        let mut buf = Vec::new();
        series.write_csv(&mut buf).unwrap();
        let back = ingest_reader(buf.as_slice(), IngestConfig::default()).unwrap();
        prop_assert_eq!(back, series);
    }

    #[test]
    fn eps_times_pe_is_close(series in series_with_pe()) {
        prop_assume!(series.pe_start().is_some());
        let eps = eps_proxy(&series).unwrap();
        let start = series.pe_start().unwrap();
        for (i, e) in eps.eps.iter().enumerate() {
            let close = series.close()[start + i];
            let back = e * series.pe()[start + i].unwrap();
            prop_assert!((back - close).abs() <= close * f64::EPSILON);
        }
    }

    #[test]
    fn subset_is_idempotent(series in series_with_pe(), a in 0usize..80, b in 0usize..80) {
        let d = series.dates();
        let (lo, hi) = (a.min(b).min(d.len() - 1), a.max(b).min(d.len() - 1));
        let once = series.subset_by_date(d[lo], d[hi]).unwrap();
        let twice = once.subset_by_date(d[lo], d[hi]).unwrap();
        prop_assert_eq!(once.len(), hi - lo + 1);
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn one_year_cagr_is_identity(r in -99.99f64..1e4) {
        prop_assert_eq!(to_cagr(r, 1).unwrap(), r);
    }

    #[test]
    fn cagr_compounds_back(r in -99.0f64..1e4, years in 1u32..30) {
        let c = to_cagr(r, years).unwrap();
        prop_assert!(c > -100.0);
        let total = (1.0 + c / 100.0).powi(years as i32);
        assert_relative_eq!(total, 1.0 + r / 100.0, max_relative = 1e-9);
    }

    #[test]
    fn forward_returns_shift_equivariant(close in prices(10..60), extra in prices(1..20), days in 1usize..9) {
        let spec = HorizonSpec::new("h", days).unwrap();
        let base = DailySeries::from_closes(common::dates(close.len()), close.clone()).unwrap();
        let k = extra.len();
        let longer: Vec<f64> = extra.into_iter().chain(close).collect();
        let shifted = DailySeries::from_closes(common::dates(longer.len()), longer).unwrap();
        let a = forward_returns(&base, &spec).unwrap();
        let b = forward_returns(&shifted, &spec).unwrap();
        prop_assert_eq!(&b.returns[k..], &a.returns[..]);
        prop_assert_eq!(&b.start_dates[k..], &shifted.dates()[k..k + a.returns.len()]);
    }

    #[test]
    fn horizon_extrema_bound_samples(close in prices(30..200)) {
        let series = DailySeries::from_closes(common::dates(close.len()), close).unwrap();
        let ladder = parse_ladder("1d,1w,2w,1m").unwrap();
        for row in ladder_summaries(&series, &ladder) {
            let (set, _, s) = row.unwrap();
            prop_assert!(set.returns.iter().all(|r| s.min <= *r && *r <= s.max));
            prop_assert!(s.min <= s.mode && s.mode <= s.max);
            prop_assert!((0.0..=1.0).contains(&s.mode_prob));
        }
    }

    #[test]
    fn trapping_horizon_scan(mins in prop::collection::vec(-5.0f64..5.0, 0..15)) {
        let summaries: Vec<HorizonSummary> = mins
            .iter()
            .enumerate()
            .map(|(i, &min)| HorizonSummary {
                spec: HorizonSpec::new(format!("{}D", i + 1), i + 1).unwrap(),
                min,
                max: min + 1.0,
                mode: min,
                mode_prob: 1.0,
            })
            .collect();
        let first_safe = mins.iter().rposition(|m| *m < 0.0).map_or(0, |i| i + 1);
        let expected = summaries.get(first_safe).map(|s| s.spec.clone());
        prop_assert_eq!(trapping_horizon(&summaries), expected);
    }

    #[test]
    fn pmf_is_normalized(xs in prop::collection::vec(-1e6f64..1e6, 1..400)) {
        let pmf = build_pmf(&xs).unwrap();
        prop_assert!((pmf.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(pmf.probs().iter().all(|p| *p >= 0.0));
        prop_assert!(pmf.edges().windows(2).all(|w| w[0] < w[1]));
        for (i, m) in pmf.mids().iter().enumerate() {
            prop_assert_eq!(*m, (pmf.edges()[i] + pmf.edges()[i + 1]) / 2.0);
        }
        let a = asymmetry(&pmf);
        prop_assert!((a.prp + a.nrp + a.zero_prob - 1.0).abs() <= 1e-12);
        prop_assert!(a.exp_pos >= 0.0 && a.exp_neg >= 0.0);
        prop_assert!(a.rrr_magnitude.is_none_or(|r| r >= 0.0));
        prop_assert!(a.rrr_probability.is_none_or(|r| r >= 0.0));
        let s = pmf_stats(&pmf, &xs, &[0.0]);
        prop_assert!(s.band1.coverage <= s.band2.coverage);
        prop_assert!((0.0..=1.0).contains(&s.band2.coverage));
    }

    #[test]
    fn shift_moves_location_only(xs in dyadic(2..300), c in -1000i32..1000) {
        let c = f64::from(c);
        let shifted: Vec<f64> = xs.iter().map(|x| x + c).collect();
        let (p, q) = (build_pmf(&xs).unwrap(), build_pmf(&shifted).unwrap());
        prop_assert_eq!(p.probs(), q.probs());
        let (s, t) = (pmf_stats(&p, &xs, &[]), pmf_stats(&q, &shifted, &[]));
        let tol = 1e-9 * (1.0 + c.abs());
        prop_assert!((t.mode - s.mode - c).abs() <= tol);
        prop_assert!((t.mean - s.mean - c).abs() <= tol);
        prop_assert!((t.band1.lo - s.band1.lo - c).abs() <= tol);
        prop_assert!((t.band2.hi - s.band2.hi - c).abs() <= tol);
        prop_assert_eq!(t.band1.coverage, s.band1.coverage);
        prop_assert_eq!(t.band2.coverage, s.band2.coverage);
    }

    #[test]
    fn negation_swaps_sides(xs in prop::collection::vec(-100.0f64..100.0, 2..300)) {
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        let (a, b) = (asymmetry(&build_pmf(&xs).unwrap()), asymmetry(&build_pmf(&neg).unwrap()));
        prop_assert!((a.exp_pos - b.exp_neg).abs() <= 1e-9);
        prop_assert!((a.exp_neg - b.exp_pos).abs() <= 1e-9);
        prop_assert!((a.prp - b.nrp).abs() <= 1e-12);
        prop_assert!((a.nrp - b.prp).abs() <= 1e-12);
    }

    #[test]
    fn entropies_are_normalized(xs in prop::collection::vec(-100.0f64..100.0, 10..300), q in 0.05f64..4.0) {
        prop_assume!((q - 1.0).abs() > 1e-6);
        let pmf = build_pmf(&xs).unwrap();
        let s = shannon_entropy_norm(&pmf);
        let t = tsallis_entropy_norm(&pmf, q).unwrap();
        let p = permutation_entropy_norm(&xs, 3, 1).unwrap();
        for v in [s, t, p] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn tsallis_approaches_shannon(xs in prop::collection::vec(-100.0f64..100.0, 10..300)) {
        let pmf = build_pmf(&xs).unwrap();
        let s = shannon_entropy_norm(&pmf);
        prop_assert!((tsallis_entropy_norm(&pmf, 1.0001).unwrap() - s).abs() <= 1e-3);
        prop_assert!((tsallis_entropy_norm(&pmf, 0.9999).unwrap() - s).abs() <= 1e-3);
    }

    #[test]
    fn permutation_entropy_monotone_invariant(ks in prop::collection::vec(-1000i32..1000, 20..300), d in 2usize..6, tau in 1usize..3) {
        prop_assume!(ks.len() > (d - 1) * tau + 1);
        let xs: Vec<f64> = ks.iter().map(|k| f64::from(*k) / 100.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.powi(3) + x.exp()).collect();
        prop_assert_eq!(
            permutation_entropy_norm(&xs, d, tau).unwrap(),
            permutation_entropy_norm(&ys, d, tau).unwrap()
        );
    }

    #[test]
    fn hurst_affine_invariant(steps in prop::collection::vec(-1.0f64..1.0, 80..400), a in 0.01f64..100.0, flip in any::<bool>(), b in -1e3f64..1e3) {
        let a = if flip { -a } else { a };
        let x = common::cumsum(&steps);
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let qs = [1.0, 2.0, 3.0];
        let (hx, hy) = (
            generalized_hurst(&x, &qs, &default_taus()).unwrap(),
            generalized_hurst(&y, &qs, &default_taus()).unwrap(),
        );
        for (u, v) in hx.h.iter().zip(&hy.h) {
            prop_assert!(u.is_finite());
            prop_assert!((u - v).abs() <= 1e-9, "{} vs {}", u, v);
        }
    }

    #[test]
    fn mi_is_symmetric(xs in prop::collection::vec(-10.0f64..10.0, 20..400), seed in any::<u64>()) {
        let ys: Vec<f64> = xs.iter().zip(common::coins(xs.len(), seed)).map(|(x, c)| x.sin() + c).collect();
        match (mutual_information(&xs, &ys), mutual_information(&ys, &xs)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a, b);
                prop_assert!(a >= 0.0);
            }
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn mi_rank_transform_equivalence(xs in prop::collection::vec(-10.0f64..10.0, 20..300), ys in prop::collection::vec(-10.0f64..10.0, 300)) {
        prop_assume!(distinct(&xs));
        let ys = &ys[..xs.len()];
        let (ex, ey) = (fd_edges(&xs).unwrap().0, fd_edges(ys).unwrap().0);
        let rank = rank_map(&xs);
        let rx: Vec<f64> = xs.iter().map(|v| rank(*v)).collect();
        let rex: Vec<f64> = ex.iter().map(|v| rank(*v)).collect();
        let plain = JointHistogram::with_edges(&xs, ys, ex, ey.clone()).unwrap();
        let ranked = JointHistogram::with_edges(&rx, ys, rex, ey).unwrap();
        prop_assert_eq!(&plain.joint, &ranked.joint);
        prop_assert_eq!(plain.mutual_information(), ranked.mutual_information());
    }

    #[test]
    fn joint_histogram_marginals(xs in prop::collection::vec(-10.0f64..10.0, 20..300), ys in prop::collection::vec(-10.0f64..10.0, 300)) {
        let ys = &ys[..xs.len()];
        let h = JointHistogram::new(&xs, ys).unwrap();
        let total: f64 = h.joint.iter().flatten().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        for (m, p) in [(h.x_marginal(), build_pmf(&xs).unwrap()), (h.y_marginal(), build_pmf(ys).unwrap())] {
            for (a, b) in m.iter().zip(p.probs()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn nmi_of_self_is_one(xs in prop::collection::vec(-10.0f64..10.0, 20..300)) {
        prop_assume!(Discretized::new(&xs).unwrap().bins() > 1);
        let v = normalized_mutual_information(&xs, &xs).unwrap();
        prop_assert!((v - 1.0).abs() <= 1e-12, "{}", v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn conditional_cells_partition_starts(
        close in prices(TRADING_YEAR + 2..TRADING_YEAR + 120),
        pe in prop::collection::vec(5.0f64..40.0, TRADING_YEAR + 120),
        gap in 0usize..50,
    ) {
        let n = close.len();
        let pe: Vec<Option<f64>> = (0..n).map(|i| (i >= gap).then(|| pe[i])).collect();
        let series = DailySeries::new(common::dates(n), close, pe.clone()).unwrap();
        let cells = conditional_cells(&series, 1).unwrap();
        let valid = (0..n - TRADING_YEAR)
            .filter(|&t| pe[t].is_some_and(|p| (10.0..31.0).contains(&p)))
            .count();
        prop_assert_eq!(cells.iter().map(|c| c.n).sum::<usize>(), valid);
        for c in &cells {
            prop_assert!((PE_BAND_MIN..=PE_BAND_MAX).contains(&c.band_lo));
            prop_assert!(c.stats.prp + c.stats.nrp <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn sample_entropy_non_increasing_in_r(seed in any::<u64>(), r1 in 0.1f64..1.0, dr in 0.0f64..0.5) {
        let mut rng = common::rng(seed);
        let x = common::gaussian(&mut rng, 400);
        let a = sample_entropy(&x, 2, r1).unwrap();
        let b = sample_entropy(&x, 2, r1 + dr).unwrap();
        prop_assert!(a >= 0.0 && b >= 0.0);
        prop_assert!(b <= a + 1e-12, "r={} -> {}, r={} -> {}", r1, a, r1 + dr, b);
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let series = common::gaussian_prices(600, 0.01, seed);
        let pe: Vec<Option<f64>> = series.close().iter().map(|c| Some(c / 5.0)).collect();
        let series = DailySeries::new(series.dates().to_vec(), series.close().to_vec(), pe).unwrap();
        let a = info_report(&series, 1, 10).unwrap();
        let b = info_report(&series, 1, 10).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.mi >= 0.0 && (0.0..=1.0).contains(&a.nmi));
        prop_assert!(a.te_forward.value >= 0.0 && a.te_backward.value >= 0.0);
        let p = lyapunov_spectrum(series.close(), 3, 1).unwrap();
        prop_assert_eq!(p.clone(), lyapunov_spectrum(series.close(), 3, 1).unwrap());
        prop_assert!(p.spectrum.windows(2).all(|w| w[0] >= w[1]));
    }
}
