use std::collections::BTreeSet;

use locrel_core::diversity::{
    gvf, jenks_breaks, profile_of, sdcm, shannon_index, simpson_index, true_diversity,
    AbundanceVector,
};
use locrel_core::entropy_rate::{entropy_rate, match_lengths};
use locrel_core::frequency::{distinct_locations, summary_locations};
use locrel_core::pipeline::{ingest_reader, write_trajectories};
use locrel_core::rank::{average_distribution, rank_distribution};
use locrel_core::rle::{rle_encode, rle_plus};
use locrel_core::synth::{generate_dataset, SynthConfig};
use locrel_core::taxonomy::{classify_locations, matching_degree};
use locrel_core::{
    summarize, LocationSymbol, SeqScanParams, Summarizer, SummaryTrajectory, SummaryUnit,
    SymbolicTrajectory,
};
use proptest::prelude::*;

const LABELS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

fn trajectory_strategy(max_len: usize) -> impl Strategy<Value = SymbolicTrajectory> {
    (1usize..=8)
        .prop_flat_map(move |k| prop::collection::vec((0..k, 0i64..=5), 0..=max_len))
        .prop_map(|steps| {
            let mut t = 0;
            let pairs: Vec<(&str, i64)> = steps
                .into_iter()
                .map(|(s, gap)| {
                    t += gap;
                    (LABELS[s], t)
                })
                .collect();
            SymbolicTrajectory::from_pairs("u", pairs).unwrap()
        })
}

fn params_strategy() -> impl Strategy<Value = SeqScanParams> {
    (
        2usize..=6,
        prop_oneof![(0u32..=20).prop_map(f64::from), 0.0f64..20.0],
    )
        .prop_map(|(n, d)| SeqScanParams::new(n, d).unwrap())
}

fn labels(t: &SymbolicTrajectory) -> Vec<&str> {
    t.symbols().map(|s| s.as_str()).collect()
}

/// Maximal runs of equal symbols as (label, count, duration).
fn runs(t: &SymbolicTrajectory) -> Vec<(String, usize, i64)> {
    let p = t.points();
    let mut out = Vec::new();
    let mut i = 0;
    while i < p.len() {
        let mut j = i;
        while j + 1 < p.len() && p[j + 1].location == p[i].location {
            j += 1;
        }
        out.push((
            p[i].location.to_string(),
            j - i + 1,
            p[j].timestamp - p[i].timestamp,
        ));
        i = j + 1;
    }
    out
}

fn type_set(s: &SummaryTrajectory) -> BTreeSet<String> {
    s.locations().map(|l| l.to_string()).collect()
}

/// SeqScan-d recomputed from its definition: after each reset, a symbol's
/// count and pair-weight are recounted from scratch over the points since
/// the reset, ignoring the currently dominant symbol.
fn reference_summary(
    t: &SymbolicTrajectory,
    n: usize,
    delta: f64,
) -> Vec<(i64, i64, String, usize, i64)> {
    let p = t.points();
    let stats = |sym: &LocationSymbol, from: usize, to: usize| {
        let count = (from..=to).filter(|&j| p[j].location == *sym).count();
        let weight: i64 = (from + 1..=to)
            .filter(|&j| p[j].location == *sym && p[j - 1].location == *sym)
            .map(|j| p[j].timestamp - p[j - 1].timestamp)
            .sum();
        (count, weight)
    };
    let unit = |sym: &LocationSymbol, from: usize, end: usize| {
        let first = (from..=end).find(|&j| p[j].location == *sym).unwrap();
        let (occ, w) = stats(sym, from, end);
        (
            p[first].timestamp,
            p[end].timestamp,
            sym.to_string(),
            occ,
            w,
        )
    };

    let mut out = Vec::new();
    let mut reset = 0;
    // (symbol, reset in force when it became dominant)
    let mut active: Option<(LocationSymbol, usize)> = None;
    for i in 0..p.len() {
        let x = &p[i].location;
        if active.as_ref().is_some_and(|(a, _)| a == x) {
            continue;
        }
        let (count, weight) = stats(x, reset, i);
        if count >= n && weight as f64 >= delta {
            let first = (reset..=i).find(|&j| p[j].location == *x).unwrap();
            if let Some((a, from)) = active.take() {
                let end = (from..first).rev().find(|&j| p[j].location == a).unwrap();
                out.push(unit(&a, from, end));
            }
            active = Some((x.clone(), reset));
            reset = i + 1;
        }
    }
    if let Some((a, from)) = active {
        let end = (from..p.len()).rev().find(|&j| p[j].location == a).unwrap();
        out.push(unit(&a, from, end));
    }
    out
}

fn as_tuples(s: &SummaryTrajectory) -> Vec<(i64, i64, String, usize, i64)> {
    s.units
        .iter()
        .map(|u| {
            (
                u.start,
                u.end,
                u.location.to_string(),
                u.occurrences,
                u.weight,
            )
        })
        .collect()
}

/// Exhaustive minimum SDCM over all partitions of sorted `v` into `k` classes.
fn brute_min_sdcm(v: &[f64], k: usize) -> f64 {
    fn rec(v: &[f64], k: usize, from: usize, breaks: &mut Vec<usize>, best: &mut f64) {
        if breaks.len() == k - 1 {
            *best = best.min(sdcm(v, breaks));
            return;
        }
        for b in from..v.len() {
            breaks.push(b);
            rec(v, k, b + 1, breaks, best);
            breaks.pop();
        }
    }
    let mut best = f64::INFINITY;
    rec(v, k, 1, &mut Vec::new(), &mut best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn summary_matches_reference_definition(t in trajectory_strategy(60), p in params_strategy()) {
        let got = summarize(&t, p);
        prop_assert_eq!(as_tuples(&got), reference_summary(&t, p.min_occurrences(), p.min_weight()));
    }

    #[test]
    fn streaming_equals_batch(t in trajectory_strategy(200), p in params_strategy()) {
        let mut s = Summarizer::new(p);
        let mut units = Vec::new();
        for point in t.points() {
            units.extend(s.push(point.clone()).unwrap());
        }
        units.extend(s.finish());
        prop_assert_eq!(units, summarize(&t, p).units);
    }

    #[test]
    fn units_are_ordered_dense_and_disjoint(t in trajectory_strategy(200), p in params_strategy()) {
        let s = summarize(&t, p);
        for u in &s.units {
            prop_assert!(u.start <= u.end);
            prop_assert!(u.occurrences >= p.min_occurrences());
            prop_assert!(u.weight as f64 >= p.min_weight());
        }
        for w in s.units.windows(2) {
            // Units may touch only when points share a timestamp.
            prop_assert!(w[0].end <= w[1].start);
            prop_assert_ne!(&w[0].location, &w[1].location);
        }
        prop_assert!(summary_locations(&s).is_subset(&distinct_locations(&t)));
    }

    #[test]
    fn every_dense_run_is_covered(t in trajectory_strategy(200), p in params_strategy()) {
        let types = type_set(&summarize(&t, p));
        for (label, count, duration) in runs(&t) {
            if count >= p.min_occurrences() && duration as f64 >= p.min_weight() {
                prop_assert!(types.contains(&label), "run of {} x{} over {}s missed", label, count, duration);
            }
        }
    }

    #[test]
    fn rle_round_trip(t in trajectory_strategy(200)) {
        let segs = rle_encode(&t);
        let expanded: Vec<&str> = segs
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.location.as_str(), s.count))
            .collect();
        prop_assert_eq!(expanded, labels(&t));
        for w in segs.windows(2) {
            prop_assert_ne!(&w[0].location, &w[1].location);
            prop_assert!(w[0].end <= w[1].start);
        }
        let brute: Vec<(String, usize, i64)> = runs(&t);
        let got: Vec<(String, usize, i64)> =
            segs.iter().map(|s| (s.location.to_string(), s.count, s.end - s.start)).collect();
        prop_assert_eq!(got, brute);
    }

    #[test]
    fn rle_plus_keeps_dense_runs(t in trajectory_strategy(200), p in params_strategy()) {
        let kept: Vec<(String, usize, i64)> = rle_plus(&t, p)
            .iter()
            .map(|s| (s.location.to_string(), s.count, s.end - s.start))
            .collect();
        let expected: Vec<(String, usize, i64)> = runs(&t)
            .into_iter()
            .filter(|(_, c, d)| *c >= p.min_occurrences() && *d as f64 >= p.min_weight())
            .collect();
        prop_assert_eq!(kept, expected);
    }

    #[test]
    fn taxonomy_partitions_native_types(t in trajectory_strategy(120), p in params_strategy()) {
        let s = summarize(&t, p);
        let part = classify_locations(&t, &s);
        let native = distinct_locations(&t);
        let mut union = BTreeSet::new();
        let classes = [&part.significant, &part.transit, &part.sporadic, &part.insignificant];
        let total: usize = classes.iter().map(|c| c.len()).sum();
        for c in classes {
            union.extend(c.iter().cloned());
        }
        prop_assert_eq!(total, native.len());
        prop_assert_eq!(&union, &native);
        prop_assert_eq!(part.transit.len(), part.sporadic.len());
        prop_assert_eq!(part.significant.len() + part.sporadic.len(), summary_locations(&s).len());
        prop_assert!(matching_degree(&t, &s) <= part.significant.len());
        if !native.is_empty() {
            let sh = part.shares();
            let sum = sh.significant + sh.transit + sh.sporadic + sh.insignificant;
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hill_numbers(counts in prop::collection::vec(1usize..1000, 1..30)) {
        let p = AbundanceVector::from_counts(&counts).unwrap();
        let r = p.richness() as f64;
        let td_h = true_diversity(&p, 1.0).unwrap();
        let td_s = true_diversity(&p, 2.0).unwrap();
        prop_assert!((td_h - shannon_index(&p).exp()).abs() < 1e-9);
        prop_assert!((td_s - 1.0 / simpson_index(&p)).abs() < 1e-9);
        prop_assert_eq!(true_diversity(&p, 0.0).unwrap(), r);
        let mut prev = r;
        for q in [0.5, 1.0, 1.5, 2.0, 3.0, 8.0] {
            let d = true_diversity(&p, q).unwrap();
            prop_assert!((1.0..=r).contains(&d));
            prop_assert!(d <= prev + 1e-9, "order {} rose from {} to {}", q, prev, d);
            prev = d;
        }
        let profile = profile_of(&p).unwrap();
        prop_assert_eq!(profile.richness, counts.len());
    }

    #[test]
    fn jenks_is_optimal(mut v in prop::collection::vec(0u8..20, 1..=12), k in 1usize..=4) {
        let mut v: Vec<f64> = v.drain(..).map(f64::from).collect();
        v.sort_by(f64::total_cmp);
        prop_assume!(k <= v.len());
        let breaks = jenks_breaks(&v, k).unwrap();
        prop_assert_eq!(breaks.len(), k - 1);
        prop_assert!(breaks.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(breaks.iter().all(|&b| b > 0 && b < v.len()));
        let best = brute_min_sdcm(&v, k);
        prop_assert!((sdcm(&v, &breaks) - best).abs() <= 1e-9 * (1.0 + best));
        let fit = gvf(&v, &breaks);
        prop_assert!((0.0..=1.0).contains(&fit));
    }

    #[test]
    fn rank_distributions_are_normalised(ts in prop::collection::vec(trajectory_strategy(80), 1..6)) {
        let parts: Vec<_> = ts.iter().filter(|t| !t.is_empty()).map(|t| rank_distribution(t).unwrap()).collect();
        for d in &parts {
            prop_assert!((d.mass() - 1.0).abs() < 1e-9);
            prop_assert!(d.probabilities.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(d.probabilities.iter().all(|p| (0.0..=1.0).contains(p)));
        }
        if !parts.is_empty() {
            let avg = average_distribution(&parts).unwrap();
            prop_assert!((avg.mass() - 1.0).abs() < 1e-9);
            let longest = parts.iter().map(|d| d.len()).max().unwrap();
            prop_assert_eq!(avg.len(), longest);
        }
    }

    #[test]
    fn entropy_rate_bounds(x in prop::collection::vec(0u8..4, 0..120)) {
        let h = entropy_rate(&x);
        prop_assert!(h >= 0.0 && h.is_finite());
        let l = match_lengths(&x);
        prop_assert_eq!(l.len(), x.len());
        for (i, &li) in l.iter().enumerate() {
            prop_assert!(li <= x.len() - i);
        }
        if x.len() <= 1 {
            prop_assert_eq!(h, 0.0);
        }
    }

    #[test]
    fn ingest_round_trip(ts in prop::collection::vec(trajectory_strategy(40), 1..5)) {
        let ts: Vec<SymbolicTrajectory> = ts
            .into_iter()
            .enumerate()
            .filter(|(_, t)| !t.is_empty())
            .map(|(i, t)| SymbolicTrajectory::new(format!("user{i}"), t.points().to_vec()).unwrap())
            .collect();
        let mut buf = Vec::new();
        write_trajectories(&mut buf, &ts).unwrap();
        let back = ingest_reader(buf.as_slice(), true).unwrap();
        prop_assert_eq!(back.trajectories, ts);
    }
}

#[test]
fn reference_agrees_on_worked_example() {
    let t = SymbolicTrajectory::from_pairs(
        "u",
        "aacacbbabb"
            .chars()
            .enumerate()
            .map(|(i, c)| (c.to_string(), 2 * (i as i64 + 1))),
    )
    .unwrap();
    let p = SeqScanParams::new(3, 2.0).unwrap();
    assert_eq!(
        reference_summary(&t, 3, 2.0),
        [
            (2, 8, "a".to_string(), 3, 2),
            (12, 20, "b".to_string(), 4, 4)
        ]
    );
    assert_eq!(as_tuples(&summarize(&t, p)), reference_summary(&t, 3, 2.0));
}

/// Raising N can change which symbols are found rather than only removing
/// some: the first cluster opening resets the evidence for everything else.
#[test]
fn type_sets_are_not_monotone_in_n() {
    let t = SymbolicTrajectory::from_pairs(
        "u",
        "yxxyzzy"
            .chars()
            .enumerate()
            .map(|(i, c)| (c.to_string(), i as i64)),
    )
    .unwrap();
    let types = |n| type_set(&summarize(&t, SeqScanParams::new(n, 0.0).unwrap()));
    let at2 = types(2);
    let at3 = types(3);
    assert_eq!(at2, BTreeSet::from(["x".to_string(), "z".to_string()]));
    assert_eq!(at3, BTreeSet::from(["y".to_string()]));
    assert!(!at3.is_subset(&at2));
}

#[test]
fn noise_free_synthetic_dwells_are_recovered() {
    let data = generate_dataset(&SynthConfig::basic(200, 21)).unwrap();
    let p = SeqScanParams::default();
    for (t, truth) in data.trajectories.iter().zip(&data.ground_truth) {
        let s = summarize(t, p);
        let planted: Vec<String> = truth
            .dwells
            .iter()
            .map(|d| d.location.to_string())
            .collect();
        let found: Vec<String> = s.locations().map(|l| l.to_string()).collect();
        assert_eq!(found, planted, "{}", t.user_id());
        let baseline: BTreeSet<String> = rle_plus(t, p)
            .iter()
            .map(|s| s.location.to_string())
            .collect();
        assert_eq!(baseline, type_set(&s));
    }
}

#[test]
fn noisy_synthetic_dwells_are_mostly_recovered() {
    let mut c = SynthConfig::basic(500, 22);
    c.noise_prob = 0.1;
    let data = generate_dataset(&c).unwrap();
    let p = SeqScanParams::default();
    let hits = data
        .trajectories
        .iter()
        .zip(&data.ground_truth)
        .filter(|(t, truth)| {
            let types = type_set(&summarize(t, p));
            truth
                .dwells
                .iter()
                .all(|d| types.contains(d.location.as_str()))
        })
        .count();
    assert!(hits as f64 >= 0.95 * 500.0, "{hits} of 500");
}

#[test]
fn summary_unit_duration() {
    let u = SummaryUnit {
        start: 10,
        end: 25,
        location: LocationSymbol::new("a").unwrap(),
        occurrences: 2,
        weight: 15,
    };
    assert_eq!(u.duration(), 15);
}
