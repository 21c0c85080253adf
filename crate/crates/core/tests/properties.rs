use std::collections::BTreeSet;

use proptest::prelude::*;
use tvg_centrality::centrality::cover_time_detail;
use tvg_centrality::diffusion::{constrained_counts_all, cover_steps_all};
use tvg_centrality::oracle::{expand, oracle_reach_through_end};
use tvg_centrality::*;

/// Small TVG with arbitrary (possibly duplicated) contacts.
fn small_tvg() -> impl Strategy<Value = (usize, usize, Vec<(usize, usize, usize)>)> {
    (1usize..=8, 1usize..=10).prop_flat_map(|(n, big_n)| {
        let contact = (0..n, 0..n, 0..big_n);
        (Just(n), Just(big_n), prop::collection::vec(contact, 0..40))
    })
}

fn build(n: usize, big_n: usize, raw: &[(usize, usize, usize)]) -> Tvg {
    let contacts = raw
        .iter()
        .filter(|(a, b, _)| a != b)
        .map(|&(a, b, t)| Contact::new(a, b, t).unwrap());
    Tvg::build(n, big_n, contacts).unwrap()
}

fn starts(g: &Tvg) -> impl Iterator<Item = TemporalNode> + '_ {
    (0..g.num_instants()).flat_map(move |t| (0..g.num_nodes()).map(move |u| TemporalNode::new(u, t)))
}

proptest! {
    #[test]
    fn neighbors_are_reciprocal((n, big_n, raw) in small_tvg()) {
        let g = build(n, big_n, &raw);
        for t in 0..big_n {
            for u in 0..n {
                for v in g.neighbors(NodeId::from(u), TimeIndex::from(t)).unwrap() {
                    prop_assert!(g.neighbors(v, TimeIndex::from(t)).unwrap().contains(&NodeId::from(u)));
                }
            }
        }
    }

    #[test]
    fn build_round_trips_deduplicated_contacts((n, big_n, raw) in small_tvg()) {
        let g = build(n, big_n, &raw);
        let expected: BTreeSet<(usize, usize, usize)> = raw
            .iter()
            .filter(|(a, b, _)| a != b)
            .map(|&(a, b, t)| (t, a.min(b), a.max(b)))
            .collect();
        let got: Vec<(usize, usize, usize)> =
            g.contacts().map(|c| (c.time.index(), c.a.index(), c.b.index())).collect();
        prop_assert_eq!(got, expected.into_iter().collect::<Vec<_>>());
        prop_assert_eq!(Tvg::read_text(g.to_text().as_bytes()).unwrap(), g);
    }

    #[test]
    fn input_order_does_not_matter((n, big_n, mut raw) in small_tvg(), seed in any::<u64>()) {
        let g = build(n, big_n, &raw);
        // deterministic shuffle
        let len = raw.len();
        for i in (1..len).rev() {
            let j = (seed.wrapping_mul(i as u64 + 7) % (i as u64 + 1)) as usize;
            raw.swap(i, j);
        }
        let h = build(n, big_n, &raw);
        prop_assert_eq!(&g, &h);
        for s in starts(&g) {
            prop_assert_eq!(
                diffuse(&g, s, StopRule::Exhaustion).unwrap(),
                diffuse(&h, s, StopRule::Exhaustion).unwrap()
            );
        }
    }

    #[test]
    fn traces_are_monotone_and_bounded((n, big_n, raw) in small_tvg()) {
        let g = build(n, big_n, &raw);
        for s in starts(&g) {
            let tr = diffuse(&g, s, StopRule::Exhaustion).unwrap();
            prop_assert_eq!(tr.sizes[0], 1);
            prop_assert!(tr.sizes.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(tr.sizes.iter().all(|&x| x <= n));
            prop_assert_eq!(tr.steps(), big_n - s.time.index());
            prop_assert!(tr.exhausted);
            prop_assert_eq!(*tr.sizes.last().unwrap(), tr.informed.len());
        }
    }

    #[test]
    fn budget_and_threshold_are_consistent((n, big_n, raw) in small_tvg()) {
        let g = build(n, big_n, &raw);
        for s in starts(&g) {
            let mut prev = 0;
            for phi in 1..=big_n + 1 {
                let c = constrained_count(&g, s, phi).unwrap();
                prop_assert!(c >= prev);
                prev = c;
            }
            for req in 1..=n {
                let thr = CoverageThreshold::from_count(req, n).unwrap();
                match cover_steps(&g, s, thr).unwrap() {
                    Cover::Reached(0) => prop_assert_eq!(req, 1),
                    Cover::Reached(k) => {
                        prop_assert!(constrained_count(&g, s, k).unwrap() >= req);
                        if k >= 2 {
                            prop_assert!(constrained_count(&g, s, k - 1).unwrap() < req);
                        }
                    }
                    Cover::Unreached => {
                        prop_assert!(constrained_count(&g, s, big_n + 1).unwrap() < req);
                    }
                }
            }
        }
    }

    #[test]
    fn multi_source_engine_matches_single_source((n, big_n, raw) in small_tvg()) {
        let g = build(n, big_n, &raw);
        for t in 0..big_n {
            let time = TimeIndex::from(t);
            for req in 1..=n {
                let thr = CoverageThreshold::from_count(req, n).unwrap();
                let all = cover_steps_all(&g, time, thr).unwrap();
                for (u, got) in all.iter().enumerate() {
                    prop_assert_eq!(*got, cover_steps(&g, TemporalNode::new(u, t), thr).unwrap());
                }
            }
            for phi in 1..=big_n - t + 1 {
                let all = constrained_counts_all(&g, time, phi).unwrap();
                for (u, got) in all.iter().enumerate() {
                    prop_assert_eq!(*got, constrained_count(&g, TemporalNode::new(u, t), phi).unwrap());
                }
            }
        }
    }

    #[test]
    fn diffusion_matches_oracle((n, big_n, raw) in small_tvg()) {
        let g = build(n, big_n, &raw);
        let x = expand(&g);
        let closing = g.snapshots().last().unwrap().len();
        let contact_arcs: usize = g.snapshots().iter().map(|s| s.len()).sum::<usize>() - closing;
        prop_assert_eq!(x.num_arcs(), 2 * contact_arcs + n * (big_n - 1));
        for s in starts(&g) {
            for steps in 0..=big_n - s.time.index() + 1 {
                let d = diffuse(&g, s, StopRule::Budget(steps)).unwrap();
                prop_assert_eq!(d.informed, oracle_reach_through_end(&x, s, steps).unwrap());
            }
        }
    }

    #[test]
    fn metric_structure((n, big_n, raw) in small_tvg()) {
        let g = build(n, big_n, &raw);
        let nn = n as f64;
        for t in 0..big_n {
            let time = TimeIndex::from(t);
            let mut prev = 0.0;
            for phi in 1..=big_n + 1 {
                let v = tcc(&g, time, phi).unwrap();
                prop_assert!(v >= prev);
                prop_assert!(v >= 1.0 / nn - 1e-12 && v <= 1.0 + 1e-12);
                prev = v;
            }
            let mut prev_ct = MetricValue::Finite(0.0);
            for req in 1..=n {
                let thr = CoverageThreshold::from_count(req, n).unwrap();
                let (v, unreached) = cover_time_detail(&g, time, thr).unwrap();
                if req == 1 {
                    prop_assert_eq!(v, MetricValue::Finite(0.0));
                }
                prop_assert_eq!(v.is_inf(), unreached > 0);
                prop_assert!(prev_ct.total_cmp(&v).is_le());
                prev_ct = v;
            }
        }
    }

    #[test]
    fn ranking_and_distribution((n, big_n, raw) in small_tvg(), k in 1usize..6, req in 1usize..4) {
        let g = build(n, big_n, &raw);
        let thr = CoverageThreshold::from_count(req.min(n), n).unwrap();
        let ct = metric_sweep(&g, MetricSpec::CoverTime(thr), 0..big_n).unwrap();
        let top = rank_instants(&ct, k).unwrap();
        let first_inf = top.iter().position(|r| r.value.is_inf()).unwrap_or(top.len());
        prop_assert!(top[first_inf..].iter().all(|r| r.value.is_inf()));
        let worst = top.last().unwrap().value;
        for r in &ct.rows {
            if !top.iter().any(|x| x.time == r.time) {
                prop_assert!(worst.total_cmp(&r.value).is_le());
            }
        }
        if let Ok(d) = empirical_distribution(&ct, DistributionKind::Cdf) {
            prop_assert_eq!(d.points.last().unwrap().1, 1.0);
            prop_assert!(d.points.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
            prop_assert_eq!(d.excluded, ct.rows.iter().filter(|r| r.value.is_inf()).count());
        }

        let tc = metric_sweep(&g, MetricSpec::Tcc(2), 0..big_n).unwrap();
        let top = rank_instants(&tc, k).unwrap();
        let worst = top.last().unwrap().value;
        for r in &tc.rows {
            if !top.iter().any(|x| x.time == r.time) {
                prop_assert!(r.value.total_cmp(&worst).is_le());
            }
        }
        let d = empirical_distribution(&tc, DistributionKind::Ccdf).unwrap();
        prop_assert_eq!(d.points[0].1, 1.0);
        prop_assert!(d.points.windows(2).all(|w| w[0].1 >= w[1].1));
    }
}

mod ingestion {
    use super::*;

    fn log_from(g: &Tvg, names: &dyn Fn(usize) -> String, gran: i64) -> Vec<ContactRecord> {
        let mut out = Vec::new();
        for c in g.contacts() {
            let t = c.time.index() as i64 * gran;
            let (a, b) = (names(c.a.index()), names(c.b.index()));
            out.push(ContactRecord { timestamp: t, label_a: a.clone(), label_b: b.clone() });
            // a duplicate later in the same bin, reversed
            out.push(ContactRecord { timestamp: t + gran - 1, label_a: b, label_b: a });
        }
        out
    }

    proptest! {
        #[test]
        fn snapshot_count_formula(start in -1000i64..1000, span in 0i64..5000, gran in 1u64..120) {
            let cfg = IngestConfig {
                granularity_seconds: gran,
                start_timestamp: Some(start),
                end_timestamp: Some(start + span),
            };
            let recs = vec![ContactRecord { timestamp: start, label_a: "x".into(), label_b: "y".into() }];
            let d = discretize(recs, &cfg).unwrap();
            prop_assert_eq!(d.tvg.num_instants() as i64, span / gran as i64 + 1);
        }

        #[test]
        fn duplicate_records_are_idempotent(seed in any::<u64>(), gran in 1i64..60) {
            let g = generate_er_tvg(&ErTvgSpec::new(7, 9, 0.3, seed).unwrap()).unwrap();
            let names = |i: usize| format!("n{i}");
            let log = log_from(&g, &names, gran);
            let cfg = IngestConfig { granularity_seconds: gran as u64, start_timestamp: Some(0), end_timestamp: Some(9 * gran - 1) };
            let once = discretize(log.clone(), &cfg).unwrap();
            let twice = discretize(log.iter().chain(log.iter()).cloned(), &cfg).unwrap();
            prop_assert_eq!(&once.tvg, &twice.tvg);
            prop_assert_eq!(once.tvg.num_contacts(), g.num_contacts());
        }

        #[test]
        fn relabeling_gives_isomorphic_tvg(seed in any::<u64>(), shift in 1usize..7) {
            let g = generate_er_tvg(&ErTvgSpec::new(7, 10, 0.3, seed).unwrap()).unwrap();
            let cfg = IngestConfig { granularity_seconds: 30, start_timestamp: Some(0), end_timestamp: Some(299) };
            let a = discretize(log_from(&g, &|i| format!("dev{i}"), 30), &cfg).unwrap().tvg;
            let b = discretize(log_from(&g, &|i| format!("other-{}", (i + shift) % 7), 30), &cfg).unwrap().tvg;
            prop_assert_eq!(a.num_nodes(), b.num_nodes());
            let counts = |t: &Tvg| t.snapshots().iter().map(|s| s.len()).collect::<Vec<_>>();
            prop_assert_eq!(counts(&a), counts(&b));
            let thr = CoverageThreshold::from_decimal("0.5", a.num_nodes()).unwrap();
            let sweep = |t: &Tvg, spec| metric_sweep(t, spec, 0..10).unwrap();
            prop_assert_eq!(sweep(&a, MetricSpec::CoverTime(thr)), sweep(&b, MetricSpec::CoverTime(thr)));
            prop_assert_eq!(sweep(&a, MetricSpec::Tcc(3)), sweep(&b, MetricSpec::Tcc(3)));
        }
    }
}
