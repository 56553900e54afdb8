mod common;

use std::sync::Arc;

use cayley_imc::oracle::{oracle_extremum, oracle_search, oracle_sort_desc, Extremum};
use cayley_imc::{
    load_list, sort, sort_observed, CayleyTopology, Configuration, Emission, Mode, NodeContext,
    NodeId, NodeState, Scheme, SearchScope, SortOrder, TraceEvent, TreeParams,
};
use common::{topo, MonotonicityChecker};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_case(max_len: usize) -> impl Strategy<Value = (Arc<CayleyTopology>, Vec<u64>)> {
    (
        2usize..=3,
        2usize..=5,
        prop_oneof![Just(3u32), Just(4), Just(8)],
    )
        .prop_flat_map(move |(eta, h, w)| {
            let t = topo(eta, h, w);
            let cap = t.capacity().min(max_len);
            proptest::collection::vec(0..(1u64 << w), 0..=cap).prop_map(move |v| (t.clone(), v))
        })
}

fn node_view(n: &NodeState) -> (u64, cayley_imc::NodeFlags, u32) {
    (n.word.value(), n.flags.clone(), n.local_clock)
}

/// Step with the send and receive phases visiting nodes in `order`.
fn permuted_step(cfg: &mut Configuration, order: &[usize]) {
    let topo = cfg.topology().clone();
    let mode = cfg.mode();
    let scope = cfg.search_scope();
    let mut emitted = vec![Emission::Silent; topo.len()];
    for &i in order {
        let ctx = NodeContext::of(&topo, NodeId(i));
        let node = cfg.node_mut(NodeId(i));
        emitted[i] = match mode.combine() {
            None => node.send_search(&ctx, scope),
            Some(op) => node.send_max(&ctx, op),
        };
    }
    for &i in order {
        let id = NodeId(i);
        let ctx = NodeContext::of(&topo, id);
        let node = cfg.node_mut(id);
        let mut inbox = node.inbox.clone();
        inbox.parent = topo.parent_of(id).and_then(|p| emitted[p.0].down());
        for (slot, child) in inbox.children.iter_mut().zip(topo.children_of(id)) {
            *slot = emitted[child.0].up();
        }
        match mode.combine() {
            None => node.receive_search(&inbox, &ctx, scope).unwrap(),
            Some(op) => node.receive_max(&inbox, &ctx, op).unwrap(),
        }
        node.inbox = inbox;
    }
}

fn trace_stream(t: Arc<CayleyTopology>, list: &[u64], mode: Mode) -> Vec<TraceEvent> {
    let mut events = Vec::new();
    let mut obs = |c: &Configuration| events.extend(c.snapshot());
    match mode {
        Mode::Search => {
            let key = list.first().copied().unwrap_or(0);
            let mut tree = load_list(t, list, Scheme::Search { key }).unwrap();
            tree.search_observed(key, true, &mut obs).unwrap();
        }
        Mode::Max => {
            let mut tree = load_list(t, list, Scheme::Max).unwrap();
            tree.compute_max_observed(&mut obs).unwrap();
        }
        Mode::Min => {
            let mut tree = load_list(t, list, Scheme::Min).unwrap();
            tree.compute_min_observed(&mut obs).unwrap();
        }
        Mode::Idle => {
            sort_observed(t, list, SortOrder::Descending, &mut obs).unwrap();
        }
    }
    events
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn traces_are_deterministic((t, list) in arb_case(30)) {
        for mode in [Mode::Search, Mode::Max, Mode::Min, Mode::Idle] {
            let a = trace_stream(t.clone(), &list, mode);
            let b = trace_stream(t.clone(), &list, mode);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn evaluation_order_does_not_matter((t, list) in arb_case(64), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let key = list.last().copied().unwrap_or(1);
        let setups = [
            (Scheme::Search { key }, Mode::Search),
            (Scheme::Max, Mode::Max),
            (Scheme::Min, Mode::Min),
        ];
        for (scheme, mode) in setups {
            let mut tree = load_list(t.clone(), &list, scheme).unwrap();
            if mode == Mode::Min {
                tree.config_mut().set_word(NodeId::ROOT, (1 << t.word_size()) - 1).unwrap();
            }
            let mut reference = tree.config().clone();
            reference.reset(mode);
            let mut shuffled = reference.clone();
            let mut order: Vec<usize> = (0..t.len()).collect();
            while !reference.is_quiescent() {
                reference.step().unwrap();
                order.shuffle(&mut rng);
                permuted_step(&mut shuffled, &order);
                let a: Vec<_> = reference.nodes().iter().map(node_view).collect();
                let b: Vec<_> = shuffled.nodes().iter().map(node_view).collect();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn answers_ignore_input_order((t, list) in arb_case(40), seed in any::<u64>(), key in any::<u64>()) {
        let mut permuted = list.clone();
        permuted.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let key = key & ((1 << t.word_size()) - 1);
        let ones = (1 << t.word_size()) - 1;

        for l in [&list, &permuted] {
            let found = load_list(t.clone(), l, Scheme::Search { key }).unwrap().search(key, false).unwrap().found;
            prop_assert_eq!(found, oracle_search(&list, key));
            let max = load_list(t.clone(), l, Scheme::Max).unwrap().compute_max().unwrap().value;
            prop_assert_eq!(max, oracle_extremum(&list, Extremum::Max, 0));
            let min = load_list(t.clone(), l, Scheme::Min).unwrap().compute_min().unwrap().value;
            prop_assert_eq!(min, oracle_extremum(&list, Extremum::Min, ones));
            let desc = sort(t.clone(), l, SortOrder::Descending).unwrap();
            prop_assert_eq!(&desc.output, &oracle_sort_desc(&list));
            let mut asc = oracle_sort_desc(&list);
            asc.reverse();
            prop_assert_eq!(sort(t.clone(), l, SortOrder::Ascending).unwrap().output, asc);
        }
    }

    #[test]
    fn words_restored_after_extremum((t, list) in arb_case(64)) {
        for scheme in [Scheme::Max, Scheme::Min] {
            let mut tree = load_list(t.clone(), &list, scheme).unwrap();
            let before: Vec<u64> = (1..t.len()).map(|i| tree.config().word(NodeId(i))).collect();
            match scheme {
                Scheme::Max => tree.compute_max().unwrap(),
                _ => tree.compute_min().unwrap(),
            };
            let after: Vec<u64> = (1..t.len()).map(|i| tree.config().word(NodeId(i))).collect();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn words_restored_after_every_sort_round((t, list) in arb_case(30)) {
        let initial: Vec<u64> = (1..t.len()).map(|i| list.get(i - 1).copied().unwrap_or(0)).collect();
        let mut checks = 0;
        let mut bad = 0;
        sort_observed(t.clone(), &list, SortOrder::Descending, &mut |c| {
            if c.mode() == Mode::Max && c.global_cycle() == 0 {
                checks += 1;
                let now: Vec<u64> = (1..c.topology().len()).map(|i| c.word(NodeId(i))).collect();
                if now != initial {
                    bad += 1;
                }
            }
        }).unwrap();
        prop_assert_eq!(bad, 0);
        let distinct: std::collections::BTreeSet<_> = list.iter().collect();
        prop_assert_eq!(checks, distinct.len() + 1);
    }

    #[test]
    fn one_level_per_cycle((t, list) in arb_case(64)) {
        let leaf_depth = t.height() - 1;
        let key = list.first().copied().unwrap_or(0);
        let mut tree = load_list(t.clone(), &list, Scheme::Search { key }).unwrap();
        let mut bad = 0;
        tree.search_observed(key, false, &mut |c| {
            let cycle = c.global_cycle() as usize;
            for n in c.nodes() {
                if n.flags.start != (t.depth_of(n.id) <= cycle) {
                    bad += 1;
                }
            }
        }).unwrap();
        prop_assert_eq!(bad, 0);

        let mut tree = load_list(t.clone(), &list, Scheme::Max).unwrap();
        tree.compute_max_observed(&mut |c| {
            let cycle = c.global_cycle() as usize;
            for n in c.nodes() {
                if n.flags.start != (leaf_depth - t.depth_of(n.id) <= cycle) {
                    bad += 1;
                }
            }
        }).unwrap();
        prop_assert_eq!(bad, 0);
    }

    #[test]
    fn monotone_flags((t, list) in arb_case(30), key in any::<u64>()) {
        let key = key & ((1 << t.word_size()) - 1);
        let mut checker = MonotonicityChecker::default();
        load_list(t.clone(), &list, Scheme::Search { key }).unwrap()
            .search_observed(key, false, &mut |c| checker.observe(c)).unwrap();
        load_list(t.clone(), &list, Scheme::Max).unwrap()
            .compute_max_observed(&mut |c| checker.observe(c)).unwrap();
        sort_observed(t, &list, SortOrder::Ascending, &mut |c| checker.observe(c)).unwrap();
        prop_assert_eq!(checker.violations(), 0);
    }
}

#[test]
fn cycle_formulas() {
    for eta in 1..=4 {
        for h in 2..=7 {
            for w in [1u32, 2, 5, 8, 16] {
                let t =
                    Arc::new(CayleyTopology::build(TreeParams::new(eta, h, w).unwrap()).unwrap());
                let list: Vec<u64> = (0..t.capacity().min(20) as u64)
                    .map(|i| i % (1 << w))
                    .collect();
                let (wu, hu) = (w as u64, h as u64);

                let s = load_list(t.clone(), &list, Scheme::Search { key: 0 })
                    .unwrap()
                    .search(0, false)
                    .unwrap();
                assert_eq!(s.cycles, wu + 2 * hu - 1, "search eta={eta} h={h} w={w}");
                let m = load_list(t.clone(), &list, Scheme::Max)
                    .unwrap()
                    .compute_max()
                    .unwrap();
                assert_eq!(m.cycles, wu + hu - 1, "max eta={eta} h={h} w={w}");
                let n = load_list(t.clone(), &list, Scheme::Min)
                    .unwrap()
                    .compute_min()
                    .unwrap();
                assert_eq!(n.cycles, wu + hu - 1, "min eta={eta} h={h} w={w}");

                let mut phase1 = load_list(t.clone(), &list, Scheme::Search { key: 0 }).unwrap();
                let cfg = phase1.config_mut();
                cfg.reset(Mode::Search);
                cfg.set_search_scope(SearchScope::Phase1);
                let used = cfg.run_until_quiescent(cfg.default_budget()).unwrap();
                assert_eq!(used, wu + hu - 1, "phase 1 eta={eta} h={h} w={w}");

                let r = sort(t, &list, SortOrder::Descending).unwrap();
                assert!(r.per_round_cycles.iter().all(|&c| c == 2 * (wu + hu)));
            }
        }
    }
}

#[test]
fn worked_search_matches_expected_nodes() {
    let t = topo(2, 3, 4);
    let mut tree = load_list(t, &common::EXAMPLE_SEARCH_LIST, Scheme::Search { key: 11 }).unwrap();
    let res = tree.search(11, true).unwrap();
    assert!(res.found);
    assert_eq!(res.matched_nodes, vec![NodeId(7), NodeId(8)]);
    assert_eq!(res.cycles, 9);
}
