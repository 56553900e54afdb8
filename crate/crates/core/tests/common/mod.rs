#![allow(dead_code)]

use std::sync::Arc;

use cayley_imc::{CayleyTopology, Configuration, Mode, NodeId, TreeParams};
use rand::Rng;

pub const EXAMPLE_SEARCH_LIST: [u64; 9] = [14, 9, 6, 10, 14, 7, 11, 11, 10];
pub const EXAMPLE_MAX_LIST: [u64; 8] = [14, 9, 5, 14, 7, 11, 10, 10];

pub fn topo(eta: usize, height: usize, word_size: u32) -> Arc<CayleyTopology> {
    Arc::new(CayleyTopology::build(TreeParams::new(eta, height, word_size).unwrap()).unwrap())
}

/// One randomly drawn fuzz instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub topo: Arc<CayleyTopology>,
    pub elements: Vec<u64>,
}

/// Draw an instance with eta in {2,3}, h in 2..=6, w in {4,8} and a list of
/// at most `max_len` elements (also bounded by the tree's capacity).
pub fn instance(rng: &mut impl Rng, max_len: usize) -> Instance {
    let eta = rng.random_range(2..=3);
    let height = rng.random_range(2..=6);
    let w = if rng.random_bool(0.5) { 4 } else { 8 };
    let topo = topo(eta, height, w);
    let len = rng.random_range(0..=topo.capacity().min(max_len));
    let hi = 1u64 << w;
    let elements = (0..len).map(|_| rng.random_range(0..hi)).collect();
    Instance { topo, elements }
}

/// Watches a run step by step and counts flag transitions the protocols
/// forbid. Rebaselines whenever it sees a freshly reset configuration.
#[derive(Debug, Default)]
pub struct MonotonicityChecker {
    prev: Vec<(bool, bool, Vec<bool>, u32)>,
    root_state: bool,
    mode: Option<Mode>,
    pub observations: u64,
    pub match_rises: u64,
    pub root_drops: u64,
    pub link_reenables: u64,
}

impl MonotonicityChecker {
    pub fn violations(&self) -> u64 {
        self.match_rises + self.root_drops + self.link_reenables
    }

    fn capture(&mut self, cfg: &Configuration) {
        self.prev = cfg
            .nodes()
            .iter()
            .map(|n| {
                (
                    n.flags.matched,
                    n.flags.link_mem,
                    n.flags.link_children.clone(),
                    n.local_clock,
                )
            })
            .collect();
        self.root_state = cfg.node(NodeId::ROOT).flags.state;
        self.mode = Some(cfg.mode());
    }

    pub fn observe(&mut self, cfg: &Configuration) {
        self.observations += 1;
        if cfg.global_cycle() == 0 || self.mode != Some(cfg.mode()) {
            self.capture(cfg);
            return;
        }
        let len = cfg.topology().word_size();
        for (node, (matched, link_mem, links, clock)) in cfg.nodes().iter().zip(&self.prev) {
            if node.id != NodeId::ROOT
                && cfg.mode() == Mode::Search
                && *clock <= len
                && !*matched
                && node.flags.matched
            {
                self.match_rises += 1;
            }
            if *link_mem && !node.flags.link_mem {
                self.link_reenables += 1;
            }
            for (was, now) in links.iter().zip(&node.flags.link_children) {
                if *was && !*now {
                    self.link_reenables += 1;
                }
            }
        }
        let root = cfg.node(NodeId::ROOT);
        let root_prev_clock = self.prev[0].3;
        if cfg.mode() == Mode::Search
            && root_prev_clock > len
            && self.root_state
            && !root.flags.state
        {
            self.root_drops += 1;
        }
        self.capture(cfg);
    }
}
