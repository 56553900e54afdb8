//! The three in-memory schemes built on the engine: searching, max/min and
//! sorting, plus the flag-overhead arithmetic.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::engine::{Configuration, Mode};
use crate::error::{Error, Result};
use crate::node::SearchScope;
use crate::topology::{CayleyTopology, NodeId, TreeParams};
use crate::word::word_mask;

/// Which scheme a tree is loaded for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Search { key: u64 },
    Max,
    Min,
}

/// How the slots beyond the input list are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PaddingPolicy {
    /// Word 0, permanently disabled so it can never report a match.
    SearchNeutral,
    /// Word 0, the OR identity.
    MaxIdentity,
    /// Word `2^w - 1`, the AND identity.
    MinIdentity,
}

impl PaddingPolicy {
    fn mode(self) -> Mode {
        match self {
            PaddingPolicy::SearchNeutral => Mode::Search,
            PaddingPolicy::MaxIdentity => Mode::Max,
            PaddingPolicy::MinIdentity => Mode::Min,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SortOrder {
    #[default]
    Descending,
    Ascending,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub found: bool,
    pub cycles: u64,
    /// Occupied nodes holding the key; empty unless collection was requested.
    pub matched_nodes: Vec<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremumResult {
    pub value: u64,
    pub cycles: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortResult {
    pub output: Vec<u64>,
    pub cycles_total: u64,
    pub rounds: usize,
    pub per_round_cycles: Vec<u64>,
}

/// A configuration with a list distributed over the non-root nodes.
#[derive(Debug, Clone)]
pub struct LoadedTree {
    cfg: Configuration,
    occupied: Vec<NodeId>,
    padding: PaddingPolicy,
}

fn check_elements(topo: &CayleyTopology, elements: &[u64]) -> Result<()> {
    if topo.height() < 2 {
        return Err(Error::NoDataSlots);
    }
    if elements.len() > topo.capacity() {
        return Err(Error::ListTooLong {
            len: elements.len(),
            capacity: topo.capacity(),
        });
    }
    let w = topo.word_size();
    if let Some(&bad) = elements.iter().find(|&&v| v & !word_mask(w) != 0) {
        return Err(Error::ElementOutOfRange {
            value: bad,
            word_size: w,
        });
    }
    Ok(())
}

/// Distribute `elements` breadth-first over nodes `1..=len` and pad the rest.
pub fn load_list(
    topo: Arc<CayleyTopology>,
    elements: &[u64],
    scheme: Scheme,
) -> Result<LoadedTree> {
    check_elements(&topo, elements)?;
    let w = topo.word_size();
    let ones = word_mask(w);
    let (padding, root_word, pad_word) = match scheme {
        Scheme::Search { key } => {
            if key & !ones != 0 {
                return Err(Error::ElementOutOfRange {
                    value: key,
                    word_size: w,
                });
            }
            (PaddingPolicy::SearchNeutral, key, 0)
        }
        Scheme::Max => (PaddingPolicy::MaxIdentity, 0, 0),
        Scheme::Min => (PaddingPolicy::MinIdentity, ones, ones),
    };

    let n = topo.len();
    let mut cfg = Configuration::new(topo)?;
    cfg.set_word(NodeId::ROOT, root_word)?;
    for i in 1..n {
        let value = elements.get(i - 1).copied().unwrap_or(pad_word);
        cfg.set_word(NodeId(i), value)?;
        if padding == PaddingPolicy::SearchNeutral && i > elements.len() {
            cfg.node_mut(NodeId(i)).flags.perm_disabled = true;
        }
    }
    cfg.reset(padding.mode());
    Ok(LoadedTree {
        cfg,
        occupied: (1..=elements.len()).map(NodeId).collect(),
        padding,
    })
}

impl LoadedTree {
    #[inline]
    pub fn config(&self) -> &Configuration {
        &self.cfg
    }

    #[inline]
    pub fn config_mut(&mut self) -> &mut Configuration {
        &mut self.cfg
    }

    #[inline]
    pub fn occupied(&self) -> &[NodeId] {
        &self.occupied
    }

    #[inline]
    pub fn padding(&self) -> PaddingPolicy {
        self.padding
    }

    fn expect(&self, padding: PaddingPolicy) -> Result<()> {
        if self.padding != padding {
            return Err(Error::WrongMode {
                expected: padding.mode(),
                found: self.padding.mode(),
            });
        }
        Ok(())
    }

    pub fn search(&mut self, key: u64, collect_matches: bool) -> Result<SearchResult> {
        self.search_observed(key, collect_matches, &mut |_| {})
    }

    /// Full search (broadcast then aggregation). `observer` sees the
    /// configuration after the reset and after every step.
    pub fn search_observed(
        &mut self,
        key: u64,
        collect_matches: bool,
        observer: &mut dyn FnMut(&Configuration),
    ) -> Result<SearchResult> {
        self.expect(PaddingPolicy::SearchNeutral)?;
        self.cfg.set_word(NodeId::ROOT, key)?;
        self.cfg.reset(Mode::Search);
        observer(&self.cfg);

        let len = self.cfg.topology().word_size();
        let mut latched: Vec<NodeId> = Vec::new();
        let budget = self.cfg.default_budget();
        let cycles = self.cfg.run_until_quiescent_observed(budget, &mut |cfg| {
            if collect_matches {
                // Match flags are cleared on entering the upward phase, so they
                // are read at each node's final broadcast compare.
                for node in &cfg.nodes()[1..] {
                    if node.flags.start && node.local_clock == len && node.flags.matched {
                        latched.push(node.id);
                    }
                }
            }
            observer(cfg);
        })?;
        latched.sort_unstable();
        latched.dedup();
        Ok(SearchResult {
            found: self.cfg.node(NodeId::ROOT).flags.state,
            cycles,
            matched_nodes: latched,
        })
    }

    pub fn compute_max(&mut self) -> Result<ExtremumResult> {
        self.compute_max_observed(&mut |_| {})
    }

    pub fn compute_max_observed(
        &mut self,
        observer: &mut dyn FnMut(&Configuration),
    ) -> Result<ExtremumResult> {
        self.expect(PaddingPolicy::MaxIdentity)?;
        self.extremum(Mode::Max, observer)
    }

    pub fn compute_min(&mut self) -> Result<ExtremumResult> {
        self.compute_min_observed(&mut |_| {})
    }

    pub fn compute_min_observed(
        &mut self,
        observer: &mut dyn FnMut(&Configuration),
    ) -> Result<ExtremumResult> {
        self.expect(PaddingPolicy::MinIdentity)?;
        self.extremum(Mode::Min, observer)
    }

    fn extremum(
        &mut self,
        mode: Mode,
        observer: &mut dyn FnMut(&Configuration),
    ) -> Result<ExtremumResult> {
        let root_init = match mode {
            Mode::Min => word_mask(self.cfg.topology().word_size()),
            _ => 0,
        };
        self.cfg.set_word(NodeId::ROOT, root_init)?;
        self.cfg.reset(mode);
        observer(&self.cfg);
        let budget = self.cfg.default_budget();
        let cycles = self.cfg.run_until_quiescent_observed(budget, observer)?;
        Ok(ExtremumResult {
            value: self.cfg.word(NodeId::ROOT),
            cycles,
        })
    }
}

/// Sort by repeated extremum extraction.
pub fn sort(topo: Arc<CayleyTopology>, elements: &[u64], order: SortOrder) -> Result<SortResult> {
    sort_observed(topo, elements, order, &mut |_| {})
}

/// Each round: compute the extremum, reset for search, run the broadcast
/// phase of a search for that value, permanently disable every match, reset
/// for the next extremum. Each reset costs one cycle. `observer` sees the
/// initial configuration, every step and every reset.
pub fn sort_observed(
    topo: Arc<CayleyTopology>,
    elements: &[u64],
    order: SortOrder,
    observer: &mut dyn FnMut(&Configuration),
) -> Result<SortResult> {
    check_elements(&topo, elements)?;
    let w = topo.word_size();
    let (mode, sentinel) = match order {
        SortOrder::Descending => (Mode::Max, 0),
        SortOrder::Ascending => (Mode::Min, word_mask(w)),
    };
    let n = topo.len();
    let mut cfg = Configuration::new(topo)?;
    cfg.set_word(NodeId::ROOT, sentinel)?;
    for i in 1..n {
        cfg.set_word(NodeId(i), elements.get(i - 1).copied().unwrap_or(sentinel))?;
        if i > elements.len() {
            cfg.node_mut(NodeId(i)).flags.perm_disabled = true;
        }
    }
    cfg.reset(mode);
    observer(&cfg);

    let budget = cfg.default_budget();
    let mut live = elements.len();
    let mut output = Vec::with_capacity(elements.len());
    let mut per_round_cycles = Vec::new();

    while live > 0 {
        let mut cycles = cfg.run_until_quiescent_observed(budget, observer)?;
        let value = cfg.word(NodeId::ROOT);

        // The root now holds the reported value, which is the next key.
        cfg.reset(Mode::Search);
        cfg.set_search_scope(SearchScope::Phase1);
        cycles += 1;
        observer(&cfg);
        cycles += cfg.run_until_quiescent_observed(budget, observer)?;

        let mut disabled = 0;
        for node in cfg.nodes().iter().skip(1) {
            if node.flags.matched && !node.flags.perm_disabled {
                disabled += 1;
            }
        }
        if disabled == 0 {
            return Err(Error::SortStalled {
                round: per_round_cycles.len() + 1,
            });
        }
        for i in 1..n {
            let node = cfg.node_mut(NodeId(i));
            if node.flags.matched && !node.flags.perm_disabled {
                node.flags.perm_disabled = true;
                node.flags.link_mem = true;
            }
        }
        output.extend(core::iter::repeat_n(value, disabled));
        live -= disabled;

        cfg.reset(mode);
        cycles += 1;
        observer(&cfg);
        per_round_cycles.push(cycles);
    }

    Ok(SortResult {
        output,
        cycles_total: per_round_cycles.iter().sum(),
        rounds: per_round_cycles.len(),
        per_round_cycles,
    })
}

/// Flag sets whose storage overhead can be reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlagScheme {
    /// state, start, match: `3n` bits.
    Search,
    /// state, start and `eta + 2` links: `n(eta + 4)` bits.
    Extremum,
    /// Searching and max flags plus the reporting word: `n(w + eta + 5)` bits.
    Sort,
}

/// Additional storage, in bits, beyond the list elements themselves.
pub fn resource_report(params: TreeParams, scheme: FlagScheme) -> Result<usize> {
    params.validate()?;
    let n = params.node_count()?;
    let per_node = match scheme {
        FlagScheme::Search => Some(3),
        FlagScheme::Extremum => params.eta.checked_add(4),
        FlagScheme::Sort => params
            .eta
            .checked_add(5)
            .and_then(|v| v.checked_add(params.word_size as usize)),
    };
    per_node
        .and_then(|bits| bits.checked_mul(n))
        .ok_or(Error::Overflow {
            eta: params.eta,
            height: params.height,
        })
}
