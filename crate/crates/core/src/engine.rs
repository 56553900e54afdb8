//! Synchronous lockstep scheduler.
//!
//! One global cycle is a send phase over every node followed by a receive
//! phase over every node. Bits emitted in the send phase are consumed in the
//! receive phase of the same cycle, so a signal advances exactly one tree
//! level per cycle.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::node::{Combine, Emission, NodeContext, NodeFlags, NodeState, Port, SearchScope};
use crate::topology::{CayleyTopology, NodeId, Role};
use crate::word::BitWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Search,
    Max,
    Min,
    Idle,
}

impl Mode {
    pub fn combine(self) -> Option<Combine> {
        match self {
            Mode::Max => Some(Combine::Or),
            Mode::Min => Some(Combine::And),
            Mode::Search | Mode::Idle => None,
        }
    }
}

/// One node's view at one traced cycle. Values are copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub cycle: u64,
    pub node: NodeId,
    pub depth: usize,
    pub role: Role,
    pub word: BitWord,
    pub flags: NodeFlags,
    pub emitted: Emission,
    pub child_count: usize,
}

impl TraceEvent {
    /// The emitted bits expanded onto the node's ports.
    pub fn emitted_bits(&self) -> Vec<(Port, bool)> {
        match self.emitted {
            Emission::Silent => Vec::new(),
            Emission::Up(b) => alloc::vec![(Port::Parent, b)],
            Emission::Down(b) => (0..self.child_count).map(|i| (Port::Child(i), b)).collect(),
        }
    }
}

/// Global snapshot of every node plus the cycle counter and active mode.
#[derive(Debug, Clone)]
pub struct Configuration {
    topo: Arc<CayleyTopology>,
    nodes: Vec<NodeState>,
    global_cycle: u64,
    mode: Mode,
    scope: SearchScope,
    emitted: Vec<Emission>,
}

impl Configuration {
    /// An idle configuration with every word zero.
    pub fn new(topo: Arc<CayleyTopology>) -> Result<Self> {
        let width = topo.word_size();
        let zero = BitWord::zero(width)?;
        let nodes = topo
            .nodes()
            .iter()
            .map(|&id| {
                let mut node = NodeState::new(id, zero, topo.child_count(id));
                node.reset_flags(&NodeContext::of(&topo, id), Mode::Idle);
                node
            })
            .collect();
        let n = topo.len();
        Ok(Configuration {
            topo,
            nodes,
            global_cycle: 0,
            mode: Mode::Idle,
            scope: SearchScope::Full,
            emitted: alloc::vec![Emission::Silent; n],
        })
    }

    /// Rebuild a configuration from per-node words and flags, e.g. the first
    /// snapshot of a recorded trace. Clocks start at zero.
    pub fn from_snapshot(
        topo: Arc<CayleyTopology>,
        mode: Mode,
        nodes: Vec<(BitWord, NodeFlags)>,
    ) -> Result<Self> {
        if nodes.len() != topo.len() {
            return Err(Error::SnapshotMismatch {
                expected: topo.len(),
                got: nodes.len(),
            });
        }
        let mut cfg = Configuration::new(topo)?;
        for (i, (word, flags)) in nodes.into_iter().enumerate() {
            let id = NodeId(i);
            let ports = cfg.topo.child_count(id);
            if word.width() != cfg.topo.word_size() {
                return Err(Error::InvalidParams {
                    what: "snapshot word size",
                    value: word.width() as usize,
                });
            }
            if flags.link_children.len() != ports {
                return Err(Error::PortMismatch {
                    node: i,
                    expected: ports,
                    got: flags.link_children.len(),
                });
            }
            let node = &mut cfg.nodes[i];
            node.word = word;
            node.flags = flags;
        }
        cfg.mode = mode;
        Ok(cfg)
    }

    #[inline]
    pub fn topology(&self) -> &Arc<CayleyTopology> {
        &self.topo
    }

    #[inline]
    pub fn mode(&self) -> Mode {
        self.mode
    }

    #[inline]
    pub fn search_scope(&self) -> SearchScope {
        self.scope
    }

    pub fn set_search_scope(&mut self, scope: SearchScope) {
        self.scope = scope;
    }

    #[inline]
    pub fn global_cycle(&self) -> u64 {
        self.global_cycle
    }

    #[inline]
    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> &NodeState {
        &self.nodes[id.0]
    }

    #[inline]
    pub fn node_mut(&mut self, id: NodeId) -> &mut NodeState {
        &mut self.nodes[id.0]
    }

    /// Emissions of the most recent cycle.
    pub fn last_emissions(&self) -> &[Emission] {
        &self.emitted
    }

    pub fn set_word(&mut self, id: NodeId, value: u64) -> Result<()> {
        self.nodes[id.0].word = BitWord::new(self.topo.word_size(), value)?;
        Ok(())
    }

    #[inline]
    pub fn word(&self, id: NodeId) -> u64 {
        self.nodes[id.0].word.value()
    }

    /// Reset every node for `mode` and zero the cycle counter.
    pub fn reset(&mut self, mode: Mode) {
        for node in &mut self.nodes {
            let ctx = NodeContext::of(&self.topo, node.id);
            node.reset_flags(&ctx, mode);
        }
        self.emitted.iter_mut().for_each(|e| *e = Emission::Silent);
        self.global_cycle = 0;
        self.mode = mode;
        self.scope = SearchScope::Full;
    }

    /// Cycle budget used by the schemes: `4 * (w + 2h + 2)`.
    pub fn default_budget(&self) -> u64 {
        let w = self.topo.word_size() as u64;
        let h = self.topo.height() as u64;
        4 * (w + 2 * h + 2)
    }

    /// Advance every node by one receive+send round.
    pub fn step(&mut self) -> Result<()> {
        let mode = self.mode;
        if mode == Mode::Idle {
            return Err(Error::Idle);
        }
        let topo = &*self.topo;
        let scope = self.scope;
        let combine = mode.combine();

        for (node, slot) in self.nodes.iter_mut().zip(self.emitted.iter_mut()) {
            let ctx = NodeContext::of(topo, node.id);
            *slot = match combine {
                None => node.send_search(&ctx, scope),
                Some(op) => node.send_max(&ctx, op),
            };
        }

        let emitted = &self.emitted;
        for node in &mut self.nodes {
            let id = node.id;
            let ctx = NodeContext::of(topo, id);
            node.inbox.parent = topo.parent_of(id).and_then(|p| emitted[p.0].down());
            for (slot, child) in node.inbox.children.iter_mut().zip(topo.children_of(id)) {
                *slot = emitted[child.0].up();
            }
            // The inbox is moved out so the node can borrow it alongside itself.
            let inbox = core::mem::take(&mut node.inbox);
            let res = match combine {
                None => node.receive_search(&inbox, &ctx, scope),
                Some(op) => node.receive_max(&inbox, &ctx, op),
            };
            node.inbox = inbox;
            res?;
        }

        self.global_cycle += 1;
        Ok(())
    }

    /// Whether the active mode's termination predicate holds.
    ///
    /// * full search: every node has had time to drain the match pulses of
    ///   its deepest descendants (`clock >= w + 1 + 2 * levels_below`) and no
    ///   non-root node still holds a match or a raised state,
    /// * search phase 1: every non-root node has compared all `w` key bits,
    /// * max/min: the root has written all `w` result bits and every other
    ///   node has emitted its initiate bit plus `w` result bits.
    pub fn is_quiescent(&self) -> bool {
        let len = self.topo.word_size();
        let leaf_depth = self.topo.height() - 1;
        match self.mode {
            Mode::Idle => true,
            Mode::Search => match self.scope {
                SearchScope::Full => self.nodes.iter().all(|node| {
                    let below = (leaf_depth - self.topo.depth_of(node.id)) as u32;
                    let drained = node.local_clock >= len + 1 + 2 * below;
                    if node.id == NodeId::ROOT {
                        drained
                    } else {
                        drained && !node.flags.state && !node.flags.matched
                    }
                }),
                SearchScope::Phase1 => self.nodes[1..]
                    .iter()
                    .all(|node| node.flags.start && node.local_clock >= len),
            },
            Mode::Max | Mode::Min => {
                let root = &self.nodes[0];
                root.flags.start
                    && root.local_clock >= len
                    && self.nodes[1..].iter().all(|n| n.local_clock > len)
            }
        }
    }

    pub fn run_until_quiescent(&mut self, max_cycles: u64) -> Result<u64> {
        self.run_until_quiescent_observed(max_cycles, &mut |_| {})
    }

    /// Like [`Configuration::run_until_quiescent`], calling `observer` after
    /// every step. Returns the number of cycles executed.
    pub fn run_until_quiescent_observed(
        &mut self,
        max_cycles: u64,
        observer: &mut dyn FnMut(&Configuration),
    ) -> Result<u64> {
        if self.mode == Mode::Idle {
            return Err(Error::Idle);
        }
        let start = self.global_cycle;
        while !self.is_quiescent() {
            if self.global_cycle - start >= max_cycles {
                return Err(Error::BudgetExceeded {
                    mode: self.mode,
                    budget: max_cycles,
                });
            }
            self.step()?;
            observer(self);
        }
        Ok(self.global_cycle - start)
    }

    /// One event per node for the current cycle.
    pub fn snapshot(&self) -> Vec<TraceEvent> {
        self.snapshot_filtered(|_| true)
    }

    pub fn snapshot_filtered(&self, mut keep: impl FnMut(NodeId) -> bool) -> Vec<TraceEvent> {
        self.nodes
            .iter()
            .filter(|n| keep(n.id))
            .map(|n| TraceEvent {
                cycle: self.global_cycle,
                node: n.id,
                depth: self.topo.depth_of(n.id),
                role: self.topo.role_of(n.id),
                word: n.word,
                flags: n.flags.clone(),
                emitted: self.emitted[n.id.0],
                child_count: self.topo.child_count(n.id),
            })
            .collect()
    }
}
