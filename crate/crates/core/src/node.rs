//! The per-node processing unit.
//!
//! A node owns one memory word and a handful of one-bit flags. Every global
//! cycle the engine calls a `send_*` function on each node, routes the
//! emitted bits into neighbour inboxes, and then calls the matching
//! `receive_*` function. Both are pure functions of the node's own state and
//! its inbox, so nodes may be evaluated in any order.
//!
//! Local clock conventions, shared by both protocols:
//!
//! * a non-root node is dormant until its `start` flag is raised; dormant
//!   nodes neither emit nor tick,
//! * `send_*` increments the clock whenever the node is active, so a receive
//!   always observes the post-send value,
//! * search: the initiate bit arrives at clock 0 and key bit `k` (MSB first)
//!   at clock `k + 1`; the node enters the upward phase once the clock
//!   exceeds the word length,
//! * max/min: every non-root node emits the initiate bit at clock 0 and the
//!   result for word bit `k` at clock `k + 1`; internal nodes reduce bit `k`
//!   when their clock reads `k + 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::engine::Mode;
use crate::error::{Error, Result};
use crate::topology::{CayleyTopology, NodeId, Role};
use crate::word::BitWord;

/// Reduction applied by the max/min protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combine {
    /// Bitwise OR, computes the maximum.
    Or,
    /// Bitwise AND, computes the minimum.
    And,
}

impl Combine {
    /// Result of combining an empty participant set.
    #[inline]
    pub fn identity(self) -> bool {
        match self {
            Combine::Or => false,
            Combine::And => true,
        }
    }

    #[inline]
    pub fn apply(self, acc: bool, bit: bool) -> bool {
        match self {
            Combine::Or => acc | bit,
            Combine::And => acc & bit,
        }
    }
}

/// Which part of the search protocol a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SearchScope {
    /// Downward key broadcast followed by upward match aggregation.
    #[default]
    Full,
    /// Downward key broadcast only; nodes halt with their match flag settled.
    Phase1,
}

/// What a node put on the wire during a send.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Emission {
    #[default]
    Silent,
    /// The same bit to every child.
    Down(bool),
    /// One bit to the parent.
    Up(bool),
}

impl Emission {
    #[inline]
    pub fn down(self) -> Option<bool> {
        match self {
            Emission::Down(b) => Some(b),
            _ => None,
        }
    }

    #[inline]
    pub fn up(self) -> Option<bool> {
        match self {
            Emission::Up(b) => Some(b),
            _ => None,
        }
    }
}

/// A neighbour port of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    Parent,
    /// Child at this position in the node's child list.
    Child(usize),
}

/// Bits latched from neighbours for the current cycle. Overwritten every cycle.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Inbox {
    pub parent: Option<bool>,
    pub children: Vec<Option<bool>>,
}

impl Inbox {
    pub fn with_ports(child_count: usize) -> Self {
        Inbox {
            parent: None,
            children: vec![None; child_count],
        }
    }

    pub fn clear(&mut self) {
        self.parent = None;
        self.children.iter_mut().for_each(|slot| *slot = None);
    }
}

/// One-bit registers of a node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NodeFlags {
    pub state: bool,
    pub start: bool,
    pub matched: bool,
    /// Set when the node's own word no longer takes part in the reduction.
    pub link_mem: bool,
    /// One disable flag per child, left to right. The root carries `eta + 1`.
    pub link_children: Vec<bool>,
    /// Kept for the flag budget; the max/min protocol never reads parent bits.
    pub link_parent: bool,
    /// Sticky memory disable used by sorting; survives every reset.
    pub perm_disabled: bool,
}

impl NodeFlags {
    pub fn with_ports(child_count: usize) -> Self {
        NodeFlags {
            link_children: vec![false; child_count],
            ..NodeFlags::default()
        }
    }
}

/// The topology facts a node needs to run its transition functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeContext {
    pub role: Role,
    pub child_count: usize,
}

impl NodeContext {
    #[inline]
    pub fn of(topo: &CayleyTopology, id: NodeId) -> Self {
        NodeContext {
            role: topo.role_of(id),
            child_count: topo.child_count(id),
        }
    }

    #[inline]
    fn is_root(&self) -> bool {
        self.role == Role::Root
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    pub id: NodeId,
    pub word: BitWord,
    pub flags: NodeFlags,
    pub local_clock: u32,
    pub inbox: Inbox,
}

impl NodeState {
    pub fn new(id: NodeId, word: BitWord, child_count: usize) -> Self {
        NodeState {
            id,
            word,
            flags: NodeFlags::with_ports(child_count),
            local_clock: 0,
            inbox: Inbox::with_ports(child_count),
        }
    }

    #[inline]
    fn word_len(&self) -> u32 {
        self.word.width()
    }

    fn check_ports(&self, inbox: &Inbox, ctx: &NodeContext) -> Result<()> {
        if inbox.children.len() != ctx.child_count
            || self.flags.link_children.len() != ctx.child_count
        {
            return Err(Error::PortMismatch {
                node: self.id.0,
                expected: ctx.child_count,
                got: inbox.children.len(),
            });
        }
        if ctx.is_root() && inbox.parent.is_some() {
            return Err(Error::PortMismatch {
                node: self.id.0,
                expected: ctx.child_count,
                got: inbox.children.len() + 1,
            });
        }
        Ok(())
    }

    /// Search send step.
    pub fn send_search(&mut self, ctx: &NodeContext, scope: SearchScope) -> Emission {
        let len = self.word_len();
        let clock = self.local_clock;
        if ctx.is_root() {
            self.local_clock += 1;
            return if clock == 0 {
                self.flags.state = true;
                Emission::Down(true)
            } else if clock <= len {
                self.flags.state = self.word.bit(clock - 1);
                Emission::Down(self.flags.state)
            } else {
                Emission::Silent
            };
        }

        if !self.flags.start {
            return Emission::Silent;
        }
        if clock <= len {
            self.local_clock += 1;
            if ctx.child_count == 0 {
                Emission::Silent
            } else {
                Emission::Down(self.flags.state)
            }
        } else {
            match scope {
                SearchScope::Phase1 => Emission::Silent,
                SearchScope::Full => {
                    self.local_clock += 1;
                    Emission::Up(self.flags.state)
                }
            }
        }
    }

    /// Search receive step: latch the parent's bit and compare it during the
    /// broadcast, OR the children's bits with the local match afterwards.
    pub fn receive_search(
        &mut self,
        inbox: &Inbox,
        ctx: &NodeContext,
        scope: SearchScope,
    ) -> Result<()> {
        self.check_ports(inbox, ctx)?;
        let len = self.word_len();
        let clock = self.local_clock;
        let children_or = || inbox.children.contains(&Some(true));

        if ctx.is_root() {
            if clock > len && scope == SearchScope::Full {
                // The state register carried the key on the way down.
                if clock == len + 1 {
                    self.flags.state = false;
                }
                if !self.flags.state {
                    self.flags.state = children_or();
                }
            }
            return Ok(());
        }

        if clock <= len {
            let Some(bit) = inbox.parent else {
                return Ok(());
            };
            self.flags.state = bit;
            if !self.flags.start {
                self.flags.start = bit;
            } else if self.flags.matched {
                self.flags.matched = bit == self.word.bit(clock - 1);
            }
        } else if scope == SearchScope::Full {
            self.flags.state = children_or() || self.flags.matched;
            self.flags.matched = false;
        }
        Ok(())
    }

    /// Max/min send step.
    pub fn send_max(&mut self, ctx: &NodeContext, combine: Combine) -> Emission {
        if !self.flags.start {
            return Emission::Silent;
        }
        let len = self.word_len();
        let clock = self.local_clock;
        if clock > len {
            return Emission::Silent;
        }
        self.local_clock += 1;
        match ctx.role {
            Role::Root => Emission::Silent,
            Role::Intermediate => Emission::Up(self.flags.state),
            Role::Leaf => {
                if clock == 0 {
                    self.flags.state = true;
                } else {
                    self.flags.state = if self.flags.link_mem {
                        combine.identity()
                    } else {
                        self.word.msb()
                    };
                    self.word.circular_left_shift();
                }
                Emission::Up(self.flags.state)
            }
        }
    }

    /// Max/min receive step: reduce the enabled children and the local MSB,
    /// disable every participant that disagrees with the result, rotate.
    pub fn receive_max(
        &mut self,
        inbox: &Inbox,
        ctx: &NodeContext,
        combine: Combine,
    ) -> Result<()> {
        self.check_ports(inbox, ctx)?;
        if ctx.role == Role::Leaf {
            return Ok(());
        }
        if !self.flags.start {
            if inbox.children.contains(&Some(true)) {
                self.flags.start = true;
                self.flags.state = true;
            }
            return Ok(());
        }
        let clock = self.local_clock;
        if clock == 0 || clock > self.word_len() {
            return Ok(());
        }

        let mut s = combine.identity();
        for (bit, &disabled) in inbox.children.iter().zip(&self.flags.link_children) {
            if let (Some(bit), false) = (bit, disabled) {
                s = combine.apply(s, *bit);
            }
        }
        let own = !ctx.is_root() && !self.flags.link_mem;
        let msb = self.word.msb();
        if own {
            s = combine.apply(s, msb);
        }

        for (bit, disabled) in inbox
            .children
            .iter()
            .zip(self.flags.link_children.iter_mut())
        {
            if let Some(bit) = bit {
                if !*disabled && *bit != s {
                    *disabled = true;
                }
            }
        }
        if own && msb != s {
            self.flags.link_mem = true;
        }
        self.flags.state = s;
        if ctx.is_root() {
            self.word.set_msb(s);
        }
        self.word.circular_left_shift();
        Ok(())
    }

    /// Put the flags into the initial configuration of `next_mode`.
    ///
    /// Links are re-enabled except the memory link of a permanently disabled
    /// node, which also never reports a match.
    pub fn reset_flags(&mut self, ctx: &NodeContext, next_mode: Mode) {
        let flags = &mut self.flags;
        self.local_clock = 0;
        self.inbox.clear();
        flags.link_children.iter_mut().for_each(|l| *l = false);
        flags.link_parent = false;
        flags.link_mem = flags.perm_disabled;
        match next_mode {
            Mode::Search => {
                if ctx.is_root() {
                    flags.state = true;
                    flags.start = true;
                    flags.matched = true;
                } else {
                    flags.state = false;
                    flags.start = false;
                    flags.matched = !flags.perm_disabled;
                }
            }
            Mode::Max | Mode::Min => {
                let leaf = ctx.role == Role::Leaf;
                flags.state = leaf;
                flags.start = leaf;
                flags.matched = true;
            }
            Mode::Idle => {
                flags.state = false;
                flags.start = false;
                flags.matched = false;
            }
        }
    }
}
