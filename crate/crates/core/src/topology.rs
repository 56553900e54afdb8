//! Finite Cayley trees: node counts, height selection and adjacency.
//!
//! The root has `eta + 1` children, every other internal node has `eta`
//! children and all leaves sit at depth `height - 1`. Node ids are assigned
//! breadth-first with the root at 0, so the children of any node occupy a
//! contiguous id range.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::error::{Error, Result};

/// Largest supported word width (words are stored in a `u64`).
pub const MAX_WORD_SIZE: u32 = 64;

/// Shape of a tree plus the width of every memory word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeParams {
    pub eta: usize,
    pub height: usize,
    pub word_size: u32,
}

impl TreeParams {
    pub fn new(eta: usize, height: usize, word_size: u32) -> Result<Self> {
        let params = TreeParams {
            eta,
            height,
            word_size,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.eta == 0 {
            return Err(Error::InvalidParams {
                what: "eta",
                value: 0,
            });
        }
        if self.height == 0 {
            return Err(Error::InvalidParams {
                what: "height",
                value: 0,
            });
        }
        if self.word_size == 0 || self.word_size > MAX_WORD_SIZE {
            return Err(Error::InvalidParams {
                what: "word size",
                value: self.word_size as usize,
            });
        }
        node_count(self.eta, self.height).map(|_| ())
    }

    /// Number of nodes in the tree these parameters describe.
    pub fn node_count(&self) -> Result<usize> {
        node_count(self.eta, self.height)
    }
}

/// Dense breadth-first node index; the root is `NodeId(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Root,
    Intermediate,
    Leaf,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Root => "root",
            Role::Intermediate => "intermediate",
            Role::Leaf => "leaf",
        }
    }
}

/// Number of nodes in a Cayley tree of order `eta` and height `height`.
///
/// `1` for a single-level tree, otherwise `1 + (eta + 1) * (1 + eta + ... + eta^(height-2))`.
/// Overflow is reported, never wrapped.
pub fn node_count(eta: usize, height: usize) -> Result<usize> {
    if eta == 0 {
        return Err(Error::InvalidParams {
            what: "eta",
            value: 0,
        });
    }
    if height == 0 {
        return Err(Error::InvalidParams {
            what: "height",
            value: 0,
        });
    }
    if height == 1 {
        return Ok(1);
    }
    let overflow = Error::Overflow { eta, height };
    let mut level_width: usize = 1;
    let mut geometric: usize = 0;
    for i in 0..=(height - 2) {
        if i > 0 {
            level_width = level_width.checked_mul(eta).ok_or(overflow.clone())?;
        }
        geometric = geometric.checked_add(level_width).ok_or(overflow.clone())?;
    }
    (eta + 1)
        .checked_mul(geometric)
        .and_then(|v| v.checked_add(1))
        .ok_or(overflow)
}

/// Smallest height `>= 2` whose non-root slots can hold `list_len` elements.
pub fn required_height(eta: usize, list_len: usize) -> Result<usize> {
    if eta == 0 {
        return Err(Error::InvalidParams {
            what: "eta",
            value: 0,
        });
    }
    if eta == 1 {
        // n = 2h - 1, so the slot count 2h - 2 grows linearly.
        let h = list_len.div_ceil(2) + 1;
        let h = h.max(2);
        node_count(1, h)?;
        return Ok(h);
    }
    let mut height = 2;
    loop {
        if node_count(eta, height)? > list_len {
            return Ok(height);
        }
        height += 1;
    }
}

/// Immutable adjacency of a finite Cayley tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTopology {
    params: TreeParams,
    parent: Vec<Option<NodeId>>,
    children: Vec<Range<usize>>,
    depth: Vec<usize>,
    role: Vec<Role>,
    ids: Vec<NodeId>,
}

impl CayleyTopology {
    pub fn build(params: TreeParams) -> Result<Self> {
        params.validate()?;
        let n = params.node_count()?;
        let mut parent = Vec::with_capacity(n);
        let mut children = Vec::with_capacity(n);
        let mut depth = Vec::with_capacity(n);
        let mut role = Vec::with_capacity(n);
        let leaf_depth = params.height - 1;

        parent.push(None);
        depth.push(0);
        let mut next_free = 1;
        // Ids are handed out in the order nodes are visited, which is BFS.
        let mut cursor = 0;
        while cursor < n {
            let d = depth[cursor];
            let fanout = if d == leaf_depth {
                0
            } else if cursor == 0 {
                params.eta + 1
            } else {
                params.eta
            };
            children.push(next_free..next_free + fanout);
            for _ in 0..fanout {
                parent.push(Some(NodeId(cursor)));
                depth.push(d + 1);
            }
            next_free += fanout;
            role.push(if cursor == 0 {
                Role::Root
            } else if fanout == 0 {
                Role::Leaf
            } else {
                Role::Intermediate
            });
            cursor += 1;
        }
        debug_assert_eq!(next_free, n);

        Ok(CayleyTopology {
            params,
            parent,
            children,
            depth,
            role,
            ids: (0..n).map(NodeId).collect(),
        })
    }

    #[inline]
    pub fn params(&self) -> TreeParams {
        self.params
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    /// Always false; a topology holds at least its root.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.params.height
    }

    #[inline]
    pub fn word_size(&self) -> u32 {
        self.params.word_size
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.ids
    }

    #[inline]
    pub fn parent_of(&self, node: NodeId) -> Option<NodeId> {
        self.parent[node.0]
    }

    /// Children left to right.
    #[inline]
    pub fn children_of(&self, node: NodeId) -> &[NodeId] {
        &self.ids[self.children[node.0].clone()]
    }

    #[inline]
    pub fn child_count(&self, node: NodeId) -> usize {
        self.children[node.0].len()
    }

    #[inline]
    pub fn role_of(&self, node: NodeId) -> Role {
        self.role[node.0]
    }

    #[inline]
    pub fn depth_of(&self, node: NodeId) -> usize {
        self.depth[node.0]
    }

    /// Position of `node` in its parent's child list.
    pub fn child_slot(&self, node: NodeId) -> Option<usize> {
        let parent = self.parent_of(node)?;
        Some(node.0 - self.children[parent.0].start)
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.ids
            .iter()
            .copied()
            .filter(|&id| self.role_of(id) == Role::Leaf)
    }

    /// Every node strictly below `node`, in breadth-first order.
    pub fn descendants(&self, node: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut frontier = self.children[node.0].clone();
        while !frontier.is_empty() {
            out.extend(frontier.clone().map(NodeId));
            let first = self.children[frontier.start].start;
            let last = self.children[frontier.end - 1].end;
            frontier = first..last;
        }
        out
    }

    /// Number of non-root slots available for list elements.
    #[inline]
    pub fn capacity(&self) -> usize {
        self.len() - 1
    }
}
