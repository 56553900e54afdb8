//! Brute-force reference answers and the classical baseline sorters.
//!
//! Nothing here touches the simulator; these are the ground truth the
//! simulator is checked against.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremum {
    Max,
    Min,
}

/// Outcome of comparing a simulator answer with the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport<T> {
    pub expected: T,
    pub agreed: bool,
    /// Describes the divergence when `agreed` is false.
    pub detail: Option<String>,
}

impl<T: PartialEq + Debug> OracleReport<T> {
    pub fn compare(expected: T, actual: &T) -> Self {
        let agreed = expected == *actual;
        let detail = (!agreed).then(|| format!("expected {expected:?}, simulator gave {actual:?}"));
        OracleReport {
            expected,
            agreed,
            detail,
        }
    }
}

pub fn oracle_search(elements: &[u64], key: u64) -> bool {
    for &e in elements {
        if e == key {
            return true;
        }
    }
    false
}

/// Max or min of `elements`, or `identity` when the list is empty.
pub fn oracle_extremum(elements: &[u64], which: Extremum, identity: u64) -> u64 {
    let mut it = elements.iter().copied();
    let Some(mut best) = it.next() else {
        return identity;
    };
    for e in it {
        let better = match which {
            Extremum::Max => e > best,
            Extremum::Min => e < best,
        };
        if better {
            best = e;
        }
    }
    best
}

pub fn oracle_sort_desc(elements: &[u64]) -> Vec<u64> {
    let mut out = elements.to_vec();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Classical comparison (and one non-comparison) sorts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Baseline {
    Insertion,
    Selection,
    Bubble,
    Merge,
    Heap,
    Quick,
    Radix,
}

impl Baseline {
    pub const ALL: [Baseline; 7] = [
        Baseline::Insertion,
        Baseline::Selection,
        Baseline::Bubble,
        Baseline::Merge,
        Baseline::Heap,
        Baseline::Quick,
        Baseline::Radix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Baseline::Insertion => "insertion",
            Baseline::Selection => "selection",
            Baseline::Bubble => "bubble",
            Baseline::Merge => "merge",
            Baseline::Heap => "heap",
            Baseline::Quick => "quick",
            Baseline::Radix => "radix",
        }
    }

    /// Sort descending. The second value counts element comparisons, or
    /// digit-bucket placements for radix sort.
    pub fn sort_desc(self, elements: &[u64]) -> (Vec<u64>, u64) {
        let mut v = elements.to_vec();
        let mut ops = 0u64;
        match self {
            Baseline::Insertion => insertion(&mut v, &mut ops),
            Baseline::Selection => selection(&mut v, &mut ops),
            Baseline::Bubble => bubble(&mut v, &mut ops),
            Baseline::Merge => v = merge(&v, &mut ops),
            Baseline::Heap => heap(&mut v, &mut ops),
            Baseline::Quick => quick(&mut v, &mut ops),
            Baseline::Radix => radix(&mut v, &mut ops),
        }
        (v, ops)
    }
}

// `before(a, b)` is true when `a` belongs strictly ahead of `b` in descending order.
#[inline]
fn before(a: u64, b: u64, ops: &mut u64) -> bool {
    *ops += 1;
    a > b
}

fn insertion(v: &mut [u64], ops: &mut u64) {
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && before(v[j], v[j - 1], ops) {
            v.swap(j, j - 1);
            j -= 1;
        }
    }
}

fn selection(v: &mut [u64], ops: &mut u64) {
    for i in 0..v.len() {
        let mut best = i;
        for j in i + 1..v.len() {
            if before(v[j], v[best], ops) {
                best = j;
            }
        }
        v.swap(i, best);
    }
}

fn bubble(v: &mut [u64], ops: &mut u64) {
    let mut end = v.len();
    while end > 1 {
        let mut last_swap = 0;
        for j in 1..end {
            if before(v[j], v[j - 1], ops) {
                v.swap(j, j - 1);
                last_swap = j;
            }
        }
        end = last_swap;
    }
}

fn merge(v: &[u64], ops: &mut u64) -> Vec<u64> {
    if v.len() <= 1 {
        return v.to_vec();
    }
    let mid = v.len() / 2;
    let left = merge(&v[..mid], ops);
    let right = merge(&v[mid..], ops);
    let mut out = Vec::with_capacity(v.len());
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        if before(right[j], left[i], ops) {
            out.push(right[j]);
            j += 1;
        } else {
            out.push(left[i]);
            i += 1;
        }
    }
    out.extend_from_slice(&left[i..]);
    out.extend_from_slice(&right[j..]);
    out
}

fn heap(v: &mut [u64], ops: &mut u64) {
    // Min-heap, so popping to the back leaves the slice descending.
    fn sift_down(v: &mut [u64], mut root: usize, end: usize, ops: &mut u64) {
        loop {
            let mut child = 2 * root + 1;
            if child >= end {
                break;
            }
            if child + 1 < end && before(v[child], v[child + 1], ops) {
                child += 1;
            }
            if before(v[root], v[child], ops) {
                v.swap(root, child);
                root = child;
            } else {
                break;
            }
        }
    }
    let n = v.len();
    for i in (0..n / 2).rev() {
        sift_down(v, i, n, ops);
    }
    for end in (1..n).rev() {
        v.swap(0, end);
        sift_down(v, 0, end, ops);
    }
}

fn quick(v: &mut [u64], ops: &mut u64) {
    if v.len() <= 1 {
        return;
    }
    // Median-of-three pivot moved to the end, Lomuto partition.
    let last = v.len() - 1;
    let mid = last / 2;
    if before(v[mid], v[0], ops) {
        v.swap(mid, 0);
    }
    if before(v[last], v[0], ops) {
        v.swap(last, 0);
    }
    if before(v[last], v[mid], ops) {
        v.swap(last, mid);
    }
    v.swap(mid, last);
    let pivot = v[last];
    let mut store = 0;
    for i in 0..last {
        if before(v[i], pivot, ops) {
            v.swap(i, store);
            store += 1;
        }
    }
    v.swap(store, last);
    let (left, right) = v.split_at_mut(store);
    quick(left, ops);
    quick(&mut right[1..], ops);
}

fn radix(v: &mut Vec<u64>, ops: &mut u64) {
    // LSD, one byte per pass, buckets visited high to low.
    let mut buf = Vec::with_capacity(v.len());
    for shift in (0..64).step_by(8) {
        if v.iter().all(|&x| x >> shift == 0) {
            break;
        }
        let mut counts = [0usize; 256];
        for &x in v.iter() {
            counts[((x >> shift) & 0xff) as usize] += 1;
        }
        let mut offsets = [0usize; 256];
        let mut acc = 0;
        for digit in (0..256).rev() {
            offsets[digit] = acc;
            acc += counts[digit];
        }
        buf.clear();
        buf.resize(v.len(), 0);
        for &x in v.iter() {
            let d = ((x >> shift) & 0xff) as usize;
            buf[offsets[d]] = x;
            offsets[d] += 1;
            *ops += 1;
        }
        core::mem::swap(v, &mut buf);
    }
}
