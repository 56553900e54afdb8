//! JSON-lines trace stream: one flat object per node per traced cycle.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::sync::Arc;

use cayley_imc::{
    load_list, sort_observed, BitWord, CayleyTopology, Configuration, Mode, NodeFlags, NodeId,
    Port, Scheme, SortOrder, TraceEvent, TreeParams,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub cycle: u64,
    pub node: usize,
    pub depth: usize,
    pub role: String,
    /// Binary, MSB first; its length is the word size.
    pub word: String,
    pub state: u8,
    pub start: u8,
    #[serde(rename = "match")]
    pub matched: u8,
    pub l_m: u8,
    pub l_children: Vec<u8>,
    pub perm_disabled: u8,
    /// Port (`p` for the parent, `c0`, `c1`, ... for children) to bit.
    pub emitted: BTreeMap<String, u8>,
}

/// What produced a trace. Needed for replay because every run starts from a
/// reset and the initial snapshot alone does not say what follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    Search,
    Max,
    Min,
    Sort,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace line {line}: {source}")]
    Parse {
        line: usize,
        source: serde_json::Error,
    },
    #[error("trace is empty")]
    Empty,
    #[error("malformed initial snapshot: {0}")]
    Snapshot(String),
    #[error("replay diverged at cycle {cycle}, node {node}")]
    Diverged { cycle: u64, node: usize },
    #[error("replay produced {replayed} records, trace has {recorded}")]
    Length { replayed: usize, recorded: usize },
    #[error(transparent)]
    Engine(#[from] cayley_imc::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn bit(b: bool) -> u8 {
    b as u8
}

fn port_name(port: Port) -> String {
    match port {
        Port::Parent => "p".to_string(),
        Port::Child(i) => format!("c{i}"),
    }
}

impl TraceRecord {
    pub fn from_event(event: &TraceEvent, cycle: u64) -> Self {
        let f = &event.flags;
        TraceRecord {
            cycle,
            node: event.node.0,
            depth: event.depth,
            role: event.role.as_str().to_string(),
            word: event.word.to_string(),
            state: bit(f.state),
            start: bit(f.start),
            matched: bit(f.matched),
            l_m: bit(f.link_mem),
            l_children: f.link_children.iter().map(|&b| bit(b)).collect(),
            perm_disabled: bit(f.perm_disabled),
            emitted: event
                .emitted_bits()
                .into_iter()
                .map(|(port, b)| (port_name(port), bit(b)))
                .collect(),
        }
    }

    fn word_and_flags(&self) -> Result<(BitWord, NodeFlags), TraceError> {
        let bad = |what: &str| TraceError::Snapshot(format!("node {}: bad {what}", self.node));
        let as_bool = |v: u8, what: &str| match v {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(bad(what)),
        };
        let width = self.word.len() as u32;
        let value = u64::from_str_radix(&self.word, 2).map_err(|_| bad("word"))?;
        let word = BitWord::new(width, value).map_err(|_| bad("word"))?;
        let flags = NodeFlags {
            state: as_bool(self.state, "state")?,
            start: as_bool(self.start, "start")?,
            matched: as_bool(self.matched, "match")?,
            link_mem: as_bool(self.l_m, "l_m")?,
            link_children: self
                .l_children
                .iter()
                .map(|&b| as_bool(b, "l_children"))
                .collect::<Result<_, _>>()?,
            link_parent: false,
            perm_disabled: as_bool(self.perm_disabled, "perm_disabled")?,
        };
        Ok((word, flags))
    }
}

/// Writes the snapshots handed to it, numbering them in arrival order.
pub struct TraceWriter<W: Write> {
    out: W,
    next_cycle: u64,
    error: Option<io::Error>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        TraceWriter {
            out,
            next_cycle: 0,
            error: None,
        }
    }

    pub fn record(&mut self, cfg: &Configuration) {
        let cycle = self.next_cycle;
        self.next_cycle += 1;
        if self.error.is_some() {
            return;
        }
        for event in cfg.snapshot() {
            let rec = TraceRecord::from_event(&event, cycle);
            let res = serde_json::to_writer(&mut self.out, &rec)
                .map_err(io::Error::from)
                .and_then(|_| self.out.write_all(b"\n"));
            if let Err(e) = res {
                self.error = Some(e);
                return;
            }
        }
    }

    /// Flush and surface the first write error, if any.
    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn parse_trace(reader: impl BufRead) -> Result<Vec<TraceRecord>, TraceError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|source| TraceError::Parse {
            line: i + 1,
            source,
        })?;
        out.push(rec);
    }
    Ok(out)
}

/// Rebuild the configuration recorded at cycle 0.
pub fn initial_configuration(
    records: &[TraceRecord],
    mode: Mode,
) -> Result<Configuration, TraceError> {
    let first: Vec<&TraceRecord> = records.iter().take_while(|r| r.cycle == 0).collect();
    let root = first.first().ok_or(TraceError::Empty)?;
    if root.node != 0 || root.l_children.len() < 2 {
        return Err(TraceError::Snapshot(
            "first record is not a root with children".into(),
        ));
    }
    let eta = root.l_children.len() - 1;
    let height = first.iter().map(|r| r.depth).max().unwrap_or(0) + 1;
    let width = root.word.len() as u32;
    let params = TreeParams::new(eta, height, width)?;
    let topo = Arc::new(CayleyTopology::build(params)?);
    if first.iter().enumerate().any(|(i, r)| r.node != i) {
        return Err(TraceError::Snapshot(
            "cycle-0 records are not in node order".into(),
        ));
    }
    let nodes = first
        .iter()
        .map(|r| r.word_and_flags())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Configuration::from_snapshot(topo, mode, nodes)?)
}

fn compare(replayed: &[TraceRecord], recorded: &[TraceRecord]) -> Result<(), TraceError> {
    for (a, b) in replayed.iter().zip(recorded) {
        if a != b {
            return Err(TraceError::Diverged {
                cycle: b.cycle,
                node: b.node,
            });
        }
    }
    if replayed.len() != recorded.len() {
        return Err(TraceError::Length {
            replayed: replayed.len(),
            recorded: recorded.len(),
        });
    }
    Ok(())
}

fn collect(cfg: &Configuration, cycle: u64, into: &mut Vec<TraceRecord>) {
    into.extend(
        cfg.snapshot()
            .iter()
            .map(|e| TraceRecord::from_event(e, cycle)),
    );
}

/// Re-run the engine from the trace's initial snapshot and check that it
/// reproduces every later record.
///
/// Search, max and min traces are stepped directly from the snapshot. A
/// sort trace is driven through the sort loop again: the list is the words
/// of the live non-root nodes and the order follows from the root sentinel.
pub fn replay(records: &[TraceRecord], kind: TraceKind) -> Result<(), TraceError> {
    let mode = match kind {
        TraceKind::Search => Mode::Search,
        TraceKind::Max | TraceKind::Sort => Mode::Max,
        TraceKind::Min => Mode::Min,
    };
    let mut cfg = initial_configuration(records, mode)?;
    let mut replayed = Vec::with_capacity(records.len());

    if kind == TraceKind::Sort {
        let topo = cfg.topology().clone();
        let elements: Vec<u64> = cfg.nodes()[1..]
            .iter()
            .filter(|n| !n.flags.perm_disabled)
            .map(|n| n.word.value())
            .collect();
        let order = if cfg.word(NodeId::ROOT) == 0 {
            SortOrder::Descending
        } else {
            SortOrder::Ascending
        };
        let mut cycle = 0;
        sort_observed(topo, &elements, order, &mut |c| {
            collect(c, cycle, &mut replayed);
            cycle += 1;
        })?;
    } else {
        collect(&cfg, 0, &mut replayed);
        let budget = cfg.default_budget();
        cfg.run_until_quiescent_observed(budget, &mut |c| {
            collect(c, c.global_cycle(), &mut replayed)
        })?;
    }
    compare(&replayed, records)
}

/// Run one scheme over `elements`, writing its trace to `out`.
pub fn write_trace(
    topo: Arc<CayleyTopology>,
    elements: &[u64],
    kind: TraceKind,
    key: u64,
    order: SortOrder,
    out: impl Write,
) -> Result<(), TraceError> {
    let mut writer = TraceWriter::new(out);
    let mut obs = |c: &Configuration| writer.record(c);
    match kind {
        TraceKind::Search => {
            load_list(topo, elements, Scheme::Search { key })?
                .search_observed(key, false, &mut obs)?;
        }
        TraceKind::Max => {
            load_list(topo, elements, Scheme::Max)?.compute_max_observed(&mut obs)?;
        }
        TraceKind::Min => {
            load_list(topo, elements, Scheme::Min)?.compute_min_observed(&mut obs)?;
        }
        TraceKind::Sort => {
            sort_observed(topo, elements, order, &mut obs)?;
        }
    }
    writer.finish()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topo() -> Arc<CayleyTopology> {
        Arc::new(CayleyTopology::build(TreeParams::new(2, 3, 4).unwrap()).unwrap())
    }

    fn traced(kind: TraceKind, order: SortOrder) -> Vec<TraceRecord> {
        let mut buf = Vec::new();
        let list = [14, 9, 6, 10, 14, 7, 11, 11, 10];
        write_trace(topo(), &list, kind, 9, order, &mut buf).unwrap();
        parse_trace(buf.as_slice()).unwrap()
    }

    #[test]
    fn record_shape() {
        let recs = traced(TraceKind::Search, SortOrder::Descending);
        let root = &recs[0];
        assert_eq!((root.cycle, root.node, root.role.as_str()), (0, 0, "root"));
        assert_eq!(root.word, "1001");
        assert_eq!(root.l_children.len(), 3);
        assert!(root.emitted.is_empty());
        let line = serde_json::to_string(root).unwrap();
        for key in [
            "cycle",
            "node",
            "depth",
            "role",
            "word",
            "state",
            "start",
            "\"match\"",
            "l_m",
            "l_children",
            "perm_disabled",
            "emitted",
        ] {
            assert!(line.contains(key), "{key} missing from {line}");
        }
        let root_c1 = recs.iter().find(|r| r.cycle == 1 && r.node == 0).unwrap();
        assert_eq!(root_c1.emitted.len(), 3);
        assert_eq!(root_c1.emitted["c0"], 1);
    }

    #[test]
    fn every_kind_replays() {
        for kind in [
            TraceKind::Search,
            TraceKind::Max,
            TraceKind::Min,
            TraceKind::Sort,
        ] {
            replay(&traced(kind, SortOrder::Descending), kind).unwrap();
        }
        replay(
            &traced(TraceKind::Sort, SortOrder::Ascending),
            TraceKind::Sort,
        )
        .unwrap();
    }

    #[test]
    fn tampering_is_detected() {
        let mut recs = traced(TraceKind::Max, SortOrder::Descending);
        let last = recs.len() - 1;
        recs[last].state ^= 1;
        assert!(matches!(
            replay(&recs, TraceKind::Max),
            Err(TraceError::Diverged { .. })
        ));
        recs.pop();
        assert!(matches!(
            replay(&recs, TraceKind::Max),
            Err(TraceError::Length { .. })
        ));
    }
}
