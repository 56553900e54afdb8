use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use cayley_imc::oracle::{
    oracle_extremum, oracle_search, oracle_sort_desc, Extremum, OracleReport,
};
use cayley_imc::{
    load_list, required_height, resource_report, sort_observed, word_mask, CayleyTopology,
    Configuration, FlagScheme, Scheme, SortOrder, TreeParams,
};
use serde::Serialize;

use crate::bench::{run_bench, BenchReport};
use crate::input::Source;
use crate::trace::{TraceKind, TraceWriter};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Search,
    Max,
    Min,
    Sort,
    /// Run a scheme and stream its trace to stdout.
    Trace(TraceKind),
    Info,
    Bench,
}

impl Command {
    fn kind(self) -> Option<TraceKind> {
        match self {
            Command::Search => Some(TraceKind::Search),
            Command::Max => Some(TraceKind::Max),
            Command::Min => Some(TraceKind::Min),
            Command::Sort => Some(TraceKind::Sort),
            Command::Trace(kind) => Some(kind),
            Command::Info | Command::Bench => None,
        }
    }
}

/// Everything one invocation needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSpec {
    pub command: Command,
    pub eta: usize,
    pub word_size: u32,
    /// `None` picks the smallest height that holds the list.
    pub height: Option<usize>,
    pub source: Source,
    pub key: Option<u64>,
    pub order: Option<SortOrder>,
    pub trace_out: Option<PathBuf>,
    pub verify: bool,
    pub seed: Option<u64>,
    pub json: bool,
    /// List lengths swept by `bench`.
    pub bench_sizes: Vec<usize>,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            command: Command::Info,
            eta: 2,
            word_size: 8,
            height: None,
            source: Source::None,
            key: None,
            order: None,
            trace_out: None,
            verify: true,
            seed: None,
            json: false,
            bench_sizes: vec![16, 64, 256],
        }
    }
}

impl RunSpec {
    pub fn validate(&self) -> Result<()> {
        let kind = self.command.kind();
        ensure!(self.eta >= 1, "--eta must be at least 1");
        ensure!(
            (1..=64).contains(&self.word_size),
            "--word-size must be between 1 and 64, got {}",
            self.word_size
        );
        match (kind == Some(TraceKind::Search), self.key) {
            (true, None) => bail!("search needs --key"),
            (false, Some(_)) => bail!("--key is only valid for search"),
            (true, Some(k)) => ensure!(
                k <= word_mask(self.word_size),
                "key {k} does not fit in {} bits",
                self.word_size
            ),
            _ => {}
        }
        if self.order.is_some() && kind != Some(TraceKind::Sort) {
            bail!("--order is only valid for sort");
        }
        if kind.is_some() && self.source == Source::None {
            bail!("no input list: use --input, --list or --random");
        }
        Ok(())
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub(crate) fn topology_for(&self, len: usize) -> Result<Arc<CayleyTopology>> {
        let required = required_height(self.eta, len)?;
        let height = match self.height {
            None => required,
            Some(h) if h < required => {
                bail!("--height {h} holds fewer than {len} elements (need at least {required})")
            }
            Some(h) => h,
        };
        let params = TreeParams::new(self.eta, height, self.word_size)?;
        Ok(Arc::new(CayleyTopology::build(params)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Answer {
    Found {
        found: bool,
        matched_nodes: Vec<usize>,
    },
    Value(u64),
    Sorted(Vec<u64>),
}

/// Result block of a search, max, min or sort run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub scheme: &'static str,
    pub answer: Answer,
    pub elements: usize,
    pub n: usize,
    pub h: usize,
    pub w: u32,
    pub eta: usize,
    pub cycles: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    pub flag_overhead_bits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfoReport {
    pub eta: usize,
    pub h: usize,
    pub w: u32,
    pub n: usize,
    pub capacity: usize,
    pub leaves: usize,
    pub elements: usize,
    pub search_cycles: u64,
    pub extremum_cycles: u64,
    pub sort_round_cycles: u64,
    pub search_flag_bits: usize,
    pub extremum_flag_bits: usize,
    pub sort_flag_bits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Run(RunReport),
    Info(InfoReport),
    Bench(BenchReport),
}

impl Outcome {
    /// 0 on success, 2 when the simulator and the oracle disagree.
    pub fn exit_code(&self) -> u8 {
        let agreed = match self {
            Outcome::Run(r) => r.oracle_agrees != Some(false),
            Outcome::Info(_) => true,
            Outcome::Bench(b) => b.rows.iter().all(|r| r.agrees),
        };
        if agreed {
            0
        } else {
            2
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string(self).expect("reports serialize");
            s.push('\n');
            return s;
        }
        match self {
            Outcome::Run(r) => r.render_text(),
            Outcome::Info(i) => i.render_text(),
            Outcome::Bench(b) => b.render_text(),
        }
    }
}

fn join(values: impl IntoIterator<Item = impl ToString>) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl RunReport {
    fn render_text(&self) -> String {
        let mut s = String::new();
        let answer = match &self.answer {
            Answer::Found { found, .. } => if *found { "found" } else { "not found" }.to_string(),
            Answer::Value(v) => v.to_string(),
            Answer::Sorted(v) => join(v),
        };
        let _ = writeln!(s, "scheme: {}", self.scheme);
        let _ = writeln!(s, "answer: {answer}");
        if let Answer::Found { matched_nodes, .. } = &self.answer {
            let _ = writeln!(s, "matched_nodes: {}", join(matched_nodes));
        }
        let _ = writeln!(s, "elements: {}", self.elements);
        let _ = writeln!(s, "n: {}", self.n);
        let _ = writeln!(s, "h: {}", self.h);
        let _ = writeln!(s, "w: {}", self.w);
        let _ = writeln!(s, "eta: {}", self.eta);
        let _ = writeln!(s, "cycles: {}", self.cycles);
        if let Some(rounds) = self.rounds {
            let _ = writeln!(s, "rounds: {rounds}");
        }
        let _ = writeln!(s, "flag_overhead_bits: {}", self.flag_overhead_bits);
        match self.oracle_agrees {
            Some(true) => s.push_str("oracle: agrees\n"),
            Some(false) => {
                let detail = self.oracle_detail.as_deref().unwrap_or("");
                let _ = writeln!(s, "oracle: DIVERGES ({detail})");
            }
            None => s.push_str("oracle: skipped\n"),
        }
        s
    }
}

impl InfoReport {
    fn render_text(&self) -> String {
        let mut s = String::new();
        let rows: [(&str, String); 13] = [
            ("eta", self.eta.to_string()),
            ("h", self.h.to_string()),
            ("w", self.w.to_string()),
            ("n", self.n.to_string()),
            ("capacity", self.capacity.to_string()),
            ("leaves", self.leaves.to_string()),
            ("elements", self.elements.to_string()),
            ("search_cycles", self.search_cycles.to_string()),
            ("extremum_cycles", self.extremum_cycles.to_string()),
            ("sort_round_cycles", self.sort_round_cycles.to_string()),
            ("search_flag_bits", self.search_flag_bits.to_string()),
            ("extremum_flag_bits", self.extremum_flag_bits.to_string()),
            ("sort_flag_bits", self.sort_flag_bits.to_string()),
        ];
        for (k, v) in rows {
            let _ = writeln!(s, "{k}: {v}");
        }
        s
    }
}

fn info(spec: &RunSpec, elements: &[u64]) -> Result<InfoReport> {
    let topo = spec.topology_for(elements.len())?;
    let params = topo.params();
    let (w, h) = (params.word_size as u64, params.height as u64);
    Ok(InfoReport {
        eta: params.eta,
        h: params.height,
        w: params.word_size,
        n: topo.len(),
        capacity: topo.capacity(),
        leaves: topo.leaves().count(),
        elements: elements.len(),
        search_cycles: w + 2 * h - 1,
        extremum_cycles: w + h - 1,
        sort_round_cycles: 2 * (w + h),
        search_flag_bits: resource_report(params, FlagScheme::Search)?,
        extremum_flag_bits: resource_report(params, FlagScheme::Extremum)?,
        sort_flag_bits: resource_report(params, FlagScheme::Sort)?,
    })
}

fn run_scheme(
    spec: &RunSpec,
    kind: TraceKind,
    elements: &[u64],
    observer: &mut dyn FnMut(&Configuration),
) -> Result<RunReport> {
    let topo = spec.topology_for(elements.len())?;
    let params = topo.params();
    let ones = word_mask(params.word_size);
    let order = spec.order.unwrap_or_default();

    let (scheme, answer, cycles, rounds, flags, oracle) = match kind {
        TraceKind::Search => {
            let key = spec.key.context("search needs a key")?;
            let res = load_list(topo.clone(), elements, Scheme::Search { key })?
                .search_observed(key, true, observer)?;
            let nodes: Vec<usize> = res.matched_nodes.iter().map(|n| n.0).collect();
            let expected: Vec<usize> = (0..elements.len())
                .filter(|&i| elements[i] == key)
                .map(|i| i + 1)
                .collect();
            let oracle = spec.verify.then(|| {
                OracleReport::compare(
                    (oracle_search(elements, key), expected),
                    &(res.found, nodes.clone()),
                )
            });
            let answer = Answer::Found {
                found: res.found,
                matched_nodes: nodes,
            };
            let oracle = oracle.map(|r| (r.agreed, r.detail));
            (
                "search",
                answer,
                res.cycles,
                None,
                FlagScheme::Search,
                oracle,
            )
        }
        TraceKind::Max | TraceKind::Min => {
            let (name, scheme, which, identity) = if kind == TraceKind::Max {
                ("max", Scheme::Max, Extremum::Max, 0)
            } else {
                ("min", Scheme::Min, Extremum::Min, ones)
            };
            let mut tree = load_list(topo.clone(), elements, scheme)?;
            let res = if kind == TraceKind::Max {
                tree.compute_max_observed(observer)?
            } else {
                tree.compute_min_observed(observer)?
            };
            let oracle = spec.verify.then(|| {
                let r =
                    OracleReport::compare(oracle_extremum(elements, which, identity), &res.value);
                (r.agreed, r.detail)
            });
            (
                name,
                Answer::Value(res.value),
                res.cycles,
                None,
                FlagScheme::Extremum,
                oracle,
            )
        }
        TraceKind::Sort => {
            let res = sort_observed(topo.clone(), elements, order, observer)?;
            let oracle = spec.verify.then(|| {
                let mut expected = oracle_sort_desc(elements);
                if order == SortOrder::Ascending {
                    expected.reverse();
                }
                let r = OracleReport::compare(expected, &res.output);
                (r.agreed, r.detail)
            });
            let answer = Answer::Sorted(res.output);
            (
                "sort",
                answer,
                res.cycles_total,
                Some(res.rounds),
                FlagScheme::Sort,
                oracle,
            )
        }
    };
    let (oracle_agrees, oracle_detail) = match oracle {
        Some((agreed, detail)) => (Some(agreed), detail),
        None => (None, None),
    };
    Ok(RunReport {
        scheme,
        answer,
        elements: elements.len(),
        n: topo.len(),
        h: params.height,
        w: params.word_size,
        eta: params.eta,
        cycles,
        rounds,
        flag_overhead_bits: resource_report(params, flags)?,
        oracle_agrees,
        oracle_detail,
    })
}

/// Run `spec`. The trace goes to `trace` if given, otherwise to
/// `spec.trace_out` if set.
pub fn execute(spec: &RunSpec, trace: Option<&mut dyn Write>) -> Result<Outcome> {
    spec.validate()?;
    let elements = spec
        .source
        .load(spec.word_size, spec.seed())
        .context("reading the input list")?;
    let kind = match spec.command {
        Command::Info => return Ok(Outcome::Info(info(spec, &elements)?)),
        Command::Bench => return Ok(Outcome::Bench(run_bench(spec, spec.seed())?)),
        other => other.kind().expect("scheme commands have a kind"),
    };

    let report = match (trace, &spec.trace_out) {
        (Some(out), _) => {
            let mut writer = TraceWriter::new(out);
            let report = run_scheme(spec, kind, &elements, &mut |c| writer.record(c))?;
            writer.finish().context("writing the trace")?;
            report
        }
        (None, Some(path)) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut writer = TraceWriter::new(BufWriter::new(file));
            let report = run_scheme(spec, kind, &elements, &mut |c| writer.record(c))?;
            writer
                .finish()
                .with_context(|| format!("writing {}", path.display()))?;
            report
        }
        (None, None) => run_scheme(spec, kind, &elements, &mut |_| {})?,
    };
    Ok(Outcome::Run(report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(command: Command, list: &str) -> RunSpec {
        RunSpec {
            command,
            word_size: 4,
            source: Source::Inline(list.into()),
            ..RunSpec::default()
        }
    }

    #[test]
    fn key_and_order_rules() {
        let mut s = spec(Command::Search, "1 2");
        assert!(s.validate().is_err());
        s.key = Some(16);
        assert!(s.validate().is_err());
        s.key = Some(2);
        s.validate().unwrap();
        s.order = Some(SortOrder::Ascending);
        assert!(s.validate().is_err());

        let mut m = spec(Command::Max, "1");
        m.key = Some(1);
        assert!(m.validate().is_err());
        let mut t = spec(Command::Trace(TraceKind::Sort), "1");
        t.order = Some(SortOrder::Ascending);
        t.validate().unwrap();
    }

    #[test]
    fn explicit_height() {
        let mut s = spec(Command::Max, "1 2 3 4 5 6 7 8 9 10");
        s.height = Some(3);
        assert!(execute(&s, None).is_err());
        s.height = Some(5);
        let Outcome::Run(r) = execute(&s, None).unwrap() else {
            panic!()
        };
        assert_eq!((r.h, r.answer.clone()), (5, Answer::Value(10)));
        s.height = None;
        let Outcome::Run(r) = execute(&s, None).unwrap() else {
            panic!()
        };
        assert_eq!(r.h, 4);
    }

    #[test]
    fn info_block() {
        let s = RunSpec {
            word_size: 4,
            height: Some(3),
            ..RunSpec::default()
        };
        let Outcome::Info(i) = execute(&s, None).unwrap() else {
            panic!()
        };
        assert_eq!((i.n, i.capacity, i.leaves), (10, 9, 6));
        assert_eq!(
            (i.search_cycles, i.extremum_cycles, i.sort_round_cycles),
            (9, 6, 14)
        );
        assert_eq!((i.search_flag_bits, i.sort_flag_bits), (30, 110));
    }
}
