//! Command-line grammar and its translation into a [`RunSpec`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cayley_imc::SortOrder;

use crate::input::Source;
use crate::run::{Command, RunSpec};
use crate::trace::TraceKind;

#[derive(Debug, Parser)]
#[command(
    name = "cayley-imc",
    version,
    about = "Cycle-accurate Cayley-tree in-memory computing simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Desc,
    Asc,
}

impl From<Order> for SortOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Desc => SortOrder::Descending,
            Order::Asc => SortOrder::Ascending,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Search,
    Max,
    Min,
    Sort,
}

impl From<Kind> for TraceKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Search => TraceKind::Search,
            Kind::Max => TraceKind::Max,
            Kind::Min => TraceKind::Min,
            Kind::Sort => TraceKind::Sort,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TreeArgs {
    /// Branching factor of non-root internal nodes.
    #[arg(long, default_value_t = 2)]
    pub eta: usize,
    /// Bits per memory word.
    #[arg(long, default_value_t = 8)]
    pub word_size: u32,
    /// Tree height; defaults to the smallest one that holds the list.
    #[arg(long)]
    pub height: Option<usize>,
    /// Print one JSON object instead of key: value lines.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
#[group(multiple = false)]
pub struct SourceArgs {
    /// File with the list.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Inline list, e.g. "14,9,6".
    #[arg(long)]
    pub list: Option<String>,
    /// Generate this many random elements from --seed.
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub tree: TreeArgs,
    #[command(flatten)]
    pub source: SourceArgs,
    /// Write the per-cycle trace (JSON lines) to this file.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
    /// Skip the oracle check.
    #[arg(long)]
    pub no_verify: bool,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Look a key up in the list.
    Search {
        #[arg(long)]
        key: u64,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Largest element.
    Max {
        #[command(flatten)]
        args: RunArgs,
    },
    /// Smallest element.
    Min {
        #[command(flatten)]
        args: RunArgs,
    },
    /// Sort by repeated extremum extraction.
    Sort {
        #[arg(long, value_enum, default_value_t = Order::Desc)]
        order: Order,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Run a scheme and stream its trace to stdout; the result block goes to stderr.
    Trace {
        #[arg(value_enum)]
        scheme: Kind,
        #[arg(long)]
        key: Option<u64>,
        #[arg(long, value_enum)]
        order: Option<Order>,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Tree shape, cycle counts and flag overhead.
    Info {
        #[command(flatten)]
        tree: TreeArgs,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Classical sort operation counts against in-memory sort cycles.
    Bench {
        #[command(flatten)]
        tree: TreeArgs,
        /// Comma-separated list lengths.
        #[arg(long, value_delimiter = ',', default_values_t = [16, 64, 256])]
        sizes: Vec<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn source(s: SourceArgs) -> Source {
    match (s.input, s.list, s.random) {
        (Some(p), _, _) => Source::Path(p),
        (_, Some(l), _) => Source::Inline(l),
        (_, _, Some(len)) => Source::Random { len },
        _ => Source::None,
    }
}

fn with_tree(spec: RunSpec, t: TreeArgs) -> RunSpec {
    RunSpec {
        eta: t.eta,
        word_size: t.word_size,
        height: t.height,
        json: t.json,
        ..spec
    }
}

fn with_run(command: Command, a: RunArgs) -> RunSpec {
    let spec = RunSpec {
        command,
        source: source(a.source),
        trace_out: a.trace_out,
        verify: !a.no_verify,
        seed: a.seed,
        ..RunSpec::default()
    };
    with_tree(spec, a.tree)
}

impl Cmd {
    pub fn into_spec(self) -> RunSpec {
        match self {
            Cmd::Search { key, args } => RunSpec {
                key: Some(key),
                ..with_run(Command::Search, args)
            },
            Cmd::Max { args } => with_run(Command::Max, args),
            Cmd::Min { args } => with_run(Command::Min, args),
            Cmd::Sort { order, args } => RunSpec {
                order: Some(order.into()),
                ..with_run(Command::Sort, args)
            },
            Cmd::Trace {
                scheme,
                key,
                order,
                args,
            } => RunSpec {
                key,
                order: order.map(Into::into),
                ..with_run(Command::Trace(scheme.into()), args)
            },
            Cmd::Info {
                tree,
                source: s,
                seed,
            } => {
                let spec = RunSpec {
                    command: Command::Info,
                    source: source(s),
                    seed,
                    ..RunSpec::default()
                };
                with_tree(spec, tree)
            }
            Cmd::Bench { tree, sizes, seed } => {
                let spec = RunSpec {
                    command: Command::Bench,
                    bench_sizes: sizes,
                    seed,
                    ..RunSpec::default()
                };
                with_tree(spec, tree)
            }
        }
    }
}
