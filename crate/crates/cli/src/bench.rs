//! Operation counts of the classical sorts next to the cycle count of the
//! in-memory sort, over a grid of list sizes and input shapes.

use std::fmt::Write as _;

use anyhow::Result;
use cayley_imc::oracle::{oracle_sort_desc, Baseline};
use cayley_imc::{sort, SortOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::input::random_list;
use crate::run::RunSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Random,
    Ascending,
    Descending,
    Equal,
}

impl Shape {
    pub const ALL: [Shape; 4] = [
        Shape::Random,
        Shape::Ascending,
        Shape::Descending,
        Shape::Equal,
    ];

    fn name(self) -> &'static str {
        match self {
            Shape::Random => "random",
            Shape::Ascending => "ascending",
            Shape::Descending => "descending",
            Shape::Equal => "equal",
        }
    }

    fn generate(self, len: usize, word_size: u32, seed: u64) -> Vec<u64> {
        let mut list = random_list(len, word_size, seed);
        match self {
            Shape::Random => {}
            Shape::Ascending => list.sort_unstable(),
            Shape::Descending => list.sort_unstable_by(|a, b| b.cmp(a)),
            Shape::Equal => {
                let v = ChaCha8Rng::seed_from_u64(seed).random::<u64>()
                    & cayley_imc::word_mask(word_size);
                list.iter_mut().for_each(|x| *x = v);
            }
        }
        list
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub size: usize,
    pub shape: Shape,
    pub distinct: usize,
    /// `(baseline name, operation count)`, in `Baseline::ALL` order.
    pub baselines: Vec<(&'static str, u64)>,
    pub imc_rounds: usize,
    pub imc_cycles: u64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchReport {
    pub eta: usize,
    pub w: u32,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

fn bench_case(spec: &RunSpec, size: usize, shape: Shape, seed: u64) -> Result<BenchRow> {
    let list = shape.generate(size, spec.word_size, seed);
    let expected = oracle_sort_desc(&list);
    let mut agrees = true;
    let baselines = Baseline::ALL
        .iter()
        .map(|b| {
            let (out, ops) = b.sort_desc(&list);
            agrees &= out == expected;
            (b.name(), ops)
        })
        .collect();
    let topo = spec.topology_for(list.len())?;
    let res = sort(topo, &list, SortOrder::Descending)?;
    agrees &= res.output == expected;
    let mut distinct = list.clone();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(BenchRow {
        size,
        shape,
        distinct: distinct.len(),
        baselines,
        imc_rounds: res.rounds,
        imc_cycles: res.cycles_total,
        agrees,
    })
}

/// Cases run in parallel; rows come back in grid order whatever the
/// scheduling.
pub fn run_bench(spec: &RunSpec, seed: u64) -> Result<BenchReport> {
    let grid: Vec<(usize, Shape)> = spec
        .bench_sizes
        .iter()
        .flat_map(|&size| Shape::ALL.into_iter().map(move |shape| (size, shape)))
        .collect();
    let rows = grid
        .par_iter()
        .enumerate()
        .map(|(i, &(size, shape))| bench_case(spec, size, shape, seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport {
        eta: spec.eta,
        w: spec.word_size,
        seed,
        rows,
    })
}

impl BenchReport {
    pub(crate) fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "eta: {}", self.eta);
        let _ = writeln!(s, "w: {}", self.w);
        let _ = writeln!(s, "seed: {}", self.seed);
        let _ = write!(s, "{:>6} {:>10} {:>8}", "size", "shape", "distinct");
        for b in Baseline::ALL {
            let _ = write!(s, " {:>10}", b.name());
        }
        let _ = writeln!(
            s,
            " {:>10} {:>10} {:>6}",
            "imc_rounds", "imc_cycles", "oracle"
        );
        for row in &self.rows {
            let _ = write!(
                s,
                "{:>6} {:>10} {:>8}",
                row.size,
                row.shape.name(),
                row.distinct
            );
            for (_, ops) in &row.baselines {
                let _ = write!(s, " {ops:>10}");
            }
            let verdict = if row.agrees { "agrees" } else { "DIVERGES" };
            let _ = writeln!(
                s,
                " {:>10} {:>10} {:>6}",
                row.imc_rounds, row.imc_cycles, verdict
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_lists_take_one_round() {
        let spec = RunSpec {
            bench_sizes: vec![1, 20],
            word_size: 6,
            ..RunSpec::default()
        };
        let report = run_bench(&spec, 5).unwrap();
        assert_eq!(report.rows.len(), 8);
        for row in &report.rows {
            assert!(row.agrees);
            assert_eq!(row.imc_rounds, row.distinct);
            if row.shape == Shape::Equal {
                assert_eq!(row.imc_rounds, 1);
            }
        }
        assert_eq!(report, run_bench(&spec, 5).unwrap());
    }

    #[test]
    fn shapes() {
        let asc = Shape::Ascending.generate(30, 8, 1);
        assert!(asc.windows(2).all(|w| w[0] <= w[1]));
        let eq = Shape::Equal.generate(30, 8, 1);
        assert!(eq.iter().all(|&v| v == eq[0]));
    }
}
