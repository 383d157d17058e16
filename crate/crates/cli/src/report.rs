use std::fmt::Write as _;

use odelin_core::{DecompositionResult, Test1Report};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Test1,
    Test2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Algebra {
    /// `[i, j, k, value]` for each nonzero `C^k_{ij}` with `i < j`, indices
    /// from 0 and the value as an exact rational string.
    #[serde(rename = "C")]
    pub c: Vec<(usize, usize, usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderedSystem {
    pub equations: Vec<String>,
    pub inequations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Stats {
    pub branches: usize,
    pub max_terms: usize,
    /// Only filled in with `--timings`, so that default output is reproducible.
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub mode: Mode,
    pub verdict: String,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<Algebra>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub systems: Option<Vec<RenderedSystem>>,
    pub stats: Stats,
}

fn verdict(linearizable: bool) -> String {
    if linearizable { "linearizable" } else { "not linearizable" }.to_string()
}

impl Report {
    pub fn linearizable(&self) -> bool {
        self.verdict == "linearizable"
    }

    pub fn from_test1(r: &Test1Report, elapsed_ms: Option<u64>) -> Self {
        let c = r
            .algebra
            .nonzero_constants()
            .into_iter()
            .map(|(i, j, k, v)| (i, j, k, v.to_string()))
            .collect();
        Report {
            mode: Mode::Test1,
            verdict: verdict(r.linearizable),
            n: r.n,
            m: Some(r.m),
            algebra: Some(Algebra { c }),
            systems: None,
            stats: Stats {
                branches: 0,
                max_terms: 0,
                elapsed_ms,
            },
        }
    }

    pub fn from_test2(n: u32, r: &DecompositionResult, elapsed_ms: Option<u64>) -> Self {
        let systems = r
            .systems
            .iter()
            .map(|s| RenderedSystem {
                equations: s.equations.iter().map(ToString::to_string).collect(),
                inequations: s.inequations.iter().map(ToString::to_string).collect(),
            })
            .collect();
        Report {
            mode: Mode::Test2,
            verdict: verdict(!r.is_empty()),
            n,
            m: None,
            algebra: None,
            systems: Some(systems),
            stats: Stats {
                branches: r.stats.branches,
                max_terms: r.stats.max_terms,
                elapsed_ms,
            },
        }
    }

    pub fn human(&self) -> String {
        let mut s = String::new();
        let mode = match self.mode {
            Mode::Test1 => "test I",
            Mode::Test2 => "test II",
        };
        let _ = writeln!(s, "{mode}: {}", self.verdict);
        let _ = writeln!(s, "order: {}", self.n);
        if let Some(m) = self.m {
            let _ = writeln!(s, "symmetry algebra dimension: {m}");
        }
        if let Some(a) = &self.algebra {
            if a.c.is_empty() {
                let _ = writeln!(s, "algebra: abelian");
            }
            for (i, j, k, v) in &a.c {
                let _ = writeln!(s, "C[{i},{j}]^{k} = {v}");
            }
        }
        if let Some(systems) = &self.systems {
            let _ = writeln!(s, "simple systems: {}", systems.len());
            for (i, sys) in systems.iter().enumerate() {
                let _ = writeln!(s, "--- system {}", i + 1);
                for e in &sys.equations {
                    let _ = writeln!(s, "{e} = 0");
                }
                for q in &sys.inequations {
                    let _ = writeln!(s, "{q} <> 0");
                }
            }
            let _ = writeln!(
                s,
                "branches: {}, max terms: {}",
                self.stats.branches, self.stats.max_terms
            );
        }
        if let Some(ms) = self.stats.elapsed_ms {
            let _ = writeln!(s, "elapsed: {ms} ms");
        }
        s
    }
}
