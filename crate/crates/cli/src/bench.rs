//! Benchmark suites producing `graph,n,m,k,mode,seconds,sampled_edges` rows.

use crate::CliError;
use kecc_core::driver::{compute_k2ecc, Mode};
use kecc_core::gen::{generate, Model};
use std::time::Instant;

pub struct BenchRow {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub mode: Mode,
    pub seconds: f64,
    pub sampled_edges: usize,
}

pub const DELTA: f64 = 0.1;

fn run(cases: &[(Model, usize)], modes: &[Mode], seed: u64) -> Result<Vec<BenchRow>, CliError> {
    let mut rows = Vec::new();
    for (model, k) in cases {
        let g = generate(model, seed)?;
        for &mode in modes {
            let t = Instant::now();
            let r = compute_k2ecc(&g, *k, DELTA, mode, seed)?;
            rows.push(BenchRow {
                graph: model.label(),
                n: g.n_live(),
                m: g.m_live(),
                k: *k,
                mode,
                seconds: t.elapsed().as_secs_f64(),
                sampled_edges: r.draws(),
            });
        }
    }
    Ok(rows)
}

pub fn smoke(seed: u64) -> Result<Vec<BenchRow>, CliError> {
    let cases = [
        (Model::Cyc { n: 20, k: 2 }, 2),
        (Model::Blocks { p: 6, q: 6, k: 2 }, 2),
        (
            Model::Chain {
                blocks: 3,
                size: 5,
                k: 1,
            },
            1,
        ),
        (
            Model::RandomKec {
                n: 40,
                k: 2,
                extra: 40,
            },
            2,
        ),
    ];
    run(&cases, &[Mode::Exact, Mode::Det, Mode::Rand], seed)
}

pub fn scaling(seed: u64) -> Result<Vec<BenchRow>, CliError> {
    let cases: Vec<(Model, usize)> = [250, 500, 1000, 2000]
        .into_iter()
        .map(|n| {
            (
                Model::RandomKec {
                    n,
                    k: 2,
                    extra: 6 * n,
                },
                2,
            )
        })
        .collect();
    run(&cases, &[Mode::Rand], seed)
}

pub fn to_csv(rows: &[BenchRow]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["graph", "n", "m", "k", "mode", "seconds", "sampled_edges"])?;
    for r in rows {
        w.write_record([
            r.graph.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.k.to_string(),
            r.mode.name().to_string(),
            format!("{:.6}", r.seconds),
            r.sampled_edges.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
