use anyhow::anyhow;
use rayon::prelude::*;
use splitquant::arith::ReferenceChain;
use splitquant::{convolve, ArithOp, DiscreteMeasure, DistSpec, SplitRule};

use super::{CmdResult, Failure};
use crate::args::CommonArgs;
use crate::config::{Defaults, Experiment, Size};
use crate::method::Method;
use crate::output::{opt_num, write_csv};

pub const HEADER: [&str; 8] =
    ["distribution", "method", "op", "k", "w1_vs_reference", "reference_kind", "rep_size", "error"];

pub fn run(args: &CommonArgs) -> CmdResult {
    let defaults = Defaults {
        dists: DistSpec::table(),
        methods: vec![Method::Split(SplitRule::Mean), Method::Split(SplitRule::Median), Method::Asympt],
        sizes: vec![Size::Atoms(64)],
        op: ArithOp::Add,
        k: 10,
    };
    let exp = Experiment::resolve(args, defaults).map_err(Failure::Config)?;
    if exp.methods.contains(&Method::Optimal) {
        return Err(Failure::Config(anyhow!("the optimal quantizer has no compression step for arithmetic sweeps")));
    }
    let mut rows = Vec::new();
    // one law at a time: references can hold tens of millions of atoms
    for &spec in &exp.dists {
        rows.extend(sweep_one(&exp, spec));
    }
    write_csv(exp.out.as_deref(), &HEADER, &rows).map_err(Failure::Io)
}

struct Track {
    method: Method,
    size: Size,
    operand: Result<DiscreteMeasure, String>,
    acc: Result<DiscreteMeasure, String>,
}

/// Rows ordered by method, then rep size, then `k`.
fn sweep_one(exp: &Experiment, spec: DistSpec) -> Vec<Vec<String>> {
    let law = spec.build();
    let mut tracks: Vec<Track> = Vec::new();
    for &method in &exp.methods {
        for &size in &exp.sizes {
            let operand = match &law {
                Ok(d) => method.quantize(d.as_ref(), size).map_err(|e| e.to_string()),
                Err(e) => Err(e.to_string()),
            };
            tracks.push(Track { method, size, operand, acc: Err("not started".into()) });
        }
    }
    let mut chain = ReferenceChain::new(spec, exp.op, exp.reference_n, exp.reference_acc_n);
    let mut chain_error: Option<String> = None;
    let mut grid: Vec<Vec<Vec<String>>> = vec![Vec::with_capacity(exp.k); tracks.len()];
    for k in 1..=exp.k {
        let reference = match &chain_error {
            Some(e) => Err(e.clone()),
            None => chain.advance().map_err(|e| format!("reference: {e}")),
        };
        if let Err(e) = &reference {
            chain_error = Some(e.clone());
        }
        let results: Vec<(Result<DiscreteMeasure, String>, Vec<String>)> = tracks
            .par_iter()
            .map(|t| {
                let acc = match (&t.operand, k) {
                    (Err(e), _) => Err(e.clone()),
                    (Ok(op), 1) => Ok(op.clone()),
                    (Ok(op), _) => t
                        .acc
                        .as_ref()
                        .map_err(Clone::clone)
                        .and_then(|a| t.method.compress(&convolve(a, op, exp.op), t.size).map_err(|e| e.to_string())),
                };
                let w1 = match (&acc, &reference) {
                    (Ok(m), Ok(r)) => r.w1_to(m).map_err(|e| e.to_string()),
                    (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                };
                let row = vec![
                    spec.to_string(),
                    t.method.to_string(),
                    exp.op.to_string(),
                    k.to_string(),
                    opt_num(w1.as_ref().ok().copied()),
                    reference.as_ref().map(|r| r.kind().as_str().to_string()).unwrap_or_default(),
                    t.size.atoms().to_string(),
                    w1.err().unwrap_or_default(),
                ];
                (acc, row)
            })
            .collect();
        for (i, (acc, row)) in results.into_iter().enumerate() {
            tracks[i].acc = acc;
            grid[i].push(row);
        }
    }
    grid.into_iter().flatten().collect()
}
