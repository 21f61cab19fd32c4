use anyhow::anyhow;
use splitquant::{quantization_w1, split_chain_bound, tail_rate_estimate, ArithOp, DistSpec, SplitRule};

use super::{map_cells, CmdResult, Failure};
use crate::args::CommonArgs;
use crate::config::{Defaults, Experiment, Size};
use crate::method::Method;
use crate::output::{opt_num, write_csv};

pub const HEADER: [&str; 10] = [
    "distribution",
    "method",
    "n",
    "w1",
    "zador_lower",
    "thm48_upper",
    "tail_lower",
    "within_bounds",
    "tail_rate",
    "error",
];

/// Relative slack of the `within_bounds` check.
const BOUND_REL_TOL: f64 = 1e-9;

/// Depths below this have no tail-rate regression window.
const TAIL_RATE_MIN_N: u32 = 6;

pub fn run(args: &CommonArgs) -> CmdResult {
    let defaults = Defaults {
        dists: ["exp:1", "pareto:2,1", "pareto:3,1", "heavy"].iter().map(|s| s.parse().unwrap()).collect(),
        methods: vec![Method::Split(SplitRule::Mean), Method::Split(SplitRule::Median)],
        sizes: (0..=10).map(Size::Depth).collect(),
        op: ArithOp::Add,
        k: 1,
    };
    let exp = Experiment::resolve(args, defaults).map_err(Failure::Config)?;
    let mut cells = Vec::new();
    for &spec in &exp.dists {
        for &method in &exp.methods {
            let Method::Split(rule) = method else {
                return Err(Failure::Config(anyhow!("bounds apply to split methods only, got `{method}`")));
            };
            for &size in &exp.sizes {
                cells.push((spec, rule, size.depth().expect("validated power of two")));
            }
        }
    }
    let rows = map_cells(&cells, false, |&(spec, rule, n)| row(spec, rule, n));
    write_csv(exp.out.as_deref(), &HEADER, &rows).map_err(Failure::Io)
}

fn row(spec: DistSpec, rule: SplitRule, n: u32) -> Vec<String> {
    let mut errors = Vec::new();
    let (w1, bound, rate) = match spec.build() {
        Ok(d) => {
            let w1 = quantization_w1(d.as_ref(), rule, n).map(|r| r.value).map_err(|e| errors.push(e.to_string())).ok();
            let bound = split_chain_bound(d.as_ref(), rule, n).map_err(|e| errors.push(format!("bound: {e}"))).ok();
            let rate = if n >= TAIL_RATE_MIN_N {
                tail_rate_estimate(d.as_ref(), rule, n).map_err(|e| errors.push(format!("tail rate: {e}"))).ok()
            } else {
                None
            };
            (w1, bound, rate)
        }
        Err(e) => {
            errors.push(e.to_string());
            (None, None, None)
        }
    };
    let within = match (&bound, w1) {
        (Some(b), Some(w)) => b.contains(w, BOUND_REL_TOL).to_string(),
        _ => String::new(),
    };
    vec![
        spec.to_string(),
        rule.to_string(),
        n.to_string(),
        opt_num(w1),
        opt_num(bound.as_ref().and_then(|b| b.zador_lower)),
        opt_num(bound.as_ref().map(|b| b.thm48_upper)),
        opt_num(bound.as_ref().map(|b| b.tail_lower)),
        within,
        opt_num(rate),
        errors.join("; "),
    ]
}
