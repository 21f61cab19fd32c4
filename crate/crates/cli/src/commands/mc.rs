use splitquant::arith::{fold_with, Pushforward, ReferenceChain};
use splitquant::montecarlo::{asymptotic_constant_discrete, equivalent_count_from_constant};
use splitquant::{asymptotic_constant, ArithOp, DistSpec, Distribution, McReport, SplitRule};

use super::{CmdResult, Failure};
use crate::args::CommonArgs;
use crate::config::{Defaults, Experiment, Size, Statistic};
use crate::method::Method;
use crate::output::{opt_num, write_csv};

/// Rows whose `equivalent_mc_count * replicates` exceeds this many draws skip the measurement.
pub const MC_SAMPLE_BUDGET: u64 = 200_000_000;

/// Externally reported equivalent counts, kept for side-by-side comparison:
/// `(distribution, method, n, op, k, count)`.
const KNOWN_COUNTS: [(&str, &str, u32, ArithOp, usize, u64); 3] = [
    ("exp:1", "mean", 8, ArithOp::Add, 1, 82_197),
    ("gauss:0,1", "mean", 8, ArithOp::Add, 1, 61_341),
    ("gauss:0,1", "mean", 9, ArithOp::Mul, 4, 165_910),
];

fn known_count(spec: DistSpec, method: Method, n: Option<u32>, op: ArithOp, k: usize) -> Option<u64> {
    KNOWN_COUNTS.iter().find_map(|&(d, m, kn, kop, kk, c)| {
        let same_law = d.parse::<DistSpec>().map(|s| s == spec).unwrap_or(false);
        let same_op = k == 1 || kop == op;
        (same_law && m == method.as_str() && Some(kn) == n && kk == k && same_op).then_some(c)
    })
}

pub fn header(statistic: Statistic) -> [&'static str; 12] {
    [
        "distribution",
        "target_method",
        "target_n",
        "target_w1",
        "asymptotic_constant",
        "equivalent_mc_count",
        match statistic {
            Statistic::Mean => "measured_mc_mean_w1",
            Statistic::P95 => "measured_mc_p95_w1",
        },
        "op",
        "k",
        "reference_kind",
        "reference_count",
        "error",
    ]
}

pub fn run(args: &CommonArgs) -> CmdResult {
    let defaults = Defaults {
        dists: vec![DistSpec::Exponential { rate: 1.0 }, DistSpec::Gaussian { mu: 0.0, sigma: 1.0 }],
        methods: vec![Method::Split(SplitRule::Mean)],
        sizes: vec![Size::Depth(8)],
        op: ArithOp::Mul,
        k: 1,
    };
    let exp = Experiment::resolve(args, defaults).map_err(Failure::Config)?;
    let mut rows = Vec::new();
    for &spec in &exp.dists {
        for &method in &exp.methods {
            for &size in &exp.sizes {
                rows.push(row(&exp, spec, method, size));
            }
        }
    }
    write_csv(exp.out.as_deref(), &header(exp.statistic), &rows).map_err(Failure::Io)
}

struct Target {
    w1: f64,
    reference: Pushforward,
}

fn target(exp: &Experiment, spec: DistSpec, method: Method, size: Size) -> Result<Target, String> {
    let d = spec.build().map_err(|e| e.to_string())?;
    if exp.k == 1 {
        let (_, w1) = method.quantize_with_w1(d.as_ref(), size).map_err(|e| e.to_string())?;
        return Ok(Target { w1, reference: Pushforward::Continuous(d, splitquant::ReferenceKind::Exact) });
    }
    let operand = method.quantize(d.as_ref(), size).map_err(|e| e.to_string())?;
    let folded = fold_with(&vec![operand; exp.k], exp.op, |m| method.compress(m, size)).map_err(|e| e.to_string())?;
    let mut chain = ReferenceChain::new(spec, exp.op, exp.reference_n, exp.reference_acc_n);
    let mut reference = chain.advance().map_err(|e| format!("reference: {e}"))?;
    while chain.operands() < exp.k {
        reference = chain.advance().map_err(|e| format!("reference: {e}"))?;
    }
    let w1 = reference.w1_to(&folded).map_err(|e| e.to_string())?;
    Ok(Target { w1, reference })
}

fn row(exp: &Experiment, spec: DistSpec, method: Method, size: Size) -> Vec<String> {
    let mut errors = Vec::new();
    let mut cols = [None::<f64>; 3];
    let mut count = None;
    let mut kind = String::new();
    match target(exp, spec, method, size) {
        Ok(t) => {
            cols[0] = Some(t.w1);
            kind = t.reference.kind().as_str().to_string();
            let constant = match &t.reference {
                Pushforward::Continuous(d, _) => asymptotic_constant(d.as_ref()),
                Pushforward::Discrete(m, _) => Ok(asymptotic_constant_discrete(m)),
            };
            match constant.and_then(|c| equivalent_count_from_constant(c, t.w1).map(|n| (c, n))) {
                Ok((c, n)) => {
                    cols[1] = Some(c);
                    count = Some(n);
                    match measure(exp, spec, &t.reference, n) {
                        Ok(Some(w)) => cols[2] = Some(w),
                        Ok(None) => errors.push(format!("measurement skipped: over {MC_SAMPLE_BUDGET} draws")),
                        Err(e) => errors.push(format!("measurement: {e}")),
                    }
                }
                Err(e) => errors.push(e.to_string()),
            }
        }
        Err(e) => errors.push(e),
    }
    vec![
        spec.to_string(),
        method.to_string(),
        size.depth().map(|n| n.to_string()).unwrap_or_else(|| size.atoms().to_string()),
        opt_num(cols[0]),
        opt_num(cols[1]),
        count.map(|c| c.to_string()).unwrap_or_default(),
        opt_num(cols[2]),
        exp.op.to_string(),
        exp.k.to_string(),
        kind,
        known_count(spec, method, size.depth(), exp.op, exp.k).map(|c| c.to_string()).unwrap_or_default(),
        errors.join("; "),
    ]
}

/// Mean (or 95th percentile) empirical `W1` at `n` draws; `None` over budget.
fn measure(exp: &Experiment, spec: DistSpec, reference: &Pushforward, n: u64) -> splitquant::Result<Option<f64>> {
    if n.saturating_mul(exp.replicates as u64) > MC_SAMPLE_BUDGET {
        return Ok(None);
    }
    let d = spec.build()?;
    let report = if exp.k == 1 {
        McReport::run(d.as_ref(), n as usize, exp.replicates, exp.seed)?
    } else {
        let operands: Vec<&dyn Distribution> = vec![d.as_ref(); exp.k];
        McReport::run_pushforward(&operands, exp.op, reference, n as usize, exp.replicates, exp.seed)?
    };
    Ok(Some(match exp.statistic {
        Statistic::Mean => report.mean_w1,
        Statistic::P95 => report.p95_w1,
    }))
}
