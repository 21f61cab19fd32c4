use splitquant::{split_chain_bound, zador_constant, ArithOp, DistSpec, QuantError, SplitRule};

use super::{map_cells, timed, CmdResult, Failure};
use crate::args::CommonArgs;
use crate::config::{Defaults, Experiment, Size};
use crate::method::Method;
use crate::output::{num, opt_num, write_csv};

pub const HEADER: [&str; 10] =
    ["distribution", "method", "n", "rep_size", "w1", "zador_lower", "thm48_upper", "tail_lower", "wall_seconds", "error"];

pub fn run(args: &CommonArgs) -> CmdResult {
    let defaults = Defaults {
        dists: DistSpec::catalog(),
        methods: vec![Method::Split(SplitRule::Mean), Method::Split(SplitRule::Median), Method::Optimal, Method::Asympt],
        sizes: (0..=10).map(Size::Depth).collect(),
        op: ArithOp::Add,
        k: 1,
    };
    let exp = Experiment::resolve(args, defaults).map_err(Failure::Config)?;

    let zadors: Vec<Option<f64>> = exp
        .dists
        .iter()
        .map(|s| s.build().and_then(|d| zador_constant(d.as_ref())).ok())
        .collect();
    let mut cells = Vec::new();
    for (i, &spec) in exp.dists.iter().enumerate() {
        for &method in &exp.methods {
            for &size in &exp.sizes {
                cells.push((spec, zadors[i], method, size));
            }
        }
    }
    let rows = map_cells(&cells, exp.timing, |&(spec, zador, method, size)| {
        row(spec, zador, method, size, exp.timing)
    });
    write_csv(exp.out.as_deref(), &HEADER, &rows).map_err(Failure::Io)
}

fn row(spec: DistSpec, zador: Option<f64>, method: Method, size: Size, timing: bool) -> Vec<String> {
    let mut errors = Vec::new();
    let (w1, secs) = match spec.build() {
        Ok(d) => {
            let (r, secs) = timed(|| method.quantize_with_w1(d.as_ref(), size));
            (r.map(|(_, w)| w).map_err(|e| errors.push(e.to_string())).ok(), secs)
        }
        Err(e) => {
            errors.push(e.to_string());
            (None, 0.0)
        }
    };
    let (upper, tail) = match (method, size.depth()) {
        (Method::Split(rule), Some(n)) => match spec.build().and_then(|d| split_chain_bound(d.as_ref(), rule, n)) {
            Ok(b) => (Some(b.thm48_upper), Some(b.tail_lower)),
            Err(QuantError::UnboundedBelow | QuantError::UnsupportedRule(_)) => (None, None),
            Err(e) => {
                errors.push(format!("bound: {e}"));
                (None, None)
            }
        },
        _ => (None, None),
    };
    vec![
        spec.to_string(),
        method.to_string(),
        size.depth().map(|n| n.to_string()).unwrap_or_default(),
        size.atoms().to_string(),
        opt_num(w1),
        opt_num(zador.map(|z| z / size.atoms() as f64)),
        opt_num(upper),
        opt_num(tail),
        if timing { num(secs) } else { String::new() },
        errors.join("; "),
    ]
}
