use anyhow::anyhow;
use serde_json::json;
use splitquant::{split_chain_bound, zador_constant, ArithOp};

use super::{CmdResult, Failure};
use crate::args::CommonArgs;
use crate::config::{Defaults, Experiment, Size};
use crate::method::Method;
use crate::output::{num, write_csv};

pub fn run(args: &CommonArgs) -> CmdResult {
    let defaults = Defaults {
        dists: Vec::new(),
        methods: vec![Method::Split(splitquant::SplitRule::Mean)],
        sizes: vec![Size::Depth(8)],
        op: ArithOp::Add,
        k: 1,
    };
    let exp = Experiment::resolve(args, defaults).map_err(Failure::Config)?;
    if exp.dists.len() != 1 || exp.methods.len() != 1 || exp.sizes.len() != 1 {
        return Err(Failure::Config(anyhow!("quantize takes exactly one distribution, method and size")));
    }
    let (spec, method, size) = (exp.dists[0], exp.methods[0], exp.sizes[0]);
    let d = spec.build().map_err(|e| Failure::Config(e.into()))?;
    let (m, w1) = method.quantize_with_w1(d.as_ref(), size).map_err(|e| Failure::Numeric(e.into()))?;

    let rows: Vec<Vec<String>> = m.atoms().iter().map(|a| vec![num(a.position), num(a.weight)]).collect();
    write_csv(exp.out.as_deref(), &["position", "weight"], &rows).map_err(Failure::Io)?;

    if let Some(out) = &exp.out {
        let bounds = match (method, size.depth()) {
            (Method::Split(rule), Some(n)) => split_chain_bound(d.as_ref(), rule, n).ok(),
            _ => None,
        };
        let zador_lower = zador_constant(d.as_ref()).ok().map(|z| z / size.atoms() as f64);
        let sidecar = json!({
            "distribution": spec.to_string(),
            "method": method.as_str(),
            "n": size.depth(),
            "rep_size": size.atoms(),
            "atoms": m.len(),
            "mean": m.mean(),
            "true_mean": d.mean(),
            "w1": w1,
            "zador_lower": zador_lower,
            "bounds": bounds,
        });
        let path = out.with_extension("json");
        let text = serde_json::to_string_pretty(&sidecar).map_err(|e| Failure::Io(e.into()))?;
        std::fs::write(&path, text + "\n").map_err(|e| Failure::Io(anyhow!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}
