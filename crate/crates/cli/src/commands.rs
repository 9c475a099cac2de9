use anyhow::{Context, Result};
use serde_json::{json, Value};
use truncmat::ensembles::WeightSystem;
use truncmat::hardedge::convergence::scaled_finite_kernel;
use truncmat::hardedge::{bessel_limit_kernel, scaling_constant, LimitKernel};
use truncmat::kernels::{BiorthogonalSystem, ContourKernel, ContourOptions};
use truncmat::sampling::{count_near_one, sample_product_draws};
use truncmat::special::quadrature::composite_rule;
use truncmat::verify::{run_suite, SuiteConfig};
use truncmat::ProductSpec;

use crate::config::{Command, RunConfig};
use crate::output::{num, Report, Table};

/// Squared singular values within this distance of 1 count as "at one".
const NEAR_ONE: f64 = 1e-10;
/// Diagonal values above this count as nonnegative.
const DIAGONAL_FLOOR: f64 = -1e-9;

pub fn run(cfg: &RunConfig) -> Result<Report> {
    match cfg.command {
        Command::Sample => cmd_sample(cfg),
        Command::Density => cmd_density(cfg),
        Command::Kernel => cmd_kernel(cfg),
        Command::HardEdge => cmd_hard_edge(cfg),
        Command::Verify => cmd_verify(cfg),
    }
}

fn spec_of(cfg: &RunConfig) -> Result<&ProductSpec> {
    cfg.spec.as_ref().context("missing ensemble parameters")
}

fn cmd_sample(cfg: &RunConfig) -> Result<Report> {
    let spec = spec_of(cfg)?;
    let seed = cfg.seed.context("missing seed")?;
    let draws = sample_product_draws(spec, cfg.samples, seed, cfg.exec)?;
    let header: Vec<String> = (1..=spec.n).map(|i| format!("y{i}")).collect();
    let mut table = Table { header, rows: Vec::with_capacity(draws.len()) };
    let mut counts = vec![0u64; cfg.bins];
    let mut near_one = 0usize;
    for d in &draws {
        for &v in d {
            counts[((v * cfg.bins as f64) as usize).min(cfg.bins - 1)] += 1;
        }
        near_one += count_near_one(d, NEAR_ONE);
        table.push(d.iter().map(|&v| num(v)));
    }
    let total = (draws.len() * spec.n) as f64;
    let width = 1.0 / cfg.bins as f64;
    let edges: Vec<Value> = (0..=cfg.bins).map(|i| num(i as f64 * width)).collect();
    let density: Vec<Value> = counts.iter().map(|&c| num(c as f64 / (total * width))).collect();
    Ok(Report {
        command: "sample",
        spec: json!(spec),
        seed: Some(seed),
        table,
        summary: json!({
            "samples": draws.len(),
            "histogram": {"edges": edges, "counts": counts, "density": density},
            "near_one": near_one,
        }),
    })
}

fn cmd_density(cfg: &RunConfig) -> Result<Report> {
    let spec = spec_of(cfg)?;
    let xs = cfg.grid.as_ref().context("missing grid")?.x.points();
    let ws = WeightSystem::new(spec)?;
    let sys = BiorthogonalSystem::new(spec)?;
    let mut header = vec!["x".to_string(), "one_point".to_string()];
    header.extend((1..=spec.n).map(|k| format!("w{k}")));
    let mut table = Table { header, rows: Vec::new() };
    let rows = cfg.exec.map_slice(&xs, |&x| {
        let mut row = vec![num(x), num(sys.kernel(x, x) / spec.n as f64)];
        row.extend((1..=spec.n).map(|k| num(ws.eval(k, x))));
        row
    });
    rows.into_iter().for_each(|r| table.push(r));
    Ok(Report {
        command: "density",
        spec: json!(spec),
        seed: None,
        table,
        summary: json!({
            "normalization": ws.z_n.to_string(),
            "normalization_value": num(truncmat::special::poly::to_f64(&ws.z_n)),
            "weight_constant": ws.c_r.to_string(),
        }),
    })
}

fn cmd_kernel(cfg: &RunConfig) -> Result<Report> {
    let spec = spec_of(cfg)?;
    let grid = cfg.grid.as_ref().context("missing grid")?;
    let (xs, ys) = (grid.x.points(), grid.y.points());
    let sys = BiorthogonalSystem::new(spec)?;
    let sum = sys.kernel_grid(&xs, &ys, cfg.exec);
    let contour = ContourKernel::new(spec, ContourOptions { exec: cfg.exec, ..Default::default() })?.grid(&xs, &ys)?;
    let mut table = Table::new(&["x", "y", "k_sum", "k_contour", "abs_diff"]);
    let mut max_rel = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let (a, b) = (sum[i][j], contour[i][j]);
            max_rel = max_rel.max((a - b).abs() / a.abs().max(1.0));
            table.push([num(x), num(y), num(a), num(b), num((a - b).abs())]);
        }
    }
    let rule = composite_rule(0.0, 1.0, &[1e-3, 1e-2, 0.1], 4, 20);
    let diag = cfg.exec.map_slice(&rule, |&(x, _)| sys.kernel(x, x));
    let trace: f64 = rule.iter().zip(&diag).map(|((_, w), k)| w * k).sum();
    let diag_ok = xs.iter().all(|&x| sys.kernel(x, x) >= DIAGONAL_FLOOR) && diag.iter().all(|&k| k >= DIAGONAL_FLOOR);
    Ok(Report {
        command: "kernel",
        spec: json!(spec),
        seed: None,
        table,
        summary: json!({
            "max_discrepancy": num(max_rel),
            "tolerance": num(cfg.tolerance),
            "agree": max_rel < cfg.tolerance,
            "trace": num(trace),
            "trace_error": num((trace - spec.n as f64).abs()),
            "diagonal_nonnegative": diag_ok,
        }),
    })
}

fn cmd_hard_edge(cfg: &RunConfig) -> Result<Report> {
    let h = cfg.hard_edge.as_ref().context("missing hard-edge parameters")?;
    let grid = cfg.grid.as_ref().context("missing grid")?;
    let (xs, ys) = (grid.x.points(), grid.y.points());
    let bound = grid.x.hi.max(grid.y.hi);
    let kernel = LimitKernel::new(h, bound, ContourOptions { exec: cfg.exec, ..Default::default() })?;
    let limit = kernel.grid(&xs, &ys)?;
    let bessel = h.r() == 1 && h.nu[0] == 0;
    let finite = match &cfg.spec {
        Some(spec) => Some((scaling_constant(spec, &h.j)?, scaled_finite_kernel(spec, &h.j, &xs, &ys, cfg.exec)?)),
        None => None,
    };
    let mut header = vec!["x", "y", "limit"];
    if bessel {
        header.push("bessel");
    }
    if finite.is_some() {
        header.extend(["finite", "abs_diff"]);
    }
    let mut table = Table::new(&header);
    let (mut bessel_dev, mut finite_dev) = (0.0f64, 0.0f64);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let k = limit[i][j];
            let mut row = vec![num(x), num(y), num(k)];
            if bessel {
                let b = bessel_limit_kernel(x, y);
                bessel_dev = bessel_dev.max((k - b).abs());
                row.push(num(b));
            }
            if let Some((_, f)) = &finite {
                finite_dev = finite_dev.max((f[i][j] - k).abs());
                row.extend([num(f[i][j]), num((f[i][j] - k).abs())]);
            }
            table.push(row);
        }
    }
    let (height, t_max) = kernel.cutoffs();
    let mut summary = json!({"s_half_height": num(height), "t_cutoff": t_max, "rt_degree": h.rt_degree()});
    if bessel {
        summary["max_bessel_deviation"] = num(bessel_dev);
    }
    if let Some((c, _)) = &finite {
        summary["scaling_constant"] = num(*c);
        summary["max_finite_deviation"] = num(finite_dev);
    }
    let spec = match &cfg.spec {
        Some(s) => json!({"limit": h, "finite": s}),
        None => json!({"limit": h}),
    };
    Ok(Report { command: "hard-edge", spec, seed: None, table, summary })
}

fn cmd_verify(cfg: &RunConfig) -> Result<Report> {
    let seed = cfg.seed.context("missing seed")?;
    let checks = run_suite(&SuiteConfig { seed, samples: cfg.samples, exec: cfg.exec, cnp_factor: cfg.cnp_factor })?;
    let mut table = Table::new(&["name", "statistic", "threshold", "pass"]);
    for c in &checks {
        table.push([json!(c.name), num(c.statistic), num(c.threshold), json!(c.pass)]);
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(Report {
        command: "verify",
        spec: Value::Null,
        seed: Some(seed),
        table,
        summary: json!({"samples": cfg.samples, "checks": checks, "all_pass": all_pass}),
    })
}
