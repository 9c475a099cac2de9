use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use truncmat::hardedge::HardEdgeSpec;
use truncmat::{Execution, ProductSpec};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Sample,
    Density,
    Kernel,
    HardEdge,
    Verify,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Singular values of products of truncated Haar unitaries: sampling,
/// densities, kernels, hard-edge limits and self-checks.
#[derive(Parser, Debug)]
#[command(author, version)]
pub struct Args {
    #[arg(long, value_enum)]
    pub command: Command,

    #[arg(long)]
    pub n: Option<usize>,

    /// Number of factors; defaults to the length of `--nu`.
    #[arg(long)]
    pub r: Option<usize>,

    /// Comma-separated nu_1..nu_r.
    #[arg(long, value_delimiter = ',')]
    pub nu: Vec<usize>,

    /// Comma-separated m_1..m_r.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub samples: Option<usize>,

    /// `x0:x1:steps[,y0:y1:steps]`; the y axis defaults to the x axis.
    #[arg(long)]
    pub grid: Option<String>,

    #[arg(long)]
    pub out: PathBuf,

    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,

    /// Acceptance bound for reported discrepancies.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,

    /// Hard-edge index set J (comma-separated, within 2..=r).
    #[arg(long, value_delimiter = ',')]
    pub j: Vec<usize>,

    /// Hard-edge offsets mu_k = m_{j_k} - n.
    #[arg(long, value_delimiter = ',')]
    pub mu: Vec<usize>,

    /// Histogram bins for `sample`.
    #[arg(long, default_value_t = 20)]
    pub bins: usize,

    /// Run every loop on the calling thread.
    #[arg(long)]
    pub sequential: bool,

    #[arg(long, hide = true, default_value_t = 1.0)]
    pub corrupt_cnp: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        (0..self.steps).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub x: Axis,
    pub y: Axis,
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("axis '{s}' is not x0:x1:steps"));
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("axis '{s}': {e}"));
    let (lo, hi) = (num(parts[0])?, num(parts[1])?);
    let steps = parts[2].trim().parse::<usize>().map_err(|e| format!("axis '{s}': {e}"))?;
    if !(lo.is_finite() && hi.is_finite()) || steps == 0 || (steps > 1 && lo >= hi) {
        return Err(format!("axis '{s}' needs finite x0 < x1 and steps >= 1"));
    }
    Ok(Axis { lo, hi, steps })
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let mut axes = s.split(',');
    let x = parse_axis(axes.next().unwrap_or(""))?;
    let y = match axes.next() {
        Some(a) => parse_axis(a)?,
        None => x.clone(),
    };
    if axes.next().is_some() {
        return Err(format!("grid '{s}' has more than two axes"));
    }
    Ok(Grid { x, y })
}

/// Validated settings for one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub spec: Option<ProductSpec>,
    pub hard_edge: Option<HardEdgeSpec>,
    pub seed: Option<u64>,
    pub samples: usize,
    pub grid: Option<Grid>,
    pub out: PathBuf,
    pub format: Format,
    pub tolerance: f64,
    pub bins: usize,
    pub exec: Execution,
    pub cnp_factor: f64,
}

fn product_spec(args: &Args) -> Result<ProductSpec, String> {
    let n = args.n.ok_or("--n is required")?;
    if args.nu.is_empty() || args.m.is_empty() {
        return Err("--nu and --m are required".into());
    }
    if let Some(r) = args.r {
        if r != args.nu.len() || r != args.m.len() {
            return Err(format!("--r {r} does not match {} nu and {} m values", args.nu.len(), args.m.len()));
        }
    }
    ProductSpec::new(n, args.nu.clone(), args.m.clone()).map_err(|e| e.to_string())
}

fn require_grid(args: &Args) -> Result<Grid, String> {
    parse_grid(args.grid.as_deref().ok_or("--grid is required")?)
}

impl RunConfig {
    /// Checks everything that can be checked before any numerical work.
    pub fn from_args(args: &Args) -> Result<Self, String> {
        if !(args.tolerance > 0.0 && args.tolerance.is_finite()) {
            return Err("--tolerance must be positive".into());
        }
        if !(args.corrupt_cnp > 0.0 && args.corrupt_cnp.is_finite()) {
            return Err("--corrupt-cnp must be positive".into());
        }
        let mut cfg = RunConfig {
            command: args.command,
            spec: None,
            hard_edge: None,
            seed: args.seed,
            samples: 0,
            grid: None,
            out: args.out.clone(),
            format: args.format,
            tolerance: args.tolerance,
            bins: args.bins,
            exec: if args.sequential { Execution::Sequential } else { Execution::Parallel },
            cnp_factor: args.corrupt_cnp,
        };
        match args.command {
            Command::Sample => {
                cfg.spec = Some(product_spec(args)?);
                cfg.seed = Some(args.seed.ok_or("--seed is required for sampling")?);
                cfg.samples = args.samples.unwrap_or(10_000);
                if cfg.samples == 0 || cfg.bins == 0 {
                    return Err("--samples and --bins must be positive".into());
                }
            }
            Command::Density | Command::Kernel => {
                cfg.spec = Some(product_spec(args)?);
                let grid = require_grid(args)?;
                let inside = |a: &Axis| a.lo > 0.0 && a.hi < 1.0;
                if !inside(&grid.x) || !inside(&grid.y) {
                    return Err("grid must lie inside (0, 1)".into());
                }
                cfg.grid = Some(grid);
            }
            Command::HardEdge => {
                let h = HardEdgeSpec::new(args.nu.clone(), args.j.clone(), args.mu.clone()).map_err(|e| e.to_string())?;
                if let Some(r) = args.r {
                    if r != h.r() {
                        return Err(format!("--r {r} does not match {} nu values", h.r()));
                    }
                }
                if !args.m.is_empty() {
                    let spec = product_spec(args)?;
                    if HardEdgeSpec::from_product(&spec, &h.j).map_err(|e| e.to_string())? != h {
                        return Err("--mu must equal m_j - n on J".into());
                    }
                    cfg.spec = Some(spec);
                }
                let grid = require_grid(args)?;
                if grid.x.lo <= 0.0 || grid.y.lo <= 0.0 {
                    return Err("hard-edge grid must be positive".into());
                }
                cfg.grid = Some(grid);
                cfg.hard_edge = Some(h);
            }
            Command::Verify => {
                cfg.seed = Some(args.seed.ok_or("--seed is required for verify")?);
                cfg.samples = args.samples.unwrap_or(1_000_000);
                if cfg.samples < 1000 {
                    return Err("--samples must be at least 1000 for verify".into());
                }
            }
        }
        Ok(cfg)
    }
}
