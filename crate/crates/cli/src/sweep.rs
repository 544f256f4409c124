//! CSV parameter sweeps over univariate pairs.

use std::fs::File;
use std::io::Write;
use std::str::FromStr;

use wkl_core::{kl_divergence, wkl_divergence, Gaussian};

use crate::cli::{SweepArgs, SweepKind};
use crate::error::{CliError, Result};
use crate::fmt;

/// Evenly spaced `start, start + step, ...` up to and including `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(CliError::Usage("grid bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(CliError::Usage(format!(
                "grid step must be positive, got {step}"
            )));
        }
        if start >= stop {
            return Err(CliError::Usage(format!(
                "grid start {start} must be below stop {stop}"
            )));
        }
        Ok(Self { start, stop, step })
    }

    pub fn points(&self) -> Vec<f64> {
        // the slack keeps `stop` when (stop − start) / step is an integer up to rounding
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

impl FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(CliError::Usage(format!(
                "grid '{s}' must look like START:STOP:STEP"
            )));
        };
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("grid '{s}': '{p}' is not a number")))
        };
        Grid::new(num(start)?, num(stop)?, num(step)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write_csv(&self, sink: impl Write) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(sink);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| fmt::csv(v)))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn normal(mean: f64, sigma: f64) -> Result<Gaussian<f64>> {
    Ok(Gaussian::univariate(mean, sigma)?)
}

fn wkl(mu: &Gaussian<f64>, nu: &Gaussian<f64>) -> Result<f64> {
    Ok(wkl_divergence(mu, nu)?.total)
}

/// `σ = 0.09, 0.19, ..., 19.99`; `μ = N(0, σ²)`, `ν = N(2, σ²)`;
/// `d_kl = KL(ν ‖ μ)`, `d_wkl = D(μ ‖ ν)`.
pub fn fig1_left() -> Result<Table> {
    let mut t = Table::new(&["sigma", "d_kl", "d_wkl"]);
    for k in 0..200 {
        let s = (9 + 10 * k) as f64 / 100.0;
        let (mu, nu) = (normal(0.0, s)?, normal(2.0, s)?);
        t.rows
            .push(vec![s, kl_divergence(&nu, &mu)?, wkl(&mu, &nu)?]);
    }
    Ok(t)
}

/// Around each `σ_opt`, `σ` runs from `σ_opt − 1` to `σ_opt + 1` in steps of
/// 0.1, skipping `σ ≤ 0`. `(a||b)` in the header is `D(N(0,a²) ‖ N(0,b²))`.
pub fn fig1_right(sigma_opts: &[f64]) -> Result<Table> {
    let mut t = Table::new(&[
        "sigma_opt",
        "sigma",
        "d_kl(sigma||sigma_opt)",
        "d_wkl_mu_nu(sigma_opt||sigma)",
        "d_wkl_nu_mu(sigma||sigma_opt)",
    ]);
    for &s_opt in sigma_opts {
        if !(s_opt > 0.0 && s_opt.is_finite()) {
            return Err(CliError::Usage(format!(
                "sigma_opt must be positive, got {s_opt}"
            )));
        }
        let at_opt = normal(0.0, s_opt)?;
        for i in -10..=10 {
            let s = (s_opt * 10.0 + i as f64) / 10.0;
            if s <= 0.0 {
                continue;
            }
            let at_s = normal(0.0, s)?;
            t.rows.push(vec![
                s_opt,
                s,
                kl_divergence(&at_s, &at_opt)?,
                wkl(&at_opt, &at_s)?,
                wkl(&at_s, &at_opt)?,
            ]);
        }
    }
    Ok(t)
}

/// `μ = N(mu0, σ₀²)`, `ν = N(mu1, σ₁²)`; both KL orders are reported.
pub fn surface(mu0: f64, mu1: f64, sigma0: &Grid, sigma1: &Grid) -> Result<Table> {
    let mut t = Table::new(&["sigma0", "sigma1", "d_wkl", "d_kl_mu_nu", "d_kl_nu_mu"]);
    for s0 in sigma0.points() {
        for s1 in sigma1.points() {
            let (mu, nu) = (normal(mu0, s0)?, normal(mu1, s1)?);
            t.rows.push(vec![
                s0,
                s1,
                wkl(&mu, &nu)?,
                kl_divergence(&mu, &nu)?,
                kl_divergence(&nu, &mu)?,
            ]);
        }
    }
    Ok(t)
}

/// `σ₀, σ₁ ∈ {0.1, ..., 4}`, `μ = N(0, σ₀²)`, `ν = N(1, σ₁²)`, `d_kl = KL(ν ‖ μ)`.
pub fn fig2_surface() -> Result<Table> {
    let mut t = Table::new(&["sigma0", "sigma1", "d_wkl", "d_kl"]);
    let grid: Vec<f64> = (1..=40).map(|i| i as f64 / 10.0).collect();
    for &s0 in &grid {
        for &s1 in &grid {
            let (mu, nu) = (normal(0.0, s0)?, normal(1.0, s1)?);
            t.rows
                .push(vec![s0, s1, wkl(&mu, &nu)?, kl_divergence(&nu, &mu)?]);
        }
    }
    Ok(t)
}

pub fn table(args: &SweepArgs) -> Result<Table> {
    match args.kind {
        SweepKind::Fig1Left => fig1_left(),
        SweepKind::Fig1Right => fig1_right(&args.sigma_opt),
        SweepKind::Fig2Surface => fig2_surface(),
        SweepKind::Custom => {
            let (g0, g1): (Grid, Grid) = (args.sigma0.parse()?, args.sigma1.parse()?);
            if g0.start <= 0.0 || g1.start <= 0.0 {
                return Err(CliError::Usage("sigma grids must start above 0".into()));
            }
            surface(args.mu0, args.mu1, &g0, &g1)
        }
    }
}

pub fn run(args: &SweepArgs, stdout: &mut dyn Write) -> Result<u8> {
    let t = table(args)?;
    match &args.out {
        Some(path) => {
            let target = path.display().to_string();
            let file = File::create(path).map_err(|e| CliError::write(&target, e))?;
            t.write_csv(file)
                .map_err(|e| CliError::write(&target, e.into()))?;
        }
        None => t
            .write_csv(stdout)
            .map_err(|e| CliError::write("stdout", e.into()))?,
    }
    Ok(0)
}
