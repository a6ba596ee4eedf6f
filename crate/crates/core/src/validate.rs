//! Self-consistency suite behind `xxring validate`. Eleven checks compare
//! the numeric pipeline with the closed forms and probe the preset grids.
//!
//! Each check draws from its own ChaCha stream seeded with
//! `seed + check id`, so results depend only on the options.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{
    analytic_concurrence_alternate, analytic_log_partition, analytic_rho13, analytic_spectrum, crossing_fields,
};
use crate::entanglement::{full_report, i_concurrence, partial_trace, wootters_concurrence, SiteSubset};
use crate::error::Result;
use crate::spectral::{
    eigendecompose, gibbs_state, ground_state_projector, partition_function, thermal_state, DensityMatrix,
    SpectralDecomposition, Temperature, DEFAULT_DEGENERACY_TOL,
};
use crate::spin_model::{build_xx_hamiltonian, build_xxz_hamiltonian, ModelParams};
use crate::sweep::{
    band_edges, entanglement_onset_field, figure_spec, run_sweep, temperature_crossings, Axis, FigureId, Quantity,
    TcOptions,
};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_DRAWS: usize = 200;
const QUICK_DRAWS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationOptions {
    pub seed: u64,
    /// Random draws for the concurrence oracle check; the other sampled
    /// checks scale proportionally.
    pub draws: usize,
    /// Coarser grids and fewer draws.
    pub quick: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            draws: DEFAULT_DRAWS,
            quick: false,
        }
    }
}

impl ValidationOptions {
    fn draws(&self) -> usize {
        if self.quick {
            self.draws.min(QUICK_DRAWS)
        } else {
            self.draws
        }
        .max(1)
    }

    fn scaled(&self, nominal: usize) -> usize {
        (nominal * self.draws()).div_ceil(DEFAULT_DRAWS).max(1)
    }

    fn rng(&self, id: u32) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(id as u64))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

type Outcome = Result<(bool, String)>;
type Check = fn(&ValidationOptions) -> Outcome;

const CHECKS: [(u32, &str, Check); 11] = [
    (1, "spectrum equivalence", check_spectrum),
    (2, "partition function", check_partition),
    (3, "reduced state rho13", check_rho13),
    (4, "concurrence oracle", check_concurrence_oracle),
    (5, "zero-temperature step", check_zero_temperature),
    (6, "band edges", check_band_edges),
    (7, "nearest-neighbour plateau and dip", check_nearest_plateau),
    (8, "i-concurrence and global entanglement", check_global_identities),
    (9, "critical-temperature structure", check_tc_structure),
    (10, "field and coupling symmetry", check_symmetries),
    (11, "anisotropy peak", check_anisotropy),
];

/// Run every check. A check that errors counts as failed with the error
/// text as its detail.
pub fn run_validation(opts: &ValidationOptions) -> ValidationReport {
    let checks = CHECKS
        .iter()
        .map(|&(id, name, f)| {
            let start = Instant::now();
            let (passed, detail) = match f(opts) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult {
                id,
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();
    ValidationReport { checks }
}

/// Run a single check by id (1 to 11).
pub fn run_check(id: u32, opts: &ValidationOptions) -> Option<CheckResult> {
    let &(id, name, f) = CHECKS.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (passed, detail) = f(opts).unwrap_or_else(|e| (false, format!("error: {e}")));
    Some(CheckResult {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn xx_spec(j: f64, b: f64) -> Result<SpectralDecomposition> {
    Ok(eigendecompose(&build_xx_hamiltonian(&ModelParams::xx4(j, b))?))
}

fn xx_gibbs(j: f64, b: f64, t: f64) -> Result<DensityMatrix> {
    gibbs_state(&xx_spec(j, b)?, Temperature::new(t)?)
}

fn rho13(rho: &DensityMatrix) -> Result<DensityMatrix> {
    partial_trace(rho, &SiteSubset::pair(1, 3, 4)?, 4)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    Axis::range(lo, hi, n).values()
}

fn check_spectrum(opts: &ValidationOptions) -> Outcome {
    let mut rng = opts.rng(1);
    let n = opts.scaled(100);
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let b = rng.gen_range(-3.0..3.0);
        let numeric = xx_spec(1.0, b)?;
        let mut exact = analytic_spectrum(1.0, b);
        exact.sort_by(f64::total_cmp);
        for (a, e) in numeric.eigenvalues().iter().zip(&exact) {
            worst = worst.max((a - e).abs());
        }
    }
    Ok((worst <= 1e-10, format!("{n} draws, max |dE| = {worst:.2e}")))
}

fn check_partition(opts: &ValidationOptions) -> Outcome {
    let n = if opts.quick { 8 } else { 20 };
    let mut worst = 0.0_f64;
    for &b in &linspace(-2.0, 2.0, n) {
        let spec = xx_spec(1.0, b)?;
        for &t in &linspace(0.05, 5.0, n) {
            let ln_numeric = partition_function(&spec, Temperature::new(t)?)?.ln();
            let ln_exact = analytic_log_partition(1.0, b, t)?;
            // |ln Z1 - ln Z2| is the relative error to first order
            worst = worst.max((ln_numeric - ln_exact).abs().exp_m1().abs());
        }
    }
    Ok((worst <= 1e-9, format!("{n}x{n} grid, max relative dZ = {worst:.2e}")))
}

fn check_rho13(opts: &ValidationOptions) -> Outcome {
    let mut rng = opts.rng(3);
    let n = opts.scaled(50);
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let b = rng.gen_range(-2.0..2.0);
        let t = rng.gen_range(0.05..5.0);
        let m = rho13(&xx_gibbs(1.0, b, t)?)?;
        let (u, v, w, y) = analytic_rho13(1.0, b, t)?.normalized();
        let pairs = [
            (m.entry(0, 0).re, u),
            (m.entry(3, 3).re, v),
            (m.entry(1, 1).re, w),
            (m.entry(2, 2).re, w),
            (m.entry(1, 2).re, y),
            (m.entry(2, 1).re, y),
        ];
        for (got, want) in pairs {
            worst = worst.max((got - want).abs());
        }
        let off_block = [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)];
        for (r, c) in off_block {
            worst = worst.max(m.entry(r, c).norm());
        }
    }
    Ok((worst <= 1e-10, format!("{n} draws, max |d(entry/Z)| = {worst:.2e}")))
}

fn check_concurrence_oracle(opts: &ValidationOptions) -> Outcome {
    let mut rng = opts.rng(4);
    let n = opts.draws();
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        points.push((
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.05..5.0),
        ));
    }
    let worst = points
        .par_iter()
        .map(|&(j, b, t)| -> Result<f64> {
            let numeric = wootters_concurrence(&rho13(&xx_gibbs(j, b, t)?)?)?;
            Ok((numeric - analytic_concurrence_alternate(j, b, t)?).abs())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((worst <= 1e-9, format!("{n} draws, max |dC| = {worst:.2e}")))
}

fn check_zero_temperature(_: &ValidationOptions) -> Outcome {
    let cases = [
        (0.1, 0.0),
        (0.3, 0.0),
        (0.5, 0.5),
        (0.7, 0.5),
        (0.9, 0.5),
        (1.1, 0.0),
        (1.5, 0.0),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (b, expect) in cases {
        let c = wootters_concurrence(&rho13(&xx_gibbs(1.0, b, 1e-3)?)?)?;
        ok &= (c - expect).abs() < 1e-3;
        parts.push(format!("C({b})={c:.4}"));
    }
    Ok((ok, parts.join(" ")))
}

fn check_band_edges(_: &ValidationOptions) -> Outcome {
    let mut spec = figure_spec(FigureId::Fig2a, 1.0);
    spec.t = Axis::fixed(0.01);
    let table = run_sweep(&spec)?;
    let (b, c): (Vec<f64>, Vec<f64>) = table.quantity(Quantity::CAlternate).map(|r| (r.b, r.value)).unzip();
    let Some((lo, hi)) = band_edges(&b, &c) else {
        return Ok((false, "no entangled band found".into()));
    };
    let (b_lo, b_hi) = crossing_fields(1.0);
    let ok = (lo - b_lo).abs() <= 0.01 && (hi - b_hi).abs() <= 0.01;
    Ok((ok, format!("edges {lo:.4}, {hi:.4} (expected {b_lo:.4}, {b_hi:.4})")))
}

fn c_nearest(b: f64, t: f64) -> Result<f64> {
    let rho = xx_gibbs(1.0, b, t)?;
    wootters_concurrence(&partial_trace(&rho, &SiteSubset::pair(1, 2, 4)?, 4)?)
}

fn check_nearest_plateau(opts: &ValidationOptions) -> Outcome {
    let t = 0.01;
    let plateau = c_nearest(0.2, t)?;
    let expect = (2.0 * 2f64.sqrt() - 1.0) / 4.0;
    let (left, right) = (c_nearest(0.3, t)?, c_nearest(0.6, t)?);
    let window = linspace(0.35, 0.48, if opts.quick { 27 } else { 131 });
    let (b_min, c_min) = window
        .iter()
        .map(|&b| c_nearest(b, t).map(|c| (b, c)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((f64::NAN, f64::INFINITY), |acc, p| if p.1 < acc.1 { p } else { acc });
    let ok = (plateau - expect).abs() <= 5e-3 && c_min < left && c_min < right;
    Ok((
        ok,
        format!("C12(0.2)={plateau:.5}, dip {c_min:.4} at B={b_min:.3}, neighbours {left:.4}/{right:.4}"),
    ))
}

fn ground(b: f64) -> Result<DensityMatrix> {
    Ok(ground_state_projector(&xx_spec(1.0, b)?, DEFAULT_DEGENERACY_TOL))
}

fn check_global_identities(_: &ValidationOptions) -> Outcome {
    let mut worst = 0.0_f64;
    let low = ground(0.2)?;
    let mid = ground(0.7)?;
    for site in 1..=4 {
        worst = worst.max((i_concurrence(&low, site, 4)? - 1.0).abs());
        worst = worst.max((i_concurrence(&mid, site, 4)? - 3f64.sqrt() / 2.0).abs());
    }
    let report = full_report(&mid, 4)?;
    worst = worst.max((report.global_q - 0.5 * report.sum_squared_concurrence()).abs());
    let residual = full_report(&low, 4)?.residual;
    worst = worst.max((residual - (4.0 * 2f64.sqrt() - 5.0) / 4.0).abs());
    Ok((
        worst <= 1e-9,
        format!("max deviation {worst:.2e}, residual(0.2) = {residual:.6}"),
    ))
}

fn check_tc_structure(_: &ValidationOptions) -> Outcome {
    let opts = TcOptions::default();
    let bracket = (0.01, 5.0);
    let mut ok = true;
    let mut parts = Vec::new();
    for (b, expect) in [(0.05, 0), (0.25, 2), (0.7, 1), (1.2, 2)] {
        let n = temperature_crossings(1.0, b, 0.0, bracket, &opts)?.len();
        ok &= n == expect;
        parts.push(format!("B={b}: {n} roots (want {expect})"));
    }
    let onset = entanglement_onset_field(1.0, 0.0, bracket, 0.5, 0.01, &opts)?;
    match onset {
        Some(b) => {
            ok &= (b - 0.09).abs() <= 0.02;
            parts.push(format!("onset B={b:.4} (want 0.09+-0.02)"));
        }
        None => {
            ok = false;
            parts.push("no onset below B=0.5".into());
        }
    }
    Ok((ok, parts.join("; ")))
}

fn check_symmetries(opts: &ValidationOptions) -> Outcome {
    let spec = figure_spec(FigureId::Fig1a, 1.0);
    let stride = if opts.quick { 10 } else { 1 };
    let bs: Vec<f64> = spec.b.values().into_iter().step_by(stride).collect();
    let ts: Vec<f64> = spec.t.values().into_iter().step_by(stride).collect();
    let worst = bs
        .par_iter()
        .map(|&b| -> Result<f64> {
            let specs = [xx_spec(1.0, b)?, xx_spec(1.0, -b)?, xx_spec(-1.0, b)?];
            let mut worst = 0.0_f64;
            for &t in &ts {
                let temp = Temperature::new(t)?;
                let mut c = [0.0; 3];
                for (k, s) in specs.iter().enumerate() {
                    c[k] = wootters_concurrence(&rho13(&gibbs_state(s, temp)?)?)?;
                }
                worst = worst.max((c[0] - c[1]).abs()).max((c[0] - c[2]).abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((
        worst <= 1e-10,
        format!("{}x{} points, max asymmetry {worst:.2e}", bs.len(), ts.len()),
    ))
}

fn c_xxz(b: f64, delta: f64, t: f64) -> Result<f64> {
    let h = build_xxz_hamiltonian(&ModelParams::xx4(1.0, b).with_anisotropy(delta))?;
    let rho = thermal_state(&eigendecompose(&h), Temperature::new(t)?);
    wootters_concurrence(&rho13(&rho)?)
}

fn peak_delta(b: f64, t: f64, deltas: &[f64]) -> Result<(f64, Vec<f64>)> {
    let c = deltas.iter().map(|&d| c_xxz(b, d, t)).collect::<Result<Vec<_>>>()?;
    let k = (0..c.len()).fold(0, |best, k| if c[k] > c[best] { k } else { best });
    Ok((deltas[k], c))
}

fn check_anisotropy(_: &ValidationOptions) -> Outcome {
    let t = 0.2;
    let deltas = linspace(-1.0, 1.0, 201);
    let (peak0, c0) = peak_delta(0.0, t, &deltas)?;
    let (peak5, _) = peak_delta(0.5, t, &deltas)?;
    let max_nonneg = deltas
        .iter()
        .zip(&c0)
        .filter(|(d, _)| **d >= -1e-12)
        .map(|(_, c)| *c)
        .fold(0.0, f64::max);
    let peak_ok = (peak0 + 0.5).abs() <= 0.02 + 1e-12;
    let ok = peak_ok && max_nonneg <= 1e-9 && peak5 > peak0;
    Ok((
        ok,
        format!("peak at Delta={peak0:.2} (want -0.50+-0.02), max C for Delta>=0 {max_nonneg:.1e}, B=0.5 peak at {peak5:.2}"),
    ))
}
