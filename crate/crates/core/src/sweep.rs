//! Parameter grids over `(B, T, Delta)` and the boundaries extracted from them.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{analytic_concurrence_alternate, analytic_log_partition, crossing_fields};
use crate::entanglement::{i_concurrence, pair_concurrence};
use crate::error::{domain, invalid, Error, Result};
use crate::spectral::{
    eigendecompose, ground_state_projector, partition_function, thermal_energy, thermal_state, SpectralDecomposition,
    Temperature, DEFAULT_DEGENERACY_TOL,
};
use crate::spin_model::{build_xxz_hamiltonian, ModelParams};

/// One grid axis: an inclusive linear range or an explicit list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Axis {
    Range { min: f64, max: f64, count: usize },
    Values(Vec<f64>),
}

impl Axis {
    pub fn fixed(value: f64) -> Self {
        Axis::Values(vec![value])
    }

    pub fn range(min: f64, max: f64, count: usize) -> Self {
        Axis::Range { min, max, count }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        match self {
            Axis::Range { min, max, count } => {
                if *count == 0 {
                    return Err(invalid(format!("{name} axis needs at least one point")));
                }
                if !(min.is_finite() && max.is_finite()) || min > max {
                    return Err(invalid(format!(
                        "{name} axis needs finite min <= max, got [{min}, {max}]"
                    )));
                }
                if *count == 1 && min != max {
                    return Err(invalid(format!("{name} axis with one point needs min == max")));
                }
            }
            Axis::Values(v) => {
                if v.is_empty() {
                    return Err(invalid(format!("{name} axis needs at least one point")));
                }
                if v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(invalid(format!(
                        "{name} axis values must be finite and strictly increasing"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::Range { min, count: 1, .. } => vec![*min],
            Axis::Range { min, max, count } => {
                let step = (max - min) / (*count - 1) as f64;
                (0..*count)
                    .map(|k| if k + 1 == *count { *max } else { min + step * k as f64 })
                    .collect()
            }
            Axis::Values(v) => v.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Axis::Range { count, .. } => *count,
            Axis::Values(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Spacing between neighbouring points (zero for a single point).
    pub fn step(&self) -> f64 {
        let v = self.values();
        if v.len() < 2 {
            0.0
        } else {
            (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64
        }
    }
}

/// Quantities a sweep can record. The declaration order is the row order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Concurrence of the alternate pair (1, 3).
    CAlternate,
    /// Concurrence of the nearest-neighbour pair (1, 2).
    CNearest,
    /// Global entanglement.
    Q,
    /// Mean i-concurrence over all sites.
    Ic,
    /// Partition function.
    Z,
    /// Thermal energy `Tr[rho H]`.
    Energy,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::CAlternate,
        Quantity::CNearest,
        Quantity::Q,
        Quantity::Ic,
        Quantity::Z,
        Quantity::Energy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::CAlternate => "c_alternate",
            Quantity::CNearest => "c_nearest",
            Quantity::Q => "q",
            Quantity::Ic => "ic",
            Quantity::Z => "z",
            Quantity::Energy => "energy",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown quantity {s:?}")))
    }
}

/// Which global state `Q` and `IC` are evaluated on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum GlobalStateMode {
    /// Ground-manifold mixture, independent of the row's temperature.
    #[default]
    GroundManifold,
    /// The row's thermal state, with the pure-state formulas applied as is.
    Thermal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Coupling and site count; field and anisotropy come from the axes.
    pub model: ModelParams,
    pub b: Axis,
    pub t: Axis,
    pub delta: Axis,
    pub quantities: Vec<Quantity>,
    /// Replace the temperature axis with the ground-manifold state (T = 0).
    pub zero_temperature: bool,
    /// Use the closed forms for `C_alternate` and `Z` when `N = 4`, `Delta = 0`.
    pub analytic_fast_path: bool,
    pub global_state: GlobalStateMode,
}

impl GridSpec {
    pub fn new(model: ModelParams, b: Axis, t: Axis, delta: Axis, quantities: Vec<Quantity>) -> Self {
        Self {
            model,
            b,
            t,
            delta,
            quantities,
            zero_temperature: false,
            analytic_fast_path: false,
            global_state: GlobalStateMode::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.b.validate("B")?;
        self.delta.validate("Delta")?;
        if !self.zero_temperature {
            self.t.validate("T")?;
            if self.t.values()[0] <= 0.0 {
                return Err(invalid(
                    "T axis must be strictly positive (or use the zero-temperature mode)",
                ));
            }
        }
        if self.quantities.is_empty() {
            return Err(invalid("at least one quantity is required"));
        }
        let mut q = self.quantities.clone();
        q.sort();
        q.dedup();
        if q.len() != self.quantities.len() {
            return Err(invalid("quantities must be distinct"));
        }
        Ok(())
    }

    fn t_values(&self) -> Vec<f64> {
        if self.zero_temperature {
            vec![0.0]
        } else {
            self.t.values()
        }
    }

    /// Number of rows the sweep will produce.
    pub fn row_count(&self) -> usize {
        let nt = if self.zero_temperature { 1 } else { self.t.len() };
        self.b.len() * nt * self.delta.len() * self.quantities.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub j: f64,
    pub b: f64,
    pub t: f64,
    pub delta: f64,
    pub quantity: Quantity,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Rows ordered by `(quantity, Delta, T, B)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<Row>,
}

impl SweepTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }

    pub fn quantity(&self, q: Quantity) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.quantity == q)
    }

    /// Look up one value by exact coordinates.
    pub fn get(&self, q: Quantity, b: f64, t: f64, delta: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.quantity == q && r.b == b && r.t == t && r.delta == delta)
            .map(|r| r.value)
    }
}

/// Per-point cache: one diagonalisation serves every quantity.
struct PointEval<'a> {
    spec: &'a GridSpec,
    params: ModelParams,
    t: f64,
    decomposition: Option<SpectralDecomposition>,
}

impl<'a> PointEval<'a> {
    fn new(spec: &'a GridSpec, b: f64, t: f64, delta: f64) -> Self {
        Self {
            spec,
            params: spec.model.with_field(b).with_anisotropy(delta),
            t,
            decomposition: None,
        }
    }

    fn fast(&self) -> bool {
        self.spec.analytic_fast_path && self.params.n_sites == 4 && self.params.anisotropy_delta == 0.0 && self.t > 0.0
    }

    fn spectrum(&mut self) -> Result<&SpectralDecomposition> {
        if self.decomposition.is_none() {
            let h = build_xxz_hamiltonian(&self.params)?;
            self.decomposition = Some(eigendecompose(&h));
        }
        Ok(self.decomposition.as_ref().unwrap())
    }

    fn temperature(&self) -> Result<Temperature> {
        Temperature::new(self.t)
    }

    fn eval(&mut self, q: Quantity) -> Result<f64> {
        let n = self.params.n_sites;
        match q {
            Quantity::CAlternate if self.fast() => {
                analytic_concurrence_alternate(self.params.coupling_j, self.params.field_b, self.t)
            }
            Quantity::CAlternate | Quantity::CNearest => {
                let (i, j) = if q == Quantity::CAlternate { (1, 3) } else { (1, 2) };
                if j > n {
                    return Err(invalid(format!("pair ({i}, {j}) needs at least {j} sites")));
                }
                let t = self.temperature()?;
                let rho = thermal_state(self.spectrum()?, t);
                pair_concurrence(&rho, i, j, n)
            }
            Quantity::Q | Quantity::Ic => {
                let t = self.temperature()?;
                let mode = self.spec.global_state;
                let spec = self.spectrum()?;
                let rho = match mode {
                    GlobalStateMode::GroundManifold => ground_state_projector(spec, DEFAULT_DEGENERACY_TOL),
                    GlobalStateMode::Thermal => thermal_state(spec, t),
                };
                let ics = (1..=n).map(|s| i_concurrence(&rho, s, n)).collect::<Result<Vec<_>>>()?;
                Ok(if q == Quantity::Q {
                    ics.iter().map(|x| x * x).sum::<f64>() / n as f64
                } else {
                    ics.iter().sum::<f64>() / n as f64
                })
            }
            Quantity::Z if self.fast() => {
                Ok(analytic_log_partition(self.params.coupling_j, self.params.field_b, self.t)?.exp())
            }
            Quantity::Z => {
                let t = self.temperature()?;
                let z = partition_function(self.spectrum()?, t)?;
                Ok(z.ln().exp())
            }
            Quantity::Energy => {
                let t = self.temperature()?;
                Ok(thermal_energy(self.spectrum()?, t))
            }
        }
    }
}

type PointResult = Vec<std::result::Result<f64, String>>;

fn eval_point(spec: &GridSpec, b: f64, t: f64, delta: f64) -> PointResult {
    let mut p = PointEval::new(spec, b, t, delta);
    spec.quantities
        .iter()
        .map(|&q| p.eval(q).map_err(|e| e.to_string()))
        .collect()
}

fn assemble(spec: &GridSpec, coords: &[(f64, f64, f64)], results: Vec<PointResult>) -> SweepTable {
    let j = spec.model.coupling_j;
    let mut rows = Vec::with_capacity(spec.row_count());
    for (qi, &quantity) in spec.quantities.iter().enumerate() {
        for (&(delta, t, b), res) in coords.iter().zip(&results) {
            let (value, error) = match &res[qi] {
                Ok(v) => (*v, None),
                Err(e) => (f64::NAN, Some(e.clone())),
            };
            rows.push(Row {
                j,
                b,
                t,
                delta,
                quantity,
                value,
                error,
            });
        }
    }
    rows.sort_by_key(|r| r.quantity);
    SweepTable { rows }
}

fn coordinates(spec: &GridSpec) -> Vec<(f64, f64, f64)> {
    let bs = spec.b.values();
    let ts = spec.t_values();
    let ds = spec.delta.values();
    let mut out = Vec::with_capacity(bs.len() * ts.len() * ds.len());
    for &d in &ds {
        for &t in &ts {
            for &b in &bs {
                out.push((d, t, b));
            }
        }
    }
    out
}

/// Evaluate every grid point on the current rayon pool. Per-point failures
/// become `NaN` rows carrying the error message.
pub fn run_sweep(spec: &GridSpec) -> Result<SweepTable> {
    spec.validate()?;
    let coords = coordinates(spec);
    let results: Vec<PointResult> = coords.par_iter().map(|&(d, t, b)| eval_point(spec, b, t, d)).collect();
    Ok(assemble(spec, &coords, results))
}

/// Single-threaded reference evaluation; produces the same rows as
/// [`run_sweep`].
pub fn run_sweep_serial(spec: &GridSpec) -> Result<SweepTable> {
    spec.validate()?;
    let coords = coordinates(spec);
    let results = coords.iter().map(|&(d, t, b)| eval_point(spec, b, t, d)).collect();
    Ok(assemble(spec, &coords, results))
}

/// `C_13` of the four-site ring at `T > 0`: closed form for `Delta = 0`,
/// exact diagonalisation otherwise.
pub fn alternate_concurrence(j: f64, b: f64, delta: f64, t: f64) -> Result<f64> {
    if delta == 0.0 {
        return analytic_concurrence_alternate(j, b, t);
    }
    let params = ModelParams::new(j, b, delta, 4)?;
    let spec = eigendecompose(&build_xxz_hamiltonian(&params)?);
    let rho = crate::spectral::gibbs_state(&spec, Temperature::new(t)?)?;
    pair_concurrence(&rho, 1, 3, 4)
}

/// Lower and upper ground-state crossing fields of the four-site XX ring.
pub fn critical_fields(j: f64) -> Result<(f64, f64)> {
    if j == 0.0 || !j.is_finite() {
        return Err(domain(format!("critical fields need a finite non-zero J, got {j}")));
    }
    Ok(crossing_fields(j))
}

/// Threshold below which `C` counts as zero when locating `C = 0`.
pub const DEFAULT_POSITIVITY_FLOOR: f64 = 1e-12;
pub const DEFAULT_TC_TOL: f64 = 1e-6;
pub const DEFAULT_SCAN_POINTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `C` is at or below the level just below this temperature.
    Lower,
    /// `C` is above the level just below this temperature.
    Upper,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Lower => "lower",
            Branch::Upper => "upper",
        }
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(Branch::Lower),
            "upper" => Ok(Branch::Upper),
            _ => Err(Error::Parse(format!("unknown branch {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TcOptions {
    /// Contour level; `0` means the boundary of the entangled region.
    pub level: f64,
    /// `C > floor` counts as entangled when `level == 0`.
    pub floor: f64,
    /// Bisection stops once the bracket is narrower than this.
    pub tol: f64,
    pub scan_points: usize,
}

impl Default for TcOptions {
    fn default() -> Self {
        Self {
            level: 0.0,
            floor: DEFAULT_POSITIVITY_FLOOR,
            tol: DEFAULT_TC_TOL,
            scan_points: DEFAULT_SCAN_POINTS,
        }
    }
}

impl TcOptions {
    fn threshold(&self) -> f64 {
        if self.level == 0.0 {
            self.floor
        } else {
            self.level
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(invalid("tolerance must be positive"));
        }
        if !(self.floor >= 0.0) || !(self.level >= 0.0) {
            return Err(invalid("level and floor must be non-negative"));
        }
        if self.scan_points < 2 {
            return Err(invalid("scan needs at least two points"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub t: f64,
    pub branch: Branch,
}

/// Temperatures in `bracket` where `C_13(T)` crosses the contour level.
///
/// `C` is sampled on a log grid; every change of the indicator `C > level`
/// (or `C > floor` for level 0) between neighbours is refined by bisection.
pub fn temperature_crossings(
    j: f64,
    b: f64,
    delta: f64,
    bracket: (f64, f64),
    opts: &TcOptions,
) -> Result<Vec<Crossing>> {
    opts.validate()?;
    let (lo, hi) = bracket;
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(invalid(format!(
            "temperature bracket must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    let threshold = opts.threshold();
    let above = |t: f64| -> Result<bool> { Ok(alternate_concurrence(j, b, delta, t)? > threshold) };

    let n = opts.scan_points;
    let ratio = (hi / lo).ln();
    let grid: Vec<f64> = (0..n)
        .map(|k| {
            if k + 1 == n {
                hi
            } else {
                lo * (ratio * k as f64 / (n - 1) as f64).exp()
            }
        })
        .collect();
    let flags = grid.iter().map(|&t| above(t)).collect::<Result<Vec<_>>>()?;

    let mut out = Vec::new();
    for k in 0..n - 1 {
        if flags[k] == flags[k + 1] {
            continue;
        }
        let (mut a, mut z) = (grid[k], grid[k + 1]);
        let fa = flags[k];
        while z - a > opts.tol {
            let mid = 0.5 * (a + z);
            if above(mid)? == fa {
                a = mid;
            } else {
                z = mid;
            }
        }
        out.push(Crossing {
            t: 0.5 * (a + z),
            branch: if fa { Branch::Upper } else { Branch::Lower },
        });
    }
    Ok(out)
}

/// Critical temperatures where the alternate-pair entanglement switches on
/// or off, using the default positivity floor and scan.
pub fn critical_temperature(j: f64, b: f64, delta: f64, t_bracket: (f64, f64), tol: f64) -> Result<Vec<f64>> {
    let opts = TcOptions {
        tol,
        ..TcOptions::default()
    };
    Ok(temperature_crossings(j, b, delta, t_bracket, &opts)?
        .into_iter()
        .map(|c| c.t)
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub b: f64,
    pub t_c: f64,
    pub branch: Branch,
}

/// A contour `C_13(B, T) = level` traced column by column in `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub level: f64,
    pub tol: f64,
    pub points: Vec<BoundaryPoint>,
}

pub fn boundary_curve(
    j: f64,
    delta: f64,
    b_values: &[f64],
    t_bracket: (f64, f64),
    opts: &TcOptions,
) -> Result<BoundaryCurve> {
    let per_b = b_values
        .par_iter()
        .map(|&b| {
            temperature_crossings(j, b, delta, t_bracket, opts).map(|cs| {
                cs.into_iter()
                    .map(move |c| BoundaryPoint {
                        b,
                        t_c: c.t,
                        branch: c.branch,
                    })
                    .collect::<Vec<_>>()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryCurve {
        level: opts.level,
        tol: opts.tol,
        points: per_b.into_iter().flatten().collect(),
    })
}

/// Smallest field `B >= 0` at which some temperature in `t_bracket` shows
/// alternate-pair entanglement under `opts`. Scans `[0, b_max]` in steps
/// of `b_step` and bisects the first switch down to `opts.tol`.
pub fn entanglement_onset_field(
    j: f64,
    delta: f64,
    t_bracket: (f64, f64),
    b_max: f64,
    b_step: f64,
    opts: &TcOptions,
) -> Result<Option<f64>> {
    if !(b_step > 0.0) || !(b_max > 0.0) {
        return Err(invalid("field scan needs positive b_max and b_step"));
    }
    let entangled = |b: f64| -> Result<bool> { Ok(!temperature_crossings(j, b, delta, t_bracket, opts)?.is_empty()) };
    if entangled(0.0)? {
        return Ok(Some(0.0));
    }
    let steps = (b_max / b_step).ceil() as usize;
    let mut prev = 0.0;
    for k in 1..=steps {
        let b = (k as f64 * b_step).min(b_max);
        if entangled(b)? {
            let (mut lo, mut hi) = (prev, b);
            while hi - lo > opts.tol.max(1e-9) {
                let mid = 0.5 * (lo + hi);
                if entangled(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
        prev = b;
    }
    Ok(None)
}

/// Half-maximum edges `(rising, falling)` of the entangled band in a
/// `C(B)` profile, linearly interpolated between samples.
pub fn band_edges(b: &[f64], c: &[f64]) -> Option<(f64, f64)> {
    assert_eq!(b.len(), c.len());
    let peak = c.iter().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return None;
    }
    let half = 0.5 * peak;
    let cross = |k: usize| b[k] + (half - c[k]) * (b[k + 1] - b[k]) / (c[k + 1] - c[k]);
    let rising = (0..b.len() - 1).find(|&k| c[k] < half && c[k + 1] >= half).map(cross)?;
    let falling = (0..b.len() - 1)
        .rev()
        .find(|&k| c[k] >= half && c[k + 1] < half)
        .map(cross)?;
    Some((rising, falling))
}

/// Named preset grids, `fig1a` to `fig3b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig2c,
    Fig3a,
    Fig3b,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig2c,
        FigureId::Fig3a,
        FigureId::Fig3b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
            FigureId::Fig2c => "fig2c",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown figure {s:?}")))
    }
}

/// Contour levels extracted for the `(B, T)` contour map.
pub const FIG1B_LEVELS: [f64; 4] = [0.5, 0.3, 0.1, 0.0];

/// Grid definition for a preset figure with coupling `j`.
pub fn figure_spec(id: FigureId, j: f64) -> GridSpec {
    let model = ModelParams::xx4(j, 0.0);
    let c13 = vec![Quantity::CAlternate];
    match id {
        FigureId::Fig1a | FigureId::Fig1b => GridSpec::new(
            model,
            Axis::range(-2.0, 2.0, 121),
            Axis::range(0.02, 2.0, 100),
            Axis::fixed(0.0),
            c13,
        ),
        FigureId::Fig2a | FigureId::Fig2b => GridSpec::new(
            model,
            Axis::range(0.0, 1.5, 301),
            Axis::Values(vec![0.01, 0.1, 0.5]),
            Axis::fixed(0.0),
            vec![if id == FigureId::Fig2a {
                Quantity::CAlternate
            } else {
                Quantity::CNearest
            }],
        ),
        FigureId::Fig2c => GridSpec::new(
            model,
            Axis::range(0.0, 1.5, 301),
            Axis::fixed(0.01),
            Axis::fixed(0.0),
            vec![Quantity::Q, Quantity::Ic],
        ),
        FigureId::Fig3a => GridSpec::new(
            model.with_field(0.5),
            Axis::fixed(0.5),
            Axis::range(0.02, 1.0, 50),
            Axis::range(-0.4, 1.0, 71),
            c13,
        ),
        FigureId::Fig3b => GridSpec::new(
            model,
            Axis::range(0.0, 1.0, 101),
            Axis::fixed(0.2),
            Axis::range(-1.0, 1.0, 201),
            c13,
        ),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureData {
    pub id: FigureId,
    pub table: SweepTable,
    /// Contours for `fig1b` in the order of [`FIG1B_LEVELS`]; empty otherwise.
    pub contours: Vec<BoundaryCurve>,
}

impl FigureData {
    /// The `C = 0` boundary of `fig1b`.
    pub fn zero_boundary(&self) -> Option<&BoundaryCurve> {
        self.contours.iter().find(|c| c.level == 0.0)
    }
}

pub fn figure_dataset(id: FigureId) -> Result<FigureData> {
    figure_dataset_with_coupling(id, 1.0)
}

pub fn figure_dataset_with_coupling(id: FigureId, j: f64) -> Result<FigureData> {
    let spec = figure_spec(id, j);
    let table = run_sweep(&spec)?;
    let contours = if id == FigureId::Fig1b {
        let bs = spec.b.values();
        let ts = spec.t.values();
        let bracket = (ts[0], ts[ts.len() - 1]);
        FIG1B_LEVELS
            .iter()
            .map(|&level| {
                boundary_curve(
                    j,
                    0.0,
                    &bs,
                    bracket,
                    &TcOptions {
                        level,
                        ..TcOptions::default()
                    },
                )
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(FigureData { id, table, contours })
}
