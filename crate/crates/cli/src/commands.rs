use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;

use xxring::analytic::analytic_spectrum;
use xxring::entanglement::{full_report, pair_concurrence, partial_trace, SiteSubset};
use xxring::spectral::{
    eigendecompose, gibbs_state, ground_state_projector, partition_function, thermal_energy, DensityMatrix,
    SpectralDecomposition, Temperature, DEFAULT_DEGENERACY_TOL,
};
use xxring::spin_model::{build_xxz_hamiltonian, BasisState, ModelParams};
use xxring::sweep::{figure_dataset_with_coupling, FigureId, GlobalStateMode, GridSpec, TcOptions};
use xxring::table_io::{format_f64, write_boundary_csv, write_table, Format};
use xxring::validate::{run_check, run_validation, ValidationOptions, ValidationReport};

use crate::args::{Command, GlobalOpts, GlobalState, OutputFormat, SweepArgs};

/// Exit status 2 for usage errors, 1 for everything else.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<xxring::Error> for CliError {
    fn from(e: xxring::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("I/O error: {e}"))
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn usage_from(e: xxring::Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// Command outcome: the payload for stdout or `--output`, plus whether the
/// command itself reports failure (only `validate`).
struct Output {
    body: Vec<u8>,
    ok: bool,
}

impl Output {
    fn text(s: String) -> Self {
        Self {
            body: s.into_bytes(),
            ok: true,
        }
    }
}

pub fn run(global: &GlobalOpts, command: &Command) -> CliResult {
    if global.threads == Some(0) {
        return Err(usage("--threads must be at least 1"));
    }
    let model = ModelParams::new(global.j, global.b, global.delta, global.n_sites).map_err(usage_from)?;
    if let Some(n) = global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failure(e.to_string()))?;
    }

    let out = match command {
        Command::Spectrum => spectrum(global, &model)?,
        Command::State {
            pair,
            zero_temp,
            hamiltonian,
        } => {
            let t = resolve_temperature(global.t, *zero_temp)?;
            check_pair(*pair, model.n_sites)?;
            state(global, &model, t, *pair, *hamiltonian)?
        }
        Command::Concurrence { pair, full, zero_temp } => {
            let t = resolve_temperature(global.t, *zero_temp)?;
            check_pair(*pair, model.n_sites)?;
            concurrence(global, &model, t, *pair, *full)?
        }
        Command::Sweep(args) => {
            let spec = sweep_spec(global, &model, args)?;
            let table = xxring::sweep::run_sweep(&spec)?;
            let mut body = Vec::new();
            write_table(&table, global.format.into(), &mut body)?;
            Output { body, ok: true }
        }
        Command::Figure { id } => return figure(global, *id),
        Command::Tc {
            bracket,
            tol,
            floor,
            level,
        } => {
            let opts = TcOptions {
                level: *level,
                floor: *floor,
                tol: *tol,
                ..TcOptions::default()
            };
            if !(*tol > 0.0) || !(*floor >= 0.0) || !(*level >= 0.0) {
                return Err(usage("--tol must be positive, --floor and --level non-negative"));
            }
            if model.n_sites != 4 {
                return Err(usage("tc is defined for the four-site ring"));
            }
            tc(global, &model, *bracket, &opts)?
        }
        Command::Validate { draws, quick, only } => {
            if *draws == 0 {
                return Err(usage("--draws must be at least 1"));
            }
            if let Some(bad) = only.iter().find(|id| !(1..=11).contains(*id)) {
                return Err(usage(format!("no check with id {bad} (valid: 1-11)")));
            }
            let opts = ValidationOptions {
                seed: global.seed,
                draws: *draws,
                quick: *quick,
            };
            validate(&opts, only)
        }
    };

    emit(global.output.as_deref(), &out.body)?;
    if out.ok {
        Ok(())
    } else {
        Err(CliError::Failure("validation failed".into()))
    }
}

fn emit(path: Option<&Path>, body: &[u8]) -> CliResult {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn resolve_temperature(t: Option<f64>, zero_temp: bool) -> CliResult<Temperature> {
    match (t, zero_temp) {
        (Some(_), true) => Err(usage("--t conflicts with --zero-temp")),
        (None, true) => Ok(Temperature::ZERO),
        (None, false) => Err(usage("--t is required (or pass --zero-temp)")),
        (Some(0.0), false) => Err(usage("T = 0 requires --zero-temp")),
        (Some(t), false) => Temperature::new(t).map_err(usage_from),
    }
}

fn check_pair((i, j): (usize, usize), n: usize) -> CliResult {
    SiteSubset::pair(i, j, n).map(|_| ()).map_err(usage_from)
}

fn state_for(spec: &SpectralDecomposition, t: Temperature) -> xxring::Result<DensityMatrix> {
    if t.is_zero() {
        Ok(ground_state_projector(spec, DEFAULT_DEGENERACY_TOL))
    } else {
        gibbs_state(spec, t)
    }
}

fn spectrum(global: &GlobalOpts, model: &ModelParams) -> CliResult<Output> {
    let spec = eigendecompose(&build_xxz_hamiltonian(model)?);
    let numeric = spec.eigenvalues();
    let analytic = (model.n_sites == 4 && model.anisotropy_delta == 0.0).then(|| {
        let e = analytic_spectrum(model.coupling_j, model.field_b);
        let mut idx: Vec<usize> = (0..16).collect();
        idx.sort_by(|&a, &b| e[a].total_cmp(&e[b]));
        idx.into_iter().map(|k| (k, e[k])).collect::<Vec<_>>()
    });

    let mut max_dev = 0.0_f64;
    let mut body = String::new();
    if global.format == OutputFormat::Csv {
        body.push_str("label,numeric,analytic,abs_diff\n");
    }
    for (k, &e) in numeric.iter().enumerate() {
        let (label, exact) = match &analytic {
            Some(a) => (format!("E{}", a[k].0), Some(a[k].1)),
            None => (format!("#{k}"), None),
        };
        let diff = exact.map(|x| (x - e).abs());
        if let Some(d) = diff {
            max_dev = max_dev.max(d);
        }
        match global.format {
            OutputFormat::Csv => {
                let cell = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
                let _ = writeln!(body, "{label},{},{},{}", format_f64(e), cell(exact), cell(diff));
            }
            OutputFormat::Jsonl => {
                let _ = writeln!(
                    body,
                    "{}",
                    json!({"label": label, "numeric": e, "analytic": exact, "abs_diff": diff})
                );
            }
        }
    }
    if analytic.is_some() {
        eprintln!("max |numeric - analytic| = {max_dev:.3e}");
    } else {
        eprintln!("analytic column absent (closed form needs N = 4 and Delta = 0)");
    }
    Ok(Output::text(body))
}

fn describe_t(t: Temperature) -> String {
    if t.is_zero() {
        "0 (ground manifold)".into()
    } else {
        format!("{}", t.value())
    }
}

fn state(
    global: &GlobalOpts,
    model: &ModelParams,
    t: Temperature,
    (i, j): (usize, usize),
    hamiltonian: bool,
) -> CliResult<Output> {
    let h = build_xxz_hamiltonian(model)?;
    let spec = eigendecompose(&h);
    let rho = state_for(&spec, t)?;
    let n = model.n_sites;
    let reduced = partial_trace(&rho, &SiteSubset::pair(i, j, n)?, n)?;
    let ln_z = if t.is_zero() {
        None
    } else {
        Some(partition_function(&spec, t)?.ln())
    };
    let energy = thermal_energy(&spec, t);
    let degeneracy = spec.ground_degeneracy(DEFAULT_DEGENERACY_TOL);

    let mut elements = Vec::new();
    if hamiltonian {
        for r in 0..h.dim() {
            for c in 0..h.dim() {
                let v = h.entry(r, c);
                if v.norm() > 0.0 {
                    elements.push((BasisState::from_index(r, n)?, BasisState::from_index(c, n)?, v));
                }
            }
        }
    }

    if global.format == OutputFormat::Jsonl {
        let m = reduced.matrix();
        let rows: Vec<Vec<[f64; 2]>> = (0..4)
            .map(|r| (0..4).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect();
        let mut obj = json!({
            "j": model.coupling_j, "b": model.field_b, "delta": model.anisotropy_delta, "n_sites": n,
            "t": t.value(), "ground_energy": spec.ground_energy(), "ground_degeneracy": degeneracy,
            "ln_z": ln_z, "energy": energy, "purity": rho.purity(),
            "pair": [i, j], "reduced_state": rows,
        });
        if hamiltonian {
            obj["hamiltonian"] = elements
                .iter()
                .map(|(r, c, v)| json!({"bra": r.to_string(), "ket": c.to_string(), "re": v.re, "im": v.im}))
                .collect();
        }
        return Ok(Output::text(format!("{obj}\n")));
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        "model: J={} B={} Delta={} N={} (periodic)",
        model.coupling_j, model.field_b, model.anisotropy_delta, n
    );
    let _ = writeln!(s, "temperature: {}", describe_t(t));
    let _ = writeln!(s, "ground energy: {:.12}", spec.ground_energy());
    let _ = writeln!(s, "ground degeneracy: {degeneracy}");
    if let Some(l) = ln_z {
        let _ = writeln!(s, "ln Z: {l:.12}");
    }
    let _ = writeln!(s, "energy: {energy:.12}");
    let _ = writeln!(s, "purity: {:.12}", rho.purity());
    let _ = writeln!(s, "reduced state of sites ({i},{j}), basis |00>,|01>,|10>,|11>:");
    let m = reduced.matrix();
    for r in 0..4 {
        let cells: Vec<String> = (0..4)
            .map(|c| format!("{:+.6}{:+.6}i", m[(r, c)].re, m[(r, c)].im))
            .collect();
        let _ = writeln!(s, "  {}", cells.join("  "));
    }
    if hamiltonian {
        let _ = writeln!(s, "hamiltonian elements:");
        for (r, c, v) in &elements {
            let _ = writeln!(
                s,
                "  <{}|H|{}> = {:+.12}{:+.12}i",
                bit_string(r),
                bit_string(c),
                v.re,
                v.im
            );
        }
    }
    Ok(Output::text(s))
}

fn bit_string(s: &BasisState) -> String {
    s.bits().iter().map(|&b| char::from(b'0' + b)).collect()
}

fn concurrence(
    global: &GlobalOpts,
    model: &ModelParams,
    t: Temperature,
    (i, j): (usize, usize),
    full: bool,
) -> CliResult<Output> {
    let spec = eigendecompose(&build_xxz_hamiltonian(model)?);
    let rho = state_for(&spec, t)?;
    let n = model.n_sites;
    let c = pair_concurrence(&rho, i, j, n)?;
    let report = if full { Some(full_report(&rho, n)?) } else { None };

    if global.format == OutputFormat::Jsonl {
        let mut obj = json!({
            "j": model.coupling_j, "b": model.field_b, "t": t.value(), "delta": model.anisotropy_delta,
            "pair": [i, j], "concurrence": c,
        });
        if let Some(r) = &report {
            let pairs: Vec<_> = r
                .pair_concurrences
                .iter()
                .map(|(&(a, b), &v)| json!({"pair": [a, b], "concurrence": v}))
                .collect();
            obj["pairs"] = pairs.into();
            obj["i_concurrence"] = r.i_concurrences.clone().into();
            obj["q"] = r.global_q.into();
            obj["residual"] = r.residual.into();
        }
        return Ok(Output::text(format!("{obj}\n")));
    }

    let mut s = format!("C({i},{j}) = {c:.12}\n");
    if let Some(r) = &report {
        for (&(a, b), &v) in &r.pair_concurrences {
            let _ = writeln!(s, "C({a},{b}) = {v:.12}");
        }
        for (k, ic) in r.i_concurrences.iter().enumerate() {
            let _ = writeln!(s, "IC_{} = {ic:.12}", k + 1);
        }
        let _ = writeln!(s, "Q = {:.12}", r.global_q);
        let _ = writeln!(s, "residual = {:.12}", r.residual);
    }
    Ok(Output::text(s))
}

fn sweep_spec(global: &GlobalOpts, model: &ModelParams, args: &SweepArgs) -> CliResult<GridSpec> {
    use xxring::sweep::Axis;
    let t_axis = match (&args.t_axis, global.t, args.zero_temp) {
        (Some(_), _, true) | (None, Some(_), true) => {
            return Err(usage("a temperature axis conflicts with --zero-temp"))
        }
        (Some(a), _, false) => a.clone(),
        (None, Some(t), false) => Axis::fixed(t),
        (None, None, false) => return Err(usage("give --t-axis, --t or --zero-temp")),
        (None, None, true) => Axis::fixed(0.0),
    };
    let mut spec = GridSpec::new(
        *model,
        args.b_axis.clone().unwrap_or(Axis::fixed(global.b)),
        t_axis,
        args.delta_axis.clone().unwrap_or(Axis::fixed(global.delta)),
        args.quantities.clone(),
    );
    spec.zero_temperature = args.zero_temp;
    spec.analytic_fast_path = args.fast;
    spec.global_state = match args.global_state {
        GlobalState::Ground => GlobalStateMode::GroundManifold,
        GlobalState::Thermal => GlobalStateMode::Thermal,
    };
    spec.validate().map_err(usage_from)?;
    Ok(spec)
}

fn figure(global: &GlobalOpts, id: FigureId) -> CliResult {
    let dir: Option<PathBuf> = if id == FigureId::Fig1b {
        let Some(dir) = global.output.clone() else {
            return Err(usage("fig1b writes two files; pass an output directory with -o"));
        };
        if dir.exists() && !dir.is_dir() {
            return Err(usage(format!("{} exists and is not a directory", dir.display())));
        }
        Some(dir)
    } else {
        None
    };

    let data = figure_dataset_with_coupling(id, global.j)?;
    let format: Format = global.format.into();
    let mut grid = Vec::new();
    write_table(&data.table, format, &mut grid)?;

    match dir {
        Some(dir) => {
            let boundary = data
                .zero_boundary()
                .ok_or_else(|| CliError::Failure("missing C = 0 boundary".into()))?;
            let mut bcsv = Vec::new();
            write_boundary_csv(boundary, &mut bcsv)?;
            fs::create_dir_all(&dir).map_err(|e| CliError::Failure(format!("cannot create {}: {e}", dir.display())))?;
            let ext = if format == Format::Csv { "csv" } else { "jsonl" };
            emit(Some(&dir.join(format!("fig1b.{ext}"))), &grid)?;
            emit(Some(&dir.join("boundary.csv")), &bcsv)
        }
        None => emit(global.output.as_deref(), &grid),
    }
}

fn tc(global: &GlobalOpts, model: &ModelParams, bracket: (f64, f64), opts: &TcOptions) -> CliResult<Output> {
    let (j, b, delta) = (model.coupling_j, model.field_b, model.anisotropy_delta);
    let crossings = xxring::sweep::temperature_crossings(j, b, delta, bracket, opts)?;
    eprintln!(
        "{} critical temperature(s) in ({}, {})",
        crossings.len(),
        bracket.0,
        bracket.1
    );
    let mut body = Vec::new();
    match global.format {
        OutputFormat::Csv => {
            let curve = xxring::sweep::BoundaryCurve {
                level: opts.level,
                tol: opts.tol,
                points: crossings
                    .iter()
                    .map(|c| xxring::sweep::BoundaryPoint {
                        b,
                        t_c: c.t,
                        branch: c.branch,
                    })
                    .collect(),
            };
            write_boundary_csv(&curve, &mut body)?;
        }
        OutputFormat::Jsonl => {
            for c in &crossings {
                writeln!(body, "{}", json!({"b": b, "t_c": c.t, "branch": c.branch.name()}))?;
            }
        }
    }
    Ok(Output { body, ok: true })
}

fn validate(opts: &ValidationOptions, only: &[u32]) -> Output {
    let report = if only.is_empty() {
        run_validation(opts)
    } else {
        ValidationReport {
            checks: only.iter().filter_map(|&id| run_check(id, opts)).collect(),
        }
    };
    let mut s = String::new();
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "[{tag}] {:>2} {}: {} ({:.2} s)", c.id, c.name, c.detail, c.seconds);
    }
    let failed = report.failures().count();
    let _ = writeln!(
        s,
        "{} of {} checks passed",
        report.checks.len() - failed,
        report.checks.len()
    );
    Output {
        body: s.into_bytes(),
        ok: report.all_passed(),
    }
}
