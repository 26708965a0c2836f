use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use casimir_core::asymptotics::{
    long_cylinder_scan, log_space, plate_cutoff_integral, plate_pressure, power_law_regime, LongCylinderParams,
    DEFAULT_LONG_CYLINDER_TRUNCATION,
};
use casimir_core::cavity::{checkpoint_force_sums, ForceSums};
use casimir_core::constants::{HBAR_C, REFERENCE_CUTOFF_WAVENUMBER, REFERENCE_OMEGA_P, REFERENCE_RADIUS};
use casimir_core::specfun::cache::{cache_file_name, CACHE_DIR_ENV};
use casimir_core::specfun::{build_zero_table_with, BesselZeroTable, CacheOutcome};
use casimir_core::sum_engine::{convergence_ratio, DEFAULT_CHECKPOINTS};
use casimir_core::vacuum::{
    cutoff_number, free_vacuum_energy, free_vacuum_energy_integral, plate_energy_per_area,
    solve_alpha_for_unit_cutoff, FreeSpaceExtent, UncertaintyConstant,
};
use casimir_core::{Exec, VERSION};
use serde_json::{json, Value};

use crate::config::{ConfigFile, List};
use crate::output::{emit, fmt_f64, Constants, Csv, Format, Report};
use crate::{Cli, CliError, ForceArgs, FreeEnergyArgs, LongCylinderArgs, PlateEnergyArgs, PlatesArgs, TableArgs, ZerosArgs};

/// Speed used by default to turn a plasma frequency into a cutoff
/// wavenumber. With it the reference parameter set gives `y_p = 10/3`.
const DEFAULT_CUTOFF_C: f64 = 3e8;

pub struct Context {
    cfg: ConfigFile,
    format: Format,
    out: Option<PathBuf>,
    cache_dir: Option<PathBuf>,
}

impl Context {
    pub fn new(cli: &Cli, cfg: ConfigFile) -> Result<Self, CliError> {
        let format = cfg.pick(cli.format, "format", Format::Csv)?;
        let cache_dir = match cfg.pick_opt(cli.cache_dir.clone(), "cache_dir")? {
            Some(dir) => Some(dir),
            None => std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()).map(PathBuf::from),
        };
        Ok(Self {
            cfg,
            format,
            out: cli.out.clone(),
            cache_dir,
        })
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        emit(text, self.out.as_deref())
    }

    fn report(&self, command: &str, config: BTreeMap<String, Value>, cutoff_c: f64, results: Value, zeros: Option<&BesselZeroTable>) -> Result<(), CliError> {
        let mut checksums = BTreeMap::new();
        if let Some(t) = zeros {
            checksums.insert("zero_table".to_string(), t.checksum());
        }
        let report = Report {
            version: VERSION,
            command: command.to_string(),
            config,
            constants: Constants::new(cutoff_c),
            results,
            checksums,
        };
        self.emit(&report.to_json())
    }

    fn cache_path(&self, max_order: u32, max_index: u32) -> Result<Option<PathBuf>, CliError> {
        let Some(dir) = &self.cache_dir else {
            return Ok(None);
        };
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Compute(format!("cannot create cache directory {}: {e}", dir.display())))?;
        Ok(Some(dir.join(cache_file_name(max_order, max_index))))
    }

    fn zeros(&self, max_order: u32, max_index: u32) -> Result<(BesselZeroTable, CacheOutcome, Option<PathBuf>), CliError> {
        let path = self.cache_path(max_order, max_index)?;
        let (table, outcome) = build_zero_table_with(max_order, max_index, path.as_deref(), Exec::default())?;
        if let CacheOutcome::Recomputed { reason } = &outcome {
            eprintln!(
                "warning: zero cache {} was invalid ({reason}); recomputed",
                path.as_deref().map(Path::display).map(|d| d.to_string()).unwrap_or_default()
            );
        }
        Ok((table, outcome, path))
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive and finite, got {v}")))
    }
}

fn outcome_name(o: &CacheOutcome) -> &'static str {
    match o {
        CacheOutcome::Uncached => "uncached",
        CacheOutcome::Loaded => "loaded",
        CacheOutcome::Computed => "computed",
        CacheOutcome::Extended => "extended",
        CacheOutcome::Recomputed { .. } => "recomputed",
    }
}

pub fn zeros(ctx: &Context, args: &ZerosArgs) -> Result<(), CliError> {
    let max_order = ctx.cfg.pick(args.max_order, "max_order", 500)?;
    let max_index = ctx.cfg.pick(args.max_index, "max_index", 500)?;
    if ctx.cache_dir.is_none() {
        return Err(CliError::Usage(format!("no cache location: pass --cache-dir or set {CACHE_DIR_ENV}")));
    }
    let (table, outcome, path) = ctx.zeros(max_order, max_index)?;
    table.validate()?;
    let first = table.zero(0, 1);
    let last = table.zero(max_order, max_index);
    let path = path.map(|p| p.display().to_string()).unwrap_or_default();
    match ctx.format {
        Format::Json => {
            let config = BTreeMap::from([
                ("max_order".to_string(), json!(max_order)),
                ("max_index".to_string(), json!(max_index)),
            ]);
            let results = json!({
                "count": table.len(),
                "accuracy": table.accuracy(),
                "first_zero": first,
                "last_zero": last,
                "cache_file": path,
                "cache": outcome_name(&outcome),
            });
            ctx.report("zeros", config, DEFAULT_CUTOFF_C, results, Some(&table))
        }
        Format::Csv => {
            let text = format!(
                "zeros: {} (m <= {max_order}, n <= {max_index})\naccuracy: {:e}\nchecksum: {}\ncache: {path} ({})\nx(0,1) = {first:.6}\nx({max_order},{max_index}) = {last:.6}\n",
                table.len(),
                table.accuracy(),
                table.checksum(),
                outcome_name(&outcome),
            );
            ctx.emit(&text)
        }
    }
}

/// `y_p` from exactly one of `--y-p` or `--a` with `--omega-p`; the
/// reference parameter set when neither is given. Command-line values
/// replace the whole group from the config file.
fn resolve_y_p(ctx: &Context, args: &TableArgs, cutoff_c: f64) -> Result<(f64, BTreeMap<String, Value>), CliError> {
    let from_flags = args.y_p.is_some() || args.a.is_some() || args.omega_p.is_some();
    let (y_p, a, omega_p) = if from_flags {
        (args.y_p, args.a, args.omega_p)
    } else {
        (ctx.cfg.get("y_p")?, ctx.cfg.get("a")?, ctx.cfg.get("omega_p")?)
    };
    let mut config = BTreeMap::new();
    let y_p = match (y_p, a, omega_p) {
        (Some(y), None, None) => positive("y_p", y)?,
        (None, Some(a), Some(w)) => {
            config.insert("a".to_string(), json!(a));
            config.insert("omega_p".to_string(), json!(w));
            positive("omega_p", w)? / cutoff_c * positive("a", a)?
        }
        (None, None, None) => {
            config.insert("a".to_string(), json!(REFERENCE_RADIUS));
            config.insert("omega_p".to_string(), json!(REFERENCE_OMEGA_P));
            REFERENCE_OMEGA_P / cutoff_c * REFERENCE_RADIUS
        }
        _ => return Err(CliError::Usage("give either --y-p or both --a and --omega-p".into())),
    };
    config.insert("y_p".to_string(), json!(y_p));
    Ok((y_p, config))
}

pub fn table(ctx: &Context, args: &TableArgs) -> Result<(), CliError> {
    let alpha = positive("alpha", ctx.cfg.pick(args.alpha, "alpha", 1.0)?)?;
    let cutoff_c = positive("cutoff_c", ctx.cfg.pick(args.cutoff_c, "cutoff_c", DEFAULT_CUTOFF_C)?)?;
    let (y_p, mut config) = resolve_y_p(ctx, args, cutoff_c)?;
    let checkpoints = ctx
        .cfg
        .pick(args.checkpoints.clone(), "checkpoints", List(DEFAULT_CHECKPOINTS.to_vec()))?
        .0;
    casimir_core::sum_engine::validate_checkpoints(&checkpoints)?;
    let k = u32::try_from(*checkpoints.last().unwrap())
        .map_err(|_| CliError::Usage("checkpoint too large".into()))?;
    let (zeros, _, _) = ctx.zeros(k, k)?;
    let report = checkpoint_force_sums(alpha, y_p, &checkpoints, &zeros)?;
    config.insert("alpha".to_string(), json!(alpha));
    config.insert("checkpoints".to_string(), json!(checkpoints));
    config.insert("cutoff_c".to_string(), json!(cutoff_c));
    eprintln!("alpha = {alpha}, y_p = {y_p}, k <= {k}");
    match ctx.format {
        Format::Csv => {
            let mut csv = Csv::new(&["k", "I_a", "I_b"]);
            for (i, k) in report.checkpoints.iter().enumerate() {
                csv.row(&[k.to_string(), fmt_f64(report.values_a[i]), fmt_f64(report.values_b[i])]);
            }
            ctx.emit(&csv.into_string())
        }
        Format::Json => {
            let rows: Vec<Value> = report
                .checkpoints
                .iter()
                .enumerate()
                .map(|(i, k)| json!({"k": k, "I_a": report.values_a[i], "I_b": report.values_b[i]}))
                .collect();
            ctx.report("table", config, cutoff_c, json!({ "rows": rows }), Some(&zeros))
        }
    }
}

pub fn force(ctx: &Context, args: &ForceArgs) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let a = positive("a", cfg.pick(args.a, "a", REFERENCE_RADIUS)?)?;
    let b = positive("b", cfg.pick(args.b, "b", REFERENCE_RADIUS)?)?;
    let k = cfg.pick(args.k, "k", 500)?;
    if k < 2 {
        return Err(CliError::Usage("k must be at least 2 to form the ratio to k - 1".into()));
    }
    let cutoff_c = positive("cutoff_c", cfg.pick(args.cutoff_c, "cutoff_c", DEFAULT_CUTOFF_C)?)?;
    let from_flags = args.omega_p.is_some() || args.cutoff_wavenumber.is_some();
    let (omega_p, wavenumber) = if from_flags {
        (args.omega_p, args.cutoff_wavenumber)
    } else {
        (cfg.get("omega_p")?, cfg.get("cutoff_wavenumber")?)
    };
    let mut config = BTreeMap::new();
    let u_p = match (omega_p, wavenumber) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --omega-p or --cutoff-wavenumber".into())),
        (None, Some(u)) => positive("cutoff_wavenumber", u)?,
        (w, None) => {
            let w = positive("omega_p", w.unwrap_or(REFERENCE_OMEGA_P))?;
            config.insert("omega_p".to_string(), json!(w));
            w / cutoff_c
        }
    };
    let y_p = u_p * a;
    let alpha = a / b;
    let (zeros, _, _) = ctx.zeros(k, k)?;
    let report = checkpoint_force_sums(alpha, y_p, &[k as usize - 1, k as usize], &zeros)?;
    let forces_at = |kk: u32| -> Result<(f64, f64), CliError> {
        let (i_a, i_b) = report.value(kk as usize)?;
        let f = ForceSums { i_a, i_b }.to_forces(a);
        Ok((f.radial, f.axial))
    };
    let (fa_prev, fb_prev) = forces_at(k - 1)?;
    let (fa, fb) = forces_at(k)?;
    let (ratio_a, ratio_b) = convergence_ratio(&report, k as usize, k as usize - 1)?;
    eprintln!("F_a({k}) = {:.6} nN, F_b({k}) = {:.6} nN", fa * 1e9, fb * 1e9);
    eprintln!("F_a({k})/F_a({}) = {ratio_a:.6}, F_b({k})/F_b({}) = {ratio_b:.6}", k - 1, k - 1);
    for (key, v) in [("a", json!(a)), ("b", json!(b)), ("k", json!(k)), ("cutoff_c", json!(cutoff_c))] {
        config.insert(key.to_string(), v);
    }
    config.insert("cutoff_wavenumber".to_string(), json!(u_p));
    config.insert("y_p".to_string(), json!(y_p));
    match ctx.format {
        Format::Csv => {
            let mut csv = Csv::new(&["k", "F_a", "F_b"]);
            csv.row(&[(k - 1).to_string(), fmt_f64(fa_prev), fmt_f64(fb_prev)]);
            csv.row(&[k.to_string(), fmt_f64(fa), fmt_f64(fb)]);
            ctx.emit(&csv.into_string())
        }
        Format::Json => {
            let results = json!({
                "rows": [
                    {"k": k - 1, "F_a": fa_prev, "F_b": fb_prev},
                    {"k": k, "F_a": fa, "F_b": fb},
                ],
                "ratio_a": ratio_a,
                "ratio_b": ratio_b,
                "unit": "N",
            });
            ctx.report("force", config, cutoff_c, results, Some(&zeros))
        }
    }
}

pub fn long_cylinder(ctx: &Context, args: &LongCylinderArgs) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let lambda_p = positive("lambda_p", cfg.pick(args.lambda_p, "lambda_p", REFERENCE_CUTOFF_WAVENUMBER)?)?;
    let trunc = cfg.pick(args.truncation, "truncation", DEFAULT_LONG_CYLINDER_TRUNCATION)?;
    let points = cfg.pick(args.points, "points", 11)?;
    if points < 3 {
        return Err(CliError::Usage("need at least 3 points for a slope fit".into()));
    }
    let (zeros, _, _) = ctx.zeros(trunc, trunc.max(1))?;
    let base = LongCylinderParams::new(REFERENCE_RADIUS, lambda_p, trunc, trunc.max(1))?;
    let a_min = cfg.pick_opt(args.a_min, "a_min")?;
    let a_max = cfg.pick_opt(args.a_max, "a_max")?;
    let radii = match (a_min, a_max) {
        (None, None) => power_law_regime(&base, &zeros, points)?,
        (Some(lo), hi) => {
            let lo = positive("a_min", lo)?;
            let hi = positive("a_max", hi.unwrap_or(10.0 * lo))?;
            if hi <= lo {
                return Err(CliError::Usage("a_max must exceed a_min".into()));
            }
            log_space(lo, hi, points)
        }
        (None, Some(_)) => return Err(CliError::Usage("a_max needs a_min".into())),
    };
    let scan = long_cylinder_scan(&base, &radii, &zeros)?;
    eprintln!(
        "fitted exponent {:.6} over a in [{:e}, {:e}] m",
        scan.fitted_slope,
        radii[0],
        radii[radii.len() - 1]
    );
    match ctx.format {
        Format::Csv => {
            let mut csv = Csv::new(&["a", "F_per_b", "slope"]);
            for p in &scan.points {
                csv.row(&[fmt_f64(p.a), fmt_f64(p.force_per_length), fmt_f64(p.local_slope)]);
            }
            ctx.emit(&csv.into_string())
        }
        Format::Json => {
            let config = BTreeMap::from([
                ("lambda_p".to_string(), json!(lambda_p)),
                ("truncation".to_string(), json!(trunc)),
                ("points".to_string(), json!(points)),
                ("a_min".to_string(), json!(radii[0])),
                ("a_max".to_string(), json!(radii[radii.len() - 1])),
            ]);
            let rows: Vec<Value> = scan
                .points
                .iter()
                .map(|p| json!({"a": p.a, "F_per_b": p.force_per_length, "slope": p.local_slope}))
                .collect();
            let results = json!({ "fitted_slope": scan.fitted_slope, "points": rows });
            ctx.report("asym long-cylinder", config, DEFAULT_CUTOFF_C, results, Some(&zeros))
        }
    }
}

pub fn plates(ctx: &Context, args: &PlatesArgs) -> Result<(), CliError> {
    let ps = ctx
        .cfg
        .pick(args.p.clone(), "p", List(vec![0.1, 0.5, 1.0, 2.0, 5.0, 10.0]))?
        .0;
    let b = positive("b", ctx.cfg.pick(args.b, "b", REFERENCE_RADIUS)?)?;
    let mut rows = Vec::with_capacity(ps.len());
    eprintln!("p, pressure(b), pressure(2b), ratio  (b = {b:e} m, units of the omitted prefactor)");
    for &p in &ps {
        let i_p = plate_cutoff_integral(positive("p", p)?)?;
        let (p1, p2) = (plate_pressure(b, p)?, plate_pressure(2.0 * b, p)?);
        eprintln!("{p}, {p1:e}, {p2:e}, {}", p2 / p1);
        rows.push((p, i_p, p1, p2));
    }
    match ctx.format {
        Format::Csv => {
            let mut csv = Csv::new(&["p", "I_p"]);
            for (p, i_p, _, _) in &rows {
                csv.row(&[fmt_f64(*p), fmt_f64(*i_p)]);
            }
            ctx.emit(&csv.into_string())
        }
        Format::Json => {
            let config = BTreeMap::from([("p".to_string(), json!(ps)), ("b".to_string(), json!(b))]);
            let rows: Vec<Value> = rows
                .iter()
                .map(|(p, i_p, p1, p2)| {
                    json!({"p": p, "I_p": i_p, "pressure_b": p1, "pressure_2b": p2, "ratio": p2 / p1})
                })
                .collect();
            ctx.report("asym plates", config, DEFAULT_CUTOFF_C, json!({ "rows": rows }), None)
        }
    }
}

fn alpha_or_root(ctx: &Context, flag: Option<f64>) -> Result<f64, CliError> {
    match ctx.cfg.pick_opt(flag, "alpha_u")? {
        Some(a) => Ok(a),
        None => Ok(solve_alpha_for_unit_cutoff()?),
    }
}

pub fn alpha_solve(ctx: &Context) -> Result<(), CliError> {
    let root = solve_alpha_for_unit_cutoff()?;
    let residual = cutoff_number(root)? - 1.0;
    eprintln!("alpha* = {root:.9}, I(alpha*) - 1 = {residual:e}");
    match ctx.format {
        Format::Csv => {
            let mut csv = Csv::new(&["alpha", "residual"]);
            csv.row(&[fmt_f64(root), fmt_f64(residual)]);
            ctx.emit(&csv.into_string())
        }
        Format::Json => ctx.report(
            "vacuum alpha-solve",
            BTreeMap::new(),
            DEFAULT_CUTOFF_C,
            json!({"alpha": root, "residual": residual}),
            None,
        ),
    }
}

pub fn free_energy(ctx: &Context, args: &FreeEnergyArgs) -> Result<(), CliError> {
    let alpha_u = UncertaintyConstant::new(alpha_or_root(ctx, args.alpha_u)?)?;
    let extent = FreeSpaceExtent::new(ctx.cfg.pick(args.extent, "extent", 1e-6)?)?;
    let closed = free_vacuum_energy(alpha_u, extent);
    let integral = if extent.value().is_infinite() {
        0.0
    } else {
        free_vacuum_energy_integral(alpha_u, extent)?
    };
    eprintln!("closed form {closed:e}, integral {integral:e}");
    match ctx.format {
        Format::Csv => {
            let mut csv = Csv::new(&["alpha", "D", "closed_form", "integral"]);
            csv.row(&[fmt_f64(alpha_u.value()), fmt_f64(extent.value()), fmt_f64(closed), fmt_f64(integral)]);
            ctx.emit(&csv.into_string())
        }
        Format::Json => {
            let config = BTreeMap::from([
                ("alpha_u".to_string(), json!(alpha_u.value())),
                ("extent".to_string(), if extent.value().is_infinite() { json!("inf") } else { json!(extent.value()) }),
            ]);
            ctx.report(
                "vacuum free-energy",
                config,
                DEFAULT_CUTOFF_C,
                json!({"closed_form": closed, "integral": integral}),
                None,
            )
        }
    }
}

pub fn plate_energy(ctx: &Context, args: &PlateEnergyArgs) -> Result<(), CliError> {
    let d = positive("d", ctx.cfg.pick(args.d, "d", REFERENCE_RADIUS)?)?;
    let alpha_u = UncertaintyConstant::new(alpha_or_root(ctx, args.alpha_u)?)?;
    let e = plate_energy_per_area(d, alpha_u)?;
    let coefficient = e.via_cutoff_number * d.powi(3) / HBAR_C;
    eprintln!(
        "E = {:e} J/m^2 (cutoff number), {:e} J/m^2 (direct); E d^3/(hbar c) = {coefficient:.9}",
        e.via_cutoff_number, e.via_direct_integral
    );
    match ctx.format {
        Format::Csv => {
            let mut csv = Csv::new(&["d", "alpha", "via_cutoff_number", "via_direct_integral", "coefficient"]);
            csv.row(&[
                fmt_f64(d),
                fmt_f64(alpha_u.value()),
                fmt_f64(e.via_cutoff_number),
                fmt_f64(e.via_direct_integral),
                fmt_f64(coefficient),
            ]);
            ctx.emit(&csv.into_string())
        }
        Format::Json => {
            let config = BTreeMap::from([("d".to_string(), json!(d)), ("alpha_u".to_string(), json!(alpha_u.value()))]);
            let results = json!({
                "via_cutoff_number": e.via_cutoff_number,
                "via_direct_integral": e.via_direct_integral,
                "coefficient": coefficient,
            });
            ctx.report("vacuum plate-energy", config, DEFAULT_CUTOFF_C, results, None)
        }
    }
}
