use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use slabwell::oracle::fd_spectrum;
use slabwell::spectrum::{refine, scan, solve, EigenLevel, SolveOptions};
use slabwell::wavefun::reconstruct;
use slabwell::{parse_potential, partition, Discretization, PotentialSpec};

use crate::args::{Format, Reference, RunConfig};
use crate::output::{emit, json_real, Cell, Table};
use crate::CliError;

const MAX_WIDENINGS: usize = 40;
pub const DEFAULT_SOLVE_LEVELS: usize = 5;

pub fn spec_of(cfg: &RunConfig) -> Result<PotentialSpec, CliError> {
    Ok(parse_potential(&cfg.potential, cfg.walls.0, cfg.walls.1)?)
}

fn describe(cfg: &RunConfig, spec: &PotentialSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("potential".into(), Value::from(spec.shape().to_string()));
    m.insert("walls".into(), json!([json_real(cfg.walls.0), json_real(cfg.walls.1)]));
    m
}

/// The scan window: `--scan` if given, otherwise widened from the potential
/// minimum until at least `want` sign changes are bracketed.
fn window(disc: &Discretization, cfg: &RunConfig, want: usize) -> Result<(f64, f64), CliError> {
    if let Some(w) = cfg.scan {
        return Ok(w);
    }
    let lo = disc.min_potential();
    let length = disc.right() - disc.left();
    let mut span = PI * PI / (length * length) * (want.max(1) as f64 + 1.0).powi(2);
    for _ in 0..MAX_WIDENINGS {
        let hi = lo + span;
        let de = cfg.de.min(span / 4.0);
        if scan(disc, lo, hi, de)?.len() >= want {
            return Ok((lo, hi));
        }
        span *= 2.0;
    }
    Err(CliError::NotFound(format!(
        "fewer than {want} levels found above E = {lo}; pass --scan explicitly"
    )))
}

fn solve_window(disc: &Discretization, cfg: &RunConfig, window: (f64, f64)) -> Result<Vec<EigenLevel>, CliError> {
    let options = SolveOptions::new(window.0, window.1).with_de(cfg.de).with_tol(cfg.tol);
    Ok(solve(disc, &options)?)
}

fn warn_diagnostics(levels: &[EigenLevel]) {
    for level in levels {
        if let Some(d) = &level.diagnostic {
            eprintln!("warning: level {}: {d}", level.index);
        }
    }
}

fn reference_report(references: &[Reference], computed: &dyn Fn(usize) -> Option<f64>, what: &str) -> Value {
    let mut closest: Vec<Option<(usize, f64)>> = Vec::new();
    for (i, r) in references.iter().enumerate() {
        if let Some(e) = computed(r.index) {
            let d = (r.value - e).abs();
            if closest.len() <= r.index {
                closest.resize(r.index + 1, None);
            }
            if closest[r.index].is_none_or(|(_, best)| d < best) {
                closest[r.index] = Some((i, d));
            }
        }
    }
    Value::Array(
        references
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let e = computed(r.index);
                let best = closest.get(r.index).copied().flatten().map(|(j, _)| j == i);
                json!({
                    "index": r.index,
                    "label": r.label,
                    "value": json_real(r.value),
                    what: e.map_or(Value::Null, json_real),
                    "delta": e.map_or(Value::Null, |e| json_real(e - r.value)),
                    "closest": best,
                })
            })
            .collect(),
    )
}

fn print_references(report: &Value, what: &str) {
    for r in report.as_array().into_iter().flatten() {
        let mark = if r["closest"] == Value::Bool(true) { " (closest)" } else { "" };
        eprintln!(
            "reference level {}: {} = {}, {what} = {}, delta = {}{mark}",
            r["index"], r["label"].as_str().unwrap_or(""), r["value"], r[what], r["delta"]
        );
    }
}

fn spectrum_table(levels: &[EigenLevel]) -> Table {
    let mut t = Table::new([
        "index",
        "energy",
        "bracket_lo",
        "bracket_hi",
        "residual_shoot",
        "residual_B",
        "nodes",
    ]);
    for l in levels {
        t.push(vec![
            l.index.into(),
            l.energy.into(),
            l.bracket.0.into(),
            l.bracket.1.into(),
            l.residual_shoot.into(),
            l.residual_b.into(),
            l.nodes.into(),
        ]);
    }
    t
}

pub fn cmd_solve(cfg: &RunConfig, levels: Option<usize>, references: &[Reference]) -> Result<(), CliError> {
    let spec = spec_of(cfg)?;
    let disc = partition(&spec, cfg.n)?;
    let w = window(&disc, cfg, levels.unwrap_or(DEFAULT_SOLVE_LEVELS))?;
    let mut found = solve_window(&disc, cfg, w)?;
    if let Some(k) = levels {
        found.truncate(k);
    }
    warn_diagnostics(&found);
    let energy = |i: usize| found.get(i).map(|l| l.energy);
    let report = reference_report(references, &energy, "energy");
    let table = spectrum_table(&found);
    let text = match cfg.format {
        Format::Csv => {
            print_references(&report, "energy");
            table.to_csv()
        }
        Format::Json => {
            let mut rows = table.to_json_rows();
            for (row, level) in rows.as_array_mut().unwrap().iter_mut().zip(&found) {
                row["diagnostic"] = level.diagnostic.as_ref().map_or(Value::Null, |d| d.to_string().into());
            }
            let mut m = describe(cfg, &spec);
            m.insert("command".into(), "solve".into());
            m.insert("n".into(), cfg.n.into());
            m.insert("scan".into(), json!([json_real(w.0), json_real(w.1)]));
            m.insert("de".into(), json_real(cfg.de));
            m.insert("tol".into(), json_real(cfg.tol));
            m.insert("levels".into(), rows);
            m.insert("references".into(), report);
            json_text(m)
        }
    };
    emit(&text, cfg.out.as_deref())
}

pub fn cmd_wavefunction(cfg: &RunConfig, level: usize, points: usize) -> Result<(), CliError> {
    let spec = spec_of(cfg)?;
    let disc = partition(&spec, cfg.n)?;
    let w = window(&disc, cfg, level + 1).map_err(|e| match e {
        CliError::NotFound(_) => CliError::NotFound(format!("level {level} not found")),
        other => other,
    })?;
    let found = solve_window(&disc, cfg, w)?;
    let Some(target) = found.get(level) else {
        return Err(CliError::NotFound(format!(
            "level {level} not found: only {} levels in [{}, {}]",
            found.len(),
            w.0,
            w.1
        )));
    };
    let energy = refine(&disc, target.bracket, f64::MIN_POSITIVE)?.energy;
    let wf = reconstruct(&disc, energy, points)?;
    let mut table = Table::new(["x", "psi"]);
    for &(x, psi) in &wf.samples {
        table.push(vec![x.into(), psi.into()]);
    }
    let text = match cfg.format {
        Format::Csv => {
            eprintln!(
                "level {level}: energy = {}, nodes = {}, points = {}",
                crate::output::format_real(wf.energy),
                wf.nodes,
                wf.samples.len()
            );
            table.to_csv()
        }
        Format::Json => {
            let mut m = describe(cfg, &spec);
            m.insert("command".into(), "wavefunction".into());
            m.insert("n".into(), cfg.n.into());
            m.insert("level".into(), level.into());
            m.insert("energy".into(), json_real(wf.energy));
            m.insert("nodes".into(), wf.nodes.into());
            m.insert("norm_residual".into(), json_real(wf.norm_residual));
            m.insert("points".into(), wf.samples.len().into());
            m.insert("x".into(), wf.samples.iter().map(|s| json_real(s.0)).collect());
            m.insert("psi".into(), wf.samples.iter().map(|s| json_real(s.1)).collect());
            json_text(m)
        }
    };
    emit(&text, cfg.out.as_deref())
}

pub fn cmd_convergence(cfg: &RunConfig, n_values: &[usize], levels: Option<usize>) -> Result<(), CliError> {
    if n_values.is_empty() {
        return Err(CliError::Usage("--n-values must list at least one slab count".into()));
    }
    let spec = spec_of(cfg)?;
    let want = levels.unwrap_or(1);
    let mut energies = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let disc = partition(&spec, n)?;
        let w = window(&disc, cfg, want)?;
        let found = solve_window(&disc, cfg, w)?;
        warn_diagnostics(&found);
        energies.push(found.iter().map(|l| l.energy).collect::<Vec<f64>>());
    }
    let columns = levels.unwrap_or_else(|| energies.iter().map(Vec::len).max().unwrap_or(0));
    let mut header = vec!["n".to_string()];
    header.extend((0..columns).map(|p| format!("E{p}")));
    let mut table = Table::new(header);
    for (&n, row) in n_values.iter().zip(&energies) {
        let mut cells = vec![Cell::Int(n)];
        cells.extend((0..columns).map(|p| Cell::from(row.get(p).copied())));
        table.push(cells);
    }
    let text = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut m = describe(cfg, &spec);
            m.insert("command".into(), "convergence".into());
            m.insert("rows".into(), table.to_json_rows());
            json_text(m)
        }
    };
    emit(&text, cfg.out.as_deref())
}

pub struct OracleRequest<'a> {
    pub levels: usize,
    pub grid_points: usize,
    pub richardson: bool,
    pub compare: bool,
    pub references: &'a [Reference],
}

pub fn cmd_oracle(cfg: &RunConfig, req: &OracleRequest) -> Result<(), CliError> {
    let spec = spec_of(cfg)?;
    let result = fd_spectrum(&spec, req.grid_points, req.levels, req.richardson)?;
    let best = result.best().to_vec();
    let solver = if req.compare {
        let disc = partition(&spec, cfg.n)?;
        let w = cfg.scan.unwrap_or_else(|| {
            let last = best[best.len() - 1];
            let gap = if best.len() > 1 { last - best[best.len() - 2] } else { last.abs().max(1.0) };
            (disc.min_potential(), last + 0.5 * gap)
        });
        let found = solve_window(&disc, cfg, w)?;
        warn_diagnostics(&found);
        Some(found.into_iter().map(|l| l.energy).collect::<Vec<f64>>())
    } else {
        None
    };

    let mut header = vec!["index"];
    if req.richardson {
        header.extend(["oracle_coarse", "oracle_fine"]);
    }
    header.push("oracle");
    if solver.is_some() {
        header.extend(["solver", "delta"]);
    }
    let mut table = Table::new(header);
    for (i, &e) in best.iter().enumerate() {
        let mut row = vec![Cell::Int(i)];
        if let Some(r) = &result.richardson {
            row.extend([Cell::Real(result.eigenvalues[i]), Cell::Real(r.fine[i])]);
        }
        row.push(Cell::Real(e));
        if let Some(s) = &solver {
            let value = s.get(i).copied();
            row.extend([Cell::from(value), Cell::from(value.map(|v| v - e))]);
        }
        table.push(row);
    }

    let oracle_at = |i: usize| best.get(i).copied();
    let report = reference_report(req.references, &oracle_at, "oracle");
    let text = match cfg.format {
        Format::Csv => {
            print_references(&report, "oracle");
            table.to_csv()
        }
        Format::Json => {
            let mut m = describe(cfg, &spec);
            m.insert("command".into(), "oracle".into());
            m.insert("grid_points".into(), result.grid_points.into());
            if let Some(r) = &result.richardson {
                m.insert("fine_grid_points".into(), r.fine_grid_points.into());
            }
            if solver.is_some() {
                m.insert("n".into(), cfg.n.into());
                let max_delta = table
                    .rows
                    .iter()
                    .filter_map(|row| match row.last() {
                        Some(Cell::Real(d)) => Some(d.abs()),
                        _ => None,
                    })
                    .fold(0.0, f64::max);
                m.insert("max_abs_delta".into(), json_real(max_delta));
            }
            m.insert("levels".into(), table.to_json_rows());
            m.insert("references".into(), report);
            json_text(m)
        }
    };
    emit(&text, cfg.out.as_deref())
}

fn json_text(m: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("JSON values are finite");
    s.push('\n');
    s
}
