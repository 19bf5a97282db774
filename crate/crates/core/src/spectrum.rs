//! Eigenvalue search: sign scan over an energy grid, bisection of every
//! sign change, and a node-count audit of the result.

use rayon::prelude::*;

use crate::error::{validation, Error, Result};
use crate::grid::Discretization;
use crate::quantify::{quantification, shoot_sign, QuantValue};
use crate::wavefun::reconstruct;

pub const DEFAULT_DE: f64 = 0.005;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Refinement factor of the one-time rescan after a failed node audit.
const RESCAN_FACTOR: f64 = 10.0;
/// Upper bound on scan grid size.
const MAX_SCAN_POINTS: usize = 50_000_000;

/// Sign of the quantification function at `e`: -1, 0 or +1.
pub fn sign_of(disc: &Discretization, e: f64) -> i8 {
    shoot_sign(disc, e)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LevelDiagnostic {
    /// Interior node count differs from the level index even after a rescan.
    NodeMismatch { expected: usize, found: usize },
    /// The eigenfunction could not be rebuilt for the audit.
    Reconstruction(String),
}

impl std::fmt::Display for LevelDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LevelDiagnostic::NodeMismatch { expected, found } => {
                write!(f, "eigenfunction has {found} nodes, expected {expected}")
            }
            LevelDiagnostic::Reconstruction(message) => write!(f, "reconstruction failed: {message}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenLevel {
    pub index: usize,
    pub energy: f64,
    /// Final bisection bracket.
    pub bracket: (f64, f64),
    /// Bracket handed to [`refine`].
    pub search_bracket: (f64, f64),
    /// `|psi(b; E)|` relative to the larger of its search-bracket endpoint values.
    pub residual_shoot: f64,
    /// `|B_n(E)|` relative to the larger of its search-bracket endpoint values.
    pub residual_b: f64,
    pub nodes: Option<usize>,
    pub diagnostic: Option<LevelDiagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub e_min: f64,
    pub e_max: f64,
    pub de: f64,
    pub tol: f64,
    /// Output grid for the node audit; chosen from the problem when `None`.
    pub audit_points: Option<usize>,
}

impl SolveOptions {
    pub fn new(e_min: f64, e_max: f64) -> Self {
        Self {
            e_min,
            e_max,
            de: DEFAULT_DE,
            tol: DEFAULT_TOL,
            audit_points: None,
        }
    }

    pub fn with_de(mut self, de: f64) -> Self {
        self.de = de;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_scan(self.e_min, self.e_max, self.de)?;
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(validation("tol", format!("tolerance must be > 0, got {}", self.tol)));
        }
        if let Some(p) = self.audit_points {
            if p < 2 {
                return Err(validation("points", "audit grid needs at least 2 points"));
            }
        }
        Ok(())
    }
}

fn check_scan(e_min: f64, e_max: f64, de: f64) -> Result<usize> {
    if !(e_min.is_finite() && e_max.is_finite() && e_min < e_max) {
        return Err(validation(
            "scan",
            format!("need finite E_min < E_max, got [{e_min}, {e_max}]"),
        ));
    }
    if !(de.is_finite() && de > 0.0) {
        return Err(validation("de", format!("energy step must be > 0, got {de}")));
    }
    let cells = ((e_max - e_min) / de).ceil();
    if cells.is_nan() || cells >= MAX_SCAN_POINTS as f64 {
        return Err(validation("de", format!("energy step {de} gives too many scan points")));
    }
    Ok((cells as usize).max(1))
}

/// Brackets every sign change of [`sign_of`] on the grid `E_min, E_min + dE, ..., E_max`.
///
/// Two roots inside one grid cell cancel and go unnoticed here; [`solve`]
/// catches that case through the node audit.
pub fn scan(disc: &Discretization, e_min: f64, e_max: f64, de: f64) -> Result<Vec<Bracket>> {
    let cells = check_scan(e_min, e_max, de)?;
    let energies: Vec<f64> = (0..=cells)
        .map(|k| if k == cells { e_max } else { e_min + k as f64 * de })
        .collect();
    let signs: Vec<i8> = energies.par_iter().map(|&e| sign_of(disc, e)).collect();

    let mut brackets = Vec::new();
    let mut previous: Option<usize> = None;
    for k in 0..energies.len() {
        match signs[k] {
            0 => {
                brackets.push(Bracket {
                    lo: energies[k.saturating_sub(1)],
                    hi: energies[(k + 1).min(cells)],
                });
                previous = None;
            }
            s => {
                if let Some(j) = previous {
                    if signs[j] != s {
                        brackets.push(Bracket {
                            lo: energies[j],
                            hi: energies[k],
                        });
                    }
                }
                previous = Some(k);
            }
        }
    }
    Ok(brackets)
}

/// Bisects `bracket` down to width `tol`.
pub fn refine(disc: &Discretization, bracket: (f64, f64), tol: f64) -> Result<EigenLevel> {
    let (lo0, hi0) = bracket;
    if !(lo0.is_finite() && hi0.is_finite() && lo0 < hi0) {
        return Err(validation("bracket", format!("need lo < hi, got [{lo0}, {hi0}]")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(validation("tol", format!("tolerance must be > 0, got {tol}")));
    }
    let s_lo = sign_of(disc, lo0);
    let s_hi = sign_of(disc, hi0);
    if s_lo == s_hi {
        return Err(Error::InvalidBracket {
            lo: lo0,
            hi: hi0,
            sign_lo: s_lo,
            sign_hi: s_hi,
        });
    }

    let (mut lo, mut hi) = (lo0, hi0);
    let energy = if s_lo == 0 {
        hi = lo + tol.min(hi - lo);
        lo
    } else if s_hi == 0 {
        lo = hi - tol.min(hi - lo);
        hi
    } else {
        loop {
            if hi - lo <= tol {
                break 0.5 * (lo + hi);
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break mid;
            }
            match sign_of(disc, mid) {
                0 => {
                    lo = (mid - 0.5 * tol).max(lo);
                    hi = (mid + 0.5 * tol).min(hi);
                    break mid;
                }
                s if s == s_lo => lo = mid,
                _ => hi = mid,
            }
        }
    };

    let at = quantification(disc, energy);
    let ends = [quantification(disc, lo0), quantification(disc, hi0)];
    Ok(EigenLevel {
        index: 0,
        energy,
        bracket: (lo, hi),
        search_bracket: (lo0, hi0),
        residual_shoot: relative(at.ln_abs_shoot(), &ends, QuantValue::ln_abs_shoot),
        residual_b: relative(at.ln_abs_b(), &ends, QuantValue::ln_abs_b),
        nodes: None,
        diagnostic: None,
    })
}

fn relative(ln_at: f64, ends: &[QuantValue; 2], ln_of: fn(&QuantValue) -> f64) -> f64 {
    let reference = ln_of(&ends[0]).max(ln_of(&ends[1]));
    if ln_at == f64::NEG_INFINITY {
        0.0
    } else {
        (ln_at - reference).exp()
    }
}

/// Output grid fine enough to resolve every oscillation below `e`.
fn audit_points(disc: &Discretization, e: f64) -> usize {
    let span = disc.right() - disc.left();
    let depth = (e - disc.min_potential()).max(0.0);
    let by_wavelength = (4.0 * span * depth.sqrt() / std::f64::consts::PI).ceil() as usize + 1;
    by_wavelength.max(4 * disc.slab_count() + 1).max(2001)
}

/// Scan, refine, sort, index and audit the spectrum inside `[E_min, E_max]`.
pub fn solve(disc: &Discretization, options: &SolveOptions) -> Result<Vec<EigenLevel>> {
    options.validate()?;
    let brackets = scan(disc, options.e_min, options.e_max, options.de)?;
    let mut levels = refine_all(disc, &brackets, options.tol)?;
    normalize(&mut levels, options.tol);
    audit(disc, &mut levels, options);

    if let Some(p) = levels.iter().position(|l| l.nodes != Some(l.index)) {
        let lower = if p == 0 {
            options.e_min
        } else {
            levels[p - 1].bracket.1
        };
        let upper = levels[p].search_bracket.1;
        if upper > lower {
            let extra: Vec<Bracket> = scan(disc, lower, upper, options.de / RESCAN_FACTOR)?
                .into_iter()
                .filter(|b| !levels.iter().any(|l| b.lo <= l.energy && l.energy <= b.hi))
                .collect();
            if !extra.is_empty() {
                levels.extend(refine_all(disc, &extra, options.tol)?);
                normalize(&mut levels, options.tol);
                audit(disc, &mut levels, options);
            }
        }
    }

    for level in &mut levels {
        if level.diagnostic.is_none() {
            if let Some(found) = level.nodes.filter(|&n| n != level.index) {
                level.diagnostic = Some(LevelDiagnostic::NodeMismatch {
                    expected: level.index,
                    found,
                });
            }
        }
    }
    Ok(levels)
}

fn refine_all(disc: &Discretization, brackets: &[Bracket], tol: f64) -> Result<Vec<EigenLevel>> {
    brackets
        .par_iter()
        .map(|b| refine(disc, (b.lo, b.hi), tol))
        .collect()
}

fn normalize(levels: &mut Vec<EigenLevel>, tol: f64) {
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    levels.dedup_by(|later, earlier| later.energy - earlier.energy <= tol);
    for (i, level) in levels.iter_mut().enumerate() {
        level.index = i;
    }
}

fn audit(disc: &Discretization, levels: &mut [EigenLevel], options: &SolveOptions) {
    levels.par_iter_mut().for_each(|level| {
        let points = options
            .audit_points
            .unwrap_or_else(|| audit_points(disc, level.energy));
        match reconstruct(disc, level.energy, points) {
            Ok(wf) => {
                level.nodes = Some(wf.nodes);
                level.diagnostic = None;
            }
            Err(err) => {
                level.nodes = None;
                level.diagnostic = Some(LevelDiagnostic::Reconstruction(err.to_string()));
            }
        }
    });
}
