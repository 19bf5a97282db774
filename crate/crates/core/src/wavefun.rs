//! Eigenfunction reconstruction at a solved energy.
//!
//! The boundary states `(psi, psi')` are propagated inwards from both walls
//! and joined at the right edge of the outermost classically allowed slab,
//! so neither pass runs through a forbidden region in its growing direction.
//! Each slab then gets the coefficients of its exponential solution, written
//! in local coordinates `t = x - x_i`:
//!
//! ```text
//! psi_i(x) = X_i e^{k_i t} + Y_i e^{-k_i t},    k_i = sqrt(V_i - E)
//! ```
//!
//! times a per-slab factor `exp(log_scale)`.

use num_complex::Complex64;

use crate::error::{validation, Error, Result};
use crate::grid::Discretization;
use crate::quantify::{is_degenerate, wavenumber, RealState};

/// Largest allowed relative mismatch between the two propagation passes.
pub const STALE_ENERGY_TOL: f64 = 1e-6;
/// Largest tolerated imaginary part of a sample relative to `max |psi|`.
pub const IMAGINARY_TOL: f64 = 1e-10;
/// Samples below this fraction of `max |psi|` do not take part in node counting.
pub const NODE_DEAD_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlabWave {
    Exponential {
        k: Complex64,
        x: Complex64,
        y: Complex64,
    },
    /// `V_i == E` to within the degeneracy band: value and slope at the
    /// left edge, with `q = V_i - E` for the series correction.
    Linear { value: f64, slope: f64, q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabCoefficients {
    pub wave: SlabWave,
    pub log_scale: f64,
}

impl SlabCoefficients {
    fn from_state(v: f64, e: f64, state: &RealState) -> Self {
        let wave = if is_degenerate(v, e) {
            SlabWave::Linear {
                value: state.psi,
                slope: state.dpsi,
                q: v - e,
            }
        } else {
            let k = wavenumber(v, e);
            let slope_over_k = state.dpsi / k;
            SlabWave::Exponential {
                k,
                x: 0.5 * (state.psi + slope_over_k),
                y: 0.5 * (state.psi - slope_over_k),
            }
        };
        Self {
            wave,
            log_scale: state.log_scale,
        }
    }

    /// `(psi, psi', extra log scale)` at local offset `t`.
    fn eval(&self, t: f64) -> (Complex64, Complex64, f64) {
        match self.wave {
            SlabWave::Exponential { k, x, y } => {
                let kt = k * t;
                let g = kt.re;
                let grow = x * (kt - g).exp();
                let decay = y * (-kt - g).exp();
                (grow + decay, k * (grow - decay), g)
            }
            SlabWave::Linear { value, slope, q } => {
                let t2 = t * t;
                let psi = value * (1.0 + 0.5 * q * t2) + slope * t * (1.0 + q * t2 / 6.0);
                let dpsi = value * q * t + slope * (1.0 + 0.5 * q * t2);
                (psi.into(), dpsi.into(), 0.0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionTable {
    pub energy: f64,
    pub coefficients: Vec<SlabCoefficients>,
    /// `(x, psi)` on a uniform grid including both walls, L2-normalized.
    pub samples: Vec<(f64, f64)>,
    pub requested_points: usize,
    /// `|simpson(psi^2) - 1|`
    pub norm_residual: f64,
    pub nodes: usize,
    /// Worst relative jump of `psi` or `psi'` across an interior slab boundary.
    pub continuity_residual: f64,
    /// Relative disagreement of the two propagation passes at the join.
    pub matching_mismatch: f64,
    /// Boundary index where the passes were joined.
    pub matching_boundary: usize,
}

impl WavefunctionTable {
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max)
    }
}

/// Reconstructs, samples and normalizes the eigenfunction at energy `e`.
pub fn reconstruct(disc: &Discretization, e: f64, out_points: usize) -> Result<WavefunctionTable> {
    if out_points < 2 {
        return Err(validation("points", format!("need at least 2 output points, got {out_points}")));
    }
    if !e.is_finite() {
        return Err(validation("energy", "energy must be finite"));
    }
    let samples_v = disc.samples();
    let slabs = disc.slab_count();
    let h = disc.width();
    let span = disc.right() - disc.left();

    let Some(last_allowed) = samples_v
        .iter()
        .rposition(|&v| v < e && !is_degenerate(v, e))
    else {
        return Err(Error::StaleEnergy {
            energy: e,
            mismatch: f64::INFINITY,
        });
    };
    let join = last_allowed + 1;

    let mut forward = Vec::with_capacity(join + 1);
    let mut state = RealState::left_wall();
    forward.push(state);
    for &v in &samples_v[..join] {
        state.advance(v - e, e, h);
        forward.push(state);
    }

    // backward[j] is the state at boundary join + j
    let mut backward = Vec::with_capacity(slabs - join + 1);
    let mut state = RealState::right_wall();
    backward.push(state);
    for &v in samples_v[join..].iter().rev() {
        state.advance(v - e, e, -h);
        backward.push(state);
    }
    backward.reverse();

    let f = forward[join];
    let g = backward[0];
    let local_k = (e - samples_v[last_allowed]).sqrt().max(std::f64::consts::PI / span);
    let ell = 1.0 / local_k;
    let f_norm = f.psi.hypot(ell * f.dpsi);
    let g_norm = g.psi.hypot(ell * g.dpsi);
    let mismatch = (f.psi * g.dpsi - f.dpsi * g.psi).abs() * ell / (f_norm * g_norm);
    if mismatch.is_nan() || mismatch > STALE_ENERGY_TOL {
        return Err(Error::StaleEnergy { energy: e, mismatch });
    }
    let scale = (f.psi * g.psi + ell * ell * f.dpsi * g.dpsi) / (g_norm * g_norm);
    let shift = f.log_scale - g.log_scale;

    let mut left_states = forward;
    left_states.pop();
    left_states.extend(backward.iter().map(|s| RealState {
        psi: s.psi * scale,
        dpsi: s.dpsi * scale,
        log_scale: s.log_scale + shift,
    }));
    // left_states[i] is now the state at the left edge of slab i, i in 0..slabs (+ wall b)

    let coefficients: Vec<SlabCoefficients> = (0..slabs)
        .map(|i| SlabCoefficients::from_state(samples_v[i], e, &left_states[i]))
        .collect();

    let continuity_residual = continuity_audit(disc, &coefficients, &left_states);

    let points = if out_points.is_multiple_of(2) { out_points + 1 } else { out_points };
    let step = span / (points - 1) as f64;
    let boundaries = disc.boundaries();
    let raw: Vec<(f64, Complex64, f64)> = (0..points)
        .map(|j| {
            let x = if j + 1 == points {
                disc.right()
            } else {
                disc.left() + j as f64 * step
            };
            let i = disc.slab_of(x);
            let c = &coefficients[i];
            let (psi, _, extra) = c.eval(x - boundaries[i]);
            (x, psi, c.log_scale + extra)
        })
        .collect();

    let reference = raw
        .iter()
        .filter(|r| r.1.norm() > 0.0)
        .map(|r| r.1.norm().ln() + r.2)
        .fold(f64::NEG_INFINITY, f64::max);
    if !reference.is_finite() {
        return Err(Error::Numerical(format!("wavefunction vanishes identically at E = {e}")));
    }
    let mut contamination = 0.0f64;
    let mut psi: Vec<f64> = raw
        .iter()
        .map(|(_, z, log)| {
            let factor = (log - reference).exp();
            contamination = contamination.max((z.im * factor).abs());
            z.re * factor
        })
        .collect();
    if contamination > IMAGINARY_TOL {
        return Err(Error::Numerical(format!(
            "imaginary contamination {contamination:.3e} in reconstructed wavefunction"
        )));
    }

    let peak = psi.iter().map(|p| p.abs()).fold(0.0, f64::max);
    if let Some(first) = psi.iter().find(|p| p.abs() > NODE_DEAD_BAND * peak) {
        if *first < 0.0 {
            psi.iter_mut().for_each(|p| *p = -*p);
        }
    }

    let integral = simpson(&psi, step);
    let inv = integral.sqrt().recip();
    psi.iter_mut().for_each(|p| *p *= inv);
    let norm_residual = (simpson(&psi, step) - 1.0).abs();
    let nodes = count_nodes(&psi);

    Ok(WavefunctionTable {
        energy: e,
        coefficients,
        samples: raw.iter().map(|r| r.0).zip(psi).collect(),
        requested_points: out_points,
        norm_residual,
        nodes,
        continuity_residual,
        matching_mismatch: mismatch,
        matching_boundary: join,
    })
}

fn continuity_audit(disc: &Discretization, coefficients: &[SlabCoefficients], states: &[RealState]) -> f64 {
    let boundaries = disc.boundaries();
    let n = disc.n();
    if n == 0 {
        return 0.0;
    }
    let reference = states
        .iter()
        .map(|s| s.log_scale + s.psi.abs().max(s.dpsi.abs()).max(f64::MIN_POSITIVE).ln())
        .fold(f64::NEG_INFINITY, f64::max);
    let mut max_psi = 0.0f64;
    let mut max_dpsi = 0.0f64;
    let mut jumps = Vec::with_capacity(n);
    for j in 1..=n {
        let left = &coefficients[j - 1];
        let (psi_l, dpsi_l, extra) = left.eval(boundaries[j] - boundaries[j - 1]);
        let fl = (left.log_scale + extra - reference).exp();
        let right = &states[j];
        let fr = (right.log_scale - reference).exp();
        let (pl, dl) = (psi_l.re * fl, dpsi_l.re * fl);
        let (pr, dr) = (right.psi * fr, right.dpsi * fr);
        max_psi = max_psi.max(pl.abs()).max(pr.abs());
        max_dpsi = max_dpsi.max(dl.abs()).max(dr.abs());
        jumps.push(((pl - pr).abs(), (dl - dr).abs()));
    }
    jumps
        .iter()
        .map(|&(dp, dd)| (dp / max_psi).max(dd / max_dpsi))
        .fold(0.0, f64::max)
}

/// Composite Simpson rule on an odd number of uniformly spaced samples of `f^2`.
fn simpson(values: &[f64], step: f64) -> f64 {
    let last = values.len() - 1;
    let inner: f64 = values[1..last]
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { 4.0 * v * v } else { 2.0 * v * v })
        .sum();
    step / 3.0 * (values[0] * values[0] + inner + values[last] * values[last])
}

/// Strict sign changes among interior samples outside the dead band.
fn count_nodes(psi: &[f64]) -> usize {
    let peak = psi.iter().map(|p| p.abs()).fold(0.0, f64::max);
    let band = NODE_DEAD_BAND * peak;
    let interior = &psi[1..psi.len().saturating_sub(1).max(1)];
    let mut nodes = 0;
    let mut previous = 0.0f64;
    for &p in interior.iter().filter(|p| p.abs() > band) {
        if previous != 0.0 && p.signum() != previous.signum() {
            nodes += 1;
        }
        previous = p;
    }
    nodes
}
