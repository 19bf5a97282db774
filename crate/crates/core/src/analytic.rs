//! Closed-form spectra used as references.
//!
//! Index conventions follow each formula: square-well levels count from
//! `p = 1`, harmonic and Morse levels from 0. Solver levels are always
//! 0-based, so solver level `i` of a square well is `square_well_energy(i + 1, L)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `p^2 pi^2 / (2L)^2` for a box of half-width `L`, `p >= 1`.
pub fn square_well_energy(p: u32, half_width: f64) -> Result<f64> {
    if p < 1 {
        return Err(Error::Domain("square-well levels start at p = 1".into()));
    }
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::Domain(format!("half-width must be > 0, got {half_width}")));
    }
    let p = p as f64;
    Ok(p * p * PI * PI / (4.0 * half_width * half_width))
}

/// Unbounded `V = x^2` in units `hbar = 1`, `2m = 1`: `2p + 1`.
pub fn harmonic_energy(p: u32) -> f64 {
    2.0 * p as f64 + 1.0
}

/// Number of bound Morse levels: the formula increases only while `q < sqrt(V0) / lambda`.
pub fn morse_level_count(depth: f64, range: f64) -> Result<u32> {
    check_morse(depth, range)?;
    let limit = depth.sqrt() / range;
    Ok((limit.ceil() as u32).max(1))
}

/// `2 lambda sqrt(V0) [(q + 1/2) - (q + 1/2)^2 lambda / (2 sqrt(V0))]`.
pub fn morse_energy(q: u32, depth: f64, range: f64) -> Result<f64> {
    let count = morse_level_count(depth, range)?;
    if q >= count {
        return Err(Error::Domain(format!(
            "Morse spectrum exhausted: level {q} is past the turnover (only {count} levels)"
        )));
    }
    let root = depth.sqrt();
    let nu = q as f64 + 0.5;
    Ok(2.0 * range * root * (nu - nu * nu * range / (2.0 * root)))
}

fn check_morse(depth: f64, range: f64) -> Result<()> {
    if !(depth.is_finite() && depth > 0.0 && range.is_finite() && range > 0.0) {
        return Err(Error::Domain(format!(
            "Morse parameters must be positive, got V0 = {depth}, lambda = {range}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceSpectrum {
    SquareWell { half_width: f64 },
    HarmonicUnbounded,
    Morse { depth: f64, range: f64 },
}

impl ReferenceSpectrum {
    /// Level by 0-based solver index; `None` past the end of a finite spectrum.
    pub fn level(&self, index: usize) -> Option<f64> {
        let index = u32::try_from(index).ok()?;
        match *self {
            ReferenceSpectrum::SquareWell { half_width } => {
                square_well_energy(index.checked_add(1)?, half_width).ok()
            }
            ReferenceSpectrum::HarmonicUnbounded => Some(harmonic_energy(index)),
            ReferenceSpectrum::Morse { depth, range } => morse_energy(index, depth, range).ok(),
        }
    }

    pub fn levels(&self) -> impl Iterator<Item = f64> + '_ {
        (0..).map_while(move |i| self.level(i))
    }
}
