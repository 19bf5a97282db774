use crate::error::{validation, Result};
use crate::potentials::PotentialSpec;

/// `n + 1` equal slabs on `[a, b]`, each carrying the potential sampled at its midpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    n: usize,
    a: f64,
    b: f64,
    h: f64,
    boundaries: Vec<f64>,
    midpoints: Vec<f64>,
    samples: Vec<f64>,
}

/// Partitions the walls of `spec` into `n + 1` slabs.
pub fn partition(spec: &PotentialSpec, n: usize) -> Result<Discretization> {
    let walls = spec.walls();
    let (a, b) = (walls.left, walls.right);
    let slabs = n
        .checked_add(1)
        .ok_or_else(|| validation("n", "slab count overflows"))?;
    let h = (b - a) / slabs as f64;
    if h.is_nan() || h <= 0.0 {
        return Err(validation("n", format!("slab width underflows for n = {n}")));
    }

    let mut boundaries: Vec<f64> = (0..=slabs).map(|i| a + i as f64 * h).collect();
    boundaries[slabs] = b;

    let midpoints: Vec<f64> = boundaries.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    if midpoints
        .iter()
        .zip(boundaries.windows(2))
        .any(|(&m, w)| !(w[0] < m && m < w[1]))
    {
        return Err(validation(
            "n",
            format!("slabs too thin to resolve in double precision for n = {n}"),
        ));
    }
    let samples = midpoints.iter().map(|&m| spec.value_unchecked(m)).collect();

    Ok(Discretization {
        n,
        a,
        b,
        h,
        boundaries,
        midpoints,
        samples,
    })
}

impl Discretization {
    /// Builds a discretization directly from slab values on `[a, b]`.
    pub fn from_samples(a: f64, b: f64, samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(validation("samples", "need at least one slab"));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(validation("walls", format!("need a < b, got [{a}, {b}]")));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(validation("samples", "slab potentials must be finite"));
        }
        let slabs = samples.len();
        let h = (b - a) / slabs as f64;
        let mut boundaries: Vec<f64> = (0..=slabs).map(|i| a + i as f64 * h).collect();
        boundaries[slabs] = b;
        let midpoints = boundaries.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        Ok(Self {
            n: slabs - 1,
            a,
            b,
            h,
            boundaries,
            midpoints,
            samples,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slab_count(&self) -> usize {
        self.n + 1
    }

    pub fn width(&self) -> f64 {
        self.h
    }

    pub fn left(&self) -> f64 {
        self.a
    }

    pub fn right(&self) -> f64 {
        self.b
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn midpoints(&self) -> &[f64] {
        &self.midpoints
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn min_potential(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Mirror image: slab `i` takes the value of slab `n - i`.
    pub fn reversed(&self) -> Self {
        let mut samples = self.samples.clone();
        samples.reverse();
        Self::from_samples(self.a, self.b, samples).expect("mirror of a valid discretization")
    }

    /// Index of the slab containing `x`, with boundaries assigned to the right slab
    /// except at `b`.
    pub fn slab_of(&self, x: f64) -> usize {
        let i = ((x - self.a) / self.h).floor();
        if i <= 0.0 {
            0
        } else {
            (i as usize).min(self.n)
        }
    }
}
