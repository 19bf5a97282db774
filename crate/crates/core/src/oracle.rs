//! Finite-difference reference solver.
//!
//! Discretizes `-psi'' + V psi = E psi` with the three-point second
//! difference on the interior nodes of a uniform grid over `[a, b]`
//! (Dirichlet walls) and extracts the lowest eigenvalues of the resulting
//! symmetric tridiagonal matrix by Sturm-count bisection. The scheme is
//! second order in the grid spacing, so two runs at spacings `h` and `h/2`
//! combine into the Richardson estimate `(4 E_fine - E_coarse) / 3`.

use crate::error::{validation, Result};
use crate::potentials::PotentialSpec;

/// Smallest magnitude a Sturm pivot may take before it is nudged.
const PIVOT_GUARD: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct Richardson {
    pub fine_grid_points: usize,
    pub fine: Vec<f64>,
    pub extrapolated: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub grid_points: usize,
    pub eigenvalues: Vec<f64>,
    pub richardson: Option<Richardson>,
}

impl OracleResult {
    /// Extrapolated values when available, the plain ones otherwise.
    pub fn best(&self) -> &[f64] {
        self.richardson
            .as_ref()
            .map_or(&self.eigenvalues, |r| &r.extrapolated)
    }
}

/// Symmetric tridiagonal matrix stored as diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `lambda` (negative LDLᵀ pivots).
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut pivot = 1.0;
        for (i, &d) in self.diagonal.iter().enumerate() {
            let coupling = if i == 0 {
                0.0
            } else {
                let e = self.off_diagonal[i - 1];
                e * e / pivot
            };
            pivot = d - lambda - coupling;
            if pivot.abs() < PIVOT_GUARD {
                pivot = -PIVOT_GUARD;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diagonal.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off_diagonal[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off_diagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = self.gershgorin();
        let pad = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
        (0..count.min(self.diagonal.len()))
            .map(|j| {
                let (mut a, mut b) = (lo - pad, hi + pad);
                // smallest lambda with more than j eigenvalues below it
                while b - a > 2.0 * f64::EPSILON * a.abs().max(b.abs()) {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    if self.count_below(mid) > j {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }
}

/// Finite-difference Hamiltonian on `grid_points` nodes including both walls.
pub fn hamiltonian(spec: &PotentialSpec, grid_points: usize) -> Result<Tridiagonal> {
    if grid_points < 3 {
        return Err(validation("grid-points", "need at least 3 grid points"));
    }
    let walls = spec.walls();
    let h = walls.width() / (grid_points - 1) as f64;
    let inv_h2 = 1.0 / (h * h);
    let interior = grid_points - 2;
    let diagonal = (1..=interior)
        .map(|j| 2.0 * inv_h2 + spec.value_unchecked(walls.left + j as f64 * h))
        .collect();
    Ok(Tridiagonal {
        diagonal,
        off_diagonal: vec![-inv_h2; interior - 1],
    })
}

/// Lowest `levels` eigenvalues on a `grid_points` grid; with `richardson`, also on
/// `2 (grid_points - 1) + 1` points and extrapolated.
pub fn fd_spectrum(
    spec: &PotentialSpec,
    grid_points: usize,
    levels: usize,
    richardson: bool,
) -> Result<OracleResult> {
    if levels < 1 {
        return Err(validation("levels", "need at least one level"));
    }
    if grid_points < levels + 2 {
        return Err(validation(
            "grid-points",
            format!("{grid_points} grid points cannot resolve {levels} levels"),
        ));
    }
    let eigenvalues = hamiltonian(spec, grid_points)?.lowest_eigenvalues(levels);
    let richardson = if richardson {
        let fine_grid_points = 2 * (grid_points - 1) + 1;
        let fine = hamiltonian(spec, fine_grid_points)?.lowest_eigenvalues(levels);
        let extrapolated = eigenvalues
            .iter()
            .zip(&fine)
            .map(|(c, f)| (4.0 * f - c) / 3.0)
            .collect();
        Some(Richardson {
            fine_grid_points,
            fine,
            extrapolated,
        })
    } else {
        None
    };
    Ok(OracleResult {
        grid_points,
        eigenvalues,
        richardson,
    })
}

/// `log2(|coarse - exact| / |fine - exact|)` for spacings differing by a factor 2.
pub fn observed_order(coarse: f64, fine: f64, exact: f64) -> f64 {
    ((coarse - exact).abs() / (fine - exact).abs()).log2()
}
