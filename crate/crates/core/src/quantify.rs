//! The quantification function whose zeros in `E` are the eigenvalues.
//!
//! Two routes are evaluated side by side:
//!
//! * the complex coefficient recurrence over the exponential slab solutions
//!   `P e^{-k t} + Q e^{k t}`, ending in `B_n = a_n P_n + b_n Q_n`;
//! * a real shooting propagation of `(psi, psi')` from `psi(a) = 0`,
//!   `psi'(a) = 1`, ending in `psi(b)`.
//!
//! With seeds `P_0 = 1`, `Q_0 = -1` the slab-0 solution has `psi'(a) = -2 k_0`,
//! so the two routes are tied by `B_n(E) = -2 k_0 psi(b; E)`. `B_n` is complex
//! whenever slab 0 is classically allowed, so signs are read from `psi(b)`.
//!
//! Both routes divide out positive factors as they go and keep the natural
//! log of what was removed.

use num_complex::Complex64;

use crate::grid::Discretization;

/// Above this `kappa * |h|` the hyperbolic update is carried in factored form.
const HYPERBOLIC_FACTOR_THRESHOLD: f64 = 20.0;
/// Rescale once the largest state component exceeds this.
const RESCALE_ABOVE: f64 = 2.0;
/// Relative width of the band where a slab counts as `V_i == E`.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// `psi(b)` below this fraction of `|psi'(b)| (b - a)` reads as an exact zero.
pub const ZERO_SIGN_TOL: f64 = 1e-14;

/// `k = sqrt(V - E)` on the principal branch.
pub fn wavenumber(v: f64, e: f64) -> Complex64 {
    let q = v - e;
    if q >= 0.0 {
        Complex64::new(q.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-q).sqrt())
    }
}

/// `c_ij = k_i / k_j` as a ratio of principal roots; `None` when slab `j` is degenerate.
pub fn coupling(v_i: f64, v_j: f64, e: f64) -> Option<Complex64> {
    if is_degenerate(v_j, e) {
        return None;
    }
    Some(wavenumber(v_i, e) / wavenumber(v_j, e))
}

pub fn is_degenerate(v: f64, e: f64) -> bool {
    (v - e).abs() <= DEGENERACY_TOL * e.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantValue {
    /// `B_n(E)` with positive factors divided out.
    pub b_scaled: Complex64,
    /// `B_n(E) = b_scaled * exp(log_scale)`.
    pub log_scale: f64,
    /// `psi(b; E)` with positive factors divided out.
    pub shoot: f64,
    pub shoot_log_scale: f64,
}

impl QuantValue {
    /// De-scaled `B_n(E)`; may overflow for deep wells.
    pub fn b(&self) -> Complex64 {
        self.b_scaled * self.log_scale.exp()
    }

    pub fn shoot_value(&self) -> f64 {
        self.shoot * self.shoot_log_scale.exp()
    }

    pub fn ln_abs_b(&self) -> f64 {
        self.b_scaled.norm().ln() + self.log_scale
    }

    pub fn ln_abs_shoot(&self) -> f64 {
        self.shoot.abs().ln() + self.shoot_log_scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rescale {
    Enabled,
    /// Raw recurrence; only usable where nothing overflows.
    Disabled,
}

/// Evaluates both routes at energy `e`.
pub fn quantification(disc: &Discretization, e: f64) -> QuantValue {
    let (b_scaled, log_scale) = recurrence(disc, e, Rescale::Enabled);
    let end = shoot_state(disc, e);
    QuantValue {
        b_scaled,
        log_scale,
        shoot: end.psi,
        shoot_log_scale: end.log_scale,
    }
}

/// `(psi(b), log_scale)` from the real shooting propagation.
pub fn shoot_real(disc: &Discretization, e: f64) -> (f64, f64) {
    let end = shoot_state(disc, e);
    (end.psi, end.log_scale)
}

/// Sign of `psi(b; E)`, with 0 for a numerically exact zero.
pub fn shoot_sign(disc: &Discretization, e: f64) -> i8 {
    let end = shoot_state(disc, e);
    let span = disc.right() - disc.left();
    if end.psi.abs() <= ZERO_SIGN_TOL * end.dpsi.abs() * span {
        0
    } else if end.psi > 0.0 {
        1
    } else {
        -1
    }
}

pub(crate) fn shoot_state(disc: &Discretization, e: f64) -> RealState {
    let h = disc.width();
    let mut state = RealState::left_wall();
    for &v in disc.samples() {
        state.advance(v - e, e, h);
    }
    state
}

/// `(psi, psi')` scaled by `exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RealState {
    pub psi: f64,
    pub dpsi: f64,
    pub log_scale: f64,
}

impl RealState {
    pub fn left_wall() -> Self {
        Self {
            psi: 0.0,
            dpsi: 1.0,
            log_scale: 0.0,
        }
    }

    pub fn right_wall() -> Self {
        Self {
            psi: 0.0,
            dpsi: -1.0,
            log_scale: 0.0,
        }
    }

    /// Exact propagation across a slab of constant `q = V - E` over signed
    /// length `h`; negative `h` propagates leftwards.
    pub fn advance(&mut self, q: f64, e: f64, h: f64) {
        let (psi, dpsi) = (self.psi, self.dpsi);
        if q.abs() <= DEGENERACY_TOL * e.abs().max(1.0) {
            let h2 = h * h;
            self.psi = psi * (1.0 + 0.5 * q * h2) + dpsi * h * (1.0 + q * h2 / 6.0);
            self.dpsi = psi * q * h + dpsi * (1.0 + 0.5 * q * h2);
        } else if q > 0.0 {
            let kappa = q.sqrt();
            let g = kappa * h.abs();
            let (ch, sh) = if g > HYPERBOLIC_FACTOR_THRESHOLD {
                // cosh and sinh with e^g / 2 factored out
                let tail = (-2.0 * g).exp();
                self.log_scale += g - std::f64::consts::LN_2;
                (1.0 + tail, (1.0 - tail).copysign(h))
            } else {
                let x = kappa * h;
                (x.cosh(), x.sinh())
            };
            self.psi = psi * ch + dpsi * sh / kappa;
            self.dpsi = psi * kappa * sh + dpsi * ch;
        } else {
            let kappa = (-q).sqrt();
            let (s, c) = (kappa * h).sin_cos();
            self.psi = psi * c + dpsi * s / kappa;
            self.dpsi = -psi * kappa * s + dpsi * c;
        }
        self.renormalize();
    }

    fn renormalize(&mut self) {
        let m = self.psi.abs().max(self.dpsi.abs());
        if m > RESCALE_ABOVE && m.is_finite() {
            self.psi /= m;
            self.dpsi /= m;
            self.log_scale += m.ln();
        }
    }
}

/// Slab solution representation used by the complex recurrence.
#[derive(Debug, Clone, Copy)]
enum Basis {
    /// `P e^{-k t} + Q e^{k t}`
    Exponential(Complex64),
    /// value `P`, slope `Q`, plus the first series correction in `q = V - E`
    Linear(f64),
}

fn basis(v: f64, e: f64) -> Basis {
    if is_degenerate(v, e) {
        Basis::Linear(v - e)
    } else {
        Basis::Exponential(wavenumber(v, e))
    }
}

/// Runs the `(P_i, Q_i)` recurrence and returns `(B_n scaled, log_scale)`.
pub fn recurrence(disc: &Discretization, e: f64, rescale: Rescale) -> (Complex64, f64) {
    let h = disc.width();
    let samples = disc.samples();
    let one = Complex64::new(1.0, 0.0);

    let mut current = basis(samples[0], e);
    let (mut p, mut q) = match current {
        Basis::Exponential(_) => (one, -one),
        Basis::Linear(_) => (Complex64::new(0.0, 0.0), -2.0 * wavenumber(samples[0], e)),
    };
    let mut log_scale = 0.0;

    for &v in &samples[1..] {
        let next = basis(v, e);
        match (current, next) {
            (Basis::Exponential(k_prev), Basis::Exponential(k)) => {
                let (a, b) = decay_growth(k_prev, h, rescale, &mut log_scale);
                let c = k_prev / k;
                let (ap, bq) = (a * p, b * q);
                p = 0.5 * ((c + 1.0) * ap + (1.0 - c) * bq);
                q = 0.5 * ((1.0 - c) * ap + (c + 1.0) * bq);
            }
            _ => {
                let (u, du) = slab_end(current, p, q, h, rescale, &mut log_scale);
                (p, q) = match next {
                    Basis::Exponential(k) => (0.5 * (u - du / k), 0.5 * (u + du / k)),
                    Basis::Linear(_) => (u, du),
                };
            }
        }
        current = next;
        if rescale == Rescale::Enabled {
            let m = p.norm().max(q.norm());
            if m > RESCALE_ABOVE && m.is_finite() {
                p /= m;
                q /= m;
                log_scale += m.ln();
            }
        }
    }

    let (mut b_n, _) = slab_end(current, p, q, h, rescale, &mut log_scale);
    if rescale == Rescale::Enabled {
        let m = b_n.norm();
        if m > RESCALE_ABOVE && m.is_finite() {
            b_n /= m;
            log_scale += m.ln();
        }
    }
    (b_n, log_scale)
}

/// `(a, b) = (e^{-k h}, e^{k h})`, divided by `e^{Re(k) h}` when rescaling.
fn decay_growth(k: Complex64, h: f64, rescale: Rescale, log_scale: &mut f64) -> (Complex64, Complex64) {
    let kh = k * h;
    match rescale {
        Rescale::Enabled => {
            let g = kh.re;
            *log_scale += g;
            ((-kh - g).exp(), (kh - g).exp())
        }
        Rescale::Disabled => ((-kh).exp(), kh.exp()),
    }
}

/// Value and slope at the right edge of a slab.
fn slab_end(
    basis: Basis,
    p: Complex64,
    q: Complex64,
    h: f64,
    rescale: Rescale,
    log_scale: &mut f64,
) -> (Complex64, Complex64) {
    match basis {
        Basis::Exponential(k) => {
            let (a, b) = decay_growth(k, h, rescale, log_scale);
            let (ap, bq) = (a * p, b * q);
            (ap + bq, k * (bq - ap))
        }
        Basis::Linear(dv) => {
            let h2 = h * h;
            (
                p * (1.0 + 0.5 * dv * h2) + q * h * (1.0 + dv * h2 / 6.0),
                p * dv * h + q * (1.0 + 0.5 * dv * h2),
            )
        }
    }
}
