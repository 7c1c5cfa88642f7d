//! Chebyshev polynomials and the walk-counting polynomials built from them.
//!
//! With `u = x / (2√p)`:
//!
//! * `P_ℓ(x) = p^{ℓ/2} U_ℓ(u)`, so `P_ℓ(A)(x, y)` sums `K_{ℓ-2j}(x, y)`;
//! * `Q_t(x) = p^{t/2} ((p-1)/p U_t(u) + (2/p) T_t(u))`, so `Q_t(A) = K_t`;
//! * `R_t(u) = (p-1)/p U_t(u) + (2/p) T_t(u)`, i.e. `Q_t = p^{t/2} R_t`.
//!
//! Everything is evaluated by three-term recurrences. `P` and `Q` use the
//! rescaled recurrence `y_{k+1} = x y_k - p y_{k-1}`, which needs no square
//! root and stays exact on integers.

mod walk;

pub use walk::{
    apply_q_spectrally, max_safe_t, p_row, walk_row, walk_row_bruteforce, NbWalk, WalkError,
    WalkRow, BRUTEFORCE_BUDGET,
};

use core::fmt;
use core::str::FromStr;

use crate::math::{pow, sqrt};
use crate::spectral::Angle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChebKind {
    T,
    U,
    P,
    Q,
    R,
}

impl ChebKind {
    /// Whether evaluation needs the branching factor `p`.
    pub fn needs_p(self) -> bool {
        matches!(self, ChebKind::P | ChebKind::Q | ChebKind::R)
    }
}

impl fmt::Display for ChebKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChebKind::T => "T",
            ChebKind::U => "U",
            ChebKind::P => "P",
            ChebKind::Q => "Q",
            ChebKind::R => "R",
        };
        f.write_str(s)
    }
}

impl FromStr for ChebKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "T" | "t" => Ok(ChebKind::T),
            "U" | "u" => Ok(ChebKind::U),
            "P" | "p" => Ok(ChebKind::P),
            "Q" | "q" => Ok(ChebKind::Q),
            "R" | "r" => Ok(ChebKind::R),
            _ => Err(()),
        }
    }
}

/// Runs `y_0 = a`, `y_1 = b`, `y_{k+1} = c y_k - e y_{k-1}` up to `y_degree`.
#[inline]
fn recur(degree: u32, a: f64, b: f64, c: f64, e: f64) -> f64 {
    if degree == 0 {
        return a;
    }
    let (mut prev, mut cur) = (a, b);
    for _ in 1..degree {
        let next = c * cur - e * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// First kind: `T_0 = 1`, `T_1 = x`, `T_{k+1} = 2x T_k - T_{k-1}`.
pub fn cheb_t(degree: u32, x: f64) -> f64 {
    recur(degree, 1.0, x, 2.0 * x, 1.0)
}

/// Second kind: `U_0 = 1`, `U_1 = 2x`, `U_{k+1} = 2x U_k - U_{k-1}`.
pub fn cheb_u(degree: u32, x: f64) -> f64 {
    recur(degree, 1.0, 2.0 * x, 2.0 * x, 1.0)
}

/// `P_ℓ(x) = p^{ℓ/2} U_ℓ(x / 2√p)`.
pub fn cheb_p(degree: u32, p: u64, x: f64) -> f64 {
    recur(degree, 1.0, x, x, p as f64)
}

/// `p^{t/2} T_t(x / 2√p)`.
fn scaled_t(degree: u32, p: u64, x: f64) -> f64 {
    recur(degree, 1.0, 0.5 * x, x, p as f64)
}

/// `Q_t(x)`. For `t >= 1` this is the walk polynomial with `Q_t(A) = K_t`;
/// `Q_0 = (p+1)/p` is the constant the formula gives, not `K_0 = I`.
pub fn cheb_q(degree: u32, p: u64, x: f64) -> f64 {
    let pf = p as f64;
    (pf - 1.0) / pf * cheb_p(degree, p, x) + 2.0 / pf * scaled_t(degree, p, x)
}

/// `R_t(u) = (p-1)/p U_t(u) + (2/p) T_t(u)` at the Chebyshev argument `u`
/// (`u = cos θ`, or `±cosh(φ ln p)` for exceptional eigenvalues).
pub fn cheb_r(degree: u32, p: u64, u: f64) -> f64 {
    let pf = p as f64;
    (pf - 1.0) / pf * cheb_u(degree, u) + 2.0 / pf * cheb_t(degree, u)
}

/// `R_t` at an eigenvalue angle. At `θ = 0, π` the recurrence gives the
/// limits `U_t(±1) = (±1)^t (t + 1)` directly.
pub fn r_at(degree: u32, p: u64, angle: Angle) -> f64 {
    cheb_r(degree, p, angle.chebyshev_arg(p))
}

/// Evaluates any of the five families. `x` is the Chebyshev argument for
/// `T`, `U` and `R`, and the eigenvalue scale for `P` and `Q`.
pub fn cheb_scalar(kind: ChebKind, degree: u32, p: u64, x: f64) -> f64 {
    match kind {
        ChebKind::T => cheb_t(degree, x),
        ChebKind::U => cheb_u(degree, x),
        ChebKind::P => cheb_p(degree, p, x),
        ChebKind::Q => cheb_q(degree, p, x),
        ChebKind::R => cheb_r(degree, p, x),
    }
}

/// `x / (2√p)`.
pub fn chebyshev_arg(p: u64, x: f64) -> f64 {
    x / (2.0 * sqrt(p as f64))
}

/// `Q_t(λ)` through `R_t`: `p^{t/2} R_t(angle)`.
pub fn q_at(degree: u32, p: u64, angle: Angle) -> f64 {
    pow(p as f64, f64::from(degree) / 2.0) * r_at(degree, p, angle)
}

/// `N(t) = (p+1) p^{t-1}` for `t >= 1`, `N(0) = 1`; `None` on overflow.
pub fn walk_total(p: u64, t: u32) -> Option<u64> {
    if t == 0 {
        return Some(1);
    }
    p.checked_pow(t - 1)?.checked_mul(p + 1)
}
