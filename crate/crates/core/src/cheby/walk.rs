//! Exact non-backtracking walk counts.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{cheb_q, walk_total};
use crate::graph::Graph;
use crate::spectral::{SpectralError, Spectrum};

/// Path budget for [`walk_row_bruteforce`].
pub const BRUTEFORCE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WalkError {
    /// `K_t` may not fit in 64 bits; `max_safe_t` is the largest length that does.
    Overflow {
        t: u32,
        max_safe_t: u32,
    },
    BudgetExceeded {
        paths: u64,
        budget: u64,
    },
    VertexOutOfRange {
        vertex: usize,
        n: usize,
    },
}

impl fmt::Display for WalkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalkError::Overflow { t, max_safe_t } => write!(
                f,
                "walk length {t} overflows 64-bit counts (largest safe length is {max_safe_t})"
            ),
            WalkError::BudgetExceeded { paths, budget } => {
                write!(f, "{paths} paths exceed the enumeration budget of {budget}")
            }
            WalkError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for {n} vertices")
            }
        }
    }
}

impl core::error::Error for WalkError {}

/// Largest `t` with `N(t) = (p+1) p^{t-1} < 2^63`.
///
/// Every intermediate `A K_{t-1}` is bounded by `(p+1)/p · N(t)`, so the
/// recurrence cannot overflow `u64` while `N(t)` stays below `2^63`.
pub fn max_safe_t(p: u64) -> u32 {
    let mut t = 0;
    while matches!(walk_total(p, t + 1), Some(n) if n < 1 << 63) {
        t += 1;
    }
    t
}

/// `K_t(x, ·)` for one start vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkRow {
    source: usize,
    t: u32,
    counts: Vec<u64>,
    total: u64,
}

impl WalkRow {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `N(t)`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn n(&self) -> usize {
        self.counts.len()
    }

    /// `(vertex, count)` pairs, one per vertex.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().copied().enumerate()
    }

    /// Whether the counts add up to `N(t)`.
    pub fn is_consistent(&self) -> bool {
        self.counts.iter().try_fold(0u64, |a, &c| a.checked_add(c)) == Some(self.total)
    }
}

fn check_vertex(g: &Graph, x: usize) -> Result<(), WalkError> {
    if x >= g.n() {
        return Err(WalkError::VertexOutOfRange {
            vertex: x,
            n: g.n(),
        });
    }
    Ok(())
}

const OVERFLOW_MSG: &str = "walk counts are bounded below 2^64 for safe lengths";

/// `out = A v - c w`, checked.
fn step(g: &Graph, v: &[u64], c: u64, w: &[u64], out: &mut [u64]) {
    for (y, o) in out.iter_mut().enumerate() {
        let av = g
            .neighbors(y)
            .iter()
            .try_fold(0u64, |a, &z| a.checked_add(v[z as usize]))
            .expect(OVERFLOW_MSG);
        *o = c
            .checked_mul(w[y])
            .and_then(|cw| av.checked_sub(cw))
            .expect("non-backtracking counts are non-negative");
    }
}

/// Successive rows `K_0(x, ·), K_1(x, ·), ...` by
/// `K_1 = A K_0`, `K_2 = A K_1 - (p+1) K_0`, `K_{s+1} = A K_s - p K_{s-1}`.
#[derive(Clone, Debug)]
pub struct NbWalk<'g> {
    g: &'g Graph,
    source: usize,
    t: u32,
    max_t: u32,
    prev: Vec<u64>,
    cur: Vec<u64>,
    scratch: Vec<u64>,
}

impl<'g> NbWalk<'g> {
    /// Starts at `K_0 = e_x`.
    pub fn new(g: &'g Graph, x: usize) -> Result<Self, WalkError> {
        check_vertex(g, x)?;
        let n = g.n();
        let mut cur = vec![0; n];
        cur[x] = 1;
        Ok(NbWalk {
            g,
            source: x,
            t: 0,
            max_t: max_safe_t(g.p()),
            prev: vec![0; n],
            cur,
            scratch: vec![0; n],
        })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// `K_t(x, ·)` for the current `t`.
    pub fn counts(&self) -> &[u64] {
        &self.cur
    }

    pub fn total(&self) -> u64 {
        walk_total(self.g.p(), self.t).expect("t is within the safe range")
    }

    pub fn row(&self) -> WalkRow {
        WalkRow {
            source: self.source,
            t: self.t,
            counts: self.cur.clone(),
            total: self.total(),
        }
    }

    /// Moves from `K_t` to `K_{t+1}`.
    pub fn advance(&mut self) -> Result<(), WalkError> {
        if self.t >= self.max_t {
            return Err(WalkError::Overflow {
                t: self.t + 1,
                max_safe_t: self.max_t,
            });
        }
        let c = match self.t {
            0 => 0,
            1 => self.g.p() + 1,
            _ => self.g.p(),
        };
        step(self.g, &self.cur, c, &self.prev, &mut self.scratch);
        core::mem::swap(&mut self.prev, &mut self.cur);
        core::mem::swap(&mut self.cur, &mut self.scratch);
        self.t += 1;
        Ok(())
    }

    /// Advances until the current length is `t`.
    pub fn advance_to(&mut self, t: u32) -> Result<(), WalkError> {
        let max_t = self.max_t;
        if t > max_t {
            return Err(WalkError::Overflow {
                t,
                max_safe_t: max_t,
            });
        }
        while self.t < t {
            self.advance()?;
        }
        Ok(())
    }
}

/// `K_t(x, ·)` by the integer recurrence.
pub fn walk_row(g: &Graph, x: usize, t: u32) -> Result<WalkRow, WalkError> {
    let mut walk = NbWalk::new(g, x)?;
    walk.advance_to(t)?;
    Ok(walk.row())
}

/// `K_t(x, ·)` by enumerating every non-backtracking path of length `t`.
pub fn walk_row_bruteforce(g: &Graph, x: usize, t: u32) -> Result<WalkRow, WalkError> {
    check_vertex(g, x)?;
    let p = g.p();
    let total = walk_total(p, t)
        .filter(|&n| n <= BRUTEFORCE_BUDGET)
        .ok_or_else(|| WalkError::BudgetExceeded {
            paths: walk_total(p, t).unwrap_or(u64::MAX),
            budget: BRUTEFORCE_BUDGET,
        })?;
    let mut counts = vec![0u64; g.n()];
    // (vertex, predecessor, depth)
    let mut stack = vec![(x, usize::MAX, 0u32)];
    while let Some((v, from, depth)) = stack.pop() {
        if depth == t {
            counts[v] += 1;
            continue;
        }
        for &w in g.neighbors(v) {
            let w = w as usize;
            if w != from {
                stack.push((w, v, depth + 1));
            }
        }
    }
    Ok(WalkRow {
        source: x,
        t,
        counts,
        total,
    })
}

/// `P_ℓ(A) e_x` by its own recurrence `P_{k+1}(A) = A P_k(A) - p P_{k-1}(A)`.
/// Entries are `Σ_{0 <= j <= ℓ/2} K_{ℓ-2j}(x, ·)`.
pub fn p_row(g: &Graph, x: usize, ell: u32) -> Result<Vec<u64>, WalkError> {
    check_vertex(g, x)?;
    let max_t = max_safe_t(g.p()).saturating_sub(2);
    if ell > max_t {
        return Err(WalkError::Overflow {
            t: ell,
            max_safe_t: max_t,
        });
    }
    let n = g.n();
    let mut prev = vec![0u64; n];
    let mut cur = vec![0u64; n];
    cur[x] = 1;
    let mut next = vec![0u64; n];
    for k in 0..ell {
        let c = if k == 0 { 0 } else { g.p() };
        step(g, &cur, c, &prev, &mut next);
        core::mem::swap(&mut prev, &mut cur);
        core::mem::swap(&mut cur, &mut next);
    }
    Ok(cur)
}

/// `y ↦ Σ_j Q_t(λ_j) f_j(x) f_j(y)`, i.e. row `x` of `Q_t(A)` in floating
/// point. Equals `K_t(x, ·)` for `t >= 1`; `Q_0 = (p+1)/p` is not the identity.
pub fn apply_q_spectrally(
    spec: &Spectrum,
    p: u64,
    t: u32,
    x: usize,
) -> Result<Vec<f64>, SpectralError> {
    if p as usize + 1 != spec.degree() {
        return Err(SpectralError::DegreeMismatch {
            p,
            degree: spec.degree(),
        });
    }
    let n = spec.n();
    if x >= n {
        return Err(SpectralError::InvalidInput(alloc::format!(
            "vertex {x} out of range for {n} vertices"
        )));
    }
    let fx = spec.vector_row(x)?;
    let coef: Vec<f64> = spec
        .eigenvalues()
        .iter()
        .zip(fx)
        .map(|(&lam, &f)| cheb_q(t, p, lam) * f)
        .collect();
    (0..n)
        .map(|y| {
            let fy = spec.vector_row(y)?;
            Ok(crate::math::sum(coef.iter().zip(fy).map(|(c, f)| c * f)))
        })
        .collect()
}
