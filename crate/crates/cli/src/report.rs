//! Serialisable pieces shared by the command outputs. Every inequality that
//! is checked is written as a [`Check`] naming the statement it instantiates.

use rcw_core::{Graph, Status};
use serde::Serialize;

pub const WALK_COUNTS: &str = "walk_counts: Q_t(A)(x,y) = K_t(x,y) for t >= 1";
pub const P_IDENTITY: &str = "p_identity: P_l(A)(x,y) = sum_{0<=j<=l/2} K_{l-2j}(x,y)";
pub const VARIANCE_ROUTES: &str =
    "variance_expansion: sum_y (K_t(x,y) - N(t)/n)^2 = sum_{j!=0} Q_t(lambda_j)^2 f_j(x)^2";
pub const LOWER_CUTOFF: &str = "lower_cutoff: d(t) >= 1 - N(t)/n";
pub const L2_BOUND: &str = "l2_bound: 4 d_x(t)^2 <= n W(Q_t,x) / N(t)^2";
pub const RAMANUJAN_MIXING: &str =
    "ramanujan_mixing_time: t_mix(eps) <= log_p n + 2 log_p(1/eps) + 2 log_p(2 + 20/delta)";
pub const TEMPERED_U_SUM: &str =
    "tempered_u_sum: max_x sum_{j!=0} U_l(cos theta_j)^2 f_j(x)^2 <= 2 for l <= girth/5";
pub const VARIANCE_TEMPERED: &str = "variance_tempered: W(Q_t,x) <= p^t (t+1)^2";
pub const VARIANCE_GIRTH: &str =
    "variance_girth: W(Q_t,x) <= 12 (10/delta + 1)^2 p^t for log_p n <= t <= 2 log_p n";
pub const POLY_TAIL: &str = "polynomial_tail: (P(d)/n)^2 N_x(deg P) <= max_{j!=0} P(lambda_j)^2";
pub const CHEB_GROWTH: &str = "chebyshev_growth: T_l(d/lambda) >= b^l / 2";
pub const ALMOST_DIAMETER: &str = "almost_diameter: N_x(log_b(n)/2 + xi) / n <= 4 b^(-2 xi)";
pub const ALMOST_DIAMETER_INT: &str =
    "almost_diameter_integer_degree: N_x(l) / n <= 4 n b^(-2 floor(l)), l = log_b(n)/2 + xi";
pub const ALMOST_DIAMETER_RAM: &str =
    "almost_diameter_ramanujan: N_x(log_p n + xi) / n <= 4 p^(-xi)";
pub const DIAMETER_BOUND: &str = "diameter_bound: diam <= log_b n + 2 xi*, 4 b^(-2 xi*) < 1/2";
pub const DISTANCE_CONCENTRATION: &str =
    "distance_concentration: #{y : |dist(x,y) - log_p n| > f} / n <= 4 p^(-f)";
pub const DENSITY_CUTOFF: &str =
    "density_cutoff: d_x(t) <= (n p^(-t) (t+1)^2 + 3 p^2 I_n)^(1/2) / 2, t = ceil((1+eta) log_p n)";
pub const DENSITY_CHAIN: &str =
    "density_cutoff_chain: 4 d^2 <= n W / N^2 <= n v2 / N^2 <= n v3 / N^2 <= 4 bound^2";
pub const KESTEN_MASS: &str = "kesten_normalization: nu_p([0, pi]) = 1";
pub const KESTEN_NORM: &str = "kesten_norm: nu_p(R_t^2) = (p+1)/p for t >= 1";
pub const KESTEN_ORTHO: &str = "kesten_orthogonality: nu_p(R_s R_t) = 0 for 1 <= s < t";
pub const CONJECTURE: &str = "variance_conjecture (empirical): W_2(t) / N(t) -> 1";
pub const CONJECTURE_ENVELOPE: &str =
    "variance_ratio_envelope: 0 <= W_2(t)/N(t) <= p (t+1)^2 / (p+1)";
pub const CONJECTURE_FIRST: &str = "variance_first_step: W_2(1)/N(1) = 1 - d/n";
pub const SPECTRAL_INVARIANTS: &str =
    "spectral_identities: orthonormal f_j, sum_j f_j(x)^2 = 1, sum lambda_j = 0, sum lambda_j^2 = n d";

/// One checked inequality.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub claim: &'static str,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
    /// Measured side.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// Bound it is compared with.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

impl Check {
    pub fn new(claim: &'static str, status: &Status) -> Self {
        Check {
            claim,
            status: status.label(),
            reason: match status {
                Status::Inapplicable(why) => Some(why),
                _ => None,
            },
            value: None,
            bound: None,
        }
    }

    pub fn with(mut self, value: f64, bound: f64) -> Self {
        self.set(value, bound);
        self
    }

    pub fn set(&mut self, value: f64, bound: f64) {
        self.value = Some(value);
        self.bound = Some(bound);
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail.label()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct GraphInfo {
    pub n: usize,
    pub d: usize,
    pub p: u64,
    pub bipartite: bool,
    pub homogeneous: bool,
    pub girth: Option<usize>,
}

impl GraphInfo {
    pub fn of(g: &Graph) -> Self {
        GraphInfo {
            n: g.n(),
            d: g.degree(),
            p: g.p(),
            bipartite: g.is_bipartite(),
            homogeneous: g.is_homogeneous(),
            girth: g.girth(),
        }
    }
}
