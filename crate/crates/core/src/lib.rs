//! Exact non-backtracking random walks on regular graphs.
//!
//! The crate builds explicit `d`-regular graphs (classical fixtures,
//! configuration-model random graphs and LPS Ramanujan Cayley graphs), counts
//! non-backtracking walks exactly through the Chebyshev three-term recurrence,
//! and evaluates the spectral inequalities that govern their total-variation
//! mixing: variance functionals, Kesten-measure integrals, almost-diameter tail
//! bounds and the density-hypothesis envelope.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command line
//! and parallel drivers live in the companion `rcw` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cheby;
pub mod density;
pub mod diameter;
pub mod gen;
pub mod graph;
pub mod math;
pub mod mixing;
pub mod spectral;
pub mod variance;

pub use cheby::{ChebKind, WalkError, WalkRow};
pub use graph::{DistanceProfile, Graph, GraphError};
pub use spectral::{Angle, Classification, SpectralError, Spectrum};

/// Outcome of checking one inequality.
#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    /// The hypotheses of the statement do not hold for this input.
    Inapplicable(&'static str),
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Status::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Status::Fail)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inapplicable(_) => "inapplicable",
        }
    }
}
