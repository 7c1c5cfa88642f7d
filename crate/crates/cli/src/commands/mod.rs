mod analysis;
mod gen;
mod verify;

use std::path::Path;

use rcw_core::spectral::{eigendecompose, EigenOptions};
use rcw_core::{Graph, Spectrum};

use crate::args::Command;
use crate::error::{CliError, Result};
use crate::io::{load_graph, load_spectrum};
use crate::manifest::ManifestBuilder;

pub use verify::{verify_fixture, VerifyRow};

/// State shared by one invocation.
pub struct Ctx {
    pub manifest: ManifestBuilder,
}

impl Ctx {
    pub fn graph(&mut self, path: &Path) -> Result<Graph> {
        let loaded = load_graph(path)?;
        self.manifest.graph_hash(loaded.sha256);
        Ok(loaded.graph)
    }

    /// Loads `path` if given, else computes. A saved spectrum without
    /// eigenvectors is recomputed when vectors are needed.
    pub fn spectrum(&mut self, path: Option<&Path>, g: &Graph, vectors: bool) -> Result<Spectrum> {
        if let Some(path) = path {
            let loaded = load_spectrum(path, g)?;
            if !vectors || loaded.spectrum.has_vectors() {
                self.manifest.spectrum_hash(loaded.sha256);
                return Ok(loaded.spectrum);
            }
            eprintln!(
                "note: {} has no eigenvectors; recomputing the spectrum",
                path.display()
            );
        }
        let opts = if vectors {
            EigenOptions::with_vectors()
        } else {
            EigenOptions::default()
        };
        eigendecompose(g, &opts).map_err(CliError::compute)
    }
}

pub fn dispatch(ctx: &mut Ctx, command: Command) -> Result<i32> {
    match command {
        Command::Gen { which } => gen::run(ctx, which),
        Command::Spectrum(a) => analysis::spectrum(ctx, a),
        Command::Mix(a) => analysis::mix(ctx, a),
        Command::Variance(a) => analysis::variance(ctx, a),
        Command::Conjecture(a) => analysis::conjecture(ctx, a),
        Command::Diameter(a) => analysis::diameter(ctx, a),
        Command::Density(a) => analysis::density(ctx, a),
        Command::Verify(a) => verify::run(ctx, a),
    }
}
