//! Graph and spectrum files.

use std::path::Path;

use rcw_core::spectral::{Angle, Classification, RAMANUJAN_TOL};
use rcw_core::{Graph, Spectrum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::manifest::{read_hashed, RunManifest};

/// How a graph file was produced.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphSource {
    Fixture { name: String },
    Lps { p: u64, q: u64 },
    Random { n: usize, d: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<GraphSource>,
    pub n: usize,
    pub d: usize,
    #[serde(default)]
    pub homogeneous: bool,
    /// Sorted, each pair `u < v`.
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GraphFile {
    pub fn from_graph(
        g: &Graph,
        source: Option<GraphSource>,
        manifest: Option<RunManifest>,
    ) -> Self {
        let mut edges: Vec<[usize; 2]> = g.edges().map(|(u, v)| [u.min(v), u.max(v)]).collect();
        edges.sort_unstable();
        GraphFile {
            manifest,
            source,
            n: g.n(),
            d: g.degree(),
            homogeneous: g.is_homogeneous(),
            edges,
            labels: g.labels().map(<[String]>::to_vec),
        }
    }

    pub fn to_graph(&self) -> std::result::Result<Graph, String> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let mut g = Graph::from_edges(self.n, &edges).map_err(|e| e.to_string())?;
        if g.degree() != self.d {
            return Err(format!(
                "declared degree {} but edges give {}",
                self.d,
                g.degree()
            ));
        }
        if let Some(labels) = &self.labels {
            g = g.with_labels(labels.clone()).map_err(|e| e.to_string())?;
        }
        Ok(g.with_homogeneous(self.homogeneous))
    }
}

pub struct LoadedGraph {
    pub graph: Graph,
    pub sha256: String,
    pub source: Option<GraphSource>,
}

pub fn load_graph(path: &Path) -> Result<LoadedGraph> {
    let (bytes, sha256) = read_hashed(path)?;
    let file: GraphFile = serde_json::from_slice(&bytes).map_err(|e| CliError::Format {
        path: path.into(),
        msg: e.to_string(),
    })?;
    let graph = file.to_graph().map_err(|msg| CliError::Format {
        path: path.into(),
        msg,
    })?;
    Ok(LoadedGraph {
        graph,
        sha256,
        source: file.source,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ClassificationOut {
    pub is_ramanujan: bool,
    pub lambda: f64,
    pub ramanujan_bound: f64,
    pub bipartite: bool,
    /// `-d` left out of `λ`.
    pub excluded_trivial_negative: bool,
    pub tol: f64,
}

impl From<&Classification> for ClassificationOut {
    fn from(c: &Classification) -> Self {
        ClassificationOut {
            is_ramanujan: c.is_ramanujan,
            lambda: c.lambda_bound,
            ramanujan_bound: c.ramanujan_bound,
            bipartite: c.bipartite,
            excluded_trivial_negative: c.excluded_trivial_negative,
            tol: c.tol,
        }
    }
}

/// `φ_j` (side `above`) or `ψ_j` (side `below`) of an exceptional eigenvalue.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExceptionalOut {
    pub j: usize,
    pub side: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
    pub claim: String,
    pub n: usize,
    pub d: usize,
    pub bipartite: bool,
    #[serde(default)]
    pub sweeps: usize,
    pub classification: ClassificationOut,
    /// Nontrivial exceptional eigenvalues.
    pub exceptional: Vec<ExceptionalOut>,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[x][j] = f_j(x)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

pub const CLAIM_SPECTRUM: &str =
    "ramanujan_classification: max_{j!=0} |lambda_j| <= 2 sqrt(p), -d excluded on bipartite graphs";

impl SpectrumFile {
    pub fn from_spectrum(spec: &Spectrum, p: u64, manifest: Option<RunManifest>) -> Result<Self> {
        let class = spec.classify(p, RAMANUJAN_TOL).map_err(CliError::compute)?;
        let angles = spec.parametrize_thetas(p).map_err(CliError::compute)?;
        let skip = spec.trivial_negative_index();
        let exceptional = angles
            .iter()
            .enumerate()
            .skip(1)
            .filter(|&(j, _)| Some(j) != skip)
            .filter_map(|(j, a)| match *a {
                Angle::Above(v) => Some(ExceptionalOut {
                    j,
                    side: "above".into(),
                    value: v,
                }),
                Angle::Below(v) => Some(ExceptionalOut {
                    j,
                    side: "below".into(),
                    value: v,
                }),
                Angle::Real(_) => None,
            })
            .collect();
        let n = spec.n();
        Ok(SpectrumFile {
            manifest,
            claim: CLAIM_SPECTRUM.into(),
            n,
            d: spec.degree(),
            bipartite: spec.is_bipartite(),
            sweeps: spec.sweeps(),
            classification: (&class).into(),
            exceptional,
            eigenvalues: spec.eigenvalues().to_vec(),
            eigenvectors: spec
                .vectors()
                .map(|v| v.chunks(n).map(<[f64]>::to_vec).collect()),
        })
    }

    pub fn to_spectrum(&self) -> std::result::Result<Spectrum, String> {
        let vectors = self.eigenvectors.as_ref().map(|rows| rows.concat());
        Spectrum::from_saved(self.d, self.eigenvalues.clone(), vectors, self.bipartite)
            .map_err(|e| e.to_string())
    }
}

pub struct LoadedSpectrum {
    pub spectrum: Spectrum,
    pub sha256: String,
}

/// Reads a spectrum file and checks it belongs to a graph of the same shape.
pub fn load_spectrum(path: &Path, g: &Graph) -> Result<LoadedSpectrum> {
    let (bytes, sha256) = read_hashed(path)?;
    let bad = |msg: String| CliError::Format {
        path: path.into(),
        msg,
    };
    let file: SpectrumFile = serde_json::from_slice(&bytes).map_err(|e| bad(e.to_string()))?;
    if file.n != g.n() || file.d != g.degree() {
        return Err(bad(format!(
            "spectrum is for n = {}, d = {} but the graph has n = {}, d = {}",
            file.n,
            file.d,
            g.n(),
            g.degree()
        )));
    }
    let spectrum = file.to_spectrum().map_err(bad)?;
    Ok(LoadedSpectrum { spectrum, sha256 })
}

/// Writes `text` to `path`, or to stdout without one.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    CliError::Format {
        path: path.into(),
        msg: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rcw_core::gen::{fixture, Fixture};
    use rcw_core::spectral::{eigendecompose, EigenOptions};

    #[test]
    fn graph_round_trip() {
        let g = fixture(Fixture::Petersen);
        let f = GraphFile::from_graph(
            &g,
            Some(GraphSource::Fixture {
                name: "petersen".into(),
            }),
            None,
        );
        assert!(f.edges.windows(2).all(|w| w[0] < w[1]));
        let text = crate::json::to_string(&f);
        let back: GraphFile = serde_json::from_str(&text).unwrap();
        let h = back.to_graph().unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        assert!(h.is_homogeneous());
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let mut f = GraphFile::from_graph(&fixture(Fixture::K4), None, None);
        f.d = 4;
        assert!(f.to_graph().is_err());
    }

    #[test]
    fn spectrum_round_trip_is_exact() {
        let g = fixture(Fixture::Heawood);
        let s = eigendecompose(&g, &EigenOptions::with_vectors()).unwrap();
        let f = SpectrumFile::from_spectrum(&s, 2, None).unwrap();
        let text = crate::json::to_string(&f);
        let back: SpectrumFile = serde_json::from_str(&text).unwrap();
        let t = back.to_spectrum().unwrap();
        assert_eq!(t.eigenvalues(), s.eigenvalues());
        assert_eq!(t.vectors(), s.vectors());
        assert!(t.is_bipartite());
        assert!(back.classification.excluded_trivial_negative);
    }
}
