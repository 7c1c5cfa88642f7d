//! Graph constructors: named fixtures, configuration-model random regular
//! graphs and LPS Cayley graphs.

mod lps;

pub use lps::{gen_lps, quaternion_solutions, LpsParams};

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    UnknownFixture(String),
    InvalidParams(String),
    RetriesExhausted { attempts: u32 },
    GeneratorCount { found: usize, expected: usize },
    NotConnected { reached: usize, expected: usize },
    Graph(GraphError),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::UnknownFixture(name) => write!(
                f,
                "unknown fixture `{name}` (expected one of k4, petersen, heawood, cube3)"
            ),
            GenError::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            GenError::RetriesExhausted { attempts } => write!(
                f,
                "no simple graph found after {attempts} configuration-model attempts"
            ),
            GenError::GeneratorCount { found, expected } => {
                write!(f, "found {found} generators, expected {expected}")
            }
            GenError::NotConnected { reached, expected } => write!(
                f,
                "Cayley graph reached {reached} of {expected} group elements"
            ),
            GenError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GenError {}

impl From<GraphError> for GenError {
    fn from(e: GraphError) -> Self {
        GenError::Graph(e)
    }
}

/// Small named graphs used as test fixtures. All of them are vertex-transitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fixture {
    K4,
    Petersen,
    Heawood,
    Cube3,
}

impl Fixture {
    pub const ALL: [Fixture; 4] = [
        Fixture::K4,
        Fixture::Petersen,
        Fixture::Heawood,
        Fixture::Cube3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::K4 => "k4",
            Fixture::Petersen => "petersen",
            Fixture::Heawood => "heawood",
            Fixture::Cube3 => "cube3",
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "k4" => Ok(Fixture::K4),
            "petersen" => Ok(Fixture::Petersen),
            "heawood" => Ok(Fixture::Heawood),
            "cube3" | "q3" => Ok(Fixture::Cube3),
            _ => Err(GenError::UnknownFixture(s.to_string())),
        }
    }
}

pub fn fixture(which: Fixture) -> Graph {
    let mut edges = Vec::new();
    let n = match which {
        Fixture::K4 => {
            for u in 0..4 {
                for v in u + 1..4 {
                    edges.push((u, v));
                }
            }
            4
        }
        Fixture::Petersen => {
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            10
        }
        Fixture::Heawood => {
            // LCF notation [5, -5]^7
            for i in 0..14 {
                edges.push((i, (i + 1) % 14));
                if i % 2 == 0 {
                    edges.push((i, (i + 5) % 14));
                }
            }
            14
        }
        Fixture::Cube3 => {
            for u in 0..8usize {
                for bit in 0..3 {
                    let v = u ^ (1 << bit);
                    if u < v {
                        edges.push((u, v));
                    }
                }
            }
            8
        }
    };
    Graph::from_edges(n, &edges)
        .expect("fixture edge lists are simple and regular")
        .with_homogeneous(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomRegularParams {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub max_retries: u32,
}

impl RandomRegularParams {
    pub const DEFAULT_RETRIES: u32 = 10_000;

    pub fn new(n: usize, d: usize, seed: u64) -> Self {
        RandomRegularParams {
            n,
            d,
            seed,
            max_retries: Self::DEFAULT_RETRIES,
        }
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.d < 3 {
            return Err(GenError::InvalidParams(alloc::format!(
                "degree {} is below 3",
                self.d
            )));
        }
        if self.n <= self.d {
            return Err(GenError::InvalidParams(alloc::format!(
                "need n > d, got n = {}, d = {}",
                self.n,
                self.d
            )));
        }
        if !(self.n * self.d).is_multiple_of(2) {
            return Err(GenError::InvalidParams(alloc::format!(
                "n * d = {} is odd",
                self.n * self.d
            )));
        }
        Ok(())
    }
}

/// Configuration model with full rejection: shuffle the `n * d` half-edges,
/// pair them off in order, and start over whenever a loop or repeated edge
/// appears. The generator is seeded per call.
pub fn gen_random_regular(params: RandomRegularParams) -> Result<Graph, GenError> {
    params.validate()?;
    let RandomRegularParams {
        n,
        d,
        seed,
        max_retries,
    } = params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| core::iter::repeat_n(v, d)).collect();
    let mut lists = vec![Vec::with_capacity(d); n];
    for _ in 0..max_retries {
        stubs.sort_unstable();
        stubs.shuffle(&mut rng);
        lists.iter_mut().for_each(Vec::clear);
        let mut simple = true;
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || lists[u].contains(&v) {
                simple = false;
                break;
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        if simple {
            return Ok(Graph::from_neighbor_lists(lists)?);
        }
    }
    Err(GenError::RetriesExhausted {
        attempts: max_retries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        let cases = [
            (Fixture::K4, 4, 3, false),
            (Fixture::Petersen, 10, 3, false),
            (Fixture::Heawood, 14, 3, true),
            (Fixture::Cube3, 8, 3, true),
        ];
        for (f, n, d, bip) in cases {
            let g = fixture(f);
            assert_eq!((g.n(), g.degree(), g.is_bipartite()), (n, d, bip), "{f}");
            assert!(g.is_connected());
            assert!(g.is_homogeneous());
        }
    }

    #[test]
    fn fixture_names_round_trip() {
        for f in Fixture::ALL {
            assert_eq!(f.name().parse::<Fixture>().unwrap(), f);
        }
        assert!(matches!(
            "k5".parse::<Fixture>(),
            Err(GenError::UnknownFixture(_))
        ));
    }

    #[test]
    fn random_regular_is_simple_and_regular() {
        let g = gen_random_regular(RandomRegularParams::new(10, 3, 1)).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.degree(), 3);
        for v in 0..10 {
            let nb = g.neighbors(v);
            assert!(!nb.contains(&(v as u32)));
            assert!(nb.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn random_regular_rejects_odd_stub_count() {
        assert!(matches!(
            gen_random_regular(RandomRegularParams::new(5, 3, 0)),
            Err(GenError::InvalidParams(_))
        ));
        assert!(matches!(
            gen_random_regular(RandomRegularParams::new(4, 4, 0)),
            Err(GenError::InvalidParams(_))
        ));
    }

    #[test]
    fn random_regular_is_deterministic() {
        let a = gen_random_regular(RandomRegularParams::new(100, 3, 42)).unwrap();
        let b = gen_random_regular(RandomRegularParams::new(100, 3, 42)).unwrap();
        assert_eq!(a, b);
        let c = gen_random_regular(RandomRegularParams::new(100, 3, 43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn retry_budget_is_reported() {
        let params = RandomRegularParams {
            max_retries: 0,
            ..RandomRegularParams::new(10, 3, 1)
        };
        assert_eq!(
            gen_random_regular(params),
            Err(GenError::RetriesExhausted { attempts: 0 })
        );
    }
}
