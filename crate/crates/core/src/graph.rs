//! Simple undirected `d`-regular graphs in canonical form.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Marker for a vertex that BFS did not reach.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    Empty,
    DegreeTooSmall(usize),
    VertexOutOfRange {
        vertex: usize,
        n: usize,
    },
    SelfLoop(usize),
    MultiEdge(usize, usize),
    Irregular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    LabelCount {
        labels: usize,
        n: usize,
    },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Empty => write!(f, "graph has no vertices"),
            GraphError::DegreeTooSmall(d) => write!(f, "degree {d} is below 3"),
            GraphError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for n = {n}")
            }
            GraphError::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
            GraphError::MultiEdge(u, v) => write!(f, "repeated edge {u}-{v}"),
            GraphError::Irregular {
                vertex,
                degree,
                expected,
            } => write!(
                f,
                "vertex {vertex} has degree {degree}, expected {expected}"
            ),
            GraphError::LabelCount { labels, n } => {
                write!(f, "{labels} labels supplied for {n} vertices")
            }
        }
    }
}

impl core::error::Error for GraphError {}

/// An immutable simple `d`-regular graph on vertices `0..n`.
///
/// Neighbour lists are stored flat (`n * d` entries) and sorted ascending, so
/// two graphs with the same edge set compare equal and serialize identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    d: usize,
    adj: Vec<u32>,
    labels: Option<Vec<String>>,
    homogeneous: bool,
}

impl Graph {
    /// Builds a graph from an undirected edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        Self::from_neighbor_lists(lists)
    }

    /// Builds a graph from per-vertex neighbour lists, which must already be
    /// symmetric.
    pub fn from_neighbor_lists(mut lists: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let n = lists.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let d = lists[0].len();
        if d < 3 {
            return Err(GraphError::DegreeTooSmall(d));
        }
        let mut adj = Vec::with_capacity(n * d);
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            for w in list.windows(2) {
                if w[0] == w[1] {
                    return Err(GraphError::MultiEdge(v.min(w[0]), v.max(w[0])));
                }
            }
            for &w in list.iter() {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
                if w == v {
                    return Err(GraphError::SelfLoop(v));
                }
            }
            if list.len() != d {
                return Err(GraphError::Irregular {
                    vertex: v,
                    degree: list.len(),
                    expected: d,
                });
            }
            adj.extend(list.iter().map(|&w| w as u32));
        }
        let g = Graph {
            n,
            d,
            adj,
            labels: None,
            homogeneous: false,
        };
        // symmetry: every arc u->v needs its reverse
        for u in 0..n {
            for &v in g.neighbors(u) {
                if g.neighbors(v as usize).binary_search(&(u as u32)).is_err() {
                    return Err(GraphError::Irregular {
                        vertex: v as usize,
                        degree: g.d - 1,
                        expected: g.d,
                    });
                }
            }
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount {
                labels: labels.len(),
                n: self.n,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Marks the graph as vertex-transitive. This is metadata asserted by the
    /// constructor (Cayley graphs, known symmetric fixtures); it is not checked.
    pub fn with_homogeneous(mut self, homogeneous: bool) -> Self {
        self.homogeneous = homogeneous;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Branching number `d - 1` of the non-backtracking walk.
    pub fn p(&self) -> u64 {
        (self.d - 1) as u64
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v * self.d..(v + 1) * self.d]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.d / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u, v as usize))
        })
    }

    /// Row-major dense adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for u in 0..self.n {
            for &v in self.neighbors(u) {
                a[u * self.n + v as usize] = 1.0;
            }
        }
        a
    }

    /// Hop distances from `source`.
    pub fn bfs_distances(&self, source: usize) -> DistanceProfile {
        assert!(source < self.n, "source {source} out of range");
        let mut dist = vec![UNREACHABLE; self.n];
        let mut queue = VecDeque::with_capacity(self.n);
        dist[source] = 0;
        queue.push_back(source);
        let mut ecc = 0;
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            ecc = du;
            for &v in self.neighbors(u) {
                let v = v as usize;
                if dist[v] == UNREACHABLE {
                    dist[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        DistanceProfile {
            source,
            dist,
            eccentricity: ecc,
        }
    }

    /// Length of the shortest cycle, or `None` for a forest (which a finite
    /// regular graph of degree at least 3 never is).
    ///
    /// One truncated BFS per root; a BFS stops once its frontier is too deep
    /// to close a cycle shorter than the best found so far.
    pub fn girth(&self) -> Option<usize> {
        let mut best = usize::MAX;
        let mut dist = vec![UNREACHABLE; self.n];
        let mut parent = vec![u32::MAX; self.n];
        let mut touched = Vec::with_capacity(self.n);
        let mut queue = VecDeque::with_capacity(self.n);
        for root in 0..self.n {
            for &v in &touched {
                dist[v] = UNREACHABLE;
                parent[v] = u32::MAX;
            }
            touched.clear();
            queue.clear();
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                let du = dist[u] as usize;
                if 2 * du >= best {
                    break;
                }
                for &v in self.neighbors(u) {
                    let v = v as usize;
                    if dist[v] == UNREACHABLE {
                        dist[v] = (du + 1) as u32;
                        parent[v] = u as u32;
                        touched.push(v);
                        queue.push_back(v);
                    } else if parent[u] != v as u32 {
                        // non-tree edge closes a cycle through the root's tree
                        let len = du + dist[v] as usize + 1;
                        if len < best {
                            best = len;
                        }
                        if best == 3 {
                            break 'bfs;
                        }
                    }
                }
            }
            if best == 3 {
                break;
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Number of vertices at distance strictly greater than `ell` from `x`.
    /// Unreachable vertices count as infinitely far.
    pub fn distance_tail_count(&self, x: usize, ell: f64) -> usize {
        self.bfs_distances(x).tail_count(ell)
    }

    /// A proper 2-colouring if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.n];
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    let v = v as usize;
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).reached() == self.n
    }

    /// Largest eccentricity, or `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut diam = 0;
        for x in 0..self.n {
            let prof = self.bfs_distances(x);
            if prof.reached() != self.n {
                return None;
            }
            diam = diam.max(prof.eccentricity as usize);
        }
        Some(diam)
    }
}

/// BFS distances from a single source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceProfile {
    pub source: usize,
    /// Hop distance per vertex, [`UNREACHABLE`] when in another component.
    pub dist: Vec<u32>,
    /// Largest finite distance.
    pub eccentricity: u32,
}

impl DistanceProfile {
    pub fn distance(&self, y: usize) -> Option<u32> {
        let d = self.dist[y];
        (d != UNREACHABLE).then_some(d)
    }

    pub fn reached(&self) -> usize {
        self.dist.iter().filter(|&&d| d != UNREACHABLE).count()
    }

    /// Sizes of the BFS spheres, index = distance.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut layers = vec![0; self.eccentricity as usize + 1];
        for &d in &self.dist {
            if d != UNREACHABLE {
                layers[d as usize] += 1;
            }
        }
        layers
    }

    /// `#{y : dist(source, y) > ell}`.
    pub fn tail_count(&self, ell: f64) -> usize {
        self.dist
            .iter()
            .filter(|&&d| d == UNREACHABLE || f64::from(d) > ell)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{fixture, Fixture};

    fn two_k4s() -> Graph {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for u in 0..4 {
                for v in u + 1..4 {
                    edges.push((base + u, base + v));
                }
            }
        }
        Graph::from_edges(8, &edges).unwrap()
    }

    #[test]
    fn k4_distances() {
        let g = fixture(Fixture::K4);
        let prof = g.bfs_distances(0);
        assert_eq!(prof.dist, vec![0, 1, 1, 1]);
        assert_eq!(prof.eccentricity, 1);
    }

    #[test]
    fn disconnected_marks_unreachable() {
        let g = two_k4s();
        let prof = g.bfs_distances(1);
        assert_eq!(prof.distance(2), Some(1));
        for y in 4..8 {
            assert_eq!(prof.distance(y), None);
        }
        assert!(!g.is_connected());
        assert_eq!(g.diameter(), None);
        assert_eq!(g.distance_tail_count(0, 5.0), 4);
    }

    #[test]
    fn petersen_eccentricity_matches_all_pairs() {
        let g = fixture(Fixture::Petersen);
        // brute force: every pair is within two hops, some are not adjacent
        for x in 0..10 {
            let far = (0..10)
                .map(|y| {
                    if x == y {
                        0
                    } else if g.neighbors(x).contains(&(y as u32)) {
                        1
                    } else {
                        assert!(g
                            .neighbors(x)
                            .iter()
                            .any(|&z| g.neighbors(z as usize).contains(&(y as u32))));
                        2
                    }
                })
                .max()
                .unwrap();
            assert_eq!(g.bfs_distances(x).eccentricity, far);
            assert_eq!(far, 2);
        }
    }

    #[test]
    fn girths() {
        assert_eq!(fixture(Fixture::K4).girth(), Some(3));
        assert_eq!(fixture(Fixture::Petersen).girth(), Some(5));
        assert_eq!(fixture(Fixture::Heawood).girth(), Some(6));
        assert_eq!(fixture(Fixture::Cube3).girth(), Some(4));
    }

    #[test]
    fn tail_counts() {
        let k4 = fixture(Fixture::K4);
        assert_eq!(k4.distance_tail_count(0, 0.5), 3);
        assert_eq!(k4.distance_tail_count(0, 1.0), 0);
        let pet = fixture(Fixture::Petersen);
        assert_eq!(pet.bfs_distances(0).layer_sizes(), vec![1, 3, 6]);
        assert_eq!(pet.distance_tail_count(0, 1.0), 6);
    }

    #[test]
    fn bipartiteness() {
        let heawood = fixture(Fixture::Heawood);
        let colors = heawood.bipartition().expect("Heawood is bipartite");
        for (u, v) in heawood.edges() {
            assert_ne!(colors[u], colors[v]);
        }
        assert!(!fixture(Fixture::K4).is_bipartite());
        assert!(!fixture(Fixture::Petersen).is_bipartite());
        assert!(fixture(Fixture::Cube3).is_bipartite());
    }

    #[test]
    fn rejects_non_simple_input() {
        assert_eq!(
            Graph::from_edges(4, &[(0, 0)]),
            Err(GraphError::SelfLoop(0))
        );
        let lists = vec![vec![1, 1, 2], vec![0, 0, 2], vec![0, 1, 1]];
        assert!(matches!(
            Graph::from_neighbor_lists(lists),
            Err(GraphError::MultiEdge(..))
        ));
        // a 4-cycle plus a chord is not regular
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3), (0, 4)];
        assert!(matches!(
            Graph::from_edges(5, &edges),
            Err(GraphError::Irregular { .. })
        ));
    }

    #[test]
    fn edges_sorted_and_counted() {
        let g = fixture(Fixture::Petersen);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges.len(), 15);
        assert!(edges.windows(2).all(|w| w[0] < w[1]));
        assert!(edges.iter().all(|&(u, v)| u < v));
    }
}
