//! Parallel drivers over start vertices. `RCW_THREADS` caps the pool size.

use rayon::prelude::*;
use rcw_core::diameter::DistanceTable;
use rcw_core::mixing::{start_stats, MixError, MixingProfile, Starts};
use rcw_core::Graph;

pub const THREADS_VAR: &str = "RCW_THREADS";

/// Pool size from `RCW_THREADS`, if set to a positive integer.
pub fn requested_threads() -> Option<usize> {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

pub fn pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = requested_threads() {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool")
}

/// Same result as [`rcw_core::mixing::mixing_profile`], starts in parallel.
pub fn profile(
    g: &Graph,
    t_min: u32,
    t_max: u32,
    starts: Starts,
    keep_detail: bool,
) -> Result<MixingProfile, MixError> {
    let (starts, sampled) = starts.resolve(g.n());
    let per_start = starts
        .par_iter()
        .map(|&x| start_stats(g, x, t_min, t_max))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MixingProfile::from_stats(
        g,
        t_min,
        t_max,
        starts,
        sampled,
        per_start,
        keep_detail,
    ))
}

pub fn distance_table(g: &Graph) -> DistanceTable {
    let layers = (0..g.n())
        .into_par_iter()
        .map(|x| g.bfs_distances(x).layer_sizes())
        .collect();
    DistanceTable::from_layers(g.n(), layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rcw_core::gen::{fixture, Fixture};
    use rcw_core::mixing::mixing_profile;

    #[test]
    fn parallel_profile_matches_sequential() {
        let g = fixture(Fixture::Petersen);
        let a = profile(&g, 0, 9, Starts::All, true).unwrap();
        let b = mixing_profile(&g, 0, 9, Starts::All, true).unwrap();
        assert_eq!(a, b);
        assert_eq!(distance_table(&g), DistanceTable::compute(&g));
    }
}
