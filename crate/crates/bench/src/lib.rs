//! Seeded workloads shared by the benchmarks.

use equispace::body::ConvexBody;
use equispace::fixtures::{random_covering, random_hfamily, random_point_in, random_simplex};
use equispace::{Point, Simplex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Workload {
    pub simplex: Simplex,
    pub bodies: Vec<ConvexBody>,
    pub probes: Vec<Point>,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random H-family in dimension `n` with `probes` query points inside the simplex.
pub fn hfamily(seed: u64, n: usize, probes: usize) -> Workload {
    let mut rng = rng(seed);
    let simplex = random_simplex(&mut rng, n);
    let bodies = random_hfamily(&mut rng, &simplex);
    let probes = (0..probes).map(|_| random_point_in(&mut rng, &simplex)).collect();
    Workload { simplex, bodies, probes }
}

/// A random covering of a random simplex in dimension `n`, suitable as homotopy target.
pub fn covering(seed: u64, n: usize) -> Workload {
    let mut rng = rng(seed);
    let simplex = random_simplex(&mut rng, n);
    let bodies = random_covering(&mut rng, &simplex);
    Workload { simplex, bodies, probes: Vec::new() }
}
