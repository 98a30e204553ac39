use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::moments::Dataset;
use crate::scalar::Scalar;

/// Generator for replica `replica` of a run seeded with `seed`: one
/// ChaCha stream per replica, so results do not depend on scheduling or on
/// how many replicas run.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

/// `N` rows drawn uniformly with replacement.
pub fn resample<T: Scalar, R: Rng + ?Sized>(data: &Dataset<T>, rng: &mut R) -> Dataset<T> {
    let n = data.n();
    let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    data.select_rows(&rows)
}

/// `X^1, .., X^{depth}` with each dataset resampled from the previous one.
#[derive(Clone, Debug)]
pub struct ResampleChain<T> {
    pub datasets: Vec<Dataset<T>>,
}

impl<T: Scalar> ResampleChain<T> {
    /// A chain whose first element is `first` itself.
    pub fn draw<R: Rng + ?Sized>(first: Dataset<T>, depth: usize, rng: &mut R) -> Self {
        let mut datasets = Vec::with_capacity(depth);
        if depth > 0 {
            datasets.push(first);
        }
        while datasets.len() < depth {
            let next = resample(datasets.last().expect("nonempty"), rng);
            datasets.push(next);
        }
        Self { datasets }
    }

    pub fn depth(&self) -> usize {
        self.datasets.len()
    }
}

/// Every index vector in `{0..n-1}^n`, in lexicographic order.
pub fn all_index_vectors(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (n as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = (code % n as u64) as usize;
            code /= n as u64;
        }
        v
    })
}
