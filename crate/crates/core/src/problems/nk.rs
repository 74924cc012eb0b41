use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::bitpoint::{BitPoint, MAX_N};

/// A Kauffman NK landscape instance: `n` loci, each interacting with `k`
/// random other loci, with one contribution table per locus.
///
/// The fitness of a point is the mean of the per-locus contributions, each
/// looked up by the (k+1)-bit local configuration formed from the locus's own
/// bit (most significant) followed by its partner bits in stored order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NkInstance {
    n: usize,
    k: usize,
    seed: u64,
    /// `neighborhoods[i]` lists the k partner loci of locus i, ascending.
    neighborhoods: Vec<Vec<usize>>,
    /// `tables[i][c]` is the contribution of locus i under configuration c.
    tables: Vec<Vec<f64>>,
}

impl NkInstance {
    /// Generates an instance from `(n, k, seed)`; the same triple always
    /// reproduces the same instance bit-exactly.
    pub fn generate(n: usize, k: usize, seed: u64) -> Result<Self> {
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::Input(format!("n must be in 1..={MAX_N}, got {n}")));
        }
        if k >= n {
            return Err(Error::Input(format!("k must satisfy 0 <= k <= n-1, got k={k} n={n}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut neighborhoods = Vec::with_capacity(n);
        for i in 0..n {
            let mut partners: Vec<usize> = rand::seq::index::sample(&mut rng, n - 1, k)
                .into_iter()
                .map(|j| if j >= i { j + 1 } else { j })
                .collect();
            partners.sort_unstable();
            neighborhoods.push(partners);
        }
        let table_len = 1usize << (k + 1);
        let tables = (0..n)
            .map(|_| (0..table_len).map(|_| rng.gen::<f64>()).collect())
            .collect();
        Ok(NkInstance { n, k, seed, neighborhoods, tables })
    }

    /// Builds an instance from explicit parts, validating the invariants.
    /// Used for hand-crafted landscapes in tests and loaded files.
    pub fn from_parts(
        n: usize,
        k: usize,
        seed: u64,
        neighborhoods: Vec<Vec<usize>>,
        tables: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::Input(format!("n must be in 1..={MAX_N}, got {n}")));
        }
        if k >= n {
            return Err(Error::Input(format!("k must satisfy 0 <= k <= n-1, got k={k} n={n}")));
        }
        if neighborhoods.len() != n || tables.len() != n {
            return Err(Error::Input("neighborhoods and tables must have n entries".into()));
        }
        let table_len = 1usize << (k + 1);
        for (i, (nb, t)) in neighborhoods.iter().zip(&tables).enumerate() {
            if nb.len() != k || nb.iter().any(|&j| j == i || j >= n) {
                return Err(Error::Input(format!(
                    "neighborhood of locus {i} must hold {k} distinct loci != {i}"
                )));
            }
            let mut sorted = nb.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != k {
                return Err(Error::Input(format!("neighborhood of locus {i} has duplicates")));
            }
            if t.len() != table_len {
                return Err(Error::Input(format!(
                    "table of locus {i} must have {table_len} entries, got {}",
                    t.len()
                )));
            }
            if t.iter().any(|&v| !(0.0..1.0).contains(&v)) {
                return Err(Error::Input(format!("table of locus {i} has entries outside [0,1)")));
            }
        }
        Ok(NkInstance { n, k, seed, neighborhoods, tables })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn neighborhoods(&self) -> &[Vec<usize>] {
        &self.neighborhoods
    }

    /// Mean of the per-locus table contributions; always in [0, 1).
    pub fn fitness(&self, p: &BitPoint) -> f64 {
        debug_assert_eq!(p.len(), self.n);
        let mut sum = 0.0;
        for i in 0..self.n {
            let mut config = usize::from(p.bit(i));
            for &j in &self.neighborhoods[i] {
                config = config << 1 | usize::from(p.bit(j));
            }
            sum += self.tables[i][config];
        }
        sum / self.n as f64
    }

    pub fn validate(&self) -> Result<()> {
        Self::from_parts(
            self.n,
            self.k,
            self.seed,
            self.neighborhoods.clone(),
            self.tables.clone(),
        )
        .map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let a = NkInstance::generate(16, 4, 7).unwrap();
        let b = NkInstance::generate(16, 4, 7).unwrap();
        assert_eq!(a, b);
        let c = NkInstance::generate(16, 4, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn k_zero_and_k_max_shapes() {
        let z = NkInstance::generate(16, 0, 1).unwrap();
        assert!(z.neighborhoods.iter().all(|nb| nb.is_empty()));
        assert!(z.tables.iter().all(|t| t.len() == 2));

        let full = NkInstance::generate(16, 15, 1).unwrap();
        for (i, nb) in full.neighborhoods.iter().enumerate() {
            assert_eq!(nb.len(), 15);
            assert!(!nb.contains(&i));
        }
    }

    #[test]
    fn k_out_of_range_is_input_error() {
        assert!(NkInstance::generate(16, 16, 0).is_err());
    }

    #[test]
    fn constant_tables_give_constant_fitness() {
        let n = 6;
        let inst = NkInstance::from_parts(
            n,
            1,
            0,
            (0..n).map(|i| vec![(i + 1) % n]).collect(),
            vec![vec![0.37; 4]; n],
        )
        .unwrap();
        for p in BitPoint::enumerate(n) {
            assert!((inst.fitness(&p) - 0.37).abs() < 1e-15);
        }
    }

    #[test]
    fn two_locus_hand_example() {
        // t0 = {00:0.2, 01:0.4, 10:0.6, 11:0.8}, t1 = {00:0.0, 01:0.9,
        // 10:0.1, 11:0.3}; point "01" reads t0[01] = 0.4 and t1[10] = 0.1,
        // so fitness = 0.25.
        let inst = NkInstance::from_parts(
            2,
            1,
            0,
            vec![vec![1], vec![0]],
            vec![vec![0.2, 0.4, 0.6, 0.8], vec![0.0, 0.9, 0.1, 0.3]],
        )
        .unwrap();
        let p: BitPoint = "01".parse().unwrap();
        assert!((inst.fitness(&p) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn fitness_stays_in_unit_interval() {
        let inst = NkInstance::generate(10, 3, 99).unwrap();
        for p in BitPoint::enumerate(10) {
            let f = inst.fitness(&p);
            assert!((0.0..1.0).contains(&f));
        }
    }
}
