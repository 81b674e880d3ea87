//! Deterministic instance generation.
//!
//! * `gen1`: `c_i` and `w_i` independent and uniform on `{1..100}`.
//! * `gen2`: `c_i` uniform on `{1..100}`, `w_i` uniform on
//!   `{max(1, c_i - 5) .. min(100, c_i + 5)}`.
//! * `partition`: `c_i = w_i = a_i` with `a_i` uniform on `{1..100}` and
//!   an even total; `B = A - 1` where `A` is half the total.
//!
//! `gen1` and `gen2` use `B = floor(sum w / 4)`. A draw in which some weight
//! exceeds the budget is discarded and the next substream is tried.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, Meta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Gen1,
    Gen2,
    Partition,
}

impl Generator {
    pub fn tag(self) -> &'static str {
        match self {
            Generator::Gen1 => "gen1",
            Generator::Gen2 => "gen2",
            Generator::Partition => "partition",
        }
    }

    fn salt(self) -> u64 {
        match self {
            Generator::Gen1 => 0x6765_6e31,
            Generator::Gen2 => 0x6765_6e32,
            Generator::Partition => 0x7061_7274,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "gen1" => Ok(Generator::Gen1),
            "gen2" => Ok(Generator::Gen2),
            "partition" => Ok(Generator::Partition),
            _ => Err(Error::Input(format!("unknown generator {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub generator: Generator,
    pub n: usize,
    pub p: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(generator: Generator, n: usize, p: usize, seed: u64) -> Result<Self> {
        let spec = Self { generator, n, p, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 || self.p > self.n {
            return Err(Error::Input(format!(
                "generator spec needs 1 <= p <= n, got n = {}, p = {}",
                self.n, self.p
            )));
        }
        Ok(())
    }

    /// Identifier used for file names and result rows.
    pub fn id(&self) -> String {
        format!("{}_n{}_p{}_s{}", self.generator, self.n, self.p, self.seed)
    }
}

/// Positive integers with an even sum, the input of a partition question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    a: Vec<u64>,
    half: u64,
}

impl PartitionSpec {
    pub fn new(a: Vec<u64>) -> Result<Self> {
        if a.is_empty() || a.contains(&0) {
            return Err(Error::Input("partition numbers must be positive".into()));
        }
        let total: u64 = a.iter().sum();
        if total % 2 == 1 {
            return Err(Error::Input(format!("partition total {total} is odd")));
        }
        Ok(Self { a, half: total / 2 })
    }

    pub fn numbers(&self) -> &[u64] {
        &self.a
    }

    /// Half of the total.
    pub fn half(&self) -> u64 {
        self.half
    }
}

/// `c = w = a`, `B = A - 1`. With `p = 1` the optimum is at most `A`
/// exactly when the numbers split into two equal halves.
pub fn from_partition(ps: &PartitionSpec, p: usize) -> Result<Instance> {
    Instance::new(ps.a.clone(), ps.a.clone(), ps.half - 1, p)
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of substream `sub` for `spec`.
fn stream_seed(spec: &GenSpec, sub: u64) -> u64 {
    [spec.generator.salt(), spec.n as u64, spec.p as u64, spec.seed, sub]
        .into_iter()
        .fold(0u64, |acc, v| mix(acc ^ v))
}

/// Upper limit on discarded draws before giving up.
pub const MAX_REDRAWS: u64 = 50_000_000;

fn draw(spec: &GenSpec, rng: &mut ChaCha8Rng) -> (Vec<u64>, Vec<u64>, u64) {
    let n = spec.n;
    match spec.generator {
        Generator::Gen1 => {
            let mut costs = Vec::with_capacity(n);
            let mut weights = Vec::with_capacity(n);
            for _ in 0..n {
                costs.push(rng.gen_range(1..=100u64));
                weights.push(rng.gen_range(1..=100u64));
            }
            let b = weights.iter().sum::<u64>() / 4;
            (costs, weights, b)
        }
        Generator::Gen2 => {
            let mut costs = Vec::with_capacity(n);
            let mut weights = Vec::with_capacity(n);
            for _ in 0..n {
                let c = rng.gen_range(1..=100u64);
                let lo = c.saturating_sub(5).max(1);
                let hi = (c + 5).min(100);
                costs.push(c);
                weights.push(rng.gen_range(lo..=hi));
            }
            let b = weights.iter().sum::<u64>() / 4;
            (costs, weights, b)
        }
        Generator::Partition => {
            let mut a: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=100u64)).collect();
            while a.iter().sum::<u64>() % 2 == 1 {
                a[n - 1] = rng.gen_range(1..=100u64);
            }
            let half = a.iter().sum::<u64>() / 2;
            (a.clone(), a, half.saturating_sub(1))
        }
    }
}

/// Generate the instance described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    let impossible = match spec.generator {
        // a weight within floor(sum/4) needs at least four items
        Generator::Gen1 | Generator::Gen2 => spec.n < 4,
        // every a_i <= A - 1 needs at least three numbers
        Generator::Partition => spec.n < 3,
    };
    if impossible {
        return Err(Error::Input(format!(
            "{} cannot keep every weight within the budget for n = {}",
            spec.generator, spec.n
        )));
    }
    for sub in 0..=MAX_REDRAWS {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(spec, sub));
        let (costs, weights, budget) = draw(spec, &mut rng);
        if weights.iter().any(|&w| w > budget) {
            continue;
        }
        let meta = Meta {
            generator: spec.generator.tag().to_string(),
            seed: spec.seed,
            redraws: sub,
        };
        return Ok(Instance::new(costs, weights, budget, spec.p)?.with_meta(Some(meta)));
    }
    Err(Error::Capacity(format!("no admissible draw for {} after {MAX_REDRAWS} redraws", spec.id())))
}

/// Specs for `count` instances with seeds `base_seed, base_seed + 1, ...`.
pub fn batch_specs(generator: Generator, n: usize, p: usize, base_seed: u64, count: usize) -> Result<Vec<GenSpec>> {
    (0..count as u64)
        .map(|i| GenSpec::new(generator, n, p, base_seed.wrapping_add(i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen1_ranges_and_budget() {
        for seed in 0..20 {
            let inst = generate(&GenSpec::new(Generator::Gen1, 20, 1, seed).unwrap()).unwrap();
            assert!(inst.costs().iter().chain(inst.weights()).all(|&v| (1..=100).contains(&v)));
            let total: u64 = inst.weights().iter().sum();
            assert_eq!(inst.budget(), total / 4);
            assert!(inst.all_attackable());
        }
    }

    #[test]
    fn gen2_weights_follow_costs() {
        for seed in 0..20 {
            let inst = generate(&GenSpec::new(Generator::Gen2, 15, 2, seed).unwrap()).unwrap();
            for (&c, &w) in inst.costs().iter().zip(inst.weights()) {
                assert!(c.abs_diff(w) <= 5);
                assert!((1..=100).contains(&w));
            }
        }
    }

    #[test]
    fn deterministic_json() {
        let spec = GenSpec::new(Generator::Gen2, 12, 3, 99).unwrap();
        assert_eq!(generate(&spec).unwrap().to_json().unwrap(), generate(&spec).unwrap().to_json().unwrap());
        let other = GenSpec::new(Generator::Gen1, 12, 3, 99).unwrap();
        assert_ne!(generate(&spec).unwrap().costs(), generate(&other).unwrap().costs());
    }

    #[test]
    fn tiny_n_is_rejected_up_front() {
        assert!(generate(&GenSpec::new(Generator::Gen1, 3, 1, 0).unwrap()).is_err());
        assert!(generate(&GenSpec::new(Generator::Partition, 2, 1, 0).unwrap()).is_err());
        assert!(GenSpec::new(Generator::Gen1, 3, 4, 0).is_err());
    }

    #[test]
    fn four_items_need_redraws() {
        let inst = generate(&GenSpec::new(Generator::Gen1, 4, 1, 7).unwrap()).unwrap();
        assert!(inst.all_attackable());
        assert!(inst.meta().unwrap().redraws > 0);
    }

    #[test]
    fn partition_construction() {
        let ps = PartitionSpec::new(vec![1, 1, 2]).unwrap();
        assert_eq!(ps.half(), 2);
        let inst = from_partition(&ps, 1).unwrap();
        assert_eq!(inst.costs(), &[1, 1, 2]);
        assert_eq!(inst.weights(), &[1, 1, 2]);
        assert_eq!(inst.budget(), 1);
        assert!(PartitionSpec::new(vec![1, 2]).is_err());
        let inst = from_partition(&PartitionSpec::new(vec![1, 1]).unwrap(), 1).unwrap();
        assert_eq!(inst.budget(), 0);
    }

    #[test]
    fn partition_generator_keeps_equal_data() {
        let inst = generate(&GenSpec::new(Generator::Partition, 8, 1, 3).unwrap()).unwrap();
        assert_eq!(inst.costs(), inst.weights());
        let total: u64 = inst.weights().iter().sum();
        assert_eq!(total % 2, 0);
        assert_eq!(inst.budget(), total / 2 - 1);
    }
}
