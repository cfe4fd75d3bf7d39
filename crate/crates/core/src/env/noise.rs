use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    Gaussian,
    /// Uniform on `[-sigma, sigma]`.
    Uniform,
    /// Reward is a Bernoulli draw with the entry as success probability.
    BernoulliReward,
    None,
}

impl NoiseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::Uniform => "uniform",
            NoiseKind::BernoulliReward => "bernoulli-reward",
            NoiseKind::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gaussian" => Some(NoiseKind::Gaussian),
            "uniform" => Some(NoiseKind::Uniform),
            "bernoulli-reward" => Some(NoiseKind::BernoulliReward),
            "none" => Some(NoiseKind::None),
            _ => None,
        }
    }
}

/// Observation noise added to (or replacing) the mean reward of a pull.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    /// Sub-Gaussian scale. Standard deviation for `gaussian`, half-width for
    /// `uniform`; ignored by `bernoulli-reward` and `none`.
    pub sigma: f64,
}

impl NoiseModel {
    pub fn none() -> Self {
        NoiseModel {
            kind: NoiseKind::None,
            sigma: 0.0,
        }
    }

    pub fn gaussian(sigma: f64) -> Self {
        NoiseModel {
            kind: NoiseKind::Gaussian,
            sigma,
        }
    }

    pub fn uniform(sigma: f64) -> Self {
        NoiseModel {
            kind: NoiseKind::Uniform,
            sigma,
        }
    }

    /// Bernoulli rewards are 1/2-sub-Gaussian.
    pub fn bernoulli() -> Self {
        NoiseModel {
            kind: NoiseKind::BernoulliReward,
            sigma: 0.5,
        }
    }

    /// Draws a reward with expectation `mean`.
    pub fn sample<R: Rng + ?Sized>(&self, mean: f64, rng: &mut R) -> f64 {
        match self.kind {
            NoiseKind::Gaussian => {
                let z: f64 = StandardNormal.sample(rng);
                mean + self.sigma * z
            }
            NoiseKind::Uniform => {
                if self.sigma == 0.0 {
                    mean
                } else {
                    mean + rng.gen_range(-self.sigma..=self.sigma)
                }
            }
            NoiseKind::BernoulliReward => {
                debug_assert!((0.0..=1.0).contains(&mean), "bernoulli mean {mean} outside [0, 1]");
                if rng.gen_bool(mean.clamp(0.0, 1.0)) {
                    1.0
                } else {
                    0.0
                }
            }
            NoiseKind::None => mean,
        }
    }

    /// Variance of a single observation of an entry with the given mean.
    pub fn variance(&self, mean: f64) -> f64 {
        match self.kind {
            NoiseKind::Gaussian => self.sigma * self.sigma,
            NoiseKind::Uniform => self.sigma * self.sigma / 3.0,
            NoiseKind::BernoulliReward => mean * (1.0 - mean),
            NoiseKind::None => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn empirical(model: NoiseModel, mean: f64) -> (f64, f64) {
        let mut r = rng::stream(11, rng::NOISE);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| model.sample(mean, &mut r)).collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        (m, v)
    }

    #[test]
    fn variances_match_nominal_within_ten_percent() {
        for (model, mean) in [
            (NoiseModel::gaussian(0.5), 1.0),
            (NoiseModel::uniform(0.5), -2.0),
            (NoiseModel::bernoulli(), 0.3),
        ] {
            let (m, v) = empirical(model, mean);
            let nominal = model.variance(mean);
            assert!((v - nominal).abs() <= 0.1 * nominal, "{model:?}: {v} vs {nominal}");
            assert!((m - mean).abs() < 0.01, "{model:?}: mean {m}");
        }
    }

    #[test]
    fn no_noise_is_exact() {
        let mut r = rng::stream(0, rng::NOISE);
        assert_eq!(NoiseModel::none().sample(0.25, &mut r), 0.25);
        assert_eq!(NoiseModel::none().variance(0.25), 0.0);
    }
}
