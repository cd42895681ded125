use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::validate::{join, Validator};

const MAX_REJECTIONS: usize = 1000;

/// Normal distribution truncated to an interval.
///
/// The interval is the field's legal range, optionally narrowed by `min` and
/// `max`. A zero `sd` makes the distribution degenerate at `mean` and draws
/// consume no randomness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncatedNormal {
    pub mean: f64,
    pub sd: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

impl TruncatedNormal {
    pub const fn new(mean: f64, sd: f64) -> Self {
        Self {
            mean,
            sd,
            min: None,
            max: None,
        }
    }

    pub const fn fixed(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn bounds(&self, legal: (f64, f64)) -> (f64, f64) {
        (
            self.min.map_or(legal.0, |m| m.max(legal.0)),
            self.max.map_or(legal.1, |m| m.min(legal.1)),
        )
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, legal: (f64, f64)) -> f64 {
        let (lo, hi) = self.bounds(legal);
        if self.sd == 0.0 || lo == hi {
            return self.mean.clamp(lo, hi);
        }
        let normal = Normal::new(self.mean, self.sd).expect("validated sd");
        for _ in 0..MAX_REJECTIONS {
            let x = normal.sample(rng);
            if (lo..=hi).contains(&x) {
                return x;
            }
        }
        // Pathologically wide sd relative to the interval: the truncated
        // density is then close to uniform anyway.
        rng.random_range(lo..=hi)
    }

    pub fn validate_into(&self, path: &str, legal: (f64, f64), v: &mut Validator) {
        let (mean_p, sd_p) = (join(path, "mean"), join(path, "sd"));
        if v.finite(&sd_p, self.sd) && self.sd < 0.0 {
            v.push(&sd_p, format!("must be non-negative, got {}", self.sd));
        }
        for (name, bound) in [("min", self.min), ("max", self.max)] {
            if let Some(b) = bound {
                v.range(&join(path, name), b, legal.0, legal.1);
            }
        }
        let (lo, hi) = self.bounds(legal);
        if lo > hi {
            v.push(path, format!("empty truncation interval [{lo}, {hi}]"));
        } else if v.finite(&mean_p, self.mean) && !(lo..=hi).contains(&self.mean) {
            v.push(
                &mean_p,
                format!("mean {} outside truncation bounds [{lo}, {hi}]", self.mean),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_returns_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(TruncatedNormal::fixed(0.3).sample(&mut rng, (0.0, 1.0)), 0.3);
    }

    #[test]
    fn samples_stay_in_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = TruncatedNormal {
            mean: 0.9,
            sd: 0.5,
            min: Some(0.2),
            max: None,
        };
        for _ in 0..5000 {
            let x = d.sample(&mut rng, (0.0, 1.0));
            assert!((0.2..=1.0).contains(&x));
        }
    }

    #[test]
    fn mean_outside_bounds_is_reported() {
        let mut v = Validator::new();
        TruncatedNormal::new(1.5, 0.1).validate_into("w", (0.0, 1.0), &mut v);
        let vs = v.into_violations();
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].path, "w.mean");
    }
}
