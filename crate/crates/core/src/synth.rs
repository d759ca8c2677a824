//! Synthetic series for the simulation study.
//!
//! Each family is parameterized by its mean and coefficient of variation.
//! A shift moves every observation after the change index by `S * mean`,
//! leaving the variance of the second segment equal to the first.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Gamma, Gumbel, Normal};

use crate::error::{Error, Result};
use crate::rng;
use crate::series::TimeSeries;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Gamma,
    Gumbel,
    Normal,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Gamma, Family::Gumbel, Family::Normal];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Gamma => "gamma",
            Family::Gumbel => "gumbel",
            Family::Normal => "normal",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(name.trim()))
    }
}

impl core::fmt::Display for Family {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    pub family: Family,
    pub mean: f64,
    /// Coefficient of variation as a fraction (0.05 for 5%).
    pub cv: f64,
}

impl DistributionSpec {
    pub const DEFAULT_MEAN: f64 = 100.0;

    pub fn new(family: Family, mean: f64, cv: f64) -> Result<Self> {
        if !(mean.is_finite() && mean > 0.0) {
            return Err(Error::InvalidParameter {
                name: "mean",
                value: mean,
            });
        }
        if !(cv.is_finite() && cv > 0.0) {
            return Err(Error::InvalidParameter {
                name: "coefficient of variation",
                value: cv,
            });
        }
        Ok(Self { family, mean, cv })
    }

    pub fn sd(&self) -> f64 {
        self.mean * self.cv
    }
}

/// Family parameters matching a target mean and CV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params {
    /// Density `rate^shape x^(shape-1) e^(-rate x) / Gamma(shape)`.
    Gamma {
        shape: f64,
        rate: f64,
    },
    /// Standard Gumbel with location and scale; mean `location + gamma_e * scale`.
    Gumbel {
        location: f64,
        scale: f64,
    },
    Normal {
        mean: f64,
        sd: f64,
    },
}

pub fn solve_params(spec: &DistributionSpec) -> Result<Params> {
    let spec = DistributionSpec::new(spec.family, spec.mean, spec.cv)?;
    Ok(match spec.family {
        Family::Gamma => {
            let shape = 1.0 / (spec.cv * spec.cv);
            Params::Gamma {
                shape,
                rate: shape / spec.mean,
            }
        }
        Family::Gumbel => {
            let scale = spec.sd() * libm::sqrt(6.0) / PI;
            Params::Gumbel {
                location: spec.mean - EULER_GAMMA * scale,
                scale,
            }
        }
        Family::Normal => Params::Normal {
            mean: spec.mean,
            sd: spec.sd(),
        },
    })
}

impl Params {
    pub fn mean(&self) -> f64 {
        match *self {
            Params::Gamma { shape, rate } => shape / rate,
            Params::Gumbel { location, scale } => location + EULER_GAMMA * scale,
            Params::Normal { mean, .. } => mean,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Params::Gamma { shape, rate } => shape / (rate * rate),
            Params::Gumbel { scale, .. } => PI * PI * scale * scale / 6.0,
            Params::Normal { sd, .. } => sd * sd,
        }
    }
}

/// A mean shift of `magnitude * mean` after `floor(tau_fraction * T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftSpec {
    pub magnitude: f64,
    pub tau_fraction: f64,
}

impl ShiftSpec {
    pub fn new(magnitude: f64, tau_fraction: f64) -> Result<Self> {
        if !magnitude.is_finite() {
            return Err(Error::InvalidParameter {
                name: "shift magnitude",
                value: magnitude,
            });
        }
        if !(tau_fraction > 0.0 && tau_fraction < 1.0) {
            return Err(Error::InvalidParameter {
                name: "change point fraction",
                value: tau_fraction,
            });
        }
        Ok(Self {
            magnitude,
            tau_fraction,
        })
    }

    /// 1-based index of the last pre-change observation, clamped to `[1, T-1]`.
    pub fn change_index(&self, len: usize) -> usize {
        // the epsilon keeps e.g. 0.7 * 30 from flooring to 20
        let raw = libm::floor(self.tau_fraction * len as f64 + 1e-9) as usize;
        raw.clamp(1, len.saturating_sub(1).max(1))
    }
}

enum Sampler {
    Gamma(Gamma<f64>),
    Gumbel(Gumbel<f64>),
    Normal(Normal<f64>),
}

impl Sampler {
    fn new(spec: &DistributionSpec) -> Result<Self> {
        let bad = |name| Error::InvalidParameter { name, value: spec.cv };
        Ok(match solve_params(spec)? {
            Params::Gamma { shape, rate } => {
                Sampler::Gamma(Gamma::new(shape, 1.0 / rate).map_err(|_| bad("gamma parameters"))?)
            }
            Params::Gumbel { location, scale } => {
                Sampler::Gumbel(Gumbel::new(location, scale).map_err(|_| bad("gumbel parameters"))?)
            }
            Params::Normal { mean, sd } => {
                Sampler::Normal(Normal::new(mean, sd).map_err(|_| bad("normal parameters"))?)
            }
        })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Sampler::Gamma(d) => d.sample(rng),
            Sampler::Gumbel(d) => d.sample(rng),
            Sampler::Normal(d) => d.sample(rng),
        }
    }
}

/// Independent draws from `spec`, shifted by `S * mean` after the change
/// index when `shift` is given. `None` yields a stationary series.
pub fn generate_series_with<R: Rng + ?Sized>(
    spec: &DistributionSpec,
    shift: Option<&ShiftSpec>,
    len: usize,
    rng: &mut R,
) -> Result<TimeSeries> {
    if len < 2 {
        return Err(Error::TooShort { len, min: 2 });
    }
    let sampler = Sampler::new(spec)?;
    let (tau, offset) = match shift {
        Some(s) => (s.change_index(len), s.magnitude * spec.mean),
        None => (len, 0.0),
    };
    let values: Vec<f64> = (0..len)
        .map(|i| {
            let x = sampler.draw(rng);
            if i >= tau {
                x + offset
            } else {
                x
            }
        })
        .collect();
    TimeSeries::new(values)
}

pub fn generate_series(
    spec: &DistributionSpec,
    shift: Option<&ShiftSpec>,
    len: usize,
    seed: u64,
) -> Result<TimeSeries> {
    generate_series_with(spec, shift, len, &mut rng::stream(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample_moments(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, libm::sqrt(var) / m)
    }

    #[test]
    fn gamma_params() {
        let p = solve_params(&DistributionSpec::new(Family::Gamma, 100.0, 0.10).unwrap()).unwrap();
        match p {
            Params::Gamma { shape, rate } => {
                assert_relative_eq!(shape, 100.0, epsilon = 1e-9);
                assert_relative_eq!(rate, 1.0, epsilon = 1e-12);
            }
            _ => unreachable!(),
        }
        let exp = solve_params(&DistributionSpec::new(Family::Gamma, 100.0, 1.0).unwrap()).unwrap();
        assert_eq!(exp, Params::Gamma { shape: 1.0, rate: 0.01 });
    }

    #[test]
    fn gumbel_params() {
        let p = solve_params(&DistributionSpec::new(Family::Gumbel, 100.0, 0.05).unwrap()).unwrap();
        let Params::Gumbel { location, scale } = p else {
            unreachable!()
        };
        assert_relative_eq!(scale, 3.898_484, epsilon = 1e-6);
        assert_relative_eq!(location, 97.749_734, epsilon = 1e-6);
    }

    #[test]
    fn params_reproduce_moments() {
        for family in Family::ALL {
            for cv in [0.05, 0.1, 0.2, 0.3, 1.0] {
                let spec = DistributionSpec::new(family, 100.0, cv).unwrap();
                let p = solve_params(&spec).unwrap();
                assert_relative_eq!(p.mean(), 100.0, max_relative = 1e-12);
                assert_relative_eq!(libm::sqrt(p.variance()), 100.0 * cv, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(DistributionSpec::new(Family::Gamma, 0.0, 0.1).is_err());
        assert!(DistributionSpec::new(Family::Normal, 100.0, -0.1).is_err());
        assert!(DistributionSpec::new(Family::Gumbel, f64::NAN, 0.1).is_err());
        let bad = DistributionSpec {
            family: Family::Gamma,
            mean: -1.0,
            cv: 0.1,
        };
        assert!(solve_params(&bad).is_err());
        assert!(ShiftSpec::new(0.1, 0.0).is_err());
        assert!(ShiftSpec::new(0.1, 1.0).is_err());
        assert!(ShiftSpec::new(f64::INFINITY, 0.5).is_err());
    }

    #[test]
    fn change_index_floors_and_clamps() {
        let at = |f: f64, n| ShiftSpec::new(0.1, f).unwrap().change_index(n);
        assert_eq!(at(0.1, 10), 1);
        assert_eq!(at(0.5, 10), 5);
        assert_eq!(at(0.7, 30), 21);
        assert_eq!(at(0.7, 100), 70);
        assert_eq!(at(0.48, 85), 40);
        assert_eq!(at(0.1, 5), 1);
        assert_eq!(at(0.99, 10), 9);
        assert_eq!(at(0.01, 50), 1);
    }

    #[test]
    fn deterministic_given_seed() {
        let spec = DistributionSpec::new(Family::Gumbel, 100.0, 0.2).unwrap();
        let shift = ShiftSpec::new(0.05, 0.5).unwrap();
        let a = generate_series(&spec, Some(&shift), 50, 99).unwrap();
        let b = generate_series(&spec, Some(&shift), 50, 99).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_series(&spec, Some(&shift), 50, 100).unwrap());
    }

    #[test]
    fn too_short_series() {
        let spec = DistributionSpec::new(Family::Normal, 100.0, 0.2).unwrap();
        assert_eq!(
            generate_series(&spec, None, 1, 0),
            Err(Error::TooShort { len: 1, min: 2 })
        );
    }

    #[test]
    fn gamma_draws_positive() {
        let spec = DistributionSpec::new(Family::Gamma, 100.0, 0.3).unwrap();
        let s = generate_series(&spec, None, 100_000, 5).unwrap();
        assert!(s.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn stationary_mean() {
        let spec = DistributionSpec::new(Family::Gamma, 100.0, 0.3).unwrap();
        let s = generate_series(&spec, None, 1_000_000, 6).unwrap();
        assert_relative_eq!(s.mean(), 100.0, max_relative = 0.005);
    }

    #[test]
    fn shifted_segment_mean() {
        let spec = DistributionSpec::new(Family::Gamma, 100.0, 0.05).unwrap();
        let shift = ShiftSpec::new(0.10, 0.5).unwrap();
        let n = 1_000_000;
        let s = generate_series(&spec, Some(&shift), n, 7).unwrap();
        let (first, second) = s.split_at(n / 2);
        let (m1, cv1) = sample_moments(first);
        let (m2, _) = sample_moments(second);
        assert_relative_eq!(m1, 100.0, max_relative = 0.005);
        assert_relative_eq!(m2, 110.0, max_relative = 0.005);
        assert_relative_eq!(cv1, 0.05, max_relative = 0.005);
        // location shift keeps the spread of the second segment
        let sd2 = sample_moments(second).1 * m2;
        assert_relative_eq!(sd2, 5.0, max_relative = 0.01);
    }

    #[test]
    fn opposite_shifts_mirror_about_mean() {
        let spec = DistributionSpec::new(Family::Normal, 100.0, 0.1).unwrap();
        let n = 400_000;
        let up = generate_series(&spec, Some(&ShiftSpec::new(0.05, 0.5).unwrap()), n, 8).unwrap();
        let down = generate_series(&spec, Some(&ShiftSpec::new(-0.05, 0.5).unwrap()), n, 8).unwrap();
        let tail_mean = |s: &TimeSeries| s[n / 2..].iter().sum::<f64>() / (n / 2) as f64;
        assert_relative_eq!(tail_mean(&up) - 100.0, 100.0 - tail_mean(&down), epsilon = 0.1);
    }

    #[test]
    fn normal_negative_fraction_is_tiny() {
        let spec = DistributionSpec::new(Family::Normal, 100.0, 0.3).unwrap();
        let s = generate_series(&spec, None, 1_000_000, 12).unwrap();
        let neg = s.iter().filter(|&&x| x < 0.0).count();
        assert!((neg as f64) / 1e6 < 0.001, "{neg}");
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::parse(f.as_str()), Some(f));
        }
        assert_eq!(Family::parse(" Gamma "), Some(Family::Gamma));
        assert_eq!(Family::parse("weibull"), None);
    }
}
