//! Per-element weight distributions: seeded sampling, exact enumeration of
//! finite outcome spaces, and the closed-form statistics thresholds need.
//!
//! Finite kinds store exact rational values and probabilities so the exact
//! lane never sees rounding. Continuous kinds (uniform interval,
//! exponential) expose closed-form cdf/pdf/quantile and are excluded from
//! exact enumeration rather than discretized.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::scalar::{rat_from_f64, Rat, Scalar};
use crate::set::GroundSet;
use crate::{Error, Result};
use std::sync::Arc;

/// Largest product outcome space [`WeightProfile::enumerate_outcomes`] will
/// enumerate.
pub const MAX_OUTCOMES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum WeightDistribution {
    /// Always `value`.
    PointMass { value: Rat },
    /// Finitely many non-negative values; stored sorted ascending with
    /// duplicates merged and probabilities normalized to sum exactly 1.
    FiniteDiscrete { values: Vec<Rat>, probs: Vec<Rat> },
    /// Uniform on `[a, b]`, `0 <= a < b`.
    UniformInterval { a: f64, b: f64 },
    /// Exponential with the given rate.
    Exponential { rate: f64 },
}

impl WeightDistribution {
    pub fn point_mass(value: Rat) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::input("point mass must be non-negative"));
        }
        Ok(WeightDistribution::PointMass { value })
    }

    /// Sorts values ascending, merges duplicates, and rescales the
    /// probabilities to sum exactly 1 (rejecting totals further than 1e-12
    /// from 1, so only representation noise is absorbed).
    pub fn finite_discrete(pairs: Vec<(Rat, Rat)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::input("finite distribution needs at least one value"));
        }
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut values: Vec<Rat> = Vec::new();
        let mut probs: Vec<Rat> = Vec::new();
        for (v, p) in pairs {
            if v.is_negative() {
                return Err(Error::input("weights are non-negative"));
            }
            if p.is_negative() {
                return Err(Error::input("probabilities are non-negative"));
            }
            if values.last() == Some(&v) {
                let last = probs.last_mut().unwrap();
                *last += p;
            } else {
                values.push(v);
                probs.push(p);
            }
        }
        let total: Rat = probs.iter().cloned().sum();
        if total.is_zero() {
            return Err(Error::input("probabilities sum to zero"));
        }
        let drift = (total.clone() - Rat::one()).abs();
        if drift > crate::scalar::rat(1, 1_000_000_000_000) {
            return Err(Error::input(format!(
                "probabilities sum to {}, not 1",
                drift.to_f64_lossy() + 1.0
            )));
        }
        for p in &mut probs {
            *p = p.clone() / total.clone();
        }
        Ok(WeightDistribution::FiniteDiscrete { values, probs })
    }

    pub fn finite_discrete_f64(pairs: &[(f64, f64)]) -> Result<Self> {
        let converted = pairs
            .iter()
            .map(|&(v, p)| Ok((rat_from_f64(v)?, rat_from_f64(p)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::finite_discrete(converted)
    }

    /// `value` with probability `p`, otherwise 0.
    pub fn bernoulli(value: Rat, p: Rat) -> Result<Self> {
        let q = Rat::one() - p.clone();
        Self::finite_discrete(vec![(Rat::zero(), q), (value, p)])
    }

    pub fn uniform_interval(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b > a && b.is_finite()) {
            return Err(Error::input("uniform interval requires 0 <= a < b"));
        }
        Ok(WeightDistribution::UniformInterval { a, b })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::input("exponential rate must be positive"));
        }
        Ok(WeightDistribution::Exponential { rate })
    }

    pub fn is_finite_support(&self) -> bool {
        matches!(
            self,
            WeightDistribution::PointMass { .. } | WeightDistribution::FiniteDiscrete { .. }
        )
    }

    /// `(value, probability)` pairs for finite kinds.
    pub fn outcomes(&self) -> Option<Vec<(Rat, Rat)>> {
        match self {
            WeightDistribution::PointMass { value } => {
                Some(vec![(value.clone(), Rat::one())])
            }
            WeightDistribution::FiniteDiscrete { values, probs } => Some(
                values.iter().cloned().zip(probs.iter().cloned()).collect(),
            ),
            _ => None,
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            WeightDistribution::PointMass { value } => value.to_f64_lossy(),
            WeightDistribution::FiniteDiscrete { values, probs } => {
                let u: f64 = rng.gen::<f64>();
                let mut acc = 0.0;
                for (v, p) in values.iter().zip(probs) {
                    acc += p.to_f64_lossy();
                    if u < acc {
                        return v.to_f64_lossy();
                    }
                }
                values.last().unwrap().to_f64_lossy()
            }
            WeightDistribution::UniformInterval { a, b } => a + (b - a) * rng.gen::<f64>(),
            WeightDistribution::Exponential { rate } => {
                let u: f64 = rng.gen::<f64>();
                -(1.0 - u).ln() / rate
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            WeightDistribution::PointMass { value } => {
                if x >= value.to_f64_lossy() {
                    1.0
                } else {
                    0.0
                }
            }
            WeightDistribution::FiniteDiscrete { values, probs } => values
                .iter()
                .zip(probs)
                .take_while(|(v, _)| v.to_f64_lossy() <= x)
                .map(|(_, p)| p.to_f64_lossy())
                .sum(),
            WeightDistribution::UniformInterval { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            WeightDistribution::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0 - (-rate * x).exp()
                }
            }
        }
    }

    /// Density for continuous kinds.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        match self {
            WeightDistribution::UniformInterval { a, b } => {
                Ok(if x >= *a && x <= *b { 1.0 / (b - a) } else { 0.0 })
            }
            WeightDistribution::Exponential { rate } => {
                Ok(if x >= 0.0 { rate * (-rate * x).exp() } else { 0.0 })
            }
            _ => Err(Error::input("density requires a continuous distribution")),
        }
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::input("quantile argument must lie in [0,1]"));
        }
        match self {
            WeightDistribution::UniformInterval { a, b } => Ok(a + (b - a) * u),
            WeightDistribution::Exponential { rate } => Ok(-(1.0 - u).ln() / rate),
            _ => Err(Error::input("quantile requires a continuous distribution")),
        }
    }

    /// Support bounds `(min, max)`; the max of an exponential is reported
    /// at a far-tail quantile for grid construction.
    pub fn support_bounds(&self) -> (f64, f64) {
        match self {
            WeightDistribution::PointMass { value } => {
                let v = value.to_f64_lossy();
                (v, v)
            }
            WeightDistribution::FiniteDiscrete { values, .. } => (
                values.first().unwrap().to_f64_lossy(),
                values.last().unwrap().to_f64_lossy(),
            ),
            WeightDistribution::UniformInterval { a, b } => (*a, *b),
            WeightDistribution::Exponential { rate } => (0.0, -((1e-9f64).ln()) / rate),
        }
    }

    pub fn mean_exact(&self) -> Result<Rat> {
        self.outcomes()
            .map(|outs| outs.into_iter().map(|(v, p)| v * p).sum())
            .ok_or_else(|| Error::input("exact mean requires a finite distribution"))
    }
}

/// One independent weight distribution per ground element.
#[derive(Debug, Clone)]
pub struct WeightProfile {
    ground: Arc<GroundSet>,
    dists: Vec<WeightDistribution>,
}

impl WeightProfile {
    pub fn new(ground: Arc<GroundSet>, dists: Vec<WeightDistribution>) -> Result<Self> {
        if dists.len() != ground.size() {
            return Err(Error::input(format!(
                "profile has {} distributions for {} ground elements",
                dists.len(),
                ground.size()
            )));
        }
        Ok(WeightProfile { ground, dists })
    }

    pub fn from_dists(dists: Vec<WeightDistribution>) -> Result<Self> {
        let ground = GroundSet::new(dists.len())?;
        Self::new(ground, dists)
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dists.is_empty()
    }

    pub fn dist(&self, id: usize) -> &WeightDistribution {
        &self.dists[id]
    }

    pub fn dists(&self) -> &[WeightDistribution] {
        &self.dists
    }

    pub fn all_finite(&self) -> bool {
        self.dists.iter().all(|d| d.is_finite_support())
    }

    /// Deterministic RNG for a (seed, stream) pair. Streams partition the
    /// randomness so parallel trials stay reproducible regardless of
    /// scheduling.
    pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng
    }

    /// One weight per element, each drawn from its own distribution.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.dists.iter().map(|d| d.sample(rng)).collect()
    }

    /// Exhaustive product outcome space for fully finite profiles.
    pub fn enumerate_outcomes(&self) -> Result<OutcomeTable> {
        OutcomeTable::build(self)
    }

    /// `E[max_i X_i]` from the outcome table.
    pub fn expect_max_exact(&self) -> Result<Rat> {
        let table = self.enumerate_outcomes()?;
        let mut total = Rat::zero();
        for outcome in table.iter() {
            let m = outcome
                .weights
                .iter()
                .max()
                .cloned()
                .unwrap_or_else(Rat::zero);
            total += m * outcome.prob;
        }
        Ok(total)
    }

    /// Monte Carlo estimate of `E[max_i X_i]` with its standard error.
    pub fn expect_max_mc(&self, trials: u64, seed: u64) -> (f64, f64) {
        let samples: Vec<f64> = (0..trials)
            .map(|t| {
                let mut rng = Self::stream_rng(seed, t);
                self.sample(&mut rng)
                    .into_iter()
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        crate::scalar::mean_stderr(&samples)
    }
}

/// A materializable view of the full product outcome space of a finite
/// profile. Outcomes are streamed in mixed-radix order rather than stored.
#[derive(Debug, Clone)]
pub struct OutcomeTable {
    /// Per-element `(values, probs)`.
    per_elem: Vec<(Vec<Rat>, Vec<Rat>)>,
    size: usize,
}

pub struct Outcome<'a> {
    pub index: usize,
    pub weights: &'a [Rat],
    pub prob: Rat,
}

impl OutcomeTable {
    fn build(profile: &WeightProfile) -> Result<Self> {
        let mut per_elem = Vec::with_capacity(profile.len());
        let mut size: usize = 1;
        for (id, d) in profile.dists().iter().enumerate() {
            let outs = d.outcomes().ok_or_else(|| {
                Error::refused(format!(
                    "element {id} has a continuous distribution; exact enumeration unavailable"
                ))
            })?;
            size = size.saturating_mul(outs.len());
            if size > MAX_OUTCOMES {
                return Err(Error::refused(format!(
                    "product outcome space exceeds {MAX_OUTCOMES}"
                )));
            }
            let (values, probs) = outs.into_iter().unzip();
            per_elem.push((values, probs));
        }
        Ok(OutcomeTable { per_elem, size })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn arity(&self) -> usize {
        self.per_elem.len()
    }

    /// Streams `(index, weights, prob)` over the full product space. The
    /// weight buffer is reused between iterations.
    pub fn for_each(&self, mut f: impl FnMut(Outcome<'_>)) {
        let n = self.per_elem.len();
        let mut digits = vec![0usize; n];
        let mut weights: Vec<Rat> = self
            .per_elem
            .iter()
            .map(|(vs, _)| vs[0].clone())
            .collect();
        for index in 0..self.size {
            let mut prob = Rat::one();
            for (i, &d) in digits.iter().enumerate() {
                prob *= self.per_elem[i].1[d].clone();
            }
            f(Outcome { index, weights: &weights, prob });
            // increment mixed-radix counter
            for i in (0..n).rev() {
                digits[i] += 1;
                if digits[i] < self.per_elem[i].0.len() {
                    weights[i] = self.per_elem[i].0[digits[i]].clone();
                    break;
                }
                digits[i] = 0;
                weights[i] = self.per_elem[i].0[0].clone();
            }
        }
    }

    /// Materializes the table; intended for small spaces.
    pub fn collect_outcomes(&self) -> Vec<(Vec<Rat>, Rat)> {
        let mut out = Vec::with_capacity(self.size);
        self.for_each(|o| out.push((o.weights.to_vec(), o.prob)));
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = OwnedOutcome> + '_ {
        let mut buffer: Vec<OwnedOutcome> = Vec::new();
        let mut produced = false;
        std::iter::from_fn(move || {
            if !produced {
                self.for_each(|o| {
                    buffer.push(OwnedOutcome {
                        index: o.index,
                        weights: o.weights.to_vec(),
                        prob: o.prob,
                    })
                });
                buffer.reverse();
                produced = true;
            }
            buffer.pop()
        })
    }

    /// Total probability mass; exactly 1 by construction, verified in
    /// tests against the 1e-9 contract.
    pub fn total_prob(&self) -> Rat {
        self.per_elem
            .iter()
            .map(|(_, probs)| probs.iter().cloned().sum::<Rat>())
            .product()
    }
}

pub struct OwnedOutcome {
    pub index: usize,
    pub weights: Vec<Rat>,
    pub prob: Rat,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn bern(v: i64, num: i64, den: i64) -> WeightDistribution {
        WeightDistribution::bernoulli(rat(v, 1), rat(num, den)).unwrap()
    }

    #[test]
    fn point_mass_profile_samples_constant() {
        let profile = WeightProfile::from_dists(vec![
            WeightDistribution::point_mass(rat(5, 1)).unwrap(),
            WeightDistribution::point_mass(rat(2, 1)).unwrap(),
        ])
        .unwrap();
        let mut rng = WeightProfile::stream_rng(7, 0);
        assert_eq!(profile.sample(&mut rng), vec![5.0, 2.0]);
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let profile = WeightProfile::from_dists(vec![
            bern(2, 1, 2),
            WeightDistribution::uniform_interval(0.0, 1.0).unwrap(),
            WeightDistribution::exponential(1.5).unwrap(),
        ])
        .unwrap();
        let a = profile.sample(&mut WeightProfile::stream_rng(42, 3));
        let b = profile.sample(&mut WeightProfile::stream_rng(42, 3));
        assert_eq!(a, b);
        let c = profile.sample(&mut WeightProfile::stream_rng(42, 4));
        assert_ne!(a, c);
    }

    #[test]
    fn all_samples_nonnegative() {
        let profile = WeightProfile::from_dists(vec![
            bern(3, 1, 4),
            WeightDistribution::uniform_interval(0.5, 2.0).unwrap(),
            WeightDistribution::exponential(0.3).unwrap(),
        ])
        .unwrap();
        for t in 0..200 {
            let w = profile.sample(&mut WeightProfile::stream_rng(9, t));
            assert!(w.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn enumeration_covers_product_space() {
        let profile = WeightProfile::from_dists(vec![bern(1, 1, 2), bern(2, 1, 3), bern(3, 2, 3)])
            .unwrap();
        let table = profile.enumerate_outcomes().unwrap();
        assert_eq!(table.len(), 8);
        assert_eq!(table.total_prob(), rat(1, 1));
        let mut total = Rat::zero();
        table.for_each(|o| total += o.prob);
        assert_eq!(total, rat(1, 1));
    }

    #[test]
    fn enumeration_of_point_masses_is_single_outcome() {
        let profile = WeightProfile::from_dists(vec![
            WeightDistribution::point_mass(rat(1, 1)).unwrap(),
            WeightDistribution::point_mass(rat(4, 1)).unwrap(),
        ])
        .unwrap();
        let table = profile.enumerate_outcomes().unwrap();
        assert_eq!(table.len(), 1);
        let outs = table.collect_outcomes();
        assert_eq!(outs[0].0, vec![rat(1, 1), rat(4, 1)]);
        assert_eq!(outs[0].1, rat(1, 1));
    }

    #[test]
    fn enumeration_refuses_continuous() {
        let profile = WeightProfile::from_dists(vec![
            WeightDistribution::uniform_interval(0.0, 1.0).unwrap(),
        ])
        .unwrap();
        assert!(matches!(profile.enumerate_outcomes(), Err(Error::Refused(_))));
    }

    #[test]
    fn expect_max_examples() {
        let single = WeightProfile::from_dists(vec![
            WeightDistribution::point_mass(rat(5, 1)).unwrap(),
        ])
        .unwrap();
        assert_eq!(single.expect_max_exact().unwrap(), rat(5, 1));

        let two = WeightProfile::from_dists(vec![
            WeightDistribution::point_mass(rat(1, 1)).unwrap(),
            WeightDistribution::point_mass(rat(3, 1)).unwrap(),
        ])
        .unwrap();
        assert_eq!(two.expect_max_exact().unwrap(), rat(3, 1));
    }

    #[test]
    fn mc_mean_tracks_exact_mean() {
        // E[max] for a single two-point element is just its mean: 1.0 here.
        let profile = WeightProfile::from_dists(vec![bern(2, 1, 2)]).unwrap();
        let exact = profile.expect_max_exact().unwrap().to_f64_lossy();
        let (mc, se) = profile.expect_max_mc(100_000, 11);
        assert!((mc - exact).abs() <= 4.0 * se.max(1e-9), "mc={mc} exact={exact} se={se}");
        assert!((mc - 1.0).abs() < 0.02);
    }

    #[test]
    fn duplicate_values_merge() {
        let d = WeightDistribution::finite_discrete(vec![
            (rat(1, 1), rat(1, 4)),
            (rat(1, 1), rat(1, 4)),
            (rat(0, 1), rat(1, 2)),
        ])
        .unwrap();
        let outs = d.outcomes().unwrap();
        assert_eq!(outs, vec![(rat(0, 1), rat(1, 2)), (rat(1, 1), rat(1, 2))]);
    }

    #[test]
    fn probability_normalization_is_exact() {
        // f64 representation noise (1/3 three times) is absorbed so the
        // probabilities sum to exactly one as rationals.
        let third = 1.0 / 3.0;
        let d = WeightDistribution::finite_discrete_f64(&[(0.0, third), (1.0, third), (2.0, third)])
            .unwrap();
        let WeightDistribution::FiniteDiscrete { probs, .. } = &d else { unreachable!() };
        assert_eq!(probs.iter().cloned().sum::<Rat>(), rat(1, 1));
    }
}
