//! Social impact: distance scaling, per-agent impact accumulation and the
//! temperature-driven opinion choice distribution.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::ModelError;
use crate::lattice::{coords, Configuration};
use crate::params::ScalingKind;

/// Distance scaling function `g(d)`; a source agent's strength is divided
/// by `g` of its distance to the target.
#[inline]
pub fn scaling(d: f64, alpha: f64, kind: ScalingKind) -> f64 {
    match kind {
        ScalingKind::PowShifted => libm::pow(1.0 + d, alpha),
        ScalingKind::ShiftedPow => 1.0 + libm::pow(d, alpha),
    }
}

/// Gain applied to every source strength in the impact sum.
///
/// Unit strengths enter with weight 4; this constant sets the absolute
/// impact scale and with it the meaning of the social temperature (the
/// choice distribution depends on `I/T` only). The value matches the
/// reference parameterization of the model, whose reported temperature
/// sweeps assume it. Multiplying by 4 is exact in binary floating point,
/// so the gain introduces no rounding of its own.
pub const STRENGTH_GAIN: f64 = 4.0;

/// Impact of each opinion on one agent.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactVector {
    /// `values[k]` is the accumulated impact of opinion `k`.
    pub values: Vec<f64>,
}

/// Impact of each opinion on every agent, row-major with stride K.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactField {
    values: Vec<f64>,
    opinion_count: usize,
}

impl ImpactField {
    pub(crate) fn new(values: Vec<f64>, opinion_count: usize) -> Self {
        debug_assert_eq!(values.len() % opinion_count, 0);
        ImpactField {
            values,
            opinion_count,
        }
    }

    pub fn opinion_count(&self) -> usize {
        self.opinion_count
    }

    pub fn agent_count(&self) -> usize {
        self.values.len() / self.opinion_count
    }

    /// Impact values for one agent.
    pub fn agent(&self, index: usize) -> &[f64] {
        let k = self.opinion_count;
        &self.values[index * k..(index + 1) * k]
    }
}

/// Impact of every opinion on agent `target`, accumulated over all agents
/// (including `target` itself unless self-support is disabled).
///
/// A source agent `j` holding opinion `k` contributes its support `s_j` when
/// the target already holds `k`, and its persuasion `p_j` otherwise, scaled
/// by [`STRENGTH_GAIN`] and divided by the distance scaling `g(d_ij)`:
/// `I_k = sum_j 4 w_j / g(d_ij)`.
pub fn impact(config: &Configuration, target: usize) -> Result<ImpactVector, ModelError> {
    let n = config.agent_count();
    if target >= n {
        return Err(ModelError::IndexOutOfBounds { index: target, len: n });
    }
    let mut values = vec![0.0; config.params.opinion_count as usize];
    impact_into(config, target, &mut values);
    Ok(ImpactVector { values })
}

/// Naive per-target accumulation; one `pow` per source pair.
pub(crate) fn impact_into(config: &Configuration, target: usize, out: &mut [f64]) {
    let side = config.side();
    let params = &config.params;
    let (tr, tc) = coords(target, side);
    let my_opinion = config.agents[target].opinion;
    out.fill(0.0);
    let mut j = 0;
    for sr in 0..side {
        let dr = sr as f64 - tr as f64;
        for sc in 0..side {
            let dc = sc as f64 - tc as f64;
            let d = libm::sqrt(dr * dr + dc * dc);
            let g = scaling(d, params.alpha, params.scaling);
            let a = &config.agents[j];
            let w = if a.opinion == my_opinion {
                a.support
            } else {
                a.persuasion
            };
            out[a.opinion as usize] += (STRENGTH_GAIN * w) / g;
            j += 1;
        }
    }
    if !params.self_support {
        let own = &config.agents[target];
        out[my_opinion as usize] -=
            (STRENGTH_GAIN * own.support) / scaling(0.0, params.alpha, params.scaling);
    }
}

/// Probability of adopting each opinion given its impact, at social
/// temperature `t`.
///
/// For `t > 0` this is the Boltzmann distribution `P(k) ~ exp(I_k / t)`,
/// evaluated with max-subtraction so large impacts cannot overflow. At
/// `t = 0` the strongest impact wins outright; exact ties share the
/// probability uniformly.
pub fn opinion_probabilities(impacts: &[f64], t: f64) -> Vec<f64> {
    let mut out = vec![0.0; impacts.len()];
    opinion_probabilities_into(impacts, t, &mut out);
    out
}

pub(crate) fn opinion_probabilities_into(impacts: &[f64], t: f64, out: &mut [f64]) {
    debug_assert_eq!(impacts.len(), out.len());
    debug_assert!(!impacts.is_empty());
    let mut max = f64::NEG_INFINITY;
    for &v in impacts {
        if v > max {
            max = v;
        }
    }
    if t == 0.0 {
        let ties = impacts.iter().filter(|&&v| v == max).count();
        let share = 1.0 / ties as f64;
        for (o, &v) in out.iter_mut().zip(impacts) {
            *o = if v == max { share } else { 0.0 };
        }
    } else {
        let mut sum = 0.0;
        for (o, &v) in out.iter_mut().zip(impacts) {
            let e = libm::exp((v - max) / t);
            *o = e;
            sum += e;
        }
        for o in out.iter_mut() {
            *o /= sum;
        }
    }
}

/// Inverse-CDF draw from a probability vector using one uniform in `[0, 1)`.
#[inline]
pub fn sample_opinion(probabilities: &[f64], u: f64) -> u32 {
    let mut cumulative = 0.0;
    for (k, &p) in probabilities.iter().enumerate() {
        cumulative += p;
        if u < cumulative {
            return k as u32;
        }
    }
    // Rounding can leave the final cumulative fractionally below 1.
    probabilities.len() as u32 - 1
}
