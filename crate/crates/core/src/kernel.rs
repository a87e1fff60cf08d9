//! Precomputed interaction kernel: the fast path for impact accumulation.
//!
//! The distance scaling `1/g(d)` depends only on the coordinate offset
//! between two sites, so it is tabulated once per `(L, alpha)` pair. A full
//! impact evaluation then costs one table lookup and one multiply-add per
//! (target, source) pair instead of a `pow` call.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::ModelError;
use crate::impact::{scaling, ImpactField, STRENGTH_GAIN};
use crate::lattice::{coords, Agent, Configuration};
use crate::params::{ModelParams, ScalingKind};

/// Inverse distance scaling tabulated over all coordinate offsets
/// `(dr, dc)` realizable on an `L x L` grid.
#[derive(Debug, Clone)]
pub struct InteractionKernel {
    side: u32,
    alpha: f64,
    scaling: ScalingKind,
    /// `(2L-1)^2` entries, row-major over `(dr + L-1, dc + L-1)`.
    inverse: Vec<f64>,
}

impl InteractionKernel {
    /// Tabulate `1/g(sqrt(dr^2 + dc^2))` for every offset.
    pub fn build(side: u32, alpha: f64, kind: ScalingKind) -> Self {
        let l = side as i64;
        let stride = (2 * l - 1) as usize;
        let mut inverse = vec![0.0; stride * stride];
        for dr in -(l - 1)..l {
            for dc in -(l - 1)..l {
                let d = libm::sqrt((dr * dr + dc * dc) as f64);
                let idx = (dr + l - 1) as usize * stride + (dc + l - 1) as usize;
                inverse[idx] = 1.0 / scaling(d, alpha, kind);
            }
        }
        InteractionKernel {
            side,
            alpha,
            scaling: kind,
            inverse,
        }
    }

    pub fn for_params(params: &ModelParams) -> Self {
        InteractionKernel::build(params.side, params.alpha, params.scaling)
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Table entry for coordinate offset `(dr, dc)`.
    pub fn inverse_scaling(&self, dr: i32, dc: i32) -> f64 {
        let l = self.side as i32;
        debug_assert!(dr.abs() < l && dc.abs() < l);
        let stride = (2 * l - 1) as usize;
        self.inverse[(dr + l - 1) as usize * stride + (dc + l - 1) as usize]
    }

    pub fn matches(&self, params: &ModelParams) -> bool {
        self.side == params.side && self.alpha == params.alpha && self.scaling == params.scaling
    }

    fn check(&self, params: &ModelParams) -> Result<(), ModelError> {
        if self.matches(params) {
            Ok(())
        } else {
            Err(ModelError::KernelMismatch {
                kernel_side: self.side,
                kernel_alpha: self.alpha,
                config_side: params.side,
                config_alpha: params.alpha,
            })
        }
    }

    /// Impacts of every opinion on every agent; equals the naive per-agent
    /// accumulation up to floating-point reassociation.
    pub fn impact_field(&self, config: &Configuration) -> Result<ImpactField, ModelError> {
        self.check(&config.params)?;
        let n = config.agent_count();
        let k = config.params.opinion_count as usize;
        let mut values = vec![0.0; n * k];
        let mut lanes = vec![[0.0f64; LANES]; k];
        for (target, out) in values.chunks_exact_mut(k).enumerate() {
            self.impacts_into(config, target, out, &mut lanes);
        }
        Ok(ImpactField::new(values, k))
    }

    /// Accumulate impacts on one target through the offset table.
    ///
    /// `lanes` is caller-provided scratch of `K` lane groups; splitting each
    /// opinion's accumulator into four lanes breaks the loop-carried
    /// dependency in the hot loop. The lane split fixes a summation order
    /// that differs from the naive path only by reassociation.
    pub(crate) fn impacts_into(
        &self,
        config: &Configuration,
        target: usize,
        out: &mut [f64],
        lanes: &mut [[f64; LANES]],
    ) {
        let side = self.side as usize;
        let stride = 2 * side - 1;
        let (tr, tc) = coords(target, side);
        let my_opinion = config.agents[target].opinion;
        for group in lanes.iter_mut() {
            *group = [0.0; LANES];
        }
        for sr in 0..side {
            let row_base = (sr + side - 1 - tr) * stride + (side - 1 - tc);
            let krow = &self.inverse[row_base..row_base + side];
            let arow = &config.agents[sr * side..(sr + 1) * side];
            accumulate_row(arow, krow, my_opinion, lanes);
        }
        for (k, group) in lanes.iter().enumerate() {
            out[k] = (group[0] + group[1]) + (group[2] + group[3]);
        }
        if !config.params.self_support {
            let own = &config.agents[target];
            out[my_opinion as usize] -=
                (STRENGTH_GAIN * own.support) * self.inverse_scaling(0, 0);
        }
    }
}

pub(crate) const LANES: usize = 4;

#[inline]
fn accumulate_row(agents: &[Agent], krow: &[f64], my_opinion: u32, lanes: &mut [[f64; LANES]]) {
    let mut sc = 0;
    while sc + LANES <= agents.len() {
        for lane in 0..LANES {
            let a = &agents[sc + lane];
            let w = if a.opinion == my_opinion {
                a.support
            } else {
                a.persuasion
            };
            lanes[a.opinion as usize][lane] += (STRENGTH_GAIN * w) * krow[sc + lane];
        }
        sc += LANES;
    }
    for lane in 0..agents.len() - sc {
        let a = &agents[sc + lane];
        let w = if a.opinion == my_opinion {
            a.support
        } else {
            a.persuasion
        };
        lanes[a.opinion as usize][lane] += (STRENGTH_GAIN * w) * krow[sc + lane];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::impact::impact;
    use crate::lattice::Configuration;
    use crate::params::ModelParams;

    #[test]
    fn center_entry_is_one() {
        let kernel = InteractionKernel::build(5, 3.0, ScalingKind::PowShifted);
        assert_eq!(kernel.inverse_scaling(0, 0), 1.0);
    }

    #[test]
    fn hand_checked_entries() {
        let kernel = InteractionKernel::build(4, 2.0, ScalingKind::PowShifted);
        // offset (0,1): 1/(1+1)^2
        assert_eq!(kernel.inverse_scaling(0, 1), 0.25);
        let flat = InteractionKernel::build(4, 0.0, ScalingKind::PowShifted);
        for dr in -3..4 {
            for dc in -3..4 {
                assert_eq!(flat.inverse_scaling(dr, dc), 1.0);
            }
        }
    }

    #[test]
    fn entries_bounded_and_dihedral_symmetric() {
        let kernel = InteractionKernel::build(6, 1.7, ScalingKind::PowShifted);
        for dr in -5..6i32 {
            for dc in -5..6i32 {
                let v = kernel.inverse_scaling(dr, dc);
                assert!(v > 0.0 && v <= 1.0);
                // 8-fold symmetry, exact
                assert_eq!(v, kernel.inverse_scaling(-dr, dc));
                assert_eq!(v, kernel.inverse_scaling(dr, -dc));
                assert_eq!(v, kernel.inverse_scaling(dc, dr));
            }
        }
    }

    #[test]
    fn field_matches_naive_on_small_lattice() {
        let params = ModelParams::new(5, 3, 2.5, 1.0, 0, 77);
        let config = Configuration::initial(params).unwrap();
        let kernel = InteractionKernel::for_params(&params);
        let field = kernel.impact_field(&config).unwrap();
        for i in 0..config.agent_count() {
            let naive = impact(&config, i).unwrap();
            for k in 0..3 {
                assert!(
                    (field.agent(i)[k] - naive.values[k]).abs() <= 1e-10,
                    "agent {i} opinion {k}"
                );
            }
        }
    }

    #[test]
    fn field_rejects_mismatched_kernel() {
        let params = ModelParams::new(5, 2, 2.0, 1.0, 0, 1);
        let config = Configuration::initial(params).unwrap();
        let kernel = InteractionKernel::build(5, 3.0, ScalingKind::PowShifted);
        assert!(matches!(
            kernel.impact_field(&config),
            Err(ModelError::KernelMismatch { .. })
        ));
    }

    #[test]
    fn uniform_lattice_unheld_opinion_field_is_zero() {
        let params = ModelParams::new(4, 2, 1.0, 1.0, 0, 5);
        let mut config = Configuration::initial(params).unwrap();
        for a in &mut config.agents {
            a.opinion = 0;
        }
        let kernel = InteractionKernel::for_params(&params);
        let field = kernel.impact_field(&config).unwrap();
        for i in 0..config.agent_count() {
            assert_eq!(field.agent(i)[1], 0.0);
            assert!(field.agent(i)[0] > 0.0);
        }
    }

    #[test]
    fn single_source_field_is_scaled_kernel_row() {
        // one agent with nonzero strengths: every target sees that agent's
        // persuasion (or support at the source itself) times the table entry
        let params = ModelParams::new(5, 2, 2.0, 1.0, 0, 9);
        let mut config = Configuration::initial(params).unwrap();
        for a in &mut config.agents {
            a.opinion = 0;
            a.persuasion = 0.0;
            a.support = 0.0;
        }
        let src = 7; // (1, 2)
        config.agents[src].opinion = 1;
        config.agents[src].persuasion = 0.8;
        config.agents[src].support = 0.6;
        let kernel = InteractionKernel::for_params(&params);
        let field = kernel.impact_field(&config).unwrap();
        for i in 0..config.agent_count() {
            let (r, c) = crate::lattice::coords(i, 5);
            let (sr, sc) = crate::lattice::coords(src, 5);
            let entry = kernel.inverse_scaling(sr as i32 - r as i32, sc as i32 - c as i32);
            let strength = if i == src { 0.6 } else { 0.8 };
            let expect = STRENGTH_GAIN * strength * entry;
            assert!((field.agent(i)[1] - expect).abs() < 1e-14);
            assert_eq!(field.agent(i)[0], 0.0);
        }
    }
}
