//! Lattice state: agents on a square grid with open boundaries.

use alloc::vec::Vec;

use crate::error::ModelError;
use crate::params::ModelParams;
use crate::rng::CounterRng;

/// One lattice site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agent {
    /// Opinion index in `[0, K)`.
    pub opinion: u32,
    /// Intensity of persuasion `p` in `[0, 1]`: how strongly this agent
    /// pulls differently-opinioned agents towards its opinion.
    pub persuasion: f64,
    /// Intensity of support `s` in `[0, 1]`: how strongly this agent
    /// reinforces agents that already share its opinion.
    pub support: f64,
}

/// Full lattice state at one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub params: ModelParams,
    /// Row-major grid of `side * side` agents.
    pub agents: Vec<Agent>,
    pub step_index: u32,
}

impl Configuration {
    /// Draw the initial configuration: opinions uniform over `{0..K-1}`,
    /// persuasion and support independent uniform on `[0, 1)`, one counter
    /// stream per agent.
    pub fn initial(params: ModelParams) -> Result<Self, ModelError> {
        params.validate()?;
        let n = params.agent_count();
        let mut agents = Vec::with_capacity(n);
        for i in 0..n {
            let mut rng = CounterRng::init_stream(params.seed, i as u64);
            let opinion = rng.next_index(params.opinion_count);
            let persuasion = rng.next_f64();
            let support = rng.next_f64();
            agents.push(Agent {
                opinion,
                persuasion,
                support,
            });
        }
        Ok(Configuration {
            params,
            agents,
            step_index: 0,
        })
    }

    pub fn side(&self) -> usize {
        self.params.side as usize
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    /// Opinion indices of all agents, row-major.
    pub fn opinions(&self) -> Vec<u32> {
        self.agents.iter().map(|a| a.opinion).collect()
    }

    /// Count of agents per opinion.
    pub fn opinion_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0usize; self.params.opinion_count as usize];
        for a in &self.agents {
            counts[a.opinion as usize] += 1;
        }
        counts
    }
}

/// Grid coordinates `(row, col)` of an agent index.
#[inline]
pub fn coords(index: usize, side: usize) -> (usize, usize) {
    (index / side, index % side)
}

/// Euclidean distance between two lattice sites on an `L x L` grid with
/// unit spacing and open boundaries (no wraparound).
pub fn distance(i: usize, j: usize, side: u32) -> Result<f64, ModelError> {
    let len = side as usize * side as usize;
    if i >= len {
        return Err(ModelError::IndexOutOfBounds { index: i, len });
    }
    if j >= len {
        return Err(ModelError::IndexOutOfBounds { index: j, len });
    }
    Ok(distance_unchecked(i, j, side as usize))
}

#[inline]
pub(crate) fn distance_unchecked(i: usize, j: usize, side: usize) -> f64 {
    let (ri, ci) = coords(i, side);
    let (rj, cj) = coords(j, side);
    let dr = ri as f64 - rj as f64;
    let dc = ci as f64 - cj as f64;
    libm::sqrt(dr * dr + dc * dc)
}
