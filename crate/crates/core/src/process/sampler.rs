use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::wordmetric::{BallRecord, GenSet};

/// Uniform draws from `B_n(e)`, each decomposed into exactly `n` letters.
pub trait BlockSampler: Send + Sync {
    fn letters(&self) -> &GenSet;

    fn ball_size(&self, radius: usize) -> Result<u64>;

    /// Returns `g` uniform in `B_radius` and letters `w_1..w_radius` in application
    /// order, so that `g = f_{w_radius} ... f_{w_1}`.
    fn draw_block(&self, radius: usize, rng: &mut ChaCha8Rng) -> Result<(GroupElement, Vec<usize>)>;
}

/// Geodesic `[l_1..l_L]` (with `g = f_{l_1}...f_{l_L}`) to application order, padded with `e`.
pub fn pad_block(letters: &GenSet, geodesic: Vec<usize>, radius: usize) -> Vec<usize> {
    debug_assert!(geodesic.len() <= radius);
    let mut w: Vec<usize> = geodesic.into_iter().rev().collect();
    w.resize(radius, letters.identity_index());
    w
}

/// Draws an index into an enumerated ball store.
#[derive(Clone, Debug)]
pub struct BallSampler {
    ball: Arc<BallRecord>,
}

impl BallSampler {
    pub fn new(ball: Arc<BallRecord>) -> BallSampler {
        BallSampler { ball }
    }

    pub fn ball(&self) -> &BallRecord {
        &self.ball
    }
}

impl BlockSampler for BallSampler {
    fn letters(&self) -> &GenSet {
        self.ball.letters()
    }

    fn ball_size(&self, radius: usize) -> Result<u64> {
        if radius > self.ball.radius() {
            return Err(Error::Dependency(format!(
                "ball of radius {radius} required, enumerated radius is {}",
                self.ball.radius()
            )));
        }
        Ok(self.ball.count(radius) as u64)
    }

    fn draw_block(&self, radius: usize, rng: &mut ChaCha8Rng) -> Result<(GroupElement, Vec<usize>)> {
        let size = self.ball_size(radius)? as usize;
        let i = rng.gen_range(0..size);
        let word = pad_block(self.ball.letters(), self.ball.geodesic_word_at(i), radius);
        Ok((self.ball.element(i).clone(), word))
    }
}
