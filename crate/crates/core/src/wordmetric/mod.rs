//! Word-metric balls in `G`, relative counts in subgroups, and Schreier balls in `G/K`.

mod ball;
mod cache;
mod genset;
mod schreier;

pub use ball::{ball, ball_with, BallOptions, BallRecord, Node};
pub use cache::{cache_key, load_ball, save_ball};
pub use genset::GenSet;
pub use schreier::{
    schreier_ball, schreier_ball_with, Coset, CosetMode, SchreierBall, SchreierOptions, DEFAULT_LAYER_CAP,
};
