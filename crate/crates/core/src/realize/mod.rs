//! Interval realizations of a stabilizer witness: Tsuboi maps glued along `G/K x Z`.

pub mod cocycle;
pub mod flow;
pub mod growth;
pub mod holder;
pub mod length;
pub mod system;

pub use cocycle::{fit_cocycle_degree, Cocycle, CocycleDegree};
pub use flow::{flow, flow_derivative, tsuboi_map, Interval, TsuboiMap};
pub use growth::{derivative_growth, DerivativeGrowth};
pub use holder::{
    blowup_formula, distortion, formula_agreement, formula_bound, holder_constant, holder_sup, holder_table,
    shell_max, HolderEstimate, HolderRow,
};
pub use length::{invert_length, total_length};
pub use system::{
    auto_system, auto_system_min_j, build_system, core_coverage, epsilon_for, RealizedAction, Realization, SysPoint, SystemFile,
    SystemParams,
};

/// Largest one-sided derivative mismatch of `letter` over the endpoints of `I_v` where both
/// sides are realized (the frozen edge is skipped).
pub fn endpoint_mismatch(sys: &Realization, letter: usize, v: usize) -> crate::Result<f64> {
    let mut worst: f64 = 0.0;
    let jm = sys.j_max();
    for j in -jm + 1..=jm {
        let right = sys.apply_letter_strict(letter, &SysPoint { v, j, u: 0.0 });
        let left = sys.apply_letter_strict(letter, &SysPoint { v, j: j - 1, u: 1.0 });
        let ((_, right), (_, left)) = match (right, left) {
            (Ok(r), Ok(l)) => (r, l),
            (Err(crate::Error::Truncation(_)), _) | (_, Err(crate::Error::Truncation(_))) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        worst = worst.max((right - left).abs() / left.max(right));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests;
