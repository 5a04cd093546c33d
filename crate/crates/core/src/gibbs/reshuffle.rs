//! Redraws every distinct value of one axis from its full conditional.

use rand::Rng;

use super::conjugate::ColumnStats;
use crate::error::Result;
use crate::model::{Axis, LatentState, ModelConfig};
use crate::random::mvn_canonical;
use crate::scalar::Real;

pub fn reshuffle<T: Real, R: Rng + ?Sized>(
    axis: Axis,
    state: &mut LatentState<T>,
    config: &ModelConfig<T>,
    rng: &mut R,
) -> Result<()> {
    let stats = [ColumnStats::new(state, config, axis, 0), ColumnStats::new(state, config, axis, 1)];
    let members = state.axis(axis).members();
    for (l, items) in members.iter().enumerate() {
        assert!(!items.is_empty(), "empty cluster {l} on {axis:?}");
        for (r, st) in stats.iter().enumerate() {
            let prec = st.precision(items.len())?;
            let value = mvn_canonical(rng, &prec, &st.linear_term(items));
            *state.axis_mut(axis).stars_mut()[l].col_mut(r) = value;
        }
    }
    Ok(())
}

pub fn reshuffle_rows<T: Real, R: Rng + ?Sized>(state: &mut LatentState<T>, config: &ModelConfig<T>, rng: &mut R) -> Result<()> {
    reshuffle(Axis::Rows, state, config, rng)
}

pub fn reshuffle_cols<T: Real, R: Rng + ?Sized>(state: &mut LatentState<T>, config: &ModelConfig<T>, rng: &mut R) -> Result<()> {
    reshuffle(Axis::Cols, state, config, rng)
}
