use crate::error::{Error, Result};
use crate::model::{Cutoffs, LatentState, OrdinalDataset};
use crate::scalar::Real;
use crate::special::{norm_cdf, norm_interval};

/// Probability of one augmented outcome `(y, δ)` given the factorized means.
///
/// Observed entries contribute the cell probability of `z` times
/// `Pr(w >= 0)`; censored entries contribute `Pr(w < 0)`. `y` is ignored when
/// the entry is censored.
pub fn entry_likelihood<T: Real>(
    y: u32,
    observed: bool,
    mz: T,
    mw: T,
    sigma1_sq: T,
    sigma2_sq: T,
    cutoffs: &Cutoffs<T>,
) -> Result<T> {
    if !(sigma1_sq > T::zero() && sigma2_sq > T::zero()) {
        return Err(Error::invalid("variances must be positive"));
    }
    let s2 = sigma2_sq.f64().sqrt();
    let mw = mw.f64();
    if !observed {
        return Ok(T::of(norm_cdf(-mw / s2)));
    }
    if y < 1 || y > cutoffs.c() {
        return Err(Error::invalid(format!("category {y} outside 1..={}", cutoffs.c())));
    }
    let s1 = sigma1_sq.f64().sqrt();
    let (lo, hi) = cutoffs.cell(y);
    let a = (lo.f64() - mz.f64()) / s1;
    let b = (hi.f64() - mz.f64()) / s1;
    Ok(T::of(norm_interval(a, b) * norm_cdf(mw / s2)))
}

/// Per-entry likelihoods at the current state, row-major over all `n p` entries.
pub fn state_entry_likelihoods<T: Real>(
    state: &LatentState<T>,
    data: &OrdinalDataset,
    cutoffs: &Cutoffs<T>,
) -> Result<Vec<T>> {
    let mz = state.factor_means(0);
    let mw = state.factor_means(1);
    let (s1, s2) = (state.sigma1_sq(), state.sigma2_sq());
    let mut out = Vec::with_capacity(data.n() * data.p());
    for i in 0..data.n() {
        for j in 0..data.p() {
            out.push(entry_likelihood(data.y(i, j), data.observed(i, j), mz[(i, j)], mw[(i, j)], s1, s2, cutoffs)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_default_cutoffs;
    use proptest::prelude::*;

    #[test]
    fn trivial_examples() {
        let c2 = make_default_cutoffs::<f64>(2).unwrap();
        assert_eq!(entry_likelihood(0, false, 0.7, 0.0, 1.0, 1.0, &c2).unwrap(), 0.5);
        let v = entry_likelihood(2, true, 0.0, 0.0, 1.0, 1.0, &c2).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
        assert!(entry_likelihood(3, true, 0.0, 0.0, 1.0, 1.0, &c2).is_err());
        assert!(entry_likelihood(0, true, 0.0, 0.0, 1.0, 1.0, &c2).is_err());
    }

    /// Composite Simpson over a box of the bivariate normal density.
    fn simpson2(f: impl Fn(f64, f64) -> f64, (x0, x1): (f64, f64), (y0, y1): (f64, f64), m: usize) -> f64 {
        let hx = (x1 - x0) / m as f64;
        let hy = (y1 - y0) / m as f64;
        let wt = |k: usize| if k == 0 || k == m { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        let mut s = 0.0;
        for a in 0..=m {
            for b in 0..=m {
                s += wt(a) * wt(b) * f(x0 + a as f64 * hx, y0 + b as f64 * hy);
            }
        }
        s * hx * hy / 9.0
    }

    #[test]
    fn cell_probability_matches_quadrature() {
        let (mz, s1sq, mw, s2sq) = (0.3, 0.1, 1.0, 1.5);
        let density = |z: f64, w: f64| {
            let a = (z - mz) * (z - mz) / s1sq + (w - mw) * (w - mw) / s2sq;
            (-0.5 * a).exp() / (2.0 * std::f64::consts::PI * (s1sq * s2sq).sqrt())
        };
        // cell (-0.5, 0.5] x [0, mw + 12 sd)
        let oracle = simpson2(density, (-0.5, 0.5), (0.0, mw + 12.0 * s2sq.sqrt()), 800);
        let c3 = make_default_cutoffs::<f64>(3).unwrap();
        let v = entry_likelihood(2, true, mz, mw, s1sq, s2sq, &c3).unwrap();
        assert!((v - oracle).abs() < 1e-9, "{v} vs {oracle}");
    }

    proptest! {
        #[test]
        fn outcome_probabilities_sum_to_one(
            c in 2u32..8, mz in -4.0f64..4.0, mw in -4.0f64..4.0,
            s1 in 0.05f64..3.0, s2 in 0.05f64..3.0,
        ) {
            let cut = make_default_cutoffs::<f64>(c).unwrap();
            let mut total = entry_likelihood(0, false, mz, mw, s1, s2, &cut).unwrap();
            for y in 1..=c {
                total += entry_likelihood(y, true, mz, mw, s1, s2, &cut).unwrap();
            }
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
