//! Truncated normal sampling: inverse CDF in the body of the distribution,
//! rejection from an exponential (or uniform) envelope once the interval lies
//! entirely beyond `TAIL_START` standard deviations.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{norm_cdf, norm_ppf, norm_sf};

const TAIL_START: f64 = 5.0;

/// Standard normal restricted to `(a, b)`, `a < b`, in `f64`.
pub fn std_truncnorm<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    debug_assert!(a < b);
    if a >= TAIL_START {
        upper_tail(a, b, rng)
    } else if b <= -TAIL_START {
        -upper_tail(-b, -a, rng)
    } else {
        inverse_cdf(a, b, rng)
    }
}

fn inverse_cdf<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    let x = if a > 0.0 {
        // upper tail: work with survival probabilities
        let (pa, pb) = (norm_sf(a), norm_sf(b));
        if !(pa > pb) {
            return midpoint(a, b);
        }
        -norm_ppf(pb + u * (pa - pb))
    } else {
        let (pa, pb) = (norm_cdf(a), norm_cdf(b));
        if !(pb > pa) {
            return midpoint(a, b);
        }
        norm_ppf(pa + u * (pb - pa))
    };
    x.clamp(a, b)
}

fn midpoint(a: f64, b: f64) -> f64 {
    if b.is_finite() {
        0.5 * (a + b)
    } else {
        a
    }
}

/// `a >= TAIL_START`, `b` possibly infinite.
fn upper_tail<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    if b.is_finite() && a * (b - a) < 1.0 {
        // narrow slab: uniform proposal, acceptance >= 1 - 1/e
        loop {
            let x = a + rng.random::<f64>() * (b - a);
            if rng.random::<f64>() < (-0.5 * (x - a) * (x + a)).exp() {
                return x;
            }
        }
    }
    let lambda = 0.5 * (a + (a * a + 4.0).sqrt());
    let exp = Exp::new(lambda).expect("positive rate");
    loop {
        let x = a + exp.sample(rng);
        if x > b {
            continue;
        }
        let r = x - lambda;
        if rng.random::<f64>() < (-0.5 * r * r).exp() {
            return x;
        }
    }
}

/// Draw from `N(mean, var)` restricted to `(lo, hi]`.
pub fn sample_truncnorm<T: Real, R: Rng + ?Sized>(mean: T, var: T, lo: T, hi: T, rng: &mut R) -> Result<T> {
    if !(lo < hi) {
        return Err(Error::invalid(format!("empty truncation interval ({lo}, {hi}]")));
    }
    if !(var > T::zero()) || !var.is_finite() || !mean.is_finite() {
        return Err(Error::invalid(format!("bad normal parameters mean={mean} var={var}")));
    }
    let (m, s) = (mean.f64(), var.f64().sqrt());
    let x = m + s * std_truncnorm((lo.f64() - m) / s, (hi.f64() - m) / s, rng);
    Ok(fit_into(T::of(x), lo, hi))
}

/// Nudges a value that rounding pushed onto or past a bound back inside `(lo, hi]`.
pub(crate) fn fit_into<T: Real>(x: T, lo: T, hi: T) -> T {
    if x > lo && x <= hi {
        return x;
    }
    if x > hi {
        return hi;
    }
    let step = T::epsilon() * lo.abs().max(T::one());
    let nudged = lo + step;
    if nudged <= hi {
        nudged
    } else {
        lo + (hi - lo) / T::of(2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_empty_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_truncnorm(0.0, 1.0, 1.0, 1.0, &mut rng).is_err());
        assert!(sample_truncnorm(0.0, 1.0, 2.0, 1.0, &mut rng).is_err());
        assert!(sample_truncnorm(0.0, 0.0, 0.0, 1.0, &mut rng).is_err());
    }

    #[test]
    fn untruncated_and_half_normal_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 100_000;
        let full: f64 = (0..n)
            .map(|_| sample_truncnorm(0.0, 1.0, f64::NEG_INFINITY, f64::INFINITY, &mut rng).unwrap())
            .sum::<f64>()
            / n as f64;
        assert!(full.abs() < 0.02);
        let half: f64 =
            (0..n).map(|_| sample_truncnorm(0.0, 1.0, 0.0, f64::INFINITY, &mut rng).unwrap()).sum::<f64>() / n as f64;
        assert!((half - (2.0 / std::f64::consts::PI).sqrt()).abs() < 0.02);
    }

    #[test]
    fn extreme_tails_stay_inside_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(lo, hi) in &[(40.0, f64::INFINITY), (9.0, 9.000001), (f64::NEG_INFINITY, -30.0), (-12.0, -11.0)] {
            for _ in 0..1000 {
                let x = sample_truncnorm(0.0, 1.0, lo, hi, &mut rng).unwrap();
                assert!(x > lo && x <= hi, "{x} not in ({lo}, {hi}]");
            }
        }
    }

    #[test]
    fn f32_draws_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10_000 {
            let x = sample_truncnorm(3.0f32, 0.01, 0.5, 0.5000001, &mut rng).unwrap();
            assert!(x > 0.5 && x <= 0.5000001);
        }
    }
}
