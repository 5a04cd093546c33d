//! Normal distribution helpers. Evaluated in `f64` regardless of the scalar
//! type so that `f32` chains keep accurate tail probabilities.

use libm::erfc;
use statrs::function::erf::erfc_inv;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Standard normal CDF.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        1.0
    } else if x == f64::NEG_INFINITY {
        0.0
    } else {
        0.5 * erfc(-x / SQRT_2)
    }
}

/// Standard normal survival function `1 - Φ(x)` without cancellation.
#[inline]
pub fn norm_sf(x: f64) -> f64 {
    norm_cdf(-x)
}

/// Inverse of the standard normal CDF.
#[inline]
pub fn norm_ppf(u: f64) -> f64 {
    if u <= 0.0 {
        f64::NEG_INFINITY
    } else if u >= 1.0 {
        f64::INFINITY
    } else {
        -SQRT_2 * erfc_inv(2.0 * u)
    }
}

/// `Φ(b) - Φ(a)` for `a < b`, evaluated on whichever tail keeps precision.
pub fn norm_interval(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        (norm_sf(a) - norm_sf(b)).max(0.0)
    } else {
        (norm_cdf(b) - norm_cdf(a)).max(0.0)
    }
}

pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

#[inline]
pub fn norm_logpdf(x: f64, mean: f64, var: f64) -> f64 {
    let r = x - mean;
    -LN_SQRT_2PI - 0.5 * var.ln() - 0.5 * r * r / var
}

/// `ln(eᵃ + eᵇ)` without overflow.
pub fn log_add_exp<T: num_traits::Float>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}
