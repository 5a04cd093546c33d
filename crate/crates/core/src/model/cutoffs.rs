use crate::error::{Error, Result};
use crate::scalar::Real;

/// Thresholds `γ_0 = -∞ < γ_1 < ... < γ_{c-1} < γ_c = +∞` mapping the
/// ordinal latent to a category: `y = κ` iff `γ_{κ-1} < z <= γ_κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cutoffs<T> {
    gamma: Vec<T>,
}

impl<T: Real> Cutoffs<T> {
    /// Builds cutoffs from the `c - 1` finite interior thresholds.
    pub fn from_interior(interior: &[T]) -> Result<Self> {
        if interior.is_empty() {
            return Err(Error::invalid("at least one interior cutoff is required (c >= 2)"));
        }
        if interior.iter().any(|g| !g.is_finite()) {
            return Err(Error::invalid("interior cutoffs must be finite"));
        }
        if interior.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("cutoffs must be strictly increasing"));
        }
        let mut gamma = Vec::with_capacity(interior.len() + 2);
        gamma.push(T::neg_infinity());
        gamma.extend_from_slice(interior);
        gamma.push(T::infinity());
        Ok(Self { gamma })
    }

    /// Number of categories.
    pub fn c(&self) -> u32 {
        (self.gamma.len() - 1) as u32
    }

    pub fn gamma(&self) -> &[T] {
        &self.gamma
    }

    pub fn interior(&self) -> &[T] {
        &self.gamma[1..self.gamma.len() - 1]
    }

    /// `(γ_{y-1}, γ_y)` for a category code `y` in `1..=c`.
    #[inline]
    pub fn cell(&self, y: u32) -> (T, T) {
        let y = y as usize;
        (self.gamma[y - 1], self.gamma[y])
    }

    /// Category of a latent value.
    pub fn category_of(&self, z: T) -> u32 {
        // first interior cutoff with z <= γ_κ
        let interior = self.interior();
        let k = interior.partition_point(|&g| g < z);
        k as u32 + 1
    }

    /// A representative point of each cell: the midpoint for interior cells,
    /// one unit beyond the outer finite cutoff for the extreme ones.
    pub fn cell_midpoint(&self, y: u32) -> T {
        let (lo, hi) = self.cell(y);
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo + hi) / T::of(2.0),
            (false, true) => hi - T::one(),
            (true, false) => lo + T::one(),
            (false, false) => T::zero(),
        }
    }
}

/// Equispaced cutoffs symmetric about zero: `γ_κ = κ - c/2`, `κ = 1..c-1`.
pub fn make_default_cutoffs<T: Real>(c: u32) -> Result<Cutoffs<T>> {
    if c < 2 {
        return Err(Error::invalid(format!("need at least 2 categories, got {c}")));
    }
    let half = T::of(c as f64 / 2.0);
    let interior: Vec<T> = (1..c).map(|k| T::of(k as f64) - half).collect();
    Cutoffs::from_interior(&interior)
}
