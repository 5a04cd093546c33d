use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::scalar::Real;

/// Which side of the data matrix a quantity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Rows,
    Cols,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Rows => Axis::Cols,
            Axis::Cols => Axis::Rows,
        }
    }
}

/// Matrix-normal base measure with diagonal column covariance
/// `U = diag(u[0], u[1])`: the two columns of a factor are independent
/// `N_d(mean[r], u[r] V)`.
#[derive(Debug, Clone)]
pub struct BaseMeasure<T> {
    mean: [Vec<T>; 2],
    u: [T; 2],
    v: Matrix<T>,
    v_inv: Matrix<T>,
    log_det_v: T,
}

impl<T: Real> BaseMeasure<T> {
    pub fn new(mean: [Vec<T>; 2], u: [T; 2], v: Matrix<T>) -> Result<Self> {
        let d = v.rows();
        if d == 0 || v.cols() != d {
            return Err(Error::invalid("V must be a non-empty square matrix"));
        }
        if mean.iter().any(|m| m.len() != d) {
            return Err(Error::invalid(format!("base mean columns must have length d = {d}")));
        }
        if u.iter().any(|&x| !(x > T::zero()) || !x.is_finite()) {
            return Err(Error::invalid("column variances u must be positive and finite"));
        }
        if !v.is_symmetric(T::of(1e-10)) {
            return Err(Error::invalid("V must be symmetric"));
        }
        let chol = Cholesky::new(&v).map_err(|_| Error::invalid("V must be positive definite"))?;
        Ok(Self { mean, u, v_inv: chol.inverse(), log_det_v: chol.log_det(), v })
    }

    /// Zero mean, identity `V`, both column variances equal to `u`.
    pub fn isotropic(d: usize, u: T) -> Result<Self> {
        Self::new([vec![T::zero(); d], vec![T::zero(); d]], [u, u], Matrix::identity(d))
    }

    pub fn d(&self) -> usize {
        self.v.rows()
    }

    pub fn mean(&self, r: usize) -> &[T] {
        &self.mean[r]
    }

    pub fn u(&self, r: usize) -> T {
        self.u[r]
    }

    pub fn v(&self) -> &Matrix<T> {
        &self.v
    }

    /// Prior precision `(u_r V)⁻¹` of column `r`.
    pub fn precision(&self, r: usize) -> Matrix<T> {
        self.v_inv.scaled(T::one() / self.u[r])
    }

    /// `log |u_r V|`
    pub fn log_det_cov(&self, r: usize) -> T {
        T::of_usize(self.d()) * self.u[r].ln() + self.log_det_v
    }
}

/// Residual variances: either fixed or inverse-gamma distributed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaMode<T> {
    Fixed { sigma1_sq: T, sigma2_sq: T },
    /// `σ_l² ~ IG(shape_l, rate_l)`.
    Hyperprior { shape1: T, rate1: T, shape2: T, rate2: T },
}

impl<T: Real> SigmaMode<T> {
    fn validate(&self) -> Result<()> {
        let vals: Vec<T> = match *self {
            SigmaMode::Fixed { sigma1_sq, sigma2_sq } => vec![sigma1_sq, sigma2_sq],
            SigmaMode::Hyperprior { shape1, rate1, shape2, rate2 } => vec![shape1, rate1, shape2, rate2],
        };
        if vals.iter().any(|&x| !(x > T::zero()) || !x.is_finite()) {
            return Err(Error::invalid("variance parameters must be positive and finite"));
        }
        Ok(())
    }

    /// Starting values: the fixed values, or the prior mode under a hyperprior.
    pub fn initial(&self) -> (T, T) {
        match *self {
            SigmaMode::Fixed { sigma1_sq, sigma2_sq } => (sigma1_sq, sigma2_sq),
            SigmaMode::Hyperprior { shape1, rate1, shape2, rate2 } => {
                (rate1 / (shape1 + T::one()), rate2 / (shape2 + T::one()))
            }
        }
    }
}

/// Hyperparameters of the co-clustering model.
#[derive(Debug, Clone)]
pub struct ModelConfig<T> {
    d: usize,
    alpha1: T,
    alpha2: T,
    base1: BaseMeasure<T>,
    base2: BaseMeasure<T>,
    sigma: SigmaMode<T>,
}

impl<T: Real> ModelConfig<T> {
    pub fn new(
        alpha1: T,
        alpha2: T,
        base1: BaseMeasure<T>,
        base2: BaseMeasure<T>,
        sigma: SigmaMode<T>,
    ) -> Result<Self> {
        let d = base1.d();
        if base2.d() != d {
            return Err(Error::invalid("row and column base measures disagree on d"));
        }
        for a in [alpha1, alpha2] {
            if !(a > T::zero()) || !a.is_finite() {
                return Err(Error::invalid(format!("concentration must be positive, got {a}")));
            }
        }
        sigma.validate()?;
        Ok(Self { d, alpha1, alpha2, base1, base2, sigma })
    }

    /// Defaults for simulated data: `α₁ = α₂ = 1`, zero means, identity `V`,
    /// `u = 1/√d`, `σ₁² = 0.1`, `σ₂² = 1.5` fixed.
    pub fn simulation_defaults(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("latent dimension must be at least 1"));
        }
        let u = T::one() / T::of_usize(d).sqrt();
        Self::new(
            T::one(),
            T::one(),
            BaseMeasure::isotropic(d, u)?,
            BaseMeasure::isotropic(d, u)?,
            SigmaMode::Fixed { sigma1_sq: T::of(0.1), sigma2_sq: T::of(1.5) },
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha1(&self) -> T {
        self.alpha1
    }

    pub fn alpha2(&self) -> T {
        self.alpha2
    }

    pub fn alpha(&self, axis: Axis) -> T {
        match axis {
            Axis::Rows => self.alpha1,
            Axis::Cols => self.alpha2,
        }
    }

    pub fn base(&self, axis: Axis) -> &BaseMeasure<T> {
        match axis {
            Axis::Rows => &self.base1,
            Axis::Cols => &self.base2,
        }
    }

    pub fn sigma(&self) -> &SigmaMode<T> {
        &self.sigma
    }

    pub fn with_alphas(mut self, alpha1: T, alpha2: T) -> Result<Self> {
        self.alpha1 = alpha1;
        self.alpha2 = alpha2;
        Self::new(self.alpha1, self.alpha2, self.base1, self.base2, self.sigma)
    }

    pub fn with_sigma(self, sigma: SigmaMode<T>) -> Result<Self> {
        Self::new(self.alpha1, self.alpha2, self.base1, self.base2, sigma)
    }
}
