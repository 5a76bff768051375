//! Closed-form reference fields and the complex error function they need.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

fn erf_series(z: Complex64) -> Result<Complex64> {
    let z2 = -z * z;
    let mut term = z;
    let mut sum = z;
    let min_terms = (z.norm_sqr().ceil() as usize) + 4;
    for n in 1..2000 {
        term = term * z2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if n > min_terms && add.norm() <= 1e-17 * sum.norm() {
            return Ok(sum * FRAC_2_SQRT_PI);
        }
    }
    Err(Error::NotConverged(format!("erf power series at z = {z}")))
}

/// `erfc(z)` by the Laplace continued fraction, `Re z > 0`.
fn erfc_cf(z: Complex64) -> Option<Complex64> {
    let tiny = 1e-300;
    let mut f = z;
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..20000 {
        let a = k as f64 / 2.0;
        d = z + d * a;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = z + a / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Some((-z * z).exp() / (f * PI.sqrt()));
        }
    }
    None
}

/// Complex error function: power series for `|z| <= 4`, continued fraction
/// for `erfc` beyond, with the series as fallback up to `|z| = 20`.
pub fn complex_erf(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidParameter("erf argument must be finite".into()));
    }
    if z.norm() <= 4.0 {
        return erf_series(z);
    }
    if z.re < 0.0 {
        return complex_erf(-z).map(|v| -v);
    }
    if let Some(v) = erfc_cf(z) {
        if v.re.is_finite() && v.im.is_finite() {
            return Ok(1.0 - v);
        }
    }
    if z.norm() <= 20.0 {
        return erf_series(z);
    }
    Err(Error::NotConverged(format!("erf at z = {z}")))
}

/// Hilbert transform of `exp(-alpha x^2) cos(omega x)` at `x`:
/// `Re(i/2 exp(-x(i omega + alpha x)) [erf(u-) - exp(2 i omega x) erf(u+)])`
/// with `u-+ = (omega/2 -+ i alpha x) / sqrt(alpha)`.
pub fn oracle_gauss_cos_1d(alpha: f64, omega: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter("alpha must be positive".into()));
    }
    let sa = alpha.sqrt();
    let u_minus = Complex64::new(omega / 2.0, -alpha * x) / sa;
    let u_plus = Complex64::new(omega / 2.0, alpha * x) / sa;
    let pre = Complex64::new(0.0, 0.5) * Complex64::new(-alpha * x * x, -omega * x).exp();
    let bracket = complex_erf(u_minus)? - Complex64::new(0.0, 2.0 * omega * x).exp() * complex_erf(u_plus)?;
    Ok((pre * bracket).re)
}

fn gauss_cos(alpha: f64, omega: f64, x: f64) -> f64 {
    (-alpha * x * x).exp() * (omega * x).cos()
}

/// Per-axis `(alpha, omega)` of the reference cube signal.
pub const CUBE_PARAMS: [(f64, f64); 3] = [(10.0, 50.0), (20.0, 40.0), (20.0, 60.0)];

/// The separable cube signal `prod_a exp(-alpha_a x_a^2) cos(omega_a x_a)`.
pub fn cube_signal(p: &[f64]) -> f64 {
    CUBE_PARAMS.iter().zip(p).map(|(&(a, w), &x)| gauss_cos(a, w, x)).product()
}

/// Component `f_100` of the cube signal.
pub fn oracle_cube_component(x: f64, y: f64, z: f64) -> Result<f64> {
    let [(a0, w0), (a1, w1), (a2, w2)] = CUBE_PARAMS;
    Ok(oracle_gauss_cos_1d(a0, w0, x)? * gauss_cos(a1, w1, y) * gauss_cos(a2, w2, z))
}

/// Amplitude of the cube signal's analytic signal; the field is separable,
/// so it is the product of the 1-D amplitudes.
pub fn oracle_cube_amplitude(x: f64, y: f64, z: f64) -> Result<f64> {
    let mut a = 1.0;
    for (&(al, w), &t) in CUBE_PARAMS.iter().zip(&[x, y, z]) {
        a *= gauss_cos(al, w, t).hypot(oracle_gauss_cos_1d(al, w, t)?);
    }
    Ok(a)
}

/// Closed-form 2-D fields with known analytic signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// `cos x cos y`.
    AlignedProduct,
    /// The product rotated by 45 degrees: `(cos sqrt2 x + cos sqrt2 y) / 2`.
    RotatedProduct,
    /// `cos x`, constant along `y`.
    LowDim,
    /// `cos((x - y) / sqrt2)`.
    LowDimRotated,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 4] =
        [ClosedForm::AlignedProduct, ClosedForm::RotatedProduct, ClosedForm::LowDim, ClosedForm::LowDimRotated];

    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::AlignedProduct => "aligned",
            ClosedForm::RotatedProduct => "rotated",
            ClosedForm::LowDim => "lowdim",
            ClosedForm::LowDimRotated => "lowdim-rotated",
        }
    }

    /// Smallest period shared by both axes.
    pub fn period(&self) -> f64 {
        match self {
            ClosedForm::AlignedProduct | ClosedForm::LowDim => 2.0 * PI,
            ClosedForm::RotatedProduct => SQRT_2 * PI,
            ClosedForm::LowDimRotated => 2.0 * SQRT_2 * PI,
        }
    }

    pub fn signal(&self, x: f64, y: f64) -> f64 {
        self.components(x, y)[0]
    }

    /// Components `(f_00, f_10, f_01, f_11)`.
    pub fn components(&self, x: f64, y: f64) -> [f64; 4] {
        match self {
            ClosedForm::AlignedProduct => [x.cos() * y.cos(), x.sin() * y.cos(), x.cos() * y.sin(), x.sin() * y.sin()],
            ClosedForm::RotatedProduct => {
                let (u, v) = (SQRT_2 * x, SQRT_2 * y);
                [0.5 * u.cos() + 0.5 * v.cos(), 0.5 * u.sin(), 0.5 * v.sin(), 0.0]
            }
            ClosedForm::LowDim => [x.cos(), x.sin(), 0.0, 0.0],
            ClosedForm::LowDimRotated => {
                let u = (x - y) / SQRT_2;
                [u.cos(), u.sin(), -u.sin(), u.cos()]
            }
        }
    }

    /// Squared amplitude in closed form.
    pub fn amplitude_sq(&self, x: f64, y: f64) -> f64 {
        match self {
            ClosedForm::AlignedProduct | ClosedForm::LowDim => 1.0,
            ClosedForm::RotatedProduct => 0.5 * (1.0 + (SQRT_2 * x).cos() * (SQRT_2 * y).cos()),
            ClosedForm::LowDimRotated => 2.0,
        }
    }

    pub fn amplitude(&self, x: f64, y: f64) -> f64 {
        self.amplitude_sq(x, y).max(0.0).sqrt()
    }
}
