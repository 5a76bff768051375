//! Holomorphic extension to the upper space and the boundary-value
//! machinery around it: Cauchy-Riemann residuals, the Cauchy integral on a
//! polydisk, circle and half-plane conjugates, and the Mobius map.
//!
//! Values in a single plane `S(axis)` are carried as [`Complex64`] whose
//! imaginary unit stands for `e_{axis+1}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{Direction, ScheffersElement};
use crate::error::{Error, Result};
use crate::grid::{BinKind, GridSignal, HyperSpectrum};
use crate::par::{apply_along_axis_real, par_map, par_map_range};

/// Relative spectral energy allowed on negative bins before extension is refused.
pub const NEGATIVE_SUPPORT_TOL: f64 = 1e-9;

/// A point `x + e y` of the upper space, one plane per axis, `y >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl UpperPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
        }
        if y.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("upper-space points need finite x and y >= 0".into()));
        }
        Ok(UpperPoint { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Evaluator for the extension of a positively supported spectrum.
///
/// The even-length Nyquist bin is treated as frequency `+pi/dx`; on lattice
/// points at `y = 0` this agrees with the inverse transform. Negative bins,
/// below the support tolerance, are dropped.
#[derive(Debug, Clone)]
pub struct HoloExtension<'a> {
    spectrum: &'a HyperSpectrum,
    freqs: Vec<Vec<Option<f64>>>,
}

impl<'a> HoloExtension<'a> {
    pub fn new(spectrum: &'a HyperSpectrum) -> Result<Self> {
        let lat = spectrum.lattice();
        let mut neg = 0.0;
        let mut total = 0.0;
        crate::grid::for_each_index(lat.shape(), |flat, idx| {
            let e: f64 = spectrum.components().iter().map(|c| c[flat] * c[flat]).sum();
            total += e;
            if idx.iter().enumerate().any(|(a, &k)| lat.bin_kind(a, k) == BinKind::Negative) {
                neg += e;
            }
        });
        let ratio = if total > 0.0 { (neg / total).sqrt() } else { 0.0 };
        if ratio > NEGATIVE_SUPPORT_TOL {
            return Err(Error::NegativeSupport { ratio });
        }
        let freqs = (0..lat.dim())
            .map(|a| {
                (0..lat.shape()[a])
                    .map(|k| match lat.bin_kind(a, k) {
                        BinKind::Nyquist => Some(PI / lat.spacing()[a]),
                        BinKind::Negative => None,
                        _ => Some(lat.frequency(a, k)),
                    })
                    .collect()
            })
            .collect();
        Ok(HoloExtension { spectrum, freqs })
    }

    /// `F(x + e y) = sum_k s(k) prod_i exp(-w_i y_i) exp(e_i w_i (x_i - origin_i)) / (N_i dx_i)`.
    pub fn eval(&self, p: &UpperPoint) -> Result<ScheffersElement> {
        let lat = self.spectrum.lattice();
        let d = lat.dim();
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
        let mut comps: Vec<Vec<f64>> = self.spectrum.components().to_vec();
        let mut len = lat.len();
        for axis in (0..d).rev() {
            let n = lat.shape()[axis];
            let norm = 1.0 / (n as f64 * lat.spacing()[axis]);
            let xr = p.x[axis] - lat.origin()[axis];
            let w: Vec<Complex64> = self.freqs[axis]
                .iter()
                .map(|om| match *om {
                    Some(om) => Complex64::from_polar((-om * p.y[axis]).exp() * norm, om * xr),
                    None => Complex64::new(0.0, 0.0),
                })
                .collect();
            let outer = len / n;
            let bit = 1usize << axis;
            let mut next = vec![vec![0.0; outer]; comps.len()];
            for b in 0..comps.len() {
                if b & bit != 0 {
                    continue;
                }
                for o in 0..outer {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, wk) in w.iter().enumerate() {
                        acc += Complex64::new(comps[b][o * n + k], comps[b | bit][o * n + k]) * wk;
                    }
                    next[b][o] = acc.re;
                    next[b | bit][o] = acc.im;
                }
            }
            comps = next;
            len = outer;
        }
        ScheffersElement::new(d, comps.into_iter().map(|c| c[0]).collect())
    }

    /// Evaluates at many points in parallel.
    pub fn eval_many(&self, points: &[UpperPoint]) -> Result<Vec<ScheffersElement>> {
        par_map(points, |p| self.eval(p)).into_iter().collect()
    }
}

/// Holomorphic extension of a positively supported spectrum at one point.
pub fn holo_extend(s: &HyperSpectrum, p: &UpperPoint) -> Result<ScheffersElement> {
    HoloExtension::new(s)?.eval(p)
}

/// Norm of the central-difference `d/d(conj z_i) = (d/dx_i + e_i d/dy_i) / 2`
/// per axis, with step `h`. Requires `y_i >= h`.
pub fn cr_residual(
    f: &dyn Fn(&UpperPoint) -> Result<ScheffersElement>,
    p: &UpperPoint,
    h: f64,
) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let d = p.dim();
    let mut out = Vec::with_capacity(d);
    for axis in 0..d {
        if p.y[axis] < h {
            return Err(Error::StepTooLarge { axis, h });
        }
        let shifted = |dx: f64, dy: f64| -> Result<ScheffersElement> {
            let mut q = p.clone();
            q.x[axis] += dx;
            q.y[axis] += dy;
            f(&q)
        };
        let fx = shifted(h, 0.0)?.checked_sub(&shifted(-h, 0.0)?)?;
        let fy = shifted(0.0, h)?.checked_sub(&shifted(0.0, -h)?)?;
        let r = fx.checked_add(&fy.mul_plane(axis, 0.0, 1.0))?.scale(0.25 / h);
        out.push(r.norm());
    }
    Ok(out)
}

/// Cauchy integral over the distinguished boundary of a polydisk in the
/// axes of `j`, trapezoidal rule with `n_quad` nodes per circle.
///
/// Axes outside `j` are held at `z`. Returns `F(z)` when `z` is inside every
/// circle of `j` and zero when it is outside one of them.
pub fn cauchy_polydisk(
    f: &(dyn Fn(&[Complex64]) -> ScheffersElement + Sync),
    center: &[Complex64],
    radius: f64,
    z: &[Complex64],
    j: Direction,
    n_quad: usize,
) -> Result<ScheffersElement> {
    let d = j.dim();
    if center.len() != d || z.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: center.len().min(z.len()) });
    }
    if !(radius > 0.0) || n_quad == 0 {
        return Err(Error::InvalidParameter("radius and node count must be positive".into()));
    }
    for a in j.axes() {
        if ((z[a] - center[a]).norm() - radius).abs() <= 1e-12 * radius {
            return Err(Error::OnBoundary { axis: a });
        }
    }
    let axes: Vec<usize> = j.axes().collect();
    let total = n_quad.pow(axes.len() as u32);
    let terms = par_map_range(total, |mut q| {
        let mut zeta = z.to_vec();
        let mut kernel = Vec::with_capacity(axes.len());
        for &a in &axes {
            let t = 2.0 * PI * (q % n_quad) as f64 / n_quad as f64;
            q /= n_quad;
            let r = Complex64::from_polar(radius, t);
            zeta[a] = center[a] + r;
            kernel.push((a, r / (zeta[a] - z[a])));
        }
        let mut v = f(&zeta);
        for (a, k) in kernel {
            v = v.mul_plane(a, k.re, k.im);
        }
        v
    });
    let mut acc = ScheffersElement::zero(d)?;
    for t in &terms {
        if t.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: t.dim() });
        }
        acc += t;
    }
    Ok(acc.scale(1.0 / total as f64))
}

/// Conjugate function on the torus with the cotangent kernel
/// `(1/2pi) p.v. int f(t) cot((theta - t)/2) dt` along each axis of `j`.
///
/// The principal value is taken with the staggered trapezoidal rule: nodes at
/// odd offsets from the evaluation point, paired symmetrically. It is exact
/// for trigonometric polynomials of degree below `N/2`.
pub fn circle_hilbert(samples: &[f64], shape: &[usize], j: Direction) -> Result<Vec<f64>> {
    if shape.len() != j.dim() {
        return Err(Error::DimensionMismatch { expected: shape.len(), found: j.dim() });
    }
    if samples.len() != shape.iter().product::<usize>() {
        return Err(Error::ShapeMismatch("sample count does not match shape".into()));
    }
    let mut data = samples.to_vec();
    for axis in j.axes() {
        let n = shape[axis];
        if n % 2 != 0 || n == 0 {
            return Err(Error::OddSampleCount(n));
        }
        let cots: Vec<(usize, f64)> =
            (1..n / 2).step_by(2).map(|q| (q, 2.0 / (n as f64 * (PI * q as f64 / n as f64).tan()))).collect();
        apply_along_axis_real(&mut data, shape, axis, |line, out| {
            for (m, o) in out.iter_mut().enumerate() {
                *o = cots.iter().map(|&(q, c)| c * (line[(m + n - q) % n] - line[(m + q) % n])).sum();
            }
        });
    }
    Ok(data)
}

/// Poisson extension `u` and its conjugate `u_dagger` at `(x, y)` for a
/// 1-D grid, using the trapezoidal sum over the samples.
pub fn poisson_halfplane(f: &GridSignal, x: f64, y: f64) -> Result<(f64, f64)> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: f.dim() });
    }
    if !(y > 0.0) {
        return Err(Error::NonPositiveHeight(y));
    }
    let lat = f.lattice();
    let h = lat.spacing()[0];
    let (mut u, mut v) = (0.0, 0.0);
    for (k, &fk) in f.data().iter().enumerate() {
        let s = x - lat.coordinate(0, k);
        let den = PI * (s * s + y * y);
        u += y / den * fk;
        v += s / den * fk;
    }
    Ok((u * h, v * h))
}

fn check_mobius_params(a: &[Complex64], theta: &[f64], d: usize) -> Result<()> {
    if a.len() != d || theta.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: a.len().min(theta.len()) });
    }
    if a.iter().any(|ai| !(ai.norm() < 1.0)) {
        return Err(Error::InvalidParameter("Mobius parameters need |a_i| < 1".into()));
    }
    Ok(())
}

/// `(conj(a) w - exp(e theta) a) / (w - exp(e theta))` per axis.
pub fn mobius_to_upper(w: &[Complex64], a: &[Complex64], theta: &[f64]) -> Result<Vec<Complex64>> {
    check_mobius_params(a, theta, w.len())?;
    (0..w.len())
        .map(|i| {
            let u = Complex64::from_polar(1.0, theta[i]);
            let den = w[i] - u;
            if den.norm() <= 1e-15 {
                return Err(Error::MobiusPole { axis: i });
            }
            Ok((a[i].conj() * w[i] - u * a[i]) / den)
        })
        .collect()
}

/// Inverse of [`mobius_to_upper`]: `exp(e theta) (z - a) / (z - conj(a))`.
pub fn mobius_from_upper(z: &[Complex64], a: &[Complex64], theta: &[f64]) -> Result<Vec<Complex64>> {
    check_mobius_params(a, theta, z.len())?;
    (0..z.len())
        .map(|i| {
            let den = z[i] - a[i].conj();
            if den.norm() <= 1e-15 {
                return Err(Error::MobiusPole { axis: i });
            }
            Ok(Complex64::from_polar(1.0, theta[i]) * (z[i] - a[i]) / den)
        })
        .collect()
}
