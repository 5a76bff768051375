//! The commutative Scheffers algebra `S_d` and a sign-parameterized
//! generator algebra used by the ordering search.
//!
//! Blades are indexed by bitmask: bit `a` set means generator `e_{a+1}` is a
//! factor. Axis indices in this crate are zero-based, so axis `a` carries the
//! generator `e_{a+1}`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest supported number of generators.
pub const MAX_DIM: usize = 16;

/// Relative singular-value threshold below which an element counts as a zero divisor.
pub const SINGULAR_RTOL: f64 = 1e-12;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(())
}

/// Product of two basis blades: `e_b * e_g = sign * e_{b ^ g}`.
#[inline]
pub fn blade_product(b: u32, g: u32) -> (f64, u32) {
    let sign = if (b & g).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    (sign, b ^ g)
}

/// Sign `(-1)^{|(i xor j) \ i|}` that relates a bracket to component `j`.
#[inline]
pub fn shift_sign(i: u32, j: u32) -> f64 {
    if ((i ^ j) & !i).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Human-readable blade name such as `e0`, `e1` or `e1e3`.
pub fn blade_name(blade: u32) -> String {
    if blade == 0 {
        return "e0".to_string();
    }
    let mut s = String::new();
    for a in 0..32 {
        if blade & (1 << a) != 0 {
            s.push_str(&format!("e{}", a + 1));
        }
    }
    s
}

/// A direction `j` in `{0,1}^d`, stored as a blade bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    dim: usize,
    bits: u32,
}

impl Direction {
    pub fn new(dim: usize, bits: u32) -> Result<Self> {
        check_dim(dim)?;
        if bits >> dim != 0 {
            return Err(Error::InvalidDirection(format!("bitmask {bits:#b} exceeds dimension {dim}")));
        }
        Ok(Direction { dim, bits })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Direction::new(dim, 0)
    }

    pub fn ones(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Direction::new(dim, (1u32 << dim) - 1)
    }

    /// Direction with a single axis set.
    pub fn axis(dim: usize, axis: usize) -> Result<Self> {
        if axis >= dim {
            return Err(Error::InvalidDirection(format!("axis {axis} out of range for dimension {dim}")));
        }
        Direction::new(dim, 1 << axis)
    }

    /// Parses a digit string such as `"101"`; the first digit is axis 0.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut bits = 0u32;
        for (a, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << a,
                _ => return Err(Error::InvalidDirection(format!("unexpected character {c:?} in {s:?}"))),
            }
        }
        Direction::new(s.chars().count(), bits)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.bits & (1 << axis) != 0
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Axes present in the direction, ascending.
    pub fn axes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(move |&a| self.contains(a))
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 0..self.dim {
            f.write_str(if self.contains(a) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// An element of `S_d`: `2^d` real coefficients in ascending blade order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheffersElement {
    dim: usize,
    coeffs: Vec<f64>,
}

impl ScheffersElement {
    pub fn new(dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if coeffs.len() != 1 << dim {
            return Err(Error::DimensionMismatch { expected: 1 << dim, found: coeffs.len() });
        }
        Ok(ScheffersElement { dim, coeffs })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(ScheffersElement { dim, coeffs: vec![0.0; 1 << dim] })
    }

    pub fn scalar(dim: usize, value: f64) -> Result<Self> {
        let mut z = Self::zero(dim)?;
        z.coeffs[0] = value;
        Ok(z)
    }

    pub fn basis(dim: usize, blade: u32) -> Result<Self> {
        let mut z = Self::zero(dim)?;
        let slot = z
            .coeffs
            .get_mut(blade as usize)
            .ok_or_else(|| Error::InvalidParameter(format!("blade {blade} out of range for dimension {dim}")))?;
        *slot = 1.0;
        Ok(z)
    }

    /// `re + e_{axis+1} im`, an element of the plane `S(axis)`.
    pub fn plane(dim: usize, axis: usize, re: f64, im: f64) -> Result<Self> {
        if axis >= dim {
            return Err(Error::InvalidParameter(format!("axis {axis} out of range for dimension {dim}")));
        }
        let mut z = Self::scalar(dim, re)?;
        z.coeffs[1 << axis] = im;
        Ok(z)
    }

    /// `cos(theta) + e_{axis+1} sin(theta)`.
    pub fn unit_exp(dim: usize, axis: usize, theta: f64) -> Result<Self> {
        Self::plane(dim, axis, theta.cos(), theta.sin())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn coeff(&self, blade: u32) -> f64 {
        self.coeffs[blade as usize]
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        ScheffersElement { dim: self.dim, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(ScheffersElement {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(ScheffersElement {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Algebra product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        for (b, &x) in self.coeffs.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (g, &y) in other.coeffs.iter().enumerate() {
                if y == 0.0 {
                    continue;
                }
                let (s, k) = blade_product(b as u32, g as u32);
                out[k as usize] += s * x * y;
            }
        }
        Ok(ScheffersElement { dim: self.dim, coeffs: out })
    }

    /// Multiplies by `re + e_{axis+1} im` using the plane action on blade pairs.
    pub fn mul_plane(&self, axis: usize, re: f64, im: f64) -> Self {
        let bit = 1usize << axis;
        let mut out = self.coeffs.clone();
        for b in 0..self.coeffs.len() {
            if b & bit == 0 {
                let (p, q) = (self.coeffs[b], self.coeffs[b | bit]);
                out[b] = re * p - im * q;
                out[b | bit] = re * q + im * p;
            }
        }
        ScheffersElement { dim: self.dim, coeffs: out }
    }

    /// Inverse via the left-multiplication matrix.
    ///
    /// Elements supported on a single plane `{e0, e_{i}}` use the field formula.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.coeffs.len();
        let support: Vec<usize> = (1..n).filter(|&b| self.coeffs[b] != 0.0).collect();
        if support.len() <= 1 && support.iter().all(|b| b.is_power_of_two()) {
            let x = self.coeffs[0];
            let y = support.first().map_or(0.0, |&b| self.coeffs[b]);
            let r2 = x * x + y * y;
            if r2 == 0.0 || !r2.is_finite() {
                return Err(Error::ZeroDivisor);
            }
            let mut out = vec![0.0; n];
            out[0] = x / r2;
            if let Some(&b) = support.first() {
                out[b] = -y / r2;
            }
            return Ok(ScheffersElement { dim: self.dim, coeffs: out });
        }
        let m = DMatrix::from_fn(n, n, |beta, gamma| {
            let alpha = (beta ^ gamma) as u32;
            let (s, _) = blade_product(alpha, gamma as u32);
            s * self.coeffs[alpha as usize]
        });
        let svd = m.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if !(smax > 0.0) || smin < SINGULAR_RTOL * smax {
            return Err(Error::ZeroDivisor);
        }
        let mut rhs = DVector::zeros(n);
        rhs[0] = 1.0;
        let x = m.lu().solve(&rhs).ok_or(Error::ZeroDivisor)?;
        Ok(ScheffersElement { dim: self.dim, coeffs: x.iter().copied().collect() })
    }

    /// Negates every blade containing generator `e_{axis+1}`.
    pub fn conj_axis(&self, axis: usize) -> Result<Self> {
        if axis >= self.dim {
            return Err(Error::InvalidParameter(format!("axis {axis} out of range for dimension {}", self.dim)));
        }
        let bit = 1usize << axis;
        let coeffs = self.coeffs.iter().enumerate().map(|(b, &c)| if b & bit != 0 { -c } else { c }).collect();
        Ok(ScheffersElement { dim: self.dim, coeffs })
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }
}

impl fmt::Display for ScheffersElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (b, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            if !first {
                f.write_str(if *c < 0.0 { " - " } else { " + " })?;
                write!(f, "{}", c.abs())?;
            } else {
                write!(f, "{c}")?;
            }
            if b != 0 {
                write!(f, "{}", blade_name(b as u32))?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Add for &ScheffersElement {
    type Output = ScheffersElement;
    /// Panics on dimension mismatch; see [`ScheffersElement::checked_add`].
    fn add(self, rhs: Self) -> ScheffersElement {
        self.checked_add(rhs).expect("dimension mismatch in addition")
    }
}

impl AddAssign<&ScheffersElement> for ScheffersElement {
    fn add_assign(&mut self, rhs: &ScheffersElement) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for &ScheffersElement {
    type Output = ScheffersElement;
    fn sub(self, rhs: Self) -> ScheffersElement {
        self.checked_sub(rhs).expect("dimension mismatch in subtraction")
    }
}

impl Mul for &ScheffersElement {
    type Output = ScheffersElement;
    fn mul(self, rhs: Self) -> ScheffersElement {
        self.checked_mul(rhs).expect("dimension mismatch in product")
    }
}

impl Neg for &ScheffersElement {
    type Output = ScheffersElement;
    fn neg(self) -> ScheffersElement {
        self.scale(-1.0)
    }
}

/// Generator algebra with per-generator squares and a uniform swap sign.
///
/// `square_sign[a]` is `e_{a+1}^2` and `swap_sign` is the sign picked up by
/// exchanging two distinct adjacent generators. The Scheffers algebra has all
/// squares `-1` and swap sign `+1`; the Clifford-type algebra used for the
/// noncommutative comparison has swap sign `-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub square_sign: Vec<i8>,
    pub swap_sign: i8,
}

impl AlgebraSpec {
    pub fn new(square_sign: Vec<i8>, swap_sign: i8) -> Result<Self> {
        check_dim(square_sign.len())?;
        if square_sign.iter().any(|s| !matches!(s, -1..=1)) {
            return Err(Error::InvalidParameter("square signs must be in {-1, 0, 1}".into()));
        }
        if swap_sign != 1 && swap_sign != -1 {
            return Err(Error::InvalidParameter("swap sign must be +1 or -1".into()));
        }
        Ok(AlgebraSpec { square_sign, swap_sign })
    }

    pub fn scheffers(dim: usize) -> Result<Self> {
        Self::new(vec![-1; dim], 1)
    }

    pub fn clifford(dim: usize) -> Result<Self> {
        Self::new(vec![-1; dim], -1)
    }

    pub fn dim(&self) -> usize {
        self.square_sign.len()
    }

    pub fn is_commutative(&self) -> bool {
        self.swap_sign == 1
    }

    /// Reduces a product of generators (zero-based axes, in product order)
    /// to `sign * e_blade`. A zero sign means the product vanishes.
    pub fn normalize(&self, factors: &[usize]) -> Result<(i8, u32)> {
        let mut sorted: Vec<usize> = Vec::with_capacity(factors.len());
        let mut sign = 1i8;
        for &g in factors {
            if g >= self.dim() {
                return Err(Error::InvalidParameter(format!("generator axis {g} out of range")));
            }
            let mut pos = sorted.len();
            while pos > 0 && sorted[pos - 1] > g {
                sign *= self.swap_sign;
                pos -= 1;
            }
            if pos > 0 && sorted[pos - 1] == g {
                sign *= self.square_sign[g];
                sorted.remove(pos - 1);
            } else {
                sorted.insert(pos, g);
            }
        }
        let blade = sorted.iter().fold(0u32, |acc, &g| acc | (1 << g));
        Ok((sign, blade))
    }
}
