//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scheffers::algebra::shift_sign;
use scheffers::grid::{GridSignal, Lattice};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_grid(rng: &mut ChaCha8Rng, shape: &[usize]) -> GridSignal {
    let d = shape.len();
    let spacing: Vec<f64> = (0..d).map(|_| rng.gen_range(0.2..1.5)).collect();
    let origin: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let lat = Lattice::new(shape.to_vec(), origin, spacing).unwrap();
    let data = (0..lat.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    GridSignal::new(lat, data).unwrap()
}

/// Random trigonometric polynomial with modes strictly below `kmax` per axis,
/// exactly periodic on the lattice and free of Nyquist content.
pub fn band_limited(rng: &mut ChaCha8Rng, shape: &[usize], kmax: usize, modes: usize) -> GridSignal {
    let d = shape.len();
    let lat = Lattice::new(shape.to_vec(), vec![0.0; d], vec![1.0; d]).unwrap();
    let terms: Vec<(Vec<f64>, f64, f64)> = (0..modes)
        .map(|_| {
            let k: Vec<f64> =
                (0..d).map(|a| 2.0 * PI * rng.gen_range(0..kmax.min(shape[a] / 2)) as f64 / shape[a] as f64).collect();
            (k, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    let data = (0..lat.len())
        .map(|i| {
            let x = lat.point(i);
            terms.iter().map(|(k, c, ph)| c * (k.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() + ph).cos()).sum()
        })
        .collect();
    GridSignal::new(lat, data).unwrap()
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let den = b.iter().map(|y| y * y).sum::<f64>().sqrt().max(1e-300);
    num / den
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn harmonic(omega: &[f64], x: &[f64], bits: u32) -> f64 {
    omega
        .iter()
        .zip(x)
        .enumerate()
        .map(|(l, (w, xl))| if bits & (1 << l) != 0 { (w * xl).sin() } else { (w * xl).cos() })
        .product()
}

/// `alpha^k(omega) = sum_x f(x) prod_l cos(omega_l x_l - k_l pi/2) dx`, with
/// `x` measured from the lattice origin.
pub fn alpha_upper(g: &GridSignal, k: u32, omega: &[f64]) -> f64 {
    let lat = g.lattice();
    let vol: f64 = lat.spacing().iter().product();
    (0..lat.len())
        .map(|i| {
            let x: Vec<f64> = lat.point(i).iter().zip(lat.origin()).map(|(p, o)| p - o).collect();
            g.data()[i] * harmonic(omega, &x, k)
        })
        .sum::<f64>()
        * vol
}

/// Component `blade` of the spectrum at the bin `kbin`, by direct summation.
pub fn brute_spectrum(g: &GridSignal, blade: u32, kbin: &[usize]) -> f64 {
    let lat = g.lattice();
    let omega: Vec<f64> = kbin.iter().enumerate().map(|(a, &k)| lat.frequency(a, k)).collect();
    let sign = if blade.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    sign * alpha_upper(g, blade, &omega)
}

/// `f_j` assembled from brackets `<alpha^{i xor j}, alpha_i>_+` with the
/// shift sign, summed over the non-negative bins.
pub fn bracket_fj(g: &GridSignal, j: u32) -> Vec<f64> {
    let lat = g.lattice();
    let d = lat.dim();
    let half: Vec<usize> = lat.shape().iter().map(|n| n / 2 + 1).collect();
    let nbins: usize = half.iter().product();
    let mut bins = Vec::with_capacity(nbins);
    for flat in 0..nbins {
        let mut rem = flat;
        let mut k = vec![0; d];
        for a in (0..d).rev() {
            k[a] = rem % half[a];
            rem /= half[a];
        }
        let mut w = 1.0;
        let mut omega = vec![0.0; d];
        for a in 0..d {
            let n = lat.shape()[a];
            let dw = 2.0 * PI / (n as f64 * lat.spacing()[a]);
            omega[a] = dw * k[a] as f64;
            let edge = k[a] == 0 || 2 * k[a] == n;
            w *= dw / PI * if edge { 0.5 } else { 1.0 };
        }
        bins.push((omega, w));
    }
    let m = 1u32 << d;
    let proj: Vec<Vec<f64>> = bins.iter().map(|(om, _)| (0..m).map(|k| alpha_upper(g, k, om)).collect()).collect();
    (0..lat.len())
        .map(|p| {
            let x: Vec<f64> = lat.point(p).iter().zip(lat.origin()).map(|(a, o)| a - o).collect();
            let mut acc = 0.0;
            for (b, (om, w)) in bins.iter().enumerate() {
                for i in 0..m {
                    acc += shift_sign(i, j) * w * proj[b][(i ^ j) as usize] * harmonic(om, &x, i);
                }
            }
            acc
        })
        .collect()
}

/// `erf(z) = 2 z / sqrt(pi) int_0^1 exp(-z^2 t^2) dt`, composite Simpson.
pub fn erf_by_quadrature(z: Complex64, panels: usize) -> Complex64 {
    let h = 1.0 / panels as f64;
    let f = |t: f64| (-(z * z) * t * t).exp();
    let mut acc = f(0.0) + f(1.0);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(k as f64 * h) * w;
    }
    acc * h / 3.0 * z * 2.0 / PI.sqrt()
}
