//! Hypercomplex Fourier transform, partial Hilbert transforms and the
//! analytic signal, plus a direct quadrature route for single components.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::algebra::Direction;
use crate::error::{Error, Result};
use crate::grid::{for_each_index, AnalyticGrid, BinKind, GridSignal, HyperSpectrum, Lattice};
use crate::par::{apply_along_axis, par_map};

fn plans(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    let mut planner = FftPlanner::new();
    (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
}

fn run_fft(fft: &dyn Fft<f64>, line: &mut [Complex64], scratch: &mut Vec<Complex64>) {
    let need = fft.get_inplace_scratch_len();
    if scratch.len() < need {
        scratch.resize(need, Complex64::new(0.0, 0.0));
    }
    fft.process_with_scratch(line, &mut scratch[..need]);
}

/// One pass along `axis`: each blade pair `(b, b | e_axis)` is a complex
/// line with imaginary unit `e_{axis+1}`.
fn axis_pass(lattice: &Lattice, comps: &mut [Vec<f64>], axis: usize, inverse: bool) {
    let n = lattice.shape()[axis];
    let h = lattice.spacing()[axis];
    let scale = if inverse { 1.0 / (n as f64 * h) } else { h };
    let (fwd, inv) = plans(n);
    let fft = if inverse { inv } else { fwd };
    let bit = 1usize << axis;
    for b in 0..comps.len() {
        if b & bit != 0 {
            continue;
        }
        if comps[b].iter().all(|&v| v == 0.0) && comps[b | bit].iter().all(|&v| v == 0.0) {
            continue;
        }
        let mut re = std::mem::take(&mut comps[b]);
        let mut im = std::mem::take(&mut comps[b | bit]);
        apply_along_axis(&mut re, &mut im, lattice.shape(), axis, |line, scratch| {
            run_fft(fft.as_ref(), line, scratch);
            for v in line.iter_mut() {
                *v *= scale;
            }
        });
        comps[b] = re;
        comps[b | bit] = im;
    }
}

fn transform_components(lattice: &Lattice, comps: &mut [Vec<f64>], inverse: bool) {
    for axis in 0..lattice.dim() {
        axis_pass(lattice, comps, axis, inverse);
    }
}

fn real_to_components(g: &GridSignal) -> Vec<Vec<f64>> {
    let m = 1usize << g.dim();
    let mut comps = vec![vec![0.0; g.data().len()]; m];
    comps[0] = g.data().to_vec();
    comps
}

/// Forward transform with kernel `prod_i exp(-e_i w_i x_i)` and Riemann
/// weights `prod_i dx_i`; phases are measured from the lattice origin.
pub fn hft_forward(g: &GridSignal) -> HyperSpectrum {
    let mut comps = real_to_components(g);
    transform_components(g.lattice(), &mut comps, false);
    HyperSpectrum::from_parts(g.lattice().clone(), comps)
}

/// Forward transform of a hypercomplex-valued grid.
pub fn hft_forward_field(a: &AnalyticGrid) -> HyperSpectrum {
    let mut comps = a.components().to_vec();
    transform_components(a.lattice(), &mut comps, false);
    HyperSpectrum::from_parts(a.lattice().clone(), comps)
}

/// Inverse transform, scaled so that `hft_inverse(hft_forward(g))` returns `g`.
pub fn hft_inverse(s: &HyperSpectrum) -> AnalyticGrid {
    let mut comps = s.components().to_vec();
    transform_components(s.lattice(), &mut comps, true);
    AnalyticGrid::from_parts(s.lattice().clone(), comps)
}

/// Per-bin weight of the positive restriction.
pub fn restrict_weight(kind: BinKind) -> f64 {
    match kind {
        BinKind::Negative => 0.0,
        BinKind::Dc | BinKind::Nyquist => 1.0,
        BinKind::Positive => 2.0,
    }
}

/// Multiplies every bin by `prod_i m(k_i)` with `m` = 0 on negative bins,
/// 1 at DC and Nyquist, 2 on positive bins.
pub fn positive_restrict(s: &HyperSpectrum) -> HyperSpectrum {
    let lat = s.lattice();
    let masks: Vec<Vec<f64>> =
        (0..lat.dim()).map(|a| (0..lat.shape()[a]).map(|k| restrict_weight(lat.bin_kind(a, k))).collect()).collect();
    let mut weights = vec![0.0; lat.len()];
    for_each_index(lat.shape(), |flat, idx| {
        weights[flat] = idx.iter().enumerate().map(|(a, &k)| masks[a][k]).product();
    });
    let comps = s.components().iter().map(|c| c.iter().zip(&weights).map(|(v, w)| v * w).collect()).collect();
    HyperSpectrum::from_parts(lat.clone(), comps)
}

/// `-i sign(w)` with zero at DC and Nyquist, as a complex factor.
pub fn hilbert_multiplier(kind: BinKind) -> Complex64 {
    match kind {
        BinKind::Positive => Complex64::new(0.0, -1.0),
        BinKind::Negative => Complex64::new(0.0, 1.0),
        BinKind::Dc | BinKind::Nyquist => Complex64::new(0.0, 0.0),
    }
}

/// 1-D Hilbert transforms along every axis in `j`, ascending.
pub fn partial_hilbert(g: &GridSignal, j: Direction) -> Result<GridSignal> {
    if j.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: j.dim() });
    }
    let lat = g.lattice();
    let mut data = g.data().to_vec();
    for axis in j.axes() {
        let n = lat.shape()[axis];
        let (fwd, inv) = plans(n);
        let mult: Vec<Complex64> = (0..n).map(|k| hilbert_multiplier(BinKind::of(k, n)) / n as f64).collect();
        let mut im = vec![0.0; data.len()];
        apply_along_axis(&mut data, &mut im, lat.shape(), axis, |line, scratch| {
            run_fft(fwd.as_ref(), line, scratch);
            for (v, m) in line.iter_mut().zip(&mult) {
                *v *= m;
            }
            run_fft(inv.as_ref(), line, scratch);
        });
    }
    GridSignal::new(lat.clone(), data)
}

/// [`partial_hilbert`] on a lattice zero-padded `pad` times, cropped back.
pub fn partial_hilbert_padded(g: &GridSignal, j: Direction, pad: usize) -> Result<GridSignal> {
    if pad <= 1 {
        return partial_hilbert(g, j);
    }
    partial_hilbert(&g.zero_pad(pad)?, j)?.crop(g.lattice().shape())
}

/// Inverse of the positively restricted spectrum; component `j` holds `H_j[g]`.
pub fn analytic_signal(g: &GridSignal) -> AnalyticGrid {
    hft_inverse(&positive_restrict(&hft_forward(g)))
}

/// Analytic signal on a lattice zero-padded `pad` times, cropped back.
pub fn analytic_signal_padded(g: &GridSignal, pad: usize) -> Result<AnalyticGrid> {
    if pad <= 1 {
        return Ok(analytic_signal(g));
    }
    analytic_signal(&g.zero_pad(pad)?).crop(g.lattice().shape())
}

/// Integration box for [`fj_quadrature`]: trapezoidal nodes on `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct QuadratureBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct QuadratureOptions {
    /// Accepted change between successive refinements.
    pub tol: f64,
    /// Number of frequency-step halvings before giving up.
    pub max_refinements: usize,
    /// Also compare against the result with halved spatial step.
    pub check_spatial: bool,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { tol: 1e-8, max_refinements: 8, check_spatial: true }
    }
}

fn trapezoid_nodes(lo: f64, hi: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = (hi - lo) / (n - 1) as f64;
    let x = (0..n).map(|k| lo + k as f64 * h).collect();
    let w = (0..n).map(|k| if k == 0 || k == n - 1 { 0.5 * h } else { h }).collect();
    (x, w)
}

/// Trapezoidal `int_0^wmax cos(w u - s pi/2) dw` for each `u`, `m` panels.
fn kernel_table(us: &[f64], wmax: f64, m: usize, sine: bool) -> Vec<f64> {
    let dw = wmax / m as f64;
    us.iter()
        .map(|&u| {
            let mut acc = 0.0;
            for q in 0..=m {
                let w = q as f64 * dw;
                let v = if sine { (w * u).sin() } else { (w * u).cos() };
                acc += if q == 0 || q == m { 0.5 * v } else { v };
            }
            acc * dw
        })
        .collect()
}

struct Tensor {
    shape: Vec<usize>,
    values: Vec<f64>,
}

fn contract(t: &Tensor, vectors: &[Vec<f64>]) -> f64 {
    let mut vals = t.values.clone();
    let mut len = vals.len();
    for a in (0..t.shape.len()).rev() {
        let n = t.shape[a];
        let outer = len / n;
        let mut next = vec![0.0; outer];
        for (o, slot) in next.iter_mut().enumerate() {
            *slot = vals[o * n..(o + 1) * n].iter().zip(&vectors[a]).map(|(x, y)| x * y).sum();
        }
        vals = next;
        len = outer;
    }
    vals[0]
}

fn quadrature_at_resolution(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    j: Direction,
    points: &[Vec<f64>],
    bbox: &QuadratureBox,
    nodes: &[usize],
    opts: &QuadratureOptions,
) -> Result<Vec<f64>> {
    let d = j.dim();
    let grids: Vec<(Vec<f64>, Vec<f64>)> = (0..d).map(|a| trapezoid_nodes(bbox.lo[a], bbox.hi[a], nodes[a])).collect();
    let total: usize = nodes.iter().product();
    let mut values = vec![0.0; total];
    for_each_index(nodes, |flat, idx| {
        let x: Vec<f64> = idx.iter().enumerate().map(|(a, &k)| grids[a].0[k]).collect();
        let w: f64 = idx.iter().enumerate().map(|(a, &k)| grids[a].1[k]).product();
        values[flat] = f(&x) * w;
    });
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("sampler returned a non-finite value".into()));
    }
    let tensor = Tensor { shape: nodes.to_vec(), values };
    let wmax: Vec<f64> = (0..d).map(|a| PI / (grids[a].0[1] - grids[a].0[0])).collect();
    let norm = PI.powi(d as i32);
    let eval = |m_factor: usize| -> Vec<f64> {
        par_map(points, |x| {
            let vectors: Vec<Vec<f64>> = (0..d)
                .map(|a| {
                    let umax = (x[a] - bbox.lo[a]).abs().max((x[a] - bbox.hi[a]).abs());
                    let m = ((wmax[a] * umax / PI).ceil() as usize + 2) * 2 * m_factor;
                    let us: Vec<f64> = grids[a].0.iter().map(|xp| x[a] - xp).collect();
                    kernel_table(&us, wmax[a], m, j.contains(a))
                })
                .collect();
            contract(&tensor, &vectors) / norm
        })
    };
    let mut prev = eval(1);
    let mut factor = 1;
    for _ in 0..opts.max_refinements {
        factor *= 2;
        let next = eval(factor);
        let diff = prev.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prev = next;
        if diff <= opts.tol {
            return Ok(prev);
        }
    }
    Err(Error::NotConverged(format!("frequency quadrature did not settle within {} halvings", opts.max_refinements)))
}

/// Evaluates `f_j` at `points` by direct nested quadrature: trapezoidal
/// nodes over `bbox` in space and over `[0, pi/dx]` per frequency axis.
///
/// The frequency step is halved until results settle to `opts.tol`. With
/// `check_spatial`, the spatial step is halved once as well and a change
/// larger than `opts.tol` is reported as too coarse a resolution.
pub fn fj_quadrature(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    j: Direction,
    points: &[Vec<f64>],
    bbox: &QuadratureBox,
    opts: &QuadratureOptions,
) -> Result<Vec<f64>> {
    let d = j.dim();
    if bbox.lo.len() != d || bbox.hi.len() != d || bbox.nodes.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: bbox.lo.len() });
    }
    if bbox.nodes.iter().any(|&n| n < 3) || bbox.lo.iter().zip(&bbox.hi).any(|(a, b)| !(b > a)) {
        return Err(Error::InvalidParameter("box needs hi > lo and at least 3 nodes per axis".into()));
    }
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: p.len() });
    }
    let coarse = quadrature_at_resolution(f, j, points, bbox, &bbox.nodes, opts)?;
    if opts.check_spatial {
        let fine_nodes: Vec<usize> = bbox.nodes.iter().map(|n| 2 * n - 1).collect();
        let fine = quadrature_at_resolution(f, j, points, bbox, &fine_nodes, opts)?;
        let diff = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if diff > opts.tol {
            return Err(Error::NotConverged(format!(
                "halving the spatial step changed the result by {diff:.3e}; refine the box or resolution"
            )));
        }
        return Ok(fine);
    }
    Ok(coarse)
}
