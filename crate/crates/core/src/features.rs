//! Amplitude, phases and instantaneous frequencies of analytic signals.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::algebra::{Direction, ScheffersElement};
use crate::error::{Error, Result};
use crate::grid::{AnalyticGrid, GridSignal};
use crate::par::{apply_along_axis, LineLayout};
use crate::transform::partial_hilbert;

/// Relative amplitude floor below which a phase is undefined.
pub const PHASE_EPS: f64 = 1e-9;

/// Default relative magnitude that counts as "inside the band".
pub const BAND_EPS: f64 = 1e-10;

/// A real grid with a mask; `masked[i]` marks samples without a value.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedGrid {
    pub values: GridSignal,
    pub masked: Vec<bool>,
}

impl MaskedGrid {
    pub fn masked_count(&self) -> usize {
        self.masked.iter().filter(|&&m| m).count()
    }
}

/// Root-sum-square of all components.
pub fn amplitude(a: &AnalyticGrid) -> GridSignal {
    let n = a.lattice().len();
    let data = (0..n).map(|i| a.components().iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt()).collect();
    GridSignal::new(a.lattice().clone(), data).expect("amplitude of finite components is finite")
}

/// `atan2(f_j, f)` in `(-pi, pi]`, masked where `|(f, f_j)|` is at most
/// `PHASE_EPS` times the largest amplitude.
pub fn phase(a: &AnalyticGrid, j: Direction) -> Result<MaskedGrid> {
    if j.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: j.dim() });
    }
    if j.bits() == 0 {
        return Err(Error::InvalidDirection("phase needs a nonzero direction".into()));
    }
    let amp = amplitude(a);
    let floor = PHASE_EPS * amp.data().iter().fold(0.0, |m: f64, &v| m.max(v));
    let (f, fj) = (a.component(0), a.component(j.bits()));
    let mut masked = vec![false; f.len()];
    let values = f
        .iter()
        .zip(fj)
        .zip(masked.iter_mut())
        .map(|((&x, &y), m)| {
            if x.hypot(y) <= floor {
                *m = true;
                return 0.0;
            }
            let p = y.atan2(x);
            if p == -PI {
                PI
            } else {
                p
            }
        })
        .collect();
    Ok(MaskedGrid { values: GridSignal::new(a.lattice().clone(), values)?, masked })
}

fn unwrap_line(p: &mut [f64], masked: &[bool]) {
    let mut prev: Option<f64> = None;
    for (v, &m) in p.iter_mut().zip(masked) {
        if m {
            prev = None;
            continue;
        }
        if let Some(q) = prev {
            *v -= 2.0 * PI * ((*v - q) / (2.0 * PI)).round();
        }
        prev = Some(*v);
    }
}

fn diff_line(p: &[f64], masked: &[bool], h: f64, out: &mut [f64], out_mask: &mut [bool]) {
    let n = p.len();
    for k in 0..n {
        let left = k > 0 && !masked[k - 1];
        let right = k + 1 < n && !masked[k + 1];
        out_mask[k] = masked[k] || !(left || right);
        out[k] = if out_mask[k] {
            0.0
        } else if left && right {
            (p[k + 1] - p[k - 1]) / (2.0 * h)
        } else if right {
            (p[k + 1] - p[k]) / h
        } else {
            (p[k] - p[k - 1]) / h
        };
    }
}

/// Derivative of a phase along every axis in `j`, in ascending axis order.
///
/// The first axis unwraps the phase along its lines before differencing;
/// later axes act on the already continuous derivative. Central differences
/// are used inside, one-sided ones at the ends and next to masked samples.
pub fn inst_frequency(p: &MaskedGrid, j: Direction) -> Result<MaskedGrid> {
    let lat = p.values.lattice().clone();
    if j.dim() != lat.dim() {
        return Err(Error::DimensionMismatch { expected: lat.dim(), found: j.dim() });
    }
    for a in j.axes() {
        if lat.shape()[a] < 3 {
            return Err(Error::TooFewSamples { axis: a, len: lat.shape()[a] });
        }
    }
    let mut values = p.values.data().to_vec();
    let mut masked = p.masked.clone();
    for (step, axis) in j.axes().enumerate() {
        let layout = LineLayout::new(lat.shape(), axis);
        let h = lat.spacing()[axis];
        let mut out = vec![0.0; values.len()];
        let mut out_mask = vec![false; values.len()];
        let mut line = vec![0.0; layout.n];
        let mut lmask = vec![false; layout.n];
        let mut dl = vec![0.0; layout.n];
        let mut dm = vec![false; layout.n];
        for l in 0..layout.count {
            let base = layout.base(l);
            for k in 0..layout.n {
                line[k] = values[base + k * layout.stride];
                lmask[k] = masked[base + k * layout.stride];
            }
            if step == 0 {
                unwrap_line(&mut line, &lmask);
            }
            diff_line(&line, &lmask, h, &mut dl, &mut dm);
            for k in 0..layout.n {
                out[base + k * layout.stride] = dl[k];
                out_mask[base + k * layout.stride] = dm[k];
            }
        }
        values = out;
        masked = out_mask;
    }
    Ok(MaskedGrid { values: GridSignal::new(lat, values)?, masked })
}

/// `A * prod_l exp(e_l phi_l)` evaluated pointwise.
pub fn narrowband_construct(amp: &GridSignal, phases: &[GridSignal]) -> Result<AnalyticGrid> {
    let d = amp.dim();
    if phases.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: phases.len() });
    }
    if phases.iter().any(|p| p.lattice().shape() != amp.lattice().shape()) {
        return Err(Error::ShapeMismatch("phase grids must share the amplitude lattice".into()));
    }
    let n = amp.lattice().len();
    let mut comps = vec![vec![0.0; n]; 1 << d];
    for i in 0..n {
        let mut z = ScheffersElement::scalar(d, amp.data()[i])?;
        for (axis, ph) in phases.iter().enumerate() {
            let t = ph.data()[i];
            z = z.mul_plane(axis, t.cos(), t.sin());
        }
        for (b, c) in z.coeffs().iter().enumerate() {
            comps[b][i] = *c;
        }
    }
    AnalyticGrid::new(amp.lattice().clone(), comps)
}

/// Outcome of comparing `H_j[f g]` with `f H_j[g]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BedrosianReport {
    pub max_abs: f64,
    /// `max |lhs - rhs| / max |rhs|`.
    pub max_rel: f64,
    /// `||lhs - rhs||_2 / ||rhs||_2`.
    pub l2_rel: f64,
    /// Per axis of `j`: (axis, highest frequency where `f` is non-negligible).
    pub band_low: Vec<(usize, f64)>,
    /// Per axis of `j`: (axis, lowest frequency where `g` is non-negligible).
    pub band_high: Vec<(usize, f64)>,
    /// Whether every measured band of `f` lies strictly below that of `g`.
    pub hypotheses_hold: bool,
}

impl BedrosianReport {
    pub fn verdict(&self) -> &'static str {
        if self.hypotheses_hold {
            "hypotheses hold"
        } else {
            "hypotheses violated"
        }
    }
}

/// Largest bin magnitude per `|w|` along `axis`, aggregated over all lines.
fn axis_band_profile(g: &GridSignal, axis: usize) -> Vec<(f64, f64)> {
    let lat = g.lattice();
    let n = lat.shape()[axis];
    let fft = FftPlanner::new().plan_fft_forward(n);
    let mut re = g.data().to_vec();
    let mut im = vec![0.0; re.len()];
    apply_along_axis(&mut re, &mut im, lat.shape(), axis, |line, scratch| {
        let need = fft.get_inplace_scratch_len();
        scratch.resize(need.max(scratch.len()), Complex64::new(0.0, 0.0));
        fft.process_with_scratch(line, &mut scratch[..need]);
    });
    let layout = LineLayout::new(lat.shape(), axis);
    let mut mags = vec![0.0f64; n];
    for l in 0..layout.count {
        let base = layout.base(l);
        for (k, m) in mags.iter_mut().enumerate() {
            let idx = base + k * layout.stride;
            *m = m.max(re[idx].hypot(im[idx]));
        }
    }
    (0..n).map(|k| (lat.frequency(axis, k).abs(), mags[k])).collect()
}

fn band_edges(profile: &[(f64, f64)], eps: f64) -> (f64, f64) {
    let peak = profile.iter().fold(0.0f64, |m, p| m.max(p.1));
    let live: Vec<f64> = profile.iter().filter(|p| p.1 > eps * peak).map(|p| p.0).collect();
    let hi = live.iter().copied().fold(0.0, f64::max);
    let lo = live.iter().copied().fold(f64::INFINITY, f64::min);
    (lo, hi)
}

/// Compares both sides of the product rule and measures the bands of the
/// inputs with relative threshold `eps`.
pub fn bedrosian_check(f_low: &GridSignal, g_high: &GridSignal, j: Direction, eps: f64) -> Result<BedrosianReport> {
    if f_low.lattice() != g_high.lattice() {
        return Err(Error::ShapeMismatch("inputs must share a lattice".into()));
    }
    let prod: Vec<f64> = f_low.data().iter().zip(g_high.data()).map(|(a, b)| a * b).collect();
    let prod = GridSignal::new(f_low.lattice().clone(), prod)?;
    let lhs = partial_hilbert(&prod, j)?;
    let hg = partial_hilbert(g_high, j)?;
    let rhs: Vec<f64> = f_low.data().iter().zip(hg.data()).map(|(a, b)| a * b).collect();
    let mut max_abs = 0.0f64;
    let mut max_rhs = 0.0f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (l, r) in lhs.data().iter().zip(&rhs) {
        let e = l - r;
        max_abs = max_abs.max(e.abs());
        max_rhs = max_rhs.max(r.abs());
        num += e * e;
        den += r * r;
    }
    let max_rel = if max_rhs > 0.0 { max_abs / max_rhs } else { max_abs };
    let l2_rel = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
    let mut band_low = Vec::new();
    let mut band_high = Vec::new();
    let mut hold = true;
    for axis in j.axes() {
        let (_, f_hi) = band_edges(&axis_band_profile(f_low, axis), eps);
        let (g_lo, _) = band_edges(&axis_band_profile(g_high, axis), eps);
        hold &= f_hi < g_lo;
        band_low.push((axis, f_hi));
        band_high.push((axis, g_lo));
    }
    Ok(BedrosianReport { max_abs, max_rel, l2_rel, band_low, band_high, hypotheses_hold: hold })
}
