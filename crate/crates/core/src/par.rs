//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers run on the rayon pool; without it
//! they run in order on the calling thread. Every work item is computed
//! independently and results are assembled in index order, so output is
//! bit-identical for any thread count.

use num_complex::Complex64;

/// Maps `f` over `items`, preserving order.
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Maps `f` over `0..n`, preserving order.
pub fn par_map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Runs `f` with at most `threads` worker threads (0 means the default pool).
///
/// In sequential builds this simply calls `f`.
pub fn with_threads<R, F>(threads: usize, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        if threads == 0 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

/// True when the crate was built with the rayon backend.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Geometry of the 1-D lines of a row-major array along one axis.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LineLayout {
    pub n: usize,
    pub stride: usize,
    pub count: usize,
}

impl LineLayout {
    pub fn new(shape: &[usize], axis: usize) -> Self {
        let n = shape[axis];
        let stride: usize = shape[axis + 1..].iter().product();
        let total: usize = shape.iter().product();
        LineLayout { n, stride, count: if n == 0 { 0 } else { total / n } }
    }

    #[inline]
    pub fn base(&self, line: usize) -> usize {
        (line / self.stride) * self.n * self.stride + line % self.stride
    }
}

const LINES_PER_TASK: usize = 32;

/// Applies `op` to every line of `axis`, treating `(re, im)` as one complex
/// array. `op` receives the line and a scratch buffer it may use freely.
pub(crate) fn apply_along_axis<F>(re: &mut [f64], im: &mut [f64], shape: &[usize], axis: usize, op: F)
where
    F: Fn(&mut [Complex64], &mut Vec<Complex64>) + Sync + Send,
{
    let layout = LineLayout::new(shape, axis);
    if layout.count == 0 {
        return;
    }
    let tasks = layout.count.div_ceil(LINES_PER_TASK);
    let (re_ro, im_ro) = (&*re, &*im);
    let chunks: Vec<Vec<Complex64>> = par_map_range(tasks, |t| {
        let lo = t * LINES_PER_TASK;
        let hi = (lo + LINES_PER_TASK).min(layout.count);
        let mut out = Vec::with_capacity((hi - lo) * layout.n);
        let mut scratch = Vec::new();
        let mut buf = vec![Complex64::new(0.0, 0.0); layout.n];
        for line in lo..hi {
            let base = layout.base(line);
            for (k, slot) in buf.iter_mut().enumerate() {
                let idx = base + k * layout.stride;
                *slot = Complex64::new(re_ro[idx], im_ro[idx]);
            }
            op(&mut buf, &mut scratch);
            out.extend_from_slice(&buf);
        }
        out
    });
    for (t, chunk) in chunks.iter().enumerate() {
        for (l, line) in chunk.chunks(layout.n).enumerate() {
            let base = layout.base(t * LINES_PER_TASK + l);
            for (k, v) in line.iter().enumerate() {
                let idx = base + k * layout.stride;
                re[idx] = v.re;
                im[idx] = v.im;
            }
        }
    }
}

/// Real-valued counterpart of [`apply_along_axis`]; `op` maps an input line
/// to an output line of the same length.
pub(crate) fn apply_along_axis_real<F>(data: &mut [f64], shape: &[usize], axis: usize, op: F)
where
    F: Fn(&[f64], &mut [f64]) + Sync + Send,
{
    let layout = LineLayout::new(shape, axis);
    if layout.count == 0 {
        return;
    }
    let tasks = layout.count.div_ceil(LINES_PER_TASK);
    let ro = &*data;
    let chunks: Vec<Vec<f64>> = par_map_range(tasks, |t| {
        let lo = t * LINES_PER_TASK;
        let hi = (lo + LINES_PER_TASK).min(layout.count);
        let mut out = vec![0.0; (hi - lo) * layout.n];
        let mut buf = vec![0.0; layout.n];
        for (l, line) in (lo..hi).enumerate() {
            let base = layout.base(line);
            for (k, slot) in buf.iter_mut().enumerate() {
                *slot = ro[base + k * layout.stride];
            }
            op(&buf, &mut out[l * layout.n..(l + 1) * layout.n]);
        }
        out
    });
    for (t, chunk) in chunks.iter().enumerate() {
        for (l, line) in chunk.chunks(layout.n).enumerate() {
            let base = layout.base(t * LINES_PER_TASK + l);
            for (k, v) in line.iter().enumerate() {
                data[base + k * layout.stride] = *v;
            }
        }
    }
}
