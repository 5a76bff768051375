//! Uniform lattices, sampled signals, and the HSAS1 binary format.

use std::fmt;
use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::algebra::{check_dim, ScheffersElement};
use crate::error::{Error, Result};

/// Shape, origin and spacing of a uniform lattice; axis 0 varies slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    shape: Vec<usize>,
    origin: Vec<f64>,
    spacing: Vec<f64>,
}

/// Frequency class of a DFT bin along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinKind {
    Dc,
    Positive,
    Negative,
    /// Bin `N/2` of an even-length axis.
    Nyquist,
}

impl BinKind {
    pub fn of(k: usize, n: usize) -> BinKind {
        if k == 0 {
            BinKind::Dc
        } else if 2 * k < n {
            BinKind::Positive
        } else if 2 * k == n {
            BinKind::Nyquist
        } else {
            BinKind::Negative
        }
    }
}

impl Lattice {
    pub fn new(shape: Vec<usize>, origin: Vec<f64>, spacing: Vec<f64>) -> Result<Self> {
        check_dim(shape.len())?;
        if origin.len() != shape.len() || spacing.len() != shape.len() {
            return Err(Error::InvalidLattice("shape, origin and spacing lengths differ".into()));
        }
        if shape.contains(&0) {
            return Err(Error::InvalidLattice("every axis needs at least one sample".into()));
        }
        if spacing.iter().any(|&h| !(h > 0.0) || !h.is_finite()) {
            return Err(Error::InvalidLattice("spacing must be positive and finite".into()));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidLattice("origin must be finite".into()));
        }
        Ok(Lattice { shape, origin, spacing })
    }

    /// Lattice with `n` samples per axis covering `[lo, hi)` periodically.
    pub fn periodic(shape: Vec<usize>, lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != shape.len() || hi.len() != shape.len() {
            return Err(Error::InvalidLattice("bounds do not match the shape".into()));
        }
        let spacing = shape.iter().zip(lo.iter().zip(hi)).map(|(&n, (a, b))| (b - a) / n as f64).collect();
        Lattice::new(shape, lo.to_vec(), spacing)
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dim()];
        for a in (0..self.dim().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.shape[a + 1];
        }
        s
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.shape[a];
            flat /= self.shape[a];
        }
        idx
    }

    pub fn coordinate(&self, axis: usize, k: usize) -> f64 {
        self.origin[axis] + k as f64 * self.spacing[axis]
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat).iter().enumerate().map(|(a, &k)| self.coordinate(a, k)).collect()
    }

    /// Angular frequency of bin `k` on `axis`.
    pub fn frequency(&self, axis: usize, k: usize) -> f64 {
        let n = self.shape[axis];
        let h = self.spacing[axis];
        let w = 2.0 * std::f64::consts::PI * k as f64 / (n as f64 * h);
        if 2 * k < n {
            w
        } else {
            w - 2.0 * std::f64::consts::PI / h
        }
    }

    pub fn bin_kind(&self, axis: usize, k: usize) -> BinKind {
        BinKind::of(k, self.shape[axis])
    }

    /// Lattice with each axis extended `factor` times, same origin and spacing.
    pub fn padded(&self, factor: usize) -> Result<Lattice> {
        if factor == 0 {
            return Err(Error::InvalidParameter("padding factor must be at least 1".into()));
        }
        Lattice::new(self.shape.iter().map(|n| n * factor).collect(), self.origin.clone(), self.spacing.clone())
    }
}

/// Calls `f(flat, multi_index)` for every lattice point in row-major order.
pub(crate) fn for_each_index(shape: &[usize], mut f: impl FnMut(usize, &[usize])) {
    let total: usize = shape.iter().product();
    let mut idx = vec![0usize; shape.len()];
    for flat in 0..total {
        f(flat, &idx);
        for a in (0..shape.len()).rev() {
            idx[a] += 1;
            if idx[a] < shape[a] {
                break;
            }
            idx[a] = 0;
        }
    }
}

fn check_finite(data: &[f64]) -> Result<()> {
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("samples must be finite".into()));
    }
    Ok(())
}

/// A real signal sampled on a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSignal {
    lattice: Lattice,
    data: Vec<f64>,
}

impl GridSignal {
    pub fn new(lattice: Lattice, data: Vec<f64>) -> Result<Self> {
        if data.len() != lattice.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} samples for a lattice of {} points",
                data.len(),
                lattice.len()
            )));
        }
        check_finite(&data)?;
        Ok(GridSignal { lattice, data })
    }

    /// Samples `f` at every lattice point.
    pub fn from_fn(lattice: Lattice, f: impl Fn(&[f64]) -> f64 + Sync + Send) -> Result<Self> {
        let data = crate::par::par_map_range(lattice.len(), |i| f(&lattice.point(i)));
        GridSignal::new(lattice, data)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Zero-pads every axis to `factor` times its length.
    pub fn zero_pad(&self, factor: usize) -> Result<GridSignal> {
        let big = self.lattice.padded(factor)?;
        let mut data = vec![0.0; big.len()];
        for_each_index(self.lattice.shape(), |flat, idx| data[big.flat_index(idx)] = self.data[flat]);
        GridSignal::new(big, data)
    }

    /// Keeps the leading block of the given shape on every axis.
    pub fn crop(&self, shape: &[usize]) -> Result<GridSignal> {
        if shape.len() != self.dim() || shape.iter().zip(self.lattice.shape()).any(|(a, b)| a > b) {
            return Err(Error::ShapeMismatch("crop shape exceeds the grid".into()));
        }
        let small = Lattice::new(shape.to_vec(), self.lattice.origin.clone(), self.lattice.spacing.clone())?;
        let mut data = vec![0.0; small.len()];
        for_each_index(shape, |flat, idx| data[flat] = self.data[self.lattice.flat_index(idx)]);
        Ok(GridSignal { lattice: small, data })
    }
}

/// Validated set of `2^d` component arrays on a lattice.
fn check_components(lattice: &Lattice, components: &[Vec<f64>]) -> Result<()> {
    let m = 1usize << lattice.dim();
    if components.len() != m {
        return Err(Error::ShapeMismatch(format!("{} components, expected {m}", components.len())));
    }
    for c in components {
        if c.len() != lattice.len() {
            return Err(Error::ShapeMismatch(format!(
                "component of length {} for a lattice of {} points",
                c.len(),
                lattice.len()
            )));
        }
        check_finite(c)?;
    }
    Ok(())
}

macro_rules! blade_field {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name {
            lattice: Lattice,
            components: Vec<Vec<f64>>,
        }

        impl $name {
            pub fn new(lattice: Lattice, components: Vec<Vec<f64>>) -> Result<Self> {
                check_components(&lattice, &components)?;
                Ok($name { lattice, components })
            }

            pub(crate) fn from_parts(lattice: Lattice, components: Vec<Vec<f64>>) -> Self {
                debug_assert!(check_components(&lattice, &components).is_ok());
                $name { lattice, components }
            }

            pub fn lattice(&self) -> &Lattice {
                &self.lattice
            }

            pub fn dim(&self) -> usize {
                self.lattice.dim()
            }

            /// Component arrays in ascending blade order.
            pub fn components(&self) -> &[Vec<f64>] {
                &self.components
            }

            pub fn component(&self, blade: u32) -> &[f64] {
                &self.components[blade as usize]
            }

            pub fn into_components(self) -> Vec<Vec<f64>> {
                self.components
            }

            /// The algebra element stored at a flat lattice index.
            pub fn element(&self, flat: usize) -> ScheffersElement {
                ScheffersElement::new(self.dim(), self.components.iter().map(|c| c[flat]).collect())
                    .expect("component count matches dimension")
            }
        }
    };
}

blade_field!(
    /// Hypercomplex spectrum on the bins of its source lattice.
    HyperSpectrum
);
blade_field!(
    /// Hypercomplex signal with one real array per blade.
    AnalyticGrid
);

impl AnalyticGrid {
    /// Keeps the leading block of the given shape on every axis.
    pub fn crop(&self, shape: &[usize]) -> Result<AnalyticGrid> {
        if shape.len() != self.dim() || shape.iter().zip(self.lattice.shape()).any(|(a, b)| a > b) {
            return Err(Error::ShapeMismatch("crop shape exceeds the grid".into()));
        }
        let small = Lattice::new(shape.to_vec(), self.lattice.origin.clone(), self.lattice.spacing.clone())?;
        let comps = self
            .components
            .iter()
            .map(|c| {
                let mut out = vec![0.0; small.len()];
                for_each_index(shape, |flat, idx| out[flat] = c[self.lattice.flat_index(idx)]);
                out
            })
            .collect();
        Ok(AnalyticGrid::from_parts(small, comps))
    }
}

/// Payload kind recorded in an HSAS1 header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Grid,
    Spectrum,
    Analytic,
}

impl fmt::Display for FileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileKind::Grid => "grid",
            FileKind::Spectrum => "spectrum",
            FileKind::Analytic => "analytic",
        })
    }
}

/// Contents of an HSAS1 file.
#[derive(Debug, Clone, PartialEq)]
pub enum GridFile {
    Grid(GridSignal),
    Spectrum(HyperSpectrum),
    Analytic(AnalyticGrid),
}

impl GridFile {
    pub fn kind(&self) -> FileKind {
        match self {
            GridFile::Grid(_) => FileKind::Grid,
            GridFile::Spectrum(_) => FileKind::Spectrum,
            GridFile::Analytic(_) => FileKind::Analytic,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        match self {
            GridFile::Grid(g) => g.lattice(),
            GridFile::Spectrum(s) => s.lattice(),
            GridFile::Analytic(a) => a.lattice(),
        }
    }
}

const MAGIC: &str = "HSAS1";

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Serializes to HSAS1 bytes.
pub fn encode(file: &GridFile) -> Vec<u8> {
    let lat = file.lattice();
    let arrays: Vec<&[f64]> = match file {
        GridFile::Grid(g) => vec![g.data()],
        GridFile::Spectrum(s) => s.components().iter().map(|c| c.as_slice()).collect(),
        GridFile::Analytic(a) => a.components().iter().map(|c| c.as_slice()).collect(),
    };
    let header = format!(
        "{MAGIC} kind={} dim={} shape={} origin={} spacing={} components={}\n",
        file.kind(),
        lat.dim(),
        join(lat.shape()),
        join(lat.origin()),
        join(lat.spacing()),
        arrays.len()
    );
    let mut out = Vec::with_capacity(header.len() + 8 * arrays.len() * lat.len());
    out.extend_from_slice(header.as_bytes());
    for a in arrays {
        for v in a {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

fn parse_list<T: std::str::FromStr>(key: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Error::HeaderParse(format!("bad value {t:?} for {key}"))))
        .collect()
}

/// Parses HSAS1 bytes.
pub fn decode(bytes: &[u8]) -> Result<GridFile> {
    if !bytes.starts_with(MAGIC.as_bytes()) {
        return Err(Error::MagicMismatch);
    }
    let nl = bytes.iter().position(|&b| b == b'\n').ok_or_else(|| Error::HeaderParse("missing newline".into()))?;
    let header = std::str::from_utf8(&bytes[..nl]).map_err(|_| Error::HeaderParse("header is not UTF-8".into()))?;
    let mut words = header.split_ascii_whitespace();
    if words.next() != Some(MAGIC) {
        return Err(Error::MagicMismatch);
    }
    let (mut kind, mut dim, mut shape, mut origin, mut spacing, mut comps) = (None, None, None, None, None, None);
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| Error::HeaderParse(format!("expected key=value, got {w:?}")))?;
        match k {
            "kind" => {
                kind = Some(match v {
                    "grid" => FileKind::Grid,
                    "spectrum" => FileKind::Spectrum,
                    "analytic" => FileKind::Analytic,
                    _ => return Err(Error::HeaderParse(format!("unknown kind {v:?}"))),
                })
            }
            "dim" => dim = Some(v.parse::<usize>().map_err(|_| Error::HeaderParse(format!("bad dim {v:?}")))?),
            "shape" => shape = Some(parse_list::<usize>(k, v)?),
            "origin" => origin = Some(parse_list::<f64>(k, v)?),
            "spacing" => spacing = Some(parse_list::<f64>(k, v)?),
            "components" => {
                comps = Some(v.parse::<usize>().map_err(|_| Error::HeaderParse(format!("bad components {v:?}")))?)
            }
            _ => return Err(Error::HeaderParse(format!("unknown key {k:?}"))),
        }
    }
    let missing = |k: &str| Error::HeaderParse(format!("missing {k}"));
    let kind = kind.ok_or_else(|| missing("kind"))?;
    let dim = dim.ok_or_else(|| missing("dim"))?;
    let shape = shape.ok_or_else(|| missing("shape"))?;
    let origin = origin.ok_or_else(|| missing("origin"))?;
    let spacing = spacing.ok_or_else(|| missing("spacing"))?;
    let comps = comps.ok_or_else(|| missing("components"))?;
    if shape.len() != dim || origin.len() != dim || spacing.len() != dim {
        return Err(Error::ShapeMismatch(format!("header lists do not have dim={dim} entries")));
    }
    let expected_comps = match kind {
        FileKind::Grid => 1,
        _ => {
            check_dim(dim)?;
            1usize << dim
        }
    };
    if comps != expected_comps {
        return Err(Error::ShapeMismatch(format!("kind={kind} with dim={dim} needs {expected_comps} components, header says {comps}")));
    }
    let lattice = Lattice::new(shape, origin, spacing).map_err(|e| Error::ShapeMismatch(e.to_string()))?;
    let payload = &bytes[nl + 1..];
    let expected = 8 * comps * lattice.len();
    if payload.len() < expected {
        return Err(Error::Truncated { expected, found: payload.len() });
    }
    if payload.len() > expected {
        return Err(Error::ShapeMismatch(format!("{} trailing bytes after payload", payload.len() - expected)));
    }
    let values: Vec<f64> =
        payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8"))).collect();
    let mut arrays: Vec<Vec<f64>> = values.chunks(lattice.len()).map(|c| c.to_vec()).collect();
    Ok(match kind {
        FileKind::Grid => GridFile::Grid(GridSignal::new(lattice, arrays.remove(0))?),
        FileKind::Spectrum => GridFile::Spectrum(HyperSpectrum::new(lattice, arrays)?),
        FileKind::Analytic => GridFile::Analytic(AnalyticGrid::new(lattice, arrays)?),
    })
}

pub fn grid_write(path: &Path, file: &GridFile) -> Result<()> {
    fs::write(path, encode(file))?;
    Ok(())
}

pub fn grid_read(path: &Path) -> Result<GridFile> {
    decode(&fs::read(path)?)
}

/// Writes a real grid as `i1,...,id,value` lines (d <= 2 only).
pub fn write_csv(out: &mut impl Write, grid: &GridSignal) -> Result<()> {
    if grid.dim() > 2 {
        return Err(Error::Csv(format!("csv supports d <= 2, got d = {}", grid.dim())));
    }
    let mut res = Ok(());
    for_each_index(grid.lattice().shape(), |flat, idx| {
        if res.is_ok() {
            res = writeln!(out, "{},{}", join(idx), grid.data()[flat]);
        }
    });
    res?;
    Ok(())
}

/// Reads `i1,...,id,value` lines into a grid with the given origin and spacing.
///
/// The shape is one past the largest index on each axis; every index must
/// appear exactly once.
pub fn read_csv(input: impl BufRead, dim: usize, origin: Vec<f64>, spacing: Vec<f64>) -> Result<GridSignal> {
    if dim == 0 || dim > 2 {
        return Err(Error::Csv(format!("csv supports 1 <= d <= 2, got d = {dim}")));
    }
    let mut rows = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != dim + 1 {
            return Err(Error::Csv(format!("line {}: expected {} fields", n + 1, dim + 1)));
        }
        let idx = fields[..dim]
            .iter()
            .map(|f| f.parse::<usize>().map_err(|_| Error::Csv(format!("line {}: bad index {f:?}", n + 1))))
            .collect::<Result<Vec<_>>>()?;
        let v = fields[dim].parse::<f64>().map_err(|_| Error::Csv(format!("line {}: bad value", n + 1)))?;
        rows.push((idx, v));
    }
    if rows.is_empty() {
        return Err(Error::Csv("no samples".into()));
    }
    let shape: Vec<usize> = (0..dim).map(|a| rows.iter().map(|r| r.0[a]).max().unwrap_or(0) + 1).collect();
    let lattice = Lattice::new(shape, origin, spacing)?;
    let mut data = vec![f64::NAN; lattice.len()];
    for (idx, v) in rows {
        let f = lattice.flat_index(&idx);
        if !data[f].is_nan() {
            return Err(Error::Csv(format!("duplicate index {idx:?}")));
        }
        data[f] = v;
    }
    if data.iter().any(|v| v.is_nan()) {
        return Err(Error::Csv("missing samples".into()));
    }
    GridSignal::new(lattice, data)
}
