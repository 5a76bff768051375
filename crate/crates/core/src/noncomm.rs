//! Orderings of exponential factors in a noncommutative generator algebra.
//!
//! For a real signal, the forward transform's product of exponentials
//! `exp(-e_a w_a x_a)` expands into terms `(-1)^{|K|} e_K alpha^K`; the inverse
//! multiplies the spectrum by `exp(e_b w_b x_b)` on a chosen side. Each pair
//! of a forward blade `K` and an inverse blade `T` yields a bracket
//! `<alpha^K, alpha_T>_+` in component `K xor T` with a sign fixed by the
//! ordering. An ordering reproduces every component up to a global sign
//! exactly when, per component, all brackets carry the sign of
//! [`shift_sign`] times one common factor. Only components of degree at most
//! two are checked.

use std::fmt;

use itertools::Itertools;

use crate::algebra::{blade_name, shift_sign, AlgebraSpec, Direction};
use crate::error::{Error, Result};
use crate::grid::{AnalyticGrid, BinKind, GridSignal};
use crate::par::{par_map, par_map_range};
use crate::transform::restrict_weight;

/// One factor of an ordered product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    /// The signal (forward) or the spectrum (inverse).
    Func,
    /// The exponential on the given zero-based axis.
    Exp(usize),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Func => f.write_str("F"),
            Factor::Exp(a) => write!(f, "E{}", a + 1),
        }
    }
}

/// Which orderings to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSpace {
    /// Each exponential left or right of the function factor, ascending on each side.
    Placement,
    /// Every permutation of the factors.
    Permutation,
}

/// Forward and inverse factor orders.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderingCandidate {
    pub forward: Vec<Factor>,
    pub inverse: Vec<Factor>,
}

fn join_factors(v: &[Factor]) -> String {
    v.iter().map(|f| f.to_string()).join(".")
}

impl OrderingCandidate {
    /// Stable text encoding, for example `fwd=E1.F.E2 inv=E1.F.E2`.
    pub fn encoding(&self) -> String {
        format!("fwd={} inv={}", join_factors(&self.forward), join_factors(&self.inverse))
    }

    /// Exponentials left of the function factor in the given side placement.
    pub fn placement(dim: usize, left_forward: u32, left_inverse: u32) -> Self {
        let build = |left: u32| {
            let mut v: Vec<Factor> = (0..dim).filter(|a| left & (1 << a) != 0).map(Factor::Exp).collect();
            v.push(Factor::Func);
            v.extend((0..dim).filter(|a| left & (1 << a) == 0).map(Factor::Exp));
            v
        };
        OrderingCandidate { forward: build(left_forward), inverse: build(left_inverse) }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        for seq in [&self.forward, &self.inverse] {
            let mut seen = vec![false; dim];
            let mut funcs = 0;
            for f in seq.iter() {
                match *f {
                    Factor::Func => funcs += 1,
                    Factor::Exp(a) if a < dim && !seen[a] => seen[a] = true,
                    Factor::Exp(_) => return Err(Error::InvalidParameter("repeated or out-of-range axis".into())),
                }
            }
            if funcs != 1 || seen.iter().any(|s| !s) {
                return Err(Error::InvalidParameter("each order needs every axis once and one function factor".into()));
            }
        }
        Ok(())
    }
}

/// Sign of bracket `<alpha^K, alpha_T>_+` in component `blade = K xor T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignEntry {
    pub blade: u32,
    /// `K`, the forward projection.
    pub forward: u32,
    /// `T`, the inverse harmonic.
    pub inverse: u32,
    /// Sign produced by the ordering; zero when the product vanishes.
    pub sign: i8,
    /// Sign required by the commutative reconstruction.
    pub required: i8,
}

impl SignEntry {
    fn ratio(&self) -> i8 {
        self.sign * self.required
    }

    fn describe(&self, dim: usize) -> String {
        let dir = |b: u32| Direction::new(dim, b).map(|d| d.to_string()).unwrap_or_default();
        format!(
            "<alpha^{},alpha_{}>:sign={:+},required={:+}",
            dir(self.forward),
            dir(self.inverse),
            self.sign,
            self.required
        )
    }
}

/// All degree-at-most-two bracket signs of one candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTable {
    pub dim: usize,
    pub entries: Vec<SignEntry>,
}

impl SignTable {
    pub fn entry(&self, forward: u32, inverse: u32) -> Option<&SignEntry> {
        self.entries.iter().find(|e| e.forward == forward && e.inverse == inverse)
    }

    /// A component whose brackets disagree on the common factor, taking the
    /// highest degree first.
    pub fn first_mismatch(&self) -> Option<Mismatch> {
        let mut groups: Vec<&[SignEntry]> = self.entries.chunk_by(|a, b| a.blade == b.blade).collect();
        groups.sort_by_key(|g| (std::cmp::Reverse(g[0].blade.count_ones()), g[0].blade));
        groups.into_iter().find_map(|group| {
            let first = group[0];
            if first.ratio() == 0 {
                return Some(Mismatch { blade: first.blade, first, second: first });
            }
            group.iter().find(|e| e.ratio() != first.ratio()).map(|other| Mismatch { blade: first.blade, first, second: *other })
        })
    }
}

/// Two brackets of one component that disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub blade: u32,
    pub first: SignEntry,
    pub second: SignEntry,
}

/// Computes the sign table of a candidate under an algebra.
pub fn sign_table(spec: &AlgebraSpec, cand: &OrderingCandidate) -> Result<SignTable> {
    let d = spec.dim();
    cand.validate(d)?;
    let fwd_axes: Vec<usize> =
        cand.forward.iter().filter_map(|f| if let Factor::Exp(a) = f { Some(*a) } else { None }).collect();
    let n = 1u32 << d;
    let mut blades: Vec<u32> = (0..n).filter(|b| b.count_ones() <= 2).collect();
    blades.sort_by_key(|b| (b.count_ones(), *b));
    let mut entries = Vec::new();
    for &blade in &blades {
        for t in 0..n {
            let k = t ^ blade;
            let fwd: Vec<usize> = fwd_axes.iter().copied().filter(|a| k & (1 << a) != 0).collect();
            let (s_fwd, _) = spec.normalize(&fwd)?;
            let mut seq = Vec::new();
            for f in &cand.inverse {
                match *f {
                    Factor::Exp(a) if t & (1 << a) != 0 => seq.push(a),
                    Factor::Exp(_) => {}
                    Factor::Func => seq.extend((0..d).filter(|a| k & (1 << a) != 0)),
                }
            }
            let (s_inv, out) = spec.normalize(&seq)?;
            debug_assert!(s_inv == 0 || out == blade);
            let parity = if k.count_ones() % 2 == 0 { 1 } else { -1 };
            entries.push(SignEntry {
                blade,
                forward: k,
                inverse: t,
                sign: parity * s_fwd * s_inv,
                required: shift_sign(t, blade) as i8,
            });
        }
    }
    Ok(SignTable { dim: d, entries })
}

fn enumerate(dim: usize, space: SearchSpace) -> Vec<OrderingCandidate> {
    match space {
        SearchSpace::Placement => {
            let n = 1u32 << dim;
            (0..n).flat_map(|lf| (0..n).map(move |li| OrderingCandidate::placement(dim, lf, li))).collect()
        }
        SearchSpace::Permutation => {
            let exps: Vec<Factor> = (0..dim).map(Factor::Exp).collect();
            let mut all = exps.clone();
            all.push(Factor::Func);
            let forwards: Vec<Vec<Factor>> = exps
                .iter()
                .copied()
                .permutations(dim)
                .map(|mut p| {
                    p.insert(0, Factor::Func);
                    p
                })
                .collect();
            let inverses: Vec<Vec<Factor>> = all.iter().copied().permutations(dim + 1).collect();
            forwards
                .iter()
                .flat_map(|f| inverses.iter().map(move |i| OrderingCandidate { forward: f.clone(), inverse: i.clone() }))
                .collect()
        }
    }
}

/// Verdict for one candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateResult {
    pub candidate: OrderingCandidate,
    pub table: SignTable,
    pub mismatch: Option<Mismatch>,
}

impl CandidateResult {
    pub fn is_consistent(&self) -> bool {
        self.mismatch.is_none()
    }

    /// One report line.
    pub fn line(&self) -> String {
        let enc = self.candidate.encoding();
        match &self.mismatch {
            None => format!("candidate {enc} consistent"),
            Some(m) => format!(
                "candidate {enc} inconsistent blade={} {} {}",
                blade_name(m.blade),
                m.first.describe(self.table.dim),
                m.second.describe(self.table.dim)
            ),
        }
    }
}

/// Results of an ordering search, sorted by candidate encoding.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub dim: usize,
    pub spec: AlgebraSpec,
    pub space: SearchSpace,
    pub results: Vec<CandidateResult>,
}

impl SearchReport {
    pub fn consistent(&self) -> impl Iterator<Item = &CandidateResult> {
        self.results.iter().filter(|r| r.is_consistent())
    }

    pub fn any_consistent(&self) -> bool {
        self.consistent().next().is_some()
    }

    pub fn find(&self, cand: &OrderingCandidate) -> Option<&CandidateResult> {
        self.results.iter().find(|r| &r.candidate == cand)
    }

    pub fn algebra_name(&self) -> &'static str {
        let all_neg = self.spec.square_sign.iter().all(|&s| s == -1);
        match (all_neg, self.spec.swap_sign) {
            (true, 1) => "commutative",
            (true, -1) => "clifford",
            _ => "custom",
        }
    }

    /// Line-oriented report: one line per candidate and a summary line.
    pub fn render(&self) -> String {
        let mut out: Vec<String> = self.results.iter().map(|r| r.line()).collect();
        let n_ok = self.consistent().count();
        out.push(format!(
            "summary dim={} algebra={} space={} candidates={} consistent={}",
            self.dim,
            self.algebra_name(),
            match self.space {
                SearchSpace::Placement => "placement",
                SearchSpace::Permutation => "permutation",
            },
            self.results.len(),
            n_ok
        ));
        if n_ok == 0 {
            out.push("no consistent ordering".to_string());
        }
        out.join("\n")
    }
}

/// Enumerates candidates and checks each one's sign table.
pub fn ordering_search(spec: &AlgebraSpec, space: SearchSpace) -> Result<SearchReport> {
    let dim = spec.dim();
    if !(2..=4).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let cands = enumerate(dim, space);
    let mut results = par_map(&cands, |c| {
        sign_table(spec, c).map(|table| {
            let mismatch = table.first_mismatch();
            CandidateResult { candidate: c.clone(), table, mismatch }
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    results.sort_by_key(|r| r.candidate.encoding());
    Ok(SearchReport { dim, spec: spec.clone(), space, results })
}

/// Hamilton quaternion `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl std::ops::Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Self) -> Self {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl std::ops::Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Self) -> Self {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

fn twiddles(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|m| {
            let t = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
            (t.cos(), t.sin())
        })
        .collect()
}

/// Two-sided quaternion analytic signal of a real 2-D grid:
/// `exp(-i w1 x1) f exp(-j w2 x2)` forward, positive restriction, and
/// `exp(i w1 x1) F exp(j w2 x2)` back. Components `(1, i, j, k)` are
/// returned as blades `(e0, e1, e2, e1e2)`.
pub fn quaternion_analytic_2d(g: &GridSignal) -> Result<AnalyticGrid> {
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: g.dim() });
    }
    let lat = g.lattice();
    let (n1, n2) = (lat.shape()[0], lat.shape()[1]);
    let (h1, h2) = (lat.spacing()[0], lat.spacing()[1]);
    let (t1, t2) = (twiddles(n1), twiddles(n2));
    let unit_i = |c: f64, s: f64| Quaternion::new(c, s, 0.0, 0.0);
    let unit_j = |c: f64, s: f64| Quaternion::new(c, 0.0, s, 0.0);
    let q: Vec<Quaternion> = g.data().iter().map(|&v| Quaternion::new(v, 0.0, 0.0, 0.0)).collect();

    // right pass along axis 2, sign -1 forward and +1 inverse
    let right = |src: &[Quaternion], sign: f64, scale: f64| -> Vec<Quaternion> {
        par_map_range(n1, |r| {
            (0..n2)
                .map(|k| {
                    let mut acc = Quaternion::default();
                    for m in 0..n2 {
                        let (c, s) = t2[(k * m) % n2];
                        acc = acc + src[r * n2 + m] * unit_j(c, sign * s);
                    }
                    acc.scale(scale)
                })
                .collect::<Vec<_>>()
        })
        .concat()
    };
    // left pass along axis 1
    let left = |src: &[Quaternion], sign: f64, scale: f64| -> Vec<Quaternion> {
        let cols = par_map_range(n2, |col| {
            (0..n1)
                .map(|k| {
                    let mut acc = Quaternion::default();
                    for m in 0..n1 {
                        let (c, s) = t1[(k * m) % n1];
                        acc = acc + unit_i(c, sign * s) * src[m * n2 + col];
                    }
                    acc.scale(scale)
                })
                .collect::<Vec<_>>()
        });
        let mut out = vec![Quaternion::default(); n1 * n2];
        for (col, v) in cols.into_iter().enumerate() {
            for (r, x) in v.into_iter().enumerate() {
                out[r * n2 + col] = x;
            }
        }
        out
    };

    let mut spec = left(&right(&q, -1.0, h2), -1.0, h1);
    for k1 in 0..n1 {
        let w1 = restrict_weight(BinKind::of(k1, n1));
        for k2 in 0..n2 {
            let w = w1 * restrict_weight(BinKind::of(k2, n2));
            spec[k1 * n2 + k2] = spec[k1 * n2 + k2].scale(w);
        }
    }
    let out = left(&right(&spec, 1.0, 1.0 / (n2 as f64 * h2)), 1.0, 1.0 / (n1 as f64 * h1));
    let comps = vec![
        out.iter().map(|q| q.w).collect(),
        out.iter().map(|q| q.x).collect(),
        out.iter().map(|q| q.y).collect(),
        out.iter().map(|q| q.z).collect(),
    ];
    AnalyticGrid::new(lat.clone(), comps)
}
