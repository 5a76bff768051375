//! Acceptance suite: one pass/fail line per criterion.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_complex::Complex64;
use rand::Rng;
use scheffers::algebra::{AlgebraSpec, Direction, ScheffersElement};
use scheffers::features::{amplitude, bedrosian_check, BAND_EPS};
use scheffers::grid::{BinKind, GridSignal, Lattice};
use scheffers::holo::{cauchy_polydisk, circle_hilbert, cr_residual, poisson_halfplane, HoloExtension, UpperPoint};
use scheffers::noncomm::{ordering_search, quaternion_analytic_2d, OrderingCandidate, SearchSpace};
use scheffers::oracle::{complex_erf, cube_signal, oracle_cube_component, ClosedForm, CUBE_PARAMS};
use scheffers::transform::{analytic_signal, hft_forward, hft_forward_field, partial_hilbert, positive_restrict};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_algebra_table() -> Outcome {
    const TABLE: [[(f64, u32); 3]; 3] =
        [[(-1.0, 0), (1.0, 3), (-1.0, 2)], [(1.0, 3), (-1.0, 0), (-1.0, 1)], [(-1.0, 2), (-1.0, 1), (1.0, 0)]];
    let mut exact = 0;
    for r in 1..4u32 {
        for c in 1..4u32 {
            let p = &ScheffersElement::basis(2, r).unwrap() * &ScheffersElement::basis(2, c).unwrap();
            let (s, b) = TABLE[r as usize - 1][c as usize - 1];
            let mut want = vec![0.0; 4];
            want[b as usize] = s;
            exact += usize::from(p.coeffs() == &want[..]);
        }
    }
    for b in 0..4u32 {
        let e = ScheffersElement::basis(2, b).unwrap();
        let one = ScheffersElement::scalar(2, 1.0).unwrap();
        exact += usize::from(&e * &one == e) + usize::from(&one * &e == e);
    }
    let mut r = rng(1);
    let mut rand_el = || ScheffersElement::new(4, (0..16).map(|_| r.gen_range(-1.0..1.0)).collect()).unwrap();
    let (mut comm, mut assoc) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let (a, b, c) = (rand_el(), rand_el(), rand_el());
        comm = comm.max((&(&a * &b) - &(&b * &a)).norm() / (a.norm() * b.norm()));
        assoc = assoc.max((&(&(&a * &b) * &c) - &(&a * &(&b * &c))).norm() / (a.norm() * b.norm() * c.norm()));
    }
    check(
        exact == 17 && comm <= 1e-12 && assoc <= 1e-12,
        format!("table {exact}/17 exact, commutativity {comm:.1e}, associativity {assoc:.1e}"),
    )
}

fn c2_spectral_identity() -> Outcome {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let g = band_limited(&mut r, &[256], 100, 12);
        let h = partial_hilbert(&g, Direction::ones(1).unwrap()).unwrap();
        let (sf, sh) = (hft_forward(&g), hft_forward(&h));
        let lat = g.lattice();
        let scale = (0..256).map(|k| sf.component(0)[k].hypot(sf.component(1)[k])).fold(0.0, f64::max);
        for k in 0..256 {
            let sign = match lat.bin_kind(0, k) {
                BinKind::Positive => 1.0,
                BinKind::Negative => -1.0,
                _ => continue,
            };
            let ff = Complex64::new(sf.component(0)[k], sf.component(1)[k]);
            let fh = Complex64::new(sh.component(0)[k], sh.component(1)[k]);
            worst = worst.max((fh - Complex64::new(0.0, -sign) * ff).norm() / scale);
        }
    }
    check(worst <= 1e-10, format!("max relative bin error {worst:.1e} over 20 signals"))
}

fn random_shapes() -> Vec<Vec<usize>> {
    vec![
        vec![32],
        vec![17],
        vec![2],
        vec![32, 32],
        vec![15, 8],
        vec![7, 32],
        vec![16, 16, 16],
        vec![9, 12, 5],
        vec![32, 4, 3],
    ]
}

fn c3_positive_support() -> Outcome {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for shape in random_shapes() {
        for _ in 0..3 {
            let g = random_grid(&mut r, &shape);
            let norm = |s: &scheffers::grid::HyperSpectrum| {
                s.components().iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
            };
            let fhat = norm(&hft_forward(&g));
            let s = hft_forward_field(&analytic_signal(&g));
            let lat = s.lattice();
            for flat in 0..lat.len() {
                let idx = lat.multi_index(flat);
                if idx.iter().enumerate().any(|(a, &k)| lat.bin_kind(a, k) == BinKind::Negative) {
                    let v = s.components().iter().map(|c| c[flat] * c[flat]).sum::<f64>().sqrt();
                    worst = worst.max(v / fhat);
                }
            }
        }
    }
    check(worst <= 1e-10, format!("max negative-bin magnitude {worst:.1e} x |f^|"))
}

fn c4_component_identity() -> Outcome {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for shape in random_shapes() {
        for _ in 0..3 {
            let g = random_grid(&mut r, &shape);
            let a = analytic_signal(&g);
            let gnorm = g.data().iter().map(|v| v * v).sum::<f64>().sqrt();
            for bits in 0..(1u32 << shape.len()) {
                let h = partial_hilbert(&g, Direction::new(shape.len(), bits).unwrap()).unwrap();
                let diff: f64 = a.component(bits).iter().zip(h.data()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
                let hnorm = h.data().iter().map(|v| v * v).sum::<f64>().sqrt();
                worst = worst.max(diff / hnorm.max(1e-3 * gnorm));
            }
        }
    }
    check(worst <= 1e-9, format!("max relative component error {worst:.1e}"))
}

fn c5_closed_forms() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for cf in ClosedForm::ALL {
        let l = cf.period();
        let lat = Lattice::periodic(vec![128, 128], &[0.0, 0.0], &[l, l]).unwrap();
        let g = GridSignal::from_fn(lat.clone(), |p| cf.signal(p[0], p[1])).unwrap();
        let amp = amplitude(&analytic_signal(&g));
        let mut err = 0.0f64;
        for i in 0..lat.len() {
            let p = lat.point(i);
            let e = if cf == ClosedForm::RotatedProduct {
                (amp.data()[i].powi(2) - cf.amplitude_sq(p[0], p[1])).abs()
            } else {
                (amp.data()[i] - cf.amplitude(p[0], p[1])).abs()
            };
            err = err.max(e);
        }
        ok &= err <= 1e-8;
        parts.push(format!("{} {err:.1e}", cf.name()));
    }
    check(ok, format!("max amplitude error: {}", parts.join(", ")))
}

fn c6_cube_oracle() -> Outcome {
    let mut r = rng(6);
    let mut erf_worst = 0.0f64;
    for _ in 0..40 {
        let k = r.gen_range(0..3);
        let (alpha, omega) = CUBE_PARAMS[k];
        let x: f64 = r.gen_range(-1.0..1.0);
        let z = Complex64::new(omega / 2.0, alpha * x) / alpha.sqrt();
        let want = erf_by_quadrature(z, 20_000);
        erf_worst = erf_worst.max((complex_erf(z).unwrap() - want).norm() / want.norm().max(1.0));
    }
    let lat = Lattice::periodic(vec![64, 64, 64], &[-1.0; 3], &[1.0; 3]).unwrap();
    let g = GridSignal::from_fn(lat.clone(), cube_signal).unwrap();
    let a = analytic_signal(&g);
    let f100 = a.component(0b001);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let idx: Vec<usize> = (0..3).map(|_| r.gen_range(8..56)).collect();
        let flat = lat.flat_index(&idx);
        let p = lat.point(flat);
        worst = worst.max((f100[flat] - oracle_cube_component(p[0], p[1], p[2]).unwrap()).abs());
    }
    check(
        worst <= 1e-3 && erf_worst <= 1e-6,
        format!("f_100 max error {worst:.1e} at 20 points, erf vs quadrature {erf_worst:.1e}"),
    )
}

fn c7_bedrosian() -> Outcome {
    // d = 1: band of the Gaussian ~ a few / sigma, carrier far above.
    let lat1 = Lattice::periodic(vec![1024], &[-8.0 * PI], &[8.0 * PI]).unwrap();
    let w1 = 2.0 * PI * 80.0 / (16.0 * PI);
    let f1 = GridSignal::from_fn(lat1.clone(), |p| (-p[0] * p[0] / 2.0).exp()).unwrap();
    let g1 = GridSignal::from_fn(lat1, |p| (w1 * p[0]).cos()).unwrap();
    let r1 = bedrosian_check(&f1, &g1, Direction::ones(1).unwrap(), BAND_EPS).unwrap();
    let lat2 = Lattice::periodic(vec![256, 256], &[-6.0 * PI; 2], &[6.0 * PI; 2]).unwrap();
    let w2 = 2.0 * PI * 84.0 / (12.0 * PI);
    let f2 = GridSignal::from_fn(lat2.clone(), |p| (-(p[0] * p[0] + p[1] * p[1]) / 8.0).exp()).unwrap();
    let g2 = GridSignal::from_fn(lat2, |p| (w2 * p[0]).cos() * (w2 * p[1]).cos()).unwrap();
    let r2 = bedrosian_check(&f2, &g2, Direction::ones(2).unwrap(), BAND_EPS).unwrap();
    check(
        r1.l2_rel <= 1e-6 && r2.l2_rel <= 1e-6 && r1.hypotheses_hold && r2.hypotheses_hold,
        format!(
            "d=1 w0={w1:.1} rel {:.1e} ({}), d=2 w0={w2:.1} rel {:.1e} ({})",
            r1.l2_rel,
            r1.verdict(),
            r2.l2_rel,
            r2.verdict()
        ),
    )
}

fn c8_holomorphy() -> Outcome {
    let lat = Lattice::periodic(vec![32, 32], &[0.0, 0.0], &[2.0 * PI, 2.0 * PI]).unwrap();
    let g = GridSignal::from_fn(lat.clone(), |p| (p[0] + 2.0 * p[1]).cos() + 0.5 * (3.0 * p[0] + p[1] + 0.4).sin())
        .unwrap();
    let s = positive_restrict(&hft_forward(&g));
    let ext = HoloExtension::new(&s).unwrap();
    let f = |p: &UpperPoint| ext.eval(p);
    let p = UpperPoint::new(vec![0.7, 2.1], vec![0.5, 0.5]).unwrap();
    let res: Vec<Vec<f64>> = [0.1, 0.05, 0.025].iter().map(|&h| cr_residual(&f, &p, h).unwrap()).collect();
    let mut ratios = Vec::new();
    for axis in 0..2 {
        for w in res.windows(2) {
            ratios.push(w[0][axis] / w[1][axis]);
        }
    }
    let ratios_ok = ratios.iter().all(|r| (3.5..=4.5).contains(r));
    let boundary = analytic_signal(&g);
    let dist: Vec<f64> = [0.4, 0.2, 0.1, 0.05]
        .iter()
        .map(|&y| {
            let pts: Vec<UpperPoint> =
                (0..lat.len()).map(|i| UpperPoint::new(lat.point(i), vec![y, y]).unwrap()).collect();
            let vals = ext.eval_many(&pts).unwrap();
            let mut acc = 0.0;
            for (i, v) in vals.iter().enumerate() {
                for b in 0..4u32 {
                    acc += (v.coeff(b) - boundary.component(b)[i]).powi(2);
                }
            }
            (acc / lat.len() as f64).sqrt()
        })
        .collect();
    let mono = dist.windows(2).all(|w| w[1] < w[0]);
    check(
        ratios_ok && mono,
        format!(
            "residual ratios [{}], boundary distances [{}]",
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(", "),
            dist.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn c9_cauchy() -> Outcome {
    let plane = |dim, axis, z: Complex64| ScheffersElement::plane(dim, axis, z.re, z.im).unwrap();
    let cubic = |z: Complex64, c: [f64; 4]| ((z * c[3] + c[2]) * z + c[1]) * z + c[0];
    let mut r = rng(9);
    let (mut inside, mut outside) = (0.0f64, 0.0f64);
    for d in 1..=2usize {
        for _ in 0..4 {
            let coef: Vec<[f64; 4]> =
                (0..d).map(|_| [0; 4].map(|_: i32| r.gen_range(-1.0..1.0))).collect();
            let f = |z: &[Complex64]| {
                let mut v = ScheffersElement::scalar(d, 1.0).unwrap();
                for a in 0..d {
                    v = &v * &plane(d, a, cubic(z[a], coef[a]));
                }
                v
            };
            let center: Vec<Complex64> = (0..d).map(|_| Complex64::new(r.gen_range(-1.0..1.0), 2.0)).collect();
            let radius = 1.2;
            let j = Direction::ones(d).unwrap();
            let zin: Vec<Complex64> =
                center.iter().map(|c| c + Complex64::from_polar(r.gen_range(0.0..0.6), r.gen_range(0.0..6.0))).collect();
            let got = cauchy_polydisk(&f, &center, radius, &zin, j, 64).unwrap();
            let want = f(&zin);
            inside = inside.max(got.checked_sub(&want).unwrap().norm());
            let mut zout = zin.clone();
            zout[d - 1] = center[d - 1] + Complex64::from_polar(2.0 + r.gen_range(0.0..1.0), r.gen_range(0.0..6.0));
            outside = outside.max(cauchy_polydisk(&f, &center, radius, &zout, j, 64).unwrap().norm());
        }
    }
    check(inside <= 1e-10 && outside <= 1e-10, format!("inside error {inside:.1e}, outside value {outside:.1e}"))
}

fn c10_nonexistence() -> Outcome {
    let cl2 = ordering_search(&AlgebraSpec::clifford(2).unwrap(), SearchSpace::Placement).unwrap();
    let symmetric = cl2.find(&OrderingCandidate::placement(2, 0b01, 0b01)).is_some_and(|r| r.is_consistent());
    let cl3 = ordering_search(&AlgebraSpec::clifford(3).unwrap(), SearchSpace::Placement).unwrap();
    let certified = cl3.results.iter().all(|r| r.mismatch.is_some_and(|m| m.blade.count_ones() == 2));
    let sch3 = ordering_search(&AlgebraSpec::scheffers(3).unwrap(), SearchSpace::Placement).unwrap();
    let n2 = cl2.consistent().count();
    let n3 = cl3.consistent().count();
    let ns = sch3.consistent().count();
    check(
        n2 >= 1 && symmetric && n3 == 0 && certified && ns >= 1,
        format!(
            "clifford d=2 {n2}/{} (symmetric {}), clifford d=3 {n3}/{} certified {certified}, commutative d=3 {ns}/{}",
            cl2.results.len(),
            if symmetric { "consistent" } else { "inconsistent" },
            cl3.results.len(),
            sch3.results.len()
        ),
    )
}

fn c11_quaternion() -> Outcome {
    let mut r = rng(11);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let g = band_limited(&mut r, &[16, 16], 8, 10);
        let q = quaternion_analytic_2d(&g).unwrap();
        let a = analytic_signal(&g);
        let gnorm = g.data().iter().map(|v| v * v).sum::<f64>().sqrt();
        for b in 0..4u32 {
            let diff: f64 = q.component(b).iter().zip(a.component(b)).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
            let n = a.component(b).iter().map(|v| v * v).sum::<f64>().sqrt();
            worst = worst.max(diff / n.max(1e-3 * gnorm));
        }
    }
    check(worst <= 1e-9, format!("max relative component error {worst:.1e} over 10 grids"))
}

fn c12_kernels() -> Outcome {
    let n = 256;
    let lat = Lattice::periodic(vec![n], &[0.0], &[2.0 * PI]).unwrap();
    let j = Direction::ones(1).unwrap();
    let mut circ = 0.0f64;
    for k in 0..=64 {
        for phase in [0.0, PI / 2.0] {
            let g = GridSignal::from_fn(lat.clone(), |p| (k as f64 * p[0] - phase).cos()).unwrap();
            let c = circle_hilbert(g.data(), &[n], j).unwrap();
            circ = circ.max(max_abs_diff(&c, partial_hilbert(&g, j).unwrap().data()));
        }
    }
    let (sigma, w0, y) = (120.0f64, 0.05f64, 0.01f64);
    let big = Lattice::periodic(vec![1 << 20], &[-1300.0], &[1300.0]).unwrap();
    let g = GridSignal::from_fn(big.clone(), |p| (-p[0] * p[0] / (2.0 * sigma * sigma)).exp() * (w0 * p[0]).cos())
        .unwrap();
    let h = partial_hilbert(&g, j).unwrap();
    let mut pois = 0.0f64;
    for q in 0..10 {
        let k = (1 << 19) + (q as usize) * 40_000 - 200_000;
        let x = big.coordinate(0, k);
        let (_, conj) = poisson_halfplane(&g, x, y).unwrap();
        pois = pois.max((conj - h.data()[k]).abs());
    }
    check(
        circ <= 1e-8 && pois <= 1e-3,
        format!("cot kernel max error {circ:.1e} (k <= 64), Poisson conjugate at y={y} max error {pois:.1e}"),
    )
}

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "algebra table", budget: Duration::from_secs(1), run: c1_algebra_table },
        Criterion { id: 2, name: "1-D spectral identity", budget: Duration::from_secs(1), run: c2_spectral_identity },
        Criterion { id: 3, name: "positive support", budget: Duration::from_secs(5), run: c3_positive_support },
        Criterion { id: 4, name: "component identity", budget: Duration::from_secs(5), run: c4_component_identity },
        Criterion { id: 5, name: "closed-form amplitudes", budget: Duration::from_secs(5), run: c5_closed_forms },
        Criterion { id: 6, name: "cube erf oracle", budget: Duration::from_secs(60), run: c6_cube_oracle },
        Criterion { id: 7, name: "Bedrosian", budget: Duration::from_secs(5), run: c7_bedrosian },
        Criterion { id: 8, name: "holomorphy", budget: Duration::from_secs(10), run: c8_holomorphy },
        Criterion { id: 9, name: "Cauchy polydisk", budget: Duration::from_secs(5), run: c9_cauchy },
        Criterion { id: 10, name: "non-existence", budget: Duration::from_secs(10), run: c10_nonexistence },
        Criterion { id: 11, name: "quaternion cross-check", budget: Duration::from_secs(2), run: c11_quaternion },
        Criterion { id: 12, name: "kernel equivalence", budget: Duration::from_secs(5), run: c12_kernels },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.id.to_string() == *f || c.name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let in_budget = elapsed <= c.budget;
        let (pass, detail) = match outcome {
            Ok(d) => (in_budget, d),
            Err(d) => (false, d),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} {} {:<24} {} [{:.2}s / {}s{}]",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            if in_budget { "" } else { ", over budget" }
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
