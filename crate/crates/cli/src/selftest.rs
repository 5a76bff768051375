use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scheffers::algebra::{AlgebraSpec, Direction, ScheffersElement};
use scheffers::features::{amplitude, bedrosian_check, BAND_EPS};
use scheffers::grid::{BinKind, GridSignal, Lattice};
use scheffers::holo::{cauchy_polydisk, circle_hilbert, cr_residual, HoloExtension, UpperPoint};
use scheffers::noncomm::{ordering_search, quaternion_analytic_2d, OrderingCandidate, SearchSpace};
use scheffers::oracle::{oracle_gauss_cos_1d, ClosedForm};
use scheffers::par::with_threads;
use scheffers::transform::{analytic_signal, hft_forward, hft_forward_field, partial_hilbert, positive_restrict};

fn random_grid(rng: &mut ChaCha8Rng, shape: &[usize]) -> GridSignal {
    let d = shape.len();
    let lat = Lattice::new(shape.to_vec(), vec![0.0; d], vec![0.5; d]).unwrap();
    let data = (0..lat.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    GridSignal::new(lat, data).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn algebra(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut el = || ScheffersElement::new(4, (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (a, b, c) = (el(), el(), el());
        worst = worst.max((&(&a * &b) - &(&b * &a)).norm());
        worst = worst.max((&(&(&a * &b) * &c) - &(&a * &(&b * &c))).norm());
        if let Ok(inv) = a.inverse() {
            worst = worst.max((&(&a * &inv) - &ScheffersElement::scalar(4, 1.0).unwrap()).norm() / (a.norm() * inv.norm()));
        }
    }
    (worst < 1e-12, format!("max defect {worst:.1e}"))
}

fn transforms(rng: &mut ChaCha8Rng) -> (bool, String) {
    let (mut support, mut comp) = (0.0f64, 0.0f64);
    for shape in [vec![16], vec![9], vec![8, 6], vec![6, 5, 4]] {
        let g = random_grid(rng, &shape);
        let a = analytic_signal(&g);
        let s = hft_forward_field(&a);
        let lat = s.lattice();
        for flat in 0..lat.len() {
            let idx = lat.multi_index(flat);
            if idx.iter().enumerate().any(|(ax, &k)| lat.bin_kind(ax, k) == BinKind::Negative) {
                support = support.max(s.components().iter().map(|c| c[flat].abs()).fold(0.0, f64::max));
            }
        }
        for bits in 0..(1u32 << shape.len()) {
            let h = partial_hilbert(&g, Direction::new(shape.len(), bits).unwrap()).unwrap();
            comp = comp.max(max_diff(a.component(bits), h.data()));
        }
    }
    (support < 1e-10 && comp < 1e-10, format!("negative support {support:.1e}, component identity {comp:.1e}"))
}

fn closed_forms() -> (bool, String) {
    let mut worst = 0.0f64;
    for cf in ClosedForm::ALL {
        let l = cf.period();
        let lat = Lattice::periodic(vec![64, 64], &[0.0, 0.0], &[l, l]).unwrap();
        let g = GridSignal::from_fn(lat.clone(), |p| cf.signal(p[0], p[1])).unwrap();
        let amp = amplitude(&analytic_signal(&g));
        for i in 0..lat.len() {
            let p = lat.point(i);
            worst = worst.max((amp.data()[i].powi(2) - cf.amplitude_sq(p[0], p[1])).abs());
        }
    }
    (worst < 1e-8, format!("max squared amplitude error {worst:.1e}"))
}

fn bedrosian() -> (bool, String) {
    let lat = Lattice::periodic(vec![512], &[-8.0 * PI], &[8.0 * PI]).unwrap();
    let w = 2.0 * PI * 60.0 / (16.0 * PI);
    let f = GridSignal::from_fn(lat.clone(), |p| (-p[0] * p[0] / 2.0).exp()).unwrap();
    let g = GridSignal::from_fn(lat, |p| (w * p[0]).cos()).unwrap();
    let r = bedrosian_check(&f, &g, Direction::ones(1).unwrap(), BAND_EPS).unwrap();
    (r.l2_rel < 1e-6 && r.hypotheses_hold, format!("relative discrepancy {:.1e}, {}", r.l2_rel, r.verdict()))
}

fn holomorphy() -> (bool, String) {
    let lat = Lattice::periodic(vec![16, 16], &[0.0, 0.0], &[2.0 * PI, 2.0 * PI]).unwrap();
    let g = GridSignal::from_fn(lat, |p| (p[0] + 2.0 * p[1]).cos() + 0.5 * (3.0 * p[0] + p[1]).sin()).unwrap();
    let s = positive_restrict(&hft_forward(&g));
    let ext = HoloExtension::new(&s).unwrap();
    let f = |p: &UpperPoint| ext.eval(p);
    let p = UpperPoint::new(vec![0.7, 2.1], vec![0.5, 0.5]).unwrap();
    let a = cr_residual(&f, &p, 0.1).unwrap();
    let b = cr_residual(&f, &p, 0.05).unwrap();
    let ratios: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x / y).collect();
    (
        ratios.iter().all(|r| (3.5..=4.5).contains(r)),
        format!("residual ratios {}", ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(",")),
    )
}

fn cauchy() -> (bool, String) {
    let f = |z: &[Complex64]| {
        let p = z[0] * z[0] * z[0] - 2.0;
        let q = z[1] * z[1] + Complex64::new(0.0, 1.0);
        &ScheffersElement::plane(2, 0, p.re, p.im).unwrap() * &ScheffersElement::plane(2, 1, q.re, q.im).unwrap()
    };
    let c = [Complex64::new(0.0, 2.0), Complex64::new(1.0, 2.0)];
    let zin = [Complex64::new(0.3, 2.2), Complex64::new(0.8, 1.7)];
    let zout = [Complex64::new(0.3, 2.2), Complex64::new(3.0, 2.0)];
    let j = Direction::ones(2).unwrap();
    let inside = cauchy_polydisk(&f, &c, 1.0, &zin, j, 64).unwrap().checked_sub(&f(&zin)).unwrap().norm();
    let outside = cauchy_polydisk(&f, &c, 1.0, &zout, j, 64).unwrap().norm();
    (inside < 1e-10 && outside < 1e-10, format!("inside {inside:.1e}, outside {outside:.1e}"))
}

fn noncomm() -> (bool, String) {
    let cl2 = ordering_search(&AlgebraSpec::clifford(2).unwrap(), SearchSpace::Placement).unwrap();
    let cl3 = ordering_search(&AlgebraSpec::clifford(3).unwrap(), SearchSpace::Placement).unwrap();
    let sc3 = ordering_search(&AlgebraSpec::scheffers(3).unwrap(), SearchSpace::Placement).unwrap();
    let sym = cl2.find(&OrderingCandidate::placement(2, 0b01, 0b01)).is_some_and(|r| r.is_consistent());
    let ok = sym && !cl3.any_consistent() && sc3.any_consistent();
    (ok, format!("clifford d=2 symmetric {sym}, clifford d=3 {}, commutative d=3 {}", cl3.any_consistent(), sc3.any_consistent()))
}

fn quaternion(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let g = random_grid(rng, &[8, 8]);
        let q = quaternion_analytic_2d(&g).unwrap();
        let a = analytic_signal(&g);
        for b in 0..4u32 {
            worst = worst.max(max_diff(q.component(b), a.component(b)));
        }
    }
    (worst < 1e-10, format!("max component difference {worst:.1e}"))
}

fn kernels() -> (bool, String) {
    let n = 64;
    let lat = Lattice::periodic(vec![n], &[0.0], &[2.0 * PI]).unwrap();
    let j = Direction::ones(1).unwrap();
    let mut worst = 0.0f64;
    for k in 0..n / 2 {
        let g = GridSignal::from_fn(lat.clone(), |p| (k as f64 * p[0] + 0.3).cos()).unwrap();
        worst = worst.max(max_diff(&circle_hilbert(g.data(), &[n], j).unwrap(), partial_hilbert(&g, j).unwrap().data()));
    }
    (worst < 1e-10, format!("cot kernel vs multiplier {worst:.1e}"))
}

fn erf_oracle() -> (bool, String) {
    let v = oracle_gauss_cos_1d(2.0, 0.5, -0.7).unwrap();
    let err = (v + 0.605_481_489_900_824_99).abs();
    (err < 1e-12, format!("reference value error {err:.1e}"))
}

fn determinism(rng: &mut ChaCha8Rng) -> (bool, String) {
    let g = random_grid(rng, &[32, 24, 8]);
    let one = with_threads(1, || analytic_signal(&g));
    let many = with_threads(4, || analytic_signal(&g));
    let same = one == many;
    (same, format!("1 vs 4 threads bit-identical: {same}"))
}

/// Runs every check and returns the number of failures.
pub fn run() -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let checks: Vec<(&str, (bool, String))> = vec![
        ("algebra", algebra(&mut rng)),
        ("transforms", transforms(&mut rng)),
        ("closed-forms", closed_forms()),
        ("bedrosian", bedrosian()),
        ("holomorphy", holomorphy()),
        ("cauchy", cauchy()),
        ("noncomm", noncomm()),
        ("quaternion", quaternion(&mut rng)),
        ("kernels", kernels()),
        ("erf-oracle", erf_oracle()),
        ("determinism", determinism(&mut rng)),
    ];
    let mut failed = 0;
    for (name, (ok, detail)) in checks {
        failed += usize::from(!ok);
        println!("selftest {name} {} {detail}", if ok { "PASS" } else { "FAIL" });
    }
    failed
}
