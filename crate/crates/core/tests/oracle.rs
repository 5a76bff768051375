mod common;

use common::*;
use num_complex::Complex64;
use scheffers::algebra::Direction;
use scheffers::grid::{GridSignal, Lattice};
use scheffers::oracle::{
    complex_erf, cube_signal, oracle_cube_amplitude, oracle_cube_component, oracle_gauss_cos_1d, ClosedForm,
};
use scheffers::transform::{fj_quadrature, partial_hilbert, QuadratureBox, QuadratureOptions};

#[test]
fn erf_matches_quadrature_on_test_box() {
    // Arguments (w/2 -+ i a x)/sqrt(a) for the cube parameters and |x| <= 1.
    let mut worst = 0.0f64;
    for &(alpha, omega) in &[(10.0f64, 50.0f64), (20.0, 40.0), (20.0, 60.0), (4.0, 6.0)] {
        for k in 0..=20 {
            let x = -1.0 + 0.1 * k as f64;
            for s in [1.0, -1.0] {
                let z = Complex64::new(omega / 2.0, s * alpha * x) / alpha.sqrt();
                let got = complex_erf(z).unwrap();
                let want = erf_by_quadrature(z, 20_000);
                worst = worst.max((got - want).norm() / want.norm().max(1.0));
            }
        }
    }
    assert!(worst < 1e-6, "worst relative error {worst:e}");
}

#[test]
fn erf_special_values() {
    assert_eq!(complex_erf(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
    let e1 = complex_erf(Complex64::new(1.0, 0.0)).unwrap();
    assert!((e1.re - 0.842_700_792_949_714_9).abs() < 1e-15 && e1.im.abs() < 1e-15);
    // erf(i) = i erfi(1)
    let ei = complex_erf(Complex64::new(0.0, 1.0)).unwrap();
    assert!(ei.re.abs() < 1e-15 && (ei.im - 1.650_425_758_797_542_8).abs() < 1e-14);
    let z = Complex64::new(0.7, -2.3);
    let conj = complex_erf(z.conj()).unwrap();
    assert!((complex_erf(z).unwrap().conj() - conj).norm() < 1e-14 * conj.norm());
}

#[test]
fn gauss_cos_matches_direct_quadrature() {
    let f = |p: &[f64]| (-10.0 * p[0] * p[0]).exp() * (50.0 * p[0]).cos();
    let bbox = QuadratureBox { lo: vec![-2.0], hi: vec![2.0], nodes: vec![401] };
    let opts = QuadratureOptions { tol: 1e-7, max_refinements: 10, ..Default::default() };
    let pts = vec![vec![0.1], vec![-0.25], vec![0.33]];
    let q = fj_quadrature(&f, Direction::ones(1).unwrap(), &pts, &bbox, &opts).unwrap();
    for (p, qv) in pts.iter().zip(&q) {
        let v = oracle_gauss_cos_1d(10.0, 50.0, p[0]).unwrap();
        assert!((v - qv).abs() < 1e-4, "x={}: {v} vs {qv}", p[0]);
    }
}

#[test]
fn gauss_cos_matches_fft_on_wide_grid() {
    let lat = Lattice::periodic(vec![1 << 15], &[-200.0], &[200.0]).unwrap();
    let g = GridSignal::from_fn(lat.clone(), |p| (-10.0 * p[0] * p[0]).exp() * (50.0 * p[0]).cos()).unwrap();
    let h = partial_hilbert(&g, Direction::ones(1).unwrap()).unwrap();
    let mut worst = 0.0f64;
    for i in 0..lat.len() {
        let x = lat.point(i)[0];
        if x.abs() <= 1.0 {
            worst = worst.max((h.data()[i] - oracle_gauss_cos_1d(10.0, 50.0, x).unwrap()).abs());
        }
    }
    assert!(worst < 1e-4, "{worst:e}");
}

#[test]
fn gauss_cos_parity_and_zero() {
    assert_eq!(oracle_gauss_cos_1d(10.0, 50.0, 0.0).unwrap(), 0.0);
    for x in [0.05, 0.3, 0.77] {
        let a = oracle_gauss_cos_1d(2.0, 3.0, x).unwrap();
        let b = oracle_gauss_cos_1d(2.0, 3.0, -x).unwrap();
        assert!((a + b).abs() < 1e-13);
    }
    assert!(oracle_gauss_cos_1d(0.0, 1.0, 0.2).is_err());
    // Value computed with 30-digit arithmetic from the defining integral.
    assert!((oracle_gauss_cos_1d(2.0, 0.5, -0.7).unwrap() - (-0.605_481_489_900_824_99)).abs() < 1e-13);
}

#[test]
fn cube_component_separable_zeros() {
    let y0 = std::f64::consts::PI / 80.0;
    for &(x, z) in &[(0.1, 0.2), (-0.4, 0.9)] {
        assert!(oracle_cube_component(x, y0, z).unwrap().abs() < 1e-15);
    }
    for &(y, z) in &[(0.1, 0.2), (-0.4, 0.9)] {
        assert_eq!(oracle_cube_component(0.0, y, z).unwrap(), 0.0);
    }
    let p = [0.1, -0.2, 0.05];
    assert!(oracle_cube_amplitude(p[0], p[1], p[2]).unwrap() >= cube_signal(&p).abs());
}

#[test]
fn closed_forms_self_consistent() {
    for cf in ClosedForm::ALL {
        for k in 0..50 {
            let (x, y) = (0.37 * k as f64 - 9.0, 0.23 * k as f64 - 4.0);
            let c = cf.components(x, y);
            let rss: f64 = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((rss - cf.amplitude(x, y)).abs() < 1e-12, "{}", cf.name());
            assert!((c[0] - cf.signal(x, y)).abs() < 1e-12);
        }
    }
    let rot = ClosedForm::RotatedProduct;
    assert!((rot.amplitude(0.0, 0.0) - 1.0).abs() < 1e-15);
    assert!(rot.amplitude(std::f64::consts::PI / 2f64.sqrt(), 0.0).abs() < 1e-7);
    assert!((ClosedForm::LowDimRotated.amplitude(1.3, -0.2) - 2f64.sqrt()).abs() < 1e-15);
    assert!((ClosedForm::LowDim.amplitude(1.3, -0.2) - 1.0).abs() < 1e-15);
}
