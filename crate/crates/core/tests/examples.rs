//! Worked examples for each module, checked against independent oracles.

use std::f64::consts::PI;

use torus_cwt::admissibility::*;
use torus_cwt::conformal::*;
use torus_cwt::cwt::*;
use torus_cwt::dilation::*;
use torus_cwt::modular::*;
use torus_cwt::modular_frames::*;
use torus_cwt::quadrature::{PanelRule, StereoRule};
use torus_cwt::torus::*;
use torus_cwt::wavelets::*;
use torus_cwt::{Complex64, Error};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() < tol
}

#[test]
fn grids_and_sampling() {
    let g = TorusGrid::square(8).unwrap();
    let a = g.angles1();
    assert!((a[1] - a[0] - PI / 4.0).abs() < 1e-15);
    assert!(TorusGrid::new(2, 2).is_ok());
    assert!(TorusGrid::new(1, 4).is_err());

    let g4 = TorusGrid::square(4).unwrap();
    let e = sample(|t, _| Complex64::from_polar(1.0, t), g4).unwrap();
    let expected = [c(1.0), Complex64::i(), c(-1.0), -Complex64::i()];
    // angles start at 0 and advance by π/2
    for (k, want) in expected.iter().enumerate() {
        assert!(close(e.at(k, 0), *want, 1e-15));
    }
    let phi = sample(|a, b| plane_wave(1, 1, a, b), g).unwrap();
    let (t1, t2) = g.angle(3, 5);
    assert!(close(phi.at(3, 5), Complex64::from_polar(1.0 / (2.0 * PI), t1 + t2), 1e-15));
}

#[test]
fn inner_products_are_exact_on_trigonometric_polynomials() {
    let g = TorusGrid::square(16).unwrap();
    let p10 = sample(|a, b| plane_wave(1, 0, a, b), g).unwrap();
    let p20 = sample(|a, b| plane_wave(2, 0, a, b), g).unwrap();
    assert!(close(inner_product(&p10, &p10).unwrap(), c(1.0), 1e-14));
    assert!(inner_product(&p10, &p20).unwrap().norm() < 1e-15);
    let one = sample(|_, _| c(1.0), g).unwrap();
    assert!(close(inner_product(&one, &one).unwrap(), c(4.0 * PI * PI), 1e-12));
}

#[test]
fn fourier_coefficients_examples() {
    let g = TorusGrid::square(9).unwrap();
    let one = fourier_coefficients(&sample(|_, _| c(1.0), g).unwrap(), 4, 4).unwrap();
    for ((a, b), v) in one.indices().zip(&one.coeffs) {
        let want = if (a, b) == (0, 0) { c(2.0 * PI) } else { c(0.0) };
        assert!(close(*v, want, 1e-12));
    }
    // with φ normalised by 1/2π, 2π·φ_n is the plain exponential, whose coefficient is 2π
    let f = sample(|a, b| plane_wave(3, -2, a, b) * (2.0 * PI), g).unwrap();
    let t = fourier_coefficients(&f, 4, 4).unwrap();
    assert!(close(t.value(3, -2), c(2.0 * PI), 1e-12));
    assert!(t.indices().zip(&t.coeffs).all(|(n, v)| n == (3, -2) || v.norm() < 1e-12));

    let t = FourierTable::from_fn(0, 0, |_, _| c(2.0 * PI));
    let s = inverse_fourier(&t, g).unwrap();
    assert!(s.values.iter().all(|v| close(*v, c(1.0), 1e-14)));

    // direct summation oracle
    let r = random_bandlimited(BandLimit::new(3, 2), 4);
    let s = inverse_fourier(&r, g).unwrap();
    let (t1, t2) = g.angle(2, 7);
    let direct: Complex64 = r.indices().zip(&r.coeffs).map(|((a, b), v)| v * plane_wave(a, b, t1, t2)).sum();
    assert!(close(s.at(2, 7), direct, 1e-12));
}

#[test]
fn continuous_fourier_examples() {
    let q = PanelRule::default();
    assert!(close(continuous_fourier(|_, _| c(1.0), 0.0, 0.0, q).unwrap(), c(2.0 * PI), 1e-12));
    let e = continuous_fourier(|a, _| Complex64::from_polar(1.0, a), 1.0, 0.0, q).unwrap();
    assert!(close(e, c(2.0 * PI), 1e-12));
    let gamma = MotherWavelet::dog_tensor(2.0, None).unwrap().gamma_of();
    assert!(continuous_fourier(|a, b| gamma.eval(a, b), 0.0, 0.0, q).unwrap().norm() < 1e-6);
}

#[test]
fn dilation_and_multiplier_values() {
    assert_eq!(dilate_angle(0.0, 7.0).unwrap(), 0.0);
    assert!((dilate_angle(PI / 2.0, 2.0).unwrap() - 2.0 * 2f64.atan()).abs() < 1e-15);
    assert!((dilate_angle(PI / 2.0, 2.0).unwrap() - 2.2142975).abs() < 1e-7);
    for a in [0.3, 2.0, 50.0] {
        assert!((multiplier(a, 0.0).unwrap() - 1.0 / a).abs() < 1e-15);
        assert!((multiplier(a, PI).unwrap() - a).abs() < 1e-12 * a);
    }
    assert!((multiplier(1.0, 1.234).unwrap() - 1.0).abs() < 1e-15);
    assert!(dilate_angle(0.1, 0.0).is_err());
}

#[test]
fn dilation_operator_examples() {
    let g = TorusGrid::square(64).unwrap();
    let w = MotherWavelet::dog_axisymmetric(2.0).unwrap();
    let base = sample(w.as_fn(), g).unwrap();
    let same = dilate_function(w.as_fn(), 1.0, 1.0, g).unwrap();
    assert!(relative_error(&same, &base).unwrap() < 1e-15);
    // group law through trigonometric interpolation of a band-limited signal
    let f = inverse_fourier(&random_bandlimited(BandLimit::new(3, 3), 8), g).unwrap();
    let there = apply_dilation(&f, 1.2, 0.9).unwrap();
    let back = apply_dilation(&there, 1.0 / 1.2, 1.0 / 0.9).unwrap();
    assert!(relative_error(&back, &f).unwrap() < 1e-3);
}

#[test]
fn translation_examples() {
    let g = TorusGrid::square(12).unwrap();
    let f = inverse_fourier(&random_bandlimited(BandLimit::new(4, 4), 5), g).unwrap();
    assert_eq!(apply_translation(&f, 0.0, 0.0).unwrap(), f);
    let step = 2.0 * PI / 12.0;
    let moved = apply_translation(&f, 3.0 * step, -step).unwrap();
    let (fh, mh) = (fourier_coefficients(&f, 4, 4).unwrap(), fourier_coefficients(&moved, 4, 4).unwrap());
    for ((a, b), v) in fh.indices().zip(&fh.coeffs) {
        let phase = Complex64::from_polar(1.0, -(a as f64 * 3.0 * step - b as f64 * step));
        assert!(close(mh.value(a, b), phase * v, 1e-10));
    }
}

#[test]
fn wavelet_atom_examples() {
    let g = TorusGrid::square(32).unwrap();
    let w = MotherWavelet::dog_tensor(2.0, None).unwrap();
    let base = sample(w.as_fn(), g).unwrap();
    assert!(relative_error(&wavelet_atom(w.as_fn(), &AtomParams::default(), g).unwrap(), &base).unwrap() < 1e-15);
    let atom = wavelet_atom(w.as_fn(), &AtomParams::new(PI / 2.0, 0.0, 1.0, 1.0).unwrap(), g).unwrap();
    let shifted = apply_translation(&base, PI / 2.0, 0.0).unwrap();
    assert!(relative_error(&atom, &shifted).unwrap() < 1e-12);
}

#[test]
fn modular_signal_action() {
    let g = TorusGrid::square(16).unwrap();
    let f = inverse_fourier(&random_bandlimited(BandLimit::new(3, 3), 2), g).unwrap();
    assert_eq!(apply_modular(&f, &ModularMatrix::IDENTITY).unwrap(), f);
    let m = orbit_representative(4, 5).unwrap();
    let fm = apply_modular(&f, &m).unwrap();
    assert!((fm.norm() - f.norm()).abs() < 1e-12 * f.norm());
    assert!(matches!(apply_modular(&sample(|_, _| c(1.0), TorusGrid::new(4, 6).unwrap()).unwrap(), &m), Err(Error::NonSquareGrid(4, 6))));
}

#[test]
fn elliptic_helper_examples() {
    assert!((lambda_half_integral(1.0).unwrap() - 2.0 * PI).abs() < 1e-14);
    let rule = StereoRule { panels_per_unit: 6, nodes: 8, tail: 1e-12 };
    let nodes = rule.nodes_for(2.0).unwrap();
    let direct: f64 = nodes.theta.iter().zip(&nodes.weights).map(|(&t, &w)| w * multiplier(0.5, t).unwrap().sqrt()).sum();
    assert!((direct - lambda_half_integral(2.0).unwrap()).abs() < 1e-8);
}

#[test]
fn dog_examples() {
    let flat = dog_1d(1.0).unwrap();
    assert!([0.0, 0.7, -3.0].iter().all(|&x| flat(x) == 0.0));
    let psi = dog_1d(2.0).unwrap();
    assert!((psi(0.0) - 0.5).abs() < 1e-15);
    let integral = PanelRule::new(400, 8).unwrap().on(-50.0, 50.0).integrate(&psi);
    assert!(integral.abs() < 1e-10);

    let psi2 = dog_axisymmetric(2.0).unwrap();
    assert!((psi2(0.0, 0.0) - 0.75).abs() < 1e-15);
    assert_eq!(dog_axisymmetric(1.0).unwrap()(0.3, 0.2), 0.0);
    let r = PanelRule::new(200, 8).unwrap().on(-25.0, 25.0);
    let plane: f64 = r.integrate(|x| r.integrate(|y| psi2(x, y)));
    assert!(plane.abs() < 1e-10);

    let lifted = MotherWavelet::dog_axisymmetric(2.0).unwrap();
    assert!((lifted.eval(0.0, 0.0).re - 0.375).abs() < 1e-15);
    assert!(close(lifted.eval(0.4, -1.1), lifted.eval(-0.4, 1.1), 1e-15));
}

#[test]
fn lift_preserves_norm_under_stereographic_change_of_variables() {
    let psi = dog_axisymmetric(2.0).unwrap();
    let lifted = lift_to_torus(move |x, y| c(psi(x, y)));
    let q = PanelRule::new(256, 8).unwrap();
    let torus = q.on_circle();
    let torus_norm: f64 = torus.integrate(|a| torus.integrate(|b| lifted.eval(a, b).norm_sqr()));
    let psi = dog_axisymmetric(2.0).unwrap();
    let plane = PanelRule::new(400, 8).unwrap().on(-40.0, 40.0);
    let plane_norm: f64 = plane.integrate(|x| plane.integrate(|y| psi(x, y).powi(2)));
    assert!((torus_norm - 0.25 * plane_norm).abs() < 1e-6, "{torus_norm} {plane_norm}");
}

/// Fourier coefficients of the profile `Γ` on the window `|n| ≤ l`.
fn gamma_table(w: &MotherWavelet, l: usize) -> FourierTable {
    let g = w.gamma_of();
    let q = PanelRule::new(32, 8).unwrap();
    FourierTable::from_fn(l, l, |a, b| continuous_fourier(|x, y| g.eval(x, y), a as f64, b as f64, q).unwrap())
}

#[test]
fn diagonal_wavelet_examples() {
    let w = MotherWavelet::diagonal_dog(10.0).unwrap();
    assert!((w.eval(0.0, 0.0).re - 0.9).abs() < 1e-14);
    let big_gamma = w.gamma_of();
    assert!(close(big_gamma.eval(0.3, 0.5), big_gamma.eval(0.8, 0.0), 1e-14));
    let t = gamma_table(&w, 8);
    let off = t.indices().zip(&t.coeffs).filter(|((a, b), _)| a != b).map(|(_, v)| v.norm()).fold(0.0, f64::max);
    assert!(off < 1e-10);
    let zero = diagonal_wavelet(|_| c(0.0));
    assert_eq!(zero.eval(0.1, 0.2), c(0.0));
}

#[test]
fn necessary_condition_examples() {
    let nc = necessary_condition(&MotherWavelet::dog_tensor(2.0, None).unwrap(), PanelRule::default()).unwrap();
    assert!(nc.magnitude < 1e-6 && !nc.diverges);
    let nc = necessary_condition(&MotherWavelet::constant(), PanelRule::default()).unwrap();
    assert!(nc.diverges);
    let odd = MotherWavelet::separable(|t| c(t.sin()), |t| c(t.cos() + 2.0));
    assert!(necessary_condition(&odd, PanelRule::default()).unwrap().magnitude < 1e-12);
}

#[test]
fn dilated_coefficients_examples() {
    let w = MotherWavelet::dog_axisymmetric(2.0).unwrap();
    let rule = StereoRule::default();
    let direct = continuous_fourier(w.as_fn(), 2.0, -1.0, PanelRule::new(256, 8).unwrap()).unwrap();
    assert!(close(dilated_coefficient(&w, 2, -1, 1.0, 1.0, &rule).unwrap(), direct, 1e-8));

    // two-path oracle: sampled dilation on a fine grid
    let g = TorusGrid::square(256).unwrap();
    let (a1, a2) = (1.5, 0.75);
    let dilated = dilate_function(w.as_fn(), a1, a2, g).unwrap();
    let t = fourier_coefficients(&dilated, 3, 3).unwrap();
    for (n1, n2) in [(0, 0), (1, 2), (-3, 1)] {
        let exact = dilated_coefficient(&w, n1, n2, a1, a2, &rule).unwrap();
        assert!(close(t.value(n1, n2), exact, 1e-4), "{n1},{n2}");
    }
}

#[test]
fn spectrum_examples() {
    let zero = lambda_spectrum(&MotherWavelet::zero(), (2, 2), &SpectrumConfig::default()).unwrap();
    assert!(zero.values.iter().all(|v| *v == 0.0));
    let b = frame_bound_scan(&zero).unwrap();
    assert_eq!((b.c_hat, b.big_c_hat), (0.0, 0.0));

    let tensor = MotherWavelet::dog_tensor(2.0, None).unwrap();
    let spec = lambda_spectrum(&tensor, (8, 8), &SpectrumConfig::default()).unwrap();
    let dual = dual_coefficients(&spec).unwrap();
    assert!(dual.coeffs.iter().all(|v| v.re.is_finite() && v.re > 0.0));
}

#[test]
fn quadrant_support_examples() {
    let rule = StereoRule::default();
    let tensor = DilatedSampler::new(&MotherWavelet::dog_tensor(2.0, None).unwrap(), 1.0, 1.0, &rule).unwrap().table(4, 4);
    assert_eq!(quadrant_support(&tensor), [true; 4]);
    let diag = gamma_table(&MotherWavelet::diagonal_dog(10.0).unwrap(), 4);
    assert_eq!(quadrant_support(&diag), [true, false, true, false]);
    let mut single = FourierTable::zeros(2, 2);
    *single.get_mut(1, 1).unwrap() = c(1.0);
    assert_eq!(quadrant_support(&single), [true, false, false, false]);
}

#[test]
fn modular_lambda_examples() {
    let w = MotherWavelet::diagonal_dog(10.0).unwrap();
    let config = SpectrumConfig {
        scales: ScaleQuadrature::new(-4.0, 4.0, 8, ScaleRule::GaussPanels).unwrap(),
        angular: StereoRule { tail: 1e-4, ..Default::default() },
    };
    let bank = ModularBank::build(&w, 5, &config).unwrap();
    let closed = bank.orbit_lambda(1);
    let direct = bank.lambda_direct(1, 1, 4).unwrap();
    assert!((closed - direct).abs() < 1e-8 * closed);
    assert!(bank.lambda_direct(4, 5, 6).unwrap() > 0.0);
    let zero = ModularBank::build(&diagonal_wavelet(|_| c(0.0)), 3, &config).unwrap();
    assert_eq!(zero.orbit_lambda(2), 0.0);
}

#[test]
fn modular_group_examples() {
    assert!(ModularMatrix::IDENTITY.inverse().is_identity());
    assert_eq!(ModularMatrix::new(2, 1, -1, 0).unwrap().det(), 1);
    assert!(ModularMatrix::new(2, 0, 0, 1).is_err());
    let (g, m, n) = extended_gcd(4, 5).unwrap();
    assert_eq!((g, 4 * m + 5 * n), (1, 1));
    let (g, m, n) = extended_gcd(6, 4).unwrap();
    assert_eq!((g, 6 * m + 4 * n), (2, 2));
    assert_eq!(orbit_representative(4, 5).unwrap().rows(), [[-1, -6], [1, 5]]);
    assert!(orbit_representative(7, 7).unwrap().is_identity());
    assert_eq!(orbit_representative(1, 0).unwrap().rows(), [[1, 1], [0, 1]]);
    assert!(stabilizer_power(0, StabilizerKind::Diag).unwrap().is_identity());
    assert_eq!(stabilizer_power(1, StabilizerKind::Axis1).unwrap().act_row(5, 0).unwrap(), (5, 0));
    assert_eq!(index_action(1, 1, &ModularMatrix::new(2, 1, -1, 0).unwrap()).unwrap(), (1, 1));
    assert_eq!(index_action(1, 0, &ModularMatrix::new(1, 1, 0, 1).unwrap()).unwrap(), (1, 1));

    let l = orbit_label(0, 0).unwrap();
    assert_eq!(l.g, 0);
    assert!(l.rep.is_identity());
    let l = orbit_label(4, 6).unwrap();
    assert_eq!((l.g, l.rep.act_row(4, 6).unwrap()), (2, (2, 2)));
    let l = orbit_label(-3, -3).unwrap();
    assert_eq!((l.g, l.rep.act_row(-3, -3).unwrap()), (3, (3, 3)));
}

#[test]
fn generator_products_invert_exactly() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let gens = [
        ModularMatrix::new(1, 1, 0, 1).unwrap(),
        ModularMatrix::new(0, -1, 1, 0).unwrap(),
        ModularMatrix::new(2, 1, -1, 0).unwrap(),
    ];
    for _ in 0..1000 {
        let mut a = ModularMatrix::IDENTITY;
        for _ in 0..rng.gen_range(1..12) {
            let g = gens[rng.gen_range(0..3)];
            let g = if rng.gen() { g } else { g.inverse() };
            a = a.mul(&g).unwrap();
        }
        assert!(a.mul(&a.inverse()).unwrap().is_identity());
    }
}

#[test]
fn coset_examples() {
    let cosets = enumerate_cosets(1).unwrap();
    assert_eq!(cosets.len(), 8);
    let mut images: Vec<_> = coprime_pairs(1)
        .into_iter()
        .zip(&cosets)
        .map(|(c, m)| m.inverse().act_row(1, 1).map(|v| (v, c)).unwrap())
        .collect();
    images.sort_unstable();
    assert!(images.iter().all(|(v, c)| v == c));
    assert!(cosets.iter().all(|m| m.det() == 1));

    let s = ModularMatrix::new(2, 1, -1, 0).unwrap();
    let cosets = enumerate_cosets(3).unwrap();
    for (i, a) in cosets.iter().enumerate() {
        for b in &cosets[i + 1..] {
            let q = a.inverse().mul(b).unwrap();
            for k in -20..=20 {
                assert_ne!(q, s.pow(k).unwrap());
            }
        }
    }
    assert!(enumerate_cosets(0).is_err());
}

#[test]
fn orbit_projection_examples() {
    let t = random_bandlimited(BandLimit::new(4, 4), 3);
    let mut total = FourierTable::zeros(4, 4);
    for g in 0..=8 {
        let p = project_vg(&t, g);
        for (a, b) in total.coeffs.iter_mut().zip(&p.coeffs) {
            *a += b;
        }
        let q = project_vg(&t, g + 1);
        assert!(p.coeffs.iter().zip(&q.coeffs).all(|(x, y)| x.norm() * y.norm() == 0.0));
    }
    assert_eq!(total, t);

    let mut s = FourierTable::zeros(4, 4);
    for (a, b) in [(2, 4), (3, 3), (2, 2)] {
        *s.get_mut(a, b).unwrap() = c(1.0);
    }
    let p = project_vg(&s, 2);
    assert_eq!((p.value(2, 4), p.value(2, 2), p.value(3, 3)), (c(1.0), c(1.0), c(0.0)));
}

#[test]
fn bessel_and_frame_examples() {
    let seq = DiagonalSequence::from_wavelet(&MotherWavelet::diagonal_dog(10.0).unwrap(), 6, &StereoRule::default()).unwrap();
    let mut single = FourierTable::zeros(6, 6);
    *single.get_mut(3, 3).unwrap() = c(1.0);
    let s = bessel_sum(&seq, &single);
    assert!((s - seq.orbit_weight(3)).abs() < 1e-15);
    assert!((bessel_sum_direct(&seq, &single, 4).unwrap() - s).abs() < 1e-15);
    let bounds = bandlimited_frame_bounds(&seq, BandLimit::new(6, 6));
    assert!(bounds.c <= s && s <= bounds.big_c);
    assert_eq!(bessel_sum(&seq, &FourierTable::zeros(6, 6)), 0.0);

    let mut d: Vec<Complex64> = (-6..=6).map(|k: i64| c(1.0 / (1.0 + k.abs() as f64))).collect();
    d[6 + 3] = c(0.0);
    d[6 - 3] = c(0.0);
    let holed = DiagonalSequence::from_coefficients(6, d).unwrap();
    let r = bandlimited_frame_bounds(&holed, BandLimit::new(6, 6));
    assert!(!r.frame && r.c == 0.0);
    let psi3 = project_vg(&random_bandlimited(BandLimit::new(6, 6), 1), 3);
    assert_eq!(bessel_sum(&holed, &psi3), 0.0);
}

#[test]
fn orbit_basis_examples() {
    let r = orthonormal_orbit_basis_check(1, 1, 2).unwrap();
    assert!(r.max_gram_error < 1e-12 && r.supports_distinct && r.supports_in_orbit && r.covers_orbit);
    let r = orthonormal_orbit_basis_check(4, 6, 3).unwrap();
    assert!(r.max_gram_error < 1e-12 && r.supports_in_orbit);
}

#[test]
fn modular_atom_examples() {
    let g = TorusGrid::square(64).unwrap();
    let w = MotherWavelet::diagonal_dog(10.0).unwrap();
    let plain = wavelet_atom(w.as_fn(), &AtomParams::new(0.3, -0.2, 1.5, 1.5).unwrap(), g).unwrap();
    let m_id = modular_atom_system(&w, 1.5, ModularMatrix::IDENTITY, 0.3, -0.2, g).unwrap();
    assert_eq!(plain, m_id);
    let m = orbit_representative(1, 0).unwrap();
    let atom = modular_atom_system(&w, 1.0, m, 0.0, 0.0, g).unwrap();
    let base = sample(w.as_fn(), g).unwrap();
    assert!((atom.norm() - base.norm()).abs() < 1e-3 * base.norm());
    // a function of θ₁ + θ₂ is Fourier-diagonal; its modular image lives on the image of the diagonal
    let eta = diagonal_dog_profile(10.0).unwrap();
    let along = MotherWavelet::custom(move |a, b| eta(a + b));
    let g = TorusGrid::square(128).unwrap();
    let atom = modular_atom_system(&along, 1.0, m, 0.0, 0.0, g).unwrap();
    let t = fourier_coefficients(&atom, 6, 6).unwrap();
    let peak = t.norm();
    for ((a, b), v) in t.indices().zip(&t.coeffs) {
        let (k1, k2) = m.act_row(a, b).unwrap();
        if k1 != k2 {
            assert!(v.norm() < 1e-12 * peak, "{a},{b}");
        }
    }
}

#[test]
fn cwt_examples() {
    let grid = TorusGrid::square(9).unwrap();
    let q = ScaleQuadrature::new(-1.0, 1.0, 3, ScaleRule::Trapezoid).unwrap();
    let params = ParamGrid::two_dilation(grid, q).unwrap();
    let w = MotherWavelet::dog_tensor(2.0, None).unwrap();
    let rule = StereoRule::default();
    let bank = AtomBank::build(&w, &params, &rule).unwrap();

    // linearity
    let f1 = inverse_fourier(&random_bandlimited(BandLimit::new(4, 4), 1), grid).unwrap();
    let f2 = inverse_fourier(&random_bandlimited(BandLimit::new(4, 4), 2), grid).unwrap();
    let (al, be) = (Complex64::new(0.5, -1.0), Complex64::new(2.0, 0.25));
    let mix = TorusSignal::new(grid, f1.values.iter().zip(&f2.values).map(|(a, b)| al * a + be * b).collect()).unwrap();
    let (c1, c2, cm) = (
        analyze_with(&f1, &bank, &params).unwrap(),
        analyze_with(&f2, &bank, &params).unwrap(),
        analyze_with(&mix, &bank, &params).unwrap(),
    );
    for ((a, b), m) in c1.values.iter().zip(&c2.values).zip(&cm.values) {
        assert!(close(al * a + be * b, *m, 1e-10));
    }

    // plane-wave oracle: Ψ(ϑ, a) = 2π conj(γ̂_a(n)) e^{i n·ϑ}
    let (n1, n2) = (2, -3);
    let pw = sample(|a, b| plane_wave(n1, n2, a, b) * (2.0 * PI), grid).unwrap();
    let coeffs = analyze_with(&pw, &bank, &params).unwrap();
    let blk = 5;
    let (a1, a2, _, _) = params.block(blk);
    let g_hat = dilated_coefficient(&w, n1, n2, a1, a2, &rule).unwrap();
    for (i, v) in coeffs.block(blk).iter().enumerate() {
        let (t1, t2) = grid.angle(i / 9, i % 9);
        let want = g_hat.conj() * Complex64::from_polar(2.0 * PI, n1 as f64 * t1 + n2 as f64 * t2);
        assert!(close(*v, want, 1e-6));
    }

    // an atom analysed against itself gives its squared norm
    let atom_table = bank.atom_table(&params, blk).unwrap();
    let atom = inverse_fourier(&atom_table, grid).unwrap();
    let self_coeff = analyze_with(&atom, &bank, &params).unwrap().block(blk)[0];
    assert!(close(self_coeff, c(atom.norm().powi(2)), 1e-3));

    let zero = synthesize_with(&analyze_with(&TorusSignal::zeros(grid), &bank, &params).unwrap(), &bank, &bank.grid_spectrum(&params).unwrap()).unwrap();
    assert!(zero.values.iter().all(|v| v.norm() == 0.0));
}

#[test]
fn modular_cwt_only_touches_matching_orbit() {
    let grid = TorusGrid::square(9).unwrap();
    let q = ScaleQuadrature::new(-1.0, 1.0, 2, ScaleRule::Trapezoid).unwrap();
    let params = ParamGrid::modular(grid, q, 4).unwrap();
    let w = MotherWavelet::diagonal_dog(10.0).unwrap();
    let bank = AtomBank::build(&w, &params, &StereoRule { tail: 1e-4, ..Default::default() }).unwrap();
    let psi = inverse_fourier(&project_vg(&random_bandlimited(BandLimit::new(4, 4), 6), 2), grid).unwrap();
    let coeffs = analyze_with(&psi, &bank, &params).unwrap();
    for b in 0..params.blocks() {
        let m = params.block(b).2.unwrap();
        // coset M maps (k, k) to k·(row of M⁻¹); only g = 2 cells may carry energy
        let (c1, c2) = m.inverse().act_row(1, 1).unwrap();
        let reaches = c1.abs().max(c2.abs()) <= 2;
        let energy: f64 = coeffs.block(b).iter().map(|v| v.norm_sqr()).sum();
        if !reaches {
            assert!(energy < 1e-24 * psi.norm().powi(2), "{energy}");
        }
    }
}

#[test]
fn theta_a_against_linear_map() {
    for k in 1..100 {
        let t = PI * k as f64 / 100.0;
        // on (0, π) the small-scale curve sits above the chord aθ
        assert!(dilate_angle(t, 0.1).unwrap() > 0.1 * t);
        assert!(dilate_angle(-t, 0.1).unwrap() < -0.1 * t);
    }
}
