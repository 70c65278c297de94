//! Reference values from `tests/oracle/golden.py` (mpmath, 40 digits),
//! computed from the defining integrals independently of this crate.

use qgamow_core::gamow::{
    gamow_norm_sq, gamow_norm_sq_quadrature, gamow_overlap, gamow_overlap_quadrature, Resonance,
};
use qgamow_core::numkernel::{hyp2f1, upper_incomplete_gamma};
use qgamow_core::qgamow::{
    normalization_a, q_mean_energy_closed, q_mean_energy_quadrature, q_norm_sq_closed,
    q_norm_sq_quadrature, q_overlap_closed, q_overlap_quadrature, q_wavefunction, Method,
    QSpectrum, QState,
};
use qgamow_core::quadrature::integrate_oscillatory;
use qgamow_core::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn state(q: f64, re: f64, im: f64) -> QState {
    QState::new(Resonance::unit(c(re, im)).unwrap(), q).unwrap()
}

fn close(v: f64, want: f64, rel: f64) {
    assert!((v - want).abs() <= rel * want.abs(), "{v} vs {want}");
}

fn close_c(v: Complex64, want: Complex64, rel: f64) {
    assert!((v - want).norm() <= rel * want.norm(), "{v} vs {want}");
}

#[test]
fn hypergeometric_norm_factor() {
    let (q, p) = (1.15f64, c(1.0, -0.1));
    let nu = 2.0 / (q - 1.0);
    let z = (p.re / p.norm()).powi(2);
    let v = hyp2f1(0.5, nu - 0.5, nu + 0.5, c(z, 0.0), 1e-13).unwrap();
    close(v.value.re, 4.493_000_458_482_793_3, 1e-12);
}

#[test]
fn incomplete_gamma_negative_half_order() {
    let v = upper_incomplete_gamma(-0.5, c(1.0, 0.0), 1e-13).unwrap();
    close(v.value.re, 0.178_147_711_781_560_69, 1e-13);
}

#[test]
fn incomplete_gamma_half_order() {
    // Γ(1/2, x) = √π erfc(√x); statrs' erfc is good to about 1e-10, so it
    // serves as a loose independent check next to the frozen mpmath values
    let frozen = [
        (0.3, 0.777_359_311_249_808_05),
        (1.0, 0.278_805_585_280_661_98),
        (2.5, 0.044_926_952_600_007_936),
        (7.0, 0.000_324_023_410_415_128_44),
    ];
    for (x, want) in frozen {
        let v = upper_incomplete_gamma(0.5, c(x, 0.0), 1e-13)
            .unwrap()
            .value
            .re;
        close(v, want, 1e-13);
        let erfc = std::f64::consts::PI.sqrt() * statrs::function::erf::erfc(f64::sqrt(x));
        close(v, erfc, 1e-9);
    }
}

#[test]
fn wavefunction_value() {
    close_c(
        q_wavefunction(&state(1.15, 1.0, -0.1), -3.0),
        c(0.525_526_768_721_291_52, 0.192_465_712_775_024_47),
        1e-13,
    );
}

#[test]
fn norm_values() {
    let s = state(1.15, 1.0, -0.1);
    close(
        q_norm_sq_quadrature(&s, 1e-12).unwrap().value,
        2.407_960_033_091_088_8,
        1e-11,
    );
    let closed = q_norm_sq_closed(&s).unwrap();
    assert_eq!(closed.method, Method::Closed);
    close(closed.value, 2.407_960_033_091_088_8, 1e-8);
    close(normalization_a(&s).unwrap(), 1.551_760_301_429_021_9, 1e-10);
}

#[test]
fn mean_energy_values() {
    let s = state(1.15, 1.0, -0.1);
    close(
        q_mean_energy_quadrature(&s, 1e-12).unwrap().value,
        0.426_531_997_771_459_68,
        1e-10,
    );
    close(
        q_mean_energy_closed(&s).unwrap().value,
        0.426_531_997_771_459_68,
        1e-6,
    );
    let s = state(1.5, 0.0, -0.5);
    close(
        q_mean_energy_closed(&s).unwrap().value,
        -0.097_222_222_222_222_222,
        1e-12,
    );
    close(
        q_mean_energy_quadrature(&s, 1e-12).unwrap().value,
        -0.097_222_222_222_222_222,
        1e-10,
    );
}

#[test]
fn overlap_values() {
    let s = state(1.15, 1.0, -0.1);
    let want = c(-0.947_347_513_706_266_04, 0.260_792_546_995_464_11);
    close_c(
        q_overlap_quadrature(&s, 0.8, 1e-12).unwrap().value,
        want,
        1e-9,
    );
    let peak = QSpectrum::new(s, 1e-12)
        .unwrap()
        .density(1.0, Method::Quadrature)
        .unwrap()
        .value;
    close(peak, 0.841_753_016_448_561_97, 1e-9);

    let closed = q_overlap_closed(&state(1.5, 1.0, -0.5), 1.0).unwrap();
    close_c(
        closed.value,
        c(-0.521_510_378_487_135_61, -0.250_063_816_810_659_72),
        1e-10,
    );
}

#[test]
fn oscillatory_integrator_on_q_envelope() {
    // raw integral of the x < 0 branch with y = -x: -∫ w(-y)^{-μ} e^{iky} dy
    let (q, p, k) = (1.15f64, c(1.0, -0.1), 0.8);
    let eps = q - 1.0;
    let cc = (2.0 * (q + 1.0)).sqrt();
    let mu = 2.0 / eps;
    let env = |y: f64| -(Complex64::new(1.0, 0.0) + Complex64::i() * p * (eps * y / cc)).powf(-mu);
    let r = integrate_oscillatory(env, k, 1e-11);
    assert!(r.converged);
    close_c(
        r.value,
        c(-3.684_884_595_204_190_2, 1.014_401_183_371_464),
        1e-10,
    );
}

#[test]
fn classical_values() {
    let r = Resonance::unit(c(1.0, -0.1)).unwrap();
    close_c(
        gamow_overlap(&r, 0.8),
        c(-0.356_824_823_230_554_22, 0.713_649_646_461_108_45),
        1e-14,
    );
    let q = gamow_overlap_quadrature(&r, 0.8, 1e-11).unwrap();
    close_c(q.value, gamow_overlap(&r, 0.8), 1e-8);
    close(
        gamow_norm_sq_quadrature(&r, 1e-12).value.re,
        gamow_norm_sq(&r).unwrap(),
        1e-10,
    );
}
