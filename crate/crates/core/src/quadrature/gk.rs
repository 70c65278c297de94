//! Globally adaptive 21-point Gauss-Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::{QuadOptions, QuadResult};

const EPS: f64 = f64::EPSILON;

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_515_414,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    /// Error is already at the rounding floor; splitting cannot help.
    floor: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut resabs = fc.norm() * WGK[10];
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    for (j, &x) in XGK[..10].iter().enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        values[j] = (f1, f2);
        kron += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut resasc = WGK[10] * (fc - mean).norm();
    for (j, (f1, f2)) in values.iter().enumerate() {
        resasc += WGK[j] * ((f1 - mean).norm() + (f2 - mean).norm());
    }
    let value = kron * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((kron - gauss) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor_err = 50.0 * EPS * resabs;
    let floor = err <= floor_err;
    if resabs > f64::MIN_POSITIVE / (50.0 * EPS) {
        err = err.max(floor_err);
    }
    if !(value.re.is_finite() && value.im.is_finite()) || err.is_nan() {
        err = f64::INFINITY;
    }
    Panel {
        a,
        b,
        value,
        err,
        floor,
    }
}

/// ∫_a^b f(x) dx by globally adaptive bisection of the worst panel.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> QuadResult
where
    F: Fn(f64) -> Complex64,
{
    if a == b {
        return QuadResult {
            value: Complex64::new(0.0, 0.0),
            abs_error_estimate: 0.0,
            evaluations: 1,
            converged: true,
        };
    }
    let first = kronrod(&f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    let mut settled: Vec<Panel> = Vec::new();
    let mut total_err = first.err;
    let mut total = first.value;
    let mut panels = 1;
    if first.floor {
        settled.push(first);
    } else {
        heap.push(first);
    }

    // the rounding term matches the one added to the final estimate
    while total_err + EPS * panels as f64 * total.norm() > opts.tol
        && evaluations + 42 <= opts.max_evaluations
    {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            settled.push(worst);
            continue;
        }
        let left = kronrod(&f, worst.a, mid);
        let right = kronrod(&f, mid, worst.b);
        evaluations += 42;
        total_err += left.err + right.err - worst.err;
        total += left.value + right.value - worst.value;
        panels += 1;
        for child in [left, right] {
            if child.floor {
                settled.push(child);
            } else {
                heap.push(child);
            }
        }
    }

    // Sum in interval order so the result does not depend on heap layout.
    settled.extend(heap);
    settled.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for p in &settled {
        value += p.value;
        err += p.err;
    }
    err += EPS * settled.len() as f64 * value.norm();
    QuadResult {
        value,
        abs_error_estimate: err,
        evaluations,
        converged: err <= opts.tol,
    }
}
