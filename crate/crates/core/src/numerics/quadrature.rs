//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature.
//!
//! The integrator works on any small fixed-size value type so that several
//! integrals sharing an expensive weight can be evaluated in one pass.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use nalgebra::Vector2;

use crate::error::{Error, Result};

/// Upper limit, in units of the Gaussian width, where semi-infinite
/// integrands are truncated. `exp(-64) < 2e-28`.
pub const GAUSSIAN_TAIL_CUTOFF: f64 = 8.0;

const INITIAL_SEMIINF_PANELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", "must be > 0"));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::invalid("abs_tol", "must be >= 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::invalid("max_subdivisions", "must be >= 1"));
        }
        Ok(())
    }
}

/// Values the integrator can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    const DIM: usize;
    fn zero() -> Self;
    fn component(&self, i: usize) -> f64;
}

impl QuadValue for f64 {
    const DIM: usize = 1;
    fn zero() -> Self {
        0.0
    }
    fn component(&self, _: usize) -> f64 {
        *self
    }
}

impl QuadValue for Vector2<f64> {
    const DIM: usize = 2;
    fn zero() -> Self {
        Vector2::zeros()
    }
    fn component(&self, i: usize) -> f64 {
        self[i]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature<V> {
    pub value: V,
    pub error: f64,
    pub subdivisions: usize,
}

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

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64) -> Panel<V> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv = [V::zero(); 21];
    for j in 0..10 {
        let dx = half * XGK[j];
        fv[2 * j] = f(center - dx);
        fv[2 * j + 1] = f(center + dx);
    }
    fv[20] = f(center);

    let mut kronrod = fv[20] * WGK[10];
    let mut gauss = V::zero();
    for j in 0..10 {
        let pair = fv[2 * j] + fv[2 * j + 1];
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }

    // QUADPACK error heuristic, applied per component.
    let abs_half = half.abs();
    let mut error: f64 = 0.0;
    for c in 0..V::DIM {
        let mean = 0.5 * kronrod.component(c);
        let mut resasc = WGK[10] * (fv[20].component(c) - mean).abs();
        let mut resabs = WGK[10] * fv[20].component(c).abs();
        for j in 0..10 {
            resasc += WGK[j] * ((fv[2 * j].component(c) - mean).abs() + (fv[2 * j + 1].component(c) - mean).abs());
            resabs += WGK[j] * (fv[2 * j].component(c).abs() + fv[2 * j + 1].component(c).abs());
        }
        resasc *= abs_half;
        resabs *= abs_half;
        let mut err = ((kronrod.component(c) - gauss.component(c)) * half).abs();
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * resabs);
        }
        error = error.max(err);
    }

    Panel {
        a,
        b,
        value: kronrod * half,
        error,
    }
}

fn magnitude<V: QuadValue>(v: &V) -> f64 {
    (0..V::DIM).map(|c| v.component(c).abs()).fold(0.0, f64::max)
}

fn adaptive<V: QuadValue, F: Fn(f64) -> V>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    spec: &QuadratureSpec,
) -> Result<Quadrature<V>> {
    spec.validate()?;
    let mut heap = BinaryHeap::new();
    let width = (b - a) / panels as f64;
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels { b } else { a + width * (i + 1) as f64 };
        heap.push(gauss_kronrod(f, lo, hi));
    }

    let mut subdivisions = 0;
    let mut total = V::zero();
    let mut total_err = 0.0;
    for p in heap.iter() {
        total = total + p.value;
        total_err += p.error;
    }
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * magnitude(&total));
        if total_err <= tol {
            return Ok(finish(heap, subdivisions));
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureDiverged {
                subdivisions,
                estimate: magnitude(&total),
                error: total_err,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Panel cannot be split further in floating point.
            return Err(Error::QuadratureDiverged {
                subdivisions,
                estimate: magnitude(&total),
                error: total_err,
            });
        }
        let left = gauss_kronrod(f, worst.a, mid);
        let right = gauss_kronrod(f, mid, worst.b);
        total = total + (left.value + right.value - worst.value);
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
}

fn finish<V: QuadValue>(heap: BinaryHeap<Panel<V>>, subdivisions: usize) -> Quadrature<V> {
    // Sum left to right so the result does not depend on heap layout.
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = V::zero();
    let mut error = 0.0;
    for p in &panels {
        value = value + p.value;
        error += p.error;
    }
    Quadrature {
        value,
        error,
        subdivisions,
    }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<V, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    adaptive(&f, a, b, 1, spec)
}

/// Integrate a Gaussian-damped integrand over `[0, ∞)`.
///
/// The integrand must be expressed in units where its envelope decays at
/// least like `exp(-x²)`; the range is truncated at [`GAUSSIAN_TAIL_CUTOFF`].
pub fn integrate_semiinf<V, F>(f: F, spec: &QuadratureSpec) -> Result<Quadrature<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    adaptive(&f, 0.0, GAUSSIAN_TAIL_CUTOFF, INITIAL_SEMIINF_PANELS, spec)
}
