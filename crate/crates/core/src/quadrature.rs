//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error meets `max(abs_tol, rel_tol·|I|)`. Subdivision order is fixed, so
//! results are deterministic.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
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

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// One 21-point rule on [a, b]: (Kronrod value, error estimate).
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut fv = [(0.0, 0.0); 10];
    for (j, x) in XGK.iter().take(10).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let result = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_sum);
    }
    (result, err)
}

impl Quadrature {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    /// Integrates `f` over the union of consecutive `breakpoints` intervals.
    /// Breakpoints let callers seed the subdivision at known features.
    pub fn integrate_with_breaks<F>(&self, f: F, breakpoints: &[f64]) -> Result<Estimate>
    where
        F: Fn(f64) -> f64,
    {
        assert!(breakpoints.len() >= 2);
        let mut parts: Vec<(f64, f64, f64, f64)> = breakpoints
            .windows(2)
            .map(|w| {
                let (v, e) = gk21(&f, w[0], w[1]);
                (w[0], w[1], v, e)
            })
            .collect();
        loop {
            let value: f64 = parts.iter().map(|p| p.2).sum();
            let error: f64 = parts.iter().map(|p| p.3).sum();
            let target = self.abs_tol.max(self.rel_tol * value.abs());
            if !value.is_finite() {
                return Err(Error::NonFinite("quadrature"));
            }
            if error <= target {
                return Ok(Estimate {
                    value,
                    error,
                    intervals: parts.len(),
                });
            }
            if parts.len() >= self.max_intervals {
                return Err(Error::Quadrature { value, error });
            }
            // first index of the largest error keeps the order deterministic
            let (idx, _) =
                parts.iter().enumerate().fold(
                    (0, f64::NEG_INFINITY),
                    |best, (i, p)| {
                        if p.3 > best.1 {
                            (i, p.3)
                        } else {
                            best
                        }
                    },
                );
            let (a, b, _, _) = parts[idx];
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                return Err(Error::Quadrature { value, error });
            }
            let (v1, e1) = gk21(&f, a, mid);
            let (v2, e2) = gk21(&f, mid, b);
            parts[idx] = (a, mid, v1, e1);
            parts.insert(idx + 1, (mid, b, v2, e2));
        }
    }

    pub fn integrate<F>(&self, f: F, a: f64, b: f64) -> Result<Estimate>
    where
        F: Fn(f64) -> f64,
    {
        self.integrate_with_breaks(f, &[a, b])
    }
}
