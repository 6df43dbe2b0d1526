//! Error function and its inverse.
//!
//! `erf` uses the everywhere-positive series
//! `erf(x) = 2/√π · e^{-x²} · Σ 2ⁿ x^{2n+1} / (2n+1)!!` for |x| < 3 and
//! the Laplace continued fraction for `erfc` beyond, both accurate to a few
//! ulp. `argerf` starts from Giles' single-precision polynomial and polishes
//! with Halley steps on `erf` (or on `erfc` in the tails, where `1 - y` is
//! exact).

use crate::error::{Error, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const SERIES_LIMIT: f64 = 3.0;

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term.abs() <= sum.abs() * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

/// erfc for x >= SERIES_LIMIT via modified Lentz on
/// erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …)))).
fn erfc_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64 * 0.5;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (f * std::f64::consts::PI.sqrt())
}

pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT {
        erf_series(ax)
    } else if ax.is_infinite() {
        1.0
    } else {
        1.0 - erfc_cf(ax)
    };
    v.copysign(x)
}

pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < SERIES_LIMIT {
        // absolute accuracy only; erfc(3) ~ 2e-5
        1.0 - erf_series(x)
    } else if x.is_infinite() {
        0.0
    } else {
        erfc_cf(x)
    }
}

/// Giles (2010) single-precision inverse error function.
fn argerf_guess(y: f64) -> f64 {
    let mut w = -((1.0 - y) * (1.0 + y)).ln();
    let p;
    if w < 5.0 {
        w -= 2.5;
        let mut q = 2.810_226_36e-08;
        q = 3.432_739_39e-07 + q * w;
        q = -3.523_387_7e-06 + q * w;
        q = -4.391_506_54e-06 + q * w;
        q = 0.000_218_580_87 + q * w;
        q = -0.001_253_725_03 + q * w;
        q = -0.004_177_681_64 + q * w;
        q = 0.246_640_727 + q * w;
        p = 1.501_409_41 + q * w;
    } else {
        w = w.sqrt() - 3.0;
        let mut q = -0.000_200_214_257;
        q = 0.000_100_950_558 + q * w;
        q = 0.001_349_343_22 + q * w;
        q = -0.003_673_428_44 + q * w;
        q = 0.005_739_507_73 + q * w;
        q = -0.007_622_461_3 + q * w;
        q = 0.009_438_870_47 + q * w;
        q = 1.001_674_06 + q * w;
        p = 2.832_976_82 + q * w;
    }
    p * y
}

/// Inverse of `erf` on (-1, 1).
pub fn argerf(y: f64) -> Result<f64> {
    if !(y > -1.0 && y < 1.0) {
        return Err(Error::Domain(format!("argerf requires |y| < 1, got {y}")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let ay = y.abs();
    let tail = ay > 0.5;
    let target_c = 1.0 - ay;
    let mut x = argerf_guess(ay);
    for _ in 0..50 {
        // f(x) = erf(x) - ay = target_c - erfc(x)
        let f = if tail {
            target_c - erfc(x)
        } else {
            erf(x) - ay
        };
        let fp = FRAC_2_SQRT_PI * (-x * x).exp();
        if fp == 0.0 {
            break;
        }
        let newton = f / fp;
        // Halley correction with f''/f' = -2x
        let dx = newton / (1.0 + x * newton);
        x -= dx;
        if dx.abs() <= 1e-16 * x.abs() {
            break;
        }
    }
    Ok(x.copysign(y))
}
