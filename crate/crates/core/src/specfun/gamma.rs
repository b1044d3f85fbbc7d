use std::f64::consts::PI;

use super::{Result, SpecFunError};

/// Taylor coefficients of 1/Γ(1+z) about z = 0.
#[allow(clippy::excessive_precision)]
const RGAMMA1P: [f64; 29] = [
    1.0,
    0.57721566490153286,
    -0.65587807152025388,
    -0.042002635034095236,
    0.16653861138229149,
    -0.042197734555544337,
    -0.0096219715278769736,
    0.0072189432466630995,
    -0.0011651675918590651,
    -0.00021524167411495097,
    0.00012805028238811619,
    -0.000020134854780788239,
    -0.0000012504934821426707,
    0.0000011330272319816959,
    -0.00000020563384169776071,
    0.0000000061160951044814158,
    0.0000000050020076444692229,
    -0.0000000011812745704870201,
    0.00000000010434267116911005,
    0.0000000000077822634399050713,
    -0.0000000000036968056186422057,
    0.0000000000005100370287454476,
    -0.000000000000020583260535665068,
    -0.000000000000005348122539423018,
    0.0000000000000012267786282382608,
    -0.00000000000000011812593016974588,
    0.0000000000000000011866922547516003,
    0.0000000000000000014123806553180318,
    -0.00000000000000000022987456844353702,
];

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// 1/Γ(1+z) for |z| ≤ 1/2, by its Taylor series.
pub(crate) fn rgamma1p(z: f64) -> f64 {
    debug_assert!(z.abs() <= 0.5 + 1e-12);
    RGAMMA1P.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// Odd and even parts of 1/Γ(1+z) needed by the Temme series:
/// `(gam1, gam2)` with gam1 = (1/Γ(1−μ) − 1/Γ(1+μ))/(2μ) and
/// gam2 = (1/Γ(1−μ) + 1/Γ(1+μ))/2, both free of cancellation at μ → 0.
pub(crate) fn temme_gammas(mu: f64) -> (f64, f64) {
    let mu2 = mu * mu;
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, &c) in RGAMMA1P.iter().enumerate().rev() {
        if i % 2 == 1 {
            odd = odd * mu2 + c;
        } else {
            even = even * mu2 + c;
        }
    }
    (-odd, even)
}

/// sin(πx) with exact argument reduction, so integers give exact zeros.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    let (r, sign) = if r > 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

fn lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * sum
}

/// Γ(x) for real x. Poles at zero and negative integers are errors.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(SpecFunError::InvalidArgument(format!("gamma({x})")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(SpecFunError::GammaPole(x));
    }
    if x < 0.5 {
        // reflection
        let s = sin_pi(x);
        return Ok(PI / (s * gamma(1.0 - x)?));
    }
    if x <= 1.5 {
        return Ok(1.0 / rgamma1p(x - 1.0));
    }
    if x <= 10.0 {
        let mut y = x;
        let mut prod = 1.0;
        while y > 1.5 {
            y -= 1.0;
            prod *= y;
        }
        return Ok(prod / rgamma1p(y - 1.0));
    }
    if x > 171.7 {
        return Err(SpecFunError::Overflow("gamma"));
    }
    Ok(lanczos(x))
}
