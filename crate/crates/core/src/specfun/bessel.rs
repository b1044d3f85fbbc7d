use std::f64::consts::PI;

use super::gamma::{rgamma1p, temme_gammas};
use super::{Accuracy, Result, SpecFunError};

/// Below this argument the Temme series supplies the reduced-order Y (or K).
const TEMME_MAX_X: f64 = 2.0;
/// Large-argument expansions are tried from here on (and only when x ≥ 1.5ν²).
pub const ASYMPTOTIC_MIN_X: f64 = 25.0;
/// Largest supported order.
pub const MAX_ORDER: f64 = 50.0;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const RESCALE: f64 = 1e250;
const CF_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum BesselKind {
    J,
    Y,
    I,
    K,
}

/// Values and x-derivatives of a Bessel pair at one (ν, x).
#[derive(Debug, Clone, Copy)]
struct Pair {
    first: f64,
    second: f64,
    first_deriv: f64,
    second_deriv: f64,
}

fn check_args(name: &'static str, nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() || !x.is_finite() {
        return Err(SpecFunError::InvalidArgument(format!(
            "{name}: non-finite input (nu = {nu}, x = {x})"
        )));
    }
    if nu < 0.0 {
        return Err(SpecFunError::InvalidArgument(format!(
            "{name}: order must be non-negative, got {nu}"
        )));
    }
    if nu > MAX_ORDER {
        return Err(SpecFunError::InvalidArgument(format!(
            "{name}: order {nu} outside supported range [0, {MAX_ORDER}]"
        )));
    }
    if x <= 0.0 {
        return Err(SpecFunError::InvalidArgument(format!(
            "{name}: argument must be positive, got {x}"
        )));
    }
    Ok(())
}

fn not_reached(function: &'static str, acc: &Accuracy, terms: usize) -> SpecFunError {
    SpecFunError::AccuracyNotReached {
        function,
        target: acc.target_relative_error,
        terms,
    }
}

fn use_asymptotic(nu: f64, x: f64) -> bool {
    x >= ASYMPTOTIC_MIN_X && x >= 1.5 * nu * nu
}

/// Terms of the large-argument series Σ a_k(ν)/x^k, returned as the even
/// and odd partial sums with alternating signs folded in the way each caller
/// needs. `None` when the series stalls above the requested accuracy.
fn large_x_terms(nu: f64, x: f64, acc: &Accuracy) -> Option<Vec<f64>> {
    let mu = 4.0 * nu * nu;
    let mut terms = vec![1.0];
    let mut t: f64 = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..=acc.max_terms {
        let odd = (2 * k - 1) as f64;
        t *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if t.abs() >= prev {
            break;
        }
        prev = t.abs();
        terms.push(t);
        if t.abs() < EPS * 1e-2 {
            return Some(terms);
        }
    }
    (prev <= acc.target_relative_error * 1e-2).then_some(terms)
}

/// Hankel expansion: (J_ν, Y_ν).
fn jy_hankel(nu: f64, x: f64, acc: &Accuracy) -> Option<(f64, f64)> {
    let terms = large_x_terms(nu, x, acc)?;
    let mut p = 0.0;
    let mut q = 0.0;
    // sum smallest first
    for (k, &t) in terms.iter().enumerate().rev() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
    }
    // cos/sin of x − (ν/2 + 1/4)π without forming the shifted argument
    let phase = (0.5 * nu + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    let norm = (2.0 / (PI * x)).sqrt();
    Some((
        norm * (p * cos_chi - q * sin_chi),
        norm * (p * sin_chi + q * cos_chi),
    ))
}

/// Large-argument expansions of e^{−x}I_ν(x) and e^{x}K_ν(x).
fn ik_scaled_large_x(nu: f64, x: f64, acc: &Accuracy) -> Option<(f64, f64)> {
    let terms = large_x_terms(nu, x, acc)?;
    let mut si = 0.0;
    let mut sk = 0.0;
    for (k, &t) in terms.iter().enumerate().rev() {
        sk += t;
        si += if k % 2 == 0 { t } else { -t };
    }
    Some((si / (2.0 * PI * x).sqrt(), (PI / (2.0 * x)).sqrt() * sk))
}

/// Temme series + Steed continued fractions for J and Y of any order ≥ 0.
fn jy_steed(nu: f64, x: f64, acc: &Accuracy) -> Result<Pair> {
    let nl = if x < TEMME_MAX_X {
        (nu + 0.5) as usize
    } else {
        (nu - x + 1.5).max(0.0) as usize
    };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_ν/J_ν by modified Lentz
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut iters = 0;
    loop {
        iters += 1;
        if iters > CF_MAX_ITER {
            return Err(not_reached("bessel_jy CF1", acc, CF_MAX_ITER));
        }
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    // downward recurrence ν → μ on an unnormalised J
    let mut rjl = isign * 1e-30;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > RESCALE {
            rjl /= RESCALE;
            rjpl /= RESCALE;
            rjl1 /= RESCALE;
            rjp1 /= RESCALE;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, mut rymu, mut ry1);
    if x < TEMME_MAX_X {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2) = temme_gammas(xmu);
        let gampl = rgamma1p(xmu);
        let gammi = rgamma1p(-xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let d = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..=acc.max_terms {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(not_reached("bessel_y Temme series", acc, acc.max_terms));
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // CF2: p + iq = (J' + iY')/(J + iY), Steed's algorithm
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut converged = false;
        for i in 2..=CF_MAX_ITER {
            a += 2.0 * (i - 1) as f64;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(not_reached("bessel_jy CF2", acc, CF_MAX_ITER));
        }
        let gam = (p - f) / q;
        let mut rj = (w / ((p - f) * gam + q)).sqrt();
        if rjl < 0.0 {
            rj = -rj;
        }
        rjmu = rj;
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    let scale = rjmu / rjl;
    let j = rjl1 * scale;
    let jp = rjp1 * scale;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    Ok(Pair {
        first: j,
        second: rymu,
        first_deriv: jp,
        second_deriv: nu * xi * rymu - ry1,
    })
}

/// Temme series + continued fractions for e^{−x}I_ν and e^{x}K_ν and their
/// derivatives (each scaled by the same exponential as its function).
fn ik_steed_scaled(nu: f64, x: f64, acc: &Accuracy) -> Result<Pair> {
    let nl = (nu + 0.5) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    // CF1: I'_ν/I_ν
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut iters = 0;
    loop {
        iters += 1;
        if iters > CF_MAX_ITER {
            return Err(not_reached("bessel_ik CF1", acc, CF_MAX_ITER));
        }
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    let mut ril = 1e-30;
    let mut ripl = h * ril;
    let mut ril1 = ril;
    let mut rip1 = ripl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril.abs() > RESCALE {
            ril /= RESCALE;
            ripl /= RESCALE;
            ril1 /= RESCALE;
            rip1 /= RESCALE;
        }
    }
    let f = ripl / ril;

    // K_μ, K_{μ+1} carrying the factor e^{x}
    let (mut rkmu, mut rk1);
    if x < TEMME_MAX_X {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2) = temme_gammas(xmu);
        let gampl = rgamma1p(xmu);
        let gammi = rgamma1p(-xmu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let e = e.exp();
        let mut p = 0.5 * e / gampl;
        let mut q = 0.5 / (e * gammi);
        let mut c = 1.0;
        let d = x2 * x2;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..=acc.max_terms {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(not_reached("bessel_k Temme series", acc, acc.max_terms));
        }
        let ex = x.exp();
        rkmu = sum * ex;
        rk1 = sum1 * xi2 * ex;
    } else {
        // Thompson–Barnett CF2 with Steed summation
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..=CF_MAX_ITER {
            a -= 2.0 * (i - 1) as f64;
            c = -a * c / i as f64;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(not_reached("bessel_k CF2", acc, CF_MAX_ITER));
        }
        h *= a1;
        rkmu = (PI / (2.0 * x)).sqrt() / s;
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }

    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    let i_val = rimu * ril1 / ril;
    let ip_val = rimu * rip1 / ril;
    for i in 1..=nl {
        let rktemp = (xmu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    Ok(Pair {
        first: i_val,
        second: rkmu,
        first_deriv: ip_val,
        second_deriv: nu * xi * rkmu - rk1,
    })
}

fn jy(nu: f64, x: f64, acc: &Accuracy) -> Result<Pair> {
    if use_asymptotic(nu + 1.0, x) {
        if let (Some((j0, y0)), Some((j1, y1))) =
            (jy_hankel(nu, x, acc), jy_hankel(nu + 1.0, x, acc))
        {
            let r = nu / x;
            return Ok(Pair {
                first: j0,
                second: y0,
                first_deriv: r * j0 - j1,
                second_deriv: r * y0 - y1,
            });
        }
    }
    jy_steed(nu, x, acc)
}

fn ik_scaled(nu: f64, x: f64, acc: &Accuracy) -> Result<Pair> {
    if use_asymptotic(nu + 1.0, x) {
        if let (Some((i0, k0)), Some((i1, k1))) = (
            ik_scaled_large_x(nu, x, acc),
            ik_scaled_large_x(nu + 1.0, x, acc),
        ) {
            let r = nu / x;
            return Ok(Pair {
                first: i0,
                second: k0,
                first_deriv: r * i0 + i1,
                second_deriv: r * k0 - k1,
            });
        }
    }
    ik_steed_scaled(nu, x, acc)
}

/// Bessel function of the first kind J_ν(x), ν ≥ 0, x > 0.
pub fn bessel_j(nu: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    check_args("bessel_j", nu, x)?;
    Ok(jy(nu, x, acc)?.first)
}

/// Bessel function of the second kind Y_ν(x), ν ≥ 0, x > 0.
pub fn bessel_y(nu: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    check_args("bessel_y", nu, x)?;
    Ok(jy(nu, x, acc)?.second)
}

/// e^{−x} I_ν(x).
pub fn bessel_i_scaled(nu: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    check_args("bessel_i_scaled", nu, x)?;
    Ok(ik_scaled(nu, x, acc)?.first)
}

/// e^{x} K_ν(x); the order may be negative (K_{−ν} = K_ν).
pub fn bessel_k_scaled(nu: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    check_args("bessel_k_scaled", nu.abs(), x)?;
    Ok(ik_scaled(nu.abs(), x, acc)?.second)
}

/// Modified Bessel function I_ν(x), ν ≥ 0, x > 0.
pub fn bessel_i(nu: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    let v = bessel_i_scaled(nu, x, acc)? * x.exp();
    if v.is_infinite() {
        return Err(SpecFunError::Overflow("bessel_i"));
    }
    Ok(v)
}

/// Modified Bessel function K_ν(x) for real ν, x > 0.
pub fn bessel_k(nu: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    Ok(bessel_k_scaled(nu, x, acc)? * (-x).exp())
}

/// d/dx of J, Y, I or K at order ν.
///
/// Uses Z'_ν = (ν/x)Z_ν − Z_{ν+1} for J, Y, K and I'_ν = (ν/x)I_ν + I_{ν+1};
/// the continued-fraction path carries the same recurrence internally.
/// Negative orders are accepted only for K.
pub fn bessel_deriv(kind: BesselKind, nu: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    match kind {
        BesselKind::J => {
            check_args("bessel_deriv(J)", nu, x)?;
            Ok(jy(nu, x, acc)?.first_deriv)
        }
        BesselKind::Y => {
            check_args("bessel_deriv(Y)", nu, x)?;
            Ok(jy(nu, x, acc)?.second_deriv)
        }
        BesselKind::I => {
            check_args("bessel_deriv(I)", nu, x)?;
            let v = ik_scaled(nu, x, acc)?.first_deriv * x.exp();
            if v.is_infinite() {
                return Err(SpecFunError::Overflow("bessel_deriv(I)"));
            }
            Ok(v)
        }
        BesselKind::K => {
            check_args("bessel_deriv(K)", nu.abs(), x)?;
            Ok(ik_scaled(nu.abs(), x, acc)?.second_deriv * (-x).exp())
        }
    }
}

/// Logarithmic derivatives (I'_ν/I_ν, K'_ν/K_ν) at x, free of overflow.
pub(crate) fn ik_log_derivs(nu: f64, x: f64, acc: &Accuracy) -> Result<(f64, f64)> {
    check_args("ik_log_derivs", nu.abs(), x)?;
    let p = ik_scaled(nu.abs(), x, acc)?;
    Ok((p.first_deriv / p.first, p.second_deriv / p.second))
}

/// e^{−x}I_ν(x) · e^{x}K_ν(x) = I_ν(x)K_ν(x).
#[cfg(test)]
pub(crate) fn ik_product(nu: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    check_args("ik_product", nu.abs(), x)?;
    let p = ik_scaled(nu.abs(), x, acc)?;
    Ok(p.first * p.second)
}
