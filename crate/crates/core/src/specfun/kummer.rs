use super::{Accuracy, Result, SpecFunError};

/// Confluent hypergeometric function ₁F₁(a; b; x) for real arguments.
///
/// Negative x goes through Kummer's transformation
/// ₁F₁(a; b; x) = eˣ ₁F₁(b − a; b; −x) so the summed series never
/// alternates because of the argument sign.
pub fn kummer_1f1(a: f64, b: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && x.is_finite()) {
        return Err(SpecFunError::InvalidArgument(format!(
            "kummer_1f1({a}, {b}, {x})"
        )));
    }
    if b <= 0.0 && b == b.floor() {
        return Err(SpecFunError::InvalidB(b));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < 0.0 {
        let s = series(b - a, b, -x, acc)?;
        return Ok(x.exp() * s);
    }
    series(a, b, x, acc)
}

fn series(a: f64, b: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut largest = 1.0_f64;
    for k in 0..acc.max_terms {
        let kf = k as f64;
        term *= (a + kf) * x / ((b + kf) * (kf + 1.0));
        if term == 0.0 {
            // a is a non-positive integer: polynomial
            return Ok(sum);
        }
        sum += term;
        largest = largest.max(term.abs());
        // past the peak of the terms and below rounding level
        if kf + 1.0 > x && term.abs() <= f64::EPSILON * 0.5 * sum.abs() {
            let loss = largest * f64::EPSILON / sum.abs();
            if loss > acc.target_relative_error {
                return Err(SpecFunError::AccuracyNotReached {
                    function: "kummer_1f1",
                    target: acc.target_relative_error,
                    terms: k + 1,
                });
            }
            return Ok(sum);
        }
    }
    Err(SpecFunError::AccuracyNotReached {
        function: "kummer_1f1",
        target: acc.target_relative_error,
        terms: acc.max_terms,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_forms() {
        let acc = Accuracy::default();
        assert_eq!(kummer_1f1(0.75, 2.5, 0.0, &acc).unwrap(), 1.0);
        assert_relative_eq!(
            kummer_1f1(1.0, 2.0, 1.0, &acc).unwrap(),
            1.7182818284590452,
            max_relative = 1e-15
        );
        // ₁F₁(a; a; x) = eˣ
        assert_relative_eq!(kummer_1f1(0.3, 0.3, -7.5, &acc).unwrap(), (-7.5f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn reference_value() {
        // 40-digit series evaluation
        let acc = Accuracy::default();
        assert_relative_eq!(
            kummer_1f1(0.75, 2.5, -3.2, &acc).unwrap(),
            0.49074553872769053300,
            max_relative = 1e-14
        );
    }

    #[test]
    fn polynomial_case() {
        // ₁F₁(−2; b; x) = 1 − 2x/b + x²/(b(b+1))
        let acc = Accuracy::default();
        let (b, x) = (1.5, 2.0);
        let expect = 1.0 - 2.0 * x / b + x * x / (b * (b + 1.0));
        assert_relative_eq!(kummer_1f1(-2.0, b, x, &acc).unwrap(), expect, max_relative = 1e-15);
    }

    #[test]
    fn invalid_b_and_truncation() {
        let acc = Accuracy::default();
        assert_eq!(kummer_1f1(0.5, 0.0, 1.0, &acc), Err(SpecFunError::InvalidB(0.0)));
        assert_eq!(kummer_1f1(0.5, -2.0, 1.0, &acc), Err(SpecFunError::InvalidB(-2.0)));
        let tight = Accuracy::new(1e-12, 5).unwrap();
        assert!(matches!(
            kummer_1f1(0.5, 1.5, 10.0, &tight),
            Err(SpecFunError::AccuracyNotReached { .. })
        ));
    }
}
