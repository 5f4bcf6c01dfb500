//! Dense polynomial helpers on ascending coefficient vectors.

/// Evaluates a polynomial with ascending coefficients by Horner's scheme.
pub(crate) fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Coefficient vector of the derivative.
pub(crate) fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Coefficient vector of the product.
pub(crate) fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Adds `scale * b` into `a`, growing `a` as needed.
pub(crate) fn add_scaled(a: &mut Vec<f64>, b: &[f64], scale: f64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0.0);
    }
    for (slot, &c) in a.iter_mut().zip(b.iter()) {
        *slot += scale * c;
    }
}

/// k! as a float; exact for every k that fits the 53-bit mantissa.
pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_matches_naive_evaluation() {
        let p = [2.0, -1.0, 0.5, 3.0];
        for &x in &[-1.5f64, 0.0, 0.3, 2.0] {
            let naive: f64 = p
                .iter()
                .enumerate()
                .map(|(k, &c)| c * x.powi(k as i32))
                .sum();
            assert!((eval(&p, x) - naive).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_and_product_coefficients() {
        assert_eq!(derivative(&[5.0, 1.0, 2.0]), vec![1.0, 4.0]);
        // (1 + x)(1 - x) = 1 - x^2
        assert_eq!(mul(&[1.0, 1.0], &[1.0, -1.0]), vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn add_scaled_grows_the_target() {
        let mut a = vec![1.0];
        add_scaled(&mut a, &[0.0, 2.0, 4.0], 0.5);
        assert_eq!(a, vec![1.0, 1.0, 2.0]);
    }

    #[test]
    fn small_factorials_are_exact() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(10), 3_628_800.0);
    }
}
