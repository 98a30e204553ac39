use super::sampling::{check_n, sampling_matrix};
use crate::error::Result;
use crate::lattice::falling_factorial;
use crate::lattice::numbers::power;
use crate::scalar::Scalar;

/// `falling(N, m) / N^m`, the smallest diagonal entry of `S`.
pub fn gamma_exact<T: Scalar>(m: usize, n: u64) -> T {
    T::from_ratio(&falling_factorial(n, m as u64), &power(n, m as u64))
}

/// `falling(N, m) / N^m` as `Σ log(1 − i/N)`, safe for large `m` and `N`.
pub fn gamma_ratio(m: usize, n: u64) -> f64 {
    log_gamma_ratio(m, n).exp()
}

pub fn log_gamma_ratio(m: usize, n: u64) -> f64 {
    if m as u64 > n {
        return f64::NEG_INFINITY;
    }
    let n = n as f64;
    (1..m).fold(0.0, |acc, i| acc + (-(i as f64) / n).ln_1p())
}

/// Closed form of `‖Id − S‖₁`: `2(1 − falling(N, m)/N^m)` when `m ≤ N`,
/// otherwise 2.
pub fn one_norm_closed_form<T: Scalar>(m: usize, n: u64) -> T {
    let two = T::from_i64(2);
    if m as u64 > n {
        return two;
    }
    two * (T::one() - gamma_exact::<T>(m, n))
}

/// The closed form in floating point for any `m`.
pub fn one_norm_closed_form_f64(m: usize, n: u64) -> f64 {
    if m as u64 > n {
        return 2.0;
    }
    -2.0 * log_gamma_ratio(m, n).exp_m1()
}

/// `‖Id − S‖₁` by summing absolute column entries of the lattice matrix.
pub fn one_norm_direct<T: Scalar>(m: usize, n: u64) -> Result<T> {
    check_n(n)?;
    Ok(sampling_matrix::<T>(m, n)?.id_minus().max_abs_column_sum())
}

/// `N = max(⌈α m²⌉, m + 1)`, the sample size of the linear regime.
pub fn linear_regime_n(m: usize, alpha: f64) -> u64 {
    let scaled = (alpha * (m * m) as f64).ceil() as u64;
    scaled.max(m as u64 + 1)
}

/// Whether `gamma_ratio(m, N) ≥ exp(−1/4) exp(−1/α)` at `N = linear_regime_n(m, α)`.
pub fn linear_regime_check(m: usize, alpha: f64) -> bool {
    log_gamma_ratio(m, linear_regime_n(m, alpha)) >= -0.25 - 1.0 / alpha
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(one_norm_closed_form::<Rational>(2, 2), q(1, 1));
        assert_eq!(one_norm_closed_form::<Rational>(3, 2), q(2, 1));
        assert_eq!(one_norm_closed_form::<Rational>(1, 9), q(0, 1));
        assert!((one_norm_closed_form_f64(3, 5) - one_norm_closed_form::<Rational>(3, 5).to_f64()).abs() < 1e-15);
    }

    #[test]
    fn direct_matches_closed_form_when_m_at_most_n() {
        for m in 1..=5 {
            for n in m as u64..=8 {
                assert_eq!(one_norm_direct::<Rational>(m, n).unwrap(), one_norm_closed_form::<Rational>(m, n));
            }
        }
    }

    #[test]
    fn direct_norm_is_two_when_m_exceeds_n() {
        for m in 2..=5 {
            for n in 1..m as u64 {
                assert_eq!(one_norm_direct::<Rational>(m, n).unwrap(), q(2, 1), "m={m} N={n}");
            }
        }
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_ratio(1, 5), 1.0);
        assert!((gamma_ratio(3, 4) - 6.0 / 16.0).abs() < 1e-15);
        assert_eq!(gamma_ratio(5, 3), 0.0);
        let g = gamma_ratio(10, 100);
        assert!(g >= (-0.25f64 - 1.0).exp() && g < 0.75);
        assert!(linear_regime_check(10, 1.0));
        for m in 1..=50 {
            assert!(gamma_ratio(m, linear_regime_n(m, 8.0)) >= 0.75, "m={m}");
        }
    }
}
