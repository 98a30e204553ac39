//! Exact counting functions on set partitions.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Number of set partitions of an `m`-element set.
pub fn bell(m: usize) -> BigInt {
    // Bell triangle: each row starts with the last entry of the previous row.
    let mut row = vec![BigInt::one()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().cloned().unwrap_or_else(BigInt::one));
        for value in &row {
            let v = next.last().unwrap() + value;
            next.push(v);
        }
        row = next;
    }
    row[0].clone()
}

/// Stirling number of the second kind: partitions of `n` elements into `k`
/// nonempty blocks.
pub fn stirling2(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    if n == 0 {
        return BigInt::one();
    }
    if k == 0 {
        return BigInt::zero();
    }
    let mut prev = vec![BigInt::zero(); k + 1];
    prev[0] = BigInt::one();
    for i in 1..=n {
        let mut curr = vec![BigInt::zero(); k + 1];
        for j in 1..=i.min(k) {
            curr[j] = &prev[j - 1] + &prev[j] * BigInt::from(j);
        }
        prev = curr;
    }
    prev[k].clone()
}

/// `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

pub fn power(n: u64, k: u64) -> BigInt {
    num_traits::pow(BigInt::from(n), k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn bell_values() {
        let expected = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
        for (m, &b) in expected.iter().enumerate() {
            assert_eq!(bell(m), big(b), "Bell({m})");
        }
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(4, 2), big(7));
        assert_eq!(stirling2(5, 3), big(25));
        assert_eq!(stirling2(6, 2), big(31));
        assert_eq!(stirling2(3, 3), big(1));
        assert_eq!(stirling2(3, 4), big(0));
        assert_eq!(stirling2(0, 0), big(1));
    }

    #[test]
    fn stirling_rows_sum_to_bell() {
        for m in 0..=12 {
            let total: BigInt = (0..=m).map(|k| stirling2(m, k)).sum();
            assert_eq!(total, bell(m), "m = {m}");
        }
    }

    #[test]
    fn falling_factorial_values() {
        assert_eq!(falling_factorial(4, 2), big(12));
        assert_eq!(falling_factorial(2, 3), big(0));
        assert_eq!(falling_factorial(7, 0), big(1));
        assert_eq!(falling_factorial(5, 5), big(120));
    }

    #[test]
    fn power_splits_by_block_count() {
        // N^m = sum_k S(m, k) N!/(N-k)!
        for m in 1..=8usize {
            for n in 1..=20u64 {
                let rhs: BigInt = (1..=m)
                    .map(|k| stirling2(m, k) * falling_factorial(n, k as u64))
                    .sum();
                assert_eq!(power(n, m as u64), rhs, "m = {m}, N = {n}");
            }
        }
    }
}
