use super::data::Dataset;
use super::polynomial::MomentPolynomial;
use super::term::LabeledTerm;
use crate::error::{Error, Result};
use crate::lattice::falling_factorial;
use crate::scalar::Scalar;

/// The U-statistic for `μ_π`: the average over injective assignments of
/// distinct rows to the blocks of `term` of the product of block values.
///
/// Cost grows like `N^{#π}`.
pub fn symmetric_statistic<T: Scalar>(data: &Dataset<T>, term: &LabeledTerm) -> Result<T> {
    let k = term.block_count();
    let n = data.n();
    if n < k {
        return Err(Error::Infeasible(format!(
            "{k} blocks need at least {k} distinct samples, have N = {n}"
        )));
    }
    if k == 0 {
        return Ok(T::one());
    }
    for block in term.blocks() {
        data.check_labels(block)?;
    }
    let values: Vec<Vec<T>> = term.blocks().iter().map(|b| data.block_products(b)).collect();

    let mut used = vec![false; n];
    let mut total = T::zero();
    fn rec<T: Scalar>(values: &[Vec<T>], used: &mut [bool], acc: T, total: &mut T) {
        let Some((first, rest)) = values.split_first() else {
            *total += acc;
            return;
        };
        for i in 0..used.len() {
            if used[i] || first[i].is_zero() {
                continue;
            }
            used[i] = true;
            rec(rest, used, acc.clone() * first[i].clone(), total);
            used[i] = false;
        }
    }
    rec(&values, &mut used, T::one(), &mut total);
    Ok(total / T::from_bigint(&falling_factorial(n as u64, k as u64)))
}

/// `Σ c_π · symmetric_statistic(π)`: an unbiased estimator of the
/// population value of `f`.
pub fn unbiased_evaluate<T: Scalar>(f: &MomentPolynomial<T>, data: &Dataset<T>) -> Result<T> {
    if data.d() != f.d() {
        return Err(Error::Dimension { expected: f.d(), found: data.d() });
    }
    let mut total = T::zero();
    for (term, c) in f.terms() {
        total += c.clone() * symmetric_statistic(data, term)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::data::empirical_moment;
    use crate::scalar::Rational;

    fn q(p: i64) -> Rational {
        Rational::from_integer(p.into())
    }

    fn term(blocks: &[&[u32]]) -> LabeledTerm {
        LabeledTerm::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    fn data(rows: &[&[i64]]) -> Dataset<Rational> {
        Dataset::new(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn two_point_examples() {
        let x = data(&[&[1], &[3]]);
        assert_eq!(symmetric_statistic(&x, &term(&[&[0], &[0]])).unwrap(), q(3));
        assert_eq!(
            symmetric_statistic(&x, &term(&[&[0, 0]])).unwrap(),
            empirical_moment(&x, &[0, 0]).unwrap()
        );
        let too_many = term(&[&[0], &[0], &[0]]);
        assert!(matches!(symmetric_statistic(&x, &too_many), Err(Error::Infeasible(_))));

        let variance = MomentPolynomial::from_terms(1, [(term(&[&[0, 0]]), q(1)), (term(&[&[0], &[0]]), q(-1))])
            .unwrap();
        assert_eq!(unbiased_evaluate(&variance, &x).unwrap(), q(2));
    }

    #[test]
    fn mixed_labels_by_hand() {
        // Rows (a, b): (1, 2), (3, 5), (0, 7). Pairs i != j of a_i * b_j.
        let x = data(&[&[1, 2], &[3, 5], &[0, 7]]);
        let expected = Rational::new((1 * 5 + 1 * 7 + 3 * 2 + 3 * 7).into(), 6.into());
        assert_eq!(symmetric_statistic(&x, &term(&[&[0], &[1]])).unwrap(), expected);
    }

    #[test]
    fn large_samples_approach_plug_in() {
        // Rows alternate 1, 3: plug-in (x0)(x0) is 4, the U-statistic is
        // ((Σx)² - Σx²)/(N(N-1)) = (4N² - 5N)/(N² - N).
        for n in [2usize, 10, 100] {
            let rows: Vec<Vec<Rational>> = (0..n).map(|i| vec![q(if i % 2 == 0 { 1 } else { 3 })]).collect();
            let x = Dataset::new(rows).unwrap();
            let n_ = n as i64;
            let expected = Rational::new((4 * n_ * n_ - 5 * n_).into(), (n_ * n_ - n_).into());
            assert_eq!(symmetric_statistic(&x, &term(&[&[0], &[0]])).unwrap(), expected);
        }
    }
}
