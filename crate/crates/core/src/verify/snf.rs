//! Smith normal form over the integers, with a unimodular certificate.

use crate::matrix::{IntMatrix, Overflow};

/// `left · m · right = diag(factors)`, both transforms unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Invariant factors, non-negative, each dividing the next. Zeros (free
    /// summands) come last.
    pub factors: Vec<i128>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateError {
    Overflow,
    NotDiagonal,
    NotUnimodular { side: &'static str, det: i128 },
    NotDivisibilityChain,
    NegativeFactor,
}

impl SnfResult {
    pub fn diagonal(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(rows, cols);
        for (k, &f) in self.factors.iter().enumerate() {
            d[(k, k)] = f;
        }
        d
    }

    /// Re-checks the certificate against the original matrix.
    pub fn certify(&self, original: &IntMatrix) -> Result<(), CertificateError> {
        let product = self
            .left
            .checked_mul(original)
            .and_then(|lm| lm.checked_mul(&self.right))
            .map_err(|_| CertificateError::Overflow)?;
        if product != self.diagonal(original.rows(), original.cols()) {
            return Err(CertificateError::NotDiagonal);
        }
        for (side, m) in [("left", &self.left), ("right", &self.right)] {
            let det = m.determinant().map_err(|_| CertificateError::Overflow)?;
            if det.abs() != 1 {
                return Err(CertificateError::NotUnimodular { side, det });
            }
        }
        if self.factors.iter().any(|&f| f < 0) {
            return Err(CertificateError::NegativeFactor);
        }
        for w in self.factors.windows(2) {
            let ok = match (w[0], w[1]) {
                (0, b) => b == 0,
                (a, b) => b % a == 0,
            };
            if !ok {
                return Err(CertificateError::NotDivisibilityChain);
            }
        }
        Ok(())
    }
}

fn min_nonzero(a: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in from..a.rows() {
        for c in from..a.cols() {
            let v = a[(r, c)];
            if v != 0 && best.is_none_or(|(br, bc)| v.unsigned_abs() < a[(br, bc)].unsigned_abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

/// Smith normal form by repeated Euclidean pivoting. All arithmetic is
/// checked; exceeding `i128` returns [`Overflow`].
pub fn smith_normal_form(m: &IntMatrix) -> Result<SnfResult, Overflow> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut factors = Vec::with_capacity(rows.min(cols));

    for t in 0..rows.min(cols) {
        while let Some((pr, pc)) = min_nonzero(&a, t) {
            a.swap_rows(t, pr);
            left.swap_rows(t, pr);
            a.swap_cols(t, pc);
            right.swap_cols(t, pc);

            let pivot = a[(t, t)];
            let mut clean = true;
            for r in t + 1..rows {
                let q = a[(r, t)].checked_div(pivot).ok_or(Overflow)?;
                if q != 0 {
                    a.add_row_multiple(r, t, -q)?;
                    left.add_row_multiple(r, t, -q)?;
                }
                clean &= a[(r, t)] == 0;
            }
            for c in t + 1..cols {
                let q = a[(t, c)].checked_div(pivot).ok_or(Overflow)?;
                if q != 0 {
                    a.add_col_multiple(c, t, -q)?;
                    right.add_col_multiple(c, t, -q)?;
                }
                clean &= a[(t, c)] == 0;
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the block
            let offender = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| a[(r, c)].checked_rem(pivot) != Some(0)));
            match offender {
                Some(r) => {
                    a.add_row_multiple(t, r, 1)?;
                    left.add_row_multiple(t, r, 1)?;
                }
                None => break,
            }
        }
        if a[(t, t)] < 0 {
            a.negate_row(t)?;
            left.negate_row(t)?;
        }
        factors.push(a[(t, t)]);
    }
    Ok(SnfResult { factors, left, right })
}

/// Cokernel of a square relation matrix as cyclic orders, `0` for `ℤ`;
/// trivial factors dropped.
pub fn cokernel(m: &IntMatrix) -> Result<Vec<i128>, Overflow> {
    let snf = smith_normal_form(m)?;
    let mut orders: Vec<i128> = snf.factors.into_iter().filter(|&f| f != 1).collect();
    orders.extend(std::iter::repeat_n(0, m.rows().saturating_sub(m.cols())));
    Ok(orders)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn factors(rows: &[&[i128]]) -> Vec<i128> {
        let m = IntMatrix::from_rows(rows);
        let snf = smith_normal_form(&m).unwrap();
        snf.certify(&m).unwrap();
        snf.factors
    }

    #[test]
    fn one_by_one() {
        assert_eq!(factors(&[&[-4]]), vec![4]);
        assert_eq!(factors(&[&[0]]), vec![0]);
        assert_eq!(factors(&[&[1]]), vec![1]);
    }

    #[test]
    fn textbook_cases() {
        assert_eq!(factors(&[&[2, 0], &[0, 3]]), vec![1, 6]);
        assert_eq!(factors(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), vec![2, 6, 12]);
        assert_eq!(factors(&[&[0, 0], &[0, 0]]), vec![0, 0]);
        assert_eq!(factors(&[&[1, 2, 3], &[4, 5, 6]]), vec![1, 3]);
        assert_eq!(factors(&[&[4, 0], &[0, 6], &[0, 0]]), vec![2, 12]);
    }

    #[test]
    fn cokernels() {
        assert_eq!(cokernel(&IntMatrix::from_rows(&[[-4i128]])).unwrap(), vec![4]);
        assert_eq!(cokernel(&IntMatrix::from_rows(&[[0i128]])).unwrap(), vec![0]);
        assert_eq!(cokernel(&IntMatrix::from_rows(&[[-1i128, 1], [1, 0]])).unwrap(), Vec::<i128>::new());
        assert_eq!(cokernel(&IntMatrix::zeros(0, 0)).unwrap(), Vec::<i128>::new());
    }

    #[test]
    fn overflow_is_reported() {
        // coprime diagonal entries whose product does not fit in i128
        let a = 1i128 << 100;
        let b = 3i128.pow(63);
        let m = IntMatrix::from_rows(&[[a, 0], [0, b]]);
        assert_eq!(smith_normal_form(&m), Err(Overflow));
    }

    proptest! {
        #[test]
        fn certificate_holds(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-9i128..=9, 36)) {
            let data: Vec<Vec<i128>> = (0..rows).map(|r| seed[r * 6..r * 6 + cols].to_vec()).collect();
            let m = IntMatrix::from_rows(&data);
            let snf = smith_normal_form(&m).unwrap();
            prop_assert_eq!(snf.certify(&m), Ok(()));
            if m.is_square() {
                let det = m.determinant().unwrap();
                prop_assert_eq!(snf.factors.iter().product::<i128>(), det.abs());
            }
        }
    }
}
