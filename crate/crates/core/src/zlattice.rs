//! Small exact integer linear algebra: deciding membership of a target
//! vector in the column span of an integer matrix, with witness
//! coefficients, via column Hermite reduction.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A rectangular integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl ZMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ZMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for k in 0..n {
            *m.at_mut(k, k) = BigInt::from(1);
        }
        m
    }

    pub fn from_columns(cols: &[Vec<BigInt>]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        debug_assert!(cols.iter().all(|c| c.len() == nrows));
        let mut m = Self::zero(nrows, ncols);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn col_submul(&mut self, a: usize, b: usize, q: &BigInt) {
        for r in 0..self.rows {
            let t = self.at(r, b) * q;
            let v = self.at(r, a) - t;
            *self.at_mut(r, a) = v;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for r in 0..self.rows {
            let v = -self.at(r, a).clone();
            *self.at_mut(r, a) = v;
        }
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        debug_assert_eq!(x.len(), self.cols);
        let mut out = vec![BigInt::zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = BigInt::zero();
            for c in 0..self.cols {
                acc += self.at(r, c) * &x[c];
            }
            out[r] = acc;
        }
        out
    }
}

/// Column Hermite reduction H = A·U with U unimodular; pivots positive.
fn column_hnf(a: &ZMatrix) -> (ZMatrix, ZMatrix) {
    let mut h = a.clone();
    let mut u = ZMatrix::identity(a.cols);
    let (rows, cols) = (h.rows, h.cols);
    let mut pivot_col = 0usize;
    for r in 0..rows {
        if pivot_col >= cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for c in pivot_col..cols {
                if !h.at(r, c).is_zero() {
                    best = match best {
                        None => Some(c),
                        Some(b) if h.at(r, c).abs() < h.at(r, b).abs() => Some(c),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            if b != pivot_col {
                h.swap_cols(pivot_col, b);
                u.swap_cols(pivot_col, b);
            }
            let pivot = h.at(r, pivot_col).clone();
            let mut reduced_all = true;
            for c in pivot_col + 1..cols {
                if h.at(r, c).is_zero() {
                    continue;
                }
                // round-to-nearest keeps entries small
                let q = (h.at(r, c) * BigInt::from(2) + &pivot).div_floor(&(&pivot * BigInt::from(2)));
                h.col_submul(c, pivot_col, &q);
                u.col_submul(c, pivot_col, &q);
                if !h.at(r, c).is_zero() {
                    reduced_all = false;
                }
            }
            if reduced_all {
                if h.at(r, pivot_col).is_negative() {
                    h.negate_col(pivot_col);
                    u.negate_col(pivot_col);
                }
                pivot_col += 1;
                break;
            }
        }
    }
    (h, u)
}

/// Decides target ∈ column-span_ℤ(A); returns exact witness coefficients.
pub fn solve(a: &ZMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    debug_assert_eq!(target.len(), a.rows);
    let (h, u) = column_hnf(a);
    let mut y = vec![BigInt::zero(); a.cols];
    let mut residual: Vec<BigInt> = target.to_vec();
    let mut col = 0usize;
    for r in 0..a.rows {
        if col < a.cols && !h.at(r, col).is_zero() {
            let (q, rem) = residual[r].div_rem(h.at(r, col));
            if !rem.is_zero() {
                return None;
            }
            for rr in r..a.rows {
                let t = h.at(rr, col) * &q;
                residual[rr] -= t;
            }
            y[col] = q;
            col += 1;
        } else if !residual[r].is_zero() {
            return None;
        }
    }
    let coeffs = u.mul_vec(&y);
    debug_assert_eq!(a.mul_vec(&coeffs), target.to_vec());
    Some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_and_sublattice() {
        let id = ZMatrix::from_columns(&[big(&[1, 0]), big(&[0, 1])]);
        assert_eq!(solve(&id, &big(&[7, -4])).unwrap(), big(&[7, -4]));
        let two = ZMatrix::from_columns(&[big(&[2, 0]), big(&[0, 2])]);
        assert_eq!(solve(&two, &big(&[1, 0])), None);
        assert_eq!(solve(&two, &big(&[4, -6])).unwrap(), big(&[2, -3]));
    }

    #[test]
    fn augmented_modular_system() {
        // x·(2,3) ≡ (4,6) mod (5, 7): columns (2,3), (5,0), (0,7)
        let m = ZMatrix::from_columns(&[big(&[2, 3]), big(&[5, 0]), big(&[0, 7])]);
        let sol = solve(&m, &big(&[4, 6])).unwrap();
        assert_eq!(m.mul_vec(&sol), big(&[4, 6]));
    }

    #[test]
    fn random_solutions_reverify() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let cols: Vec<Vec<BigInt>> = (0..4)
                .map(|_| big(&[rng.gen_range(-9..=9), rng.gen_range(-9..=9), rng.gen_range(-9..=9)]))
                .collect();
            let m = ZMatrix::from_columns(&cols);
            let x = big(&[
                rng.gen_range(-9..=9),
                rng.gen_range(-9..=9),
                rng.gen_range(-9..=9),
                rng.gen_range(-9..=9),
            ]);
            let t = m.mul_vec(&x);
            let sol = solve(&m, &t).expect("constructed member");
            assert_eq!(m.mul_vec(&sol), t);
            // random target must reverify whenever claimed
            let t2 =
                big(&[rng.gen_range(-30..=30), rng.gen_range(-30..=30), rng.gen_range(-30..=30)]);
            if let Some(sol) = solve(&m, &t2) {
                assert_eq!(m.mul_vec(&sol), t2);
            }
        }
    }
}
