//! Exact arithmetic and linear algebra over the Euclidean domain ℤ[i].
//!
//! Scalars carry the CM action on the curve family y² = x³ − d²x, and the
//! module machinery here decides membership in finitely generated
//! ℤ[i]-submodules via Hermite normal form. `prop62_solve` is the congruence
//! solver that produces witness coefficients (r₁, r₂, r₃) for the
//! counterexample harness.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A Gaussian integer a + bi with arbitrary-precision components.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

/// Errors from ℤ[i] arithmetic entry points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GiError {
    DivisionByZero,
    DimensionMismatch,
}

impl fmt::Display for GiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GiError::DivisionByZero => write!(f, "division by zero in Z[i]"),
            GiError::DimensionMismatch => write!(f, "matrix/vector dimension mismatch"),
        }
    }
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt { re: re.into(), im: im.into() }
    }

    pub fn zero() -> Self {
        GaussianInt { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn one() -> Self {
        GaussianInt { re: BigInt::one(), im: BigInt::zero() }
    }

    pub fn i() -> Self {
        GaussianInt { re: BigInt::zero(), im: BigInt::one() }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        GaussianInt { re: n.into(), im: BigInt::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// N(a+bi) = a² + b²; zero iff the element is zero.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianInt { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    fn mul_i(&self) -> Self {
        // i·(a+bi) = -b + ai
        GaussianInt { re: -self.im.clone(), im: self.re.clone() }
    }

    /// The unique associate u·z, u ∈ {±1, ±i}, with re > 0 and im ≥ 0 (or 0).
    pub fn canonical_assoc(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut z = self.clone();
        for _ in 0..4 {
            if z.re.is_positive() && !z.im.is_negative() {
                return z;
            }
            z = z.mul_i();
        }
        unreachable!("some rotation of a nonzero element lands in the first quadrant")
    }

    /// True when `self` divides `other` exactly.
    pub fn divides(&self, other: &GaussianInt) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.exact_div(self).is_some()
    }

    /// Exact quotient other = q·self, if it exists.
    pub fn exact_div(&self, divisor: &GaussianInt) -> Option<GaussianInt> {
        if divisor.is_zero() {
            return None;
        }
        // self / divisor = self·conj(divisor) / N(divisor)
        let num = self * &divisor.conj();
        let n = divisor.norm();
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Some(GaussianInt { re: qr, im: qi })
        } else {
            None
        }
    }
}

fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    // nearest integer to n/d with d > 0; halves round toward +infinity
    debug_assert!(d.is_positive());
    ((n << 1u32) + d).div_floor(&(d << 1u32))
}

/// Euclidean division: a = q·b + r with N(r) ≤ N(b)/2.
///
/// Each coordinate of a/b is rounded to the nearest integer, which gives the
/// Euclidean property with constant 1/2.
pub fn gi_divrem(a: &GaussianInt, b: &GaussianInt) -> Result<(GaussianInt, GaussianInt), GiError> {
    if b.is_zero() {
        return Err(GiError::DivisionByZero);
    }
    let num = a * &b.conj();
    let n = b.norm();
    let q = GaussianInt { re: round_div(&num.re, &n), im: round_div(&num.im, &n) };
    let r = a - &(&q * b);
    debug_assert!(r.norm() * 2 <= b.norm(), "remainder norm exceeds N(b)/2");
    Ok((q, r))
}

/// `a mod m`, reduced to the residue produced by `gi_divrem`.
pub fn gi_mod(a: &GaussianInt, m: &GaussianInt) -> Result<GaussianInt, GiError> {
    Ok(gi_divrem(a, m)?.1)
}

/// Canonical associate of a greatest common divisor; gcd(0, 0) = 0.
pub fn gi_gcd(a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let (_, r) = gi_divrem(&x, &y).expect("y nonzero");
        x = y;
        y = r;
    }
    x.canonical_assoc()
}

/// Extended gcd: returns (g, u, v) with g = u·a + v·b and g the canonical
/// associate of gcd(a, b).
pub fn gi_gcd_ext(a: &GaussianInt, b: &GaussianInt) -> (GaussianInt, GaussianInt, GaussianInt) {
    let mut x = a.clone();
    let mut y = b.clone();
    let (mut u0, mut u1) = (GaussianInt::one(), GaussianInt::zero());
    let (mut v0, mut v1) = (GaussianInt::zero(), GaussianInt::one());
    while !y.is_zero() {
        let (q, r) = gi_divrem(&x, &y).expect("y nonzero");
        x = y;
        y = r;
        let nu = &u0 - &(&q * &u1);
        u0 = u1;
        u1 = nu;
        let nv = &v0 - &(&q * &v1);
        v0 = v1;
        v1 = nv;
    }
    // normalize by the unit carrying x to its canonical associate
    let g = x.canonical_assoc();
    if x.is_zero() {
        return (g, GaussianInt::zero(), GaussianInt::zero());
    }
    let unit = g.exact_div(&x).expect("canonical associate differs by a unit");
    (g, &unit * &u0, &unit * &v0)
}

/// Solves a·x ≡ b (mod m); empty when gcd(a, m) ∤ b.
///
/// The returned solution is reduced to the `gi_divrem` residue system mod m.
pub fn gi_solve_linear(
    a: &GaussianInt,
    b: &GaussianInt,
    m: &GaussianInt,
) -> Result<Option<GaussianInt>, GiError> {
    if m.is_zero() {
        return Err(GiError::DivisionByZero);
    }
    let (g, u, _) = gi_gcd_ext(a, m);
    if g.is_zero() {
        // a ≡ 0 and m = 0 is excluded, so g = 0 means a = 0: solvable iff b ≡ 0
        return Ok(if gi_mod(b, m)?.is_zero() { Some(GaussianInt::zero()) } else { None });
    }
    match b.exact_div(&g) {
        None => Ok(None),
        Some(b_over_g) => {
            let x = &u * &b_over_g;
            Ok(Some(gi_mod(&x, m)?))
        }
    }
}

/// A rectangular matrix of Gaussian integers, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct GiMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianInt>,
}

impl GiMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<GaussianInt>) -> Result<Self, GiError> {
        if entries.len() != rows * cols {
            return Err(GiError::DimensionMismatch);
        }
        Ok(GiMatrix { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        GiMatrix { rows, cols, entries: vec![GaussianInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for k in 0..n {
            *m.at_mut(k, k) = GaussianInt::one();
        }
        m
    }

    /// Builds the matrix whose columns are the given generator vectors.
    pub fn from_columns(cols: &[Vec<GaussianInt>]) -> Result<Self, GiError> {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != nrows) {
            return Err(GiError::DimensionMismatch);
        }
        let mut m = Self::zero(nrows, ncols);
        for (j, col) in cols.iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                *m.at_mut(i, j) = z.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &GaussianInt {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut GaussianInt {
        &mut self.entries[r * self.cols + c]
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// col_a -= q · col_b
    fn col_submul(&mut self, a: usize, b: usize, q: &GaussianInt) {
        for r in 0..self.rows {
            let t = self.at(r, b) * q;
            let v = self.at(r, a) - &t;
            *self.at_mut(r, a) = v;
        }
    }

    fn scale_col(&mut self, a: usize, u: &GaussianInt) {
        for r in 0..self.rows {
            let v = self.at(r, a) * u;
            *self.at_mut(r, a) = v;
        }
    }

    pub fn mul_vec(&self, x: &[GaussianInt]) -> Result<Vec<GaussianInt>, GiError> {
        if x.len() != self.cols {
            return Err(GiError::DimensionMismatch);
        }
        let mut out = vec![GaussianInt::zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = GaussianInt::zero();
            for c in 0..self.cols {
                acc = &acc + &(self.at(r, c) * &x[c]);
            }
            out[r] = acc;
        }
        Ok(out)
    }
}

/// Column-style Hermite reduction over ℤ[i] with a transform matrix U such
/// that H = A·U; pivots are normalized to canonical associates.
fn column_hnf(a: &GiMatrix) -> (GiMatrix, GiMatrix) {
    let mut h = a.clone();
    let mut u = GiMatrix::identity(a.cols);
    let (rows, cols) = (h.rows, h.cols);
    let mut pivot_col = 0usize;
    for r in 0..rows {
        if pivot_col >= cols {
            break;
        }
        // Euclid across columns pivot_col..cols on row r until one nonzero remains.
        loop {
            let mut best: Option<usize> = None;
            for c in pivot_col..cols {
                if !h.at(r, c).is_zero() {
                    best = match best {
                        None => Some(c),
                        Some(b) if h.at(r, c).norm() < h.at(r, b).norm() => Some(c),
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
                let (q, rem) = gi_divrem(h.at(r, c), &pivot).expect("pivot nonzero");
                h.col_submul(c, pivot_col, &q);
                u.col_submul(c, pivot_col, &q);
                if !rem.is_zero() {
                    reduced_all = false;
                }
            }
            if reduced_all {
                // normalize pivot to its canonical associate
                let canon = pivot.canonical_assoc();
                let unit = canon.exact_div(&pivot).expect("associate unit");
                if !unit.is_one() {
                    h.scale_col(pivot_col, &unit);
                    u.scale_col(pivot_col, &unit);
                }
                pivot_col += 1;
                break;
            }
        }
    }
    (h, u)
}

/// Decides whether `target` lies in the ℤ[i]-span of the matrix columns and
/// returns exact coefficients when it does.
pub fn gi_module_membership(
    gens: &GiMatrix,
    target: &[GaussianInt],
) -> Result<Option<Vec<GaussianInt>>, GiError> {
    if target.len() != gens.rows {
        return Err(GiError::DimensionMismatch);
    }
    let (h, u) = column_hnf(gens);
    // Forward-solve H·y = target; H is in column echelon form.
    let mut y = vec![GaussianInt::zero(); gens.cols];
    let mut residual: Vec<GaussianInt> = target.to_vec();
    let mut col = 0usize;
    for r in 0..gens.rows {
        if col < gens.cols && !h.at(r, col).is_zero() {
            match residual[r].exact_div(h.at(r, col)) {
                Some(q) => {
                    for rr in r..gens.rows {
                        let t = h.at(rr, col) * &q;
                        residual[rr] = &residual[rr] - &t;
                    }
                    y[col] = q;
                    col += 1;
                }
                None => return Ok(None),
            }
        } else if !residual[r].is_zero() {
            return Ok(None);
        }
    }
    let coeffs = u.mul_vec(&y)?;
    debug_assert_eq!(gens.mul_vec(&coeffs).expect("dims"), target.to_vec());
    Ok(Some(coeffs))
}

/// Solves the congruence system of the CM counterexample:
///
///   r₁c₁ + r₂c₂ ≡ 0        (mod γ)
///   r₂c₁ + r₃c₂ ≡ c₁       (mod γ)
///
/// Degenerate cases take the direct solutions (0,0,0) and (0,1,0); otherwise
/// D = gcd(c₁, c₂) and the solvable equation r·c₁²/D + r₃c₂ = c₁ produce
/// r₁ = −r·c₂/D, r₂ = r·c₁/D.
pub fn prop62_solve(
    c1: &GaussianInt,
    c2: &GaussianInt,
    gamma: &GaussianInt,
) -> Result<(GaussianInt, GaussianInt, GaussianInt), GiError> {
    if gamma.is_zero() {
        return Err(GiError::DivisionByZero);
    }
    let c1r = gi_mod(c1, gamma)?;
    let c2r = gi_mod(c2, gamma)?;
    if c1r.is_zero() {
        return Ok((GaussianInt::zero(), GaussianInt::zero(), GaussianInt::zero()));
    }
    if c2r.is_zero() {
        return Ok((GaussianInt::zero(), GaussianInt::one(), GaussianInt::zero()));
    }
    let d = gi_gcd(&c1r, &c2r);
    let c1_over_d = c1r.exact_div(&d).expect("D divides c1");
    let c2_over_d = c2r.exact_div(&d).expect("D divides c2");
    let c1sq_over_d = &c1r * &c1_over_d;
    // g = gcd(c1²/D, c2) is an associate of D, so g | c1.
    let (g, u, v) = gi_gcd_ext(&c1sq_over_d, &c2r);
    let w = match c1r.exact_div(&g) {
        Some(w) => w,
        // unreachable by the gcd identity; kept total for safety
        None => return Ok((GaussianInt::zero(), GaussianInt::zero(), GaussianInt::zero())),
    };
    let r = &u * &w;
    let r3 = &v * &w;
    let r1 = -(&r * &c2_over_d);
    let r2 = &r * &c1_over_d;
    debug_assert!({
        let lhs1 = &(&r1 * &c1r) + &(&r2 * &c2r);
        let lhs2 = &(&(&r2 * &c1r) + &(&r3 * &c2r)) - &c1r;
        gi_mod(&lhs1, gamma)?.is_zero() && gi_mod(&lhs2, gamma)?.is_zero()
    });
    Ok((gi_mod(&r1, gamma)?, gi_mod(&r2, gamma)?, gi_mod(&r3, gamma)?))
}

impl Add for &GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt { re: -&self.re, im: -&self.im }
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im_part = if self.im.is_one() {
            String::from("i")
        } else if (-&self.im).is_one() {
            String::from("-i")
        } else {
            format!("{}i", self.im)
        };
        if self.re.is_zero() {
            write!(f, "{}", im_part)
        } else if self.im.is_negative() {
            write!(f, "{}{}", self.re, im_part)
        } else {
            write!(f, "{}+{}", self.re, im_part)
        }
    }
}

impl fmt::Debug for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for GaussianInt {
    type Err = String;

    /// Accepts "a+bi", "a-bi", "bi", "i", "-i" and bare integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(String::from("empty Gaussian integer"));
        }
        let parse_int = |t: &str| -> Result<BigInt, String> {
            t.parse::<BigInt>().map_err(|_| format!("bad integer part '{t}'"))
        };
        if let Some(body) = s.strip_suffix('i') {
            // split off the imaginary term at the last +/- that is not leading
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                if bytes[k] == b'+' || bytes[k] == b'-' {
                    split = Some(k);
                    break;
                }
            }
            match split {
                Some(k) => {
                    let re = parse_int(&body[..k])?;
                    let im_str = &body[k..];
                    let im = match im_str {
                        "+" => BigInt::one(),
                        "-" => -BigInt::one(),
                        _ => parse_int(im_str)?,
                    };
                    Ok(GaussianInt { re, im })
                }
                None => {
                    let im = match body {
                        "" => BigInt::one(),
                        "-" => -BigInt::one(),
                        _ => parse_int(body)?,
                    };
                    Ok(GaussianInt { re: BigInt::zero(), im })
                }
            }
        } else {
            Ok(GaussianInt { re: parse_int(s)?, im: BigInt::zero() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gi(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn divrem_examples() {
        // (5, 1+i): q in the 2-2i/3-2i family, N(r) <= N(1+i)/2 = 1
        let (q, r) = gi_divrem(&gi(5, 0), &gi(1, 1)).unwrap();
        assert_eq!(&(&q * &gi(1, 1)) + &r, gi(5, 0));
        assert!(r.norm() * 2 <= gi(1, 1).norm());
        // unit divisor
        let (q, r) = gi_divrem(&gi(7, -3), &gi(1, 0)).unwrap();
        assert_eq!(q, gi(7, -3));
        assert!(r.is_zero());
        // zero dividend
        let (q, r) = gi_divrem(&gi(0, 0), &gi(4, 1)).unwrap();
        assert!(q.is_zero() && r.is_zero());
        assert_eq!(gi_divrem(&gi(1, 0), &gi(0, 0)), Err(GiError::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        // 2 = -i(1+i)², so gcd(1+i, 2) = 1+i
        assert_eq!(gi_gcd(&gi(1, 1), &gi(2, 0)), gi(1, 1));
        // gcd(z, 0) = canonical associate of z
        assert_eq!(gi_gcd(&gi(0, -3), &gi(0, 0)), gi(3, 0));
        // rational primes ≡ 3 mod 4 stay prime
        assert_eq!(gi_gcd(&gi(3, 0), &gi(7, 0)), gi(1, 0));
        assert_eq!(gi_gcd(&gi(0, 0), &gi(0, 0)), gi(0, 0));
    }

    #[test]
    fn canonical_assoc_quadrant() {
        for (z, want) in [
            (gi(-2, 2), gi(2, 2)),
            (gi(0, -5), gi(5, 0)),
            (gi(3, 0), gi(3, 0)),
            (gi(-1, -1), gi(1, 1)),
            (gi(0, 4), gi(4, 0)),
        ] {
            assert_eq!(z.canonical_assoc(), want);
        }
    }

    #[test]
    fn solve_linear_examples() {
        // unit coefficient: x = b mod m
        let x = gi_solve_linear(&gi(1, 0), &gi(9, 4), &gi(3, 0)).unwrap().unwrap();
        assert!(gi_mod(&(&x - &gi(9, 4)), &gi(3, 0)).unwrap().is_zero());
        // gcd(1+i, 2) = 1+i does not divide 1
        assert_eq!(gi_solve_linear(&gi(1, 1), &gi(1, 0), &gi(2, 0)).unwrap(), None);
        // 2x ≡ 2+2i (mod 3) has x ≡ 1+i
        let x = gi_solve_linear(&gi(2, 0), &gi(2, 2), &gi(3, 0)).unwrap().unwrap();
        let diff = &(&gi(2, 0) * &x) - &gi(2, 2);
        assert!(gi_mod(&diff, &gi(3, 0)).unwrap().is_zero());
    }

    #[test]
    fn membership_identity_and_sublattice() {
        let id = GiMatrix::from_columns(&[
            vec![gi(1, 0), gi(0, 0)],
            vec![gi(0, 0), gi(1, 0)],
        ])
        .unwrap();
        let t = vec![gi(3, -2), gi(0, 7)];
        assert_eq!(gi_module_membership(&id, &t).unwrap().unwrap(), t);

        let two = GiMatrix::from_columns(&[vec![gi(2, 0)]]).unwrap();
        assert_eq!(gi_module_membership(&two, &[gi(1, 0)]).unwrap(), None);
    }

    #[test]
    fn membership_prop62_presentation() {
        // coordinate images of P₁, P₂, P₃ against target P: the system
        // r₁Q₁ + r₂Q₂ = 0, r₂Q₁ + r₃Q₂ = Q₁ has no solution
        let gens = GiMatrix::from_columns(&[
            vec![gi(1, 0), gi(0, 0), gi(0, 0), gi(0, 0)],
            vec![gi(0, 0), gi(1, 0), gi(1, 0), gi(0, 0)],
            vec![gi(0, 0), gi(0, 0), gi(0, 0), gi(1, 0)],
        ])
        .unwrap();
        let target = vec![gi(0, 0), gi(0, 0), gi(1, 0), gi(0, 0)];
        assert_eq!(gi_module_membership(&gens, &target).unwrap(), None);
    }

    #[test]
    fn membership_matches_box_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            let mut cols = Vec::new();
            for _ in 0..3 {
                cols.push(vec![
                    gi(rng.gen_range(-3..=3), rng.gen_range(-3..=3)),
                    gi(rng.gen_range(-3..=3), rng.gen_range(-3..=3)),
                ]);
            }
            let gens = GiMatrix::from_columns(&cols).unwrap();
            // target built from in-box coefficients: both routes must agree
            let coeffs: Vec<GaussianInt> = (0..3)
                .map(|_| gi(rng.gen_range(-5..=5), rng.gen_range(-5..=5)))
                .collect();
            let target = gens.mul_vec(&coeffs).unwrap();
            let found = gi_module_membership(&gens, &target).unwrap();
            let sol = found.expect("constructed member must be found");
            assert_eq!(gens.mul_vec(&sol).unwrap(), target);
            // random target: any claimed solution must re-multiply exactly
            let t2 = vec![
                gi(rng.gen_range(-9..=9), rng.gen_range(-9..=9)),
                gi(rng.gen_range(-9..=9), rng.gen_range(-9..=9)),
            ];
            if let Some(sol) = gi_module_membership(&gens, &t2).unwrap() {
                assert_eq!(gens.mul_vec(&sol).unwrap(), t2);
            }
        }
    }

    #[test]
    fn prop62_trivial_branches() {
        let gamma = gi(3, 1);
        // c1 ≡ 0
        let (r1, r2, r3) = prop62_solve(&gi(0, 0), &gi(2, 0), &gamma).unwrap();
        assert!(r1.is_zero() && r2.is_zero() && r3.is_zero());
        // c2 ≡ 0, c1 ≢ 0
        let (r1, r2, r3) = prop62_solve(&gi(1, 0), &gi(0, 0), &gamma).unwrap();
        assert!(r1.is_zero() && r2.is_one() && r3.is_zero());
    }

    fn check_prop62(c1: &GaussianInt, c2: &GaussianInt, gamma: &GaussianInt) {
        let (r1, r2, r3) = prop62_solve(c1, c2, gamma).unwrap();
        let lhs1 = &(&r1 * c1) + &(&r2 * c2);
        assert!(gi_mod(&lhs1, gamma).unwrap().is_zero(), "first congruence");
        let lhs2 = &(&(&r2 * c1) + &(&r3 * c2)) - c1;
        assert!(gi_mod(&lhs2, gamma).unwrap().is_zero(), "second congruence");
    }

    proptest! {
        #[test]
        fn euclidean_contract(ar in -1000i64..1000, ai in -1000i64..1000,
                              br in -1000i64..1000, bi in -1000i64..1000) {
            prop_assume!(br != 0 || bi != 0);
            let a = gi(ar, ai);
            let b = gi(br, bi);
            let (q, r) = gi_divrem(&a, &b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.norm() * 2 <= b.norm());
        }

        #[test]
        fn gcd_divides_both(ar in -100i64..100, ai in -100i64..100,
                            br in -100i64..100, bi in -100i64..100) {
            let a = gi(ar, ai);
            let b = gi(br, bi);
            let g = gi_gcd(&a, &b);
            if !g.is_zero() {
                prop_assert!(g.divides(&a) && g.divides(&b));
                let (g2, u, v) = gi_gcd_ext(&a, &b);
                prop_assert_eq!(&g2, &g);
                prop_assert_eq!(&(&u * &a) + &(&v * &b), g);
            } else {
                prop_assert!(a.is_zero() && b.is_zero());
            }
        }

        #[test]
        fn gcd_identity_of_prop62(c1r in -100i64..100, c1i in -100i64..100,
                                  c2r in -100i64..100, c2i in -100i64..100) {
            let c1 = gi(c1r, c1i);
            let c2 = gi(c2r, c2i);
            prop_assume!(!c1.is_zero() && !c2.is_zero());
            let d = gi_gcd(&c1, &c2);
            let c1sq_over_d = &c1 * &c1.exact_div(&d).unwrap();
            prop_assert_eq!(gi_gcd(&c1sq_over_d, &c2), d);
        }

        #[test]
        fn prop62_substitution(c1r in -100i64..100, c1i in -100i64..100,
                               c2r in -100i64..100, c2i in -100i64..100,
                               gr in -30i64..30, gi_ in -30i64..30) {
            prop_assume!(gr != 0 || gi_ != 0);
            check_prop62(&gi(c1r, c1i), &gi(c2r, c2i), &gi(gr, gi_));
        }

        #[test]
        fn parse_display_roundtrip(re in -10_000i64..10_000, im in -10_000i64..10_000) {
            let z = gi(re, im);
            let s = format!("{}", z);
            let back: GaussianInt = s.parse().unwrap();
            prop_assert_eq!(back, z);
        }
    }

    #[test]
    fn parse_accepts_short_forms() {
        assert_eq!("i".parse::<GaussianInt>().unwrap(), gi(0, 1));
        assert_eq!("-i".parse::<GaussianInt>().unwrap(), gi(0, -1));
        assert_eq!("42".parse::<GaussianInt>().unwrap(), gi(42, 0));
        assert_eq!("-7+3i".parse::<GaussianInt>().unwrap(), gi(-7, 3));
        assert_eq!("5-i".parse::<GaussianInt>().unwrap(), gi(5, -1));
        assert_eq!("2i".parse::<GaussianInt>().unwrap(), gi(0, 2));
    }
}
