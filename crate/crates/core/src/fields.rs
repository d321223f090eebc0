//! Exact arithmetic for the four coefficient fields in play: ℚ, ℚ(i),
//! 𝔽_p, and 𝔽_{p²} = 𝔽_p[t]/(t²+1) for p ≡ 3 mod 4.
//!
//! Finite-field elements are kept at desk scale (u64 values, u128
//! intermediates); rationals and ℚ(i) elements are arbitrary precision.

use alloc::format;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Errors from field-level entry points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    DivisionByZero,
    NotPrime(u64),
    InvalidModulus(u64),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::DivisionByZero => write!(f, "division by zero"),
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::InvalidModulus(p) => write!(f, "invalid modulus {p}"),
        }
    }
}

/// Minimal field interface; contextual constructors carry the modulus.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Image of a small integer in the same field (same modulus as `self`).
    fn small(&self, n: i64) -> Self;
}

/// x⁻¹ with exact x·result = 1; zero input is an error.
pub fn field_inverse<F: Field>(x: &F) -> Result<F, FieldError> {
    x.inv().ok_or(FieldError::DivisionByZero)
}

// ---------------------------------------------------------------------------
// u64 modular arithmetic
// ---------------------------------------------------------------------------

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Deterministic primality: trial division below 10⁶, then a
/// strong-pseudoprime battery that is exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    if n < 1_000_000 {
        let mut d = 11u64;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A square root of −1 mod p, or empty when p ≡ 3 mod 4.
///
/// For p ≡ 1 mod 4 the candidates a^((p−1)/4) are tested for small a in
/// increasing order and the smaller of the two roots is returned.
pub fn sqrt_minus_one(p: u64) -> Result<Option<FpElement>, FieldError> {
    if p == 2 || !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p % 4 == 3 {
        return Ok(None);
    }
    for a in 2..p {
        let s = pow_mod(a, (p - 1) / 4, p);
        if mul_mod(s, s, p) == p - 1 {
            let s = s.min(p - s);
            return Ok(Some(FpElement::new(p, s)));
        }
    }
    unreachable!("p ≡ 1 mod 4 always has a root of -1")
}

/// Tonelli-Shanks square root mod an odd prime; verified by squaring.
pub(crate) fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        let r = pow_mod(a, (p + 1) / 4, p);
        return Some(r.min(p - r));
    }
    // p ≡ 1 mod 4: full Tonelli-Shanks
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    debug_assert_eq!(mul_mod(r, r, p), a);
    Some(r.min(p - r))
}

// ---------------------------------------------------------------------------
// ℚ
// ---------------------------------------------------------------------------

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn small(&self, n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

/// Parses "n/d" or "n" into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad rational numerator '{num}'"))?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| format!("bad rational denominator '{d}'"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(String::from("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Canonical "n/d" (or "n") text form; inverse of `parse_rational`.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// ---------------------------------------------------------------------------
// ℚ(i)
// ---------------------------------------------------------------------------

/// An element re + im·i of ℚ(i) with exact rational parts.
#[derive(Clone, PartialEq, Eq)]
pub struct QiElement {
    pub re: Rational,
    pub im: Rational,
}

impl QiElement {
    pub fn new(re: Rational, im: Rational) -> Self {
        QiElement { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        QiElement { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        QiElement { re: Rational::zero(), im: Rational::one() }
    }

    pub fn conj(&self) -> Self {
        QiElement { re: self.re.clone(), im: -self.im.clone() }
    }

    /// re² + im² ∈ ℚ.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.im)
    }
}

impl Field for QiElement {
    fn zero_like(&self) -> Self {
        QiElement { re: Rational::zero(), im: Rational::zero() }
    }
    fn one_like(&self) -> Self {
        QiElement { re: Rational::one(), im: Rational::zero() }
    }
    fn add(&self, rhs: &Self) -> Self {
        QiElement { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
    fn sub(&self, rhs: &Self) -> Self {
        QiElement { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
    fn neg(&self) -> Self {
        QiElement { re: -self.re.clone(), im: -self.im.clone() }
    }
    fn mul(&self, rhs: &Self) -> Self {
        QiElement {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if Zero::is_zero(&n) {
            return None;
        }
        Some(QiElement { re: &self.re / &n, im: -&self.im / &n })
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn small(&self, n: i64) -> Self {
        QiElement::from_rational(Rational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Debug for QiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", qi_to_string(self))
    }
}

/// Canonical "(n/d)+(n/d)i" text form; plain rationals stay "n/d".
pub fn qi_to_string(z: &QiElement) -> String {
    if Zero::is_zero(&z.im) {
        return rational_to_string(&z.re);
    }
    format!("({})+({})i", rational_to_string(&z.re), rational_to_string(&z.im))
}

/// Parses ℚ(i) syntax: "(a)+(b)i", "(a)-(b)i", "(b)i", "i", or a bare rational.
pub fn parse_qi(s: &str) -> Result<QiElement, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err(String::from("empty Q(i) element"));
    }
    let strip_parens = |t: &str| -> String {
        let t = t.trim();
        if t.starts_with('(') && t.ends_with(')') {
            t[1..t.len() - 1].trim().into()
        } else {
            t.into()
        }
    };
    if let Some(body) = s.strip_suffix('i') {
        let body = body.trim_end();
        if body.is_empty() {
            return Ok(QiElement::i());
        }
        if body == "-" {
            return Ok(QiElement::i().neg());
        }
        // split at the last top-level +/- (paren depth 0, not leading)
        let bytes = body.as_bytes();
        let mut depth = 0i32;
        let mut split = None;
        for (k, &b) in bytes.iter().enumerate().rev() {
            match b {
                b')' => depth += 1,
                b'(' => depth -= 1,
                b'+' | b'-' if depth == 0 && k > 0 => {
                    // not a sign inside a number like "3/-4" (we never emit those)
                    split = Some(k);
                    break;
                }
                _ => {}
            }
        }
        match split {
            Some(k) => {
                let re = parse_rational(&strip_parens(&body[..k]))?;
                let sign = if bytes[k] == b'-' { -1 } else { 1 };
                let im_text = strip_parens(&body[k + 1..]);
                let im_abs = if im_text.is_empty() {
                    Rational::one()
                } else {
                    parse_rational(&im_text)?
                };
                let im = if sign < 0 { -im_abs } else { im_abs };
                Ok(QiElement { re, im })
            }
            None => {
                let im = parse_rational(&strip_parens(body))?;
                Ok(QiElement { re: Rational::zero(), im })
            }
        }
    } else {
        Ok(QiElement::from_rational(parse_rational(&strip_parens(s))?))
    }
}

// ---------------------------------------------------------------------------
// 𝔽_p
// ---------------------------------------------------------------------------

/// An element of 𝔽_p, value reduced to [0, p).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpElement {
    pub p: u64,
    pub value: u64,
}

impl FpElement {
    pub fn new(p: u64, value: u64) -> Self {
        FpElement { p, value: value % p }
    }

    pub fn from_bigint(p: u64, n: &BigInt) -> Self {
        let m = BigInt::from(p);
        let mut r = n % &m;
        if r.is_negative() {
            r += &m;
        }
        let (_, digits) = r.to_u64_digits();
        FpElement { p, value: digits.first().copied().unwrap_or(0) }
    }
}

impl fmt::Debug for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Field for FpElement {
    fn zero_like(&self) -> Self {
        FpElement { p: self.p, value: 0 }
    }
    fn one_like(&self) -> Self {
        FpElement { p: self.p, value: 1 % self.p }
    }
    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let mut v = self.value + rhs.value;
        if v >= self.p {
            v -= self.p;
        }
        FpElement { p: self.p, value: v }
    }
    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.p - rhs.value
        };
        FpElement { p: self.p, value: v }
    }
    fn neg(&self) -> Self {
        FpElement { p: self.p, value: if self.value == 0 { 0 } else { self.p - self.value } }
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpElement { p: self.p, value: mul_mod(self.value, rhs.value, self.p) }
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        inv_mod(self.value, self.p).map(|v| FpElement { p: self.p, value: v })
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn small(&self, n: i64) -> Self {
        let m = self.p as i128;
        FpElement { p: self.p, value: (n as i128).rem_euclid(m) as u64 }
    }
}

// ---------------------------------------------------------------------------
// 𝔽_{p²} for p ≡ 3 mod 4
// ---------------------------------------------------------------------------

/// a + b·t in 𝔽_p[t]/(t²+1); requires p ≡ 3 mod 4 so the modulus is
/// irreducible.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp2Element {
    pub p: u64,
    pub a: u64,
    pub b: u64,
}

impl Fp2Element {
    pub fn new(p: u64, a: u64, b: u64) -> Result<Self, FieldError> {
        if p % 4 != 3 || !is_prime(p) {
            return Err(FieldError::InvalidModulus(p));
        }
        Ok(Fp2Element { p, a: a % p, b: b % p })
    }

    pub(crate) fn raw(p: u64, a: u64, b: u64) -> Self {
        debug_assert!(p % 4 == 3);
        Fp2Element { p, a: a % p, b: b % p }
    }

    /// The image of t (a square root of −1 in 𝔽_{p²}).
    pub fn t(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 0, 1)
    }

    pub fn from_fp(x: &FpElement) -> Result<Self, FieldError> {
        Self::new(x.p, x.value, 0)
    }

    /// Norm down to 𝔽_p: a² + b².
    pub fn norm_fp(&self) -> FpElement {
        let n = (mul_mod(self.a, self.a, self.p) + mul_mod(self.b, self.b, self.p)) % self.p;
        FpElement { p: self.p, value: n }
    }
}

impl fmt::Debug for Fp2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}t", self.a, self.b)
        }
    }
}

impl Field for Fp2Element {
    fn zero_like(&self) -> Self {
        Fp2Element { p: self.p, a: 0, b: 0 }
    }
    fn one_like(&self) -> Self {
        Fp2Element { p: self.p, a: 1 % self.p, b: 0 }
    }
    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Fp2Element { p: self.p, a: (self.a + rhs.a) % self.p, b: (self.b + rhs.b) % self.p }
    }
    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Fp2Element {
            p: self.p,
            a: (self.a + self.p - rhs.a) % self.p,
            b: (self.b + self.p - rhs.b) % self.p,
        }
    }
    fn neg(&self) -> Self {
        Fp2Element {
            p: self.p,
            a: if self.a == 0 { 0 } else { self.p - self.a },
            b: if self.b == 0 { 0 } else { self.p - self.b },
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let p = self.p;
        let ac = mul_mod(self.a, rhs.a, p);
        let bd = mul_mod(self.b, rhs.b, p);
        let ad = mul_mod(self.a, rhs.b, p);
        let bc = mul_mod(self.b, rhs.a, p);
        Fp2Element { p, a: (ac + p - bd) % p, b: (ad + bc) % p }
    }
    fn inv(&self) -> Option<Self> {
        // (a+bt)⁻¹ = (a-bt)/(a²+b²)
        let n = self.norm_fp();
        let ninv = n.inv()?;
        let conj = Fp2Element { p: self.p, a: self.a, b: if self.b == 0 { 0 } else { self.p - self.b } };
        Some(Fp2Element {
            p: self.p,
            a: mul_mod(conj.a, ninv.value, self.p),
            b: mul_mod(conj.b, ninv.value, self.p),
        })
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
    fn small(&self, n: i64) -> Self {
        let m = self.p as i128;
        Fp2Element { p: self.p, a: (n as i128).rem_euclid(m) as u64, b: 0 }
    }
}

// ---------------------------------------------------------------------------
// finite-field enumeration and square roots
// ---------------------------------------------------------------------------

/// Interface for desk-scale finite fields: enumeration by index and square
/// roots, used by point counting and discrete-log tables.
pub trait FiniteField: Field + Ord {
    /// Number of field elements q.
    fn field_order(&self) -> u64;
    /// A bijection onto 0..q, used as a table key.
    fn elem_index(&self) -> u64;
    fn from_index(ctx: &Self, idx: u64) -> Self;
    /// Any square root, if one exists; verified exactly.
    fn sqrt(&self) -> Option<Self>;
}

impl FiniteField for FpElement {
    fn field_order(&self) -> u64 {
        self.p
    }
    fn elem_index(&self) -> u64 {
        self.value
    }
    fn from_index(ctx: &Self, idx: u64) -> Self {
        FpElement { p: ctx.p, value: idx % ctx.p }
    }
    fn sqrt(&self) -> Option<Self> {
        sqrt_mod_p(self.value, self.p).map(|r| FpElement { p: self.p, value: r })
    }
}

impl FiniteField for Fp2Element {
    fn field_order(&self) -> u64 {
        self.p * self.p
    }
    fn elem_index(&self) -> u64 {
        self.a + self.b * self.p
    }
    fn from_index(ctx: &Self, idx: u64) -> Self {
        Fp2Element { p: ctx.p, a: idx % ctx.p, b: (idx / ctx.p) % ctx.p }
    }
    fn sqrt(&self) -> Option<Self> {
        let p = self.p;
        if self.is_zero() {
            return Some(*self);
        }
        let root = if self.b == 0 {
            match sqrt_mod_p(self.a, p) {
                Some(r) => Fp2Element { p, a: r, b: 0 },
                // -1 is a non-residue mod p ≡ 3 mod 4, so -a is a residue here
                None => {
                    let r = sqrt_mod_p(p - self.a, p)?;
                    Fp2Element { p, a: 0, b: r }
                }
            }
        } else {
            // (x + yt)² = x² - y² + 2xyt: x² = (a ± w)/2 with w² = a² + b²
            let n = self.norm_fp();
            let w = sqrt_mod_p(n.value, p)?;
            let half = inv_mod(2, p).expect("p odd");
            let mut found = None;
            for wa in [w, p - w] {
                let x2 = mul_mod((self.a + wa) % p, half, p);
                if let Some(x) = sqrt_mod_p(x2, p) {
                    if x != 0 {
                        let xinv = inv_mod(mul_mod(2, x, p), p).expect("x nonzero");
                        let y = mul_mod(self.b, xinv, p);
                        found = Some(Fp2Element { p, a: x, b: y });
                        break;
                    }
                }
            }
            found?
        };
        let check = root.mul(&root);
        if check == *self {
            Some(root)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sqrt_minus_one_examples() {
        assert_eq!(sqrt_minus_one(5).unwrap().unwrap().value, 2);
        assert_eq!(sqrt_minus_one(13).unwrap().unwrap().value, 5);
        assert_eq!(sqrt_minus_one(7).unwrap(), None);
        assert!(sqrt_minus_one(15).is_err());
    }

    #[test]
    fn inverse_examples() {
        let two = FpElement::new(5, 2);
        assert_eq!(field_inverse(&two).unwrap().value, 3);

        let z = QiElement::new(Rational::one(), Rational::one());
        let zi = field_inverse(&z).unwrap();
        assert_eq!(z.mul(&zi), z.one_like());
        assert_eq!(zi.re, Rational::new(BigInt::from(1), BigInt::from(2)));

        let t = Fp2Element::t(3).unwrap();
        let ti = field_inverse(&t).unwrap();
        assert_eq!(ti, Fp2Element::new(3, 0, 2).unwrap());
        assert_eq!(field_inverse(&t.zero_like()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn is_prime_spot_checks() {
        assert!(is_prime(2) && is_prime(3) && is_prime(999983));
        assert!(is_prime(1_000_003) && is_prime(2_147_483_647));
        assert!(!is_prime(1) && !is_prime(1_000_001) && !is_prime(999_983 * 3));
    }

    #[test]
    fn fp2_requires_inert_prime() {
        assert!(Fp2Element::new(5, 0, 1).is_err());
        assert!(Fp2Element::new(7, 0, 1).is_ok());
    }

    fn axioms<F: Field>(x: &F, y: &F, z: &F) {
        assert_eq!(x.add(y), y.add(x));
        assert_eq!(x.add(&y.add(z)), x.add(y).add(z));
        assert_eq!(x.mul(&y.mul(z)), x.mul(y).mul(z));
        assert_eq!(x.mul(&y.add(z)), x.mul(y).add(&x.mul(z)));
        assert_eq!(x.sub(x), x.zero_like());
        if !x.is_zero() {
            let xi = x.inv().unwrap();
            assert_eq!(x.mul(&xi), x.one_like());
        }
    }

    proptest! {
        #[test]
        fn fp_axioms(a in 0u64..101, b in 0u64..101, c in 0u64..101) {
            let ctx = FpElement::new(101, 0);
            axioms(&FpElement::new(101, a), &FpElement::new(101, b), &FpElement::new(101, c));
            let _ = ctx;
        }

        #[test]
        fn fp2_axioms(a in 0u64..19, b in 0u64..19, c in 0u64..19, d in 0u64..19) {
            let x = Fp2Element::new(19, a, b).unwrap();
            let y = Fp2Element::new(19, c, d).unwrap();
            let z = Fp2Element::new(19, a.wrapping_mul(7) % 19, d).unwrap();
            axioms(&x, &y, &z);
        }

        #[test]
        fn qi_axioms(ar in -20i64..20, ai in -20i64..20, br in -20i64..20, bi in -20i64..20) {
            let q = |n: i64, m: i64| QiElement::new(
                Rational::from_integer(BigInt::from(n)),
                Rational::from_integer(BigInt::from(m)),
            );
            axioms(&q(ar, ai), &q(br, bi), &q(ar - br, ai + bi));
        }

        #[test]
        fn fp_sqrt_consistent(a in 0u64..997, sel in 0usize..2) {
            let p = [997u64, 1019][sel]; // one prime of each residue class mod 4
            let x = FpElement::new(p, a);
            if let Some(r) = x.sqrt() {
                prop_assert_eq!(r.mul(&r), x);
            } else {
                prop_assert!(pow_mod(x.value, (p - 1) / 2, p) == p - 1);
            }
        }

        #[test]
        fn fp2_sqrt_consistent(a in 0u64..43, b in 0u64..43) {
            let x = Fp2Element::new(43, a, b).unwrap();
            match x.sqrt() {
                Some(r) => prop_assert_eq!(r.mul(&r), x),
                None => {
                    // non-residue: norm must be a non-residue in F_p
                    let n = x.norm_fp();
                    prop_assert!(pow_mod(n.value, 21, 43) == 42);
                }
            }
        }

        #[test]
        fn rational_text_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = Rational::new(BigInt::from(n), BigInt::from(d));
            let s = rational_to_string(&r);
            prop_assert_eq!(parse_rational(&s).unwrap(), r);
        }

        #[test]
        fn qi_text_roundtrip(nr in -500i64..500, dr in 1i64..50, ni in -500i64..500, di in 1i64..50) {
            let z = QiElement::new(
                Rational::new(BigInt::from(nr), BigInt::from(dr)),
                Rational::new(BigInt::from(ni), BigInt::from(di)),
            );
            let s = qi_to_string(&z);
            prop_assert_eq!(parse_qi(&s).unwrap(), z);
        }
    }

    #[test]
    fn qi_parse_variants() {
        let one_half = Rational::new(BigInt::from(1), BigInt::from(2));
        let z = parse_qi("(1/2)+(3/4)i").unwrap();
        assert_eq!(z.re, one_half);
        let z2 = parse_qi("(1/2)-(3/4)i").unwrap();
        assert_eq!(z2.im, Rational::new(BigInt::from(-3), BigInt::from(4)));
        assert_eq!(parse_qi("i").unwrap(), QiElement::i());
        assert_eq!(parse_qi("-i").unwrap(), QiElement::i().neg());
        assert_eq!(parse_qi("-7").unwrap().re, Rational::from_integer(BigInt::from(-7)));
    }
}
