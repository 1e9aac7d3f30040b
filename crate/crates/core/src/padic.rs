//! Fixed-precision p-adic integers.
//!
//! A [`PAdicInt`] is a residue in Z/p^k together with the prime p and the
//! precision k. Arithmetic never silently changes precision: binary
//! operations coerce to the minimum precision of the operands, and
//! operations that would lose digits (division by p, inversion of
//! non-units) are errors instead.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("cannot invert a non-unit (valuation >= 1)")]
    NotAUnit,
    #[error("no simple root: {0}")]
    NoSimpleRoot(String),
    #[error("digit string contains '{0}', not a base-{1} digit")]
    BadDigit(char, u64),
}

/// p-adic valuation of a residue known to finite precision.
///
/// A residue that is zero mod p^k has valuation *at least* k; the exact
/// value is not determined by the data we hold, so we report the bound
/// instead of guessing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    /// The exact valuation, if determined.
    pub fn exact(self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Lower bound on the valuation (tight when exact).
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }
}

/// Deterministic Miller–Rabin for u64 (SPRP bases covering the full range).
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A p-adic integer known modulo p^k.
#[derive(Clone, PartialEq, Eq)]
pub struct PAdicInt {
    prime: u64,
    precision: u32,
    residue: BigUint, // invariant: residue < prime^precision
}

impl fmt::Debug for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PAdicInt({} mod {}^{})",
            self.residue, self.prime, self.precision
        )
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.prime, self.precision)
    }
}

pub(crate) fn pow_modulus(prime: u64, precision: u32) -> BigUint {
    BigUint::from(prime).pow(precision)
}

impl PAdicInt {
    /// Construct from any integer, reducing mod p^k.
    pub fn new(prime: u64, precision: u32, value: impl Into<BigInt>) -> Result<Self, PadicError> {
        if !is_prime_u64(prime) {
            return Err(PadicError::NotPrime(prime));
        }
        if precision == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        let modulus = BigInt::from(pow_modulus(prime, precision));
        let mut r: BigInt = value.into() % &modulus;
        if r.is_negative() {
            r += &modulus;
        }
        Ok(PAdicInt {
            prime,
            precision,
            residue: r.to_biguint().expect("non-negative after reduction"),
        })
    }

    /// Zero at the given precision.
    pub fn zero(prime: u64, precision: u32) -> Self {
        PAdicInt::new(prime, precision, 0).expect("zero is representable")
    }

    /// One at the given precision.
    pub fn one(prime: u64, precision: u32) -> Self {
        PAdicInt::new(prime, precision, 1).expect("one is representable")
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// Reduce to a lower (or equal) precision.
    pub fn truncate(&self, precision: u32) -> Result<Self, PadicError> {
        if precision == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        if precision >= self.precision {
            return Ok(self.clone());
        }
        Ok(PAdicInt {
            prime: self.prime,
            precision,
            residue: &self.residue % pow_modulus(self.prime, precision),
        })
    }

    fn coerce(&self, other: &Self) -> Result<(Self, Self), PadicError> {
        if self.prime != other.prime {
            return Err(PadicError::PrimeMismatch(self.prime, other.prime));
        }
        let k = self.precision.min(other.precision);
        Ok((self.truncate(k)?, other.truncate(k)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self, PadicError> {
        let (a, b) = self.coerce(other)?;
        let m = pow_modulus(a.prime, a.precision);
        Ok(PAdicInt {
            prime: a.prime,
            precision: a.precision,
            residue: (&a.residue + &b.residue) % m,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        if self.residue.is_zero() {
            return self.clone();
        }
        let m = pow_modulus(self.prime, self.precision);
        PAdicInt {
            prime: self.prime,
            precision: self.precision,
            residue: m - &self.residue,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PadicError> {
        let (a, b) = self.coerce(other)?;
        let m = pow_modulus(a.prime, a.precision);
        Ok(PAdicInt {
            prime: a.prime,
            precision: a.precision,
            residue: (&a.residue * &b.residue) % m,
        })
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        let other = PAdicInt::new(self.prime, self.precision, n).expect("same prime/precision");
        self.mul(&other).expect("same prime")
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = PAdicInt::one(self.prime, self.precision);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same prime");
            }
            base = base.mul(&base).expect("same prime");
            e >>= 1;
        }
        acc
    }

    /// p-adic valuation of the residue; `AtLeast(k)` when the residue is 0.
    pub fn valuation(&self) -> Valuation {
        if self.residue.is_zero() {
            return Valuation::AtLeast(self.precision);
        }
        let p = BigUint::from(self.prime);
        let mut v = 0u32;
        let mut r = self.residue.clone();
        loop {
            let (q, rem) = r.div_rem(&p);
            if !rem.is_zero() {
                return Valuation::Exact(v);
            }
            v += 1;
            r = q;
        }
    }

    /// True when the residue is a unit in Z/p^k (valuation 0).
    pub fn is_unit(&self) -> bool {
        matches!(self.valuation(), Valuation::Exact(0))
    }

    /// Multiplicative inverse mod p^k; errors on non-units.
    pub fn unit_inverse(&self) -> Result<Self, PadicError> {
        if !self.is_unit() {
            return Err(PadicError::NotAUnit);
        }
        let m = BigInt::from(pow_modulus(self.prime, self.precision));
        let a = BigInt::from(self.residue.clone());
        let ext = a.extended_gcd(&m);
        debug_assert!(ext.gcd.is_one());
        let mut inv = ext.x % &m;
        if inv.is_negative() {
            inv += &m;
        }
        Ok(PAdicInt {
            prime: self.prime,
            precision: self.precision,
            residue: inv.to_biguint().expect("reduced"),
        })
    }

    /// Exact division by p^v; the result is known to v fewer digits.
    pub fn shift_down(&self, v: u32) -> Result<Self, PadicError> {
        if v == 0 {
            return Ok(self.clone());
        }
        if v >= self.precision {
            return Err(PadicError::ZeroPrecision);
        }
        let pv = pow_modulus(self.prime, v);
        let (q, r) = self.residue.div_rem(&pv);
        if !r.is_zero() {
            return Err(PadicError::NotAUnit);
        }
        Ok(PAdicInt {
            prime: self.prime,
            precision: self.precision - v,
            residue: q,
        })
    }

    /// Base-p digits, least significant first, padded to the precision.
    pub fn digits(&self) -> Vec<u64> {
        let p = BigUint::from(self.prime);
        let mut out = Vec::with_capacity(self.precision as usize);
        let mut r = self.residue.clone();
        for _ in 0..self.precision {
            let (q, rem) = r.div_rem(&p);
            out.push(u64::try_from(&rem).expect("digit < p <= u64::MAX"));
            r = q;
        }
        out
    }

    /// Digit string, least significant first. Digits >= 10 are rendered as
    /// `[d]`, so the output is unambiguous for any prime.
    pub fn digit_string(&self) -> String {
        let mut s = String::new();
        for d in self.digits() {
            if d < 10 {
                s.push(char::from(b'0' + d as u8));
            } else {
                s.push_str(&format!("[{d}]"));
            }
        }
        s
    }

    /// Parse a digit string (least significant first, `[d]` for digits >= 10).
    pub fn from_digit_string(prime: u64, precision: u32, s: &str) -> Result<Self, PadicError> {
        let mut digits = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            if c == '[' {
                let mut num = String::new();
                for c2 in chars.by_ref() {
                    if c2 == ']' {
                        break;
                    }
                    num.push(c2);
                }
                let d: u64 = num.parse().map_err(|_| PadicError::BadDigit('[', prime))?;
                if d >= prime {
                    return Err(PadicError::BadDigit('[', prime));
                }
                digits.push(d);
            } else if let Some(d) = c.to_digit(10) {
                if u64::from(d) >= prime {
                    return Err(PadicError::BadDigit(c, prime));
                }
                digits.push(u64::from(d));
            } else {
                return Err(PadicError::BadDigit(c, prime));
            }
        }
        let p = BigUint::from(prime);
        let mut acc = BigUint::zero();
        for &d in digits.iter().rev() {
            acc = acc * &p + BigUint::from(d);
        }
        PAdicInt::new(prime, precision, BigInt::from(acc))
    }
}

/// Evaluate an integer polynomial (coefficients low degree first) at `x` mod m.
fn eval_poly_mod(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = (acc * x + c) % m;
    }
    if acc.is_negative() {
        acc += m;
    }
    acc
}

fn derivative(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

/// Lift a simple root of an integer polynomial from Z/p to Z/p^k.
///
/// Requires f(x0) ≡ 0 (mod p) and f'(x0) a unit mod p; Newton iteration then
/// converges quadratically and the returned residue satisfies f(x) ≡ 0
/// (mod p^k) exactly.
pub fn hensel_root(
    coeffs: &[BigInt],
    x0: i64,
    prime: u64,
    precision: u32,
) -> Result<PAdicInt, PadicError> {
    if !is_prime_u64(prime) {
        return Err(PadicError::NotPrime(prime));
    }
    if precision == 0 {
        return Err(PadicError::ZeroPrecision);
    }
    let p = BigInt::from(prime);
    let mut x = BigInt::from(x0) % &p;
    if x.is_negative() {
        x += &p;
    }
    if !eval_poly_mod(coeffs, &x, &p).is_zero() {
        return Err(PadicError::NoSimpleRoot(format!(
            "f({x0}) != 0 mod {prime}"
        )));
    }
    let deriv = derivative(coeffs);
    if eval_poly_mod(&deriv, &x, &p).is_zero() {
        return Err(PadicError::NoSimpleRoot(format!(
            "f'({x0}) == 0 mod {prime}, root is not simple"
        )));
    }
    let modulus = BigInt::from(pow_modulus(prime, precision));
    // Newton at full modulus: quadratic convergence from a simple root mod p.
    let steps = 64 - u64::from(precision).leading_zeros() + 2;
    for _ in 0..steps {
        let fx = eval_poly_mod(coeffs, &x, &modulus);
        if fx.is_zero() {
            break;
        }
        let dfx = eval_poly_mod(&deriv, &x, &modulus);
        let dfx_unit = PAdicInt::new(prime, precision, dfx)?;
        let inv = dfx_unit.unit_inverse()?;
        x = (&x - fx * BigInt::from(inv.residue)) % &modulus;
        if x.is_negative() {
            x += &modulus;
        }
    }
    if !eval_poly_mod(coeffs, &x, &modulus).is_zero() {
        return Err(PadicError::NoSimpleRoot(
            "Newton iteration failed to converge".into(),
        ));
    }
    PAdicInt::new(prime, precision, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn padic(p: u64, k: u32, v: i64) -> PAdicInt {
        PAdicInt::new(p, k, v).unwrap()
    }

    #[test]
    fn addition_wraps_at_the_modulus() {
        // 182 + 443 = 625 = 5^4
        let a = padic(5, 4, 182);
        let b = padic(5, 4, 443);
        assert!(a.add(&b).unwrap().is_zero());
    }

    #[test]
    fn multiplication_reduces_mod_p_to_the_k() {
        // 182^2 = 33124 = 52*625 + 624
        let a = padic(5, 4, 182);
        assert_eq!(a.mul(&a).unwrap(), padic(5, 4, 624));
        // and 624 = -1 mod 625: 182 is a square root of -1
        assert_eq!(padic(5, 4, 624), padic(5, 4, -1));
        // 3 * 3 = 0 at precision 2 over p = 3
        let t = padic(3, 2, 3);
        assert!(t.mul(&t).unwrap().is_zero());
    }

    #[test]
    fn mixed_precision_coerces_down() {
        let a = padic(3, 5, 100);
        let b = padic(3, 2, 1);
        let c = a.add(&b).unwrap();
        assert_eq!(c.precision(), 2);
        assert_eq!(c, padic(3, 2, 101));
    }

    #[test]
    fn prime_mismatch_is_an_error() {
        let a = padic(3, 2, 1);
        let b = padic(5, 2, 1);
        assert_eq!(a.add(&b), Err(PadicError::PrimeMismatch(3, 5)));
    }

    #[test]
    fn non_primes_are_rejected() {
        assert_eq!(
            PAdicInt::new(6, 2, 1).unwrap_err(),
            PadicError::NotPrime(6)
        );
        assert!(PAdicInt::new(2, 2, 1).is_ok());
        assert!(PAdicInt::new(1000003, 2, 1).is_ok());
    }

    #[test]
    fn valuation_counts_powers_of_p() {
        assert_eq!(padic(5, 4, 182).valuation(), Valuation::Exact(0));
        assert_eq!(padic(5, 4, 50).valuation(), Valuation::Exact(2));
        assert_eq!(padic(5, 4, 0).valuation(), Valuation::AtLeast(4));
        assert_eq!(padic(5, 4, 625).valuation(), Valuation::AtLeast(4));
        assert_eq!(padic(3, 3, 18).valuation(), Valuation::Exact(2));
    }

    #[test]
    fn unit_inverse_of_two_mod_five_cubed() {
        // 2 * 313 = 626 = 1 + 625... at precision 4 that's 1 mod 625? No:
        // precision 4 means mod 625; 626 mod 625 = 1.
        let two = padic(5, 4, 2);
        let inv = two.unit_inverse().unwrap();
        assert_eq!(inv, padic(5, 4, 313));
        assert!(two.mul(&inv).unwrap().residue() == &BigUint::from(1u32));
    }

    #[test]
    fn non_units_have_no_inverse() {
        assert_eq!(padic(5, 4, 10).unit_inverse(), Err(PadicError::NotAUnit));
        assert_eq!(padic(5, 4, 0).unit_inverse(), Err(PadicError::NotAUnit));
    }

    #[test]
    fn hensel_lifts_sqrt_minus_one_over_five() {
        // x^2 + 1, start 2: the 5-adic square root of -1 with first digit 2.
        let f = [BigInt::from(1), BigInt::from(0), BigInt::from(1)];
        let r = hensel_root(&f, 2, 5, 4).unwrap();
        assert_eq!(r, padic(5, 4, 182));
        assert_eq!(r.digits(), vec![2, 1, 2, 1]);
        assert_eq!(r.digit_string(), "2121");
        // higher precision still squares to -1
        let r8 = hensel_root(&f, 2, 5, 8).unwrap();
        assert_eq!(r8.mul(&r8).unwrap(), padic(5, 8, -1));
        // coherence: the precision-8 lift truncates to the precision-4 one
        assert_eq!(r8.truncate(4).unwrap(), r);
    }

    #[test]
    fn hensel_on_linear_polynomials_recovers_the_constant() {
        // x - 7 over p=3, k=5: root is 7
        let f = [BigInt::from(-7), BigInt::from(1)];
        let r = hensel_root(&f, 1, 3, 5).unwrap();
        assert_eq!(r, padic(3, 5, 7));
    }

    #[test]
    fn hensel_rejects_polynomials_with_no_root_mod_p() {
        // x^2 + 1 has no root mod 3
        let f = [BigInt::from(1), BigInt::from(0), BigInt::from(1)];
        for x0 in 0..3 {
            assert!(matches!(
                hensel_root(&f, x0, 3, 4),
                Err(PadicError::NoSimpleRoot(_))
            ));
        }
    }

    #[test]
    fn hensel_rejects_multiple_roots() {
        // x^2 over any p: 0 is a root but not simple
        let f = [BigInt::from(0), BigInt::from(0), BigInt::from(1)];
        assert!(matches!(
            hensel_root(&f, 0, 5, 4),
            Err(PadicError::NoSimpleRoot(_))
        ));
    }

    #[test]
    fn digit_string_round_trip() {
        let r = padic(5, 4, 182);
        let back = PAdicInt::from_digit_string(5, 4, &r.digit_string()).unwrap();
        assert_eq!(back, r);
        // digits >= 10 use brackets
        let big = padic(13, 3, 12 + 11 * 13);
        assert_eq!(big.digit_string(), "[12][11]0");
        assert_eq!(
            PAdicInt::from_digit_string(13, 3, "[12][11]0").unwrap(),
            big
        );
        assert!(PAdicInt::from_digit_string(3, 2, "41").is_err());
    }

    proptest! {
        #[test]
        fn ring_axioms_hold_on_random_residues(
            p in prop::sample::select(vec![2u64, 3, 5, 13]),
            k in 1u32..24,
            a in -2_000_000_000i64..2_000_000_000,
            b in -2_000_000_000i64..2_000_000_000,
            c in -2_000_000_000i64..2_000_000_000,
        ) {
            let x = padic(p, k, a);
            let y = padic(p, k, b);
            let z = padic(p, k, c);
            // commutativity / associativity / distributivity
            prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(
                x.add(&y).unwrap().add(&z).unwrap(),
                x.add(&y.add(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(
                x.mul(&y).unwrap().mul(&z).unwrap(),
                x.mul(&y.mul(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(
                x.mul(&y.add(&z).unwrap()).unwrap(),
                x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
            );
            // neg is the additive inverse
            prop_assert!(x.add(&x.neg()).unwrap().is_zero());
        }

        #[test]
        fn valuation_is_additive_on_products(
            p in prop::sample::select(vec![2u64, 3, 5]),
            a in 1i64..1_000_000,
            b in 1i64..1_000_000,
        ) {
            let k = 40u32;
            let x = padic(p, k, a);
            let y = padic(p, k, b);
            let (vx, vy) = (x.valuation(), y.valuation());
            let vxy = x.mul(&y).unwrap().valuation();
            if let (Valuation::Exact(u), Valuation::Exact(v)) = (vx, vy) {
                // small inputs, huge precision: no overflow past the modulus
                prop_assert_eq!(vxy, Valuation::Exact(u + v));
            }
        }

        #[test]
        fn unit_inverse_round_trips(
            p in prop::sample::select(vec![2u64, 3, 5, 13]),
            k in 1u32..24,
            a in 1i64..2_000_000_000,
        ) {
            let x = padic(p, k, a);
            if x.is_unit() {
                let inv = x.unit_inverse().unwrap();
                prop_assert_eq!(x.mul(&inv).unwrap(), PAdicInt::one(p, k));
                prop_assert_eq!(inv.unit_inverse().unwrap(), x);
            }
        }

        #[test]
        fn truncation_commutes_with_arithmetic(
            p in prop::sample::select(vec![2u64, 3, 5]),
            a in -1_000_000i64..1_000_000,
            b in -1_000_000i64..1_000_000,
        ) {
            let hi = padic(p, 20, a);
            let hj = padic(p, 20, b);
            let lo_sum = hi.add(&hj).unwrap().truncate(7).unwrap();
            let sum_lo = hi.truncate(7).unwrap().add(&hj.truncate(7).unwrap()).unwrap();
            prop_assert_eq!(lo_sum, sum_lo);
            let lo_mul = hi.mul(&hj).unwrap().truncate(7).unwrap();
            let mul_lo = hi.truncate(7).unwrap().mul(&hj.truncate(7).unwrap()).unwrap();
            prop_assert_eq!(lo_mul, mul_lo);
        }
    }
}
