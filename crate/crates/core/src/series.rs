//! Elements of Λ = Z_p\[\[T\]\] at fixed coefficient precision and truncation
//! order, with Weierstrass preparation.
//!
//! A [`LambdaElement`] stores coefficients as residues mod p^k. It is either
//! a *polynomial* (all higher coefficients exactly zero) or a *truncated
//! series* with an order bound D (coefficients at index >= D unknown).
//! Stored coefficients are always exact residues; uncertainty lives only in
//! the coefficient precision k and the order bound.

use crate::padic::{is_prime_u64, pow_modulus, PAdicInt, Valuation};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("element is indistinguishable from zero at working precision")]
    ZeroAtWorkingPrecision,
    #[error("coefficient precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("truncation order {have} too small: need at least {need}")]
    OrderTooSmall { have: usize, need: usize },
    #[error("constant term is not a unit")]
    NotAUnit,
    #[error("cannot decide at working precision: {0}")]
    Indeterminate(String),
    #[error("internal factorization check failed: {0}")]
    Inconsistent(String),
}

/// Truncated element of Z_p\[\[T\]\].
#[derive(Clone, PartialEq, Eq)]
pub struct LambdaElement {
    prime: u64,
    precision: u32,
    /// Residues mod p^precision, constant term first. For polynomials the
    /// vector length is deg+1 (or 0 for the zero polynomial); for truncated
    /// series it is exactly the order bound.
    coeffs: Vec<BigUint>,
    /// `None` = polynomial; `Some(d)` = coefficients at index >= d unknown.
    bound: Option<usize>,
}

impl fmt::Debug for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lambda[p={}, k={}](", self.prime, self.precision)?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*T")?,
                _ => write!(f, "{c}*T^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        match self.bound {
            Some(d) => write!(f, " + O(T^{d}))"),
            None => write!(f, ")"),
        }
    }
}

impl LambdaElement {
    fn reduce(prime: u64, precision: u32, v: BigInt) -> BigUint {
        let m = BigInt::from(pow_modulus(prime, precision));
        let mut r = v % &m;
        if r.is_negative() {
            r += &m;
        }
        r.to_biguint().expect("reduced")
    }

    fn normalize(mut self) -> Self {
        match self.bound {
            None => {
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
            Some(d) => {
                self.coeffs.resize(d, BigUint::zero());
            }
        }
        self
    }

    /// Polynomial from integer coefficients (constant term first).
    pub fn poly_from_bigints(
        prime: u64,
        precision: u32,
        coeffs: &[BigInt],
    ) -> Result<Self, SeriesError> {
        if !is_prime_u64(prime) {
            return Err(SeriesError::NotPrime(prime));
        }
        let coeffs = coeffs
            .iter()
            .map(|c| Self::reduce(prime, precision, c.clone()))
            .collect();
        Ok(LambdaElement {
            prime,
            precision,
            coeffs,
            bound: None,
        }
        .normalize())
    }

    /// Polynomial from machine-integer coefficients (test/fixture helper).
    pub fn poly_from_i64(prime: u64, precision: u32, coeffs: &[i64]) -> Self {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::poly_from_bigints(prime, precision, &big).expect("prime checked by caller")
    }

    /// Truncated series from residues; the bound is the vector length.
    pub fn series_from_bigints(
        prime: u64,
        precision: u32,
        coeffs: &[BigInt],
    ) -> Result<Self, SeriesError> {
        let mut e = Self::poly_from_bigints(prime, precision, coeffs)?;
        e.bound = Some(coeffs.len());
        Ok(e.normalize())
    }

    pub fn zero(prime: u64, precision: u32) -> Self {
        LambdaElement {
            prime,
            precision,
            coeffs: vec![],
            bound: None,
        }
    }

    pub fn one(prime: u64, precision: u32) -> Self {
        LambdaElement {
            prime,
            precision,
            coeffs: vec![BigUint::one()],
            bound: None,
        }
    }

    /// The monomial T^d.
    pub fn monomial(prime: u64, precision: u32, d: usize) -> Self {
        let mut coeffs = vec![BigUint::zero(); d + 1];
        coeffs[d] = BigUint::one();
        LambdaElement {
            prime,
            precision,
            coeffs,
            bound: None,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `None` for polynomials, `Some(order)` for truncated series.
    pub fn order_bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn is_polynomial(&self) -> bool {
        self.bound.is_none()
    }

    /// Degree of a polynomial element; `None` for the zero polynomial.
    /// Panics on truncated series (degree is not a meaningful notion there).
    pub fn degree(&self) -> Option<usize> {
        assert!(self.is_polynomial(), "degree of a truncated series");
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// The stored coefficient at index i (exact residue). Returns zero for
    /// a polynomial index past the degree; `None` past a truncation bound.
    pub fn coeff(&self, i: usize) -> Option<PAdicInt> {
        if let Some(d) = self.bound {
            if i >= d {
                return None;
            }
        }
        let r = self.coeffs.get(i).cloned().unwrap_or_else(BigUint::zero);
        Some(
            PAdicInt::new(self.prime, self.precision, BigInt::from(r))
                .expect("valid prime/precision"),
        )
    }

    pub fn coeff_residues(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// All stored coefficients are zero mod p^k.
    pub fn is_zero_at_precision(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first stored nonzero coefficient.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Minimum valuation over stored coefficients plus the first index where
    /// it is attained; `None` when all stored coefficients vanish.
    pub fn min_coeff_valuation(&self) -> Option<(u32, usize)> {
        let mut best: Option<(u32, usize)> = None;
        for (i, _) in self.coeffs.iter().enumerate() {
            let c = self.coeff(i).expect("stored");
            if let Valuation::Exact(v) = c.valuation() {
                match best {
                    None => best = Some((v, i)),
                    Some((bv, _)) if v < bv => best = Some((v, i)),
                    _ => {}
                }
                if v == 0 {
                    break; // cannot improve
                }
            }
        }
        best
    }

    fn check_prime(&self, other: &Self) -> Result<(), SeriesError> {
        if self.prime != other.prime {
            return Err(SeriesError::PrimeMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    fn joint(&self, other: &Self) -> (u32, Option<usize>) {
        let k = self.precision.min(other.precision);
        let bound = match (self.bound, other.bound) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        (k, bound)
    }

    /// Reduce coefficient precision (no-op when already lower).
    pub fn reduce_precision(&self, precision: u32) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        let m = pow_modulus(self.prime, precision);
        LambdaElement {
            prime: self.prime,
            precision,
            coeffs: self.coeffs.iter().map(|c| c % &m).collect(),
            bound: self.bound,
        }
        .normalize()
    }

    /// Forget coefficients at index >= d (turns polynomials into series).
    pub fn truncate_order(&self, d: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(d);
        LambdaElement {
            prime: self.prime,
            precision: self.precision,
            coeffs,
            bound: Some(match self.bound {
                None => d,
                Some(b) => b.min(d),
            }),
        }
        .normalize()
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_prime(other)?;
        let (k, bound) = self.joint(other);
        let m = pow_modulus(self.prime, k);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigUint::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(BigUint::zero);
            coeffs.push((a + b) % &m);
        }
        Ok(LambdaElement {
            prime: self.prime,
            precision: k,
            coeffs,
            bound,
        }
        .normalize())
    }

    pub fn neg(&self) -> Self {
        let m = pow_modulus(self.prime, self.precision);
        LambdaElement {
            prime: self.prime,
            precision: self.precision,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| if c.is_zero() { c.clone() } else { &m - c })
                .collect(),
            bound: self.bound,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_prime(other)?;
        let k = self.precision.min(other.precision);
        // A factor that starts at T^s pushes the other factor's unknown
        // tail s places further out.
        let bound = {
            let low_self = self.low_order().unwrap_or(self.coeffs.len());
            let low_other = other.low_order().unwrap_or(other.coeffs.len());
            match (self.bound, other.bound) {
                (None, None) => None,
                (Some(a), None) => Some(a + low_other),
                (None, Some(b)) => Some(b + low_self),
                (Some(a), Some(b)) => Some((a + low_other).min(b + low_self)),
            }
        };
        let m = pow_modulus(self.prime, k);
        let out_len = match bound {
            Some(d) => d,
            None => {
                if self.coeffs.is_empty() || other.coeffs.is_empty() {
                    0
                } else {
                    self.coeffs.len() + other.coeffs.len() - 1
                }
            }
        };
        let mut coeffs = vec![BigUint::zero(); out_len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= out_len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = (&coeffs[i + j] + a * b) % &m;
            }
        }
        Ok(LambdaElement {
            prime: self.prime,
            precision: k,
            coeffs,
            bound,
        }
        .normalize())
    }

    pub fn scale(&self, c: &PAdicInt) -> Result<Self, SeriesError> {
        if c.prime() != self.prime {
            return Err(SeriesError::PrimeMismatch(self.prime, c.prime()));
        }
        let k = self.precision.min(c.precision());
        let m = pow_modulus(self.prime, k);
        Ok(LambdaElement {
            prime: self.prime,
            precision: k,
            coeffs: self.coeffs.iter().map(|a| (a * c.residue()) % &m).collect(),
            bound: self.bound,
        }
        .normalize())
    }

    /// Multiply by T^s.
    pub fn mul_t_power(&self, s: usize) -> Self {
        let mut coeffs = vec![BigUint::zero(); s];
        coeffs.extend(self.coeffs.iter().cloned());
        let bound = self.bound.map(|d| d + s);
        let mut out = LambdaElement {
            prime: self.prime,
            precision: self.precision,
            coeffs,
            bound,
        };
        if let Some(d) = out.bound {
            out.coeffs.truncate(d);
        }
        out.normalize()
    }

    /// Exact division of every coefficient by p^v; costs v digits of
    /// precision. Errors when some coefficient is not divisible.
    pub fn shift_down(&self, v: u32) -> Result<Self, SeriesError> {
        if v == 0 {
            return Ok(self.clone());
        }
        if v >= self.precision {
            return Err(SeriesError::PrecisionExhausted(format!(
                "dividing by p^{v} at precision {}",
                self.precision
            )));
        }
        let pv = pow_modulus(self.prime, v);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(&pv);
            if !r.is_zero() {
                return Err(SeriesError::PrecisionExhausted(
                    "coefficient not divisible by requested p-power".into(),
                ));
            }
            coeffs.push(q);
        }
        Ok(LambdaElement {
            prime: self.prime,
            precision: self.precision - v,
            coeffs,
            bound: self.bound,
        }
        .normalize())
    }

    /// Multiplicative inverse mod T^order (constant term must be a unit).
    pub fn invert_unit(&self, order: usize) -> Result<Self, SeriesError> {
        let c0 = self.coeff(0).ok_or(SeriesError::OrderTooSmall {
            have: 0,
            need: 1,
        })?;
        if !c0.is_unit() {
            return Err(SeriesError::NotAUnit);
        }
        if let Some(d) = self.bound {
            if d < order {
                return Err(SeriesError::OrderTooSmall {
                    have: d,
                    need: order,
                });
            }
        }
        let k = self.precision;
        let m = pow_modulus(self.prime, k);
        let inv0 = BigInt::from(c0.unit_inverse().expect("unit").residue().clone());
        let inv0 = Self::reduce(self.prime, k, inv0);
        let mut out = vec![BigUint::zero(); order];
        out[0] = inv0.clone();
        for n in 1..order {
            // sum_{i=1..n} c_i * b_{n-i}
            let mut acc = BigUint::zero();
            for i in 1..=n {
                let ci = self.coeffs.get(i).cloned().unwrap_or_else(BigUint::zero);
                if ci.is_zero() {
                    continue;
                }
                acc = (acc + ci * &out[n - i]) % &m;
            }
            if acc.is_zero() {
                continue;
            }
            // b_n = -c0^{-1} * acc
            out[n] = (&m - (acc * &inv0) % &m) % &m;
        }
        Ok(LambdaElement {
            prime: self.prime,
            precision: k,
            coeffs: out,
            bound: Some(order),
        }
        .normalize())
    }

    /// Pretty form like `3 + 3*T + T^2`.
    pub fn display_terms(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = match (i, c.is_one()) {
                (0, _) => format!("{c}"),
                (1, true) => "T".to_string(),
                (1, false) => format!("{c}*T"),
                (_, true) => format!("T^{i}"),
                (_, false) => format!("{c}*T^{i}"),
            };
            parts.push(s);
        }
        let body = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        };
        match self.bound {
            Some(d) => format!("{body} + O(T^{d})"),
            None => body,
        }
    }
}

/// Result of Weierstrass preparation: f = p^mu * unit * distinguished, with
/// `distinguished` monic of degree lambda and all lower coefficients
/// divisible by p. The factorization identity holds at coefficient
/// precision (k - mu) through order (D - lambda) for truncated inputs.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    pub mu: u32,
    pub lambda: usize,
    pub distinguished: LambdaElement,
    pub unit: LambdaElement,
}

/// Exact division with remainder by a polynomial whose top coefficient is a
/// unit: f = q*g + r with deg r < deg g. Both inputs must be polynomials;
/// no precision is lost.
pub fn poly_divmod_monic(
    f: &LambdaElement,
    g: &LambdaElement,
) -> Result<(LambdaElement, LambdaElement), SeriesError> {
    if !f.is_polynomial() || !g.is_polynomial() {
        return Err(SeriesError::Indeterminate(
            "exact polynomial division needs polynomial inputs".into(),
        ));
    }
    if f.prime() != g.prime() {
        return Err(SeriesError::PrimeMismatch(f.prime(), g.prime()));
    }
    let prime = f.prime();
    let k = f.precision().min(g.precision());
    let dg = match g.degree() {
        Some(d) => d,
        None => return Err(SeriesError::ZeroAtWorkingPrecision),
    };
    let lead = g
        .reduce_precision(k)
        .coeff(dg)
        .expect("polynomial coefficient");
    if !lead.is_unit() {
        return Err(SeriesError::NotAUnit);
    }
    let lead_inv = BigInt::from(lead.unit_inverse().expect("unit").residue().clone());
    let m = pow_modulus(prime, k);
    let gw: Vec<BigUint> = g.reduce_precision(k).coeffs;
    let mut rem: Vec<BigUint> = f.reduce_precision(k).coeffs;
    let mut quot: Vec<BigUint> = if rem.len() > dg {
        vec![BigUint::zero(); rem.len() - dg]
    } else {
        vec![]
    };
    while rem.len() > dg {
        let top = rem.last().expect("nonempty").clone();
        let shift = rem.len() - 1 - dg;
        if !top.is_zero() {
            let c = (BigInt::from(top) * &lead_inv) % BigInt::from(m.clone());
            let c = c.to_biguint().expect("non-negative");
            quot[shift] = c.clone();
            for (i, gc) in gw.iter().enumerate() {
                let sub = (&c * gc) % &m;
                let a = &rem[shift + i] % &m;
                rem[shift + i] = if a >= sub { a - sub } else { &m + a - sub };
            }
        }
        debug_assert!(rem.last().expect("nonempty").is_zero());
        rem.pop();
    }
    let to_elem = |v: Vec<BigUint>| {
        LambdaElement {
            prime,
            precision: k,
            coeffs: v,
            bound: None,
        }
        .normalize()
    };
    Ok((to_elem(quot), to_elem(rem)))
}

fn window_mul(prime: u64, k: u32, x: &[BigUint], y: &[BigUint], w: usize) -> Vec<BigUint> {
    let m = pow_modulus(prime, k);
    let mut out = vec![BigUint::zero(); w];
    for (i, a) in x.iter().enumerate() {
        if i >= w || a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            if i + j >= w {
                break;
            }
            if b.is_zero() {
                continue;
            }
            out[i + j] = (&out[i + j] + a * b) % &m;
        }
    }
    out
}

fn window_inv(prime: u64, k: u32, x: &[BigUint], w: usize) -> Result<Vec<BigUint>, SeriesError> {
    let m = pow_modulus(prime, k);
    let x0 = x.first().cloned().unwrap_or_else(BigUint::zero);
    let c0 = PAdicInt::new(prime, k, BigInt::from(x0)).expect("valid prime");
    if !c0.is_unit() {
        return Err(SeriesError::NotAUnit);
    }
    let inv0: BigUint = c0.unit_inverse().expect("unit").residue().clone();
    let mut out = vec![BigUint::zero(); w];
    out[0] = inv0.clone();
    for n in 1..w {
        let mut acc = BigUint::zero();
        for i in 1..=n {
            let xi = x.get(i).cloned().unwrap_or_else(BigUint::zero);
            if xi.is_zero() {
                continue;
            }
            acc = (acc + xi * &out[n - i]) % &m;
        }
        if !acc.is_zero() {
            out[n] = (&m - (acc * &inv0) % &m) % &m;
        }
    }
    Ok(out)
}

/// Division with remainder by an element of Weierstrass degree `lambda`
/// (the coefficient at T^lambda is a unit, all lower coefficients are
/// divisible by p): f = q*g + r with q a series and deg r < lambda.
///
/// Computed by the p-adically contracting iteration
/// q <- B^{-1}(shift(f) - shift(q*A)), where A = g mod T^lambda and
/// B = g div T^lambda, run to an exact fixed point inside the working
/// window of `window` coefficients (defaulting to the joint order bound).
/// The identity f = q*g + r then holds exactly through T^(window - lambda)
/// at the joint precision for the windowed data; as approximations to the
/// untruncated division, coefficient i of q is accurate to about
/// (window - lambda - i)/lambda digits, so callers deciding divisibility
/// from r must either pass polynomial inputs to [`poly_divmod_monic`] or
/// discount precision accordingly.
pub fn lambda_div(
    f: &LambdaElement,
    g: &LambdaElement,
    lambda: usize,
    window: Option<usize>,
) -> Result<(LambdaElement, LambdaElement), SeriesError> {
    if f.prime() != g.prime() {
        return Err(SeriesError::PrimeMismatch(f.prime(), g.prime()));
    }
    let prime = g.prime();
    let k = f.precision().min(g.precision());
    // effective working order: never beyond what either operand knows
    let natural = match (f.order_bound(), g.order_bound()) {
        (None, None) => {
            let df = f.coeffs.len();
            let dg = g.coeffs.len();
            df.max(dg).max(lambda + 1)
        }
        (a, b) => a
            .into_iter()
            .chain(b)
            .min()
            .expect("at least one bound present"),
    };
    let d = match window {
        Some(w) => {
            let cap = f
                .order_bound()
                .into_iter()
                .chain(g.order_bound())
                .min()
                .unwrap_or(usize::MAX);
            w.min(cap)
        }
        None => natural,
    };
    if d <= lambda {
        return Err(SeriesError::OrderTooSmall {
            have: d,
            need: lambda + 1,
        });
    }
    let glam = g.coeff(lambda).ok_or(SeriesError::OrderTooSmall {
        have: g.order_bound().unwrap_or(usize::MAX),
        need: lambda + 1,
    })?;
    if !glam.is_unit() {
        return Err(SeriesError::NotAUnit);
    }
    for i in 0..lambda {
        let c = g.coeff(i).expect("below lambda < d");
        if c.is_unit() {
            return Err(SeriesError::Inconsistent(format!(
                "divisor has unit coefficient below its Weierstrass degree (index {i})"
            )));
        }
    }
    let m = pow_modulus(prime, k);
    let pad = |e: &LambdaElement| -> Vec<BigUint> {
        let mut v: Vec<BigUint> = e.coeffs.iter().map(|c| c % &m).collect();
        v.resize(d, BigUint::zero());
        v
    };
    let fw = pad(f);
    let gw = pad(g);
    let wq = d - lambda;
    let a = &gw[..lambda];
    let b = &gw[lambda..];
    let b_inv = window_inv(prime, k, b, wq)?;
    let tf = &fw[lambda..];
    let mut q = vec![BigUint::zero(); wq];
    let mut stable = false;
    for _ in 0..=(k + 1) {
        let qa = window_mul(prime, k, &q, a, d);
        // t = tf - shift(qa)
        let mut t = Vec::with_capacity(wq);
        for i in 0..wq {
            let x = &tf[i] % &m;
            let y = &qa[i + lambda] % &m;
            t.push(if x >= y { x - y } else { &m + x - y });
        }
        let next = window_mul(prime, k, &b_inv, &t, wq);
        if next == q {
            stable = true;
            break;
        }
        q = next;
    }
    if !stable {
        return Err(SeriesError::Inconsistent(
            "division iteration failed to stabilize".into(),
        ));
    }
    // r = (f - q*g) restricted to degrees < lambda
    let qg = window_mul(prime, k, &q, &gw, lambda.max(1));
    let mut r_coeffs = Vec::with_capacity(lambda);
    for j in 0..lambda {
        let x = &fw[j] % &m;
        let y = &qg[j] % &m;
        r_coeffs.push(if x >= y { x - y } else { &m + x - y });
    }
    let q_elem = LambdaElement {
        prime,
        precision: k,
        coeffs: q,
        bound: Some(wq),
    }
    .normalize();
    let r_elem = LambdaElement {
        prime,
        precision: k,
        coeffs: r_coeffs,
        bound: None,
    }
    .normalize();
    Ok((q_elem, r_elem))
}

/// Weierstrass preparation f = p^mu * unit * distinguished.
///
/// mu and lambda are read off the stored coefficient window; the element
/// must be distinguishable from zero there. The returned factors satisfy
/// the factorization identity exactly at precision (k - mu), order
/// (D - lambda).
pub fn weierstrass_prepare(f: &LambdaElement) -> Result<WeierstrassData, SeriesError> {
    if f.is_zero_at_precision() {
        return Err(SeriesError::ZeroAtWorkingPrecision);
    }
    let (mu, _) = f.min_coeff_valuation().expect("nonzero stored coefficient");
    let g = f.shift_down(mu)?;
    let lambda = (0..g.coeffs.len())
        .find(|&i| g.coeff(i).expect("stored").is_unit())
        .expect("shift_down leaves a unit coefficient");
    // A polynomial input imposes no window of its own; pick one wide enough
    // that the distinguished factor is accurate to full precision.
    let g = if g.is_polynomial() {
        let d = g.coeffs.len().max(lambda + 1) + lambda * (g.precision() as usize + 2);
        g.truncate_order(d)
    } else {
        g
    };
    let t_lam = LambdaElement::monomial(g.prime(), g.precision(), lambda);
    let (q, r) = lambda_div(&t_lam, &g, lambda, None)?;
    // distinguished polynomial P = T^lambda - r (both sides polynomial)
    let dist = t_lam.sub(&r)?;
    if dist.degree() != Some(lambda) {
        return Err(SeriesError::Inconsistent(
            "distinguished factor is not monic of the expected degree".into(),
        ));
    }
    for i in 0..lambda {
        if dist.coeff(i).expect("poly").is_unit() {
            return Err(SeriesError::Inconsistent(
                "distinguished factor has a unit coefficient below top degree".into(),
            ));
        }
    }
    let order = q.order_bound().expect("division returns a bounded series");
    if !q.coeff(0).is_some_and(|c| c.is_unit()) {
        return Err(SeriesError::Inconsistent(
            "division cofactor is not a unit".into(),
        ));
    }
    let unit = q.invert_unit(order)?;
    // verify the recomposition u * P = g within the common window
    let recomposed = unit.mul(&dist)?;
    let diff = recomposed.sub(&g.truncate_order(order))?;
    if !diff.is_zero_at_precision() {
        return Err(SeriesError::Inconsistent(
            "unit * distinguished does not recompose to the p-depleted element".into(),
        ));
    }
    Ok(WeierstrassData {
        mu,
        lambda,
        distinguished: dist,
        unit,
    })
}

/// Exact integer coefficients of nu_{p^n}(1+T) = ((1+T)^{p^n} - 1)/T,
/// constant term first: coefficient of T^j is C(p^n, j+1).
pub fn nu_int_coeffs(prime: u64, n: u32) -> Vec<BigInt> {
    let pn = BigUint::from(prime).pow(n);
    let count: usize = pn
        .clone()
        .try_into()
        .unwrap_or_else(|_| panic!("p^n too large to materialize as a polynomial"));
    let mut out: Vec<BigInt> = Vec::with_capacity(count);
    // C(p^n, 1) = p^n; C(p^n, j+1) = C(p^n, j) * (p^n - j) / (j + 1)
    let mut binom = BigInt::from(pn.clone());
    let pn_int = BigInt::from(pn);
    for j in 0..count {
        out.push(binom.clone());
        let j1 = BigInt::from(j as u64 + 1);
        binom = binom * (&pn_int - &j1) / (&j1 + 1);
    }
    out
}

/// nu_{p^n} = 1 + (1+T) + ... + (1+T)^{p^n - 1} as an exact polynomial.
pub fn nu_poly(prime: u64, n: u32, precision: u32) -> Result<LambdaElement, SeriesError> {
    LambdaElement::poly_from_bigints(prime, precision, &nu_int_coeffs(prime, n))
}

/// Exact integer coefficients of the p-power cyclotomic evaluated at 1+T:
/// Phi_{p^j}(1+T) = sum_{i<p} (1+T)^{i p^{j-1}}, degree (p-1) p^{j-1}.
pub fn cyclotomic_int_coeffs(prime: u64, j: u32) -> Vec<BigInt> {
    assert!(j >= 1, "cyclotomic level starts at 1");
    let step: usize = BigUint::from(prime)
        .pow(j - 1)
        .try_into()
        .expect("p^(j-1) fits in usize");
    let deg = (prime as usize - 1) * step;
    let mut out = vec![BigInt::zero(); deg + 1];
    for i in 0..prime as usize {
        // add (1+T)^(i*step): C(i*step, m)
        let e = i * step;
        let mut binom = BigInt::one();
        for (m, slot) in out.iter_mut().enumerate().take(e + 1) {
            *slot += &binom;
            binom = binom * BigInt::from((e - m) as u64) / BigInt::from(m as u64 + 1);
        }
    }
    out
}

/// Phi_{p^j}(1+T) as an exact polynomial element.
pub fn cyclotomic_p_power(prime: u64, j: u32, precision: u32) -> Result<LambdaElement, SeriesError> {
    LambdaElement::poly_from_bigints(prime, precision, &cyclotomic_int_coeffs(prime, j))
}

/// (1+T)^v for a p-adic exponent, truncated at `order` terms.
///
/// Coefficient i is the binomial C(v, i) = v(v-1)...(v-i+1)/i!, a p-adic
/// integer; dividing by i! costs v_p(i!) digits, so the result precision is
/// k - v_p((order-1)!). Errors when that is non-positive.
pub fn binom_series(v: &PAdicInt, order: usize) -> Result<LambdaElement, SeriesError> {
    let prime = v.prime();
    assert!(order >= 1);
    // v_p((order-1)!)
    let mut loss = 0u32;
    {
        let mut q = (order as u64 - 1) / prime;
        while q > 0 {
            loss += u32::try_from(q).unwrap_or(u32::MAX);
            q /= prime;
        }
    }
    if loss >= v.precision() {
        return Err(SeriesError::PrecisionExhausted(format!(
            "binomial series to order {order} needs more than {} digits",
            v.precision()
        )));
    }
    let k_out = v.precision() - loss;
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(order);
    coeffs.push(BigInt::one());
    // running C(v, i) at full precision, dividing exactly at each step
    let mut cur = PAdicInt::one(prime, v.precision());
    for i in 1..order {
        // cur *= (v - (i-1))
        let step = v
            .sub(&PAdicInt::new(prime, v.precision(), (i - 1) as i64).expect("prime ok"))
            .expect("same prime");
        cur = cur.mul(&step).expect("same prime");
        // divide by i = p^e * u
        let mut e = 0u32;
        let mut unit = i as u64;
        while unit.is_multiple_of(prime) {
            unit /= prime;
            e += 1;
        }
        if e > 0 {
            cur = cur
                .shift_down(e)
                .map_err(|_| SeriesError::PrecisionExhausted("binomial division".into()))?;
        }
        let u_inv = PAdicInt::new(prime, cur.precision(), unit as i64)
            .expect("prime ok")
            .unit_inverse()
            .expect("unit by construction");
        cur = cur.mul(&u_inv).expect("same prime");
        coeffs.push(BigInt::from(cur.residue().clone()));
    }
    let reduced: Vec<BigInt> = coeffs.into_iter().collect();
    let mut e = LambdaElement::poly_from_bigints(prime, k_out, &reduced)?;
    e.bound = Some(order);
    Ok(e.normalize())
}

/// (1+T)^m for an exact integer exponent. Non-negative m gives an exact
/// polynomial; negative m gives a truncated series (coefficients are still
/// exact integers C(m, i), so no precision is lost).
pub fn binom_int(
    prime: u64,
    precision: u32,
    m: i64,
    order: usize,
) -> Result<LambdaElement, SeriesError> {
    if m >= 0 {
        let m = m as usize;
        let mut coeffs = vec![BigInt::zero(); m + 1];
        let mut binom = BigInt::one();
        for (i, slot) in coeffs.iter_mut().enumerate() {
            *slot = binom.clone();
            binom = binom * BigInt::from((m - i) as u64) / BigInt::from(i as u64 + 1);
        }
        LambdaElement::poly_from_bigints(prime, precision, &coeffs)
    } else {
        // C(m, i) = (-1)^i C(-m + i - 1, i)
        let mm = BigInt::from(m);
        let mut coeffs = Vec::with_capacity(order);
        let mut binom = BigInt::one();
        for i in 0..order {
            coeffs.push(binom.clone());
            binom = binom * (&mm - BigInt::from(i as u64)) / BigInt::from(i as u64 + 1);
        }
        let mut e = LambdaElement::poly_from_bigints(prime, precision, &coeffs)?;
        e.bound = Some(order);
        Ok(e.normalize())
    }
}

/// Multiplicity of each Phi_{p^j}(1+T), j = 1..=j_max, in `f`.
///
/// Divisibility is decided by dividing and testing the remainder at the
/// effective precision of the division; when that precision collapses to
/// zero digits the test is reported as indeterminate rather than guessed.
pub fn cyclotomic_factor_profile(
    f: &LambdaElement,
    j_max: u32,
) -> Result<Vec<(u32, u32)>, SeriesError> {
    if f.is_zero_at_precision() {
        return Err(SeriesError::ZeroAtWorkingPrecision);
    }
    let mut out = Vec::new();
    let prime = f.prime();
    for j in 1..=j_max {
        let phi = cyclotomic_p_power(prime, j, f.precision())?;
        let lam = phi.degree().expect("cyclotomic is a nonzero polynomial");
        let mut mult = 0u32;
        let mut cur = f.clone();
        // strip the p^mu content at each pass so the divisor's Weierstrass
        // degree logic applies (Phi is distinguished; p-content is coprime);
        // stop when the running quotient vanishes at precision
        while let Some((mu, _)) = cur.min_coeff_valuation() {
            let depleted = if mu > 0 { cur.shift_down(mu)? } else { cur.clone() };
            let (q, divides) = if depleted.is_polynomial() {
                if depleted.degree().unwrap_or(0) < lam {
                    break; // exact polynomial of smaller degree: not divisible
                }
                // fully exact route
                let (q, r) = poly_divmod_monic(&depleted, &phi)?;
                (q, r.is_zero_at_precision())
            } else {
                let d = depleted.order_bound().expect("series");
                if d <= lam {
                    return Err(SeriesError::Indeterminate(format!(
                        "truncation order {d} cannot test divisibility by a degree-{lam} factor"
                    )));
                }
                let (q, r) = lambda_div(&depleted, &phi, lam, None)?;
                // the windowed remainder approximates the true one to about
                // (d - lam)/lam digits; refuse to decide below one digit
                let decision_digits = u32::try_from((d - lam) / lam.max(1))
                    .unwrap_or(u32::MAX)
                    .min(depleted.precision());
                if decision_digits == 0 {
                    return Err(SeriesError::Indeterminate(
                        "no digits left to test a remainder".into(),
                    ));
                }
                if r.reduce_precision(decision_digits).is_zero_at_precision()
                    && !r.is_zero_at_precision()
                {
                    // remainder vanishes at decidable precision but not at
                    // full stored precision: refuse to guess
                    return Err(SeriesError::Indeterminate(
                        "remainder is zero only below stored precision".into(),
                    ));
                }
                (q, r.is_zero_at_precision())
            };
            if divides {
                mult += 1;
                // reattach the stripped p-content to the quotient
                cur = q.scale(
                    &PAdicInt::new(prime, q.precision(), BigInt::from(pow_modulus(prime, mu)))
                        .expect("prime ok"),
                )?;
                if cur.is_zero_at_precision() {
                    break;
                }
            } else {
                break;
            }
        }
        if mult > 0 {
            out.push((j, mult));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, k: u32, c: &[i64]) -> LambdaElement {
        LambdaElement::poly_from_i64(p, k, c)
    }

    #[test]
    fn nu_polynomials_have_hockey_stick_coefficients() {
        // nu_3 = 3 + 3T + T^2
        assert_eq!(nu_poly(3, 1, 8).unwrap(), poly(3, 8, &[3, 3, 1]));
        // nu_2 = 2 + T
        assert_eq!(nu_poly(2, 1, 8).unwrap(), poly(2, 8, &[2, 1]));
        // nu_4 = 4 + 6T + 4T^2 + T^3
        assert_eq!(nu_poly(2, 2, 8).unwrap(), poly(2, 8, &[4, 6, 4, 1]));
        // nu_1 (n = 0) = 1
        assert_eq!(nu_poly(5, 0, 8).unwrap(), LambdaElement::one(5, 8));
    }

    #[test]
    fn nu_factors_through_cyclotomics() {
        // nu_{p^n} = nu_{p^(n-1)} * Phi_{p^n}(1+T)
        for (p, n) in [(2u64, 2u32), (2, 3), (3, 2), (5, 1)] {
            let left = nu_poly(p, n, 20).unwrap();
            let right = nu_poly(p, n - 1, 20)
                .unwrap()
                .mul(&cyclotomic_p_power(p, n, 20).unwrap())
                .unwrap();
            assert_eq!(left, right, "p={p} n={n}");
        }
    }

    #[test]
    fn cyclotomic_small_cases() {
        // Phi_2(1+T) = T + 2
        assert_eq!(cyclotomic_p_power(2, 1, 8).unwrap(), poly(2, 8, &[2, 1]));
        // Phi_4(1+T) = (1+T)^2 + 1 = T^2 + 2T + 2
        assert_eq!(cyclotomic_p_power(2, 2, 8).unwrap(), poly(2, 8, &[2, 2, 1]));
        // Phi_3(1+T) = T^2 + 3T + 3
        assert_eq!(cyclotomic_p_power(3, 1, 8).unwrap(), poly(3, 8, &[3, 3, 1]));
    }

    #[test]
    fn arithmetic_tracks_order_bounds() {
        let a = poly(3, 8, &[1, 1]); // polynomial 1 + T
        let s = a.truncate_order(4); // series with bound 4
        assert_eq!(s.order_bound(), Some(4));
        let prod = s.mul(&s).unwrap();
        assert_eq!(prod.order_bound(), Some(4));
        // a T-multiple pushes the bound out
        let shifted = s.mul_t_power(2);
        assert_eq!(shifted.order_bound(), Some(6));
        let mixed = shifted.mul(&s).unwrap();
        assert_eq!(mixed.order_bound(), Some(6));
        // polynomial * polynomial stays polynomial
        assert!(a.mul(&a).unwrap().is_polynomial());
    }

    #[test]
    fn series_inverse_multiplies_to_one() {
        let u = poly(5, 10, &[2, 7, 1, 3]).truncate_order(12);
        let inv = u.invert_unit(12).unwrap();
        let prod = u.mul(&inv).unwrap();
        let one = LambdaElement::one(5, 10).truncate_order(12);
        assert_eq!(prod, one);
        // non-units are rejected
        assert_eq!(
            poly(5, 10, &[5, 1]).invert_unit(4).unwrap_err(),
            SeriesError::NotAUnit
        );
    }

    #[test]
    fn weierstrass_of_t_plus_t_squared() {
        // T(1+T): mu = 0, lambda = 1, distinguished T, unit 1 + T
        let f = poly(3, 8, &[0, 1, 1]).truncate_order(10);
        let w = weierstrass_prepare(&f).unwrap();
        assert_eq!(w.mu, 0);
        assert_eq!(w.lambda, 1);
        assert_eq!(w.distinguished, poly(3, 8, &[0, 1]));
        let expected_unit = poly(3, 8, &[1, 1]).truncate_order(9);
        assert_eq!(w.unit, expected_unit);
    }

    #[test]
    fn weierstrass_strips_p_content() {
        // f = p * (1 + T): mu = 1, lambda = 0, distinguished 1, unit 1 + T
        let f = poly(5, 8, &[5, 5]).truncate_order(10);
        let w = weierstrass_prepare(&f).unwrap();
        assert_eq!(w.mu, 1);
        assert_eq!(w.lambda, 0);
        assert_eq!(w.distinguished, LambdaElement::one(5, 7));
        assert_eq!(w.unit, poly(5, 7, &[1, 1]).truncate_order(10));
    }

    #[test]
    fn weierstrass_of_a_distinguished_polynomial_is_itself() {
        // nu_3 = 3 + 3T + T^2 is already distinguished
        let f = nu_poly(3, 1, 8).unwrap().truncate_order(12);
        let w = weierstrass_prepare(&f).unwrap();
        assert_eq!(w.mu, 0);
        assert_eq!(w.lambda, 2);
        assert_eq!(w.distinguished, poly(3, 8, &[3, 3, 1]));
        // unit is 1
        assert_eq!(w.unit, LambdaElement::one(3, 8).truncate_order(10));
    }

    #[test]
    fn weierstrass_rejects_zero_at_precision() {
        let f = poly(3, 2, &[9, 18]).truncate_order(6); // all coeffs = 0 mod 3^2
        assert_eq!(
            weierstrass_prepare(&f).unwrap_err(),
            SeriesError::ZeroAtWorkingPrecision
        );
    }

    #[test]
    fn exact_polynomial_division_recomposes() {
        // divide T^3 + 1 by T^2 + 2T + 2 over p=2: exact q, r with deg r < 2
        let f = poly(2, 12, &[1, 0, 0, 1]);
        let g = poly(2, 12, &[2, 2, 1]);
        let (q, r) = poly_divmod_monic(&f, &g).unwrap();
        assert!(r.degree().is_none_or(|d| d < 2));
        let recomposed = q.mul(&g).unwrap().add(&r).unwrap();
        assert_eq!(recomposed, f);
        // dividing by a non-unit-lead polynomial is refused
        let bad = poly(2, 12, &[1, 2]);
        assert_eq!(poly_divmod_monic(&f, &bad).unwrap_err(), SeriesError::NotAUnit);
    }

    #[test]
    fn windowed_division_satisfies_identity_through_window() {
        // a genuinely truncated dividend: identity f = q g + r holds through
        // T^(window - lambda) at full precision
        let f = poly(2, 10, &[1, 3, 0, 5, 1, 7, 2, 1]).truncate_order(8);
        let g = poly(2, 10, &[2, 2, 1]); // distinguished, lambda = 2
        let (q, r) = lambda_div(&f, &g, 2, None).unwrap();
        assert_eq!(q.order_bound(), Some(6));
        let recomposed = q.mul(&g).unwrap().add(&r).unwrap();
        let w = recomposed.order_bound().unwrap();
        assert!(w >= 6);
        assert_eq!(recomposed.truncate_order(6), f.truncate_order(6));
        assert!(r.is_polynomial() && r.degree().is_none_or(|d| d < 2));
    }

    #[test]
    fn factor_profile_of_nu_p2() {
        // nu_{p^2} = Phi_p * Phi_{p^2}, multiplicity 1 each
        for p in [2u64, 3] {
            let f = nu_poly(p, 2, 24).unwrap();
            let profile = cyclotomic_factor_profile(&f, 3).unwrap();
            assert_eq!(profile, vec![(1, 1), (2, 1)], "p={p}");
        }
    }

    #[test]
    fn factor_profile_sees_multiplicity() {
        let p = 3u64;
        let phi1 = cyclotomic_p_power(p, 1, 24).unwrap();
        let f = phi1
            .mul(&phi1)
            .unwrap()
            .mul(&LambdaElement::monomial(p, 24, 1))
            .unwrap();
        let profile = cyclotomic_factor_profile(&f, 2).unwrap();
        assert_eq!(profile, vec![(1, 2)]);
        // pure T powers have an empty profile
        let t3 = LambdaElement::monomial(p, 24, 3);
        assert!(cyclotomic_factor_profile(&t3, 3).unwrap().is_empty());
    }

    #[test]
    fn binom_int_matches_padic_binom() {
        let p = 5u64;
        let k = 20u32;
        for m in [-3i64, -1, 0, 1, 2, 7] {
            let via_int = binom_int(p, k, m, 10).unwrap().truncate_order(10);
            let v = PAdicInt::new(p, k, m).unwrap();
            let via_padic = binom_series(&v, 10).unwrap();
            let kk = via_padic.precision();
            assert_eq!(
                via_int.reduce_precision(kk),
                via_padic,
                "exponent {m}"
            );
        }
    }

    #[test]
    fn binom_series_is_a_homomorphism() {
        let p = 5u64;
        let k = 30u32;
        let f = [BigInt::from(1), BigInt::from(0), BigInt::from(1)];
        let i5 = crate::padic::hensel_root(&f, 2, p, k).unwrap();
        let a = binom_series(&i5, 12).unwrap();
        let b = binom_series(&i5.mul_i64(2), 12).unwrap();
        let a2 = a.mul(&a).unwrap();
        let kk = a2.precision().min(b.precision());
        assert_eq!(a2.reduce_precision(kk), b.reduce_precision(kk));
        // and (1+T)^v * (1+T)^{-v} = 1
        let neg = binom_series(&i5.neg(), 12).unwrap();
        let prod = a.mul(&neg).unwrap();
        let kk = prod.precision();
        assert_eq!(
            prod,
            LambdaElement::one(p, kk).truncate_order(prod.order_bound().unwrap())
        );
    }

    #[test]
    fn binom_precision_loss_is_reported() {
        let p = 2u64;
        let v = PAdicInt::new(p, 4, 3).unwrap();
        // v_2(15!) = 11 > 4: not enough digits
        assert!(matches!(
            binom_series(&v, 16),
            Err(SeriesError::PrecisionExhausted(_))
        ));
    }
}
