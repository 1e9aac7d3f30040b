//! Multivariable Laurent polynomials over Z, used for link invariants in
//! the meridian variables t_1, ..., t_d.
//!
//! Terms are kept in a BTreeMap keyed by exponent vectors, so iteration
//! order (and hence Display / canonical forms) is deterministic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MPolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("variable index {0} out of range for {1} variables")]
    VarOutOfRange(usize, usize),
    #[error("not divisible: substituting 1 for variable {0} leaves a nonzero remainder")]
    NotDivisible(usize),
}

/// Laurent polynomial in a fixed number of variables.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

macro_rules! fmt_terms_impl {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.terms.is_empty() {
                return write!(f, "0");
            }
            let mut first = true;
            for (exps, c) in &self.terms {
                if first {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                } else if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                first = false;
                let mag = c.abs();
                let all_zero = exps.iter().all(|&e| e == 0);
                if !mag.is_one() || all_zero {
                    write!(f, "{mag}")?;
                }
                for (i, &e) in exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !mag.is_one() || exps[..i].iter().any(|&x| x != 0) {
                        write!(f, "*")?;
                    }
                    if e == 1 {
                        write!(f, "t{}", i + 1)?;
                    } else {
                        write!(f, "t{}^{}", i + 1, e)?;
                    }
                }
            }
            Ok(())
        }
    };
}
impl fmt::Debug for MultiPoly {
    fmt_terms_impl!();
}

impl fmt::Display for MultiPoly {
    fmt_terms_impl!();
}

impl MultiPoly {
    pub fn zero(vars: usize) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars], c);
        }
        MultiPoly { vars, terms }
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, BigInt::one())
    }

    /// c * t_i^e.
    pub fn monomial(vars: usize, i: usize, e: i32, c: BigInt) -> Result<Self, MPolyError> {
        if i >= vars {
            return Err(MPolyError::VarOutOfRange(i, vars));
        }
        let mut exps = vec![0; vars];
        exps[i] = e;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Ok(MultiPoly { vars, terms })
    }

    /// The variable t_i.
    pub fn var(vars: usize, i: usize) -> Result<Self, MPolyError> {
        Self::monomial(vars, i, 1, BigInt::one())
    }

    pub fn from_terms(
        vars: usize,
        entries: impl IntoIterator<Item = (Vec<i32>, BigInt)>,
    ) -> Result<Self, MPolyError> {
        let mut out = Self::zero(vars);
        for (exps, c) in entries {
            if exps.len() != vars {
                return Err(MPolyError::VarMismatch(exps.len(), vars));
            }
            out.add_term(exps, c);
        }
        Ok(out)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exps: Vec<i32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<(), MPolyError> {
        if self.vars != other.vars {
            return Err(MPolyError::VarMismatch(self.vars, other.vars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MPolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MPolyError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MPolyError> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same vars");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same vars");
            }
        }
        acc
    }

    /// Evaluate with every variable set to 1.
    pub fn eval_all_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact division by (t_i - 1); errors when the remainder (the value at
    /// t_i = 1, a polynomial in the other variables) is nonzero.
    pub fn div_by_var_minus_one(&self, i: usize) -> Result<Self, MPolyError> {
        if i >= self.vars {
            return Err(MPolyError::VarOutOfRange(i, self.vars));
        }
        // view as sum_k c_k(other vars) t_i^k; then
        // f = (t_i - 1) q + f|_{t_i=1} with q_k = sum_{l > k} c_l
        let mut slices: BTreeMap<Vec<i32>, BTreeMap<i32, BigInt>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = std::mem::replace(&mut rest[i], 0);
            slices.entry(rest).or_default().insert(k, c.clone());
        }
        let mut out = Self::zero(self.vars);
        for (rest, col) in slices {
            let total: BigInt = col.values().sum();
            if !total.is_zero() {
                return Err(MPolyError::NotDivisible(i));
            }
            // running suffix sums from the top exponent down
            let mut acc = BigInt::zero();
            let mut keys: Vec<i32> = col.keys().cloned().collect();
            keys.sort_unstable();
            let lo = *keys.first().expect("nonempty slice");
            let hi = *keys.last().expect("nonempty slice");
            for k in (lo..hi).rev() {
                acc += col.get(&(k + 1)).cloned().unwrap_or_else(BigInt::zero);
                if !acc.is_zero() {
                    let mut exps = rest.clone();
                    exps[i] = k;
                    out.add_term(exps, acc.clone());
                }
            }
        }
        Ok(out)
    }

    /// Unit-normal form: multiply by ±(monomial) so the minimum exponent of
    /// each variable is 0 and the lexicographically first term is positive.
    pub fn unit_normal(&self) -> Self {
        if self.terms.is_empty() {
            return self.clone();
        }
        let mut mins = vec![i32::MAX; self.vars];
        for e in self.terms.keys() {
            for (m, &x) in mins.iter_mut().zip(e) {
                *m = (*m).min(x);
            }
        }
        let mut terms: BTreeMap<Vec<i32>, BigInt> = self
            .terms
            .iter()
            .map(|(e, c)| {
                (
                    e.iter().zip(&mins).map(|(x, m)| x - m).collect(),
                    c.clone(),
                )
            })
            .collect();
        let negate = terms
            .first_key_value()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        if negate {
            for c in terms.values_mut() {
                *c = -&*c;
            }
        }
        MultiPoly {
            vars: self.vars,
            terms,
        }
    }

    /// True when the two polynomials agree up to multiplication by
    /// ±(t_1^{a_1} ... t_d^{a_d}).
    pub fn eq_up_to_units(&self, other: &Self) -> bool {
        self.vars == other.vars && self.unit_normal().terms == other.unit_normal().terms
    }

    /// Substitute t_i -> t^{w_i}: coefficients of the resulting one-variable
    /// Laurent polynomial, shifted so the constant term is the lowest
    /// exponent (constant term first). Returns the empty vector for zero.
    pub fn specialize(&self, weights: &[i64]) -> Result<Vec<BigInt>, MPolyError> {
        if weights.len() != self.vars {
            return Err(MPolyError::VarMismatch(weights.len(), self.vars));
        }
        if self.terms.is_empty() {
            return Ok(vec![]);
        }
        let mut accum: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            let deg: i64 = e.iter().zip(weights).map(|(&x, &w)| x as i64 * w).sum();
            let entry = accum.entry(deg).or_insert_with(BigInt::zero);
            *entry += c;
        }
        accum.retain(|_, c| !c.is_zero());
        if accum.is_empty() {
            return Ok(vec![]);
        }
        let lo = *accum.keys().next().expect("nonempty");
        let hi = *accum.keys().next_back().expect("nonempty");
        let mut out = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (deg, c) in accum {
            out[(deg - lo) as usize] = c;
        }
        Ok(out)
    }

    /// Substitute t_i -> t^{w_i} keeping true exponents: sorted
    /// (exponent, coefficient) pairs of the one-variable Laurent polynomial,
    /// with zero coefficients dropped. Unlike [`specialize`], no shift is
    /// applied, so negative exponents survive.
    ///
    /// [`specialize`]: MultiPoly::specialize
    pub fn specialize_exponents(&self, weights: &[i64]) -> Result<Vec<(i64, BigInt)>, MPolyError> {
        if weights.len() != self.vars {
            return Err(MPolyError::VarMismatch(weights.len(), self.vars));
        }
        let mut accum: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            let deg: i64 = e.iter().zip(weights).map(|(&x, &w)| x as i64 * w).sum();
            let entry = accum.entry(deg).or_insert_with(BigInt::zero);
            *entry += c;
        }
        accum.retain(|_, c| !c.is_zero());
        Ok(accum.into_iter().collect())
    }
}
