//! Finitely generated abelian groups in invariant-factor form.

use crate::matrix::{smith_normal_form, IntMatrix};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AbelianError {
    #[error("invariant factor {0} is invalid (must be 0 or >= 2)")]
    BadFactor(BigUint),
    #[error("factors violate the divisibility chain: {0} does not divide {1}")]
    BadChain(BigUint, BigUint),
    #[error("free summands (0) must come after all torsion factors")]
    FreeBeforeTorsion,
}

/// A finitely generated abelian group `Z/d_1 x ... x Z/d_r x Z^f`,
/// `d_1 | d_2 | ... | d_r`, each `d_i >= 2`. Free summands are encoded as
/// trailing zeros in the factor list.
#[derive(Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    factors: Vec<BigUint>,
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({})", self)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|d| {
                if d.is_zero() {
                    "Z".to_string()
                } else {
                    format!("Z/{d}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl AbelianGroup {
    /// The trivial group.
    pub fn trivial() -> Self {
        AbelianGroup { factors: vec![] }
    }

    /// Validated constructor: torsion factors (each >= 2, divisibility chain)
    /// followed by zeros for free summands.
    pub fn new(factors: Vec<BigUint>) -> Result<Self, AbelianError> {
        let mut seen_free = false;
        for f in &factors {
            if f.is_zero() {
                seen_free = true;
            } else {
                if seen_free {
                    return Err(AbelianError::FreeBeforeTorsion);
                }
                if f.is_one() {
                    return Err(AbelianError::BadFactor(f.clone()));
                }
            }
        }
        let torsion: Vec<&BigUint> = factors.iter().filter(|f| !f.is_zero()).collect();
        for w in torsion.windows(2) {
            if !(w[1] % w[0]).is_zero() {
                return Err(AbelianError::BadChain(w[0].clone(), w[1].clone()));
            }
        }
        Ok(AbelianGroup { factors })
    }

    /// Convenience constructor from machine integers (0 = free summand).
    pub fn from_u64(factors: &[u64]) -> Result<Self, AbelianError> {
        AbelianGroup::new(factors.iter().map(|&f| BigUint::from(f)).collect())
    }

    /// Cokernel of `m : Z^cols -> Z^rows` (the group presented by the columns
    /// of `m` as relations among `rows` generators).
    pub fn cokernel(m: &IntMatrix) -> Self {
        let snf = smith_normal_form(m);
        let mut factors: Vec<BigUint> = snf
            .diagonal()
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_biguint().expect("snf diagonal is non-negative"))
            .collect();
        for _ in snf.rank..m.rows() {
            factors.push(BigUint::zero());
        }
        AbelianGroup { factors }
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|f| f.is_zero()).count()
    }

    pub fn torsion_factors(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().filter(|f| !f.is_zero())
    }

    /// Group order; `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(self.torsion_factors().product())
    }

    /// v_p of the order of the p-primary torsion part; `None` when the group
    /// has a free summand (the p-part of the order is then unbounded).
    pub fn p_exponent(&self, p: u64) -> Option<u64> {
        if self.free_rank() > 0 {
            return None;
        }
        let p = BigUint::from(p);
        let mut total = 0u64;
        for f in self.torsion_factors() {
            let mut f = f.clone();
            loop {
                let (q, r) = f.div_rem(&p);
                if !r.is_zero() {
                    break;
                }
                total += 1;
                f = q;
            }
        }
        Some(total)
    }

    /// Number of invariant factors with nontrivial p-part, plus free rank:
    /// the minimal number of generators of the p-completion.
    pub fn p_rank(&self, p: u64) -> usize {
        let p = BigUint::from(p);
        self.factors
            .iter()
            .filter(|f| f.is_zero() || (*f % &p).is_zero())
            .count()
    }

    /// The p-primary part: each torsion factor is replaced by its p-power
    /// component; free summands are kept (their p-completion is Z_p).
    pub fn p_part(&self, p: u64) -> AbelianGroup {
        let pb = BigUint::from(p);
        let mut factors = Vec::new();
        for f in &self.factors {
            if f.is_zero() {
                factors.push(BigUint::zero());
                continue;
            }
            let mut rest = f.clone();
            let mut part = BigUint::one();
            loop {
                let (q, r) = rest.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                part *= &pb;
                rest = q;
            }
            if !part.is_one() {
                factors.push(part);
            }
        }
        // divisibility chain among p-powers is automatic after sorting
        factors.sort();
        let zeros = factors.iter().filter(|f| f.is_zero()).count();
        factors.rotate_left(zeros);
        AbelianGroup { factors }
    }

    /// Render as e.g. `Z/3 + Z/9 + Z^2` with free part aggregated.
    pub fn display_compact(&self) -> String {
        if self.factors.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = self
            .torsion_factors()
            .map(|d| format!("Z/{d}"))
            .collect();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.join(" + ")
    }

    /// Order as u64 when finite and small enough (testing convenience).
    pub fn order_u64(&self) -> Option<u64> {
        self.order().and_then(|o| o.to_u64())
    }
}
