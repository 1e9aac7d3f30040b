//! Finitely generated torsion Λ-modules in elementary normal form
//! E = ⊕_i Λ/(p^{μ_i}) ⊕ ⊕_j Λ/(g_j), with each g_j a monic distinguished
//! polynomial with exact integer coefficients.
//!
//! The two level-quotient routes are deliberately independent:
//! [`LambdaModuleNF::quotient_order`] factors nu through p-power cyclotomics
//! and takes Sylvester resultants, while
//! [`LambdaModuleNF::quotient_order_cokernel`] evaluates nu on the companion
//! matrix of each g_j and reads the cokernel off a Smith normal form.

use crate::abelian::AbelianGroup;
use crate::matrix::IntMatrix;
use crate::resultant::resultant_int;
use crate::series::{cyclotomic_int_coeffs, nu_int_coeffs};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum NfError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("p-power exponents must be positive")]
    ZeroExponent,
    #[error("polynomial factor must be monic of degree >= 1 (constant term first)")]
    NotMonic,
    #[error("polynomial factor is not distinguished: coefficient {0} below top degree is a p-unit")]
    NotDistinguished(usize),
    #[error("level arithmetic overflow (p^n too large)")]
    Overflow,
}

/// Order of E/(nu_{p^n} E): a p-power, or infinite from some cyclotomic
/// level on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientOrder {
    /// The quotient has order p^exponent.
    Finite { exponent: u64 },
    /// A factor is divisible by the level-`level` p-power cyclotomic, so
    /// every quotient at this level and beyond is infinite.
    InfiniteFrom { level: u32 },
}

/// Growth parameters: exponent(n) = lambda*n + mu*p^n + nu for n >= stable_from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthInvariants {
    pub lambda: u64,
    pub mu: u64,
    pub nu: i64,
    pub stable_from: u32,
}

/// Asymptotic shape of the p-primary direct limit of the level quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectLimitShape {
    /// Corank of the divisible part, equal to lambda.
    pub divisible_corank: u64,
    /// True when mu = 0, i.e. the non-divisible part stays bounded.
    pub bounded: bool,
    /// Cyclotomic levels whose factor divides some g_j (quotients are
    /// infinite from the smallest listed level on).
    pub infinite_levels: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct LambdaModuleNF {
    prime: u64,
    p_power_exponents: Vec<u32>,
    distinguished: Vec<Vec<BigInt>>,
}

impl LambdaModuleNF {
    pub fn new(
        prime: u64,
        p_power_exponents: Vec<u32>,
        distinguished: Vec<Vec<BigInt>>,
    ) -> Result<Self, NfError> {
        if !crate::padic::is_prime_u64(prime) {
            return Err(NfError::NotPrime(prime));
        }
        if p_power_exponents.contains(&0) {
            return Err(NfError::ZeroExponent);
        }
        let p = BigInt::from(prime);
        for g in &distinguished {
            if g.len() < 2 || !g.last().expect("nonempty").is_one() {
                return Err(NfError::NotMonic);
            }
            for (i, c) in g.iter().enumerate().take(g.len() - 1) {
                if !(c % &p).is_zero() {
                    return Err(NfError::NotDistinguished(i));
                }
            }
        }
        Ok(LambdaModuleNF {
            prime,
            p_power_exponents,
            distinguished,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn lambda(&self) -> u64 {
        self.distinguished.iter().map(|g| (g.len() - 1) as u64).sum()
    }

    pub fn mu(&self) -> u64 {
        self.p_power_exponents.iter().map(|&m| m as u64).sum()
    }

    fn vp(&self, x: &BigInt) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let p = BigInt::from(self.prime);
        let mut v = 0u64;
        let mut x = x.abs();
        while (&x % &p).is_zero() {
            x /= &p;
            v += 1;
        }
        Some(v)
    }

    /// v_p(Res(Phi_{p^j}(1+T), g)); `None` when the resultant vanishes,
    /// i.e. the cyclotomic divides g.
    fn cyclotomic_level_valuation(&self, j: u32, g: &[BigInt]) -> Option<u64> {
        let phi = cyclotomic_int_coeffs(self.prime, j);
        let r = resultant_int(&phi, g).expect("nonzero polynomials");
        self.vp(&r)
    }

    /// Order of E/(nu_{p^n} E), via the cyclotomic factorization
    /// nu_{p^n} = prod_{j<=n} Phi_{p^j}(1+T) and exact integer resultants.
    pub fn quotient_order(&self, n: u32) -> Result<QuotientOrder, NfError> {
        let pn = (self.prime)
            .checked_pow(n)
            .ok_or(NfError::Overflow)?;
        let deg_nu = pn - 1;
        let mut exponent: u64 = 0;
        for &m in &self.p_power_exponents {
            exponent = exponent
                .checked_add((m as u64).checked_mul(deg_nu).ok_or(NfError::Overflow)?)
                .ok_or(NfError::Overflow)?;
        }
        for g in &self.distinguished {
            for j in 1..=n {
                match self.cyclotomic_level_valuation(j, g) {
                    Some(v) => exponent = exponent.checked_add(v).ok_or(NfError::Overflow)?,
                    None => return Ok(QuotientOrder::InfiniteFrom { level: j }),
                }
            }
        }
        Ok(QuotientOrder::Finite { exponent })
    }

    /// Independent route: the same order from the Smith normal form of
    /// nu_{p^n} evaluated on the companion matrix of each g_j.
    pub fn quotient_order_cokernel(&self, n: u32) -> Result<QuotientOrder, NfError> {
        let pn_usize = usize::try_from(
            (self.prime).checked_pow(n).ok_or(NfError::Overflow)?,
        )
        .map_err(|_| NfError::Overflow)?;
        let deg_nu = pn_usize - 1;
        let mut exponent: u64 = 0;
        for &m in &self.p_power_exponents {
            // (Z/p^m)[T]/(nu): cokernel of p^m * I_{deg nu}
            let pm = BigInt::from(self.prime).pow(m);
            let mut mat = IntMatrix::zero(deg_nu, deg_nu);
            for i in 0..deg_nu {
                mat.set(i, i, pm.clone());
            }
            let coker = AbelianGroup::cokernel(&mat);
            let e = coker
                .p_exponent(self.prime)
                .expect("finite by construction");
            exponent = exponent.checked_add(e).ok_or(NfError::Overflow)?;
        }
        let nu = nu_int_coeffs(self.prime, n);
        for g in &self.distinguished {
            let d = g.len() - 1;
            let comp = companion(g);
            // Horner: M = nu(comp)
            let mut m = scalar_matrix(d, nu.last().expect("nonempty"));
            for c in nu.iter().rev().skip(1) {
                m = m.mul(&comp).expect("square");
                for i in 0..d {
                    let cur = m.get(i, i).clone();
                    m.set(i, i, cur + c);
                }
            }
            let coker = AbelianGroup::cokernel(&m);
            match coker.p_exponent(self.prime) {
                Some(e) => exponent = exponent.checked_add(e).ok_or(NfError::Overflow)?,
                None => {
                    // free rank > 0: locate the first offending level
                    for j in 1..=n {
                        if self.cyclotomic_level_valuation(j, g).is_none() {
                            return Ok(QuotientOrder::InfiniteFrom { level: j });
                        }
                    }
                    unreachable!("free cokernel without a vanishing cyclotomic resultant");
                }
            }
        }
        Ok(QuotientOrder::Finite { exponent })
    }

    /// Smallest level from which per-level cyclotomic contributions equal
    /// deg g for every factor: (p-1) p^(j-1) > max deg g_j.
    fn stabilization_level(&self) -> u32 {
        let dmax = self
            .distinguished
            .iter()
            .map(|g| (g.len() - 1) as u64)
            .max()
            .unwrap_or(0);
        let mut j = 1u32;
        let mut phi_deg = self.prime - 1; // (p-1) p^(j-1) at j = 1
        while phi_deg <= dmax {
            j += 1;
            phi_deg *= self.prime;
        }
        j
    }

    /// Growth invariants (lambda, mu, nu, n0) with
    /// exponent(n) = lambda n + mu p^n + nu for all n >= n0.
    /// Errors with `InfiniteFrom` information when some quotient is infinite.
    pub fn invariants(&self) -> Result<GrowthInvariants, QuotientOrder> {
        let lambda = self.lambda();
        let mu = self.mu();
        let n0 = self.stabilization_level();
        // exponent(n0) = mu (p^n0 - 1) + sum_j sum_{l<=n0} c_l(g_j)
        let mut e_n0: i64 = 0;
        let pn0 = (self.prime as i64)
            .checked_pow(n0)
            .expect("stabilization level is small");
        e_n0 += mu as i64 * (pn0 - 1);
        for g in &self.distinguished {
            for l in 1..=n0 {
                match self.cyclotomic_level_valuation(l, g) {
                    Some(v) => e_n0 += v as i64,
                    None => return Err(QuotientOrder::InfiniteFrom { level: l }),
                }
            }
        }
        let nu = e_n0 - lambda as i64 * n0 as i64 - mu as i64 * pn0;
        Ok(GrowthInvariants {
            lambda,
            mu,
            nu,
            stable_from: n0,
        })
    }

    /// Shape of the direct limit of the level quotients.
    pub fn direct_limit_shape(&self) -> DirectLimitShape {
        let mut infinite_levels = Vec::new();
        for g in &self.distinguished {
            // a distinguished factor can only contain finitely many
            // cyclotomics: their degrees are bounded by deg g
            let mut j = 1u32;
            loop {
                let phi_deg = (self.prime - 1)
                    * self.prime.checked_pow(j - 1).unwrap_or(u64::MAX);
                if phi_deg > (g.len() - 1) as u64 {
                    break;
                }
                if self.cyclotomic_level_valuation(j, g).is_none()
                    && !infinite_levels.contains(&j)
                {
                    infinite_levels.push(j);
                }
                j += 1;
            }
        }
        infinite_levels.sort_unstable();
        DirectLimitShape {
            divisible_corank: self.lambda(),
            bounded: self.mu() == 0,
            infinite_levels,
        }
    }
}

fn companion(g: &[BigInt]) -> IntMatrix {
    let d = g.len() - 1;
    let mut m = IntMatrix::zero(d, d);
    for i in 1..d {
        m.set(i, i - 1, BigInt::one());
    }
    for (i, gi) in g.iter().enumerate().take(d) {
        m.set(i, d - 1, -gi.clone());
    }
    m
}

fn scalar_matrix(d: usize, c: &BigInt) -> IntMatrix {
    let mut m = IntMatrix::zero(d, d);
    for i in 0..d {
        m.set(i, i, c.clone());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn finite(q: QuotientOrder) -> u64 {
        match q {
            QuotientOrder::Finite { exponent } => exponent,
            other => panic!("expected finite order, got {other:?}"),
        }
    }

    #[test]
    fn quotients_of_lambda_mod_t() {
        for p in [2u64, 3] {
            let nf = LambdaModuleNF::new(p, vec![], vec![ints(&[0, 1])]).unwrap();
            for n in 0..=3u32 {
                let fast = finite(nf.quotient_order(n).unwrap());
                let brute = finite(nf.quotient_order_cokernel(n).unwrap());
                assert_eq!(fast, n as u64, "p={p} n={n}");
                assert_eq!(brute, fast, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn quotients_of_lambda_mod_t_squared() {
        for p in [2u64, 3] {
            let nf = LambdaModuleNF::new(p, vec![], vec![ints(&[0, 0, 1])]).unwrap();
            for n in 0..=3u32 {
                assert_eq!(finite(nf.quotient_order(n).unwrap()), 2 * n as u64);
                assert_eq!(
                    finite(nf.quotient_order_cokernel(n).unwrap()),
                    2 * n as u64
                );
            }
        }
    }

    #[test]
    fn quotients_of_lambda_mod_p() {
        for p in [2u64, 3] {
            let nf = LambdaModuleNF::new(p, vec![1], vec![]).unwrap();
            for n in 0..=3u32 {
                let expect = p.pow(n) - 1;
                assert_eq!(finite(nf.quotient_order(n).unwrap()), expect);
                assert_eq!(finite(nf.quotient_order_cokernel(n).unwrap()), expect);
            }
        }
    }

    #[test]
    fn quotients_of_lambda_mod_t_plus_p() {
        // at p = 2 the polynomial T + 2 IS the first p-power cyclotomic, so
        // quotients are infinite from level 1; at odd p they grow like n
        let nf2 = LambdaModuleNF::new(2, vec![], vec![ints(&[2, 1])]).unwrap();
        assert_eq!(finite(nf2.quotient_order(0).unwrap()), 0);
        for n in 1..=3u32 {
            assert_eq!(
                nf2.quotient_order(n).unwrap(),
                QuotientOrder::InfiniteFrom { level: 1 }
            );
            assert_eq!(
                nf2.quotient_order_cokernel(n).unwrap(),
                QuotientOrder::InfiniteFrom { level: 1 }
            );
        }
        let nf3 = LambdaModuleNF::new(3, vec![], vec![ints(&[3, 1])]).unwrap();
        for n in 0..=3u32 {
            assert_eq!(finite(nf3.quotient_order(n).unwrap()), n as u64);
            assert_eq!(finite(nf3.quotient_order_cokernel(n).unwrap()), n as u64);
        }
    }

    #[test]
    fn cyclotomic_factors_make_quotients_infinite() {
        for (p, j) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2)] {
            let g = cyclotomic_int_coeffs(p, j);
            let nf = LambdaModuleNF::new(p, vec![], vec![g]).unwrap();
            for n in 0..j {
                assert!(
                    matches!(nf.quotient_order(n).unwrap(), QuotientOrder::Finite { .. }),
                    "p={p} j={j} n={n} should still be finite"
                );
            }
            for n in j..=j + 1 {
                assert_eq!(
                    nf.quotient_order(n).unwrap(),
                    QuotientOrder::InfiniteFrom { level: j },
                    "p={p} j={j} n={n}"
                );
                assert_eq!(
                    nf.quotient_order_cokernel(n).unwrap(),
                    QuotientOrder::InfiniteFrom { level: j },
                );
            }
            assert_eq!(nf.invariants().unwrap_err(), QuotientOrder::InfiniteFrom {
                level: j
            });
            assert_eq!(nf.direct_limit_shape().infinite_levels, vec![j]);
        }
    }

    #[test]
    fn invariants_of_simple_modules() {
        // Λ/(T): growth n = 1*n + 0 + 0
        let nf = LambdaModuleNF::new(3, vec![], vec![ints(&[0, 1])]).unwrap();
        let inv = nf.invariants().unwrap();
        assert_eq!((inv.lambda, inv.mu, inv.nu), (1, 0, 0));

        // Λ/(p): growth p^n - 1
        let nf = LambdaModuleNF::new(3, vec![1], vec![]).unwrap();
        let inv = nf.invariants().unwrap();
        assert_eq!((inv.lambda, inv.mu, inv.nu), (0, 1, -1));

        // Λ/(T^2 + p) at p = 3: exponents 2n + 1 from n >= 1
        let nf = LambdaModuleNF::new(3, vec![], vec![ints(&[3, 0, 1])]).unwrap();
        let inv = nf.invariants().unwrap();
        assert_eq!((inv.lambda, inv.mu, inv.nu), (2, 0, 1));
        // check prediction against both order routes at reachable levels
        for n in 1..=2u32 {
            let predicted = (2 * n + 1) as u64;
            assert_eq!(finite(nf.quotient_order(n).unwrap()), predicted);
            assert_eq!(finite(nf.quotient_order_cokernel(n).unwrap()), predicted);
        }

        // mixed: Λ/(p) ⊕ Λ/(T): exponent (p^n - 1) + n
        let nf = LambdaModuleNF::new(2, vec![1], vec![ints(&[0, 1])]).unwrap();
        let inv = nf.invariants().unwrap();
        assert_eq!((inv.lambda, inv.mu, inv.nu), (1, 1, -1));
        for n in 0..=3u32 {
            let predicted = (2u64.pow(n) - 1) + n as u64;
            assert_eq!(finite(nf.quotient_order(n).unwrap()), predicted);
            assert_eq!(finite(nf.quotient_order_cokernel(n).unwrap()), predicted);
        }
    }

    #[test]
    fn invariants_prediction_matches_orders_at_stable_levels() {
        // a thicker example: Λ/(T^2 + 2T + 4) ⊕ Λ/(2) at p = 2
        let nf = LambdaModuleNF::new(2, vec![1], vec![ints(&[4, 2, 1])]).unwrap();
        let inv = nf.invariants().unwrap();
        assert_eq!(inv.lambda, 2);
        assert_eq!(inv.mu, 1);
        for n in inv.stable_from..=(inv.stable_from + 2) {
            let predicted = inv.lambda as i64 * n as i64
                + inv.mu as i64 * 2i64.pow(n)
                + inv.nu;
            assert_eq!(
                finite(nf.quotient_order(n).unwrap()) as i64,
                predicted,
                "n={n}"
            );
            assert_eq!(
                finite(nf.quotient_order_cokernel(n).unwrap()) as i64,
                predicted,
            );
        }
    }

    #[test]
    fn validation_rejects_bad_factors() {
        assert_eq!(
            LambdaModuleNF::new(4, vec![], vec![]).unwrap_err(),
            NfError::NotPrime(4)
        );
        assert_eq!(
            LambdaModuleNF::new(3, vec![0], vec![]).unwrap_err(),
            NfError::ZeroExponent
        );
        // not monic
        assert_eq!(
            LambdaModuleNF::new(3, vec![], vec![ints(&[3, 2])]).unwrap_err(),
            NfError::NotMonic
        );
        // not distinguished: constant term is a unit
        assert_eq!(
            LambdaModuleNF::new(3, vec![], vec![ints(&[1, 1])]).unwrap_err(),
            NfError::NotDistinguished(0)
        );
    }

    #[test]
    fn direct_limit_shape_reports_corank_and_boundedness() {
        let nf = LambdaModuleNF::new(3, vec![2], vec![ints(&[0, 1]), ints(&[3, 0, 1])]).unwrap();
        let shape = nf.direct_limit_shape();
        assert_eq!(shape.divisible_corank, 3);
        assert!(!shape.bounded);
        assert!(shape.infinite_levels.is_empty());
    }
}
