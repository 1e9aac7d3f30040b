//! Tower engine: homology growth along the Z_p-tower of cyclic branched
//! covers attached to a link and a meridian character.
//!
//! A tower is described by a [`TowerSpec`]: a link (presentation and/or
//! linking data), a character assigning a p-adic value to each meridian, a
//! working precision, and a base manifold. Levels are the p^n-fold cyclic
//! branched covers M_n. The engine computes the p-exponent of #H_1(M_n) two
//! independent ways:
//!
//! * **fast path** — the reduced characteristic element char(T), obtained
//!   from the multivariable Alexander polynomial by the substitution
//!   t_i -> (1+T)^{v_i} (times an extra factor of T when the link has two or
//!   more components). The level-n exponent is
//!   v_p(Res(nu_{p^n}, char)) with nu_N(T) = ((1+T)^N - 1)/T, evaluated as
//!   mu·(p^n - 1) plus the valuation of det(I + A + ... + A^{N-1}) for
//!   A = I + C, C the companion matrix of the distinguished Weierstrass
//!   factor. Valuations are certified mod p^k and the precision is doubled
//!   (up to a cap) whenever a result is indeterminate.
//! * **oracle** — an equivariant chain complex of the cover itself
//!   ([`crate::cover::branched_cover_homology`]), feasible for small degrees.
//!
//! The fast path is calibrated for characters whose values are all p-adic
//! units, so that every component is branched at every finite level; other
//! characters are served by the oracle only.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::abelian::AbelianGroup;
use crate::cover::{branched_cover_homology, CoverError};
use crate::link::fox::alexander_polynomial;
use crate::link::{validate_tau, LinkError, LinkPresentation, LinkingMatrix, TauMap};
use crate::nf::{LambdaModuleNF, NfError, QuotientOrder};
use crate::padic::{PAdicInt, PadicError, Valuation};
use crate::resultant::det_valuation_mod;
use crate::series::{
    binom_series, cyclotomic_factor_profile, weierstrass_prepare, LambdaElement, SeriesError,
};

/// Largest cover degree the chain-level oracle attempts by default.
pub const ORACLE_DEFAULT_MAX: u64 = 9;

/// Integer meridian values above this bound are treated as opaque p-adic
/// data: a residue that large is indistinguishable from a truncation of a
/// non-integer value, so the exact-polynomial route refuses to guess.
const MAX_EXACT_WEIGHT: i64 = 4096;

/// Largest exponent span the exact substitution route expands; beyond this
/// the quadratic-time shift to the variable T is not worth an exact answer.
const MAX_EXACT_SPAN: i64 = 4096;

#[derive(Debug, Error)]
pub enum TowerError {
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Nf(#[from] NfError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("the link entry has no group presentation, only linking data")]
    NoPresentation,
    #[error("linking data unavailable: {0}")]
    NoLinking(String),
    #[error("invalid tower description: {0}")]
    BadSpec(String),
    #[error("the homology oracle needs a three-sphere base")]
    OracleNeedsSphere,
    #[error("cover degree {degree} at level {level} exceeds the oracle bound {max}")]
    OracleBound { level: u32, degree: u64, max: u64 },
    #[error(
        "component {0} has a non-unit meridian value; the fast path is \
         calibrated for characters branched over every component at every \
         level, so use the chain-level oracle instead"
    )]
    PartialBranching(usize),
    #[error("the characteristic element vanishes, so level homology is infinite")]
    InfiniteLevels,
    #[error("level {level} is not a rational homology sphere: cyclotomic factor profile {profile:?}")]
    NotRationalAtLevel { level: u32, profile: Vec<(u32, u32)> },
    #[error(
        "exponent at level {level} is indeterminate at precision {precision} \
         (certified lower bound {lower_bound}); raise the precision or the cap"
    )]
    IndeterminateValuation {
        level: u32,
        precision: u32,
        lower_bound: u64,
    },
    #[error("fast path and oracle disagree at level {level}: fast exponent {fast}, oracle group {oracle}")]
    OracleMismatch { level: u32, fast: u64, oracle: String },
    #[error("exponent growth fit failed: {0}")]
    FitFailure(String),
    #[error("level {0} is too large for this machine")]
    LevelTooLarge(u32),
}

/// A link as bundled for tower computations: a group presentation when one
/// is known, and/or a table of pairwise linking numbers. At least one of the
/// two must be present. A multivariable Alexander polynomial may be supplied
/// directly; it then takes precedence over the one computed from the
/// presentation, and enables the resultant route for presentation-less
/// links (the chain-level oracle still needs a presentation).
#[derive(Debug, Clone)]
pub struct LinkData {
    pub name: String,
    pub presentation: Option<LinkPresentation>,
    pub linking_override: Option<LinkingMatrix>,
    pub alexander_override: Option<crate::mpoly::MultiPoly>,
}

impl LinkData {
    pub fn new(
        name: impl Into<String>,
        presentation: Option<LinkPresentation>,
        linking_override: Option<LinkingMatrix>,
    ) -> Result<Self, TowerError> {
        if presentation.is_none() && linking_override.is_none() {
            return Err(TowerError::BadSpec(
                "a link entry needs a presentation or a linking table".into(),
            ));
        }
        Ok(LinkData {
            name: name.into(),
            presentation,
            linking_override,
            alexander_override: None,
        })
    }

    pub fn from_presentation(presentation: LinkPresentation) -> Self {
        LinkData {
            name: presentation.name.clone(),
            presentation: Some(presentation),
            linking_override: None,
            alexander_override: None,
        }
    }

    /// Attach an explicitly supplied multivariable Alexander polynomial.
    pub fn with_alexander_override(mut self, delta: crate::mpoly::MultiPoly) -> Self {
        self.alexander_override = Some(delta);
        self
    }

    pub fn component_count(&self) -> usize {
        if let Some(p) = &self.presentation {
            p.component_count
        } else {
            self.linking_override
                .as_ref()
                .map(|l| l.component_count())
                .unwrap_or(0)
        }
    }

    /// Pairwise linking numbers: an explicit table wins; otherwise they are
    /// read off a stored diagram.
    pub fn linking(&self) -> Option<LinkingMatrix> {
        if let Some(l) = &self.linking_override {
            return Some(l.clone());
        }
        self.presentation
            .as_ref()
            .and_then(|p| p.pd_source.as_ref())
            .and_then(|pd| LinkingMatrix::from_pd(pd).ok())
    }

    pub fn require_presentation(&self) -> Result<&LinkPresentation, TowerError> {
        self.presentation.as_ref().ok_or(TowerError::NoPresentation)
    }
}

/// Base manifold of the tower.
#[derive(Debug, Clone)]
pub enum TowerBase {
    /// The three-sphere.
    Sphere,
    /// A rational homology sphere, described by its first homology and the
    /// characteristic element of its tower module (integer coefficients in
    /// T, constant term first). The chain-level oracle is unavailable here;
    /// only the fast path runs.
    Rational {
        h1: AbelianGroup,
        lambda_element: Vec<BigInt>,
    },
}

/// Full description of a tower of cyclic branched covers.
#[derive(Debug, Clone)]
pub struct TowerSpec {
    pub name: String,
    pub link: LinkData,
    pub tau: TauMap,
    pub prime: u64,
    /// Working p-adic precision (digits).
    pub precision: u32,
    /// Truncation order for series arithmetic on non-polynomial data.
    pub truncation: usize,
    /// Deepest level computed by ladder and invariant extraction.
    pub n_max: u32,
    pub base: TowerBase,
    /// Hard ceiling for precision escalation; `None` picks a default.
    pub precision_cap: Option<u32>,
}

impl TowerSpec {
    pub fn validate(&self) -> Result<(), TowerError> {
        if !crate::padic::is_prime_u64(self.prime) {
            return Err(TowerError::BadSpec(format!("{} is not prime", self.prime)));
        }
        if self.tau.prime != self.prime {
            return Err(TowerError::BadSpec(format!(
                "character prime {} differs from tower prime {}",
                self.tau.prime, self.prime
            )));
        }
        if self.precision == 0 {
            return Err(TowerError::BadSpec("precision must be positive".into()));
        }
        if self.truncation < 2 {
            return Err(TowerError::BadSpec(
                "truncation order must be at least 2".into(),
            ));
        }
        if self.n_max < 2 {
            return Err(TowerError::BadSpec(
                "towers are computed to depth at least 2".into(),
            ));
        }
        if self.tau.values.len() != self.link.component_count() {
            return Err(TowerError::BadSpec(format!(
                "character has {} values for {} components",
                self.tau.values.len(),
                self.link.component_count()
            )));
        }
        if let Some(table) = &self.link.alexander_override {
            if table.vars() != self.link.component_count() {
                return Err(TowerError::BadSpec(format!(
                    "the supplied Alexander polynomial has {} variables for {} components",
                    table.vars(),
                    self.link.component_count()
                )));
            }
        }
        if let TowerBase::Rational { h1, lambda_element } = &self.base {
            if h1.order().is_none() {
                return Err(TowerError::BadSpec(
                    "the base homology must be finite".into(),
                ));
            }
            if lambda_element.is_empty() {
                return Err(TowerError::BadSpec(
                    "the base characteristic element must be supplied".into(),
                ));
            }
        }
        Ok(())
    }

    fn cap(&self) -> u32 {
        self.precision_cap
            .unwrap_or_else(|| (self.precision.saturating_mul(8)).max(64))
    }
}

/// (lambda, mu, nu) growth triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantTriple {
    pub lambda: u64,
    pub mu: u64,
    pub nu: i64,
}

/// Result of invariant extraction over a full tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerInvariants {
    pub lambda: u64,
    pub mu: u64,
    pub nu: i64,
    /// Smallest level from which exponent(n) = lambda·n + mu·p^n + nu holds
    /// among the computed levels.
    pub n0: u32,
    /// Rational-homology-sphere verdict per level 1..=n_max.
    pub qhs3_levels: Vec<bool>,
}

/// How a ladder level was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelProvenance {
    /// Fast path only.
    Resultant,
    /// Fast path confirmed by the chain-level oracle.
    Both,
}

/// One level of the tower.
#[derive(Debug, Clone)]
pub struct LadderLevel {
    pub level: u32,
    /// Cover degree p^level.
    pub degree: u64,
    /// p-exponent of #H_1(M_n) relative to the base contribution.
    pub exponent: u64,
    /// Full homology group when the oracle ran at this level.
    pub oracle: Option<AbelianGroup>,
    pub provenance: LevelProvenance,
}

/// Exponents (and oracle groups where feasible) for levels 1..=n_max.
#[derive(Debug, Clone)]
pub struct HomologyLadder {
    pub prime: u64,
    /// v_p of #H_1 of the base manifold, added to every relative exponent to
    /// obtain the absolute one.
    pub offset: u64,
    pub levels: Vec<LadderLevel>,
}

/// Outcome of the quotient-order cross-check at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SakumaReport {
    pub level: u32,
    pub oracle_exponent: u64,
    pub module_exponent: u64,
    pub agrees: bool,
}

// ---------------------------------------------------------------------------
// characteristic element
// ---------------------------------------------------------------------------

/// Internal representation of the characteristic element.
#[derive(Debug, Clone)]
enum CharElement {
    /// Exact integer polynomial in T, constant term first.
    Exact(Vec<BigInt>),
    /// Truncated series (non-integer meridian values).
    Approx(LambdaElement),
}

fn vp_biguint(prime: u64, x: &BigUint) -> u64 {
    use num_integer::Integer;
    debug_assert!(!x.is_zero());
    let p = BigUint::from(prime);
    let mut v = 0u64;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

fn vp_bigint(prime: u64, x: &BigInt) -> u64 {
    vp_biguint(prime, x.magnitude())
}

/// Integer meridian values small enough for the exact substitution route.
fn small_integer_weights(tau: &TauMap) -> Option<Vec<i64>> {
    tau.integer_weights()
        .filter(|ws| ws.iter().all(|&w| w <= MAX_EXACT_WEIGHT))
}

/// f(t) -> f(1+T) on exact integer coefficients (constant term first).
fn taylor_shift_one(q: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); q.len()];
    for (j, c) in q.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut binom = BigInt::one();
        for (i, slot) in out.iter_mut().enumerate().take(j + 1) {
            *slot += c * &binom;
            binom = binom * BigInt::from((j - i) as u64) / BigInt::from(i as u64 + 1);
        }
    }
    while out.last().map(|x| x.is_zero()).unwrap_or(false) {
        out.pop();
    }
    out
}

/// The reduced characteristic element of the tower at the given working
/// precision, with series data truncated at `min_order` terms at least.
fn characteristic_element(
    spec: &TowerSpec,
    precision: u32,
    min_order: usize,
) -> Result<CharElement, TowerError> {
    if let TowerBase::Rational { lambda_element, .. } = &spec.base {
        let mut c = lambda_element.clone();
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        return Ok(CharElement::Exact(c));
    }
    for (i, v) in spec.tau.values.iter().enumerate() {
        if !v.is_unit() {
            return Err(TowerError::PartialBranching(i));
        }
    }
    let delta = match (&spec.link.alexander_override, &spec.link.presentation) {
        (Some(table), _) => table.clone(),
        (None, Some(pres)) => {
            validate_tau(pres, &spec.tau)?;
            alexander_polynomial(pres)?
        }
        (None, None) => return Err(TowerError::NoPresentation),
    };
    if delta.is_zero() {
        return Ok(CharElement::Exact(vec![]));
    }
    let d = spec.link.component_count();

    if let Some(weights) = small_integer_weights(&spec.tau) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for (e, _) in delta.terms() {
            let s: i64 = e.iter().zip(&weights).map(|(&x, &w)| x as i64 * w).sum();
            lo = lo.min(s);
            hi = hi.max(s);
        }
        if hi - lo <= MAX_EXACT_SPAN {
            let q = delta.specialize(&weights).map_err(LinkError::Poly)?;
            let mut coeffs = taylor_shift_one(&q);
            if d >= 2 {
                coeffs.insert(0, BigInt::zero());
            }
            return Ok(CharElement::Exact(coeffs));
        }
    }

    // Opaque p-adic values: per-term binomial series at the precision the
    // character actually carries.
    let k = precision.min(spec.tau.precision);
    let order = min_order.max(spec.truncation).max(2);
    let values: Vec<PAdicInt> = spec
        .tau
        .values
        .iter()
        .map(|v| v.truncate(k))
        .collect::<Result<_, _>>()?;
    let mut acc = LambdaElement::zero(spec.prime, k);
    for (e, coeff) in delta.terms() {
        let mut s = PAdicInt::zero(spec.prime, k);
        for (&ei, v) in e.iter().zip(&values) {
            s = s.add(&v.mul_i64(ei as i64))?;
        }
        let b = binom_series(&s, order)?;
        let c = PAdicInt::new(spec.prime, b.precision(), coeff.clone())?;
        acc = acc.add(&b.scale(&c)?)?;
    }
    if d >= 2 {
        acc = acc.mul_t_power(1);
    }
    Ok(CharElement::Approx(acc))
}

fn render_char(
    ch: &CharElement,
    prime: u64,
    precision: u32,
) -> Result<LambdaElement, TowerError> {
    match ch {
        CharElement::Exact(coeffs) => {
            Ok(LambdaElement::poly_from_bigints(prime, precision, coeffs)?)
        }
        CharElement::Approx(e) => Ok(e.clone()),
    }
}

/// The reduced characteristic element char(T) of the tower: for a
/// three-sphere base, the Alexander polynomial under t_i -> (1+T)^{v_i}
/// (times T when the link has several components); for a rational homology
/// sphere base, the element supplied with the base data. Well defined up to
/// units of the Iwasawa algebra.
pub fn reduced_alexander(spec: &TowerSpec) -> Result<LambdaElement, TowerError> {
    spec.validate()?;
    let ch = characteristic_element(spec, spec.precision, spec.truncation)?;
    if let CharElement::Exact(coeffs) = &ch {
        if coeffs.is_empty() {
            return Ok(LambdaElement::zero(spec.prime, spec.precision));
        }
    }
    render_char(&ch, spec.prime, spec.precision)
}

// ---------------------------------------------------------------------------
// precision escalation driver
// ---------------------------------------------------------------------------

enum Probe<T> {
    Done(T),
    Retry(TowerError),
}

/// Runs `f` on the characteristic element, doubling the working precision
/// (up to the cap) while `f` reports an indeterminate result.
fn with_escalation<T>(
    spec: &TowerSpec,
    min_order: usize,
    f: impl Fn(&CharElement, u32) -> Result<Probe<T>, TowerError>,
) -> Result<T, TowerError> {
    let cap = spec.cap().max(spec.precision);
    let mut k = spec.precision;
    loop {
        let ch = characteristic_element(spec, k, min_order)?;
        match f(&ch, k)? {
            Probe::Done(t) => return Ok(t),
            Probe::Retry(err) => {
                let k2 = k.saturating_mul(2).min(cap);
                if k2 <= k {
                    return Err(err);
                }
                k = k2;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// level exponents (fast path)
// ---------------------------------------------------------------------------

/// Weierstrass data of the characteristic element, ready for companion
/// matrix work: mu, and the distinguished factor's residues mod p^prec.
struct CharData {
    mu: u64,
    lambda: usize,
    p_res: Vec<BigUint>,
    prec: u32,
}

fn char_weierstrass(
    ch: &CharElement,
    prime: u64,
    precision: u32,
) -> Result<Option<CharData>, TowerError> {
    match ch {
        CharElement::Exact(coeffs) => {
            if coeffs.iter().all(|c| c.is_zero()) {
                return Err(TowerError::InfiniteLevels);
            }
            let mu = coeffs
                .iter()
                .filter(|c| !c.is_zero())
                .map(|c| vp_bigint(prime, c))
                .min()
                .expect("some coefficient is nonzero");
            let mu32 = u32::try_from(mu)
                .map_err(|_| TowerError::BadSpec("p-power content is absurdly large".into()))?;
            let pm = BigInt::from(prime).pow(mu32);
            let stripped: Vec<BigInt> = coeffs.iter().map(|c| c / &pm).collect();
            let f0 = LambdaElement::poly_from_bigints(prime, precision, &stripped)?;
            let w = weierstrass_prepare(&f0)?;
            Ok(Some(CharData {
                mu,
                lambda: w.lambda,
                p_res: w.distinguished.coeff_residues().to_vec(),
                prec: w.distinguished.precision(),
            }))
        }
        CharElement::Approx(e) => {
            if e.is_zero_at_precision() {
                return Ok(None);
            }
            match weierstrass_prepare(e) {
                Ok(w) => Ok(Some(CharData {
                    mu: w.mu as u64,
                    lambda: w.lambda,
                    p_res: w.distinguished.coeff_residues().to_vec(),
                    prec: w.distinguished.precision(),
                })),
                Err(SeriesError::ZeroAtWorkingPrecision) => Ok(None),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn power_u64(prime: u64, n: u32) -> Result<u64, TowerError> {
    prime.checked_pow(n).ok_or(TowerError::LevelTooLarge(n))
}

type ResidueMatrix = Vec<Vec<BigUint>>;

fn mat_identity(n: usize) -> ResidueMatrix {
    let mut m = vec![vec![BigUint::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigUint::one();
    }
    m
}

fn mat_mul(a: &[Vec<BigUint>], b: &[Vec<BigUint>], m: &BigUint) -> ResidueMatrix {
    let n = a.len();
    let mut out = vec![vec![BigUint::zero(); n]; n];
    for (i, orow) in out.iter_mut().enumerate() {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for (j, bkj) in b[k].iter().enumerate() {
                if bkj.is_zero() {
                    continue;
                }
                orow[j] += aik * bkj;
            }
        }
        for x in orow.iter_mut() {
            *x = &*x % m;
        }
    }
    out
}

fn mat_add(a: &[Vec<BigUint>], b: &[Vec<BigUint>], m: &BigUint) -> ResidueMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x + y) % m).collect())
        .collect()
}

/// I + A + ... + A^{n-1} mod m, by binary splitting on n (n >= 1).
fn geometric_sum_mod(a: &[Vec<BigUint>], n: u64, m: &BigUint) -> ResidueMatrix {
    debug_assert!(n >= 1);
    let dim = a.len();
    let mut s = mat_identity(dim);
    let mut p = a.to_vec();
    let bits = 64 - n.leading_zeros();
    for i in (0..bits.saturating_sub(1)).rev() {
        s = mat_add(&s, &mat_mul(&p, &s, m), m);
        p = mat_mul(&p, &p, m);
        if (n >> i) & 1 == 1 {
            s = mat_add(&s, &p, m);
            p = mat_mul(&p, a, m);
        }
    }
    s
}

/// I + C for the companion matrix C of the monic polynomial with the given
/// residue coefficients (constant term first, leading coefficient 1).
fn companion_plus_identity(p_res: &[BigUint], modulus: &BigUint) -> ResidueMatrix {
    let lam = p_res.len() - 1;
    debug_assert!(p_res[lam].is_one(), "distinguished factor must be monic");
    let mut a = vec![vec![BigUint::zero(); lam]; lam];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = BigUint::one();
        if i > 0 {
            row[i - 1] = BigUint::one();
        }
        let neg = (modulus - (&p_res[i] % modulus)) % modulus;
        let cur = row[lam - 1].clone() + neg;
        row[lam - 1] = cur % modulus;
    }
    a
}

enum ExpVal {
    Exact(u64),
    AtLeast(u64),
}

fn level_exponent(cd: &CharData, prime: u64, n: u32) -> Result<ExpVal, TowerError> {
    let big_n = power_u64(prime, n)?;
    let mu_part: u64 = (cd.mu as u128 * (big_n as u128 - 1))
        .try_into()
        .map_err(|_| TowerError::LevelTooLarge(n))?;
    if cd.lambda == 0 {
        return Ok(ExpVal::Exact(mu_part));
    }
    let modulus = BigUint::from(prime).pow(cd.prec);
    let a = companion_plus_identity(&cd.p_res, &modulus);
    let s = geometric_sum_mod(&a, big_n, &modulus);
    Ok(match det_valuation_mod(prime, cd.prec, &s) {
        Valuation::Exact(v) => ExpVal::Exact(mu_part + v as u64),
        Valuation::AtLeast(b) => ExpVal::AtLeast(mu_part + b as u64),
    })
}

/// p-exponent of #H_1(M_n) relative to the base contribution, by the
/// resultant route on the characteristic element. Requires all meridian
/// values to be p-adic units. Precision escalates automatically while the
/// valuation is indeterminate.
pub fn level_order_fast(spec: &TowerSpec, n: u32) -> Result<u64, TowerError> {
    spec.validate()?;
    if n == 0 {
        return Ok(0);
    }
    with_escalation(spec, spec.truncation, |ch, k| {
        match char_weierstrass(ch, spec.prime, k)? {
            None => Ok(Probe::Retry(TowerError::IndeterminateValuation {
                level: n,
                precision: k,
                lower_bound: 0,
            })),
            Some(cd) => match level_exponent(&cd, spec.prime, n)? {
                ExpVal::Exact(v) => Ok(Probe::Done(v)),
                ExpVal::AtLeast(b) => Ok(Probe::Retry(TowerError::IndeterminateValuation {
                    level: n,
                    precision: k,
                    lower_bound: b,
                })),
            },
        }
    })
}

/// (mu, lambda) of the characteristic element, with precision escalation.
fn stable_mu_lambda(spec: &TowerSpec) -> Result<(u64, u64), TowerError> {
    with_escalation(spec, spec.truncation, |ch, k| {
        match char_weierstrass(ch, spec.prime, k)? {
            Some(cd) => Ok(Probe::Done((cd.mu, cd.lambda as u64))),
            None => Ok(Probe::Retry(TowerError::IndeterminateValuation {
                level: 0,
                precision: k,
                lower_bound: 0,
            })),
        }
    })
}

// ---------------------------------------------------------------------------
// rational-homology-sphere test
// ---------------------------------------------------------------------------

fn qhs3_profile(spec: &TowerSpec, n: u32) -> Result<Vec<(u32, u32)>, TowerError> {
    // A series window must comfortably contain the largest cyclotomic factor
    // tested, of degree (p-1)p^{n-1}.
    let phi_deg = (spec.prime as usize - 1)
        * usize::try_from(power_u64(spec.prime, n.saturating_sub(1))?)
            .map_err(|_| TowerError::LevelTooLarge(n))?;
    let min_order = 2 * phi_deg + 4;
    with_escalation(spec, min_order, |ch, k| {
        if let CharElement::Exact(coeffs) = ch {
            if coeffs.is_empty() {
                return Err(TowerError::InfiniteLevels);
            }
        }
        let lam = render_char(ch, spec.prime, k)?;
        if lam.is_zero_at_precision() {
            return Ok(Probe::Retry(TowerError::IndeterminateValuation {
                level: n,
                precision: k,
                lower_bound: 0,
            }));
        }
        match cyclotomic_factor_profile(&lam, n) {
            Ok(profile) => Ok(Probe::Done(profile)),
            Err(
                e @ (SeriesError::Indeterminate(_)
                | SeriesError::ZeroAtWorkingPrecision
                | SeriesError::PrecisionExhausted(_)),
            ) => Ok(Probe::Retry(e.into())),
            Err(e) => Err(e.into()),
        }
    })
}

/// True when level n of the tower is a rational homology sphere: the base
/// is one by construction and no cyclotomic factor Phi_{p^j}(1+T), j <= n,
/// divides the characteristic element. A vanishing characteristic element
/// answers `false`.
pub fn qhs3_check(spec: &TowerSpec, n: u32) -> Result<bool, TowerError> {
    spec.validate()?;
    match qhs3_profile(spec, n) {
        Ok(profile) => Ok(profile.is_empty()),
        Err(TowerError::InfiniteLevels) => Ok(false),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// oracle and ladder
// ---------------------------------------------------------------------------

fn base_offset(spec: &TowerSpec) -> Result<u64, TowerError> {
    match &spec.base {
        TowerBase::Sphere => Ok(0),
        TowerBase::Rational { h1, .. } => {
            let order = h1
                .order()
                .ok_or_else(|| TowerError::BadSpec("the base homology must be finite".into()))?;
            Ok(vp_biguint(spec.prime, &order))
        }
    }
}

/// H_1 of level n computed from an equivariant chain complex of the actual
/// cover. Only available over the three-sphere and for degrees up to
/// `max_degree`.
pub fn level_homology_oracle(
    spec: &TowerSpec,
    n: u32,
    max_degree: u64,
) -> Result<AbelianGroup, TowerError> {
    spec.validate()?;
    if !matches!(spec.base, TowerBase::Sphere) {
        return Err(TowerError::OracleNeedsSphere);
    }
    let pres = spec.link.require_presentation()?;
    validate_tau(pres, &spec.tau)?;
    let degree = power_u64(spec.prime, n)?;
    if degree > max_degree {
        return Err(TowerError::OracleBound {
            level: n,
            degree,
            max: max_degree,
        });
    }
    let weights: Vec<i64> = (0..pres.component_count)
        .map(|i| spec.tau.weight_mod(i, degree) as i64)
        .collect();
    Ok(branched_cover_homology(pres, &weights, degree)?)
}

/// Fast-path exponents for levels 1..=n_max, each confirmed against the
/// chain-level oracle where that is feasible (three-sphere base, stored
/// presentation, degree <= oracle_max). A disagreement is an error.
pub fn homology_ladder(spec: &TowerSpec, oracle_max: u64) -> Result<HomologyLadder, TowerError> {
    spec.validate()?;
    let offset = base_offset(spec)?;
    let mut levels = Vec::with_capacity(spec.n_max as usize);
    for n in 1..=spec.n_max {
        let fast = level_order_fast(spec, n)?;
        let degree = power_u64(spec.prime, n)?;
        let oracle_feasible = matches!(spec.base, TowerBase::Sphere)
            && spec.link.presentation.is_some()
            && degree <= oracle_max;
        let oracle = if oracle_feasible {
            let group = level_homology_oracle(spec, n, oracle_max)?;
            match group.p_exponent(spec.prime) {
                Some(e) if e == fast => {}
                _ => {
                    return Err(TowerError::OracleMismatch {
                        level: n,
                        fast,
                        oracle: group.display_compact(),
                    })
                }
            }
            Some(group)
        } else {
            None
        };
        let provenance = if oracle.is_some() {
            LevelProvenance::Both
        } else {
            LevelProvenance::Resultant
        };
        levels.push(LadderLevel {
            level: n,
            degree,
            exponent: fast,
            oracle,
            provenance,
        });
    }
    Ok(HomologyLadder {
        prime: spec.prime,
        offset,
        levels,
    })
}

// ---------------------------------------------------------------------------
// invariant extraction
// ---------------------------------------------------------------------------

/// (lambda, mu, nu) of the tower: lambda and mu from the Weierstrass shape
/// of the characteristic element, nu from an exact fit of the level
/// exponents. Every level 1..=n_max must be a rational homology sphere, and
/// the growth law must hold exactly at the top three computed levels; the
/// returned n0 is the smallest level from which it holds.
pub fn iwasawa_invariants(spec: &TowerSpec) -> Result<TowerInvariants, TowerError> {
    spec.validate()?;
    let mut qhs3_levels = Vec::with_capacity(spec.n_max as usize);
    for n in 1..=spec.n_max {
        let profile = qhs3_profile(spec, n)?;
        if !profile.is_empty() {
            return Err(TowerError::NotRationalAtLevel { level: n, profile });
        }
        qhs3_levels.push(true);
    }
    let (mu, lambda) = stable_mu_lambda(spec)?;
    let offset = base_offset(spec)? as i128;

    // Absolute exponents for levels 0..=n_max (level 0 is the base itself).
    let mut exps: Vec<i128> = vec![offset];
    for n in 1..=spec.n_max {
        exps.push(offset + level_order_fast(spec, n)? as i128);
    }
    let powers: Vec<i128> = (0..=spec.n_max)
        .map(|n| power_u64(spec.prime, n).map(|x| x as i128))
        .collect::<Result<_, _>>()?;
    let law = |nu: i128, n: usize| -> i128 {
        lambda as i128 * n as i128 + mu as i128 * powers[n] + nu
    };

    let top = spec.n_max as usize;
    let nu = exps[top] - lambda as i128 * top as i128 - mu as i128 * powers[top];
    let fit_table = || -> String {
        let rows: Vec<String> = exps
            .iter()
            .enumerate()
            .map(|(n, e)| format!("level {n}: exponent {e}"))
            .collect();
        format!(
            "lambda {lambda}, mu {mu}, candidate nu {nu}; exponents: {}",
            rows.join("; ")
        )
    };
    for n in [top - 1, top - 2] {
        if law(nu, n) != exps[n] {
            return Err(TowerError::FitFailure(fit_table()));
        }
    }
    let mut n0 = (top - 2) as u32;
    while n0 > 0 && law(nu, n0 as usize - 1) == exps[n0 as usize - 1] {
        n0 -= 1;
    }
    let nu = i64::try_from(nu).map_err(|_| TowerError::FitFailure(fit_table()))?;
    Ok(TowerInvariants {
        lambda,
        mu,
        nu,
        n0,
        qhs3_levels,
    })
}

// ---------------------------------------------------------------------------
// shortcuts and cross-checks
// ---------------------------------------------------------------------------

/// Invariants of the totally linking tower read off the linking numbers
/// alone: when the first homology of the double-branched... when the
/// determinant-like invariant H_L(1) (a cofactor of the linking Laplacian)
/// is nonzero and prime to p, the tower of a d-component link has
/// lambda = d - 1 and mu = nu = 0. Returns `None` when the criterion does
/// not apply.
pub fn tln_lambda_shortcut(
    link: &LinkData,
    prime: u64,
) -> Result<Option<InvariantTriple>, TowerError> {
    let linking = link
        .linking()
        .ok_or_else(|| TowerError::NoLinking(format!("{}: no linking data", link.name)))?;
    let h = linking.hosokawa_at_1()?;
    if h.is_zero() {
        return Ok(None);
    }
    if (&h % BigInt::from(prime)).is_zero() {
        return Ok(None);
    }
    Ok(Some(InvariantTriple {
        lambda: (linking.component_count() - 1) as u64,
        mu: 0,
        nu: 0,
    }))
}

/// Cross-checks the oracle's p-exponent at level n against the quotient
/// order of the module Lambda/(char) in normal form. Defined for the
/// totally linking character over the three-sphere.
pub fn sakuma_quotient_check(
    spec: &TowerSpec,
    n: u32,
    oracle_max: u64,
) -> Result<SakumaReport, TowerError> {
    spec.validate()?;
    if !spec.tau.is_total_linking() {
        return Err(TowerError::BadSpec(
            "the quotient comparison is defined for the totally linking character".into(),
        ));
    }
    let group = level_homology_oracle(spec, n, oracle_max)?;
    let oracle_exponent = group
        .p_exponent(spec.prime)
        .ok_or(TowerError::InfiniteLevels)?;

    let (mu, dist) = with_escalation(spec, spec.truncation, |ch, k| {
        match char_weierstrass(ch, spec.prime, k)? {
            Some(cd) => {
                let lifted: Vec<BigInt> = cd.p_res.iter().map(|r| BigInt::from(r.clone())).collect();
                Ok(Probe::Done((cd.mu, lifted)))
            }
            None => Ok(Probe::Retry(TowerError::IndeterminateValuation {
                level: n,
                precision: k,
                lower_bound: 0,
            })),
        }
    })?;
    let exponents = if mu > 0 {
        vec![u32::try_from(mu)
            .map_err(|_| TowerError::BadSpec("p-power content is absurdly large".into()))?]
    } else {
        Vec::new()
    };
    let distinguished = if dist.len() > 1 { vec![dist] } else { Vec::new() };
    let nf = LambdaModuleNF::new(spec.prime, exponents, distinguished)?;
    let module_exponent = match nf.quotient_order(n)? {
        QuotientOrder::Finite { exponent } => exponent,
        QuotientOrder::InfiniteFrom { .. } => return Err(TowerError::InfiniteLevels),
    };
    Ok(SakumaReport {
        level: n,
        oracle_exponent,
        module_exponent,
        agrees: oracle_exponent == module_exponent,
    })
}
