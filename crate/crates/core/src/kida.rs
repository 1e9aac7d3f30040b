//! Galois morphisms between towers and the Riemann-Hurwitz-style identity
//! for their lambda invariants.
//!
//! A [`TowerMorphism`] is a compatible system of branched covers between
//! two towers over the same prime, of degree p^m, equivariant for the deck
//! actions (the character map iota must be the identity). Its branch data
//! lists, per branch curve of the target, the common branch index e of the
//! components lying over it, how many such components there are, and how
//! the curve behaves in the base-level cover.
//!
//! [`kida_check`] verifies the degree/branching identity
//!
//! ```text
//! lambda_source - 1 = deg * (lambda_target - 1) + sum_w (e_w - 1)
//! ```
//!
//! under the hypotheses that the source branch set stays finitely
//! decomposed in the target tower, that mu of the target vanishes, and
//! that no branch component is inert in the base cover. For degree-p
//! morphisms it additionally solves the intermediate form
//! `lambda_source = p*lambda_target + sum + (p-1)*defect` for the defect
//! and cross-checks it against the cohomological value -1 from
//! [`crate::cohomology::hbar_defect`].

use thiserror::Error;

use crate::cohomology::{hbar_defect, CohomologyError, HbarHypotheses};
use crate::padic::is_prime_u64;
use crate::tower::{TowerError, TowerSpec};

#[derive(Debug, Error)]
pub enum KidaError {
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("invalid morphism: {0}")]
    BadMorphism(String),
    #[error(
        "non-equivariant character map: {0}; only the identity map is \
         supported, since a multiplication-by-p system changes the tower's \
         character instead of covering it"
    )]
    NonEquivariant(String),
    #[error("theorem hypotheses unmet: {}", .0.join("; "))]
    HypothesesUnmet(Vec<String>),
    #[error(
        "identity violated: lambda_source - 1 = {} but degree*(lambda_target - 1) + branch sum = {}",
        .0.lhs, .0.rhs
    )]
    IdentityViolated(Box<KidaReport>),
    #[error("incompatible degree-p chain: {0}")]
    IncompatibleChain(String),
    #[error("step {step} leaves component {component} inert, which the identity's hypotheses exclude")]
    InertStep { step: usize, component: usize },
    #[error("the transfer predicate requires mu = 0 for the target tower, got {0}")]
    MuTargetNonzero(u64),
    #[error("degree {degree} is not the prime {prime}; this operation covers one step only")]
    DegreeNotPrime { degree: u64, prime: u64 },
}

/// Behavior of a curve in the base-level cover f0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentStatus {
    Branched,
    Inert,
    Decomposed,
}

/// Branch data over one branch curve of the target: by transitivity of the
/// cyclic deck action, every component over it shares one branch index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchComponent {
    pub id: String,
    /// Common branch index e of the components over this curve.
    pub e: u64,
    /// Number of components of the source branch set over this curve.
    pub multiplicity: u64,
    /// Behavior in the base-level cover.
    pub status: ComponentStatus,
}

/// Whether the source branch set decomposes into finitely or infinitely
/// many components in the target tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SBarDecomposition {
    Finite,
    Infinite,
}

/// The character-map component of a morphism of towers. Only the identity
/// is equivariant; multiplication by p is recognized so it can be rejected
/// with an explanation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IotaMap {
    Identity,
    MultiplicationByP,
}

/// A compatible system of branched covers from the `source` tower to the
/// `target` tower.
#[derive(Debug, Clone)]
pub struct TowerMorphism {
    pub name: String,
    pub source: TowerSpec,
    pub target: TowerSpec,
    pub degree: u64,
    pub iota: IotaMap,
    pub branch_components: Vec<BranchComponent>,
    pub s_bar_decomposition: SBarDecomposition,
    /// Asserted (or externally computed) vanishing of the target tower's mu.
    pub mu_target_zero: bool,
}

impl TowerMorphism {
    pub fn prime(&self) -> u64 {
        self.target.prime
    }

    /// m with degree = p^m.
    pub fn degree_exponent(&self) -> Result<u32, KidaError> {
        let p = self.prime();
        let mut d = self.degree;
        let mut m = 0u32;
        while d > 1 {
            if !d.is_multiple_of(p) {
                return Err(KidaError::BadMorphism(format!(
                    "degree {} is not a power of {}",
                    self.degree, p
                )));
            }
            d /= p;
            m += 1;
        }
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), KidaError> {
        if self.source.prime != self.target.prime {
            return Err(KidaError::BadMorphism(format!(
                "source prime {} differs from target prime {}",
                self.source.prime, self.target.prime
            )));
        }
        if !is_prime_u64(self.target.prime) {
            return Err(KidaError::BadMorphism(format!(
                "{} is not prime",
                self.target.prime
            )));
        }
        if self.degree < 2 {
            return Err(KidaError::BadMorphism(
                "a morphism of towers has degree at least p".into(),
            ));
        }
        self.degree_exponent()?;
        if self.iota != IotaMap::Identity {
            return Err(KidaError::NonEquivariant(
                "the file declares iota = multiplication by p".into(),
            ));
        }
        for (i, bc) in self.branch_components.iter().enumerate() {
            if bc.e == 0 || bc.multiplicity == 0 {
                return Err(KidaError::BadMorphism(format!(
                    "branch entry {i} ({}) has a zero index or multiplicity",
                    bc.id
                )));
            }
            if bc.e > self.degree || bc.multiplicity > self.degree {
                return Err(KidaError::BadMorphism(format!(
                    "branch entry {i} ({}) exceeds the covering degree",
                    bc.id
                )));
            }
        }
        Ok(())
    }
}

/// Limit behavior of a knot along a tower, with the component count where
/// finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitBehavior {
    /// Branched at every level (a branch-link component with unit value).
    InfinitelyBranched,
    /// Splits into finitely many components, each eventually inert.
    InfinitelyInert { components: u64 },
    /// Splits into p^n components at level n, without bound.
    TotallyDecomposed,
}

/// Behavior of one knot relative to a totally linking tower over a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BehaviorReport {
    pub linking: i64,
    pub prime: u64,
    pub behavior: LimitBehavior,
}

/// Classifies a knot K disjoint from the link of a totally linking tower
/// by its total linking number with the link: zero linking decomposes
/// totally; otherwise K splits into p^{v_p(lk)} components and is inert
/// from there on.
pub fn decomposition_behavior(lk: i64, prime: u64) -> BehaviorReport {
    let behavior = if lk == 0 {
        LimitBehavior::TotallyDecomposed
    } else {
        let mut components = 1u64;
        let mut rest = lk.unsigned_abs();
        while rest.is_multiple_of(prime) {
            components *= prime;
            rest /= prime;
        }
        LimitBehavior::InfinitelyInert { components }
    };
    BehaviorReport {
        linking: lk,
        prime,
        behavior,
    }
}

/// The multiplier picked up by a meridian under one degree-p covering
/// step: branched components scale by p, inert and decomposed ones do not.
pub fn meridian_pushforward(status: ComponentStatus, prime: u64) -> u64 {
    match status {
        ComponentStatus::Branched => prime,
        ComponentStatus::Inert | ComponentStatus::Decomposed => 1,
    }
}

/// Predicted mu status of the source tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuPrediction {
    Zero,
    AtLeast(u64),
}

/// Transfers mu = 0 along a degree-p morphism: the source's mu vanishes
/// exactly when the source branch set stays finitely decomposed in the
/// target tower; otherwise mu is at least the number of branch curves.
pub fn mu_transfer(morphism: &TowerMorphism, mu_target: u64) -> Result<MuPrediction, KidaError> {
    morphism.validate()?;
    if morphism.degree != morphism.prime() {
        return Err(KidaError::DegreeNotPrime {
            degree: morphism.degree,
            prime: morphism.prime(),
        });
    }
    if mu_target != 0 {
        return Err(KidaError::MuTargetNonzero(mu_target));
    }
    Ok(match morphism.s_bar_decomposition {
        SBarDecomposition::Finite => MuPrediction::Zero,
        SBarDecomposition::Infinite => {
            MuPrediction::AtLeast(morphism.branch_components.len() as u64)
        }
    })
}

/// One hypothesis or consistency check with its verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChecklistItem {
    pub name: String,
    pub passed: bool,
    /// Theorem hypotheses block the identity check when they fail;
    /// advisory items (data consistency) are reported but do not block.
    pub blocking: bool,
}

/// Everything the identity check computed, for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KidaReport {
    pub prime: u64,
    pub degree: u64,
    pub lambda_source: u64,
    pub lambda_target: u64,
    /// sum over components w of (e_w - 1), i.e. multiplicity * (e - 1) per
    /// branch entry.
    pub branch_sum: u64,
    pub lhs: i128,
    pub rhs: i128,
    pub holds: bool,
    /// For degree-p morphisms: the defect solved from
    /// lambda_source = p*lambda_target + branch_sum + (p-1)*defect,
    /// when that division is exact.
    pub hbar_residual: Option<i64>,
    /// The cohomological reference value (-1) it must equal.
    pub hbar_reference: Option<i64>,
    pub hbar_matches: Option<bool>,
    pub checklist: Vec<ChecklistItem>,
}

/// The right-hand side's prediction for lambda of the source tower.
pub fn predicted_lambda_source(morphism: &TowerMorphism, lambda_target: u64) -> Result<i128, KidaError> {
    morphism.validate()?;
    let sum = branch_sum(morphism)?;
    Ok(morphism.degree as i128 * (lambda_target as i128 - 1) + sum as i128 + 1)
}

fn branch_sum(morphism: &TowerMorphism) -> Result<u64, KidaError> {
    let mut sum = 0u128;
    for bc in &morphism.branch_components {
        sum += bc.multiplicity as u128 * (bc.e as u128 - 1);
    }
    u64::try_from(sum).map_err(|_| KidaError::BadMorphism("branch sum overflows".into()))
}

/// Checks lambda_source - 1 = degree*(lambda_target - 1) + sum_w (e_w - 1)
/// under the theorem's hypotheses, and for degree-p morphisms solves and
/// cross-checks the intermediate defect form. Returns the full report on
/// success; a violated identity is an error carrying the same report.
pub fn kida_check(
    morphism: &TowerMorphism,
    lambda_target: u64,
    lambda_source: u64,
) -> Result<KidaReport, KidaError> {
    morphism.validate()?;
    let p = morphism.prime();

    let mut checklist = Vec::new();
    let mut blockers = Vec::new();
    let mut check = |name: &str, passed: bool, blocking: bool| {
        checklist.push(ChecklistItem {
            name: name.to_string(),
            passed,
            blocking,
        });
        if blocking && !passed {
            blockers.push(name.to_string());
        }
    };

    check(
        "source branch set finitely decomposed (infinitely inert) in the target tower",
        morphism.s_bar_decomposition == SBarDecomposition::Finite,
        true,
    );
    check(
        "mu of the target tower vanishes",
        morphism.mu_target_zero,
        true,
    );
    check(
        "no branch component inert in the base cover",
        morphism
            .branch_components
            .iter()
            .all(|bc| bc.status != ComponentStatus::Inert),
        true,
    );
    // Advisory: with no inert components, index times multiplicity must
    // exhaust the degree over every branch curve. A misdeclared index shows
    // up here and then in the identity itself.
    check(
        "degree accounting e*multiplicity = degree over each branch curve",
        morphism
            .branch_components
            .iter()
            .all(|bc| bc.e * bc.multiplicity == morphism.degree),
        false,
    );

    if !blockers.is_empty() {
        return Err(KidaError::HypothesesUnmet(blockers));
    }

    let sum = branch_sum(morphism)?;
    let lhs = lambda_source as i128 - 1;
    let rhs = morphism.degree as i128 * (lambda_target as i128 - 1) + sum as i128;
    let holds = lhs == rhs;

    let (hbar_residual, hbar_reference, hbar_matches) = if morphism.degree == p {
        let hypotheses = HbarHypotheses {
            levels_are_rational_spheres: true,
            deck_group_is_order_p: true,
        };
        let reference = hbar_defect(p, &hypotheses)?;
        let num = lambda_source as i128 - p as i128 * lambda_target as i128 - sum as i128;
        let den = p as i128 - 1;
        if num.rem_euclid(den) == 0 {
            let residual = i64::try_from(num / den)
                .map_err(|_| KidaError::BadMorphism("defect overflows".into()))?;
            (Some(residual), Some(reference), Some(residual == reference))
        } else {
            (None, Some(reference), Some(false))
        }
    } else {
        (None, None, None)
    };

    let report = KidaReport {
        prime: p,
        degree: morphism.degree,
        lambda_source,
        lambda_target,
        branch_sum: sum,
        lhs,
        rhs,
        holds,
        hbar_residual,
        hbar_reference,
        hbar_matches,
        checklist,
    };
    if holds {
        Ok(report)
    } else {
        Err(KidaError::IdentityViolated(Box::new(report)))
    }
}

/// Composes a chain of degree-p covering steps into one morphism. Each
/// step lists, per tracked branch curve of the original target, how every
/// component over that curve behaves at that step (they all behave alike,
/// by transitivity of the cyclic deck action). Branch indices multiply
/// along the chain; decomposed steps multiply the component count; inert
/// steps are rejected, since the identity's hypotheses exclude them.
pub fn compose_degree_p_steps(
    name: impl Into<String>,
    target: TowerSpec,
    source: TowerSpec,
    s_bar_decomposition: SBarDecomposition,
    mu_target_zero: bool,
    steps: &[Vec<ComponentStatus>],
) -> Result<TowerMorphism, KidaError> {
    if steps.is_empty() {
        return Err(KidaError::IncompatibleChain("no steps supplied".into()));
    }
    let curves = steps[0].len();
    for (i, step) in steps.iter().enumerate() {
        if step.len() != curves {
            return Err(KidaError::IncompatibleChain(format!(
                "step {i} tracks {} curves, step 0 tracks {curves}",
                step.len()
            )));
        }
        for (j, status) in step.iter().enumerate() {
            if *status == ComponentStatus::Inert {
                return Err(KidaError::InertStep {
                    step: i,
                    component: j,
                });
            }
        }
    }
    let p = target.prime;
    let mut degree = 1u64;
    for _ in steps {
        degree = degree
            .checked_mul(p)
            .ok_or_else(|| KidaError::IncompatibleChain("degree overflows".into()))?;
    }
    let mut branch_components = Vec::with_capacity(curves);
    for j in 0..curves {
        let mut e = 1u64;
        let mut multiplicity = 1u64;
        for step in steps {
            match step[j] {
                ComponentStatus::Branched => {
                    e = e
                        .checked_mul(p)
                        .ok_or_else(|| KidaError::IncompatibleChain("index overflows".into()))?;
                }
                ComponentStatus::Decomposed => {
                    multiplicity = multiplicity.checked_mul(p).ok_or_else(|| {
                        KidaError::IncompatibleChain("multiplicity overflows".into())
                    })?;
                }
                ComponentStatus::Inert => unreachable!("rejected above"),
            }
        }
        branch_components.push(BranchComponent {
            id: format!("w{j}"),
            e,
            multiplicity,
            status: steps[0][j],
        });
    }
    let morphism = TowerMorphism {
        name: name.into(),
        source,
        target,
        degree,
        iota: IotaMap::Identity,
        branch_components,
        s_bar_decomposition,
        mu_target_zero,
    };
    morphism.validate()?;
    Ok(morphism)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::{LinkingMatrix, TauMap};
    use crate::tower::{LinkData, TowerBase};

    fn linking_only_spec(name: &str, d: usize, pairs: &[(usize, usize, i64)], prime: u64) -> TowerSpec {
        let linking = LinkingMatrix::from_pairs(d, pairs).unwrap();
        TowerSpec {
            name: name.into(),
            link: LinkData::new(name, None, Some(linking)).unwrap(),
            tau: TauMap::total_linking(prime, 8, d),
            prime,
            precision: 8,
            truncation: 8,
            n_max: 2,
            base: TowerBase::Sphere,
            precision_cap: None,
        }
    }

    /// The two bundled linking configurations: a two-component link with
    /// linking number 1 (target side) and a four-component one where three
    /// curves each link an axis once (source side).
    fn example_morphism() -> TowerMorphism {
        let target = linking_only_spec("hopf-like", 2, &[(0, 1, 1)], 3);
        let source = linking_only_spec(
            "rings-axis",
            4,
            &[(0, 3, 1), (1, 3, 1), (2, 3, 1)],
            3,
        );
        TowerMorphism {
            name: "threefold-branched-step".into(),
            source,
            target,
            degree: 3,
            iota: IotaMap::Identity,
            branch_components: vec![BranchComponent {
                id: "w0".into(),
                e: 3,
                multiplicity: 1,
                status: ComponentStatus::Branched,
            }],
            s_bar_decomposition: SBarDecomposition::Finite,
            mu_target_zero: true,
        }
    }

    #[test]
    fn decomposition_by_linking_number() {
        let r = decomposition_behavior(4, 3);
        assert_eq!(r.behavior, LimitBehavior::InfinitelyInert { components: 1 });

        let r = decomposition_behavior(0, 3);
        assert_eq!(r.behavior, LimitBehavior::TotallyDecomposed);

        let r = decomposition_behavior(9, 3);
        assert_eq!(r.behavior, LimitBehavior::InfinitelyInert { components: 9 });

        let r = decomposition_behavior(-12, 2);
        assert_eq!(r.behavior, LimitBehavior::InfinitelyInert { components: 4 });
    }

    #[test]
    fn meridian_multipliers() {
        assert_eq!(meridian_pushforward(ComponentStatus::Branched, 5), 5);
        assert_eq!(meridian_pushforward(ComponentStatus::Inert, 5), 1);
        assert_eq!(meridian_pushforward(ComponentStatus::Decomposed, 5), 1);
    }

    #[test]
    fn mu_transfer_predicate() {
        let m = example_morphism();
        assert_eq!(mu_transfer(&m, 0).unwrap(), MuPrediction::Zero);

        let mut infinite = example_morphism();
        infinite.s_bar_decomposition = SBarDecomposition::Infinite;
        assert_eq!(mu_transfer(&infinite, 0).unwrap(), MuPrediction::AtLeast(1));

        assert!(matches!(
            mu_transfer(&m, 1),
            Err(KidaError::MuTargetNonzero(1))
        ));

        let mut deg9 = example_morphism();
        deg9.degree = 9;
        assert!(matches!(
            mu_transfer(&deg9, 0),
            Err(KidaError::DegreeNotPrime { degree: 9, prime: 3 })
        ));
    }

    #[test]
    fn threefold_branched_step_passes() {
        let m = example_morphism();
        let report = kida_check(&m, 1, 3).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, 2);
        assert_eq!(report.rhs, 2);
        assert_eq!(report.branch_sum, 2);
        assert_eq!(report.hbar_residual, Some(-1));
        assert_eq!(report.hbar_reference, Some(-1));
        assert_eq!(report.hbar_matches, Some(true));
        assert!(report.checklist.iter().all(|c| c.passed));
    }

    #[test]
    fn misdeclared_index_fails_with_residuals() {
        let mut m = example_morphism();
        m.branch_components[0].e = 2;
        match kida_check(&m, 1, 3) {
            Err(KidaError::IdentityViolated(report)) => {
                assert_eq!(report.lhs, 2);
                assert_eq!(report.rhs, 1);
                assert!(!report.holds);
                // The advisory accounting check flags the inconsistency.
                assert!(report
                    .checklist
                    .iter()
                    .any(|c| !c.passed && !c.blocking));
            }
            other => panic!("expected a violated identity, got {other:?}"),
        }
    }

    #[test]
    fn unbranched_step_doubles_the_deficiency() {
        // Every branch curve totally decomposed: empty correction term.
        let mut m = example_morphism();
        m.branch_components = vec![BranchComponent {
            id: "w0".into(),
            e: 1,
            multiplicity: 3,
            status: ComponentStatus::Decomposed,
        }];
        // lambda_target = 2 forces lambda_source = 3*1 + 1 = 4.
        let report = kida_check(&m, 2, 4).unwrap();
        assert!(report.holds);
        assert_eq!(report.branch_sum, 0);
        assert_eq!(report.hbar_matches, Some(true));
    }

    #[test]
    fn hypothesis_failures_block() {
        let mut m = example_morphism();
        m.mu_target_zero = false;
        assert!(matches!(kida_check(&m, 1, 3), Err(KidaError::HypothesesUnmet(_))));

        let mut m = example_morphism();
        m.s_bar_decomposition = SBarDecomposition::Infinite;
        assert!(matches!(kida_check(&m, 1, 3), Err(KidaError::HypothesesUnmet(_))));

        let mut m = example_morphism();
        m.branch_components[0].status = ComponentStatus::Inert;
        m.branch_components[0].e = 1;
        assert!(matches!(kida_check(&m, 1, 3), Err(KidaError::HypothesesUnmet(_))));
    }

    #[test]
    fn non_equivariant_morphisms_are_rejected() {
        let mut m = example_morphism();
        m.iota = IotaMap::MultiplicationByP;
        assert!(matches!(m.validate(), Err(KidaError::NonEquivariant(_))));
    }

    #[test]
    fn composed_branched_steps_predict_prime_power_lambda() {
        use ComponentStatus::*;
        for r in 1..=3usize {
            let base = example_morphism();
            let steps = vec![vec![Branched]; r];
            let m = compose_degree_p_steps(
                format!("branched-{r}"),
                base.target.clone(),
                base.source.clone(),
                SBarDecomposition::Finite,
                true,
                &steps,
            )
            .unwrap();
            assert_eq!(m.degree, 3u64.pow(r as u32));
            assert_eq!(m.branch_components[0].e, 3u64.pow(r as u32));
            assert_eq!(m.branch_components[0].multiplicity, 1);
            // With lambda_target = 1 the identity forces lambda = p^r.
            assert_eq!(predicted_lambda_source(&m, 1).unwrap(), 3i128.pow(r as u32));
            let report = kida_check(&m, 1, 3u64.pow(r as u32)).unwrap();
            assert!(report.holds);
        }
    }

    #[test]
    fn composition_case_algebra() {
        use ComponentStatus::*;
        let base = example_morphism();
        // Branched then decomposed: p components, each with index p.
        let m = compose_degree_p_steps(
            "branched-decomposed",
            base.target.clone(),
            base.source.clone(),
            SBarDecomposition::Finite,
            true,
            &[vec![Branched], vec![Decomposed]],
        )
        .unwrap();
        assert_eq!(m.degree, 9);
        assert_eq!(m.branch_components[0].e, 3);
        assert_eq!(m.branch_components[0].multiplicity, 3);
        // Sum term p(p-1) = 6.
        let report = kida_check(&m, 1, 7).unwrap();
        assert_eq!(report.branch_sum, 6);
        assert!(report.holds);

        // Inert steps are excluded by hypothesis.
        assert!(matches!(
            compose_degree_p_steps(
                "inert-chain",
                base.target.clone(),
                base.source.clone(),
                SBarDecomposition::Finite,
                true,
                &[vec![Branched], vec![Inert]],
            ),
            Err(KidaError::InertStep { step: 1, component: 0 })
        ));

        // Mismatched curve counts are rejected.
        assert!(matches!(
            compose_degree_p_steps(
                "ragged",
                base.target.clone(),
                base.source,
                SBarDecomposition::Finite,
                true,
                &[vec![Branched], vec![Branched, Decomposed]],
            ),
            Err(KidaError::IncompatibleChain(_))
        ));
    }

    #[test]
    fn identity_closure_under_composition() {
        use ComponentStatus::*;
        // For every word of degree-p steps over two curves, feeding each
        // step the per-step identity makes the composite satisfy the full
        // identity: lambda_m - 1 = p^m (lambda_0 - 1) + composite sum.
        let base = example_morphism();
        let p: i128 = 3;
        let choices = [Branched, Decomposed];
        for &s1a in &choices {
            for &s1b in &choices {
                for &s2a in &choices {
                    for &s2b in &choices {
                        let steps = vec![vec![s1a, s1b], vec![s2a, s2b]];
                        // Track per-curve component counts to form each
                        // step's own correction term.
                        let lambda0: i128 = 2;
                        let mut lambda = lambda0;
                        let mut comps = [1i128, 1];
                        for step in &steps {
                            let mut step_sum = 0i128;
                            for (j, st) in step.iter().enumerate() {
                                match st {
                                    Branched => step_sum += comps[j] * (p - 1),
                                    Decomposed => comps[j] *= p,
                                    Inert => unreachable!(),
                                }
                            }
                            lambda = p * (lambda - 1) + step_sum + 1;
                        }
                        let m = compose_degree_p_steps(
                            "closure",
                            base.target.clone(),
                            base.source.clone(),
                            SBarDecomposition::Finite,
                            true,
                            &steps,
                        )
                        .unwrap();
                        let report =
                            kida_check(&m, lambda0 as u64, u64::try_from(lambda).unwrap())
                                .unwrap();
                        assert!(report.holds, "steps {steps:?}");
                    }
                }
            }
        }
    }
}
