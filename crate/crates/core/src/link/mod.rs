//! Link data: diagrams, Wirtinger-style presentations, linking matrices,
//! and meridian characters.
//!
//! A link with `d` components is described either by a planar-diagram code
//! (see [`pd`]) or directly by a presentation whose generators are meridians
//! (each labelled with the component it winds around) and whose relators
//! have zero exponent sum on every component. From a presentation the [`fox`]
//! submodule extracts the Jacobian of free derivatives and the multivariable
//! Alexander polynomial; from a diagram, crossing signs additionally give the
//! pairwise linking numbers.
//!
//! The linking matrix is stored with diagonal entries chosen so every row
//! sums to zero; with that convention all (d−1)×(d−1) cofactors of the matrix
//! coincide, and [`LinkingMatrix::hosokawa_at_1`] returns their common
//! absolute value — the order of the first homology of the double cover's
//! analogue at the unit evaluation point used by the tower engine's
//! shortcut tests.
//!
//! A [`TauMap`] records where each component's meridian is sent in Z_p. It is
//! valid when at least one value is a p-adic unit; components sent to zero
//! are unbranched in every finite stage of the associated cover tower.

pub mod fox;
pub mod pd;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::padic::{PAdicInt, Valuation};
use crate::resultant::det_bareiss;

pub use fox::{alexander_polynomial, fox_derivative, fox_jacobian, FoxJacobian};
pub use pd::{mirror_pd, parse_pd, PdDiagram};

/// Errors from link parsing, validation, and invariant extraction.
#[derive(Debug, Error)]
pub enum LinkError {
    /// A diagram code that is not a valid planar-diagram code.
    #[error("malformed diagram code: {0}")]
    MalformedCode(String),
    /// A presentation violating the meridian-presentation invariants.
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    /// Alexander extraction needs #relators ∈ {#generators − 1, #generators}.
    #[error("unsupported presentation shape: {relators} relators on {generators} generators")]
    UnsupportedShape { relators: usize, generators: usize },
    /// Determinant expansion is capped to keep runtime bounded.
    #[error("presentation too large for minor expansion: {0} generators (cap 16)")]
    DegreeCap(usize),
    /// Column-deleted minors disagreed beyond unit factors.
    #[error("inconsistent minors: {0}")]
    InconsistentMinors(String),
    /// Operations on the linking matrix that need at least two components.
    #[error("operation needs at least 2 components, got {0}")]
    NeedsTwoComponents(usize),
    /// A proposed linking table that is not symmetric / zero-row-sum.
    #[error("invalid linking table: {0}")]
    InvalidLinkingTable(String),
    /// Character length must match the component count.
    #[error("character has {got} values but the link has {expected} components")]
    TauLength { expected: usize, got: usize },
    /// Character values must share the declared prime and precision.
    #[error("character value {0} does not match the declared prime/precision")]
    TauShape(usize),
    /// No meridian is sent to a p-adic unit.
    #[error("invalid tower character: no meridian value is a unit mod p")]
    TauNotSurjective,
    /// Errors propagated from Laurent-polynomial arithmetic.
    #[error("polynomial arithmetic: {0}")]
    Poly(#[from] crate::mpoly::MPolyError),
}

/// A link-group presentation by meridian generators.
///
/// Generator `g` is a meridian of component `generator_component[g]`
/// (0-based). Relators are words over the generators: `(g, +1)` is the
/// generator, `(g, -1)` its inverse.
#[derive(Debug, Clone)]
pub struct LinkPresentation {
    pub name: String,
    pub component_count: usize,
    pub generator_component: Vec<usize>,
    pub relators: Vec<Vec<(usize, i8)>>,
    /// The diagram this presentation was read from, when there is one.
    pub pd_source: Option<PdDiagram>,
}

impl LinkPresentation {
    /// A presentation with the given data, validated.
    pub fn new(
        name: impl Into<String>,
        component_count: usize,
        generator_component: Vec<usize>,
        relators: Vec<Vec<(usize, i8)>>,
    ) -> Result<Self, LinkError> {
        let pres = LinkPresentation {
            name: name.into(),
            component_count,
            generator_component,
            relators,
            pd_source: None,
        };
        pres.validate()?;
        Ok(pres)
    }

    /// The trivial one-component diagramless presentation: one meridian, no
    /// relations.
    pub fn unknot() -> Self {
        LinkPresentation {
            name: "unknot".into(),
            component_count: 1,
            generator_component: vec![0],
            relators: vec![],
            pd_source: None,
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_component.len()
    }

    /// Check the presentation invariants: component labels in range, every
    /// component holding at least one generator, well-formed words, and zero
    /// exponent sum per component in every relator.
    pub fn validate(&self) -> Result<(), LinkError> {
        if self.component_count == 0 {
            return Err(LinkError::InvalidPresentation(
                "component count must be positive".into(),
            ));
        }
        if self.generator_component.is_empty() {
            return Err(LinkError::InvalidPresentation(
                "at least one generator is required".into(),
            ));
        }
        let mut seen = vec![false; self.component_count];
        for (g, &c) in self.generator_component.iter().enumerate() {
            if c >= self.component_count {
                return Err(LinkError::InvalidPresentation(format!(
                    "generator {g} labelled with component {c} out of range"
                )));
            }
            seen[c] = true;
        }
        if let Some(c) = seen.iter().position(|&s| !s) {
            return Err(LinkError::InvalidPresentation(format!(
                "component {c} has no generator"
            )));
        }
        for (ri, word) in self.relators.iter().enumerate() {
            let mut sums = vec![0i64; self.component_count];
            for &(g, e) in word {
                if g >= self.generator_component.len() {
                    return Err(LinkError::InvalidPresentation(format!(
                        "relator {ri} uses undefined generator {g}"
                    )));
                }
                if e != 1 && e != -1 {
                    return Err(LinkError::InvalidPresentation(format!(
                        "relator {ri} has letter exponent {e}; only ±1 letters are allowed"
                    )));
                }
                sums[self.generator_component[g]] += i64::from(e);
            }
            if sums.iter().any(|&s| s != 0) {
                return Err(LinkError::InvalidPresentation(format!(
                    "relator {ri} has nonzero exponent sum {sums:?} per component"
                )));
            }
        }
        Ok(())
    }
}

/// Symmetric linking matrix with zero row sums.
///
/// Off-diagonal entry `(i, j)` is the linking number of components `i` and
/// `j`; the diagonal entry `(i, i)` is minus the sum of row `i`'s
/// off-diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingMatrix {
    d: usize,
    m: Vec<Vec<i64>>,
}

impl LinkingMatrix {
    /// Build from pairwise linking numbers; diagonal filled in.
    pub fn from_pairs(d: usize, pairs: &[(usize, usize, i64)]) -> Result<Self, LinkError> {
        let mut m = vec![vec![0i64; d]; d];
        for &(i, j, v) in pairs {
            if i >= d || j >= d || i == j {
                return Err(LinkError::InvalidLinkingTable(format!(
                    "bad index pair ({i}, {j}) for {d} components"
                )));
            }
            m[i][j] = v;
            m[j][i] = v;
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = -row
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| *v)
                .sum::<i64>();
        }
        Ok(LinkingMatrix { d, m })
    }

    /// Build from a full table. The diagonal is recomputed from the
    /// off-diagonal entries; the input diagonal may hold anything (it is
    /// ignored), but the off-diagonal part must be symmetric.
    pub fn from_table(table: &[Vec<i64>]) -> Result<Self, LinkError> {
        let d = table.len();
        for (i, row) in table.iter().enumerate() {
            if row.len() != d {
                return Err(LinkError::InvalidLinkingTable(format!(
                    "row {i} has {} entries, expected {d}",
                    row.len()
                )));
            }
            for (j, other) in table.iter().enumerate() {
                if i != j && row[j] != other[i] {
                    return Err(LinkError::InvalidLinkingTable(format!(
                        "asymmetric entries at ({i}, {j})"
                    )));
                }
            }
        }
        let mut pairs = Vec::new();
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate().skip(i + 1) {
                pairs.push((i, j, v));
            }
        }
        Self::from_pairs(d, &pairs)
    }

    /// Linking numbers computed from a diagram's crossing signs: half the
    /// signed count of crossings between each pair of distinct components.
    pub fn from_pd(pd: &PdDiagram) -> Result<Self, LinkError> {
        let d = pd.component_count();
        let mut sums = vec![vec![0i64; d]; d];
        for (x, cr) in pd.crossings.iter().enumerate() {
            let under = pd.component_of_edge(cr[0]);
            let over = pd.component_of_edge(cr[1]);
            if under != over {
                sums[under][over] += i64::from(pd.signs[x]);
                sums[over][under] += i64::from(pd.signs[x]);
            }
        }
        let mut pairs = Vec::new();
        for (i, row) in sums.iter().enumerate() {
            for (j, &s) in row.iter().enumerate().skip(i + 1) {
                if s % 2 != 0 {
                    return Err(LinkError::MalformedCode(format!(
                        "odd signed crossing count between components {i} and {j}"
                    )));
                }
                pairs.push((i, j, s / 2));
            }
        }
        Self::from_pairs(d, &pairs)
    }

    pub fn component_count(&self) -> usize {
        self.d
    }

    /// Entry (i, j) of the full matrix (including the diagonal).
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.m[i][j]
    }

    /// The linking number of two distinct components.
    pub fn lk(&self, i: usize, j: usize) -> i64 {
        assert_ne!(i, j, "lk is defined for distinct components");
        self.m[i][j]
    }

    /// Total linking number of component `i` with the rest of the link.
    pub fn total_linking_with(&self, i: usize) -> i64 {
        (0..self.d).filter(|&j| j != i).map(|j| self.m[i][j]).sum()
    }

    /// The cofactor obtained by deleting row and column `k`.
    ///
    /// Because rows and columns sum to zero, this value is the same for
    /// every `k`; see [`LinkingMatrix::hosokawa_at_1`].
    pub fn cofactor(&self, k: usize) -> BigInt {
        let idx: Vec<usize> = (0..self.d).filter(|&i| i != k).collect();
        let sub: Vec<Vec<BigInt>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| BigInt::from(self.m[i][j])).collect())
            .collect();
        det_bareiss(sub)
    }

    /// Absolute value of the common cofactor of the zero-row-sum linking
    /// matrix: the unit-evaluation value of the link's one-variable
    /// symmetrized polynomial, as used by the growth-shortcut tests.
    pub fn hosokawa_at_1(&self) -> Result<BigInt, LinkError> {
        if self.d < 2 {
            return Err(LinkError::NeedsTwoComponents(self.d));
        }
        Ok(self.cofactor(0).abs())
    }
}

/// Where each meridian is sent in Z_p: the data cutting out a Z_p-cover
/// tower.
#[derive(Debug, Clone)]
pub struct TauMap {
    pub prime: u64,
    pub precision: u32,
    pub values: Vec<PAdicInt>,
}

impl TauMap {
    /// The all-ones character (every meridian to 1): the total linking
    /// character.
    pub fn total_linking(prime: u64, precision: u32, d: usize) -> Self {
        TauMap {
            prime,
            precision,
            values: vec![PAdicInt::one(prime, precision); d],
        }
    }

    /// Integer-valued character.
    pub fn from_integers(
        prime: u64,
        precision: u32,
        weights: &[i64],
    ) -> Result<Self, crate::padic::PadicError> {
        let values = weights
            .iter()
            .map(|&w| PAdicInt::new(prime, precision, w))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TauMap {
            prime,
            precision,
            values,
        })
    }

    /// True when every value is exactly 1 — the total linking character.
    pub fn is_total_linking(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.residue() == PAdicInt::one(self.prime, self.precision).residue())
    }

    /// All values as plain integers when each stored residue is small enough
    /// to be meant as one (their residues, signless). Used for the exact
    /// integer specialization path.
    pub fn integer_weights(&self) -> Option<Vec<i64>> {
        self.values
            .iter()
            .map(|v| {
                let digits = v.residue().to_u64_digits();
                match digits.len() {
                    0 => Some(0i64),
                    1 => i64::try_from(digits[0]).ok(),
                    _ => None,
                }
            })
            .collect()
    }

    /// The value of component `i` reduced mod `modulus` (for a finite stage
    /// of the tower). `modulus` must divide p^precision.
    pub fn weight_mod(&self, i: usize, modulus: u64) -> u64 {
        use num_integer::Integer;
        let m = num_bigint::BigUint::from(modulus);
        let r = self.values[i].residue().mod_floor(&m);
        r.to_u64_digits().first().copied().unwrap_or(0)
    }
}

/// Per-component branching classification under a tower character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentBranchStatus {
    /// Meridian value nonzero: branched from some finite stage on.
    Branched,
    /// Meridian value zero: never branched.
    Unbranched,
}

/// Result of validating a tower character against a presentation.
#[derive(Debug, Clone)]
pub struct BranchProfile {
    pub statuses: Vec<ComponentBranchStatus>,
    /// Index of a component whose meridian value is a unit.
    pub unit_component: usize,
}

impl BranchProfile {
    pub fn totally_branched(&self) -> bool {
        self.statuses
            .iter()
            .all(|s| *s == ComponentBranchStatus::Branched)
    }
}

/// Validate a tower character: one value per component, all sharing the
/// declared prime and precision, and at least one value a unit (so the
/// character is onto Z_p). Components with value zero are unbranched.
pub fn validate_tau(pres: &LinkPresentation, tau: &TauMap) -> Result<BranchProfile, LinkError> {
    if tau.values.len() != pres.component_count {
        return Err(LinkError::TauLength {
            expected: pres.component_count,
            got: tau.values.len(),
        });
    }
    for (i, v) in tau.values.iter().enumerate() {
        if v.prime() != tau.prime || v.precision() != tau.precision {
            return Err(LinkError::TauShape(i));
        }
    }
    let unit_component = tau
        .values
        .iter()
        .position(|v| matches!(v.valuation(), Valuation::Exact(0)))
        .ok_or(LinkError::TauNotSurjective)?;
    let statuses = tau
        .values
        .iter()
        .map(|v| {
            if v.is_zero() {
                ComponentBranchStatus::Unbranched
            } else {
                ComponentBranchStatus::Branched
            }
        })
        .collect();
    Ok(BranchProfile {
        statuses,
        unit_component,
    })
}

#[cfg(test)]
mod tests {
    use super::pd::corpus_codes;
    use super::*;

    #[test]
    fn linking_matrix_of_positive_hopf_diagram() {
        let pd = PdDiagram::parse(&corpus_codes::HOPF).unwrap();
        let lkm = LinkingMatrix::from_pd(&pd).unwrap();
        assert_eq!(lkm.component_count(), 2);
        assert_eq!(lkm.lk(0, 1), 1);
        assert_eq!(lkm.entry(0, 0), -1);
        assert_eq!(lkm.entry(1, 1), -1);
    }

    #[test]
    fn whitehead_and_borromean_have_zero_linking() {
        for code in [corpus_codes::WHITEHEAD.to_vec(), corpus_codes::BORROMEAN.to_vec()] {
            let pd = PdDiagram::parse(&code).unwrap();
            let lkm = LinkingMatrix::from_pd(&pd).unwrap();
            let d = lkm.component_count();
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        assert_eq!(lkm.lk(i, j), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn rows_sum_to_zero_and_cofactors_agree() {
        let lkm = LinkingMatrix::from_pairs(3, &[(0, 1, 1), (0, 2, 3), (1, 2, 1)]).unwrap();
        for i in 0..3 {
            let s: i64 = (0..3).map(|j| lkm.entry(i, j)).sum();
            assert_eq!(s, 0);
        }
        let c0 = lkm.cofactor(0);
        for k in 1..3 {
            assert_eq!(lkm.cofactor(k), c0);
        }
    }

    #[test]
    fn hosokawa_values() {
        // Pair with linking number one.
        let hopf = LinkingMatrix::from_pairs(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(hopf.hosokawa_at_1().unwrap(), BigInt::from(1));

        // Split pair: all linking numbers zero.
        let unlink = LinkingMatrix::from_pairs(2, &[]).unwrap();
        assert_eq!(unlink.hosokawa_at_1().unwrap(), BigInt::from(0));

        // Three mutually unlinked components, each linking a fourth axis
        // once: deleting the axis row/column leaves diag(−1,−1,−1).
        let rings_axis =
            LinkingMatrix::from_pairs(4, &[(0, 3, 1), (1, 3, 1), (2, 3, 1)]).unwrap();
        assert_eq!(rings_axis.cofactor(3), BigInt::from(-1));
        assert_eq!(rings_axis.hosokawa_at_1().unwrap(), BigInt::from(1));

        // Pair-plus-axis configuration with linking numbers 1, 3, 1.
        let pair_axis = LinkingMatrix::from_pairs(3, &[(0, 1, 1), (0, 2, 3), (1, 2, 1)]).unwrap();
        assert_eq!(pair_axis.hosokawa_at_1().unwrap(), BigInt::from(7));

        // One component: undefined.
        let single = LinkingMatrix::from_pairs(1, &[]).unwrap();
        assert!(matches!(
            single.hosokawa_at_1(),
            Err(LinkError::NeedsTwoComponents(1))
        ));
    }

    #[test]
    fn tau_validation() {
        let pres = LinkPresentation::new("pair", 2, vec![0, 1], vec![]).unwrap();

        let tln = TauMap::total_linking(3, 8, 2);
        let profile = validate_tau(&pres, &tln).unwrap();
        assert!(profile.totally_branched());

        // (1, √−1) at p = 5: both units, both branched.
        let root = crate::padic::hensel_root(
            &[BigInt::from(1), BigInt::from(0), BigInt::from(1)],
            2,
            5,
            4,
        )
        .unwrap();
        let tau = TauMap {
            prime: 5,
            precision: 4,
            values: vec![PAdicInt::one(5, 4), root],
        };
        assert!(validate_tau(&pres, &tau).unwrap().totally_branched());

        // (p, p): no unit value.
        let bad = TauMap::from_integers(3, 8, &[3, 3]).unwrap();
        assert!(matches!(
            validate_tau(&pres, &bad),
            Err(LinkError::TauNotSurjective)
        ));

        // (0, 1): first component unbranched.
        let half = TauMap::from_integers(3, 8, &[0, 1]).unwrap();
        let profile = validate_tau(&pres, &half).unwrap();
        assert_eq!(profile.statuses[0], ComponentBranchStatus::Unbranched);
        assert_eq!(profile.statuses[1], ComponentBranchStatus::Branched);
        assert!(!profile.totally_branched());

        // Wrong length.
        let short = TauMap::total_linking(3, 8, 1);
        assert!(matches!(
            validate_tau(&pres, &short),
            Err(LinkError::TauLength {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn presentation_validation_rejects_bad_data() {
        // Component without a generator.
        assert!(LinkPresentation::new("x", 2, vec![0, 0], vec![]).is_err());
        // Out-of-range component label.
        assert!(LinkPresentation::new("x", 1, vec![1], vec![]).is_err());
        // Relator with nonzero exponent sum.
        assert!(
            LinkPresentation::new("x", 1, vec![0, 0], vec![vec![(0, 1), (1, 1)]]).is_err()
        );
        // Conjugation relator is fine.
        assert!(LinkPresentation::new(
            "x",
            1,
            vec![0, 0],
            vec![vec![(0, 1), (1, 1), (0, -1), (1, -1)]]
        )
        .is_ok());
    }

    #[test]
    fn integer_weight_extraction() {
        let tau = TauMap::from_integers(5, 4, &[1, 7]).unwrap();
        assert_eq!(tau.integer_weights(), Some(vec![1, 7]));
        assert_eq!(tau.weight_mod(1, 5), 2);
        assert!(!tau.is_total_linking());
        assert!(TauMap::total_linking(5, 4, 3).is_total_linking());
    }
}
