//! Tate cohomology of modules over finite cyclic groups.
//!
//! A module is presented as a lattice with an action: an ambient free
//! module Z^r, a relation lattice R (given by spanning columns), and an
//! integer matrix sigma for the action of a fixed generator of the cyclic
//! group G of order m. The module is M = Z^r / R; the constructor verifies
//! that sigma maps R into R and that sigma^m is the identity on M.
//!
//! For cyclic G the Tate groups are 2-periodic and reduce to two lattice
//! quotients, with Nr = 1 + sigma + ... + sigma^{m-1}:
//!
//! * H^0 = ker(sigma - 1 on M) / im(Nr on M)
//! * H^1 = ker(Nr on M) / im(sigma - 1 on M)
//!
//! Each is computed exactly by Smith normal form on integer matrices. Both
//! groups are finite for any finitely generated module, so the Herbrand
//! quotient #H^0 / #H^1 is always an exact rational; it is 1 on finite
//! modules and multiplicative along short exact sequences, which
//! [`CyclicGModule::submodule_inclusion`] lets tests build explicitly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::abelian::AbelianGroup;
use crate::matrix::{
    kernel_basis, lattice_basis, lattice_contains, solve_in_lattice, IntMatrix, MatrixError,
};

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("invalid module: {0}")]
    BadModule(String),
    #[error("{h} does not divide the group order {m}")]
    NonDivisor { h: u64, m: u64 },
    #[error("a Tate group is infinite; the Herbrand quotient is undefined")]
    InfiniteTate,
    #[error("hypotheses unmet: {0}")]
    HypothesesUnmet(String),
    #[error("the proposed sublattice is not stable under the group action")]
    UnstableSublattice,
    #[error("group orders differ: {left} vs {right}")]
    OrderMismatch { left: u64, right: u64 },
}

/// A finitely generated module over Z[G] for G cyclic of order m,
/// presented as Z^r / (column span of `relations`) with the generator of G
/// acting through `sigma`.
#[derive(Debug, Clone)]
pub struct CyclicGModule {
    group_order: u64,
    ambient_rank: usize,
    relations: IntMatrix,
    sigma: IntMatrix,
}

fn mat_pow(m: &IntMatrix, mut e: u64) -> Result<IntMatrix, MatrixError> {
    let mut result = IntMatrix::identity(m.rows());
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base)?;
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base)?;
        }
    }
    Ok(result)
}

fn mat_sub_identity(m: &IntMatrix) -> IntMatrix {
    let mut out = m.clone();
    for i in 0..out.rows() {
        let v = out.get(i, i) - BigInt::one();
        out.set(i, i, v);
    }
    out
}

fn mat_sum(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut out = a.clone();
    for i in 0..out.rows() {
        for j in 0..out.cols() {
            let v = out.get(i, j) + b.get(i, j);
            out.set(i, j, v);
        }
    }
    out
}

fn select_rows(m: &IntMatrix, upto: usize) -> IntMatrix {
    let mut out = IntMatrix::zero(upto, m.cols());
    for i in 0..upto {
        for j in 0..m.cols() {
            out.set(i, j, m.get(i, j).clone());
        }
    }
    out
}

impl CyclicGModule {
    /// Builds and validates a module. `relations` must have `ambient_rank`
    /// rows; `sigma` must be square of that size, map the relation lattice
    /// into itself, and have sigma^m = 1 on the quotient.
    pub fn new(
        group_order: u64,
        ambient_rank: usize,
        relations: IntMatrix,
        sigma: IntMatrix,
    ) -> Result<Self, CohomologyError> {
        if group_order == 0 {
            return Err(CohomologyError::BadModule(
                "the group order must be positive".into(),
            ));
        }
        if relations.rows() != ambient_rank {
            return Err(CohomologyError::BadModule(format!(
                "relations have {} rows for ambient rank {}",
                relations.rows(),
                ambient_rank
            )));
        }
        if sigma.rows() != ambient_rank || sigma.cols() != ambient_rank {
            return Err(CohomologyError::BadModule(format!(
                "action matrix is {}x{} for ambient rank {}",
                sigma.rows(),
                sigma.cols(),
                ambient_rank
            )));
        }
        let module = CyclicGModule {
            group_order,
            ambient_rank,
            relations,
            sigma,
        };
        // sigma descends to the quotient.
        let moved = module.sigma.mul(&module.relations)?;
        if !module.contains_in_relations(&moved) {
            return Err(CohomologyError::BadModule(
                "the action does not preserve the relation lattice".into(),
            ));
        }
        // sigma^m is the identity on the quotient.
        let pow = mat_pow(&module.sigma, group_order)?;
        let diff = mat_sub_identity(&pow);
        if !module.contains_in_relations(&diff) {
            return Err(CohomologyError::BadModule(format!(
                "the action does not have order dividing {group_order} on the quotient"
            )));
        }
        Ok(module)
    }

    fn contains_in_relations(&self, columns: &IntMatrix) -> bool {
        if self.relations.cols() == 0 {
            return columns.is_zero();
        }
        (0..columns.cols()).all(|j| {
            lattice_contains(&self.relations, &columns.select_columns(&[j]))
        })
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// The underlying abelian group Z^r / R, forgetting the action.
    pub fn underlying_group(&self) -> AbelianGroup {
        AbelianGroup::cokernel(&self.relations)
    }

    fn norm_matrix(&self) -> Result<IntMatrix, MatrixError> {
        let mut sum = IntMatrix::identity(self.ambient_rank);
        let mut power = IntMatrix::identity(self.ambient_rank);
        for _ in 1..self.group_order {
            power = power.mul(&self.sigma)?;
            sum = mat_sum(&sum, &power);
        }
        Ok(sum)
    }

    /// ker(f on M) / im(g on M) for commuting endomorphisms with
    /// f·g = 0 on M, as lattice arithmetic in the ambient module.
    fn lattice_cohomology(
        &self,
        f: &IntMatrix,
        g: &IntMatrix,
    ) -> Result<AbelianGroup, CohomologyError> {
        // {x : f x in R} is the projection to the first r coordinates of
        // ker[f | R]: any solution of f x = R (-y) pairs x with a witness y.
        let stacked = f.hstack(&self.relations)?;
        let ker = kernel_basis(&stacked);
        let preimage_span = select_rows(&ker, self.ambient_rank);
        let kb = lattice_basis(&preimage_span);
        // g Z^r + R sits inside the kernel lattice; express it in that basis.
        let image_span = g.hstack(&self.relations)?;
        let coords = solve_in_lattice(&kb, &image_span)?;
        Ok(AbelianGroup::cokernel(&coords))
    }

    /// Tate cohomology in degree i, using 2-periodicity for cyclic groups.
    pub fn tate(&self, i: i64) -> Result<AbelianGroup, CohomologyError> {
        let s_minus_1 = mat_sub_identity(&self.sigma);
        let norm = self.norm_matrix()?;
        if i.rem_euclid(2) == 0 {
            self.lattice_cohomology(&s_minus_1, &norm)
        } else {
            self.lattice_cohomology(&norm, &s_minus_1)
        }
    }

    /// #H^0 / #H^1 as an exact rational. Both groups are finite for any
    /// finitely generated module over a finite cyclic group.
    pub fn herbrand_quotient(&self) -> Result<BigRational, CohomologyError> {
        let h0 = self.tate(0)?.order().ok_or(CohomologyError::InfiniteTate)?;
        let h1 = self.tate(1)?.order().ok_or(CohomologyError::InfiniteTate)?;
        Ok(BigRational::new(
            BigInt::from(h0),
            BigInt::from(h1),
        ))
    }

    /// Direct sum: block-diagonal action, stacked relations.
    pub fn direct_sum(&self, other: &CyclicGModule) -> Result<CyclicGModule, CohomologyError> {
        if self.group_order != other.group_order {
            return Err(CohomologyError::OrderMismatch {
                left: self.group_order,
                right: other.group_order,
            });
        }
        let r = self.ambient_rank + other.ambient_rank;
        let mut sigma = IntMatrix::zero(r, r);
        for i in 0..self.ambient_rank {
            for j in 0..self.ambient_rank {
                sigma.set(i, j, self.sigma.get(i, j).clone());
            }
        }
        for i in 0..other.ambient_rank {
            for j in 0..other.ambient_rank {
                sigma.set(
                    self.ambient_rank + i,
                    self.ambient_rank + j,
                    other.sigma.get(i, j).clone(),
                );
            }
        }
        let c = self.relations.cols() + other.relations.cols();
        let mut relations = IntMatrix::zero(r, c);
        for i in 0..self.ambient_rank {
            for j in 0..self.relations.cols() {
                relations.set(i, j, self.relations.get(i, j).clone());
            }
        }
        for i in 0..other.ambient_rank {
            for j in 0..other.relations.cols() {
                relations.set(
                    self.ambient_rank + i,
                    self.relations.cols() + j,
                    other.relations.get(i, j).clone(),
                );
            }
        }
        CyclicGModule::new(self.group_order, r, relations, sigma)
    }

    /// Splits the module along a stable sublattice: given spanning columns
    /// `sub_gens` in ambient coordinates, forms K = span(sub_gens) + R and
    /// returns (A, C) with A = K/R and C = Z^r/K, the two ends of the short
    /// exact sequence 0 -> A -> M -> C -> 0. Errors when the action does
    /// not preserve K.
    pub fn submodule_inclusion(
        &self,
        sub_gens: &IntMatrix,
    ) -> Result<(CyclicGModule, CyclicGModule), CohomologyError> {
        if sub_gens.rows() != self.ambient_rank {
            return Err(CohomologyError::BadModule(format!(
                "sublattice generators have {} rows for ambient rank {}",
                sub_gens.rows(),
                self.ambient_rank
            )));
        }
        let full_span = sub_gens.hstack(&self.relations)?;
        let kb = lattice_basis(&full_span);
        // Stability: sigma K inside K.
        let moved = self.sigma.mul(&kb)?;
        let sigma_sub = if kb.cols() == 0 {
            if !moved.is_zero() {
                return Err(CohomologyError::UnstableSublattice);
            }
            IntMatrix::zero(0, 0)
        } else {
            solve_in_lattice(&kb, &moved).map_err(|_| CohomologyError::UnstableSublattice)?
        };
        // A = K/R in the coordinates of K's basis.
        let relations_in_k = if kb.cols() == 0 {
            IntMatrix::zero(0, 0)
        } else {
            solve_in_lattice(&kb, &self.relations)
                .map_err(|_| CohomologyError::UnstableSublattice)?
        };
        let a = CyclicGModule::new(self.group_order, kb.cols(), relations_in_k, sigma_sub)?;
        // C = Z^r / K.
        let c = CyclicGModule::new(
            self.group_order,
            self.ambient_rank,
            kb,
            self.sigma.clone(),
        )?;
        Ok((a, c))
    }
}

/// Z[G/H] for G cyclic of order m and H its subgroup of order h (h | m):
/// the free module on the m/h cosets with the generator acting as the
/// cyclic shift.
pub fn permutation_module(m: u64, h: u64) -> Result<CyclicGModule, CohomologyError> {
    if h == 0 || !m.is_multiple_of(h) {
        return Err(CohomologyError::NonDivisor { h, m });
    }
    let k = usize::try_from(m / h)
        .map_err(|_| CohomologyError::BadModule("coset count overflows".into()))?;
    let mut sigma = IntMatrix::zero(k, k);
    for j in 0..k {
        sigma.set((j + 1) % k, j, BigInt::one());
    }
    CyclicGModule::new(m, k, IntMatrix::zero(k, 0), sigma)
}

/// The regular representation Z[G], G cyclic of order m.
pub fn regular_module(m: u64) -> Result<CyclicGModule, CohomologyError> {
    permutation_module(m, 1)
}

/// Z^rank with the trivial action of the cyclic group of order m.
pub fn trivial_module(m: u64, rank: usize) -> Result<CyclicGModule, CohomologyError> {
    CyclicGModule::new(m, rank, IntMatrix::zero(rank, 0), IntMatrix::identity(rank))
}

/// (s-1) copies of the augmentation ideal of Z[G] (the kernel of the
/// coordinate-sum map Z[G] -> Z), G cyclic of order m, in the basis
/// b_j = g^{j+1} - 1: the model whose degree-1 Tate group is (Z/m')^{s-1}
/// for prime m' = m.
pub fn augmentation_kernel_module(m: u64, s: usize) -> Result<CyclicGModule, CohomologyError> {
    if s == 0 {
        return Err(CohomologyError::BadModule(
            "the orbit count s must be at least 1".into(),
        ));
    }
    let rank = usize::try_from(m - 1)
        .map_err(|_| CohomologyError::BadModule("group order overflows".into()))?;
    let mut block = IntMatrix::zero(rank, rank);
    for j in 0..rank {
        // sigma(b_j) = b_{j+1} - b_0, where b_rank is read as 0.
        if j + 1 < rank {
            block.set(j + 1, j, BigInt::one());
        }
        let v = block.get(0, j) - BigInt::one();
        block.set(0, j, v);
    }
    let one_copy = CyclicGModule::new(m, rank, IntMatrix::zero(rank, 0), block)?;
    let mut out = trivial_module(m, 0)?;
    for _ in 1..s {
        out = out.direct_sum(&one_copy)?;
    }
    Ok(out)
}

/// Hypothesis flags for the degree-shift defect of the two-cycle module in
/// a degree-p tower step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HbarHypotheses {
    /// Every relevant level is a rational homology sphere.
    pub levels_are_rational_spheres: bool,
    /// The deck group of the step is cyclic of order p.
    pub deck_group_is_order_p: bool,
}

/// The defect h2 - h1 between the p-valuations of the two Tate groups of
/// the two-cycle module in a degree-p tower step. Under the stated
/// hypotheses that module is Z with the trivial action up to a degree
/// shift, so the defect is v_p(#H^1(Z)) - v_p(#H^0(Z)) = 0 - 1 = -1,
/// independent of p; it is computed here rather than hard-coded.
pub fn hbar_defect(p: u64, hypotheses: &HbarHypotheses) -> Result<i64, CohomologyError> {
    if !hypotheses.levels_are_rational_spheres {
        return Err(CohomologyError::HypothesesUnmet(
            "levels must be rational homology spheres".into(),
        ));
    }
    if !hypotheses.deck_group_is_order_p {
        return Err(CohomologyError::HypothesesUnmet(
            "the deck group of the step must be cyclic of order p".into(),
        ));
    }
    let model = trivial_module(p, 1)?;
    let vp = |g: &AbelianGroup| -> Result<i64, CohomologyError> {
        g.p_exponent(p)
            .map(|e| e as i64)
            .ok_or(CohomologyError::InfiniteTate)
    };
    Ok(vp(&model.tate(1)?)? - vp(&model.tate(0)?)?)
}
