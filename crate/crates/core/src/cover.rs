//! First homology of finite cyclic branched covers, computed from an
//! equivariant chain complex — an independent cross-check for the
//! resultant-based level orders of the tower engine.
//!
//! Given a meridian presentation of a link complement, a degree `N ≥ 1`, and
//! an integer weight per component (the image of that component's meridians
//! in Z/N), the cover of the complement has one vertex per residue `c`, one
//! edge `e_{j,c}` per generator `j` and residue, and one face per relator
//! and residue. Boundaries:
//!
//! * `∂₁ e_{j,c} = f_{c + w(j)} − f_c` where `w(j)` is the weight of the
//!   generator's component;
//! * the face of relator `r` at residue `c` maps to the free-derivative row
//!   of `r` with each monomial specialized to the translation by its
//!   weighted total degree, shifted by `c`.
//!
//! Branched filling: for every component `i`, the meridian orbit of a fixed
//! generator of `i` closes up after `m_i = N / gcd(N, w_i)` steps, in
//! `gcd(N, w_i)` distinct orbits; each orbit sum is glued to a disk. Weight
//! zero (`gcd = N`, `m_i = 1`) fills every lift of the component trivially,
//! so such components are simply refilled and do not branch.
//!
//! The first homology of the filled cover is `ker ∂₁` modulo the lattice
//! spanned by the face boundaries and the filling orbits.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::abelian::AbelianGroup;
use crate::link::{fox_jacobian, LinkError, LinkPresentation};
use crate::matrix::{kernel_basis, solve_in_lattice, IntMatrix};

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("cover degree must be at least 1")]
    ZeroDegree,
    #[error("got {got} weights for {expected} components")]
    WeightCount { expected: usize, got: usize },
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// First homology of the degree-`N` cyclic cover of the sphere branched
/// along the weight-nonzero components of the link.
///
/// `weights[i]` is where component `i`'s meridians go in Z/N; only the
/// residues mod `N` matter.
pub fn branched_cover_homology(
    pres: &LinkPresentation,
    weights: &[i64],
    degree: u64,
) -> Result<AbelianGroup, CoverError> {
    if degree == 0 {
        return Err(CoverError::ZeroDegree);
    }
    pres.validate()?;
    if weights.len() != pres.component_count {
        return Err(CoverError::WeightCount {
            expected: pres.component_count,
            got: weights.len(),
        });
    }
    let n = degree as usize;
    let g = pres.generator_count();
    let edges = n * g;
    let edge = |j: usize, c: usize| j * n + c;
    let gen_weight: Vec<usize> = pres
        .generator_component
        .iter()
        .map(|&comp| weights[comp].rem_euclid(degree as i64) as usize)
        .collect();

    // Vertex boundary of the covering graph.
    let mut d1 = IntMatrix::zero(n, edges);
    for (j, &w) in gen_weight.iter().enumerate() {
        for c in 0..n {
            let head = (c + w) % n;
            if head != c {
                bump(&mut d1, head, edge(j, c), 1);
                bump(&mut d1, c, edge(j, c), -1);
            }
        }
    }

    // Face boundaries: the free-derivative rows, one face per relator and
    // residue.
    let jac = fox_jacobian(pres)?;
    let mut spec_rows: Vec<Vec<Vec<(usize, BigInt)>>> = Vec::with_capacity(jac.rows.len());
    for row in &jac.rows {
        let mut spec_row = Vec::with_capacity(g);
        for entry in row {
            let supported = entry
                .specialize_exponents(weights)
                .map_err(LinkError::from)?
                .into_iter()
                .map(|(deg, coeff)| (deg.rem_euclid(degree as i64) as usize, coeff))
                .collect::<Vec<_>>();
            spec_row.push(supported);
        }
        spec_rows.push(spec_row);
    }

    let fillings: Vec<(usize, usize, usize)> = (0..pres.component_count)
        .map(|i| {
            let generator = pres
                .generator_component
                .iter()
                .position(|&c| c == i)
                .expect("validated presentations cover every component");
            let w = weights[i].rem_euclid(degree as i64) as usize;
            let orbits = gcd(n, w);
            (generator, w, orbits)
        })
        .collect();

    let face_cols = n * spec_rows.len();
    let fill_cols: usize = fillings.iter().map(|&(_, _, orbits)| orbits).sum();
    let mut relations = IntMatrix::zero(edges, face_cols + fill_cols);
    let mut col = 0;
    for spec_row in &spec_rows {
        for c in 0..n {
            for (j, supported) in spec_row.iter().enumerate() {
                for (deg, coeff) in supported {
                    let target = edge(j, (c + deg) % n);
                    let v = relations.get(target, col) + coeff;
                    relations.set(target, col, v);
                }
            }
            col += 1;
        }
    }
    for &(j, w, orbits) in &fillings {
        let steps = n / orbits;
        for start in 0..orbits {
            for t in 0..steps {
                bump(&mut relations, edge(j, (start + t * w) % n), col, 1);
            }
            col += 1;
        }
    }

    let cycles = kernel_basis(&d1);
    let coords = solve_in_lattice(&cycles, &relations).map_err(|e| {
        CoverError::Internal(format!("a boundary column is not a cycle: {e:?}"))
    })?;
    Ok(AbelianGroup::cokernel(&coords))
}

fn bump(m: &mut IntMatrix, i: usize, j: usize, delta: i64) {
    let v = m.get(i, j) + BigInt::from(delta);
    if v.is_zero() {
        m.set(i, j, BigInt::zero());
    } else {
        m.set(i, j, v);
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::pd::{corpus_codes::*, parse_pd};

    fn homology(code: &[[usize; 4]], weights: &[i64], degree: u64) -> AbelianGroup {
        branched_cover_homology(&parse_pd(code).unwrap(), weights, degree).unwrap()
    }

    #[test]
    fn trefoil_cover_ladder() {
        assert!(homology(&TREFOIL, &[1], 1).is_trivial());
        assert_eq!(
            homology(&TREFOIL, &[1], 2),
            AbelianGroup::from_u64(&[3]).unwrap()
        );
        assert_eq!(
            homology(&TREFOIL, &[1], 3),
            AbelianGroup::from_u64(&[2, 2]).unwrap()
        );
        assert_eq!(
            homology(&TREFOIL, &[1], 4),
            AbelianGroup::from_u64(&[3]).unwrap()
        );
        assert_eq!(
            homology(&TREFOIL, &[1], 6),
            AbelianGroup::from_u64(&[0, 0]).unwrap()
        );
    }

    #[test]
    fn figure_eight_covers() {
        assert_eq!(
            homology(&FIGURE_EIGHT, &[1], 2),
            AbelianGroup::from_u64(&[5]).unwrap()
        );
        // Triple cover: order 16 (the squared modulus of the polynomial at a
        // primitive cube root of unity).
        let h3 = homology(&FIGURE_EIGHT, &[1], 3);
        assert_eq!(h3.order().unwrap(), 16u32.into());
    }

    #[test]
    fn unknot_covers_are_spheres() {
        let unknot = LinkPresentation::unknot();
        for n in 1..=5 {
            assert!(branched_cover_homology(&unknot, &[1], n)
                .unwrap()
                .is_trivial());
        }
    }

    #[test]
    fn hopf_double_cover() {
        assert_eq!(
            homology(&HOPF, &[1, 1], 2),
            AbelianGroup::from_u64(&[2]).unwrap()
        );
    }

    #[test]
    fn hopf_branched_over_one_component_only() {
        // Weight zero on the second component: the cover branches over an
        // unknot and refills the other component's lifts — a sphere again.
        for n in [2, 3] {
            assert!(homology(&HOPF, &[1, 0], n).is_trivial());
        }
    }

    #[test]
    fn whitehead_double_cover() {
        assert_eq!(
            homology(&WHITEHEAD, &[1, 1], 2),
            AbelianGroup::from_u64(&[8]).unwrap()
        );
    }

    #[test]
    fn borromean_double_cover() {
        assert_eq!(
            homology(&BORROMEAN, &[1, 1, 1], 2),
            AbelianGroup::from_u64(&[4, 4]).unwrap()
        );
    }

    #[test]
    fn lens_ladder_from_hopf_total_linking() {
        // Total-linking weights on the positive Hopf link produce the cyclic
        // groups of the lens ladder.
        for n in 2..=5u64 {
            assert_eq!(
                homology(&HOPF, &[1, 1], n),
                AbelianGroup::from_u64(&[n]).unwrap()
            );
        }
    }

    #[test]
    fn input_validation() {
        let pres = parse_pd(&HOPF).unwrap();
        assert!(matches!(
            branched_cover_homology(&pres, &[1, 1], 0),
            Err(CoverError::ZeroDegree)
        ));
        assert!(matches!(
            branched_cover_homology(&pres, &[1], 2),
            Err(CoverError::WeightCount {
                expected: 2,
                got: 1
            })
        ));
    }
}
