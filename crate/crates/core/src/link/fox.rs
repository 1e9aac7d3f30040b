//! Free differential calculus on meridian presentations and the torsion
//! polynomial of the complement it yields.
//!
//! For a word `w` in free generators and a generator `x`, the derivative
//! `∂w/∂x` obeys `∂(uv)/∂x = ∂u/∂x + ū·∂v/∂x`, `∂x/∂x = 1`,
//! `∂x⁻¹/∂x = −x̄⁻¹`, where bars denote the ring map sending each generator
//! to the variable of its component. Everything here works with those images
//! directly, so derivatives are Laurent polynomials from the start.
//!
//! For a presentation with `g` generators and `g − 1` independent relators
//! (a redundant `g`-th relator is dropped when present), the `g` maximal
//! minors `M_j` of the derivative matrix determine the polynomial:
//! `M_j` itself for a knot, `M_j / (t_{c(j)} − 1)` for a multi-component
//! link, where `c(j)` is the component of the deleted generator's column.
//! All columns must agree up to units — a disagreement means the
//! presentation does not satisfy the meridian column identity and is
//! rejected.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use super::{LinkError, LinkPresentation};
use crate::mpoly::MultiPoly;

/// Hard ceiling on generator count for the all-minors determinant sweep
/// (the sweep is exponential in the generator count).
pub const MAX_GENERATORS: usize = 16;

/// Derivative matrix of a presentation: one row per relator, one column per
/// generator, entries Laurent polynomials in one variable per component.
#[derive(Debug, Clone)]
pub struct FoxJacobian {
    pub vars: usize,
    pub rows: Vec<Vec<MultiPoly>>,
}

/// Derivative of a single word with respect to generator `x`, with each
/// generator sent to its component's variable.
///
/// `generator_component[g]` is the 0-based component of generator `g`;
/// `vars` is the number of components. Letters are `(generator, ±1)`.
pub fn fox_derivative(
    vars: usize,
    generator_component: &[usize],
    word: &[(usize, i8)],
    x: usize,
) -> Result<MultiPoly, LinkError> {
    if x >= generator_component.len() {
        return Err(LinkError::InvalidPresentation(format!(
            "derivative with respect to generator {x}, but only {} generators",
            generator_component.len()
        )));
    }
    let mut result = MultiPoly::zero(vars);
    let mut prefix = MultiPoly::one(vars);
    for &(g, e) in word {
        let comp = *generator_component.get(g).ok_or_else(|| {
            LinkError::InvalidPresentation(format!("letter uses unknown generator {g}"))
        })?;
        match e {
            1 => {
                if g == x {
                    result = result.add(&prefix)?;
                }
                prefix = prefix.mul(&MultiPoly::var(vars, comp)?)?;
            }
            -1 => {
                prefix = prefix.mul(&MultiPoly::monomial(vars, comp, -1, BigInt::one())?)?;
                if g == x {
                    result = result.sub(&prefix)?;
                }
            }
            other => {
                return Err(LinkError::InvalidPresentation(format!(
                    "letter exponent {other} (words must be spelled with ±1 letters)"
                )));
            }
        }
    }
    Ok(result)
}

/// Full derivative matrix of a presentation, with the column identity
/// `Σ_j (∂r/∂g_j)(t_{c(j)} − 1) = 0` checked on every row.
pub fn fox_jacobian(pres: &LinkPresentation) -> Result<FoxJacobian, LinkError> {
    pres.validate()?;
    let vars = pres.component_count;
    let g = pres.generator_count();
    let mut rows = Vec::with_capacity(pres.relators.len());
    for word in &pres.relators {
        let mut row = Vec::with_capacity(g);
        for j in 0..g {
            row.push(fox_derivative(vars, &pres.generator_component, word, j)?);
        }
        // Column identity: the abelianized word is trivial iff this sum
        // telescopes to w̄ − 1 = 0.
        let mut acc = MultiPoly::zero(vars);
        for (j, entry) in row.iter().enumerate() {
            let t = MultiPoly::var(vars, pres.generator_component[j])?;
            let factor = t.sub(&MultiPoly::one(vars))?;
            acc = acc.add(&entry.mul(&factor)?)?;
        }
        if !acc.is_zero() {
            return Err(LinkError::InvalidPresentation(
                "relator fails the meridian column identity".into(),
            ));
        }
        rows.push(row);
    }
    Ok(FoxJacobian { vars, rows })
}

/// All maximal minors of a `(g−1) × g` matrix, sharing subdeterminants
/// across columns: one sweep over column subsets by size, expanding along
/// the last row each time.
fn maximal_minors(vars: usize, rows: &[Vec<MultiPoly>]) -> Result<Vec<MultiPoly>, LinkError> {
    let k = rows.len();
    let g = k + 1;
    debug_assert!(rows.iter().all(|r| r.len() == g));
    let full: u32 = (1u32 << g) - 1;

    // dets[s] = determinant of rows 0..popcount(s) on column set s;
    // only nonzero determinants are stored.
    let mut layer: HashMap<u32, MultiPoly> = HashMap::new();
    layer.insert(0, MultiPoly::one(vars));
    for (r, row) in rows.iter().enumerate() {
        let mut next: HashMap<u32, MultiPoly> = HashMap::new();
        for s in 0..=full {
            if s.count_ones() as usize != r + 1 {
                continue;
            }
            let mut det = MultiPoly::zero(vars);
            let mut pos = 0u32;
            for (j, entry) in row.iter().enumerate() {
                let bit = 1u32 << j;
                if s & bit == 0 {
                    continue;
                }
                if let Some(sub) = layer.get(&(s ^ bit)) {
                    if !entry.is_zero() {
                        let term = entry.mul(sub)?;
                        det = if (r as u32 + pos).is_multiple_of(2) {
                            det.add(&term)?
                        } else {
                            det.sub(&term)?
                        };
                    }
                }
                pos += 1;
            }
            if !det.is_zero() {
                next.insert(s, det);
            }
        }
        layer = next;
    }

    Ok((0..g)
        .map(|j| {
            layer
                .get(&(full ^ (1u32 << j)))
                .cloned()
                .unwrap_or_else(|| MultiPoly::zero(vars))
        })
        .collect())
}

/// Torsion polynomial of a meridian presentation, in canonical unit-normal
/// form: one variable per component.
///
/// * No relators: `1` for a single generator, `0` otherwise (free groups of
///   rank ≥ 2 have vanishing torsion).
/// * `g` relators on `g` generators: the last relator is dropped as
///   redundant; `g − 1` relators are used as given. Any other shape is
///   unsupported.
/// * Every column's minor must yield the same answer up to units; a clash
///   of zero and nonzero columns is rejected.
pub fn alexander_polynomial(pres: &LinkPresentation) -> Result<MultiPoly, LinkError> {
    pres.validate()?;
    let vars = pres.component_count;
    let g = pres.generator_count();
    let r = pres.relators.len();

    if r == 0 {
        return Ok(if g == 1 {
            MultiPoly::one(vars)
        } else {
            MultiPoly::zero(vars)
        });
    }
    if g > MAX_GENERATORS {
        return Err(LinkError::DegreeCap(g));
    }

    let jac = fox_jacobian(pres)?;
    let rows: &[Vec<MultiPoly>] = if r == g {
        &jac.rows[..g - 1]
    } else if r == g - 1 {
        &jac.rows
    } else {
        return Err(LinkError::UnsupportedShape {
            relators: r,
            generators: g,
        });
    };

    let minors = maximal_minors(vars, rows)?;

    let mut candidates: Vec<MultiPoly> = Vec::with_capacity(g);
    for (j, minor) in minors.iter().enumerate() {
        if minor.is_zero() {
            candidates.push(MultiPoly::zero(vars));
        } else if vars == 1 {
            candidates.push(minor.unit_normal());
        } else {
            let comp = pres.generator_component[j];
            let quotient = minor.div_by_var_minus_one(comp).map_err(|_| {
                LinkError::InconsistentMinors(format!(
                    "column {j} minor is not divisible by its component variable minus one"
                ))
            })?;
            candidates.push(quotient.unit_normal());
        }
    }

    let nonzero: Vec<&MultiPoly> = candidates.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(MultiPoly::zero(vars));
    }
    if nonzero.len() != candidates.len() {
        return Err(LinkError::InconsistentMinors(
            "some column minors vanish while others do not".into(),
        ));
    }
    let first = nonzero[0];
    if nonzero.iter().any(|c| !c.eq_up_to_units(first)) {
        return Err(LinkError::InconsistentMinors(
            "column minors disagree beyond unit factors".into(),
        ));
    }
    Ok(first.clone())
}
