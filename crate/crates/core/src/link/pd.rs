//! Planar-diagram codes.
//!
//! A diagram with `n` crossings is a list of quadruples `[a, b, c, d]` of
//! edge labels `1..=2n`; every label appears exactly twice overall. The
//! quadruple lists the four edge ends around the crossing counterclockwise,
//! starting from the incoming under-edge:
//!
//! ```text
//!         c                       c = next edge of the under-strand,
//!         ^
//!   d ----+----> b   (or b <--)   b and d carried by the over-strand,
//!         |
//!         a                       a = incoming under-edge.
//! ```
//!
//! Edge labels must run consecutively along each oriented component: the
//! edges of one component form an interval of integers ordered by travel
//! direction, wrapping from the interval's top back to its bottom. The
//! parser recovers the intervals, checks that the under-strand continues
//! consistently (`succ(a) = c` at every crossing), and reads off each
//! crossing's sign: with the under-strand oriented upward as drawn above,
//! the over-strand of a positive crossing runs left to right (`d` into `b`,
//! so `b = succ(d)`), and that of a negative crossing runs right to left
//! (`d = succ(b)`). When the over-strand's component has only two edges both
//! successor relations hold, and the direction is instead pinned down by
//! exclusion: the transition from an edge to its successor happens at
//! exactly one crossing, so a transition already used elsewhere (in
//! particular by any under-strand passage) cannot be reused.
//!
//! Merging the over-strand's edge pairs across all crossings yields the
//! diagram's arcs — the generators of the meridian presentation built by
//! [`parse_pd`]. At a crossing with over-arc `g`, incoming under-arc `a`,
//! outgoing under-arc `c`, the relator is `g a g⁻¹ c⁻¹` (positive) or
//! `g⁻¹ a g c⁻¹` (negative).

use super::{LinkError, LinkPresentation};

/// A parsed planar diagram: the validated code plus everything recovered
/// from it (component intervals, crossing signs, arcs).
#[derive(Debug, Clone)]
pub struct PdDiagram {
    pub crossings: Vec<[usize; 4]>,
    /// Per-crossing sign (+1 or −1).
    pub signs: Vec<i8>,
    /// Component index of each edge, indexed by `label - 1`.
    pub edge_component: Vec<usize>,
    /// Inclusive label interval of each component, in label order.
    pub component_ranges: Vec<(usize, usize)>,
    /// Arc index of each edge, indexed by `label - 1`.
    pub arc_of_edge: Vec<usize>,
    /// Component index of each arc.
    pub arc_component: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn unite(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl PdDiagram {
    /// Parse and validate a nonempty code.
    pub fn parse(code: &[[usize; 4]]) -> Result<Self, LinkError> {
        let n = code.len();
        if n == 0 {
            return Err(LinkError::MalformedCode(
                "empty code; use the diagramless trivial presentation instead".into(),
            ));
        }
        let edge_count = 2 * n;

        let mut occurrences = vec![0usize; edge_count];
        for cr in code {
            for &e in cr {
                if e == 0 || e > edge_count {
                    return Err(LinkError::MalformedCode(format!(
                        "edge label {e} out of range 1..={edge_count}"
                    )));
                }
                occurrences[e - 1] += 1;
            }
        }
        if let Some(e) = occurrences.iter().position(|&c| c != 2) {
            return Err(LinkError::MalformedCode(format!(
                "edge label {} appears {} times, expected 2",
                e + 1,
                occurrences[e]
            )));
        }

        // Components: under pairs {a, c} and over pairs {b, d} each lie on
        // one strand.
        let mut comp_uf = UnionFind::new(edge_count);
        for cr in code {
            comp_uf.unite(cr[0] - 1, cr[2] - 1);
            comp_uf.unite(cr[1] - 1, cr[3] - 1);
        }
        let mut rep_of_edge = vec![0usize; edge_count];
        for (e, rep) in rep_of_edge.iter_mut().enumerate() {
            *rep = comp_uf.find(e);
        }
        let mut reps: Vec<usize> = rep_of_edge.clone();
        reps.sort_unstable();
        reps.dedup();
        let mut component_ranges = Vec::with_capacity(reps.len());
        let mut edge_component = vec![usize::MAX; edge_count];
        for (ci, &rep) in reps.iter().enumerate() {
            let members: Vec<usize> = (0..edge_count).filter(|&e| rep_of_edge[e] == rep).collect();
            let lo = members[0];
            let hi = *members.last().expect("nonempty component");
            if members.len() != hi - lo + 1 {
                return Err(LinkError::MalformedCode(format!(
                    "edges of one component are not consecutively labelled: {:?}",
                    members.iter().map(|e| e + 1).collect::<Vec<_>>()
                )));
            }
            for &e in &members {
                edge_component[e] = ci;
            }
            component_ranges.push((lo + 1, hi + 1));
        }

        // succ along orientation: next label in the component's interval.
        let succ = |e: usize| -> usize {
            let (lo, hi) = component_ranges[edge_component[e - 1]];
            if e == hi {
                lo
            } else {
                e + 1
            }
        };

        // Each transition e -> succ(e) happens at exactly one crossing: the
        // one where edge e ends. Under-strands fix their transitions
        // directly (a ends where c begins); over-strand directions are then
        // forced by exclusion, because a transition already spent on another
        // crossing cannot recur. Only a two-edge component passing over at
        // both of its crossings leaves a genuine two-fold choice (the two
        // readings are isotopic diagrams); the first such crossing is read
        // forward to make the result deterministic.
        let mut transition_at: Vec<Option<usize>> = vec![None; edge_count];
        for (x, cr) in code.iter().enumerate() {
            let [a, _, c, _] = *cr;
            if succ(a) != c {
                return Err(LinkError::MalformedCode(format!(
                    "crossing {x}: under-strand runs {a} -> {c}, but the next edge after {a} is {}",
                    succ(a)
                )));
            }
            if transition_at[a - 1].is_some() {
                return Err(LinkError::MalformedCode(format!(
                    "edge {a} ends at two different crossings"
                )));
            }
            transition_at[a - 1] = Some(x);
        }

        let mut signs: Vec<i8> = vec![0; n];
        loop {
            let mut progress = false;
            let mut pending = false;
            for (x, cr) in code.iter().enumerate() {
                if signs[x] != 0 {
                    continue;
                }
                let [_, b, _, d] = *cr;
                // Forward (d -> b) means the over-strand runs left to right
                // across the upward under-strand: a positive crossing.
                let forward = succ(d) == b && transition_at[d - 1].is_none();
                let backward = succ(b) == d && transition_at[b - 1].is_none();
                match (forward, backward) {
                    (true, false) => {
                        transition_at[d - 1] = Some(x);
                        signs[x] = 1;
                        progress = true;
                    }
                    (false, true) => {
                        transition_at[b - 1] = Some(x);
                        signs[x] = -1;
                        progress = true;
                    }
                    (true, true) => pending = true,
                    (false, false) => {
                        return Err(LinkError::MalformedCode(format!(
                            "crossing {x}: over edges {b} and {d} admit no consistent travel direction"
                        )));
                    }
                }
            }
            if !pending {
                break;
            }
            if !progress {
                let (x, cr) = code
                    .iter()
                    .enumerate()
                    .find(|&(x, _)| signs[x] == 0)
                    .expect("a pending crossing exists");
                transition_at[cr[3] - 1] = Some(x);
                signs[x] = 1;
            }
        }

        // Arcs: over-strand edge pairs merge.
        let mut arc_uf = UnionFind::new(edge_count);
        for cr in code {
            arc_uf.unite(cr[1] - 1, cr[3] - 1);
        }
        let mut arc_index = vec![usize::MAX; edge_count];
        let mut arc_component = Vec::new();
        let mut arc_of_edge = vec![0usize; edge_count];
        for (e, arc) in arc_of_edge.iter_mut().enumerate() {
            let rep = arc_uf.find(e);
            if arc_index[rep] == usize::MAX {
                arc_index[rep] = arc_component.len();
                arc_component.push(edge_component[rep]);
            }
            *arc = arc_index[rep];
        }

        Ok(PdDiagram {
            crossings: code.to_vec(),
            signs,
            edge_component,
            component_ranges,
            arc_of_edge,
            arc_component,
        })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn component_count(&self) -> usize {
        self.component_ranges.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_component.len()
    }

    /// Component index of a 1-based edge label.
    pub fn component_of_edge(&self, label: usize) -> usize {
        self.edge_component[label - 1]
    }

    /// Arc index of a 1-based edge label.
    pub fn arc_of(&self, label: usize) -> usize {
        self.arc_of_edge[label - 1]
    }

    /// Sum of crossing signs.
    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| i64::from(s)).sum()
    }
}

/// Build the meridian presentation of a diagram: one generator per arc, one
/// relator per crossing (and the diagramless trivial presentation for the
/// empty code).
pub fn parse_pd(code: &[[usize; 4]]) -> Result<LinkPresentation, LinkError> {
    if code.is_empty() {
        return Ok(LinkPresentation::unknot());
    }
    let pd = PdDiagram::parse(code)?;
    let mut relators = Vec::with_capacity(pd.crossing_count());
    for (x, cr) in pd.crossings.iter().enumerate() {
        let g = pd.arc_of(cr[1]);
        let a = pd.arc_of(cr[0]);
        let c = pd.arc_of(cr[2]);
        let word = if pd.signs[x] > 0 {
            vec![(g, 1), (a, 1), (g, -1), (c, -1)]
        } else {
            vec![(g, -1), (a, 1), (g, 1), (c, -1)]
        };
        relators.push(word);
    }
    let pres = LinkPresentation {
        name: String::new(),
        component_count: pd.component_count(),
        generator_component: pd.arc_component.clone(),
        relators,
        pd_source: Some(pd),
    };
    pres.validate()?;
    Ok(pres)
}

/// The mirror image of a diagram: over- and under-strands swap at every
/// crossing. Starting the counterclockwise listing from the mirror's
/// incoming under-edge (the old incoming over-edge) gives, per crossing,
/// `[d, a, b, c]` at an old positive crossing and `[b, c, d, a]` at an old
/// negative one. All crossing signs flip.
pub fn mirror_pd(code: &[[usize; 4]]) -> Result<Vec<[usize; 4]>, LinkError> {
    let pd = PdDiagram::parse(code)?;
    Ok(pd
        .crossings
        .iter()
        .zip(&pd.signs)
        .map(|(&[a, b, c, d], &s)| if s > 0 { [d, a, b, c] } else { [b, c, d, a] })
        .collect())
}

/// Diagram codes for the bundled example links.
pub mod corpus_codes {
    /// Left-handed trefoil (all three crossings negative).
    pub const TREFOIL: [[usize; 4]; 3] = [[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]];

    /// Figure-eight knot (writhe zero).
    pub const FIGURE_EIGHT: [[usize; 4]; 4] =
        [[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]];

    /// Positive Hopf link (linking number +1).
    pub const HOPF: [[usize; 4]; 2] = [[4, 2, 3, 1], [2, 4, 1, 3]];

    /// Whitehead link (linking number 0, five crossings).
    pub const WHITEHEAD: [[usize; 4]; 5] = [
        [6, 1, 7, 2],
        [10, 7, 5, 8],
        [4, 5, 1, 6],
        [2, 10, 3, 9],
        [8, 4, 9, 3],
    ];

    /// Borromean rings (three components, pairwise unlinked), read off the
    /// closed three-strand braid (σ₁ σ₂⁻¹)³.
    pub const BORROMEAN: [[usize; 4]; 6] = [
        [5, 1, 6, 2],
        [2, 10, 3, 9],
        [10, 6, 11, 7],
        [7, 4, 8, 3],
        [4, 11, 1, 12],
        [12, 5, 9, 8],
    ];

    /// (2,6) torus link: two strands with six positive half-twists, linking
    /// number 3. Its one-variable specialization Δ(t,t) ≐ t⁴+t²+1 vanishes
    /// at primitive cube roots of unity.
    pub const TORUS_2_6: [[usize; 4]; 6] = [
        [6, 7, 1, 12],
        [7, 2, 8, 1],
        [2, 9, 3, 8],
        [9, 4, 10, 3],
        [4, 11, 5, 10],
        [11, 6, 12, 5],
    ];
}

#[cfg(test)]
mod tests {
    use super::corpus_codes::*;
    use super::*;

    #[test]
    fn trefoil_parses_with_three_negative_crossings() {
        let pd = PdDiagram::parse(&TREFOIL).unwrap();
        assert_eq!(pd.component_count(), 1);
        assert_eq!(pd.arc_count(), 3);
        assert_eq!(pd.signs, vec![-1, -1, -1]);
        assert_eq!(pd.writhe(), -3);

        let pres = parse_pd(&TREFOIL).unwrap();
        assert_eq!(pres.generator_count(), 3);
        assert_eq!(pres.relators.len(), 3);
        assert_eq!(pres.component_count, 1);
    }

    #[test]
    fn empty_code_gives_trivial_presentation() {
        let pres = parse_pd(&[]).unwrap();
        assert_eq!(pres.generator_count(), 1);
        assert!(pres.relators.is_empty());
        assert_eq!(pres.component_count, 1);
    }

    #[test]
    fn repeated_label_count_is_rejected() {
        // Edge 7 replaces one occurrence of 6: both appear once.
        let bad = [[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 7, 3]];
        assert!(matches!(
            PdDiagram::parse(&bad),
            Err(LinkError::MalformedCode(_))
        ));
    }

    #[test]
    fn inconsistent_under_strand_is_rejected() {
        // Swap a and c in one crossing of the trefoil: under-strand would
        // run backwards.
        let bad = [[2, 4, 1, 5], [3, 6, 4, 1], [5, 2, 6, 3]];
        assert!(matches!(
            PdDiagram::parse(&bad),
            Err(LinkError::MalformedCode(_))
        ));
    }

    #[test]
    fn figure_eight_has_writhe_zero() {
        let pd = PdDiagram::parse(&FIGURE_EIGHT).unwrap();
        assert_eq!(pd.component_count(), 1);
        assert_eq!(pd.arc_count(), 4);
        assert_eq!(pd.writhe(), 0);
        assert_eq!(pd.signs.iter().filter(|&&s| s > 0).count(), 2);
    }

    #[test]
    fn hopf_is_a_positive_two_component_diagram() {
        let pd = PdDiagram::parse(&HOPF).unwrap();
        assert_eq!(pd.component_count(), 2);
        assert_eq!(pd.component_ranges, vec![(1, 2), (3, 4)]);
        assert_eq!(pd.signs, vec![1, 1]);
    }

    #[test]
    fn whitehead_structure() {
        let pd = PdDiagram::parse(&WHITEHEAD).unwrap();
        assert_eq!(pd.component_count(), 2);
        assert_eq!(pd.component_ranges, vec![(1, 4), (5, 10)]);
        assert_eq!(pd.arc_count(), 5);
        // Balanced signs: +2 −3 ⇒ writhe −1 on this diagram.
        assert_eq!(pd.writhe(), -1);
    }

    #[test]
    fn borromean_structure() {
        let pd = PdDiagram::parse(&BORROMEAN).unwrap();
        assert_eq!(pd.component_count(), 3);
        assert_eq!(pd.component_ranges, vec![(1, 4), (5, 8), (9, 12)]);
        assert_eq!(pd.arc_count(), 6);
        assert_eq!(pd.writhe(), 0);
    }

    #[test]
    fn torus_2_6_structure() {
        let pd = PdDiagram::parse(&TORUS_2_6).unwrap();
        assert_eq!(pd.component_count(), 2);
        assert_eq!(pd.writhe(), 6);
        let linking = crate::link::LinkingMatrix::from_pd(&pd).unwrap();
        assert_eq!(linking.lk(0, 1), 3);
    }

    #[test]
    fn torus_2_6_diagonal_alexander_is_cyclotomic() {
        use crate::link::fox::alexander_polynomial;
        let pres = parse_pd(&TORUS_2_6).unwrap();
        let delta = alexander_polynomial(&pres).unwrap();
        // Δ(t,t) ≐ t⁴ + t² + 1 = (t²+t+1)(t²−t+1).
        let spec = delta.specialize(&[1, 1]).unwrap();
        let expect: Vec<i64> = vec![1, 0, 1, 0, 1];
        let got: Vec<num_bigint::BigInt> = spec;
        let norm: Vec<num_bigint::BigInt> = if got.first().map(|c| c.sign()) == Some(num_bigint::Sign::Minus) {
            got.iter().map(|c| -c).collect()
        } else {
            got
        };
        assert_eq!(
            norm,
            expect
                .iter()
                .map(|&c| num_bigint::BigInt::from(c))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn mirror_flips_every_sign() {
        for code in [
            TREFOIL.to_vec(),
            FIGURE_EIGHT.to_vec(),
            HOPF.to_vec(),
            WHITEHEAD.to_vec(),
            BORROMEAN.to_vec(),
        ] {
            let pd = PdDiagram::parse(&code).unwrap();
            let mirrored = mirror_pd(&code).unwrap();
            let mpd = PdDiagram::parse(&mirrored).unwrap();
            assert_eq!(pd.component_count(), mpd.component_count());
            for (s, t) in pd.signs.iter().zip(&mpd.signs) {
                assert_eq!(*s, -t);
            }
        }
    }

    #[test]
    fn wirtinger_relators_conjugate_within_components() {
        let pres = parse_pd(&BORROMEAN).unwrap();
        pres.validate().unwrap();
        for word in &pres.relators {
            assert_eq!(word.len(), 4);
            // Letters 0 and 2 are the over-arc with opposite exponents.
            assert_eq!(word[0].0, word[2].0);
            assert_eq!(word[0].1, -word[2].1);
            // Letters 1 and 3 are under-arcs of one component.
            assert_eq!(
                pres.generator_component[word[1].0],
                pres.generator_component[word[3].0]
            );
        }
    }
}
