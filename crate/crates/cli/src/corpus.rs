//! Bundled example files: links, tower configurations, a branched-cover
//! morphism, and cyclic-action modules. Each entry is a complete JSON
//! document compiled into the binary, addressable as `corpus:<name>` from
//! the command line and from other files.

/// What a bundled file describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    Link,
    Tower,
    Morphism,
    Module,
}

impl CorpusKind {
    pub fn label(self) -> &'static str {
        match self {
            CorpusKind::Link => "link",
            CorpusKind::Tower => "tower",
            CorpusKind::Morphism => "morphism",
            CorpusKind::Module => "module",
        }
    }
}

/// One bundled file with a short description.
pub struct CorpusEntry {
    pub name: &'static str,
    pub kind: CorpusKind,
    pub note: &'static str,
    pub json: &'static str,
}

/// All bundled entries, links first, then towers, morphisms, modules.
pub const ENTRIES: &[CorpusEntry] = &[
    CorpusEntry {
        name: "unknot",
        kind: CorpusKind::Link,
        note: "one-component diagramless presentation",
        json: include_str!("../corpus/unknot.json"),
    },
    CorpusEntry {
        name: "trefoil",
        kind: CorpusKind::Link,
        note: "left-handed trefoil knot, three-crossing diagram",
        json: include_str!("../corpus/trefoil.json"),
    },
    CorpusEntry {
        name: "figure-eight",
        kind: CorpusKind::Link,
        note: "figure-eight knot, four-crossing diagram",
        json: include_str!("../corpus/figure-eight.json"),
    },
    CorpusEntry {
        name: "hopf",
        kind: CorpusKind::Link,
        note: "positive Hopf link, linking number 1",
        json: include_str!("../corpus/hopf.json"),
    },
    CorpusEntry {
        name: "whitehead",
        kind: CorpusKind::Link,
        note: "Whitehead link, linking number 0",
        json: include_str!("../corpus/whitehead.json"),
    },
    CorpusEntry {
        name: "borromean",
        kind: CorpusKind::Link,
        note: "Borromean rings, pairwise linking 0",
        json: include_str!("../corpus/borromean.json"),
    },
    CorpusEntry {
        name: "torus-2-6",
        kind: CorpusKind::Link,
        note: "(2,6) torus link, linking number 3",
        json: include_str!("../corpus/torus-2-6.json"),
    },
    CorpusEntry {
        name: "threefold-cover-downstairs",
        kind: CorpusKind::Link,
        note: "linking data: Hopf pair plus branch axis downstairs",
        json: include_str!("../corpus/threefold-cover-downstairs.json"),
    },
    CorpusEntry {
        name: "threefold-cover-upstairs",
        kind: CorpusKind::Link,
        note: "linking data: rings, axis, and branch locus upstairs",
        json: include_str!("../corpus/threefold-cover-upstairs.json"),
    },
    CorpusEntry {
        name: "rings-axis",
        kind: CorpusKind::Link,
        note: "linking data: three rings around a common axis",
        json: include_str!("../corpus/rings-axis.json"),
    },
    CorpusEntry {
        name: "trefoil-p2",
        kind: CorpusKind::Tower,
        note: "trefoil tower at p = 2 (bounded homology)",
        json: include_str!("../corpus/trefoil-p2.json"),
    },
    CorpusEntry {
        name: "trefoil-p3",
        kind: CorpusKind::Tower,
        note: "trefoil tower at p = 3 (constant exponent 1)",
        json: include_str!("../corpus/trefoil-p3.json"),
    },
    CorpusEntry {
        name: "figure-eight-p3",
        kind: CorpusKind::Tower,
        note: "figure-eight tower at p = 3",
        json: include_str!("../corpus/figure-eight-p3.json"),
    },
    CorpusEntry {
        name: "hopf-p3",
        kind: CorpusKind::Tower,
        note: "Hopf tower at p = 3: lambda = 1, the downstairs side of the bundled morphism",
        json: include_str!("../corpus/hopf-p3.json"),
    },
    CorpusEntry {
        name: "whitehead-p2",
        kind: CorpusKind::Tower,
        note: "Whitehead tower at p = 2",
        json: include_str!("../corpus/whitehead-p2.json"),
    },
    CorpusEntry {
        name: "borromean-p2",
        kind: CorpusKind::Tower,
        note: "Borromean tower at p = 2",
        json: include_str!("../corpus/borromean-p2.json"),
    },
    CorpusEntry {
        name: "unknot-p5",
        kind: CorpusKind::Tower,
        note: "unknot tower at p = 5 (every level a sphere)",
        json: include_str!("../corpus/unknot-p5.json"),
    },
    CorpusEntry {
        name: "torus-2-6-p3",
        kind: CorpusKind::Tower,
        note: "(2,6) torus link at p = 3: level one is not a rational homology sphere",
        json: include_str!("../corpus/torus-2-6-p3.json"),
    },
    CorpusEntry {
        name: "rings-axis-p3",
        kind: CorpusKind::Tower,
        note: "rings-axis tower at p = 3, linking data only: lambda = 3 by the growth shortcut",
        json: include_str!("../corpus/rings-axis-p3.json"),
    },
    CorpusEntry {
        name: "threefold-branched",
        kind: CorpusKind::Morphism,
        note: "degree-3 branched cover from the rings-axis tower to the Hopf tower",
        json: include_str!("../corpus/threefold-branched.json"),
    },
    CorpusEntry {
        name: "regular-z3",
        kind: CorpusKind::Module,
        note: "regular representation of the cyclic group of order 3",
        json: include_str!("../corpus/regular-z3.json"),
    },
    CorpusEntry {
        name: "trivial-z-p3",
        kind: CorpusKind::Module,
        note: "trivial action on Z, cyclic group of order 3",
        json: include_str!("../corpus/trivial-z-p3.json"),
    },
    CorpusEntry {
        name: "aug-kernel-p3-s3",
        kind: CorpusKind::Module,
        note: "two copies of the order-3 augmentation ideal (three-orbit inertia model)",
        json: include_str!("../corpus/aug-kernel-p3-s3.json"),
    },
];

/// Find a bundled entry by name.
pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}
