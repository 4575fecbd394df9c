//! Finite abstract simplicial complexes and full subcomplexes.
//!
//! A simplex is a strictly increasing tuple of vertex indices. Simplices are
//! stored per dimension; the position of a simplex in its dimension list is
//! its index in the cochain basis.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub type Simplex = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("vertex {vertex} is out of range (complex has {count} vertices)")]
    UnknownVertex { vertex: usize, count: usize },
    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(ValidationReport),
    #[error("simplex {0:?} of the subcomplex is not a simplex of the parent")]
    NotSubcomplex(Vec<String>),
    #[error("closed locus is not a full subcomplex: parent simplex {0:?} is spanned by its vertices but missing")]
    NotFull(Simplex),
    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Simplex),
    #[error("empty simplex")]
    EmptySimplex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateLabel(String),
    EmptySimplex { dim: usize },
    WrongDimension { dim: usize, simplex: Simplex },
    VertexOutOfRange { simplex: Simplex },
    NotIncreasing { simplex: Simplex },
    Duplicate { simplex: Simplex },
    MissingFace { simplex: Simplex, face: Simplex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateLabel(l) => write!(f, "duplicate vertex label {l:?}"),
            Violation::EmptySimplex { dim } => write!(f, "empty simplex listed in dimension {dim}"),
            Violation::WrongDimension { dim, simplex } => {
                write!(f, "simplex {simplex:?} listed in dimension {dim}")
            }
            Violation::VertexOutOfRange { simplex } => write!(f, "vertex out of range in {simplex:?}"),
            Violation::NotIncreasing { simplex } => write!(f, "unsorted tuple {simplex:?}"),
            Violation::Duplicate { simplex } => write!(f, "duplicate simplex {simplex:?}"),
            Violation::MissingFace { simplex, face } => {
                write!(f, "missing face {face:?} of {simplex:?}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("labels", &self.labels)
            .field("simplices", &self.simplices)
            .finish()
    }
}

impl SimplicialComplex {
    /// Takes the per-dimension simplex lists verbatim. Nothing is checked;
    /// call [`validate`] before relying on the invariants.
    pub fn from_parts(labels: Vec<String>, simplices: Vec<Vec<Simplex>>) -> Self {
        let index = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Self { labels, simplices, index }
    }

    /// Downward closure of the given simplices. Tuples may be unsorted.
    /// Returns the complex and the faces that had to be added.
    pub fn from_simplices(
        labels: Vec<String>,
        generators: &[Simplex],
    ) -> Result<(Self, Vec<Simplex>), ComplexError> {
        let n = labels.len();
        let mut listed: BTreeSet<Simplex> = BTreeSet::new();
        for g in generators {
            if g.is_empty() {
                return Err(ComplexError::EmptySimplex);
            }
            if let Some(&v) = g.iter().find(|&&v| v >= n) {
                return Err(ComplexError::UnknownVertex { vertex: v, count: n });
            }
            let mut s = g.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedVertex(g.clone()));
            }
            listed.insert(s);
        }
        let mut all = listed.clone();
        for s in &listed {
            for face in nonempty_faces(s) {
                all.insert(face);
            }
        }
        let added: Vec<Simplex> = all.difference(&listed).cloned().collect();
        let top = all.iter().map(|s| s.len()).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        for level in &mut by_dim {
            level.sort();
        }
        let mut added = added;
        added.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok((Self::from_parts(labels, by_dim), added))
    }

    pub fn new(labels: Vec<String>, generators: &[Simplex]) -> Result<Self, ComplexError> {
        Self::from_simplices(labels, generators).map(|(x, _)| x)
    }

    /// Complex on vertices `0..n` labelled `v0, v1, ...`.
    pub fn with_numbered_vertices(n: usize, generators: &[Simplex]) -> Result<Self, ComplexError> {
        Self::new((0..n).map(|i| format!("v{i}")).collect(), generators)
    }

    pub fn point() -> Self {
        Self::with_numbered_vertices(1, &[vec![0]]).expect("point")
    }

    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), Vec::new())
    }

    /// Boundary of an `n`-gon, `n >= 3`: vertices `v0..v(n-1)`, edges `i,i+1`.
    pub fn polygon(n: usize) -> Self {
        assert!(n >= 3, "a polygon needs at least three vertices");
        let edges: Vec<Simplex> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Self::with_numbered_vertices(n, &edges).expect("polygon")
    }

    /// The full `n`-simplex.
    pub fn simplex(n: usize) -> Self {
        Self::with_numbered_vertices(n + 1, &[(0..=n).collect()]).expect("simplex")
    }

    /// The boundary of the `n`-simplex, a triangulated `(n-1)`-sphere.
    pub fn simplex_boundary(n: usize) -> Self {
        let facets: Vec<Simplex> =
            (0..=n).map(|skip| (0..=n).filter(|&v| v != skip).collect()).collect();
        Self::with_numbered_vertices(n + 1, &facets).expect("sphere")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    /// Number of simplex dimensions stored (top dimension + 1).
    pub fn num_levels(&self) -> usize {
        self.simplices.len()
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.simplices.get(dim).map_or(&[], |v| v.as_slice())
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().flatten()
    }

    pub fn num_simplices(&self) -> usize {
        self.simplices.iter().map(|v| v.len()).sum()
    }

    pub fn simplex_index(&self, simplex: &[usize]) -> Option<usize> {
        let dim = simplex.len().checked_sub(1)?;
        self.index.get(dim)?.get(simplex).copied()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.simplex_index(simplex).is_some()
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn simplex_labels(&self, simplex: &[usize]) -> Vec<String> {
        simplex.iter().map(|&v| self.labels[v].clone()).collect()
    }
}

fn nonempty_faces(s: &[usize]) -> Vec<Simplex> {
    let k = s.len();
    (1u64..(1u64 << k) - 1)
        .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect())
        .collect()
}

/// Codimension-one faces, the `i`-th omitting vertex position `i`.
pub fn boundary_faces(s: &[usize]) -> Vec<Simplex> {
    (0..s.len())
        .map(|skip| s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect())
        .collect()
}

/// Checks labels, tuple shape, duplicates and downward closure.
pub fn validate(x: &SimplicialComplex) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen_labels = BTreeSet::new();
    for l in &x.labels {
        if !seen_labels.insert(l) {
            violations.push(Violation::DuplicateLabel(l.clone()));
        }
    }
    let n = x.num_vertices();
    for (dim, level) in x.simplices.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for s in level {
            if s.is_empty() {
                violations.push(Violation::EmptySimplex { dim });
                continue;
            }
            if s.len() != dim + 1 {
                violations.push(Violation::WrongDimension { dim, simplex: s.clone() });
            }
            if s.iter().any(|&v| v >= n) {
                violations.push(Violation::VertexOutOfRange { simplex: s.clone() });
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                violations.push(Violation::NotIncreasing { simplex: s.clone() });
            }
            if !seen.insert(s.clone()) {
                violations.push(Violation::Duplicate { simplex: s.clone() });
            }
            if s.len() > 1 {
                for face in boundary_faces(s) {
                    if !x.contains(&face) {
                        violations.push(Violation::MissingFace { simplex: s.clone(), face });
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}

/// A closed locus `Z` in a complex, given by its vertex set. Only full
/// subcomplexes model closed immersions; `is_full` records whether the
/// selection is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcomplexSelection {
    parent_vertices: usize,
    vertices: BTreeSet<usize>,
    simplices: Vec<Simplex>,
    full: bool,
}

impl SubcomplexSelection {
    /// Selection given by explicit simplices; fullness is computed, and
    /// callers that need a closed locus must check [`Self::require_full`].
    pub fn from_simplices(x: &SimplicialComplex, simplices: &[Simplex]) -> Result<Self, ComplexError> {
        let mut listed = BTreeSet::new();
        for s in simplices {
            let mut t = s.clone();
            t.sort_unstable();
            if !x.contains(&t) {
                return Err(ComplexError::NotSubcomplex(x.simplex_labels(&t)));
            }
            listed.insert(t);
        }
        let closed: BTreeSet<Simplex> = listed
            .iter()
            .flat_map(|s| nonempty_faces(s).into_iter().chain(std::iter::once(s.clone())))
            .collect();
        let vertices: BTreeSet<usize> = closed.iter().flatten().copied().collect();
        let full = x
            .all_simplices()
            .filter(|s| s.iter().all(|v| vertices.contains(v)))
            .all(|s| closed.contains(s));
        Ok(Self {
            parent_vertices: x.num_vertices(),
            vertices,
            simplices: closed.into_iter().collect(),
            full,
        })
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn parent_vertices(&self) -> usize {
        self.parent_vertices
    }

    /// `Err(NotFull)` naming a parent simplex the selection misses.
    pub fn require_full(&self, x: &SimplicialComplex) -> Result<(), ComplexError> {
        if self.full {
            return Ok(());
        }
        let missing = x
            .all_simplices()
            .find(|s| s.iter().all(|v| self.vertices.contains(v)) && self.simplices.binary_search(s).is_err())
            .cloned()
            .unwrap_or_default();
        Err(ComplexError::NotFull(missing))
    }
}

/// The full subcomplex spanned by `vs`.
pub fn full_subcomplex(
    x: &SimplicialComplex,
    vs: impl IntoIterator<Item = usize>,
) -> Result<SubcomplexSelection, ComplexError> {
    let n = x.num_vertices();
    let vertices: BTreeSet<usize> = vs.into_iter().collect();
    if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
        return Err(ComplexError::UnknownVertex { vertex: v, count: n });
    }
    let simplices: Vec<Simplex> =
        x.all_simplices().filter(|s| s.iter().all(|v| vertices.contains(v))).cloned().collect();
    let mut simplices = simplices;
    simplices.sort();
    Ok(SubcomplexSelection { parent_vertices: n, vertices, simplices, full: true })
}

/// Full subcomplex on the vertices outside `z`, relabelled densely with the
/// parent labels kept. For a full `z` this is a deformation retract of the
/// open complement `|X| \ |Z|`.
pub fn complement_subcomplex(x: &SimplicialComplex, z: &SubcomplexSelection) -> SimplicialComplex {
    let kept: Vec<usize> = (0..x.num_vertices()).filter(|v| !z.vertices.contains(v)).collect();
    let mut new_index = vec![usize::MAX; x.num_vertices()];
    for (i, &v) in kept.iter().enumerate() {
        new_index[v] = i;
    }
    let labels = kept.iter().map(|&v| x.labels[v].clone()).collect();
    let mut levels: Vec<Vec<Simplex>> = x
        .simplices
        .iter()
        .map(|level| {
            level
                .iter()
                .filter(|s| s.iter().all(|&v| new_index[v] != usize::MAX))
                .map(|s| s.iter().map(|&v| new_index[v]).collect())
                .collect()
        })
        .collect();
    while levels.last().is_some_and(|l: &Vec<Simplex>| l.is_empty()) {
        levels.pop();
    }
    SimplicialComplex::from_parts(labels, levels)
}

/// Maps every simplex of `c` to the parent index tuple of `x`, matching
/// vertices by label.
pub(crate) fn embed_by_labels(
    x: &SimplicialComplex,
    c: &SimplicialComplex,
) -> Result<Vec<Vec<usize>>, ComplexError> {
    let vertex_map: Vec<usize> = c
        .labels
        .iter()
        .map(|l| x.vertex_by_label(l).ok_or_else(|| ComplexError::UnknownLabel(l.clone())))
        .collect::<Result<_, _>>()?;
    c.simplices
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|s| {
                    let mut t: Simplex = s.iter().map(|&v| vertex_map[v]).collect();
                    t.sort_unstable();
                    x.simplex_index(&t).ok_or_else(|| ComplexError::NotSubcomplex(c.simplex_labels(s)))
                })
                .collect()
        })
        .collect()
}
