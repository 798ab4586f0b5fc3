//! Colored simplicial complexes with bitset faces.
//!
//! A complex lives on the vertex set `[0, n)` partitioned into `c` contiguous
//! color blocks of sizes `n_1, ..., n_c`; block `i` (0-based) spans
//! `[start_i, start_i + n_i)`. Only inclusion-maximal faces are stored; every
//! subset of a stored face is a face. The void complex (no faces at all) and
//! the complex containing only the empty face are distinct: the former has no
//! maximal faces, the latter has the single maximal face `∅`.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;
use thiserror::Error;

/// Vertices are dense indices in `[0, n)`.
pub type VertexId = usize;

const WORD_BITS: usize = 64;

/// A finite vertex set, stored as a bitset. Used both for faces of a complex
/// and for plain vertex subsets (color blocks, reference sets, ...).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Face {
    /// Little-endian words; invariant: no trailing zero words.
    words: SmallVec<[u64; 3]>,
}

impl Face {
    pub fn empty() -> Self {
        Face::default()
    }

    pub fn singleton(v: VertexId) -> Self {
        let mut f = Face::empty();
        f.insert(v);
        f
    }

    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(vertices: I) -> Self {
        let mut f = Face::empty();
        for v in vertices {
            f.insert(v);
        }
        f
    }

    /// All vertices in `[lo, hi)`.
    pub fn interval(lo: VertexId, hi: VertexId) -> Self {
        Face::from_vertices(lo..hi)
    }

    pub fn insert(&mut self, v: VertexId) {
        let (w, b) = (v / WORD_BITS, v % WORD_BITS);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1u64 << b;
    }

    pub fn remove(&mut self, v: VertexId) {
        let (w, b) = (v / WORD_BITS, v % WORD_BITS);
        if w < self.words.len() {
            self.words[w] &= !(1u64 << b);
            self.normalize();
        }
    }

    pub fn with(mut self, v: VertexId) -> Self {
        self.insert(v);
        self
    }

    pub fn without(mut self, v: VertexId) -> Self {
        self.remove(v);
        self
    }

    pub fn contains(&self, v: VertexId) -> bool {
        let (w, b) = (v / WORD_BITS, v % WORD_BITS);
        w < self.words.len() && self.words[w] & (1u64 << b) != 0
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Dimension as a simplex: `|A| - 1`, so the empty face has dimension -1.
    pub fn dim(&self) -> isize {
        self.len() as isize - 1
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        if self.words.len() > other.words.len() {
            return false;
        }
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &Face) -> Face {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(short.words.iter()) {
            *w |= s;
        }
        Face { words }
    }

    pub fn intersection(&self, other: &Face) -> Face {
        let n = self.words.len().min(other.words.len());
        let mut words: SmallVec<[u64; 3]> = SmallVec::with_capacity(n);
        for i in 0..n {
            words.push(self.words[i] & other.words[i]);
        }
        let mut f = Face { words };
        f.normalize();
        f
    }

    pub fn difference(&self, other: &Face) -> Face {
        let mut words = self.words.clone();
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w &= !o;
        }
        let mut f = Face { words };
        f.normalize();
        f
    }

    /// Number of vertices in `[lo, hi)`.
    pub fn count_in_range(&self, lo: VertexId, hi: VertexId) -> usize {
        if lo >= hi {
            return 0;
        }
        let mut count = 0;
        let (wl, wh) = (lo / WORD_BITS, (hi - 1) / WORD_BITS);
        for w in wl..=wh.min(self.words.len().saturating_sub(1)) {
            if w >= self.words.len() {
                break;
            }
            let mut word = self.words[w];
            if w == wl {
                word &= !0u64 << (lo % WORD_BITS);
            }
            if w == wh {
                let top = hi - w * WORD_BITS;
                if top < WORD_BITS {
                    word &= (1u64 << top) - 1;
                }
            }
            count += word.count_ones() as usize;
        }
        count
    }

    pub fn min_vertex(&self) -> Option<VertexId> {
        for (i, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some(i * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        for (i, w) in self.words.iter().enumerate().rev() {
            if *w != 0 {
                return Some(i * WORD_BITS + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(i * WORD_BITS + b)
                }
            })
        })
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    /// Rebuild the set through a vertex renaming.
    pub fn map_vertices(&self, f: impl Fn(VertexId) -> VertexId) -> Face {
        Face::from_vertices(self.iter().map(f))
    }

    /// Vertex-sequence lexicographic order (`{0,1} < {0,2} < {1}`), used for
    /// canonical sorting of maximal-face lists in reports and JSON output.
    pub fn cmp_vertex_lex(&self, other: &Face) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }

    fn normalize(&mut self) {
        while let Some(&0) = self.words.last() {
            self.words.pop();
        }
    }
}

impl FromIterator<VertexId> for Face {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        Face::from_vertices(iter)
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Face {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let vertices = Vec::<VertexId>::deserialize(deserializer)?;
        Ok(Face::from_vertices(vertices))
    }
}

/// A vector indexed by color, e.g. block sizes `n`, face signatures `k`, or
/// reference sizes `r`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorVector(pub Vec<usize>);

impl ColorVector {
    pub fn new(parts: Vec<usize>) -> Self {
        ColorVector(parts)
    }

    /// Number of colors.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Componentwise `<=`.
    pub fn le(&self, other: &ColorVector) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn zeros(c: usize) -> Self {
        ColorVector(vec![0; c])
    }
}

impl std::ops::Index<usize> for ColorVector {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl fmt::Display for ColorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("color vector has {got} entries, expected {expected}")]
    ColorCountMismatch { got: usize, expected: usize },
}

/// A simplicial complex on colored vertices, stored by its inclusion-maximal
/// faces (an antichain, canonically sorted).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoredComplex {
    n_per_color: ColorVector,
    block_starts: Vec<usize>,
    maximal_faces: Vec<Face>,
}

impl ColoredComplex {
    /// Build a complex from any generating family of faces; the family is
    /// reduced to its inclusion-maximal members. An empty family yields the
    /// void complex.
    pub fn new(
        n_per_color: ColorVector,
        faces: impl IntoIterator<Item = Face>,
    ) -> Result<Self, ComplexError> {
        let mut block_starts = Vec::with_capacity(n_per_color.len() + 1);
        let mut acc = 0;
        block_starts.push(0);
        for ni in n_per_color.iter() {
            acc += ni;
            block_starts.push(acc);
        }
        let n = acc;

        let mut candidates: Vec<Face> = faces.into_iter().collect();
        for f in &candidates {
            if let Some(v) = f.max_vertex() {
                if v >= n {
                    return Err(ComplexError::VertexOutOfRange { vertex: v, n });
                }
            }
        }
        // Antichain reduction: keep a face only if it is not contained in
        // another (ties collapse to one copy).
        candidates.sort_by_key(|f| std::cmp::Reverse(f.len()));
        let mut maximal: Vec<Face> = Vec::new();
        for f in candidates {
            if !maximal.iter().any(|m| f.is_subset_of(m)) {
                maximal.push(f);
            }
        }
        maximal.sort_by(|a, b| a.cmp_vertex_lex(b));

        Ok(ColoredComplex {
            n_per_color,
            block_starts,
            maximal_faces: maximal,
        })
    }

    /// The full simplex on the given blocks (every subset is a face).
    pub fn full_simplex(n_per_color: ColorVector) -> Self {
        let n = n_per_color.sum();
        ColoredComplex::new(n_per_color, [Face::interval(0, n)])
            .expect("full simplex is always valid")
    }

    /// The void complex (no faces, not even the empty one).
    pub fn void(n_per_color: ColorVector) -> Self {
        ColoredComplex::new(n_per_color, []).expect("void complex is always valid")
    }

    pub fn n_per_color(&self) -> &ColorVector {
        &self.n_per_color
    }

    /// Total vertex count.
    pub fn n(&self) -> usize {
        *self.block_starts.last().unwrap()
    }

    /// Number of colors.
    pub fn c(&self) -> usize {
        self.n_per_color.len()
    }

    pub fn block_start(&self, i: usize) -> usize {
        self.block_starts[i]
    }

    pub fn block_end(&self, i: usize) -> usize {
        self.block_starts[i + 1]
    }

    /// All vertices of color `i` as a set.
    pub fn block_mask(&self, i: usize) -> Face {
        Face::interval(self.block_start(i), self.block_end(i))
    }

    /// The color (0-based block index) of a vertex.
    pub fn color_of(&self, v: VertexId) -> usize {
        debug_assert!(v < self.n());
        // block_starts is sorted; find the last start <= v.
        match self.block_starts.binary_search(&v) {
            Ok(mut i) => {
                // Skip over empty blocks sharing the same start.
                while self.block_starts[i + 1] == v {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        }
    }

    pub fn maximal_faces(&self) -> &[Face] {
        &self.maximal_faces
    }

    /// True iff the complex has no faces at all (not even `∅`).
    pub fn is_void(&self) -> bool {
        self.maximal_faces.is_empty()
    }

    /// Face membership: `A` is a face iff it lies under some maximal face.
    /// In particular the empty face is a face of every non-void complex.
    pub fn is_face(&self, a: &Face) -> bool {
        self.maximal_faces.iter().any(|m| a.is_subset_of(m))
    }

    /// Per-color vertex counts of a set.
    pub fn signature(&self, a: &Face) -> ColorVector {
        ColorVector(
            (0..self.c())
                .map(|i| a.count_in_range(self.block_start(i), self.block_end(i)))
                .collect(),
        )
    }

    /// Dimension of the subcomplex induced on color block `i`: the largest
    /// `|M ∩ N_i| - 1` over maximal faces `M`, or -1 if there is none.
    pub fn dim_in_color(&self, i: usize) -> isize {
        self.maximal_faces
            .iter()
            .map(|m| m.count_in_range(self.block_start(i), self.block_end(i)) as isize - 1)
            .max()
            .unwrap_or(-1)
    }

    /// Dimension of the complex (-1 for `{∅}` and for the void complex).
    pub fn dim(&self) -> isize {
        self.maximal_faces.iter().map(|m| m.dim()).max().unwrap_or(-1)
    }

    /// Number of `k`-colorful faces: faces with exactly `k_i` vertices of
    /// each color `i`.
    pub fn colorful_f(&self, k: &ColorVector) -> u64 {
        assert_eq!(k.len(), self.c(), "signature length must equal color count");
        let mut count = 0;
        for s in colorful_subsets(&self.n_per_color, k) {
            if self.is_face(&s) {
                count += 1;
            }
        }
        count
    }

    /// The `k`-colorful faces themselves.
    pub fn colorful_faces(&self, k: &ColorVector) -> Vec<Face> {
        assert_eq!(k.len(), self.c(), "signature length must equal color count");
        colorful_subsets(&self.n_per_color, k)
            .filter(|s| self.is_face(s))
            .collect()
    }

    /// The subcomplex induced on `u`, with vertices renumbered to
    /// `[0, |u|)` (blocks shrink but keep their order). Returns the complex
    /// together with the map from new vertex ids to original ones.
    pub fn induced_with_map(&self, u: &Face) -> (ColoredComplex, Vec<VertexId>) {
        let new_to_old = u.vertices();
        let mut old_to_new = vec![usize::MAX; self.n()];
        for (new, &old) in new_to_old.iter().enumerate() {
            old_to_new[old] = new;
        }
        let n_per_color = ColorVector(
            (0..self.c())
                .map(|i| u.count_in_range(self.block_start(i), self.block_end(i)))
                .collect(),
        );
        let faces = self
            .maximal_faces
            .iter()
            .map(|m| m.intersection(u).map_vertices(|v| old_to_new[v]));
        let cx = ColoredComplex::new(n_per_color, faces)
            .expect("induced vertices are in range by construction");
        (cx, new_to_old)
    }

    /// [`ColoredComplex::induced_with_map`] without the vertex map.
    pub fn induced(&self, u: &Face) -> ColoredComplex {
        self.induced_with_map(u).0
    }

    /// Every face of the complex, up to `cap` of them (`None` if the cap is
    /// exceeded). Intended for small complexes and cross-checks.
    pub fn enumerate_faces(&self, cap: usize) -> Option<Vec<Face>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for m in &self.maximal_faces {
            let vs = m.vertices();
            // All subsets of m via bit patterns over its vertex list.
            if vs.len() >= usize::BITS as usize {
                return None;
            }
            for pattern in 0..(1usize << vs.len()) {
                let f = Face::from_vertices(
                    vs.iter()
                        .enumerate()
                        .filter(|(j, _)| pattern >> j & 1 == 1)
                        .map(|(_, &v)| v),
                );
                if seen.insert(f.clone()) {
                    if out.len() >= cap {
                        return None;
                    }
                    out.push(f);
                }
            }
        }
        Some(out)
    }
}

/// Lazily enumerate all `k`-colorful subsets of the blocks described by `n`
/// (for each color `i`, exactly `k_i` vertices from block `i`), in
/// lexicographic order of the underlying vertex lists. Empty when some
/// `k_i > n_i`.
pub fn colorful_subsets<'a>(
    n: &'a ColorVector,
    k: &'a ColorVector,
) -> impl Iterator<Item = Face> + 'a {
    assert_eq!(n.len(), k.len(), "signature length must equal color count");
    let mut block_choices: Vec<Vec<Face>> = Vec::with_capacity(n.len());
    let mut start = 0;
    let mut any_empty = false;
    for i in 0..n.len() {
        let (ni, ki) = (n[i], k[i]);
        let choices: Vec<Face> = subsets_of_range(start, start + ni, ki);
        if choices.is_empty() {
            any_empty = true;
        }
        block_choices.push(choices);
        start += ni;
    }
    if any_empty {
        block_choices.clear();
    }
    let empty = block_choices.is_empty();
    let mut idx = vec![0usize; block_choices.len()];
    let mut done = empty;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut face = Face::empty();
        for (i, choices) in block_choices.iter().enumerate() {
            face = face.union(&choices[idx[i]]);
        }
        // Advance odometer, last color fastest.
        let mut i = block_choices.len();
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < block_choices[i].len() {
                break;
            }
            idx[i] = 0;
        }
        Some(face)
    })
}

/// All `k`-element subsets of `[lo, hi)` in lexicographic order.
pub fn subsets_of_range(lo: usize, hi: usize, k: usize) -> Vec<Face> {
    let n = hi.saturating_sub(lo);
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut comb: Vec<usize> = (0..k).collect();
    loop {
        out.push(Face::from_vertices(comb.iter().map(|&j| lo + j)));
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if comb[i] + 1 <= n - (k - i) {
                comb[i] += 1;
                for j in i + 1..k {
                    comb[j] = comb[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All `k`-element subsets of an explicit vertex list, lexicographic in list
/// positions.
pub fn subsets_of_list(vertices: &[VertexId], k: usize) -> Vec<Face> {
    subsets_of_range(0, vertices.len(), k)
        .into_iter()
        .map(|f| f.map_vertices(|j| vertices[j]))
        .collect()
}

// -- JSON interchange ---------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RawComplex {
    n_per_color: Vec<usize>,
    maximal_faces: Vec<Vec<usize>>,
}

impl Serialize for ColoredComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawComplex {
            n_per_color: self.n_per_color.0.clone(),
            maximal_faces: self.maximal_faces.iter().map(|f| f.vertices()).collect(),
        };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ColoredComplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawComplex::deserialize(deserializer)?;
        ColoredComplex::new(
            ColorVector(raw.n_per_color),
            raw.maximal_faces.into_iter().map(Face::from_vertices),
        )
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(n: &[usize], faces: &[&[usize]]) -> ColoredComplex {
        ColoredComplex::new(
            ColorVector(n.to_vec()),
            faces.iter().map(|f| Face::from_vertices(f.iter().copied())),
        )
        .unwrap()
    }

    #[test]
    fn face_basic_ops() {
        let f = Face::from_vertices([5, 0, 130]);
        assert_eq!(f.len(), 3);
        assert!(f.contains(130));
        assert!(!f.contains(64));
        assert_eq!(f.vertices(), vec![0, 5, 130]);
        assert_eq!(f.dim(), 2);
        assert_eq!(Face::empty().dim(), -1);
        assert_eq!(f.count_in_range(0, 6), 2);
        assert_eq!(f.count_in_range(6, 131), 1);
        assert_eq!(f.min_vertex(), Some(0));
        assert_eq!(f.max_vertex(), Some(130));
    }

    #[test]
    fn face_set_algebra() {
        let a = Face::from_vertices([0, 1, 70]);
        let b = Face::from_vertices([1, 70]);
        assert!(b.is_subset_of(&a));
        assert!(!a.is_subset_of(&b));
        assert_eq!(a.difference(&b), Face::singleton(0));
        assert_eq!(a.intersection(&b), b);
        assert_eq!(b.union(&Face::singleton(0)).vertices(), vec![0, 1, 70]);
        // Removal past the top word keeps the representation canonical.
        let c = a.clone().without(70);
        assert_eq!(c, Face::from_vertices([0, 1]));
        assert_eq!(c.union(&Face::empty()), c);
    }

    #[test]
    fn color_of_blocks() {
        let k = cx(&[2, 3], &[&[0, 1, 2, 3, 4]]);
        assert_eq!(k.color_of(0), 0);
        assert_eq!(k.color_of(1), 0);
        assert_eq!(k.color_of(2), 1);
        assert_eq!(k.color_of(4), 1);
    }

    #[test]
    fn is_face_examples() {
        let simplex = cx(&[3], &[&[0, 1, 2]]);
        assert!(simplex.is_face(&Face::from_vertices([0, 2])));
        assert!(simplex.is_face(&Face::empty()));

        let path = cx(&[3], &[&[0, 1], &[1, 2]]);
        assert!(!path.is_face(&Face::from_vertices([0, 2])));
        assert!(path.is_face(&Face::empty()));

        let void = ColoredComplex::void(ColorVector(vec![2]));
        assert!(!void.is_face(&Face::empty()));
        assert!(void.is_void());
    }

    #[test]
    fn antichain_reduction_and_canonical_order() {
        let k = cx(&[3], &[&[1], &[0, 1], &[1, 2], &[1]]);
        let max: Vec<Vec<usize>> = k.maximal_faces().iter().map(|f| f.vertices()).collect();
        assert_eq!(max, vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn vertex_out_of_range_rejected() {
        let err = ColoredComplex::new(ColorVector(vec![2]), [Face::singleton(2)]).unwrap_err();
        assert_eq!(err, ComplexError::VertexOutOfRange { vertex: 2, n: 2 });
    }

    #[test]
    fn induced_subcomplexes() {
        let k = cx(&[3], &[&[0, 1], &[1, 2]]);
        let (ind, map) = k.induced_with_map(&Face::from_vertices([0, 1]));
        assert_eq!(map, vec![0, 1]);
        assert_eq!(ind.maximal_faces(), &[Face::from_vertices([0, 1])]);

        // U = ∅ on a non-void complex leaves exactly the empty face.
        let only_empty = k.induced(&Face::empty());
        assert!(!only_empty.is_void());
        assert_eq!(only_empty.maximal_faces(), &[Face::empty()]);
        assert_eq!(only_empty.dim(), -1);

        // U = all vertices is the identity.
        assert_eq!(k.induced(&Face::interval(0, 3)), k);

        // Blocks shrink: color structure restricted to U.
        let k2 = cx(&[2, 2], &[&[0, 2], &[1, 3]]);
        let ind2 = k2.induced(&Face::from_vertices([1, 2, 3]));
        assert_eq!(ind2.n_per_color(), &ColorVector(vec![1, 2]));
        assert_eq!(
            ind2.maximal_faces(),
            &[Face::from_vertices([0, 2]), Face::from_vertices([1])]
        );
    }

    #[test]
    fn induced_composes_through_the_map() {
        let k = cx(&[2, 2], &[&[0, 2, 3], &[1, 2]]);
        let u = Face::from_vertices([0, 2, 3]);
        let (ind_u, map_u) = k.induced_with_map(&u);
        let w_new = Face::from_vertices([0, 1]);
        let w_old = w_new.map_vertices(|v| map_u[v]);
        assert_eq!(
            ind_u.induced(&w_new),
            k.induced(&u.intersection(&w_old))
        );
    }

    #[test]
    fn colorful_f_examples() {
        // All four colorful pairs of n=(2,2).
        let complete = cx(&[2, 2], &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]]);
        assert_eq!(complete.colorful_f(&ColorVector(vec![1, 1])), 4);

        let void = ColoredComplex::void(ColorVector(vec![2, 2]));
        assert_eq!(void.colorful_f(&ColorVector(vec![1, 1])), 0);

        // Three of the four pairs present; count the faces by definition.
        let three = cx(&[2, 2], &[&[0, 2], &[0, 3], &[1, 2]]);
        let mut by_definition = 0;
        for a in 0..2 {
            for b in 2..4 {
                if three.is_face(&Face::from_vertices([a, b])) {
                    by_definition += 1;
                }
            }
        }
        assert_eq!(by_definition, 3);
        assert_eq!(three.colorful_f(&ColorVector(vec![1, 1])), 3);

        // k = 0 counts exactly the empty face.
        assert_eq!(three.colorful_f(&ColorVector(vec![0, 0])), 1);
        assert_eq!(void.colorful_f(&ColorVector(vec![0, 0])), 0);
    }

    #[test]
    fn signature_splits_by_block() {
        let k = cx(&[2, 3], &[&[0, 1, 2, 3, 4]]);
        assert_eq!(
            k.signature(&Face::from_vertices([0, 3, 4])),
            ColorVector(vec![1, 2])
        );
    }

    #[test]
    fn dim_in_color_examples() {
        let simplex = ColoredComplex::full_simplex(ColorVector(vec![3]));
        assert_eq!(simplex.dim_in_color(0), 2);

        let k = cx(&[2, 2], &[&[0, 2], &[1, 3]]);
        assert_eq!(k.dim_in_color(0), 0);
        assert_eq!(k.dim_in_color(1), 0);

        let void = ColoredComplex::void(ColorVector(vec![2]));
        assert_eq!(void.dim_in_color(0), -1);
        assert_eq!(void.dim(), -1);
    }

    #[test]
    fn colorful_subsets_order_and_count() {
        let n = ColorVector(vec![3, 2]);
        let k = ColorVector(vec![2, 1]);
        let subsets: Vec<Vec<usize>> = colorful_subsets(&n, &k).map(|f| f.vertices()).collect();
        assert_eq!(subsets.len(), 6); // C(3,2) * C(2,1)
        assert_eq!(subsets[0], vec![0, 1, 3]);
        assert_eq!(subsets[1], vec![0, 1, 4]);
        assert_eq!(subsets[5], vec![1, 2, 4]);

        // k_i > n_i yields nothing.
        let none: Vec<_> = colorful_subsets(&n, &ColorVector(vec![4, 0])).collect();
        assert!(none.is_empty());
    }

    #[test]
    fn enumerate_faces_counts_match_signature_sums() {
        let k = cx(&[2, 2], &[&[0, 2, 3], &[1, 2]]);
        let faces = k.enumerate_faces(1 << 12).unwrap();
        let mut total = 0u64;
        for k1 in 0..=2 {
            for k2 in 0..=2 {
                total += k.colorful_f(&ColorVector(vec![k1, k2]));
            }
        }
        assert_eq!(faces.len() as u64, total);
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let k = cx(&[2, 2], &[&[1, 3], &[0, 2, 3]]);
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(
            s,
            r#"{"n_per_color":[2,2],"maximal_faces":[[0,2,3],[1,3]]}"#
        );
        let back: ColoredComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
        // Non-canonical input normalizes on load.
        let messy: ColoredComplex = serde_json::from_str(
            r#"{"n_per_color":[2,2],"maximal_faces":[[3,1],[2,0,3],[3]]}"#,
        )
        .unwrap();
        assert_eq!(serde_json::to_string(&messy).unwrap(), s);
    }
}
