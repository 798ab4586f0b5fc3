//! Exterior algebra, compound matrices, and the intersection certificate.
//!
//! The exterior algebra over `ℝ^N` is represented sparsely: a multivector
//! is a map from vertex subsets to coefficients. Two products matter here:
//! the wedge `e_S ∧ e_T = ±e_{S∪T}` and its adjoint, the left interior
//! product `g ⌟ f` characterized by `⟨u, g⌟f⟩ = ⟨u∧g, f⟩`.
//!
//! The certificate machinery re-proves the colorful face-count bound on a
//! concrete complex: with a generic block-diagonal orthogonal basis
//! `(g_j)`, the subspace `W_k` spanned by the `k`-colorful faces and the
//! constraint kernel `A_k = {m : g_T ⌟ m = 0 for all small reference
//! subsets T}` must intersect trivially whenever the complex is
//! `d`-collapsible, forcing `f_k ≤ p_k`. Both dimensions are computed as
//! explicit ranks — exactly over the rationals, or in floating point with
//! singular-value thresholds and a reported spectral gap.
//!
//! Exact orthogonal blocks come from the Cayley transform of a random
//! rational skew-symmetric matrix, so orthogonality holds as an identity,
//! not within a tolerance; genericity (every square submatrix nonsingular)
//! is certified by determinant sweeps and re-sampling.

use std::collections::{BTreeMap, HashMap};

use num::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bounds::{self, BoundParams, BoundsError};
use crate::complex::{colorful_subsets, subsets_of_list, subsets_of_range, ColorVector, ColoredComplex, Face};
use crate::linalg::{rank_from_singular_values, singular_values, Mat, RowSpace, Scalar};
use crate::rational::Rational;

/// Largest number of `k`-colorful subsets the dense certificate will
/// handle; beyond this the linear algebra is refused, not approximated.
pub const COLORFUL_CAP: u64 = 5000;

#[derive(Debug, Error, PartialEq)]
pub enum CertificateError {
    #[error("k must have one entry per color: got {got}, expected {expected}")]
    KLengthMismatch { got: usize, expected: usize },
    #[error("{total} k-colorful subsets exceed the dense-certificate cap {cap}")]
    TooLarge { total: u64, cap: u64 },
    #[error("no generic basis found after {attempts} attempts")]
    BasisRetries { attempts: u32 },
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// Sparse multivector: subsets of a ground set mapped to coefficients,
/// zero coefficients never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiVector<T: Scalar> {
    terms: BTreeMap<Face, T>,
}

/// `(−1)^{#\{(a,b) ∈ A×B : a > b\}}` as a scalar — the reordering sign
/// between two disjoint index sets.
pub fn shuffle_sign<T: Scalar>(a: &Face, b: &Face) -> T {
    let mut inversions = 0usize;
    for x in b.iter() {
        inversions += a.count_in_range(x + 1, usize::MAX);
    }
    if inversions % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

impl<T: Scalar> MultiVector<T> {
    pub fn zero() -> Self {
        MultiVector {
            terms: BTreeMap::new(),
        }
    }

    /// The basis vector `e_S`.
    pub fn basis(s: Face) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(s, T::one());
        MultiVector { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Face, T)>) -> Self {
        let mut mv = MultiVector::zero();
        for (f, c) in terms {
            mv.add_term(f, c);
        }
        mv
    }

    pub fn add_term(&mut self, f: Face, c: T) {
        if c == T::zero() {
            return;
        }
        match self.terms.entry(f) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum == T::zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, f: &Face) -> T {
        self.terms.get(f).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Face, &T)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        if *s == T::zero() {
            return MultiVector::zero();
        }
        MultiVector {
            terms: self
                .terms
                .iter()
                .map(|(f, c)| (f.clone(), c.clone() * s.clone()))
                .collect(),
        }
    }

    /// Exterior product, the bilinear extension of
    /// `e_S ∧ e_T = shuffle_sign(S,T) · e_{S∪T}` (zero unless disjoint).
    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = MultiVector::zero();
        for (s, cs) in &self.terms {
            for (t, ct) in &other.terms {
                if !s.is_disjoint(t) {
                    continue;
                }
                let sign: T = shuffle_sign(s, t);
                out.add_term(s.union(t), cs.clone() * ct.clone() * sign);
            }
        }
        out
    }

    /// Left interior product `self ⌟ f`: the adjoint of wedging by `self`,
    /// so `⟨u, g⌟f⟩ = ⟨u ∧ g, f⟩` for every `u`. Termwise,
    /// `e_T ⌟ e_S = shuffle_sign(S∖T, T) · e_{S∖T}` when `T ⊆ S`, else zero.
    pub fn interior(&self, f: &Self) -> Self {
        let mut out = MultiVector::zero();
        for (t, ct) in &self.terms {
            for (s, cs) in &f.terms {
                if !t.is_subset_of(s) {
                    continue;
                }
                let rest = s.difference(t);
                let sign: T = shuffle_sign(&rest, t);
                out.add_term(rest, ct.clone() * cs.clone() * sign);
            }
        }
        out
    }

    /// Standard inner product: basis vectors `e_S` are orthonormal.
    pub fn inner(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for (f, c) in &self.terms {
            if let Some(o) = other.terms.get(f) {
                acc = acc + c.clone() * o.clone();
            }
        }
        acc
    }
}

/// The `k`-th compound: all `k×k` minors of `a`, rows and columns indexed
/// by `k`-subsets in lexicographic order.
pub fn compound<T: Scalar>(a: &Mat<T>, k: usize) -> Mat<T> {
    let row_sets = subsets_of_range(0, a.rows(), k);
    let col_sets = subsets_of_range(0, a.cols(), k);
    let mut out = Mat::zeros(row_sets.len(), col_sets.len());
    for (i, rs) in row_sets.iter().enumerate() {
        let rows = rs.vertices();
        for (j, cs) in col_sets.iter().enumerate() {
            let cols = cs.vertices();
            out[(i, j)] = a.submatrix(&rows, &cols).det();
        }
    }
    out
}

/// How a basis's genericity was certified.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisGenericity {
    /// True when every square submatrix of every block was checked;
    /// otherwise a seeded sample of submatrices was checked per block.
    pub exhaustive: bool,
    pub minors_checked: u64,
    pub resamples: u32,
}

/// Block-diagonal basis change: one orthogonal matrix per color block
/// (columns are the new basis vectors), plus its genericity certificate.
#[derive(Clone, Debug)]
pub struct BlockBasis<T: Scalar> {
    pub n_per_color: ColorVector,
    pub blocks: Vec<Mat<T>>,
    pub genericity: BasisGenericity,
}

impl<T: Scalar> BlockBasis<T> {
    fn block_start(&self, i: usize) -> usize {
        self.n_per_color.iter().take(i).sum()
    }

    /// SHA-256 of a canonical serialization of the blocks, for pinning a
    /// certificate run to its basis.
    pub fn hash(&self, encode: impl Fn(&T) -> Vec<u8>) -> String {
        let mut h = Sha256::new();
        for (i, b) in self.blocks.iter().enumerate() {
            h.update((i as u64).to_le_bytes());
            h.update((b.rows() as u64).to_le_bytes());
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    h.update(encode(&b[(r, c)]));
                }
            }
        }
        let digest = h.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// `det A_{rows|cols}` for the block-diagonal matrix: the product of the
/// per-block minors, zero whenever `rows` and `cols` take different counts
/// from some block.
pub fn block_minor<T: Scalar>(basis: &BlockBasis<T>, rows: &Face, cols: &Face) -> T {
    let mut acc = T::one();
    for (i, n_i) in basis.n_per_color.iter().enumerate() {
        let start = basis.block_start(i);
        let r_local: Vec<usize> = rows
            .vertices()
            .into_iter()
            .filter(|&v| v >= start && v < start + n_i)
            .map(|v| v - start)
            .collect();
        let c_local: Vec<usize> = cols
            .vertices()
            .into_iter()
            .filter(|&v| v >= start && v < start + n_i)
            .map(|v| v - start)
            .collect();
        if r_local.len() != c_local.len() {
            return T::zero();
        }
        if r_local.is_empty() {
            continue;
        }
        let d = basis.blocks[i].submatrix(&r_local, &c_local).det();
        if d == T::zero() {
            return T::zero();
        }
        acc = acc * d;
    }
    acc
}

/// Expand `g_S = ∧_{j∈S} g_j` in the standard basis:
/// `g_S = Σ_T det A_{T|S} · e_T`, where only `T` with the same per-block
/// counts as `S` contribute (block-diagonality).
pub fn transition_g<T: Scalar>(basis: &BlockBasis<T>, s: &Face) -> MultiVector<T> {
    // Per-block local column sets of S.
    let c = basis.n_per_color.len();
    let mut out = MultiVector::zero();
    // Recursive cartesian product over per-block row choices.
    fn recurse<T: Scalar>(
        basis: &BlockBasis<T>,
        s: &Face,
        i: usize,
        c: usize,
        t_acc: Face,
        coef: T,
        out: &mut MultiVector<T>,
    ) {
        if coef == T::zero() {
            return;
        }
        if i == c {
            out.add_term(t_acc, coef);
            return;
        }
        let n_i = basis.n_per_color[i];
        let start = basis.block_start(i);
        let s_local: Vec<usize> = s
            .vertices()
            .into_iter()
            .filter(|&v| v >= start && v < start + n_i)
            .map(|v| v - start)
            .collect();
        if s_local.is_empty() {
            recurse(basis, s, i + 1, c, t_acc, coef, out);
            return;
        }
        for t_local in subsets_of_range(0, n_i, s_local.len()) {
            let rows = t_local.vertices();
            let minor = basis.blocks[i].submatrix(&rows, &s_local).det();
            if minor == T::zero() {
                continue;
            }
            let mut t_next = t_acc.clone();
            for v in rows {
                t_next.insert(start + v);
            }
            recurse(basis, s, i + 1, c, t_next, coef.clone() * minor, out);
        }
    }
    recurse(basis, s, 0, c, Face::empty(), T::one(), &mut out);
    out
}

const BASIS_RETRIES: u32 = 64;
const EXHAUSTIVE_MINOR_LIMIT: usize = 6;
const SAMPLED_MINORS_PER_BLOCK: u64 = 200;
const FLOAT_MINOR_TOLERANCE: f64 = 1e-12;

fn certify_block_minors<T: Scalar>(
    block: &Mat<T>,
    rng: &mut ChaCha8Rng,
    is_nonzero: impl Fn(&T) -> bool,
) -> Option<(bool, u64)> {
    let n = block.rows();
    let mut checked = 0u64;
    if n <= EXHAUSTIVE_MINOR_LIMIT {
        for s in 1..=n {
            for rs in subsets_of_range(0, n, s) {
                for cs in subsets_of_range(0, n, s) {
                    checked += 1;
                    let det = block.submatrix(&rs.vertices(), &cs.vertices()).det();
                    if !is_nonzero(&det) {
                        return None;
                    }
                }
            }
        }
        Some((true, checked))
    } else {
        for _ in 0..SAMPLED_MINORS_PER_BLOCK {
            let s = rng.gen_range(1..=n);
            let rows = sample_subset(rng, n, s);
            let cols = sample_subset(rng, n, s);
            checked += 1;
            let det = block.submatrix(&rows, &cols).det();
            if !is_nonzero(&det) {
                return None;
            }
        }
        Some((false, checked))
    }
}

fn sample_subset(rng: &mut ChaCha8Rng, n: usize, s: usize) -> Vec<usize> {
    // Floyd's algorithm keeps the draw cheap and unbiased.
    let mut chosen: Vec<usize> = Vec::with_capacity(s);
    for j in n - s..n {
        let t = rng.gen_range(0..=j);
        if chosen.contains(&t) {
            chosen.push(j);
        } else {
            chosen.push(t);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Exact rational orthogonal blocks via the Cayley transform
/// `Q = (I − S)(I + S)^{-1}` of a random skew-symmetric `S` (always
/// invertible; `QᵀQ = I` is an identity over ℚ). Every square submatrix of
/// every block is certified nonsingular, re-sampling on failure.
pub fn generic_block_basis_exact(
    n: &ColorVector,
    seed: u64,
) -> Result<BlockBasis<Rational>, CertificateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::with_capacity(n.len());
    let mut exhaustive = true;
    let mut minors_checked = 0u64;
    let mut resamples = 0u32;
    for n_i in n.iter() {
        let mut found = false;
        for _ in 0..BASIS_RETRIES {
            let mut skew: Mat<Rational> = Mat::zeros(n_i, n_i);
            for p in 0..n_i {
                for q_idx in p + 1..n_i {
                    let num = rng.gen_range(-9i64..=9);
                    let den = rng.gen_range(1i64..=9);
                    let v = Rational::new(num.into(), den.into());
                    skew[(p, q_idx)] = v.clone();
                    skew[(q_idx, p)] = -v;
                }
            }
            let mut i_minus: Mat<Rational> = Mat::identity(n_i);
            let mut i_plus: Mat<Rational> = Mat::identity(n_i);
            for p in 0..n_i {
                for q_idx in 0..n_i {
                    let v = skew[(p, q_idx)].clone();
                    i_minus[(p, q_idx)] -= v.clone();
                    i_plus[(p, q_idx)] += v;
                }
            }
            let inv = i_plus
                .solve(&Mat::identity(n_i))
                .expect("I + skew is always invertible");
            let q = i_minus.mul(&inv);
            match certify_block_minors(&q, &mut rng, |d| !d.is_zero()) {
                Some((exh, count)) => {
                    exhaustive &= exh;
                    minors_checked += count;
                    blocks.push(q);
                    found = true;
                    break;
                }
                None => resamples += 1,
            }
        }
        if !found {
            return Err(CertificateError::BasisRetries {
                attempts: BASIS_RETRIES,
            });
        }
    }
    Ok(BlockBasis {
        n_per_color: n.clone(),
        blocks,
        genericity: BasisGenericity {
            exhaustive,
            minors_checked,
            resamples,
        },
    })
}

/// Float orthonormal blocks: Gram–Schmidt on seeded uniform samples, with
/// the same submatrix-nonsingularity certificate under a tolerance.
pub fn generic_block_basis_float(
    n: &ColorVector,
    seed: u64,
) -> Result<BlockBasis<f64>, CertificateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::with_capacity(n.len());
    let mut exhaustive = true;
    let mut minors_checked = 0u64;
    let mut resamples = 0u32;
    for n_i in n.iter() {
        let mut found = false;
        'retry: for _ in 0..BASIS_RETRIES {
            let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n_i);
            for _ in 0..n_i {
                let mut v: Vec<f64> = (0..n_i).map(|_| rng.gen_range(-1.0..1.0)).collect();
                for q in &cols {
                    let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= dot * qi;
                    }
                }
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm < 1e-9 {
                    resamples += 1;
                    continue 'retry;
                }
                for vi in v.iter_mut() {
                    *vi /= norm;
                }
                cols.push(v);
            }
            let q = Mat::from_fn(n_i, n_i, |r, c| cols[c][r]);
            match certify_block_minors(&q, &mut rng, |d| d.abs() > FLOAT_MINOR_TOLERANCE) {
                Some((exh, count)) => {
                    exhaustive &= exh;
                    minors_checked += count;
                    blocks.push(q);
                    found = true;
                    break;
                }
                None => resamples += 1,
            }
        }
        if !found {
            return Err(CertificateError::BasisRetries {
                attempts: BASIS_RETRIES,
            });
        }
    }
    Ok(BlockBasis {
        n_per_color: n.clone(),
        blocks,
        genericity: BasisGenericity {
            exhaustive,
            minors_checked,
            resamples,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Float,
}

/// Which case of the bound's proof applies at this `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateBranch {
    /// `|k| ≤ d`: every colorful subset is admissible, nothing to prove.
    TrivialSmallK,
    /// `k_i` exceeds some block dimension: no `k`-colorful face exists.
    TrivialLargeK,
    /// The interesting range: ranks of the constraint system decide.
    Algebraic,
}

/// Outcome of one certificate run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateReport {
    pub mode: ArithmeticMode,
    pub branch: CertificateBranch,
    pub n_per_color: ColorVector,
    pub d: usize,
    pub k: ColorVector,
    /// Per-color reference sizes `r_i = dim K[N_i] + 1`.
    pub r: ColorVector,
    /// `|binom(N,k)|`, the number of `k`-colorful subsets (saturating).
    pub colorful_total: u64,
    pub f_k: u64,
    pub p_k: String,
    /// `f_k ≤ p_k` — the bound under test.
    pub face_bound_holds: bool,
    /// Rank of all constraint columns (algebraic branch).
    pub rank_all: Option<usize>,
    /// Rank of the face columns only.
    pub rank_faces: Option<usize>,
    /// `dim A_k = colorful_total − rank_all`.
    pub dim_kernel: Option<usize>,
    /// The claimed lower bound `colorful_total − p_k`.
    pub dim_kernel_lower_bound: Option<u64>,
    /// `dim(A_k ∩ W_k) = f_k − rank_faces`.
    pub dim_intersection: Option<usize>,
    /// `dim A_k ≥ colorful_total − p_k`?
    pub kernel_bound_holds: Option<bool>,
    /// `dim(A_k ∩ W_k) = 0`? (Guaranteed for `d`-collapsible complexes.)
    pub intersection_trivial: Option<bool>,
    /// Float mode: smallest singular-value gap behind a rank decision;
    /// `None` in exact mode or when no singular value was rejected.
    pub spectral_gap: Option<f64>,
    pub basis_hash: Option<String>,
    pub basis_genericity: Option<BasisGenericity>,
}

/// Run the intersection certificate for `cx` at colorful size `k` and
/// slack `d`. The reference sizes are taken from the complex itself
/// (`r_i = dim K[N_i] + 1`) with the canonical reference set.
pub fn intersection_certificate(
    cx: &ColoredComplex,
    d: usize,
    k: &ColorVector,
    mode: ArithmeticMode,
    seed: u64,
) -> Result<CertificateReport, CertificateError> {
    if k.len() != cx.c() {
        return Err(CertificateError::KLengthMismatch {
            got: k.len(),
            expected: cx.c(),
        });
    }
    let n = cx.n_per_color().clone();
    let r = ColorVector(
        (0..cx.c())
            .map(|i| (cx.dim_in_color(i) + 1) as usize)
            .collect(),
    );
    let colorful_total_big: num::BigUint = (0..cx.c())
        .map(|i| bounds::binomial(n[i], k[i] as isize))
        .product();
    let colorful_total = colorful_total_big.to_u64().unwrap_or(u64::MAX);
    let params = BoundParams::new(n.clone(), d, r.clone())?;
    let p_k_big = bounds::admissible_count(&params, k);

    let mut report = CertificateReport {
        mode,
        branch: CertificateBranch::Algebraic,
        n_per_color: n.clone(),
        d,
        k: k.clone(),
        r: r.clone(),
        colorful_total,
        f_k: 0,
        p_k: p_k_big.to_string(),
        face_bound_holds: true,
        rank_all: None,
        rank_faces: None,
        dim_kernel: None,
        dim_kernel_lower_bound: None,
        dim_intersection: None,
        kernel_bound_holds: None,
        intersection_trivial: None,
        spectral_gap: None,
        basis_hash: None,
        basis_genericity: None,
    };

    let oversize = (0..cx.c()).any(|i| k[i] > r[i]);
    if oversize {
        // No face can hold k_i vertices of color i: f_k = 0 by definition
        // of the per-color dimensions. Enumerate only when cheap.
        report.branch = CertificateBranch::TrivialLargeK;
        report.f_k = if colorful_total <= COLORFUL_CAP {
            cx.colorful_f(k)
        } else {
            0
        };
        report.face_bound_holds = num::BigUint::from(report.f_k) <= p_k_big;
        return Ok(report);
    }
    if k.sum() <= d {
        // Every colorful subset is admissible: p_k = |binom(N,k)|.
        report.branch = CertificateBranch::TrivialSmallK;
        debug_assert_eq!(p_k_big, colorful_total_big);
        if colorful_total <= COLORFUL_CAP {
            report.f_k = cx.colorful_f(k);
            report.face_bound_holds = num::BigUint::from(report.f_k) <= p_k_big;
        }
        return Ok(report);
    }

    if colorful_total_big > COLORFUL_CAP.into() {
        return Err(CertificateError::TooLarge {
            total: colorful_total,
            cap: COLORFUL_CAP,
        });
    }
    let p_k = p_k_big.to_u64().expect("p_k ≤ colorful cap");
    report.f_k = cx.colorful_f(k);
    report.face_bound_holds = report.f_k <= p_k;
    report.dim_kernel_lower_bound = Some(colorful_total - p_k);

    match mode {
        ArithmeticMode::Exact => {
            let basis = generic_block_basis_exact(&n, seed)?;
            report.basis_hash = Some(basis.hash(|q| {
                format!("{}/{}", q.numer(), q.denom()).into_bytes()
            }));
            report.basis_genericity = Some(basis.genericity.clone());
            let (face_cols, other_cols, rows) = assemble_columns(cx, d, k, &r, &basis);
            let mut space: RowSpace<Rational> = RowSpace::new(rows);
            for col in face_cols {
                space.insert(col);
            }
            let rank_faces = space.rank();
            for col in other_cols {
                space.insert(col);
            }
            let rank_all = space.rank();
            finish_report(&mut report, rank_faces, rank_all, p_k, None);
        }
        ArithmeticMode::Float => {
            let basis = generic_block_basis_float(&n, seed)?;
            report.basis_hash = Some(basis.hash(|x| x.to_bits().to_le_bytes().to_vec()));
            report.basis_genericity = Some(basis.genericity.clone());
            let (face_cols, other_cols, rows) = assemble_columns(cx, d, k, &r, &basis);
            let f_count = face_cols.len();
            let mut all_rows = face_cols;
            all_rows.extend(other_cols);
            let gaps_and_ranks = |data: &[Vec<f64>]| -> (usize, f64) {
                if data.is_empty() {
                    return (0, f64::INFINITY);
                }
                let m = Mat::from_fn(data.len(), rows, |i, j| data[i][j]);
                let sv = singular_values(&m);
                rank_from_singular_values(&sv, 1e-8)
            };
            let (rank_faces, gap_faces) = gaps_and_ranks(&all_rows[..f_count]);
            let (rank_all, gap_all) = gaps_and_ranks(&all_rows);
            finish_report(
                &mut report,
                rank_faces,
                rank_all,
                p_k,
                Some(gap_faces.min(gap_all)),
            );
        }
    }
    Ok(report)
}

fn finish_report(
    report: &mut CertificateReport,
    rank_faces: usize,
    rank_all: usize,
    p_k: u64,
    spectral_gap: Option<f64>,
) {
    let colorful_total = report.colorful_total as usize;
    report.rank_all = Some(rank_all);
    report.rank_faces = Some(rank_faces);
    report.dim_kernel = Some(colorful_total - rank_all);
    report.dim_intersection = Some(report.f_k as usize - rank_faces);
    report.kernel_bound_holds = Some(rank_all as u64 <= p_k);
    report.intersection_trivial = Some(report.f_k as usize == rank_faces);
    report.spectral_gap = spectral_gap.filter(|g| g.is_finite());
}

/// Build the constraint columns of the certificate. Every `k`-colorful `S`
/// yields one column over the row set `(T, L)` with `T ∈ binom(R, |k|−d)`
/// and `L ∈ binom(N, d)`: the entry is the coefficient of `e_L` in
/// `g_T ⌟ e_S`, namely `shuffle_sign(L, S∖L) · det A_{S∖L|T}` when
/// `L ⊆ S`, zero otherwise. Returns the face columns, the non-face
/// columns, and the shared column length.
fn assemble_columns<T: Scalar>(
    cx: &ColoredComplex,
    d: usize,
    k: &ColorVector,
    r: &ColorVector,
    basis: &BlockBasis<T>,
) -> (Vec<Vec<T>>, Vec<Vec<T>>, usize) {
    let reference: Vec<usize> = (0..cx.c())
        .flat_map(|i| {
            let start = cx.block_start(i);
            start..start + r[i]
        })
        .collect();
    let t_size = k.sum() - d;
    let t_subsets = subsets_of_list(&reference, t_size);
    let l_subsets = subsets_of_range(0, cx.n(), d);
    let l_index: HashMap<Face, usize> = l_subsets
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i))
        .collect();
    let row_count = t_subsets.len() * l_subsets.len();

    let mut minors: HashMap<(Face, Face), T> = HashMap::new();
    let mut face_cols = Vec::new();
    let mut other_cols = Vec::new();
    for s in colorful_subsets(cx.n_per_color(), k) {
        let mut col = vec![T::zero(); row_count];
        let s_vertices = s.vertices();
        for l in subsets_of_list(&s_vertices, d) {
            let l_idx = l_index[&l];
            let p = s.difference(&l);
            let sign: T = shuffle_sign(&l, &p);
            for (t_idx, t_face) in t_subsets.iter().enumerate() {
                let minor = minors
                    .entry((p.clone(), t_face.clone()))
                    .or_insert_with(|| block_minor(basis, &p, t_face))
                    .clone();
                if minor == T::zero() {
                    continue;
                }
                col[t_idx * l_subsets.len() + l_idx] = sign.clone() * minor;
            }
        }
        if cx.is_face(&s) {
            face_cols.push(col);
        } else {
            other_cols.push(col);
        }
    }
    (face_cols, other_cols, row_count)
}
