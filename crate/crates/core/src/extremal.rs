//! The near-extremal complex: whole-space copies plus generic hyperplanes.
//!
//! Each of the `c` color blocks has `m` vertices, of which the first
//! `r_i = ⌊β'_i · m⌋` stand for copies of all of `ℝ^d` and the remaining
//! `m - r_i` stand for hyperplanes in general position. Generic position
//! makes the nerve purely combinatorial: a subfamily intersects exactly when
//! it contains at most `d` hyperplanes. By construction the colorful face
//! counts of this nerve meet the admissible-set bound with equality, and its
//! colorful density converges (at rate `O(1/m)`) to the threshold
//! [`alpha_threshold`](crate::bounds::alpha_threshold) as `m` grows.
//!
//! The construction here is combinatorial; [`crate::geometry`] can realize
//! the same family with actual rational hyperplanes and recompute the nerve
//! geometrically as an independent check.

use num::{BigInt, BigRational, One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{self, BoundParams, BoundsError};
use crate::complex::{ColorVector, ColoredComplex, Face, VertexId};
use crate::rational::{format_rational, Rational};

#[derive(Debug, Error, PartialEq)]
pub enum ExtremalError {
    #[error("need at least one color, block size at least 1")]
    EmptyShape,
    #[error("beta' must have one entry per color: got {got}, expected {expected}")]
    BetaLengthMismatch { got: usize, expected: usize },
    #[error("beta' entries must lie in (0, 1]: offending value {0}")]
    BetaOutOfRange(String),
    #[error("block size {m} gives r_{i} = {r} < k_{i} = {k}; the target k is out of reach")]
    ReferenceTooSmall { i: usize, m: usize, r: usize, k: usize },
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// Parameters of the construction: `c` blocks of `m` vertices, slack `d`,
/// and per-color fractions `beta_prime` determining `r_i = ⌊β'_i m⌋`.
/// Fractions are exact rationals so the floor is computed without float
/// rounding hazards.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSpec {
    pub c: usize,
    pub d: usize,
    pub m: usize,
    #[serde(with = "crate::rational::serde_string_vec")]
    pub beta_prime: Vec<Rational>,
}

impl ExtremalSpec {
    pub fn new(c: usize, d: usize, m: usize, beta_prime: Vec<Rational>) -> Result<Self, ExtremalError> {
        if c == 0 || m == 0 {
            return Err(ExtremalError::EmptyShape);
        }
        if beta_prime.len() != c {
            return Err(ExtremalError::BetaLengthMismatch {
                got: beta_prime.len(),
                expected: c,
            });
        }
        for b in &beta_prime {
            if !(b.is_positive() && *b <= Rational::one()) {
                return Err(ExtremalError::BetaOutOfRange(format_rational(b)));
            }
        }
        Ok(ExtremalSpec { c, d, m, beta_prime })
    }

    /// `r_i = ⌊β'_i · m⌋`, computed with exact rational arithmetic.
    pub fn reference_sizes(&self) -> ColorVector {
        ColorVector(
            self.beta_prime
                .iter()
                .map(|b| {
                    let scaled = b * BigRational::from(BigInt::from(self.m));
                    scaled.floor().to_integer().to_usize().expect("r fits usize")
                })
                .collect(),
        )
    }

    pub fn bound_params(&self) -> BoundParams {
        BoundParams::new(
            ColorVector(vec![self.m; self.c]),
            self.d,
            self.reference_sizes(),
        )
        .expect("spec invariants imply valid parameters")
    }
}

/// The construction plus its vertex labeling: which vertices play the role
/// of whole-space copies and which play hyperplanes.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalComplex {
    pub complex: ColoredComplex,
    pub r: ColorVector,
    /// Whole-space vertices: the first `r_i` of each block.
    pub whole_space: Vec<VertexId>,
    /// Hyperplane vertices: the remaining `m - r_i` of each block.
    pub hyperplanes: Vec<VertexId>,
}

/// Build the nerve of the construction combinatorially: faces are exactly
/// the vertex sets containing at most `d` hyperplane vertices, so the
/// maximal faces are all whole-space vertices together with each
/// `min(d, #hyperplanes)`-subset of hyperplane vertices.
pub fn build_extremal(spec: &ExtremalSpec) -> Result<ExtremalComplex, ExtremalError> {
    let r = spec.reference_sizes();
    let n_per_color = ColorVector(vec![spec.m; spec.c]);
    let mut whole_space = Vec::new();
    let mut hyperplanes = Vec::new();
    for i in 0..spec.c {
        let start = i * spec.m;
        whole_space.extend(start..start + r[i]);
        hyperplanes.extend(start + r[i]..start + spec.m);
    }
    let base: Face = whole_space.iter().copied().collect();
    let take = spec.d.min(hyperplanes.len());
    let maximal = crate::complex::subsets_of_list(&hyperplanes, take)
        .into_iter()
        .map(|h| base.union(&h));
    let complex = ColoredComplex::new(n_per_color, maximal)
        .expect("constructed vertices are in range");
    Ok(ExtremalComplex {
        complex,
        r,
        whole_space,
        hyperplanes,
    })
}

/// How close the construction sits to the density threshold at `k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TightnessReport {
    pub m: usize,
    pub d: usize,
    pub k: ColorVector,
    pub r: ColorVector,
    /// Colorful face count `f_k`, by direct enumeration.
    pub f_k: u64,
    /// The admissible-set count with the same parameters (decimal string).
    pub p_k: String,
    /// `f_k = p_k` exactly — true by construction, still verified.
    pub tight: bool,
    /// Colorful density `f_k / Π C(m, k_i)`.
    pub density: f64,
    /// The limiting threshold `α_k(d, β')`.
    pub alpha_limit: f64,
    /// `|density − alpha_limit|`, which shrinks like `O(1/m)`.
    pub gap: f64,
    /// Per-color dimensions of the induced subcomplexes; each equals
    /// `r_i + d − 1` whenever the block has at least `d` hyperplanes,
    /// and `m − 1` otherwise.
    pub block_dims: Vec<isize>,
}

/// Evaluate tightness of the construction at a colorful size vector `k`.
/// Requires `k_i ≤ r_i` so that `k`-colorful faces can realize the bound.
pub fn check_tightness(spec: &ExtremalSpec, k: &ColorVector) -> Result<TightnessReport, ExtremalError> {
    let built = build_extremal(spec)?;
    let params = spec.bound_params();
    for i in 0..spec.c {
        if k[i] > built.r[i] {
            return Err(ExtremalError::ReferenceTooSmall {
                i,
                m: spec.m,
                r: built.r[i],
                k: k[i],
            });
        }
    }
    let f_k = built.complex.colorful_f(k);
    let p_k = bounds::admissible_count(&params, k);
    let density = bounds::admissible_density(&params, k);
    let beta_float: Vec<f64> = spec
        .beta_prime
        .iter()
        .map(crate::rational::rational_to_f64)
        .collect();
    let alpha_limit = bounds::alpha_threshold(
        k,
        spec.d,
        &bounds::BetaVector::new(beta_float).expect("validated beta"),
    );
    let block_dims = (0..spec.c)
        .map(|i| built.complex.dim_in_color(i))
        .collect();
    Ok(TightnessReport {
        m: spec.m,
        d: spec.d,
        k: k.clone(),
        r: built.r,
        f_k,
        p_k: p_k.to_string(),
        tight: num::BigUint::from(f_k) == p_k,
        density,
        alpha_limit,
        gap: (density - alpha_limit).abs(),
        block_dims,
    })
}

/// Find a collapse witness for the construction via the search engine.
/// Small instances only; the search budget guards the rest.
pub fn extremal_collapse_witness(
    spec: &ExtremalSpec,
    budget: u64,
) -> Result<crate::collapse::CollapseOutcome, ExtremalError> {
    let built = build_extremal(spec)?;
    Ok(crate::collapse::find_collapse(&built.complex, spec.d, budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn spec(c: usize, d: usize, m: usize, beta: &[&str]) -> ExtremalSpec {
        ExtremalSpec::new(
            c,
            d,
            m,
            beta.iter().map(|b| parse_rational(b).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn reference_sizes_use_exact_floors() {
        // 0.3 * 10 must floor to 3, not 2 via binary-float rounding.
        let s = spec(2, 1, 10, &["3/10", "0.3"]);
        assert_eq!(s.reference_sizes(), ColorVector(vec![3, 3]));
        let s = spec(1, 1, 4, &["1"]);
        assert_eq!(s.reference_sizes(), ColorVector(vec![4]));
    }

    #[test]
    fn four_by_four_reference_instance() {
        // d=1, c=2, m=4, r=(2,2): 12 colorful pairs out of 16.
        let s = spec(2, 1, 4, &["1/2", "1/2"]);
        let built = build_extremal(&s).unwrap();
        assert_eq!(built.whole_space, vec![0, 1, 4, 5]);
        assert_eq!(built.hyperplanes, vec![2, 3, 6, 7]);
        // Maximal faces: whole-space ∪ each single hyperplane.
        assert_eq!(built.complex.maximal_faces().len(), 4);
        let k = ColorVector(vec![1, 1]);
        assert_eq!(built.complex.colorful_f(&k), 12);

        let report = check_tightness(&s, &k).unwrap();
        assert!(report.tight);
        assert_eq!(report.f_k, 12);
        assert_eq!(report.p_k, "12");
        assert_eq!(report.block_dims, vec![2, 2]); // r_i + d − 1
    }

    #[test]
    fn degenerate_reference_sizes() {
        // r_i = m: no hyperplanes, the full simplex.
        let s = spec(2, 1, 3, &["1", "1"]);
        let built = build_extremal(&s).unwrap();
        assert_eq!(built.complex.maximal_faces(), &[Face::interval(0, 6)]);
        assert!(built.hyperplanes.is_empty());

        // r_i = 0 would need beta' = 0, which is rejected; the smallest
        // admissible fractions still give r = 0 for small m.
        let s = spec(1, 2, 3, &["1/4"]);
        let built = build_extremal(&s).unwrap();
        assert_eq!(built.r, ColorVector(vec![0]));
        // All vertices are hyperplanes: maximal faces are the d-subsets.
        assert_eq!(
            built.complex.maximal_faces(),
            &[
                Face::from_vertices([0, 1]),
                Face::from_vertices([0, 2]),
                Face::from_vertices([1, 2]),
            ]
        );
    }

    #[test]
    fn face_counts_match_the_closed_form_for_every_k() {
        for (c, d, m, beta) in [
            (2usize, 1usize, 4usize, vec!["1/2", "3/4"]),
            (3, 2, 3, vec!["1/3", "2/3", "1"]),
            (2, 2, 5, vec!["2/5", "4/5"]),
        ] {
            let s = spec(c, d, m, &beta);
            let built = build_extremal(&s).unwrap();
            let params = s.bound_params();
            let mut k = vec![0usize; c];
            'grid: loop {
                let kv = ColorVector(k.clone());
                let f = built.complex.colorful_f(&kv);
                let p = bounds::admissible_count(&params, &kv);
                assert_eq!(num::BigUint::from(f), p, "mismatch at k={kv} for m={m}");
                // Odometer over k ≤ (m,...,m).
                let mut i = 0;
                loop {
                    if i == c {
                        break 'grid;
                    }
                    k[i] += 1;
                    if k[i] <= m {
                        break;
                    }
                    k[i] = 0;
                    i += 1;
                }
            }
        }
    }

    #[test]
    fn block_dimension_formula() {
        // m − r_i ≥ d: dim = r_i + d − 1; otherwise the block is full.
        let s = spec(2, 2, 5, &["2/5", "4/5"]); // r = (2, 4)
        let built = build_extremal(&s).unwrap();
        assert_eq!(built.complex.dim_in_color(0), 3); // 2 + 2 − 1
        assert_eq!(built.complex.dim_in_color(1), 4); // m − r = 1 < d: full block
    }

    #[test]
    fn gap_shrinks_with_m() {
        // beta' slightly below 1/2 keeps the floor strict so the gap is
        // positive and visibly shrinking.
        let k = ColorVector(vec![1, 1]);
        let mut last = f64::INFINITY;
        for m in [20, 40, 80] {
            let s = spec(2, 1, m, &["49/100", "49/100"]);
            let report = check_tightness(&s, &k).unwrap();
            assert!(report.tight);
            assert!(report.gap < last, "gap must shrink: {} vs {last}", report.gap);
            assert!(report.gap <= 2.0 * k.sum() as f64 / m as f64);
            last = report.gap;
        }
    }

    #[test]
    fn small_instances_are_collapsible() {
        for (c, d, m, beta) in [
            (2usize, 1usize, 3usize, vec!["1/3", "1/3"]),
            (3, 2, 2, vec!["1/2", "1/2", "1/2"]),
            (2, 1, 3, vec!["1", "1"]),
        ] {
            let s = spec(c, d, m, &beta);
            let outcome = extremal_collapse_witness(&s, 1_000_000).unwrap();
            let witness = outcome.witness().expect("construction must collapse");
            witness.replay(&build_extremal(&s).unwrap().complex).unwrap();
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            ExtremalSpec::new(2, 1, 4, vec![parse_rational("0").unwrap(), parse_rational("1").unwrap()]),
            Err(ExtremalError::BetaOutOfRange(_))
        ));
        assert!(matches!(
            ExtremalSpec::new(2, 1, 4, vec![parse_rational("1/2").unwrap()]),
            Err(ExtremalError::BetaLengthMismatch { got: 1, expected: 2 })
        ));
        let s = spec(2, 1, 4, &["1/4", "1/4"]); // r = (1,1)
        assert!(matches!(
            check_tightness(&s, &ColorVector(vec![2, 1])),
            Err(ExtremalError::ReferenceTooSmall { i: 0, .. })
        ));
    }
}
