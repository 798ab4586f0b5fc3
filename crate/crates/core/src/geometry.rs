//! Ground-truth geometric nerves over exact rational arithmetic.
//!
//! Convex bodies are H-polyhedra (finite systems `a·x ≤ b` / `a·x = b`) or
//! the whole space. Intersection queries reduce to LP feasibility, decided
//! by an exact phase-1 simplex with Bland's rule, so verdicts are never
//! poisoned by floating-point noise near degeneracy. The nerve of a family
//! is assembled layer by layer; for convex families, faces larger than
//! `d + 1` can be inferred from their boundary (the classical intersection
//! property of convex sets), which the builder exploits behind an explicit
//! flag so both routes can be compared.
//!
//! [`random_generic_hyperplanes`] samples integer-coefficient hyperplanes
//! and certifies general position exactly; [`realize_extremal`] turns the
//! combinatorial construction of [`crate::extremal`] into an actual family
//! whose nerve can be recomputed geometrically.

use std::collections::{HashMap, HashSet};

use num::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ColorVector, ColoredComplex, Face};
use crate::extremal::{build_extremal, ExtremalSpec};
use crate::linalg::Mat;
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("constraint has {got} coefficients, ambient dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("a family needs at least one block and no empty blocks")]
    EmptyFamily,
    #[error("a feasible subfamily of size {size} exceeds the face-size cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("generic position not reached after {attempts} attempts")]
    TooManyRetries { attempts: u32 },
    #[error(transparent)]
    Extremal(#[from] crate::extremal::ExtremalError),
}

/// Constraint relation: inequality `a·x ≤ b` or hyperplane `a·x = b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rel {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

/// One linear constraint `a · x rel b` with exact rational data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(with = "crate::rational::serde_string_vec")]
    pub a: Vec<Rational>,
    #[serde(with = "crate::rational::serde_string")]
    pub b: Rational,
    pub rel: Rel,
}

impl Constraint {
    pub fn hyperplane(a: Vec<Rational>, b: Rational) -> Self {
        Constraint { a, b, rel: Rel::Eq }
    }

    pub fn half_space(a: Vec<Rational>, b: Rational) -> Self {
        Constraint { a, b, rel: Rel::Le }
    }
}

/// A convex body: either all of `ℝ^d` or an H-polyhedron.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConvexBody {
    #[serde(rename = "whole")]
    WholeSpace,
    #[serde(rename = "hpoly")]
    HPoly { constraints: Vec<Constraint> },
}

impl ConvexBody {
    pub fn constraints(&self) -> &[Constraint] {
        match self {
            ConvexBody::WholeSpace => &[],
            ConvexBody::HPoly { constraints } => constraints,
        }
    }

    pub fn is_whole(&self) -> bool {
        matches!(self, ConvexBody::WholeSpace)
    }
}

/// A colored family of convex bodies in `ℝ^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricFamily {
    pub d: usize,
    pub blocks: Vec<Vec<ConvexBody>>,
}

impl GeometricFamily {
    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.blocks.is_empty() || self.blocks.iter().any(Vec::is_empty) {
            return Err(GeometryError::EmptyFamily);
        }
        for body in self.blocks.iter().flatten() {
            for c in body.constraints() {
                if c.a.len() != self.d {
                    return Err(GeometryError::DimensionMismatch {
                        expected: self.d,
                        got: c.a.len(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn bodies(&self) -> Vec<&ConvexBody> {
        self.blocks.iter().flatten().collect()
    }

    pub fn n_per_color(&self) -> ColorVector {
        ColorVector(self.blocks.iter().map(Vec::len).collect())
    }
}

/// Whether the bodies have a common point, by exact LP feasibility on the
/// stacked constraint systems. Whole-space members contribute nothing; the
/// empty family is feasible.
pub fn feasible(bodies: &[&ConvexBody], d: usize) -> bool {
    let stacked: Vec<&Constraint> = bodies.iter().flat_map(|b| b.constraints()).collect();
    system_feasible(&stacked, d)
}

/// Exact phase-1 simplex with Bland's rule: true iff `{x : a_j·x rel b_j}`
/// is nonempty. Free variables are split as `x = u − w` with `u, w ≥ 0`;
/// the phase-1 objective (sum of artificials) reaching zero decides
/// feasibility, and Bland's pivoting rule guarantees termination.
fn system_feasible(constraints: &[&Constraint], d: usize) -> bool {
    let m = constraints.len();
    if m == 0 {
        return true;
    }
    let num_slack = constraints.iter().filter(|c| c.rel == Rel::Le).count();
    let n = 2 * d + num_slack + m;
    let art_base = 2 * d + num_slack;
    let mut t = vec![vec![Rational::zero(); n + 1]; m];
    let mut slack = 2 * d;
    for (row, c) in constraints.iter().enumerate() {
        debug_assert_eq!(c.a.len(), d, "constraint dimension mismatch");
        let flip = c.b.is_negative();
        let sgn = if flip { -Rational::one() } else { Rational::one() };
        for (j, aj) in c.a.iter().enumerate() {
            let v = &sgn * aj;
            t[row][j] = v.clone();
            t[row][d + j] = -v;
        }
        if c.rel == Rel::Le {
            t[row][slack] = sgn.clone();
            slack += 1;
        }
        t[row][art_base + row] = Rational::one();
        t[row][n] = &sgn * &c.b;
    }

    // Phase-1 objective row: reduced costs z_j − c_j for minimizing the sum
    // of artificials, starting from the all-artificial basis.
    let mut obj = vec![Rational::zero(); n + 1];
    for row in &t {
        for (o, v) in obj.iter_mut().zip(row.iter()) {
            *o += v;
        }
    }
    for j in art_base..n {
        obj[j] -= Rational::one();
    }
    let mut basis: Vec<usize> = (0..m).map(|row| art_base + row).collect();

    loop {
        // Bland: entering = smallest improving index.
        let Some(enter) = (0..n).find(|&j| obj[j].is_positive()) else {
            return obj[n].is_zero();
        };
        // Ratio test; ties broken by smallest basic variable (Bland).
        let mut leave: Option<(usize, Rational)> = None;
        for row in 0..m {
            if !t[row][enter].is_positive() {
                continue;
            }
            let ratio = &t[row][n] / &t[row][enter];
            let better = match &leave {
                None => true,
                Some((best_row, best)) => {
                    ratio < *best || (ratio == *best && basis[row] < basis[*best_row])
                }
            };
            if better {
                leave = Some((row, ratio));
            }
        }
        let (prow, _) = leave.expect("phase-1 objective is bounded below");
        // Pivot on (prow, enter).
        let pivot = t[prow][enter].clone();
        for v in t[prow].iter_mut() {
            *v /= &pivot;
        }
        for row in 0..m {
            if row == prow || t[row][enter].is_zero() {
                continue;
            }
            let factor = t[row][enter].clone();
            for j in 0..=n {
                let delta = &factor * &t[prow][j];
                t[row][j] -= delta;
            }
        }
        if !obj[enter].is_zero() {
            let factor = obj[enter].clone();
            for j in 0..=n {
                let delta = &factor * &t[prow][j];
                obj[j] -= delta;
            }
        }
        basis[prow] = enter;
    }
}

/// Build the nerve of `fam`: the complex on its bodies whose faces are the
/// subfamilies with a common point. Fails with [`GeometryError::CapExceeded`]
/// if a feasible subfamily larger than `max_face_size` exists — never
/// silently truncates. With `helly_shortcut`, faces of size above `d + 1`
/// are inferred from their boundary subfaces instead of running an LP
/// (valid for convex bodies); with the flag off every face is LP-checked.
pub fn nerve(
    fam: &GeometricFamily,
    max_face_size: usize,
    helly_shortcut: bool,
) -> Result<ColoredComplex, GeometryError> {
    fam.validate()?;
    let bodies = fam.bodies();
    let n = bodies.len();
    // Feasibility depends only on the non-whole members; cache on those.
    let mut cache: HashMap<Vec<usize>, bool> = HashMap::new();
    let mut is_feasible = |face: &Face| -> bool {
        let key: Vec<usize> = face.iter().filter(|&v| !bodies[v].is_whole()).collect();
        if let Some(&v) = cache.get(&key) {
            return v;
        }
        let subset: Vec<&ConvexBody> = key.iter().map(|&v| bodies[v]).collect();
        let verdict = feasible(&subset, fam.d);
        cache.insert(key, verdict);
        verdict
    };

    let mut all: HashSet<Face> = HashSet::new();
    all.insert(Face::empty());
    let mut prev: Vec<Face> = vec![Face::empty()];
    let mut size = 0usize;
    while !prev.is_empty() {
        size += 1;
        let mut current = Vec::new();
        for f in &prev {
            let lo = f.max_vertex().map_or(0, |v| v + 1);
            for v in lo..n {
                let candidate = f.clone().with(v);
                // Downward closure first: every subfacet must be a face.
                let closed = candidate
                    .iter()
                    .filter(|&u| u != v)
                    .all(|u| all.contains(&candidate.clone().without(u)));
                if !closed {
                    continue;
                }
                let face = if helly_shortcut && size > fam.d + 1 {
                    true
                } else {
                    is_feasible(&candidate)
                };
                if face {
                    current.push(candidate);
                }
            }
        }
        if !current.is_empty() && size > max_face_size {
            return Err(GeometryError::CapExceeded {
                size,
                cap: max_face_size,
            });
        }
        all.extend(current.iter().cloned());
        prev = current;
    }

    let maximal: Vec<Face> = all
        .iter()
        .filter(|f| (0..n).all(|v| f.contains(v) || !all.contains(&(*f).clone().with(v))))
        .cloned()
        .collect();
    Ok(ColoredComplex::new(fam.n_per_color(), maximal).expect("nerve vertices are in range"))
}

/// Exact general-position certificate for a set of hyperplanes in `ℝ^d`:
/// every subset of at most `d` normals has full rank (so the planes meet in
/// an affine flat of the expected dimension) and every `d + 1` of them have
/// empty common intersection.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenericityCertificate {
    pub count: usize,
    pub d: usize,
    pub rank_checks: u64,
    pub infeasibility_checks: u64,
    pub resamples: u32,
}

fn hyperplane_data(body: &ConvexBody) -> (&[Rational], &Rational) {
    let cs = body.constraints();
    assert!(cs.len() == 1 && cs[0].rel == Rel::Eq, "not a hyperplane");
    (&cs[0].a, &cs[0].b)
}

/// Check the general-position certificate on the given hyperplanes.
pub fn certify_generic(planes: &[ConvexBody], d: usize) -> Option<GenericityCertificate> {
    let data: Vec<(&[Rational], &Rational)> = planes.iter().map(hyperplane_data).collect();
    let mut rank_checks = 0u64;
    let mut infeasibility_checks = 0u64;
    // Subsets of size ≤ d: normals must be linearly independent.
    for s in 1..=d.min(data.len()) {
        for subset in crate::complex::subsets_of_range(0, data.len(), s) {
            rank_checks += 1;
            let rows: Vec<Vec<Rational>> =
                subset.iter().map(|i| data[i].0.to_vec()).collect();
            if Mat::from_rows(rows).rank_exact() != s {
                return None;
            }
        }
    }
    // Subsets of size d + 1: the stacked equality system must be infeasible
    // (the affine hull check rank(A) < rank(A|b)).
    if data.len() > d {
        for subset in crate::complex::subsets_of_range(0, data.len(), d + 1) {
            infeasibility_checks += 1;
            let plain: Vec<Vec<Rational>> =
                subset.iter().map(|i| data[i].0.to_vec()).collect();
            let augmented: Vec<Vec<Rational>> = subset
                .iter()
                .map(|i| {
                    let mut row = data[i].0.to_vec();
                    row.push(data[i].1.clone());
                    row
                })
                .collect();
            let r_plain = Mat::from_rows(plain).rank_exact();
            let r_aug = Mat::from_rows(augmented).rank_exact();
            if r_plain >= r_aug {
                return None;
            }
        }
    }
    Some(GenericityCertificate {
        count: planes.len(),
        d,
        rank_checks,
        infeasibility_checks,
        resamples: 0,
    })
}

const COEFFICIENT_RANGE: i64 = 1000;
const MAX_RESAMPLES: u32 = 64;

/// Sample `count` hyperplanes with integer coefficients in
/// `[-1000, 1000]`, re-drawing until the general-position certificate
/// passes (failure is astronomically unlikely but checked exactly).
pub fn random_generic_hyperplanes(
    count: usize,
    d: usize,
    seed: u64,
) -> Result<(Vec<ConvexBody>, GenericityCertificate), GeometryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_RESAMPLES {
        let planes: Vec<ConvexBody> = (0..count)
            .map(|_| {
                let a: Vec<Rational> = (0..d)
                    .map(|_| Rational::from_integer(
                        rng.gen_range(-COEFFICIENT_RANGE..=COEFFICIENT_RANGE).into(),
                    ))
                    .collect();
                let b = Rational::from_integer(
                    rng.gen_range(-COEFFICIENT_RANGE..=COEFFICIENT_RANGE).into(),
                );
                ConvexBody::HPoly {
                    constraints: vec![Constraint::hyperplane(a, b)],
                }
            })
            .collect();
        if let Some(mut cert) = certify_generic(&planes, d) {
            cert.resamples = attempt;
            return Ok((planes, cert));
        }
    }
    Err(GeometryError::TooManyRetries {
        attempts: MAX_RESAMPLES,
    })
}

/// Realize the combinatorial construction geometrically: each block gets
/// its `r_i` whole-space bodies first, then its share of one jointly
/// generic hyperplane pool. The nerve of the result must coincide with the
/// combinatorial complex from [`build_extremal`].
pub fn realize_extremal(
    spec: &ExtremalSpec,
    seed: u64,
) -> Result<(GeometricFamily, GenericityCertificate), GeometryError> {
    let built = build_extremal(spec)?;
    let total_planes = built.hyperplanes.len();
    let (mut pool, cert) = random_generic_hyperplanes(total_planes, spec.d, seed)?;
    let mut pool_iter = pool.drain(..);
    let blocks = (0..spec.c)
        .map(|i| {
            let r_i = built.r[i];
            let mut block = vec![ConvexBody::WholeSpace; r_i];
            block.extend((&mut pool_iter).take(spec.m - r_i));
            block
        })
        .collect();
    Ok((GeometricFamily { d: spec.d, blocks }, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    /// Axis-aligned box `[lo_i, hi_i]` in `ℝ^d` as 2d half-spaces.
    fn boxed(lo: &[i64], hi: &[i64]) -> ConvexBody {
        let d = lo.len();
        let mut constraints = Vec::new();
        for i in 0..d {
            let mut a = vec![Rational::zero(); d];
            a[i] = Rational::one();
            constraints.push(Constraint::half_space(a.clone(), Rational::from_integer(hi[i].into())));
            a[i] = -Rational::one();
            constraints.push(Constraint::half_space(a, Rational::from_integer((-lo[i]).into())));
        }
        ConvexBody::HPoly { constraints }
    }

    fn line(a: &[&str], b: &str) -> ConvexBody {
        ConvexBody::HPoly {
            constraints: vec![Constraint::hyperplane(a.iter().map(|s| q(s)).collect(), q(b))],
        }
    }

    #[test]
    fn disjoint_boxes_do_not_intersect() {
        let b1 = boxed(&[0, 0], &[1, 1]);
        let b2 = boxed(&[2, 2], &[3, 3]);
        assert!(!feasible(&[&b1, &b2], 2));
        assert!(feasible(&[&b1], 2));
        assert!(feasible(&[&b2], 2));
        // Touching boxes share a corner.
        let b3 = boxed(&[1, 1], &[2, 2]);
        assert!(feasible(&[&b1, &b3], 2));
    }

    #[test]
    fn whole_space_members_never_obstruct() {
        assert!(feasible(&[&ConvexBody::WholeSpace, &ConvexBody::WholeSpace], 3));
        assert!(feasible(&[], 2));
        let b1 = boxed(&[0], &[1]);
        assert!(feasible(&[&ConvexBody::WholeSpace, &b1], 1));
    }

    #[test]
    fn three_lines_pairwise_but_not_jointly() {
        // x = 0, y = 0, x + y = 1: each pair meets, the triple is empty.
        let l1 = line(&["1", "0"], "0");
        let l2 = line(&["0", "1"], "0");
        let l3 = line(&["1", "1"], "1");
        assert!(feasible(&[&l1, &l2], 2));
        assert!(feasible(&[&l1, &l3], 2));
        assert!(feasible(&[&l2, &l3], 2));
        assert!(!feasible(&[&l1, &l2, &l3], 2));
    }

    #[test]
    fn negative_right_hand_sides_are_handled() {
        // x ≤ −2 and x ≥ −1 is empty; x ≤ −1 and x ≥ −2 is not.
        let a = ConvexBody::HPoly {
            constraints: vec![Constraint::half_space(vec![q("1")], q("-2"))],
        };
        let b = ConvexBody::HPoly {
            constraints: vec![Constraint::half_space(vec![q("-1")], q("1"))],
        };
        assert!(!feasible(&[&a, &b], 1));
        let c = ConvexBody::HPoly {
            constraints: vec![Constraint::half_space(vec![q("1")], q("-1"))],
        };
        let e = ConvexBody::HPoly {
            constraints: vec![Constraint::half_space(vec![q("-1")], q("2"))],
        };
        assert!(feasible(&[&c, &e], 1));
    }

    #[test]
    fn nerve_of_a_single_body_is_a_point() {
        let fam = GeometricFamily {
            d: 2,
            blocks: vec![vec![boxed(&[0, 0], &[1, 1])]],
        };
        let cx = nerve(&fam, 4, true).unwrap();
        assert_eq!(cx.maximal_faces(), &[Face::singleton(0)]);
    }

    #[test]
    fn nerve_of_disjoint_boxes_with_whole_space() {
        let fam = GeometricFamily {
            d: 2,
            blocks: vec![
                vec![ConvexBody::WholeSpace],
                vec![boxed(&[0, 0], &[1, 1]), boxed(&[2, 2], &[3, 3])],
            ],
        };
        let cx = nerve(&fam, 4, true).unwrap();
        assert_eq!(
            cx.maximal_faces(),
            &[Face::from_vertices([0, 1]), Face::from_vertices([0, 2])]
        );
    }

    #[test]
    fn nerve_cap_is_a_hard_error() {
        let fam = GeometricFamily {
            d: 1,
            blocks: vec![vec![
                ConvexBody::WholeSpace,
                ConvexBody::WholeSpace,
                ConvexBody::WholeSpace,
            ]],
        };
        assert_eq!(
            nerve(&fam, 2, false).unwrap_err(),
            GeometryError::CapExceeded { size: 3, cap: 2 }
        );
        assert!(nerve(&fam, 3, false).is_ok());
    }

    #[test]
    fn helly_shortcut_agrees_with_exhaustive_lp() {
        let fams = [
            GeometricFamily {
                d: 1,
                blocks: vec![vec![
                    ConvexBody::WholeSpace,
                    ConvexBody::WholeSpace,
                    boxed(&[0], &[2]),
                    boxed(&[1], &[3]),
                    boxed(&[5], &[6]),
                ]],
            },
            GeometricFamily {
                d: 2,
                blocks: vec![
                    vec![boxed(&[0, 0], &[2, 2]), boxed(&[1, 1], &[3, 3])],
                    vec![boxed(&[1, 0], &[2, 4]), ConvexBody::WholeSpace],
                ],
            },
        ];
        for fam in &fams {
            let with = nerve(fam, 8, true).unwrap();
            let without = nerve(fam, 8, false).unwrap();
            assert_eq!(with, without);
        }
    }

    #[test]
    fn generic_points_on_a_line() {
        // d = 1: hyperplanes are points; generic means pairwise distinct.
        let (planes, cert) = random_generic_hyperplanes(5, 1, 7).unwrap();
        assert_eq!(planes.len(), 5);
        assert_eq!(cert.rank_checks, 5);
        assert_eq!(cert.infeasibility_checks, 10); // C(5,2) pairs disjoint
        for pair in crate::complex::subsets_of_range(0, 5, 2) {
            let vs: Vec<usize> = pair.vertices();
            assert!(!feasible(&[&planes[vs[0]], &planes[vs[1]]], 1));
        }
    }

    #[test]
    fn generic_lines_in_the_plane() {
        let (planes, cert) = random_generic_hyperplanes(3, 2, 42).unwrap();
        assert_eq!(cert.count, 3);
        // Pairs meet, the triple does not.
        for pair in crate::complex::subsets_of_range(0, 3, 2) {
            let vs: Vec<usize> = pair.vertices();
            assert!(feasible(&[&planes[vs[0]], &planes[vs[1]]], 2));
        }
        let all: Vec<&ConvexBody> = planes.iter().collect();
        assert!(!feasible(&all, 2));

        // count ≤ d: independence of normals is the entire certificate.
        let (_, cert) = random_generic_hyperplanes(2, 2, 3).unwrap();
        assert_eq!(cert.infeasibility_checks, 0);
    }

    #[test]
    fn certificate_rejects_degenerate_configurations() {
        // Parallel lines: the pair system is infeasible but the rank check
        // on {normal, normal} fails first.
        let l1 = line(&["1", "0"], "0");
        let l2 = line(&["2", "0"], "5");
        assert!(certify_generic(&[l1.clone(), l2], 2).is_none());
        // Concurrent triple: all through the origin.
        let l3 = line(&["0", "1"], "0");
        let l4 = line(&["1", "1"], "0");
        assert!(certify_generic(&[l1, l3, l4], 2).is_none());
    }

    #[test]
    fn realized_construction_matches_the_combinatorial_nerve() {
        for seed in [1, 2, 3] {
            let spec = ExtremalSpec::new(2, 1, 3, vec![q("1/3"), q("2/3")]).unwrap();
            let built = build_extremal(&spec).unwrap();
            let (fam, _cert) = realize_extremal(&spec, seed).unwrap();
            assert_eq!(fam.n_per_color(), ColorVector(vec![3, 3]));
            let geometric = nerve(&fam, 6, true).unwrap();
            assert_eq!(geometric, built.complex);
        }
    }

    #[test]
    fn family_json_round_trip() {
        let json = r#"{"d":2,"blocks":[[{"kind":"hpoly","constraints":[{"a":["1","0"],"b":"1","rel":"<="},{"a":["0","1/2"],"b":"-3/7","rel":"="}]},{"kind":"whole"}]]}"#;
        let fam: GeometricFamily = serde_json::from_str(json).unwrap();
        assert_eq!(fam.d, 2);
        assert_eq!(fam.blocks[0][0].constraints().len(), 2);
        assert_eq!(fam.blocks[0][0].constraints()[1].rel, Rel::Eq);
        assert!(fam.blocks[0][1].is_whole());
        let back = serde_json::to_string(&fam).unwrap();
        assert_eq!(back, json);
        // Decimal rationals are accepted on input and canonicalized.
        let decimal = r#"{"d":1,"blocks":[[{"kind":"hpoly","constraints":[{"a":["0.5"],"b":"2","rel":"<="}]}]]}"#;
        let fam: GeometricFamily = serde_json::from_str(decimal).unwrap();
        assert_eq!(fam.blocks[0][0].constraints()[0].a[0], q("1/2"));
    }
}
