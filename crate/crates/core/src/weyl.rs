//! The reflection group of the g₂ root system acting on ℝ³.
//!
//! The group is generated by `T` (reflection in the short simple root
//! `ε₁ − ε₂`, i.e. the swap of the first two coordinates) and `R`
//! (reflection in the long simple root `ε₂ + ε₃ − 2ε₁`).  It has twelve
//! elements, satisfies `T² = R² = (TR)⁶ = I`, and is isomorphic to the
//! dihedral group of order 12.  Every element fixes the direction
//! `(1, 1, 1)`, so the action is effectively two-dimensional.
//!
//! Group elements are canonicalized against a fixed enumeration of reduced
//! words, ordered by length with `T`-first tie-break:
//!
//! ```text
//! I, T, R, TR, RT, TRT, RTR, TRTR, RTRT, TRTRT, RTRTR, TRTRTR
//! ```
//!
//! Products are resolved by comparing exact rational matrices, never by
//! word rewriting.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;

/// Generator letters of the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    /// Reflection in the short simple root `ε₁ − ε₂`.
    T,
    /// Reflection in the long simple root `ε₂ + ε₃ − 2ε₁`.
    R,
}

/// Errors raised by chamber and circle geometry.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    /// The input sits on a measure-zero locus (a reflection hyperplane, a
    /// closest-pair tie, equal spacing, coincident particles) where the
    /// prescription in use is ill-defined.  Never tie-broken silently.
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(&'static str),
    /// The vector is not one of the twelve roots.
    #[error("not a root: {0:?}")]
    NotARoot([i64; 3]),
}

type Rat = Rational64;
type RatMat = [[Rat; 3]; 3];

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn mat_mul(a: &RatMat, b: &RatMat) -> RatMat {
    let mut out = [[Rat::zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn mat_identity() -> RatMat {
    let mut m = [[Rat::zero(); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = rat(1, 1);
    }
    m
}

/// A root of the g₂ system, stored with integer components.
///
/// Short roots are the six vectors `ε_i − ε_j` (squared length 2); long
/// roots are the six vectors `ε_i + ε_j − 2ε_k` (squared length 6).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    components: [i64; 3],
}

impl Root {
    /// Wraps an integer vector, checking it against the root set.
    pub fn new(components: [i64; 3]) -> Result<Self, WeylError> {
        let r = Root { components };
        if roots().contains(&r) {
            Ok(r)
        } else {
            Err(WeylError::NotARoot(components))
        }
    }

    pub fn components(&self) -> [i64; 3] {
        self.components
    }

    /// Squared Euclidean length: 2 for short roots, 6 for long roots.
    pub fn length_sq(&self) -> i64 {
        self.components.iter().map(|c| c * c).sum()
    }

    pub fn is_long(&self) -> bool {
        self.length_sq() == 6
    }

    pub fn negated(&self) -> Root {
        Root {
            components: [
                -self.components[0],
                -self.components[1],
                -self.components[2],
            ],
        }
    }

    /// Euclidean pairing with a float vector.
    pub fn dot_f64(&self, v: [f64; 3]) -> f64 {
        self.components
            .iter()
            .zip(v.iter())
            .map(|(c, x)| *c as f64 * x)
            .sum()
    }
}

/// The short simple root `α₁ = ε₁ − ε₂`.
pub const ALPHA_1: Root = Root {
    components: [1, -1, 0],
};
/// The long simple root `α₂ = ε₂ + ε₃ − 2ε₁`.
pub const ALPHA_2: Root = Root {
    components: [-2, 1, 1],
};
/// The lowest root `α₀ = ε₁ + ε₂ − 2ε₃`; the element `W = RTRTR` is the
/// reflection in the plane orthogonal to it.
pub const ALPHA_0: Root = Root {
    components: [1, 1, -2],
};

/// The full root set in a fixed order: the six short roots `ε_i − ε_j`
/// first, then the six long roots `ε_i + ε_j − 2ε_k`.  Closed under
/// negation and under the action of every group element.
pub fn roots() -> &'static [Root; 12] {
    const ROOTS: [Root; 12] = [
        Root { components: [1, -1, 0] },
        Root { components: [-1, 1, 0] },
        Root { components: [0, 1, -1] },
        Root { components: [0, -1, 1] },
        Root { components: [1, 0, -1] },
        Root { components: [-1, 0, 1] },
        Root { components: [1, 1, -2] },
        Root { components: [-1, -1, 2] },
        Root { components: [-2, 1, 1] },
        Root { components: [2, -1, -1] },
        Root { components: [1, -2, 1] },
        Root { components: [-1, 2, -1] },
    ];
    &ROOTS
}

struct WeylTable {
    matrices: [RatMat; 12],
    matrices_f64: [[[f64; 3]; 3]; 12],
    mul: [[u8; 12]; 12],
    inverse: [u8; 12],
    /// Index of the reflection element for each root (by root-set order).
    reflections: [u8; 12],
}

const WORDS: [&[Gen]; 12] = [
    &[],
    &[Gen::T],
    &[Gen::R],
    &[Gen::T, Gen::R],
    &[Gen::R, Gen::T],
    &[Gen::T, Gen::R, Gen::T],
    &[Gen::R, Gen::T, Gen::R],
    &[Gen::T, Gen::R, Gen::T, Gen::R],
    &[Gen::R, Gen::T, Gen::R, Gen::T],
    &[Gen::T, Gen::R, Gen::T, Gen::R, Gen::T],
    &[Gen::R, Gen::T, Gen::R, Gen::T, Gen::R],
    &[Gen::T, Gen::R, Gen::T, Gen::R, Gen::T, Gen::R],
];

const NAMES: [&str; 12] = [
    "I", "T", "R", "TR", "RT", "TRT", "RTR", "TRTR", "RTRT", "TRTRT", "RTRTR", "TRTRTR",
];

fn reflection_matrix(alpha: &Root) -> RatMat {
    // s_α(v) = v − 2⟨α,v⟩/⟨α,α⟩ α, assembled column by column.
    let len_sq = alpha.length_sq();
    let a = alpha.components;
    let mut m = mat_identity();
    for (j, col_scale) in a.iter().enumerate() {
        for (i, ai) in a.iter().enumerate() {
            m[i][j] -= rat(2 * col_scale * ai, len_sq);
        }
    }
    m
}

fn build_table() -> WeylTable {
    let gen_t = reflection_matrix(&ALPHA_1);
    let gen_r = reflection_matrix(&ALPHA_2);
    let gen = |g: Gen| match g {
        Gen::T => gen_t,
        Gen::R => gen_r,
    };

    let mut matrices = [mat_identity(); 12];
    for (i, word) in WORDS.iter().enumerate() {
        let mut m = mat_identity();
        for letter in word.iter() {
            m = mat_mul(&m, &gen(*letter));
        }
        matrices[i] = m;
    }
    for i in 0..12 {
        for j in 0..i {
            assert_ne!(matrices[i], matrices[j], "canonical words must be distinct");
        }
    }

    let lookup = |m: &RatMat| -> u8 {
        matrices
            .iter()
            .position(|c| c == m)
            .expect("product escaped the twelve canonical matrices") as u8
    };

    let mut mul = [[0u8; 12]; 12];
    for i in 0..12 {
        for j in 0..12 {
            mul[i][j] = lookup(&mat_mul(&matrices[i], &matrices[j]));
        }
    }

    let mut inverse = [0u8; 12];
    for (i, row) in mul.iter().enumerate() {
        inverse[i] = row.iter().position(|&p| p == 0).unwrap() as u8;
    }

    let mut reflections = [0u8; 12];
    for (i, root) in roots().iter().enumerate() {
        reflections[i] = lookup(&reflection_matrix(root));
    }

    let mut matrices_f64 = [[[0.0f64; 3]; 3]; 12];
    for (mf, m) in matrices_f64.iter_mut().zip(matrices.iter()) {
        for (rowf, row) in mf.iter_mut().zip(m.iter()) {
            for (ef, e) in rowf.iter_mut().zip(row.iter()) {
                *ef = *e.numer() as f64 / *e.denom() as f64;
            }
        }
    }

    WeylTable {
        matrices,
        matrices_f64,
        mul,
        inverse,
        reflections,
    }
}

fn table() -> &'static WeylTable {
    static TABLE: OnceLock<WeylTable> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

/// An element of the twelve-element reflection group, canonicalized to the
/// fixed enumeration.  Cheap to copy; all structure lives in a static table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(u8);

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement(0)
    }

    /// The generator `T = s_{α₁}`.
    pub fn t() -> Self {
        GroupElement(1)
    }

    /// The generator `R = s_{α₂}`.
    pub fn r() -> Self {
        GroupElement(2)
    }

    /// The longest-word reflection `W = RTRTR = s_{α₀}`.
    pub fn w() -> Self {
        GroupElement(10)
    }

    pub fn from_index(index: usize) -> Option<Self> {
        (index < 12).then_some(GroupElement(index as u8))
    }

    pub fn all() -> [GroupElement; 12] {
        std::array::from_fn(|i| GroupElement(i as u8))
    }

    pub fn index(&self) -> usize {
        self.0 as usize
    }

    /// The reduced word over `{T, R}` in the canonical enumeration.
    pub fn word(&self) -> &'static [Gen] {
        WORDS[self.index()]
    }

    pub fn name(&self) -> &'static str {
        NAMES[self.index()]
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement(table().inverse[self.index()])
    }

    /// Parity of `T` and `R` letter counts in any word for the element;
    /// well-defined because every relation uses each letter an even number
    /// of times.
    pub fn letter_parities(&self) -> (bool, bool) {
        let word = self.word();
        let t = word.iter().filter(|g| **g == Gen::T).count() % 2 == 1;
        let r = word.iter().filter(|g| **g == Gen::R).count() % 2 == 1;
        (t, r)
    }

    /// For rotations `(TR)^j` returns `j ∈ 0..6`; `None` for reflections.
    pub fn rotation_degree(&self) -> Option<usize> {
        if !self.word().len().is_multiple_of(2) {
            return None;
        }
        let c = GroupElement::t() * GroupElement::r();
        let mut power = GroupElement::identity();
        for j in 0..6 {
            if power == *self {
                return Some(j);
            }
            power = power * c;
        }
        unreachable!("even-length element must be a power of TR")
    }

    /// Action on a float vector.
    pub fn act_f64(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &table().matrices_f64[self.index()];
        std::array::from_fn(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
    }

    /// Exact action on a rational vector.
    pub fn act_rational(&self, v: &[BigRational; 3]) -> [BigRational; 3] {
        let m = &table().matrices[self.index()];
        std::array::from_fn(|i| {
            (0..3)
                .map(|j| {
                    BigRational::new(BigInt::from(*m[i][j].numer()), BigInt::from(*m[i][j].denom()))
                        * &v[j]
                })
                .sum()
        })
    }

    /// Exact action on a root; the root set is closed under the group.
    pub fn act_root(&self, alpha: &Root) -> Root {
        let m = &table().matrices[self.index()];
        let comp = std::array::from_fn(|i| {
            let entry: Rat = (0..3).map(|j| m[i][j] * rat(alpha.components[j], 1)).sum();
            assert!(entry.is_integer(), "roots map to integer vectors");
            *entry.numer()
        });
        Root { components: comp }
    }

    /// Exact rational matrix of the action.
    pub fn matrix(&self) -> &'static [[Rational64; 3]; 3] {
        &table().matrices[self.index()]
    }
}

impl std::ops::Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        GroupElement(table().mul[self.index()][rhs.index()])
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The reflection associated with a root (the same element for `α` and
/// `−α`).
pub fn reflection(alpha: &Root) -> Result<GroupElement, WeylError> {
    let pos = roots()
        .iter()
        .position(|r| r == alpha)
        .ok_or(WeylError::NotARoot(alpha.components))?;
    Ok(GroupElement(table().reflections[pos]))
}

/// The six elements whose circle-cut configurations let the lone particle
/// reach only the right endpoint of the unwrapped interval.  Its right
/// translate by `W` is the complementary six.
pub fn boundary_set_plus() -> [GroupElement; 6] {
    [
        GroupElement(0),
        GroupElement(1),
        GroupElement(6),
        GroupElement(7),
        GroupElement(8),
        GroupElement(9),
    ]
}

/// Finds the unique `Q` with `0 < y₁ − y₂ < y₃ − y₁` for `y = Q⁻¹(x)`.
///
/// Points on any reflection hyperplane are rejected rather than tie-broken.
pub fn chamber_of(x: [f64; 3]) -> Result<GroupElement, WeylError> {
    for alpha in roots().iter() {
        if alpha.dot_f64(x) == 0.0 {
            return Err(WeylError::DegenerateConfiguration(
                "point lies on a reflection hyperplane",
            ));
        }
    }
    let mut found = None;
    for q in GroupElement::all() {
        let y = q.inverse().act_f64(x);
        let lo = y[0] - y[1];
        let hi = y[2] - y[0];
        if 0.0 < lo && lo < hi {
            if found.is_some() {
                return Err(WeylError::DegenerateConfiguration(
                    "point matches two chambers",
                ));
            }
            found = Some(q);
        }
    }
    found.ok_or(WeylError::DegenerateConfiguration(
        "point matches no chamber",
    ))
}

/// Three particles on a circle of circumference `2L`, cut and unwrapped to
/// an interval with a chamber label.
#[derive(Clone, Debug)]
pub struct CircleConfig {
    l: f64,
    theta: [f64; 3],
    chamber: GroupElement,
    interval: [f64; 3],
}

impl CircleConfig {
    /// Half-circumference `L`.
    pub fn l(&self) -> f64 {
        self.l
    }

    /// Positions reduced to `[0, 2L)`.
    pub fn theta(&self) -> [f64; 3] {
        self.theta
    }

    pub fn chamber(&self) -> GroupElement {
        self.chamber
    }

    /// Unwrapped coordinates on the cut interval `[0, 2L)`.
    pub fn interval(&self) -> [f64; 3] {
        self.interval
    }

    /// Index of the particle that is not in the closest pair.
    pub fn lone_particle(&self) -> usize {
        lone_particle_of(self.theta, self.l).expect("validated at construction")
    }
}

fn circ_dist(a: f64, b: f64, two_l: f64) -> f64 {
    let d = (a - b).abs() % two_l;
    d.min(two_l - d)
}

fn lone_particle_of(theta: [f64; 3], l: f64) -> Option<usize> {
    let two_l = 2.0 * l;
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let mut dists = pairs.map(|(a, b)| circ_dist(theta[a], theta[b], two_l));
    let closest = (0..3).min_by(|&a, &b| dists[a].total_cmp(&dists[b]))?;
    let d_min = dists[closest];
    dists[closest] = f64::INFINITY;
    let second = dists.iter().fold(f64::INFINITY, |m, &d| m.min(d));
    if second - d_min <= 1e-12 * two_l {
        return None; // tie
    }
    Some(3 - pairs[closest].0 - pairs[closest].1)
}

/// Cuts the circle at the point opposite the midpoint of the closest pair,
/// unwraps to an interval of length `2L`, and labels the chamber.
///
/// Rejected as degenerate: coincident particles, equally spaced particles,
/// and ties between two closest pairs.  By construction neither particle of
/// the closest pair can be closer than `2L/3` to an endpoint of the
/// interval.
pub fn circle_cut(theta: [f64; 3], l: f64) -> Result<CircleConfig, WeylError> {
    assert!(l > 0.0 && l.is_finite(), "half-circumference must be positive");
    let two_l = 2.0 * l;
    let t: [f64; 3] = std::array::from_fn(|i| theta[i].rem_euclid(two_l));

    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let dists = pairs.map(|(a, b)| circ_dist(t[a], t[b], two_l));
    if dists.contains(&0.0) {
        return Err(WeylError::DegenerateConfiguration(
            "two particles coincide",
        ));
    }
    let spread = dists.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d))
        - dists.iter().fold(f64::INFINITY, |m, &d| m.min(d));
    if spread <= 1e-12 * two_l {
        return Err(WeylError::DegenerateConfiguration(
            "particles are equally spaced",
        ));
    }
    let Some(lone) = lone_particle_of(t, l) else {
        return Err(WeylError::DegenerateConfiguration(
            "two closest pairs tie",
        ));
    };
    let (a, b) = pairs.into_iter().find(|p| 3 - p.0 - p.1 == lone).unwrap();

    // Midpoint along the short arc from a to b; the cut sits opposite it.
    let mut delta = (t[b] - t[a]).rem_euclid(two_l);
    if delta > l {
        delta -= two_l;
    }
    let midpoint = (t[a] + 0.5 * delta).rem_euclid(two_l);
    let cut = (midpoint + l).rem_euclid(two_l);

    let interval: [f64; 3] = std::array::from_fn(|i| (t[i] - cut).rem_euclid(two_l));
    let chamber = chamber_of(interval)?;
    Ok(CircleConfig {
        l,
        theta: t,
        chamber,
        interval,
    })
}

/// Exact pairing `⟨α, v⟩` for a rational vector.
pub fn pairing_rational(alpha: &Root, v: &[BigRational; 3]) -> BigRational {
    alpha
        .components
        .iter()
        .zip(v.iter())
        .map(|(c, x)| BigRational::from(BigInt::from(*c)) * x)
        .sum()
}

/// True when the rational vector lies off every reflection hyperplane.
pub fn is_generic_rational(v: &[BigRational; 3]) -> bool {
    roots().iter().all(|a| !pairing_rational(a, v).is_zero())
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(name: &str) -> GroupElement {
        GroupElement::all()
            .into_iter()
            .find(|g| g.name() == name)
            .unwrap()
    }

    #[test]
    fn generator_relations() {
        let t = GroupElement::t();
        let r = GroupElement::r();
        assert_eq!(t * t, GroupElement::identity());
        assert_eq!(r * r, GroupElement::identity());
        let mut p = GroupElement::identity();
        for _ in 0..6 {
            p = p * (t * r);
        }
        assert_eq!(p, GroupElement::identity());
    }

    #[test]
    fn tr_cubed_squares_to_identity() {
        let trc = e("TRTRTR");
        assert_eq!(trc * trc, GroupElement::identity());
    }

    #[test]
    fn identity_absorbs() {
        assert_eq!(GroupElement::identity() * GroupElement::r(), GroupElement::r());
    }

    #[test]
    fn multiplication_is_associative_for_all_triples() {
        let all = GroupElement::all();
        for a in all {
            for b in all {
                for c in all {
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
        }
    }

    #[test]
    fn inverses_work() {
        for g in GroupElement::all() {
            assert_eq!(g * g.inverse(), GroupElement::identity());
            assert_eq!(g.inverse() * g, GroupElement::identity());
        }
    }

    #[test]
    fn act_t_swaps_first_two_coordinates() {
        assert_eq!(GroupElement::t().act_f64([1.0, 2.0, 3.0]), [2.0, 1.0, 3.0]);
    }

    #[test]
    fn act_r_on_first_basis_vector() {
        // Reflection formula with α₂ = ε₂ + ε₃ − 2ε₁, ⟨α₂, α₂⟩ = 6.
        let out = GroupElement::r().act_f64([1.0, 0.0, 0.0]);
        let expected = [-1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
        for (o, ex) in out.iter().zip(expected.iter()) {
            assert!((o - ex).abs() < 1e-15);
        }
    }

    #[test]
    fn w_inverts_the_lowest_root() {
        let w = GroupElement::w();
        assert_eq!(w.name(), "RTRTR");
        assert_eq!(w.act_root(&ALPHA_0), ALPHA_0.negated());
    }

    #[test]
    fn reflection_of_simple_roots_gives_generators() {
        assert_eq!(reflection(&ALPHA_1).unwrap(), GroupElement::t());
        assert_eq!(reflection(&ALPHA_2).unwrap(), GroupElement::r());
        assert_eq!(reflection(&ALPHA_0).unwrap(), e("RTRTR"));
    }

    #[test]
    fn reflection_ignores_root_sign() {
        for alpha in roots() {
            assert_eq!(reflection(alpha).unwrap(), reflection(&alpha.negated()).unwrap());
        }
    }

    #[test]
    fn reflection_rejects_non_roots() {
        assert_eq!(
            Root::new([1, 1, 1]).unwrap_err(),
            WeylError::NotARoot([1, 1, 1])
        );
    }

    #[test]
    fn root_set_shape() {
        let rs = roots();
        assert_eq!(rs.len(), 12);
        assert!(rs.contains(&Root { components: [1, -1, 0] }));
        assert_eq!(Root { components: [1, -1, 0] }.length_sq(), 2);
        assert!(rs.contains(&Root { components: [-2, 1, 1] }));
        assert_eq!(Root { components: [-2, 1, 1] }.length_sq(), 6);
        for alpha in rs.iter() {
            assert!(rs.contains(&alpha.negated()));
        }
    }

    #[test]
    fn root_set_is_weyl_invariant() {
        for g in GroupElement::all() {
            for alpha in roots().iter() {
                assert!(roots().contains(&g.act_root(alpha)));
            }
        }
    }

    #[test]
    fn short_and_long_reflection_classes() {
        // Conjugation preserves root length, splitting the six reflections
        // into {T, RTR, TRTRT} (short) and {R, TRT, RTRTR} (long).
        let short: Vec<_> = roots()
            .iter()
            .filter(|r| !r.is_long())
            .map(|r| reflection(r).unwrap())
            .collect();
        for name in ["T", "RTR", "TRTRT"] {
            assert!(short.contains(&e(name)));
        }
        let long: Vec<_> = roots()
            .iter()
            .filter(|r| r.is_long())
            .map(|r| reflection(r).unwrap())
            .collect();
        for name in ["R", "TRT", "RTRTR"] {
            assert!(long.contains(&e(name)));
        }
    }

    #[test]
    fn chamber_examples() {
        assert_eq!(chamber_of([0.0, -1.0, 2.0]).unwrap(), GroupElement::identity());
        assert_eq!(chamber_of([-1.0, 0.0, 2.0]).unwrap(), GroupElement::t());
        assert_eq!(
            chamber_of([1.0, 1.0, 0.0]).unwrap_err(),
            WeylError::DegenerateConfiguration("point lies on a reflection hyperplane")
        );
    }

    #[test]
    fn chamber_tracks_group_action() {
        let x0 = [0.0, -1.0, 2.5];
        assert_eq!(chamber_of(x0).unwrap(), GroupElement::identity());
        for q in GroupElement::all() {
            assert_eq!(chamber_of(q.act_f64(x0)).unwrap(), q);
        }
    }

    #[test]
    fn boundary_set_coset_decomposition() {
        let bp = boundary_set_plus();
        assert!(bp.contains(&GroupElement::identity()));
        let w = GroupElement::w();
        let translate: Vec<_> = bp.iter().map(|q| *q * w).collect();
        for q in bp.iter() {
            assert!(!translate.contains(q));
        }
        let mut union: Vec<_> = bp.iter().copied().chain(translate.iter().copied()).collect();
        union.sort();
        union.dedup();
        assert_eq!(union.len(), 12);
        assert!(translate.contains(&e("RT")));
    }

    #[test]
    fn circle_cut_example() {
        let cfg = circle_cut([0.9, 1.1, 1.9], 1.0).unwrap();
        assert_eq!(cfg.lone_particle(), 2);
        let expect = [0.9, 1.1, 1.9];
        for (x, ex) in cfg.interval().iter().zip(expect.iter()) {
            assert!((x - ex).abs() < 1e-12);
        }
        assert_eq!(cfg.chamber(), GroupElement::t());
    }

    #[test]
    fn circle_cut_rejects_equally_spaced() {
        let err = circle_cut([0.0, 2.0 / 3.0, 4.0 / 3.0], 1.0).unwrap_err();
        assert_eq!(
            err,
            WeylError::DegenerateConfiguration("particles are equally spaced")
        );
    }

    #[test]
    fn circle_cut_rejects_coincident() {
        assert!(matches!(
            circle_cut([0.3, 0.3, 1.0], 1.0),
            Err(WeylError::DegenerateConfiguration("two particles coincide"))
        ));
    }

    #[test]
    fn circle_cut_pair_stays_away_from_endpoints() {
        let cfg = circle_cut([0.9, 1.1, 1.9], 1.0).unwrap();
        let lone = cfg.lone_particle();
        let two_l = 2.0 * cfg.l();
        for (i, &x) in cfg.interval().iter().enumerate() {
            if i != lone {
                assert!(x >= two_l / 3.0 - 1e-12);
                assert!(two_l - x >= two_l / 3.0 - 1e-12);
            }
        }
    }

    #[test]
    fn lone_particle_max_coordinate_matches_boundary_set() {
        // In the cut interval the lone particle has the largest coordinate
        // exactly for the chambers whose configurations reach the right
        // endpoint.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let bp = boundary_set_plus();
        let mut seen = std::collections::HashSet::new();
        for _ in 0..4000 {
            let theta = [
                rng.random_range(0.0..2.0),
                rng.random_range(0.0..2.0),
                rng.random_range(0.0..2.0),
            ];
            let Ok(cfg) = circle_cut(theta, 1.0) else {
                continue;
            };
            let lone = cfg.lone_particle();
            let max_idx = (0..3)
                .max_by(|&a, &b| cfg.interval()[a].total_cmp(&cfg.interval()[b]))
                .unwrap();
            let min_idx = (0..3)
                .min_by(|&a, &b| cfg.interval()[a].total_cmp(&cfg.interval()[b]))
                .unwrap();
            if bp.contains(&cfg.chamber()) {
                assert_eq!(lone, max_idx);
            } else {
                assert_eq!(lone, min_idx);
            }
            seen.insert(cfg.chamber().index());
        }
        assert_eq!(seen.len(), 12, "sweep should visit every chamber");
    }

    #[test]
    fn chamber_condition_forms_agree_at_ten_thousand_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10_000 {
            let x: [f64; 3] = std::array::from_fn(|_| rng.random_range(-10.0..10.0));
            for q in GroupElement::all() {
                let y = q.inverse().act_f64(x);
                let first = 0.0 < y[0] - y[1] && y[0] - y[1] < y[2] - y[0];
                let second = y[1] < y[0] && y[0] < 0.5 * (y[1] + y[2]);
                assert_eq!(first, second);
            }
        }
    }

    proptest! {

        #[test]
        fn action_fixes_center_of_mass_direction(
            x in prop::array::uniform3(-10.0f64..10.0),
            qi in 0usize..12,
        ) {
            let q = GroupElement::from_index(qi).unwrap();
            let y = q.act_f64(x);
            prop_assert!(((y[0] + y[1] + y[2]) - (x[0] + x[1] + x[2])).abs() < 1e-9);
        }

        #[test]
        fn action_is_orthogonal(
            x in prop::array::uniform3(-10.0f64..10.0),
            qi in 0usize..12,
        ) {
            let q = GroupElement::from_index(qi).unwrap();
            let y = q.act_f64(x);
            let n2 = |v: [f64; 3]| v.iter().map(|c| c * c).sum::<f64>();
            prop_assert!((n2(y) - n2(x)).abs() < 1e-9 * (1.0 + n2(x)));
        }

        #[test]
        fn circle_cut_is_rotation_covariant(
            shift in 0.0f64..2.0,
            seed in 0u64..5000,
        ) {
            let s = seed as f64 * 0.618_033_988_749_894_8;
            let theta = [
                (s * 7.0).rem_euclid(2.0),
                (s * 11.0 + 0.37).rem_euclid(2.0),
                (s * 13.0 + 1.11).rem_euclid(2.0),
            ];
            let rotated = std::array::from_fn(|i| (theta[i] + shift).rem_euclid(2.0));
            if let (Ok(a), Ok(b)) = (circle_cut(theta, 1.0), circle_cut(rotated, 1.0)) {
                prop_assert_eq!(a.chamber(), b.chamber());
                for (x, y) in a.interval().iter().zip(b.interval().iter()) {
                    prop_assert!((x - y).abs() < 1e-9);
                }
            }
        }
    }
}
