//! The twelve-dimensional coefficient space and the scattering operators
//! acting on it.
//!
//! Coefficient vectors are indexed by the canonical group enumeration.  The
//! right-translation operators `ĝ` realize the group on that space, and two
//! distinct operator families are built from them:
//!
//! - `B(κ) = (κ·R̂ + i·g_l) / (κ − i·g_l)` and
//!   `Y(κ) = (κ·T̂ + i·g_s) / (κ − i·g_s)`, where the momentum pairing
//!   multiplies the group generator; these drive the propagation recursion
//!   `A_{PR} = B(⟨k_P, α₂⟩) A_P`, `A_{PT} = Y(⟨k_P, α₁⟩) A_P`.
//! - `Z_α(k) = (⟨k,α⟩ + i·g·ŝ_α) / (⟨k,α⟩ − i·g)`, where the coupling
//!   multiplies the generator; specialized to short roots these are the
//!   pair-collision operators `S_ij`, to long roots the midpoint-collision
//!   operators `K_ij^k`.
//!
//! The two conventions are never interchanged silently.  The identity
//! catalogue ([`Identity`], [`check_identity`]) certifies the consistency
//! relations between them at exact rational sample points.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::scalar::{Exact, Scalar};
use crate::weyl::{reflection, GroupElement, Gen, Root, ALPHA_0, ALPHA_1, ALPHA_2};

/// Errors from operator construction and linear algebra.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperatorError {
    /// A scalar denominator `⟨k,α⟩ − i·g` (or `κ − i·g`) vanished.
    #[error("zero denominator in operator fraction")]
    ZeroDenominator,
    #[error("singular operator matrix")]
    Singular,
}

/// A momentum vector with components in the scalar backend `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct Momentum<S> {
    components: [S; 3],
}

impl<S: Scalar> Momentum<S> {
    pub fn new(components: [S; 3]) -> Self {
        Momentum { components }
    }

    pub fn components(&self) -> &[S; 3] {
        &self.components
    }

    pub fn negated(&self) -> Self {
        Momentum {
            components: std::array::from_fn(|i| -self.components[i].clone()),
        }
    }

    /// `⟨k, α⟩`.
    pub fn pairing(&self, alpha: &Root) -> S {
        let mut acc = S::zero();
        for (c, k) in alpha.components().iter().zip(self.components.iter()) {
            acc = acc + S::from_ratio(*c, 1) * k.clone();
        }
        acc
    }

    /// `⟨k_P, α⟩ = ⟨P⁻¹k, α⟩ = ⟨k, Pα⟩`, with `k_P = P⁻¹(k)`.
    pub fn pairing_translated(&self, p: GroupElement, alpha: &Root) -> S {
        self.pairing(&p.act_root(alpha))
    }
}

impl Momentum<Complex64> {
    pub fn from_real(k: [f64; 3]) -> Self {
        Momentum {
            components: k.map(|x| Complex64::new(x, 0.0)),
        }
    }
}

impl Momentum<Exact> {
    pub fn from_rationals(k: [BigRational; 3]) -> Self {
        Momentum {
            components: k.map(Exact::from_big_rational),
        }
    }
}

/// Interaction strengths: `gs` on short-root hyperplanes (pair collisions),
/// `gl` on long-root hyperplanes (particle–midpoint collisions).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Coupling<S> {
    pub gs: S,
    pub gl: S,
}

impl<S: Scalar> Coupling<S> {
    pub fn for_root(&self, alpha: &Root) -> &S {
        if alpha.is_long() {
            &self.gl
        } else {
            &self.gs
        }
    }
}

impl Coupling<f64> {
    pub fn new(gs: f64, gl: f64) -> Self {
        Coupling { gs, gl }
    }

    pub fn free() -> Self {
        Coupling { gs: 0.0, gl: 0.0 }
    }

    pub fn is_free(&self) -> bool {
        self.gs == 0.0 && self.gl == 0.0
    }

    pub fn lift(&self) -> Coupling<Complex64> {
        Coupling {
            gs: Complex64::new(self.gs, 0.0),
            gl: Complex64::new(self.gl, 0.0),
        }
    }

    pub fn scaled(&self, t: f64) -> Self {
        Coupling {
            gs: self.gs * t,
            gl: self.gl * t,
        }
    }
}

/// A function from the group to scalars; houses the Bethe coefficients
/// `A_P(·)` for a fixed `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVector<S> {
    entries: [S; 12],
}

impl<S: Scalar> CoeffVector<S> {
    pub fn from_fn(f: impl FnMut(GroupElement) -> S) -> Self {
        let mut f = f;
        CoeffVector {
            entries: std::array::from_fn(|i| f(GroupElement::from_index(i).unwrap())),
        }
    }

    pub fn zero() -> Self {
        CoeffVector::from_fn(|_| S::zero())
    }

    /// The delta function supported on the identity element.
    pub fn delta_identity() -> Self {
        CoeffVector::from_fn(|q| {
            if q == GroupElement::identity() {
                S::one()
            } else {
                S::zero()
            }
        })
    }

    pub fn get(&self, q: GroupElement) -> &S {
        &self.entries[q.index()]
    }

    pub fn entries(&self) -> &[S; 12] {
        &self.entries
    }

    pub fn set(&mut self, q: GroupElement, value: S) {
        self.entries[q.index()] = value;
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn sub(&self, other: &Self) -> Self {
        CoeffVector {
            entries: std::array::from_fn(|i| {
                self.entries[i].clone() - other.entries[i].clone()
            }),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        CoeffVector {
            entries: std::array::from_fn(|i| self.entries[i].clone() * s.clone()),
        }
    }
}

impl CoeffVector<Complex64> {
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// A 12×12 operator over the scalar backend `S`, rows and columns indexed
/// by the canonical group enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupOperator<S> {
    m: Vec<S>,
}

impl<S: Scalar> GroupOperator<S> {
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Vec::with_capacity(144);
        for row in 0..12 {
            for col in 0..12 {
                m.push(f(row, col));
            }
        }
        GroupOperator { m }
    }

    pub fn identity() -> Self {
        GroupOperator::from_fn(|r, c| if r == c { S::one() } else { S::zero() })
    }

    pub fn zero() -> Self {
        GroupOperator::from_fn(|_, _| S::zero())
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.m[row * 12 + col]
    }

    pub fn scale(&self, s: &S) -> Self {
        GroupOperator {
            m: self
                .m
                .iter()
                .map(|e| {
                    if e.is_zero() {
                        S::zero()
                    } else {
                        e.clone() * s.clone()
                    }
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        GroupOperator {
            m: self
                .m
                .iter()
                .zip(other.m.iter())
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GroupOperator {
            m: self
                .m
                .iter()
                .zip(other.m.iter())
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        // Group-algebra products are sparse until the chains fill in;
        // skipping exact zeros saves most of the big-rational work.
        GroupOperator::from_fn(|r, c| {
            let mut acc = S::zero();
            for k in 0..12 {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                let b = other.get(k, c);
                if b.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * b.clone();
            }
            acc
        })
    }

    pub fn apply(&self, v: &CoeffVector<S>) -> CoeffVector<S> {
        CoeffVector::from_fn(|q| {
            let r = q.index();
            let mut acc = S::zero();
            for k in 0..12 {
                let a = self.get(r, k);
                if a.is_zero() || v.entries()[k].is_zero() {
                    continue;
                }
                acc = acc + a.clone() * v.entries()[k].clone();
            }
            acc
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.m
            .iter()
            .zip(other.m.iter())
            .all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|e| e.is_zero())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Trace of the operator.
    pub fn trace(&self) -> S {
        let mut acc = S::zero();
        for i in 0..12 {
            acc = acc + self.get(i, i).clone();
        }
        acc
    }

    /// Gauss–Jordan inverse; pivots are chosen by float magnitude, which is
    /// exact-safe because only nonzero entries are eligible.
    pub fn inverse(&self) -> Result<Self, OperatorError> {
        let mut a = self.clone();
        let mut inv = GroupOperator::<S>::identity();
        for col in 0..12 {
            let pivot_row = (col..12)
                .filter(|&r| !a.get(r, col).is_zero())
                .max_by(|&r1, &r2| {
                    a.get(r1, col)
                        .to_complex_f64()
                        .norm()
                        .total_cmp(&a.get(r2, col).to_complex_f64().norm())
                })
                .ok_or(OperatorError::Singular)?;
            if pivot_row != col {
                for j in 0..12 {
                    a.m.swap(col * 12 + j, pivot_row * 12 + j);
                    inv.m.swap(col * 12 + j, pivot_row * 12 + j);
                }
            }
            let pivot_inv = a
                .get(col, col)
                .try_inv()
                .map_err(|_| OperatorError::Singular)?;
            for j in 0..12 {
                a.m[col * 12 + j] = a.m[col * 12 + j].clone() * pivot_inv.clone();
                inv.m[col * 12 + j] = inv.m[col * 12 + j].clone() * pivot_inv.clone();
            }
            for r in 0..12 {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..12 {
                    a.m[r * 12 + j] =
                        a.m[r * 12 + j].clone() - factor.clone() * a.m[col * 12 + j].clone();
                    inv.m[r * 12 + j] =
                        inv.m[r * 12 + j].clone() - factor.clone() * inv.m[col * 12 + j].clone();
                }
            }
        }
        Ok(inv)
    }
}

impl<S: Scalar> std::ops::Mul for &GroupOperator<S> {
    type Output = GroupOperator<S>;

    fn mul(self, rhs: &GroupOperator<S>) -> GroupOperator<S> {
        self.matmul(rhs)
    }
}

/// The right-translation realization `(ĝ f)(Q) = f(Q·g)`; a permutation
/// matrix, and `g ↦ ĝ` is a homomorphism.
pub fn regular_rep<S: Scalar>(g: GroupElement) -> GroupOperator<S> {
    GroupOperator::from_fn(|row, col| {
        let q = GroupElement::from_index(row).unwrap();
        if (q * g).index() == col {
            S::one()
        } else {
            S::zero()
        }
    })
}

fn fraction<S: Scalar>(
    numerator: GroupOperator<S>,
    denominator: S,
) -> Result<GroupOperator<S>, OperatorError> {
    let inv = denominator
        .try_inv()
        .map_err(|_| OperatorError::ZeroDenominator)?;
    Ok(numerator.scale(&inv))
}

/// `B(κ) = (κ·R̂ + i·g_l) / (κ − i·g_l)` — the long-root step operator of
/// the propagation recursion.
pub fn op_b<S: Scalar>(kappa: S, gl: S) -> Result<GroupOperator<S>, OperatorError> {
    let num = regular_rep::<S>(GroupElement::r())
        .scale(&kappa)
        .add(&GroupOperator::identity().scale(&(S::i() * gl.clone())));
    fraction(num, kappa - S::i() * gl)
}

/// `Y(κ) = (κ·T̂ + i·g_s) / (κ − i·g_s)` — the short-root step operator.
pub fn op_y<S: Scalar>(kappa: S, gs: S) -> Result<GroupOperator<S>, OperatorError> {
    let num = regular_rep::<S>(GroupElement::t())
        .scale(&kappa)
        .add(&GroupOperator::identity().scale(&(S::i() * gs.clone())));
    fraction(num, kappa - S::i() * gs)
}

/// `Z_α(k) = (⟨k,α⟩ + i·g·ŝ_α) / (⟨k,α⟩ − i·g)` with `g` the coupling for
/// the length of `α`; the identity when that coupling vanishes.  Satisfies
/// `Z_α(k)⁻¹ = Z_α(−k)`.
pub fn op_z<S: Scalar>(
    alpha: &Root,
    k: &Momentum<S>,
    c: &Coupling<S>,
) -> Result<GroupOperator<S>, OperatorError> {
    let g = c.for_root(alpha).clone();
    if g.is_zero() {
        return Ok(GroupOperator::identity());
    }
    let a = k.pairing(alpha);
    let s_hat = regular_rep::<S>(reflection(alpha).expect("valid root"));
    let num = GroupOperator::identity()
        .scale(&a)
        .add(&s_hat.scale(&(S::i() * g.clone())));
    fraction(num, a - S::i() * g)
}

/// The short root `ε_i − ε_j` (1-based indices).
pub fn short_root(i: usize, j: usize) -> Root {
    assert!(i != j && (1..=3).contains(&i) && (1..=3).contains(&j));
    let mut c = [0i64; 3];
    c[i - 1] = 1;
    c[j - 1] = -1;
    Root::new(c).unwrap()
}

/// The long root `ε_i + ε_j − 2ε_k` (1-based indices, all distinct).
pub fn long_root(i: usize, j: usize, k: usize) -> Root {
    assert!(i != j && j != k && i != k);
    let mut c = [0i64; 3];
    c[i - 1] = 1;
    c[j - 1] = 1;
    c[k - 1] = -2;
    Root::new(c).unwrap()
}

/// `S_ij = Z_{ε_i−ε_j}(k)`; the pair-collision operator.  `S_ji` is its
/// inverse.
pub fn op_s<S: Scalar>(
    i: usize,
    j: usize,
    k: &Momentum<S>,
    c: &Coupling<S>,
) -> Result<GroupOperator<S>, OperatorError> {
    op_z(&short_root(i, j), k, c)
}

/// `K_ij^t = Z_{ε_i+ε_j−2ε_t}(k)`; the midpoint-collision operator.
pub fn op_k<S: Scalar>(
    i: usize,
    j: usize,
    t: usize,
    k: &Momentum<S>,
    c: &Coupling<S>,
) -> Result<GroupOperator<S>, OperatorError> {
    op_z(&long_root(i, j, t), k, c)
}

/// The coefficient-propagation operators `C_P` with `A_P = C_P A_I`,
/// accumulated along the canonical reduced words using
/// `A_{PR} = B(⟨k_P, α₂⟩) A_P` and `A_{PT} = Y(⟨k_P, α₁⟩) A_P`.
///
/// Word-independence of the result is a consequence of the unitarity and
/// six-factor consistency relations, certified separately.
pub fn propagate_operators<S: Scalar>(
    k: &Momentum<S>,
    c: &Coupling<S>,
) -> Result<[GroupOperator<S>; 12], OperatorError> {
    let mut ops: Vec<Option<GroupOperator<S>>> = vec![None; 12];
    ops[0] = Some(GroupOperator::identity());
    // The canonical enumeration is ordered by word length, and every prefix
    // of a canonical word is canonical, so a single pass suffices.
    for g in GroupElement::all().into_iter().skip(1) {
        let word = g.word();
        let last = *word.last().unwrap();
        let prefix = g * letter_element(last);
        let step = step_operator(prefix, last, k, c)?;
        let prev = ops[prefix.index()].as_ref().expect("prefix already built");
        ops[g.index()] = Some(step.matmul(prev));
    }
    Ok(std::array::from_fn(|i| ops[i].take().unwrap()))
}

fn letter_element(letter: Gen) -> GroupElement {
    match letter {
        Gen::T => GroupElement::t(),
        Gen::R => GroupElement::r(),
    }
}

fn step_operator<S: Scalar>(
    p: GroupElement,
    letter: Gen,
    k: &Momentum<S>,
    c: &Coupling<S>,
) -> Result<GroupOperator<S>, OperatorError> {
    match letter {
        Gen::R => op_b(k.pairing_translated(p, &ALPHA_2), c.gl.clone()),
        Gen::T => op_y(k.pairing_translated(p, &ALPHA_1), c.gs.clone()),
    }
}

/// Walks an arbitrary word from the identity, returning the endpoint and
/// the accumulated propagation operator.  Used to compare alternative
/// reduced words.
pub fn propagate_via_word<S: Scalar>(
    word: &[Gen],
    k: &Momentum<S>,
    c: &Coupling<S>,
) -> Result<(GroupElement, GroupOperator<S>), OperatorError> {
    let mut cur = GroupElement::identity();
    let mut acc = GroupOperator::identity();
    for &letter in word {
        acc = step_operator(cur, letter, k, c)?.matmul(&acc);
        cur = cur * letter_element(letter);
    }
    Ok((cur, acc))
}

/// The full coefficient family `P ↦ A_P` grown from `A_I`.
pub fn propagate<S: Scalar>(
    a_i: &CoeffVector<S>,
    k: &Momentum<S>,
    c: &Coupling<S>,
) -> Result<[CoeffVector<S>; 12], OperatorError> {
    let ops = propagate_operators(k, c)?;
    Ok(std::array::from_fn(|i| ops[i].apply(a_i)))
}

/// A sample point for the exact identity checks.
#[derive(Clone, Debug)]
pub struct ScatteringSample<S> {
    pub k: Momentum<S>,
    pub couplings: Coupling<S>,
}

/// The catalogue of operator identities certified at sample points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `B(κ) B(−κ) = 1`.
    UnitB,
    /// `Y(κ) Y(−κ) = 1`.
    UnitY,
    /// The six-factor alternating `B`/`Y` consistency relation.
    Gybe,
    /// `S₁₂ K₁₂³ = K₁₂³ S₁₂`.
    SkCommute,
    /// `K₁₂³ (K₁₃²)⁻¹ K₂₃¹ = K₂₃¹ (K₁₃²)⁻¹ K₁₂³`.
    KTriple,
    /// The six-factor `S`/`K` consistency relation.
    Gybe2,
    /// `Y(⟨k_{PW},α₁⟩)(⟨k_P,α₀⟩Ŵ + i g_l) = (⟨k_{PT},α₀⟩Ŵ + i g_l)Y(⟨k_{PW},α₁⟩)`
    /// for every `P`; underpins the redundancy of the boundary relations
    /// under `P → PT`.
    WCovariance,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::UnitB,
        Identity::UnitY,
        Identity::Gybe,
        Identity::SkCommute,
        Identity::KTriple,
        Identity::Gybe2,
        Identity::WCovariance,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::UnitB => "UNIT_B",
            Identity::UnitY => "UNIT_Y",
            Identity::Gybe => "GYBE",
            Identity::SkCommute => "SK_COMMUTE",
            Identity::KTriple => "K_TRIPLE",
            Identity::Gybe2 => "GYBE2",
            Identity::WCovariance => "W_COVARIANCE",
        }
    }
}

fn gybe_side<S: Scalar>(
    args: &[(bool, S)],
    sample: &ScatteringSample<S>,
    corrupt_b: bool,
) -> Result<GroupOperator<S>, OperatorError> {
    // true = Y factor, false = B factor; factors listed left to right.
    let gs = &sample.couplings.gs;
    let gl = &sample.couplings.gl;
    let mut acc = GroupOperator::identity();
    for (is_y, kappa) in args {
        let f = if *is_y {
            op_y(kappa.clone(), gs.clone())?
        } else if corrupt_b {
            // Negative control: B factors with the short coupling in place
            // of the long one.  The relation holds for any fixed coupling
            // pair, so the corrupted family is checked against the correct
            // one; see `check_gybe_corrupted`.
            op_b(kappa.clone(), gs.clone())?
        } else {
            op_b(kappa.clone(), gl.clone())?
        };
        acc = acc.matmul(&f);
    }
    Ok(acc)
}

fn gybe_holds<S: Scalar>(
    sample: &ScatteringSample<S>,
    corrupt_b: bool,
    tol: f64,
) -> Result<bool, OperatorError> {
    let kc = sample.k.components();
    let (k1, k2, k3) = (kc[0].clone(), kc[1].clone(), kc[2].clone());
    let two = S::from_ratio(2, 1);
    let args = [
        (true, k1.clone() - k2.clone()),
        (false, two.clone() * k1.clone() - k2.clone() - k3.clone()),
        (true, k1.clone() - k3.clone()),
        (false, k1.clone() + k2.clone() - two.clone() * k3.clone()),
        (true, k2.clone() - k3.clone()),
        (false, two * k2.clone() - k1.clone() - k3.clone()),
    ];
    let mirrored: Vec<_> = args.iter().rev().cloned().collect();
    let lhs = gybe_side(&args, sample, corrupt_b)?;
    let rhs = gybe_side(&mirrored, sample, false)?;
    Ok(lhs.approx_eq(&rhs, tol))
}

/// Checks one identity at one sample; `true` means the operator equality
/// holds (exactly, on the exact backend).
pub fn check_identity<S: Scalar>(
    id: Identity,
    sample: &ScatteringSample<S>,
) -> Result<bool, OperatorError> {
    check_identity_tol(id, sample, crate::scalar::FLOAT_TOL)
}

pub fn check_identity_tol<S: Scalar>(
    id: Identity,
    sample: &ScatteringSample<S>,
    tol: f64,
) -> Result<bool, OperatorError> {
    let k = &sample.k;
    let c = &sample.couplings;
    let id_op = GroupOperator::<S>::identity();
    match id {
        Identity::UnitB => {
            let kappa = k.pairing(&ALPHA_2);
            let prod = op_b(kappa.clone(), c.gl.clone())?.matmul(&op_b(-kappa, c.gl.clone())?);
            Ok(prod.approx_eq(&id_op, tol))
        }
        Identity::UnitY => {
            let kappa = k.pairing(&ALPHA_1);
            let prod = op_y(kappa.clone(), c.gs.clone())?.matmul(&op_y(-kappa, c.gs.clone())?);
            Ok(prod.approx_eq(&id_op, tol))
        }
        Identity::Gybe => gybe_holds(sample, false, tol),
        Identity::SkCommute => {
            let s12 = op_s(1, 2, k, c)?;
            let k12_3 = op_k(1, 2, 3, k, c)?;
            Ok(s12.commutator(&k12_3).approx_eq(&GroupOperator::zero(), tol))
        }
        Identity::KTriple => {
            let k12_3 = op_k(1, 2, 3, k, c)?;
            let k23_1 = op_k(2, 3, 1, k, c)?;
            let k13_2_inv = op_z(&long_root(1, 3, 2).negated(), k, c)?;
            let lhs = k12_3.matmul(&k13_2_inv).matmul(&k23_1);
            let rhs = k23_1.matmul(&k13_2_inv).matmul(&k12_3);
            Ok(lhs.approx_eq(&rhs, tol))
        }
        Identity::Gybe2 => {
            let factors = [
                short_root(1, 2),
                long_root(2, 3, 1),
                short_root(1, 3),
                long_root(1, 2, 3).negated(),
                short_root(2, 3),
                long_root(1, 3, 2),
            ];
            let mut lhs = GroupOperator::identity();
            for alpha in factors.iter() {
                lhs = lhs.matmul(&op_z(alpha, k, c)?);
            }
            let mut rhs = GroupOperator::identity();
            for alpha in factors.iter().rev() {
                rhs = rhs.matmul(&op_z(alpha, k, c)?);
            }
            Ok(lhs.approx_eq(&rhs, tol))
        }
        Identity::WCovariance => {
            let w = GroupElement::w();
            let w_hat = regular_rep::<S>(w);
            for p in GroupElement::all() {
                let y = op_y(k.pairing_translated(p * w, &ALPHA_1), c.gs.clone())?;
                let lhs_mid = w_hat
                    .scale(&k.pairing_translated(p, &ALPHA_0))
                    .add(&id_op.scale(&(S::i() * c.gl.clone())));
                let rhs_mid = w_hat
                    .scale(&k.pairing_translated(p * GroupElement::t(), &ALPHA_0))
                    .add(&id_op.scale(&(S::i() * c.gl.clone())));
                if !y.matmul(&lhs_mid).approx_eq(&rhs_mid.matmul(&y), tol) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Negative control: one side of the six-factor `B`/`Y` relation rebuilt
/// with the couplings swapped inside only the `B` factors, compared against
/// the correct side.  The relation holds for any fixed coupling pair, so a
/// both-sides swap would be just another true instance; pitting the
/// corrupted family against the reference one is what makes the detector
/// non-vacuous.  Fails at generic samples with `g_s ≠ g_l`.
pub fn check_gybe_corrupted<S: Scalar>(
    sample: &ScatteringSample<S>,
) -> Result<bool, OperatorError> {
    gybe_holds(sample, true, crate::scalar::FLOAT_TOL)
}
