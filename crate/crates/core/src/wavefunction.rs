//! Pointwise assembly of the Bethe eigenfunction and verification of its
//! defining properties.
//!
//! In the chamber labeled `Q` the eigenfunction is
//!
//! ```text
//! φ_Q(x) = Σ_P exp(i⟨k_P, x_Q⟩) A_P(Q),    x_Q = Q⁻¹(x), k_P = P⁻¹(k),
//! ```
//!
//! a finite sum of plane waves, so values, gradients, and Laplacians are
//! all evaluated in closed form.  [`check_boundary`] samples points on a
//! reflection hyperplane and verifies continuity together with the
//! derivative jump `⟨α,∇⟩φ|₊ − ⟨α,∇⟩φ|₋ = 2 g_{⟨α,α⟩} φ`;
//! [`verify_energy`] checks `−Δφ = E φ` with `E = Σ k_i²`;
//! [`check_circle_matching`] verifies the value and derivative matching
//! at the circle cut for a converged Bethe solution.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bethe::BetheSolution;
use crate::operators::{propagate_operators, CoeffVector, Coupling, Momentum, OperatorError};
use crate::par;
use crate::weyl::{self, boundary_set_plus, chamber_of, reflection, GroupElement, Root, WeylError};

/// Errors from wavefunction construction and evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WaveError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    /// The propagated coefficients fail a step relation; the data does not
    /// define an eigenfunction.
    #[error("coefficient family violates the step relations (residual {residual:.3e})")]
    InconsistentCoefficients { residual: f64 },
}

/// A momentum with its full coefficient family `P ↦ A_P`, ready for
/// pointwise evaluation.
#[derive(Clone, Debug)]
pub struct WaveData {
    k: [f64; 3],
    couplings: Coupling<f64>,
    /// `A_P` for each `P`, indexed by the canonical enumeration.
    coeffs: [CoeffVector<Complex64>; 12],
    /// `k_P = P⁻¹(k)` for each `P`.
    k_translated: [[f64; 3]; 12],
}

impl WaveData {
    /// Grows the coefficient family from `A_I` and validates every step
    /// relation `A_{PT} = Y(⟨k_P,α₁⟩)A_P`, `A_{PR} = B(⟨k_P,α₂⟩)A_P`.
    pub fn from_initial(
        k: [f64; 3],
        a_i: &CoeffVector<Complex64>,
        couplings: Coupling<f64>,
    ) -> Result<Self, WaveError> {
        let mom = Momentum::from_real(k);
        let lifted = couplings.lift();
        let ops = propagate_operators(&mom, &lifted)?;
        let coeffs: [CoeffVector<Complex64>; 12] = std::array::from_fn(|i| ops[i].apply(a_i));

        let scale = coeffs.iter().map(|v| v.norm()).fold(1.0f64, f64::max);
        let mut worst = 0.0f64;
        for p in GroupElement::all() {
            for letter in [GroupElement::t(), GroupElement::r()] {
                let step = if letter == GroupElement::t() {
                    crate::operators::op_y(
                        mom.pairing_translated(p, &weyl::ALPHA_1),
                        lifted.gs,
                    )?
                } else {
                    crate::operators::op_b(
                        mom.pairing_translated(p, &weyl::ALPHA_2),
                        lifted.gl,
                    )?
                };
                let expected = step.apply(&coeffs[p.index()]);
                let diff = expected.sub(&coeffs[(p * letter).index()]);
                worst = worst.max(diff.norm());
            }
        }
        if worst > 1e-9 * scale {
            return Err(WaveError::InconsistentCoefficients { residual: worst });
        }

        let k_translated =
            std::array::from_fn(|i| GroupElement::from_index(i).unwrap().inverse().act_f64(k));
        Ok(WaveData {
            k,
            couplings,
            coeffs,
            k_translated,
        })
    }

    /// Wavefunction data of a converged circle solution.
    pub fn from_solution(sol: &BetheSolution) -> Result<Self, WaveError> {
        WaveData::from_initial(sol.k, &sol.coeff_vector(), sol.couplings)
    }

    pub fn k(&self) -> [f64; 3] {
        self.k
    }

    pub fn couplings(&self) -> Coupling<f64> {
        self.couplings
    }

    pub fn energy(&self) -> f64 {
        crate::bethe::energy(self.k)
    }

    pub fn coeff(&self, p: GroupElement) -> &CoeffVector<Complex64> {
        &self.coeffs[p.index()]
    }

    /// Overwrites one coefficient entry; the deliberate-corruption hook
    /// for negative controls.
    pub fn corrupt_entry(&mut self, p: GroupElement, q: GroupElement, delta: Complex64) {
        let old = *self.coeffs[p.index()].get(q);
        self.coeffs[p.index()].set(q, old + delta);
    }

    /// Value at a generic point; the chamber is resolved automatically and
    /// points on a hyperplane are rejected (use the chamber-restricted
    /// evaluators for one-sided limits).
    pub fn eval(&self, x: [f64; 3]) -> Result<Complex64, WeylError> {
        Ok(self.eval_in_chamber(chamber_of(x)?, x))
    }

    /// The plane-wave sum of chamber `q`, evaluated at `x` (which may lie
    /// on the chamber's closure).
    pub fn eval_in_chamber(&self, q: GroupElement, x: [f64; 3]) -> Complex64 {
        let y = q.inverse().act_f64(x);
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..12 {
            let phase = dot(self.k_translated[p], y);
            acc += Complex64::new(0.0, phase).exp() * self.coeffs[p].get(q);
        }
        acc
    }

    /// Directional derivative `⟨v, ∇⟩φ` in chamber `q`, in closed form.
    pub fn derivative_in_chamber(&self, q: GroupElement, x: [f64; 3], v: [f64; 3]) -> Complex64 {
        let q_inv = q.inverse();
        let y = q_inv.act_f64(x);
        let w = q_inv.act_f64(v);
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..12 {
            let phase = dot(self.k_translated[p], y);
            let slope = dot(self.k_translated[p], w);
            acc += Complex64::new(0.0, slope)
                * Complex64::new(0.0, phase).exp()
                * self.coeffs[p].get(q);
        }
        acc
    }

    /// `−Δφ` in chamber `q`; each plane wave contributes `|k_P|²`.
    pub fn neg_laplacian_in_chamber(&self, q: GroupElement, x: [f64; 3]) -> Complex64 {
        let y = q.inverse().act_f64(x);
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..12 {
            let kp = self.k_translated[p];
            let phase = dot(kp, y);
            let ksq: f64 = kp.iter().map(|c| c * c).sum();
            acc += ksq * Complex64::new(0.0, phase).exp() * self.coeffs[p].get(q);
        }
        acc
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = dot(v, v).sqrt();
    v.map(|c| c / n)
}

/// Draws a point on the hyperplane of `alpha`, safely away from every
/// other hyperplane.  The direction `(1,1,1)` lies in every hyperplane, so
/// the plane is spanned by it and one cross product.
fn sample_on_hyperplane(alpha: &Root, rng: &mut ChaCha8Rng) -> [f64; 3] {
    let n_hat = normalize([1.0, 1.0, 1.0]);
    let a_f64 = alpha.components().map(|c| c as f64);
    let w_hat = normalize(cross(a_f64, [1.0, 1.0, 1.0]));
    loop {
        let u: f64 = rng.random_range(-2.5..2.5);
        let v: f64 = rng.random_range(-2.5..2.5);
        if v.abs() < 0.08 {
            continue;
        }
        let p = std::array::from_fn(|i| u * n_hat[i] + v * w_hat[i]);
        let clear = weyl::roots().iter().all(|beta| {
            *beta == *alpha || *beta == alpha.negated() || beta.dot_f64(p).abs() > 0.05
        });
        if clear {
            return p;
        }
    }
}

/// Residuals of the two matching conditions on one hyperplane.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryReport {
    pub alpha: Root,
    /// max |φ₊ − φ₋| over the sampled points.
    pub continuity_max: f64,
    /// max |⟨α,∇⟩φ₊ − ⟨α,∇⟩φ₋ − 2gφ₋| over the sampled points.
    pub jump_max: f64,
    /// max |φ₋| over the sampled points, for scale.
    pub scale: f64,
    pub points: usize,
}

/// Samples `n_points` on the hyperplane of `alpha` and evaluates both
/// one-sided limits exactly (chamber-restricted plane-wave sums).
pub fn check_boundary(
    data: &WaveData,
    alpha: &Root,
    n_points: usize,
    seed: u64,
) -> Result<BoundaryReport, WaveError> {
    let s_alpha = reflection(alpha)?;
    let g = if alpha.is_long() {
        data.couplings.gl
    } else {
        data.couplings.gs
    };
    let a_f64 = alpha.components().map(|c| c as f64);
    let a_hat = normalize(a_f64);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<[f64; 3]> = (0..n_points)
        .map(|_| sample_on_hyperplane(alpha, &mut rng))
        .collect();

    let per_point = par::map_indexed(points.len(), |i| {
        let p = points[i];
        let delta = 1e-6;
        let plus_probe: [f64; 3] = std::array::from_fn(|j| p[j] + delta * a_hat[j]);
        let minus_probe: [f64; 3] = std::array::from_fn(|j| p[j] - delta * a_hat[j]);
        let q_plus = chamber_of(plus_probe)?;
        let q_minus = chamber_of(minus_probe)?;
        // Adjacent chambers across the wall are swapped by the reflection.
        if s_alpha * q_minus != q_plus {
            return Err(WaveError::Weyl(WeylError::DegenerateConfiguration(
                "probe points crossed more than one wall",
            )));
        }
        let phi_plus = data.eval_in_chamber(q_plus, p);
        let phi_minus = data.eval_in_chamber(q_minus, p);
        let d_plus = data.derivative_in_chamber(q_plus, p, a_f64);
        let d_minus = data.derivative_in_chamber(q_minus, p, a_f64);
        let continuity = (phi_plus - phi_minus).norm();
        let jump = (d_plus - d_minus - 2.0 * g * phi_minus).norm();
        Ok((continuity, jump, phi_minus.norm()))
    });

    let mut report = BoundaryReport {
        alpha: *alpha,
        continuity_max: 0.0,
        jump_max: 0.0,
        scale: 0.0,
        points: n_points,
    };
    for r in per_point {
        let (c, j, s) = r?;
        report.continuity_max = report.continuity_max.max(c);
        report.jump_max = report.jump_max.max(j);
        report.scale = report.scale.max(s);
    }
    Ok(report)
}

/// Pointwise check of `−Δφ = Eφ` at random generic points.
#[derive(Clone, Copy, Debug)]
pub struct EnergyReport {
    /// max |−Δφ − Eφ| / (1 + E·max|φ|).
    pub max_relative_residual: f64,
    pub points: usize,
}

pub fn verify_energy(data: &WaveData, n_points: usize, seed: u64) -> EnergyReport {
    let e = data.energy();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n_points);
    while samples.len() < n_points {
        let x: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.5..2.5));
        if weyl::roots().iter().all(|a| a.dot_f64(x).abs() > 1e-3) {
            samples.push(x);
        }
    }
    let evals = par::map_indexed(samples.len(), |i| {
        let x = samples[i];
        let q = chamber_of(x).expect("generic by construction");
        let phi = data.eval_in_chamber(q, x);
        let lap = data.neg_laplacian_in_chamber(q, x);
        ((lap - e * phi).norm(), phi.norm())
    });
    let max_phi = evals.iter().fold(0.0f64, |m, (_, p)| m.max(*p));
    let max_res = evals.iter().fold(0.0f64, |m, (r, _)| m.max(*r));
    EnergyReport {
        max_relative_residual: max_res / (1.0 + e * max_phi),
        points: n_points,
    }
}

/// Largest `|φ|` over randomly sampled physical circle configurations,
/// each evaluated through its own cut.
///
/// Roots of the Bethe equations can carry a wavefunction that vanishes
/// identically on the physical domain — the circle gluing annihilates
/// whole sectors at some branches, the continuum analogue of coincident
/// momenta.  Such null states satisfy every residual contract vacuously
/// and must be excluded from spectrum enumeration; this samples their
/// support.
pub fn circle_support(sol: &BetheSolution, n_samples: usize, seed: u64) -> Result<f64, WaveError> {
    let data = WaveData::from_solution(sol)?;
    let two_l = 2.0 * sol.l;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_phi = 0.0f64;
    let mut n = 0;
    while n < n_samples {
        let theta: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..two_l));
        let Ok(cfg) = weyl::circle_cut(theta, sol.l) else {
            continue;
        };
        max_phi = max_phi.max(data.eval_in_chamber(cfg.chamber(), cfg.interval()).norm());
        n += 1;
    }
    Ok(max_phi)
}

/// Residuals of the matching conditions at the circle cut.
#[derive(Clone, Copy, Debug)]
pub struct CircleMatchReport {
    /// max |φ(before) − φ(after)| over sampled wall configurations.
    pub value_max: f64,
    /// max residual of the derivative jump `(2/3)·g_l·φ` across the cut.
    pub jump_max: f64,
    pub scale: f64,
    pub samples: usize,
}

/// Verifies the two matching conditions where the lone particle crosses
/// the cut, for a converged circle solution.
///
/// A wall configuration places the closest pair symmetrically about the
/// interval midpoint (the cut then sits at the wrap point) and the lone
/// particle at the endpoint.  The value must agree between the chamber `Q`
/// reading (lone coordinate `2L`) and the chamber `QW` reading (lone
/// coordinate `0`), and the one-sided derivatives along the lone
/// coordinate must jump by `(2/3)·g_l·φ` — the delta strength carried by
/// the midpoint image at the opposite point of the circle, reduced to the
/// single-coordinate direction.
pub fn check_circle_matching(
    sol: &BetheSolution,
    n_samples: usize,
    seed: u64,
) -> Result<CircleMatchReport, WaveError> {
    let data = WaveData::from_solution(sol)?;
    let l = sol.l;
    let w = GroupElement::w();
    let bplus = boundary_set_plus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut report = CircleMatchReport {
        value_max: 0.0,
        jump_max: 0.0,
        scale: 0.0,
        samples: 0,
    };
    let mut attempts = 0;
    while report.samples < n_samples {
        attempts += 1;
        assert!(attempts < 100 * n_samples, "sampling must not stall");
        // Closest pair symmetric about the midpoint, lone particle at the
        // cut, roles assigned by a random permutation.
        let s: f64 = rng.random_range(0.05..0.31) * l;
        let mut roles = [0usize, 1, 2];
        for i in (1..3).rev() {
            roles.swap(i, rng.random_range(0..=i));
        }
        let (pa, pb, pc) = (roles[0], roles[1], roles[2]);
        let mut y = [0.0f64; 3];
        y[pa] = l - s;
        y[pb] = l + s;

        let eta = 1e-6 * l;
        let mut probe_right = y;
        probe_right[pc] = 2.0 * l - eta;
        let Ok(q_right) = chamber_of(probe_right) else {
            continue;
        };
        let mut probe_left = y;
        probe_left[pc] = eta;
        let Ok(q_left) = chamber_of(probe_left) else {
            continue;
        };
        if !bplus.contains(&q_right) || q_right * w != q_left {
            continue;
        }

        let mut y_right = y;
        y_right[pc] = 2.0 * l;
        let mut y_left = y;
        y_left[pc] = 0.0;
        let mut dir = [0.0f64; 3];
        dir[pc] = 1.0;

        let phi_right = data.eval_in_chamber(q_right, y_right);
        let phi_left = data.eval_in_chamber(q_left, y_left);
        let d_right = data.derivative_in_chamber(q_right, y_right, dir);
        let d_left = data.derivative_in_chamber(q_left, y_left, dir);

        let phi = 0.5 * (phi_right + phi_left);
        report.value_max = report.value_max.max((phi_right - phi_left).norm());
        report.jump_max = report
            .jump_max
            .max((d_left - d_right - (2.0 / 3.0) * sol.couplings.gl * phi).norm());
        report.scale = report.scale.max(phi.norm());
        report.samples += 1;
    }
    Ok(report)
}
