//! Independent spectrum oracle: exact diagonalization of the circle
//! Hamiltonian in a truncated plane-wave basis.
//!
//! Basis functions are `exp(iπ(n₁x₁ + n₂x₂ + n₃x₃)/L) / (2L)^{3/2}` with
//! integer `n`, periodic on the circle of circumference `2L`.  The
//! potential matches the boundary conditions the Bethe construction
//! solves: strength `2g_s δ_per(x_i − x_j)` on each pair and
//! `g_l [δ_per(u_k) + δ_per(u_k − L)]` for each particle against both
//! midpoint images of the other pair, `u_k = x_k − (x_i + x_j)/2`.
//!
//! Matrix elements are analytic.  Pair terms couple states that conserve
//! the pair momentum sum, with constant amplitude `g_s / L`.  Midpoint
//! terms impose the half-transfer rule `q_i = q_j = −q_k/2`; the two
//! images combine to the parity factor `1 + (−1)^{q_k}`, which cancels the
//! half-integer boundary terms and leaves the amplitude `g_l / L` on even
//! transfers.  Total momentum is conserved, so the Hamiltonian splits into
//! blocks labeled by `N = n₁ + n₂ + n₃`.
//!
//! Truncation of a delta potential converges slowly (like `1/n_max`), so
//! comparisons run at small couplings with loose tolerances plus a
//! two-point convergence check in `n_max`.

use nalgebra::DMatrix;

use crate::bethe::BetheSolution;
use crate::operators::Coupling;
use crate::par;

/// One plane-wave basis state, labeled by its momentum indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub n: [i32; 3],
}

impl BasisState {
    pub fn total(&self) -> i32 {
        self.n.iter().sum()
    }

    /// Kinetic energy `Σ (π n_i / L)²`.
    pub fn kinetic(&self, l: f64) -> f64 {
        self.n
            .iter()
            .map(|&ni| {
                let k = std::f64::consts::PI * ni as f64 / l;
                k * k
            })
            .sum()
    }
}

/// A total-momentum block of the Hamiltonian.
#[derive(Clone, Debug)]
pub struct HamiltonianBlock {
    /// Total momentum index `N`; the block carries `P = πN/L`.
    pub total_index: i32,
    pub n_max: i32,
    pub l: f64,
    pub couplings: Coupling<f64>,
    pub states: Vec<BasisState>,
    pub matrix: DMatrix<f64>,
}

/// Full matrix element `⟨n'|H|n⟩`, valid across blocks (it vanishes unless
/// the totals agree, which the block-decoupling test exercises).
pub fn matrix_element(np: [i32; 3], n: [i32; 3], l: f64, c: &Coupling<f64>) -> f64 {
    let q = [n[0] - np[0], n[1] - np[1], n[2] - np[2]];
    let mut elem = 0.0;
    if q == [0, 0, 0] {
        elem += BasisState { n }.kinetic(l);
    }
    // Pair collisions: the third index is untouched and the pair momentum
    // sum is conserved.
    for (i, j, k) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
        if q[k] == 0 && q[i] == -q[j] {
            elem += c.gs / l;
        }
    }
    // Midpoint collisions: half of the lone transfer flows into each pair
    // member; odd transfers cancel between the two images.
    for (i, j, k) in [(1usize, 2usize, 0usize), (0, 2, 1), (0, 1, 2)] {
        if q[i] == q[j] && q[k] == -2 * q[i] {
            elem += c.gl / l;
        }
    }
    elem
}

/// Enumerates the momentum-`N` block with `|n_i| ≤ n_max` and assembles
/// the (real symmetric) Hamiltonian matrix.
pub fn build_block(total: i32, n_max: i32, l: f64, c: &Coupling<f64>) -> HamiltonianBlock {
    assert!(n_max >= 1);
    assert!(l > 0.0 && l.is_finite());
    let mut states = Vec::new();
    for n1 in -n_max..=n_max {
        for n2 in -n_max..=n_max {
            let n3 = total - n1 - n2;
            if n3.abs() <= n_max {
                states.push(BasisState { n: [n1, n2, n3] });
            }
        }
    }
    let dim = states.len();
    let rows = par::map_indexed(dim, |r| {
        let mut row = vec![0.0f64; dim];
        for (col, target) in states.iter().enumerate() {
            row[col] = matrix_element(states[r].n, target.n, l, c);
        }
        row
    });
    let matrix = DMatrix::from_fn(dim, dim, |r, col| rows[r][col]);
    HamiltonianBlock {
        total_index: total,
        n_max,
        l,
        couplings: *c,
        states,
        matrix,
    }
}

/// The `count` smallest eigenvalues of the block, ascending.
pub fn lowest_eigenvalues(block: &HamiltonianBlock, count: usize) -> Vec<f64> {
    let mut evals: Vec<f64> = block
        .matrix
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    evals.sort_by(f64::total_cmp);
    evals.truncate(count);
    evals
}

/// One matched level in a comparison report.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LevelMatch {
    pub bethe_energy: f64,
    pub oracle_energy: f64,
    pub relative_deviation: f64,
    pub sector: crate::bethe::SectorLabel,
    pub quantum_numbers: (i32, i32, i32),
}

/// Bethe-versus-oracle comparison for one total-momentum sector.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CompareReport {
    pub total_index: i32,
    pub n_max: i32,
    pub matches: Vec<LevelMatch>,
    /// Oracle levels below the highest matched energy with no Bethe
    /// partner; candidates for states outside the solved sectors.  A
    /// reporting field, never a failure.
    pub unmatched_oracle: Vec<f64>,
}

/// Matches each Bethe energy to the nearest oracle level of the block.
///
/// All solutions must carry the block's total momentum `P = πN/L`.
pub fn compare(
    solutions: &[BetheSolution],
    block: &HamiltonianBlock,
    n_levels: usize,
) -> CompareReport {
    let p_block = std::f64::consts::PI * block.total_index as f64 / block.l;
    for sol in solutions {
        assert!(
            (sol.total_momentum() - p_block).abs() < 1e-6,
            "solution momentum {} is not in block N = {}",
            sol.total_momentum(),
            block.total_index
        );
    }
    let levels = lowest_eigenvalues(block, n_levels.max(solutions.len()));
    let matches: Vec<LevelMatch> = solutions
        .iter()
        .map(|sol| {
            let oracle_energy = levels
                .iter()
                .copied()
                .min_by(|a, b| (a - sol.energy).abs().total_cmp(&(b - sol.energy).abs()))
                .expect("block has levels");
            LevelMatch {
                bethe_energy: sol.energy,
                oracle_energy,
                relative_deviation: (sol.energy - oracle_energy).abs()
                    / oracle_energy.abs().max(1e-6),
                sector: sol.sector,
                quantum_numbers: sol.quantum_numbers,
            }
        })
        .collect();
    let top = matches
        .iter()
        .map(|m| m.bethe_energy)
        .fold(f64::NEG_INFINITY, f64::max);
    let unmatched_oracle = levels
        .iter()
        .copied()
        .filter(|&e| {
            e <= top + 1e-6
                && !matches
                    .iter()
                    .any(|m| (m.bethe_energy - e).abs() <= 0.05 * e.abs().max(1.0))
        })
        .collect();
    CompareReport {
        total_index: block.total_index,
        n_max: block.n_max,
        matches,
        unmatched_oracle,
    }
}
