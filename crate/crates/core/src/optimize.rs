//! Received-power maximizers for each architecture.
//!
//! All optimizers aim for `Θ ĥ_T = ĥ_R` (per group for group-connected
//! architectures). Substituting the Cayley map turns that into the real linear
//! condition `B α = β` with `α = jZ₀(ĥ_R + ĥ_T)` and `β = ĥ_T − ĥ_R`, whose
//! unknowns are the free entries of `B`. Every reported power is recomputed
//! end-to-end from `B → Θ → |h_Rᴴ Θ h_T|²`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::architecture::{
    partition_from_cuts, received_power, theta_from_susceptance, upper_bound_full, upper_bound_gc, upper_bound_sc,
    ArchitectureKind, ArchitectureSpec, ScatteringMatrix, SparsityPattern, SusceptanceMatrix,
};
use crate::channel::ChannelPair;
use crate::error::{Error, Result};
use crate::numeric::{min_norm_least_squares, norm2, Complex64, ComplexVec, RealMatrix};
use crate::rng::SimRng;

/// A least-squares residual at most this fraction of `max(‖b‖, 1)` counts as an exact solve.
pub const CONSISTENCY_RTOL: f64 = 1e-8;

/// Largest phase the single-connected solution is asked to realize; `Θ_ii = −1`
/// is only reached as `B_ii → ∞`.
pub const PHASE_CLAMP: f64 = PI - 1e-6;

/// Groups whose `‖ĥ_R + ĥ_T‖` falls below this use per-element phase alignment.
const DEGENERATE_GROUP_NORM: f64 = 1e-10;

/// Output of every optimizer.
#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub b_matrix: SusceptanceMatrix,
    pub theta: ScatteringMatrix,
    pub p_r: f64,
    pub p_bar_full: f64,
    /// Bound specific to the architecture (equal to `p_bar_full` for the tree).
    pub p_bar_arch: f64,
    pub ratio_full: f64,
    /// Least-squares residual (largest over groups); zero for closed forms.
    pub residual_norm: f64,
    pub consistent: bool,
}

#[derive(Serialize)]
struct ResultJson<'a> {
    arch: &'a str,
    p_r: f64,
    p_bar_full: f64,
    p_bar_arch: f64,
    ratio_full: f64,
    residual_norm: f64,
    consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    b_matrix: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<Vec<Vec<[f64; 2]>>>,
}

impl OptimizeResult {
    fn assemble(
        pair: &ChannelPair,
        b_matrix: SusceptanceMatrix,
        z0: f64,
        p_bar_arch: f64,
        residual_norm: f64,
        consistent: bool,
    ) -> Result<Self> {
        let theta = theta_from_susceptance(&b_matrix, z0)?;
        let p_r = received_power(pair, &theta)?;
        let p_bar_full = upper_bound_full(pair);
        Ok(OptimizeResult {
            b_matrix,
            theta,
            p_r,
            p_bar_full,
            p_bar_arch,
            ratio_full: p_r / p_bar_full,
            residual_norm,
            consistent,
        })
    }

    /// JSON object with the scalar outputs and, optionally, `B` and `Θ`
    /// (`theta` entries as `[re, im]`).
    pub fn to_json(&self, arch_label: &str, emit_matrices: bool) -> Result<String> {
        let n = self.b_matrix.n();
        let b_rows = || (0..n).map(|i| (0..n).map(|j| self.b_matrix.get(i, j)).collect()).collect();
        let t = self.theta.as_matrix();
        let t_rows = || (0..n).map(|i| (0..n).map(|j| [t[(i, j)].re, t[(i, j)].im]).collect()).collect();
        let view = ResultJson {
            arch: arch_label,
            p_r: self.p_r,
            p_bar_full: self.p_bar_full,
            p_bar_arch: self.p_bar_arch,
            ratio_full: self.ratio_full,
            residual_norm: self.residual_norm,
            consistent: self.consistent,
            b_matrix: emit_matrices.then(b_rows),
            theta: emit_matrices.then(t_rows),
        };
        Ok(serde_json::to_string_pretty(&view)?)
    }
}

/// Real-stacked configuration system of the tridiagonal architecture.
///
/// Unknown layout: `x = [B_11, …, B_NN, B_12, …, B_{N−1,N}]`. With
/// `A₁ = diag(α)` and `A₂` bidiagonal (`[A₂]_{k,k} = α_{k+1}`,
/// `[A₂]_{k+1,k} = α_k`), `a = [Re A₁ Re A₂; Im A₁ Im A₂]` and
/// `b = [Re β; Im β]`.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    a: RealMatrix,
    b: Vec<f64>,
    alpha: ComplexVec,
}

impl LinearSystem {
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn a(&self) -> &RealMatrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn alpha(&self) -> &ComplexVec {
        &self.alpha
    }

    /// 0-based entry `(i, j)`, `i ≤ j`, of `B` held by unknown `k`.
    pub fn layout(&self, k: usize) -> (usize, usize) {
        let n = self.n();
        if k < n {
            (k, k)
        } else {
            (k - n, k - n + 1)
        }
    }
}

fn alpha_beta(r_hat: &[Complex64], t_hat: &[Complex64], z0: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let jz = Complex64::new(0.0, z0);
    r_hat.iter().zip(t_hat).map(|(r, t)| (jz * (r + t), t - r)).unzip()
}

fn stack_real(rows: usize, cols: usize, entry: impl Fn(usize, usize) -> Complex64) -> RealMatrix {
    RealMatrix::from_fn(2 * rows, cols, |i, j| if i < rows { entry(i, j).re } else { entry(i - rows, j).im })
}

fn stack_vec(v: &[Complex64]) -> Vec<f64> {
    v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect()
}

fn is_consistent(residual: f64, b: &[f64]) -> bool {
    let scale = b.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
    residual <= CONSISTENCY_RTOL * scale
}

/// Builds the `2N × (2N − 1)` system for the tridiagonal architecture.
pub fn build_tc_system(pair: &ChannelPair, z0: f64) -> Result<LinearSystem> {
    let n = pair.n();
    if n < 2 {
        return Err(Error::input("the tridiagonal system needs n >= 2"));
    }
    if !(z0 > 0.0 && z0.is_finite()) {
        return Err(Error::input(format!("reference impedance {z0} must be positive")));
    }
    let (r, t) = pair.normalized();
    let (alpha, beta) = alpha_beta(r.as_slice(), t.as_slice(), z0);
    let zero = Complex64::new(0.0, 0.0);
    let a = stack_real(n, 2 * n - 1, |row, col| {
        if col < n {
            if row == col {
                alpha[row]
            } else {
                zero
            }
        } else {
            let l = col - n;
            if row == l {
                alpha[l + 1]
            } else if row == l + 1 {
                alpha[l]
            } else {
                zero
            }
        }
    });
    Ok(LinearSystem { a, b: stack_vec(&beta), alpha: ComplexVec::new(alpha)? })
}

/// Tridiagonal optimizer: minimum-norm least-squares solution of the
/// configuration system. When the system is inconsistent the returned
/// configuration is a heuristic and `consistent` is false.
pub fn optimize_tc(pair: &ChannelPair, z0: f64, rank_rtol: f64) -> Result<OptimizeResult> {
    let system = build_tc_system(pair, z0)?;
    let sol = min_norm_least_squares(system.a(), system.b(), rank_rtol)?;
    let mut b = SusceptanceMatrix::zeros(SparsityPattern::Tridiagonal, pair.n());
    for (k, &v) in sol.x.iter().enumerate() {
        let (i, j) = system.layout(k);
        b.set(i, j, v)?;
    }
    let consistent = is_consistent(sol.residual_norm, system.b());
    OptimizeResult::assemble(pair, b, z0, upper_bound_full(pair), sol.residual_norm, consistent)
}

/// Per-element phase alignment: `b_i = −tan(θ_i / 2) / Z₀` with
/// `θ_i = arg h_R,i − arg h_T,i` clamped to `±(π − 10⁻⁶)`.
fn phase_alignment_entries(h_r: &[Complex64], h_t: &[Complex64], z0: f64) -> Vec<f64> {
    h_r.iter()
        .zip(h_t)
        .map(|(r, t)| {
            if r.norm() == 0.0 || t.norm() == 0.0 {
                return 0.0;
            }
            let phase = (r * t.conj()).arg().clamp(-PHASE_CLAMP, PHASE_CLAMP);
            -(phase / 2.0).tan() / z0
        })
        .collect()
}

/// Single-connected (diagonal) optimizer in closed form.
pub fn optimize_sc(pair: &ChannelPair, z0: f64) -> Result<OptimizeResult> {
    if !(z0 > 0.0 && z0.is_finite()) {
        return Err(Error::input(format!("reference impedance {z0} must be positive")));
    }
    let n = pair.n();
    let pattern = ArchitectureSpec::single_connected(n)?.pattern();
    let mut b = SusceptanceMatrix::zeros(pattern, n);
    let entries = phase_alignment_entries(pair.h_r().as_slice(), pair.h_t().as_slice(), z0);
    for (i, v) in entries.into_iter().enumerate() {
        b.set(i, i, v)?;
    }
    OptimizeResult::assemble(pair, b, z0, upper_bound_sc(pair), 0.0, true)
}

/// Group-connected optimizer (block-diagonal `B`, one block per group).
///
/// Each block solves `B_g α_g = β_g` over its upper triangle in the
/// least-squares sense, with `α_g`, `β_g` built from the group-normalized
/// channel pieces. `cuts = []` is the fully-connected architecture.
pub fn optimize_gc(pair: &ChannelPair, cuts: &[usize], z0: f64, rank_rtol: f64) -> Result<OptimizeResult> {
    if !(z0 > 0.0 && z0.is_finite()) {
        return Err(Error::input(format!("reference impedance {z0} must be positive")));
    }
    let n = pair.n();
    let groups = partition_from_cuts(cuts, n)?;
    let mut b = SusceptanceMatrix::zeros(SparsityPattern::Blocks(groups.clone()), n);
    let (h_r, h_t) = (pair.h_r().as_slice(), pair.h_t().as_slice());

    let mut residual_norm: f64 = 0.0;
    let mut consistent = true;
    for g in groups {
        let (rg, tg) = (&h_r[g.clone()], &h_t[g.clone()]);
        let (nr, nt) = (norm2(rg), norm2(tg));
        if nr == 0.0 || nt == 0.0 {
            continue;
        }
        let r_hat: Vec<Complex64> = rg.iter().map(|z| z / nr).collect();
        let t_hat: Vec<Complex64> = tg.iter().map(|z| z / nt).collect();
        let sum: Vec<Complex64> = r_hat.iter().zip(&t_hat).map(|(r, t)| r + t).collect();

        if norm2(&sum) < DEGENERATE_GROUP_NORM {
            for (k, v) in phase_alignment_entries(rg, tg, z0).into_iter().enumerate() {
                b.set(g.start + k, g.start + k, v)?;
            }
            continue;
        }

        let (alpha, beta) = alpha_beta(&r_hat, &t_hat, z0);
        let k = g.len();
        let unknowns: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
        let zero = Complex64::new(0.0, 0.0);
        let a = stack_real(k, unknowns.len(), |row, col| {
            let (i, j) = unknowns[col];
            if row == i {
                alpha[j]
            } else if row == j {
                alpha[i]
            } else {
                zero
            }
        });
        let rhs = stack_vec(&beta);
        let sol = min_norm_least_squares(&a, &rhs, rank_rtol)?;
        residual_norm = residual_norm.max(sol.residual_norm);
        consistent &= is_consistent(sol.residual_norm, &rhs);
        for (&(i, j), &v) in unknowns.iter().zip(&sol.x) {
            b.set(g.start + i, g.start + j, v)?;
        }
    }
    OptimizeResult::assemble(pair, b, z0, upper_bound_gc(pair, cuts)?, residual_norm, consistent)
}

/// Dispatches to the optimizer matching `arch`.
pub fn optimize(pair: &ChannelPair, arch: &ArchitectureSpec, z0: f64, rank_rtol: f64) -> Result<OptimizeResult> {
    if arch.n() != pair.n() {
        return Err(Error::input(format!("architecture has {} elements but the channels have {}", arch.n(), pair.n())));
    }
    match arch.kind() {
        ArchitectureKind::SingleConnected => optimize_sc(pair, z0),
        ArchitectureKind::TreeTridiagonal => optimize_tc(pair, z0, rank_rtol),
        ArchitectureKind::GroupConnected | ArchitectureKind::FullyConnected => {
            optimize_gc(pair, &arch.group_cuts().expect("group architecture"), z0, rank_rtol)
        }
    }
}

/// Best configuration found by [`brute_force_power_search`].
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub p_r: f64,
    pub b_matrix: SusceptanceMatrix,
    pub evaluations: usize,
}

/// Number of random samples kept as starting points for refinement.
const SEARCH_STARTS: usize = 8;
/// Golden-section steps per coordinate line search.
const GOLDEN_STEPS: usize = 24;
const INV_PHI: f64 = 0.618_033_988_749_894_9;
const HALF_PI: f64 = PI / 2.0;

struct PowerObjective<'a> {
    pair: &'a ChannelPair,
    pattern: SparsityPattern,
    free: Vec<(usize, usize)>,
    z0: f64,
    evaluations: usize,
}

impl PowerObjective<'_> {
    /// Entries are searched through `u = atan(Z₀ b) ∈ (−π/2, π/2)`, which maps
    /// the whole real line onto a bounded interval.
    fn matrix(&self, u: &[f64]) -> SusceptanceMatrix {
        let n = self.pair.n();
        let mut b = SusceptanceMatrix::zeros(self.pattern.clone(), n);
        for (&(i, j), &ui) in self.free.iter().zip(u) {
            b.set(i, j, ui.tan() / self.z0).expect("free entries lie on the pattern");
        }
        b
    }

    fn eval(&mut self, u: &[f64]) -> f64 {
        self.evaluations += 1;
        theta_from_susceptance(&self.matrix(u), self.z0)
            .and_then(|theta| received_power(self.pair, &theta))
            .unwrap_or(f64::NEG_INFINITY)
    }
}

fn clamp_u(u: f64) -> f64 {
    u.clamp(-HALF_PI + 1e-12, HALF_PI - 1e-12)
}

/// Derivative-free search over patterned `B`.
///
/// Half of `budget` goes to random sampling (each free entry Cauchy-distributed
/// in `Z₀ b`, plus the all-zero configuration); the rest refines the best
/// [`SEARCH_STARTS`] samples by repeated coordinate-wise golden-section
/// searches with a shrinking bracket. Independent of the analytical optimizers.
pub fn brute_force_power_search(
    pair: &ChannelPair,
    arch: &ArchitectureSpec,
    z0: f64,
    budget: usize,
    rng: &mut SimRng,
) -> Result<SearchResult> {
    if arch.n() != pair.n() {
        return Err(Error::input("architecture and channel sizes differ"));
    }
    if budget == 0 {
        return Err(Error::input("search budget must be at least 1"));
    }
    if !(z0 > 0.0 && z0.is_finite()) {
        return Err(Error::input(format!("reference impedance {z0} must be positive")));
    }
    let pattern = arch.pattern();
    let free = pattern.free_entries(pair.n());
    let dim = free.len();
    let mut obj = PowerObjective { pair, pattern, free, z0, evaluations: 0 };

    let sample_budget = (budget / 2).max(1);
    let mut starts: Vec<(f64, Vec<f64>)> = Vec::with_capacity(SEARCH_STARTS + 1);
    let consider = |starts: &mut Vec<(f64, Vec<f64>)>, p: f64, u: Vec<f64>| {
        if starts.len() < SEARCH_STARTS || p > starts.last().map_or(f64::NEG_INFINITY, |s| s.0) {
            starts.push((p, u));
            starts.sort_by(|a, b| b.0.total_cmp(&a.0));
            starts.truncate(SEARCH_STARTS);
        }
    };
    let zero = vec![0.0; dim];
    let p0 = obj.eval(&zero);
    consider(&mut starts, p0, zero);
    while obj.evaluations < sample_budget {
        let u: Vec<f64> = (0..dim).map(|_| clamp_u(PI * (rng.open01() - 0.5))).collect();
        let p = obj.eval(&u);
        consider(&mut starts, p, u);
    }

    let (mut best_p, mut best_u) = starts[0].clone();
    let per_start = (budget - obj.evaluations.min(budget)) / starts.len();
    for (p_start, u_start) in starts {
        let stop = obj.evaluations + per_start;
        let (mut p, mut u) = (p_start, u_start);
        let mut width = PI / 4.0;
        while obj.evaluations + GOLDEN_STEPS + 2 <= stop && width > 1e-12 && dim > 0 {
            let before = p;
            for c in 0..dim {
                if obj.evaluations + GOLDEN_STEPS + 2 > stop {
                    break;
                }
                let (pc, uc) = golden_line_search(&mut obj, &u, c, width);
                if pc > p {
                    p = pc;
                    u[c] = uc;
                }
            }
            if p <= before * (1.0 + 1e-15) {
                width *= 0.5;
            }
        }
        if p > best_p {
            best_p = p;
            best_u = u;
        }
    }

    let b_matrix = obj.matrix(&best_u);
    Ok(SearchResult { p_r: best_p, b_matrix, evaluations: obj.evaluations })
}

/// Golden-section maximization of coordinate `c` over `[u_c − w, u_c + w]`.
fn golden_line_search(obj: &mut PowerObjective<'_>, u: &[f64], c: usize, w: f64) -> (f64, f64) {
    let mut probe = u.to_vec();
    let mut f = |x: f64, obj: &mut PowerObjective<'_>| {
        probe[c] = x;
        obj.eval(&probe)
    };
    let (mut lo, mut hi) = (clamp_u(u[c] - w), clamp_u(u[c] + w));
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1, obj);
    let mut f2 = f(x2, obj);
    for _ in 0..GOLDEN_STEPS {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1, obj);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2, obj);
        }
    }
    if f1 >= f2 {
        (f1, x1)
    } else {
        (f2, x2)
    }
}
