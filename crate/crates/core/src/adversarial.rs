//! Membership tests for the channel sets on which group-connected and
//! tridiagonal architectures cannot reach the full received-power bound.
//!
//! Notation used throughout, for a pair `(h_R, h_T)` with `N` elements:
//!
//! * `s = ĥ_R + ĥ_T`, the sum of the unit-norm channels;
//! * a *link* `i ∈ {1, …, N−1}` is *proportional* when `s_i = γ_i · s_{i+1}`
//!   for some real `γ_i`;
//! * `C1(I)`: no single `γ > 0` makes `‖[h_R]_g‖ = γ ‖[h_T]_g‖` for every group
//!   `g` induced by the cut set `I`;
//! * `C2(I)`: the proportional links are *exactly* the cuts in `I`;
//! * `A = ⋃_{I ≠ ∅} C1(I) ∩ C2(I)`.
//!
//! Because `C2(I)` holds for at most one `I` (the set `I*` of proportional
//! links), membership in `A` reduces to a single `C1(I*)` test. The exhaustive
//! union is kept as [`in_a_bruteforce`] to check that reduction.

use serde::Serialize;

use crate::architecture::partition_from_cuts;
use crate::channel::{self, ChannelPair};
use crate::error::{Error, Result};
use crate::numeric::{norm2, Complex64, ABS_FLOOR};
use crate::optimize::LinearSystem;
use crate::rng::SimRng;

/// Default tolerance for proportionality and ratio-equality tests.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-9;

/// Entries of `s` below this fraction of `‖s‖∞` count as zero.
const ZERO_FLOOR_RTOL: f64 = 1e-12;

/// Largest `N` accepted by [`in_a_bruteforce`] (2^15 − 1 subsets).
pub const BRUTE_FORCE_MAX_N: usize = 16;

/// Result of [`real_proportional`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proportionality {
    pub holds: bool,
    /// `γ` with `z1 = γ z2`. `Some(1.0)` when both numbers vanish (any nonzero
    /// `γ` works), `None` when the test fails.
    pub gamma: Option<f64>,
}

/// Tests whether `z1 = γ · z2` for a real `γ ≠ 0`.
///
/// With `m = max(|z1|, |z2|)`, a number is negligible when it is at most
/// `max(tol·m, floor)`. Both negligible: true. Exactly one negligible: false
/// (`γ` would have to be zero or infinite). Otherwise true iff
/// `|Im(z1 · conj z2)| ≤ tol · m²`.
pub fn real_proportional(z1: Complex64, z2: Complex64, tol: f64) -> Proportionality {
    real_proportional_floored(z1, z2, tol, ABS_FLOOR)
}

fn real_proportional_floored(z1: Complex64, z2: Complex64, tol: f64, floor: f64) -> Proportionality {
    let (a1, a2) = (z1.norm(), z2.norm());
    let m = a1.max(a2);
    let zero = (tol * m).max(floor);
    let fail = Proportionality { holds: false, gamma: None };
    match (a1 <= zero, a2 <= zero) {
        (true, true) => Proportionality { holds: true, gamma: Some(1.0) },
        (true, false) | (false, true) => fail,
        (false, false) => {
            let cross = z1 * z2.conj();
            if cross.im.abs() <= tol * m * m {
                Proportionality { holds: true, gamma: Some(cross.re / z2.norm_sqr()) }
            } else {
                fail
            }
        }
    }
}

/// Proportional links of `s = ĥ_R + ĥ_T` with their `γ_i` (1-based link indices).
pub fn proportional_links(pair: &ChannelPair, tol: f64) -> Vec<(usize, f64)> {
    let (r, t) = pair.normalized();
    let s: Vec<Complex64> = r.iter().zip(t.iter()).map(|(a, b)| a + b).collect();
    let s_max = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = (ZERO_FLOOR_RTOL * s_max).max(ABS_FLOOR);
    s.windows(2)
        .enumerate()
        .filter_map(|(k, w)| {
            let p = real_proportional_floored(w[0], w[1], tol, floor);
            p.holds.then(|| (k + 1, p.gamma.expect("gamma set when proportional")))
        })
        .collect()
}

/// The induced cut set `I*`: every link where adjacent entries of `ĥ_R + ĥ_T`
/// are real multiples of each other.
pub fn cut_set(pair: &ChannelPair, tol: f64) -> Vec<usize> {
    proportional_links(pair, tol).into_iter().map(|(i, _)| i).collect()
}

/// Outcome of [`in_c1`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct C1Verdict {
    pub holds: bool,
    /// `‖[h_R]_g‖ / ‖[h_T]_g‖` per group; `None` when both norms vanish or `[h_T]_g` does.
    pub group_ratios: Vec<Option<f64>>,
}

/// Whether no common `γ > 0` relates the group norms of `h_R` and `h_T`.
///
/// Groups where both norms vanish accept any `γ`. A group with exactly one
/// vanishing norm makes the set condition true outright.
pub fn in_c1(pair: &ChannelPair, cuts: &[usize], tol: f64) -> Result<C1Verdict> {
    let groups = partition_from_cuts(cuts, pair.n())?;
    let (h_r, h_t) = (pair.h_r().as_slice(), pair.h_t().as_slice());
    let (nr, nt) = (pair.h_r().norm(), pair.h_t().norm());

    let mut group_ratios = Vec::with_capacity(groups.len());
    let mut normalized = Vec::with_capacity(groups.len());
    let mut one_sided = false;
    for g in groups {
        let (gr, gt) = (norm2(&h_r[g.clone()]), norm2(&h_t[g]));
        let (fr, ft) = (gr / nr, gt / nt);
        let (zr, zt) = (fr <= ZERO_FLOOR_RTOL, ft <= ZERO_FLOOR_RTOL);
        match (zr, zt) {
            (true, true) => group_ratios.push(None),
            (false, true) => {
                one_sided = true;
                group_ratios.push(None);
            }
            (true, false) => {
                one_sided = true;
                group_ratios.push(Some(gr / gt));
            }
            (false, false) => {
                group_ratios.push(Some(gr / gt));
                normalized.push(fr / ft);
            }
        }
    }

    let holds = one_sided || {
        let hi = normalized.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = normalized.iter().copied().fold(f64::INFINITY, f64::min);
        !normalized.is_empty() && hi - lo > tol * hi
    };
    Ok(C1Verdict { holds, group_ratios })
}

/// Whether the proportional links are exactly `cuts` (which must be non-empty).
pub fn in_c2(pair: &ChannelPair, cuts: &[usize], tol: f64) -> Result<bool> {
    if cuts.is_empty() {
        return Err(Error::input("C2 is only defined for non-empty cut sets"));
    }
    partition_from_cuts(cuts, pair.n())?;
    Ok(cut_set(pair, tol) == cuts)
}

/// Membership verdict for the tridiagonal adversarial set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub in_a: bool,
    pub cut_set: Vec<usize>,
    /// `γ_i` with `s_i = γ_i s_{i+1}` for each cut, in cut order.
    pub gammas: Vec<f64>,
    pub group_ratios: Vec<Option<f64>>,
    pub c1_holds: bool,
}

/// Decides membership in `A` through the induced cut set `I*`.
pub fn in_a(pair: &ChannelPair, tol: f64) -> MembershipReport {
    let links = proportional_links(pair, tol);
    let (cut_set, gammas): (Vec<usize>, Vec<f64>) = links.into_iter().unzip();
    let c1 = in_c1(pair, &cut_set, tol).expect("induced cuts are valid by construction");
    MembershipReport {
        in_a: !cut_set.is_empty() && c1.holds,
        cut_set,
        gammas,
        group_ratios: c1.group_ratios,
        c1_holds: c1.holds,
    }
}

/// Membership in `A` by enumerating every non-empty cut set.
pub fn in_a_bruteforce(pair: &ChannelPair, tol: f64) -> Result<bool> {
    let n = pair.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::input(format!("brute-force membership limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")));
    }
    if n < 2 {
        return Ok(false);
    }
    for mask in 1u32..(1u32 << (n - 1)) {
        let cuts: Vec<usize> = (0..n - 1).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect();
        if in_c1(pair, &cuts, tol)?.holds && in_c2(pair, &cuts, tol)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Moves the weight of the coupling at `cut` onto the two diagonal unknowns it
/// connects, leaving `A x` unchanged.
///
/// `gamma` is oriented as in [`MembershipReport::gammas`]: `α_i = γ α_{i+1}`.
/// Then column `N+i` of `A` equals `c_i / γ + γ c_{i+1}`, so
/// `x′_i = x_i + x_{N+i} / γ`, `x′_{i+1} = x_{i+1} + γ x_{N+i}` and `x′_{N+i} = 0`
/// (all indices 1-based).
pub fn reduce_coupling(system: &LinearSystem, x: &[f64], cut: usize, gamma: f64) -> Result<Vec<f64>> {
    let n = system.n();
    if x.len() != 2 * n - 1 {
        return Err(Error::input(format!("x has {} entries, expected {}", x.len(), 2 * n - 1)));
    }
    if cut == 0 || cut >= n {
        return Err(Error::input(format!("cut {cut} outside [1, {}]", n - 1)));
    }
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(Error::input("gamma must be finite and nonzero"));
    }
    let mut out = x.to_vec();
    let coupling = x[n + cut - 1];
    out[cut - 1] += coupling / gamma;
    out[cut] += gamma * coupling;
    out[n + cut - 1] = 0.0;
    Ok(out)
}

/// Draws a pair for comparing [`in_a`] against [`in_a_bruteforce`].
///
/// Independent Rayleigh draws essentially never have a proportional link, so
/// most draws plant a random set of links in `s`. Half of those also force
/// `|[ĥ_T]_i| = |[ĥ_R]_i|` elementwise, which makes every group ratio equal
/// and so exercises the `C1` side of the test.
pub fn probe_pair(n: usize, rng: &mut SimRng) -> Result<ChannelPair> {
    if n < 2 {
        return Err(Error::input(format!("probe pairs need n >= 2, got {n}")));
    }
    match rng.next_u64() % 6 {
        0 => channel::gen_rayleigh(n, rng),
        1 => {
            let q = 2 * (rng.next_u64() as usize % n.div_ceil(2).max(1)) + 1;
            channel::gen_tc_adversarial(n, Some(q.min(channel::default_q(n))), rng)
        }
        2 | 3 => planted_links(n, rng),
        _ => planted_equal_ratios(n, rng),
    }
}

fn random_links(n: usize, rng: &mut SimRng) -> Vec<bool> {
    (0..n - 1).map(|_| rng.next_u64() & 1 == 1).collect()
}

fn planted_links(n: usize, rng: &mut SimRng) -> Result<ChannelPair> {
    let links = random_links(n, rng);
    let r: Vec<Complex64> = (0..n).map(|_| rng.complex_normal()).collect();
    let mut s = vec![Complex64::new(0.0, 0.0); n];
    s[n - 1] = rng.complex_normal();
    for i in (0..n - 1).rev() {
        s[i] = if links[i] {
            let sign = if rng.next_u64() & 1 == 1 { 1.0 } else { -1.0 };
            s[i + 1] * (sign * rng.uniform(0.2, 2.0))
        } else {
            rng.complex_normal()
        };
    }
    // Pick λ > 0 with ‖λs − r̂‖ = ‖r̂‖ so that r̂ + (λs − r̂) = λs.
    let r_norm = norm2(&r);
    let r_hat: Vec<Complex64> = r.iter().map(|z| z / r_norm).collect();
    let inner: f64 = r_hat.iter().zip(&s).map(|(a, b)| (a.conj() * b).re).sum();
    let s_sq: f64 = s.iter().map(|z| z.norm_sqr()).sum();
    let (sign, inner) = if inner < 0.0 { (-1.0, -inner) } else { (1.0, inner) };
    if inner <= 1e-6 * s_sq.sqrt() {
        return channel::gen_rayleigh(n, rng);
    }
    let lambda = sign * 2.0 * inner / s_sq;
    let h_t: Vec<Complex64> = s.iter().zip(&r_hat).map(|(si, ri)| si * lambda - ri).collect();
    ChannelPair::from_vecs(r, h_t)
}

fn planted_equal_ratios(n: usize, rng: &mut SimRng) -> Result<ChannelPair> {
    // h_T = D h_R with |D_ii| = 1 gives s_i = r̂_i (1 + e^{jφ_i}), whose phase
    // is arg r̂_i + φ_i / 2 (mod π). Linked entries copy the next phase.
    let links = random_links(n, rng);
    let r: Vec<Complex64> = (0..n).map(|_| rng.complex_normal()).collect();
    let mut half = vec![0.0; n];
    half[n - 1] = rng.uniform(-1.4, 1.4);
    for i in (0..n - 1).rev() {
        half[i] = if links[i] {
            let target = r[i + 1].arg() + half[i + 1] - r[i].arg();
            // Fold into (−π/2, π/2] so that 1 + e^{jφ} stays away from zero.
            target - std::f64::consts::PI * (target / std::f64::consts::PI).round()
        } else {
            rng.uniform(-1.4, 1.4)
        };
    }
    let h_t: Vec<Complex64> = r.iter().zip(&half).map(|(ri, h)| ri * Complex64::from_polar(1.0, 2.0 * h)).collect();
    ChannelPair::from_vecs(r, h_t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn worked_pair() -> ChannelPair {
        ChannelPair::from_vecs(vec![c(0.0, 2.0), c(3.0, 1.0)], vec![c(1.5, 0.5), c(0.0, 1.0)]).unwrap()
    }

    fn e1_pair() -> ChannelPair {
        ChannelPair::from_vecs(vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    const TOL: f64 = DEFAULT_MEMBERSHIP_TOL;

    #[test]
    fn proportionality_examples() {
        let p = real_proportional(c(1.0, 1.0), c(2.0, 2.0), TOL);
        assert!(p.holds);
        assert!((p.gamma.unwrap() - 0.5).abs() < 1e-15);
        assert!(!real_proportional(c(1.0, 1.0), c(1.0, -1.0), TOL).holds);
        assert!(real_proportional(c(0.0, 0.0), c(0.0, 0.0), TOL).holds);
        assert!(!real_proportional(c(2.0, 0.0), c(0.0, 0.0), TOL).holds);
        assert!(!real_proportional(c(0.0, 0.0), c(2.0, 0.0), TOL).holds);
        let p = real_proportional(c(-3.0, 1.5), c(2.0, -1.0), TOL);
        assert!(p.holds);
        assert!((p.gamma.unwrap() + 1.5).abs() < 1e-15);
    }

    #[test]
    fn cut_set_examples() {
        let links = proportional_links(&worked_pair(), TOL);
        assert_eq!(links.len(), 1);
        assert_eq!(links[0].0, 1);
        assert!((links[0].1 - 1.0).abs() < 1e-12);
        assert!(cut_set(&e1_pair(), TOL).is_empty());
        let mut rng = SimRng::seed_from_u64(9);
        let pair = channel::gen_rayleigh(16, &mut rng).unwrap();
        assert!(cut_set(&pair, TOL).is_empty());
    }

    #[test]
    fn c1_examples() {
        let v = in_c1(&worked_pair(), &[1], TOL).unwrap();
        assert!(v.holds);
        let r = 10f64.sqrt();
        assert!((v.group_ratios[0].unwrap() - 4.0 / r).abs() < 1e-12);
        assert!((v.group_ratios[1].unwrap() - r).abs() < 1e-12);

        let same = ChannelPair::from_vecs(
            vec![c(1.0, 2.0), c(-0.5, 0.3), c(0.0, 1.0)],
            vec![c(1.0, 2.0), c(-0.5, 0.3), c(0.0, 1.0)],
        )
        .unwrap();
        for cuts in [vec![], vec![1], vec![2], vec![1, 2]] {
            assert!(!in_c1(&same, &cuts, TOL).unwrap().holds);
        }

        let mut rng = SimRng::seed_from_u64(4);
        let fav = channel::gen_gc_favorable(12, 2, &mut rng).unwrap();
        assert!(!in_c1(&fav, &[2, 4, 6, 8, 10], TOL).unwrap().holds);
        assert!(in_c1(&fav, &[1], TOL).is_ok());
        assert!(in_c1(&fav, &[12], TOL).is_err());
    }

    #[test]
    fn c1_zero_groups() {
        // Group {2} vanishes in both vectors: wildcard.
        let pair = ChannelPair::from_vecs(
            vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(0.0, 0.0), c(4.0, 0.0)],
        )
        .unwrap();
        let v = in_c1(&pair, &[1, 2], TOL).unwrap();
        assert!(!v.holds);
        assert_eq!(v.group_ratios[1], None);
        // Group {2} vanishes only in h_T: no positive gamma exists.
        let pair = ChannelPair::from_vecs(vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(in_c1(&pair, &[1], TOL).unwrap().holds);
    }

    #[test]
    fn c2_examples() {
        assert!(in_c2(&worked_pair(), &[1], TOL).unwrap());
        assert!(in_c2(&worked_pair(), &[], TOL).is_err());
        let mut rng = SimRng::seed_from_u64(9);
        let pair = channel::gen_rayleigh(6, &mut rng).unwrap();
        assert!(!in_c2(&pair, &[1], TOL).unwrap());
        let adv = channel::gen_tc_adversarial(4, Some(3), &mut rng).unwrap();
        assert!(in_c2(&adv, &[1, 3], TOL).unwrap());
        assert!(!in_c2(&adv, &[1], TOL).unwrap());
    }

    #[test]
    fn membership_examples() {
        let report = in_a(&worked_pair(), TOL);
        assert!(report.in_a && report.c1_holds);
        assert_eq!(report.cut_set, vec![1]);
        assert_eq!(report.gammas.len(), 1);

        let same = ChannelPair::from_vecs(vec![c(1.0, 2.0), c(-0.5, 0.3)], vec![c(1.0, 2.0), c(-0.5, 0.3)]).unwrap();
        assert!(!in_a(&same, TOL).in_a);
        assert!(!in_a(&e1_pair(), TOL).in_a);

        let mut rng = SimRng::seed_from_u64(21);
        let pair = channel::gen_rayleigh(10, &mut rng).unwrap();
        let r = in_a(&pair, TOL);
        assert!(!r.in_a && r.cut_set.is_empty() && !r.c1_holds);
    }

    #[test]
    fn bruteforce_examples() {
        assert!(in_a_bruteforce(&worked_pair(), TOL).unwrap());
        assert!(!in_a_bruteforce(&e1_pair(), TOL).unwrap());
        let mut rng = SimRng::seed_from_u64(1);
        let big = channel::gen_rayleigh(17, &mut rng).unwrap();
        assert!(in_a_bruteforce(&big, TOL).is_err());
    }

    #[test]
    fn report_serializes_with_fixed_keys() {
        let json = serde_json::to_value(in_a(&worked_pair(), TOL)).unwrap();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        for k in ["in_a", "cut_set", "gammas", "group_ratios", "c1_holds"] {
            assert!(keys.contains(&k));
        }
        assert_eq!(json["cut_set"], serde_json::json!([1]));
    }

    #[test]
    fn reduce_coupling_substitution() {
        let system = optimize::build_tc_system(&worked_pair(), 1.0).unwrap();
        assert_eq!(reduce_coupling(&system, &[1.0, 2.0, 3.0], 1, 1.0).unwrap(), vec![4.0, 5.0, 0.0]);
        assert_eq!(reduce_coupling(&system, &[1.0, 2.0, 0.0], 1, 1.0).unwrap(), vec![1.0, 2.0, 0.0]);
        assert!(reduce_coupling(&system, &[1.0, 2.0, 3.0], 1, 0.0).is_err());
        assert!(reduce_coupling(&system, &[1.0, 2.0, 3.0], 2, 1.0).is_err());
        assert!(reduce_coupling(&system, &[1.0, 2.0], 1, 1.0).is_err());
    }

    #[test]
    fn reduce_coupling_preserves_product_with_non_unit_gamma() {
        // Real channels: every link is proportional, with s = (1.6, 0.8, ...) giving gamma_1 = 2.
        let pair = ChannelPair::from_vecs(
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.6, 0.0), c(0.8, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let links = proportional_links(&pair, TOL);
        assert_eq!(links[0].0, 1);
        assert!((links[0].1 - 2.0).abs() < 1e-12);

        let system = optimize::build_tc_system(&pair, 3.0).unwrap();
        let x = [0.3, -1.2, 0.7, 2.5, -0.4];
        let x2 = reduce_coupling(&system, &x, 1, links[0].1).unwrap();
        let d = system.a() * (nalgebra::DVector::from_column_slice(&x) - nalgebra::DVector::from_column_slice(&x2));
        assert!(d.amax() <= 1e-12 * system.a().amax());
    }

    #[test]
    fn probe_pairs_cover_both_verdicts_and_agree_with_enumeration() {
        let mut rng = SimRng::seed_from_u64(11);
        let (mut inside, mut outside, mut c2_only) = (0, 0, 0);
        for k in 0..600 {
            let n = 2 + k % 7;
            let pair = probe_pair(n, &mut rng).unwrap();
            let report = in_a(&pair, TOL);
            assert_eq!(report.in_a, in_a_bruteforce(&pair, TOL).unwrap(), "pair {k}");
            match (report.in_a, report.cut_set.is_empty()) {
                (true, _) => inside += 1,
                (false, false) => c2_only += 1,
                (false, true) => outside += 1,
            }
        }
        assert!(inside > 100 && outside > 50 && c2_only > 50, "{inside} {outside} {c2_only}");
    }
}
