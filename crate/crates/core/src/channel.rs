//! Channel pairs, their JSON file format, and the scenario generators.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adversarial::{self, DEFAULT_MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::numeric::{norm2, Complex64, ComplexVec};
use crate::rng::SimRng;

/// Resampling budget for [`gen_tc_adversarial`].
pub const TC_ADVERSARIAL_RETRIES: usize = 100;

/// Swapped pairs whose moduli agree within this relative tolerance are resampled.
const SWAP_MODULUS_RTOL: f64 = 1e-6;

/// A Tx→RIS / RIS→Rx channel pair with nonzero, equal-length vectors.
///
/// Transmit power is fixed to one and the direct Tx→Rx path is absent, so the
/// pair fully determines the received power for a given scattering matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPair {
    h_r: ComplexVec,
    h_t: ComplexVec,
}

impl ChannelPair {
    pub fn new(h_r: ComplexVec, h_t: ComplexVec) -> Result<Self> {
        if h_r.len() != h_t.len() {
            return Err(Error::input(format!("h_r has {} entries but h_t has {}", h_r.len(), h_t.len())));
        }
        if h_r.norm() == 0.0 || h_t.norm() == 0.0 {
            return Err(Error::input("channel vectors must have positive norm"));
        }
        Ok(ChannelPair { h_r, h_t })
    }

    pub fn from_vecs(h_r: Vec<Complex64>, h_t: Vec<Complex64>) -> Result<Self> {
        ChannelPair::new(ComplexVec::new(h_r)?, ComplexVec::new(h_t)?)
    }

    /// Number of RIS elements.
    pub fn n(&self) -> usize {
        self.h_r.len()
    }

    /// RIS→Rx channel.
    pub fn h_r(&self) -> &ComplexVec {
        &self.h_r
    }

    /// Tx→RIS channel.
    pub fn h_t(&self) -> &ComplexVec {
        &self.h_t
    }

    /// Unit-norm versions `(ĥ_R, ĥ_T)`.
    pub fn normalized(&self) -> (ComplexVec, ComplexVec) {
        (
            normalize(&self.h_r).expect("norm checked at construction"),
            normalize(&self.h_t).expect("norm checked at construction"),
        )
    }

    /// Multiplies `h_r` by `c_r` and `h_t` by `c_t`.
    pub fn scaled(&self, c_r: f64, c_t: f64) -> Result<Self> {
        ChannelPair::from_vecs(self.h_r.iter().map(|z| z * c_r).collect(), self.h_t.iter().map(|z| z * c_t).collect())
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string(&ChannelFile::from(self))?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ChannelFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        ChannelPair::from_json_str(&fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut s = self.to_json_string()?;
        s.push('\n');
        fs::write(path, s)?;
        Ok(())
    }
}

/// On-disk layout: `{"n": N, "h_r": [[re, im], …], "h_t": [[re, im], …]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    n: usize,
    h_r: Vec<[f64; 2]>,
    h_t: Vec<[f64; 2]>,
}

impl From<&ChannelPair> for ChannelFile {
    fn from(pair: &ChannelPair) -> Self {
        let pack = |v: &ComplexVec| v.iter().map(|z| [z.re, z.im]).collect();
        ChannelFile { n: pair.n(), h_r: pack(&pair.h_r), h_t: pack(&pair.h_t) }
    }
}

impl TryFrom<ChannelFile> for ChannelPair {
    type Error = Error;

    fn try_from(file: ChannelFile) -> Result<Self> {
        if file.h_r.len() != file.n || file.h_t.len() != file.n {
            return Err(Error::input(format!(
                "declared n = {} but h_r has {} and h_t has {} entries",
                file.n,
                file.h_r.len(),
                file.h_t.len()
            )));
        }
        let unpack = |v: Vec<[f64; 2]>| v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        ChannelPair::from_vecs(unpack(file.h_r), unpack(file.h_t))
    }
}

/// Returns `v / ‖v‖₂`.
pub fn normalize(v: &ComplexVec) -> Result<ComplexVec> {
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::input("cannot normalize the zero vector"));
    }
    ComplexVec::new(v.iter().map(|z| z / norm).collect())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::input("number of elements must be at least 1"));
    }
    Ok(())
}

fn check_groups(n: usize, group_size: usize) -> Result<()> {
    check_n(n)?;
    if group_size == 0 || !n.is_multiple_of(group_size) {
        return Err(Error::input(format!("group size {group_size} does not divide n = {n}")));
    }
    Ok(())
}

fn rayleigh_vec(n: usize, rng: &mut SimRng) -> Vec<Complex64> {
    (0..n).map(|_| rng.complex_normal()).collect()
}

/// I.i.d. unit-variance circularly-symmetric Gaussian entries in both vectors.
pub fn gen_rayleigh(n: usize, rng: &mut SimRng) -> Result<ChannelPair> {
    check_n(n)?;
    let h_r = rayleigh_vec(n, rng);
    let h_t = rayleigh_vec(n, rng);
    ChannelPair::from_vecs(h_r, h_t)
}

/// Line-of-sight pair: constant-modulus entries with uniform phases.
pub fn gen_los(n: usize, rng: &mut SimRng) -> Result<ChannelPair> {
    check_n(n)?;
    let c_r = rng.uniform(0.1, 10.0);
    let c_t = rng.uniform(0.1, 10.0);
    let h_r = (0..n).map(|_| Complex64::from_polar(c_r, rng.phase())).collect();
    let h_t = (0..n).map(|_| Complex64::from_polar(c_t, rng.phase())).collect();
    ChannelPair::from_vecs(h_r, h_t)
}

/// Pair for which uniform groups of `group_size` can reach the full bound:
/// each group of `h_t` has norm `γ·‖[h_r]_g‖` with a single global `γ`.
pub fn gen_gc_favorable(n: usize, group_size: usize, rng: &mut SimRng) -> Result<ChannelPair> {
    check_groups(n, group_size)?;
    let h_r = rayleigh_vec(n, rng);
    let gamma = rng.uniform(0.1, 10.0);
    let mut h_t = Vec::with_capacity(n);
    for group in h_r.chunks(group_size) {
        let target = gamma * norm2(group);
        let dir = rayleigh_vec(group_size, rng);
        let dn = norm2(&dir);
        h_t.extend(dir.into_iter().map(|z| z * (target / dn)));
    }
    ChannelPair::from_vecs(h_r, h_t)
}

/// Pair adversarial to uniform groups of `group_size`: `h_r` has uniform
/// real/imaginary parts on (−1, 1) and each group of `h_t` is a random direction
/// scaled by an independent `a_g ~ U(0, 1)`.
pub fn gen_gc_adversarial(n: usize, group_size: usize, rng: &mut SimRng) -> Result<ChannelPair> {
    check_groups(n, group_size)?;
    let box_uniform = |rng: &mut SimRng| Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    let h_r: Vec<Complex64> = (0..n).map(|_| box_uniform(rng)).collect();
    let mut h_t = Vec::with_capacity(n);
    for _ in 0..n / group_size {
        let f: Vec<Complex64> = (0..group_size).map(|_| box_uniform(rng)).collect();
        let a = rng.uniform(0.0, 1.0);
        let fn_ = norm2(&f);
        h_t.extend(f.into_iter().map(|z| z * (a / fn_)));
    }
    ChannelPair::from_vecs(h_r, h_t)
}

/// Default swap extent for [`gen_tc_adversarial`]: the largest odd `q ≤ n − 1`.
pub fn default_q(n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    if (n - 1) % 2 == 1 {
        n - 1
    } else {
        n - 2
    }
}

/// Pair adversarial to the tridiagonal architecture.
///
/// `ĥ_R` is a normalized Rayleigh draw and `h_T = ĥ_T` is `ĥ_R` with entries
/// `(i, i+1)` exchanged for `i = 1, 3, …, q` (1-based). Draws are rejected when
/// a swapped pair has (nearly) equal moduli, when the induced proportional-link
/// set differs from `{1, 3, …, q}`, or when the pair is not a member of the
/// adversarial set.
pub fn gen_tc_adversarial(n: usize, q: Option<usize>, rng: &mut SimRng) -> Result<ChannelPair> {
    if n < 2 {
        return Err(Error::input("tree-adversarial channels need n >= 2"));
    }
    let q = q.unwrap_or_else(|| default_q(n));
    if q.is_multiple_of(2) || q >= n {
        return Err(Error::input(format!("q = {q} must be odd and in [1, {}]", n - 1)));
    }
    let expected_cuts: Vec<usize> = (1..=q).step_by(2).collect();

    for _ in 0..TC_ADVERSARIAL_RETRIES {
        let raw = rayleigh_vec(n, rng);
        let norm = norm2(&raw);
        let r_hat: Vec<Complex64> = raw.iter().map(|z| z / norm).collect();

        let degenerate_swap = expected_cuts.iter().any(|&i| {
            let (a, b) = (r_hat[i - 1].norm(), r_hat[i].norm());
            (a - b).abs() <= SWAP_MODULUS_RTOL * a.max(b)
        });
        if degenerate_swap {
            continue;
        }

        let mut t_hat = r_hat.clone();
        for &i in &expected_cuts {
            t_hat.swap(i - 1, i);
        }
        let pair = ChannelPair::from_vecs(r_hat, t_hat)?;
        let report = adversarial::in_a(&pair, DEFAULT_MEMBERSHIP_TOL);
        if report.cut_set == expected_cuts && report.in_a {
            return Ok(pair);
        }
    }
    Err(Error::numerical(format!("no admissible tree-adversarial draw in {TC_ADVERSARIAL_RETRIES} attempts")))
}
