//! RIS architectures, susceptance patterns, the Cayley map to scattering
//! matrices, received power and its upper bounds.
//!
//! Element indices and cut positions follow the 1-based convention of the
//! textual formats (`cut_set: [1]` means "split between elements 1 and 2").
//! Ranges returned by [`partition_from_cuts`] are 0-based and half-open so
//! they can slice vectors directly.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::channel::ChannelPair;
use crate::error::{Error, Result};
use crate::numeric::{norm2, symmetric_eigen, symmetric_unitary_defects, Complex64, ComplexMatrix, RealMatrix};

/// Reference impedance used when none is given.
pub const DEFAULT_Z0: f64 = 50.0;

/// Construction-time tolerance on `max |Θ − Θᵀ|`.
pub const THETA_SYMMETRY_TOL: f64 = 1e-10;
/// Construction-time tolerance on `max |ΘᴴΘ − I|`.
pub const THETA_UNITARITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArchitectureKind {
    SingleConnected,
    GroupConnected,
    TreeTridiagonal,
    FullyConnected,
}

/// A concrete architecture for `n` elements.
///
/// Single- and fully-connected architectures are group-connected ones with
/// every cut and no cut respectively; [`ArchitectureSpec::group_cuts`] returns
/// that equivalent cut set. The tridiagonal tree has no cut set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchitectureSpec {
    kind: ArchitectureKind,
    cuts: Vec<usize>,
    n: usize,
}

impl ArchitectureSpec {
    pub fn single_connected(n: usize) -> Result<Self> {
        Self::checked(ArchitectureKind::SingleConnected, Vec::new(), n)
    }

    pub fn fully_connected(n: usize) -> Result<Self> {
        Self::checked(ArchitectureKind::FullyConnected, Vec::new(), n)
    }

    pub fn tree_tridiagonal(n: usize) -> Result<Self> {
        Self::checked(ArchitectureKind::TreeTridiagonal, Vec::new(), n)
    }

    pub fn group_connected(n: usize, cuts: Vec<usize>) -> Result<Self> {
        validate_cuts(&cuts, n)?;
        Self::checked(ArchitectureKind::GroupConnected, cuts, n)
    }

    /// Equal groups of `group_size` consecutive elements.
    pub fn uniform_groups(n: usize, group_size: usize) -> Result<Self> {
        Self::group_connected(n, uniform_cuts(n, group_size)?)
    }

    fn checked(kind: ArchitectureKind, cuts: Vec<usize>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("architecture needs at least one element"));
        }
        Ok(ArchitectureSpec { kind, cuts, n })
    }

    pub fn kind(&self) -> ArchitectureKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cut set of the equivalent group-connected architecture, or `None` for the tree.
    pub fn group_cuts(&self) -> Option<Vec<usize>> {
        match self.kind {
            ArchitectureKind::SingleConnected => Some((1..self.n).collect()),
            ArchitectureKind::FullyConnected => Some(Vec::new()),
            ArchitectureKind::GroupConnected => Some(self.cuts.clone()),
            ArchitectureKind::TreeTridiagonal => None,
        }
    }

    pub fn pattern(&self) -> SparsityPattern {
        match self.group_cuts() {
            Some(cuts) => {
                SparsityPattern::Blocks(partition_from_cuts(&cuts, self.n).expect("cuts validated at construction"))
            }
            None => SparsityPattern::Tridiagonal,
        }
    }
}

/// Textual architecture selector, independent of the element count:
/// `sc`, `tc`, `fc`, `gc:K` (uniform groups of size K) or `gc:I=2,5,9` (explicit cuts).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArchSelector {
    Single,
    Tree,
    Full,
    UniformGroups(usize),
    Cuts(Vec<usize>),
}

impl ArchSelector {
    pub fn resolve(&self, n: usize) -> Result<ArchitectureSpec> {
        match self {
            ArchSelector::Single => ArchitectureSpec::single_connected(n),
            ArchSelector::Tree => {
                if n < 2 {
                    return Err(Error::input("tridiagonal architecture needs n >= 2"));
                }
                ArchitectureSpec::tree_tridiagonal(n)
            }
            ArchSelector::Full => ArchitectureSpec::fully_connected(n),
            ArchSelector::UniformGroups(k) => ArchitectureSpec::uniform_groups(n, *k),
            ArchSelector::Cuts(cuts) => ArchitectureSpec::group_connected(n, cuts.clone()),
        }
    }
}

impl FromStr for ArchSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "sc" => return Ok(ArchSelector::Single),
            "tc" => return Ok(ArchSelector::Tree),
            "fc" => return Ok(ArchSelector::Full),
            _ => {}
        }
        let bad =
            || Error::input(format!("unrecognized architecture '{s}' (expected sc, tc, fc, gc:K or gc:I=i1,i2,...)"));
        let rest = s.strip_prefix("gc:").ok_or_else(bad)?;
        if let Some(list) = rest.strip_prefix("I=") {
            let cuts =
                list.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
            if cuts.is_empty() || cuts.windows(2).any(|w| w[0] >= w[1]) || cuts[0] == 0 {
                return Err(Error::input(format!("cuts in '{s}' must be positive and strictly increasing")));
            }
            Ok(ArchSelector::Cuts(cuts))
        } else {
            let k: usize = rest.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(Error::input("group size must be positive"));
            }
            Ok(ArchSelector::UniformGroups(k))
        }
    }
}

impl fmt::Display for ArchSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArchSelector::Single => f.write_str("sc"),
            ArchSelector::Tree => f.write_str("tc"),
            ArchSelector::Full => f.write_str("fc"),
            ArchSelector::UniformGroups(k) => write!(f, "gc:{k}"),
            ArchSelector::Cuts(cuts) => {
                let list: Vec<String> = cuts.iter().map(|c| c.to_string()).collect();
                write!(f, "gc:I={}", list.join(","))
            }
        }
    }
}

impl Serialize for ArchSelector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Checks that `cuts` is strictly increasing with every entry in `[1, n − 1]`.
pub fn validate_cuts(cuts: &[usize], n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    if let Some(&c) = cuts.iter().find(|&&c| c == 0 || c >= n) {
        return Err(Error::input(format!("cut {c} outside [1, {}]", n - 1)));
    }
    if cuts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input("cuts must be strictly increasing"));
    }
    Ok(())
}

/// Cuts splitting `n` elements into consecutive groups of `group_size`.
pub fn uniform_cuts(n: usize, group_size: usize) -> Result<Vec<usize>> {
    if n == 0 || group_size == 0 || !n.is_multiple_of(group_size) {
        return Err(Error::input(format!("group size {group_size} does not divide n = {n}")));
    }
    Ok((1..n / group_size).map(|g| g * group_size).collect())
}

/// Splits `0..n` at the 1-based `cuts` into `cuts.len() + 1` consecutive ranges.
pub fn partition_from_cuts(cuts: &[usize], n: usize) -> Result<Vec<Range<usize>>> {
    validate_cuts(cuts, n)?;
    let mut start = 0;
    let mut groups = Vec::with_capacity(cuts.len() + 1);
    for &c in cuts {
        groups.push(start..c);
        start = c;
    }
    groups.push(start..n);
    Ok(groups)
}

/// Positions a susceptance matrix may occupy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SparsityPattern {
    /// Block diagonal over consecutive 0-based ranges (dense inside each block).
    Blocks(Vec<Range<usize>>),
    Tridiagonal,
}

impl SparsityPattern {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        match self {
            SparsityPattern::Tridiagonal => i.abs_diff(j) <= 1,
            SparsityPattern::Blocks(groups) => groups.iter().any(|g| g.contains(&i) && g.contains(&j)),
        }
    }

    /// Free positions `(i, j)` with `i ≤ j`, row by row.
    pub fn free_entries(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                if self.contains(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Real symmetric susceptance matrix confined to a sparsity pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct SusceptanceMatrix {
    pattern: SparsityPattern,
    values: RealMatrix,
}

impl SusceptanceMatrix {
    pub fn zeros(pattern: SparsityPattern, n: usize) -> Self {
        SusceptanceMatrix { pattern, values: RealMatrix::zeros(n, n) }
    }

    /// Wraps a dense matrix, requiring exact symmetry and zeros off the pattern.
    pub fn from_dense(pattern: SparsityPattern, values: RealMatrix) -> Result<Self> {
        if !values.is_square() {
            return Err(Error::input("susceptance matrix must be square"));
        }
        let n = values.nrows();
        for i in 0..n {
            for j in 0..n {
                let v = values[(i, j)];
                if !v.is_finite() {
                    return Err(Error::input(format!("entry ({i}, {j}) is not finite")));
                }
                if v != values[(j, i)] {
                    return Err(Error::input("susceptance matrix must be symmetric"));
                }
                if v != 0.0 && !pattern.contains(i, j) {
                    return Err(Error::input(format!("entry ({i}, {j}) lies outside the pattern")));
                }
            }
        }
        Ok(SusceptanceMatrix { pattern, values })
    }

    /// Sets `B[i, j] = B[j, i] = v` (0-based).
    pub fn set(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        let n = self.n();
        if i >= n || j >= n {
            return Err(Error::input(format!("index ({i}, {j}) out of range for n = {n}")));
        }
        if !self.pattern.contains(i, j) {
            return Err(Error::input(format!("entry ({i}, {j}) lies outside the pattern")));
        }
        if !v.is_finite() {
            return Err(Error::input("susceptance entries must be finite"));
        }
        self.values[(i, j)] = v;
        self.values[(j, i)] = v;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn pattern(&self) -> &SparsityPattern {
        &self.pattern
    }

    pub fn as_matrix(&self) -> &RealMatrix {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }
}

/// Symmetric unitary scattering matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringMatrix {
    entries: ComplexMatrix,
}

impl ScatteringMatrix {
    /// Wraps `m` after checking symmetry and unitarity at the construction tolerances.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let check = symmetric_unitary_defects(&m, THETA_SYMMETRY_TOL, THETA_UNITARITY_TOL)?;
        if !check.ok {
            return Err(Error::numerical(format!(
                "scattering matrix defects (symmetry {:.3e}, unitarity {:.3e}) exceed tolerance",
                check.symmetry_defect, check.unitarity_defect
            )));
        }
        Ok(ScatteringMatrix { entries: m })
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.entries
    }
}

/// Cayley map `Θ = (I + jZ₀B)⁻¹ (I − jZ₀B)`.
///
/// Evaluated through `B = Q diag(λ) Qᵀ` as `Θ = Q diag((1 − jZ₀λ)/(1 + jZ₀λ)) Qᵀ`.
/// Every diagonal factor has unit modulus, so `Θ` is symmetric by
/// construction and unitary to the accuracy of `Q`, however large `Z₀B` is.
/// A direct solve with `I + jZ₀B` loses accuracy in proportion to `‖Z₀B‖`.
pub fn theta_from_susceptance(b: &SusceptanceMatrix, z0: f64) -> Result<ScatteringMatrix> {
    if !(z0 > 0.0 && z0.is_finite()) {
        return Err(Error::input(format!("reference impedance {z0} must be positive")));
    }
    let n = b.n();
    let bm = b.as_matrix();
    if bm != &bm.transpose() {
        return Err(Error::input("susceptance matrix must be symmetric"));
    }
    let blocks = match b.pattern() {
        SparsityPattern::Blocks(groups) => groups.clone(),
        SparsityPattern::Tridiagonal => std::iter::once(0..n).collect(),
    };
    // A block-diagonal B gives a block-diagonal Θ.
    let mut theta = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for g in blocks {
        let (lambda, q) = symmetric_eigen(&bm.view((g.start, g.start), (g.len(), g.len())).into_owned())?;
        let phases: Vec<Complex64> = lambda
            .iter()
            .map(|&l| {
                let den = Complex64::new(1.0, z0 * l);
                den.conj() / den
            })
            .collect();
        for i in 0..g.len() {
            for j in i..g.len() {
                let v: Complex64 = (0..g.len()).map(|k| phases[k] * (q[(i, k)] * q[(j, k)])).sum();
                theta[(g.start + i, g.start + j)] = v;
                theta[(g.start + j, g.start + i)] = v;
            }
        }
    }
    ScatteringMatrix::new(theta)
}

/// `|h_Rᴴ Θ h_T|²` (unit transmit power, no direct path).
pub fn received_power(pair: &ChannelPair, theta: &ScatteringMatrix) -> Result<f64> {
    let n = pair.n();
    if theta.n() != n {
        return Err(Error::input(format!("scattering matrix is {0}x{0} but the channels have {n} entries", theta.n())));
    }
    let t = theta.as_matrix();
    let (h_r, h_t) = (pair.h_r(), pair.h_t());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += t[(i, j)] * h_t[j];
        }
        acc += h_r[i].conj() * row;
    }
    Ok(acc.norm_sqr())
}

/// `‖h_R‖² ‖h_T‖²`: no lossless reflector can exceed this.
pub fn upper_bound_full(pair: &ChannelPair) -> f64 {
    pair.h_r().norm_sqr() * pair.h_t().norm_sqr()
}

/// `(Σ_g ‖[h_R]_g‖ ‖[h_T]_g‖)²` over the groups induced by `cuts`.
pub fn upper_bound_gc(pair: &ChannelPair, cuts: &[usize]) -> Result<f64> {
    let groups = partition_from_cuts(cuts, pair.n())?;
    let (h_r, h_t) = (pair.h_r().as_slice(), pair.h_t().as_slice());
    let sum: f64 = groups.into_iter().map(|g| norm2(&h_r[g.clone()]) * norm2(&h_t[g])).sum();
    Ok(sum * sum)
}

/// `(Σ_i |[h_R]_i| |[h_T]_i|)²`, the bound of the single-connected architecture.
pub fn upper_bound_sc(pair: &ChannelPair) -> f64 {
    let sum: f64 = pair.h_r().iter().zip(pair.h_t().iter()).map(|(r, t)| r.norm() * t.norm()).sum();
    sum * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn worked_pair() -> ChannelPair {
        ChannelPair::from_vecs(vec![c(0.0, 2.0), c(3.0, 1.0)], vec![c(1.5, 0.5), c(0.0, 1.0)]).unwrap()
    }

    fn unit_pair() -> ChannelPair {
        ChannelPair::from_vecs(vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn partitions() {
        assert_eq!(partition_from_cuts(&[2, 3], 5).unwrap(), vec![0..2, 2..3, 3..5]);
        assert_eq!(partition_from_cuts(&[], 4).unwrap(), vec![0..4]);
        assert_eq!(partition_from_cuts(&[1], 2).unwrap(), vec![0..1, 1..2]);
        assert!(partition_from_cuts(&[0], 3).is_err());
        assert!(partition_from_cuts(&[3], 3).is_err());
        assert!(partition_from_cuts(&[2, 2], 4).is_err());
        assert!(partition_from_cuts(&[2, 1], 4).is_err());
    }

    #[test]
    fn uniform_cut_sets() {
        assert_eq!(uniform_cuts(8, 2).unwrap(), vec![2, 4, 6]);
        assert_eq!(uniform_cuts(8, 8).unwrap(), Vec::<usize>::new());
        assert!(uniform_cuts(8, 3).is_err());
    }

    #[test]
    fn selector_syntax() {
        for (text, sel) in [
            ("sc", ArchSelector::Single),
            ("tc", ArchSelector::Tree),
            ("fc", ArchSelector::Full),
            ("gc:4", ArchSelector::UniformGroups(4)),
            ("gc:I=2,5,9", ArchSelector::Cuts(vec![2, 5, 9])),
        ] {
            let parsed: ArchSelector = text.parse().unwrap();
            assert_eq!(parsed, sel);
            assert_eq!(parsed.to_string(), text);
        }
        for bad in ["", "gc", "gc:", "gc:0", "gc:I=", "gc:I=3,2", "gc:I=0,1", "dc", "gc:x"] {
            assert!(bad.parse::<ArchSelector>().is_err(), "{bad}");
        }
        assert!(ArchSelector::UniformGroups(3).resolve(8).is_err());
        assert!(ArchSelector::Cuts(vec![9]).resolve(8).is_err());
        assert!(ArchSelector::Tree.resolve(1).is_err());
    }

    #[test]
    fn single_and_full_are_group_connected_extremes() {
        let sc = ArchitectureSpec::single_connected(4).unwrap();
        assert_eq!(sc.group_cuts(), Some(vec![1, 2, 3]));
        assert_eq!(sc.pattern(), SparsityPattern::Blocks(vec![0..1, 1..2, 2..3, 3..4]));
        let fc = ArchitectureSpec::fully_connected(4).unwrap();
        assert_eq!(fc.group_cuts(), Some(vec![]));
        assert_eq!(ArchitectureSpec::tree_tridiagonal(4).unwrap().group_cuts(), None);
    }

    #[test]
    fn pattern_membership() {
        let tri = SparsityPattern::Tridiagonal;
        assert!(tri.contains(2, 3) && tri.contains(3, 2) && !tri.contains(0, 2));
        assert_eq!(tri.free_entries(3), vec![(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]);
        let blocks = SparsityPattern::Blocks(vec![0..2, 2..3]);
        assert!(blocks.contains(0, 1) && !blocks.contains(1, 2));
        let mut b = SusceptanceMatrix::zeros(blocks, 3);
        assert!(b.set(1, 2, 1.0).is_err());
        b.set(1, 0, 2.0).unwrap();
        assert_eq!(b.get(0, 1), 2.0);
    }

    #[test]
    fn from_dense_validation() {
        let asym = RealMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(SusceptanceMatrix::from_dense(SparsityPattern::Tridiagonal, asym).is_err());
        let off = RealMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert!(SusceptanceMatrix::from_dense(SparsityPattern::Tridiagonal, off).is_err());
    }

    #[test]
    fn cayley_examples() {
        let b = SusceptanceMatrix::zeros(SparsityPattern::Tridiagonal, 3);
        let theta = theta_from_susceptance(&b, DEFAULT_Z0).unwrap();
        assert_eq!(theta.as_matrix(), &ComplexMatrix::identity(3, 3));

        let b = SusceptanceMatrix::from_dense(SparsityPattern::Tridiagonal, RealMatrix::from_element(1, 1, 1.0 / 50.0))
            .unwrap();
        let t = theta_from_susceptance(&b, 50.0).unwrap();
        assert_relative_eq!(t.as_matrix()[(0, 0)].re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(t.as_matrix()[(0, 0)].im, -1.0, epsilon = 1e-15);

        let diag = RealMatrix::from_row_slice(2, 2, &[-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0]);
        let b = SusceptanceMatrix::from_dense(SparsityPattern::Tridiagonal, diag).unwrap();
        let t = theta_from_susceptance(&b, 1.0).unwrap();
        let m = t.as_matrix();
        assert_relative_eq!(m[(0, 0)].re, 5.0 / 13.0, epsilon = 1e-15);
        assert_relative_eq!(m[(0, 0)].im, 12.0 / 13.0, epsilon = 1e-15);
        assert_relative_eq!(m[(1, 1)].re, 5.0 / 13.0, epsilon = 1e-15);
        assert_relative_eq!(m[(1, 1)].im, -12.0 / 13.0, epsilon = 1e-15);
        assert_eq!(m[(0, 1)], c(0.0, 0.0));

        assert!(theta_from_susceptance(&b, 0.0).is_err());
    }

    #[test]
    fn power_examples() {
        let eye2 = theta_from_susceptance(&SusceptanceMatrix::zeros(SparsityPattern::Tridiagonal, 2), 1.0).unwrap();
        assert_relative_eq!(received_power(&unit_pair(), &eye2).unwrap(), 1.0);
        assert_relative_eq!(received_power(&worked_pair(), &eye2).unwrap(), 4.0, epsilon = 1e-13);

        let diag = RealMatrix::from_row_slice(2, 2, &[-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0]);
        let b = SusceptanceMatrix::from_dense(SparsityPattern::Tridiagonal, diag).unwrap();
        let t = theta_from_susceptance(&b, 1.0).unwrap();
        assert_relative_eq!(received_power(&worked_pair(), &t).unwrap(), 6724.0 / 169.0, max_relative = 1e-14);

        let eye3 = theta_from_susceptance(&SusceptanceMatrix::zeros(SparsityPattern::Tridiagonal, 3), 1.0).unwrap();
        assert!(received_power(&worked_pair(), &eye3).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_relative_eq!(upper_bound_full(&unit_pair()), 1.0);
        assert_relative_eq!(upper_bound_full(&worked_pair()), 49.0, max_relative = 1e-15);
        let scaled = worked_pair().scaled(3.0, 1.0).unwrap();
        assert_relative_eq!(upper_bound_full(&scaled), 9.0 * 49.0, max_relative = 1e-14);

        assert_relative_eq!(upper_bound_gc(&worked_pair(), &[]).unwrap(), 49.0, max_relative = 1e-15);
        assert_relative_eq!(upper_bound_gc(&worked_pair(), &[1]).unwrap(), 40.0, max_relative = 1e-14);
        assert_relative_eq!(upper_bound_sc(&worked_pair()), 40.0, max_relative = 1e-14);
        assert!(upper_bound_gc(&worked_pair(), &[2]).is_err());

        let same = ChannelPair::from_vecs(
            vec![c(1.0, 2.0), c(-0.5, 0.3), c(0.0, 1.0)],
            vec![c(1.0, 2.0), c(-0.5, 0.3), c(0.0, 1.0)],
        )
        .unwrap();
        for cuts in [vec![], vec![1], vec![2], vec![1, 2]] {
            assert_relative_eq!(upper_bound_gc(&same, &cuts).unwrap(), upper_bound_full(&same), max_relative = 1e-14);
        }
    }
}
