//! Seeded Monte Carlo harness: one channel pair per (size, trial), evaluated
//! under every configured architecture, written out as CSV.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::adversarial::{in_a, DEFAULT_MEMBERSHIP_TOL};
use crate::architecture::{ArchSelector, ArchitectureSpec, DEFAULT_Z0};
use crate::channel::{self, ChannelPair};
use crate::error::{Error, Result};
use crate::numeric::DEFAULT_RANK_RTOL;
use crate::optimize::optimize;
use crate::rng::{mix64, SimRng};

pub const RESULTS_HEADER: [&str; 10] =
    ["scenario", "n", "arch", "trial", "seed", "p_r", "p_bar_full", "ratio_full", "residual_norm", "consistent"];

pub const SUMMARY_HEADER: [&str; 9] =
    ["scenario", "n", "arch", "trials", "mean_ratio", "std_ratio", "min_ratio", "max_ratio", "consistent_fraction"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Rayleigh,
    GcFavorable,
    GcAdversarial,
    TcAdversarial,
    Los,
}

impl Scenario {
    pub const ALL: [Scenario; 5] =
        [Scenario::Rayleigh, Scenario::GcFavorable, Scenario::GcAdversarial, Scenario::TcAdversarial, Scenario::Los];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Rayleigh => "rayleigh",
            Scenario::GcFavorable => "gc_favorable",
            Scenario::GcAdversarial => "gc_adversarial",
            Scenario::TcAdversarial => "tc_adversarial",
            Scenario::Los => "los",
        }
    }

    /// Group size used by the group-structured generators when none is given.
    pub fn default_group_size(self) -> usize {
        match self {
            Scenario::GcAdversarial => 4,
            _ => 2,
        }
    }

    fn uses_groups(self) -> bool {
        matches!(self, Scenario::GcFavorable | Scenario::GcAdversarial)
    }

    /// Draws one pair for this scenario.
    pub fn generate(self, n: usize, group_size: usize, q: Option<usize>, rng: &mut SimRng) -> Result<ChannelPair> {
        match self {
            Scenario::Rayleigh => channel::gen_rayleigh(n, rng),
            Scenario::GcFavorable => channel::gen_gc_favorable(n, group_size, rng),
            Scenario::GcAdversarial => channel::gen_gc_adversarial(n, group_size, rng),
            Scenario::TcAdversarial => channel::gen_tc_adversarial(n, q, rng),
            Scenario::Los => channel::gen_los(n, rng),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::input(format!("unknown scenario '{s}'")))
    }
}

impl Serialize for Scenario {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub archs: Vec<ArchSelector>,
    pub seed: u64,
    pub z0: f64,
    /// Swap extent for `tc_adversarial`; `None` swaps every adjacent pair.
    pub q_override: Option<usize>,
    /// Group size for the group-structured generators; `None` uses the scenario default.
    pub group_size: Option<usize>,
    pub rank_rtol: f64,
    /// Adds an `in_a` column computed for each generated pair.
    pub check_membership: bool,
    /// Worker cap; `None` lets rayon decide. Never changes the output.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    /// Defaults: sizes 8, 16, …, 64; 1000 trials; sc, gc:2, gc:4, tc; seed 0; Z₀ = 50.
    pub fn new(scenario: Scenario) -> Self {
        ExperimentConfig {
            scenario,
            sizes: (1..=8).map(|k| 8 * k).collect(),
            trials: 1000,
            archs: vec![
                ArchSelector::Single,
                ArchSelector::UniformGroups(2),
                ArchSelector::UniformGroups(4),
                ArchSelector::Tree,
            ],
            seed: 0,
            z0: DEFAULT_Z0,
            q_override: None,
            group_size: None,
            rank_rtol: DEFAULT_RANK_RTOL,
            check_membership: false,
            threads: None,
        }
    }

    pub fn effective_group_size(&self) -> usize {
        self.group_size.unwrap_or_else(|| self.scenario.default_group_size())
    }

    fn scenario_label(&self, n: usize) -> String {
        match self.scenario {
            Scenario::TcAdversarial => {
                let q = self.q_override.unwrap_or_else(|| channel::default_q(n));
                format!("{}:q={q}", self.scenario)
            }
            s => s.name().to_string(),
        }
    }

    /// Rejects configurations that would fail part-way through a run.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::input("trials must be at least 1"));
        }
        if self.sizes.is_empty() || self.archs.is_empty() {
            return Err(Error::input("at least one size and one architecture are required"));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 2) {
            return Err(Error::input(format!("size {n} is below the minimum of 2")));
        }
        if !(self.z0 > 0.0 && self.z0.is_finite()) {
            return Err(Error::input(format!("reference impedance {} must be positive", self.z0)));
        }
        if !(self.rank_rtol > 0.0 && self.rank_rtol < 1.0) {
            return Err(Error::input("rank tolerance must lie in (0, 1)"));
        }
        if self.threads == Some(0) {
            return Err(Error::input("thread count must be positive"));
        }
        let k = self.effective_group_size();
        for &n in &self.sizes {
            for arch in &self.archs {
                arch.resolve(n)?;
            }
            if self.scenario.uses_groups() && (k == 0 || n % k != 0) {
                return Err(Error::input(format!("group size {k} does not divide size {n}")));
            }
            if self.scenario == Scenario::TcAdversarial {
                if let Some(q) = self.q_override {
                    if q % 2 == 0 || q >= n {
                        return Err(Error::input(format!("q = {q} must be odd and below size {n}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One (pair, architecture) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub scenario: String,
    pub n: usize,
    pub arch: String,
    pub trial: usize,
    pub seed: u64,
    pub p_r: f64,
    pub p_bar_full: f64,
    pub ratio_full: f64,
    pub residual_norm: f64,
    pub consistent: bool,
    pub in_a: Option<bool>,
}

fn run_trial(
    config: &ExperimentConfig,
    archs: &[ArchitectureSpec],
    size_index: usize,
    trial: usize,
) -> Result<Vec<TrialRecord>> {
    let n = config.sizes[size_index];
    let seed = mix64(config.seed, size_index as u64, trial as u64);
    let mut rng = SimRng::seed_from_u64(seed);
    let pair = config.scenario.generate(n, config.effective_group_size(), config.q_override, &mut rng)?;
    let membership = config.check_membership.then(|| in_a(&pair, DEFAULT_MEMBERSHIP_TOL).in_a);
    let scenario = config.scenario_label(n);
    config
        .archs
        .iter()
        .zip(archs)
        .map(|(label, arch)| {
            let res = optimize(&pair, arch, config.z0, config.rank_rtol)?;
            Ok(TrialRecord {
                scenario: scenario.clone(),
                n,
                arch: label.to_string(),
                trial,
                seed,
                p_r: res.p_r,
                p_bar_full: res.p_bar_full,
                ratio_full: res.ratio_full,
                residual_norm: res.residual_norm,
                consistent: res.consistent,
                in_a: membership,
            })
        })
        .collect()
}

/// Runs every (size, trial) and returns records ordered by size, trial, then
/// architecture (in configuration order). The output depends only on the
/// configuration, not on `threads`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let resolved: Vec<Vec<ArchitectureSpec>> =
        config.sizes.iter().map(|&n| config.archs.iter().map(|a| a.resolve(n)).collect()).collect::<Result<_>>()?;
    let tasks: Vec<(usize, usize)> =
        (0..config.sizes.len()).flat_map(|s| (0..config.trials).map(move |t| (s, t))).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::input(format!("cannot start worker pool: {e}")))?;
    let per_trial: Vec<Vec<TrialRecord>> =
        pool.install(|| tasks.par_iter().map(|&(s, t)| run_trial(config, &resolved[s], s, t)).collect::<Result<_>>())?;
    Ok(per_trial.into_iter().flatten().collect())
}

fn fmt_f64(v: f64) -> String {
    // `Display` for f64 is the shortest string that parses back to the same value.
    format!("{v}")
}

/// Writes the per-trial CSV; `in_a` is appended as an extra column when any
/// record carries it.
pub fn write_results_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let with_membership = records.iter().any(|r| r.in_a.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = RESULTS_HEADER.to_vec();
    if with_membership {
        header.push("in_a");
    }
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.scenario.clone(),
            r.n.to_string(),
            r.arch.clone(),
            r.trial.to_string(),
            r.seed.to_string(),
            fmt_f64(r.p_r),
            fmt_f64(r.p_bar_full),
            fmt_f64(r.ratio_full),
            fmt_f64(r.residual_norm),
            r.consistent.to_string(),
        ];
        if with_membership {
            row.push(r.in_a.map(|b| b.to_string()).unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub n: usize,
    pub arch: String,
    pub trials: usize,
    pub mean_ratio: f64,
    /// Population standard deviation.
    pub std_ratio: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub consistent_fraction: f64,
}

/// Mean, population standard deviation, extremes and consistency rate of
/// `ratio_full`, grouped by (scenario, n, arch) in order of first appearance.
pub fn summarize(records: &[TrialRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::input("cannot summarize an empty record list"));
    }
    let mut keys: Vec<(&str, usize, &str)> = Vec::new();
    let mut buckets: Vec<Vec<&TrialRecord>> = Vec::new();
    for r in records {
        let key = (r.scenario.as_str(), r.n, r.arch.as_str());
        match keys.iter().position(|k| *k == key) {
            Some(i) => buckets[i].push(r),
            None => {
                keys.push(key);
                buckets.push(vec![r]);
            }
        }
    }
    Ok(keys
        .into_iter()
        .zip(buckets)
        .map(|((scenario, n, arch), rows)| {
            let count = rows.len() as f64;
            let mean = rows.iter().map(|r| r.ratio_full).sum::<f64>() / count;
            let var = rows.iter().map(|r| (r.ratio_full - mean).powi(2)).sum::<f64>() / count;
            SummaryRow {
                scenario: scenario.to_string(),
                n,
                arch: arch.to_string(),
                trials: rows.len(),
                mean_ratio: mean,
                std_ratio: var.sqrt(),
                min_ratio: rows.iter().map(|r| r.ratio_full).fold(f64::INFINITY, f64::min),
                max_ratio: rows.iter().map(|r| r.ratio_full).fold(f64::NEG_INFINITY, f64::max),
                consistent_fraction: rows.iter().filter(|r| r.consistent).count() as f64 / count,
            }
        })
        .collect())
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.scenario.clone(),
            r.n.to_string(),
            r.arch.clone(),
            r.trials.to_string(),
            fmt_f64(r.mean_ratio),
            fmt_f64(r.std_ratio),
            fmt_f64(r.min_ratio),
            fmt_f64(r.max_ratio),
            fmt_f64(r.consistent_fraction),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(ratio: f64, consistent: bool) -> TrialRecord {
        TrialRecord {
            scenario: "rayleigh".into(),
            n: 8,
            arch: "sc".into(),
            trial: 0,
            seed: 0,
            p_r: ratio,
            p_bar_full: 1.0,
            ratio_full: ratio,
            residual_norm: 0.0,
            consistent,
            in_a: None,
        }
    }

    #[test]
    fn summary_examples() {
        let rows = summarize(&[record(0.5, true)]).unwrap();
        assert_eq!(rows[0].mean_ratio, 0.5);
        assert_eq!(rows[0].std_ratio, 0.0);

        let rows = summarize(&[record(0.4, true), record(0.6, false)]).unwrap();
        assert!((rows[0].mean_ratio - 0.5).abs() < 1e-15);
        assert!((rows[0].std_ratio - 0.1).abs() < 1e-15);
        assert_eq!((rows[0].min_ratio, rows[0].max_ratio), (0.4, 0.6));
        assert_eq!(rows[0].consistent_fraction, 0.5);

        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn summary_groups_by_key() {
        let mut b = record(1.0, true);
        b.arch = "tc".into();
        let rows = summarize(&[record(0.5, true), b, record(0.7, true)]).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].arch, "sc");
        assert_eq!(rows[0].trials, 2);
        assert_eq!(rows[1].arch, "tc");
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
        assert!("fading".parse::<Scenario>().is_err());
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::new(Scenario::Rayleigh);
        c.sizes = vec![8];
        c.trials = 2;
        assert!(c.validate().is_ok());

        let mut bad = c.clone();
        bad.trials = 0;
        assert!(bad.validate().is_err());
        let mut bad = c.clone();
        bad.sizes = vec![1];
        assert!(bad.validate().is_err());
        let mut bad = c.clone();
        bad.sizes = vec![6];
        assert!(bad.validate().is_err(), "gc:4 needs 4 | n");
        let mut bad = c.clone();
        bad.scenario = Scenario::GcAdversarial;
        bad.archs = vec![ArchSelector::Single];
        bad.sizes = vec![6];
        assert!(bad.validate().is_err(), "generator group size 4 must divide n");
        let mut bad = c.clone();
        bad.scenario = Scenario::TcAdversarial;
        bad.q_override = Some(2);
        assert!(bad.validate().is_err());
        let mut bad = c;
        bad.threads = Some(0);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn small_run_is_ordered_and_deterministic() {
        let mut c = ExperimentConfig::new(Scenario::Rayleigh);
        c.sizes = vec![8];
        c.trials = 3;
        c.archs = vec![ArchSelector::Single];
        c.seed = 1;
        let a = run_experiment(&c).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.iter().map(|r| r.trial).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(a, run_experiment(&c).unwrap());
    }

    #[test]
    fn tc_label_records_q() {
        let mut c = ExperimentConfig::new(Scenario::TcAdversarial);
        assert_eq!(c.scenario_label(64), "tc_adversarial:q=63");
        c.q_override = Some(5);
        assert_eq!(c.scenario_label(64), "tc_adversarial:q=5");
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_results_csv(&[record(0.5, true)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), RESULTS_HEADER.join(","));
        assert_eq!(lines.next().unwrap(), "rayleigh,8,sc,0,0,0.5,1,0.5,0,true");

        let mut with = record(0.5, true);
        with.in_a = Some(false);
        let mut buf = Vec::new();
        write_results_csv(&[with], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(&format!("{},in_a\n", RESULTS_HEADER.join(","))));
        assert!(text.trim_end().ends_with(",true,false"));

        let mut buf = Vec::new();
        write_summary_csv(&summarize(&[record(0.5, true)]).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(&SUMMARY_HEADER.join(",")));
    }
}
