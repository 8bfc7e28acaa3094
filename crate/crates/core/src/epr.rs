//! Monte Carlo version of the arbiter's protocol.
//!
//! In every run Alice measures along z with probability `p_A` and along her
//! own direction otherwise; Bob does the same with `p_B`. The pair of ±1
//! outcomes is drawn from `P(a, b) = (1 + a b C) / 4`, where `C` is the
//! model correlation between the two chosen axes, so both marginals are
//! fair coins. The arbiter then estimates the players' probabilities and
//! the correlations `<ac>`, `<cb>`, `<ab>` from the list of runs.
//!
//! Runs are generated in fixed-size chunks, each with its own ChaCha stream
//! derived from the seed, so the output does not depend on how chunks are
//! scheduled across threads.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::Serialize;

use crate::correlation::{axis_a, axis_b, payoff_from_correlations, CorrelationModel, AXIS_Z};
use crate::error::{check_unit_interval, Error, Result};
use crate::game::BimatrixGame;
use crate::gfun::GFunction;
use crate::par::{map_indexed, Execution};
use crate::quantum::{dot, Vec3};

/// Runs per RNG stream.
pub const CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AliceAxis {
    Z,
    A,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BobAxis {
    Z,
    B,
}

impl fmt::Display for AliceAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AliceAxis::Z => "Z",
            AliceAxis::A => "A",
        })
    }
}

impl fmt::Display for BobAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BobAxis::Z => "Z",
            BobAxis::B => "B",
        })
    }
}

/// One run as reported to the arbiter. Outcomes are +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub alice_axis: AliceAxis,
    pub bob_axis: BobAxis,
    pub a: i8,
    pub b: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProtocolConfig {
    pub theta_a: f64,
    pub theta_b: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub model: CorrelationModel,
    pub runs: u64,
    pub seed: u64,
}

impl ProtocolConfig {
    /// Probabilities taken from `g` at the chosen directions.
    pub fn with_g(
        g: &GFunction,
        theta_a: f64,
        theta_b: f64,
        model: CorrelationModel,
        runs: u64,
        seed: u64,
    ) -> Result<Self> {
        Ok(ProtocolConfig {
            theta_a,
            theta_b,
            p_a: g.eval(theta_a)?,
            p_b: g.eval(theta_b)?,
            model,
            runs,
            seed,
        })
    }

    fn validate(&self) -> Result<()> {
        for (what, t) in [("theta_A", self.theta_a), ("theta_B", self.theta_b)] {
            if !(0.0..=std::f64::consts::PI).contains(&t) {
                return Err(Error::Domain {
                    what,
                    value: t,
                    range: "[0, pi]",
                });
            }
        }
        check_unit_interval("p_A", self.p_a)?;
        check_unit_interval("p_B", self.p_b)?;
        if self.runs == 0 {
            return Err(Error::Domain {
                what: "runs",
                value: 0.0,
                range: ">= 1",
            });
        }
        Ok(())
    }

    fn sampler(&self) -> Sampler {
        let dirs_a = [AXIS_Z, axis_a(self.theta_a)];
        let dirs_b = [AXIS_Z, axis_b(self.theta_b)];
        let mut corr = [[0.0; 2]; 2];
        for (i, &da) in dirs_a.iter().enumerate() {
            for (j, &db) in dirs_b.iter().enumerate() {
                corr[i][j] = self.model.corr_pair(da, db);
            }
        }
        Sampler {
            p_a: self.p_a,
            p_b: self.p_b,
            corr,
        }
    }
}

/// Per-config constants needed to draw a run.
#[derive(Clone, Copy, Debug)]
pub struct Sampler {
    p_a: f64,
    p_b: f64,
    /// Correlation indexed by (Alice uses her own axis, Bob uses his).
    corr: [[f64; 2]; 2],
}

impl Sampler {
    pub fn new(config: &ProtocolConfig) -> Result<Self> {
        config.validate()?;
        Ok(config.sampler())
    }

    /// Draws one run.
    pub fn sample_run<R: Rng + ?Sized>(&self, rng: &mut R) -> RunRecord {
        let alice_own = rng.random::<f64>() >= self.p_a;
        let bob_own = rng.random::<f64>() >= self.p_b;
        let c = self.corr[usize::from(alice_own)][usize::from(bob_own)];
        let a: i8 = if rng.random_bool(0.5) { 1 } else { -1 };
        let same = rng.random::<f64>() < 0.5 * (1.0 + c);
        RunRecord {
            alice_axis: if alice_own { AliceAxis::A } else { AliceAxis::Z },
            bob_axis: if bob_own { BobAxis::B } else { BobAxis::Z },
            a,
            b: if same { a } else { -a },
        }
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn chunk_len(runs: u64, chunk: u64) -> u64 {
    CHUNK.min(runs - chunk * CHUNK)
}

fn chunk_count(runs: u64) -> usize {
    runs.div_ceil(CHUNK) as usize
}

pub fn run_protocol(config: &ProtocolConfig) -> Result<Vec<RunRecord>> {
    run_protocol_with(config, Execution::default())
}

/// All runs, in order. Identical for a given config whatever `exec` is.
pub fn run_protocol_with(config: &ProtocolConfig, exec: Execution) -> Result<Vec<RunRecord>> {
    let sampler = Sampler::new(config)?;
    let chunks = map_indexed(chunk_count(config.runs), exec, |c| {
        let mut rng = chunk_rng(config.seed, c as u64);
        (0..chunk_len(config.runs, c as u64))
            .map(|_| sampler.sample_run(&mut rng))
            .collect::<Vec<_>>()
    });
    Ok(chunks.concat())
}

/// Simulates and reduces in one pass without keeping the runs.
pub fn simulate_report(config: &ProtocolConfig, exec: Execution) -> Result<ArbiterReport> {
    let sampler = Sampler::new(config)?;
    let tallies = map_indexed(chunk_count(config.runs), exec, |c| {
        let mut rng = chunk_rng(config.seed, c as u64);
        let mut t = Tally::default();
        for _ in 0..chunk_len(config.runs, c as u64) {
            t.add(&sampler.sample_run(&mut rng));
        }
        t
    });
    let total = tallies.into_iter().fold(Tally::default(), Tally::merge);
    total.report()
}

/// Sufficient statistics of a run list. Merging is associative, so chunks
/// can be reduced in any grouping.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    runs: u64,
    alice_z: u64,
    bob_z: u64,
    /// Indexed by (Alice own axis, Bob own axis).
    count: [[u64; 2]; 2],
    sum: [[i64; 2]; 2],
}

impl Tally {
    pub fn add(&mut self, r: &RunRecord) {
        let i = usize::from(r.alice_axis == AliceAxis::A);
        let j = usize::from(r.bob_axis == BobAxis::B);
        self.runs += 1;
        self.alice_z += u64::from(i == 0);
        self.bob_z += u64::from(j == 0);
        self.count[i][j] += 1;
        self.sum[i][j] += i64::from(r.a * r.b);
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.runs += other.runs;
        self.alice_z += other.alice_z;
        self.bob_z += other.bob_z;
        for i in 0..2 {
            for j in 0..2 {
                self.count[i][j] += other.count[i][j];
                self.sum[i][j] += other.sum[i][j];
            }
        }
        self
    }

    pub fn report(&self) -> Result<ArbiterReport> {
        if self.runs == 0 {
            return Err(Error::Precondition("no runs to report on".into()));
        }
        let mean = |i: usize, j: usize| (self.count[i][j] > 0).then(|| self.sum[i][j] as f64 / self.count[i][j] as f64);
        let n = self.runs as f64;
        let counts = PairCounts {
            zz: self.count[0][0],
            az: self.count[1][0],
            zb: self.count[0][1],
            ab: self.count[1][1],
        };
        let (ac, cb, ab, cc) = (mean(1, 0), mean(0, 1), mean(1, 1), mean(0, 0));
        let missing = [("ac", ac), ("cb", cb), ("ab", ab), ("cc", cc)]
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(k, _)| *k)
            .collect();
        Ok(ArbiterReport {
            runs: self.runs,
            p_a_hat: self.alice_z as f64 / n,
            p_b_hat: self.bob_z as f64 / n,
            ac,
            cb,
            ab,
            cc,
            counts,
            missing,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairCounts {
    pub zz: u64,
    pub az: u64,
    pub zb: u64,
    pub ab: u64,
}

/// The arbiter's estimates. A correlation is `None` when its axis pair
/// never occurred; it is listed in `missing`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArbiterReport {
    pub runs: u64,
    pub p_a_hat: f64,
    pub p_b_hat: f64,
    /// Alice's own axis against Bob's z.
    pub ac: Option<f64>,
    /// Alice's z against Bob's own axis.
    pub cb: Option<f64>,
    pub ab: Option<f64>,
    /// Both along z. Kept separate from the other pairs.
    pub cc: Option<f64>,
    pub counts: PairCounts,
    pub missing: Vec<&'static str>,
}

pub fn arbiter_report(records: &[RunRecord]) -> Result<ArbiterReport> {
    let mut t = Tally::default();
    for r in records {
        t.add(r);
    }
    t.report()
}

/// Payoffs from the estimated `<ac>` and `<cb>`.
pub fn reward(report: &ArbiterReport, game: &BimatrixGame, g: &GFunction) -> Result<(f64, f64)> {
    let ac = report.ac.ok_or(Error::InsufficientData("ac"))?;
    let cb = report.cb.ok_or(Error::InsufficientData("cb"))?;
    payoff_from_correlations(game, g, ac.clamp(-1.0, 1.0), cb.clamp(-1.0, 1.0))
}

/// `run,axisA,axisB,a,b` rows, numbered from 0.
pub fn write_csv<W: std::io::Write>(records: &[RunRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "run,axisA,axisB,a,b")?;
    for (i, r) in records.iter().enumerate() {
        writeln!(w, "{i},{},{},{},{}", r.alice_axis, r.bob_axis, r.a, r.b)?;
    }
    Ok(())
}

/// Hidden-variable sign model: a shared direction `lambda` uniform on the
/// sphere, `a = sign(lambda . dir_a)`, `b = -sign(lambda . dir_b)`. Returns
/// the sampled correlation, which tends to `-1 + 2 phi / pi`.
pub fn sphere_model_correlation(dir_a: Vec3, dir_b: Vec3, samples: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0i64;
    for _ in 0..samples {
        let l: [f64; 3] = UnitSphere.sample(&mut rng);
        let a = dot(l, dir_a).signum();
        let b = -dot(l, dir_b).signum();
        sum += (a * b) as i64;
    }
    sum as f64 / samples as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn config(model: CorrelationModel, ta: f64, tb: f64, pa: f64, pb: f64, runs: u64, seed: u64) -> ProtocolConfig {
        ProtocolConfig {
            theta_a: ta,
            theta_b: tb,
            p_a: pa,
            p_b: pb,
            model,
            runs,
            seed,
        }
    }

    #[test]
    fn singlet_along_z_always_disagrees() {
        let c = config(CorrelationModel::Singlet, 1.0, 1.0, 1.0, 1.0, 5000, 7);
        let runs = run_protocol(&c).unwrap();
        assert!(runs.iter().all(|r| r.a == -r.b && r.alice_axis == AliceAxis::Z));
        let rep = arbiter_report(&runs).unwrap();
        assert_eq!(rep.p_a_hat, 1.0);
        assert_eq!(rep.ac, None);
        assert_eq!(rep.cc, Some(-1.0));
        assert!(rep.missing.contains(&"ac"));
    }

    #[test]
    fn classical_cross_plane_matches_pair_law() {
        let model = CorrelationModel::Classical;
        let c = config(model.clone(), FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, 200_000, 3);
        let rep = simulate_report(&c, Execution::default()).unwrap();
        let want = model.corr_pair(axis_a(FRAC_PI_2), axis_b(FRAC_PI_2));
        assert!((rep.ab.unwrap() - want).abs() < 0.01);
    }

    #[test]
    fn marginals_are_fair() {
        let c = config(CorrelationModel::Singlet, 0.7, 2.0, 0.3, 0.6, 200_000, 11);
        let runs = run_protocol(&c).unwrap();
        let heads_a = runs.iter().filter(|r| r.a == 1).count() as f64 / runs.len() as f64;
        let heads_b = runs.iter().filter(|r| r.b == 1).count() as f64 / runs.len() as f64;
        assert!((heads_a - 0.5).abs() < 0.005 && (heads_b - 0.5).abs() < 0.005);
    }

    #[test]
    fn run_counts_and_determinism() {
        let mut c = config(CorrelationModel::Singlet, 1.0, 0.5, 0.5, 0.5, 0, 1);
        assert!(run_protocol(&c).is_err());
        c.runs = 1;
        assert_eq!(run_protocol(&c).unwrap().len(), 1);
        c.runs = 3 * CHUNK + 17;
        let a = run_protocol_with(&c, Execution::Sequential).unwrap();
        let b = run_protocol_with(&c, Execution::Parallel).unwrap();
        assert_eq!(a.len() as u64, c.runs);
        assert_eq!(a, b);
        assert_eq!(
            arbiter_report(&a).unwrap(),
            simulate_report(&c, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn synthetic_list() {
        let rec = |a: i8, b: i8| RunRecord {
            alice_axis: AliceAxis::A,
            bob_axis: BobAxis::Z,
            a,
            b,
        };
        let list = [rec(1, 1), rec(-1, -1), rec(1, 1), rec(-1, -1)];
        let rep = arbiter_report(&list).unwrap();
        assert_eq!(rep.ac, Some(1.0));
        assert_eq!(rep.p_a_hat, 0.0);
        assert!(arbiter_report(&[]).is_err());
    }

    #[test]
    fn reward_requires_both_pairs() {
        let rec = RunRecord {
            alice_axis: AliceAxis::A,
            bob_axis: BobAxis::B,
            a: 1,
            b: 1,
        };
        let rep = arbiter_report(&[rec]).unwrap();
        let g1 = GFunction::parse("g1").unwrap();
        let err = reward(&rep, &BimatrixGame::named("pd1").unwrap(), &g1).unwrap_err();
        assert_eq!(err, Error::InsufficientData("ac"));
    }

    #[test]
    fn classical_reward_tracks_game() {
        let g1 = GFunction::parse("g1").unwrap();
        let pd = BimatrixGame::named("pd1").unwrap();
        let (ta, tb) = (1.1, 2.3);
        let c = ProtocolConfig::with_g(&g1, ta, tb, CorrelationModel::Classical, 400_000, 5).unwrap();
        let rep = simulate_report(&c, Execution::default()).unwrap();
        let got = reward(&rep, &pd, &g1).unwrap();
        let want = pd.payoff_unchecked(g1.eval(ta).unwrap(), g1.eval(tb).unwrap());
        assert!((got.0 - want.0).abs() < 0.05 && (got.1 - want.1).abs() < 0.05);
    }

    #[test]
    fn sphere_oracle_matches_classical_law() {
        for (ta, tb) in [(0.3, 1.0), (FRAC_PI_2, FRAC_PI_2), (2.5, 0.2)] {
            let (a, b) = (axis_a(ta), axis_b(tb));
            let got = sphere_model_correlation(a, b, 200_000, 9);
            let want = CorrelationModel::Classical.corr_pair(a, b);
            assert!((got - want).abs() < 0.01, "{got} vs {want}");
        }
        let z = sphere_model_correlation(AXIS_Z, AXIS_Z, 1000, 1);
        assert_eq!(z, -1.0);
    }

    #[test]
    fn csv_dump() {
        let rec = RunRecord {
            alice_axis: AliceAxis::Z,
            bob_axis: BobAxis::B,
            a: -1,
            b: 1,
        };
        let mut out = Vec::new();
        write_csv(&[rec], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "run,axisA,axisB,a,b\n0,Z,B,-1,1\n");
    }
}
