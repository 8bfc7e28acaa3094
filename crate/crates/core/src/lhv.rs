//! Four-coin games and the sixteen-subset local hidden variable model.
//!
//! Alice has two observables (strategies) `S1`, `S2`, Bob has `S1'`, `S2'`;
//! each yields +1 (heads) or -1 (tails). The sixteen joint probabilities are
//! stored in four blocks, one per strategy pair in the order
//! `(S1,S1')`, `(S1,S2')`, `(S2,S1')`, `(S2,S2')`, each block ordered
//! `(+,+)`, `(+,-)`, `(-,+)`, `(-,-)`.
//!
//! A hidden variable measure assigns a weight `m_i` to each of the sixteen
//! deterministic outcome assignments; row `i` of [`SIGN_TABLE`] lists the
//! outcomes of `(S1, S1', S2, S2')` for subset `i`. Weights may be negative.
//!
//! Here `K, L, M, N` are the *cell entries* of a symmetric game (Alice's
//! payoffs at (H,H), (H,T), (T,H), (T,T)), not bilinear coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::BimatrixGame;

/// Tolerance for the consistency and normalisation relations.
pub const STATS_TOL: f64 = 1e-9;
/// Tolerance for "this weight is zero" preconditions.
pub const ZERO_TOL: f64 = 1e-12;

/// Outcomes of `(S1, S1', S2, S2')` for each subset; `+` first.
pub const SIGN_TABLE: [[i8; 4]; 16] = {
    let mut t = [[0i8; 4]; 16];
    let mut i = 0;
    while i < 16 {
        let mut k = 0;
        while k < 4 {
            t[i][k] = if (i >> (3 - k)) & 1 == 0 { 1 } else { -1 };
            k += 1;
        }
        i += 1;
    }
    t
};

/// Observable columns in [`SIGN_TABLE`].
const S1: usize = 0;
const S1P: usize = 1;
const S2: usize = 2;
const S2P: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyPair {
    S1S1,
    S1S2,
    S2S1,
    S2S2,
}

impl StrategyPair {
    pub const ALL: [StrategyPair; 4] = [
        StrategyPair::S1S1,
        StrategyPair::S1S2,
        StrategyPair::S2S1,
        StrategyPair::S2S2,
    ];

    pub fn block(self) -> usize {
        self as usize
    }

    /// Sign-table columns of Alice's and Bob's observables.
    fn columns(self) -> (usize, usize) {
        match self {
            StrategyPair::S1S1 => (S1, S1P),
            StrategyPair::S1S2 => (S1, S2P),
            StrategyPair::S2S1 => (S2, S1P),
            StrategyPair::S2S2 => (S2, S2P),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            StrategyPair::S1S1 => "S1,S1'",
            StrategyPair::S1S2 => "S1,S2'",
            StrategyPair::S2S1 => "S2,S1'",
            StrategyPair::S2S2 => "S2,S2'",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameEntries {
    pub k: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl GameEntries {
    pub fn new(k: f64, l: f64, m: f64, n: f64) -> Self {
        GameEntries { k, l, m, n }
    }

    /// `pd1` = (3, 0, 5, 1) and `pd2` = (3, 0, 5, 0.2).
    pub fn named(name: &str) -> Result<Self> {
        BimatrixGame::named(name).and_then(|g| GameEntries::from_game(&g))
    }

    /// Entries of a symmetric game, read off the row player's cells.
    pub fn from_game(game: &BimatrixGame) -> Result<Self> {
        if !game.is_symmetric() {
            return Err(Error::InvalidGame("four-coin payoffs need a symmetric game".into()));
        }
        let a = |i, j| game.cell(i, j).0;
        Ok(GameEntries::new(a(0, 0), a(0, 1), a(1, 0), a(1, 1)))
    }

    pub fn is_prisoners_dilemma(&self) -> bool {
        self.m > self.k && self.k > self.n && self.n > self.l
    }

    /// Bob's view: `L` and `M` swapped.
    fn for_bob(self) -> Self {
        GameEntries {
            l: self.m,
            m: self.l,
            ..self
        }
    }

    /// Alice's payoff when she plays heads with probability `x` and Bob
    /// with probability `y`.
    pub fn bilinear(&self, x: f64, y: f64) -> f64 {
        self.k * x * y + self.l * x * (1.0 - y) + self.m * y * (1.0 - x) + self.n * (1.0 - x) * (1.0 - y)
    }

    pub fn bilinear_pair(&self, x: f64, y: f64) -> (f64, f64) {
        (self.bilinear(x, y), self.for_bob().bilinear(x, y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FourCoinStats {
    pub p: [f64; 16],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StatsCheck {
    pub normalized: bool,
    pub consistent: bool,
    pub nonnegative: bool,
    /// Block sums minus one.
    pub block_residuals: [f64; 4],
    /// `p1+p2-p5-p6`, `p1+p3-p9-p11`, `p9+p10-p13-p14`, `p5+p7-p13-p15`.
    pub consistency_residuals: [f64; 4],
}

/// Heads probabilities: `r` for S1, `s` for S2, `r_p` for S1', `s_p` for S2'.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeadProbs {
    pub r: f64,
    pub s: f64,
    pub r_p: f64,
    pub s_p: f64,
}

impl FourCoinStats {
    pub fn block(&self, pair: StrategyPair) -> [f64; 4] {
        let b = 4 * pair.block();
        [self.p[b], self.p[b + 1], self.p[b + 2], self.p[b + 3]]
    }

    /// Independent coins with the given heads probabilities.
    pub fn from_head_probs(h: HeadProbs) -> Self {
        let block = |x: f64, y: f64| [x * y, x * (1.0 - y), (1.0 - x) * y, (1.0 - x) * (1.0 - y)];
        let mut p = [0.0; 16];
        for (k, (x, y)) in [(h.r, h.r_p), (h.r, h.s_p), (h.s, h.r_p), (h.s, h.s_p)]
            .into_iter()
            .enumerate()
        {
            p[4 * k..4 * k + 4].copy_from_slice(&block(x, y));
        }
        FourCoinStats { p }
    }

    pub fn validate(&self) -> StatsCheck {
        let p = |i: usize| self.p[i - 1];
        let block_residuals = [0, 1, 2, 3].map(|b| self.p[4 * b..4 * b + 4].iter().sum::<f64>() - 1.0);
        let consistency_residuals = [
            p(1) + p(2) - p(5) - p(6),
            p(1) + p(3) - p(9) - p(11),
            p(9) + p(10) - p(13) - p(14),
            p(5) + p(7) - p(13) - p(15),
        ];
        StatsCheck {
            normalized: block_residuals.iter().all(|r| r.abs() <= STATS_TOL),
            consistent: consistency_residuals.iter().all(|r| r.abs() <= STATS_TOL),
            nonnegative: self.p.iter().all(|&x| x >= 0.0),
            block_residuals,
            consistency_residuals,
        }
    }

    /// `r = p1+p2`, `s = p9+p10`, `r' = p1+p3`, `s' = p5+p7`.
    pub fn extract_head_probs(&self) -> Result<HeadProbs> {
        let check = self.validate();
        if !check.consistent {
            return Err(Error::Inconsistent {
                residuals: check.consistency_residuals,
            });
        }
        let p = |i: usize| self.p[i - 1];
        Ok(HeadProbs {
            r: p(1) + p(2),
            s: p(9) + p(10),
            r_p: p(1) + p(3),
            s_p: p(5) + p(7),
        })
    }

    /// The referee's recipe: each block's four probabilities weighted by
    /// `K, L, M, N` for Alice and `K, M, L, N` for Bob.
    pub fn payoff(&self, entries: &GameEntries, pair: StrategyPair) -> (f64, f64) {
        let [a, b, c, d] = self.block(pair);
        let e = entries;
        (
            e.k * a + e.l * b + e.m * c + e.n * d,
            e.k * a + e.m * b + e.l * c + e.n * d,
        )
    }
}

/// Bilinear payoffs at the head probabilities of `pair`'s two coins.
pub fn bilinear_payoff(entries: &GameEntries, h: HeadProbs, pair: StrategyPair) -> (f64, f64) {
    let x = match pair {
        StrategyPair::S1S1 | StrategyPair::S1S2 => h.r,
        _ => h.s,
    };
    let y = match pair {
        StrategyPair::S1S1 | StrategyPair::S2S1 => h.r_p,
        _ => h.s_p,
    };
    entries.bilinear_pair(x, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LhvMeasure {
    pub m: [f64; 16],
}

impl LhvMeasure {
    /// Weights must sum to one within `STATS_TOL`; negative entries are fine.
    pub fn new(m: [f64; 16]) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Precondition("measure weights must be finite".into()));
        }
        let total: f64 = m.iter().sum();
        if (total - 1.0).abs() > STATS_TOL {
            return Err(Error::Precondition(format!("measure weights sum to {total}, not 1")));
        }
        Ok(LhvMeasure { m })
    }

    /// A JSON array of sixteen numbers.
    pub fn from_json(text: &str) -> Result<Self> {
        let m: Vec<f64> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let m: [f64; 16] = m
            .try_into()
            .map_err(|v: Vec<f64>| Error::Parse(format!("expected 16 weights, got {}", v.len())))?;
        LhvMeasure::new(m)
    }

    /// One-based indices of negative weights.
    pub fn negative_indices(&self) -> Vec<usize> {
        (0..16).filter(|&i| self.m[i] < 0.0).map(|i| i + 1).collect()
    }

    /// Sign-weighted correlation `sum_i m_i a_i b_i` of a strategy pair.
    pub fn correlation(&self, pair: StrategyPair) -> f64 {
        let (a, b) = pair.columns();
        (0..16)
            .map(|i| self.m[i] * f64::from(SIGN_TABLE[i][a] * SIGN_TABLE[i][b]))
            .sum()
    }
}

/// Joint probabilities implied by a measure: each `p_i` sums the weights of
/// the four subsets with the matching outcome pair.
pub fn lhv_to_stats(measure: &LhvMeasure) -> FourCoinStats {
    let mut p = [0.0; 16];
    for pair in StrategyPair::ALL {
        let (a, b) = pair.columns();
        for (i, row) in SIGN_TABLE.iter().enumerate() {
            let cell = usize::from(row[a] < 0) * 2 + usize::from(row[b] < 0);
            p[4 * pair.block() + cell] += measure.m[i];
        }
    }
    FourCoinStats { p }
}

/// CHSH combination with `a = S1`, `a' = S2`, `b = S1'`, `b' = S2'`:
/// `C(S1,S1') + C(S2,S2') + C(S2,S1') - C(S1,S2')`.
pub fn chsh_from_measure(measure: &LhvMeasure) -> f64 {
    measure.correlation(StrategyPair::S1S1)
        + measure.correlation(StrategyPair::S2S2)
        + measure.correlation(StrategyPair::S2S1)
        - measure.correlation(StrategyPair::S1S2)
}

/// Heads probabilities under perfect correlation, split by origin:
/// `s = s1 + s2` with `s1 = m1+m2`, `s2 = m13+m14`, and
/// `s' = s1_p + s2_p` with `s1_p = m1+m3`, `s2_p = m13+m15`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerfectCorrelation {
    pub r: f64,
    pub r_p: f64,
    pub s: f64,
    pub s_p: f64,
    pub s1: f64,
    pub s2: f64,
    pub s1_p: f64,
    pub s2_p: f64,
}

/// Reduction for perfectly correlated outcomes (`p2 = p3 = 0`), which
/// forces `m5..m12 = 0`. Only the `p1 = 1` branch is implemented, so
/// `m1+m2+m3+m4` must be 1 and `r = r' = 1`. The `p1 = 0` branch gives
/// analogous expressions and is not covered.
pub fn perfect_corr_reduce(measure: &LhvMeasure) -> Result<PerfectCorrelation> {
    let m = |i: usize| measure.m[i - 1];
    if let Some(i) = (5..=12).find(|&i| m(i).abs() > ZERO_TOL) {
        return Err(Error::Precondition(format!(
            "m{i} = {} must vanish under perfect correlation",
            m(i)
        )));
    }
    let first = m(1) + m(2) + m(3) + m(4);
    if (first - 1.0).abs() > ZERO_TOL {
        return Err(Error::Precondition(format!(
            "m1+m2+m3+m4 = {first}, the p1 = 1 branch needs 1"
        )));
    }
    let (s1, s2, s1_p, s2_p) = (m(1) + m(2), m(13) + m(14), m(1) + m(3), m(13) + m(15));
    Ok(PerfectCorrelation {
        r: 1.0,
        r_p: 1.0,
        s: s1 + s2,
        s_p: s1_p + s2_p,
        s1,
        s2,
        s1_p,
        s2_p,
    })
}

/// A payoff split into the part fixed by `m1..m3` and the part carried by
/// `m13..m15`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitPayoff {
    pub total: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelatedPayoffs {
    pub pair: StrategyPair,
    pub alice: SplitPayoff,
    pub bob: SplitPayoff,
}

fn split_for(e: GameEntries, pc: &PerfectCorrelation, pair: StrategyPair) -> SplitPayoff {
    let (k, l, m, n) = (e.k, e.l, e.m, e.n);
    let (a, b) = match pair {
        StrategyPair::S1S1 => (k, 0.0),
        StrategyPair::S1S2 => (l + (k - l) * pc.s1_p, (k - l) * pc.s2_p),
        StrategyPair::S2S1 => (m + (k - m) * pc.s1, (k - m) * pc.s2),
        StrategyPair::S2S2 => {
            let c = k - l - m + n;
            let a = c * pc.s1 * pc.s1_p + (l - n) * pc.s1 + (m - n) * pc.s1_p + n;
            let b = c * (pc.s1 * pc.s2_p + pc.s1_p * pc.s2 + pc.s2 * pc.s2_p) + (l - n) * pc.s2 + (m - n) * pc.s2_p;
            (a, b)
        }
    };
    let (x, y) = match pair {
        StrategyPair::S1S1 => (pc.r, pc.r_p),
        StrategyPair::S1S2 => (pc.r, pc.s_p),
        StrategyPair::S2S1 => (pc.s, pc.r_p),
        StrategyPair::S2S2 => (pc.s, pc.s_p),
    };
    SplitPayoff {
        total: e.bilinear(x, y),
        a,
        b,
    }
}

/// Payoffs of all four strategy pairs under perfect correlation, each split
/// into its `m1..m3` part and its `m13..m15` part.
pub fn correlated_payoffs(entries: &GameEntries, pc: &PerfectCorrelation) -> [CorrelatedPayoffs; 4] {
    StrategyPair::ALL.map(|pair| CorrelatedPayoffs {
        pair,
        alice: split_for(*entries, pc, pair),
        bob: split_for(entries.for_bob(), pc, pair),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NeAnalysis {
    pub ne_exists: bool,
    /// `(s2, s2')`.
    pub profile: (f64, f64),
    /// Payoffs at `(S2, S2')` with `s = s2`, `s' = s2'`.
    pub payoffs: (f64, f64),
    pub displaced: bool,
    /// `(s - 1)((K-L-M+N) s' + (L-N))`: Alice cannot gain by switching to S1.
    pub alice_condition: f64,
    /// `(s' - 1)((K-L-M+N) s + (L-N))`: Bob cannot gain by switching to S1'.
    pub bob_condition: f64,
    /// Sum of both conditions; for `pd2` this is `(4(s+s')+1)/9 - s s'` up to
    /// a factor.
    pub summed_condition: f64,
    /// `m1..m3` were nonzero and have been set to zero for the analysis.
    pub m123_ignored: bool,
    /// Some coordinate lies outside `[0, 1]`.
    pub outside_unit: bool,
    pub nonnegative: bool,
}

/// Equilibrium test at `(S2, S2')` after the perfect-correlation reduction
/// with `m1 = m2 = m3 = 0`, so `s = s2 = m13+m14` and `s' = s2' = m13+m15`.
pub fn pd_ne_analysis(entries: &GameEntries, measure: &LhvMeasure) -> Result<NeAnalysis> {
    let pc = perfect_corr_reduce(measure)?;
    let (s, sp) = (pc.s2, pc.s2_p);
    Ok(ne_at(
        entries,
        s,
        sp,
        measure.m[..3].iter().any(|x| x.abs() > ZERO_TOL),
        measure.negative_indices().is_empty(),
    ))
}

fn ne_at(entries: &GameEntries, s: f64, sp: f64, m123_ignored: bool, nonnegative: bool) -> NeAnalysis {
    let e = entries;
    let c = e.k - e.l - e.m + e.n;
    let alice_condition = (s - 1.0) * (c * sp + (e.l - e.n));
    let bob_condition = (sp - 1.0) * (c * s + (e.l - e.n));
    NeAnalysis {
        ne_exists: alice_condition >= -ZERO_TOL && bob_condition >= -ZERO_TOL,
        profile: (s, sp),
        payoffs: e.bilinear_pair(s, sp),
        displaced: s.abs() > ZERO_TOL || sp.abs() > ZERO_TOL,
        alice_condition,
        bob_condition,
        summed_condition: alice_condition + bob_condition,
        m123_ignored,
        outside_unit: !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&sp),
        nonnegative,
    }
}

/// The one-parameter family `m4 = 1`, `m13 = x`, `m16 = -x`, for which
/// `s2 = s2' = x`.
pub fn m13_family(x: f64) -> LhvMeasure {
    let mut m = [0.0; 16];
    m[3] = 1.0;
    m[12] = x;
    m[15] = -x;
    LhvMeasure { m }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub m13: f64,
    pub s2: f64,
    pub s2_p: f64,
    pub sum: f64,
    pub ne_exists: bool,
    pub summed_condition: f64,
    pub payoff_a: f64,
    pub payoff_b: f64,
}

/// Sweeps `m13` over `steps + 1` points in `[from, to]` along [`m13_family`].
pub fn scan_m13(entries: &GameEntries, from: f64, to: f64, steps: usize) -> Result<Vec<ScanRow>> {
    if !(from.is_finite() && to.is_finite()) || steps == 0 {
        return Err(Error::Precondition(
            "scan needs finite bounds and at least one step".into(),
        ));
    }
    (0..=steps)
        .map(|i| {
            let x = from + (to - from) * i as f64 / steps as f64;
            let a = pd_ne_analysis(entries, &m13_family(x))?;
            Ok(ScanRow {
                m13: x,
                s2: a.profile.0,
                s2_p: a.profile.1,
                sum: a.profile.0 + a.profile.1,
                ne_exists: a.ne_exists,
                summed_condition: a.summed_condition,
                payoff_a: a.payoffs.0,
                payoff_b: a.payoffs.1,
            })
        })
        .collect()
}
