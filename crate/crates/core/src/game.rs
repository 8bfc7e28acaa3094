//! Classical 2x2 bimatrix games.
//!
//! Rows belong to player A, columns to player B. Row 1 / column 1 is the
//! "identity" move (C in the Prisoners' Dilemma); a mixed profile stores the
//! probability each player puts on that first move.
//!
//! Two views of the same payoff table are kept side by side:
//!
//! * `cells` are the raw matrix entries, `cells[i][j] = (P_A, P_B)`.
//! * `coeffs_a` / `coeffs_b` are the bilinear coefficients, so that
//!   `P = K pA pB + L pA + M pB + N`.
//!
//! The LHV four-coin module uses the letters K, L, M, N for the *cell
//! entries* of a symmetric game instead; see [`crate::lhv::GameEntries`].

use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, Error, Result};

/// Deviation slack when checking Nash inequalities.
pub const NE_TOL: f64 = 1e-9;

/// Bilinear coefficients `P(pA, pB) = k pA pB + l pA + m pB + n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coeffs {
    pub k: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl Coeffs {
    pub fn eval(&self, p_a: f64, p_b: f64) -> f64 {
        self.k * p_a * p_b + self.l * p_a + self.m * p_b + self.n
    }

    /// Derivative with respect to `pA`, a function of `pB` only.
    pub fn d_pa(&self, p_b: f64) -> f64 {
        self.k * p_b + self.l
    }

    /// Derivative with respect to `pB`, a function of `pA` only.
    pub fn d_pb(&self, p_a: f64) -> f64 {
        self.k * p_a + self.m
    }
}

/// Solves `K+L+M+N = r, L+N = s, M+N = t, N = u` for the bilinear
/// coefficients of one player's payoff given the four cells
/// (1,1), (1,2), (2,1), (2,2).
pub fn coeffs_from_cells(r: f64, s: f64, t: f64, u: f64) -> Coeffs {
    Coeffs {
        k: r - s - t + u,
        l: s - u,
        m: t - u,
        n: u,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Labels {
    pub rows: [String; 2],
    pub cols: [String; 2],
}

impl Default for Labels {
    fn default() -> Self {
        Labels {
            rows: ["1".into(), "2".into()],
            cols: ["1".into(), "2".into()],
        }
    }
}

impl Labels {
    fn new(rows: [&str; 2], cols: [&str; 2]) -> Self {
        Labels {
            rows: rows.map(String::from),
            cols: cols.map(String::from),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BimatrixGame {
    cells: [[(f64, f64); 2]; 2],
    coeffs_a: Coeffs,
    coeffs_b: Coeffs,
    symmetric: bool,
    labels: Labels,
}

/// A mixed strategy profile: probabilities of row 1 and of column 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedProfile {
    pub p_a: f64,
    pub p_b: f64,
}

impl MixedProfile {
    pub fn new(p_a: f64, p_b: f64) -> Result<Self> {
        check_unit_interval("p_A", p_a)?;
        check_unit_interval("p_B", p_b)?;
        Ok(MixedProfile { p_a, p_b })
    }

    /// Profile for pure strategies given as cell coordinates (0-based).
    pub fn pure(row: usize, col: usize) -> Self {
        MixedProfile {
            p_a: if row == 0 { 1.0 } else { 0.0 },
            p_b: if col == 0 { 1.0 } else { 0.0 },
        }
    }
}

impl BimatrixGame {
    pub fn new(cells: [[(f64, f64); 2]; 2]) -> Result<Self> {
        if cells.iter().flatten().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidGame("payoffs must be finite".into()));
        }
        let a = |i: usize, j: usize| cells[i][j].0;
        let b = |i: usize, j: usize| cells[i][j].1;
        let coeffs_a = coeffs_from_cells(a(0, 0), a(0, 1), a(1, 0), a(1, 1));
        let coeffs_b = coeffs_from_cells(b(0, 0), b(0, 1), b(1, 0), b(1, 1));
        let symmetric = (0..2).all(|i| (0..2).all(|j| a(i, j) == b(j, i)));
        Ok(BimatrixGame {
            cells,
            coeffs_a,
            coeffs_b,
            symmetric,
            labels: Labels::default(),
        })
    }

    pub fn with_labels(mut self, labels: Labels) -> Self {
        self.labels = labels;
        self
    }

    /// Symmetric game with row-player cells `(r, s, t, u)`; the column
    /// player's payoff is the transpose.
    pub fn symmetric(r: f64, s: f64, t: f64, u: f64) -> Result<Self> {
        BimatrixGame::new([[(r, r), (s, t)], [(t, s), (u, u)]])
    }

    pub fn prisoners_dilemma(r: f64, s: f64, t: f64, u: f64) -> Result<Self> {
        Ok(BimatrixGame::symmetric(r, s, t, u)?.with_labels(Labels::new(["C", "D"], ["C", "D"])))
    }

    pub fn matching_pennies() -> Self {
        BimatrixGame::new([[(-1.0, 1.0), (1.0, -1.0)], [(1.0, -1.0), (-1.0, 1.0)]])
            .expect("finite")
            .with_labels(Labels::new(["H", "T"], ["H", "T"]))
    }

    /// Battle of the Sexes with `alpha > beta > gamma`.
    pub fn battle_of_sexes(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha > beta && beta > gamma) {
            return Err(Error::InvalidGame(format!(
                "battle of the sexes needs alpha > beta > gamma, got ({alpha}, {beta}, {gamma})"
            )));
        }
        Ok(
            BimatrixGame::new([[(alpha, beta), (gamma, gamma)], [(gamma, gamma), (beta, alpha)]])?
                .with_labels(Labels::new(["I", "S"], ["I", "S"])),
        )
    }

    pub fn model_of_entry() -> Self {
        BimatrixGame::new([[(2.0, 0.0), (-1.0, -1.0)], [(2.0, 0.0), (1.0, 1.0)]])
            .expect("finite")
            .with_labels(Labels::new(["Fight", "Accommodate"], ["Out", "In"]))
    }

    /// Built-in games: `pd1`, `pd2`, `matching-pennies`, `bos`, `model-of-entry`.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "pd1" => BimatrixGame::prisoners_dilemma(3.0, 0.0, 5.0, 1.0),
            "pd2" => BimatrixGame::prisoners_dilemma(3.0, 0.0, 5.0, 0.2),
            "matching-pennies" => Ok(BimatrixGame::matching_pennies()),
            // alpha > beta > gamma is all that's required; these are our defaults.
            "bos" => BimatrixGame::battle_of_sexes(2.0, 1.0, 0.0),
            "model-of-entry" => Ok(BimatrixGame::model_of_entry()),
            other => Err(Error::InvalidGame(format!("unknown built-in game '{other}'"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GameFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_game()
    }

    pub fn cells(&self) -> &[[(f64, f64); 2]; 2] {
        &self.cells
    }

    pub fn cell(&self, row: usize, col: usize) -> (f64, f64) {
        self.cells[row][col]
    }

    pub fn coeffs_a(&self) -> Coeffs {
        self.coeffs_a
    }

    pub fn coeffs_b(&self) -> Coeffs {
        self.coeffs_b
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn cell_label(&self, row: usize, col: usize) -> String {
        format!("({},{})", self.labels.rows[row], self.labels.cols[col])
    }

    /// Expected payoffs. Evaluated as the cell-weighted average, which equals
    /// the bilinear form and returns the cells exactly at pure profiles.
    pub fn payoff(&self, profile: MixedProfile) -> Result<(f64, f64)> {
        let MixedProfile { p_a, p_b } = MixedProfile::new(profile.p_a, profile.p_b)?;
        Ok(self.payoff_unchecked(p_a, p_b))
    }

    pub(crate) fn payoff_unchecked(&self, p_a: f64, p_b: f64) -> (f64, f64) {
        let w = [
            [p_a * p_b, p_a * (1.0 - p_b)],
            [(1.0 - p_a) * p_b, (1.0 - p_a) * (1.0 - p_b)],
        ];
        let mut out = (0.0, 0.0);
        for (wr, cr) in w.iter().zip(&self.cells) {
            for (wc, c) in wr.iter().zip(cr) {
                out.0 += wc * c.0;
                out.1 += wc * c.1;
            }
        }
        out
    }

    /// Bilinear-form payoffs from the stored coefficients.
    pub fn bilinear_payoff(&self, p_a: f64, p_b: f64) -> (f64, f64) {
        (self.coeffs_a.eval(p_a, p_b), self.coeffs_b.eval(p_a, p_b))
    }

    /// Row 2 strictly dominates row 1 for A and column 2 strictly dominates
    /// column 1 for B, i.e. (0, 0) is the unique equilibrium.
    pub fn second_moves_strictly_dominant(&self) -> bool {
        let a = |i: usize, j: usize| self.cells[i][j].0;
        let b = |i: usize, j: usize| self.cells[i][j].1;
        a(1, 0) > a(0, 0) && a(1, 1) > a(0, 1) && b(0, 1) > b(0, 0) && b(1, 1) > b(1, 0)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GameFile {
    cells: [[[f64; 2]; 2]; 2],
    #[serde(default)]
    labels: Option<Labels>,
}

impl GameFile {
    fn into_game(self) -> Result<BimatrixGame> {
        let c = self.cells;
        let game = BimatrixGame::new([
            [(c[0][0][0], c[0][0][1]), (c[0][1][0], c[0][1][1])],
            [(c[1][0][0], c[1][0][1]), (c[1][1][0], c[1][1][1])],
        ])?;
        Ok(match self.labels {
            Some(l) => game.with_labels(l),
            None => game,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PureEquilibrium {
    pub row: usize,
    pub col: usize,
    pub label: String,
    /// Both unilateral deviations strictly lose.
    pub strict: bool,
}

/// All weak pure-strategy equilibria, in row-major cell order.
pub fn pure_nash(game: &BimatrixGame) -> Vec<PureEquilibrium> {
    let mut out = Vec::new();
    for row in 0..2 {
        for col in 0..2 {
            let (pa, pb) = game.cell(row, col);
            let gain_a = game.cell(1 - row, col).0 - pa;
            let gain_b = game.cell(row, 1 - col).1 - pb;
            if gain_a <= NE_TOL && gain_b <= NE_TOL {
                out.push(PureEquilibrium {
                    row,
                    col,
                    label: game.cell_label(row, col),
                    strict: gain_a < -NE_TOL && gain_b < -NE_TOL,
                });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Pure,
    Interior,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NashComponent {
    Point {
        profile: MixedProfile,
        kind: PointKind,
    },
    /// Closed segment of equilibria between two profiles.
    Segment {
        from: MixedProfile,
        to: MixedProfile,
    },
    /// Every profile is an equilibrium.
    Square,
}

/// The complete Nash set of a 2x2 game.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NashSet {
    pub components: Vec<NashComponent>,
    /// True when the set contains a segment or the whole square.
    pub continuum: bool,
    pub a_indifferent: bool,
    pub b_indifferent: bool,
}

impl NashSet {
    pub fn points(&self) -> impl Iterator<Item = (MixedProfile, PointKind)> + '_ {
        self.components.iter().filter_map(|c| match c {
            NashComponent::Point { profile, kind } => Some((*profile, *kind)),
            _ => None,
        })
    }

    pub fn interior(&self) -> Option<MixedProfile> {
        self.points().find(|(_, k)| *k == PointKind::Interior).map(|(p, _)| p)
    }
}

// Axis-aligned closed segment in (pA, pB); degenerate when lo == hi.
#[derive(Clone, Copy, Debug)]
struct Rect {
    lo: (f64, f64),
    hi: (f64, f64),
}

impl Rect {
    fn intersect(&self, other: &Rect) -> Option<Rect> {
        let lo = (self.lo.0.max(other.lo.0), self.lo.1.max(other.lo.1));
        let hi = (self.hi.0.min(other.hi.0), self.hi.1.min(other.hi.1));
        (lo.0 <= hi.0 + 1e-12 && lo.1 <= hi.1 + 1e-12).then(|| Rect {
            lo,
            hi: (hi.0.max(lo.0), hi.1.max(lo.1)),
        })
    }

    fn is_point(&self) -> bool {
        (self.hi.0 - self.lo.0).abs() <= 1e-12 && (self.hi.1 - self.lo.1).abs() <= 1e-12
    }

    fn contains(&self, other: &Rect) -> bool {
        other.lo.0 >= self.lo.0 - 1e-12
            && other.lo.1 >= self.lo.1 - 1e-12
            && other.hi.0 <= self.hi.0 + 1e-12
            && other.hi.1 <= self.hi.1 + 1e-12
    }
}

const ZERO_SLOPE: f64 = 1e-12;

/// Graph of one player's best-response correspondence as closed segments.
/// `d(x)` is the payoff derivative in the player's own probability as a
/// function of the opponent's probability `x`. `own_first` selects whether
/// the player's probability is the first coordinate.
fn best_response_graph(k: f64, c: f64, own_first: bool) -> Vec<Rect> {
    let d = |x: f64| k * x + c;
    let mut breaks = vec![0.0, 1.0];
    if k.abs() > ZERO_SLOPE {
        let root = -c / k;
        if root > 0.0 && root < 1.0 {
            breaks.insert(1, root);
        }
    }
    let br = |x: f64| -> (f64, f64) {
        let v = d(x);
        if v.abs() <= ZERO_SLOPE {
            (0.0, 1.0)
        } else if v > 0.0 {
            (1.0, 1.0)
        } else {
            (0.0, 0.0)
        }
    };
    let mk = |own: (f64, f64), opp: (f64, f64)| {
        if own_first {
            Rect {
                lo: (own.0, opp.0),
                hi: (own.1, opp.1),
            }
        } else {
            Rect {
                lo: (opp.0, own.0),
                hi: (opp.1, own.1),
            }
        }
    };
    let mut out = Vec::new();
    for (i, &x) in breaks.iter().enumerate() {
        out.push(mk(br(x), (x, x)));
        if let Some(&next) = breaks.get(i + 1) {
            let own = br(0.5 * (x + next));
            out.push(mk(own, (x, next)));
        }
    }
    out
}

/// Full equilibrium set via intersection of best-response graphs.
pub fn mixed_nash(game: &BimatrixGame) -> NashSet {
    let a = game.coeffs_a;
    let b = game.coeffs_b;
    let a_indifferent = a.k.abs() <= ZERO_SLOPE && a.l.abs() <= ZERO_SLOPE;
    let b_indifferent = b.k.abs() <= ZERO_SLOPE && b.m.abs() <= ZERO_SLOPE;
    if a_indifferent && b_indifferent {
        return NashSet {
            components: vec![NashComponent::Square],
            continuum: true,
            a_indifferent,
            b_indifferent,
        };
    }
    // A's derivative in pA depends on pB; B's derivative in pB depends on pA.
    let graph_a = best_response_graph(a.k, a.l, true);
    let graph_b = best_response_graph(b.k, b.m, false);

    let mut pieces: Vec<Rect> = Vec::new();
    for ra in &graph_a {
        for rb in &graph_b {
            if let Some(r) = ra.intersect(rb) {
                pieces.push(r);
            }
        }
    }
    // Drop pieces covered by a larger one, and duplicates.
    let mut kept: Vec<Rect> = Vec::new();
    pieces.sort_by(|x, y| {
        let size = |r: &Rect| (r.hi.0 - r.lo.0) + (r.hi.1 - r.lo.1);
        size(y).partial_cmp(&size(x)).unwrap()
    });
    for r in pieces {
        if !kept.iter().any(|k| k.contains(&r)) {
            kept.push(r);
        }
    }
    kept.sort_by(|x, y| {
        (x.lo.0, x.lo.1, x.hi.0, x.hi.1)
            .partial_cmp(&(y.lo.0, y.lo.1, y.hi.0, y.hi.1))
            .unwrap()
    });

    let is01 = |v: f64| v == 0.0 || v == 1.0;
    let components: Vec<NashComponent> = kept
        .into_iter()
        .map(|r| {
            if r.is_point() {
                let profile = MixedProfile {
                    p_a: r.lo.0,
                    p_b: r.lo.1,
                };
                let kind = match (is01(profile.p_a), is01(profile.p_b)) {
                    (true, true) => PointKind::Pure,
                    (false, false) => PointKind::Interior,
                    _ => PointKind::Boundary,
                };
                NashComponent::Point { profile, kind }
            } else {
                NashComponent::Segment {
                    from: MixedProfile {
                        p_a: r.lo.0,
                        p_b: r.lo.1,
                    },
                    to: MixedProfile {
                        p_a: r.hi.0,
                        p_b: r.hi.1,
                    },
                }
            }
        })
        .collect();
    let continuum = components.iter().any(|c| !matches!(c, NashComponent::Point { .. }));
    NashSet {
        components,
        continuum,
        a_indifferent,
        b_indifferent,
    }
}

/// True iff no other cell weakly improves both payoffs and strictly
/// improves at least one.
pub fn is_pareto_optimal(game: &BimatrixGame, row: usize, col: usize) -> bool {
    let (a0, b0) = game.cell(row, col);
    !(0..2).flat_map(|i| (0..2).map(move |j| (i, j))).any(|(i, j)| {
        let (a, b) = game.cell(i, j);
        a >= a0 && b >= b0 && (a > a0 || b > b0)
    })
}

/// Largest payoff gain either player obtains by a unilateral switch to any
/// point of a uniform deviation grid with `grid_n` points on [0, 1].
pub fn max_deviation_gain(game: &BimatrixGame, profile: MixedProfile, grid_n: usize) -> f64 {
    crate::grid::max_deviation_gain(profile.p_a, profile.p_b, grid_n, |a, b| {
        Some(game.payoff_unchecked(a, b))
    })
    .expect("every profile is playable")
}
