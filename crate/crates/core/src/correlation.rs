//! Correlation games: a bimatrix game whose payoffs are computed from the
//! measured spin correlations `<ac>` (Alice's axis against z) and `<cb>`
//! (z against Bob's axis) instead of from the players' probabilities.
//!
//! With `G(x) = g(pi/2 (1 + x))` the payoff is the ordinary bilinear form at
//! `(G(<ac>), G(<cb>))`. Classically anti-correlated inputs give back the
//! original game; singlet inputs replace each probability `p` with
//! `Q_g(p) = g(pi/2 (1 - cos g^-1(p)))`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{check_unit_interval, Error, Result};
use crate::game::{mixed_nash, BimatrixGame, MixedProfile, NashSet};
use crate::gfun::{acos_clamped, q_angle, GFunction, VALUE_TOL};
use crate::grid::{self, GridEquilibria};
use crate::par::Execution;
use crate::quantum::{dot, Vec3};

pub type AngleFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type PairFn = Arc<dyn Fn(Vec3, Vec3) -> f64 + Send + Sync>;

/// Rule giving the correlation of the two ±1 outcomes for a pair of axes.
/// All built-in models depend only on the angle between the axes.
#[derive(Clone)]
pub enum CorrelationModel {
    /// `-1 + 2 phi / pi`: the sign model of a random hidden direction.
    Classical,
    /// `-cos phi`.
    Singlet,
    /// `-(1/3) cos phi`: equal mixture of anti-aligned product states.
    ProductMixture,
    Custom {
        name: String,
        /// Correlation as a function of the angle between the axes.
        vs_angle: AngleFn,
        /// Optional override for arbitrary axis pairs.
        pair: Option<PairFn>,
    },
}

impl fmt::Debug for CorrelationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for CorrelationModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl CorrelationModel {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "classical" | "classical_anticorrelated" => Ok(CorrelationModel::Classical),
            "singlet" | "quantum" => Ok(CorrelationModel::Singlet),
            "mixture" | "product-mixture" | "product_mixture" => Ok(CorrelationModel::ProductMixture),
            other => Err(Error::Parse(format!("unknown correlation model '{other}'"))),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            CorrelationModel::Classical => "classical",
            CorrelationModel::Singlet => "singlet",
            CorrelationModel::ProductMixture => "product-mixture",
            CorrelationModel::Custom { name, .. } => name,
        }
    }

    fn at_angle(&self, phi: f64) -> f64 {
        match self {
            CorrelationModel::Classical => -1.0 + 2.0 * phi / PI,
            CorrelationModel::Singlet => -phi.cos(),
            CorrelationModel::ProductMixture => -phi.cos() / 3.0,
            CorrelationModel::Custom { vs_angle, .. } => vs_angle(phi),
        }
    }

    /// Correlation between a player's axis at angle `theta` from z and z.
    pub fn corr_vs_z(&self, theta: f64) -> Result<f64> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain {
                what: "theta",
                value: theta,
                range: "[0, pi]",
            });
        }
        Ok(self.at_angle(theta).clamp(-1.0, 1.0))
    }

    /// Correlation for two arbitrary unit axes.
    pub fn corr_pair(&self, a: Vec3, b: Vec3) -> f64 {
        if let CorrelationModel::Custom { pair: Some(f), .. } = self {
            return f(a, b).clamp(-1.0, 1.0);
        }
        match self {
            CorrelationModel::Singlet => -dot(a, b).clamp(-1.0, 1.0),
            CorrelationModel::ProductMixture => -dot(a, b).clamp(-1.0, 1.0) / 3.0,
            _ => self.at_angle(acos_clamped(dot(a, b))).clamp(-1.0, 1.0),
        }
    }

    /// The angle `t` in `[0, pi]` with `g(t)` the effective probability
    /// produced by a direction at `theta`: `pi/2 (1 + corr_vs_z(theta))`.
    pub fn effective_angle(&self, theta: f64) -> f64 {
        if let CorrelationModel::Singlet = self {
            return q_angle(theta);
        }
        (FRAC_PI_2 * (1.0 + self.at_angle(theta).clamp(-1.0, 1.0))).clamp(0.0, PI)
    }

    fn is_quantum(&self) -> bool {
        matches!(self, CorrelationModel::Singlet)
    }
}

/// Alice measures in the x-z plane, Bob in the y-z plane.
pub fn axis_a(theta: f64) -> Vec3 {
    [theta.sin(), 0.0, theta.cos()]
}

pub fn axis_b(theta: f64) -> Vec3 {
    [0.0, theta.sin(), theta.cos()]
}

pub const AXIS_Z: Vec3 = [0.0, 0.0, 1.0];

/// Bilinear payoffs at `(G(<ac>), G(<cb>))`, each player with their own
/// coefficients (for a symmetric game the second is the first with L and M
/// swapped).
pub fn payoff_from_correlations(game: &BimatrixGame, g: &GFunction, corr_ac: f64, corr_cb: f64) -> Result<(f64, f64)> {
    for (what, v) in [("<ac>", corr_ac), ("<cb>", corr_cb)] {
        if !(-1.0..=1.0).contains(&v) {
            return Err(Error::Domain {
                what,
                value: v,
                range: "[-1, 1]",
            });
        }
    }
    let pa = g.big_g(corr_ac)?;
    let pb = g.big_g(corr_cb)?;
    Ok(game.bilinear_payoff(pa, pb))
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrelationGameSpec {
    pub game: BimatrixGame,
    pub g: GFunction,
    pub model: CorrelationModel,
}

impl CorrelationGameSpec {
    pub fn new(game: BimatrixGame, g: GFunction, model: CorrelationModel) -> Self {
        CorrelationGameSpec { game, g, model }
    }

    /// Effective probability of the first move for a direction `theta`.
    pub fn effective_probability(&self, theta: f64) -> f64 {
        self.g.eval_clamped(self.model.effective_angle(theta))
    }

    /// Payoffs when the players pick directions `theta_a`, `theta_b`.
    pub fn payoff_at_angles(&self, theta_a: f64, theta_b: f64) -> Result<(f64, f64)> {
        let ac = self.model.corr_vs_z(theta_a)?;
        let cb = self.model.corr_vs_z(theta_b)?;
        payoff_from_correlations(&self.game, &self.g, ac, cb)
    }

    /// Effective probabilities reachable from an announced probability `p`,
    /// one per preimage direction. Empty when `g` never attains `p`.
    pub fn transform(&self, p: f64) -> Result<Vec<f64>> {
        check_unit_interval("p", p)?;
        let mut out: Vec<f64> = self
            .g
            .inverse_set(p)
            .exact
            .into_iter()
            .map(|t| self.effective_probability(t))
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= VALUE_TOL);
        Ok(out)
    }

    /// Payoffs for announced probabilities, over every pair of preimage
    /// directions. Sorted by `P_A` then `P_B`; empty when a probability is
    /// unattainable under `g`.
    pub fn profile_payoff(&self, profile: MixedProfile) -> Result<Vec<(f64, f64)>> {
        let qa = self.transform(profile.p_a)?;
        let qb = self.transform(profile.p_b)?;
        let mut out: Vec<(f64, f64)> = qa
            .iter()
            .flat_map(|&a| qb.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.game.bilinear_payoff(a, b))
            .collect();
        out.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        out.dedup_by(|x, y| (x.0 - y.0).abs() <= 1e-12 && (x.1 - y.1).abs() <= 1e-12);
        Ok(out)
    }
}

/// Payoffs of the quantum game at announced probabilities, i.e. the profile
/// payoff under singlet correlations regardless of the spec's model.
pub fn quantum_payoff(spec: &CorrelationGameSpec, profile: MixedProfile) -> Result<Vec<(f64, f64)>> {
    let quantum = CorrelationGameSpec {
        model: CorrelationModel::Singlet,
        ..spec.clone()
    };
    quantum.profile_payoff(profile)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantumEquilibria {
    /// Equilibrium probabilities, sorted by `p_A` then `p_B`.
    pub profiles: Vec<MixedProfile>,
    /// Matching direction pairs `(theta_A, theta_B)`.
    pub angles: Vec<(f64, f64)>,
}

fn product(a: &[(f64, f64)], b: &[(f64, f64)]) -> QuantumEquilibria {
    let mut pairs: Vec<((f64, f64), (f64, f64))> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect();
    pairs.sort_by(|x, y| x.0 .1.total_cmp(&y.0 .1).then(x.1 .1.total_cmp(&y.1 .1)));
    QuantumEquilibria {
        profiles: pairs.iter().map(|(x, y)| MixedProfile { p_a: x.1, p_b: y.1 }).collect(),
        angles: pairs.iter().map(|(x, y)| (x.0, y.0)).collect(),
    }
}

/// Directions and probabilities `(theta, g(theta))` whose singlet-transformed
/// probability equals `p_star`.
fn q_preimages(g: &GFunction, p_star: f64) -> Result<Vec<(f64, f64)>> {
    Ok(g.q_inverse_angles(p_star)?
        .into_iter()
        .map(|t| (t, g.eval_clamped(t)))
        .collect())
}

/// Quantum equilibrium of a game whose second moves strictly dominate:
/// each player drives their effective probability to 0, which the singlet
/// reaches at `g(arccos(1 - (2/pi) g^-1(0)))`.
pub fn quantum_pure_ne(spec: &CorrelationGameSpec) -> Result<QuantumEquilibria> {
    if !spec.game.second_moves_strictly_dominant() {
        return Err(Error::Precondition("the second moves must strictly dominate".into()));
    }
    if !spec.model.is_quantum() {
        return Err(Error::Precondition(
            "closed form holds for singlet correlations only".into(),
        ));
    }
    let pre = q_preimages(&spec.g, 0.0)?;
    if pre.is_empty() {
        return Err(Error::NoSolution(format!("{} never attains 0", spec.g.name())));
    }
    Ok(product(&pre, &pre))
}

/// Classical mixed equilibrium of Battle of the Sexes.
pub fn bos_classical_mixed(alpha: f64, beta: f64, gamma: f64) -> Result<MixedProfile> {
    BimatrixGame::battle_of_sexes(alpha, beta, gamma)?;
    let den = alpha + beta - 2.0 * gamma;
    Ok(MixedProfile {
        p_a: (alpha - gamma) / den,
        p_b: (beta - gamma) / den,
    })
}

/// Mixed equilibrium of the quantum Battle of the Sexes: each classical
/// component passed through `Q_g^-1`. Set-valued for non-invertible `g`.
pub fn bos_quantum_mixed_ne(alpha: f64, beta: f64, gamma: f64, g: &GFunction) -> Result<QuantumEquilibria> {
    let p = bos_classical_mixed(alpha, beta, gamma)?;
    let out = product(&q_preimages(g, p.p_a)?, &q_preimages(g, p.p_b)?);
    if out.profiles.is_empty() {
        return Err(Error::NoSolution(format!(
            "{} cannot reproduce the mixed equilibrium",
            g.name()
        )));
    }
    Ok(out)
}

/// True when `g` attains every value in `[0, 1]`.
pub fn covers_unit_interval(g: &GFunction) -> bool {
    let mut vals: Vec<f64> = vec![0.0, 1.0];
    for p in g.pieces() {
        vals.push(p.v_from);
        vals.push(p.v_to);
    }
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    let mids: Vec<f64> = vals.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    vals.iter()
        .chain(mids.iter())
        .all(|&v| !g.inverse_set(v).exact.is_empty())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    /// Announced probabilities on a uniform grid. Probabilities with no or
    /// several preimage directions are skipped.
    Probability,
    /// Directions on a uniform grid over `[0, pi]`.
    Angle,
}

/// Grid equilibrium search over `grid_n` points per player. Returned
/// coordinates are probabilities for `Probability` and angles for `Angle`.
pub fn ne_grid_search(
    spec: &CorrelationGameSpec,
    grid_n: usize,
    space: SearchSpace,
    tol: f64,
    exec: Execution,
) -> Result<GridEquilibria> {
    if grid_n < 2 {
        return Err(Error::Domain {
            what: "grid_n",
            value: grid_n as f64,
            range: ">= 2",
        });
    }
    let unit = grid::unit_grid(grid_n);
    let (coords, eff): (Vec<f64>, Vec<Option<f64>>) = match space {
        SearchSpace::Probability => {
            let eff = unit
                .iter()
                .map(|&p| {
                    let t = spec.transform(p)?;
                    Ok((t.len() == 1).then(|| t[0]))
                })
                .collect::<Result<Vec<_>>>()?;
            (unit, eff)
        }
        SearchSpace::Angle => {
            let angles: Vec<f64> = unit.iter().map(|x| x * PI).collect();
            let eff = angles.iter().map(|&t| Some(spec.effective_probability(t))).collect();
            (angles, eff)
        }
    };
    let (ca, cb) = (spec.game.coeffs_a(), spec.game.coeffs_b());
    Ok(grid::search(&coords, &coords, tol, exec, |i, j| {
        let (a, b) = (eff[i]?, eff[j]?);
        Some((ca.eval(a, b), cb.eval(a, b)))
    }))
}

/// Largest gain from a unilateral deviation to any of `grid_n` announced
/// probabilities. Profiles and deviations must have a single preimage.
pub fn profile_deviation_gain(spec: &CorrelationGameSpec, profile: MixedProfile, grid_n: usize) -> Result<f64> {
    let single = |p: f64| -> Option<f64> {
        let t = spec.transform(p).ok()?;
        (t.len() == 1).then(|| t[0])
    };
    let (ca, cb) = (spec.game.coeffs_a(), spec.game.coeffs_b());
    grid::max_deviation_gain(profile.p_a, profile.p_b, grid_n, |a, b| {
        let (qa, qb) = (single(a)?, single(b)?);
        Some((ca.eval(qa, qb), cb.eval(qa, qb)))
    })
    .ok_or_else(|| Error::Precondition("profile has no unique preimage direction".into()))
}

/// Largest gain from a unilateral deviation to any of `grid_n` directions.
pub fn angle_deviation_gain(spec: &CorrelationGameSpec, theta_a: f64, theta_b: f64, grid_n: usize) -> f64 {
    let (ca, cb) = (spec.game.coeffs_a(), spec.game.coeffs_b());
    let pay = |a: f64, b: f64| {
        let (qa, qb) = (spec.effective_probability(a * PI), spec.effective_probability(b * PI));
        Some((ca.eval(qa, qb), cb.eval(qa, qb)))
    };
    grid::max_deviation_gain(theta_a / PI, theta_b / PI, grid_n, pay).expect("always playable")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolveOptions {
    pub grid_n: usize,
    /// Slack for the grid search; a positive value finds approximate
    /// equilibria near interior points that fall between grid nodes.
    pub grid_tol: f64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            grid_n: 1001,
            grid_tol: 1e-9,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Confirmation {
    pub grid_n: usize,
    pub tol: f64,
    /// Grid equilibria found (probability space).
    pub grid_points: Vec<(f64, f64)>,
    /// For each reported equilibrium, distance to the nearest grid one.
    pub distance: Vec<Option<f64>>,
    /// For each reported equilibrium, best gain from a grid deviation.
    pub deviation_gain: Vec<Option<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub game: String,
    pub g: String,
    pub model: String,
    pub classical_ne: NashSet,
    pub quantum_ne: Vec<[f64; 2]>,
    pub angles: Vec<[f64; 2]>,
    /// `dominance`, `transform` or `grid`.
    pub method: &'static str,
    pub payoffs: Vec<[f64; 2]>,
    pub grid: Confirmation,
}

/// Equilibria of the correlation game.
///
/// * `dominance`: second moves strictly dominate and the input is the
///   singlet, so the closed form of [`quantum_pure_ne`] applies.
/// * `transform`: singlet input, `g` onto `[0, 1]`, and finitely many
///   classical equilibria; each is mapped through `Q_g^-1`. Since a direction
///   reaches every value of `g`, the effective game is the classical one.
/// * `grid`: everything else; reports the grid equilibria cluster centroids.
pub fn solve(spec: &CorrelationGameSpec, game_name: &str, opts: SolveOptions) -> Result<SolveReport> {
    let classical_ne = mixed_nash(&spec.game);
    let (method, found) = if let Ok(q) = quantum_pure_ne(spec) {
        ("dominance", Some(q))
    } else if spec.model.is_quantum() && !classical_ne.continuum && covers_unit_interval(&spec.g) {
        let mut profiles = Vec::new();
        let mut angles = Vec::new();
        for (p, _) in classical_ne.points() {
            let q = product(&q_preimages(&spec.g, p.p_a)?, &q_preimages(&spec.g, p.p_b)?);
            profiles.extend(q.profiles);
            angles.extend(q.angles);
        }
        let mut idx: Vec<usize> = (0..profiles.len()).collect();
        idx.sort_by(|&i, &j| {
            profiles[i]
                .p_a
                .total_cmp(&profiles[j].p_a)
                .then(profiles[i].p_b.total_cmp(&profiles[j].p_b))
        });
        let q = QuantumEquilibria {
            profiles: idx.iter().map(|&i| profiles[i]).collect(),
            angles: idx.iter().map(|&i| angles[i]).collect(),
        };
        ("transform", Some(q))
    } else {
        ("grid", None)
    };

    let grid = ne_grid_search(spec, opts.grid_n, SearchSpace::Probability, opts.grid_tol, opts.exec)?;
    let found = match found {
        Some(f) => f,
        None => {
            let angle_grid = ne_grid_search(spec, opts.grid_n, SearchSpace::Angle, opts.grid_tol, opts.exec)?;
            let angles: Vec<(f64, f64)> = angle_grid.clusters.iter().map(|c| c.centroid).collect();
            QuantumEquilibria {
                profiles: angles
                    .iter()
                    .map(|&(a, b)| MixedProfile {
                        p_a: spec.g.eval_clamped(a),
                        p_b: spec.g.eval_clamped(b),
                    })
                    .collect(),
                angles,
            }
        }
    };

    let payoffs = found
        .angles
        .iter()
        .map(|&(a, b)| spec.payoff_at_angles(a, b).map(|(x, y)| [x, y]))
        .collect::<Result<Vec<_>>>()?;
    let confirmation = Confirmation {
        grid_n: opts.grid_n,
        tol: opts.grid_tol,
        distance: found
            .profiles
            .iter()
            .map(|p| grid.distance_to((p.p_a, p.p_b)))
            .collect(),
        deviation_gain: found
            .profiles
            .iter()
            .map(|&p| profile_deviation_gain(spec, p, opts.grid_n).ok())
            .collect(),
        grid_points: grid.points,
    };
    Ok(SolveReport {
        game: game_name.to_string(),
        g: spec.g.name().to_string(),
        model: spec.model.name().to_string(),
        classical_ne,
        quantum_ne: found.profiles.iter().map(|p| [p.p_a, p.p_b]).collect(),
        angles: found.angles.iter().map(|&(a, b)| [a, b]).collect(),
        method,
        payoffs,
        grid: confirmation,
    })
}

/// `(theta_A, theta_B, P_A, P_B)` on a `(steps + 1)^2` grid over `[0, pi]^2`.
pub fn sweep(spec: &CorrelationGameSpec, steps: usize, exec: Execution) -> Vec<[f64; 4]> {
    let steps = steps.max(1);
    let angles: Vec<f64> = (0..=steps).map(|i| PI * i as f64 / steps as f64).collect();
    let eff: Vec<f64> = angles.iter().map(|&t| spec.effective_probability(t)).collect();
    let rows = crate::par::map_indexed(angles.len(), exec, |i| {
        (0..angles.len())
            .map(|j| {
                let (pa, pb) = spec.game.bilinear_payoff(eff[i], eff[j]);
                [angles[i], angles[j], pa, pb]
            })
            .collect::<Vec<_>>()
    });
    rows.into_iter().flatten().collect()
}
