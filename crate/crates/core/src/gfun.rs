//! Piecewise-linear maps `g: [0, pi] -> [0, 1]` that link a player's measuring
//! direction (angle from z) to the probability of playing the first move.
//!
//! Breakpoints can be discontinuous. Each piece records whether it owns its
//! left endpoint (`closed_left`); when it does not, the piece to its left owns
//! that point instead. The last piece always owns `pi`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, Error, Result};

/// Absolute tolerance for comparing angles (radians).
pub const ANGLE_TOL: f64 = 1e-9;
/// Absolute tolerance for comparing values of g.
pub const VALUE_TOL: f64 = 1e-12;
/// Angles this close to a breakpoint are evaluated at the breakpoint, so
/// rounding noise cannot flip which side of a jump is used.
pub const SNAP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub from: f64,
    pub to: f64,
    pub v_from: f64,
    pub v_to: f64,
    #[serde(default = "yes")]
    pub closed_left: bool,
}

fn yes() -> bool {
    true
}

impl Piece {
    fn new(from: f64, to: f64, v_from: f64, v_to: f64, closed_left: bool) -> Self {
        Piece {
            from,
            to,
            v_from,
            v_to,
            closed_left,
        }
    }

    fn at(&self, theta: f64) -> f64 {
        let t = (theta - self.from) / (self.to - self.from);
        self.v_from + (self.v_to - self.v_from) * t
    }

    fn is_constant(&self) -> bool {
        (self.v_to - self.v_from).abs() <= VALUE_TOL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GParams {
    pub delta: f64,
    pub eps: f64,
}

impl Default for GParams {
    fn default() -> Self {
        GParams {
            delta: 0.5,
            eps: FRAC_PI_4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GFunction {
    name: String,
    params: Option<GParams>,
    pieces: Vec<Piece>,
    /// Whether piece `i` owns its right endpoint.
    #[serde(skip)]
    owns_right: Vec<bool>,
}

/// Preimages of a value under `g`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct InverseSet {
    /// Angles where `g` attains the value.
    pub exact: Vec<f64>,
    /// Open endpoints where `g` approaches the value without attaining it.
    pub limits: Vec<f64>,
    /// A constant stretch attains the value; `exact`/`limits` hold its ends.
    pub non_unique: bool,
}

impl InverseSet {
    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }
}

#[derive(Deserialize)]
struct GFile {
    #[serde(default)]
    name: Option<String>,
    pieces: Vec<Piece>,
}

impl GFunction {
    /// Builds a g-function from pieces, snapping endpoints that are within
    /// `ANGLE_TOL` of `0`, `pi` or the neighbouring piece.
    pub fn from_pieces(name: impl Into<String>, pieces: Vec<Piece>) -> Result<Self> {
        GFunction::build(name.into(), None, pieces)
    }

    fn build(name: String, params: Option<GParams>, mut pieces: Vec<Piece>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidGFunction(msg));
        if pieces.is_empty() {
            return bad("no pieces".into());
        }
        for p in &pieces {
            if ![p.from, p.to, p.v_from, p.v_to].iter().all(|v| v.is_finite()) {
                return bad("non-finite piece data".into());
            }
        }
        if pieces[0].from.abs() > ANGLE_TOL {
            return bad(format!("first piece starts at {} instead of 0", pieces[0].from));
        }
        pieces[0].from = 0.0;
        let last = pieces.len() - 1;
        if (pieces[last].to - PI).abs() > ANGLE_TOL {
            return bad(format!("last piece ends at {} instead of pi", pieces[last].to));
        }
        pieces[last].to = PI;
        for i in 0..last {
            let gap = pieces[i + 1].from - pieces[i].to;
            if gap.abs() > ANGLE_TOL {
                return bad(format!("pieces {} and {} leave a gap or overlap of {gap}", i, i + 1));
            }
            pieces[i + 1].from = pieces[i].to;
        }
        for (i, p) in pieces.iter_mut().enumerate() {
            if p.to - p.from <= ANGLE_TOL {
                return bad(format!("piece {i} has empty or reversed extent"));
            }
            for v in [&mut p.v_from, &mut p.v_to] {
                if *v < -VALUE_TOL || *v > 1.0 + VALUE_TOL {
                    return bad(format!("piece {i} leaves [0, 1] (value {v})"));
                }
                *v = v.clamp(0.0, 1.0);
            }
        }
        if !pieces[0].closed_left {
            return bad("first piece must own theta = 0".into());
        }
        let owns_right = (0..pieces.len())
            .map(|i| pieces.get(i + 1).is_none_or(|next| !next.closed_left))
            .collect();
        Ok(GFunction {
            name,
            params,
            pieces,
            owns_right,
        })
    }

    /// Loads `{"pieces": [...]}` (optionally with a `name`).
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        GFunction::from_pieces(file.name.unwrap_or_else(|| "custom".into()), file.pieces)
    }

    /// Built-in `g1`..`g8`. `delta` must lie in (0, 1) and `eps` in (0, pi);
    /// functions that do not use a parameter ignore it.
    pub fn builtin(name: &str, params: GParams) -> Result<Self> {
        let GParams { delta: d, eps: e } = params;
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::Domain {
                what: "delta",
                value: d,
                range: "(0, 1)",
            });
        }
        if !(e > 0.0 && e < PI) {
            return Err(Error::Domain {
                what: "eps",
                value: e,
                range: "(0, pi)",
            });
        }
        let h = FRAC_PI_2;
        let pieces = match name {
            "g1" => vec![Piece::new(0.0, PI, 0.0, 1.0, true)],
            "g2" => vec![Piece::new(0.0, PI, 1.0, 0.0, true)],
            // [0, eps] falls from delta to 0, (eps, pi] rises from delta to 1
            "g3" => vec![Piece::new(0.0, e, d, 0.0, true), Piece::new(e, PI, d, 1.0, false)],
            // [0, pi/2] falls from delta to 0, (pi/2, pi] falls from 1 to delta
            "g4" => vec![Piece::new(0.0, h, d, 0.0, true), Piece::new(h, PI, 1.0, d, false)],
            // [0, pi/2] rises from delta to 1, (pi/2, pi] rises from 0 to delta
            "g5" => vec![Piece::new(0.0, h, d, 1.0, true), Piece::new(h, PI, 0.0, d, false)],
            // [0, eps] rises from delta to 1, (eps, pi] falls from delta to 0
            "g6" => vec![Piece::new(0.0, e, d, 1.0, true), Piece::new(e, PI, d, 0.0, false)],
            // [0, eps] falls from 1 to delta, (eps, pi] rises from 0 to delta
            "g7" => vec![Piece::new(0.0, e, 1.0, d, true), Piece::new(e, PI, 0.0, d, false)],
            // continuous tent peaking at pi/2
            "g8" => vec![Piece::new(0.0, h, 0.0, 1.0, true), Piece::new(h, PI, 1.0, 0.0, false)],
            other => {
                return Err(Error::InvalidGFunction(format!("unknown built-in '{other}'")));
            }
        };
        let uses = match name {
            "g1" | "g2" | "g8" => None,
            "g4" | "g5" => Some(GParams { delta: d, eps: h }),
            _ => Some(params),
        };
        GFunction::build(name.to_string(), uses, pieces)
    }

    /// Parses `g3`, `g3?delta=0.5&eps=0.785398`, etc. Missing parameters
    /// default to `delta = 1/2`, `eps = pi/4`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, query) = spec.split_once('?').unwrap_or((spec, ""));
        let mut params = GParams::default();
        for kv in query.split('&').filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{kv}'")))?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::Parse(format!("bad number '{v}' for {k}")))?;
            match k {
                "delta" => params.delta = v,
                "eps" => params.eps = v,
                _ => return Err(Error::Parse(format!("unknown g parameter '{k}'"))),
            }
        }
        GFunction::builtin(name, params)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> Option<GParams> {
        self.params
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn piece_index(&self, theta: f64) -> usize {
        for (i, p) in self.pieces.iter().enumerate() {
            let after_left = theta > p.from || (theta == p.from && p.closed_left);
            let before_right = theta < p.to || (theta == p.to && self.owns_right[i]);
            if after_left && before_right {
                return i;
            }
        }
        unreachable!("pieces tile [0, pi]")
    }

    /// `g(theta)` for `theta` in `[0, pi]`; values within `ANGLE_TOL` outside
    /// the interval are clamped.
    pub fn eval(&self, theta: f64) -> Result<f64> {
        if !(-ANGLE_TOL..=PI + ANGLE_TOL).contains(&theta) {
            return Err(Error::Domain {
                what: "theta",
                value: theta,
                range: "[0, pi]",
            });
        }
        Ok(self.eval_clamped(theta))
    }

    pub(crate) fn eval_clamped(&self, theta: f64) -> f64 {
        let mut theta = theta.clamp(0.0, PI);
        if let Some(b) = self.pieces[1..]
            .iter()
            .map(|p| p.from)
            .find(|b| (theta - b).abs() <= SNAP_TOL)
        {
            theta = b;
        }
        self.pieces[self.piece_index(theta)].at(theta).clamp(0.0, 1.0)
    }

    /// All angles mapped to `p`.
    pub fn inverse_set(&self, p: f64) -> InverseSet {
        let mut out = InverseSet::default();
        let mut push = |theta: f64, owned: bool| {
            if owned {
                out.exact.push(theta)
            } else {
                out.limits.push(theta)
            }
        };
        for (i, piece) in self.pieces.iter().enumerate() {
            let right_owned = self.owns_right[i];
            if piece.is_constant() {
                if (p - piece.v_from).abs() <= VALUE_TOL {
                    out.non_unique = true;
                    push(piece.from, piece.closed_left);
                    push(piece.to, right_owned);
                }
                continue;
            }
            let t = (p - piece.v_from) / (piece.v_to - piece.v_from);
            let theta = piece.from + t * (piece.to - piece.from);
            if (theta - piece.from).abs() <= ANGLE_TOL {
                push(piece.from, piece.closed_left);
            } else if (theta - piece.to).abs() <= ANGLE_TOL {
                push(piece.to, right_owned);
            } else if theta > piece.from && theta < piece.to {
                push(theta, true);
            }
        }
        dedup(&mut out.exact);
        dedup(&mut out.limits);
        let exact = out.exact.clone();
        out.limits.retain(|l| !exact.iter().any(|e| (e - l).abs() <= ANGLE_TOL));
        out
    }

    /// `G(x) = g(pi/2 (1 + x))` for a correlation `x` in `[-1, 1]`.
    pub fn big_g(&self, x: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::Domain {
                what: "x",
                value: x,
                range: "[-1, 1]",
            });
        }
        Ok(self.eval_clamped(FRAC_PI_2 * (1.0 + x)))
    }

    /// Quantum substitution `Q_g(p) = g(pi/2 (1 - cos theta))` over every
    /// `theta` in `g^-1(p)`. Sorted and deduplicated; empty when `g` never
    /// attains `p`.
    pub fn q_transform(&self, p: f64) -> Result<Vec<f64>> {
        check_unit_interval("p", p)?;
        let mut out: Vec<f64> = self
            .inverse_set(p)
            .exact
            .iter()
            .map(|&theta| self.eval_clamped(q_angle(theta)))
            .collect();
        dedup_values(&mut out);
        Ok(out)
    }

    /// Angles `theta` with `Q_g(g(theta)) = p_star`: solves
    /// `pi/2 (1 - cos theta) = theta*` for each `theta*` in `g^-1(p_star)`.
    pub fn q_inverse_angles(&self, p_star: f64) -> Result<Vec<f64>> {
        check_unit_interval("p*", p_star)?;
        let mut out: Vec<f64> = self
            .inverse_set(p_star)
            .exact
            .iter()
            .map(|&t| acos_clamped(1.0 - 2.0 * t / PI))
            .collect();
        dedup(&mut out);
        Ok(out)
    }

    /// `Q_g^-1(p*) = g(arccos(1 - (2/pi) g^-1(p*)))`, set-valued.
    pub fn q_inverse(&self, p_star: f64) -> Result<Vec<f64>> {
        let mut out: Vec<f64> = self
            .q_inverse_angles(p_star)?
            .into_iter()
            .map(|t| self.eval_clamped(t))
            .collect();
        dedup_values(&mut out);
        Ok(out)
    }

    /// Strict injectivity over `[0, pi]`, honouring breakpoint ownership.
    pub fn is_invertible(&self) -> bool {
        if self.pieces.iter().any(Piece::is_constant) {
            return false;
        }
        let ranges: Vec<Range> = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| Range::of(p, self.owns_right[i]))
            .collect();
        for i in 0..ranges.len() {
            for j in i + 1..ranges.len() {
                if ranges[i].overlaps(&ranges[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// `(theta, g(theta))` at `steps + 1` evenly spaced angles.
    pub fn sample(&self, steps: usize) -> Vec<(f64, f64)> {
        let steps = steps.max(1);
        (0..=steps)
            .map(|i| {
                let theta = PI * i as f64 / steps as f64;
                (theta, self.eval_clamped(theta))
            })
            .collect()
    }
}

/// The angle whose classical probability equals the quantum one:
/// `pi/2 (1 - cos theta)`.
pub fn q_angle(theta: f64) -> f64 {
    // cos(pi/2) is not exactly 0 in floating point; keep the fixed point exact.
    if (theta - FRAC_PI_2).abs() <= 1e-15 {
        return FRAC_PI_2;
    }
    FRAC_PI_2 * (1.0 - theta.cos())
}

pub(crate) fn acos_clamped(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

fn dedup(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= ANGLE_TOL);
}

fn dedup_values(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= VALUE_TOL);
}

// Image of a piece as an interval with endpoint ownership.
struct Range {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl Range {
    fn of(p: &Piece, right_owned: bool) -> Range {
        if p.v_from <= p.v_to {
            Range {
                lo: p.v_from,
                hi: p.v_to,
                lo_closed: p.closed_left,
                hi_closed: right_owned,
            }
        } else {
            Range {
                lo: p.v_to,
                hi: p.v_from,
                lo_closed: right_owned,
                hi_closed: p.closed_left,
            }
        }
    }

    fn contains(&self, x: f64) -> bool {
        (x > self.lo + VALUE_TOL && x < self.hi - VALUE_TOL)
            || ((x - self.lo).abs() <= VALUE_TOL && self.lo_closed)
            || ((x - self.hi).abs() <= VALUE_TOL && self.hi_closed)
    }

    fn overlaps(&self, other: &Range) -> bool {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo < hi - VALUE_TOL {
            true
        } else if (lo - hi).abs() <= VALUE_TOL {
            self.contains(lo) && other.contains(lo)
        } else {
            false
        }
    }
}

pub const BUILTIN_NAMES: [&str; 8] = ["g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8"];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn g(name: &str) -> GFunction {
        GFunction::builtin(name, GParams::default()).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(g("g1").eval(FRAC_PI_2).unwrap(), 0.5);
        assert_abs_diff_eq!(g("g3").eval(PI / 3.0).unwrap(), 5.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g("g8").eval(3.0 * FRAC_PI_4).unwrap(), 0.5, epsilon = 1e-15);
        assert!(g("g1").eval(-0.1).is_err());
        assert!(g("g1").eval(3.2).is_err());
    }

    #[test]
    fn breakpoint_ownership() {
        let g3 = g("g3");
        // [0, eps] owns eps, the second piece only approaches delta there
        assert_eq!(g3.eval(FRAC_PI_4).unwrap(), 0.0);
        assert_eq!(g3.eval(PI).unwrap(), 1.0);
        let g4 = g("g4");
        assert_eq!(g4.eval(FRAC_PI_2).unwrap(), 0.0);
        assert_abs_diff_eq!(g4.eval(FRAC_PI_2 + 1e-9).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn inverse_examples() {
        let inv = g("g1").inverse_set(0.5);
        assert_eq!(inv.exact, vec![FRAC_PI_2]);
        let inv = g("g8").inverse_set(0.5);
        assert_eq!(inv.exact.len(), 2);
        assert_abs_diff_eq!(inv.exact[0], FRAC_PI_4, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.exact[1], 3.0 * FRAC_PI_4, epsilon = 1e-12);
        assert_eq!(g("g3").inverse_set(0.0).exact, vec![FRAC_PI_4]);
        // outside the range of g1 entirely
        assert!(g("g1").inverse_set(1.5).is_empty());
    }

    #[test]
    fn one_sided_limits() {
        // g4 approaches 1 just right of pi/2 but never attains it
        let inv = g("g4").inverse_set(1.0);
        assert!(inv.exact.is_empty());
        assert_eq!(inv.limits, vec![FRAC_PI_2]);
        // g3 attains delta at 0, and approaches it from the right of eps
        let inv = g("g3").inverse_set(0.5);
        assert_eq!(inv.exact, vec![0.0]);
        assert_eq!(inv.limits, vec![FRAC_PI_4]);
    }

    #[test]
    fn constant_piece_is_flagged() {
        let f = GFunction::from_pieces(
            "flat",
            vec![
                Piece::new(0.0, 1.0, 0.0, 0.5, true),
                Piece::new(1.0, 2.0, 0.5, 0.5, false),
                Piece::new(2.0, PI, 0.5, 1.0, false),
            ],
        )
        .unwrap();
        let inv = f.inverse_set(0.5);
        assert!(inv.non_unique);
        assert_eq!(inv.exact, vec![1.0, 2.0]);
        assert!(!f.is_invertible());
    }

    #[test]
    fn big_g_examples() {
        assert_eq!(g("g1").big_g(0.0).unwrap(), 0.5);
        assert_eq!(g("g1").big_g(-1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(g("g8").big_g(0.5).unwrap(), 0.5, epsilon = 1e-15);
        assert!(g("g1").big_g(1.5).is_err());
    }

    #[test]
    fn q_transform_examples() {
        let g1 = g("g1");
        assert_eq!(g1.q_transform(0.0).unwrap(), vec![0.0]);
        assert_abs_diff_eq!(g1.q_transform(0.5).unwrap()[0], 0.5, epsilon = 1e-15);
        for p in [0.1, 0.3, 0.77] {
            let want = (1.0 - (PI * p).cos()) / 2.0;
            assert_abs_diff_eq!(g1.q_transform(p).unwrap()[0], want, epsilon = 1e-12);
        }
        assert!(g1.q_transform(1.2).is_err());
        // g2 never maps to a value above 1, so nothing is unattainable; g4 never attains 1
        assert!(g("g4").q_transform(1.0).unwrap().is_empty());
    }

    #[test]
    fn g8_preimages_agree_in_probability() {
        // g8 is symmetric about pi/2 so both preimages give the same Q value
        let g8 = g("g8");
        for p in [0.2, 0.5, 0.9] {
            assert_eq!(g8.inverse_set(p).exact.len(), 2);
            assert_eq!(g8.q_transform(p).unwrap().len(), 1);
        }
    }

    #[test]
    fn asymmetric_tent_bifurcates() {
        let tent = GFunction::from_pieces(
            "tent",
            vec![
                Piece::new(0.0, 1.0, 0.0, 1.0, true),
                Piece::new(1.0, PI, 1.0, 0.0, false),
            ],
        )
        .unwrap();
        assert!(!tent.is_invertible());
        let q = tent.q_transform(0.5).unwrap();
        assert_eq!(q.len(), 2);
        assert!(q[1] - q[0] > 0.01);
        assert_eq!(tent.q_inverse(0.5).unwrap().len(), 2);
    }

    #[test]
    fn invertibility_of_builtins() {
        let expect = [
            ("g1", true),
            ("g2", true),
            ("g3", true),
            ("g4", false),
            ("g5", false),
            ("g6", true),
            ("g7", false),
            ("g8", false),
        ];
        for (name, inv) in expect {
            assert_eq!(g(name).is_invertible(), inv, "{name}");
        }
    }

    #[test]
    fn q_inverse_of_zero_under_g3() {
        let q = g("g3").q_inverse(0.0).unwrap();
        assert_eq!(q.len(), 1);
        assert_abs_diff_eq!(q[0], 5.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn parse_specs() {
        let f = GFunction::parse("g3?delta=0.5&eps=0.7853981634").unwrap();
        assert_eq!(f.name(), "g3");
        assert_abs_diff_eq!(f.params().unwrap().eps, FRAC_PI_4, epsilon = 1e-10);
        assert_eq!(GFunction::parse("g1").unwrap().params(), None);
        assert!(GFunction::parse("g9").is_err());
        assert!(GFunction::parse("g3?delta=2").is_err());
        assert!(GFunction::parse("g3?eps=").is_err());
        assert!(GFunction::parse("g3?zeta=1").is_err());
    }

    #[test]
    fn json_pieces() {
        let text = r#"{"pieces":[
            {"from":0,"to":0.7853981634,"v_from":0.5,"v_to":0.0,"closed_left":true},
            {"from":0.7853981634,"to":3.14159265359,"v_from":0.5,"v_to":1.0,"closed_left":false}]}"#;
        let f = GFunction::from_json(text).unwrap();
        assert_abs_diff_eq!(f.eval(PI / 3.0).unwrap(), 5.0 / 9.0, epsilon = 1e-9);
        assert!(f.is_invertible());

        let gap =
            r#"{"pieces":[{"from":0,"to":1,"v_from":0,"v_to":1},{"from":1.1,"to":3.14159265359,"v_from":0,"v_to":1}]}"#;
        assert!(GFunction::from_json(gap).is_err());
        let range = r#"{"pieces":[{"from":0,"to":3.14159265359,"v_from":0,"v_to":1.5}]}"#;
        assert!(GFunction::from_json(range).is_err());
        let open = r#"{"pieces":[{"from":0,"to":3.14159265359,"v_from":0,"v_to":1,"closed_left":false}]}"#;
        assert!(GFunction::from_json(open).is_err());
    }

    #[test]
    fn roundtrip_on_dense_grid() {
        for name in BUILTIN_NAMES {
            let f = g(name);
            if !f.is_invertible() {
                continue;
            }
            for i in 0..=1000 {
                let theta = PI * i as f64 / 1000.0;
                let inv = f.inverse_set(f.eval(theta).unwrap());
                assert!(
                    inv.exact.iter().any(|t| (t - theta).abs() <= ANGLE_TOL),
                    "{name} at {theta}: {:?}",
                    inv.exact
                );
            }
        }
    }

    fn arb_g() -> impl Strategy<Value = GFunction> {
        (0usize..8, 0.01f64..0.99, 0.05f64..3.09)
            .prop_map(|(i, delta, eps)| GFunction::builtin(BUILTIN_NAMES[i], GParams { delta, eps }).unwrap())
    }

    proptest! {
        #[test]
        fn fixed_points_coincide(f in arb_g(), k in 0usize..3) {
            let theta = [0.0, FRAC_PI_2, PI][k];
            let p = f.eval(theta).unwrap();
            let q = f.q_transform(p).unwrap();
            prop_assert!(q.iter().any(|v| (v - p).abs() <= 1e-12), "{:?} vs {}", q, p);
        }

        #[test]
        fn q_transform_stays_in_unit_interval(f in arb_g(), p in 0.0f64..=1.0) {
            for v in f.q_transform(p).unwrap() {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }

        #[test]
        fn inverse_points_map_back(f in arb_g(), p in 0.0f64..=1.0) {
            for theta in f.inverse_set(p).exact {
                prop_assert!((f.eval(theta).unwrap() - p).abs() <= 1e-9);
            }
        }
    }
}
