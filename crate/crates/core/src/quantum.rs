//! Exact one- and two-qubit reference computations.
//!
//! Basis order is `|0>, |1>` for one qubit and `|00>, |01>, |10>, |11>` for
//! two, with the first qubit as the most significant bit. Everything here is
//! tiny dense linear algebra; nothing is optimised.

use num_complex::Complex64 as C;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Mat2 = [[C; 2]; 2];
pub type Mat4 = [[C; 4]; 4];
pub type Vec3 = [f64; 3];

const NORM_TOL: f64 = 1e-12;
const UNIT_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

const O: C = C::new(0.0, 0.0);
const I1: C = C::new(1.0, 0.0);

pub fn identity2() -> Mat2 {
    [[I1, O], [O, I1]]
}

pub fn sigma_x() -> Mat2 {
    [[O, I1], [I1, O]]
}

pub fn sigma_y() -> Mat2 {
    [[O, c(0.0, -1.0)], [c(0.0, 1.0), O]]
}

pub fn sigma_z() -> Mat2 {
    [[I1, O], [O, -I1]]
}

pub fn hadamard() -> Mat2 {
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[O; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn scale2(a: &Mat2, k: C) -> Mat2 {
    a.map(|row| row.map(|x| x * k))
}

pub fn add2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn dagger2(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [[O; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[i / 2][j / 2] * b[i % 2][j % 2];
        }
    }
    out
}

pub fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[O; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn dagger4(a: &Mat4) -> Mat4 {
    let mut out = [[O; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn identity4() -> Mat4 {
    let mut out = [[O; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = I1;
    }
    out
}

pub fn apply4(a: &Mat4, v: &[C; 4]) -> [C; 4] {
    let mut out = [O; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

pub fn apply2(a: &Mat2, v: &[C; 2]) -> [C; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

/// Largest entry-wise deviation of `U^dagger U` from the identity.
pub fn unitarity_defect4(u: &Mat4) -> f64 {
    let p = mul4(&dagger4(u), u);
    let id = identity4();
    (0..16)
        .map(|k| (p[k / 4][k % 4] - id[k / 4][k % 4]).norm())
        .fold(0.0, f64::max)
}

pub fn unitarity_defect2(u: &Mat2) -> f64 {
    let p = mul2(&dagger2(u), u);
    let id = identity2();
    (0..4)
        .map(|k| (p[k / 2][k % 2] - id[k / 2][k % 2]).norm())
        .fold(0.0, f64::max)
}

/// `sigma . n` for a direction `n`.
pub fn spin_operator(n: Vec3) -> Mat2 {
    let terms = [
        scale2(&sigma_x(), c(n[0], 0.0)),
        scale2(&sigma_y(), c(n[1], 0.0)),
        scale2(&sigma_z(), c(n[2], 0.0)),
    ];
    add2(&add2(&terms[0], &terms[1]), &terms[2])
}

fn check_unit(what: &'static str, n: Vec3) -> Result<()> {
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::Domain {
            what,
            value: norm,
            range: "unit length",
        });
    }
    Ok(())
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<C>,
}

impl PureState {
    /// A one- or two-qubit state; the squared norm must be 1 within 1e-12.
    pub fn new(amps: Vec<C>) -> Result<Self> {
        if amps.len() != 2 && amps.len() != 4 {
            return Err(Error::InvalidState(format!(
                "expected 2 or 4 amplitudes, got {}",
                amps.len()
            )));
        }
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm2} is not 1")));
        }
        Ok(PureState { amps })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        PureState::new(amps.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn amps(&self) -> &[C] {
        &self.amps
    }

    pub fn qubits(&self) -> usize {
        if self.amps.len() == 2 {
            1
        } else {
            2
        }
    }

    fn as4(&self) -> Result<[C; 4]> {
        self.amps
            .as_slice()
            .try_into()
            .map_err(|_| Error::InvalidState("two-qubit state required".into()))
    }

    /// `<psi| O |psi>` for a two-qubit observable; real part only.
    pub fn expectation4(&self, op: &Mat4) -> Result<f64> {
        let v = self.as4()?;
        let ov = apply4(op, &v);
        Ok(v.iter().zip(ov.iter()).map(|(a, b)| a.conj() * b).sum::<C>().re)
    }
}

/// `(|01> - |10>) / sqrt 2`.
pub fn singlet() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState::from_real(&[0.0, h, -h, 0.0]).expect("normalised")
}

/// Rank-one test on the coefficient matrix: `|c00 c11 - c01 c10| <= 1e-10`.
pub fn is_separable(state: &PureState) -> Result<bool> {
    let a = state.as4()?;
    Ok((a[0] * a[3] - a[1] * a[2]).norm() <= 1e-10)
}

/// `<(sigma.a)(sigma.b)>` in the singlet, by explicit expectation value.
pub fn singlet_correlation(a: Vec3, b: Vec3) -> Result<f64> {
    check_unit("dir_a", a)?;
    check_unit("dir_b", b)?;
    singlet().expectation4(&kron(&spin_operator(a), &spin_operator(b)))
}

/// `Tr(rho (sigma.a)(sigma.b))` for `rho = (I - (1/3) sum_i sigma_i x sigma_i) / 4`,
/// the equal mixture of the singlet-like product states.
pub fn product_mixture_correlation(a: Vec3, b: Vec3) -> Result<f64> {
    check_unit("dir_a", a)?;
    check_unit("dir_b", b)?;
    let paulis = [sigma_x(), sigma_y(), sigma_z()];
    let mut rho = identity4();
    for s in &paulis {
        let k = kron(s, s);
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] -= k[i][j] / 3.0;
            }
        }
    }
    let obs = kron(&spin_operator(a), &spin_operator(b));
    let prod = mul4(&rho, &obs);
    Ok((0..4).map(|i| prod[i][i]).sum::<C>().re / 4.0)
}

/// Four measurement directions for the CHSH combination
/// `C(a,b) + C(a',b') + C(a',b) - C(a,b')`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChshSettings {
    pub a: Vec3,
    pub a2: Vec3,
    pub b: Vec3,
    pub b2: Vec3,
}

impl ChshSettings {
    /// `a = x`, `a' = z`, `b = (x_b, 0, z_b)`, `b' = (-x_b, 0, z_b)`, with
    /// `(x_b, z_b)` rescaled to unit length.
    pub fn family(x_b: f64, z_b: f64) -> Result<Self> {
        let n = x_b.hypot(z_b);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain {
                what: "(x_b, z_b)",
                value: n,
                range: "nonzero length",
            });
        }
        let (x, z) = (x_b / n, z_b / n);
        Ok(ChshSettings {
            a: [1.0, 0.0, 0.0],
            a2: [0.0, 0.0, 1.0],
            b: [x, 0.0, z],
            b2: [-x, 0.0, z],
        })
    }

    /// Family member with `b` at angle `theta` from z.
    pub fn family_angle(theta: f64) -> Self {
        ChshSettings::family(theta.sin(), theta.cos()).expect("unit")
    }

    pub fn combine(&self, corr: impl Fn(Vec3, Vec3) -> f64) -> f64 {
        corr(self.a, self.b) + corr(self.a2, self.b2) + corr(self.a2, self.b) - corr(self.a, self.b2)
    }
}

/// Correlation in `c00|00> + c11|11>` (real amplitudes):
/// `z_a z_b + 2 c00 c11 (x_a x_b - y_a y_b)`.
pub fn benenti_correlation(c00: f64, c11: f64, a: Vec3, b: Vec3) -> f64 {
    a[2] * b[2] + 2.0 * c00 * c11 * (a[0] * b[0] - a[1] * b[1])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChshResult {
    pub delta: f64,
    /// Same combination from full operator expectation values.
    pub delta_operator: f64,
    /// Amplitudes after rescaling to unit norm.
    pub c00: f64,
    pub c11: f64,
}

/// Inputs within this distance of unit norm are rescaled, so four-digit
/// amplitudes such as 0.7071 are accepted.
pub const CHSH_NORM_TOL: f64 = 1e-4;

pub fn chsh_quantum(c00: f64, c11: f64, settings: &ChshSettings) -> Result<ChshResult> {
    let n2 = c00 * c00 + c11 * c11;
    if !n2.is_finite() || (n2 - 1.0).abs() > CHSH_NORM_TOL {
        return Err(Error::InvalidState(format!("c00^2 + c11^2 = {n2}, expected 1")));
    }
    for (what, v) in [
        ("a", settings.a),
        ("a'", settings.a2),
        ("b", settings.b),
        ("b'", settings.b2),
    ] {
        check_unit(what, v)?;
    }
    let n = n2.sqrt();
    let (c00, c11) = (c00 / n, c11 / n);
    let delta = settings.combine(|a, b| benenti_correlation(c00, c11, a, b));
    let state = PureState::new(vec![c(c00, 0.0), O, O, c(c11, 0.0)])?;
    let delta_operator = settings.combine(|a, b| {
        state
            .expectation4(&kron(&spin_operator(a), &spin_operator(b)))
            .expect("two-qubit state")
    });
    Ok(ChshResult {
        delta,
        delta_operator,
        c00,
        c11,
    })
}

/// Meyer's penny flip: Q applies H, Picard flips with probability
/// `picard_flip_prob`, Q applies H again. Returns the probability the coin
/// shows heads (`|0>`), i.e. that Q wins.
pub fn meyer_penny_flip(picard_flip_prob: f64) -> Result<f64> {
    crate::error::check_unit_interval("picard_flip_prob", picard_flip_prob)?;
    let h = hadamard();
    let heads = [I1, O];
    let win = |picard: &Mat2| {
        let v = apply2(&h, &apply2(picard, &apply2(&h, &heads)));
        v[0].norm_sqr()
    };
    Ok(picard_flip_prob * win(&sigma_x()) + (1.0 - picard_flip_prob) * win(&identity2()))
}

/// The same game when Q may only flip or not, each with probability 1/2, at
/// both turns.
pub fn meyer_classical_q(picard_flip_prob: f64) -> Result<f64> {
    crate::error::check_unit_interval("picard_flip_prob", picard_flip_prob)?;
    let ops = [identity2(), sigma_x()];
    let heads = [I1, O];
    let mut total = 0.0;
    for (q1, w1) in [(0, 0.5), (1, 0.5)] {
        for (p, wp) in [(0, 1.0 - picard_flip_prob), (1, picard_flip_prob)] {
            for (q2, w2) in [(0, 0.5), (1, 0.5)] {
                let v = apply2(&ops[q2], &apply2(&ops[p], &apply2(&ops[q1], &heads)));
                total += w1 * wp * w2 * v[0].norm_sqr();
            }
        }
    }
    Ok(total)
}

/// `U(theta, phi) = [[e^{i phi} cos(theta/2), sin(theta/2)], [-sin(theta/2), e^{-i phi} cos(theta/2)]]`.
pub fn eisert_unitary(theta: f64, phi: f64) -> Mat2 {
    let (s, co) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    [
        [C::from_polar(co, phi), c(s, 0.0)],
        [c(-s, 0.0), C::from_polar(co, -phi)],
    ]
}

/// Entangling gate `J = exp(i gamma D x D / 2)` with `D = U(pi, 0)`.
/// Since `(D x D)^2 = I` this is `cos(gamma/2) I + i sin(gamma/2) D x D`.
pub fn eisert_j(gamma: f64) -> Mat4 {
    let d: Mat2 = [[O, I1], [-I1, O]];
    let dd = kron(&d, &d);
    let (s, co) = ((gamma / 2.0).sin(), (gamma / 2.0).cos());
    let mut j = identity4();
    for i in 0..4 {
        for k in 0..4 {
            j[i][k] = j[i][k] * co + dd[i][k] * c(0.0, s);
        }
    }
    j
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EisertMove {
    pub theta: f64,
    pub phi: f64,
}

impl EisertMove {
    pub const COOPERATE: EisertMove = EisertMove { theta: 0.0, phi: 0.0 };
    pub const DEFECT: EisertMove = EisertMove {
        theta: std::f64::consts::PI,
        phi: 0.0,
    };
    pub const Q: EisertMove = EisertMove {
        theta: 0.0,
        phi: std::f64::consts::FRAC_PI_2,
    };
}

/// Angles this far outside their range are clamped onto it, so rounded
/// inputs such as `gamma = 1.5708` are accepted.
pub const EISERT_INPUT_TOL: f64 = 1e-4;

/// Final state `J^dagger (U_A x U_B) J |00>`.
pub fn eisert_final_state(a: EisertMove, b: EisertMove, gamma: f64) -> Result<[C; 4]> {
    use std::f64::consts::{FRAC_PI_2, PI};
    let checks = [
        ("theta_A", a.theta, 0.0, PI, "[0, pi]"),
        ("theta_B", b.theta, 0.0, PI, "[0, pi]"),
        ("phi_A", a.phi, 0.0, FRAC_PI_2, "[0, pi/2]"),
        ("phi_B", b.phi, 0.0, FRAC_PI_2, "[0, pi/2]"),
        ("gamma", gamma, 0.0, FRAC_PI_2, "[0, pi/2]"),
    ];
    let mut v = [0.0; 5];
    for (slot, (what, value, lo, hi, range)) in v.iter_mut().zip(checks) {
        if !(lo - EISERT_INPUT_TOL..=hi + EISERT_INPUT_TOL).contains(&value) {
            return Err(Error::Domain { what, value, range });
        }
        *slot = value.clamp(lo, hi);
    }
    let [ta, tb, pa, pb, gamma] = v;
    let j = eisert_j(gamma);
    let u = kron(&eisert_unitary(ta, pa), &eisert_unitary(tb, pb));
    let psi0 = [I1, O, O, O];
    Ok(apply4(&dagger4(&j), &apply4(&u, &apply4(&j, &psi0))))
}

/// Expected payoffs for row-player cells `(r, s, t, u)` =
/// (C,C), (C,D), (D,C), (D,D); B's payoff swaps `s` and `t`.
pub fn eisert_pd(cells: [f64; 4], a: EisertMove, b: EisertMove, gamma: f64) -> Result<(f64, f64)> {
    let psi = eisert_final_state(a, b, gamma)?;
    let p: Vec<f64> = psi.iter().map(|x| x.norm_sqr()).collect();
    let [r, s, t, u] = cells;
    Ok((
        r * p[0] + s * p[1] + t * p[2] + u * p[3],
        r * p[0] + t * p[1] + s * p[2] + u * p[3],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2};

    fn close2(a: &Mat2, b: &Mat2) -> bool {
        (0..4).all(|k| (a[k / 2][k % 2] - b[k / 2][k % 2]).norm() < 1e-12)
    }

    #[test]
    fn pauli_algebra() {
        let id = identity2();
        for s in [sigma_x(), sigma_y(), sigma_z()] {
            assert!(close2(&mul2(&s, &s), &id));
        }
        assert!(close2(&mul2(&sigma_x(), &sigma_y()), &scale2(&sigma_z(), c(0.0, 1.0))));
        assert!(unitarity_defect2(&hadamard()) < 1e-12);
    }

    #[test]
    fn separability() {
        let h = FRAC_1_SQRT_2;
        assert!(is_separable(&PureState::from_real(&[1.0, 0.0, 0.0, 0.0]).unwrap()).unwrap());
        assert!(!is_separable(&PureState::from_real(&[h, 0.0, 0.0, h]).unwrap()).unwrap());
        assert!(is_separable(&PureState::from_real(&[h, h, 0.0, 0.0]).unwrap()).unwrap());
        assert!(!is_separable(&singlet()).unwrap());
        assert!(PureState::from_real(&[1.0, 1.0, 0.0, 0.0]).is_err());
        assert!(PureState::from_real(&[1.0, 0.0, 0.0]).is_err());
        assert!(is_separable(&PureState::from_real(&[1.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn singlet_examples() {
        let z = [0.0, 0.0, 1.0];
        assert_abs_diff_eq!(singlet_correlation(z, z).unwrap(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(singlet_correlation(z, [1.0, 0.0, 0.0]).unwrap(), 0.0, epsilon = 1e-12);
        let t = PI / 3.0;
        let a = [t.sin(), 0.0, t.cos()];
        assert_abs_diff_eq!(singlet_correlation(a, z).unwrap(), -t.cos(), epsilon = 1e-12);
        assert!(singlet_correlation([1.0, 1.0, 0.0], z).is_err());
    }

    #[test]
    fn mixture_is_a_third_of_singlet() {
        let z = [0.0, 0.0, 1.0];
        assert_abs_diff_eq!(product_mixture_correlation(z, z).unwrap(), -1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    #[allow(clippy::approx_constant)] // rounded inputs on purpose
    fn chsh_examples() {
        let fam = ChshSettings::family(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
        let r = chsh_quantum(FRAC_1_SQRT_2, FRAC_1_SQRT_2, &fam).unwrap();
        assert_abs_diff_eq!(r.delta, 2.0 * SQRT_2, epsilon = 1e-10);
        assert_abs_diff_eq!(r.delta_operator, r.delta, epsilon = 1e-10);

        let zb = fam.b[2];
        let r = chsh_quantum(1.0, 0.0, &fam).unwrap();
        assert_abs_diff_eq!(r.delta, 2.0 * zb, epsilon = 1e-12);

        // small angle: 2(2 c00 c11 x_b + z_b) ~ 2(1 + 2 c00 c11 theta)
        let theta = 1e-4;
        let (c00, c11) = (0.8f64, 0.6f64);
        let r = chsh_quantum(c00, c11, &ChshSettings::family_angle(theta)).unwrap();
        assert_abs_diff_eq!(r.delta, 2.0 * (1.0 + 2.0 * c00 * c11 * theta), epsilon = 1e-7);

        assert!(chsh_quantum(0.9, 0.9, &fam).is_err());
        // four-digit amplitudes are rescaled
        let r = chsh_quantum(0.7071, 0.7071, &fam).unwrap();
        assert_abs_diff_eq!(r.delta, 2.0 * SQRT_2, epsilon = 1e-10);
    }

    #[test]
    fn meyer() {
        for p in [0.0, 0.3, 1.0] {
            assert_abs_diff_eq!(meyer_penny_flip(p).unwrap(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(meyer_classical_q(p).unwrap(), 0.5, epsilon = 1e-12);
        }
        assert!(meyer_penny_flip(1.5).is_err());
    }

    // exp(iX) by power series, independent of the closed form
    fn expm_series(x: &Mat4) -> Mat4 {
        let mut term = identity4();
        let mut sum = identity4();
        for k in 1..40 {
            term = mul4(&term, x);
            for row in term.iter_mut() {
                for v in row.iter_mut() {
                    *v /= k as f64;
                }
            }
            for i in 0..4 {
                for j in 0..4 {
                    sum[i][j] += term[i][j];
                }
            }
        }
        sum
    }

    #[test]
    fn j_matches_series() {
        let d = eisert_unitary(PI, 0.0);
        for gamma in [0.0, 0.4, FRAC_PI_2] {
            let mut x = kron(&d, &d);
            for row in x.iter_mut() {
                for v in row.iter_mut() {
                    *v *= c(0.0, gamma / 2.0);
                }
            }
            let series = expm_series(&x);
            let closed = eisert_j(gamma);
            for i in 0..4 {
                for j in 0..4 {
                    assert!((series[i][j] - closed[i][j]).norm() < 1e-12);
                }
            }
            assert!(unitarity_defect4(&closed) < 1e-12);
        }
    }

    #[test]
    #[allow(clippy::approx_constant)] // rounded inputs on purpose
    fn eisert_examples() {
        let cells = [3.0, 0.0, 5.0, 1.0];
        let (a, b) = eisert_pd(cells, EisertMove::COOPERATE, EisertMove::COOPERATE, 0.0).unwrap();
        assert_abs_diff_eq!(a, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 3.0, epsilon = 1e-12);
        let (a, b) = eisert_pd(cells, EisertMove::DEFECT, EisertMove::DEFECT, 0.0).unwrap();
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-12);
        let (a, b) = eisert_pd(cells, EisertMove::Q, EisertMove::Q, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(a, 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(b, 3.0, epsilon = 1e-10);
        // defecting against cooperation
        let (a, b) = eisert_pd(cells, EisertMove::DEFECT, EisertMove::COOPERATE, 0.0).unwrap();
        assert_abs_diff_eq!(a, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 0.0, epsilon = 1e-12);
        assert!(eisert_pd(cells, EisertMove { theta: 4.0, phi: 0.0 }, EisertMove::Q, 0.0).is_err());
        assert!(eisert_pd(cells, EisertMove::Q, EisertMove::Q, 2.0).is_err());
        let rounded = eisert_pd(cells, EisertMove::Q, EisertMove::Q, 1.5708).unwrap();
        assert_abs_diff_eq!(rounded.0, 3.0, epsilon = 1e-12);
    }

    fn unit() -> impl Strategy<Value = Vec3> {
        (0.0f64..PI, 0.0f64..2.0 * PI).prop_map(|(t, p)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
    }

    proptest! {
        #[test]
        fn singlet_is_minus_dot(a in unit(), b in unit()) {
            prop_assert!((singlet_correlation(a, b).unwrap() + dot(a, b)).abs() < 1e-12);
            prop_assert!((product_mixture_correlation(a, b).unwrap() + dot(a, b) / 3.0).abs() < 1e-12);
        }

        #[test]
        fn tsirelson_envelope(t in 0.0f64..PI, a in unit(), a2 in unit(), b in unit(), b2 in unit()) {
            let s = ChshSettings { a, a2, b, b2 };
            let r = chsh_quantum(t.cos(), t.sin(), &s).unwrap();
            prop_assert!(r.delta.abs() <= 2.0 * SQRT_2 + 1e-9);
            prop_assert!((r.delta - r.delta_operator).abs() < 1e-10);
        }
    }
}
