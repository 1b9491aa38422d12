//! The classical rank-2 layer: Dedekind sums, the Dedekind–Rademacher
//! function and its level-N cocycle, the modular defects P_2 and P_2^(N) of
//! the theta function, and the bridge identities to the general smoothed
//! Bernoulli machinery.

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;

use crate::bernoulli::{bn_coefficients, bn_evaluate_rat};
use crate::error::{Error, Result};
use crate::forms::FormFamily;
use crate::rat::{frac, int, rat, ratio, Int, Rat};
use crate::smoothing::denominator_bound;

/// A matrix (a b; c d) in SL_2(Z).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sl2Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2Matrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Sl2Matrix> {
        if a * d - b * c != 1 {
            return Err(Error::Domain("matrix must have determinant 1".into()));
        }
        Ok(Sl2Matrix { a, b, c, d })
    }

    pub fn identity() -> Sl2Matrix {
        Sl2Matrix { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn neg_identity() -> Sl2Matrix {
        Sl2Matrix { a: -1, b: 0, c: 0, d: -1 }
    }

    pub fn mul(&self, o: &Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn in_gamma0(&self, n_smooth: i64) -> bool {
        self.c.rem_euclid(n_smooth) == 0
    }

    /// Action on the upper half-plane.
    pub fn apply_tau(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }
}

/// The classical Dedekind sum s(c, d) = sum_{k=1}^{c-1} b_1(k/c) b_1(kd/c).
pub fn dedekind_sum(c: i64, d: i64) -> Result<Rat> {
    if c <= 0 {
        return Err(Error::Domain("dedekind_sum needs c > 0".into()));
    }
    let b1 = |t: &Rat| -> Rat {
        if frac(t).is_zero() {
            Rat::zero()
        } else {
            frac(t) - ratio(1, 2)
        }
    };
    let mut s = Rat::zero();
    for k in 1..c {
        s += b1(&ratio(k, c)) * b1(&ratio(k * d, c));
    }
    Ok(s)
}

/// The Dedekind–Rademacher function; always an integer.  The rational term
/// is (a + d)/c: that is the variant which is integer-valued, satisfies the
/// near-morphism defect -3 sign(cc'c''), and makes the phi_DR expression for
/// the smoothed theta defect match its Dedekind-sum expression.
pub fn phi_dr(g: &Sl2Matrix) -> Result<Int> {
    let val = if g.c == 0 {
        ratio(g.b, g.d)
    } else {
        let sgn = rat(g.c.signum());
        ratio(g.a + g.d, g.c) - rat(12) * sgn * dedekind_sum(g.c.abs(), g.d)?
    };
    if !val.denom().is_one() {
        return Err(Error::Domain(format!("phi_DR produced a non-integer {val}")));
    }
    Ok(val.to_integer())
}

/// The level-N cocycle Psi_N(a b; c d) = phi_DR(a bN; c/N d) - phi_DR(a b; c d).
pub fn psi_n(g: &Sl2Matrix, n_smooth: i64) -> Result<Int> {
    if !g.in_gamma0(n_smooth) {
        return Err(Error::Domain("psi_N needs N | c".into()));
    }
    let conj = Sl2Matrix::new(g.a, g.b * n_smooth, g.c / n_smooth, g.d)?;
    Ok(phi_dr(&conj)? - phi_dr(g)?)
}

const TWO_PI: f64 = std::f64::consts::TAU;

/// theta(z, tau) = prod_{m >= 0} (1 - e^{-2 pi i z} q^{m+1})(1 - e^{2 pi i z} q^m)
/// with q = e^{2 pi i tau}, Im tau > 0.
pub fn theta(z: Complex64, tau: Complex64) -> Result<Complex64> {
    if tau.im <= 0.0 {
        return Err(Error::Domain("theta needs Im(tau) > 0".into()));
    }
    let q = (Complex64::new(0.0, TWO_PI) * tau).exp();
    let u = (Complex64::new(0.0, TWO_PI) * z).exp();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qm = Complex64::new(1.0, 0.0);
    loop {
        let f1 = Complex64::new(1.0, 0.0) - qm * &q / u;
        let f2 = Complex64::new(1.0, 0.0) - qm * u;
        if f1.norm() < 1e-13 || f2.norm() < 1e-13 {
            return Err(Error::Pole("theta vanishes at this point".into()));
        }
        prod *= f1 * f2;
        qm *= q;
        if qm.norm() * (u.norm() + 1.0 / u.norm()) < 1e-16 {
            break;
        }
    }
    Ok(prod)
}

/// The smoothed theta quotient theta(z,tau)^N / theta(Nz, N tau).
pub fn theta_smoothed(z: Complex64, tau: Complex64, n_smooth: i64) -> Result<Complex64> {
    let base = theta(z, tau)?;
    let sub = theta(z * n_smooth as f64, tau * n_smooth as f64)?;
    Ok(base.powi(n_smooth as i32) / sub)
}

/// The modular defect P_{2,gamma}(z, tau) of theta.
pub fn p2(g: &Sl2Matrix, z: Complex64, tau: Complex64) -> Result<Complex64> {
    if g.c == 0 {
        return if g.a == 1 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            // theta(-z, tau+b)/theta(z, tau) = -e^{-2 pi i z}, so the defect
            // is 1/2 - z (the other sign only matches modulo inversion)
            Ok(-z + 0.5)
        };
    }
    let c = g.c as f64;
    let d = g.d as f64;
    let ctd = tau * c + d;
    let s = crate::rat::to_f64(&dedekind_sum(g.c.abs(), g.d)?);
    let quad = (z * z * c * c + z * c + 1.0 / 6.0) / (ctd * 2.0 * c);
    Ok(quad - z / 2.0 + ctd / (12.0 * c) - g.c.signum() as f64 * (s + 0.25))
}

/// The smoothed modular defect, an exact rational depending only on the matrix.
pub fn p2_n(g: &Sl2Matrix, n_smooth: i64) -> Result<Rat> {
    if n_smooth < 2 {
        return Err(Error::Domain("smoothing level must be >= 2".into()));
    }
    if g.c == 0 {
        return match g.d {
            1 => Ok(Rat::zero()),
            -1 => Ok(ratio(1 - n_smooth, 2)),
            _ => unreachable!("c = 0 forces d = +-1 in SL_2(Z)"),
        };
    }
    if !g.in_gamma0(n_smooth) {
        return Err(Error::Domain("p2_n needs N | c".into()));
    }
    let sgn = rat(g.c.signum());
    let val = dedekind_sum(g.c.abs() / n_smooth, g.d)?
        - rat(n_smooth) * dedekind_sum(g.c.abs(), g.d)?
        + ratio(1 - n_smooth, 4);
    Ok(sgn * val)
}

/// Independent route through the Dedekind–Rademacher function:
/// P_2^(N) = (N phi_DR(g) - phi_DR(a bN; c/N d))/12 + branch term.
pub fn p2_n_via_phi_dr(g: &Sl2Matrix, n_smooth: i64) -> Result<Rat> {
    if !g.in_gamma0(n_smooth) {
        return Err(Error::Domain("p2_n needs N | c".into()));
    }
    let conj = Sl2Matrix::new(g.a, g.b * n_smooth, g.c / n_smooth, g.d)?;
    let diff = Rat::from_integer(int(n_smooth) * phi_dr(g)? - phi_dr(&conj)?) / rat(12);
    let branch = if g.c == 0 {
        match g.d {
            1 => Rat::zero(),
            -1 => ratio(1 - n_smooth, 2),
            _ => unreachable!(),
        }
    } else {
        rat(g.c.signum()) * ratio(1 - n_smooth, 4)
    };
    Ok(diff + branch)
}

/// Result of the rank-2 bridge between the classical and general layers.
#[derive(Debug, Clone)]
pub struct BridgeReport {
    pub p2n: Rat,
    /// the integer b of the general theorem for (a_1, a_2) = ([1,0], [d,-c])
    pub b: Int,
    pub denom_bound: Int,
    /// exact identity P_2^(N) = -b / D(N,2)
    pub exact_match: bool,
    /// |lhs/rhs - 1| for the theta^(N) transformation at a sample point
    pub theta_defect: f64,
}

/// Check P_2^(N)(g) = -b([1,0],[d,-c],0)/D(N,2) exactly, with b computed by
/// the smoothed difference of Bernoulli values, and verify the theta^(N)
/// transformation law numerically.
pub fn bridge_to_general(g: &Sl2Matrix, n_smooth: i64) -> Result<BridgeReport> {
    if !g.in_gamma0(n_smooth) {
        return Err(Error::Domain("bridge needs g in Gamma_0(N)".into()));
    }
    // theta^(N) pairs theta(z, tau) with theta(Nz, N tau).  In lattice terms
    // the subtracted object lives on the superlattice L + Z e_2/N (the forms
    // [1,0] and [d,-c] stay integral there exactly because N | c), not on
    // the sublattice [N e_1, e_2]; after rescaling this is B of the family
    // ([1,0], [d,-c/N]) at (Nw, (N x_1, x_2)).  The smoothed combination
    // N B(fam) - B(fam'') is then an honest constant equal to P_2^(N).
    let p2n_branch = p2_n(g, n_smooth)?;
    let value = if g.c == 0 {
        // reflection/identity case: the forms [1,0] and [d,0] are parallel,
        // so the general machinery degenerates; the branch table is the value
        p2n_branch.clone()
    } else {
        let fam = FormFamily::new(2, vec![vec![int(1), int(0)], vec![int(g.d), int(-g.c)]])?;
        let fam2 = FormFamily::new(
            2,
            vec![vec![int(1), int(0)], vec![int(g.d), int(-g.c / n_smooth)]],
        )?;
        let v = vec![Rat::zero(), Rat::zero()];
        let grid = bn_coefficients(&fam, &v)?;
        let grid2 = bn_coefficients(&fam2, &v)?;
        let n_rat = rat(n_smooth);
        let points: [(Rat, Rat, Rat); 3] = [
            (ratio(1, 7), ratio(2, 3), ratio(-1, 5)),
            (ratio(-2, 9), ratio(1, 4), ratio(3, 7)),
            (ratio(5, 11), ratio(-3, 8), ratio(2, 9)),
        ];
        let mut value: Option<Rat> = None;
        for (w, x1, x2) in &points {
            let base = bn_evaluate_rat(&grid, w, &[x1.clone(), x2.clone()])?;
            let sub = bn_evaluate_rat(&grid2, &(w * &n_rat), &[x1 * &n_rat, x2.clone()])?;
            let val = &n_rat * base - sub;
            match &value {
                None => value = Some(val),
                Some(prev) => {
                    if *prev != val {
                        return Err(Error::Domain(
                            "smoothed value for the bridge family is not constant".into(),
                        ));
                    }
                }
            }
        }
        value.unwrap()
    };
    let denom = denominator_bound(n_smooth, 2);
    let scaled = -&value * Rat::from_integer(denom.clone());
    if !scaled.denom().is_one() {
        return Err(Error::Domain("bridge value times D(N,2) is not an integer".into()));
    }
    let b = scaled.to_integer();
    let p2n_val = p2n_branch;
    let exact_match = p2n_val == value && p2n_val == -Rat::new(b.clone(), denom.clone());

    // theta^(N)(g(z,tau)) = theta^(N)(z,tau) exp(2 pi i P_2^(N))
    let z = Complex64::new(0.137, 0.211);
    let tau = Complex64::new(0.083, 1.19);
    let ctd = tau * g.c as f64 + g.d as f64;
    let lhs = theta_smoothed(z / ctd, g.apply_tau(tau), n_smooth)?;
    let rhs = theta_smoothed(z, tau, n_smooth)?
        * (Complex64::new(0.0, TWO_PI) * crate::rat::to_f64(&p2n_val)).exp();
    let theta_defect = (lhs / rhs - Complex64::new(1.0, 0.0)).norm();

    Ok(BridgeReport {
        p2n: p2n_val,
        b,
        denom_bound: denom,
        exact_match,
        theta_defect,
    })
}

/// A pseudorandom element of Gamma_0(N) with entries of moderate size.
pub fn random_gamma0<R: Rng>(n_smooth: i64, rng: &mut R) -> Sl2Matrix {
    let t = Sl2Matrix { a: 1, b: 1, c: 0, d: 1 };
    let t_inv = Sl2Matrix { a: 1, b: -1, c: 0, d: 1 };
    let u = Sl2Matrix { a: 1, b: 0, c: n_smooth, d: 1 };
    let u_inv = Sl2Matrix { a: 1, b: 0, c: -n_smooth, d: 1 };
    let mut g = Sl2Matrix::identity();
    for _ in 0..rng.random_range(2..7) {
        let step = match rng.random_range(0..4) {
            0 => t,
            1 => t_inv,
            2 => u,
            _ => u_inv,
        };
        g = g.mul(&step);
    }
    if rng.random_range(0..2) == 1 {
        g = g.mul(&Sl2Matrix::neg_identity());
    }
    g
}

/// A pseudorandom element of SL_2(Z) (words in the standard generators).
pub fn random_sl2<R: Rng>(rng: &mut R) -> Sl2Matrix {
    let s = Sl2Matrix { a: 0, b: -1, c: 1, d: 0 };
    let mut g = Sl2Matrix::identity();
    for _ in 0..rng.random_range(1..6) {
        let k = rng.random_range(-4..=4i64);
        g = g.mul(&Sl2Matrix { a: 1, b: k, c: 0, d: 1 }).mul(&s);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dedekind_sum_anchors() {
        assert_eq!(dedekind_sum(1, 5).unwrap(), rat(0));
        assert_eq!(dedekind_sum(3, 1).unwrap(), ratio(1, 18));
        assert_eq!(dedekind_sum(5, 2).unwrap(), rat(0));
        assert!(dedekind_sum(0, 1).is_err());
    }

    #[test]
    fn dedekind_sum_periodicity() {
        for c in 1..12i64 {
            for d in -6..6i64 {
                assert_eq!(
                    dedekind_sum(c, d).unwrap(),
                    dedekind_sum(c, d + c).unwrap(),
                    "c={c} d={d}"
                );
            }
        }
    }

    #[test]
    fn phi_dr_anchors_and_integrality() {
        assert_eq!(phi_dr(&Sl2Matrix::identity()).unwrap(), int(0));
        let s = Sl2Matrix::new(0, -1, 1, 0).unwrap();
        assert_eq!(phi_dr(&s).unwrap(), int(0));
        let st = Sl2Matrix::new(0, -1, 1, 1).unwrap();
        assert_eq!(phi_dr(&st).unwrap(), int(1));
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let g = random_sl2(&mut rng);
            phi_dr(&g).unwrap();
        }
    }

    #[test]
    fn phi_dr_near_morphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 100 {
            let g1 = random_sl2(&mut rng);
            let g2 = random_sl2(&mut rng);
            let g3 = g2.mul(&g1);
            if g1.c == 0 || g2.c == 0 || g3.c == 0 {
                continue;
            }
            let defect = phi_dr(&g3).unwrap() - phi_dr(&g1).unwrap() - phi_dr(&g2).unwrap();
            let expected = int(-3 * (g1.c * g2.c * g3.c).signum());
            assert_eq!(defect, expected);
            checked += 1;
        }
    }

    #[test]
    fn psi_n_is_a_morphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n_smooth in [2i64, 3, 5] {
            assert_eq!(psi_n(&Sl2Matrix::identity(), n_smooth).unwrap(), int(0));
            for _ in 0..60 {
                let g1 = random_gamma0(n_smooth, &mut rng);
                let g2 = random_gamma0(n_smooth, &mut rng);
                let lhs = psi_n(&g1.mul(&g2), n_smooth).unwrap();
                let rhs = psi_n(&g1, n_smooth).unwrap() + psi_n(&g2, n_smooth).unwrap();
                assert_eq!(lhs, rhs, "N={n_smooth}");
            }
        }
    }

    #[test]
    fn p2_matches_theta_transformation() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let z = Complex64::new(0.21, 0.17);
        let tau = Complex64::new(-0.13, 1.07);
        for _ in 0..25 {
            let g = random_sl2(&mut rng);
            let ctd = tau * g.c as f64 + g.d as f64;
            let lhs = theta(z / ctd, g.apply_tau(tau)).unwrap();
            let p = p2(&g, z, tau).unwrap();
            let rhs = theta(z, tau).unwrap() * (Complex64::new(0.0, TWO_PI) * p).exp();
            assert!(
                (lhs / rhs - Complex64::new(1.0, 0.0)).norm() < 1e-8,
                "g={g:?}"
            );
        }
    }

    #[test]
    fn p2n_branches_and_phi_dr_route() {
        for n_smooth in [2i64, 3, 5] {
            assert_eq!(p2_n(&Sl2Matrix::identity(), n_smooth).unwrap(), rat(0));
            assert_eq!(
                p2_n(&Sl2Matrix::neg_identity(), n_smooth).unwrap(),
                ratio(1 - n_smooth, 2)
            );
        }
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for n_smooth in [2i64, 3, 5] {
            for _ in 0..50 {
                let g = random_gamma0(n_smooth, &mut rng);
                assert_eq!(
                    p2_n(&g, n_smooth).unwrap(),
                    p2_n_via_phi_dr(&g, n_smooth).unwrap(),
                    "N={n_smooth} g={g:?}"
                );
            }
        }
    }

    #[test]
    fn p2n_twelve_integrality() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for n_smooth in [2i64, 3, 4, 5, 6] {
            for _ in 0..40 {
                let g = random_gamma0(n_smooth, &mut rng);
                let val = p2_n(&g, n_smooth).unwrap() * rat(12);
                assert!(val.denom().is_one(), "N={n_smooth} g={g:?}");
            }
        }
    }

    #[test]
    fn bridge_hand_anchor() {
        // c=2, d=1, N=2: P_2^(2) = s(1,1) - 2 s(2,1) - 1/4 = -1/4, b = 1
        let g = Sl2Matrix::new(1, 0, 2, 1).unwrap();
        let report = bridge_to_general(&g, 2).unwrap();
        assert_eq!(report.p2n, ratio(-1, 4));
        assert_eq!(report.b, int(1));
        assert_eq!(report.denom_bound, int(4));
        assert!(report.exact_match);
        assert!(report.theta_defect < 1e-8, "defect {}", report.theta_defect);
    }

    #[test]
    fn bridge_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for n_smooth in [2i64, 3, 5] {
            for _ in 0..8 {
                let g = random_gamma0(n_smooth, &mut rng);
                let report = bridge_to_general(&g, n_smooth).unwrap();
                assert!(report.exact_match, "N={n_smooth} g={g:?}");
                assert!(
                    report.theta_defect < 1e-8,
                    "N={n_smooth} g={g:?} defect {}",
                    report.theta_defect
                );
            }
        }
    }
}
