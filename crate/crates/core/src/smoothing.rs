//! Level-N smoothing along the first basis vector: membership in Λ_N, the
//! good-lattice criterion, the finite group Q, the lifts r_j(δ), and the
//! smoothed Bernoulli value computed two independent ways (direct difference
//! of lattice values vs. the periodic-Bernoulli Dedekind-sum formula).

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bernoulli::{bn_coefficients, bn_evaluate_rat, compositions, eval_poly,
    bernoulli_polynomial};
use crate::error::{Error, Result};
use crate::forms::{dual_basis_full, representatives_full, DualFamily, FormFamily};
use crate::rat::{frac, rem_euclid, Int, Rat};

/// Is the primitive form a = sum mu_k f_k in Λ_N, i.e. gcd(mu_1 N, mu_2, ..., mu_n) = 1?
pub fn in_lambda_n(a: &[Int], n_smooth: i64) -> bool {
    let mut g = &a[0] * Int::from(n_smooth);
    for mu in &a[1..] {
        g = g.gcd(mu);
    }
    g.abs().is_one()
}

/// The smoothing lattice L' (basis N e_1, e_2, ..., e_n) is good for the
/// family iff all forms lie in Λ_N and, in the independent case, every first
/// dual coordinate alpha_{1,j} is coprime to N.
pub fn is_good_lattice(fam: &FormFamily, n_smooth: i64) -> Result<bool> {
    if n_smooth < 2 {
        return Err(Error::Domain("smoothing level must be >= 2".into()));
    }
    if !fam.forms().iter().all(|a| in_lambda_n(a, n_smooth)) {
        return Ok(false);
    }
    if fam.len() == fam.n() && fam.rank() == fam.n() {
        let dual = dual_basis_full(fam)?;
        let n_int = Int::from(n_smooth);
        for alpha in &dual.alphas {
            if !alpha[0].gcd(&n_int).is_one() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Q = { q in (Z/N)^n : sum_j q_j alpha_{1,j} = 0 mod N }, of order N^{n-1}
/// when the lattice is good.
#[derive(Debug, Clone)]
pub struct QGroup {
    pub n: usize,
    pub n_smooth: i64,
    /// first dual coordinates alpha_{1,j} mod N
    pub alpha_row: Vec<Int>,
}

impl QGroup {
    pub fn contains(&self, q: &[Int]) -> bool {
        let mut acc = Int::zero();
        for (qj, aj) in q.iter().zip(&self.alpha_row) {
            acc += qj * aj;
        }
        rem_euclid(&acc, &Int::from(self.n_smooth)).is_zero()
    }

    pub fn size(&self) -> Int {
        let mut s = Int::one();
        for _ in 1..self.n {
            s *= Int::from(self.n_smooth);
        }
        s
    }

    /// Explicit elements, parameterized by (q_2, ..., q_n) with q_1 solved
    /// using an inverse of alpha_{1,1} mod N.  Requires goodness.
    pub fn elements(&self) -> Result<Vec<Vec<Int>>> {
        let n_int = Int::from(self.n_smooth);
        let beta = mod_inverse(&self.alpha_row[0], &n_int)
            .ok_or_else(|| Error::NotGood(self.n_smooth, "alpha_{1,1} not invertible mod N".into()))?;
        let mut out = Vec::new();
        let mut free = vec![Int::zero(); self.n - 1];
        loop {
            let mut rest = Int::zero();
            for (qj, aj) in free.iter().zip(&self.alpha_row[1..]) {
                rest += qj * aj;
            }
            let q1 = rem_euclid(&(-(&beta * rest)), &n_int);
            let mut q = vec![q1];
            q.extend(free.iter().cloned());
            debug_assert!(self.contains(&q));
            out.push(q);
            // odometer over (Z/N)^{n-1}
            let mut i = 0;
            loop {
                if i == free.len() {
                    return Ok(out);
                }
                free[i] += 1;
                if free[i] < n_int {
                    break;
                }
                free[i] = Int::zero();
                i += 1;
            }
        }
    }
}

fn mod_inverse(a: &Int, modulus: &Int) -> Option<Int> {
    let e = a.extended_gcd(modulus);
    if e.gcd.abs().is_one() {
        Some(rem_euclid(&(e.x * &e.gcd), modulus))
    } else {
        None
    }
}

pub fn compute_q(dual: &DualFamily, n_smooth: i64) -> QGroup {
    let n_int = Int::from(n_smooth);
    QGroup {
        n: dual.alphas.len(),
        n_smooth,
        alpha_row: dual
            .alphas
            .iter()
            .map(|alpha| rem_euclid(&alpha[0], &n_int))
            .collect(),
    }
}

/// The lift exponents r(δ) for δ in L (given in ambient coordinates):
/// r_1 = remainder of -beta * delta_1 modulo N (beta * alpha_{1,1} = 1 mod N)
/// and r_2 = ... = r_n = 0, so that delta + sum_j r_j alpha_j lies in L'.
pub fn compute_r(delta: &[Int], dual: &DualFamily, n_smooth: i64) -> Result<Vec<Int>> {
    let n = dual.alphas.len();
    let n_int = Int::from(n_smooth);
    let beta = mod_inverse(&dual.alphas[0][0], &n_int)
        .ok_or_else(|| Error::NotGood(n_smooth, "alpha_{1,1} not invertible mod N".into()))?;
    let mut r = vec![Int::zero(); n];
    r[0] = rem_euclid(&(-(&beta * &delta[0])), &n_int);
    // defining property: first ambient coordinate of the lift is 0 mod N
    debug_assert!(rem_euclid(&(&delta[0] + &r[0] * &dual.alphas[0][0]), &n_int).is_zero());
    Ok(r)
}

/// F' = { delta + sum_j (r_j(delta) + q_j) alpha_j : delta in F, q in Q },
/// a set of representatives for L'/M' in ambient coordinates.
pub fn lift_representatives(
    f_reps: &[Vec<Int>],
    dual: &DualFamily,
    n_smooth: i64,
) -> Result<Vec<Vec<Int>>> {
    let n = dual.alphas.len();
    let q_group = compute_q(dual, n_smooth);
    let q_elems = q_group.elements()?;
    let mut out = Vec::with_capacity(f_reps.len() * q_elems.len());
    for delta in f_reps {
        let r = compute_r(delta, dual, n_smooth)?;
        for q in &q_elems {
            let mut lifted = delta.clone();
            for j in 0..n {
                let c = &r[j] + &q[j];
                for (li, aj) in lifted.iter_mut().zip(&dual.alphas[j]) {
                    *li += &c * aj;
                }
            }
            out.push(lifted);
        }
    }
    Ok(out)
}

/// Rewrite (forms, v, x) in the coordinates of the smoothing lattice
/// (basis N e_1, e_2, ..., e_n).  The forms may lose primitivity there.
pub fn to_smoothing_coords(
    fam: &FormFamily,
    v: &[Rat],
    x: &[Rat],
    n_smooth: i64,
) -> Result<(FormFamily, Vec<Rat>, Vec<Rat>)> {
    let n = fam.n();
    let n_int = Int::from(n_smooth);
    let forms: Vec<Vec<Int>> = fam
        .forms()
        .iter()
        .map(|a| {
            let mut row = a.clone();
            row[0] = &row[0] * &n_int;
            row
        })
        .collect();
    let fam2 = FormFamily::new_imprimitive(n, forms)?;
    let mut v2 = v.to_vec();
    v2[0] = &v2[0] / Rat::from_integer(n_int.clone());
    let mut x2 = x.to_vec();
    x2[0] = &x2[0] * Rat::from_integer(n_int);
    Ok((fam2, v2, x2))
}

/// N * B(v)(w, x, L') - B(v)(w, x, L) at an exact rational point.  Defined
/// for any family; (w,x)-independence is only guaranteed for good lattices.
pub fn smoothed_bn_direct(
    fam: &FormFamily,
    v: &[Rat],
    w: &Rat,
    x: &[Rat],
    n_smooth: i64,
) -> Result<Rat> {
    if n_smooth < 2 {
        return Err(Error::Domain("smoothing level must be >= 2".into()));
    }
    let base = bn_evaluate_rat(&bn_coefficients(fam, v)?, w, x)?;
    let (fam2, v2, x2) = to_smoothing_coords(fam, v, x, n_smooth)?;
    let sub = bn_evaluate_rat(&bn_coefficients(&fam2, &v2)?, w, &x2)?;
    Ok(Rat::from_integer(Int::from(n_smooth)) * sub - base)
}

/// The Y coefficient of Eq. (definitionY) for a tuple (k_1, ..., k_n), the
/// translation v, and a representative delta in F (ambient coordinates).
pub fn y_coefficient(
    ks: &[usize],
    fam: &FormFamily,
    dual: &DualFamily,
    v: &[Rat],
    delta: &[Int],
    n_smooth: i64,
) -> Result<Rat> {
    let n = fam.n();
    let n_rat = Rat::from_integer(Int::from(n_smooth));
    let r = compute_r(delta, dual, n_smooth)?;
    let q_elems = compute_q(dual, n_smooth).elements()?;
    let polys: Vec<Vec<Rat>> = ks.iter().map(|&k| bernoulli_polynomial(k)).collect();

    let coords: Vec<Rat> = (0..n)
        .map(|j| fam.apply(j, v) + Rat::from_integer(fam.apply_int(j, delta)))
        .collect();

    let mut smooth_sum = Rat::zero();
    for q in &q_elems {
        let mut prod = Rat::one();
        for j in 0..n {
            let s_j = Rat::from_integer(dual.s[j].clone());
            let shift = Rat::from_integer(&r[j] + &q[j]) * &s_j;
            let arg = (&coords[j] + shift) / (&n_rat * &s_j);
            prod *= eval_poly(&polys[j], &frac(&arg));
            // the N^{k_j - 1} weight
            if ks[j] == 0 {
                prod /= &n_rat;
            } else {
                for _ in 0..ks[j] - 1 {
                    prod *= &n_rat;
                }
            }
        }
        smooth_sum += prod;
    }

    let mut plain = Rat::one();
    for j in 0..n {
        let arg = &coords[j] / Rat::from_integer(dual.s[j].clone());
        plain *= eval_poly(&polys[j], &frac(&arg));
    }

    Ok(n_rat * smooth_sum - plain)
}

/// D(N, n) = prod over primes p | N of p^{floor(n / (p-1))}.
pub fn denominator_bound(n_smooth: i64, n: usize) -> Int {
    let mut d = Int::one();
    for p in prime_factors(n_smooth) {
        let e = (n as i64) / (p - 1);
        for _ in 0..e {
            d *= Int::from(p);
        }
    }
    d
}

/// Dimension-only bound: product over all primes p <= n+1 of p^{floor(n/(p-1))}.
pub fn dim_bound(n: usize) -> Int {
    let mut d = Int::one();
    for p in 2..=(n as i64 + 1) {
        if !is_prime(p) {
            continue;
        }
        let e = (n as i64) / (p - 1);
        for _ in 0..e {
            d *= Int::from(p);
        }
    }
    d
}

fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The smoothed Bernoulli value as an exact constant, with its integrality
/// certificate against the denominator bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothedValue {
    pub value: Rat,
    pub b: Int,
    pub denom_bound: Int,
}

/// The periodic-Bernoulli (Dedekind sum) formula: only the k = (1, ..., 1)
/// tuple survives, so the value is
/// eps*(-1)^n * sum over F of Y(1, ..., 1, v, delta).
pub fn smoothed_bn_dedekind(fam: &FormFamily, v: &[Rat], n_smooth: i64) -> Result<SmoothedValue> {
    let n = fam.n();
    if fam.len() != n || fam.rank() != n {
        return Err(Error::Rank("smoothed_bn_dedekind needs n independent forms".into()));
    }
    if !is_good_lattice(fam, n_smooth)? {
        return Err(Error::NotGood(
            n_smooth,
            "the Dedekind-sum formula is only proven for good lattices".into(),
        ));
    }
    let grid = bn_coefficients(fam, v)?; // for epsilon and the dual
    let dual = grid.dual.clone().unwrap();
    let f_reps = representatives_full(fam, &dual, v)?;
    let ones = vec![1usize; n];
    let mut total = Rat::zero();
    for delta in &f_reps {
        total += y_coefficient(&ones, fam, &dual, v, delta, n_smooth)?;
    }
    let value = Rat::from_integer(Int::from(grid.sign())) * total;
    let denom = denominator_bound(n_smooth, n);
    let scaled = &value * Rat::from_integer(denom.clone());
    if !scaled.denom().is_one() {
        return Err(Error::Domain(format!(
            "smoothed value {value} times D(N,n)={denom} is not an integer"
        )));
    }
    Ok(SmoothedValue {
        value,
        b: scaled.to_integer(),
        denom_bound: denom,
    })
}

/// Reassemble the full rational function from the Y grid and evaluate it;
/// must agree with `smoothed_bn_direct` at every point.
pub fn smoothed_bn_from_y_grid(
    fam: &FormFamily,
    v: &[Rat],
    w: &Rat,
    x: &[Rat],
    n_smooth: i64,
) -> Result<Rat> {
    let n = fam.n();
    let grid = bn_coefficients(fam, v)?;
    if grid.epsilon == 0 {
        return Ok(Rat::zero());
    }
    let dual = grid.dual.clone().unwrap();
    let f_reps = representatives_full(fam, &dual, v)?;
    let xa: Vec<Rat> = dual
        .alphas
        .iter()
        .map(|alpha| {
            alpha
                .iter()
                .zip(x)
                .map(|(a, xi)| Rat::from_integer(a.clone()) * xi)
                .sum()
        })
        .collect();
    if xa.iter().any(|c| c.is_zero()) {
        return Err(Error::Pole("x vanishes on a dual vector".into()));
    }
    let factorial = |m: usize| -> Rat {
        let mut f = Int::one();
        for i in 2..=m {
            f *= Int::from(i as i64);
        }
        Rat::from_integer(f)
    };
    let mut total = Rat::zero();
    let mut wpow = Rat::one();
    for m in 0..=n {
        for ks in compositions(n, n - m) {
            let mut y_sum = Rat::zero();
            for delta in &f_reps {
                y_sum += y_coefficient(&ks, fam, &dual, v, delta, n_smooth)?;
            }
            if y_sum.is_zero() {
                continue;
            }
            let mut term = y_sum * &wpow / factorial(m);
            for (j, &kj) in ks.iter().enumerate() {
                if kj == 0 {
                    term /= &xa[j];
                } else {
                    for _ in 0..kj - 1 {
                        term *= &xa[j];
                    }
                }
                term /= factorial(kj);
            }
            total += term;
        }
        wpow *= w;
    }
    Ok(Rat::from_integer(Int::from(grid.sign())) * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat, ratio};

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn fam(n: usize, forms: &[&[i64]]) -> FormFamily {
        FormFamily::new(n, forms.iter().map(|f| iv(f)).collect()).unwrap()
    }

    #[test]
    fn lambda_n_membership() {
        assert!(!in_lambda_n(&iv(&[1, 0]), 2));
        assert!(in_lambda_n(&iv(&[0, 1]), 2));
        assert!(in_lambda_n(&iv(&[0, 1, 0]), 5));
        assert!(in_lambda_n(&iv(&[2, -1]), 2));
    }

    #[test]
    fn goodness_reference_cases() {
        let f = fam(2, &[&[2, -1], &[-1, 1]]);
        assert!(is_good_lattice(&f, 2).unwrap());
        let id = fam(2, &[&[1, 0], &[0, 1]]);
        assert!(!is_good_lattice(&id, 2).unwrap());
    }

    #[test]
    fn q_group_reference() {
        let f = fam(2, &[&[2, -1], &[-1, 1]]);
        let dual = dual_basis_full(&f).unwrap();
        let q = compute_q(&dual, 2);
        let mut elems = q.elements().unwrap();
        elems.sort();
        assert_eq!(elems, vec![iv(&[0, 0]), iv(&[1, 1])]);
        assert_eq!(q.size(), int(2));
        assert!(q.contains(&iv(&[0, 0])));
    }

    #[test]
    fn r_lift_reference() {
        let f = fam(2, &[&[2, -1], &[-1, 1]]);
        let dual = dual_basis_full(&f).unwrap();
        let r = compute_r(&iv(&[0, 0]), &dual, 2).unwrap();
        assert_eq!(r, iv(&[0, 0]));
    }

    #[test]
    fn lifted_representatives_are_distinct_cosets() {
        let f = fam(2, &[&[2, -1], &[-1, 1]]);
        let dual = dual_basis_full(&f).unwrap();
        let v = vec![rat(0), rat(0)];
        let f_reps = representatives_full(&f, &dual, &v).unwrap();
        let n_smooth = 3i64;
        let lifted = lift_representatives(&f_reps, &dual, n_smooth).unwrap();
        assert_eq!(lifted.len(), f_reps.len() * 3);
        // all in L': first coordinate divisible by N
        for d in &lifted {
            assert!(rem_euclid(&d[0], &int(n_smooth)).is_zero());
        }
        // pairwise distinct mod M' = span(N alpha_j): brute-force coset check
        for i in 0..lifted.len() {
            for j in 0..i {
                let diff: Vec<Int> = (0..2).map(|k| &lifted[i][k] - &lifted[j][k]).collect();
                // solve diff = c1 * N alpha_1 + c2 * N alpha_2 over Z
                let mat: Vec<Vec<Int>> = (0..2)
                    .map(|row| {
                        (0..2)
                            .map(|col| &dual.alphas[col][row] * int(n_smooth))
                            .collect()
                    })
                    .collect();
                let sol = crate::exact::hnf_solve(&mat, &diff).unwrap();
                assert!(sol.particular.is_none(), "classes {i} and {j} collide");
            }
        }
    }

    #[test]
    fn smoothed_value_reference_quarter() {
        let f = fam(2, &[&[2, -1], &[-1, 1]]);
        let v = vec![rat(0), rat(0)];
        let sv = smoothed_bn_dedekind(&f, &v, 2).unwrap();
        assert_eq!(sv.value, ratio(1, 4));
        assert_eq!(sv.b, int(1));
        assert_eq!(sv.denom_bound, int(4));
        // direct difference at a few rational points gives the same constant
        for (w, x) in [
            (rat(0), [ratio(1, 3), ratio(2, 5)]),
            (ratio(5, 7), [rat(2), ratio(-3, 4)]),
            (ratio(-1, 2), [ratio(7, 11), ratio(1, 9)]),
        ] {
            assert_eq!(smoothed_bn_direct(&f, &v, &w, &x, 2).unwrap(), ratio(1, 4));
        }
    }

    #[test]
    fn dependent_forms_smooth_to_zero() {
        let f = fam(2, &[&[1, 2], &[1, 2]]);
        let v = vec![rat(0), rat(0)];
        assert_eq!(
            smoothed_bn_direct(&f, &v, &ratio(1, 3), &[rat(1), rat(2)], 2).unwrap(),
            rat(0)
        );
    }

    #[test]
    fn y_vanishes_with_zero_entry() {
        let f = fam(2, &[&[2, -1], &[-1, 1]]);
        let dual = dual_basis_full(&f).unwrap();
        let v = vec![ratio(1, 3), ratio(2, 7)];
        let f_reps = representatives_full(&f, &dual, &v).unwrap();
        for n_smooth in 2..=4i64 {
            for delta in &f_reps {
                for ks in [[0usize, 2], [2, 0], [0, 1], [1, 0], [0, 0]] {
                    let y = y_coefficient(&ks, &f, &dual, &v, delta, n_smooth).unwrap();
                    assert_eq!(y, rat(0), "ks={ks:?} N={n_smooth}");
                }
            }
        }
    }

    #[test]
    fn y_grid_reassembles_direct_difference() {
        let f = fam(2, &[&[2, -1], &[-1, 1]]);
        let v = vec![ratio(1, 3), rat(0)];
        for n_smooth in [2i64, 3, 5] {
            for (w, x) in [
                (ratio(1, 5), [ratio(2, 3), ratio(-1, 7)]),
                (rat(1), [ratio(5, 4), ratio(3, 8)]),
            ] {
                let direct = smoothed_bn_direct(&f, &v, &w, &x, n_smooth).unwrap();
                let grid = smoothed_bn_from_y_grid(&f, &v, &w, &x, n_smooth).unwrap();
                assert_eq!(direct, grid, "N={n_smooth}");
            }
        }
    }

    #[test]
    fn denominator_bounds() {
        assert_eq!(denominator_bound(2, 2), int(4));
        assert_eq!(denominator_bound(6, 3), int(24));
        assert_eq!(dim_bound(2), int(12));
    }

    #[test]
    fn dedekind_refuses_bad_lattice() {
        let id = fam(2, &[&[1, 0], &[0, 1]]);
        assert!(matches!(
            smoothed_bn_dedekind(&id, &[rat(0), rat(0)], 2),
            Err(Error::NotGood(..))
        ));
    }

    #[test]
    fn direct_matches_dedekind_on_more_samples() {
        let cases: [(FormFamily, i64); 4] = [
            (fam(2, &[&[2, -1], &[-1, 1]]), 3),
            (fam(2, &[&[2, -1], &[-1, 1]]), 5),
            (fam(2, &[&[3, -2], &[-1, 1]]), 2),
            (fam(3, &[&[1, 1, 0], &[0, 1, 1], &[1, 1, 1]]), 2),
        ];
        for (f, n_smooth) in cases {
            if !is_good_lattice(&f, n_smooth).unwrap() {
                continue;
            }
            let n = f.n();
            let v = vec![rat(0); n];
            let sv = smoothed_bn_dedekind(&f, &v, n_smooth).unwrap();
            let mut x = vec![ratio(1, 3); n];
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += rat(i as i64 + 1) * ratio(3, 7);
            }
            let direct = smoothed_bn_direct(&f, &v, &ratio(2, 9), &x, n_smooth).unwrap();
            assert_eq!(sv.value, direct);
            let scaled = &sv.value * Rat::from_integer(sv.denom_bound.clone());
            assert!(scaled.denom().is_one());
        }
    }
}
