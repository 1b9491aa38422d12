//! Bernoulli polynomials, their periodic extensions, and the exact
//! coefficient grid of the degree-n lattice Bernoulli rational function
//! attached to n independent forms.  A truncated-power-series oracle computes
//! the same value straight from the generating-function definition.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::{dual_basis_full, representatives_full, DualFamily, FormFamily};
use crate::rat::{frac, to_f64, Int, Rat};

/// Bernoulli numbers B_0..B_k with the B_1 = -1/2 convention.
pub fn bernoulli_numbers(k: usize) -> Vec<Rat> {
    let mut b = Vec::with_capacity(k + 1);
    b.push(Rat::one());
    for m in 1..=k {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = Rat::zero();
        let mut binom = Int::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            acc += Rat::from_integer(binom.clone()) * bj;
            binom = binom * Int::from((m + 1 - j) as i64) / Int::from((j + 1) as i64);
        }
        b.push(-acc / Rat::from_integer(Int::from((m + 1) as i64)));
    }
    b
}

/// Ascending coefficients of the Bernoulli polynomial B_k(X).
pub fn bernoulli_polynomial(k: usize) -> Vec<Rat> {
    let nums = bernoulli_numbers(k);
    let mut coeffs = vec![Rat::zero(); k + 1];
    let mut binom = Int::one();
    for i in 0..=k {
        // coefficient of X^i is C(k, i) * B_{k-i}
        coeffs[i] = Rat::from_integer(binom.clone()) * &nums[k - i];
        if i < k {
            binom = binom * Int::from((k - i) as i64) / Int::from((i + 1) as i64);
        }
    }
    coeffs
}

pub fn eval_poly(coeffs: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Periodic Bernoulli function b_k(x) = B_k({x}).
pub fn periodic_b(k: usize, x: &Rat) -> Rat {
    eval_poly(&bernoulli_polynomial(k), &frac(x))
}

fn factorial(m: usize) -> Rat {
    let mut f = Int::one();
    for i in 2..=m {
        f *= Int::from(i as i64);
    }
    Rat::from_integer(f)
}

/// All length-n tuples of non-negative integers summing to `total`.
pub fn compositions(n: usize, total: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(n - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridEntry {
    pub m: usize,
    pub ks: Vec<usize>,
    pub coeff: Rat,
}

/// Exact coefficient grid of B_{n, a}(v): the value at (w, x) is
/// epsilon * sum over entries of coeff * w^m / m! * prod_j x(alpha_j)^{k_j - 1}.
#[derive(Debug, Clone)]
pub struct BnCoefficients {
    pub n: usize,
    pub epsilon: i32,
    pub entries: Vec<GridEntry>,
    pub dual: Option<DualFamily>,
}

impl BnCoefficients {
    pub fn is_zero(&self) -> bool {
        self.epsilon == 0
    }
}

/// Build the grid for a family of exactly n forms.  A dependent family gives
/// the zero function by convention.
pub fn bn_coefficients(fam: &FormFamily, v: &[Rat]) -> Result<BnCoefficients> {
    let n = fam.n();
    if fam.len() != n {
        return Err(Error::Shape("bn_coefficients needs exactly n forms".into()));
    }
    if v.len() != n {
        return Err(Error::Shape("v has wrong length".into()));
    }
    let epsilon = fam.epsilon()?;
    if epsilon == 0 {
        return Ok(BnCoefficients {
            n,
            epsilon: 0,
            entries: Vec::new(),
            dual: None,
        });
    }
    let dual = dual_basis_full(fam)?;
    let reps = representatives_full(fam, &dual, v)?;
    // precompute the dual coordinates (v_j + delta_j) / s_j for each class
    let mut coords: Vec<Vec<Rat>> = Vec::with_capacity(reps.len());
    for delta in &reps {
        let row: Vec<Rat> = (0..n)
            .map(|j| {
                let num = fam.apply(j, v) + Rat::from_integer(fam.apply_int(j, delta));
                num / Rat::from_integer(dual.s[j].clone())
            })
            .collect();
        coords.push(row);
    }
    let polys: Vec<Vec<Rat>> = (0..=n).map(bernoulli_polynomial).collect();
    let mut entries = Vec::new();
    for m in 0..=n {
        for ks in compositions(n, n - m) {
            let mut coeff = Rat::zero();
            for row in &coords {
                let mut prod = Rat::one();
                for (j, &kj) in ks.iter().enumerate() {
                    prod *= eval_poly(&polys[kj], &frac(&row[j]));
                }
                coeff += prod;
            }
            for &kj in &ks {
                coeff /= factorial(kj);
            }
            if !coeff.is_zero() {
                entries.push(GridEntry { m, ks, coeff });
            }
        }
    }
    Ok(BnCoefficients {
        n,
        epsilon,
        entries,
        dual: Some(dual),
    })
}

impl BnCoefficients {
    /// Overall sign in front of the grid sum.  Expanding each factor
    /// 1/(1 - e^{x(alpha_j) t}) of the generating function as
    /// -e^{X z}/(e^z - 1) contributes one minus sign per form, so the
    /// periodic-Bernoulli expansion of the t^0 coefficient carries
    /// epsilon * (-1)^n.
    pub fn sign(&self) -> i32 {
        if self.n % 2 == 0 {
            self.epsilon
        } else {
            -self.epsilon
        }
    }
}

fn eval_grid<T>(grid: &BnCoefficients, w: &T, xa: &[T], conv: &dyn Fn(&Rat) -> T) -> Result<T>
where
    T: Clone
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
        + PartialEq,
{
    if grid.epsilon == 0 {
        return Ok(T::zero());
    }
    if xa.iter().any(|x| x.is_zero()) {
        return Err(Error::Pole("x vanishes on a dual vector".into()));
    }
    let mut total = T::zero();
    for e in &grid.entries {
        let mut term = conv(&(&e.coeff / factorial(e.m)));
        for _ in 0..e.m {
            term = term * w.clone();
        }
        for (j, &kj) in e.ks.iter().enumerate() {
            if kj == 0 {
                term = term / xa[j].clone();
            } else {
                for _ in 0..kj - 1 {
                    term = term * xa[j].clone();
                }
            }
        }
        total = total + term;
    }
    Ok(conv(&Rat::from_integer(Int::from(grid.sign()))) * total)
}

fn pair_x_rat(dual: &DualFamily, x: &[Rat]) -> Vec<Rat> {
    dual.alphas
        .iter()
        .map(|alpha| {
            alpha
                .iter()
                .zip(x)
                .map(|(a, xi)| Rat::from_integer(a.clone()) * xi)
                .sum()
        })
        .collect()
}

fn pair_x_complex(dual: &DualFamily, x: &[Complex64]) -> Vec<Complex64> {
    dual.alphas
        .iter()
        .map(|alpha| {
            alpha
                .iter()
                .zip(x)
                .map(|(a, xi)| {
                    let af = to_f64(&Rat::from_integer(a.clone()));
                    xi * af
                })
                .sum()
        })
        .collect()
}

/// Exact value at a rational point (w; x given by its values on the standard
/// basis).
pub fn bn_evaluate_rat(grid: &BnCoefficients, w: &Rat, x: &[Rat]) -> Result<Rat> {
    let xa = match &grid.dual {
        Some(d) => pair_x_rat(d, x),
        None => Vec::new(),
    };
    eval_grid(grid, w, &xa, &|r| r.clone())
}

pub fn bn_evaluate_complex(grid: &BnCoefficients, w: Complex64, x: &[Complex64]) -> Result<Complex64> {
    let xa = match &grid.dual {
        Some(d) => pair_x_complex(d, x),
        None => Vec::new(),
    };
    eval_grid(grid, &w, &xa, &|r| Complex64::new(to_f64(r), 0.0))
}

/// Convenience: build and evaluate in one step.
pub fn bn_value_rat(fam: &FormFamily, v: &[Rat], w: &Rat, x: &[Rat]) -> Result<Rat> {
    bn_evaluate_rat(&bn_coefficients(fam, v)?, w, x)
}

// ---------------------------------------------------------------------------
// truncated power series oracle
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Series(Vec<Rat>);

impl Series {
    fn exp_linear(c: &Rat, len: usize) -> Series {
        // e^{c t}
        let mut out = Vec::with_capacity(len);
        let mut term = Rat::one();
        out.push(term.clone());
        for i in 1..len {
            term = term * c / Rat::from_integer(Int::from(i as i64));
            out.push(term.clone());
        }
        Series(out)
    }

    fn mul(&self, other: &Series) -> Series {
        let len = self.0.len().min(other.0.len());
        let mut out = vec![Rat::zero(); len];
        for (i, a) in self.0.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Series(out)
    }

    fn add_assign(&mut self, other: &Series) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    fn inverse(&self) -> Result<Series> {
        let len = self.0.len();
        if self.0[0].is_zero() {
            return Err(Error::Pole("series has no inverse: zero constant term".into()));
        }
        let c0 = self.0[0].clone();
        let mut out = vec![Rat::zero(); len];
        out[0] = Rat::one() / &c0;
        for i in 1..len {
            let mut acc = Rat::zero();
            for j in 1..=i {
                acc += &self.0[j] * &out[i - j];
            }
            out[i] = -acc / &c0;
        }
        Ok(Series(out))
    }
}

/// Value of B_{n,a}(v)(w, x) computed directly from the defining generating
/// function: the t^0 coefficient of
///   sum_{delta in (v+L) cap P(a)} e^{(w + x(delta)) t} / prod_j (1 - e^{x(alpha_j) t}),
/// using exact power series truncated at order n + 4.
pub fn bn_series_oracle(fam: &FormFamily, v: &[Rat], w: &Rat, x: &[Rat]) -> Result<Rat> {
    let n = fam.n();
    if fam.len() != n {
        return Err(Error::Shape("bn_series_oracle needs exactly n forms".into()));
    }
    let epsilon = fam.epsilon()?;
    if epsilon == 0 {
        return Ok(Rat::zero());
    }
    let dual = dual_basis_full(fam)?;
    let reps = representatives_full(fam, &dual, v)?;
    let len = n + 5;

    let x_of = |vec_r: &[Rat]| -> Rat {
        vec_r
            .iter()
            .zip(x)
            .map(|(c, xi)| c * xi)
            .sum()
    };

    // numerator: sum over the finite set of exponentials
    let mut num = Series(vec![Rat::zero(); len]);
    for delta in &reps {
        let point: Vec<Rat> = (0..n)
            .map(|i| &v[i] + Rat::from_integer(delta[i].clone()))
            .collect();
        let c = w + x_of(&point);
        num.add_assign(&Series::exp_linear(&c, len));
    }

    // denominator: prod_j (1 - e^{c_j t}) = t^n prod_j g_j with
    // g_j = -c_j - c_j^2 t / 2! - ...
    let mut prod_inv = Series({
        let mut s = vec![Rat::zero(); len];
        s[0] = Rat::one();
        s
    });
    for alpha in &dual.alphas {
        let alpha_r: Vec<Rat> = alpha.iter().map(|a| Rat::from_integer(a.clone())).collect();
        let c = x_of(&alpha_r);
        if c.is_zero() {
            return Err(Error::Pole("x vanishes on a dual vector".into()));
        }
        let mut g = Vec::with_capacity(len);
        let mut pow = c.clone();
        for i in 0..len {
            // coefficient of t^i in (1 - e^{ct})/t is -c^{i+1}/(i+1)!
            g.push(-&pow / factorial(i + 1));
            pow = pow * &c;
        }
        prod_inv = prod_inv.mul(&Series(g).inverse()?);
    }

    // t^0 coefficient of num / (t^n prod g_j) = t^n coefficient of num * prod g_j^{-1}
    let full = num.mul(&prod_inv);
    Ok(full.0[n].clone() * Rat::from_integer(Int::from(epsilon)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat, ratio};

    fn fam(n: usize, forms: &[&[i64]]) -> FormFamily {
        FormFamily::new(n, forms.iter().map(|f| f.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn bernoulli_polynomials_low_degree() {
        assert_eq!(bernoulli_polynomial(0), vec![rat(1)]);
        assert_eq!(bernoulli_polynomial(1), vec![ratio(-1, 2), rat(1)]);
        assert_eq!(bernoulli_polynomial(2), vec![ratio(1, 6), rat(-1), rat(1)]);
        // B_3(1/2) = 0
        assert_eq!(eval_poly(&bernoulli_polynomial(3), &ratio(1, 2)), rat(0));
    }

    #[test]
    fn periodic_b_basics() {
        assert_eq!(periodic_b(1, &rat(0)), ratio(-1, 2));
        assert_eq!(periodic_b(1, &ratio(1, 2)), rat(0));
        assert_eq!(periodic_b(1, &ratio(-7, 3)), periodic_b(1, &ratio(2, 3)));
        assert_eq!(periodic_b(2, &rat(5)), ratio(1, 6));
    }

    #[test]
    fn distribution_relation() {
        // sum_{k mod N} b_m((x+k)/N) N^{m-1} = b_m(x)
        for m in 0..=5usize {
            for n_div in 1..=8i64 {
                for x in [rat(0), ratio(1, 3), ratio(-5, 7), ratio(11, 4)] {
                    let mut acc = Rat::zero();
                    for k in 0..n_div {
                        let arg = (&x + rat(k)) / rat(n_div);
                        acc += periodic_b(m, &arg);
                    }
                    let scale = if m == 0 {
                        Rat::one() / rat(n_div)
                    } else {
                        let mut p = Rat::one();
                        for _ in 0..m - 1 {
                            p *= rat(n_div);
                        }
                        p
                    };
                    assert_eq!(acc * scale, periodic_b(m, &x), "m={m} N={n_div}");
                }
            }
        }
    }

    #[test]
    fn grid_reference_entry() {
        let f = fam(2, &[&[2, -1], &[-1, 1]]);
        let grid = bn_coefficients(&f, &[rat(0), rat(0)]).unwrap();
        assert_eq!(grid.epsilon, 1);
        let e = grid
            .entries
            .iter()
            .find(|e| e.m == 0 && e.ks == vec![1, 1])
            .unwrap();
        assert_eq!(e.coeff, ratio(1, 4));
    }

    #[test]
    fn oracle_identity_forms_constant() {
        // t^0 coefficient of 1/(1-e^t)^2 at w=0, x=(1,1): 1/4 + 1/12 + 1/12
        let f = fam(2, &[&[1, 0], &[0, 1]]);
        let v = [rat(0), rat(0)];
        let o = bn_series_oracle(&f, &v, &rat(0), &[rat(1), rat(1)]).unwrap();
        assert_eq!(o, ratio(5, 12));
        let grid = bn_coefficients(&f, &v).unwrap();
        let g = bn_evaluate_rat(&grid, &rat(0), &[rat(1), rat(1)]).unwrap();
        assert_eq!(g, ratio(5, 12));
    }

    #[test]
    fn oracle_matches_grid_on_samples() {
        let families = [
            fam(2, &[&[2, -1], &[-1, 1]]),
            fam(2, &[&[1, 0], &[1, -2]]),
            fam(3, &[&[1, 0, 0], &[1, 1, 0], &[2, 1, -1]]),
        ];
        let points = [
            (rat(0), vec![ratio(1, 2), ratio(1, 3), ratio(2, 7)]),
            (ratio(3, 5), vec![rat(2), ratio(-1, 3), ratio(5, 2)]),
            (ratio(-1, 7), vec![ratio(7, 3), ratio(1, 5), rat(-3)]),
        ];
        for f in &families {
            let n = f.n();
            let vs = [vec![rat(0); n], {
                let mut v = vec![ratio(1, 3); n];
                v[0] = ratio(2, 5);
                v
            }];
            for v in &vs {
                let grid = bn_coefficients(f, v).unwrap();
                for (w, x) in &points {
                    let x = &x[..n];
                    let a = bn_evaluate_rat(&grid, w, x).unwrap();
                    let b = bn_series_oracle(f, v, w, x).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn dependent_family_gives_zero() {
        let f = fam(2, &[&[1, 2], &[1, 2]]);
        let grid = bn_coefficients(&f, &[rat(0), rat(0)]).unwrap();
        assert!(grid.is_zero());
        assert_eq!(
            bn_evaluate_rat(&grid, &rat(1), &[rat(1), rat(1)]).unwrap(),
            rat(0)
        );
    }

    #[test]
    fn pole_detected() {
        let f = fam(2, &[&[1, 0], &[0, 1]]);
        let grid = bn_coefficients(&f, &[rat(0), rat(0)]).unwrap();
        assert!(bn_evaluate_rat(&grid, &rat(0), &[rat(0), rat(1)]).is_err());
    }

    #[test]
    fn sln_equivariance_exact() {
        // g in SL_2(Z): B_{g a}(g v)(w, x g^{-1}) = B_a(v)(w, x)
        let f = fam(2, &[&[2, -1], &[-1, 1]]);
        let v = [ratio(1, 3), ratio(1, 2)];
        let w = ratio(2, 7);
        let x = [ratio(1, 2), ratio(1, 5)];
        // g = [[1,1],[0,1]], g^{-1} = [[1,-1],[0,1]]
        let ginv = [[1i64, -1], [0, 1]];
        let gmat = [[1i64, 1], [0, 1]];
        let gforms: Vec<Vec<Int>> = f
            .forms()
            .iter()
            .map(|a| {
                (0..2)
                    .map(|c| (0..2).map(|r| &a[r] * int(ginv[r][c])).sum())
                    .collect()
            })
            .collect();
        let gf = FormFamily::new(2, gforms).unwrap();
        let gv: Vec<Rat> = (0..2)
            .map(|i| (0..2).map(|j| rat(gmat[i][j]) * &v[j]).sum())
            .collect();
        let gx: Vec<Rat> = (0..2)
            .map(|c| (0..2).map(|r| &x[r] * rat(ginv[r][c])).sum())
            .collect();
        let lhs = bn_value_rat(&gf, &gv, &w, &gx).unwrap();
        let rhs = bn_value_rat(&f, &v, &w, &x).unwrap();
        assert_eq!(lhs, rhs);
    }
}
