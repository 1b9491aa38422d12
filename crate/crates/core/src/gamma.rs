//! Floating-point evaluation of the Nishizawa hierarchy G_r and of the
//! geometric G_{n-2,a} functions, plus the numerical verifiers for the
//! multiplicative modular identities.
//!
//! Everything transcendental lives here; lattice-point bookkeeping (cone
//! membership, class representatives mod Z*gamma) stays exact and only the
//! final exponential step is floating point.  Identities are always checked
//! multiplicatively, never through logarithms.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use std::collections::HashMap;

use crate::bernoulli::{bn_coefficients, bn_evaluate_complex};
use crate::error::{Error, Result};
use crate::forms::{
    cartesian, dual_family_deficient, gamma_vector, int_range, DualFamily, FormFamily,
};
use crate::rat::{to_f64, Int, Rat};
use crate::smoothing::{in_lambda_n, smoothed_bn_dedekind};

const TAU: f64 = std::f64::consts::TAU;
const POLE_EPS: f64 = 1e-12;
/// Refuse truncation boxes bigger than this many lattice tuples.
const MAX_TUPLES: f64 = 2e6;

/// Truncation policy for the infinite products.  The default cutoff keeps
/// every discarded factor within e^{-2*pi*cutoff} < 1e-16 of 1.
#[derive(Debug, Clone, Copy)]
pub struct Truncation {
    /// Cutoff on |Im(exponent)| of retained factors.
    pub cutoff: f64,
    /// Target accuracy of the truncated product.
    pub eps: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        // ln(10^12)/(2 pi) ~ 4.4 plus margin.
        Truncation { cutoff: 6.0, eps: 1e-12 }
    }
}

impl Truncation {
    pub fn doubled(&self) -> Truncation {
        Truncation { cutoff: 2.0 * self.cutoff, eps: self.eps }
    }
}

fn e2pi(u: Complex64) -> Complex64 {
    (Complex64::i() * TAU * u).exp()
}

fn xc_int(x: &[Complex64], v: &[Int]) -> Complex64 {
    v.iter()
        .zip(x)
        .map(|(c, xi)| xi * c.to_f64().expect("coefficient fits in f64"))
        .sum()
}

fn xc_rat(x: &[Complex64], v: &[Rat]) -> Complex64 {
    v.iter().zip(x).map(|(c, xi)| xi * to_f64(c)).sum()
}

/// Multiply factors in a deterministic order (sorted by |Im exponent|, then by
/// value) so the rounding of large products does not depend on enumeration
/// order.
fn ordered_product(mut factors: Vec<(f64, Complex64)>) -> Complex64 {
    factors.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.re.total_cmp(&b.1.re))
            .then(a.1.im.total_cmp(&b.1.im))
    });
    factors
        .into_iter()
        .fold(Complex64::new(1.0, 0.0), |acc, (_, f)| acc * f)
}

fn check_factor(f: Complex64, what: &str) -> Result<Complex64> {
    if f.norm() < POLE_EPS {
        return Err(Error::Singular(format!("vanishing factor in {what}")));
    }
    Ok(f)
}

/// All tuples m in Z_{>=0}^k with sum m_j * weights_j <= budget.
fn budget_tuples(weights: &[f64], budget: f64) -> Vec<Vec<i64>> {
    fn rec(weights: &[f64], budget: f64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if weights.is_empty() {
            out.push(prefix.clone());
            return;
        }
        let mut m = 0i64;
        while (m as f64) * weights[0] <= budget {
            prefix.push(m);
            rec(&weights[1..], budget - (m as f64) * weights[0], prefix, out);
            prefix.pop();
            m += 1;
        }
    }
    let mut out = Vec::new();
    rec(weights, budget, &mut Vec::new(), &mut out);
    out
}

/// The Nishizawa multiple elliptic Gamma function
/// G_r(z, tau_0, ..., tau_r) =
///   prod_{m >= 0} (1 - e^{2 i pi (-z + sum (m_j+1) tau_j)})
///                 (1 - e^{2 i pi (z + sum m_j tau_j)})^{(-1)^r},
/// truncated so every discarded factor differs from 1 by less than
/// e^{-2 pi cutoff}.  theta = G_0, the elliptic Gamma function is G_1.
pub fn g_r(z: Complex64, taus: &[Complex64], trunc: &Truncation) -> Result<Complex64> {
    if taus.is_empty() {
        return Err(Error::Shape("G_r needs at least one period".into()));
    }
    for t in taus {
        if t.im <= 0.0 {
            return Err(Error::Domain(
                "G_r product only converges for Im tau_j > 0".into(),
            ));
        }
    }
    let r = taus.len() - 1;
    let weights: Vec<f64> = taus.iter().map(|t| t.im).collect();
    let budget = trunc.cutoff + z.im.abs();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for m in budget_tuples(&weights, budget) {
        let smt: Complex64 = m
            .iter()
            .zip(taus)
            .map(|(&mj, tj)| tj * mj as f64)
            .sum();
        let st: Complex64 = smt + taus.iter().sum::<Complex64>();
        let e1 = -z + st;
        let e2 = z + smt;
        upper.push((e1.im.abs(), check_factor(1.0 - e2pi(e1), "G_r")?));
        lower.push((e2.im.abs(), check_factor(1.0 - e2pi(e2), "G_r")?));
    }
    let p1 = ordered_product(upper);
    let p2 = ordered_product(lower);
    Ok(if r % 2 == 0 { p1 * p2 } else { p1 / p2 })
}

/// G_r with tail certification: doubling the cutoff must not move the value.
pub fn g_r_certified(z: Complex64, taus: &[Complex64], trunc: &Truncation) -> Result<Complex64> {
    let coarse = g_r(z, taus, trunc)?;
    let fine = g_r(z, taus, &trunc.doubled())?;
    if (coarse - fine).norm() > 1e3 * trunc.eps * (fine.norm() + 1.0) {
        return Err(Error::Domain(
            "cutoff insufficient for G_r; retry with a larger truncation".into(),
        ));
    }
    Ok(fine)
}

/// Shared geometric data for one family of n-1 independent forms at a given x.
struct ConeContext {
    dual: DualFamily,
    xg: Complex64,
    /// x(alpha_j)/x(gamma); well defined modulo Z since x(gamma)/x(gamma)=1,
    /// so the imaginary parts and the signs d_j are unambiguous.
    ratios: Vec<Complex64>,
    d: Vec<i64>,
    dd: i64,
}

fn cone_context(fam: &FormFamily, x: &[Complex64], min_im: f64) -> Result<ConeContext> {
    let (gamma, _) = gamma_vector(fam)?;
    let dual = dual_family_deficient(fam)?;
    let xg = xc_int(x, &gamma);
    if xg.norm() < 1e-12 {
        return Err(Error::Inadmissible("x vanishes on gamma".into()));
    }
    let ratios: Vec<Complex64> = dual.alphas.iter().map(|a| xc_int(x, a) / xg).collect();
    let mut d = Vec::with_capacity(ratios.len());
    for r in &ratios {
        if r.im.abs() < min_im {
            return Err(Error::Inadmissible(format!(
                "x(alpha)/x(gamma) too close to the real axis (Im = {})",
                r.im
            )));
        }
        d.push(if r.im > 0.0 { 1 } else { -1 });
    }
    let dd = d.iter().map(|dj| (dj - 1) / 2).sum();
    Ok(ConeContext { dual, xg, ratios, d, dd })
}

/// Geometric G_{n-2,a}(v)(w,x) through the original definition: the finite
/// product over F(a, alpha, v)/Z*gamma of G_{n-2} values.  Only valid when all
/// x(alpha_j)/x(gamma) lie in the upper half plane.
pub fn geometric_g_original(
    fam: &FormFamily,
    v: &[Rat],
    w: Complex64,
    x: &[Complex64],
    trunc: &Truncation,
) -> Result<Complex64> {
    let n = fam.n();
    if fam.len() != n - 1 || v.len() != n || x.len() != n {
        return Err(Error::Shape("geometric G needs n-1 forms on Z^n".into()));
    }
    if fam.rank() < n - 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let ctx = cone_context(fam, x, 1e-9)?;
    if ctx.d.iter().any(|&dj| dj != 1) {
        return Err(Error::Domain(
            "the product definition needs all x(alpha_j)/x(gamma) in the upper half plane"
                .into(),
        ));
    }
    let reps = crate::forms::enumerate_f_deficient(fam, &ctx.dual, v)?;
    let mut value = Complex64::new(1.0, 0.0);
    for delta in &reps {
        let z = (w + xc_rat(x, delta)) / ctx.xg;
        value *= g_r(z, &ctx.ratios, trunc)?;
    }
    Ok(value)
}

/// Geometric G_{n-2,a}(v)(w,x) through the cone definition:
/// G^{(-1)^D} = prod_{C^-} (1 - e^{-2 i pi u}) * prod_{C^+} (1 - e^{2 i pi u})^{(-1)^n}
/// with u = (w + x(delta))/x(gamma), enumerated over (v+Z^n) mod Z*gamma.
/// Cone membership is decided exactly on the a_j-coordinates; only the final
/// exponentials are floating point.  Families of rank < n-1 give 1 by
/// convention.
pub fn geometric_g_cone(
    fam: &FormFamily,
    v: &[Rat],
    w: Complex64,
    x: &[Complex64],
    trunc: &Truncation,
) -> Result<Complex64> {
    let n = fam.n();
    if fam.len() != n - 1 || v.len() != n || x.len() != n {
        return Err(Error::Shape("geometric G needs n-1 forms on Z^n".into()));
    }
    if fam.rank() < n - 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let ctx = cone_context(fam, x, 1e-9)?;
    let m = n - 1;
    let wg = w / ctx.xg;
    let budget = trunc.cutoff + wg.im.abs() + 1.0;

    // In a_j-coordinates a class delta = v + lambda mod Z*gamma is pinned by
    // the integer offsets k_j = a_j(lambda); inside the cones
    // |Im(x(delta)/x(gamma))| = sum_j |t_j| |Im ratio_j| / s_j with
    // t_j = a_j(v) + k_j, so each axis is bounded by the budget.
    let av: Vec<Rat> = (0..m).map(|j| fam.apply(j, v)).collect();
    let av_f: Vec<f64> = av.iter().map(to_f64).collect();
    let s_f: Vec<f64> = ctx.dual.s.iter().map(|s| s.to_f64().unwrap()).collect();
    // t_j >= 0 exactly when k_j >= thr_j.
    let thr: Vec<i64> = av
        .iter()
        .map(|a| (-a).ceil().to_integer().to_i64().ok_or_else(|| {
            Error::Domain("v has coordinates too large for enumeration".into())
        }))
        .collect::<Result<_>>()?;
    let mut ranges: Vec<(i64, i64)> = Vec::with_capacity(m);
    let mut count = 1.0f64;
    for j in 0..m {
        let bj = budget * s_f[j] / ctx.ratios[j].im.abs();
        let lo = (-bj - av_f[j]).floor() as i64;
        let hi = (bj - av_f[j]).ceil() as i64;
        count *= (hi - lo + 1) as f64;
        ranges.push((lo, hi));
    }
    if count > MAX_TUPLES {
        return Err(Error::Inadmissible(format!(
            "truncation region holds ~{count:.1e} lattice tuples; x is too badly conditioned"
        )));
    }

    // Solvability of a_j(lambda) = k_j only depends on k mod the sublattice
    // spanned by the s_j e_j (realized by the dual alphas), so precompute one
    // particular solution per residue class.
    let s_i64: Vec<i64> = ctx
        .dual
        .s
        .iter()
        .map(|s| s.to_i64().ok_or_else(|| Error::Domain("s_j too large".into())))
        .collect::<Result<_>>()?;
    let residue_ranges: Vec<Vec<Int>> = s_i64
        .iter()
        .map(|&s| int_range(&Rat::zero(), &Rat::from_integer(Int::from(s))))
        .collect();
    let mut particular: HashMap<Vec<i64>, Option<Complex64>> = HashMap::new();
    for res in cartesian(&residue_ranges) {
        let key: Vec<i64> = res.iter().map(|r| r.to_i64().unwrap()).collect();
        let sol = crate::exact::linalg::hnf_solve(fam.forms(), &res)?;
        particular.insert(key, sol.particular.map(|lam| xc_int(x, &lam)));
    }
    let x_alpha: Vec<Complex64> = ctx.dual.alphas.iter().map(|a| xc_int(x, a)).collect();
    let xv = xc_rat(x, v);

    let mut plus: Vec<(f64, Complex64)> = Vec::new();
    let mut minus: Vec<(f64, Complex64)> = Vec::new();
    let mut k = vec![0i64; m];
    for j in 0..m {
        k[j] = ranges[j].0;
    }
    'outer: loop {
        // Exact cone membership: C+ wants t_j >= 0 iff d_j = 1, C- the
        // reverse.
        let in_plus = (0..m).all(|j| (k[j] >= thr[j]) == (ctx.d[j] == 1));
        let in_minus = (0..m).all(|j| (k[j] >= thr[j]) == (ctx.d[j] == -1));
        if in_plus || in_minus {
            let total: f64 = (0..m)
                .map(|j| (av_f[j] + k[j] as f64).abs() * ctx.ratios[j].im.abs() / s_f[j])
                .sum();
            if total <= budget {
                let key = (0..m)
                    .map(|j| k[j].rem_euclid(s_i64[j]))
                    .collect::<Vec<i64>>();
                if let Some(x_lam0) = particular[&key] {
                    let x_delta = xv
                        + x_lam0
                        + (0..m)
                            .map(|j| {
                                x_alpha[j] * (((k[j] - key[j]) / s_i64[j]) as f64)
                            })
                            .sum::<Complex64>();
                    let u = (w + x_delta) / ctx.xg;
                    if in_plus {
                        plus.push((u.im.abs(), check_factor(1.0 - e2pi(u), "geometric G")?));
                    } else {
                        minus.push((u.im.abs(), check_factor(1.0 - e2pi(-u), "geometric G")?));
                    }
                }
            }
        }
        // odometer
        for j in 0..m {
            k[j] += 1;
            if k[j] <= ranges[j].1 {
                continue 'outer;
            }
            k[j] = ranges[j].0;
        }
        break;
    }

    let p_plus = ordered_product(plus);
    let p_minus = ordered_product(minus);
    let pow = p_minus * if n % 2 == 0 { p_plus } else { 1.0 / p_plus };
    Ok(if ctx.dd.rem_euclid(2) == 0 { pow } else { 1.0 / pow })
}

/// Cone evaluation with tail certification by cutoff doubling.
pub fn geometric_g_cone_certified(
    fam: &FormFamily,
    v: &[Rat],
    w: Complex64,
    x: &[Complex64],
    trunc: &Truncation,
) -> Result<Complex64> {
    let coarse = geometric_g_cone(fam, v, w, x, trunc)?;
    let fine = geometric_g_cone(fam, v, w, x, &trunc.doubled())?;
    if (coarse - fine).norm() > 1e3 * trunc.eps * (fine.norm() + 1.0) {
        return Err(Error::Domain(
            "cutoff insufficient for geometric G; retry with a larger truncation".into(),
        ));
    }
    Ok(fine)
}

/// The coordinate change to the smoothing lattice L' = Z(N e_1) + Z e_2 + ...:
/// forms scale their first column by N (they stay primitive exactly when they
/// lie in Lambda_N), v_1 becomes v_1/N and x_1 becomes N x_1.
pub fn smoothing_dictionary(
    fam: &FormFamily,
    v: &[Rat],
    x: &[Complex64],
    n_smooth: i64,
) -> Result<(FormFamily, Vec<Rat>, Vec<Complex64>)> {
    for f in fam.forms() {
        if !in_lambda_n(f, n_smooth) {
            return Err(Error::NotGood(
                n_smooth,
                format!("form {f:?} does not restrict to a primitive form on L'"),
            ));
        }
    }
    let forms2: Vec<Vec<Int>> = fam
        .forms()
        .iter()
        .map(|f| {
            let mut g = f.clone();
            g[0] *= Int::from(n_smooth);
            g
        })
        .collect();
    let fam2 = FormFamily::new(fam.n(), forms2)?;
    let mut v2 = v.to_vec();
    v2[0] = &v2[0] / Rat::from_integer(Int::from(n_smooth));
    let mut x2 = x.to_vec();
    x2[0] *= n_smooth as f64;
    Ok((fam2, v2, x2))
}

/// The smoothed function G(v)(w, x, L')^N / G(v)(w, x, L) for forms in
/// Lambda_N.
pub fn smoothed_g(
    fam: &FormFamily,
    v: &[Rat],
    w: Complex64,
    x: &[Complex64],
    n_smooth: i64,
    trunc: &Truncation,
) -> Result<Complex64> {
    let (fam2, v2, x2) = smoothing_dictionary(fam, v, x, n_smooth)?;
    let g_prime = geometric_g_cone(&fam2, &v2, w, &x2, trunc)?;
    let g_plain = geometric_g_cone(fam, v, w, x, trunc)?;
    Ok(g_prime.powi(n_smooth as i32) / g_plain)
}

/// prod_j G_{n-2, a_1, .., omit a_j, .., a_n}(v)(w,x)^{(-1)^{j+1}} for a
/// family of n forms.
pub fn alternating_g_product(
    fam: &FormFamily,
    v: &[Rat],
    w: Complex64,
    x: &[Complex64],
    trunc: &Truncation,
) -> Result<Complex64> {
    let n = fam.n();
    if fam.len() != n {
        return Err(Error::Shape("the alternating product needs n forms".into()));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for j in 0..n {
        let g = geometric_g_cone(&fam.omit(j), v, w, x, trunc)?;
        prod = if j % 2 == 0 { prod * g } else { prod / g };
    }
    Ok(prod)
}

/// Same alternating product for the smoothed functions.
pub fn alternating_smoothed_product(
    fam: &FormFamily,
    v: &[Rat],
    w: Complex64,
    x: &[Complex64],
    n_smooth: i64,
    trunc: &Truncation,
) -> Result<Complex64> {
    let n = fam.n();
    if fam.len() != n {
        return Err(Error::Shape("the alternating product needs n forms".into()));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for j in 0..n {
        let g = smoothed_g(&fam.omit(j), v, w, x, n_smooth, trunc)?;
        prod = if j % 2 == 0 { prod * g } else { prod / g };
    }
    Ok(prod)
}

/// Residual |LHS - RHS| of the modular property
/// prod_j G_omit_j^{(-1)^{j+1}} = exp(2 i pi B_n(v)(w,x)) for independent
/// forms; for rank n-1 well-placed families the right-hand side is 1, and for
/// rank <= n-2 both sides are trivially 1.
pub fn verify_modular(
    fam: &FormFamily,
    v: &[Rat],
    w: Complex64,
    x: &[Complex64],
    trunc: &Truncation,
) -> Result<f64> {
    let n = fam.n();
    if fam.len() != n {
        return Err(Error::Shape("verify_modular needs n forms".into()));
    }
    if fam.rank() <= n - 2 {
        return Ok(0.0);
    }
    let lhs = alternating_g_product(fam, v, w, x, trunc)?;
    let rhs = if fam.rank() == n {
        let grid = bn_coefficients(fam, v)?;
        let b = bn_evaluate_complex(&grid, w, x)?;
        e2pi(b)
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok((lhs - rhs).norm())
}

/// Report of the numerical check of the main smoothed cocycle identity.
#[derive(Debug, Clone)]
pub struct MainReport {
    /// The integer b with smoothed alternating product exp(2 i pi b / D).
    pub b: Int,
    /// D(N, n).
    pub denom: Int,
    pub expected: Complex64,
    pub products: Vec<Complex64>,
    /// max |product - expected| over the samples.
    pub residual: f64,
    /// max |product^D - 1| over the samples.
    pub power_defect: f64,
    /// max pairwise distance between products (constancy in (w, x)).
    pub spread: f64,
}

/// Check prod_j G^(N)_omit_j^{(-1)^{j+1}} = exp(2 i pi b / D(N,n)) against
/// the exact b from the smoothed Bernoulli value, over several (w, x)
/// samples.
pub fn verify_main(
    fam: &FormFamily,
    v: &[Rat],
    n_smooth: i64,
    samples: &[(Complex64, Vec<Complex64>)],
    trunc: &Truncation,
) -> Result<MainReport> {
    let sv = smoothed_bn_dedekind(fam, v, n_smooth)?;
    let expected = e2pi(Complex64::new(to_f64(&sv.value), 0.0));
    let d_pow = sv
        .denom_bound
        .to_i32()
        .ok_or_else(|| Error::Domain("D(N,n) too large".into()))?;
    let mut products = Vec::with_capacity(samples.len());
    for (w, x) in samples {
        products.push(alternating_smoothed_product(fam, v, *w, x, n_smooth, trunc)?);
    }
    let residual = products
        .iter()
        .map(|p| (p - expected).norm())
        .fold(0.0, f64::max);
    let power_defect = products
        .iter()
        .map(|p| (p.powi(d_pow) - 1.0).norm())
        .fold(0.0, f64::max);
    let mut spread = 0.0f64;
    for i in 0..products.len() {
        for j in i + 1..products.len() {
            spread = spread.max((products[i] - products[j]).norm());
        }
    }
    Ok(MainReport {
        b: sv.b,
        denom: sv.denom_bound,
        expected,
        products,
        residual,
        power_defect,
        spread,
    })
}

/// Sample a complex covector x such that every rank n-1 subfamily of `fam`
/// keeps all its x(alpha_j)/x(gamma) at distance >= min_im from the real
/// axis.  Rejection sampling; errors out if the family never admits such an
/// x within the attempt budget.
pub fn sample_admissible_x<R: rand::Rng>(
    fam: &FormFamily,
    rng: &mut R,
    min_im: f64,
) -> Result<Vec<Complex64>> {
    let n = fam.n();
    'attempt: for _ in 0..2000 {
        let x: Vec<Complex64> = (0..n)
            .map(|_| {
                // mixed-sign imaginary parts keep the ratios x(alpha)/x(gamma)
                // away from the real axis far more often
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                Complex64::new(
                    rng.random_range(-1.5..1.5),
                    sign * rng.random_range(0.3..1.5),
                )
            })
            .collect();
        for j in 0..fam.len() {
            let sub = if fam.len() == n { fam.omit(j) } else { fam.clone() };
            if sub.len() != n - 1 {
                continue;
            }
            if sub.rank() < n - 1 {
                continue;
            }
            if cone_context(&sub, &x, min_im).is_err() {
                continue 'attempt;
            }
        }
        if fam.len() == n - 1 && cone_context(fam, &x, min_im).is_err() {
            continue 'attempt;
        }
        return Ok(x);
    }
    Err(Error::Inadmissible(
        "no admissible x found for this family".into(),
    ))
}

/// Sample (w, x) pairs admissible for the smoothed alternating product: every
/// omit-one subfamily must stay admissible in both the L and the L' charts.
pub fn sample_smoothed_samples<R: rand::Rng>(
    fam: &FormFamily,
    v: &[Rat],
    n_smooth: i64,
    count: usize,
    rng: &mut R,
    min_im: f64,
) -> Result<Vec<(Complex64, Vec<Complex64>)>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut found = None;
        for _ in 0..2000 {
            let cand = sample_admissible_x(fam, rng, min_im)?;
            let ok = (0..fam.len()).all(|j| {
                let sub = fam.omit(j);
                if sub.rank() < fam.n() - 1 {
                    return true;
                }
                match smoothing_dictionary(&sub, v, &cand, n_smooth) {
                    Ok((f2, _, x2)) => cone_context(&f2, &x2, min_im * 0.6).is_ok(),
                    Err(_) => false,
                }
            });
            if ok {
                found = Some(cand);
                break;
            }
        }
        let x = found.ok_or_else(|| {
            Error::Inadmissible("no smoothing-admissible x found for this family".into())
        })?;
        let w = Complex64::new(rng.random_range(-0.3..0.3), rng.random_range(0.1..0.4));
        out.push((w, x));
    }
    Ok(out)
}
