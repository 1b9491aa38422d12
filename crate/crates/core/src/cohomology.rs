//! Group-cohomological wrappers: the maps psi_{n,a} and phi_{n,a} attached to
//! a primitive form and a tuple of unimodular matrices, their smoothed
//! versions, the coboundary/cocycle verifiers, and the pointed-cone condition
//! that guarantees well-placedness for unit-group orbits.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::bernoulli::bn_value_rat;
use crate::error::{Error, Result};
use crate::exact::fm::{fm_feasible, Constraint, IneqSystem, Rel};
use crate::exact::linalg::{adjugate, det_int};
use crate::forms::FormFamily;
use crate::gamma::{
    alternating_smoothed_product, geometric_g_cone, smoothed_g, verify_modular, Truncation,
};
use crate::rat::{Int, Rat};
use crate::smoothing::{smoothed_bn_dedekind, SmoothedValue};

/// An element of SL_n(Z), acting on linear forms by a -> a g^{-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElem {
    g: Vec<Vec<Int>>,
}

impl GroupElem {
    pub fn new(g: Vec<Vec<Int>>) -> Result<Self> {
        let n = g.len();
        if n == 0 || g.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("group element must be a square matrix".into()));
        }
        if det_int(&g)? != Int::one() {
            return Err(Error::Domain("group element must have determinant 1".into()));
        }
        Ok(GroupElem { g })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        GroupElem::new(
            rows.iter()
                .map(|r| r.iter().map(|&e| Int::from(e)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let g = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Int::one() } else { Int::zero() })
                    .collect()
            })
            .collect();
        GroupElem { g }
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn matrix(&self) -> &[Vec<Int>] {
        &self.g
    }

    pub fn mul(&self, other: &GroupElem) -> Result<GroupElem> {
        let n = self.n();
        if other.n() != n {
            return Err(Error::Shape("size mismatch in group multiplication".into()));
        }
        let mut out = vec![vec![Int::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i][j] += &self.g[i][k] * &other.g[k][j];
                }
            }
        }
        Ok(GroupElem { g: out })
    }

    /// With det 1 the inverse is the adjugate.
    pub fn inverse(&self) -> GroupElem {
        GroupElem {
            g: adjugate(&self.g).expect("square by construction"),
        }
    }

    /// Membership in the congruence subgroup: the first column is
    /// (*, 0, ..., 0)^t mod N.
    pub fn in_congruence_subgroup(&self, n_smooth: i64) -> bool {
        let m = Int::from(n_smooth);
        self.g[1..]
            .iter()
            .all(|row| crate::rat::rem_euclid(&row[0], &m).is_zero())
    }

    /// The action on forms: (g . a)(alpha) = a(g^{-1} alpha), i.e. the row
    /// covector a times g^{-1}.
    pub fn act_on_form(&self, a: &[Int]) -> Result<Vec<Int>> {
        let n = self.n();
        if a.len() != n {
            return Err(Error::Shape("form length mismatch in group action".into()));
        }
        let inv = self.inverse();
        Ok((0..n)
            .map(|k| (0..n).map(|i| &a[i] * &inv.g[i][k]).sum())
            .collect())
    }
}

/// The family (a, g_1.a, (g_1 g_2).a, ..., (g_1...g_k).a) of k+1 forms built
/// from the cumulative products of the tuple.
pub fn resolve_family(a: &[Int], tuple: &[GroupElem]) -> Result<FormFamily> {
    let n = a.len();
    let mut forms = vec![a.to_vec()];
    let mut acc = GroupElem::identity(n);
    for g in tuple {
        acc = acc.mul(g)?;
        forms.push(acc.act_on_form(a)?);
    }
    FormFamily::new(n, forms)
}

/// phi_{n,a}(g_1, ..., g_{n-1}) evaluated at (v, w, x): the Bernoulli
/// rational function of the resolved n-family, with the convention that a
/// dependent family gives 0.
pub fn phi_eval(a: &[Int], tuple: &[GroupElem], v: &[Rat], w: &Rat, x: &[Rat]) -> Result<Rat> {
    let n = a.len();
    if tuple.len() != n - 1 {
        return Err(Error::Shape("phi takes a tuple of n-1 group elements".into()));
    }
    let fam = resolve_family(a, tuple)?;
    if fam.rank() < n {
        return Ok(Rat::zero());
    }
    bn_value_rat(&fam, v, w, x)
}

/// The smoothed phi^{(N)}_{n,a}: a smoothed higher Dedekind sum, independent
/// of (w, x) when the smoothing lattice is good for the resolved family.
pub fn phi_smoothed(
    a: &[Int],
    tuple: &[GroupElem],
    v: &[Rat],
    n_smooth: i64,
) -> Result<SmoothedValue> {
    let n = a.len();
    if tuple.len() != n - 1 {
        return Err(Error::Shape("phi takes a tuple of n-1 group elements".into()));
    }
    smoothed_bn_dedekind(&resolve_family(a, tuple)?, v, n_smooth)
}

/// psi_{n,a}(g_1, ..., g_{n-2}) evaluated at (v, w, x): the geometric
/// G_{n-2} of the resolved (n-1)-family (1 when the family is rank
/// deficient beyond n-2).
pub fn psi_eval(
    a: &[Int],
    tuple: &[GroupElem],
    v: &[Rat],
    w: Complex64,
    x: &[Complex64],
    trunc: &Truncation,
) -> Result<Complex64> {
    let n = a.len();
    if tuple.len() != n - 2 {
        return Err(Error::Shape("psi takes a tuple of n-2 group elements".into()));
    }
    geometric_g_cone(&resolve_family(a, tuple)?, v, w, x, trunc)
}

/// The smoothed psi^{(N)}_{n,a}.
pub fn psi_smoothed(
    a: &[Int],
    tuple: &[GroupElem],
    v: &[Rat],
    w: Complex64,
    x: &[Complex64],
    n_smooth: i64,
    trunc: &Truncation,
) -> Result<Complex64> {
    let n = a.len();
    if tuple.len() != n - 2 {
        return Err(Error::Shape("psi takes a tuple of n-2 group elements".into()));
    }
    smoothed_g(&resolve_family(a, tuple)?, v, w, x, n_smooth, trunc)
}

/// Residual of the multiplicative coboundary relation
/// d^x psi_{n,a}(g_1, ..., g_{n-1}) = exp(2 i pi phi_{n,a}(g_1, ..., g_{n-1}))
/// on the resolved n-family (equivalently, the modular property of that
/// family).  Requires the resolved family to be well placed.
pub fn check_coboundary_psi(
    a: &[Int],
    tuple: &[GroupElem],
    v: &[Rat],
    w: Complex64,
    x: &[Complex64],
    trunc: &Truncation,
) -> Result<f64> {
    let n = a.len();
    if tuple.len() != n - 1 {
        return Err(Error::Shape(
            "the coboundary takes a tuple of n-1 group elements".into(),
        ));
    }
    let fam = resolve_family(a, tuple)?;
    if !crate::forms::is_well_placed(&fam)? {
        return Err(Error::Inadmissible(
            "resolved family is not well placed; the coboundary relation is not asserted"
                .into(),
        ));
    }
    verify_modular(&fam, v, w, x, trunc)
}

/// Smoothed version of the coboundary residual:
/// d^x psi^{(N)} vs exp(2 i pi phi^{(N)}).
pub fn check_coboundary_psi_smoothed(
    a: &[Int],
    tuple: &[GroupElem],
    v: &[Rat],
    w: Complex64,
    x: &[Complex64],
    n_smooth: i64,
    trunc: &Truncation,
) -> Result<f64> {
    let n = a.len();
    if tuple.len() != n - 1 {
        return Err(Error::Shape(
            "the coboundary takes a tuple of n-1 group elements".into(),
        ));
    }
    let fam = resolve_family(a, tuple)?;
    if !crate::forms::is_well_placed(&fam)? {
        return Err(Error::Inadmissible(
            "resolved family is not well placed; the coboundary relation is not asserted"
                .into(),
        ));
    }
    let lhs = alternating_smoothed_product(&fam, v, w, x, n_smooth, trunc)?;
    let rhs = if fam.rank() == fam.n() {
        let sv = smoothed_bn_dedekind(&fam, v, n_smooth)?;
        let t = 2.0 * std::f64::consts::PI * crate::rat::to_f64(&sv.value);
        Complex64::new(t.cos(), t.sin())
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok((lhs - rhs).norm())
}

/// Value of the cocycle sum d phi_{n,a}(g_1, ..., g_n) together with a
/// good-position flag.  The sum is the alternating sum of the Bernoulli
/// functions of the n+1 omit-one subfamilies of the resolved (n+1)-family;
/// it is asserted to vanish only when every subfamily is independent *and*
/// 0 is not a positive barycenter of the n+1 forms (the unique relation has
/// mixed signs).  On all-positive relations the sum jumps by an integer.
pub fn check_cocycle_phi(
    a: &[Int],
    tuple: &[GroupElem],
    v: &[Rat],
    w: &Rat,
    x: &[Rat],
) -> Result<(Rat, bool)> {
    let n = a.len();
    if tuple.len() != n {
        return Err(Error::Shape("the cocycle takes a tuple of n group elements".into()));
    }
    let fam = resolve_family(a, tuple)?;
    let mut sum = Rat::zero();
    let mut generic = true;
    for j in 0..=n {
        let sub = fam.omit(j);
        let term = if sub.rank() < n {
            generic = false;
            Rat::zero()
        } else {
            bn_value_rat(&sub, v, w, x)?
        };
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if generic {
        // rank is n, so the relation space has dimension 1
        let rel = crate::forms::standard_relation(&fam)?;
        if rel.k_minus == 0 {
            generic = false;
        }
    }
    Ok((sum, generic))
}

/// Condition (26): no nonzero nonnegative combination of the orbit forms
/// vanishes, i.e. the orbit of `a` under words in the g_j of length at most
/// `bound` spans a pointed cone.  Decided exactly by Fourier-Motzkin.
pub fn condition_26_check(a: &[Int], gs: &[GroupElem], bound: usize) -> Result<bool> {
    let n = a.len();
    let mut mats = vec![GroupElem::identity(n)];
    let mut frontier = mats.clone();
    for _ in 0..bound {
        let mut next = Vec::new();
        for m in &frontier {
            for g in gs {
                for cand in [m.mul(g)?, m.mul(&g.inverse())?] {
                    if !mats.contains(&cand) {
                        mats.push(cand.clone());
                        next.push(cand);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut orbit: Vec<Vec<Int>> = Vec::new();
    for m in &mats {
        let f = m.act_on_form(a)?;
        if !orbit.contains(&f) {
            orbit.push(f);
        }
    }
    Ok(!cone_contains_zero_nontrivially(&orbit))
}

/// True iff some nonzero nonnegative rational combination of the vectors is
/// zero (the cone they span is not pointed, or contains a line).
fn cone_contains_zero_nontrivially(vectors: &[Vec<Int>]) -> bool {
    let m = vectors.len();
    if m == 0 {
        return false;
    }
    let n = vectors[0].len();
    let mut cs = Vec::new();
    // sum_j mu_j v_j = 0 coordinate-wise
    for k in 0..n {
        let coeffs = vectors
            .iter()
            .map(|v| Rat::from_integer(v[k].clone()))
            .collect();
        cs.push(Constraint::homogeneous(coeffs, Rel::Eq));
    }
    for j in 0..m {
        let mut coeffs = vec![Rat::zero(); m];
        coeffs[j] = Rat::one();
        cs.push(Constraint::homogeneous(coeffs, Rel::Ge));
    }
    cs.push(Constraint::homogeneous(vec![Rat::one(); m], Rel::Gt));
    fm_feasible(&IneqSystem::new(cs))
}

/// Multiplication-by-root matrix of a monic integer polynomial
/// x^n + c_{n-1} x^{n-1} + ... + c_0 on the power basis 1, x, ..., x^{n-1}.
/// The constant term must be a unit (so the matrix is unimodular); the
/// determinant (-1)^n c_0 must be 1 for the matrix to lie in SL_n(Z).
pub fn companion_unit_matrix(coeffs: &[Int]) -> Result<GroupElem> {
    let n = coeffs.len();
    if n == 0 {
        return Err(Error::Shape("empty polynomial".into()));
    }
    if coeffs[0].abs() != Int::one() {
        return Err(Error::Domain(
            "constant term must be a unit for an invertible integer matrix".into(),
        ));
    }
    let mut g = vec![vec![Int::zero(); n]; n];
    for i in 0..n - 1 {
        // column i sends e_{i+1} to e_{i+2} (multiplication by x)
        g[i + 1][i] = Int::one();
    }
    for i in 0..n {
        g[i][n - 1] = -coeffs[i].clone();
    }
    GroupElem::new(g).map_err(|_| {
        Error::Domain("companion matrix has determinant -1; use an even power of the unit".into())
    })
}
