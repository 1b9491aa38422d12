//! Families of integer linear forms on a rank-n lattice, their positive dual
//! families, the distinguished kernel vector of a corank-1 family, standard
//! relations and the well-placed predicate, plus exact enumeration of the
//! finite fundamental regions used by the Bernoulli machinery.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::linalg::{self, hnf_solve, primitive_part};
use crate::rat::{Int, Rat};

/// An ordered family of nonzero integer linear forms on Z^n, written in the
/// dual of the standard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormFamily {
    n: usize,
    forms: Vec<Vec<Int>>,
}

impl FormFamily {
    /// Requires every form to be nonzero and primitive.
    pub fn new(n: usize, forms: Vec<Vec<Int>>) -> Result<Self> {
        for (j, f) in forms.iter().enumerate() {
            if f.len() != n {
                return Err(Error::Shape(format!("form {j} has length {} != {n}", f.len())));
            }
            let (_, g) = primitive_part(f)?;
            if !g.is_one() {
                return Err(Error::NotPrimitive(format!("form {j} has content {g}")));
            }
        }
        Ok(FormFamily { n, forms })
    }

    /// Same but only rejects zero forms.  Needed when a family is rewritten
    /// in the coordinates of a sublattice, where primitivity can be lost
    /// without changing the underlying linear forms.
    pub fn new_imprimitive(n: usize, forms: Vec<Vec<Int>>) -> Result<Self> {
        for (j, f) in forms.iter().enumerate() {
            if f.len() != n {
                return Err(Error::Shape(format!("form {j} has length {} != {n}", f.len())));
            }
            if f.iter().all(|x| x.is_zero()) {
                return Err(Error::ZeroVector);
            }
        }
        Ok(FormFamily { n, forms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[Vec<Int>] {
        &self.forms
    }

    pub fn form(&self, j: usize) -> &[Int] {
        &self.forms[j]
    }

    /// a_j evaluated on a rational vector.
    pub fn apply(&self, j: usize, v: &[Rat]) -> Rat {
        self.forms[j]
            .iter()
            .zip(v)
            .map(|(c, x)| Rat::from_integer(c.clone()) * x)
            .sum()
    }

    /// a_j evaluated on an integer vector.
    pub fn apply_int(&self, j: usize, v: &[Int]) -> Int {
        self.forms[j].iter().zip(v).map(|(c, x)| c * x).sum()
    }

    pub fn rank(&self) -> usize {
        linalg::rank_int(&self.forms)
    }

    /// The subfamily omitting the j-th form (0-based).
    pub fn omit(&self, j: usize) -> FormFamily {
        let forms = self
            .forms
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, f)| f.clone())
            .collect();
        FormFamily { n: self.n, forms }
    }

    /// Sign of det(a_1, ..., a_n) for a family of n forms; 0 if dependent.
    pub fn epsilon(&self) -> Result<i32> {
        if self.len() != self.n {
            return Err(Error::Shape("epsilon needs exactly n forms".into()));
        }
        let d = linalg::det_int(&self.forms)?;
        Ok(if d.is_zero() {
            0
        } else if d.is_positive() {
            1
        } else {
            -1
        })
    }
}

/// Positive dual family: primitive vectors with a_k(alpha_j) = s_j delta_jk,
/// s_j > 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualFamily {
    /// alphas[j] is the column vector alpha_j.
    pub alphas: Vec<Vec<Int>>,
    pub s: Vec<Int>,
}

/// Dual family of n independent forms on Z^n (unique).
pub fn dual_basis_full(fam: &FormFamily) -> Result<DualFamily> {
    let n = fam.n();
    if fam.len() != n {
        return Err(Error::Shape("dual_basis_full needs exactly n forms".into()));
    }
    let det = linalg::det_int(fam.forms())?;
    if det.is_zero() {
        return Err(Error::Rank("dual_basis_full needs independent forms".into()));
    }
    let adj = linalg::adjugate(fam.forms())?;
    let mut alphas = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    for j in 0..n {
        let col: Vec<Int> = (0..n).map(|i| adj[i][j].clone()).collect();
        let (mut alpha, _) = primitive_part(&col)?;
        let mut sj = fam.apply_int(j, &alpha);
        if sj.is_negative() {
            alpha = alpha.iter().map(|x| -x).collect();
            sj = -sj;
        }
        debug_assert!(sj.is_positive());
        for k in 0..n {
            debug_assert!(k == j || fam.apply_int(k, &alpha).is_zero());
        }
        alphas.push(alpha);
        s.push(sj);
    }
    Ok(DualFamily { alphas, s })
}

/// The distinguished primitive kernel vector of n-1 independent forms:
/// det(a_1, ..., a_{n-1}, b) = s * b(gamma) for every form b, with s > 0.
pub fn gamma_vector(fam: &FormFamily) -> Result<(Vec<Int>, Int)> {
    let n = fam.n();
    if fam.len() != n - 1 {
        return Err(Error::Shape("gamma_vector needs n-1 forms".into()));
    }
    let mut c = Vec::with_capacity(n);
    for k in 0..n {
        let mut m: Vec<Vec<Int>> = fam.forms().to_vec();
        let mut row = vec![Int::zero(); n];
        row[k] = Int::one();
        m.push(row);
        c.push(linalg::det_int(&m)?);
    }
    if c.iter().all(|x| x.is_zero()) {
        return Err(Error::Rank("gamma_vector needs rank n-1".into()));
    }
    let (gamma, s) = primitive_part(&c)?;
    Ok((gamma, s))
}

/// Positive dual family of n-1 independent forms.  The alphas are only
/// well-defined modulo Z*gamma; we fix them deterministically by reducing the
/// first coordinate on which gamma is nonzero into [0, |gamma_i0|) and then
/// taking the primitive part.
pub fn dual_family_deficient(fam: &FormFamily) -> Result<DualFamily> {
    let n = fam.n();
    if fam.len() != n - 1 {
        return Err(Error::Shape("dual_family_deficient needs n-1 forms".into()));
    }
    let (gamma, _) = gamma_vector(fam)?;
    let i0 = gamma.iter().position(|x| !x.is_zero()).unwrap();
    let g0 = gamma[i0].abs();
    let gamma_pos: Vec<Int> = if gamma[i0].is_positive() {
        gamma.clone()
    } else {
        gamma.iter().map(|x| -x).collect()
    };

    let mut alphas = Vec::with_capacity(n - 1);
    let mut s = Vec::with_capacity(n - 1);
    for j in 0..n - 1 {
        let others: Vec<Vec<Int>> = fam
            .forms()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, f)| f.clone())
            .collect();
        let sol = if others.is_empty() {
            // n = 2: no constraints, the kernel is all of Z^n
            crate::exact::linalg::LinearSolution {
                particular: Some(vec![Int::zero(); n]),
                kernel: (0..n)
                    .map(|i| {
                        let mut e = vec![Int::zero(); n];
                        e[i] = Int::one();
                        e
                    })
                    .collect(),
            }
        } else {
            hnf_solve(&others, &vec![Int::zero(); n - 2])?
        };
        if sol.kernel.len() != 2 {
            return Err(Error::Rank(format!(
                "expected a rank-2 kernel omitting form {j}, got rank {}",
                sol.kernel.len()
            )));
        }
        let d1 = fam.apply_int(j, &sol.kernel[0]);
        let d2 = fam.apply_int(j, &sol.kernel[1]);
        let ext = d1.extended_gcd(&d2);
        if ext.gcd.is_zero() {
            return Err(Error::Rank(format!("form {j} vanishes on its own kernel plane")));
        }
        let mut beta: Vec<Int> = (0..n)
            .map(|i| &ext.x * &sol.kernel[0][i] + &ext.y * &sol.kernel[1][i])
            .collect();
        if fam.apply_int(j, &beta).is_negative() {
            beta = beta.iter().map(|x| -x).collect();
        }
        // reduce modulo gamma
        let t = beta[i0].div_floor(&g0);
        if !t.is_zero() {
            for i in 0..n {
                beta[i] -= &t * &gamma_pos[i];
            }
        }
        let (alpha, _) = primitive_part(&beta)?;
        let sj = fam.apply_int(j, &alpha);
        debug_assert!(sj.is_positive());
        for k in 0..n - 1 {
            debug_assert!(k == j || fam.apply_int(k, &alpha).is_zero());
        }
        alphas.push(alpha);
        s.push(sj);
    }
    Ok(DualFamily { alphas, s })
}

/// The standard non-trivial relation sum_j lambda_j a_j = 0 of m forms of
/// rank m-1, normalized so that lambda_l (the first nonzero coefficient) has
/// absolute value 1, there are at most as many negative as positive
/// coefficients, and lambda_l = -1 on a tie.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StdRelation {
    pub lambda: Vec<Rat>,
    /// 0-based index of the first nonzero coefficient.
    pub l: usize,
    pub k_plus: usize,
    pub k_minus: usize,
}

pub fn standard_relation(fam: &FormFamily) -> Result<StdRelation> {
    let m = fam.len();
    if fam.rank() != m - 1 {
        return Err(Error::Rank("standard_relation needs rank m-1".into()));
    }
    let n = fam.n();
    // left kernel of the forms matrix = kernel of its transpose
    let transpose: Vec<Vec<Int>> = (0..n)
        .map(|c| (0..m).map(|r| fam.form(r)[c].clone()).collect())
        .collect();
    let sol = hnf_solve(&transpose, &vec![Int::zero(); n])?;
    if sol.kernel.len() != 1 {
        return Err(Error::Rank(format!(
            "relation space has rank {}, expected 1",
            sol.kernel.len()
        )));
    }
    let kappa = &sol.kernel[0];
    let l = kappa.iter().position(|x| !x.is_zero()).unwrap();
    let scale = Rat::from_integer(kappa[l].abs());
    let mut lambda: Vec<Rat> = kappa
        .iter()
        .map(|x| Rat::from_integer(x.clone()) / &scale)
        .collect();
    let pos = lambda.iter().filter(|x| x.is_positive()).count();
    let neg = lambda.iter().filter(|x| x.is_negative()).count();
    let flip = neg > pos || (neg == pos && lambda[l].is_positive());
    if flip {
        lambda = lambda.iter().map(|x| -x).collect();
    }
    let k_plus = lambda.iter().filter(|x| x.is_positive()).count();
    let k_minus = lambda.iter().filter(|x| x.is_negative()).count();
    Ok(StdRelation {
        lambda,
        l,
        k_plus,
        k_minus,
    })
}

/// A family of n forms is well-placed iff its rank is not n-1, or the
/// standard relation has at least one negative coefficient (equivalently, 0
/// is not a barycenter with positive weights of a subfamily).
pub fn is_well_placed(fam: &FormFamily) -> Result<bool> {
    let n = fam.n();
    if fam.len() != n {
        return Err(Error::Shape("is_well_placed needs exactly n forms".into()));
    }
    if fam.rank() != n - 1 {
        return Ok(true);
    }
    Ok(standard_relation(fam)?.k_minus > 0)
}

/// Integers t with lo <= t < hi; ceil(hi) is a correct exclusive bound
/// whether or not hi is an integer.
pub(crate) fn int_range(lo: &Rat, hi: &Rat) -> Vec<Int> {
    let start = lo.ceil().to_integer();
    let end = hi.ceil().to_integer();
    let mut out = Vec::new();
    let mut t = start;
    while t < end {
        out.push(t.clone());
        t += 1;
    }
    out
}

pub(crate) fn cartesian(ranges: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut out: Vec<Vec<Int>> = vec![Vec::new()];
    for r in ranges {
        let mut next = Vec::with_capacity(out.len() * r.len());
        for prefix in &out {
            for t in r {
                let mut p = prefix.clone();
                p.push(t.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Representatives of F(a, alpha, v) = { delta in v + Z^n : 0 <= a_j(delta) < s_j }
/// modulo Z*gamma, for a family of n-1 independent forms.  One representative
/// per class.
pub fn enumerate_f_deficient(
    fam: &FormFamily,
    dual: &DualFamily,
    v: &[Rat],
) -> Result<Vec<Vec<Rat>>> {
    let n = fam.n();
    if fam.len() != n - 1 {
        return Err(Error::Shape("enumerate_f_deficient needs n-1 forms".into()));
    }
    let ranges: Vec<Vec<Int>> = (0..n - 1)
        .map(|j| {
            let vj = fam.apply(j, v);
            int_range(&(-vj.clone()), &(Rat::from_integer(dual.s[j].clone()) - &vj))
        })
        .collect();
    let mut reps = Vec::new();
    for t in cartesian(&ranges) {
        let sol = hnf_solve(fam.forms(), &t)?;
        if let Some(u) = sol.particular {
            let delta: Vec<Rat> = (0..n)
                .map(|i| &v[i] + Rat::from_integer(u[i].clone()))
                .collect();
            reps.push(delta);
        }
    }
    Ok(reps)
}

/// For n independent forms: all integer vectors delta with v + delta in the
/// fundamental box { 0 <= a_j < s_j }.
pub fn representatives_full(
    fam: &FormFamily,
    dual: &DualFamily,
    v: &[Rat],
) -> Result<Vec<Vec<Int>>> {
    let n = fam.n();
    if fam.len() != n {
        return Err(Error::Shape("representatives_full needs n forms".into()));
    }
    let ranges: Vec<Vec<Int>> = (0..n)
        .map(|j| {
            let vj = fam.apply(j, v);
            int_range(&(-vj.clone()), &(Rat::from_integer(dual.s[j].clone()) - &vj))
        })
        .collect();
    let mut reps = Vec::new();
    for t in cartesian(&ranges) {
        let sol = hnf_solve(fam.forms(), &t)?;
        if let Some(u) = sol.particular {
            debug_assert!(sol.kernel.is_empty());
            reps.push(u);
        }
    }
    Ok(reps)
}
