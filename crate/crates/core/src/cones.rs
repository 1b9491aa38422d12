//! The cone combinatorics behind the rank n-1 modular identity: sign tables,
//! the relabeled cones C^1_j / C^2_j, the coefficients mu_j, and the functions
//! f^1, f^2, together with an exact proof-by-enumeration that f^1 = f^2 = 0 on
//! every instance.
//!
//! All signs are computed over Gaussian rationals, so the table and the
//! u-magnitude comparisons are exact; cone emptiness and coverage are decided
//! by Fourier-Motzkin elimination with strictness tracking.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::fm::{fm_feasible, Constraint, IneqSystem, Rel};
use crate::forms::{
    dual_family_deficient, gamma_vector, standard_relation, FormFamily, StdRelation,
};
use crate::rat::{Int, Rat};

/// Complex number with rational real and imaginary parts; enough arithmetic
/// for exact half-plane tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        GaussianRational::new(&self.re * c, &self.im * c)
    }

    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(crate::rat::to_f64(&self.re), crate::rat::to_f64(&self.im))
    }
}

/// x(v) for an integer vector v.
pub fn gx_int(x: &[GaussianRational], v: &[Int]) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for (c, xi) in v.iter().zip(x) {
        acc = acc.add(&xi.scale(&Rat::from_integer(c.clone())));
    }
    acc
}

/// Exact Im(num/den) for Gaussian rationals, den != 0.
pub fn im_of_ratio(num: &GaussianRational, den: &GaussianRational) -> Result<Rat> {
    let n2 = den.norm_sq();
    if n2.is_zero() {
        return Err(Error::Inadmissible("division by zero Gaussian rational".into()));
    }
    Ok(num.mul(&den.conj()).im / n2)
}

/// Reorder n forms of rank n-1 so the standard relation reads: zeros first,
/// then the strictly negative coefficients, then the strictly positive ones.
/// The reorder is stable within each block; returns the permuted family and
/// the permutation (new index -> old index).
pub fn normalized_order(fam: &FormFamily) -> Result<(FormFamily, Vec<usize>)> {
    let rel = standard_relation(fam)?;
    let mut perm: Vec<usize> = (0..fam.len()).collect();
    let class = |j: usize| -> u8 {
        if rel.lambda[j].is_zero() {
            0
        } else if rel.lambda[j].is_negative() {
            1
        } else {
            2
        }
    };
    perm.sort_by_key(|&j| (class(j), j));
    let forms = perm.iter().map(|&j| fam.form(j).to_vec()).collect();
    Ok((FormFamily::new(fam.n(), forms)?, perm))
}

fn relation_is_normalized(rel: &StdRelation) -> bool {
    let mut seen_neg = false;
    let mut seen_pos = false;
    for lam in &rel.lambda {
        if lam.is_zero() {
            if seen_neg || seen_pos {
                return false;
            }
        } else if lam.is_negative() {
            if seen_pos {
                return false;
            }
            seen_neg = true;
        } else {
            seen_pos = true;
        }
    }
    seen_pos
}

/// The full section-2.2.2 sign data for a family of n forms of rank n-1 in
/// normalized relation order, at an exact Gaussian-rational x.  Indices are
/// 0-based throughout; the columns j < l are absent (the omitted family has
/// rank n-2 there).
#[derive(Debug, Clone)]
pub struct SignTable {
    pub n: usize,
    /// first index with lambda != 0 (0-based)
    pub l: usize,
    pub lambda: Vec<Rat>,
    /// gamma = gamma^{(n)}, from omitting the last form
    pub gamma: Vec<Int>,
    /// eps[j] = (-1)^{j+1+n} sign(lambda_j) in 1-based terms
    pub eps: Vec<Option<i32>>,
    /// d[j][k] = sign(Im(x(alpha^{(j)}_k)/x(gamma^{(j)})))
    pub d: Vec<Vec<Option<i32>>>,
    /// D_j = sum_{k != j} (d^{(j)}_k - 1)/2
    pub dd: Vec<Option<i64>>,
    pub mu: Vec<Option<i32>>,
    /// u[j][k] = |Im(x(alpha^{(j)}_k)/(lambda_k a_k(alpha^{(j)}_k) x(gamma)))|,
    /// defined for j, k >= l
    pub u: Vec<Vec<Option<Rat>>>,
}

impl SignTable {
    /// The table entry eps_j * d^{(j)}_k.
    pub fn entry(&self, j: usize, k: usize) -> Option<i32> {
        Some(self.eps[j]? * self.d[j].get(k).copied().flatten()?)
    }
}

fn sign_of(r: &Rat) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Build the sign table of a rank n-1 family in normalized relation order at
/// an exact admissible x.
pub fn build_sign_table(fam: &FormFamily, x: &[GaussianRational]) -> Result<SignTable> {
    let n = fam.n();
    if fam.len() != n || x.len() != n {
        return Err(Error::Shape("build_sign_table needs n forms and x on Z^n".into()));
    }
    if fam.rank() != n - 1 {
        return Err(Error::Rank("build_sign_table needs rank n-1".into()));
    }
    let rel = standard_relation(fam)?;
    if !relation_is_normalized(&rel) {
        return Err(Error::Domain(
            "forms must be ordered so the relation reads zeros, negatives, positives"
                .into(),
        ));
    }
    let l = rel.l;
    let (gamma, _) = gamma_vector(&fam.omit(n - 1))?;
    let xg = gx_int(x, &gamma);
    if xg.is_zero() {
        return Err(Error::Inadmissible("x vanishes on gamma".into()));
    }

    let mut eps = vec![None; n];
    let mut d: Vec<Vec<Option<i32>>> = vec![vec![None; n]; n];
    let mut dd = vec![None; n];
    let mut mu = vec![None; n];
    let mut u: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n];

    for j in l..n {
        // 1-based: eps_j = (-1)^{j+n} sign(lambda_j)
        let par = if (j + 1 + n) % 2 == 0 { 1 } else { -1 };
        let ej = par * sign_of(&rel.lambda[j]);
        eps[j] = Some(ej);

        let sub = fam.omit(j);
        let (gj, _) = gamma_vector(&sub)?;
        // sanity: gamma^{(j)} = eps_j * gamma
        let expect: Vec<Int> = gamma.iter().map(|g| g * Int::from(ej)).collect();
        if gj != expect {
            return Err(Error::Domain(format!(
                "gamma^({j}) does not match eps_j * gamma; relation data inconsistent"
            )));
        }
        let xgj = gx_int(x, &gj);
        let dualj = dual_family_deficient(&sub)?;
        let mut dsum = 0i64;
        for (i, alpha) in dualj.alphas.iter().enumerate() {
            let k = if i < j { i } else { i + 1 };
            let im = im_of_ratio(&gx_int(x, alpha), &xgj)?;
            let djk = sign_of(&im);
            if djk == 0 {
                return Err(Error::Inadmissible(format!(
                    "x(alpha^({j})_{k})/x(gamma^({j})) is real"
                )));
            }
            d[j][k] = Some(djk);
            dsum += ((djk - 1) / 2) as i64;
            if k >= l {
                // u^{(j)}_k = |Im(x(alpha)/x(gamma)) / (lambda_k a_k(alpha))|
                let ak = Rat::from_integer(fam.apply_int(k, alpha));
                let denom = &rel.lambda[k] * ak;
                let im_g = im_of_ratio(&gx_int(x, alpha), &xg)?;
                u[j][k] = Some((im_g / denom).abs());
            }
        }
        dd[j] = Some(dsum);
        // mu_j = (-1)^{j+1+D_j+n} if eps_j = 1 else (-1)^{j+1+D_j}, 1-based j
        let e = (j as i64 + 1) + 1 + dsum + if ej == 1 { n as i64 } else { 0 };
        mu[j] = Some(if e.rem_euclid(2) == 0 { 1 } else { -1 });
    }

    Ok(SignTable {
        n,
        l,
        lambda: rel.lambda,
        gamma,
        eps,
        d,
        dd,
        mu,
        u,
    })
}

/// Report of the three sign-relation checks of the crucial lemma.
#[derive(Debug, Clone)]
pub struct SignLemmaReport {
    /// (i) rows k < l are constant across columns
    pub rows_below_l_constant: bool,
    /// (ii) eps_j d^{(j)}_k = -sign(lambda_j lambda_k) eps_k d^{(k)}_j
    pub antisymmetry: bool,
    /// (iii) u^{(j)}_k <= u^{(j)}_{k'} implies eps_k d^{(k)}_{k'} = eps_j d^{(j)}_{k'}
    pub single_column_determination: bool,
}

impl SignLemmaReport {
    pub fn all(&self) -> bool {
        self.rows_below_l_constant && self.antisymmetry && self.single_column_determination
    }
}

pub fn check_sign_lemma(table: &SignTable) -> SignLemmaReport {
    let n = table.n;
    let l = table.l;
    let mut rows = true;
    for k in 0..l {
        let mut val: Option<i32> = None;
        for j in l..n {
            let e = table.entry(j, k);
            if val.is_none() {
                val = e;
            }
            if e != val {
                rows = false;
            }
        }
    }
    let mut anti = true;
    for j in l..n {
        for k in l..n {
            if k == j {
                continue;
            }
            let s = sign_of(&(&table.lambda[j] * &table.lambda[k]));
            if table.entry(j, k) != table.entry(k, j).map(|e| -s * e) {
                anti = false;
            }
        }
    }
    let mut single = true;
    for j in l..n {
        for k in l..n {
            for kp in l..n {
                if k == j || kp == j || k == kp {
                    continue;
                }
                let (Some(ujk), Some(ujkp)) = (&table.u[j][k], &table.u[j][kp]) else {
                    continue;
                };
                if ujk <= ujkp && table.entry(k, kp) != table.entry(j, kp) {
                    single = false;
                }
            }
        }
    }
    SignLemmaReport {
        rows_below_l_constant: rows,
        antisymmetry: anti,
        single_column_determination: single,
    }
}

/// The inequality system of the relabeled cone C^1_j (or C^2_j with
/// `second = true`), as constraints on delta in Q^n.
pub fn cone_system(fam: &FormFamily, table: &SignTable, j: usize, second: bool) -> IneqSystem {
    let mut cs = Vec::new();
    for k in 0..table.n {
        if k == j {
            continue;
        }
        let mut sgn = table.entry(j, k).expect("column built");
        if second {
            sgn = -sgn;
        }
        let coeffs: Vec<Rat> = fam
            .form(k)
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        cs.push(Constraint::homogeneous(
            coeffs,
            if sgn == 1 { Rel::Ge } else { Rel::Lt },
        ));
    }
    IneqSystem::new(cs)
}

/// Columns j and j' are compatible iff they agree on every row k != j, j'.
pub fn compatible(table: &SignTable, j: usize, jp: usize) -> bool {
    (0..table.n)
        .filter(|&k| k != j && k != jp)
        .all(|k| table.entry(j, k) == table.entry(jp, k))
}

/// I(j): the compatible partners of column j.
pub fn compatibility_set(table: &SignTable, j: usize) -> Vec<usize> {
    (table.l..table.n)
        .filter(|&jp| jp != j && compatible(table, j, jp))
        .collect()
}

/// A sign pattern assigns to each a_k the region a_k(delta) >= 0 (true) or
/// a_k(delta) < 0 (false).  Realizable iff some rational delta achieves it.
pub fn pattern_realizable(fam: &FormFamily, pattern: &[bool]) -> bool {
    let cs: Vec<Constraint> = (0..fam.len())
        .map(|k| {
            let coeffs = fam
                .form(k)
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect();
            Constraint::homogeneous(coeffs, if pattern[k] { Rel::Ge } else { Rel::Lt })
        })
        .collect();
    fm_feasible(&IneqSystem::new(cs))
}

/// Indicator of C^1_j (or C^2_j) on a sign pattern.
pub fn cone_indicator(table: &SignTable, j: usize, second: bool, pattern: &[bool]) -> i64 {
    let inside = (0..table.n).filter(|&k| k != j).all(|k| {
        let mut sgn = table.entry(j, k).expect("column built");
        if second {
            sgn = -sgn;
        }
        pattern[k] == (sgn == 1)
    });
    inside as i64
}

/// f^1 = sum_j mu_j c^1_j and f^2 = (-1)^n sum_j mu_j c^2_j on a pattern.
pub fn f_values(table: &SignTable, pattern: &[bool]) -> (i64, i64) {
    let mut f1 = 0;
    let mut f2 = 0;
    for j in table.l..table.n {
        let mj = table.mu[j].expect("column built") as i64;
        f1 += mj * cone_indicator(table, j, false, pattern);
        f2 += mj * cone_indicator(table, j, true, pattern);
    }
    if table.n % 2 == 1 {
        f2 = -f2;
    }
    (f1, f2)
}

fn patterns(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u32 << n).map(move |mask| (0..n).map(|k| mask >> k & 1 == 1).collect())
}

/// Report of the intersection lemmas, all decided exactly.
#[derive(Debug, Clone)]
pub struct TripleReport {
    /// nonempty pairwise intersections only between compatible columns
    pub intersection_implies_compatible: bool,
    /// every triple intersection of C^1 cones is empty
    pub triples_empty: bool,
    /// every I(j) is nonempty
    pub i_sets_nonempty: bool,
    /// C^1_j is covered by the union of C^1_{j'} over j' in I(j)
    pub coverage: bool,
    /// for compatible pairs, C^1_j cap C^1_j' = C^1_j cap H^{entry(j',j)}_j
    pub component_identity: bool,
}

impl TripleReport {
    pub fn all(&self) -> bool {
        self.intersection_implies_compatible
            && self.triples_empty
            && self.i_sets_nonempty
            && self.coverage
            && self.component_identity
    }
}

pub fn check_triple_and_coverage(fam: &FormFamily, table: &SignTable) -> TripleReport {
    let n = table.n;
    let l = table.l;
    let realizable: Vec<Vec<bool>> = patterns(n)
        .filter(|p| pattern_realizable(fam, p))
        .collect();

    let mut inter_compat = true;
    let mut component = true;
    for j in l..n {
        for jp in l..n {
            if jp <= j {
                continue;
            }
            let both = cone_system(fam, table, j, false).and(&cone_system(fam, table, jp, false));
            let nonempty = fm_feasible(&both);
            if nonempty && !compatible(table, j, jp) {
                inter_compat = false;
            }
            if compatible(table, j, jp) {
                // component identity checked pattern-wise: membership in the
                // intersection equals membership in C^1_j with the half-space
                // condition entry(j', j) on a_j
                let hj = table.entry(jp, j).expect("column built");
                for p in &realizable {
                    let in_both = cone_indicator(table, j, false, p) == 1
                        && cone_indicator(table, jp, false, p) == 1;
                    let in_half = p[j] == (hj == 1);
                    let in_component = cone_indicator(table, j, false, p) == 1 && in_half;
                    if in_both != in_component {
                        component = false;
                    }
                }
            }
        }
    }

    let mut triples = true;
    for j in l..n {
        for jp in j + 1..n {
            for jpp in jp + 1..n {
                let sys = cone_system(fam, table, j, false)
                    .and(&cone_system(fam, table, jp, false))
                    .and(&cone_system(fam, table, jpp, false));
                if fm_feasible(&sys) {
                    triples = false;
                }
            }
        }
    }

    let i_nonempty = (l..n).all(|j| !compatibility_set(table, j).is_empty());

    let mut coverage = true;
    for j in l..n {
        let partners = compatibility_set(table, j);
        for p in &realizable {
            if cone_indicator(table, j, false, p) == 1
                && !partners
                    .iter()
                    .any(|&jp| cone_indicator(table, jp, false, p) == 1)
            {
                coverage = false;
            }
        }
    }

    TripleReport {
        intersection_implies_compatible: inter_compat,
        triples_empty: triples,
        i_sets_nonempty: i_nonempty,
        coverage,
        component_identity: component,
    }
}

/// Exhaustive exact check that f^1 and f^2 vanish on every realizable sign
/// region.  This is the combinatorial content of the rank n-1 modular
/// identity.
pub fn verify_f_vanishing(fam: &FormFamily, table: &SignTable) -> bool {
    patterns(table.n)
        .filter(|p| pattern_realizable(fam, p))
        .all(|p| f_values(table, &p) == (0, 0))
}

/// For a rank n-1 family that is NOT well placed (k^- = 0), exhibit a
/// realizable sign region where f^1 or f^2 is nonzero; returns None when the
/// family is well placed (no witness exists, by the theorem).
pub fn counterexample_when_barycenter(
    fam: &FormFamily,
    x: &[GaussianRational],
) -> Result<Option<Vec<bool>>> {
    if crate::forms::is_well_placed(fam)? {
        return Ok(None);
    }
    let table = build_sign_table(fam, x)?;
    for p in patterns(table.n) {
        if pattern_realizable(fam, p.as_slice()) && f_values(&table, &p) != (0, 0) {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::forms::tests::fam;
    use crate::rat::{rat, ratio};

    pub fn gx(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(rat(re), rat(im))
    }

    /// The running example of section 2.2.3.
    pub fn example_family() -> FormFamily {
        fam(
            4,
            &[
                &[1, 0, 0, 0],
                &[0, 1, 0, 0],
                &[0, 0, -1, 0],
                &[0, 1, 1, 0],
            ],
        )
    }

    pub fn example_x() -> Vec<GaussianRational> {
        vec![gx(0, 2), gx(0, 3), gx(0, 5), gx(-1, 0)]
    }

    #[test]
    fn example_table_matches_paper() {
        let f = example_family();
        let table = build_sign_table(&f, &example_x()).unwrap();
        assert_eq!(table.l, 1);
        assert_eq!(
            table.lambda,
            vec![rat(0), rat(-1), rat(1), rat(1)]
        );
        assert_eq!(table.gamma, crate::forms::tests::iv(&[0, 0, 0, -1]));
        // Table 2, 0-based: column j=1: (+,.,-,+); j=2: (+,-,.,+); j=3: (+,+,-,.)
        let expect = [
            (1, vec![(0, 1), (2, -1), (3, 1)]),
            (2, vec![(0, 1), (1, -1), (3, 1)]),
            (3, vec![(0, 1), (1, 1), (2, -1)]),
        ];
        for (j, col) in expect {
            for (k, s) in col {
                assert_eq!(table.entry(j, k), Some(s), "entry ({j},{k})");
            }
        }
        // mu = (-1, +1, +1) on columns 2, 3, 4 (1-based)
        assert_eq!(&table.mu[1..], &[Some(-1), Some(1), Some(1)]);
    }

    #[test]
    fn example_passes_sign_lemma() {
        let table = build_sign_table(&example_family(), &example_x()).unwrap();
        let report = check_sign_lemma(&table);
        assert!(report.all(), "{report:?}");
    }

    #[test]
    fn eps_n_is_positive() {
        let table = build_sign_table(&example_family(), &example_x()).unwrap();
        assert_eq!(table.eps[3], Some(1));
    }

    #[test]
    fn example_triples_and_coverage() {
        let f = example_family();
        let table = build_sign_table(&f, &example_x()).unwrap();
        let report = check_triple_and_coverage(&f, &table);
        assert!(report.all(), "{report:?}");
    }

    #[test]
    fn example_c1_decomposition() {
        // C^1_2 = C^1_3 disjoint-union C^1_4 (1-based), so on every
        // realizable pattern c^1_2 = c^1_3 + c^1_4; moreover C^1_3 and C^1_4
        // do not intersect.
        let f = example_family();
        let table = build_sign_table(&f, &example_x()).unwrap();
        for p in patterns(4).filter(|p| pattern_realizable(&f, p)) {
            assert_eq!(
                cone_indicator(&table, 1, false, &p),
                cone_indicator(&table, 2, false, &p) + cone_indicator(&table, 3, false, &p),
                "pattern {p:?}"
            );
        }
        let sys = cone_system(&f, &table, 2, false).and(&cone_system(&f, &table, 3, false));
        assert!(!fm_feasible(&sys));
    }

    #[test]
    fn example_f_vanishes() {
        let f = example_family();
        let table = build_sign_table(&f, &example_x()).unwrap();
        // f^1 = -c^1_2 + c^1_3 + c^1_4 (1-based), already encoded by mu
        assert!(verify_f_vanishing(&f, &table));
    }

    #[test]
    fn trivial_case_l_equals_n_minus_one() {
        // lambda = (0, -1, 1): the two surviving columns cancel directly.
        let f = fam(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 1, 0]]);
        let x = vec![gx(0, 2), gx(0, 3), gx(-1, 0)];
        let table = build_sign_table(&f, &x).unwrap();
        assert_eq!(table.l, 1);
        assert!(verify_f_vanishing(&f, &table));
        assert!(check_sign_lemma(&table).all());
    }

    #[test]
    fn normalized_order_sorts_relation_blocks() {
        // scrambled version of the running example
        let f = fam(
            4,
            &[
                &[0, 1, 1, 0],
                &[0, 1, 0, 0],
                &[1, 0, 0, 0],
                &[0, 0, -1, 0],
            ],
        );
        let (g, perm) = normalized_order(&f).unwrap();
        let rel = standard_relation(&g).unwrap();
        assert!(relation_is_normalized(&rel));
        assert_eq!(perm.len(), 4);
        // the zero-coefficient form a_1 = [1,0,0,0] must come first
        assert_eq!(g.form(0), crate::forms::tests::iv(&[1, 0, 0, 0]).as_slice());
    }

    #[test]
    fn table_independent_of_dual_choice() {
        // shifting alpha^{(j)}_k by gamma^{(j)} cannot change d^{(j)}_k since
        // x(gamma^{(j)})/x(gamma^{(j)}) = 1 is real
        let f = example_family();
        let x = example_x();
        let table = build_sign_table(&f, &x).unwrap();
        let sub = f.omit(1);
        let (gj, _) = gamma_vector(&sub).unwrap();
        let dualj = dual_family_deficient(&sub).unwrap();
        let xgj = gx_int(&x, &gj);
        for (i, alpha) in dualj.alphas.iter().enumerate() {
            let k = if i < 1 { i } else { i + 1 };
            let shifted: Vec<Int> = alpha
                .iter()
                .zip(&gj)
                .map(|(a, g)| a + g * Int::from(3))
                .collect();
            let im = im_of_ratio(&gx_int(&x, &shifted), &xgj).unwrap();
            assert_eq!(Some(table.eps[1].unwrap() * sign_of(&im)), table.entry(1, k));
        }
    }

    #[test]
    fn barycenter_configuration_has_witness() {
        // a_1 = -a_2 setup: relation (0, 1, 1), k^- = 0, not well placed
        let f = fam(3, &[&[0, 0, 1], &[0, 1, 0], &[0, -1, 0]]);
        assert!(!crate::forms::is_well_placed(&f).unwrap());
        let x = vec![gx(1, 2), gx(2, 3), gx(-1, 0)];
        let witness = counterexample_when_barycenter(&f, &x).unwrap();
        assert!(witness.is_some());
    }

    #[test]
    fn well_placed_family_has_no_witness() {
        let f = example_family();
        let witness = counterexample_when_barycenter(&f, &example_x()).unwrap();
        assert!(witness.is_none());
    }

    #[test]
    fn f_region_values_match_point_samples() {
        // evaluate the indicators at an interior rational point of each
        // realizable region and compare with the pattern-level values
        let f = example_family();
        let table = build_sign_table(&f, &example_x()).unwrap();
        // points with all a_k nonzero hit the interior of their pattern
        let samples: Vec<Vec<Rat>> = vec![
            vec![rat(1), rat(2), rat(3), rat(0)],
            vec![rat(-1), rat(2), rat(-3), rat(5)],
            vec![ratio(1, 2), ratio(-3, 2), ratio(5, 3), rat(7)],
            vec![rat(-2), rat(-1), rat(1), rat(0)],
        ];
        for delta in samples {
            let pattern: Vec<bool> = (0..4).map(|k| !f.apply(k, &delta).is_negative()).collect();
            assert!(pattern_realizable(&f, &pattern));
            let direct: i64 = (table.l..table.n)
                .map(|j| {
                    let inside = (0..table.n).filter(|&k| k != j).all(|k| {
                        let s = table.entry(j, k).unwrap();
                        let val = f.apply(k, &delta);
                        if s == 1 {
                            !val.is_negative()
                        } else {
                            val.is_negative()
                        }
                    });
                    table.mu[j].unwrap() as i64 * inside as i64
                })
                .sum();
            assert_eq!(direct, f_values(&table, &pattern).0);
        }
    }
}
