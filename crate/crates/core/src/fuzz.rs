//! Seeded random instance generation.  Each profile retries until its exact
//! predicate holds, so emitted instances are valid by construction.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cones::GaussianRational;
use crate::error::{Error, Result};
use crate::forms::{is_well_placed, standard_relation, FormFamily};
use crate::rat::{ratio, Int, Rat};
use crate::smoothing::is_good_lattice;

const MAX_ATTEMPTS: usize = 10_000;

pub struct Fuzzer {
    rng: ChaCha8Rng,
}

impl Fuzzer {
    pub fn new(seed: u64) -> Self {
        Fuzzer {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A rational p/q with small numerator and denominator, in [0, 1).
    pub fn rat_unit(&mut self, den_max: i64) -> Rat {
        let q = self.rng.random_range(1..=den_max);
        let p = self.rng.random_range(0..q);
        ratio(p, q)
    }

    pub fn v_vector(&mut self, n: usize) -> Vec<Rat> {
        (0..n).map(|_| self.rat_unit(6)).collect()
    }

    fn random_form(&mut self, n: usize, bound: i64) -> Vec<Int> {
        loop {
            let f: Vec<Int> = (0..n)
                .map(|_| Int::from(self.rng.random_range(-bound..=bound)))
                .collect();
            if crate::exact::linalg::is_primitive(&f) {
                return f;
            }
        }
    }

    /// Independent primitive forms: rank(family) = len = count.
    fn independent_forms(&mut self, n: usize, count: usize, bound: i64) -> Result<FormFamily> {
        for _ in 0..MAX_ATTEMPTS {
            let forms: Vec<Vec<Int>> = (0..count).map(|_| self.random_form(n, bound)).collect();
            if let Ok(fam) = FormFamily::new(n, forms) {
                if fam.rank() == count {
                    return Ok(fam);
                }
            }
        }
        Err(Error::Domain("fuzz: no independent family found".into()))
    }

    /// Profile full-rank-good: n independent forms for which the smoothing
    /// lattice [Ne_1, e_2, ..., e_n] is good, plus a random v.
    pub fn full_rank_good(&mut self, n: usize, n_smooth: i64) -> Result<(FormFamily, Vec<Rat>)> {
        for _ in 0..MAX_ATTEMPTS {
            let fam = self.independent_forms(n, n, 3)?;
            // keep fundamental-box enumerations small: the exact formulas sum
            // over a box whose volume grows with the determinant
            let det = crate::exact::linalg::det_int(fam.forms())?;
            if det.abs() > Int::from(10) {
                continue;
            }
            if is_good_lattice(&fam, n_smooth)? {
                let v = self.v_vector(n);
                return Ok((fam, v));
            }
        }
        Err(Error::Domain("fuzz: no good full-rank family found".into()))
    }

    /// Profile full-rank (no goodness constraint), for the unsmoothed
    /// modular identity.
    pub fn full_rank(&mut self, n: usize) -> Result<FormFamily> {
        self.independent_forms(n, n, 3)
    }

    /// Profile rank-deficient-well-placed: n forms of rank n-1 whose
    /// standard relation is normalized (zeros, then negatives, then
    /// positives) with k^- > 0.
    pub fn rank_deficient_well_placed(&mut self, n: usize) -> Result<FormFamily> {
        'outer: for _ in 0..MAX_ATTEMPTS {
            // block sizes: zeros z, negatives km >= 1, positives kp >= km
            let z = self.rng.random_range(0..=(n - 2));
            let m = n - z;
            let km = self.rng.random_range(1..=(m / 2));
            let head = self.independent_forms(n, n - 1, 2)?;
            let mut lambda: Vec<Int> = vec![Int::from(0); n];
            for (i, lam) in lambda.iter_mut().enumerate().take(n - 1).skip(z) {
                let mag = self.rng.random_range(1..=2i64);
                *lam = Int::from(if i < z + km { -mag } else { mag });
            }
            lambda[n - 1] = Int::from(1);
            // the last form closes the relation: a_n = -sum lambda_j a_j
            let mut last = vec![Int::from(0); n];
            for j in 0..n - 1 {
                for (li, hf) in last.iter_mut().zip(head.form(j)) {
                    *li -= &lambda[j] * hf;
                }
            }
            if !crate::exact::linalg::is_primitive(&last) {
                continue;
            }
            let mut forms: Vec<Vec<Int>> = (0..n - 1).map(|j| head.form(j).to_vec()).collect();
            forms.push(last);
            let Ok(fam) = FormFamily::new(n, forms) else {
                continue;
            };
            if fam.rank() != n - 1 {
                continue;
            }
            let rel = standard_relation(&fam)?;
            if rel.k_minus == 0 || rel.k_minus > rel.k_plus {
                continue;
            }
            // the constructed lambda must be the (scaled) kernel generator;
            // require the normalized block shape
            let mut seen_nonzero = false;
            for (i, lam) in rel.lambda.iter().enumerate() {
                if lam.is_zero() && seen_nonzero {
                    continue 'outer;
                }
                if !lam.is_zero() {
                    seen_nonzero = true;
                }
                if lam.is_positive() && i + 1 < n && rel.lambda[i + 1].is_negative() {
                    continue 'outer;
                }
            }
            if is_well_placed(&fam)? {
                return Ok(fam);
            }
        }
        Err(Error::Domain("fuzz: no rank-deficient family found".into()))
    }

    /// Profile barycenter-counterexample: (b_1, ..., b_{n-2}, a, -a), rank
    /// n-1, relation (0, ..., 0, 1, 1), not well placed.
    pub fn barycenter(&mut self, n: usize) -> Result<FormFamily> {
        for _ in 0..MAX_ATTEMPTS {
            let head = self.independent_forms(n, n - 1, 2)?;
            let mut forms: Vec<Vec<Int>> = (0..n - 1).map(|j| head.form(j).to_vec()).collect();
            let neg: Vec<Int> = forms[n - 2].iter().map(|c| -c).collect();
            forms.push(neg);
            let fam = FormFamily::new(n, forms)?;
            if fam.rank() == n - 1 && !is_well_placed(&fam)? {
                return Ok(fam);
            }
        }
        Err(Error::Domain("fuzz: no barycenter family found".into()))
    }

    /// Profile cocycle-generic: n+1 forms, every n-subfamily independent,
    /// and 0 is not a barycenter of the n+1 forms (the unique relation has
    /// mixed signs).  The second condition is the "good position" hypothesis
    /// of the cocycle relation: on all-positive relations the alternating
    /// sum jumps by an integer instead of vanishing.
    pub fn cocycle_generic(&mut self, n: usize) -> Result<FormFamily> {
        'outer: for _ in 0..MAX_ATTEMPTS {
            let forms: Vec<Vec<Int>> = (0..=n).map(|_| self.random_form(n, 3)).collect();
            let Ok(fam) = FormFamily::new(n, forms) else {
                continue;
            };
            for j in 0..=n {
                if fam.omit(j).rank() != n {
                    continue 'outer;
                }
            }
            let rel = standard_relation(&fam)?;
            if rel.k_minus == 0 {
                continue;
            }
            return Ok(fam);
        }
        Err(Error::Domain("fuzz: no generic cocycle family found".into()))
    }

    /// Random Gaussian-rational x with nonzero imaginary parts, for exact
    /// sign tables.  Callers retry on Inadmissible.
    pub fn gaussian_x(&mut self, n: usize) -> Vec<GaussianRational> {
        (0..n)
            .map(|_| {
                let re = ratio(self.rng.random_range(-6..=6), self.rng.random_range(1..=3));
                let mut im = ratio(self.rng.random_range(-6..=6), self.rng.random_range(1..=3));
                if im == ratio(0, 1) {
                    im = ratio(if self.rng.random_bool(0.5) { 1 } else { -1 }, 1);
                }
                GaussianRational::new(re, im)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::standard_relation;

    #[test]
    fn seeded_generation_is_deterministic() {
        let mut a = Fuzzer::new(42);
        let mut b = Fuzzer::new(42);
        for _ in 0..5 {
            let (fa, va) = a.full_rank_good(3, 4).unwrap();
            let (fb, vb) = b.full_rank_good(3, 4).unwrap();
            assert_eq!(fa.forms(), fb.forms());
            assert_eq!(va, vb);
        }
    }

    #[test]
    fn full_rank_good_profile_predicate() {
        let mut f = Fuzzer::new(7);
        for n in 2..=4usize {
            for n_smooth in [2, 3, 6] {
                let (fam, _) = f.full_rank_good(n, n_smooth).unwrap();
                assert_eq!(fam.rank(), n);
                assert!(is_good_lattice(&fam, n_smooth).unwrap());
            }
        }
    }

    #[test]
    fn rank_deficient_profile_predicate() {
        let mut f = Fuzzer::new(3);
        for n in 3..=5usize {
            for _ in 0..5 {
                let fam = f.rank_deficient_well_placed(n).unwrap();
                assert_eq!(fam.rank(), n - 1);
                assert!(is_well_placed(&fam).unwrap());
                let rel = standard_relation(&fam).unwrap();
                assert!(rel.k_minus > 0);
            }
        }
    }

    #[test]
    fn barycenter_profile_predicate() {
        let mut f = Fuzzer::new(9);
        for n in 2..=4usize {
            let fam = f.barycenter(n).unwrap();
            assert_eq!(fam.rank(), n - 1);
            assert!(!is_well_placed(&fam).unwrap());
        }
    }

    #[test]
    fn cocycle_profile_predicate() {
        let mut f = Fuzzer::new(11);
        for n in 2..=3usize {
            let fam = f.cocycle_generic(n).unwrap();
            assert_eq!(fam.len(), n + 1);
            for j in 0..=n {
                assert_eq!(fam.omit(j).rank(), n);
            }
        }
    }
}
