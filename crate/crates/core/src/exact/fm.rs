//! Fourier–Motzkin elimination over the rationals with strictness tracking:
//! a derived inequality is strict iff at least one of its parents is strict.

use num_traits::{Signed, Zero};

use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

/// `coeffs · x + constant  rel  0`
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
    pub rel: Rel,
}

impl Constraint {
    pub fn homogeneous(coeffs: Vec<Rat>, rel: Rel) -> Self {
        Constraint {
            coeffs,
            constant: Rat::zero(),
            rel,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct IneqSystem {
    pub constraints: Vec<Constraint>,
}

impl IneqSystem {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        IneqSystem { constraints }
    }

    pub fn and(mut self, other: &IneqSystem) -> Self {
        self.constraints.extend(other.constraints.iter().cloned());
        self
    }
}

/// Internal normal form: `coeffs · x + constant >= 0` (strict = `> 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
struct Row {
    coeffs: Vec<Rat>,
    constant: Rat,
    strict: bool,
}

impl Row {
    fn normalize(mut self) -> Self {
        // divide by the largest absolute coefficient to dedupe scalings
        let mut scale: Option<Rat> = None;
        for c in self.coeffs.iter().chain(std::iter::once(&self.constant)) {
            let a = c.abs();
            if !a.is_zero() && scale.as_ref().is_none_or(|s| &a > s) {
                scale = Some(a);
            }
        }
        if let Some(s) = scale {
            for c in self.coeffs.iter_mut() {
                *c /= &s;
            }
            self.constant /= &s;
        }
        self
    }
}

fn to_rows(sys: &IneqSystem) -> Vec<Row> {
    let mut rows = Vec::new();
    for c in &sys.constraints {
        let pos = || Row {
            coeffs: c.coeffs.clone(),
            constant: c.constant.clone(),
            strict: false,
        };
        let neg = || Row {
            coeffs: c.coeffs.iter().map(|x| -x).collect(),
            constant: -c.constant.clone(),
            strict: false,
        };
        match c.rel {
            Rel::Ge => rows.push(pos()),
            Rel::Gt => rows.push(Row { strict: true, ..pos() }),
            Rel::Le => rows.push(neg()),
            Rel::Lt => rows.push(Row { strict: true, ..neg() }),
            Rel::Eq => {
                rows.push(pos());
                rows.push(neg());
            }
        }
    }
    rows
}

/// Decide feasibility of the system over the rationals (equivalently the
/// reals, since all data are rational).
pub fn fm_feasible(sys: &IneqSystem) -> bool {
    let mut rows = to_rows(sys);
    if rows.is_empty() {
        return true;
    }
    let nvars = rows[0].coeffs.len();
    debug_assert!(rows.iter().all(|r| r.coeffs.len() == nvars));

    for var in 0..nvars {
        let mut lower: Vec<Row> = Vec::new(); // coeff > 0
        let mut upper: Vec<Row> = Vec::new(); // coeff < 0
        let mut keep: Vec<Row> = Vec::new();
        for r in rows.drain(..) {
            if r.coeffs[var].is_positive() {
                lower.push(r);
            } else if r.coeffs[var].is_negative() {
                upper.push(r);
            } else {
                keep.push(r);
            }
        }
        for lo in &lower {
            for up in &upper {
                let a = lo.coeffs[var].clone(); // > 0
                let b = -up.coeffs[var].clone(); // > 0
                // b * lo + a * up eliminates var
                let coeffs: Vec<Rat> = (0..nvars)
                    .map(|i| &b * &lo.coeffs[i] + &a * &up.coeffs[i])
                    .collect();
                let constant = &b * &lo.constant + &a * &up.constant;
                let row = Row {
                    coeffs,
                    constant,
                    strict: lo.strict || up.strict,
                }
                .normalize();
                if !keep.contains(&row) {
                    keep.push(row);
                }
            }
        }
        rows = keep;
    }

    rows.iter().all(|r| {
        debug_assert!(r.coeffs.iter().all(|c| c.is_zero()));
        if r.strict {
            r.constant.is_positive()
        } else {
            !r.constant.is_negative()
        }
    })
}
