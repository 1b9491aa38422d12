use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{Int, Rat};

/// Determinant of a square rational matrix (rows) by fraction-free-ish
/// Gaussian elimination; exact.
pub fn det_rat(m: &[Vec<Rat>]) -> Result<Rat> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("determinant needs a square matrix".into()));
    }
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::from_integer(Int::from(1));
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Ok(Rat::zero()),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    Ok(det)
}

pub fn det_int(m: &[Vec<Int>]) -> Result<Int> {
    let rat: Vec<Vec<Rat>> = m
        .iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let d = det_rat(&rat)?;
    debug_assert!(d.denom().is_one());
    Ok(d.to_integer())
}

/// Rank over Q of a rational matrix given by rows.
pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot = match (row..a.len()).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        a.swap(pivot, row);
        let p = a[row][col].clone();
        for r in row + 1..a.len() {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..cols {
                let sub = &f * &a[row][c];
                a[r][c] -= sub;
            }
        }
        rank += 1;
        row += 1;
        if row == a.len() {
            break;
        }
    }
    rank
}

pub fn rank_int(rows: &[Vec<Int>]) -> usize {
    let rat: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    rank_rat(&rat)
}

/// Primitive part of a nonzero integer vector: returns `(v/g, g)` with
/// `g = gcd > 0`, so the direction is preserved.
pub fn primitive_part(v: &[Int]) -> Result<(Vec<Int>, Int)> {
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok((v.iter().map(|x| x / &g).collect(), g))
}

pub fn is_primitive(v: &[Int]) -> bool {
    matches!(primitive_part(v), Ok((_, g)) if g == Int::from(1))
}

/// Adjugate (transpose of the cofactor matrix) of a square integer matrix,
/// so that `m * adj(m) = det(m) * I`.
pub fn adjugate(m: &[Vec<Int>]) -> Result<Vec<Vec<Int>>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("adjugate needs a square matrix".into()));
    }
    let mut adj = vec![vec![Int::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // minor deleting row i, column j
            let minor: Vec<Vec<Int>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let cof = if minor.is_empty() {
                Int::from(1)
            } else {
                det_int(&minor)?
            };
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = cof * Int::from(sign);
        }
    }
    Ok(adj)
}

/// Solution of `A x = b` over the integers: an optional particular solution
/// plus a basis of the integer kernel lattice of `A` (saturated, i.e. the
/// full lattice `{x in Z^n : A x = 0}`).
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub particular: Option<Vec<Int>>,
    pub kernel: Vec<Vec<Int>>,
}

/// Column-style Hermite reduction: computes unimodular U with A·U in column
/// echelon form, then solves by forward substitution.
pub fn hnf_solve(a: &[Vec<Int>], b: &[Int]) -> Result<LinearSolution> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::Shape("hnf_solve: rhs length mismatch".into()));
    }
    let n = if m == 0 { 0 } else { a[0].len() };
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("hnf_solve: ragged matrix".into()));
    }

    let mut h: Vec<Vec<Int>> = a.to_vec();
    let mut u: Vec<Vec<Int>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::from(1) } else { Int::zero() })
                .collect()
        })
        .collect();

    let col_op_sub = |h: &mut Vec<Vec<Int>>, u: &mut Vec<Vec<Int>>, src: usize, dst: usize, q: &Int| {
        for row in h.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
        for row in u.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
    };
    let col_swap = |h: &mut Vec<Vec<Int>>, u: &mut Vec<Vec<Int>>, i: usize, j: usize| {
        for row in h.iter_mut() {
            row.swap(i, j);
        }
        for row in u.iter_mut() {
            row.swap(i, j);
        }
    };

    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut col = 0;
    for row in 0..m {
        if col >= n {
            break;
        }
        // gcd-reduce columns col..n against each other in row `row`
        loop {
            let mut nz: Vec<usize> = (col..n).filter(|&c| !h[row][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            if nz.len() == 1 {
                let c = nz[0];
                if c != col {
                    col_swap(&mut h, &mut u, c, col);
                }
                break;
            }
            // pick the column with smallest |entry| and reduce the others
            nz.sort_by(|&x, &y| h[row][x].abs().cmp(&h[row][y].abs()));
            let small = nz[0];
            for &c in &nz[1..] {
                let q = h[row][c].div_floor(&h[row][small]);
                if !q.is_zero() {
                    col_op_sub(&mut h, &mut u, small, c, &q);
                }
            }
        }
        if !h[row][col].is_zero() {
            if h[row][col].is_negative() {
                for r in h.iter_mut() {
                    r[col] = -r[col].clone();
                }
                for r in u.iter_mut() {
                    r[col] = -r[col].clone();
                }
            }
            pivots.push((row, col));
            col += 1;
        }
    }

    let kernel: Vec<Vec<Int>> = (col..n)
        .map(|c| u.iter().map(|r| r[c].clone()).collect())
        .collect();

    // forward substitution on the echelon matrix
    let mut y = vec![Int::zero(); n];
    let mut ok = true;
    for &(r, c) in &pivots {
        let mut acc = b[r].clone();
        for &(_, cj) in pivots.iter().take_while(|&&(rj, _)| rj < r) {
            acc -= &h[r][cj] * &y[cj];
        }
        let (q, rem) = acc.div_rem(&h[r][c]);
        if !rem.is_zero() {
            ok = false;
            break;
        }
        y[c] = q;
    }
    if ok {
        // rows without a pivot must be consistent
        let pivot_rows: Vec<usize> = pivots.iter().map(|&(r, _)| r).collect();
        for r in 0..m {
            if pivot_rows.contains(&r) {
                continue;
            }
            let mut acc = Int::zero();
            for &(_, c) in &pivots {
                acc += &h[r][c] * &y[c];
            }
            if acc != b[r] {
                ok = false;
                break;
            }
        }
    }
    let particular = if ok {
        Some(
            (0..n)
                .map(|i| {
                    let mut acc = Int::zero();
                    for (j, yj) in y.iter().enumerate() {
                        if !yj.is_zero() {
                            acc += &u[i][j] * yj;
                        }
                    }
                    acc
                })
                .collect(),
        )
    } else {
        None
    };

    Ok(LinearSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn det_examples() {
        let m = vec![iv(&[2, -1]), iv(&[-1, 1])];
        assert_eq!(det_int(&m).unwrap(), int(1));
        let m = vec![iv(&[1, 2]), iv(&[2, 4])];
        assert_eq!(det_int(&m).unwrap(), int(0));
        let m = vec![iv(&[0, 1, 0]), iv(&[0, 0, 1]), iv(&[1, 0, 0])];
        assert_eq!(det_int(&m).unwrap(), int(1));
    }

    #[test]
    fn adjugate_identity() {
        let m = vec![iv(&[2, -1]), iv(&[-1, 1])];
        let adj = adjugate(&m).unwrap();
        assert_eq!(adj, vec![iv(&[1, 1]), iv(&[1, 2])]);
        // m * adj = det * I
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Int::zero();
                for k in 0..2 {
                    acc += &m[i][k] * &adj[k][j];
                }
                assert_eq!(acc, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn primitive_part_keeps_direction() {
        let (p, g) = primitive_part(&iv(&[0, 0, -5])).unwrap();
        assert_eq!(p, iv(&[0, 0, -1]));
        assert_eq!(g, int(5));
        assert!(primitive_part(&iv(&[0, 0])).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_int(&[iv(&[1, 0]), iv(&[0, 1])]), 2);
        assert_eq!(rank_int(&[iv(&[1, 2]), iv(&[2, 4])]), 1);
        assert_eq!(
            rank_int(&[iv(&[1, 0, 0, 0]), iv(&[0, 1, 0, 0]), iv(&[0, 0, -1, 0]), iv(&[0, 1, 1, 0])]),
            3
        );
    }

    #[test]
    fn hnf_solve_diophantine() {
        // 2x + 4y = 6 has integer solutions; kernel = span (2, -1)
        let sol = hnf_solve(&[iv(&[2, 4])], &iv(&[6])).unwrap();
        let p = sol.particular.unwrap();
        assert_eq!(&p[0] * 2 + &p[1] * 4, int(6));
        assert_eq!(sol.kernel.len(), 1);
        let k = &sol.kernel[0];
        assert_eq!(&k[0] * 2 + &k[1] * 4, int(0));
        assert!(primitive_part(k).unwrap().1 == int(1));

        // 2x + 4y = 3 has none
        let sol = hnf_solve(&[iv(&[2, 4])], &iv(&[3])).unwrap();
        assert!(sol.particular.is_none());
    }

    #[test]
    fn hnf_solve_kernel_saturated() {
        // kernel of [[1,0,0],[0,2,4]] over Z is spanned by (0,2,-1): saturated rank 1
        let sol = hnf_solve(&[iv(&[1, 0, 0]), iv(&[0, 2, 4])], &iv(&[0, 0])).unwrap();
        assert_eq!(sol.kernel.len(), 1);
        let k = &sol.kernel[0];
        assert_eq!(k[0], int(0));
        assert_eq!(&k[1] * 2 + &k[2] * 4, int(0));
        assert!(primitive_part(k).unwrap().1 == int(1));
    }

    #[test]
    fn hnf_solve_inconsistent_row() {
        let sol = hnf_solve(&[iv(&[1, 1]), iv(&[2, 2])], &iv(&[1, 3])).unwrap();
        assert!(sol.particular.is_none());
    }
}
