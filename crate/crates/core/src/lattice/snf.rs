//! Smith and Hermite normal forms over the integers.
//!
//! `smith_normal_form` returns unimodular `U`, `V` with `U * M * V = D`,
//! together with `U^{-1}` so that callers can lift quotient generators back
//! into the ambient lattice. Pivot choice is the smallest nonzero absolute
//! value in the active block, ties broken by lowest `(row, col)`; this keeps
//! the witnesses deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row[target] += k * row[source]
    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_row_multiple(target, source, k);
        self.u.add_row_multiple(target, source, k);
        self.u_inv.add_col_multiple(source, target, &-k);
    }

    /// col[target] += k * col[source]
    fn add_col(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_col_multiple(target, source, k);
        self.v.add_col_multiple(target, source, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn smallest_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                    best = Some(((i, j), ax));
                }
            }
        }
        best.map(|(pos, _)| pos)
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = r.smallest_entry(t) else {
            break;
        };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let pivot = r.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if r.a[(i, t)].is_zero() {
                    continue;
                }
                let q = r.a[(i, t)].div_floor(&pivot);
                r.add_row(i, t, &-q);
                clean &= r.a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if r.a[(t, j)].is_zero() {
                    continue;
                }
                let q = r.a[(t, j)].div_floor(&pivot);
                r.add_col(j, t, &-q);
                clean &= r.a[(t, j)].is_zero();
            }
            if !clean {
                let (pi, pj) = r.smallest_entry(t).expect("nonzero entries remain");
                r.swap_rows(t, pi);
                r.swap_cols(t, pj);
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let offending = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !r.a[(i, j)].is_multiple_of(&pivot));
            match offending {
                Some((i, _)) => r.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.a[(t, t)].is_negative() {
            r.negate_row(t);
        }
        t += 1;
    }
    Smith {
        u: r.u,
        u_inv: r.u_inv,
        d: r.a,
        v: r.v,
        rank: t,
    }
}

/// Rank of an integer matrix.
pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank
}

/// Canonical Hermite basis of the lattice spanned by `gens`.
///
/// The result is in row echelon form: pivots positive and strictly moving
/// right, entries above each pivot reduced into `[0, pivot)`. Two generating
/// sets span the same lattice iff their Hermite bases coincide.
pub fn hermite_basis(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = gens
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    for g in &rows {
        assert_eq!(g.len(), dim);
    }
    let mut r = 0;
    for c in 0..dim {
        if r == rows.len() {
            break;
        }
        // Euclid on column c among rows r.. until a single nonzero remains.
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if !rows[i][c].is_zero()
                    && best.is_none_or(|b| rows[i][c].abs() < rows[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                done &= rows[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            let pivot_row = rows[r].clone();
            for i in 0..r {
                let q = rows[i][c].div_floor(&pivot_row[c]);
                if !q.is_zero() {
                    for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * p;
                    }
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows.retain(|g| g.iter().any(|x| !x.is_zero()));
    rows
}

/// Hermite basis returned as the columns of an `dim × k` matrix.
pub fn lattice_basis(gens: &[Vec<BigInt>], dim: usize) -> IntMatrix {
    let basis = hermite_basis(gens, dim);
    IntMatrix::from_cols(&basis, dim)
}

/// Reduces `v` modulo the lattice with Hermite basis `basis`, giving the
/// canonical representative of the coset `v + L`.
pub fn reduce_mod_lattice(v: &[BigInt], basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut v = v.to_vec();
    for row in basis {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let q = v[c].div_floor(&row[c]);
        if !q.is_zero() {
            for (x, p) in v.iter_mut().zip(row) {
                *x -= &q * p;
            }
        }
    }
    v
}

/// Basis (as columns, Hermite-canonical) of `{x ∈ Z^cols : M x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let gens: Vec<Vec<BigInt>> = (s.rank..m.cols()).map(|j| s.v.col(j)).collect();
    lattice_basis(&gens, m.cols())
}

/// Basis (as columns, Hermite-canonical) of `{x ∈ Z^cols : M x ≡ 0 mod n}`.
pub fn kernel_mod(m: &IntMatrix, n: &BigInt) -> IntMatrix {
    assert!(n.is_positive(), "modulus must be positive");
    let s = smith_normal_form(m);
    let gens: Vec<Vec<BigInt>> = (0..m.cols())
        .map(|j| {
            let scale = if j < s.rank {
                n / s.d[(j, j)].gcd(n)
            } else {
                BigInt::one()
            };
            s.v.col(j).into_iter().map(|x| x * &scale).collect()
        })
        .collect();
    lattice_basis(&gens, m.cols())
}

/// Some integer solution of `M x = b`, if one exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), b.len());
    let s = smith_normal_form(m);
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, c) in ub.iter().enumerate() {
        if i < s.rank {
            let d = &s.d[(i, i)];
            if !c.is_multiple_of(d) {
                return None;
            }
            y[i] = c / d;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Whether `v` lies in the column span of `m`.
pub fn in_column_span(m: &IntMatrix, v: &[BigInt]) -> bool {
    solve(m, v).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::int_vec;

    fn check(m: &IntMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "U M V = D for {m}");
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn zero_one_by_one() {
        let s = check(&IntMatrix::from_rows(&[vec![0]], 1));
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![0]], 1));
        assert_eq!(s.u, IntMatrix::identity(1));
        assert_eq!(s.v, IntMatrix::identity(1));
    }

    #[test]
    fn diagonal_two_three() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]], 2));
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![1, 0], vec![0, 6]], 2));
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
    }

    #[test]
    fn column_two_minus_two() {
        let s = check(&IntMatrix::from_rows(&[vec![2], vec![-2]], 1));
        assert_eq!(s.invariant_factors(), int_vec(&[2]));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = hermite_basis(&[int_vec(&[2, 0]), int_vec(&[0, 2])], 2);
        let b = hermite_basis(&[int_vec(&[2, 2]), int_vec(&[2, -2]), int_vec(&[0, 4])], 2);
        assert_eq!(a, vec![int_vec(&[2, 0]), int_vec(&[0, 2])]);
        assert_ne!(a, b);
        let c = hermite_basis(&[int_vec(&[4, 2]), int_vec(&[2, 2]), int_vec(&[0, 2])], 2);
        assert_eq!(a, c);
    }

    #[test]
    fn kernels() {
        let m = IntMatrix::from_rows(&[vec![1, -1]], 2);
        assert_eq!(integer_kernel(&m), IntMatrix::from_cols(&[int_vec(&[1, 1])], 2));
        // b of the Kazhdan-Patterson form mod 2 is the swap matrix.
        let b = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]], 2);
        let k = kernel_mod(&b, &BigInt::from(2));
        assert_eq!(k, IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]], 2));
    }

    #[test]
    fn solving() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![0, 6]], 2);
        let x = solve(&m, &int_vec(&[6, 6])).unwrap();
        assert_eq!(m.mul_vec(&x), int_vec(&[6, 6]));
        assert!(solve(&m, &int_vec(&[1, 0])).is_none());
    }

    #[test]
    fn reduce_against_hermite() {
        let basis = hermite_basis(&[int_vec(&[2])], 1);
        assert_eq!(reduce_mod_lattice(&int_vec(&[-1]), &basis), int_vec(&[1]));
        assert_eq!(reduce_mod_lattice(&int_vec(&[7]), &basis), int_vec(&[1]));
    }
}
