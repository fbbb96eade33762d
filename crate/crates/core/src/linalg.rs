//! Exact rank and nullspace computations.
//!
//! * [`Echelon`]: incremental sparse row echelon form over any [`Field`].
//! * [`rank_integer`]: fraction-free elimination on integer rows with
//!   content removal, for exact ranks over the rationals.
//! * [`rank_dense_modp`]: dense Gaussian elimination on raw residues.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::scalar::{Field, PrimeModulus};

pub type SparseRow<F> = Vec<(usize, F)>;

/// Row echelon form built one row at a time. Stored rows are monic with
/// pairwise distinct leading columns.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    ctx: F::Context,
    rows: Vec<SparseRow<F>>,
    pivot_row: HashMap<usize, usize>,
}

fn axpy<F: Field>(target: &SparseRow<F>, c: &F, source: &SparseRow<F>) -> SparseRow<F> {
    // target - c * source
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        if j == source.len() || (i < target.len() && target[i].0 < source[j].0) {
            out.push(target[i].clone());
            i += 1;
        } else if i == target.len() || source[j].0 < target[i].0 {
            out.push((source[j].0, source[j].1.mul_ref(c).neg_ref()));
            j += 1;
        } else {
            let v = target[i].1.sub_ref(&source[j].1.mul_ref(c));
            if !v.is_zero() {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<F: Field> Echelon<F> {
    pub fn new(ctx: &F::Context) -> Self {
        Echelon { ctx: ctx.clone(), rows: Vec::new(), pivot_row: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Leading-entry reduction against the stored rows.
    pub fn reduce(&self, mut row: SparseRow<F>) -> SparseRow<F> {
        row.retain(|(_, c)| !c.is_zero());
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        let mut start = 0;
        while start < row.len() {
            let (col, c) = row[start].clone();
            match self.pivot_row.get(&col) {
                Some(&k) => row = axpy(&row, &c, &self.rows[k]),
                None => start += 1,
            }
            // entries before `start` have no pivot; keep scanning after them
            while start < row.len() && !self.pivot_row.contains_key(&row[start].0) {
                start += 1;
            }
        }
        row
    }

    /// Adds a row (columns strictly increasing). Returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow<F>) -> bool {
        let mut row = row;
        row.retain(|(_, c)| !c.is_zero());
        // only the leading entry must avoid existing pivots
        loop {
            let Some((col, c)) = row.first().cloned() else { return false };
            match self.pivot_row.get(&col) {
                Some(&k) => row = axpy(&row, &c, &self.rows[k]),
                None => break,
            }
        }
        let inv = row[0].1.inv().expect("nonzero leading entry");
        for e in row.iter_mut() {
            e.1 = e.1.mul_ref(&inv);
        }
        self.pivot_row.insert(row[0].0, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn rows(&self) -> &[SparseRow<F>] {
        &self.rows
    }

    pub fn context(&self) -> &F::Context {
        &self.ctx
    }
}

/// Rank of a list of sparse rows (columns strictly increasing in each row).
pub fn rank<F: Field>(ctx: &F::Context, rows: impl IntoIterator<Item = SparseRow<F>>) -> usize {
    let mut e = Echelon::new(ctx);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of `{x : M x = 0}` for a dense matrix with `ncols` columns.
pub fn nullspace<F: Field>(ctx: &F::Context, rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&k| !m[k][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = x.mul_ref(&inv);
        }
        for k in 0..m.len() {
            if k != r && !m[k][col].is_zero() {
                let c = m[k][col].clone();
                for x in 0..ncols {
                    let v = m[k][x].sub_ref(&c.mul_ref(&m[r][x]));
                    m[k][x] = v;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(ctx); ncols];
            v[f] = F::one(ctx);
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = m[k][f].neg_ref();
            }
            v
        })
        .collect()
}

fn primitive(row: &mut [(usize, BigInt)]) {
    let g = row.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for e in row.iter_mut() {
            e.1 /= &g;
        }
    }
}

/// Exact rank over the rationals of integer rows, by fraction-free
/// elimination: `row <- lead(pivot) * row - lead(row) * pivot`, followed by
/// division by the row content.
pub fn rank_integer(rows: impl IntoIterator<Item = Vec<(usize, BigInt)>>) -> usize {
    let mut stored: Vec<Vec<(usize, BigInt)>> = Vec::new();
    let mut pivot_row: HashMap<usize, usize> = HashMap::new();
    for mut row in rows {
        row.retain(|(_, x)| !x.is_zero());
        primitive(&mut row);
        loop {
            let Some((col, lead)) = row.first().cloned() else { break };
            let Some(&k) = pivot_row.get(&col) else { break };
            let piv = &stored[k];
            let pl = &piv[0].1;
            let mut out = Vec::with_capacity(row.len() + piv.len());
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < piv.len() {
                if j == piv.len() || (i < row.len() && row[i].0 < piv[j].0) {
                    out.push((row[i].0, &row[i].1 * pl));
                    i += 1;
                } else if i == row.len() || piv[j].0 < row[i].0 {
                    out.push((piv[j].0, -(&piv[j].1 * &lead)));
                    j += 1;
                } else {
                    let v = &row[i].1 * pl - &piv[j].1 * &lead;
                    if !v.is_zero() {
                        out.push((row[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            row = out;
            primitive(&mut row);
        }
        if let Some((col, lead)) = row.first().cloned() {
            if lead.is_negative() {
                for e in row.iter_mut() {
                    e.1 = -e.1.clone();
                }
            }
            pivot_row.insert(col, stored.len());
            stored.push(row);
        }
    }
    stored.len()
}

/// Rank of a dense residue matrix modulo `p`. Entries must lie in `[0, p)`.
pub fn rank_dense_modp(mut m: Vec<Vec<u64>>, p: PrimeModulus) -> usize {
    let p = p.get();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let inv = |a: u64| {
        let (mut b, mut e, mut r) = (a, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&k| m[k][col] != 0) else { continue };
        m.swap(rank, piv);
        let iv = inv(m[rank][col]);
        for x in m[rank][col..].iter_mut() {
            *x = *x * iv % p;
        }
        let (head, tail) = m.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            let c = row[col];
            if c == 0 {
                continue;
            }
            for x in col..ncols {
                if prow[x] != 0 {
                    row[x] = (row[x] + (p - c) * prow[x]) % p;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Rational};

    fn dense_to_sparse<F: Field>(rows: &[Vec<F>]) -> Vec<SparseRow<F>> {
        rows.iter()
            .map(|r| r.iter().cloned().enumerate().filter(|(_, x)| !Field::is_zero(x)).collect())
            .collect()
    }

    #[test]
    fn trivial_ranks() {
        let zero: Vec<Vec<Rational>> = vec![vec![Rational::from_i64(&(), 0); 4]; 3];
        assert_eq!(rank(&(), dense_to_sparse(&zero)), 0);
        let id: Vec<Vec<Rational>> = (0..5)
            .map(|i| (0..5).map(|j| Rational::from_i64(&(), (i == j) as i64)).collect())
            .collect();
        assert_eq!(rank(&(), dense_to_sparse(&id)), 5);
        assert_eq!(rank_integer(Vec::<Vec<(usize, BigInt)>>::new()), 0);
    }

    #[test]
    fn backends_agree_on_dependent_rows() {
        let ints: Vec<Vec<i64>> = vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0], vec![1, 3, 4, 4]];
        let q: Vec<Vec<Rational>> =
            ints.iter().map(|r| r.iter().map(|&x| Rational::from_i64(&(), x)).collect()).collect();
        assert_eq!(rank(&(), dense_to_sparse(&q)), 2);
        let big = ints.iter().map(|r| {
            r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(c, &x)| (c, BigInt::from(x))).collect()
        });
        assert_eq!(rank_integer(big), 2);
        let p = PrimeModulus::default();
        let dense: Vec<Vec<u64>> =
            ints.iter().map(|r| r.iter().map(|&x| Fp::new(p, x).residue()).collect()).collect();
        assert_eq!(rank_dense_modp(dense, p), 2);
    }

    #[test]
    fn bad_prime_drops_rank() {
        // det = 7
        let p7 = PrimeModulus::new(7).unwrap();
        let m = vec![vec![2, 1], vec![1, 4]];
        assert_eq!(rank_dense_modp(m.clone(), p7), 1);
        assert_eq!(rank_dense_modp(m, PrimeModulus::default()), 2);
    }

    #[test]
    fn nullspace_is_kernel() {
        let q = |x: i64| Rational::from_i64(&(), x);
        let rows = vec![vec![q(1), q(1), q(0), q(2)], vec![q(0), q(1), q(1), q(1)]];
        let ns = nullspace(&(), &rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let dot = r.iter().zip(v).fold(q(0), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)));
                assert!(Field::is_zero(&dot));
            }
        }
    }

    #[test]
    fn echelon_reduce_gives_zero_for_members() {
        let q = |x: i64| Rational::from_i64(&(), x);
        let mut e = Echelon::new(&());
        e.insert(vec![(0, q(1)), (2, q(3))]);
        e.insert(vec![(1, q(2)), (2, q(1))]);
        assert!(e.reduce(vec![(0, q(2)), (1, q(4)), (2, q(8))]).is_empty());
        assert!(!e.reduce(vec![(2, q(1))]).is_empty());
    }
}
