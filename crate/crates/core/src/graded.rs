//! Brute-force multigraded Hilbert function.
//!
//! The degree-`a` piece of the ideal is spanned by the products
//! `relation * monomial` with `deg(relation) + deg(monomial) = a`, since the
//! ideal is generated in degrees `e_i + e_j`. Its rank against the monomials
//! of degree `a` gives the graded dimension of the quotient.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{rank, rank_dense_modp, rank_integer, SparseRow};
use crate::monomial::{Grading, Monomial, MonomialOrder};
use crate::presentation::PresentationSpec;
use crate::scalar::{rational_to_fp, Field, Fp, PrimeModulus, Rational, ALTERNATE_PRIMES};

/// Multidegree `a = (a_1, ..., a_n)`. Ordered by total degree, then
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeVector(pub Vec<u32>);

impl DegreeVector {
    pub fn zero(n: usize) -> Self {
        DegreeVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut a = vec![0; n];
        a[i] = 1;
        DegreeVector(a)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn checked_sub(&self, other: &DegreeVector) -> Option<DegreeVector> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(DegreeVector)
    }

    /// All degree vectors with `n` entries and total degree exactly `d`,
    /// lexicographically decreasing.
    pub fn of_total(n: usize, d: u32) -> Vec<DegreeVector> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<DegreeVector>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(DegreeVector(prefix.clone()));
                prefix.pop();
                return;
            }
            for x in (0..=d).rev() {
                prefix.push(x);
                rec(n, d - x, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(DegreeVector(Vec::new()));
            }
            return out;
        }
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// All degree vectors with total degree at most `max_total`, sorted.
    pub fn up_to_total(n: usize, max_total: u32) -> Vec<DegreeVector> {
        let mut v: Vec<DegreeVector> = (0..=max_total).flat_map(|d| Self::of_total(n, d)).collect();
        v.sort();
        v
    }
}

impl Ord for DegreeVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DegreeVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn monomials_in_block(vars: &[usize], d: u32) -> Vec<Vec<(usize, u32)>> {
    if vars.is_empty() {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let (first, rest) = (vars[0], &vars[1..]);
    for e in (0..=d).rev() {
        for mut tail in monomials_in_block(rest, d - e) {
            if e > 0 {
                tail.insert(0, (first, e));
            }
            out.push(tail);
        }
    }
    out
}

/// Number of monomials of degree `a`: `prod_i C(a_i + d_i - 1, d_i - 1)`.
pub fn monomial_count<F: Field>(spec: &PresentationSpec<F>, a: &DegreeVector) -> u128 {
    let sizes = spec.grading().block_sizes();
    a.0.iter()
        .zip(sizes)
        .map(|(&ai, d)| {
            if d == 0 {
                return (ai == 0) as u128;
            }
            let (top, k) = (ai as u128 + d as u128 - 1, d as u128 - 1);
            (0..k).fold(1u128, |acc, i| acc * (top - i) / (i + 1))
        })
        .product()
}

/// All monomials of multidegree `a`, strictly increasing in `order`.
pub fn enumerate_monomials<F: Field>(
    spec: &PresentationSpec<F>,
    a: &DegreeVector,
    order: &MonomialOrder,
) -> Vec<Monomial> {
    assert_eq!(a.len(), spec.nblocks(), "degree vector has the wrong block count");
    monomials_of_degree(spec.grading(), a, order)
}

/// Same as [`enumerate_monomials`] for a bare grading.
pub fn monomials_of_degree(g: &Grading, a: &DegreeVector, order: &MonomialOrder) -> Vec<Monomial> {
    let mut partial: Vec<Vec<(usize, u32)>> = vec![Vec::new()];
    for (b, &ab) in a.0.iter().enumerate() {
        let block = monomials_in_block(&g.block_vars(b), ab);
        let mut next = Vec::with_capacity(partial.len() * block.len());
        for p in &partial {
            for q in &block {
                let mut v = p.clone();
                v.extend_from_slice(q);
                next.push(v);
            }
        }
        partial = next;
    }
    let mut monos: Vec<Monomial> = partial.iter().map(|p| Monomial::from_exponents(p, g)).collect();
    monos.sort_by(|x, y| order.compare(x, y));
    monos
}

/// The degree-`a` piece of the ideal as a matrix: one row per product of a
/// relation with a monomial, one column per monomial of degree `a`.
#[derive(Clone, Debug)]
pub struct SliceMatrix<F: Field> {
    pub degree: DegreeVector,
    pub columns: Vec<Monomial>,
    pub rows: Vec<SparseRow<F>>,
}

impl<F: Field> SliceMatrix<F> {
    pub fn build(spec: &PresentationSpec<F>, a: &DegreeVector) -> Self {
        let order = MonomialOrder::grevlex();
        let columns = enumerate_monomials(spec, a, &order);
        let index: HashMap<&Monomial, usize> = columns.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let n = spec.nblocks();
        let mut rows = Vec::new();
        let mut cofactor_cache: HashMap<DegreeVector, Vec<Monomial>> = HashMap::new();
        for rel in spec.relations() {
            let (i, j) = rel.pair;
            let mut eij = DegreeVector::zero(n);
            eij.0[i - 1] += 1;
            eij.0[j - 1] += 1;
            let Some(rest) = a.checked_sub(&eij) else { continue };
            let cofactors =
                cofactor_cache.entry(rest.clone()).or_insert_with(|| enumerate_monomials(spec, &rest, &order));
            for mono in cofactors.iter() {
                let mut row: SparseRow<F> = rel
                    .poly
                    .terms()
                    .iter()
                    .map(|(t, c)| (index[&t.mul(mono)], c.clone()))
                    .collect();
                row.sort_by_key(|e| e.0);
                rows.push(row);
            }
        }
        SliceMatrix { degree: a.clone(), columns, rows }
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Rank over the coefficient field of the presentation.
    pub fn rank(&self, ctx: &F::Context) -> usize {
        rank(ctx, self.rows.iter().cloned())
    }
}

impl SliceMatrix<Rational> {
    fn integer_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(c, x)| {
                        assert!(x.is_integer(), "relations have integer coefficients");
                        (*c, x.numer().clone())
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact rank over the rationals (fraction-free).
    pub fn rank_rational(&self) -> usize {
        rank_integer(self.integer_rows())
    }

    /// Rank modulo `p`; dense below the size threshold, sparse above.
    pub fn rank_modp(&self, p: PrimeModulus) -> usize {
        if self.nrows() * self.ncols() <= DENSE_ENTRY_LIMIT {
            let mut dense = vec![vec![0u64; self.ncols()]; self.nrows()];
            for (r, row) in self.rows.iter().enumerate() {
                for (c, x) in row {
                    dense[r][*c] = rational_to_fp(x, &p).expect("integer entries").residue();
                }
            }
            rank_dense_modp(dense, p)
        } else {
            rank::<Fp>(
                &p,
                self.rows.iter().map(|r| r.iter().map(|(c, x)| (*c, rational_to_fp(x, &p).unwrap())).collect()),
            )
        }
    }
}

/// Slices with at most this many entries use dense elimination.
pub const DENSE_ENTRY_LIMIT: usize = 10_000_000;

/// Slices up to this many columns get a rational verification pass.
pub const RATIONAL_CHECK_COLUMNS: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "prime")]
#[derive(Default)]
pub enum RankStrategy {
    /// Modular rank with a rational verification pass on small slices.
    #[default]
    Verified,
    /// Modular rank only.
    Modular(u64),
    /// Exact rational rank only.
    Rational,
}


/// Outcome of one slice computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceResult {
    pub degree: DegreeVector,
    pub monomials: usize,
    pub rows: usize,
    pub rank: usize,
    pub dim: usize,
    pub rank_modp: Option<usize>,
    pub rank_rational: Option<usize>,
    /// Primes at which the modular rank disagreed with the rational one.
    pub bad_primes: Vec<u64>,
}

/// `#monomials(a) - rank(slice(a))` under the given rank strategy.
pub fn graded_dim_with(spec: &PresentationSpec<Rational>, a: &DegreeVector, strategy: &RankStrategy) -> SliceResult {
    let slice = SliceMatrix::build(spec, a);
    let mut res = SliceResult {
        degree: a.clone(),
        monomials: slice.ncols(),
        rows: slice.nrows(),
        rank: 0,
        dim: 0,
        rank_modp: None,
        rank_rational: None,
        bad_primes: Vec::new(),
    };
    match strategy {
        RankStrategy::Rational => {
            let r = slice.rank_rational();
            res.rank_rational = Some(r);
            res.rank = r;
        }
        RankStrategy::Modular(p) => {
            let r = slice.rank_modp(PrimeModulus::new(*p).expect("validated prime"));
            res.rank_modp = Some(r);
            res.rank = r;
        }
        RankStrategy::Verified => {
            let mut r = slice.rank_modp(PrimeModulus::default());
            res.rank_modp = Some(r);
            if slice.ncols() <= RATIONAL_CHECK_COLUMNS {
                let exact = slice.rank_rational();
                res.rank_rational = Some(exact);
                let mut primes = ALTERNATE_PRIMES.iter();
                let mut current = crate::scalar::DEFAULT_PRIME;
                while r != exact {
                    res.bad_primes.push(current);
                    match primes.next() {
                        Some(&p) => {
                            current = p;
                            r = slice.rank_modp(PrimeModulus::new(p).unwrap());
                        }
                        None => break,
                    }
                }
                r = exact;
            }
            res.rank = r;
        }
    }
    res.dim = res.monomials - res.rank;
    res
}

/// Graded dimension over the presentation's own field.
pub fn graded_dim<F: Field>(spec: &PresentationSpec<F>, a: &DegreeVector) -> usize {
    let slice = SliceMatrix::build(spec, a);
    slice.ncols() - slice.rank(spec.context())
}

/// Brute-force Hilbert function on a list of degrees, in parallel; the
/// output order matches the input order.
pub fn hilbert_table(
    spec: &PresentationSpec<Rational>,
    degrees: &[DegreeVector],
    strategy: &RankStrategy,
) -> Vec<SliceResult> {
    degrees.par_iter().map(|a| graded_dim_with(spec, a, strategy)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{build_an, build_bnm, PivotScheme};

    fn an(n: usize) -> PresentationSpec<Rational> {
        build_an(&(), n, PivotScheme::cyclic(n)).unwrap()
    }

    fn dv(a: &[u32]) -> DegreeVector {
        DegreeVector(a.to_vec())
    }

    #[test]
    fn enumeration_counts() {
        let o = MonomialOrder::grevlex();
        assert_eq!(enumerate_monomials(&an(4), &dv(&[1, 1, 0, 0]), &o).len(), 4);
        assert_eq!(enumerate_monomials(&an(5), &dv(&[2, 0, 0, 0, 0]), &o).len(), 6);
        for a in DegreeVector::up_to_total(3, 4) {
            assert_eq!(enumerate_monomials(&an(3), &a, &o).len(), 1);
        }
        let s = an(5);
        for a in DegreeVector::up_to_total(5, 3) {
            assert_eq!(enumerate_monomials(&s, &a, &o).len() as u128, monomial_count(&s, &a));
        }
    }

    #[test]
    fn enumeration_strictly_increasing() {
        let s = an(5);
        for o in [MonomialOrder::grevlex(), MonomialOrder::lex()] {
            let ms = enumerate_monomials(&s, &dv(&[2, 1, 0, 1, 0]), &o);
            assert!(ms.windows(2).all(|w| o.compare(&w[0], &w[1]) == Ordering::Less));
        }
    }

    #[test]
    fn anchor_dimensions() {
        assert_eq!(graded_dim(&an(4), &dv(&[1, 1, 0, 0])), 3);
        assert_eq!(graded_dim(&an(5), &dv(&[1, 1, 0, 0, 0])), 7);
        assert_eq!(graded_dim(&an(4), &dv(&[2, 1, 0, 0])), 4);
    }

    #[test]
    fn single_relation_slice_rank() {
        let s = an(4);
        let slice = SliceMatrix::build(&s, &dv(&[1, 1, 0, 0]));
        assert_eq!(slice.nrows(), 1);
        assert_eq!(slice.rank(&()), 1);
        assert_eq!(slice.rank_rational(), 1);
        assert_eq!(slice.rank_modp(PrimeModulus::default()), 1);
    }

    #[test]
    fn block_degree_is_n_minus_2() {
        for n in 3..=7 {
            let s = an(n);
            for i in 0..n {
                assert_eq!(graded_dim(&s, &DegreeVector::unit(n, i)), n - 2);
            }
        }
    }

    #[test]
    fn verified_strategy_agrees() {
        let s = build_bnm::<Rational>(&(), 3, 1).unwrap();
        let r = graded_dim_with(&s, &dv(&[1, 1, 1]), &RankStrategy::Verified);
        assert_eq!(r.rank_modp, r.rank_rational);
        assert!(r.bad_primes.is_empty());
        assert_eq!(r.dim, 4);
    }

    #[test]
    fn degree_vector_order() {
        let v = DegreeVector::up_to_total(2, 2);
        let shown: Vec<String> = v.iter().map(|a| a.to_string()).collect();
        assert_eq!(shown, ["(0,0)", "(0,1)", "(1,0)", "(0,2)", "(1,1)", "(2,0)"]);
    }
}
