//! Quadratic dual dimensions.
//!
//! For `A = T(V)/(R)` the dual `A^! = T(V*)/(R^perp)` has
//! `(A^!_k)* = intersection over s of V^{(x)s} (x) R (x) V^{(x)k-2-s}`.
//! A tensor lies in the `s`-th subspace iff every functional of `R^perp`
//! applied at slots `s, s+1` kills it, so the intersection is the kernel of
//! the stacked constraint rows. Everything splits by multidegree, and each
//! piece is handled separately over a prime field.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::graded::DegreeVector;
use crate::linalg::{nullspace, Echelon, SparseRow};
use crate::presentation::{binomial, build_an, tensor_relation_space, PivotScheme, TensorRelationSpace};
use crate::scalar::{Field, Fp, PrimeModulus, ALTERNATE_PRIMES, DEFAULT_PRIME};
use crate::series::{total_hilbert, uni_inverse};

/// Default cap on `dim(V)^k`.
pub const DEFAULT_TENSOR_BUDGET: u128 = 300_000;

/// Basis of `R^perp` grouped by the unordered block pair it lives on.
#[derive(Clone, Debug)]
pub struct Annihilator {
    dim_v: usize,
    block_of: Vec<usize>,
    nblocks: usize,
    /// `(min block, max block)` -> functionals as sparse `(x*dim_v + y, c)`.
    pieces: BTreeMap<(usize, usize), Vec<SparseRow<Fp>>>,
}

impl Annihilator {
    pub fn new(space: &TensorRelationSpace<Fp>, p: PrimeModulus) -> Self {
        let d = space.dim_v;
        let dense: Vec<Vec<Fp>> = space
            .vectors
            .iter()
            .map(|v| {
                let mut row = vec![Fp::new(p, 0); d * d];
                for (idx, c) in v {
                    row[*idx] = *c;
                }
                row
            })
            .collect();
        let mut pieces: BTreeMap<(usize, usize), Vec<SparseRow<Fp>>> = BTreeMap::new();
        for u in nullspace(&p, &dense, d * d) {
            let sparse: SparseRow<Fp> = u.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            let key = |idx: usize| {
                let (a, b) = (space.block_of[idx / d], space.block_of[idx % d]);
                (a.min(b), a.max(b))
            };
            let k = key(sparse[0].0);
            // a graded subspace has a homogeneous reduced echelon basis
            assert!(sparse.iter().all(|(i, _)| key(*i) == k), "R-perp basis vector is not homogeneous");
            pieces.entry(k).or_default().push(sparse);
        }
        Annihilator { dim_v: d, block_of: space.block_of.clone(), nblocks: space.nblocks, pieces }
    }

    pub fn dim(&self) -> usize {
        self.pieces.values().map(Vec::len).sum()
    }
}

/// All words of multidegree `a`, lexicographically sorted.
fn words_of_degree(ann: &Annihilator, a: &DegreeVector) -> Vec<Vec<u16>> {
    let by_block: Vec<Vec<u16>> = (0..ann.nblocks)
        .map(|b| (0..ann.dim_v).filter(|&v| ann.block_of[v] == b).map(|v| v as u16).collect())
        .collect();
    fn rec(by_block: &[Vec<u16>], left: &mut Vec<u32>, word: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if left.iter().all(|&x| x == 0) {
            out.push(word.clone());
            return;
        }
        // letters are visited in increasing id order, so output is sorted
        let mut letters: Vec<(u16, usize)> = Vec::new();
        for (b, vars) in by_block.iter().enumerate() {
            if left[b] > 0 {
                letters.extend(vars.iter().map(|&v| (v, b)));
            }
        }
        letters.sort_unstable();
        for (v, b) in letters {
            left[b] -= 1;
            word.push(v);
            rec(by_block, left, word, out);
            word.pop();
            left[b] += 1;
        }
    }
    let mut out = Vec::new();
    rec(&by_block, &mut a.0.clone(), &mut Vec::new(), &mut out);
    out
}

/// Constraint rows for slot `s` on the degree-`a` piece.
fn slot_rows(
    ann: &Annihilator,
    words: &[Vec<u16>],
    index: &HashMap<&[u16], usize>,
    s: usize,
) -> Vec<SparseRow<Fp>> {
    let d = ann.dim_v;
    let mut contexts: BTreeSet<(Vec<u16>, (usize, usize))> = BTreeSet::new();
    for w in words {
        let (x, y) = (ann.block_of[w[s] as usize], ann.block_of[w[s + 1] as usize]);
        let mut ctx = w.clone();
        ctx.drain(s..s + 2);
        contexts.insert((ctx, (x.min(y), x.max(y))));
    }
    let mut rows = Vec::new();
    let mut buf: Vec<u16> = Vec::new();
    for (ctx, piece) in contexts {
        let Some(funcs) = ann.pieces.get(&piece) else { continue };
        for u in funcs {
            let mut row: SparseRow<Fp> = u
                .iter()
                .map(|(idx, c)| {
                    buf.clear();
                    buf.extend_from_slice(&ctx[..s]);
                    buf.push((idx / d) as u16);
                    buf.push((idx % d) as u16);
                    buf.extend_from_slice(&ctx[s..]);
                    (index[buf.as_slice()], *c)
                })
                .collect();
            row.sort_by_key(|e| e.0);
            rows.push(row);
        }
    }
    rows
}

/// Dimension of the intersection over the given constraint slots, restricted
/// to multidegree `a`.
pub fn intersection_piece(ann: &Annihilator, a: &DegreeVector, slots: &[usize], p: PrimeModulus) -> u64 {
    let k = a.total() as usize;
    let words = words_of_degree(ann, a);
    if words.is_empty() {
        return 0;
    }
    let index: HashMap<&[u16], usize> = words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let per_slot: Vec<Vec<SparseRow<Fp>>> = slots
        .par_iter()
        .map(|&s| {
            assert!(s + 2 <= k, "slot {s} out of range for degree {k}");
            slot_rows(ann, &words, &index, s)
        })
        .collect();
    let mut ech = Echelon::new(&p);
    for rows in per_slot {
        for r in rows {
            ech.insert(r);
        }
    }
    (words.len() - ech.rank()) as u64
}

/// Intersection dimension in tensor degree `k` over the given slots.
pub fn intersection_dimension(ann: &Annihilator, k: u32, slots: &[usize], p: PrimeModulus) -> u64 {
    DegreeVector::of_total(ann.nblocks, k)
        .par_iter()
        .map(|a| intersection_piece(ann, a, slots, p))
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

fn check_budget(dim_v: usize, k: u32, budget: u128) -> Result<()> {
    let required = (dim_v as u128).checked_pow(k).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::Budget { required, budget, unit: "tensor coordinates" });
    }
    Ok(())
}

fn annihilator_for(n: usize, p: PrimeModulus) -> Result<Annihilator> {
    let spec = build_an(&p, n, PivotScheme::cyclic(n))?;
    Ok(Annihilator::new(&tensor_relation_space(&spec), p))
}

/// `dim A^!_k` for `A_n`, over `F_p`.
pub fn dual_dimension_at(n: usize, k: u32, p: PrimeModulus, budget: u128) -> Result<u64> {
    if n < 3 {
        return Err(usage(format!("koszul data needs n >= 3, got {n}")));
    }
    let dim_v = n * (n - 2);
    check_budget(dim_v, k, budget)?;
    match k {
        0 => Ok(1),
        1 => Ok(dim_v as u64),
        _ => {
            let ann = annihilator_for(n, p)?;
            let slots: Vec<usize> = (0..=k as usize - 2).collect();
            Ok(intersection_dimension(&ann, k, &slots, p))
        }
    }
}

/// `dim A^!_k` for `A_n` at the default prime and budget.
pub fn dual_dimension(n: usize, k: u32) -> Result<u64> {
    dual_dimension_at(n, k, PrimeModulus::default(), DEFAULT_TENSOR_BUDGET)
}

/// Coefficients of `1/h(-t)` up to `t^kmax`, `h` the total Hilbert series.
pub fn koszul_prediction(n: usize, kmax: u32) -> Result<Vec<BigInt>> {
    let h = total_hilbert(n, kmax)?;
    let alt: Vec<BigInt> = h.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect();
    uni_inverse(&alt, kmax as usize + 1)
}

/// `C(n(n-2), 2) + C(n,2)(n-3)`, the dimension of `R` for `A_n`.
pub fn relation_space_dimension(n: usize) -> u64 {
    let d = (n * (n - 2)) as u64;
    binomial(d, 2) + binomial(n as u64, 2) * (n as u64 - 3)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulRow {
    pub k: u32,
    /// Intersection dimension at the default prime.
    pub dual_dimension: u64,
    #[serde(serialize_with = "crate::series::serialize_bigint")]
    pub predicted: BigInt,
    pub matches: bool,
    /// `(prime, dimension)` for every prime tried; more than one only after
    /// a mismatch at the default prime.
    pub primes: Vec<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KoszulVerdict {
    Consistent { kmax: u32 },
    Discrepancy {
        k: u32,
        dual_dimension: u64,
        #[serde(serialize_with = "crate::series::serialize_bigint")]
        predicted: BigInt,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    pub n: usize,
    pub kmax: u32,
    pub dim_v: u64,
    pub dim_r: u64,
    /// `b_2` from the series equals `dim R` from the rank.
    pub b2_identity: bool,
    pub rows: Vec<KoszulRow>,
    pub verdict: KoszulVerdict,
}

pub fn koszul_report(n: usize, kmax: u32, budget: u128) -> Result<KoszulReport> {
    koszul_report_at(n, kmax, budget, PrimeModulus::new(DEFAULT_PRIME)?)
}

/// As [`koszul_report`] with `p0` as the first prime; a mismatch is rerun at
/// two other primes.
pub fn koszul_report_at(n: usize, kmax: u32, budget: u128, p0: PrimeModulus) -> Result<KoszulReport> {
    if n < 3 {
        return Err(usage(format!("koszul data needs n >= 3, got {n}")));
    }
    let dim_v = n * (n - 2);
    check_budget(dim_v, kmax, budget)?;
    let predicted = koszul_prediction(n, kmax.max(2))?;
    if predicted.iter().any(|b| b.is_negative()) {
        return Err(Error::Construction("negative coefficient in the inverted series".into()));
    }
    let ann = annihilator_for(n, p0)?;
    let dim_r = (dim_v * dim_v - ann.dim()) as u64;
    let b2_identity = predicted[2] == BigInt::from(dim_r) && dim_r == relation_space_dimension(n);

    let mut rows = Vec::new();
    for k in 0..=kmax {
        let at = |p: PrimeModulus, ann: &Annihilator| -> u64 {
            match k {
                0 => 1,
                1 => dim_v as u64,
                _ => intersection_dimension(ann, k, &(0..=k as usize - 2).collect::<Vec<_>>(), p),
            }
        };
        let got = at(p0, &ann);
        let want = predicted[k as usize].clone();
        let mut primes = vec![(p0.get(), got)];
        let mut matches = BigInt::from(got) == want;
        if !matches {
            let others = [DEFAULT_PRIME].into_iter().chain(ALTERNATE_PRIMES).filter(|&q| q != p0.get()).take(2);
            for q in others {
                let q = PrimeModulus::new(q)?;
                let dim = at(q, &annihilator_for(n, q)?);
                primes.push((q.get(), dim));
            }
            // ranks only drop at a bad prime, so the smallest kernel is the right one
            let best = primes.iter().map(|x| x.1).min().unwrap_or(got);
            matches = BigInt::from(best) == want;
        }
        rows.push(KoszulRow { k, dual_dimension: got, predicted: want, matches, primes });
    }
    let verdict = match rows.iter().find(|r| !r.matches) {
        None => KoszulVerdict::Consistent { kmax },
        Some(r) => KoszulVerdict::Discrepancy {
            k: r.k,
            dual_dimension: r.primes.iter().map(|x| x.1).min().unwrap_or(r.dual_dimension),
            predicted: r.predicted.clone(),
        },
    };
    Ok(KoszulReport { n, kmax, dim_v: dim_v as u64, dim_r, b2_identity, rows, verdict })
}

impl KoszulReport {
    pub fn consistent(&self) -> bool {
        matches!(self.verdict, KoszulVerdict::Consistent { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn polynomial_ring_has_exterior_dual() {
        for k in 0..=4 {
            assert_eq!(dual_dimension(3, k).unwrap(), binomial(3, k as u64));
        }
        assert_eq!(koszul_prediction(3, 4).unwrap(), ints(&[1, 3, 3, 1, 0]));
    }

    #[test]
    fn predictions() {
        assert_eq!(koszul_prediction(4, 4).unwrap(), ints(&[1, 8, 34, 112, 341]));
        assert_eq!(&koszul_prediction(5, 3).unwrap()[..3], &ints(&[1, 15, 125])[..]);
    }

    #[test]
    fn b2_identity_small_n() {
        for n in 3..=8 {
            let b = koszul_prediction(n, 2).unwrap();
            assert_eq!(b[1], BigInt::from(n * (n - 2)));
            assert_eq!(b[2], BigInt::from(relation_space_dimension(n)), "n={n}");
        }
    }

    #[test]
    fn dual_dimensions_n4() {
        let dims: Vec<u64> = (0..=3).map(|k| dual_dimension(4, k).unwrap()).collect();
        assert_eq!(dims, vec![1, 8, 34, 112]);
    }

    #[test]
    fn budget_refusal() {
        let err = dual_dimension_at(5, 6, PrimeModulus::default(), DEFAULT_TENSOR_BUDGET).unwrap_err();
        assert!(matches!(err, Error::Budget { required: 11_390_625, .. }));
    }

    #[test]
    fn dropping_slots_only_grows_the_intersection() {
        let p = PrimeModulus::default();
        let ann = annihilator_for(4, p).unwrap();
        let all = intersection_dimension(&ann, 4, &[0, 1, 2], p);
        for subset in [vec![0, 1], vec![1, 2], vec![0, 2], vec![1]] {
            assert!(all <= intersection_dimension(&ann, 4, &subset, p));
        }
    }

    #[test]
    fn independent_of_relation_basis() {
        let p = PrimeModulus::default();
        let spec = build_an(&p, 4, PivotScheme::cyclic(4)).unwrap();
        let space = tensor_relation_space(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // unitriangular mixing keeps the span
        let mut mixed = space.clone();
        let m = space.vectors.len();
        for i in 0..m {
            let mut acc: BTreeMap<usize, Fp> = space.vectors[i].iter().cloned().collect();
            for j in i + 1..m {
                let c = Fp::new(p, rng.gen_range(-5..=5));
                for (idx, x) in &space.vectors[j] {
                    let e = acc.entry(*idx).or_insert(Fp::new(p, 0));
                    *e = e.add_ref(&x.mul_ref(&c));
                }
            }
            mixed.vectors[i] = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        let a = Annihilator::new(&space, p);
        let b = Annihilator::new(&mixed, p);
        for k in 2..=3 {
            let slots: Vec<usize> = (0..=k as usize - 2).collect();
            assert_eq!(intersection_dimension(&a, k, &slots, p), intersection_dimension(&b, k, &slots, p));
        }
    }

    #[test]
    fn report_n4() {
        let r = koszul_report(4, 3, DEFAULT_TENSOR_BUDGET).unwrap();
        assert!(r.b2_identity);
        assert!(r.consistent());
        assert_eq!(r.dim_r, 34);
    }
}
