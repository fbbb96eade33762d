//! Quadratic presentations of `A_n` and `B_{n,m}`.
//!
//! Block `i` of `A_n` is spanned by the normalized sections `alpha_{ij}`,
//! `j != i`, with the pivot variable `alpha_{i,p(i)}` set to zero. For
//! `B_{n,m}` the `n + m` marked points split into `n` blocks and `m` extra
//! points; all alphas are normalized against the last extra point and the
//! remaining extra points contribute the `phi_i^{(r)}` variables.
//!
//! Both families come from one rule: for a pair `i < j` and points `k, l`
//! outside `{i, j}`,
//!
//! ```text
//! (a~_ik - a~_ij)(a~_jk - a~_ji) - (a~_il - a~_ij)(a~_jl - a~_ji)
//! ```
//!
//! where `a~_ix` is the linear form standing for the un-normalized section.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::monomial::{Grading, VarIndex};
use crate::poly::Poly;
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PivotKind {
    Cyclic,
    CommonExtraPoint,
    Custom,
}

/// Which marked point each block is normalized at: `f_i(p_{p(i)}) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PivotScheme {
    kind: PivotKind,
    /// `pivot[i - 1] = p(i)`, 1-based.
    pivot: Vec<usize>,
}

impl PivotScheme {
    /// `p(i) = i + 1` with indices mod `n`.
    pub fn cyclic(n: usize) -> Self {
        PivotScheme { kind: PivotKind::Cyclic, pivot: (1..=n).map(|i| i % n + 1).collect() }
    }

    /// Every block normalized at one common point `point`; the block of
    /// that point itself (if it is a block) uses `fallback`.
    pub fn common(n: usize, point: usize, fallback: usize) -> Self {
        let pivot = (1..=n).map(|i| if i == point { fallback } else { point }).collect();
        PivotScheme { kind: PivotKind::CommonExtraPoint, pivot }
    }

    /// Common scheme for `A_n`: everything at `p_n`, block `n` at `p_{n-1}`.
    pub fn common_for_an(n: usize) -> Self {
        Self::common(n, n, n - 1)
    }

    pub fn custom(pivot: Vec<usize>, npoints: usize) -> Result<Self> {
        for (k, &p) in pivot.iter().enumerate() {
            if p == k + 1 || p == 0 || p > npoints {
                return Err(usage(format!("invalid pivot p({}) = {}", k + 1, p)));
            }
        }
        Ok(PivotScheme { kind: PivotKind::Custom, pivot })
    }

    pub fn kind(&self) -> PivotKind {
        self.kind
    }

    /// `p(i)` for 1-based `i`.
    pub fn of(&self, i: usize) -> usize {
        self.pivot[i - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    An,
    Bnm,
}

/// A quadratic relation of multidegree `e_i + e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation<F: Field> {
    /// 1-based pair `i < j`.
    pub pair: (usize, usize),
    /// Marked points `(k, l)` the relation compares.
    pub points: (usize, usize),
    pub poly: Poly<F>,
}

/// A multigraded algebra given by generators and quadratic relations.
#[derive(Clone, Debug)]
pub struct PresentationSpec<F: Field> {
    kind: AlgebraKind,
    n: usize,
    m: usize,
    pivot: PivotScheme,
    ctx: F::Context,
    vars: Vec<VarIndex>,
    index: HashMap<VarIndex, usize>,
    grading: Grading,
    relations: Vec<Relation<F>>,
}

impl<F: Field> PresentationSpec<F> {
    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn pivot(&self) -> &PivotScheme {
        &self.pivot
    }
    pub fn context(&self) -> &F::Context {
        &self.ctx
    }
    pub fn vars(&self) -> &[VarIndex] {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn nblocks(&self) -> usize {
        self.n
    }
    pub fn grading(&self) -> &Grading {
        &self.grading
    }
    pub fn relations(&self) -> &[Relation<F>] {
        &self.relations
    }
    pub fn relation_polys(&self) -> Vec<Poly<F>> {
        self.relations.iter().map(|r| r.poly.clone()).collect()
    }
    pub fn var_id(&self, v: VarIndex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    /// Number of marked points the un-normalized sections run over.
    pub fn npoints(&self) -> usize {
        self.n + self.m
    }

    /// Human-readable name such as `A_5` or `B_{3,1}`.
    pub fn name(&self) -> String {
        match self.kind {
            AlgebraKind::An => format!("A_{}", self.n),
            AlgebraKind::Bnm => format!("B_{{{},{}}}", self.n, self.m),
        }
    }

    /// Linear form standing for the section of block `i` at point `x`,
    /// after normalization (zero at the pivot point).
    pub fn section(&self, i: usize, x: usize) -> Poly<F> {
        assert!(x != i && x >= 1 && x <= self.npoints());
        let var = match self.kind {
            AlgebraKind::An => {
                if x == self.pivot.of(i) {
                    return Poly::zero();
                }
                VarIndex::Alpha { i, j: x }
            }
            AlgebraKind::Bnm => {
                if x == self.n + self.m {
                    return Poly::zero();
                } else if x <= self.n {
                    VarIndex::Alpha { i, j: x }
                } else {
                    VarIndex::Phi { r: x - self.n, i }
                }
            }
        };
        Poly::var(self.index[&var], &self.grading, &self.ctx)
    }

    /// The spanning element of the relation space of pair `(i, j)` that
    /// compares points `k` and `l`.
    pub fn spanning_relation(&self, i: usize, j: usize, k: usize, l: usize) -> Poly<F> {
        let side = |x: usize| {
            self.section(i, x)
                .sub(&self.section(i, j))
                .mul(&self.section(j, x).sub(&self.section(j, i)))
        };
        side(k).sub(&side(l))
    }

    fn assemble(
        kind: AlgebraKind,
        n: usize,
        m: usize,
        pivot: PivotScheme,
        ctx: F::Context,
        vars: Vec<VarIndex>,
    ) -> Self {
        let index = vars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let grading = Grading::new(vars.iter().map(|v| v.block() - 1).collect(), n);
        let mut spec = PresentationSpec { kind, n, m, pivot, ctx, vars, index, grading, relations: Vec::new() };
        let npoints = spec.npoints();
        let mut relations = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let l0 = match kind {
                    AlgebraKind::An => (1..=n).find(|&x| x != i && x != j).expect("n >= 3"),
                    AlgebraKind::Bnm => npoints,
                };
                for k in (1..=npoints).filter(|&x| x != i && x != j && x != l0) {
                    let poly = spec.spanning_relation(i, j, k, l0);
                    relations.push(Relation { pair: (i, j), points: (k, l0), poly });
                }
            }
        }
        spec.relations = relations;
        spec
    }
}

/// `A_n` with the given pivot normalization.
pub fn build_an<F: Field>(ctx: &F::Context, n: usize, pivot: PivotScheme) -> Result<PresentationSpec<F>> {
    if n < 3 {
        return Err(usage(format!("A_n needs n >= 3, got {n}")));
    }
    if pivot.pivot.len() != n || (1..=n).any(|i| pivot.of(i) == i || pivot.of(i) > n || pivot.of(i) == 0) {
        return Err(usage("pivot scheme does not match n"));
    }
    let mut vars = Vec::with_capacity(n * (n - 2));
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i && j != pivot.of(i)) {
            vars.push(VarIndex::Alpha { i, j });
        }
    }
    Ok(PresentationSpec::assemble(AlgebraKind::An, n, 0, pivot, ctx.clone(), vars))
}

/// `B_{n,m}` normalized at the last extra point. `m = 0` is `A_n` with the
/// cyclic scheme.
pub fn build_bnm<F: Field>(ctx: &F::Context, n: usize, m: usize) -> Result<PresentationSpec<F>> {
    if m == 0 {
        return build_an(ctx, n, PivotScheme::cyclic(n));
    }
    if n < 2 {
        return Err(usage(format!("B_(n,m) needs n >= 2, got {n}")));
    }
    let mut vars = Vec::with_capacity(n * (n + m - 2));
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            vars.push(VarIndex::Alpha { i, j });
        }
    }
    for r in 1..m {
        for i in 1..=n {
            vars.push(VarIndex::Phi { r, i });
        }
    }
    let pivot = PivotScheme { kind: PivotKind::CommonExtraPoint, pivot: vec![n + m; n] };
    Ok(PresentationSpec::assemble(AlgebraKind::Bnm, n, m, pivot, ctx.clone(), vars))
}

/// Checks that every relation is multihomogeneous of degree `e_i + e_j`
/// for its pair and returns the relation count per pair.
pub fn relation_degree_audit<F: Field>(spec: &PresentationSpec<F>) -> Result<BTreeMap<(usize, usize), usize>> {
    let mut counts = BTreeMap::new();
    for rel in spec.relations() {
        let (i, j) = rel.pair;
        let mut expected = vec![0u32; spec.nblocks()];
        expected[i - 1] += 1;
        expected[j - 1] += 1;
        if i == j || rel.poly.multidegree() != Some(expected) {
            return Err(Error::Construction(format!(
                "relation for pair ({i},{j}) is not multihomogeneous of degree e_{i}+e_{j}: {}",
                rel.poly.render(spec.vars())
            )));
        }
        *counts.entry(rel.pair).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Sparse coefficient vector over the basis `e_x (x) e_y` of `V (x) V`,
/// indexed by `x * dim_v + y`.
pub type TensorVector<F> = Vec<(usize, F)>;

/// Relation space of the presentation inside `V (x) V`, with the
/// commutators `x(x)y - y(x)x` listed first.
#[derive(Clone, Debug)]
pub struct TensorRelationSpace<F: Field> {
    pub dim_v: usize,
    /// 0-based block of each basis vector of `V`.
    pub block_of: Vec<usize>,
    pub nblocks: usize,
    pub vectors: Vec<TensorVector<F>>,
    pub commutator_count: usize,
}

impl<F: Field> TensorRelationSpace<F> {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn symmetric_part(&self) -> &[TensorVector<F>] {
        &self.vectors[self.commutator_count..]
    }
}

/// Relation space of the commutative quadratic algebra `spec` viewed as a
/// quotient of the tensor algebra.
pub fn tensor_relation_space<F: Field>(spec: &PresentationSpec<F>) -> TensorRelationSpace<F> {
    let d = spec.nvars();
    let ctx = spec.context();
    let one = F::one(ctx);
    let half = F::from_i64(ctx, 2).inv().expect("characteristic is not 2");
    let mut vectors = Vec::with_capacity(d * (d - 1) / 2 + spec.relations().len());
    for x in 0..d {
        for y in x + 1..d {
            vectors.push(vec![(x * d + y, one.clone()), (y * d + x, one.neg_ref())]);
        }
    }
    let commutator_count = vectors.len();
    for rel in spec.relations() {
        let mut v: TensorVector<F> = Vec::new();
        for (mono, c) in rel.poly.terms() {
            let vs: Vec<(usize, u32)> = mono.iter().collect();
            match vs.as_slice() {
                [(x, 2)] => v.push((x * d + x, c.clone())),
                [(x, 1), (y, 1)] => {
                    let h = c.mul_ref(&half);
                    v.push((x * d + y, h.clone()));
                    v.push((y * d + x, h));
                }
                _ => panic!("relation is not quadratic"),
            }
        }
        v.sort_by_key(|e| e.0);
        vectors.push(v);
    }
    let block_of = (0..d).map(|v| spec.grading().block_of(v)).collect();
    TensorRelationSpace { dim_v: d, block_of, nblocks: spec.nblocks(), vectors, commutator_count }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn an(n: usize) -> PresentationSpec<Rational> {
        build_an(&(), n, PivotScheme::cyclic(n)).unwrap()
    }

    #[test]
    fn a3_is_a_polynomial_ring() {
        let s = an(3);
        assert_eq!(s.nvars(), 3);
        assert!(s.relations().is_empty());
        assert!(relation_degree_audit(&s).unwrap().is_empty());
    }

    #[test]
    fn small_an_counts() {
        let s4 = an(4);
        assert_eq!((s4.nvars(), s4.relations().len()), (8, 6));
        let audit = relation_degree_audit(&s4).unwrap();
        assert_eq!(audit.len(), 6);
        assert!(audit.values().all(|&c| c == 1));
        let s5 = an(5);
        assert_eq!((s5.nvars(), s5.relations().len()), (15, 20));
        assert!(relation_degree_audit(&s5).unwrap().values().all(|&c| c == 2));
    }

    #[test]
    fn an_counts_up_to_eight() {
        for n in 3..=8 {
            let s = an(n);
            assert_eq!(s.nvars(), n * (n - 2));
            assert_eq!(s.relations().len() as u64, binomial(n as u64, 2) * (n as u64 - 3));
            relation_degree_audit(&s).unwrap();
            let common = build_an::<Rational>(&(), n, PivotScheme::common_for_an(n)).unwrap();
            relation_degree_audit(&common).unwrap();
        }
    }

    #[test]
    fn pivot_variables_are_absent() {
        let s = an(5);
        for i in 1..=5 {
            let p = i % 5 + 1;
            assert!(s.var_id(VarIndex::Alpha { i, j: p }).is_none());
            assert!(s.section(i, p).is_zero());
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(build_an::<Rational>(&(), 2, PivotScheme::cyclic(2)).is_err());
        assert!(build_bnm::<Rational>(&(), 1, 3).is_err());
        assert!(PivotScheme::custom(vec![1, 1, 1], 3).is_err());
    }

    #[test]
    fn conifold_presentation() {
        let s = build_bnm::<Rational>(&(), 2, 2).unwrap();
        let names: Vec<String> = s.vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["a[1,2]", "a[2,1]", "phi[1,1]", "phi[1,2]"]);
        assert_eq!(s.relations().len(), 1);
        // phi1 phi2 - a12 phi2 - a21 phi1
        let v = |x: usize| Poly::<Rational>::var(x, s.grading(), &());
        let expected = v(2).mul(&v(3)).sub(&v(0).mul(&v(3))).sub(&v(1).mul(&v(2)));
        assert_eq!(s.relations()[0].poly, expected);
        // x y - z t with x = phi1 - a12, y = phi2 - a21, z = a12, t = a21
        let conifold = v(2).sub(&v(0)).mul(&v(3).sub(&v(1))).sub(&v(0).mul(&v(1)));
        assert_eq!(conifold, expected);
        let audit = relation_degree_audit(&s).unwrap();
        assert_eq!(audit.get(&(1, 2)), Some(&1));
    }

    #[test]
    fn bnm_counts() {
        for (n, m) in [(2, 2), (3, 1), (3, 2), (4, 1), (4, 2), (2, 1)] {
            let s = build_bnm::<Rational>(&(), n, m).unwrap();
            assert_eq!(s.nvars(), n * (n - 1) + n * (m - 1));
            assert_eq!(s.relations().len(), n * (n - 1) / 2 * (n + m - 3));
            relation_degree_audit(&s).unwrap();
        }
        let s = build_bnm::<Rational>(&(), 4, 1).unwrap();
        assert_eq!((s.nvars(), s.relations().len()), (12, 12));
        assert_eq!(build_bnm::<Rational>(&(), 3, 1).unwrap().relations().len(), 3);
    }

    #[test]
    fn bnm_first_family_matches_closed_form() {
        // a_ik a_jk = a_ij a_jk + a_ji a_ik
        let s = build_bnm::<Rational>(&(), 3, 1).unwrap();
        let a = |i, j| Poly::<Rational>::var(s.var_id(VarIndex::Alpha { i, j }).unwrap(), s.grading(), &());
        let rel = s.relations().iter().find(|r| r.pair == (1, 2)).unwrap();
        let expected = a(1, 3).mul(&a(2, 3)).sub(&a(1, 2).mul(&a(2, 3))).sub(&a(2, 1).mul(&a(1, 3)));
        assert_eq!(rel.poly, expected);
    }

    #[test]
    fn tensor_space_dimensions() {
        for (n, dim) in [(3usize, 3usize), (4, 34), (5, 125)] {
            let r = tensor_relation_space(&an(n));
            assert_eq!(r.dim(), dim);
            let dv = n * (n - 2);
            assert_eq!(r.commutator_count, dv * (dv - 1) / 2);
        }
        assert!(tensor_relation_space(&an(3)).symmetric_part().is_empty());
    }
}
