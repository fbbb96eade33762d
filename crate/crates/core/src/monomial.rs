//! Variables, sparse multigraded monomials and monomial orders.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Label of a generator. Indices are 1-based, matching the canonical text
/// form `a[i,j]` / `phi[r,i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarIndex {
    /// Normalized section `alpha_{ij}` of block `i`.
    Alpha { i: usize, j: usize },
    /// Value `phi_i^{(r)}` of the `i`-th function at extra point `r`.
    Phi { r: usize, i: usize },
}

impl VarIndex {
    /// Block (1-based) whose unit vector is the degree of this variable.
    pub fn block(self) -> usize {
        match self {
            VarIndex::Alpha { i, .. } | VarIndex::Phi { i, .. } => i,
        }
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarIndex::Alpha { i, j } => write!(f, "a[{i},{j}]"),
            VarIndex::Phi { r, i } => write!(f, "phi[{r},{i}]"),
        }
    }
}

impl std::str::FromStr for VarIndex {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse_pair = |body: &str| -> Result<(usize, usize), String> {
            let body = body.strip_suffix(']').ok_or_else(|| format!("bad variable {s}"))?;
            let (x, y) = body.split_once(',').ok_or_else(|| format!("bad variable {s}"))?;
            let x = x.trim().parse().map_err(|_| format!("bad index in {s}"))?;
            let y = y.trim().parse().map_err(|_| format!("bad index in {s}"))?;
            Ok((x, y))
        };
        if let Some(rest) = s.strip_prefix("a[") {
            let (i, j) = parse_pair(rest)?;
            Ok(VarIndex::Alpha { i, j })
        } else if let Some(rest) = s.strip_prefix("phi[") {
            let (r, i) = parse_pair(rest)?;
            Ok(VarIndex::Phi { r, i })
        } else {
            Err(format!("bad variable {s}"))
        }
    }
}

/// Block assignment of a variable universe: variable id -> 0-based block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    block_of: Vec<usize>,
    nblocks: usize,
}

impl Grading {
    pub fn new(block_of: Vec<usize>, nblocks: usize) -> Self {
        assert!(block_of.iter().all(|&b| b < nblocks));
        assert!(block_of.len() < u16::MAX as usize);
        Grading { block_of, nblocks }
    }

    pub fn nvars(&self) -> usize {
        self.block_of.len()
    }

    pub fn nblocks(&self) -> usize {
        self.nblocks
    }

    pub fn block_of(&self, var: usize) -> usize {
        self.block_of[var]
    }

    /// Variable ids of one block, ascending.
    pub fn block_vars(&self, block: usize) -> Vec<usize> {
        (0..self.nvars()).filter(|&v| self.block_of[v] == block).collect()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.nblocks];
        for &b in &self.block_of {
            sizes[b] += 1;
        }
        sizes
    }
}

type Exps = SmallVec<[(u16, u16); 8]>;
type Degree = SmallVec<[u16; 8]>;

/// Sparse monomial: strictly increasing variable ids with positive
/// exponents, plus the cached multidegree over the blocks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exps,
    degree: Degree,
    total: u32,
}

impl Monomial {
    pub fn one(nblocks: usize) -> Self {
        Monomial { exps: Exps::new(), degree: SmallVec::from_elem(0, nblocks), total: 0 }
    }

    pub fn var(var: usize, grading: &Grading) -> Self {
        Self::from_exponents(&[(var, 1)], grading)
    }

    /// Builds a monomial from `(var, exponent)` pairs in any order;
    /// repeated variables are merged and zero exponents dropped.
    pub fn from_exponents(pairs: &[(usize, u32)], grading: &Grading) -> Self {
        let mut sorted: Vec<(usize, u32)> = pairs.iter().copied().filter(|p| p.1 > 0).collect();
        sorted.sort_unstable();
        let mut exps = Exps::new();
        for (v, e) in sorted {
            assert!(v < grading.nvars(), "variable {v} outside universe");
            match exps.last_mut() {
                Some(last) if last.0 as usize == v => last.1 += e as u16,
                _ => exps.push((v as u16, e as u16)),
            }
        }
        let mut m = Monomial { exps, degree: SmallVec::new(), total: 0 };
        m.degree = m.recomputed_degree(grading);
        m.total = m.exps.iter().map(|&(_, e)| e as u32).sum();
        m
    }

    /// Dense exponent vector of length `nvars`.
    pub fn to_dense(&self, nvars: usize) -> Vec<u32> {
        let mut d = vec![0; nvars];
        for &(v, e) in &self.exps {
            d[v as usize] = e as u32;
        }
        d
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.total
    }

    pub fn degree(&self) -> &[u16] {
        &self.degree
    }

    pub fn exponent(&self, var: usize) -> u32 {
        match self.exps.binary_search_by_key(&(var as u16), |p| p.0) {
            Ok(k) => self.exps[k].1 as u32,
            Err(_) => 0,
        }
    }

    /// `(var, exponent)` pairs in increasing variable order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps.iter().map(|&(v, e)| (v as usize, e as u32))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().map(|&(v, _)| v as usize)
    }

    /// Bit `v % 64` set for every variable in the support.
    pub fn support_mask(&self) -> u64 {
        self.exps.iter().fold(0, |acc, &(v, _)| acc | 1u64 << (v % 64))
    }

    pub fn recomputed_degree(&self, grading: &Grading) -> Degree {
        let mut d: Degree = SmallVec::from_elem(0, grading.nblocks());
        for &(v, e) in &self.exps {
            d[grading.block_of(v as usize)] += e;
        }
        d
    }

    pub fn degree_is_consistent(&self, grading: &Grading) -> bool {
        self.degree == self.recomputed_degree(grading)
            && self.total == self.exps.iter().map(|&(_, e)| e as u32).sum::<u32>()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Exps::with_capacity(self.exps.len() + other.exps.len());
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    exps.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&a[i..]);
        exps.extend_from_slice(&b[j..]);
        let degree = self.degree.iter().zip(&other.degree).map(|(x, y)| x + y).collect();
        let m = Monomial { exps, degree, total: self.total + other.total };
        debug_assert_eq!(m.total, m.exps.iter().map(|&(_, e)| e as u32).sum::<u32>());
        m
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        if self.total > other.total || self.exps.len() > other.exps.len() {
            return false;
        }
        let b = &other.exps;
        let mut j = 0;
        for &(v, e) in &self.exps {
            while j < b.len() && b[j].0 < v {
                j += 1;
            }
            if j == b.len() || b[j].0 != v || b[j].1 < e {
                return false;
            }
            j += 1;
        }
        true
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut exps = Exps::new();
        let a = &self.exps;
        let mut i = 0;
        for &(v, e) in &other.exps {
            if i < a.len() && a[i].0 == v {
                if e > a[i].1 {
                    exps.push((v, e - a[i].1));
                }
                i += 1;
            } else {
                exps.push((v, e));
            }
        }
        let degree = other.degree.iter().zip(&self.degree).map(|(x, y)| x - y).collect();
        Some(Monomial { exps, degree, total: other.total - self.total })
    }

    pub fn lcm(&self, other: &Monomial, grading: &Grading) -> Monomial {
        let mut pairs: Vec<(usize, u32)> = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                pairs.push((a[i].0 as usize, a[i].1 as u32));
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                pairs.push((b[j].0 as usize, b[j].1 as u32));
                j += 1;
            } else {
                pairs.push((a[i].0 as usize, a[i].1.max(b[j].1) as u32));
                i += 1;
                j += 1;
            }
        }
        Monomial::from_exponents(&pairs, grading)
    }

    /// Disjoint supports (the lcm is the product).
    pub fn coprime(&self, other: &Monomial) -> bool {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    /// Divide by one variable; `None` if it does not occur.
    pub fn without_var(&self, var: usize, grading: &Grading) -> Option<(u32, Monomial)> {
        let e = self.exponent(var);
        if e == 0 {
            return None;
        }
        let pairs: Vec<(usize, u32)> =
            self.iter().map(|(v, x)| if v == var { (v, x - 1) } else { (v, x) }).collect();
        Some((e, Monomial::from_exponents(&pairs, grading)))
    }

    /// Text form such as `a[1,3]^2*a[2,4]`, or `1`.
    pub fn render(&self, names: &[VarIndex]) -> String {
        if self.is_one() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(v, e)| if e == 1 { names[v].to_string() } else { format!("{}^{}", names[v], e) })
            .collect();
        parts.join("*")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.iter().map(|(v, e)| format!("x{v}^{e}")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Canonical order: graded reverse lexicographic with variable 0 of highest
/// priority. Used for deterministic term storage.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex_identity(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn lex_identity(a: &Monomial, b: &Monomial) -> Ordering {
    let (x, y) = (&a.exps, &b.exps);
    for k in 0..x.len().min(y.len()) {
        if x[k].0 != y[k].0 {
            // the monomial containing the smaller (higher-priority) variable wins
            return if x[k].0 < y[k].0 { Ordering::Greater } else { Ordering::Less };
        }
        if x[k].1 != y[k].1 {
            return x[k].1.cmp(&y[k].1);
        }
    }
    x.len().cmp(&y.len())
}

fn grevlex_identity(a: &Monomial, b: &Monomial) -> Ordering {
    match a.total.cmp(&b.total) {
        Ordering::Equal => {}
        o => return o,
    }
    let (x, y) = (&a.exps, &b.exps);
    let (mut i, mut j) = (x.len(), y.len());
    while i > 0 && j > 0 {
        let (vx, ex) = x[i - 1];
        let (vy, ey) = y[j - 1];
        if vx != vy {
            // the one holding the later variable has the smaller monomial
            return if vx > vy { Ordering::Less } else { Ordering::Greater };
        }
        if ex != ey {
            return ey.cmp(&ex);
        }
        i -= 1;
        j -= 1;
    }
    // equal total degree and a common tail means equal monomials
    debug_assert!(i == 0 && j == 0);
    Ordering::Equal
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    Grevlex,
    Lex,
    /// Multidegree compared lexicographically (block 1 first), ties by grevlex.
    BlockGrevlex,
}

/// A monomial order together with a priority ranking of the variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    /// `rank[v]` is the priority position of variable `v` (0 = highest);
    /// `None` means the identity ranking.
    rank: Option<Vec<u16>>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind) -> Self {
        MonomialOrder { kind, rank: None }
    }

    pub fn grevlex() -> Self {
        Self::new(OrderKind::Grevlex)
    }

    pub fn lex() -> Self {
        Self::new(OrderKind::Lex)
    }

    /// `priority` lists variable ids from highest to lowest priority.
    pub fn with_priority(kind: OrderKind, priority: &[usize]) -> Self {
        let mut rank = vec![u16::MAX; priority.len()];
        for (pos, &v) in priority.iter().enumerate() {
            assert!(v < priority.len() && rank[v] == u16::MAX, "priority must be a permutation");
            rank[v] = pos as u16;
        }
        let identity = rank.iter().enumerate().all(|(v, &r)| r as usize == v);
        MonomialOrder { kind, rank: if identity { None } else { Some(rank) } }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    fn relabel(&self, m: &Monomial) -> Monomial {
        let rank = self.rank.as_ref().expect("relabel needs a ranking");
        let mut exps: Exps = m.exps.iter().map(|&(v, e)| (rank[v as usize], e)).collect();
        exps.sort_unstable();
        Monomial { exps, degree: m.degree.clone(), total: m.total }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        if self.kind == OrderKind::BlockGrevlex {
            match a.degree.cmp(&b.degree) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        match &self.rank {
            None => self.compare_identity(a, b),
            Some(_) => self.compare_identity(&self.relabel(a), &self.relabel(b)),
        }
    }

    fn compare_identity(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => lex_identity(a, b),
            OrderKind::Grevlex | OrderKind::BlockGrevlex => grevlex_identity(a, b),
        }
    }
}

impl Default for MonomialOrder {
    fn default() -> Self {
        Self::grevlex()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grading(nvars: usize) -> Grading {
        // two variables per block
        Grading::new((0..nvars).map(|v| v / 2).collect(), nvars.div_ceil(2))
    }

    fn mono(g: &Grading, dense: &[u32]) -> Monomial {
        let pairs: Vec<(usize, u32)> = dense.iter().copied().enumerate().collect();
        Monomial::from_exponents(&pairs, g)
    }

    #[test]
    fn var_text_round_trip() {
        for v in [VarIndex::Alpha { i: 3, j: 12 }, VarIndex::Phi { r: 1, i: 2 }] {
            assert_eq!(v.to_string().parse::<VarIndex>().unwrap(), v);
        }
        assert_eq!(VarIndex::Alpha { i: 1, j: 3 }.to_string(), "a[1,3]");
        assert!("b[1,2]".parse::<VarIndex>().is_err());
    }

    #[test]
    fn grevlex_basics() {
        let g = grading(2);
        let o = MonomialOrder::grevlex();
        let xx = mono(&g, &[2, 0]);
        let xy = mono(&g, &[1, 1]);
        assert_eq!(o.compare(&xx, &xy), Ordering::Greater);
        assert_eq!(o.compare(&xy, &xy), Ordering::Equal);
        let one = Monomial::one(g.nblocks());
        assert_eq!(o.compare(&one, &xy), Ordering::Less);
        // with y given priority the comparison flips
        let o2 = MonomialOrder::with_priority(OrderKind::Grevlex, &[1, 0]);
        assert_eq!(o2.compare(&xx, &xy), Ordering::Less);
    }

    #[test]
    fn grevlex_differs_from_lex() {
        let g = grading(3);
        // x*z^2 vs y^3 ... classic: x z vs y^2 in degree 2
        let xz = mono(&g, &[1, 0, 1]);
        let yy = mono(&g, &[0, 2, 0]);
        assert_eq!(MonomialOrder::lex().compare(&xz, &yy), Ordering::Greater);
        assert_eq!(MonomialOrder::grevlex().compare(&xz, &yy), Ordering::Less);
    }

    #[test]
    fn divisibility_and_quotient() {
        let g = grading(4);
        let a = mono(&g, &[1, 0, 2, 0]);
        let b = mono(&g, &[1, 1, 3, 0]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        let q = a.quotient_of(&b).unwrap();
        assert_eq!(q, mono(&g, &[0, 1, 1, 0]));
        assert!(q.degree_is_consistent(&g));
        assert_eq!(a.lcm(&mono(&g, &[0, 3, 1, 1]), &g), mono(&g, &[1, 3, 2, 1]));
        assert!(mono(&g, &[1, 0, 0, 0]).coprime(&mono(&g, &[0, 1, 0, 0])));
    }

    fn arb_dense() -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::vec(0u32..3, 5)
    }

    fn all_orders() -> Vec<MonomialOrder> {
        vec![
            MonomialOrder::grevlex(),
            MonomialOrder::lex(),
            MonomialOrder::new(OrderKind::BlockGrevlex),
            MonomialOrder::with_priority(OrderKind::Grevlex, &[3, 1, 4, 0, 2]),
            MonomialOrder::with_priority(OrderKind::Lex, &[4, 3, 2, 1, 0]),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn orders_are_monomial_orders(a in arb_dense(), b in arb_dense(), c in arb_dense()) {
            let g = grading(5);
            let (a, b, c) = (mono(&g, &a), mono(&g, &b), mono(&g, &c));
            let one = Monomial::one(g.nblocks());
            for o in all_orders() {
                let ab = o.compare(&a, &b);
                prop_assert_eq!(ab, o.compare(&b, &a).reverse());
                prop_assert_eq!(ab == Ordering::Equal, a == b);
                prop_assert_eq!(o.compare(&a.mul(&c), &b.mul(&c)), ab);
                prop_assert_ne!(o.compare(&a, &one), Ordering::Less);
            }
        }

        #[test]
        fn cached_degree_matches(a in arb_dense(), b in arb_dense()) {
            let g = grading(5);
            let p = mono(&g, &a).mul(&mono(&g, &b));
            prop_assert!(p.degree_is_consistent(&g));
        }
    }
}
