//! Buchberger's algorithm with the Gebauer–Möller criteria.
//!
//! Pairs are processed by the normal strategy: lowest total degree of the
//! lcm first, ties broken by the monomial order on the lcm. Input
//! generators are queued by degree alongside the pairs. For homogeneous
//! input this makes a run stopped at degree `D` a correct Gröbner basis in
//! all degrees `<= D`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::error::{usage, Result};
use crate::graded::{monomials_of_degree, DegreeVector};
use crate::monomial::{Grading, Monomial, MonomialOrder};
use crate::poly::Poly;
use crate::presentation::PresentationSpec;
use crate::scalar::{rational_to_fp, Field, Fp, PrimeModulus, Rational};

/// Terms sorted ascending in the active order, so the leading term is last.
type Terms<F> = Vec<(Monomial, F)>;

/// Largest basis for which the prime-field run is repeated over the rationals.
pub const RATIONAL_RECHECK_LIMIT: usize = 200;

#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    order: MonomialOrder,
    grading: Grading,
    ctx: F::Context,
    polys: Vec<Terms<F>>,
    masks: Vec<u64>,
    cap: Option<u32>,
    complete: bool,
}

fn ordered<F: Field>(p: &Poly<F>, order: &MonomialOrder) -> Terms<F> {
    let mut t: Terms<F> = p.terms().to_vec();
    t.sort_by(|a, b| order.compare(&a.0, &b.0));
    t
}

fn mask_of(m: &Monomial) -> u64 {
    m.support_mask()
}

/// `p - c * m * g`, all ascending.
fn sub_mul<F: Field>(p: &Terms<F>, c: &F, m: &Monomial, g: &Terms<F>, order: &MonomialOrder) -> Terms<F> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let next_g = |j: usize| (g[j].0.mul(m), g[j].1.mul_ref(c));
    let mut pending: Option<(Monomial, F)> = if g.is_empty() { None } else { Some(next_g(0)) };
    while i < p.len() || pending.is_some() {
        let take_p = match &pending {
            None => true,
            Some((gm, _)) => i < p.len() && order.compare(&p[i].0, gm) == Ordering::Less,
        };
        if take_p {
            out.push(p[i].clone());
            i += 1;
            continue;
        }
        let (gm, gc) = pending.take().expect("pending term");
        if i < p.len() && p[i].0 == gm {
            let v = p[i].1.sub_ref(&gc);
            if !v.is_zero() {
                out.push((gm, v));
            }
            i += 1;
        } else {
            out.push((gm, gc.neg_ref()));
        }
        j += 1;
        if j < g.len() {
            pending = Some(next_g(j));
        }
    }
    out
}

fn make_monic<F: Field>(t: &mut Terms<F>) {
    if let Some((_, lc)) = t.last() {
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            for e in t.iter_mut() {
                e.1 = e.1.mul_ref(&inv);
            }
        }
    }
}

fn lead<F: Field>(t: &Terms<F>) -> &Monomial {
    &t.last().expect("nonzero polynomial").0
}

/// Full reduction. `pick` returns a reducer index whose leading monomial
/// divides the argument.
fn reduce_with<F: Field>(
    polys: &[Terms<F>],
    order: &MonomialOrder,
    mut p: Terms<F>,
    mut pick: impl FnMut(&Monomial) -> Option<usize>,
) -> Terms<F> {
    let mut rem: Terms<F> = Vec::new();
    while let Some((m, c)) = p.last().cloned() {
        match pick(&m) {
            Some(k) => {
                let g = &polys[k];
                let q = lead(g).quotient_of(&m).expect("reducer divides");
                p = sub_mul(&p, &c, &q, g, order);
            }
            None => rem.push(p.pop().expect("nonempty")),
        }
    }
    rem.reverse();
    rem
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Engine<'a, F: Field> {
    order: &'a MonomialOrder,
    grading: &'a Grading,
    polys: Vec<Terms<F>>,
    masks: Vec<u64>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<'a, F: Field> Engine<'a, F> {
    fn finder(&self) -> impl FnMut(&Monomial) -> Option<usize> + '_ {
        move |m: &Monomial| {
            let mm = mask_of(m);
            (0..self.polys.len()).find(|&k| self.masks[k] & !mm == 0 && lead(&self.polys[k]).divides(m))
        }
    }

    fn reduce(&self, p: Terms<F>) -> Terms<F> {
        reduce_with(&self.polys, self.order, p, self.finder())
    }

    fn s_poly(&self, pair: &Pair) -> Terms<F> {
        let (f, g) = (&self.polys[pair.i], &self.polys[pair.j]);
        let ctx = f[0].1.context();
        let mf = lead(f).quotient_of(&pair.lcm).expect("lcm");
        let mg = lead(g).quotient_of(&pair.lcm).expect("lcm");
        let zero: Terms<F> = Vec::new();
        let a = sub_mul(&zero, &F::one(&ctx).neg_ref(), &mf, f, self.order);
        sub_mul(&a, &F::one(&ctx), &mg, g, self.order)
    }

    /// Becker–Weispfenning formulation of the Gebauer–Möller update.
    fn insert(&mut self, mut h: Terms<F>) {
        make_monic(&mut h);
        let hn = self.polys.len();
        let lh = lead(&h).clone();
        self.masks.push(mask_of(&lh));
        self.polys.push(h);
        self.active.push(true);

        let cands: Vec<(usize, Monomial, bool)> = (0..hn)
            .filter(|&g| self.active[g])
            .map(|g| {
                let lg = lead(&self.polys[g]);
                (g, lh.lcm(lg, self.grading), lh.coprime(lg))
            })
            .collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for (idx, (g, l, coprime)) in cands.iter().enumerate() {
            let dominated = cands[idx + 1..].iter().any(|(_, l2, _)| l2.divides(l))
                || kept.iter().any(|(_, l2, _)| l2.divides(l));
            if *coprime || !dominated {
                kept.push((*g, l.clone(), *coprime));
            }
        }
        let grading = self.grading;
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !lh.divides(&p.lcm) {
                return true;
            }
            let li = lead(&polys[p.i]).lcm(&lh, grading);
            let lj = lead(&polys[p.j]).lcm(&lh, grading);
            li == p.lcm || lj == p.lcm
        });
        for (g, l, coprime) in kept {
            if !coprime {
                self.pairs.push(Pair { i: g, j: hn, lcm: l });
            }
        }
        for g in 0..hn {
            if self.active[g] && lh.divides(lead(&self.polys[g])) {
                self.active[g] = false;
            }
        }
    }
}

enum Item {
    Input(usize),
    Pair(usize),
}

impl<F: Field> GroebnerBasis<F> {
    /// Runs Buchberger on `gens`. With `cap = Some(d)`, pairs and inputs
    /// above total degree `d` are not processed.
    pub fn compute(
        gens: &[Poly<F>],
        order: &MonomialOrder,
        grading: &Grading,
        ctx: &F::Context,
        cap: Option<u32>,
    ) -> Self {
        let mut inputs: Vec<Option<Terms<F>>> =
            gens.iter().filter(|g| !g.is_zero()).map(|g| Some(ordered(g, order))).collect();
        let input_deg: Vec<u32> =
            inputs.iter().map(|g| lead(g.as_ref().expect("fresh")).total_degree()).collect();
        let mut eng = Engine {
            order,
            grading,
            polys: Vec::new(),
            masks: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
        };
        let mut complete = true;
        loop {
            // next item: lowest degree, inputs before pairs, then by lcm order
            let mut best: Option<(u32, Item)> = None;
            for (k, g) in inputs.iter().enumerate() {
                if g.is_some() && best.as_ref().is_none_or(|(d, _)| input_deg[k] < *d) {
                    best = Some((input_deg[k], Item::Input(k)));
                }
            }
            for (k, p) in eng.pairs.iter().enumerate() {
                let d = p.lcm.total_degree();
                let better = match &best {
                    None => true,
                    Some((bd, _)) if d != *bd => d < *bd,
                    Some((_, Item::Input(_))) => false,
                    Some((_, Item::Pair(b))) => {
                        let q = &eng.pairs[*b];
                        order.compare(&p.lcm, &q.lcm).then((p.i, p.j).cmp(&(q.i, q.j))) == Ordering::Less
                    }
                };
                if better {
                    best = Some((d, Item::Pair(k)));
                }
            }
            let Some((d, item)) = best else { break };
            if cap.is_some_and(|c| d > c) {
                complete = false;
                break;
            }
            let h = match item {
                Item::Input(k) => eng.reduce(inputs[k].take().expect("queued input")),
                Item::Pair(k) => {
                    let pair = eng.pairs.swap_remove(k);
                    eng.reduce(eng.s_poly(&pair))
                }
            };
            if !h.is_empty() {
                eng.insert(h);
            }
        }

        // minimal basis, then tails reduced against the others
        let keep: Vec<usize> = (0..eng.polys.len()).filter(|&k| eng.active[k]).collect();
        let mut basis: Vec<Terms<F>> = keep.iter().map(|&k| eng.polys[k].clone()).collect();
        for idx in 0..basis.len() {
            let others: Vec<usize> = (0..basis.len()).filter(|&o| o != idx).collect();
            let masks: Vec<u64> = basis.iter().map(|t| mask_of(lead(t))).collect();
            let p = basis[idx].clone();
            let r = reduce_with(&basis, order, p, |m| {
                let mm = mask_of(m);
                others.iter().copied().find(|&o| masks[o] & !mm == 0 && lead(&basis[o]).divides(m))
            });
            basis[idx] = r;
        }
        for t in basis.iter_mut() {
            make_monic(t);
        }
        basis.sort_by(|a, b| order.compare(lead(a), lead(b)));
        let masks = basis.iter().map(|t| mask_of(lead(t))).collect();
        GroebnerBasis {
            order: order.clone(),
            grading: grading.clone(),
            ctx: ctx.clone(),
            polys: basis,
            masks,
            cap,
            complete,
        }
    }

    pub fn of_spec(spec: &PresentationSpec<F>, order: &MonomialOrder, cap: Option<u32>) -> Self {
        Self::compute(&spec.relation_polys(), order, spec.grading(), spec.context(), cap)
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    /// No pair or input was skipped because of the cap.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Generators in canonical form, ascending by leading monomial.
    pub fn generators(&self) -> Vec<Poly<F>> {
        self.polys.iter().map(|t| Poly::from_terms(t.iter().cloned())).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|t| lead(t).clone()).collect()
    }

    /// Number of generators per total degree of the leading monomial.
    pub fn degree_histogram(&self) -> Vec<(u32, usize)> {
        let mut h = std::collections::BTreeMap::new();
        for t in &self.polys {
            *h.entry(lead(t).total_degree()).or_insert(0usize) += 1;
        }
        h.into_iter().collect()
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        match self.cap {
            Some(c) if !self.complete && d > c => {
                Err(usage(format!("degree {d} exceeds the basis cap {c}")))
            }
            _ => Ok(()),
        }
    }

    fn first_reducer(&self, m: &Monomial) -> Option<usize> {
        let mm = mask_of(m);
        (0..self.polys.len()).find(|&k| self.masks[k] & !mm == 0 && lead(&self.polys[k]).divides(m))
    }

    pub fn normal_form(&self, p: &Poly<F>) -> Result<Poly<F>> {
        if let Some(d) = p.terms().iter().map(|(m, _)| m.total_degree()).max() {
            self.check_degree(d)?;
        }
        let r = reduce_with(&self.polys, &self.order, ordered(p, &self.order), |m| self.first_reducer(m));
        Ok(Poly::from_terms(r))
    }

    /// Normal form using reducers in the priority `perm` (a permutation of
    /// the generator indices) instead of the default first match.
    pub fn normal_form_with_priority(&self, p: &Poly<F>, perm: &[usize]) -> Result<Poly<F>> {
        if let Some(d) = p.terms().iter().map(|(m, _)| m.total_degree()).max() {
            self.check_degree(d)?;
        }
        let r = reduce_with(&self.polys, &self.order, ordered(p, &self.order), |m| {
            let mm = mask_of(m);
            perm.iter().copied().find(|&k| self.masks[k] & !mm == 0 && lead(&self.polys[k]).divides(m))
        });
        Ok(Poly::from_terms(r))
    }

    /// Normal forms of many polynomials against the frozen basis, in parallel.
    pub fn normal_forms(&self, ps: &[Poly<F>]) -> Result<Vec<Poly<F>>> {
        ps.par_iter().map(|p| self.normal_form(p)).collect()
    }

    fn is_standard(&self, m: &Monomial) -> bool {
        self.first_reducer(m).is_none()
    }

    /// Degree-`a` monomials outside the leading-term ideal.
    pub fn standard_monomial_count(&self, a: &DegreeVector) -> Result<u64> {
        self.check_degree(a.total())?;
        let monos = monomials_of_degree(&self.grading, a, &self.order);
        Ok(monos.iter().filter(|m| self.is_standard(m)).count() as u64)
    }

    /// Dimension of `k[x] / in(I)`, equal to that of `k[x] / I`.
    pub fn krull_dimension(&self) -> Result<KrullDimension> {
        if !self.complete {
            return Err(usage(format!(
                "krull dimension needs a complete basis; this one stops at degree {}",
                self.cap.unwrap_or(0)
            )));
        }
        let nvars = self.grading.nvars();
        if nvars > 64 {
            return Err(usage(format!("krull dimension supports at most 64 variables, got {nvars}")));
        }
        if self.polys.iter().any(|t| lead(t).is_one()) {
            return Ok(KrullDimension::Empty);
        }
        let cover = min_hitting_set(&self.masks);
        Ok(KrullDimension::Dim((nvars - cover) as u32))
    }
}

impl GroebnerBasis<Fp> {
    /// Compares with a basis over the rationals under the same order and
    /// cap: same leading monomials and generators that agree modulo p.
    pub fn agrees_with_rational(&self, q: &GroebnerBasis<Rational>) -> bool {
        if self.len() != q.len() || self.complete != q.complete {
            return false;
        }
        let ctx: PrimeModulus = self.ctx;
        self.polys.iter().zip(&q.polys).all(|(a, b)| {
            a.len() == b.len()
                && a.iter().zip(b).all(|((ma, ca), (mb, cb))| {
                    ma == mb && rational_to_fp(cb, &ctx).is_ok_and(|x| x == *ca)
                })
        })
    }
}

/// Result of a dimension computation. `Empty` is the unit ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KrullDimension {
    Empty,
    Dim(u32),
}

impl KrullDimension {
    pub fn at_most(self, d: u32) -> bool {
        match self {
            KrullDimension::Empty => true,
            KrullDimension::Dim(x) => x <= d,
        }
    }
}

impl std::fmt::Display for KrullDimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KrullDimension::Empty => write!(f, "empty"),
            KrullDimension::Dim(d) => write!(f, "{d}"),
        }
    }
}

/// Fewest variables meeting every support in `sets`: branch and bound over
/// the first unhit set, with visited states memoized.
pub fn min_hitting_set(sets: &[u64]) -> usize {
    let mut uniq: BTreeSet<u64> = sets.iter().copied().filter(|&s| s != 0).collect();
    // only inclusion-minimal supports matter
    let all: Vec<u64> = uniq.iter().copied().collect();
    uniq.retain(|&s| !all.iter().any(|&t| t != s && t & s == t));
    let mut minimal: Vec<u64> = uniq.into_iter().collect();
    minimal.sort_by_key(|s| (s.count_ones(), *s));

    fn rec(sets: &[u64], chosen: u64, depth: usize, best: &mut usize, seen: &mut HashSet<u64>) {
        if depth >= *best || !seen.insert(chosen) {
            return;
        }
        let Some(&s) = sets.iter().find(|&&s| s & chosen == 0) else {
            *best = depth;
            return;
        };
        // every unhit set needs its own variable when they are disjoint
        let mut lower = 0;
        let mut used = chosen;
        for &t in sets {
            if t & used == 0 {
                lower += 1;
                used |= t;
            }
        }
        if depth + lower >= *best {
            return;
        }
        let mut bits = s;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            rec(sets, chosen | b, depth + 1, best, seen);
            bits &= bits - 1;
        }
    }
    let mut best = usize::MAX;
    rec(&minimal, 0, 0, &mut best, &mut HashSet::new());
    if best == usize::MAX {
        0
    } else {
        best
    }
}

/// Output of [`groebner_checked`].
#[derive(Clone, Debug)]
pub struct GroebnerRun {
    pub basis: GroebnerBasis<Fp>,
    /// `None` when the basis is too large for the rational re-run.
    pub rational_agrees: Option<bool>,
}

/// Basis over `F_p`, re-run over the rationals when it has at most
/// [`RATIONAL_RECHECK_LIMIT`] generators.
pub fn groebner_checked(
    gens: &[Poly<Rational>],
    grading: &Grading,
    order: &MonomialOrder,
    cap: Option<u32>,
    p: PrimeModulus,
) -> Result<GroebnerRun> {
    let modp: Vec<Poly<Fp>> = gens
        .iter()
        .map(|g| {
            let terms = g.terms().iter().map(|(m, c)| rational_to_fp(c, &p).map(|x| (m.clone(), x)));
            terms.collect::<std::result::Result<Vec<_>, _>>().map(Poly::from_terms)
        })
        .collect::<std::result::Result<_, _>>()?;
    let basis = GroebnerBasis::compute(&modp, order, grading, &p, cap);
    let rational_agrees = (basis.len() <= RATIONAL_RECHECK_LIMIT).then(|| {
        let q = GroebnerBasis::compute(gens, order, grading, &(), cap);
        basis.agrees_with_rational(&q)
    });
    Ok(GroebnerRun { basis, rational_agrees })
}
