//! Sparse polynomials over an exact field.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::monomial::{Grading, Monomial, VarIndex};
use crate::scalar::Field;

/// Sum of scalar-weighted monomials. Terms are kept strictly decreasing in
/// the canonical monomial order and never carry a zero coefficient, so
/// iteration order is independent of how the polynomial was built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    terms: Vec<(Monomial, F)>,
}

/// One term in serialized form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermText {
    pub coef: String,
    pub monomial: String,
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: F, nblocks: usize) -> Self {
        Self::monomial(Monomial::one(nblocks), c)
    }

    pub fn monomial(m: Monomial, c: F) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(var: usize, grading: &Grading, ctx: &F::Context) -> Self {
        Self::monomial(Monomial::var(var, grading), F::one(ctx))
    }

    /// Sums an arbitrary list of terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut acc: BTreeMap<Monomial, F> = BTreeMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(existing) => *existing = existing.add_ref(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, F)] {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&F> {
        self.terms.binary_search_by(|(x, _)| m.cmp(x)).ok().map(|k| &self.terms[k].1)
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        let fix = |c: &F| if negate_other { c.neg_ref() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), fix(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { a[i].1.sub_ref(&b[j].1) } else { a[i].1.add_ref(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), fix(c))));
        Poly { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul_ref(c))).collect() }
    }

    /// Multiplication by a monomial preserves the canonical order.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly { terms: self.terms.iter().map(|(x, c)| (x.mul(m), c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = Self::zero();
        for (m, c) in &small.terms {
            acc = acc.add(&large.mul_monomial(m).scale(c));
        }
        acc
    }

    pub fn pow(&self, e: u32, nblocks: usize, ctx: &F::Context) -> Self {
        let mut acc = Self::constant(F::one(ctx), nblocks);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// All monomials share one multidegree (the zero polynomial counts).
    pub fn is_multihomogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    /// Common multidegree, if multihomogeneous and nonzero.
    pub fn multidegree(&self) -> Option<Vec<u32>> {
        if self.is_zero() || !self.is_multihomogeneous() {
            return None;
        }
        Some(self.terms[0].0.degree().iter().map(|&d| d as u32).collect())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    /// Exact evaluation at a point given as one value per variable.
    pub fn evaluate(&self, point: &[F], ctx: &F::Context) -> F {
        let mut total = F::zero(ctx);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                for _ in 0..e {
                    t = t.mul_ref(&point[v]);
                }
            }
            total = total.add_ref(&t);
        }
        total
    }

    pub fn derivative(&self, var: usize, grading: &Grading, ctx: &F::Context) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            m.without_var(var, grading)
                .map(|(e, rest)| (rest, c.mul_ref(&F::from_i64(ctx, e as i64))))
        }))
    }

    /// Coefficientwise image under a ring map (e.g. reduction mod p).
    pub fn map_coeffs<G: Field>(&self, mut f: impl FnMut(&F) -> G) -> Poly<G> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn render(&self, names: &[VarIndex]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            match (mag.as_str(), m.is_one()) {
                ("1", false) => s.push_str(&m.render(names)),
                (_, true) => s.push_str(&mag),
                _ => {
                    s.push_str(&mag);
                    s.push('*');
                    s.push_str(&m.render(names));
                }
            }
        }
        s
    }

    pub fn term_list(&self, names: &[VarIndex]) -> Vec<TermText> {
        self.terms
            .iter()
            .map(|(m, c)| TermText { coef: c.to_string(), monomial: m.render(names) })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, PrimeModulus, Rational};
    use proptest::prelude::*;

    fn g3() -> Grading {
        Grading::new(vec![0, 1, 2], 3)
    }

    fn x(v: usize) -> Poly<Rational> {
        Poly::var(v, &g3(), &())
    }

    fn c(v: i64) -> Poly<Rational> {
        Poly::constant(Rational::from_i64(&(), v), 3)
    }

    #[test]
    fn identity_and_difference_of_squares() {
        let p = x(0).add(&x(1).scale(&Rational::from_i64(&(), 3)));
        assert_eq!(p.mul(&c(1)), p);
        let lhs = x(0).add(&x(1)).mul(&x(0).sub(&x(1)));
        let rhs = x(0).mul(&x(0)).sub(&x(1).mul(&x(1)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn grading_is_additive() {
        let p = x(0).mul(&x(1));
        assert_eq!(p.multidegree(), Some(vec![1, 1, 0]));
        assert!(!x(0).add(&x(1)).is_multihomogeneous());
    }

    #[test]
    fn evaluate_and_differentiate() {
        let p = x(0).mul(&x(0)).mul(&x(1)).sub(&c(2));
        let pt = vec![Rational::from_i64(&(), 3), Rational::from_i64(&(), 2), Rational::from_i64(&(), 7)];
        assert_eq!(p.evaluate(&pt, &()), Rational::from_i64(&(), 16));
        let d = p.derivative(0, &g3(), &());
        assert_eq!(d, x(0).mul(&x(1)).scale(&Rational::from_i64(&(), 2)));
    }

    #[test]
    fn render_is_readable() {
        let names = vec![
            VarIndex::Alpha { i: 1, j: 2 },
            VarIndex::Alpha { i: 2, j: 1 },
            VarIndex::Phi { r: 1, i: 1 },
        ];
        let p = x(0).mul(&x(1)).sub(&x(2).scale(&Rational::from_i64(&(), 2)));
        assert_eq!(p.render(&names), "a[1,2]*a[2,1] - 2*phi[1,1]");
        assert_eq!(Poly::<Rational>::zero().render(&names), "0");
    }

    #[test]
    fn modular_image() {
        let m = PrimeModulus::new(7).unwrap();
        let p = x(0).scale(&Rational::from_i64(&(), 8)).add(&c(7));
        let q: Poly<Fp> = p.map_coeffs(|c| crate::scalar::rational_to_fp(c, &m).unwrap());
        assert_eq!(q.len(), 1);
        assert_eq!(q.terms()[0].1.residue(), 1);
    }

    fn arb_poly() -> impl Strategy<Value = Poly<Rational>> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..5), 0..20).prop_map(|ts| {
            let g = g3();
            Poly::from_terms(ts.into_iter().map(|((a, b, cc), k)| {
                (Monomial::from_exponents(&[(0, a), (1, b), (2, cc)], &g), Rational::from_i64(&(), k))
            }))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn mul_commutative_associative(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(p.mul(&q), q.mul(&p));
            prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
            prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        }

        #[test]
        fn terms_sorted_and_nonzero(p in arb_poly()) {
            prop_assert!(p.terms().windows(2).all(|w| w[0].0 > w[1].0));
            prop_assert!(p.terms().iter().all(|(_, c)| !Field::is_zero(c)));
        }
    }
}
