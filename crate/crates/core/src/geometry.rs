//! Points of `Spec A_n` and `Spec B_{n,m}` from marked points on the line.
//!
//! A configuration `z_1..z_n` (marked points), `lambda_i` (tangent
//! scalings) and extra points `q_1..q_m` gives functions
//! `f_i(t) = lambda_i / (t - z_i) + kappa_i`, with `kappa_i` fixed by
//! `f_i(p(i)) = 0`. The coordinates are `alpha_ij = f_i(z_j)` and
//! `phi_i^(r) = f_i(q_r)`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, KrullDimension};
use crate::linalg::{rank, SparseRow};
use crate::monomial::{MonomialOrder, VarIndex};
use crate::poly::Poly;
use crate::presentation::{binomial, PresentationSpec};
use crate::scalar::{Field, Fp};

/// Default cap on the number of Jacobian minors.
pub const DEFAULT_MINOR_BUDGET: u128 = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig<F: Field> {
    ctx: F::Context,
    z: Vec<F>,
    lambda: Vec<F>,
    q: Vec<F>,
}

impl<F: Field> PointConfig<F> {
    pub fn new(ctx: &F::Context, z: Vec<F>, lambda: Vec<F>, q: Vec<F>) -> Result<Self> {
        if z.len() != lambda.len() {
            return Err(Error::Precondition(format!("{} positions but {} scalings", z.len(), lambda.len())));
        }
        let pts: Vec<&F> = z.iter().chain(&q).collect();
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                if pts[a] == pts[b] {
                    return Err(Error::Precondition(format!("points {} and {} coincide", a + 1, b + 1)));
                }
            }
        }
        if let Some(i) = lambda.iter().position(|l| l.is_zero()) {
            return Err(Error::Precondition(format!("scaling of point {} is zero", i + 1)));
        }
        Ok(PointConfig { ctx: ctx.clone(), z, lambda, q })
    }

    /// Configuration from small integers.
    pub fn from_ints(ctx: &F::Context, z: &[i64], lambda: &[i64], q: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| F::from_i64(ctx, x)).collect();
        Self::new(ctx, conv(z), conv(lambda), conv(q))
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn m(&self) -> usize {
        self.q.len()
    }

    pub fn z(&self) -> &[F] {
        &self.z
    }

    pub fn lambda(&self) -> &[F] {
        &self.lambda
    }

    pub fn q(&self) -> &[F] {
        &self.q
    }

    /// Coordinate of marked point `x` (1-based; extra points follow the `z`).
    pub fn position(&self, x: usize) -> &F {
        if x <= self.n() {
            &self.z[x - 1]
        } else {
            &self.q[x - self.n() - 1]
        }
    }

    /// Un-normalized `a~_ix = lambda_i / (pos(x) - z_i)`.
    pub fn alpha_tilde(&self, i: usize, x: usize) -> F {
        let diff = self.position(x).sub_ref(&self.z[i - 1]);
        self.lambda[i - 1].mul_ref(&diff.inv().expect("validated distinct points"))
    }

    /// Same configuration with `lambda_i` multiplied by `u[i]`.
    pub fn scaled(&self, u: &[F]) -> Result<Self> {
        let lambda = self.lambda.iter().zip(u).map(|(l, s)| l.mul_ref(s)).collect();
        Self::new(&self.ctx, self.z.clone(), lambda, self.q.clone())
    }

    /// `f_i(t)` with the normalization of `spec`.
    pub fn section_function(&self, spec: &PresentationSpec<F>, i: usize, t: &F) -> Result<F> {
        let diff = t.sub_ref(&self.z[i - 1]);
        let pole = self.lambda[i - 1].mul_ref(&diff.inv()?);
        Ok(pole.sub_ref(&self.alpha_tilde(i, spec.pivot().of(i))))
    }
}

/// Values of the presentation variables, indexed like `spec.vars()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePoint<F: Field> {
    pub values: Vec<F>,
}

impl<F: Field> AffinePoint<F> {
    pub fn zero(spec: &PresentationSpec<F>) -> Self {
        AffinePoint { values: vec![F::zero(spec.context()); spec.nvars()] }
    }

    /// `(variable, value)` pairs as text.
    pub fn labelled(&self, spec: &PresentationSpec<F>) -> Vec<(String, String)> {
        spec.vars().iter().zip(&self.values).map(|(v, x)| (v.to_string(), x.to_string())).collect()
    }
}

fn check_shape<F: Field>(cfg: &PointConfig<F>, spec: &PresentationSpec<F>) -> Result<()> {
    if cfg.n() != spec.n() || cfg.m() != spec.m() {
        return Err(Error::Precondition(format!(
            "configuration has {} points and {} extra points, {} expects {} and {}",
            cfg.n(),
            cfg.m(),
            spec.name(),
            spec.n(),
            spec.m()
        )));
    }
    Ok(())
}

/// The point of `spec` defined by a configuration.
pub fn alpha_from_config<F: Field>(cfg: &PointConfig<F>, spec: &PresentationSpec<F>) -> Result<AffinePoint<F>> {
    check_shape(cfg, spec)?;
    let n = spec.n();
    let values = spec
        .vars()
        .iter()
        .map(|v| {
            let (i, x) = match *v {
                VarIndex::Alpha { i, j } => (i, j),
                VarIndex::Phi { r, i } => (i, n + r),
            };
            cfg.alpha_tilde(i, x).sub_ref(&cfg.alpha_tilde(i, spec.pivot().of(i)))
        })
        .collect();
    Ok(AffinePoint { values })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Vanishing {
    Ok,
    Fails { relation: usize, pair: (usize, usize), points: (usize, usize), value: String },
}

impl Vanishing {
    pub fn is_ok(&self) -> bool {
        matches!(self, Vanishing::Ok)
    }
}

pub fn verify_vanishing<F: Field>(spec: &PresentationSpec<F>, pt: &AffinePoint<F>) -> Vanishing {
    assert_eq!(pt.values.len(), spec.nvars(), "point does not match the presentation");
    for (k, rel) in spec.relations().iter().enumerate() {
        let v = rel.poly.evaluate(&pt.values, spec.context());
        if !v.is_zero() {
            return Vanishing::Fails { relation: k, pair: rel.pair, points: rel.points, value: v.to_string() };
        }
    }
    Vanishing::Ok
}

/// `c_ij(k) = a~_ik a~_jk - a~_ij a~_jk - a~_ik a~_ji` from a table
/// `tilde(i, x)`; returns `(i, j, k, k')` with `c_ij(k) != c_ij(k')`.
pub fn cij_witness<F: Field>(
    npoints: usize,
    n: usize,
    tilde: impl Fn(usize, usize) -> F,
) -> Option<(usize, usize, usize, usize)> {
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            let c = |k: usize| {
                let (ik, jk, ij, ji) = (tilde(i, k), tilde(j, k), tilde(i, j), tilde(j, i));
                ik.mul_ref(&jk).sub_ref(&ij.mul_ref(&jk)).sub_ref(&ik.mul_ref(&ji))
            };
            let ks: Vec<usize> = (1..=npoints).filter(|&k| k != i && k != j).collect();
            if let Some((&k0, rest)) = ks.split_first() {
                let c0 = c(k0);
                if let Some(&k1) = rest.iter().find(|&&k| c(k) != c0) {
                    return Some((i, j, k0, k1));
                }
            }
        }
    }
    None
}

/// Independence of `c_ij` from the auxiliary point, over all marked points.
pub fn cij_consistency<F: Field>(cfg: &PointConfig<F>) -> Option<(usize, usize, usize, usize)> {
    cij_witness(cfg.n() + cfg.m(), cfg.n(), |i, x| cfg.alpha_tilde(i, x))
}

/// Jacobian of the relations: one polynomial per (relation, variable).
pub fn jacobian<F: Field>(spec: &PresentationSpec<F>) -> Vec<Vec<Poly<F>>> {
    spec.relations()
        .iter()
        .map(|r| (0..spec.nvars()).map(|v| r.poly.derivative(v, spec.grading(), spec.context())).collect())
        .collect()
}

pub fn jacobian_rank_at<F: Field>(spec: &PresentationSpec<F>, pt: &AffinePoint<F>) -> Result<usize> {
    if let Vanishing::Fails { relation, .. } = verify_vanishing(spec, pt) {
        return Err(Error::Precondition(format!("point is not on the variety (relation {relation})")));
    }
    let ctx = spec.context();
    let rows: Vec<SparseRow<F>> = jacobian(spec)
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(c, p)| (c, p.evaluate(&pt.values, ctx)))
                .filter(|(_, x)| !x.is_zero())
                .collect()
        })
        .collect();
    Ok(rank(ctx, rows))
}

/// `nvars - dim`, the codimension at smooth points, for `A_n` or `B_{n,m}`
/// of dimension `2n - 3 + m`.
pub fn expected_codimension<F: Field>(spec: &PresentationSpec<F>) -> usize {
    spec.nvars() + 3 - 2 * spec.n() - spec.m()
}

fn det<F: Field>(m: &[Vec<&Poly<F>>], nblocks: usize, ctx: &F::Context) -> Poly<F> {
    match m.len() {
        0 => Poly::constant(F::one(ctx), nblocks),
        1 => m[0][0].clone(),
        size => {
            let mut acc = Poly::zero();
            for col in 0..size {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<&Poly<F>>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, p)| *p).collect())
                    .collect();
                let term = m[0][col].mul(&det(&minor, nblocks, ctx));
                acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Number of `c x c` minors of the Jacobian.
pub fn minor_count<F: Field>(spec: &PresentationSpec<F>, c: usize) -> u128 {
    binomial(spec.relations().len() as u64, c as u64) as u128 * binomial(spec.nvars() as u64, c as u64) as u128
}

/// Dimension of the zero set of the relations and all `c x c` Jacobian
/// minors, over `F_p`.
pub fn singular_locus_dim(spec: &PresentationSpec<Fp>, c: usize, budget: u128) -> Result<KrullDimension> {
    let count = minor_count(spec, c);
    if count > budget {
        return Err(Error::Budget { required: count, budget, unit: "jacobian minors" });
    }
    let ctx = spec.context();
    let jac = jacobian(spec);
    let mut gens = spec.relation_polys();
    for rows in combinations(jac.len(), c) {
        for cols in combinations(spec.nvars(), c) {
            let sub: Vec<Vec<&Poly<Fp>>> = rows.iter().map(|&r| cols.iter().map(|&k| &jac[r][k]).collect()).collect();
            let d = det(&sub, spec.nblocks(), ctx);
            if !d.is_zero() {
                gens.push(d);
            }
        }
    }
    // with c = 0 the empty minor is 1 and the locus is empty
    if c == 0 {
        gens.push(Poly::constant(Fp::one(ctx), spec.nblocks()));
    }
    let gb = GroebnerBasis::compute(&gens, &MonomialOrder::grevlex(), spec.grading(), ctx, None);
    gb.krull_dimension()
}

/// Draws a configuration: `z` and `q` distinct integers in `[-range, range]`,
/// `lambda` nonzero integers in `[-range, range]`.
pub fn random_config<F: Field, R: Rng>(
    rng: &mut R,
    ctx: &F::Context,
    n: usize,
    m: usize,
    range: i64,
) -> Result<PointConfig<F>> {
    let mut pts: Vec<i64> = Vec::with_capacity(n + m);
    while pts.len() < n + m {
        let x = rng.gen_range(-range..=range);
        if !pts.contains(&x) {
            pts.push(x);
        }
    }
    let lambda: Vec<i64> = (0..n)
        .map(|_| loop {
            let x = rng.gen_range(-range..=range);
            if x != 0 {
                break x;
            }
        })
        .collect();
    PointConfig::from_ints(ctx, &pts[..n], &lambda, &pts[n..])
}

/// A point with independent small integer coordinates, not from a config.
pub fn random_point<F: Field, R: Rng>(rng: &mut R, spec: &PresentationSpec<F>, range: i64) -> AffinePoint<F> {
    let values = (0..spec.nvars()).map(|_| F::from_i64(spec.context(), rng.gen_range(-range..=range))).collect();
    AffinePoint { values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{build_an, build_bnm, PivotScheme};
    use crate::scalar::{PrimeModulus, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(x: i64) -> Rational {
        Rational::from_i64(&(), x)
    }

    #[test]
    fn n3_example() {
        let spec: PresentationSpec<Rational> = build_an(&(), 3, PivotScheme::cyclic(3)).unwrap();
        let cfg = PointConfig::from_ints(&(), &[0, 1, 2], &[1, 1, 1], &[]).unwrap();
        let pt = alpha_from_config(&cfg, &spec).unwrap();
        let id = spec.var_id(VarIndex::Alpha { i: 1, j: 3 }).unwrap();
        assert_eq!(pt.values[id], q(-1).mul_ref(&q(2).inv().unwrap()));
        assert!(verify_vanishing(&spec, &pt).is_ok());
        assert_eq!(cij_consistency(&cfg), None);
    }

    #[test]
    fn coincident_points_rejected() {
        assert!(PointConfig::<Rational>::from_ints(&(), &[0, 1, 1], &[1, 1, 1], &[]).is_err());
        assert!(PointConfig::<Rational>::from_ints(&(), &[0, 1, 2], &[1, 0, 1], &[]).is_err());
        assert!(PointConfig::<Rational>::from_ints(&(), &[0, 1, 2], &[1, 1, 1], &[2]).is_err());
    }

    #[test]
    fn config_points_lie_on_the_variety() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, m) in [(4, 0), (5, 0), (3, 1), (2, 2), (3, 2)] {
            let spec: PresentationSpec<Rational> = build_bnm(&(), n, m).unwrap();
            for _ in 0..20 {
                let cfg = random_config(&mut rng, &(), n, m, 30).unwrap();
                let pt = alpha_from_config(&cfg, &spec).unwrap();
                assert!(verify_vanishing(&spec, &pt).is_ok(), "{}", spec.name());
            }
        }
        let p = PrimeModulus::default();
        let spec: PresentationSpec<Fp> = build_an(&p, 5, PivotScheme::common_for_an(5)).unwrap();
        for _ in 0..20 {
            let cfg = random_config(&mut rng, &p, 5, 0, 1000).unwrap();
            assert!(verify_vanishing(&spec, &alpha_from_config(&cfg, &spec).unwrap()).is_ok());
        }
    }

    #[test]
    fn zero_point_vanishes_and_random_points_do_not() {
        let spec: PresentationSpec<Rational> = build_an(&(), 4, PivotScheme::cyclic(4)).unwrap();
        assert!(verify_vanishing(&spec, &AffinePoint::zero(&spec)).is_ok());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            assert!(!verify_vanishing(&spec, &random_point(&mut rng, &spec, 50)).is_ok());
        }
    }

    // f_i f_j - a_ij f_j - a_ji f_i must be a constant equal to c_ij.
    #[test]
    fn partial_fraction_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [4, 5] {
            let spec: PresentationSpec<Rational> = build_an(&(), n, PivotScheme::cyclic(n)).unwrap();
            for _ in 0..3 {
                let cfg: PointConfig<Rational> = random_config(&mut rng, &(), n, 0, 20).unwrap();
                let f = |i: usize, t: &Rational| cfg.section_function(&spec, i, t).unwrap();
                let a = |i: usize, j: usize| f(i, &cfg.z()[j - 1]);
                for i in 1..=n {
                    for j in (1..=n).filter(|&j| j != i) {
                        let consts: Vec<Rational> = [101, 203, 307, 401]
                            .iter()
                            .map(|&t| {
                                let t = q(t);
                                f(i, &t).mul_ref(&f(j, &t)).sub_ref(&a(i, j).mul_ref(&f(j, &t))).sub_ref(&a(j, i).mul_ref(&f(i, &t)))
                            })
                            .collect();
                        assert!(consts.windows(2).all(|w| w[0] == w[1]));
                        for k in (1..=n).filter(|&k| k != i && k != j) {
                            let c = a(i, k).mul_ref(&a(j, k)).sub_ref(&a(i, j).mul_ref(&a(j, k))).sub_ref(&a(i, k).mul_ref(&a(j, i)));
                            assert_eq!(c, consts[0]);
                        }
                    }
                }
                assert_eq!(cij_witness(n, n, a), None);
            }
        }
    }

    #[test]
    fn perturbed_table_gives_witness() {
        let cfg: PointConfig<Rational> = PointConfig::from_ints(&(), &[0, 1, 3, 7], &[1, 2, -1, 3], &[]).unwrap();
        let w = cij_witness(4, 4, |i, x| {
            let v = cfg.alpha_tilde(i, x);
            if (i, x) == (1, 3) {
                v.add_ref(&q(1))
            } else {
                v
            }
        });
        assert!(w.is_some());
    }

    #[test]
    fn pivot_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a: PresentationSpec<Rational> = build_an(&(), 5, PivotScheme::cyclic(5)).unwrap();
        let b: PresentationSpec<Rational> = build_an(&(), 5, PivotScheme::common_for_an(5)).unwrap();
        for _ in 0..10 {
            let cfg = random_config(&mut rng, &(), 5, 0, 20).unwrap();
            let (pa, pb) = (alpha_from_config(&cfg, &a).unwrap(), alpha_from_config(&cfg, &b).unwrap());
            for i in 1..=5 {
                for j in (1..=5).filter(|&j| j != i) {
                    for k in (1..=5).filter(|&k| k != i && k != j) {
                        let d = |s: &PresentationSpec<Rational>, p: &AffinePoint<Rational>| {
                            s.section(i, j).sub(&s.section(i, k)).evaluate(&p.values, &())
                        };
                        assert_eq!(d(&a, &pa), d(&b, &pb));
                    }
                }
            }
        }
    }

    #[test]
    fn torus_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let spec: PresentationSpec<Rational> = build_bnm(&(), 3, 2).unwrap();
        for _ in 0..10 {
            let cfg = random_config(&mut rng, &(), 3, 2, 20).unwrap();
            let u: Vec<Rational> = (0..3).map(|_| q(rng.gen_range(1..9))).collect();
            let before = alpha_from_config(&cfg, &spec).unwrap();
            let after = alpha_from_config(&cfg.scaled(&u).unwrap(), &spec).unwrap();
            assert!(verify_vanishing(&spec, &after).is_ok());
            for (v, (x, y)) in spec.vars().iter().zip(before.values.iter().zip(&after.values)) {
                assert_eq!(x.mul_ref(&u[v.block() - 1]), *y);
            }
        }
    }

    #[test]
    fn jacobian_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for (n, r) in [(4, 3), (5, 8)] {
            let spec: PresentationSpec<Rational> = build_an(&(), n, PivotScheme::cyclic(n)).unwrap();
            for _ in 0..5 {
                let cfg = random_config(&mut rng, &(), n, 0, 30).unwrap();
                assert_eq!(jacobian_rank_at(&spec, &alpha_from_config(&cfg, &spec).unwrap()).unwrap(), r);
            }
            assert_eq!(expected_codimension(&spec), r);
        }
        let conifold: PresentationSpec<Rational> = build_bnm(&(), 2, 2).unwrap();
        let cfg = PointConfig::from_ints(&(), &[0, 1], &[1, 1], &[2, 3]).unwrap();
        assert_eq!(jacobian_rank_at(&conifold, &alpha_from_config(&cfg, &conifold).unwrap()).unwrap(), 1);
        let spec: PresentationSpec<Rational> = build_an(&(), 4, PivotScheme::cyclic(4)).unwrap();
        assert!(jacobian_rank_at(&spec, &random_point(&mut rng, &spec, 50)).is_err());
    }

    #[test]
    fn singular_loci() {
        let p = PrimeModulus::default();
        let conifold: PresentationSpec<Fp> = build_bnm(&p, 2, 2).unwrap();
        assert_eq!(singular_locus_dim(&conifold, 1, DEFAULT_MINOR_BUDGET).unwrap(), KrullDimension::Dim(0));
        let a3: PresentationSpec<Fp> = build_an(&p, 3, PivotScheme::cyclic(3)).unwrap();
        assert_eq!(singular_locus_dim(&a3, 0, DEFAULT_MINOR_BUDGET).unwrap(), KrullDimension::Empty);
        let a5: PresentationSpec<Fp> = build_an(&p, 5, PivotScheme::cyclic(5)).unwrap();
        assert!(matches!(singular_locus_dim(&a5, 8, DEFAULT_MINOR_BUDGET), Err(Error::Budget { .. })));
    }
}
