//! One function per subcommand. Each appends checks, a table and a data
//! payload to the report.

use num_bigint::BigInt;
use psialg::geometry::{
    alpha_from_config, cij_consistency, expected_codimension, jacobian_rank_at, minor_count, random_config,
    random_point, singular_locus_dim, verify_vanishing, PointConfig,
};
use psialg::graded::{graded_dim_with, hilbert_table, SliceResult};
use psialg::groebner::groebner_checked;
use psialg::koszul::{koszul_report_at, relation_space_dimension, KoszulVerdict};
use psialg::presentation::{binomial, relation_degree_audit};
use psialg::series::{curve_module_series, lee_series_restricted};
use psialg::{
    AlgebraKind, Bound, DegreeVector, Field, Fp, GroebnerBasis, KrullDimension, MonomialOrder, PresentationSpec,
    PrimeModulus, RankStrategy, Rational, TruncatedSeries,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{CheckRecord, Report, Status, Table};
use crate::{
    Algebra, Cli, Command, FieldChoice, GbAction, GbArgs, HilbertAction, HilbertArgs, KoszulArgs,
    PresentationAction, RunError, SampleArgs, SingularArgs, TheoremAArgs,
};

pub(crate) fn dispatch(cli: &Cli, r: &mut Report) -> Result<(), RunError> {
    let g = &cli.global;
    match &cli.command {
        Command::Presentation { action: PresentationAction::Dump(a) } => {
            presentation_dump(&Algebra::resolve(a, g.pivot)?, r)
        }
        Command::Hilbert { action } => match action {
            HilbertAction::Lee(a) => hilbert_lee(a, cli, r),
            HilbertAction::Brute(a) => hilbert_brute(a, cli, r),
            HilbertAction::Verify(a) => hilbert_verify(a, cli, r),
        },
        Command::Gb { action: GbAction::Run(a) } => gb_run(a, cli, r),
        Command::Koszul(a) => koszul(a, g.field, r),
        Command::Sample(a) => sample(a, cli, r),
        Command::Singular(a) => singular(a, cli, r),
        Command::VerifyTheoremA(a) => verify_theorem_a(a, cli, r),
    }
}

fn prime_of(field: FieldChoice, what: &str) -> Result<PrimeModulus, RunError> {
    match field {
        FieldChoice::Auto => Ok(PrimeModulus::default()),
        FieldChoice::Prime(p) => Ok(p),
        FieldChoice::Rational => Err(RunError::Usage(format!("{what} runs over a prime field only"))),
    }
}

fn strategy_of(field: FieldChoice) -> RankStrategy {
    match field {
        FieldChoice::Auto => RankStrategy::Verified,
        FieldChoice::Rational => RankStrategy::Rational,
        FieldChoice::Prime(p) => RankStrategy::Modular(p.get()),
    }
}

fn closed_form(alg: &Algebra, bound: Bound) -> Result<TruncatedSeries, RunError> {
    Ok(lee_series_restricted(alg.n, alg.m, bound)?)
}

fn degree_json(a: &DegreeVector) -> Value {
    json!(a.0)
}

// ---------------------------------------------------------------- presentation

fn presentation_checks<F: Field>(spec: &PresentationSpec<F>, alg: &Algebra) -> Result<Vec<CheckRecord>, RunError> {
    let (n, m) = (alg.n as u64, alg.m as u64);
    let inputs = alg.describe();
    let (vars, rels) = match alg.kind {
        AlgebraKind::An => (n * (n - 2), binomial(n, 2) * (n - 3)),
        AlgebraKind::Bnm => (n * (n - 1) + n * (m - 1), binomial(n, 2) * (n + m - 3)),
    };
    let audit = relation_degree_audit(spec);
    let per_pair = (n + m).saturating_sub(3);
    let audit_ok = audit.as_ref().is_ok_and(|c| c.values().all(|&k| k as u64 == per_pair));
    Ok(vec![
        CheckRecord::equal("presentation.variables", "presentation.counts", inputs.clone(), vars, spec.nvars() as u64),
        CheckRecord::equal(
            "presentation.relations",
            "presentation.counts",
            inputs.clone(),
            rels,
            spec.relations().len() as u64,
        ),
        CheckRecord::new(
            "presentation.degrees",
            "presentation.degrees",
            inputs,
            json!({"per_pair": per_pair}),
            match &audit {
                Ok(c) => json!({"per_pair": c.values().copied().collect::<Vec<_>>()}),
                Err(e) => json!({"error": e.to_string()}),
            },
            Status::of(audit_ok),
        ),
    ])
}

fn presentation_dump(alg: &Algebra, r: &mut Report) -> Result<(), RunError> {
    let spec: PresentationSpec<Rational> = alg.build(&())?;
    r.extend(presentation_checks(&spec, alg)?);
    let relations: Vec<Value> = spec
        .relations()
        .iter()
        .map(|rel| {
            json!({
                "pair": rel.pair,
                "points": rel.points,
                "text": rel.poly.render(spec.vars()),
                "terms": rel.poly.term_list(spec.vars()),
            })
        })
        .collect();
    r.data = json!({
        "name": spec.name(),
        "algebra": alg.describe(),
        "variables": spec.vars().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "blocks": spec.vars().iter().map(|v| v.block()).collect::<Vec<_>>(),
        "relations": relations,
    });
    Ok(())
}

// ---------------------------------------------------------------- hilbert

/// Pointwise values for `A_n`: `e_i -> n-2`, `e_i+e_j -> (n-2)^2-(n-3)`,
/// and all ones when `n = 3`. `value` gives the number under test.
fn pointwise_checks(
    n: usize,
    max_total: u32,
    source: &str,
    big: impl Fn(&DegreeVector) -> BigInt,
) -> Vec<CheckRecord> {
    let value = |d: &DegreeVector| u64::try_from(&big(d)).unwrap_or(u64::MAX);
    let mut out = Vec::new();
    if max_total >= 1 {
        let got: Vec<u64> = (0..n).map(|i| value(&DegreeVector::unit(n, i))).collect();
        let want = vec![(n - 2) as u64; n];
        out.push(CheckRecord::equal(
            format!("hilbert.degree-one[{source}]"),
            "hilbert.degree-one",
            json!({"n": n}),
            want,
            got,
        ));
    }
    if max_total >= 2 && n >= 2 {
        let mut got = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut a = DegreeVector::unit(n, i);
                a.0[j] = 1;
                got.push(value(&a));
            }
        }
        let want = vec![((n - 2) * (n - 2) - (n - 3)) as u64; got.len()];
        out.push(CheckRecord::equal(format!("hilbert.pair[{source}]"), "hilbert.pair", json!({"n": n}), want, got));
    }
    if n == 3 {
        let degrees = DegreeVector::up_to_total(3, max_total);
        let bad: Vec<Value> = degrees.iter().filter(|a| value(a) != 1).map(degree_json).collect();
        out.push(CheckRecord::new(
            format!("hilbert.three-points[{source}]"),
            "hilbert.three-points",
            json!({"n": 3, "max_total": max_total}),
            json!({"not_one": []}),
            json!({"not_one": bad}),
            Status::of(bad.is_empty()),
        ));
    }
    out
}

fn hilbert_lee(a: &HilbertArgs, cli: &Cli, r: &mut Report) -> Result<(), RunError> {
    let alg = Algebra::resolve(&a.algebra, cli.global.pivot)?;
    let bound = Bound::Total(a.max_total);
    let series = closed_form(&alg, bound.clone())?;
    let mut t = Table::new(&["a", "total", "lee"]);
    for d in DegreeVector::up_to_total(alg.n, a.max_total) {
        t.push(vec![d.to_string(), d.total().to_string(), series.coefficient(&d).to_string()]);
    }
    r.table = Some(t);
    let nonneg = series.all_nonnegative();
    r.push(CheckRecord::equal("hilbert.nonnegative", "hilbert.lee", alg.describe(), true, nonneg));
    if alg.kind == AlgebraKind::An {
        r.extend(pointwise_checks(alg.n, a.max_total, "lee", |d| series.coefficient(d)));
        if alg.n >= 4 {
            let lhs = curve_module_series(alg.n, bound.clone())?;
            let rhs = lee_series_restricted(alg.n - 1, 1, bound)?;
            let bad: Vec<Value> = DegreeVector::up_to_total(alg.n - 1, a.max_total)
                .iter()
                .filter(|d| lhs.coefficient(d) != rhs.coefficient(d))
                .map(degree_json)
                .collect();
            r.push(CheckRecord::new(
                "hilbert.curve-module",
                "hilbert.curve-module",
                json!({"n": alg.n, "max_total": a.max_total}),
                json!({"mismatches": []}),
                json!({"mismatches": bad}),
                Status::of(bad.is_empty()),
            ));
        }
    }
    Ok(())
}

fn brute_table(alg: &Algebra, max_total: u32, field: FieldChoice) -> Result<(Vec<DegreeVector>, Vec<SliceResult>), RunError> {
    let spec: PresentationSpec<Rational> = alg.build(&())?;
    let degrees = DegreeVector::up_to_total(alg.n, max_total);
    let results = hilbert_table(&spec, &degrees, &strategy_of(field));
    Ok((degrees, results))
}

fn bad_prime_data(results: &[SliceResult]) -> Value {
    let bad: Vec<Value> = results
        .iter()
        .filter(|s| !s.bad_primes.is_empty())
        .map(|s| json!({"a": s.degree, "bad_primes": s.bad_primes}))
        .collect();
    json!(bad)
}

fn hilbert_brute(a: &HilbertArgs, cli: &Cli, r: &mut Report) -> Result<(), RunError> {
    let alg = Algebra::resolve(&a.algebra, cli.global.pivot)?;
    let (degrees, results) = brute_table(&alg, a.max_total, cli.global.field)?;
    let mut t = Table::new(&["a", "total", "monomials", "rank", "dim"]);
    for (d, s) in degrees.iter().zip(&results) {
        t.push(vec![d.to_string(), d.total().to_string(), s.monomials.to_string(), s.rank.to_string(), s.dim.to_string()]);
    }
    r.table = Some(t);
    r.data = json!({"bad_primes": bad_prime_data(&results)});
    Ok(())
}

/// Brute force against the closed form on every degree up to `max_total`.
fn compare_with_closed_form(
    alg: &Algebra,
    max_total: u32,
    field: FieldChoice,
    r: &mut Report,
) -> Result<(Vec<DegreeVector>, Vec<SliceResult>, TruncatedSeries), RunError> {
    let series = closed_form(alg, Bound::Total(max_total))?;
    let (degrees, results) = brute_table(alg, max_total, field)?;
    let bad: Vec<Value> = degrees
        .iter()
        .zip(&results)
        .filter(|(d, s)| BigInt::from(s.dim) != series.coefficient(d))
        .map(|(d, s)| json!({"a": d, "brute": s.dim, "lee": series.coefficient(d).to_string()}))
        .collect();
    let (id, anchor) = match alg.kind {
        AlgebraKind::An => ("hilbert.lee", "hilbert.lee"),
        AlgebraKind::Bnm => ("hilbert.restricted", "hilbert.restricted"),
    };
    r.push(CheckRecord::new(
        format!("{id}[n={},m={},|a|<={}]", alg.n, alg.m, max_total),
        anchor,
        json!({"algebra": alg.describe(), "max_total": max_total}),
        json!({"degrees": degrees.len(), "mismatches": []}),
        json!({"degrees": degrees.len(), "mismatches": bad}),
        Status::of(bad.is_empty()),
    ));
    Ok((degrees, results, series))
}

fn hilbert_verify(a: &HilbertArgs, cli: &Cli, r: &mut Report) -> Result<(), RunError> {
    let alg = Algebra::resolve(&a.algebra, cli.global.pivot)?;
    let (degrees, results, series) = compare_with_closed_form(&alg, a.max_total, cli.global.field, r)?;
    let dims: std::collections::HashMap<&DegreeVector, usize> =
        degrees.iter().zip(&results).map(|(d, s)| (d, s.dim)).collect();
    if alg.kind == AlgebraKind::An {
        r.extend(pointwise_checks(alg.n, a.max_total, "brute", |d| BigInt::from(dims[d])));
    }
    if alg.kind == AlgebraKind::Bnm && (alg.n, alg.m) == (2, 2) {
        let bad: Vec<Value> =
            degrees.iter().filter(|d| dims[d] as u32 != d.0[0] + d.0[1] + 1).map(degree_json).collect();
        r.push(CheckRecord::new(
            "conifold.coefficients",
            "conifold",
            json!({"max_total": a.max_total}),
            json!({"rule": "a+b+1", "mismatches": []}),
            json!({"mismatches": bad}),
            Status::of(bad.is_empty()),
        ));
    }
    let mut t = Table::new(&["a", "total", "lee", "brute", "status"]);
    for (d, s) in degrees.iter().zip(&results) {
        let lee = series.coefficient(d);
        let ok = BigInt::from(s.dim) == lee;
        t.push(vec![d.to_string(), d.total().to_string(), lee.to_string(), s.dim.to_string(), status_word(ok)]);
    }
    r.table = Some(t);
    r.data = json!({"bad_primes": bad_prime_data(&results)});
    Ok(())
}

fn status_word(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.to_string()
}

// ---------------------------------------------------------------- groebner

fn gb_summary<F: Field>(gb: &GroebnerBasis<F>) -> Result<Value, RunError> {
    let dim = if gb.is_complete() { Some(gb.krull_dimension()?) } else { None };
    Ok(json!({
        "size": gb.len(),
        "complete": gb.is_complete(),
        "cap": gb.cap(),
        "histogram": gb.degree_histogram().iter().map(|(d, c)| json!({"degree": d, "count": c})).collect::<Vec<_>>(),
        "krull_dimension": dim,
    }))
}

fn dimension_check(alg: &Algebra, dim: KrullDimension) -> CheckRecord {
    let want = KrullDimension::Dim((2 * alg.n - 3 + alg.m) as u32);
    CheckRecord::equal("gb.dimension", "gb.dimension", alg.describe(), want, dim)
}

/// Standard monomial counts against slices and the closed form.
fn triple_check(
    alg: &Algebra,
    gb: &GroebnerBasis<Fp>,
    spec: &PresentationSpec<Rational>,
    max_total: u32,
    field: FieldChoice,
) -> Result<(CheckRecord, Table), RunError> {
    let series = closed_form(alg, Bound::Total(max_total))?;
    let degrees = DegreeVector::up_to_total(alg.n, max_total);
    let strategy = strategy_of(field);
    let rows: Vec<(u64, usize)> = degrees
        .par_iter()
        .map(|d| Ok((gb.standard_monomial_count(d)?, graded_dim_with(spec, d, &strategy).dim)))
        .collect::<Result<_, psialg::Error>>()?;
    let mut t = Table::new(&["a", "total", "lee", "brute", "standard", "status"]);
    let mut bad = Vec::new();
    for (d, (std, brute)) in degrees.iter().zip(&rows) {
        let lee = series.coefficient(d);
        let ok = BigInt::from(*std) == lee && BigInt::from(*brute) == lee;
        if !ok {
            bad.push(json!({"a": d, "lee": lee.to_string(), "brute": brute, "standard": std}));
        }
        t.push(vec![
            d.to_string(),
            d.total().to_string(),
            lee.to_string(),
            brute.to_string(),
            std.to_string(),
            status_word(ok),
        ]);
    }
    let check = CheckRecord::new(
        format!("gb.triple[n={},m={},|a|<={}]", alg.n, alg.m, max_total),
        "gb.triple",
        json!({"algebra": alg.describe(), "max_total": max_total}),
        json!({"degrees": degrees.len(), "mismatches": []}),
        json!({"degrees": degrees.len(), "mismatches": bad}),
        Status::of(bad.is_empty()),
    );
    Ok((check, t))
}

fn gb_run(a: &GbArgs, cli: &Cli, r: &mut Report) -> Result<(), RunError> {
    let alg = Algebra::resolve(&a.algebra, cli.global.pivot)?;
    let order = MonomialOrder::new(a.order.into());
    if let (Some(cap), Some(v)) = (a.cap, a.verify_total) {
        if v > cap {
            return Err(RunError::Usage(format!("--verify-total {v} exceeds --cap {cap}")));
        }
    }
    let spec_q: PresentationSpec<Rational> = alg.build(&())?;
    match cli.global.field {
        FieldChoice::Rational => {
            let gb = GroebnerBasis::of_spec(&spec_q, &order, a.cap);
            r.data = gb_summary(&gb)?;
            if gb.is_complete() {
                r.push(dimension_check(&alg, gb.krull_dimension()?));
            }
            if a.verify_total.is_some() {
                return Err(RunError::Usage("--verify-total needs a prime field".into()));
            }
        }
        field => {
            let p = prime_of(field, "gb")?;
            let run = groebner_checked(&spec_q.relation_polys(), spec_q.grading(), &order, a.cap, p)?;
            let mut data = gb_summary(&run.basis)?;
            data["prime"] = json!(p.get());
            data["rational_recheck"] = json!(run.rational_agrees);
            r.data = data;
            if let Some(agrees) = run.rational_agrees {
                r.push(CheckRecord::equal("gb.rational", "gb.rational", alg.describe(), true, agrees));
            }
            if run.basis.is_complete() {
                r.push(dimension_check(&alg, run.basis.krull_dimension()?));
            }
            if let Some(v) = a.verify_total {
                let (check, table) = triple_check(&alg, &run.basis, &spec_q, v, field)?;
                r.push(check);
                r.table = Some(table);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- koszul

fn koszul(a: &KoszulArgs, field: FieldChoice, r: &mut Report) -> Result<(), RunError> {
    let p = prime_of(field, "koszul")?;
    let rep = koszul_report_at(a.n, a.kmax, a.budget, p)?;
    let inputs = json!({"n": a.n});
    r.push(CheckRecord::new(
        "koszul.b2",
        "koszul.b2",
        inputs.clone(),
        json!({"formula": relation_space_dimension(a.n)}),
        json!({"rank": rep.dim_r, "series": rep.b2_identity}),
        Status::of(rep.b2_identity),
    ));
    let mut t = Table::new(&["k", "dual_dimension", "predicted", "status"]);
    for row in &rep.rows {
        let status = if row.matches { Status::Pass } else { Status::Informative };
        r.push(CheckRecord::new(
            format!("koszul.dims[k={}]", row.k),
            "koszul.dims",
            json!({"n": a.n, "k": row.k}),
            json!(row.predicted.to_string()),
            json!(row.primes.iter().map(|x| x.1).min().unwrap_or(row.dual_dimension).to_string()),
            status,
        ));
        let word = if row.matches { "match" } else { "informative" };
        t.push(vec![row.k.to_string(), row.dual_dimension.to_string(), row.predicted.to_string(), word.into()]);
    }
    r.table = Some(t);
    let verdict = match &rep.verdict {
        KoszulVerdict::Consistent { kmax } => format!("consistent with Koszulness up to degree {kmax}"),
        KoszulVerdict::Discrepancy { k, dual_dimension, predicted } => {
            format!("first discrepancy at k={k}: dual dimension {dual_dimension}, prediction {predicted}")
        }
    };
    r.data = json!({"verdict": verdict, "report": rep, "prime": p.get()});
    Ok(())
}

// ---------------------------------------------------------------- geometry

struct Sampled {
    config: Value,
    values: Vec<(String, String)>,
    vanishing: psialg::Vanishing,
    cij: Option<(usize, usize, usize, usize)>,
    rank: Option<usize>,
}

fn config_json<F: Field>(cfg: &PointConfig<F>) -> Value {
    let s = |v: &[F]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    json!({"z": s(cfg.z()), "lambda": s(cfg.lambda()), "q": s(cfg.q())})
}

fn sample_with<F: Field>(a: &SampleArgs, alg: &Algebra, ctx: &F::Context, seed: u64, r: &mut Report) -> Result<(), RunError> {
    if a.range < 1 || (2 * a.range + 1) < (alg.n + alg.m) as i64 {
        return Err(RunError::Usage(format!("--range {} is too small for {} distinct points", a.range, alg.n + alg.m)));
    }
    let spec: PresentationSpec<F> = alg.build(ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // all draws happen up front on one stream, so the thread count cannot matter
    let configs: Vec<PointConfig<F>> =
        (0..a.count).map(|_| random_config(&mut rng, ctx, alg.n, alg.m, a.range)).collect::<Result<_, _>>()?;
    let randoms: Vec<_> = (0..a.random_points).map(|_| random_point(&mut rng, &spec, a.range)).collect();

    let sampled: Vec<Sampled> = configs
        .par_iter()
        .map(|cfg| {
            let pt = alpha_from_config(cfg, &spec)?;
            let vanishing = verify_vanishing(&spec, &pt);
            let rank = if vanishing.is_ok() { Some(jacobian_rank_at(&spec, &pt)?) } else { None };
            Ok(Sampled { config: config_json(cfg), values: pt.labelled(&spec), vanishing, cij: cij_consistency(cfg), rank })
        })
        .collect::<Result<_, psialg::Error>>()?;
    let random_ok: Vec<bool> = randoms.par_iter().map(|p| verify_vanishing(&spec, p).is_ok()).collect();

    let inputs = json!({"algebra": alg.describe(), "count": a.count, "seed": seed});
    let bad_vanish: Vec<usize> = sampled.iter().enumerate().filter(|(_, s)| !s.vanishing.is_ok()).map(|(k, _)| k).collect();
    r.push(CheckRecord::new(
        "geometry.vanishing",
        "geometry.vanishing",
        inputs.clone(),
        json!({"vanishing": a.count}),
        json!({"vanishing": a.count - bad_vanish.len(), "failing_samples": bad_vanish}),
        Status::of(bad_vanish.is_empty()),
    ));
    let bad_cij: Vec<Value> =
        sampled.iter().enumerate().filter_map(|(k, s)| s.cij.map(|w| json!({"sample": k, "witness": w}))).collect();
    r.push(CheckRecord::new(
        "geometry.cij",
        "geometry.cij",
        inputs.clone(),
        json!({"witnesses": []}),
        json!({"witnesses": bad_cij}),
        Status::of(bad_cij.is_empty()),
    ));
    let codim = expected_codimension(&spec);
    let ranks: Vec<Option<usize>> = sampled.iter().map(|s| s.rank).collect();
    let rank_ok = ranks.iter().all(|&x| x == Some(codim));
    let mut distinct: Vec<Option<usize>> = ranks.clone();
    distinct.sort_unstable();
    distinct.dedup();
    r.push(CheckRecord::new(
        "geometry.jacobian",
        "geometry.jacobian",
        inputs.clone(),
        json!({"rank": codim}),
        json!({"ranks": distinct}),
        Status::of(rank_ok),
    ));
    if a.random_points > 0 {
        let on: Vec<usize> = random_ok.iter().enumerate().filter(|(_, &ok)| ok).map(|(k, _)| k).collect();
        r.push(CheckRecord::new(
            "geometry.random",
            "geometry.random",
            json!({"algebra": alg.describe(), "count": a.random_points, "seed": seed}),
            json!({"off_variety": a.random_points}),
            json!({"off_variety": a.random_points - on.len(), "on_variety": on}),
            Status::of(on.is_empty()),
        ));
    }
    let points: Vec<Value> = sampled
        .iter()
        .map(|s| json!({"config": s.config, "values": s.values, "vanishing": s.vanishing, "jacobian_rank": s.rank}))
        .collect();
    r.data = json!({"rng": "ChaCha8Rng::seed_from_u64", "codimension": codim, "points": points});
    Ok(())
}

fn sample(a: &SampleArgs, cli: &Cli, r: &mut Report) -> Result<(), RunError> {
    let alg = Algebra::resolve(&a.algebra, cli.global.pivot)?;
    match cli.global.field {
        FieldChoice::Auto | FieldChoice::Rational => sample_with::<Rational>(a, &alg, &(), cli.global.seed, r),
        FieldChoice::Prime(p) => sample_with::<Fp>(a, &alg, &p, cli.global.seed, r),
    }
}

fn singular(a: &SingularArgs, cli: &Cli, r: &mut Report) -> Result<(), RunError> {
    let alg = Algebra::resolve(&a.algebra, cli.global.pivot)?;
    let p = prime_of(cli.global.field, "singular")?;
    let spec: PresentationSpec<Fp> = alg.build(&p)?;
    let c = a.codim.unwrap_or_else(|| expected_codimension(&spec));
    let dim = singular_locus_dim(&spec, c, a.budget)?;
    let inputs = json!({"algebra": alg.describe(), "codim": c});
    match (alg.kind, alg.n, alg.m) {
        (AlgebraKind::Bnm, 2, 2) => {
            r.push(CheckRecord::equal("geometry.singular", "conifold", inputs, KrullDimension::Dim(0), dim));
        }
        (AlgebraKind::An, n, _) => {
            // smooth in codimension <= 4 inside a (2n-3)-dimensional variety
            let bound = 2 * n as i64 - 8;
            let ok = if bound < 0 { dim == KrullDimension::Empty } else { dim.at_most(bound as u32) };
            let want = if bound < 0 { json!("empty") } else { json!(format!("<= {bound}")) };
            r.push(CheckRecord::new("geometry.singular", "geometry.singular", inputs, want, dim, Status::of(ok)));
        }
        _ => {
            r.push(CheckRecord::new(
                "geometry.singular",
                "geometry.singular",
                inputs,
                json!("no stated bound"),
                dim,
                Status::Informative,
            ));
        }
    }
    r.data = json!({"prime": p.get(), "codim": c, "minors": minor_count(&spec, c), "dimension": dim});
    Ok(())
}

// ---------------------------------------------------------------- composite

fn verify_theorem_a(a: &TheoremAArgs, cli: &Cli, r: &mut Report) -> Result<(), RunError> {
    let alg = Algebra::an(a.n, cli.global.pivot)?;
    let field = cli.global.field;
    let spec_q: PresentationSpec<Rational> = alg.build(&())?;
    r.extend(presentation_checks(&spec_q, &alg)?);
    let (degrees, results, _) = compare_with_closed_form(&alg, a.max_total, field, r)?;
    let dims: std::collections::HashMap<&DegreeVector, usize> =
        degrees.iter().zip(&results).map(|(d, s)| (d, s.dim)).collect();
    r.extend(pointwise_checks(alg.n, a.max_total, "brute", |d| BigInt::from(dims[d])));

    let p = match field {
        FieldChoice::Prime(p) => p,
        _ => PrimeModulus::default(),
    };
    let spec_p: PresentationSpec<Fp> = alg.build(&p)?;
    let gb = GroebnerBasis::of_spec(&spec_p, &MonomialOrder::grevlex(), Some(a.max_total.max(2)));
    let (check, table) = triple_check(&alg, &gb, &spec_q, a.max_total, field)?;
    r.push(check);
    r.table = Some(table);
    r.data = json!({"bad_primes": bad_prime_data(&results), "groebner": gb_summary(&gb)?});
    Ok(())
}
