use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use qna_core::nascalar::rational::{format_rational, int, parse_rational, ratio};
use qna_core::nascalar::{LaurentScalar, LogNorm, NaField, PadicScalar, Rational, DEFAULT_PRECISION};
use qna_core::qgl2::{
    default_samples, det_q, gl2_mul, gl2_sup_norm, normal_form_with, rep_relations_check, s_forms, build_rep,
    GL2Element, Split, Strategy, T,
};
use qna_core::qtorus::{
    gauss_norm, point_seminorm, torsor_act, torsor_pullback_base, Orientation, PolyRadius, QSeries, TorsorElement,
    TwistData,
};
use qna_core::scattering::{
    factorize_with, five_term_check, ordered_product, qdilog, qpochhammer_inf, Cone, DiagramJson, GroupLog, Line,
    QDilogSeries, Schedule, Slope, SlopeFactor, WallAutomorphism,
};
use qna_core::singmodel::{
    aqs_relations, aqs_relations_check, classify, gluing_compat_check, j_embed, j_preimage, shift_representation,
    spectrum_grid, AxisSpec, GridSpec, ShiftParams, ShiftSpec,
};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn qna(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qna"))
        .args(args)
        .output()
        .expect("qna binary runs")
}

fn laurent_q() -> LaurentScalar {
    LaurentScalar::default_q(DEFAULT_PRECISION)
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n = loop {
        let n = rng.gen_range(-4i64..=4);
        if n != 0 {
            break n;
        }
    };
    ratio(n, rng.gen_range(1..=3))
}

fn laurent_coeff(rng: &mut ChaCha8Rng, vals: std::ops::RangeInclusive<i64>) -> LaurentScalar {
    let r = small_rational(rng);
    LaurentScalar::constant(&r, DEFAULT_PRECISION).mul(&LaurentScalar::t_power(rng.gen_range(vals), DEFAULT_PRECISION))
}

fn padic_coeff(rng: &mut ChaCha8Rng, p: u64, vals: std::ops::RangeInclusive<i64>) -> PadicScalar {
    let r = small_rational(rng);
    let k = rng.gen_range(vals);
    let pk = if k >= 0 { int(p.pow(k as u32) as i64) } else { ratio(1, p.pow((-k) as u32) as i64) };
    PadicScalar::new(r * pk, p).expect("prime")
}

// Criterion 1: pentagon preset at order 10, checked against a fresh peel.

fn wall_log<F: NaField>(tw: &Arc<TwistData<F>>, line: &Line<F>) -> Result<GroupLog<F>, String> {
    GroupLog::from_series(tw, Cone::standard(), [int(2), int(2)], &line.series(tw)).map_err(err)
}

/// Reads the slope-1 log off `m` one degree at a time from the `ξ`-image.
fn peel_diagonal<F: NaField>(tw: &Arc<TwistData<F>>, m: &WallAutomorphism<F>, order: u64) -> Result<GroupLog<F>, String> {
    let cone = Cone::standard();
    let base = [int(2), int(2)];
    let xi = QSeries::unit_monomial(tw, &[1, 0]);
    let mut log = QSeries::zero(tw);
    for k in 1..=(order / 2) as i64 {
        let candidate = GroupLog::from_series(tw, cone.clone(), base.clone(), &log).map_err(err)?;
        let current = WallAutomorphism::from_log(&candidate, order);
        let diff = m.xi_image().sub(current.xi_image());
        let mu = vec![-k, -k];
        let at = vec![1 - k, -k];
        let probe = QSeries::unit_monomial(tw, &mu).commutator(&xi, None);
        let s = probe.coeff(&at).ok_or("probe bracket vanished")?.clone();
        if let Some(d) = diff.coeff(&at) {
            log = log.add(&QSeries::monomial(tw, mu, d.div(&s).map_err(err)?));
        }
    }
    GroupLog::from_series(tw, cone, base, &log).map_err(err)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let out = qna(&["scatter", "--preset", "pentagon", "--order", "10"]);
    let elapsed = start.elapsed();
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let diagram: DiagramJson = serde_json::from_slice(&out.stdout).map_err(err)?;
    let (tw, lines) = diagram.build::<LaurentScalar>().map_err(err)?;
    let covectors: BTreeSet<[i64; 2]> = lines.iter().map(|l| l.covector()).collect();
    ensure(lines.len() == 3, || format!("{} walls", lines.len()))?;
    ensure(covectors == BTreeSet::from([[1, 0], [0, 1], [1, 1]]), || format!("covectors {covectors:?}"))?;
    let by = |c: [i64; 2]| lines.iter().find(|l| l.covector() == c).expect("covector present");

    let order = 10;
    let a0 = WallAutomorphism::from_log(&wall_log(&tw, by([1, 0]))?, order);
    let ainf = WallAutomorphism::from_log(&wall_log(&tw, by([0, 1]))?, order);
    let middle = wall_log(&tw, by([1, 1]))?;
    let m = a0
        .inverse()
        .and_then(|x| x.compose(&ainf))
        .and_then(|x| x.compose(&a0))
        .and_then(|x| x.compose(&ainf.inverse()?))
        .map_err(err)?;
    let peeled = peel_diagonal(&tw, &m, order)?;
    ensure(peeled == middle, || "peeled slope-1 log differs from the middle wall".into())?;
    ensure(WallAutomorphism::from_log(&peeled, order) == m, || "peel does not reproduce the quotient".into())?;
    let report = five_term_check(&laurent_q(), order).map_err(err)?;
    ensure(report.pass, || "five-term check failed".into())?;
    let u = report.middle_scale.ok_or("no middle scale")?;
    ensure(u == laurent_q().inv().map_err(err)?, || format!("middle scale {u}"))?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("slopes {{0, 1, inf}}, peel exact, {:.2} s", elapsed.as_secs_f64()))
}

// Criterion 2: factorization round trip.

fn random_pair<F: NaField>(
    tw: &Arc<TwistData<F>>,
    rng: &mut ChaCha8Rng,
    coeff: &dyn Fn(&mut ChaCha8Rng) -> F,
    order: u64,
) -> Result<(SlopeFactor<F>, SlopeFactor<F>), String> {
    let base = [int(2), int(2)];
    let mut wall = |axis: usize| {
        let mut terms = Vec::new();
        for k in 1..=order {
            if k == 1 || rng.gen_bool(0.5) {
                let key = if axis == 0 { (k, 0) } else { (0, k) };
                terms.push((key, coeff(rng)));
            }
        }
        GroupLog::new(tw, Cone::standard(), base.clone(), terms).map_err(err)
    };
    let g0 = SlopeFactor::new(Slope::zero(), wall(0)?).map_err(err)?;
    let ginf = SlopeFactor::new(Slope::Infinite, wall(1)?).map_err(err)?;
    Ok((ginf, g0))
}

fn round_trips<F: NaField>(
    tw: &Arc<TwistData<F>>,
    rng: &mut ChaCha8Rng,
    coeff: &dyn Fn(&mut ChaCha8Rng) -> F,
    count: usize,
) -> Result<usize, String> {
    let order = 6;
    let cone = Cone::standard();
    let mut walls = 0;
    for i in 0..count {
        let (ginf, g0) = random_pair(tw, rng, coeff, order)?;
        ensure(ginf.log().is_admissible() && g0.log().is_admissible(), || format!("pair {i} inadmissible"))?;
        let asc = factorize_with(&ginf, &g0, order, Schedule::Ascending).map_err(err)?;
        let desc = factorize_with(&ginf, &g0, order, Schedule::Descending).map_err(err)?;
        ensure(asc == desc, || format!("pair {i}: schedules disagree"))?;
        let lhs = ordered_product(&asc, tw, &cone, order).map_err(err)?;
        let rhs = ordered_product(&[ginf, g0], tw, &cone, order).map_err(err)?;
        ensure(lhs == rhs, || format!("pair {i}: ordered product differs"))?;
        walls += asc.len();
    }
    Ok(walls)
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let tw = TwistData::plane(laurent_q()).map_err(err)?;
    let a = round_trips(&tw, &mut rng, &|r| laurent_coeff(r, 0..=2), 50)?;
    let tw = TwistData::plane(PadicScalar::default_q(5).map_err(err)?).map_err(err)?;
    let b = round_trips(&tw, &mut rng, &|r| padic_coeff(r, 5, 0..=2), 50)?;
    Ok(format!("100 pairs, {} factors, both schedules identical", a + b))
}

// Criterion 3: Gauss-norm multiplicativity.

fn random_series<F: NaField>(tw: &Arc<TwistData<F>>, rng: &mut ChaCha8Rng, coeff: &dyn Fn(&mut ChaCha8Rng) -> F) -> QSeries<F> {
    let n = tw.rank();
    let terms: Vec<(Vec<i64>, F)> = (0..rng.gen_range(1..=4))
        .map(|_| ((0..n).map(|_| rng.gen_range(-2..=2)).collect(), coeff(rng)))
        .collect();
    QSeries::from_terms(tw, terms).expect("rank matches")
}

fn multiplicative<F: NaField>(
    tw: &Arc<TwistData<F>>,
    rng: &mut ChaCha8Rng,
    coeff: &dyn Fn(&mut ChaCha8Rng) -> F,
    count: usize,
) -> Result<(), String> {
    for i in 0..count {
        let f = random_series(tw, rng, coeff);
        let g = random_series(tw, rng, coeff);
        let r = PolyRadius::new((0..tw.rank()).map(|_| ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect());
        let fg = f.mul(&g);
        let lhs = gauss_norm(&fg, &r).map_err(err)?;
        let rhs = gauss_norm(&f, &r).map_err(err)? + gauss_norm(&g, &r).map_err(err)?;
        ensure(lhs == rhs, || format!("pair {i}: |fg| = {lhs}, |f| + |g| = {rhs}"))?;
    }
    Ok(())
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let plane = TwistData::plane(laurent_q()).map_err(err)?;
    multiplicative(&plane, &mut rng, &|r| laurent_coeff(r, -2..=2), 334)?;
    let rank3 = TwistData::new(3, &[(1, 0, 1), (2, 0, 2), (2, 1, -1)], laurent_q()).map_err(err)?;
    multiplicative(&rank3, &mut rng, &|r| laurent_coeff(r, -2..=2), 333)?;
    let padic = TwistData::new(2, &[(1, 0, 3)], PadicScalar::default_q(7).map_err(err)?).map_err(err)?;
    multiplicative(&padic, &mut rng, &|r| padic_coeff(r, 7, -2..=2), 333)?;
    Ok("1000 pairs over 3 twists, 0 failures".into())
}

// Criterion 4: relations of A_q(S).

fn shift_relations<F: NaField>(params: &ShiftParams<F>) -> Result<usize, String> {
    let mut checked = 0;
    for r in -2..=2 {
        for (name, rel) in aqs_relations(&params.q) {
            let op = shift_representation(&rel, &int(r), params, 128).map_err(err)?;
            ensure(op.is_zero_on_interior(), || format!("{name} at rho = {r}"))?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn criterion_4() -> Check {
    ensure(aqs_relations_check(&laurent_q()).map_err(err)?.pass(), || "embedding over Q((t))".into())?;
    let qp = PadicScalar::default_q(5).map_err(err)?;
    ensure(aqs_relations_check(&qp).map_err(err)?.pass(), || "embedding over Q_5".into())?;
    let mut n = shift_relations(&ShiftParams::new(qp.clone()))?;
    let scaled = ShiftParams::scaled(
        qp.clone(),
        PadicScalar::from_int(5, 5).map_err(err)?,
        PadicScalar::new(ratio(3, 25), 5).map_err(err)?,
    )
    .map_err(err)?;
    n += shift_relations(&scaled)?;
    n += shift_relations(&ShiftParams::new(laurent_q()))?;
    Ok(format!("4 relations under the embedding, {n} shift matrices at M = 128"))
}

// Criterion 5: the spectrum image.

fn criterion_5() -> Check {
    let axis = || AxisSpec {
        min: "-2".into(),
        max: "2".into(),
        steps: 20,
    };
    let spec = GridSpec {
        u: axis(),
        v: axis(),
        random: 0,
        shift: Some(ShiftSpec {
            rhos: (-2..=2).map(|r| r.to_string()).collect(),
            window: 32,
        }),
    };
    let report = spectrum_grid(&spec, &laurent_q(), 0).map_err(err)?;
    ensure(report.rows.len() == 400, || format!("{} grid rows", report.rows.len()))?;
    ensure(report.shift_rows.len() == 5, || format!("{} shift rows", report.shift_rows.len()))?;
    ensure(report.failures == 0, || format!("{} failures reported", report.failures))?;
    let rows = report
        .rows
        .iter()
        .map(|r| (&r.f, r.stratum))
        .chain(report.shift_rows.iter().map(|r| (&r.f, r.stratum)));
    for (f, stratum) in rows {
        let p = [parse_rational(&f[0]), parse_rational(&f[1]), parse_rational(&f[2])];
        let p = [p[0].clone().map_err(err)?, p[1].clone().map_err(err)?, p[2].clone().map_err(err)?];
        let s = classify(&p).ok_or_else(|| format!("{f:?} outside the case table"))?;
        ensure(Some(s) == stratum, || format!("{f:?} reported as {stratum:?}"))?;
        let [x, y] = j_preimage(&p).ok_or_else(|| format!("no preimage for {f:?}"))?;
        ensure(j_embed(&x, &y) == p, || format!("preimage of {f:?} does not re-embed"))?;
    }
    Ok("405 points classified, every preimage re-embeds".into())
}

// Criterion 6: chart gluing.

fn criterion_6() -> Check {
    let a = gluing_compat_check(&laurent_q(), 8).map_err(err)?;
    let b = gluing_compat_check(&PadicScalar::default_q(5).map_err(err)?, 8).map_err(err)?;
    if let Some(c) = a.cases.iter().find(|c| !c.agrees()) {
        return Err(format!("{} on {:?} over Q((t))", c.overlap, c.generator));
    }
    if let Some(c) = b.cases.iter().find(|c| !c.agrees()) {
        return Err(format!("{} on {:?} over Q_5", c.overlap, c.generator));
    }
    ensure(a.cases.len() >= 6, || format!("only {} comparisons", a.cases.len()))?;
    Ok(format!("{} overlap comparisons agree in each field", a.cases.len()))
}

// Criterion 7: quantum dilogarithm series.

fn criterion_7() -> Check {
    let order = 12;
    let q = laurent_q();
    let poch = qpochhammer_inf(&q, order).map_err(err)?;
    let li = qdilog(&q, order).map_err(err)?;
    ensure(poch.log().and_then(|l| l.exp()).map_err(err)? == poch, || "exp(log (x;q)) differs".into())?;
    ensure(li.exp().and_then(|e| e.log()).map_err(err)? == li, || "log(exp Li) differs".into())?;
    let via_li = li.negate_arg().scale(&q.sub(&q.one_like()).inv().map_err(err)?).exp().map_err(err)?;
    ensure(via_li == poch, || "(x;q) differs from exp(Li(-x)/(q-1))".into())?;

    let x = QDilogSeries::new({
        let mut c = vec![q.zero_like(); order + 1];
        c[0] = q.one_like();
        c[1] = q.one_like().neg();
        c
    });
    ensure(x.mul(&poch.rescale_arg(&q)) == poch, || "(x;q) differs from (1-x)(qx;q)".into())?;

    for n in 1..=8 {
        let got = li.coeff(n).value_at_zero().ok_or_else(|| format!("coefficient {n} has a pole at q = 1"))?;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let want = ratio(sign, (n * n) as i64);
        ensure(got == want, || format!("coefficient {n} tends to {}", format_rational(&got)))?;
    }
    Ok("round trips exact to order 12, limits (-1)^n/n^2 for n <= 8".into())
}

// Criterion 8: quantum GL2.

fn random_word(rng: &mut ChaCha8Rng) -> Vec<T> {
    (0..rng.gen_range(0..=8)).map(|_| T::ALL[rng.gen_range(0..4)]).collect()
}

fn gl2_at(p: u64, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let q = PadicScalar::default_q(p).map_err(err)?;
    let one = q.one_like();
    for i in 0..500 {
        let w = vec![(one.clone(), random_word(rng))];
        let l = normal_form_with(&q, &w, Strategy::Leftmost).map_err(err)?;
        let r = normal_form_with(&q, &w, Strategy::Rightmost).map_err(err)?;
        ensure(l == r, || format!("word {i} at p = {p}: strategies disagree"))?;
    }

    let det = det_q(&q).map_err(err)?;
    let mut probes: Vec<GL2Element> = T::ALL.iter().map(|&g| GL2Element::generator(&q, g)).collect::<Result<_, _>>().map_err(err)?;
    for _ in 0..20 {
        let w = vec![(one.clone(), random_word(rng))];
        probes.push(normal_form_with(&q, &w, Strategy::Leftmost).map_err(err)?);
    }
    for x in &probes {
        let dx = gl2_mul(&det, x).map_err(err)?;
        let xd = gl2_mul(x, &det).map_err(err)?;
        ensure(dx == xd, || format!("det_q does not commute with {x}"))?;
    }

    let samples = default_samples(&q).map_err(err)?;
    ensure(samples.len() == 9, || format!("{} samples", samples.len()))?;
    let cs: BTreeSet<String> = samples.iter().map(|(c, _)| c.to_string()).collect();
    for (c, _) in samples.iter().filter(|(_, t)| t.is_one()) {
        for m in 1..=50 {
            let f = s_forms(&q, c, m).map_err(err)?;
            ensure(f.iter().all(|x| *x == f[0]), || format!("s({m}) forms disagree at c = {c}"))?;
        }
    }
    for split in [Split::UnitUpper, Split::UnitLower] {
        for (c, t) in &samples {
            let rep = build_rep(&q, c, t, 64, split).map_err(err)?;
            let report = rep_relations_check(&rep).map_err(err)?;
            if let Some((name, _)) = report.residuals.iter().find(|(_, r)| !r.is_zero_on_interior()) {
                return Err(format!("{name} fails at c = {c}, t = {t}, {split:?}"));
            }
        }
    }

    let t21 = GL2Element::generator(&q, T::T21).map_err(err)?;
    let n21 = gl2_sup_norm(&t21, &samples, 64, Split::UnitUpper).map_err(err)?;
    for s in n21.per_sample.iter().filter(|s| s.c.valuation() == Some(0)) {
        ensure(s.norm.value == LogNorm::zero(), || format!("|t21| = {} at c = {}", s.norm.value, s.c))?;
    }
    ensure(n21.log_norm == LogNorm::zero(), || format!("sup |t21| = {}", n21.log_norm))?;
    let t11 = GL2Element::generator(&q, T::T11).map_err(err)?;
    let n11 = gl2_sup_norm(&t11, &samples, 64, Split::UnitUpper).map_err(err)?;
    ensure(n11.log_norm == LogNorm::from_int(-1), || format!("sup |t11| = {}", n11.log_norm))?;
    Ok(format!("p = {p}: {} leaf classes", cs.len()))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = gl2_at(5, &mut rng)?;
    let b = gl2_at(7, &mut rng)?;
    Ok(format!("{a}; {b}; 500 words each, norms -1 and 0"))
}

// Criterion 9: torsor equivariance.

fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..6 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let k = rng.gen_range(-2..=2);
        let row = a[j].clone();
        for (x, y) in a[i].iter_mut().zip(row) {
            *x += k * y;
        }
    }
    if rng.gen_bool(0.5) {
        a.swap(0, 1);
    }
    a
}

fn equivariant<F: NaField>(
    tw: &Arc<TwistData<F>>,
    rng: &mut ChaCha8Rng,
    coeff: &dyn Fn(&mut ChaCha8Rng) -> F,
    count: usize,
) -> Result<(), String> {
    let n = tw.rank();
    for i in 0..count {
        let a = random_unimodular(n, rng);
        let lambda: Vec<F> = (0..n).map(|_| coeff(rng)).collect();
        let g = TorsorElement::new(a.clone(), lambda.clone(), Orientation::General).map_err(err)?;
        let f = random_series(tw, rng, coeff);
        let x: Vec<Rational> = (0..n).map(|_| ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
        let acted = torsor_act(&g, &f).map_err(err)?;
        let lhs = point_seminorm(&acted, &x).map_err(err)?;
        let rhs = point_seminorm(&f, &torsor_pullback_base(&g, &x).map_err(err)?).map_err(err)?;
        let direct = LogNorm::max_of(f.terms().iter().map(|(e, c)| {
            let mut s = c.log_norm();
            for k in 0..n {
                s = s.shift(&(lambda[k].log_norm().finite().expect("unit").clone() * int(e[k])));
                let ae: i64 = (0..n).map(|j| a[k][j] * e[j]).sum();
                s = s.shift(&(x[k].clone() * int(ae)));
            }
            s
        }));
        ensure(lhs == rhs && lhs == direct, || format!("element {i}: {lhs} vs {rhs} vs {direct}"))?;
    }
    Ok(())
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let plane = TwistData::plane(laurent_q()).map_err(err)?;
    equivariant(&plane, &mut rng, &|r| laurent_coeff(r, -2..=2), 40)?;
    let rank3 = TwistData::new(3, &[(1, 0, 1), (2, 1, 2)], laurent_q()).map_err(err)?;
    equivariant(&rank3, &mut rng, &|r| laurent_coeff(r, -2..=2), 30)?;
    let padic = TwistData::plane(PadicScalar::default_q(3).map_err(err)?).map_err(err)?;
    equivariant(&padic, &mut rng, &|r| padic_coeff(r, 3, -2..=2), 30)?;
    Ok("100 elements, seminorms agree exactly".into())
}

// Criterion 10: CLI contract.

fn schema(name: &str) -> Value {
    let path = format!("{}/../../schemas/{name}.schema.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(&path).expect("schema file")).expect("schema is JSON")
}

fn validate(name: &str, instance: &Value) -> Result<(), String> {
    let registry = jsonschema::Registry::new()
        .add("https://qna.example/schemas/scalar.schema.json", schema("scalar"))
        .and_then(|r| r.prepare())
        .map_err(err)?;
    let validator = jsonschema::options().with_registry(&registry).build(&schema(name)).map_err(err)?;
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    ensure(errors.is_empty(), || format!("{name}: {}", errors.join("; ")))
}

fn run_twice(args: &[&str]) -> Result<Vec<u8>, String> {
    let a = qna(args);
    ensure(a.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&a.stderr)))?;
    let b = qna(args);
    ensure(a.stdout == b.stdout, || format!("{args:?} is not deterministic"))?;
    Ok(a.stdout)
}

fn exit_code(args: &[&str]) -> Option<i32> {
    qna(args).status.code()
}

fn criterion_10() -> Check {
    const NORM: &str = r#"{"series":{"twist":{"n":2,"c":[[2,1,-1]],"q":{"kind":"padic","p":5,"value":"6/1"}},"terms":[[[1,0],{"kind":"padic","p":5,"value":"5/1"}],[[0,2],{"kind":"padic","p":5,"value":"1/1"}]]},"log_radius":["1","-1"]}"#;
    const GRID: &str = r#"{"u":{"min":"-1","max":"1","steps":3},"v":{"min":"0","max":"2","steps":3},"random":4,"shift":{"rhos":["-1","1/2"]}}"#;
    const GL2: &str = r#"{"p":5,"element":[[1,0,0,0,"1"],[0,0,1,0,"5"]],"window":32}"#;
    let dir = std::env::temp_dir().join(format!("qna-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;

    let mut runs = 0;
    let scatters: [&[&str]; 3] = [
        &["scatter", "--preset", "pentagon", "--order", "6"],
        &["scatter", "--preset", "squared", "--order", "6"],
        &["scatter", "--preset", "pentagon", "--order", "5", "--prime", "5"],
    ];
    for (i, args) in scatters.iter().enumerate() {
        let out = run_twice(args)?;
        let v: Value = serde_json::from_slice(&out).map_err(err)?;
        validate("diagram", &v)?;
        let path = dir.join(format!("scatter-{i}.json"));
        std::fs::write(&path, &out).map_err(err)?;
        let again = run_twice(&["scatter", "--in", path.to_str().expect("utf-8 path")])?;
        ensure(again == out, || format!("{args:?} does not re-ingest to itself"))?;
        runs += 2;
    }
    let others: [(&str, &[&str]); 5] = [
        ("norm", &["norm", "--in", NORM]),
        ("spectrum", &["spectrum"]),
        ("spectrum", &["spectrum", "--in", GRID, "--seed", "7"]),
        ("gl2norm", &["gl2norm", "--in", GL2]),
        ("gl2norm", &["gl2norm", "--in", GL2, "--prime", "7"]),
    ];
    for (name, args) in others {
        let v: Value = serde_json::from_slice(&run_twice(args)?).map_err(err)?;
        validate(name, &v)?;
        runs += 1;
    }
    let version = run_twice(&["version"])?;
    let version = String::from_utf8(version).map_err(err)?;
    let parts: Vec<&str> = version.trim().split('.').collect();
    ensure(parts.len() == 3 && parts.iter().all(|p| p.parse::<u64>().is_ok()), || format!("version {version:?}"))?;

    let pentagon = qna(&["scatter", "--preset", "pentagon", "--order", "2"]).stdout;
    let mut bad: Value = serde_json::from_slice(&pentagon).map_err(err)?;
    bad["lines"].as_array_mut().ok_or("no lines")?.truncate(2);
    bad["lines"][0]["factor"]["coeffs"][0][2] = serde_json::json!({"kind": "laurent", "terms": [[-10, "1/1"]], "precision": 32});
    let inadmissible = serde_json::to_string(&bad).map_err(err)?;
    let rank = NORM.replace(r#"["1","-1"]"#, r#"["1"]"#);
    let contract: [(&[&str], i32); 9] = [
        (&["scatter", "--in", "{not json"], 2),
        (&["norm", "--in", "{\"series\": 3}"], 2),
        (&["spectrum", "--in", "{\"u\": []}"], 2),
        (&["gl2norm", "--in", "{}"], 2),
        (&["scatter", "--preset", "hexagon"], 2),
        (&["norm", "--in", &rank], 2),
        (&["scatter", "--in", &inadmissible], 3),
        (&["gl2norm", "--in", r#"{"p":5,"element":[[0,0,0,0,"1"]],"samples":[{"c":"2","t":"1"}]}"#], 3),
        (&["gl2norm", "--in", r#"{"p":5,"element":[[0,0,0,0,"1"]],"samples":[{"c":"5","t":"1"}]}"#], 3),
    ];
    for (args, want) in contract {
        let got = exit_code(args);
        ensure(got == Some(want), || format!("{:?} exited {got:?}, expected {want}", args[0]))?;
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!("{runs} deterministic schema-valid outputs, 9 exit codes honored"))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("five-term identity", criterion_1),
        ("factorization round trip", criterion_2),
        ("Gauss-norm multiplicativity", criterion_3),
        ("A_q(S) soundness", criterion_4),
        ("spectrum image", criterion_5),
        ("gluing compatibility", criterion_6),
        ("quantum dilogarithm", criterion_7),
        ("GL2 suite", criterion_8),
        ("torsor equivariance", criterion_9),
        ("CLI determinism and exit codes", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| *f == n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS {name} ({detail}) [{secs:.1} s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL {name} ({detail}) [{secs:.1} s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
