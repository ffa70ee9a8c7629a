//! End-to-end acceptance run: one line per criterion, nonzero exit if any
//! criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Signed;
use perfect_unary::checks::{self, Observed, Status};
use perfect_unary::config::is_squarefree;
use perfect_unary::fieldfile::{self, LoadedField};
use perfect_unary_core::bounds::{
    a_reducibility_bound, class_count_bound, gamma_blichfeldt, BoundReport, EtaVariant, ExponentVariant, Reducibility,
    Theorem,
};
use perfect_unary_core::hp::Real;
use perfect_unary_core::minima::{minimum_and_vectors, trace_gram};
use perfect_unary_core::voronoi::{enumerate_perfect_classes, interior_disjointness_check, is_perfect};
use perfect_unary_core::{EnumerationLimits, EnumerationReport, FieldElement, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CLOSURE_FIELDS: [i64; 7] = [2, 3, 5, 6, 7, 10, 13];

struct Ctx {
    fields: Vec<LoadedField>,
    /// Enumerations of the quadratic fields of criterion 2, in order.
    closures: Vec<EnumerationReport>,
    /// Minimal vectors seen in criteria 1–4, per field label.
    observed: Vec<(String, Observed)>,
}

impl Ctx {
    fn observe(&mut self, label: &str, vs: impl IntoIterator<Item = FieldElement>) {
        let slot = match self.observed.iter().position(|(l, _)| l == label) {
            Some(i) => i,
            None => {
                self.observed.push((label.to_string(), Observed::default()));
                self.observed.len() - 1
            }
        };
        self.observed[slot].1.vectors.extend(vs);
    }
}

type Verdict = Result<String, String>;

type Criterion = (&'static str, fn(&mut Ctx) -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn test_fields() -> Vec<LoadedField> {
    let mut v: Vec<LoadedField> = CLOSURE_FIELDS.iter().map(|&d| fieldfile::quadratic(d, 128).unwrap()).collect();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fields");
    for name in ["cubic49.json", "cubic81.json"] {
        v.push(fieldfile::load_file(&dir.join(name), 128).unwrap());
    }
    v
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn ground_truth(ctx: &mut Ctx) -> Verdict {
    let start = Instant::now();
    let k = &ctx.fields[0].field;
    let q = |n: i64| Q::from_integer(n.into());
    let g = trace_gram(k, &k.one()).map_err(|e| e.to_string())?;
    ensure(g.entries == vec![vec![q(2), q(0)], vec![q(0), q(4)]], || "trace_gram(1) differs".into())?;
    let one = minimum_and_vectors(k, &k.one()).map_err(|e| e.to_string())?;
    ensure(one.minimum == q(2) && one.vectors == vec![k.one()], || "mu(1) or M(1) differs".into())?;
    let a = FieldElement::from_ints(&[2, -1]);
    let m = minimum_and_vectors(k, &a).map_err(|e| e.to_string())?;
    let expected = vec![FieldElement::from_ints(&[1, 0]), FieldElement::from_ints(&[1, 1])];
    ensure(m.minimum == q(4) && m.vectors == expected, || "mu or M of 2-sqrt2 differs".into())?;
    ensure(is_perfect(k, &a).map_err(|e| e.to_string())?.is_perfect(), || "2-sqrt2 not perfect".into())?;
    for (form, rec) in [(k.one(), &one), (a.clone(), &m)] {
        let (mu, list, _) = checks::brute_force_minima(k, &form, 10).ok_or("brute force failed")?;
        ensure(mu == rec.minimum && list == rec.vectors, || "brute force over |c_i| <= 10 disagrees".into())?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.2}s"))?;
    let label = ctx.fields[0].label.clone();
    ctx.observe(&label, one.vectors.into_iter().chain(m.vectors));
    Ok(format!("Q(sqrt 2) forms 1 and 2-sqrt2 exact, brute force agrees, {secs:.3}s"))
}

fn closure(ctx: &mut Ctx) -> Verdict {
    let mut parts = Vec::new();
    for (i, &d) in CLOSURE_FIELDS.iter().enumerate() {
        let f = &ctx.fields[i];
        let start = Instant::now();
        let r = enumerate_perfect_classes(&f.field, &f.lattice, EnumerationLimits::default())
            .map_err(|e| format!("d = {d}: {e}"))?;
        let secs = start.elapsed().as_secs_f64();
        ensure(r.closure_complete, || format!("d = {d}: closure open"))?;
        ensure(checks::perfection(&f.field, &r).status == Status::Pass, || format!("d = {d}: perfection certificate"))?;
        ensure(r.classes.iter().flat_map(|c| &c.facets).all(|l| l.involution == Some(true)), || {
            format!("d = {d}: involution")
        })?;
        ensure(secs < 60.0, || format!("d = {d}: {secs:.1}s"))?;
        parts.push(format!("d={d}:{} ({secs:.2}s)", r.class_count()));
        let label = f.label.clone();
        ctx.observe(&label, r.classes.iter().flat_map(|c| c.minima.vectors.clone()).collect::<Vec<_>>());
        ctx.closures.push(r);
    }
    Ok(format!("classes {}", parts.join(", ")))
}

fn bound_consistency(ctx: &mut Ctx) -> Verdict {
    let mut worst: Option<(f64, String)> = None;
    for (i, r) in ctx.closures.iter().enumerate() {
        let f = &ctx.fields[i];
        let k = &f.field;
        let mut seen = Observed::default();
        seen.vectors.extend(r.classes.iter().flat_map(|c| c.minima.vectors.clone()));
        let mut g = rng(300 + i as u64);
        let samples: Vec<FieldElement> = (0..100).map(|_| checks::random_totally_positive(k, &mut g, 6)).collect();
        ensure(checks::mu_product(k, &samples, &mut seen).status == Status::Pass, || format!("{}: sampling", f.label))?;
        let a = seen.empirical_a(k).ok_or("no minimal vectors")?;
        let b = BoundReport::compute(
            k.degree(),
            k.discriminant(),
            f.lattice.regulator_hp(),
            false,
            Some(Real::from_rational(&a)),
            EtaVariant::Abstract,
        )
        .map_err(|e| e.to_string())?;
        let n_k = Real::from_i64(r.class_count() as i64);
        for (label, bound) in b.class_count_bounds() {
            // compare against the bound as printed to 30 digits
            let printed = bound.to_sig_digits(30);
            ensure(n_k <= *bound, || format!("{}: n_K = {} > {label} = {printed}", f.label, r.class_count()))?;
            let ratio = n_k.to_f64() / bound.to_f64();
            if worst.as_ref().is_none_or(|(w, _)| ratio > *w) {
                worst = Some((ratio, format!("{} {label}", f.label)));
            }
        }
    }
    let (ratio, at) = worst.ok_or("no fields")?;
    Ok(format!("all 4 bounds hold on 7 fields; tightest n_K/bound = {ratio:.3e} at {at}"))
}

fn oracle(ctx: &mut Ctx) -> Verdict {
    let mut total = 0;
    let mut seen_all = Vec::new();
    for (i, f) in ctx.fields.iter().enumerate() {
        let k = &f.field;
        let mut g = rng(400 + i as u64);
        let mut seen = Vec::new();
        for _ in 0..25 {
            let a = checks::random_totally_positive(k, &mut g, 6);
            let fp = minimum_and_vectors(k, &a).map_err(|e| e.to_string())?;
            let mut r = 1;
            let (mu, list) = loop {
                let (mu, list, certified) = checks::brute_force_minima(k, &a, r).ok_or("brute force overflow")?;
                if certified {
                    break (mu, list);
                }
                r += 1;
                ensure(r <= 60, || format!("{}: no certified box for {:?}", f.label, a))?;
            };
            ensure(mu == fp.minimum && list == fp.vectors, || format!("{}: disagreement at {:?}", f.label, a))?;
            total += 1;
            seen.extend(fp.vectors);
        }
        seen_all.push((f.label.clone(), seen));
    }
    for (label, vs) in seen_all {
        ctx.observe(&label, vs);
    }
    Ok(format!("{total} forms over {} fields, mu and M identical", ctx.fields.len()))
}

/// Fundamental unit by direct search: the least `y ≥ 1` with
/// `x² − d·y² = ±4` (`d ≡ 1 mod 4`) or `±1`, as `ln ε`.
fn pell_regulator(d: i64) -> f64 {
    let (c, half) = if d % 4 == 1 { (4, true) } else { (1, false) };
    for y in 1i64.. {
        for s in [-c, c] {
            let x2 = d * y * y + s;
            let x = (x2 as f64).sqrt().round() as i64;
            if x > 0 && x * x == x2 {
                let e = x as f64 + y as f64 * (d as f64).sqrt();
                return if half { (e / 2.0).ln() } else { e.ln() };
            }
        }
    }
    unreachable!()
}

fn regulators(ctx: &mut Ctx) -> Verdict {
    let mut parts = Vec::new();
    for (d, printed) in [(2, 0.8813735870), (5, 0.4812118250), (3, 1.3169578969)] {
        let i = CLOSURE_FIELDS.iter().position(|&x| x == d).unwrap();
        let got = ctx.fields[i].lattice.regulator();
        let oracle = pell_regulator(d);
        ensure((got - oracle).abs() < 1e-9 && (got - printed).abs() < 1e-9, || format!("d = {d}: {got} vs {oracle}"))?;
        parts.push(format!("d={d}: {got:.10}"));
    }
    Ok(parts.join(", "))
}

fn blichfeldt(_: &mut Ctx) -> Verdict {
    let r = |p: i64, q: i64| Real::from_i64(p) / Real::from_i64(q);
    let exact = [
        Real::from_i64(2) / Real::from_i64(3).sqrt(),
        Real::from_i64(2).powf(&r(1, 3)),
        Real::from_i64(2).sqrt(),
        Real::from_i64(8).powf(&r(1, 5)),
        r(64, 3).powf(&r(1, 6)),
        Real::from_i64(64).powf(&r(1, 7)),
        Real::from_i64(2),
    ];
    let mut least = f64::INFINITY;
    for (i, h) in exact.iter().enumerate() {
        let n = i + 2;
        let g = gamma_blichfeldt(n);
        let margin = &g - h;
        // strictly positive once both sides are rounded to 15 digits
        let (gs, hs) = (g.to_sig_digits(15), h.to_sig_digits(15));
        ensure(margin.is_positive() && gs != hs, || format!("n = {n}: {gs} vs {hs}"))?;
        least = least.min(margin.to_f64());
    }
    Ok(format!("n = 2..8 dominated, smallest margin {least:.6e}"))
}

fn product_bound(ctx: &mut Ctx) -> Verdict {
    for (i, f) in ctx.fields.iter().enumerate() {
        let k = &f.field;
        let mut g = rng(700 + i as u64);
        let samples: Vec<FieldElement> = (0..100).map(|_| checks::random_totally_positive(k, &mut g, 6)).collect();
        let out = checks::mu_product(k, &samples, &mut Observed::default());
        ensure(out.status == Status::Pass, || format!("{}: {}", f.label, out.detail))?;
    }
    Ok(format!("100 forms on each of {} fields, no violations", ctx.fields.len()))
}

fn norm_bound(ctx: &mut Ctx) -> Verdict {
    let mut count = 0;
    for f in &ctx.fields {
        let k = &f.field;
        let bound = a_reducibility_bound(k.degree(), k.discriminant());
        let Some((_, seen)) = ctx.observed.iter().find(|(l, _)| *l == f.label) else {
            continue;
        };
        for x in &seen.vectors {
            let nm = Real::from_rational(&k.norm(x).abs());
            ensure(nm <= bound, || {
                format!("{}: |Nm| = {} > {}", f.label, nm.to_sig_digits(12), bound.to_sig_digits(12))
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} minimal vectors within the bound"))
}

fn disjointness(_: &mut Ctx) -> Verdict {
    let mut multi = Vec::new();
    for d in (2..=30).filter(|&d| is_squarefree(d)) {
        let f = fieldfile::quadratic(d, 128).map_err(|e| e.to_string())?;
        let r =
            enumerate_perfect_classes(&f.field, &f.lattice, EnumerationLimits::default()).map_err(|e| e.to_string())?;
        ensure(r.closure_complete, || format!("d = {d}: closure open"))?;
        if r.class_count() < 2 {
            continue;
        }
        let out = interior_disjointness_check(&f.field, &r.classes).map_err(|e| e.to_string())?;
        ensure(out.passed(), || format!("d = {d}: {:?}", out.violations))?;
        multi.push(format!("d={d} ({} cones)", out.cones));
    }
    ensure(!multi.is_empty(), || "no multi-class field".into())?;
    Ok(format!("interiors disjoint for {}", multi.join(", ")))
}

fn unit_invariance(ctx: &mut Ctx) -> Verdict {
    let mut classes: Vec<Vec<FieldElement>> =
        ctx.closures.iter().map(|r| r.classes.iter().map(|c| c.representative.clone()).collect()).collect();
    for f in &ctx.fields[CLOSURE_FIELDS.len()..] {
        let r =
            enumerate_perfect_classes(&f.field, &f.lattice, EnumerationLimits::default()).map_err(|e| e.to_string())?;
        classes.push(r.classes.iter().map(|c| c.representative.clone()).collect());
    }
    for (i, f) in ctx.fields.iter().enumerate() {
        let mut g = rng(1000 + i as u64);
        let mut forms = classes[i].clone();
        forms.extend((0..5).map(|_| checks::random_totally_positive(&f.field, &mut g, 6)));
        let out = checks::unit_invariance(&f.field, &f.lattice, &forms, 20, &mut g);
        ensure(out.status == Status::Pass, || format!("{}: {}", f.label, out.detail))?;
    }
    Ok(format!("20 unit translates on each of {} fields", ctx.fields.len()))
}

fn spot_value(ctx: &mut Ctx) -> Verdict {
    let reg = ctx.fields[0].lattice.regulator_hp();
    let v = class_count_bound(
        2,
        &BigInt::from(8),
        reg,
        &Reducibility::Unit,
        Theorem::One,
        ExponentVariant::Stated,
        EtaVariant::Abstract,
    )
    .map_err(|e| e.to_string())?;
    let pi = Real::pi();
    let expected = Real::from_i64(2048) / (&pi * &pi * &pi * &pi);
    let independent = 2048.0 / std::f64::consts::PI.powi(4);
    let got = v.to_sig_digits(6);
    ensure(got == expected.to_sig_digits(6) && got == Real::from_f64(independent).to_sig_digits(6), || {
        format!("{got} vs {}", expected.to_sig_digits(6))
    })?;
    Ok(format!("{got}, equal to 2048/pi^4 in multi-precision and in f64"))
}

fn sweep_determinism(_: &mut Ctx) -> Verdict {
    let dir = std::env::temp_dir().join(format!("perfect-unary-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in ["a.csv", "b.csv"] {
        let path = dir.join(run);
        let _ = std::fs::remove_file(&path);
        let status = Command::new(env!("CARGO_BIN_EXE_perfect-unary"))
            .args(["sweep-quadratic", "--dmax", "15", "--seed", "7", "--output"])
            .arg(&path)
            .stderr(std::process::Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.code() == Some(0), || format!("exit status {status}"))?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(outputs[0] == outputs[1], || "outputs differ".into())?;
    let rows = outputs[0].iter().filter(|&&b| b == b'\n').count() - 1;
    Ok(format!("{rows} rows, {} bytes, identical", outputs[0].len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("exact small-field ground truth", ground_truth),
        ("enumeration closure", closure),
        ("class-count bound consistency", bound_consistency),
        ("shortest-vector oracle", oracle),
        ("regulators", regulators),
        ("Blichfeldt dominance", blichfeldt),
        ("product of minima bound", product_bound),
        ("norm bound on minimal vectors", norm_bound),
        ("disjoint cone interiors", disjointness),
        ("unit invariance", unit_invariance),
        ("bound spot value", spot_value),
        ("sweep determinism", sweep_determinism),
    ];
    let mut ctx = Ctx { fields: test_fields(), closures: Vec::new(), observed: Vec::new() };
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| check(&mut ctx)))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
