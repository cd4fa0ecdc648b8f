use std::collections::BTreeMap;

use anyhow::{bail, Result};
use kontsevich_core::gauge::GAUGE_KEYS;
use kontsevich_core::jacobi::{solve_claim, ClaimIdentity, Combination};
use kontsevich_core::{
    associator, classify, evaluate_series, gauge_star, jacobiator, rat, star_oh3, GaugeCoefficients, GaugeTransform,
    GraphSeries, Poly, PolyDiffOperator, Rational,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::{arguments, load_poisson, read, read_series, render_series, write_output};
use crate::{AssocArgs, ExpandArgs, Format, GaugeArgs, GaugePreset, Verdict, VerifyArgs};

const TOP: usize = 3;

pub fn expand(a: &ExpandArgs) -> Result<Verdict> {
    let star = star_oh3();
    let series = match a.grade {
        Some(k) => star.grade_part(k.into()),
        None => star,
    };
    write_output(a.output.as_deref(), &render_series(&series, a.format)?)?;
    Ok(Verdict::Pass)
}

fn order_label(order: &[usize]) -> String {
    let parts: Vec<String> = order.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Term counts of one grade keyed by sink in-degrees.
fn order_breakdown(series: &GraphSeries, grade: usize) -> BTreeMap<Vec<usize>, usize> {
    let mut out = BTreeMap::new();
    for t in series.grade(grade) {
        *out.entry(t.graph.sink_in_degrees()).or_insert(0) += 1;
    }
    out
}

fn join(values: &[usize]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn assoc(a: &AssocArgs) -> Result<Verdict> {
    let star = match &a.star {
        Some(path) => read_series(path, 2)?,
        None => star_oh3(),
    };
    let raw = associator(&star)?;
    let reduced = raw.reduce_skew();
    if let Some(path) = &a.output {
        write_output(Some(path), &render_series(&reduced, Format::Text)?)?;
    }
    let raw_counts = raw.term_counts(TOP);
    let reduced_counts = reduced.term_counts(TOP);
    let breakdown: Vec<(usize, BTreeMap<Vec<usize>, usize>)> =
        (0..=TOP).map(|k| (k, order_breakdown(&reduced, k))).filter(|(_, b)| !b.is_empty()).collect();

    let mut text = format!(
        "raw: {}\nreduced: {}\nreduced grade 3: {}\n",
        join(&raw_counts[1..]),
        join(&reduced_counts),
        reduced_counts[3]
    );
    for (k, b) in &breakdown {
        for (order, n) in b {
            text += &format!("grade {k} order {}: {n}\n", order_label(order));
        }
    }
    let mut report = json!({
        "raw_counts": raw_counts,
        "reduced_counts": reduced_counts,
        "orders": breakdown.iter().map(|(k, b)| json!({
            "grade": k,
            "counts": b.iter().map(|(o, n)| json!({"order": o, "terms": n})).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });

    let mut verdict = Verdict::Pass;
    if let Some((name, p)) = load_poisson(&a.poisson)? {
        let order = usize::from(a.order);
        let args = arguments(&a.poisson, p.dim(), 3)?;
        let values: Vec<Poly> = (0..=order)
            .map(|k| PolyDiffOperator::from_series(&reduced.grade_part(k), &p).apply(&args))
            .collect::<Result<_, _>>()?;
        let jac = evaluate_series(&jacobiator().series, &p, &args, 2)?.remove(2).scale(&rat(2, 3));
        let first_nonzero = values.iter().position(|v| !v.is_zero());
        text += &format!(
            "poisson: {name} (dim {}, Jacobi {})\n",
            p.dim(),
            if p.jacobi_verified() { "holds" } else { "fails" }
        );
        for (slot, f) in ["f", "g", "h"].iter().zip(&args) {
            text += &format!("{slot} = {f}\n");
        }
        for (k, v) in values.iter().enumerate() {
            let flag = if v.is_zero() { "" } else { "  NONZERO" };
            text += &format!("ħ^{k}: {v}{flag}\n");
        }
        let two_thirds = values.get(2).map(|v| *v == jac);
        if let Some(agrees) = two_thirds {
            text += &format!("ħ^2 = 2/3 Jac: {}\n", if agrees { "yes" } else { "no" });
        }
        match first_nonzero {
            None => text += "associator: PASS (all evaluated grades are zero)\n",
            Some(k) => {
                text += &format!("associator: FAIL (nonzero at ħ^{k})\n");
                verdict = Verdict::Fail;
            }
        }
        report["evaluation"] = json!({
            "poisson": name,
            "dim": p.dim(),
            "jacobi_verified": p.jacobi_verified(),
            "arguments": args.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "coefficients": values.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "grade_two_is_two_thirds_jacobiator": two_thirds,
            "first_nonzero_grade": first_nonzero,
            "passed": first_nonzero.is_none(),
        });
    }
    emit(a.format, &text, &report)?;
    Ok(verdict)
}

fn emit(format: Format, text: &str, report: &Value) -> Result<()> {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(report)?),
    }
    Ok(())
}

fn combination_label(identity: &ClaimIdentity) -> String {
    let mut s = String::new();
    for (i, (c, label)) in identity.combination.iter().enumerate() {
        let neg = c < &Rational::from_integer(0.into());
        let magnitude = if neg { -c.clone() } else { c.clone() };
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&format!("{magnitude} {label}"));
    }
    s
}

fn rationals(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

pub fn verify_claim(a: &VerifyArgs) -> Result<Verdict> {
    let a3 = match &a.series {
        Some(path) => read_series(path, 3)?.reduce_skew().grade_part(3),
        None => associator(&star_oh3())?.reduce_skew().grade_part(3),
    };
    let report = kontsevich_core::verify_claim(&a3);
    let mut text = String::new();
    let mut orders = Vec::new();
    for c in &report.checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        text += &format!(
            "order {}: A = {}  [{} of {} terms]  {status}{}\n",
            order_label(&c.identity.order),
            combination_label(&c.identity),
            c.associator_terms,
            c.identity.eliminated,
            if c.evaluation_agrees { "" } else { "  (witness evaluation disagrees)" }
        );
        orders.push(json!({
            "order": c.identity.order,
            "combination": combination_label(&c.identity),
            "expected_terms": c.identity.eliminated,
            "associator_terms": c.associator_terms,
            "residual_terms": c.residual.len(),
            "evaluation_agrees": c.evaluation_agrees,
            "passed": c.passed(),
        }));
    }
    let uncovered: Vec<String> = report.uncovered.iter().map(|(o, n)| format!("{} ({n})", order_label(o))).collect();
    text += &format!(
        "eliminated: {} = {} of {} terms\n",
        join(&report.eliminated_counts()),
        report.eliminated_total(),
        report.total_terms
    );
    text += &format!("uncovered orders: {}\n", if uncovered.is_empty() { "none".into() } else { uncovered.join(", ") });

    let mut passed = report.passed();
    let mut solved = Vec::new();
    if a.solve {
        for (identity, result) in solve_claim(&a3) {
            let expected = identity.coefficients();
            let (found, status) = match &result {
                Combination::Solved { coefficients, kernel } if kernel.is_empty() => {
                    let ok = *coefficients == expected;
                    (Some(rationals(coefficients)), if ok { "matches" } else { "MISMATCH" })
                }
                Combination::Solved { coefficients, .. } => (Some(rationals(coefficients)), "NOT UNIQUE"),
                Combination::Infeasible { .. } => (None, "INFEASIBLE"),
            };
            passed &= status == "matches";
            let labels: Vec<String> = identity.labels().iter().map(ToString::to_string).collect();
            text += &format!(
                "solve {} over [{}]: {}  {status}\n",
                order_label(&identity.order),
                labels.join(", "),
                found.as_ref().map_or("-".into(), |f| f.join(", "))
            );
            solved.push(json!({
                "order": identity.order,
                "basis": labels,
                "coefficients": found,
                "expected": rationals(&expected),
                "status": status,
            }));
        }
    }
    text += &format!("claim: {}\n", if passed { "PASS" } else { "FAIL" });
    if !passed {
        let failing: Vec<String> = report.failing_orders().iter().map(|o| order_label(o)).collect();
        if !failing.is_empty() {
            text += &format!("failing orders: {}\n", failing.join(", "));
        }
    }
    let json = json!({
        "orders": orders,
        "eliminated_counts": report.eliminated_counts(),
        "eliminated_total": report.eliminated_total(),
        "total_terms": report.total_terms,
        "uncovered": report.uncovered.iter().map(|(o, n)| json!({"order": o, "terms": n})).collect::<Vec<_>>(),
        "failing_orders": report.failing_orders(),
        "solve": if a.solve { Some(solved) } else { None },
        "passed": passed,
    });
    emit(a.format, &text, &json)?;
    Ok(if passed { Verdict::Pass } else { Verdict::Fail })
}

pub fn gauge(a: &GaugeArgs) -> Result<Verdict> {
    let (name, t) = match (&a.coefficients, a.preset) {
        (Some(path), _) => {
            let c = GaugeCoefficients::parse_json(&read(path)?)?;
            (path.display().to_string(), GaugeTransform::from_coefficients(&c))
        }
        (None, Some(GaugePreset::Identity)) => ("identity".into(), GaugeTransform::identity()),
        (None, Some(GaugePreset::LoopRemoval)) => ("loop-removal".into(), GaugeTransform::loop_removal()),
        (None, Some(GaugePreset::Random)) => {
            let c = GaugeCoefficients::random(&mut ChaCha8Rng::seed_from_u64(a.seed));
            let values: Vec<String> = GAUGE_KEYS.iter().zip(&c.values).map(|(k, v)| format!("{k}={v}")).collect();
            (format!("random (seed {}: {})", a.seed, values.join(" ")), GaugeTransform::from_coefficients(&c))
        }
        (None, None) => bail!("give --preset or --coefficients"),
    };
    let star = match &a.star {
        Some(path) => read_series(path, 2)?,
        None => star_oh3(),
    };
    let gauged = gauge_star(&star, &t)?;
    write_output(a.output.as_deref(), &render_series(&gauged, a.format)?)?;
    let loops = gauged.grade(2).iter().filter(|t| classify(&t.graph).has_loop).count();
    eprintln!("gauge: {name}");
    eprintln!("terms per grade: {}", join(&gauged.term_counts(TOP)));
    eprintln!("loop graphs at ħ^2: {loops}");
    Ok(Verdict::Pass)
}
