//! Subcommand implementations.

use intlocus::exterior::{Form, MultiVector};
use intlocus::field::{PolyDisplay, Polynomial};
use intlocus::foliation::{
    common_theta, integrability_form, is_first_integral, is_integrable, is_integrable_decomposable, rank,
    rescale_theta, theta_residual, verify_axis_identity, web_curvature, FormSpace,
};
use intlocus::godbillon::{classify_transverse, gv_conditions, theta_from_sequence, Exactness, GvSequence};
use intlocus::locus::{
    classify_plane_locus, cone_quadrics, general_position4, membership, minimal_degree_check, veronese_check,
    veronese_poly, Component, SymMatrix, VeroneseOutcome,
};
use intlocus::poisson::{
    bivector_to_form, form_to_bivector, is_poisson, pencil_compatible, scaling_defect, schouten, Bivector,
};
use intlocus::{Error, RatFunc, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::document::{parse_rational_list, Document};
use crate::parser::Value;
use crate::{Cli, CliError, Command, Report};

type Res<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> Res<Report> {
    let name = cli.command.name();
    match cli.command {
        Command::MinimalDegree => return minimal_degree(cli, &name),
        Command::GeneralPosition => return general_position(cli, &name),
        _ => {}
    }
    let doc = load(cli)?;
    let r = Report::new(&name);
    match cli.command {
        Command::CheckIntegrable => check_integrable(cli, &doc, r),
        Command::CheckDecomposable => check_decomposable(cli, &doc, r),
        Command::Rank => rank_cmd(cli, &doc, r),
        Command::Cone => cone(cli, &doc, r),
        Command::Membership => membership_cmd(cli, &doc, r),
        Command::ClassifyLocus => classify_locus(cli, &doc, r),
        Command::PencilTheta => pencil_theta(cli, &doc, r),
        Command::CommonTheta => theta_report(one_forms(cli, &doc)?, r),
        Command::WebCurvature => web(cli, &doc, r),
        Command::RescaleTheta => rescale(cli, &doc, r),
        Command::FirstIntegral => first_integral(cli, &doc, r),
        Command::AxisIdentity => axis(cli, &doc, r),
        Command::GvVerify => gv_verify(cli, &doc, r),
        Command::ClassifyTransverse => transverse(cli, &doc, r),
        Command::VeronesePoly => veronese_poly_cmd(cli, &doc, r),
        Command::VeroneseCheck => veronese_check_cmd(cli, &doc, r),
        Command::Schouten => schouten_cmd(cli, &doc, r),
        Command::PoissonCheck => poisson_check(cli, &doc, r),
        Command::PencilPoisson => pencil_poisson(cli, &doc, r),
        Command::ScalingDefect => scaling(cli, &doc, r),
        Command::BivToForm => biv_to_form(cli, &doc, r),
        Command::MinimalDegree | Command::GeneralPosition => unreachable!("handled above"),
    }
}

fn load(cli: &Cli) -> Res<Document> {
    match &cli.input {
        Some(path) => Document::load(path),
        None => Err(CliError::Input(format!("{} requires --input FILE", cli.command.name()))),
    }
}

fn need<'a>(opt: &'a Option<String>, flag: &str) -> Res<&'a str> {
    opt.as_deref().ok_or_else(|| CliError::Input(format!("missing {flag}")))
}

/// Maps engine precondition failures to the CLI's precondition class.
fn engine(e: Error) -> CliError {
    match e {
        Error::Precondition(m) => CliError::Precondition(m),
        other => CliError::Engine(other),
    }
}

fn q(r: &Rational) -> Json {
    json!(r.to_string())
}

fn qs(v: &[Rational]) -> Json {
    Json::Array(v.iter().map(q).collect())
}

fn matrix(m: &SymMatrix) -> Json {
    Json::Array(m.iter().map(|row| qs(row)).collect())
}

fn show(f: &Form) -> Json {
    json!(f.to_string())
}

fn show_mv(v: &MultiVector) -> Json {
    json!(v.to_string())
}

fn show_fn(doc: &Document, f: &RatFunc) -> Json {
    json!(f.display(doc.chart.names()).to_string())
}

fn coordinate_names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("a{i}")).collect()
}

fn show_poly(p: &Polynomial, names: &[String]) -> Json {
    json!(PolyDisplay { poly: p, names }.to_string())
}

fn rng(cli: &Cli) -> Option<ChaCha8Rng> {
    cli.seed.map(ChaCha8Rng::seed_from_u64)
}

fn random_q(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into())
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| random_q(rng)).collect();
        if v.iter().any(|x| *x != Rational::from_integer(0.into())) {
            return v;
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize) -> RatFunc {
    let mut acc = RatFunc::zero(n);
    for _ in 0..3 {
        let mut exps = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=2) {
            exps[rng.gen_range(0..n)] += 1;
        }
        acc = &acc + &RatFunc::from_poly(Polynomial::monomial(random_q(rng), exps));
    }
    acc
}

/// One-forms selected by `--space` or `--forms`.
fn one_forms(cli: &Cli, doc: &Document) -> Res<Vec<Form>> {
    if let Some(s) = &cli.space {
        return doc.space(s);
    }
    if cli.forms.is_empty() {
        return Err(CliError::Input("missing --space or --forms".into()));
    }
    cli.forms.iter().map(|n| doc.form(n, Some(1))).collect()
}

fn form_space(cli: &Cli, doc: &Document) -> Res<FormSpace> {
    FormSpace::new(one_forms(cli, doc)?).map_err(engine)
}

fn bivector(doc: &Document, name: &str) -> Res<Bivector> {
    Bivector::new(doc.multivector(name, Some(2))?).map_err(engine)
}

fn check_integrable(cli: &Cli, doc: &Document, mut r: Report) -> Res<Report> {
    let names = if cli.all {
        let names = doc.names_where(|v| matches!(v, Value::Form(f) if f.degree() == 1));
        if names.is_empty() {
            return Err(CliError::Input("the document defines no one-forms".into()));
        }
        names
    } else {
        vec![need(&cli.form, "--form")?.to_string()]
    };
    let results = names
        .par_iter()
        .map(|n| {
            let w = doc.form(n, Some(1))?;
            Ok((n.clone(), integrability_form(&w).map_err(engine)?))
        })
        .collect::<Res<Vec<_>>>()?;
    let holds = results.iter().all(|(_, t)| t.is_zero());
    let rows: Vec<Json> = results
        .iter()
        .map(|(n, t)| json!({"form": n, "integrable": t.is_zero(), "w_dw": t.to_string()}))
        .collect();
    r.push("results", rows);
    Ok(r.verdict(holds))
}

fn check_decomposable(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    if cli.forms.is_empty() {
        return Err(CliError::Input("missing --forms".into()));
    }
    let alphas: Vec<Form> = cli.forms.iter().map(|n| doc.form(n, Some(1))).collect::<Res<_>>()?;
    let product = Form::wedge_all(&doc.chart, alphas.iter()).map_err(engine)?;
    let holds = is_integrable_decomposable(&alphas).map_err(engine)?;
    Ok(r.field("forms", cli.forms.clone()).field("product", show(&product)).verdict(holds))
}

fn rank_cmd(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let space = form_space(cli, doc)?;
    let k = rank(&space).map_err(engine)?;
    Ok(r.field("dimension", space.dim()).field("rank", k))
}

fn cone(cli: &Cli, doc: &Document, mut r: Report) -> Res<Report> {
    let space = form_space(cli, doc)?;
    let sys = cone_quadrics(&space).map_err(engine)?;
    let names = coordinate_names(space.dim());
    r.push("coordinates", names.clone());
    r.push("count", sys.len());
    r.push("quadrics", sys.polynomials().iter().map(|p| show_poly(p, &names)).collect::<Vec<_>>());
    r.push("matrices", sys.quadrics().iter().map(matrix).collect::<Vec<_>>());
    if let Some(mut g) = rng(cli) {
        let mut disagreements = Vec::new();
        for _ in 0..cli.trials {
            let a = random_vector(&mut g, space.dim());
            if membership(&space, &a).map_err(engine)? != sys.vanishes_at(&a).map_err(engine)? {
                disagreements.push(qs(&a));
            }
        }
        r.push("sampled", cli.trials);
        r.push("disagreements", disagreements.clone());
        r.set_verdict(disagreements.is_empty());
    }
    Ok(r)
}

fn membership_cmd(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let space = form_space(cli, doc)?;
    let a = doc.vector(need(&cli.vector, "--vector")?)?;
    let member = membership(&space, &a).map_err(engine)?;
    let combination = space.combination(&a).map_err(engine)?;
    let quadrics = cone_quadrics(&space).map_err(engine)?.vanishes_at(&a).map_err(engine)?;
    Ok(r.field("vector", qs(&a))
        .field("combination", show(&combination))
        .field("quadrics_vanish", quadrics)
        .verdict(member))
}

fn component_json(c: &Component) -> Json {
    match c {
        Component::Plane => json!({"type": "plane"}),
        Component::Line { form, multiplicity } => {
            json!({"type": "line", "equation": qs(form), "multiplicity": multiplicity})
        }
        Component::ConjugateLines { quadric, vertex, discriminant } => json!({
            "type": "conjugate-lines",
            "quadric": matrix(quadric),
            "vertex": qs(vertex),
            "discriminant": q(discriminant),
        }),
        Component::Conic { quadric } => json!({"type": "conic", "quadric": matrix(quadric)}),
        Component::Point { coords } => json!({"type": "point", "coords": qs(coords)}),
        Component::ConjugatePoints { minimal_polynomial, coords } => json!({
            "type": "conjugate-points",
            "minimal_polynomial": qs(minimal_polynomial),
            "coords": coords.iter().map(|c| qs(c)).collect::<Vec<_>>(),
        }),
    }
}

fn classify_locus(cli: &Cli, doc: &Document, mut r: Report) -> Res<Report> {
    let space = form_space(cli, doc)?;
    let rep = classify_plane_locus(&space).map_err(engine)?;
    let names = coordinate_names(space.dim());
    r.push("kind", rep.kind.as_str());
    r.push("quadrics", rep.quadrics.polynomials().iter().map(|p| show_poly(p, &names)).collect::<Vec<_>>());
    let comps: Vec<Json> = rep
        .components
        .iter()
        .map(|c| {
            let mut j = component_json(&c.component);
            let obj = j.as_object_mut().expect("object");
            obj.insert("samples".into(), c.samples.iter().map(|s| qs(s)).collect::<Vec<_>>().into());
            obj.insert("membership_verified".into(), c.membership_verified.into());
            obj.insert("substitution_verified".into(), c.substitution_verified.into());
            obj.insert("minimal_degree".into(), c.minimal_degree.into());
            j
        })
        .collect();
    r.push("components", comps);
    r.push("multiplicity", rep.multiplicity);
    r.push("point_count", rep.point_count);
    r.push("exceeds_four_points", rep.exceeds_four_points);
    r.push("verified", rep.verified());
    Ok(r)
}

fn theta_report(forms: Vec<Form>, mut r: Report) -> Res<Report> {
    match common_theta(&forms) {
        Ok(cert) => {
            r.push("theta", show(&cert.theta));
            r.push("closed", cert.closed);
            r.push("d_theta", show(&cert.theta.ext_d()));
            r.push("residuals", cert.residuals.iter().map(show).collect::<Vec<_>>());
            let ok = cert.verified();
            Ok(r.verdict(ok))
        }
        Err(Error::NoCommonTheta { failing_index, residual }) => {
            r.push("failing_index", failing_index);
            r.push("residual", residual.map_or(Json::Null, Json::String));
            Ok(r.verdict(false))
        }
        Err(e) => Err(engine(e)),
    }
}

fn pencil_theta(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let forms = one_forms(cli, doc)?;
    if forms.len() != 2 {
        return Err(CliError::Input(format!("pencil-theta needs exactly two forms, got {}", forms.len())));
    }
    theta_report(forms, r)
}

fn web(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let forms = one_forms(cli, doc)?;
    let [w0, w1] = forms.as_slice() else {
        return Err(CliError::Input("web-curvature needs exactly two forms ω0, ω1".into()));
    };
    let web = web_curvature(w0, w1).map_err(engine)?;
    Ok(r.field("w2", show(&web.forms[2]))
        .field("theta", show(&web.theta))
        .field("curvature", show(&web.curvature))
        .field("flat", web.is_flat()))
}

fn rescale(cli: &Cli, doc: &Document, mut r: Report) -> Res<Report> {
    let theta = doc.form(need(&cli.theta, "--theta")?, Some(1))?;
    let f = doc.function(need(&cli.func, "--func")?)?;
    let moved = rescale_theta(&theta, &f).map_err(engine)?;
    r.push("theta", show(&moved));
    if let Some(name) = &cli.form {
        let w = doc.form(name, Some(1))?;
        let before = theta_residual(&w, &theta).map_err(engine)?;
        let after = theta_residual(&w.scale(&f), &moved).map_err(engine)?;
        r.push("residual_before", show(&before));
        r.push("residual_after", show(&after));
        r.set_verdict(before.is_zero() && after.is_zero());
    }
    Ok(r)
}

fn first_integral(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let f = doc.function(need(&cli.func, "--func")?)?;
    let w = doc.form(need(&cli.form, "--form")?, None)?;
    let v = is_first_integral(&f, &w).map_err(engine)?;
    let df_w = Form::differential(&doc.chart, &f).wedge(&w).map_err(engine)?;
    Ok(r.field("df_wedge_form", show(&df_w)).field("constant", v.constant).verdict(v.holds))
}

fn axis(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let forms: Vec<Form> = cli.forms.iter().map(|n| doc.form(n, Some(1))).collect::<Res<_>>()?;
    let funcs: Vec<RatFunc> = cli.funcs.iter().map(|n| doc.function(n)).collect::<Res<_>>()?;
    let rep = verify_axis_identity(&forms, &funcs).map_err(engine)?;
    let hyps: Vec<Json> = rep.hypotheses.iter().map(|h| json!({"hypothesis": h.name, "holds": h.holds})).collect();
    let pairs: Vec<Json> = rep
        .pairs
        .iter()
        .map(|p| json!({"i": p.i, "j": p.j, "form": p.form.to_string(), "holds": p.holds}))
        .collect();
    let holds = rep.hypotheses_hold() && rep.identities_hold();
    Ok(r.field("hypotheses", hyps).field("pairs", pairs).verdict(holds))
}

fn residual_rows(rs: &[intlocus::godbillon::GvResidual]) -> Vec<Json> {
    rs.iter().map(|g| json!({"z_power": g.z_power, "form": g.form.to_string()})).collect()
}

fn gv_verify(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let seq = GvSequence::new(doc.sequence(need(&cli.sequence, "--sequence")?)?).map_err(engine)?;
    let residuals = gv_conditions(&seq).map_err(engine)?;
    let theta = theta_from_sequence(&seq).map_err(engine)?;
    Ok(r.field("length", seq.length())
        .field("theta", theta.as_ref().map_or(Json::Null, show))
        .field("residuals", residual_rows(&residuals))
        .verdict(residuals.is_empty()))
}

fn transverse(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let omega = doc.form(need(&cli.form, "--form")?, Some(1))?;
    let candidate = match (&cli.sequence, &cli.theta) {
        (Some(s), None) => GvSequence::new(doc.sequence(s)?).map_err(engine)?,
        (None, Some(t)) => GvSequence::from_theta(&omega, &doc.form(t, Some(1))?).map_err(engine)?,
        (None, None) => GvSequence::new(vec![omega.clone()]).map_err(engine)?,
        (Some(_), Some(_)) => return Err(CliError::Input("give either --sequence or --theta, not both".into())),
    };
    let rep = classify_transverse(&omega, &candidate).map_err(engine)?;
    let exactness = match &rep.exactness {
        Exactness::NotApplicable => json!("not-applicable"),
        Exactness::Exact { primitive } => json!({"primitive": show_fn(doc, primitive)}),
        Exactness::NoRationalPrimitive => json!("no-rational-primitive"),
    };
    Ok(r.field("class", rep.class.map_or(Json::Null, |c| json!(c.as_str())))
        .field("candidate_length", rep.candidate_length)
        .field("candidate_residuals", residual_rows(&rep.candidate_residuals))
        .field("exactness", exactness)
        .verdict(rep.class.is_some()))
}

fn veronese_poly_cmd(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let family = doc.family(need(&cli.family, "--family")?)?;
    let p = veronese_poly(&family).map_err(engine)?;
    let coeffs: Vec<Json> = p.coefficients().iter().map(show).collect();
    Ok(r.field("coefficients", coeffs)
        .field("degree", p.degree().map_or(Json::Null, |d| json!(d)))
        .field("degree_bound", 2 * (family.len() - 1))
        .field("identically_zero", p.is_zero()))
}

fn veronese_check_cmd(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let family = doc.family(need(&cli.family, "--family")?)?;
    let samples = match (&cli.samples, rng(cli)) {
        (Some(s), _) => parse_rational_list(s)?,
        (None, Some(mut g)) => {
            let want = 2 * (family.len() - 1) + 1;
            let mut out: Vec<Rational> = Vec::new();
            while out.len() < want {
                let t = random_q(&mut g);
                if !out.contains(&t) {
                    out.push(t);
                }
            }
            out
        }
        (None, None) => return Err(CliError::Input("missing --samples (or --seed to draw them)".into())),
    };
    let v = veronese_check(&family, &samples).map_err(engine)?;
    let r = r
        .field("samples", qs(&samples))
        .field("outcome", v.outcome.as_str())
        .field("degree", v.degree.map_or(Json::Null, |d| json!(d)))
        .field("samples_needed", v.degree_bound)
        .field("sharper_bound", v.sharper_bound);
    match v.outcome {
        VeroneseOutcome::IntegrableEverywhere => Ok(r.verdict(true)),
        VeroneseOutcome::NotIntegrable { witness } => Ok(r.field("witness", q(&witness)).verdict(false)),
        VeroneseOutcome::InsufficientSamples => Err(CliError::Precondition(format!(
            "{} samples cannot decide a polynomial of degree {}; supply more",
            samples.len(),
            v.degree.unwrap_or(v.degree_bound)
        ))),
    }
}

fn minimal_degree(cli: &Cli, name: &str) -> Res<Report> {
    let d = cli.degree.ok_or_else(|| CliError::Input("missing --degree".into()))?;
    let s = cli.span.ok_or_else(|| CliError::Input("missing --span".into()))?;
    let m = cli.dim.ok_or_else(|| CliError::Input("missing --dim".into()))?;
    let holds = minimal_degree_check(d, s, m).map_err(engine)?;
    Ok(Report::new(name)
        .field("degree", d)
        .field("span", s)
        .field("dim", m)
        .field("codimension_plus_one", s - m + 1)
        .verdict(holds))
}

fn general_position(cli: &Cli, name: &str) -> Res<Report> {
    let text = need(&cli.points, "--points")?;
    let points: Vec<Vec<Rational>> = text
        .split(';')
        .map(|p| parse_rational_list(&p.replace(':', ",")))
        .collect::<Res<_>>()?;
    let holds = general_position4(&points).map_err(engine)?;
    Ok(Report::new(name)
        .field("points", points.iter().map(|p| qs(p)).collect::<Vec<_>>())
        .verdict(holds))
}

fn schouten_cmd(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let p = bivector(doc, need(&cli.bivector, "--bivector")?)?;
    let q = match &cli.other {
        Some(o) => bivector(doc, o)?,
        None => p.clone(),
    };
    let t = schouten(&p, &q).map_err(engine)?;
    Ok(r.field("bracket", show_mv(&t)).field("zero", t.is_zero()))
}

/// Jacobi identity `{f,{g,h}} + {g,{h,f}} + {h,{f,g}} = 0` on random
/// polynomial triples.
fn jacobi_failures(p: &Bivector, g: &mut ChaCha8Rng, trials: usize) -> Res<usize> {
    let n = p.chart().dim();
    let mut failures = 0;
    for _ in 0..trials {
        let (f1, f2, f3) = (random_poly(g, n), random_poly(g, n), random_poly(g, n));
        let cyc = |a: &RatFunc, b: &RatFunc, c: &RatFunc| -> Res<RatFunc> {
            p.bracket(a, &p.bracket(b, c).map_err(engine)?).map_err(engine)
        };
        let total = &(&cyc(&f1, &f2, &f3)? + &cyc(&f2, &f3, &f1)?) + &cyc(&f3, &f1, &f2)?;
        if !total.is_zero() {
            failures += 1;
        }
    }
    Ok(failures)
}

fn poisson_check(cli: &Cli, doc: &Document, mut r: Report) -> Res<Report> {
    let names = if cli.all {
        let names = doc.names_where(|v| matches!(v, Value::Vector(m) if m.degree() == 2));
        if names.is_empty() {
            return Err(CliError::Input("the document defines no bivectors".into()));
        }
        names
    } else if let Some(g) = &cli.group {
        doc.raw.poisson.get(g).cloned().ok_or_else(|| CliError::Input(format!("no poisson group named '{g}'")))?
    } else {
        vec![need(&cli.bivector, "--bivector")?.to_string()]
    };
    let results = names
        .par_iter()
        .map(|n| {
            let p = bivector(doc, n)?;
            let t = schouten(&p, &p).map_err(engine)?;
            let jacobi = match cli.seed {
                Some(seed) => Some(jacobi_failures(&p, &mut ChaCha8Rng::seed_from_u64(seed), cli.trials)?),
                None => None,
            };
            Ok((n.clone(), t, jacobi))
        })
        .collect::<Res<Vec<_>>>()?;
    let mut holds = true;
    let mut rows = Vec::new();
    for (n, t, jacobi) in results {
        let poisson = t.is_zero();
        if poisson && jacobi.is_some_and(|f| f > 0) {
            return Err(CliError::Engine(Error::Structural(format!(
                "'{n}' has [P,P] = 0 but violates the Jacobi identity on samples"
            ))));
        }
        holds &= poisson;
        let mut row = json!({"bivector": n, "poisson": poisson, "schouten": t.to_string()});
        if let Some(f) = jacobi {
            row["jacobi_samples"] = json!(cli.trials);
            row["jacobi_failures"] = json!(f);
        }
        rows.push(row);
    }
    r.push("results", rows);
    Ok(r.verdict(holds))
}

fn pair(cli: &Cli, doc: &Document) -> Res<(Bivector, Bivector)> {
    if let Some(g) = &cli.group {
        let members = doc.poisson_group(g)?;
        let [p, q] = members.as_slice() else {
            return Err(CliError::Input(format!("poisson group '{g}' must have exactly two members")));
        };
        return Ok((Bivector::new(p.clone()).map_err(engine)?, Bivector::new(q.clone()).map_err(engine)?));
    }
    Ok((bivector(doc, need(&cli.bivector, "--bivector")?)?, bivector(doc, need(&cli.other, "--other")?)?))
}

fn pencil_poisson(cli: &Cli, doc: &Document, mut r: Report) -> Res<Report> {
    let (p, q) = pair(cli, doc)?;
    let compatible = pencil_compatible(&p, &q).map_err(engine)?;
    r.push("mixed_bracket", show_mv(&schouten(&p, &q).map_err(engine)?));
    if let Some(mut g) = rng(cli) {
        let n = doc.chart.dim();
        let mut members = Vec::new();
        for _ in 0..cli.trials {
            let lam = random_q(&mut g);
            let member = p.checked_add(&q.scale(&RatFunc::constant(n, lam.clone()))).map_err(engine)?;
            let poisson = is_poisson(&member).map_err(engine)?;
            if compatible && !poisson {
                return Err(CliError::Engine(Error::Structural(format!("compatible pencil, but P + {lam}Q is not Poisson"))));
            }
            members.push(json!({"lambda": q_str(&lam), "poisson": poisson}));
        }
        r.push("sampled_members", members);
    }
    Ok(r.verdict(compatible))
}

fn q_str(r: &Rational) -> String {
    r.to_string()
}

fn scaling(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    let f = doc.function(need(&cli.func, "--func")?)?;
    let p = bivector(doc, need(&cli.bivector, "--bivector")?)?;
    let defect = scaling_defect(&f, &p).map_err(engine)?;
    let fp = p.scale(&f);
    let fp_poisson = is_poisson(&fp).map_err(engine)?;
    Ok(r.field("defect", show_mv(&defect))
        .field("scaled_is_poisson", fp_poisson)
        .verdict(defect.is_zero()))
}

fn biv_to_form(cli: &Cli, doc: &Document, r: Report) -> Res<Report> {
    match (&cli.bivector, &cli.form) {
        (Some(name), None) => {
            let p = bivector(doc, name)?;
            let eta = bivector_to_form(&p).map_err(engine)?;
            let integrable = is_integrable(&eta).map_err(engine)?;
            let poisson = is_poisson(&p).map_err(engine)?;
            if integrable != poisson {
                return Err(CliError::Engine(Error::Structural("[P,P] = 0 and η∧dη = 0 disagree".into())));
            }
            Ok(r.field("form", show(&eta)).field("integrable", integrable).field("poisson", poisson))
        }
        (None, Some(name)) => {
            let eta = doc.form(name, Some(1))?;
            let p = form_to_bivector(&eta).map_err(engine)?;
            let poisson = is_poisson(&p).map_err(engine)?;
            Ok(r.field("bivector", show_mv(p.as_multivector())).field("poisson", poisson))
        }
        _ => Err(CliError::Input("give exactly one of --bivector or --form".into())),
    }
}
