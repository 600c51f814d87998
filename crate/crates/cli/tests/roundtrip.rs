use intlocus::exterior::{Form, MultiVector};
use intlocus::field::{rational, Polynomial};
use intlocus::foliation::{common_theta, integrability_form};
use intlocus::{Chart, RatFunc};
use intlocus_cli::{parse_expression, Value};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chart() -> Chart {
    Chart::new(&["x", "y", "z"]).unwrap()
}

fn rand_ratfunc(rng: &mut ChaCha8Rng) -> RatFunc {
    let mut poly = || {
        let mut acc = Polynomial::zero(3);
        for _ in 0..rng.gen_range(1..=3) {
            let mut exps = vec![0u32; 3];
            for _ in 0..rng.gen_range(0..=3) {
                exps[rng.gen_range(0..3)] += 1;
            }
            acc = &acc + &Polynomial::monomial(rational(rng.gen_range(-7..=7), rng.gen_range(1..=5)), exps);
        }
        acc
    };
    let num = poly();
    let den = poly();
    if den.is_zero() {
        RatFunc::from_poly(num)
    } else {
        RatFunc::new(num, den).unwrap()
    }
}

fn rand_value(rng: &mut ChaCha8Rng, ch: &Chart) -> Value {
    let kind = rng.gen_range(0..3);
    let degree = rng.gen_range(0..=3);
    let mut idx: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..degree {
        idx = idx.into_iter().flat_map(|s| {
            let start = s.last().map_or(0, |l| l + 1);
            (start..3).map(move |i| { let mut t = s.clone(); t.push(i); t })
        }).collect();
    }
    let terms: Vec<(Vec<usize>, RatFunc)> = idx.into_iter().map(|k| (k, rand_ratfunc(rng))).collect();
    match kind {
        0 => Value::Scalar(rand_ratfunc(rng)),
        1 => Value::Form(Form::from_terms(ch, degree, terms)),
        _ => Value::Vector(MultiVector::from_terms(ch, degree, terms)),
    }
}

/// Degree-0 forms and polyvectors are functions.
fn canonical(v: Value) -> Value {
    match v {
        Value::Form(f) if f.degree() == 0 => Value::Scalar(f.coefficient(&[])),
        Value::Vector(m) if m.degree() == 0 => Value::Scalar(m.coefficient(&[])),
        other => other,
    }
}

#[test]
fn printed_values_reparse_to_equal_objects() {
    let ch = chart();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let v = rand_value(&mut rng, &ch);
        let text = v.render(&ch);
        let back = parse_expression(&text, &ch).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert_eq!(canonical(back), canonical(v), "{text}");
    }
}

#[test]
fn computed_certificates_round_trip() {
    let ch = Chart::new(&["x", "y1", "y2"]).unwrap();
    let forms: Vec<Form> = ["(1/3)*x^3*d(y1) + (x + y1)*d(x)", "(1/3)*x^3*d(y2) + (x + y2)*d(x)"]
        .iter()
        .map(|s| match parse_expression(s, &ch).unwrap() {
            Value::Form(f) => f,
            other => panic!("{other:?}"),
        })
        .collect();
    let theta = common_theta(&forms).unwrap().theta;
    for f in [theta.clone(), integrability_form(&forms[0]).unwrap(), theta.ext_d(), -&forms[1]] {
        assert_eq!(parse_expression(&f.to_string(), &ch).unwrap(), Value::Form(f));
    }
}

#[test]
fn documented_examples() {
    let ch = chart();
    let Value::Form(w) = parse_expression("y*d(x) + (1/3)*x^3*d(y)", &ch).unwrap() else { panic!() };
    assert_eq!(w.degree(), 1);
    assert_eq!(w.coefficient(&[1]), ch.var(0).pow(3).scale(&rational(1, 3)));
    let Value::Form(z) = parse_expression("d(x) /\\ d(x)", &ch).unwrap() else { panic!() };
    assert!(z.is_zero() && z.degree() == 2);
    let Value::Vector(p) = parse_expression("D(x) /\\ D(y) + y * D(y) /\\ D(z)", &ch).unwrap() else { panic!() };
    assert_eq!(p.degree(), 2);
    assert_eq!(parse_expression(&p.to_string(), &ch).unwrap(), Value::Vector(p));
}
