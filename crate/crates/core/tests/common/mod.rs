#![allow(dead_code)]

use intlocus::exterior::{Chart, Form, MultiVector};
use intlocus::field::{rational, Polynomial, RatFunc, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn chart(names: &[&str]) -> Chart {
    Chart::new(names).unwrap()
}

pub fn q(v: i64) -> Rational {
    rational(v, 1)
}

pub fn small_q(rng: &mut ChaCha8Rng) -> Rational {
    rational(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

pub fn nonzero_q(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let v = small_q(rng);
        if v != q(0) {
            return v;
        }
    }
}

pub fn rand_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| small_q(rng)).collect();
        if v.iter().any(|x| *x != q(0)) {
            return v;
        }
    }
}

/// Random polynomial with at most `terms` terms of total degree ≤ `max_deg`.
pub fn rand_poly(rng: &mut ChaCha8Rng, nvars: usize, max_deg: u32, terms: usize) -> Polynomial {
    let mut acc = Polynomial::zero(nvars);
    for _ in 0..terms {
        let mut exps = vec![0u32; nvars];
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        acc = &acc + &Polynomial::monomial(small_q(rng), exps);
    }
    acc
}

pub fn rand_nonzero_poly(rng: &mut ChaCha8Rng, nvars: usize, max_deg: u32, terms: usize) -> Polynomial {
    loop {
        let p = rand_poly(rng, nvars, max_deg, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Polynomial over a small denominator `1`, `x_i + c` or `x_i·x_j + c`.
pub fn rand_ratfunc(rng: &mut ChaCha8Rng, nvars: usize) -> RatFunc {
    let num = rand_poly(rng, nvars, 2, 3);
    let den = match rng.gen_range(0..3) {
        0 => Polynomial::one(nvars),
        1 => &Polynomial::var(nvars, rng.gen_range(0..nvars)) + &Polynomial::constant(nvars, nonzero_q(rng)),
        _ => {
            let (i, j) = (rng.gen_range(0..nvars), rng.gen_range(0..nvars));
            &(&Polynomial::var(nvars, i) * &Polynomial::var(nvars, j)) + &Polynomial::one(nvars)
        }
    };
    RatFunc::new(num, den).unwrap()
}

pub fn rand_nonzero_ratfunc(rng: &mut ChaCha8Rng, nvars: usize) -> RatFunc {
    loop {
        let f = rand_ratfunc(rng, nvars);
        if !f.is_zero() {
            return f;
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for last in (k - 1)..n {
        for mut s in subsets(last, k - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out
}

/// Random form with polynomial coefficients.
pub fn rand_poly_form(rng: &mut ChaCha8Rng, ch: &Chart, degree: usize, max_deg: u32) -> Form {
    let n = ch.dim();
    let terms = subsets(n, degree)
        .into_iter()
        .map(|idx| (idx, RatFunc::from_poly(rand_poly(rng, n, max_deg, 2))));
    Form::from_terms(ch, degree, terms)
}

pub fn rand_form(rng: &mut ChaCha8Rng, ch: &Chart, degree: usize) -> Form {
    let n = ch.dim();
    let terms = subsets(n, degree).into_iter().map(|idx| (idx, rand_ratfunc(rng, n)));
    Form::from_terms(ch, degree, terms)
}

pub fn rand_vector_field(rng: &mut ChaCha8Rng, ch: &Chart) -> MultiVector {
    let comps: Vec<RatFunc> = (0..ch.dim()).map(|_| rand_ratfunc(rng, ch.dim())).collect();
    MultiVector::from_components(ch, &comps)
}

pub fn rand_bivector(rng: &mut ChaCha8Rng, ch: &Chart) -> MultiVector {
    let n = ch.dim();
    let terms = subsets(n, 2)
        .into_iter()
        .map(|idx| (idx, RatFunc::from_poly(rand_poly(rng, n, 2, 2))));
    MultiVector::from_terms(ch, 2, terms)
}

/// `h·dg`, integrable by construction.
pub fn rand_integrable_form(rng: &mut ChaCha8Rng, ch: &Chart) -> Form {
    let n = ch.dim();
    loop {
        let g = RatFunc::from_poly(rand_nonzero_poly(rng, n, 2, 3));
        let h = rand_nonzero_ratfunc(rng, n);
        let w = Form::differential(ch, &g).scale(&h);
        if !w.is_zero() {
            return w;
        }
    }
}

/// The example chart `(x, y1, y2, y3)` with `ωᵢ = (x³/3) dyᵢ + (x + yᵢ) dx`
/// and `η = (3/x − 3/x³) dx`.
pub fn plane_example() -> (Chart, Vec<Form>, Form) {
    let ch = chart(&["x", "y1", "y2", "y3"]);
    let x = ch.var(0);
    let x3 = x.pow(3);
    let forms = (1..=3)
        .map(|i| &Form::dx(&ch, i).scale(&x3.scale(&rational(1, 3))) + &Form::dx(&ch, 0).scale(&(&x + &ch.var(i))))
        .collect();
    let three = RatFunc::from_int(4, 3);
    let eta_coeff = &three.checked_div(&x).unwrap() - &three.checked_div(&x3).unwrap();
    (ch.clone(), forms, Form::dx(&ch, 0).scale(&eta_coeff))
}

/// Forms `ωᵢ = A dyᵢ + ((A' − tA) yᵢ + bᵢ) dx` on `(x, y1, …, yk)`, all
/// satisfying `dωᵢ = t dx ∧ ωᵢ`.
pub fn rand_theta_family(rng: &mut ChaCha8Rng, k: usize) -> (Chart, Vec<Form>, Form) {
    let names: Vec<String> = std::iter::once("x".to_string())
        .chain((1..=k).map(|i| format!("y{i}")))
        .collect();
    let ch = Chart::new(&names).unwrap();
    let n = k + 1;
    let only_x = |p: Polynomial| {
        let map: Vec<usize> = vec![0];
        RatFunc::from_poly(p.remap(n, &map))
    };
    let a = only_x(rand_nonzero_poly(rng, 1, 3, 3));
    let t = only_x(rand_poly(rng, 1, 1, 2)).checked_div(&RatFunc::var(n, 0)).unwrap();
    let shift = &a.partial(0) - &(&t * &a);
    let forms = (1..=k)
        .map(|i| {
            let b = only_x(rand_poly(rng, 1, 2, 2));
            &Form::dx(&ch, i).scale(&a) + &Form::dx(&ch, 0).scale(&(&(&shift * &ch.var(i)) + &b))
        })
        .collect();
    let theta = Form::dx(&ch, 0).scale(&t);
    (ch, forms, theta)
}
