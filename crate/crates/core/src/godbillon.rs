//! Godbillon–Vey sequences and transverse structures of codimension-one
//! foliations.
//!
//! A finite sequence `(ω₀, …, ω_{N−1})` is verified by forming
//! `Ω = dz + Σ zⁿ ωₙ` on the chart extended by a coordinate `z` and checking
//! `Ω∧dΩ = 0`. Since the `ωₙ` do not depend on `z`, expanding gives
//!
//! ```text
//! Ω∧dΩ = dz ∧ Σ_m z^m ( dω_m − Σ_{i+j=m+1} j ω_i∧ω_j ) + Σ_{i,j} z^{i+j} ω_i∧dω_j
//! ```
//!
//! so the `dz`-part yields the structure equations
//!
//! ```text
//! dω₀ = ω₀∧ω₁,   dω₁ = 2 ω₀∧ω₂,   dω₂ = 3 ω₀∧ω₃ + ω₁∧ω₂,   …
//! ```
//!
//! With the convention `dω = θ∧ω` this means `ω₁ = −θ`: a length-2 sequence
//! `(ω, −θ)` is valid exactly when `dω = θ∧ω` and `dθ = 0`.

use std::collections::BTreeMap;

use crate::error::{input, precondition, Error, Result};
use crate::exterior::{Chart, Form};
use crate::field::{solve_linear, FieldMatrix, Polynomial, RatFunc, Rational};

/// Finite Godbillon–Vey candidate `(ω₀, ω₁, …)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GvSequence {
    chart: Chart,
    omegas: Vec<Form>,
}

impl GvSequence {
    pub fn new(omegas: Vec<Form>) -> Result<Self> {
        let Some(first) = omegas.first() else {
            return Err(input("a Godbillon–Vey sequence needs at least ω0"));
        };
        let chart = first.chart().clone();
        for w in &omegas {
            chart.check_same(w.chart())?;
            if w.degree() != 1 {
                return Err(input("Godbillon–Vey terms must be one-forms"));
            }
        }
        if first.is_zero() {
            return Err(input("ω0 must be nonzero"));
        }
        Ok(GvSequence { chart, omegas })
    }

    /// The sequence `(ω, −θ)` attached to `dω = θ∧ω`.
    pub fn from_theta(omega: &Form, theta: &Form) -> Result<Self> {
        Self::new(vec![omega.clone(), -theta])
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn omegas(&self) -> &[Form] {
        &self.omegas
    }

    /// Least `n ≥ 1` with `ω_k = 0` for all `k ≥ n`.
    pub fn length(&self) -> usize {
        self.omegas
            .iter()
            .rposition(|w| !w.is_zero())
            .map_or(1, |i| i + 1)
    }

    /// Name of the auxiliary coordinate: `z`, primed until it is fresh.
    fn aux_name(&self) -> String {
        let mut name = "z".to_string();
        while self.chart.index_of(&name).is_some() {
            name.push('\'');
        }
        name
    }

    /// The chart with `z` appended, and `Ω = dz + Σ zⁿ ωₙ` on it.
    pub fn total_form(&self) -> Result<(Chart, Form)> {
        let ext = self.chart.extended(&self.aux_name())?;
        let n = self.chart.dim();
        let map: Vec<usize> = (0..n).collect();
        let z = ext.var(n);
        let mut omega = Form::dx(&ext, n);
        let mut zpow = RatFunc::one(n + 1);
        for w in &self.omegas {
            omega = &omega + &w.embed(&ext, &map).scale(&zpow);
            zpow = &zpow * &z;
        }
        Ok((ext, omega))
    }

    /// `i_t^*Ω = Σ tⁿ ωₙ`, computed by restricting `Ω` to `z = t`.
    pub fn pullback(&self, t: &Rational) -> Result<Form> {
        let (ext, omega) = self.total_form()?;
        let z = ext.dim() - 1;
        let restricted = omega.restrict(z, t)?;
        let n = self.chart.dim();
        let mut map: Vec<usize> = (0..n).collect();
        map.push(0);
        let terms = restricted.terms().map(|(k, c)| (k.to_vec(), c.remap(n, &map)));
        Ok(Form::from_terms(&self.chart, 1, terms))
    }
}

/// Nonzero `z^power` part of `Ω∧dΩ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GvResidual {
    pub z_power: u32,
    /// Three-form on the extended chart with `z`-free coefficients.
    pub form: Form,
}

/// Coefficients of `Ω∧dΩ` grouped by powers of `z`; empty exactly when the
/// sequence is a valid Godbillon–Vey sequence.
pub fn gv_conditions(seq: &GvSequence) -> Result<Vec<GvResidual>> {
    let (ext, omega) = seq.total_form()?;
    let z = ext.dim() - 1;
    let three = omega.wedge(&omega.ext_d())?;
    let mut grouped: BTreeMap<u32, Vec<(Vec<usize>, RatFunc)>> = BTreeMap::new();
    for (idx, c) in three.terms() {
        if c.denom().involves(z) {
            return Err(Error::Structural("z appears in a denominator".into()));
        }
        for (k, part) in c.numer().coeffs_in(z).into_iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            let coeff = RatFunc::new(part, c.denom().clone())?;
            grouped.entry(k as u32).or_default().push((idx.to_vec(), coeff));
        }
    }
    Ok(grouped
        .into_iter()
        .map(|(z_power, terms)| GvResidual {
            z_power,
            form: Form::from_terms(&ext, 3, terms),
        })
        .filter(|r| !r.form.is_zero())
        .collect())
}

pub fn is_gv_sequence(seq: &GvSequence) -> Result<bool> {
    Ok(gv_conditions(seq)?.is_empty())
}

/// Closed θ recovered from a verified sequence of length at most 2.
pub fn theta_from_sequence(seq: &GvSequence) -> Result<Option<Form>> {
    if seq.length() > 2 || !is_gv_sequence(seq)? {
        return Ok(None);
    }
    Ok(Some(match seq.omegas().get(1) {
        Some(w1) => -w1,
        None => Form::zero(seq.chart(), 1),
    }))
}

/// Transverse type, from most to least restrictive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TransverseClass {
    Exact,
    Closed,
    Affine,
    Projective,
    Longer,
}

impl TransverseClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TransverseClass::Exact => "exact",
            TransverseClass::Closed => "closed",
            TransverseClass::Affine => "affine",
            TransverseClass::Projective => "projective",
            TransverseClass::Longer => "longer",
        }
    }
}

/// Result of the search for `g` with `dg = ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// Not examined (the form is not closed).
    NotApplicable,
    Exact { primitive: RatFunc },
    /// Closed, but no rational primitive exists (e.g. `dx/x`).
    NoRationalPrimitive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransverseReport {
    /// `None` when `ω` is not closed and the candidate fails verification.
    pub class: Option<TransverseClass>,
    pub candidate_length: usize,
    pub candidate_residuals: Vec<GvResidual>,
    pub exactness: Exactness,
}

/// Grades the transverse structure of `ω` using a candidate sequence whose
/// first term defines the same foliation.
pub fn classify_transverse(omega: &Form, candidate: &GvSequence) -> Result<TransverseReport> {
    omega.chart().check_same(candidate.chart())?;
    if omega.degree() != 1 || omega.is_zero() {
        return Err(input("expected a nonzero one-form"));
    }
    if !omega.wedge(&candidate.omegas()[0])?.is_zero() {
        return Err(input("candidate ω0 is not proportional to ω"));
    }
    let residuals = gv_conditions(candidate)?;
    let length = candidate.length();
    let (class, exactness) = if omega.ext_d().is_zero() {
        closed_grade(omega)?
    } else if !residuals.is_empty() {
        (None, Exactness::NotApplicable)
    } else if length == 1 {
        closed_grade(&candidate.omegas()[0])?
    } else {
        let class = match length {
            2 => TransverseClass::Affine,
            3 => TransverseClass::Projective,
            _ => TransverseClass::Longer,
        };
        (Some(class), Exactness::NotApplicable)
    };
    Ok(TransverseReport {
        class,
        candidate_length: length,
        candidate_residuals: residuals,
        exactness,
    })
}

fn closed_grade(w: &Form) -> Result<(Option<TransverseClass>, Exactness)> {
    Ok(match rational_primitive(w)? {
        Some(g) => (Some(TransverseClass::Exact), Exactness::Exact { primitive: g }),
        None => (Some(TransverseClass::Closed), Exactness::NoRationalPrimitive),
    })
}

/// A rational `g` with `dg = ω` for a closed one-form, or `None` if no
/// rational primitive exists.
///
/// Integrates one coordinate at a time; after subtracting `d` of the partial
/// primitive, closedness makes the remaining coefficients independent of the
/// coordinates already handled.
pub fn rational_primitive(w: &Form) -> Result<Option<RatFunc>> {
    if w.degree() != 1 {
        return Err(input("expected a one-form"));
    }
    if !w.ext_d().is_zero() {
        return Err(precondition("the form is not closed"));
    }
    let chart = w.chart();
    let n = chart.dim();
    let mut g = RatFunc::zero(n);
    let mut rest = w.clone();
    for v in 0..n {
        let c = rest.coefficient(&[v]);
        if c.is_zero() {
            continue;
        }
        let Some(h) = antiderivative(&c, v)? else {
            return Ok(None);
        };
        rest = &rest - &Form::differential(chart, &h);
        g = &g + &h;
    }
    if !rest.is_zero() {
        return Err(Error::Structural("primitive search left a nonzero remainder".into()));
    }
    Ok(Some(g))
}

/// Rational `h` with `∂h/∂x_v = c`, if one exists.
///
/// Writing `c = A/B` as a function of `x_v` over the field of the other
/// coordinates, any rational antiderivative has the form `N/D` with
/// `D = gcd(B, ∂_v B)`; the coefficients of `N` are found by solving
/// `(N' D − N D') B = A D²` coefficient-wise in `x_v`.
fn antiderivative(c: &RatFunc, v: usize) -> Result<Option<RatFunc>> {
    let nvars = c.nvars();
    let a = c.numer();
    let b = c.denom();
    if !b.involves(v) {
        let mut integrated = Polynomial::zero(nvars);
        for (m, coef) in a.terms() {
            let mut exps = m.exponents().to_vec();
            exps[v] += 1;
            let k = Rational::from_integer(exps[v].into());
            integrated = &integrated + &Polynomial::monomial(coef / k, exps);
        }
        return Ok(Some(RatFunc::new(integrated, b.clone())?));
    }
    let db = b.partial(v);
    let d = b.gcd(&db);
    let deg = |p: &Polynomial| p.degree_in(v).unwrap_or(0) as usize;
    let (deg_a, deg_b, deg_d) = (deg(a), deg(b), deg(&d));
    let m = (deg_a + 1 + deg_d).saturating_sub(deg_b).max(deg_d);
    let dd = d.partial(v);
    let xv = Polynomial::var(nvars, v);

    let mut columns: Vec<Vec<Polynomial>> = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let vk = xv.pow(k as u32);
        let mut t = &(&vk * &dd) * &Polynomial::from_int(nvars, -1);
        if k > 0 {
            let vk1 = xv.pow(k as u32 - 1);
            t = &t + &(&(&vk1 * &d) * &Polynomial::from_int(nvars, k as i64));
        }
        columns.push((&t * b).coeffs_in(v));
    }
    let rhs = (&(a * &d) * &d).coeffs_in(v);
    let height = columns.iter().map(Vec::len).chain([rhs.len()]).max().unwrap_or(0);
    let entry = |col: &[Polynomial], i: usize| {
        col.get(i)
            .cloned()
            .map(RatFunc::from_poly)
            .unwrap_or_else(|| RatFunc::zero(nvars))
    };
    let rows: Vec<Vec<RatFunc>> = (0..height)
        .map(|i| columns.iter().map(|col| entry(col, i)).collect())
        .collect();
    let rhs: Vec<RatFunc> = (0..height).map(|i| entry(&rhs, i)).collect();
    let system = FieldMatrix::new(nvars, rows)?;
    let solution = solve_linear(&system, &rhs)?;
    let Some(u) = solution.particular() else {
        return Ok(None);
    };
    let mut numer = RatFunc::zero(nvars);
    for (k, uk) in u.iter().enumerate() {
        if !uk.is_zero() {
            numer = &numer + &(uk * &RatFunc::from_poly(xv.pow(k as u32)));
        }
    }
    let h = numer.checked_div(&RatFunc::from_poly(d))?;
    if h.partial(v) != *c {
        return Err(Error::Structural("antiderivative fails differentiation check".into()));
    }
    Ok(Some(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;
    use crate::foliation::common_theta;

    fn chart2() -> Chart {
        Chart::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn closed_length_one_sequence() {
        let ch = chart2();
        let seq = GvSequence::new(vec![Form::differential(&ch, &(&ch.var(0) * &ch.var(1)))]).unwrap();
        assert!(gv_conditions(&seq).unwrap().is_empty());
        assert_eq!(seq.length(), 1);
    }

    #[test]
    fn affine_sequence_verifies() {
        let ch = chart2();
        let y = ch.var(1);
        let seq = GvSequence::new(vec![Form::dx(&ch, 0).scale(&y), -Form::dx(&ch, 1).scale(&y.inv().unwrap())]).unwrap();
        assert!(gv_conditions(&seq).unwrap().is_empty());
        assert_eq!(seq.length(), 2);
        // The structure equations dω0 = ω0∧ω1 and dω1 = 0, checked directly.
        let (w0, w1) = (&seq.omegas()[0], &seq.omegas()[1]);
        assert_eq!(w0.ext_d(), w0.wedge(w1).unwrap());
        assert!(w1.ext_d().is_zero());
    }

    #[test]
    fn bad_sequence_has_residual() {
        let ch = chart2();
        let seq = GvSequence::new(vec![Form::dx(&ch, 0).scale(&ch.var(1)), Form::dx(&ch, 0)]).unwrap();
        let res = gv_conditions(&seq).unwrap();
        assert_eq!(res.len(), 1);
        assert_eq!(res[0].z_power, 0);
        // Only the dz∧(dω0 − ω0∧ω1) = dz∧dy∧dx piece survives.
        assert_eq!(res[0].form.nterms(), 1);
    }

    #[test]
    fn zero_padding_is_neutral() {
        let ch = chart2();
        let y = ch.var(1);
        let base = vec![Form::dx(&ch, 0).scale(&y), Form::dx(&ch, 0)];
        let mut padded = base.clone();
        padded.push(Form::zero(&ch, 1));
        padded.push(Form::zero(&ch, 1));
        let a = gv_conditions(&GvSequence::new(base).unwrap()).unwrap();
        let b = gv_conditions(&GvSequence::new(padded.clone()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(GvSequence::new(padded).unwrap().length(), 2);
    }

    #[test]
    fn aux_coordinate_avoids_clash() {
        let ch = Chart::new(&["x", "z"]).unwrap();
        let seq = GvSequence::new(vec![Form::dx(&ch, 1)]).unwrap();
        let (ext, _) = seq.total_form().unwrap();
        assert_eq!(ext.names()[2], "z'");
    }

    #[test]
    fn pullback_matches_direct_sum() {
        let ch = chart2();
        let y = ch.var(1);
        let seq = GvSequence::new(vec![Form::dx(&ch, 0).scale(&y), -Form::dx(&ch, 1).scale(&y.inv().unwrap())]).unwrap();
        for t in [rational(0, 1), rational(3, 2), rational(-5, 1)] {
            let direct = &seq.omegas()[0] + &seq.omegas()[1].scale_rational(&t);
            assert_eq!(seq.pullback(&t).unwrap(), direct);
        }
    }

    #[test]
    fn classify_examples() {
        let ch = chart2();
        let (x, y) = (ch.var(0), ch.var(1));
        let exact = Form::differential(&ch, &(&x * &y));
        let r = classify_transverse(&exact, &GvSequence::new(vec![exact.clone()]).unwrap()).unwrap();
        assert_eq!(r.class, Some(TransverseClass::Exact));

        let w = Form::dx(&ch, 0).scale(&y);
        let seq = GvSequence::new(vec![w.clone(), -Form::dx(&ch, 1).scale(&y.inv().unwrap())]).unwrap();
        let r = classify_transverse(&w, &seq).unwrap();
        assert_eq!(r.class, Some(TransverseClass::Affine));
        assert_eq!(r.candidate_length, 2);

        let log = Form::dx(&ch, 0).scale(&x.inv().unwrap());
        let r = classify_transverse(&log, &GvSequence::new(vec![log.clone()]).unwrap()).unwrap();
        assert_eq!(r.class, Some(TransverseClass::Closed));
        assert_eq!(r.exactness, Exactness::NoRationalPrimitive);

        let bad = GvSequence::new(vec![w.clone(), Form::dx(&ch, 0)]).unwrap();
        assert_eq!(classify_transverse(&w, &bad).unwrap().class, None);

        let other = GvSequence::new(vec![Form::dx(&ch, 1)]).unwrap();
        assert!(matches!(classify_transverse(&w, &other), Err(Error::Input(_))));
    }

    #[test]
    fn projective_sequence() {
        // Riccati form ω0 = dy − y² dx with ω1 = −2y dx, ω2 = −dx:
        // dω0 = ω0∧ω1 = 2y dx∧dy, dω1 = 2ω0∧ω2 = 2 dx∧dy, ω1∧ω2 = 0.
        let ch = chart2();
        let y = ch.var(1);
        let w0 = &Form::dx(&ch, 1) - &Form::dx(&ch, 0).scale(&(&y * &y));
        let w1 = Form::dx(&ch, 0).scale(&(&y * &RatFunc::from_int(2, -2)));
        let w2 = -Form::dx(&ch, 0);
        let seq = GvSequence::new(vec![w0.clone(), w1, w2]).unwrap();
        assert!(gv_conditions(&seq).unwrap().is_empty());
        let r = classify_transverse(&w0, &seq).unwrap();
        assert_eq!(r.class, Some(TransverseClass::Projective));
    }

    #[test]
    fn theta_sequence_equivalence() {
        let ch = chart2();
        let (x, y) = (ch.var(0), ch.var(1));
        let w0 = Form::dx(&ch, 0).scale(&y);
        let w1 = Form::dx(&ch, 1).scale(&x);
        let cert = common_theta(&[w0.clone(), w1]).unwrap();
        let seq = GvSequence::from_theta(&w0, &cert.theta).unwrap();
        assert!(is_gv_sequence(&seq).unwrap());
        assert_eq!(theta_from_sequence(&seq).unwrap(), Some(cert.theta));
    }

    #[test]
    fn rational_primitives() {
        let ch = Chart::new(&["x", "y", "z"]).unwrap();
        let (x, y, z) = (ch.var(0), ch.var(1), ch.var(2));
        let targets = [
            &x * &y,
            x.checked_div(&(&x + &y)).unwrap(),
            (&(&x * &z) + &RatFunc::one(3)).checked_div(&(&y * &y)).unwrap(),
            (&x - &z).pow(3).inv().unwrap(),
        ];
        for g in targets {
            let w = Form::differential(&ch, &g);
            let h = rational_primitive(&w).unwrap().expect("rational primitive exists");
            assert_eq!(Form::differential(&ch, &h), w);
            assert!((&h - &g).is_constant());
        }
        let log = Form::dx(&ch, 0).scale(&x.inv().unwrap());
        assert_eq!(rational_primitive(&log).unwrap(), None);
        // d log(x² + y²) pieces: closed with an arctan/log primitive.
        let r2 = &(&x * &x) + &(&y * &y);
        let w = &Form::dx(&ch, 0).scale(&x.checked_div(&r2).unwrap()) + &Form::dx(&ch, 1).scale(&y.checked_div(&r2).unwrap());
        assert_eq!(rational_primitive(&w).unwrap(), None);
        assert!(rational_primitive(&Form::dx(&ch, 0).scale(&y)).is_err());
    }
}
