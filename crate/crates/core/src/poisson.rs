//! Bivector fields, the Schouten bracket, Poisson pencils and the
//! correspondence between bivectors and one-forms on a 3-variable chart.
//!
//! Conventions: `P♯(α) = ι_α P` contracts `α` into the first slot, so
//! `(∂x∧∂y)♯(dx) = ∂y`, and the bracket of bivectors is
//!
//! ```text
//! [P, Q] = Σᵢ ( ι_{dxᵢ}P ∧ ∂ᵢQ + ι_{dxᵢ}Q ∧ ∂ᵢP )
//! ```
//!
//! with `∂ᵢ` acting on coefficients. With these choices
//! `[fP, fP] = f²[P, P] + 2f P♯(df)∧P`, and a bivector on three variables
//! corresponds to the one-form obtained by contracting it into
//! `dx∧dy∧dz`.

use crate::error::{input, precondition, Result};
use crate::exterior::{Chart, Form, MultiVector};
use crate::field::{rational_rank, RatFunc, Rational};

/// Value of the Schouten bracket of two bivectors.
pub type Trivector = MultiVector;

/// A degree-2 multivector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivector(MultiVector);

impl Bivector {
    pub fn new(p: MultiVector) -> Result<Self> {
        if p.degree() != 2 {
            return Err(input(format!("expected a bivector, got degree {}", p.degree())));
        }
        Ok(Bivector(p))
    }

    pub fn as_multivector(&self) -> &MultiVector {
        &self.0
    }

    pub fn into_multivector(self) -> MultiVector {
        self.0
    }

    pub fn chart(&self) -> &Chart {
        self.0.chart()
    }

    pub fn scale(&self, f: &RatFunc) -> Bivector {
        Bivector(self.0.scale(f))
    }

    pub fn checked_add(&self, other: &Bivector) -> Result<Bivector> {
        Ok(Bivector(self.0.checked_add(&other.0)?))
    }

    /// `P(df, dg)`.
    pub fn bracket(&self, f: &RatFunc, g: &RatFunc) -> Result<RatFunc> {
        let chart = self.chart();
        let dfdg = Form::differential(chart, f).wedge(&Form::differential(chart, g))?;
        self.0.pair(&dfdg)
    }
}

pub fn schouten(p: &Bivector, q: &Bivector) -> Result<Trivector> {
    let chart = p.chart();
    chart.check_same(q.chart())?;
    let mut acc = MultiVector::zero(chart, 3);
    for i in 0..chart.dim() {
        let dx = Form::dx(chart, i);
        acc = acc.checked_add(&p.0.interior(&dx)?.wedge(&q.0.partial(i))?)?;
        acc = acc.checked_add(&q.0.interior(&dx)?.wedge(&p.0.partial(i))?)?;
    }
    Ok(acc)
}

pub fn is_poisson(p: &Bivector) -> Result<bool> {
    Ok(schouten(p, p)?.is_zero())
}

/// Whether two Poisson bivectors span a Poisson pencil.
pub fn pencil_compatible(p: &Bivector, q: &Bivector) -> Result<bool> {
    for (name, b) in [("first", p), ("second", q)] {
        if !is_poisson(b)? {
            return Err(precondition(format!("{name} bivector is not Poisson")));
        }
    }
    Ok(schouten(p, q)?.is_zero())
}

/// `P♯(α) = ι_α P`.
pub fn sharp(p: &Bivector, alpha: &Form) -> Result<MultiVector> {
    p.0.interior(alpha)
}

/// `[fP, fP] − 2f P♯(df)∧P`, which vanishes for Poisson `P`.
pub fn scaling_defect(f: &RatFunc, p: &Bivector) -> Result<Trivector> {
    if !is_poisson(p)? {
        return Err(precondition("scaling identity needs a Poisson bivector"));
    }
    let fp = p.scale(f);
    let lhs = schouten(&fp, &fp)?;
    let df = Form::differential(p.chart(), f);
    let rhs = sharp(p, &df)?.wedge(&p.0)?.scale(&(f * &RatFunc::from_int(f.nvars(), 2)));
    lhs.checked_sub(&rhs)
}

fn require_three(chart: &Chart) -> Result<()> {
    if chart.dim() == 3 {
        Ok(())
    } else {
        Err(input(format!(
            "the bivector/one-form correspondence needs 3 variables, got {}",
            chart.dim()
        )))
    }
}

fn volume(chart: &Chart) -> Result<Form> {
    let dxs: Vec<Form> = (0..chart.dim()).map(|i| Form::dx(chart, i)).collect();
    Form::wedge_all(chart, &dxs)
}

/// `Σ_{i<j} Pⁱʲ ι_{∂ⱼ} ι_{∂ᵢ}(dx∧dy∧dz)`; sends `∂x∧∂y ↦ dz`,
/// `∂y∧∂z ↦ dx`, `∂x∧∂z ↦ −dy`.
pub fn bivector_to_form(p: &Bivector) -> Result<Form> {
    let chart = p.chart();
    require_three(chart)?;
    let vol = volume(chart)?;
    let mut acc = Form::zero(chart, 1);
    for (idx, c) in p.0.terms() {
        let piece = vol
            .interior(&MultiVector::d_dx(chart, idx[0]))?
            .interior(&MultiVector::d_dx(chart, idx[1]))?;
        acc = &acc + &piece.scale(c);
    }
    Ok(acc)
}

/// Inverse of [`bivector_to_form`].
pub fn form_to_bivector(eta: &Form) -> Result<Bivector> {
    let chart = eta.chart();
    require_three(chart)?;
    if eta.degree() != 1 {
        return Err(input("expected a one-form"));
    }
    let c = |i: usize| eta.coefficient(&[i]);
    let terms = [
        (vec![1, 2], c(0)),
        (vec![0, 2], -&c(1)),
        (vec![0, 1], c(2)),
    ];
    Bivector::new(MultiVector::from_terms(chart, 2, terms))
}

/// Rank of the matrix `(Pⁱʲ)` at a rational point.
pub fn bivector_rank_at(p: &Bivector, point: &[Rational]) -> Result<usize> {
    let chart = p.chart();
    let n = chart.dim();
    if point.len() != n {
        return Err(input(format!("expected {n} coordinates, got {}", point.len())));
    }
    let mut m = vec![vec![Rational::from_integer(0.into()); n]; n];
    for (idx, c) in p.0.terms() {
        let v = c
            .eval(point)
            .ok_or_else(|| input("a coefficient has a pole at the given point"))?;
        m[idx[0]][idx[1]] = v.clone();
        m[idx[1]][idx[0]] = -v;
    }
    Ok(rational_rank(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::is_integrable;

    fn xyz() -> Chart {
        Chart::new(&["x", "y", "z"]).unwrap()
    }

    fn dd(ch: &Chart, i: usize, j: usize) -> MultiVector {
        MultiVector::d_dx(ch, i).wedge(&MultiVector::d_dx(ch, j)).unwrap()
    }

    fn biv(m: MultiVector) -> Bivector {
        Bivector::new(m).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let ch = xyz();
        let p = biv(dd(&ch, 0, 1));
        let q = biv(dd(&ch, 1, 2));
        assert!(schouten(&p, &q).unwrap().is_zero());
        assert!(is_poisson(&p).unwrap());

        let y = ch.var(1);
        let bad = biv(&dd(&ch, 0, 1) + &dd(&ch, 1, 2).scale(&y));
        let br = schouten(&bad, &bad).unwrap();
        assert!(!br.is_zero());
        let good = biv(&dd(&ch, 0, 1) + &dd(&ch, 1, 2).scale(&ch.var(0)));
        assert!(is_poisson(&good).unwrap());

        let plane = Chart::new(&["x", "y"]).unwrap();
        let p2 = biv(dd(&plane, 0, 1).scale(&(&plane.var(0) * &plane.var(1))));
        assert!(is_poisson(&p2).unwrap());
    }

    #[test]
    fn sharp_examples() {
        let ch = xyz();
        let p = biv(dd(&ch, 0, 1));
        assert_eq!(sharp(&p, &Form::dx(&ch, 0)).unwrap(), MultiVector::d_dx(&ch, 1));
        assert!(sharp(&p, &Form::zero(&ch, 1)).unwrap().is_zero());
        let xp = biv(dd(&ch, 0, 1).scale(&ch.var(0)));
        assert_eq!(
            sharp(&xp, &Form::dx(&ch, 1)).unwrap(),
            -&MultiVector::d_dx(&ch, 0).scale(&ch.var(0))
        );
    }

    #[test]
    fn scaling_examples() {
        let ch = xyz();
        let (x, y) = (ch.var(0), ch.var(1));
        let p = biv(dd(&ch, 0, 1));
        assert!(scaling_defect(&x, &p).unwrap().is_zero());
        assert!(scaling_defect(&RatFunc::from_int(3, 5), &p).unwrap().is_zero());
        let q = biv(&dd(&ch, 0, 1) + &dd(&ch, 1, 2).scale(&x));
        assert!(scaling_defect(&(&x * &y), &q).unwrap().is_zero());
        let bad = biv(&dd(&ch, 0, 1) + &dd(&ch, 1, 2).scale(&y));
        assert!(scaling_defect(&x, &bad).is_err());
    }

    #[test]
    fn correspondence_examples() {
        let ch = xyz();
        let y = ch.var(1);
        assert_eq!(bivector_to_form(&biv(dd(&ch, 0, 1))).unwrap(), Form::dx(&ch, 2));
        assert_eq!(bivector_to_form(&biv(dd(&ch, 1, 2))).unwrap(), Form::dx(&ch, 0));
        assert_eq!(bivector_to_form(&biv(dd(&ch, 0, 2))).unwrap(), -&Form::dx(&ch, 1));
        let p = biv(&dd(&ch, 0, 1) + &dd(&ch, 1, 2).scale(&y));
        let eta = bivector_to_form(&p).unwrap();
        assert_eq!(eta, &Form::dx(&ch, 2) + &Form::dx(&ch, 0).scale(&y));
        assert_eq!(form_to_bivector(&eta).unwrap(), p);
        assert_eq!(is_poisson(&p).unwrap(), is_integrable(&eta).unwrap());

        let plane = Chart::new(&["x", "y"]).unwrap();
        assert!(bivector_to_form(&biv(dd(&plane, 0, 1))).is_err());
    }

    #[test]
    fn pencils() {
        let ch = xyz();
        let p = biv(dd(&ch, 0, 1));
        let q = biv(dd(&ch, 1, 2));
        assert!(pencil_compatible(&p, &q).unwrap());
        assert!(pencil_compatible(&p, &p).unwrap());
        // η = dz and η = y dx are integrable, their sum is not.
        let a = form_to_bivector(&Form::dx(&ch, 2)).unwrap();
        let b = form_to_bivector(&Form::dx(&ch, 0).scale(&ch.var(1))).unwrap();
        assert!(is_poisson(&a).unwrap() && is_poisson(&b).unwrap());
        assert!(!pencil_compatible(&a, &b).unwrap());
        assert!(!is_poisson(&a.checked_add(&b).unwrap()).unwrap());
        let bad = biv(&dd(&ch, 0, 1) + &dd(&ch, 1, 2).scale(&ch.var(1)));
        assert!(matches!(pencil_compatible(&bad, &p), Err(crate::Error::Precondition(_))));
    }

    #[test]
    fn brackets_and_rank() {
        let ch = xyz();
        let (x, y, z) = (ch.var(0), ch.var(1), ch.var(2));
        let p = biv(&dd(&ch, 0, 1) + &dd(&ch, 1, 2).scale(&x));
        assert_eq!(p.bracket(&x, &y).unwrap(), RatFunc::one(3));
        let (f, g, h) = (&x * &y, &y + &z, &z * &z);
        let jac = &(&p.bracket(&f, &p.bracket(&g, &h).unwrap()).unwrap()
            + &p.bracket(&g, &p.bracket(&h, &f).unwrap()).unwrap())
            + &p.bracket(&h, &p.bracket(&f, &g).unwrap()).unwrap();
        assert!(jac.is_zero());
        let q = |v: i64| Rational::from_integer(v.into());
        assert_eq!(bivector_rank_at(&p, &[q(1), q(2), q(3)]).unwrap(), 2);
        assert_eq!(bivector_rank_at(&biv(MultiVector::zero(&ch, 2)), &[q(0), q(0), q(0)]).unwrap(), 0);
    }
}
