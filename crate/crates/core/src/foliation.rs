//! Integrability of one-forms and decomposable forms, rank of spaces of
//! one-forms, θ-forms (`dω = θ∧ω`), 3-web curvature and first integrals.

use crate::error::{input, precondition, Error, Result};
use crate::exterior::{Chart, Form};
use crate::field::{constant_relations, solve_linear, FieldMatrix, LinearSolution, RatFunc, Rational};

/// Finite-dimensional ℚ-space of rational one-forms given by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpace {
    chart: Chart,
    basis: Vec<Form>,
}

impl FormSpace {
    /// Checks that the basis is nonempty, made of one-forms on one chart,
    /// and linearly independent over ℚ.
    pub fn new(basis: Vec<Form>) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Err(input("a form space needs at least one basis element"));
        };
        let chart = first.chart().clone();
        for w in &basis {
            chart.check_same(w.chart())?;
            if w.degree() != 1 {
                return Err(input(format!("basis element of degree {} (expected 1)", w.degree())));
            }
        }
        let rel = constant_relations(&basis)?;
        if !rel.is_empty() {
            return Err(input("basis is linearly dependent over the constants"));
        }
        Ok(FormSpace { chart, basis })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn basis(&self) -> &[Form] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Σ a_i ω_i`.
    pub fn combination(&self, a: &[Rational]) -> Result<Form> {
        if a.len() != self.basis.len() {
            return Err(input(format!(
                "coefficient vector has {} entries for a {}-dimensional space",
                a.len(),
                self.basis.len()
            )));
        }
        let mut acc = Form::zero(&self.chart, 1);
        for (c, w) in a.iter().zip(&self.basis) {
            acc = &acc + &w.scale_rational(c);
        }
        Ok(acc)
    }
}

fn require_one_form(w: &Form) -> Result<()> {
    if w.degree() == 1 {
        Ok(())
    } else {
        Err(input(format!("expected a one-form, got degree {}", w.degree())))
    }
}

/// `ω∧dω`.
pub fn integrability_form(w: &Form) -> Result<Form> {
    require_one_form(w)?;
    w.wedge(&w.ext_d())
}

/// Frobenius condition for a one-form: `ω∧dω = 0`.
pub fn is_integrable(w: &Form) -> Result<bool> {
    Ok(integrability_form(w)?.is_zero())
}

/// Integrability of the distribution defined by `α₁∧⋯∧α_q`:
/// `ω∧dα_i = 0` for every factor.
pub fn is_integrable_decomposable(alphas: &[Form]) -> Result<bool> {
    let Some(first) = alphas.first() else {
        return Err(input("need at least one factor"));
    };
    for a in alphas {
        require_one_form(a)?;
    }
    let w = Form::wedge_all(first.chart(), alphas)?;
    if w.is_zero() {
        return Err(input("the factors wedge to zero; not a codimension-q distribution"));
    }
    for a in alphas {
        if !w.wedge(&a.ext_d())?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn component_matrix(forms: &[Form]) -> Result<FieldMatrix> {
    let n = forms.first().map_or(0, |w| w.chart().dim());
    FieldMatrix::new(n, forms.iter().map(Form::components).collect())
}

/// Rank over the rational function field of the coefficient matrix.
pub fn rank_by_matrix(forms: &[Form]) -> Result<usize> {
    for w in forms {
        require_one_form(w)?;
    }
    Ok(component_matrix(forms)?.rank())
}

/// Largest `r` for which some `r` of the forms have nonzero wedge.
pub fn rank_by_wedges(forms: &[Form]) -> Result<usize> {
    let Some(first) = forms.first() else {
        return Ok(0);
    };
    for w in forms {
        require_one_form(w)?;
    }
    let chart = first.chart();
    let top = forms.len().min(chart.dim());
    for r in (1..=top).rev() {
        let mut found = false;
        for_each_subset(forms.len(), r, &mut |idx| {
            if found {
                return;
            }
            let picked: Vec<&Form> = idx.iter().map(|&i| &forms[i]).collect();
            if let Ok(w) = Form::wedge_all(chart, picked) {
                found = !w.is_zero();
            }
        });
        if found {
            return Ok(r);
        }
    }
    Ok(0)
}

fn for_each_subset(n: usize, r: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == r {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, f);
            cur.pop();
        }
    }
    go(0, n, r, &mut Vec::new(), f);
}

/// Rank of a form space; the wedge and matrix computations must agree.
pub fn rank(space: &FormSpace) -> Result<usize> {
    let r = rank_by_matrix(space.basis())?;
    let w = rank_by_wedges(space.basis())?;
    if r != w {
        return Err(Error::Structural(format!(
            "rank by coefficient matrix ({r}) differs from rank by wedges ({w})"
        )));
    }
    Ok(r)
}

/// Solution of `dω_i = θ∧ω_i` for a family of one-forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaCertificate {
    pub theta: Form,
    /// `dθ = 0`.
    pub closed: bool,
    /// `dω_i − θ∧ω_i`, one per input form; all zero on success.
    pub residuals: Vec<Form>,
}

impl ThetaCertificate {
    pub fn verified(&self) -> bool {
        self.residuals.iter().all(Form::is_zero)
    }
}

/// `dω − θ∧ω`.
pub fn theta_residual(w: &Form, theta: &Form) -> Result<Form> {
    w.ext_d().checked_sub(&theta.wedge(w)?)
}

/// Linear system for `θ = Σ c_j dx_j` with `dω_i = θ∧ω_i`: one equation per
/// form and per coordinate 2-plane `dx_a∧dx_b`, namely
/// `c_a ω_b − c_b ω_a = (dω)_{ab}`.
fn theta_system(chart: &Chart, forms: &[Form]) -> Result<(FieldMatrix, Vec<RatFunc>)> {
    let n = chart.dim();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for w in forms {
        let comps = w.components();
        let dw = w.ext_d();
        for a in 0..n {
            for b in a + 1..n {
                let mut row = vec![RatFunc::zero(n); n];
                row[a] = comps[b].clone();
                row[b] = -&comps[a];
                rows.push(row);
                rhs.push(dw.coefficient(&[a, b]));
            }
        }
    }
    Ok((FieldMatrix::new(n, rows)?, rhs))
}

fn solve_theta(chart: &Chart, forms: &[Form]) -> Result<LinearSolution> {
    let (m, b) = theta_system(chart, forms)?;
    if m.nrows() == 0 {
        // One coordinate: every 2-form vanishes and θ = 0 works.
        return Ok(LinearSolution::Unique(vec![RatFunc::zero(chart.dim())]));
    }
    solve_linear(&m, &b)
}

/// The unique one-form `θ` with `dω_i = θ∧ω_i` for all inputs.
///
/// Needs at least two forms spanning rank ≥ 2 over the function field; then
/// the kernel of the system is trivial and `θ` is unique when it exists.
pub fn common_theta(forms: &[Form]) -> Result<ThetaCertificate> {
    if forms.len() < 2 {
        return Err(input("common theta needs at least two forms"));
    }
    let chart = forms[0].chart().clone();
    for w in forms {
        chart.check_same(w.chart())?;
        require_one_form(w)?;
    }
    if rank_by_matrix(forms)? < 2 {
        return Err(Error::Underdetermined(
            "the forms are proportional over the function field; θ is not unique".into(),
        ));
    }
    match solve_theta(&chart, forms)? {
        LinearSolution::Unique(c) => {
            let theta = Form::from_components(&chart, &c);
            let residuals = forms
                .iter()
                .map(|w| theta_residual(w, &theta))
                .collect::<Result<Vec<_>>>()?;
            if residuals.iter().any(|r| !r.is_zero()) {
                return Err(Error::Structural("solution fails back-substitution".into()));
            }
            Ok(ThetaCertificate {
                closed: theta.ext_d().is_zero(),
                theta,
                residuals,
            })
        }
        LinearSolution::Underdetermined { .. } => Err(Error::Structural(
            "θ-system has a kernel although the forms have rank ≥ 2".into(),
        )),
        LinearSolution::Inconsistent => Err(locate_inconsistency(&chart, forms)),
    }
}

/// Finds the first form that cannot share a θ with the ones before it.
fn locate_inconsistency(chart: &Chart, forms: &[Form]) -> Error {
    for k in 1..=forms.len() {
        match solve_theta(chart, &forms[..k]) {
            Ok(LinearSolution::Inconsistent) => {
                let residual = if k >= 2 {
                    solve_theta(chart, &forms[..k - 1])
                        .ok()
                        .and_then(|s| s.particular().map(|c| Form::from_components(chart, c)))
                        .and_then(|theta| theta_residual(&forms[k - 1], &theta).ok())
                        .map(|r| r.to_string())
                } else {
                    Some(forms[0].ext_d().to_string())
                };
                return Error::NoCommonTheta {
                    failing_index: k - 1,
                    residual,
                };
            }
            Ok(_) => continue,
            Err(e) => return e,
        }
    }
    Error::Structural("θ-system inconsistent but every prefix is solvable".into())
}

/// θ and curvature `Θ = dθ` of the 3-web `ω₀, ω₁, ω₂ = −ω₀−ω₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WebCurvature {
    pub forms: [Form; 3],
    pub theta: Form,
    pub curvature: Form,
}

impl WebCurvature {
    pub fn is_flat(&self) -> bool {
        self.curvature.is_zero()
    }
}

pub fn web_curvature(w0: &Form, w1: &Form) -> Result<WebCurvature> {
    w0.chart().check_same(w1.chart())?;
    require_one_form(w0)?;
    require_one_form(w1)?;
    let w2 = -(w0 + w1);
    for (i, w) in [w0, w1, &w2].into_iter().enumerate() {
        if !is_integrable(w)? {
            return Err(precondition(format!("web form ω{i} is not integrable")));
        }
    }
    if w0.wedge(w1)?.is_zero() {
        return Err(precondition("ω0∧ω1 = 0: the foliations are not transverse"));
    }
    let forms = [w0.clone(), w1.clone(), w2];
    let cert = common_theta(&forms).map_err(|e| match e {
        Error::NoCommonTheta { .. } => Error::Structural(format!("no common θ for an integrable web: {e}")),
        other => other,
    })?;
    Ok(WebCurvature {
        curvature: cert.theta.ext_d(),
        theta: cert.theta,
        forms,
    })
}

/// `df/f + θ`: if `dω = θ∧ω` then `d(fω) = (df/f + θ)∧(fω)`.
pub fn rescale_theta(theta: &Form, f: &RatFunc) -> Result<Form> {
    require_one_form(theta)?;
    let inv = f.inv().map_err(|_| input("rescaling function must be nonzero"))?;
    let chart = theta.chart();
    Ok(&Form::differential(chart, f).scale(&inv) + theta)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstIntegralVerdict {
    /// `df∧Ω = 0`.
    pub holds: bool,
    /// `f` is constant, so the verdict carries no information.
    pub constant: bool,
}

pub fn is_first_integral(f: &RatFunc, omega: &Form) -> Result<FirstIntegralVerdict> {
    let df = Form::differential(omega.chart(), f);
    Ok(FirstIntegralVerdict {
        holds: df.wedge(omega)?.is_zero(),
        constant: f.is_constant(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairIdentity {
    pub i: usize,
    pub j: usize,
    /// `d(f_i/f_j)∧ω₁∧⋯∧ω_q`.
    pub form: Form,
    pub holds: bool,
}

/// Outcome of [`verify_axis_identity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisReport {
    pub hypotheses: Vec<HypothesisCheck>,
    pub pairs: Vec<PairIdentity>,
}

impl AxisReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    pub fn failed_hypotheses(&self) -> Vec<&str> {
        self.hypotheses
            .iter()
            .filter(|h| !h.holds)
            .map(|h| h.name.as_str())
            .collect()
    }

    pub fn identities_hold(&self) -> bool {
        self.pairs.iter().all(|p| p.holds)
    }
}

/// Checks that the quotients `f_i/f_j` are first integrals of
/// `ω₁∧⋯∧ω_q` whenever each `ω_i`, `Σω_i` and `Σf_iω_i` are integrable and
/// `ω₁∧⋯∧ω_q ≠ 0`.
///
/// The hypotheses are evaluated and reported. If they all hold and a pair
/// identity fails, a structural error is returned.
pub fn verify_axis_identity(forms: &[Form], funcs: &[RatFunc]) -> Result<AxisReport> {
    if forms.is_empty() {
        return Err(input("need at least one form"));
    }
    if forms.len() != funcs.len() {
        return Err(input(format!("{} forms but {} functions", forms.len(), funcs.len())));
    }
    if let Some(j) = funcs.iter().position(RatFunc::is_zero) {
        return Err(input(format!("function f{} is zero", j + 1)));
    }
    let chart = forms[0].chart().clone();
    for w in forms {
        chart.check_same(w.chart())?;
        require_one_form(w)?;
    }
    let mut hypotheses = Vec::new();
    for (i, w) in forms.iter().enumerate() {
        hypotheses.push(HypothesisCheck {
            name: format!("ω{} integrable", i + 1),
            holds: is_integrable(w)?,
        });
    }
    let big = Form::wedge_all(&chart, forms)?;
    hypotheses.push(HypothesisCheck {
        name: "ω1∧⋯∧ωq ≠ 0".into(),
        holds: !big.is_zero(),
    });
    let sum = forms.iter().fold(Form::zero(&chart, 1), |acc, w| &acc + w);
    hypotheses.push(HypothesisCheck {
        name: "Σωi integrable".into(),
        holds: is_integrable(&sum)?,
    });
    let weighted = forms
        .iter()
        .zip(funcs)
        .fold(Form::zero(&chart, 1), |acc, (w, f)| &acc + &w.scale(f));
    hypotheses.push(HypothesisCheck {
        name: "Σfiωi integrable".into(),
        holds: is_integrable(&weighted)?,
    });

    let mut pairs = Vec::new();
    for i in 0..funcs.len() {
        for j in i + 1..funcs.len() {
            let quotient = funcs[i].checked_div(&funcs[j])?;
            let form = Form::differential(&chart, &quotient).wedge(&big)?;
            pairs.push(PairIdentity {
                i: i + 1,
                j: j + 1,
                holds: form.is_zero(),
                form,
            });
        }
    }
    let report = AxisReport { hypotheses, pairs };
    if report.hypotheses_hold() && !report.identities_hold() {
        return Err(Error::Structural(
            "all hypotheses hold but a first-integral identity fails".into(),
        ));
    }
    Ok(report)
}

/// Whether every element of the space is integrable, decided exactly from
/// the finite family `{ω_i} ∪ {ω_i + ω_j}`.
///
/// `ω∧dω` is a quadratic form in the coordinates of `ω`; integrability of
/// `ω_i`, `ω_j` and `ω_i + ω_j` kills the diagonal and mixed terms.
pub fn is_fully_integrable(space: &FormSpace) -> Result<bool> {
    let b = space.basis();
    for (i, w) in b.iter().enumerate() {
        if !is_integrable(w)? {
            return Ok(false);
        }
        for v in &b[i + 1..] {
            if !is_integrable(&(w + v))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
