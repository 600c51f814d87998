//! Differential forms and polyvector fields on a single affine chart.
//!
//! Both are alternating tensors with rational-function coefficients over the
//! coordinate frame. A basis element is a strictly increasing index tuple
//! `I`, read as `dx_I = dx_{i1}∧…∧dx_{ip}` for forms and
//! `∂_I = ∂_{i1}∧…∧∂_{ip}` for polyvectors; every sign in this module comes
//! from the parity of the permutation that sorts an index list.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::error::{input, Error, Result};
use crate::field::{LinearCoordinates, RatFunc, Rational};

/// Ordered list of distinct coordinate names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    names: Arc<[String]>,
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(input("a chart needs at least one variable"));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(input("empty variable name"));
            }
            if names[..i].contains(n) {
                return Err(input(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Chart { names: names.into() })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The chart with one more coordinate appended.
    pub fn extended(&self, name: &str) -> Result<Chart> {
        let mut names = self.names.to_vec();
        names.push(name.to_string());
        Chart::new(&names)
    }

    pub fn var(&self, i: usize) -> RatFunc {
        RatFunc::var(self.dim(), i)
    }

    pub fn constant(&self, c: Rational) -> RatFunc {
        RatFunc::constant(self.dim(), c)
    }

    pub(crate) fn check_same(&self, other: &Chart) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                left: self.names.join(", "),
                right: other.names.join(", "),
            })
        }
    }
}

/// Marker for the variance of an alternating tensor.
pub trait Variance: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Dual: Variance<Dual = Self>;
    /// How a single basis element is printed, e.g. `d(x)` or `D(x)`.
    const PREFIX: &'static str;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covariant;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contravariant;

impl Variance for Covariant {
    type Dual = Contravariant;
    const PREFIX: &'static str = "d";
}

impl Variance for Contravariant {
    type Dual = Covariant;
    const PREFIX: &'static str = "D";
}

/// Alternating tensor of fixed degree with rational-function coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alternating<V: Variance> {
    chart: Chart,
    degree: usize,
    terms: BTreeMap<Vec<usize>, RatFunc>,
    _variance: PhantomData<V>,
}

/// Differential form.
pub type Form = Alternating<Covariant>;
/// Polyvector field.
pub type MultiVector = Alternating<Contravariant>;

/// Sorts `idx` in place and returns the sign of the sorting permutation, or
/// `None` if an index repeats.
fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

impl<V: Variance> Alternating<V> {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        Alternating {
            chart: chart.clone(),
            degree,
            terms: BTreeMap::new(),
            _variance: PhantomData,
        }
    }

    /// Degree-0 element with value `f`.
    pub fn scalar(chart: &Chart, f: RatFunc) -> Self {
        let mut out = Self::zero(chart, 0);
        out.insert(Vec::new(), f);
        out
    }

    /// The basis element `dx_i` or `∂_i`.
    pub fn basis(chart: &Chart, i: usize) -> Self {
        assert!(i < chart.dim(), "coordinate index out of range");
        let mut out = Self::zero(chart, 1);
        out.insert(vec![i], RatFunc::one(chart.dim()));
        out
    }

    /// Degree-1 element `Σ c_i e_i`.
    pub fn from_components(chart: &Chart, comps: &[RatFunc]) -> Self {
        assert_eq!(comps.len(), chart.dim());
        let mut out = Self::zero(chart, 1);
        for (i, c) in comps.iter().enumerate() {
            out.insert(vec![i], c.clone());
        }
        out
    }

    /// Builds an element from arbitrary (possibly unsorted, possibly
    /// repeated) index lists; signs and cancellations are applied.
    pub fn from_terms<I>(chart: &Chart, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, RatFunc)>,
    {
        let mut out = Self::zero(chart, degree);
        for (mut idx, c) in terms {
            assert_eq!(idx.len(), degree, "index list length differs from degree");
            assert!(idx.iter().all(|&i| i < chart.dim()), "index out of range");
            match sort_with_sign(&mut idx) {
                None => {}
                Some(false) => out.accumulate(idx, c),
                Some(true) => out.accumulate(idx, -c),
            }
        }
        out
    }

    fn insert(&mut self, idx: Vec<usize>, c: RatFunc) {
        if !c.is_zero() {
            self.terms.insert(idx, c);
        }
    }

    fn accumulate(&mut self, idx: Vec<usize>, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&idx) {
            None => {
                self.terms.insert(idx, c);
            }
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(idx, s);
                }
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &RatFunc)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the basis element with sorted indices `idx`.
    pub fn coefficient(&self, idx: &[usize]) -> RatFunc {
        self.terms
            .get(idx)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(self.chart.dim()))
    }

    /// Value of a degree-0 element.
    pub fn as_scalar(&self) -> Option<RatFunc> {
        (self.degree == 0).then(|| self.coefficient(&[]))
    }

    /// Components of a degree-1 element, one per coordinate.
    pub fn components(&self) -> Vec<RatFunc> {
        assert_eq!(self.degree, 1, "components() needs a degree-1 element");
        (0..self.chart.dim()).map(|i| self.coefficient(&[i])).collect()
    }

    pub fn scale(&self, f: &RatFunc) -> Self {
        let mut out = Self::zero(&self.chart, self.degree);
        if f.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            out.insert(k.clone(), c * f);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.map_coefficients(|a| a.scale(c))
    }

    pub fn map_coefficients(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        let mut out = Self::zero(&self.chart, self.degree);
        for (k, c) in &self.terms {
            out.insert(k.clone(), f(c));
        }
        out
    }

    /// Coefficient-wise partial derivative ∂/∂x_i.
    pub fn partial(&self, i: usize) -> Self {
        self.map_coefficients(|c| c.partial(i))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.chart.check_same(&other.chart)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// Exterior product; the sign of each product term is the parity of the
    /// permutation sorting the concatenated indices.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.chart.check_same(&other.chart)?;
        let mut out = Self::zero(&self.chart, self.degree + other.degree);
        if out.degree > self.chart.dim() {
            return Ok(out);
        }
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if ka.iter().any(|i| kb.contains(i)) {
                    continue;
                }
                let mut idx: Vec<usize> = ka.iter().chain(kb).copied().collect();
                let negative = sort_with_sign(&mut idx).expect("disjoint indices");
                let c = ca * cb;
                out.accumulate(idx, if negative { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Wedge of a list of elements; the empty product is the scalar 1.
    pub fn wedge_all<'a, I>(chart: &Chart, items: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Self>,
    {
        let mut acc = Self::scalar(chart, RatFunc::one(chart.dim()));
        for a in items {
            acc = acc.wedge(a)?;
        }
        Ok(acc)
    }

    /// Contraction of a degree-1 dual element into the first slot:
    /// `ι_e(e_{i1}∧…∧e_{ip}) = Σ_k (−1)^k e(e_{ik}) e_{i1}∧…^k…∧e_{ip}`.
    pub fn contract(&self, one: &Alternating<V::Dual>) -> Result<Self> {
        self.chart.check_same(&one.chart)?;
        if one.degree != 1 {
            return Err(input(format!(
                "contraction needs a degree-1 argument, got degree {}",
                one.degree
            )));
        }
        if self.degree == 0 {
            return Err(input("cannot contract into a degree-0 element"));
        }
        let mut out = Self::zero(&self.chart, self.degree - 1);
        for (k, c) in &self.terms {
            for (pos, &i) in k.iter().enumerate() {
                let Some(e) = one.terms.get(&vec![i]) else {
                    continue;
                };
                let mut rest = k.clone();
                rest.remove(pos);
                let v = e * c;
                out.accumulate(rest, if pos % 2 == 1 { -v } else { v });
            }
        }
        Ok(out)
    }

    /// Full pairing of equal-degree elements: `⟨a, b⟩ = Σ_I a_I b_I`.
    pub fn pair(&self, other: &Alternating<V::Dual>) -> Result<RatFunc> {
        self.chart.check_same(&other.chart)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut acc = RatFunc::zero(self.chart.dim());
        for (k, c) in &self.terms {
            if let Some(d) = other.terms.get(k) {
                acc = &acc + &(c * d);
            }
        }
        Ok(acc)
    }

    /// Substitutes the constant `value` for coordinate `v` in every
    /// coefficient and drops basis elements involving `v`.
    pub fn restrict(&self, v: usize, value: &Rational) -> Result<Self> {
        let mut out = Self::zero(&self.chart, self.degree);
        for (k, c) in &self.terms {
            if !k.contains(&v) {
                out.insert(k.clone(), c.substitute(v, value)?);
            }
        }
        Ok(out)
    }

    /// Re-expresses the element on `target`, sending coordinate `i` to
    /// `map[i]`. `map` must be strictly increasing so index tuples stay
    /// sorted.
    pub fn embed(&self, target: &Chart, map: &[usize]) -> Self {
        assert!(map.windows(2).all(|w| w[0] < w[1]), "embedding must preserve order");
        let mut out = Self::zero(target, self.degree);
        for (k, c) in &self.terms {
            let idx = k.iter().map(|&i| map[i]).collect();
            out.insert(idx, c.remap(target.dim(), map));
        }
        out
    }

    pub fn display(&self) -> AlternatingDisplay<'_, V> {
        AlternatingDisplay { value: self }
    }
}

impl Form {
    /// `dx_i`.
    pub fn dx(chart: &Chart, i: usize) -> Self {
        Self::basis(chart, i)
    }

    /// `df = Σ ∂_i f dx_i`.
    pub fn differential(chart: &Chart, f: &RatFunc) -> Self {
        let comps: Vec<RatFunc> = (0..chart.dim()).map(|i| f.partial(i)).collect();
        Self::from_components(chart, &comps)
    }

    /// Exterior derivative, `d(f dx_I) = df ∧ dx_I`.
    pub fn ext_d(&self) -> Self {
        let n = self.chart.dim();
        let mut out = Self::zero(&self.chart, self.degree + 1);
        if out.degree > n {
            return out;
        }
        for (k, c) in &self.terms {
            for i in 0..n {
                if k.contains(&i) {
                    continue;
                }
                let d = c.partial(i);
                if d.is_zero() {
                    continue;
                }
                let pos = k.iter().filter(|&&j| j < i).count();
                let mut idx = k.clone();
                idx.insert(pos, i);
                out.accumulate(idx, if pos % 2 == 1 { -d } else { d });
            }
        }
        out
    }

    /// `ι_v a`, contraction of a vector field into the first slot.
    pub fn interior(&self, v: &MultiVector) -> Result<Self> {
        self.contract(v)
    }

    /// Lie derivative by Cartan's formula `ι_v d + d ι_v`.
    pub fn lie(&self, v: &MultiVector) -> Result<Self> {
        let first = self.ext_d().interior(v)?;
        if self.degree == 0 {
            return Ok(first);
        }
        first.checked_add(&self.interior(v)?.ext_d())
    }
}

impl MultiVector {
    /// `∂_i`.
    pub fn d_dx(chart: &Chart, i: usize) -> Self {
        Self::basis(chart, i)
    }

    /// `ι_α P`, contraction of a one-form into the first slot.
    pub fn interior(&self, alpha: &Form) -> Result<Self> {
        self.contract(alpha)
    }
}

impl<V: Variance> Add<&Alternating<V>> for &Alternating<V> {
    type Output = Alternating<V>;
    /// Panics on chart or degree mismatch; use `checked_add` for untrusted
    /// operands.
    fn add(self, rhs: &Alternating<V>) -> Alternating<V> {
        self.checked_add(rhs).expect("incompatible operands")
    }
}

impl<V: Variance> Sub<&Alternating<V>> for &Alternating<V> {
    type Output = Alternating<V>;
    fn sub(self, rhs: &Alternating<V>) -> Alternating<V> {
        self.checked_sub(rhs).expect("incompatible operands")
    }
}

impl<V: Variance> Add for Alternating<V> {
    type Output = Alternating<V>;
    fn add(self, rhs: Alternating<V>) -> Alternating<V> {
        &self + &rhs
    }
}

impl<V: Variance> Sub for Alternating<V> {
    type Output = Alternating<V>;
    fn sub(self, rhs: Alternating<V>) -> Alternating<V> {
        &self - &rhs
    }
}

impl<V: Variance> Neg for &Alternating<V> {
    type Output = Alternating<V>;
    fn neg(self) -> Alternating<V> {
        self.map_coefficients(|c| -c)
    }
}

impl<V: Variance> Neg for Alternating<V> {
    type Output = Alternating<V>;
    fn neg(self) -> Alternating<V> {
        -&self
    }
}

impl<V: Variance> LinearCoordinates for Alternating<V> {
    fn nvars(&self) -> usize {
        self.chart.dim()
    }

    fn chart_key(&self) -> Vec<String> {
        self.chart.names().to_vec()
    }

    fn coordinates(&self) -> Vec<(Vec<usize>, RatFunc)> {
        self.terms
            .iter()
            .map(|(k, c)| {
                let mut label = vec![self.degree];
                label.extend(k);
                (label, c.clone())
            })
            .collect()
    }
}

/// Prints in the expression syntax accepted by the command-line parser,
/// e.g. `y*d(x) + 1/3*x^3*d(y)`. A zero element of positive degree prints
/// as `0*d(x1)/\…` so its degree survives a round trip.
pub struct AlternatingDisplay<'a, V: Variance> {
    value: &'a Alternating<V>,
}

impl<V: Variance> AlternatingDisplay<'_, V> {
    fn basis_name(&self, idx: &[usize]) -> String {
        let names = self.value.chart.names();
        idx.iter()
            .map(|&i| format!("{}({})", V::PREFIX, names[i]))
            .collect::<Vec<_>>()
            .join("/\\")
    }
}

impl<V: Variance> fmt::Display for AlternatingDisplay<'_, V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.value;
        let names = v.chart.names();
        if v.is_zero() {
            if v.degree == 0 || v.degree > v.chart.dim() {
                return write!(f, "0");
            }
            let idx: Vec<usize> = (0..v.degree).collect();
            return write!(f, "0*{}", self.basis_name(&idx));
        }
        for (n, (k, c)) in v.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            match (n, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let shown = abs.display(names);
            if k.is_empty() {
                if negative && !shown.is_atomic() {
                    write!(f, "({shown})")?;
                } else {
                    write!(f, "{shown}")?;
                }
                continue;
            }
            let basis = self.basis_name(k);
            if abs.is_one() {
                write!(f, "{basis}")?;
            } else if shown.is_atomic() {
                write!(f, "{shown}*{basis}")?;
            } else {
                write!(f, "({shown})*{basis}")?;
            }
        }
        Ok(())
    }
}

impl<V: Variance> fmt::Display for Alternating<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display().fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart3() -> Chart {
        Chart::new(&["x", "y", "z"]).unwrap()
    }

    fn var(ch: &Chart, i: usize) -> RatFunc {
        ch.var(i)
    }

    #[test]
    fn chart_rejects_duplicates_and_empty() {
        assert!(Chart::new(&["x", "x"]).is_err());
        assert!(Chart::new::<&str>(&[]).is_err());
    }

    #[test]
    fn wedge_signs() {
        let ch = chart3();
        let dx = Form::dx(&ch, 0);
        let dy = Form::dx(&ch, 1);
        assert!(dx.wedge(&dx).unwrap().is_zero());
        assert_eq!(dx.wedge(&dy).unwrap(), -dy.wedge(&dx).unwrap());
        let a = dx.scale(&var(&ch, 0));
        let b = dy.scale(&var(&ch, 1));
        let expect = dx.wedge(&dy).unwrap().scale(&(&var(&ch, 0) * &var(&ch, 1)));
        assert_eq!(a.wedge(&b).unwrap(), expect);
    }

    #[test]
    fn wedge_chart_mismatch() {
        let a = Form::dx(&chart3(), 0);
        let b = Form::dx(&Chart::new(&["x", "y"]).unwrap(), 0);
        assert!(matches!(a.wedge(&b), Err(Error::ChartMismatch { .. })));
    }

    #[test]
    fn exterior_derivative_examples() {
        let ch = chart3();
        let (x, y) = (var(&ch, 0), var(&ch, 1));
        let f = Form::scalar(&ch, &(&x * &x) * &y);
        let df = f.ext_d();
        let expect = &Form::dx(&ch, 0).scale(&(&RatFunc::from_int(3, 2) * &(&x * &y)))
            + &Form::dx(&ch, 1).scale(&(&x * &x));
        assert_eq!(df, expect);
        assert!(df.ext_d().is_zero());
        // d(y dx) = dy∧dx = −dx∧dy
        let w = Form::dx(&ch, 0).scale(&y);
        assert_eq!(w.ext_d(), -Form::dx(&ch, 0).wedge(&Form::dx(&ch, 1)).unwrap());
    }

    #[test]
    fn interior_examples() {
        let ch = chart3();
        let dx = Form::dx(&ch, 0);
        let dxdy = dx.wedge(&Form::dx(&ch, 1)).unwrap();
        let px = MultiVector::d_dx(&ch, 0);
        let pz = MultiVector::d_dx(&ch, 2);
        assert_eq!(dx.interior(&px).unwrap().as_scalar().unwrap(), RatFunc::one(3));
        assert!(dxdy.interior(&pz).unwrap().is_zero());
        assert_eq!(dxdy.interior(&px).unwrap(), Form::dx(&ch, 1));
        let f = Form::scalar(&ch, var(&ch, 0));
        assert!(f.interior(&px).is_err());
    }

    #[test]
    fn lie_examples() {
        let ch = chart3();
        let x = var(&ch, 0);
        let xdx = Form::dx(&ch, 0).scale(&x);
        assert!(xdx.lie(&MultiVector::d_dx(&ch, 1)).unwrap().is_zero());
        assert_eq!(xdx.lie(&MultiVector::d_dx(&ch, 0)).unwrap(), Form::dx(&ch, 0));
        let f = Form::scalar(&ch, &x * &var(&ch, 2));
        assert_eq!(
            f.lie(&MultiVector::d_dx(&ch, 0)).unwrap().as_scalar().unwrap(),
            var(&ch, 2)
        );
    }

    #[test]
    fn top_degree_overflow_is_zero() {
        let ch = Chart::new(&["x", "y"]).unwrap();
        let vol = Form::dx(&ch, 0).wedge(&Form::dx(&ch, 1)).unwrap();
        let w = Form::dx(&ch, 0).scale(&ch.var(1));
        let three = vol.wedge(&w).unwrap();
        assert_eq!(three.degree(), 3);
        assert!(three.is_zero());
        assert!(vol.scale(&ch.var(0)).ext_d().is_zero());
    }

    #[test]
    fn from_terms_applies_signs() {
        let ch = chart3();
        let one = RatFunc::one(3);
        let a = Form::from_terms(&ch, 2, [(vec![1, 0], one.clone()), (vec![0, 0], one.clone())]);
        assert_eq!(a, -Form::dx(&ch, 0).wedge(&Form::dx(&ch, 1)).unwrap());
    }

    #[test]
    fn display_forms() {
        let ch = chart3();
        let (x, y) = (var(&ch, 0), var(&ch, 1));
        let w = &Form::dx(&ch, 0).scale(&y) + &Form::dx(&ch, 1).scale(&(&x * &x).scale(&Rational::new(1.into(), 3.into())));
        assert_eq!(w.to_string(), "y*d(x) + 1/3*x^2*d(y)");
        let z2 = Form::zero(&ch, 2);
        assert_eq!(z2.to_string(), "0*d(x)/\\d(y)");
        let v = MultiVector::d_dx(&ch, 0).wedge(&MultiVector::d_dx(&ch, 1)).unwrap();
        assert_eq!((-v).to_string(), "-D(x)/\\D(y)");
    }
}
