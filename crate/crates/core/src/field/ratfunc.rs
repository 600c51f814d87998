use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::PolyDisplay;
use super::{Polynomial, Rational};
use crate::error::{Error, Result};

/// Element of ℚ(x₁,…,xₙ) in canonical form.
///
/// `num/den` is reduced, both have integer coefficients whose joint content
/// is 1, and the graded-lex leading coefficient of `den` is positive. Two
/// equal fractions therefore have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Polynomial,
    den: Polynomial,
}

impl RatFunc {
    /// Canonical representative of `num/den`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        assert_eq!(num.nvars(), den.nvars(), "numerator and denominator over different variable counts");
        if num.is_zero() {
            return Ok(Self::zero(num.nvars()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(Self::scaled(num, den))
    }

    /// Normalizes the rational scalar between two coprime polynomials.
    fn scaled(num: Polynomial, den: Polynomial) -> Self {
        let mut den_lcm = BigInt::one();
        for (_, c) in num.terms().chain(den.terms()) {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in num.terms().chain(den.terms()) {
            g = g.gcd(&(c.numer() * (&den_lcm / c.denom())));
        }
        let mut s = Rational::new(den_lcm, g);
        if den.leading_coefficient().unwrap().is_negative() {
            s = -s;
        }
        if s.is_one() {
            RatFunc { num, den }
        } else {
            RatFunc {
                num: num.scale(&s),
                den: den.scale(&s),
            }
        }
    }

    pub fn zero(nvars: usize) -> Self {
        RatFunc {
            num: Polynomial::zero(nvars),
            den: Polynomial::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        RatFunc {
            num: Polynomial::one(nvars),
            den: Polynomial::one(nvars),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(nvars, c))
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(c.into()))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Polynomial::var(nvars, i))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let n = p.nvars();
        Self::scaled(p, Polynomial::one(n))
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        Some(self.num.constant_value()? / self.den.constant_value()?)
    }

    /// `num/den` as a polynomial when the denominator is constant.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        let d = self.den.constant_value()?;
        Some(self.num.scale(&d.recip()))
    }

    /// Sign of the leading numerator coefficient; used when printing sums.
    pub fn is_negative(&self) -> bool {
        self.num.leading_coefficient().is_some_and(|c| c.is_negative())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::scaled(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        Self::scaled(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        if self.is_zero() {
            return if e == 0 { Self::one(self.nvars()) } else { self.clone() };
        }
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
        .renormalized()
    }

    fn renormalized(self) -> Self {
        Self::scaled(self.num, self.den)
    }

    /// ∂/∂x_i by the quotient rule.
    pub fn partial(&self, i: usize) -> Self {
        let dn = self.num.partial(i);
        if self.den.is_constant() {
            return Self::scaled(dn, self.den.clone());
        }
        let dd = self.den.partial(i);
        if dd.is_zero() {
            return Self::new(dn, self.den.clone()).expect("nonzero denominator");
        }
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::new(top, &self.den * &self.den).expect("nonzero denominator")
    }

    /// Value at a rational point; `None` at a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    /// Substitutes a constant for variable `v`.
    pub fn substitute(&self, v: usize, value: &Rational) -> Result<Self> {
        Self::new(self.num.substitute(v, value), self.den.substitute(v, value))
    }

    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        Self::scaled(self.num.remap(nvars, map), self.den.remap(nvars, map))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> RatFuncDisplay<'a> {
        RatFuncDisplay { value: self, names }
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            let a = self.num.scale(&self.den.constant_value().unwrap().recip());
            let b = rhs.num.scale(&rhs.den.constant_value().unwrap().recip());
            return RatFunc::from_poly(&a + &b);
        }
        // Reduced operands can only share factors of gcd(den₁, den₂) with
        // the new numerator, so only that gcd has to be cancelled.
        let g = self.den.gcd(&rhs.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        if num.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        if g.is_constant() {
            return RatFunc::scaled(num, &self.den * &b);
        }
        let h = num.gcd(&g);
        if h.is_constant() {
            return RatFunc::scaled(num, &self.den * &b);
        }
        let num = num.div_exact(&h).expect("gcd divides");
        let rest = rhs.den.div_exact(&h).expect("gcd divides");
        RatFunc::scaled(num, &a * &rest)
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return RatFunc::scaled(&self.num * &rhs.num, &self.den * &rhs.den);
        }
        // Cross-cancel before multiplying to keep the gcds small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RatFunc::scaled(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
        impl $tr<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

pub struct RatFuncDisplay<'a> {
    value: &'a RatFunc,
    names: &'a [String],
}

impl RatFuncDisplay<'_> {
    /// True when the rendering is a single product/quotient that can be
    /// multiplied onto without parentheses.
    pub fn is_atomic(&self) -> bool {
        let v = self.value;
        match v.as_polynomial() {
            Some(p) => p.nterms() <= 1,
            None => v.num.nterms() <= 1 && v.den.nterms() <= 1,
        }
    }
}

impl fmt::Display for RatFuncDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.value;
        if let Some(p) = v.as_polynomial() {
            return PolyDisplay { poly: &p, names: self.names }.fmt(f);
        }
        let num = PolyDisplay { poly: &v.num, names: self.names };
        let den = PolyDisplay { poly: &v.den, names: self.names };
        let wrap_num = v.num.nterms() > 1 || v.num.leading_coefficient().is_some_and(|c| !c.is_integer());
        match (wrap_num, v.den.nterms() > 1 || !v.den.is_monomial_unit()) {
            (false, false) => write!(f, "{num}/{den}"),
            (true, false) => write!(f, "({num})/{den}"),
            (false, true) => write!(f, "{num}/({den})"),
            (true, true) => write!(f, "({num})/({den})"),
        }
    }
}

impl Polynomial {
    /// A bare integer or a single power `x^k`, safe to print after `/`
    /// without parentheses.
    fn is_monomial_unit(&self) -> bool {
        match self.leading_term() {
            Some((m, c)) if self.nterms() == 1 => {
                m.is_one() || (c.is_one() && m.exponents().iter().filter(|&&e| e > 0).count() == 1)
            }
            _ => false,
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars()).map(|i| format!("x{i}")).collect();
        self.display(&names).fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::var(2, 0)
    }
    fn c(v: i64) -> Polynomial {
        Polynomial::from_int(2, v)
    }
    fn rf(n: Polynomial, d: Polynomial) -> RatFunc {
        RatFunc::new(n, d).unwrap()
    }

    #[test]
    fn normalize_zero_numerator() {
        let z = rf(c(0), &x() + &c(3));
        assert_eq!(z, RatFunc::zero(2));
        assert!(z.denom().is_one());
    }

    #[test]
    fn normalize_reduces_common_factor() {
        // (2x, 4x²) → 1/(2x)
        let r = rf(&c(2) * &x(), &c(4) * &(&x() * &x()));
        assert_eq!(r.numer(), &c(1));
        assert_eq!(r.denom(), &(&c(2) * &x()));
        // (x²−1, x−1) → x+1
        let r = rf(&(&x() * &x()) - &c(1), &x() - &c(1));
        assert_eq!(r, RatFunc::from_poly(&x() + &c(1)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(RatFunc::new(x(), c(0)), Err(Error::ZeroDenominator));
        assert_eq!(RatFunc::zero(2).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn common_denominator_sum() {
        // 1/(x−1) + 1/(x+1) → 2x/(x²−1)
        let a = rf(c(1), &x() - &c(1));
        let b = rf(c(1), &x() + &c(1));
        let expect = rf(&c(2) * &x(), &(&x() * &x()) - &c(1));
        assert_eq!(&a + &b, expect);
    }

    #[test]
    fn inverse_and_identity() {
        let a = RatFunc::var(2, 0);
        assert!((&a.inv().unwrap() * &a).is_one());
        assert_eq!(&a + &RatFunc::zero(2), a);
    }

    #[test]
    fn quotient_rule() {
        let inv_x = RatFunc::var(2, 0).inv().unwrap();
        let expect = -rf(c(1), &x() * &x());
        assert_eq!(inv_x.partial(0), expect);
        assert!(RatFunc::from_int(2, 7).partial(0).is_zero());
    }

    #[test]
    fn partial_matches_finite_difference_quotient_on_polynomial() {
        // ∂x(x²y) = 2xy; for a quadratic in x the symmetric difference
        // quotient with step h is exact.
        let y = RatFunc::var(2, 1);
        let xx = RatFunc::var(2, 0);
        let f = &(&xx * &xx) * &y;
        let df = f.partial(0);
        let h = Rational::new(1.into(), 7.into());
        for (a, b) in [(1, 2), (-3, 5), (2, -7)] {
            let (a, b) = (Rational::from_integer(a.into()), Rational::from_integer(b.into()));
            let plus = f.eval(&[&a + &h, b.clone()]).unwrap();
            let minus = f.eval(&[&a - &h, b.clone()]).unwrap();
            let fd = (plus - minus) / (&h * Rational::from_integer(2.into()));
            assert_eq!(df.eval(&[a, b]).unwrap(), fd);
        }
    }

    #[test]
    fn denominator_sign_is_canonical() {
        let a = rf(x(), -&x() - &c(1));
        let b = rf(-x(), &x() + &c(1));
        assert_eq!(a, b);
        assert!(a.denom().leading_coefficient().unwrap().is_positive());
    }
}
