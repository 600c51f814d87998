use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Exponent vector of a monomial, ordered graded-lexicographically.
///
/// Under this order `x1 > x2 > … > xn` and higher total degree wins first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn meet(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over ℚ in a fixed number of variables.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(c.into()))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Rational::one());
        p
    }

    pub fn monomial(coeff: Rational, exps: Vec<u32>) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        if !coeff.is_zero() {
            p.terms.insert(Monomial(exps), coeff);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length");
            p.add_term(Monomial(exps), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in decreasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The value of a constant polynomial, `None` otherwise.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[v]).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Whether variable `v` occurs with positive exponent.
    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.terms.insert(Monomial(exps), c * Rational::from_integer(e.into()));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes the constant `value` for variable `v`; the variable count
    /// is unchanged.
    pub fn substitute(&self, v: usize, value: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            let mut exps = m.0.clone();
            exps[v] = 0;
            out.add_term(Monomial(exps), c * num_traits::pow(value.clone(), e as usize));
        }
        out
    }

    /// Re-embeds into `nvars` variables, mapping old variable `i` to
    /// `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; nvars];
            for (i, &e) in m.0.iter().enumerate() {
                exps[map[i]] += e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Coefficients with respect to variable `v`; entry `k` multiplies `x_v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); deg + 1];
        if self.is_zero() {
            return Vec::new();
        }
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let k = exps[v] as usize;
            exps[v] = 0;
            out[k].terms.insert(Monomial(exps), c.clone());
        }
        out
    }

    /// Inverse of [`Polynomial::coeffs_in`].
    pub fn from_coeffs_in(nvars: usize, v: usize, coeffs: &[Polynomial]) -> Self {
        let mut out = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut exps = m.0.clone();
                exps[v] += k as u32;
                out.add_term(Monomial(exps), a.clone());
            }
        }
        out
    }

    /// Splits off the rational content: returns `(c, p)` with `self = c·p`,
    /// `p` having coprime integer coefficients and positive leading
    /// coefficient. The zero polynomial yields `(0, 0)`.
    pub fn primitive(&self) -> (Rational, Polynomial) {
        if self.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let v = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&v);
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.leading_coefficient().unwrap().is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = c * &lc_inv;
            rem = &rem - &divisor.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Pseudo-remainder of `self` by `b` with respect to variable `v`.
    fn pseudo_rem(&self, b: &Polynomial, v: usize) -> Polynomial {
        let bc = b.coeffs_in(v);
        let db = bc.len() - 1;
        let lb = &bc[db];
        let mut r = self.clone();
        loop {
            let dr = match r.degree_in(v) {
                Some(d) if !r.is_zero() && d as usize >= db => d as usize,
                _ => break,
            };
            let lr = r.coeffs_in(v).swap_remove(dr);
            let mut shift = vec![0; self.nvars];
            shift[v] = (dr - db) as u32;
            let shifted = &lr * &Polynomial::monomial(Rational::one(), shift);
            r = &(&r * lb) - &(&shifted * b);
        }
        r
    }

    /// Greatest common divisor, normalized to coprime integer coefficients
    /// and positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        if self.is_zero() {
            return other.primitive().1;
        }
        if other.is_zero() {
            return self.primitive().1;
        }
        if self.is_constant() || other.is_constant() {
            return Self::one(self.nvars);
        }
        if self.is_monomial() || other.is_monomial() {
            let (mono, poly) = if self.is_monomial() { (self, other) } else { (other, self) };
            let mut m = mono.terms.keys().next().unwrap().clone();
            for k in poly.terms.keys() {
                m = m.meet(k);
            }
            return Polynomial::monomial(Rational::one(), m.0);
        }
        let (a, b) = (self.primitive().1, other.primitive().1);
        if modp::certainly_coprime(&a, &b) {
            return Self::one(self.nvars);
        }
        if let Some(g) = heuristic_gcd(&a, &b, 0) {
            return g;
        }
        let vars: Vec<usize> = (0..self.nvars).collect();
        gcd_rec(&a, &b, &vars).primitive().1
    }

    pub fn lcm(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        let g = self.gcd(other);
        let q = self.div_exact(&g).expect("gcd divides");
        (&q * other).primitive().1
    }

    /// Content with respect to `v`: gcd of the coefficients in `x_v`.
    fn content_in(&self, v: usize, rest: &[usize]) -> Polynomial {
        let mut g = Self::zero(self.nvars);
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() { c.primitive().1 } else { gcd_rec(&g, &c, rest) };
            if g.is_constant() {
                return Self::one(self.nvars);
            }
        }
        g
    }
}

fn height(p: &Polynomial) -> BigInt {
    p.terms.values().map(|c| c.numer().abs()).max().unwrap_or_default()
}

/// Symmetric base-`xi` digits of `c`, lowest first.
fn balanced_digits(c: &BigInt, xi: &BigInt) -> Vec<BigInt> {
    let half = xi / 2;
    let mut c = c.clone();
    let mut out = Vec::new();
    while !c.is_zero() {
        let mut d = c.mod_floor(xi);
        if d > half {
            d -= xi;
        }
        c = (&c - &d) / xi;
        out.push(d);
    }
    out
}

/// Heuristic gcd of primitive integer polynomials: evaluate one variable at
/// a large integer `ξ`, take the gcd of the images recursively, and lift
/// it back through its balanced base-`ξ` expansion. A lift dividing both
/// inputs is their gcd; `None` means the heuristic gave up.
fn heuristic_gcd(a: &Polynomial, b: &Polynomial, depth: usize) -> Option<Polynomial> {
    let n = a.nvars;
    if a.is_constant() || b.is_constant() {
        let (x, y) = (a.constant_value(), b.constant_value());
        return Some(match (x, y) {
            (Some(x), Some(y)) => {
                let g = x.numer().gcd(y.numer());
                Polynomial::constant(n, Rational::from_integer(g))
            }
            _ => Polynomial::one(n),
        });
    }
    let v = (0..n).find(|&v| a.involves(v) || b.involves(v))?;
    let mut xi = BigInt::from(2) * height(a).min(height(b)) + BigInt::from(29);
    let deg = a.total_degree().unwrap_or(0).max(b.total_degree().unwrap_or(0)) as u64;
    for _ in 0..6 {
        if xi.bits() * deg.max(1) * (depth as u64 + 1) > 40_000 {
            return None;
        }
        let xv = Rational::from_integer(xi.clone());
        let (ea, eb) = (a.substitute(v, &xv), b.substitute(v, &xv));
        if !ea.is_zero() && !eb.is_zero() {
            let ((ca, pa), (cb, pb)) = (ea.primitive(), eb.primitive());
            let content = Rational::from_integer(ca.numer().gcd(cb.numer()));
            let g = heuristic_gcd(&pa, &pb, depth + 1)?.scale(&content);
            let mut lifted = Polynomial::zero(n);
            for (m, c) in &g.terms {
                for (k, d) in balanced_digits(c.numer(), &xi).into_iter().enumerate() {
                    if d.is_zero() {
                        continue;
                    }
                    let mut exps = m.0.clone();
                    exps[v] += k as u32;
                    lifted.add_term(Monomial(exps), Rational::from_integer(d));
                }
            }
            if !lifted.is_zero() {
                let lifted = lifted.primitive().1;
                if a.div_exact(&lifted).is_some() && b.div_exact(&lifted).is_some() {
                    return Some(lifted);
                }
            }
        }
        xi = xi * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

/// Recursive content/primitive-part gcd over the variables in `vars`.
/// Inputs are assumed nonzero.
fn gcd_rec(a: &Polynomial, b: &Polynomial, vars: &[usize]) -> Polynomial {
    let n = a.nvars;
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(n);
    }
    let Some(pos) = vars.iter().position(|&v| a.involves(v) || b.involves(v)) else {
        return Polynomial::one(n);
    };
    let v = vars[pos];
    let rest = &vars[pos + 1..];
    match (a.involves(v), b.involves(v)) {
        (true, false) => return gcd_rec(&a.content_in(v, rest), b, rest),
        (false, true) => return gcd_rec(a, &b.content_in(v, rest), rest),
        _ => {}
    }
    let ca = a.content_in(v, rest);
    let cb = b.content_in(v, rest);
    let c = gcd_rec(&ca, &cb, rest);
    let mut p = a.div_exact(&ca).expect("content divides").primitive().1;
    let mut q = b.div_exact(&cb).expect("content divides").primitive().1;
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.pseudo_rem(&q, v);
        if r.is_zero() {
            break;
        }
        if !r.involves(v) {
            return c;
        }
        let rc = r.content_in(v, rest);
        p = q;
        q = r.div_exact(&rc).expect("content divides").primitive().1;
    }
    let qc = q.content_in(v, rest);
    (&c * &q.div_exact(&qc).expect("content divides")).primitive().1
}

/// Coprimality certificate by specialization modulo a large prime.
///
/// A common factor involving `x_v` survives substituting random values for
/// the other variables as long as the degrees in `x_v` are preserved, so a
/// trivial univariate gcd in every variable proves the inputs coprime.
mod modp {
    use num_bigint::BigInt;
    use num_traits::{ToPrimitive, Zero};

    use super::{Polynomial, Rational};

    const P: u64 = (1 << 61) - 1;

    fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }

    fn reduce(n: &BigInt) -> u64 {
        let r = n % BigInt::from(P);
        let r = if r < BigInt::zero() { r + BigInt::from(P) } else { r };
        r.to_u64().expect("residue fits")
    }

    fn residue(c: &Rational) -> Option<u64> {
        let d = reduce(c.denom());
        (d != 0).then(|| mul(reduce(c.numer()), inv(d)))
    }

    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        (z ^ (z >> 31)) % P
    }

    fn specialize(p: &Polynomial, v: usize, point: &[u64]) -> Option<Vec<u64>> {
        let deg = p.degree_in(v)? as usize;
        let mut out = vec![0u64; deg + 1];
        for (m, c) in p.terms() {
            let mut t = residue(c)?;
            for (i, &e) in m.exponents().iter().enumerate() {
                if i != v && e > 0 {
                    t = mul(t, pow(point[i], e as u64));
                }
            }
            let k = m.exponents()[v] as usize;
            out[k] = (out[k] + t) % P;
        }
        (out[deg] != 0).then_some(out)
    }

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn rem(mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
        let lb = inv(*b.last().expect("nonzero"));
        while a.len() >= b.len() {
            let c = mul(*a.last().expect("nonempty"), lb);
            let shift = a.len() - b.len();
            for (i, &x) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + P - mul(c, x)) % P;
            }
            a = trim(a);
        }
        a
    }

    fn gcd_degree(a: Vec<u64>, b: Vec<u64>) -> usize {
        let (mut a, mut b) = (trim(a), trim(b));
        while !b.is_empty() {
            let r = rem(a, &b);
            a = b;
            b = r;
        }
        a.len().saturating_sub(1)
    }

    pub(super) fn certainly_coprime(a: &Polynomial, b: &Polynomial) -> bool {
        let n = a.nvars();
        let mut state = 0x5EED_u64;
        for v in 0..n {
            if !a.involves(v) || !b.involves(v) {
                continue;
            }
            let mut settled = false;
            for _ in 0..3 {
                let point: Vec<u64> = (0..n).map(|_| splitmix(&mut state)).collect();
                let (Some(ua), Some(ub)) = (specialize(a, v, &point), specialize(b, v, &point)) else {
                    continue;
                };
                if gcd_degree(ua, ub) > 0 {
                    return false;
                }
                settled = true;
                break;
            }
            if !settled {
                return false;
            }
        }
        true
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
    };
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different variable counts");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different variable counts");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different variable counts");
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Renders a polynomial with the given variable names, highest term first.
pub struct PolyDisplay<'a> {
    pub poly: &'a Polynomial,
    pub names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.names[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        PolyDisplay { poly: self, names: &names }.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn x() -> Polynomial {
        Polynomial::var(2, 0)
    }
    fn y() -> Polynomial {
        Polynomial::var(2, 1)
    }
    fn c(v: i64) -> Polynomial {
        Polynomial::from_int(2, v)
    }

    #[test]
    fn gcd_strategies_agree() {
        let v = |i| Polynomial::var(3, i);
        let k = |n| Polynomial::from_int(3, n);
        let h = &(&(&v(0) * &v(1)) + &k(3)) * &(&v(2) - &k(7));
        let f = &(&v(0).pow(3) + &(&v(1) * &v(2))) - &k(2);
        let g = &(&v(1).pow(2) * &v(0)) + &k(5);
        let (a, b) = (&(&f * &h) * &k(6), &g * &h);
        let (pa, pb) = (a.primitive().1, b.primitive().1);
        let heuristic = heuristic_gcd(&pa, &pb, 0).unwrap();
        let prs = gcd_rec(&pa, &pb, &[0, 1, 2]).primitive().1;
        assert_eq!(heuristic, prs);
        assert_eq!(a.gcd(&b), h.primitive().1);
        assert!(modp::certainly_coprime(&f, &g));
        assert!(!modp::certainly_coprime(&pa, &pb));
    }

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![1, 0]);
        let b = Monomial(vec![0, 1]);
        let c = Monomial(vec![0, 2]);
        assert!(a > b);
        assert!(c > a);
        assert_eq!((&x() * &x() + y()).leading_term().unwrap().0, &Monomial(vec![2, 0]));
    }

    #[test]
    fn arithmetic_cancels_to_zero() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let expect = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(p, expect);
        assert!((&p - &expect).is_zero());
    }

    #[test]
    fn exact_division() {
        let p = &(&x() * &x()) - &c(1);
        let d = &x() - &c(1);
        assert_eq!(p.div_exact(&d).unwrap(), &x() + &c(1));
        assert!(p.div_exact(&(&x() + &y())).is_none());
    }

    #[test]
    fn gcd_univariate_and_multivariate() {
        let a = &(&x() * &x()) - &c(1);
        let b = &(&x() * &x()) + &(&c(-2) * &x()) + c(1);
        assert_eq!(a.gcd(&b), &x() - &c(1));

        // gcd((x+y)(x-2y)^2, (x+y)^2 (x - 2y) y) = (x+y)(x-2y)
        let s = &x() + &y();
        let t = &x() - &(&c(2) * &y());
        let a = &(&s * &t) * &t;
        let b = &(&(&s * &s) * &t) * &y();
        assert_eq!(a.gcd(&b), (&s * &t).primitive().1);
    }

    #[test]
    fn gcd_with_monomial_fast_path() {
        let a = &(&x() * &x()) * &y();
        let b = &(&x() * &y()) + &(&x() * &x());
        assert_eq!(a.gcd(&b), x());
    }

    #[test]
    fn primitive_normalizes_sign_and_content() {
        let p = &x().scale(&q(-2, 3)) + &c(4);
        let (cont, prim) = p.primitive();
        assert_eq!(cont, q(-2, 3));
        assert_eq!(prim, &x() - &c(6));
    }

    #[test]
    fn partial_and_eval() {
        let p = &(&x() * &x()) * &y();
        assert_eq!(p.partial(0), &c(2) * &(&x() * &y()));
        assert_eq!(p.eval(&[q(1, 2), q(3, 1)]), q(3, 4));
        assert_eq!(p.substitute(1, &q(2, 1)), &c(2) * &(&x() * &x()));
    }

    #[test]
    fn coeffs_round_trip() {
        let p = &(&(&x() * &x()) * &y()) + &(&c(3) * &y()) + c(5);
        let cs = p.coeffs_in(1);
        assert_eq!(cs.len(), 2);
        assert_eq!(Polynomial::from_coeffs_in(2, 1, &cs), p);
    }
}
