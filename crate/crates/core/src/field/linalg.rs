use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::Monomial;
use super::{Polynomial, RatFunc, Rational};
use crate::error::{input, Result};

/// Dense matrix over the rational function field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<RatFunc>,
}

impl FieldMatrix {
    pub fn new(nvars: usize, rows: Vec<Vec<RatFunc>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(input("matrix rows have different lengths"));
        }
        if rows.iter().flatten().any(|e| e.nvars() != nvars) {
            return Err(input("matrix entries over different charts"));
        }
        Ok(FieldMatrix {
            rows: rows.len(),
            cols,
            nvars,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            nvars,
            data: vec![RatFunc::zero(nvars); rows * cols],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &RatFunc {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RatFunc) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(RatFunc::zero(self.nvars), |acc, c| {
                    if v[c].is_zero() {
                        acc
                    } else {
                        &acc + &(self.get(r, c) * &v[c])
                    }
                })
            })
            .collect()
    }

    /// Rank over the rational function field.
    pub fn rank(&self) -> usize {
        let rows = (0..self.rows)
            .map(|r| clear_denominators(&self.data[r * self.cols..(r + 1) * self.cols], self.nvars))
            .collect();
        fraction_free_echelon(rows, self.cols).1.len()
    }
}

/// Outcome of [`solve_linear`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<RatFunc>),
    Inconsistent,
    Underdetermined {
        particular: Vec<RatFunc>,
        kernel: Vec<Vec<RatFunc>>,
    },
}

impl LinearSolution {
    pub fn particular(&self) -> Option<&[RatFunc]> {
        match self {
            LinearSolution::Unique(u) => Some(u),
            LinearSolution::Underdetermined { particular, .. } => Some(particular),
            LinearSolution::Inconsistent => None,
        }
    }
}

/// Multiplies a row by the lcm of its denominators, giving polynomial entries.
fn clear_denominators(row: &[RatFunc], nvars: usize) -> Vec<Polynomial> {
    let mut l = Polynomial::one(nvars);
    for e in row {
        if !e.is_zero() && !e.denom().is_constant() {
            l = l.lcm(e.denom());
        }
    }
    row.iter()
        .map(|e| {
            if e.is_zero() {
                Polynomial::zero(nvars)
            } else {
                let f = l.div_exact(e.denom()).expect("lcm is a multiple");
                &f * e.numer()
            }
        })
        .collect()
}

/// Bareiss elimination to row-echelon form on the first `pivot_cols`
/// columns. Pivots are the entry with the fewest terms in the column, ties
/// broken by row order. Returns the reduced rows and the `(row, col)` pivots.
fn fraction_free_echelon(
    mut a: Vec<Vec<Polynomial>>,
    pivot_cols: usize,
) -> (Vec<Vec<Polynomial>>, Vec<(usize, usize)>) {
    let nrows = a.len();
    let width = a.first().map_or(0, Vec::len);
    let nvars = a.first().and_then(|r| r.first()).map_or(0, Polynomial::nvars);
    let mut prev = Polynomial::one(nvars);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| (a[i][c].nterms(), i))
        else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = &pivot_row[c];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                if !prev.is_one() {
                    // Keeps the invariant that all rows below share the scale.
                    for x in row[c + 1..width].iter_mut().filter(|x| !x.is_zero()) {
                        *x = (&*x * piv).div_exact(&prev).expect("Bareiss division is exact");
                    }
                } else {
                    for x in row[c + 1..width].iter_mut().filter(|x| !x.is_zero()) {
                        *x = &*x * piv;
                    }
                }
                continue;
            }
            let lead = row[c].clone();
            for j in c + 1..width {
                let t = &(piv * &row[j]) - &(&lead * &pivot_row[j]);
                row[j] = if prev.is_one() || t.is_zero() {
                    t
                } else {
                    t.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
            row[c] = Polynomial::zero(nvars);
        }
        prev = a[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    (a, pivots)
}

/// Solves `m·u = b` exactly over the rational function field.
pub fn solve_linear(m: &FieldMatrix, b: &[RatFunc]) -> Result<LinearSolution> {
    if b.len() != m.rows {
        return Err(input(format!(
            "right-hand side has {} entries for a {}-row matrix",
            b.len(),
            m.rows
        )));
    }
    let n = m.nvars;
    let rows: Vec<Vec<Polynomial>> = (0..m.rows)
        .map(|r| {
            let mut row: Vec<RatFunc> = m.data[r * m.cols..(r + 1) * m.cols].to_vec();
            row.push(b[r].clone());
            clear_denominators(&row, n)
        })
        .collect();
    let (ech, pivots) = fraction_free_echelon(rows, m.cols);
    let rank = pivots.len();
    if ech[rank..].iter().any(|row| !row[m.cols].is_zero()) {
        return Ok(LinearSolution::Inconsistent);
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivot_cols.contains(c)).collect();

    let back_substitute = |rhs_col: Option<usize>, fixed: &[(usize, RatFunc)]| -> Vec<RatFunc> {
        let mut u = vec![RatFunc::zero(n); m.cols];
        for (c, v) in fixed {
            u[*c] = v.clone();
        }
        for &(r, c) in pivots.iter().rev() {
            let mut acc = match rhs_col {
                Some(k) => RatFunc::from_poly(ech[r][k].clone()),
                None => RatFunc::zero(n),
            };
            for j in c + 1..m.cols {
                if !ech[r][j].is_zero() && !u[j].is_zero() {
                    acc = &acc - &(&RatFunc::from_poly(ech[r][j].clone()) * &u[j]);
                }
            }
            u[c] = acc
                .checked_div(&RatFunc::from_poly(ech[r][c].clone()))
                .expect("pivot is nonzero");
        }
        u
    };

    let particular = back_substitute(Some(m.cols), &[]);
    if free.is_empty() {
        return Ok(LinearSolution::Unique(particular));
    }
    let kernel = free
        .iter()
        .map(|&f| back_substitute(None, &[(f, RatFunc::one(n))]))
        .collect();
    Ok(LinearSolution::Underdetermined { particular, kernel })
}

/// Reduced row-echelon form over ℚ in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Scales a nonzero rational vector to coprime integers with positive first
/// nonzero entry.
pub fn normalize_integer_vector(v: &[Rational]) -> Vec<Rational> {
    let mut den = BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// Basis of `{c : Σ_j rows[i][j]·c_j = 0 ∀i}` over ℚ, each vector
/// normalized by [`normalize_integer_vector`].
pub fn rational_kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            normalize_integer_vector(&v)
        })
        .collect()
}

/// Values whose ℚ-linear relations can be computed: anything that exposes
/// finitely many rational-function coordinates.
pub trait LinearCoordinates {
    fn nvars(&self) -> usize;
    /// Identifies the chart; values with different keys cannot be related.
    fn chart_key(&self) -> Vec<String>;
    /// Nonzero coordinates, keyed by a basis label.
    fn coordinates(&self) -> Vec<(Vec<usize>, RatFunc)>;
}

impl LinearCoordinates for RatFunc {
    fn nvars(&self) -> usize {
        RatFunc::nvars(self)
    }
    fn chart_key(&self) -> Vec<String> {
        vec![format!("{} variables", RatFunc::nvars(self))]
    }
    fn coordinates(&self) -> Vec<(Vec<usize>, RatFunc)> {
        if self.is_zero() {
            Vec::new()
        } else {
            vec![(Vec::new(), self.clone())]
        }
    }
}

/// Writes every value over a common polynomial denominator and returns the
/// exact coefficient matrix over ℚ: one row per (basis label, monomial), one
/// column per value.
pub fn coefficient_matrix<T: LinearCoordinates>(values: &[T]) -> Result<Vec<Vec<Rational>>> {
    let Some(first) = values.first() else {
        return Ok(Vec::new());
    };
    let key = first.chart_key();
    if values.iter().any(|v| v.chart_key() != key) {
        return Err(input("values live on different charts"));
    }
    let n = first.nvars();
    let coords: Vec<Vec<(Vec<usize>, RatFunc)>> = values.iter().map(T::coordinates).collect();
    let mut l = Polynomial::one(n);
    for (_, c) in coords.iter().flatten() {
        if !c.denom().is_constant() {
            l = l.lcm(c.denom());
        }
    }
    let mut index: BTreeMap<(Vec<usize>, Monomial), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
    for (k, cs) in coords.iter().enumerate() {
        for (label, c) in cs {
            let p = &l.div_exact(c.denom()).expect("lcm is a multiple") * c.numer();
            for (m, a) in p.terms() {
                let next = index.len();
                let row = *index.entry((label.clone(), m.clone())).or_insert(next);
                entries.push((row, k, a.clone()));
            }
        }
    }
    let mut rows = vec![vec![Rational::zero(); values.len()]; index.len()];
    for (r, k, a) in entries {
        rows[r][k] += a;
    }
    Ok(rows)
}

/// Basis of the ℚ-linear relations `Σ c_k v_k = 0` among `values`.
pub fn constant_relations<T: LinearCoordinates>(values: &[T]) -> Result<Vec<Vec<Rational>>> {
    let rows = coefficient_matrix(values)?;
    Ok(rational_kernel(&rows, values.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> RatFunc {
        RatFunc::var(2, 0)
    }
    fn y() -> RatFunc {
        RatFunc::var(2, 1)
    }
    fn c(v: i64) -> RatFunc {
        RatFunc::from_int(2, v)
    }
    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn residual_is_zero(m: &FieldMatrix, u: &[RatFunc], b: &[RatFunc]) -> bool {
        m.mul_vec(u).iter().zip(b).all(|(l, r)| (l - r).is_zero())
    }

    #[test]
    fn identity_system() {
        let m = FieldMatrix::new(2, vec![vec![c(1), c(0)], vec![c(0), c(1)]]).unwrap();
        let b = vec![x(), &x() * &y()];
        assert_eq!(solve_linear(&m, &b).unwrap(), LinearSolution::Unique(b.clone()));
    }

    #[test]
    fn scalar_system() {
        let m = FieldMatrix::new(2, vec![vec![x()]]).unwrap();
        let sol = solve_linear(&m, &[&x() * &x()]).unwrap();
        assert_eq!(sol, LinearSolution::Unique(vec![x()]));
    }

    #[test]
    fn triangular_system_residual() {
        let m = FieldMatrix::new(2, vec![vec![c(1), x()], vec![c(0), y()]]).unwrap();
        let b = vec![&x() + &y(), &x() * &x()];
        let LinearSolution::Unique(u) = solve_linear(&m, &b).unwrap() else {
            panic!("expected unique solution");
        };
        assert!(residual_is_zero(&m, &u, &b));
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let m = FieldMatrix::new(2, vec![vec![x(), y()], vec![&x() * &c(2), &y() * &c(2)]]).unwrap();
        assert_eq!(solve_linear(&m, &[c(1), c(3)]).unwrap(), LinearSolution::Inconsistent);
        let sol = solve_linear(&m, &[c(1), c(2)]).unwrap();
        let LinearSolution::Underdetermined { particular, kernel } = sol else {
            panic!("expected underdetermined");
        };
        assert!(residual_is_zero(&m, &particular, &[c(1), c(2)]));
        assert_eq!(kernel.len(), 1);
        assert!(residual_is_zero(&m, &kernel[0], &[c(0), c(0)]));
    }

    #[test]
    fn rank_over_function_field() {
        let m = FieldMatrix::new(2, vec![vec![x(), y()], vec![&x() * &y(), &y() * &y()]]).unwrap();
        assert_eq!(m.rank(), 1);
        let m = FieldMatrix::new(2, vec![vec![x(), y()], vec![y(), x()]]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn bareiss_with_rational_function_entries() {
        let inv = |r: RatFunc| r.inv().unwrap();
        let m = FieldMatrix::new(
            2,
            vec![
                vec![inv(x()), y(), c(1)],
                vec![c(2), inv(&x() + &y()), x()],
                vec![y(), c(0), inv(y())],
            ],
        )
        .unwrap();
        let b = vec![c(1), x(), &y() * &y()];
        let LinearSolution::Unique(u) = solve_linear(&m, &b).unwrap() else {
            panic!("expected unique solution");
        };
        assert!(residual_is_zero(&m, &u, &b));
    }

    #[test]
    fn relations_of_constant_multiples() {
        let v = vec![x(), &x() * &c(2)];
        assert_eq!(constant_relations(&v).unwrap(), vec![vec![q(2), q(-1)]]);
        let v = vec![x(), y()];
        assert!(constant_relations(&v).unwrap().is_empty());
        let v = vec![c(1), x(), &c(1) + &x()];
        assert_eq!(constant_relations(&v).unwrap(), vec![vec![q(1), q(1), q(-1)]]);
    }

    #[test]
    fn relations_across_denominators() {
        // 1/x, 1/(x+1) and 1/(x(x+1)) satisfy  1/x − 1/(x+1) − 1/(x(x+1)) = 0
        let a = x().inv().unwrap();
        let b = (&x() + &c(1)).inv().unwrap();
        let ab = (&x() * &(&x() + &c(1))).inv().unwrap();
        let rel = constant_relations(&[a, b, ab]).unwrap();
        assert_eq!(rel, vec![vec![q(1), q(-1), q(-1)]]);
    }

    #[test]
    fn mixed_charts_rejected() {
        assert!(constant_relations(&[RatFunc::one(1), RatFunc::one(2)]).is_err());
    }
}
