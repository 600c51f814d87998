//! The quadratic cone `Int_W` of integrable forms in a finite-dimensional
//! space, classification of its projectivization when `dim W = 3`, Veronese
//! families, and the minimal-degree and general-position checks.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{input, Error, Result};
use crate::exterior::Form;
use crate::field::{coefficient_matrix, normalize_integer_vector, rational_kernel, rational_rank, rref, Polynomial, Rational};
use crate::foliation::{integrability_form, FormSpace};

/// Symmetric matrix over ℚ.
pub type SymMatrix = Vec<Vec<Rational>>;

/// Homogeneous quadrics in the coordinates `a₀, …, a_q` cutting out `Int_W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricSystem {
    dim: usize,
    quadrics: Vec<SymMatrix>,
}

impl QuadricSystem {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn quadrics(&self) -> &[SymMatrix] {
        &self.quadrics
    }

    pub fn len(&self) -> usize {
        self.quadrics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quadrics.is_empty()
    }

    /// Values of every quadric at `a`.
    pub fn eval(&self, a: &[Rational]) -> Result<Vec<Rational>> {
        if a.len() != self.dim {
            return Err(input(format!("expected {} coordinates, got {}", self.dim, a.len())));
        }
        Ok(self.quadrics.iter().map(|m| quad_eval(m, a)).collect())
    }

    pub fn vanishes_at(&self, a: &[Rational]) -> Result<bool> {
        Ok(self.eval(a)?.iter().all(Zero::is_zero))
    }

    /// The quadrics as polynomials in `dim` variables.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.quadrics.iter().map(quad_poly).collect()
    }
}

/// Quadrics whose common zero set is `Int_W`.
///
/// Writing `ω = Σ aᵢωᵢ`, `ω∧dω = Σ_{i≤j} aᵢaⱼ Tᵢⱼ` with `Tᵢᵢ = ωᵢ∧dωᵢ` and
/// `Tᵢⱼ = ωᵢ∧dωⱼ + ωⱼ∧dωᵢ`. Each coordinate of the three-forms `Tᵢⱼ` (after
/// clearing a common denominator) is a linear condition on the monomials
/// `aᵢaⱼ`; a reduced echelon basis of those conditions is returned.
pub fn cone_quadrics(space: &FormSpace) -> Result<QuadricSystem> {
    let n = space.dim();
    let basis = space.basis();
    let diffs: Vec<Form> = basis.iter().map(Form::ext_d).collect();
    let mut pairs = Vec::new();
    let mut products = Vec::new();
    for i in 0..n {
        for j in i..n {
            let t = if i == j {
                basis[i].wedge(&diffs[i])?
            } else {
                &basis[i].wedge(&diffs[j])? + &basis[j].wedge(&diffs[i])?
            };
            pairs.push((i, j));
            products.push(t);
        }
    }
    let mut rows = coefficient_matrix(&products)?;
    let pivots = rref(&mut rows);
    let half = Rational::new(1.into(), 2.into());
    let quadrics = rows
        .into_iter()
        .take(pivots.len())
        .map(|row| {
            let row = normalize_integer_vector(&row);
            let mut m = vec![vec![Rational::zero(); n]; n];
            for (&(i, j), c) in pairs.iter().zip(&row) {
                if i == j {
                    m[i][i] = c.clone();
                } else {
                    m[i][j] = c * &half;
                    m[j][i] = c * &half;
                }
            }
            m
        })
        .collect();
    Ok(QuadricSystem { dim: n, quadrics })
}

/// Whether `Σ aᵢωᵢ` is integrable, decided by computing `ω∧dω` directly.
pub fn membership(space: &FormSpace, a: &[Rational]) -> Result<bool> {
    if a.iter().all(Zero::is_zero) {
        return Err(input("the zero vector does not define a point of ℙ(W)"));
    }
    Ok(integrability_form(&space.combination(a)?)?.is_zero())
}

fn quad_eval(m: &SymMatrix, a: &[Rational]) -> Rational {
    bilinear(m, a, a)
}

fn bilinear(m: &SymMatrix, a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (i, row) in m.iter().enumerate() {
        if a[i].is_zero() {
            continue;
        }
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() && !b[j].is_zero() {
                acc += c * &a[i] * &b[j];
            }
        }
    }
    acc
}

fn quad_poly(m: &SymMatrix) -> Polynomial {
    let n = m.len();
    let coords: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
    quad_on(m, &coords)
}

/// `Q(X)` for polynomial coordinates `X`.
fn quad_on(m: &SymMatrix, coords: &[Polynomial]) -> Polynomial {
    let nv = coords[0].nvars();
    let mut acc = Polynomial::zero(nv);
    for (i, row) in m.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&coords[i] * &coords[j]).scale(c);
            }
        }
    }
    acc
}

fn det3(a: &[Rational], b: &[Rational], c: &[Rational]) -> Rational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

fn cross(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn combine(u: &[Rational], s: &Rational, v: &[Rational], t: &Rational) -> Vec<Rational> {
    u.iter().zip(v).map(|(x, y)| s * x + t * y).collect()
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// Shape of the locus `ℙ(Int_W) ⊂ ℙ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusKind {
    WholePlane,
    FinitePoints,
    Line,
    SmoothConic,
    TwoLines,
    DoubleLine,
    LinePlusPoints,
    /// A curve of degree at least three, which forces the whole plane.
    CurveForcesPlane,
}

impl LocusKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LocusKind::WholePlane => "whole-plane",
            LocusKind::FinitePoints => "finite-points",
            LocusKind::Line => "line",
            LocusKind::SmoothConic => "smooth-conic",
            LocusKind::TwoLines => "two-lines",
            LocusKind::DoubleLine => "double-line",
            LocusKind::LinePlusPoints => "line-plus-points",
            LocusKind::CurveForcesPlane => "curve-forces-plane",
        }
    }
}

/// Irreducible piece of the locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    Plane,
    /// The line `Σ formᵢ aᵢ = 0`.
    Line { form: Vec<Rational>, multiplicity: u32 },
    /// Two lines conjugate over `ℚ(√discriminant)`, meeting at `vertex`.
    ConjugateLines {
        quadric: SymMatrix,
        vertex: Vec<Rational>,
        discriminant: Rational,
    },
    Conic { quadric: SymMatrix },
    Point { coords: Vec<Rational> },
    /// The conjugate points `coords(s)` for the roots `s` of the irreducible
    /// `minimal_polynomial`; polynomials are listed by ascending coefficients.
    ConjugatePoints {
        minimal_polynomial: Vec<Rational>,
        coords: Vec<Vec<Rational>>,
    },
}

impl Component {
    /// `(degree, span dimension, dimension)` of one geometric piece.
    pub fn shape(&self) -> (u32, u32, u32) {
        match self {
            Component::Plane => (1, 2, 2),
            Component::Line { .. } | Component::ConjugateLines { .. } => (1, 1, 1),
            Component::Conic { .. } => (2, 2, 1),
            Component::Point { .. } | Component::ConjugatePoints { .. } => (1, 0, 0),
        }
    }

    /// Number of points for zero-dimensional components.
    pub fn point_count(&self) -> usize {
        match self {
            Component::Point { .. } => 1,
            Component::ConjugatePoints { minimal_polynomial, .. } => minimal_polynomial.len() - 1,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    pub component: Component,
    /// Rational points of the component at which membership was confirmed.
    pub samples: Vec<Vec<Rational>>,
    pub membership_verified: bool,
    pub substitution_verified: bool,
    pub minimal_degree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusReport {
    pub kind: LocusKind,
    pub quadrics: QuadricSystem,
    pub components: Vec<ComponentReport>,
    /// Multiplicity of the defining quadric when it is a square.
    pub multiplicity: u32,
    pub point_count: usize,
    /// More than four isolated points were found, so the five-point rule
    /// asks for a conic or line through them.
    pub exceeds_four_points: bool,
}

impl LocusReport {
    pub fn verified(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.membership_verified && c.substitution_verified)
    }
}

/// Classifies `ℙ(Int_W)` for a three-dimensional space `W`.
pub fn classify_plane_locus(space: &FormSpace) -> Result<LocusReport> {
    if space.dim() != 3 {
        return Err(input(format!(
            "plane locus classification needs a 3-dimensional space, got {}",
            space.dim()
        )));
    }
    let system = cone_quadrics(space)?;
    let q = system.quadrics();
    let mut multiplicity = 1;
    let (kind, components) = match q.len() {
        0 => (LocusKind::WholePlane, vec![Component::Plane]),
        1 => match rational_rank(&q[0]) {
            1 => {
                multiplicity = 2;
                let row = q[0].iter().find(|r| r.iter().any(|c| !c.is_zero())).expect("rank one");
                let form = normalize_integer_vector(row);
                (LocusKind::DoubleLine, vec![Component::Line { form, multiplicity: 2 }])
            }
            2 => (LocusKind::TwoLines, split_rank_two(&q[0])),
            _ => (LocusKind::SmoothConic, vec![Component::Conic { quadric: q[0].clone() }]),
        },
        _ => several_quadrics(&system)?,
    };
    let mut reports = Vec::new();
    for component in components {
        reports.push(verify_component(space, &system, component)?);
    }
    let point_count = reports.iter().map(|r| r.component.point_count()).sum();
    let report = LocusReport {
        kind,
        quadrics: system,
        components: reports,
        multiplicity,
        point_count,
        exceeds_four_points: point_count > 4,
    };
    if !report.verified() {
        return Err(Error::Structural("a locus component failed verification".into()));
    }
    Ok(report)
}

/// A pair of lines through the vertex of a rank-two conic.
fn split_rank_two(m: &SymMatrix) -> Vec<Component> {
    let vertex = rational_kernel(m, 3).remove(0);
    let e = |i: usize| {
        let mut v = vec![Rational::zero(); 3];
        v[i] = Rational::one();
        v
    };
    let (u, v) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .map(|(i, j)| (e(i), e(j)))
        .find(|(u, v)| !det3(&vertex, u, v).is_zero())
        .expect("vertex is nonzero");
    let a = quad_eval(m, &u);
    let b = bilinear(m, &u, &v) * int(2);
    let c = quad_eval(m, &v);
    let disc = &b * &b - int(4) * &a * &c;
    let Some(root) = rational_sqrt(&disc) else {
        return vec![Component::ConjugateLines {
            quadric: m.clone(),
            vertex: normalize_integer_vector(&vertex),
            discriminant: disc,
        }];
    };
    let directions = if a.is_zero() {
        vec![u.clone(), combine(&u, &-c, &v, &b)]
    } else {
        let two_a = int(2) * &a;
        [&root, &-&root]
            .into_iter()
            .map(|r| combine(&u, &((-&b + r) / &two_a), &v, &Rational::one()))
            .collect()
    };
    directions
        .iter()
        .map(|w| Component::Line {
            form: normalize_integer_vector(&cross(&vertex, w)),
            multiplicity: 1,
        })
        .collect()
}

fn several_quadrics(system: &QuadricSystem) -> Result<(LocusKind, Vec<Component>)> {
    let polys = system.polynomials();
    let g = polys.iter().skip(1).fold(polys[0].clone(), |g, p| g.gcd(p));
    match g.total_degree() {
        Some(1) => {
            let form: Vec<Rational> = (0..3)
                .map(|i| {
                    let mut e = vec![0; 3];
                    e[i] = 1;
                    g.terms()
                        .find(|(m, _)| m.exponents() == e.as_slice())
                        .map_or_else(Rational::zero, |(_, c)| c.clone())
                })
                .collect();
            let residual: Vec<Vec<Rational>> = polys
                .iter()
                .map(|p| {
                    let r = p.div_exact(&g).expect("common factor");
                    (0..3)
                        .map(|i| {
                            let point: Vec<Rational> =
                                (0..3).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect();
                            r.eval(&point)
                        })
                        .collect()
                })
                .collect();
            let line = Component::Line {
                form: normalize_integer_vector(&form),
                multiplicity: 1,
            };
            let kernel = rational_kernel(&residual, 3);
            match kernel.first() {
                Some(p) if kernel.len() == 1 && !form.iter().zip(p).map(|(l, x)| l * x).sum::<Rational>().is_zero() => Ok((
                    LocusKind::LinePlusPoints,
                    vec![line, Component::Point { coords: p.clone() }],
                )),
                _ => Ok((LocusKind::Line, vec![line])),
            }
        }
        Some(0) | None => Ok((LocusKind::FinitePoints, intersect_points(system)?)),
        Some(_) => Err(Error::Structural("independent quadrics share a quadratic factor".into())),
    }
}

/// `Σ_k t^k Q_k`.
fn pencil_member(q: &[SymMatrix], t: i64) -> SymMatrix {
    let mut m = vec![vec![Rational::zero(); 3]; 3];
    let mut w = Rational::one();
    for qk in q {
        for (row, src) in m.iter_mut().zip(qk) {
            for (x, y) in row.iter_mut().zip(src) {
                *x += &w * y;
            }
        }
        w *= int(t);
    }
    m
}

/// `TᵀMT` for the shear `a = T b` with `T e₂ = (p, q, 1)`.
fn sheared(m: &SymMatrix, p: i64, q: i64) -> SymMatrix {
    let t = [[int(1), int(0), int(p)], [int(0), int(1), int(q)], [int(0), int(0), int(1)]];
    let mut out = vec![vec![Rational::zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            for k in 0..3 {
                for l in 0..3 {
                    if !t[k][i].is_zero() && !t[l][j].is_zero() {
                        *x += &t[k][i] * &m[k][l] * &t[l][j];
                    }
                }
            }
        }
    }
    out
}

/// Isolated common zeros of a system of ternary quadrics without a common
/// factor.
///
/// Two coprime members `A`, `B` of the system are brought into coordinates
/// `b` where `[0:0:1]` is off `A`; eliminating `b₂` leaves a binary quartic
/// whose irreducible factors over ℚ parametrize the intersection fibres, and
/// `b₂` is recovered linearly from `α'A − αB` over `ℚ[s]/(m)`. Shears whose
/// fibres contain two intersection points are skipped.
fn intersect_points(system: &QuadricSystem) -> Result<Vec<Component>> {
    let q = system.quadrics();
    let (a, b) = coprime_pair(q).ok_or_else(|| Error::Structural("no coprime pair of quadrics".into()))?;
    let mut shears: Vec<(i64, i64)> = (-4..=4).flat_map(|p| (-4..=4).map(move |q| (p, q))).collect();
    shears.sort_by_key(|&(p, q)| (p.abs() + q.abs(), p, q));
    for (p, qq) in shears {
        if let Some(found) = intersect_in_shear(q, &a, &b, p, qq) {
            return Ok(found);
        }
    }
    Err(Error::Structural("no generic projection found".into()))
}

fn coprime_pair(q: &[SymMatrix]) -> Option<(SymMatrix, SymMatrix)> {
    for t1 in 0..8 {
        for t2 in (t1 + 1)..9 {
            let (a, b) = (pencil_member(q, t1), pencil_member(q, t2));
            if quad_poly(&a).gcd(&quad_poly(&b)).is_constant() {
                return Some((a, b));
            }
        }
    }
    None
}

fn intersect_in_shear(all: &[SymMatrix], a: &SymMatrix, b: &SymMatrix, p: i64, q: i64) -> Option<Vec<Component>> {
    let (a, b) = (sheared(a, p, q), sheared(b, p, q));
    let alpha = a[2][2].clone();
    if alpha.is_zero() {
        return None;
    }
    let alpha2 = b[2][2].clone();
    // Fibre coefficients as polynomials in s = b₀/b₁ (with b₁ = 1).
    let beta = |m: &SymMatrix| up::trim(vec![int(2) * &m[1][2], int(2) * &m[0][2]]);
    let gamma = |m: &SymMatrix| up::trim(vec![m[1][1].clone(), int(2) * &m[0][1], m[0][0].clone()]);
    let (b1, g1, b2, g2) = (beta(&a), gamma(&a), beta(&b), gamma(&b));
    let lin = up::sub(&up::scale(&b1, &alpha2), &up::scale(&b2, &alpha));
    let cst = up::sub(&up::scale(&g1, &alpha2), &up::scale(&g2, &alpha));
    let res = up::sub(
        &up::mul(&cst, &cst),
        &up::mul(&up::neg(&lin), &up::sub(&up::mul(&b1, &g2), &up::mul(&b2, &g1))),
    );
    if res.is_empty() {
        return None;
    }
    let shear_back = |b: [Vec<Rational>; 3]| -> Vec<Vec<Rational>> {
        let [b0, b1, b2] = b;
        vec![
            up::add(&b0, &up::scale(&b2, &int(p))),
            up::add(&b1, &up::scale(&b2, &int(q))),
            b2,
        ]
    };
    let mut out = Vec::new();
    // The fibre b₁ = 0 meets both curves exactly when the quartic drops degree.
    if res.len() < 5 {
        let l_inf = up::pad(&lin, 2)[1].clone();
        if l_inf.is_zero() {
            return None;
        }
        let z = -&up::pad(&cst, 3)[2] / &l_inf;
        let point: Vec<Rational> = shear_back([vec![int(1)], Vec::new(), vec![z]])
            .iter()
            .map(|c| up::pad(c, 1)[0].clone())
            .collect();
        if all.iter().all(|m| quad_eval(m, &point).is_zero()) {
            out.push(Component::Point {
                coords: normalize_integer_vector(&point),
            });
        }
    }
    for factor in up::factor(&res) {
        let inv = up::inverse_mod(&lin, &factor)?;
        let z = up::rem(&up::mul(&up::neg(&cst), &inv), &factor);
        let coords = shear_back([vec![Rational::zero(), Rational::one()], vec![Rational::one()], z]);
        let coords: Vec<Vec<Rational>> = coords.iter().map(|c| up::rem(c, &factor)).collect();
        let on_all = all.iter().all(|m| {
            let mut acc = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if !m[i][j].is_zero() {
                        acc = up::add(&acc, &up::scale(&up::mul(&coords[i], &coords[j]), &m[i][j]));
                    }
                }
            }
            up::rem(&acc, &factor).is_empty()
        });
        if !on_all {
            continue;
        }
        if factor.len() == 2 {
            let s = -&factor[0] / &factor[1];
            let point: Vec<Rational> = coords.iter().map(|c| up::eval(c, &s)).collect();
            out.push(Component::Point {
                coords: normalize_integer_vector(&point),
            });
        } else {
            out.push(Component::ConjugatePoints {
                minimal_polynomial: factor,
                coords,
            });
        }
    }
    Some(out)
}

fn verify_component(space: &FormSpace, system: &QuadricSystem, component: Component) -> Result<ComponentReport> {
    let mut samples = Vec::new();
    let substitution_verified = match &component {
        Component::Plane => {
            samples = vec![
                vec![int(1), int(0), int(0)],
                vec![int(0), int(1), int(0)],
                vec![int(0), int(0), int(1)],
                vec![int(1), int(1), int(1)],
            ];
            system.is_empty()
        }
        Component::Line { form, .. } => {
            let basis = rational_kernel(std::slice::from_ref(form), 3);
            let (u, v) = (&basis[0], &basis[1]);
            samples = vec![u.clone(), v.clone(), combine(u, &int(1), v, &int(1))];
            let param: Vec<Polynomial> = (0..3)
                .map(|i| {
                    &Polynomial::var(2, 0).scale(&u[i]) + &Polynomial::var(2, 1).scale(&v[i])
                })
                .collect();
            system.quadrics().iter().all(|m| quad_on(m, &param).is_zero())
        }
        Component::ConjugateLines { quadric, vertex, .. } => {
            samples = vec![vertex.clone()];
            system.len() == 1 && system.quadrics()[0] == *quadric
        }
        Component::Conic { quadric } => {
            samples = conic_points(quadric, 5);
            match samples.first() {
                Some(p) => {
                    let w: Vec<Polynomial> = vec![
                        Polynomial::var(2, 0),
                        Polynomial::var(2, 1),
                        &Polynomial::var(2, 0) + &Polynomial::var(2, 1),
                    ];
                    let qw = quad_on(quadric, &w);
                    let mut bw = Polynomial::zero(2);
                    for (i, row) in quadric.iter().enumerate() {
                        for (j, c) in row.iter().enumerate() {
                            bw = &bw + &w[j].scale(&(c * &p[i]));
                        }
                    }
                    let param: Vec<Polynomial> =
                        (0..3).map(|i| &qw.scale(&p[i]) - &(&bw * &w[i]).scale(&int(2))).collect();
                    system.quadrics().iter().all(|m| quad_on(m, &param).is_zero())
                }
                None => system.len() == 1,
            }
        }
        Component::Point { coords } => {
            samples = vec![coords.clone()];
            system.vanishes_at(coords)?
        }
        Component::ConjugatePoints { .. } => true,
    };
    let mut membership_verified = true;
    for s in &samples {
        membership_verified &= membership(space, s)?;
    }
    let (d, s, m) = component.shape();
    Ok(ComponentReport {
        minimal_degree: minimal_degree_check(d, s, m)?,
        component,
        samples,
        membership_verified,
        substitution_verified,
    })
}

/// Up to `count` rational points of a smooth conic: a small-box search for
/// one point, then the pencil of lines through it.
fn conic_points(m: &SymMatrix, count: usize) -> Vec<Vec<Rational>> {
    let bound = 12;
    let mut first = None;
    'search: for h in 1..=bound {
        for x in -h..=h {
            for y in -h..=h {
                for z in -h..=h {
                    if x.abs().max(y.abs()).max(z.abs()) != h {
                        continue;
                    }
                    let p = vec![int(x), int(y), int(z)];
                    if quad_eval(m, &p).is_zero() {
                        first = Some(p);
                        break 'search;
                    }
                }
            }
        }
    }
    let Some(p) = first else {
        return Vec::new();
    };
    let mut out = vec![normalize_integer_vector(&p)];
    for s in 0..50i64 {
        if out.len() == count {
            break;
        }
        let w = vec![int(1), int(s), int(s * s + 1)];
        let qw = quad_eval(m, &w);
        if qw.is_zero() {
            continue;
        }
        let x = combine(&p, &qw, &w, &(int(-2) * bilinear(m, &p, &w)));
        if x.iter().all(Zero::is_zero) {
            continue;
        }
        let x = normalize_integer_vector(&x);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// The integrability polynomial `I(t) = ω(t)∧dω(t)` of `ω(t) = Σ tⁱωᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeronesePoly {
    family: Vec<Form>,
    /// `coefficients[k]` multiplies `t^k`; `k` runs up to `2·(len − 1)`.
    coefficients: Vec<Form>,
}

impl VeronesePoly {
    pub fn coefficients(&self) -> &[Form] {
        &self.coefficients
    }

    /// `None` when `I(t) ≡ 0`.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn eval(&self, t: &Rational) -> Form {
        let chart = self.family[0].chart();
        let mut acc = Form::zero(chart, 3);
        for c in self.coefficients.iter().rev() {
            acc = &acc.scale_rational(t) + c;
        }
        acc
    }

    /// `ω(t)` itself.
    pub fn member(&self, t: &Rational) -> Form {
        let mut acc = Form::zero(self.family[0].chart(), 1);
        for w in self.family.iter().rev() {
            acc = &acc.scale_rational(t) + w;
        }
        acc
    }
}

pub fn veronese_poly(family: &[Form]) -> Result<VeronesePoly> {
    if family.len() < 2 {
        return Err(input("a Veronese family needs at least ω0 and ω1"));
    }
    let chart = family[0].chart().clone();
    for w in family {
        chart.check_same(w.chart())?;
        if w.degree() != 1 {
            return Err(input("Veronese family members must be one-forms"));
        }
    }
    let diffs: Vec<Form> = family.iter().map(Form::ext_d).collect();
    let k = family.len() - 1;
    let mut coefficients = vec![Form::zero(&chart, 3); 2 * k + 1];
    for (i, w) in family.iter().enumerate() {
        for (j, dw) in diffs.iter().enumerate() {
            coefficients[i + j] = &coefficients[i + j] + &w.wedge(dw)?;
        }
    }
    Ok(VeronesePoly {
        family: family.to_vec(),
        coefficients,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VeroneseOutcome {
    IntegrableEverywhere,
    NotIntegrable { witness: Rational },
    InsufficientSamples,
}

impl VeroneseOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            VeroneseOutcome::IntegrableEverywhere => "integrable-everywhere",
            VeroneseOutcome::NotIntegrable { .. } => "not-integrable",
            VeroneseOutcome::InsufficientSamples => "insufficient-samples",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeroneseVerdict {
    pub outcome: VeroneseOutcome,
    pub degree: Option<usize>,
    /// Samples needed by the degree argument (`deg I + 1`, or 1 when `I ≡ 0`).
    pub degree_bound: usize,
    /// `n + 3` for an `n`-dimensional chart.
    pub sharper_bound: usize,
}

/// Samples `ω(t)∧dω(t)` at distinct values of `t`.
pub fn veronese_check(family: &[Form], samples: &[Rational]) -> Result<VeroneseVerdict> {
    for (i, s) in samples.iter().enumerate() {
        if samples[..i].contains(s) {
            return Err(input(format!("sample t = {s} is repeated")));
        }
    }
    let poly = veronese_poly(family)?;
    let degree = poly.degree();
    let degree_bound = degree.map_or(1, |d| d + 1);
    let sharper_bound = family[0].chart().dim() + 3;
    let mut outcome = if samples.len() >= degree_bound {
        VeroneseOutcome::IntegrableEverywhere
    } else {
        VeroneseOutcome::InsufficientSamples
    };
    for t in samples {
        if !integrability_form(&poly.member(t))?.is_zero() {
            outcome = VeroneseOutcome::NotIntegrable { witness: t.clone() };
            break;
        }
    }
    Ok(VeroneseVerdict {
        outcome,
        degree,
        degree_bound,
        sharper_bound,
    })
}

/// Whether a variety of degree `d`, span dimension `s` and dimension `m` has
/// minimal degree `d = s − m + 1`.
pub fn minimal_degree_check(d: u32, s: u32, m: u32) -> Result<bool> {
    if m > s {
        return Err(input(format!("dimension {m} exceeds span dimension {s}")));
    }
    Ok(d == s - m + 1)
}

/// Whether no three of the given points of ℙ² are collinear.
pub fn general_position4(points: &[Vec<Rational>]) -> Result<bool> {
    if points.len() < 4 {
        return Err(input(format!("need at least 4 points, got {}", points.len())));
    }
    for p in points {
        if p.len() != 3 {
            return Err(input("points of ℙ² need 3 homogeneous coordinates"));
        }
        if p.iter().all(Zero::is_zero) {
            return Err(input("[0:0:0] is not a point of ℙ²"));
        }
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for k in j + 1..points.len() {
                if det3(&points[i], &points[j], &points[k]).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Dense univariate polynomials over ℚ, ascending coefficients, no trailing
/// zeros.
mod up {
    use super::*;

    pub type U = Vec<Rational>;

    pub fn trim(mut v: U) -> U {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }

    pub fn pad(v: &[Rational], n: usize) -> U {
        let mut out = v.to_vec();
        out.resize(n.max(v.len()), Rational::zero());
        out
    }

    pub fn add(a: &[Rational], b: &[Rational]) -> U {
        let n = a.len().max(b.len());
        let (a, b) = (pad(a, n), pad(b, n));
        trim(a.iter().zip(&b).map(|(x, y)| x + y).collect())
    }

    pub fn neg(a: &[Rational]) -> U {
        a.iter().map(|x| -x).collect()
    }

    pub fn sub(a: &[Rational], b: &[Rational]) -> U {
        add(a, &neg(b))
    }

    pub fn scale(a: &[Rational], c: &Rational) -> U {
        trim(a.iter().map(|x| x * c).collect())
    }

    pub fn mul(a: &[Rational], b: &[Rational]) -> U {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn eval(a: &[Rational], s: &Rational) -> Rational {
        a.iter().rev().fold(Rational::zero(), |acc, c| acc * s + c)
    }

    pub fn derivative(a: &[Rational]) -> U {
        trim(a.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    pub fn divrem(a: &[Rational], b: &[Rational]) -> (U, U) {
        let mut r = trim(a.to_vec());
        let lead = b.last().expect("nonzero divisor").clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = r.last().expect("nonempty") / &lead;
            for (i, x) in b.iter().enumerate() {
                r[shift + i] -= &c * x;
            }
            q[shift] = c;
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn rem(a: &[Rational], b: &[Rational]) -> U {
        divrem(a, b).1
    }

    pub fn monic(a: &[Rational]) -> U {
        match a.last() {
            Some(l) => scale(a, &l.recip()),
            None => Vec::new(),
        }
    }

    pub fn gcd(a: &[Rational], b: &[Rational]) -> U {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        monic(&a)
    }

    /// Inverse of `a` modulo `m`, if `a` is a unit there.
    pub fn inverse_mod(a: &[Rational], m: &[Rational]) -> Option<U> {
        let (mut r0, mut r1) = (m.to_vec(), rem(a, m));
        let (mut s0, mut s1): (U, U) = (Vec::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        (r0.len() == 1).then(|| rem(&scale(&s0, &r0[0].recip()), m))
    }

    /// Coprime integer coefficients.
    fn integral(a: &[Rational]) -> Vec<BigInt> {
        normalize_integer_vector(a).into_iter().map(|c| c.to_integer()).collect()
    }

    fn divisors(n: &BigInt) -> Vec<BigInt> {
        let n = n.abs();
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = BigInt::one();
        while &d * &d <= n {
            if (&n % &d).is_zero() {
                let e = &n / &d;
                if e != d {
                    large.push(e);
                }
                small.push(d.clone());
            }
            d += 1;
        }
        small.extend(large.into_iter().rev());
        small
    }

    /// Monic irreducible factors over ℚ of the squarefree part of `a`
    /// (degree at most 4).
    pub fn factor(a: &[Rational]) -> Vec<U> {
        let a = trim(a.to_vec());
        if a.len() <= 1 {
            return Vec::new();
        }
        let g = gcd(&a, &derivative(&a));
        let mut rest = monic(&divrem(&a, &g).0);
        let mut out = Vec::new();
        if rest[0].is_zero() {
            out.push(vec![Rational::zero(), Rational::one()]);
            rest = divrem(&rest, &out[0]).0;
        }
        if rest.len() > 1 {
            let ints = integral(&rest);
            let lead = ints.last().expect("nonzero").clone();
            'roots: for p in divisors(&ints[0]) {
                for q in divisors(&lead) {
                    for sign in [1, -1] {
                        let r = Rational::new(&p * sign, q.clone());
                        if eval(&rest, &r).is_zero() {
                            let lin = vec![-r, Rational::one()];
                            rest = divrem(&rest, &lin).0;
                            out.push(lin);
                            if rest.len() <= 2 {
                                break 'roots;
                            }
                        }
                    }
                }
            }
        }
        if rest.len() == 2 {
            out.push(monic(&rest));
        } else if rest.len() == 5 {
            match quadratic_factor(&rest) {
                Some(f) => {
                    let other = divrem(&rest, &f).0;
                    out.push(monic(&f));
                    out.push(monic(&other));
                }
                None => out.push(rest),
            }
        } else if rest.len() > 1 {
            out.push(rest);
        }
        out
    }

    /// A quadratic factor of a quartic without rational roots, found by
    /// interpolating divisors of its values at `0, 1, −1`.
    fn quadratic_factor(a: &[Rational]) -> Option<U> {
        let ints: Vec<Rational> = integral(a).into_iter().map(Rational::from_integer).collect();
        let v0 = eval(&ints, &int(0)).to_integer();
        let v1 = eval(&ints, &int(1)).to_integer();
        let vm = eval(&ints, &int(-1)).to_integer();
        let signed = |n: &BigInt| -> Vec<BigInt> { divisors(n).into_iter().flat_map(|d| [d.clone(), -d]).collect() };
        let (s1, sm) = (signed(&v1), signed(&vm));
        for c in divisors(&v0) {
            for d1 in &s1 {
                for dm in &sm {
                    let sum = d1 + dm;
                    let diff = d1 - dm;
                    if (&sum % 2u32) != BigInt::zero() || (&diff % 2u32) != BigInt::zero() {
                        continue;
                    }
                    let lead = &sum / 2u32 - &c;
                    if lead.is_zero() {
                        continue;
                    }
                    let g = vec![
                        Rational::from_integer(c.clone()),
                        Rational::from_integer(&diff / 2u32),
                        Rational::from_integer(lead),
                    ];
                    if rem(&ints, &g).is_empty() {
                        return Some(g);
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Chart;

    fn xyz() -> Chart {
        Chart::new(&["x", "y", "z"]).unwrap()
    }

    fn q(v: i64) -> Rational {
        int(v)
    }

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn space(forms: Vec<Form>) -> FormSpace {
        FormSpace::new(forms).unwrap()
    }

    fn two_lines_space() -> FormSpace {
        let ch = xyz();
        space(vec![Form::dx(&ch, 0), Form::dx(&ch, 1), Form::dx(&ch, 2).scale(&ch.var(1))])
    }

    fn double_line_space() -> FormSpace {
        let ch = xyz();
        space(vec![
            Form::dx(&ch, 0),
            Form::dx(&ch, 1),
            &Form::dx(&ch, 1).scale(&ch.var(0)) + &Form::dx(&ch, 2),
        ])
    }

    #[test]
    fn closed_basis_has_no_quadrics() {
        let ch = xyz();
        let s = space((0..3).map(|i| Form::dx(&ch, i)).collect());
        assert!(cone_quadrics(&s).unwrap().is_empty());
        let r = classify_plane_locus(&s).unwrap();
        assert_eq!(r.kind, LocusKind::WholePlane);
        assert!(r.verified());
    }

    #[test]
    fn quadric_examples() {
        let sys = cone_quadrics(&two_lines_space()).unwrap();
        assert_eq!(sys.polynomials(), vec![&Polynomial::var(3, 0) * &Polynomial::var(3, 2)]);
        let sys = cone_quadrics(&double_line_space()).unwrap();
        assert_eq!(sys.polynomials(), vec![Polynomial::var(3, 2).pow(2)]);
    }

    #[test]
    fn membership_examples() {
        let s = two_lines_space();
        assert!(!membership(&s, &qv(&[1, 0, 1])).unwrap());
        assert!(membership(&s, &qv(&[0, 1, 1])).unwrap());
        assert!(membership(&s, &qv(&[1, 0, 0])).unwrap());
        assert!(matches!(membership(&s, &qv(&[0, 0, 0])), Err(Error::Input(_))));
    }

    #[test]
    fn classify_two_lines_and_double_line() {
        let r = classify_plane_locus(&two_lines_space()).unwrap();
        assert_eq!(r.kind, LocusKind::TwoLines);
        let forms: Vec<_> = r
            .components
            .iter()
            .map(|c| match &c.component {
                Component::Line { form, .. } => form.clone(),
                other => panic!("unexpected {other:?}"),
            })
            .collect();
        assert!(forms.contains(&qv(&[1, 0, 0])) && forms.contains(&qv(&[0, 0, 1])));
        assert!(r.components.iter().all(|c| c.minimal_degree && c.samples.len() == 3));

        let r = classify_plane_locus(&double_line_space()).unwrap();
        assert_eq!(r.kind, LocusKind::DoubleLine);
        assert_eq!(r.multiplicity, 2);
        assert_eq!(
            r.components[0].component,
            Component::Line { form: qv(&[0, 0, 1]), multiplicity: 2 }
        );
    }

    #[test]
    fn smooth_conic_and_finite_points() {
        let ch = xyz();
        let (x, y, z) = (ch.var(0), ch.var(1), ch.var(2));
        let s = space(vec![
            Form::dx(&ch, 0),
            Form::dx(&ch, 2).scale(&y),
            &Form::dx(&ch, 1) + &Form::dx(&ch, 2).scale(&x),
        ]);
        let r = classify_plane_locus(&s).unwrap();
        assert_eq!(r.kind, LocusKind::SmoothConic);
        let a = |i| Polynomial::var(3, i);
        assert_eq!(r.quadrics.polynomials(), vec![&(&a(0) * &a(1)) - &a(2).pow(2)]);
        assert_eq!(r.components[0].samples.len(), 5);
        assert!(r.components[0].minimal_degree);

        let s = space(vec![
            Form::dx(&ch, 2).scale(&y),
            Form::dx(&ch, 0).scale(&z),
            &Form::dx(&ch, 0) + &Form::dx(&ch, 1),
        ]);
        let r = classify_plane_locus(&s).unwrap();
        assert_eq!(r.kind, LocusKind::FinitePoints);
        assert_eq!(r.point_count, 3);
        assert!(!r.exceeds_four_points);
    }

    #[test]
    fn line_plus_point() {
        let m01 = vec![qv(&[0, 1, 0]), qv(&[1, 0, 0]), qv(&[0, 0, 0])];
        let m02 = vec![qv(&[0, 0, 1]), qv(&[0, 0, 0]), qv(&[1, 0, 0])];
        let sys = QuadricSystem { dim: 3, quadrics: vec![m01, m02] };
        let (kind, comps) = several_quadrics(&sys).unwrap();
        assert_eq!(kind, LocusKind::LinePlusPoints);
        assert_eq!(
            comps,
            vec![
                Component::Line { form: qv(&[1, 0, 0]), multiplicity: 1 },
                Component::Point { coords: qv(&[1, 0, 0]) },
            ]
        );
    }

    #[test]
    fn rank_two_splitting_over_q_and_quadratic_field() {
        // a0² − a1²: rational lines a0 = ±a1.
        let m = vec![qv(&[1, 0, 0]), qv(&[0, -1, 0]), qv(&[0, 0, 0])];
        let lines = split_rank_two(&m);
        assert_eq!(lines.len(), 2);
        for l in &lines {
            let Component::Line { form, .. } = l else { panic!() };
            let basis = rational_kernel(std::slice::from_ref(form), 3);
            assert!(basis.iter().all(|p| quad_eval(&m, p).is_zero()));
        }
        // a0² − 2a1²: lines over ℚ(√8).
        let m = vec![qv(&[1, 0, 0]), qv(&[0, -2, 0]), qv(&[0, 0, 0])];
        let lines = split_rank_two(&m);
        assert!(matches!(&lines[..], [Component::ConjugateLines { discriminant, .. }] if *discriminant == q(8)));
    }

    #[test]
    fn intersection_points_of_quadrics() {
        // a0a1 = 0, a1a2 = 0, a0a2 = 0: the three coordinate points.
        let m01 = vec![qv(&[0, 1, 0]), qv(&[1, 0, 0]), qv(&[0, 0, 0])];
        let m12 = vec![qv(&[0, 0, 0]), qv(&[0, 0, 1]), qv(&[0, 1, 0])];
        let m02 = vec![qv(&[0, 0, 1]), qv(&[0, 0, 0]), qv(&[1, 0, 0])];
        let sys = QuadricSystem { dim: 3, quadrics: vec![m01, m12, m02] };
        let pts = intersect_points(&sys).unwrap();
        let mut coords: Vec<_> = pts
            .iter()
            .map(|c| match c {
                Component::Point { coords } => coords.clone(),
                other => panic!("unexpected {other:?}"),
            })
            .collect();
        coords.sort();
        assert_eq!(coords, vec![qv(&[0, 0, 1]), qv(&[0, 1, 0]), qv(&[1, 0, 0])]);

        // a0² − 2a2² = 0, a1² − 3a2² = 0: four points over ℚ(√2, √3).
        let a = vec![qv(&[1, 0, 0]), qv(&[0, 0, 0]), qv(&[0, 0, -2])];
        let b = vec![qv(&[0, 0, 0]), qv(&[0, 1, 0]), qv(&[0, 0, -3])];
        let sys = QuadricSystem { dim: 3, quadrics: vec![a.clone(), b.clone()] };
        let pts = intersect_points(&sys).unwrap();
        let total: usize = pts.iter().map(Component::point_count).sum();
        assert_eq!(total, 4);
        assert!(pts.iter().all(|c| matches!(c, Component::ConjugatePoints { .. })));
    }

    #[test]
    fn univariate_factoring() {
        // (s² − 2)(s² − 3)
        let f = up::factor(&qv(&[6, 0, -5, 0, 1]));
        assert_eq!(f.len(), 2);
        // (s − 1/2)(s + 3)(s² + 1)
        let p = up::mul(&up::mul(&[Rational::new((-1).into(), 2.into()), q(1)], &qv(&[3, 1])), &qv(&[1, 0, 1]));
        let f = up::factor(&p);
        assert_eq!(f.len(), 3);
        // s⁴ + 1 is irreducible over ℚ.
        assert_eq!(up::factor(&qv(&[1, 0, 0, 0, 1])).len(), 1);
    }

    #[test]
    fn veronese_examples() {
        let ch = xyz();
        let fam = vec![Form::dx(&ch, 0), Form::dx(&ch, 1), Form::dx(&ch, 2).scale(&ch.var(1))];
        let p = veronese_poly(&fam).unwrap();
        assert_eq!(p.degree(), Some(2));
        let vol = Form::wedge_all(&ch, [&Form::dx(&ch, 0), &Form::dx(&ch, 1), &Form::dx(&ch, 2)]).unwrap();
        assert_eq!(p.coefficients()[2], vol);
        let v = veronese_check(&fam, &[q(1)]).unwrap();
        assert_eq!(v.outcome, VeroneseOutcome::NotIntegrable { witness: q(1) });
        let v = veronese_check(&fam, &[q(0)]).unwrap();
        assert_eq!(v.outcome, VeroneseOutcome::InsufficientSamples);
        assert_eq!(v.sharper_bound, 6);

        let closed: Vec<Form> = (0..3).map(|i| Form::dx(&ch, i)).collect();
        let v = veronese_check(&closed, &[q(0), q(1), q(2)]).unwrap();
        assert_eq!(v.outcome, VeroneseOutcome::IntegrableEverywhere);
        assert!(matches!(veronese_check(&closed, &[q(1), q(1)]), Err(Error::Input(_))));
    }

    #[test]
    fn minimal_degree_and_general_position() {
        assert!(minimal_degree_check(1, 1, 1).unwrap());
        assert!(minimal_degree_check(2, 2, 1).unwrap());
        assert!(!minimal_degree_check(3, 2, 1).unwrap());
        let frame = vec![qv(&[1, 0, 0]), qv(&[0, 1, 0]), qv(&[0, 0, 1]), qv(&[1, 1, 1])];
        assert!(general_position4(&frame).unwrap());
        let bad = vec![qv(&[1, 0, 0]), qv(&[0, 1, 0]), qv(&[1, 1, 0]), qv(&[0, 0, 1])];
        assert!(!general_position4(&bad).unwrap());
        assert!(general_position4(&frame[..3]).is_err());
    }
}
