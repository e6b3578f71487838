//! The coordinate ring of `y^2 + q(x) = 0` and the normalized curve family.
//!
//! Every element of the ring has a unique reduced form `p(x) + r(x)*y`. The
//! degree filtration used throughout is `delta(p + r*y) = max(deg p, 2 + deg r)`,
//! the pole order at the two complex conjugate points at infinity.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::poly::{is_separable, real_roots, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("(a, b) = ({a}, {b}) is not in the parameter set P")]
    NotInP { a: f64, b: f64 },
    #[error("quartic has no real root, so the real locus is empty")]
    NotIndefinite,
    #[error("quartic has a multiple root")]
    NotSeparable,
    #[error("expected a monic quartic")]
    NotQuarticMonic,
    #[error("delta-degree of the zero element is undefined")]
    ZeroElement,
    #[error("not divisible: remainder norm {remainder:e}")]
    NotDivisible { remainder: f64 },
    #[error("curve has no real points")]
    EmptyRealLocus,
    #[error("point ({x}, {y}) is not on the curve (residual {residual:e})")]
    PointNotOnCurve { x: f64, y: f64, residual: f64 },
    #[error("cannot parse monomial {0:?}")]
    BadMonomial(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Exact evaluation of the membership predicate for the parameter set P.
///
/// `h = x^2 + a*x + b` must be separable and positive for `|x| >= 1`: either
/// it has no real root, or both of its roots lie strictly inside `(-1, 1)`.
pub fn in_parameter_set(a: f64, b: f64) -> bool {
    let disc = a * a - 4.0 * b;
    disc < 0.0 || (disc > 0.0 && a.abs() < 2.0_f64.min(b + 1.0))
}

/// The normalized curve `y^2 + (x^2 - 1)(x^2 + a*x + b) = 0` with `(a, b)` in P.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveParams {
    a: f64,
    b: f64,
}

impl CurveParams {
    pub fn new(a: f64, b: f64) -> Result<Self, CurveError> {
        if in_parameter_set(a, b) {
            Ok(CurveParams { a, b })
        } else {
            Err(CurveError::NotInP { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Smallest real root of q.
    pub fn alpha(&self) -> f64 {
        -1.0
    }

    /// Largest real root of q.
    pub fn beta(&self) -> f64 {
        1.0
    }

    /// `h = x^2 + a*x + b`
    pub fn h(&self) -> Poly {
        Poly::new(vec![self.b, self.a, 1.0])
    }

    /// `x^2 - 1`
    pub fn f(&self) -> Poly {
        Poly::new(vec![-1.0, 0.0, 1.0])
    }

    /// `q = (x^2 - 1) h`
    pub fn q(&self) -> Poly {
        &self.f() * &self.h()
    }

    /// `y^2 + q(x)`, zero exactly on the curve.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        y * y + self.q().eval(x)
    }

    /// Real roots of q in increasing order, computed in closed form.
    pub fn real_roots(&self) -> Vec<f64> {
        let mut roots = vec![-1.0, 1.0];
        let disc = self.a * self.a - 4.0 * self.b;
        if disc > 0.0 {
            // stable quadratic formula
            let s = -0.5 * (self.a + self.a.signum() * disc.sqrt());
            let (r1, r2) = if s == 0.0 {
                (-disc.sqrt() * 0.5, disc.sqrt() * 0.5)
            } else {
                (s, self.b / s)
            };
            roots.push(r1);
            roots.push(r2);
        }
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        roots
    }

    /// Maximal x-intervals on which `q <= 0`, i.e. the projections of the
    /// real ovals.
    pub fn real_intervals(&self) -> Vec<(f64, f64)> {
        let roots = self.real_roots();
        let q = self.q();
        roots
            .windows(2)
            .filter(|w| q.eval(0.5 * (w[0] + w[1])) < 0.0)
            .map(|w| (w[0], w[1]))
            .collect()
    }

    pub fn point(&self, x: f64, y: f64, tol: f64) -> Result<RealPoint, CurveError> {
        let residual = self.residual(x, y);
        if residual.abs() <= tol * (1.0 + self.q().norm_inf()) {
            Ok(RealPoint { x, y })
        } else {
            Err(CurveError::PointNotOnCurve { x, y, residual })
        }
    }

    /// Product in the coordinate ring.
    pub fn mul(&self, e1: &CurveElem, e2: &CurveElem) -> CurveElem {
        elem_mul(e1, e2, &self.q())
    }
}

impl fmt::Display for CurveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 + (x^2 - 1)(x^2 + {}*x + {}) = 0", self.a, self.b)
    }
}

/// Affine change of coordinates produced by [`normalize_quartic`]:
/// `x = sigma * X + tau`, `y = y_scale * Y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalization {
    pub params: CurveParams,
    pub sigma: f64,
    pub tau: f64,
    pub y_scale: f64,
}

impl Normalization {
    /// Maps a point of the original curve to the normalized one.
    pub fn forward(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.tau) / self.sigma, y / self.y_scale)
    }

    pub fn backward(&self, x: f64, y: f64) -> (f64, f64) {
        (self.sigma * x + self.tau, self.y_scale * y)
    }
}

/// Brings `y^2 + q(x) = 0` into the normal form `y^2 + (x^2-1)(x^2+ax+b) = 0`
/// by sending the extreme real roots of `q` to -1 and +1.
pub fn normalize_quartic(q: &Poly, tol: f64) -> Result<Normalization, CurveError> {
    if q.degree() != Some(4) || (q.leading() - 1.0).abs() > tol {
        return Err(CurveError::NotQuarticMonic);
    }
    if !is_separable(q, tol) {
        return Err(CurveError::NotSeparable);
    }
    let bound = 1.0 + q.coeffs()[..4].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let roots = real_roots(q, -bound, bound, 1e-14)?;
    if roots.len() < 2 {
        return Err(CurveError::NotIndefinite);
    }
    let (alpha, beta) = (roots[0], roots[roots.len() - 1]);
    let sigma = 0.5 * (beta - alpha);
    let tau = 0.5 * (alpha + beta);
    let qn = q.compose_affine(sigma, tau).scale(sigma.powi(-4));
    let (h, _) = qn.div_rem(&Poly::new(vec![-1.0, 0.0, 1.0]));
    let params = CurveParams::new(h.coeff(1), h.coeff(0))?;
    Ok(Normalization {
        params,
        sigma,
        tau,
        y_scale: sigma * sigma,
    })
}

/// `p(x) + r(x) * y` in reduced form.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurveElem {
    pub p: Poly,
    pub r: Poly,
}

impl CurveElem {
    pub fn new(p: Poly, r: Poly) -> Self {
        CurveElem { p, r }
    }

    pub fn zero() -> Self {
        CurveElem::default()
    }

    pub fn constant(c: f64) -> Self {
        CurveElem::new(Poly::constant(c), Poly::zero())
    }

    pub fn from_x(p: Poly) -> Self {
        CurveElem::new(p, Poly::zero())
    }

    /// The coordinate function `y`.
    pub fn y() -> Self {
        CurveElem::new(Poly::zero(), Poly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.r.is_zero()
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.p.eval(x) + self.r.eval(x) * y
    }

    pub fn scale(&self, c: f64) -> CurveElem {
        CurveElem::new(self.p.scale(c), self.r.scale(c))
    }

    pub fn add(&self, o: &CurveElem) -> CurveElem {
        CurveElem::new(&self.p + &o.p, &self.r + &o.r)
    }

    pub fn sub(&self, o: &CurveElem) -> CurveElem {
        CurveElem::new(&self.p - &o.p, &self.r - &o.r)
    }

    /// `delta(p + r*y) = max(deg p, 2 + deg r)`
    pub fn delta(&self) -> Result<usize, CurveError> {
        delta(self)
    }

    /// Largest absolute coefficient of either component.
    pub fn norm_inf(&self) -> f64 {
        self.p.norm_inf().max(self.r.norm_inf())
    }

    /// `p^2 + q r^2`, the product with the conjugate `p - r*y`.
    pub fn norm_poly(&self, q: &Poly) -> Poly {
        &(&self.p * &self.p) + &(&(&self.r * &self.r) * q)
    }
}

impl fmt::Display for CurveElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p.is_zero(), self.r.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.p),
            (true, false) => write!(f, "({})*y", self.r),
            (false, false) => write!(f, "{} + ({})*y", self.p, self.r),
        }
    }
}

/// `(p1 + r1 y)(p2 + r2 y) = (p1 p2 - q r1 r2) + (p1 r2 + p2 r1) y`
pub fn elem_mul(e1: &CurveElem, e2: &CurveElem, q: &Poly) -> CurveElem {
    let p = &(&e1.p * &e2.p) - &(&(&e1.r * &e2.r) * q);
    let r = &(&e1.p * &e2.r) + &(&e2.p * &e1.r);
    CurveElem::new(p, r)
}

pub fn delta(e: &CurveElem) -> Result<usize, CurveError> {
    match (e.p.degree(), e.r.degree()) {
        (None, None) => Err(CurveError::ZeroElement),
        (dp, dr) => Ok(dp.unwrap_or(0).max(dr.map_or(0, |d| d + 2))),
    }
}

/// Divides both components by `d`, failing when either remainder exceeds
/// `tol * ||e||`.
pub fn curve_divide(e: &CurveElem, d: &Poly, tol: f64) -> Result<CurveElem, CurveError> {
    let scale = e.norm_inf().max(f64::MIN_POSITIVE);
    let (qp, rp) = e.p.div_rem(d);
    let (qr, rr) = e.r.div_rem(d);
    let remainder = rp.norm_inf().max(rr.norm_inf());
    if remainder > tol * scale {
        return Err(CurveError::NotDivisible { remainder });
    }
    Ok(CurveElem::new(qp, qr))
}

/// `x^i` or `x^i * y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x_pow: usize,
    pub has_y: bool,
}

impl Monomial {
    pub fn x(i: usize) -> Self {
        Monomial { x_pow: i, has_y: false }
    }

    pub fn xy(j: usize) -> Self {
        Monomial { x_pow: j, has_y: true }
    }

    pub fn delta(&self) -> usize {
        self.x_pow + if self.has_y { 2 } else { 0 }
    }

    pub fn to_elem(&self) -> CurveElem {
        let m = Poly::monomial(1.0, self.x_pow);
        if self.has_y {
            CurveElem::new(Poly::zero(), m)
        } else {
            CurveElem::new(m, Poly::zero())
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let v = x.powi(self.x_pow as i32);
        if self.has_y {
            v * y
        } else {
            v
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs = match self.x_pow {
            0 => String::new(),
            1 => "x".to_string(),
            i => format!("x^{i}"),
        };
        match (self.has_y, xs.is_empty()) {
            (false, true) => write!(f, "1"),
            (false, false) => write!(f, "{xs}"),
            (true, true) => write!(f, "y"),
            (true, false) => write!(f, "{xs}*y"),
        }
    }
}

impl FromStr for Monomial {
    type Err = CurveError;

    /// Accepts `1`, `x`, `x^3`, `y`, `x*y`, `x^2*y`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CurveError::BadMonomial(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "1" {
            return Ok(Monomial::x(0));
        }
        let mut x_pow = 0;
        let mut has_y = false;
        for factor in t.split('*') {
            match factor {
                "y" if !has_y => has_y = true,
                "x" if x_pow == 0 => x_pow = 1,
                f if f.starts_with("x^") && x_pow == 0 => {
                    x_pow = f[2..].parse::<usize>().map_err(|_| bad())?;
                    if x_pow == 0 {
                        return Err(bad());
                    }
                }
                _ => return Err(bad()),
            }
        }
        Ok(Monomial { x_pow, has_y })
    }
}

/// Monomial basis `1, x, ..., x^n, y, x*y, ..., x^(n-2)*y` of the elements
/// with `delta <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaBasis {
    n: usize,
}

impl DeltaBasis {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "delta bound must be at least 1");
        DeltaBasis { n }
    }

    pub fn bound(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        2 * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        let mut v: Vec<Monomial> = (0..=self.n).map(Monomial::x).collect();
        v.extend((0..self.n - 1).map(Monomial::xy));
        v
    }

    pub fn elements(&self) -> Vec<CurveElem> {
        self.monomials().iter().map(Monomial::to_elem).collect()
    }

    /// Position of a monomial in the basis, if it belongs to it.
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        if m.delta() > self.n {
            return None;
        }
        Some(if m.has_y { self.n + 1 + m.x_pow } else { m.x_pow })
    }

    pub fn eval(&self, x: f64, y: f64) -> Vec<f64> {
        self.monomials().iter().map(|m| m.eval(x, y)).collect()
    }

    /// Coordinates of `e` in this basis, or `None` if `delta(e) > n`.
    pub fn coords(&self, e: &CurveElem) -> Option<Vec<f64>> {
        let n = self.n;
        if e.p.degree().is_some_and(|d| d > n) || e.r.degree().is_some_and(|d| d + 2 > n) {
            return None;
        }
        let mut v = vec![0.0; self.len()];
        for i in 0..=n {
            v[i] = e.p.coeff(i);
        }
        for j in 0..n - 1 {
            v[n + 1 + j] = e.r.coeff(j);
        }
        Some(v)
    }

    /// The element with the given coordinates.
    pub fn combine(&self, c: &[f64]) -> CurveElem {
        let n = self.n;
        CurveElem::new(
            Poly::new(c[..=n].to_vec()),
            Poly::new(c[n + 1..].to_vec()),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealPoint {
    pub x: f64,
    pub y: f64,
}

/// At least `m` points of the real locus: a uniform x-grid on every oval,
/// both branches, with the branch points `y = 0` included exactly once.
pub fn sample_real_points(c: &CurveParams, m: usize) -> Result<Vec<RealPoint>, CurveError> {
    let m = m.max(2);
    let intervals = c.real_intervals();
    if intervals.is_empty() {
        return Err(CurveError::EmptyRealLocus);
    }
    let q = c.q();
    // per interval: k grid abscissae give k upper points and k-2 lower ones
    let mut k = (m / intervals.len() + 2).div_ceil(2) + 1;
    if k.is_multiple_of(2) {
        // odd grids hit the midpoint of symmetric ovals
        k += 1;
    }
    let mut pts = Vec::with_capacity(intervals.len() * 2 * k);
    for &(lo, hi) in &intervals {
        for i in 0..k {
            let x = if i + 1 == k {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (k - 1) as f64
            };
            if i == 0 || i + 1 == k {
                pts.push(RealPoint { x, y: 0.0 });
                continue;
            }
            let y = (-q.eval(x)).max(0.0).sqrt();
            pts.push(RealPoint { x, y });
            pts.push(RealPoint { x, y: -y });
        }
    }
    Ok(pts)
}
