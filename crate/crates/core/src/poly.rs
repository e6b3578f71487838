//! Dense univariate real polynomials and real-root isolation.
//!
//! Coefficients are stored constant term first. Trailing coefficients that
//! are tiny relative to the largest one are dropped on construction, so the
//! leading coefficient of a nonzero [`Poly`] is always significant.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Relative threshold below which trailing coefficients are dropped.
pub const PRUNE_REL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("degenerate interval [{lo}, {hi}]")]
    DegenerateInterval { lo: f64, hi: f64 },
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Builds a polynomial from coefficients, constant term first.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        let max = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let cut = PRUNE_REL * max;
        while let Some(&last) = coeffs.last() {
            if last.abs() <= cut {
                coeffs.pop();
            } else {
                break;
            }
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(1.0, 1)
    }

    /// `c * x^k`
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut v = vec![0.0; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Poly::one(), |acc, &r| &acc * &Poly::new(vec![-r, 1.0]))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(1.0 / self.leading())
    }

    /// Euclidean division; `d` must be nonzero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let n = match self.degree() {
            Some(n) if n >= dd => n,
            _ => return (Poly::zero(), self.clone()),
        };
        let mut quot = vec![0.0; n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= c * dc;
            }
            rem[k + dd] = 0.0;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// `p(sigma * x + tau)`
    pub fn compose_affine(&self, sigma: f64, tau: f64) -> Poly {
        let lin = Poly::new(vec![tau, sigma]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, &c| &(&acc * &lin) + &Poly::constant(c))
    }

    /// Zeroes every coefficient with `|c| <= rel * max|c|`.
    fn pruned(&self, rel: f64) -> Poly {
        let cut = rel * self.norm_inf();
        Poly::new(
            self.coeffs
                .iter()
                .map(|&c| if c.abs() <= cut { 0.0 } else { c })
                .collect(),
        )
    }

    fn unit(&self) -> Poly {
        let n = self.norm_inf();
        if n == 0.0 {
            Poly::zero()
        } else {
            self.scale(1.0 / n)
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a == 1.0 => write!(f, "x")?,
                1 => write!(f, "{a}*x")?,
                _ if a == 1.0 => write!(f, "x^{i}")?,
                _ => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        poly_mul(self, rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// Coefficient convolution.
pub fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() || q.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![0.0; p.coeffs.len() + q.coeffs.len() - 1];
    for (i, &a) in p.coeffs.iter().enumerate() {
        for (j, &b) in q.coeffs.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    Poly::new(out)
}

/// Sturm chain `p, p', -rem(p, p'), ...`, each member scaled to unit max-norm.
///
/// Remainders are pruned relative to their dividend so that rounding residue
/// does not extend the chain. For non-squarefree `p` the chain ends at a
/// scalar multiple of `gcd(p, p')`.
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.unit()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d.unit());
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        let r = r.pruned(1e-10);
        if r.is_zero() || r.norm_inf() <= 1e-10 * seq[n - 2].norm_inf() {
            break;
        }
        seq.push((-&r).unit());
    }
    seq
}

/// Number of sign changes of the chain evaluated at `x`, zeros skipped.
pub fn sign_variations(seq: &[Poly], x: f64) -> usize {
    let mut count = 0;
    let mut prev = 0.0_f64;
    for p in seq {
        let v = p.eval(x);
        if v == 0.0 {
            continue;
        }
        if prev != 0.0 && (v < 0.0) != (prev < 0.0) {
            count += 1;
        }
        prev = v;
    }
    count
}

/// Number of distinct real roots in `(lo, hi]`.
pub fn count_roots(seq: &[Poly], lo: f64, hi: f64) -> usize {
    sign_variations(seq, lo).saturating_sub(sign_variations(seq, hi))
}

/// All real roots of `p` in `[lo, hi]`, sorted, each within `tol` of a true
/// root. Repeated roots are reported once.
pub fn real_roots(p: &Poly, lo: f64, hi: f64, tol: f64) -> Result<Vec<f64>, PolyError> {
    if lo >= hi || lo.is_nan() || hi.is_nan() {
        return Err(PolyError::DegenerateInterval { lo, hi });
    }
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let tol = tol.max(f64::EPSILON * (1.0 + lo.abs().max(hi.abs())));
    let seq = sturm_sequence(p);
    let pad = tol;
    let (a0, b0) = (lo - pad, hi + pad);

    let mut roots = Vec::new();
    let mut stack = vec![(a0, b0, count_roots(&seq, a0, b0))];
    while let Some((a, b, c)) = stack.pop() {
        if c == 0 {
            continue;
        }
        if c == 1 {
            roots.push(refine_single(p, &seq, a, b, tol));
            continue;
        }
        if b - a <= tol {
            // cluster of roots closer than the tolerance
            roots.push(0.5 * (a + b));
            continue;
        }
        let mut mid = 0.5 * (a + b);
        if p.eval(mid) == 0.0 {
            mid += 0.25 * (b - a) * 1e-3;
        }
        let left = count_roots(&seq, a, mid);
        stack.push((mid, b, c.saturating_sub(left)));
        stack.push((a, mid, left));
    }
    roots.retain(|&r| r >= lo - tol && r <= hi + tol);
    for r in roots.iter_mut() {
        *r = r.clamp(lo, hi);
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots.dedup_by(|x, y| (*x - *y).abs() <= tol);
    Ok(roots)
}

/// Locates the unique distinct root in `(a, b]`.
fn refine_single(p: &Poly, seq: &[Poly], mut a: f64, mut b: f64, tol: f64) -> f64 {
    let (fa, fb) = (p.eval(a), p.eval(b));
    if fb == 0.0 {
        return b;
    }
    if fa * fb < 0.0 {
        return bisect_newton(p, a, b, tol);
    }
    // Even multiplicity: no sign change, so bisect on Sturm counts.
    while b - a > 0.25 * tol {
        let mid = 0.5 * (a + b);
        if count_roots(seq, a, mid) >= 1 {
            b = mid;
        } else {
            a = mid;
        }
    }
    let guess = 0.5 * (a + b);
    polish_multiple(p, guess, tol)
}

/// Safeguarded Newton iteration inside a sign-changing bracket.
fn bisect_newton(p: &Poly, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let dp = p.derivative();
    let sa = p.eval(a) < 0.0;
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let fx = p.eval(x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == sa {
            a = x;
        } else {
            b = x;
        }
        let d = dp.eval(x);
        let newton = if d != 0.0 { x - fx / d } else { f64::NAN };
        let next = if newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        let step = (next - x).abs();
        x = next;
        if b - a <= tol * 1e-3 || step <= f64::EPSILON * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// Newton on the derivative pulls a multiple root estimate onto the
/// stationary point, which is better conditioned than `p` itself.
fn polish_multiple(p: &Poly, guess: f64, tol: f64) -> f64 {
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let mut x = guess;
    for _ in 0..20 {
        let g = d2.eval(x);
        if g == 0.0 {
            break;
        }
        let step = d1.eval(x) / g;
        if !step.is_finite() || step.abs() > tol {
            break;
        }
        x -= step;
        if step.abs() <= f64::EPSILON * (1.0 + x.abs()) {
            break;
        }
    }
    if p.eval(x).abs() <= p.eval(guess).abs() {
        x
    } else {
        guess
    }
}

/// Greatest common divisor by the Euclidean remainder sequence. A remainder
/// is treated as zero once its max-norm drops to `tol` times the divisor's.
pub fn gcd(p: &Poly, q: &Poly, tol: f64) -> Poly {
    let mut a = p.unit();
    let mut b = q.unit();
    if b.is_zero() {
        return a.monic();
    }
    if a.is_zero() {
        return b.monic();
    }
    loop {
        if b.degree() == Some(0) {
            return Poly::one();
        }
        let (_, r) = a.div_rem(&b);
        if r.norm_inf() <= tol * b.norm_inf() {
            return b.monic();
        }
        a = b;
        b = r.unit();
    }
}

/// True iff `gcd(p, p')` is constant.
pub fn is_separable(p: &Poly, tol: f64) -> bool {
    match p.degree() {
        None => false,
        Some(0) | Some(1) => true,
        Some(_) => gcd(p, &p.derivative(), tol).degree() == Some(0),
    }
}

/// Monomial form of `sum_n c[n] T_n(x)` with `T_n` the Chebyshev polynomials
/// of the first kind.
pub fn chebyshev_to_poly(c: &[f64]) -> Poly {
    let mut out = Poly::zero();
    let mut prev = Poly::one();
    let mut cur = Poly::x();
    for (n, &cn) in c.iter().enumerate() {
        let tn = match n {
            0 => Poly::one(),
            1 => Poly::x(),
            _ => {
                let next = &(&Poly::monomial(2.0, 1) * &cur) - &prev;
                prev = cur;
                cur = next;
                cur.clone()
            }
        };
        out = &out + &tn.scale(cn);
    }
    out
}

/// Chebyshev coefficients of `x * sum_n c[n] T_n(x)`, using
/// `x T_0 = T_1` and `x T_n = (T_{n+1} + T_{n-1}) / 2`.
pub fn chebyshev_mul_x(c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; c.len() + 1];
    for (n, &cn) in c.iter().enumerate() {
        if n == 0 {
            out[1] += cn;
        } else {
            out[n + 1] += 0.5 * cn;
            out[n - 1] += 0.5 * cn;
        }
    }
    out
}
