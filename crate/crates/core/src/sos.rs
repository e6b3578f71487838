//! Sums of squares on the curve: Gram certificates, the degree invariant
//! `theta`, and the stability constant `N(a, b)` together with its bounds.

use log::{debug, warn};
use nalgebra::DMatrix;
use thiserror::Error;

use crate::curve::{elem_mul, in_parameter_set, CurveElem, CurveError, CurveParams, DeltaBasis};
use crate::gram::{complement, nullspace, GramSlice};
use crate::linalg::{jacobi_eigen, SymMatrix};
use crate::poly::{chebyshev_mul_x, chebyshev_to_poly, real_roots, Poly};
use crate::sdp::{SdpOptions, SdpStatus};

/// Default largest Gram degree tried by [`stability_constant`].
pub const DEFAULT_D_MAX: usize = 60;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SosError {
    #[error("infeasible (margin {margin:e})")]
    Infeasible { margin: f64, dual: Option<SymMatrix> },
    #[error("indeterminate near the feasibility boundary (margin {margin:e})")]
    Indeterminate { margin: f64 },
    #[error("no certificate found up to degree {d_max}")]
    BudgetExceeded { d_max: usize },
    #[error("bound requires |a| > 2, got a = {a}")]
    NotApplicable { a: f64 },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// `f = sum_ij G_ij b_i b_j` over a δ-basis.
#[derive(Clone, Debug)]
pub struct GramCertificate {
    pub curve: CurveParams,
    pub basis: DeltaBasis,
    pub gram: SymMatrix,
    pub target: CurveElem,
    pub residual: f64,
    /// Smallest eigenvalue on the face the solver worked in.
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct SosCertificate {
    pub summands: Vec<CurveElem>,
    pub target: CurveElem,
    pub residual: f64,
}

/// Witness for `t*h - s*(x^2 - 1) = 1` with `s`, `t` sums of squares of
/// degree at most `d`, so that `N = d/2 + 2`.
#[derive(Clone, Debug)]
pub struct StabilityResult {
    pub n: usize,
    pub d: usize,
    pub witness_s: Poly,
    pub witness_t: Poly,
    /// Gram matrices of `s` and `t` in the Chebyshev basis `T_0..T_{d/2}`.
    pub gram_s: SymMatrix,
    pub gram_t: SymMatrix,
    /// Max-norm of the coefficients of `t*h - s*f - 1`.
    pub residual: f64,
    pub margin: f64,
    /// Set when some smaller degree was indeterminate rather than infeasible.
    pub upper_bound_only: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theta {
    Finite(usize),
    Infinite,
}

/// `sum_ij G_ij b_i b_j` reduced in the coordinate ring.
pub fn gram_expand(basis: &DeltaBasis, gram: &SymMatrix, q: &Poly) -> CurveElem {
    let elems = basis.elements();
    let mut out = CurveElem::zero();
    for (i, bi) in elems.iter().enumerate() {
        let row: Vec<f64> = (0..elems.len()).map(|j| gram.get(i, j)).collect();
        let comb = basis.combine(&row);
        out = out.add(&elem_mul(bi, &comb, q));
    }
    out
}

/// Real points where a psd `f` vanishes: the critical points of its norm
/// `f * conj(f)` on the real intervals, plus the branch points.
fn real_zeros(f: &CurveElem, curve: &CurveParams) -> Vec<(f64, f64)> {
    let q = curve.q();
    let norm = f.norm_poly(&q);
    let dn = norm.derivative();
    let tol = 1e-8 * (1.0 + f.norm_inf());
    let mut pts = Vec::new();
    for (lo, hi) in curve.real_intervals() {
        let mut xs = vec![lo, hi];
        if !dn.is_zero() {
            xs.extend(real_roots(&dn, lo, hi, 1e-13).unwrap_or_default());
        }
        for x in xs {
            let y = (-q.eval(x)).max(0.0).sqrt();
            for yy in [y, -y] {
                if f.eval(x, yy).abs() <= tol
                    && !pts
                        .iter()
                        .any(|&(px, py): &(f64, f64)| (px - x).abs() < 1e-9 && (py - yy).abs() < 1e-9)
                {
                    pts.push((x, yy));
                }
                if y == 0.0 {
                    break;
                }
            }
        }
    }
    pts
}

fn is_nonneg_constant(f: &CurveElem) -> bool {
    f.r.is_zero() && f.p.degree().is_none_or(|d| d == 0) && f.p.coeff(0) >= 0.0
}

/// Searches for a Gram certificate of `f` over `DeltaBasis(d)` with the default
/// solver options.
pub fn sos_feasible(f: &CurveElem, d: usize, curve: &CurveParams) -> Result<GramCertificate, SosError> {
    sos_feasible_with(f, d, curve, &SdpOptions::default())
}

/// Gram-matrix SDP for `f` at degree bound `d`.
///
/// Real zeros of `f` force every square in a representation to vanish there,
/// so the Gram matrix is restricted to the subspace of the basis vanishing at
/// those points before maximizing its smallest eigenvalue. A zero margin is
/// still possible (zeros of higher order); such solutions are accepted when
/// the PSD-clipped Gram reproduces `f`.
pub fn sos_feasible_with(
    f: &CurveElem,
    d: usize,
    curve: &CurveParams,
    opts: &SdpOptions,
) -> Result<GramCertificate, SosError> {
    assert!(d >= 1, "degree bound must be at least 1");
    let basis = DeltaBasis::new(d);
    let target_space = DeltaBasis::new(2 * d);
    let Some(target) = target_space.coords(f) else {
        return Err(SosError::Infeasible {
            margin: f64::NEG_INFINITY,
            dual: None,
        });
    };
    let q = curve.q();
    let nb = basis.len();

    let zeros = real_zeros(f, curve);
    let face = if zeros.is_empty() {
        DMatrix::identity(nb, nb)
    } else {
        let rows: Vec<Vec<f64>> = zeros.iter().map(|&(x, y)| basis.eval(x, y)).collect();
        let m = DMatrix::from_fn(rows.len(), nb, |i, j| rows[i][j]);
        nullspace(&m)
    };
    let r = face.ncols();
    if r == 0 {
        return Err(SosError::Infeasible {
            margin: f64::NEG_INFINITY,
            dual: None,
        });
    }
    debug!("sos_feasible: d={d}, {} real zeros, face dim {r}", zeros.len());
    let reduced: Vec<CurveElem> = (0..r)
        .map(|i| basis.combine(face.column(i).as_slice()))
        .collect();

    let mut slice = GramSlice::new(vec![r], 0);
    let nu = slice.num_unknowns();
    let mut rows = vec![vec![0.0; nu]; target_space.len()];
    for i in 0..r {
        for j in i..r {
            let prod = elem_mul(&reduced[i], &reduced[j], &q);
            let c = target_space.coords(&prod).expect("product stays in degree 2d");
            let w = if i == j { 1.0 } else { 2.0 };
            let col = slice.entry(0, i, j);
            for (u, cu) in c.iter().enumerate() {
                rows[u][col] += w * cu;
            }
        }
    }
    for (row, t) in rows.into_iter().zip(&target) {
        slice.push_row(row, *t);
    }
    let mut o = *opts;
    o.stop_on_sign = true;
    let sol = slice.solve(&o);

    let lift = |g: &SymMatrix| -> SymMatrix {
        let full = &face * g.to_dense() * face.transpose();
        SymMatrix::from_dense(&full)
    };
    let certificate = |g: &SymMatrix, margin: f64| -> GramCertificate {
        let gram = lift(g);
        let residual = gram_expand(&basis, &gram, &q).sub(f).norm_inf();
        GramCertificate {
            curve: *curve,
            basis,
            gram,
            target: f.clone(),
            residual,
            margin,
        }
    };

    match sol.status {
        SdpStatus::Feasible => Ok(certificate(&sol.grams[0], sol.margin)),
        SdpStatus::Infeasible => Err(SosError::Infeasible {
            margin: sol.margin,
            dual: sol.sdp.and_then(|s| s.dual),
        }),
        _ => {
            let clipped = clip_psd(&sol.grams[0]);
            let cert = certificate(&clipped, sol.margin);
            if sol.margin >= -opts.eps_feas.sqrt() && cert.residual <= 1e-7 * (1.0 + f.norm_inf()) {
                Ok(cert)
            } else {
                Err(SosError::Indeterminate { margin: sol.margin })
            }
        }
    }
}

/// Nearest PSD matrix in the Frobenius norm.
fn clip_psd(g: &SymMatrix) -> SymMatrix {
    let (vals, v) = jacobi_eigen(g, 1e-15);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| l.max(0.0)),
    ));
    SymMatrix::from_dense(&(&v * d * v.transpose()))
}

/// Least `d <= d_max` at which `f` is a sum of squares of elements of
/// δ-degree at most `d`.
pub fn theta(f: &CurveElem, curve: &CurveParams, d_max: usize) -> Result<Theta, SosError> {
    if f.is_zero() {
        return Err(CurveError::ZeroElement.into());
    }
    if is_nonneg_constant(f) {
        return Ok(Theta::Finite(0));
    }
    let mut indeterminate = false;
    for d in 1..=d_max {
        match sos_feasible(f, d, curve) {
            Ok(_) => return Ok(Theta::Finite(d)),
            Err(SosError::Infeasible { .. }) => {}
            Err(SosError::Indeterminate { margin }) => {
                debug!("theta: indeterminate at d={d} (margin {margin:e})");
                indeterminate = true;
            }
            Err(e) => return Err(e),
        }
    }
    if indeterminate {
        Err(SosError::BudgetExceeded { d_max })
    } else {
        Ok(Theta::Infinite)
    }
}

/// Factors the Gram matrix into squares via its eigen-decomposition.
pub fn extract_sos(g: &GramCertificate) -> SosCertificate {
    let (vals, v) = jacobi_eigen(&g.gram, 1e-15);
    let lmax = vals.first().copied().unwrap_or(0.0).max(0.0);
    let mut clipped = 0.0;
    let mut summands = Vec::new();
    for (k, &l) in vals.iter().enumerate() {
        if l < 0.0 {
            clipped += -l;
            continue;
        }
        if l <= 1e-14 * lmax || l == 0.0 {
            continue;
        }
        let c: Vec<f64> = v.column(k).iter().map(|x| x * l.sqrt()).collect();
        summands.push(g.basis.combine(&c));
    }
    let q = g.curve.q();
    let sum = summands
        .iter()
        .fold(CurveElem::zero(), |acc, s| acc.add(&elem_mul(s, s, &q)));
    SosCertificate {
        residual: sum.sub(&g.target).norm_inf() + clipped,
        summands,
        target: g.target.clone(),
    }
}

/// Re-expands a certificate and returns `||f - sum g^2||_inf`.
pub fn sos_residual(cert: &SosCertificate, curve: &CurveParams) -> f64 {
    let q = curve.q();
    cert.summands
        .iter()
        .fold(CurveElem::zero(), |acc, s| acc.add(&elem_mul(s, s, &q)))
        .sub(&cert.target)
        .norm_inf()
}

/// Chebyshev coefficients of `T_i T_j = (T_{i+j} + T_{|i-j|}) / 2`.
fn cheb_product(i: usize, j: usize, len: usize) -> Vec<f64> {
    let mut c = vec![0.0; len];
    c[i + j] += 0.5;
    c[i.abs_diff(j)] += 0.5;
    c
}

fn cheb_mul_poly(c: &[f64], p: &Poly) -> Vec<f64> {
    let deg = p.degree().unwrap_or(0);
    let mut out = vec![0.0; c.len() + deg];
    let mut power = c.to_vec();
    for k in 0..=deg {
        let pk = p.coeff(k);
        for (o, v) in out.iter_mut().zip(&power) {
            *o += pk * v;
        }
        power = chebyshev_mul_x(&power);
    }
    out
}

/// Solves the two-Gram SDP for `t*h - s*f = 1` at degree `d` (even).
pub fn umschreib_feasible(curve: &CurveParams, d: usize, opts: &SdpOptions) -> Result<StabilityResult, SosError> {
    assert!(d.is_multiple_of(2), "degree must be even");
    let k = d / 2 + 1;
    let h = curve.h();
    let f = curve.f();
    let mut slice = GramSlice::new(vec![k, k], 0);
    let nu = slice.num_unknowns();
    let len = d + 3;
    let mut rows = vec![vec![0.0; nu]; len];
    for i in 0..k {
        for j in i..k {
            let w = if i == j { 1.0 } else { 2.0 };
            let base = cheb_product(i, j, d + 1);
            let th = cheb_mul_poly(&base, &h);
            let sf = cheb_mul_poly(&base, &f);
            let (ct, cs) = (slice.entry(1, i, j), slice.entry(0, i, j));
            for u in 0..len {
                rows[u][ct] += w * th[u];
                rows[u][cs] -= w * sf[u];
            }
        }
    }
    for (u, row) in rows.into_iter().enumerate() {
        slice.push_row(row, if u == 0 { 1.0 } else { 0.0 });
    }
    let mut o = *opts;
    o.stop_on_sign = true;
    let sol = slice.solve(&o);
    match sol.status {
        SdpStatus::Feasible => {
            let to_poly = |g: &SymMatrix| {
                let mut c = vec![0.0; d + 1];
                for i in 0..k {
                    for j in 0..k {
                        let p = cheb_product(i, j, d + 1);
                        for (cu, pu) in c.iter_mut().zip(&p) {
                            *cu += g.get(i, j) * pu;
                        }
                    }
                }
                chebyshev_to_poly(&c)
            };
            let (s, t) = refine_witness(to_poly(&sol.grams[0]), to_poly(&sol.grams[1]), &h, &f, d);
            let residual = identity_residual(&s, &t, &h, &f);
            Ok(StabilityResult {
                n: d / 2 + 2,
                d,
                witness_s: s,
                witness_t: t,
                gram_s: sol.grams[0].clone(),
                gram_t: sol.grams[1].clone(),
                residual,
                margin: sol.margin,
                upper_bound_only: false,
            })
        }
        SdpStatus::Infeasible => Err(SosError::Infeasible {
            margin: sol.margin,
            dual: sol.sdp.and_then(|s| s.dual),
        }),
        _ => Err(SosError::Indeterminate { margin: sol.margin }),
    }
}

fn identity_residual(s: &Poly, t: &Poly, h: &Poly, f: &Poly) -> f64 {
    (&(&(t * h) - &(s * f)) - &Poly::one()).norm_inf()
}

/// Least-norm correction of the monomial witnesses so that the identity holds
/// to rounding; removes the error of the Chebyshev-to-monomial conversion,
/// which grows with `d`. The correction is far below the Gram margin.
fn refine_witness(mut s: Poly, mut t: Poly, h: &Poly, f: &Poly, d: usize) -> (Poly, Poly) {
    let n = d + 1;
    let rows = d + 3;
    let a = DMatrix::from_fn(rows, 2 * n, |k, j| {
        if j < n {
            if k >= j { -f.coeff(k - j) } else { 0.0 }
        } else if k >= j - n {
            h.coeff(k - (j - n))
        } else {
            0.0
        }
    });
    let svd = a.svd(true, true);
    for _ in 0..2 {
        let r = &(&(&t * h) - &(&s * f)) - &Poly::one();
        let rhs = nalgebra::DVector::from_fn(rows, |k, _| -r.coeff(k));
        let Ok(delta) = svd.solve(&rhs, 1e-14) else { break };
        let ds = Poly::new(delta.rows(0, n).iter().copied().collect());
        let dt = Poly::new(delta.rows(n, n).iter().copied().collect());
        let (s1, t1) = (&s + &ds, &t + &dt);
        if identity_residual(&s1, &t1, h, f) >= identity_residual(&s, &t, h, f) {
            break;
        }
        s = s1;
        t = t1;
    }
    (s, t)
}

/// `N(a, b)`: the least `d/2 + 2` for which the identity has SOS witnesses.
pub fn stability_constant(a: f64, b: f64, d_max: usize) -> Result<StabilityResult, SosError> {
    stability_constant_with(a, b, d_max, &SdpOptions::default())
}

pub fn stability_constant_with(a: f64, b: f64, d_max: usize, opts: &SdpOptions) -> Result<StabilityResult, SosError> {
    let curve = CurveParams::new(a, b)?;
    let mut escalated = false;
    for d in (0..=d_max).step_by(2) {
        match umschreib_feasible(&curve, d, opts) {
            Ok(mut r) => {
                r.upper_bound_only = escalated;
                return Ok(r);
            }
            Err(SosError::Infeasible { .. }) => {}
            Err(SosError::Indeterminate { margin }) => {
                debug!("stability ({a}, {b}): indeterminate at d={d} (margin {margin:e})");
                escalated = true;
            }
            Err(e) => return Err(e),
        }
    }
    Err(SosError::BudgetExceeded { d_max })
}

/// Closed-form test for `N(a, b) <= 3`: `a^4/16 + a^2 <= (b + 1)^2`.
pub fn region_le3(a: f64, b: f64) -> Result<bool, SosError> {
    if !in_parameter_set(a, b) {
        return Err(CurveError::NotInP { a, b }.into());
    }
    Ok(a.powi(4) / 16.0 + a * a <= (b + 1.0).powi(2))
}

/// Markov-inequality lower bound `2 + sqrt((|a| - 2) / (2 (1 + b - |a|)))`.
pub fn markov_lower_bound(a: f64, b: f64) -> Result<f64, SosError> {
    if !in_parameter_set(a, b) {
        return Err(CurveError::NotInP { a, b }.into());
    }
    if a.abs() <= 2.0 {
        return Err(SosError::NotApplicable { a });
    }
    Ok(2.0 + ((a.abs() - 2.0) / (2.0 * (1.0 + b - a.abs()))).sqrt())
}

/// `h_gamma = x^2 + (2 + 2/g) x + (1 + 2/g + 4/g^2)`.
pub fn gamma_curve(gamma: f64) -> Result<CurveParams, SosError> {
    let a = 2.0 + 2.0 / gamma;
    let b = 1.0 + 2.0 / gamma + 4.0 / (gamma * gamma);
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(CurveError::NotInP { a, b }.into());
    }
    Ok(CurveParams::new(a, b)?)
}

/// Largest `gamma` with `N(C_gamma) <= n`, by bisection on feasibility of the
/// identity at `d = 2(n - 2)` over `[0.1, 4(n-2)^2]`.
pub fn gamma_max(n: usize, tol: f64, d_max: usize) -> Result<f64, SosError> {
    assert!(n >= 3, "gamma_max needs N >= 3");
    let d = 2 * (n - 2);
    if d > d_max {
        return Err(SosError::BudgetExceeded { d_max });
    }
    let opts = SdpOptions::default();
    let pred = |g: f64| -> Result<bool, SosError> {
        let c = gamma_curve(g)?;
        Ok(umschreib_feasible(&c, d, &opts).is_ok())
    };
    let (lo0, hi0) = (0.1, 4.0 * ((n - 2) * (n - 2)) as f64);

    // coarse geometric scan to bracket the threshold and observe monotonicity
    let samples = 9;
    let grid: Vec<f64> = (0..samples)
        .map(|i| lo0 * (hi0 / lo0).powf(i as f64 / (samples - 1) as f64))
        .collect();
    let vals = grid.iter().map(|&g| pred(g)).collect::<Result<Vec<_>, _>>()?;
    let first_false = vals.iter().position(|v| !v);
    let last_true = vals.iter().rposition(|v| *v);
    let (mut lo, mut hi) = match (last_true, first_false) {
        (None, _) => {
            warn!("gamma_max(N={n}): predicate false at the lower bracket end {lo0}");
            return Ok(lo0);
        }
        (Some(_), None) => {
            warn!("gamma_max(N={n}): predicate true at the Markov cap {hi0}");
            return Ok(hi0);
        }
        (Some(t), Some(f)) => {
            if t > f {
                warn!("gamma_max(N={n}): feasibility in gamma is not monotone on the scan grid");
            }
            (grid[f - 1], grid[f])
        }
    };
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Certificate `1 - x^2 = sum sigma^2 (x^2-1)^2 + sum tau^2 y^2` from the
/// stability witness, with all summands of δ-degree at most `N`.
pub fn interval_certificate(curve: &CurveParams, d_max: usize) -> Result<(StabilityResult, SosCertificate), SosError> {
    let st = stability_constant(curve.a(), curve.b(), d_max)?;
    let f = curve.f();
    let mut summands = Vec::new();
    for (g, is_t) in [(&st.gram_s, false), (&st.gram_t, true)] {
        let (vals, v) = jacobi_eigen(g, 1e-15);
        for (k, &l) in vals.iter().enumerate() {
            if l <= 0.0 {
                continue;
            }
            let c: Vec<f64> = v.column(k).iter().map(|x| x * l.sqrt()).collect();
            let sigma = chebyshev_to_poly(&c);
            summands.push(if is_t {
                CurveElem::new(Poly::zero(), sigma)
            } else {
                CurveElem::from_x(&sigma * &f)
            });
        }
    }
    let mut cert = SosCertificate {
        summands,
        target: CurveElem::from_x(curve.f().scale(-1.0)),
        residual: 0.0,
    };
    cert.residual = sos_residual(&cert, curve);
    Ok((st, cert))
}

/// Orthonormal basis of the part of `DeltaBasis(d)` vanishing at the given
/// points; exposed for diagnostics.
pub fn vanishing_subspace(d: usize, points: &[(f64, f64)]) -> DMatrix<f64> {
    let basis = DeltaBasis::new(d);
    if points.is_empty() {
        return complement(&DMatrix::zeros(basis.len(), 0), basis.len());
    }
    let m = DMatrix::from_fn(points.len(), basis.len(), |i, j| basis.eval(points[i].0, points[i].1)[j]);
    nullspace(&m)
}
