//! Closed-form SOS certificates for nonnegative tangent lines.
//!
//! For a tangent line `f` at `p = (ξ, η)` the function
//! `h = f - (x - ξ)^2 / γ`, with `γ` the maximum of `(x - ξ)^2 / f` on the
//! real curve, equals `const * F^2 / (1 - x^2)` for the conic `F` through
//! `(±1, 0)` and `p`. A certificate `1 - x^2 = Σ g^2` then gives
//! `f = (x - ξ)^2 / γ + const * Σ (F g / (1 - x^2))^2`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::curve::{curve_divide, elem_mul, sample_real_points, CurveElem, CurveError, CurveParams, RealPoint};
use crate::poly::Poly;
use crate::sos::{sos_residual, SosCertificate};

/// Number of grid points per branch interval when maximizing `φ`.
const PHI_GRID: usize = 10_000;
/// Grid maxima of `φ` above this mean the line touches the curve twice.
const DOUBLE_TANGENT_PHI: f64 = 1e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TangentError {
    #[error("gradient vanishes at ({x}, {y}); the curve should be nonsingular")]
    SignAmbiguous { x: f64, y: f64 },
    #[error("tangent line at ({x}, {y}) changes sign on the curve")]
    NotSupporting { x: f64, y: f64 },
    #[error("tangent line touches the curve twice (gamma is infinite)")]
    DoubleTangentDetected,
    #[error("conic F needs eta != 0")]
    EtaZero,
    #[error("base certificate for 1 - x^2 is invalid (residual {residual:e})")]
    BaseCertificateInvalid { residual: f64 },
    #[error("certificate text: {0}")]
    Parse(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangentCase {
    Generic,
    DoubleTangent,
    VerticalTangent,
}

impl TangentCase {
    fn name(&self) -> &'static str {
        match self {
            TangentCase::Generic => "Generic",
            TangentCase::DoubleTangent => "DoubleTangent",
            TangentCase::VerticalTangent => "VerticalTangent",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TangentData {
    pub point: RealPoint,
    pub line: CurveElem,
    /// `None` encodes `γ = ∞`.
    pub gamma: Option<f64>,
    pub argmax: Option<RealPoint>,
    pub conic: CurveElem,
    pub case: TangentCase,
}

#[derive(Clone, Debug)]
pub struct TangentCertificate {
    pub curve: CurveParams,
    pub data: TangentData,
    pub constant: f64,
    pub sos: SosCertificate,
}

/// `±(q'(ξ)(x - ξ) + 2η(y - η))`, signed to be nonnegative on the curve.
pub fn tangent_line(curve: &CurveParams, p: RealPoint) -> Result<CurveElem, TangentError> {
    let p = curve.point(p.x, p.y, 1e-9)?;
    let dq = curve.q().derivative().eval(p.x);
    if dq == 0.0 && p.y == 0.0 {
        return Err(TangentError::SignAmbiguous { x: p.x, y: p.y });
    }
    let f = CurveElem::new(
        Poly::new(vec![-dq * p.x - 2.0 * p.y * p.y, dq]),
        Poly::constant(2.0 * p.y),
    );
    let pts = sample_real_points(curve, 2000)?;
    let tol = 1e-9 * (1.0 + f.norm_inf());
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), q| {
        let v = f.eval(q.x, q.y);
        (lo.min(v), hi.max(v))
    });
    if lo >= -tol {
        Ok(f)
    } else if hi <= tol {
        Ok(f.scale(-1.0))
    } else {
        Err(TangentError::NotSupporting { x: p.x, y: p.y })
    }
}

/// The branch `y = s * sqrt(-q(x))` through `p` and its second derivative.
fn branch_curvature(curve: &CurveParams, xi: f64, eta: f64) -> f64 {
    let q = curve.q();
    let d1 = q.derivative();
    let d2 = d1.derivative();
    let yp = -d1.eval(xi) / (2.0 * eta);
    (-d2.eval(xi) - 2.0 * yp * yp) / (2.0 * eta)
}

/// Maximum of `φ = (x - ξ)^2 / f` on the real curve and a point attaining it.
pub fn phi_max(curve: &CurveParams, f: &CurveElem, xi: f64) -> Result<(f64, RealPoint), TangentError> {
    let q = curve.q();
    // f = A(x - ξ) + B(y - η): B is the y-coefficient and f(ξ, η) = 0 gives η
    let b = f.r.coeff(0);
    if b == 0.0 {
        return Err(TangentError::EtaZero);
    }
    let eta = -f.p.eval(xi) / b;
    let limit = {
        let y2 = branch_curvature(curve, xi, eta);
        let denom = b * y2;
        if denom.abs() < 1e-14 {
            f64::INFINITY
        } else {
            2.0 / denom
        }
    };
    let mut best = (f64::NEG_INFINITY, RealPoint { x: xi, y: eta });
    for (lo, hi) in curve.real_intervals() {
        let width = hi - lo;
        for sign in [1.0, -1.0] {
            let y_of = |x: f64| sign * (-q.eval(x)).max(0.0).sqrt();
            let on_p_branch = (eta > 0.0) == (sign > 0.0) && xi >= lo && xi <= hi;
            let phi = |x: f64| -> f64 {
                if on_p_branch && (x - xi).abs() < 1e-5 * width {
                    return limit;
                }
                let fv = f.eval(x, y_of(x));
                if fv <= 0.0 {
                    return if (x - xi).abs() < 1e-12 { limit } else { f64::INFINITY };
                }
                (x - xi).powi(2) / fv
            };
            let xs: Vec<f64> = (0..PHI_GRID)
                .map(|i| lo + width * i as f64 / (PHI_GRID - 1) as f64)
                .collect();
            let vals: Vec<f64> = xs.iter().map(|&x| phi(x)).collect();
            let (imax, &vmax) = vals
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("grid is nonempty");
            if vmax > DOUBLE_TANGENT_PHI {
                return Err(TangentError::DoubleTangentDetected);
            }
            let a = xs[imax.saturating_sub(1)];
            let c = xs[(imax + 1).min(PHI_GRID - 1)];
            let (x, v) = golden_max(&phi, a, c, 1e-10);
            let (x, v) = if v >= vmax { (x, v) } else { (xs[imax], vmax) };
            if v > best.0 {
                best = (v, RealPoint { x, y: y_of(x) });
            }
        }
    }
    Ok(best)
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// `F = (ξ^2 y - η x^2) - (y - η)`, vanishing at `(±1, 0)` and `(ξ, η)`.
pub fn conic_f(p: RealPoint) -> Result<CurveElem, TangentError> {
    if p.y == 0.0 {
        return Err(TangentError::EtaZero);
    }
    let (xi, eta) = (p.x, p.y);
    Ok(CurveElem::new(
        Poly::new(vec![eta, 0.0, -eta]),
        Poly::constant(xi * xi - 1.0),
    ))
}

/// Detects a second tangency through the norm quartic `f * conj(f)`: after
/// removing the double root at `ξ` the remaining quadratic has a double real
/// root on the curve.
fn second_double_root(curve: &CurveParams, f: &CurveElem, xi: f64) -> bool {
    let n = f.norm_poly(&curve.q());
    let sq = Poly::new(vec![xi * xi, -2.0 * xi, 1.0]);
    let (quad, _) = n.div_rem(&sq);
    if quad.degree() != Some(2) {
        return false;
    }
    let (c, b, a) = (quad.coeff(0), quad.coeff(1), quad.coeff(2));
    let disc = b * b - 4.0 * a * c;
    let scale = b * b + (4.0 * a * c).abs();
    if disc.abs() > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return false;
    }
    let x2 = -b / (2.0 * a);
    curve.q().eval(x2) <= 1e-9
}

pub fn tangent_data(curve: &CurveParams, p: RealPoint) -> Result<TangentData, TangentError> {
    let line = tangent_line(curve, p)?;
    let q = curve.q();
    if p.y == 0.0 {
        // vertical tangent: f = c (x - ξ) up to sign, φ = |x - ξ| / c peaks at -ξ
        let c = q.derivative().eval(p.x).abs();
        return Ok(TangentData {
            point: p,
            line,
            gamma: Some(2.0 / c),
            argmax: Some(RealPoint { x: -p.x, y: 0.0 }),
            conic: CurveElem::from_x(Poly::new(vec![1.0, 0.0, -1.0])),
            case: TangentCase::VerticalTangent,
        });
    }
    let conic = conic_f(p)?;
    let (gamma, argmax) = if second_double_root(curve, &line, p.x) {
        (None, None)
    } else {
        match phi_max(curve, &line, p.x) {
            Ok((g, pt)) => (Some(g), Some(pt)),
            Err(TangentError::DoubleTangentDetected) => (None, None),
            Err(e) => return Err(e),
        }
    };
    let case = if gamma.is_some() {
        TangentCase::Generic
    } else {
        TangentCase::DoubleTangent
    };
    Ok(TangentData {
        point: p,
        line,
        gamma,
        argmax,
        conic,
        case,
    })
}

/// Assembles the certificate for the tangent line at `p` from a certificate
/// `1 - x^2 = Σ g^2`.
pub fn decompose_tangent(
    curve: &CurveParams,
    p: RealPoint,
    base: &SosCertificate,
) -> Result<TangentCertificate, TangentError> {
    let one_minus_x2 = Poly::new(vec![1.0, 0.0, -1.0]);
    let base_res = sos_residual(base, curve).max(base.target.sub(&CurveElem::from_x(one_minus_x2.clone())).norm_inf());
    if base_res > 1e-6 {
        return Err(TangentError::BaseCertificateInvalid { residual: base_res });
    }
    let p = curve.point(p.x, p.y, 1e-9)?;
    let data = tangent_data(curve, p)?;
    let q = curve.q();
    let f = &data.line;

    let pieces: Vec<CurveElem> = match data.case {
        TangentCase::VerticalTangent => base.summands.clone(),
        _ => base
            .summands
            .iter()
            .map(|g| curve_divide(&elem_mul(&data.conic, g, &q), &one_minus_x2, 1e-8))
            .collect::<Result<_, _>>()?,
    };
    let lin = CurveElem::from_x(Poly::new(vec![-p.x, 1.0]));
    let h = match data.gamma {
        Some(g) if data.case != TangentCase::DoubleTangent => f.sub(&elem_mul(&lin, &lin, &q).scale(1.0 / g)),
        _ => f.clone(),
    };
    // const = h / Σ pieces^2, read off where the denominator is largest
    let sum_sq = pieces
        .iter()
        .fold(CurveElem::zero(), |acc, w| acc.add(&elem_mul(w, w, &q)));
    let pts = sample_real_points(curve, 400)?;
    let at = pts
        .iter()
        .max_by(|a, b| sum_sq.eval(a.x, a.y).total_cmp(&sum_sq.eval(b.x, b.y)))
        .expect("curve has real points");
    let constant = h.eval(at.x, at.y) / sum_sq.eval(at.x, at.y);

    let mut summands = Vec::with_capacity(pieces.len() + 1);
    if let (Some(g), TangentCase::Generic | TangentCase::VerticalTangent) = (data.gamma, data.case) {
        summands.push(lin.scale(1.0 / g.sqrt()));
    }
    let s = constant.max(0.0).sqrt();
    summands.extend(pieces.iter().map(|w| w.scale(s)));
    let mut sos = SosCertificate {
        summands,
        target: f.clone(),
        residual: 0.0,
    };
    sos.residual = sos_residual(&sos, curve);
    Ok(TangentCertificate {
        curve: *curve,
        data,
        constant,
        sos,
    })
}

fn coeff_list(p: &Poly) -> String {
    let v: Vec<String> = p.coeffs().iter().map(|c| format!("{c}")).collect();
    format!("[{}]", v.join(","))
}

/// Structured text form of a certificate.
pub fn render_certificate(c: &TangentCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "curve a={} b={}", c.curve.a(), c.curve.b());
    let _ = writeln!(out, "point x={} y={}", c.data.point.x, c.data.point.y);
    let _ = writeln!(out, "case {}", c.data.case.name());
    match c.data.gamma {
        Some(g) => {
            let _ = writeln!(out, "gamma {g}");
        }
        None => {
            let _ = writeln!(out, "gamma inf");
        }
    }
    let _ = writeln!(out, "line p={} r={}", coeff_list(&c.data.line.p), coeff_list(&c.data.line.r));
    for s in &c.sos.summands {
        let _ = writeln!(out, "summand p={} r={}", coeff_list(&s.p), coeff_list(&s.r));
    }
    let _ = writeln!(out, "residual {}", c.sos.residual);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedCertificate {
    pub a: f64,
    pub b: f64,
    pub point: RealPoint,
    pub case: TangentCase,
    pub gamma: Option<f64>,
    pub line: CurveElem,
    pub summands: Vec<CurveElem>,
    pub residual: f64,
}

pub fn parse_certificate(text: &str) -> Result<ParsedCertificate, TangentError> {
    let bad = |m: &str| TangentError::Parse(m.to_string());
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("bad number {s:?}")));
    let kv = |s: &str, key: &str| -> Result<f64, TangentError> {
        num(s.strip_prefix(key).ok_or_else(|| bad(&format!("expected {key}")))?)
    };
    let list = |s: &str, key: &str| -> Result<Poly, TangentError> {
        let body = s
            .strip_prefix(key)
            .and_then(|t| t.strip_prefix('['))
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| bad("expected coefficient list"))?;
        let c = body
            .split(',')
            .filter(|t| !t.is_empty())
            .map(num)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(c))
    };
    let elem = |rest: &[&str]| -> Result<CurveElem, TangentError> {
        if rest.len() != 2 {
            return Err(bad("expected p=[..] r=[..]"));
        }
        Ok(CurveElem::new(list(rest[0], "p=")?, list(rest[1], "r=")?))
    };
    let (mut a, mut b, mut point, mut case, mut gamma, mut line, mut residual) =
        (None, None, None, None, None, None, None);
    let mut summands = Vec::new();
    for l in text.lines().filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = l.split_whitespace().collect();
        match f[0] {
            "curve" if f.len() == 3 => {
                a = Some(kv(f[1], "a=")?);
                b = Some(kv(f[2], "b=")?);
            }
            "point" if f.len() == 3 => {
                point = Some(RealPoint {
                    x: kv(f[1], "x=")?,
                    y: kv(f[2], "y=")?,
                })
            }
            "case" if f.len() == 2 => {
                case = Some(match f[1] {
                    "Generic" => TangentCase::Generic,
                    "DoubleTangent" => TangentCase::DoubleTangent,
                    "VerticalTangent" => TangentCase::VerticalTangent,
                    other => return Err(bad(&format!("unknown case {other}"))),
                })
            }
            "gamma" if f.len() == 2 => gamma = Some(if f[1] == "inf" { None } else { Some(num(f[1])?) }),
            "line" => line = Some(elem(&f[1..])?),
            "summand" => summands.push(elem(&f[1..])?),
            "residual" if f.len() == 2 => residual = Some(num(f[1])?),
            other => return Err(bad(&format!("unexpected line starting with {other:?}"))),
        }
    }
    Ok(ParsedCertificate {
        a: a.ok_or_else(|| bad("missing curve"))?,
        b: b.ok_or_else(|| bad("missing curve"))?,
        point: point.ok_or_else(|| bad("missing point"))?,
        case: case.ok_or_else(|| bad("missing case"))?,
        gamma: gamma.ok_or_else(|| bad("missing gamma"))?,
        line: line.ok_or_else(|| bad("missing line"))?,
        summands,
        residual: residual.ok_or_else(|| bad("missing residual"))?,
    })
}
