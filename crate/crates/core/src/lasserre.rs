//! Moment relaxation of the convex hull of the real curve.
//!
//! For a unital functional `λ` on `W = DeltaBasis(k)·DeltaBasis(k)` the moment
//! matrix `λ(b_i b_j)` must be PSD. Writing `m_s = λ(x^s)` and
//! `n_s = λ(x^s y)`, every entry is a linear form in the moments. Moments
//! matching the generators of `L` become coordinates, the remaining ones are
//! lifted variables, and the projection of the spectrahedron onto the
//! coordinates contains the convex hull of the real points.

use std::fmt;
use std::str::FromStr;

use log::debug;
use thiserror::Error;

use crate::curve::{elem_mul, CurveElem, CurveError, CurveParams, DeltaBasis, Monomial, RealPoint};
use crate::gram::GramSlice;
use crate::linalg::SymMatrix;
use crate::sdp::{solve_max_margin, solve_min_objective, PencilProblem, SdpOptions, SdpStatus};
use crate::sdpa::export_sdpa;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LasserreError {
    #[error("invalid subspace: {0}")]
    InvalidSubspace(String),
    #[error("generator {gen} has delta-degree above the relaxation order {k}")]
    GeneratorOutOfRange { gen: String, k: usize },
    #[error("relaxation order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("expected {expected} coordinates, got {found}")]
    CoordinateCount { expected: usize, found: usize },
    #[error("solver ended with status {0:?}")]
    Solver(SdpStatus),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Ordered monomial generators of `L`, starting with `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceSpec {
    generators: Vec<Monomial>,
}

impl SubspaceSpec {
    pub fn new(generators: Vec<Monomial>) -> Result<Self, LasserreError> {
        if generators.first() != Some(&Monomial::x(0)) {
            return Err(LasserreError::InvalidSubspace("first generator must be 1".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(LasserreError::InvalidSubspace(format!("duplicate generator {g}")));
            }
        }
        Ok(SubspaceSpec { generators })
    }

    /// `[1, x, y]`
    pub fn plane() -> Self {
        SubspaceSpec {
            generators: vec![Monomial::x(0), Monomial::x(1), Monomial::xy(0)],
        }
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    /// Number of coordinates (non-constant generators).
    pub fn dim(&self) -> usize {
        self.generators.len() - 1
    }
}

impl FromStr for SubspaceSpec {
    type Err = LasserreError;

    /// Comma-separated monomials, e.g. `1,x,y` or `1,x,x*y`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let gens = s
            .split(',')
            .map(|t| t.trim().parse::<Monomial>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| LasserreError::InvalidSubspace(e.to_string()))?;
        SubspaceSpec::new(gens)
    }
}

impl fmt::Display for SubspaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `constant + sum_v coeffs[v] * var_v` over the pencil variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    pub constant: f64,
    pub coeffs: Vec<f64>,
}

impl LinearForm {
    pub fn eval(&self, vars: &[f64]) -> f64 {
        self.constant + self.coeffs.iter().zip(vars).map(|(c, v)| c * v).sum::<f64>()
    }

    /// Renders as e.g. `1 - u4` or `-2*u2 + x`, constant first.
    pub fn render(&self, labels: &[String]) -> String {
        let mut out = String::new();
        if self.constant != 0.0 {
            out.push_str(&fmt_num(self.constant));
        }
        for (c, l) in self.coeffs.iter().zip(labels) {
            if *c == 0.0 {
                continue;
            }
            let mag = c.abs();
            let term = if mag == 1.0 { l.clone() } else { format!("{}*{l}", fmt_num(mag)) };
            if out.is_empty() {
                out = if *c < 0.0 { format!("-{term}") } else { term };
            } else {
                out.push_str(if *c < 0.0 { " - " } else { " + " });
                out.push_str(&term);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

/// Index of a moment: `m_s` at `s`, `n_s` at `2k + 1 + s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Moment {
    M(usize),
    N(usize),
}

impl Moment {
    fn label(&self) -> String {
        match self {
            Moment::M(s) => format!("u{s}"),
            Moment::N(s) => format!("v{s}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MomentPencil {
    curve: CurveParams,
    spec: SubspaceSpec,
    k: usize,
    basis: DeltaBasis,
    /// Packed upper triangle of the entry forms over the pencil variables.
    entries: Vec<LinearForm>,
    variables: Vec<Moment>,
    labels: Vec<String>,
}

impl MomentPencil {
    pub fn curve(&self) -> &CurveParams {
        &self.curve
    }

    pub fn spec(&self) -> &SubspaceSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> &DeltaBasis {
        &self.basis
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn num_coords(&self) -> usize {
        self.spec.dim()
    }

    pub fn num_lifted(&self) -> usize {
        self.variables.len() - self.num_coords()
    }

    /// Coordinate labels followed by lifted labels (`u_s`, `v_s`).
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entry(&self, i: usize, j: usize) -> &LinearForm {
        let n = self.size();
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.entries[i * n - i * (i + 1) / 2 + j]
    }

    fn matrix(&self, pick: impl Fn(&LinearForm) -> f64) -> SymMatrix {
        let n = self.size();
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, pick(self.entry(i, j)));
            }
        }
        m
    }

    pub fn constant_matrix(&self) -> SymMatrix {
        self.matrix(|f| f.constant)
    }

    /// Coefficient matrix of variable `v` (coordinates first).
    pub fn variable_matrix(&self, v: usize) -> SymMatrix {
        self.matrix(|f| f.coeffs[v])
    }

    /// Evaluates the pencil at a full variable assignment.
    pub fn eval(&self, vars: &[f64]) -> SymMatrix {
        self.matrix(|f| f.eval(vars))
    }

    /// The pencil over all variables, or over the lifted variables only when
    /// the coordinates are fixed.
    pub fn to_problem(&self, fixed: Option<&[f64]>) -> Result<PencilProblem, LasserreError> {
        let nc = self.num_coords();
        let (constant, vars): (SymMatrix, Vec<usize>) = match fixed {
            Some(c) => {
                if c.len() != nc {
                    return Err(LasserreError::CoordinateCount {
                        expected: nc,
                        found: c.len(),
                    });
                }
                let mut a0 = self.constant_matrix();
                for (v, &cv) in c.iter().enumerate() {
                    a0.axpy(cv, &self.variable_matrix(v));
                }
                (a0, (nc..self.variables.len()).collect())
            }
            None => (self.constant_matrix(), (0..self.variables.len()).collect()),
        };
        let coeffs = vars.iter().map(|&v| self.variable_matrix(v)).collect();
        let labels = vars.iter().map(|&v| self.labels[v].clone()).collect();
        Ok(PencilProblem::new(constant, coeffs)
            .expect("pencil matrices share one size")
            .with_labels(labels))
    }

    pub fn export_sdpa(&self, fixed: Option<&[f64]>) -> Result<String, LasserreError> {
        Ok(export_sdpa(&self.to_problem(fixed)?))
    }

    /// The symbolic matrix, one row per line, entries separated by ` | `.
    pub fn render(&self) -> String {
        let n = self.size();
        let mut out = String::new();
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| self.entry(i, j).render(&self.labels)).collect();
            out.push_str(&row.join(" | "));
            out.push('\n');
        }
        out
    }
}

/// Builds the order-`k` moment pencil for `L`.
pub fn build_pencil(curve: &CurveParams, spec: &SubspaceSpec, k: usize) -> Result<MomentPencil, LasserreError> {
    if k < 2 {
        return Err(LasserreError::OrderTooSmall(k));
    }
    for g in spec.generators() {
        if g.delta() > k {
            return Err(LasserreError::GeneratorOutOfRange {
                gen: g.to_string(),
                k,
            });
        }
    }
    let basis = DeltaBasis::new(k);
    let nm = 4 * k;
    let moment_index = |m: Moment| match m {
        Moment::M(s) => s,
        Moment::N(s) => 2 * k + 1 + s,
    };
    let as_moment = |g: &Monomial| {
        if g.has_y {
            Moment::N(g.x_pow)
        } else {
            Moment::M(g.x_pow)
        }
    };
    let mut variables: Vec<Moment> = spec.generators()[1..].iter().map(as_moment).collect();
    let all = (1..=2 * k).map(Moment::M).chain((0..=2 * k - 2).map(Moment::N));
    for m in all {
        if !variables.contains(&m) {
            variables.push(m);
        }
    }
    let mut labels: Vec<String> = spec.generators()[1..].iter().map(|g| g.to_string()).collect();
    labels.extend(variables[spec.dim()..].iter().map(Moment::label));
    let mut slot = vec![usize::MAX; nm];
    for (v, &m) in variables.iter().enumerate() {
        slot[moment_index(m)] = v;
    }

    let q = curve.q();
    let elems = basis.elements();
    let n = basis.len();
    let mut entries = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let prod = elem_mul(&elems[i], &elems[j], &q);
            let mut form = LinearForm {
                constant: 0.0,
                coeffs: vec![0.0; variables.len()],
            };
            let mut add = |m: Moment, c: f64| {
                if c == 0.0 {
                    return;
                }
                let idx = moment_index(m);
                if idx == 0 {
                    form.constant += c;
                } else {
                    form.coeffs[slot[idx]] += c;
                }
            };
            for (s, &c) in prod.p.coeffs().iter().enumerate() {
                add(Moment::M(s), c);
            }
            for (s, &c) in prod.r.coeffs().iter().enumerate() {
                add(Moment::N(s), c);
            }
            entries.push(form);
        }
    }
    debug!(
        "build_pencil: k={k}, size {n}, {} coords, {} lifted",
        spec.dim(),
        variables.len() - spec.dim()
    );
    Ok(MomentPencil {
        curve: *curve,
        spec: spec.clone(),
        k,
        basis,
        entries,
        variables,
        labels,
    })
}

/// Point evaluation of every moment: the rank-one moment matrix at `pt`.
pub fn moment_substitution(p: &MomentPencil, pt: RealPoint) -> Result<Vec<f64>, LasserreError> {
    let pt = p.curve.point(pt.x, pt.y, 1e-9)?;
    Ok(p.variables
        .iter()
        .map(|m| match *m {
            Moment::M(s) => pt.x.powi(s as i32),
            Moment::N(s) => pt.x.powi(s as i32) * pt.y,
        })
        .collect())
}

/// Coordinates of a point of the plane in terms of `L`'s generators.
pub fn coords_of(spec: &SubspaceSpec, x: f64, y: f64) -> Vec<f64> {
    spec.generators()[1..].iter().map(|g| g.eval(x, y)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// Strictly feasible lift; `lifted` is a witness for the lifted variables.
    Inside { margin: f64, lifted: Vec<f64> },
    /// Infeasible, with a PSD dual matrix `Y` certifying it.
    Outside { dual: SymMatrix },
    Indeterminate { margin: f64 },
}

pub fn membership(p: &MomentPencil, coords: &[f64]) -> Result<Membership, LasserreError> {
    membership_with(p, coords, &SdpOptions::default())
}

pub fn membership_with(p: &MomentPencil, coords: &[f64], opts: &SdpOptions) -> Result<Membership, LasserreError> {
    let prob = p.to_problem(Some(coords))?;
    let res = solve_max_margin(&prob, opts);
    Ok(match res.status {
        SdpStatus::Feasible => Membership::Inside {
            margin: res.margin,
            lifted: res.z,
        },
        SdpStatus::Infeasible => match res.dual {
            Some(dual) => Membership::Outside { dual },
            None => Membership::Indeterminate { margin: res.margin },
        },
        _ => Membership::Indeterminate { margin: res.margin },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Support {
    pub value: f64,
    pub coords: Vec<f64>,
    pub status: SdpStatus,
}

/// `max <direction, coords>` over the projected spectrahedron.
pub fn support(p: &MomentPencil, direction: &[f64]) -> Result<Support, LasserreError> {
    let nc = p.num_coords();
    if direction.len() != nc {
        return Err(LasserreError::CoordinateCount {
            expected: nc,
            found: direction.len(),
        });
    }
    let mut c: Vec<f64> = direction.iter().map(|d| -d).collect();
    c.resize(nc + p.num_lifted(), 0.0);
    let prob = p
        .to_problem(None)?
        .with_objective(c)
        .expect("objective matches variable count");
    let res = solve_min_objective(&prob, &SdpOptions::default());
    match res.status {
        SdpStatus::Optimal | SdpStatus::IterationLimit => Ok(Support {
            value: -res.objective,
            coords: res.z[..nc].to_vec(),
            status: res.status,
        }),
        s => Err(LasserreError::Solver(s)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Separation {
    /// `f = sum_g c_g g` is a sum of squares at order `k` with `f(coords) = -1`.
    Certificate {
        f: CurveElem,
        coeffs: Vec<f64>,
        gram: SymMatrix,
        margin: f64,
    },
    /// No separating element exists at this order.
    Inside,
    Indeterminate { margin: f64 },
}

/// Searches for a linear element of `L` that is SOS at order `k` and negative
/// at `coords`.
pub fn separation(
    curve: &CurveParams,
    spec: &SubspaceSpec,
    k: usize,
    coords: &[f64],
) -> Result<Separation, LasserreError> {
    // validates the order and generators
    let pencil = build_pencil(curve, spec, k)?;
    if coords.len() != pencil.num_coords() {
        return Err(LasserreError::CoordinateCount {
            expected: pencil.num_coords(),
            found: coords.len(),
        });
    }
    let basis = DeltaBasis::new(k);
    let target = DeltaBasis::new(2 * k);
    let q = curve.q();
    let elems = basis.elements();
    let n = basis.len();
    let gens = spec.generators();
    let mut slice = GramSlice::new(vec![n], gens.len());
    let nu = slice.num_unknowns();
    let mut rows = vec![vec![0.0; nu]; target.len()];
    for i in 0..n {
        for j in i..n {
            let c = target
                .coords(&elem_mul(&elems[i], &elems[j], &q))
                .expect("product stays in degree 2k");
            let w = if i == j { 1.0 } else { 2.0 };
            let col = slice.entry(0, i, j);
            for (u, cu) in c.iter().enumerate() {
                rows[u][col] += w * cu;
            }
        }
    }
    for (g, gen) in gens.iter().enumerate() {
        let c = target.coords(&gen.to_elem()).expect("generator within order");
        let col = slice.free_var(g);
        for (u, cu) in c.iter().enumerate() {
            rows[u][col] -= cu;
        }
    }
    for row in rows {
        slice.push_row(row, 0.0);
    }
    let mut norm = vec![0.0; nu];
    norm[slice.free_var(0)] = 1.0;
    for (g, &cv) in coords.iter().enumerate() {
        norm[slice.free_var(g + 1)] = cv;
    }
    slice.push_row(norm, -1.0);

    let opts = SdpOptions {
        stop_on_sign: true,
        ..SdpOptions::default()
    };
    let sol = slice.solve(&opts);
    Ok(match sol.status {
        SdpStatus::Feasible => {
            let f = gens
                .iter()
                .zip(&sol.free)
                .fold(CurveElem::zero(), |acc, (g, &c)| acc.add(&g.to_elem().scale(c)));
            Separation::Certificate {
                f,
                coeffs: sol.free,
                gram: sol.grams[0].clone(),
                margin: sol.margin,
            }
        }
        SdpStatus::Infeasible => Separation::Inside,
        _ => Separation::Indeterminate { margin: sol.margin },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HullRow {
    pub direction: (f64, f64),
    pub value: f64,
    pub optimizer: (f64, f64),
}

/// Support values in `n_dirs` directions `(cos 2πi/n, sin 2πi/n)`.
pub fn hull_boundary(p: &MomentPencil, n_dirs: usize) -> Result<Vec<HullRow>, LasserreError> {
    if p.num_coords() != 2 {
        return Err(LasserreError::CoordinateCount {
            expected: 2,
            found: p.num_coords(),
        });
    }
    assert!(n_dirs >= 3, "need at least three directions");
    (0..n_dirs).map(|i| hull_row(p, i, n_dirs)).collect()
}

/// One row of [`hull_boundary`]; independent rows may be computed in parallel.
pub fn hull_row(p: &MomentPencil, i: usize, n_dirs: usize) -> Result<HullRow, LasserreError> {
    let t = 2.0 * std::f64::consts::PI * i as f64 / n_dirs as f64;
    let (mut dx, mut dy) = (t.cos(), t.sin());
    // exact axis directions keep the symmetric cases exact
    for v in [&mut dx, &mut dy] {
        if v.abs() < 1e-15 {
            *v = 0.0;
        }
    }
    let s = support(p, &[dx, dy])?;
    Ok(HullRow {
        direction: (dx, dy),
        value: s.value,
        optimizer: (s.coords[0], s.coords[1]),
    })
}

/// Vertices of the polygon `∩ {z : <d_i, z> <= v_i}` for directions sorted by
/// angle, from consecutive half-plane intersections.
pub fn outer_polygon(rows: &[HullRow]) -> Vec<(f64, f64)> {
    let n = rows.len();
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        let a = &rows[i];
        let b = &rows[(i + 1) % n];
        let (a1, a2, b1, b2) = (a.direction.0, a.direction.1, b.direction.0, b.direction.1);
        let det = a1 * b2 - a2 * b1;
        if det.abs() < 1e-14 {
            continue;
        }
        let x = (a.value * b2 - a2 * b.value) / det;
        let y = (a1 * b.value - a.value * b1) / det;
        pts.push((x, y));
    }
    pts
}

/// Shoelace area.
pub fn polygon_area(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        let (x1, y1) = pts[i];
        let (x2, y2) = pts[(i + 1) % n];
        s += x1 * y2 - x2 * y1;
    }
    0.5 * s.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::sample_real_points;
    use crate::poly::Poly;

    /// `x^4 + A x^2 + B`
    fn even_quartic(a2: f64, b0: f64) -> Poly {
        Poly::new(vec![b0, 0.0, a2, 0.0, 1.0])
    }

    fn eight() -> CurveParams {
        CurveParams::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn spec_parsing() {
        let s: SubspaceSpec = "1,x,y".parse().unwrap();
        assert_eq!(s, SubspaceSpec::plane());
        assert_eq!(s.to_string(), "1,x,y");
        assert!("x,1".parse::<SubspaceSpec>().is_err());
        assert!("1,x,x".parse::<SubspaceSpec>().is_err());
        assert!("1,z".parse::<SubspaceSpec>().is_err());
    }

    #[test]
    fn four_by_four_structure() {
        for b in [0.5, 1.0, 2.0, 3.5] {
            let c = CurveParams::new(0.0, b).unwrap();
            assert_eq!(c.q(), even_quartic(b - 1.0, -b));
            let p = build_pencil(&c, &SubspaceSpec::plane(), 2).unwrap();
            assert_eq!(p.size(), 4);
            assert_eq!(p.num_lifted(), 5);
            assert_eq!(p.labels(), &["x", "y", "u2", "u3", "u4", "v1", "v2"]);
            let e = p.entry(3, 3);
            let u2 = p.labels().iter().position(|l| l == "u2").unwrap();
            let u4 = p.labels().iter().position(|l| l == "u4").unwrap();
            // -B - A u2 - u4
            assert_eq!(e.constant, b);
            assert_eq!(e.coeffs[u2], -(b - 1.0));
            assert_eq!(e.coeffs[u4], -1.0);
            assert_eq!(e.coeffs.iter().filter(|c| **c != 0.0).count(), if b == 1.0 { 1 } else { 2 });
        }
    }

    #[test]
    fn lifted_count_is_4k_minus_3() {
        for k in 2..7 {
            let p = build_pencil(&eight(), &SubspaceSpec::plane(), k).unwrap();
            assert_eq!(p.num_lifted(), 4 * k - 3);
            assert_eq!(p.size(), 2 * k);
        }
        let p = build_pencil(&eight(), &"1,x,x*y".parse().unwrap(), 3).unwrap();
        assert_eq!((p.size(), p.num_coords(), p.num_lifted()), (6, 2, 9));
        assert!(matches!(
            build_pencil(&eight(), &"1,x,x^3".parse().unwrap(), 2),
            Err(LasserreError::GeneratorOutOfRange { .. })
        ));
    }

    #[test]
    fn substitution_is_rank_one() {
        let p = build_pencil(&eight(), &SubspaceSpec::plane(), 2).unwrap();
        let v = moment_substitution(&p, RealPoint { x: 1.0, y: 0.0 }).unwrap();
        let m = p.eval(&v);
        let e = [1.0, 1.0, 1.0, 0.0];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.get(i, j), e[i] * e[j]);
            }
        }
        assert!(moment_substitution(&p, RealPoint { x: 0.5, y: 0.5 }).is_err());
        let p6 = build_pencil(&eight(), &"1,x,x*y".parse().unwrap(), 3).unwrap();
        let m = p6.eval(&moment_substitution(&p6, RealPoint { x: 0.0, y: 1.0 }).unwrap());
        let e = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(m.get(i, j), e[i] * e[j]);
            }
        }
    }

    #[test]
    fn membership_examples() {
        let p = build_pencil(&eight(), &SubspaceSpec::plane(), 2).unwrap();
        assert!(matches!(membership(&p, &[0.0, 0.0]).unwrap(), Membership::Inside { .. }));
        assert!(matches!(membership(&p, &[2.0, 0.0]).unwrap(), Membership::Outside { .. }));
        assert!(membership(&p, &[1.0]).is_err());
    }

    #[test]
    fn support_axes() {
        let p = build_pencil(&eight(), &SubspaceSpec::plane(), 2).unwrap();
        let s = support(&p, &[1.0, 0.0]).unwrap();
        assert!((s.value - 1.0).abs() < 1e-6, "{}", s.value);
        let s = support(&p, &[0.0, 1.0]).unwrap();
        assert!((s.value - 1.0).abs() < 1e-6, "{}", s.value);
    }

    #[test]
    fn separation_examples() {
        let c = eight();
        let spec = SubspaceSpec::plane();
        match separation(&c, &spec, 2, &[2.0, 0.0]).unwrap() {
            Separation::Certificate { f, .. } => {
                assert!((f.eval(2.0, 0.0) + 1.0).abs() < 1e-8);
                for pt in sample_real_points(&c, 1000).unwrap() {
                    assert!(f.eval(pt.x, pt.y) >= -1e-9);
                }
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(separation(&c, &spec, 2, &[0.0, 0.0]).unwrap(), Separation::Inside);
        assert!(!matches!(
            separation(&c, &spec, 2, &[1.0, 0.0]).unwrap(),
            Separation::Certificate { .. }
        ));
    }

    #[test]
    fn polygon_helpers() {
        let rows: Vec<HullRow> = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
            .iter()
            .map(|&d| HullRow {
                direction: d,
                value: 1.0,
                optimizer: d,
            })
            .collect();
        let poly = outer_polygon(&rows);
        assert_eq!(poly.len(), 4);
        assert!((polygon_area(&poly) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn render_forms() {
        let labels = vec!["x".to_string(), "u2".to_string()];
        let f = LinearForm {
            constant: 1.0,
            coeffs: vec![0.0, -1.0],
        };
        assert_eq!(f.render(&labels), "1 - u2");
        let f = LinearForm {
            constant: 0.0,
            coeffs: vec![-2.0, 1.0],
        };
        assert_eq!(f.render(&labels), "-2*x + u2");
    }
}
