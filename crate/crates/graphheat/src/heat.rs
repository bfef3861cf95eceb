//! Heat-kernel evaluation by certified path sums.
//!
//! `H(t, q1, q2) = (4 pi t)^{-1/2} sum_p alpha(p) exp(-len(p)^2 / 4t)`
//! over all paths between the evaluation points.  Enumeration is cut at
//! a length `l_cut`; the omitted tail is covered by
//! [`paths::truncation_bound`], so every value ships with a rigorous
//! error bound.
//!
//! For diagonal evaluations the paths through a point `x` interior to an
//! edge split into two families: paths leaving one way and returning the
//! other, whose lengths do not depend on `x`, and paths returning the
//! way they left, whose lengths are `|2x + c|` with a constant `c` per
//! path.  Only the second family depends on `x`, which yields analytic
//! termwise derivatives: each such Gaussian solves the modified heat
//! equation `(d/dt - 1/4 d^2/dx^2) u = 0` exactly, and the remaining
//! families make `(d/dt - 1/4 d^2/dx^2) h` independent of `x`.

use crate::graph::{BondId, EdgeId, GraphPoint, MetricGraph, VertexId};
use crate::ksum::Neumaier;
use crate::paths::{self, PathError};
use crate::quad;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum HeatError {
    #[error("time must be positive, got {0}")]
    InvalidTime(f64),
    #[error("tolerance {tol} unreachable at t = {t}: {reason}")]
    ToleranceUnreachable { tol: f64, t: f64, reason: String },
    #[error("operation requires an interior edge point")]
    PointAtVertex,
    #[error("points coincide; the off-diagonal constant needs distinct points")]
    CoincidentPoints,
    #[error("t = {t} above the small-time validity threshold {threshold}")]
    AboveSmallTimeThreshold { t: f64, threshold: f64 },
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// How to choose the path-length cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// Grow the cutoff until the certified tail bound drops below `tol`.
    Auto { tol: f64 },
    /// Fixed cutoff; the reported bound may be infinite when the
    /// geometric tail estimate is unavailable at this `t`.
    Fixed { l_cut: f64 },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Auto { tol: 1e-10 }
    }
}

/// Kernel value with its certified truncation bound (units 1/length).
/// Refining the cutoff keeps later values within `value +- bound`.
#[derive(Debug, Clone, Copy)]
pub struct KernelValue {
    pub value: f64,
    pub bound: f64,
    pub t: f64,
}

fn check_time(t: f64) -> Result<(), HeatError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(HeatError::InvalidTime(t))
    }
}

/// Resolve a truncation request into `(l_cut, certified bound)`.
fn resolve_truncation(
    g: &MetricGraph,
    t: f64,
    trunc: Truncation,
) -> Result<(f64, f64), HeatError> {
    match trunc {
        Truncation::Fixed { l_cut } => {
            if !(l_cut >= 0.0) {
                return Err(PathError::NegativeLengthCut(l_cut).into());
            }
            let bound = paths::truncation_bound(g, t, l_cut).unwrap_or(f64::INFINITY);
            Ok((l_cut, bound))
        }
        Truncation::Auto { tol } => {
            if !(tol > 0.0) {
                return Err(HeatError::ToleranceUnreachable {
                    tol,
                    t,
                    reason: "tolerance must be positive".into(),
                });
            }
            let prefactor = 12.0 / (FOUR_PI * t).sqrt();
            let mut l_cut = (4.0 * t * (prefactor / tol).max(std::f64::consts::E).ln())
                .sqrt()
                .max(2.0 * g.min_original_edge_length());
            for _ in 0..200 {
                match paths::truncation_bound(g, t, l_cut) {
                    Ok(bound) if bound <= tol => return Ok((l_cut, bound)),
                    Ok(_) => l_cut *= 1.25,
                    Err(e) => {
                        return Err(HeatError::ToleranceUnreachable {
                            tol,
                            t,
                            reason: e.to_string(),
                        })
                    }
                }
            }
            Err(HeatError::ToleranceUnreachable {
                tol,
                t,
                reason: "cutoff growth did not converge".into(),
            })
        }
    }
}

/// Sum Gaussian path terms.  Terms are ordered by (length, coefficient)
/// before compensated accumulation, so path sets that agree as
/// multisets (for instance a path family and its reversal) sum to
/// bit-identical values.
fn gaussian_sum(terms: &mut Vec<(f64, f64)>, t: f64) -> f64 {
    terms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut acc = Neumaier::new();
    for &(len, alpha) in terms.iter() {
        acc.add(alpha * (-len * len / (4.0 * t)).exp());
    }
    acc.value() / (FOUR_PI * t).sqrt()
}

/// Heat kernel `H(t, q1, q2)` with certified truncation error.
pub fn heat_kernel(
    g: &MetricGraph,
    t: f64,
    q1: GraphPoint,
    q2: GraphPoint,
    trunc: Truncation,
) -> Result<KernelValue, HeatError> {
    check_time(t)?;
    let (l_cut, bound) = resolve_truncation(g, t, trunc)?;
    let en = paths::enumerate_paths(g, q1, q2, l_cut)?;
    let mut terms: Vec<(f64, f64)> = en.paths.iter().map(|p| (p.length, p.alpha)).collect();
    Ok(KernelValue {
        value: gaussian_sum(&mut terms, t),
        bound,
        t,
    })
}

/// Diagonal heat kernel `h(t, q) = H(t, q, q)`.
pub fn heat_diagonal(
    g: &MetricGraph,
    t: f64,
    q: GraphPoint,
    trunc: Truncation,
) -> Result<KernelValue, HeatError> {
    heat_kernel(g, t, q, q, trunc)
}

/// Classified diagonal path data on an edge, reusable across evaluation
/// points of that edge.
///
/// Enumerated once at an anchor point; term lengths are either constant
/// in `x` or of the form `|2x + c|`, so a single enumeration serves the
/// whole edge.  The extra margin in the enumeration cutoff keeps the
/// term set complete (up to the certified `l_cut`) for every `x` in
/// `[0, len]`, endpoints included: each term extends continuously to the
/// vertex, where the regrouped sum is the vertex path sum.
#[derive(Debug, Clone)]
pub struct EdgeProfile {
    /// (length, alpha) of x-independent terms, the trivial path included.
    pub through: Vec<(f64, f64)>,
    /// (c, alpha) of returning terms, contributing `alpha e^{-(2x+c)^2/4t}`.
    pub returning: Vec<(f64, f64)>,
    pub edge_len: f64,
    pub l_cut: f64,
    pub bound: f64,
    pub t: f64,
}

/// Build the diagonal profile of an edge.
pub fn edge_profile(
    g: &MetricGraph,
    t: f64,
    e: EdgeId,
    trunc: Truncation,
) -> Result<EdgeProfile, HeatError> {
    check_time(t)?;
    let (l_cut, bound) = resolve_truncation(g, t, trunc)?;
    let a = g.edge_length(e);
    let x0 = 0.5 * a;
    let en = paths::enumerate_paths(
        g,
        GraphPoint::new(e, x0),
        GraphPoint::new(e, x0),
        l_cut + a + 1e-9,
    )?;
    let toward_zero = BondId(2 * e.0 + 1);
    debug_assert_eq!(en.graph.bond_tail(toward_zero), en.source);
    let mut through = Vec::new();
    let mut returning = Vec::new();
    for p in &en.paths {
        if p.bonds.is_empty() {
            through.push((0.0, p.alpha));
            continue;
        }
        let first = p.bonds[0];
        let last = *p.bonds.last().unwrap();
        if last == first.reverse() {
            // Length is |2x + c|: +2x when leaving toward x = 0,
            // -2x (plus a constant) when leaving the other way.
            let c = if first == toward_zero {
                p.length - 2.0 * x0
            } else {
                -p.length - 2.0 * x0
            };
            returning.push((c, p.alpha));
        } else {
            through.push((p.length, p.alpha));
        }
    }
    Ok(EdgeProfile {
        through,
        returning,
        edge_len: a,
        l_cut,
        bound,
        t,
    })
}

impl EdgeProfile {
    /// Diagonal kernel value at coordinate `x` on the profiled edge.
    pub fn value(&self, x: f64) -> f64 {
        let mut terms: Vec<(f64, f64)> = Vec::with_capacity(self.through.len() + self.returning.len());
        terms.extend_from_slice(&self.through);
        for &(c, alpha) in &self.returning {
            terms.push(((2.0 * x + c).abs(), alpha));
        }
        gaussian_sum(&mut terms, self.t)
    }

    /// Same value at a different time; the enumerated term set must stay
    /// adequate, so only use nearby times (finite-difference stencils).
    fn value_at(&self, t: f64, x: f64) -> f64 {
        let mut terms: Vec<(f64, f64)> = Vec::with_capacity(self.through.len() + self.returning.len());
        terms.extend_from_slice(&self.through);
        for &(c, alpha) in &self.returning {
            terms.push(((2.0 * x + c).abs(), alpha));
        }
        gaussian_sum(&mut terms, t)
    }

    /// Analytic `d/dx` of the diagonal kernel: only returning terms
    /// depend on `x`.
    pub fn dx(&self, x: f64) -> f64 {
        self.dx_at(self.t, x)
    }

    fn dx_at(&self, t: f64, x: f64) -> f64 {
        let mut terms: Vec<(f64, f64, f64)> = self
            .returning
            .iter()
            .map(|&(c, alpha)| {
                let u = 2.0 * x + c;
                (u.abs(), alpha, u)
            })
            .collect();
        terms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut acc = Neumaier::new();
        for &(_, alpha, u) in &terms {
            acc.add(alpha * (-u / t) * (-u * u / (4.0 * t)).exp());
        }
        acc.value() / (FOUR_PI * t).sqrt()
    }

    /// Analytic `d/dt` of the diagonal kernel.
    fn dt(&self, x: f64) -> f64 {
        let t = self.t;
        let mut acc = Neumaier::new();
        let mut push = |len: f64, alpha: f64| {
            acc.add(alpha * (-0.5 / t + len * len / (4.0 * t * t)) * (-len * len / (4.0 * t)).exp());
        };
        for &(len, alpha) in &self.through {
            push(len, alpha);
        }
        for &(c, alpha) in &self.returning {
            push((2.0 * x + c).abs(), alpha);
        }
        acc.value() / (FOUR_PI * t).sqrt()
    }

    /// Analytic `d^2/dx^2` of the diagonal kernel.
    fn dxx(&self, x: f64) -> f64 {
        let t = self.t;
        let mut acc = Neumaier::new();
        for &(c, alpha) in &self.returning {
            let u = 2.0 * x + c;
            acc.add(alpha * (-2.0 / t + u * u / (t * t)) * (-u * u / (4.0 * t)).exp());
        }
        acc.value() / (FOUR_PI * t).sqrt()
    }

    /// `(d/dt - 1/4 d^2/dx^2) h` by termwise analytic derivatives.  The
    /// returning terms cancel exactly, leaving the x-independent family.
    pub fn heat_source(&self, x: f64) -> f64 {
        self.dt(x) - 0.25 * self.dxx(x)
    }

    /// Analytic residual of the modified heat equation satisfied by
    /// `d/dx h`; zero up to rounding by construction.
    pub fn dxh_equation_residual_analytic(&self, x: f64) -> f64 {
        let t = self.t;
        let mut acc = Neumaier::new();
        for &(c, alpha) in &self.returning {
            let u = 2.0 * x + c;
            let gauss = (-u * u / (4.0 * t)).exp();
            // d/dt of the derivative term.
            let dt_term = alpha * u * (1.5 / (t * t) - u * u / (4.0 * t * t * t)) * gauss;
            // 1/4 d^3/dx^3 of the kernel term.
            let dxxx_term = alpha * (6.0 * u / (t * t) - u * u * u / (t * t * t)) * gauss / 4.0;
            acc.add(dt_term - dxxx_term);
        }
        acc.value() / (FOUR_PI * t).sqrt()
    }

    /// Residual of the same equation with the outer operator applied by
    /// finite differences to the analytic `d/dx h`.
    pub fn dxh_equation_residual_fd(&self, x: f64) -> f64 {
        let t = self.t;
        let ht = 4e-6 * t;
        let dt_fd = (self.dx_at(t + ht, x) - self.dx_at(t - ht, x)) / (2.0 * ht);
        let hx = 4.5e-3 * t.sqrt();
        let dxx_fd = second_derivative(|y| self.dx(y), x, hx);
        dt_fd - 0.25 * dxx_fd
    }

    /// `(d/dt - 1/4 d^2/dx^2) h` with both derivatives by finite
    /// differences, as an independent check of [`Self::heat_source`].
    pub fn heat_source_fd(&self, x: f64) -> f64 {
        let t = self.t;
        let ht = 4e-6 * t;
        let dt_fd = (self.value_at(t + ht, x) - self.value_at(t - ht, x)) / (2.0 * ht);
        let hx = 4.5e-3 * t.sqrt();
        let dxx_fd = second_derivative(|y| self.value(y), x, hx);
        dt_fd - 0.25 * dxx_fd
    }
}

/// Fourth-order five-point second derivative.
fn second_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
        / (12.0 * h * h)
}

/// Sampled diagonal values on one edge for a list of times.
#[derive(Debug, Clone)]
pub struct GridTable {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    /// `values[i][j]` is `h(ts[j], x_i)` with its certified bound.
    pub values: Vec<Vec<KernelValue>>,
}

/// Diagonal kernel on `samples + 1` equispaced points of an edge, one
/// column per time.  Rows are evaluated in parallel; the result is
/// independent of scheduling because each entry has a fixed summation
/// order.
pub fn heat_diagonal_grid(
    g: &MetricGraph,
    ts: &[f64],
    e: EdgeId,
    samples: usize,
    trunc: Truncation,
) -> Result<GridTable, HeatError> {
    use rayon::prelude::*;
    let a = g.edge_length(e);
    let n = samples.max(1);
    let xs: Vec<f64> = (0..=n).map(|i| a * i as f64 / n as f64).collect();
    let profiles: Vec<EdgeProfile> = ts
        .iter()
        .map(|&t| edge_profile(g, t, e, trunc))
        .collect::<Result<_, _>>()?;
    let values: Vec<Vec<KernelValue>> = xs
        .par_iter()
        .map(|&x| {
            profiles
                .iter()
                .map(|p| KernelValue {
                    value: p.value(x),
                    bound: p.bound,
                    t: p.t,
                })
                .collect()
        })
        .collect();
    Ok(GridTable {
        xs,
        ts: ts.to_vec(),
        values,
    })
}

fn small_time_threshold(g: &MetricGraph) -> f64 {
    let a0 = g.min_original_edge_length();
    let m = g.original_edge_count() as f64;
    0.9 * a0 * a0 / (2.0 * m.max(2.0).ln())
}

/// Nearest non-artificial vertex to a point and the distance to it.
fn nearest_true_vertex(g: &MetricGraph, q: GraphPoint) -> Result<(VertexId, f64), HeatError> {
    let (g2, vq, _) = g.insert_point_vertex(q)?;
    let mut best: Option<(VertexId, f64)> = None;
    for v in g2.vertex_ids() {
        if g2.is_artificial(v) {
            continue;
        }
        let d = if v == vq {
            0.0
        } else {
            g2.vertex_distance(v, vq)
        };
        if best.map_or(true, |(_, bd)| d < bd) {
            best = Some((v, d));
        }
    }
    Ok(best.expect("graph has true vertices"))
}

/// Leading small-time form of the diagonal kernel:
/// `(4 pi t)^{-1/2} [ 1 + (2/d0 - 1) e^{-dist(q, v0)^2 / t} ]` with `v0`
/// the nearest non-artificial vertex.  Valid below the module threshold
/// `0.9 a0^2 / (2 ln max(m, 2))`; the neglected paths contribute
/// `O(m e^{-a0^2/4t})` relative.
pub fn small_time_approx(g: &MetricGraph, t: f64, q: GraphPoint) -> Result<f64, HeatError> {
    check_time(t)?;
    let threshold = small_time_threshold(g);
    if t > threshold {
        return Err(HeatError::AboveSmallTimeThreshold { t, threshold });
    }
    let (v0, dist) = nearest_true_vertex(g, q)?;
    let d0 = g_degree_nonartificial(g, v0);
    Ok((1.0 + (2.0 / d0 - 1.0) * (-dist * dist / t).exp()) / (FOUR_PI * t).sqrt())
}

fn g_degree_nonartificial(g: &MetricGraph, v: VertexId) -> f64 {
    // Subdivision never changes the degree of a pre-existing vertex.
    g.degree(v) as f64
}

/// Quadratic-in-`x` vertex expansion of the diagonal kernel near the
/// nearest vertex: `(4 pi t)^{-1/2} [ 2/d0 + ((d0 - 2)/d0) x^2/t ]`,
/// for `x` up to about `sqrt(t)`.
pub fn vertex_taylor(g: &MetricGraph, t: f64, q: GraphPoint) -> Result<f64, HeatError> {
    check_time(t)?;
    let (v0, x) = nearest_true_vertex(g, q)?;
    let d0 = g_degree_nonartificial(g, v0);
    Ok((2.0 / d0 + (d0 - 2.0) / d0 * x * x / t) / (FOUR_PI * t).sqrt())
}

/// Sum of path coefficients over the minimal paths joining two distinct
/// points; the constant `c` in the off-diagonal small-time asymptotic
/// `sqrt(4 pi t) e^{d^2/4t} H(t, q1, q2) -> c`.
pub fn off_diagonal_constant(
    g: &MetricGraph,
    q1: GraphPoint,
    q2: GraphPoint,
) -> Result<f64, HeatError> {
    let d = g.distance(q1, q2)?;
    if d == 0.0 {
        return Err(HeatError::CoincidentPoints);
    }
    let slack = 1e-9 * (1.0 + d);
    let en = paths::enumerate_paths(g, q1, q2, d + slack)?;
    let mut acc = Neumaier::new();
    for p in &en.paths {
        if (p.length - d).abs() <= slack {
            acc.add(p.alpha);
        }
    }
    Ok(acc.value())
}

/// Analytic `d/dx` of the diagonal kernel at an interior point of an
/// edge, by termwise differentiation of the returning path family.
pub fn dx_heat_diagonal(
    g: &MetricGraph,
    t: f64,
    e: EdgeId,
    x: f64,
    trunc: Truncation,
) -> Result<f64, HeatError> {
    let a = g.edge_length(e);
    let snap = 1e-12 * a.max(1.0);
    if x <= snap || x >= a - snap {
        return Err(HeatError::PointAtVertex);
    }
    let profile = edge_profile(g, t, e, trunc)?;
    Ok(profile.dx(x))
}

/// Residuals certifying the modified heat equation satisfied by the
/// diagonal kernel on an edge.
#[derive(Debug, Clone, Copy)]
pub struct PdeResidual {
    /// `(d/dt - 1/4 d^2/dx^2) d/dx h` by termwise analytic derivatives.
    pub dxh_residual_analytic: f64,
    /// Same, outer operator by finite differences on the analytic `d/dx h`.
    pub dxh_residual_fd: f64,
    /// Agreement `|analytic d/dx h - central difference of h|`.
    pub dxh_fd_agreement: f64,
    /// Spread of the analytic `(d/dt - 1/4 d^2/dx^2) h` across the edge.
    pub source_x_variation_analytic: f64,
    /// Spread of the finite-difference version across the edge.
    pub source_x_variation_fd: f64,
}

/// Evaluate the heat-equation residuals at `x` (and probe points across
/// the edge for the x-independence checks).
pub fn pde_residual(
    g: &MetricGraph,
    t: f64,
    e: EdgeId,
    x: f64,
    trunc: Truncation,
) -> Result<PdeResidual, HeatError> {
    let a = g.edge_length(e);
    let snap = 1e-12 * a.max(1.0);
    if x <= snap || x >= a - snap {
        return Err(HeatError::PointAtVertex);
    }
    let profile = edge_profile(g, t, e, trunc)?;
    let dxh_residual_analytic = profile.dxh_equation_residual_analytic(x);
    let dxh_residual_fd = profile.dxh_equation_residual_fd(x);

    let hx = (f64::EPSILON).sqrt() * x.abs().max(1.0);
    let dx_fd = (profile.value(x + hx) - profile.value(x - hx)) / (2.0 * hx);
    let dxh_fd_agreement = (profile.dx(x) - dx_fd).abs();

    let mut probes = vec![x, 0.27 * a, 0.54 * a, 0.81 * a];
    probes.dedup_by(|p, q| (*p - *q).abs() < 1e-6 * a);
    let analytic: Vec<f64> = probes.iter().map(|&p| profile.heat_source(p)).collect();
    let fd: Vec<f64> = probes.iter().map(|&p| profile.heat_source_fd(p)).collect();
    let spread = |vals: &[f64]| {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in vals {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        hi - lo
    };
    Ok(PdeResidual {
        dxh_residual_analytic,
        dxh_residual_fd,
        dxh_fd_agreement,
        source_x_variation_analytic: spread(&analytic),
        source_x_variation_fd: spread(&fd),
    })
}

/// Integral of the diagonal kernel over the whole graph, edge by edge,
/// using the x-profile of each edge under composite Gauss-Legendre
/// quadrature.  Within quadrature and truncation error this equals the
/// heat trace.
pub fn integrate_diagonal(
    g: &MetricGraph,
    t: f64,
    trunc: Truncation,
    quad_tol: f64,
) -> Result<f64, HeatError> {
    let mut acc = Neumaier::new();
    for e in g.edge_ids() {
        let profile = edge_profile(g, t, e, trunc)?;
        acc.add(quad::integrate(|x| profile.value(x), g.edge_length(e), quad_tol));
    }
    Ok(acc.value())
}
