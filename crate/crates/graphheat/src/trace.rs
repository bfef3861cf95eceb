//! Heat-trace identities: the cycle expansion of the global trace, the
//! edge-localized trace formula, integrated small-time asymptotics, and
//! the eigenvalue-counting envelope.
//!
//! The global trace of the heat semigroup decomposes as
//!
//! ```text
//!   sum_j e^{-lambda_j t} = L (4 pi t)^{-1/2} + (V - E)/2
//!       + (4 pi t)^{-1/2} sum_{primitive gamma} sum_{k>=1}
//!           coeff(gamma, k) len(gamma) e^{-(k len(gamma))^2 / 4t}
//! ```
//!
//! with `coeff(gamma, k)` the cyclic scattering product of the k-fold
//! iterate, i.e. `alpha_cyc(gamma)^k`.  The alternative reading that
//! keeps `alpha_cyc(gamma)` for every iterate is provided for
//! comparison; the iterate-power reading is the one that matches
//! eigenvalue traces (see [`RothComparison`]).

use crate::graph::{EdgeId, MetricGraph};
use crate::heat::{self, HeatError, Truncation};
use crate::ksum::Neumaier;
use crate::paths::{self, PathError};
use crate::quad;
use crate::spectral::{EigenBasis, Spectrum};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// `sum_j e^{-lambda_j t}` over the computed part of a spectrum.
pub fn eigen_trace(spec: &Spectrum, t: f64) -> f64 {
    let mut acc = Neumaier::new();
    for level in &spec.levels {
        acc.add(level.multiplicity as f64 * (-level.lambda * t).exp());
    }
    acc.value()
}

/// Components of the cycle-expansion trace.
#[derive(Debug, Clone, Copy)]
pub struct RothTrace {
    /// Full right-hand side: leading + constant + cycle sum.
    pub value: f64,
    /// `L (4 pi t)^{-1/2}`.
    pub leading: f64,
    /// `(V - E)/2` of the original graph.
    pub constant: f64,
    /// `(4 pi t)^{-1/2}` times the weighted cycle sum.
    pub cycle_term: f64,
}

fn cycle_sum(
    cycles: &[paths::CycleClass],
    t: f64,
    l_max: f64,
    iterate_power: bool,
) -> f64 {
    let mut acc = Neumaier::new();
    for c in cycles {
        let mut k = 1u32;
        loop {
            let len = f64::from(k) * c.length;
            if len > l_max {
                break;
            }
            let coeff = if iterate_power {
                c.coefficient.powi(k as i32)
            } else {
                c.coefficient
            };
            acc.add(coeff * c.length * (-len * len / (4.0 * t)).exp());
            k += 1;
        }
    }
    acc.value()
}

/// Heat trace by the cycle expansion, truncated at iterate length
/// `l_max`.
pub fn roth_trace(g: &MetricGraph, t: f64, l_max: f64) -> Result<RothTrace, PathError> {
    if !(t > 0.0) {
        return Err(PathError::InvalidTime(t));
    }
    let cycles = paths::enumerate_primitive_cycles(g, l_max)?;
    Ok(roth_trace_from_cycles(g, &cycles, t, l_max))
}

/// Same, reusing an already-enumerated primitive-cycle list.
pub fn roth_trace_from_cycles(
    g: &MetricGraph,
    cycles: &[paths::CycleClass],
    t: f64,
    l_max: f64,
) -> RothTrace {
    let prefactor = 1.0 / (FOUR_PI * t).sqrt();
    let leading = g.total_length() * prefactor;
    let constant =
        0.5 * (g.original_vertex_count() as f64 - g.original_edge_count() as f64);
    let cycle_term = prefactor * cycle_sum(cycles, t, l_max, true);
    RothTrace {
        value: leading + constant + cycle_term,
        leading,
        constant,
        cycle_term,
    }
}

/// Difference between the two readings of the iterate coefficient,
/// evaluated against an eigenvalue trace.
#[derive(Debug, Clone, Copy)]
pub struct RothComparison {
    /// Max abs error of the iterate-power reading over the grid.
    pub iterate_power_error: f64,
    /// Max abs error of the constant-coefficient reading.
    pub printed_error: f64,
}

/// Compare both iterate-coefficient readings against an eigenvalue
/// trace over a time grid.
pub fn roth_reading_comparison(
    g: &MetricGraph,
    spec: &Spectrum,
    ts: &[f64],
    l_max: f64,
) -> Result<RothComparison, PathError> {
    let cycles = paths::enumerate_primitive_cycles(g, l_max)?;
    let mut power_err = 0.0f64;
    let mut printed_err = 0.0f64;
    for &t in ts {
        let reference = eigen_trace(spec, t);
        let prefactor = 1.0 / (FOUR_PI * t).sqrt();
        let base = g.total_length() * prefactor
            + 0.5 * (g.original_vertex_count() as f64 - g.original_edge_count() as f64);
        let with_power = base + prefactor * cycle_sum(&cycles, t, l_max, true);
        let printed = base + prefactor * cycle_sum(&cycles, t, l_max, false);
        power_err = power_err.max((with_power - reference).abs());
        printed_err = printed_err.max((printed - reference).abs());
    }
    Ok(RothComparison {
        iterate_power_error: power_err,
        printed_error: printed_err,
    })
}

/// Fit of the constant term: mean over the grid of
/// `eigen trace - leading - cycle term`; recovers `(V - E)/2`.
pub fn roth_constant_fit(
    g: &MetricGraph,
    spec: &Spectrum,
    ts: &[f64],
    l_max: f64,
) -> Result<f64, PathError> {
    let cycles = paths::enumerate_primitive_cycles(g, l_max)?;
    let mut acc = Neumaier::new();
    for &t in ts {
        let prefactor = 1.0 / (FOUR_PI * t).sqrt();
        let leading = g.total_length() * prefactor;
        let cycle_term = prefactor * cycle_sum(&cycles, t, l_max, true);
        acc.add(eigen_trace(spec, t) - leading - cycle_term);
    }
    Ok(acc.value() / ts.len() as f64)
}

/// Two sides of the edge trace formula on a time grid.
#[derive(Debug, Clone)]
pub struct EdgeTraceReport {
    pub ts: Vec<f64>,
    /// `1/2 sum_j e^{-lambda_j t} b_j(e)^2`.
    pub lhs: Vec<f64>,
    /// `(4 pi t)^{-1/2} sum over anchored closed paths`.
    pub rhs: Vec<f64>,
    /// `lhs - rhs`, constant in `t` by the edge trace formula.
    pub difference: Vec<f64>,
    /// Estimated constant: mean of the difference over the largest-t
    /// half of the grid, where the path-sum truncation error is smallest.
    pub c_e: f64,
    /// `max_t |difference - c_e|`: the certified constancy defect.
    pub max_deviation: f64,
    /// Largest centered time-derivative of the difference on the grid.
    pub max_dt_difference: f64,
}

/// Evaluate both sides of the edge trace formula for edge `e`: the
/// spectral side from the first `m_terms` eigenfunctions of `basis`,
/// the geometric side from closed paths anchored to `e` up to length
/// `l_max`.
pub fn edge_trace_sides(
    g: &MetricGraph,
    e: EdgeId,
    ts: &[f64],
    l_max: f64,
    basis: &EigenBasis,
    m_terms: usize,
) -> Result<EdgeTraceReport, PathError> {
    let m = m_terms.min(basis.functions.len());
    let anchored = paths::enumerate_edge_closed_paths(g, e, l_max)?;
    let mut terms: Vec<(f64, f64)> = anchored
        .iter()
        .map(|c| (c.length, c.coefficient))
        .collect();
    terms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut ts_sorted = ts.to_vec();
    ts_sorted.sort_by(f64::total_cmp);
    let mut lhs = Vec::with_capacity(ts_sorted.len());
    let mut rhs = Vec::with_capacity(ts_sorted.len());
    for &t in &ts_sorted {
        let mut acc = Neumaier::new();
        for f in &basis.functions[..m] {
            let b = f.amps[e.0].b;
            acc.add(0.5 * b * b * (-f.lambda * t).exp());
        }
        lhs.push(acc.value());
        let mut geo = Neumaier::new();
        for &(len, coeff) in &terms {
            geo.add(coeff * (-len * len / (4.0 * t)).exp());
        }
        rhs.push(geo.value() / (FOUR_PI * t).sqrt());
    }
    let difference: Vec<f64> = lhs.iter().zip(&rhs).map(|(l, r)| l - r).collect();
    let top_half = &difference[difference.len() / 2..];
    let c_e = top_half.iter().sum::<f64>() / top_half.len() as f64;
    let max_deviation = difference
        .iter()
        .map(|d| (d - c_e).abs())
        .fold(0.0, f64::max);
    let mut max_dt = 0.0f64;
    for i in 1..difference.len().saturating_sub(1) {
        let dt = (difference[i + 1] - difference[i - 1]) / (ts_sorted[i + 1] - ts_sorted[i - 1]);
        max_dt = max_dt.max(dt.abs());
    }
    Ok(EdgeTraceReport {
        ts: ts_sorted,
        lhs,
        rhs,
        difference,
        c_e,
        max_deviation,
        max_dt_difference: max_dt,
    })
}

/// Evaluate a polynomial given by ascending coefficients.
fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn poly_derivative_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * x + k as f64 * c)
}

fn poly_integral(coeffs: &[f64], len: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| c * len.powi(k as i32 + 1) / (k as f64 + 1.0))
        .sum()
}

/// Quadrature values of `int f h` and `int f dh/dx` over an edge against
/// their small-time predictions.
#[derive(Debug, Clone, Copy)]
pub struct IntegratedAsymptotics {
    pub value_h: f64,
    pub predicted_h: f64,
    pub residual_h: f64,
    pub value_dxh: f64,
    pub predicted_dxh: f64,
    pub residual_dxh: f64,
}

/// Integrate the diagonal kernel and its x-derivative against the
/// polynomial `f` (ascending coefficients) over edge `e` and report the
/// small-time predictions
///
/// ```text
///   int f h    ~ (4 pi t)^{-1/2} int f + (2/d0 - 1) f(0)/4 + (2/d1 - 1) f(a)/4
///   int f h_x  ~ (4 pi t)^{-1/2} [ (2/d1 - 1) f(a) - (2/d0 - 1) f(0) ]
///                 + (1 - 2/d0) f'(0)/4 + (1 - 2/d1) f'(a)/4
/// ```
///
/// The predictions hold up to `O(sqrt(t))` boundary-layer corrections
/// (carrying `f'` and `f''` factors), so residuals shrink as `t` drops.
pub fn integrated_asymptotics(
    g: &MetricGraph,
    e: EdgeId,
    f_coeffs: &[f64],
    t: f64,
    trunc: Truncation,
    quad_tol: f64,
) -> Result<IntegratedAsymptotics, HeatError> {
    let a = g.edge_length(e);
    let (v0, v1) = g.edge_endpoints(e);
    let d0 = g.degree(v0) as f64;
    let d1 = g.degree(v1) as f64;
    let profile = heat::edge_profile(g, t, e, trunc)?;
    let value_h = quad::integrate(|x| poly_eval(f_coeffs, x) * profile.value(x), a, quad_tol);
    let value_dxh = quad::integrate(|x| poly_eval(f_coeffs, x) * profile.dx(x), a, quad_tol);

    let f0 = poly_eval(f_coeffs, 0.0);
    let fa = poly_eval(f_coeffs, a);
    let df0 = poly_derivative_eval(f_coeffs, 0.0);
    let dfa = poly_derivative_eval(f_coeffs, a);
    let prefactor = 1.0 / (FOUR_PI * t).sqrt();
    let predicted_h = prefactor * poly_integral(f_coeffs, a)
        + (2.0 / d0 - 1.0) * f0 / 4.0
        + (2.0 / d1 - 1.0) * fa / 4.0;
    let predicted_dxh = prefactor * ((2.0 / d1 - 1.0) * fa - (2.0 / d0 - 1.0) * f0)
        + 0.25 * (1.0 - 2.0 / d0) * df0
        + 0.25 * (1.0 - 2.0 / d1) * dfa;
    Ok(IntegratedAsymptotics {
        value_h,
        predicted_h,
        residual_h: (value_h - predicted_h).abs(),
        value_dxh,
        predicted_dxh,
        residual_dxh: (value_dxh - predicted_dxh).abs(),
    })
}

/// Counting-function envelope report.
#[derive(Debug, Clone, Copy)]
pub struct WeylReport {
    /// `max |N(sigma^2) - (L/pi) sigma|` over the computed range.
    pub max_deviation: f64,
    /// Frequency where the maximum is attained.
    pub at_sigma: f64,
}

/// Check the eigenvalue staircase against the Weyl line `(L/pi) sigma`.
pub fn weyl_count_check(spec: &Spectrum, total_length: f64) -> WeylReport {
    let slope = total_length / std::f64::consts::PI;
    let mut count = 0usize;
    let mut max_deviation = 0.0f64;
    let mut at_sigma = 0.0;
    for level in &spec.levels {
        // Just below the jump and just above it.
        for n in [count, count + level.multiplicity] {
            let dev = (n as f64 - slope * level.sigma).abs();
            if dev > max_deviation {
                max_deviation = dev;
                at_sigma = level.sigma;
            }
        }
        count += level.multiplicity;
    }
    WeylReport {
        max_deviation,
        at_sigma,
    }
}
