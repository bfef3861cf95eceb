//! Self-verification suites over the built-in graph zoo.
//!
//! Every formula the library implements is cross-checked here by an
//! independent route: path sums against eigenfunction expansions and
//! closed forms, cycle expansions against eigenvalue traces, scattering
//! algebra against exact identities, certified bounds against refined
//! sums.  The CLI exposes these as `graphheat verify`; the acceptance
//! test target runs the same checks with pinned tolerances.

use crate::closed_forms::{self, SymmetricGraphData};
use crate::graph::{EdgeId, GraphPoint, MetricGraph, VertexId};
use crate::heat::{self, Truncation};
use crate::ksum::Neumaier;
use crate::paths;
use crate::quad;
use crate::spectral::{self, ClosedFormFamily, SecularOptions};
use crate::trace;
use crate::zoo;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Outcome of one verification check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub graph: String,
    pub passed: bool,
    pub detail: String,
}

/// Options for a verification run.
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Restrict to matching suite names; `None` runs everything.
    pub suites: Option<Vec<String>>,
    /// Perturb one bond-scattering entry by this amount (negative
    /// control: the row-sum check must fail).
    pub fault_beta: Option<f64>,
}

/// Full verification report.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

/// Known suite names, in execution order.
pub const SUITES: [&str; 7] = [
    "graph",
    "scattering",
    "paths",
    "heat",
    "spectral",
    "trace",
    "symmetric",
];

fn result(
    suite: &str,
    name: &str,
    graph: &str,
    passed: bool,
    detail: impl Into<String>,
) -> CheckResult {
    CheckResult {
        suite: suite.into(),
        name: name.into(),
        graph: graph.into(),
        passed,
        detail: detail.into(),
    }
}

/// Run the selected suites over the zoo.
pub fn run(options: &VerifyOptions) -> VerifyReport {
    let wanted = |suite: &str| {
        options
            .suites
            .as_ref()
            .map_or(true, |list| list.iter().any(|s| s == suite))
    };
    let mut jobs: Vec<Box<dyn Fn() -> Vec<CheckResult> + Send + Sync>> = Vec::new();
    if wanted("graph") {
        jobs.push(Box::new(suite_graph));
    }
    if wanted("scattering") {
        let fault = options.fault_beta;
        jobs.push(Box::new(move || suite_scattering(fault)));
    }
    if wanted("paths") {
        jobs.push(Box::new(suite_paths));
    }
    if wanted("heat") {
        jobs.push(Box::new(suite_heat));
    }
    if wanted("spectral") {
        jobs.push(Box::new(suite_spectral));
    }
    if wanted("trace") {
        jobs.push(Box::new(suite_trace));
    }
    if wanted("symmetric") {
        jobs.push(Box::new(suite_symmetric));
    }
    let checks: Vec<CheckResult> = jobs.par_iter().flat_map(|job| job()).collect();
    let passed = checks.iter().all(|c| c.passed);
    VerifyReport { checks, passed }
}

// ---------------------------------------------------------------- graph

fn suite_graph() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (name, g) in zoo::zoo() {
        let total: usize = g.vertex_ids().map(|v| g.degree(v)).sum();
        out.push(result(
            "graph",
            "degree_sum_twice_edges",
            name,
            total == 2 * g.edge_count(),
            format!("sum_deg={total} 2m={}", 2 * g.edge_count()),
        ));
        let involution = g
            .bond_ids()
            .all(|b| b.reverse().reverse() == b && g.bond_tail(b) == g.bond_head(b.reverse()));
        out.push(result(
            "graph",
            "bond_reverse_involution",
            name,
            involution,
            format!("bonds={}", g.bond_count()),
        ));
        // Splitting an edge preserves length statistics and distances.
        let e = EdgeId(0);
        let last = EdgeId(g.edge_count() - 1);
        let p = GraphPoint::new(e, 0.37 * g.edge_length(e));
        let probe_a = GraphPoint::new(e, 0.11 * g.edge_length(e));
        let probe_b = GraphPoint::new(last, 0.6 * g.edge_length(last));
        let before = g.distance(probe_a, probe_b).unwrap();
        let (split, v, remap) = g.insert_point_vertex(p).unwrap();
        let after = split
            .distance(remap.apply(probe_a), remap.apply(probe_b))
            .unwrap();
        let ok = (split.total_length() - g.total_length()).abs()
            <= 1e-14 * g.total_length()
            && split.min_original_edge_length() == g.min_original_edge_length()
            && split.is_artificial(v)
            && split.degree(v) == 2
            && (before - after).abs() < 1e-12 * (1.0 + before);
        out.push(result(
            "graph",
            "artificial_vertex_invisible",
            name,
            ok,
            format!("d(before)={before:.12} d(after)={after:.12}"),
        ));
    }
    let k4 = zoo::k4(1.0).adjacency_matrix();
    let k4_ok = (0..4).all(|i| (0..4).all(|j| k4[(i, j)] == u32::from(i != j)));
    out.push(result("graph", "adjacency_k4", "k4", k4_ok, "A = J - I"));
    let flower = zoo::flower(0.4, 1.0).adjacency_matrix();
    out.push(result(
        "graph",
        "adjacency_flower_loops",
        "flower",
        flower.nrows() == 1 && flower[(0, 0)] == 4,
        format!("A00={}", flower[(0, 0)]),
    ));
    out.push(result(
        "graph",
        "bipartite_classification",
        "-",
        zoo::cube(1.0).is_bipartite()
            && zoo::pumpkin(3, 1.0).is_bipartite()
            && !zoo::k4(1.0).is_bipartite()
            && !zoo::flower(0.4, 1.0).is_bipartite(),
        "cube/pumpkin bipartite, k4/flower not",
    ));
    out
}

// ----------------------------------------------------------- scattering

fn suite_scattering(fault_beta: Option<f64>) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (name, g) in zoo::zoo() {
        let mut s = paths::bond_scattering_matrix(&g);
        if let Some(eps) = fault_beta {
            s[(0, 0)] += eps;
        }
        let mut worst = 0.0f64;
        for col in 0..s.ncols() {
            let sum: f64 = (0..s.nrows()).map(|r| s[(r, col)]).sum();
            worst = worst.max((sum - 1.0).abs());
        }
        out.push(result(
            "scattering",
            "beta_row_sums_one",
            name,
            worst <= 1e-15,
            format!("max|sum-1|={worst:.3e} tol=1e-15"),
        ));
    }
    // Vertex scattering matrices are involutions: (2/d J - I)^2 = I.
    let mut worst = 0.0f64;
    for d in 1..=10usize {
        let df = d as f64;
        for i in 0..d {
            for j in 0..d {
                let mut entry = 0.0;
                for k in 0..d {
                    let sik = 2.0 / df - f64::from(i == k);
                    let skj = 2.0 / df - f64::from(k == j);
                    entry += sik * skj;
                }
                worst = worst.max((entry - f64::from(i == j)).abs());
            }
        }
    }
    out.push(result(
        "scattering",
        "vertex_matrix_involution",
        "-",
        worst <= 1e-15,
        format!("max dev={worst:.3e} d=1..10 tol=1e-15"),
    ));
    out
}

// ---------------------------------------------------------------- paths

fn suite_paths() -> Vec<CheckResult> {
    let mut out = Vec::new();

    // Interval diagonal path set against the image-set oracle.
    let g = zoo::interval(1.0);
    let q = GraphPoint::new(EdgeId(0), 0.3);
    let en = paths::enumerate_paths(&g, q, q, 2.0).unwrap();
    let want = [0.0, 0.6, 1.4, 2.0, 2.0];
    let ok = en.paths.len() == want.len()
        && en
            .paths
            .iter()
            .zip(want)
            .all(|(p, w)| (p.length - w).abs() < 1e-12 && (p.alpha - 1.0).abs() < 1e-15);
    out.push(result(
        "paths",
        "interval_image_multiset",
        "interval",
        ok,
        format!(
            "lengths={:?}",
            en.paths.iter().map(|p| p.length).collect::<Vec<_>>()
        ),
    ));

    // Coefficient range: |alpha| <= 4 (endpoint prefactor at most
    // 4/(d- d+) <= 4, every step weight at most 1 in magnitude).  The
    // bound is attained up to sign: a tip-to-tip bounce on the star
    // carries 4 (2/d - 1).
    let k4 = zoo::k4(1.0);
    let mut ok = true;
    let mut count = 0usize;
    for (g, q1, q2) in [
        (
            &k4,
            GraphPoint::new(EdgeId(0), 0.0),
            GraphPoint::new(EdgeId(5), 1.0),
        ),
        (
            &zoo::star(5, 1.0),
            GraphPoint::new(EdgeId(0), 1.0),
            GraphPoint::new(EdgeId(0), 1.0),
        ),
    ] {
        let en = paths::enumerate_paths(g, q1, q2, 4.0).unwrap();
        ok &= en.paths.iter().all(|p| p.alpha.abs() <= 4.0 + 1e-12);
        count += en.paths.len();
    }
    let star = zoo::star(5, 1.0);
    let tip = GraphPoint::new(EdgeId(0), 1.0);
    let en = paths::enumerate_paths(&star, tip, tip, 2.0).unwrap();
    let bounce = en
        .paths
        .iter()
        .find(|p| (p.length - 2.0).abs() < 1e-12)
        .expect("tip bounce path");
    ok &= (bounce.alpha - 4.0 * (2.0 / 5.0 - 1.0)).abs() < 1e-14;
    out.push(result(
        "paths",
        "alpha_range",
        "k4/star5",
        ok,
        format!("paths={count} tip bounce alpha={}", bounce.alpha),
    ));

    // Anchored closed paths carry the same (length, coefficient) multiset
    // as the through-paths at an interior base point.
    for (name, g, e) in [
        ("interval", zoo::interval(1.0), EdgeId(0)),
        ("k4", zoo::k4(1.0), EdgeId(0)),
        ("flower", zoo::flower(0.4, 1.0), EdgeId(0)),
    ] {
        let l_max = 4.0 * g.min_original_edge_length();
        // Compare strictly below the cutoff: boundary-length paths can
        // round to either side of it in the two enumerations.
        let keep = l_max - 1e-6;
        let a = g.edge_length(e);
        let q = GraphPoint::new(e, 0.5 * a);
        let en = paths::enumerate_paths(&g, q, q, l_max).unwrap();
        let mut through: Vec<(f64, f64)> = en
            .paths
            .iter()
            .filter(|p| p.bonds.is_empty() || *p.bonds.last().unwrap() != p.bonds[0].reverse())
            .filter(|p| p.length <= keep)
            .map(|p| (p.length, p.alpha))
            .collect();
        let anchored = paths::enumerate_edge_closed_paths(&g, e, l_max).unwrap();
        let mut cyclic: Vec<(f64, f64)> = anchored
            .iter()
            .filter(|c| c.length <= keep)
            .map(|c| (c.length, c.coefficient))
            .collect();
        // Quantize lengths before ordering so one-ulp differences from
        // the two summation orders cannot shuffle the coefficient ties.
        let key = |p: &(f64, f64)| ((p.0 * 1e9).round() as i64, p.1);
        let cmp = |p: &(f64, f64), q: &(f64, f64)| {
            key(p).0.cmp(&key(q).0).then(p.1.total_cmp(&q.1))
        };
        through.sort_by(cmp);
        cyclic.sort_by(cmp);
        let ok = through.len() == cyclic.len()
            && through
                .iter()
                .zip(&cyclic)
                .all(|(p, c)| (p.0 - c.0).abs() < 1e-9 && (p.1 - c.1).abs() < 1e-12);
        out.push(result(
            "paths",
            "anchored_bijection_preserves_terms",
            name,
            ok,
            format!("classes={}", cyclic.len()),
        ));
    }

    // Enumeration completeness against an integer walk count.
    let s = paths::bond_scattering_matrix(&k4);
    let adjacency_walks = |from: VertexId, to: VertexId, k: usize| -> u64 {
        let nb = k4.bond_count();
        let mut counts: Vec<u64> = (0..nb)
            .map(|b| u64::from(k4.bond_tail(crate::graph::BondId(b)) == from))
            .collect();
        for _ in 1..k {
            let mut next = vec![0u64; nb];
            for (b, item) in next.iter_mut().enumerate() {
                for prev in 0..nb {
                    if counts[prev] > 0 && s[(b, prev)] != 0.0 {
                        *item += counts[prev];
                    }
                }
            }
            counts = next;
        }
        (0..nb)
            .filter(|&b| k4.bond_head(crate::graph::BondId(b)) == to)
            .map(|b| counts[b])
            .sum()
    };
    let mut ok = true;
    let mut detail = String::new();
    for k in 1..=5usize {
        let en = paths::enumerate_paths(
            &k4,
            GraphPoint::new(EdgeId(0), 0.0),
            GraphPoint::new(EdgeId(0), 1.0),
            k as f64 + 1e-9,
        )
        .unwrap();
        let enumerated = en.paths.iter().filter(|p| p.bonds.len() == k).count() as u64;
        let walks = adjacency_walks(VertexId(0), VertexId(1), k);
        detail.push_str(&format!("k={k}:{enumerated}/{walks} "));
        ok &= enumerated == walks;
    }
    out.push(result(
        "paths",
        "walk_count_oracle",
        "k4",
        ok,
        detail.trim_end().to_string(),
    ));

    // Primitive cycle classes on K4: 8 oriented triangles.
    let cycles = paths::enumerate_primitive_cycles(&k4, 3.0).unwrap();
    let triangles = cycles
        .iter()
        .filter(|c| c.bonds.len() == 3 && (c.length - 3.0).abs() < 1e-12)
        .count();
    out.push(result(
        "paths",
        "k4_triangle_classes",
        "k4",
        triangles == 8,
        format!("triangles={triangles}"),
    ));

    // Truncation tail bound: monotone, vanishing, valid across the zoo.
    for (name, g) in zoo::zoo() {
        let a0 = g.min_original_edge_length();
        let m = g.original_edge_count() as f64;
        let t = 0.8 * a0 * a0 / (2.0 * m.max(2.0).ln());
        let mut ok = true;
        let mut prev = paths::truncation_bound(&g, t, 1.0).unwrap();
        for i in 1..=5 {
            let next = paths::truncation_bound(&g, t, 2.0f64.powi(i)).unwrap();
            ok &= next <= prev;
            prev = next;
        }
        ok &= prev < 1e-20;
        out.push(result(
            "paths",
            "truncation_bound_monotone",
            name,
            ok,
            format!("t={t:.3} final={prev:.3e}"),
        ));
    }
    out
}

// ----------------------------------------------------------------- heat

fn heat_at(g: &MetricGraph, t: f64, q: GraphPoint, trunc: Truncation) -> f64 {
    heat::heat_diagonal(g, t, q, trunc).unwrap().value
}

fn suite_heat() -> Vec<CheckResult> {
    let mut out = Vec::new();

    // Pairwise oracle agreement on the interval.
    let g = zoo::interval(1.0);
    let mut worst = 0.0f64;
    for &t in &[0.01, 0.1, 1.0] {
        for i in 0..5 {
            for j in 0..5 {
                let (x, y) = (i as f64 / 4.0, j as f64 / 4.0);
                let hk = heat::heat_kernel(
                    &g,
                    t,
                    GraphPoint::new(EdgeId(0), x),
                    GraphPoint::new(EdgeId(0), y),
                    Truncation::Auto { tol: 1e-13 },
                )
                .unwrap()
                .value;
                let img = closed_forms::interval_images(1.0, t, x, y, 60);
                let series = closed_forms::interval_series(1.0, t, x, y, 500);
                // Relative to the kernel scale sup|H| = (4 pi t)^{-1/2}:
                // where H is exponentially small the 500-term cosine sum
                // bottoms out at its absolute rounding floor.
                let scale = img.abs().max(1.0 / (FOUR_PI * t).sqrt());
                worst = worst
                    .max((hk - img).abs() / scale)
                    .max((hk - series).abs() / scale)
                    .max((img - series).abs() / scale);
            }
        }
    }
    out.push(result(
        "heat",
        "interval_three_route_agreement",
        "interval",
        worst <= 1e-10,
        format!("max rel dev={worst:.3e} tol=1e-10"),
    ));

    // Star and flower closed forms against the path sum.
    let star = zoo::star(5, 1.0);
    let mut worst = 0.0f64;
    for &(t, x) in &[(0.02, 0.0), (0.05, 0.3), (0.1, 1.0)] {
        let h = heat_at(
            &star,
            t,
            GraphPoint::new(EdgeId(1), x),
            Truncation::Auto { tol: 1e-12 },
        );
        let cf = closed_forms::star_diagonal(5, 1.0, t, x, 4000);
        worst = worst
            .max((h - cf.spectral).abs())
            .max((h - cf.gaussian).abs());
    }
    out.push(result(
        "heat",
        "star_closed_form_agreement",
        "star5",
        worst <= 1e-10,
        format!("max dev={worst:.3e}"),
    ));

    let flower = zoo::flower(0.4, 1.0);
    let mut worst = 0.0f64;
    for &(t, x) in &[(0.03, 0.1), (0.08, 0.0), (0.1, 0.25)] {
        let h = heat_at(
            &flower,
            t,
            GraphPoint::new(EdgeId(0), x),
            Truncation::Auto { tol: 1e-12 },
        );
        let cf = closed_forms::flower_diagonal(0.4, 1.0, t, x, 4000);
        worst = worst.max((h - cf.spectral).abs());
    }
    out.push(result(
        "heat",
        "flower_closed_form_agreement",
        "flower",
        worst <= 1e-10,
        format!("max dev={worst:.3e}"),
    ));

    // Certified bracketing at seeded random points.
    let mut rng = ChaCha8Rng::seed_from_u64(0x6272_6163);
    for (name, g) in zoo::zoo() {
        let a0 = g.min_original_edge_length();
        let m = g.original_edge_count() as f64;
        let t_max = a0 * a0 / (2.0 * m.max(2.0).ln());
        let mut ok = true;
        let mut worst_margin = f64::INFINITY;
        for &t in &[0.05, 0.2] {
            if t >= t_max {
                continue;
            }
            let mut l_cut = 2.0 * a0;
            while paths::truncation_bound(&g, t, l_cut).unwrap() > 1e-6 {
                l_cut *= 1.25;
            }
            let bound = paths::truncation_bound(&g, t, l_cut).unwrap();
            for _ in 0..20 {
                let e = EdgeId(rng.gen_range(0..g.edge_count()));
                let x = rng.gen_range(0.0..=1.0) * g.edge_length(e);
                let q = GraphPoint::new(e, x);
                let coarse = heat::heat_diagonal(&g, t, q, Truncation::Fixed { l_cut }).unwrap();
                let fine =
                    heat::heat_diagonal(&g, t, q, Truncation::Fixed { l_cut: 2.0 * l_cut })
                        .unwrap();
                let gap = (coarse.value - fine.value).abs();
                ok &= gap <= bound;
                worst_margin = worst_margin.min(bound - gap);
            }
        }
        out.push(result(
            "heat",
            "certified_bracketing",
            name,
            ok,
            format!("min margin={worst_margin:.3e}"),
        ));
    }

    // Exact symmetry of the kernel in its arguments.
    let k4 = zoo::k4(1.0);
    let q1 = GraphPoint::new(EdgeId(1), 0.33);
    let q2 = GraphPoint::new(EdgeId(4), 0.71);
    let a = heat::heat_kernel(&k4, 0.1, q1, q2, Truncation::default()).unwrap();
    let b = heat::heat_kernel(&k4, 0.1, q2, q1, Truncation::default()).unwrap();
    out.push(result(
        "heat",
        "kernel_symmetry_exact",
        "k4",
        a.value == b.value,
        format!("H12={:.17e} H21={:.17e}", a.value, b.value),
    ));

    // Small-time vertex factors on the star.
    let t = 0.005;
    let center = heat_at(&star, t, GraphPoint::new(EdgeId(0), 0.0), Truncation::default());
    let interior = heat_at(&star, t, GraphPoint::new(EdgeId(0), 0.5), Truncation::default());
    let dev_center = ((FOUR_PI * t).sqrt() * center - 0.4).abs();
    let dev_interior = ((FOUR_PI * t).sqrt() * interior - 1.0).abs();
    out.push(result(
        "heat",
        "small_time_vertex_factor",
        "star5",
        dev_center <= 1e-6 && dev_interior <= 1e-6,
        format!("center dev={dev_center:.3e} interior dev={dev_interior:.3e} tol=1e-6"),
    ));

    // Positivity across the zoo.
    let mut ok = true;
    for (_, g) in zoo::zoo() {
        let a0 = g.min_original_edge_length();
        let m = g.original_edge_count() as f64;
        let t = 0.8 * a0 * a0 / (2.0 * m.max(2.0).ln());
        for frac in [0.0, 0.4, 1.0] {
            let q = GraphPoint::new(EdgeId(0), frac * g.edge_length(EdgeId(0)));
            ok &= heat_at(&g, t, q, Truncation::Auto { tol: 1e-8 }) > 0.0;
        }
    }
    out.push(result("heat", "diagonal_positivity", "-", ok, "h > 0"));

    // Continuity and the Kirchhoff condition of h at vertices.
    for (name, g) in [
        ("star3", zoo::star(3, 1.0)),
        ("random", zoo::random_multigraph(0x6d65_7472)),
    ] {
        let a0 = g.min_original_edge_length();
        let m = g.original_edge_count() as f64;
        let t = 0.7 * a0 * a0 / (2.0 * m.max(2.0).ln());
        let profiles: Vec<heat::EdgeProfile> = g
            .edge_ids()
            .map(|e| heat::edge_profile(&g, t, e, Truncation::Auto { tol: 1e-11 }).unwrap())
            .collect();
        let mut worst_jump = 0.0f64;
        let mut worst_flux = 0.0f64;
        for v in g.vertex_ids() {
            let mut values = Vec::new();
            let mut flux = Neumaier::new();
            for e in g.edge_ids() {
                let (u0, u1) = g.edge_endpoints(e);
                let len = g.edge_length(e);
                if u0 == v {
                    values.push(profiles[e.0].value(0.0));
                    flux.add(profiles[e.0].dx(0.0));
                }
                if u1 == v {
                    values.push(profiles[e.0].value(len));
                    flux.add(-profiles[e.0].dx(len));
                }
            }
            for w in values.windows(2) {
                worst_jump = worst_jump.max((w[0] - w[1]).abs());
            }
            worst_flux = worst_flux.max(flux.value().abs());
        }
        out.push(result(
            "heat",
            "vertex_continuity_and_kirchhoff",
            name,
            worst_jump <= 1e-9 && worst_flux <= 1e-8,
            format!("max jump={worst_jump:.3e} max flux={worst_flux:.3e}"),
        ));
    }

    // Heat equation residuals.
    for (name, g, e) in [
        ("star5", zoo::star(5, 1.0), EdgeId(0)),
        ("k4", zoo::k4(1.0), EdgeId(3)),
    ] {
        let mut worst = 0.0f64;
        for &t in &[0.05, 0.2] {
            let r = heat::pde_residual(&g, t, e, 0.3, Truncation::Auto { tol: 1e-11 }).unwrap();
            worst = worst
                .max(r.dxh_residual_analytic.abs())
                .max(r.dxh_residual_fd.abs())
                .max(r.dxh_fd_agreement)
                .max(r.source_x_variation_analytic)
                .max(r.source_x_variation_fd);
        }
        out.push(result(
            "heat",
            "modified_heat_equation",
            name,
            worst <= 1e-6,
            format!("max residual={worst:.3e} tol=1e-6"),
        ));
    }

    // Trace consistency: integral of the diagonal equals the eigen trace.
    for (name, spec, g, t) in [
        (
            "interval",
            spectral::closed_form_spectrum(ClosedFormFamily::Interval { a: 1.0 }, 60.0)
                .unwrap()
                .0,
            zoo::interval(1.0),
            0.1,
        ),
        (
            "star3",
            spectral::closed_form_spectrum(ClosedFormFamily::Star { d: 3, a: 1.0 }, 60.0)
                .unwrap()
                .0,
            zoo::star(3, 1.0),
            0.1,
        ),
    ] {
        let integral =
            heat::integrate_diagonal(&g, t, Truncation::Auto { tol: 1e-12 }, 1e-11).unwrap();
        let reference = trace::eigen_trace(&spec, t);
        let dev = (integral - reference).abs();
        out.push(result(
            "heat",
            "trace_consistency",
            name,
            dev <= 1e-8,
            format!("|int h - trace|={dev:.3e} tol=1e-8"),
        ));
    }

    // Semigroup property via quadrature over the whole graph.
    for (name, g) in [("interval", zoo::interval(1.0)), ("star3", zoo::star(3, 1.0))] {
        let (t, s) = (0.1, 0.2);
        let q1 = GraphPoint::new(EdgeId(0), 0.3 * g.edge_length(EdgeId(0)));
        let q2 = GraphPoint::new(
            EdgeId(g.edge_count() - 1),
            0.8 * g.edge_length(EdgeId(g.edge_count() - 1)),
        );
        let trunc = Truncation::Auto { tol: 1e-11 };
        let mut acc = Neumaier::new();
        for e in g.edge_ids() {
            let len = g.edge_length(e);
            acc.add(quad::integrate(
                |x| {
                    let r = GraphPoint::new(e, x);
                    heat::heat_kernel(&g, t, q1, r, trunc).unwrap().value
                        * heat::heat_kernel(&g, s, r, q2, trunc).unwrap().value
                },
                len,
                1e-10,
            ));
        }
        let direct = heat::heat_kernel(&g, t + s, q1, q2, trunc).unwrap().value;
        let dev = (acc.value() - direct).abs();
        out.push(result(
            "heat",
            "semigroup_identity",
            name,
            dev <= 1e-7,
            format!("|int H H - H|={dev:.3e} tol=1e-7"),
        ));
    }

    // Long-time equilibrium on a single edge.
    let interval = zoo::interval(2.0);
    let h = heat_at(
        &interval,
        150.0,
        GraphPoint::new(EdgeId(0), 0.7),
        Truncation::Auto { tol: 1e-9 },
    );
    out.push(result(
        "heat",
        "long_time_equilibrium",
        "interval",
        (h - 0.5).abs() <= 1e-8,
        format!("h={h:.12} 1/L=0.5"),
    ));
    out
}

// ------------------------------------------------------------- spectral

fn suite_spectral() -> Vec<CheckResult> {
    let mut out = Vec::new();

    let compare =
        |name: &str, got: &spectral::Spectrum, want: &spectral::Spectrum| -> CheckResult {
            let mut ok = got.levels.len() == want.levels.len();
            let mut worst = 0.0f64;
            if ok {
                for (a, b) in got.levels.iter().zip(&want.levels) {
                    worst = worst.max((a.sigma - b.sigma).abs());
                    ok &= a.multiplicity == b.multiplicity;
                }
            }
            result(
                "spectral",
                "sources_agree",
                name,
                ok && worst <= 1e-10,
                format!(
                    "levels={}/{} max dsigma={worst:.3e} tol=1e-10",
                    got.levels.len(),
                    want.levels.len()
                ),
            )
        };
    let sigma_max = 9.0;
    let secular = |g: &MetricGraph| {
        spectral::secular_spectrum(g, sigma_max, SecularOptions::default())
            .unwrap()
            .spectrum
    };
    let interval_cf =
        spectral::closed_form_spectrum(ClosedFormFamily::Interval { a: 1.0 }, sigma_max)
            .unwrap()
            .0;
    out.push(compare("interval", &secular(&zoo::interval(1.0)), &interval_cf));
    let star_cf =
        spectral::closed_form_spectrum(ClosedFormFamily::Star { d: 5, a: 1.0 }, sigma_max)
            .unwrap()
            .0;
    out.push(compare("star5", &secular(&zoo::star(5, 1.0)), &star_cf));
    let flower_cf = spectral::closed_form_spectrum(
        ClosedFormFamily::Flower { a: 0.4, total: 1.0 },
        sigma_max,
    )
    .unwrap()
    .0;
    out.push(compare("flower", &secular(&zoo::flower(0.4, 1.0)), &flower_cf));
    let k4_data = SymmetricGraphData::from_graph(&zoo::k4(1.0)).unwrap();
    let k4_adj = spectral::symmetric_spectrum(&k4_data, sigma_max).unwrap();
    out.push(compare("k4", &secular(&zoo::k4(1.0)), &k4_adj));

    // Orthonormality of secular eigenfunctions.
    for (name, g) in [
        ("k4", zoo::k4(1.0)),
        ("random", zoo::random_multigraph(0x6d65_7472)),
    ] {
        let sol = spectral::secular_spectrum(&g, 7.5, SecularOptions::default()).unwrap();
        let n = sol.basis.functions.len().min(20);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let ip = sol.basis.inner_product(i, j);
                worst = worst.max((ip - f64::from(i == j)).abs());
            }
        }
        out.push(result(
            "spectral",
            "gram_orthonormal",
            name,
            worst <= 1e-8,
            format!("max dev={worst:.3e} over {n} functions tol=1e-8"),
        ));
    }

    // Eigenfunction-expansion kernel against the path sum, off the
    // diagonal and across edges (exercises per-edge amplitude phases).
    for (name, g, basis, q1, q2) in [
        (
            "star5",
            zoo::star(5, 1.0),
            spectral::closed_form_spectrum(ClosedFormFamily::Star { d: 5, a: 1.0 }, 32.0)
                .unwrap()
                .1,
            GraphPoint::new(EdgeId(0), 0.3),
            GraphPoint::new(EdgeId(1), 0.7),
        ),
        (
            "flower",
            zoo::flower(0.4, 1.0),
            spectral::closed_form_spectrum(
                ClosedFormFamily::Flower { a: 0.4, total: 1.0 },
                60.0,
            )
            .unwrap()
            .1,
            GraphPoint::new(EdgeId(0), 0.1),
            GraphPoint::new(EdgeId(1), 0.35),
        ),
    ] {
        let mut worst = 0.0f64;
        for &t in &[0.05, 0.1] {
            let path = heat::heat_kernel(&g, t, q1, q2, Truncation::Auto { tol: 1e-11 })
                .unwrap()
                .value;
            let (eigen, tail) = basis.heat_kernel(t, q1, q2, basis.functions.len());
            worst = worst.max((path - eigen).abs() - tail.abs());
        }
        out.push(result(
            "spectral",
            "eigen_kernel_matches_path_sum_offdiagonal",
            name,
            worst <= 1e-9,
            format!("max dev={worst:.3e} tol=1e-9"),
        ));
    }

    // Local Weyl averages on the star (closed-form spectrum, M = 2000).
    let (_, basis) =
        spectral::closed_form_spectrum(ClosedFormFamily::Star { d: 5, a: 1.0 }, 1300.0).unwrap();
    let center = basis
        .local_weyl_average(GraphPoint::new(EdgeId(0), 0.0), 2000)
        .unwrap();
    let interior = basis
        .local_weyl_average(GraphPoint::new(EdgeId(0), 0.3), 2000)
        .unwrap();
    let amp = basis.amplitude_average(EdgeId(2), 2000).unwrap();
    let ok = (center - 0.08).abs() / 0.08 <= 0.05
        && (interior - 0.2).abs() / 0.2 <= 0.05
        && (amp - 0.4).abs() / 0.4 <= 0.05;
    out.push(result(
        "spectral",
        "local_weyl_and_amplitude_averages",
        "star5",
        ok,
        format!("center={center:.5} (0.08) interior={interior:.5} (0.2) b2={amp:.5} (0.4)"),
    ));

    // Integrated eigenfunction distribution against the uniform measure.
    let (_, basis3) =
        spectral::closed_form_spectrum(ClosedFormFamily::Star { d: 3, a: 1.0 }, 550.0).unwrap();
    let m_terms = 1200.min(basis3.functions.len());
    let weights: [(&str, fn(f64) -> f64); 4] = [
        ("1", |_| 1.0),
        ("x", |x| x),
        ("x^2", |x| x * x),
        ("cos", |x| (2.0 * PI * x).cos()),
    ];
    let mut worst_rel = 0.0f64;
    let mut detail = String::new();
    for (label, f) in &weights {
        let mut acc = Neumaier::new();
        for func in &basis3.functions[..m_terms] {
            acc.add(quad::integrate(
                |x| f(x) * func.eval(GraphPoint::new(EdgeId(0), x)).powi(2),
                1.0,
                1e-10,
            ));
        }
        let got = acc.value() / m_terms as f64;
        let want = quad::integrate(f, 1.0, 1e-12) / 3.0;
        // The zero-mean cosine weight converges to 0; compare against a
        // floor at the 1% level of the uniform-weight limit.
        let rel = (got - want).abs() / want.abs().max(0.01);
        worst_rel = worst_rel.max(rel);
        detail.push_str(&format!("{label}:{rel:.2e} "));
    }
    out.push(result(
        "spectral",
        "integrated_distribution",
        "star3",
        worst_rel <= 0.05,
        detail.trim_end().to_string(),
    ));

    // Weyl counting envelope stays bounded.
    for (name, spec, total, cap) in [
        ("interval", interval_cf, 1.0, 1.001),
        (
            "star5",
            spectral::closed_form_spectrum(ClosedFormFamily::Star { d: 5, a: 1.0 }, 120.0)
                .unwrap()
                .0,
            5.0,
            5.0,
        ),
        (
            "k4",
            spectral::symmetric_spectrum(&k4_data, 30.0).unwrap(),
            6.0,
            8.0,
        ),
    ] {
        let report = trace::weyl_count_check(&spec, total);
        out.push(result(
            "spectral",
            "weyl_envelope_bounded",
            name,
            report.max_deviation <= cap,
            format!("max dev={:.4} cap={cap}", report.max_deviation),
        ));
    }
    out
}

// ---------------------------------------------------------------- trace

fn suite_trace() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let ts: Vec<f64> = (0..10).map(|i| 0.05 + 0.45 * i as f64 / 9.0).collect();

    // Cycle expansion against eigenvalue traces.
    let cases: Vec<(&str, MetricGraph, spectral::Spectrum, f64)> = vec![
        (
            "interval",
            zoo::interval(1.0),
            spectral::closed_form_spectrum(ClosedFormFamily::Interval { a: 1.0 }, 80.0)
                .unwrap()
                .0,
            16.0,
        ),
        (
            "star3",
            zoo::star(3, 1.0),
            spectral::closed_form_spectrum(ClosedFormFamily::Star { d: 3, a: 1.0 }, 80.0)
                .unwrap()
                .0,
            10.0,
        ),
        (
            "k4",
            zoo::k4(1.0),
            spectral::symmetric_spectrum(
                &SymmetricGraphData::from_graph(&zoo::k4(1.0)).unwrap(),
                80.0,
            )
            .unwrap(),
            9.5,
        ),
    ];
    for (name, g, spec, l_max) in &cases {
        let cycles = paths::enumerate_primitive_cycles(g, *l_max).unwrap();
        let mut worst = 0.0f64;
        for &t in &ts {
            let roth = trace::roth_trace_from_cycles(g, &cycles, t, *l_max);
            let reference = trace::eigen_trace(spec, t);
            worst = worst.max((roth.value - reference).abs() / reference);
        }
        out.push(result(
            "trace",
            "cycle_expansion_matches_trace",
            name,
            worst <= 1e-8,
            format!("max rel dev={worst:.3e} tol=1e-8"),
        ));
        let fit = trace::roth_constant_fit(g, spec, &ts, *l_max).unwrap();
        let want = 0.5 * (g.original_vertex_count() as f64 - g.original_edge_count() as f64);
        out.push(result(
            "trace",
            "euler_constant_fit",
            name,
            (fit - want).abs() <= 1e-6,
            format!("fit={fit:.9} want={want}"),
        ));
    }

    // Cycle expansion against the secular solver on loop/multi-edge graphs.
    for (name, g, l_max, sigma_max) in [
        ("flower", zoo::flower(0.4, 1.0), 6.0, 60.0),
        ("pumpkin3", zoo::pumpkin(3, 1.0), 8.0, 30.0),
        ("random", zoo::random_multigraph(0x6d65_7472), 7.0, 26.0),
    ] {
        let spec = spectral::secular_spectrum(&g, sigma_max, SecularOptions::default())
            .unwrap()
            .spectrum;
        let cycles = paths::enumerate_primitive_cycles(&g, l_max).unwrap();
        let mut worst = 0.0f64;
        for &t in &[0.08, 0.12, 0.2] {
            let roth = trace::roth_trace_from_cycles(&g, &cycles, t, l_max);
            let reference = trace::eigen_trace(&spec, t);
            worst = worst.max((roth.value - reference).abs() / reference);
        }
        out.push(result(
            "trace",
            "cycle_expansion_vs_secular",
            name,
            worst <= 1e-7,
            format!("max rel dev={worst:.3e} tol=1e-7"),
        ));
    }

    // Iterate-coefficient reading of the cycle expansion.
    let k4 = zoo::k4(1.0);
    let k4_spec =
        spectral::symmetric_spectrum(&SymmetricGraphData::from_graph(&k4).unwrap(), 80.0)
            .unwrap();
    let cmp = trace::roth_reading_comparison(&k4, &k4_spec, &ts, 9.5).unwrap();
    out.push(result(
        "trace",
        "iterate_coefficient_reading",
        "k4",
        cmp.iterate_power_error < 1e-9 && cmp.printed_error > 1e3 * cmp.iterate_power_error,
        format!(
            "power err={:.3e} printed err={:.3e}",
            cmp.iterate_power_error, cmp.printed_error
        ),
    ));

    // Edge trace formula.
    let grid: Vec<f64> = (0..20).map(|i| 0.05 + 0.95 * i as f64 / 19.0).collect();
    let (_, interval_basis) =
        spectral::closed_form_spectrum(ClosedFormFamily::Interval { a: 1.0 }, 60.0).unwrap();
    let r = trace::edge_trace_sides(
        &zoo::interval(1.0),
        EdgeId(0),
        &grid,
        12.0,
        &interval_basis,
        interval_basis.functions.len(),
    )
    .unwrap();
    out.push(result(
        "trace",
        "edge_trace_interval_constant_zero",
        "interval",
        r.c_e.abs() <= 1e-10 && r.max_deviation <= 1e-10,
        format!("c_e={:.3e} max dev={:.3e} tol=1e-10", r.c_e, r.max_deviation),
    ));
    let (_, star_basis) =
        spectral::closed_form_spectrum(ClosedFormFamily::Star { d: 5, a: 1.0 }, 40.0).unwrap();
    let r = trace::edge_trace_sides(
        &zoo::star(5, 1.0),
        EdgeId(0),
        &grid,
        11.0,
        &star_basis,
        star_basis.functions.len(),
    )
    .unwrap();
    out.push(result(
        "trace",
        "edge_trace_constancy",
        "star5",
        r.max_deviation <= 1e-8 && r.max_dt_difference <= 1e-6,
        format!(
            "max dev={:.3e} c_e={:.6e} max dD/dt={:.3e}",
            r.max_deviation, r.c_e, r.max_dt_difference
        ),
    ));
    let k4_sol = spectral::secular_spectrum(&k4, 26.0, SecularOptions::default()).unwrap();
    let r = trace::edge_trace_sides(
        &k4,
        EdgeId(0),
        &grid,
        10.5,
        &k4_sol.basis,
        k4_sol.basis.functions.len(),
    )
    .unwrap();
    out.push(result(
        "trace",
        "edge_trace_constancy",
        "k4",
        r.max_deviation <= 1e-8,
        format!("max dev={:.3e} c_e={:.6e}", r.max_deviation, r.c_e),
    ));

    // Integrated small-time asymptotics.
    let report = trace::integrated_asymptotics(
        &zoo::interval(1.0),
        EdgeId(0),
        &[1.0],
        0.01,
        Truncation::Auto { tol: 1e-12 },
        1e-11,
    )
    .unwrap();
    out.push(result(
        "trace",
        "integrated_asymptotics_interval",
        "interval",
        report.residual_h <= 1e-10 && report.residual_dxh <= 1e-10,
        format!(
            "res_h={:.3e} res_dxh={:.3e}",
            report.residual_h, report.residual_dxh
        ),
    ));
    let star = zoo::star(5, 1.0);
    let coarse = trace::integrated_asymptotics(
        &star,
        EdgeId(0),
        &[0.0, 1.0],
        0.02,
        Truncation::Auto { tol: 1e-12 },
        1e-11,
    )
    .unwrap();
    let fine = trace::integrated_asymptotics(
        &star,
        EdgeId(0),
        &[0.0, 1.0],
        0.005,
        Truncation::Auto { tol: 1e-12 },
        1e-11,
    )
    .unwrap();
    out.push(result(
        "trace",
        "integrated_asymptotics_decay",
        "star5",
        fine.residual_h < coarse.residual_h && fine.residual_dxh <= 1e-9,
        format!(
            "res_h {:.3e}->{:.3e}, res_dxh={:.3e}",
            coarse.residual_h, fine.residual_h, fine.residual_dxh
        ),
    ));
    out
}

// ------------------------------------------------------------ symmetric

fn suite_symmetric() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let sigma = (-1.0f64 / 3.0).acos();

    // Theta function identities.
    let theta_inf = closed_forms::theta3(0.4, 60.0).unwrap();
    let periodic = (closed_forms::theta3(0.3, 0.1).unwrap()
        - closed_forms::theta3(0.3 + PI, 0.1).unwrap())
    .abs();
    out.push(result(
        "symmetric",
        "theta_limits_and_periodicity",
        "-",
        (theta_inf - 1.0).abs() <= 1e-14 && periodic <= 1e-12,
        format!(
            "theta(inf)-1={:.2e} periodicity={periodic:.2e}",
            theta_inf - 1.0
        ),
    ));
    let mut worst = 0.0f64;
    for &t in &[0.05, 0.2, 1.0, 2.0] {
        let a: f64 = 1.0;
        let x = 0.3;
        let mut lhs = 0.0;
        for k in -60i64..=60 {
            let s = PI * k as f64 / a;
            lhs += (-s * s * t).exp() * (2.0 * PI * k as f64 * x / a).cos();
        }
        let rhs = closed_forms::theta3(PI * x / a, PI * t / (a * a)).unwrap();
        worst = worst.max((lhs - rhs).abs());
    }
    out.push(result(
        "symmetric",
        "theta_reduction_identity",
        "-",
        worst <= 1e-12,
        format!("max dev={worst:.3e} tol=1e-12"),
    ));

    // The three Poisson-summation identities.
    let mut worst = [0.0f64; 3];
    for i in 0..20 {
        let t = 0.05 + 1.95 * i as f64 / 19.0;
        let res = closed_forms::poisson_identities(1.0, sigma, 0.3, t);
        for (w, r) in worst.iter_mut().zip(res) {
            *w = w.max(r);
        }
    }
    out.push(result(
        "symmetric",
        "poisson_identities",
        "-",
        worst.iter().all(|&w| w <= 1e-12),
        format!(
            "residuals=[{:.3e}, {:.3e}, {:.3e}] tol=1e-12",
            worst[0], worst[1], worst[2]
        ),
    ));

    // Q-set structure.
    let k4 = SymmetricGraphData::from_graph(&zoo::k4(1.0)).unwrap();
    let cube = SymmetricGraphData::from_graph(&zoo::cube(1.0)).unwrap();
    let q_ok = k4.q_set.len() == 1
        && (k4.q_set[0].0 - sigma).abs() <= 1e-12
        && k4.q_set[0].1 == 3
        && k4.q_set.iter().map(|q| q.1).sum::<usize>() == 3 // n - 2/c with c = 2
        && cube.q_set.iter().map(|q| q.1).sum::<usize>() == 8 - 2;
    out.push(result(
        "symmetric",
        "q_set_counting",
        "k4/cube",
        q_ok,
        format!("k4 Q={:?} cube |Q|={}", k4.q_set, cube.q_set.len()),
    ));

    // Spectral form versus Gaussian path form of the closed diagonal.
    for (name, data) in [
        ("k4", k4.clone()),
        ("cube", cube),
        (
            "pumpkin3",
            SymmetricGraphData::from_graph(&zoo::pumpkin(3, 1.0)).unwrap(),
        ),
    ] {
        let mut worst = 0.0f64;
        for &(t, x) in &[(0.05, 0.2), (0.1, 0.5), (0.3, 0.85)] {
            let spectral_form = closed_forms::symmetric_diagonal(&data, t, x, 100_000);
            let path_form = closed_forms::symmetric_pathform(&data, t, x, 45.0);
            worst = worst.max((spectral_form - path_form).abs());
        }
        out.push(result(
            "symmetric",
            "closed_form_dual_routes",
            name,
            worst <= 1e-11,
            format!("max dev={worst:.3e} tol=1e-11"),
        ));
    }

    // Closed form against the general path-sum kernel on K4.
    let g = zoo::k4(1.0);
    let mut worst = 0.0f64;
    for &t in &[0.05, 0.2] {
        let profile =
            heat::edge_profile(&g, t, EdgeId(0), Truncation::Auto { tol: 1e-10 }).unwrap();
        for i in 0..=50 {
            let x = i as f64 / 50.0;
            let reference = closed_forms::symmetric_diagonal(&k4, t, x, 100_000);
            worst = worst.max((profile.value(x) - reference).abs());
        }
    }
    out.push(result(
        "symmetric",
        "closed_form_matches_path_sum",
        "k4",
        worst <= 1e-8,
        format!("max dev={worst:.3e} tol=1e-8"),
    ));

    // Gaussian coefficients sum to the free-kernel weight at small t.
    let t = 1e-3;
    let scaled = closed_forms::symmetric_pathform(&k4, t, 0.5, 40.0) * (FOUR_PI * t).sqrt();
    out.push(result(
        "symmetric",
        "pathform_leading_weight",
        "k4",
        (scaled - 1.0).abs() <= 1e-9,
        format!("sqrt(4 pi t) h={scaled:.12}"),
    ));

    // Derivative expansion: path-sum Fourier coefficients match c_n.
    let star = zoo::star(5, 1.0);
    let t = 0.05;
    let profile =
        heat::edge_profile(&star, t, EdgeId(0), Truncation::Auto { tol: 1e-13 }).unwrap();
    let mut worst = 0.0f64;
    for n in 1..=10u32 {
        let y = quad::integrate(
            |x| 2.0 * profile.dx(x) * (PI * f64::from(n) * x).sin(),
            1.0,
            1e-13,
        );
        let rate = PI * f64::from(n) / 2.0;
        let got = y * (rate * rate * t).exp();
        let want = closed_forms::sine_coefficient(5, 1, 1.0, n);
        worst = worst.max((got - want).abs());
    }
    let c1 = closed_forms::sine_coefficient(5, 1, 1.0, 1);
    out.push(result(
        "symmetric",
        "sine_expansion_coefficients",
        "star5",
        worst <= 1e-6 && (c1 - 4.0 * PI / 5.0).abs() <= 1e-14,
        format!("max |c_n dev|={worst:.3e} c1={c1:.12} (4 pi/5)"),
    ));

    // Derivative vanishes at the ends of a completely symmetric edge.
    let profile =
        heat::edge_profile(&g, 0.05, EdgeId(0), Truncation::Auto { tol: 1e-11 }).unwrap();
    let end_dev = profile.dx(0.0).abs().max(profile.dx(1.0).abs());
    out.push(result(
        "symmetric",
        "derivative_vanishes_at_symmetric_vertices",
        "k4",
        end_dev <= 1e-9,
        format!("max |dx h| at ends={end_dev:.3e}"),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_run_passes() {
        let report = run(&VerifyOptions::default());
        for c in report.checks.iter().filter(|c| !c.passed) {
            eprintln!("FAILED {}/{} [{}]: {}", c.suite, c.name, c.graph, c.detail);
        }
        assert!(report.passed);
        assert!(report.checks.len() > 40);
    }

    #[test]
    fn fault_injection_fails_row_sums() {
        let report = run(&VerifyOptions {
            suites: Some(vec!["scattering".into()]),
            fault_beta: Some(1e-3),
        });
        assert!(!report.passed);
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.iter().all(|c| c.name == "beta_row_sums_one"));
        assert!(!failed.is_empty());
    }

    #[test]
    fn suite_filter_restricts_checks() {
        let report = run(&VerifyOptions {
            suites: Some(vec!["trace".into()]),
            fault_beta: None,
        });
        assert!(report.checks.iter().all(|c| c.suite == "trace"));
        assert!(report.passed);
    }
}
