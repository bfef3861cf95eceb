//! Built-in test graphs: the families with known spectra plus a seeded
//! random multigraph exercising loops and parallel edges.

use crate::graph::{EdgeSpec, MetricGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Neumann interval of length `a` as a single-edge graph.
pub fn interval(a: f64) -> MetricGraph {
    MetricGraph::from_parts(
        vec!["u".into(), "v".into()],
        vec![EdgeSpec::new("e", "u", "v", a)],
    )
    .expect("valid interval")
}

/// Star with `d` edges of length `a`; edges run center -> tip so the edge
/// coordinate is measured outward from the center.
pub fn star(d: usize, a: f64) -> MetricGraph {
    let mut vertices = vec!["c".to_string()];
    let mut edges = Vec::new();
    for i in 0..d {
        vertices.push(format!("t{i}"));
        edges.push(EdgeSpec::new(&format!("e{i}"), "c", &format!("t{i}"), a));
    }
    MetricGraph::from_parts(vertices, edges).expect("valid star")
}

/// Two-petal flower: loops of lengths `a` and `total - a` at one vertex.
pub fn flower(a: f64, total: f64) -> MetricGraph {
    assert!(a > 0.0 && total > a, "petal lengths must be positive");
    MetricGraph::from_parts(
        vec!["v".into()],
        vec![
            EdgeSpec::new("p1", "v", "v", a),
            EdgeSpec::new("p2", "v", "v", total - a),
        ],
    )
    .expect("valid flower")
}

/// Complete graph on `n` vertices, equilateral with edge length `a`.
pub fn complete(n: usize, a: f64) -> MetricGraph {
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push(EdgeSpec::new(
                &format!("e{i}_{j}"),
                &format!("v{i}"),
                &format!("v{j}"),
                a,
            ));
        }
    }
    MetricGraph::from_parts(vertices, edges).expect("valid complete graph")
}

/// Symmetric tetrahedron.
pub fn k4(a: f64) -> MetricGraph {
    complete(4, a)
}

/// 3-cube graph (8 vertices of degree 3), equilateral.
pub fn cube(a: f64) -> MetricGraph {
    let vertices: Vec<String> = (0..8).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..8usize {
        for bit in 0..3 {
            let j = i ^ (1 << bit);
            if i < j {
                edges.push(EdgeSpec::new(
                    &format!("e{i}_{j}"),
                    &format!("v{i}"),
                    &format!("v{j}"),
                    a,
                ));
            }
        }
    }
    MetricGraph::from_parts(vertices, edges).expect("valid cube")
}

/// Pumpkin: two vertices joined by `k` parallel edges of length `a`.
pub fn pumpkin(k: usize, a: f64) -> MetricGraph {
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push(EdgeSpec::new(&format!("q{i}"), "u", "v", a));
    }
    MetricGraph::from_parts(vec!["u".into(), "v".into()], edges).expect("valid pumpkin")
}

/// Seeded random multigraph with a loop and a parallel pair.  Edge
/// lengths stay within [0.85, 1.3] so the truncation-bound validity
/// window covers the times used by the verification suite.
pub fn random_multigraph(seed: u64) -> MetricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut len = move || -> f64 { rng.gen_range(0.85..1.3) };
    let vertices: Vec<String> = (0..4).map(|i| format!("v{i}")).collect();
    // Spanning path keeps it connected; extras add a loop and a parallel edge.
    let edges = vec![
        EdgeSpec::new("e0", "v0", "v1", len()),
        EdgeSpec::new("e1", "v1", "v2", len()),
        EdgeSpec::new("e2", "v2", "v3", len()),
        EdgeSpec::new("e3", "v1", "v2", len()),
        EdgeSpec::new("e4", "v3", "v3", len()),
    ];
    MetricGraph::from_parts(vertices, edges).expect("valid random multigraph")
}

/// Name/graph pairs for the verification zoo.
pub fn zoo() -> Vec<(&'static str, MetricGraph)> {
    vec![
        ("interval", interval(1.0)),
        ("star3", star(3, 1.0)),
        ("star5", star(5, 1.0)),
        ("flower", flower(0.4, 1.0)),
        ("k4", k4(1.0)),
        ("cube", cube(1.0)),
        ("pumpkin3", pumpkin(3, 1.0)),
        ("random", random_multigraph(0x6d65_7472)),
    ]
}

/// All zoo graphs without names.
pub fn all_graphs() -> Vec<MetricGraph> {
    zoo().into_iter().map(|(_, g)| g).collect()
}
