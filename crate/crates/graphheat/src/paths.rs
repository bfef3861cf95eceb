//! Path enumeration over bonds with scattering coefficients and rigorous
//! truncation tails.
//!
//! A path is an ordered sequence of consecutive bonds between two
//! vertices; it may bounce (follow a bond by its reverse).  Each step
//! from bond `b` to bond `b'` carries the scattering weight
//!
//! ```text
//!   beta(b, b') = 2/deg(head(b)) - [b' == reverse(b)]
//! ```
//!
//! so a bounce at a degree-two vertex weighs zero and an artificial
//! vertex is invisible.  Bounce detection compares bonds, not vertices:
//! the vertex test is ambiguous on loops, while the two agree on
//! loop-free graphs and after loop subdivision.
//!
//! The full path coefficient multiplies the step weights by the endpoint
//! factor `4 / (deg(v-) deg(v+))`; the trivial path carries `2/deg(v)`.
//! Enumeration is a depth-first walk pruned on accumulated length and on
//! exactly-zero running coefficients, emitting paths in deterministic
//! (length, bond sequence) order.

use crate::graph::{BondId, EdgeId, GraphPoint, MetricGraph, VertexId};
use crate::ksum::Neumaier;
use nalgebra::DMatrix;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Hard cap on emitted paths; enumeration beyond this is a caller bug.
const MAX_PATHS: usize = 30_000_000;

#[derive(Debug, thiserror::Error)]
pub enum PathError {
    #[error("length cutoff must be nonnegative, got {0}")]
    NegativeLengthCut(f64),
    #[error("bonds are not consecutive")]
    NonConsecutiveBonds,
    #[error("time must be positive, got {0}")]
    InvalidTime(f64),
    #[error(
        "no geometric tail bound available at t = {t} (valid for t < {t_max}); \
         increase the length cutoff or reduce t"
    )]
    TailBoundUnavailable { t: f64, t_max: f64 },
    #[error("path enumeration exceeded {0} paths; lower the length cutoff")]
    TooManyPaths(usize),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// Scattering weight for the step `b1 -> b2`.
pub fn beta(g: &MetricGraph, b1: BondId, b2: BondId) -> Result<f64, PathError> {
    if g.bond_head(b1) != g.bond_tail(b2) {
        return Err(PathError::NonConsecutiveBonds);
    }
    let d = g.degree(g.bond_head(b1)) as f64;
    Ok(2.0 / d - if b2 == b1.reverse() { 1.0 } else { 0.0 })
}

/// Path between two vertices with its length and coefficient.
#[derive(Debug, Clone)]
pub struct BondPath {
    pub start: VertexId,
    pub end: VertexId,
    /// Empty for the trivial path.
    pub bonds: Vec<BondId>,
    pub length: f64,
    pub alpha: f64,
}

/// Recompute the coefficient of a path from its bond sequence.
pub fn path_coefficient(
    g: &MetricGraph,
    start: VertexId,
    bonds: &[BondId],
) -> Result<f64, PathError> {
    if bonds.is_empty() {
        return Ok(2.0 / g.degree(start) as f64);
    }
    if g.bond_tail(bonds[0]) != start {
        return Err(PathError::NonConsecutiveBonds);
    }
    let mut product = 1.0;
    for pair in bonds.windows(2) {
        product *= beta(g, pair[0], pair[1])?;
    }
    let end = g.bond_head(*bonds.last().unwrap());
    let prefactor = 4.0 / (g.degree(start) as f64 * g.degree(end) as f64);
    Ok(prefactor * product)
}

/// Result of enumerating paths between two graph points: the working
/// graph (subdivided at interior evaluation points) plus the paths.
#[derive(Debug)]
pub struct PathEnumeration {
    pub graph: MetricGraph,
    pub source: VertexId,
    pub target: VertexId,
    pub paths: Vec<BondPath>,
}

/// Enumerate all paths from `q1` to `q2` with length at most `l_max`,
/// including the trivial path when the points coincide.  Interior points
/// become artificial vertices; paths bouncing there carry an exactly
/// zero coefficient and are pruned.
pub fn enumerate_paths(
    g: &MetricGraph,
    q1: GraphPoint,
    q2: GraphPoint,
    l_max: f64,
) -> Result<PathEnumeration, PathError> {
    if !(l_max >= 0.0) {
        return Err(PathError::NegativeLengthCut(l_max));
    }
    let (g1, v1, remap) = g.insert_point_vertex(q1)?;
    let q2 = remap.apply(q2);
    let (g2, v2, _) = g1.insert_point_vertex(q2)?;
    let paths = enumerate_between_vertices(&g2, v1, v2, l_max)?;
    Ok(PathEnumeration {
        graph: g2,
        source: v1,
        target: v2,
        paths,
    })
}

fn enumerate_between_vertices(
    g: &MetricGraph,
    source: VertexId,
    target: VertexId,
    l_max: f64,
) -> Result<Vec<BondPath>, PathError> {
    let eps = 1e-12 * l_max.max(1.0);
    let mut out = Vec::new();
    if source == target {
        out.push(BondPath {
            start: source,
            end: target,
            bonds: Vec::new(),
            length: 0.0,
            alpha: 2.0 / g.degree(source) as f64,
        });
    }
    let prefactor = 4.0 / (g.degree(source) as f64 * g.degree(target) as f64);
    let mut bonds: Vec<BondId> = Vec::new();
    let mut walk = Walk {
        g,
        target,
        l_max: l_max + eps,
        prefactor,
        out: &mut out,
    };
    walk.extend(source, &mut bonds, 1.0, 0.0)?;
    sort_paths(&mut out);
    Ok(out)
}

struct Walk<'a> {
    g: &'a MetricGraph,
    target: VertexId,
    l_max: f64,
    prefactor: f64,
    out: &'a mut Vec<BondPath>,
}

impl Walk<'_> {
    fn extend(
        &mut self,
        at: VertexId,
        bonds: &mut Vec<BondId>,
        beta_product: f64,
        length: f64,
    ) -> Result<(), PathError> {
        for &b in self.g.outgoing_bonds(at) {
            let factor = match bonds.last() {
                None => 1.0,
                Some(&prev) => {
                    let d = self.g.degree(at) as f64;
                    2.0 / d - f64::from(b == prev.reverse())
                }
            };
            let product = beta_product * factor;
            if product == 0.0 {
                continue;
            }
            let len = length + self.g.bond_length(b);
            if len > self.l_max {
                continue;
            }
            bonds.push(b);
            let head = self.g.bond_head(b);
            if head == self.target {
                if self.out.len() >= MAX_PATHS {
                    return Err(PathError::TooManyPaths(MAX_PATHS));
                }
                self.out.push(BondPath {
                    start: self.g.bond_tail(bonds[0]),
                    end: head,
                    bonds: bonds.clone(),
                    length: len,
                    alpha: self.prefactor * product,
                });
            }
            self.extend(head, bonds, product, len)?;
            bonds.pop();
        }
        Ok(())
    }
}

fn sort_paths(paths: &mut [BondPath]) {
    paths.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| a.bonds.cmp(&b.bonds))
    });
}

/// Closed path up to cyclic rotation, or a rooted closed path in an
/// edge-anchored family.  The coefficient is the cyclic product of the
/// step weights over all consecutive pairs including the wrap-around.
#[derive(Debug, Clone)]
pub struct CycleClass {
    /// Representative bond sequence; empty for the anchored trivial path.
    pub bonds: Vec<BondId>,
    pub length: f64,
    /// Cyclic coefficient (wrap-around included).
    pub coefficient: f64,
    /// Whether the closed path is not an iterate of a shorter one.
    pub primitive: bool,
}

/// Closed paths anchored to an edge: the trivial path (length 0 and
/// coefficient 1) plus every closed path of length at most `l_max` whose
/// first bond is one of the edge's two bonds and whose cyclic coefficient
/// is nonzero.
pub fn enumerate_edge_closed_paths(
    g: &MetricGraph,
    e: EdgeId,
    l_max: f64,
) -> Result<Vec<CycleClass>, PathError> {
    if !(l_max >= 0.0) {
        return Err(PathError::NegativeLengthCut(l_max));
    }
    let mut out = vec![CycleClass {
        bonds: Vec::new(),
        length: 0.0,
        coefficient: 1.0,
        primitive: false,
    }];
    let eps = 1e-12 * l_max.max(1.0);
    for b0 in [BondId(2 * e.0), BondId(2 * e.0 + 1)] {
        if g.bond_length(b0) > l_max + eps {
            continue;
        }
        let mut bonds = vec![b0];
        closed_walk(
            g,
            &mut bonds,
            1.0,
            g.bond_length(b0),
            l_max + eps,
            false,
            &mut |seq, product, length| {
                let wrap = beta(g, *seq.last().unwrap(), seq[0]).expect("closed walk");
                let coefficient = product * wrap;
                if coefficient != 0.0 {
                    out.push(CycleClass {
                        bonds: seq.to_vec(),
                        length,
                        coefficient,
                        primitive: is_primitive_word(seq),
                    });
                }
            },
        )?;
    }
    out.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| a.bonds.cmp(&b.bonds))
    });
    Ok(out)
}

/// One representative per cyclic-equivalence class of primitive closed
/// paths with nonzero cyclic coefficient and length at most `l_max`.
/// Orientation-reversed classes stay distinct unless they coincide as
/// bond sequences (the back-and-forth bounce equals its own reversal and
/// appears once).
pub fn enumerate_primitive_cycles(
    g: &MetricGraph,
    l_max: f64,
) -> Result<Vec<CycleClass>, PathError> {
    if !(l_max >= 0.0) {
        return Err(PathError::NegativeLengthCut(l_max));
    }
    let eps = 1e-12 * l_max.max(1.0);
    let mut out = Vec::new();
    for b0 in g.bond_ids() {
        if g.bond_length(b0) > l_max + eps {
            continue;
        }
        let mut bonds = vec![b0];
        closed_walk(
            g,
            &mut bonds,
            1.0,
            g.bond_length(b0),
            l_max + eps,
            true,
            &mut |seq, product, length| {
                // Only the lexicographically minimal rotation represents a
                // class; rotations of non-minimal walks are pruned by the
                // `b >= b0` constraint and this final exact check.
                if !is_minimal_rotation(seq) || !is_primitive_word(seq) {
                    return;
                }
                let wrap = beta(g, *seq.last().unwrap(), seq[0]).expect("closed walk");
                let coefficient = product * wrap;
                if coefficient != 0.0 {
                    out.push(CycleClass {
                        bonds: seq.to_vec(),
                        length,
                        coefficient,
                        primitive: true,
                    });
                }
            },
        )?;
    }
    out.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| a.bonds.cmp(&b.bonds))
    });
    Ok(out)
}

/// Depth-first closed-walk extension.  `emit` fires whenever the walk
/// sits at the tail of its first bond.  With `restrict_to_min` set,
/// bonds smaller than the first are pruned: a walk containing one can
/// never be the minimal rotation of its class, and the class is reached
/// from that smaller starting bond instead.  Anchored enumerations must
/// leave middle bonds unrestricted.
#[allow(clippy::too_many_arguments)]
fn closed_walk(
    g: &MetricGraph,
    bonds: &mut Vec<BondId>,
    beta_product: f64,
    length: f64,
    l_max: f64,
    restrict_to_min: bool,
    emit: &mut impl FnMut(&[BondId], f64, f64),
) -> Result<(), PathError> {
    let root = g.bond_tail(bonds[0]);
    let at = g.bond_head(*bonds.last().unwrap());
    if at == root {
        emit(bonds, beta_product, length);
    }
    let prev = *bonds.last().unwrap();
    let d = g.degree(at) as f64;
    for &b in g.outgoing_bonds(at) {
        if restrict_to_min && b < bonds[0] {
            continue;
        }
        let factor = 2.0 / d - f64::from(b == prev.reverse());
        let product = beta_product * factor;
        if product == 0.0 {
            continue;
        }
        let len = length + g.bond_length(b);
        if len > l_max {
            continue;
        }
        bonds.push(b);
        closed_walk(g, bonds, product, len, l_max, restrict_to_min, emit)?;
        bonds.pop();
    }
    Ok(())
}

fn is_minimal_rotation(seq: &[BondId]) -> bool {
    let n = seq.len();
    for shift in 1..n {
        for i in 0..n {
            match seq[(shift + i) % n].cmp(&seq[i]) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => continue,
            }
        }
    }
    true
}

fn is_primitive_word(seq: &[BondId]) -> bool {
    let n = seq.len();
    for period in 1..n {
        if n % period != 0 {
            continue;
        }
        if (period..n).all(|i| seq[i] == seq[i - period]) {
            return false;
        }
    }
    true
}

/// Largest row sum of absolute scattering weights over all vertices:
/// `(d-1)(2/d) + |2/d - 1|`, which is `3 - 4/d` for `d >= 2` and `1` for
/// degrees one and two.  Any weighted count of `k`-step walks grows at
/// most like this to the `k`-th power.
pub fn scattering_growth(g: &MetricGraph) -> f64 {
    let mut rho: f64 = 1.0;
    for v in g.vertex_ids() {
        let d = g.degree(v) as f64;
        let row = if d >= 2.0 { 3.0 - 4.0 / d } else { 1.0 };
        rho = rho.max(row);
    }
    rho
}

/// Bond scattering matrix `S` with `S[b, b'] = beta(b', b)` when `b'`
/// feeds into `b` (head of `b'` equals tail of `b`), zero otherwise.
/// Column sums equal 1; the matrix is orthogonal.
pub fn bond_scattering_matrix(g: &MetricGraph) -> DMatrix<f64> {
    let n = g.bond_count();
    let mut s = DMatrix::zeros(n, n);
    for b_in in g.bond_ids() {
        let v = g.bond_head(b_in);
        let d = g.degree(v) as f64;
        for &b_out in g.outgoing_bonds(v) {
            s[(b_out.0, b_in.0)] = 2.0 / d - f64::from(b_out == b_in.reverse());
        }
    }
    s
}

/// Rigorous upper bound on the contribution to the heat-kernel path sum
/// `(4 pi t)^{-1/2} sum alpha(p) exp(-len(p)^2 / 4t)` from every path
/// longer than `l_cut`.
///
/// Paths are grouped by their number `k` of complete original edges: a
/// weighted count of such paths is at most `12 rho^k` with `rho` from
/// [`scattering_growth`], and each omitted path has length at least
/// `max(k a0, l_cut)`.  The series is summed directly and closed with a
/// geometric majorant once the term ratio `rho exp(-(2k+1) a0^2/4t)`
/// drops below one half, which the validity condition
/// `t < a0^2 / (2 ln m)` guarantees.  The bound is monotone decreasing
/// in `l_cut` and tends to zero as `l_cut` grows.
pub fn truncation_bound(g: &MetricGraph, t: f64, l_cut: f64) -> Result<f64, PathError> {
    if !(t > 0.0) {
        return Err(PathError::InvalidTime(t));
    }
    if !(l_cut >= 0.0) {
        return Err(PathError::NegativeLengthCut(l_cut));
    }
    let m = g.original_edge_count();
    let a0 = g.min_original_edge_length();
    if m >= 2 {
        let t_max = a0 * a0 / (2.0 * (m as f64).ln());
        if t >= t_max {
            return Err(PathError::TailBoundUnavailable { t, t_max });
        }
    }
    let rho = scattering_growth(g);
    let ln_rho = rho.ln();
    let mut sum = Neumaier::new();
    let mut k = 0usize;
    loop {
        let reach = (k as f64 * a0).max(l_cut);
        let term = (k as f64 * ln_rho - reach * reach / (4.0 * t)).exp();
        sum.add(term);
        if k as f64 * a0 >= l_cut {
            let ratio = rho * (-(2.0 * k as f64 + 1.0) * a0 * a0 / (4.0 * t)).exp();
            if ratio < 0.5 && (term < 1e-17 * sum.value() || term == 0.0) {
                sum.add(term * ratio / (1.0 - ratio));
                break;
            }
        }
        k += 1;
        if k > 1_000_000 {
            // Unreachable under the validity condition.
            return Err(PathError::TailBoundUnavailable {
                t,
                t_max: a0 * a0 / (2.0 * (m as f64).max(2.0).ln()),
            });
        }
    }
    Ok(12.0 * sum.value() / (FOUR_PI * t).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn lengths(paths: &[BondPath]) -> Vec<f64> {
        paths.iter().map(|p| p.length).collect()
    }

    #[test]
    fn beta_values() {
        let star = zoo::star(3, 1.0);
        let center = star.vertex_by_name("c").unwrap();
        // Bond arriving at the center from tip 0, transferring to edge 1.
        let incoming = BondId(1);
        assert_eq!(star.bond_head(incoming), center);
        let transfer = beta(&star, incoming, BondId(2)).unwrap();
        assert!((transfer - 2.0 / 3.0).abs() < 1e-15);
        let bounce = beta(&star, incoming, BondId(0)).unwrap();
        assert!((bounce - (2.0 / 3.0 - 1.0)).abs() < 1e-15);

        // Bounce at a degree-one tip is Neumann reflection.
        let outgoing = BondId(0);
        let at_tip = beta(&star, outgoing, BondId(1)).unwrap();
        assert_eq!(at_tip, 1.0);

        // Artificial degree-two vertex: bounce 0, transfer 1.
        let interval = zoo::interval(1.0);
        let (g2, _v, _) = interval
            .insert_point_vertex(GraphPoint::new(EdgeId(0), 0.5))
            .unwrap();
        let first_half_fwd = BondId(0);
        let bounce = beta(&g2, first_half_fwd, first_half_fwd.reverse()).unwrap();
        assert_eq!(bounce, 0.0);
        let transfer = beta(&g2, first_half_fwd, BondId(2)).unwrap();
        assert_eq!(transfer, 1.0);

        assert!(beta(&interval, BondId(0), BondId(0)).is_err());
    }

    #[test]
    fn alpha_examples() {
        let star5 = zoo::star(5, 1.0);
        let center = star5.vertex_by_name("c").unwrap();
        assert!((path_coefficient(&star5, center, &[]).unwrap() - 0.4).abs() < 1e-15);

        // Interval endpoint to itself through the far end: 4/(1*1) * 1.
        let interval = zoo::interval(1.0);
        let u = interval.vertex_by_name("u").unwrap();
        let alpha = path_coefficient(&interval, u, &[BondId(0), BondId(1)]).unwrap();
        assert_eq!(alpha, 4.0);
    }

    #[test]
    fn interval_diagonal_paths_match_image_set() {
        // Oracle: the method of images for the Neumann interval.  At
        // x = y = 0.3 the image exponents with length at most 2 are
        // {0, 0.6, 1.4, 2, 2}, every coefficient 1.
        let g = zoo::interval(1.0);
        let q = GraphPoint::new(EdgeId(0), 0.3);
        let en = enumerate_paths(&g, q, q, 2.0).unwrap();
        let got = lengths(&en.paths);
        let want = [0.0, 0.6, 1.4, 2.0, 2.0];
        assert_eq!(got.len(), want.len(), "paths: {got:?}");
        for (a, b) in got.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{got:?}");
        }
        for p in &en.paths {
            assert!((p.alpha - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn star_center_short_cutoff_keeps_only_trivial() {
        let g = zoo::star(3, 1.0);
        let q = GraphPoint::new(EdgeId(0), 0.0);
        let en = enumerate_paths(&g, q, q, 0.5).unwrap();
        assert_eq!(en.paths.len(), 1);
        assert!(en.paths[0].bonds.is_empty());
        assert!((en.paths[0].alpha - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn direct_segment_between_interior_points() {
        let g = zoo::interval(1.0);
        let q1 = GraphPoint::new(EdgeId(0), 0.2);
        let q2 = GraphPoint::new(EdgeId(0), 0.9);
        let en = enumerate_paths(&g, q1, q2, 0.7).unwrap();
        assert_eq!(en.paths.len(), 1);
        assert!((en.paths[0].length - 0.7).abs() < 1e-12);
        assert!((en.paths[0].alpha - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deterministic_order_and_symmetry() {
        let g = zoo::k4(1.0);
        let q1 = GraphPoint::new(EdgeId(0), 0.25);
        let q2 = GraphPoint::new(EdgeId(4), 0.66);
        let fwd = enumerate_paths(&g, q1, q2, 3.5).unwrap();
        let bwd = enumerate_paths(&g, q2, q1, 3.5).unwrap();
        assert_eq!(fwd.paths.len(), bwd.paths.len());
        // Reversal preserves the (length, alpha) multiset.
        let mut key_f: Vec<(f64, f64)> = fwd.paths.iter().map(|p| (p.length, p.alpha)).collect();
        let mut key_b: Vec<(f64, f64)> = bwd.paths.iter().map(|p| (p.length, p.alpha)).collect();
        let cmp = |a: &(f64, f64), b: &(f64, f64)| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1));
        key_f.sort_by(cmp);
        key_b.sort_by(cmp);
        for (a, b) in key_f.iter().zip(&key_b) {
            assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
        }
        // Deterministic order: repeated runs agree exactly.
        let again = enumerate_paths(&g, q1, q2, 3.5).unwrap();
        for (p, q) in fwd.paths.iter().zip(&again.paths) {
            assert_eq!(p.bonds, q.bonds);
        }
    }

    #[test]
    fn edge_closed_paths_on_interval() {
        let g = zoo::interval(1.0);
        let classes = enumerate_edge_closed_paths(&g, EdgeId(0), 6.0).unwrap();
        // Trivial plus lengths 2, 4, 6, each appearing once per starting bond.
        let got: Vec<(f64, f64)> = classes.iter().map(|c| (c.length, c.coefficient)).collect();
        assert_eq!(got.len(), 7);
        assert_eq!(got[0], (0.0, 1.0));
        for (i, (len, coeff)) in got.iter().enumerate().skip(1) {
            let want = 2.0 * ((i + 1) / 2) as f64;
            assert!((len - want).abs() < 1e-12, "{got:?}");
            assert_eq!(*coeff, 1.0);
        }
        // The length-2 bounce is primitive, its square is not.
        assert!(classes[1].primitive);
        assert!(!classes[3].primitive);

        let only_trivial = enumerate_edge_closed_paths(&g, EdgeId(0), 0.0).unwrap();
        assert_eq!(only_trivial.len(), 1);
        assert_eq!(only_trivial[0].length, 0.0);
    }

    #[test]
    fn star_edge_closed_paths_shortest_nontrivial() {
        let g = zoo::star(5, 1.0);
        let classes = enumerate_edge_closed_paths(&g, EdgeId(0), 2.0).unwrap();
        let nontrivial: Vec<&CycleClass> = classes.iter().filter(|c| c.length > 0.0).collect();
        assert!(!nontrivial.is_empty());
        for c in &nontrivial {
            assert!((c.length - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_primitive_cycles() {
        let g = zoo::interval(1.0);
        let cycles = enumerate_primitive_cycles(&g, 10.0).unwrap();
        // Single class: the back-and-forth bounce, which equals its own
        // reversal and is counted once.
        assert_eq!(cycles.len(), 1);
        assert!((cycles[0].length - 2.0).abs() < 1e-12);
        assert_eq!(cycles[0].coefficient, 1.0);
    }

    #[test]
    fn k4_triangle_cycle_count() {
        // 4 triangles, 2 orientations each, rotations identified.
        let g = zoo::k4(1.0);
        let cycles = enumerate_primitive_cycles(&g, 3.0).unwrap();
        let triangles: Vec<&CycleClass> = cycles
            .iter()
            .filter(|c| (c.length - 3.0).abs() < 1e-12 && c.bonds.len() == 3)
            .collect();
        assert_eq!(triangles.len(), 8);
        for c in triangles {
            let want = (2.0f64 / 3.0).powi(3);
            assert!((c.coefficient - want).abs() < 1e-15);
        }
        let empty = enumerate_primitive_cycles(&g, 1.9).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn loop_graph_single_bond_cycles() {
        // A loop's two bonds are each closed walks of one bond; the
        // wrap-around transfer at the degree-two vertex weighs 1.
        let g = zoo::flower(0.4, 1.0);
        let cycles = enumerate_primitive_cycles(&g, 0.65).unwrap();
        let lens: Vec<f64> = cycles.iter().map(|c| c.length).collect();
        assert_eq!(lens.len(), 4, "{lens:?}");
        for c in &cycles {
            assert_eq!(c.bonds.len(), 1);
        }
    }

    #[test]
    fn scattering_matrix_columns_sum_to_one() {
        for (name, g) in zoo::zoo() {
            let s = bond_scattering_matrix(&g);
            for col in 0..s.ncols() {
                let sum: f64 = (0..s.nrows()).map(|r| s[(r, col)]).sum();
                assert!((sum - 1.0).abs() < 1e-14, "{name} column {col}: {sum}");
            }
            // Orthogonality inherited from the vertex blocks.
            let identity = DMatrix::<f64>::identity(s.nrows(), s.ncols());
            let diff = (&s * s.transpose() - identity).abs().max();
            assert!(diff < 1e-13, "{name}: {diff}");
        }
    }

    #[test]
    fn truncation_bound_dominates_interval_tail() {
        // Direct summation of the true omitted tail to k = 200.
        let g = zoo::interval(1.0);
        for &t in &[0.05, 0.2, 0.6] {
            for &l_cut in &[1.0, 2.0, 4.0] {
                let bound = truncation_bound(&g, t, l_cut).unwrap();
                let mut tail = 0.0;
                for k in 1..=200 {
                    // Paths from an interior midpoint: lengths 2k and, per
                    // endpoint pair, 2k +/- 2x with unit coefficients.
                    for len in [2.0 * k as f64, 2.0 * k as f64 - 1.0, 2.0 * k as f64 + 1.0] {
                        if len > l_cut {
                            tail += (-len * len / (4.0 * t)).exp();
                        }
                    }
                }
                tail /= (FOUR_PI * t).sqrt();
                assert!(bound >= tail, "t={t} l={l_cut}: bound {bound} < tail {tail}");
            }
        }
    }

    #[test]
    fn truncation_bound_monotone_and_vanishing() {
        for (name, g) in zoo::zoo() {
            let a0 = g.min_original_edge_length();
            let m = g.original_edge_count() as f64;
            let t_max = a0 * a0 / (2.0 * m.max(2.0).ln());
            for &t in &[0.05, 0.15] {
                if t >= t_max {
                    continue;
                }
                let mut l = 1.0;
                let mut prev = truncation_bound(&g, t, l).unwrap();
                for _ in 0..6 {
                    l *= 2.0;
                    let next = truncation_bound(&g, t, l).unwrap();
                    assert!(next <= prev, "{name}: bound increased at l_cut {l}");
                    prev = next;
                }
                assert!(prev < 1e-30, "{name}: bound does not vanish, {prev}");
            }
        }
    }

    #[test]
    fn truncation_bound_validity_window() {
        let g = zoo::k4(1.0);
        let t_max = 1.0 / (2.0 * 6.0f64.ln());
        assert!(truncation_bound(&g, t_max + 1e-6, 5.0).is_err());
        assert!(truncation_bound(&g, t_max - 1e-6, 5.0).is_ok());
        // Single-edge graphs have no validity restriction.
        let interval = zoo::interval(1.0);
        assert!(truncation_bound(&interval, 100.0, 5.0).is_ok());
    }

    #[test]
    fn negative_cutoff_rejected() {
        let g = zoo::interval(1.0);
        let q = GraphPoint::new(EdgeId(0), 0.3);
        assert!(enumerate_paths(&g, q, q, -1.0).is_err());
        assert!(enumerate_primitive_cycles(&g, -0.1).is_err());
        assert!(truncation_bound(&g, 0.1, -2.0).is_err());
    }
}
