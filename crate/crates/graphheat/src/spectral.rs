//! Eigenvalues and per-edge eigenfunction amplitudes.
//!
//! Three sources feed the same [`Spectrum`] / [`EigenBasis`] shapes:
//!
//! * closed forms for intervals, equilateral stars, and two-petal
//!   flowers;
//! * the adjacency-spectrum construction for completely symmetric
//!   equilateral graphs;
//! * a numerical secular solver for arbitrary graphs, locating the
//!   zeros of `det(I - S e^{i sigma L})` with `S` the bond scattering
//!   matrix and reading multiplicities off the singular values.
//!
//! On an edge parametrized by `x` every eigenfunction restricts to
//! `b cos(sigma x + phi)` with `b >= 0`; the pair `(b, phi)` is stored
//! per edge.  The zero mode is stored with `b = 1/sqrt(L)`, `phi = 0`,
//! a convention that the `b cos(sigma x + phi)` form cannot pin down on
//! its own.

use crate::closed_forms::SymmetricGraphData;
use crate::graph::{GraphPoint, MetricGraph};
use crate::ksum::Neumaier;
use crate::paths;
use nalgebra::{Complex, DMatrix, DVector};
use std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("sigma_max must be positive, got {0}")]
    InvalidSigmaMax(f64),
    #[error("spectrum holds {have} eigenfunctions, {want} requested")]
    InsufficientSpectrum { have: usize, want: usize },
    #[error(
        "secular root in ({lo}, {hi}) failed to isolate: residual {residual} after refinement"
    )]
    RootIsolation { lo: f64, hi: f64, residual: f64 },
    #[error("eigenvector separation failed at sigma = {sigma}: got {got}, expected {expected}")]
    EigenvectorSeparation {
        sigma: f64,
        got: usize,
        expected: usize,
    },
}

/// Where a spectrum came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    ClosedForm,
    Adjacency,
    Secular,
}

/// One eigenvalue level.
#[derive(Debug, Clone, Copy)]
pub struct Level {
    pub sigma: f64,
    pub lambda: f64,
    pub multiplicity: usize,
}

/// Ordered eigenvalue list with multiplicities.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub levels: Vec<Level>,
    pub source: SpectrumSource,
    pub sigma_max: f64,
}

impl Spectrum {
    /// Number of eigenvalues counted with multiplicity.
    pub fn count(&self) -> usize {
        self.levels.iter().map(|l| l.multiplicity).sum()
    }

    /// Eigenvalues expanded with multiplicity, ascending.
    pub fn sigmas(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.count());
        for l in &self.levels {
            out.extend(std::iter::repeat(l.sigma).take(l.multiplicity));
        }
        out
    }
}

fn cluster_levels(mut sigmas: Vec<f64>, source: SpectrumSource, sigma_max: f64) -> Spectrum {
    sigmas.sort_by(f64::total_cmp);
    let mut levels: Vec<Level> = Vec::new();
    for s in sigmas {
        match levels.last_mut() {
            Some(l) if (s - l.sigma).abs() <= 1e-9 * (1.0 + s) => l.multiplicity += 1,
            _ => levels.push(Level {
                sigma: s,
                lambda: s * s,
                multiplicity: 1,
            }),
        }
    }
    Spectrum {
        levels,
        source,
        sigma_max,
    }
}

/// Amplitude and phase of an eigenfunction on one edge:
/// `psi(x) = b cos(sigma x + phi)` with `b >= 0` and `phi` in `[0, 2pi)`.
#[derive(Debug, Clone, Copy)]
pub struct EdgeAmplitude {
    pub b: f64,
    pub phi: f64,
}

impl EdgeAmplitude {
    fn zero() -> Self {
        Self { b: 0.0, phi: 0.0 }
    }

    /// Build from `psi(x) = A cos(sigma x) + B sin(sigma x)`.
    fn from_cos_sin(a: f64, b: f64) -> Self {
        let amp = a.hypot(b);
        if amp < 1e-300 {
            return Self::zero();
        }
        let mut phi = (-b).atan2(a);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        Self { b: amp, phi }
    }

    fn eval(&self, sigma: f64, x: f64) -> f64 {
        self.b * (sigma * x + self.phi).cos()
    }
}

/// A single normalized eigenfunction described edge by edge.
#[derive(Debug, Clone)]
pub struct EigenFunction {
    pub sigma: f64,
    pub lambda: f64,
    /// One amplitude per edge, indexed like the graph's edges.
    pub amps: Vec<EdgeAmplitude>,
}

impl EigenFunction {
    pub fn eval(&self, q: GraphPoint) -> f64 {
        self.amps[q.edge.0].eval(self.sigma, q.x)
    }
}

/// An orthonormal eigenfunction family ordered by frequency.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    pub functions: Vec<EigenFunction>,
    pub edge_lengths: Vec<f64>,
    pub total_length: f64,
}

impl EigenBasis {
    /// Spectrum view (levels with multiplicities).
    pub fn spectrum(&self, source: SpectrumSource, sigma_max: f64) -> Spectrum {
        cluster_levels(
            self.functions.iter().map(|f| f.sigma).collect(),
            source,
            sigma_max,
        )
    }

    /// Per-edge amplitudes of every eigenfunction on edge `e`.
    pub fn edge_amplitudes(&self, e: crate::graph::EdgeId) -> Vec<EdgeAmplitude> {
        self.functions.iter().map(|f| f.amps[e.0]).collect()
    }

    /// L2 inner product of two member functions (closed form per edge).
    pub fn inner_product(&self, i: usize, j: usize) -> f64 {
        let f = &self.functions[i];
        let g = &self.functions[j];
        let mut acc = Neumaier::new();
        for (e, &len) in self.edge_lengths.iter().enumerate() {
            acc.add(edge_inner_product(
                f.sigma, f.amps[e], g.sigma, g.amps[e], len,
            ));
        }
        acc.value()
    }

    /// Truncated eigenfunction-expansion kernel
    /// `sum_{j<n} e^{-lambda_j t} psi_j(q1) psi_j(q2)` plus a Weyl-envelope
    /// tail estimate.
    pub fn heat_kernel(
        &self,
        t: f64,
        q1: GraphPoint,
        q2: GraphPoint,
        n_terms: usize,
    ) -> (f64, f64) {
        let n = n_terms.min(self.functions.len());
        let mut acc = Neumaier::new();
        for f in &self.functions[..n] {
            acc.add((-f.lambda * t).exp() * f.eval(q1) * f.eval(q2));
        }
        let tail = if n < self.functions.len() {
            let sigma_n = self.functions[n].sigma.max(1e-9);
            let b2_max = self
                .functions
                .iter()
                .flat_map(|f| f.amps.iter().map(|a| a.b * a.b))
                .fold(0.0, f64::max);
            // Density L/pi per unit sigma; integral bound on the Gaussian tail.
            b2_max * self.total_length / PI * (-sigma_n * sigma_n * t).exp()
                / (2.0 * sigma_n * t)
        } else {
            0.0
        };
        (acc.value(), tail)
    }

    /// Cesàro average `(1/M) sum_{j<=M} psi_j(q)^2`.
    pub fn local_weyl_average(&self, q: GraphPoint, m: usize) -> Result<f64, SpectralError> {
        if self.functions.len() < m {
            return Err(SpectralError::InsufficientSpectrum {
                have: self.functions.len(),
                want: m,
            });
        }
        let mut acc = Neumaier::new();
        for f in &self.functions[..m] {
            let v = f.eval(q);
            acc.add(v * v);
        }
        Ok(acc.value() / m as f64)
    }

    /// Cesàro average `(1/M) sum_{j<=M} b_j(e)^2`.
    pub fn amplitude_average(
        &self,
        e: crate::graph::EdgeId,
        m: usize,
    ) -> Result<f64, SpectralError> {
        if self.functions.len() < m {
            return Err(SpectralError::InsufficientSpectrum {
                have: self.functions.len(),
                want: m,
            });
        }
        let mut acc = Neumaier::new();
        for f in &self.functions[..m] {
            let b = f.amps[e.0].b;
            acc.add(b * b);
        }
        Ok(acc.value() / m as f64)
    }
}

/// `int_0^len (A1 cos + B1 sin)(sigma1 x) (A2 cos + B2 sin)(sigma2 x) dx`
/// for amplitude-phase pairs; closed form, any frequencies.
fn edge_inner_product(
    sigma1: f64,
    a1: EdgeAmplitude,
    sigma2: f64,
    a2: EdgeAmplitude,
    len: f64,
) -> f64 {
    // Write each as b cos(sigma x + phi) and use product-to-sum:
    // cos u cos v = (cos(u - v) + cos(u + v)) / 2.
    let integral_cos = |omega: f64, phase: f64| -> f64 {
        if omega.abs() < 1e-12 {
            len * phase.cos()
        } else {
            ((omega * len + phase).sin() - phase.sin()) / omega
        }
    };
    0.5 * a1.b
        * a2.b
        * (integral_cos(sigma1 - sigma2, a1.phi - a2.phi)
            + integral_cos(sigma1 + sigma2, a1.phi + a2.phi))
}

/// Families with closed-form spectra and amplitudes.
#[derive(Debug, Clone, Copy)]
pub enum ClosedFormFamily {
    /// Neumann interval of length `a`.
    Interval { a: f64 },
    /// Equilateral star, `d` edges of length `a`, coordinates outward
    /// from the center.
    Star { d: usize, a: f64 },
    /// Two-petal flower with petals `a` and `total - a`.
    Flower { a: f64, total: f64 },
}

/// Closed-form spectrum and orthonormal amplitudes up to `sigma_max`.
pub fn closed_form_spectrum(
    family: ClosedFormFamily,
    sigma_max: f64,
) -> Result<(Spectrum, EigenBasis), SpectralError> {
    if !(sigma_max > 0.0) {
        return Err(SpectralError::InvalidSigmaMax(sigma_max));
    }
    let basis = match family {
        ClosedFormFamily::Interval { a } => interval_basis(a, sigma_max),
        ClosedFormFamily::Star { d, a } => star_basis(d, a, sigma_max),
        ClosedFormFamily::Flower { a, total } => flower_basis(a, total, sigma_max),
    };
    let spectrum = basis.spectrum(SpectrumSource::ClosedForm, sigma_max);
    Ok((spectrum, basis))
}

fn sort_functions(functions: &mut [EigenFunction]) {
    // Frequency first; ties keep construction order (sort is stable).
    functions.sort_by(|f, g| f.sigma.total_cmp(&g.sigma));
}

fn interval_basis(a: f64, sigma_max: f64) -> EigenBasis {
    let mut functions = vec![EigenFunction {
        sigma: 0.0,
        lambda: 0.0,
        amps: vec![EdgeAmplitude {
            b: 1.0 / a.sqrt(),
            phi: 0.0,
        }],
    }];
    let mut k = 1;
    loop {
        let sigma = k as f64 * PI / a;
        if sigma > sigma_max {
            break;
        }
        functions.push(EigenFunction {
            sigma,
            lambda: sigma * sigma,
            amps: vec![EdgeAmplitude {
                b: (2.0 / a).sqrt(),
                phi: 0.0,
            }],
        });
        k += 1;
    }
    EigenBasis {
        functions,
        edge_lengths: vec![a],
        total_length: a,
    }
}

/// Orthonormal basis of the zero-sum subspace of R^d (Helmert rows).
fn helmert_rows(d: usize) -> Vec<Vec<f64>> {
    (1..d)
        .map(|j| {
            let norm = (j as f64 * (j as f64 + 1.0)).sqrt();
            let mut row = vec![0.0; d];
            for item in row.iter_mut().take(j) {
                *item = 1.0 / norm;
            }
            row[j] = -(j as f64) / norm;
            row
        })
        .collect()
}

fn star_basis(d: usize, a: f64, sigma_max: f64) -> EigenBasis {
    let df = d as f64;
    let total = df * a;
    let mut functions = vec![EigenFunction {
        sigma: 0.0,
        lambda: 0.0,
        amps: vec![
            EdgeAmplitude {
                b: 1.0 / total.sqrt(),
                phi: 0.0,
            };
            d
        ],
    }];
    // Center-symmetric cosine modes.
    let mut k = 1;
    loop {
        let sigma = k as f64 * PI / a;
        if sigma > sigma_max {
            break;
        }
        functions.push(EigenFunction {
            sigma,
            lambda: sigma * sigma,
            amps: vec![
                EdgeAmplitude {
                    b: (2.0 / (df * a)).sqrt(),
                    phi: 0.0,
                };
                d
            ],
        });
        k += 1;
    }
    // Center-vanishing sine modes, d - 1 per frequency.
    let rows = helmert_rows(d);
    let mut k = 0;
    loop {
        let sigma = (k as f64 + 0.5) * PI / a;
        if sigma > sigma_max {
            break;
        }
        for row in &rows {
            let amps = row
                .iter()
                .map(|&c| {
                    let coeff = (2.0 / a).sqrt() * c;
                    if coeff == 0.0 {
                        EdgeAmplitude::zero()
                    } else {
                        EdgeAmplitude {
                            b: coeff.abs(),
                            // sin with positive coefficient is phase 3pi/2,
                            // negative is pi/2.
                            phi: if coeff > 0.0 { 1.5 * PI } else { 0.5 * PI },
                        }
                    }
                })
                .collect();
            functions.push(EigenFunction {
                sigma,
                lambda: sigma * sigma,
                amps,
            });
        }
        k += 1;
    }
    sort_functions(&mut functions);
    EigenBasis {
        functions,
        edge_lengths: vec![a; d],
        total_length: total,
    }
}

fn flower_basis(a: f64, total: f64, sigma_max: f64) -> EigenBasis {
    let b_len = total - a;
    let mut functions = vec![EigenFunction {
        sigma: 0.0,
        lambda: 0.0,
        amps: vec![
            EdgeAmplitude {
                b: 1.0 / total.sqrt(),
                phi: 0.0,
            };
            2
        ],
    }];
    let wrap = |phi: f64| phi.rem_euclid(2.0 * PI);
    // Reflection-even modes live on the whole graph, even about each
    // petal midpoint; continuity fixes the relative sign (-1)^k.
    let mut k = 1i64;
    loop {
        let sigma = 2.0 * PI * k as f64 / total;
        if sigma > sigma_max {
            break;
        }
        let amp = (2.0 / total).sqrt();
        let sign_flip = k % 2 != 0;
        functions.push(EigenFunction {
            sigma,
            lambda: sigma * sigma,
            amps: vec![
                EdgeAmplitude {
                    b: amp,
                    phi: wrap(-sigma * 0.5 * a),
                },
                EdgeAmplitude {
                    b: amp,
                    phi: wrap(-sigma * 0.5 * b_len + if sign_flip { PI } else { 0.0 }),
                },
            ],
        });
        k += 1;
    }
    // Reflection-odd modes are supported on a single petal.
    for (petal, len) in [(0usize, a), (1usize, b_len)] {
        let mut k = 1i64;
        loop {
            let sigma = 2.0 * PI * k as f64 / len;
            if sigma > sigma_max {
                break;
            }
            let mut amps = vec![EdgeAmplitude::zero(); 2];
            amps[petal] = EdgeAmplitude {
                b: (2.0 / len).sqrt(),
                phi: 1.5 * PI,
            };
            functions.push(EigenFunction {
                sigma,
                lambda: sigma * sigma,
                amps,
            });
            k += 1;
        }
    }
    sort_functions(&mut functions);
    EigenBasis {
        functions,
        edge_lengths: vec![a, b_len],
        total_length: total,
    }
}

/// Spectrum of a completely symmetric equilateral graph from its
/// adjacency eigenvalues: frequency combs `(sigma + 2 pi k/a)^2` for
/// `sigma` in `Q`, the lattice `(k pi/a)^2` with parity-dependent
/// multiplicities, and the simple zero mode.
pub fn symmetric_spectrum(
    data: &SymmetricGraphData,
    sigma_max: f64,
) -> Result<Spectrum, SpectralError> {
    if !(sigma_max > 0.0) {
        return Err(SpectralError::InvalidSigmaMax(sigma_max));
    }
    let a = data.a;
    let n = data.n;
    let d = data.d;
    let mut sigmas = vec![0.0];
    for &(sigma_q, mu) in &data.q_set {
        let mut k = 0i64;
        loop {
            let up = sigma_q + 2.0 * PI * k as f64 / a;
            let mut pushed = false;
            if up <= sigma_max {
                sigmas.extend(std::iter::repeat(up).take(mu));
                pushed = true;
            }
            if k >= 1 {
                let down = 2.0 * PI * k as f64 / a - sigma_q;
                if down <= sigma_max {
                    sigmas.extend(std::iter::repeat(down).take(mu));
                    pushed = true;
                }
            }
            if !pushed && k >= 1 {
                break;
            }
            k += 1;
        }
    }
    let base = (d as isize - 2) as usize * n / 2;
    let mut k = 1usize;
    loop {
        let sigma = k as f64 * PI / a;
        if sigma > sigma_max {
            break;
        }
        let mult = if data.bipartite {
            base + 2
        } else if k % 2 == 0 {
            base + 2
        } else {
            base
        };
        sigmas.extend(std::iter::repeat(sigma).take(mult));
        k += 1;
    }
    Ok(cluster_levels(sigmas, SpectrumSource::Adjacency, sigma_max))
}

/// Solver knobs; defaults follow the library-wide conventions.
#[derive(Debug, Clone, Copy)]
pub struct SecularOptions {
    /// Scan step; default `min(pi/(4L), 0.01)`.
    pub grid_step: Option<f64>,
    /// Singular values below `rel_tol * largest` count toward the
    /// eigenvalue multiplicity.
    pub sv_rel_tol: f64,
    /// Acceptance threshold on the smallest singular value at a root.
    pub accept_tol: f64,
}

impl Default for SecularOptions {
    fn default() -> Self {
        Self {
            grid_step: None,
            sv_rel_tol: 1e-8,
            accept_tol: 1e-7,
        }
    }
}

/// Spectrum plus orthonormal eigenfunctions from the secular solver.
#[derive(Debug, Clone)]
pub struct SecularSolution {
    pub spectrum: Spectrum,
    pub basis: EigenBasis,
}

/// Bond-scattering secular solver: scan `sigma` in `(0, sigma_max]` for
/// zeros of the smallest singular value of `I - S e^{i sigma L}`,
/// refine each dip, read multiplicities off the singular values, and
/// reconstruct normalized real eigenfunctions from the null space.  The
/// zero mode is appended with the `1/sqrt(L)` convention.
pub fn secular_spectrum(
    g: &MetricGraph,
    sigma_max: f64,
    opts: SecularOptions,
) -> Result<SecularSolution, SpectralError> {
    if !(sigma_max > 0.0) {
        return Err(SpectralError::InvalidSigmaMax(sigma_max));
    }
    let s_real = paths::bond_scattering_matrix(g);
    let s_cplx = s_real.map(|x| Complex::new(x, 0.0));
    let bond_lengths: Vec<f64> = g.bond_ids().map(|b| g.bond_length(b)).collect();
    let secular = |sigma: f64| -> DMatrix<Complex<f64>> {
        let n = bond_lengths.len();
        let mut m = DMatrix::from_diagonal_element(n, n, Complex::new(1.0, 0.0));
        for col in 0..n {
            let phase = Complex::cis(sigma * bond_lengths[col]);
            for row in 0..n {
                m[(row, col)] -= s_cplx[(row, col)] * phase;
            }
        }
        m
    };
    let smallest_sv = |sigma: f64| -> f64 {
        let sv = secular(sigma).singular_values();
        sv.iter().copied().fold(f64::INFINITY, f64::min)
    };

    let step = opts
        .grid_step
        .unwrap_or_else(|| (PI / (4.0 * g.total_length())).min(0.01));
    let mut scan: Vec<(f64, f64)> = Vec::new();
    let mut sigma = step;
    while sigma <= sigma_max + 2.0 * step {
        scan.push((sigma, smallest_sv(sigma)));
        sigma += step;
    }

    let mut functions: Vec<EigenFunction> = vec![EigenFunction {
        sigma: 0.0,
        lambda: 0.0,
        amps: vec![
            EdgeAmplitude {
                b: 1.0 / g.total_length().sqrt(),
                phi: 0.0,
            };
            g.edge_count()
        ],
    }];
    let mut sigmas = vec![0.0];

    for i in 1..scan.len().saturating_sub(1) {
        let (s_prev, s_here, s_next) = (scan[i - 1].1, scan[i].1, scan[i + 1].1);
        if !(s_here < s_prev && s_here <= s_next) {
            continue;
        }
        let (lo, hi) = (scan[i - 1].0, scan[i + 1].0);
        let sigma_star = golden_minimize(&smallest_sv, lo, hi, 1e-13 * (1.0 + hi));
        if sigma_star > sigma_max + 1e-9 * (1.0 + sigma_max) {
            continue;
        }
        let m_star = secular(sigma_star);
        let svd = m_star.clone().svd(false, true);
        let mut sv: Vec<(usize, f64)> = svd
            .singular_values
            .iter()
            .copied()
            .enumerate()
            .collect();
        sv.sort_by(|p, q| p.1.total_cmp(&q.1));
        let largest = sv.last().unwrap().1;
        let residual = sv[0].1;
        if residual > opts.accept_tol * largest.max(1.0) {
            return Err(SpectralError::RootIsolation {
                lo,
                hi,
                residual,
            });
        }
        let mult = sv
            .iter()
            .filter(|&&(_, s)| s < opts.sv_rel_tol * largest)
            .count();
        let v_t = svd.v_t.as_ref().expect("requested V^H");
        let null_vectors: Vec<DVector<Complex<f64>>> = sv[..mult]
            .iter()
            .map(|&(idx, _)| {
                DVector::from_iterator(
                    v_t.ncols(),
                    (0..v_t.ncols()).map(|j| v_t[(idx, j)].conj()),
                )
            })
            .collect();
        let funcs = eigenfunctions_from_null_space(g, sigma_star, &null_vectors, mult)?;
        for f in funcs {
            sigmas.extend(std::iter::repeat(sigma_star).take(1));
            functions.push(f);
        }
    }

    sort_functions(&mut functions);
    let basis = EigenBasis {
        functions,
        edge_lengths: g.edge_ids().map(|e| g.edge_length(e)).collect(),
        total_length: g.total_length(),
    };
    let spectrum = cluster_levels(sigmas, SpectrumSource::Secular, sigma_max);
    Ok(SecularSolution { spectrum, basis })
}

/// Golden-section minimization of a V-shaped function.
fn golden_minimize(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> f64 {
    let inv_phi = 0.618_033_988_749_894_9;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > width {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Turn secular null vectors into orthonormal real eigenfunctions.  The
/// candidates are the real and imaginary parts of the wave
/// reconstruction; a deterministic Gram-Schmidt in edge order picks an
/// orthonormal set of the right dimension.
fn eigenfunctions_from_null_space(
    g: &MetricGraph,
    sigma: f64,
    null_vectors: &[DVector<Complex<f64>>],
    expected: usize,
) -> Result<Vec<EigenFunction>, SpectralError> {
    let m = g.edge_count();
    // Candidate functions as (A_e, B_e) pairs per edge.
    let mut candidates: Vec<Vec<(f64, f64)>> = Vec::new();
    for a in null_vectors {
        let mut re = Vec::with_capacity(m);
        let mut im = Vec::with_capacity(m);
        for e in 0..m {
            let len = g.edge_length(crate::graph::EdgeId(e));
            let fwd = a[2 * e];
            let bwd = a[2 * e + 1] * Complex::cis(sigma * len);
            let big_a = fwd + bwd;
            let big_b = Complex::new(0.0, 1.0) * (fwd - bwd);
            re.push((big_a.re, big_b.re));
            im.push((big_a.im, big_b.im));
        }
        candidates.push(re);
        candidates.push(im);
    }

    let ip = |f: &[(f64, f64)], h: &[(f64, f64)]| -> f64 {
        let mut acc = Neumaier::new();
        for e in 0..m {
            let len = g.edge_length(crate::graph::EdgeId(e));
            acc.add(cos_sin_inner_product(sigma, f[e], h[e], len));
        }
        acc.value()
    };

    let mut kept: Vec<Vec<(f64, f64)>> = Vec::new();
    for mut cand in candidates {
        if kept.len() == expected {
            break;
        }
        let scale = ip(&cand, &cand);
        if scale < 1e-24 {
            continue;
        }
        for k in kept.iter() {
            let proj = ip(&cand, k);
            for e in 0..m {
                cand[e].0 -= proj * k[e].0;
                cand[e].1 -= proj * k[e].1;
            }
        }
        let norm2 = ip(&cand, &cand);
        if norm2 > 1e-12 * scale.max(1e-12) {
            let inv = 1.0 / norm2.sqrt();
            for e in 0..m {
                cand[e].0 *= inv;
                cand[e].1 *= inv;
            }
            kept.push(cand);
        }
    }
    if kept.len() != expected {
        return Err(SpectralError::EigenvectorSeparation {
            sigma,
            got: kept.len(),
            expected,
        });
    }
    Ok(kept
        .into_iter()
        .map(|coeffs| EigenFunction {
            sigma,
            lambda: sigma * sigma,
            amps: coeffs
                .into_iter()
                .map(|(a, b)| EdgeAmplitude::from_cos_sin(a, b))
                .collect(),
        })
        .collect())
}

/// `int_0^len (A1 cos + B1 sin)(A2 cos + B2 sin) dx` at one frequency.
fn cos_sin_inner_product(sigma: f64, f: (f64, f64), h: (f64, f64), len: f64) -> f64 {
    if sigma.abs() < 1e-12 {
        return f.0 * h.0 * len;
    }
    let s2 = (2.0 * sigma * len).sin();
    let c2 = (2.0 * sigma * len).cos();
    let i_cc = 0.5 * len + s2 / (4.0 * sigma);
    let i_ss = 0.5 * len - s2 / (4.0 * sigma);
    let i_cs = (1.0 - c2) / (4.0 * sigma);
    f.0 * h.0 * i_cc + (f.0 * h.1 + f.1 * h.0) * i_cs + f.1 * h.1 * i_ss
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeId;
    use crate::zoo;

    #[test]
    fn interval_closed_form() {
        let (spec, basis) =
            closed_form_spectrum(ClosedFormFamily::Interval { a: 1.0 }, 20.0).unwrap();
        assert_eq!(spec.levels[0].sigma, 0.0);
        assert_eq!(spec.levels[0].multiplicity, 1);
        assert!((spec.levels[1].lambda - PI * PI).abs() < 1e-12);
        for f in &basis.functions[1..] {
            assert!((f.amps[0].b - 2.0f64.sqrt()).abs() < 1e-12);
            assert_eq!(f.amps[0].phi, 0.0);
        }
    }

    #[test]
    fn star_closed_form_multiplicities_and_amplitudes() {
        let (spec, basis) = closed_form_spectrum(ClosedFormFamily::Star { d: 5, a: 1.0 }, 10.0)
            .unwrap();
        // sigma = pi/2 carries multiplicity d - 1 = 4.
        let level = spec
            .levels
            .iter()
            .find(|l| (l.sigma - 0.5 * PI).abs() < 1e-9)
            .unwrap();
        assert_eq!(level.multiplicity, 4);
        // lambda = (pi/2)^2 as an eigenvalue value.
        assert!((level.lambda - 0.25 * PI * PI).abs() < 1e-12);
        // Symmetric modes carry b^2 = 2/(a d) on every edge.
        let sym = basis
            .functions
            .iter()
            .find(|f| (f.sigma - PI).abs() < 1e-9)
            .unwrap();
        for amp in &sym.amps {
            assert!((amp.b * amp.b - 0.4).abs() < 1e-12);
        }
    }

    #[test]
    fn flower_closed_form_supported_modes() {
        let (spec, basis) =
            closed_form_spectrum(ClosedFormFamily::Flower { a: 0.4, total: 1.0 }, 25.0).unwrap();
        // sigma = 2 pi / 0.6 present with zero amplitude on the 0.4 petal.
        let sigma_odd = 2.0 * PI / 0.6;
        let f = basis
            .functions
            .iter()
            .find(|f| (f.sigma - sigma_odd).abs() < 1e-9)
            .unwrap();
        assert_eq!(f.amps[0].b, 0.0);
        assert!(f.amps[1].b > 0.0);
        assert!(spec.levels.iter().any(|l| (l.sigma - sigma_odd).abs() < 1e-9));
    }

    #[test]
    fn bases_are_orthonormal() {
        for (_, basis) in [
            closed_form_spectrum(ClosedFormFamily::Interval { a: 1.0 }, 40.0).unwrap(),
            closed_form_spectrum(ClosedFormFamily::Star { d: 5, a: 1.0 }, 15.0).unwrap(),
            closed_form_spectrum(ClosedFormFamily::Flower { a: 0.4, total: 1.0 }, 40.0).unwrap(),
        ] {
            let n = basis.functions.len().min(20);
            for i in 0..n {
                for j in i..n {
                    let ip = basis.inner_product(i, j);
                    let want = f64::from(i == j);
                    assert!(
                        (ip - want).abs() < 1e-10,
                        "({i},{j}): {ip}, sigmas {} {}",
                        basis.functions[i].sigma,
                        basis.functions[j].sigma
                    );
                }
            }
        }
    }

    #[test]
    fn symmetric_spectrum_k4() {
        let data = SymmetricGraphData::from_graph(&zoo::k4(1.0)).unwrap();
        let spec = symmetric_spectrum(&data, 10.0).unwrap();
        let sigma_q = (-1.0f64 / 3.0).acos();
        let find = |s: f64| {
            spec.levels
                .iter()
                .find(|l| (l.sigma - s).abs() < 1e-9)
                .map(|l| l.multiplicity)
        };
        assert_eq!(find(sigma_q), Some(3));
        assert_eq!(find(PI), Some(2));
        assert_eq!(find(2.0 * PI - sigma_q), Some(3));
        assert_eq!(find(2.0 * PI), Some(4));
        assert_eq!(spec.levels[0].multiplicity, 1);
        assert_eq!(spec.levels[0].sigma, 0.0);
    }

    #[test]
    fn symmetric_spectrum_cube_odd_multiplicities() {
        let data = SymmetricGraphData::from_graph(&zoo::cube(1.0)).unwrap();
        let spec = symmetric_spectrum(&data, 7.0).unwrap();
        // Bipartite: every lattice level carries (d/2 - 1) n + 2 = 6.
        for k in [1.0, 2.0] {
            let level = spec
                .levels
                .iter()
                .find(|l| (l.sigma - k * PI).abs() < 1e-9)
                .unwrap();
            assert_eq!(level.multiplicity, 6, "k = {k}");
        }
    }

    #[test]
    fn secular_interval_roots_are_simple() {
        let g = zoo::interval(1.0);
        let sol = secular_spectrum(&g, 12.0, SecularOptions::default()).unwrap();
        let want: Vec<f64> = (0..=3).map(|k| k as f64 * PI).collect();
        assert_eq!(sol.spectrum.levels.len(), 4);
        for (level, w) in sol.spectrum.levels.iter().zip(&want) {
            assert!((level.sigma - w).abs() < 1e-10, "{} vs {w}", level.sigma);
            assert_eq!(level.multiplicity, 1);
        }
        // Amplitudes match the closed form.
        for f in &sol.basis.functions[1..] {
            assert!((f.amps[0].b - 2.0f64.sqrt()).abs() < 1e-8);
            let phi = f.amps[0].phi.min(2.0 * PI - f.amps[0].phi);
            assert!(phi < 1e-7, "phi = {}", f.amps[0].phi);
        }
    }

    #[test]
    fn secular_star_multiplicities() {
        let g = zoo::star(5, 1.0);
        let sol = secular_spectrum(&g, 5.0, SecularOptions::default()).unwrap();
        let level = sol
            .spectrum
            .levels
            .iter()
            .find(|l| (l.sigma - 0.5 * PI).abs() < 1e-8)
            .unwrap();
        assert_eq!(level.multiplicity, 4);
        let simple = sol
            .spectrum
            .levels
            .iter()
            .find(|l| (l.sigma - PI).abs() < 1e-8)
            .unwrap();
        assert_eq!(simple.multiplicity, 1);
    }

    #[test]
    fn secular_matches_adjacency_on_k4() {
        let g = zoo::k4(1.0);
        let sol = secular_spectrum(&g, 8.0, SecularOptions::default()).unwrap();
        let data = SymmetricGraphData::from_graph(&g).unwrap();
        let reference = symmetric_spectrum(&data, 8.0).unwrap();
        assert_eq!(sol.spectrum.levels.len(), reference.levels.len());
        for (a, b) in sol.spectrum.levels.iter().zip(&reference.levels) {
            assert!(
                (a.sigma - b.sigma).abs() < 1e-10,
                "{} vs {}",
                a.sigma,
                b.sigma
            );
            assert_eq!(a.multiplicity, b.multiplicity);
        }
    }

    #[test]
    fn secular_basis_is_orthonormal_and_normalized() {
        let g = zoo::k4(1.0);
        let sol = secular_spectrum(&g, 7.0, SecularOptions::default()).unwrap();
        let n = sol.basis.functions.len().min(20);
        for i in 0..n {
            for j in i..n {
                let ip = sol.basis.inner_product(i, j);
                let want = f64::from(i == j);
                assert!((ip - want).abs() < 1e-8, "({i},{j}): {ip}");
            }
        }
    }

    #[test]
    fn eigen_kernel_long_time_limit() {
        let (_, basis) = closed_form_spectrum(ClosedFormFamily::Star { d: 5, a: 1.0 }, 60.0)
            .unwrap();
        let q = GraphPoint::new(EdgeId(2), 0.4);
        let (value, tail) = basis.heat_kernel(50.0, q, q, basis.functions.len());
        assert!(tail.abs() < 1e-15);
        assert!((value - 0.2).abs() < 1e-12);
    }

    #[test]
    fn weyl_averages() {
        let (_, basis) = closed_form_spectrum(ClosedFormFamily::Star { d: 5, a: 1.0 }, 1300.0)
            .unwrap();
        assert!(basis.functions.len() >= 2000);
        let center = basis
            .local_weyl_average(GraphPoint::new(EdgeId(0), 0.0), 2000)
            .unwrap();
        assert!((center - 0.08).abs() / 0.08 < 0.05, "{center}");
        let interior = basis
            .local_weyl_average(GraphPoint::new(EdgeId(0), 0.3), 2000)
            .unwrap();
        assert!((interior - 0.2).abs() / 0.2 < 0.05, "{interior}");
        let amp = basis.amplitude_average(EdgeId(1), 2000).unwrap();
        assert!((amp - 0.4).abs() / 0.4 < 0.05, "{amp}");
        // M = 1 is the flat mode exactly.
        let flat = basis
            .local_weyl_average(GraphPoint::new(EdgeId(0), 0.3), 1)
            .unwrap();
        assert!((flat - 0.2).abs() < 1e-12);
        assert!(basis
            .local_weyl_average(GraphPoint::new(EdgeId(0), 0.3), 10_000_000)
            .is_err());
    }
}
