//! Truncated Fock space over a discretized photon-mode grid with indefinite metric.
//!
//! Each mode `m` sits at a momentum node with weight `w` and carries a polarization
//! four-vector `eps_m` and a sign `s_m`, Krein-orthonormal within its node:
//! `<eps_m, eps_n> = s_m delta_mn` for the node form `<f, g> = -conj(f0) g0 + conj(f).g`.
//! With `c_m` the ordinary ladder matrices, the field operators are
//!
//! `a(conj f) = sum_m sqrt(w) conj(phi_m(f)) c_m`, `a+(g) = sum_m sqrt(w) phi_m(g) s_m c_m^H`,
//!
//! where `phi_m(f) = <eps_m, f>`, so `[a(conj f), a+(g)] = sum w <f, g>`. This equals
//! `-sum w conj(f).g` (Minkowski) in the Lorentz-channel basis, i.e. `[a^mu, a^nu+] = -g^{mu nu}`.
//! The Krein adjoint of a matrix is `eta A^H eta`, with `eta = (-1)^(occupation of
//! negative-sign modes)`; `s_m c_m^H` is exactly the Krein adjoint of `c_m`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::kinematics::{polarization_basis, CutoffWindow, FourVector, Vec3};

/// Values of a smearing function at the grid nodes, one four-vector per node.
/// Coulomb smearings carry a zero time component.
pub type GridFunction = Vec<FourVector>;

/// Default cap on the number of occupation basis states.
pub const DEFAULT_BUDGET: usize = 5000;
/// Largest space on which dense matrix exponentials are formed.
pub const DENSE_LIMIT: usize = 1024;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Node form `<f, g> = -conj(f0) g0 + conj(f).g = -conj(f).g` (Minkowski).
pub fn node_form(f: &FourVector, g: &FourVector) -> Complex64 {
    -f[0].conj() * g[0] + f[1].conj() * g[1] + f[2].conj() * g[2] + f[3].conj() * g[3]
}

/// One photon channel at a node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Channel {
    pub polarization: FourVector,
    /// Commutator sign `[c, c+] = sign`.
    pub sign: f64,
}

impl Channel {
    /// Lorentz channel `mu`: unit vector `e_mu`, sign `-1` for `mu = 0`, `+1` otherwise.
    pub fn lorentz(mu: usize) -> Result<Self> {
        if mu > 3 {
            return invalid(format!("Lorentz channel index {mu} out of range"));
        }
        let mut polarization = [ZERO; 4];
        polarization[mu] = ONE;
        Ok(Self { polarization, sign: if mu == 0 { -1.0 } else { 1.0 } })
    }

    /// Transverse spatial channel along a real unit vector.
    pub fn spatial(e: &Vec3) -> Self {
        Self { polarization: [ZERO, e[0].into(), e[1].into(), e[2].into()], sign: 1.0 }
    }

    /// Amplitude `phi(f) = <eps, f>`.
    pub fn amplitude(&self, f: &FourVector) -> Complex64 {
        node_form(&self.polarization, f)
    }
}

/// Momentum node with its quadrature weight and channels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridNode {
    pub k: Vec3,
    pub weight: f64,
    pub channels: Vec<Channel>,
}

/// Channel layout requested for every node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSet {
    /// The given Lorentz components (a subset of `0..4`).
    Lorentz(Vec<usize>),
    /// The two transverse polarizations of the fixed frame.
    Coulomb,
    /// One channel per node along the given function, which must be non-null where
    /// non-zero; nodes where it vanishes get no channel.
    Effective(GridFunction),
}

/// Discrete photon modes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeGrid {
    pub nodes: Vec<GridNode>,
}

impl ModeGrid {
    /// Validates node positions, weights and channel orthonormality.
    pub fn from_nodes(nodes: Vec<GridNode>, window: &CutoffWindow) -> Result<Self> {
        for (i, n) in nodes.iter().enumerate() {
            if !window.contains(n.k.norm()) {
                return invalid(format!("node {i} at |k| = {} lies outside the window", n.k.norm()));
            }
            if !(n.weight.is_finite() && n.weight > 0.0) {
                return invalid(format!("node {i} has non-positive weight {}", n.weight));
            }
            if nodes[..i].iter().any(|m| m.k == n.k) {
                return invalid(format!("node {i} duplicates an earlier node"));
            }
            for (a, ca) in n.channels.iter().enumerate() {
                if ca.sign != 1.0 && ca.sign != -1.0 {
                    return invalid("channel signs must be +1 or -1");
                }
                for (b, cb) in n.channels.iter().enumerate() {
                    let want = if a == b { ca.sign } else { 0.0 };
                    if (node_form(&ca.polarization, &cb.polarization) - want).norm() > 1e-12 {
                        return invalid(format!("channels {a}, {b} at node {i} are not Krein-orthonormal"));
                    }
                }
            }
        }
        Ok(Self { nodes })
    }

    /// Grid with the same channel layout at each node.
    pub fn new(ks: &[Vec3], weights: &[f64], window: &CutoffWindow, set: &ChannelSet) -> Result<Self> {
        if ks.len() != weights.len() {
            return invalid("node and weight lists differ in length");
        }
        let mut nodes = Vec::with_capacity(ks.len());
        for (i, (k, &weight)) in ks.iter().zip(weights).enumerate() {
            let channels = match set {
                ChannelSet::Lorentz(mus) => {
                    let mut seen = [false; 4];
                    let mut out = Vec::new();
                    for &mu in mus {
                        if mu < 4 && std::mem::replace(&mut seen[mu], true) {
                            return invalid(format!("Lorentz channel {mu} listed twice"));
                        }
                        out.push(Channel::lorentz(mu)?);
                    }
                    out
                }
                ChannelSet::Coulomb => {
                    let [e1, e2] = polarization_basis(k)?;
                    vec![Channel::spatial(&e1), Channel::spatial(&e2)]
                }
                ChannelSet::Effective(f) => {
                    if f.len() != ks.len() {
                        return invalid("effective-mode function has the wrong number of nodes");
                    }
                    let v = f[i];
                    let q = node_form(&v, &v).re;
                    if v.iter().all(|x| *x == ZERO) {
                        Vec::new()
                    } else if q.abs() <= 1e-300 {
                        return invalid(format!("effective-mode function is null at node {i}"));
                    } else {
                        let s = 1.0 / q.abs().sqrt();
                        vec![Channel { polarization: v.map(|x| x * s), sign: q.signum() }]
                    }
                }
            };
            nodes.push(GridNode { k: *k, weight, channels });
        }
        Self::from_nodes(nodes, window)
    }

    /// Flattened `(node, channel)` list in basis order.
    pub fn modes(&self) -> Vec<(usize, usize)> {
        self.nodes.iter().enumerate().flat_map(|(i, n)| (0..n.channels.len()).map(move |c| (i, c))).collect()
    }

    /// Number of modes.
    pub fn mode_count(&self) -> usize {
        self.nodes.iter().map(|n| n.channels.len()).sum()
    }

    /// Weighted amplitudes `sqrt(w) phi_m(f)` per mode.
    pub fn mode_amplitudes(&self, f: &GridFunction) -> Result<Vec<Complex64>> {
        if f.len() != self.nodes.len() {
            return invalid(format!("grid function has {} nodes, grid has {}", f.len(), self.nodes.len()));
        }
        Ok(self
            .nodes
            .iter()
            .zip(f)
            .flat_map(|(n, v)| n.channels.iter().map(move |c| c.amplitude(v) * n.weight.sqrt()))
            .collect())
    }

    /// Mode signs in basis order.
    pub fn signs(&self) -> Vec<f64> {
        self.nodes.iter().flat_map(|n| n.channels.iter().map(|c| c.sign)).collect()
    }

    /// `sum_i w_i <f_i, g_i>` with the node form on the full four-vectors.
    pub fn inner(&self, f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
        if f.len() != self.nodes.len() || g.len() != self.nodes.len() {
            return invalid("grid function length mismatch");
        }
        Ok(self.nodes.iter().zip(f.iter().zip(g)).map(|(n, (a, b))| node_form(a, b) * n.weight).sum())
    }

    /// `sum_m s_m conj(alpha_m(f)) alpha_m(g)` over the represented channels only.
    pub fn mode_inner(&self, f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
        let (a, b) = (self.mode_amplitudes(f)?, self.mode_amplitudes(g)?);
        Ok(self.signs().iter().zip(a.iter().zip(&b)).map(|(s, (x, y))| x.conj() * y * *s).sum())
    }
}

/// Sparse complex matrix stored by rows, columns sorted within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    pub dim: usize,
    pub rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseOp {
    /// Zero operator.
    pub fn zero(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    /// Identity.
    pub fn identity(dim: usize) -> Self {
        Self { dim, rows: (0..dim).map(|i| vec![(i, ONE)]).collect() }
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.rows.iter().map(|r| r.iter().map(|(j, a)| a * x[*j]).sum()).collect()
    }

    /// `s A`.
    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, rows: self.rows.iter().map(|r| r.iter().map(|(j, a)| (*j, a * s)).collect()).collect() }
    }

    /// `A + B`.
    pub fn add(&self, other: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                        out.push(a[i]);
                        i += 1;
                    } else if i == a.len() || b[j].0 < a[i].0 {
                        out.push(b[j]);
                        j += 1;
                    } else {
                        out.push((a[i].0, a[i].1 + b[j].1));
                        i += 1;
                        j += 1;
                    }
                }
                out
            })
            .collect();
        Self { dim: self.dim, rows }
    }

    /// `A B`.
    pub fn mul(&self, other: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc: std::collections::BTreeMap<usize, Complex64> = std::collections::BTreeMap::new();
                for (k, a) in r {
                    for (j, b) in &other.rows[*k] {
                        *acc.entry(*j).or_insert(ZERO) += a * b;
                    }
                }
                acc.into_iter().collect()
            })
            .collect();
        Self { dim: self.dim, rows }
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self).scale(-ONE))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut rows = vec![Vec::new(); self.dim];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, a) in r {
                rows[*j].push((i, a.conj()));
            }
        }
        Self { dim: self.dim, rows }
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        let mut col = vec![0.0; self.dim];
        for r in &self.rows {
            for (j, a) in r {
                col[*j] += a.norm();
            }
        }
        col.into_iter().fold(0.0, f64::max)
    }

    /// Dense copy.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, a) in r {
                m[(i, *j)] += *a;
            }
        }
        m
    }
}

/// `exp(A) x` by scaled Taylor series.
pub fn expmv(a: &SparseOp, x: &[Complex64]) -> Vec<Complex64> {
    let steps = a.norm1().ceil().max(1.0) as usize;
    let h = Complex64::new(1.0 / steps as f64, 0.0);
    let mut v = x.to_vec();
    for _ in 0..steps {
        let mut term = v.clone();
        let mut sum = v.clone();
        for k in 1..200 {
            term = a.apply(&term).into_iter().map(|t| t * h / k as f64).collect();
            let tn = term.iter().fold(0.0f64, |m, t| m.max(t.norm()));
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t;
            }
            let sn = sum.iter().fold(0.0f64, |m, t| m.max(t.norm()));
            if tn <= 1e-18 * sn || tn == 0.0 {
                break;
            }
        }
        v = sum;
    }
    v
}

/// Occupation-number basis over a mode grid with one cap for all modes.
///
/// Basis index is lexicographic in `(node, channel, occupation)`: the first mode is
/// the most significant digit in base `cap + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedFockSpace {
    pub grid: ModeGrid,
    pub cap: usize,
    signs: Vec<f64>,
    dim: usize,
    metric: Vec<f64>,
}

impl TruncatedFockSpace {
    /// Space with the default budget.
    pub fn new(grid: ModeGrid, cap: usize) -> Result<Self> {
        Self::with_budget(grid, cap, DEFAULT_BUDGET)
    }

    /// Space rejecting more than `budget` basis states.
    pub fn with_budget(grid: ModeGrid, cap: usize, budget: usize) -> Result<Self> {
        if cap == 0 {
            return invalid("occupation cap must be at least 1");
        }
        let m = grid.mode_count() as u32;
        let dim = (cap + 1).checked_pow(m).filter(|&d| d <= budget);
        let Some(dim) = dim else {
            let requested = (cap as f64 + 1.0).powi(m as i32).min(usize::MAX as f64) as usize;
            return Err(Error::Budget { requested, budget });
        };
        let signs = grid.signs();
        let mut space = Self { grid, cap, signs, dim, metric: Vec::new() };
        space.metric = (0..dim)
            .map(|i| {
                let occ = space.occupations(i);
                let neg: usize = occ.iter().zip(&space.signs).filter(|(_, s)| **s < 0.0).map(|(n, _)| *n).sum();
                if neg.is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        Ok(space)
    }

    /// Number of basis states.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of modes.
    pub fn modes(&self) -> usize {
        self.signs.len()
    }

    /// Mode signs.
    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    /// Diagonal of the Gram matrix `eta`.
    pub fn metric(&self) -> &[f64] {
        &self.metric
    }

    /// Occupations of basis state `i`.
    pub fn occupations(&self, mut i: usize) -> Vec<usize> {
        let m = self.signs.len();
        let mut occ = vec![0; m];
        for slot in (0..m).rev() {
            occ[slot] = i % (self.cap + 1);
            i /= self.cap + 1;
        }
        occ
    }

    /// Basis index of an occupation pattern.
    pub fn index_of(&self, occ: &[usize]) -> usize {
        occ.iter().fold(0, |acc, n| acc * (self.cap + 1) + n)
    }

    fn stride(&self, mode: usize) -> usize {
        (self.cap + 1).pow((self.signs.len() - 1 - mode) as u32)
    }

    /// Ordinary lowering matrix `c_m`.
    pub fn lowering(&self, mode: usize) -> SparseOp {
        let stride = self.stride(mode);
        let rows = (0..self.dim)
            .map(|i| {
                let n = (i / stride) % (self.cap + 1);
                if n < self.cap {
                    vec![(i + stride, Complex64::new(((n + 1) as f64).sqrt(), 0.0))]
                } else {
                    Vec::new()
                }
            })
            .collect();
        SparseOp { dim: self.dim, rows }
    }

    /// Krein adjoint of `c_m`: `s_m c_m^H`.
    pub fn raising(&self, mode: usize) -> SparseOp {
        self.lowering(mode).adjoint().scale(Complex64::new(self.signs[mode], 0.0))
    }

    /// Krein adjoint `eta A^H eta`.
    pub fn krein_adjoint(&self, a: &SparseOp) -> SparseOp {
        let mut out = a.adjoint();
        for (i, r) in out.rows.iter_mut().enumerate() {
            for (j, v) in r.iter_mut() {
                *v *= self.metric[i] * self.metric[*j];
            }
        }
        out
    }

    /// Dense Krein adjoint.
    pub fn krein_adjoint_dense(&self, a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = a.adjoint();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] *= self.metric[i] * self.metric[j];
            }
        }
        out
    }

    /// `<x, y> = x^H eta y`.
    pub fn krein_inner(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        x.iter().zip(y).zip(&self.metric).map(|((a, b), s)| a.conj() * b * *s).sum()
    }

    /// Fock vacuum.
    pub fn vacuum(&self) -> Vec<Complex64> {
        let mut v = vec![ZERO; self.dim];
        v[0] = ONE;
        v
    }

    /// `a(conj f) = sum_m sqrt(w) conj(phi_m(f)) c_m`.
    pub fn annihilator(&self, f: &GridFunction) -> Result<SparseOp> {
        let amps = self.grid.mode_amplitudes(f)?;
        let mut op = SparseOp::zero(self.dim);
        for (m, a) in amps.iter().enumerate() {
            if *a != ZERO {
                op = op.add(&self.lowering(m).scale(a.conj()));
            }
        }
        Ok(op)
    }

    /// `a+(g) = sum_m sqrt(w) phi_m(g) s_m c_m^H`.
    pub fn creator(&self, g: &GridFunction) -> Result<SparseOp> {
        let amps = self.grid.mode_amplitudes(g)?;
        let mut op = SparseOp::zero(self.dim);
        for (m, a) in amps.iter().enumerate() {
            if *a != ZERO {
                op = op.add(&self.raising(m).scale(*a));
            }
        }
        Ok(op)
    }

    /// `Phi(f) = a+(f) + a(conj f)`, Krein-symmetric.
    pub fn field(&self, f: &GridFunction) -> Result<SparseOp> {
        Ok(self.creator(f)?.add(&self.annihilator(f)?))
    }

    /// Number operator `sum_m c_m^H c_m`.
    pub fn number_operator(&self) -> SparseOp {
        let rows = (0..self.dim)
            .map(|i| vec![(i, Complex64::new(self.occupations(i).iter().sum::<usize>() as f64, 0.0))])
            .collect();
        SparseOp { dim: self.dim, rows }
    }

    /// `a+(f_1) ... a+(f_n) Psi_0`.
    pub fn n_photon_state(&self, photons: &[GridFunction]) -> Result<Vec<Complex64>> {
        let mut v = self.vacuum();
        for f in photons.iter().rev() {
            v = self.creator(f)?.apply(&v);
        }
        Ok(v)
    }

    /// Largest deviation of `[c_m, c_n+] - s_m delta_mn` on states below the cap.
    pub fn ccr_deviation(&self) -> f64 {
        let m = self.modes();
        let mut worst = 0.0f64;
        for a in 0..m {
            let la = self.lowering(a);
            for b in 0..m {
                let comm = la.commutator(&self.raising(b));
                for (i, row) in comm.rows.iter().enumerate() {
                    if self.occupations(i).iter().any(|&n| n >= self.cap) {
                        continue;
                    }
                    let want = if a == b { self.signs[a] } else { 0.0 };
                    let mut diag = ZERO;
                    for (j, v) in row {
                        if *j == i {
                            diag = *v;
                        } else {
                            worst = worst.max(v.norm());
                        }
                    }
                    worst = worst.max((diag - want).norm());
                }
            }
        }
        worst
    }

    /// Poisson-tail bound on the weight a coherent amplitude `e f` places above the cap:
    /// `sum_m mu_m^(N+1)/(N+1)! e^mu_m` with `mu_m = e^2 w |phi_m(f)|^2`.
    pub fn truncation_estimate(&self, f: &GridFunction, e: f64) -> Result<f64> {
        let amps = self.grid.mode_amplitudes(f)?;
        Ok(amps.iter().map(|a| poisson_tail(e * e * a.norm_sqr(), self.cap)).sum())
    }

    fn require_dense(&self) -> Result<()> {
        if self.dim > DENSE_LIMIT {
            return Err(Error::Budget { requested: self.dim, budget: DENSE_LIMIT });
        }
        Ok(())
    }
}

fn poisson_tail(mu: f64, cap: usize) -> f64 {
    let n = cap + 1;
    let mut term = 1.0;
    for j in 1..=n {
        term *= mu / j as f64;
    }
    term * mu.exp()
}

/// Result of a truncated coherent computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncatedValue {
    pub value: Complex64,
    pub truncation_estimate: f64,
}

/// `<Psi_0, exp(i e Phi(f)) Psi_0>` on the truncated space; errors when the
/// truncation estimate exceeds `tol`.
pub fn displacement_vacuum_expectation(
    space: &TruncatedFockSpace,
    f: &GridFunction,
    e: f64,
    tol: f64,
) -> Result<TruncatedValue> {
    let est = space.truncation_estimate(f, e)?;
    if est > tol {
        return Err(Error::Truncation { estimate: est, tolerance: tol });
    }
    displacement_vacuum_expectation_unchecked(space, f, e)
}

/// As [`displacement_vacuum_expectation`] without the tolerance gate.
pub fn displacement_vacuum_expectation_unchecked(
    space: &TruncatedFockSpace,
    f: &GridFunction,
    e: f64,
) -> Result<TruncatedValue> {
    let x = space.field(f)?.scale(I * e);
    let v = expmv(&x, &space.vacuum());
    Ok(TruncatedValue {
        value: space.krein_inner(&space.vacuum(), &v),
        truncation_estimate: space.truncation_estimate(f, e)?,
    })
}

/// Closed form `exp(-(e^2/2) sum_m s_m |sqrt(w) phi_m(f)|^2)` of the same expectation.
pub fn displacement_closed_form(space: &TruncatedFockSpace, f: &GridFunction, e: f64) -> Result<Complex64> {
    let q = space.grid.mode_inner(f, f)?;
    Ok((-0.5 * e * e * q).exp())
}

/// Dense `W(g, h) = exp(-(i/sqrt 2) Phi(g + i h))` for real four-vector functions.
pub fn weyl_operator(space: &TruncatedFockSpace, g: &GridFunction, h: &GridFunction) -> Result<DMatrix<Complex64>> {
    space.require_dense()?;
    if g.len() != h.len() {
        return invalid("g and h must live on the same nodes");
    }
    if g.iter().chain(h).flatten().any(|x| x.im != 0.0) {
        return invalid("Weyl operator arguments must be real");
    }
    let n: GridFunction = g.iter().zip(h).map(|(a, b)| std::array::from_fn(|mu| a[mu] + I * b[mu])).collect();
    let x = space.field(&n)?.scale(Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2));
    Ok(x.to_dense().exp())
}

/// Max deviation between `exp(A + B)` and `exp(A) exp(B) exp(-[A, B]/2)` with
/// `A = i e a+(f)`, `B = i e a(conj g)`, over basis pairs with every occupation `<= cap - 2`.
pub fn bch_check(space: &TruncatedFockSpace, f: &GridFunction, g: &GridFunction, e: f64) -> Result<f64> {
    space.require_dense()?;
    if space.cap < 2 {
        return invalid("bch_check needs cap >= 2");
    }
    let a = space.creator(f)?.scale(I * e);
    let b = space.annihilator(g)?.scale(I * e);
    let lhs = a.add(&b).to_dense().exp();
    let comm = a.commutator(&b).scale(Complex64::new(-0.5, 0.0));
    let rhs = a.to_dense().exp() * b.to_dense().exp() * comm.to_dense().exp();
    let low: Vec<usize> =
        (0..space.dim()).filter(|&i| space.occupations(i).iter().all(|&n| n + 2 <= space.cap)).collect();
    let mut worst = 0.0f64;
    for &i in &low {
        for &j in &low {
            worst = worst.max((lhs[(i, j)] - rhs[(i, j)]).norm());
        }
    }
    Ok(worst)
}

/// `<a+(f_1)...a+(f_n) Psi_0, exp(i e Phi(F)) Psi_0>` on the truncated space.
pub fn emission_matrix_element(
    space: &TruncatedFockSpace,
    photons: &[GridFunction],
    coherent: &GridFunction,
    e: f64,
) -> Result<Complex64> {
    let bra = space.n_photon_state(photons)?;
    let x = space.field(coherent)?.scale(I * e);
    let ket = expmv(&x, &space.vacuum());
    Ok(space.krein_inner(&bra, &ket))
}

/// Closed form of [`emission_matrix_element`]:
/// `exp(-(e^2/2) <F, F>) prod_j (i e <f_j, F>)` with the represented-mode form.
pub fn emission_closed_form(
    space: &TruncatedFockSpace,
    photons: &[GridFunction],
    coherent: &GridFunction,
    e: f64,
) -> Result<Complex64> {
    let mut out = displacement_closed_form(space, coherent, e)?;
    for f in photons {
        out *= I * e * space.grid.mode_inner(f, coherent)?;
    }
    Ok(out)
}
