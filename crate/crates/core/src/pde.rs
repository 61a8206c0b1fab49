//! 1-D finite-volume / method-of-lines solver for the full system.
//!
//! Cell-centered grid on [0, L], zero-flux boundaries. The degenerate tumor
//! diffusion D div((1-u) grad v) uses face mobilities averaged arithmetically
//! from the two adjacent cells; time stepping is explicit Heun (RK2) under a
//! CFL bound. A-priori bounds (0 < u < 1, capped v and w) are asserted after
//! every step and never clipped — a violation aborts the run with
//! diagnostics.

use crate::model::{ModelParams, SteadyState};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use libm::{cos, fabs, sqrt};
use rand_core::{RngCore, SeedableRng};

/// Uniform cell-centered grid on [0, length].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub length: f64,
    pub n_cells: usize,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridError {
    NonpositiveLength(f64),
    TooFewCells(usize),
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::NonpositiveLength(l) => write!(f, "grid length must be positive, got {l}"),
            GridError::TooFewCells(n) => write!(f, "grid needs at least 8 cells, got {n}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GridError {}

impl Grid1D {
    pub fn new(length: f64, n_cells: usize) -> Result<Self, GridError> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(GridError::NonpositiveLength(length));
        }
        if n_cells < 8 {
            return Err(GridError::TooFewCells(n_cells));
        }
        Ok(Grid1D { length, n_cells, h: length / n_cells as f64 })
    }

    /// Cell-center coordinates.
    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| (i as f64 + 0.5) * self.h).collect()
    }
}

/// Cell-centered state at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

/// A-priori caps derived from the initial data: u stays in (0,1), v below
/// max{1, max v0}, w below max{1, max v0, max w0}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub v_hi: f64,
    pub w_hi: f64,
}

const BOUND_TOL: f64 = 1e-12;

fn max_slice(xs: &[f64]) -> f64 {
    xs.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
}

fn min_slice(xs: &[f64]) -> f64 {
    xs.iter().fold(f64::INFINITY, |a, &b| a.min(b))
}

impl Bounds {
    pub fn from_initial(f: &Field) -> Bounds {
        let v_hi = max_slice(&f.v).max(1.0);
        let w_hi = max_slice(&f.w).max(v_hi);
        Bounds { v_hi, w_hi }
    }
}

/// Which component tripped a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    U,
    V,
    W,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::U => "u",
            Component::V => "v",
            Component::W => "w",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundViolation {
    pub component: Component,
    pub cell: usize,
    pub value: f64,
    pub t: f64,
}

impl fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bound violation: {} = {:e} at cell {} (t = {})",
            self.component, self.value, self.cell, self.t
        )
    }
}

#[cfg(feature = "std")]
impl std::error::Error for BoundViolation {}

/// Asserts the Lemma-2.1-type caps with tolerance 1e-12.
pub fn check_bounds(f: &Field, b: &Bounds) -> Result<(), BoundViolation> {
    for (i, &x) in f.u.iter().enumerate() {
        if x < -BOUND_TOL || x > 1.0 + BOUND_TOL {
            return Err(BoundViolation { component: Component::U, cell: i, value: x, t: f.t });
        }
    }
    for (i, &x) in f.v.iter().enumerate() {
        if x < -BOUND_TOL || x > b.v_hi + BOUND_TOL {
            return Err(BoundViolation { component: Component::V, cell: i, value: x, t: f.t });
        }
    }
    for (i, &x) in f.w.iter().enumerate() {
        if x < -BOUND_TOL || x > b.w_hi + BOUND_TOL {
            return Err(BoundViolation { component: Component::W, cell: i, value: x, t: f.t });
        }
    }
    Ok(())
}

/// Initial-data recipes.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    /// Spatially uniform values.
    Constant { u: f64, v: f64, w: f64 },
    /// base + sum_{k<=4} a_k cos(k pi x / L) per component; coefficients are
    /// drawn from the seed and rescaled to keep positivity (and u < 1) with
    /// margin 0.05.
    CosineSeries { u: f64, v: f64, w: f64, amplitude: f64, seed: u64 },
    /// Caller-supplied cell values.
    Explicit { u: Vec<f64>, v: Vec<f64>, w: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitError {
    /// Initial data must satisfy 0 < u0 < 1, v0 > 0, w0 > 0.
    OutOfRange { component: Component, cell: usize, value: f64 },
    /// Explicit arrays must match the grid.
    LengthMismatch { component: Component, got: usize, want: usize },
}

impl fmt::Display for InitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitError::OutOfRange { component, cell, value } => {
                write!(f, "initial {component} = {value} out of range at cell {cell}")
            }
            InitError::LengthMismatch { component, got, want } => {
                write!(f, "initial {component} has {got} cells, grid has {want}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for InitError {}

fn uniform_pm1(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
}

fn cosine_component(
    base: f64,
    amplitude: f64,
    upper: Option<f64>,
    grid: &Grid1D,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vec<f64> {
    const MARGIN: f64 = 0.05;
    let coeffs: [f64; 4] = core::array::from_fn(|_| uniform_pm1(rng));
    let total: f64 = coeffs.iter().map(|c| fabs(*c)).sum();
    let mut headroom = base - MARGIN;
    if let Some(up) = upper {
        headroom = headroom.min(up - MARGIN - base);
    }
    let scale = if total > 0.0 { amplitude.min(headroom.max(0.0) / total) } else { 0.0 };
    grid.centers()
        .iter()
        .map(|&x| {
            let mut val = base;
            for (k, c) in coeffs.iter().enumerate() {
                val += scale * c * cos((k + 1) as f64 * core::f64::consts::PI * x / grid.length);
            }
            val
        })
        .collect()
}

fn validate_init(f: &Field) -> Result<(), InitError> {
    for (i, &x) in f.u.iter().enumerate() {
        if !(x > 0.0 && x < 1.0) {
            return Err(InitError::OutOfRange { component: Component::U, cell: i, value: x });
        }
    }
    for (i, &x) in f.v.iter().enumerate() {
        if !(x > 0.0) {
            return Err(InitError::OutOfRange { component: Component::V, cell: i, value: x });
        }
    }
    for (i, &x) in f.w.iter().enumerate() {
        if !(x > 0.0) {
            return Err(InitError::OutOfRange { component: Component::W, cell: i, value: x });
        }
    }
    Ok(())
}

/// Realizes `init` on `grid`, validating the admissibility conditions.
pub fn build_initial(init: &InitialData, grid: &Grid1D) -> Result<Field, InitError> {
    let n = grid.n_cells;
    let f = match init {
        InitialData::Constant { u, v, w } => Field {
            t: 0.0,
            u: vec![*u; n],
            v: vec![*v; n],
            w: vec![*w; n],
        },
        InitialData::CosineSeries { u, v, w, amplitude, seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
            let uu = cosine_component(*u, *amplitude, Some(1.0), grid, &mut rng);
            let vv = cosine_component(*v, *amplitude, None, grid, &mut rng);
            let ww = cosine_component(*w, *amplitude, None, grid, &mut rng);
            Field { t: 0.0, u: uu, v: vv, w: ww }
        }
        InitialData::Explicit { u, v, w } => {
            for (arr, comp) in [(u, Component::U), (v, Component::V), (w, Component::W)] {
                if arr.len() != n {
                    return Err(InitError::LengthMismatch {
                        component: comp,
                        got: arr.len(),
                        want: n,
                    });
                }
            }
            Field { t: 0.0, u: u.clone(), v: v.clone(), w: w.clone() }
        }
    };
    validate_init(&f)?;
    Ok(f)
}

/// Writes the per-cell time derivatives of (u, v, w) into the output slices.
///
/// Tumor flux across face i+1/2 is m (v_{i+1} - v_i)/h with m the arithmetic
/// mean of (1-u) on the two sides; boundary faces carry zero flux. Acid uses
/// the standard 3-point Laplacian with reflecting ghosts.
pub fn rhs(
    f: &Field,
    p: &ModelParams,
    grid: &Grid1D,
    du: &mut [f64],
    dv: &mut [f64],
    dw: &mut [f64],
) {
    let n = grid.n_cells;
    let h = grid.h;
    let inv_h2 = 1.0 / (h * h);
    for i in 0..n {
        let (u, v, w) = (f.u[i], f.v[i], f.w[i]);
        du[i] = u * (1.0 - u - p.a2 * v) - p.d1 * u * w;

        // flux difference across the two faces of cell i
        let flux_right = if i + 1 < n {
            0.5 * ((1.0 - u) + (1.0 - f.u[i + 1])) * (f.v[i + 1] - v)
        } else {
            0.0
        };
        let flux_left = if i > 0 {
            0.5 * ((1.0 - f.u[i - 1]) + (1.0 - u)) * (v - f.v[i - 1])
        } else {
            0.0
        };
        dv[i] = p.diffusion * (flux_right - flux_left) * inv_h2
            + p.r * v * (1.0 - p.a1 * u - v)
            - p.d2 * v * w;

        let w_left = if i > 0 { f.w[i - 1] } else { w };
        let w_right = if i + 1 < n { f.w[i + 1] } else { w };
        dw[i] = (w_right - 2.0 * w + w_left) * inv_h2 + p.c * (v - w);
    }
}

/// CFL-type step bound: 0.4 h^2 / (2 max{D max(1-u), 1}), additionally
/// capped by 0.1 over the largest per-capita reaction rate.
pub fn stable_dt(f: &Field, p: &ModelParams, grid: &Grid1D) -> f64 {
    let mobility = 1.0 - min_slice(&f.u);
    let diff = (p.diffusion * mobility).max(1.0);
    let dt_diff = 0.4 * grid.h * grid.h / (2.0 * diff);
    let mut rate: f64 = p.c;
    for i in 0..grid.n_cells {
        let (u, v, w) = (f.u[i], f.v[i], f.w[i]);
        rate = rate.max(fabs(1.0 - u - p.a2 * v) + p.d1 * w);
        rate = rate.max(p.r * fabs(1.0 - p.a1 * u - v) + p.d2 * w);
    }
    dt_diff.min(0.1 / rate.max(1e-30))
}

/// Scratch buffers for [`step`]; reuse across steps to avoid allocation.
#[derive(Debug, Clone)]
pub struct Workspace {
    k1u: Vec<f64>,
    k1v: Vec<f64>,
    k1w: Vec<f64>,
    k2u: Vec<f64>,
    k2v: Vec<f64>,
    k2w: Vec<f64>,
    pred: Field,
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        Workspace {
            k1u: vec![0.0; n],
            k1v: vec![0.0; n],
            k1w: vec![0.0; n],
            k2u: vec![0.0; n],
            k2v: vec![0.0; n],
            k2w: vec![0.0; n],
            pred: Field { t: 0.0, u: vec![0.0; n], v: vec![0.0; n], w: vec![0.0; n] },
        }
    }
}

/// Advances `f` by one Heun (RK2) step of size `dt`, re-asserting bounds.
pub fn step(
    f: &mut Field,
    p: &ModelParams,
    grid: &Grid1D,
    dt: f64,
    ws: &mut Workspace,
    bounds: &Bounds,
) -> Result<(), BoundViolation> {
    let n = grid.n_cells;
    rhs(f, p, grid, &mut ws.k1u, &mut ws.k1v, &mut ws.k1w);
    for i in 0..n {
        ws.pred.u[i] = f.u[i] + dt * ws.k1u[i];
        ws.pred.v[i] = f.v[i] + dt * ws.k1v[i];
        ws.pred.w[i] = f.w[i] + dt * ws.k1w[i];
    }
    ws.pred.t = f.t + dt;
    rhs(&ws.pred, p, grid, &mut ws.k2u, &mut ws.k2v, &mut ws.k2w);
    let half = 0.5 * dt;
    for i in 0..n {
        f.u[i] += half * (ws.k1u[i] + ws.k2u[i]);
        f.v[i] += half * (ws.k1v[i] + ws.k2v[i]);
        f.w[i] += half * (ws.k1w[i] + ws.k2w[i]);
    }
    f.t += dt;
    check_bounds(f, bounds)
}

/// Distances of a field to a target state, plus the Dirichlet energy of w.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSample {
    pub t: f64,
    pub linf_u: f64,
    pub linf_v: f64,
    pub linf_w: f64,
    pub l2_u: f64,
    pub l2_v: f64,
    pub l2_w: f64,
    pub dirichlet_w: f64,
}

/// L-infinity and (cell-sum) L2 distances to `target`, and
/// sum over faces of ((w_{i+1}-w_i)/h)^2 h.
pub fn norms(f: &Field, target: &SteadyState, grid: &Grid1D) -> NormSample {
    let h = grid.h;
    let mut out = NormSample {
        t: f.t,
        linf_u: 0.0,
        linf_v: 0.0,
        linf_w: 0.0,
        l2_u: 0.0,
        l2_v: 0.0,
        l2_w: 0.0,
        dirichlet_w: 0.0,
    };
    for i in 0..grid.n_cells {
        let du = fabs(f.u[i] - target.u_star);
        let dv = fabs(f.v[i] - target.v_star);
        let dw = fabs(f.w[i] - target.w_star);
        out.linf_u = out.linf_u.max(du);
        out.linf_v = out.linf_v.max(dv);
        out.linf_w = out.linf_w.max(dw);
        out.l2_u += h * du * du;
        out.l2_v += h * dv * dv;
        out.l2_w += h * dw * dw;
        if i + 1 < grid.n_cells {
            let g = (f.w[i + 1] - f.w[i]) / h;
            out.dirichlet_w += g * g * h;
        }
    }
    out.l2_u = sqrt(out.l2_u);
    out.l2_v = sqrt(out.l2_v);
    out.l2_w = sqrt(out.l2_w);
    out
}

/// Full copy of the field at one sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

impl FieldSnapshot {
    pub fn of(f: &Field) -> Self {
        FieldSnapshot { t: f.t, u: f.u.clone(), v: f.v.clone(), w: f.w.clone() }
    }
}

/// Norm samples, optional snapshots, and step accounting for one run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<NormSample>,
    pub snapshots: Vec<FieldSnapshot>,
    pub steps: u64,
    pub final_field: Field,
}

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub t_end: f64,
    /// Norm-sampling cadence in simulated time.
    pub sample_every: f64,
    /// Full-snapshot cadence; `None` records only the initial and final
    /// snapshots.
    pub snapshot_every: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimulateError {
    Init(InitError),
    Bound(BoundViolation),
}

impl fmt::Display for SimulateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimulateError::Init(e) => write!(f, "{e}"),
            SimulateError::Bound(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SimulateError {}

impl From<InitError> for SimulateError {
    fn from(e: InitError) -> Self {
        SimulateError::Init(e)
    }
}

impl From<BoundViolation> for SimulateError {
    fn from(e: BoundViolation) -> Self {
        SimulateError::Bound(e)
    }
}

/// Integrates from `init` to `cfg.t_end`, recording norms against `target`
/// every `cfg.sample_every` time units.
pub fn simulate(
    p: &ModelParams,
    init: &InitialData,
    grid: &Grid1D,
    cfg: &SimConfig,
    target: &SteadyState,
) -> Result<Trajectory, SimulateError> {
    let mut f = build_initial(init, grid)?;
    let bounds = Bounds::from_initial(&f);
    let mut ws = Workspace::new(grid.n_cells);

    let mut samples = Vec::new();
    let mut snapshots = Vec::new();
    samples.push(norms(&f, target, grid));
    snapshots.push(FieldSnapshot::of(&f));

    let mut steps: u64 = 0;
    let mut next_sample = cfg.sample_every;
    let mut next_snap = cfg.snapshot_every.map(|s| s);
    let eps = 1e-12 * cfg.t_end.max(1.0);

    while f.t < cfg.t_end - eps {
        let mut dt = stable_dt(&f, p, grid);
        let mut horizon = cfg.t_end.min(next_sample);
        if let Some(s) = next_snap {
            horizon = horizon.min(s);
        }
        if f.t + dt > horizon {
            dt = horizon - f.t;
        }
        step(&mut f, p, grid, dt, &mut ws, &bounds)?;
        steps += 1;
        if f.t >= next_sample - eps {
            samples.push(norms(&f, target, grid));
            next_sample += cfg.sample_every;
        }
        if let Some(s) = next_snap {
            if f.t >= s - eps {
                snapshots.push(FieldSnapshot::of(&f));
                next_snap = Some(s + cfg.snapshot_every.unwrap());
            }
        }
    }
    if samples.last().map(|s| s.t) != Some(f.t) {
        samples.push(norms(&f, target, grid));
    }
    if snapshots.last().map(|s| s.t) != Some(f.t) {
        snapshots.push(FieldSnapshot::of(&f));
    }
    Ok(Trajectory { samples, snapshots, steps, final_field: f })
}
