//! Numerov shooting solver for the hyperradial equation
//!
//! ```text
//! R'' = [ (2μ/ħ²)(V(r) − E) + γ·c(r) ] R,    c(r) = 1/r²  or  α²/sinh²(αr)
//! ```
//!
//! with `γ = (k−1)(k−3)/4`. The radial coordinate is mapped to
//! `x = ln(r/r_min) + (r − r_min)/ρ`, which is geometric near the origin and
//! uniform further out. With `R = (dx/dr)^{-1/2} w` the equation keeps the
//! Numerov-friendly form `w'' = Q(x) w` on a uniform `x` grid.
//!
//! Eigenvalues are located by shooting from both ends toward the outermost
//! classical turning point: bisection on the node count and the sign of the
//! log-derivative mismatch brackets the level, false-position iterations on
//! the mismatch then polish it.
//!
//! Nothing here depends on the closed-form modules.

use crate::model::PhysicalParams;
use thiserror::Error;

/// Minimum number of Numerov steps.
pub const DEFAULT_STEPS: usize = 40_000;
/// Largest step in the mapped coordinate; larger grids get more steps.
const MAX_DX: f64 = 2.5e-3;
/// Required decay `κ·r_max` of the slowest eigenfunction (`e^{-27.7} ≈ 1e−12`).
const TAIL_DECAY: f64 = 27.7;
/// Decay at which the inward sweep is seeded.
const INWARD_DECAY: f64 = 50.0;
const RESCALE_AT: f64 = 1e200;
const ENERGY_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("trial energy must be negative, got {0}")]
    NonNegativeEnergy(f64),
    #[error("level n_r = {n_r} not bound: the well supports only {max_nodes} bound states")]
    NotFound { n_r: u32, max_nodes: u32 },
    #[error("eigenvalue search did not converge for n_r = {n_r} (last energy {energy}, nodes {nodes})")]
    NoConvergence { n_r: u32, energy: f64, nodes: u32 },
    #[error("invalid grid: {0}")]
    BadGrid(String),
}

/// Which centrifugal term enters the equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Centrifugal {
    /// `γ/r²`
    Exact,
    /// `γα²/sinh²(αr)`
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub r_min: f64,
    pub r_max: f64,
    pub steps: usize,
}

impl Grid {
    /// `r_min = 1e−5/α`, `r_max = max(20/α, 20·λ)` with `λ = ħ/√(2μV₀)`.
    pub fn default_for(params: &PhysicalParams) -> Self {
        let alpha = params.alpha();
        let r_max = (20.0 / alpha).max(20.0 * depth_length(params));
        Self::resolved(params, 1e-5 / alpha, r_max)
    }

    /// Grid on `[r_min, r_max]` with at least [`DEFAULT_STEPS`] points and a
    /// mapped step no larger than the default resolution.
    pub fn resolved(params: &PhysicalParams, r_min: f64, r_max: f64) -> Self {
        let x_max = Mapping::new(params, r_min).x(r_max);
        let steps = ((x_max / MAX_DX).ceil() as usize).max(DEFAULT_STEPS);
        Self { r_min, r_max, steps }
    }

    fn validate(&self) -> Result<(), OracleError> {
        if !(self.r_min > 0.0) || !(self.r_max > self.r_min) || !self.r_max.is_finite() {
            return Err(OracleError::BadGrid(format!(
                "need 0 < r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.steps < 16 {
            return Err(OracleError::BadGrid(format!("too few steps: {}", self.steps)));
        }
        Ok(())
    }
}

fn depth_length(params: &PhysicalParams) -> f64 {
    params.hbar() / (2.0 * params.mu() * params.v0()).sqrt()
}

/// The hyperradial equation for given `(D, ℓ)` and its discretization grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOde {
    pub mode: Centrifugal,
    pub params: PhysicalParams,
    pub dim: u32,
    pub ell: u32,
    pub grid: Grid,
}

impl RadialOde {
    pub fn new(mode: Centrifugal, params: PhysicalParams, dim: u32, ell: u32) -> Self {
        Self {
            mode,
            params,
            dim,
            ell,
            grid: Grid::default_for(&params),
        }
    }

    pub fn with_grid(mut self, grid: Grid) -> Self {
        self.grid = grid;
        self
    }

    fn k(&self) -> f64 {
        f64::from(self.dim + 2 * self.ell)
    }

    fn gamma(&self) -> f64 {
        let k = self.k();
        (k - 1.0) * (k - 3.0) / 4.0
    }

    /// Small-r exponent of the regular solution, `R ~ r^{(k−1)/2}`.
    fn exponent(&self) -> f64 {
        (self.k() - 1.0) / 2.0
    }

    fn centrifugal(&self, r: f64) -> f64 {
        match self.mode {
            Centrifugal::Exact => 1.0 / (r * r),
            Centrifugal::Approx => {
                let a = self.params.alpha();
                let sh = (a * r).sinh();
                a * a / (sh * sh)
            }
        }
    }

    fn potential(&self, r: f64) -> f64 {
        let c = (self.params.alpha() * r).cosh();
        -self.params.v0() / (c * c)
    }
}

/// Node count and log-derivative defect of one shooting pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shot {
    pub node_count: u32,
    /// `R'/R` from the origin minus `R'/R` from infinity at the matching point.
    pub boundary_mismatch: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResult {
    pub energy: f64,
    pub node_count: u32,
    pub boundary_mismatch: f64,
    /// Outer radius of the grid the level converged on.
    pub r_max: f64,
}

/// `x = ln(r/r_min) + (r − r_min)/ρ`, or `x = r/ρ` from the origin when the
/// equation is regular there.
#[derive(Debug, Clone, Copy)]
struct Mapping {
    r_min: f64,
    rho: f64,
    log: bool,
}

impl Mapping {
    fn new(params: &PhysicalParams, r_min: f64) -> Self {
        Self {
            r_min,
            rho: (1.0 / params.alpha()).min(depth_length(params)),
            log: true,
        }
    }

    fn uniform(params: &PhysicalParams) -> Self {
        Self {
            r_min: 0.0,
            log: false,
            ..Self::new(params, 0.0)
        }
    }

    fn x(&self, r: f64) -> f64 {
        if self.log {
            (r / self.r_min).ln() + (r - self.r_min) / self.rho
        } else {
            r / self.rho
        }
    }

    /// `(x', x'', x''')` at `r`.
    fn derivatives(&self, r: f64) -> (f64, f64, f64) {
        if self.log {
            (1.0 / r + 1.0 / self.rho, -1.0 / (r * r), 2.0 / (r * r * r))
        } else {
            (1.0 / self.rho, 0.0, 0.0)
        }
    }

    /// Inverse of `x(r)`, Newton in `ln r` from a nearby guess.
    fn r(&self, x: f64, guess: f64) -> f64 {
        if !self.log {
            return x * self.rho;
        }
        let ln_rmin = self.r_min.ln();
        let mut y = guess.ln();
        for _ in 0..60 {
            let r = y.exp();
            let g = y - ln_rmin + (r - self.r_min) / self.rho - x;
            let dy = g / (1.0 + r / self.rho);
            y -= dy;
            if dy.abs() <= 1e-15 * y.abs().max(1.0) {
                break;
            }
        }
        y.exp()
    }
}

/// Energy-independent parts of `Q(x) = a + E·b` on the grid.
struct Discretized {
    h: f64,
    r: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    /// `V + (ħ²/2μ)γ c(r)` for locating turning points.
    v_eff: Vec<f64>,
    /// `(dx/dr)^{1/2}`
    sqrt_dx: Vec<f64>,
    exponent: f64,
    /// Grid starts at `r = 0` with an even solution.
    from_origin: bool,
    /// `2μ/ħ²`
    kscale: f64,
}

struct Sweep {
    nodes: u32,
    mismatch: f64,
}

impl Discretized {
    fn new(ode: &RadialOde) -> Result<Self, OracleError> {
        ode.grid.validate()?;
        // For k = 1 the equation is regular at the origin and the wanted
        // solution is the even one, which is subdominant on a log grid.
        let from_origin = ode.k() == 1.0;
        let map = if from_origin {
            Mapping::uniform(&ode.params)
        } else {
            Mapping::new(&ode.params, ode.grid.r_min)
        };
        let n = ode.grid.steps;
        let x_max = map.x(ode.grid.r_max);
        let h = x_max / n as f64;
        let kscale = 2.0 * ode.params.mu() / (ode.params.hbar() * ode.params.hbar());
        let gamma = ode.gamma();
        let mut r = Vec::with_capacity(n + 1);
        let mut a = Vec::with_capacity(n + 1);
        let mut b = Vec::with_capacity(n + 1);
        let mut v_eff = Vec::with_capacity(n + 1);
        let mut sqrt_dx = Vec::with_capacity(n + 1);
        let mut guess = map.r_min;
        for i in 0..=n {
            let ri = if i == 0 { map.r_min } else { map.r(i as f64 * h, guess) };
            guess = ri;
            let (xp, xpp, xppp) = map.derivatives(ri);
            let cent = if gamma == 0.0 { 0.0 } else { gamma * ode.centrifugal(ri) };
            let pot = ode.potential(ri);
            let schwarz = -0.75 * (xpp / xp).powi(2) + 0.5 * xppp / xp;
            a.push((kscale * pot + cent + schwarz) / (xp * xp));
            b.push(-kscale / (xp * xp));
            v_eff.push(pot + cent / kscale);
            sqrt_dx.push(xp.sqrt());
            r.push(ri);
        }
        Ok(Self {
            h,
            r,
            a,
            b,
            v_eff,
            sqrt_dx,
            exponent: ode.exponent(),
            from_origin,
            kscale,
        })
    }

    fn last(&self) -> usize {
        self.r.len() - 1
    }

    fn g(&self, i: usize, e: f64) -> f64 {
        1.0 - self.h * self.h * (self.a[i] + e * self.b[i]) / 12.0
    }

    /// Outermost classically allowed point, clamped away from the grid ends.
    fn matching_index(&self, e: f64) -> usize {
        let n = self.last();
        let m = match self.v_eff.iter().rposition(|&v| v < e) {
            Some(i) => i,
            None => self
                .v_eff
                .iter()
                .enumerate()
                .min_by(|x, y| x.1.total_cmp(y.1))
                .map(|(i, _)| i)
                .unwrap_or(n / 2),
        };
        m.clamp(2, n - 3)
    }

    /// Outward sweep from the origin up to index `end` inclusive.
    fn outward(&self, e: f64, end: usize) -> (Vec<f64>, u32) {
        let mut w = vec![0.0; end + 1];
        let mut g_prev = self.g(0, e);
        let mut g_cur = self.g(1, e);
        w[0] = self.sqrt_dx[0];
        w[1] = if self.from_origin {
            // w₋₁ = w₁ by symmetry
            (12.0 - 10.0 * g_prev) * w[0] / (2.0 * g_cur)
        } else {
            (self.r[1] / self.r[0]).powf(self.exponent) * self.sqrt_dx[1]
        };
        let mut nodes = 0;
        for i in 1..end {
            let g_next = self.g(i + 1, e);
            w[i + 1] = ((12.0 - 10.0 * g_cur) * w[i] - g_prev * w[i - 1]) / g_next;
            if w[i + 1].abs() > RESCALE_AT {
                for v in &mut w[..=i + 1] {
                    *v /= RESCALE_AT;
                }
            }
            g_prev = g_cur;
            g_cur = g_next;
        }
        let mut sign = w[0] > 0.0;
        for &v in &w[1..] {
            if v != 0.0 && (v > 0.0) != sign {
                nodes += 1;
                sign = v > 0.0;
            }
        }
        (w, nodes)
    }

    /// Inward sweep seeded by `e^{−κr}`; returns values on `[m−1, start]`.
    fn inward(&self, e: f64, m: usize) -> Vec<f64> {
        let n = self.last();
        let kappa = (self.kscale * (-e)).sqrt();
        let rm = self.r[m];
        let start = (m + 2..=n)
            .find(|&i| kappa * (self.r[i] - rm) >= INWARD_DECAY)
            .unwrap_or(n);
        let lo = m - 1;
        let mut w = vec![0.0; start - lo + 1];
        let idx = |i: usize| i - lo;
        w[idx(start)] = (-kappa * (self.r[start] - self.r[start - 1])).exp() * self.sqrt_dx[start];
        w[idx(start - 1)] = self.sqrt_dx[start - 1];
        let mut i = start - 1;
        while i > lo {
            let gp = self.g(i + 1, e);
            let gc = self.g(i, e);
            let gm = self.g(i - 1, e);
            let next = ((12.0 - 10.0 * gc) * w[idx(i)] - gp * w[idx(i + 1)]) / gm;
            w[idx(i - 1)] = next;
            if next.abs() > RESCALE_AT {
                for v in &mut w[idx(i - 1)..] {
                    *v /= RESCALE_AT;
                }
            }
            i -= 1;
        }
        w
    }

    fn shoot_at(&self, e: f64, m: usize) -> Sweep {
        let (out, nodes) = self.outward(e, m + 1);
        let inw = self.inward(e, m);
        // inw[0..=2] ↔ indices m−1, m, m+1
        let (o_m, i_m) = (out[m], inw[1]);
        let mismatch = if o_m == 0.0 || i_m == 0.0 {
            f64::INFINITY
        } else {
            let d_out = (out[m + 1] - out[m - 1]) / o_m;
            let d_in = (inw[2] - inw[0]) / i_m;
            let xp = self.sqrt_dx[m] * self.sqrt_dx[m];
            (d_out - d_in) / (2.0 * self.h) * xp
        };
        Sweep { nodes, mismatch }
    }

    fn shoot(&self, e: f64) -> Sweep {
        self.shoot_at(e, self.matching_index(e))
    }

    /// Nodes of the outward solution over the whole grid.
    fn nodes_full(&self, e: f64) -> u32 {
        self.outward(e, self.last()).1
    }
}

/// One shooting pass at trial energy `e`.
pub fn integrate_numerov(ode: &RadialOde, e: f64) -> Result<Shot, OracleError> {
    if !(e < 0.0) {
        return Err(OracleError::NonNegativeEnergy(e));
    }
    let disc = Discretized::new(ode)?;
    let s = disc.shoot(e);
    Ok(Shot {
        node_count: s.nodes,
        boundary_mismatch: s.mismatch,
    })
}

/// Number of negative-energy levels: nodes of the zero-energy solution on a
/// grid reaching far beyond the range of the well.
pub fn count_bound_states(ode: &RadialOde) -> Result<u32, OracleError> {
    let p = &ode.params;
    let r_max = ode.grid.r_max.max(200.0 / p.alpha()).max(200.0 * depth_length(p));
    let wide = ode.with_grid(Grid::resolved(p, ode.grid.r_min, r_max));
    Ok(Discretized::new(&wide)?.nodes_full(0.0))
}

/// `true` when the shot lies above the level with `n_r` nodes.
fn above(shot: &Sweep, n_r: u32) -> bool {
    match shot.nodes.cmp(&n_r) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => shot.mismatch < 0.0,
    }
}

fn search(disc: &Discretized, v0: f64, n_r: u32) -> Result<(f64, Sweep), OracleError> {
    let tol = ENERGY_TOL * v0;
    let (mut lo, mut hi) = (-v0, 0.0);
    let (mut lo_ok, mut hi_ok) = (false, false);
    let mut last = -0.5 * v0;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if lo_ok && hi_ok && hi - lo < 1e-4 * v0 {
            if let Some(found) = polish(disc, lo, hi, n_r, tol) {
                return Ok(found);
            }
        }
        let mid = 0.5 * (lo + hi);
        last = mid;
        let s = disc.shoot(mid);
        if above(&s, n_r) {
            hi = mid;
            hi_ok = s.nodes == n_r;
        } else {
            lo = mid;
            lo_ok = s.nodes == n_r;
        }
    }
    let e = 0.5 * (lo + hi);
    let s = disc.shoot(e);
    if s.nodes != n_r {
        return Err(OracleError::NoConvergence {
            n_r,
            energy: last,
            nodes: s.nodes,
        });
    }
    Ok((e, s))
}

/// False position (Illinois) on the mismatch at a frozen matching point.
fn polish(disc: &Discretized, lo: f64, hi: f64, n_r: u32, tol: f64) -> Option<(f64, Sweep)> {
    let m = disc.matching_index(0.5 * (lo + hi));
    let (mut a, mut b) = (lo, hi);
    let sa = disc.shoot_at(a, m);
    let sb = disc.shoot_at(b, m);
    if sa.nodes != n_r || sb.nodes != n_r || !(sa.mismatch > 0.0) || !(sb.mismatch < 0.0) {
        return None;
    }
    let (mut fa, mut fb) = (sa.mismatch, sb.mismatch);
    for _ in 0..100 {
        let c = b - fb * (b - a) / (fb - fa);
        if !(c > lo.min(hi) && c < lo.max(hi)) {
            return None;
        }
        let sc = disc.shoot_at(c, m);
        if sc.nodes != n_r || !sc.mismatch.is_finite() {
            return None;
        }
        let fc = sc.mismatch;
        let step = (c - b).abs();
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
        } else {
            fa *= 0.5;
        }
        b = c;
        fb = fc;
        if fc == 0.0 || step <= tol {
            return Some((c, sc));
        }
    }
    None
}

/// The `n_r`-th eigenvalue (counting from zero) of the radial problem.
///
/// The grid is widened until the converged level has decayed by
/// `e^{−27.7}` at `r_max`.
pub fn find_eigenvalue(ode: &RadialOde, n_r: u32) -> Result<EigenResult, OracleError> {
    let max_nodes = count_bound_states(ode)?;
    if max_nodes <= n_r {
        return Err(OracleError::NotFound { n_r, max_nodes });
    }
    let p = &ode.params;
    let mut current = *ode;
    for _ in 0..8 {
        let disc = Discretized::new(&current)?;
        let (energy, shot) = search(&disc, p.v0(), n_r)?;
        let kappa = (disc.kscale * (-energy)).sqrt();
        if kappa * current.grid.r_max >= TAIL_DECAY {
            return Ok(EigenResult {
                energy,
                node_count: shot.nodes,
                boundary_mismatch: shot.mismatch,
                r_max: current.grid.r_max,
            });
        }
        let r_max = (1.2 * TAIL_DECAY / kappa).max(1.5 * current.grid.r_max);
        current = current.with_grid(Grid::resolved(p, current.grid.r_min, r_max));
    }
    Err(OracleError::NoConvergence {
        n_r,
        energy: f64::NAN,
        nodes: 0,
    })
}
