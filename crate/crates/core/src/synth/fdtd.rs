//! Leapfrog finite-difference solver for `u_tt + s(x) u_t = c(x)^2 (u_xx + u_yy) + f`.
//!
//! The grid is the scan raster extended by [`SPONGE_CELLS`] on every side,
//! with `u = 0` just outside. The damping `s` is zero over the raster and
//! grows quadratically across the sponge.
//!
//! With `a = s dt / 2` the update is
//!
//! ```text
//! u+ = (2 u - (1 - a) u- + (c dt/dx)^2 L u + dt^2 f) / (1 + a)
//! ```
//!
//! where `L` is the unscaled five-point Laplacian. For this scheme the
//! quantity returned by [`Simulation::energy`],
//!
//! ```text
//! E = sum (1/c^2) ((u+ - u)/dt)^2 + (1/dx^2) sum_edges grad(u+) grad(u)
//! ```
//!
//! changes between steps by `-sum s/(2 dt c^2) (u+ - u-)^2` plus the work done
//! by `f`, so it never grows once the source is off.

use super::model::{SynthConfig, SPONGE_CELLS};
use crate::error::Result;
use crate::frames::Frame;

/// Damping at the outer edge of the sponge, per time step (`s_max * dt`).
const SPONGE_MAX_DAMPING_PER_STEP: f64 = 0.3;

/// Time-stepping state of one run.
#[derive(Debug, Clone)]
pub struct Simulation {
    nx: usize,
    ny: usize,
    /// Grid columns/rows (raster plus sponge).
    gx: usize,
    gy: usize,
    dt: f64,
    dx: f64,
    /// `(c dt / dx)^2` per cell.
    courant_sq: Vec<f64>,
    /// `1 / c^2` per cell.
    inv_c_sq: Vec<f64>,
    /// `s dt / 2` per cell.
    half_damping: Vec<f64>,
    source_index: usize,
    config: SynthConfig,
    prev: Vec<f64>,
    curr: Vec<f64>,
    next: Vec<f64>,
    step: usize,
}

impl Simulation {
    pub fn new(config: &SynthConfig) -> Result<Self> {
        config.validate()?;
        let g = config.geometry;
        let (nx, ny) = (g.nx(), g.ny());
        let (gx, gy) = (nx + 2 * SPONGE_CELLS, ny + 2 * SPONGE_CELLS);
        let dx = config.dx_m();
        let dt = config.dt_s();
        let step_mm = g.step_mm();

        let mut courant_sq = vec![0.0; gx * gy];
        let mut inv_c_sq = vec![0.0; gx * gy];
        let mut half_damping = vec![0.0; gx * gy];
        let s_max = SPONGE_MAX_DAMPING_PER_STEP / dt;
        for j in 0..gy {
            for i in 0..gx {
                let k = j * gx + i;
                let x_mm = (i as f64 - SPONGE_CELLS as f64) * step_mm;
                let y_mm = (j as f64 - SPONGE_CELLS as f64) * step_mm;
                let c = match &config.defect {
                    Some(d) if d.contains(x_mm, y_mm) => config.material.defect_speed,
                    _ => config.material.sound_speed,
                };
                courant_sq[k] = (c * dt / dx).powi(2);
                inv_c_sq[k] = 1.0 / (c * c);
                // Depth into the sponge in cells, 0 over the raster.
                let depth_x = SPONGE_CELLS.saturating_sub(i).max((i + SPONGE_CELLS + 1).saturating_sub(gx));
                let depth_y = SPONGE_CELLS.saturating_sub(j).max((j + SPONGE_CELLS + 1).saturating_sub(gy));
                let depth = depth_x.max(depth_y) as f64 / SPONGE_CELLS as f64;
                half_damping[k] = 0.5 * s_max * depth * depth * dt;
            }
        }

        let (sx, sy) = config.source_position_mm;
        let si = ((sx / step_mm).round() as usize).min(nx - 1) + SPONGE_CELLS;
        let sj = ((sy / step_mm).round() as usize).min(ny - 1) + SPONGE_CELLS;

        Ok(Self {
            nx,
            ny,
            gx,
            gy,
            dt,
            dx,
            courant_sq,
            inv_c_sq,
            half_damping,
            source_index: sj * gx + si,
            config: config.clone(),
            prev: vec![0.0; gx * gy],
            curr: vec![0.0; gx * gy],
            next: vec![0.0; gx * gy],
            step: 0,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    /// Time of the current field.
    pub fn time(&self) -> f64 {
        self.step as f64 * self.dt
    }

    /// Grid node (column, row) of the source within the raster.
    pub fn source_node(&self) -> (usize, usize) {
        (
            self.source_index % self.gx - SPONGE_CELLS,
            self.source_index / self.gx - SPONGE_CELLS,
        )
    }

    pub fn grid_size(&self) -> (usize, usize) {
        (self.gx, self.gy)
    }

    /// Whether the source still injects at or after the current step.
    pub fn source_active(&self) -> bool {
        self.time() <= self.config.source.end_time_s()
    }

    /// Advance one time step.
    pub fn step(&mut self) {
        let gx = self.gx;
        let f = self.config.source.value(self.time());
        for j in 0..self.gy {
            for i in 0..gx {
                let k = j * gx + i;
                let u = self.curr[k];
                let left = if i > 0 { self.curr[k - 1] } else { 0.0 };
                let right = if i + 1 < gx { self.curr[k + 1] } else { 0.0 };
                let down = if j > 0 { self.curr[k - gx] } else { 0.0 };
                let up = if j + 1 < self.gy { self.curr[k + gx] } else { 0.0 };
                let laplacian = left + right + down + up - 4.0 * u;
                let a = self.half_damping[k];
                self.next[k] =
                    (2.0 * u - (1.0 - a) * self.prev[k] + self.courant_sq[k] * laplacian) / (1.0 + a);
            }
        }
        if f != 0.0 {
            // f scaled by c^2/dx^2 at the source node, so the injection is
            // courant^2 * amplitude * envelope.
            let k = self.source_index;
            self.next[k] += self.courant_sq[k] * f / (1.0 + self.half_damping[k]);
        }
        std::mem::swap(&mut self.prev, &mut self.curr);
        std::mem::swap(&mut self.curr, &mut self.next);
        self.step += 1;
    }

    /// Discrete energy of the last step pair (see module docs).
    pub fn energy(&self) -> f64 {
        let (gx, gy) = (self.gx, self.gy);
        let (new, old) = (&self.curr, &self.prev);
        let mut kinetic = 0.0;
        let mut potential = 0.0;
        for j in 0..gy {
            for i in 0..gx {
                let k = j * gx + i;
                let v = (new[k] - old[k]) / self.dt;
                kinetic += self.inv_c_sq[k] * v * v;
                // Edges to the right and up, plus edges to the zero boundary.
                let rn = if i + 1 < gx { new[k + 1] } else { 0.0 };
                let ro = if i + 1 < gx { old[k + 1] } else { 0.0 };
                let un = if j + 1 < gy { new[k + gx] } else { 0.0 };
                let uo = if j + 1 < gy { old[k + gx] } else { 0.0 };
                potential += (rn - new[k]) * (ro - old[k]) + (un - new[k]) * (uo - old[k]);
                if i == 0 {
                    potential += new[k] * old[k];
                }
                if j == 0 {
                    potential += new[k] * old[k];
                }
            }
        }
        kinetic + potential / (self.dx * self.dx)
    }

    /// Current field over the whole grid including the sponge, row-major.
    pub fn full_field(&self) -> &[f64] {
        &self.curr
    }

    /// Current field over the scan raster.
    pub fn frame(&self) -> Result<Frame> {
        let mut values = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            let start = (j + SPONGE_CELLS) * self.gx + SPONGE_CELLS;
            values.extend_from_slice(&self.curr[start..start + self.nx]);
        }
        Ok(Frame::new(self.config.geometry, values)?.with_time(0, Some(self.time())))
    }
}
