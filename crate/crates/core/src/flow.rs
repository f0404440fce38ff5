//! Short-time integration of the sharply truncated Galerkin vorticity
//! equation `d Omega/dt = -B1(Omega)` and remainder diagnostics for the
//! three-term short-time ansatz.

use crate::bilinear::{b1, b2, b3, b3_prime, b3_tilde, bilinear_b, ConvolutionPath, TruncationMode};
use crate::field::SpectralField;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("instability: enstrophy grew by more than {factor}x at t = {t} (dt too large?)")]
    Instability { t: f64, factor: f64 },
    #[error("t_grid must start at 0 and increase strictly")]
    BadGrid,
    #[error("dt = {dt} does not divide the grid spacing {spacing}")]
    IncommensurateGrid { dt: f64, spacing: f64 },
}

/// Sampled states of one truncated trajectory. `states[0]` is the initial
/// condition and `times` increases strictly from 0.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
}

impl Trajectory {
    pub fn initial(&self) -> &SpectralField {
        &self.states[0]
    }

    pub fn truncation(&self) -> i64 {
        self.states[0].truncation()
    }

    /// Per-sample CSV `t,n1,n2,re,im` over nonzero coefficients.
    pub fn write_states_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "t,n1,n2,re,im")?;
        for (t, f) in self.times.iter().zip(&self.states) {
            for (m, c) in f.nonzero() {
                writeln!(w, "{t},{},{},{:.17e},{:.17e}", m.n1, m.n2, c.re, c.im)?;
            }
        }
        Ok(())
    }

    /// Summary CSV `t,enstrophy,energy,hs_norm,w_norm` for a given `s`.
    pub fn write_summary_csv<W: Write>(&self, w: &mut W, s: f64) -> io::Result<()> {
        writeln!(w, "t,enstrophy,energy,hs_norm,w_norm")?;
        let rem = remainder_norms(self, s);
        for ((t, f), (_, wn)) in self.times.iter().zip(&self.states).zip(rem) {
            writeln!(
                w,
                "{t},{:.17e},{:.17e},{:.17e},{:.17e}",
                f.enstrophy(),
                f.energy(),
                f.sobolev_norm_sq(s).sqrt(),
                wn
            )?;
        }
        Ok(())
    }
}

/// One classical Runge-Kutta step of the truncated system. The truncation is
/// preserved; `dt` may be negative (time reversal).
pub fn rk4_step(omega: &SpectralField, dt: f64, path: ConvolutionPath) -> SpectralField {
    let rhs = |f: &SpectralField| b1(f, TruncationMode::Galerkin, path).scaled(-1.0);
    let k1 = rhs(omega);
    let k2 = rhs(&omega.axpy(dt / 2.0, &k1));
    let k3 = rhs(&omega.axpy(dt / 2.0, &k2));
    let k4 = rhs(&omega.axpy(dt, &k3));
    omega
        .axpy(dt / 6.0, &k1)
        .axpy(dt / 3.0, &k2)
        .axpy(dt / 3.0, &k3)
        .axpy(dt / 6.0, &k4)
}

/// Integrate from `omega0`, sampling the state at every point of `t_grid`
/// (which must start at 0). Aborts if the enstrophy grows by more than 10x.
pub fn evolve(
    omega0: &SpectralField,
    t_grid: &[f64],
    dt: f64,
    path: ConvolutionPath,
) -> Result<Trajectory, FlowError> {
    if t_grid.is_empty() || t_grid[0] != 0.0 || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FlowError::BadGrid);
    }
    assert!(dt > 0.0, "dt must be positive");
    let guard = 10.0 * omega0.enstrophy().max(f64::MIN_POSITIVE);
    let mut states = Vec::with_capacity(t_grid.len());
    states.push(omega0.clone());
    let mut current = omega0.clone();
    for pair in t_grid.windows(2) {
        let spacing = pair[1] - pair[0];
        let steps = (spacing / dt).round() as usize;
        if steps == 0 || (steps as f64 * dt - spacing).abs() > 1e-9 * spacing.max(dt) {
            return Err(FlowError::IncommensurateGrid { dt, spacing });
        }
        for _ in 0..steps {
            current = rk4_step(&current, dt, path);
        }
        if current.enstrophy() > guard {
            return Err(FlowError::Instability { t: pair[1], factor: 10.0 });
        }
        states.push(current.clone());
    }
    Ok(Trajectory { times: t_grid.to_vec(), states })
}

/// `w(t) = Omega(t) - Omega0 + t B1(Omega0) - t^2 B2(Omega0)` with the
/// Galerkin-consistent forms at the trajectory truncation.
pub fn remainder_field(traj: &Trajectory, index: usize, path: ConvolutionPath) -> SpectralField {
    let omega0 = traj.initial();
    let b1w = b1(omega0, TruncationMode::Galerkin, path);
    let b2w = b2(omega0, TruncationMode::Galerkin, path);
    let t = traj.times[index];
    traj.states[index].axpy(-1.0, omega0).axpy(t, &b1w).axpy(-t * t, &b2w)
}

/// `(t, ||w(t)||_{H^s})` along the trajectory.
pub fn remainder_norms(traj: &Trajectory, s: f64) -> Vec<(f64, f64)> {
    let omega0 = traj.initial();
    let path = ConvolutionPath::Auto;
    let b1w = b1(omega0, TruncationMode::Galerkin, path);
    let b2w = b2(omega0, TruncationMode::Galerkin, path);
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, state)| {
            let w = state.axpy(-1.0, omega0).axpy(t, &b1w).axpy(-t * t, &b2w);
            (t, w.sobolev_norm_sq(s).sqrt())
        })
        .collect()
}

/// Residual of the remainder evolution equation: central finite differences
/// of `w` against the assembled right-hand side
/// `-B(w,w) - 2B(O0,w) + 2t B(B1,w) - t^2 B3 - 2t^2 B(B2,w) + 2t^3 B3' - t^4 B3~`,
/// all forms Galerkin-consistent. Returns `max_k ||FD_k - RHS_k||_{H^0} / scale`
/// with `scale = 1 + max_k ||RHS_k||_{H^0}`.
pub fn remainder_rhs_check(traj: &Trajectory, path: ConvolutionPath) -> f64 {
    let omega0 = traj.initial();
    let n = omega0.truncation();
    let b1w = b1(omega0, TruncationMode::Galerkin, path);
    let b2w = b2(omega0, TruncationMode::Galerkin, path);
    let b3w = b3(omega0, TruncationMode::Galerkin, path);
    let b3p = b3_prime(omega0, TruncationMode::Galerkin, path);
    let b3t = b3_tilde(omega0, TruncationMode::Galerkin, path);

    let w_at = |idx: usize| {
        let t = traj.times[idx];
        traj.states[idx].axpy(-1.0, omega0).axpy(t, &b1w).axpy(-t * t, &b2w)
    };

    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for k in 1..traj.times.len().saturating_sub(1) {
        let t = traj.times[k];
        let w = w_at(k);
        let rhs = bilinear_b(&w, &w, n, path)
            .scaled(-1.0)
            .axpy(-2.0, &bilinear_b(omega0, &w, n, path))
            .axpy(2.0 * t, &bilinear_b(&b1w, &w, n, path))
            .axpy(-t * t, &b3w)
            .axpy(-2.0 * t * t, &bilinear_b(&b2w, &w, n, path))
            .axpy(2.0 * t * t * t, &b3p)
            .axpy(-t * t * t * t, &b3t);
        let dt2 = traj.times[k + 1] - traj.times[k - 1];
        let fd = w_at(k + 1).axpy(-1.0, &w_at(k - 1)).scaled(1.0 / dt2);
        worst = worst.max(fd.axpy(-1.0, &rhs).sobolev_norm_sq(0.0).sqrt());
        scale = scale.max(1.0 + rhs.sobolev_norm_sq(0.0).sqrt());
    }
    worst / scale
}
