//! Discrete transport of an orthonormal 2-frame along the great circle
//! `v1(t) = (cos t, sin t, 0, …, 0)`, its torus angles, and slope fits.
//!
//! Each step replaces `v1` by the next point of the loop and updates
//! `v2 ← normalize(v2 − ⟨v2, v1_new⟩ v1_new)`. Writing
//! `v2 = a n(t) + w` with `n(t) = (−sin t, cos t, 0, …)` and `w` outside the
//! `(e0, e1)` plane, one step maps `a ↦ a cos Δt` before renormalization and
//! leaves the direction `n` untouched. So `φ = θ + π/2` at every step where
//! `a ≠ 0`, and the in-plane share of `v2` decays like `cos(Δt)^steps`.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SedError};
use crate::invariants::{dot8, norm8, Frame, FRAME_TOL};
use crate::rng::SeededRng;

/// `‖ṽ2‖` at or below this is a degenerate fiber.
pub const FIBER_TOL: f64 = 1e-8;
/// `hypot(v2⁰, v2¹)` at or below this leaves `φ` undefined.
pub const ANGLE_TOL: f64 = 1e-10;
/// Seeded initial `v2` is redrawn while its `(e0, e1)` projection is below this.
pub const MIN_PLANE_PROJECTION: f64 = 0.1;
pub const MIN_STEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialFrame {
    /// `v2` from eight normals, projected and normalized (see [`seeded_frame`]).
    Seeded,
    Given(Frame),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportConfig {
    pub num_steps: usize,
    pub seed: u64,
    pub initial: InitialFrame,
}

impl TransportConfig {
    pub fn new(num_steps: usize, seed: u64) -> Self {
        Self { num_steps, seed, initial: InitialFrame::Seeded }
    }

    pub fn dt(&self) -> f64 {
        TAU / self.num_steps as f64
    }

    pub fn initial_frame(&self) -> Result<Frame> {
        if self.num_steps < MIN_STEPS {
            return Err(SedError::InvalidParameter(format!(
                "num_steps must be at least {MIN_STEPS}, got {}",
                self.num_steps
            )));
        }
        match self.initial {
            InitialFrame::Seeded => Ok(seeded_frame(self.seed)),
            InitialFrame::Given(f) => {
                let f = Frame::new(f.v1, f.v2)?;
                if f.v1 != base_point(0.0) {
                    return Err(SedError::InvalidFrame("initial v1 must be e0".into()));
                }
                if f.v2[0].hypot(f.v2[1]) <= ANGLE_TOL {
                    return Err(SedError::FiberAngleUndefined);
                }
                Ok(f)
            }
        }
    }
}

/// `(cos t, sin t, 0, …, 0)`.
pub fn base_point(t: f64) -> [f64; 8] {
    let mut v = [0.0; 8];
    v[0] = t.cos();
    v[1] = t.sin();
    v
}

/// `v1 = e0`; `v2` drawn from eight standard normals, with the `e0`
/// component removed and normalized, redrawn until `|v2¹| ≥ 0.1`.
pub fn seeded_frame(seed: u64) -> Frame {
    let mut rng = SeededRng::new(seed);
    let v1 = base_point(0.0);
    loop {
        let mut v2: [f64; 8] = rng.normals();
        let proj = dot8(&v2, &v1);
        for (x, b) in v2.iter_mut().zip(&v1) {
            *x -= proj * b;
        }
        let n = norm8(&v2);
        if n < 1e-12 {
            continue;
        }
        let v2 = v2.map(|x| x / n);
        if v2[0].hypot(v2[1]) >= MIN_PLANE_PROJECTION {
            return Frame { v1, v2 };
        }
    }
}

pub fn transport_step(f: &Frame, v1_new: [f64; 8]) -> Result<Frame> {
    if (norm8(&v1_new) - 1.0).abs() > FRAME_TOL {
        return Err(SedError::InvalidFrame(format!("new v1 has norm {}", norm8(&v1_new))));
    }
    let p = dot8(&f.v2, &v1_new);
    let r: [f64; 8] = std::array::from_fn(|i| f.v2[i] - p * v1_new[i]);
    let n = norm8(&r);
    if n <= FIBER_TOL {
        return Err(SedError::FiberDegenerate);
    }
    Ok(Frame { v1: v1_new, v2: r.map(|x| x / n) })
}

fn angle(x: f64, y: f64) -> f64 {
    let a = y.atan2(x);
    if a < 0.0 {
        (a + TAU).min(TAU.next_down())
    } else {
        a
    }
}

/// `(θ, φ) = (arg(v1⁰ + i v1¹), arg(v2⁰ + i v2¹))`, both in `[0, 2π)`.
pub fn torus_project(f: &Frame) -> Result<(f64, f64)> {
    if f.v2[0].hypot(f.v2[1]) <= ANGLE_TOL {
        return Err(SedError::FiberAngleUndefined);
    }
    Ok((angle(f.v1[0], f.v1[1]), angle(f.v2[0], f.v2[1])))
}

/// Adds multiples of `2π` so consecutive differences lie in `(−π, π]`.
pub fn unwrap(phis: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phis.len());
    let mut offset = 0.0;
    for (k, &p) in phis.iter().enumerate() {
        if k > 0 {
            let prev = out[k - 1];
            let mut d = p + offset - prev;
            while d > PI {
                offset -= TAU;
                d -= TAU;
            }
            while d <= -PI {
                offset += TAU;
                d += TAU;
            }
        }
        out.push(p + offset);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub t: f64,
    pub theta: f64,
    pub phi: f64,
    pub phi_unwrapped: f64,
    pub orth_err: f64,
    pub norm_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyTrace {
    pub config: TransportConfig,
    pub steps: Vec<TraceStep>,
    pub frames: Vec<Frame>,
    pub fit: LineFit,
}

impl HolonomyTrace {
    pub fn max_orth_err(&self) -> f64 {
        self.steps.iter().map(|s| s.orth_err).fold(0.0, f64::max)
    }

    pub fn max_norm_err(&self) -> f64 {
        self.steps.iter().map(|s| s.norm_err).fold(0.0, f64::max)
    }

    pub fn final_frame(&self) -> Frame {
        *self.frames.last().expect("at least the initial frame")
    }
}

/// Ordinary least squares `y ≈ slope x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < MIN_STEPS {
        return Err(SedError::InvalidParameter(format!("need at least {MIN_STEPS} paired points")));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(SedError::InvalidParameter("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Ok(LineFit { slope, intercept, rms })
}

/// Fits unwrapped `φ` against unwrapped `θ`.
pub fn fit_slope(steps: &[TraceStep]) -> Result<LineFit> {
    let thetas = unwrap(&steps.iter().map(|s| s.theta).collect::<Vec<_>>());
    if thetas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SedError::InvalidParameter("unwrapped theta is not strictly increasing".into()));
    }
    let phis: Vec<f64> = steps.iter().map(|s| s.phi_unwrapped).collect();
    fit_line(&thetas, &phis)
}

pub fn run_great_circle(config: &TransportConfig) -> Result<HolonomyTrace> {
    let mut frame = config.initial_frame()?;
    let dt = config.dt();
    let mut frames = vec![frame];
    for k in 1..=config.num_steps {
        frame = transport_step(&frame, base_point(k as f64 * dt))?;
        frames.push(frame);
    }
    let mut angles = Vec::with_capacity(frames.len());
    for f in &frames {
        angles.push(torus_project(f)?);
    }
    let phis = unwrap(&angles.iter().map(|a| a.1).collect::<Vec<_>>());
    let steps: Vec<TraceStep> = frames
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let (n1, n2, o) = f.errors();
            TraceStep {
                step: k,
                t: k as f64 * dt,
                theta: angles[k].0,
                phi: angles[k].1,
                phi_unwrapped: phis[k],
                orth_err: o,
                norm_err: n1.max(n2),
            }
        })
        .collect();
    let fit = fit_slope(&steps)?;
    Ok(HolonomyTrace { config: *config, steps, frames, fit })
}

/// One trace per step count, computed in parallel, returned in input order.
pub fn sweep(step_counts: &[usize], seed: u64) -> Result<Vec<HolonomyTrace>> {
    step_counts.par_iter().map(|&n| run_great_circle(&TransportConfig::new(n, seed))).collect()
}

fn frame_distance(a: &Frame, b: &Frame) -> f64 {
    let s: f64 = (0..8).map(|i| (a.v1[i] - b.v1[i]).powi(2) + (a.v2[i] - b.v2[i]).powi(2)).sum();
    s.sqrt()
}

/// Closed-loop summary. Only `v1` and `v2` are transported; the blocks are
/// read off by projection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolonomyReport {
    pub steps: usize,
    pub seed: u64,
    /// `‖F(2π) − F(0)‖`, Frobenius over both vectors.
    pub closure_error: f64,
    /// `B[i][j] = ⟨final_i, initial_j⟩` on `span(v1(0), v2(0))`.
    pub block: [[f64; 2]; 2],
    /// `atan2(B[1][0], B[0][0])`.
    pub block_angle: f64,
    /// Norm of the final vectors' components outside the initial plane.
    pub leakage: f64,
    /// `‖P_final − P_initial‖` for the orthogonal projectors onto the two
    /// planes; zero exactly when the map is the identity on the complement.
    pub complement_deviation: f64,
}

fn projector(f: &Frame) -> [[f64; 8]; 8] {
    std::array::from_fn(|i| std::array::from_fn(|j| f.v1[i] * f.v1[j] + f.v2[i] * f.v2[j]))
}

pub fn holonomy_report(trace: &HolonomyTrace) -> HolonomyReport {
    let a = trace.frames[0];
    let b = trace.final_frame();
    let block = [[dot8(&b.v1, &a.v1), dot8(&b.v1, &a.v2)], [dot8(&b.v2, &a.v1), dot8(&b.v2, &a.v2)]];
    let leak = |v: &[f64; 8]| {
        let (p, q) = (dot8(v, &a.v1), dot8(v, &a.v2));
        (0..8).map(|i| (v[i] - p * a.v1[i] - q * a.v2[i]).powi(2)).sum::<f64>()
    };
    let (pa, pb) = (projector(&a), projector(&b));
    let complement_deviation =
        (0..8).flat_map(|i| (0..8).map(move |j| (i, j))).map(|(i, j)| (pb[i][j] - pa[i][j]).powi(2)).sum::<f64>().sqrt();
    HolonomyReport {
        steps: trace.config.num_steps,
        seed: trace.config.seed,
        closure_error: frame_distance(&a, &b),
        block,
        block_angle: block[1][0].atan2(block[0][0]),
        leakage: (leak(&b.v1) + leak(&b.v2)).sqrt(),
        complement_deviation,
    }
}

pub fn holonomy_matrix(config: &TransportConfig) -> Result<HolonomyReport> {
    Ok(holonomy_report(&run_great_circle(config)?))
}

/// `(m, ‖F_{2m}(2π) − F_m(2π)‖)` for each `m`.
pub fn convergence_study(ms: &[usize], seed: u64) -> Result<Vec<(usize, f64)>> {
    ms.par_iter()
        .map(|&m| {
            let a = run_great_circle(&TransportConfig::new(m, seed))?.final_frame();
            let b = run_great_circle(&TransportConfig::new(2 * m, seed))?.final_frame();
            Ok((m, frame_distance(&a, &b)))
        })
        .collect()
}

/// `step,t,theta,phi,phi_unwrapped,orth_err,norm_err`
pub fn trace_csv(trace: &HolonomyTrace) -> String {
    let mut out = String::from("step,t,theta,phi,phi_unwrapped,orth_err,norm_err\n");
    for s in &trace.steps {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:e},{:e}",
            s.step, s.t, s.theta, s.phi, s.phi_unwrapped, s.orth_err, s.norm_err
        );
    }
    out
}

#[derive(Serialize)]
struct FitSummary {
    steps: usize,
    seed: u64,
    slope: f64,
    intercept: f64,
    rms: f64,
}

/// `{"steps":N,"seed":S,"slope":k,"intercept":b,"rms":r}`
pub fn fit_json(trace: &HolonomyTrace) -> String {
    serde_json::to_string(&FitSummary {
        steps: trace.config.num_steps,
        seed: trace.config.seed,
        slope: trace.fit.slope,
        intercept: trace.fit.intercept,
        rms: trace.fit.rms,
    })
    .expect("plain numbers serialize")
}
