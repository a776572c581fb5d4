//! Fixed-step integration of `x'' + s1 x + s3 x^3 = 0`, period measurement,
//! and the exact single-well frequency from the complete elliptic integral.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::elliptic::ellipk;
use crate::error::{invalid, Error, Result};

/// Escape threshold for `|x|`.
pub const UNBOUNDED_THRESHOLD: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4,
    Leapfrog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub tau: f64,
    pub x: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub dt: f64,
    pub method: Method,
    pub s1: f64,
    pub s3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodEstimate {
    pub period: f64,
    pub omega: f64,
    pub cycles_used: usize,
    pub uncertainty: f64,
}

#[inline]
fn force(s1: f64, s3: f64, x: f64) -> f64 {
    -x * (s1 + s3 * x * x)
}

/// `p^2/2 + s1 x^2/2 + s3 x^4/4`
pub fn conserved(s1: f64, s3: f64, x: f64, p: f64) -> f64 {
    let x2 = x * x;
    0.5 * p * p + 0.5 * s1 * x2 + 0.25 * s3 * x2 * x2
}

/// Starts from rest at `x = amplitude`.
pub fn integrate(s1: f64, s3: f64, amplitude: f64, dt: f64, n_steps: usize, method: Method) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("dt", format!("must be finite and > 0, got {dt}")));
    }
    integrate_state(s1, s3, amplitude, 0.0, dt, n_steps, method)
}

/// General initial state. A negative `dt` integrates backwards in time.
pub fn integrate_state(
    s1: f64,
    s3: f64,
    x0: f64,
    p0: f64,
    dt: f64,
    n_steps: usize,
    method: Method,
) -> Result<Trajectory> {
    if !(dt != 0.0 && dt.is_finite()) {
        return Err(invalid("dt", format!("must be finite and nonzero, got {dt}")));
    }
    for (name, v) in [("s1", s1), ("s3", s3), ("x0", x0), ("p0", p0)] {
        if !v.is_finite() {
            return Err(invalid(name, "must be finite"));
        }
    }
    let mut samples = Vec::with_capacity(n_steps + 1);
    let (mut x, mut p) = (x0, p0);
    samples.push(Sample { tau: 0.0, x, p });
    let half = 0.5 * dt;
    for i in 1..=n_steps {
        match method {
            Method::Rk4 => {
                let k1x = p;
                let k1p = force(s1, s3, x);
                let k2x = p + half * k1p;
                let k2p = force(s1, s3, x + half * k1x);
                let k3x = p + half * k2p;
                let k3p = force(s1, s3, x + half * k2x);
                let k4x = p + dt * k3p;
                let k4p = force(s1, s3, x + dt * k3x);
                x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
                p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            }
            Method::Leapfrog => {
                p += half * force(s1, s3, x);
                x += dt * p;
                p += half * force(s1, s3, x);
            }
        }
        let tau = i as f64 * dt;
        if !(x.abs() <= UNBOUNDED_THRESHOLD) || !p.is_finite() {
            return Err(Error::UnboundedMotion { tau });
        }
        samples.push(Sample { tau, x, p });
    }
    Ok(Trajectory { samples, dt, method, s1, s3 })
}

impl Trajectory {
    pub fn last(&self) -> Sample {
        *self.samples.last().expect("trajectory holds the initial sample")
    }

    pub fn conserved_at(&self, i: usize) -> f64 {
        let s = self.samples[i];
        conserved(self.s1, self.s3, s.x, s.p)
    }

    /// Times at which `p` crosses zero going downward (displacement maxima).
    /// Each crossing is located on the cubic Hermite interpolant of `p` built
    /// from the stored `p` and `dp/dtau = force(x)` at the bracketing samples.
    pub fn maxima_times(&self) -> Vec<f64> {
        let h = self.dt;
        self.samples
            .windows(2)
            .filter(|w| w[0].p > 0.0 && w[1].p <= 0.0)
            .map(|w| {
                let (p0, p1) = (w[0].p, w[1].p);
                let (d0, d1) = (h * force(self.s1, self.s3, w[0].x), h * force(self.s1, self.s3, w[1].x));
                let hermite = |s: f64| {
                    let s2 = s * s;
                    let s3 = s2 * s;
                    (2.0 * s3 - 3.0 * s2 + 1.0) * p0
                        + (s3 - 2.0 * s2 + s) * d0
                        + (-2.0 * s3 + 3.0 * s2) * p1
                        + (s3 - s2) * d1
                };
                w[0].tau + h * bisect(hermite, 0.0, 1.0)
            })
            .collect()
    }
}

/// Root of `f` on `[lo, hi]` with `f(lo) > 0 >= f(hi)`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub const MIN_CYCLES: usize = 3;

pub fn measure_period(traj: &Trajectory) -> Result<PeriodEstimate> {
    if traj.dt <= 0.0 {
        return Err(invalid("dt", "period measurement needs forward time"));
    }
    let times = traj.maxima_times();
    let cycles = times.len().saturating_sub(1);
    if cycles < MIN_CYCLES {
        return Err(Error::InsufficientCycles { found: cycles, needed: MIN_CYCLES });
    }
    let lengths: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let period = (times[cycles] - times[0]) / cycles as f64;
    let var = lengths.iter().map(|l| (l - period).powi(2)).sum::<f64>() / (cycles - 1) as f64;
    Ok(PeriodEstimate {
        period,
        omega: 2.0 * PI / period,
        cycles_used: cycles,
        uncertainty: var.sqrt(),
    })
}

/// Largest `|C(tau) - C(0)|` along the trajectory.
pub fn conserved_drift(traj: &Trajectory) -> f64 {
    let c0 = traj.conserved_at(0);
    traj.samples
        .iter()
        .map(|s| (conserved(traj.s1, traj.s3, s.x, s.p) - c0).abs())
        .fold(0.0, f64::max)
}

/// Exact angular frequency of `x'' + x + b x^3 = 0` started from rest at `A`:
/// `(pi/2) sqrt(1 + bA^2) / K(m)` with `m = bA^2 / (2(1 + bA^2))`.
pub fn exact_duffing_omega(b: f64, amplitude: f64) -> Result<f64> {
    if !(b >= 0.0 && b.is_finite()) {
        return Err(invalid("b", format!("must be finite and >= 0, got {b}")));
    }
    if !amplitude.is_finite() {
        return Err(invalid("A", "must be finite"));
    }
    let q = b * amplitude * amplitude;
    let m = q / (2.0 * (1.0 + q));
    Ok(0.5 * PI * (1.0 + q).sqrt() / ellipk(m))
}

/// Steps needed to cover `cycles` periods of angular frequency `omega`, plus one.
pub fn steps_for_cycles(omega: f64, cycles: f64, dt: f64) -> usize {
    (cycles * 2.0 * PI / omega / dt).ceil() as usize + 1
}
