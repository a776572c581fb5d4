//! Period integrals near the separatrices of the two double-well variants of
//! the reduced equation, and the amplitude bounds that follow from them.
//!
//! Inverted double well: `x'' + x - b x^3 = 0`, `p^2/2 + x^2/2 - b x^4/4 = C`.
//! Double well: `x'' - x + b x^3 = 0`, `p^2/2 - x^2/2 + b x^4/4 = C`.
//!
//! Periods are returned in the convention `T/2 = int_0^A dx / p`, i.e. `T` is
//! twice the travel time from the origin to the turning point. For a
//! cross-barrier orbit of the double well this is half the full round trip;
//! see [`dw_orbit_period`].

use std::f64::consts::E as EULER;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{positive, PhysicalParams, Regime};
use crate::quadrature::integrate;

/// The bound constant `(e - 1)/(e + 1) = tanh(1/2)`.
pub fn k_constant() -> f64 {
    (EULER - 1.0) / (EULER + 1.0)
}

/// Eleven-digit printed value of [`k_constant`], kept for regression checks.
pub const K_PRINTED: f64 = 0.462_117_157_26;

const QUAD_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Well {
    InvertedDoubleWell,
    DoubleWell,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    pub b: f64,
    pub well: Well,
    /// Value of the conserved quantity `C`.
    pub energy: f64,
}

impl WellSpec {
    pub fn new(b: f64, well: Well, energy: f64) -> Result<Self> {
        positive("b", b)?;
        if !(energy >= 0.0 && energy.is_finite()) {
            return Err(invalid("E", format!("must be finite and >= 0, got {energy}")));
        }
        Ok(WellSpec { b, well, energy })
    }

    /// `sqrt(2/b)`: where the `C = 0` level curve meets `p = 0` away from the origin.
    pub fn zero_energy_turning_point(&self) -> f64 {
        (2.0 / self.b).sqrt()
    }
}

/// Half-period integral on the `C = 0` level with the lower limit moved from
/// the origin to `cutoff`; grows like `ln(1/cutoff)` as the cutoff shrinks.
///
/// Double well: `int_cutoff^A dx / (x sqrt(1 - b x^2/2))`, requires `A <= sqrt(2/b)`.
///
/// Inverted double well: `int_cutoff^A dx / (x sqrt(b x^2/2 - 1))`, requires
/// `A >= sqrt(2/b)`. Below `sqrt(2/b)` the radicand is negative and the
/// integrand imaginary; that stretch contributes with the modulus
/// `1 / (x sqrt(1 - b x^2/2))`, which is where the divergence comes from.
pub fn separatrix_period_divergence(spec: &WellSpec, amplitude: f64, cutoff: f64) -> Result<f64> {
    if spec.energy != 0.0 {
        return Err(invalid("E", "separatrix integral is defined on C = 0"));
    }
    positive("cutoff", cutoff)?;
    if !(cutoff <= amplitude) {
        return Err(invalid("cutoff", format!("must not exceed A = {amplitude}")));
    }
    let xs = spec.zero_energy_turning_point();
    match spec.well {
        Well::DoubleWell => {
            if amplitude > xs {
                return Err(Error::DomainError(format!(
                    "A = {amplitude} beyond sqrt(2/b) = {xs}: integrand not real"
                )));
            }
            forbidden_stretch(xs, cutoff, amplitude)
        }
        Well::InvertedDoubleWell => {
            if amplitude < xs {
                return Err(Error::DomainError(format!(
                    "A = {amplitude} below sqrt(2/b) = {xs}: integrand not real at the upper limit"
                )));
            }
            // b x^2/2 = sec^2(t) turns the real stretch into int dt.
            let lo = cutoff.max(xs);
            let real = integrate(|_| 1.0, (xs / lo).acos(), (xs / amplitude).acos(), QUAD_TOL)?.value;
            let imag = if cutoff < xs { forbidden_stretch(xs, cutoff, xs)? } else { 0.0 };
            Ok(real + imag)
        }
    }
}

/// `int_lo^hi dx / (x sqrt(1 - (x/xs)^2))` via `x = xs cos(t)`, giving `int sec(t) dt`.
fn forbidden_stretch(xs: f64, lo: f64, hi: f64) -> Result<f64> {
    let t_hi = (lo / xs).min(1.0).acos();
    let t_lo = (hi / xs).min(1.0).acos();
    Ok(integrate(|t: f64| 1.0 / t.cos(), t_lo, t_hi, QUAD_TOL)?.value)
}

/// Inverted-well period at the energy fixed by `2 sqrt(bE) = 1`:
/// `T = sqrt(2/E) artanh(sqrt(b) A) / sqrt(b) = 2 sqrt(2) artanh(sqrt(b) A)`.
/// The magnitude is returned; see [`inverted_special_period_signed`].
pub fn inverted_special_period(b: f64, amplitude: f64) -> Result<f64> {
    positive("b", b)?;
    if !(amplitude >= 0.0) {
        return Err(invalid("A", format!("must be >= 0, got {amplitude}")));
    }
    let arg = b.sqrt() * amplitude;
    if arg >= 1.0 {
        return Err(Error::ArgumentOutOfRange(arg));
    }
    let energy = 0.25 / b;
    let scale = (b / (4.0 * energy)).powf(0.25);
    Ok((2.0 / energy).sqrt() * (scale * amplitude).atanh() / scale)
}

/// The closed form with the leading minus sign as printed. Diagnostic only.
pub fn inverted_special_period_signed(b: f64, amplitude: f64) -> Result<f64> {
    inverted_special_period(b, amplitude).map(|t| -t)
}

/// `T = 2 int_0^A dx / sqrt(b x^4/2 - x^2 + 2E)` on the inverted well, by quadrature.
pub fn inverted_period_quadrature(b: f64, energy: f64, amplitude: f64) -> Result<f64> {
    positive("b", b)?;
    positive("E", energy)?;
    if !(amplitude >= 0.0) {
        return Err(invalid("A", format!("must be >= 0, got {amplitude}")));
    }
    let a2 = amplitude * amplitude;
    let disc = 1.0 - 4.0 * b * energy;
    // Below the barrier energy the radicand vanishes at x^2 = (1 - sqrt(disc))/b.
    let blocked = if disc > 0.0 {
        a2 >= 4.0 * energy / (1.0 + disc.sqrt())
    } else {
        disc == 0.0 && a2 >= 1.0 / b
    };
    if blocked {
        return Err(Error::DomainError(format!(
            "radicand of the period integral vanishes inside [0, {amplitude}]"
        )));
    }
    let half = integrate(
        |x: f64| {
            let x2 = x * x;
            1.0 / (0.5 * b * x2 * x2 - x2 + 2.0 * energy).sqrt()
        },
        0.0,
        amplitude,
        QUAD_TOL,
    )?
    .value;
    Ok(2.0 * half)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub regime: Option<Regime>,
    pub a_max: f64,
    /// Which bound produced `a_max`.
    pub formula_id: &'static str,
    /// Inputs as `(name, value)` pairs.
    pub inputs: Vec<(&'static str, f64)>,
    /// Printed variant where it differs from `a_max`. Diagnostic only.
    pub paper_literal_a_max: Option<f64>,
}

/// `A < k / sqrt(b)` with `k = (e - 1)/(e + 1)`.
pub fn inverted_amplitude_bound(b: f64) -> Result<BoundReport> {
    positive("b", b)?;
    Ok(BoundReport {
        regime: None,
        a_max: k_constant() / b.sqrt(),
        formula_id: "inverted_k_over_sqrt_b",
        inputs: vec![("b", b)],
        paper_literal_a_max: None,
    })
}

/// Inverted-well bound in physical units: `(k w / 2) sqrt(m / l)` classically,
/// `k / sqrt(b_QM)` with `b_QM` truncated at first order in `hbar` otherwise.
pub fn amplitude_bound_physical(params: &PhysicalParams) -> Result<BoundReport> {
    params.validate()?;
    let (m, w, l, h) = (params.m, params.omega, params.lambda, params.hbar);
    positive("lambda", l)?;
    let k = k_constant();
    match params.regime {
        Regime::Classical => Ok(BoundReport {
            regime: Some(Regime::Classical),
            a_max: 0.5 * k * w * (m / l).sqrt(),
            formula_id: "classical_k_omega_sqrt_m_over_lambda",
            inputs: vec![("m", m), ("omega", w), ("lambda", l)],
            paper_literal_a_max: None,
        }),
        Regime::Quantum => {
            let bq = params.b_quantum_truncated();
            if bq <= 0.0 {
                return Err(Error::NegativeTruncatedB(bq));
            }
            Ok(BoundReport {
                regime: Some(Regime::Quantum),
                a_max: k / bq.sqrt(),
                formula_id: "quantum_k_over_sqrt_truncated_b",
                inputs: vec![("m", m), ("omega", w), ("lambda", l), ("hbar", h)],
                paper_literal_a_max: None,
            })
        }
    }
}

/// `4k^2 - 2b k^3 + 8E k`, the radicand of the double-well period integral in `k = x^2`.
pub fn dw_radicand(b: f64, energy: f64, k: f64) -> f64 {
    k * (4.0 * k - 2.0 * b * k * k + 8.0 * energy)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoints {
    /// Positive root in `k = x^2`: the squared turning point.
    pub k_plus: f64,
    pub k_minus: f64,
    /// `|radicand(k_plus)|`
    pub radicand_residual: f64,
    /// `radicand_residual` divided by the largest term magnitude at `k_plus`.
    pub relative_residual: f64,
    /// Roots as printed, `(-1 +- sqrt(1 + 4bE))/b`. Diagnostic only.
    pub paper_literal: (f64, f64),
}

/// Roots of `b k^2 - 2k - 4E = 0`, the quadratic factor of the radicand.
pub fn dw_turning_points(b: f64, energy: f64) -> Result<TurningPoints> {
    positive("b", b)?;
    positive("E", energy)?;
    let s = (1.0 + 4.0 * b * energy).sqrt();
    let k_plus = (1.0 + s) / b;
    let k_minus = -4.0 * energy / (1.0 + s);
    let radicand_residual = dw_radicand(b, energy, k_plus).abs();
    let scale = (4.0 * k_plus * k_plus).max(2.0 * b * k_plus.powi(3)).max(8.0 * energy * k_plus);
    // (-1 + s)/b via the cancellation-free 4E/(1 + s)
    let paper_literal = (4.0 * energy / (1.0 + s), (-1.0 - s) / b);
    Ok(TurningPoints {
        k_plus,
        k_minus,
        radicand_residual,
        relative_residual: radicand_residual / scale,
        paper_literal,
    })
}

/// `T = 2 int_0^{A^2} dk / sqrt(4k^2 - 2b k^3 + 8E k)`.
///
/// The `1/sqrt(k)` endpoint at zero is removed with `k = u^2` and the
/// `1/sqrt(k_plus - k)` endpoint with `k = k_plus - v^2`, using the factored
/// radicand `2b k (k_plus - k)(k - k_minus)` so that no cancellation occurs
/// near the turning point.
pub fn dw_period(b: f64, energy: f64, amplitude: f64) -> Result<f64> {
    let tp = dw_turning_points(b, energy)?;
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(invalid("A", format!("must be finite and >= 0, got {amplitude}")));
    }
    let a2 = amplitude * amplitude;
    if a2 > tp.k_plus * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::AmplitudeBeyondTurningPoint { a2, k_plus: tp.k_plus });
    }
    let a2 = a2.min(tp.k_plus);
    if a2 == 0.0 {
        return Ok(0.0);
    }
    let split = 0.5 * a2;
    let near_origin = integrate(
        |u: f64| {
            let k = u * u;
            2.0 / (4.0 * k - 2.0 * b * k * k + 8.0 * energy).sqrt()
        },
        0.0,
        split.sqrt(),
        QUAD_TOL,
    )?
    .value;
    let (kp, km) = (tp.k_plus, tp.k_minus);
    let near_turn = integrate(
        |v: f64| {
            let k = kp - v * v;
            2.0 / (2.0 * b * k * (k - km)).sqrt()
        },
        (kp - a2).sqrt(),
        (kp - split).sqrt(),
        QUAD_TOL,
    )?
    .value;
    Ok(2.0 * (near_origin + near_turn))
}

/// Full round-trip period of the cross-barrier orbit with turning points
/// `+-sqrt(k_plus)`: the orbit visits both halves, so it is `2 dw_period`.
pub fn dw_orbit_period(b: f64, energy: f64) -> Result<f64> {
    let tp = dw_turning_points(b, energy)?;
    Ok(2.0 * dw_period(b, energy, tp.k_plus.sqrt())?)
}

/// `A_max = sqrt(k_plus)`; the printed `sqrt((-1 + sqrt(1 + 4bE))/b)` rides along.
pub fn dw_amplitude_bound(b: f64, energy: f64) -> Result<BoundReport> {
    let tp = dw_turning_points(b, energy)?;
    Ok(BoundReport {
        regime: None,
        a_max: tp.k_plus.sqrt(),
        formula_id: "double_well_turning_point",
        inputs: vec![("b", b), ("E", energy)],
        paper_literal_a_max: Some(tp.paper_literal.0.sqrt()),
    })
}
