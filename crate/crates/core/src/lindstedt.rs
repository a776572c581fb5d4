//! Poincaré–Lindstedt expansion of `W^2 x'' + x + b x^3 = 0` (derivatives in
//! the stretched time `T = W tau`) to arbitrary order in `b`.
//!
//! With `W = 1 + sum_k W_k b^k`, `x = sum_k x_k b^k` and
//! `W^2 = sum_k w_k b^k`, the coefficient of `b^k` reads
//!
//! ```text
//! x_k'' + x_k = - sum_{i=1..k} w_i x_{k-i}''  -  sum_{i+j+l=k-1} x_i x_j x_l
//! ```
//!
//! `w_k = 2 W_k + (terms in W_1..W_{k-1})`, and `x_0'' = -A cos T`, so the
//! unknown `W_k` enters the right-hand side only through `2 W_k A cos T`. It
//! is chosen to cancel the resonant `cos T` forcing, after which the particular
//! solution is taken and a multiple of `cos T` is added so that `x_k(0) = 0`.
//! Initial velocity is zero throughout because every term is a cosine.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::trigpoly::{poly_to_json, rat, AmpPoly, TrigSeries};

pub const DEFAULT_ORDER_CAP: u32 = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSolution {
    order: u32,
    /// `W_1 ..= W_N`
    omega_corrections: Vec<AmpPoly>,
    /// `x_0 ..= x_N`
    displacement_corrections: Vec<TrigSeries>,
    /// `cos T` coefficient of each order's forcing after `W_k` was fixed.
    secular_residuals: Vec<AmpPoly>,
}

pub fn expand(order: u32) -> Result<PerturbationSolution> {
    expand_with_cap(order, DEFAULT_ORDER_CAP)
}

pub fn expand_with_cap(order: u32, cap: u32) -> Result<PerturbationSolution> {
    if order == 0 || order > cap {
        return Err(Error::OrderCapExceeded { order, cap });
    }
    let amp = AmpPoly::monomial(1, BigRational::one());
    let x0 = TrigSeries::cos(1, amp.clone());
    let mut xs = vec![x0];
    let mut xs_dd = vec![xs[0].second_derivative()];
    // W_0 = 1 is kept at index 0 while building.
    let mut omegas = vec![AmpPoly::one()];
    let mut w_sq: Vec<AmpPoly> = vec![AmpPoly::one()];
    let mut secular = Vec::with_capacity(order as usize);

    for k in 1..=order as usize {
        // b^k coefficient of W^2 without the 2 W_k piece.
        let w_known = (1..k).fold(AmpPoly::zero(), |acc, j| &acc + &(&omegas[j] * &omegas[k - j]));

        let mut rhs = cubic_coefficient(&xs, k - 1).neg();
        for i in 1..k {
            rhs = rhs.sub(&xs_dd[k - i].scale(&w_sq[i]));
        }
        rhs = rhs.sub(&xs_dd[0].scale(&w_known));

        // rhs + 2 W_k A cos T must have no cos T part.
        let resonant = rhs.coefficient(1);
        let omega_k = resonant
            .div_by_power(1)
            .ok_or_else(|| Error::ResidualSecularity(format!("order {k}: {resonant} not divisible by A")))?
            .scale(&rat(-1, 2));
        let forcing = TrigSeries::cos(1, &(&omega_k * &amp) * &AmpPoly::monomial(0, rat(2, 1)));
        let rhs = rhs.add(&forcing);
        secular.push(rhs.coefficient(1));

        let particular = rhs.solve_particular()?;
        let correction = TrigSeries::cos(1, -&particular.value_at_zero());
        let xk = particular.add(&correction);

        let w_k = &w_known + &omega_k.scale(&rat(2, 1));
        omegas.push(omega_k);
        w_sq.push(w_k);
        xs_dd.push(xk.second_derivative());
        xs.push(xk);
    }

    omegas.remove(0);
    Ok(PerturbationSolution {
        order,
        omega_corrections: omegas,
        displacement_corrections: xs,
        secular_residuals: secular,
    })
}

/// Coefficient of `b^n` in `x^3`, i.e. `sum_{i+j+l=n} x_i x_j x_l`.
fn cubic_coefficient(xs: &[TrigSeries], n: usize) -> TrigSeries {
    let mut out = TrigSeries::zero();
    for i in 0..=n {
        for j in 0..=n - i {
            let l = n - i - j;
            out = out.add(&xs[i].multiply(&xs[j]).multiply(&xs[l]));
        }
    }
    out
}

impl PerturbationSolution {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// `W_k` for `1 <= k <= order`.
    pub fn omega_correction(&self, k: u32) -> &AmpPoly {
        &self.omega_corrections[k as usize - 1]
    }

    pub fn omega_corrections(&self) -> &[AmpPoly] {
        &self.omega_corrections
    }

    /// `x_k` for `0 <= k <= order`.
    pub fn displacement(&self, k: u32) -> &TrigSeries {
        &self.displacement_corrections[k as usize]
    }

    pub fn displacement_corrections(&self) -> &[TrigSeries] {
        &self.displacement_corrections
    }

    pub fn secular_residuals(&self) -> &[AmpPoly] {
        &self.secular_residuals
    }

    /// Substitutes the whole solution back into the collected equations and
    /// checks, in exact arithmetic, that every order vanishes identically,
    /// that `x_0 = A cos T` and that each `x_k(0)` is zero.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let x0 = TrigSeries::cos(1, AmpPoly::monomial(1, BigRational::one()));
        if self.displacement_corrections[0] != x0 {
            return Err("x_0 is not A cos T".into());
        }
        let mut full = vec![AmpPoly::one()];
        full.extend(self.omega_corrections.iter().cloned());
        let xs = &self.displacement_corrections;
        for k in 1..=self.order as usize {
            if !xs[k].value_at_zero().is_zero() {
                return Err(format!("x_{k}(0) = {} != 0", xs[k].value_at_zero()));
            }
            let mut lhs = xs[k].add(&cubic_coefficient(xs, k - 1));
            for i in 0..=k {
                let w_i = (0..=i).fold(AmpPoly::zero(), |acc, j| &acc + &(&full[j] * &full[i - j]));
                lhs = lhs.add(&xs[k - i].second_derivative().scale(&w_i));
            }
            if !lhs.is_zero() {
                return Err(format!("order {k} residual {lhs}"));
            }
            if !self.secular_residuals[k - 1].is_zero() {
                return Err(format!("order {k} resonant forcing left: {}", self.secular_residuals[k - 1]));
            }
        }
        Ok(())
    }

    /// `1 + sum_k W_k(A) b^k` over all computed orders.
    pub fn omega_value(&self, b: f64, amplitude: f64) -> f64 {
        self.omega_value_to(self.order, b, amplitude)
    }

    /// Frequency series truncated at `min(order, self.order)`.
    pub fn omega_value_to(&self, order: u32, b: f64, amplitude: f64) -> f64 {
        let n = order.min(self.order) as usize;
        let mut acc = 0.0;
        for c in self.omega_corrections[..n].iter().rev() {
            acc = (acc + c.eval(amplitude)) * b;
        }
        1.0 + acc
    }

    /// Set when `b A^2 > 1`, where the series is not expected to be useful.
    pub fn radius_warning(b: f64, amplitude: f64) -> Option<String> {
        let s = b * amplitude * amplitude;
        (s.abs() > 1.0).then(|| format!("b A^2 = {s} > 1: outside the practical radius of the series"))
    }

    /// `x(tau)` with `T = W(b, A) tau`.
    pub fn trajectory_value(&self, b: f64, amplitude: f64, tau: f64) -> f64 {
        let t = self.omega_value(b, amplitude) * tau;
        self.sum_in_b(b, |s| s.evaluate(amplitude, t))
    }

    fn sum_in_b(&self, b: f64, f: impl Fn(&TrigSeries) -> f64) -> f64 {
        let mut acc = 0.0;
        for s in self.displacement_corrections.iter().rev() {
            acc = acc * b + f(s);
        }
        acc
    }

    /// Defect `x_tau_tau + x + b x^3` of the truncated solution at `tau`.
    pub fn residual(&self, b: f64, amplitude: f64, tau: f64) -> f64 {
        let w = self.omega_value(b, amplitude);
        let t = w * tau;
        let x = self.sum_in_b(b, |s| s.evaluate(amplitude, t));
        let x_tt = self.sum_in_b(b, |s| s.second_derivative().evaluate(amplitude, t));
        w * w * x_tt + x + b * x * x * x
    }

    /// Largest `|residual|` over `samples` points of one period.
    pub fn max_residual(&self, b: f64, amplitude: f64, samples: usize) -> f64 {
        let period = 2.0 * std::f64::consts::PI / self.omega_value(b, amplitude);
        (0..samples)
            .map(|i| self.residual(b, amplitude, period * i as f64 / samples as f64).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_dump(&self) -> LindstedtDump {
        LindstedtDump {
            order: self.order,
            omega_corrections: self
                .omega_corrections
                .iter()
                .enumerate()
                .map(|(i, c)| OmegaEntry {
                    k: i as u32 + 1,
                    poly: poly_to_json(c),
                    display: c.to_string(),
                })
                .collect(),
            displacement_corrections: self
                .displacement_corrections
                .iter()
                .enumerate()
                .map(|(i, s)| DisplacementEntry {
                    k: i as u32,
                    series: s.clone(),
                    display: s.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaEntry {
    pub k: u32,
    pub poly: Vec<(u32, String, String)>,
    pub display: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DisplacementEntry {
    pub k: u32,
    pub series: TrigSeries,
    pub display: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LindstedtDump {
    pub order: u32,
    pub omega_corrections: Vec<OmegaEntry>,
    pub displacement_corrections: Vec<DisplacementEntry>,
}
