//! Physical parameters, the reduced-equation coefficient maps, the closed-form
//! amplitude-dependent frequencies and the isochronicity conditions.
//!
//! Both regimes reduce to `x'' + eps1 x + eps2 x^3 = 0` with `b = eps2 / eps1`:
//!
//! | regime    | eps1                    | eps2        |
//! |-----------|-------------------------|-------------|
//! | classical | `w^2`                   | `4 l / m`   |
//! | quantum   | `w^2 / h + 12 l / (m^2 w)` | `4 l / (m h)` |
//!
//! All quantities are dimensionless natural-unit numbers.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Classical,
    Quantum,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Classical => "classical",
            Regime::Quantum => "quantum",
        })
    }
}

/// Potential shape of `x'' + eps1 x + eps2 x^3 = 0`, read off the coefficient signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    SingleWell,
    InvertedDoubleWell,
    DoubleWell,
}

impl Shape {
    /// `None` when both coefficients are non-positive (no bounded motion at all).
    pub fn classify(eps1: f64, eps2: f64) -> Option<Shape> {
        match (eps1 > 0.0, eps2 >= 0.0) {
            (true, true) => Some(Shape::SingleWell),
            (true, false) => Some(Shape::InvertedDoubleWell),
            (false, _) if eps2 > 0.0 => Some(Shape::DoubleWell),
            _ => None,
        }
    }
}

/// How `b` is obtained in the quantum regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// `b = eps2 / eps1`.
    #[default]
    Exact,
    /// `b = 4l/(m w^2) - 48 l^2 h/(m^3 w^5)`, the expansion to first order in `hbar`.
    FirstOrderHbar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
    pub hbar: f64,
    pub regime: Regime,
}

impl PhysicalParams {
    pub fn new(m: f64, omega: f64, lambda: f64, hbar: f64, regime: Regime) -> Result<Self> {
        let p = PhysicalParams {
            m,
            omega,
            lambda,
            hbar,
            regime,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn classical(m: f64, omega: f64, lambda: f64) -> Result<Self> {
        Self::new(m, omega, lambda, 1.0, Regime::Classical)
    }

    pub fn quantum(m: f64, omega: f64, lambda: f64, hbar: f64) -> Result<Self> {
        Self::new(m, omega, lambda, hbar, Regime::Quantum)
    }

    pub fn validate(&self) -> Result<()> {
        positive("m", self.m)?;
        positive("omega", self.omega)?;
        positive("hbar", self.hbar)?;
        if !self.lambda.is_finite() {
            return Err(invalid("lambda", "must be finite"));
        }
        Ok(())
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        PhysicalParams { lambda, ..self }
    }

    /// Classical reduced nonlinearity `4 l / (m w^2)`.
    pub fn b_classical(&self) -> f64 {
        4.0 * self.lambda / (self.m * self.omega.powi(2))
    }

    /// Quantum `b` expanded to first order in `hbar`.
    pub fn b_quantum_truncated(&self) -> f64 {
        let (m, w, l, h) = (self.m, self.omega, self.lambda, self.hbar);
        self.b_classical() - 48.0 * l * l * h / (m.powi(3) * w.powi(5))
    }
}

pub(crate) fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedCoeffs {
    pub eps1: f64,
    pub eps2: f64,
    pub b: f64,
    pub shape: Shape,
    pub truncation: Truncation,
}

impl ReducedCoeffs {
    /// The perturbative treatment assumes `b` is small. A value of one or more
    /// is reported but not rejected.
    pub fn smallness_warning(&self) -> Option<String> {
        (self.b.abs() >= 1.0).then(|| {
            format!(
                "|b| = {} >= 1: perturbation series outside its small-parameter regime",
                self.b.abs()
            )
        })
    }
}

pub fn reduce_classical(params: &PhysicalParams) -> Result<ReducedCoeffs> {
    params.validate()?;
    let eps1 = params.omega * params.omega;
    let eps2 = 4.0 * params.lambda / params.m;
    Ok(ReducedCoeffs {
        eps1,
        eps2,
        b: eps2 / eps1,
        shape: Shape::classify(eps1, eps2).expect("eps1 = w^2 > 0"),
        truncation: Truncation::Exact,
    })
}

/// Coefficients of the coherent-state equation of motion. `eps1` collects the
/// terms linear in `x`, `eps2` the cubic ones.
pub fn reduce_quantum(params: &PhysicalParams, truncation: Truncation) -> Result<ReducedCoeffs> {
    params.validate()?;
    let (m, w, l, h) = (params.m, params.omega, params.lambda, params.hbar);
    let eps1 = w * w / h + 12.0 * l / (m * m * w);
    let eps2 = 4.0 * l / (m * h);
    if eps1 <= 0.0 {
        return Err(Error::NonPositiveLinearCoefficient { eps1 });
    }
    let b = match truncation {
        Truncation::Exact => eps2 / eps1,
        Truncation::FirstOrderHbar => params.b_quantum_truncated(),
    };
    Ok(ReducedCoeffs {
        eps1,
        eps2,
        b,
        shape: Shape::classify(eps1, eps2).expect("eps1 > 0 checked"),
        truncation,
    })
}

pub fn reduce(params: &PhysicalParams, truncation: Truncation) -> Result<ReducedCoeffs> {
    match params.regime {
        Regime::Classical => reduce_classical(params),
        Regime::Quantum => reduce_quantum(params, truncation),
    }
}

fn check_order(order: u32) -> Result<()> {
    match order {
        1 | 2 => Ok(()),
        o => Err(Error::UnsupportedOrder(o)),
    }
}

/// `1 + 3A^2 l/(2 m w^2)`, minus `21 A^4 l^2/(16 m^2 w^4)` at order 2.
pub fn frequency_classical(params: &PhysicalParams, amplitude: f64, order: u32) -> Result<f64> {
    params.validate()?;
    positive("A", amplitude)?;
    check_order(order)?;
    let (m, w, l) = (params.m, params.omega, params.lambda);
    let a2 = amplitude * amplitude;
    let mut omega = 1.0 + 3.0 * a2 * l / (2.0 * m * w * w);
    if order == 2 {
        omega -= 21.0 * a2 * a2 * l * l / (16.0 * m * m * w.powi(4));
    }
    Ok(omega)
}

/// Quantum frequency with every term beyond first order in `hbar` dropped.
pub fn frequency_quantum(params: &PhysicalParams, amplitude: f64, order: u32) -> Result<f64> {
    reduce_quantum(params, Truncation::FirstOrderHbar)?;
    positive("A", amplitude)?;
    check_order(order)?;
    let (m, w, l, h) = (params.m, params.omega, params.lambda, params.hbar);
    let a2 = amplitude * amplitude;
    let a4 = a2 * a2;
    let mut omega = 1.0 + 3.0 * a2 * l / (2.0 * m * w * w) - 18.0 * l * l * a2 * h / (m.powi(3) * w.powi(5));
    if order == 2 {
        omega += -21.0 * a4 * l * l / (16.0 * m * m * w.powi(4))
            + 63.0 * a4 * l.powi(3) * h / (2.0 * m.powi(4) * w.powi(7));
    }
    Ok(omega)
}

pub fn frequency(params: &PhysicalParams, amplitude: f64, order: u32) -> Result<f64> {
    match params.regime {
        Regime::Classical => frequency_classical(params, amplitude, order),
        Regime::Quantum => frequency_quantum(params, amplitude, order),
    }
}

/// `l* = m^2 w^3 / (12 h)`: the first-order quantum correction cancels the
/// classical amplitude term at every amplitude.
pub fn isochronicity_first_order_quantum(params: &PhysicalParams) -> Result<f64> {
    params.validate()?;
    let (m, w, h) = (params.m, params.omega, params.hbar);
    Ok(m * m * w.powi(3) / (12.0 * h))
}

/// `l = 8 m w^2 / (7 A^2)`: the two classical amplitude terms cancel at order 2.
pub fn isochronicity_second_order_classical(params: &PhysicalParams, amplitude: f64) -> Result<f64> {
    params.validate()?;
    positive("A", amplitude)?;
    Ok(8.0 * params.m * params.omega.powi(2) / (7.0 * amplitude * amplitude))
}

/// Coefficients `(a, b, c)` of `a l^2 + b l + c = 0`, the second-order quantum
/// isochronicity condition with the trivial root `l = 0` divided out.
pub fn quantum_isochronicity_quadratic(params: &PhysicalParams, amplitude: f64) -> (f64, f64, f64) {
    let (m, w, h) = (params.m, params.omega, params.hbar);
    let a2 = amplitude * amplitude;
    let a4 = a2 * a2;
    let qa = 63.0 * a4 * h / (2.0 * m.powi(4) * w.powi(7));
    let qb = -(18.0 * a2 * h / (m.powi(3) * w.powi(5)) + 21.0 * a4 / (16.0 * m * m * w.powi(4)));
    let qc = 3.0 * a2 / (2.0 * m * w * w);
    (qa, qb, qc)
}

/// The full second-order quantum condition (the amplitude-dependent part of
/// the order-2 quantum frequency) at `lambda`, returned as
/// `(value, sum of absolute term magnitudes)`.
pub fn quantum_isochronicity_condition(params: &PhysicalParams, amplitude: f64, lambda: f64) -> (f64, f64) {
    let (qa, qb, qc) = quantum_isochronicity_quadratic(params, amplitude);
    let l = lambda;
    let terms = [qc * l, qb * l * l, qa * l * l * l];
    (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsochronicityReport {
    pub lambda_roots: Vec<f64>,
    pub discriminant: f64,
    pub feasible: bool,
    pub order: u32,
    pub regime: Regime,
    /// `|condition| / sum|terms|` at each root.
    pub relative_residuals: Vec<f64>,
    /// The printed feasibility expression, which lacks the square on the
    /// linear coefficient. Diagnostic only.
    pub paper_literal_discriminant: f64,
}

/// Non-trivial real roots of the second-order quantum isochronicity condition.
pub fn isochronicity_second_order_quantum(params: &PhysicalParams, amplitude: f64) -> Result<IsochronicityReport> {
    params.validate()?;
    positive("A", amplitude)?;
    let (qa, qb, qc) = quantum_isochronicity_quadratic(params, amplitude);
    let discriminant = qb * qb - 4.0 * qa * qc;
    let paper_literal_discriminant = -qb - 4.0 * qa * qc;
    if discriminant < 0.0 {
        return Err(Error::NoRealRoot(discriminant));
    }
    // Cancellation-free form of the quadratic formula.
    let q = -0.5 * (qb + qb.signum() * discriminant.sqrt());
    let mut roots = vec![qc / q, q / qa];
    for r in roots.iter_mut() {
        // One Newton step on the quadratic tightens the last ulp or two.
        let f = (qa * *r + qb) * *r + qc;
        let df = 2.0 * qa * *r + qb;
        if df != 0.0 {
            *r -= f / df;
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    let relative_residuals = roots
        .iter()
        .map(|&l| {
            let (v, scale) = quantum_isochronicity_condition(params, amplitude, l);
            if scale == 0.0 { 0.0 } else { v.abs() / scale }
        })
        .collect();
    Ok(IsochronicityReport {
        lambda_roots: roots,
        discriminant,
        feasible: true,
        order: 2,
        regime: Regime::Quantum,
        relative_residuals,
        paper_literal_discriminant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_q(lambda: f64) -> PhysicalParams {
        PhysicalParams::quantum(1.0, 1.0, lambda, 1.0).unwrap()
    }

    #[test]
    fn classical_reduction_examples() {
        let r = reduce_classical(&PhysicalParams::classical(1.0, 1.0, 0.025).unwrap()).unwrap();
        assert!((r.eps1 - 1.0).abs() < 1e-15);
        assert!((r.eps2 - 0.1).abs() < 1e-15);
        assert!((r.b - 0.1).abs() < 1e-15);
        assert_eq!(r.shape, Shape::SingleWell);

        let r = reduce_classical(&PhysicalParams::classical(1.0, 2.0, 0.0).unwrap()).unwrap();
        assert_eq!(r.b, 0.0);

        let r = reduce_classical(&PhysicalParams::classical(2.0, 1.0, 0.05).unwrap()).unwrap();
        assert!((r.eps2 - 0.1).abs() < 1e-15);
        assert!((r.b - 0.1).abs() < 1e-15);

        let r = reduce_classical(&PhysicalParams::classical(1.0, 1.0, -0.1).unwrap()).unwrap();
        assert_eq!(r.shape, Shape::InvertedDoubleWell);
    }

    #[test]
    fn quantum_reduction_examples() {
        let p = unit_q(0.025);
        let t = reduce_quantum(&p, Truncation::FirstOrderHbar).unwrap();
        assert!((t.b - 0.07).abs() < 1e-15);
        let e = reduce_quantum(&p, Truncation::Exact).unwrap();
        assert!((e.eps1 - 1.3).abs() < 1e-15);
        assert!((e.eps2 - 0.1).abs() < 1e-15);
        assert!((e.b - 0.1 / 1.3).abs() < 1e-15);
        assert!((e.b - 0.0769231).abs() < 1e-7);
        for tr in [Truncation::Exact, Truncation::FirstOrderHbar] {
            assert_eq!(reduce_quantum(&unit_q(0.0), tr).unwrap().b, 0.0);
        }
    }

    #[test]
    fn deep_inverted_quantum_rejected() {
        // eps1 = 1 + 12 l <= 0 for l <= -1/12
        let err = reduce_quantum(&unit_q(-0.1), Truncation::Exact).unwrap_err();
        assert_eq!(err.name(), "NonPositiveLinearCoefficient");
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(PhysicalParams::classical(0.0, 1.0, 0.1).is_err());
        assert!(PhysicalParams::quantum(1.0, 1.0, 0.1, -1.0).is_err());
        assert!(PhysicalParams::classical(1.0, f64::NAN, 0.1).is_err());
    }

    #[test]
    fn large_b_warns_but_evaluates() {
        let r = reduce_classical(&PhysicalParams::classical(1.0, 1.0, 0.5).unwrap()).unwrap();
        assert!(r.smallness_warning().is_some());
        let r = reduce_classical(&PhysicalParams::classical(1.0, 1.0, 0.1).unwrap()).unwrap();
        assert!(r.smallness_warning().is_none());
    }

    #[test]
    fn classical_frequency_examples() {
        let p = PhysicalParams::classical(1.0, 1.0, 0.025).unwrap();
        assert!((frequency_classical(&p, 1.0, 1).unwrap() - 1.0375).abs() < 1e-15);
        assert!((frequency_classical(&p, 1.0, 2).unwrap() - 1.0366796875).abs() < 1e-15);
        let p0 = p.with_lambda(0.0);
        for a in [0.1, 1.0, 7.0] {
            assert_eq!(frequency_classical(&p0, a, 2).unwrap(), 1.0);
        }
        assert_eq!(frequency_classical(&p, 1.0, 3).unwrap_err(), Error::UnsupportedOrder(3));
        assert!(frequency_classical(&p, 0.0, 1).is_err());
    }

    #[test]
    fn quantum_frequency_examples() {
        let p = unit_q(0.025);
        assert!((frequency_quantum(&p, 1.0, 1).unwrap() - 1.02625).abs() < 1e-15);
        let iso = unit_q(1.0 / 12.0);
        for a in [0.3, 1.0, 3.0] {
            assert!((frequency_quantum(&iso, a, 1).unwrap() - 1.0).abs() < 1e-14);
        }
        assert_eq!(frequency_quantum(&unit_q(0.0), 2.0, 2).unwrap(), 1.0);
    }

    #[test]
    fn quantum_order_two_matches_truncated_series() {
        // 1 + 3/8 A^2 b - 21/256 A^4 b^2 with b truncated and the O(h^2) part
        // of b^2 dropped.
        let p = PhysicalParams::quantum(1.3, 0.8, 0.02, 0.4).unwrap();
        let a = 1.7;
        let b0 = p.b_classical();
        let bt = p.b_quantum_truncated();
        let b2 = b0 * b0 + 2.0 * b0 * (bt - b0);
        let series = 1.0 + 0.375 * a * a * bt - 21.0 / 256.0 * a.powi(4) * b2;
        assert!((frequency_quantum(&p, a, 2).unwrap() - series).abs() < 1e-14);
    }

    #[test]
    fn isochronicity_closed_forms() {
        let p = unit_q(0.0);
        assert!((isochronicity_first_order_quantum(&p).unwrap() - 1.0 / 12.0).abs() < 1e-16);
        let p2 = PhysicalParams::quantum(2.0, 1.0, 0.0, 1.0).unwrap();
        assert!((isochronicity_first_order_quantum(&p2).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        let ls = isochronicity_first_order_quantum(&p).unwrap();
        assert!((frequency_quantum(&p.with_lambda(ls), 3.0, 1).unwrap() - 1.0).abs() < 1e-14);

        let c = PhysicalParams::classical(1.0, 1.0, 0.0).unwrap();
        let l = isochronicity_second_order_classical(&c, 1.0).unwrap();
        assert!((l - 8.0 / 7.0).abs() < 1e-15);
        assert!((frequency_classical(&c.with_lambda(l), 1.0, 2).unwrap() - 1.0).abs() < 1e-14);
        assert!(isochronicity_second_order_classical(&c, 1e6).unwrap() < 1e-11);
    }

    #[test]
    fn quantum_second_order_roots() {
        let p = unit_q(0.0);
        let (qa, qb, qc) = quantum_isochronicity_quadratic(&p, 1.0);
        assert!((qa - 31.5).abs() < 1e-14);
        assert!((qb + 19.3125).abs() < 1e-14);
        assert!((qc - 1.5).abs() < 1e-14);
        let rep = isochronicity_second_order_quantum(&p, 1.0).unwrap();
        assert!(rep.feasible);
        assert_eq!(rep.lambda_roots.len(), 2);
        // reference roots from a 20-digit symbolic solve
        assert!((rep.lambda_roots[0] - 0.091_251_555_161_823_51).abs() < 1e-15);
        assert!((rep.lambda_roots[1] - 0.521_843_682_933_414_6).abs() < 1e-15);
        for &l in &rep.lambda_roots {
            let (v, _) = quantum_isochronicity_condition(&p, 1.0, l);
            assert!(v.abs() < 1e-12);
        }
        assert!(rep.relative_residuals.iter().all(|r| *r < 1e-10));
        // lambda = 0 is the trivial root
        assert_eq!(quantum_isochronicity_condition(&p, 1.0, 0.0).0, 0.0);
    }

    #[test]
    fn quantum_second_order_infeasible() {
        // At m = w = A = 1 the discriminant 324h^2 - 141.75h + 1.7227 is
        // negative for h between about 0.0125 and 0.425.
        let p = PhysicalParams::quantum(1.0, 1.0, 0.0, 0.1).unwrap();
        let (qa, qb, qc) = quantum_isochronicity_quadratic(&p, 1.0);
        assert!(qb * qb - 4.0 * qa * qc < 0.0);
        let err = isochronicity_second_order_quantum(&p, 1.0).unwrap_err();
        assert_eq!(err.name(), "NoRealRoot");
    }
}
