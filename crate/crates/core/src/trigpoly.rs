//! Exact algebra of finite cosine series `sum_n c_n(A) cos(nT)` whose
//! coefficients are polynomials in the amplitude `A` with rational
//! coefficients.
//!
//! Only cosines appear: every equation handled here involves `x`, `x^3` and
//! `d^2x/dT^2` with even initial data, and products of cosines linearize back
//! to cosines. Nothing in this module touches floating point except
//! [`AmpPoly::eval`] and [`TrigSeries::evaluate`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Polynomial in `A`, stored sparsely by power. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AmpPoly {
    coeffs: BTreeMap<u32, BigRational>,
}

impl AmpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigRational::one())
    }

    /// `coeff * A^power`
    pub fn monomial(power: u32, coeff: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(power, coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, BigRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, power: u32, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(power).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.coeffs.remove(&power);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, power: u32) -> BigRational {
        self.coeffs.get(&power).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        AmpPoly {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    /// Exact division by `A^power`; `None` when some term has a lower power.
    pub fn div_by_power(&self, power: u32) -> Option<Self> {
        self.coeffs
            .iter()
            .map(|(k, c)| k.checked_sub(power).map(|k| (k, c.clone())))
            .collect::<Option<BTreeMap<_, _>>>()
            .map(|coeffs| AmpPoly { coeffs })
    }

    pub fn eval(&self, a: f64) -> f64 {
        // Horner over the sparse powers, highest first.
        let mut acc = 0.0;
        let mut prev: Option<u32> = None;
        for (k, c) in self.coeffs.iter().rev() {
            if let Some(p) = prev {
                acc *= a.powi((p - k) as i32);
            }
            acc += c.to_f64().unwrap_or(f64::NAN);
            prev = Some(*k);
        }
        if let Some(p) = prev {
            acc *= a.powi(p as i32);
        }
        acc
    }

    pub fn eval_exact(&self, a: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .fold(BigRational::zero(), |acc, (k, c)| acc + c * pow(a, *k))
    }

    fn canonical(&self) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(k, c)| (*k, c.clone())))
    }
}

pub(crate) fn pow(a: &BigRational, k: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= a;
    }
    out
}

impl<'a> Add<&'a AmpPoly> for &'a AmpPoly {
    type Output = AmpPoly;
    fn add(self, rhs: &AmpPoly) -> AmpPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a AmpPoly> for &'a AmpPoly {
    type Output = AmpPoly;
    fn sub(self, rhs: &AmpPoly) -> AmpPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a AmpPoly> for &'a AmpPoly {
    type Output = AmpPoly;
    fn mul(self, rhs: &AmpPoly) -> AmpPoly {
        let mut out = AmpPoly::zero();
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &rhs.coeffs {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &AmpPoly {
    type Output = AmpPoly;
    fn neg(self) -> AmpPoly {
        AmpPoly {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for AmpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{sign}")?;
            if i > 0 {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            match (*k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                _ => write!(f, "{mag} ")?,
            }
            match *k {
                0 => {}
                1 => f.write_str("A")?,
                k => write!(f, "A^{k}")?,
            }
        }
        Ok(())
    }
}

/// `sum_n c_n(A) cos(n T)` with `n >= 0`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TrigSeries {
    terms: BTreeMap<u32, AmpPoly>,
}

impl TrigSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `coeff * cos(harmonic T)`
    pub fn cos(harmonic: u32, coeff: AmpPoly) -> Self {
        let mut s = Self::zero();
        s.add_harmonic(harmonic, &coeff);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, AmpPoly)>>(terms: I) -> Self {
        let mut s = Self::zero();
        for (n, c) in terms {
            s.add_harmonic(n, &c);
        }
        s
    }

    fn add_harmonic(&mut self, n: u32, c: &AmpPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(n).or_default();
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&n);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, harmonic: u32) -> AmpPoly {
        self.terms.get(&harmonic).cloned().unwrap_or_default()
    }

    pub fn harmonics(&self) -> impl Iterator<Item = (u32, &AmpPoly)> {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    pub fn max_harmonic(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &TrigSeries) -> TrigSeries {
        let mut out = self.clone();
        for (n, c) in &other.terms {
            out.add_harmonic(*n, c);
        }
        out
    }

    pub fn sub(&self, other: &TrigSeries) -> TrigSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TrigSeries {
        TrigSeries {
            terms: self.terms.iter().map(|(n, c)| (*n, -c)).collect(),
        }
    }

    /// Multiplies every coefficient by the polynomial `p`.
    pub fn scale(&self, p: &AmpPoly) -> TrigSeries {
        TrigSeries::from_terms(self.terms.iter().map(|(n, c)| (*n, c * p)))
    }

    /// Product, linearized with `cos a cos b = (cos(a-b) + cos(a+b)) / 2`.
    pub fn multiply(&self, other: &TrigSeries) -> TrigSeries {
        let half = rat(1, 2);
        let mut out = TrigSeries::zero();
        for (n1, c1) in &self.terms {
            for (n2, c2) in &other.terms {
                let prod = (c1 * c2).scale(&half);
                out.add_harmonic(n1.abs_diff(*n2), &prod);
                out.add_harmonic(n1 + n2, &prod);
            }
        }
        out
    }

    pub fn second_derivative(&self) -> TrigSeries {
        TrigSeries::from_terms(self.terms.iter().map(|(n, c)| {
            let n2 = BigRational::from_integer(BigInt::from(*n) * BigInt::from(*n));
            (*n, c.scale(&-n2))
        }))
    }

    /// Particular solution of `y'' + y = rhs`, term by term `r_n / (1 - n^2)`.
    /// The resonant `cos T` coefficient must already be zero.
    pub fn solve_particular(&self) -> Result<TrigSeries> {
        if let Some(c) = self.terms.get(&1) {
            return Err(Error::ResidualSecularity(c.to_string()));
        }
        Ok(TrigSeries::from_terms(self.terms.iter().map(|(n, c)| {
            let nn = BigInt::from(*n);
            let denom = BigRational::from_integer(BigInt::one() - &nn * &nn);
            (*n, c.scale(&denom.recip()))
        })))
    }

    /// Exact value at `T = 0`: the sum of all coefficients.
    pub fn value_at_zero(&self) -> AmpPoly {
        self.terms.values().fold(AmpPoly::zero(), |acc, c| &acc + c)
    }

    pub fn evaluate(&self, amplitude: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(n, c)| c.eval(amplitude) * (*n as f64 * t).cos())
            .sum()
    }

    /// Rebuilds the series from its terms; a no-op on any value this module produced.
    pub fn canonicalize(&self) -> TrigSeries {
        TrigSeries::from_terms(self.terms.iter().map(|(n, c)| (*n, c.canonical())))
    }
}

impl fmt::Display for TrigSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (n, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match n {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c}) cos T")?,
                n => write!(f, "({c}) cos {n}T")?,
            }
        }
        Ok(())
    }
}

/// One harmonic of the canonical JSON form: `(power, numerator, denominator)`
/// triples, with the integers written as decimal strings so that arbitrarily
/// large values survive any JSON reader.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicJson {
    pub harmonic: u32,
    pub coefficients: Vec<(u32, String, String)>,
}

pub fn poly_to_json(p: &AmpPoly) -> Vec<(u32, String, String)> {
    p.terms()
        .map(|(k, c)| (k, c.numer().to_string(), c.denom().to_string()))
        .collect()
}

pub fn poly_from_json(terms: &[(u32, String, String)]) -> std::result::Result<AmpPoly, String> {
    let mut out = Vec::with_capacity(terms.len());
    for (k, num, den) in terms {
        let num: BigInt = num.parse().map_err(|e| format!("numerator {num:?}: {e}"))?;
        let den: BigInt = den.parse().map_err(|e| format!("denominator {den:?}: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        out.push((*k, BigRational::new(num, den)));
    }
    Ok(AmpPoly::from_terms(out))
}

impl Serialize for TrigSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<HarmonicJson> = self
            .terms
            .iter()
            .map(|(n, c)| HarmonicJson {
                harmonic: *n,
                coefficients: poly_to_json(c),
            })
            .collect();
        list.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TrigSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let list = Vec::<HarmonicJson>::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(list.len());
        for h in list {
            terms.push((h.harmonic, poly_from_json(&h.coefficients).map_err(serde::de::Error::custom)?));
        }
        Ok(TrigSeries::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a_pow(k: u32, num: i64, den: i64) -> AmpPoly {
        AmpPoly::monomial(k, rat(num, den))
    }

    fn cos_t() -> TrigSeries {
        TrigSeries::cos(1, AmpPoly::one())
    }

    #[test]
    fn add_examples() {
        assert_eq!(cos_t().add(&cos_t()), TrigSeries::cos(1, a_pow(0, 2, 1)));
        assert!(cos_t().add(&cos_t().neg()).is_zero());
        let s1 = TrigSeries::cos(1, a_pow(1, 1, 1));
        let s2 = TrigSeries::cos(3, a_pow(2, 1, 1));
        let sum = s1.add(&s2);
        assert_eq!(sum.coefficient(1), a_pow(1, 1, 1));
        assert_eq!(sum.coefficient(3), a_pow(2, 1, 1));
        assert_eq!(sum.harmonics().count(), 2);
    }

    #[test]
    fn multiply_examples() {
        let sq = cos_t().multiply(&cos_t());
        assert_eq!(sq, TrigSeries::from_terms([(0, a_pow(0, 1, 2)), (2, a_pow(0, 1, 2))]));

        let x0 = TrigSeries::cos(1, a_pow(1, 1, 1));
        let cube = x0.multiply(&x0).multiply(&x0);
        assert_eq!(cube, TrigSeries::from_terms([(1, a_pow(3, 3, 4)), (3, a_pow(3, 1, 4))]));

        let c2 = TrigSeries::cos(2, AmpPoly::one());
        let c3 = TrigSeries::cos(3, AmpPoly::one());
        assert_eq!(
            c2.multiply(&c3),
            TrigSeries::from_terms([(1, a_pow(0, 1, 2)), (5, a_pow(0, 1, 2))])
        );
    }

    #[test]
    fn second_derivative_examples() {
        assert_eq!(cos_t().second_derivative(), cos_t().neg());
        assert_eq!(
            TrigSeries::cos(3, AmpPoly::one()).second_derivative(),
            TrigSeries::cos(3, a_pow(0, -9, 1))
        );
        assert!(TrigSeries::cos(0, a_pow(2, 5, 3)).second_derivative().is_zero());
    }

    #[test]
    fn solve_particular_examples() {
        let rhs = TrigSeries::cos(3, a_pow(3, -1, 4));
        assert_eq!(rhs.solve_particular().unwrap(), TrigSeries::cos(3, a_pow(3, 1, 32)));
        assert!(TrigSeries::zero().solve_particular().unwrap().is_zero());
        let err = cos_t().solve_particular().unwrap_err();
        assert_eq!(err.name(), "ResidualSecularity");
        // constant forcing: y = r_0
        let c = TrigSeries::cos(0, a_pow(2, 7, 5));
        assert_eq!(c.solve_particular().unwrap(), c);
    }

    #[test]
    fn evaluate_examples() {
        let x1 = TrigSeries::from_terms([(3, a_pow(3, 1, 32)), (1, a_pow(3, -1, 32))]);
        assert_eq!(x1.evaluate(1.0, 0.0), 0.0);
        assert!(x1.value_at_zero().is_zero());
        assert!((cos_t().evaluate(1.0, std::f64::consts::PI) + 1.0).abs() < 1e-15);
        let cube = TrigSeries::from_terms([(1, a_pow(3, 3, 4)), (3, a_pow(3, 1, 4))]);
        assert!((cube.evaluate(2.0, 0.0) - 8.0).abs() < 1e-14);
    }

    #[test]
    fn poly_display() {
        let p = AmpPoly::from_terms([(2, rat(3, 8)), (4, rat(-21, 256)), (0, rat(1, 1))]);
        assert_eq!(p.to_string(), "1 + 3/8 A^2 - 21/256 A^4");
        assert_eq!(AmpPoly::zero().to_string(), "0");
    }

    #[test]
    fn poly_division_by_power() {
        let p = AmpPoly::from_terms([(3, rat(3, 4)), (5, rat(1, 2))]);
        assert_eq!(p.div_by_power(1).unwrap(), AmpPoly::from_terms([(2, rat(3, 4)), (4, rat(1, 2))]));
        assert!(p.div_by_power(4).is_none());
    }

    #[test]
    fn json_form() {
        let x1 = TrigSeries::from_terms([(3, a_pow(3, 1, 32)), (1, a_pow(3, -1, 32))]);
        let j = serde_json::to_string(&x1).unwrap();
        assert_eq!(
            j,
            r#"[{"harmonic":1,"coefficients":[[3,"-1","32"]]},{"harmonic":3,"coefficients":[[3,"1","32"]]}]"#
        );
        let back: TrigSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, x1);
        // non-canonical input is canonicalized on read
        let messy = r#"[{"harmonic":2,"coefficients":[[1,"2","4"],[1,"-1","2"]]}]"#;
        assert!(serde_json::from_str::<TrigSeries>(messy).unwrap().is_zero());
    }

    fn small_poly() -> impl Strategy<Value = AmpPoly> {
        prop::collection::vec((0u32..4, -6i64..7, 1i64..5), 0..4)
            .prop_map(|v| AmpPoly::from_terms(v.into_iter().map(|(k, n, d)| (k, rat(n, d)))))
    }

    fn small_series() -> impl Strategy<Value = TrigSeries> {
        prop::collection::vec((0u32..6, small_poly()), 0..4).prop_map(TrigSeries::from_terms)
    }

    proptest! {
        #[test]
        fn product_agrees_pointwise(
            s1 in small_series(),
            s2 in small_series(),
            pts in prop::collection::vec((-1.5f64..1.5, -10.0f64..10.0), 100),
        ) {
            let prod = s1.multiply(&s2);
            for (a, t) in pts {
                let lhs = prod.evaluate(a, t);
                let rhs = s1.evaluate(a, t) * s2.evaluate(a, t);
                prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
            }
        }

        #[test]
        fn particular_solution_inverts_operator(r in small_series(), s in small_series()) {
            let r = r.sub(&TrigSeries::cos(1, r.coefficient(1)));
            let y = r.solve_particular().unwrap();
            prop_assert_eq!(y.second_derivative().add(&y), r);
            // linearity of the second derivative
            prop_assert_eq!(
                y.add(&s).second_derivative(),
                y.second_derivative().add(&s.second_derivative())
            );
        }

        #[test]
        fn canonical_form_is_idempotent(s1 in small_series(), s2 in small_series()) {
            let p = s1.multiply(&s2).add(&s1.second_derivative());
            prop_assert_eq!(p.canonicalize(), p.clone());
            for (_, c) in p.harmonics() {
                prop_assert!(!c.is_zero());
                prop_assert!(c.terms().all(|(_, q)| !q.is_zero()));
            }
        }
    }
}
