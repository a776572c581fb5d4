//! Fixed-format numeric text shared by the CSV and JSON writers.

use serde_json::{Number, Value};

/// Exactly 17 significant digits. Positional notation for decimal exponents
/// in `-5..16`, scientific (`1.2345678901234567e-7`) outside it. Non-finite
/// values print as `NaN`, `inf` or `-inf`.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        let sci = format!("{x:.16e}");
        let (mantissa, exp) = sci.split_once('e').expect("exponent present");
        let exp: i32 = exp.parse().expect("integer exponent");
        if !(-5..16).contains(&exp) {
            return sci;
        }
        let (sign, mantissa) = match mantissa.strip_prefix('-') {
            Some(m) => ("-", m),
            None => ("", mantissa),
        };
        let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
        if exp >= 0 {
            let (int, frac) = digits.split_at(exp as usize + 1);
            if frac.is_empty() {
                format!("{sign}{int}")
            } else {
                format!("{sign}{int}.{frac}")
            }
        } else {
            format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
        }
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON number carrying the [`fmt17`] text verbatim; `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    fmt17(x)
        .parse::<Number>()
        .map(Value::Number)
        .expect("fmt17 output is a valid JSON number")
}

pub fn num_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        // 1.0366796875 is not a binary fraction; 17 digits show the nearest double.
        assert_eq!(fmt17(1.0366796875), "1.0366796874999999");
        assert_eq!(fmt17(1.375), "1.3750000000000000");
        assert_eq!(fmt17(-0.07), "-0.070000000000000007");
        assert_eq!(fmt17(0.0), "0.0000000000000000");
        assert_eq!(fmt17(1234.5), "1234.5000000000000");
        assert_eq!(fmt17(1e16), "1.0000000000000000e16");
        assert_eq!(fmt17(2.5e-6), "2.5000000000000002e-6");
        assert_eq!(fmt17(f64::NAN), "NaN");
        for x in [0.1, 1.0 / 3.0, 6.02e23, -1e-300, 99999.99999, -3.25e-5, 1e15 + 0.5] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_numbers_keep_text() {
        let v = serde_json::json!({ "Omega": num(1.0366796875) });
        assert_eq!(v.to_string(), r#"{"Omega":1.0366796874999999}"#);
        let back: f64 = serde_json::from_str(&v["Omega"].to_string()).unwrap();
        assert_eq!(back, 1.0366796875);
        assert_eq!(num(f64::INFINITY), Value::Null);
    }
}
