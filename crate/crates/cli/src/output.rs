//! Value parsing for flags, and numeric formatting of results.

use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Significant digits of every number written by the tool.
pub const DIGITS: usize = 15;

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", DIGITS - 1, x).parse().unwrap_or(x)
}

/// Round every float in a JSON tree to [`DIGITS`] significant digits.
pub fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(f64::NAN));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, rounded(x))).collect()),
        other => other,
    }
}

/// Pretty JSON with rounded numbers and a trailing newline.
pub fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let value = rounded(serde_json::to_value(v)?);
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

/// `re,im`, `re` or `re+imi`-free plain forms: `1.5`, `-2,1`, `0,5`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("'{s}' is not a complex number (use re,im)"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("'{s}' is not a complex number (use re,im)")),
    }
}

/// `var=re,im`.
pub fn parse_assignment(s: &str) -> Result<(String, C64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("'{s}' is not of the form name=value"))?;
    Ok((name.trim().to_string(), parse_complex(value)?))
}

/// Inline JSON, or `@path` to read it from a file.
pub fn read_json_arg(s: &str) -> Result<String, CliError> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(round_sig(2.0 / 3.0), 0.666666666666667);
        assert_eq!(round_sig(-1.0e-20 / 3.0), -3.33333333333333e-21);
        let v = rounded(serde_json::json!({"x": [1.0 / 3.0, 2]}));
        assert_eq!(v.to_string(), r#"{"x":[0.333333333333333,2]}"#);
    }

    #[test]
    fn complex_flags() {
        assert_eq!(parse_complex("-2,1").unwrap(), C64::new(-2.0, 1.0));
        assert_eq!(parse_complex("5").unwrap(), C64::new(5.0, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert_eq!(parse_assignment("c=0,1").unwrap(), ("c".into(), C64::new(0.0, 1.0)));
    }
}
