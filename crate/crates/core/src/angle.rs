//! Angle tokens such as `pi`, `-pi/2`, `2pi/3`, `0.25` or `3*pi/4`, parsed to radians.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub fn parse_angle(token: &str) -> Result<f64> {
    let bad = || Error::InvalidAngle(token.to_string());
    let s: String = token.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    if s.is_empty() {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s.as_str(), None),
    };
    let value = parse_term(num).ok_or_else(bad)?;
    let value = match den {
        Some(d) => {
            let d: f64 = d.parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            value / d
        }
        None => value,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// `[sign][coefficient][*]pi` or a plain decimal.
fn parse_term(s: &str) -> Option<f64> {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    if let Some(coef) = body.strip_suffix("pi") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let c = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().ok()? };
        return Some(sign * c * PI);
    }
    if body.is_empty() || body.starts_with(['-', '+']) {
        return None;
    }
    body.parse::<f64>().ok().map(|v| sign * v)
}

/// Comma-separated list of angle tokens.
pub fn parse_angle_list(list: &str) -> Result<Vec<f64>> {
    list.split(',').map(parse_angle).collect()
}
