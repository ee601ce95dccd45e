//! `family:key=value,...;family:...` lists.
//!
//! A value is a decimal (`0.25`, `-1e-3`), a rational `p/q`, or `?name`
//! for an unknown. Every parameter of the family must be given exactly once.

use hermix_core::moments::{FamilySpec, Param};
use hermix_core::scalar::parse_decimal;
use num_traits::Zero;

use crate::error::CliError;

const FAMILIES: &[(&str, &[&str])] = &[
    ("gaussian", &["mu", "sigma2"]),
    ("gamma", &["shape", "scale"]),
    ("exponential", &["theta"]),
    ("uniform", &["a", "b"]),
    ("studentt", &["nu"]),
    ("poisson", &["rate"]),
];

fn parse_err(position: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { position, message: message.into() }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_value(text: &str, at: usize) -> Result<Param, CliError> {
    if let Some(name) = text.strip_prefix('?') {
        return if is_identifier(name) {
            Ok(Param::Unknown(name.to_string()))
        } else {
            Err(parse_err(at + 1, format!("`{name}` is not a valid unknown name")))
        };
    }
    let value = match text.split_once('/') {
        Some((p, q)) => {
            let p = parse_decimal(p).ok_or_else(|| parse_err(at, format!("malformed number `{text}`")))?;
            let q = parse_decimal(q)
                .filter(|q| !q.is_zero())
                .ok_or_else(|| parse_err(at, format!("malformed denominator in `{text}`")))?;
            p / q
        }
        None => parse_decimal(text).ok_or_else(|| parse_err(at, format!("malformed number `{text}`")))?,
    };
    Ok(Param::Fixed(value))
}

fn build(name: &str, mut values: Vec<Param>) -> hermix_core::Result<FamilySpec> {
    let mut next = || values.remove(0);
    match name {
        "gaussian" => FamilySpec::gaussian(next(), next()),
        "gamma" => FamilySpec::gamma(next(), next()),
        "exponential" => FamilySpec::exponential(next()),
        "uniform" => FamilySpec::uniform(next(), next()),
        "studentt" => FamilySpec::student_t(next()),
        "poisson" => FamilySpec::poisson(next()),
        _ => unreachable!("family table and builder disagree"),
    }
}

// Splits on `sep`, yielding each piece with its byte offset.
fn split_at(text: &str, base: usize, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == sep {
            out.push((base + start, &text[start..i]));
            start = i + 1;
        }
    }
    out.push((base + start, &text[start..]));
    out
}

fn trimmed(at: usize, s: &str) -> (usize, &str) {
    let lead = s.len() - s.trim_start().len();
    (at + lead, s.trim())
}

pub fn parse_family_list(text: &str) -> Result<Vec<FamilySpec>, CliError> {
    let mut out = Vec::new();
    let segments = split_at(text, 0, ';');
    let last = segments.len() - 1;
    for (i, (at, segment)) in segments.into_iter().enumerate() {
        let (at, segment) = trimmed(at, segment);
        if segment.is_empty() {
            // a trailing separator is tolerated
            if i == last && i > 0 {
                continue;
            }
            return Err(parse_err(at, "expected a family"));
        }
        let (name, body, body_at) = match segment.split_once(':') {
            Some((n, b)) => (n.trim(), b, at + n.len() + 1),
            None => (segment, "", at + segment.len()),
        };
        let lower = name.to_ascii_lowercase();
        let Some((family, keys)) = FAMILIES.iter().find(|(f, _)| *f == lower) else {
            return Err(CliError::UnknownFamily { name: name.to_string(), position: at });
        };
        let mut values: Vec<Option<Param>> = vec![None; keys.len()];
        if !body.trim().is_empty() {
            for (kat, pair) in split_at(body, body_at, ',') {
                let (kat, pair) = trimmed(kat, pair);
                let Some((key, value)) = pair.split_once('=') else {
                    return Err(parse_err(kat, format!("expected `key=value`, found `{pair}`")));
                };
                let key = key.trim();
                let Some(slot) = keys.iter().position(|k| *k == key) else {
                    return Err(parse_err(
                        kat,
                        format!("{family} has no parameter `{key}` (expected {})", keys.join(", ")),
                    ));
                };
                if values[slot].is_some() {
                    return Err(parse_err(kat, format!("parameter `{key}` given twice")));
                }
                let (vat, value) = trimmed(kat + pair.find('=').unwrap() + 1, value);
                values[slot] = Some(parse_value(value, vat)?);
            }
        }
        if let Some(missing) = keys.iter().zip(&values).find(|(_, v)| v.is_none()) {
            return Err(parse_err(at + segment.len(), format!("{family} is missing parameter `{}`", missing.0)));
        }
        let values: Vec<Param> = values.into_iter().map(Option::unwrap).collect();
        out.push(build(family, values).map_err(CliError::Input)?);
    }
    Ok(out)
}
