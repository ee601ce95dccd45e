use std::path::Path;

use hermix_core::scalar::parse_decimal;
use hermix_core::{Error, Rational};

use crate::error::CliError;

/// Parses sample text: one decimal per line. Blank lines and lines starting
/// with `#` are ignored, and the first data line may be the header `value`.
pub fn parse_sample(text: &str) -> Result<Vec<Rational>, CliError> {
    let mut out = Vec::new();
    let mut header_allowed = true;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if header_allowed && line.eq_ignore_ascii_case("value") {
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        let value =
            parse_decimal(line).ok_or_else(|| CliError::MalformedLine { line: i + 1, content: line.to_string() })?;
        out.push(value);
    }
    if out.is_empty() {
        return Err(CliError::Input(Error::EmptySample));
    }
    Ok(out)
}

pub fn read_sample(path: &Path) -> Result<Vec<Rational>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_sample(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hermix_core::scalar::{int, rat};

    #[test]
    fn documented_examples() {
        assert_eq!(parse_sample("1.5\n2.5\n").unwrap(), vec![rat(3, 2), rat(5, 2)]);
        assert_eq!(parse_sample("value\n# note\n3\n").unwrap(), vec![int(3)]);
        assert!(matches!(parse_sample("abc\n"), Err(CliError::MalformedLine { line: 1, .. })));
    }

    #[test]
    fn header_only_once_and_first() {
        assert!(matches!(parse_sample("1\nvalue\n"), Err(CliError::MalformedLine { line: 2, .. })));
        assert!(matches!(parse_sample("# only\n\n"), Err(CliError::Input(Error::EmptySample))));
        assert_eq!(parse_sample("\r\n-0.25\r\n").unwrap(), vec![rat(-1, 4)]);
    }
}
