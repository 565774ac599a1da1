//! Flat `key = value` text files. `#` starts a comment; blank lines are
//! ignored; a key may appear once.

use anyhow::{anyhow, bail, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

impl Entry {
    pub fn f64(&self) -> Result<f64> {
        self.value
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.error(format!("`{}` is not a finite number", self.value)))
    }

    pub fn u64(&self) -> Result<u64> {
        self.value
            .parse::<u64>()
            .map_err(|_| self.error(format!("`{}` is not a non-negative integer", self.value)))
    }

    pub fn usize(&self) -> Result<usize> {
        Ok(self.u64()? as usize)
    }

    /// Comma-separated numbers. A single value is a one-element list.
    pub fn f64_list(&self) -> Result<Vec<f64>> {
        self.value
            .split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| self.error(format!("`{s}` is not a finite number")))
            })
            .collect()
    }

    pub fn is_list(&self) -> bool {
        self.value.contains(',')
    }

    pub fn error(&self, msg: impl std::fmt::Display) -> anyhow::Error {
        anyhow!("line {}: {}: {msg}", self.line, self.key)
    }
}

pub fn parse(text: &str) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            bail!("line {line}: expected `key = value`, got `{body}`");
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            bail!("line {line}: expected `key = value`, got `{body}`");
        }
        if let Some(prev) = out.iter().find(|e| e.key == key) {
            bail!("line {line}: {key}: already set on line {}", prev.line);
        }
        out.push(Entry {
            line,
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks() {
        let e = parse("# header\n\n a = 1 # trailing\nb=2,3\n").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].line, e[0].key.as_str(), e[0].value.as_str()), (3, "a", "1"));
        assert_eq!(e[1].f64_list().unwrap(), vec![2.0, 3.0]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse("a = 1\nnonsense\n").unwrap_err().to_string();
        assert!(err.starts_with("line 2:"), "{err}");
        let err = parse("a = 1\na = 2\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("line 1"), "{err}");
        let e = &parse("x = abc").unwrap()[0];
        assert!(e.f64().unwrap_err().to_string().contains("line 1: x"));
        assert!(parse("x = -1").unwrap()[0].u64().is_err());
        assert!(parse("x = 1,,2").unwrap()[0].f64_list().is_err());
    }
}
