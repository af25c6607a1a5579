//! Flat `key = value` configuration files.
//!
//! One pair per line, `#` starts a comment, blank lines are ignored. Keys
//! are the long CLI flag names without dashes, e.g. `t-final = 10`;
//! underscores are accepted in place of hyphens.

use std::collections::BTreeMap;

pub type ConfigMap = BTreeMap<String, String>;

pub fn parse_config(text: &str) -> Result<ConfigMap, String> {
    let mut map = ConfigMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected 'key = value'", i + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("line {}: empty key", i + 1));
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(format!("line {}: duplicate key '{key}'", i + 1));
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_normalises_keys() {
        let m = parse_config("# study\nscheme = gs2d  # inline\n\nt_final=2.5\n").unwrap();
        assert_eq!(m.get("scheme").map(String::as_str), Some("gs2d"));
        assert_eq!(m.get("t-final").map(String::as_str), Some("2.5"));
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_config("scheme gs2d").is_err());
        assert!(parse_config("a = 1\na = 2").is_err());
        assert!(parse_config(" = 3").is_err());
    }
}
