//! Run configuration: optional `key = value` file overridden by flags, plus
//! parsers for the sweep-list syntaxes.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::CliError;

/// Parsed `key = value` configuration file (`#` starts a comment).
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &str) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::parameter(format!("cannot read config {path}: {e}")))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::parameter(format!("config line {}: expected `key = value`", lineno + 1))
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Resolve a setting: explicit flag wins, then the config file, then default.
pub fn resolve<T: FromStr + Clone>(
    flag: &Option<T>,
    cfg: &ConfigFile,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    if let Some(v) = flag {
        return Ok(v.clone());
    }
    match cfg.get(key) {
        Some(s) => s
            .parse()
            .map_err(|_| CliError::parameter(format!("config key {key}: cannot parse `{s}`"))),
        None => Ok(default),
    }
}

/// Same as [`resolve`] but with no default: the setting is required.
pub fn resolve_required<T: FromStr + Clone>(
    flag: &Option<T>,
    cfg: &ConfigFile,
    key: &str,
) -> Result<T, CliError> {
    if let Some(v) = flag {
        return Ok(v.clone());
    }
    match cfg.get(key) {
        Some(s) => s
            .parse()
            .map_err(|_| CliError::parameter(format!("config key {key}: cannot parse `{s}`"))),
        None => Err(CliError::parameter(format!("missing required setting `{key}`"))),
    }
}

/// Parse a sweep list `start:stop:logN` (geometric) or `start:stop:linN`
/// (arithmetic), endpoints included.
pub fn parse_sizes(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::parameter(format!(
            "size list `{spec}`: expected start:stop:logN or start:stop:linN"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::parameter(format!("size list `{spec}`: bad start")))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::parameter(format!("size list `{spec}`: bad stop")))?;
    let (log, count_str) = if let Some(n) = parts[2].strip_prefix("log") {
        (true, n)
    } else if let Some(n) = parts[2].strip_prefix("lin") {
        (false, n)
    } else {
        return Err(CliError::parameter(format!(
            "size list `{spec}`: spacing must be logN or linN"
        )));
    };
    let count: usize = count_str
        .parse()
        .map_err(|_| CliError::parameter(format!("size list `{spec}`: bad count")))?;
    if count < 1 {
        return Err(CliError::parameter("size list: count must be >= 1".into()));
    }
    if start <= 0.0 || stop <= 0.0 {
        return Err(CliError::parameter("size list: endpoints must be positive".into()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let n = count as f64;
    let out = (0..count)
        .map(|i| {
            let t = i as f64 / (n - 1.0);
            if log {
                start * (stop / start).powf(t)
            } else {
                start + (stop - start) * t
            }
        })
        .collect();
    Ok(out)
}

/// Parse a comma-separated float list, e.g. `0.5,2`.
pub fn parse_float_list(spec: &str) -> Result<Vec<f64>, CliError> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::parameter(format!("cannot parse `{s}` as a number")))
        })
        .collect()
}

/// Parse a center `x,y`.
pub fn parse_center(spec: &str) -> Result<(f64, f64), CliError> {
    let v = parse_float_list(spec)?;
    if v.len() != 2 {
        return Err(CliError::parameter(format!("center `{spec}`: expected x,y")));
    }
    Ok((v[0], v[1]))
}
