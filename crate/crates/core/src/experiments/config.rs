//! Flat `key = value` configuration with list and range values.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Raw configuration: key to unparsed value text, in key order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config { line: i + 1, message: format!("expected key = value, got {line:?}") })?;
            let k = k.trim();
            let v = v.trim();
            if k.is_empty() || v.is_empty() {
                return Err(Error::Config { line: i + 1, message: "empty key or value".into() });
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Config { line: i + 1, message: format!("duplicate key {k}") });
            }
        }
        Ok(Config { entries })
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Text form that parses back to the same configuration.
    pub fn echo(&self) -> String {
        self.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

fn bad(key: &str, v: &str, why: &str) -> Error {
    Error::Grid(format!("{key} = {v}: {why}"))
}

/// Parse a numeric axis: a comma list whose items are numbers,
/// `lin:start:stop:n`, `log:start:stop:n`, or `range:start:stop` (inclusive
/// integer range).
pub fn parse_axis(key: &str, v: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for item in v.split(',') {
        values.extend(parse_item(key, v, item.trim())?);
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(bad(key, v, "non-finite value"));
    }
    Ok(values)
}

fn parse_item(key: &str, v: &str, item: &str) -> Result<Vec<f64>> {
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(key, v, "not a number"));
    if let Some(rest) = item.strip_prefix("lin:").or_else(|| item.strip_prefix("log:")) {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(key, v, "expected start:stop:count"));
        }
        let (a, b) = (num(parts[0])?, num(parts[1])?);
        let n: usize = parts[2].trim().parse().map_err(|_| bad(key, v, "bad count"))?;
        if n == 0 {
            return Err(bad(key, v, "empty range"));
        }
        let log = item.starts_with("log:");
        if log && (a <= 0.0 || b <= 0.0) {
            return Err(bad(key, v, "log range needs positive bounds"));
        }
        Ok((0..n)
            .map(|i| {
                let f = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                if log {
                    (a.ln() + f * (b.ln() - a.ln())).exp()
                } else {
                    a + f * (b - a)
                }
            })
            .collect())
    } else if let Some(rest) = item.strip_prefix("range:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(bad(key, v, "expected start:stop"));
        }
        let a: i64 = parts[0].trim().parse().map_err(|_| bad(key, v, "bad integer"))?;
        let b: i64 = parts[1].trim().parse().map_err(|_| bad(key, v, "bad integer"))?;
        if b < a {
            return Err(bad(key, v, "empty range"));
        }
        Ok((a..=b).map(|x| x as f64).collect())
    } else {
        Ok(vec![num(item)?])
    }
}

/// Typed view of a config restricted to a subcommand's key set.
pub struct Params<'a> {
    pub subcommand: &'a str,
    cfg: &'a Config,
    defaults: &'a [(&'a str, &'a str)],
}

impl<'a> Params<'a> {
    pub fn new(subcommand: &'a str, cfg: &'a Config, defaults: &'a [(&'a str, &'a str)]) -> Result<Params<'a>> {
        for k in cfg.keys() {
            if !defaults.iter().any(|(d, _)| *d == k) {
                return Err(Error::UnknownKey { key: k.to_string(), subcommand: subcommand.to_string() });
            }
        }
        Ok(Params { subcommand, cfg, defaults })
    }

    fn raw(&self, key: &str) -> &str {
        self.cfg.get(key).unwrap_or_else(|| {
            self.defaults.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).unwrap_or_else(|| panic!("no default for {key}"))
        })
    }

    /// Every key with its effective value, in default-table order.
    pub fn resolved(&self) -> Config {
        let mut c = Config::default();
        for (k, _) in self.defaults {
            c.set(k, self.raw(k));
        }
        c
    }

    pub fn axis(&self, key: &str) -> Result<Vec<f64>> {
        parse_axis(key, self.raw(key))
    }

    pub fn int_axis(&self, key: &str) -> Result<Vec<usize>> {
        self.axis(key)?
            .into_iter()
            .map(|x| if x >= 0.0 && x.fract() == 0.0 { Ok(x as usize) } else { Err(bad(key, self.raw(key), "expected non-negative integers")) })
            .collect()
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let v = self.axis(key)?;
        if v.len() != 1 {
            return Err(bad(key, self.raw(key), "expected a single value"));
        }
        Ok(v[0])
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let v = self.int_axis(key)?;
        if v.len() != 1 {
            return Err(bad(key, self.raw(key), "expected a single value"));
        }
        Ok(v[0])
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        self.raw(key).trim().parse().map_err(|_| bad(key, self.raw(key), "expected an unsigned integer"))
    }

    pub fn text(&self, key: &str) -> &str {
        self.raw(key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines_and_comments() {
        let c = Config::parse("# sweep\nchain_length = 2,3  # two\n\ngate_time_ns=log:10:100:3\n").unwrap();
        assert_eq!(c.get("chain_length"), Some("2,3"));
        assert_eq!(Config::parse(&c.echo()).unwrap(), c);
        assert!(Config::parse("novalue").is_err());
        assert!(Config::parse("a = 1\na = 2").is_err());
    }

    #[test]
    fn axes() {
        assert_eq!(parse_axis("k", "2,3,4").unwrap(), vec![2.0, 3.0, 4.0]);
        assert_eq!(parse_axis("k", "range:2:4").unwrap(), vec![2.0, 3.0, 4.0]);
        let l = parse_axis("k", "log:10:1000:3").unwrap();
        assert!((l[1] - 100.0).abs() < 1e-9);
        assert_eq!(parse_axis("k", "lin:0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_axis("k", "lin:0:1:0").is_err());
        assert!(parse_axis("k", "range:3:2").is_err());
        assert!(parse_axis("k", "x").is_err());
        assert_eq!(parse_axis("k", "0,lin:1:2:2").unwrap(), vec![0.0, 1.0, 2.0]);
        assert!(parse_axis("k", "1,,2").is_err());
    }
}
