//! Key–value text files (`key = value` per line, `#` comments).
//!
//! Values are integers, quoted strings, bare words, or bracketed lists of
//! integers or strings. The content is normalised to TOML and parsed with the
//! `toml` crate.

use toml::{Table, Value};

use crate::error::{Error, Result};

fn is_bare_word(v: &str) -> bool {
    let mut chars = v.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        && v != "true"
        && v != "false"
}

/// Parse a key–value file into a table.
pub fn parse_kv(text: &str) -> Result<Table> {
    let mut normalised = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::parse(format!(
                "line {}: expected 'key = value'",
                lineno + 1
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(Error::parse(format!("line {}: empty key", lineno + 1)));
        }
        let value = if is_bare_word(value) {
            format!("\"{value}\"")
        } else {
            value.to_string()
        };
        normalised.push_str(&format!("{key} = {value}\n"));
    }
    normalised
        .parse::<Table>()
        .map_err(|e| Error::parse(e.message().to_string()))
}

/// Typed accessors over a parsed table.
pub struct Fields<'a> {
    table: &'a Table,
    what: &'a str,
}

impl<'a> Fields<'a> {
    pub fn new(table: &'a Table, what: &'a str) -> Self {
        Fields { table, what }
    }

    fn missing(&self, key: &str) -> Error {
        Error::validation(format!("{}: missing key '{key}'", self.what))
    }

    fn wrong(&self, key: &str, expected: &str) -> Error {
        Error::validation(format!("{}: key '{key}' must be {expected}", self.what))
    }

    pub fn has(&self, key: &str) -> bool {
        self.table.contains_key(key)
    }

    pub fn int(&self, key: &str) -> Result<i64> {
        match self.table.get(key) {
            None => Err(self.missing(key)),
            Some(Value::Integer(i)) => Ok(*i),
            Some(_) => Err(self.wrong(key, "an integer")),
        }
    }

    pub fn uint(&self, key: &str) -> Result<u32> {
        let v = self.int(key)?;
        u32::try_from(v).map_err(|_| self.wrong(key, "a nonnegative integer"))
    }

    pub fn string(&self, key: &str) -> Result<String> {
        match self.table.get(key) {
            None => Err(self.missing(key)),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(Value::Integer(i)) => Ok(i.to_string()),
            Some(_) => Err(self.wrong(key, "a string")),
        }
    }

    pub fn opt_string(&self, key: &str) -> Result<Option<String>> {
        if self.has(key) {
            self.string(key).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn int_list(&self, key: &str) -> Result<Vec<i64>> {
        match self.table.get(key) {
            None => Err(self.missing(key)),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| {
                    v.as_integer()
                        .ok_or_else(|| self.wrong(key, "a list of integers"))
                })
                .collect(),
            Some(_) => Err(self.wrong(key, "a list of integers")),
        }
    }

    pub fn string_list(&self, key: &str) -> Result<Vec<String>> {
        match self.table.get(key) {
            None => Err(self.missing(key)),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    Value::Integer(i) => Ok(i.to_string()),
                    _ => Err(self.wrong(key, "a list of strings")),
                })
                .collect(),
            Some(_) => Err(self.wrong(key, "a list of strings")),
        }
    }

    /// Reject keys outside `allowed`.
    pub fn only(&self, allowed: &[&str]) -> Result<()> {
        for k in self.table.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::validation(format!(
                    "{}: unexpected key '{k}'",
                    self.what
                )));
            }
        }
        Ok(())
    }
}
