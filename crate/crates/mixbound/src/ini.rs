//! Flat `key = value` files with `[section]` headers.

use std::str::FromStr;

use mixbound_core::Rational;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ini {
    pub sections: Vec<Section>,
}

fn strip_comment(line: &str) -> &str {
    match line.find(['#', ';']) {
        Some(i) => &line[..i],
        None => line,
    }
}

impl Ini {
    pub fn parse(text: &str) -> Result<Ini> {
        let mut sections: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = strip_comment(raw).trim();
            if s.is_empty() {
                continue;
            }
            if let Some(rest) = s.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| HarnessError::Config {
                    line,
                    field: s.to_string(),
                    message: "unterminated section header".into(),
                })?;
                let name = name.trim().to_string();
                if sections.iter().any(|sec| sec.name == name) {
                    return Err(HarnessError::Config {
                        line,
                        field: name,
                        message: "duplicate section".into(),
                    });
                }
                sections.push(Section {
                    name,
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = s.split_once('=').ok_or_else(|| HarnessError::Config {
                line,
                field: s.to_string(),
                message: "expected `key = value`".into(),
            })?;
            let key = key.trim().to_string();
            let sec = sections.last_mut().ok_or_else(|| HarnessError::Config {
                line,
                field: key.clone(),
                message: "entry before the first section header".into(),
            })?;
            if sec.entries.iter().any(|e| e.key == key) {
                return Err(HarnessError::Config {
                    line,
                    field: key,
                    message: "duplicate key".into(),
                });
            }
            sec.entries.push(Entry {
                key,
                value: value.trim().to_string(),
                line,
            });
        }
        Ok(Ini { sections })
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Rejects sections outside `allowed`.
    pub fn expect_sections(&self, allowed: &[&str]) -> Result<()> {
        match self.sections.iter().find(|s| !allowed.contains(&s.name.as_str())) {
            Some(s) => Err(HarnessError::Config {
                line: s.line,
                field: s.name.clone(),
                message: format!("unknown section, expected one of: {}", allowed.join(", ")),
            }),
            None => Ok(()),
        }
    }
}

/// Typed reads from one (possibly absent) section.
pub struct Reader<'a> {
    name: &'a str,
    section: Option<&'a Section>,
}

impl<'a> Reader<'a> {
    pub fn new(ini: &'a Ini, name: &'a str) -> Self {
        Reader {
            name,
            section: ini.section(name),
        }
    }

    pub fn present(&self) -> bool {
        self.section.is_some()
    }

    /// Rejects keys outside `allowed`.
    pub fn expect_keys(&self, allowed: &[&str]) -> Result<()> {
        if let Some(sec) = self.section {
            if let Some(e) = sec.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
                return Err(HarnessError::Config {
                    line: e.line,
                    field: format!("{}.{}", self.name, e.key),
                    message: format!("unknown key, expected one of: {}", allowed.join(", ")),
                });
            }
        }
        Ok(())
    }

    fn entry(&self, key: &str) -> Option<&'a Entry> {
        self.section.and_then(|s| s.entries.iter().find(|e| e.key == key))
    }

    pub fn line_of(&self, key: &str) -> usize {
        self.entry(key)
            .map(|e| e.line)
            .or(self.section.map(|s| s.line))
            .unwrap_or(0)
    }

    pub fn error(&self, key: &str, message: impl Into<String>) -> HarnessError {
        HarnessError::Config {
            line: self.line_of(key),
            field: format!("{}.{}", self.name, key),
            message: message.into(),
        }
    }

    fn missing(&self, key: &str) -> HarnessError {
        HarnessError::MissingField {
            section: self.name.to_string(),
            field: key.to_string(),
        }
    }

    pub fn raw(&self, key: &str) -> Option<&'a str> {
        self.entry(key).map(|e| e.value.as_str())
    }

    pub fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entry(key) {
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|err| self.error(key, format!("`{}`: {err}", e.value))),
            None => Ok(None),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.opt(key)?.ok_or_else(|| self.missing(key))
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.opt(key)?.unwrap_or(default))
    }

    pub fn rational(&self, key: &str) -> Result<Option<Rational>> {
        match self.entry(key) {
            Some(e) => Rational::parse(&e.value)
                .map(Some)
                .map_err(|err| self.error(key, format!("`{}`: {err}", e.value))),
            None => Ok(None),
        }
    }

    /// Whitespace- or comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entry(key) {
            Some(e) => e
                .value
                .split([',', ' ', '\t'])
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<T>().map_err(|err| self.error(key, format!("`{s}`: {err}"))))
                .collect::<Result<Vec<T>>>()
                .map(Some),
            None => Ok(None),
        }
    }

    pub fn rational_list(&self, key: &str) -> Result<Option<Vec<Rational>>> {
        match self.entry(key) {
            Some(e) => e
                .value
                .split([',', ' ', '\t'])
                .filter(|s| !s.is_empty())
                .map(|s| Rational::parse(s).map_err(|err| self.error(key, format!("`{s}`: {err}"))))
                .collect::<Result<Vec<Rational>>>()
                .map(Some),
            None => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let ini = Ini::parse("# top\n[a]\nx = 1 # one\ny=2/3\n\n[b]\nz = a b, c\n").unwrap();
        let a = Reader::new(&ini, "a");
        assert_eq!(a.get::<i32>("x").unwrap(), 1);
        assert_eq!(a.rational("y").unwrap(), Some(Rational::new(2, 3).unwrap()));
        assert_eq!(a.line_of("y"), 4);
        let b = Reader::new(&ini, "b");
        assert_eq!(b.list::<String>("z").unwrap().unwrap(), vec!["a", "b", "c"]);
        assert!(!Reader::new(&ini, "c").present());
    }

    #[test]
    fn errors_carry_line_and_field() {
        let err = Ini::parse("[a]\nx = 1\nnonsense\n").unwrap_err();
        assert!(matches!(err, HarnessError::Config { line: 3, .. }));
        let err = Ini::parse("x = 1\n").unwrap_err();
        assert!(matches!(err, HarnessError::Config { line: 1, .. }));
        let err = Ini::parse("[a]\nx = 1\nx = 2\n").unwrap_err();
        assert!(matches!(err, HarnessError::Config { line: 3, .. }));

        let ini = Ini::parse("[a]\nx = one\nnu = 1/0\n").unwrap();
        let r = Reader::new(&ini, "a");
        match r.get::<f64>("x").unwrap_err() {
            HarnessError::Config { line, field, .. } => assert_eq!((line, field.as_str()), (2, "a.x")),
            e => panic!("{e}"),
        }
        assert!(matches!(r.rational("nu"), Err(HarnessError::Config { line: 3, .. })));
        assert!(matches!(r.get::<f64>("y"), Err(HarnessError::MissingField { .. })));
        assert!(matches!(r.expect_keys(&["x"]), Err(HarnessError::Config { line: 3, .. })));
    }
}
