//! Minimal `key = value` text with `[section]` headers.
//!
//! Keys before the first header belong to an unnamed top section. A header
//! may repeat; each occurrence opens a new section. `#` starts a comment
//! line. Values are raw strings with surrounding whitespace and an optional
//! pair of double quotes removed.

use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: u64,
    used: bool,
}

#[derive(Clone, Debug)]
pub struct Section {
    pub name: String,
    pub line: u64,
    entries: Vec<Entry>,
}

pub fn parse(origin: &str, text: &str) -> Result<Vec<Section>> {
    let mut out = vec![Section {
        name: String::new(),
        line: 1,
        entries: Vec::new(),
    }];
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if let Some(name) = l.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(origin, line, "unclosed section header"))?
                .trim();
            if name.is_empty() {
                return Err(Error::parse(origin, line, "empty section name"));
            }
            out.push(Section {
                name: name.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (k, v) = l
            .split_once('=')
            .ok_or_else(|| Error::parse(origin, line, "expected `key = value`"))?;
        let key = k.trim();
        if key.is_empty() {
            return Err(Error::parse(origin, line, "empty key"));
        }
        let v = v.trim();
        let value = v
            .strip_prefix('"')
            .and_then(|s| s.strip_suffix('"'))
            .unwrap_or(v);
        let sec = out.last_mut().expect("top section");
        if sec.entries.iter().any(|e| e.key == key) {
            return Err(Error::parse(origin, line, format!("duplicate key `{key}`")));
        }
        sec.entries.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
            used: false,
        });
    }
    Ok(out)
}

impl Section {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Raw value of `key`, marking it consumed.
    pub fn raw(&mut self, key: &str) -> Option<(String, u64)> {
        let e = self.entries.iter_mut().find(|e| e.key == key)?;
        e.used = true;
        Some((e.value.clone(), e.line))
    }

    pub fn get<T: FromStr>(&mut self, origin: &str, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::parse(origin, line, format!("bad value `{v}` for `{key}`"))),
        }
    }

    pub fn require<T: FromStr>(&mut self, origin: &str, key: &str) -> Result<T> {
        let line = self.line;
        let what = self.label();
        self.get(origin, key)?
            .ok_or_else(|| Error::parse(origin, line, format!("{what} needs `{key}`")))
    }

    /// Errors on the first key nobody asked for.
    pub fn finish(&self, origin: &str) -> Result<()> {
        match self.entries.iter().find(|e| !e.used) {
            None => Ok(()),
            Some(e) => Err(Error::parse(
                origin,
                e.line,
                format!("unknown key `{}` in {}", e.key, self.label()),
            )),
        }
    }

    fn label(&self) -> String {
        if self.name.is_empty() {
            "the top section".to_string()
        } else {
            format!("[{}]", self.name)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_keys() {
        let text = "name = \"x y\"\n# c\n[a]\nk = 1\n[a]\nk = 2\nj=3\n";
        let mut s = parse("f", text).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].raw("name").unwrap().0, "x y");
        assert_eq!(s[1].get::<u32>("f", "k").unwrap(), Some(1));
        assert_eq!(s[2].require::<u32>("f", "k").unwrap(), 2);
        let e = s[2].finish("f").unwrap_err();
        assert_eq!(e.to_string(), "f:7: unknown key `j` in [a]");
        assert!(s[2].require::<u32>("f", "zz").is_err());
        assert!(s[2].get::<u32>("f", "j").is_ok());
        assert!(s[2].finish("f").is_ok());
    }

    #[test]
    fn malformed() {
        assert!(parse("f", "[a\n").is_err());
        assert!(parse("f", "novalue\n").is_err());
        assert!(parse("f", "a=1\na=2\n").is_err());
        assert!(parse("f", "[]\n").is_err());
    }
}
