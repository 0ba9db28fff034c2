//! Run configuration in `key=value` form.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::homs::Calibration;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub genus: usize,
    pub level: usize,
    /// Largest weight block (rows or columns) an elimination may touch.
    pub max_block: usize,
    /// Largest bounding chain, in terms.
    pub max_terms: usize,
    pub eps: Option<i64>,
    pub delta: Option<i64>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            genus: 2,
            level: 3,
            max_block: 200_000,
            max_terms: 1 << 22,
            eps: None,
            delta: None,
            seed: 0,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line,
        column: key.len() + 2,
        message: format!("bad value `{value}` for `{key}`"),
    })
}

fn parse_sign(key: &str, value: &str, line: usize) -> Result<i64> {
    match parse_num::<i64>(key, value, line)? {
        s @ (1 | -1) => Ok(s),
        _ => Err(Error::Parse {
            line,
            column: key.len() + 2,
            message: format!("`{key}` must be 1 or -1"),
        }),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            let Some((key, value)) = s.split_once('=') else {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: "expected key=value".to_string(),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "genus" => c.genus = parse_num(key, value, line)?,
                "k" => c.level = parse_num(key, value, line)?,
                "max_block" => c.max_block = parse_num(key, value, line)?,
                "max_terms" => c.max_terms = parse_num(key, value, line)?,
                "eps" => c.eps = Some(parse_sign(key, value, line)?),
                "delta" => c.delta = Some(parse_sign(key, value, line)?),
                "seed" => c.seed = parse_num(key, value, line)?,
                _ => {
                    return Err(Error::Parse {
                        line,
                        column: 1,
                        message: format!("unknown key `{key}`"),
                    })
                }
            }
        }
        if c.max_block == 0 || c.max_terms == 0 {
            return Err(Error::Config("budgets must be positive".to_string()));
        }
        Ok(c)
    }

    /// Reads `path`, or the defaults if it does not exist.
    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => RunConfig::parse(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(RunConfig::default()),
            Err(e) => Err(e.into()),
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "genus={}", self.genus);
        let _ = writeln!(s, "k={}", self.level);
        let _ = writeln!(s, "max_block={}", self.max_block);
        let _ = writeln!(s, "max_terms={}", self.max_terms);
        if let Some(e) = self.eps {
            let _ = writeln!(s, "eps={e}");
        }
        if let Some(d) = self.delta {
            let _ = writeln!(s, "delta={d}");
        }
        let _ = writeln!(s, "seed={}", self.seed);
        s
    }

    pub fn calibration(&self) -> Result<Calibration> {
        match (self.eps, self.delta) {
            (Some(eps), Some(delta)) => Ok(Calibration { eps, delta }),
            _ => Err(Error::Calibration(
                "signs missing from configuration; run `calibrate` first".to_string(),
            )),
        }
    }
}
