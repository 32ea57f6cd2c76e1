use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Intersection array `{b_0,…,b_{d−1}; c_1,…,c_d}`.
///
/// Parsing only checks the syntax and that both lists have the same length;
/// the structural invariants are reported by [`IntersectionArray::shape_violations`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct IntersectionArray {
    b: Vec<u64>,
    c: Vec<u64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseArrayError {
    #[error("intersection array must look like {{b0,b1,...;c1,c2,...}}: {0}")]
    Syntax(String),
    #[error("b and c lists have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("intersection array must have diameter at least 1")]
    Empty,
}

impl IntersectionArray {
    /// Builds an array from its two lists without validating invariants.
    pub fn from_lists(b: Vec<u64>, c: Vec<u64>) -> Result<Self, ParseArrayError> {
        if b.len() != c.len() {
            return Err(ParseArrayError::LengthMismatch(b.len(), c.len()));
        }
        if b.is_empty() {
            return Err(ParseArrayError::Empty);
        }
        Ok(IntersectionArray { b, c })
    }

    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    pub fn valency(&self) -> u64 {
        self.b[0]
    }

    /// `b_i` with `b_d = 0`.
    pub fn b(&self, i: usize) -> u64 {
        self.b.get(i).copied().unwrap_or(0)
    }

    /// `c_i` with `c_0 = 0`.
    pub fn c(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    /// `a_i = b_0 - b_i - c_i`, negative when the array is malformed.
    pub fn a(&self, i: usize) -> i64 {
        self.b[0] as i64 - self.b(i) as i64 - self.c(i) as i64
    }

    pub fn b_list(&self) -> &[u64] {
        &self.b
    }

    pub fn c_list(&self) -> &[u64] {
        &self.c
    }

    /// Tuple used for lexicographic ordering of tables: `(b_0,…,b_{d−1}, c_2,…,c_d)`.
    pub fn sort_key(&self) -> Vec<u64> {
        self.b.iter().chain(self.c.iter().skip(1)).copied().collect()
    }

    /// Every violated structural invariant, in a fixed order.
    pub fn shape_violations(&self) -> Vec<String> {
        let d = self.diameter();
        let mut out = Vec::new();
        if d < 2 {
            out.push(format!("diameter {d} < 2"));
        }
        if self.b.iter().chain(&self.c).any(|&x| x == 0) {
            out.push("entries must be positive".into());
        }
        if self.c[0] != 1 {
            out.push(format!("c_1 = {} != 1", self.c[0]));
        }
        for i in 1..d {
            if self.b[i] > self.b[i - 1] {
                out.push(format!("b_{} = {} > b_{} = {}", i, self.b[i], i - 1, self.b[i - 1]));
            }
            if self.c[i] < self.c[i - 1] {
                out.push(format!("c_{} = {} < c_{} = {}", i + 1, self.c[i], i, self.c[i - 1]));
            }
        }
        for i in 1..=d {
            if self.c(i) > self.b[0] {
                out.push(format!("c_{} = {} > b_0 = {}", i, self.c(i), self.b[0]));
            }
        }
        for i in 0..=d {
            let a = self.a(i);
            if a < 0 {
                out.push(format!("a_{i} = {a} < 0"));
            }
        }
        out
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{{{};{}}}", join(&self.b), join(&self.c))
    }
}

impl FromStr for IntersectionArray {
    type Err = ParseArrayError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| ParseArrayError::Syntax(format!("missing braces in {t:?}")))?;
        let (bs, cs) = inner.split_once(';').ok_or_else(|| ParseArrayError::Syntax(format!("missing ';' in {t:?}")))?;
        let parse = |part: &str| -> Result<Vec<u64>, ParseArrayError> {
            part.split(',')
                .map(|x| {
                    x.trim().parse::<u64>().map_err(|_| ParseArrayError::Syntax(format!("bad entry {:?}", x.trim())))
                })
                .collect()
        };
        Self::from_lists(parse(bs)?, parse(cs)?)
    }
}

impl Serialize for IntersectionArray {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntersectionArray {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
