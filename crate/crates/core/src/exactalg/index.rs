use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::AlgError;

/// Z/2 degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self.is_odd() as u8
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.is_odd() != rhs.is_odd())
    }
}

/// `true` when `(-1)^{|a||b|}` is `-1`.
pub fn sign_flip(a: Parity, b: Parity) -> bool {
    a.is_odd() && b.is_odd()
}

/// Label of a basis vector of the natural module. `I(k)` and `J(k)` are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuperIndex {
    Zero,
    I(u32),
    IBar(u32),
    J(u32),
    JBar(u32),
}

impl SuperIndex {
    pub fn parity(self) -> Parity {
        match self {
            SuperIndex::Zero | SuperIndex::I(_) | SuperIndex::IBar(_) => Parity::Even,
            SuperIndex::J(_) | SuperIndex::JBar(_) => Parity::Odd,
        }
    }

    /// The partner under the bar involution; `Zero` is fixed.
    pub fn bar(self) -> SuperIndex {
        match self {
            SuperIndex::Zero => SuperIndex::Zero,
            SuperIndex::I(k) => SuperIndex::IBar(k),
            SuperIndex::IBar(k) => SuperIndex::I(k),
            SuperIndex::J(k) => SuperIndex::JBar(k),
            SuperIndex::JBar(k) => SuperIndex::J(k),
        }
    }

    pub fn label(self) -> String {
        self.to_string()
    }

    pub fn parse(s: &str) -> Result<SuperIndex, AlgError> {
        let bad = || AlgError::ParseIndex(s.to_string());
        if s == "0" {
            return Ok(SuperIndex::Zero);
        }
        let (body, prime) = match s.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let (body, barred) = match body.strip_prefix('~') {
            Some(b) => (b, true),
            None => (body, false),
        };
        let k: u32 = body.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Ok(match (prime, barred) {
            (false, false) => SuperIndex::I(k),
            (false, true) => SuperIndex::IBar(k),
            (true, false) => SuperIndex::J(k),
            (true, true) => SuperIndex::JBar(k),
        })
    }
}

/// Text form: `0`, `1`, `~1` (barred), `1'` (odd), `~1'` (odd barred).
impl fmt::Display for SuperIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuperIndex::Zero => write!(f, "0"),
            SuperIndex::I(k) => write!(f, "{k}"),
            SuperIndex::IBar(k) => write!(f, "~{k}"),
            SuperIndex::J(k) => write!(f, "{k}'"),
            SuperIndex::JBar(k) => write!(f, "~{k}'"),
        }
    }
}

/// The ordered index set `0 < 1..m < ~1..~m < 1'..n' < ~1'..~n'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexUniverse {
    pub m: u32,
    pub n: u32,
}

impl IndexUniverse {
    pub fn new(m: u32, n: u32) -> Self {
        IndexUniverse { m, n }
    }

    pub fn dim(&self) -> usize {
        (1 + 2 * self.m + 2 * self.n) as usize
    }

    pub fn indices(&self) -> Vec<SuperIndex> {
        let mut out = vec![SuperIndex::Zero];
        out.extend((1..=self.m).map(SuperIndex::I));
        out.extend((1..=self.m).map(SuperIndex::IBar));
        out.extend((1..=self.n).map(SuperIndex::J));
        out.extend((1..=self.n).map(SuperIndex::JBar));
        out
    }

    pub fn contains(&self, ix: SuperIndex) -> bool {
        match ix {
            SuperIndex::Zero => true,
            SuperIndex::I(k) | SuperIndex::IBar(k) => (1..=self.m).contains(&k),
            SuperIndex::J(k) | SuperIndex::JBar(k) => (1..=self.n).contains(&k),
        }
    }

    pub fn position(&self, ix: SuperIndex) -> usize {
        debug_assert!(self.contains(ix), "{ix} outside universe {self:?}");
        let (m, n) = (self.m as usize, self.n as usize);
        match ix {
            SuperIndex::Zero => 0,
            SuperIndex::I(k) => k as usize,
            SuperIndex::IBar(k) => m + k as usize,
            SuperIndex::J(k) => 2 * m + k as usize,
            SuperIndex::JBar(k) => 2 * m + n + k as usize,
        }
    }

    pub fn index_at(&self, pos: usize) -> SuperIndex {
        let (m, n) = (self.m as usize, self.n as usize);
        match pos {
            0 => SuperIndex::Zero,
            p if p <= m => SuperIndex::I(p as u32),
            p if p <= 2 * m => SuperIndex::IBar((p - m) as u32),
            p if p <= 2 * m + n => SuperIndex::J((p - 2 * m) as u32),
            p => SuperIndex::JBar((p - 2 * m - n) as u32),
        }
    }

    pub fn parity_at(&self, pos: usize) -> Parity {
        self.index_at(pos).parity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_matches_positions() {
        let u = IndexUniverse::new(2, 2);
        let ixs = u.indices();
        assert_eq!(ixs.len(), u.dim());
        for (pos, ix) in ixs.iter().enumerate() {
            assert_eq!(u.position(*ix), pos);
            assert_eq!(u.index_at(pos), *ix);
        }
        let mut sorted = ixs.clone();
        sorted.sort();
        assert_eq!(sorted, ixs);
    }

    #[test]
    fn parities() {
        assert_eq!(SuperIndex::Zero.parity(), Parity::Even);
        assert_eq!(SuperIndex::IBar(1).parity(), Parity::Even);
        assert_eq!(SuperIndex::JBar(2).parity(), Parity::Odd);
        assert_eq!(Parity::Odd + Parity::Odd, Parity::Even);
    }

    #[test]
    fn labels_parse_back() {
        for ix in IndexUniverse::new(3, 2).indices() {
            assert_eq!(SuperIndex::parse(&ix.label()).unwrap(), ix);
        }
        assert!(SuperIndex::parse("~0").is_err());
    }
}
