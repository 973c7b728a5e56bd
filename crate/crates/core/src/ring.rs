use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Ground ring for all algebras and complexes: a prime field or the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoefficientRing {
    PrimeField(u32),
    Integers,
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl CoefficientRing {
    pub fn prime_field(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(CoefficientRing::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            CoefficientRing::PrimeField(p) => *p,
            CoefficientRing::Integers => 0,
        }
    }

    pub fn prime(&self) -> Option<u32> {
        match self {
            CoefficientRing::PrimeField(p) => Some(*p),
            CoefficientRing::Integers => None,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoefficientRing::PrimeField(_))
    }

    /// Canonical representative: residues in `0..p` over a field.
    pub fn reduce(&self, x: &BigInt) -> BigInt {
        match self {
            CoefficientRing::PrimeField(p) => x.mod_floor(&BigInt::from(*p)),
            CoefficientRing::Integers => x.clone(),
        }
    }

    pub fn reduce_i64(&self, x: i64) -> i64 {
        match self {
            CoefficientRing::PrimeField(p) => x.rem_euclid(*p as i64),
            CoefficientRing::Integers => x,
        }
    }

    pub fn is_zero(&self, x: &BigInt) -> bool {
        self.reduce(x).is_zero()
    }

    /// Symmetric residue used when printing field elements (`p - 1` shows as `-1`).
    pub fn display_coefficient(&self, x: &BigInt) -> String {
        match self {
            CoefficientRing::PrimeField(p) => {
                let r = self.reduce(x).to_i64().unwrap_or(0);
                let p = *p as i64;
                if r > p / 2 && p > 2 {
                    (r - p).to_string()
                } else {
                    r.to_string()
                }
            }
            CoefficientRing::Integers => x.to_string(),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::PrimeField(p) => write!(f, "F{p}"),
            CoefficientRing::Integers => write!(f, "Z"),
        }
    }
}

impl FromStr for CoefficientRing {
    type Err = Error;

    /// Accepts `Z`, `F<p>` and `Z/<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Z" {
            return Ok(CoefficientRing::Integers);
        }
        let digits = s
            .strip_prefix('F')
            .or_else(|| s.strip_prefix("Z/"))
            .ok_or_else(|| Error::Precondition(format!("unknown coefficient ring `{s}`")))?;
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::Precondition(format!("unknown coefficient ring `{s}`")))?;
        CoefficientRing::prime_field(p)
    }
}

impl Serialize for CoefficientRing {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CoefficientRing {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_checked() {
        assert!(CoefficientRing::prime_field(2).is_ok());
        assert!(CoefficientRing::prime_field(7919).is_ok());
        assert_eq!(CoefficientRing::prime_field(1), Err(Error::NotPrime(1)));
        assert_eq!(CoefficientRing::prime_field(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn parse_and_display() {
        for s in ["Z", "F2", "F5"] {
            let r: CoefficientRing = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("Z/3".parse::<CoefficientRing>().unwrap(), CoefficientRing::PrimeField(3));
        assert!("F4".parse::<CoefficientRing>().is_err());
        assert!("Q".parse::<CoefficientRing>().is_err());
    }

    #[test]
    fn reduction() {
        let f3 = CoefficientRing::PrimeField(3);
        assert_eq!(f3.reduce(&BigInt::from(-1)), BigInt::from(2));
        assert_eq!(f3.display_coefficient(&BigInt::from(2)), "-1");
        assert!(f3.is_zero(&BigInt::from(6)));
    }
}
