use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring for cochains and cohomology: F_p, ℤ, or ℤ_m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RingSpec {
    PrimeField(u64),
    Integers,
    IntegersMod(u64),
}

impl RingSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            RingSpec::PrimeField(p) => {
                if !is_prime(*p) {
                    return Err(Error::InvalidInput(format!("{p} is not prime")));
                }
            }
            RingSpec::IntegersMod(m) => {
                if *m < 2 {
                    return Err(Error::InvalidInput("modulus must be at least 2".into()));
                }
            }
            RingSpec::Integers => {}
        }
        Ok(())
    }

    /// Parses the CLI ring syntax: `f2 | fp:<p> | z | zmod:<m>`.
    pub fn parse(text: &str) -> Result<RingSpec> {
        let spec = match text {
            "f2" => RingSpec::PrimeField(2),
            "z" => RingSpec::Integers,
            other => {
                if let Some(p) = other.strip_prefix("fp:") {
                    RingSpec::PrimeField(p.parse().map_err(|_| {
                        Error::InvalidInput(format!("bad prime in ring spec '{other}'"))
                    })?)
                } else if let Some(m) = other.strip_prefix("zmod:") {
                    RingSpec::IntegersMod(m.parse().map_err(|_| {
                        Error::InvalidInput(format!("bad modulus in ring spec '{other}'"))
                    })?)
                } else {
                    return Err(Error::InvalidInput(format!("unknown ring '{other}'")));
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Canonical representative of an element. Residues live in [0, modulus).
    pub fn normalize(&self, v: i64) -> i64 {
        match self {
            RingSpec::Integers => v,
            RingSpec::PrimeField(p) => v.rem_euclid(*p as i64),
            RingSpec::IntegersMod(m) => v.rem_euclid(*m as i64),
        }
    }

    pub fn add(&self, a: i64, b: i64) -> i64 {
        self.normalize(a.checked_add(b).expect("coefficient overflow"))
    }

    pub fn neg(&self, a: i64) -> i64 {
        self.normalize(-a)
    }

    pub fn is_zero(&self, a: i64) -> bool {
        self.normalize(a) == 0
    }

    /// a + sign * b with sign ∈ {+1, −1}.
    pub fn add_signed(&self, a: i64, b: i64, sign: i8) -> i64 {
        if sign >= 0 {
            self.add(a, b)
        } else {
            self.add(a, self.neg(b))
        }
    }
}

impl std::fmt::Display for RingSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingSpec::PrimeField(2) => write!(f, "f2"),
            RingSpec::PrimeField(p) => write!(f, "fp:{p}"),
            RingSpec::Integers => write!(f, "z"),
            RingSpec::IntegersMod(m) => write!(f, "zmod:{m}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut f = 3;
    while f * f <= p {
        if p % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rings() {
        assert_eq!(RingSpec::parse("f2").unwrap(), RingSpec::PrimeField(2));
        assert_eq!(RingSpec::parse("fp:7").unwrap(), RingSpec::PrimeField(7));
        assert_eq!(RingSpec::parse("z").unwrap(), RingSpec::Integers);
        assert_eq!(RingSpec::parse("zmod:6").unwrap(), RingSpec::IntegersMod(6));
        assert!(RingSpec::parse("fp:6").is_err());
        assert!(RingSpec::parse("zmod:1").is_err());
        assert!(RingSpec::parse("q").is_err());
    }

    #[test]
    fn residue_arithmetic() {
        let r = RingSpec::PrimeField(5);
        assert_eq!(r.normalize(-1), 4);
        assert_eq!(r.add(3, 4), 2);
        assert_eq!(r.neg(2), 3);
        assert!(RingSpec::Integers.normalize(-7) == -7);
    }
}
