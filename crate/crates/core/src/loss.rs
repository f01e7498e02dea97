//! Loss functions on `[0,1]` used by online games and the online dimension.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossFunction {
    Identity,
    /// `l_eps(x) = max(x - eps, 0)`
    Truncated(Rat),
    /// `L_eps(x) = 1` iff `x >= eps`
    Threshold(Rat),
}

impl LossFunction {
    pub fn truncated(eps: Rat) -> Result<Self> {
        check_eps(eps)?;
        Ok(LossFunction::Truncated(eps))
    }

    pub fn threshold(eps: Rat) -> Result<Self> {
        check_eps(eps)?;
        Ok(LossFunction::Threshold(eps))
    }

    /// Evaluates without a range check; callers pass distances in `[0,1]`.
    #[inline]
    pub fn apply(&self, x: Rat) -> Rat {
        match *self {
            LossFunction::Identity => x,
            LossFunction::Truncated(e) => {
                if x > e {
                    x - e
                } else {
                    Rat::ZERO
                }
            }
            LossFunction::Threshold(e) => {
                if x >= e {
                    Rat::ONE
                } else {
                    Rat::ZERO
                }
            }
        }
    }

    pub fn eval(&self, x: Rat) -> Result<Rat> {
        if !x.in_unit_interval() {
            return Err(Error::OutOfRange(format!("loss argument {x} outside [0,1]")));
        }
        Ok(self.apply(x))
    }
}

fn check_eps(eps: Rat) -> Result<()> {
    if eps <= Rat::ZERO || eps > Rat::ONE {
        return Err(Error::OutOfRange(format!("loss parameter {eps} outside (0,1]")));
    }
    Ok(())
}

impl fmt::Display for LossFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossFunction::Identity => write!(f, "id"),
            LossFunction::Truncated(e) => write!(f, "l:{e}"),
            LossFunction::Threshold(e) => write!(f, "L:{e}"),
        }
    }
}

impl FromStr for LossFunction {
    type Err = Error;

    /// `id`, `l:<eps>` (truncated linear) or `L:<eps>` (threshold).
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "id" => Ok(LossFunction::Identity),
            Some(("l", e)) => LossFunction::truncated(e.parse()?),
            Some(("L", e)) => LossFunction::threshold(e.parse()?),
            _ => Err(Error::Parse(format!("unknown loss {s:?}; expected id, l:eps or L:eps"))),
        }
    }
}

impl Serialize for LossFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LossFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::r;

    #[test]
    fn loss_examples() {
        let l = LossFunction::truncated(r(1, 10)).unwrap();
        assert_eq!(l.eval(r(3, 10)).unwrap(), r(1, 5));
        let big_l = LossFunction::threshold(r(1, 10)).unwrap();
        assert_eq!(big_l.eval(r(1, 20)).unwrap(), Rat::ZERO);
        assert_eq!(big_l.eval(r(1, 10)).unwrap(), Rat::ONE);
        assert_eq!(LossFunction::Identity.eval(r(7, 10)).unwrap(), r(7, 10));
        assert!(LossFunction::Identity.eval(r(3, 2)).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["id", "l:1/10", "L:1/4"] {
            assert_eq!(s.parse::<LossFunction>().unwrap().to_string(), s);
        }
        assert!("l:0/1".parse::<LossFunction>().is_err());
        assert!("q:1/2".parse::<LossFunction>().is_err());
    }
}
