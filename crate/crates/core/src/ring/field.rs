//! Coefficient fields: exact rationals (characteristic 0) and prime fields.
//!
//! A [`Field`] is a lightweight descriptor passed into every arithmetic
//! helper; a [`Coeff`] is one element. Mixing elements of different
//! characteristics is a bug and panics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Field descriptor: characteristic 0 means exact rationals, a prime `p`
/// means integers modulo `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    characteristic: u64,
}

/// One field element. `Mod` values are always reduced to `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coeff {
    Rat(BigRational),
    Mod(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Self {
        Field { characteristic: 0 }
    }

    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 || is_prime(characteristic) {
            Ok(Field { characteristic })
        } else {
            Err(Error::InvalidSpec(format!(
                "field characteristic must be 0 or a prime, got {characteristic}"
            )))
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn zero(&self) -> Coeff {
        match self.characteristic {
            0 => Coeff::Rat(BigRational::zero()),
            _ => Coeff::Mod(0),
        }
    }

    pub fn one(&self) -> Coeff {
        match self.characteristic {
            0 => Coeff::Rat(BigRational::one()),
            _ => Coeff::Mod(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        match self.characteristic {
            0 => Coeff::Rat(BigRational::from_integer(BigInt::from(v))),
            p => {
                let r = v.rem_euclid(p as i64) as u64;
                Coeff::Mod(r % p)
            }
        }
    }

    /// Parses `"a"` or `"a/b"` with optional sign. In characteristic `p` the
    /// denominator is inverted mod `p`.
    pub fn parse(&self, s: &str) -> Result<Coeff> {
        let r = BigRational::from_str(s.trim())
            .map_err(|e| Error::InvalidSpec(format!("bad coefficient {s:?}: {e}")))?;
        match self.characteristic {
            0 => Ok(Coeff::Rat(r)),
            p => {
                let pb = BigInt::from(p);
                let modp = |x: &BigInt| -> u64 {
                    let m = ((x % &pb) + &pb) % &pb;
                    u64::try_from(m).expect("residue fits u64")
                };
                let num = modp(r.numer());
                let den = modp(r.denom());
                if den == 0 {
                    return Err(Error::InvalidSpec(format!(
                        "coefficient {s:?} has denominator divisible by {p}"
                    )));
                }
                Ok(self.mul(&Coeff::Mod(num), &self.inv(&Coeff::Mod(den))?))
            }
        }
    }

    fn md(&self) -> u64 {
        debug_assert!(self.characteristic > 0);
        self.characteristic
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rat(r) => r.is_zero(),
            Coeff::Mod(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (a, b) {
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (Coeff::Mod(x), Coeff::Mod(y)) => {
                Coeff::Mod(((*x as u128 + *y as u128) % self.md() as u128) as u64)
            }
            _ => panic!("mixed-field arithmetic"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match a {
            Coeff::Rat(x) => Coeff::Rat(-x),
            Coeff::Mod(0) => Coeff::Mod(0),
            Coeff::Mod(x) => Coeff::Mod(self.md() - x),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (a, b) {
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (Coeff::Mod(x), Coeff::Mod(y)) => {
                Coeff::Mod(((*x as u128 * *y as u128) % self.md() as u128) as u64)
            }
            _ => panic!("mixed-field arithmetic"),
        }
    }

    pub fn inv(&self, a: &Coeff) -> Result<Coeff> {
        if self.is_zero(a) {
            return Err(Error::Internal("inverse of zero".into()));
        }
        match a {
            Coeff::Rat(x) => Ok(Coeff::Rat(x.recip())),
            Coeff::Mod(x) => {
                // Extended Euclid on (x, p).
                let (mut r0, mut r1) = (self.md() as i128, *x as i128);
                let (mut s0, mut s1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                debug_assert_eq!(r0, 1, "char is prime so every nonzero is a unit");
                Ok(Coeff::Mod(s0.rem_euclid(self.md() as i128) as u64))
            }
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn is_one(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rat(r) => r.is_one(),
            Coeff::Mod(v) => *v == 1,
        }
    }

    /// Renders an element the way it appears in polynomial output.
    pub fn render(&self, a: &Coeff) -> String {
        match a {
            Coeff::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Coeff::Mod(v) => v.to_string(),
        }
    }

    /// True for rationals with negative sign; prime-field elements have no
    /// canonical sign and always report false.
    pub fn is_negative(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rat(r) => r.is_negative(),
            Coeff::Mod(_) => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "QQ"),
            p => write!(f, "GF({p})"),
        }
    }
}
