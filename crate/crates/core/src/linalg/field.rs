use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::{Error, Result};

/// Coefficient field: the rationals or a prime field `F_p` with `p < 2^32`.
///
/// Field elements are carried around as [`Rational`]s. Over `F_p` the
/// canonical representative is the integer in `[0, p)`; [`FieldTag::reduce`]
/// produces it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub enum FieldTag {
    Rational,
    Prime(u64),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum FieldRepr {
    Rational,
    Prime { p: u64 },
}

impl TryFrom<FieldRepr> for FieldTag {
    type Error = Error;
    fn try_from(r: FieldRepr) -> Result<Self> {
        match r {
            FieldRepr::Rational => Ok(FieldTag::Rational),
            FieldRepr::Prime { p } => FieldTag::prime(p),
        }
    }
}

impl From<FieldTag> for FieldRepr {
    fn from(f: FieldTag) -> Self {
        match f {
            FieldTag::Rational => FieldRepr::Rational,
            FieldTag::Prime(p) => FieldRepr::Prime { p },
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldTag {
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        Ok(FieldTag::Prime(p))
    }

    /// Re-checks the modulus; `FieldTag::Prime` can be built directly.
    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldTag::Rational => Ok(()),
            FieldTag::Prime(p) => FieldTag::prime(p).map(|_| ()),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            FieldTag::Rational => 0,
            FieldTag::Prime(p) => p,
        }
    }

    /// Residue of `x` modulo `p`; fails when the denominator is divisible by `p`.
    pub fn residue(p: u64, x: &Rational) -> Result<u64> {
        let pb = BigInt::from(p);
        let num = x.numer().mod_floor(&pb).to_u64().expect("residue fits");
        let den = x.denom().mod_floor(&pb).to_u64().expect("residue fits");
        if den == 0 {
            return Err(Error::NotRepresentable { value: x.to_string(), p });
        }
        Ok(num * inv_mod(den, p) % p)
    }

    /// Canonical representative of `x` in this field.
    pub fn reduce(&self, x: &Rational) -> Result<Rational> {
        match *self {
            FieldTag::Rational => Ok(x.clone()),
            FieldTag::Prime(p) => Ok(Rational::from_integer(FieldTag::residue(p, x)?.into())),
        }
    }

    pub fn from_i64(&self, x: i64) -> Rational {
        self.reduce(&Rational::from_integer(x.into())).expect("integers are representable")
    }

    pub fn add(&self, a: &Rational, b: &Rational) -> Rational {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        self.normalize(a - b)
    }

    pub fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        self.normalize(a * b)
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: &Rational) -> Option<Rational> {
        if a.is_zero() {
            return None;
        }
        match *self {
            FieldTag::Rational => Some(a.recip()),
            FieldTag::Prime(p) => {
                let r = FieldTag::residue(p, a).ok()?;
                (r != 0).then(|| Rational::from_integer(inv_mod(r, p).into()))
            }
        }
    }

    pub fn pow(&self, a: &Rational, e: i64) -> Option<Rational> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = Rational::one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Some(acc)
    }

    pub fn is_zero(&self, a: &Rational) -> bool {
        self.normalize(a.clone()).is_zero()
    }

    pub fn is_one(&self, a: &Rational) -> bool {
        self.normalize(a.clone()).is_one()
    }

    /// Number of units, `None` for the rationals.
    pub fn unit_count(&self) -> Option<u64> {
        match *self {
            FieldTag::Rational => None,
            FieldTag::Prime(p) => Some(p - 1),
        }
    }

    // Values of products and sums of already-representable values stay representable.
    fn normalize(&self, x: Rational) -> Rational {
        match *self {
            FieldTag::Rational => x,
            FieldTag::Prime(_) => self.reduce(&x).expect("closed under ring operations"),
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and below 2^32 so products fit in u64.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Parses `"p/q"`, `"-p/q"` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Lowest-terms text form: `"p/q"`, or just `"p"` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else if x.is_negative() {
        format!("-{}/{}", x.numer().abs(), x.denom())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// JSON scalar: accepts `"p/q"` strings and integers, always writes strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(pub Rational);

impl From<Rational> for Scalar {
    fn from(x: Rational) -> Self {
        Scalar(x)
    }
}

impl From<i64> for Scalar {
    fn from(x: i64) -> Self {
        Scalar(Rational::from_integer(x.into()))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Scalar::from(i)),
            Raw::Text(t) => parse_rational(&t).map(Scalar).map_err(serde::de::Error::custom),
        }
    }
}
