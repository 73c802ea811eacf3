//! Exact coordinate arithmetic over the rationals and prime fields.
//!
//! Algorithms in this crate are generic over [`Field`]; the runtime choice
//! between the two families is carried by [`FieldSpec`].

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which field coordinates live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// Validated prime field constructor.
    pub fn prime(p: u64) -> Result<Self> {
        PrimeField::new(p).map(|f| FieldSpec::Prime(f.modulus()))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => f.write_str("rational"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "rational" {
            return Ok(FieldSpec::Rational);
        }
        let p = s
            .strip_prefix("fp:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| {
                Error::parse(
                    0,
                    format!("unknown field `{s}`; expected `rational` or `fp:<p>`"),
                )
            })?;
        FieldSpec::prime(p)
    }
}

/// True iff the characteristic is 0 or exceeds `n`.
pub fn char_ok_for(spec: FieldSpec, n: usize) -> bool {
    match spec.characteristic() {
        0 => true,
        p => p > n as u64,
    }
}

/// A field with exact, canonically represented elements.
///
/// `Ord` on elements is a fixed total order (numeric for the rationals,
/// residue order for prime fields) used for canonical forms only.
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    /// Appends a prefix-free byte encoding; equal encodings iff equal elements.
    fn encode(&self, a: &Self::Elem, out: &mut Vec<u8>);

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_int(&BigInt::from(v))
    }

    fn characteristic(&self) -> u64 {
        self.spec().characteristic()
    }

    /// `x^e` by square-and-multiply; `0^0 = 1`.
    fn pow(&self, x: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// The field of rational numbers, backed by arbitrary-precision integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num
                .parse()
                .map_err(|_| Error::parse(0, format!("bad rational `{s}`")))?;
            let den: BigInt = den
                .parse()
                .map_err(|_| Error::parse(0, format!("bad rational `{s}`")))?;
            if den.is_zero() {
                return Err(Error::parse(0, format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(num, den))
        } else {
            let v: BigInt = s
                .parse()
                .map_err(|_| Error::parse(0, format!("bad rational `{s}`")))?;
            Ok(BigRational::from_integer(v))
        }
    }
    fn encode(&self, a: &BigRational, out: &mut Vec<u8>) {
        // BigRational is kept reduced with a positive denominator.
        out.push(match a.numer().sign() {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        });
        for part in [a.numer().abs(), a.denom().clone()] {
            let (_, bytes) = part.to_bytes_le();
            out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
            out.extend_from_slice(&bytes);
        }
    }
}

/// Element of a prime field: the least nonnegative residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Residue(u64);

impl Residue {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `F_p` for a prime `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 {
            return Err(Error::InvalidField(format!(
                "modulus {p} does not fit in 32 bits"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn residue(&self, v: u64) -> Residue {
        Residue(v % self.p)
    }
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

impl Field for PrimeField {
    type Elem = Residue;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> Residue {
        Residue(0)
    }
    fn one(&self) -> Residue {
        Residue(1 % self.p)
    }
    fn from_int(&self, v: &BigInt) -> Residue {
        let r = v.mod_floor_u64(self.p);
        Residue(r)
    }
    fn from_i64(&self, v: i64) -> Residue {
        Residue(v.rem_euclid(self.p as i64) as u64)
    }
    fn add(&self, a: &Residue, b: &Residue) -> Residue {
        let s = a.0 + b.0;
        Residue(if s >= self.p { s - self.p } else { s })
    }
    fn sub(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.p - b.0
        })
    }
    fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(a.0 * b.0 % self.p)
    }
    fn neg(&self, a: &Residue) -> Residue {
        Residue(if a.0 == 0 { 0 } else { self.p - a.0 })
    }
    fn inv(&self, a: &Residue) -> Option<Residue> {
        if a.0 == 0 {
            return None;
        }
        // Fermat: a^(p-2).
        let mut acc = 1u64;
        let mut base = a.0;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Some(Residue(acc))
    }
    fn is_zero(&self, a: &Residue) -> bool {
        a.0 == 0
    }
    fn parse_elem(&self, s: &str) -> Result<Residue> {
        let v: BigInt = s
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad residue `{}`", s.trim())))?;
        Ok(self.from_int(&v))
    }
    fn encode(&self, a: &Residue, out: &mut Vec<u8>) {
        out.extend_from_slice(&(a.0 as u32).to_le_bytes());
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u64().expect("residue below modulus")
    }
}
