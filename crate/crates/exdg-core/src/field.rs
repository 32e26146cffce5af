//! Ground fields and exact scalar arithmetic.
//!
//! Two kinds of coefficients are supported: arbitrary-precision rationals
//! and prime fields F_p. All arithmetic is exact; mixing scalars from
//! different fields is a programming error and panics.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use std::fmt;

/// A ground field: the rationals or F_p for a prime p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    /// Construct a prime field, validating primality.
    pub fn prime(p: u32) -> FieldSpec {
        assert!(is_prime(p), "field characteristic {p} is not prime");
        FieldSpec::Prime(p)
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Fp { p, v: 0 },
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(BigRational::one()),
            FieldSpec::Prime(p) => Scalar::Fp { p, v: 1 },
        }
    }

    /// The image of an integer in this field.
    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let m = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { p, v: m }
            }
        }
    }

    /// Parse a scalar literal: an integer like `-3` or a fraction like `2/5`.
    pub fn parse(self, s: &str) -> Result<Scalar, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let n: i64 = num
            .parse()
            .map_err(|_| format!("bad scalar literal {s:?}"))?;
        let mut out = self.from_i64(n);
        if let Some(d) = den {
            let d: i64 = d
                .parse()
                .map_err(|_| format!("bad scalar literal {s:?}"))?;
            if d == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            out = out.div(&self.from_i64(d));
        }
        Ok(out)
    }
}

/// A value in a ground field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u32, v: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Rationals,
            Scalar::Fp { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v }, Scalar::Fp { p: q, v: w }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp { p: *p, v: (v + w) % (*p as u64) }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: (*p as u64 - v) % (*p as u64) },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v }, Scalar::Fp { p: q, v: w }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp { p: *p, v: (v * w) % (*p as u64) }
            }
            _ => panic!("field mismatch"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(a) => {
                assert!(!a.is_zero(), "division by zero");
                Scalar::Q(a.recip())
            }
            Scalar::Fp { p, v } => {
                assert!(*v != 0, "division by zero");
                // Fermat: v^(p-2) mod p.
                let (mut base, mut exp, m) = (*v % *p as u64, *p as u64 - 2, *p as u64);
                let mut acc = 1u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Scalar::Fp { p: *p, v: acc }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else if r.is_negative() {
                    write!(f, "-{}/{}", r.numer().abs(), r.denom())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

fn is_prime(n: u32) -> bool {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let f = FieldSpec::Rationals;
        let third = f.from_i64(1).div(&f.from_i64(3));
        let sum = third.add(&third).add(&third);
        assert!(sum.is_one());
    }

    #[test]
    fn prime_field_inverse() {
        let f = FieldSpec::prime(7);
        for v in 1..7 {
            let x = f.from_i64(v);
            assert!(x.mul(&x.inv()).is_one());
        }
    }

    #[test]
    fn parse_literals() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.parse("-3").unwrap(), q.from_i64(-3));
        assert_eq!(q.parse("2/5").unwrap(), q.from_i64(2).div(&q.from_i64(5)));
        let f5 = FieldSpec::prime(5);
        assert_eq!(f5.parse("7").unwrap(), f5.from_i64(2));
        assert!(q.parse("x").is_err());
    }

    #[test]
    #[should_panic(expected = "not prime")]
    fn composite_characteristic_rejected() {
        FieldSpec::prime(6);
    }
}
