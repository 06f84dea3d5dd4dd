//! Exact coefficient arithmetic: Gaussian rationals optionally extended by a
//! single transcendental `θ`, stored as reduced ratios of polynomials.
//!
//! Values that never touch `i` or `θ` collapse to plain rationals, so the
//! common case costs a pair of `BigRational`s and nothing more.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn zero() -> Self {
        Gaussian {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Gaussian {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Gaussian {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Gaussian {
            re: BigRational::from_integer(n.into()),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Gaussian {
            re: BigRational::new(num.into(), den.into()),
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Gaussian {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Gaussian {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Gaussian {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    pub fn neg(&self) -> Self {
        Gaussian {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Multiplicative inverse via the conjugate; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Gaussian {
            re: &self.re / &norm,
            im: -(&self.im / &norm),
        })
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im_part = |f: &mut fmt::Formatter<'_>, im: &BigRational, lead: bool| {
            let mag = im.abs();
            let sign = if im.is_negative() {
                if lead {
                    "-"
                } else {
                    " - "
                }
            } else if lead {
                ""
            } else {
                " + "
            };
            if mag.is_one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{mag}*i")
            }
        };
        if self.re.is_zero() {
            im_part(f, &self.im, true)
        } else {
            write!(f, "{}", self.re)?;
            im_part(f, &self.im, false)
        }
    }
}

/// Dense polynomial in `θ` over the Gaussian rationals; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<Gaussian>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Gaussian::one()])
    }

    pub fn constant(c: Gaussian) -> Self {
        let mut p = Poly(vec![c]);
        p.trim();
        p
    }

    /// The monomial `θ`.
    pub fn theta() -> Self {
        Poly(vec![Gaussian::zero(), Gaussian::one()])
    }

    pub fn from_coeffs(coeffs: Vec<Gaussian>) -> Self {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Gaussian::is_zero) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Gaussian> {
        self.0.last()
    }

    pub fn coeff(&self, k: usize) -> Gaussian {
        self.0.get(k).cloned().unwrap_or_else(Gaussian::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&rhs.coeff(k))).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let coeffs = (0..n).map(|k| self.coeff(k).sub(&rhs.coeff(k))).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        Poly(self.0.iter().map(Gaussian::neg).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let mut coeffs = vec![Gaussian::zero(); self.0.len() + rhs.0.len() - 1];
        for (j, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.0.iter().enumerate() {
                coeffs[j + k] = coeffs[j + k].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        Poly::from_coeffs(self.0.iter().map(|a| a.mul(c)).collect())
    }

    /// Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "polynomial division by zero");
        let dd = div.degree().unwrap();
        let lead_inv = div.leading().unwrap().inv().unwrap();
        let mut rem = self.clone();
        let mut quot = vec![Gaussian::zero(); self.0.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap().mul(&lead_inv);
            let shift = rd - dd;
            quot[shift] = factor.clone();
            // rem -= factor * θ^shift * div
            let mut coeffs = rem.0;
            for (k, b) in div.0.iter().enumerate() {
                coeffs[shift + k] = coeffs[shift + k].sub(&factor.mul(b));
            }
            rem = Poly::from_coeffs(coeffs);
        }
        (Poly::from_coeffs(quot), rem)
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.into_monic()
    }

    pub fn into_monic(self) -> Self {
        match self.leading() {
            None => self,
            Some(l) if l.is_one() => self,
            Some(l) => {
                let inv = l.inv().unwrap();
                self.scale(&inv)
            }
        }
    }

    fn fmt_term(f: &mut fmt::Formatter<'_>, c: &Gaussian, k: usize, lead: bool) -> fmt::Result {
        // Sign is hoisted out of pure-real/pure-imaginary coefficients;
        // mixed ones are parenthesized instead.
        let (sign_neg, body) = if c.im.is_zero() {
            (c.re.is_negative(), {
                let mag = c.re.abs();
                if mag.is_one() && k > 0 {
                    String::new()
                } else {
                    format!("{mag}")
                }
            })
        } else if c.re.is_zero() {
            (c.im.is_negative(), {
                let mag = c.im.abs();
                if mag.is_one() {
                    "i".to_string()
                } else {
                    format!("{mag}*i")
                }
            })
        } else if k == 0 {
            (false, format!("{c}"))
        } else {
            (false, format!("({c})"))
        };
        match (sign_neg, lead) {
            (true, true) => write!(f, "-")?,
            (true, false) => write!(f, " - ")?,
            (false, true) => {}
            (false, false) => write!(f, " + ")?,
        }
        match k {
            0 => write!(f, "{}", if body.is_empty() { "1" } else { &body }),
            _ => {
                if !body.is_empty() {
                    write!(f, "{body}*")?;
                }
                if k == 1 {
                    write!(f, "θ")
                } else {
                    write!(f, "θ^{k}")
                }
            }
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut lead = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            Poly::fmt_term(f, c, k, lead)?;
            lead = false;
        }
        Ok(())
    }
}

/// An element of the field `Q(i)(θ)` in canonical form: numerator and
/// denominator coprime, denominator monic, zero stored as `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut s = Scalar { num, den };
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree().is_some_and(|d| d > 0) {
            self.num = self.num.div_rem(&g).0;
            self.den = self.den.div_rem(&g).0;
        }
        let lead = self.den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.inv().unwrap();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn i() -> Self {
        Scalar {
            num: Poly::constant(Gaussian::i()),
            den: Poly::one(),
        }
    }

    pub fn theta() -> Self {
        Scalar {
            num: Poly::theta(),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            num: Poly::constant(Gaussian::from_int(n)),
            den: Poly::one(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar {
            num: Poly::constant(Gaussian::from_ratio(num, den)),
            den: Poly::one(),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar {
            num: Poly::constant(Gaussian {
                re: r,
                im: BigRational::zero(),
            }),
            den: Poly::one(),
        }
    }

    pub fn from_gaussian(g: Gaussian) -> Self {
        Scalar {
            num: Poly::constant(g),
            den: Poly::one(),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The rational value, when the scalar is a plain rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.den.is_one() || self.num.degree().is_some_and(|d| d > 0) {
            return None;
        }
        let c = self.num.coeff(0);
        if c.im.is_zero() {
            Some(c.re)
        } else {
            None
        }
    }

    pub fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Scalar::new(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.checked_inv().map(|inv| self * &inv)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i64) -> Self {
        if exp == 0 {
            return Scalar::one();
        }
        let base = if exp < 0 {
            self.checked_inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut acc = Scalar::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let num = self
            .num
            .mul(&rhs.den)
            .add(&rhs.num.mul(&self.den));
        Scalar::new(num, self.den.mul(&rhs.den))
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let num = self
            .num
            .mul(&rhs.den)
            .sub(&rhs.num.mul(&self.den));
        Scalar::new(num, self.den.mul(&rhs.den))
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("scalar division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Scalar {
    /// Splits off a printable sign and body when the scalar is a single
    /// monomial with a pure-real or pure-imaginary coefficient; such factors
    /// render without parentheses.
    pub(crate) fn simple_factor(&self) -> Option<(bool, String)> {
        if !self.den.is_one() {
            return None;
        }
        let mut nonzero = self.num.0.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (k, c) = nonzero.next()?;
        if nonzero.next().is_some() {
            return None;
        }
        let (neg, coeff_body) = if c.im.is_zero() {
            let mag = c.re.abs();
            (
                c.re.is_negative(),
                if mag.is_one() && k > 0 {
                    String::new()
                } else {
                    format!("{mag}")
                },
            )
        } else if c.re.is_zero() {
            let mag = c.im.abs();
            (
                c.im.is_negative(),
                if mag.is_one() {
                    "i".to_string()
                } else {
                    format!("{mag}*i")
                },
            )
        } else {
            return None;
        };
        let body = match k {
            0 => {
                if coeff_body.is_empty() {
                    "1".to_string()
                } else {
                    coeff_body
                }
            }
            1 if coeff_body.is_empty() => "θ".to_string(),
            1 => format!("{coeff_body}*θ"),
            _ if coeff_body.is_empty() => format!("θ^{k}"),
            _ => format!("{coeff_body}*θ^{k}"),
        };
        Some((neg, body))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((neg, body)) = self.simple_factor() {
            return write!(f, "{}{body}", if neg { "-" } else { "" });
        }
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
