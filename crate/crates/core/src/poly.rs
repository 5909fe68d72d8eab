//! Dense univariate polynomials with ascending coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Default upper bound on the modulus for exhaustive root scans.
pub const DEFAULT_SCAN_BOUND: u64 = 1_000_000;

/// `coeffs[i]` is the coefficient of `x^i`. The zero polynomial has no
/// coefficients; otherwise the last coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    /// Builds a polynomial, trimming trailing zeros.
    ///
    /// Panics if a coefficient belongs to a different field.
    pub fn new(field: FieldSpec, mut coeffs: Vec<Scalar>) -> Self {
        assert!(
            coeffs.iter().all(|c| c.field() == field),
            "polynomial coefficient from a different field"
        );
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Polynomial {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Polynomial::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::new(c.field(), vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: Scalar, k: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Polynomial::new(field, coeffs)
    }

    pub fn x(field: FieldSpec) -> Self {
        Polynomial::monomial(field.one(), 1)
    }

    pub fn from_i64s(field: FieldSpec, coeffs: &[i64]) -> Self {
        Polynomial::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Monic polynomial `prod (x - r)`.
    pub fn from_roots(field: FieldSpec, roots: &[Scalar]) -> Self {
        roots.iter().fold(Polynomial::one(field), |acc, r| {
            &acc * &Polynomial::new(field, vec![-r, field.one()])
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    /// Coefficient vector zero-padded (or truncated) to `len` entries.
    pub fn to_vector(&self, len: usize) -> Vec<Scalar> {
        (0..len).map(|i| self.coeff(i)).collect()
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * at) + c)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        Polynomial::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &self.field.from_i64(i as i64) * c)
            .collect();
        Polynomial::new(self.field, coeffs)
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.field.check_same(&divisor.field)?;
        let dd = divisor.degree().ok_or(Error::DivisionByZeroPoly)?;
        let lc_inv = divisor.coeffs[dd]
            .inv()
            .expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * dc);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((
            Polynomial::new(self.field, quot),
            Polynomial::new(self.field, rem),
        ))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Quotient of a division that must be exact.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial> {
        let (q, r) = self.divmod(divisor)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!(
                "({self}) / ({divisor}) leaves {r}"
            )));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Polynomial) -> Result<bool> {
        if self.is_zero() {
            return Ok(other.is_zero());
        }
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic gcd; `gcd(0, p) = monic(p)` and `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial> {
        self.field.check_same(&other.field)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn squarefreeness(&self) -> Result<Squarefreeness> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let d = self.derivative();
        if d.is_zero() && self.degree() > Some(0) {
            return Ok(Squarefreeness::ZeroDerivative);
        }
        let g = self.gcd(&d)?;
        if g.degree() == Some(0) {
            Ok(Squarefreeness::Squarefree)
        } else {
            Ok(Squarefreeness::RepeatedFactor(g))
        }
    }

    /// `true` iff `gcd(p, p')` is constant.
    pub fn is_squarefree(&self) -> Result<bool> {
        Ok(self.squarefreeness()? == Squarefreeness::Squarefree)
    }

    pub(crate) fn require_squarefree(&self, what: &str) -> Result<()> {
        match self.squarefreeness()? {
            Squarefreeness::Squarefree => Ok(()),
            Squarefreeness::ZeroDerivative => Err(Error::NotSquarefree(format!(
                "{what} = {self} has zero derivative over {}",
                self.field
            ))),
            Squarefreeness::RepeatedFactor(g) => Err(Error::NotSquarefree(format!(
                "{what} = {self} shares the factor {g} with its derivative"
            ))),
        }
    }

    /// Distinct roots in the base field, with [`DEFAULT_SCAN_BOUND`].
    pub fn roots(&self) -> Result<RootSet> {
        find_roots(self, DEFAULT_SCAN_BOUND)
    }

    fn add_sub(&self, rhs: &Polynomial, negate: bool) -> Polynomial {
        assert_eq!(self.field, rhs.field, "polynomials over different fields");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let (a, b) = (self.coeff(i), rhs.coeff(i));
                if negate {
                    a - b
                } else {
                    a + b
                }
            })
            .collect();
        Polynomial::new(self.field, coeffs)
    }
}

/// Outcome of the `gcd(p, p')` test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Squarefreeness {
    Squarefree,
    /// The nonconstant `gcd(p, p')`.
    RepeatedFactor(Polynomial),
    /// `p' = 0` in characteristic `p`, so `p` is a `p`-th power.
    ZeroDerivative,
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.add_sub(rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.add_sub(rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.field, rhs.field, "polynomials over different fields");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(self.field, out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut text = c.to_string();
            let negative = text.starts_with('-');
            if negative {
                text.remove(0);
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let unit = text == "1";
            match i {
                0 => write!(f, "{text}")?,
                _ => {
                    if !unit {
                        write!(f, "{text}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Distinct roots of `poly` lying in its coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    poly: Polynomial,
    roots: Vec<Scalar>,
    complete: bool,
}

impl RootSet {
    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn roots(&self) -> &[Scalar] {
        &self.roots
    }

    /// `true` iff the polynomial splits into distinct linear factors.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn field(&self) -> FieldSpec {
        self.poly.field()
    }

    pub(crate) fn require_complete_for(&self, poly: &Polynomial) -> Result<()> {
        if &self.poly != poly {
            return Err(Error::RootSetMismatch);
        }
        if !self.complete {
            return Err(Error::IncompleteRoots {
                found: self.roots.len(),
                degree: self.poly.degree().unwrap_or(0),
            });
        }
        Ok(())
    }
}

/// Roots of `p` in its field. Prime fields are scanned exhaustively, which
/// is refused when the modulus exceeds `scan_bound`; over `Q` only the
/// rational-root-theorem candidates are tried.
pub fn find_roots(p: &Polynomial, scan_bound: u64) -> Result<RootSet> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial)?;
    let field = p.field();
    let roots = match field.modulus() {
        Some(modulus) => {
            if modulus > scan_bound {
                return Err(Error::FieldTooLarge {
                    modulus,
                    bound: scan_bound,
                });
            }
            field
                .elements()
                .expect("prime field")
                .filter(|x| p.eval(x).is_zero())
                .collect()
        }
        None => rational_roots(p),
    };
    let complete = roots.len() == degree;
    Ok(RootSet {
        poly: p.clone(),
        roots,
        complete,
    })
}

fn rational_roots(p: &Polynomial) -> Vec<Scalar> {
    let denom_lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| {
        acc.lcm(c.rational().expect("rational coefficient").denom())
    });
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| {
            let q = c.rational().expect("rational coefficient");
            q.numer() * (&denom_lcm / q.denom())
        })
        .collect();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut out = Vec::new();
    if low > 0 {
        out.push(p.field().zero());
    }
    let trimmed = &ints[low..];
    let constant = trimmed[0].abs();
    let lead = trimmed[trimmed.len() - 1].abs();
    let field = p.field();
    let mut candidates = Vec::new();
    if trimmed.len() > 1 {
        for a in divisors(&constant) {
            for b in divisors(&lead) {
                for sign in [1i64, -1] {
                    let num = &a * sign;
                    let c = Scalar::from_ratio(field, &num, &b).expect("nonzero divisor");
                    if !candidates.contains(&c) {
                        candidates.push(c);
                    }
                }
            }
        }
    }
    out.extend(candidates.into_iter().filter(|c| p.eval(c).is_zero()));
    out.sort_by(|a, b| {
        a.rational()
            .expect("rational")
            .cmp(b.rational().expect("rational"))
    });
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            let other = n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
