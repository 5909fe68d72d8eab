//! φ-quasi-cyclic codes over prime fields.
//!
//! For monic squarefree `phi1` (degree `k`) and `phi2` (degree `l`) with
//! `phi3 = gcd(phi1, phi2)` of degree `m`, the code generated by
//! `(a, b)` in `F_q[x]/(phi1) x F_q[x]/(phi2)` is the image of
//!
//! ```text
//! f  |->  (f a mod phi1, f b mod phi2),   f in F_q[x]/(phi1 phi2 / phi3)
//! ```
//!
//! Its kernel is generated by `h = phi1 phi2 / (phi3 g)` where
//! `g = gcd(a, phi1/phi3) gcd(b, phi2/phi3) gcd(a, b, phi3)`, and the code
//! dimension is `deg h`.

use std::collections::HashSet;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::ideal::{build_ideal_matrix, RotationMatrix};
use crate::matrix::{DenseMatrix, EchelonBasis};
use crate::poly::Polynomial;

/// Default cap on the number of messages an enumeration may visit.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1 << 20;

/// `F[x]/(modulus)` with elements stored as canonical remainders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueRing {
    modulus: Polynomial,
}

impl ResidueRing {
    pub fn new(modulus: Polynomial) -> Result<Self> {
        match modulus.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => return Err(Error::DegreeZero),
            Some(_) if !modulus.is_monic() => return Err(Error::NotMonic),
            Some(_) => {}
        }
        Ok(ResidueRing { modulus })
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.modulus
    }

    pub fn field(&self) -> FieldSpec {
        self.modulus.field()
    }

    /// Dimension over the base field, `deg modulus`.
    pub fn dimension(&self) -> usize {
        self.modulus.degree().expect("nonzero modulus")
    }

    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        p.rem(&self.modulus)
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        self.field().check_same(&a.field())?;
        self.field().check_same(&b.field())?;
        self.reduce(&(a * b))
    }

    pub fn is_canonical(&self, p: &Polynomial) -> bool {
        p.degree().is_none_or(|d| d < self.dimension())
    }
}

/// `(a_0, ..., a_{k-1} | b_0, ..., b_{l-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Codeword {
    pub left: Vec<Scalar>,
    pub right: Vec<Scalar>,
}

impl Codeword {
    pub fn new(left: Vec<Scalar>, right: Vec<Scalar>) -> Self {
        Codeword { left, right }
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn concat(&self) -> Vec<Scalar> {
        self.left.iter().chain(&self.right).cloned().collect()
    }

    pub fn weight(&self) -> usize {
        self.left
            .iter()
            .chain(&self.right)
            .filter(|c| !c.is_zero())
            .count()
    }

    pub fn is_zero(&self) -> bool {
        self.weight() == 0
    }
}

#[derive(Clone, Debug)]
pub struct QuasiCyclicCode {
    field: FieldSpec,
    phi1: Polynomial,
    phi2: Polynomial,
    phi3: Polynomial,
    a_bar: Polynomial,
    b_bar: Polynomial,
    g_bar: Polynomial,
    h_bar: Polynomial,
    k: usize,
    l: usize,
    m: usize,
    t: usize,
    dim: usize,
    d_cor: usize,
    ring1: ResidueRing,
    ring2: ResidueRing,
    messages: ResidueRing,
    rot1: RotationMatrix,
    rot2: RotationMatrix,
}

fn validate_modulus(p: &Polynomial, what: &str) -> Result<RotationMatrix> {
    let rot = RotationMatrix::new(p.clone())?;
    p.require_squarefree(what)?;
    Ok(rot)
}

fn degree_of(p: &Polynomial) -> usize {
    p.degree().expect("nonzero polynomial")
}

/// Builds the code generated by `(a_bar, b_bar)`.
pub fn build_code(
    field: FieldSpec,
    phi1: Polynomial,
    phi2: Polynomial,
    a_bar: Polynomial,
    b_bar: Polynomial,
) -> Result<QuasiCyclicCode> {
    if !field.is_prime_field() {
        return Err(Error::NotPrimeField(field.to_string()));
    }
    for p in [&phi1, &phi2, &a_bar, &b_bar] {
        field.check_same(&p.field())?;
    }
    let rot1 = validate_modulus(&phi1, "phi1")?;
    let rot2 = validate_modulus(&phi2, "phi2")?;
    let (k, l) = (rot1.degree(), rot2.degree());
    for (what, p, bound) in [("a", &a_bar, k), ("b", &b_bar, l)] {
        if let Some(degree) = p.degree().filter(|&d| d >= bound) {
            return Err(Error::DegreeTooLarge {
                what,
                degree,
                bound,
            });
        }
    }

    let phi3 = phi1.gcd(&phi2)?;
    let m = degree_of(&phi3);
    let g_bar = &(&a_bar.gcd(&phi1.exact_div(&phi3)?)? * &b_bar.gcd(&phi2.exact_div(&phi3)?)?)
        * &a_bar.gcd(&b_bar)?.gcd(&phi3)?;
    let lcm = (&phi1 * &phi2).exact_div(&phi3)?;
    let h_bar = lcm.exact_div(&g_bar)?;

    let cor_numer = &(&a_bar.gcd(&phi1)? * &b_bar.gcd(&phi2)?) * &phi3;
    let d_cor = degree_of(&cor_numer.exact_div(&(&a_bar * &b_bar).gcd(&phi3)?)?);

    Ok(QuasiCyclicCode {
        field,
        dim: degree_of(&h_bar),
        ring1: ResidueRing::new(phi1.clone())?,
        ring2: ResidueRing::new(phi2.clone())?,
        messages: ResidueRing::new(lcm)?,
        phi1,
        phi2,
        phi3,
        a_bar,
        b_bar,
        g_bar,
        h_bar,
        k,
        l,
        m,
        t: k.gcd(&l),
        d_cor,
        rot1,
        rot2,
    })
}

impl QuasiCyclicCode {
    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn phi1(&self) -> &Polynomial {
        &self.phi1
    }
    pub fn phi2(&self) -> &Polynomial {
        &self.phi2
    }
    pub fn phi3(&self) -> &Polynomial {
        &self.phi3
    }
    pub fn a_bar(&self) -> &Polynomial {
        &self.a_bar
    }
    pub fn b_bar(&self) -> &Polynomial {
        &self.b_bar
    }
    pub fn g_bar(&self) -> &Polynomial {
        &self.g_bar
    }
    pub fn h_bar(&self) -> &Polynomial {
        &self.h_bar
    }
    /// `deg phi1`.
    pub fn k(&self) -> usize {
        self.k
    }
    /// `deg phi2`.
    pub fn l(&self) -> usize {
        self.l
    }
    /// `deg phi3`.
    pub fn m(&self) -> usize {
        self.m
    }
    /// `gcd(k, l)`.
    pub fn t(&self) -> usize {
        self.t
    }
    /// Code dimension, `deg h_bar`.
    pub fn dim(&self) -> usize {
        self.dim
    }
    /// Degree of `gcd(a, phi1) gcd(b, phi2) phi3 / gcd(a b, phi3)`.
    pub fn d_cor(&self) -> usize {
        self.d_cor
    }
    /// Codeword length `k + l`.
    pub fn length(&self) -> usize {
        self.k + self.l
    }
    /// Message length `k + l - m`, the dimension of the message ring.
    pub fn message_len(&self) -> usize {
        self.k + self.l - self.m
    }
    /// `F_q[x]/(phi1 phi2 / phi3)`.
    pub fn message_ring(&self) -> &ResidueRing {
        &self.messages
    }
    pub fn left_ring(&self) -> &ResidueRing {
        &self.ring1
    }
    pub fn right_ring(&self) -> &ResidueRing {
        &self.ring2
    }
    /// Rows of the block generator matrix: `lcm(k, l) = kl/t`.
    pub fn generator_rows(&self) -> usize {
        self.k * self.l / self.t
    }
    /// `min{kl/t, k + l - d_cor}`.
    pub fn window_rows(&self) -> usize {
        self.generator_rows().min(self.length() - self.d_cor)
    }

    /// `deg h_bar = k + l - d_cor`.
    pub fn degree_identity_holds(&self) -> bool {
        self.dim + self.d_cor == self.length()
    }

    /// The image of an arbitrary polynomial (no degree restriction).
    pub fn image(&self, f: &Polynomial) -> Result<Codeword> {
        self.field.check_same(&f.field())?;
        let left = self.ring1.mul(f, &self.a_bar)?;
        let right = self.ring2.mul(f, &self.b_bar)?;
        Ok(Codeword::new(
            left.to_vector(self.k),
            right.to_vector(self.l),
        ))
    }

    /// Encodes a message of degree below `k + l - m`.
    pub fn encode(&self, f: &Polynomial) -> Result<Codeword> {
        self.check_message(f)?;
        self.image(f)
    }

    fn check_message(&self, f: &Polynomial) -> Result<()> {
        self.field.check_same(&f.field())?;
        match f.degree() {
            Some(degree) if degree >= self.message_len() => Err(Error::DegreeTooLarge {
                what: "message",
                degree,
                bound: self.message_len(),
            }),
            _ => Ok(()),
        }
    }

    /// `true` iff `f` encodes to the zero word.
    pub fn kernel_check(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.encode(f)?.is_zero())
    }

    /// `true` iff `h_bar` divides the message `f`.
    pub fn divisible_by_h_bar(&self, f: &Polynomial) -> Result<bool> {
        self.check_message(f)?;
        self.h_bar.divides(f)
    }

    /// `(x c1 mod phi1, x c2 mod phi2)`.
    pub fn shift(&self, word: &Codeword) -> Result<Codeword> {
        shift_word(&self.ring1, &self.ring2, word)
    }

    /// Number of messages in the enumeration range, if it fits the bound.
    pub fn message_count(&self, bound: u64) -> Result<u64> {
        let q = self.field.modulus().expect("prime field");
        let len = self.message_len();
        match q.checked_pow(len as u32) {
            Some(n) if n <= bound => Ok(n),
            _ => Err(Error::TooLarge {
                size: format!("{q}^{len}"),
                bound,
            }),
        }
    }

    /// All messages of degree below `k + l - m`, lexicographic in
    /// `(f_0, f_1, ...)`.
    pub fn messages(&self, bound: u64) -> Result<impl Iterator<Item = Polynomial> + '_> {
        let count = self.message_count(bound)?;
        let q = self.field.modulus().expect("prime field");
        let len = self.message_len();
        Ok((0..count).map(move |mut idx| {
            let mut coeffs = vec![self.field.zero(); len];
            for slot in coeffs.iter_mut().rev() {
                *slot = self.field.from_i64((idx % q) as i64);
                idx /= q;
            }
            Polynomial::new(self.field, coeffs)
        }))
    }

    /// Rows `s = 0 .. kl/t - 1` are the images of `x^s`.
    pub fn power_row_matrix(&self) -> Result<DenseMatrix> {
        let rows = (0..self.generator_rows())
            .map(|s| {
                let xs = Polynomial::monomial(self.field.one(), s);
                Ok(self.image(&xs)?.concat())
            })
            .collect::<Result<Vec<_>>>()?;
        DenseMatrix::from_rows(self.field, self.length(), rows)
    }

    /// The `kl/t x (k + l)` block matrix `[A (H1^T)^{k i} | B (H2^T)^{l j}]`
    /// with `A = H*_{phi1}(a)^T` and `B = H*_{phi2}(b)^T`.
    pub fn block_generator_matrix(&self) -> Result<DenseMatrix> {
        let left = block_column(&self.rot1, &self.a_bar, self.l / self.t)?;
        let right = block_column(&self.rot2, &self.b_bar, self.k / self.t)?;
        left.hstack(&right)
    }
}

fn block_column(rot: &RotationMatrix, gen: &Polynomial, blocks: usize) -> Result<DenseMatrix> {
    let n = rot.degree();
    let a = build_ideal_matrix(rot, &gen.to_vector(n), n)?.transpose();
    let step = rot.matrix().transpose().pow(n as u64)?;
    let mut out = a.clone();
    let mut current = a;
    for _ in 1..blocks {
        current = current.mul(&step)?;
        out = out.vstack(&current)?;
    }
    Ok(out)
}

fn shift_word(ring1: &ResidueRing, ring2: &ResidueRing, word: &Codeword) -> Result<Codeword> {
    let field = ring1.field();
    let (k, l) = (ring1.dimension(), ring2.dimension());
    if word.left.len() != k || word.right.len() != l {
        return Err(Error::DimensionMismatch {
            expected: k + l,
            found: word.len(),
        });
    }
    let x = Polynomial::x(field);
    let left = ring1.mul(&x, &Polynomial::new(field, word.left.clone()))?;
    let right = ring2.mul(&x, &Polynomial::new(field, word.right.clone()))?;
    Ok(Codeword::new(left.to_vector(k), right.to_vector(l)))
}

/// The full block generator matrix. Row `s` equals the image of `x^s`.
pub fn generator_matrix_full(code: &QuasiCyclicCode) -> Result<DenseMatrix> {
    let block = code.block_generator_matrix()?;
    debug_assert_eq!(Some(&block), code.power_row_matrix().ok().as_ref());
    Ok(block)
}

/// Row-space basis of the code built from an exhaustive enumeration.
pub fn brute_span_basis(code: &QuasiCyclicCode, bound: u64) -> Result<DenseMatrix> {
    let mut basis = EchelonBasis::new(code.field, code.length());
    for f in code.messages(bound)? {
        basis.insert(&code.encode(&f)?.concat())?;
    }
    Ok(basis.to_matrix())
}

fn image_span_basis(code: &QuasiCyclicCode) -> Result<DenseMatrix> {
    let mut basis = EchelonBasis::new(code.field, code.length());
    for s in 0..code.message_len() {
        basis.insert(
            &code
                .image(&Polynomial::monomial(code.field.one(), s))?
                .concat(),
        )?;
    }
    Ok(basis.to_matrix())
}

/// `r = min{kl/t, k + l - d_cor}` consecutive rows of the block generator
/// matrix starting at `start_row`, checked to generate the code.
///
/// When `r < dim` no window can span the code and [`Error::SpanDeficit`] is
/// returned. The reference span is the exhaustive enumeration when it fits
/// [`DEFAULT_ENUMERATION_BOUND`], otherwise the images of `1, x, x^2, ...`.
pub fn generator_matrix_minimal(code: &QuasiCyclicCode, start_row: usize) -> Result<DenseMatrix> {
    let reference = match brute_span_basis(code, DEFAULT_ENUMERATION_BOUND) {
        Ok(b) => b,
        Err(Error::TooLarge { .. }) => image_span_basis(code)?,
        Err(e) => return Err(e),
    };
    generator_matrix_minimal_with_span(code, start_row, &reference)
}

/// As [`generator_matrix_minimal`], comparing against a caller-supplied
/// spanning set of the code.
pub fn generator_matrix_minimal_with_span(
    code: &QuasiCyclicCode,
    start_row: usize,
    reference: &DenseMatrix,
) -> Result<DenseMatrix> {
    let total = code.generator_rows();
    let r = code.window_rows();
    if start_row + r > total {
        return Err(Error::IndexOutOfRange {
            start: start_row,
            end: start_row + r,
            len: total,
        });
    }
    if r < code.dim {
        return Err(Error::SpanDeficit {
            r,
            dim: code.dim,
            rows: total,
            reason: format!(
                "the block matrix has only kl/t = {total} rows, fewer than k + l - d = {}",
                code.length() - code.d_cor
            ),
        });
    }
    let rows = generator_matrix_full(code)?.select_rows(start_row..start_row + r)?;
    if rows.rank() != r {
        return Err(Error::TheoremViolation(format!(
            "rows {start_row}..{} of the block generator matrix are dependent",
            start_row + r
        )));
    }
    if !rows.same_row_space(reference)? {
        return Err(Error::SpanDeficit {
            r,
            dim: code.dim,
            rows: total,
            reason: format!(
                "rows {start_row}..{} do not span the enumerated code",
                start_row + r
            ),
        });
    }
    Ok(rows)
}

/// Distinct codewords, in message order, bounded by `bound` messages.
pub fn enumerate_codewords_bounded(code: &QuasiCyclicCode, bound: u64) -> Result<Vec<Codeword>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in code.messages(bound)? {
        let w = code.encode(&f)?;
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    Ok(out)
}

pub fn enumerate_codewords(code: &QuasiCyclicCode) -> Result<Vec<Codeword>> {
    enumerate_codewords_bounded(code, DEFAULT_ENUMERATION_BOUND)
}

/// Whether a set of words is closed under `(c1, c2) -> (x c1 mod phi1, x c2 mod phi2)`.
pub fn is_shift_closed(phi1: &Polynomial, phi2: &Polynomial, words: &[Codeword]) -> Result<bool> {
    phi1.field().check_same(&phi2.field())?;
    let (ring1, ring2) = (
        ResidueRing::new(phi1.clone())?,
        ResidueRing::new(phi2.clone())?,
    );
    let set: HashSet<&Codeword> = words.iter().collect();
    for w in words {
        if !set.contains(&shift_word(&ring1, &ring2, w)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn shift_closure_check(code: &QuasiCyclicCode) -> Result<bool> {
    is_shift_closed(&code.phi1, &code.phi2, &enumerate_codewords(code)?)
}

/// Minimum Hamming weight over the nonzero codewords.
pub fn minimum_distance(code: &QuasiCyclicCode) -> Result<usize> {
    if code.dim == 0 {
        return Err(Error::ZeroCode);
    }
    enumerate_codewords(code)?
        .iter()
        .map(Codeword::weight)
        .filter(|&w| w > 0)
        .min()
        .ok_or(Error::ZeroCode)
}
