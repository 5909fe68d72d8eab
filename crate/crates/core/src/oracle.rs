//! Randomized and exhaustive cross-checks.
//!
//! Ranks, spans and kernels are recomputed here with separate arithmetic
//! (bare `u64` residues or `BigRational`) and a separate elimination that
//! works on the transpose and picks pivots from the bottom up. Matrices are
//! rebuilt along the polynomial route, column `j` being `x^j f mod phi`.
//! None of the gcd formulas are consulted on the observed side.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::ideal::{
    build_double_ideal, build_ideal_matrix, full_rank_criterion, kernel_vectors_square,
    rank_report_double, rank_report_single, verify_double_vandermonde_identity,
    verify_vandermonde_identity, KernelFamily, RotationMatrix,
};
use crate::matrix::DenseMatrix;
use crate::poly::{find_roots, Polynomial, DEFAULT_SCAN_BOUND};
use crate::quasi_cyclic::{
    build_code, generator_matrix_full, generator_matrix_minimal_with_span, QuasiCyclicCode,
    DEFAULT_ENUMERATION_BOUND,
};

/// Rejection-sampling budget for every instance generator.
pub const MAX_RETRIES: usize = 10_000;

// ---------------------------------------------------------------------------
// Raw arithmetic

#[derive(Clone, Copy, Debug)]
enum Arith {
    Mod(u64),
    Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Elem {
    M(u64),
    R(BigRational),
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Arith {
    fn of(field: FieldSpec) -> Self {
        field.modulus().map_or(Arith::Rat, Arith::Mod)
    }

    fn zero(self) -> Elem {
        match self {
            Arith::Mod(_) => Elem::M(0),
            Arith::Rat => Elem::R(BigRational::zero()),
        }
    }

    fn one(self) -> Elem {
        match self {
            Arith::Mod(p) => Elem::M(1 % p),
            Arith::Rat => Elem::R(BigRational::one()),
        }
    }

    fn lift(self, s: &Scalar) -> Elem {
        match self {
            Arith::Mod(_) => Elem::M(s.residue().expect("prime field scalar")),
            Arith::Rat => Elem::R(s.rational().expect("rational scalar").clone()),
        }
    }

    fn add(self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Arith::Mod(p), Elem::M(x), Elem::M(y)) => Elem::M((x + y) % p),
            (Arith::Rat, Elem::R(x), Elem::R(y)) => Elem::R(x + y),
            _ => unreachable!("mixed raw arithmetic"),
        }
    }

    fn sub(self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Arith::Mod(p), Elem::M(x), Elem::M(y)) => Elem::M((x + p - y) % p),
            (Arith::Rat, Elem::R(x), Elem::R(y)) => Elem::R(x - y),
            _ => unreachable!("mixed raw arithmetic"),
        }
    }

    fn mul(self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Arith::Mod(p), Elem::M(x), Elem::M(y)) => Elem::M(x * y % p),
            (Arith::Rat, Elem::R(x), Elem::R(y)) => Elem::R(x * y),
            _ => unreachable!("mixed raw arithmetic"),
        }
    }

    fn inv(self, a: &Elem) -> Elem {
        match (self, a) {
            (Arith::Mod(p), Elem::M(x)) => Elem::M(pow_mod(*x, p - 2, p)),
            (Arith::Rat, Elem::R(x)) => Elem::R(x.recip()),
            _ => unreachable!("mixed raw arithmetic"),
        }
    }

    fn is_zero(self, a: &Elem) -> bool {
        match a {
            Elem::M(x) => *x == 0,
            Elem::R(x) => x.is_zero(),
        }
    }

    fn eval(self, coeffs: &[Elem], at: &Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, at), c))
    }

    fn pow(self, base: &Elem, exp: usize) -> Elem {
        (0..exp).fold(self.one(), |acc, _| self.mul(&acc, base))
    }
}

/// Rank of a list of vectors: elimination from the last coordinate down,
/// choosing each pivot from the bottom-most remaining vector.
fn raw_rank(ar: Arith, mut rows: Vec<Vec<Elem>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut live: Vec<usize> = (0..rows.len()).collect();
    let mut rank = 0;
    for col in (0..width).rev() {
        let Some(pos) = live.iter().rposition(|&r| !ar.is_zero(&rows[r][col])) else {
            continue;
        };
        let pr = live.remove(pos);
        let inv = ar.inv(&rows[pr][col]);
        let pivot: Vec<Elem> = rows[pr][..=col].iter().map(|x| ar.mul(x, &inv)).collect();
        for &r in &live {
            let factor = rows[r][col].clone();
            if ar.is_zero(&factor) {
                continue;
            }
            for (c, pv) in pivot.iter().enumerate() {
                rows[r][c] = ar.sub(&rows[r][c], &ar.mul(&factor, pv));
            }
        }
        rank += 1;
    }
    rank
}

/// Second-opinion rank: the columns of `m` are eliminated as rows, with a
/// reversed pivot scan and arithmetic independent of [`Scalar`].
pub fn oracle_rank(m: &DenseMatrix) -> usize {
    let ar = Arith::of(m.field());
    let columns = (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| ar.lift(&m[(i, j)])).collect())
        .collect();
    raw_rank(ar, columns)
}

/// `x v mod phi` for a coefficient vector `v` of length `deg phi`, where
/// `phi` holds all `n + 1` ascending coefficients of a monic polynomial.
fn raw_shift(ar: Arith, v: &[Elem], phi: &[Elem]) -> Vec<Elem> {
    let top = v[v.len() - 1].clone();
    (0..v.len())
        .map(|i| {
            let below = if i == 0 { ar.zero() } else { v[i - 1].clone() };
            ar.sub(&below, &ar.mul(&top, &phi[i]))
        })
        .collect()
}

/// Columns `x^j f mod phi` for `j < m`.
fn raw_ideal_columns(ar: Arith, phi: &Polynomial, f: &[Scalar], m: usize) -> Vec<Vec<Elem>> {
    let c: Vec<Elem> = phi.coeffs().iter().map(|s| ar.lift(s)).collect();
    let mut current: Vec<Elem> = f.iter().map(|s| ar.lift(s)).collect();
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        let next = raw_shift(ar, &current, &c);
        out.push(std::mem::replace(&mut current, next));
    }
    out
}

fn raw_double_columns(
    ar: Arith,
    phi1: &Polynomial,
    phi2: &Polynomial,
    f1: &[Scalar],
    f2: &[Scalar],
    m: usize,
) -> Vec<Vec<Elem>> {
    raw_ideal_columns(ar, phi1, f1, m)
        .into_iter()
        .zip(raw_ideal_columns(ar, phi2, f2, m))
        .map(|(mut a, b)| {
            a.extend(b);
            a
        })
        .collect()
}

fn matches_columns(ar: Arith, built: &DenseMatrix, columns: &[Vec<Elem>]) -> bool {
    built.cols() == columns.len()
        && columns.iter().enumerate().all(|(j, col)| {
            col.len() == built.rows()
                && col
                    .iter()
                    .enumerate()
                    .all(|(i, e)| ar.lift(&built[(i, j)]) == *e)
        })
}

fn windows_independent(ar: Arith, columns: &[Vec<Elem>], width: usize) -> bool {
    width <= columns.len()
        && (0..=columns.len() - width)
            .all(|s| raw_rank(ar, columns[s..s + width].to_vec()) == width)
}

// ---------------------------------------------------------------------------
// Raw quasi-cyclic codes over F_q

fn residues(p: &Polynomial, len: usize) -> Vec<u64> {
    p.to_vector(len)
        .iter()
        .map(|s| s.residue().expect("prime field scalar"))
        .collect()
}

fn shift_u64(v: &[u64], phi: &[u64], q: u64) -> Vec<u64> {
    let top = v[v.len() - 1];
    (0..v.len())
        .map(|i| {
            let below = if i == 0 { 0 } else { v[i - 1] };
            (below + q - top * phi[i] % q) % q
        })
        .collect()
}

fn rem_u64(f: &[u64], h: &[u64], q: u64) -> Vec<u64> {
    let dh = h.len() - 1;
    let mut r = f.to_vec();
    for i in (dh..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        for (j, hj) in h.iter().enumerate() {
            let at = i - dh + j;
            r[at] = (r[at] + q - c * hj % q) % q;
        }
    }
    r.truncate(dh);
    r
}

fn mul_u64(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % q;
        }
    }
    out
}

/// Echelon basis with unit pivots, reduced in insertion order.
struct RawBasis {
    q: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl RawBasis {
    fn new(q: u64) -> Self {
        RawBasis {
            q,
            rows: Vec::new(),
        }
    }

    fn insert(&mut self, v: &[u64]) -> bool {
        let q = self.q;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + q - c * r % q) % q;
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(pivot) => {
                let inv = pow_mod(v[pivot], q - 2, q);
                v.iter_mut().for_each(|x| *x = *x * inv % q);
                self.rows.push((pivot, v));
                true
            }
        }
    }
}

/// The code as a list of raw images of `x^s (a, b)`.
struct RawCode {
    q: u64,
    len: usize,
    images: Vec<Vec<u64>>,
}

impl RawCode {
    fn new(code: &QuasiCyclicCode, count: usize) -> Self {
        let q = code.field().modulus().expect("prime field");
        let (k, l) = (code.k(), code.l());
        let phi1 = residues(code.phi1(), k + 1);
        let phi2 = residues(code.phi2(), l + 1);
        let mut left = residues(code.a_bar(), k);
        let mut right = residues(code.b_bar(), l);
        let mut images = Vec::with_capacity(count);
        for _ in 0..count {
            images.push(left.iter().chain(&right).copied().collect());
            left = shift_u64(&left, &phi1, q);
            right = shift_u64(&right, &phi2, q);
        }
        RawCode {
            q,
            len: code.message_len(),
            images,
        }
    }

    fn encode(&self, f: &[u64]) -> Vec<u64> {
        let width = self.images.first().map_or(0, Vec::len);
        let mut out = vec![0; width];
        for (c, row) in f.iter().zip(&self.images) {
            if *c != 0 {
                for (o, r) in out.iter_mut().zip(row) {
                    *o = (*o + c * r) % self.q;
                }
            }
        }
        out
    }

    /// Every coefficient vector of length `len`, in odometer order.
    fn for_each_vector(
        q: u64,
        len: usize,
        bound: u64,
        mut visit: impl FnMut(&[u64]),
    ) -> Result<()> {
        match q.checked_pow(len as u32) {
            Some(n) if n <= bound => {}
            _ => {
                return Err(Error::TooLarge {
                    size: format!("{q}^{len}"),
                    bound,
                })
            }
        }
        let mut f = vec![0u64; len];
        loop {
            visit(&f);
            let mut i = 0;
            loop {
                if i == len {
                    return Ok(());
                }
                f[i] += 1;
                if f[i] < q {
                    break;
                }
                f[i] = 0;
                i += 1;
            }
        }
    }

    fn basis(&self, bound: u64) -> Result<RawBasis> {
        let mut basis = RawBasis::new(self.q);
        Self::for_each_vector(self.q, self.len, bound, |f| {
            basis.insert(&self.encode(f));
        })?;
        Ok(basis)
    }
}

fn raw_basis_matrix(field: FieldSpec, width: usize, basis: &RawBasis) -> DenseMatrix {
    let rows = basis
        .rows
        .iter()
        .map(|(_, r)| r.iter().map(|&x| field.from_i64(x as i64)).collect())
        .collect();
    DenseMatrix::from_rows(field, width, rows).expect("basis width")
}

/// Dimension of the span of every encoded message, by incremental
/// elimination over the full enumeration.
pub fn brute_code_dimension(code: &QuasiCyclicCode) -> Result<usize> {
    let raw = RawCode::new(code, code.message_len());
    Ok(raw.basis(DEFAULT_ENUMERATION_BOUND)?.rows.len())
}

/// An echelon basis of the enumerated code, computed with raw arithmetic.
pub fn brute_code_span(code: &QuasiCyclicCode) -> Result<DenseMatrix> {
    let raw = RawCode::new(code, code.message_len());
    let basis = raw.basis(DEFAULT_ENUMERATION_BOUND)?;
    Ok(raw_basis_matrix(code.field(), code.length(), &basis))
}

// ---------------------------------------------------------------------------
// Instance generation

/// A uniform element of `F_p`; over `Q` a small-height rational.
pub fn random_scalar(field: FieldSpec, rng: &mut impl Rng) -> Scalar {
    match field.modulus() {
        Some(p) => field.from_i64(rng.gen_range(0..p) as i64),
        None => {
            let numer = rng.gen_range(-4..=4);
            let denom = if rng.gen_bool(0.75) {
                1
            } else {
                rng.gen_range(2..=3)
            };
            Scalar::from_ratio(field, &BigInt::from(numer), &BigInt::from(denom))
                .expect("nonzero denominator")
        }
    }
}

fn random_nonzero(field: FieldSpec, rng: &mut impl Rng) -> Scalar {
    loop {
        let s = random_scalar(field, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

fn random_vector(field: FieldSpec, len: usize, rng: &mut impl Rng) -> Vec<Scalar> {
    (0..len).map(|_| random_scalar(field, rng)).collect()
}

/// Monic of the given degree with a nonzero constant term.
fn random_monic(field: FieldSpec, degree: usize, rng: &mut impl Rng) -> Polynomial {
    let mut coeffs = Vec::with_capacity(degree + 1);
    coeffs.push(random_nonzero(field, rng));
    coeffs.extend((1..degree).map(|_| random_scalar(field, rng)));
    coeffs.push(field.one());
    Polynomial::new(field, coeffs)
}

/// A monic squarefree polynomial with nonzero constant term, by rejection.
pub fn random_squarefree_poly(
    field: FieldSpec,
    degree: usize,
    rng: &mut impl Rng,
) -> Result<Polynomial> {
    if degree == 0 {
        return Err(Error::DegreeZero);
    }
    for _ in 0..MAX_RETRIES {
        let p = random_monic(field, degree, rng);
        if p.is_squarefree()? {
            return Ok(p);
        }
    }
    Err(Error::ExhaustedRetries(MAX_RETRIES))
}

/// A polynomial together with the pieces it was multiplied from.
#[derive(Clone, Debug)]
struct Factored {
    poly: Polynomial,
    pieces: Vec<Polynomial>,
}

impl Factored {
    fn one(field: FieldSpec) -> Self {
        Factored {
            poly: Polynomial::one(field),
            pieces: Vec::new(),
        }
    }

    fn times(&self, other: &Factored) -> Factored {
        Factored {
            poly: &self.poly * &other.poly,
            pieces: self.pieces.iter().chain(&other.pieces).cloned().collect(),
        }
    }
}

/// Product of one to three random monic pieces. With `squarefree` the
/// product is squarefree and coprime to `avoid`.
fn random_factored(
    field: FieldSpec,
    degree: usize,
    avoid: Option<&Polynomial>,
    squarefree: bool,
    rng: &mut impl Rng,
) -> Result<Factored> {
    random_factored_within(field, degree, avoid, squarefree, MAX_RETRIES, rng)
}

fn random_factored_within(
    field: FieldSpec,
    degree: usize,
    avoid: Option<&Polynomial>,
    squarefree: bool,
    budget: usize,
    rng: &mut impl Rng,
) -> Result<Factored> {
    if degree == 0 {
        return Ok(Factored::one(field));
    }
    for _ in 0..budget {
        let count = rng.gen_range(1..=degree.min(3));
        let mut parts = vec![1; count];
        for _ in count..degree {
            parts[rng.gen_range(0..count)] += 1;
        }
        let pieces: Vec<Polynomial> = parts.iter().map(|&d| random_monic(field, d, rng)).collect();
        let poly = pieces
            .iter()
            .fold(Polynomial::one(field), |acc, p| &acc * p);
        if squarefree {
            if !poly.is_squarefree()? {
                continue;
            }
            if let Some(a) = avoid {
                if !poly.gcd(a)?.is_one() {
                    continue;
                }
            }
        }
        return Ok(Factored { poly, pieces });
    }
    Err(Error::ExhaustedRetries(budget))
}

/// Two moduli of degrees `n1` and `n2`; half of the time they share a
/// random common factor. Over small fields a requested split may have no
/// solution (over F2 nothing of degree 1 is coprime to x + 1), so each
/// shared attempt gets a small budget before falling back.
fn random_pair(
    field: FieldSpec,
    n1: usize,
    n2: usize,
    squarefree: bool,
    rng: &mut impl Rng,
) -> Result<(Factored, Factored)> {
    const SHARED_BUDGET: usize = 50;
    if rng.gen_bool(0.5) {
        for _ in 0..SHARED_BUDGET {
            let shared_degree = rng.gen_range(1..=n1.min(n2));
            let mut draw = |degree, avoid: Option<&Polynomial>| {
                random_factored_within(field, degree, avoid, squarefree, SHARED_BUDGET, rng)
            };
            let Ok(s) = draw(shared_degree, None) else {
                continue;
            };
            let Ok(r1) = draw(n1 - shared_degree, Some(&s.poly)) else {
                continue;
            };
            let Ok(r2) = draw(n2 - shared_degree, Some(&s.poly)) else {
                continue;
            };
            return Ok((s.times(&r1), s.times(&r2)));
        }
    }
    Ok((
        random_factored(field, n1, None, squarefree, rng)?,
        random_factored(field, n2, None, squarefree, rng)?,
    ))
}

/// Half uniform (the zero vector included); half a multiple of a random
/// subset of `pieces`, so that nontrivial gcds are common.
fn random_generator(
    field: FieldSpec,
    n: usize,
    pieces: &[Polynomial],
    rng: &mut impl Rng,
) -> Vec<Scalar> {
    if pieces.is_empty() || rng.gen_bool(0.5) {
        return random_vector(field, n, rng);
    }
    let p = pieces
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .fold(Polynomial::one(field), |acc, piece| &acc * piece);
    let dp = p.degree().expect("product of monics");
    if dp >= n {
        return vec![field.zero(); n];
    }
    let u = Polynomial::new(field, random_vector(field, n - dp, rng));
    (&p * &u).to_vector(n)
}

fn root_pool(field: FieldSpec) -> Vec<Scalar> {
    match field.modulus() {
        Some(p) => (1..p).map(|r| field.from_i64(r as i64)).collect(),
        None => (1..=6)
            .flat_map(|r| [r, -r])
            .map(|r| field.from_i64(r))
            .collect(),
    }
}

/// `n` distinct roots from the pool; if `share` is given, a random nonempty
/// part of it is reused.
fn random_roots(
    pool: &[Scalar],
    n: usize,
    share: Option<&[Scalar]>,
    rng: &mut impl Rng,
) -> Vec<Scalar> {
    let mut roots: Vec<Scalar> = match share {
        Some(s) if !s.is_empty() => {
            let take = rng.gen_range(1..=s.len().min(n));
            s.choose_multiple(rng, take).cloned().collect()
        }
        _ => Vec::new(),
    };
    let rest: Vec<&Scalar> = pool.iter().filter(|r| !roots.contains(r)).collect();
    let need = n - roots.len();
    roots.extend(rest.choose_multiple(rng, need).map(|r| (*r).clone()));
    roots.sort_by_key(|r| r.to_string());
    roots
}

fn linear_pieces(field: FieldSpec, roots: &[Scalar]) -> Vec<Polynomial> {
    roots
        .iter()
        .map(|r| Polynomial::from_roots(field, std::slice::from_ref(r)))
        .collect()
}

// ---------------------------------------------------------------------------
// Campaigns

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CampaignTarget {
    /// Rank of a generalized ideal matrix and its column windows.
    SingleRank,
    /// Rank of a double ideal matrix and the degree split `d = e1 + e2 + e`.
    DoubleRank,
    /// The gcd criterion for invertibility of the square double matrix.
    FullRank,
    /// Null vectors of the transposed square double matrix from roots.
    KernelVectors,
    /// The Vandermonde factorization of single and double matrices.
    Vandermonde,
    /// Code dimension, kernel and isomorphism of quasi-cyclic codes.
    CodeDimension,
    /// Block generator matrices and their minimal row windows.
    GeneratorMatrix,
}

impl CampaignTarget {
    pub const ALL: [CampaignTarget; 7] = [
        CampaignTarget::SingleRank,
        CampaignTarget::DoubleRank,
        CampaignTarget::FullRank,
        CampaignTarget::KernelVectors,
        CampaignTarget::Vandermonde,
        CampaignTarget::CodeDimension,
        CampaignTarget::GeneratorMatrix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CampaignTarget::SingleRank => "single-rank",
            CampaignTarget::DoubleRank => "double-rank",
            CampaignTarget::FullRank => "full-rank",
            CampaignTarget::KernelVectors => "kernel",
            CampaignTarget::Vandermonde => "vandermonde",
            CampaignTarget::CodeDimension => "code-dimension",
            CampaignTarget::GeneratorMatrix => "generator",
        }
    }

    /// Short numbered alias accepted on the command line.
    pub fn alias(self) -> &'static str {
        match self {
            CampaignTarget::SingleRank => "thm2.5",
            CampaignTarget::DoubleRank => "thm2.11",
            CampaignTarget::FullRank => "cor2.15",
            CampaignTarget::KernelVectors => "cor2.14",
            CampaignTarget::Vandermonde => "lemma2.4",
            CampaignTarget::CodeDimension => "thm3.2",
            CampaignTarget::GeneratorMatrix => "cor3.2",
        }
    }

    fn needs_prime_field(self) -> bool {
        matches!(
            self,
            CampaignTarget::CodeDimension | CampaignTarget::GeneratorMatrix
        )
    }
}

impl fmt::Display for CampaignTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CampaignTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', ".");
        CampaignTarget::ALL
            .into_iter()
            .find(|t| t.name() == key || t.alias() == key)
            .ok_or_else(|| {
                let names: Vec<String> = CampaignTarget::ALL
                    .iter()
                    .map(|t| format!("{} ({})", t.name(), t.alias()))
                    .collect();
                Error::Parse(format!(
                    "unknown target {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

impl Serialize for CampaignTarget {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Parameters of a random instance stream.
///
/// `n1_max` and `n2_max` bound the two modulus degrees. `m_max` bounds the
/// column count for matrix targets and the message length `k + l - m` for
/// code targets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub seed: u64,
    pub field: FieldSpec,
    pub n1_max: usize,
    pub n2_max: usize,
    pub m_max: usize,
    pub squarefree_only: bool,
}

impl InstanceSpec {
    pub fn defaults(target: CampaignTarget, field: FieldSpec, seed: u64) -> Self {
        let (n1_max, n2_max, m_max) = match target {
            CampaignTarget::SingleRank => (6, 0, 10),
            CampaignTarget::DoubleRank => (5, 5, 12),
            CampaignTarget::FullRank | CampaignTarget::KernelVectors => (5, 5, 0),
            CampaignTarget::Vandermonde => (6, 6, 10),
            CampaignTarget::CodeDimension | CampaignTarget::GeneratorMatrix => {
                (6, 6, enumerable_length(field, 10))
            }
        };
        InstanceSpec {
            seed,
            field,
            n1_max,
            n2_max,
            m_max,
            squarefree_only: true,
        }
    }
}

/// The largest message length up to `cap` whose enumeration fits
/// [`DEFAULT_ENUMERATION_BOUND`].
fn enumerable_length(field: FieldSpec, cap: usize) -> usize {
    let q = field.modulus().unwrap_or(u64::MAX);
    (0..=cap)
        .take_while(|&len| {
            q.checked_pow(len as u32)
                .is_some_and(|n| n <= DEFAULT_ENUMERATION_BOUND)
        })
        .last()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub instance: Value,
    pub predicted: Value,
    pub observed: Value,
}

/// Outcome of one replayable trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub instance: Value,
    pub predicted: Value,
    pub observed: Value,
    pub agrees: bool,
    pub regimes: Vec<String>,
}

fn serialize_ms<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationSummary {
    pub target: CampaignTarget,
    pub trials: usize,
    pub agreements: usize,
    pub failures: Vec<Failure>,
    /// Number of trials falling in each named regime.
    pub regimes: BTreeMap<String, usize>,
    #[serde(rename = "elapsed_ms", serialize_with = "serialize_ms")]
    pub elapsed: Duration,
}

impl VerificationSummary {
    fn empty(target: CampaignTarget) -> Self {
        VerificationSummary {
            target,
            trials: 0,
            agreements: 0,
            failures: Vec::new(),
            regimes: BTreeMap::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn all_agree(&self) -> bool {
        self.failures.is_empty() && self.agreements == self.trials
    }

    pub fn regime(&self, name: &str) -> usize {
        self.regimes.get(name).copied().unwrap_or(0)
    }

    /// Combines summaries of disjoint trial ranges of one campaign.
    ///
    /// # Panics
    /// If the targets differ.
    pub fn merge(mut self, other: VerificationSummary) -> Self {
        assert_eq!(self.target, other.target, "merging different campaigns");
        self.trials += other.trials;
        self.agreements += other.agreements;
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|f| f.seed);
        for (k, v) in other.regimes {
            *self.regimes.entry(k).or_default() += v;
        }
        self.elapsed += other.elapsed;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    /// The summary without its timing, for replay comparisons.
    pub fn replay_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("summary serializes");
        v.as_object_mut().expect("object").remove("elapsed_ms");
        serde_json::to_string(&v).expect("value serializes")
    }

    fn record(&mut self, trial: TrialRecord) {
        self.trials += 1;
        for r in &trial.regimes {
            *self.regimes.entry(r.clone()).or_default() += 1;
        }
        if trial.agrees {
            self.agreements += 1;
        } else {
            self.failures.push(Failure {
                seed: trial.seed,
                instance: trial.instance,
                predicted: trial.predicted,
                observed: trial.observed,
            });
        }
    }
}

/// Seed of trial `index` in the stream of `master`: word `2 index` of the
/// ChaCha8 stream keyed by `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_word_pos(2 * index as u128);
    rng.next_u64()
}

fn validate(target: CampaignTarget, spec: &InstanceSpec) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidCampaign(msg));
    if target.needs_prime_field() && !spec.field.is_prime_field() {
        return Err(Error::NotPrimeField(spec.field.to_string()));
    }
    if spec.n1_max == 0 {
        return bad("n1_max must be at least 1".into());
    }
    let two_moduli = !matches!(target, CampaignTarget::SingleRank);
    if two_moduli && spec.n2_max == 0 {
        return bad("n2_max must be at least 1".into());
    }
    let uses_m = !matches!(
        target,
        CampaignTarget::FullRank | CampaignTarget::KernelVectors
    );
    if uses_m && spec.m_max == 0 {
        return bad("m_max must be at least 1".into());
    }
    if target.needs_prime_field() {
        let Some(q) = spec.field.modulus() else {
            return Err(Error::NotPrimeField(spec.field.to_string()));
        };
        if q.checked_pow(spec.m_max as u32)
            .is_none_or(|n| n > DEFAULT_ENUMERATION_BOUND)
        {
            return Err(Error::TooLarge {
                size: format!("{q}^{}", spec.m_max),
                bound: DEFAULT_ENUMERATION_BOUND,
            });
        }
    }
    Ok(())
}

/// Runs `trials` trials of `target`. Disagreements are recorded, never
/// raised; only an unusable configuration is an error.
pub fn run_campaign(
    target: CampaignTarget,
    spec: &InstanceSpec,
    trials: usize,
) -> Result<VerificationSummary> {
    if trials == 0 {
        return Err(Error::InvalidCampaign("trials must be at least 1".into()));
    }
    run_campaign_range(target, spec, 0..trials as u64)
}

/// Runs the trials with the given stream indices. Summaries of disjoint
/// ranges [`merge`](VerificationSummary::merge) into the summary of their
/// union.
pub fn run_campaign_range(
    target: CampaignTarget,
    spec: &InstanceSpec,
    indices: Range<u64>,
) -> Result<VerificationSummary> {
    validate(target, spec)?;
    let start = Instant::now();
    let mut summary = VerificationSummary::empty(target);
    for index in indices {
        summary.record(run_trial(target, spec, trial_seed(spec.seed, index)));
    }
    summary.elapsed = start.elapsed();
    Ok(summary)
}

/// Regenerates and rechecks the single trial with the given seed.
pub fn run_trial(target: CampaignTarget, spec: &InstanceSpec, seed: u64) -> TrialRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generated = match target {
        CampaignTarget::SingleRank => single_rank_trial(spec, &mut rng),
        CampaignTarget::DoubleRank => double_rank_trial(spec, &mut rng),
        CampaignTarget::FullRank => full_rank_trial(spec, &mut rng),
        CampaignTarget::KernelVectors => kernel_trial(spec, &mut rng),
        CampaignTarget::Vandermonde => vandermonde_trial(spec, &mut rng),
        CampaignTarget::CodeDimension => code_dimension_trial(spec, &mut rng),
        CampaignTarget::GeneratorMatrix => generator_trial(spec, &mut rng),
    };
    let (instance, checked) = match generated {
        Ok(pair) => pair,
        Err(e) => (Value::Null, Err(e)),
    };
    match checked {
        Ok(o) => TrialRecord {
            seed,
            instance,
            predicted: o.predicted,
            observed: o.observed,
            agrees: o.agrees,
            regimes: o.regimes.into_iter().map(String::from).collect(),
        },
        Err(e) => TrialRecord {
            seed,
            instance,
            predicted: Value::Null,
            observed: json!({ "error": e.to_string() }),
            agrees: false,
            regimes: vec!["error".into()],
        },
    }
}

struct Outcome {
    predicted: Value,
    observed: Value,
    agrees: bool,
    regimes: Vec<&'static str>,
}

type Generated = Result<(Value, Result<Outcome>)>;

/// The library must refuse non-squarefree moduli.
fn rejection<T>(result: Result<T>) -> Result<Outcome> {
    let observed = match &result {
        Ok(_) => json!("accepted"),
        Err(e) => json!(e.to_string()),
    };
    Ok(Outcome {
        predicted: json!("NotSquarefree"),
        agrees: matches!(result, Err(Error::NotSquarefree(_))),
        observed,
        regimes: vec!["non_squarefree"],
    })
}

fn all_squarefree(polys: &[&Polynomial]) -> Result<bool> {
    for p in polys {
        if !p.is_squarefree()? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn single_rank_trial(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Generated {
    let field = spec.field;
    let n = rng.gen_range(1..=spec.n1_max);
    let phi = random_factored(field, n, None, spec.squarefree_only, rng)?;
    let f = random_generator(field, n, &phi.pieces, rng);
    let m = rng.gen_range(1..=spec.m_max);
    let instance = json!({ "field": field, "phi": phi.poly, "f": f, "m": m });
    let h = RotationMatrix::new(phi.poly.clone())?;
    if !phi.poly.is_squarefree()? {
        return Ok((instance, rejection(rank_report_single(&h, &f, m))));
    }
    Ok((instance, check_single(&h, &f, m)))
}

fn check_single(h: &RotationMatrix, f: &[Scalar], m: usize) -> Result<Outcome> {
    let report = rank_report_single(h, f, m)?;
    let ar = Arith::of(h.field());
    let columns = raw_ideal_columns(ar, h.phi(), f, m);
    let same_matrix = matches_columns(ar, &build_ideal_matrix(h, f, m)?, &columns);
    let observed = raw_rank(ar, columns.clone());
    let windows = windows_independent(ar, &columns, observed);
    let n = h.degree();
    let mut regimes = vec![if report.d == 0 {
        "gcd_trivial"
    } else {
        "gcd_nontrivial"
    }];
    if f.iter().all(Scalar::is_zero) {
        regimes.push("zero_f");
    }
    regimes.push(if m < n - report.d {
        "column_bound"
    } else {
        "degree_bound"
    });
    Ok(Outcome {
        predicted: json!({ "d": report.d, "r": report.r_predicted }),
        observed: json!({
            "r": observed,
            "library_r": report.r_observed,
            "matrix_matches": same_matrix,
            "windows_independent": windows,
            "library_consistent": report.consistent(),
        }),
        agrees: report.r_predicted == observed && same_matrix && windows && report.consistent(),
        regimes,
    })
}

struct DoubleInstance {
    h1: RotationMatrix,
    h2: RotationMatrix,
    f1: Vec<Scalar>,
    f2: Vec<Scalar>,
    squarefree: bool,
}

fn random_double(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<DoubleInstance> {
    let field = spec.field;
    let n1 = rng.gen_range(1..=spec.n1_max);
    let n2 = rng.gen_range(1..=spec.n2_max);
    let (phi1, phi2) = random_pair(field, n1, n2, spec.squarefree_only, rng)?;
    let f1 = random_generator(field, n1, &phi1.pieces, rng);
    let f2 = random_generator(field, n2, &phi2.pieces, rng);
    Ok(DoubleInstance {
        squarefree: all_squarefree(&[&phi1.poly, &phi2.poly])?,
        h1: RotationMatrix::new(phi1.poly)?,
        h2: RotationMatrix::new(phi2.poly)?,
        f1,
        f2,
    })
}

impl DoubleInstance {
    fn to_json(&self, m: usize) -> Value {
        json!({
            "field": self.h1.field(),
            "phi1": self.h1.phi(),
            "phi2": self.h2.phi(),
            "f1": self.f1,
            "f2": self.f2,
            "m": m,
        })
    }

    fn n(&self) -> usize {
        self.h1.degree() + self.h2.degree()
    }

    fn raw_columns(&self, ar: Arith, m: usize) -> Vec<Vec<Elem>> {
        raw_double_columns(ar, self.h1.phi(), self.h2.phi(), &self.f1, &self.f2, m)
    }
}

fn double_rank_trial(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Generated {
    let inst = random_double(spec, rng)?;
    let m = rng.gen_range(1..=spec.m_max);
    let instance = inst.to_json(m);
    let report = rank_report_double(&inst.h1, &inst.h2, &inst.f1, &inst.f2, m);
    if !inst.squarefree {
        return Ok((instance, rejection(report)));
    }
    let checked = report.and_then(|report| {
        let ar = Arith::of(inst.h1.field());
        let columns = inst.raw_columns(ar, m);
        let built = build_double_ideal(&inst.h1, &inst.h2, &inst.f1, &inst.f2, m)?;
        let same_matrix = matches_columns(ar, &built, &columns);
        let observed = raw_rank(ar, columns.clone());
        let windows = windows_independent(ar, &columns, observed);
        let split = report.d == report.e1 + report.e2 + report.e;
        let mut regimes = vec![if report.n3 == 0 {
            "coprime_moduli"
        } else {
            "shared_modulus_factor"
        }];
        regimes.push(if report.d == 0 {
            "d_zero"
        } else {
            "d_positive"
        });
        Ok(Outcome {
            predicted: json!({
                "d": report.d,
                "e1": report.e1,
                "e2": report.e2,
                "e": report.e,
                "r": report.r_predicted,
            }),
            observed: json!({
                "r": observed,
                "library_r": report.r_observed,
                "matrix_matches": same_matrix,
                "windows_independent": windows,
                "degree_split": split,
            }),
            agrees: report.r_predicted == observed
                && same_matrix
                && windows
                && split
                && report.consistent(),
            regimes,
        })
    });
    Ok((instance, checked))
}

fn full_rank_trial(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Generated {
    let inst = random_double(spec, rng)?;
    let n = inst.n();
    let instance = inst.to_json(n);
    let criterion = full_rank_criterion(&inst.h1, &inst.h2, &inst.f1, &inst.f2);
    if !inst.squarefree {
        return Ok((instance, rejection(criterion)));
    }
    let checked = criterion.map(|predicted| {
        let ar = Arith::of(inst.h1.field());
        let rank = raw_rank(ar, inst.raw_columns(ar, n));
        let observed = rank == n;
        Outcome {
            predicted: json!({ "full_rank": predicted }),
            observed: json!({ "full_rank": observed, "rank": rank }),
            agrees: predicted == observed,
            regimes: vec![if observed { "invertible" } else { "singular" }],
        }
    });
    Ok((instance, checked))
}

fn split_modulus(
    field: FieldSpec,
    pool: &[Scalar],
    max: usize,
    share: Option<&[Scalar]>,
    rng: &mut ChaCha8Rng,
) -> (Polynomial, Vec<Scalar>) {
    let n = rng.gen_range(1..=max.min(pool.len()));
    let roots = random_roots(pool, n, share, rng);
    (Polynomial::from_roots(field, &roots), roots)
}

struct SplitInstance {
    h1: RotationMatrix,
    h2: RotationMatrix,
    roots1: Vec<Scalar>,
    roots2: Vec<Scalar>,
    f1: Vec<Scalar>,
    f2: Vec<Scalar>,
}

fn random_split_pair(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<SplitInstance> {
    let field = spec.field;
    let pool = root_pool(field);
    let (phi1, roots1) = split_modulus(field, &pool, spec.n1_max, None, rng);
    let share = rng.gen_bool(0.5).then_some(&roots1[..]);
    let (phi2, roots2) = split_modulus(field, &pool, spec.n2_max, share, rng);
    let f1 = random_generator(field, roots1.len(), &linear_pieces(field, &roots1), rng);
    let f2 = random_generator(field, roots2.len(), &linear_pieces(field, &roots2), rng);
    Ok(SplitInstance {
        h1: RotationMatrix::new(phi1)?,
        h2: RotationMatrix::new(phi2)?,
        roots1,
        roots2,
        f1,
        f2,
    })
}

fn same_roots(found: &[Scalar], built: &[Scalar]) -> bool {
    let a: HashSet<&Scalar> = found.iter().collect();
    let b: HashSet<&Scalar> = built.iter().collect();
    found.len() == built.len() && a == b
}

fn kernel_trial(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Generated {
    let inst = random_split_pair(spec, rng)?;
    let n = inst.h1.degree() + inst.h2.degree();
    let instance = json!({
        "field": spec.field,
        "phi1": inst.h1.phi(),
        "phi2": inst.h2.phi(),
        "f1": inst.f1,
        "f2": inst.f2,
    });
    let checked = (|| -> Result<Outcome> {
        let r1 = find_roots(inst.h1.phi(), DEFAULT_SCAN_BOUND)?;
        let r2 = find_roots(inst.h2.phi(), DEFAULT_SCAN_BOUND)?;
        let roots_ok = same_roots(r1.roots(), &inst.roots1) && same_roots(r2.roots(), &inst.roots2);
        let vectors = kernel_vectors_square(&inst.h1, &inst.h2, &inst.f1, &inst.f2, &r1, &r2)?;
        let ar = Arith::of(spec.field);
        let columns = raw_double_columns(ar, inst.h1.phi(), inst.h2.phi(), &inst.f1, &inst.f2, n);
        let raw_vectors: Vec<Vec<Elem>> = vectors
            .iter()
            .map(|v| v.vector.iter().map(|s| ar.lift(s)).collect())
            .collect();
        let annihilate = raw_vectors.iter().all(|v| {
            columns.iter().all(|col| {
                let dot = v
                    .iter()
                    .zip(col)
                    .fold(ar.zero(), |acc, (a, b)| ar.add(&acc, &ar.mul(a, b)));
                ar.is_zero(&dot)
            })
        });
        let independent = raw_rank(ar, raw_vectors) == vectors.len();
        let rank = raw_rank(ar, columns);
        let mut regimes = Vec::new();
        for (family, name) in [
            (KernelFamily::FirstBlock, "first_block"),
            (KernelFamily::SecondBlock, "second_block"),
            (KernelFamily::Shared, "shared"),
        ] {
            if vectors.iter().any(|v| v.family == family) {
                regimes.push(name);
            }
        }
        if vectors.is_empty() {
            regimes.push("trivial_kernel");
        }
        Ok(Outcome {
            predicted: json!({ "kernel_vectors": vectors.len() }),
            observed: json!({
                "rank": rank,
                "nullity": n - rank,
                "annihilate": annihilate,
                "independent": independent,
                "roots_match": roots_ok,
            }),
            agrees: roots_ok && annihilate && independent && vectors.len() + rank == n,
            regimes,
        })
    })();
    Ok((instance, checked))
}

/// Column `j` of the ideal matrix, read as a polynomial and evaluated at a
/// root `w`, must equal `w^j f(w)`.
fn raw_evaluations_hold(ar: Arith, columns: &[Vec<Elem>], f: &[Scalar], roots: &[Scalar]) -> bool {
    let f: Vec<Elem> = f.iter().map(|s| ar.lift(s)).collect();
    roots.iter().all(|w| {
        let w = ar.lift(w);
        let fw = ar.eval(&f, &w);
        columns
            .iter()
            .enumerate()
            .all(|(j, col)| ar.eval(col, &w) == ar.mul(&ar.pow(&w, j), &fw))
    })
}

fn vandermonde_trial(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Generated {
    let inst = random_split_pair(spec, rng)?;
    let m = rng.gen_range(1..=spec.m_max);
    let double = rng.gen_bool(0.5);
    let ar = Arith::of(spec.field);
    let (n1, n2) = (inst.h1.degree(), inst.h2.degree());
    let n = if double { n1 + n2 } else { n1 };
    let mut instance = json!({
        "field": spec.field,
        "phi1": inst.h1.phi(),
        "f1": inst.f1,
        "m": m,
    });
    if double {
        instance["phi2"] = json!(inst.h2.phi());
        instance["f2"] = json!(inst.f2);
    }
    let checked = (|| -> Result<Outcome> {
        let r1 = find_roots(inst.h1.phi(), DEFAULT_SCAN_BOUND)?;
        let c1 = raw_ideal_columns(ar, inst.h1.phi(), &inst.f1, m);
        let mut raw = raw_evaluations_hold(ar, &c1, &inst.f1, &inst.roots1);
        let library = if double {
            let r2 = find_roots(inst.h2.phi(), DEFAULT_SCAN_BOUND)?;
            let c2 = raw_ideal_columns(ar, inst.h2.phi(), &inst.f2, m);
            raw &= raw_evaluations_hold(ar, &c2, &inst.f2, &inst.roots2);
            verify_double_vandermonde_identity(&inst.h1, &inst.h2, &inst.f1, &inst.f2, m, &r1, &r2)?
        } else {
            verify_vandermonde_identity(&inst.h1, &inst.f1, m, &r1)?
        };
        let shape = match m.cmp(&n) {
            std::cmp::Ordering::Less => "m_lt_n",
            std::cmp::Ordering::Equal => "m_eq_n",
            std::cmp::Ordering::Greater => "m_gt_n",
        };
        Ok(Outcome {
            predicted: json!({ "identity": true }),
            observed: json!({ "identity": library, "evaluations": raw }),
            agrees: library && raw,
            regimes: vec![if double { "double" } else { "single" }, shape],
        })
    })();
    Ok((instance, checked))
}

fn random_code(
    spec: &InstanceSpec,
    rng: &mut ChaCha8Rng,
) -> Result<(Value, Result<QuasiCyclicCode>)> {
    let field = spec.field;
    for _ in 0..MAX_RETRIES {
        let k = rng.gen_range(1..=spec.n1_max);
        let l = rng.gen_range(1..=spec.n2_max);
        let (phi1, phi2) = random_pair(field, k, l, spec.squarefree_only, rng)?;
        let m = phi1.poly.gcd(&phi2.poly)?.degree().expect("nonzero gcd");
        if k + l - m > spec.m_max {
            continue;
        }
        let a = Polynomial::new(field, random_generator(field, k, &phi1.pieces, rng));
        let b = Polynomial::new(field, random_generator(field, l, &phi2.pieces, rng));
        let descriptor = json!({
            "field": field,
            "phi1": phi1.poly,
            "phi2": phi2.poly,
            "a": a.to_vector(k),
            "b": b.to_vector(l),
        });
        return Ok((descriptor, build_code(field, phi1.poly, phi2.poly, a, b)));
    }
    Err(Error::ExhaustedRetries(MAX_RETRIES))
}

fn code_dimension_trial(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Generated {
    let (instance, code) = random_code(spec, rng)?;
    let code = match code {
        Err(e @ Error::NotSquarefree(_)) if !spec.squarefree_only => {
            return Ok((instance, rejection::<()>(Err(e))))
        }
        other => other,
    };
    Ok((instance, code.and_then(|c| check_code_dimension(&c))))
}

fn check_code_dimension(code: &QuasiCyclicCode) -> Result<Outcome> {
    let q = code.field().modulus().expect("prime field");
    let len = code.message_len();
    let raw = RawCode::new(code, len);
    let h = residues(code.h_bar(), code.dim() + 1);
    let g = residues(code.g_bar(), code.g_bar().degree().expect("nonzero") + 1);

    let mut basis = RawBasis::new(q);
    let mut words = HashSet::new();
    let mut kernel_mismatches = 0usize;
    RawCode::for_each_vector(q, len, DEFAULT_ENUMERATION_BOUND, |f| {
        let w = raw.encode(f);
        let in_kernel = w.iter().all(|&x| x == 0);
        let divisible = rem_u64(f, &h, q).iter().all(|&x| x == 0);
        if in_kernel != divisible {
            kernel_mismatches += 1;
        }
        basis.insert(&w);
        words.insert(w);
    })?;

    let mut multiples = HashSet::new();
    RawCode::for_each_vector(q, code.dim(), DEFAULT_ENUMERATION_BOUND, |u| {
        let mut f = if u.is_empty() {
            vec![0]
        } else {
            mul_u64(&g, u, q)
        };
        f.resize(len, 0);
        multiples.insert(raw.encode(&f));
    })?;

    let brute = basis.rows.len();
    let expected_words = q.pow(code.dim() as u32) as usize;
    let product = &(code.h_bar() * code.g_bar()) * code.phi3() == code.phi1() * code.phi2();
    let identity = code.degree_identity_holds();
    let agrees = brute == code.dim()
        && kernel_mismatches == 0
        && multiples.len() == expected_words
        && multiples == words
        && product
        && identity;
    let mut regimes = vec![if code.m() == 0 {
        "coprime_moduli"
    } else {
        "shared_modulus_factor"
    }];
    regimes.push(if code.g_bar().is_one() {
        "g_trivial"
    } else {
        "g_nontrivial"
    });
    if code.dim() == 0 {
        regimes.push("zero_code");
    }
    Ok(Outcome {
        predicted: json!({
            "dim": code.dim(),
            "k_plus_l_minus_d": code.length() - code.d_cor(),
            "codewords": expected_words,
        }),
        observed: json!({
            "dim": brute,
            "codewords": words.len(),
            "multiple_images": multiples.len(),
            "images_match_code": multiples == words,
            "kernel_mismatches": kernel_mismatches,
            "product_identity": product,
        }),
        agrees,
        regimes,
    })
}

fn generator_trial(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Generated {
    let (instance, code) = random_code(spec, rng)?;
    let code = match code {
        Err(e @ Error::NotSquarefree(_)) if !spec.squarefree_only => {
            return Ok((instance, rejection::<()>(Err(e))))
        }
        other => other,
    };
    Ok((instance, code.and_then(|c| check_generator(&c))))
}

fn check_generator(code: &QuasiCyclicCode) -> Result<Outcome> {
    let field = code.field();
    let ar = Arith::of(field);
    let total = code.generator_rows();
    let r = code.window_rows();
    let raw = RawCode::new(code, total.max(code.message_len()));
    let block = generator_matrix_full(code)?;
    let block_matches = block == code.power_row_matrix()?
        && (0..total).all(|s| {
            block
                .row(s)
                .iter()
                .zip(&raw.images[s])
                .all(|(x, y)| x.residue() == Some(*y))
        });
    let brute = raw.basis(DEFAULT_ENUMERATION_BOUND)?;
    let brute_dim = brute.rows.len();
    let reference = raw_basis_matrix(field, code.length(), &brute);
    let raw_reference: Vec<Vec<Elem>> = brute
        .rows
        .iter()
        .map(|(_, v)| v.iter().map(|&x| Elem::M(x)).collect())
        .collect();

    if total < code.dim() {
        let result = generator_matrix_minimal_with_span(code, 0, &reference);
        let reported = matches!(result, Err(Error::SpanDeficit { .. }));
        return Ok(Outcome {
            predicted: json!({ "span_deficit": true, "r": r, "dim": code.dim() }),
            observed: json!({
                "span_deficit_reported": reported,
                "brute_dim": brute_dim,
                "block_matches_powers": block_matches,
            }),
            agrees: reported && brute_dim > r && block_matches,
            regimes: vec!["span_deficit"],
        });
    }

    let mut bad_windows = Vec::new();
    for start in 0..=total - r {
        let library_ok = generator_matrix_minimal_with_span(code, start, &reference).is_ok();
        let window: Vec<Vec<Elem>> = raw.images[start..start + r]
            .iter()
            .map(|v| v.iter().map(|&x| Elem::M(x)).collect())
            .collect();
        let independent = raw_rank(ar, window.clone()) == r;
        let mut joint = window;
        joint.extend(raw_reference.iter().cloned());
        let spans = raw_rank(ar, joint) == r && brute_dim == r;
        if !(library_ok && independent && spans) {
            bad_windows.push(start);
        }
    }
    let mut regimes = vec!["generating"];
    if code.dim() == 0 {
        regimes.push("zero_code");
    }
    Ok(Outcome {
        predicted: json!({ "span_deficit": false, "r": r, "windows": total - r + 1 }),
        observed: json!({
            "brute_dim": brute_dim,
            "failing_windows": bad_windows,
            "block_matches_powers": block_matches,
        }),
        agrees: bad_windows.is_empty() && block_matches,
        regimes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn oracle_rank_examples() {
        let q = FieldSpec::rationals();
        assert_eq!(oracle_rank(&DenseMatrix::identity(q, 3)), 3);
        assert_eq!(oracle_rank(&DenseMatrix::zeros(fp(5), 3, 4)), 0);
        let h1 = RotationMatrix::new(Polynomial::from_i64s(q, &[-1, 0, 1])).unwrap();
        let h2 = RotationMatrix::new(Polynomial::from_i64s(q, &[2, -3, 1])).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        let m = build_double_ideal(&h1, &h2, &e(&[1, 0]), &e(&[1, 0]), 4).unwrap();
        assert_eq!(oracle_rank(&m), 3);
        assert_eq!(
            oracle_rank(&DenseMatrix::from_i64s(fp(2), &[&[1, 1], &[1, 1]])),
            1
        );
    }

    #[test]
    fn squarefree_generator_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_squarefree_poly(fp(2), 1, &mut rng).unwrap();
        assert_eq!(p, Polynomial::from_i64s(fp(2), &[1, 1]));
        for _ in 0..20 {
            let p = random_squarefree_poly(fp(3), 2, &mut rng).unwrap();
            assert!(p.is_monic() && p.is_squarefree().unwrap() && !p.coeff(0).is_zero());
            assert_eq!(p.degree(), Some(2));
        }
        assert_eq!(
            random_squarefree_poly(fp(3), 0, &mut rng).unwrap_err(),
            Error::DegreeZero
        );
    }

    fn unit_code(a: &[i64]) -> QuasiCyclicCode {
        let f2 = fp(2);
        let p = |c: &[i64]| Polynomial::from_i64s(f2, c);
        build_code(f2, p(&[1, 0, 0, 1]), p(&[1, 1, 1]), p(a), p(&[1])).unwrap()
    }

    #[test]
    fn brute_dimension_examples() {
        assert_eq!(brute_code_dimension(&unit_code(&[1])).unwrap(), 3);
        assert_eq!(brute_code_dimension(&unit_code(&[1, 1])).unwrap(), 2);
        let f2 = fp(2);
        let p = |c: &[i64]| Polynomial::from_i64s(f2, c);
        let zero = build_code(f2, p(&[1, 0, 0, 1]), p(&[1, 1, 1]), p(&[]), p(&[])).unwrap();
        assert_eq!(brute_code_dimension(&zero).unwrap(), 0);
    }

    #[test]
    fn raw_helpers() {
        // x^3 + 1 = (x + 1)(x^2 + x + 1) over F2.
        assert_eq!(rem_u64(&[1, 0, 0, 1], &[1, 1, 1], 2), vec![0, 0]);
        assert_eq!(rem_u64(&[0, 0, 1], &[1, 1, 1], 2), vec![1, 1]);
        assert_eq!(mul_u64(&[1, 1], &[1, 1, 1], 2), vec![1, 0, 0, 1]);
        assert_eq!(shift_u64(&[0, 1], &[1, 1, 1], 2), vec![1, 1]);
        let mut calls = 0;
        RawCode::for_each_vector(3, 2, 9, |_| calls += 1).unwrap();
        assert_eq!(calls, 9);
        assert!(RawCode::for_each_vector(3, 2, 8, |_| {}).is_err());
    }

    #[test]
    fn targets_parse_by_name_and_alias() {
        assert_eq!(
            "thm2.5".parse::<CampaignTarget>().unwrap(),
            CampaignTarget::SingleRank
        );
        assert_eq!(
            "Thm3_2".parse::<CampaignTarget>().unwrap(),
            CampaignTarget::CodeDimension
        );
        assert_eq!(
            "generator".parse::<CampaignTarget>().unwrap(),
            CampaignTarget::GeneratorMatrix
        );
        assert!("nope".parse::<CampaignTarget>().is_err());
    }

    #[test]
    fn campaigns_agree_on_small_runs() {
        for target in CampaignTarget::ALL {
            for field in [fp(2), fp(3), fp(5)] {
                let spec = InstanceSpec::defaults(target, field, 11);
                let s = run_campaign(target, &spec, 30).unwrap();
                assert!(
                    s.all_agree(),
                    "{target} over {field}: {:?}",
                    s.failures.first()
                );
                assert_eq!(s.agreements + s.failures.len(), s.trials);
            }
        }
    }

    #[test]
    fn rational_campaigns_agree() {
        for target in [
            CampaignTarget::SingleRank,
            CampaignTarget::DoubleRank,
            CampaignTarget::FullRank,
            CampaignTarget::KernelVectors,
            CampaignTarget::Vandermonde,
        ] {
            let spec = InstanceSpec::defaults(target, FieldSpec::rationals(), 5);
            let s = run_campaign(target, &spec, 20).unwrap();
            assert!(s.all_agree(), "{target}: {:?}", s.failures.first());
        }
    }

    #[test]
    fn non_squarefree_moduli_are_refused() {
        for target in [CampaignTarget::SingleRank, CampaignTarget::CodeDimension] {
            let mut spec = InstanceSpec::defaults(target, fp(2), 3);
            spec.squarefree_only = false;
            let s = run_campaign(target, &spec, 60).unwrap();
            assert!(s.all_agree(), "{target}: {:?}", s.failures.first());
            assert!(s.regime("non_squarefree") > 0);
        }
    }

    #[test]
    fn replay_is_deterministic_and_shardable() {
        let spec = InstanceSpec::defaults(CampaignTarget::DoubleRank, fp(5), 42);
        let a = run_campaign(CampaignTarget::DoubleRank, &spec, 40).unwrap();
        let b = run_campaign(CampaignTarget::DoubleRank, &spec, 40).unwrap();
        assert_eq!(a.replay_json(), b.replay_json());
        let lo = run_campaign_range(CampaignTarget::DoubleRank, &spec, 0..15).unwrap();
        let hi = run_campaign_range(CampaignTarget::DoubleRank, &spec, 15..40).unwrap();
        assert_eq!(hi.merge(lo).replay_json(), a.replay_json());
        let one = run_trial(CampaignTarget::DoubleRank, &spec, trial_seed(42, 7));
        assert_eq!(
            one,
            run_trial(CampaignTarget::DoubleRank, &spec, trial_seed(42, 7))
        );
    }

    #[test]
    fn invalid_configurations_are_errors() {
        let spec = InstanceSpec::defaults(CampaignTarget::CodeDimension, FieldSpec::rationals(), 0);
        assert!(matches!(
            run_campaign(CampaignTarget::CodeDimension, &spec, 1),
            Err(Error::NotPrimeField(_))
        ));
        let mut spec = InstanceSpec::defaults(CampaignTarget::CodeDimension, fp(7), 0);
        assert_eq!(spec.m_max, 7);
        spec.m_max = 10;
        assert!(matches!(
            run_campaign(CampaignTarget::CodeDimension, &spec, 1),
            Err(Error::TooLarge { .. })
        ));
        let spec = InstanceSpec::defaults(CampaignTarget::SingleRank, fp(5), 0);
        assert!(run_campaign(CampaignTarget::SingleRank, &spec, 0).is_err());
    }

    #[test]
    fn summary_json_shape() {
        let spec = InstanceSpec::defaults(CampaignTarget::SingleRank, fp(3), 1);
        let s = run_campaign(CampaignTarget::SingleRank, &spec, 3).unwrap();
        let v: Value = serde_json::from_str(&s.to_json()).unwrap();
        for key in [
            "target",
            "trials",
            "agreements",
            "failures",
            "regimes",
            "elapsed_ms",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["target"], "single-rank");
    }
}
