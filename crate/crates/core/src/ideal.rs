//! Rotation matrices, generalized and double ideal matrices, and their
//! gcd-based rank predictions.
//!
//! A monic `phi(x) = x^n - phi_{n-1} x^{n-1} - ... - phi_0` yields the rotation
//! matrix `H` with `I_{n-1}` below the diagonal and last column
//! `(phi_0, ..., phi_{n-1})`. `H` acts on coefficient vectors as
//! multiplication by `x` modulo `phi`, so the columns `f, Hf, H^2 f, ...` of an
//! ideal matrix are the coefficient vectors of `x^j f(x) mod phi(x)`.
//!
//! The stacked two-block construction is called a double ideal matrix here
//! (its original definition labels it a generalized ideal matrix as well).

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::DenseMatrix;
use crate::poly::{Polynomial, RootSet};

/// The companion-style matrix whose characteristic polynomial is `phi`.
#[derive(Clone, Debug)]
pub struct RotationMatrix {
    phi: Polynomial,
    column: Vec<Scalar>,
    matrix: OnceLock<DenseMatrix>,
}

impl PartialEq for RotationMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.phi == other.phi
    }
}

impl RotationMatrix {
    /// `phi` must be monic of degree at least one with a nonzero constant term.
    pub fn new(phi: Polynomial) -> Result<Self> {
        let n = phi.degree().ok_or(Error::ZeroPolynomial)?;
        if n == 0 {
            return Err(Error::DegreeZero);
        }
        if !phi.is_monic() {
            return Err(Error::NotMonic);
        }
        if phi.coeff(0).is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let column = (0..n).map(|i| -&phi.coeff(i)).collect();
        Ok(RotationMatrix {
            phi,
            column,
            matrix: OnceLock::new(),
        })
    }

    pub fn phi(&self) -> &Polynomial {
        &self.phi
    }

    pub fn field(&self) -> FieldSpec {
        self.phi.field()
    }

    pub fn degree(&self) -> usize {
        self.column.len()
    }

    /// `(phi_0, ..., phi_{n-1})`, the last column of the matrix.
    pub fn column(&self) -> &[Scalar] {
        &self.column
    }

    pub fn matrix(&self) -> &DenseMatrix {
        self.matrix.get_or_init(|| {
            let n = self.degree();
            let field = self.field();
            let mut rows = vec![vec![field.zero(); n]; n];
            for (i, row) in rows.iter_mut().enumerate() {
                if i > 0 {
                    row[i - 1] = field.one();
                }
                row[n - 1] = self.column[i].clone();
            }
            DenseMatrix::from_rows(field, n, rows).expect("square rotation matrix")
        })
    }

    fn check_vector(&self, f: &[Scalar]) -> Result<()> {
        if f.len() != self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                found: f.len(),
            });
        }
        for x in f {
            self.field().check_same(&x.field())?;
        }
        Ok(())
    }
}

pub fn build_rotation(phi: Polynomial) -> Result<RotationMatrix> {
    RotationMatrix::new(phi)
}

/// The `n x m` generalized ideal matrix `[f, Hf, ..., H^{m-1} f]`.
pub fn build_ideal_matrix(h: &RotationMatrix, f: &[Scalar], m: usize) -> Result<DenseMatrix> {
    if m == 0 {
        return Err(Error::EmptyColumnCount);
    }
    h.check_vector(f)?;
    let mut columns = Vec::with_capacity(m);
    let mut current = f.to_vec();
    for j in 0..m {
        if j > 0 {
            current = h.matrix().mul_vec(&current)?;
        }
        columns.push(current.clone());
    }
    DenseMatrix::from_columns(h.field(), h.degree(), columns)
}

/// The `(n1 + n2) x m` double ideal matrix: the two generalized ideal
/// matrices stacked vertically.
pub fn build_double_ideal(
    h1: &RotationMatrix,
    h2: &RotationMatrix,
    f1: &[Scalar],
    f2: &[Scalar],
    m: usize,
) -> Result<DenseMatrix> {
    h1.field().check_same(&h2.field())?;
    build_ideal_matrix(h1, f1, m)?.vstack(&build_ideal_matrix(h2, f2, m)?)
}

fn vector_poly(field: FieldSpec, f: &[Scalar]) -> Polynomial {
    Polynomial::new(field, f.to_vec())
}

fn degree_of(p: &Polynomial) -> usize {
    p.degree().expect("gcd with a nonzero modulus is nonzero")
}

/// `true` iff every window of `width` consecutive columns is independent.
fn all_windows_independent(m: &DenseMatrix, width: usize) -> Result<bool> {
    if width > m.cols() {
        return Ok(false);
    }
    for start in 0..=m.cols() - width {
        if !m.columns_independent(start, width)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Predicted and observed rank of a generalized ideal matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub field: FieldSpec,
    pub phi: Polynomial,
    pub f: Vec<Scalar>,
    pub m: usize,
    /// `gcd(f(x), phi(x))`.
    pub d_poly: Polynomial,
    pub d: usize,
    pub r_predicted: usize,
    pub r_observed: usize,
    pub agrees: bool,
    pub leading_columns_independent: bool,
    pub windows_independent: bool,
}

impl RankReport {
    pub fn consistent(&self) -> bool {
        self.agrees && self.leading_columns_independent && self.windows_independent
    }
}

/// Rank `min{m, n - deg gcd(f, phi)}` against Gaussian elimination.
pub fn rank_report_single(h: &RotationMatrix, f: &[Scalar], m: usize) -> Result<RankReport> {
    h.phi.require_squarefree("phi")?;
    let matrix = build_ideal_matrix(h, f, m)?;
    let field = h.field();
    let d_poly = vector_poly(field, f).gcd(&h.phi)?;
    let d = degree_of(&d_poly);
    let r_predicted = m.min(h.degree() - d);
    let r_observed = matrix.rank();
    Ok(RankReport {
        field,
        phi: h.phi.clone(),
        f: f.to_vec(),
        m,
        d_poly,
        d,
        r_predicted,
        r_observed,
        agrees: r_predicted == r_observed,
        leading_columns_independent: matrix.columns_independent(0, r_observed)?,
        windows_independent: all_windows_independent(&matrix, r_observed)?,
    })
}

/// Predicted and observed rank of a double ideal matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleRankReport {
    pub field: FieldSpec,
    pub phi1: Polynomial,
    pub phi2: Polynomial,
    pub f1: Vec<Scalar>,
    pub f2: Vec<Scalar>,
    pub m: usize,
    /// `gcd(phi1, phi2)`.
    pub phi3: Polynomial,
    pub n3: usize,
    pub e1: usize,
    pub e2: usize,
    pub e: usize,
    /// `gcd(f1, phi1) gcd(f2, phi2) phi3 / gcd(f1 f2, phi3)`.
    pub d_poly: Polynomial,
    pub d: usize,
    pub r_predicted: usize,
    pub r_observed: usize,
    pub agrees: bool,
    pub leading_columns_independent: bool,
    pub windows_independent: bool,
}

impl DoubleRankReport {
    pub fn consistent(&self) -> bool {
        self.agrees
            && self.leading_columns_independent
            && self.windows_independent
            && self.d == self.e1 + self.e2 + self.e
    }
}

/// The gcd-degree bookkeeping shared by the double rank report and the
/// square kernel construction.
#[derive(Clone, Debug)]
pub(crate) struct DoubleDegrees {
    pub phi3: Polynomial,
    pub e1: usize,
    pub e2: usize,
    pub e: usize,
    pub d_poly: Polynomial,
}

pub(crate) fn double_degrees(
    phi1: &Polynomial,
    phi2: &Polynomial,
    f1: &Polynomial,
    f2: &Polynomial,
) -> Result<DoubleDegrees> {
    let g1 = f1.gcd(phi1)?;
    let g2 = f2.gcd(phi2)?;
    let phi3 = phi1.gcd(phi2)?;
    let shared = (f1 * f2).gcd(&phi3)?;
    let d_poly = (&(&g1 * &g2) * &phi3).exact_div(&shared)?;
    let e = phi3.exact_div(&shared)?;
    Ok(DoubleDegrees {
        e1: degree_of(&g1),
        e2: degree_of(&g2),
        e: degree_of(&e),
        phi3,
        d_poly,
    })
}

/// Rank `min{m, n1 + n2 - d}` against Gaussian elimination.
pub fn rank_report_double(
    h1: &RotationMatrix,
    h2: &RotationMatrix,
    f1: &[Scalar],
    f2: &[Scalar],
    m: usize,
) -> Result<DoubleRankReport> {
    h1.phi.require_squarefree("phi1")?;
    h2.phi.require_squarefree("phi2")?;
    let matrix = build_double_ideal(h1, h2, f1, f2, m)?;
    let field = h1.field();
    let deg = double_degrees(
        &h1.phi,
        &h2.phi,
        &vector_poly(field, f1),
        &vector_poly(field, f2),
    )?;
    let d = degree_of(&deg.d_poly);
    let r_predicted = m.min(h1.degree() + h2.degree() - d);
    let r_observed = matrix.rank();
    Ok(DoubleRankReport {
        field,
        phi1: h1.phi.clone(),
        phi2: h2.phi.clone(),
        f1: f1.to_vec(),
        f2: f2.to_vec(),
        m,
        n3: degree_of(&deg.phi3),
        phi3: deg.phi3,
        e1: deg.e1,
        e2: deg.e2,
        e: deg.e,
        d_poly: deg.d_poly,
        d,
        r_predicted,
        r_observed,
        agrees: r_predicted == r_observed,
        leading_columns_independent: matrix.columns_independent(0, r_observed)?,
        windows_independent: all_windows_independent(&matrix, r_observed)?,
    })
}

/// Whether the square `(n1 + n2) x (n1 + n2)` double ideal matrix is
/// invertible, decided from gcds alone.
pub fn full_rank_criterion(
    h1: &RotationMatrix,
    h2: &RotationMatrix,
    f1: &[Scalar],
    f2: &[Scalar],
) -> Result<bool> {
    h1.phi.require_squarefree("phi1")?;
    h2.phi.require_squarefree("phi2")?;
    h1.field().check_same(&h2.field())?;
    h1.check_vector(f1)?;
    h2.check_vector(f2)?;
    let field = h1.field();
    Ok(vector_poly(field, f1).gcd(&h1.phi)?.is_one()
        && vector_poly(field, f2).gcd(&h2.phi)?.is_one()
        && h1.phi.gcd(&h2.phi)?.is_one())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    /// A root of `gcd(f1, phi1)`, supported on the first block.
    FirstBlock,
    /// A root of `gcd(f2, phi2)`, supported on the second block.
    SecondBlock,
    /// A common root `c` of `phi1, phi2` with `f1(c) != 0 != f2(c)`.
    Shared,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelVector {
    pub family: KernelFamily,
    pub root: Scalar,
    pub vector: Vec<Scalar>,
}

fn powers(w: &Scalar, len: usize) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(len);
    let mut acc = w.field().one();
    for _ in 0..len {
        out.push(acc.clone());
        acc = &acc * w;
    }
    out
}

/// Null vectors of the transposed square double ideal matrix, built from the
/// roots of `phi1` and `phi2`. Both root sets must be complete.
pub fn kernel_vectors_square(
    h1: &RotationMatrix,
    h2: &RotationMatrix,
    f1: &[Scalar],
    f2: &[Scalar],
    roots1: &RootSet,
    roots2: &RootSet,
) -> Result<Vec<KernelVector>> {
    h1.field().check_same(&h2.field())?;
    h1.check_vector(f1)?;
    h2.check_vector(f2)?;
    roots1.require_complete_for(&h1.phi)?;
    roots2.require_complete_for(&h2.phi)?;
    let field = h1.field();
    let (n1, n2) = (h1.degree(), h2.degree());
    let (p1, p2) = (vector_poly(field, f1), vector_poly(field, f2));
    let zeros = |k: usize| vec![field.zero(); k];
    let mut out = Vec::new();
    for w in roots1.roots() {
        if p1.eval(w).is_zero() {
            let mut vector = powers(w, n1);
            vector.extend(zeros(n2));
            out.push(KernelVector {
                family: KernelFamily::FirstBlock,
                root: w.clone(),
                vector,
            });
        }
    }
    for v in roots2.roots() {
        if p2.eval(v).is_zero() {
            let mut vector = zeros(n1);
            vector.extend(powers(v, n2));
            out.push(KernelVector {
                family: KernelFamily::SecondBlock,
                root: v.clone(),
                vector,
            });
        }
    }
    for c in roots1.roots().iter().filter(|c| roots2.roots().contains(c)) {
        let (a, b) = (p1.eval(c), p2.eval(c));
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let neg_b = -&b;
        let mut vector: Vec<Scalar> = powers(c, n1).iter().map(|x| &neg_b * x).collect();
        vector.extend(powers(c, n2).iter().map(|x| &a * x));
        out.push(KernelVector {
            family: KernelFamily::Shared,
            root: c.clone(),
            vector,
        });
    }
    Ok(out)
}

/// `V^{rows x n}` with entry `(i, j) = w_j^i`.
pub fn vandermonde(field: FieldSpec, nodes: &[Scalar], rows: usize) -> DenseMatrix {
    let columns = nodes.iter().map(|w| powers(w, rows)).collect();
    DenseMatrix::from_columns(field, rows, columns).expect("vandermonde shape")
}

fn diagonal(field: FieldSpec, values: Vec<Scalar>) -> DenseMatrix {
    let n = values.len();
    let mut m = DenseMatrix::zeros(field, n, n).row_vecs();
    for (i, v) in values.into_iter().enumerate() {
        m[i][i] = v;
    }
    DenseMatrix::from_rows(field, n, m).expect("square diagonal")
}

fn block_diagonal(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let field = a.field();
    let top = a.hstack(&DenseMatrix::zeros(field, a.rows(), b.cols()))?;
    let bottom = DenseMatrix::zeros(field, b.rows(), a.cols()).hstack(b)?;
    top.vstack(&bottom)
}

/// Checks `H*(f)^T V^n = V^{m x n} diag(f(w_1), ..., f(w_n))` entrywise.
pub fn verify_vandermonde_identity(
    h: &RotationMatrix,
    f: &[Scalar],
    m: usize,
    roots: &RootSet,
) -> Result<bool> {
    roots.require_complete_for(&h.phi)?;
    let field = h.field();
    let ideal = build_ideal_matrix(h, f, m)?;
    let nodes = roots.roots();
    let lhs = ideal
        .transpose()
        .mul(&vandermonde(field, nodes, h.degree()))?;
    let fp = vector_poly(field, f);
    let diag = diagonal(field, nodes.iter().map(|w| fp.eval(w)).collect());
    let rhs = vandermonde(field, nodes, m).mul(&diag)?;
    Ok(lhs == rhs)
}

/// The two-block analogue: the transposed double ideal matrix times
/// `diag(V1^{n1}, V2^{n2})` equals `[V1^{m x n1}, V2^{m x n2}]` times the
/// diagonal of `f1(w_i)` and `f2(v_j)`.
pub fn verify_double_vandermonde_identity(
    h1: &RotationMatrix,
    h2: &RotationMatrix,
    f1: &[Scalar],
    f2: &[Scalar],
    m: usize,
    roots1: &RootSet,
    roots2: &RootSet,
) -> Result<bool> {
    roots1.require_complete_for(&h1.phi)?;
    roots2.require_complete_for(&h2.phi)?;
    let field = h1.field();
    let double = build_double_ideal(h1, h2, f1, f2, m)?;
    let (w, v) = (roots1.roots(), roots2.roots());
    let blocks = block_diagonal(
        &vandermonde(field, w, h1.degree()),
        &vandermonde(field, v, h2.degree()),
    )?;
    let lhs = double.transpose().mul(&blocks)?;
    let (p1, p2) = (vector_poly(field, f1), vector_poly(field, f2));
    let values = w
        .iter()
        .map(|x| p1.eval(x))
        .chain(v.iter().map(|x| p2.eval(x)))
        .collect();
    let rhs = vandermonde(field, w, m)
        .hstack(&vandermonde(field, v, m))?
        .mul(&diagonal(field, values))?;
    Ok(lhs == rhs)
}

/// `H^T (1, w, ..., w^{n-1}) = w (1, w, ..., w^{n-1})` for every root `w`.
pub fn transpose_eigenvectors_hold(h: &RotationMatrix, roots: &RootSet) -> Result<bool> {
    if roots.poly() != h.phi() {
        return Err(Error::RootSetMismatch);
    }
    let ht = h.matrix().transpose();
    for w in roots.roots() {
        let v = powers(w, h.degree());
        let scaled: Vec<Scalar> = v.iter().map(|x| w * x).collect();
        if ht.mul_vec(&v)? != scaled {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }
    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }
    fn poly(field: FieldSpec, c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(field, c)
    }
    fn vec_of(field: FieldSpec, c: &[i64]) -> Vec<Scalar> {
        c.iter().map(|&x| field.from_i64(x)).collect()
    }
    fn rot(field: FieldSpec, c: &[i64]) -> RotationMatrix {
        RotationMatrix::new(poly(field, c)).unwrap()
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(
            rot(q(), &[-1, 0, 1]).matrix(),
            &DenseMatrix::from_i64s(q(), &[&[0, 1], &[1, 0]])
        );
        assert_eq!(
            rot(q(), &[-1, -1, 0, 1]).matrix(),
            &DenseMatrix::from_i64s(q(), &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]])
        );
        assert_eq!(
            rot(q(), &[-5, 1]).matrix(),
            &DenseMatrix::from_i64s(q(), &[&[5]])
        );
    }

    #[test]
    fn rotation_rejects_bad_phi() {
        assert_eq!(
            RotationMatrix::new(poly(q(), &[1, 0, -1])).unwrap_err(),
            Error::NotMonic
        );
        assert_eq!(
            RotationMatrix::new(poly(q(), &[0, 1])).unwrap_err(),
            Error::ZeroConstantTerm
        );
        assert_eq!(
            RotationMatrix::new(poly(q(), &[1])).unwrap_err(),
            Error::DegreeZero
        );
        assert_eq!(
            RotationMatrix::new(Polynomial::zero(q())).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn rotation_acts_as_multiplication_by_x() {
        let f5 = fp(5);
        let h = rot(f5, &[2, 3, 0, 1]);
        let f = vec_of(f5, &[1, 4, 2]);
        let via_matrix = h.matrix().mul_vec(&f).unwrap();
        let via_poly = (&Polynomial::x(f5) * &Polynomial::new(f5, f))
            .rem(h.phi())
            .unwrap()
            .to_vector(3);
        assert_eq!(via_matrix, via_poly);
    }

    #[test]
    fn ideal_matrix_examples() {
        let h = rot(q(), &[-1, 0, 1]);
        assert_eq!(
            build_ideal_matrix(&h, &vec_of(q(), &[1, 0]), 3).unwrap(),
            DenseMatrix::from_i64s(q(), &[&[1, 0, 1], &[0, 1, 0]])
        );
        // x^4 - 1 with f = e_1 gives the basic circulant permutation.
        let h = rot(q(), &[-1, 0, 0, 0, 1]);
        let m = build_ideal_matrix(&h, &vec_of(q(), &[1, 0, 0, 0]), 4).unwrap();
        assert_eq!(m, DenseMatrix::identity(q(), 4));
        let m = build_ideal_matrix(&h, &vec_of(q(), &[0, 1, 0, 0]), 4).unwrap();
        assert_eq!(m, h.matrix().clone());
        let z = build_ideal_matrix(&h, &vec_of(q(), &[0, 0, 0, 0]), 6).unwrap();
        assert!(z.is_zero() && z.rows() == 4 && z.cols() == 6);
    }

    #[test]
    fn ideal_matrix_rejects_bad_shape() {
        let h = rot(q(), &[-1, 0, 1]);
        assert_eq!(
            build_ideal_matrix(&h, &vec_of(q(), &[1, 0]), 0).unwrap_err(),
            Error::EmptyColumnCount
        );
        assert!(matches!(
            build_ideal_matrix(&h, &vec_of(q(), &[1]), 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_rank_examples() {
        let r = rank_report_single(&rot(q(), &[-1, 0, 1]), &vec_of(q(), &[1, 1]), 2).unwrap();
        assert_eq!(r.d_poly, poly(q(), &[1, 1]));
        assert_eq!((r.d, r.r_predicted, r.r_observed), (1, 1, 1));
        assert!(r.consistent());

        let f2 = fp(2);
        let r = rank_report_single(&rot(f2, &[1, 0, 0, 1]), &vec_of(f2, &[1, 1, 0]), 3).unwrap();
        assert_eq!((r.d, r.r_predicted, r.r_observed), (1, 2, 2));
        assert!(r.consistent());

        let r = rank_report_single(&rot(f2, &[1, 0, 0, 1]), &vec_of(f2, &[0, 0, 0]), 4).unwrap();
        assert_eq!((r.d, r.r_predicted, r.r_observed), (3, 0, 0));
        assert!(r.consistent());
    }

    #[test]
    fn rank_reports_require_squarefree_phi() {
        let h = rot(q(), &[1, 2, 1]);
        assert!(matches!(
            rank_report_single(&h, &vec_of(q(), &[1, 0]), 2),
            Err(Error::NotSquarefree(_))
        ));
        let ok = rot(q(), &[-1, 0, 1]);
        assert!(matches!(
            rank_report_double(&ok, &h, &vec_of(q(), &[1, 0]), &vec_of(q(), &[1, 0]), 2),
            Err(Error::NotSquarefree(_))
        ));
    }

    #[test]
    fn double_ideal_examples() {
        let (h1, h2) = (rot(q(), &[-1, 0, 1]), rot(q(), &[2, -3, 1]));
        let e1 = vec_of(q(), &[1, 0]);
        let m = build_double_ideal(&h1, &h2, &e1, &e1, 4).unwrap();
        assert_eq!((m.rows(), m.cols(), m.rank()), (4, 4, 3));

        let z = vec_of(q(), &[0, 0]);
        assert!(build_double_ideal(&h1, &h2, &z, &z, 3).unwrap().is_zero());

        let f = vec_of(q(), &[2, 1]);
        let single = build_ideal_matrix(&h1, &f, 5).unwrap();
        let double = build_double_ideal(&h1, &h1, &f, &f, 5).unwrap();
        assert_eq!(double.rank(), single.rank());

        let h3 = rot(fp(3), &[1, 1]);
        assert!(matches!(
            build_double_ideal(&h1, &h3, &e1, &vec_of(fp(3), &[1]), 2),
            Err(Error::FieldMismatch(..))
        ));
    }

    #[test]
    fn double_rank_examples() {
        let f2 = fp(2);
        let r = rank_report_double(
            &rot(f2, &[1, 0, 0, 1]),
            &rot(f2, &[1, 1, 1]),
            &vec_of(f2, &[1, 0, 0]),
            &vec_of(f2, &[1, 0]),
            6,
        )
        .unwrap();
        assert_eq!(r.phi3, poly(f2, &[1, 1, 1]));
        assert_eq!((r.e1, r.e2, r.e, r.d, r.r_predicted), (0, 0, 2, 2, 3));
        assert_eq!(r.r_observed, 3);
        assert!(r.consistent());

        let r = rank_report_double(
            &rot(q(), &[-1, 0, 1]),
            &rot(q(), &[-4, 0, 1]),
            &vec_of(q(), &[1, 0]),
            &vec_of(q(), &[1, 0]),
            4,
        )
        .unwrap();
        assert!(r.phi3.is_one());
        assert_eq!((r.d, r.r_predicted, r.r_observed), (0, 4, 4));

        let z = vec_of(q(), &[0, 0]);
        let r =
            rank_report_double(&rot(q(), &[-1, 0, 1]), &rot(q(), &[-4, 0, 1]), &z, &z, 4).unwrap();
        assert_eq!((r.d, r.r_predicted, r.r_observed), (4, 0, 0));
        assert!(r.consistent());
    }

    #[test]
    fn full_rank_examples() {
        let one = vec_of(q(), &[1, 0]);
        let (a, b) = (rot(q(), &[-1, 0, 1]), rot(q(), &[-4, 0, 1]));
        assert!(full_rank_criterion(&a, &b, &one, &one).unwrap());
        assert_eq!(build_double_ideal(&a, &b, &one, &one, 4).unwrap().rank(), 4);

        assert!(!full_rank_criterion(&a, &a, &one, &one).unwrap());
        assert_eq!(build_double_ideal(&a, &a, &one, &one, 4).unwrap().rank(), 2);

        assert!(!full_rank_criterion(&a, &b, &vec_of(q(), &[0, 0]), &one).unwrap());
    }

    fn annihilates(
        h1: &RotationMatrix,
        h2: &RotationMatrix,
        f1: &[Scalar],
        f2: &[Scalar],
        v: &[Scalar],
    ) -> bool {
        let m = h1.degree() + h2.degree();
        let t = build_double_ideal(h1, h2, f1, f2, m).unwrap().transpose();
        t.mul_vec(v).unwrap().iter().all(Scalar::is_zero)
    }

    #[test]
    fn kernel_first_family_over_f7() {
        let f7 = fp(7);
        let (h1, h2) = (rot(f7, &[-1, 0, 1]), rot(f7, &[-4, 0, 1]));
        let (f1, f2) = (vec_of(f7, &[-1, 1]), vec_of(f7, &[1, 0]));
        let r1 = h1.phi().roots().unwrap();
        let r2 = h2.phi().roots().unwrap();
        assert_eq!(r1.roots(), &vec_of(f7, &[1, 6])[..]);
        assert_eq!(r2.roots(), &vec_of(f7, &[2, 5])[..]);
        let ks = kernel_vectors_square(&h1, &h2, &f1, &f2, &r1, &r2).unwrap();
        assert_eq!(ks.len(), 1);
        assert_eq!(ks[0].family, KernelFamily::FirstBlock);
        assert_eq!(ks[0].vector, vec_of(f7, &[1, 1, 0, 0]));
        assert!(annihilates(&h1, &h2, &f1, &f2, &ks[0].vector));
    }

    #[test]
    fn kernel_shared_family_over_q() {
        let (h1, h2) = (rot(q(), &[-1, 0, 1]), rot(q(), &[2, -3, 1]));
        let one = vec_of(q(), &[1, 0]);
        let r1 = h1.phi().roots().unwrap();
        let r2 = h2.phi().roots().unwrap();
        let ks = kernel_vectors_square(&h1, &h2, &one, &one, &r1, &r2).unwrap();
        assert_eq!(ks.len(), 1);
        assert_eq!(ks[0].family, KernelFamily::Shared);
        assert_eq!(ks[0].vector, vec_of(q(), &[-1, -1, 1, 1]));
        assert!(annihilates(&h1, &h2, &one, &one, &ks[0].vector));
    }

    #[test]
    fn kernel_empty_in_full_rank_case() {
        let (h1, h2) = (rot(q(), &[-1, 0, 1]), rot(q(), &[-4, 0, 1]));
        let one = vec_of(q(), &[1, 0]);
        let r1 = h1.phi().roots().unwrap();
        let r2 = h2.phi().roots().unwrap();
        assert!(kernel_vectors_square(&h1, &h2, &one, &one, &r1, &r2)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn kernel_refuses_incomplete_roots() {
        let f2 = fp(2);
        let (h1, h2) = (rot(f2, &[1, 1, 1]), rot(f2, &[1, 1]));
        let r1 = h1.phi().roots().unwrap();
        let r2 = h2.phi().roots().unwrap();
        let err =
            kernel_vectors_square(&h1, &h2, &vec_of(f2, &[1, 0]), &vec_of(f2, &[1]), &r1, &r2);
        assert_eq!(
            err.unwrap_err(),
            Error::IncompleteRoots {
                found: 0,
                degree: 2
            }
        );
        let err =
            kernel_vectors_square(&h1, &h2, &vec_of(f2, &[1, 0]), &vec_of(f2, &[1]), &r2, &r2);
        assert_eq!(err.unwrap_err(), Error::RootSetMismatch);
    }

    #[test]
    fn vandermonde_examples() {
        let h = rot(q(), &[-1, 0, 1]);
        let roots = h.phi().roots().unwrap();
        assert!(verify_vandermonde_identity(&h, &vec_of(q(), &[1, 1]), 3, &roots).unwrap());
        assert!(verify_vandermonde_identity(&h, &vec_of(q(), &[0, 0]), 3, &roots).unwrap());
        assert!(transpose_eigenvectors_hold(&h, &roots).unwrap());

        let f5 = fp(5);
        let h = rot(f5, &[1, 0, 1]);
        let roots = h.phi().roots().unwrap();
        for f in [[1, 0], [3, 4], [0, 2]] {
            assert!(verify_vandermonde_identity(&h, &vec_of(f5, &f), 2, &roots).unwrap());
        }

        // (x - 1)(x - 3) shares the root 3 with x^2 + 1
        let g = rot(f5, &[3, -4, 1]);
        let rg = g.phi().roots().unwrap();
        assert!(rg.is_complete());
        assert!(verify_double_vandermonde_identity(
            &h,
            &g,
            &vec_of(f5, &[1, 2]),
            &vec_of(f5, &[4, 1]),
            5,
            &roots,
            &rg
        )
        .unwrap());
    }

    #[test]
    fn vandermonde_refuses_incomplete_roots() {
        let h = rot(q(), &[1, 0, 1]);
        let roots = h.phi().roots().unwrap();
        assert!(matches!(
            verify_vandermonde_identity(&h, &vec_of(q(), &[1, 0]), 2, &roots),
            Err(Error::IncompleteRoots { .. })
        ));
    }
}
