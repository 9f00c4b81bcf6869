//! Symmetric bilinear forms `B(x, y) = x^T A y` over GF(q).
//!
//! Odd q is classified by rank and the square-class invariant ε; q = 2 by
//! rank and whether the form is alternating (dot product vs hyperbolic).
//! Forms over GF(2^m) with m > 1 get arithmetic but no classification.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Felt, Field, FieldCtx, FieldSpec};
use crate::linalg::{kernel_basis, span_basis, Matrix, Vector};

/// Largest `q^n` scanned exhaustively by [`BilinearForm::find_isotropic`].
pub const ISOTROPIC_SCAN_LIMIT: u64 = 1_000_000;

/// Square-class tag of a form over an odd-order field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Epsilon {
    Zero,
    One,
    Gamma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinaryType {
    Dot,
    Hyperbolic,
    Degenerate,
}

/// Label of a non-degenerate equivalence class, as used on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    One,
    Gamma,
    Dot,
    Hyperbolic,
}

impl FormKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FormKind::One => "one",
            FormKind::Gamma => "gamma",
            FormKind::Dot => "dot",
            FormKind::Hyperbolic => "hyperbolic",
        }
    }

    pub fn is_binary(self) -> bool {
        matches!(self, FormKind::Dot | FormKind::Hyperbolic)
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "1" => Ok(FormKind::One),
            "gamma" => Ok(FormKind::Gamma),
            "dot" => Ok(FormKind::Dot),
            "hyperbolic" | "hyp" => Ok(FormKind::Hyperbolic),
            other => Err(Error::BadClass(format!("unknown class {other:?}"))),
        }
    }
}

/// Classification invariants of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormClass {
    pub n: usize,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<Epsilon>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub binary_type: Option<BinaryType>,
}

impl FormClass {
    pub fn is_degenerate(&self) -> bool {
        self.rank < self.n
    }

    /// The non-degenerate class label, if there is one.
    pub fn kind(&self) -> Option<FormKind> {
        match (self.epsilon, self.binary_type) {
            (Some(Epsilon::One), _) => Some(FormKind::One),
            (Some(Epsilon::Gamma), _) => Some(FormKind::Gamma),
            (_, Some(BinaryType::Dot)) => Some(FormKind::Dot),
            (_, Some(BinaryType::Hyperbolic)) => Some(FormKind::Hyperbolic),
            _ => None,
        }
    }
}

/// A symmetric bilinear form given by its Gram matrix.
#[derive(Clone)]
pub struct BilinearForm {
    matrix: Matrix,
    class: OnceLock<FormClass>,
}

impl PartialEq for BilinearForm {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl fmt::Debug for BilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("BilinearForm").field(&self.matrix).finish()
    }
}

/// Outcome of restricting a form to `{v, w}^⊥`.
#[derive(Clone, Debug)]
pub struct Restriction {
    /// Echelonized basis of the complement.
    pub basis: Vec<Vector>,
    /// Gram matrix of the form on `basis`.
    pub form: BilinearForm,
    /// `B(v,w)^2 != B(v,v) B(w,w)`.
    pub hypothesis: bool,
    pub degenerate: bool,
    pub base_degenerate: bool,
    pub class: Option<FormClass>,
    /// Set when `v, w` fall under the ε-preservation case (odd q).
    pub epsilon_preserved: Option<bool>,
    /// Set when `v, w` fall under the hyperbolic-type case (q = 2, even n).
    pub binary_type_preserved: Option<bool>,
}

impl Restriction {
    /// True when every applicable conclusion of the restriction lemma holds.
    pub fn lemma_holds(&self) -> bool {
        if self.base_degenerate {
            return true;
        }
        (!self.hypothesis || !self.degenerate)
            && self.epsilon_preserved != Some(false)
            && self.binary_type_preserved != Some(false)
    }
}

/// Wire form of a bilinear form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormRecord {
    pub field: FieldSpec,
    pub n: usize,
    pub matrix: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub class: Option<ClassRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub binary_type: Option<BinaryType>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub rank: usize,
    pub epsilon: Epsilon,
}

impl BilinearForm {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ShapeMismatch("Gram matrix must be square".into()));
        }
        if !matrix.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(BilinearForm {
            matrix,
            class: OnceLock::new(),
        })
    }

    /// The standard dot product on `F_q^n`.
    pub fn dot(field: &Field, n: usize) -> Self {
        Self::new(Matrix::identity(field, n)).expect("identity is symmetric")
    }

    /// The hyperbolic form `H ⊕ … ⊕ H` on `F_q^n`, `n` even.
    pub fn hyperbolic(field: &Field, n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::BadClass(
                "hyperbolic form needs even dimension".into(),
            ));
        }
        let mut m = Matrix::zeros(field, n, n);
        for i in (0..n).step_by(2) {
            m.set(i, i + 1, Felt::ONE);
            m.set(i + 1, i, Felt::ONE);
        }
        Self::new(m)
    }

    /// The canonical representative of a non-degenerate class.
    pub fn canonical(field: &Field, n: usize, kind: FormKind) -> Result<Self> {
        Self::new(canonical_matrix(field, n, kind)?)
    }

    pub fn from_record(rec: &FormRecord) -> Result<Self> {
        let field = FieldCtx::from_spec(&rec.field)?;
        Self::from_rows(&field, rec.n, &rec.matrix)
    }

    pub fn from_rows(field: &Field, n: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let m = if n == 0 {
            Matrix::zeros(field, 0, 0)
        } else {
            Matrix::from_rows(field, rows)?
        };
        if m.rows() != n || m.cols() != n {
            return Err(Error::ShapeMismatch(format!("expected a {n}x{n} matrix")));
        }
        Self::new(m)
    }

    pub fn to_record(&self) -> FormRecord {
        let class = self.try_classify();
        FormRecord {
            field: self.field().spec(),
            n: self.n(),
            matrix: self.matrix.to_rows(),
            class: class.and_then(|c| {
                c.epsilon.map(|epsilon| ClassRecord {
                    rank: c.rank,
                    epsilon,
                })
            }),
            binary_type: class.and_then(|c| c.binary_type),
        }
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    #[inline]
    pub fn field(&self) -> &Field {
        self.matrix.field()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// `x^T A y` without shape checks.
    #[inline]
    pub fn apply(&self, x: &Vector, y: &Vector) -> Felt {
        let f = &**self.field();
        let n = self.n();
        let mut acc = Felt::ZERO;
        for i in 0..n {
            let xi = x.0[i];
            if xi.is_zero() {
                continue;
            }
            let mut row = Felt::ZERO;
            for j in 0..n {
                let yj = y.0[j];
                if !yj.is_zero() {
                    row = f.add(row, f.mul(self.matrix.get(i, j), yj));
                }
            }
            acc = f.add(acc, f.mul(xi, row));
        }
        acc
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> Result<Felt> {
        if x.len() != self.n() || y.len() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "vectors of length {} and {} for a form of dimension {}",
                x.len(),
                y.len(),
                self.n()
            )));
        }
        Ok(self.apply(x, y))
    }

    pub fn norm(&self, x: &Vector) -> Felt {
        self.apply(x, x)
    }

    pub fn det(&self) -> Felt {
        self.matrix.det().expect("square")
    }

    pub fn is_degenerate(&self) -> bool {
        self.det().is_zero()
    }

    /// The ε invariant (odd q only).
    pub fn epsilon(&self) -> Result<Epsilon> {
        let f = &**self.field();
        if !f.is_odd() {
            return Err(Error::EvenField);
        }
        let det = self.det();
        if det.is_zero() {
            return Ok(Epsilon::Zero);
        }
        let k = self.n() / 2;
        let t = if k % 2 == 0 { det } else { f.neg(det) };
        Ok(if f.is_square(t) {
            Epsilon::One
        } else {
            Epsilon::Gamma
        })
    }

    /// Whether `B(x, x) = 0` for every `x` (all diagonal Gram entries zero).
    pub fn is_alternating(&self) -> bool {
        self.matrix.diagonal_entries().iter().all(|d| d.is_zero())
    }

    /// Rank plus ε (odd q) or binary type (q = 2), computed once and cached.
    pub fn classify(&self) -> FormClass {
        *self.class.get_or_init(|| {
            let f = &**self.field();
            let n = self.n();
            let rank = self.matrix.rank();
            let mut class = FormClass {
                n,
                rank,
                epsilon: None,
                binary_type: None,
            };
            if f.is_odd() {
                class.epsilon = Some(self.epsilon().expect("odd field"));
            } else if f.q() == 2 {
                class.binary_type = Some(if rank < n {
                    BinaryType::Degenerate
                } else if self.is_alternating() {
                    BinaryType::Hyperbolic
                } else {
                    BinaryType::Dot
                });
            }
            class
        })
    }

    fn try_classify(&self) -> Option<FormClass> {
        let f = self.field();
        (f.is_odd() || f.q() == 2).then(|| self.classify())
    }

    /// Congruent diagonalization: returns `(D, M)` with `M^T A M = D`.
    pub fn diagonalize(&self) -> Result<(Matrix, Matrix)> {
        let field = self.field().clone();
        if !field.is_odd() {
            return Err(Error::EvenField);
        }
        let n = self.n();
        if self.matrix.is_diagonal() {
            return Ok((self.matrix.clone(), Matrix::identity(&field, n)));
        }
        let f = &*field;
        let mut a = self.matrix.clone();
        let mut m = Matrix::identity(&field, n);
        for i in 0..n {
            if a.get(i, i).is_zero() {
                let Some(j) = (i + 1..n).find(|&j| !a.get(i, j).is_zero()) else {
                    continue;
                };
                if !a.get(j, j).is_zero() {
                    swap_basis(&mut a, &mut m, i, j);
                } else {
                    // B(v+w, v+w) = 2 B(v,w) != 0 in odd characteristic
                    add_basis(f, &mut a, &mut m, i, j, Felt::ONE);
                }
            }
            let inv = f.inv(a.get(i, i))?;
            for j in i + 1..n {
                let c = f.neg(f.mul(a.get(i, j), inv));
                if !c.is_zero() {
                    add_basis(f, &mut a, &mut m, j, i, c);
                }
            }
        }
        debug_assert!(a.is_diagonal());
        Ok((a, m))
    }

    /// Transformation `T` with `T^T A T` equal to the normal form of the class
    /// (`diag(1, …, 1, δ) ⊕ 0` for odd q, `I ⊕ 0` or `H ⊕ … ⊕ H ⊕ 0` for q = 2).
    fn normal_basis(&self) -> Result<(Matrix, NormalForm)> {
        let field = self.field().clone();
        if field.is_odd() {
            odd_normal_basis(self)
        } else if field.q() == 2 {
            binary_normal_basis(self)
        } else {
            Err(Error::UnsupportedField)
        }
    }

    /// Orthogonal complement `X^⊥`, as an echelonized basis.
    pub fn orthogonal_complement(&self, xs: &[Vector]) -> Result<Vec<Vector>> {
        let rows = xs
            .iter()
            .map(|x| {
                if x.len() != self.n() {
                    return Err(Error::ShapeMismatch("vector length".into()));
                }
                self.matrix.mat_vec(x)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(kernel_basis(&Matrix::from_row_vectors(
            self.field(),
            self.n(),
            &rows,
        )))
    }

    /// The form restricted to the span of `basis`, as a Gram matrix.
    pub fn restrict(&self, basis: &[Vector]) -> BilinearForm {
        let k = basis.len();
        let mut g = Matrix::zeros(self.field(), k, k);
        for i in 0..k {
            for j in i..k {
                let v = self.apply(&basis[i], &basis[j]);
                g.set(i, j, v);
                g.set(j, i, v);
            }
        }
        BilinearForm::new(g).expect("Gram matrices are symmetric")
    }

    /// Restricts to `{v, w}^⊥` and reports the restriction-lemma flags.
    pub fn restrict_to_complement(&self, v: &Vector, w: &Vector) -> Result<Restriction> {
        let field = self.field().clone();
        let f = &*field;
        let n = self.n();
        if v.len() != n || w.len() != n {
            return Err(Error::ShapeMismatch("vector length".into()));
        }
        if span_basis(&field, n, &[v.clone(), w.clone()])?.len() < 2 {
            return Err(Error::LinearlyDependent);
        }
        let a = self.apply(v, v);
        let b = self.apply(v, w);
        let c = self.apply(w, w);
        let hypothesis = f.mul(b, b) != f.mul(a, c);
        let basis = self.orthogonal_complement(&[v.clone(), w.clone()])?;
        let form = self.restrict(&basis);
        let degenerate = form.is_degenerate();
        let base_degenerate = self.is_degenerate();
        let class = form.try_classify();

        let mut epsilon_preserved = None;
        let mut binary_type_preserved = None;
        if !base_degenerate && !b.is_zero() {
            if f.is_odd() && (c.is_zero() || a.is_zero()) {
                epsilon_preserved = Some(form.epsilon()? == self.epsilon()?);
            }
            if f.q() == 2 && n % 2 == 0 && a.is_zero() && c.is_zero() {
                let hyp = |cl: FormClass| cl.binary_type == Some(BinaryType::Hyperbolic);
                binary_type_preserved = Some(hyp(form.classify()) == hyp(self.classify()));
            }
        }
        Ok(Restriction {
            basis,
            form,
            hypothesis,
            degenerate,
            base_degenerate,
            class,
            epsilon_preserved,
            binary_type_preserved,
        })
    }

    /// A nonzero self-orthogonal vector, or `None` if the form is anisotropic.
    pub fn find_isotropic(&self) -> Result<Option<Vector>> {
        self.find_isotropic_with_limit(ISOTROPIC_SCAN_LIMIT)
    }

    /// As [`Self::find_isotropic`], scanning exhaustively only while `q^n <= limit`.
    pub fn find_isotropic_with_limit(&self, limit: u64) -> Result<Option<Vector>> {
        if self.is_degenerate() {
            return Err(Error::Degenerate);
        }
        let field = self.field().clone();
        let f = &*field;
        let n = self.n();
        let total = (f.q() as u64).checked_pow(n as u32);
        if let Some(total) = total.filter(|&t| t <= limit) {
            return Ok((1..total)
                .map(|i| Vector::from_index(i, f.q(), n))
                .find(|v| self.norm(v).is_zero()));
        }
        if !f.is_odd() {
            return Err(Error::TooLarge(format!(
                "isotropic scan over {}^{n}",
                f.q()
            )));
        }
        let (d, m) = self.diagonalize()?;
        let d = d.diagonal_entries();
        let mut coords = Vector::zeros(n);
        match n {
            0 | 1 => return Ok(None),
            2 => {
                let t = f.neg(f.div(d[1], d[0])?);
                let Some(s) = f.sqrt(t) else { return Ok(None) };
                coords.0[0] = s;
                coords.0[1] = Felt::ONE;
            }
            _ => {
                // d0 x^2 + d1 y^2 = -d2 always has a solution over a finite field
                let target = f.neg(d[2]);
                let (x, y) = f
                    .elements()
                    .find_map(|x| {
                        let rest = f.sub(target, f.mul(d[0], f.mul(x, x)));
                        f.sqrt(f.div(rest, d[1]).ok()?).map(|y| (x, y))
                    })
                    .ok_or_else(|| Error::InvariantViolation("ternary form without zero".into()))?;
                coords.0[0] = x;
                coords.0[1] = y;
                coords.0[2] = Felt::ONE;
            }
        }
        Ok(Some(m.mat_vec(&coords)?))
    }

    /// Dimension of a maximal totally isotropic subspace, found by splitting
    /// off hyperbolic planes.
    pub fn witt_index(&self) -> Result<usize> {
        if self.is_degenerate() {
            return Err(Error::Degenerate);
        }
        let field = self.field().clone();
        let mut g = self.clone();
        let mut index = 0;
        while g.n() > 0 {
            let Some(v) = g.find_isotropic()? else { break };
            let k = g.n();
            let w = (0..k)
                .map(|j| Vector::unit(k, j))
                .find(|e| !g.apply(&v, e).is_zero())
                .ok_or(Error::Degenerate)?;
            let basis = g.orthogonal_complement(&[v, w])?;
            if basis.len() + 2 != k {
                return Err(Error::InvariantViolation(
                    "hyperbolic plane did not split".into(),
                ));
            }
            g = g.restrict(&basis);
            index += 1;
        }
        let _ = field;
        Ok(index)
    }
}

/// Gram matrix of the canonical representative of a non-degenerate class.
///
/// Odd n: `diag(1, -1, …, 1, -1, ε)`; even n: `diag(1, -1, …, 1, -1, 1, -ε)`;
/// q = 2: `I_n` or `H ⊕ … ⊕ H`.
pub fn canonical_matrix(field: &Field, n: usize, kind: FormKind) -> Result<Matrix> {
    let f = &**field;
    if n == 0 {
        return Err(Error::BadClass("dimension must be positive".into()));
    }
    if f.is_odd() {
        let eps = match kind {
            FormKind::One => Felt::ONE,
            FormKind::Gamma => f.canonical_nonsquare()?,
            other => {
                return Err(Error::BadClass(format!(
                    "{other} is not a class over odd q"
                )));
            }
        };
        let alternating = |i: usize| {
            if i % 2 == 0 {
                Felt::ONE
            } else {
                f.neg(Felt::ONE)
            }
        };
        let diag: Vec<Felt> = (0..n)
            .map(|i| {
                if n % 2 == 1 {
                    if i + 1 == n {
                        eps
                    } else {
                        alternating(i)
                    }
                } else if i + 2 == n {
                    Felt::ONE
                } else if i + 1 == n {
                    f.neg(eps)
                } else {
                    alternating(i)
                }
            })
            .collect();
        Ok(Matrix::diagonal(field, &diag))
    } else if f.q() == 2 {
        match kind {
            FormKind::Dot => Ok(Matrix::identity(field, n)),
            FormKind::Hyperbolic => BilinearForm::hyperbolic(field, n).map(|b| b.matrix),
            other => Err(Error::BadClass(format!(
                "{other} is not a class over GF(2)"
            ))),
        }
    } else {
        Err(Error::UnsupportedField)
    }
}

/// Dimension of the largest orthogonal subspace for a non-degenerate class.
pub fn d_n_formula(q: u32, n: usize, kind: FormKind) -> Result<usize> {
    if q % 2 == 1 {
        match kind {
            FormKind::One | FormKind::Gamma if n % 2 == 1 => Ok((n - 1) / 2),
            FormKind::One => Ok(n / 2),
            FormKind::Gamma if n >= 2 => Ok(n / 2 - 1),
            _ => Err(Error::BadClass(format!(
                "{kind} in dimension {n} over odd q"
            ))),
        }
    } else {
        match kind {
            FormKind::Hyperbolic if n % 2 == 0 => Ok(n / 2),
            FormKind::Dot => Ok(n / 2),
            _ => Err(Error::BadClass(format!(
                "{kind} in dimension {n} over even q"
            ))),
        }
    }
}

/// Replaces basis vector `i` with `v_i + c v_j`: `A <- E^T A E`, `M <- M E`.
fn add_basis(f: &FieldCtx, a: &mut Matrix, m: &mut Matrix, i: usize, j: usize, c: Felt) {
    let n = a.rows();
    for r in 0..n {
        let v = f.add(a.get(r, i), f.mul(c, a.get(r, j)));
        a.set(r, i, v);
    }
    for col in 0..n {
        let v = f.add(a.get(i, col), f.mul(c, a.get(j, col)));
        a.set(i, col, v);
    }
    for r in 0..m.rows() {
        let v = f.add(m.get(r, i), f.mul(c, m.get(r, j)));
        m.set(r, i, v);
    }
}

fn swap_basis(a: &mut Matrix, m: &mut Matrix, i: usize, j: usize) {
    let n = a.rows();
    for r in 0..n {
        let (x, y) = (a.get(r, i), a.get(r, j));
        a.set(r, i, y);
        a.set(r, j, x);
    }
    for c in 0..n {
        let (x, y) = (a.get(i, c), a.get(j, c));
        a.set(i, c, y);
        a.set(j, c, x);
    }
    for r in 0..m.rows() {
        let (x, y) = (m.get(r, i), m.get(r, j));
        m.set(r, i, y);
        m.set(r, j, x);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum NormalForm {
    /// `diag(1, …, 1, δ) ⊕ 0`, `delta_square` = δ is a square.
    Odd { rank: usize, delta_square: bool },
    /// `I_rank ⊕ 0` or `H^{rank/2} ⊕ 0`.
    Binary { rank: usize, alternating: bool },
}

/// Columns `x = (u, v)` and `y = (-b v, a u)` with `a u^2 + b v^2 = 1`, so
/// `K^T diag(a, b) K = diag(1, ab)`.
fn two_by_two_move(f: &FieldCtx, a: Felt, b: Felt) -> Result<[[Felt; 2]; 2]> {
    let (u, v) = represent_weighted_squares(f, a, b, Felt::ONE)?;
    Ok([[u, f.neg(f.mul(b, v))], [v, f.mul(a, u)]])
}

/// Finds `(u, v)` with `a u^2 + b v^2 = c` by scanning `u`.
pub fn represent_weighted_squares(f: &FieldCtx, a: Felt, b: Felt, c: Felt) -> Result<(Felt, Felt)> {
    let inv_b = f.inv(b)?;
    f.elements()
        .find_map(|u| {
            let rest = f.mul(f.sub(c, f.mul(a, f.mul(u, u))), inv_b);
            f.sqrt(rest).map(|v| (u, v))
        })
        .ok_or_else(|| Error::InvariantViolation("binary form is not universal".into()))
}

/// The explicit plane witness `[[α, β], [γ', β]]` satisfying
/// `M^T diag(1, -1) M = [[a, b], [b, 0]]`, from `α² − γ'² = a`, `β(α − γ') = b`.
pub fn hyperbolic_plane_witness(field: &Field, a: Felt, b: Felt) -> Result<Matrix> {
    let f = &**field;
    if !f.is_odd() {
        return Err(Error::EvenField);
    }
    if b.is_zero() {
        return Err(Error::Degenerate);
    }
    let (alpha, gamma) = f
        .elements()
        .find_map(|alpha| {
            let s = f.sqrt(f.sub(f.mul(alpha, alpha), a))?;
            [s, f.neg(s)]
                .into_iter()
                .find(|&g| g != alpha)
                .map(|g| (alpha, g))
        })
        .ok_or_else(|| Error::InvariantViolation("no difference-of-squares split".into()))?;
    let beta = f.div(b, f.sub(alpha, gamma))?;
    let mut m = Matrix::zeros(field, 2, 2);
    m.set(0, 0, alpha);
    m.set(0, 1, beta);
    m.set(1, 0, gamma);
    m.set(1, 1, beta);
    Ok(m)
}

fn odd_normal_basis(form: &BilinearForm) -> Result<(Matrix, NormalForm)> {
    let field = form.field().clone();
    let f = &*field;
    let n = form.n();
    let (d, p) = form.diagonalize()?;
    let diag = d.diagonal_entries();
    // nonzero entries first, in order
    let order: Vec<usize> = (0..n)
        .filter(|&i| !diag[i].is_zero())
        .chain((0..n).filter(|&i| diag[i].is_zero()))
        .collect();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let mut t = Matrix::zeros(&field, n, n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            t.set(r, new, p.get(r, old));
        }
    }
    let mut cur: Vec<Felt> = order.iter().map(|&i| diag[i]).collect();
    for i in 0..rank.saturating_sub(1) {
        let k = two_by_two_move(f, cur[i], cur[i + 1])?;
        let (ci, cj) = (t.column(i), t.column(i + 1));
        for r in 0..n {
            let x = f.add(f.mul(ci.0[r], k[0][0]), f.mul(cj.0[r], k[1][0]));
            let y = f.add(f.mul(ci.0[r], k[0][1]), f.mul(cj.0[r], k[1][1]));
            t.set(r, i, x);
            t.set(r, i + 1, y);
        }
        cur[i + 1] = f.mul(cur[i], cur[i + 1]);
        cur[i] = Felt::ONE;
    }
    let mut delta_square = true;
    if rank > 0 {
        let last = cur[rank - 1];
        delta_square = f.is_square(last);
        let delta = if delta_square {
            Felt::ONE
        } else {
            f.canonical_nonsquare()?
        };
        let s = f
            .sqrt(f.div(delta, last)?)
            .ok_or_else(|| Error::InvariantViolation("square-class scaling".into()))?;
        for r in 0..n {
            let v = f.mul(t.get(r, rank - 1), s);
            t.set(r, rank - 1, v);
        }
    }
    Ok((t, NormalForm::Odd { rank, delta_square }))
}

/// Orthogonal splitting over GF(2) into `<1>` lines, hyperbolic planes and
/// the radical, then conversion to the normal form.
fn binary_normal_basis(form: &BilinearForm) -> Result<(Matrix, NormalForm)> {
    let field = form.field().clone();
    let f = &*field;
    let n = form.n();
    let mut space: Vec<Vector> = (0..n).map(|i| Vector::unit(n, i)).collect();
    let mut ones: Vec<Vector> = Vec::new();
    let mut planes: Vec<(Vector, Vector)> = Vec::new();
    let mut radical: Vec<Vector> = Vec::new();

    let complement_within = |space: &[Vector], xs: &[Vector]| -> Vec<Vector> {
        let mut cons = Matrix::zeros(&field, xs.len(), space.len());
        for (r, x) in xs.iter().enumerate() {
            for (c, s) in space.iter().enumerate() {
                cons.set(r, c, form.apply(s, x));
            }
        }
        kernel_basis(&cons)
            .into_iter()
            .map(|coeffs| {
                space
                    .iter()
                    .zip(&coeffs.0)
                    .fold(Vector::zeros(n), |acc, (s, &c)| {
                        if c.is_zero() {
                            acc
                        } else {
                            acc.add(f, s)
                        }
                    })
            })
            .collect()
    };

    while !space.is_empty() {
        if let Some(x) = space.iter().find(|s| !form.norm(s).is_zero()).cloned() {
            space = complement_within(&space, std::slice::from_ref(&x));
            ones.push(x);
            continue;
        }
        let pair = (0..space.len()).find_map(|i| {
            (i + 1..space.len())
                .find(|&j| !form.apply(&space[i], &space[j]).is_zero())
                .map(|j| (space[i].clone(), space[j].clone()))
        });
        match pair {
            Some((e, fv)) => {
                space = complement_within(&space, &[e.clone(), fv.clone()]);
                planes.push((e, fv));
            }
            None => {
                radical.append(&mut space);
            }
        }
    }

    let rank = ones.len() + 2 * planes.len();
    let alternating = ones.is_empty();
    let mut cols: Vec<Vector> = Vec::with_capacity(n);
    if alternating {
        for (e, fv) in planes {
            cols.push(e);
            cols.push(fv);
        }
    } else {
        // <1> ⊥ H ≅ <1> ⊥ <1> ⊥ <1> via x+e, x+f, x+e+f
        let mut pending = ones;
        for (e, fv) in planes {
            let x = pending.pop().expect("at least one <1> line");
            let xe = x.add(f, &e);
            let xf = x.add(f, &fv);
            let xef = xe.add(f, &fv);
            pending.push(xe);
            pending.push(xf);
            pending.push(xef);
        }
        cols.extend(pending);
    }
    cols.extend(radical);
    Ok((
        Matrix::from_columns(&field, n, &cols),
        NormalForm::Binary { rank, alternating },
    ))
}

/// An invertible `M` with `M^T B M = A`, i.e. a witness that `a ≅ b`.
pub fn equivalence_witness(a: &BilinearForm, b: &BilinearForm) -> Result<Matrix> {
    FieldCtx::same_field(a.field(), b.field())?;
    if a.n() != b.n() {
        return Err(Error::ShapeMismatch("forms of different dimension".into()));
    }
    let (ta, na) = a.normal_basis()?;
    let (tb, nb) = b.normal_basis()?;
    if na != nb {
        return Err(Error::NotEquivalent);
    }
    let m = tb.mul(&ta.inverse()?)?;
    debug_assert_eq!(b.matrix().congruence(&m).as_ref(), Ok(a.matrix()));
    Ok(m)
}

impl FormRecord {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}
