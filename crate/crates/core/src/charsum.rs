//! Additive character sums over `F_q^n` and numeric checks of the
//! subgroup, bilinear (Vinogradov-type) and orthogonal-pair counting bounds.
//!
//! Sums are generic over the float type; `f64` aliases are provided at the
//! bottom. Accumulation uses Neumaier summation, and parallel reductions
//! combine fixed chunks in order so results are reproducible.

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::BilinearForm;
use crate::gf::FieldCtx;
use crate::linalg::{enumerate_span, Vector};

pub const MAX_SUBSPACE: u64 = 10_000_000;
pub const MAX_PAIRS: u64 = 100_000_000;
const CHUNK: usize = 64;

/// Neumaier (improved Kahan) accumulator.
#[derive(Clone, Copy, Debug)]
pub struct Neumaier<T> {
    sum: T,
    comp: T,
}

impl<T: Float> Neumaier<T> {
    pub fn new() -> Self {
        Neumaier {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Float> Default for Neumaier<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Compensated complex accumulator.
#[derive(Clone, Copy, Debug)]
pub struct ComplexSum<T> {
    re: Neumaier<T>,
    im: Neumaier<T>,
}

impl<T: Float> ComplexSum<T> {
    pub fn new() -> Self {
        ComplexSum {
            re: Neumaier::new(),
            im: Neumaier::new(),
        }
    }

    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

pub fn neumaier_sum<T: Float>(xs: impl IntoIterator<Item = T>) -> T {
    let mut acc = Neumaier::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

fn check_vectors(form: &BilinearForm, vs: &[Vector]) -> Result<()> {
    let q = form.field().q();
    for v in vs {
        if v.len() != form.n() {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for a form on F^{}",
                v.len(),
                form.n()
            )));
        }
        if let Some(c) = v.0.iter().find(|c| c.0 >= q) {
            return Err(Error::ElementOutOfRange {
                value: c.0 as u64,
                q,
            });
        }
    }
    Ok(())
}

/// `Σ_{h ∈ H} ψ(B(s, h))` over the span `H` of `h_basis`. The result is
/// checked against `|H|` (when `s ⊥ H`) or `0` (otherwise).
pub fn char_sum_subspace<T: Float + FloatConst + Send + Sync>(
    form: &BilinearForm,
    s: &Vector,
    h_basis: &[Vector],
) -> Result<Complex<T>> {
    let field = form.field();
    let basis = crate::linalg::span_basis(field, form.n(), h_basis)?;
    check_vectors(form, std::slice::from_ref(s))?;
    let size = (field.q() as u64)
        .checked_pow(basis.len() as u32)
        .filter(|&h| h <= MAX_SUBSPACE)
        .ok_or_else(|| {
            Error::TooLarge(format!(
                "subspace of dimension {} over F_{}",
                basis.len(),
                field.q()
            ))
        })?;
    let h = enumerate_span(field, form.n(), &basis);
    let sum = chunked_sum(&h, |x| field.psi::<T>(form.apply(s, x)));
    let orthogonal = basis.iter().all(|b| form.apply(s, b).is_zero());
    let expect = if orthogonal {
        T::from(size).unwrap()
    } else {
        T::zero()
    };
    let tol = T::from(1e-9 * size as f64).unwrap();
    if (sum - Complex::new(expect, T::zero())).norm() > tol {
        return Err(Error::InvariantViolation(format!(
            "subgroup sum {:?} differs from {:?}",
            (sum.re.to_f64(), sum.im.to_f64()),
            expect.to_f64()
        )));
    }
    Ok(sum)
}

/// `Σ_{h ∈ t + H} ψ(B(s, h))` over a coset.
pub fn char_sum_coset<T: Float + FloatConst + Send + Sync>(
    form: &BilinearForm,
    s: &Vector,
    t: &Vector,
    h_basis: &[Vector],
) -> Result<Complex<T>> {
    let field = form.field();
    let basis = crate::linalg::span_basis(field, form.n(), h_basis)?;
    check_vectors(form, &[s.clone(), t.clone()])?;
    (field.q() as u64)
        .checked_pow(basis.len() as u32)
        .filter(|&h| h <= MAX_SUBSPACE)
        .ok_or_else(|| Error::TooLarge(format!("subspace of dimension {}", basis.len())))?;
    let coset: Vec<Vector> = enumerate_span(field, form.n(), &basis)
        .into_iter()
        .map(|h| h.add(field, t))
        .collect();
    Ok(chunked_sum(&coset, |x| field.psi::<T>(form.apply(s, x))))
}

fn chunked_sum<T, F>(items: &[Vector], f: F) -> Complex<T>
where
    T: Float + Send + Sync,
    F: Fn(&Vector) -> Complex<T> + Sync,
{
    let parts: Vec<Complex<T>> = items
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = ComplexSum::new();
            for x in chunk {
                acc.add(f(x));
            }
            acc.value()
        })
        .collect();
    let mut acc = ComplexSum::new();
    for p in parts {
        acc.add(p);
    }
    acc.value()
}

/// Result of a bilinear character sum.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BilinearSum<T> {
    pub sum_re: T,
    pub sum_im: T,
    /// `sqrt(|X| |Y| q^n)`.
    pub bound: T,
    /// `|X| Σ_x |Σ_y ψ(B(x,y))|^2`, which dominates `|sum|^2`.
    pub cauchy_schwarz: T,
}

impl<T: Float> BilinearSum<T> {
    pub fn sum(&self) -> Complex<T> {
        Complex::new(self.sum_re, self.sum_im)
    }

    pub fn ok(&self) -> bool {
        self.sum().norm() <= self.bound + T::from(1e-6).unwrap()
    }
}

fn pair_check(x: &[Vector], y: &[Vector]) -> Result<()> {
    let pairs = (x.len() as u64).saturating_mul(y.len() as u64);
    if pairs > MAX_PAIRS {
        return Err(Error::TooLarge(format!(
            "{pairs} pairs (limit {MAX_PAIRS})"
        )));
    }
    Ok(())
}

fn sqrt_bound<T: Float>(field: &FieldCtx, n: usize, x: usize, y: usize) -> T {
    let qn = T::from(field.q()).unwrap().powi(n as i32);
    (T::from(x).unwrap() * T::from(y).unwrap() * qn).sqrt()
}

/// `Σ_{x∈X} Σ_{y∈Y} ψ(B(x, y))`; errors with `BoundViolated` if the sum
/// exceeds `sqrt(|X||Y|q^n)` or the Cauchy–Schwarz step fails.
pub fn bilinear_char_sum<T: Float + FloatConst + Send + Sync>(
    form: &BilinearForm,
    x: &[Vector],
    y: &[Vector],
) -> Result<BilinearSum<T>> {
    pair_check(x, y)?;
    check_vectors(form, x)?;
    check_vectors(form, y)?;
    let field = form.field();
    let rows: Vec<(Complex<T>, T)> = x
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut total = ComplexSum::new();
            let mut sq = Neumaier::new();
            for a in chunk {
                let mut inner = ComplexSum::new();
                for b in y {
                    inner.add(field.psi::<T>(form.apply(a, b)));
                }
                let v = inner.value();
                total.add(v);
                sq.add(v.norm_sqr());
            }
            (total.value(), sq.value())
        })
        .collect();
    let mut total = ComplexSum::new();
    let mut sq = Neumaier::new();
    for (t, s) in rows {
        total.add(t);
        sq.add(s);
    }
    let sum = total.value();
    let out = BilinearSum {
        sum_re: sum.re,
        sum_im: sum.im,
        bound: sqrt_bound(field, form.n(), x.len(), y.len()),
        cauchy_schwarz: T::from(x.len()).unwrap() * sq.value(),
    };
    let slack = T::from(1e-9 * (x.len() * y.len()).max(1) as f64).unwrap();
    let sq_slack = slack * T::from((x.len() * y.len()).max(1)).unwrap();
    if sum.norm_sqr() > out.cauchy_schwarz + sq_slack {
        return Err(Error::BoundViolated(format!(
            "|sum|^2 = {:?} exceeds |X| * sum of squared inner sums = {:?}",
            sum.norm_sqr().to_f64(),
            out.cauchy_schwarz.to_f64()
        )));
    }
    if !out.ok() {
        return Err(Error::BoundViolated(format!(
            "|sum| = {:?} exceeds {:?}",
            sum.norm().to_f64(),
            out.bound.to_f64()
        )));
    }
    Ok(out)
}

/// Exact count of orthogonal pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrthCount {
    pub count: u64,
    /// `|X||Y|/q`.
    pub expected: f64,
    /// `sqrt(|X||Y|q^n)`.
    pub bound: f64,
}

impl OrthCount {
    pub fn deviation(&self) -> f64 {
        (self.count as f64 - self.expected).abs()
    }

    pub fn ok(&self) -> bool {
        self.deviation() <= self.bound + 1e-9
    }
}

/// Number of pairs `(x, y) ∈ X × Y` with `B(x, y) = 0`, counted exactly;
/// errors with `BoundViolated` if it strays more than `sqrt(|X||Y|q^n)`
/// from `|X||Y|/q`.
pub fn count_orthogonal_pairs(
    form: &BilinearForm,
    x: &[Vector],
    y: &[Vector],
) -> Result<OrthCount> {
    pair_check(x, y)?;
    check_vectors(form, x)?;
    check_vectors(form, y)?;
    let count: u64 = x
        .par_iter()
        .map(|a| y.iter().filter(|b| form.apply(a, b).is_zero()).count() as u64)
        .sum();
    let q = form.field().q() as f64;
    let out = OrthCount {
        count,
        expected: (x.len() * y.len()) as f64 / q,
        bound: sqrt_bound::<f64>(form.field(), form.n(), x.len(), y.len()),
    };
    if !out.ok() {
        return Err(Error::BoundViolated(format!(
            "|{} - {}| exceeds {}",
            out.count, out.expected, out.bound
        )));
    }
    Ok(out)
}

/// A uniformly random set of distinct vectors of `F_q^n`; the size is drawn
/// uniformly from `1..=q^n` unless given.
pub fn random_vector_set<R: Rng>(
    field: &FieldCtx,
    n: usize,
    size: Option<usize>,
    rng: &mut R,
) -> Result<Vec<Vector>> {
    let q = field.q();
    let total = (q as u64)
        .checked_pow(n as u32)
        .filter(|&t| t <= MAX_SUBSPACE)
        .ok_or_else(|| Error::TooLarge(format!("F_{q}^{n}")))? as usize;
    let size = size.unwrap_or_else(|| rng.gen_range(1..=total));
    if size > total {
        return Err(Error::BadParams(format!(
            "{size} distinct vectors requested from {total}"
        )));
    }
    let mut idx = rand::seq::index::sample(rng, total, size).into_vec();
    idx.sort_unstable();
    Ok(idx
        .into_iter()
        .map(|i| Vector::from_index(i as u64, q, n))
        .collect())
}

pub type CharSum64 = BilinearSum<f64>;

pub fn char_sum_subspace_f64(
    form: &BilinearForm,
    s: &Vector,
    h_basis: &[Vector],
) -> Result<Complex<f64>> {
    char_sum_subspace(form, s, h_basis)
}

pub fn bilinear_char_sum_f64(form: &BilinearForm, x: &[Vector], y: &[Vector]) -> Result<CharSum64> {
    bilinear_char_sum(form, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use crate::linalg::nonzero_vectors;
    use rand::SeedableRng;

    fn all_vectors(q: u32, n: usize) -> Vec<Vector> {
        (0..(q as u64).pow(n as u32))
            .map(|i| Vector::from_index(i, q, n))
            .collect()
    }

    #[test]
    fn neumaier_beats_naive() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(xs), 2.0);
    }

    #[test]
    fn one_dimensional_examples() {
        let f = FieldCtx::from_order(3).unwrap();
        let b = BilinearForm::dot(&f, 1);
        let all = all_vectors(3, 1);
        let s = bilinear_char_sum_f64(&b, &all, &all).unwrap();
        assert!((s.sum_re - 3.0).abs() < 1e-12 && s.sum_im.abs() < 1e-12);
        let c = count_orthogonal_pairs(&b, &all, &all).unwrap();
        assert_eq!(c.count, 5);
        assert!((c.deviation() - 2.0).abs() < 1e-12);
        let zero = vec![Vector::zeros(1)];
        let s = bilinear_char_sum_f64(&b, &zero, &zero).unwrap();
        assert!((s.sum_re - 1.0).abs() < 1e-12);
        let sub =
            char_sum_subspace_f64(&b, &Vector::from_values(&[1]), &[Vector::from_values(&[1])])
                .unwrap();
        assert!(sub.norm() < 1e-9);
    }

    #[test]
    fn subspace_sum_q5() {
        let f = FieldCtx::from_order(5).unwrap();
        let b = BilinearForm::dot(&f, 2);
        let e1 = Vector::unit(2, 0);
        let e2 = Vector::unit(2, 1);
        assert!(
            char_sum_subspace::<f64>(&b, &e1, &[e1.clone()])
                .unwrap()
                .norm()
                < 5e-9
        );
        let z = char_sum_subspace::<f64>(&b, &e2, &[e1.clone()]).unwrap();
        assert!((z.re - 5.0).abs() < 5e-9);
    }

    #[test]
    fn full_space_count() {
        let f = FieldCtx::from_order(3).unwrap();
        let b = BilinearForm::dot(&f, 2);
        let all = all_vectors(3, 2);
        // x = 0 pairs with all q^n vectors, each x != 0 with a hyperplane
        let (q, n) = (3u64, 2u32);
        let expect = q.pow(n) + (q.pow(n) - 1) * q.pow(n - 1);
        assert_eq!(
            count_orthogonal_pairs(&b, &all, &all).unwrap().count,
            expect
        );
        assert_eq!(expect, 33);
        let e1 = vec![Vector::unit(2, 0)];
        let c = count_orthogonal_pairs(&b, &e1, &e1).unwrap();
        assert_eq!(c.count, 0);
        assert!(c.ok());
    }

    #[test]
    fn nonprime_field_sums() {
        let f = FieldCtx::from_order(9).unwrap();
        let b = BilinearForm::dot(&f, 2);
        let vs: Vec<Vector> = nonzero_vectors(9, 2).collect();
        let s = bilinear_char_sum_f64(&b, &vs[..30], &vs[10..70]).unwrap();
        assert!(s.ok());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let x = random_vector_set(&f, 2, None, &mut rng).unwrap();
        assert!(!x.is_empty());
    }

    #[test]
    fn too_large() {
        let f = FieldCtx::from_order(3).unwrap();
        let b = BilinearForm::dot(&f, 20);
        let basis: Vec<Vector> = (0..16).map(|i| Vector::unit(20, i)).collect();
        assert!(matches!(
            char_sum_subspace::<f64>(&b, &Vector::unit(20, 0), &basis),
            Err(Error::TooLarge(_))
        ));
    }
}
