//! Explicit extremal sets. Each generator returns the form it is meant for
//! and checks size, (k,l)-orthogonality and its part structure before
//! returning.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{BilinearForm, FormKind};
use crate::gf::{prime_power, Felt, Field, FieldCtx};
use crate::linalg::{Matrix, Vector};
use crate::orthosets::OrthoSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConstructionName {
    OddDim,
    EvenEps1,
    EvenEpsGamma,
    BinaryOdd,
    BinaryEvenDot,
    BinaryHyperbolic,
    K4N4,
    Remark2,
}

impl ConstructionName {
    pub const ALL: [ConstructionName; 8] = [
        ConstructionName::OddDim,
        ConstructionName::EvenEps1,
        ConstructionName::EvenEpsGamma,
        ConstructionName::BinaryOdd,
        ConstructionName::BinaryEvenDot,
        ConstructionName::BinaryHyperbolic,
        ConstructionName::K4N4,
        ConstructionName::Remark2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstructionName::OddDim => "odd-dim",
            ConstructionName::EvenEps1 => "even-eps1",
            ConstructionName::EvenEpsGamma => "even-epsgamma",
            ConstructionName::BinaryOdd => "binary-odd",
            ConstructionName::BinaryEvenDot => "binary-even-dot",
            ConstructionName::BinaryHyperbolic => "binary-hyperbolic",
            ConstructionName::K4N4 => "k4-n4",
            ConstructionName::Remark2 => "remark2",
        }
    }
}

impl fmt::Display for ConstructionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstructionName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::BadParams(format!("unknown construction {s:?}")))
    }
}

/// A named sub-collection of the set, by position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Part {
    pub label: &'static str,
    pub positions: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub name: ConstructionName,
    pub set: OrthoSet,
    /// Class of the emitted form.
    pub kind: FormKind,
    pub k: usize,
    pub l: usize,
    pub advertised_size: u64,
    pub parts: Vec<Part>,
    /// Whether the parts are claimed pairwise disjoint.
    pub disjoint: bool,
}

impl Construction {
    pub fn form(&self) -> &BilinearForm {
        self.set.form()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn q(&self) -> u32 {
        self.set.field().q()
    }

    pub fn n(&self) -> usize {
        self.set.n()
    }

    /// Re-runs every advertised check.
    pub fn verify(&self) -> Result<()> {
        let fail = |what: String| Err(Error::InvariantViolation(format!("{}: {what}", self.name)));
        if self.set.len() as u64 != self.advertised_size {
            return fail(format!(
                "size {} != {}",
                self.set.len(),
                self.advertised_size
            ));
        }
        if !self.set.is_kl_orthogonal(self.k, self.l, u64::MAX)? {
            return fail(format!("not ({},{})-orthogonal", self.k, self.l));
        }
        for part in &self.parts {
            if !self.set.subset(&part.positions).is_orthogonal_set() {
                return fail(format!("part {} is not an orthogonal set", part.label));
            }
        }
        if self.disjoint {
            let mut seen = vec![false; self.set.len()];
            for &p in self.parts.iter().flat_map(|p| &p.positions) {
                if std::mem::replace(&mut seen[p], true) {
                    return fail("parts overlap".into());
                }
            }
        }
        if !self.parts.is_empty() {
            let mut covered = vec![false; self.set.len()];
            for &p in self.parts.iter().flat_map(|p| &p.positions) {
                covered[p] = true;
            }
            if covered.contains(&false) {
                return fail("parts do not cover the set".into());
            }
        }
        if self.set.form().classify().kind() != Some(self.kind) {
            return fail(format!("emitted form is not of class {}", self.kind));
        }
        Ok(())
    }
}

/// Collects parts in order, merging duplicates into the first occurrence.
struct Builder {
    field: Field,
    n: usize,
    vectors: Vec<Vector>,
    index: std::collections::HashMap<Vector, usize>,
    parts: Vec<Part>,
}

impl Builder {
    fn new(field: &Field, n: usize) -> Self {
        Builder {
            field: field.clone(),
            n,
            vectors: Vec::new(),
            index: Default::default(),
            parts: Vec::new(),
        }
    }

    fn part(&mut self, label: &'static str, vectors: impl IntoIterator<Item = Vector>) {
        let mut positions = Vec::new();
        for v in vectors {
            let pos = *self.index.entry(v.clone()).or_insert_with(|| {
                self.vectors.push(v);
                self.vectors.len() - 1
            });
            positions.push(pos);
        }
        self.parts.push(Part { label, positions });
    }

    /// `{ place(x) : x in F_q^k } \ {0}`, in encoding order of `x`.
    fn pattern(&self, k: usize, place: impl Fn(&[Felt], &mut Vector)) -> Vec<Vector> {
        let q = self.field.q();
        let total = (q as u64).pow(k as u32);
        (1..total)
            .map(|i| {
                let x = Vector::from_index(i, q, k);
                let mut v = Vector::zeros(self.n);
                place(&x.0, &mut v);
                v
            })
            .collect()
    }

    fn ints(&self, entries: &[(usize, i64)]) -> Vector {
        let mut v = Vector::zeros(self.n);
        for &(i, x) in entries {
            v.0[i] = self.field.from_int(x);
        }
        v
    }

    fn finish(
        self,
        name: ConstructionName,
        form: BilinearForm,
        kind: FormKind,
        k: usize,
        advertised_size: u64,
        disjoint: bool,
    ) -> Result<Construction> {
        let c = Construction {
            name,
            set: OrthoSet::new(form, self.vectors)?,
            kind,
            k,
            l: 2,
            advertised_size,
            parts: self.parts,
            disjoint,
        };
        c.verify()?;
        Ok(c)
    }
}

fn odd_field(q: u64) -> Result<Field> {
    let f = FieldCtx::from_order(q)?;
    if !f.is_odd() {
        return Err(Error::BadParams(format!(
            "construction needs odd q, got {q}"
        )));
    }
    Ok(f)
}

fn pow(q: u64, e: usize) -> u64 {
    q.pow(e as u32)
}

/// `(x1, x1, …, xk, xk)` placed starting at `offset`.
fn doubled(f: &FieldCtx, x: &[Felt], v: &mut Vector, offset: usize, negate: bool) {
    for (i, &xi) in x.iter().enumerate() {
        v.0[offset + 2 * i] = xi;
        v.0[offset + 2 * i + 1] = if negate { f.neg(xi) } else { xi };
    }
}

/// Odd `n = 2k + 1`: size `2q^k + 1`.
pub fn example_odd_dim(q: u64, n: usize, eps: FormKind) -> Result<Construction> {
    let field = odd_field(q)?;
    if n < 3 || n % 2 == 0 {
        return Err(Error::BadParams(format!(
            "odd-dim needs odd n >= 3, got {n}"
        )));
    }
    let form = BilinearForm::canonical(&field, n, eps)?;
    let f = &*field;
    let k = n / 2;
    let e = match eps {
        FormKind::One => Felt::ONE,
        _ => f.canonical_nonsquare()?,
    };
    let mut b = Builder::new(&field, n);
    let mut s1 = b.pattern(k, |x, v| doubled(f, x, v, 0, false));
    s1.push(b.ints(&[(n - 3, 1), (n - 2, 1), (n - 1, 1)]));
    let mut s2 = b.pattern(k, |x, v| doubled(f, x, v, 0, true));
    let mut special = b.ints(&[(n - 3, 1), (n - 2, -1)]);
    special.0[n - 1] = f.neg(f.mul(f.from_int(2), f.inv(e)?));
    s2.push(special);
    let extra = b.ints(&[(n - 1, 1)]);
    b.part("S1", s1);
    b.part("S2", s2);
    b.part("e_n", [extra]);
    b.finish(
        ConstructionName::OddDim,
        form,
        eps,
        3,
        2 * pow(q, k) + 1,
        true,
    )
}

/// Even `n = 2k`, ε = 1: size `2q^k - 2`.
pub fn example_even_eps1(q: u64, n: usize) -> Result<Construction> {
    let field = odd_field(q)?;
    if n < 2 || n % 2 == 1 {
        return Err(Error::BadParams(format!(
            "even-eps1 needs even n >= 2, got {n}"
        )));
    }
    let form = BilinearForm::canonical(&field, n, FormKind::One)?;
    let f = &*field;
    let k = n / 2;
    let mut b = Builder::new(&field, n);
    let s1 = b.pattern(k, |x, v| doubled(f, x, v, 0, false));
    let s2 = b.pattern(k, |x, v| doubled(f, x, v, 0, true));
    b.part("S1", s1);
    b.part("S2", s2);
    b.finish(
        ConstructionName::EvenEps1,
        form,
        FormKind::One,
        3,
        2 * pow(q, k) - 2,
        true,
    )
}

/// Even `n = 2k`, q ≡ 3 (mod 4), form with ε = -1: size `2q^{k-1} + 4`
/// (4 when n = 2).
pub fn example_even_epsgamma(q: u64, n: usize) -> Result<Construction> {
    let field = odd_field(q)?;
    if q % 4 != 3 {
        return Err(Error::BadParams(format!(
            "even-epsgamma needs q = 3 mod 4, got {q}"
        )));
    }
    if n < 2 || n % 2 == 1 {
        return Err(Error::BadParams(format!(
            "even-epsgamma needs even n >= 2, got {n}"
        )));
    }
    let f = &*field;
    // diag(1, -1, …, 1, -1, 1, 1): the even-n normal form with ε = -1
    let diag: Vec<Felt> = (0..n)
        .map(|i| {
            if i + 2 >= n || i % 2 == 0 {
                Felt::ONE
            } else {
                f.neg(Felt::ONE)
            }
        })
        .collect();
    let form = BilinearForm::new(Matrix::diagonal(&field, &diag))?;
    let mut b = Builder::new(&field, n);
    if n == 2 {
        // {e1, 2e1, e2, 2e2}: two non-orthogonal pairs, orthogonal across
        let two = f.from_int(2);
        b.vectors = vec![
            Vector::unit(2, 0),
            Vector::unit(2, 0).scale(f, two),
            Vector::unit(2, 1),
            Vector::unit(2, 1).scale(f, two),
        ];
        return b.finish(
            ConstructionName::EvenEpsGamma,
            form,
            FormKind::Gamma,
            3,
            4,
            true,
        );
    }
    let k = n / 2;
    let mut s1 = b.pattern(k - 1, |x, v| doubled(f, x, v, 0, false));
    s1.push(b.ints(&[(n - 4, 1), (n - 3, 1), (n - 2, 1), (n - 1, 1)]));
    s1.push(b.ints(&[(n - 4, 1), (n - 3, 1), (n - 2, 1), (n - 1, -1)]));
    let mut s2 = b.pattern(k - 1, |x, v| doubled(f, x, v, 0, true));
    s2.push(b.ints(&[(n - 4, 1), (n - 3, -1), (n - 2, -1), (n - 1, -1)]));
    s2.push(b.ints(&[(n - 4, 1), (n - 3, -1), (n - 2, -1), (n - 1, 1)]));
    let s3 = vec![
        b.ints(&[(n - 2, 1), (n - 1, 1)]),
        b.ints(&[(n - 2, 1), (n - 1, -1)]),
    ];
    b.part("S1", s1);
    b.part("S2", s2);
    b.part("S3", s3);
    b.finish(
        ConstructionName::EvenEpsGamma,
        form,
        FormKind::Gamma,
        3,
        2 * pow(q, k - 1) + 4,
        true,
    )
}

fn binary_field() -> Field {
    FieldCtx::from_order(2).expect("GF(2)")
}

/// q = 2, odd `n = 2k + 1`, dot product: size `2^{k+1} + 1`.
pub fn example_binary_odd(n: usize) -> Result<Construction> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::BadParams(format!(
            "binary-odd needs odd n >= 3, got {n}"
        )));
    }
    let field = binary_field();
    let f = &*field;
    let k = n / 2;
    let mut b = Builder::new(&field, n);
    let mut s1 = b.pattern(k, |x, v| doubled(f, x, v, 1, false));
    s1.push(Vector::unit(n, 0));
    let mut s2 = b.pattern(k, |x, v| doubled(f, x, v, 0, false));
    s2.push(Vector::unit(n, n - 1));
    let ones = Vector(vec![Felt::ONE; n]);
    b.part("S1", s1);
    b.part("S2", s2);
    b.part("all-ones", [ones]);
    b.finish(
        ConstructionName::BinaryOdd,
        BilinearForm::dot(&field, n),
        FormKind::Dot,
        3,
        pow(2, k + 1) + 1,
        true,
    )
}

/// q = 2, even `n = 2k`, dot product: size `2^{k+1} - 3`; the all-ones
/// vector lies in both parts.
pub fn example_binary_even_dot(n: usize) -> Result<Construction> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::BadParams(format!(
            "binary-even-dot needs even n >= 2, got {n}"
        )));
    }
    let field = binary_field();
    let f = &*field;
    let k = n / 2;
    let mut b = Builder::new(&field, n);
    let s1 = b.pattern(k, |x, v| doubled(f, x, v, 0, false));
    let s2 = b.pattern(k, |x, v| {
        // (x_k, x_1, x_1, …, x_{k-1}, x_{k-1}, x_k)
        doubled(f, &x[..k - 1], v, 1, false);
        v.0[0] = x[k - 1];
        v.0[n - 1] = x[k - 1];
    });
    b.part("S1", s1);
    b.part("S2", s2);
    b.finish(
        ConstructionName::BinaryEvenDot,
        BilinearForm::dot(&field, n),
        FormKind::Dot,
        3,
        pow(2, k + 1) - 3,
        false,
    )
}

/// q = 2, even `n = 2k`, hyperbolic form: size `2^{k+1} - 2`.
pub fn example_binary_hyperbolic(n: usize) -> Result<Construction> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::BadParams(format!(
            "binary-hyperbolic needs even n >= 2, got {n}"
        )));
    }
    let field = binary_field();
    let k = n / 2;
    let mut b = Builder::new(&field, n);
    let s1 = b.pattern(k, |x, v| (0..k).for_each(|i| v.0[2 * i] = x[i]));
    let s2 = b.pattern(k, |x, v| (0..k).for_each(|i| v.0[2 * i + 1] = x[i]));
    b.part("S1", s1);
    b.part("S2", s2);
    b.finish(
        ConstructionName::BinaryHyperbolic,
        BilinearForm::hyperbolic(&field, n)?,
        FormKind::Hyperbolic,
        3,
        pow(2, k + 1) - 2,
        true,
    )
}

/// Odd q, n = 4, ε = 1: three orthogonal planes of total size `3(q^2 - 1)`,
/// (4,2)-orthogonal.
pub fn example_k4_n4(q: u64) -> Result<Construction> {
    let field = odd_field(q)?;
    let f = &*field;
    let form = BilinearForm::canonical(&field, 4, FormKind::One)?;
    let mut b = Builder::new(&field, 4);
    let s1 = b.pattern(2, |x, v| doubled(f, x, v, 0, false));
    let s2 = b.pattern(2, |x, v| doubled(f, x, v, 0, true));
    let s3 = b.pattern(2, |x, v| {
        v.0[0] = x[0];
        v.0[1] = x[1];
        v.0[2] = x[1];
        v.0[3] = f.neg(x[0]);
    });
    b.part("S1", s1);
    b.part("S2", s2);
    b.part("S3", s3);
    b.finish(
        ConstructionName::K4N4,
        form,
        FormKind::One,
        4,
        3 * (q * q - 1),
        true,
    )
}

/// The seven listed vectors of `F_2^4` under the dot product.
pub const REMARK2_VECTORS: [[u32; 4]; 7] = [
    [1, 1, 1, 0],
    [1, 0, 0, 0],
    [1, 0, 1, 1],
    [0, 0, 0, 1],
    [0, 1, 1, 1],
    [0, 1, 1, 0],
    [1, 1, 0, 1],
];

pub fn remark2_set() -> Result<Construction> {
    let field = binary_field();
    let mut b = Builder::new(&field, 4);
    b.vectors = REMARK2_VECTORS
        .iter()
        .map(|v| Vector::from_values(v))
        .collect();
    b.finish(
        ConstructionName::Remark2,
        BilinearForm::dot(&field, 4),
        FormKind::Dot,
        3,
        7,
        true,
    )
}

/// `F_2^2 \ {0}` under the dot product: all three vectors, (3,2)-orthogonal.
pub fn remark2_plane() -> Result<Construction> {
    let field = binary_field();
    let mut b = Builder::new(&field, 2);
    b.vectors = [[0, 1], [1, 0], [1, 1]]
        .iter()
        .map(|v| Vector::from_values(v))
        .collect();
    b.finish(
        ConstructionName::Remark2,
        BilinearForm::dot(&field, 2),
        FormKind::Dot,
        3,
        3,
        true,
    )
}

/// Dispatches by name. `eps` is only read by `odd-dim` (default `one`).
pub fn build(
    name: ConstructionName,
    q: u64,
    n: usize,
    eps: Option<FormKind>,
) -> Result<Construction> {
    let need_q2 = || {
        if q == 2 {
            Ok(())
        } else {
            Err(Error::BadParams(format!(
                "{name} is defined over GF(2), got q = {q}"
            )))
        }
    };
    match name {
        ConstructionName::OddDim => example_odd_dim(q, n, eps.unwrap_or(FormKind::One)),
        ConstructionName::EvenEps1 => example_even_eps1(q, n),
        ConstructionName::EvenEpsGamma => example_even_epsgamma(q, n),
        ConstructionName::BinaryOdd => need_q2().and_then(|_| example_binary_odd(n)),
        ConstructionName::BinaryEvenDot => need_q2().and_then(|_| example_binary_even_dot(n)),
        ConstructionName::BinaryHyperbolic => need_q2().and_then(|_| example_binary_hyperbolic(n)),
        ConstructionName::K4N4 => {
            if n != 4 {
                return Err(Error::BadParams(format!(
                    "k4-n4 is defined for n = 4, got {n}"
                )));
            }
            example_k4_n4(q)
        }
        ConstructionName::Remark2 => match (q, n) {
            (2, 2) => remark2_plane(),
            (2, 4) => remark2_set(),
            _ => Err(Error::BadParams("remark2 lives in F_2^2 or F_2^4".into())),
        },
    }
}

/// The construction meeting the (3,2) value for a class, if there is one.
pub fn best_32_construction(q: u64, n: usize, kind: FormKind) -> Option<Result<Construction>> {
    match (q, kind) {
        (2, FormKind::Dot) if n >= 3 && n % 2 == 1 => Some(example_binary_odd(n)),
        (2, FormKind::Dot) if n == 2 => Some(remark2_plane()),
        (2, FormKind::Dot) if n == 4 => Some(remark2_set()),
        (2, FormKind::Dot) if n >= 2 && n % 2 == 0 => Some(example_binary_even_dot(n)),
        (2, FormKind::Hyperbolic) if n >= 2 && n % 2 == 0 => Some(example_binary_hyperbolic(n)),
        (2, _) => None,
        (_, FormKind::One | FormKind::Gamma) if q % 2 == 1 && n >= 3 && n % 2 == 1 => {
            Some(example_odd_dim(q, n, kind))
        }
        (_, FormKind::One) if q % 2 == 1 && n >= 2 && n % 2 == 0 => Some(example_even_eps1(q, n)),
        (_, FormKind::Gamma) if q % 4 == 3 && n >= 2 && n % 2 == 0 => {
            Some(example_even_epsgamma(q, n))
        }
        _ => None,
    }
}

/// Every `(name, q, n, eps)` with `q^n <= limit` accepted by the generators.
pub fn parameter_grid(limit: u64) -> Vec<(ConstructionName, u64, usize, Option<FormKind>)> {
    let mut out = Vec::new();
    let odd_qs: Vec<u64> = (3..=limit.min(1 << 16))
        .filter(|&q| q % 2 == 1 && q * q <= limit && prime_power(q).is_some())
        .collect();
    for &q in &odd_qs {
        let mut n = 2;
        while q.checked_pow(n as u32).is_some_and(|t| t <= limit) {
            if n % 2 == 1 {
                out.push((ConstructionName::OddDim, q, n, Some(FormKind::One)));
                out.push((ConstructionName::OddDim, q, n, Some(FormKind::Gamma)));
            } else {
                out.push((ConstructionName::EvenEps1, q, n, None));
                if q % 4 == 3 {
                    out.push((ConstructionName::EvenEpsGamma, q, n, None));
                }
            }
            if n == 4 {
                out.push((ConstructionName::K4N4, q, n, None));
            }
            n += 1;
        }
    }
    let mut n = 2;
    while 1u64 << n <= limit {
        if n % 2 == 1 {
            out.push((ConstructionName::BinaryOdd, 2, n, None));
        } else {
            out.push((ConstructionName::BinaryEvenDot, 2, n, None));
            out.push((ConstructionName::BinaryHyperbolic, 2, n, None));
        }
        n += 1;
    }
    out.push((ConstructionName::Remark2, 2, 2, None));
    out.push((ConstructionName::Remark2, 2, 4, None));
    out
}
