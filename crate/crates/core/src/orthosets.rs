//! Sets of nonzero vectors, (k,l)-orthogonality, structural decompositions
//! and the closed-form size bounds.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{BilinearForm, FormKind};
use crate::gf::{Felt, Field, FieldCtx, FieldSpec};
use crate::graphs::{binomial, BitSet, Graph};
use crate::linalg::{nonzero_vectors, span_basis, Vector};

/// A finite set of distinct nonzero vectors together with the form used to
/// test orthogonality. Order is preserved; it fixes graph vertex numbering.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoSet {
    form: BilinearForm,
    vectors: Vec<Vector>,
}

/// Certificate / wire form of an [`OrthoSet`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthoSetRecord {
    #[serde(default = "schema_version")]
    pub v: u32,
    pub field: FieldSpec,
    pub n: usize,
    pub form: Vec<Vec<u32>>,
    pub vectors: Vec<Vec<u32>>,
}

fn schema_version() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructDecomp {
    pub v_basis: Vec<Vector>,
    pub t: Vec<Vector>,
}

impl StructDecomp {
    pub fn dim_v(&self) -> usize {
        self.v_basis.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NeighborhoodDecomp {
    pub s: Vector,
    /// Self-orthogonal members of `S_s`.
    pub r_s: Vec<Vector>,
    /// Non-self-orthogonal members of `S_s`.
    pub t_s: Vec<Vector>,
    /// Basis of `V_s = <R_s>`.
    pub v_s_basis: Vec<Vector>,
    pub k_s: usize,
}

impl NeighborhoodDecomp {
    /// `|S_s|`.
    pub fn size(&self) -> usize {
        self.r_s.len() + self.t_s.len()
    }

    /// `|V_s|` as a count of vectors, `q^{k_s}`.
    pub fn v_s_size(&self, q: u32) -> u64 {
        (q as u64).pow(self.k_s as u32)
    }
}

/// Outcome of a (k,l) check: `witness` is a violating k-subset (positions).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlVerdict {
    pub property: String,
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

impl OrthoSet {
    pub fn new(form: BilinearForm, vectors: Vec<Vector>) -> Result<Self> {
        let n = form.n();
        let q = form.field().q();
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "vector {i} has length {}",
                    v.len()
                )));
            }
            if let Some(bad) = v.0.iter().find(|x| x.0 >= q) {
                return Err(Error::ElementOutOfRange {
                    value: bad.0 as u64,
                    q,
                });
            }
            if v.is_zero() {
                return Err(Error::ZeroVector(i));
            }
        }
        let mut seen: std::collections::HashMap<&Vector, usize> = std::collections::HashMap::new();
        for (i, v) in vectors.iter().enumerate() {
            if let Some(&j) = seen.get(v) {
                return Err(Error::Duplicate(j, i));
            }
            seen.insert(v, i);
        }
        Ok(OrthoSet { form, vectors })
    }

    pub fn from_record(rec: &OrthoSetRecord) -> Result<Self> {
        let field = FieldCtx::from_spec(&rec.field)?;
        let form = BilinearForm::from_rows(&field, rec.n, &rec.form)?;
        let vectors = rec.vectors.iter().map(|v| Vector::from_values(v)).collect();
        Self::new(form, vectors)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let rec: OrthoSetRecord =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_record(&rec)
    }

    pub fn to_record(&self) -> OrthoSetRecord {
        OrthoSetRecord {
            v: 1,
            field: self.field().spec(),
            n: self.n(),
            form: self.form.matrix().to_rows(),
            vectors: self.vectors.iter().map(Vector::values).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("records serialize")
    }

    #[inline]
    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    #[inline]
    pub fn field(&self) -> &Field {
        self.form.field()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.form.n()
    }

    #[inline]
    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.vectors.contains(v)
    }

    /// Subset at the given positions.
    pub fn subset(&self, positions: &[usize]) -> OrthoSet {
        OrthoSet {
            form: self.form.clone(),
            vectors: positions.iter().map(|&i| self.vectors[i].clone()).collect(),
        }
    }

    /// Subset of members satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Vector) -> bool) -> OrthoSet {
        OrthoSet {
            form: self.form.clone(),
            vectors: self.vectors.iter().filter(|v| keep(v)).cloned().collect(),
        }
    }

    pub fn is_self_orthogonal(&self, v: &Vector) -> bool {
        self.form.norm(v).is_zero()
    }

    pub fn is_orthogonal_set(&self) -> bool {
        let vs = &self.vectors;
        (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| self.form.apply(&vs[i], &vs[j]).is_zero()))
    }

    /// Vertices are positions; `i ~ j` iff `B(v_i, v_j) != 0`.
    pub fn nonorth_graph(&self) -> Graph {
        let vs = &self.vectors;
        Graph::from_fn(vs.len(), |i, j| !self.form.apply(&vs[i], &vs[j]).is_zero())
    }

    pub fn is_kl_orthogonal(&self, k: usize, l: usize, budget: u64) -> Result<bool> {
        self.kl_verdict(k, l, budget).map(|v| v.holds)
    }

    /// Checks (k,l)-orthogonality, returning the lexicographically first
    /// violating k-subset when it fails.
    pub fn kl_verdict(&self, k: usize, l: usize, budget: u64) -> Result<KlVerdict> {
        if l < 2 || l > k {
            return Err(Error::BadParams(format!(
                "need 2 <= l <= k, got k={k}, l={l}"
            )));
        }
        let property = format!("({k},{l})");
        let witness = if k > self.len() {
            None
        } else if l == 2 {
            self.nonorth_graph().find_clique(k)
        } else {
            self.general_kl_witness(k, l, budget)?
        };
        Ok(KlVerdict {
            property,
            holds: witness.is_none(),
            witness,
        })
    }

    fn general_kl_witness(&self, k: usize, l: usize, budget: u64) -> Result<Option<Vec<usize>>> {
        let orth = self.nonorth_graph().complement();
        let total = self.len();
        let mut idx: Vec<usize> = (0..k).collect();
        let mut examined = 0u64;
        loop {
            examined += 1;
            if examined > budget {
                return Err(Error::BudgetExceeded {
                    examined: examined - 1,
                });
            }
            if !orth.induced(&idx).has_clique(l) {
                return Ok(Some(idx));
            }
            // next k-combination
            let Some(pos) = (0..k).rev().find(|&p| idx[p] < total - k + p) else {
                return Ok(None);
            };
            idx[pos] += 1;
            for p in pos + 1..k {
                idx[p] = idx[p - 1] + 1;
            }
        }
    }

    /// Number of k-subsets a general (k,l) check would examine.
    pub fn kl_subset_count(&self, k: usize) -> u64 {
        binomial(self.len() as u64, k as u64)
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.form.is_degenerate() {
            Err(Error::Degenerate)
        } else {
            Ok(())
        }
    }

    fn totally_isotropic(&self, basis: &[Vector]) -> bool {
        basis
            .iter()
            .enumerate()
            .all(|(i, x)| basis[i..].iter().all(|y| self.form.apply(x, y).is_zero()))
    }

    /// Splits an orthogonal set into the isotropic span `V` and the
    /// non-self-orthogonal part `T`, checking `2 dim V + |T| <= n`.
    pub fn struct_decompose(&self) -> Result<StructDecomp> {
        self.require_nondegenerate()?;
        if !self.is_orthogonal_set() {
            return Err(Error::NotOrthogonal);
        }
        let (iso, t): (Vec<Vector>, Vec<Vector>) = self
            .vectors
            .iter()
            .cloned()
            .partition(|v| self.is_self_orthogonal(v));
        let v_basis = span_basis(self.field(), self.n(), &iso)?;
        if !self.totally_isotropic(&v_basis) {
            return Err(Error::InvariantViolation(
                "span of isotropic members is not totally isotropic".into(),
            ));
        }
        if 2 * v_basis.len() + t.len() > self.n() {
            return Err(Error::InvariantViolation(format!(
                "2 dim V + |T| = {} exceeds n = {}",
                2 * v_basis.len() + t.len(),
                self.n()
            )));
        }
        Ok(StructDecomp { v_basis, t })
    }

    /// Members not orthogonal to `s`, split into isotropic and anisotropic parts.
    pub fn neighborhood_decompose(&self, s: &Vector) -> Result<NeighborhoodDecomp> {
        self.require_nondegenerate()?;
        if !self.contains(s) {
            return Err(Error::NotMember);
        }
        if !self.is_kl_orthogonal(3, 2, u64::MAX)? {
            return Err(Error::Not32Orthogonal);
        }
        self.neighborhood_unchecked(s)
    }

    /// As [`Self::neighborhood_decompose`] for a set already known to be (3,2).
    pub fn neighborhood_unchecked(&self, s: &Vector) -> Result<NeighborhoodDecomp> {
        let s_s: Vec<&Vector> = self
            .vectors
            .iter()
            .filter(|x| *x != s && !self.form.apply(x, s).is_zero())
            .collect();
        if s_s.len() >= 2 {
            for (i, x) in s_s.iter().enumerate() {
                if s_s[i + 1..]
                    .iter()
                    .any(|y| !self.form.apply(x, y).is_zero())
                {
                    return Err(Error::InvariantViolation(
                        "S_s is not an orthogonal set".into(),
                    ));
                }
            }
        }
        let (r_s, t_s): (Vec<Vector>, Vec<Vector>) = s_s
            .into_iter()
            .cloned()
            .partition(|x| self.is_self_orthogonal(x));
        let v_s_basis = span_basis(self.field(), self.n(), &r_s)?;
        if r_s.len() >= 2 && !self.totally_isotropic(&v_s_basis) {
            return Err(Error::InvariantViolation(
                "V_s is not totally isotropic".into(),
            ));
        }
        Ok(NeighborhoodDecomp {
            s: s.clone(),
            k_s: v_s_basis.len(),
            r_s,
            t_s,
            v_s_basis,
        })
    }

    /// Adds every nonzero multiple of each self-orthogonal member whose
    /// addition keeps the set (3,2)-orthogonal.
    pub fn line_closure(&self) -> OrthoSet {
        let field = self.field().clone();
        let mut grow = Grow32::new(&self.form, (field.q() as usize).pow(self.n() as u32));
        for v in &self.vectors {
            grow.push_unchecked(v.clone());
        }
        loop {
            let mut changed = false;
            let isotropic: Vec<Vector> = grow
                .vectors
                .iter()
                .filter(|v| self.is_self_orthogonal(v))
                .cloned()
                .collect();
            for v in isotropic {
                for lambda in field.nonzero_elements().filter(|&l| l != Felt::ONE) {
                    let w = v.scale(&field, lambda);
                    if !grow.contains(&w) && grow.try_push(w) {
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        OrthoSet {
            form: self.form.clone(),
            vectors: grow.vectors,
        }
    }

    /// No nonzero vector outside the set can be added keeping (3,2).
    /// Assumes the set itself is (3,2).
    pub fn is_maximal_32(&self) -> bool {
        let q = self.field().q();
        let mut grow = Grow32::new(&self.form, self.len() + 1);
        for v in &self.vectors {
            grow.push_unchecked(v.clone());
        }
        nonzero_vectors(q, self.n()).all(|x| grow.contains(&x) || !grow.can_push(&x))
    }

    /// Members that are not self-orthogonal.
    pub fn anisotropic_part(&self) -> OrthoSet {
        self.filter(|v| !self.form.norm(v).is_zero())
    }
}

/// Incrementally grown (3,2)-orthogonal set with its non-orthogonality graph.
struct Grow32<'a> {
    form: &'a BilinearForm,
    vectors: Vec<Vector>,
    adj: Vec<BitSet>,
    capacity: usize,
    members: std::collections::HashSet<Vector>,
}

impl<'a> Grow32<'a> {
    fn new(form: &'a BilinearForm, capacity: usize) -> Self {
        Grow32 {
            form,
            vectors: Vec::new(),
            adj: Vec::new(),
            capacity,
            members: Default::default(),
        }
    }

    fn contains(&self, x: &Vector) -> bool {
        self.members.contains(x)
    }

    fn neighbours_of(&self, x: &Vector) -> BitSet {
        let mut nb = BitSet::new(self.capacity.max(self.vectors.len() + 1));
        for (i, v) in self.vectors.iter().enumerate() {
            if !self.form.apply(x, v).is_zero() {
                nb.insert(i);
            }
        }
        nb
    }

    fn can_push(&self, x: &Vector) -> bool {
        let nb = self.neighbours_of(x);
        let ok = nb.iter().all(|i| !self.adj[i].intersects(&nb));
        ok
    }

    fn push_unchecked(&mut self, x: Vector) {
        let nb = self.neighbours_of(&x);
        let id = self.vectors.len();
        if id >= self.capacity {
            self.capacity = (self.capacity * 2).max(id + 1);
            for row in &mut self.adj {
                let mut wider = BitSet::new(self.capacity);
                wider.union_with(row);
                *row = wider;
            }
        }
        let mut row = BitSet::new(self.capacity);
        for i in nb.iter() {
            self.adj[i].insert(id);
            row.insert(i);
        }
        self.adj.push(row);
        self.members.insert(x.clone());
        self.vectors.push(x);
    }

    fn try_push(&mut self, x: Vector) -> bool {
        if self.can_push(&x) {
            self.push_unchecked(x);
            true
        } else {
            false
        }
    }
}

/// Randomized greedy maximal (3,2)-orthogonal set for the canonical form of a
/// class: nonzero vectors are shuffled by `seed` and kept when the
/// non-orthogonality graph stays triangle-free.
pub fn random_greedy_32(field: &Field, n: usize, kind: FormKind, seed: u64) -> Result<OrthoSet> {
    let form = BilinearForm::canonical(field, n, kind)?;
    random_greedy_32_for(&form, seed)
}

pub fn random_greedy_32_for(form: &BilinearForm, seed: u64) -> Result<OrthoSet> {
    let q = form.field().q();
    let n = form.n();
    let total = (q as u64)
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| Error::TooLarge(format!("greedy over {q}^{n} vectors")))?;
    let mut pool: Vec<Vector> = (1..total).map(|i| Vector::from_index(i, q, n)).collect();
    pool.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut grow = Grow32::new(form, 64);
    for x in pool {
        grow.try_push(x);
    }
    OrthoSet::new(form.clone(), grow.vectors)
}

// ---------------------------------------------------------------------------
// Closed-form values and bounds

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Largest orthogonal set, odd q.
    S22,
    /// Largest orthogonal set, q = 2 (dot: Berlekamp's values).
    S22Binary,
    /// Largest (3,2)-orthogonal set, odd q.
    S32OddQ,
    /// Largest (3,2)-orthogonal set, q = 2.
    S32Binary,
    /// Upper bound on (k,2)-orthogonal sets, odd q.
    K2Bound,
    /// `3 q^{floor(n/2)}`.
    Am32,
    /// Anisotropic vectors in a (3,2)-orthogonal set.
    DBound,
    /// Earlier explicit lower bounds on the (3,2) maximum.
    AhmmohLb,
    /// Weak bound on (3,2)-orthogonal sets, q = 2.
    WeakBinary,
    /// Bound on `|S_v|` in a (3,2)-orthogonal set, q = 2.
    SvBinary,
}

impl BoundKind {
    pub const ALL: [BoundKind; 10] = [
        BoundKind::S22,
        BoundKind::S22Binary,
        BoundKind::S32OddQ,
        BoundKind::S32Binary,
        BoundKind::K2Bound,
        BoundKind::Am32,
        BoundKind::DBound,
        BoundKind::AhmmohLb,
        BoundKind::WeakBinary,
        BoundKind::SvBinary,
    ];
}

/// A formula value; `in_range` is false when the parameters lie outside the
/// hypotheses under which the formula is proved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundValue {
    pub kind: BoundKind,
    pub value: u64,
    pub in_range: bool,
}

fn qpow(q: u64, e: usize) -> Result<u64> {
    q.checked_pow(e as u32).ok_or(Error::Overflow(q))
}

fn need_odd(q: u32) -> Result<u64> {
    if q % 2 == 1 && q >= 3 {
        Ok(q as u64)
    } else {
        Err(Error::BadParams(format!("formula needs odd q, got {q}")))
    }
}

fn odd_q_kind(n: usize, class: FormKind) -> Result<FormKind> {
    match class {
        FormKind::One | FormKind::Gamma => Ok(class),
        _ if n % 2 == 1 => Ok(FormKind::One),
        other => Err(Error::BadClass(format!(
            "{other} is not a class over odd q"
        ))),
    }
}

fn val(kind: BoundKind, value: u64, in_range: bool) -> BoundValue {
    BoundValue {
        kind,
        value,
        in_range,
    }
}

/// Largest orthogonal set for odd q.
pub fn s22(q: u32, n: usize, class: FormKind) -> Result<BoundValue> {
    let qq = need_odd(q)?;
    let class = odd_q_kind(n, class)?;
    let v = if n % 2 == 1 {
        qpow(qq, (n - 1) / 2)?
    } else if n == 0 {
        0
    } else if class == FormKind::One {
        qpow(qq, n / 2)? - 1
    } else {
        qpow(qq, n / 2 - 1)? + 1
    };
    Ok(val(BoundKind::S22, v, n >= 2))
}

/// Largest orthogonal set for q = 2: Berlekamp's values for the dot
/// product, `2^{n/2} - 1` (a totally isotropic half-space) for the hyperbolic form.
pub fn s22_binary(n: usize, class: FormKind) -> Result<BoundValue> {
    let v = match class {
        FormKind::Dot if n <= 5 => n as u64,
        FormKind::Dot if n % 2 == 1 => 1 + qpow(2, (n - 1) / 2)?,
        FormKind::Dot => qpow(2, n / 2)?,
        FormKind::Hyperbolic if n % 2 == 0 && n >= 2 => qpow(2, n / 2)? - 1,
        other => {
            return Err(Error::BadClass(format!(
                "{other} in dimension {n} over GF(2)"
            )))
        }
    };
    Ok(val(BoundKind::S22Binary, v, n >= 1))
}

/// Largest (3,2)-orthogonal set for odd q (proved for q >= 7).
pub fn s32_odd_q(q: u32, n: usize, class: FormKind) -> Result<BoundValue> {
    let qq = need_odd(q)?;
    let class = odd_q_kind(n, class)?;
    let v = if n % 2 == 1 {
        2 * qpow(qq, (n - 1) / 2)? + 1
    } else if n == 0 {
        0
    } else if class == FormKind::One {
        2 * qpow(qq, n / 2)? - 2
    } else if n == 2 {
        4
    } else {
        2 * qpow(qq, n / 2 - 1)? + 4
    };
    Ok(val(BoundKind::S32OddQ, v, q >= 7))
}

/// Largest (3,2)-orthogonal set for q = 2 (dot: proved for odd n >= 21 and
/// even n >= 18; hyperbolic: every even n >= 2).
pub fn s32_binary(n: usize, class: FormKind) -> Result<BoundValue> {
    let (v, in_range) = match class {
        FormKind::Dot if n % 2 == 1 => (qpow(2, n.div_ceil(2))? + 1, n >= 21),
        FormKind::Dot => (qpow(2, n / 2 + 1)? - 3, n >= 18),
        FormKind::Hyperbolic if n % 2 == 0 && n >= 2 => (qpow(2, n / 2 + 1)? - 2, true),
        other => {
            return Err(Error::BadClass(format!(
                "{other} in dimension {n} over GF(2)"
            )))
        }
    };
    Ok(val(BoundKind::S32Binary, v, in_range))
}

/// `floor((k - 1 + (k-1)^2/(q-k+1)) (q^{n/2} + 1))`, exact also for odd n.
pub fn k2_bound(q: u32, n: usize, k: usize) -> Result<BoundValue> {
    let qq = need_odd(q)? as u128;
    let k = k as u128;
    if k < 2 || qq + 1 <= k {
        return Err(Error::BadParams(format!(
            "k2 bound needs 2 <= k <= q, got k={k}, q={q}"
        )));
    }
    // (k-1) + (k-1)^2/(q-k+1) = (k-1) q / (q-k+1) = num / den
    let num = (k - 1) * qq;
    let den = qq - k + 1;
    let qn = qq.checked_pow(n as u32).ok_or(Error::Overflow(q as u64))?;
    // num * sqrt(q^n) = sqrt(num^2 q^n); flooring it first does not change the outer floor
    let root = isqrt(
        num.checked_mul(num)
            .and_then(|x| x.checked_mul(qn))
            .ok_or(Error::Overflow(q as u64))?,
    );
    let v = (root + num) / den;
    Ok(val(
        BoundKind::K2Bound,
        u64::try_from(v).map_err(|_| Error::Overflow(q as u64))?,
        true,
    ))
}

fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// `3 q^{floor(n/2)}`, odd q.
pub fn am_32(q: u32, n: usize) -> Result<BoundValue> {
    let qq = need_odd(q)?;
    Ok(val(BoundKind::Am32, 3 * qpow(qq, n / 2)?, true))
}

/// `max{2n, R(3,n) - 1}` in closed form.
pub fn d_bound(n: usize) -> BoundValue {
    let n = n as u64;
    let v = if n <= 4 { 2 * n } else { n * (n + 1) / 2 - 1 };
    val(BoundKind::DBound, v, true)
}

/// The earlier explicit lower bounds for the (3,2) maximum.
pub fn ahmmoh_lb(q: u32, n: usize, class: FormKind) -> Result<BoundValue> {
    if q == 2 {
        let v = if n % 2 == 1 {
            qpow(2, n.div_ceil(2))?
        } else {
            qpow(2, n / 2 + 1)? - 3
        };
        return Ok(val(BoundKind::AhmmohLb, v, n >= 1));
    }
    let qq = need_odd(q)?;
    let v = match (n % 2 == 1, class) {
        (_, FormKind::Dot | FormKind::Hyperbolic) => {
            return Err(Error::BadClass(format!(
                "{class} is not a class over odd q"
            )));
        }
        (true, FormKind::One) => 2 * qpow(qq, (n - 1) / 2)?,
        (true, FormKind::Gamma) => 2 * qpow(qq, (n - 1) / 2)? - qq + 1,
        (false, _) if n == 0 => 0,
        (false, FormKind::One) => 2 * qpow(qq, n / 2)? - qq - 1,
        (false, FormKind::Gamma) => 2 * qpow(qq, n / 2 - 1)? + 2,
    };
    Ok(val(BoundKind::AhmmohLb, v, n >= 2))
}

/// Weak upper bound for q = 2.
pub fn weak_binary(n: usize) -> Result<BoundValue> {
    if n == 0 {
        return Err(Error::BadParams("weak bound needs n >= 1".into()));
    }
    let tri = (n * (n + 1) / 2) as u64;
    let nn = n as u64;
    let v = match n {
        1 | 3 => qpow(2, n.div_ceil(2))? + 2 * nn - 2,
        _ if n % 2 == 1 => qpow(2, n.div_ceil(2))? + tri - 3,
        2 | 4 => qpow(2, n / 2 + 1)? + 2 * nn - 3,
        _ => qpow(2, n / 2 + 1)? + tri - 4,
    };
    Ok(val(BoundKind::WeakBinary, v, true))
}

/// Bound on `|S_v|` for a (3,2)-orthogonal set over GF(2).
pub fn sv_binary(n: usize, class: FormKind) -> Result<BoundValue> {
    let v = match class {
        FormKind::Dot if n <= 7 => n as u64,
        FormKind::Dot if n % 2 == 1 => 1 + qpow(2, (n - 1) / 2 - 1)?,
        FormKind::Dot => qpow(2, n / 2 - 1)?,
        FormKind::Hyperbolic if n % 2 == 0 && n >= 2 => qpow(2, n / 2 - 1)?,
        other => {
            return Err(Error::BadClass(format!(
                "{other} in dimension {n} over GF(2)"
            )))
        }
    };
    Ok(val(BoundKind::SvBinary, v, n >= 2))
}

/// Dispatches on `kind`; `k` is only read by [`BoundKind::K2Bound`].
pub fn bound_formulas(
    q: u32,
    n: usize,
    class: FormKind,
    kind: BoundKind,
    k: usize,
) -> Result<BoundValue> {
    match kind {
        BoundKind::S22 => s22(q, n, class),
        BoundKind::S22Binary => s22_binary(n, class),
        BoundKind::S32OddQ => s32_odd_q(q, n, class),
        BoundKind::S32Binary => s32_binary(n, class),
        BoundKind::K2Bound => k2_bound(q, n, k),
        BoundKind::Am32 => am_32(q, n),
        BoundKind::DBound => Ok(d_bound(n)),
        BoundKind::AhmmohLb => ahmmoh_lb(q, n, class),
        BoundKind::WeakBinary => weak_binary(n),
        BoundKind::SvBinary => sv_binary(n, class),
    }
}

/// The exact S_{2,2} formula for any supported field order.
pub fn s22_value(q: u32, n: usize, class: FormKind) -> Result<BoundValue> {
    if q == 2 {
        s22_binary(n, class)
    } else {
        s22(q, n, class)
    }
}

/// The S_{3,2} formula for any supported field order.
pub fn s32_value(q: u32, n: usize, class: FormKind) -> Result<BoundValue> {
    if q == 2 {
        s32_binary(n, class)
    } else {
        s32_odd_q(q, n, class)
    }
}
