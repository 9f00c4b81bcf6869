//! Exact maximum orthogonal sets (max clique in the orthogonality graph) and
//! maximum (k,2)-orthogonal sets (max induced K_k-free subgraph of the
//! non-orthogonality graph).
//!
//! Both run the same Russian-doll search: vertices are processed from the
//! last to the first, `c[i]` records the optimum inside `{i, …, n-1}`, and
//! each level only asks whether `c[i+1] + 1` is reachable with `i` included.
//! A final sequential include-first pass with the known optimum returns the
//! lexicographically least optimal set, so results do not depend on the
//! thread count.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::best_32_construction;
use crate::error::{Error, Result};
use crate::forms::{BilinearForm, FormKind};
use crate::gf::FieldCtx;
use crate::graphs::{BitSet, Graph};
use crate::linalg::Vector;
use crate::orthosets::{am_32, k2_bound, s22_value, s32_value, BoundValue, OrthoSet};

pub const DEFAULT_BUDGET_NODES: u64 = 1_000_000_000;
pub const BUDGET_ENV: &str = "ORTHO_BUDGET_NODES";
pub const MAX_CLIQUE_VERTICES: usize = 4096;
pub const MAX_KFREE_VERTICES: usize = 1024;

/// Node budget from `ORTHO_BUDGET_NODES`, else the default.
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET_NODES)
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub budget_nodes: u64,
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget_nodes: default_budget(),
            threads: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    /// Vertex indices, ascending.
    pub best_set: Vec<usize>,
    pub size: usize,
    pub optimal: bool,
    pub budget_hit: bool,
    pub nodes: u64,
    pub elapsed: Duration,
    pub threads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Problem {
    Clique,
    KFree(usize),
}

struct Engine<'a> {
    g: &'a Graph,
    problem: Problem,
    /// Rows of the graph whose cliques partition candidates for the bound.
    cover: Vec<BitSet>,
    cap: usize,
    suffix: Vec<usize>,
    nodes: AtomicU64,
    budget: u64,
    abort: AtomicBool,
    best: Mutex<Vec<usize>>,
}

impl<'a> Engine<'a> {
    fn new(g: &'a Graph, problem: Problem, budget: u64) -> Self {
        let n = g.n();
        let (cover, cap) = match problem {
            Problem::Clique => {
                let c = g.complement();
                ((0..n).map(|v| c.neighbors(v).clone()).collect(), 1)
            }
            Problem::KFree(k) => ((0..n).map(|v| g.neighbors(v).clone()).collect(), k - 1),
        };
        Engine {
            g,
            problem,
            cover,
            cap,
            suffix: vec![0; n + 1],
            nodes: AtomicU64::new(0),
            budget,
            abort: AtomicBool::new(false),
            best: Mutex::new(Vec::new()),
        }
    }

    /// Greedy partition of `p` into cliques of the cover graph; each class
    /// contributes at most `cap` vertices.
    fn cover_bound(&self, p: &BitSet, limit: usize) -> usize {
        let mut rest = p.clone();
        let mut bound = 0;
        while let Some(v) = rest.first() {
            rest.remove(v);
            let mut class = 1;
            let mut cand = rest.intersection(&self.cover[v]);
            // grow a maximal clique; it counts for at most `cap`
            while let Some(u) = cand.first() {
                cand.remove(u);
                cand.intersect_with(&self.cover[u]);
                rest.remove(u);
                class += 1;
            }
            let class = class.min(self.cap);
            bound += class;
            if bound >= limit {
                return bound;
            }
        }
        bound
    }

    /// Candidates still addable after including `w` (all of `p` lies above `w`).
    fn filter(&self, w: usize, p: &BitSet, chosen: &BitSet) -> BitSet {
        match self.problem {
            Problem::Clique => p.intersection(self.g.neighbors(w)),
            Problem::KFree(k) => {
                let nw = self.g.neighbors(w);
                let mut forbid = BitSet::new(self.g.n());
                let x = chosen.intersection(nw);
                self.forbid_cliques(&x, k - 2, nw.intersection(p), &mut forbid);
                let mut out = p.clone();
                out.difference_with(&forbid);
                out
            }
        }
    }

    /// Adds to `forbid` every candidate in `acc` that completes a K_k with a
    /// `need`-clique drawn from `x`.
    fn forbid_cliques(&self, x: &BitSet, need: usize, acc: BitSet, forbid: &mut BitSet) {
        if acc.is_empty() {
            return;
        }
        if need == 0 {
            forbid.union_with(&acc);
            return;
        }
        for u in x.iter() {
            let mut x2 = x.intersection(self.g.neighbors(u));
            x2.retain_above(u);
            self.forbid_cliques(&x2, need - 1, acc.intersection(self.g.neighbors(u)), forbid);
        }
    }

    fn tick(&self) -> bool {
        if self.abort.load(Ordering::Relaxed) {
            return false;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.abort.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn record(&self, set: &[usize]) {
        let mut best = self.best.lock().expect("best set lock");
        if set.len() > best.len() {
            *best = set.to_vec();
        }
    }

    /// Can `chosen` be extended from `p` to `target` vertices?
    fn expand(
        &self,
        chosen: &mut Vec<usize>,
        chosen_set: &mut BitSet,
        p: BitSet,
        target: usize,
    ) -> bool {
        if !self.tick() {
            return false;
        }
        if chosen.len() >= target {
            self.record(chosen);
            return true;
        }
        let need = target - chosen.len();
        if p.count() < need || self.cover_bound(&p, need) < need {
            return false;
        }
        let mut p = p;
        while let Some(w) = p.first() {
            if self.suffix[w] < need || p.count() < need {
                return false;
            }
            p.remove(w);
            let next = self.filter(w, &p, chosen_set);
            chosen.push(w);
            chosen_set.insert(w);
            let found = self.expand(chosen, chosen_set, next, target);
            chosen.pop();
            chosen_set.remove(w);
            if found {
                return true;
            }
            if self.abort.load(Ordering::Relaxed) {
                return false;
            }
        }
        false
    }

    /// One level of the outer loop: is there a set of size `target` whose
    /// least vertex is `i`? The second-vertex branches run in parallel.
    fn level(&self, i: usize, target: usize, parallel: bool) -> bool {
        let n = self.g.n();
        let mut chosen_set = BitSet::new(n);
        let p = self.filter(i, &BitSet::range_from(n, i + 1), &chosen_set);
        if target <= 1 {
            self.record(&[i]);
            return true;
        }
        if !parallel {
            chosen_set.insert(i);
            return self.expand(&mut vec![i], &mut chosen_set, p, target);
        }
        if !self.tick() || p.count() < target - 1 || self.cover_bound(&p, target - 1) < target - 1 {
            return false;
        }
        chosen_set.insert(i);
        let branches: Vec<usize> = p.iter().collect();
        branches.par_iter().any(|&w| {
            if self.suffix[w] < target - 1 {
                return false;
            }
            let mut rest = p.clone();
            rest.retain_above(w);
            let mut cs = chosen_set.clone();
            let next = self.filter(w, &rest, &cs);
            cs.insert(w);
            self.expand(&mut vec![i, w], &mut cs, next, target)
        })
    }

    fn run(mut self, threads: usize) -> Result<SearchReport> {
        let start = Instant::now();
        let n = self.g.n();
        let parallel = threads > 1;
        for i in (0..n).rev() {
            let target = self.suffix[i + 1] + 1;
            let found = self.level(i, target, parallel);
            if self.abort.load(Ordering::Relaxed) {
                break;
            }
            self.suffix[i] = if found { target } else { self.suffix[i + 1] };
        }
        let budget_hit = self.abort.load(Ordering::Relaxed);
        let mut best_set = if budget_hit {
            self.best.get_mut().expect("best set lock").clone()
        } else {
            chosen_from_record(&self, self.suffix[0])?
        };
        best_set.sort_unstable();
        self.verify(&best_set)?;
        Ok(SearchReport {
            size: best_set.len(),
            best_set,
            optimal: !budget_hit,
            budget_hit,
            nodes: self.nodes.load(Ordering::Relaxed),
            elapsed: start.elapsed(),
            threads,
        })
    }

    fn verify(&self, set: &[usize]) -> Result<()> {
        let ok = match self.problem {
            Problem::Clique => set
                .iter()
                .enumerate()
                .all(|(a, &u)| set[a + 1..].iter().all(|&v| self.g.has_edge(u, v))),
            Problem::KFree(k) => !self.g.induced(set).has_clique(k),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvariantViolation(
                "search returned a set violating its property".into(),
            ))
        }
    }
}

/// Include-first search for a set of the known optimum size; the first hit
/// is the lexicographically least optimal set.
fn chosen_from_record(engine: &Engine<'_>, omega: usize) -> Result<Vec<usize>> {
    let n = engine.g.n();
    let mut chosen = Vec::new();
    let mut chosen_set = BitSet::new(n);
    if omega == 0 {
        return Ok(chosen);
    }
    if lex_first(engine, &mut chosen, &mut chosen_set, BitSet::full(n), omega) {
        Ok(chosen)
    } else {
        Err(Error::InvariantViolation(
            "optimum not reconstructible".into(),
        ))
    }
}

fn lex_first(
    engine: &Engine<'_>,
    chosen: &mut Vec<usize>,
    chosen_set: &mut BitSet,
    p: BitSet,
    target: usize,
) -> bool {
    if chosen.len() >= target {
        return true;
    }
    let need = target - chosen.len();
    if p.count() < need || engine.cover_bound(&p, need) < need {
        return false;
    }
    let mut p = p;
    while let Some(w) = p.first() {
        if engine.suffix[w] < need || p.count() < need {
            return false;
        }
        p.remove(w);
        let next = engine.filter(w, &p, chosen_set);
        chosen.push(w);
        chosen_set.insert(w);
        if lex_first(engine, chosen, chosen_set, next, target) {
            return true;
        }
        chosen.pop();
        chosen_set.remove(w);
    }
    false
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads <= 1 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::BadParams(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Maximum clique.
pub fn max_clique(g: &Graph, opts: SearchOptions) -> Result<SearchReport> {
    if g.n() > MAX_CLIQUE_VERTICES {
        return Err(Error::TooLarge(format!(
            "{} vertices (limit {MAX_CLIQUE_VERTICES})",
            g.n()
        )));
    }
    let threads = opts.threads.max(1);
    with_pool(threads, || {
        Engine::new(g, Problem::Clique, opts.budget_nodes).run(threads)
    })?
}

/// Maximum vertex set inducing no `K_k`.
pub fn max_induced_kfree(g: &Graph, k: usize, opts: SearchOptions) -> Result<SearchReport> {
    if k < 2 {
        return Err(Error::BadParams(format!("k must be at least 2, got {k}")));
    }
    if g.n() > MAX_KFREE_VERTICES {
        return Err(Error::TooLarge(format!(
            "{} vertices (limit {MAX_KFREE_VERTICES})",
            g.n()
        )));
    }
    let threads = opts.threads.max(1);
    with_pool(threads, || {
        Engine::new(g, Problem::KFree(k), opts.budget_nodes).run(threads)
    })?
}

/// Which extremal quantity a vector search computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchProblem {
    /// Largest orthogonal set.
    Orthogonal,
    /// Largest (k,2)-orthogonal set.
    Kl,
}

/// Result of searching `F_q^n \ {0}` under the canonical form of a class.
#[derive(Clone, Debug)]
pub struct VectorSearch {
    pub problem: SearchProblem,
    pub q: u32,
    pub n: usize,
    pub kind: FormKind,
    /// 2 for orthogonal sets.
    pub k: usize,
    pub form: BilinearForm,
    /// All nonzero vectors in encoding order; vertex `i` is `vectors[i]`.
    pub vectors: Vec<Vector>,
    pub report: SearchReport,
    pub budget_nodes: u64,
    /// Closed-form value of the searched quantity, when one exists.
    pub formula: Option<BoundValue>,
    /// Size of the best explicit construction for the cell.
    pub construction_size: Option<usize>,
}

/// Deterministic part of a search result.
#[derive(Clone, Debug, Serialize)]
pub struct SearchCertificate {
    pub v: u32,
    pub problem: SearchProblem,
    pub q: u32,
    pub n: usize,
    pub class: FormKind,
    pub k: usize,
    pub l: usize,
    pub size: usize,
    pub optimal: bool,
    pub budget_nodes: u64,
    pub formula: Option<BoundValue>,
    pub formula_match: Option<bool>,
    pub construction_size: Option<usize>,
    pub set: crate::orthosets::OrthoSetRecord,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed_ms: u128,
    pub threads: usize,
    pub budget_hit: bool,
}

impl VectorSearch {
    pub fn size(&self) -> usize {
        self.report.size
    }

    pub fn best_set(&self) -> Result<OrthoSet> {
        OrthoSet::new(
            self.form.clone(),
            self.report
                .best_set
                .iter()
                .map(|&i| self.vectors[i].clone())
                .collect(),
        )
    }

    pub fn formula_match(&self) -> Option<bool> {
        self.formula.map(|f| f.value == self.report.size as u64)
    }

    pub fn certificate(&self) -> Result<SearchCertificate> {
        Ok(SearchCertificate {
            v: 1,
            problem: self.problem,
            q: self.q,
            n: self.n,
            class: self.kind,
            k: self.k,
            l: 2,
            size: self.report.size,
            optimal: self.report.optimal,
            budget_nodes: self.budget_nodes,
            formula: self.formula,
            formula_match: self.formula_match(),
            construction_size: self.construction_size,
            set: self.best_set()?.to_record(),
        })
    }

    pub fn stats(&self) -> SearchStats {
        SearchStats {
            nodes: self.report.nodes,
            elapsed_ms: self.report.elapsed.as_millis(),
            threads: self.report.threads,
            budget_hit: self.report.budget_hit,
        }
    }
}

fn cell_setup(
    q: u32,
    n: usize,
    kind: FormKind,
    limit: usize,
) -> Result<(BilinearForm, Vec<Vector>)> {
    let field = FieldCtx::from_order(q as u64)?;
    let form = BilinearForm::canonical(&field, n, kind)?;
    let total = (q as u64)
        .checked_pow(n as u32)
        .filter(|&t| t - 1 <= limit as u64)
        .ok_or_else(|| {
            Error::TooLarge(format!("{q}^{n} - 1 vertices exceeds the limit of {limit}"))
        })?;
    let vectors = (1..total).map(|i| Vector::from_index(i, q, n)).collect();
    Ok((form, vectors))
}

/// Largest orthogonal set, compared with the closed-form value.
pub fn max_orthogonal_set(
    q: u32,
    n: usize,
    kind: FormKind,
    opts: SearchOptions,
) -> Result<VectorSearch> {
    let (form, vectors) = cell_setup(q, n, kind, MAX_CLIQUE_VERTICES)?;
    let g = Graph::from_fn(vectors.len(), |i, j| {
        form.apply(&vectors[i], &vectors[j]).is_zero()
    });
    let report = max_clique(&g, opts)?;
    Ok(VectorSearch {
        problem: SearchProblem::Orthogonal,
        q,
        n,
        kind,
        k: 2,
        formula: s22_value(q, n, kind).ok(),
        construction_size: None,
        form,
        vectors,
        report,
        budget_nodes: opts.budget_nodes,
    })
}

/// Largest (k,2)-orthogonal set (`l = 2` only).
pub fn max_kl_set(
    q: u32,
    n: usize,
    kind: FormKind,
    k: usize,
    opts: SearchOptions,
) -> Result<VectorSearch> {
    if k < 2 {
        return Err(Error::BadParams(format!("k must be at least 2, got {k}")));
    }
    let (form, vectors) = cell_setup(q, n, kind, MAX_KFREE_VERTICES)?;
    let g = Graph::from_fn(vectors.len(), |i, j| {
        !form.apply(&vectors[i], &vectors[j]).is_zero()
    });
    let report = max_induced_kfree(&g, k, opts)?;
    let formula = match k {
        2 => s22_value(q, n, kind).ok(),
        3 => s32_value(q, n, kind).ok(),
        _ => None,
    };
    let construction_size = if k == 3 {
        best_32_construction(q as u64, n, kind)
            .and_then(|c| c.ok())
            .map(|c| c.len())
    } else if k == 4 && n == 4 && q % 2 == 1 && kind == FormKind::One {
        crate::constructions::example_k4_n4(q as u64)
            .ok()
            .map(|c| c.len())
    } else {
        None
    };
    Ok(VectorSearch {
        problem: SearchProblem::Kl,
        q,
        n,
        kind,
        k,
        formula,
        construction_size,
        form,
        vectors,
        report,
        budget_nodes: opts.budget_nodes,
    })
}

/// One `(q, n, class, k)` cell of a comparison table; `k = 2` means the
/// orthogonal-set problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub q: u32,
    pub n: usize,
    pub class: FormKind,
    pub k: usize,
    /// Exact value the search must reproduce, when known independently of
    /// the closed forms.
    pub expect: Option<usize>,
}

impl Cell {
    pub fn new(q: u32, n: usize, class: FormKind, k: usize) -> Self {
        Cell {
            q,
            n,
            class,
            k,
            expect: None,
        }
    }

    pub fn expecting(mut self, value: usize) -> Self {
        self.expect = Some(value);
        self
    }
}

/// Orthogonal-set cells: odd-q formula cells and GF(2) for n = 2..8.
pub fn s22_cells() -> Vec<Cell> {
    use FormKind::*;
    let mut cells: Vec<Cell> = [
        (3, 2, One),
        (3, 2, Gamma),
        (3, 3, One),
        (3, 4, One),
        (3, 4, Gamma),
        (5, 2, One),
        (5, 2, Gamma),
        (5, 3, One),
        (7, 2, One),
        (7, 2, Gamma),
    ]
    .into_iter()
    .map(|(q, n, c)| Cell::new(q, n, c, 2))
    .collect();
    cells.extend((2..=8).map(|n| Cell::new(2, n, Dot, 2)));
    cells.extend([2, 4, 6].map(|n| Cell::new(2, n, Hyperbolic, 2)));
    cells
}

/// (3,2) cells with proved values plus the small GF(2) dot cells.
pub fn s32_cells() -> Vec<Cell> {
    use FormKind::*;
    let mut cells = vec![Cell::new(7, 2, One, 3), Cell::new(7, 2, Gamma, 3)];
    cells.extend([2, 4, 6].map(|n| Cell::new(2, n, Hyperbolic, 3)));
    cells.push(Cell::new(2, 2, Dot, 3).expecting(3));
    cells.push(Cell::new(2, 4, Dot, 3).expecting(S32_2_4_DOT));
    cells
}

/// Cells outside the proved ranges, searched and checked only against
/// constructions and upper bounds.
pub fn data_cells() -> Vec<Cell> {
    use FormKind::*;
    let mut cells: Vec<Cell> = [
        (3, 2, One),
        (3, 2, Gamma),
        (3, 3, One),
        (3, 4, One),
        (3, 4, Gamma),
        (5, 2, One),
        (5, 2, Gamma),
        (5, 3, One),
    ]
    .into_iter()
    .map(|(q, n, c)| Cell::new(q, n, c, 3))
    .collect();
    cells.extend([3, 5, 6].map(|n| Cell::new(2, n, Dot, 3)));
    cells.extend([(3, 2), (5, 2), (3, 4)].map(|(q, n)| Cell::new(q, n, One, 4)));
    cells
}

/// Exact S_{3,2}(2, 4, dot), found by exhaustive search over the 15 vectors.
pub const S32_2_4_DOT: usize = 8;

/// Every searched cell of the acceptance table.
pub fn acceptance_cells() -> Vec<Cell> {
    let mut cells = s22_cells();
    cells.extend(s32_cells());
    cells.extend(data_cells());
    cells
}

/// Beyond the acceptance table: S_{3,2}(7, 3) on 342 vertices.
pub fn stretch_cells() -> Vec<Cell> {
    vec![Cell::new(7, 3, FormKind::One, 3)]
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub cell: Cell,
    pub value: Option<usize>,
    pub optimal: bool,
    pub construction: Option<usize>,
    pub formula: Option<BoundValue>,
    pub am_32: Option<u64>,
    pub k2_bound: Option<u64>,
    pub ok: bool,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub search: Option<VectorSearch>,
}

/// Runs every cell and checks construction <= value <= bounds, and value =
/// formula wherever the formula is proved for the cell.
pub fn table(cells: &[Cell], opts: SearchOptions) -> Vec<TableRow> {
    cells.iter().map(|&cell| table_row(cell, opts)).collect()
}

fn table_row(cell: Cell, opts: SearchOptions) -> TableRow {
    let mut row = TableRow {
        cell,
        value: None,
        optimal: false,
        construction: None,
        formula: None,
        am_32: None,
        k2_bound: None,
        ok: true,
        notes: Vec::new(),
        search: None,
    };
    let result = if cell.k == 2 {
        max_orthogonal_set(cell.q, cell.n, cell.class, opts)
    } else {
        max_kl_set(cell.q, cell.n, cell.class, cell.k, opts)
    };
    let s = match result {
        Ok(s) => s,
        Err(e) => {
            row.ok = false;
            row.notes.push(e.to_string());
            return row;
        }
    };
    let v = s.size();
    row.value = Some(v);
    row.optimal = s.report.optimal;
    row.construction = s.construction_size;
    row.formula = s.formula;
    if !s.report.optimal {
        row.ok = false;
        row.notes.push("budget exceeded".into());
    }
    if let Some(e) = cell.expect {
        if e != v {
            row.ok = false;
            row.notes.push(format!("expected {e}, search found {v}"));
        }
    }
    if let Some(c) = s.construction_size {
        if c > v {
            row.ok = false;
            row.notes
                .push(format!("construction {c} exceeds search value {v}"));
        }
    }
    if let Some(f) = s.formula.filter(|f| f.in_range) {
        if f.value != v as u64 {
            row.ok = false;
            row.notes
                .push(format!("formula {} != search value {v}", f.value));
        }
    }
    if cell.q % 2 == 1 {
        if cell.k == 3 {
            if let Ok(b) = am_32(cell.q, cell.n) {
                row.am_32 = Some(b.value);
                if v as u64 > b.value {
                    row.ok = false;
                    row.notes
                        .push(format!("value {v} exceeds 3q^floor(n/2) = {}", b.value));
                }
            }
        }
        if cell.k >= 3 {
            if let Ok(b) = k2_bound(cell.q, cell.n, cell.k) {
                row.k2_bound = Some(b.value);
                if v as u64 > b.value {
                    row.ok = false;
                    row.notes
                        .push(format!("value {v} exceeds the k2 bound {}", b.value));
                }
            }
        }
    }
    row.search = Some(s);
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SearchOptions {
        SearchOptions {
            budget_nodes: 50_000_000,
            threads: 1,
        }
    }

    #[test]
    fn clique_examples() {
        assert_eq!(max_clique(&Graph::complete(3), opts()).unwrap().size, 3);
        let empty = max_clique(&Graph::new(10), opts()).unwrap();
        assert_eq!(empty.size, 1);
        assert_eq!(empty.best_set, vec![0]);
        assert_eq!(max_clique(&Graph::new(0), opts()).unwrap().size, 0);
    }

    #[test]
    fn kfree_examples() {
        assert_eq!(
            max_induced_kfree(&Graph::complete(4), 3, opts())
                .unwrap()
                .size,
            2
        );
        assert_eq!(
            max_induced_kfree(&Graph::cycle(5), 3, opts()).unwrap().size,
            5
        );
        let r = max_induced_kfree(&Graph::complete(6), 4, opts()).unwrap();
        assert_eq!(r.best_set, vec![0, 1, 2]);
    }

    #[test]
    fn clique_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=12);
            let g = Graph::from_fn(n, |_, _| rng.gen_bool(0.5));
            let omega = (0u32..1 << n)
                .filter(|&m| {
                    let vs: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
                    vs.iter()
                        .enumerate()
                        .all(|(a, &u)| vs[a + 1..].iter().all(|&v| g.has_edge(u, v)))
                })
                .map(|m| m.count_ones() as usize)
                .max()
                .unwrap();
            assert_eq!(max_clique(&g, opts()).unwrap().size, omega);
            for k in 2..=4 {
                let best = (0u32..1 << n)
                    .filter(|&m| {
                        let vs: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
                        !g.induced(&vs).has_clique(k)
                    })
                    .map(|m| m.count_ones() as usize)
                    .max()
                    .unwrap();
                assert_eq!(max_induced_kfree(&g, k, opts()).unwrap().size, best);
            }
        }
    }

    #[test]
    fn lexicographically_least() {
        // two disjoint triangles: the least maximum clique is {0, 1, 2}
        let g = Graph::from_edges(6, &[(3, 4), (4, 5), (3, 5), (0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(max_clique(&g, opts()).unwrap().best_set, vec![0, 1, 2]);
        let g = Graph::from_edges(6, &[(3, 4), (4, 5), (3, 5), (0, 1), (1, 2), (0, 2)]).unwrap();
        let par = max_clique(
            &g,
            SearchOptions {
                threads: 4,
                ..opts()
            },
        )
        .unwrap();
        assert_eq!(par.best_set, vec![0, 1, 2]);
    }

    #[test]
    fn budget_hit_is_reported() {
        let g = Graph::cycle(40);
        let r = max_induced_kfree(
            &g,
            3,
            SearchOptions {
                budget_nodes: 5,
                threads: 1,
            },
        )
        .unwrap();
        assert!(r.budget_hit);
        assert!(!r.optimal);
    }

    #[test]
    fn small_vector_cells() {
        assert_eq!(
            max_orthogonal_set(3, 4, FormKind::One, opts())
                .unwrap()
                .size(),
            8
        );
        assert_eq!(
            max_orthogonal_set(3, 3, FormKind::One, opts())
                .unwrap()
                .size(),
            3
        );
        assert_eq!(
            max_kl_set(2, 2, FormKind::Dot, 3, opts()).unwrap().size(),
            3
        );
        assert_eq!(
            max_kl_set(2, 4, FormKind::Hyperbolic, 3, opts())
                .unwrap()
                .size(),
            6
        );
        assert_eq!(
            max_kl_set(7, 2, FormKind::Gamma, 3, opts()).unwrap().size(),
            4
        );
    }
}
