use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orthokit::charsum::{bilinear_char_sum, count_orthogonal_pairs, random_vector_set};
use orthokit::constructions::{self, ConstructionName};
use orthokit::forms::{equivalence_witness, FormRecord};
use orthokit::graphs::{ramsey_facts, verify_c5_lemma, verify_r34_upper};
use orthokit::search::{self, Cell, SearchOptions};
use orthokit::{BilinearForm, Error, FieldCtx, FormKind, OrthoSet, Vector};
use rand::SeedableRng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "orthokit",
    version,
    about = "Orthogonal and almost orthogonal vector sets over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe GF(q) and optionally combine two elements.
    Field {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
    },
    /// Symmetric bilinear forms.
    Form {
        #[command(subcommand)]
        op: FormOp,
    },
    /// Emit an explicit construction as a set file.
    Construct {
        name: ConstructionName,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: Option<FormKind>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a set file for the (k,l) property.
    Verify {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        l: usize,
        #[arg(long, env = "ORTHO_BUDGET_NODES", default_value_t = search::DEFAULT_BUDGET_NODES)]
        budget_nodes: u64,
    },
    /// Exact search; k = 2 is the orthogonal-set problem.
    Search(SearchArgs),
    /// Character-sum bounds on random sets.
    Charsum {
        mode: CharsumMode,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        form: Option<FormKind>,
        #[arg(long, default_value_t = 1)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Graph facts used by the bounds.
    Graphs { which: GraphsWhich },
    /// Search a suite of cells and compare with constructions and formulas.
    Table {
        #[arg(long, default_value = "acceptance")]
        suite: Suite,
        #[arg(long, env = "ORTHO_BUDGET_NODES", default_value_t = search::DEFAULT_BUDGET_NODES)]
        budget_nodes: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Re-verify a set file and write its certificate.
    Certify {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum FormOp {
    Classify(FormArgs),
    Canonical(FormArgs),
    Diagonalize(FormArgs),
    /// Restriction to the complement of span{v, w}.
    Restrict {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
    },
    /// Witness M with M^T B M = A for A = --matrix, B = --other.
    Equiv {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        other: String,
    },
}

/// A form given by file, by rows (`"1,0;0,2"`), or by class.
#[derive(Args)]
struct FormArgs {
    #[arg(long)]
    form_file: Option<PathBuf>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    class: Option<FormKind>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    class: Option<FormKind>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, env = "ORTHO_BUDGET_NODES", default_value_t = search::DEFAULT_BUDGET_NODES)]
    budget_nodes: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Full report (certificate and run statistics).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Certificate only; identical for any thread count.
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CharsumMode {
    Vinogradov,
    Count,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphsWhich {
    C5,
    Ramsey,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Acceptance,
    Stretch,
}

enum Failure {
    Verification(String),
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(msg),
            Error::NotEquivalent
            | Error::NotOrthogonal
            | Error::Not32Orthogonal
            | Error::NotMember
            | Error::InvariantViolation(_)
            | Error::BoundViolated(_)
            | Error::WitnessNotFound(_)
            | Error::LinearlyDependent
            | Error::Degenerate => Failure::Verification(msg),
            _ => Failure::Input(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, code) = match run(cli.command) {
        Ok(v) => {
            let code = if v.get("ok").and_then(Value::as_bool) == Some(false)
                || v.get("holds").and_then(Value::as_bool) == Some(false)
            {
                1
            } else if v.get("budget_hit").and_then(Value::as_bool) == Some(true) {
                3
            } else {
                0
            };
            (Some(v), code)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            (None, 1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            (None, 2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("budget exceeded: {m}");
            (None, 3)
        }
    };
    if let Some(v) = value {
        let text = serde_json::to_string_pretty(&v).expect("serializable output");
        // a closed pipe downstream is not an error of ours
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }
    ExitCode::from(code)
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Field { q, a, b } => field_info(q, a, b),
        Command::Form { op } => form_op(op),
        Command::Construct {
            name,
            q,
            n,
            eps,
            out,
        } => construct(name, q, n, eps, out.as_deref()),
        Command::Verify {
            set,
            k,
            l,
            budget_nodes,
        } => {
            let s = read_set(&set)?;
            let verdict = s.kl_verdict(k, l, budget_nodes)?;
            let mut v = serde_json::to_value(&verdict)?;
            v["v"] = json!(1);
            v["size"] = json!(s.len());
            Ok(v)
        }
        Command::Search(args) => search_cmd(args),
        Command::Charsum {
            mode,
            q,
            n,
            form,
            sample,
            seed,
        } => charsum_cmd(mode, q, n, form, sample, seed),
        Command::Graphs { which } => graphs_cmd(which),
        Command::Table {
            suite,
            budget_nodes,
            threads,
        } => table_cmd(
            suite,
            SearchOptions {
                budget_nodes,
                threads,
            },
        ),
        Command::Certify { set, out } => certify(&set, &out),
    }
}

fn field_info(q: u64, a: Option<u64>, b: Option<u64>) -> Outcome {
    let f = FieldCtx::from_order(q)?;
    let mut v = json!({
        "v": 1,
        "field": f.spec(),
        "q": f.q(),
        "squares": f.nonzero_elements().filter(|&x| f.is_square(x)).count(),
        "nonsquare": f.gamma().map(|g| g.0),
    });
    if let (Some(a), Some(b)) = (a, b) {
        let (x, y) = (f.element(a)?, f.element(b)?);
        v["a"] = json!(a);
        v["b"] = json!(b);
        v["sum"] = json!(f.add(x, y).0);
        v["difference"] = json!(f.sub(x, y).0);
        v["product"] = json!(f.mul(x, y).0);
        v["quotient"] = json!(f.div(x, y).ok().map(|z| z.0));
    }
    Ok(v)
}

fn parse_row(text: &str) -> std::result::Result<Vec<u32>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| Failure::Input(format!("bad entry {t:?}: {e}")))
        })
        .collect()
}

fn parse_rows(text: &str) -> std::result::Result<Vec<Vec<u32>>, Failure> {
    text.split(';').map(parse_row).collect()
}

fn parse_vector(field: &FieldCtx, n: usize, text: &str) -> std::result::Result<Vector, Failure> {
    let vals = parse_row(text)?;
    if vals.len() != n {
        return Err(Failure::Input(format!(
            "vector {text:?} has {} entries, expected {n}",
            vals.len()
        )));
    }
    for &x in &vals {
        field.element(x as u64)?;
    }
    Ok(Vector::from_values(&vals))
}

fn load_form(args: &FormArgs) -> std::result::Result<BilinearForm, Failure> {
    if let Some(path) = &args.form_file {
        return Ok(BilinearForm::from_record(&FormRecord::parse(
            &fs::read_to_string(path)?,
        )?)?);
    }
    let q = args
        .q
        .ok_or_else(|| Failure::Input("need --form-file or --q".into()))?;
    let field = FieldCtx::from_order(q)?;
    if let Some(m) = &args.matrix {
        let rows = parse_rows(m)?;
        return Ok(BilinearForm::from_rows(&field, rows.len(), &rows)?);
    }
    match (args.n, args.class) {
        (Some(n), Some(class)) => Ok(BilinearForm::canonical(&field, n, class)?),
        _ => Err(Failure::Input("need --matrix or --n with --class".into())),
    }
}

fn form_op(op: FormOp) -> Outcome {
    match op {
        FormOp::Classify(args) => {
            let b = load_form(&args)?;
            let c = b.classify();
            Ok(json!({"v": 1, "class": c, "kind": c.kind()}))
        }
        FormOp::Canonical(args) => {
            let b = load_form(&args)?;
            let kind = b.classify().kind().ok_or(Error::Degenerate)?;
            let c = BilinearForm::canonical(b.field(), b.n(), kind)?;
            Ok(json!({"v": 1, "kind": kind, "form": c.to_record()}))
        }
        FormOp::Diagonalize(args) => {
            let b = load_form(&args)?;
            let (d, m) = b.diagonalize()?;
            Ok(json!({"v": 1, "d": d.to_rows(), "m": m.to_rows()}))
        }
        FormOp::Restrict { form, v, w } => {
            let b = load_form(&form)?;
            let (v, w) = (
                parse_vector(b.field(), b.n(), &v)?,
                parse_vector(b.field(), b.n(), &w)?,
            );
            let r = b.restrict_to_complement(&v, &w)?;
            Ok(json!({
                "v": 1,
                "basis": r.basis.iter().map(Vector::values).collect::<Vec<_>>(),
                "gram": r.form.matrix().to_rows(),
                "hypothesis": r.hypothesis,
                "degenerate": r.degenerate,
                "class": r.class,
                "epsilon_preserved": r.epsilon_preserved,
                "binary_type_preserved": r.binary_type_preserved,
                "ok": r.lemma_holds(),
            }))
        }
        FormOp::Equiv { form, other } => {
            let a = load_form(&form)?;
            let rows = parse_rows(&other)?;
            let b = BilinearForm::from_rows(a.field(), rows.len(), &rows)?;
            match equivalence_witness(&a, &b) {
                Ok(m) => Ok(json!({"v": 1, "equivalent": true, "witness": m.to_rows()})),
                Err(Error::NotEquivalent) => {
                    Ok(json!({"v": 1, "equivalent": false, "witness": null}))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn construct(
    name: ConstructionName,
    q: u64,
    n: usize,
    eps: Option<FormKind>,
    out: Option<&Path>,
) -> Outcome {
    let c = constructions::build(name, q, n, eps)?;
    c.verify()?;
    let mut v = serde_json::to_value(c.set.to_record())?;
    v["construction"] = json!({
        "name": c.name,
        "class": c.kind,
        "k": c.k,
        "l": c.l,
        "advertised_size": c.advertised_size,
        "parts": c.parts.iter().map(|p| json!({"label": p.label, "positions": p.positions})).collect::<Vec<_>>(),
        "disjoint": c.disjoint,
    });
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&v)? + "\n")?;
    }
    Ok(v)
}

fn read_set(path: &Path) -> std::result::Result<OrthoSet, Failure> {
    Ok(OrthoSet::parse(&fs::read_to_string(path)?)?)
}

fn default_class(q: u32, class: Option<FormKind>) -> FormKind {
    class.unwrap_or(if q == 2 { FormKind::Dot } else { FormKind::One })
}

fn search_cmd(args: SearchArgs) -> Outcome {
    let class = default_class(args.q, args.class);
    let opts = SearchOptions {
        budget_nodes: args.budget_nodes,
        threads: args.threads,
    };
    let s = if args.k == 2 {
        search::max_orthogonal_set(args.q, args.n, class, opts)?
    } else {
        search::max_kl_set(args.q, args.n, class, args.k, opts)?
    };
    let cert = serde_json::to_value(s.certificate()?)?;
    let stats = serde_json::to_value(s.stats())?;
    if let Some(path) = &args.cert {
        fs::write(path, serde_json::to_string_pretty(&cert)? + "\n")?;
    }
    let report = json!({
        "v": 1,
        "certificate": cert,
        "stats": stats,
        "budget_hit": s.report.budget_hit,
    });
    if let Some(path) = &args.json {
        fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    Ok(report)
}

fn charsum_cmd(
    mode: CharsumMode,
    q: u64,
    n: usize,
    form: Option<FormKind>,
    sample: usize,
    seed: u64,
) -> Outcome {
    let field = FieldCtx::from_order(q)?;
    let kind = default_class(field.q(), form);
    let b = BilinearForm::canonical(&field, n, kind)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut instances = Vec::new();
    let mut worst: Option<(f64, Value)> = None;
    let mut all_ok = true;
    for _ in 0..sample.max(1) {
        let x = random_vector_set(&field, n, None, &mut rng)?;
        let y = random_vector_set(&field, n, None, &mut rng)?;
        let inst = match mode {
            CharsumMode::Vinogradov => match bilinear_char_sum::<f64>(&b, &x, &y) {
                Ok(s) => {
                    json!({"x": x.len(), "y": y.len(), "sum_re": s.sum_re, "sum_im": s.sum_im, "bound": s.bound, "ok": true})
                }
                Err(Error::BoundViolated(m)) => {
                    json!({"x": x.len(), "y": y.len(), "ok": false, "error": m})
                }
                Err(e) => return Err(e.into()),
            },
            CharsumMode::Count => match count_orthogonal_pairs(&b, &x, &y) {
                Ok(c) => json!({
                    "x": x.len(), "y": y.len(), "count": c.count,
                    "sum_re": c.count as f64 - c.expected, "sum_im": 0.0, "bound": c.bound, "ok": true,
                }),
                Err(Error::BoundViolated(m)) => {
                    json!({"x": x.len(), "y": y.len(), "ok": false, "error": m})
                }
                Err(e) => return Err(e.into()),
            },
        };
        let ok = inst["ok"].as_bool() == Some(true);
        all_ok &= ok;
        let ratio = if ok {
            let (re, im, bd) = (
                inst["sum_re"].as_f64().unwrap(),
                inst["sum_im"].as_f64().unwrap(),
                inst["bound"].as_f64().unwrap(),
            );
            re.hypot(im) / bd
        } else {
            f64::INFINITY
        };
        if worst.as_ref().is_none_or(|(r, _)| ratio > *r) {
            worst = Some((ratio, inst.clone()));
        }
        instances.push(inst);
    }
    let (_, w) = worst.expect("at least one sample");
    Ok(json!({
        "v": 1,
        "mode": match mode { CharsumMode::Vinogradov => "vinogradov", CharsumMode::Count => "count" },
        "q": q,
        "n": n,
        "form": kind,
        "sample": sample.max(1),
        "seed": seed,
        "sum_re": w.get("sum_re"),
        "sum_im": w.get("sum_im"),
        "bound": w.get("bound"),
        "ok": all_ok,
        "instances": instances,
    }))
}

fn graphs_cmd(which: GraphsWhich) -> Outcome {
    match which {
        GraphsWhich::C5 => {
            Ok(json!({"v": 1, "c5_lemma": verify_c5_lemma(), "ok": verify_c5_lemma()}))
        }
        GraphsWhich::Ramsey => {
            let facts = ramsey_facts()?;
            let mut v = serde_json::to_value(&facts)?;
            v["v"] = json!(1);
            v["r34_upper_verified"] = json!(verify_r34_upper());
            v["ok"] = json!(facts.r33_upper_verified);
            Ok(v)
        }
    }
}

fn table_cmd(suite: Suite, opts: SearchOptions) -> Outcome {
    let cells: Vec<Cell> = match suite {
        Suite::Acceptance => search::acceptance_cells(),
        Suite::Stretch => search::stretch_cells(),
    };
    let rows = search::table(&cells, opts);
    let ok = rows.iter().all(|r| r.ok);
    for r in &rows {
        eprintln!(
            "{} q={} n={} {} k={}: value {:?} construction {:?} formula {:?}{}",
            if r.ok { "ok  " } else { "FAIL" },
            r.cell.q,
            r.cell.n,
            r.cell.class,
            r.cell.k,
            r.value,
            r.construction,
            r.formula.map(|f| f.value),
            if r.notes.is_empty() {
                String::new()
            } else {
                format!(" ({})", r.notes.join("; "))
            }
        );
    }
    Ok(json!({"v": 1, "budget_nodes": opts.budget_nodes, "rows": rows, "ok": ok}))
}

fn certify(set: &Path, out: &Path) -> Outcome {
    let s = read_set(set)?;
    let class = s.form().classify();
    let kl = s.kl_verdict(3, 2, search::DEFAULT_BUDGET_NODES)?;
    let cert = json!({
        "v": 1,
        "set": s.to_record(),
        "size": s.len(),
        "class": class,
        "kind": class.kind(),
        "orthogonal": s.is_orthogonal_set(),
        "kl_3_2": kl,
        "maximal_3_2": kl.holds && s.is_maximal_32(),
    });
    fs::write(out, serde_json::to_string_pretty(&cert)? + "\n")?;
    Ok(cert)
}
