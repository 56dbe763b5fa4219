use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hforest::canonical::{
    classify_2forest, classify_2tree_nested, t_nested, CanonicalName, Polarity,
};
use hforest::forest::{h_leq, meet, normalize};
use hforest::nested::flatten;
use hforest::ordinal::Ordinal;
use hforest::par::{self, Exec};
use hforest::reduce::degree_poset;
use hforest::space::{
    dh_witness, fh_witness, hierarchy_report, is_reduced, reduce_family, Base, FamilyMode,
    FiniteSpace, KPartition, LevelSource, OmegaBase, SpaceError, SubSet,
};
use hforest::suites::{self, SuiteConfig};
use hforest::term::parse_term;
use hforest::Forest;

#[derive(Parser)]
#[command(
    name = "hforest",
    version,
    about = "h-preorder on labeled forests and hierarchies of k-partitions"
)]
struct Cli {
    /// Run every sweep on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Decide `lhs ≤_h rhs` and `rhs ≤_h lhs`.
    Compare(Pair),
    /// Greatest lower bound of two forests.
    Meet(Pair),
    /// Least upper bound (disjoint union) of two forests.
    Join(Pair),
    /// Canonical representative of the h-class.
    Normalize(One),
    /// Name a 2-forest by a canonical tree.
    Classify {
        #[command(flatten)]
        input: One,
        /// Largest canonical tree tried for nested input, in total nodes.
        /// Defaults to twice the size of the normal form, at least 8.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// The canonical tree for an ordinal notation (`w` stands for Ω).
    Canonical {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = Pol::Plain)]
        polarity: Pol,
        #[arg(long, value_enum, default_value_t = Emit::Term)]
        emit: Emit,
    },
    /// The labeled n-preorder of an iterated forest.
    Flatten {
        #[arg(long)]
        forest: String,
        /// Number of layers; defaults to the nesting level.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Parse a forest term or an ordinal notation and echo its structure.
    Parse {
        #[arg(long, required_unless_present = "alpha")]
        forest: Option<String>,
        #[arg(long, conflicts_with = "forest")]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
    /// Membership of a partition in the level of a flat forest.
    DhCheck(Check),
    /// Membership of a partition in the level of an iterated forest.
    FhCheck(Check),
    /// Reduction property of a base, and a reduced witness on request.
    ReduceCheck {
        #[command(flatten)]
        src: Source,
        #[arg(long, requires = "forest")]
        partition: Option<String>,
        #[arg(long, requires = "partition")]
        forest: Option<String>,
        #[arg(long)]
        k: Option<u8>,
    },
    /// Wadge-style degrees of k-partitions of a finite space.
    Degrees {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 2)]
        k: u8,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        #[arg(long)]
        override_size_guard: bool,
    },
    /// Levels, inclusions and constituents for a list of forests.
    Report {
        #[command(flatten)]
        src: Source,
        /// Repeat for each forest.
        #[arg(long, required = true)]
        forest: Vec<String>,
        #[arg(long, default_value_t = 2)]
        k: u8,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
    /// Run the oracle suites.
    Selftest {
        #[arg(long, value_enum, default_value_t = Scope::Fast)]
        scope: Scope,
        /// Run only these suites, e.g. `--suite A2 --suite A9`.
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long, hide = true)]
        inject_broken_meet: bool,
    },
}

#[derive(Args)]
struct Pair {
    #[arg(long)]
    lhs: String,
    #[arg(long)]
    rhs: String,
    #[arg(long, value_enum, default_value_t = Emit::Term)]
    emit: Emit,
}

#[derive(Args)]
struct One {
    #[arg(long)]
    forest: String,
    #[arg(long, value_enum, default_value_t = Emit::Term)]
    emit: Emit,
}

/// Where the base sets come from.
#[derive(Args)]
struct Source {
    /// Space JSON `{"points": n, "le": [[i, j], ...]}`, file or inline.
    #[arg(long)]
    space: Option<String>,
    /// `upsets`, `powerset`, or a list of point lists.
    #[arg(long)]
    base: Option<String>,
    /// A list of bases, one per level.
    #[arg(long)]
    omega_base: Option<String>,
    #[arg(long)]
    override_size_guard: bool,
}

#[derive(Args)]
struct Check {
    #[command(flatten)]
    src: Source,
    /// `"0110"`, `[0, 1, 1, 0]` or `{"labels": [...]}`, file or inline.
    #[arg(long)]
    partition: String,
    #[arg(long)]
    forest: String,
    /// Number of colors; inferred from the partition when absent.
    #[arg(long)]
    k: Option<u8>,
    /// Include a witnessing family.
    #[arg(long)]
    witness: bool,
    /// Restrict the witness search to reduced families.
    #[arg(long, requires = "witness")]
    reduced: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Dot,
    Term,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pol {
    Plain,
    Bar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    Fast,
    Full,
}

enum Failure {
    /// Exit 1: the inputs parse but violate a precondition.
    Domain(String),
    /// Exit 2: malformed input.
    Parse(String),
}

impl From<SpaceError> for Failure {
    fn from(e: SpaceError) -> Self {
        match e {
            SpaceError::Family(m) => Failure::Parse(m),
            e => Failure::Domain(e.to_string()),
        }
    }
}

type Out = Result<Output, Failure>;

enum Output {
    Json(Value),
    Text(String),
    /// Printed, then the process exits 1.
    Failed(Value),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.sequential {
        par::set_exec(Exec::Sequential);
    }
    let (doc, code) = match dispatch(cli.verb) {
        Ok(Output::Json(v)) => (render(&v), 0),
        Ok(Output::Text(s)) => (s, 0),
        Ok(Output::Failed(v)) => (render(&v), 1),
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
        Err(Failure::Parse(m)) => {
            eprintln!("parse error: {m}");
            return ExitCode::from(2);
        }
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(doc.as_bytes());
    if !doc.ends_with('\n') {
        let _ = stdout.write_all(b"\n");
    }
    ExitCode::from(code)
}

/// Single-line JSON with a space after every `:` and `,`.
fn render(v: &Value) -> String {
    struct Spaced;
    impl serde_json::ser::Formatter for Spaced {
        fn begin_array_value<W: ?Sized + std::io::Write>(
            &mut self,
            w: &mut W,
            first: bool,
        ) -> std::io::Result<()> {
            if first {
                Ok(())
            } else {
                w.write_all(b", ")
            }
        }
        fn begin_object_key<W: ?Sized + std::io::Write>(
            &mut self,
            w: &mut W,
            first: bool,
        ) -> std::io::Result<()> {
            if first {
                Ok(())
            } else {
                w.write_all(b", ")
            }
        }
        fn begin_object_value<W: ?Sized + std::io::Write>(
            &mut self,
            w: &mut W,
        ) -> std::io::Result<()> {
            w.write_all(b": ")
        }
    }
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Spaced);
    serde::Serialize::serialize(v, &mut ser).expect("in-memory write");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// The argument itself, or the contents of the file it names.
fn load(arg: &str) -> Result<String, Failure> {
    let p = Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).map_err(|e| Failure::Parse(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn json_input(arg: &str) -> Result<Value, Failure> {
    let src = load(arg)?;
    serde_json::from_str(&src).map_err(|e| Failure::Parse(format!("{arg}: {e}")))
}

/// A term, or a JSON forest when the text starts with `[`.
fn forest(arg: &str) -> Result<Forest, Failure> {
    let src = load(arg)?;
    let src = src.trim();
    if src.starts_with('[') {
        serde_json::from_str(src).map_err(|e| Failure::Parse(format!("forest JSON: {e}")))
    } else {
        parse_term(src).map_err(|e| Failure::Parse(e.to_string()))
    }
}

fn ordinal(arg: &str) -> Result<Ordinal, Failure> {
    arg.trim()
        .parse()
        .map_err(|e: hforest::ordinal::OrdinalParseError| {
            Failure::Parse(format!("ordinal at byte {}: {}", e.pos, e.msg))
        })
}

fn space(arg: &str) -> Result<FiniteSpace, Failure> {
    let v = json_input(arg)?;
    FiniteSpace::from_json(&v).map_err(Failure::Domain)
}

fn emit_forest(f: &Forest, emit: Emit) -> Output {
    match emit {
        Emit::Term => Output::Text(f.to_string()),
        Emit::Json => Output::Json(serde_json::to_value(f).expect("serializable")),
        Emit::Dot => Output::Text(f.to_dot()),
    }
}

fn base_sets(v: Value) -> Result<Vec<SubSet>, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Parse(format!("base JSON: {e}")))
}

impl Source {
    fn space(&self) -> Result<Option<FiniteSpace>, Failure> {
        self.space.as_deref().map(space).transpose()
    }

    /// The base named by `--base`, defaulting to the up-sets of `--space`.
    /// `n_hint` sizes `powerset` and list input when no space is given.
    fn base(&self, n_hint: Option<usize>) -> Result<Base, Failure> {
        let sp = self.space()?;
        let n = sp.as_ref().map(FiniteSpace::len).or(n_hint);
        match self.base.as_deref() {
            None | Some("upsets") => match sp {
                Some(sp) => Ok(sp.up_sets()),
                None => Err(Failure::Domain("the up-set base needs --space".into())),
            },
            Some("powerset") => match n {
                Some(n) => Ok(Base::powerset(n)),
                None => Err(Failure::Domain(
                    "the powerset base needs --space or --partition".into(),
                )),
            },
            Some(arg) => {
                let sets = base_sets(json_input(arg)?)?;
                let n = n.unwrap_or_else(|| {
                    sets.iter()
                        .filter_map(|s| s.points().max())
                        .max()
                        .map_or(0, |m| m + 1)
                });
                Ok(Base::new(n, sets)?)
            }
        }
    }

    fn omega(&self, n_hint: Option<usize>, levels: usize) -> Result<OmegaBase, Failure> {
        match self.omega_base.as_deref() {
            Some(arg) => {
                let v = json_input(arg)?;
                let raw: Vec<Value> = serde_json::from_value(v)
                    .map_err(|e| Failure::Parse(format!("omega base JSON: {e}")))?;
                let n = self.space()?.map(|s| s.len()).or(n_hint);
                let mut bases = Vec::new();
                for level in raw {
                    let sets = base_sets(level)?;
                    let n = n.unwrap_or_else(|| {
                        sets.iter()
                            .filter_map(|s| s.points().max())
                            .max()
                            .map_or(0, |m| m + 1)
                    });
                    bases.push(Base::new(n, sets)?);
                }
                Ok(OmegaBase::new(bases)?)
            }
            None => Ok(OmegaBase::generate(self.base(n_hint)?, levels)),
        }
    }
}

fn partition(arg: &str, k: Option<u8>) -> Result<KPartition, Failure> {
    Ok(KPartition::parse(&load(arg)?, k)?)
}

fn dispatch(verb: Verb) -> Out {
    match verb {
        Verb::Compare(p) => {
            let (a, b) = (forest(&p.lhs)?, forest(&p.rhs)?);
            Ok(Output::Json(
                json!({"h_leq": h_leq(&a, &b), "h_geq": h_leq(&b, &a)}),
            ))
        }
        Verb::Meet(p) => Ok(emit_forest(
            &meet(&forest(&p.lhs)?, &forest(&p.rhs)?),
            p.emit,
        )),
        Verb::Join(p) => Ok(emit_forest(
            &normalize(&forest(&p.lhs)?.join(&forest(&p.rhs)?)),
            p.emit,
        )),
        Verb::Normalize(o) => Ok(emit_forest(&normalize(&forest(&o.forest)?), o.emit)),
        Verb::Classify { input, bound } => {
            let f = forest(&input.forest)?;
            let name = if f.nesting_level() <= 1 {
                classify_2forest(&f).map_err(|e| Failure::Domain(e.to_string()))?
            } else {
                let bound = bound.unwrap_or_else(|| (2 * normalize(&f).total_size()).max(8));
                classify_2tree_nested(&f, bound).ok_or_else(|| {
                    Failure::Domain(format!(
                        "no canonical tree of at most {bound} nodes is equivalent"
                    ))
                })?
            };
            Ok(match input.emit {
                Emit::Json => Output::Json(name_json(&name)),
                Emit::Term => Output::Text(name.to_string()),
                Emit::Dot => Output::Text(name.representative().to_dot()),
            })
        }
        Verb::Canonical {
            alpha,
            polarity,
            emit,
        } => {
            let a = ordinal(&alpha)?;
            let pol = match polarity {
                Pol::Plain => Polarity::Plain,
                Pol::Bar => Polarity::Bar,
            };
            Ok(emit_forest(&t_nested(&a, pol), emit))
        }
        Verb::Flatten { forest: arg, level } => {
            let f = forest(&arg)?;
            let n = level.unwrap_or(f.nesting_level().max(1));
            let x = flatten(&f, n).map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(Output::Json(x.to_json()))
        }
        Verb::Parse {
            forest: arg,
            alpha,
            emit,
        } => {
            if let Some(a) = alpha {
                let a = ordinal(&a)?;
                return Ok(match emit {
                    Emit::Json => {
                        Output::Json(json!({"ordinal": a.to_string(), "finite": a.is_finite()}))
                    }
                    _ => Output::Text(a.to_string()),
                });
            }
            let f = forest(arg.as_deref().unwrap_or_default())?;
            Ok(match emit {
                Emit::Json => Output::Json(json!({
                    "term": f.to_string(),
                    "normal_form": normalize(&f).to_string(),
                    "nesting_level": f.nesting_level(),
                    "nodes": f.node_count(),
                    "forest": f,
                })),
                e => emit_forest(&f, e),
            })
        }
        Verb::DhCheck(c) => check(c, false),
        Verb::FhCheck(c) => check(c, true),
        Verb::ReduceCheck {
            src,
            partition: part,
            forest: fo,
            k,
        } => {
            let a = part.as_deref().map(|p| partition(p, k)).transpose()?;
            let base = src.base(a.as_ref().map(KPartition::len))?;
            let property = base.has_reduction_property();
            let mut doc = json!({"points": base.points(), "reduction_property": property});
            if let (Some(a), Some(fo)) = (a, fo) {
                let p = forest(&fo)?;
                match dh_witness(&a, &p, &base, FamilyMode::Any)? {
                    None => doc["member"] = json!(false),
                    Some(w) => {
                        doc["member"] = json!(true);
                        if property {
                            let r = reduce_family(&w, std::slice::from_ref(&base))?;
                            doc["reduced"] = json!(is_reduced(&r));
                            doc["family"] = r.to_json();
                        }
                    }
                }
            }
            Ok(Output::Json(doc))
        }
        Verb::Degrees {
            space: sp,
            k,
            emit,
            override_size_guard,
        } => {
            let d = degree_poset(&space(&sp)?, k, override_size_guard)?;
            Ok(match emit {
                Emit::Dot => Output::Text(d.to_dot()),
                _ => Output::Json(d.to_json()),
            })
        }
        Verb::Report {
            src,
            forest: fs,
            k,
            emit,
        } => {
            let fs: Vec<Forest> = fs.iter().map(|f| forest(f)).collect::<Result<_, _>>()?;
            let levels = fs
                .iter()
                .map(Forest::nesting_level)
                .max()
                .unwrap_or(1)
                .max(1);
            let nested = levels > 1 || src.omega_base.is_some();
            let level_src = if nested {
                LevelSource::Omega(src.omega(None, levels)?)
            } else {
                LevelSource::Base(src.base(None)?)
            };
            let r = hierarchy_report(&level_src, &fs, k, src.override_size_guard)?;
            Ok(match emit {
                Emit::Dot => Output::Text(r.to_dot()),
                _ => Output::Json(r.to_json()),
            })
        }
        Verb::Selftest {
            scope,
            suite,
            inject_broken_meet,
        } => {
            let ids: Vec<&str> = if suite.is_empty() {
                match scope {
                    Scope::Fast => suites::FAST.to_vec(),
                    Scope::Full => suites::ALL.to_vec(),
                }
            } else {
                suite.iter().map(String::as_str).collect()
            };
            if let Some(bad) = ids.iter().find(|id| !suites::ALL.contains(id)) {
                return Err(Failure::Parse(format!("unknown suite {bad}")));
            }
            let mut cfg = SuiteConfig::default();
            if inject_broken_meet {
                cfg.meet = suites::broken_meet;
            }
            let results = suites::run_all(&ids, &cfg);
            for r in &results {
                eprintln!("{}", r.line());
            }
            let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
            let doc = json!({"passed": failed.is_empty(), "failed": failed, "suites": results});
            Ok(if failed.is_empty() {
                Output::Json(doc)
            } else {
                Output::Failed(doc)
            })
        }
    }
}

fn name_json(name: &CanonicalName) -> Value {
    json!({"name": name.to_string(), "kind": name.kind, "index": name.index.to_string()})
}

fn check(c: Check, nested: bool) -> Out {
    let a = partition(&c.partition, c.k)?;
    let p = forest(&c.forest)?;
    hforest::space::guard(a.len(), a.k(), c.src.override_size_guard)?;
    let mode = if c.reduced {
        FamilyMode::Reduced
    } else {
        FamilyMode::Any
    };
    let w = if nested {
        let levels = p.nesting_level().max(1);
        fh_witness(&a, &p, &c.src.omega(Some(a.len()), levels)?, mode)?
    } else {
        if p.nesting_level() > 1 {
            return Err(Failure::Domain(
                "dh-check needs a flat forest; use fh-check".into(),
            ));
        }
        dh_witness(&a, &p, &c.src.base(Some(a.len()))?, mode)?
    };
    let mut doc =
        json!({"partition": a.to_string(), "forest": p.to_string(), "member": w.is_some()});
    if c.witness {
        doc["witness"] = w.map_or(Value::Null, |w| w.to_json());
    }
    Ok(Output::Json(doc))
}
